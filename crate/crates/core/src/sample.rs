//! Built-in datasets for tests, examples and the browser demo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{BinaryRelationMatrix, Cell, Dataset, ObjectClass, ObjectMeta};

const SOUTHERN_WOMEN_CSV: &str = include_str!("../data/southern_women.csv");

/// Consensus two-group split of the 18 women: the first nine form one
/// clique, the last nine the other.
pub const SOUTHERN_WOMEN_GROUPS: [u8; 18] = [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1];

/// The 18 x 14 women-by-event attendance table, with each woman tagged by
/// her group.
pub fn southern_women() -> Dataset {
    let meta = SOUTHERN_WOMEN_GROUPS
        .iter()
        .enumerate()
        .map(|(i, &g)| ObjectMeta {
            category: Some(format!("group {}", g + 1)),
            ..ObjectMeta::plain(ObjectClass::Row, i)
        })
        .collect();
    Dataset::from_csv("southern-women", SOUTHERN_WOMEN_CSV)
        .and_then(|d| d.with_meta(meta))
        .expect("bundled table is valid")
}

pub fn southern_women_csv() -> &'static str {
    SOUTHERN_WOMEN_CSV
}

/// Random association table where each cell is ONE with probability
/// `density`. Every row and column is given at least one ONE so no object is
/// isolated outright.
pub fn sparse_membership(m: usize, n: usize, density: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid: Vec<Vec<Cell>> = (0..m)
        .map(|_| (0..n).map(|_| Cell::from_bit(rng.random_bool(density))).collect())
        .collect();
    for (i, row) in grid.iter_mut().enumerate() {
        if !row.iter().any(|c| c.is_one()) {
            row[i % n] = Cell::One;
        }
    }
    for j in 0..n {
        if !grid.iter().any(|row| row[j].is_one()) {
            grid[j % m][j] = Cell::One;
        }
    }
    let matrix = BinaryRelationMatrix::from_cells(grid).expect("m, n >= 2");
    Dataset::new(format!("sparse-{m}x{n}"), matrix)
}

/// Random table with a fraction of cells blanked out as missing.
pub fn with_missing(dataset: &Dataset, fraction: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = dataset.matrix();
    let grid = (0..matrix.m())
        .map(|i| {
            matrix
                .row(i)
                .iter()
                .map(|&c| if rng.random_bool(fraction) { Cell::Missing } else { c })
                .collect()
        })
        .collect();
    let blanked = BinaryRelationMatrix::new(matrix.row_labels().to_vec(), matrix.col_labels().to_vec(), grid)
        .expect("same shape");
    Dataset::new(dataset.name(), blanked)
        .with_meta(dataset.meta().to_vec())
        .expect("same objects")
}
