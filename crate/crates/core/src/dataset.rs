//! Binary relation data model and its CSV / JSON file formats.
//!
//! A dataset is an `m x n` grid over {1, 0, missing} with mandatory, unique
//! labels for both object classes. Values are immutable once constructed.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    One,
    Zero,
    Missing,
}

impl Cell {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    /// `Some(0.0 | 1.0)` for observed cells.
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::One => Some(1.0),
            Cell::Zero => Some(0.0),
            Cell::Missing => None,
        }
    }

    pub fn is_one(self) -> bool {
        self == Cell::One
    }

    pub fn is_missing(self) -> bool {
        self == Cell::Missing
    }

    fn parse_token(token: &str) -> Option<Self> {
        match token.trim() {
            "1" => Some(Cell::One),
            "0" => Some(Cell::Zero),
            "" | "NA" => Some(Cell::Missing),
            _ => None,
        }
    }

    fn csv_token(self) -> &'static str {
        match self {
            Cell::One => "1",
            Cell::Zero => "0",
            Cell::Missing => "NA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectClass {
    Row,
    Column,
}

impl ObjectClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectClass::Row => "row",
            ObjectClass::Column => "column",
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            ObjectClass::Row => ObjectClass::Column,
            ObjectClass::Column => ObjectClass::Row,
        }
    }
}

impl fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The `m x n` biadjacency grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRelationMatrix {
    m: usize,
    n: usize,
    cells: Vec<Cell>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl BinaryRelationMatrix {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        let m = row_labels.len();
        let n = col_labels.len();
        if rows.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} row labels but {} rows of cells",
                m,
                rows.len()
            )));
        }
        let mut cells = Vec::with_capacity(m * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::RaggedRow {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
            cells.extend(r);
        }
        Self::from_parts(row_labels, col_labels, cells)
    }

    fn from_parts(row_labels: Vec<String>, col_labels: Vec<String>, cells: Vec<Cell>) -> Result<Self> {
        let m = row_labels.len();
        let n = col_labels.len();
        if m < 2 || n < 2 {
            return Err(Error::TooSmall { m, n });
        }
        debug_assert_eq!(cells.len(), m * n);
        check_labels(&row_labels, "row")?;
        check_labels(&col_labels, "column")?;
        Ok(Self {
            m,
            n,
            cells,
            row_labels,
            col_labels,
        })
    }

    /// Builds a matrix from 0/1 rows with synthetic labels `r0.., c0..`.
    pub fn from_bits<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let grid = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&b| Cell::from_bit(b != 0)).collect())
            .collect();
        Self::from_cells(grid)
    }

    /// Builds a matrix from a cell grid with synthetic labels `r0.., c0..`.
    pub fn from_cells(grid: Vec<Vec<Cell>>) -> Result<Self> {
        let m = grid.len();
        let n = grid.first().map_or(0, Vec::len);
        Self::new(synthetic_labels("r", m), synthetic_labels("c", n), grid)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of objects in a class.
    pub fn len(&self, class: ObjectClass) -> usize {
        match class {
            ObjectClass::Row => self.m,
            ObjectClass::Column => self.n,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    /// The data vector of object `index` in `class`: a row of the grid for
    /// row objects, a column for column objects.
    pub fn profile(&self, class: ObjectClass, index: usize) -> Vec<Cell> {
        match class {
            ObjectClass::Row => self.row(index).to_vec(),
            ObjectClass::Column => (0..self.m).map(|i| self.get(i, index)).collect(),
        }
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn labels(&self, class: ObjectClass) -> &[String] {
        match class {
            ObjectClass::Row => &self.row_labels,
            ObjectClass::Column => &self.col_labels,
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn has_missing(&self) -> bool {
        self.cells.iter().any(|c| c.is_missing())
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|c| c.is_one()).count()
    }

    /// All `(i, j)` with a ONE cell, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j).is_one())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in 0..self.n {
            for i in 0..self.m {
                cells.push(self.get(i, j));
            }
        }
        Self {
            m: self.n,
            n: self.m,
            cells,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }
}

fn synthetic_labels(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|k| format!("{prefix}{k}")).collect()
}

fn check_labels(labels: &[String], class: &'static str) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if label.is_empty() {
            return Err(Error::Schema(format!("empty {class} label")));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel {
                class,
                label: label.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectMeta {
    pub class: ObjectClass,
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_color: Option<String>,
}

impl ObjectMeta {
    pub fn plain(class: ObjectClass, index: usize) -> Self {
        Self {
            class,
            index,
            category: None,
            display_color: None,
        }
    }

    fn is_plain(&self) -> bool {
        self.category.is_none() && self.display_color.is_none()
    }
}

/// A validated matrix plus per-object metadata. `meta` holds the `m` row
/// objects first, then the `n` column objects, matching the joint index order
/// used throughout the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    matrix: BinaryRelationMatrix,
    meta: Vec<ObjectMeta>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, matrix: BinaryRelationMatrix) -> Self {
        let meta = (0..matrix.m())
            .map(|i| ObjectMeta::plain(ObjectClass::Row, i))
            .chain((0..matrix.n()).map(|j| ObjectMeta::plain(ObjectClass::Column, j)))
            .collect();
        Self {
            name: name.into(),
            matrix,
            meta,
        }
    }

    /// Merges partial metadata into the default entries. Each object may be
    /// described at most once.
    pub fn with_meta(mut self, entries: Vec<ObjectMeta>) -> Result<Self> {
        let mut seen = HashSet::new();
        for entry in entries {
            let len = self.matrix.len(entry.class);
            if entry.index >= len {
                return Err(Error::InvalidMeta(format!(
                    "{} index {} out of range (size {len})",
                    entry.class, entry.index
                )));
            }
            if !seen.insert((entry.class, entry.index)) {
                return Err(Error::InvalidMeta(format!(
                    "{} {} described twice",
                    entry.class, entry.index
                )));
            }
            let slot = self.joint_index(entry.class, entry.index);
            self.meta[slot] = entry;
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &BinaryRelationMatrix {
        &self.matrix
    }

    pub fn meta(&self) -> &[ObjectMeta] {
        &self.meta
    }

    pub fn object_count(&self) -> usize {
        self.matrix.m() + self.matrix.n()
    }

    /// Position of an object in the joint `(m + n)` ordering.
    pub fn joint_index(&self, class: ObjectClass, index: usize) -> usize {
        match class {
            ObjectClass::Row => index,
            ObjectClass::Column => self.matrix.m() + index,
        }
    }

    /// Label of the object at joint index `k`.
    pub fn label(&self, k: usize) -> &str {
        let m = self.matrix.m();
        if k < m {
            &self.matrix.row_labels()[k]
        } else {
            &self.matrix.col_labels()[k - m]
        }
    }

    pub fn transpose(&self) -> Self {
        let m = self.matrix.m();
        let swap = |e: &ObjectMeta| ObjectMeta {
            class: e.class.swapped(),
            ..e.clone()
        };
        let meta = self.meta[m..].iter().chain(&self.meta[..m]).map(swap).collect();
        Self {
            name: self.name.clone(),
            matrix: self.matrix.transpose(),
            meta,
        }
    }

    /// Parses the CSV layout: a header row of column labels (the top-left
    /// cell is ignored), then one row per row object starting with its label.
    /// Cells are `1`, `0`, or empty / `NA` for missing.
    pub fn from_csv(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        let header = match records.next() {
            Some(r) => r.map_err(|e| Error::Schema(e.to_string()))?,
            None => return Err(Error::TooSmall { m: 0, n: 0 }),
        };
        let col_labels: Vec<String> = header.iter().skip(1).map(|s| s.trim().to_string()).collect();
        let n = col_labels.len();
        let mut row_labels = Vec::new();
        let mut cells = Vec::new();
        for (row, record) in records.enumerate() {
            let record = record.map_err(|e| Error::Schema(e.to_string()))?;
            if record.len() != n + 1 {
                return Err(Error::RaggedRow {
                    row,
                    expected: n,
                    found: record.len().saturating_sub(1),
                });
            }
            row_labels.push(record[0].trim().to_string());
            for (col, token) in record.iter().skip(1).enumerate() {
                let cell = Cell::parse_token(token).ok_or_else(|| Error::InvalidCell {
                    row,
                    col,
                    token: token.to_string(),
                })?;
                cells.push(cell);
            }
        }
        let matrix = BinaryRelationMatrix::from_parts(row_labels, col_labels, cells)?;
        Ok(Self::new(name, matrix))
    }

    /// Writes the CSV layout accepted by [`Dataset::from_csv`]. Missing cells
    /// are written as `NA`; metadata is not part of the CSV format.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("").chain(self.matrix.col_labels().iter().map(String::as_str));
        writer.write_record(header).expect("in-memory write");
        for i in 0..self.matrix.m() {
            let record = std::iter::once(self.matrix.row_labels()[i].as_str())
                .chain(self.matrix.row(i).iter().map(|c| c.csv_token()));
            writer.write_record(record).expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("labels are UTF-8")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DatasetJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_json_value(raw)
    }

    fn from_json_value(raw: DatasetJson) -> Result<Self> {
        let rows = raw
            .cells
            .iter()
            .enumerate()
            .map(|(row, r)| {
                r.iter()
                    .enumerate()
                    .map(|(col, v)| match v {
                        Some(1) => Ok(Cell::One),
                        Some(0) => Ok(Cell::Zero),
                        None => Ok(Cell::Missing),
                        Some(other) => Err(Error::InvalidCell {
                            row,
                            col,
                            token: other.to_string(),
                        }),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = raw.row_labels.len();
        let n = raw.col_labels.len();
        if m < 2 || n < 2 || rows.len() < 2 {
            return Err(Error::TooSmall {
                m: m.min(rows.len()),
                n,
            });
        }
        let matrix = BinaryRelationMatrix::new(raw.row_labels, raw.col_labels, rows)?;
        let meta = raw
            .meta
            .into_iter()
            .map(|e| {
                let class = match e.class.as_str() {
                    "row" => ObjectClass::Row,
                    "column" => ObjectClass::Column,
                    _ => return Err(Error::UnknownClass(e.class)),
                };
                Ok(ObjectMeta {
                    class,
                    index: e.index,
                    category: e.category,
                    display_color: e.display_color,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.name, matrix).with_meta(meta)
    }

    /// JSON form: `{name, row_labels, col_labels, cells, meta}` with cells as
    /// `1`, `0` or `null`. Only objects carrying a category or colour appear
    /// in `meta`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("dataset serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let cells: Vec<Vec<Option<u8>>> = (0..self.matrix.m())
            .map(|i| {
                self.matrix
                    .row(i)
                    .iter()
                    .map(|c| c.value().map(|v| v as u8))
                    .collect()
            })
            .collect();
        let meta: Vec<&ObjectMeta> = self.meta.iter().filter(|e| !e.is_plain()).collect();
        serde_json::json!({
            "name": self.name,
            "row_labels": self.matrix.row_labels(),
            "col_labels": self.matrix.col_labels(),
            "cells": cells,
            "meta": meta,
        })
    }

    /// Parses either format, choosing JSON when the text starts with `{`.
    /// `name` is used for CSV input and for JSON input without a name.
    pub fn parse_auto(name: impl Into<String>, text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let mut dataset = Self::from_json(text)?;
            if dataset.name.is_empty() {
                dataset.name = name.into();
            }
            Ok(dataset)
        } else {
            Self::from_csv(name, text)
        }
    }
}

/// Wire representation of the JSON dataset format.
#[derive(Debug, Deserialize)]
pub struct DatasetJson {
    #[serde(default)]
    pub name: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub cells: Vec<Vec<Option<i64>>>,
    #[serde(default)]
    pub meta: Vec<MetaJson>,
}

#[derive(Debug, Deserialize)]
pub struct MetaJson {
    pub class: String,
    pub index: usize,
    #[serde(default)]
    pub category: Option<String>,
    #[serde(default)]
    pub display_color: Option<String>,
}

impl TryFrom<DatasetJson> for Dataset {
    type Error = Error;

    fn try_from(raw: DatasetJson) -> Result<Self> {
        Dataset::from_json_value(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAG: &str = ",a,b\nx,1,0\ny,0,1\n";

    #[test]
    fn parses_identity_grid() {
        let d = Dataset::from_csv("diag", DIAG).unwrap();
        let mtx = d.matrix();
        assert_eq!((mtx.m(), mtx.n()), (2, 2));
        assert_eq!(mtx.get(0, 0), Cell::One);
        assert_eq!(mtx.get(1, 1), Cell::One);
        assert_eq!(mtx.get(0, 1), Cell::Zero);
        assert_eq!(mtx.row_labels(), ["x", "y"]);
        assert_eq!(mtx.col_labels(), ["a", "b"]);
    }

    #[test]
    fn na_and_empty_are_missing() {
        let d = Dataset::from_csv("m", ",a,b\nx,NA,\ny,0,1\n").unwrap();
        assert_eq!(d.matrix().get(0, 0), Cell::Missing);
        assert_eq!(d.matrix().get(0, 1), Cell::Missing);
        assert!(d.matrix().has_missing());
    }

    #[test]
    fn csv_errors_are_distinct() {
        let ragged = Dataset::from_csv("e", ",a,b\nx,1\ny,0,1\n").unwrap_err();
        assert_eq!(ragged.code(), "RAGGED_ROW");
        let dup = Dataset::from_csv("e", ",a,b\nx,1,0\nx,0,1\n").unwrap_err();
        assert_eq!(dup.code(), "DUPLICATE_LABEL");
        let dup_col = Dataset::from_csv("e", ",a,a\nx,1,0\ny,0,1\n").unwrap_err();
        assert_eq!(dup_col.code(), "DUPLICATE_LABEL");
        let bad = Dataset::from_csv("e", ",a,b\nx,1,2\ny,0,1\n").unwrap_err();
        assert_eq!(
            bad,
            Error::InvalidCell {
                row: 0,
                col: 1,
                token: "2".into()
            }
        );
        let small = Dataset::from_csv("e", ",a,b\nx,1,0\n").unwrap_err();
        assert_eq!(small.code(), "TOO_SMALL");
        let narrow = Dataset::from_csv("e", ",a\nx,1\ny,0\n").unwrap_err();
        assert_eq!(narrow.code(), "TOO_SMALL");
    }

    #[test]
    fn json_basic_and_validation() {
        let d = Dataset::from_json(r#"{"name":"t","row_labels":["x","y"],"col_labels":["a","b"],"cells":[[1,0],[0,1]]}"#)
            .unwrap();
        assert_eq!((d.matrix().m(), d.matrix().n()), (2, 2));
        assert_eq!(d.name(), "t");

        let one_row = Dataset::from_json(r#"{"name":"t","row_labels":["x"],"col_labels":["a","b"],"cells":[[1,null]]}"#)
            .unwrap_err();
        assert_eq!(one_row.code(), "TOO_SMALL");

        let mismatch = Dataset::from_json(r#"{"name":"t","row_labels":["x","y","z"],"col_labels":["a","b"],"cells":[[1,0],[0,1]]}"#)
            .unwrap_err();
        assert_eq!(mismatch.code(), "DIMENSION_MISMATCH");

        let schema = Dataset::from_json(r#"{"name":"t","cells":[[1,0],[0,1]]}"#).unwrap_err();
        assert_eq!(schema.code(), "SCHEMA_VIOLATION");

        let class = Dataset::from_json(
            r#"{"name":"t","row_labels":["x","y"],"col_labels":["a","b"],"cells":[[1,0],[0,1]],
                "meta":[{"class":"party","index":0}]}"#,
        )
        .unwrap_err();
        assert_eq!(class.code(), "UNKNOWN_CLASS");
    }

    #[test]
    fn json_meta_passthrough() {
        let d = Dataset::from_json(
            r#"{"name":"t","row_labels":["x","y"],"col_labels":["a","b"],"cells":[[1,null],[0,1]],
                "meta":[{"class":"row","index":1,"category":"Republican"}]}"#,
        )
        .unwrap();
        assert_eq!(d.meta()[1].category.as_deref(), Some("Republican"));
        assert_eq!(d.meta()[0].category, None);
        assert_eq!(d.matrix().get(0, 1), Cell::Missing);
        let echoed = d.to_json();
        assert!(echoed.contains("Republican"));
        assert_eq!(Dataset::from_json(&echoed).unwrap(), d);
    }

    #[test]
    fn transpose_swaps_roles() {
        let d = Dataset::from_csv("m", ",a,b,c\nx,1,NA,0\ny,0,1,1\n")
            .unwrap()
            .with_meta(vec![ObjectMeta {
                class: ObjectClass::Column,
                index: 2,
                category: Some("spice".into()),
                display_color: None,
            }])
            .unwrap();
        let t = d.transpose();
        assert_eq!((t.matrix().m(), t.matrix().n()), (3, 2));
        assert_eq!(t.matrix().get(1, 0), Cell::Missing);
        assert_eq!(t.matrix().get(2, 1), Cell::One);
        assert_eq!(t.meta()[2].class, ObjectClass::Row);
        assert_eq!(t.meta()[2].category.as_deref(), Some("spice"));
        assert_eq!(t.meta()[3], ObjectMeta::plain(ObjectClass::Column, 0));
        assert_eq!(t.transpose(), d);
    }

    #[test]
    fn meta_validation() {
        let d = Dataset::from_csv("m", DIAG).unwrap();
        let err = d
            .clone()
            .with_meta(vec![ObjectMeta::plain(ObjectClass::Row, 5)])
            .unwrap_err();
        assert_eq!(err.code(), "INVALID_META");
        let err = d
            .with_meta(vec![
                ObjectMeta::plain(ObjectClass::Row, 0),
                ObjectMeta::plain(ObjectClass::Row, 0),
            ])
            .unwrap_err();
        assert_eq!(err.code(), "INVALID_META");
    }

    #[test]
    fn parse_auto_dispatches() {
        let csv = Dataset::parse_auto("x", DIAG).unwrap();
        let json = Dataset::parse_auto("ignored", &csv.to_json()).unwrap();
        assert_eq!(json.matrix(), csv.matrix());
    }
}
