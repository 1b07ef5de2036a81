//! Coordinate files (JSON, CSV) and a static SVG scatter plot.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, ObjectClass};
use crate::dissimilarity::Method;
use crate::embedding::EmbeddingResult;
use crate::error::{Error, Result};
use crate::joint::ScalingParams;

/// One embedded object in the coordinates document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectCoords {
    pub label: String,
    pub class: ObjectClass,
    pub category: Option<String>,
    pub coords: Vec<f64>,
}

/// The coordinates document shared by the CLI, the HTTP API and the demo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinatesDoc {
    pub dataset: String,
    pub method: Method,
    pub params: ScalingParams,
    pub dim: usize,
    pub stress: f64,
    pub iterations: usize,
    pub converged: bool,
    pub components: usize,
    pub objects: Vec<ObjectCoords>,
}

impl CoordinatesDoc {
    pub fn new(result: &EmbeddingResult, dataset: &Dataset, method: Method, params: ScalingParams) -> Result<Self> {
        check_sizes(result, dataset)?;
        let objects = (0..dataset.object_count())
            .map(|k| {
                let meta = &dataset.meta()[k];
                ObjectCoords {
                    label: dataset.label(k).to_string(),
                    class: meta.class,
                    category: meta.category.clone(),
                    coords: result.config.point(k),
                }
            })
            .collect();
        Ok(Self {
            dataset: dataset.name().to_string(),
            method,
            params,
            dim: result.config.dim(),
            stress: result.stress,
            iterations: result.iterations,
            converged: result.converged,
            components: result.components,
            objects,
        })
    }
}

fn check_sizes(result: &EmbeddingResult, dataset: &Dataset) -> Result<()> {
    if result.config.len() != dataset.object_count() {
        return Err(Error::DimensionMismatch(format!(
            "embedding has {} points, dataset has {} objects",
            result.config.len(),
            dataset.object_count()
        )));
    }
    Ok(())
}

pub fn to_coordinates_json(
    result: &EmbeddingResult,
    dataset: &Dataset,
    method: Method,
    params: ScalingParams,
) -> Result<String> {
    let doc = CoordinatesDoc::new(result, dataset, method, params)?;
    Ok(serde_json::to_string_pretty(&doc).expect("coordinates serialize"))
}

/// CSV with header `label,class,category,x1..xd`.
pub fn to_coordinates_csv(result: &EmbeddingResult, dataset: &Dataset) -> Result<String> {
    check_sizes(result, dataset)?;
    let dim = result.config.dim();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string(), "class".into(), "category".into()];
    header.extend((1..=dim).map(|a| format!("x{a}")));
    writer.write_record(&header).expect("in-memory write");
    for k in 0..dataset.object_count() {
        let meta = &dataset.meta()[k];
        let mut record = vec![
            dataset.label(k).to_string(),
            meta.class.to_string(),
            meta.category.clone().unwrap_or_default(),
        ];
        record.extend(result.config.point(k).iter().map(|v| v.to_string()));
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).map_err(|e| Error::Schema(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    pub show_labels: bool,
    /// Row/column index pairs drawn as lines beneath the markers.
    pub edges: Vec<(usize, usize)>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self {
            width: 800,
            height: 800,
            show_labels: true,
            edges: Vec::new(),
        }
    }
}

impl PlotSpec {
    /// Connects every related row/column pair of the dataset.
    pub fn with_all_edges(mut self, dataset: &Dataset) -> Self {
        self.edges = dataset.matrix().edges();
        self
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#bcbd22", "#7f7f7f",
];
const ROW_COLOR: &str = "#3b6fb6";
const COLUMN_COLOR: &str = "#d9822b";
const MARGIN: f64 = 40.0;
const MARKER_RADIUS: f64 = 5.0;

/// FNV-1a, stable across platforms and releases.
fn category_hash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn category_color(category: &str) -> &'static str {
    PALETTE[(category_hash(category) % PALETTE.len() as u64) as usize]
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Scatter plot of the first two axes: circles for row objects, squares for
/// column objects, coloured by category. Both axes share one scale so plotted
/// distances are comparable in every direction. A one-dimensional embedding is
/// drawn against a zero second axis.
pub fn to_svg(result: &EmbeddingResult, dataset: &Dataset, spec: &PlotSpec) -> Result<String> {
    check_sizes(result, dataset)?;
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::InvalidParameter("plot width and height must be positive".into()));
    }
    let (m, n) = (dataset.matrix().m(), dataset.matrix().n());
    if let Some(&(i, j)) = spec.edges.iter().find(|&&(i, j)| i >= m || j >= n) {
        return Err(Error::InvalidParameter(format!("edge ({i}, {j}) out of range")));
    }

    let coords = result.config.coords();
    let dim = coords.ncols();
    let xy = |k: usize| {
        let x = if dim > 0 { coords[(k, 0)] } else { 0.0 };
        let y = if dim > 1 { coords[(k, 1)] } else { 0.0 };
        (x, y)
    };
    let count = dataset.object_count();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..count {
        let (x, y) = xy(k);
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let scale = ((w - 2.0 * MARGIN).min(h - 2.0 * MARGIN)).max(1.0) / span;
    let (cx, cy) = ((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    // Screen y grows downward.
    let project = |k: usize| {
        let (x, y) = xy(k);
        (w / 2.0 + (x - cx) * scale, h / 2.0 - (y - cy) * scale)
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(dataset.name()));
    if dim < 2 {
        let _ = writeln!(svg, "<!-- one-dimensional embedding: second axis drawn as zero -->");
    }
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, spec.width, spec.height);

    let _ = writeln!(svg, r##"<g class="edges" stroke="#999999" stroke-width="0.6" stroke-opacity="0.6">"##);
    for &(i, j) in &spec.edges {
        let (x1, y1) = project(i);
        let (x2, y2) = project(m + j);
        let _ = writeln!(svg, r#"<line class="edge" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g class="markers" stroke="#222222" stroke-width="0.8">"##);
    for k in 0..count {
        let meta = &dataset.meta()[k];
        let fill = match (&meta.display_color, &meta.category) {
            (Some(color), _) => escape(color),
            (None, Some(cat)) => category_color(cat).to_string(),
            (None, None) if meta.class == ObjectClass::Row => ROW_COLOR.to_string(),
            (None, None) => COLUMN_COLOR.to_string(),
        };
        let (x, y) = project(k);
        let label = escape(dataset.label(k));
        match meta.class {
            ObjectClass::Row => {
                let _ = writeln!(
                    svg,
                    r#"<circle class="marker row" cx="{x:.2}" cy="{y:.2}" r="{MARKER_RADIUS}" fill="{fill}"><title>{label}</title></circle>"#
                );
            }
            ObjectClass::Column => {
                let side = 2.0 * MARKER_RADIUS;
                let _ = writeln!(
                    svg,
                    r#"<rect class="marker column" x="{:.2}" y="{:.2}" width="{side}" height="{side}" fill="{fill}"><title>{label}</title></rect>"#,
                    x - MARKER_RADIUS,
                    y - MARKER_RADIUS
                );
            }
        }
    }
    let _ = writeln!(svg, "</g>");

    if spec.show_labels {
        let _ = writeln!(svg, r##"<g class="labels" font-family="sans-serif" font-size="10" fill="#333333">"##);
        for k in 0..count {
            let (x, y) = project(k);
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                x + MARKER_RADIUS + 2.0,
                y - MARKER_RADIUS,
                escape(dataset.label(k))
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(
        svg,
        r##"<text x="8" y="{:.0}" font-family="sans-serif" font-size="11" fill="#555555">stress {:.6}</text>"##,
        h - 8.0,
        result.stress
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
