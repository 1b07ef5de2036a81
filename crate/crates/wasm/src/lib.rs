//! Browser bindings for the embedding engine.
//!
//! Every export takes and returns JSON strings so the page needs no glue
//! beyond `JSON.parse`. The plain-Rust functions in this module do the work
//! and are tested natively; the `#[wasm_bindgen]` wrappers only convert
//! errors into JavaScript exceptions.

use bifold_core::render::{to_svg, CoordinatesDoc, PlotSpec};
use bifold_core::{default_params, Dataset, EmbeddingConfig, Method, MethodOptions, ScalingParams};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Failure surfaced to the page as `CODE: message`.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoError {
    pub code: &'static str,
    pub message: String,
}

impl std::fmt::Display for DemoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<bifold_core::Error> for DemoError {
    fn from(e: bifold_core::Error) -> Self {
        Self {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

fn bad_json(what: &str, e: serde_json::Error) -> DemoError {
    DemoError {
        code: "BAD_REQUEST",
        message: format!("invalid {what}: {e}"),
    }
}

/// Options chosen in the page. Omitted scaling parameters take the method's
/// preset for the dataset's shape.
#[derive(Debug, Clone, Deserialize)]
pub struct Settings {
    pub method: Method,
    pub alpha_x: Option<f64>,
    pub alpha_y: Option<f64>,
    pub alpha_xy: Option<f64>,
    pub beta: Option<f64>,
    pub dim: Option<usize>,
    pub max_iter: Option<usize>,
    pub rel_tol: Option<f64>,
    pub restarts: Option<usize>,
    #[serde(default)]
    pub inverted_membership_weights: bool,
    #[serde(default = "yes")]
    pub show_edges: bool,
    #[serde(default = "yes")]
    pub show_labels: bool,
}

fn yes() -> bool {
    true
}

impl Settings {
    fn resolve(&self, dataset: &Dataset) -> Result<(ScalingParams, MethodOptions, EmbeddingConfig), DemoError> {
        let defaults = default_params(self.method, dataset.matrix().m(), dataset.matrix().n());
        let params = ScalingParams {
            alpha_x: self.alpha_x.unwrap_or(defaults.alpha_x),
            alpha_y: self.alpha_y.unwrap_or(defaults.alpha_y),
            alpha_xy: self.alpha_xy.unwrap_or(defaults.alpha_xy),
            beta: self.beta.unwrap_or(defaults.beta),
        };
        params.validate()?;
        let base = EmbeddingConfig::default();
        let cfg = EmbeddingConfig {
            dim: self.dim.unwrap_or(base.dim),
            max_iter: self.max_iter.unwrap_or(base.max_iter),
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            restarts: self.restarts.unwrap_or(base.restarts),
        };
        cfg.validate()?;
        let options = MethodOptions {
            inverted_membership_weights: self.inverted_membership_weights,
        };
        Ok((params, options, cfg))
    }
}

#[derive(Debug, Serialize)]
pub struct EmbedOutput {
    pub coordinates: CoordinatesDoc,
    pub stress_trace: Vec<f64>,
    pub svg: String,
}

fn parse_dataset(text: &str) -> Result<Dataset, DemoError> {
    Ok(Dataset::parse_auto("dataset", text)?)
}

fn parse_settings(text: &str) -> Result<Settings, DemoError> {
    serde_json::from_str(text).map_err(|e| bad_json("settings", e))
}

/// The built-in Southern Women table in the JSON dataset format.
pub fn sample_dataset_json() -> String {
    bifold_core::sample::southern_women().to_json()
}

/// Preset scaling parameters of `method` for the given dataset.
pub fn preset_params_json(dataset: &str, method: &str) -> Result<String, DemoError> {
    let dataset = parse_dataset(dataset)?;
    let method: Method = method.parse()?;
    let params = default_params(method, dataset.matrix().m(), dataset.matrix().n());
    Ok(serde_json::to_string(&params).expect("params serialize"))
}

/// Embeds and renders; returns `{coordinates, stress_trace, svg}`.
pub fn embed_json(dataset: &str, settings: &str) -> Result<String, DemoError> {
    let dataset = parse_dataset(dataset)?;
    let settings = parse_settings(settings)?;
    let (params, options, cfg) = settings.resolve(&dataset)?;
    let result = bifold_core::embed(&dataset, settings.method, params, options, &cfg)?;
    let mut spec = PlotSpec {
        show_labels: settings.show_labels,
        ..PlotSpec::default()
    };
    if settings.show_edges {
        spec = spec.with_all_edges(&dataset);
    }
    let out = EmbedOutput {
        svg: to_svg(&result, &dataset, &spec)?,
        coordinates: CoordinatesDoc::new(&result, &dataset, settings.method, params)?,
        stress_trace: result.stress_trace,
    };
    Ok(serde_json::to_string(&out).expect("output serializes"))
}

/// Final stress per dimension; returns `{dims, stresses, normalized_stresses}`.
pub fn sweep_json(dataset: &str, settings: &str, dims: &[usize]) -> Result<String, DemoError> {
    let dataset = parse_dataset(dataset)?;
    let settings = parse_settings(settings)?;
    let (params, options, cfg) = settings.resolve(&dataset)?;
    let result = bifold_core::sweep(&dataset, settings.method, params, options, &cfg, dims)?;
    Ok(serde_json::to_string(&result).expect("sweep serializes"))
}

fn js(e: DemoError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = sampleDataset)]
pub fn sample_dataset() -> String {
    sample_dataset_json()
}

#[wasm_bindgen(js_name = presetParams)]
pub fn preset_params(dataset: &str, method: &str) -> Result<String, JsError> {
    preset_params_json(dataset, method).map_err(js)
}

#[wasm_bindgen]
pub fn embed(dataset: &str, settings: &str) -> Result<String, JsError> {
    embed_json(dataset, settings).map_err(js)
}

#[wasm_bindgen]
pub fn sweep(dataset: &str, settings: &str, dims: Vec<usize>) -> Result<String, JsError> {
    sweep_json(dataset, settings, &dims).map_err(js)
}
