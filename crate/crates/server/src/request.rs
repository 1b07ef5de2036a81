use bifold_core::dataset::DatasetJson;
use bifold_core::{default_params, Dataset, EmbeddingConfig, Method, MethodOptions, ScalingParams};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::ApiError;
use crate::store::DatasetStore;

pub(crate) fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("invalid request body: {e}")))
}

/// Body of `POST /api/embed`. Exactly one of `dataset_id` and `dataset` must
/// be given; omitted scaling parameters take the method's defaults.
#[derive(Debug, Clone, Deserialize)]
pub struct EmbedRequest {
    #[serde(flatten)]
    pub source: Source,
    #[serde(flatten)]
    pub settings: Settings,
}

/// Body of `POST /api/sweep`: an embed request plus the dimensions to try.
#[derive(Debug, Clone, Deserialize)]
pub struct SweepRequest {
    #[serde(flatten)]
    pub source: Source,
    #[serde(flatten)]
    pub settings: Settings,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Source {
    pub dataset_id: Option<String>,
    pub dataset: Option<serde_json::Value>,
}

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
}

impl Source {
    pub(crate) fn resolve(&self, store: &DatasetStore) -> Result<Dataset, ApiError> {
        match (&self.dataset_id, &self.dataset) {
            (Some(id), None) => store.load(id),
            (None, Some(inline)) => {
                let mut raw: DatasetJson = serde_json::from_value(inline.clone())
                    .map_err(|e| ApiError::BadRequest(format!("invalid inline dataset: {e}")))?;
                if raw.name.is_empty() {
                    raw.name = "inline".into();
                }
                Ok(Dataset::try_from(raw)?)
            }
            (Some(_), Some(_)) => Err(ApiError::BadRequest("give either dataset_id or dataset, not both".into())),
            (None, None) => Err(ApiError::BadRequest("one of dataset_id or dataset is required".into())),
        }
    }
}

impl Settings {
    pub(crate) fn resolve(&self, dataset: &Dataset) -> Result<(Method, ScalingParams, MethodOptions, EmbeddingConfig), ApiError> {
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
        let options = MethodOptions { inverted_membership_weights: self.inverted_membership_weights };
        Ok((self.method, params, options, cfg))
    }
}
