//! Datasets kept as files in one directory. The id of a dataset is its file
//! stem, so ids survive restarts.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bifold_core::Dataset;
use serde::Serialize;

use crate::error::ApiError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetSummary {
    pub id: String,
    pub name: String,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug)]
pub struct DatasetStore {
    dir: PathBuf,
}

const EXTENSIONS: [&str; 2] = ["csv", "json"];

/// Ids are plain file stems: no separators, no leading dot.
fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl DatasetStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn dataset_files(&self) -> Result<Vec<(String, PathBuf)>, ApiError> {
        let entries = fs::read_dir(&self.dir)
            .map_err(|e| ApiError::Internal(format!("cannot read dataset directory {}: {e}", self.dir.display())))?;
        let mut files = Vec::new();
        for entry in entries.flatten() {
            let path = entry.path();
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or_default();
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else { continue };
            if path.is_file() && EXTENSIONS.contains(&ext) && valid_id(stem) {
                files.push((stem.to_string(), path));
            }
        }
        files.sort();
        Ok(files)
    }

    fn parse_file(id: &str, path: &Path) -> Result<Dataset, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        Dataset::parse_auto(id, &text).map_err(|e| e.to_string())
    }

    /// Every parseable dataset file; unparseable ones are logged and skipped.
    /// When two files share a stem the first by extension wins.
    pub fn list(&self) -> Result<Vec<DatasetSummary>, ApiError> {
        let mut out: Vec<DatasetSummary> = Vec::new();
        for (id, path) in self.dataset_files()? {
            if out.last().is_some_and(|s| s.id == id) {
                continue;
            }
            match Self::parse_file(&id, &path) {
                Ok(d) => out.push(DatasetSummary {
                    id,
                    name: d.name().to_string(),
                    m: d.matrix().m(),
                    n: d.matrix().n(),
                }),
                Err(e) => tracing::warn!(file = %path.display(), error = %e, "skipping unreadable dataset"),
            }
        }
        Ok(out)
    }

    pub fn load(&self, id: &str) -> Result<Dataset, ApiError> {
        if !valid_id(id) {
            return Err(ApiError::NotFound(id.to_string()));
        }
        let path = EXTENSIONS
            .iter()
            .map(|ext| self.dir.join(format!("{id}.{ext}")))
            .find(|p| p.is_file())
            .ok_or_else(|| ApiError::NotFound(id.to_string()))?;
        Self::parse_file(id, &path).map_err(|e| ApiError::Internal(format!("dataset {id} is unreadable: {e}")))
    }

    /// Validates `body` as a dataset and writes it under a fresh `upload-N`
    /// id. The caller must hold exclusive access to the store.
    pub fn insert(&self, body: &str) -> Result<String, ApiError> {
        let is_json = body.trim_start().starts_with('{');
        // Parsed once for validation; the original text is what gets stored.
        Dataset::parse_auto("upload", body)?;
        let taken: Vec<String> = self.dataset_files()?.into_iter().map(|(id, _)| id).collect();
        let id = (1..)
            .map(|k| format!("upload-{k}"))
            .find(|id| !taken.contains(id))
            .expect("unbounded range");
        let path = self.dir.join(format!("{id}.{}", if is_json { "json" } else { "csv" }));
        let mut file = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| ApiError::Internal(e.to_string()))?;
        file.write_all(body.as_bytes()).map_err(|e| ApiError::Internal(e.to_string()))?;
        file.persist(&path).map_err(|e| ApiError::Internal(e.to_string()))?;
        Ok(id)
    }
}
