//! Joint embedding of both object classes of a binary bipartite dataset.
//!
//! Row objects and column objects are placed in one low-dimensional space by
//! minimizing a weighted stress over a joint dissimilarity matrix that fuses
//! row-to-row, column-to-column and row-to-column dissimilarities:
//!
//! ```text
//! Delta = | ax * Dx          axy * Dxy + beta |      W = | Wx   Wxy |
//!         | axy * Dxy' + beta  ay * Dy        |          | Wxy' Wy  |
//! ```
//!
//! The pipeline is [`dissimilarity`] -> [`joint`] -> [`embedding`] ->
//! [`render`].

pub mod dataset;
pub mod dissimilarity;
pub mod embedding;
pub mod error;
pub mod joint;
pub mod render;
pub mod sample;

pub use dataset::{BinaryRelationMatrix, Cell, Dataset, ObjectClass, ObjectMeta};
pub use dissimilarity::{Method, MethodOptions};
pub use embedding::{embed, sweep, Configuration, EmbeddingConfig, EmbeddingResult, SweepResult};
pub use error::{Error, ErrorKind, Result};
pub use joint::{default_params, JointProblem, ScalingParams};
