//! Pipeline and command-line front end for the wavelet co-occurrence
//! texture classifier.
//!
//! Everything here is ordinary std plumbing around [`wct_core`]: dataset
//! manifests, the synthetic corpus generator, per-image feature extraction,
//! the four experiment arms (wavelet/gray-level × SVM/BPN), block-level
//! region masks, and the report writers. Every run is driven by one root
//! seed; named sub-streams keep the stages independently reproducible.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod manifest;
pub mod model_file;
pub mod report;
pub mod seeds;
pub mod segment;
pub mod synth;

pub use error::{CliError, CliResult};
