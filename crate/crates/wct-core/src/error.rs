//! Crate-wide error type.

use alloc::boxed::Box;
use alloc::string::String;
use thiserror::Error;

use crate::imaging::PgmError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("block size {block} exceeds image dimensions {width}x{height}")]
    BlockTooLarge {
        block: usize,
        width: usize,
        height: usize,
    },

    #[error("{context}: length {len} must be even and at least 4")]
    BadSignalLength { context: &'static str, len: usize },

    #[error("{context}: {size} is not divisible by {required}")]
    NotDivisible {
        context: &'static str,
        size: usize,
        required: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("no pixel pairs fit offset ({dr},{dc}) in a {rows}x{cols} image")]
    EmptyPairs {
        dr: isize,
        dc: isize,
        rows: usize,
        cols: usize,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("label {0} is not +1 or -1")]
    BadLabel(i8),

    #[error("inconsistent dataset: {0}")]
    InconsistentDataset(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("confusion matrix has no counted cases")]
    EmptyConfusion,

    #[error("ROC analysis needs at least one case of each class")]
    OneClassRoc,

    #[error("class {label:+} has {count} members, fewer than the {k} folds requested")]
    ClassSmallerThanFolds { label: i8, count: usize, k: usize },

    #[error("fold {fold}: training split contains a single class")]
    SingleClassFold { fold: usize },

    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize },

    #[error("fitness evaluation failed at generation {generation}: {source}")]
    Evaluator {
        generation: usize,
        source: Box<Error>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
