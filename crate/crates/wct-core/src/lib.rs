//! Texture classification of grayscale image blocks via wavelet co-occurrence
//! statistics.
//!
//! The crate implements the full analysis chain as pure, deterministic
//! functions over in-memory data:
//!
//! * [`imaging`] — PGM codec, gray-level quantization, block tiling
//! * [`wavelet`] — 2-D discrete wavelet transform (Daubechies order 2,
//!   periodic boundary) with exact reconstruction
//! * [`texture`] — direction-averaged co-occurrence matrices and the nine
//!   second-order texture features computed from them
//! * [`features`] — min–max normalization fitted on training data, labeled
//!   dataset container
//! * [`selection`] — genetic-algorithm wrapper feature selection over bit
//!   strings with a size-penalized fitness
//! * [`svm`] — binary SVM trained by sequential minimal optimization
//!   (linear, polynomial, Gaussian kernels)
//! * [`bpn`] — single-hidden-layer sigmoid network trained by full-batch
//!   backpropagation with momentum
//! * [`eval`] — confusion matrices, sensitivity/specificity/accuracy,
//!   stratified k-fold and leave-one-out cross-validation, ROC/AUC
//!
//! Everything is `no_std`-compatible (allocation required); enable the
//! `libm` feature instead of `std` on bare targets. All randomized
//! procedures take explicit seeds and are bit-reproducible across runs and
//! platforms.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("wct-core needs a float math backend: enable `std` or `libm`");

pub mod bpn;
pub mod error;
pub mod eval;
pub mod features;
pub mod imaging;
mod math;
pub mod selection;
pub mod svm;
pub mod texture;
pub mod wavelet;

pub use error::{Error, Result};
