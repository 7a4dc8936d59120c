//! Tensor-train decompositions of dense and sparse tensors.
//!
//! The crate provides the deterministic TT-SVD, a randomized TT-SVD built
//! from nested Gaussian range sketches (with a sparse path whose cost grows
//! linearly in the order), TT rounding, an ALS half-sweep, and the random
//! tensor generators used to benchmark them.

pub mod als;
pub mod decompose;
pub mod error;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod tensor;
pub mod random;
pub mod tt;

pub use decompose::{DecompositionReport, OversamplingSpec, TensorRef};
pub use error::{Result, TtError};
pub use matrix::Matrix;
pub use tensor::{DenseTensor, ModeSet, Shape, SparseTensor};
pub use tt::{OrthoState, RankTuple, TtTensor};
