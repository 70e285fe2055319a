//! Closed-form matrix product operator for the discrete Fourier transform.
//!
//! The DFT on `N = d^n` points, read as a tensor over output digits
//! `σ` (most significant first) and input digits `τ` (least significant
//! first), is built directly as an MPO whose cores come from
//! Chebyshev-Lobatto interpolation of the phase `e^{-2πixy}`. The crate also
//! provides the approximate QFT as an exact MPO, a small QTT engine for
//! applying either operator to quantized vectors, and the dense reference
//! transforms used to check them.

pub mod aqft;
pub mod cheb;
pub mod digits;
pub mod error;
pub mod mpo;
pub mod oracle;
pub mod qft;
pub mod qtt;
pub mod tensor;

pub use aqft::{aqft_entry, aqft_error_bound, assemble_aqft_mpo, build_aqft_core, AqftParams};
pub use cheb::{ek_bound, lebesgue_bound, ChebGrid, TargetFunction};
pub use digits::{digits_to_index, index_to_digits, BitString, SignificanceOrder};
pub use error::{Error, Result};
pub use mpo::{max_deviation, mpo_entry, Mpo, MpoKind, Sampling};
pub use oracle::{block_identity_check, dense_dft, fft, naive_dft, BlockReport};
pub use qft::{
    assemble_qft_mpo, build_internal_core, build_left_core, build_right_core,
    build_unfolding_factors, dft_entry, theorem_error_bound, TheoremBound, UnfoldingFactors,
};
pub use qtt::{apply_mpo, dense_to_mps, mps_to_dense, Mps};
pub use tensor::{contract, max_abs, svd_truncate, unfold, ComplexTensor, Truncation, C64};
