//! Rate-distortion bounds and a detect-and-compress codec for Gaussian
//! mixture sources observed by multiple agents.
//!
//! A hidden semantic label `S` with weights `ω` drives `L` conditionally
//! Gaussian observations sharing a covariance `K_X`. The decoder must
//! reconstruct the label under log loss (budget `D_S`, in bits) and each
//! observation under mean squared error (budgets `D_X`). This crate computes
//! converse (outer) and achievability (inner) bounds on the sum rate and
//! simulates a practical cluster/quantize/Slepian-Wolf pipeline whose
//! operating points can be compared against both.
//!
//! The library is `no_std` + `alloc`; file IO, configuration, and the
//! experiment CLI live in the companion `gmrd-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod codec;
pub mod inner;
mod linalg;
pub mod mathkit;
pub mod outer;
pub mod source;

pub use inner::InnerBoundResult;
pub use mathkit::{Bits, Probability};
pub use outer::{DistortionBudget, OuterBoundResult, Region};
pub use source::{GaussianMixtureSpec, MeanLayout, SampleBlock};
