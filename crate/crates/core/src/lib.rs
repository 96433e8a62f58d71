//! Analytic paraproducts `M_g`, `S_g`, `T_g` and their compositions ("g-words")
//! acting on truncated power series, together with the numerical machinery
//! needed to test norm estimates for them on weighted Bergman spaces
//! `A^p_{ω^{p/2}}` with smooth rapidly decreasing radial weights `ω = e^{-2φ}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: the weight family `ω_n(r) = exp(-2 exp_n(c (1-r²)^{-α}))`,
//!   its derivatives, the auxiliary radius function `τ`, path metrics and
//!   numerical self-checks.
//! * [`series`]: truncated complex power series, the representation of
//!   analytic functions every operator acts on.
//! * [`paraproducts`]: the three letters, word application and the exact
//!   integer decomposition of a word into the `S^k T^n` basis.
//! * [`norms`]: Bergman quasinorms, Bloch-type seminorms, growth norms and
//!   related functionals, all computed in log domain.
//! * [`kernel`]: moments and Bergman reproducing kernels of `A²_ω`.
//! * [`harness`]: restricted operator-norm estimation and the experiment
//!   drivers producing [`harness::ExperimentReport`]s.
//!
//! Operator application order: a word `L = L_1 L_2 ⋯ L_N` acts as
//! `L f = L_1(L_2(⋯(L_N f)))`, i.e. the leftmost letter is applied last.

pub mod error;
pub mod harness;
pub mod kernel;
pub mod norms;
pub mod paraproducts;
pub mod quad;
pub mod series;
pub mod weights;

pub use error::{Error, Result};
pub use kernel::{KernelHandle, MomentTable};
pub use norms::{NormEstimate, QuadratureConfig, WeightModifier};
pub use paraproducts::{CanonicalForm, Letter, Word};
pub use series::TruncatedSeries;
pub use weights::{WeightEval, WeightSpec};

pub use num_complex::Complex64;
