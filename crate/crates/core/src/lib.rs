//! Quasi-shuffle Hopf algebras on words, multiple zeta values, and the
//! Fourier expansion of (stuffle-regularized) multiple Eisenstein series.
//!
//! The crate is organised bottom-up:
//!
//! - [`word`]: indices, `x`/`y` words and exact rational free polynomials;
//! - [`hopf`]: quasi-shuffle products, deconcatenation, antipode and
//!   convolution of linear maps;
//! - [`mzv`]: the symbolic coefficient ring spanned by multiple zeta values
//!   and powers of `E = -2πi`, with a numeric evaluator;
//! - [`regularization`]: `reg`, the lift of homomorphisms to `T`-polynomials
//!   and the `ρ` map;
//! - [`qexp`]: q-series, multitangent reduction and Fourier expansions;
//! - [`numeric`]: truncated and regularized objects evaluated in `f64`;
//! - [`verify`] and [`cli`]: identity suites and the command-line front end.

pub mod cli;
pub mod error;
pub mod hopf;
pub mod mzv;
pub mod numeric;
pub mod qexp;
pub mod regularization;
pub mod ring;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use hopf::{Mode, StuffleDiamond, TrivialDiamond};
pub use mzv::{MzvElem, NumericConfig};
pub use numeric::{Estimate, EvalContext};
pub use regularization::TPoly;
pub use word::{FreePoly, Index, Subspace, XyLetter, XyWord};
