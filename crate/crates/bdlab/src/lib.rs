//! Numerical laboratory for the Bessel delta-method applied to exponential
//! sums twisted by the Fourier coefficients of holomorphic GL(2) newforms.
//!
//! The modules build on one another:
//!
//! - [`forms`]: normalized Hecke eigenvalues of the built-in forms.
//! - [`special`]: Bessel functions, log-Gamma, the bump `U` and smooth weights.
//! - [`quad`]: adaptive oscillatory quadrature and the stationary-phase suites.
//! - [`besseldelta`]: the Bessel integral, its asymptotics and the delta identity.
//! - [`pipeline`]: Voronoi, Poisson, the decomposition and the bound ledger.
//! - [`lfunc`]: central values through the approximate functional equation.
//! - [`cli`]: the `bdlab` front end and its result files.
//!
//! Runnable walkthroughs live in `examples/`.

// Reference constants keep every digit of their high-precision source.
#![allow(clippy::excessive_precision)]
// `!(x > y)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod besseldelta;
pub mod cli;
pub mod fit;
pub mod forms;
pub mod lfunc;
pub mod pipeline;
pub mod quad;
pub mod special;
