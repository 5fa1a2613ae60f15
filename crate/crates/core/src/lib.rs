//! Generalized multiplicative Hilbert operators on `l^p`.
//!
//! The kernel family is indexed from 2 and parameterized by
//! `(p, alpha, beta, gamma, mu, nu)`:
//!
//! ```text
//!            (log m)^{((alpha-1) + alpha*mu)/p} (log n)^{((beta-1) - (p'-1)*beta*nu)/p'}
//! M[m, n] = -----------------------------------------------------------------------
//!                   m^{1/p} n^{1/p'} [(log m)^alpha + (log n)^beta]^gamma
//! ```
//!
//! The crate provides the special functions the norm formulas need
//! ([`specfun`]), kernel evaluation and matrix-free application
//! ([`operator`]), numerical `l^p` operator-norm estimation ([`normengine`]),
//! the analytic boundedness classifier, closed-form critical norms and Schur
//! sums ([`bounds`]), measure-weighted kernels and Carleson checks
//! ([`carleson`]), and the `mhilb` command-line front end ([`cli`]).

pub mod bounds;
pub mod carleson;
pub mod cli;
pub mod error;
pub mod normengine;
pub mod operator;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
