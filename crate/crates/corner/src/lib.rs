//! Exact construction of the braid-group representation on the Heisenberg block `L_g^eta`
//! and computational verification of its corner algebra.
//!
//! Layers, bottom up: [`cyclo`] (the field `Q(eta)`), [`linalg`] (matrices, echelon forms, a
//! word-size prime field), [`words`] (free groups and Fox calculus), [`heis`] (the Heisenberg
//! group, its degree-two extension, matrix units), [`braidrep`] (braid actions at every level),
//! [`spectral`] (the `0`-block operators), [`closure`] (span closure and the corner dimension)
//! and [`suites`] (named verification suites with JSON reports).

pub mod braidrep;
pub mod closure;
pub mod cyclo;
pub mod heis;
pub mod linalg;
pub mod spectral;
pub mod suites;
pub mod words;
