//! Exact symbolic engine for quantum groups built from R-matrices by the
//! FRT construction, together with their Gauss decomposition
//! `T = T_L * T_D * T_U` over noncommuting entries.
//!
//! The layers, bottom to top:
//!
//! * [`coeff`]: rational functions of `s = q^(1/2)`.
//! * [`ncpoly`]: free algebra, rewriting normal forms, confluence and a
//!   linear-algebra oracle.
//! * [`rmatrix`]: R-matrices, graded tensors, FRT relations, Yang-Baxter.
//! * [`qlinalg`]: quantum determinants, minors, inverses, superdeterminants.
//! * [`gauss`]: localization, factorization and derived relation tables.
//! * [`presets`]: the named algebras and their expectation suites.

pub mod coeff;
pub mod config;
pub mod exec;
pub mod gauss;
pub mod ncpoly;
pub mod parse;
pub mod presets;
pub mod qlinalg;
pub mod rmatrix;

pub use coeff::{QCoeff, Rational};
pub use config::Budget;
pub use exec::Exec;
pub use ncpoly::{Alphabet, NcPoly, RelationSet, Word};
