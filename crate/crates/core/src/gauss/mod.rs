//! Gauss factorization `T = T_L T_D T_U` and the relations of its factors.

mod decompose;
mod expr;
mod localize;
mod model;
mod verify;

use thiserror::Error;

use crate::ncpoly::NormalFormError;

pub use decompose::{determinant_is_diagonal_product, gauss_decompose, leading_minor, unipotent_inverse, Check, GaussFactors, MinorKind, Report};
pub use expr::GaussContext;
pub use localize::{Inverted, Localization, DEFAULT_SEARCH};
pub use model::{
    factor_identities, frt_identity, seed_identities, supplementary_identities, Elimination, FactorMatrices, GaussAlgebra, GaussNames,
    MatrixIdentity,
};
pub use verify::{triangular_projection, verify_matrix_relations, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error(transparent)]
    Budget(#[from] NormalFormError),
    #[error("{element} does not quasi-commute with {generator}")]
    NotQuasiCommuting { element: String, generator: String },
    #[error("no inverse available for {0}")]
    MissingInverse(String),
    #[error("inconsistent supplementary condition: {0}")]
    Inconsistent(String),
    #[error("supplementary conditions left unsolved: {}", .0.join("; "))]
    Stuck(Vec<String>),
    #[error("verification failed: {0}")]
    Verification(String),
}
