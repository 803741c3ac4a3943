//! Concrete modular forms as q-expansions, the coordinates `y` and `f`, the
//! Eisenstein series attached to finite-order weights, and the identity checks
//! relating them.

mod character;
mod checks;
mod coords;
mod export;
mod gkappa;
mod qexp;

use thiserror::Error;

use crate::padic::PadicError;
use crate::series::SeriesError;

pub use character::{eisenstein_character, CharacterWeight};
pub use checks::{
    containment_check, eisenstein_check, f0_cubic_check, f0_cubic_residual, f0_cubic_x_residual,
    f0_series, fund_lemma_check, member_lemma_check, printed_check, reduce_series,
    uv_property_check,
};
pub use coords::{qexp_to_y, CoordKind, Coordinate};
pub use export::{expansion_rows, rows_to_csv, rows_to_json, ExpansionRow};
pub use gkappa::{g_kappa, g_kappa_with};
pub use qexp::{
    bernoulli, delta_qexp, eisenstein_classical, eisenstein_constant, f_qexp, theta_qexp, y_qexp,
    zeta_one_minus_k, FormLabel, QExpansion,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("coefficient {index} of θ/V(θ) - 1 is not divisible by 6")]
    NotDivisibleBySix { index: usize },
    #[error("Eisenstein constant is not 3-integral")]
    NonIntegralConstant,
    #[error("coefficient {index} is not integral: {detail}")]
    NonIntegral { index: usize, detail: String },
    #[error("coordinate change needs {needed} terms but only {available} are available")]
    Truncation { needed: usize, available: usize },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
