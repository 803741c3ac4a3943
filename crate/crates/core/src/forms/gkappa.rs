//! The series `g_κ` with `E_κ / V(E_κ) = g_κ(w₀·y)`.

use num_rational::Rational64;

use super::character::{eisenstein_character, CharacterWeight};
use super::coords::{CoordKind, Coordinate};
use super::FormsError;
use crate::padic::{CycElt, PadicError};
use crate::series::{PowSeries, Var};

/// `g_κ = Σ c_j X^j` to `m` terms, where `c_j` is the `y^j` coefficient of
/// `E_κ/V(E_κ)` divided by `w₀^j`. Every `c_j` must be integral.
pub fn g_kappa(kappa: &CharacterWeight, m: usize) -> Result<PowSeries<CycElt>, FormsError> {
    let coord = Coordinate::new(CoordKind::Y, m)?;
    g_kappa_with(kappa, &coord, m)
}

/// [`g_kappa`] reusing a precomputed `y`-coordinate table.
pub fn g_kappa_with(
    kappa: &CharacterWeight,
    coord: &Coordinate,
    m: usize,
) -> Result<PowSeries<CycElt>, FormsError> {
    let e = eisenstein_character(kappa, m)?.series;
    let ratio = e.checked_div(&e.v_op(Some(m)))?;
    let in_y = coord.from_q(&ratio)?;
    let mut coeffs = Vec::with_capacity(m);
    for (j, h) in in_y.coeffs().iter().enumerate() {
        let c = kappa.div_by_w0_pow(h, j as u32).map_err(|err| match err {
            PadicError::NotDivisible => FormsError::NonIntegral {
                index: j,
                detail: format!("y^{j} coefficient {h} is not divisible by w0^{j}"),
            },
            other => other.into(),
        })?;
        debug_assert!(c.valuation().value() >= Rational64::from_integer(0));
        coeffs.push(c);
    }
    Ok(PowSeries::new(Var::X, coeffs))
}
