//! Changing between `q` and the local coordinates `y` and `f`.
//!
//! Both `y` and `f` are integer series `q + O(q²)`, so `R⟦q⟧ = R⟦y⟧ = R⟦f⟧` and
//! `M` coefficients in one coordinate determine exactly `M` in the other.

use num_bigint::BigInt;
use num_traits::Zero;

use super::qexp::{f_qexp, y_qexp};
use super::FormsError;
use crate::series::{Coefficient, IntSeries, PowSeries, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordKind {
    Y,
    F,
}

impl CoordKind {
    pub fn var(self) -> Var {
        match self {
            CoordKind::Y => Var::Y,
            CoordKind::F => Var::F,
        }
    }
}

/// Precomputed change-of-basis tables between `q` and a coordinate `z`.
///
/// `to_q` row `k` holds `z(q)^k`; `from_q` row `n` holds `q(z)^n`. Both are
/// unitriangular integer matrices, so conversions are plain integer linear
/// combinations and cost no 3-adic precision.
#[derive(Clone, Debug)]
pub struct Coordinate {
    kind: CoordKind,
    z: IntSeries,
    to_q: Vec<Vec<BigInt>>,
    from_q: Vec<Vec<BigInt>>,
}

fn power_rows(s: &IntSeries) -> Vec<Vec<BigInt>> {
    let m = s.trunc();
    let mut rows = Vec::with_capacity(m);
    let mut p = IntSeries::one(s.var(), m, &BigInt::zero());
    for _ in 0..m {
        rows.push(p.coeffs().to_vec());
        p = &p * s;
    }
    rows
}

impl Coordinate {
    pub fn new(kind: CoordKind, trunc: usize) -> Result<Self, FormsError> {
        let trunc = trunc.max(2);
        let z = match kind {
            CoordKind::Y => y_qexp(trunc)?.series,
            CoordKind::F => f_qexp(trunc).series,
        };
        let q_of_z = z.clone().with_var(kind.var()).reversion()?;
        Ok(Coordinate {
            kind,
            to_q: power_rows(&z),
            from_q: power_rows(&q_of_z),
            z,
        })
    }

    pub fn kind(&self) -> CoordKind {
        self.kind
    }

    pub fn trunc(&self) -> usize {
        self.z.trunc()
    }

    /// The coordinate as a q-expansion.
    pub fn q_expansion(&self) -> &IntSeries {
        &self.z
    }

    fn check(&self, needed: usize) -> Result<(), FormsError> {
        if needed > self.trunc() {
            return Err(FormsError::Truncation {
                needed,
                available: self.trunc(),
            });
        }
        Ok(())
    }

    /// Rewrites a q-series in this coordinate: `h` with `h(z(q)) = g(q)`.
    pub fn from_q<C: Coefficient>(&self, g: &PowSeries<C>) -> Result<PowSeries<C>, FormsError> {
        if g.var() != Var::Q {
            return Err(crate::series::SeriesError::VarMismatch(g.var(), Var::Q).into());
        }
        self.apply(g, &self.from_q, self.kind.var())
    }

    /// Expands a series in this coordinate back into `q`.
    pub fn to_q<C: Coefficient>(&self, h: &PowSeries<C>) -> Result<PowSeries<C>, FormsError> {
        if h.var() != self.kind.var() {
            return Err(crate::series::SeriesError::VarMismatch(h.var(), self.kind.var()).into());
        }
        self.apply(h, &self.to_q, Var::Q)
    }

    fn apply<C: Coefficient>(
        &self,
        s: &PowSeries<C>,
        rows: &[Vec<BigInt>],
        var: Var,
    ) -> Result<PowSeries<C>, FormsError> {
        let m = s.trunc();
        self.check(m)?;
        let zero = s.coeff(0).zero_like();
        let mut out = vec![zero; m];
        for (n, c) in s.coeffs().iter().enumerate() {
            if c.is_zero_coeff() {
                continue;
            }
            // row n starts at index n (unitriangular)
            for (k, r) in rows[n].iter().enumerate().take(m).skip(n) {
                if !r.is_zero() {
                    out[k] = out[k].add_ref(&c.mul_int(r));
                }
            }
        }
        Ok(PowSeries::new(var, out))
    }
}

/// `g(q)` rewritten in `y` by composing with the compositional inverse of `y(q)`.
///
/// This is the direct route; [`Coordinate::from_q`] reaches the same series
/// through cached integer tables and is what the pipeline uses.
pub fn qexp_to_y<C: Coefficient>(g: &PowSeries<C>, m: usize) -> Result<PowSeries<C>, FormsError> {
    if g.trunc() < m {
        return Err(FormsError::Truncation {
            needed: m,
            available: g.trunc(),
        });
    }
    let y = y_qexp(m.max(2))?.series;
    let q_of_y = y.with_var(Var::Y).reversion()?;
    let proto = g.coeff(0);
    let inner = q_of_y.map(|c| proto.from_int_like(c));
    let g = g.clone().truncate(m).with_var(Var::Y);
    Ok(g.compose(&inner)?)
}
