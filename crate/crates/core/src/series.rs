//! Truncated univariate power series over an arbitrary coefficient ring.
//!
//! A [`PowSeries`] of truncation `M` knows the coefficients of `var^0 … var^(M-1)`;
//! everything from `var^M` on is unknown. Binary operations produce the minimum
//! truncation of their operands and never invent coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::padic::CycElt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(Var, Var),
    #[error("constant term is not a unit")]
    NonUnitConstant,
    #[error("inner series has a nonzero constant term")]
    NonzeroInnerConstant,
    #[error("linear coefficient is not a unit")]
    NonUnitLinear,
}

/// Variable tag of a series; operations refuse to mix tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Q,
    Y,
    F,
    X,
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::Q => "q",
            Var::Y => "y",
            Var::F => "f",
            Var::X => "X",
            Var::T => "T",
        };
        f.write_str(s)
    }
}

/// The ring operations the series code needs from its coefficients.
///
/// Methods take a receiver so that rings carrying runtime parameters (such as
/// [`CycElt`]) can produce constants of the right ring.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: &BigInt) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_int(&self, n: &BigInt) -> Self;
    /// Inverse if `self` is a unit.
    fn unit_inverse(&self) -> Option<Self>;
}

impl Coefficient for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        n.clone()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        self * n
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.abs().is_one()).then(|| self.clone())
    }
}

impl Coefficient for CycElt {
    fn zero_like(&self) -> Self {
        self.ring().zero()
    }
    fn one_like(&self) -> Self {
        self.ring().one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        self.ring().from_bigint(n)
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        CycElt::mul_int(self, n)
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.invert_unit().ok()
    }
}

/// An element of the prime field `F_3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct F3(u8);

impl F3 {
    pub const ZERO: F3 = F3(0);
    pub const ONE: F3 = F3(1);

    pub fn new(n: i64) -> F3 {
        F3(n.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Debug for F3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for F3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coefficient for F3 {
    fn zero_like(&self) -> Self {
        F3::ZERO
    }
    fn one_like(&self) -> Self {
        F3::ONE
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        F3(n.mod_floor(&BigInt::from(3)).to_u8().unwrap())
    }
    fn is_zero_coeff(&self) -> bool {
        self.0 == 0
    }
    fn add_ref(&self, other: &Self) -> Self {
        F3((self.0 + other.0) % 3)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        F3((self.0 + 3 - other.0) % 3)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        F3((self.0 * other.0) % 3)
    }
    fn neg_ref(&self) -> Self {
        F3((3 - self.0) % 3)
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        self.mul_ref(&self.from_int_like(n))
    }
    fn unit_inverse(&self) -> Option<Self> {
        // 1 and 2 are their own inverses
        (self.0 != 0).then_some(*self)
    }
}

/// A power series truncated at `var^trunc`.
#[derive(Clone, PartialEq)]
pub struct PowSeries<C> {
    var: Var,
    coeffs: Vec<C>,
}

impl<C: Coefficient> PowSeries<C> {
    /// Series with the given coefficients; the truncation is their count.
    pub fn new(var: Var, coeffs: Vec<C>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one known coefficient"
        );
        PowSeries { var, coeffs }
    }

    pub fn zero(var: Var, trunc: usize, proto: &C) -> Self {
        Self::new(var, vec![proto.zero_like(); trunc])
    }

    pub fn one(var: Var, trunc: usize, proto: &C) -> Self {
        Self::monomial(var, trunc, 0, proto.one_like())
    }

    /// `c·var^n`, truncated.
    pub fn monomial(var: Var, trunc: usize, n: usize, c: C) -> Self {
        let mut s = Self::zero(var, trunc, &c);
        if n < trunc {
            s.coeffs[n] = c;
        }
        s
    }

    /// The variable itself.
    pub fn gen(var: Var, trunc: usize, proto: &C) -> Self {
        Self::monomial(var, trunc, 1, proto.one_like())
    }

    /// Integer-coefficient series mapped into the ring of `proto`.
    pub fn from_ints(var: Var, coeffs: &[i64], proto: &C) -> Self {
        Self::new(
            var,
            coeffs
                .iter()
                .map(|&c| proto.from_int_like(&BigInt::from(c)))
                .collect(),
        )
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `var^n`; panics when `n` lies beyond the truncation.
    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    pub fn truncate(mut self, trunc: usize) -> Self {
        assert!(trunc >= 1);
        self.coeffs.truncate(trunc);
        self
    }

    /// Renames the variable (an explicit change of coordinates by relabelling).
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_coeff())
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_coeff())
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> PowSeries<D> {
        PowSeries::new(self.var, self.coeffs.iter().map(f).collect())
    }

    fn check_var(&self, other: &Self) -> Result<(), SeriesError> {
        if self.var == other.var {
            Ok(())
        } else {
            Err(SeriesError::VarMismatch(self.var, other.var))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        Ok(Self::new(
            self.var,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        Ok(Self::new(
            self.var,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        ))
    }

    /// Schoolbook product truncated to the shorter operand.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let n = self.trunc().min(other.trunc());
        let mut out = vec![self.coeffs[0].zero_like(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero_coeff() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero_coeff() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Ok(Self::new(self.var, out))
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.map(|a| a.mul_int(n))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.var, self.trunc(), &self.coeffs[0]);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse by Newton iteration `b ← b(2 - ab)`, doubling the
    /// number of correct coefficients at each step.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0]
            .unit_inverse()
            .ok_or(SeriesError::NonUnitConstant)?;
        let m = self.trunc();
        let two = c0.from_int_like(&BigInt::from(2));
        let mut b = PowSeries::new(self.var, vec![c0]);
        let mut len = 1;
        while len < m {
            len = (2 * len).min(m);
            let a = self.clone().truncate(len);
            let mut b_ext = b.coeffs.clone();
            b_ext.resize(len, two.zero_like());
            let b_ext = PowSeries::new(self.var, b_ext);
            let mut corr = (&a * &b_ext).neg();
            corr.coeffs[0] = corr.coeffs[0].add_ref(&two);
            b = &b_ext * &corr;
        }
        Ok(b)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// `self(inner)`: the result lives in `inner`'s variable.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero_coeff() {
            return Err(SeriesError::NonzeroInnerConstant);
        }
        let n = self.trunc().min(inner.trunc());
        let inner = inner.clone().truncate(n);
        let mut acc = PowSeries::zero(inner.var, n, &self.coeffs[0]);
        for c in self.coeffs[..n].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].add_ref(c);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let proto = &self.coeffs[0];
        let mut out: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_int(&BigInt::from(i)))
            .collect();
        if out.is_empty() {
            out.push(proto.zero_like());
        }
        Self::new(self.var, out)
    }

    /// Compositional inverse of `s = c₁·var + O(var²)` with `c₁` a unit, by Newton
    /// iteration on `t ↦ t - (s(t) - var)/s'(t)`.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero_coeff() {
            return Err(SeriesError::NonzeroInnerConstant);
        }
        let m = self.trunc();
        if m < 2 {
            return Ok(self.clone());
        }
        let c1_inv = self.coeffs[1]
            .unit_inverse()
            .ok_or(SeriesError::NonUnitLinear)?;
        let x = PowSeries::gen(self.var, m, &c1_inv);
        let ds = self.derivative();
        let mut t = x.scale(&c1_inv);
        let mut len = 2;
        while len < m {
            len = (2 * len).min(m);
            let tl = pad(&t, len);
            let resid = self
                .clone()
                .truncate(len)
                .compose(&tl)?
                .checked_sub(&x.clone().truncate(len))?;
            // s' is only known to len - 1 terms; resid = O(var) so the last
            // coefficient of resid/s'(t) does not see the padding
            let slope = pad(&ds, len).compose(&tl)?;
            t = tl.checked_sub(&resid.checked_div(&slope)?)?;
        }
        Ok(t)
    }

    /// `U(Σ r_n q^n) = Σ r_{3n} q^n`; output truncation `⌊(M-1)/3⌋ + 1`.
    pub fn u_op(&self) -> Self {
        Self::new(self.var, self.coeffs.iter().step_by(3).cloned().collect())
    }

    /// `V(Σ r_n q^n) = Σ r_n q^{3n}`; output truncation `3(M-1) + 1`, capped at `budget`.
    pub fn v_op(&self, budget: Option<usize>) -> Self {
        let mut n = 3 * (self.trunc() - 1) + 1;
        if let Some(b) = budget {
            n = n.min(b);
        }
        let zero = self.coeffs[0].zero_like();
        Self::new(
            self.var,
            (0..n)
                .map(|i| {
                    if i % 3 == 0 {
                        self.coeffs[i / 3].clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect(),
        )
    }

    /// `q ↦ ωq`: coefficient `i` is multiplied by `ω^(i mod 3)`.
    pub fn sigma_op(&self, omega: &C) -> Self {
        let omega2 = omega.mul_ref(omega);
        Self::new(
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| match i % 3 {
                    0 => c.clone(),
                    1 => c.mul_ref(omega),
                    _ => c.mul_ref(&omega2),
                })
                .collect(),
        )
    }
}

fn pad<C: Coefficient>(s: &PowSeries<C>, len: usize) -> PowSeries<C> {
    let mut c = s.coeffs.clone();
    c.resize(len, s.coeffs[0].zero_like());
    c.truncate(len);
    PowSeries::new(s.var, c)
}

impl<C: Coefficient> fmt::Debug for PowSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.var)?;
        f.debug_list().entries(&self.coeffs).finish()?;
        write!(f, " + O({}^{})", self.var, self.trunc())
    }
}

impl<'a, C: Coefficient> Add<&'a PowSeries<C>> for &'a PowSeries<C> {
    type Output = PowSeries<C>;
    fn add(self, rhs: &'a PowSeries<C>) -> PowSeries<C> {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, C: Coefficient> Sub<&'a PowSeries<C>> for &'a PowSeries<C> {
    type Output = PowSeries<C>;
    fn sub(self, rhs: &'a PowSeries<C>) -> PowSeries<C> {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, C: Coefficient> Mul<&'a PowSeries<C>> for &'a PowSeries<C> {
    type Output = PowSeries<C>;
    fn mul(self, rhs: &'a PowSeries<C>) -> PowSeries<C> {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<C: Coefficient> Neg for PowSeries<C> {
    type Output = PowSeries<C>;
    fn neg(self) -> PowSeries<C> {
        self.map(|c| c.neg_ref())
    }
}

/// Exact integer series.
pub type IntSeries = PowSeries<BigInt>;

/// Series over `F_3`.
pub type F3Series = PowSeries<F3>;

impl IntSeries {
    pub fn from_i64(var: Var, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Exact division of every coefficient by `d`; `None` if some coefficient is
    /// not divisible.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.trunc());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(self.var, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::CycRing;

    fn ints(c: &[i64]) -> IntSeries {
        IntSeries::from_i64(Var::Q, c)
    }

    #[test]
    fn u_and_v_examples() {
        let q3 = ints(&[0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(q3.u_op(), ints(&[0, 1, 0]));
        assert_eq!(ints(&[1, 1]).v_op(None), ints(&[1, 0, 0, 1]));
        assert_eq!(ints(&[1, 2, 3, 4, 5, 6, 7]).u_op().trunc(), 3);
        assert_eq!(ints(&[1, 1, 1]).v_op(Some(5)).trunc(), 5);
    }

    #[test]
    fn sigma_cubed_is_identity() {
        let r = CycRing::new(1, 20).unwrap();
        let s = ints(&[3, 1, -4, 1, 5, -9, 2, 6]).map(|c| r.from_bigint(c));
        let w = r.omega();
        assert_eq!(s.sigma_op(&w).sigma_op(&w).sigma_op(&w), s);
        assert_ne!(s.sigma_op(&w), s);
    }

    #[test]
    fn inverse_and_geometric_series() {
        let m = 20;
        let mut c = vec![0i64; m];
        c[0] = 1;
        c[1] = 6;
        let a = IntSeries::from_i64(Var::Y, &c);
        let prod = &a * &a.inverse().unwrap();
        assert_eq!(prod, IntSeries::one(Var::Y, m, &BigInt::zero()));

        // 1/(1 - 27y^3) = Σ 27^t y^{3t}
        let mut c = vec![0i64; m];
        c[0] = 1;
        c[3] = -27;
        let inv = IntSeries::from_i64(Var::Y, &c).inverse().unwrap();
        for (i, x) in inv.coeffs().iter().enumerate() {
            let expect = if i % 3 == 0 {
                BigInt::from(27).pow(i as u32 / 3)
            } else {
                BigInt::zero()
            };
            assert_eq!(*x, expect);
        }
        assert_eq!(
            ints(&[3, 1]).inverse().unwrap_err(),
            SeriesError::NonUnitConstant
        );
    }

    #[test]
    fn compose_square() {
        let x2 = IntSeries::from_i64(Var::X, &[0, 0, 1, 0, 0, 0]);
        let inner = ints(&[0, 1, 0, 0, -5, 0]);
        assert_eq!(x2.compose(&inner).unwrap(), &inner * &inner);
        assert_eq!(
            x2.compose(&ints(&[1, 1])).unwrap_err(),
            SeriesError::NonzeroInnerConstant
        );
    }

    #[test]
    fn reversion_of_identity_and_round_trip() {
        let q = ints(&[0, 1, 0, 0, 0]);
        assert_eq!(q.reversion().unwrap(), q);
        let s = ints(&[0, 1, 12, 90, 508, -3, 7, 11, 0, 2]);
        let t = s.reversion().unwrap();
        assert_eq!(
            s.compose(&t).unwrap(),
            ints(&[0, 1, 0, 0, 0, 0, 0, 0, 0, 0])
        );
        assert_eq!(
            t.compose(&s).unwrap(),
            ints(&[0, 1, 0, 0, 0, 0, 0, 0, 0, 0])
        );
        assert_eq!(
            ints(&[0, 3, 1]).reversion().unwrap_err(),
            SeriesError::NonUnitLinear
        );
    }

    #[test]
    fn var_mismatch_is_an_error() {
        let a = IntSeries::from_i64(Var::Q, &[1, 2]);
        let b = IntSeries::from_i64(Var::Y, &[1, 2]);
        assert_eq!(
            a.checked_mul(&b).unwrap_err(),
            SeriesError::VarMismatch(Var::Q, Var::Y)
        );
    }

    #[test]
    fn f3_arithmetic() {
        let two = F3::new(2);
        assert_eq!(two.mul_ref(&two), F3::ONE);
        assert_eq!(two.add_ref(&F3::ONE), F3::ZERO);
        assert_eq!(F3::new(-1), two);
        assert_eq!(F3::ZERO.unit_inverse(), None);
    }
}
