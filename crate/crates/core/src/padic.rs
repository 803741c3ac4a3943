//! Finite-precision arithmetic in `O_m = Z_3[ζ]`, `ζ` a primitive `3^m`-th root of unity.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^(e-1)` with `e = 2·3^(m-1)`,
//! every coefficient reduced modulo `3^N` for the ring's working precision `N`.
//! Each element additionally carries its own *known precision* `p ≤ N`: only the
//! residue modulo `3^p` is meaningful. Ring operations never raise the known
//! precision; dividing by the uniformizer `π = ζ - 1` lowers it by one.
//!
//! Valuations are normalised so that `v(3) = 1`; `v(π) = 1/e`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("invalid ring parameters m = {m}, N = {precision} (need m >= 1 and N >= 2)")]
    InvalidRing { m: u32, precision: u32 },
    #[error("element is not divisible by the uniformizer")]
    NotDivisible,
    #[error("element is not a unit")]
    NotUnit,
    #[error("precision exhausted: no 3-adic digits left")]
    PrecisionExhausted,
    #[error("{0} is not 3-integral")]
    NotIntegral(String),
}

/// A 3-adic valuation, normalised by `v(3) = 1`.
///
/// `AtLeast` is returned for elements that are zero at their known precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(Rational64),
    AtLeast(Rational64),
}

impl Valuation {
    pub fn value(&self) -> Rational64 {
        match *self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Valuation::Exact(_))
    }

    pub fn exact(&self) -> Option<Rational64> {
        match *self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// True when the element is known to have valuation at least `bound`.
    pub fn is_at_least(&self, bound: Rational64) -> bool {
        self.value() >= bound
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// 3-adic valuation of a nonzero integer; `None` for zero.
pub fn v3_int(n: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let three = BigInt::from(3);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&three);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

struct RingData {
    m: u32,
    precision: u32,
    degree: usize,
    half: usize,
    pow3: Vec<BigInt>,
    // (Φ(x) - Φ(1)) / (x - 1)
    phi_quotient: Vec<BigInt>,
    // (π^e / 3)^(-1), an exact unit, at full precision
    pi_e_over_3_inv: Vec<BigInt>,
}

/// The ring `Z_3[ζ_{3^m}]` at working precision `3^N`.
#[derive(Clone)]
pub struct CycRing(Arc<RingData>);

impl PartialEq for CycRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.m == other.0.m && self.0.precision == other.0.precision)
    }
}

impl Eq for CycRing {}

impl fmt::Debug for CycRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z_3[zeta_{}] mod 3^{}",
            3u64.pow(self.0.m),
            self.0.precision
        )
    }
}

impl CycRing {
    pub fn new(m: u32, precision: u32) -> Result<Self, PadicError> {
        if m == 0 || precision < 2 || m > 6 {
            return Err(PadicError::InvalidRing { m, precision });
        }
        let half = 3usize.pow(m - 1);
        let degree = 2 * half;
        let mut pow3 = Vec::with_capacity(precision as usize + 1);
        let mut p = BigInt::one();
        for _ in 0..=precision {
            pow3.push(p.clone());
            p *= 3;
        }
        let phi = cyclotomic_coeffs(half);
        let mut phi_quotient = vec![BigInt::zero(); degree];
        phi_quotient[degree - 1] = phi[degree].clone();
        for k in (1..degree).rev() {
            phi_quotient[k - 1] = &phi[k] + &phi_quotient[k];
        }
        let data = RingData {
            m,
            precision,
            degree,
            half,
            pow3,
            phi_quotient,
            pi_e_over_3_inv: Vec::new(),
        };
        // π^e = 3·u' exactly in Z[ζ]; the power basis is integral, so u' has integer
        // coefficients obtained by exact division.
        let mut pi_pow = vec![BigInt::zero(); degree];
        pi_pow[0] = BigInt::one();
        let mut pi = vec![BigInt::zero(); degree];
        pi[0] = BigInt::from(-1);
        pi[1] = BigInt::one();
        for _ in 0..degree {
            pi_pow = mul_exact(&data, &pi_pow, &pi);
        }
        let unit: Vec<BigInt> = pi_pow.iter().map(|c| c / 3).collect();
        let ring = CycRing(Arc::new(data));
        let inv = ring.from_big_coeffs(unit).invert_unit()?.coeffs;
        let mut data = Arc::try_unwrap(ring.0)
            .ok()
            .expect("ring data is not shared during construction");
        data.pi_e_over_3_inv = inv;
        Ok(CycRing(Arc::new(data)))
    }

    /// `m` such that the ring contains a primitive `3^m`-th root of unity.
    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Working precision `N`: coefficients live modulo `3^N`.
    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    /// Ramification index `e = φ(3^m) = 2·3^(m-1)`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Order of `ζ`.
    pub fn root_order(&self) -> u64 {
        3u64.pow(self.0.m)
    }

    /// Coefficients of `Φ_{3^m}` from the constant term up.
    pub fn cyclotomic_polynomial(&self) -> Vec<i64> {
        cyclotomic_coeffs(self.0.half)
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect()
    }

    fn modulus(&self) -> &BigInt {
        &self.0.pow3[self.0.precision as usize]
    }

    fn from_big_coeffs(&self, coeffs: Vec<BigInt>) -> CycElt {
        let mut c = coeffs;
        c.resize(self.0.degree, BigInt::zero());
        let modulus = self.modulus().clone();
        for x in c.iter_mut() {
            *x = x.mod_floor(&modulus);
        }
        CycElt {
            ring: self.clone(),
            coeffs: c,
            precision: self.0.precision,
        }
    }

    pub fn zero(&self) -> CycElt {
        self.from_big_coeffs(Vec::new())
    }

    pub fn one(&self) -> CycElt {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> CycElt {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> CycElt {
        self.from_big_coeffs(vec![n.clone()])
    }

    /// Element `Σ c_i ζ^i`; the list may be longer than the degree.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> CycElt {
        let mut acc = vec![BigInt::zero(); coeffs.len().max(self.0.degree)];
        for (a, c) in acc.iter_mut().zip(coeffs) {
            *a = BigInt::from(*c);
        }
        self.from_big_coeffs(reduce_phi(&self.0, acc))
    }

    /// Embeds a rational with denominator prime to 3.
    pub fn from_rational(&self, r: &BigRational) -> Result<CycElt, PadicError> {
        let den = r.denom();
        if (den % BigInt::from(3)).is_zero() {
            return Err(PadicError::NotIntegral(r.to_string()));
        }
        let modulus = self.modulus();
        let inv = mod_inverse(&den.mod_floor(modulus), modulus);
        Ok(self.from_bigint(&(r.numer() * inv)))
    }

    pub fn zeta(&self) -> CycElt {
        self.zeta_pow(1)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycElt {
        let k = k.rem_euclid(self.root_order() as i64) as usize;
        let mut c = vec![0i64; k + 1];
        c[k] = 1;
        self.from_coeffs(&c)
    }

    /// The primitive cube root of unity `ω = ζ^(3^(m-1))`.
    pub fn omega(&self) -> CycElt {
        self.zeta_pow(self.0.half as i64)
    }

    /// The uniformizer `π = ζ - 1`.
    pub fn pi(&self) -> CycElt {
        self.from_coeffs(&[-1, 1])
    }

    /// `3 / π²`; for `m = 1` this is the unit `u` with `3 = u·π²`.
    pub fn three_over_pi_squared(&self) -> Result<CycElt, PadicError> {
        self.from_int(3).div_uniformizer()?.div_uniformizer()
    }
}

fn cyclotomic_coeffs(half: usize) -> Vec<BigInt> {
    let mut phi = vec![BigInt::zero(); 2 * half + 1];
    phi[0] = BigInt::one();
    phi[half] = BigInt::one();
    phi[2 * half] = BigInt::one();
    phi
}

fn reduce_phi(data: &RingData, mut c: Vec<BigInt>) -> Vec<BigInt> {
    let (e, h) = (data.degree, data.half);
    for k in (e..c.len()).rev() {
        let top = std::mem::take(&mut c[k]);
        if top.is_zero() {
            continue;
        }
        c[k - h] -= &top;
        c[k - e] -= &top;
    }
    c.truncate(e);
    c
}

// Product in Z[x]/Φ without reduction modulo 3^N.
fn mul_exact(data: &RingData, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    reduce_phi(data, prod)
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    let g = a.extended_gcd(modulus);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(modulus)
}

/// An element of `Z_3[ζ]` known modulo `3^p`.
#[derive(Clone)]
pub struct CycElt {
    ring: CycRing,
    coeffs: Vec<BigInt>,
    precision: u32,
}

impl CycElt {
    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    /// Absolute precision: the element is known modulo `3^p`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Coefficients in the power basis, each in `[0, 3^N)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients reduced modulo `3^p` into the symmetric range.
    pub fn centered_coeffs(&self) -> Vec<BigInt> {
        let m = &self.ring.0.pow3[self.precision as usize];
        let half = m / 2;
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect()
    }

    /// Lowers the known precision to `p` (no-op if already lower).
    pub fn with_precision(mut self, p: u32) -> Self {
        self.precision = self.precision.min(p);
        self
    }

    fn check_ring(&self, other: &CycElt) {
        assert!(
            self.ring == other.ring,
            "mixing elements of {:?} and {:?}",
            self.ring,
            other.ring
        );
    }

    fn with_coeffs(&self, coeffs: Vec<BigInt>, precision: u32) -> CycElt {
        let modulus = self.ring.modulus();
        let coeffs = coeffs.into_iter().map(|c| c.mod_floor(modulus)).collect();
        CycElt {
            ring: self.ring.clone(),
            coeffs,
            precision,
        }
    }

    /// True when every coefficient vanishes modulo `3^p`.
    pub fn is_zero(&self) -> bool {
        let m = &self.ring.0.pow3[self.precision as usize];
        self.coeffs.iter().all(|c| (c % m).is_zero())
    }

    pub fn mul_int(&self, n: &BigInt) -> CycElt {
        self.with_coeffs(self.coeffs.iter().map(|c| c * n).collect(), self.precision)
    }

    pub fn pow(&self, mut exp: u64) -> CycElt {
        let mut base = self.clone();
        let mut acc = self.ring.one().with_precision(self.precision);
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

    /// Image in the residue field `F_3` (evaluate at `ζ = 1`, reduce mod 3).
    pub fn residue(&self) -> Result<u8, PadicError> {
        if self.precision == 0 {
            return Err(PadicError::PrecisionExhausted);
        }
        let s: BigInt = self.coeffs.iter().sum();
        Ok(s.mod_floor(&BigInt::from(3)).to_u8().unwrap())
    }

    pub fn valuation(&self) -> Valuation {
        let e = self.ring.0.degree as i64;
        let p = self.precision;
        let modulus = &self.ring.0.pow3[p as usize];
        let reduced: Vec<BigInt> = self.coeffs.iter().map(|c| c.mod_floor(modulus)).collect();
        let k = reduced.iter().filter_map(v3_int).min();
        let Some(k) = k else {
            return Valuation::AtLeast(Rational64::from_integer((p as i64 - 1).max(0)));
        };
        // z / 3^k is nonzero modulo 3; its π-adic order below e is read off from the
        // Taylor expansion at ζ = 1 over F_3, since O/3 = F_3[x]/(x-1)^e.
        let three_k = &self.ring.0.pow3[k as usize];
        let digits: Vec<i64> = reduced
            .iter()
            .map(|c| (c / three_k).mod_floor(&BigInt::from(3)).to_i64().unwrap())
            .collect();
        let r = taylor_order_mod3(&digits);
        Valuation::Exact(Rational64::new(k as i64 * e + r as i64, e))
    }

    /// `z / π`; costs one unit of known precision.
    pub fn div_uniformizer(&self) -> Result<CycElt, PadicError> {
        if self.precision == 0 {
            return Err(PadicError::PrecisionExhausted);
        }
        let e = self.ring.0.degree;
        let z = &self.coeffs;
        let s: BigInt = z.iter().sum();
        let (s3, rem) = s.div_rem(&BigInt::from(3));
        if !rem.is_zero() {
            return Err(PadicError::NotDivisible);
        }
        // z = (x - 1)·q + z(1) and 3 ≡ -(x - 1)·ψ (mod Φ), so z/π = q - (z(1)/3)·ψ.
        let mut q = vec![BigInt::zero(); e];
        q[e - 2] = z[e - 1].clone();
        for k in (1..e - 1).rev() {
            q[k - 1] = &z[k] + &q[k];
        }
        for (qi, psi) in q.iter_mut().zip(&self.ring.0.phi_quotient) {
            *qi -= &s3 * psi;
        }
        Ok(self.with_coeffs(q, self.precision - 1))
    }

    /// `z / π^t` for `t = k·e + r`: exact division by `3^k` followed by `r` uniformizer
    /// divisions, so the precision cost is `k + r` rather than `t`.
    pub fn div_uniformizer_pow(&self, t: u32) -> Result<CycElt, PadicError> {
        let e = self.ring.0.degree as u32;
        let (k, r) = (t / e, t % e);
        let mut z = self.clone();
        if k > 0 {
            if k > z.precision {
                return Err(PadicError::PrecisionExhausted);
            }
            let three_k = &self.ring.0.pow3[k as usize];
            let mut out = Vec::with_capacity(z.coeffs.len());
            for c in &z.coeffs {
                let (q, rem) = c.div_rem(three_k);
                if !rem.is_zero() {
                    return Err(PadicError::NotDivisible);
                }
                out.push(q);
            }
            let unit = self.with_coeffs(self.ring.0.pi_e_over_3_inv.clone(), self.ring.precision());
            z = self.with_coeffs(out, z.precision - k);
            z = &z * &unit.pow(k as u64);
        }
        for _ in 0..r {
            z = z.div_uniformizer()?;
        }
        Ok(z)
    }

    /// Inverse of a unit by Newton iteration `w ← w(2 - zw)`.
    pub fn invert_unit(&self) -> Result<CycElt, PadicError> {
        let c0 = self.residue()?;
        if c0 == 0 {
            return Err(PadicError::NotUnit);
        }
        let full = self.clone().with_precision_full();
        let one = self.ring.one();
        // c0 ∈ {1, 2} is its own inverse modulo 3
        let mut w = self.ring.from_int(c0 as i64);
        for _ in 0..64 {
            let err = &one - &(&full * &w);
            if err.is_zero() {
                return Ok(w.with_precision(self.precision));
            }
            w = &w + &(&w * &err);
        }
        unreachable!("Newton inversion failed to converge")
    }

    fn with_precision_full(mut self) -> Self {
        self.precision = self.ring.precision();
        self
    }

    /// `z / d` for `d` with exactly known valuation; fails unless `v(z) ≥ v(d)`.
    pub fn div_exact(&self, d: &CycElt) -> Result<CycElt, PadicError> {
        let vd = d
            .valuation()
            .exact()
            .ok_or(PadicError::PrecisionExhausted)?;
        let t = (vd * Rational64::from_integer(self.ring.0.degree as i64)).to_integer() as u32;
        let unit = d.div_uniformizer_pow(t)?;
        Ok(&self.div_uniformizer_pow(t)? * &unit.invert_unit()?)
    }
}

// Lowest power of t with nonzero coefficient in Σ c_i (1 + t)^i over F_3.
fn taylor_order_mod3(c: &[i64]) -> usize {
    let n = c.len();
    // coefficient of t^j is Σ_i c_i·binom(i, j)
    for j in 0..n {
        let mut acc = 0i64;
        for (i, ci) in c.iter().enumerate().skip(j) {
            acc += ci * binom_mod3(i, j);
        }
        if acc.rem_euclid(3) != 0 {
            return j;
        }
    }
    n
}

// Lucas' theorem.
fn binom_mod3(mut n: usize, mut k: usize) -> i64 {
    const SMALL: [[i64; 3]; 3] = [[1, 0, 0], [1, 1, 0], [1, 2, 1]];
    let mut acc = 1;
    while n > 0 || k > 0 {
        acc = acc * SMALL[n % 3][k % 3] % 3;
        n /= 3;
        k /= 3;
    }
    acc
}

impl PartialEq for CycElt {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        let p = self.precision.min(other.precision);
        let m = &self.ring.0.pow3[p as usize];
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| ((a - b) % m).is_zero())
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(3^{})", self, self.precision)
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.centered_coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "ζ")?;
                    } else {
                        write!(f, "ζ^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycElt> for &'a CycElt {
    type Output = CycElt;
    fn add(self, rhs: &'a CycElt) -> CycElt {
        self.check_ring(rhs);
        let c = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        self.with_coeffs(c, self.precision.min(rhs.precision))
    }
}

impl<'a> Sub<&'a CycElt> for &'a CycElt {
    type Output = CycElt;
    fn sub(self, rhs: &'a CycElt) -> CycElt {
        self.check_ring(rhs);
        let c = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        self.with_coeffs(c, self.precision.min(rhs.precision))
    }
}

impl<'a> Mul<&'a CycElt> for &'a CycElt {
    type Output = CycElt;
    fn mul(self, rhs: &'a CycElt) -> CycElt {
        self.check_ring(rhs);
        let prod = mul_exact(&self.ring.0, &self.coeffs, &rhs.coeffs);
        self.with_coeffs(prod, self.precision.min(rhs.precision))
    }
}

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect(), self.precision)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<CycElt> for CycElt {
            type Output = CycElt;
            fn $method(self, rhs: CycElt) -> CycElt {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        -&self
    }
}
