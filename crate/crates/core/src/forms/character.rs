//! Finite-order weights of 3-power conductor and their Eisenstein series.

use num_rational::Rational64;

use super::qexp::{FormLabel, QExpansion};
use super::FormsError;
use crate::padic::{CycElt, CycRing, PadicError};
use crate::series::{PowSeries, Var};

/// A weight `κ` of conductor `c = 3^(m+1)`, determined by `ψ(2) = ζ^a` with
/// `ζ = ζ_{3^m}` and `3 ∤ a`.
///
/// The weight point is `w₀ = ψ(4) - 1 = ζ^(2a) - 1`, of valuation `1/(2·3^(m-1))`.
/// The Eisenstein series uses the odd twist `χ = ε·ψ`, where `ε` is the
/// quadratic character mod 3; since 2 generates `(Z/c)^×`, `χ(2) = -ζ^a`.
#[derive(Clone, Debug)]
pub struct CharacterWeight {
    conductor: u64,
    generator_exponent: i64,
    ring: CycRing,
    w0: CycElt,
    // (w₀/π)^(-1)
    w0_unit_inv: CycElt,
    v: Rational64,
    // discrete logarithm to base 2 modulo the conductor (u32::MAX off the unit group)
    log2: Vec<u32>,
}

impl CharacterWeight {
    pub fn new(
        conductor: u64,
        generator_exponent: i64,
        precision: u32,
    ) -> Result<Self, FormsError> {
        let mut m = 0u32;
        let mut c = conductor;
        while c > 1 && c.is_multiple_of(3) {
            c /= 3;
            m += 1;
        }
        if c != 1 || m == 0 {
            return Err(FormsError::InvalidWeight(format!(
                "conductor {conductor} is not a power of 3"
            )));
        }
        if m == 1 {
            return Err(FormsError::InvalidWeight(
                "conductor 3 gives the trivial weight w0 = 0, outside 1/3 < |w0| < 1".into(),
            ));
        }
        let m = m - 1;
        if generator_exponent.rem_euclid(3) == 0 {
            return Err(FormsError::InvalidWeight(format!(
                "generator exponent {generator_exponent} is divisible by 3: the character does not have conductor {conductor}"
            )));
        }
        let ring = CycRing::new(m, precision)?;
        let order = ring.root_order() as i64;
        let a = generator_exponent.rem_euclid(order);
        let b = (2 * a).rem_euclid(order) as usize;
        let w0 = &ring.zeta_pow(2 * a) - &ring.one();
        // ζ^b - 1 = π·(1 + ζ + … + ζ^(b-1))
        let w0_unit_inv = ring.from_coeffs(&vec![1i64; b]).invert_unit()?;

        let mut log2 = vec![u32::MAX; conductor as usize];
        let mut x = 1u64;
        for j in 0..2 * order as u32 {
            log2[x as usize] = j;
            x = x * 2 % conductor;
        }
        debug_assert_eq!(x, 1);

        Ok(CharacterWeight {
            conductor,
            generator_exponent: a,
            v: Rational64::new(1, ring.degree() as i64),
            ring,
            w0,
            w0_unit_inv,
            log2,
        })
    }

    /// The conductor-9 weight with `κ₀(2) = ω + 1`, i.e. `ψ(2) = ω²`, `w₀ = ω - 1`.
    pub fn kappa0(precision: u32) -> Result<Self, FormsError> {
        Self::new(9, 2, precision)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `a` with `ψ(2) = ζ^a`, reduced modulo `3^m`.
    pub fn generator_exponent(&self) -> i64 {
        self.generator_exponent
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn w0(&self) -> &CycElt {
        &self.w0
    }

    /// `v(w₀)`.
    pub fn v(&self) -> Rational64 {
        self.v
    }

    fn log(&self, d: u64) -> Option<u32> {
        let l = self.log2[(d % self.conductor) as usize];
        (l != u32::MAX).then_some(l)
    }

    /// `(sign, k)` with `χ(d) = sign·ζ^k`, or `None` when `3 | d`.
    pub fn chi_parts(&self, d: u64) -> Option<(i64, usize)> {
        let j = self.log(d)? as i64;
        let order = self.ring.root_order() as i64;
        let sign = if j % 2 == 0 { 1 } else { -1 };
        Some((
            sign,
            (self.generator_exponent * j).rem_euclid(order) as usize,
        ))
    }

    /// The odd character `χ(d)`; zero when `3 | d`.
    pub fn chi(&self, d: u64) -> CycElt {
        match self.chi_parts(d) {
            Some((s, k)) => {
                let z = self.ring.zeta_pow(k as i64);
                if s < 0 {
                    -z
                } else {
                    z
                }
            }
            None => self.ring.zero(),
        }
    }

    /// The even 3-power-order character `ψ(d)`; zero when `3 | d`.
    pub fn psi(&self, d: u64) -> CycElt {
        match self.chi_parts(d) {
            Some((_, k)) => self.ring.zeta_pow(k as i64),
            None => self.ring.zero(),
        }
    }

    /// `z / w₀^j`, failing if `z` is not divisible by `w₀^j`.
    pub fn div_by_w0_pow(&self, z: &CycElt, j: u32) -> Result<CycElt, PadicError> {
        Ok(&z.div_uniformizer_pow(j)? * &self.w0_unit_inv.pow(j as u64))
    }

    pub fn mul_w0_pow(&self, z: &CycElt, j: u32) -> CycElt {
        z * &self.w0.pow(j as u64)
    }
}

/// `E_κ = 1 - (Σ_{a<c} a·χ(a) / 2c)^(-1) Σ_n (Σ_{3∤d|n} χ(d)) q^n` to `m` terms.
pub fn eisenstein_character(
    kappa: &CharacterWeight,
    m: usize,
) -> Result<QExpansion<CycElt>, FormsError> {
    let ring = kappa.ring();
    let c = kappa.conductor;
    let order = ring.root_order() as usize;

    let mut bern = vec![0i64; order];
    for d in 1..c {
        if let Some((s, k)) = kappa.chi_parts(d) {
            bern[k] += s * d as i64;
        }
    }
    let s = ring.from_coeffs(&bern);
    let constant = ring
        .from_int(-2 * c as i64)
        .div_exact(&s)
        .map_err(|_| FormsError::NonIntegralConstant)?;

    // divisor sums as integer combinations of powers of ζ
    let mut sums = vec![vec![0i64; order]; m];
    for d in 1..m as u64 {
        if let Some((s, k)) = kappa.chi_parts(d) {
            for n in (d as usize..m).step_by(d as usize) {
                sums[n][k] += s;
            }
        }
    }
    let mut coeffs = Vec::with_capacity(m);
    coeffs.push(ring.one());
    for (n, row) in sums.iter().enumerate().skip(1) {
        let a = &constant * &ring.from_coeffs(row);
        if a.valuation().value() < Rational64::from_integer(0) {
            return Err(FormsError::NonIntegral {
                index: n,
                detail: a.to_string(),
            });
        }
        coeffs.push(a);
    }
    Ok(QExpansion {
        label: FormLabel::EisensteinCharacter,
        series: PowSeries::new(Var::Q, coeffs),
    })
}
