//! Integer q-expansions of θ, Δ, f and y, and the classical level-3 Eisenstein series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FormsError;
use crate::padic::{CycElt, CycRing};
use crate::series::{IntSeries, PowSeries, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormLabel {
    Theta,
    Delta,
    F,
    Y,
    EisensteinClassical(u32),
    EisensteinCharacter,
}

/// A q-expansion tagged with the form it represents.
#[derive(Clone, Debug)]
pub struct QExpansion<C: crate::series::Coefficient> {
    pub label: FormLabel,
    pub series: PowSeries<C>,
}

/// `θ = Σ_{(a,b) ∈ Z²} q^(a² + ab + b²)` by lattice enumeration.
pub fn theta_qexp(m: usize) -> QExpansion<BigInt> {
    assert!(m >= 1);
    // a² + ab + b² ≥ max(a², b²)/2 ... well, ≥ (a² + b²)/2
    let bound = (2.0 * (m as f64).sqrt()).ceil() as i64;
    let mut counts = vec![0i64; m];
    for a in -bound..=bound {
        for b in -bound..=bound {
            let n = a * a + a * b + b * b;
            if (n as usize) < m {
                counts[n as usize] += 1;
            }
        }
    }
    QExpansion {
        label: FormLabel::Theta,
        series: IntSeries::from_i64(Var::Q, &counts),
    }
}

// Multiplies in place by (1 - q^n)^e (e > 0) or divides by (1 - q^n)^(-e) (e < 0).
fn apply_euler_factor(c: &mut [BigInt], n: usize, e: i32) {
    let len = c.len();
    if n >= len {
        return;
    }
    for _ in 0..e.unsigned_abs() {
        if e > 0 {
            for k in (n..len).rev() {
                let t = c[k - n].clone();
                c[k] -= t;
            }
        } else {
            for k in n..len {
                let t = c[k - n].clone();
                c[k] += t;
            }
        }
    }
}

/// `Δ = q Π (1 - q^n)^24`.
pub fn delta_qexp(m: usize) -> QExpansion<BigInt> {
    assert!(m >= 2);
    let mut c = vec![BigInt::zero(); m - 1];
    c[0] = BigInt::one();
    for n in 1..m - 1 {
        apply_euler_factor(&mut c, n, 24);
    }
    c.insert(0, BigInt::zero());
    QExpansion {
        label: FormLabel::Delta,
        series: IntSeries::new(Var::Q, c),
    }
}

/// `f = q Π_{3∤n} (1 - q^n)^(-12)`.
pub fn f_qexp(m: usize) -> QExpansion<BigInt> {
    assert!(m >= 2);
    let mut c = vec![BigInt::zero(); m - 1];
    c[0] = BigInt::one();
    for n in (1..m - 1).filter(|n| n % 3 != 0) {
        apply_euler_factor(&mut c, n, -12);
    }
    c.insert(0, BigInt::zero());
    QExpansion {
        label: FormLabel::F,
        series: IntSeries::new(Var::Q, c),
    }
}

/// `y = (θ/V(θ) - 1)/6`, with the division by 6 checked to be exact.
pub fn y_qexp(m: usize) -> Result<QExpansion<BigInt>, FormsError> {
    assert!(m >= 2);
    let theta = theta_qexp(m).series;
    let ratio = theta
        .checked_div(&theta.v_op(Some(m)))
        .expect("V(θ) has constant term 1");
    let mut c = ratio.into_coeffs();
    c[0] -= 1;
    let six = BigInt::from(6);
    for (n, x) in c.iter_mut().enumerate() {
        let (q, r) = x.div_rem(&six);
        if !r.is_zero() {
            return Err(FormsError::NotDivisibleBySix { index: n });
        }
        *x = q;
    }
    Ok(QExpansion {
        label: FormLabel::Y,
        series: IntSeries::new(Var::Q, c),
    })
}

/// Bernoulli numbers `B_0 … B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        // Σ_{j=0}^{m} binom(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `ζ(1 - k) = -B_k / k`.
pub fn zeta_one_minus_k(k: u32) -> BigRational {
    let b = bernoulli(k as usize).pop().unwrap();
    -b / BigRational::from_integer(BigInt::from(k))
}

/// Leading constant `2 / ((1 - 3^(k-1)) ζ(1-k))` of `E_k` as an exact rational.
pub fn eisenstein_constant(k: u32) -> BigRational {
    let euler = BigRational::from_integer(BigInt::one() - BigInt::from(3).pow(k - 1));
    BigRational::from_integer(BigInt::from(2)) / (euler * zeta_one_minus_k(k))
}

/// The level-3 Eisenstein series `E_k`, `k ≥ 2` even, embedded in `ring`.
pub fn eisenstein_classical(
    k: u32,
    m: usize,
    ring: &CycRing,
) -> Result<QExpansion<CycElt>, FormsError> {
    if k < 2 || k % 2 == 1 {
        return Err(FormsError::InvalidWeight(format!(
            "classical weight must be even and at least 2, got {k}"
        )));
    }
    let constant = ring
        .from_rational(&eisenstein_constant(k))
        .map_err(|_| FormsError::NonIntegralConstant)?;
    let mut sums = vec![BigInt::zero(); m];
    for d in (1..m).filter(|d| d % 3 != 0) {
        let dk = BigInt::from(d).pow(k - 1);
        for n in (d..m).step_by(d) {
            sums[n] += &dk;
        }
    }
    let mut coeffs: Vec<CycElt> = sums.iter().map(|s| constant.mul_int(s)).collect();
    coeffs[0] = ring.one();
    Ok(QExpansion {
        label: FormLabel::EisensteinClassical(k),
        series: PowSeries::new(Var::Q, coeffs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &IntSeries, n: usize) -> Vec<i64> {
        s.coeffs()[..n]
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn theta_printed_terms() {
        let t = theta_qexp(10).series;
        assert_eq!(ints(&t, 8), vec![1, 6, 0, 6, 6, 0, 0, 12]);
    }

    #[test]
    fn delta_printed_terms() {
        let d = delta_qexp(6).series;
        assert_eq!(ints(&d, 5), vec![0, 1, -24, 252, -1472]);
    }

    #[test]
    fn tau_five_by_brute_force_product() {
        // expand q(1-q)^24(1-q^2)^24(1-q^3)^24(1-q^4)^24(1-q^5)^24 as plain polynomials
        let mut poly = vec![0i128; 1];
        poly[0] = 1;
        for n in 1..=5usize {
            for _ in 0..24 {
                let mut next = vec![0i128; poly.len() + n];
                for (i, c) in poly.iter().enumerate() {
                    next[i] += c;
                    next[i + n] -= c;
                }
                poly = next;
            }
        }
        assert_eq!(poly[4], 4830);
        assert_eq!(ints(&delta_qexp(6).series, 6)[5], 4830);
    }

    #[test]
    fn f_printed_terms() {
        let f = f_qexp(6).series;
        assert_eq!(ints(&f, 5), vec![0, 1, 12, 90, 508]);
    }

    #[test]
    fn y_printed_terms() {
        let y = y_qexp(14).unwrap().series;
        assert_eq!(
            ints(&y, 14),
            vec![0, 1, 0, 0, -5, 0, 0, 32, 0, 0, -198, 0, 0, 1214]
        );
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[6], r(1, 42));
        assert_eq!(zeta_one_minus_k(2), r(-1, 12));
    }

    #[test]
    fn e2_linear_coefficient() {
        // 2 / ((1 - 3)·ζ(-1)) = 2 / ((-2)(-1/12)) = 12
        assert_eq!(
            eisenstein_constant(2),
            BigRational::from_integer(BigInt::from(12))
        );
        let ring = CycRing::new(1, 30).unwrap();
        let e2 = eisenstein_classical(2, 10, &ring).unwrap().series;
        assert_eq!(*e2.coeff(0), ring.one());
        assert_eq!(*e2.coeff(1), ring.from_int(12));
        assert!(eisenstein_classical(3, 10, &ring).is_err());
    }
}
