use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use slopes_core::padic::{v3_int, CycElt, CycRing, Valuation};
use slopes_core::residue::{r_series, uniqueness_probe};
use slopes_core::series::{IntSeries, Var};
use slopes_core::spectral::{char_series_of, newton_polygon_of, principal_minor_coefficients};

// ---- norm oracle -------------------------------------------------------

/// `z·x mod x^{2h} + x^h + 1`, on plain integer vectors.
fn times_x(z: &[BigInt], h: usize) -> Vec<BigInt> {
    let n = z.len();
    let top = z[n - 1].clone();
    let mut out = vec![BigInt::zero(); n];
    out[1..n].clone_from_slice(&z[..n - 1]);
    out[0] -= &top;
    out[h] -= &top;
    out
}

/// Fraction-free (Bareiss) determinant over Z.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `N(z)` as the determinant of multiplication by `z` on the power basis.
fn norm(z: &[i64]) -> BigInt {
    let n = z.len();
    let h = n / 2;
    let mut col: Vec<BigInt> = z.iter().map(|&c| BigInt::from(c)).collect();
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        cols.push(col.clone());
        col = times_x(&col, h);
    }
    let rows = (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect();
    bareiss(rows)
}

fn norm_valuation(z: &[i64]) -> Rational64 {
    let n = norm(z);
    Rational64::new(v3_int(&n).unwrap() as i64, z.len() as i64)
}

#[test]
fn norm_oracle_on_known_elements() {
    // w₀ for conductors 9 and 27
    assert_eq!(norm_valuation(&[-1, 1]), Rational64::new(1, 2));
    assert_eq!(norm_valuation(&[-1, 0, 1, 0, 0, 0]), Rational64::new(1, 6));
    let ring = CycRing::new(2, 40).unwrap();
    let w0 = &ring.zeta_pow(2) - &ring.one();
    assert_eq!(w0.valuation(), Valuation::Exact(Rational64::new(1, 6)));
}

fn small_coeffs(deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-30i64..=30, deg).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_matches_norm(z in small_coeffs(6)) {
        let ring = CycRing::new(2, 60).unwrap();
        let e = ring.from_coeffs(&z);
        prop_assert_eq!(e.valuation(), Valuation::Exact(norm_valuation(&z)));
    }

    #[test]
    fn valuation_is_additive(a in small_coeffs(6), b in small_coeffs(6)) {
        let ring = CycRing::new(2, 40).unwrap();
        let (x, y) = (ring.from_coeffs(&a), ring.from_coeffs(&b));
        if let (Some(vx), Some(vy)) = (x.valuation().exact(), y.valuation().exact()) {
            prop_assert_eq!((&x * &y).valuation(), Valuation::Exact(vx + vy));
        }
    }

    #[test]
    fn residue_is_a_homomorphism(a in small_coeffs(2), b in small_coeffs(2)) {
        let ring = CycRing::new(1, 20).unwrap();
        let (x, y) = (ring.from_coeffs(&a), ring.from_coeffs(&b));
        let (rx, ry) = (x.residue().unwrap(), y.residue().unwrap());
        prop_assert_eq!((&x + &y).residue().unwrap(), (rx + ry) % 3);
        prop_assert_eq!((&x * &y).residue().unwrap(), (rx * ry) % 3);
    }

    #[test]
    fn uniformizer_division_undoes_multiplication(a in small_coeffs(6)) {
        let ring = CycRing::new(2, 30).unwrap();
        let z = ring.from_coeffs(&a);
        let back = (&ring.pi() * &z).div_uniformizer().unwrap();
        prop_assert_eq!(&back, &z);
        prop_assert!(back.precision() >= 29);
    }
}

#[test]
fn totally_ramified() {
    for m in 1..=3 {
        let ring = CycRing::new(m, 30).unwrap();
        let e = ring.degree() as u64;
        let u = ring.pi().pow(e).div_exact(&ring.from_int(3)).unwrap();
        assert_eq!(
            u.valuation(),
            Valuation::Exact(Rational64::zero()),
            "m = {m}"
        );
    }
}

#[test]
fn factorial_valuation_bound() {
    let mut f = BigInt::one();
    for n in 1..=200u32 {
        f *= n;
        let v = v3_int(&f).unwrap();
        assert!(2 * v < n, "n = {n}");
    }
}

// ---- series ------------------------------------------------------------

fn int_series(len: usize) -> impl Strategy<Value = IntSeries> {
    prop::collection::vec(-50i64..=50, len).prop_map(|c| IntSeries::from_i64(Var::Q, &c))
}

fn unit_series(len: usize) -> impl Strategy<Value = IntSeries> {
    (prop::bool::ANY, prop::collection::vec(-50i64..=50, len - 1)).prop_map(|(neg, rest)| {
        let mut c = vec![if neg { -1 } else { 1 }];
        c.extend(rest);
        IntSeries::from_i64(Var::Q, &c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn u_of_g_times_v_h(g in int_series(60), h in int_series(20)) {
        let lhs = (&g * &h.v_op(Some(60))).u_op();
        let rhs = &h * &g.u_op();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn u_of_g_over_v_h(g in int_series(60), h in unit_series(20)) {
        let lhs = g.checked_div(&h.v_op(Some(60))).unwrap().u_op();
        let rhs = g.u_op().checked_div(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn v_is_multiplicative(g in int_series(20), h in int_series(20)) {
        prop_assert_eq!((&g * &h).v_op(None), &g.v_op(None) * &h.v_op(None));
    }

    #[test]
    fn u_and_v_are_linear(g in int_series(40), h in int_series(40), c in -9i64..=9) {
        let c = BigInt::from(c);
        let comb = &g.scale_int(&c) + &h;
        prop_assert_eq!(comb.u_op(), &g.u_op().scale_int(&c) + &h.u_op());
        prop_assert_eq!(comb.v_op(None), &g.v_op(None).scale_int(&c) + &h.v_op(None));
    }

    #[test]
    fn reversion_is_an_involution(rest in prop::collection::vec(-20i64..=20, 18), neg in prop::bool::ANY) {
        let mut c = vec![0, if neg { -1 } else { 1 }];
        c.extend(rest);
        let s = IntSeries::from_i64(Var::Q, &c);
        let r = s.reversion().unwrap();
        prop_assert_eq!(r.reversion().unwrap(), s.clone());
        // s(r(q)) = q
        prop_assert_eq!(s.compose(&r).unwrap(), IntSeries::gen(Var::Q, 20, &BigInt::zero()));
    }
}

// ---- residue field -----------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frobenius_identity(m in 2usize..300) {
        let r = r_series(m);
        let x = r.pow(3);
        let diff = &r - &x;
        for (i, c) in diff.coeffs().iter().enumerate() {
            prop_assert_eq!(c.value(), u8::from(i == 1));
        }
    }

    #[test]
    fn g_bar_is_isolated(j in 1usize..60) {
        prop_assert!(uniqueness_probe(80, &[j]).unwrap());
    }
}

// ---- spectral ----------------------------------------------------------

fn random_matrix(ring: &CycRing, vals: &[i64], n: usize) -> Vec<Vec<CycElt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ring.from_coeffs(&[vals[2 * (i * n + j)], vals[2 * (i * n + j) + 1]]))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn char_series_equals_principal_minor_sums(vals in prop::collection::vec(-500i64..=500, 72)) {
        let ring = CycRing::new(1, 20).unwrap();
        let m = random_matrix(&ring, &vals, 6);
        let cs = char_series_of(&m, &ring, 6).unwrap();
        prop_assert_eq!(cs.coeffs, principal_minor_coefficients(&m, &ring));
    }

    #[test]
    fn newton_polygon_is_convex(vals in prop::collection::vec((0i64..40, 1i64..7), 1..12)) {
        let vs: Vec<Valuation> = vals.iter().map(|&(n, d)| Valuation::Exact(Rational64::new(n, d))).collect();
        let np = newton_polygon_of(&vs).unwrap();
        for w in np.slopes.windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        for v in &np.vertices {
            prop_assert!(np.points.contains(v));
        }
        let total: usize = np.slopes.iter().map(|s| s.1).sum();
        prop_assert_eq!(total, np.vertices.last().unwrap().0 - np.vertices[0].0);
        // every point lies on or above the hull
        for &(a, v) in &np.points {
            for w in np.vertices.windows(2) {
                let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                if x0 <= a && a <= x1 {
                    let h = y0 + (y1 - y0) * Rational64::new((a - x0) as i64, (x1 - x0) as i64);
                    prop_assert!(v >= h);
                }
            }
        }
    }
}

// keep the integer helpers honest
#[test]
fn bareiss_agrees_on_small_matrix() {
    let m = vec![
        vec![BigInt::from(2), BigInt::from(-1), BigInt::from(0)],
        vec![BigInt::from(-1), BigInt::from(2), BigInt::from(-1)],
        vec![BigInt::from(0), BigInt::from(-1), BigInt::from(2)],
    ];
    assert_eq!(bareiss(m), BigInt::from(4));
    // N(ζ₃ - 1) = 3, N(2) = 4 over Q(ζ₃)
    assert_eq!(norm(&[-1, 1]), BigInt::from(3));
    assert_eq!(norm(&[2, 0]).abs(), BigInt::from(4));
    assert!(norm(&[1, 1]).is_odd());
}
