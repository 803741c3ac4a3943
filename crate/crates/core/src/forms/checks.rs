//! Identity and valuation-bound checks on the concrete forms.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::character::{eisenstein_character, CharacterWeight};
use super::coords::{CoordKind, Coordinate};
use super::gkappa::g_kappa;
use super::qexp::{delta_qexp, eisenstein_classical, f_qexp, theta_qexp, y_qexp};
use super::FormsError;
use crate::padic::{v3_int, CycElt, CycRing};
use crate::report::CheckReport;
use crate::series::{Coefficient, F3Series, IntSeries, PowSeries, Var, F3};

fn first_mismatch<C: Coefficient>(a: &PowSeries<C>, b: &PowSeries<C>) -> Option<usize> {
    a.coeffs().iter().zip(b.coeffs()).position(|(x, y)| x != y)
}

fn push_eq<C: Coefficient>(
    report: &mut CheckReport,
    name: &str,
    identity: &str,
    lhs: &PowSeries<C>,
    rhs: &PowSeries<C>,
) {
    let n = lhs.trunc().min(rhs.trunc());
    match first_mismatch(lhs, rhs) {
        None => report.push(name, identity, true, format!("{n} terms")),
        Some(i) => report.push(
            name,
            identity,
            false,
            format!(
                "first difference at index {i}: {:?} vs {:?}",
                lhs.coeff(i),
                rhs.coeff(i)
            ),
        ),
    }
}

fn push_zero<C: Coefficient>(
    report: &mut CheckReport,
    name: &str,
    identity: &str,
    s: &PowSeries<C>,
) {
    match s.order() {
        None => report.push(name, identity, true, format!("{} terms", s.trunc())),
        Some(i) => report.push(
            name,
            identity,
            false,
            format!("first nonzero coefficient at index {i}: {:?}", s.coeff(i)),
        ),
    }
}

fn int_poly(var: Var, m: usize, coeffs: &[i64]) -> IntSeries {
    let mut c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
    c.resize(m.max(c.len()), BigInt::zero());
    IntSeries::new(var, c).truncate(m)
}

/// The exact U/V identities for `y` and `f`, `θ` as a U-eigenform, and
/// `f²Δ = V(Δ)`, all as truncated identities of `m`-term q-expansions.
pub fn fund_lemma_check(m: usize) -> Result<CheckReport, FormsError> {
    let mut report = CheckReport::new("fund-lemma");
    let big = 3 * m;
    let y = y_qexp(big)?.series;
    let f = f_qexp(big).series;
    let ym = y.clone().truncate(m);

    let u_y3 = y.pow(3).u_op();
    // y(1 + 3y + 9y²)
    let cubic = int_poly(Var::Q, m, &[0, 1, 3, 9]).compose(&ym)?;
    let one_6y = int_poly(Var::Q, m, &[1, 6]).compose(&ym)?;
    push_zero(&mut report, "U(y)", "U(y) = 0", &y.u_op());
    push_zero(&mut report, "U(y^2)", "U(y²) = 0", &y.pow(2).u_op());
    push_eq(
        &mut report,
        "U(y^3)",
        "U(y³)·(1+6y)³ = y(1+3y+9y²)",
        &(&u_y3 * &one_6y.pow(3)),
        &cubic,
    );
    for k in 0..=5u64 {
        push_zero(
            &mut report,
            &format!("U(y^{})", 3 * k + 1),
            &format!("U(y^{}) = 0", 3 * k + 1),
            &y.pow(3 * k + 1).u_op(),
        );
        push_zero(
            &mut report,
            &format!("U(y^{})", 3 * k + 2),
            &format!("U(y^{}) = 0", 3 * k + 2),
            &y.pow(3 * k + 2).u_op(),
        );
        if k >= 1 {
            push_eq(
                &mut report,
                &format!("U(y^{})", 3 * k),
                &format!("U(y^{}) = U(y³)^{k}", 3 * k),
                &y.pow(3 * k).u_op(),
                &u_y3.pow(k),
            );
        }
    }

    let fm = f.clone().truncate(m);
    let one_3y = int_poly(Var::Q, m, &[1, -3]).compose(&ym)?;
    push_eq(
        &mut report,
        "f in y",
        "f·(1-3y)³ = y(1+3y+9y²)",
        &(&fm * &one_3y.pow(3)),
        &cubic,
    );
    let u_f_rhs = int_poly(Var::Q, m, &[0, 90, 8748, 177147]).compose(&fm)?;
    push_eq(
        &mut report,
        "U(f)",
        "U(f) = 90f + 8748f² + 177147f³",
        &f.u_op(),
        &u_f_rhs,
    );
    let vf = f.clone().truncate(m / 3 + 1).v_op(Some(m));
    let one_27y3 = int_poly(Var::Q, m, &[1, 0, 0, -27]).compose(&ym)?;
    push_eq(
        &mut report,
        "V(f)",
        "V(f)·(1-27y³) = y³",
        &(&vf * &one_27y3),
        &ym.pow(3),
    );

    let delta = delta_qexp(m).series;
    let v_delta = delta_qexp(m / 3 + 1).series.v_op(Some(m));
    push_eq(
        &mut report,
        "f^2 Delta",
        "f²·Δ(q) = Δ(q³)",
        &(&fm.pow(2) * &delta),
        &v_delta,
    );

    let theta = theta_qexp(big).series;
    push_eq(
        &mut report,
        "U(theta)",
        "U(θ) = θ",
        &theta.u_op(),
        &theta.clone().truncate(m),
    );
    let theta2 = theta.pow(2);
    push_eq(
        &mut report,
        "U(theta^2)",
        "U(θ²) = θ²",
        &theta2.u_op(),
        &theta2.truncate(m),
    );
    Ok(report)
}

/// The printed leading coefficients of `θ`, `Δ`, `f`, `y`, `E_{κ₀}` and `f₀`.
pub fn printed_check() -> Result<CheckReport, FormsError> {
    let mut report = CheckReport::new("printed-expansions");
    let int_case = |report: &mut CheckReport, name: &str, s: &IntSeries, want: &[i64]| {
        let got: Vec<BigInt> = s.coeffs()[..want.len()].to_vec();
        let want_b: Vec<BigInt> = want.iter().map(|&x| BigInt::from(x)).collect();
        let ok = got == want_b;
        report.push(
            name,
            format!("leading coefficients {want:?}"),
            ok,
            format!("got {got:?}"),
        );
    };
    int_case(
        &mut report,
        "theta",
        &theta_qexp(14).series,
        &[1, 6, 0, 6, 6, 0, 0, 12],
    );
    int_case(
        &mut report,
        "Delta",
        &delta_qexp(6).series,
        &[0, 1, -24, 252, -1472],
    );
    int_case(&mut report, "f", &f_qexp(6).series, &[0, 1, 12, 90, 508]);
    int_case(
        &mut report,
        "y",
        &y_qexp(14)?.series,
        &[0, 1, 0, 0, -5, 0, 0, 32, 0, 0, -198, 0, 0, 1214],
    );

    let k0 = CharacterWeight::kappa0(30)?;
    let r = k0.ring();
    let w = |c: &[i64]| r.from_coeffs(c);
    let e = eisenstein_character(&k0, 6)?.series;
    let want_e = [w(&[1]), w(&[1, -1]), w(&[3]), w(&[1, -1]), w(&[4, 2])];
    let ok = e.coeffs()[..5] == want_e;
    report.push(
        "E_kappa0",
        "1 + (1-ω)q + 3q² + (1-ω)q³ + (4+2ω)q⁴",
        ok,
        format!("got {:?}", &e.coeffs()[..5]),
    );
    let f0 = e.checked_div(&e.v_op(Some(6)))?;
    let want_f0 = [w(&[1]), w(&[1, -1]), w(&[3]), w(&[0]), w(&[4, 5])];
    let ok = f0.coeffs()[..5] == want_f0;
    report.push(
        "f0",
        "E_κ₀/V(E_κ₀) = 1 + (1-ω)q + 3q² + (4+5ω)q⁴",
        ok,
        format!("got {:?}", &f0.coeffs()[..5]),
    );
    Ok(report)
}

/// `E_k` (k = 2, 4, 6) and `E_κ` (κ₀ and the conductor-27 weight with `ψ(2) = ζ₉`)
/// are fixed by U, to `m` terms.
pub fn eisenstein_check(m: usize) -> Result<CheckReport, FormsError> {
    let mut report = CheckReport::new("eisenstein");
    let ring = CycRing::new(1, 40)?;
    for k in [2u32, 4, 6] {
        let e = eisenstein_classical(k, 3 * m, &ring)?.series;
        let ok = e
            .coeffs()
            .iter()
            .all(|c| c.valuation().value() >= Rational64::zero());
        report.push(
            format!("E_{k} integral"),
            "all coefficients integral",
            ok,
            "",
        );
        push_eq(
            &mut report,
            &format!("U(E_{k})"),
            &format!("U(E_{k}) = E_{k}"),
            &e.u_op(),
            &e.clone().truncate(m),
        );
    }
    for (c, a) in [(9u64, 2i64), (27, 1)] {
        let kappa = CharacterWeight::new(c, a, 40)?;
        let e = eisenstein_character(&kappa, 3 * m)?.series;
        push_eq(
            &mut report,
            &format!("U(E_kappa) c={c}"),
            "U(E_κ) = E_κ",
            &e.u_op(),
            &e.clone().truncate(m),
        );
        // divisor sums over d prime to 3 agree at n and 3n
        let sums: Vec<CycElt> = (0..3 * m as u64)
            .map(|n| {
                let mut acc = kappa.ring().zero();
                for d in 1..=n {
                    if n % d == 0 {
                        acc = &acc + &kappa.chi(d);
                    }
                }
                acc
            })
            .collect();
        let ok = (1..m).all(|n| sums[3 * n] == sums[n]);
        report.push(
            format!("divisor sums c={c}"),
            "Σ_{3∤d|3n} χ(d) = Σ_{3∤d|n} χ(d)",
            ok,
            format!("{m} terms"),
        );
        let g = g_kappa(&kappa, m)?;
        report.push(
            format!("g_kappa integral c={c}"),
            "E_κ/V(E_κ) ∈ O⟦w₀y⟧",
            true,
            format!(
                "{} coefficients, worst precision {}",
                g.trunc(),
                min_precision(&g)
            ),
        );
    }
    report.extend(printed_check()?);
    report.extend(f0_cubic_check(60)?);
    Ok(report)
}

fn min_precision(s: &PowSeries<CycElt>) -> u32 {
    s.coeffs().iter().map(|c| c.precision()).min().unwrap_or(0)
}

fn poly(ring: &CycRing, var: Var, m: usize, coeffs: &[CycElt]) -> PowSeries<CycElt> {
    let mut c = coeffs.to_vec();
    c.resize(m.max(c.len()), ring.zero());
    PowSeries::new(var, c).truncate(m)
}

/// `f₀ = E_{κ₀}/V(E_{κ₀})` expanded in `y` to `m` terms.
pub fn f0_series(kappa0: &CharacterWeight, m: usize) -> Result<PowSeries<CycElt>, FormsError> {
    let e = eisenstein_character(kappa0, m)?.series;
    let f0 = e.checked_div(&e.v_op(Some(m)))?;
    Coordinate::new(CoordKind::Y, m)?.from_q(&f0)
}

/// Left side of the cubic relation satisfied by `f₀` in `O_K⟦y⟧`:
/// `9y³f₀³ + (-27y³-9y²-3y)f₀² + ((27-27ω)y³+27y²+9y+(2+ω))f₀
///  + ((-27+27ω)y³-27y²-9y-(2+ω))`.
pub fn f0_cubic_residual(f0: &PowSeries<CycElt>) -> PowSeries<CycElt> {
    let ring = f0.coeff(0).ring().clone();
    let m = f0.trunc();
    let o = ring.omega();
    let i = |n: i64| ring.from_int(n);
    let om = |a: i64, b: i64| &i(a) + &o.mul_int(&BigInt::from(b));
    let v = Var::Y;
    let p3 = poly(&ring, v, m, &[i(0), i(0), i(0), i(9)]);
    let p2 = poly(&ring, v, m, &[i(0), i(-3), i(-9), i(-27)]);
    let p1 = poly(&ring, v, m, &[om(2, 1), i(9), i(27), om(27, -27)]);
    let p0 = poly(&ring, v, m, &[om(-2, -1), i(-9), i(-27), om(-27, 27)]);
    let f2 = f0 * f0;
    let f3 = &f2 * f0;
    let a = &(&p3 * &f3) + &(&p2 * &f2);
    let b = &(&p1 * f0) + &p0;
    &a + &b
}

/// The same relation after dividing by `-1-2ω` and substituting `X = w₀y`:
/// `X³g³ + (-3X³+(1-ω)X²+ωX)g² + ((3-3ω)X³-(3-3ω)X²-3ωX+ω)g
///  + ((-3+3ω)X³+(3-3ω)X²+3ωX-ω)` with `g = g_{κ₀}`.
pub fn f0_cubic_x_residual(g: &PowSeries<CycElt>) -> PowSeries<CycElt> {
    let ring = g.coeff(0).ring().clone();
    let m = g.trunc();
    let o = ring.omega();
    let z = ring.zero();
    let om = |a: i64, b: i64| &ring.from_int(a) + &o.mul_int(&BigInt::from(b));
    let v = Var::X;
    let p3 = poly(&ring, v, m, &[z.clone(), z.clone(), z.clone(), ring.one()]);
    let p2 = poly(&ring, v, m, &[z.clone(), om(0, 1), om(1, -1), om(-3, 0)]);
    let p1 = poly(&ring, v, m, &[om(0, 1), om(0, -3), om(-3, 3), om(3, -3)]);
    let p0 = poly(&ring, v, m, &[om(0, -1), om(0, 3), om(3, -3), om(-3, 3)]);
    let g2 = g * g;
    let g3 = &g2 * g;
    let a = &(&p3 * &g3) + &(&p2 * &g2);
    let b = &(&p1 * g) + &p0;
    &a + &b
}

/// The reduction of a series with integral coefficients to `F_3`.
pub fn reduce_series(s: &PowSeries<CycElt>) -> Result<F3Series, FormsError> {
    let mut out = Vec::with_capacity(s.trunc());
    for c in s.coeffs() {
        out.push(F3::new(c.residue()? as i64));
    }
    Ok(PowSeries::new(s.var(), out))
}

/// The cubic relations for `f₀` (in `y`) and `g_{κ₀}` (in `X`), and the reduced
/// cubic `X³ḡ³ + Xḡ² + ḡ - 1 = 0` over `F_3`, to `m` terms.
pub fn f0_cubic_check(m: usize) -> Result<CheckReport, FormsError> {
    let mut report = CheckReport::new("f0-cubic");
    let precision = (m as u32) / 2 + 40;
    let k0 = CharacterWeight::kappa0(precision)?;
    let f0 = f0_series(&k0, m)?;
    push_zero(
        &mut report,
        "f0 cubic in y",
        "9y³f₀³ + (-27y³-9y²-3y)f₀² + ((27-27ω)y³+27y²+9y+(2+ω))f₀ + … = 0",
        &f0_cubic_residual(&f0),
    );
    let g = g_kappa(&k0, m)?;
    push_zero(
        &mut report,
        "g cubic in X",
        "X³g³ + (-3X³+(1-ω)X²+ωX)g² + ((3-3ω)X³-(3-3ω)X²-3ωX+ω)g + … = 0",
        &f0_cubic_x_residual(&g),
    );
    let gb = reduce_series(&g)?;
    push_zero(
        &mut report,
        "reduced cubic",
        "X³ḡ³ + Xḡ² + ḡ - 1 = 0 over F_3",
        &crate::residue::cubic_residual(&gb),
    );
    Ok(report)
}

fn v3_rational(n: &BigInt) -> Option<Rational64> {
    v3_int(n).map(|v| Rational64::from_integer(v as i64))
}

fn check_bounds_int(
    report: &mut CheckReport,
    name: &str,
    identity: &str,
    s: &IntSeries,
    bound: impl Fn(usize) -> Rational64,
) {
    let bad = (1..s.trunc()).find(|&j| match v3_rational(s.coeff(j)) {
        None => false,
        Some(v) => v < bound(j),
    });
    match bad {
        None => report.push(name, identity, true, format!("{} terms", s.trunc())),
        Some(j) => report.push(
            name,
            identity,
            false,
            format!(
                "coefficient {j} = {} has valuation below {}",
                s.coeff(j),
                bound(j)
            ),
        ),
    }
}

fn check_bounds_cyc(
    report: &mut CheckReport,
    name: &str,
    identity: &str,
    s: &PowSeries<CycElt>,
    bound: impl Fn(usize) -> Rational64,
) {
    let bad = (1..s.trunc()).find(|&j| !s.coeff(j).valuation().is_at_least(bound(j)));
    match bad {
        None => report.push(name, identity, true, format!("{} terms", s.trunc())),
        Some(j) => report.push(
            name,
            identity,
            false,
            format!(
                "coefficient {j} = {} has valuation {} below {}",
                s.coeff(j),
                s.coeff(j).valuation(),
                bound(j)
            ),
        ),
    }
}

fn minus_one<C: Coefficient>(s: PowSeries<C>) -> PowSeries<C> {
    let mut s = s;
    let c0 = s.coeff(0).sub_ref(&s.coeff(0).one_like());
    s.set_coeff(0, c0);
    s
}

/// Coefficient valuation bounds for the specializations of the family `θ^k` at
/// the integer weight `k`, to `m` terms in the stated coordinate.
pub fn member_lemma_check(k: u32, m: usize) -> Result<CheckReport, FormsError> {
    assert!(k >= 1);
    let mut report = CheckReport::new(format!("member-lemma k={k}"));
    let vk = Rational64::from_integer(v3_int(&BigInt::from(k)).unwrap() as i64);
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let jr = |j: usize| Rational64::from_integer(j as i64);
    let fc = Coordinate::new(CoordKind::F, m)?;
    let yc = Coordinate::new(CoordKind::Y, m)?;

    let theta = theta_qexp(3 * m).series;
    let t = theta.pow(k as u64);
    let tm = t.clone().truncate(m);
    let v_t = t.clone().truncate(m / 3 + 1).v_op(Some(m));
    let u_t = t.u_op();
    let vu_t = u_t.clone().truncate(m / 3 + 1).v_op(Some(m));

    let th_m = theta.clone().truncate(m);
    let v_th = theta.clone().truncate(m / 3 + 1).v_op(Some(m));
    let q1 = fc.from_q(&minus_one(th_m.checked_div(&v_th)?))?;
    check_bounds_int(
        &mut report,
        "(i)",
        "θ/V(θ) ∈ 1 + 3f·O⟦3f⟧: v([f^j]) ≥ j",
        &q1,
        jr,
    );

    let q2 = fc.from_q(&minus_one(tm.checked_div(&v_t)?))?;
    check_bounds_int(
        &mut report,
        "(ii)",
        "T/V(T) ∈ 1 + 3kf·O⟦k,πf⟧: v([f^j]) ≥ 1 + v(k) + (j-1)/2",
        &q2,
        |j| r(1, 1) + vk + r(j as i64 - 1, 2),
    );

    let q3 = fc.from_q(&minus_one(u_t.checked_div(&tm)?))?;
    check_bounds_int(
        &mut report,
        "(iii)",
        "U(T)/T ∈ 1 + 9kf·O⟦k,3πf⟧: v([f^j]) ≥ 2 + v(k) + 3(j-1)/2",
        &q3,
        |j| r(2, 1) + vk + r(3 * (j as i64 - 1), 2),
    );

    let ring = CycRing::new(1, 2 * m as u32 + 12)?;
    let omega = ring.omega();
    let t_c = tm.map(|c| ring.from_bigint(c));
    let s1 = t_c.sigma_op(&omega);
    let s2 = s1.sigma_op(&omega);
    for (label, s) in [("(iv) σ", s1), ("(iv) σ²", s2)] {
        let q = yc.from_q(&minus_one(s.checked_div(&t_c)?))?;
        check_bounds_cyc(
            &mut report,
            label,
            "σ^i(T)/T ∈ 1 + 3πky·O⟦k,3y⟧: v([y^j]) ≥ 3/2 + v(k) + (j-1)",
            &q,
            |j| r(3, 2) + vk + jr(j) - r(1, 1),
        );
    }

    let q5 = yc.from_q(&minus_one(vu_t.checked_div(&tm)?))?;
    check_bounds_int(
        &mut report,
        "(v)",
        "VU(T)/T ∈ 1 + πky·O⟦k,3y⟧: v([y^j]) ≥ 1/2 + v(k) + (j-1)",
        &q5,
        |j| r(1, 2) + vk + jr(j) - r(1, 1),
    );

    let q6 = yc.from_q(&minus_one(u_t.checked_div(&vu_t)?))?;
    check_bounds_int(
        &mut report,
        "(vi)",
        "U(T)/VU(T) ∈ 1 + 3ky·Z_3⟦k,3y⟧: v([y^j]) ≥ 1 + v(k) + (j-1)",
        &q6,
        |j| vk + jr(j),
    );
    Ok(report)
}

fn random_elt(rng: &mut ChaCha8Rng, ring: &CycRing, bound: i64) -> CycElt {
    let c: Vec<i64> = (0..ring.degree())
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    ring.from_coeffs(&c)
}

fn random_series(rng: &mut ChaCha8Rng, ring: &CycRing, m: usize) -> PowSeries<CycElt> {
    PowSeries::new(Var::Q, (0..m).map(|_| random_elt(rng, ring, 50)).collect())
}

/// `U(R⟦rf⟧) ⊆ R⟦r³f⟧` for `r ∈ {3, π}`: for random `g = Σ a_j (rf)^j` the
/// coefficient of `f^i` in `U(g)` has valuation at least `3i·v(r)`, to `m` terms.
pub fn containment_check(trials: usize, m: usize, seed: u64) -> Result<CheckReport, FormsError> {
    let mut report = CheckReport::new("containment");
    let big = 3 * m;
    let fc = Coordinate::new(CoordKind::F, m)?;
    let f = f_qexp(big).series;
    // U(f^j) in f-coordinates
    let mut table: Vec<IntSeries> = Vec::with_capacity(big);
    let mut p = IntSeries::one(Var::Q, big, &BigInt::zero());
    for _ in 0..big {
        table.push(fc.from_q(&p.u_op())?);
        p = &p * &f;
    }
    let ring = CycRing::new(1, big as u32 + 12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (label, r, vr) in [
        ("r = 3", ring.from_int(3), Rational64::one()),
        ("r = π", ring.pi(), Rational64::new(1, 2)),
    ] {
        let mut failure = None;
        for trial in 0..trials {
            let mut out = vec![ring.zero(); m];
            let mut rj = ring.one();
            for row in &table {
                let a = &random_elt(&mut rng, &ring, 50) * &rj;
                for (i, u) in row.coeffs().iter().enumerate() {
                    if !u.is_zero() {
                        out[i] = &out[i] + &a.mul_int(u);
                    }
                }
                rj = &rj * &r;
            }
            let bad = (0..m).find(|&i| {
                !out[i]
                    .valuation()
                    .is_at_least(vr * Rational64::from_integer(3 * i as i64))
            });
            if let Some(i) = bad {
                failure = Some(format!(
                    "trial {trial}: coefficient of f^{i} has valuation {}",
                    out[i].valuation()
                ));
                break;
            }
        }
        report.push(
            format!("containment {label}"),
            "U(R⟦rf⟧) ⊆ R⟦r³f⟧: v([f^i] U(g)) ≥ 3i·v(r)",
            failure.is_none(),
            failure.unwrap_or_else(|| format!("{trials} trials, {m} terms")),
        );
    }
    Ok(report)
}

/// Randomized checks of `U(g·V(h)) = h·U(g)`, `V(gh) = V(g)V(h)` and
/// `3VU(g) = g + σ(g) + σ²(g)` over `Z_3[ω]`.
pub fn uv_property_check(trials: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("uv-properties");
    let ring = CycRing::new(1, 30).expect("valid ring");
    let omega = ring.omega();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = 12;
    let (mut f1, mut f2, mut f3) = (None, None, None);
    for trial in 0..trials {
        let g = random_series(&mut rng, &ring, 3 * m);
        let h = random_series(&mut rng, &ring, m);
        let lhs = (&g * &h.v_op(Some(3 * m))).u_op();
        let rhs = &h * &g.u_op();
        if f1.is_none() && lhs != rhs {
            f1 = Some(trial);
        }
        let (a, b) = (g.clone().truncate(m), h.clone());
        if f2.is_none() && (&a * &b).v_op(None) != &a.v_op(None) * &b.v_op(None) {
            f2 = Some(trial);
        }
        let s1 = g.sigma_op(&omega);
        let s2 = s1.sigma_op(&omega);
        let three_vu = g.u_op().v_op(Some(3 * m)).scale_int(&BigInt::from(3));
        let sum = (&(&g + &s1) + &s2).truncate(three_vu.trunc());
        if f3.is_none() && three_vu != sum {
            f3 = Some(trial);
        }
    }
    let detail = |f: Option<usize>| match f {
        None => format!("{trials} trials"),
        Some(t) => format!("counterexample at trial {t}"),
    };
    report.push("U(gV(h))", "U(g·V(h)) = h·U(g)", f1.is_none(), detail(f1));
    report.push(
        "V multiplicative",
        "V(gh) = V(g)·V(h)",
        f2.is_none(),
        detail(f2),
    );
    report.push(
        "3VU",
        "3·VU(g) = g + σ(g) + σ²(g)",
        f3.is_none(),
        detail(f3),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fund_lemma_small() {
        let r = fund_lemma_check(40).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn printed() {
        let r = printed_check().unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn cubic_holds_and_perturbation_breaks_it() {
        let r = f0_cubic_check(30).unwrap();
        assert!(r.passed(), "{r}");
        let k0 = CharacterWeight::kappa0(40).unwrap();
        let mut f0 = f0_series(&k0, 20).unwrap();
        let c = f0.coeff(7) + &k0.ring().one();
        f0.set_coeff(7, c);
        assert_eq!(f0_cubic_residual(&f0).order(), Some(7));
    }

    #[test]
    fn member_lemma_k1() {
        let r = member_lemma_check(1, 20).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn containment_and_uv_small() {
        let r = containment_check(3, 12, 7).unwrap();
        assert!(r.passed(), "{r}");
        let r = uv_property_check(5, 7);
        assert!(r.passed(), "{r}");
    }
}
