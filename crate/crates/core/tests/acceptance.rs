//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use slopes_core::forms::{
    containment_check, f0_cubic_check, fund_lemma_check, g_kappa, member_lemma_check,
    printed_check, reduce_series, uv_property_check, CharacterWeight,
};
use slopes_core::padic::CycRing;
use slopes_core::report::CheckReport;
use slopes_core::residue::{
    cubic_residual, det_tbar, g_bar, g_bar_universality_check, r_series, st_identity_check,
};
use slopes_core::series::Var;
use slopes_core::spectral::{
    slopes, strip_lemma_property, u_matrix_gf, u_matrix_qspace, SlopeReport,
};

type Verdict = Result<String, String>;

fn report_verdict(reports: &[CheckReport]) -> Verdict {
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    match reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (r, c)))
    {
        None => Ok(format!("{total} checks")),
        Some((r, c)) => Err(format!("{} / {}: {}", r.suite, c.name, c.detail)),
    }
}

fn within(limit: Duration, elapsed: Duration, v: Verdict) -> Verdict {
    let v = v?;
    if elapsed > limit {
        return Err(format!("{v}, but took {elapsed:.2?} > {limit:?}"));
    }
    Ok(v)
}

fn c1() -> Verdict {
    report_verdict(&[fund_lemma_check(100).map_err(|e| e.to_string())?])
}

fn c2() -> Verdict {
    report_verdict(&[printed_check().map_err(|e| e.to_string())?])
}

fn c3() -> Verdict {
    let mut reports = vec![f0_cubic_check(60).map_err(|e| e.to_string())?];
    // the reduction of the actual g_κ₀, 100 terms
    let k = CharacterWeight::kappa0(90).map_err(|e| e.to_string())?;
    let g = reduce_series(&g_kappa(&k, 100).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .with_var(Var::X);
    let mut r = CheckReport::new("reduced cubic");
    let res = cubic_residual(&g);
    r.push(
        "X³ḡ³ + Xḡ² + ḡ - 1",
        "reduced cubic",
        g.trunc() == 100 && res.is_zero(),
        format!("{} terms", res.trunc()),
    );
    let closed = g_bar(100).map_err(|e| e.to_string())?;
    r.push(
        "closed form",
        "ḡ(g_κ₀) = closed form",
        closed == g,
        "100 terms",
    );
    let rr = r_series(100);
    let frob = &rr - &rr.pow(3);
    let x_ok = frob
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| c.value() == u8::from(i == 1));
    r.push(
        "Frobenius",
        "r - r³ = X",
        x_ok && frob.trunc() == 100,
        "100 terms",
    );
    reports.push(r);
    report_verdict(&reports)
}

fn c4() -> Verdict {
    let k0 = CharacterWeight::kappa0(80).map_err(|e| e.to_string())?;
    let k27 = CharacterWeight::new(27, 1, 80).map_err(|e| e.to_string())?;
    report_verdict(&[g_bar_universality_check(&[k0, k27], 81).map_err(|e| e.to_string())?])
}

fn c5() -> Verdict {
    let k = CharacterWeight::kappa0(48).map_err(|e| e.to_string())?;
    let g = g_kappa(&k, 12).map_err(|e| e.to_string())?;
    let a = u_matrix_gf(&k, 12, &g).map_err(|e| e.to_string())?;
    let b = u_matrix_qspace(&k, 12).map_err(|e| e.to_string())?;
    match a.first_difference(&b, 12) {
        None => Ok(format!(
            "144 entries, min precision {}",
            a.min_precision().min(b.min_precision())
        )),
        Some((i, j)) => Err(format!("n_{i},{j} differs")),
    }
}

/// The literal slope claim: `v(b_α) = v·α(α-1)/2`, slopes `0, v, …, (α_max-1)v`
/// each once, and β-stability.
fn progression_claim(rep: &SlopeReport) -> Verdict {
    let v = Rational64::new(rep.v.num, rep.v.den);
    let observed: Vec<String> = rep.slope_values().iter().map(|s| s.to_string()).collect();
    let bad = rep.b_valuations.iter().find(|p| {
        let a = p.alpha as i64;
        Rational64::new(p.num, p.den) != v * Rational64::new(a * (a - 1), 2)
    });
    if let Some(p) = bad {
        return Err(format!(
            "v(b_{}) = {}, expected {}; slopes observed: {}",
            p.alpha,
            Rational64::new(p.num, p.den),
            v * Rational64::new(p.alpha as i64 * (p.alpha as i64 - 1), 2),
            observed.join(", ")
        ));
    }
    if !rep.progression {
        return Err(format!("slopes {}", observed.join(", ")));
    }
    if !rep.stable {
        return Err("not stable between β and β + 3".into());
    }
    Ok(format!("slopes {}", observed.join(", ")))
}

/// The exact computation and the strip-lemma bound agree: `v(b_α) = v·α(α-1)`,
/// slopes `0, 2v, 4v, …`, stable.
fn observed_doubling(rep: &SlopeReport) -> bool {
    let v = Rational64::new(rep.v.num, rep.v.den);
    rep.stable
        && rep.b_valuations.len() == rep.alpha_max + 1
        && rep.b_valuations.iter().all(|p| {
            let a = p.alpha as i64;
            Rational64::new(p.num, p.den) == v * Rational64::from_integer(a * (a - 1))
        })
        && rep.common_difference.map(|d| Rational64::new(d.num, d.den)) == Some(v * 2)
}

fn c6() -> (Verdict, bool) {
    let k = match CharacterWeight::kappa0(48) {
        Ok(k) => k,
        Err(e) => return (Err(e.to_string()), false),
    };
    match slopes(&k, 8, 27) {
        Ok(rep) => (progression_claim(&rep), observed_doubling(&rep)),
        Err(e) => (Err(e.to_string()), false),
    }
}

fn c7() -> (Verdict, bool) {
    let k = match CharacterWeight::new(27, 1, 64) {
        Ok(k) => k,
        Err(e) => return (Err(e.to_string()), false),
    };
    match slopes(&k, 6, 21) {
        Ok(rep) => (progression_claim(&rep), observed_doubling(&rep)),
        Err(e) => (Err(e.to_string()), false),
    }
}

fn c8() -> Verdict {
    let singular: Vec<usize> = (1..=24).filter(|&a| !det_tbar(a).1).collect();
    if !singular.is_empty() {
        return Err(format!("det(T̄_α) = 0 for α ∈ {singular:?}"));
    }
    let st = st_identity_check(81).map_err(|e| e.to_string())?;
    report_verdict(&[st]).map(|s| format!("24 determinants, {s}"))
}

fn c9() -> Verdict {
    let seed = 20_240_601;
    let ring = CycRing::new(1, 40).map_err(|e| e.to_string())?;
    report_verdict(&[
        uv_property_check(100, seed),
        containment_check(100, 30, seed).map_err(|e| e.to_string())?,
        strip_lemma_property(2, &ring.pi(), 100, seed).map_err(|e| e.to_string())?,
    ])
}

fn c10() -> Verdict {
    let reports: Result<Vec<_>, _> = [1, 2, 3, 5]
        .iter()
        .map(|&k| member_lemma_check(k, 30))
        .collect();
    report_verdict(&reports.map_err(|e| e.to_string())?)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn line(n: usize, name: &str, v: &Verdict, elapsed: Duration) {
    let (tag, detail) = match v {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} criterion {n:>2} {name} [{elapsed:.2?}]: {detail}");
}

/// Criteria that cannot hold as stated: the exact slopes are `0, 2v, 4v, …`
/// (the strip-lemma bound with `d³ = w₀²` already forces `v(b_α) ≥ v·α(α-1)`).
/// They must fail, and fail in exactly that way.
const UNATTAINABLE: [usize; 2] = [6, 7];

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    let mut record = |n: usize, name: &str, v: Verdict, elapsed: Duration| {
        line(n, name, &v, elapsed);
        if v.is_err() && !UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    };

    let (v, t) = timed(c1);
    record(
        1,
        "fund-lemma identities, 100 terms",
        within(Duration::from_secs(10), t, v),
        t,
    );
    let (v, t) = timed(c2);
    record(2, "printed expansions", v, t);
    let (v, t) = timed(c3);
    record(3, "f0 cubic, reduced cubic, Frobenius", v, t);
    let (v, t) = timed(c4);
    record(4, "g-bar universality, 81 terms", v, t);
    let (v, t) = timed(c5);
    record(
        5,
        "generating-function vs q-space matrix",
        within(Duration::from_secs(60), t, v),
        t,
    );

    let mut deviations_ok = true;
    let ((v, doubled), t) = timed(c6);
    deviations_ok &= doubled;
    record(
        6,
        "slopes, conductor 9",
        within(Duration::from_secs(300), t, v),
        t,
    );
    let ((v, doubled), t) = timed(c7);
    deviations_ok &= doubled;
    record(
        7,
        "slopes, conductor 27",
        within(Duration::from_secs(600), t, v),
        t,
    );

    let (v, t) = timed(c8);
    record(
        8,
        "det(T̄_α) ≠ 0 and t = s",
        within(Duration::from_secs(5), t, v),
        t,
    );
    let (v, t) = timed(c9);
    record(9, "property suites, 100 trials", v, t);
    let (v, t) = timed(c10);
    record(10, "member-lemma specializations", v, t);

    println!(
        "criteria 6 and 7: observed v(b_α) = v·α(α-1), slopes 0, 2v, 4v, …, stable: {}",
        if deviations_ok {
            "confirmed"
        } else {
            "NOT confirmed"
        }
    );
    if unexpected.is_empty() && deviations_ok {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
