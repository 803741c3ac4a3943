//! The matrix of U in a finite-order weight, its characteristic series, and the
//! Newton polygon of that series.
//!
//! The basis is `V(E_κ)·(w₀y)^j`, so that `U(V(E_κ)(w₀y)^j) = V(E_κ) Σ_i n_{i,j} (w₀y)^i`.

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::forms::{
    eisenstein_character, g_kappa, CharacterWeight, CoordKind, Coordinate, FormsError,
};
use crate::padic::{CycElt, CycRing, PadicError, Valuation};
use crate::report::CheckReport;
use crate::residue::t_table;
use crate::series::{Coefficient, IntSeries, PowSeries, SeriesError, Var, F3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("invalid matrix size: {0}")]
    InvalidSize(String),
    #[error("precision exhausted at working precision {precision}; rerun with N = {suggested}")]
    PrecisionExhausted { precision: u32, suggested: u32 },
    #[error("Newton polygon undetermined: {0}")]
    Undetermined(String),
    #[error("pivot {0} is not invertible")]
    Pivot(usize),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn exhausted(ring: &CycRing) -> SpectralError {
    SpectralError::PrecisionExhausted {
        precision: ring.precision(),
        suggested: 2 * ring.precision(),
    }
}

fn lift_padic(ring: &CycRing, e: PadicError) -> SpectralError {
    match e {
        PadicError::PrecisionExhausted => exhausted(ring),
        other => other.into(),
    }
}

fn lift_forms(ring: &CycRing, e: FormsError) -> SpectralError {
    match e {
        FormsError::Padic(PadicError::PrecisionExhausted) => exhausted(ring),
        other => other.into(),
    }
}

/// The `β×β` truncation `(n_{i,j})` of the matrix of U.
#[derive(Clone, Debug)]
pub struct UMatrix {
    kappa: CharacterWeight,
    beta: usize,
    // row-major
    entries: Vec<Vec<CycElt>>,
}

impl UMatrix {
    pub fn kappa(&self) -> &CharacterWeight {
        &self.kappa
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycElt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<CycElt>] {
        &self.entries
    }

    fn from_columns(kappa: &CharacterWeight, beta: usize, cols: Vec<Vec<CycElt>>) -> Self {
        let entries = (0..beta)
            .map(|i| (0..beta).map(|j| cols[j][i].clone()).collect())
            .collect();
        UMatrix {
            kappa: kappa.clone(),
            beta,
            entries,
        }
    }

    pub fn min_precision(&self) -> u32 {
        self.entries
            .iter()
            .flatten()
            .map(|c| c.precision())
            .min()
            .unwrap_or(0)
    }

    /// Zero columns off `3Z` and the floor `v(n_{i,j}) ≥ (2/3)·j·v(w₀)`.
    pub fn check_invariants(&self) -> CheckReport {
        let mut report = CheckReport::new("u-matrix invariants");
        let nonzero = (0..self.beta)
            .filter(|j| j % 3 != 0)
            .flat_map(|j| (0..self.beta).map(move |i| (i, j)))
            .find(|&(i, j)| !self.entries[i][j].is_zero());
        report.push(
            "zero columns",
            "n_{i,j} = 0 for j ≢ 0 mod 3",
            nonzero.is_none(),
            nonzero.map_or(String::new(), |(i, j)| format!("n_{i},{j} ≠ 0")),
        );
        let v = self.kappa.v();
        let below = (0..self.beta)
            .flat_map(|i| (0..self.beta).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let bound = Rational64::new(2 * j as i64, 3) * v;
                !self.entries[i][j].valuation().is_at_least(bound)
            });
        report.push(
            "valuation floor",
            "v(n_{i,j}) ≥ (2/3)·j·v(w₀)",
            below.is_none(),
            below.map_or(String::new(), |(i, j)| {
                format!("v(n_{i},{j}) = {}", self.entries[i][j].valuation())
            }),
        );
        report
    }

    /// Entrywise comparison at the shared precision; the first differing index.
    pub fn first_difference(&self, other: &UMatrix, size: usize) -> Option<(usize, usize)> {
        (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .find(|&(i, j)| self.entries[i][j] != other.entries[i][j])
    }
}

fn check_beta(beta: usize) -> Result<(), SpectralError> {
    if beta == 0 || !beta.is_multiple_of(3) {
        return Err(SpectralError::InvalidSize(format!(
            "β = {beta} must be a positive multiple of 3"
        )));
    }
    Ok(())
}

/// The matrix read off the generating function: column `3t` is the expansion of
/// `g_κ(X)·((w₀²X + 3w₀X² + 9X³)/(1 + 6X/w₀)³)^t`, other columns vanish.
pub fn u_matrix_gf(
    kappa: &CharacterWeight,
    beta: usize,
    g: &PowSeries<CycElt>,
) -> Result<UMatrix, SpectralError> {
    check_beta(beta)?;
    if g.trunc() < beta {
        return Err(SpectralError::InvalidSize(format!(
            "g_κ has {} terms, β = {beta} needs {beta}",
            g.trunc()
        )));
    }
    let ring = kappa.ring();
    let w0 = kappa.w0();
    let six_over_w0 = kappa
        .div_by_w0_pow(&ring.from_int(6), 1)
        .map_err(|e| lift_padic(ring, e))?;
    let x = Var::X;
    let num = pad(
        x,
        beta,
        vec![
            ring.zero(),
            w0 * w0,
            w0.mul_int(&3.into()),
            ring.from_int(9),
        ],
    );
    let den = pad(x, beta, vec![ring.one(), six_over_w0]).pow(3);
    let h = num.checked_div(&den)?;
    let g = g.clone().truncate(beta);
    let zero_col = vec![ring.zero(); beta];
    let mut cols = Vec::with_capacity(beta);
    let mut col = g;
    for j in 0..beta {
        if j % 3 == 0 {
            cols.push(col.coeffs().to_vec());
            col = &col * &h;
        } else {
            cols.push(zero_col.clone());
        }
    }
    Ok(UMatrix::from_columns(kappa, beta, cols))
}

fn pad(var: Var, m: usize, mut c: Vec<CycElt>) -> PowSeries<CycElt> {
    let z = c[0].zero_like();
    c.resize(m.max(c.len()), z);
    PowSeries::new(var, c).truncate(m)
}

/// The matrix computed literally: `U(V(E_κ)·y^j)` in q-coordinates, divided by
/// `V(E_κ)`, rewritten in `y`, and coefficient `i` rescaled by `w₀^(j-i)`.
pub fn u_matrix_qspace(kappa: &CharacterWeight, beta: usize) -> Result<UMatrix, SpectralError> {
    check_beta(beta)?;
    let ring = kappa.ring();
    let qprec = 3 * beta;
    let e = eisenstein_character(kappa, beta)?.series;
    let ve = e.v_op(Some(qprec));
    let ve_inv = ve.clone().truncate(beta).inverse()?;
    let y = crate::forms::y_qexp(qprec)?.series;
    let coord = Coordinate::new(CoordKind::Y, beta)?;
    let y_powers: Vec<IntSeries> = {
        let mut out = Vec::with_capacity(beta);
        let mut p = IntSeries::one(Var::Q, qprec, &0.into());
        for _ in 0..beta {
            out.push(p.clone());
            p = &p * &y;
        }
        out
    };
    let cols: Result<Vec<Vec<CycElt>>, SpectralError> = (0..beta)
        .into_par_iter()
        .map(|j| {
            let yj = y_powers[j].map(|c| ring.from_bigint(c));
            let u = (&ve * &yj).u_op();
            let in_y = coord.from_q(&(&u * &ve_inv))?;
            in_y.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if j >= i {
                        Ok(kappa.mul_w0_pow(c, (j - i) as u32))
                    } else {
                        kappa
                            .div_by_w0_pow(c, (i - j) as u32)
                            .map_err(|e| lift_padic(ring, e))
                    }
                })
                .collect()
        })
        .collect();
    Ok(UMatrix::from_columns(kappa, beta, cols?))
}

/// Coefficients `b_α` of `det(1 - T·N)` for `α ≤ α_max`.
#[derive(Clone, Debug)]
pub struct CharSeries {
    pub coeffs: Vec<CycElt>,
    pub valuations: Vec<Valuation>,
}

impl CharSeries {
    fn new(coeffs: Vec<CycElt>) -> Self {
        let valuations = coeffs.iter().map(|c| c.valuation()).collect();
        CharSeries { coeffs, valuations }
    }
}

/// `det(1 - T·N)` over `R[T]/(T^(α_max+1))` by Gaussian elimination; every pivot
/// is `≡ 1 mod T` and so invertible.
pub fn char_series_of(
    n: &[Vec<CycElt>],
    ring: &CycRing,
    alpha_max: usize,
) -> Result<CharSeries, SpectralError> {
    let len = alpha_max + 1;
    // indices whose column of N vanishes contribute a unit column of 1 - TN and
    // drop out of the determinant
    let active: Vec<usize> = (0..n.len())
        .filter(|&j| n.iter().any(|row| !row[j].is_zero()))
        .collect();
    let k = active.len();
    let zero = PowSeries::zero(Var::T, len, &ring.zero());
    let mut a: Vec<Vec<PowSeries<CycElt>>> = active
        .iter()
        .map(|&i| {
            active
                .iter()
                .map(|&j| {
                    let mut s = zero.clone();
                    if i == j {
                        s.set_coeff(0, ring.one());
                    }
                    if len > 1 {
                        s.set_coeff(1, -n[i][j].clone());
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut det = PowSeries::one(Var::T, len, &ring.zero());
    for c in 0..k {
        let pivot = a[c][c].clone();
        let inv = pivot.inverse().map_err(|_| SpectralError::Pivot(c))?;
        det = &det * &pivot;
        for r in c + 1..k {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = &a[r][c] * &inv;
            for cc in c..k {
                let sub = &factor * &a[c][cc];
                a[r][cc] = &a[r][cc] - &sub;
            }
        }
    }
    Ok(CharSeries::new(det.into_coeffs()))
}

pub fn char_series(n: &UMatrix, alpha_max: usize) -> Result<CharSeries, SpectralError> {
    if alpha_max > n.beta() / 3 {
        return Err(SpectralError::InvalidSize(format!(
            "α_max = {alpha_max} exceeds β/3 = {}",
            n.beta() / 3
        )));
    }
    char_series_of(n.rows(), n.kappa().ring(), alpha_max)
}

/// Determinant by cofactor expansion along the first row (no divisions).
pub fn det_cofactor(m: &[Vec<CycElt>], ring: &CycRing) -> CycElt {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<CycElt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &det_cofactor(&minor, ring);
                acc = if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// `b_α = (-1)^α Σ_{|S| = α} det(N_S)` by enumerating principal minors.
pub fn principal_minor_coefficients(m: &[Vec<CycElt>], ring: &CycRing) -> Vec<CycElt> {
    let n = m.len();
    assert!(n <= 16, "brute force is exponential in the size");
    let mut b = vec![ring.zero(); n + 1];
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<CycElt>> = s
            .iter()
            .map(|&i| s.iter().map(|&j| m[i][j].clone()).collect())
            .collect();
        let d = det_cofactor(&sub, ring);
        let a = s.len();
        b[a] = if a.is_multiple_of(2) {
            &b[a] + &d
        } else {
            &b[a] - &d
        };
    }
    b
}

/// Lower convex hull of `(α, v(b_α))` and its slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolygon {
    pub points: Vec<(usize, Rational64)>,
    pub vertices: Vec<(usize, Rational64)>,
    /// `(slope, multiplicity)` in increasing order.
    pub slopes: Vec<(Rational64, usize)>,
    /// Points left out because only a lower bound on their valuation is known.
    pub warnings: Vec<String>,
}

impl NewtonPolygon {
    /// Slopes repeated according to multiplicity.
    pub fn slope_sequence(&self) -> Vec<Rational64> {
        self.slopes
            .iter()
            .flat_map(|&(s, m)| std::iter::repeat_n(s, m))
            .collect()
    }

    fn hull_value(&self, alpha: usize) -> Option<Rational64> {
        self.vertices.windows(2).find_map(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            (x0 <= alpha && alpha <= x1)
                .then(|| y0 + (y1 - y0) * Rational64::new((alpha - x0) as i64, (x1 - x0) as i64))
        })
    }
}

fn cross(o: (usize, Rational64), a: (usize, Rational64), b: (usize, Rational64)) -> Rational64 {
    let ax = Rational64::from_integer(a.0 as i64 - o.0 as i64);
    let bx = Rational64::from_integer(b.0 as i64 - o.0 as i64);
    ax * (b.1 - o.1) - (a.1 - o.1) * bx
}

pub fn newton_polygon_of(valuations: &[Valuation]) -> Result<NewtonPolygon, SpectralError> {
    let mut points = Vec::new();
    let mut bounds = Vec::new();
    for (a, v) in valuations.iter().enumerate() {
        match v {
            Valuation::Exact(x) => points.push((a, *x)),
            Valuation::AtLeast(x) => bounds.push((a, *x)),
        }
    }
    if points.is_empty() {
        return Err(SpectralError::Undetermined(
            "no coefficient has a known valuation".into(),
        ));
    }
    let mut hull: Vec<(usize, Rational64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2
            && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= Rational64::zero()
        {
            hull.pop();
        }
        hull.push(p);
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let dx = w[1].0 - w[0].0;
            ((w[1].1 - w[0].1) / Rational64::from_integer(dx as i64), dx)
        })
        .collect();
    let mut np = NewtonPolygon {
        points,
        vertices: hull,
        slopes,
        warnings: Vec::new(),
    };
    for (a, lb) in bounds {
        if let Some(h) = np.hull_value(a) {
            if lb < h {
                return Err(SpectralError::Undetermined(format!(
                    "b_{a} is only known to have valuation ≥ {lb}, below the hull value {h}"
                )));
            }
        }
        np.warnings
            .push(format!("b_{a} excluded: valuation ≥ {lb}"));
    }
    Ok(np)
}

pub fn newton_polygon(cs: &CharSeries) -> Result<NewtonPolygon, SpectralError> {
    newton_polygon_of(&cs.valuations)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rational64> for RationalJson {
    fn from(r: Rational64) -> Self {
        RationalJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaJson {
    pub conductor: u64,
    pub generator_exponent: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointJson {
    pub alpha: usize,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeJson {
    pub num: i64,
    pub den: i64,
    pub mult: usize,
}

/// Result of the end-to-end slope computation; serializes to the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeReport {
    pub kappa: KappaJson,
    pub v: RationalJson,
    pub beta: usize,
    pub alpha_max: usize,
    pub b_valuations: Vec<PointJson>,
    pub vertices: Vec<PointJson>,
    pub slopes: Vec<SlopeJson>,
    /// `b_α` agrees at `β` and `β + 3`.
    pub stable: bool,
    /// `v(b_α) = v·α(α-1)/2` for all `α ≤ α_max`, slopes `0, v, 2v, …` each once.
    pub progression: bool,
    /// `δ` when the slopes are `0, δ, 2δ, …` each with multiplicity one.
    pub common_difference: Option<RationalJson>,
    /// Smallest number of known digits beyond the valuation over all `b_α`.
    pub precision_remaining: i64,
}

impl SlopeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn slope_values(&self) -> Vec<Rational64> {
        self.slopes
            .iter()
            .flat_map(|s| std::iter::repeat_n(Rational64::new(s.num, s.den), s.mult))
            .collect()
    }
}

fn point_json((alpha, v): (usize, Rational64)) -> PointJson {
    PointJson {
        alpha,
        num: *v.numer(),
        den: *v.denom(),
    }
}

/// `δ` if the slopes are `0, δ, 2δ, …` with multiplicity one.
pub fn arithmetic_difference(slopes: &[(Rational64, usize)]) -> Option<Rational64> {
    if slopes.is_empty() || slopes.iter().any(|&(_, m)| m != 1) {
        return None;
    }
    let delta = slopes.get(1).map_or(Rational64::zero(), |s| s.0);
    slopes
        .iter()
        .enumerate()
        .all(|(k, &(s, _))| s == delta * Rational64::from_integer(k as i64))
        .then_some(delta)
}

/// `b_α` at `β` and `β'` agree: equal valuations, and the difference is
/// strictly smaller.
pub fn stable_between(a: &CharSeries, b: &CharSeries) -> bool {
    a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| {
        let (vx, vy) = (x.valuation(), y.valuation());
        let diff = (x - y).valuation();
        vx.is_exact() && vx == vy && diff.value() > vx.value()
    })
}

/// The full pipeline: `g_κ`, the matrices at `β` and `β + 3`, their
/// characteristic series, the Newton polygon, and the progression check.
pub fn slopes(
    kappa: &CharacterWeight,
    alpha_max: usize,
    beta: usize,
) -> Result<SlopeReport, SpectralError> {
    check_beta(beta)?;
    if beta < 3 * alpha_max + 3 {
        return Err(SpectralError::InvalidSize(format!(
            "β = {beta} must be at least 3·α_max + 3 = {}",
            3 * alpha_max + 3
        )));
    }
    let ring = kappa.ring();
    let g = g_kappa(kappa, beta + 3).map_err(|e| lift_forms(ring, e))?;
    let (cs, cs_next) = rayon::join(
        || -> Result<CharSeries, SpectralError> {
            char_series(&u_matrix_gf(kappa, beta, &g)?, alpha_max)
        },
        || -> Result<CharSeries, SpectralError> {
            char_series(&u_matrix_gf(kappa, beta + 3, &g)?, alpha_max)
        },
    );
    let (cs, cs_next) = (cs?, cs_next?);
    if cs.valuations.iter().any(|v| !v.is_exact()) {
        return Err(exhausted(ring));
    }
    let np = newton_polygon(&cs)?;
    let v = kappa.v();
    let half = Rational64::new(1, 2);
    let valuations_ok = cs.valuations.iter().enumerate().all(|(a, val)| {
        let a = a as i64;
        val.exact() == Some(v * half * Rational64::from_integer(a * (a - 1)))
    });
    let expected: Vec<(Rational64, usize)> = (0..alpha_max)
        .map(|a| (v * Rational64::from_integer(a as i64), 1))
        .collect();
    let progression = valuations_ok && np.slopes == expected;
    let common_difference = arithmetic_difference(&np.slopes).map(RationalJson::from);
    let precision_remaining = cs
        .coeffs
        .iter()
        .zip(&cs.valuations)
        .map(|(c, val)| c.precision() as i64 - val.value().ceil().to_integer())
        .min()
        .unwrap_or(0);
    Ok(SlopeReport {
        kappa: KappaJson {
            conductor: kappa.conductor(),
            generator_exponent: kappa.generator_exponent(),
        },
        v: v.into(),
        beta,
        alpha_max,
        b_valuations: np.points.iter().copied().map(point_json).collect(),
        vertices: np.vertices.iter().copied().map(point_json).collect(),
        slopes: np
            .slopes
            .iter()
            .map(|&(s, mult)| SlopeJson {
                num: *s.numer(),
                den: *s.denom(),
                mult,
            })
            .collect(),
        stable: stable_between(&cs, &cs_next),
        progression,
        common_difference,
        precision_remaining,
    })
}

/// `reduce(n_{3i,3j} / w₀^(2j)) = t_{i,j}` for `i, j < size`.
pub fn residue_link_check(n: &UMatrix, size: usize) -> Result<CheckReport, SpectralError> {
    if 3 * size > n.beta() {
        return Err(SpectralError::InvalidSize(format!(
            "residue link for {size}×{size} needs β ≥ {}",
            3 * size
        )));
    }
    let kappa = n.kappa();
    let t = t_table(size);
    let mut bad = None;
    'outer: for i in 0..size {
        for j in 0..size {
            let u = kappa
                .div_by_w0_pow(n.entry(3 * i, 3 * j), 2 * j as u32)
                .map_err(|e| lift_padic(kappa.ring(), e))?;
            if F3::new(u.residue()? as i64) != t[i][j] {
                bad = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut report = CheckReport::new("residue link");
    report.push(
        format!("conductor {}", kappa.conductor()),
        "n_{3i,3j}/w₀^{2j} mod π = t_{i,j}",
        bad.is_none(),
        match bad {
            None => format!("i, j < {size}"),
            Some((i, j)) => format!("differs at ({i}, {j})"),
        },
    );
    Ok(report)
}

fn random_elt(rng: &mut ChaCha8Rng, ring: &CycRing) -> CycElt {
    let c: Vec<i64> = (0..ring.degree()).map(|_| rng.gen_range(-4..=4)).collect();
    ring.from_coeffs(&c)
}

/// Outcome of one strip-lemma trial.
#[derive(Clone, Debug)]
struct StripTrial {
    divisible: bool,
    biconditional: bool,
    dump: String,
}

fn strip_trial(s: usize, d: &CycElt, seed: u64) -> Result<StripTrial, SpectralError> {
    let ring = d.ring().clone();
    let n = 3 * s;
    let vd = d.valuation().exact().ok_or_else(|| exhausted(&ring))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![vec![ring.zero(); n]; n];
    for j in (0..n).step_by(3) {
        let dj = d.pow(j as u64);
        for row in m.iter_mut() {
            row[j] = &random_elt(&mut rng, &ring) * &dj;
        }
    }
    let b = principal_minor_coefficients(&m, &ring);
    let mut divisible = true;
    let mut biconditional = true;
    for (alpha, ba) in b.iter().enumerate() {
        let floor = vd * Rational64::from_integer(3 * (alpha * alpha.saturating_sub(1)) as i64 / 2);
        let v = ba.valuation();
        divisible &= v.is_at_least(floor);
        if alpha >= 1 && alpha <= s {
            // T_α = (n_{3i,3j}/d^{3j})
            let mut t = vec![vec![ring.zero(); alpha]; alpha];
            for i in 0..alpha {
                for j in 0..alpha {
                    t[i][j] = m[3 * i][3 * j].div_exact(&d.pow(3 * j as u64))?;
                }
            }
            let det_unit = det_cofactor(&t, &ring).residue()? != 0;
            let quotient_unit = v.exact() == Some(floor);
            biconditional &= det_unit == quotient_unit;
        }
    }
    Ok(StripTrial {
        divisible,
        biconditional,
        dump: format!("{m:?}"),
    })
}

/// Random `3s×3s` matrices with zero columns off `3Z` and column `j` divisible
/// by `d^j`: checks `d^{3α(α-1)/2} | a_α`, and for `α ≤ s` that the quotient is a
/// unit iff `det(T_α)` is.
pub fn strip_lemma_property(
    s: usize,
    d: &CycElt,
    trials: usize,
    seed: u64,
) -> Result<CheckReport, SpectralError> {
    if s == 0 || s > 3 {
        return Err(SpectralError::InvalidSize(format!(
            "s = {s} must be 1, 2 or 3"
        )));
    }
    if d.valuation().value() <= Rational64::zero() {
        return Err(SpectralError::InvalidSize(
            "d must have positive valuation".into(),
        ));
    }
    let results: Result<Vec<StripTrial>, SpectralError> = (0..trials)
        .into_par_iter()
        .map(|t| strip_trial(s, d, seed.wrapping_add(t as u64)))
        .collect();
    let results = results?;
    let mut report = CheckReport::new(format!("strip-lemma s={s}"));
    let first_div = results.iter().position(|r| !r.divisible);
    report.push(
        "divisibility",
        "d^{3α(α-1)/2} | a_α",
        first_div.is_none(),
        first_div.map_or(format!("{trials} trials"), |t| {
            format!("trial {t}: {}", results[t].dump)
        }),
    );
    let first_bi = results.iter().position(|r| !r.biconditional);
    report.push(
        "unit biconditional",
        "a_α/d^{3α(α-1)/2} unit ⇔ det(T_α) unit, α ≤ s",
        first_bi.is_none(),
        first_bi.map_or(format!("{trials} trials"), |t| {
            format!("trial {t}: {}", results[t].dump)
        }),
    );
    Ok(report)
}
