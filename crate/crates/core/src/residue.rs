//! Residue-field computations over `F_3`: the series `r(X) = Σ X^(3^m)`, the
//! reduction `ḡ` shared by all weights near the boundary, the tables `s_{i,j}`
//! and `t_{i,j}`, and the determinants of `T̄_α`.

use thiserror::Error;

use crate::forms::{g_kappa, reduce_series, CharacterWeight, FormsError};
use crate::report::CheckReport;
use crate::series::{Coefficient, F3Series, PowSeries, Var, F3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error("r(X³) combination is not divisible by X^{0}")]
    NotDivisible(usize),
    #[error("ḡ violates the cubic relation at X^{0}")]
    CubicFailed(usize),
}

/// `r(X) = X + X³ + X⁹ + …` to `m` terms.
pub fn r_series(m: usize) -> F3Series {
    let mut c = vec![F3::ZERO; m.max(1)];
    let mut p = 1;
    while p < m {
        c[p] = F3::ONE;
        p *= 3;
    }
    PowSeries::new(Var::X, c)
}

fn x_pow(m: usize, n: usize) -> F3Series {
    F3Series::monomial(Var::X, m, n, F3::ONE)
}

// s / X^k, provided the first k coefficients vanish
fn shift_down(s: &F3Series, k: usize) -> Result<F3Series, ResidueError> {
    if s.coeffs()[..k].iter().any(|c| !c.is_zero_coeff()) {
        return Err(ResidueError::NotDivisible(k));
    }
    Ok(PowSeries::new(s.var(), s.coeffs()[k..].to_vec()))
}

/// `X³g³ + Xg² + g - 1`.
pub fn cubic_residual(g: &F3Series) -> F3Series {
    let m = g.trunc();
    let g = g.clone().with_var(Var::X);
    let g2 = &g * &g;
    let g3 = &g2 * &g;
    let a = &(&x_pow(m, 3) * &g3) + &(&x_pow(m, 1) * &g2);
    &(&a + &g) - &F3Series::one(Var::X, m, &F3::ZERO)
}

/// `ḡ = 1 - X⁻¹r(X³) - X⁻²(r(X³) - r(X³)²)` to `m` terms, checked against the cubic.
pub fn g_bar(m: usize) -> Result<F3Series, ResidueError> {
    let big = m + 2;
    let r3 = r_series(big / 3 + 2).v_op(Some(big));
    let a = shift_down(&r3, 1)?.truncate(m);
    let b = shift_down(&(&r3 - &(&r3 * &r3)), 2)?.truncate(m);
    let g = &(&F3Series::one(Var::X, m, &F3::ZERO) - &a) - &b;
    if let Some(i) = cubic_residual(&g).order() {
        return Err(ResidueError::CubicFailed(i));
    }
    Ok(g)
}

/// `f_n(X)`, the coefficient of `Y^n` in
/// `T(X,Y) = (1 - r(X)Y + (r(X)² - r(X))Y²)/(1 - XY³)`, for `n < count`.
pub fn t_columns(count: usize, m: usize) -> Vec<F3Series> {
    let r = r_series(m);
    let zero = F3Series::zero(Var::X, m, &F3::ZERO);
    let numerator = [
        F3Series::one(Var::X, m, &F3::ZERO),
        -r.clone(),
        &(&r * &r) - &r,
    ];
    (0..count)
        .map(|n| {
            // Σ_k X^k Y^{3k} times the numerator
            let mut acc = zero.clone();
            for k in 0..=n / 3 {
                if let Some(num) = numerator.get(n - 3 * k) {
                    acc = &acc + &(&x_pow(m, k) * num);
                }
            }
            acc
        })
        .collect()
}

/// `s_{i,j}` table: coefficient of `X^i Y^j` in `ḡ(X)/(1 - XY³)`.
pub fn s_table(rows: usize, cols: usize) -> Result<Vec<Vec<F3>>, ResidueError> {
    let g = g_bar(rows.max(2))?;
    Ok((0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if j % 3 == 0 && i >= j / 3 {
                        *g.coeff(i - j / 3)
                    } else {
                        F3::ZERO
                    }
                })
                .collect()
        })
        .collect())
}

/// `t_{i,j}` for `i, j < n`.
pub fn t_table(n: usize) -> Vec<Vec<F3>> {
    let cols = t_columns(n, n.max(2));
    (0..n)
        .map(|i| (0..n).map(|j| *cols[j].coeff(i)).collect())
        .collect()
}

/// Checks `t_{i,j} = s_{3i,3j}` for `i, j < m/3` and `f_{3t} = X^t`.
pub fn st_identity_check(m: usize) -> Result<CheckReport, ResidueError> {
    let mut report = CheckReport::new("st-identity");
    let n = m / 3;
    let s = s_table(3 * n, 3 * n)?;
    let t = t_table(n);
    let bad = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| t[i][j] != s[3 * i][3 * j]);
    report.push(
        "t = s",
        "t_{i,j} = s_{3i,3j}",
        bad.is_none(),
        match bad {
            None => format!("i, j < {n}"),
            Some((i, j)) => format!("differs at ({i}, {j})"),
        },
    );
    let cols = t_columns(3 * n, n.max(2));
    let ok = (0..n).all(|k| cols[3 * k] == x_pow(n.max(2), k));
    report.push("f_3t", "f_{3t}(X) = X^t", ok, format!("t < {n}"));
    Ok(report)
}

/// Determinant over `F_3` by Gaussian elimination.
pub fn det_f3(mut a: Vec<Vec<F3>>) -> F3 {
    let n = a.len();
    let mut det = F3::ONE;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero_coeff()) else {
            return F3::ZERO;
        };
        if p != col {
            a.swap(p, col);
            det = det.neg_ref();
        }
        let pivot = a[col][col];
        det = det.mul_ref(&pivot);
        let inv = pivot.unit_inverse().expect("nonzero in F_3");
        for r in col + 1..n {
            let factor = a[r][col].mul_ref(&inv);
            if factor.is_zero_coeff() {
                continue;
            }
            for c in col..n {
                let sub = factor.mul_ref(&a[col][c]);
                a[r][c] = a[r][c].sub_ref(&sub);
            }
        }
    }
    det
}

/// `det(T̄_α)` with `T̄_α = (t_{i,j})_{0 ≤ i,j < α}`, and whether it is nonzero.
pub fn det_tbar(alpha: usize) -> (F3, bool) {
    assert!(alpha >= 1);
    let d = det_f3(t_table(alpha));
    (d, !d.is_zero_coeff())
}

// F_3 polynomials in r, lowest degree first
fn rpoly_mul(a: &[F3], b: &[F3]) -> Vec<F3> {
    let mut out = vec![F3::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
        }
    }
    out
}

fn rpoly_degree(p: &[F3]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero_coeff())
}

/// `f_n` rewritten as a polynomial in `r` using `X = r - r³`.
pub fn f_as_r_polynomial(n: usize) -> Vec<F3> {
    let x = [F3::ZERO, F3::ONE, F3::ZERO, F3::new(-1)];
    let head: Vec<F3> = match n % 3 {
        0 => vec![F3::ONE],
        1 => vec![F3::ZERO, F3::new(-1)],
        _ => vec![F3::ZERO, F3::new(-1), F3::ONE],
    };
    (0..n / 3).fold(head, |acc, _| rpoly_mul(&acc, &x))
}

/// `deg_r f_n = n` for `n < count`, with each rewriting checked by substituting
/// the series `r(X)` back in.
pub fn degree_pattern_check(count: usize) -> CheckReport {
    let mut report = CheckReport::new("f_n degrees");
    let m = 3 * count + 3;
    let r = r_series(m);
    let cols = t_columns(count, m);
    for (n, col) in cols.iter().enumerate() {
        let p = f_as_r_polynomial(n);
        let mut sub = F3Series::zero(Var::X, m, &F3::ZERO);
        let mut rk = F3Series::one(Var::X, m, &F3::ZERO);
        for c in &p {
            sub = &sub + &rk.map(|x| x.mul_ref(c));
            rk = &rk * &r;
        }
        let ok = rpoly_degree(&p) == Some(n) && &sub == col;
        report.push(
            format!("deg f_{n}"),
            "f_n is a polynomial of degree n in r",
            ok,
            format!("degree {:?}", rpoly_degree(&p)),
        );
    }
    report
}

/// Substituting `ḡ + X^j` into the cubic must break it.
pub fn uniqueness_probe(m: usize, js: &[usize]) -> Result<bool, ResidueError> {
    let g = g_bar(m)?;
    Ok(js.iter().all(|&j| {
        let pert = &g + &x_pow(m, j);
        cubic_residual(&pert).order().is_some()
    }))
}

/// The reduction of `g_κ` equals `ḡ` to `m` terms for every listed weight.
pub fn g_bar_universality_check(
    kappas: &[CharacterWeight],
    m: usize,
) -> Result<CheckReport, FormsError> {
    let mut report = CheckReport::new("g-bar universality");
    let gb = g_bar(m).map_err(|e| FormsError::InvalidWeight(e.to_string()))?;
    for k in kappas {
        let g = reduce_series(&g_kappa(k, m)?)?.with_var(Var::X);
        let diff = g.coeffs().iter().zip(gb.coeffs()).position(|(a, b)| a != b);
        report.push(
            format!(
                "conductor {} exponent {}",
                k.conductor(),
                k.generator_exponent()
            ),
            "g_κ mod π = 1 - X⁻¹r(X³) - X⁻²(r(X³) - r(X³)²)",
            diff.is_none(),
            match diff {
                None => format!("{m} terms"),
                Some(i) => format!("differs at X^{i}"),
            },
        );
    }
    Ok(report)
}

/// The residue-field suite: Frobenius identity, ḡ, the s/t tables, the
/// determinants `det(T̄_α)` for `α ≤ alpha_max`, and the degree pattern.
pub fn residue_check(m: usize, alpha_max: usize) -> Result<CheckReport, ResidueError> {
    let mut report = CheckReport::new("residue");
    let r = r_series(m);
    let frob = &(&r - &(&(&r * &r) * &r)) - &x_pow(m, 1);
    report.push(
        "Frobenius",
        "r(X) - r(X)³ = X",
        frob.is_zero(),
        format!("{m} terms"),
    );
    let g = g_bar(m)?;
    report.push(
        "g-bar cubic",
        "X³ḡ³ + Xḡ² + ḡ - 1 = 0",
        true,
        format!("{m} terms"),
    );
    report.push("g-bar(0)", "ḡ(0) = 1", *g.coeff(0) == F3::ONE, "");
    report.push(
        "uniqueness",
        "ḡ + X^j violates the cubic",
        uniqueness_probe(m, &[0, 1, 2, 5, 17, m - 1])?,
        "j ∈ {0, 1, 2, 5, 17, M-1}",
    );
    report.extend(st_identity_check(81)?);
    let dets: Vec<(usize, F3, bool)> = (1..=alpha_max)
        .map(|a| {
            let (d, nz) = det_tbar(a);
            (a, d, nz)
        })
        .collect();
    let zero = dets.iter().find(|(_, _, nz)| !nz);
    report.push(
        "det T-bar",
        "det(T̄_α) ≠ 0 over F_3",
        zero.is_none(),
        match zero {
            None => format!(
                "α ≤ {alpha_max}: {}",
                dets.iter()
                    .map(|(_, d, _)| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            Some((a, _, _)) => format!("vanishes at α = {a}"),
        },
    );
    report.extend(degree_pattern_check(12));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_terms() {
        let r = r_series(30);
        let ones: Vec<usize> = (0..30).filter(|&i| *r.coeff(i) == F3::ONE).collect();
        assert_eq!(ones, vec![1, 3, 9, 27]);
        assert_eq!(*r.coeff(0), F3::ZERO);
    }

    #[test]
    fn g_bar_solves_cubic() {
        let g = g_bar(100).unwrap();
        assert_eq!(*g.coeff(0), F3::ONE);
        assert!(cubic_residual(&g).is_zero());
        // ḡ = 1 - X² + … : X⁻¹r(X³) = X² + X⁸ + …, X⁻²(r(X³) - r(X³)²) = X + …
        assert_eq!(*g.coeff(1), F3::new(-1));
    }

    #[test]
    fn g_bar_by_fixed_point_iteration() {
        // independent route: ḡ = 1 - Xḡ² - X³ḡ³ iterated from 1
        let m = 60;
        let one = F3Series::one(Var::X, m, &F3::ZERO);
        let mut g = one.clone();
        for _ in 0..m {
            let g2 = &g * &g;
            let g3 = &g2 * &g;
            g = &(&one - &(&x_pow(m, 1) * &g2)) - &(&x_pow(m, 3) * &g3);
        }
        assert_eq!(g, g_bar(m).unwrap());
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det_tbar(1), (F3::ONE, true));
        // brute-force 3x3 determinant by the Leibniz formula
        let t = t_table(3);
        let v = |i: usize, j: usize| t[i][j].value() as i64;
        let leibniz = v(0, 0) * (v(1, 1) * v(2, 2) - v(1, 2) * v(2, 1))
            - v(0, 1) * (v(1, 0) * v(2, 2) - v(1, 2) * v(2, 0))
            + v(0, 2) * (v(1, 0) * v(2, 1) - v(1, 1) * v(2, 0));
        assert_eq!(det_tbar(3).0, F3::new(leibniz));
    }

    #[test]
    fn det_f3_singular() {
        let a = vec![vec![F3::ONE, F3::new(2)], vec![F3::new(2), F3::ONE]];
        assert_eq!(det_f3(a), F3::ZERO);
    }

    #[test]
    fn degree_pattern() {
        assert!(degree_pattern_check(12).passed());
    }

    #[test]
    fn suite_passes() {
        let r = residue_check(100, 24).unwrap();
        assert!(r.passed(), "{r}");
    }
}
