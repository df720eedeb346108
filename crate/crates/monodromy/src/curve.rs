//! Numeric checks on the discriminant curve `C`.
//!
//! `C` is parametrized by `s ↦ ((s/(ms+n))^m, (1/(ms+n))^n)`, and near `x = 0`
//! its branches are `y_j(x) = ((1 − m ω_m^j x^{1/m}) / n)^n`.  Double points
//! of `C` come from pairs of parameters; the checks here use the closed-form
//! roots of the polynomials `P_{k,ℓ}(t) = (1 − ω_n^k t)^m − (1 − ω_n^ℓ t)^m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{e, Params};

/// A point of the curve with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub s: Complex64,
    pub x: Complex64,
    pub y: Complex64,
}

pub fn uniformization(params: &Params, s: Complex64) -> Result<CurvePoint> {
    let d = params.m as f64 * s + params.n as f64;
    if d.norm() < 1e-12 {
        return Err(Error::PoleAtS { re: s.re, im: s.im });
    }
    Ok(CurvePoint {
        s,
        x: (s / d).powu(params.m as u32),
        y: d.inv().powu(params.n as u32),
    })
}

/// `y_j(x)` on the `branch`-th determination of `x^{1/m}`
/// (branch 0 is the principal root).
pub fn puiseux_branch(params: &Params, j: i64, x: Complex64, branch: i64) -> Complex64 {
    let m = params.m as f64;
    let root = if x.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(x.norm().powf(1.0 / m), x.arg() / m) * params.omega_m(branch)
    };
    ((1.0 - m * params.omega_m(j) * root) / params.n as f64).powu(params.n as u32)
}

/// Smallest distance between `y(s)` and any Puiseux branch over `x(s)`.
pub fn branch_consistency(params: &Params, s: Complex64) -> Result<f64> {
    let p = uniformization(params, s)?;
    let m = params.m as i64;
    let mut best = f64::INFINITY;
    for j in 0..m {
        for b in 0..m {
            best = best.min((puiseux_branch(params, j, p.x, b) - p.y).norm());
        }
    }
    Ok(best)
}

/// Separation data for one `ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub l: usize,
    /// Nonzero roots of `P_{0,ℓ}`.
    pub roots: Vec<Complex64>,
    /// Smallest distance between two of those roots (∞ if fewer than two).
    pub min_separation: f64,
    /// Smallest distance to a root of some `P_{k,ℓ}`, `k ∉ {0, ℓ}` (∞ if none).
    pub min_cross_separation: f64,
}

/// Phase `−kπ/n` of the ratio used in the nodality argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub k: usize,
    pub phase: f64,
    /// `phase mod 2π` stays away from `0`.
    pub nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalityReport {
    pub params: Params,
    pub tol: f64,
    /// `t = 0` is the flex parameter and is excluded from the root lists.
    pub flex_parameter: Complex64,
    pub families: Vec<FamilyReport>,
    pub phases: Vec<PhaseReport>,
    pub distinct_roots: bool,
    pub no_common_roots: bool,
    pub pass: bool,
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Nonzero roots `(1 − ω_m^i)/(1 − ω_m^i ω_n^ℓ)` of `P_{0,ℓ}`.
pub fn roots_p0(params: &Params, l: usize) -> Vec<Complex64> {
    let (m, n) = (params.m, params.n);
    (1..m)
        .filter(|&i| !is_integer(l as f64 / n as f64 + i as f64 / m as f64))
        .map(|i| {
            let w = e(i as f64 / m as f64);
            (1.0 - w) / (1.0 - w * e(l as f64 / n as f64))
        })
        .collect()
}

/// Nonzero roots `(1 − ω_m^j)/(ω_n^k − ω_m^j ω_n^ℓ)` of `P_{k,ℓ}`.
pub fn roots_pk(params: &Params, k: usize, l: usize) -> Vec<Complex64> {
    let (m, n) = (params.m, params.n);
    (1..m)
        .filter(|&j| !is_integer((l as f64 - k as f64) / n as f64 + j as f64 / m as f64))
        .map(|j| {
            let w = e(j as f64 / m as f64);
            (1.0 - w) / (e(k as f64 / n as f64) - w * e(l as f64 / n as f64))
        })
        .collect()
}

fn min_distance(a: &[Complex64], b: &[Complex64], same: bool) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &p) in a.iter().enumerate() {
        let rest = if same { &b[i + 1..] } else { b };
        for &q in rest {
            best = best.min((p - q).norm());
        }
    }
    best
}

pub fn nodality_check(params: &Params, tol: f64) -> NodalityReport {
    let n = params.n;
    let families: Vec<FamilyReport> = (1..n)
        .map(|l| {
            let roots = roots_p0(params, l);
            let cross = (1..n)
                .filter(|&k| k != l)
                .map(|k| min_distance(&roots, &roots_pk(params, k, l), false))
                .fold(f64::INFINITY, f64::min);
            FamilyReport {
                l,
                min_separation: min_distance(&roots, &roots, true),
                min_cross_separation: cross,
                roots,
            }
        })
        .collect();
    let phases: Vec<PhaseReport> = (1..n)
        .map(|k| {
            let phase = -(k as f64) * PI / n as f64;
            let wrapped = phase.rem_euclid(2.0 * PI);
            PhaseReport {
                k,
                phase,
                nonzero: wrapped > tol && 2.0 * PI - wrapped > tol,
            }
        })
        .collect();
    let distinct_roots = families.iter().all(|f| f.min_separation > tol);
    let no_common_roots = families.iter().all(|f| f.min_cross_separation > tol);
    let pass = distinct_roots && no_common_roots && phases.iter().all(|p| p.nonzero);
    NodalityReport {
        params: *params,
        tol,
        flex_parameter: Complex64::new(0.0, 0.0),
        families,
        phases,
        distinct_roots,
        no_common_roots,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn uniformization_values() {
        let p = Params::new(2, 2).unwrap();
        let q = uniformization(&p, c(0.0, 0.0)).unwrap();
        assert!(q.x.norm() < 1e-15 && (q.y - 0.25).norm() < 1e-15);
        let p = Params::new(3, 2).unwrap();
        let q = uniformization(&p, c(1.0, 0.0)).unwrap();
        assert!((q.x - 1.0 / 125.0).norm() < 1e-15 && (q.y - 1.0 / 25.0).norm() < 1e-15);
        let far = uniformization(&p, c(1e8, 0.0)).unwrap();
        assert!((far.x - 1.0 / 27.0).norm() < 1e-7 && far.y.norm() < 1e-15);
        assert!(matches!(
            uniformization(&p, c(-2.0 / 3.0, 0.0)),
            Err(Error::PoleAtS { .. })
        ));
    }

    #[test]
    fn puiseux_values() {
        let p = Params::new(3, 2).unwrap();
        assert!((puiseux_branch(&p, 0, c(1.0 / 125.0, 0.0), 0) - 1.0 / 25.0).norm() < 1e-15);
        let p = Params::new(2, 2).unwrap();
        assert!((puiseux_branch(&p, 0, c(1.0 / 16.0, 0.0), 0) - 1.0 / 16.0).norm() < 1e-15);
        for (m, n) in [(2, 2), (3, 4), (5, 3)] {
            let p = Params::new(m, n).unwrap();
            for j in 0..m as i64 {
                let want = (1.0 / n as f64).powi(n as i32);
                assert!((puiseux_branch(&p, j, c(0.0, 0.0), 0) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn consistency_at_a_rational_point() {
        let p = Params::new(3, 2).unwrap();
        assert!(branch_consistency(&p, c(1.0, 0.0)).unwrap() < 1e-15);
    }

    #[test]
    fn nodality_small_cases() {
        let r = nodality_check(&Params::new(2, 2).unwrap(), 1e-9);
        assert!(r.pass);
        assert_eq!(r.families.len(), 1);
        assert_eq!(r.families[0].roots.len(), 0);
        let r = nodality_check(&Params::new(3, 2).unwrap(), 1e-9);
        assert!(r.pass);
        assert_eq!(r.families[0].roots.len(), 2);
        assert!(r.phases.iter().all(|p| p.nonzero));
    }

    #[test]
    fn roots_solve_their_polynomials() {
        for (m, n) in [(3, 2), (4, 3), (6, 3), (5, 4)] {
            let p = Params::new(m, n).unwrap();
            let poly = |k: usize, l: usize, t: Complex64| {
                (1.0 - e(k as f64 / n as f64) * t).powu(m as u32)
                    - (1.0 - e(l as f64 / n as f64) * t).powu(m as u32)
            };
            for l in 1..n {
                for t in roots_p0(&p, l) {
                    assert!(poly(0, l, t).norm() < 1e-9 * (1.0 + t.norm()).powi(m as i32));
                }
                for k in (1..n).filter(|&k| k != l) {
                    for t in roots_pk(&p, k, l) {
                        assert!(poly(k, l, t).norm() < 1e-9 * (1.0 + t.norm()).powi(m as i32));
                    }
                }
            }
        }
    }
}
