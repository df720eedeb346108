//! Polyline paths in the `t`-plane.
//!
//! All loops start at the base point `b = −εi`.  Circles and arcs are
//! approximated by regular polygons so that every puncture moves affinely on
//! each segment, which makes crossing detection exact downstream.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coincidence_locus, locus_min_gap, pk, Params};

/// Default number of polygon vertices per full turn.
pub const VERTICES_PER_TURN: usize = 64;

/// A piecewise-linear path given by its vertex list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TPath {
    pub vertices: Vec<Complex64>,
}

impl TPath {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BadSite("a path needs at least one vertex".into()));
        }
        Ok(Self { vertices })
    }

    pub fn basepoint(&self) -> Complex64 {
        self.vertices[0]
    }

    pub fn endpoint(&self) -> Complex64 {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn is_closed(&self) -> bool {
        (self.basepoint() - self.endpoint()).norm() <= 1e-15
    }

    /// Left-to-right concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &TPath) -> Result<TPath> {
        if (self.endpoint() - other.basepoint()).norm() > 1e-12 {
            return Err(Error::Discontinuous(format!(
                "path ends at {} but the next one starts at {}",
                self.endpoint(),
                other.basepoint()
            )));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(TPath { vertices })
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> TPath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        TPath { vertices }
    }
}

/// Loops of the base-point system, plus the circle at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LoopSite {
    /// Around `t = 0`.
    Origin,
    /// Around `t = η` with `η = ±1`.
    Eta(i8),
    /// Around `p_k = i·tan(kπ/m)`.
    Pk(usize),
    /// A large circle enclosing every coincidence point.
    BigCircle(f64),
}

impl std::fmt::Display for LoopSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoopSite::Origin => write!(f, "origin"),
            LoopSite::Eta(1) => write!(f, "eta+"),
            LoopSite::Eta(_) => write!(f, "eta-"),
            LoopSite::Pk(k) => write!(f, "pk:{k}"),
            LoopSite::BigCircle(r) => write!(f, "big:{r}"),
        }
    }
}

impl std::str::FromStr for LoopSite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "origin" => Ok(LoopSite::Origin),
            "eta+" => Ok(LoopSite::Eta(1)),
            "eta-" => Ok(LoopSite::Eta(-1)),
            _ => {
                if let Some(k) = s.strip_prefix("pk:") {
                    k.parse()
                        .map(LoopSite::Pk)
                        .map_err(|_| Error::BadSite(s.into()))
                } else if let Some(r) = s.strip_prefix("big:") {
                    r.parse()
                        .map(LoopSite::BigCircle)
                        .map_err(|_| Error::BadSite(s.into()))
                } else {
                    Err(Error::BadSite(s.into()))
                }
            }
        }
    }
}

/// `⌊(m−1)/2⌋`: sites `p_1..p_r` lie above the base point, the rest below.
pub fn upper_count(m: usize) -> usize {
    (m - 1) / 2
}

/// The generator sites for `n = 2` in canonical order:
/// origin, η = +1, η = −1, then `p_k` by increasing `k`.
pub fn theorem_sites(m: usize) -> Vec<LoopSite> {
    let mut out = vec![LoopSite::Origin, LoopSite::Eta(1), LoopSite::Eta(-1)];
    out.extend((1..m).filter(|&k| 2 * k != m).map(LoopSite::Pk));
    out
}

/// The largest admissible `eps` (a quarter of the locus gap) for `n = 2`.
pub fn max_eps(params: &Params) -> f64 {
    locus_min_gap(params) / 4.0
}

/// `min(0.1, max_eps)`.
pub fn default_eps(params: &Params) -> f64 {
    0.1f64.min(max_eps(params))
}

pub(crate) fn check_site(params: &Params, site: LoopSite) -> Result<()> {
    if params.n != 2 {
        return Err(Error::InvalidParams(format!(
            "base-point loops are defined for n = 2 (got n = {})",
            params.n
        )));
    }
    match site {
        LoopSite::Origin => Ok(()),
        LoopSite::Eta(eta) if eta == 1 || eta == -1 => Ok(()),
        LoopSite::Eta(eta) => Err(Error::BadSite(format!("eta must be ±1, got {eta}"))),
        LoopSite::Pk(k) if k == 0 || k >= params.m => Err(Error::BadSite(format!(
            "k = {k} is outside [1, {}]",
            params.m - 1
        ))),
        LoopSite::Pk(k) if 2 * k == params.m => Err(Error::BadSite(format!(
            "k = m/2 = {k} has no coincidence point"
        ))),
        LoopSite::Pk(_) => Ok(()),
        LoopSite::BigCircle(r) => {
            let reach = coincidence_locus(params)
                .iter()
                .map(|p| p.xi.norm())
                .fold(0.0, f64::max);
            if r > reach + 1.0 {
                Ok(())
            } else {
                Err(Error::BadSite(format!(
                    "radius {r} does not clear the locus (|ξ| ≤ {reach:.4})"
                )))
            }
        }
    }
}

/// Arc about `center` of radius `r` starting at angle `start`, sweeping
/// `turns` full turns (negative is clockwise); the start vertex is omitted.
pub fn arc(center: Complex64, r: f64, start: f64, turns: f64, per_turn: usize) -> Vec<Complex64> {
    let k = ((turns.abs() * per_turn as f64).ceil() as usize).max(1);
    (1..=k)
        .map(|i| center + Complex64::from_polar(r, start + 2.0 * PI * turns * i as f64 / k as f64))
        .collect()
}

/// A closed polygonal circle about `center` through `center − r·i`.
pub fn circle_loop(center: Complex64, r: f64, per_turn: usize) -> TPath {
    let start = center - Complex64::new(0.0, r);
    let mut vertices = vec![start];
    vertices.extend(arc(center, r, -PI / 2.0, 1.0, per_turn));
    *vertices.last_mut().unwrap() = start;
    TPath { vertices }
}

/// Builds `go · loop · go⁻¹` from the base point.
fn lasso(base: Complex64, go: Vec<Complex64>, around: Vec<Complex64>) -> TPath {
    let mut vertices = vec![base];
    vertices.extend_from_slice(&go);
    vertices.extend(around);
    // the circle closes exactly on the last approach vertex
    if let (Some(last), Some(&back_to)) = (vertices.last_mut(), go.last()) {
        *last = back_to;
    }
    let back: Vec<Complex64> = std::iter::once(base).chain(go).rev().skip(1).collect();
    vertices.extend(back);
    TPath { vertices }
}

/// Descent from the base point along the negative imaginary axis, passing west
/// of every negative-side `p_kk` with `kk` from `m−1` down to `stop + 1`
/// (never above the negative side).
fn descend(m: usize, eps: f64, stop: usize, per_turn: usize) -> Vec<Complex64> {
    let mut go = Vec::new();
    for kk in (stop.max(upper_count(m)) + 1..m).rev() {
        if 2 * kk == m {
            continue;
        }
        let p = pk(m, kk);
        go.push(p + Complex64::new(0.0, eps));
        go.extend(arc(p, eps, PI / 2.0, 0.5, per_turn));
    }
    go
}

/// The loop around `site` from `−εi` with the default resolution.
pub fn figure1_loop(params: &Params, site: LoopSite, eps: f64) -> Result<TPath> {
    figure1_loop_with(params, site, eps, VERTICES_PER_TURN)
}

/// The loop around `site` from `−εi` with `per_turn` vertices per full turn.
pub fn figure1_loop_with(
    params: &Params,
    site: LoopSite,
    eps: f64,
    per_turn: usize,
) -> Result<TPath> {
    check_site(params, site)?;
    let max = max_eps(params);
    if !(eps > 0.0 && eps <= max) {
        return Err(Error::BadEps { eps, max });
    }
    let m = params.m;
    let i = Complex64::new(0.0, 1.0);
    let base = -i * eps;
    let origin = Complex64::new(0.0, 0.0);
    let path = match site {
        LoopSite::Origin => circle_loop(origin, eps, per_turn),
        LoopSite::Eta(eta) => {
            let eta = eta as f64;
            // quarter arc to ±ε, then along the real axis to η ∓ ε
            let mut go = arc(origin, eps, -PI / 2.0, 0.25 * eta, per_turn);
            go.push(Complex64::new(eta * (1.0 - eps), 0.0));
            let start = if eta > 0.0 { PI } else { 0.0 };
            let around = arc(Complex64::new(eta, 0.0), eps, start, 1.0, per_turn);
            lasso(base, go, around)
        }
        LoopSite::Pk(k) if k <= upper_count(m) => {
            // half arc to +εi, then up the axis passing east of p_1..p_{k−1}
            let mut go = arc(origin, eps, -PI / 2.0, 0.5, per_turn);
            for l in 1..k {
                let p = pk(m, l);
                go.push(p - i * eps);
                go.extend(arc(p, eps, -PI / 2.0, 0.5, per_turn));
            }
            let p = pk(m, k);
            go.push(p - i * eps);
            lasso(base, go, arc(p, eps, -PI / 2.0, 1.0, per_turn))
        }
        LoopSite::Pk(k) => {
            let mut go = descend(m, eps, k, per_turn);
            let p = pk(m, k);
            go.push(p + i * eps);
            lasso(base, go, arc(p, eps, PI / 2.0, 1.0, per_turn))
        }
        LoopSite::BigCircle(r) => {
            let mut go = descend(m, eps, 0, per_turn);
            go.push(-i * r);
            lasso(base, go, arc(origin, r, -PI / 2.0, 1.0, 4 * per_turn))
        }
    };
    Ok(path)
}

/// Outcome of [`validate_path`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub min_distance: f64,
    pub nearest: Complex64,
    pub pass: bool,
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a) * d.conj()).re / len2;
    (p - (a + d * s.clamp(0.0, 1.0))).norm()
}

/// Minimum distance from the path to the coincidence locus (and `0`).
pub fn validate_path(params: &Params, path: &TPath, delta: f64) -> PathReport {
    let mut targets: Vec<Complex64> = coincidence_locus(params).iter().map(|p| p.xi).collect();
    targets.push(Complex64::new(0.0, 0.0));
    let mut best = (f64::INFINITY, targets[0]);
    for &q in &targets {
        let d = if path.vertices.len() == 1 {
            (path.vertices[0] - q).norm()
        } else {
            path.segments()
                .map(|(a, b)| point_segment_distance(q, a, b))
                .fold(f64::INFINITY, f64::min)
        };
        if d < best.0 {
            best = (d, q);
        }
    }
    PathReport {
        min_distance: best.0,
        nearest: best.1,
        pass: best.0 > delta,
    }
}
