//! Rotation operators on convex families of punctures.
//!
//! A rotation `R_A^ν` advances every puncture of a convex family `A` by `ν`
//! cyclic steps around the family's centroid.  It is realized as an explicit
//! motion in three phases:
//!
//! 1. contract every member radially towards the centroid into a small disk
//!    that contains no other puncture (members get slightly different radii),
//! 2. turn the members inside the disk so that member `k` reaches the angle
//!    of member `k + ν` (fractional `ν` interpolates the last step),
//! 3. expand radially onto the target positions.
//!
//! Because the contracted disk is chosen free of other punctures, the
//! motion is isotopic to any other realization of the operator that keeps
//! the members inside their hull, and the resulting braid is well defined.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::geometry::{fiber, Fiber, Params, PunctureLabel};
use crate::paths::{check_site, LoopSite, VERTICES_PER_TURN};
use crate::tracking::{frame_braid, Trajectories};

/// Tolerance of the strict-convexity test.
const CONVEX_TOL: f64 = 1e-12;
/// Non-members closer than this to a centroid are treated as encircled.
const ENCIRCLED_TOL: f64 = 1e-9;

/// Simultaneous rotation of disjoint families by the same exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub blocks: Vec<Vec<PunctureLabel>>,
    pub exponent: Rational64,
}

impl RotationSpec {
    pub fn new(blocks: Vec<Vec<PunctureLabel>>, exponent: Rational64) -> Self {
        Self { blocks, exponent }
    }

    pub fn integer(blocks: Vec<Vec<PunctureLabel>>, exponent: i64) -> Self {
        Self::new(blocks, Rational64::from_integer(exponent))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.blocks.clone(), -self.exponent)
    }

    /// The same blocks, rotated one at a time.
    pub fn split(&self) -> Vec<RotationSpec> {
        self.blocks
            .iter()
            .map(|b| RotationSpec::new(vec![b.clone()], self.exponent))
            .collect()
    }
}

/// Pairs `{T_{j,0}, T_{j+s,1}}` for all `j`.
pub fn pair_family(params: &Params, shift: i64) -> Vec<Vec<PunctureLabel>> {
    (0..params.m as i64)
        .map(|j| vec![params.root(j, 0), params.root(j + shift, 1)])
        .collect()
}

/// The single family `{T_{j,δ} : j}` (one block).
pub fn ring_family(params: &Params, delta: usize) -> Vec<Vec<PunctureLabel>> {
    vec![(0..params.m as i64)
        .map(|j| params.root(j, delta as i64))
        .collect()]
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Vertices of a convex family in counterclockwise order about `x`.
fn ccw_order(points: &[Complex64], x: Complex64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        (points[a] - x)
            .arg()
            .partial_cmp(&(points[b] - x).arg())
            .unwrap_or(Ordering::Equal)
    });
    order
}

/// Distance from `p` to the convex polygon with counterclockwise `hull`
/// (zero inside).  Two-point hulls are segments.
fn polygon_distance(p: Complex64, hull: &[Complex64]) -> f64 {
    let n = hull.len();
    let edge = |i: usize| (hull[i], hull[(i + 1) % n]);
    if n >= 3
        && (0..n).all(|i| {
            let (a, b) = edge(i);
            cross(b - a, p - a) >= 0.0
        })
    {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let (a, b) = edge(i);
            crate::paths::point_segment_distance(p, a, b)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Whether two convex polygons (or segments) intersect, by separating axes.
fn hulls_intersect(a: &[Complex64], b: &[Complex64]) -> bool {
    let axes = |h: &[Complex64]| -> Vec<Complex64> {
        let n = h.len();
        let mut out = Vec::new();
        for i in 0..n {
            let d = h[(i + 1) % n] - h[i];
            out.push(Complex64::new(-d.im, d.re));
            if n == 2 {
                out.push(d);
            }
        }
        out
    };
    for axis in axes(a).into_iter().chain(axes(b)) {
        let proj = |h: &[Complex64]| {
            h.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| {
                    let v = z.re * axis.re + z.im * axis.im;
                    (lo.min(v), hi.max(v))
                })
        };
        let ((a0, a1), (b0, b1)) = (proj(a), proj(b));
        if a1 < b0 || b1 < a0 {
            return false;
        }
    }
    true
}

struct Move {
    strand: usize,
    angle: f64,
    radius: f64,
    contracted: f64,
    turn: f64,
    end_radius: f64,
    /// Target position, hit exactly at the end of the expansion.
    target: Complex64,
}

struct BlockPlan {
    center: Complex64,
    moves: Vec<Move>,
}

/// Realizes `spec` starting from `config` (positions indexed like `labels`).
fn realize_on(
    labels: &[PunctureLabel],
    config: &[Complex64],
    spec: &RotationSpec,
    per_turn: usize,
) -> Result<Vec<Vec<Complex64>>> {
    if *spec.exponent.numer() == 0 || spec.blocks.is_empty() {
        return Ok(Vec::new());
    }
    let index_of = |l: &PunctureLabel| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::DegenerateBlock(format!("label {l} is not part of the fiber")))
    };
    let mut member = vec![usize::MAX; labels.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (b, block) in spec.blocks.iter().enumerate() {
        if block.len() < 2 {
            return Err(Error::DegenerateBlock(format!(
                "block {b} has fewer than 2 labels"
            )));
        }
        let mut idx = Vec::new();
        for l in block {
            let i = index_of(l)?;
            if member[i] != usize::MAX {
                return Err(Error::DegenerateBlock(format!("label {l} occurs twice")));
            }
            member[i] = b;
            idx.push(i);
        }
        blocks.push(idx);
    }

    // geometry of each block: centroid, ccw order, convexity
    let mut hulls: Vec<Vec<Complex64>> = Vec::new();
    let mut centroids = Vec::new();
    let mut orders = Vec::new();
    for block in &blocks {
        let pts: Vec<Complex64> = block.iter().map(|&i| config[i]).collect();
        let x = pts.iter().sum::<Complex64>() / pts.len() as f64;
        let order = ccw_order(&pts, x);
        let scale = pts.iter().map(|p| (p - x).norm()).fold(0.0, f64::max);
        for (a, &p) in pts.iter().enumerate() {
            for &q in &pts[a + 1..] {
                if (p - q).norm() <= CONVEX_TOL * scale.max(1.0) {
                    return Err(Error::DegenerateBlock("coincident punctures".into()));
                }
            }
        }
        let hull: Vec<Complex64> = order.iter().map(|&k| pts[k]).collect();
        if hull.len() >= 3 {
            let n = hull.len();
            for k in 0..n {
                let (a, b, c) = (hull[k], hull[(k + 1) % n], hull[(k + 2) % n]);
                if cross(b - a, c - b) <= CONVEX_TOL * scale * scale {
                    return Err(Error::DegenerateBlock(
                        "punctures are not in strictly convex position".into(),
                    ));
                }
            }
        }
        hulls.push(hull);
        centroids.push(x);
        orders.push(order.into_iter().map(|k| block[k]).collect::<Vec<_>>());
    }
    for a in 0..hulls.len() {
        for b in a + 1..hulls.len() {
            if hulls_intersect(&hulls[a], &hulls[b]) {
                return Err(Error::OverlappingHulls(format!(
                    "blocks {a} and {b} intersect"
                )));
            }
        }
    }

    let nu = *spec.exponent.numer() as f64 / *spec.exponent.denom() as f64;
    let whole = nu.floor() as i64;
    let frac = nu - whole as f64;
    let mut plans = Vec::new();
    for (b, order) in orders.iter().enumerate() {
        let x = centroids[b];
        let mu = order.len();
        let rad_x: Vec<f64> = order.iter().map(|&i| (config[i] - x).norm()).collect();

        // room for the contracted circle
        let mut room = rad_x.iter().cloned().fold(f64::INFINITY, f64::min) * 0.5;
        let mut encircles = false;
        for (i, &z) in config.iter().enumerate() {
            if member[i] != usize::MAX {
                continue;
            }
            let d = (z - x).norm();
            if d <= ENCIRCLED_TOL {
                encircles = true;
                continue;
            }
            if polygon_distance(z, &hulls[b]) <= CONVEX_TOL * rad_x[0].max(1.0) {
                return Err(Error::OverlappingHulls(format!(
                    "puncture {} lies in the hull of block {b}",
                    labels[i]
                )));
            }
            room = room.min(0.45 * d);
        }
        for (c, hull) in hulls.iter().enumerate() {
            if c != b {
                room = room.min(0.45 * polygon_distance(x, hull));
            }
        }
        // A puncture sitting exactly at the centroid would stay collinear
        // with every antipodal pair of members, so no projection could
        // separate them; turning about a nearby point avoids that.
        let center = if encircles {
            x + Complex64::from_polar(0.1 * room, 0.7)
        } else {
            x
        };
        let ang_x: Vec<f64> = order.iter().map(|&i| (config[i] - x).arg()).collect();
        let step = |k: usize, dir: i64| -> f64 {
            if dir > 0 {
                (ang_x[(k + 1) % mu] - ang_x[k]).rem_euclid(2.0 * PI)
            } else {
                -(ang_x[k] - ang_x[(k + mu - 1) % mu]).rem_euclid(2.0 * PI)
            }
        };
        let mut moves = Vec::new();
        for k in 0..mu {
            // target about the centroid, so that the block keeps its centroid
            let mut total = 0.0;
            let mut at = k;
            for _ in 0..whole.unsigned_abs() {
                let dir = whole.signum();
                total += step(at, dir);
                at = if dir > 0 {
                    (at + 1) % mu
                } else {
                    (at + mu - 1) % mu
                };
            }
            let target = if frac > 0.0 {
                let next = (at + 1) % mu;
                let r = rad_x[at] * (1.0 - frac) + rad_x[next] * frac;
                total += frac * step(at, 1);
                x + Complex64::from_polar(r, ang_x[k] + total)
            } else {
                config[order[at]]
            };
            // the same turn seen from the rotation center
            let start = (config[order[k]] - center).arg();
            let fix = ((target - center).arg() - (start + total) + PI).rem_euclid(2.0 * PI) - PI;
            // distinct radii keep the turning members from being symmetric
            let contracted = room * (1.0 - 0.2 * k as f64 / mu as f64);
            moves.push(Move {
                strand: order[k],
                angle: start,
                radius: (config[order[k]] - center).norm(),
                contracted,
                turn: total + fix,
                end_radius: (target - center).norm(),
                target,
            });
        }
        plans.push(BlockPlan { center, moves });
    }

    let max_turns = plans
        .iter()
        .flat_map(|p| p.moves.iter().map(|m| m.turn.abs()))
        .fold(0.0, f64::max)
        / (2.0 * PI);
    let turn_frames = ((max_turns * per_turn as f64).ceil() as usize).max(1);

    let mut frames = Vec::with_capacity(turn_frames + 2);
    let mut frame = |phase: u8, s: f64| {
        let mut f = config.to_vec();
        for plan in &plans {
            for mv in &plan.moves {
                let rc = mv.contracted;
                let (r, a) = match phase {
                    0 => (mv.radius + (rc - mv.radius) * s, mv.angle),
                    1 => (rc, mv.angle + mv.turn * s),
                    _ => (rc + (mv.end_radius - rc) * s, mv.angle + mv.turn),
                };
                f[mv.strand] = if phase == 2 && s == 1.0 {
                    mv.target
                } else {
                    plan.center + Complex64::from_polar(r, a)
                };
            }
        }
        frames.push(f);
    };
    frame(0, 1.0);
    for k in 1..=turn_frames {
        frame(1, k as f64 / turn_frames as f64);
    }
    frame(2, 1.0);
    Ok(frames)
}

/// Realizes `spec` on `fiber` with the default arc resolution.
pub fn realize_rotation(fiber: &Fiber, spec: &RotationSpec) -> Result<Trajectories> {
    realize_word(fiber, std::slice::from_ref(spec), VERTICES_PER_TURN)
}

/// Realizes a sequence of rotations, each acting on the configuration left by
/// the previous one (labels follow their punctures).
pub fn realize_word(fiber: &Fiber, word: &[RotationSpec], per_turn: usize) -> Result<Trajectories> {
    let mut traj = Trajectories::stationary(fiber);
    for spec in word {
        let current = traj.end().to_vec();
        let frames = realize_on(&traj.labels, &current, spec, per_turn)?;
        traj.frames.extend(frames);
    }
    Ok(traj)
}

/// Braid of a single rotation, read in the frame of `fiber`.
pub fn rotation_braid(fiber: &Fiber, spec: &RotationSpec) -> Result<BraidWord> {
    frame_braid(&realize_rotation(fiber, spec)?)
}

/// Braid of a rotation word, read in the frame of `fiber`.
pub fn word_braid(fiber: &Fiber, word: &[RotationSpec]) -> Result<BraidWord> {
    frame_braid(&realize_word(fiber, word, VERTICES_PER_TURN)?)
}

/// The fiber over the base point `−εi`.
pub fn base_fiber(params: &Params, eps: f64) -> Fiber {
    fiber(params, Complex64::new(0.0, -eps))
}

/// Closed-form rotation word of a generator site.
///
/// * origin: `(R_{A[0]})²` on all pairs `{T_{j,0}, T_{j,1}}` at once;
/// * `η`: `(R_{A^{(δ)}})^m` with `δ = (η+1)/2`;
/// * `p_k` above the base point: `∏_j (R_{A_{j,j+k}})²`, pair by pair;
/// * `p_k` below: `∏_j (R_{A_{j,j−(m−k)}})²`, pair by pair.
pub fn theorem_word(params: &Params, site: LoopSite) -> Result<Vec<RotationSpec>> {
    check_site(params, site)?;
    let m = params.m as i64;
    let r = crate::paths::upper_count(params.m) as i64;
    Ok(match site {
        LoopSite::Origin => vec![RotationSpec::integer(pair_family(params, 0), 2)],
        LoopSite::Eta(eta) => {
            let delta = if eta > 0 { 1 } else { 0 };
            vec![RotationSpec::integer(ring_family(params, delta), m)]
        }
        LoopSite::Pk(k) => {
            let k = k as i64;
            let shift = if k <= r { k } else { -(m - k) };
            RotationSpec::integer(pair_family(params, shift), 2).split()
        }
        LoopSite::BigCircle(_) => {
            return Err(Error::BadSite(
                "the circle at infinity has no closed form".into(),
            ))
        }
    })
}

/// Rotation word of a generator site with every conjugation kept.
///
/// * `η = +1`: `R_{A[0]}^{1/2} · (R_{A^{(1)}})^m · R_{A[0]}^{−1/2}`;
/// * `η = −1`: `R_{A[0]}^{−1/2} · (R_{A^{(0)}})^m · R_{A[0]}^{1/2}`;
/// * `p_k` above: `C · (R_{A[+k]})² · C⁻¹` with `C = R_{A[0]} ⋯ R_{A[+(k−1)]}`;
/// * `p_k` below, `κ = m − k`: `C · (R_{A[−κ]})² · C⁻¹` with
///   `C = R_{A[−1]} ⋯ R_{A[−(κ−1)]}`.
pub fn conjugated_word(params: &Params, site: LoopSite) -> Result<Vec<RotationSpec>> {
    check_site(params, site)?;
    let m = params.m as i64;
    let r = crate::paths::upper_count(params.m) as i64;
    let half = Rational64::new(1, 2);
    let sandwich = |prefix: Vec<RotationSpec>, middle: RotationSpec| {
        let mut out = prefix.clone();
        out.push(middle);
        out.extend(prefix.iter().rev().map(RotationSpec::inverse));
        out
    };
    Ok(match site {
        LoopSite::Origin => theorem_word(params, site)?,
        LoopSite::Eta(eta) => {
            let (delta, sign) = if eta > 0 { (1, half) } else { (0, -half) };
            sandwich(
                vec![RotationSpec::new(pair_family(params, 0), sign)],
                RotationSpec::integer(ring_family(params, delta), m),
            )
        }
        LoopSite::Pk(k) => {
            let k = k as i64;
            let (shifts, last): (Vec<i64>, i64) = if k <= r {
                ((0..k).collect(), k)
            } else {
                let kappa = m - k;
                ((1..kappa).map(|s| -s).collect(), -kappa)
            };
            sandwich(
                shifts
                    .into_iter()
                    .map(|s| RotationSpec::integer(pair_family(params, s), 1))
                    .collect(),
                RotationSpec::integer(pair_family(params, last), 2),
            )
        }
        LoopSite::BigCircle(_) => {
            return Err(Error::BadSite(
                "the circle at infinity has no closed form".into(),
            ))
        }
    })
}

/// Closed-form monodromy braid of `site`, realized over `−εi`.
pub fn theorem_generator(params: &Params, site: LoopSite, eps: f64) -> Result<BraidWord> {
    word_braid(&base_fiber(params, eps), &theorem_word(params, site)?)
}

/// Conjugated monodromy braid of `site`, realized over `−εi`.
pub fn conjugated_generator(params: &Params, site: LoopSite, eps: f64) -> Result<BraidWord> {
    word_braid(&base_fiber(params, eps), &conjugated_word(params, site)?)
}
