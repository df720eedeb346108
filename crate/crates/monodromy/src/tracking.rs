//! Puncture tracking and braid extraction.
//!
//! Trajectories are piecewise affine: every strand moves on a straight line
//! between consecutive frames.  After rotating the plane by `e^{−iθ}`, two
//! strands swap their order along the real axis exactly where the affine real
//! part of their difference vanishes, so every crossing is solved in closed
//! form.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::geometry::{puncture_position, Fiber, Params, PunctureLabel};
use crate::paths::{validate_path, TPath};

/// Number of projection angles tried before giving up.
pub const PROJECTION_ATTEMPTS: usize = 97;

/// Relative size below which a projected difference counts as zero.
const ZERO_TOL: f64 = 1e-12;

/// Positions of every puncture on a shared grid of breakpoints
/// `u = 0, 1/S, …, 1`; strands move affinely in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectories {
    pub labels: Vec<PunctureLabel>,
    /// `frames[s][k]` is the position of `labels[k]` at breakpoint `s`.
    pub frames: Vec<Vec<Complex64>>,
}

impl Trajectories {
    /// Motionless trajectories sitting at `fiber`.
    pub fn stationary(fiber: &Fiber) -> Self {
        Self {
            labels: fiber.labels.clone(),
            frames: vec![fiber.positions.clone()],
        }
    }

    pub fn strand_count(&self) -> usize {
        self.labels.len()
    }

    pub fn start(&self) -> &[Complex64] {
        &self.frames[0]
    }

    pub fn end(&self) -> &[Complex64] {
        self.frames.last().expect("trajectories have a frame")
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Trajectories) -> Result<Trajectories> {
        if self.labels != other.labels {
            return Err(Error::Discontinuous("label sets differ".into()));
        }
        let gap = self
            .end()
            .iter()
            .zip(other.start())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if gap > 1e-9 {
            return Err(Error::Discontinuous(format!("endpoints differ by {gap:e}")));
        }
        let mut frames = self.frames.clone();
        frames.extend_from_slice(&other.frames[1..]);
        Ok(Trajectories {
            labels: self.labels.clone(),
            frames,
        })
    }

    /// For a closed motion, `perm[k]` is the index of the start puncture
    /// occupying the end position of strand `k` (matching radius `radius`).
    pub fn label_permutation(&self, radius: f64) -> Option<Vec<usize>> {
        let start = self.start();
        self.end()
            .iter()
            .map(|z| {
                let hits: Vec<usize> = start
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| (*w - z).norm() <= radius)
                    .map(|(i, _)| i)
                    .collect();
                (hits.len() == 1).then(|| hits[0])
            })
            .collect()
    }
}

/// Positions of all punctures along `path`.
pub fn track(params: &Params, path: &TPath) -> Result<Trajectories> {
    let report = validate_path(params, path, 1e-12);
    if !report.pass {
        return Err(Error::PathThroughCoincidence {
            distance: report.min_distance,
            re: report.nearest.re,
            im: report.nearest.im,
        });
    }
    let labels = params.labels();
    let frames = path
        .vertices
        .iter()
        .map(|&t| {
            labels
                .iter()
                .map(|&l| puncture_position(params, l, t))
                .collect()
        })
        .collect();
    Ok(Trajectories { labels, frames })
}

/// A swap of the strands at projection positions `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub u: f64,
    /// Zero-based left position of the swapped pair.
    pub position: usize,
    pub sign: i8,
}

fn projection_order(points: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (za, zb) = (points[a], points[b]);
        za.re
            .partial_cmp(&zb.re)
            .unwrap_or(Ordering::Equal)
            .then(za.im.partial_cmp(&zb.im).unwrap_or(Ordering::Equal))
    });
    order
}

fn nongeneric(theta: f64, reason: impl Into<String>) -> Error {
    Error::NonGenericProjection {
        theta,
        reason: reason.into(),
    }
}

/// Crossing events of the projection to `Re(e^{−iθ} z)`, in order.
pub fn crossing_events(traj: &Trajectories, theta: f64) -> Result<Vec<CrossingEvent>> {
    let rot = Complex64::from_polar(1.0, -theta);
    let frames: Vec<Vec<Complex64>> = traj
        .frames
        .iter()
        .map(|f| f.iter().map(|z| z * rot).collect())
        .collect();
    let n = traj.strand_count();
    let scale = frames
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let zero = ZERO_TOL * scale;
    let segments = frames.len().saturating_sub(1).max(1) as f64;

    let mut order = projection_order(&frames[0]);
    let mut slot = vec![0usize; n];
    for (i, &k) in order.iter().enumerate() {
        slot[k] = i;
    }
    for w in order.windows(2) {
        if (frames[0][w[1]].re - frames[0][w[0]].re).abs() <= zero {
            return Err(nongeneric(
                theta,
                "two punctures share a projection at the start",
            ));
        }
    }

    let mut events = Vec::new();
    for (s, pair) in frames.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        // every pair whose projected order flips on this segment
        let mut local: Vec<(f64, usize, usize)> = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                let d0 = (a[q] - a[p]).re;
                let d1 = (b[q] - b[p]).re;
                if d1.abs() <= zero {
                    return Err(nongeneric(theta, "two projections meet at a breakpoint"));
                }
                if (d0 > 0.0) != (d1 > 0.0) {
                    local.push((d0 / (d0 - d1), p, q));
                }
            }
        }
        local.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));

        // Simultaneous crossings are grouped into runs of consecutive slots.
        // A run of two slots is an ordinary crossing; a longer run is only
        // accepted when every pair in it flips with the same sign (collinear
        // punctures passing through the vertical), which is a half twist.
        let mut g = 0;
        while g < local.len() {
            let mut h = g + 1;
            while h < local.len() && local[h].0 - local[g].0 <= 1e-12 {
                h += 1;
            }
            let u = local[g].0;
            let mut runs: Vec<(usize, usize, usize)> = Vec::new(); // (lo, hi, pairs)
            let mut spans: Vec<(usize, usize)> = local[g..h]
                .iter()
                .map(|&(_, p, q)| (slot[p].min(slot[q]), slot[p].max(slot[q])))
                .collect();
            spans.sort_unstable();
            for (lo, hi) in spans {
                match runs.last_mut() {
                    Some(run) if lo <= run.1 => {
                        run.1 = run.1.max(hi);
                        run.2 += 1;
                    }
                    _ => runs.push((lo, hi, 1)),
                }
            }
            for (lo, hi, pairs) in runs {
                let k = hi - lo + 1;
                if pairs != k * (k - 1) / 2 {
                    return Err(nongeneric(
                        theta,
                        if k == 2 || pairs < k - 1 {
                            "crossing of non-adjacent strands"
                        } else {
                            "simultaneous adjacent crossings"
                        },
                    ));
                }
                let at = |i: usize| {
                    let w = order[i];
                    a[w] + (b[w] - a[w]) * u
                };
                let mut sign = 0i8;
                for i in lo..hi {
                    for j in i + 1..=hi {
                        let (zl, zr) = (at(i), at(j));
                        if (zl.im - zr.im).abs() <= zero {
                            return Err(nongeneric(theta, "strands collide"));
                        }
                        let here = if zl.im < zr.im { 1 } else { -1 };
                        if sign != 0 && here != sign {
                            return Err(nongeneric(theta, "simultaneous adjacent crossings"));
                        }
                        sign = here;
                    }
                }
                let t = (s as f64 + u) / segments;
                for top in lo + 1..=hi {
                    for i in (lo..top).rev() {
                        events.push(CrossingEvent {
                            u: t,
                            position: i,
                            sign,
                        });
                    }
                }
                order[lo..=hi].reverse();
                for i in lo..=hi {
                    slot[order[i]] = i;
                }
            }
            g = h;
        }
    }
    Ok(events)
}

/// The braid word read off the projection at angle `theta`.
pub fn extract_braid(traj: &Trajectories, theta: f64) -> Result<BraidWord> {
    let events = crossing_events(traj, theta)?;
    let letters = events
        .iter()
        .map(|e| e.sign as i32 * (e.position as i32 + 1))
        .collect();
    BraidWord::new(traj.strand_count(), letters)
}

/// First angle `kπ/97` for which extraction succeeds.
pub fn choose_projection(traj: &Trajectories) -> Result<f64> {
    (0..PROJECTION_ATTEMPTS)
        .map(|k| k as f64 * PI / PROJECTION_ATTEMPTS as f64)
        .find(|&theta| crossing_events(traj, theta).is_ok())
        .ok_or(Error::NoGenericProjection {
            attempts: PROJECTION_ATTEMPTS,
        })
}

/// Angles (mod π) at which two of `points` have equal projections.
fn critical_angles(points: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::new();
    for (a, &p) in points.iter().enumerate() {
        for &q in &points[a + 1..] {
            let d = q - p;
            if d.norm() > 0.0 {
                out.push((d.arg() + PI / 2.0).rem_euclid(PI));
            }
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    out
}

/// The open interval of angles (mod π, as `(lo, hi)` with `lo < hi` possibly
/// above π) on which the projection order of `points` is constant and which
/// contains the first generic grid angle `kπ/97`.
pub fn projection_chamber(points: &[Complex64]) -> Result<(f64, f64)> {
    let crit = critical_angles(points);
    if crit.is_empty() {
        return Ok((0.0, PI));
    }
    let near = |theta: f64| {
        crit.iter().any(|&c| {
            let d = (theta - c).rem_euclid(PI);
            d.min(PI - d) < 1e-9
        })
    };
    let theta = (0..PROJECTION_ATTEMPTS)
        .map(|k| k as f64 * PI / PROJECTION_ATTEMPTS as f64)
        .find(|&t| !near(t))
        .ok_or(Error::NoGenericProjection {
            attempts: PROJECTION_ATTEMPTS,
        })?;
    let lo = crit.iter().rev().find(|&&c| c < theta).copied();
    let hi = crit.iter().find(|&&c| c > theta).copied();
    Ok(match (lo, hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (None, Some(hi)) => (crit[crit.len() - 1] - PI, hi),
        (Some(lo), None) => (lo, crit[0] + PI),
        (None, None) => unreachable!("crit is nonempty"),
    })
}

/// Candidate angles inside the start fiber's chamber, in a fixed order:
/// grid angles first, then interior fractions of the chamber.
pub fn frame_candidates(traj: &Trajectories) -> Result<Vec<f64>> {
    let (lo, hi) = projection_chamber(traj.start())?;
    let width = hi - lo;
    let margin = 1e-6 * width;
    let inside = |t: f64| t > lo + margin && t < hi - margin;
    let mut out: Vec<f64> = Vec::new();
    for k in -(PROJECTION_ATTEMPTS as i64)..2 * PROJECTION_ATTEMPTS as i64 {
        let t = k as f64 * PI / PROJECTION_ATTEMPTS as f64;
        if inside(t) {
            out.push(t);
        }
    }
    let mut denom = 2;
    while out.len() < PROJECTION_ATTEMPTS {
        for num in 1..denom {
            if num_integer_gcd(num, denom) == 1 {
                out.push(lo + width * num as f64 / denom as f64);
            }
        }
        denom += 1;
    }
    out.truncate(PROJECTION_ATTEMPTS);
    Ok(out)
}

fn num_integer_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_integer_gcd(b, a % b)
    }
}

/// A generic angle inside the chamber of the start configuration.
///
/// Braids extracted through this angle depend only on the motion and on the
/// start configuration, so two motions sharing a start fiber yield words that
/// can be compared with [`crate::braids_equal`].
pub fn frame_projection(traj: &Trajectories) -> Result<f64> {
    frame_candidates(traj)?
        .into_iter()
        .find(|&theta| crossing_events(traj, theta).is_ok())
        .ok_or(Error::NoGenericProjection {
            attempts: PROJECTION_ATTEMPTS,
        })
}

/// The braid of `traj` read in the frame of its start configuration.
pub fn frame_braid(traj: &Trajectories) -> Result<BraidWord> {
    extract_braid(traj, frame_projection(traj)?)
}

/// Labels in projection order of the start configuration of the frame.
pub fn strand_labels(traj: &Trajectories) -> Result<Vec<PunctureLabel>> {
    let theta = frame_projection(traj)?;
    let rot = Complex64::from_polar(1.0, -theta);
    let pts: Vec<_> = traj.start().iter().map(|z| z * rot).collect();
    Ok(projection_order(&pts)
        .into_iter()
        .map(|k| traj.labels[k])
        .collect())
}
