//! Puncture positions, fibers and the coincidence locus.
//!
//! For parameters `(m, n)` the fiber over `t` is the set of `mn + 1` points
//! `{0} ∪ {T_{j,ℓ}(t)}` with `T_{j,ℓ}(t) = −ω_m^j (1 + ω_n^ℓ t)`.  Every root
//! moves affinely in `t` with unit speed, so all collisions are found by
//! solving linear equations pairwise.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance used to merge pairwise intersection parameters.
pub const CLUSTER_TOL: f64 = 1e-9;

/// `e(x) = exp(2πi x)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// The bidegree `(m, n)` of the hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub n: usize,
}

impl Params {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidParams(format!(
                "m and n must both be at least 2 (got m = {m}, n = {n})"
            )));
        }
        Ok(Self { m, n })
    }

    /// Number of punctures `mn + 1` (roots plus origin).
    pub fn strand_count(&self) -> usize {
        self.m * self.n + 1
    }

    /// `ω_m^j`, with `j` taken modulo `m`.
    pub fn omega_m(&self, j: i64) -> Complex64 {
        e(j.rem_euclid(self.m as i64) as f64 / self.m as f64)
    }

    /// `ω_n^ℓ`, with `ℓ` taken modulo `n`.
    pub fn omega_n(&self, l: i64) -> Complex64 {
        e(l.rem_euclid(self.n as i64) as f64 / self.n as f64)
    }

    /// Root label with both indices reduced into range.
    pub fn root(&self, j: i64, l: i64) -> PunctureLabel {
        PunctureLabel::Root {
            j: j.rem_euclid(self.m as i64) as usize,
            l: l.rem_euclid(self.n as i64) as usize,
        }
    }

    /// All labels in canonical order: origin first, then `(ℓ, j)` lexicographic.
    pub fn labels(&self) -> Vec<PunctureLabel> {
        let mut out = Vec::with_capacity(self.strand_count());
        out.push(PunctureLabel::Origin);
        for l in 0..self.n {
            for j in 0..self.m {
                out.push(PunctureLabel::Root { j, l });
            }
        }
        out
    }

    /// Position of `label` in [`Params::labels`].
    pub fn label_index(&self, label: PunctureLabel) -> usize {
        match label {
            PunctureLabel::Origin => 0,
            PunctureLabel::Root { j, l } => 1 + l * self.m + j,
        }
    }

    pub fn is_valid_label(&self, label: PunctureLabel) -> bool {
        match label {
            PunctureLabel::Origin => true,
            PunctureLabel::Root { j, l } => j < self.m && l < self.n,
        }
    }
}

/// A marked point of the fiber: the origin or a root `T_{j,ℓ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PunctureLabel {
    Origin,
    Root { j: usize, l: usize },
}

impl PunctureLabel {
    fn sort_key(&self) -> (usize, usize, usize) {
        match *self {
            PunctureLabel::Origin => (0, 0, 0),
            PunctureLabel::Root { j, l } => (1, l, j),
        }
    }
}

impl Ord for PunctureLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PunctureLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PunctureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PunctureLabel::Origin => write!(f, "origin"),
            PunctureLabel::Root { j, l } => write!(f, "T({j},{l})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Tag(String),
    Root { j: usize, l: usize },
}

impl Serialize for PunctureLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            PunctureLabel::Origin => LabelRepr::Tag("origin".into()).serialize(serializer),
            PunctureLabel::Root { j, l } => LabelRepr::Root { j, l }.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for PunctureLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match LabelRepr::deserialize(deserializer)? {
            LabelRepr::Tag(s) if s == "origin" => Ok(PunctureLabel::Origin),
            LabelRepr::Tag(s) => Err(serde::de::Error::custom(format!("unknown label '{s}'"))),
            LabelRepr::Root { j, l } => Ok(PunctureLabel::Root { j, l }),
        }
    }
}

/// `T_{j,ℓ}(t)` for roots, `0` for the origin.
pub fn puncture_position(params: &Params, label: PunctureLabel, t: Complex64) -> Complex64 {
    match label {
        PunctureLabel::Origin => Complex64::new(0.0, 0.0),
        PunctureLabel::Root { j, l } => {
            -params.omega_m(j as i64) * (1.0 + params.omega_n(l as i64) * t)
        }
    }
}

/// Velocity `dT/dt = −ω_m^j ω_n^ℓ` of a label (zero for the origin).
pub fn puncture_slope(params: &Params, label: PunctureLabel) -> Complex64 {
    match label {
        PunctureLabel::Origin => Complex64::new(0.0, 0.0),
        PunctureLabel::Root { j, l } => -params.omega_m(j as i64) * params.omega_n(l as i64),
    }
}

/// The set of punctures over one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fiber {
    pub t: Complex64,
    pub labels: Vec<PunctureLabel>,
    pub positions: Vec<Complex64>,
}

impl Fiber {
    pub fn position(&self, label: PunctureLabel) -> Option<Complex64> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.positions[i])
    }
}

pub fn fiber(params: &Params, t: Complex64) -> Fiber {
    let labels = params.labels();
    let positions = labels
        .iter()
        .map(|&l| puncture_position(params, l, t))
        .collect();
    Fiber {
        t,
        labels,
        positions,
    }
}

/// Minimum pairwise distance among the positions of a fiber.
pub fn min_gap(fiber: &Fiber) -> f64 {
    min_pairwise_distance(&fiber.positions)
}

pub(crate) fn min_pairwise_distance(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (a, &p) in points.iter().enumerate() {
        for &q in &points[a + 1..] {
            best = best.min((p - q).norm());
        }
    }
    best
}

/// A parameter value where punctures collide, with its confluence partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidencePoint {
    pub xi: Complex64,
    /// Groups of labels sharing a position at `xi`, each ordered
    /// counterclockwise about its centroid just below `xi`.
    pub blocks: Vec<Vec<PunctureLabel>>,
    /// Whether some block collides with the origin.
    pub includes_origin: bool,
}

/// Lexicographic `(Re, Im)` comparison with a tolerance on the real part.
pub(crate) fn cmp_complex(a: Complex64, b: Complex64, tol: f64) -> Ordering {
    if (a.re - b.re).abs() > tol {
        a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal)
    } else if (a.im - b.im).abs() > tol {
        a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)
    } else {
        Ordering::Equal
    }
}

/// Every parameter where two branches meet or a branch reaches the origin.
fn intersection_parameters(params: &Params) -> Vec<Complex64> {
    let labels: Vec<_> = params.labels().into_iter().skip(1).collect();
    let mut out = Vec::new();
    for (a, &la) in labels.iter().enumerate() {
        for &lb in &labels[a + 1..] {
            // T_a(t) = T_b(t)  ⇔  t·(s_a − s_b) = c_b − c_a
            let (ca, cb) = (
                puncture_position(params, la, Complex64::new(0.0, 0.0)),
                puncture_position(params, lb, Complex64::new(0.0, 0.0)),
            );
            let ds = puncture_slope(params, la) - puncture_slope(params, lb);
            if ds.norm() < 1e-12 {
                continue; // parallel branches never meet
            }
            out.push((cb - ca) / ds);
        }
    }
    // a root reaches the origin when 1 + ω_n^ℓ t = 0
    for l in 0..params.n as i64 {
        out.push(-params.omega_n(-l));
    }
    out
}

/// Groups labels whose positions at `xi` agree within `tol`.
fn blocks_at(params: &Params, xi: Complex64, tol: f64) -> (Vec<Vec<PunctureLabel>>, bool) {
    let roots: Vec<_> = params.labels().into_iter().skip(1).collect();
    let values: Vec<_> = roots
        .iter()
        .map(|&l| puncture_position(params, l, xi))
        .collect();
    // union-find over the "within tol" relation
    let mut parent: Vec<usize> = (0..roots.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for a in 0..roots.len() {
        for b in a + 1..roots.len() {
            if (values[a] - values[b]).norm() <= tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb] = ra;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; roots.len()];
    for i in 0..roots.len() {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    let includes_origin = values.iter().any(|v| v.norm() <= tol);

    // a generic parameter just below xi fixes the cyclic order inside a block
    let nearby = xi - Complex64::new(0.0, 1e-3);
    let mut blocks: Vec<(Complex64, Vec<PunctureLabel>)> = groups
        .into_iter()
        .filter(|g| g.len() >= 2)
        .map(|g| {
            let value = g.iter().map(|&i| values[i]).sum::<Complex64>() / g.len() as f64;
            let pts: Vec<_> = g
                .iter()
                .map(|&i| puncture_position(params, roots[i], nearby))
                .collect();
            let centroid = pts.iter().sum::<Complex64>() / pts.len() as f64;
            let mut order: Vec<usize> = (0..g.len()).collect();
            order.sort_by(|&a, &b| {
                (pts[a] - centroid)
                    .arg()
                    .partial_cmp(&(pts[b] - centroid).arg())
                    .unwrap_or(Ordering::Equal)
            });
            (value, order.into_iter().map(|k| roots[g[k]]).collect())
        })
        .collect();
    blocks.sort_by(|a, b| cmp_complex(a.0, b.0, 1e-9));
    (
        blocks.into_iter().map(|(_, b)| b).collect(),
        includes_origin,
    )
}

/// All coincidence points, sorted by `(Re, Im)`, each with its partition.
pub fn coincidence_locus(params: &Params) -> Vec<CoincidencePoint> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for t in intersection_parameters(params) {
        match clusters
            .iter_mut()
            .find(|(c, k)| (*c / *k as f64 - t).norm() <= CLUSTER_TOL)
        {
            Some((sum, k)) => {
                *sum += t;
                *k += 1;
            }
            None => clusters.push((t, 1)),
        }
    }
    let mut points: Vec<CoincidencePoint> = clusters
        .into_iter()
        .map(|(sum, k)| {
            let xi = clean(sum / k as f64);
            let (blocks, includes_origin) = blocks_at(params, xi, 1e-8);
            CoincidencePoint {
                xi,
                blocks,
                includes_origin,
            }
        })
        .collect();
    points.sort_by(|a, b| cmp_complex(a.xi, b.xi, CLUSTER_TOL));
    points
}

/// Flushes floating-point dust (|x| < 1e-14) to exact zero.
fn clean(z: Complex64) -> Complex64 {
    let f = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

/// The confluence partition at a coincidence point within `tol` of `xi`.
pub fn partition_at(params: &Params, xi: Complex64, tol: f64) -> Result<CoincidencePoint> {
    coincidence_locus(params)
        .into_iter()
        .filter(|p| (p.xi - xi).norm() <= tol)
        .min_by(|a, b| {
            (a.xi - xi)
                .norm()
                .partial_cmp(&(b.xi - xi).norm())
                .unwrap_or(Ordering::Equal)
        })
        .ok_or(Error::NotACoincidencePoint {
            re: xi.re,
            im: xi.im,
        })
}

/// Closed form of the locus for `n = 2`: `{±1} ∪ {i·tan(kπ/m) : k ≠ m/2}`.
pub fn closed_form_locus_n2(m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    for k in 0..m {
        if 2 * k != m {
            out.push(pk(m, k));
        }
    }
    out
}

/// `p_k = i·tan(kπ/m)` on the imaginary axis.
pub fn pk(m: usize, k: usize) -> Complex64 {
    Complex64::new(0.0, (k as f64 * PI / m as f64).tan())
}

/// Minimum distance between points of the coincidence locus.
pub fn locus_min_gap(params: &Params) -> f64 {
    let pts: Vec<_> = coincidence_locus(params).iter().map(|p| p.xi).collect();
    min_pairwise_distance(&pts)
}
