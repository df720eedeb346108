//! Zariski–van Kampen presentations and the local-monodromy experiment.
//!
//! Over the base point `−εi` the fiber `ℂ ∖ {mn + 1 punctures}` has a free
//! fundamental group on generators `x_1 … x_N`, one per strand in projection
//! order.  Each loop around a coincidence point contributes the relations
//! `x = β(x)` for its monodromy braid `β`.  The line `t = 0` of the
//! arrangement is a whole fiber: its loop survives as an extra generator `γ`
//! acting by conjugation, `γ⁻¹ x γ = β_0(x)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braid::{automorphism_of, braids_equal, BraidWord, FreeWord};
use crate::error::{Error, Result};
use crate::geometry::{
    coincidence_locus, fiber, puncture_position, CoincidencePoint, Params, PunctureLabel,
};
use crate::paths::{circle_loop, figure1_loop, LoopSite, VERTICES_PER_TURN};
use crate::rotation::{
    base_fiber, conjugated_generator, theorem_generator, word_braid, RotationSpec,
};
use crate::tracking::{frame_braid, strand_labels, track, Trajectories};

/// Where the monodromy braids of a presentation come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorSource {
    /// Closed-form rotation words of each site.
    ClosedForm,
    /// Rotation words with every conjugation kept.
    Conjugated,
    /// Braids tracked along the base-point loops.
    Tracked,
}

impl std::str::FromStr for GeneratorSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(Self::ClosedForm),
            "conjugated" => Ok(Self::Conjugated),
            "tracked" => Ok(Self::Tracked),
            _ => Err(Error::UnknownFormat(s.into())),
        }
    }
}

/// A finite group presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Presentation {
    #[serde(rename = "generators")]
    pub generator_names: Vec<String>,
    pub relators: Vec<FreeWord>,
    /// Generator name → what it goes around.
    pub label_map: BTreeMap<String, String>,
}

/// Generator name of a strand label.
pub fn generator_name(label: PunctureLabel) -> String {
    match label {
        PunctureLabel::Origin => "tau0".into(),
        PunctureLabel::Root { j, l } => format!("tau{j}_{l}"),
    }
}

/// Name of the generator looping around the fiber `t = 0`.
pub const VERTICAL_GENERATOR: &str = "gamma0";

/// The generator site of an `n = 2` coincidence point.
pub fn site_of_point(params: &Params, xi: Complex64) -> LoopSite {
    if xi.norm() < 1e-9 {
        LoopSite::Origin
    } else if (xi - 1.0).norm() < 1e-9 {
        LoopSite::Eta(1)
    } else if (xi + 1.0).norm() < 1e-9 {
        LoopSite::Eta(-1)
    } else {
        let m = params.m as i64;
        let k = (xi.im.atan() * m as f64 / PI).round() as i64;
        LoopSite::Pk(k.rem_euclid(m) as usize)
    }
}

/// Sites of the presentation, read off the coincidence locus, in canonical
/// order (origin, η = +1, η = −1, then `p_k` by `k`).
pub fn presentation_sites(params: &Params) -> Vec<LoopSite> {
    let mut sites: Vec<LoopSite> = coincidence_locus(params)
        .iter()
        .map(|p| site_of_point(params, p.xi))
        .collect();
    let rank = |s: &LoopSite| match *s {
        LoopSite::Origin => (0, 0),
        LoopSite::Eta(1) => (1, 0),
        LoopSite::Eta(_) => (2, 0),
        LoopSite::Pk(k) => (3, k),
        LoopSite::BigCircle(_) => (4, 0),
    };
    sites.sort_by_key(rank);
    sites
}

/// Monodromy braid of `site` from the chosen source.
pub fn site_braid(
    params: &Params,
    site: LoopSite,
    eps: f64,
    source: GeneratorSource,
) -> Result<BraidWord> {
    match source {
        GeneratorSource::ClosedForm => theorem_generator(params, site, eps),
        GeneratorSource::Conjugated => conjugated_generator(params, site, eps),
        GeneratorSource::Tracked => frame_braid(&track(params, &figure1_loop(params, site, eps)?)?),
    }
}

/// The presentation built from the closed-form generators.
pub fn build_presentation(params: &Params, eps: f64) -> Result<Presentation> {
    build_presentation_from(params, eps, GeneratorSource::ClosedForm)
}

/// The presentation built from the braids of `source`.
pub fn build_presentation_from(
    params: &Params,
    eps: f64,
    source: GeneratorSource,
) -> Result<Presentation> {
    if params.n != 2 {
        return Err(Error::InvalidParams(
            "presentations are built for n = 2".into(),
        ));
    }
    let strands = strand_labels(&Trajectories::stationary(&base_fiber(params, eps)))?;
    let n = strands.len();
    let gamma = n as i32 + 1;
    let mut generator_names: Vec<String> = strands.iter().map(|&l| generator_name(l)).collect();
    generator_names.push(VERTICAL_GENERATOR.into());
    let mut label_map: BTreeMap<String, String> = strands
        .iter()
        .map(|&l| (generator_name(l), l.to_string()))
        .collect();
    label_map.insert(VERTICAL_GENERATOR.into(), "line t = 0".into());

    let mut relators = Vec::new();
    for site in presentation_sites(params) {
        let phi = automorphism_of(&site_braid(params, site, eps, source)?)?;
        for g in 1..=n as i32 {
            let x = FreeWord::generator(g);
            let image = &phi.images[g as usize - 1];
            let r = if site == LoopSite::Origin {
                // γ⁻¹ x γ β(x)⁻¹
                FreeWord::new(vec![-gamma, g, gamma]).mul(&image.inverse())
            } else {
                x.inverse().mul(image)
            };
            if !r.is_identity() {
                relators.push(r);
            }
        }
    }
    Ok(Presentation {
        generator_names,
        relators,
        label_map,
    })
}

/// Invariant factors of an abelian group `ℤ^free_rank ⊕ ⊕ ℤ/d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    pub free_rank: usize,
    /// Torsion coefficients `d_1 | d_2 | …`, all greater than one.
    pub torsion: Vec<i64>,
}

/// Exponent-sum matrix of the relators (rows) over the generators (columns).
pub fn relation_matrix(pres: &Presentation) -> Vec<Vec<i64>> {
    let cols = pres.generator_names.len();
    pres.relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; cols];
            for &g in &r.letters {
                row[g.unsigned_abs() as usize - 1] += g.signum() as i64;
            }
            row
        })
        .collect()
}

/// Diagonal of the Smith normal form (nonzero entries, each dividing the next).
#[allow(clippy::needless_range_loop)] // index arithmetic on a dense matrix
pub fn smith_diagonal(matrix: &[Vec<i64>]) -> Vec<i64> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        a[i][j] -= q * a[i][t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // the pivot must also divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let (bi, bj) = (t..rows)
                .map(|i| (i, t))
                .chain((t..cols).map(|j| (t, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
                .expect("pivot is nonzero");
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].abs() as i64);
        t += 1;
    }
    diag
}

/// Abelianization of a presentation via the Smith normal form.
pub fn abelianization(pres: &Presentation) -> Abelianization {
    let diag = smith_diagonal(&relation_matrix(pres));
    Abelianization {
        free_rank: pres.generator_names.len() - diag.len(),
        torsion: diag.into_iter().filter(|&d| d > 1).collect(),
    }
}

/// Cyclically reduces relators, drops trivial ones and duplicates.
pub fn simplify(pres: &Presentation) -> Presentation {
    let mut seen = std::collections::BTreeSet::new();
    let relators = pres
        .relators
        .iter()
        .map(FreeWord::cyclically_reduced)
        .filter(|r| !r.is_identity() && seen.insert(r.clone()))
        .collect();
    Presentation {
        generator_names: pres.generator_names.clone(),
        relators,
        label_map: pres.label_map.clone(),
    }
}

/// Output formats of [`export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Plain,
    Json,
    GapStyle,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Self::Plain),
            "json" => Ok(Self::Json),
            "gap-style" | "gap" => Ok(Self::GapStyle),
            _ => Err(Error::UnknownFormat(s.into())),
        }
    }
}

fn word_text(w: &FreeWord, name: impl Fn(usize) -> String, sep: &str) -> String {
    w.letters
        .iter()
        .map(|&g| {
            let base = name(g.unsigned_abs() as usize);
            if g > 0 {
                base
            } else {
                format!("{base}^-1")
            }
        })
        .collect::<Vec<_>>()
        .join(sep)
}

/// Deterministic text rendering of a presentation.
pub fn export(pres: &Presentation, format: ExportFormat) -> String {
    match format {
        ExportFormat::Plain => {
            let rels: Vec<String> = pres
                .relators
                .iter()
                .map(|r| word_text(r, |g| pres.generator_names[g - 1].clone(), " "))
                .collect();
            format!(
                "⟨ {} | {} ⟩\n",
                pres.generator_names.join(", "),
                rels.join(", ")
            )
        }
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(pres).expect("presentations serialize");
            s.push('\n');
            s
        }
        ExportFormat::GapStyle => {
            let mut s = String::new();
            for (i, name) in pres.generator_names.iter().enumerate() {
                let what = pres.label_map.get(name).map_or("", String::as_str);
                let _ = writeln!(s, "# F.{} = {} ({})", i + 1, name, what);
            }
            let names: Vec<String> = pres
                .generator_names
                .iter()
                .map(|n| format!("\"{n}\""))
                .collect();
            let _ = writeln!(s, "F := FreeGroup({});;", names.join(", "));
            let rels: Vec<String> = pres
                .relators
                .iter()
                .map(|r| word_text(r, |g| format!("F.{g}"), "*"))
                .collect();
            let _ = writeln!(s, "G := F / [ {} ];;", rels.join(",\n  "));
            s
        }
    }
}

/// Predicted exponent of one confluence block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPrediction {
    pub labels: Vec<PunctureLabel>,
    pub exponent: i64,
}

/// Result of comparing the tracked local monodromy with the product of full
/// block rotations at one coincidence point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub xi: Complex64,
    pub base: Complex64,
    pub radius: f64,
    pub blocks: Vec<BlockPrediction>,
    pub tracked: BraidWord,
    pub predicted: BraidWord,
    pub equal: bool,
}

/// Loop radius used around `xi`: small against the other coincidence points
/// and against the spread of distinct confluent values at `xi`.
fn local_radius(params: &Params, xi: &CoincidencePoint) -> f64 {
    let others = coincidence_locus(params)
        .iter()
        .map(|p| (p.xi - xi.xi).norm())
        .filter(|&d| d > 1e-9)
        .fold(f64::INFINITY, f64::min);
    let values: Vec<Complex64> = params
        .labels()
        .iter()
        .map(|&l| puncture_position(params, l, xi.xi))
        .collect();
    let spread = values
        .iter()
        .enumerate()
        .flat_map(|(a, &p)| values[a + 1..].iter().map(move |&q| (p - q).norm()))
        .filter(|&d| d > 1e-8)
        .fold(f64::INFINITY, f64::min);
    0.1f64.min(others / 4.0).min(spread / 8.0)
}

/// Compares the braid of a small loop around `xi` with the product over its
/// blocks of full rotations `(R_{Λ_μ})^{|Λ_μ|}`.
pub fn verify_conjecture(
    params: &Params,
    xi: &CoincidencePoint,
    eps: Option<f64>,
) -> Result<ConjectureReport> {
    let limit = local_radius(params, xi);
    let radius = eps.unwrap_or(limit);
    if !(radius > 0.0 && radius <= limit) {
        return Err(Error::LoopConstructionFailed(format!(
            "radius {radius} must lie in (0, {limit}]"
        )));
    }
    let path = circle_loop(xi.xi, radius, VERTICES_PER_TURN);
    let base = path.basepoint();
    let tracked = frame_braid(&track(params, &path)?)?;
    let blocks: Vec<BlockPrediction> = xi
        .blocks
        .iter()
        .map(|b| BlockPrediction {
            labels: b.clone(),
            exponent: b.len() as i64,
        })
        .collect();
    let word: Vec<RotationSpec> = blocks
        .iter()
        .map(|b| RotationSpec::integer(vec![b.labels.clone()], b.exponent))
        .collect();
    let predicted = word_braid(&fiber(params, base), &word)?;
    let equal = braids_equal(&tracked, &predicted)?;
    Ok(ConjectureReport {
        xi: xi.xi,
        base,
        radius,
        blocks,
        tracked,
        predicted,
        equal,
    })
}
