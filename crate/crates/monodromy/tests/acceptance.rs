//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.  Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use monodromy::geometry::{coincidence_locus, e, puncture_position};
use monodromy::paths::{
    default_eps, figure1_loop_with, theorem_sites, upper_count, VERTICES_PER_TURN,
};
use monodromy::rotation::{base_fiber, conjugated_generator, realize_word, theorem_word};
use monodromy::tracking::{extract_braid, frame_braid, frame_candidates};
use monodromy::van_kampen::{abelianization, build_presentation};
use monodromy::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one criterion: pass flag and a short account of what was seen.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(checked: usize, failures: Vec<String>) -> Self {
        let pass = failures.is_empty();
        let detail = if pass {
            format!("{checked} checks")
        } else {
            format!(
                "{}/{checked} failed: {}",
                failures.len(),
                failures.join("; ")
            )
        };
        Outcome { pass, detail }
    }
}

fn params(m: usize, n: usize) -> Params {
    Params::new(m, n).expect("valid parameters")
}

fn tracked(p: &Params, site: LoopSite, eps: f64, per_turn: usize) -> Result<BraidWord> {
    frame_braid(&track(p, &figure1_loop_with(p, site, eps, per_turn)?)?)
}

fn equal(a: &Result<BraidWord>, b: &Result<BraidWord>) -> std::result::Result<bool, String> {
    match (a, b) {
        (Ok(a), Ok(b)) => braids_equal(a, b).map_err(|e| e.to_string()),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    }
}

fn ac1_tracked_matches_closed_form() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=5 {
        let p = params(m, 2);
        let eps = default_eps(&p);
        for site in theorem_sites(m) {
            checked += 1;
            let t = tracked(&p, site, eps, VERTICES_PER_TURN);
            let c = theorem_generator(&p, site, eps);
            match equal(&t, &c) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("m={m} {site} unequal")),
                Err(e) => failures.push(format!("m={m} {site} error {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}"));
    }
    Outcome::from_failures(checked, failures)
}

fn ac2_conjugation_reductions() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=6 {
        let p = params(m, 2);
        let eps = default_eps(&p);
        for site in theorem_sites(m)
            .into_iter()
            .filter(|s| *s != LoopSite::Origin)
        {
            checked += 1;
            let a = conjugated_generator(&p, site, eps);
            let b = theorem_generator(&p, site, eps);
            match equal(&a, &b) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("m={m} {site} unequal")),
                Err(e) => failures.push(format!("m={m} {site} error {e}")),
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac3_purity() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=5 {
        let p = params(m, 2);
        let eps = default_eps(&p);
        let base = base_fiber(&p, eps);
        for site in theorem_sites(m) {
            checked += 1;
            let traj = track(
                &p,
                &figure1_loop_with(&p, site, eps, VERTICES_PER_TURN).unwrap(),
            )
            .unwrap();
            let closed =
                realize_word(&base, &theorem_word(&p, site).unwrap(), VERTICES_PER_TURN).unwrap();
            for (what, t) in [("tracked", &traj), ("closed form", &closed)] {
                let identity: Vec<usize> = (0..t.strand_count()).collect();
                if t.label_permutation(1e-9) != Some(identity) {
                    failures.push(format!("m={m} {site} {what}: endpoints permuted"));
                }
                match frame_braid(t) {
                    Ok(w) if w.is_pure() => {}
                    Ok(_) => failures.push(format!("m={m} {site} {what}: braid not pure")),
                    Err(e) => failures.push(format!("m={m} {site} {what}: {e}")),
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac4_monodromy_at_infinity() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=3 {
        let p = params(m, 2);
        let eps = default_eps(&p);
        // the big circle winds counterclockwise from −εi: first the sites
        // below the real axis (innermost last), then η = +1, the sites above
        // from the outermost in, the origin and finally η = −1
        let r = upper_count(m);
        let mut order: Vec<LoopSite> = (r + 1..m)
            .filter(|&k| 2 * k != m)
            .map(LoopSite::Pk)
            .collect();
        order.push(LoopSite::Eta(1));
        order.extend((1..=r).rev().map(LoopSite::Pk));
        order.push(LoopSite::Origin);
        order.push(LoopSite::Eta(-1));
        checked += 1;
        let big = tracked(&p, LoopSite::BigCircle(10.0), eps, VERTICES_PER_TURN);
        let product = order
            .iter()
            .try_fold(BraidWord::identity(p.strand_count()), |acc, &s| {
                acc.compose(&tracked(&p, s, eps, VERTICES_PER_TURN)?)
            });
        match equal(&big, &product) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("m={m} unequal")),
            Err(e) => failures.push(format!("m={m} error {e}")),
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac5_coincidence_closed_forms() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=8 {
        let p = params(m, 2);
        // {±1} ∪ {i tan(kπ/m) : k ≠ m/2}, the k = 0 term being the origin
        let mut expected: Vec<Complex64> =
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        expected.extend(
            (0..m)
                .filter(|&k| 2 * k != m)
                .map(|k| Complex64::new(0.0, (k as f64 * PI / m as f64).tan())),
        );
        let locus = coincidence_locus(&p);
        checked += 1;
        let covered = expected
            .iter()
            .all(|z| locus.iter().any(|q| (q.xi - z).norm() < 1e-12))
            && locus
                .iter()
                .all(|q| expected.iter().any(|z| (q.xi - z).norm() < 1e-12));
        if !covered || locus.len() != expected.len() {
            failures.push(format!("m={m}: locus differs ({} points)", locus.len()));
        }
        // confluent values −e((j1+j2)/2m) / cos((j2−j1)π/m) at t = i tan((j2−j1)π/m)
        for k in (1..m).filter(|&k| 2 * k != m) {
            let t = Complex64::new(0.0, (k as f64 * PI / m as f64).tan());
            for j1 in 0..m as i64 {
                let j2 = j1 + k as i64;
                checked += 1;
                let want = -e((j1 + j2) as f64 / (2 * m) as f64) / (k as f64 * PI / m as f64).cos();
                let a = puncture_position(&p, p.root(j1, 0), t);
                let b = puncture_position(&p, p.root(j2, 1), t);
                if (a - want).norm() > 1e-9 || (b - want).norm() > 1e-9 {
                    failures.push(format!("m={m} k={k} j1={j1}: {a} / {b} vs {want}"));
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac6_abelianization() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=5 {
        let p = params(m, 2);
        checked += 1;
        match build_presentation(&p, default_eps(&p)) {
            Ok(pres) => {
                let ab = abelianization(&pres);
                if ab.free_rank != 2 * m + 2 || !ab.torsion.is_empty() {
                    failures.push(format!(
                        "m={m}: rank {} torsion {:?}",
                        ab.free_rank, ab.torsion
                    ));
                }
            }
            Err(e) => failures.push(format!("m={m}: {e}")),
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac7_braid_laws() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let w = |n: usize, l: &[i32]| BraidWord::new(n, l.to_vec()).unwrap();
    for n in 2..=11 {
        for i in 1..n as i32 {
            if i + 1 < n as i32 {
                checked += 1;
                if !braids_equal(&w(n, &[i, i + 1, i]), &w(n, &[i + 1, i, i + 1])).unwrap() {
                    failures.push(format!("N={n} braid relation at {i}"));
                }
            }
            for j in (1..n as i32).filter(|j| (i - j).abs() >= 2) {
                checked += 2;
                if !braids_equal(&w(n, &[i, j]), &w(n, &[j, i])).unwrap() {
                    failures.push(format!("N={n} far commutation {i},{j}"));
                }
                if !braids_equal(&w(n, &[i, j, j, -i]), &w(n, &[j, j])).unwrap() {
                    failures.push(format!("N={n} conjugated square {i},{j}"));
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac8_discriminant_curve() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (m, n) in [(2, 2), (3, 2), (4, 3)] {
        let p = params(m, n);
        let mut worst: f64 = 0.0;
        let mut count = 0;
        while count < 100 {
            let s = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            // stay clear of the pole s = −n/m
            if (m as f64 * s + n as f64).norm() < 1e-3 {
                continue;
            }
            count += 1;
            worst = worst.max(curve::branch_consistency(&p, s).unwrap());
        }
        checked += 100;
        if worst.is_nan() || worst >= 1e-9 {
            failures.push(format!("({m},{n}) residual {worst:e}"));
        }
    }
    for m in 2..=6 {
        for n in 2..=3 {
            checked += 1;
            if !curve::nodality_check(&params(m, n), 1e-9).pass {
                failures.push(format!("nodality ({m},{n})"));
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn ac9_conjecture_harness() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut verdicts = Vec::new();
    for (m, n) in [(2, 3), (3, 3), (2, 4)] {
        let p = params(m, n);
        let (mut eq, mut ne) = (0, 0);
        for xi in coincidence_locus(&p) {
            checked += 1;
            match verify_conjecture(&p, &xi, None) {
                Ok(r) if r.equal => eq += 1,
                Ok(_) => ne += 1,
                Err(e) => failures.push(format!("({m},{n}) at {:.4}: {e}", xi.xi)),
            }
        }
        verdicts.push(format!("({m},{n}) equal {eq} unequal {ne}"));
    }
    let mut out = Outcome::from_failures(checked, failures);
    out.detail = format!("{} [{}]", out.detail, verdicts.join(", "));
    out
}

fn ac10_robustness() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 2..=5 {
        let p = params(m, 2);
        let eps = default_eps(&p);
        let base = base_fiber(&p, eps);
        for site in theorem_sites(m) {
            let loop_at = |k: usize| {
                track(
                    &p,
                    &figure1_loop_with(&p, site, eps, k * VERTICES_PER_TURN).unwrap(),
                )
                .unwrap()
            };
            let word = theorem_word(&p, site).unwrap();
            let closed_at = |k: usize| realize_word(&base, &word, k * VERTICES_PER_TURN).unwrap();
            let (traj, closed) = (loop_at(1), closed_at(1));
            for (what, coarse, finer) in [
                ("tracked", &traj, [loop_at(2), loop_at(4)]),
                ("closed form", &closed, [closed_at(2), closed_at(4)]),
            ] {
                let reference = frame_braid(coarse);
                checked += 1;
                if reference != frame_braid(coarse) {
                    failures.push(format!("m={m} {site} {what}: not deterministic"));
                }
                for fine in &finer {
                    checked += 1;
                    if equal(&reference, &frame_braid(fine)) != Ok(true) {
                        failures.push(format!("m={m} {site} {what}: discretization changes braid"));
                    }
                }
                // every generic angle of the frame chamber gives the same braid
                for theta in frame_candidates(coarse).unwrap().into_iter().take(8) {
                    if let Ok(other) = extract_braid(coarse, theta) {
                        checked += 1;
                        if equal(&reference, &Ok(other)) != Ok(true) {
                            failures.push(format!(
                                "m={m} {site} {what}: angle {theta:.4} changes braid"
                            ));
                        }
                    }
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "AC1",
            "tracked loop braids equal the closed-form generators",
            ac1_tracked_matches_closed_form,
        ),
        (
            "AC2",
            "conjugated words equal the closed-form generators",
            ac2_conjugation_reductions,
        ),
        ("AC3", "site braids are pure", ac3_purity),
        (
            "AC4",
            "big circle equals the ordered product of site loops",
            ac4_monodromy_at_infinity,
        ),
        (
            "AC5",
            "coincidence locus and confluent values",
            ac5_coincidence_closed_forms,
        ),
        (
            "AC6",
            "presentation abelianizes to rank 2m+2",
            ac6_abelianization,
        ),
        (
            "AC7",
            "braid relations under the Artin action",
            ac7_braid_laws,
        ),
        (
            "AC8",
            "discriminant curve branches and nodality",
            ac8_discriminant_curve,
        ),
        (
            "AC9",
            "conjecture harness reaches a verdict everywhere",
            ac9_conjecture_harness,
        ),
        (
            "AC10",
            "braids are robust to discretization and angle",
            ac10_robustness,
        ),
    ];
    let mut failed = Vec::new();
    for (id, what, run) in criteria {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "{id} {status} {what} ({:.1?}): {}",
            start.elapsed(),
            out.detail
        );
        if !out.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing {}", failed.join(", "));
        std::process::exit(1);
    }
}
