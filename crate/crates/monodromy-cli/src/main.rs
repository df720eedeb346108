//! `monodromy` — command-line front end.
//!
//! Every subcommand writes one artifact, either to stdout or (with `--out` or
//! `MONODROMY_OUT`) to a file in the output directory.  Exit codes: 0 on
//! success, 1 when a verification fails, 2 on usage errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monodromy::curve::{branch_consistency, nodality_check};
use monodromy::geometry::{coincidence_locus, e, CoincidencePoint};
use monodromy::paths::{default_eps, figure1_loop, theorem_sites};
use monodromy::rotation::{base_fiber, conjugated_generator};
use monodromy::tracking::{frame_braid, frame_projection, strand_labels};
use monodromy::van_kampen::{
    abelianization, build_presentation_from, export, ExportFormat, GeneratorSource,
};
use monodromy::{
    braids_equal, theorem_generator, track, verify_conjecture, BraidWord, Complex64, Error,
    LoopSite, Params, TPath, Trajectories,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "monodromy",
    version,
    about = "Braid monodromy of the (m, n) discriminantal arrangement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coincidence locus with its confluence partitions.
    Coincidence(Common),
    /// Braid of a user path given as a JSON list of `[re, im]` vertices.
    Track {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        path: PathBuf,
    },
    /// Compare tracked loop braids with the closed-form generators (n = 2).
    TheoremCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_site)]
        site: Option<LoopSite>,
    },
    /// Zariski–van Kampen presentation and its abelianization (n = 2).
    Presentation {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "closed-form", value_parser = parse_source)]
        source: GeneratorSource,
    },
    /// Local monodromy against full block rotations at every coincidence point.
    Conjecture(Common),
    /// Branch consistency and nodality of the discriminant curve.
    CurveCheck(Common),
    /// SVG figures: the parameter plane with its loops, a fiber, or a strand film.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "locus")]
        kind: PlotKind,
        #[arg(long, value_parser = parse_site)]
        site: Option<LoopSite>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(short, value_parser = clap::value_parser!(u64).range(2..))]
    m: u64,
    #[arg(short, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    /// Base point distance; defaults to a safe automatic value.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output directory; stdout when absent.
    #[arg(long, env = "MONODROMY_OUT")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
    GapStyle,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    Locus,
    Fiber,
    Strands,
}

fn parse_site(s: &str) -> Result<LoopSite, String> {
    s.parse::<LoopSite>().map_err(|e| e.to_string())
}

fn parse_source(s: &str) -> Result<GeneratorSource, String> {
    s.parse::<GeneratorSource>()
        .map_err(|_| format!("expected closed-form, conjugated or tracked, got '{s}'"))
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::BadEps { .. }
            | Error::BadSite(_)
            | Error::UnknownFormat(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

struct Artifact {
    stem: &'static str,
    ext: &'static str,
    body: String,
}

impl Common {
    fn params(&self) -> Result<Params, Failure> {
        Ok(Params::new(self.m as usize, self.n as usize)?)
    }

    fn eps(&self, params: &Params) -> f64 {
        self.eps.unwrap_or_else(|| default_eps(params))
    }

    fn format(&self, allowed: &[Format], default: Format) -> Result<Format, Failure> {
        match self.format {
            None => Ok(default),
            Some(f) if allowed.contains(&f) => Ok(f),
            Some(f) => Err(Failure::Usage(format!(
                "--format {} is not available for this subcommand",
                f.to_possible_value()
                    .map(|v| v.get_name().to_string())
                    .unwrap_or_default()
            ))),
        }
    }

    fn require_n2(&self) -> Result<(), Failure> {
        if self.n == 2 {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "-n {} is not supported here; use -n 2",
                self.n
            )))
        }
    }

    fn emit(&self, artifact: Artifact) -> Result<(), Failure> {
        match &self.out {
            None => {
                print!("{}", artifact.body);
                Ok(())
            }
            Some(dir) => {
                let file = dir.join(format!(
                    "{}-m{}-n{}.{}",
                    artifact.stem, self.m, self.n, artifact.ext
                ));
                write_file(dir, &file, &artifact.body)
                    .map_err(|e| Failure::Usage(format!("--out {}: {e}", dir.display())))?;
                println!("{}", file.display());
                Ok(())
            }
        }
    }
}

fn write_file(dir: &Path, file: &Path, body: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(file, body)
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn word_text(w: &BraidWord) -> String {
    if w.letters.is_empty() {
        return "1".into();
    }
    w.letters
        .iter()
        .map(|&g| {
            if g > 0 {
                format!("s{g}")
            } else {
                format!("s{}^-1", -g)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn tracked_braid(params: &Params, site: LoopSite, eps: f64) -> monodromy::Result<BraidWord> {
    frame_braid(&track(params, &figure1_loop(params, site, eps)?)?)
}

fn coincidence(c: &Common) -> Outcome {
    let params = c.params()?;
    let format = c.format(&[Format::Json, Format::Plain], Format::Json)?;
    let locus = coincidence_locus(&params);
    let body = match format {
        Format::Json => pretty(&json!({ "params": params, "points": locus })),
        _ => {
            let mut s = String::new();
            for p in &locus {
                let _ = writeln!(
                    s,
                    "t = {:.9}{}",
                    p.xi,
                    if p.includes_origin { "  (value 0)" } else { "" }
                );
                for b in &p.blocks {
                    let names: Vec<String> = b.iter().map(ToString::to_string).collect();
                    let _ = writeln!(s, "  {{{}}}", names.join(", "));
                }
            }
            s
        }
    };
    c.emit(Artifact {
        stem: "coincidence",
        ext: ext(format),
        body,
    })?;
    Ok(true)
}

fn track_cmd(c: &Common, path: &Path) -> Outcome {
    let params = c.params()?;
    let format = c.format(&[Format::Json, Format::Plain], Format::Json)?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("--path {}: {e}", path.display())))?;
    let vertices: Vec<Complex64> = serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!(
            "--path {}: expected a JSON list of [re, im] pairs: {e}",
            path.display()
        ))
    })?;
    let tpath = TPath::new(vertices)
        .map_err(|e| Failure::Usage(format!("--path {}: {e}", path.display())))?;
    let traj = track(&params, &tpath)?;
    let theta = frame_projection(&traj)?;
    let braid = frame_braid(&traj)?;
    let labels: Vec<String> = strand_labels(&traj)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let body = match format {
        Format::Json => pretty(&json!({
            "params": params,
            "theta": theta,
            "strands": labels,
            "braid": braid,
            "pure": braid.is_pure(),
        })),
        _ => format!(
            "theta = {theta:.12}\nstrands: {}\nbraid: {}\n",
            labels.join(" "),
            word_text(&braid)
        ),
    };
    c.emit(Artifact {
        stem: "track",
        ext: ext(format),
        body,
    })?;
    Ok(true)
}

fn theorem_check(c: &Common, only: Option<LoopSite>) -> Outcome {
    c.require_n2()?;
    let params = c.params()?;
    let format = c.format(&[Format::Json, Format::Plain], Format::Plain)?;
    let eps = c.eps(&params);
    let sites = match only {
        Some(s) => vec![s],
        None => theorem_sites(params.m),
    };
    let mut rows = Vec::new();
    let mut all = true;
    for site in sites {
        let tracked = tracked_braid(&params, site, eps)?;
        let closed = theorem_generator(&params, site, eps)?;
        let conjugated = conjugated_generator(&params, site, eps)?;
        let eq_closed = braids_equal(&tracked, &closed)?;
        let eq_conj = braids_equal(&tracked, &conjugated)?;
        all &= eq_closed;
        rows.push((site, tracked, closed, eq_closed, eq_conj));
    }
    let body = match format {
        Format::Json => pretty(&json!({
            "params": params,
            "eps": eps,
            "sites": rows.iter().map(|(site, t, cf, a, b)| json!({
                "site": site.to_string(),
                "tracked": t,
                "closed_form": cf,
                "pure": t.is_pure(),
                "tracked_equals_closed_form": a,
                "tracked_equals_conjugated": b,
            })).collect::<Vec<_>>(),
            "all_equal": all,
        })),
        _ => {
            let mut s = format!("theorem check m={} n=2 eps={eps}\n", params.m);
            for (site, t, _, a, b) in &rows {
                let _ = writeln!(
                    s,
                    "{:<8} closed form: {:<5} conjugated: {:<5} pure: {}",
                    site.to_string(),
                    if *a { "equal" } else { "DIFF" },
                    if *b { "equal" } else { "DIFF" },
                    t.is_pure()
                );
            }
            let equal = rows.iter().filter(|r| r.3).count();
            let _ = writeln!(s, "{} sites, {equal} equal to the closed form", rows.len());
            s
        }
    };
    c.emit(Artifact {
        stem: "theorem-check",
        ext: ext(format),
        body,
    })?;
    Ok(all)
}

fn presentation(c: &Common, source: GeneratorSource) -> Outcome {
    c.require_n2()?;
    let params = c.params()?;
    let format = c.format(
        &[Format::Json, Format::Plain, Format::GapStyle],
        Format::Plain,
    )?;
    let pres = build_presentation_from(&params, c.eps(&params), source)?;
    let ab = abelianization(&pres);
    let summary = if ab.torsion.is_empty() {
        format!("rank {}", ab.free_rank)
    } else {
        format!("rank {} torsion {:?}", ab.free_rank, ab.torsion)
    };
    let body = match format {
        Format::Json => pretty(&json!({
            "params": params,
            "presentation": pres,
            "abelianization": ab,
        })),
        Format::GapStyle => format!(
            "{}# abelianization: {summary}\n",
            export(&pres, ExportFormat::GapStyle)
        ),
        _ => format!(
            "{}abelianization: {summary}\n",
            export(&pres, ExportFormat::Plain)
        ),
    };
    let ext = if format == Format::GapStyle {
        "g"
    } else {
        ext(format)
    };
    c.emit(Artifact {
        stem: "presentation",
        ext,
        body,
    })?;
    Ok(true)
}

fn conjecture(c: &Common) -> Outcome {
    let params = c.params()?;
    let format = c.format(&[Format::Json, Format::Plain], Format::Plain)?;
    let points: Vec<CoincidencePoint> = coincidence_locus(&params);
    let mut reports = Vec::new();
    for xi in &points {
        reports.push(verify_conjecture(&params, xi, c.eps)?);
    }
    let body = match format {
        Format::Json => pretty(&json!({ "params": params, "points": reports })),
        _ => {
            let mut s = format!("conjecture check m={} n={}\n", params.m, params.n);
            for r in &reports {
                let sizes: Vec<String> = r
                    .blocks
                    .iter()
                    .map(|b| b.labels.len().to_string())
                    .collect();
                let _ = writeln!(
                    s,
                    "t = {:<28} blocks [{}]  {}",
                    format!("{:.9}", r.xi),
                    sizes.join(","),
                    if r.equal { "equal" } else { "unequal" }
                );
            }
            s
        }
    };
    c.emit(Artifact {
        stem: "conjecture",
        ext: ext(format),
        body,
    })?;
    Ok(true)
}

/// Deterministic sample parameters on a spiral, away from the pole.
fn curve_samples(params: &Params) -> Vec<Complex64> {
    let pole = -(params.n as f64) / params.m as f64;
    (1..=100)
        .map(|k| 0.05 * k as f64 * e(0.618_033_988_75 * k as f64))
        .filter(|s| (s - pole).norm() > 1e-3)
        .collect()
}

fn curve_check(c: &Common) -> Outcome {
    let params = c.params()?;
    let format = c.format(&[Format::Json, Format::Plain], Format::Plain)?;
    let samples = curve_samples(&params);
    let mut worst: f64 = 0.0;
    for &s in &samples {
        worst = worst.max(branch_consistency(&params, s)?);
    }
    let consistent = worst < c.tol;
    let nodality = nodality_check(&params, c.tol);
    let pass = consistent && nodality.pass;
    let body = match format {
        Format::Json => pretty(&json!({
            "params": params,
            "samples": samples.len(),
            "max_branch_residual": worst,
            "branches_consistent": consistent,
            "nodality": nodality,
            "pass": pass,
        })),
        _ => {
            let mut s = format!("curve check m={} n={} tol={}\n", params.m, params.n, c.tol);
            let _ = writeln!(
                s,
                "branch residual over {} samples: {worst:e}",
                samples.len()
            );
            for f in &nodality.families {
                let _ = writeln!(
                    s,
                    "l={}: {} roots, separation {:e}, cross separation {:e}",
                    f.l,
                    f.roots.len(),
                    f.min_separation,
                    f.min_cross_separation
                );
            }
            let _ = writeln!(s, "nodal: {}", nodality.pass);
            let _ = writeln!(s, "{}", if pass { "pass" } else { "FAIL" });
            s
        }
    };
    c.emit(Artifact {
        stem: "curve-check",
        ext: ext(format),
        body,
    })?;
    Ok(pass)
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Plain => "txt",
        Format::GapStyle => "g",
        Format::Svg => "svg",
    }
}

/// Maps a region of the plane onto an SVG canvas.
struct Canvas {
    lo: Complex64,
    scale: f64,
    size: f64,
    body: String,
}

impl Canvas {
    fn new(points: &[Complex64], size: f64) -> Self {
        let (mut lo, mut hi) = (
            Complex64::new(f64::MAX, f64::MAX),
            Complex64::new(f64::MIN, f64::MIN),
        );
        for z in points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-6) * 1.1;
        let mid = (lo + hi) / 2.0;
        Canvas {
            lo: mid - Complex64::new(span, span) / 2.0,
            scale: size / span,
            size,
            body: String::new(),
        }
    }

    fn xy(&self, z: Complex64) -> (f64, f64) {
        (
            (z.re - self.lo.re) * self.scale,
            self.size - (z.im - self.lo.im) * self.scale,
        )
    }

    fn polyline(&mut self, pts: &[Complex64], color: &str, width: f64) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&z| {
                let (x, y) = self.xy(z);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    fn dot(&mut self, z: Complex64, color: &str, label: &str) {
        let (x, y) = self.xy(z);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{color}"/>"#
        );
        if !label.is_empty() {
            let _ = writeln!(
                self.body,
                r#"<text x="{:.3}" y="{:.3}" font-size="11" font-family="sans-serif">{}</text>"#,
                x + 6.0,
                y - 6.0,
                xml_escape(label)
            );
        }
    }

    fn finish(self, title: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n<title>{}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            xml_escape(title),
            self.body,
            s = self.size
        )
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Stable color of strand `index` among `count`.
fn color(index: usize, count: usize) -> String {
    format!(
        "hsl({:.0},70%,42%)",
        360.0 * index as f64 / count.max(1) as f64
    )
}

fn plot(c: &Common, kind: PlotKind, site: Option<LoopSite>) -> Outcome {
    let params = c.params()?;
    c.format(&[Format::Svg], Format::Svg)?;
    let eps = c.eps(&params);
    let labels = params.labels();
    let label_color = |l| color(params.label_index(l), labels.len());
    let (stem, body) = match kind {
        PlotKind::Locus => {
            let locus = coincidence_locus(&params);
            let mut paths: Vec<(String, TPath)> = Vec::new();
            if params.n == 2 {
                for s in theorem_sites(params.m) {
                    paths.push((s.to_string(), figure1_loop(&params, s, eps)?));
                }
            }
            let mut extent: Vec<Complex64> = locus.iter().map(|p| p.xi).collect();
            extent.extend(paths.iter().flat_map(|(_, p)| p.vertices.iter().copied()));
            let mut canvas = Canvas::new(&extent, 600.0);
            for (k, (_, p)) in paths.iter().enumerate() {
                canvas.polyline(&p.vertices, &color(k, paths.len()), 1.2);
            }
            for p in &locus {
                canvas.dot(p.xi, "black", &format!("{:.3}", p.xi));
            }
            ("plot-locus", canvas.finish("coincidence locus and loops"))
        }
        PlotKind::Fiber => {
            let f = base_fiber(&params, eps);
            let mut canvas = Canvas::new(&f.positions, 600.0);
            for (&l, &z) in f.labels.iter().zip(&f.positions) {
                canvas.dot(z, &label_color(l), &l.to_string());
            }
            (
                "plot-fiber",
                canvas.finish(&format!("fiber at t = -{eps}i")),
            )
        }
        PlotKind::Strands => {
            c.require_n2()?;
            let site = site.unwrap_or(LoopSite::Origin);
            let traj: Trajectories = track(&params, &figure1_loop(&params, site, eps)?)?;
            let theta = frame_projection(&traj)?;
            let rot = Complex64::from_polar(1.0, -theta);
            // film: time to the right, projected coordinate upwards
            let steps = traj.frames.len().max(2) - 1;
            let width = traj
                .frames
                .iter()
                .flatten()
                .map(|z| (z * rot).re.abs())
                .fold(1e-6, f64::max);
            let films: Vec<Vec<Complex64>> = (0..traj.strand_count())
                .map(|s| {
                    traj.frames
                        .iter()
                        .enumerate()
                        .map(|(k, f)| {
                            Complex64::new(
                                2.0 * width * k as f64 / steps as f64 - width,
                                (f[s] * rot).re,
                            )
                        })
                        .collect()
                })
                .collect();
            let extent: Vec<Complex64> = films.iter().flatten().copied().collect();
            let mut canvas = Canvas::new(&extent, 600.0);
            for (s, film) in films.iter().enumerate() {
                let l = traj.labels[s];
                canvas.polyline(film, &label_color(l), 1.5);
                canvas.dot(film[0], &label_color(l), &l.to_string());
            }
            (
                "plot-strands",
                canvas.finish(&format!("strands along the loop around {site}")),
            )
        }
    };
    c.emit(Artifact {
        stem,
        ext: "svg",
        body,
    })?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Coincidence(c) => coincidence(c),
        Command::Track { common, path } => track_cmd(common, path),
        Command::TheoremCheck { common, site } => theorem_check(common, *site),
        Command::Presentation { common, source } => presentation(common, *source),
        Command::Conjecture(c) => conjecture(c),
        Command::CurveCheck(c) => curve_check(c),
        Command::Plot { common, kind, site } => plot(common, *kind, *site),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
