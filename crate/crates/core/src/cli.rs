//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::json;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gasket::{Cell, PointAddress};
use crate::inequality::{self, CellUnion};
use crate::interpolation::{build_common_path, interpolate_points, Target};
use crate::measures::{self, PushforwardSpec, QuadWeights, SelfSimilarMeasure1D};
use crate::metric;
use crate::oracle;
use crate::rational::parse_rational;
use crate::sampling;

#[derive(Parser, Debug)]
#[command(name = "sgasket", version, about = "Geodesics, interpolants and measures on Sierpinski gaskets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact distance and number of geodesics between two vertices.
    Distance(PairArgs),
    /// List every geodesic between two vertices.
    Geodesics(PairArgs),
    /// Interpolate between points, between cells, or from a cell to a point.
    Interpolate(InterpolateArgs),
    /// Histograms of ν_n, ν̃_n^t, η_t, and the Φ_n bound on the CDF of ν_n.
    Density(DensityArgs),
    /// Run the inequality checks.
    Inequality(InequalityArgs),
    /// Compare closed-form distances and counts with the level-m graph.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Gasket dimension.
    #[arg(short = 'n', default_value_t = 2)]
    pub n: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[command(flatten)]
    pub common: Common,
    /// First vertex, e.g. "[2 0 2 | 1]".
    pub x: String,
    /// Second vertex.
    pub y: String,
}

#[derive(Args, Debug)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Source: a vertex "[w | t]" or a cell "[w]".
    pub from: String,
    /// Target: a vertex or a cell.
    pub to: String,
    /// Interpolation time as "p/q".
    #[arg(short = 't')]
    pub t: String,
    /// Shrink the source (or target) cell until t is inside the regular window.
    #[arg(long)]
    pub subcell: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    Nu,
    TildeNu,
    Eta,
    Cuml,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Grid,
    Ifs,
    Both,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub measure: MeasureKind,
    /// Histogram depth: 2^M bins.
    #[arg(short = 'M', default_value_t = 10)]
    pub depth: u32,
    /// Interpolation time as "p/q" (or a decimal, read exactly).
    #[arg(short = 't')]
    pub t: Option<String>,
    /// Read t as a double; the output is labelled approximate.
    #[arg(long)]
    pub approx: bool,
    /// Level of the source cell.
    #[arg(short = 'k', default_value_t = 0)]
    pub k: usize,
    /// Level of the target cell.
    #[arg(short = 'm', default_value_t = 0)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Method::Grid)]
    pub method: Method,
    /// Cell weights μ^0,...,μ^n, comma separated.
    #[arg(long)]
    pub weights: Option<String>,
    /// Entry corner index for --weights.
    #[arg(long, default_value_t = 0)]
    pub entry: usize,
    /// Exit corner index for --weights.
    #[arg(long, default_value_t = 0)]
    pub exit: usize,
    /// Source cell for --measure eta.
    #[arg(long)]
    pub from: Option<String>,
    /// Target cell or vertex for --measure eta.
    #[arg(long)]
    pub to: Option<String>,
    /// Maximum transfer-operator iterations.
    #[arg(long, default_value_t = 2000)]
    pub iterations: usize,
    /// L1 threshold for --method both.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    PhiLemma,
    Gineq,
    Cell,
    Main,
    All,
}

#[derive(Args, Debug)]
pub struct InequalityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Check::All)]
    pub check: Check,
    /// Grid size for the Φ lemma.
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    /// Dyadic depth for the CDF bound.
    #[arg(short = 'M', default_value_t = 12)]
    pub depth: u32,
    /// Source cells (repeat for a union).
    #[arg(short = 'a', long = "a")]
    pub a: Vec<String>,
    /// Target cells (repeat for a union).
    #[arg(short = 'b', long = "b")]
    pub b: Vec<String>,
    /// Interpolation time as "p/q".
    #[arg(short = 't')]
    pub t: Option<String>,
    /// Number of random configurations when no cells are given.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Graph level.
    #[arg(short = 'm', default_value_t = 3)]
    pub m: usize,
}

/// Outcome of a command: text to emit and whether every check passed.
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, ok: true }
    }
}

fn point(n: usize, s: &str) -> Result<PointAddress> {
    PointAddress::parse(n, s)
}

fn is_address(s: &str) -> bool {
    s.contains('|')
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn emit(common: &Common, outcome: &Outcome) -> Result<()> {
    match &common.out {
        Some(path) => write_file(path, &outcome.output),
        None => {
            print!("{}", outcome.output);
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli) -> Result<bool> {
    let (common, outcome) = match &cli.command {
        Command::Distance(a) => (&a.common, cmd_distance(a)?),
        Command::Geodesics(a) => (&a.common, cmd_geodesics(a)?),
        Command::Interpolate(a) => (&a.common, cmd_interpolate(a)?),
        Command::Density(a) => (&a.common, cmd_density(a)?),
        Command::Inequality(a) => (&a.common, cmd_inequality(a)?),
        Command::Verify(a) => (&a.common, cmd_verify(a)?),
    };
    emit(common, &outcome)?;
    Ok(outcome.ok)
}

pub fn cmd_distance(a: &PairArgs) -> Result<Outcome> {
    let n = a.common.n;
    let (x, y) = (point(n, &a.x)?, point(n, &a.y)?);
    let d = metric::distance(&x, &y)?;
    let count = metric::count_geodesics(&x, &y)?;
    Ok(Outcome::ok(match a.common.format {
        Format::Json => pretty(&json!({ "distance": d, "geodesics": count })),
        _ => format!("{d} (geodesics: {count})\n"),
    }))
}

pub fn cmd_geodesics(a: &PairArgs) -> Result<Outcome> {
    let n = a.common.n;
    let (x, y) = (point(n, &a.x)?, point(n, &a.y)?);
    let gs = metric::enumerate_geodesics(&x, &y)?;
    Ok(Outcome::ok(match a.common.format {
        Format::Json => pretty(&serde_json::to_value(&gs).expect("geodesics serialize")),
        _ => {
            let mut s = format!("distance {} ({} geodesics)\n", gs[0].length(), gs.len());
            for (i, g) in gs.iter().enumerate() {
                let path: Vec<String> = g.waypoints().iter().map(|p| p.to_string()).collect();
                s += &format!("{:>2} {:<11} {}\n", i + 1, g.kind().to_string(), path.join(" -> "));
            }
            s
        }
    }))
}

pub fn cmd_interpolate(a: &InterpolateArgs) -> Result<Outcome> {
    let n = a.common.n;
    let t = parse_rational(&a.t)?;
    if is_address(&a.from) {
        let (x, y) = (point(n, &a.from)?, point(n, &a.to)?);
        let td = Dyadic::from_rational(&t)
            .ok_or_else(|| Error::DomainError("point interpolation needs a dyadic t".into()))?;
        let pts = interpolate_points(&x, &y, &td)?;
        return Ok(Outcome::ok(match a.common.format {
            Format::Json => pretty(&json!({ "t": td, "points": pts })),
            _ => pts.iter().map(|p| format!("{p}\n")).collect(),
        }));
    }
    let from = Cell::parse(n, &a.from)?;
    let to = if is_address(&a.to) {
        Target::Point(point(n, &a.to)?)
    } else {
        Target::Cell(Cell::parse(n, &a.to)?)
    };
    let cp = if a.subcell {
        crate::interpolation::largest_admissible_subcell(&from, &to, &t)?
    } else {
        build_common_path(&from, &to)?
    };
    let interval = cp.interpolant_interval(&t)?;
    let v = json!({ "common_path": cp, "interval": interval });
    Ok(Outcome::ok(match a.common.format {
        Format::Json => pretty(&v),
        _ => {
            let addr = |p: &Option<PointAddress>| p.as_ref().map_or("-".to_string(), |p| p.to_string());
            format!(
                "common path {} -> {} (D = {}, window [{}, {}])\nZ_t from arclength {} to {} (length {}), endpoints {} {}\n",
                cp.entry(),
                cp.exit(),
                cp.length(),
                cp.t1f(),
                cp.t2i(),
                interval.x1.arclength,
                interval.x2.arclength,
                interval.length,
                addr(&interval.x1.address),
                addr(&interval.x2.address),
            )
        }
    }))
}

fn parse_t(s: &Option<String>, approx: bool) -> Result<BigRational> {
    let s = s.as_deref().ok_or_else(|| Error::InvalidInput("-t is required".into()))?;
    if approx {
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
        BigRational::from_float(v).ok_or_else(|| Error::DomainError("t is not finite".into()))
    } else {
        parse_rational(s)
    }
}

fn histogram_output(h: &measures::Histogram, format: Format) -> String {
    match format {
        Format::Json => pretty(&h.to_json()),
        _ => h.to_csv(),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}-{suffix}{ext}"))
}

pub fn cmd_density(a: &DensityArgs) -> Result<Outcome> {
    let n = a.common.n;
    let format = a.common.format;
    match a.measure {
        MeasureKind::Nu => {
            let mut h = SelfSimilarMeasure1D::standard(n).histogram(a.depth)?;
            let mut meta = h.meta().clone();
            meta.n = Some(n);
            h = h.with_meta(meta);
            Ok(Outcome::ok(histogram_output(&h, format)))
        }
        MeasureKind::Cuml => Ok(Outcome::ok(inequality::gineq_csv(n, a.depth)?)),
        MeasureKind::TildeNu => {
            let t = parse_t(&a.t, a.approx)?;
            let weights = match &a.weights {
                Some(w) => {
                    let mu = w
                        .split(',')
                        .map(parse_rational)
                        .collect::<Result<Vec<_>>>()?;
                    if mu.len() != n + 1 {
                        return Err(Error::InvalidWeights(format!("expected {} weights", n + 1)));
                    }
                    measures::weighted_variants(&mu, a.entry, a.exit)?
                }
                None => QuadWeights::standard(n),
            };
            let mut spec = PushforwardSpec::with_weights(t, a.k, a.m, weights)?;
            spec.approximate = a.approx;
            let tag = |mut h: measures::Histogram| {
                let mut meta = h.meta().clone();
                meta.n = Some(n);
                h = h.with_meta(meta);
                h
            };
            match a.method {
                Method::Grid => {
                    let h = tag(measures::tilde_nu_histogram_grid(&spec, a.depth)?);
                    Ok(Outcome::ok(histogram_output(&h, format)))
                }
                Method::Ifs => {
                    let (h, _) = measures::tilde_nu_histogram_ifs(&spec, a.depth, a.iterations, 1e-14)?;
                    Ok(Outcome::ok(histogram_output(&tag(h), format)))
                }
                Method::Both => {
                    let out = a.common.out.as_ref().ok_or_else(|| {
                        Error::InvalidInput("--method both writes two files; give --out".into())
                    })?;
                    let grid = tag(measures::tilde_nu_histogram_grid(&spec, a.depth)?);
                    let (ifs, run) = measures::tilde_nu_histogram_ifs(&spec, a.depth, a.iterations, 1e-14)?;
                    let ifs = tag(ifs);
                    write_file(&with_suffix(out, "grid"), &histogram_output(&grid, format))?;
                    write_file(&with_suffix(out, "ifs"), &histogram_output(&ifs, format))?;
                    let l1 = grid.l1_distance(&ifs)?;
                    let ok = l1 <= a.tolerance;
                    let line = format!(
                        "L1(grid, ifs) = {l1:.6} ({} iterations) {}\n",
                        run.iterations,
                        if ok { "OK" } else { "FAIL" }
                    );
                    print!("{line}");
                    Ok(Outcome { output: line, ok })
                }
            }
        }
        MeasureKind::Eta => {
            let t = parse_t(&a.t, a.approx)?;
            let from = a
                .from
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("--from is required".into()))?;
            let to = a
                .to
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("--to is required".into()))?;
            let from = Cell::parse(n, from)?;
            let h = if is_address(to) {
                measures::eta_cell_to_point(&from, &point(n, to)?, &t, a.depth)?
            } else {
                measures::eta_cell_to_cell(&from, &Cell::parse(n, to)?, &t, a.depth)?
            };
            Ok(Outcome::ok(histogram_output(&h, format)))
        }
    }
}

fn union(n: usize, cells: &[String]) -> Result<CellUnion> {
    CellUnion::new(cells.iter().map(|c| Cell::parse(n, c)).collect::<Result<Vec<_>>>()?)
}

pub fn cmd_inequality(a: &InequalityArgs) -> Result<Outcome> {
    let n = a.common.n;
    let mut ok = true;
    let mut reports = serde_json::Map::new();
    let mut text = String::new();
    let want = |c: Check| a.check == c || a.check == Check::All;

    if want(Check::PhiLemma) {
        let r = inequality::check_phi_lemma(n, a.grid)?;
        ok &= r.passed;
        text += &format!(
            "phi-lemma n={n}: max violation {:.3e} / {:.3e} {}\n",
            r.max_violation_lower,
            r.max_violation_upper,
            verdict(r.passed)
        );
        reports.insert("phi_lemma".into(), serde_json::to_value(r).unwrap());
    }
    if want(Check::Gineq) {
        let r = inequality::check_gineq(n, a.depth)?;
        ok &= r.passed;
        text += &format!(
            "gineq n={n} depth={}: min slack {:.3e} at {}, {} violations {}\n",
            r.depth,
            r.min_slack,
            r.argmin,
            r.violations,
            verdict(r.passed)
        );
        reports.insert("gineq".into(), serde_json::to_value(r).unwrap());
    }
    if want(Check::Cell) {
        let rs = if !a.a.is_empty() && !a.b.is_empty() {
            let t = parse_t(&a.t, false)?;
            vec![inequality::check_cell_inequality(
                &Cell::parse(n, &a.a[0])?,
                &Cell::parse(n, &a.b[0])?,
                &t,
            )?]
        } else {
            sampled_cell_checks(n, a.samples, a.seed)?
        };
        let passed = rs.iter().all(|r| r.passed);
        let sharp = rs.iter().filter(|r| r.sharp).count();
        ok &= passed;
        text += &format!(
            "cell inequality: {} configurations, {} sharp {}\n",
            rs.len(),
            sharp,
            verdict(passed)
        );
        reports.insert("cell".into(), serde_json::to_value(rs).unwrap());
    }
    if want(Check::Main) {
        let rs = if !a.a.is_empty() && !a.b.is_empty() {
            let t = parse_t(&a.t, false)?;
            vec![inequality::check_main_inequality(&union(n, &a.a)?, &union(n, &a.b)?, &t)?]
        } else {
            sampled_main_checks(n, a.samples, a.seed)?
        };
        let passed = rs.iter().all(|r| r.passed);
        let min = rs.iter().map(|r| r.min_slack()).fold(f64::INFINITY, f64::min);
        ok &= passed;
        text += &format!(
            "main inequality: {} configurations, min slack {:.3e} {}\n",
            rs.len(),
            min,
            verdict(passed)
        );
        reports.insert("main".into(), serde_json::to_value(rs).unwrap());
    }
    let output = match a.common.format {
        Format::Json => pretty(&serde_json::Value::Object(reports)),
        _ => text,
    };
    Ok(Outcome { output, ok })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "FAIL"
    }
}

/// Cell-cell inequality checks on `count` seeded configurations with `t` in the
/// regular window.
pub fn sampled_cell_checks(n: usize, count: usize, seed: u64) -> Result<Vec<inequality::CellInequalityReport>> {
    let mut rng = sampling::rng(seed);
    let configs: Vec<_> = (0..count)
        .map(|_| {
            let cp = sampling::random_regular_cells(&mut rng, n, 3);
            let mut t = sampling::random_t_in_window(&mut rng, &cp, 8);
            let (zero, one) = (BigRational::from_integer(0.into()), BigRational::from_integer(1.into()));
            if t == zero || t == one {
                t = (cp.t1f() + cp.t2i()) / BigRational::from_integer(2.into());
            }
            (cp, t)
        })
        .collect();
    configs
        .par_iter()
        .map(|(cp, t)| inequality::check_cell_inequality_on(cp, t))
        .collect()
}

/// Main-inequality checks on `count` seeded connected unions.
pub fn sampled_main_checks(n: usize, count: usize, seed: u64) -> Result<Vec<inequality::MainInequalityReport>> {
    let mut rng = sampling::rng(seed);
    let configs: Vec<_> = (0..count).map(|_| sampling::random_union_config(&mut rng, n)).collect();
    configs
        .par_iter()
        .map(|(a, b, t)| inequality::check_main_inequality(a, b, t))
        .collect()
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let r = oracle::verify_metric(a.common.n, a.m)?;
    let ok = r.passed();
    let output = match a.common.format {
        Format::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        _ => {
            let pair = r
                .max_pair
                .as_ref()
                .map(|(x, y)| format!(" (e.g. {x} to {y})"))
                .unwrap_or_default();
            if ok {
                format!(
                    "n={} m={}: {} vertices, {} pairs\nall pairs OK; max geodesics {}{pair}\n",
                    r.n, r.m, r.vertices, r.pairs, r.max_count
                )
            } else {
                let mut s = format!(
                    "n={} m={}: {} mismatches out of {} pairs\n",
                    r.n,
                    r.m,
                    r.mismatches.len(),
                    r.pairs
                );
                for mm in r.mismatches.iter().take(20) {
                    s += &format!(
                        "  {} {}: graph {} ({} paths), closed form {:?} ({:?})\n",
                        mm.x, mm.y, mm.bfs_distance, mm.bfs_count, mm.distance, mm.count
                    );
                }
                s
            }
        }
    };
    Ok(Outcome { output, ok })
}
