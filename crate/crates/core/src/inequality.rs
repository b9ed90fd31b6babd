//! Checks of the Brunn-Minkowski type inequality for interpolant sets.
//!
//! `Φ_n(x) = (1 - (1 - x)^{d_n})^{1/d_n}` with `d_n = ln 2 / ln((n+1)/n)` bounds the
//! distribution function of `ν_n`, and yields
//! `1 - (1 - H¹(Z_t(A,B)))^{d_n} ≥ (1-t) μ(A)^{ln 2/ln(n+1)} + t μ(B)^{ln 2/ln(n+1)}`
//! for connected `A`, `B`. Φ is evaluated in double precision, and comparisons
//! allow a guard band of [`GUARD`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gasket::{check_dimension, phi_projection, Cell};
use crate::interpolation::{build_common_path, common_paths_between, CommonPath, Target};
use crate::measures::SelfSimilarMeasure1D;
use crate::rational::{self, in_unit_interval};

pub const GUARD: f64 = 1e-12;

/// `d_n = ln 2 / ln((n+1)/n)`.
pub fn d_n(n: usize) -> f64 {
    let n = n as f64;
    2f64.ln() / ((n + 1.0) / n).ln()
}

/// `ln 2 / ln(n+1)`, the exponent turning `μ` of a cell into its side length.
pub fn cell_exponent(n: usize) -> f64 {
    2f64.ln() / ((n + 1) as f64).ln()
}

pub fn phi(n: usize, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("x = {x} not in [0, 1]")));
    }
    let d = d_n(n);
    Ok((1.0 - (1.0 - x).powf(d)).powf(1.0 / d))
}

fn phi_unchecked(n: usize, x: f64) -> f64 {
    let d = d_n(n);
    (1.0 - (1.0 - x).powf(d)).powf(1.0 / d)
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiLemmaReport {
    pub n: usize,
    pub grid_size: usize,
    /// `max (nΦ(2x) - (n+1)Φ(x))` over grid points of `[0, 1/2]`.
    pub max_violation_lower: f64,
    /// `max (Φ(2x-1) - (n+1)Φ(x) + n)` over grid points of `[1/2, 1]`.
    pub max_violation_upper: f64,
    pub passed: bool,
}

/// Evaluate both halves of the functional inequality for `Φ_n` on `grid_size + 1`
/// equally spaced points of each half interval.
pub fn check_phi_lemma(n: usize, grid_size: usize) -> Result<PhiLemmaReport> {
    check_dimension(n)?;
    if grid_size < 2 {
        return Err(Error::InvalidInput("grid_size must be >= 2".into()));
    }
    let nf = n as f64;
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for k in 0..=grid_size {
        let x = 0.5 * k as f64 / grid_size as f64;
        lower = lower.max(nf * phi_unchecked(n, 2.0 * x) - (nf + 1.0) * phi_unchecked(n, x));
        let y = 0.5 + x;
        upper = upper.max(phi_unchecked(n, 2.0 * y - 1.0) - (nf + 1.0) * phi_unchecked(n, y) + nf);
    }
    Ok(PhiLemmaReport {
        n,
        grid_size,
        max_violation_lower: lower,
        max_violation_upper: upper,
        passed: lower <= GUARD && upper <= GUARD,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GineqReport {
    pub n: usize,
    pub depth: u32,
    pub points: usize,
    /// `min (Φ_n(x) - ν_n([0, x]))`.
    pub min_slack: f64,
    pub argmin: String,
    pub violations: usize,
    pub passed: bool,
}

fn gineq_rows(n: usize, depth: u32) -> Result<Vec<(Dyadic, f64, f64)>> {
    check_dimension(n)?;
    if depth > 20 {
        return Err(Error::BudgetExceeded(format!("depth {depth} > 20")));
    }
    let nu = SelfSimilarMeasure1D::standard(n);
    (0..=(1u64 << depth))
        .into_par_iter()
        .map(|k| {
            let x = Dyadic::new(k, depth);
            let cdf = rational::to_f64(&nu.cdf(&x)?);
            Ok((x.clone(), cdf, phi_unchecked(n, x.to_f64())))
        })
        .collect()
}

/// Compare the exact `ν_n([0, x])` with `Φ_n(x)` at every `x = k 2^-depth`.
pub fn check_gineq(n: usize, depth: u32) -> Result<GineqReport> {
    let rows = gineq_rows(n, depth)?;
    let mut min_slack = f64::INFINITY;
    let mut argmin = Dyadic::zero();
    let mut violations = 0;
    for (x, cdf, phi) in &rows {
        let slack = phi - cdf;
        if slack < -GUARD {
            violations += 1;
        }
        if slack < min_slack {
            min_slack = slack;
            argmin = x.clone();
        }
    }
    Ok(GineqReport {
        n,
        depth,
        points: rows.len(),
        min_slack,
        argmin: argmin.to_string(),
        violations,
        passed: violations == 0,
    })
}

/// `x,cdf,phi` rows: the distribution function of `ν_n` against its bound.
pub fn gineq_csv(n: usize, depth: u32) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# {{\"n\":{n},\"M\":{depth},\"columns\":\"nu cdf vs Phi\"}}").unwrap();
    writeln!(out, "x,cdf,phi").unwrap();
    for (x, cdf, phi) in gineq_rows(n, depth)? {
        writeln!(out, "{},{cdf:e},{phi:e}", x.to_f64()).unwrap();
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CellInequalityReport {
    pub n: usize,
    pub a: String,
    pub b: String,
    pub t: String,
    /// `H¹(Z_t(A, B))` when `t` is in the window, otherwise the lower bound
    /// `(1-t)2^-k + t 2^-m` from the longest geodesic.
    pub h1: String,
    pub h1_exact: bool,
    pub rhs: f64,
    pub slack: f64,
    /// `t` lies in `[t1f, t2i]`, where the bound is attained.
    pub in_window: bool,
    pub sharp: bool,
    pub passed: bool,
}

fn mu_cell_power(n: usize, level: usize) -> f64 {
    // μ(cell)^{ln2/ln(n+1)} with μ = (n+1)^-level, computed through logs
    ((n + 1) as f64).powf(-(level as f64)).powf(cell_exponent(n))
}

pub fn check_cell_inequality(a: &Cell, b: &Cell, t: &BigRational) -> Result<CellInequalityReport> {
    let cp = build_common_path(a, &Target::Cell(b.clone()))?;
    check_cell_inequality_on(&cp, t)
}

pub fn check_cell_inequality_on(cp: &CommonPath, t: &BigRational) -> Result<CellInequalityReport> {
    let a = cp.a();
    let Target::Cell(b) = cp.b() else {
        return Err(Error::InvalidInput("target is a point".into()));
    };
    let n = a.n();
    let zero = BigRational::zero();
    let one = BigRational::one();
    if *t <= zero || *t >= one {
        return Err(Error::DomainError(format!("t = {t} not in (0, 1)")));
    }
    let in_window = cp.in_window(t);
    let h1 = if in_window {
        cp.interpolant_interval(t)?.length
    } else {
        (&one - t) * a.side().to_rational() + t * b.side().to_rational()
    };
    let tf = rational::to_f64(t);
    let rhs = (1.0 - tf) * mu_cell_power(n, a.level()) + tf * mu_cell_power(n, b.level());
    let slack = rational::to_f64(&h1) - rhs;
    Ok(CellInequalityReport {
        n,
        a: a.to_string(),
        b: b.to_string(),
        t: t.to_string(),
        h1: h1.to_string(),
        h1_exact: in_window,
        rhs,
        slack,
        in_window,
        sharp: in_window && slack.abs() <= GUARD,
        passed: slack >= -GUARD,
    })
}

/// A union of cells of one level, connected through shared vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellUnion {
    cells: Vec<Cell>,
}

impl CellUnion {
    pub fn new(mut cells: Vec<Cell>) -> Result<Self> {
        let first = cells
            .first()
            .ok_or_else(|| Error::InvalidInput("empty cell union".into()))?;
        let (n, level) = (first.n(), first.level());
        for c in &cells {
            if c.n() != n {
                return Err(Error::DimensionMismatch(n, c.n()));
            }
            if c.level() != level {
                return Err(Error::InvalidInput("cells of a union must share a level".into()));
            }
        }
        cells.sort();
        cells.dedup();
        let u = CellUnion { cells };
        if !u.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(u)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn n(&self) -> usize {
        self.cells[0].n()
    }

    pub fn level(&self) -> usize {
        self.cells[0].level()
    }

    fn is_connected(&self) -> bool {
        let k = self.cells.len();
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for (j, c) in self.cells.iter().enumerate() {
                if !seen[j] && self.cells[i].intersects(c) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Smallest cell containing every member.
    pub fn minimal_cell(&self) -> Cell {
        let first = self.cells[0].word().letters();
        let mut len = first.len();
        for c in &self.cells[1..] {
            let w = c.word().letters();
            len = len.min(first.iter().zip(w).take_while(|(x, y)| x == y).count());
        }
        Cell::from_letters(self.n(), first[..len].to_vec()).expect("prefix of a valid word")
    }

    /// `μ_n` of the union, `#cells (n+1)^-level`.
    pub fn measure(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.cells.len()),
            BigInt::from(self.n() + 1).pow(self.level() as u32),
        )
    }

    /// Length of the interval `φ(A)` for the projection toward corner `i` of `cell`.
    pub fn projection_length(&self, cell: &Cell, i: u8) -> Result<Dyadic> {
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for c in &self.cells {
            // φ is affine on each cell, so its range is spanned by the corners
            for p in c.corners() {
                let v = phi_projection(cell, i, &p)?;
                if lo.as_ref().is_none_or(|l| v < *l) {
                    lo = Some(v.clone());
                }
                if hi.as_ref().is_none_or(|h| v > *h) {
                    hi = Some(v);
                }
            }
        }
        Ok(hi.expect("nonempty") - lo.expect("nonempty"))
    }
}

/// One common path between the minimal cells and the resulting bound.
#[derive(Clone, Debug, Serialize)]
pub struct PathCheck {
    pub entry: String,
    pub exit: String,
    /// `(1-t) 2^-|v| H¹(φ(A)) + t 2^-|w| H¹(φ(B))`, exact.
    pub h1: String,
    pub lhs: f64,
    pub slack: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainInequalityReport {
    pub n: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub v: String,
    pub w: String,
    pub t: String,
    pub mu_a: String,
    pub mu_b: String,
    pub rhs: f64,
    pub paths: Vec<PathCheck>,
    pub passed: bool,
}

impl MainInequalityReport {
    pub fn min_slack(&self) -> f64 {
        self.paths.iter().map(|p| p.slack).fold(f64::INFINITY, f64::min)
    }
}

/// Check the inequality for connected unions `A ⊂ ⟨v⟩`, `B ⊂ ⟨w⟩` on every common
/// path from `A` to `B` between corners of the minimal cells `⟨v⟩`, `⟨w⟩`.
pub fn check_main_inequality(a: &CellUnion, b: &CellUnion, t: &BigRational) -> Result<MainInequalityReport> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    if !in_unit_interval(t) || t.is_zero() || *t == BigRational::one() {
        return Err(Error::DomainError(format!("t = {t} not in (0, 1)")));
    }
    let n = a.n();
    let (v, w) = (a.minimal_cell(), b.minimal_cell());
    let cps = common_paths_between(&v, &a.cells, &Target::Cell(w.clone()), &b.cells)?;
    let e = cell_exponent(n);
    let tf = rational::to_f64(t);
    let (mu_a, mu_b) = (a.measure(), b.measure());
    let rhs = (1.0 - tf) * rational::to_f64(&mu_a).powf(e) + tf * rational::to_f64(&mu_b).powf(e);
    let one = BigRational::one();
    let mut paths = Vec::new();
    for cp in &cps {
        let j = cp.exit_corner().expect("cell target has an exit corner");
        let pa = a.projection_length(&v, cp.entry_corner())?;
        let pb = b.projection_length(&w, j)?;
        let h1 = (&one - t) * (pa * v.side()).to_rational() + t * (pb * w.side()).to_rational();
        let lhs = 1.0 - (1.0 - rational::to_f64(&h1)).powf(d_n(n));
        let slack = lhs - rhs;
        paths.push(PathCheck {
            entry: cp.entry().to_string(),
            exit: cp.exit().to_string(),
            h1: h1.to_string(),
            lhs,
            slack,
            passed: slack >= -GUARD,
        });
    }
    Ok(MainInequalityReport {
        n,
        a: a.cells.iter().map(|c| c.to_string()).collect(),
        b: b.cells.iter().map(|c| c.to_string()).collect(),
        v: v.to_string(),
        w: w.to_string(),
        t: t.to_string(),
        mu_a: mu_a.to_string(),
        mu_b: mu_b.to_string(),
        rhs,
        passed: paths.iter().all(|p| p.passed),
        paths,
    })
}
