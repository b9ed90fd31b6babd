//! Self-similar measures on `[0, 1]` and their pushforwards along common paths.
//!
//! `ν_n` is the image of the standard measure `μ_n` under a barycentric
//! coordinate: the lower half of `[0, 1]` carries `n/(n+1)`, the upper half
//! `1/(n+1)`. The generalized convolution `ν̃_n^t = (ν_n × ν_n) ∘ ψ_t^{-1}` is
//! computed two ways: by pushing forward a grid of squares, and by iterating the
//! transfer operator of its overlapping IFS.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gasket::{Cell, PointAddress};
use crate::interpolation::{build_common_path, CommonPath, Target};
use crate::rational::{self, in_unit_interval};

/// Deepest histogram kept as exact rationals.
pub const EXACT_MAX_DEPTH: u32 = 12;
/// Deepest histogram built at all.
pub const MAX_DEPTH: u32 = 24;
/// Deepest grid for the square-subdivision method (`4^M` squares).
pub const GRID_MAX_DEPTH: u32 = 12;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn f(x: &BigRational) -> f64 {
    rational::to_f64(x)
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
struct Acc {
    sum: f64,
    c: f64,
}

impl Acc {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }

    fn merge(&mut self, o: &Acc) {
        self.add(o.sum);
        self.add(o.c);
    }
}

fn compensated_sum(xs: &[f64]) -> f64 {
    let mut a = Acc::default();
    xs.iter().for_each(|&x| a.add(x));
    a.value()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimilarMeasure1D {
    w0: BigRational,
    w1: BigRational,
}

impl SelfSimilarMeasure1D {
    /// `w0` is the mass of `[0, 1/2]`, `w1` that of `[1/2, 1]`.
    pub fn new(w0: BigRational, w1: BigRational) -> Result<Self> {
        if w0.is_negative() || w1.is_negative() || &w0 + &w1 != BigRational::one() {
            return Err(Error::InvalidWeights(format!("({w0}, {w1}) must be >= 0 and sum to 1")));
        }
        Ok(SelfSimilarMeasure1D { w0, w1 })
    }

    /// `ν_n`.
    pub fn standard(n: usize) -> Self {
        let n = n as i64;
        SelfSimilarMeasure1D {
            w0: r(n, n + 1),
            w1: r(1, n + 1),
        }
    }

    pub fn uniform() -> Self {
        SelfSimilarMeasure1D {
            w0: r(1, 2),
            w1: r(1, 2),
        }
    }

    pub fn w0(&self) -> &BigRational {
        &self.w0
    }

    pub fn w1(&self) -> &BigRational {
        &self.w1
    }

    /// `ν([0, x])`, read off the binary digits of `x`.
    pub fn cdf(&self, x: &Dyadic) -> Result<BigRational> {
        if x.is_negative() || *x > Dyadic::one() {
            return Err(Error::DomainError(format!("x = {x} not in [0, 1]")));
        }
        if *x == Dyadic::one() {
            return Ok(BigRational::one());
        }
        let mut acc = BigRational::zero();
        let mut prefix = BigRational::one();
        for j in 1..=x.exponent() {
            if x.digit(j) {
                acc += &prefix * &self.w0;
                prefix *= &self.w1;
            } else {
                prefix *= &self.w0;
            }
        }
        Ok(acc)
    }

    /// `ν([a, b])`; the measure has no atoms so endpoints do not matter.
    pub fn interval_mass(&self, a: &Dyadic, b: &Dyadic) -> Result<BigRational> {
        Ok(self.cdf(b)? - self.cdf(a)?)
    }

    /// Bin masses at depth `m`: exact up to [`EXACT_MAX_DEPTH`], doubles beyond.
    pub fn histogram(&self, m: u32) -> Result<Histogram> {
        if m <= EXACT_MAX_DEPTH {
            self.histogram_exact(m)
        } else {
            self.histogram_f64(m)
        }
    }

    pub fn histogram_exact(&self, m: u32) -> Result<Histogram> {
        if m > EXACT_MAX_DEPTH {
            return Err(Error::BudgetExceeded(format!(
                "exact histogram depth {m} > {EXACT_MAX_DEPTH}"
            )));
        }
        let mut masses = vec![BigRational::one()];
        for _ in 0..m {
            masses = masses
                .iter()
                .flat_map(|x| [x * &self.w0, x * &self.w1])
                .collect();
        }
        Ok(Histogram::unit(m, Masses::Exact(masses)))
    }

    pub fn histogram_f64(&self, m: u32) -> Result<Histogram> {
        if m > MAX_DEPTH {
            return Err(Error::BudgetExceeded(format!("histogram depth {m} > {MAX_DEPTH}")));
        }
        let (w0, w1) = (f(&self.w0), f(&self.w1));
        let mut masses = vec![1.0];
        for _ in 0..m {
            masses = masses.iter().flat_map(|x| [x * w0, x * w1]).collect();
        }
        Ok(Histogram::unit(m, Masses::Approx(masses)))
    }
}

/// Bin masses, exact or double precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Masses {
    Exact(Vec<BigRational>),
    Approx(Vec<f64>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HistogramMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "M")]
    pub depth: u32,
    pub normalization: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

/// `2^depth` equal bins over `[left, right]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    depth: u32,
    left: BigRational,
    right: BigRational,
    masses: Masses,
    meta: HistogramMeta,
}

impl Histogram {
    fn unit(depth: u32, masses: Masses) -> Self {
        let normalization = match &masses {
            Masses::Exact(v) => v.iter().sum::<BigRational>().to_string(),
            Masses::Approx(v) => compensated_sum(v).to_string(),
        };
        Histogram {
            depth,
            left: BigRational::zero(),
            right: BigRational::one(),
            masses,
            meta: HistogramMeta {
                depth,
                normalization,
                method: "self-similar".into(),
                ..Default::default()
            },
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn bins(&self) -> usize {
        1 << self.depth
    }

    pub fn left(&self) -> &BigRational {
        &self.left
    }

    pub fn right(&self) -> &BigRational {
        &self.right
    }

    pub fn masses(&self) -> &Masses {
        &self.masses
    }

    pub fn meta(&self) -> &HistogramMeta {
        &self.meta
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.masses, Masses::Exact(_))
    }

    pub fn exact_masses(&self) -> Option<&[BigRational]> {
        match &self.masses {
            Masses::Exact(v) => Some(v),
            Masses::Approx(_) => None,
        }
    }

    pub fn masses_f64(&self) -> Vec<f64> {
        match &self.masses {
            Masses::Exact(v) => v.iter().map(f).collect(),
            Masses::Approx(v) => v.clone(),
        }
    }

    pub fn total_exact(&self) -> Option<BigRational> {
        self.exact_masses().map(|v| v.iter().sum())
    }

    pub fn total(&self) -> f64 {
        match &self.masses {
            Masses::Exact(v) => f(&v.iter().sum()),
            Masses::Approx(v) => compensated_sum(v),
        }
    }

    /// `Σ |p_k - q_k|` over bins of two histograms of equal depth.
    pub fn l1_distance(&self, other: &Histogram) -> Result<f64> {
        if self.depth != other.depth {
            return Err(Error::InvalidInput(format!(
                "histogram depths differ: {} vs {}",
                self.depth, other.depth
            )));
        }
        let (a, b) = (self.masses_f64(), other.masses_f64());
        Ok(compensated_sum(
            &a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>(),
        ))
    }

    /// Bins in reverse order, i.e. the image under `x ↦ 1 - x` of the unit range.
    pub fn reversed(&self) -> Histogram {
        let masses = match &self.masses {
            Masses::Exact(v) => Masses::Exact(v.iter().rev().cloned().collect()),
            Masses::Approx(v) => Masses::Approx(v.iter().rev().copied().collect()),
        };
        Histogram {
            masses,
            ..self.clone()
        }
    }

    /// Sum groups of `2^levels` adjacent bins.
    pub fn coarsen(&self, levels: u32) -> Histogram {
        let g = 1usize << levels.min(self.depth);
        let depth = self.depth - levels.min(self.depth);
        let masses = match &self.masses {
            Masses::Exact(v) => Masses::Exact(v.chunks(g).map(|c| c.iter().sum()).collect()),
            Masses::Approx(v) => Masses::Approx(v.chunks(g).map(compensated_sum).collect()),
        };
        let mut meta = self.meta.clone();
        meta.depth = depth;
        Histogram {
            depth,
            masses,
            meta,
            ..self.clone()
        }
    }

    fn scaled(mut self, factor: &BigRational) -> Histogram {
        self.masses = match self.masses {
            Masses::Exact(v) => Masses::Exact(v.into_iter().map(|x| x * factor).collect()),
            Masses::Approx(v) => {
                let c = f(factor);
                Masses::Approx(v.into_iter().map(|x| x * c).collect())
            }
        };
        self.meta.normalization = factor.to_string();
        self
    }

    fn on_range(mut self, left: BigRational, right: BigRational) -> Histogram {
        self.left = left;
        self.right = right;
        self
    }

    pub fn with_meta(mut self, meta: HistogramMeta) -> Histogram {
        self.meta = meta;
        self
    }

    /// Bin edges as doubles.
    pub fn edges(&self) -> Vec<(f64, f64)> {
        let (l, w) = (f(&self.left), f(&(&self.right - &self.left)));
        let nb = self.bins() as f64;
        (0..self.bins())
            .map(|k| (l + w * k as f64 / nb, l + w * (k + 1) as f64 / nb))
            .collect()
    }

    /// `# {json metadata}` line, header, then `bin_left,bin_right,mass` rows.
    /// Exact masses are written as fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.meta).expect("metadata serializes");
        writeln!(out, "# {meta}").unwrap();
        writeln!(out, "bin_left,bin_right,mass").unwrap();
        let edges = self.edges();
        for (k, (lo, hi)) in edges.iter().enumerate() {
            match &self.masses {
                Masses::Exact(v) => writeln!(out, "{lo},{hi},{}", v[k]).unwrap(),
                Masses::Approx(v) => writeln!(out, "{lo},{hi},{:e}", v[k]).unwrap(),
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let masses: Vec<serde_json::Value> = match &self.masses {
            Masses::Exact(v) => v.iter().map(|x| x.to_string().into()).collect(),
            Masses::Approx(v) => v.iter().map(|&x| x.into()).collect(),
        };
        serde_json::json!({
            "meta": self.meta,
            "left": self.left.to_string(),
            "right": self.right.to_string(),
            "masses": masses,
        })
    }
}

pub fn nu_cdf(measure: &SelfSimilarMeasure1D, x: &Dyadic) -> Result<BigRational> {
    measure.cdf(x)
}

pub fn nu_histogram(measure: &SelfSimilarMeasure1D, depth: u32) -> Result<Histogram> {
    measure.histogram(depth)
}

/// Dimension of `ν_n`: `((n+1) ln(n+1) - n ln n) / ((n+1) ln 2)`.
pub fn nu_dimension(n: usize) -> f64 {
    let n = n as f64;
    ((n + 1.0) * (n + 1.0).ln() - n * n.ln()) / ((n + 1.0) * 2f64.ln())
}

/// Dimension of `ν_n × ν_n`.
pub fn pair_dimension(n: usize) -> f64 {
    2.0 * nu_dimension(n)
}

/// Weights of the four maps `G_ij(s, r) = ((s + i)/2, (r + j)/2)` on the unit
/// square, `i` indexing the half of `s` and `j` the half of `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadWeights {
    w: [BigRational; 4],
}

impl QuadWeights {
    /// Weights in the order `w00, w01, w10, w11`.
    pub fn new(w: [BigRational; 4]) -> Result<Self> {
        if w.iter().any(|x| x.is_negative()) || w.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::InvalidWeights("quadrant weights must be >= 0 and sum to 1".into()));
        }
        Ok(QuadWeights { w })
    }

    /// `w_ij = w_i w_j` with `w_0 = n/(n+1)`, `w_1 = 1/(n+1)`.
    pub fn standard(n: usize) -> Self {
        let m = SelfSimilarMeasure1D::standard(n);
        QuadWeights::product(&m, &m)
    }

    /// Product of the two marginal measures.
    pub fn product(s: &SelfSimilarMeasure1D, r: &SelfSimilarMeasure1D) -> Self {
        QuadWeights {
            w: [
                &s.w0 * &r.w0,
                &s.w0 * &r.w1,
                &s.w1 * &r.w0,
                &s.w1 * &r.w1,
            ],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.w[2 * i + j]
    }

    pub fn as_array(&self) -> &[BigRational; 4] {
        &self.w
    }

    /// The same weights labelled by halves counted from the entry and exit
    /// corners (index 0 = the half containing the corner), i.e. `w_{1-i,1-j}`.
    pub fn corner_labelled(&self) -> [BigRational; 4] {
        [
            self.w[3].clone(),
            self.w[2].clone(),
            self.w[1].clone(),
            self.w[0].clone(),
        ]
    }

    pub fn sum(&self) -> BigRational {
        self.w.iter().sum()
    }
}

/// Quadrant weights for the self-similar measure with cell weights `mu` when
/// the common path enters `A` at corner `i` and leaves `B` at corner `j`.
pub fn weighted_variants(mu: &[BigRational], i: usize, j: usize) -> Result<QuadWeights> {
    if mu.len() < 3 {
        return Err(Error::InvalidWeights("need n+1 >= 3 cell weights".into()));
    }
    if i >= mu.len() || j >= mu.len() {
        return Err(Error::InvalidWeights(format!(
            "corner index out of range for {} weights",
            mu.len()
        )));
    }
    if mu.iter().any(|x| !x.is_positive()) || mu.iter().sum::<BigRational>() != BigRational::one() {
        return Err(Error::InvalidWeights("cell weights must be > 0 and sum to 1".into()));
    }
    // points of subcell i sit in the upper half of φ toward corner i
    let s = SelfSimilarMeasure1D::new(BigRational::one() - &mu[i], mu[i].clone())?;
    let r = SelfSimilarMeasure1D::new(BigRational::one() - &mu[j], mu[j].clone())?;
    Ok(QuadWeights::product(&s, &r))
}

/// Parameters of `ν̃^t = (ν × ν) ∘ ψ_t^{-1}` for cells of levels `k` and `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardSpec {
    pub t: BigRational,
    pub k: usize,
    pub m: usize,
    pub weights: QuadWeights,
    /// Set when `t` came from a floating-point value.
    pub approximate: bool,
}

impl PushforwardSpec {
    pub fn standard(n: usize, t: BigRational, k: usize, m: usize) -> Result<Self> {
        PushforwardSpec::with_weights(t, k, m, QuadWeights::standard(n))
    }

    pub fn with_weights(t: BigRational, k: usize, m: usize, weights: QuadWeights) -> Result<Self> {
        if !in_unit_interval(&t) {
            return Err(Error::DomainError(format!("t = {t} not in [0, 1]")));
        }
        Ok(PushforwardSpec {
            t,
            k,
            m,
            weights,
            approximate: false,
        })
    }

    /// Takes `t` from a double; the run is labelled approximate.
    pub fn approx(n: usize, t: f64, k: usize, m: usize) -> Result<Self> {
        let t = BigRational::from_float(t)
            .ok_or_else(|| Error::DomainError(format!("t = {t} is not finite")))?;
        let mut spec = PushforwardSpec::standard(n, t, k, m)?;
        spec.approximate = true;
        Ok(spec)
    }

    /// `ψ_t(s, r) = α s + (1 - α)(1 - r)`; returns `α`.
    pub fn alpha(&self) -> BigRational {
        let one = BigRational::one();
        let a = Dyadic::pow2_neg(self.k as u32).to_rational() * (&one - &self.t);
        let b = Dyadic::pow2_neg(self.m as u32).to_rational() * &self.t;
        &a / (&a + &b)
    }

    /// Offsets `c_ij` with `G̃_ij(x) = (x + c_ij)/2`.
    pub fn offsets(&self) -> [f64; 4] {
        let alpha = f(&self.alpha());
        let beta = 1.0 - alpha;
        [
            beta,                 // 00
            0.0,                  // 01
            alpha + beta,         // 10
            alpha,                // 11
        ]
    }

    fn meta(&self, depth: u32, method: &str) -> HistogramMeta {
        HistogramMeta {
            n: None,
            t: Some(self.t.to_string()),
            k: Some(self.k),
            m: Some(self.m),
            depth,
            normalization: "1".into(),
            method: if self.approximate {
                format!("{method} (approximate t)")
            } else {
                method.into()
            },
            iterations: None,
        }
    }
}

/// Add `mass` spread uniformly over `[lo, lo + width]` (in bin units) to `bins`.
fn deposit(bins: &mut [Acc], lo: f64, width: f64, mass: f64) {
    let nb = bins.len() as f64;
    let lo = lo.clamp(0.0, nb);
    let hi = (lo + width).clamp(0.0, nb);
    if hi <= lo {
        let k = (lo.floor() as usize).min(bins.len() - 1);
        bins[k].add(mass);
        return;
    }
    let density = mass / (hi - lo);
    let mut k = lo.floor() as usize;
    while k < bins.len() && (k as f64) < hi {
        let a = lo.max(k as f64);
        let b = hi.min(k as f64 + 1.0);
        if b > a {
            bins[k].add(density * (b - a));
        }
        k += 1;
    }
}

/// Method A: subdivide the unit square into `4^depth` squares, push each through
/// `ψ_t` (its image is an interval of width `2^-depth`) and split its mass over
/// the output bins in proportion to overlap.
pub fn tilde_nu_histogram_grid(spec: &PushforwardSpec, depth: u32) -> Result<Histogram> {
    if depth > GRID_MAX_DEPTH {
        return Err(Error::BudgetExceeded(format!(
            "grid depth {depth} > {GRID_MAX_DEPTH}"
        )));
    }
    let alpha = f(&spec.alpha());
    let beta = 1.0 - alpha;
    let w: Vec<f64> = spec.weights.as_array().iter().map(f).collect();
    let nb = 1usize << depth;

    // Split the first `top` levels into independent subtrees; partial histograms
    // are merged in a fixed order so results do not depend on scheduling.
    let top = depth.min(3);
    let subtrees: Vec<(usize, usize, f64)> = {
        let mut v = vec![(0usize, 0usize, 1.0f64)];
        for _ in 0..top {
            v = v
                .into_iter()
                .flat_map(|(a, b, mass)| {
                    (0..4).map(move |q| (2 * a + q / 2, 2 * b + q % 2, mass))
                })
                .enumerate()
                .map(|(idx, (a, b, mass))| (a, b, mass * w[idx % 4]))
                .collect();
        }
        v
    };
    let partials: Vec<Vec<Acc>> = subtrees
        .par_iter()
        .map(|&(a, b, mass)| {
            let mut bins = vec![Acc::default(); nb];
            descend(&mut bins, &w, alpha, beta, a, b, top, depth, mass);
            bins
        })
        .collect();
    let mut bins = vec![Acc::default(); nb];
    for p in &partials {
        for (acc, x) in bins.iter_mut().zip(p) {
            acc.merge(x);
        }
    }
    let masses = bins.iter().map(Acc::value).collect();
    Ok(Histogram::unit(depth, Masses::Approx(masses)).with_meta(spec.meta(depth, "grid")))
}

#[allow(clippy::too_many_arguments)]
fn descend(
    bins: &mut [Acc],
    w: &[f64],
    alpha: f64,
    beta: f64,
    a: usize,
    b: usize,
    level: u32,
    depth: u32,
    mass: f64,
) {
    if mass == 0.0 {
        return;
    }
    if level == depth {
        // square [a, a+1] x [b, b+1] in units of 2^-depth
        let nb = bins.len() as f64;
        let lo = alpha * a as f64 + beta * (nb - 1.0 - b as f64);
        deposit(bins, lo, 1.0, mass);
        return;
    }
    for q in 0..4 {
        descend(
            bins,
            w,
            alpha,
            beta,
            2 * a + q / 2,
            2 * b + q % 2,
            level + 1,
            depth,
            mass * w[q],
        );
    }
}

/// Convergence record of the transfer-operator iteration.
#[derive(Clone, Debug, Serialize)]
pub struct IfsRun {
    pub iterations: usize,
    /// L1 distance between successive iterates.
    pub residuals: Vec<f64>,
}

/// Extra binary levels used internally by method B before coarsening.
pub const IFS_REFINE: u32 = 4;

/// Method B: iterate `h ↦ Σ w_ij h ∘ G̃_ij^{-1}` on histograms from the uniform
/// start until successive iterates differ by less than `tol` in L1, working
/// `IFS_REFINE` levels finer than the output.
pub fn tilde_nu_histogram_ifs(
    spec: &PushforwardSpec,
    depth: u32,
    max_iterations: usize,
    tol: f64,
) -> Result<(Histogram, IfsRun)> {
    let fine = depth + IFS_REFINE;
    if fine > MAX_DEPTH {
        return Err(Error::BudgetExceeded(format!("ifs depth {depth} too deep")));
    }
    let nb = 1usize << fine;
    let w: Vec<f64> = spec.weights.as_array().iter().map(f).collect();
    let c = spec.offsets();
    let mut h = vec![1.0 / nb as f64; nb];
    let mut run = IfsRun {
        iterations: 0,
        residuals: Vec::new(),
    };
    for _ in 0..max_iterations {
        let mut next = vec![Acc::default(); nb];
        for q in 0..4 {
            if w[q] == 0.0 {
                continue;
            }
            let shift = c[q] * nb as f64 / 2.0;
            for (k, &mass) in h.iter().enumerate() {
                if mass != 0.0 {
                    deposit(&mut next, k as f64 / 2.0 + shift, 0.5, mass * w[q]);
                }
            }
        }
        let next: Vec<f64> = next.iter().map(Acc::value).collect();
        let res = compensated_sum(
            &h.iter().zip(&next).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>(),
        );
        h = next;
        run.iterations += 1;
        run.residuals.push(res);
        if res < tol {
            break;
        }
    }
    let mut meta = spec.meta(depth, "ifs");
    meta.iterations = Some(run.iterations);
    let hist = Histogram::unit(fine, Masses::Approx(h))
        .coarsen(IFS_REFINE)
        .with_meta(meta);
    Ok((hist, run))
}

/// `η_t` for a cell `A` and a point `b`: `(n+1)^{-|A|} ν_n ∘ H_t^{-1}`, binned over
/// `Z_t(A, b)` (as arclength along the common path from its entry point).
pub fn eta_cell_to_point(a: &Cell, b: &PointAddress, t: &BigRational, depth: u32) -> Result<Histogram> {
    let cp = build_common_path(a, &Target::Point(b.clone()))?;
    let n = a.n();
    let norm = BigRational::from_integer(BigInt::from(n + 1).pow(a.level() as u32)).recip();
    let d = cp.length().to_rational();
    let meta = HistogramMeta {
        n: Some(n),
        t: Some(t.to_string()),
        k: Some(a.level()),
        m: None,
        depth,
        normalization: norm.to_string(),
        method: "cell-to-point".into(),
        iterations: None,
    };
    if *t == BigRational::one() && cp.in_window(t) {
        // Z_1(A, b) = {b}: every bin sits at b, so keep all mass in the last one
        let mut masses = vec![BigRational::zero(); 1 << depth];
        *masses.last_mut().unwrap() = norm.clone();
        return Ok(Histogram::unit(depth, Masses::Exact(masses))
            .on_range(d.clone(), d)
            .with_meta(meta));
    }
    let iv = cp.interpolant_interval(t)?;
    let hist = SelfSimilarMeasure1D::standard(n)
        .histogram(depth)?
        .scaled(&norm)
        .on_range(iv.x1.arclength, iv.x2.arclength);
    Ok(hist.with_meta(meta))
}

/// `η_t` for cells `A`, `B` joined by a regular common path:
/// `(n+1)^{-k-m} ν̃^t ∘ H_t^{-1}` binned over `Z_t(A, B)`.
pub fn eta_cell_to_cell(a: &Cell, b: &Cell, t: &BigRational, depth: u32) -> Result<Histogram> {
    let cp = build_common_path(a, &Target::Cell(b.clone()))?;
    eta_on_common_path(&cp, t, depth)
}

pub fn eta_on_common_path(cp: &CommonPath, t: &BigRational, depth: u32) -> Result<Histogram> {
    let Target::Cell(b) = cp.b() else {
        return Err(Error::InvalidInput("target is a point".into()));
    };
    let a = cp.a();
    let n = a.n();
    let iv = cp.interpolant_interval(t)?;
    let spec = PushforwardSpec::standard(n, t.clone(), a.level(), b.level())?;
    let norm = BigRational::from_integer(BigInt::from(n + 1).pow((a.level() + b.level()) as u32))
        .recip();
    let meta = HistogramMeta {
        n: Some(n),
        normalization: norm.to_string(),
        method: "cell-to-cell grid".into(),
        ..spec.meta(depth, "")
    };
    Ok(tilde_nu_histogram_grid(&spec, depth)?
        .scaled(&norm)
        .on_range(iv.x1.arclength, iv.x2.arclength)
        .with_meta(meta))
}

/// Mass of `[0, x)` under a histogram over `[0, 1]`, splitting the bin containing
/// `x` proportionally.
pub fn histogram_cdf(h: &Histogram, x: f64) -> f64 {
    let masses = h.masses_f64();
    let pos = (x * masses.len() as f64).clamp(0.0, masses.len() as f64);
    let whole = pos.floor() as usize;
    let mut acc = compensated_sum(&masses[..whole]);
    if whole < masses.len() {
        acc += masses[whole] * (pos - whole as f64);
    }
    acc
}

/// Convert a nonnegative exact mass to a double.
pub fn mass_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
