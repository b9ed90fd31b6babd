//! Geodesic interpolants between points and between cells.
//!
//! For a cell `A` of level `k` and a target `B` (a cell of level `m` or a single
//! point) a common path is a geodesic `γ` from a corner `ȧ` of `A` to a corner `ḃ`
//! of `B` that every geodesic from `A` to `B` traverses. Positions on `γ` are
//! measured as arclength from `ȧ`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gasket::{phi_projection, Cell, Letter, PointAddress};
use crate::metric::{distance, enumerate_geodesics, Geodesic};
use crate::rational;

/// Every point of `Z̃_t(a, b)`, one per geodesic, with duplicates removed.
pub fn interpolate_points(a: &PointAddress, b: &PointAddress, t: &Dyadic) -> Result<Vec<PointAddress>> {
    if t.is_negative() || *t > Dyadic::one() {
        return Err(Error::DomainError(format!("t = {t} not in [0, 1]")));
    }
    let mut out: Vec<PointAddress> = Vec::new();
    for g in enumerate_geodesics(a, b)? {
        let p = g.point_along(t)?;
        if !out.iter().any(|q| q.same_point(&p)) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `ψ_t(s, r)` for cells of levels `k` and `m`.
pub fn psi(t: &BigRational, k: usize, m: usize, s: &BigRational, r: &BigRational) -> Result<BigRational> {
    psi_sides(
        t,
        &Dyadic::pow2_neg(k as u32).to_rational(),
        &Dyadic::pow2_neg(m as u32).to_rational(),
        s,
        r,
    )
}

/// `ψ_t` with explicit side lengths; `side_b = 0` is the cell-to-point case.
pub fn psi_sides(
    t: &BigRational,
    side_a: &BigRational,
    side_b: &BigRational,
    s: &BigRational,
    r: &BigRational,
) -> Result<BigRational> {
    let one = BigRational::one();
    let wa = side_a * (&one - t);
    let wb = side_b * t;
    let den = &wa + &wb;
    if den.is_zero() {
        return Err(Error::DomainError("psi: both weights vanish".into()));
    }
    Ok((wa * s + wb * (&one - r)) / den)
}

/// Destination of a common path: a cell or a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Cell(Cell),
    Point(PointAddress),
}

impl Target {
    pub fn n(&self) -> usize {
        match self {
            Target::Cell(c) => c.n(),
            Target::Point(p) => p.n(),
        }
    }

    /// Side length, zero for a point.
    pub fn side(&self) -> Dyadic {
        match self {
            Target::Cell(c) => c.side(),
            Target::Point(_) => Dyadic::zero(),
        }
    }

    fn boundary(&self) -> Vec<(Option<Letter>, PointAddress)> {
        match self {
            Target::Cell(c) => c
                .corners()
                .into_iter()
                .enumerate()
                .map(|(j, p)| (Some(j as Letter), p))
                .collect(),
            Target::Point(p) => vec![(None, p.canonicalize())],
        }
    }

    pub fn contains(&self, p: &PointAddress) -> bool {
        match self {
            Target::Cell(c) => c.contains(p),
            Target::Point(q) => q.same_point(p),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Cell(c) => write!(f, "{c}"),
            Target::Point(p) => write!(f, "{p}"),
        }
    }
}

/// A point on a common path, at an exact rational arclength from the entry point.
/// The address is present when the arclength is dyadic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathPoint {
    #[serde(serialize_with = "rational::serialize")]
    pub arclength: BigRational,
    pub address: Option<PointAddress>,
}

#[derive(Clone, Debug)]
pub struct CommonPath {
    a: Cell,
    b: Target,
    entry_corner: Letter,
    exit_corner: Option<Letter>,
    gamma: Geodesic,
    t1f: BigRational,
    t2i: BigRational,
}

pub fn build_common_path(a: &Cell, b: &Target) -> Result<CommonPath> {
    let b_parts = match b {
        Target::Cell(c) => vec![c.clone()],
        Target::Point(_) => Vec::new(),
    };
    let mut found = common_paths_between(a, std::slice::from_ref(a), b, &b_parts)?;
    // for whole cells at most one corner pair can qualify
    Ok(found.remove(0))
}

/// `2^-|cell| max_{p ∈ parts} (φ_i(p) - φ_i0(p))` for every `(i, i0)`: how much
/// closer some point of the parts can be to corner `i` than to corner `i0`.
fn corner_advantage(cell: &Cell, parts: &[Cell]) -> Result<Vec<Vec<Dyadic>>> {
    let n = cell.n();
    let mut phis: Vec<Vec<Dyadic>> = Vec::new();
    for part in parts {
        if !cell.contains_cell(part) {
            return Err(Error::NotInCell);
        }
        for p in part.corners() {
            let rel = p.relative_to(cell).ok_or(Error::NotInCell)?.to_bary();
            phis.push(rel.coords().to_vec());
        }
    }
    let mut adv = vec![vec![Dyadic::zero(); n + 1]; n + 1];
    for (i, row) in adv.iter_mut().enumerate() {
        for (i0, slot) in row.iter_mut().enumerate() {
            let best = phis
                .iter()
                .map(|c| &c[i] - &c[i0])
                .max()
                .expect("parts have corners");
            *slot = best * cell.side();
        }
    }
    Ok(adv)
}

/// Common paths from the union of `a_parts` (subcells of `a`) to the union of
/// `b_parts` (subcells of `b`; ignored for a point target), running between a
/// corner of `a` and a corner of `b`.
///
/// Any route between the sets leaves `a` and enters `b` through corners, so the
/// pair `(i0, j0)` is forced exactly when switching to another pair `(i, j)`
/// never saves more than it costs: `D_ij - D_i0j0` must be at least the largest
/// gain available inside the parts. Pairs passing that test whose connecting
/// geodesic is unique and nondegenerate are returned, shortest first.
pub fn common_paths_between(
    a: &Cell,
    a_parts: &[Cell],
    b: &Target,
    b_parts: &[Cell],
) -> Result<Vec<CommonPath>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let disjoint = match b {
        Target::Cell(c) => !a.intersects(c),
        Target::Point(p) => !a.contains(p),
    };
    if !disjoint {
        return Err(Error::NoCommonPath(format!("{a} and {b} are not disjoint")));
    }
    if a_parts.is_empty() {
        return Err(Error::InvalidInput("no source cells".into()));
    }
    let adv_a = corner_advantage(a, a_parts)?;
    let adv_b = match b {
        Target::Cell(c) => Some(corner_advantage(c, b_parts)?),
        Target::Point(_) => None,
    };

    let mut pairs = Vec::new();
    for (i, pa) in a.corners().into_iter().enumerate() {
        for (j, pb) in b.boundary() {
            let d = distance(&pa, &pb)?;
            pairs.push((i, j, pa.clone(), pb, d));
        }
    }
    let mut found = Vec::new();
    for (i0, j0, entry, exit, d0) in &pairs {
        if d0.is_zero() {
            continue;
        }
        let forced = pairs.iter().all(|(i, j, _, _, d)| {
            let mut gain = adv_a[*i][*i0].clone();
            if let (Some(adv), Some(j), Some(j0)) = (&adv_b, j, j0) {
                gain = gain + &adv[*j as usize][*j0 as usize];
            }
            d - d0 >= gain
        });
        if !forced {
            continue;
        }
        let mut gs = enumerate_geodesics(entry, exit)?;
        if gs.len() != 1 {
            continue;
        }
        let gamma = gs.remove(0);
        let sa = a.side().to_rational();
        let sb = b.side().to_rational();
        let dr = d0.to_rational();
        found.push(CommonPath {
            a: a.clone(),
            b: b.clone(),
            entry_corner: *i0 as Letter,
            exit_corner: *j0,
            gamma,
            t1f: &sa / (&sa + &dr),
            t2i: &dr / (&dr + &sb),
        });
    }
    if found.is_empty() {
        return Err(Error::NoCommonPath(format!(
            "no corner route from {a} to {b} is taken by every geodesic"
        )));
    }
    found.sort_by(|x, y| x.length().cmp(y.length()));
    Ok(found)
}

impl CommonPath {
    pub fn a(&self) -> &Cell {
        &self.a
    }

    pub fn b(&self) -> &Target {
        &self.b
    }

    pub fn entry(&self) -> &PointAddress {
        self.gamma.start()
    }

    pub fn exit(&self) -> &PointAddress {
        self.gamma.end()
    }

    pub fn entry_corner(&self) -> Letter {
        self.entry_corner
    }

    pub fn exit_corner(&self) -> Option<Letter> {
        self.exit_corner
    }

    pub fn gamma(&self) -> &Geodesic {
        &self.gamma
    }

    /// Length `D` of the common path.
    pub fn length(&self) -> &Dyadic {
        self.gamma.length()
    }

    pub fn t1f(&self) -> &BigRational {
        &self.t1f
    }

    pub fn t2i(&self) -> &BigRational {
        &self.t2i
    }

    pub fn is_regular(&self) -> bool {
        self.t1f < self.t2i
    }

    pub fn in_window(&self, t: &BigRational) -> bool {
        *t >= self.t1f && *t <= self.t2i
    }

    fn check_window(&self, t: &BigRational) -> Result<()> {
        if self.in_window(t) {
            Ok(())
        } else {
            Err(Error::OutsideWindow {
                t: t.to_string(),
                lo: self.t1f.to_string(),
                hi: self.t2i.to_string(),
            })
        }
    }

    /// The point at arclength `s` from the entry point.
    pub fn point_at(&self, s: &BigRational) -> Result<PathPoint> {
        if *s < BigRational::zero() || *s > self.length().to_rational() {
            return Err(Error::DomainError(format!("arclength {s} off the common path")));
        }
        let address = match Dyadic::from_rational(s) {
            Some(d) => Some(self.gamma.point_at_arclength(&d)?),
            None => None,
        };
        Ok(PathPoint {
            arclength: s.clone(),
            address,
        })
    }

    fn ends(&self, t: &BigRational) -> (BigRational, BigRational) {
        let one = BigRational::one();
        let d = self.length().to_rational();
        let lo = t * &d - (&one - t) * self.a.side().to_rational();
        let hi = t * &d + t * self.b.side().to_rational();
        (lo, hi)
    }

    /// `Z_t(A, B)` as an interval of the common path.
    pub fn interpolant_interval(&self, t: &BigRational) -> Result<InterpolantInterval> {
        self.check_window(t)?;
        let (lo, hi) = self.ends(t);
        Ok(InterpolantInterval {
            t: t.clone(),
            length: &hi - &lo,
            x1: self.point_at(&lo)?,
            x2: self.point_at(&hi)?,
        })
    }

    /// `H_t(q)`, the increasing linear parametrization of `Z_t(A, B)` by `q ∈ [0, 1]`.
    pub fn h_t(&self, t: &BigRational, q: &BigRational) -> Result<PathPoint> {
        self.check_window(t)?;
        if !rational::in_unit_interval(q) {
            return Err(Error::DomainError(format!("q = {q} not in [0, 1]")));
        }
        let (lo, hi) = self.ends(t);
        self.point_at(&(&lo + q * (&hi - &lo)))
    }

    /// `ψ_t(φ_ȧ(a), φ_ḃ(b))` for `a ∈ A`, `b ∈ B`.
    pub fn psi_of(&self, t: &BigRational, a: &PointAddress, b: &PointAddress) -> Result<BigRational> {
        let s = phi_projection(&self.a, self.entry_corner, a)?.to_rational();
        let r = match (&self.b, self.exit_corner) {
            (Target::Cell(c), Some(j)) => phi_projection(c, j, b)?.to_rational(),
            _ => {
                if !self.b.contains(b) {
                    return Err(Error::NotInCell);
                }
                BigRational::one()
            }
        };
        psi_sides(
            t,
            &self.a.side().to_rational(),
            &self.b.side().to_rational(),
            &s,
            &r,
        )
    }

    /// `Z_t(a, b)` computed through the parametrization, `H_t(ψ_t(φ_ȧ(a), φ_ḃ(b)))`.
    pub fn z_t(&self, t: &BigRational, a: &PointAddress, b: &PointAddress) -> Result<PathPoint> {
        let (lo, hi) = self.ends(t);
        if lo == hi {
            // t = 1 towards a point: the interval is {b}
            self.check_window(t)?;
            if !self.a.contains(a) || !self.b.contains(b) {
                return Err(Error::NotInCell);
            }
            return self.point_at(&lo);
        }
        let q = self.psi_of(t, a, b)?;
        self.h_t(t, &q)
    }
}

impl Serialize for CommonPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CommonPath", 9)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("entry", self.entry())?;
        st.serialize_field("exit", self.exit())?;
        st.serialize_field("D", self.length())?;
        st.serialize_field("t1f", &self.t1f.to_string())?;
        st.serialize_field("t2i", &self.t2i.to_string())?;
        st.serialize_field("regular", &self.is_regular())?;
        st.serialize_field("anchors", self.gamma.anchors())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolantInterval {
    #[serde(serialize_with = "rational::serialize")]
    pub t: BigRational,
    pub x1: PathPoint,
    pub x2: PathPoint,
    #[serde(serialize_with = "rational::serialize")]
    pub length: BigRational,
}

/// Shrink `A` toward its entry corner while `t < t1f`, and `B` toward its exit
/// corner while `t > t2i`, until `t` lies in the window of the common path.
pub fn largest_admissible_subcell(a: &Cell, b: &Target, t: &BigRational) -> Result<CommonPath> {
    if !rational::in_unit_interval(t) {
        return Err(Error::DomainError(format!("t = {t} not in [0, 1]")));
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..64 {
        let cp = build_common_path(&a, &b)?;
        if *t < cp.t1f {
            a = a.child(cp.entry_corner)?;
        } else if *t > cp.t2i {
            match (&b, cp.exit_corner) {
                (Target::Cell(c), Some(j)) => b = Target::Cell(c.child(j)?),
                _ => unreachable!("t2i = 1 for a point target"),
            }
        } else {
            return Ok(cp);
        }
    }
    Err(Error::OutsideWindow {
        t: t.to_string(),
        lo: "0".into(),
        hi: "1".into(),
    })
}

/// `BigRational` from `p/q`, for tests and callers.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
