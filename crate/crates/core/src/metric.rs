//! Intrinsic distance and geodesics between vertices of the gasket.
//!
//! Inside the common cell `⟨w⟩` of `x ∈ ⟨wi⟩` and `y ∈ ⟨wj⟩`, every geodesic passes
//! either through the bridge point `⟨w i j̄⟩` (kind P1) or through the two bridge
//! points `⟨w i k̄⟩`, `⟨w j k̄⟩` for some `k ∉ {i, j}` (kind P2). Rescaled to the
//! common cell the candidate lengths are
//!
//! * P1: `1 - [x]_j - [y]_i`
//! * P2: `3/2 - [x]_k - [y]_k`
//!
//! and the pieces from a point to a corner of its subcell are built by descending
//! through the nested cells of the point's address.

use std::fmt;

use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gasket::{
    apply_map_bary, common_cell, phi_projection, BaryCoord, Cell, Letter, PointAddress,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GeodesicKind {
    /// Through the single bridge point shared by the two maximal subcells.
    P1,
    /// Through two bridge points.
    P2,
    /// A single straight segment between two boundary points of one cell.
    WithinCell,
}

impl fmt::Display for GeodesicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeodesicKind::P1 => "P1",
            GeodesicKind::P2 => "P2",
            GeodesicKind::WithinCell => "within-cell",
        };
        f.write_str(s)
    }
}

/// A geodesic stored as its vertex sequence, collinear runs merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Geodesic {
    waypoints: Vec<PointAddress>,
    coords: Vec<BaryCoord>,
    length: Dyadic,
    kind: GeodesicKind,
}

impl Geodesic {
    fn from_polyline(coords: Vec<BaryCoord>, kind: GeodesicKind) -> Self {
        let coords = merge_polyline(coords);
        let length = coords
            .windows(2)
            .map(|w| segment_length(&w[0], &w[1]))
            .sum();
        let waypoints = coords
            .iter()
            .map(|c| c.to_address().expect("geodesic vertices lie on the gasket"))
            .collect();
        let kind = if coords.len() == 2 {
            GeodesicKind::WithinCell
        } else {
            kind
        };
        Geodesic {
            waypoints,
            coords,
            length,
            kind,
        }
    }

    pub fn start(&self) -> &PointAddress {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &PointAddress {
        self.waypoints.last().expect("nonempty")
    }

    /// All vertices of the path including both endpoints.
    pub fn waypoints(&self) -> &[PointAddress] {
        &self.waypoints
    }

    /// Interior vertices where the path changes direction.
    pub fn anchors(&self) -> &[PointAddress] {
        &self.waypoints[1..self.waypoints.len() - 1]
    }

    pub fn coords(&self) -> &[BaryCoord] {
        &self.coords
    }

    pub fn length(&self) -> &Dyadic {
        &self.length
    }

    pub fn kind(&self) -> GeodesicKind {
        self.kind
    }

    pub fn reversed(&self) -> Geodesic {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        let mut coords = self.coords.clone();
        coords.reverse();
        Geodesic {
            waypoints,
            coords,
            length: self.length.clone(),
            kind: self.kind,
        }
    }

    /// Whether `p` lies on the path.
    pub fn contains(&self, p: &PointAddress) -> bool {
        self.arclength_of(p).is_some()
    }

    /// Arclength from the start to `p`, if `p` lies on the path.
    pub fn arclength_of(&self, p: &PointAddress) -> Option<Dyadic> {
        let target = p.to_bary();
        let mut acc = Dyadic::zero();
        for w in self.coords.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let len = segment_length(a, b);
            let off = segment_length(a, &target);
            if off <= len {
                let probe = point_on_segment(a, b, &off);
                if probe == target {
                    return Some(acc + off);
                }
            }
            acc = acc + len;
        }
        None
    }

    /// Point at arclength `t · |g|` from the start, `t ∈ [0, 1]` dyadic.
    pub fn point_along(&self, t: &Dyadic) -> Result<PointAddress> {
        if t.is_negative() || *t > Dyadic::one() {
            return Err(Error::DomainError(format!("t = {t} not in [0, 1]")));
        }
        self.point_at_arclength(&(t * &self.length))
    }

    pub fn point_at_arclength(&self, s: &Dyadic) -> Result<PointAddress> {
        if s.is_negative() || *s > self.length {
            return Err(Error::DomainError(format!(
                "arclength {s} outside [0, {}]",
                self.length
            )));
        }
        let mut acc = Dyadic::zero();
        for w in self.coords.windows(2) {
            let len = segment_length(&w[0], &w[1]);
            let next = &acc + &len;
            if *s <= next {
                let p = point_on_segment(&w[0], &w[1], &(s - &acc));
                return p.to_address();
            }
            acc = next;
        }
        Ok(self.end().clone())
    }
}

impl Serialize for Geodesic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Geodesic", 4)?;
        st.serialize_field("endpoints", &[self.start(), self.end()])?;
        st.serialize_field("anchors", self.anchors())?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("kind", &self.kind.to_string())?;
        st.end()
    }
}

/// Euclidean length of a segment parallel to a simplex edge: the sum of the
/// positive coordinate increments.
fn segment_length(a: &BaryCoord, b: &BaryCoord) -> Dyadic {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| y - x)
        .filter(|d| !d.is_negative())
        .sum()
}

fn point_on_segment(a: &BaryCoord, b: &BaryCoord, s: &Dyadic) -> BaryCoord {
    let len = segment_length(a, b);
    if len.is_zero() {
        return a.clone();
    }
    // b - a = len (e_hi - e_lo) for a segment along an edge direction
    let coords = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| {
            let d = y - x;
            if d.is_zero() {
                x.clone()
            } else if d.is_negative() {
                x - s
            } else {
                x + s
            }
        })
        .collect();
    BaryCoord::new(coords).expect("segment points stay in the simplex")
}

fn same_direction(u: &[Dyadic], v: &[Dyadic]) -> bool {
    let Some(p) = u.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    if u[p].is_negative() != v[p].is_negative() || v[p].is_zero() {
        return false;
    }
    u.iter().zip(v).all(|(ui, vi)| vi * &u[p] == ui * &v[p])
}

fn diff(a: &BaryCoord, b: &BaryCoord) -> Vec<Dyadic> {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| y - x)
        .collect()
}

/// Drop repeated vertices and interior vertices of straight runs.
fn merge_polyline(points: Vec<BaryCoord>) -> Vec<BaryCoord> {
    let mut out: Vec<BaryCoord> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() == Some(&p) {
            continue;
        }
        if out.len() >= 2 {
            let k = out.len();
            if same_direction(&diff(&out[k - 2], &out[k - 1]), &diff(&out[k - 1], &p)) {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

/// Vertex paths from the corner `⟨w c̄⟩` of `cell` down to `p ∈ cell`, one per
/// address of `p`, with duplicates removed. Each path starts at the corner.
fn corner_paths(cell: &Cell, corner: Letter, p: &PointAddress) -> Result<Vec<Vec<BaryCoord>>> {
    let rel = p.relative_to(cell).ok_or(Error::NotInCell)?;
    let mut paths: Vec<Vec<BaryCoord>> = Vec::new();
    for a in rel.addresses() {
        let mut word = cell.word().letters().to_vec();
        let mut pts = vec![PointAddress::new(cell.n(), word.clone(), corner)?.to_bary()];
        for &l in a.word() {
            word.push(l);
            pts.push(PointAddress::new(cell.n(), word.clone(), corner)?.to_bary());
        }
        pts.push(PointAddress::new(cell.n(), word, a.tail())?.to_bary());
        let merged = merge_polyline(pts);
        if !paths.contains(&merged) {
            paths.push(merged);
        }
    }
    Ok(paths)
}

/// `d(⟨w ī⟩, p) = 2^-|w| (1 - φ_i(p))` for `p ∈ ⟨w⟩`.
pub fn boundary_distance(cell: &Cell, i: Letter, p: &PointAddress) -> Result<Dyadic> {
    let phi = phi_projection(cell, i, p)?;
    Ok((Dyadic::one() - phi).shr(cell.level() as u32))
}

/// Number of geodesics (1 or 2) from the corner `⟨w k̄⟩` of `cell` to `p`.
pub fn boundary_multiplicity(cell: &Cell, k: Letter, p: &PointAddress) -> Result<u32> {
    if k as usize > cell.n() {
        return Err(Error::LetterOutOfRange { letter: k, n: cell.n() });
    }
    let rel = p.relative_to(cell).ok_or(Error::NotInCell)?;
    let Some(&a) = rel.word().last() else {
        return Ok(1);
    };
    let b = rel.tail();
    Ok(if a != k && b != k { 2 } else { 1 })
}

/// All geodesics from a boundary point of `cell` to `p`.
pub fn boundary_geodesics(cell: &Cell, corner: Letter, p: &PointAddress) -> Result<Vec<Geodesic>> {
    Ok(corner_paths(cell, corner, p)?
        .into_iter()
        .map(|pts| Geodesic::from_polyline(pts, GeodesicKind::P1))
        .collect())
}

struct Rescaled {
    cell: Cell,
    x: PointAddress,
    y: PointAddress,
    xb: BaryCoord,
    yb: BaryCoord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Candidate {
    P1 { i: Letter, j: Letter },
    P2 { i: Letter, j: Letter, k: Letter },
}

fn rescale(x: &PointAddress, y: &PointAddress) -> Result<Rescaled> {
    let cell = common_cell(x, y)?;
    let xr = x.relative_to(&cell).expect("x lies in the common cell");
    let yr = y.relative_to(&cell).expect("y lies in the common cell");
    Ok(Rescaled {
        xb: xr.to_bary(),
        yb: yr.to_bary(),
        x: xr,
        y: yr,
        cell,
    })
}

fn subcells_of(b: &BaryCoord) -> Vec<Letter> {
    let half = Dyadic::pow2_neg(1);
    (0..b.coords().len())
        .filter(|&i| b.coords()[i] >= half)
        .map(|i| i as Letter)
        .collect()
}

/// Candidates in deterministic order with their rescaled lengths.
fn candidates(r: &Rescaled) -> Vec<(Candidate, Dyadic)> {
    let n = r.cell.n() as Letter;
    let one = Dyadic::one();
    let three_halves = Dyadic::new(3, 1);
    let mut out = Vec::new();
    for i in subcells_of(&r.xb) {
        for j in subcells_of(&r.yb) {
            debug_assert_ne!(i, j, "common cell is maximal");
            out.push((
                Candidate::P1 { i, j },
                &one - r.xb.get(j) - r.yb.get(i),
            ));
        }
    }
    for i in subcells_of(&r.xb) {
        for j in subcells_of(&r.yb) {
            for k in (0..=n).filter(|&k| k != i && k != j) {
                out.push((
                    Candidate::P2 { i, j, k },
                    &three_halves - r.xb.get(k) - r.yb.get(k),
                ));
            }
        }
    }
    out
}

/// Exact intrinsic distance between two vertices.
pub fn distance(x: &PointAddress, y: &PointAddress) -> Result<Dyadic> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(x.n(), y.n()));
    }
    if x.same_point(y) {
        return Ok(Dyadic::zero());
    }
    let r = rescale(x, y)?;
    let best = candidates(&r)
        .into_iter()
        .map(|(_, len)| len)
        .min()
        .expect("at least one candidate");
    Ok(best.shr(r.cell.level() as u32))
}

/// Every geodesic from `x` to `y`, P1 geodesics first. Paths are deduplicated by
/// their merged vertex sequence.
pub fn enumerate_geodesics(x: &PointAddress, y: &PointAddress) -> Result<Vec<Geodesic>> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(x.n(), y.n()));
    }
    let r = rescale(x, y)?;
    let cands = candidates(&r);
    let best = cands
        .iter()
        .map(|(_, len)| len.clone())
        .min()
        .expect("at least one candidate");
    let root = Cell::root(r.cell.n())?;
    let mut out: Vec<Geodesic> = Vec::new();
    for (cand, len) in cands {
        if len != best {
            continue;
        }
        let (i, j, bx, by, kind) = match cand {
            Candidate::P1 { i, j } => (i, j, j, i, GeodesicKind::P1),
            Candidate::P2 { i, j, k } => (i, j, k, k, GeodesicKind::P2),
        };
        let xs = corner_paths(&root.child(i)?, bx, &r.x)?;
        let ys = corner_paths(&root.child(j)?, by, &r.y)?;
        for px in &xs {
            for py in &ys {
                let mut pts: Vec<BaryCoord> = px.iter().rev().cloned().collect();
                pts.extend(py.iter().cloned());
                let pts = pts
                    .iter()
                    .map(|p| apply_map_bary(r.cell.word(), p))
                    .collect();
                let g = Geodesic::from_polyline(pts, kind);
                if !out.iter().any(|h| h.waypoints == g.waypoints) {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

/// Number of distinct geodesics between distinct points.
pub fn count_geodesics(x: &PointAddress, y: &PointAddress) -> Result<usize> {
    Ok(enumerate_geodesics(x, y)?.len())
}

/// Point at fraction `t` of the way along `g`.
pub fn point_along(g: &Geodesic, t: &Dyadic) -> Result<PointAddress> {
    g.point_along(t)
}
