//! Seeded random choices of gasket vertices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::Dyadic;
use crate::gasket::{Cell, Letter, PointAddress};
use crate::inequality::CellUnion;
use crate::interpolation::{build_common_path, common_paths_between, ratio, CommonPath, Target};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random vertex `⟨w u t̄⟩` of `cell = ⟨w⟩` with `|u| = extra`.
pub fn random_vertex_in<R: Rng>(rng: &mut R, cell: &Cell, extra: usize) -> PointAddress {
    let n = cell.n();
    let mut word = cell.word().letters().to_vec();
    for _ in 0..extra {
        word.push(rng.gen_range(0..=n) as Letter);
    }
    let tail = rng.gen_range(0..=n) as Letter;
    PointAddress::new(n, word, tail)
        .expect("letters drawn in range")
        .canonicalize()
}

/// Random vertex of `S_n` at depth up to `max_depth`.
pub fn random_vertex<R: Rng>(rng: &mut R, n: usize, max_depth: usize) -> PointAddress {
    let depth = rng.gen_range(0..=max_depth);
    let root = Cell::root(n).expect("supported dimension");
    random_vertex_in(rng, &root, depth)
}

/// Random level-`level` cell of `S_n`.
pub fn random_cell<R: Rng>(rng: &mut R, n: usize, level: usize) -> Cell {
    let letters = (0..level).map(|_| rng.gen_range(0..=n) as Letter).collect();
    Cell::from_letters(n, letters).expect("letters drawn in range")
}

/// Random dyadic value in `[lo, hi]` with denominator `2^bits`, if one exists.
pub fn random_dyadic_in<R: Rng>(rng: &mut R, lo: &BigRational, hi: &BigRational, bits: u32) -> Option<Dyadic> {
    let scale = BigRational::from_integer(BigInt::one() << bits as usize);
    let first = (lo * &scale).ceil().to_integer();
    let last = (hi * &scale).floor().to_integer();
    if first > last {
        return None;
    }
    let span = (&last - &first).to_u64()?;
    let k = first + BigInt::from(rng.gen_range(0..=span));
    Some(Dyadic::new(k, bits))
}

/// A pair of cells of levels `1..=max_level` joined by a regular common path.
pub fn random_regular_cells<R: Rng>(rng: &mut R, n: usize, max_level: usize) -> CommonPath {
    loop {
        let k = rng.gen_range(1..=max_level);
        let m = rng.gen_range(1..=max_level);
        let a = random_cell(rng, n, k);
        let b = random_cell(rng, n, m);
        if let Ok(cp) = build_common_path(&a, &Target::Cell(b)) {
            if cp.is_regular() {
                return cp;
            }
        }
    }
}

/// A cell of level `1..=max_level` and a vertex outside it joined by a common path.
pub fn random_cell_to_point<R: Rng>(rng: &mut R, n: usize, max_level: usize) -> CommonPath {
    loop {
        let k = rng.gen_range(1..=max_level);
        let a = random_cell(rng, n, k);
        let b = random_vertex(rng, n, max_level + 1);
        if let Ok(cp) = build_common_path(&a, &Target::Point(b)) {
            return cp;
        }
    }
}

/// `t = t1f + (j/steps)(t2i - t1f)` for random `j`.
pub fn random_t_in_window<R: Rng>(rng: &mut R, cp: &CommonPath, steps: u32) -> BigRational {
    let j = rng.gen_range(0..=steps);
    let u = BigRational::new(BigInt::from(j), BigInt::from(steps));
    cp.t1f() + u * (cp.t2i() - cp.t1f())
}

/// A connected union of `size` (at most) subcells of `cell`, `extra` levels down,
/// grown by attaching random neighbours.
pub fn random_connected_union<R: Rng>(rng: &mut R, cell: &Cell, extra: usize, size: usize) -> Vec<Cell> {
    let n = cell.n();
    let len = cell.level() + extra;
    let prefix = |a: &PointAddress| {
        let mut w = a.word().to_vec();
        w.resize(len.max(w.len()), a.tail());
        Cell::from_letters(n, w[..len].to_vec()).expect("valid word")
    };
    let first = random_vertex_in(rng, cell, extra);
    let mut cells = vec![first
        .addresses()
        .iter()
        .map(&prefix)
        .find(|c| cell.contains_cell(c))
        .expect("vertex lies in the cell")];
    for _ in 1..size {
        let base = cells[rng.gen_range(0..cells.len())].clone();
        // a neighbour shares the corner ⟨u i⟩ for some i: take a cell through it
        let i = rng.gen_range(0..=n) as Letter;
        let corner = base.corner(i).expect("letter in range");
        // the other level-`len` cell through that corner, read off its other address
        let others: Vec<Cell> = corner
            .addresses()
            .iter()
            .map(&prefix)
            .filter(|c| *c != base)
            .collect();
        let Some(c) = others.into_iter().next() else {
            continue;
        };
        if cell.contains_cell(&c) && !cells.contains(&c) {
            cells.push(c);
        }
    }
    cells
}

/// Two connected unions in disjoint cells of level 1 or 2, and a time
/// `t ∈ {1/4, 1/2, 3/4}` inside the window of their common path.
pub fn random_union_config<R: Rng>(rng: &mut R, n: usize) -> (CellUnion, CellUnion, BigRational) {
    let ts = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    loop {
        let (lv, lw) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let v = random_cell(rng, n, lv);
        let w = random_cell(rng, n, lw);
        if v.intersects(&w) {
            continue;
        }
        let (ea, eb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (sa, sb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a_cells = random_connected_union(rng, &v, ea, sa);
        let b_cells = random_connected_union(rng, &w, eb, sb);
        let (Ok(a), Ok(b)) = (CellUnion::new(a_cells), CellUnion::new(b_cells)) else {
            continue;
        };
        // the minimal cells may be smaller than v and w
        let target = Target::Cell(b.minimal_cell());
        let Ok(cps) = common_paths_between(&a.minimal_cell(), a.cells(), &target, b.cells()) else {
            continue;
        };
        let window: Vec<&BigRational> = ts.iter().filter(|t| cps[0].in_window(t)).collect();
        if let Some(t) = window.get(rng.gen_range(0..window.len().max(1))) {
            return (a, b, (*t).clone());
        }
    }
}
