//! Brute-force checks against the level-`m` graph approximation of `S_n`.
//!
//! Every geodesic between level-`m` vertices runs along level-`m` edges, so
//! breadth-first search on the graph gives exact distances and, with path
//! counting, exact geodesic counts. Vertex coordinates are computed here as
//! integer vectors scaled by `2^m`, independently of the address code in
//! [`crate::gasket`].

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gasket::{check_dimension, BaryCoord, Letter, PointAddress};
use crate::metric;

/// Default cap on the number of level-`m` cells, `(n+1)^m`.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct LevelGraph {
    n: usize,
    m: usize,
    scaled: Vec<Vec<u64>>,
    addresses: Vec<PointAddress>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl LevelGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.scaled.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    /// Barycentric coordinates of vertex `u`.
    pub fn vertex(&self, u: usize) -> BaryCoord {
        let coords = self.scaled[u]
            .iter()
            .map(|&c| Dyadic::new(c, self.m as u32))
            .collect();
        BaryCoord::new(coords).expect("graph vertices lie in the simplex")
    }

    /// An address of vertex `u`: `⟨w ī⟩` for the first level-`m` cell found with it
    /// as a corner.
    pub fn address(&self, u: usize) -> &PointAddress {
        &self.addresses[u]
    }

    pub fn index_of(&self, p: &PointAddress) -> Option<usize> {
        let b = p.to_bary();
        let mut key = Vec::with_capacity(self.n + 1);
        for c in b.coords() {
            let s = c.shl(self.m as u32);
            if s.exponent() != 0 {
                return None;
            }
            key.push(u64::try_from(s.numerator()).ok()?);
        }
        self.scaled.iter().position(|v| *v == key)
    }
}

pub fn build_graph(n: usize, m: usize) -> Result<LevelGraph> {
    build_graph_with_budget(n, m, DEFAULT_CELL_BUDGET)
}

pub fn build_graph_with_budget(n: usize, m: usize, budget: u64) -> Result<LevelGraph> {
    check_dimension(n)?;
    let cells = (n as u64 + 1)
        .checked_pow(m as u32)
        .filter(|&c| c <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("(n+1)^m cells for n={n}, m={m} exceeds {budget}"))
        })?;
    if m >= 63 {
        return Err(Error::BudgetExceeded(format!("level m={m} too deep")));
    }

    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut scaled = Vec::new();
    let mut addresses = Vec::new();
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut edge_count = 0;

    let mut word = vec![0 as Letter; m];
    for code in 0..cells {
        let mut c = code;
        for j in (0..m).rev() {
            word[j] = (c % (n as u64 + 1)) as Letter;
            c /= n as u64 + 1;
        }
        // offset of the cell's corner 0 minus e_0, in units of 2^-m
        let mut base = vec![0u64; n + 1];
        for (j, &l) in word.iter().enumerate() {
            base[l as usize] += 1 << (m - 1 - j);
        }
        let mut ids = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut v = base.clone();
            v[i] += 1;
            let next = scaled.len();
            let id = *index.entry(v.clone()).or_insert(next);
            if id == next {
                scaled.push(v);
                addresses.push(PointAddress::new(n, word.clone(), i as Letter)?.canonicalize());
                adjacency.push(Vec::new());
            }
            ids.push(id);
        }
        for a in 0..=n {
            for b in a + 1..=n {
                adjacency[ids[a]].push(ids[b]);
                adjacency[ids[b]].push(ids[a]);
                edge_count += 1;
            }
        }
    }
    Ok(LevelGraph {
        n,
        m,
        scaled,
        addresses,
        adjacency,
        edge_count,
    })
}

/// Hop counts and shortest-path counts from `source` to every vertex.
pub fn bfs_from(g: &LevelGraph, source: usize) -> (Vec<u32>, Vec<u128>) {
    let nv = g.vertex_count();
    let mut dist = vec![u32::MAX; nv];
    let mut count = vec![0u128; nv];
    dist[source] = 0;
    count[source] = 1;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &g.adjacency[u] {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
            if dist[v] == dist[u] + 1 {
                count[v] += count[u];
            }
        }
    }
    (dist, count)
}

/// Exact graph distance and number of shortest edge paths between two vertices.
pub fn bfs_distance_and_count(g: &LevelGraph, u: usize, v: usize) -> (Dyadic, u128) {
    let (dist, count) = bfs_from(g, u);
    (Dyadic::new(dist[v], g.m as u32), count[v])
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub x: PointAddress,
    pub y: PointAddress,
    pub bfs_distance: Dyadic,
    pub bfs_count: u128,
    pub distance: Option<Dyadic>,
    pub count: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub m: usize,
    pub vertices: usize,
    pub edges: usize,
    pub pairs: u64,
    pub mismatches: Vec<Mismatch>,
    pub max_count: u128,
    pub max_pair: Option<(PointAddress, PointAddress)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct SourceResult {
    pairs: u64,
    mismatches: Vec<Mismatch>,
    max: Option<(u128, usize)>,
}

/// Compare BFS with [`metric::distance`] and [`metric::count_geodesics`] over all
/// unordered vertex pairs of the level-`m` graph.
pub fn verify_metric(n: usize, m: usize) -> Result<VerifyReport> {
    let g = build_graph(n, m)?;
    Ok(verify_graph(&g))
}

pub fn verify_graph(g: &LevelGraph) -> VerifyReport {
    let nv = g.vertex_count();
    let per_source: Vec<SourceResult> = (0..nv)
        .into_par_iter()
        .map(|u| {
            let (dist, count) = bfs_from(g, u);
            let x = g.address(u);
            let mut res = SourceResult {
                pairs: 0,
                mismatches: Vec::new(),
                max: None,
            };
            for v in u + 1..nv {
                res.pairs += 1;
                let y = g.address(v);
                let bfs_d = Dyadic::new(dist[v], g.m as u32);
                let d = metric::distance(x, y).ok();
                let c = metric::count_geodesics(x, y).ok();
                if d.as_ref() != Some(&bfs_d) || c.map(|c| c as u128) != Some(count[v]) {
                    res.mismatches.push(Mismatch {
                        x: x.clone(),
                        y: y.clone(),
                        bfs_distance: bfs_d,
                        bfs_count: count[v],
                        distance: d,
                        count: c,
                    });
                }
                if res.max.is_none_or(|(best, _)| count[v] > best) {
                    res.max = Some((count[v], v));
                }
            }
            res
        })
        .collect();

    let mut report = VerifyReport {
        n: g.n,
        m: g.m,
        vertices: nv,
        edges: g.edge_count,
        pairs: 0,
        mismatches: Vec::new(),
        max_count: 0,
        max_pair: None,
    };
    for (u, r) in per_source.into_iter().enumerate() {
        report.pairs += r.pairs;
        report.mismatches.extend(r.mismatches);
        if let Some((c, v)) = r.max {
            if c > report.max_count {
                report.max_count = c;
                report.max_pair = Some((g.address(u).clone(), g.address(v).clone()));
            }
        }
    }
    report
}
