//! Acceptance checks, one line per criterion. Run with `cargo test --test acceptance`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use sgasket::gasket::{common_cell, BaryCoord, Cell, PointAddress};
use sgasket::inequality::{self, CellUnion};
use sgasket::interpolation::{interpolate_points, ratio, CommonPath, Target};
use sgasket::measures::{self, PushforwardSpec, SelfSimilarMeasure1D};
use sgasket::metric::{self, GeodesicKind};
use sgasket::{sampling, Dyadic};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

fn addr(n: usize, w: &[u8], t: u8) -> PointAddress {
    PointAddress::new(n, w.to_vec(), t).unwrap()
}

// ---------------------------------------------------------------------------
// Level-m graph, built here from integer barycentric coordinates scaled by 2^m.

struct Graph {
    m: u32,
    coords: Vec<Vec<i64>>,
    adj: Vec<Vec<usize>>,
}

fn level_graph(n: usize, m: u32) -> Graph {
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut coords = Vec::new();
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let cells = (n as u64 + 1).pow(m);
    for code in 0..cells {
        // word letters w_1..w_m, most significant first
        let mut base = vec![0i64; n + 1];
        let mut c = code;
        for l in (1..=m).rev() {
            let letter = (c % (n as u64 + 1)) as usize;
            c /= n as u64 + 1;
            base[letter] += 1 << (m - l);
        }
        let ids: Vec<usize> = (0..=n)
            .map(|i| {
                let mut v = base.clone();
                v[i] += 1;
                let next = coords.len();
                *index.entry(v.clone()).or_insert_with(|| {
                    coords.push(v);
                    next
                })
            })
            .collect();
        for i in 0..=n {
            for j in i + 1..=n {
                let (a, b) = (ids[i].min(ids[j]), ids[i].max(ids[j]));
                edges.insert((a, b));
            }
        }
    }
    let mut adj = vec![Vec::new(); coords.len()];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    Graph { m, coords, adj }
}

impl Graph {
    fn bfs(&self, s: usize) -> (Vec<u32>, Vec<u64>) {
        let mut dist = vec![u32::MAX; self.coords.len()];
        let mut count = vec![0u64; self.coords.len()];
        dist[s] = 0;
        count[s] = 1;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
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

    fn address(&self, u: usize) -> PointAddress {
        let bary = self.coords[u].iter().map(|&c| Dyadic::new(c, self.m)).collect();
        BaryCoord::new(bary).unwrap().to_address().unwrap()
    }

    fn find(&self, p: &PointAddress) -> usize {
        let scale = Dyadic::pow2_neg(self.m);
        let want: Vec<i64> = p
            .to_bary()
            .coords()
            .iter()
            .map(|c| {
                let k = c.to_rational() / scale.to_rational();
                assert!(k.is_integer(), "{p} is not a level-{} vertex", self.m);
                k.to_integer().to_i64().unwrap()
            })
            .collect();
        self.coords.iter().position(|c| *c == want).unwrap()
    }
}

struct LevelCheck {
    pairs: usize,
    distance_mismatches: usize,
    count_mismatches: usize,
    max_count: u64,
    seconds: f64,
}

fn check_level(n: usize, m: u32) -> LevelCheck {
    let start = Instant::now();
    let g = level_graph(n, m);
    let addrs: Vec<PointAddress> = (0..g.coords.len()).map(|u| g.address(u)).collect();
    let per_source: Vec<(usize, usize, usize, u64)> = (0..addrs.len())
        .into_par_iter()
        .map(|u| {
            let (dist, count) = g.bfs(u);
            let (mut pairs, mut dm, mut cm, mut max) = (0, 0, 0, 0);
            for v in u + 1..addrs.len() {
                pairs += 1;
                let d = metric::distance(&addrs[u], &addrs[v]).unwrap();
                if d != Dyadic::new(dist[v], m) {
                    dm += 1;
                }
                let c = metric::count_geodesics(&addrs[u], &addrs[v]).unwrap() as u64;
                if c != count[v] {
                    cm += 1;
                }
                max = max.max(count[v]);
            }
            (pairs, dm, cm, max)
        })
        .collect();
    let mut out = LevelCheck {
        pairs: 0,
        distance_mismatches: 0,
        count_mismatches: 0,
        max_count: 0,
        seconds: 0.0,
    };
    for (p, dm, cm, max) in per_source {
        out.pairs += p;
        out.distance_mismatches += dm;
        out.count_mismatches += cm;
        out.max_count = out.max_count.max(max);
    }
    out.seconds = start.elapsed().as_secs_f64();
    out
}

// ---------------------------------------------------------------------------
// ν_n distribution function from binary digits.

fn cdf_oracle(n: usize, x: &Dyadic) -> BigRational {
    let w0 = rat(n as i64, n as i64 + 1);
    let w1 = rat(1, n as i64 + 1);
    if *x == Dyadic::one() {
        return BigRational::one();
    }
    let mut total = BigRational::zero();
    let mut prefix = BigRational::one();
    for j in 1..=x.exponent() {
        if x.digit(j) {
            total += &prefix * &w0;
            prefix *= &w1;
        } else {
            prefix *= &w0;
        }
    }
    total
}

/// Integer masses `n^{#zero digits}` of the `2^depth` dyadic intervals, out of `(n+1)^depth`.
fn cell_masses(n: u64, depth: u32) -> Vec<u64> {
    (0..1u64 << depth)
        .map(|k| n.pow(depth - k.count_ones()))
        .collect()
}

fn phi_oracle(n: usize, x: f64) -> f64 {
    let d = 2f64.ln() / ((n as f64 + 1.0) / n as f64).ln();
    (1.0 - (1.0 - x).powf(d)).powf(1.0 / d)
}

// ---------------------------------------------------------------------------

struct Levels {
    rows: Vec<(usize, u32, LevelCheck)>,
}

fn levels() -> Levels {
    let mut rows = Vec::new();
    for m in 1..=5 {
        rows.push((2, m, check_level(2, m)));
    }
    for m in 1..=4 {
        rows.push((3, m, check_level(3, m)));
    }
    Levels { rows }
}

impl Levels {
    fn get(&self, n: usize, m: u32) -> &LevelCheck {
        &self.rows.iter().find(|r| r.0 == n && r.1 == m).unwrap().2
    }
}

fn criterion_1(lv: &Levels) -> Outcome {
    let a = lv.get(2, 5);
    let b = lv.get(3, 3);
    let secs = a.seconds + b.seconds;
    let msg = format!(
        "n=2 m=5: {} pairs, {} mismatches; n=3 m=3: {} pairs, {} mismatches; {secs:.1}s",
        a.pairs, a.distance_mismatches, b.pairs, b.distance_mismatches
    );
    if a.pairs == 366 * 365 / 2 && a.distance_mismatches == 0 && b.distance_mismatches == 0 && secs < 60.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2(lv: &Levels) -> Outcome {
    let max2 = lv.rows.iter().filter(|r| r.0 == 2).map(|r| r.2.max_count).max().unwrap();
    let max3 = lv.rows.iter().filter(|r| r.0 == 3).map(|r| r.2.max_count).max().unwrap();
    let count_mm: usize = lv.rows.iter().map(|r| r.2.count_mismatches).sum();
    let msg = format!("max count {max2} (n=2, m<=5), {max3} (n=3, m<=4); {count_mm} count mismatches");
    if max2 == 5 && max3 == 8 && count_mm == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3() -> Outcome {
    let x = addr(3, &[2, 0, 2], 1);
    let y = addr(3, &[3, 0, 3], 1);
    let g = level_graph(3, 4);
    let (dist, count) = g.bfs(g.find(&x));
    let bfs_d = Dyadic::new(dist[g.find(&y)], 4);
    let bfs_c = count[g.find(&y)];
    let d = metric::distance(&x, &y).map_err(|e| e.to_string())?;
    let gs = metric::enumerate_geodesics(&x, &y).map_err(|e| e.to_string())?;
    let listed: Vec<Vec<PointAddress>> = [
        [[2, 0, 2], [3, 0, 3]],
        [[2, 0, 2], [3, 0, 1]],
        [[2, 0, 1], [3, 0, 3]],
        [[2, 0, 1], [3, 0, 1]],
    ]
    .iter()
    .flat_map(|[u, v]| {
        [
            vec![addr(3, u, 3), addr(3, &[2, 0], 3), addr(3, &[2], 3), addr(3, &[3, 0], 2), addr(3, v, 2)],
            vec![addr(3, u, 0), addr(3, &[2], 0), addr(3, &[3], 0), addr(3, v, 0)],
        ]
    })
    .collect();
    // each listed route must have length d(x, y) in the graph
    let mut route_ok = true;
    for route in &listed {
        let mut pts = vec![x.clone()];
        pts.extend(route.iter().cloned());
        pts.push(y.clone());
        let mut len = 0;
        for w in pts.windows(2) {
            len += g.bfs(g.find(&w[0])).0[g.find(&w[1])];
        }
        route_ok &= Dyadic::new(len, 4) == bfs_d;
    }
    // and correspond to exactly one enumerated geodesic, of the right kind
    let mut matched = HashSet::new();
    for (idx, route) in listed.iter().enumerate() {
        let hits: Vec<usize> = (0..gs.len())
            .filter(|&i| route.iter().all(|p| gs[i].contains(p)))
            .collect();
        let kind = if idx % 2 == 0 { GeodesicKind::P1 } else { GeodesicKind::P2 };
        if hits.len() == 1 && gs[hits[0]].kind() == kind {
            matched.insert(hits[0]);
        }
    }
    let p1 = gs.iter().filter(|g| g.kind() == GeodesicKind::P1).count();
    let msg = format!(
        "d = {d} (graph {bfs_d}), {} geodesics (graph {bfs_c}), {p1} P1, {} listed routes matched",
        gs.len(),
        matched.len()
    );
    if d == Dyadic::one() && bfs_d == d && gs.len() == 8 && bfs_c == 8 && p1 == 4 && matched.len() == 8 && route_ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Outcome {
    let x = addr(2, &[1, 1], 0);
    let y = addr(2, &[2, 2], 0);
    let g = level_graph(2, 3);
    let (dist, count) = g.bfs(g.find(&x));
    let j = g.find(&y);
    let d = metric::distance(&x, &y).map_err(|e| e.to_string())?;
    let gs = metric::enumerate_geodesics(&x, &y).map_err(|e| e.to_string())?;
    let p1 = gs.iter().filter(|g| g.kind() == GeodesicKind::P1).count();
    let p2 = gs.iter().filter(|g| g.kind() == GeodesicKind::P2).count();
    let msg = format!("d = {d}, {} geodesics ({p1} P1 + {p2} P2), graph {} / {}", gs.len(), Dyadic::new(dist[j], 3), count[j]);
    if d == Dyadic::one() && Dyadic::new(dist[j], 3) == d && count[j] == 5 && (p1, p2) == (4, 1) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Outcome {
    let half = SelfSimilarMeasure1D::standard(2)
        .cdf(&Dyadic::new(1, 1))
        .map_err(|e| e.to_string())?;
    let mut rng = sampling::rng(5);
    let mut failures = 0;
    let mut checked = 0;
    for n in 2..=10 {
        let nu = SelfSimilarMeasure1D::standard(n);
        let (w0, w1) = (rat(n as i64, n as i64 + 1), rat(1, n as i64 + 1));
        for _ in 0..1000 {
            let bits = rng.gen_range(0..=20);
            let x = Dyadic::new(rng.gen_range(0..=(1u64 << bits)), bits);
            let fx = nu.cdf(&x).unwrap();
            let left = nu.cdf(&x.half()).unwrap();
            let right = nu.cdf(&(x.half() + Dyadic::new(1, 1))).unwrap();
            checked += 1;
            if left != &w0 * &fx || right != &w0 + &w1 * &fx || fx != cdf_oracle(n, &x) {
                failures += 1;
            }
        }
        for depth in 1..=12 {
            let h = nu.histogram(depth).unwrap();
            let masses = h.exact_masses().ok_or("histogram not exact")?;
            let mut acc = BigRational::zero();
            for (k, mass) in masses.iter().enumerate() {
                acc += mass;
                if acc != cdf_oracle(n, &Dyadic::new(k as u64 + 1, depth)) {
                    failures += 1;
                }
            }
        }
    }
    let msg = format!("nu_2([0,1/2]) = {half}; {checked} self-similarity points, {failures} failures");
    if half == rat(2, 3) && failures == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Outcome {
    let mut rng = sampling::rng(6);
    let mut worst: f64 = 0.0;
    let mut exact_failures = 0;
    let mut configs = 0;
    for i in 0..50 {
        let n = 2 + i % 3;
        let cp: CommonPath = if i % 2 == 0 {
            sampling::random_cell_to_point(&mut rng, n, 3)
        } else {
            sampling::random_regular_cells(&mut rng, n, 2)
        };
        let t = sampling::random_t_in_window(&mut rng, &cp, 16);
        let a = cp.a();
        match cp.b() {
            Target::Point(b) => {
                let h = measures::eta_cell_to_point(a, b, &t, 8).map_err(|e| e.to_string())?;
                let want = BigRational::new(BigInt::one(), BigInt::from(n + 1).pow(a.level() as u32));
                if h.total_exact() != Some(want) {
                    exact_failures += 1;
                }
            }
            Target::Cell(b) => {
                let h = measures::eta_on_common_path(&cp, &t, 8).map_err(|e| e.to_string())?;
                let want = ((n + 1) as f64).powi(-((a.level() + b.level()) as i32));
                worst = worst.max((h.total() - want).abs());
            }
        }
        configs += 1;
    }
    let msg = format!("{configs} configurations; cell-to-point exact failures {exact_failures}, cell-to-cell max error {worst:.2e}");
    if exact_failures == 0 && worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("tilde-nu");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, q) in [(1, 10), (1, 2), (3, 4), (1, 1)] {
        let spec = PushforwardSpec::standard(2, rat(p, q), 1, 1).map_err(|e| e.to_string())?;
        let grid = measures::tilde_nu_histogram_grid(&spec, 8).map_err(|e| e.to_string())?;
        let (ifs, _) = measures::tilde_nu_histogram_ifs(&spec, 8, 2000, 1e-14).map_err(|e| e.to_string())?;
        let l1 = grid.l1_distance(&ifs).map_err(|e| e.to_string())?;
        ok &= l1 <= 0.02 && (grid.total() - 1.0).abs() < 1e-12 && (ifs.total() - 1.0).abs() < 1e-12;
        for (name, h) in [("grid", &grid), ("ifs", &ifs)] {
            std::fs::write(dir.join(format!("t{p}_{q}-{name}.csv")), h.to_csv()).map_err(|e| e.to_string())?;
        }
        parts.push(format!("t={p}/{q}: {l1:.4}"));
    }
    let msg = format!("L1 {} (CSVs in {})", parts.join(", "), dir.display());
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Outcome {
    // entropy of (n/(n+1), 1/(n+1)) in bits, doubled for the product measure
    let formula = |n: usize| {
        let p = n as f64 / (n as f64 + 1.0);
        let q = 1.0 / (n as f64 + 1.0);
        -2.0 * (p * p.log2() + q * q.log2())
    };
    let (d8, d9) = (measures::pair_dimension(8), measures::pair_dimension(9));
    let nu2 = measures::nu_dimension(2);
    let msg = format!("pair_dimension(8) = {d8:.12}, pair_dimension(9) = {d9:.12}, nu_dimension(2) = {nu2:.9}");
    if d8 > 1.0
        && d9 < 1.0
        && (d8 - formula(8)).abs() <= 1e-12
        && (d9 - formula(9)).abs() <= 1e-12
        && (nu2 - 0.918296).abs() <= 1e-6
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Outcome {
    let depth = 12;
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    let mut lemma_max = f64::NEG_INFINITY;
    for n in 2..=10 {
        let rows: Vec<f64> = (0..=(1u64 << depth))
            .into_par_iter()
            .map(|k| {
                let x = Dyadic::new(k, depth);
                phi_oracle(n, x.to_f64()) - to_f64(&cdf_oracle(n, &x))
            })
            .collect();
        for slack in rows {
            if slack < -1e-12 {
                violations += 1;
            }
            min_slack = min_slack.min(slack);
        }
        let report = inequality::check_gineq(n, depth).map_err(|e| e.to_string())?;
        if !report.passed {
            violations += 1;
        }
        let nf = n as f64;
        let grid = 10_000;
        for k in 0..=grid {
            let x = 0.5 * k as f64 / grid as f64;
            lemma_max = lemma_max.max(nf * phi_oracle(n, 2.0 * x) - (nf + 1.0) * phi_oracle(n, x));
            let y = 0.5 + x;
            lemma_max = lemma_max.max(phi_oracle(n, 2.0 * y - 1.0) - (nf + 1.0) * phi_oracle(n, y) + nf);
        }
        let lib = inequality::check_phi_lemma(n, grid).map_err(|e| e.to_string())?;
        if !lib.passed {
            violations += 1;
        }
    }
    let msg = format!("{violations} violations, min slack {min_slack:.3e}; lemma max violation {lemma_max:.3e}");
    if violations == 0 && lemma_max <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_10() -> Outcome {
    let depth = 8u32;
    let bins = 1usize << depth;
    let mut failures = 0;
    let mut checked = 0u64;
    for n in 2..=10u64 {
        let masses = cell_masses(n, depth);
        let mut prefix = vec![0u64; bins + 1];
        for k in 0..bins {
            prefix[k + 1] = prefix[k] + masses[k];
        }
        // cross-check the library histogram against the integer masses
        let h = SelfSimilarMeasure1D::standard(n as usize).histogram(depth).unwrap();
        let denom = BigRational::from_integer(BigInt::from(n + 1).pow(depth));
        for (k, m) in h.exact_masses().unwrap().iter().enumerate() {
            if m * &denom != BigRational::from_integer(masses[k].into()) {
                failures += 1;
            }
        }
        for x in 0..=bins {
            let head = prefix[x];
            let tail = prefix[bins] - prefix[bins - x];
            for a in 0..=bins - x {
                let mid = prefix[a + x] - prefix[a];
                checked += 1;
                if !(head >= mid && mid >= tail) {
                    failures += 1;
                }
            }
        }
    }
    let msg = format!("{checked} (n, a, x) triples, {failures} failures");
    if failures == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_11() -> Outcome {
    let mut rng = sampling::rng(11);
    // connected unions
    let configs: Vec<(CellUnion, CellUnion, BigRational)> = (0..200)
        .map(|i| sampling::random_union_config(&mut rng, 2 + i % 3))
        .collect();
    let union_violations: usize = configs
        .par_iter()
        .map(|(a, b, t)| {
            let report = inequality::check_main_inequality(a, b, t).unwrap();
            let n = a.n();
            let e = 2f64.ln() / ((n + 1) as f64).ln();
            let d = 2f64.ln() / ((n as f64 + 1.0) / n as f64).ln();
            let tf = to_f64(t);
            let rhs = (1.0 - tf) * to_f64(&a.measure()).powf(e) + tf * to_f64(&b.measure()).powf(e);
            let mut bad = usize::from(!report.passed);
            for path in &report.paths {
                let entry = PointAddress::parse(n, &path.entry).unwrap();
                let exit = PointAddress::parse(n, &path.exit).unwrap();
                let h1 = (1.0 - tf) * projection(a.cells(), &entry) + tf * projection(b.cells(), &exit);
                let lhs = 1.0 - (1.0 - h1).powf(d);
                if lhs < rhs - 1e-12 || (h1 - to_f64(&path.h1.parse::<BigRational>().unwrap())).abs() > 1e-15 {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    // whole cells
    let mut cell_violations = 0;
    for i in 0..100 {
        let n = 2 + i % 3;
        let cp = sampling::random_regular_cells(&mut rng, n, 3);
        let mut t = sampling::random_t_in_window(&mut rng, &cp, 16);
        if t.is_zero() || t.is_one() {
            t = (cp.t1f() + cp.t2i()) / BigRational::from_integer(2.into());
        }
        let Target::Cell(b) = cp.b() else { unreachable!() };
        let report = inequality::check_cell_inequality_on(&cp, &t).map_err(|e| e.to_string())?;
        let h1 = (BigRational::one() - &t) * cp.a().side().to_rational() + &t * b.side().to_rational();
        let e = 2f64.ln() / ((n + 1) as f64).ln();
        let tf = to_f64(&t);
        let rhs = (1.0 - tf) * ((n + 1) as f64).powi(-(cp.a().level() as i32)).powf(e)
            + tf * ((n + 1) as f64).powi(-(b.level() as i32)).powf(e);
        if !report.passed || report.h1 != h1.to_string() || to_f64(&h1) < rhs - 1e-12 {
            cell_violations += 1;
        }
    }
    // the symmetric equal-level case is an equality
    let sym = inequality::check_cell_inequality(
        &Cell::from_letters(2, vec![1, 1]).unwrap(),
        &Cell::from_letters(2, vec![2, 2]).unwrap(),
        &ratio(1, 2),
    )
    .map_err(|e| e.to_string())?;
    let msg = format!(
        "{union_violations} violations in 200 unions, {cell_violations} in 100 cell pairs; symmetric slack {:.1e}",
        sym.slack
    );
    if union_violations == 0 && cell_violations == 0 && sym.sharp && sym.slack.abs() <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Lebesgue measure of the set of distances from `corner` to a union of cells,
/// each cell contributing the interval between its nearest and farthest corners.
fn projection(cells: &[Cell], corner: &PointAddress) -> f64 {
    let mut intervals: Vec<(f64, f64)> = cells
        .iter()
        .map(|c| {
            let ds: Vec<f64> = c
                .corners()
                .iter()
                .map(|p| if p.same_point(corner) { 0.0 } else { metric::distance(p, corner).unwrap().to_f64() })
                .collect();
            let lo = ds.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ds.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect();
    intervals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    let mut reach = f64::NEG_INFINITY;
    for (lo, hi) in intervals {
        let lo = lo.max(reach);
        if hi > lo {
            total += hi - lo;
        }
        reach = reach.max(hi);
    }
    total
}

fn criterion_12() -> Outcome {
    let mut rng = sampling::rng(12);
    let mut failures = Vec::new();
    let mut corner_samples = 0;
    for i in 0..100 {
        let n = 2 + i % 3;
        let cp = if i % 2 == 0 {
            sampling::random_regular_cells(&mut rng, n, 2)
        } else {
            sampling::random_cell_to_point(&mut rng, n, 2)
        };
        let t = (6..)
            .find_map(|bits| sampling::random_dyadic_in(&mut rng, cp.t1f(), cp.t2i(), bits))
            .unwrap();
        let a = sampling::random_vertex_in(&mut rng, cp.a(), 2);
        let b = match cp.b() {
            Target::Cell(c) => sampling::random_vertex_in(&mut rng, c, 2),
            Target::Point(p) => p.clone(),
        };
        let z = cp.z_t(&t.to_rational(), &a, &b).map_err(|e| e.to_string())?;
        // direct route: the point at fraction t of every geodesic from a to b
        let d = |p: &PointAddress, q: &PointAddress| {
            if p.same_point(q) {
                Dyadic::zero()
            } else {
                metric::distance(p, q).unwrap()
            }
        };
        let dab = d(&a, &b);
        let along = interpolate_points(&a, &b, &t).map_err(|e| e.to_string())?;
        let expected = (t.clone() * dab.clone() - d(&a, cp.entry())).to_rational();
        let through = d(&a, cp.entry()) + cp.length().clone() + d(cp.exit(), &b) == dab;
        // a corner of A other than the entry (or of B other than the exit) can
        // tie with a route around the common path, adding a second point
        let off_corner = |c: &Cell, p: &PointAddress, keep: &PointAddress| {
            !p.same_point(keep) && c.corners().iter().any(|q| q.same_point(p))
        };
        let tie = off_corner(cp.a(), &a, cp.entry())
            || matches!(cp.b(), Target::Cell(c) if off_corner(c, &b, cp.exit()));
        corner_samples += usize::from(tie);
        let member = z.arclength == expected
            && z.address.as_ref().is_some_and(|p| along.iter().any(|q| q.same_point(p)));
        let same = member && (tie || along.len() == 1);
        if !(same && through) {
            failures.push(format!(
                "n={n} {} a={a} b={b} t={t}: z={} {:?}, direct {:?} at {expected}, through={through}",
                serde_json::to_string(&cp).unwrap(),
                z.arclength,
                z.address.map(|p| p.to_string()),
                along.iter().map(|p| p.to_string()).collect::<Vec<_>>()
            ));
        }
    }
    let msg = format!(
        "100 samples ({corner_samples} at corners of A or B), {} failures {}",
        failures.len(),
        failures.join("; ")
    );
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_13() -> Outcome {
    let mut rng = sampling::rng(13);
    let triples: Vec<_> = (0..10_000)
        .map(|i| {
            let n = 2 + i % 3;
            let depth = rng.gen_range(1..=7);
            (
                sampling::random_vertex(&mut rng, n, depth),
                sampling::random_vertex(&mut rng, n, depth),
                sampling::random_vertex(&mut rng, n, depth),
            )
        })
        .collect();
    let d = |p: &PointAddress, q: &PointAddress| {
        if p.same_point(q) {
            Dyadic::zero()
        } else {
            metric::distance(p, q).unwrap()
        }
    };
    let failures: usize = triples
        .par_iter()
        .map(|(x, y, z)| {
            let (xy, yx, yz, xz) = (d(x, y), d(y, x), d(y, z), d(x, z));
            let mut bad = usize::from(xy != yx || xz > xy.clone() + yz);
            if !x.same_point(y) {
                let cell = common_cell(x, y).unwrap();
                bad += usize::from(xy > cell.side());
            }
            bad
        })
        .sum();
    let msg = format!("10000 triples, {failures} failures");
    if failures == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let lv = levels();
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence (distances)", Box::new(|| criterion_1(&lv))),
        ("geodesic-count caps", Box::new(|| criterion_2(&lv))),
        ("example of eight", Box::new(criterion_3)),
        ("five-geodesic configuration", Box::new(criterion_4)),
        ("nu_n correctness", Box::new(criterion_5)),
        ("pushforward mass", Box::new(criterion_6)),
        ("tilde-nu cross-validation", Box::new(criterion_7)),
        ("dimension threshold", Box::new(criterion_8)),
        ("Phi bound", Box::new(criterion_9)),
        ("interval monotonicity", Box::new(criterion_10)),
        ("main inequality", Box::new(criterion_11)),
        ("commuting identity", Box::new(criterion_12)),
        ("metric axioms", Box::new(criterion_13)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, msg) = match check() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("[{tag}] {:>2}. {name}: {msg} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
