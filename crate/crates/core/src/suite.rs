//! End-to-end verification suite. Each check returns a pass/fail line with a
//! short detail string; `Mode::Full` widens the parameter ranges.

use std::time::{Duration, Instant};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::extremal::{furedi_value, reiman_bound, turan_bruteforce, turan_lower_bound};
use crate::graph::{
    claim_c4_inequality, convexity_bound, count_c4, count_c4_bruteforce, is_c4_free, neighborhood_family,
    up_p2_stats, Graph,
};
use crate::incidence::{bruck_ryser_excluded, extend_one_intersecting, verify_projective_plane, IncidenceStructure};
use crate::plane::ProjectivePlane;
use crate::polarity::{degree_q_independence, orthogonal_polarity_graph, special_vertex_w, PolarityGraph};
use crate::supersat::{add_edge_check, halfway_bound_check, matching_experiment_on, random_supersat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {} ({} ms): {}", self.id, self.name, self.elapsed_ms, self.detail)
    }
}

pub const CHECKS: [(u8, &str); 12] = [
    (1, "plane axioms"),
    (2, "orthogonal polarity graph exactness"),
    (3, "single added edge census"),
    (4, "matching construction count"),
    (5, "halfway lower bound"),
    (6, "random construction upper bound"),
    (7, "4-cycle counting oracle"),
    (8, "counting identities"),
    (9, "Turan numbers at desk scale"),
    (10, "Bruck-Ryser exclusions"),
    (11, "neighborhood family diagnostic"),
    (12, "prime window lower bound chain"),
];

type Outcome = (bool, String);

/// Runs check `id` (1-based).
pub fn run_check(id: u8, mode: Mode) -> Option<CheckResult> {
    let (_, name) = *CHECKS.iter().find(|(i, _)| *i == id)?;
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => planes(mode),
        2 => er_exactness(mode),
        3 => edge_census(mode),
        4 => matchings(mode),
        5 => halfway(mode),
        6 => random_construction(mode),
        7 => counting_oracle(mode),
        8 => identities(mode),
        9 => turan_values(mode),
        10 => bruck_ryser(mode),
        11 => family_diagnostic(mode),
        12 => prime_chain(mode),
        _ => unreachable!(),
    };
    Some(CheckResult { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() as u64 })
}

pub fn run_all(mode: Mode) -> Vec<CheckResult> {
    CHECKS.iter().filter_map(|&(id, _)| run_check(id, mode)).collect()
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() <= limit
}

fn er(q: u64) -> Result<PolarityGraph, String> {
    orthogonal_polarity_graph(q).map_err(|e| format!("q={q}: {e}"))
}

fn planes(_: Mode) -> Outcome {
    let start = Instant::now();
    let orders = [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 64];
    let failed: Vec<String> = orders
        .iter()
        .filter_map(|&q| match ProjectivePlane::from_order(q) {
            Ok(p) => {
                let v = verify_projective_plane(p.structure());
                (!v.is_pass()).then(|| format!("q={q}: {}", v.first_violation().map(|x| x.message.as_str()).unwrap_or("")))
            }
            Err(e) => Some(format!("q={q}: {e}")),
        })
        .collect();
    let fast = within(start, Duration::from_secs(60));
    let detail = format!("{} orders verified, {} failures {failed:?}, runtime limit 60 s met: {fast}", orders.len(), failed.len());
    (failed.is_empty() && fast, detail)
}

fn er_exactness(mode: Mode) -> Outcome {
    let mut orders = vec![2u64, 4, 8, 16, 32, 64, 128];
    if mode == Mode::Full {
        orders.push(256);
    }
    let mut problems = Vec::new();
    let mut slow = false;
    for &q in &orders {
        let start = Instant::now();
        let g = match er(q) {
            Ok(g) => g,
            Err(e) => {
                problems.push(e);
                continue;
            }
        };
        let n = q * q + q + 1;
        let low = g.degree_q_vertices();
        if g.graph.n() as u64 != n {
            problems.push(format!("q={q}: {} vertices", g.graph.n()));
        }
        if g.graph.m() as u64 != furedi_value(q).value {
            problems.push(format!("q={q}: {} edges", g.graph.m()));
        }
        match count_c4(&g.graph) {
            Ok(0) => {}
            other => problems.push(format!("q={q}: C4 count {other:?}")),
        }
        if low.len() as u64 != q + 1 {
            problems.push(format!("q={q}: {} degree-q vertices", low.len()));
        }
        if !degree_q_independence(&g.graph, q).holds {
            problems.push(format!("q={q}: degree-q set not independent"));
        }
        match special_vertex_w(&g) {
            Ok(w) if g.graph.neighbors(w) == &low[..] => {}
            other => problems.push(format!("q={q}: special vertex {other:?}")),
        }
        if q == 128 && !within(start, Duration::from_secs(300)) {
            slow = true;
        }
    }
    (problems.is_empty() && !slow, format!("orders {orders:?}; problems {problems:?}; q=128 over 5 min: {slow}"))
}

fn non_edges(g: &Graph) -> Vec<(u32, u32)> {
    let n = g.n() as u32;
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !g.has_edge(u, v)).collect()
}

fn edge_census(mode: Mode) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for q in [4u64, 8, 16] {
        let g = match er(q) {
            Ok(g) => g,
            Err(e) => return (false, e),
        };
        let all = non_edges(&g.graph);
        let pairs: Vec<(u32, u32)> = if q == 16 && mode == Mode::Quick {
            let mut rng = ChaCha8Rng::seed_from_u64(0x16);
            index::sample(&mut rng, all.len(), 10_000).into_iter().map(|i| all[i]).collect()
        } else {
            all
        };
        let bad = pairs
            .par_iter()
            .filter(|&&(u, v)| !add_edge_check(&g, u, v).map(|o| o.all_hold()).unwrap_or(false))
            .count();
        ok &= bad == 0;
        details.push(format!("q={q}: {} pairs, {bad} violations", pairs.len()));
    }
    (ok, details.join("; "))
}

fn matchings(mode: Mode) -> Outcome {
    let orders: Vec<u64> = match mode {
        Mode::Quick => vec![8, 16, 64],
        Mode::Full => vec![2, 4, 8, 16, 32, 64, 128],
    };
    let mut checked = 0;
    let mut failures = Vec::new();
    for q in orders {
        let g = match er(q) {
            Ok(g) => g,
            Err(e) => return (false, e),
        };
        let t_max = match mode {
            Mode::Quick => 8.min((q + 1) / 2),
            Mode::Full => (q + 1) / 2,
        };
        for t in 1..=t_max {
            checked += 1;
            match matching_experiment_on(&g, t, 0) {
                Ok(r) if r.passed() => {}
                Ok(r) => failures.push(format!("q={q} t={t}: c4={:?}", r.measured_u64("c4"))),
                Err(e) => failures.push(format!("q={q} t={t}: {e}")),
            }
        }
    }
    (failures.is_empty(), format!("{checked} (q, t) cases, count = t(q-1) failures: {failures:?}"))
}

fn halfway(mode: Mode) -> Outcome {
    let per_kind = if mode == Mode::Full { 500 } else { 100 };
    let mut details = Vec::new();
    let mut ok = true;
    for q in [4u64, 16] {
        let g = match er(q) {
            Ok(g) => g,
            Err(e) => return (false, e),
        };
        let n = g.graph.n();
        let free = non_edges(&g.graph);
        let all_pairs: Vec<(u32, u32)> =
            (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        let base = furedi_value(q).value as usize;
        let violations = (0..2 * per_kind as u64)
            .into_par_iter()
            .filter(|&i| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * q + i);
                let t = rng.gen_range(3..=50usize);
                let h = if i % 2 == 0 {
                    // polarity graph plus t random non-edges
                    let add: Vec<_> = index::sample(&mut rng, free.len(), t).into_iter().map(|k| free[k]).collect();
                    g.graph.with_changes(&add, &[]).expect("non-edges")
                } else {
                    // uniformly random graph with the same edge count
                    let es: Vec<_> =
                        index::sample(&mut rng, all_pairs.len(), base + t).into_iter().map(|k| all_pairs[k]).collect();
                    Graph::from_edges(n, &es).expect("valid pairs")
                };
                !halfway_bound_check(&h, q).map(|r| r.passed()).unwrap_or(false)
            })
            .count();
        ok &= violations == 0;
        details.push(format!("q={q}: {} graphs, {violations} violations", 2 * per_kind));
    }
    (ok, details.join("; "))
}

fn random_construction(mode: Mode) -> Outcome {
    let start = Instant::now();
    let trials = if mode == Mode::Full { 200 } else { 50 };
    let mut ok = true;
    let mut details = Vec::new();
    for t in [5u64, 50] {
        match random_supersat(16, t, trials, 7) {
            Ok(r) => {
                let frac = r.measured_f64("fraction_x_at_least_t").unwrap_or(0.0);
                let every = r.verdicts["every_trial"].holds;
                let max_y = r.measured["y_samples"].as_array().and_then(|a| a.iter().filter_map(|v| v.as_u64()).max());
                ok &= frac >= 0.15 && every;
                details.push(format!(
                    "t={t}: P(X>=t)={frac:.2} (need 0.15), max Y={max_y:?} vs bound {}, mean X={:.1}",
                    r.bounds["500(tq+t^4/q^8)"],
                    r.measured_f64("mean_x").unwrap_or(f64::NAN)
                ));
            }
            Err(e) => {
                ok = false;
                details.push(format!("t={t}: {e}"));
            }
        }
    }
    let fast = within(start, Duration::from_secs(120));
    (ok && fast, format!("{}; runtime limit 2 min met: {fast}", details.join("; ")))
}

fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("valid pairs")
}

fn counting_oracle(mode: Mode) -> Outcome {
    let count = if mode == Mode::Full { 5000 } else { 1000 };
    let mismatches: Vec<u64> = (0..count as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(7_000 + i);
            let n = rng.gen_range(4..=32);
            let p = 0.1 * (1 + i % 9) as f64;
            let g = gnp(n, p, &mut rng);
            count_c4(&g).ok() != count_c4_bruteforce(&g).ok()
        })
        .collect();
    (mismatches.is_empty(), format!("{count} graphs, mismatching seeds {mismatches:?}"))
}

/// Random maximal-by-greedy C4-free graph: scan pairs in random order and
/// keep an edge when it closes no 4-cycle.
pub fn greedy_c4_free(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut adj = vec![vec![false; n]; n];
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        let closes = nbrs[u].iter().any(|&a| nbrs[v].iter().any(|&b| b != a && adj[a][b]));
        if !closes {
            adj[u][v] = true;
            adj[v][u] = true;
            nbrs[u].push(v);
            nbrs[v].push(u);
            edges.push((u as u32, v as u32));
        }
    }
    Graph::from_edges(n, &edges).expect("valid pairs")
}

fn identities(mode: Mode) -> Outcome {
    let scale = if mode == Mode::Full { 5 } else { 1 };
    let free_bad = (0..200 * scale as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(8_000 + i);
            let n = rng.gen_range(5..=60);
            let g = greedy_c4_free(n, &mut rng);
            let s = up_p2_stats(&g, 1);
            let zero = count_c4(&g).map(|c| c == 0).unwrap_or(false);
            s.p2 + s.up != (n * (n - 1) / 2) as u64 || !zero || !is_c4_free(&g)
        })
        .count();
    let claim_bad = (0..500 * scale as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(9_000 + i);
            let n = rng.gen_range(4..=30);
            let p = rng.gen_range(0.05..0.9);
            let g = gnp(n, p, &mut rng);
            let a: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.5)).collect();
            !claim_c4_inequality(&g, &a).map(|c| c.holds).unwrap_or(false)
        })
        .count();
    let sequences = 100_000 * scale as u64;
    let convex_bad = (0..sequences)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000_000 + i);
            loop {
                let m = rng.gen_range(1..=20usize);
                let a: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=50)).collect();
                let k = rng.gen_range(1..=30u64);
                let sum: i64 = a.iter().map(|&x| x as i64).sum();
                let r_max = sum - (k * m as u64) as i64;
                if r_max < -(m as i64) {
                    continue;
                }
                let r = rng.gen_range(-(m as i64)..=r_max);
                return !convexity_bound(&a, k, r).map(|c| c.holds).unwrap_or(false);
            }
        })
        .count();
    let ok = free_bad + claim_bad + convex_bad == 0;
    let detail = format!(
        "P2+UP identity: {} C4-free graphs, {free_bad} violations; claim: {} samples, {claim_bad} violations; convexity: {sequences} sequences, {convex_bad} violations",
        200 * scale,
        500 * scale
    );
    (ok, detail)
}

fn turan_values(_: Mode) -> Outcome {
    let start = Instant::now();
    let expected = [(4usize, 4usize), (5, 6), (6, 7), (7, 9), (8, 11), (9, 13)];
    let mut problems = Vec::new();
    for (n, want) in expected {
        match turan_bruteforce(n) {
            Ok(rec) => {
                if rec.ex_value != want {
                    problems.push(format!("n={n}: got {}", rec.ex_value));
                }
                if rec.ex_value as u64 > reiman_bound(n as u64) {
                    problems.push(format!("n={n}: above the Reiman bound"));
                }
                if n == 7 && rec.ex_value as u64 != furedi_value(2).value {
                    problems.push("n=7 differs from q(q+1)^2/2 at q=2".into());
                }
            }
            Err(e) => problems.push(format!("n={n}: {e}")),
        }
    }
    let fast = within(start, Duration::from_secs(300));
    (problems.is_empty() && fast, format!("n=4..9 -> 4,6,7,9,11,13; problems {problems:?}; runtime limit met: {fast}"))
}

fn bruck_ryser(_: Mode) -> Outcome {
    let yes = [6u64, 14, 21, 22];
    let no = [2u64, 3, 4, 5, 7, 8, 9, 10, 12, 16];
    let wrong: Vec<u64> = yes
        .iter()
        .filter(|&&q| !bruck_ryser_excluded(q))
        .chain(no.iter().filter(|&&q| bruck_ryser_excluded(q)))
        .copied()
        .collect();
    (wrong.is_empty(), format!("excluded {yes:?}, allowed {no:?}; misclassified {wrong:?}"))
}

fn family_diagnostic(mode: Mode) -> Outcome {
    let delta = 0.25;
    let seeds = if mode == Mode::Full { 20 } else { 5 };
    let mut ok = true;
    let mut details = Vec::new();
    for q in [8u64, 16] {
        let g = match er(q) {
            Ok(g) => g,
            Err(e) => return (false, e),
        };
        let target = (q * q - 1) as usize;
        let f = neighborhood_family(&g.graph, q, delta);
        let base_ok = f.one_intersecting && f.size() >= target;
        ok &= base_ok;
        details.push(format!("ER_{q}: |R|={} 1-intersecting={} (need >= {target})", f.size(), f.one_intersecting));

        let edges: Vec<(u32, u32)> = g.graph.edges().collect();
        let mut sizes = Vec::new();
        let mut literal_ok = true;
        let mut shape_ok = true;
        for seed in 0..seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(11_000 + 100 * q + seed);
            let r = rng.gen_range(1..=3usize);
            let remove: Vec<_> = index::sample(&mut rng, edges.len(), r).into_iter().map(|k| edges[k]).collect();
            let h = g.graph.with_changes(&[], &remove).expect("existing edges");
            let f = neighborhood_family(&h, q, delta);
            // removing r edges leaves f(V) = q + 1 + 2r, so eps q = 2r
            let shape_bound = (q * q) as f64 - 2.0 * r as f64 - 2.0 / delta;
            literal_ok &= f.one_intersecting && f.size() >= target;
            shape_ok &= f.one_intersecting && f.size() as f64 >= shape_bound && f.b.len() as f64 <= 2.0 / delta;
            sizes.push((r, f.size(), f.one_intersecting));
        }
        ok &= literal_ok;
        details.push(format!(
            "ER_{q} minus r edges (r, |R|, 1-int) {sizes:?}: |R| >= q^2-1 in all: {literal_ok}; |R| >= q^2-2r-2/delta and |B| <= 2/delta in all: {shape_ok}"
        ));
    }
    let fano = IncidenceStructure::new(
        7,
        vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6], vec![1, 3, 5], vec![1, 4, 6], vec![2, 3, 6], vec![2, 4, 5]],
    )
    .expect("valid");
    let mut rebuilt_ok = true;
    for drop in 0..7 {
        let rest: Vec<Vec<u32>> = fano.lines().iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, l)| l.clone()).collect();
        let base = IncidenceStructure::new(7, rest).expect("valid");
        rebuilt_ok &= match extend_one_intersecting(&base, &[fano.line(drop).to_vec()]) {
            Ok(ext) => {
                let mut got = ext.structure.lines().to_vec();
                let mut want = fano.lines().to_vec();
                got.sort();
                want.sort();
                got == want && verify_projective_plane(&ext.structure).is_pass()
            }
            Err(_) => false,
        };
    }
    ok &= rebuilt_ok;
    details.push(format!("Fano minus a line extended back to the Fano plane (all 7 lines): {rebuilt_ok}"));
    (ok, details.join("; "))
}

fn prime_chain(_: Mode) -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for n in [10_000u64, 1_000_000, 100_000_000] {
        match turan_lower_bound(n) {
            Ok(lb) => {
                ok &= lb.chain_holds;
                details.push(format!(
                    "n={n}: p={} bound={} formula~{:.0} p-condition={} bound-condition={}",
                    lb.p, lb.bound, lb.floor_formula, lb.p_condition, lb.bound_condition
                ));
            }
            Err(e) => {
                ok = false;
                details.push(format!("n={n}: {e}"));
            }
        }
    }
    (ok, details.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_graphs_are_c4_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = greedy_c4_free(25, &mut rng);
            assert!(is_c4_free(&g));
            assert!(g.m() > 0);
        }
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [9, 10, 12] {
            let r = run_check(id, Mode::Quick).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(run_check(13, Mode::Quick).is_none());
    }
}
