//! Supersaturation experiments on polarity graphs: adding single edges,
//! matchings and random edge sets, and checking the resulting 4-cycle counts.

use std::collections::HashSet;
use std::time::Instant;

use rand::distributions::{Bernoulli, Distribution};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{c4_through_edge, count_c4, Cycle4, Graph, GraphError};
use crate::polarity::{
    degree_q_independence, orthogonal_polarity_graph, special_vertex_w, PolarityError, PolarityGraph,
};
use crate::primes::prime_power;
use crate::report::{ExperimentReport, Params, Status};

/// Largest added-edge set accepted by [`upper_count_audit`].
pub const AUDIT_MAX_ADDED: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupersatError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Polarity(#[from] PolarityError),
    #[error("odd order {0}")]
    OddOrder(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn timed(start: Instant, mut report: ExperimentReport) -> ExperimentReport {
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    report
}

/// Result of adding one non-edge to a polarity graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddEdgeOutcome {
    pub degrees: (usize, usize),
    pub count: u64,
    pub cycles: Vec<Cycle4>,
    pub in_range: bool,
    pub low_iff_both_q: bool,
    pub all_through_uv: bool,
    pub pairwise_share_only_uv: bool,
}

impl AddEdgeOutcome {
    pub fn all_hold(&self) -> bool {
        self.in_range && self.low_iff_both_q && self.all_through_uv && self.pairwise_share_only_uv
    }
}

fn edge_key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Whether the cycles pairwise share no edge other than `uv`.
fn share_only(cycles: &[Cycle4], u: u32, v: u32) -> bool {
    let mut seen = HashSet::new();
    for c in cycles {
        for i in 0..4 {
            let e = edge_key(c[i], c[(i + 1) % 4]);
            if e != edge_key(u, v) && !seen.insert(e) {
                return false;
            }
        }
    }
    true
}

/// Adds the non-edge `uv` to `g` and checks the resulting 4-cycles.
pub fn add_edge_check(g: &PolarityGraph, u: u32, v: u32) -> Result<AddEdgeOutcome, SupersatError> {
    if u == v {
        return Err(GraphError::SelfLoop(u).into());
    }
    if g.graph.has_edge(u, v) {
        return Err(GraphError::AlreadyAnEdge(u, v).into());
    }
    let q = g.q;
    let h = g.graph.with_changes(&[(u, v)], &[])?;
    let count = count_c4(&h)?;
    let cycles = c4_through_edge(&h, u, v)?;
    let degrees = (g.graph.degree(u), g.graph.degree(v));
    let both_q = degrees.0 as u64 == q && degrees.1 as u64 == q;
    Ok(AddEdgeOutcome {
        degrees,
        in_range: count + 1 >= q && count <= q + 1,
        low_iff_both_q: (count + 1 == q) == both_q,
        all_through_uv: cycles.len() as u64 == count,
        pairwise_share_only_uv: share_only(&cycles, u, v),
        count,
        cycles,
    })
}

/// Report form of [`add_edge_check`].
pub fn add_edge_experiment(g: &PolarityGraph, u: u32, v: u32) -> Result<ExperimentReport, SupersatError> {
    let start = Instant::now();
    let o = add_edge_check(g, u, v)?;
    let q = g.q;
    let mut r = ExperimentReport::new("add-edge", Params { q, ..Default::default() });
    r.measure("u", u).measure("v", v).measure("degree_u", o.degrees.0).measure("degree_v", o.degrees.1);
    r.measure("c4", o.count).measure("cycles_through_uv", o.cycles.len());
    r.bound("lower", q - 1).bound("upper", q + 1);
    r.verdict("range", "q-1 <= #C4 <= q+1", o.in_range, Status::Required);
    r.verdict("low_iff_degree_q", "#C4 = q-1 iff d(u) = d(v) = q", o.low_iff_both_q, Status::Required);
    r.verdict("through_uv", "every 4-cycle contains uv", o.all_through_uv, Status::Required);
    r.verdict("edge_disjoint", "any two 4-cycles share only uv", o.pairwise_share_only_uv, Status::Required);
    Ok(timed(start, r))
}

fn check_even_prime_power(q: u64) -> Result<(), SupersatError> {
    if prime_power(q).is_none() {
        return Err(SupersatError::NotPrimePower(q));
    }
    if q % 2 == 1 {
        return Err(SupersatError::OddOrder(q));
    }
    Ok(())
}

/// The `2t` degree-`q` vertices used for the matching, paired consecutively.
pub fn matching_pairs(g: &PolarityGraph, t: u64, seed: u64) -> Result<Vec<(u32, u32)>, SupersatError> {
    let mut low = g.degree_q_vertices();
    if 2 * t > low.len() as u64 {
        return Err(SupersatError::OutOfRange(format!("t = {t} needs {} degree-q vertices, have {}", 2 * t, low.len())));
    }
    if seed != 0 {
        low.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    Ok(low[..2 * t as usize].chunks(2).map(|p| (p[0], p[1])).collect())
}

/// Adds a matching of size `t` among degree-`q` vertices of the given
/// orthogonal polarity graph and counts 4-cycles.
pub fn matching_experiment_on(g: &PolarityGraph, t: u64, seed: u64) -> Result<ExperimentReport, SupersatError> {
    let start = Instant::now();
    let q = g.q;
    check_even_prime_power(q)?;
    if t > (q + 1) / 2 {
        return Err(SupersatError::OutOfRange(format!("t = {t} exceeds (q+1)/2")));
    }
    let independent = degree_q_independence(&g.graph, q);
    let w = special_vertex_w(g)?;
    let low = g.degree_q_vertices();
    let in_nw = g.graph.neighbors(w) == &low[..];
    let pairs = matching_pairs(g, t, seed)?;
    let h = g.graph.with_changes(&pairs, &[])?;
    let count = count_c4(&h)?;
    let expected = t * (q - 1);
    let mut r = ExperimentReport::new("matching", Params { q, t: Some(t), seed: Some(seed), trials: None });
    r.measure("c4", count).measure("edges", h.m()).measure("matching", &pairs).measure("w", w);
    r.bound("t(q-1)", expected);
    r.verdict("exact", "#C4 = t(q-1)", count == expected, Status::Required);
    r.verdict("independent", "degree-q vertices are pairwise nonadjacent", independent.holds, Status::Required);
    r.verdict("neighborhood_of_w", "degree-q vertices = N(w)", in_nw, Status::Required);
    Ok(timed(start, r))
}

/// [`matching_experiment_on`] for the orthogonal polarity graph of order `q`.
pub fn matching_experiment(q: u64, t: u64, seed: u64) -> Result<ExperimentReport, SupersatError> {
    check_even_prime_power(q)?;
    matching_experiment_on(&orthogonal_polarity_graph(q)?, t, seed)
}

/// Per-trial outcome of [`random_supersat`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trial {
    pub added: u64,
    pub c4: u64,
}

/// Adds each non-edge of `g` independently with probability `alpha`, drawing
/// once per non-adjacent pair `u < v` in lexicographic order.
pub fn random_trial(g: &Graph, alpha: f64, seed: u64, trial: u64) -> Result<(Graph, u64), SupersatError> {
    let coin = Bernoulli::new(alpha).map_err(|e| SupersatError::OutOfRange(format!("alpha = {alpha}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = g.n() as u32;
    let mut add = Vec::new();
    for u in 0..n {
        let nu = g.neighbors(u);
        let mut k = nu.partition_point(|&x| x <= u);
        for v in u + 1..n {
            if k < nu.len() && nu[k] == v {
                k += 1;
                continue;
            }
            if coin.sample(&mut rng) {
                add.push((u, v));
            }
        }
    }
    let added = add.len() as u64;
    Ok((g.with_changes(&add, &[])?, added))
}

/// Random supersaturation construction: `alpha = 4t / (q^3 (q+1))`.
pub fn random_supersat(q: u64, t: u64, trials: u64, seed: u64) -> Result<ExperimentReport, SupersatError> {
    let start = Instant::now();
    if prime_power(q).is_none() {
        return Err(SupersatError::NotPrimePower(q));
    }
    let denom = q * q * q * (q + 1);
    if 4 * t > denom {
        return Err(SupersatError::OutOfRange(format!("4t = {} exceeds q^3(q+1) = {denom}", 4 * t)));
    }
    if trials == 0 {
        return Err(SupersatError::OutOfRange("trials must be positive".into()));
    }
    let g = orthogonal_polarity_graph(q)?;
    let n = g.graph.n() as u64;
    let non_edges = n * (n - 1) / 2 - g.graph.m() as u64;
    debug_assert_eq!(non_edges, denom / 2);
    let alpha = 4.0 * t as f64 / denom as f64;
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (h, added) = random_trial(&g.graph, alpha, seed, i)?;
            Ok(Trial { added, c4: count_c4(&h)? })
        })
        .collect::<Result<_, SupersatError>>()?;

    let bound = 500.0 * (t as f64 * q as f64 + (t as f64).powi(4) / (q as f64).powi(8));
    let hits: Vec<&Trial> = results.iter().filter(|r| r.added >= t).collect();
    let frac = hits.len() as f64 / trials as f64;
    let mean_x = results.iter().map(|r| r.added as f64).sum::<f64>() / trials as f64;
    let mean_y = results.iter().map(|r| r.c4 as f64).sum::<f64>() / trials as f64;
    let sigma = (non_edges as f64 * alpha * (1.0 - alpha)).sqrt();
    let min_hit = hits.iter().map(|r| r.c4).min();
    let all_within = results.iter().all(|r| (r.c4 as f64) <= bound);

    let mut r = ExperimentReport::new("random", Params { q, t: Some(t), seed: Some(seed), trials: Some(trials) });
    r.measure("alpha", alpha).measure("x_samples", results.iter().map(|r| r.added).collect::<Vec<_>>());
    r.measure("y_samples", results.iter().map(|r| r.c4).collect::<Vec<_>>());
    r.measure("fraction_x_at_least_t", frac).measure("mean_x", mean_x).measure("mean_y", mean_y);
    r.measure("min_y_given_x_at_least_t", min_hit);
    r.bound("500(tq+t^4/q^8)", bound).bound("expected_x", 2 * t).bound("sigma_x", sigma).bound("non_edges", non_edges);
    r.bound("fraction_x_at_least_t", 0.22);
    r.verdict(
        "construction",
        "min Y over trials with X >= t is <= 500(tq+t^4/q^8)",
        min_hit.is_some_and(|y| y as f64 <= bound),
        Status::Required,
    );
    r.verdict("every_trial", "Y <= 500(tq+t^4/q^8) in every trial", all_within, Status::Informative);
    r.verdict("probability", "P(X >= t) >= 0.22", frac >= 0.22, Status::Informative);
    r.verdict(
        "mean_x",
        "|mean X - 2t| <= 5 sigma / sqrt(trials)",
        (mean_x - 2.0 * t as f64).abs() <= 5.0 * sigma / (trials as f64).sqrt(),
        Status::Informative,
    );
    Ok(timed(start, r))
}

/// Checks `#C4 >= (tq - 2.5q - t) / 2` for a graph on `q^2+q+1` vertices
/// with `q(q+1)^2/2 + t` edges, `t >= 1`.
pub fn halfway_bound_check(g: &Graph, q: u64) -> Result<ExperimentReport, SupersatError> {
    let start = Instant::now();
    if q % 2 == 1 || q == 0 {
        return Err(SupersatError::OddOrder(q));
    }
    let n = q * q + q + 1;
    if g.n() as u64 != n {
        return Err(SupersatError::Precondition(format!("expected {n} vertices, got {}", g.n())));
    }
    let base = q * (q + 1) * (q + 1) / 2;
    let m = g.m() as u64;
    if m <= base {
        return Err(SupersatError::Precondition(format!("{m} edges, need more than {base}")));
    }
    let t = m - base;
    let count = count_c4(g)?;
    // 2 #C4 >= tq - 2.5q - t, scaled by 2
    let holds = 4 * count as i128 >= 2 * (t * q) as i128 - 5 * q as i128 - 2 * t as i128;
    let mut r = ExperimentReport::new("halfway", Params { q, t: Some(t), ..Default::default() });
    r.measure("c4", count).measure("edges", m);
    r.bound("(tq-2.5q-t)/2", (t as f64 * q as f64 - 2.5 * q as f64 - t as f64) / 2.0);
    r.verdict("lower", "#C4 >= (tq - 2.5q - t)/2", holds, Status::Required);
    Ok(timed(start, r))
}

fn validate_added(h: &Graph, add: &[(u32, u32)]) -> Result<(), SupersatError> {
    let mut seen = HashSet::new();
    for &(u, v) in add {
        if u == v {
            return Err(GraphError::SelfLoop(u).into());
        }
        if u as usize >= h.n() || v as usize >= h.n() {
            return Err(GraphError::VertexOutOfRange { u, v, n: h.n() }.into());
        }
        if h.has_edge(u, v) {
            return Err(GraphError::AlreadyAnEdge(u, v).into());
        }
        if !seen.insert(edge_key(u, v)) {
            return Err(SupersatError::Precondition(format!("edge ({u}, {v}) added twice")));
        }
    }
    Ok(())
}

/// Adds `s` edges and removes `s - 1` edges of a polarity graph and compares
/// `#C4` with `[sq - s^2, sq + s^2]`.
pub fn classify_perturbation(
    h: &PolarityGraph,
    add: &[(u32, u32)],
    remove: &[(u32, u32)],
) -> Result<ExperimentReport, SupersatError> {
    let start = Instant::now();
    validate_added(&h.graph, add)?;
    if add.len() != remove.len() + 1 {
        return Err(SupersatError::Precondition(format!(
            "need |add| = |remove| + 1, got {} and {}",
            add.len(),
            remove.len()
        )));
    }
    let g = h.graph.with_changes(add, remove)?;
    let q = h.q as i64;
    let s = add.len() as i64;
    let count = count_c4(&g)?;
    let (lo, hi) = (s * q - s * s, s * q + s * s);
    let status = if s == 1 { Status::Required } else { Status::Informative };
    let mut r = ExperimentReport::new("classify", Params { q: h.q, ..Default::default() });
    r.measure("s", s).measure("c4", count).measure("edges", g.m());
    r.bound("sq-s^2", lo).bound("sq+s^2", hi);
    r.verdict("range", "sq - s^2 <= #C4 <= sq + s^2", lo <= count as i64 && count as i64 <= hi, status);
    Ok(timed(start, r))
}

/// Canonical form of a 4-cycle: least rotation of either orientation.
fn canonical(c: Cycle4) -> Cycle4 {
    let mut best = c;
    for start in 0..4 {
        let fwd = [c[start], c[(start + 1) % 4], c[(start + 2) % 4], c[(start + 3) % 4]];
        let bwd = [c[start], c[(start + 3) % 4], c[(start + 2) % 4], c[(start + 1) % 4]];
        best = best.min(fwd).min(bwd);
    }
    best
}

/// Partition of the 4-cycles of `H + add` by the number of added edges used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Audit {
    pub s: usize,
    /// Cycles using exactly one added edge.
    pub c0: u64,
    /// Cycles using two or more added edges.
    pub c1: u64,
    pub c0_bound: u64,
    pub c1_bound: u64,
    /// Cycles of `H + add` minus cycles of `H`.
    pub new_cycles: u64,
    pub bound_ok: bool,
}

/// Splits the new 4-cycles after adding `add` and compares with `s(q+1)` and `2 C(s, 2)`.
pub fn upper_count_audit(h: &PolarityGraph, add: &[(u32, u32)]) -> Result<(Audit, ExperimentReport), SupersatError> {
    let start = Instant::now();
    let s = add.len();
    if s > AUDIT_MAX_ADDED {
        return Err(SupersatError::OutOfRange(format!("{s} added edges > {AUDIT_MAX_ADDED}")));
    }
    validate_added(&h.graph, add)?;
    let g = h.graph.with_changes(add, &[])?;
    let added: HashSet<(u32, u32)> = add.iter().map(|&(u, v)| edge_key(u, v)).collect();
    let mut cycles = HashSet::new();
    for &(u, v) in add {
        for c in c4_through_edge(&g, u, v)? {
            cycles.insert(canonical(c));
        }
    }
    let (mut c0, mut c1) = (0, 0);
    for c in &cycles {
        let used = (0..4).filter(|&i| added.contains(&edge_key(c[i], c[(i + 1) % 4]))).count();
        if used == 1 {
            c0 += 1;
        } else {
            c1 += 1;
        }
    }
    let q = h.q;
    let c0_bound = s as u64 * (q + 1);
    let c1_bound = (s * s.saturating_sub(1)) as u64;
    let new_cycles = count_c4(&g)? - count_c4(&h.graph)?;
    let audit = Audit { s, c0, c1, c0_bound, c1_bound, new_cycles, bound_ok: c0 <= c0_bound && c1 <= c1_bound };
    let mut r = ExperimentReport::new("audit", Params { q, ..Default::default() });
    r.measure("s", s).measure("c0", c0).measure("c1", c1).measure("new_cycles", new_cycles);
    r.bound("s(q+1)", c0_bound).bound("2C(s,2)", c1_bound);
    r.verdict("c0", "|C0| <= s(q+1)", c0 <= c0_bound, Status::Required);
    r.verdict("c1", "|C1| <= 2C(s,2)", c1 <= c1_bound, Status::Informative);
    r.verdict("complete", "|C0| + |C1| = #C4(H + add) - #C4(H)", c0 + c1 == new_cycles, Status::Required);
    Ok((audit, timed(start, r)))
}
