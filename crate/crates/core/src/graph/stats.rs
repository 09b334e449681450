//! Degree statistics, covered and uncovered pairs, and the neighborhood family.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{count_c4, Graph, GraphError};
use crate::incidence::{is_one_intersecting, IncidenceStructure, PairWitness};

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    /// `degree_histogram[d]` is the number of vertices of degree `d`.
    pub degree_histogram: Vec<usize>,
    /// Vertices grouped by degree (the sets `S_i`).
    pub by_degree: BTreeMap<usize, Vec<u32>>,
    /// Vertices of degree at most `q`.
    pub s_set: Vec<u32>,
    /// `max(q + 1 - d(v), 0)` per vertex.
    pub deficiency: Vec<u64>,
    pub total_deficiency: u64,
    /// Number of 2-paths, `sum C(d(v), 2)`.
    pub p2: u64,
    /// Number of vertex pairs without a common neighbor.
    pub up: u64,
    /// Per vertex, the number of other vertices it shares no neighbor with.
    pub d0: Vec<u64>,
}

impl GraphStats {
    /// Total deficiency of a vertex set.
    pub fn deficiency_of(&self, set: &[u32]) -> u64 {
        set.iter().map(|&v| self.deficiency[v as usize]).sum()
    }
}

/// For each vertex, the number of other vertices sharing at least one neighbor with it.
fn covered_counts(g: &Graph) -> Vec<u64> {
    let n = g.n();
    (0..n as u32)
        .into_par_iter()
        .map_init(
            || (vec![false; n], Vec::<u32>::new()),
            |(seen, touched), u| {
                for &w in g.neighbors(u) {
                    for &v in g.neighbors(w) {
                        if v != u && !seen[v as usize] {
                            seen[v as usize] = true;
                            touched.push(v);
                        }
                    }
                }
                let c = touched.len() as u64;
                for &v in touched.iter() {
                    seen[v as usize] = false;
                }
                touched.clear();
                c
            },
        )
        .collect()
}

/// Degree, deficiency, 2-path and uncovered-pair statistics relative to `q`.
pub fn up_p2_stats(g: &Graph, q: u64) -> GraphStats {
    let n = g.n();
    let mut degree_histogram = vec![0usize; g.max_degree() + 1];
    let mut by_degree: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    let mut deficiency = Vec::with_capacity(n);
    let mut p2 = 0;
    for v in 0..n as u32 {
        let d = g.degree(v);
        degree_histogram[d] += 1;
        by_degree.entry(d).or_default().push(v);
        deficiency.push((q + 1).saturating_sub(d as u64));
        p2 += choose2(d as u64);
    }
    let s_set = (0..n as u32).filter(|&v| g.degree(v) as u64 <= q).collect();
    let d0: Vec<u64> = covered_counts(g).into_iter().map(|c| (n as u64).saturating_sub(1) - c).collect();
    let up = d0.iter().sum::<u64>() / 2;
    GraphStats {
        q,
        n,
        m: g.m(),
        degree_histogram,
        by_degree,
        s_set,
        total_deficiency: deficiency.iter().sum(),
        deficiency,
        p2,
        up,
        d0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    /// `2 #C4`.
    pub lhs: i64,
    /// 2-paths with both ends in `A`, plus uncovered pairs in `A`, minus `C(|A|, 2)`.
    pub rhs: i64,
    pub p2_in_a: u64,
    pub up_in_a: u64,
    pub holds: bool,
}

/// Evaluates `2 #C4 >= |P2 ∩ A| + |UP ∩ A| - C(|A|, 2)` for the vertex set `a`.
pub fn claim_c4_inequality(g: &Graph, a: &[u32]) -> Result<ClaimCheck, GraphError> {
    let n = g.n();
    let mut in_a = vec![false; n];
    for &v in a {
        if v as usize >= n {
            return Err(GraphError::VertexOutOfRange { u: v, v, n });
        }
        in_a[v as usize] = true;
    }
    let size = in_a.iter().filter(|&&b| b).count() as u64;
    let p2_in_a: u64 = (0..n as u32)
        .map(|w| choose2(g.neighbors(w).iter().filter(|&&x| in_a[x as usize]).count() as u64))
        .sum();
    let members: Vec<u32> = (0..n as u32).filter(|&v| in_a[v as usize]).collect();
    let covered_in_a: u64 = members
        .par_iter()
        .map_init(
            || (vec![false; n], Vec::<u32>::new()),
            |(seen, touched), &u| {
                for &w in g.neighbors(u) {
                    for &v in g.neighbors(w) {
                        if v > u && in_a[v as usize] && !seen[v as usize] {
                            seen[v as usize] = true;
                            touched.push(v);
                        }
                    }
                }
                let c = touched.len() as u64;
                for &v in touched.iter() {
                    seen[v as usize] = false;
                }
                touched.clear();
                c
            },
        )
        .sum();
    let up_in_a = choose2(size) - covered_in_a;
    let lhs = 2 * count_c4(g)? as i64;
    let rhs = p2_in_a as i64 + up_in_a as i64 - choose2(size) as i64;
    Ok(ClaimCheck { lhs, rhs, p2_in_a, up_in_a, holds: lhs >= rhs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodFamily {
    pub q: u64,
    pub delta: f64,
    /// Vertices of degree at most `q`.
    pub s: Vec<u32>,
    /// Vertices with at least `delta * q` neighbors in `s`.
    pub b: Vec<u32>,
    /// Degree-`(q+1)` vertices outside `b`.
    pub a: Vec<u32>,
    /// Neighborhoods of the vertices of `a`, in the order of `a`.
    pub family: IncidenceStructure,
    pub one_intersecting: bool,
    pub witness: Option<PairWitness>,
}

impl NeighborhoodFamily {
    pub fn size(&self) -> usize {
        self.family.n_lines()
    }
}

/// Extracts the family of neighborhoods `{N(x) : x in A}`.
///
/// Panics unless `0 < delta < 1`.
pub fn neighborhood_family(g: &Graph, q: u64, delta: f64) -> NeighborhoodFamily {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1), got {delta}");
    let n = g.n();
    let in_s: Vec<bool> = (0..n as u32).map(|v| g.degree(v) as u64 <= q).collect();
    let s: Vec<u32> = (0..n as u32).filter(|&v| in_s[v as usize]).collect();
    let threshold = delta * q as f64;
    let b: Vec<u32> = (0..n as u32)
        .filter(|&x| g.neighbors(x).iter().filter(|&&y| in_s[y as usize]).count() as f64 >= threshold)
        .collect();
    let a: Vec<u32> = (0..n as u32)
        .filter(|&x| g.degree(x) as u64 == q + 1 && b.binary_search(&x).is_err())
        .collect();
    let lines = a.iter().map(|&x| g.neighbors(x).to_vec()).collect();
    let family = IncidenceStructure::new(n, lines).expect("neighborhoods are valid lines");
    let check = is_one_intersecting(&family);
    NeighborhoodFamily { q, delta, s, b, a, family, one_intersecting: check.holds, witness: check.witness }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvexityError {
    #[error("sequence is empty")]
    Empty,
    #[error("k must be positive")]
    ZeroK,
    #[error("r = {r} is below -m = -{m}")]
    RTooSmall { r: i64, m: usize },
    #[error("sum {sum} is below k*m + r = {needed}")]
    SumTooSmall { sum: i128, needed: i128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConvexityCheck {
    pub lhs: i128,
    pub rhs: i128,
    pub holds: bool,
}

/// Compares `sum C(a_i, 2)` with `m C(k, 2) + r k`.
pub fn convexity_bound(values: &[u64], k: u64, r: i64) -> Result<ConvexityCheck, ConvexityError> {
    let m = values.len();
    if m == 0 {
        return Err(ConvexityError::Empty);
    }
    if k == 0 {
        return Err(ConvexityError::ZeroK);
    }
    if r < -(m as i64) {
        return Err(ConvexityError::RTooSmall { r, m });
    }
    let sum: i128 = values.iter().map(|&a| a as i128).sum();
    let needed = k as i128 * m as i128 + r as i128;
    if sum < needed {
        return Err(ConvexityError::SumTooSmall { sum, needed });
    }
    let c2 = |x: i128| x * (x - 1) / 2;
    let lhs: i128 = values.iter().map(|&a| c2(a as i128)).sum();
    let rhs = m as i128 * c2(k as i128) + r as i128 * k as i128;
    Ok(ConvexityCheck { lhs, rhs, holds: lhs >= rhs })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{complete, cycle, gnp};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_graph() {
        let s = up_p2_stats(&Graph::empty(6), 2);
        assert_eq!(s.p2, 0);
        assert_eq!(s.up, 15);
        assert_eq!(s.total_deficiency, 18);
    }

    #[test]
    fn c4_stats() {
        let s = up_p2_stats(&cycle(4), 1);
        assert_eq!(s.p2, 4);
        // the four adjacent pairs have no common neighbor
        assert_eq!(s.up, 4);
        assert_eq!(s.d0, vec![2, 2, 2, 2]);
        assert_eq!(s.by_degree[&2], vec![0, 1, 2, 3]);
        assert!(s.s_set.is_empty());
    }

    #[test]
    fn k4_claim_is_tight() {
        let k4 = complete(4);
        let c = claim_c4_inequality(&k4, &[0, 1, 2, 3]).unwrap();
        assert_eq!((c.lhs, c.rhs, c.p2_in_a, c.up_in_a), (6, 6, 12, 0));
        assert!(c.holds);
        let e = claim_c4_inequality(&k4, &[]).unwrap();
        assert_eq!(e.rhs, 0);
        assert!(e.holds);
    }

    #[test]
    fn claim_on_random_graphs() {
        for seed in 0..50 {
            let g = gnp(14, 0.35, seed);
            let a: Vec<u32> = (0..14).filter(|v| (v * 7 + seed as u32) % 3 != 0).collect();
            assert!(claim_c4_inequality(&g, &a).unwrap().holds, "seed {seed}");
            assert!(claim_c4_inequality(&g, &(0..14).collect::<Vec<_>>()).unwrap().holds);
        }
    }

    #[test]
    fn covered_pair_identity_on_c4_free() {
        for seed in 0..50 {
            let g = gnp(20, 0.1, seed);
            if super::super::is_c4_free(&g) {
                let s = up_p2_stats(&g, 3);
                assert_eq!(s.p2 + s.up, 190);
            }
        }
    }

    #[test]
    fn convexity_examples() {
        let c = convexity_bound(&[3, 3, 3], 3, 0).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (9, 9, true));
        let c = convexity_bound(&[5, 1], 2, 2).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (10, 6, true));
        assert_eq!(convexity_bound(&[1, 1], 2, 0), Err(ConvexityError::SumTooSmall { sum: 2, needed: 4 }));
        assert_eq!(convexity_bound(&[1], 2, -2), Err(ConvexityError::RTooSmall { r: -2, m: 1 }));
        assert_eq!(convexity_bound(&[], 2, 0), Err(ConvexityError::Empty));
    }

    #[test]
    fn family_with_large_delta_keeps_all_top_degree_vertices() {
        let g = cycle(6);
        let f = neighborhood_family(&g, 1, 0.99);
        assert!(f.b.is_empty());
        assert_eq!(f.a, (0..6).collect::<Vec<_>>());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn convexity_holds_under_preconditions(
            values in proptest::collection::vec(0u64..60, 1..12),
            k in 1u64..20,
            slack in 0i64..50,
        ) {
            let m = values.len() as i64;
            let sum: i64 = values.iter().map(|&a| a as i64).sum();
            // largest admissible r, reduced by a random slack but kept >= -m
            let r = (sum - k as i64 * m - slack).max(-m);
            if let Ok(c) = convexity_bound(&values, k, r) {
                prop_assert!(c.holds, "{values:?} k={k} r={r}");
            }
        }
    }
}
