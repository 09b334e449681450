//! Exact 4-cycle counting.

use rayon::prelude::*;

use super::{Graph, GraphError};

/// Vertex-count limit for [`count_c4`].
pub const C4_MAX_VERTICES: usize = 1 << 17;
/// Degree limit for [`count_c4`]; with the vertex limit, every partial sum fits in 64 bits.
pub const C4_MAX_DEGREE: usize = 1 << 10;
/// Largest cycle list [`c4_through_edge`] will build.
pub const MAX_MATERIALIZED_CYCLES: usize = 1_000_000;

/// A 4-cycle `c[0] - c[1] - c[2] - c[3] - c[0]`.
pub type Cycle4 = [u32; 4];

fn check_limits(g: &Graph) -> Result<(), GraphError> {
    if g.n() > C4_MAX_VERTICES {
        return Err(GraphError::TooLarge(format!("{} vertices > {C4_MAX_VERTICES}", g.n())));
    }
    let d = g.max_degree();
    if d > C4_MAX_DEGREE {
        return Err(GraphError::TooLarge(format!("max degree {d} > {C4_MAX_DEGREE}")));
    }
    Ok(())
}

/// Runs `visit(u, codegrees)` for every vertex `u`, where `codegrees` lists
/// `(v, d(u, v))` for the vertices `v > u` with positive codegree.
fn codegree_sweep<T, F, R>(g: &Graph, visit: F, reduce: R, identity: T) -> T
where
    T: Send + Sync + Copy,
    F: Fn(u32, &[(u32, u32)]) -> T + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    let n = g.n();
    (0..n as u32)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], Vec::<u32>::new(), Vec::<(u32, u32)>::new()),
            |(count, touched, pairs), u| {
                for &w in g.neighbors(u) {
                    let nw = g.neighbors(w);
                    let start = nw.partition_point(|&v| v <= u);
                    for &v in &nw[start..] {
                        if count[v as usize] == 0 {
                            touched.push(v);
                        }
                        count[v as usize] += 1;
                    }
                }
                pairs.clear();
                for &v in touched.iter() {
                    pairs.push((v, count[v as usize]));
                    count[v as usize] = 0;
                }
                touched.clear();
                visit(u, pairs)
            },
        )
        .reduce(|| identity, reduce)
}

/// Exact number of 4-cycles: half the sum of `C(d(u, v), 2)` over vertex pairs,
/// since every 4-cycle has two opposite pairs.
pub fn count_c4(g: &Graph) -> Result<u64, GraphError> {
    check_limits(g)?;
    let opposite_pairs = codegree_sweep(
        g,
        |_, pairs| pairs.iter().map(|&(_, c)| c as u64 * (c as u64 - 1) / 2).sum::<u64>(),
        |a, b| a + b,
        0u64,
    );
    Ok(opposite_pairs / 2)
}

/// Largest codegree over all vertex pairs.
pub fn max_codegree(g: &Graph) -> u32 {
    codegree_sweep(g, |_, pairs| pairs.iter().map(|&(_, c)| c).max().unwrap_or(0), u32::max, 0)
}

/// A graph is C4-free iff every pair has at most one common neighbor.
pub fn is_c4_free(g: &Graph) -> bool {
    max_codegree(g) <= 1
}

/// Counts 4-cycles by inspecting every 4-subset of vertices (n <= 64).
pub fn count_c4_bruteforce(g: &Graph) -> Result<u64, GraphError> {
    let n = g.n();
    if n > 64 {
        return Err(GraphError::TooLarge(format!("brute force supports n <= 64, got {n}")));
    }
    let adj: Vec<u64> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &x| m | (1 << x)))
        .collect();
    let e = |a: usize, b: usize| adj[a] >> b & 1 == 1;
    let cyc = |a, b, c, d| e(a, b) && e(b, c) && e(c, d) && e(d, a);
    let mut total = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    // the three ways to arrange four vertices on a cycle
                    total += cyc(a, b, c, d) as u64 + cyc(a, b, d, c) as u64 + cyc(a, c, b, d) as u64;
                }
            }
        }
    }
    Ok(total)
}

/// All 4-cycles through the edge `uv`, each listed as `[u, v, x, y]`.
pub fn c4_through_edge(g: &Graph, u: u32, v: u32) -> Result<Vec<Cycle4>, GraphError> {
    if u == v || !g.has_edge(u, v) {
        return Err(GraphError::NotAnEdge(u, v));
    }
    let mut out = Vec::new();
    let nu = g.neighbors(u);
    for &x in g.neighbors(v) {
        if x == u {
            continue;
        }
        for &y in g.neighbors(x) {
            if y != v && nu.binary_search(&y).is_ok() {
                if out.len() == MAX_MATERIALIZED_CYCLES {
                    return Err(GraphError::TooLarge(format!("more than {MAX_MATERIALIZED_CYCLES} cycles through ({u}, {v})")));
                }
                out.push([u, v, x, y]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{complete, cycle, gnp};
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_counts() {
        assert_eq!(count_c4(&complete(4)).unwrap(), 3);
        assert_eq!(count_c4_bruteforce(&complete(4)).unwrap(), 3);
        assert_eq!(count_c4_bruteforce(&cycle(4)).unwrap(), 1);
        assert_eq!(count_c4(&cycle(4)).unwrap(), 1);
        assert_eq!(count_c4_bruteforce(&cycle(5)).unwrap(), 0);
        assert_eq!(count_c4(&cycle(5)).unwrap(), 0);
        // K_n has 3 C(n,4) four-cycles
        assert_eq!(count_c4(&complete(8)).unwrap(), 3 * 70);
    }

    #[test]
    fn seeded_random_graph_matches_bruteforce() {
        let g = gnp(12, 0.5, 12);
        assert_eq!(count_c4(&g).unwrap(), count_c4_bruteforce(&g).unwrap());
    }

    #[test]
    fn bruteforce_rejects_large() {
        assert!(count_c4_bruteforce(&Graph::empty(65)).is_err());
    }

    #[test]
    fn limits() {
        let star: Vec<(u32, u32)> = (1..=1025).map(|v| (0, v)).collect();
        let g = Graph::from_edges(1026, &star).unwrap();
        assert!(matches!(count_c4(&g), Err(GraphError::TooLarge(_))));
    }

    #[test]
    fn through_edge() {
        let c4 = cycle(4);
        assert_eq!(c4_through_edge(&c4, 0, 1).unwrap(), vec![[0, 1, 2, 3]]);
        assert!(c4_through_edge(&cycle(5), 0, 1).unwrap().is_empty());
        assert_eq!(c4_through_edge(&c4, 0, 2), Err(GraphError::NotAnEdge(0, 2)));
        // K4: each edge lies on two 4-cycles
        assert_eq!(c4_through_edge(&complete(4), 0, 1).unwrap().len(), 2);
    }

    #[test]
    fn relabeling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..20 {
            let g = gnp(30, 0.3, seed);
            let mut perm: Vec<u32> = (0..30).collect();
            perm.shuffle(&mut rng);
            assert_eq!(count_c4(&g).unwrap(), count_c4(&g.permuted(&perm)).unwrap());
        }
    }

    #[test]
    fn c4_free_predicate_agrees_with_count() {
        for seed in 0..100 {
            let g = gnp(16, 0.15, seed);
            assert_eq!(is_c4_free(&g), count_c4(&g).unwrap() == 0);
        }
    }
}
