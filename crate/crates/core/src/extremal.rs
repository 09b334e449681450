//! Turán numbers for the 4-cycle: closed forms, exhaustive search at tiny n,
//! and the prime-window lower bound.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use thiserror::Error;

use crate::incidence::bruck_ryser_excluded;
use crate::primes::prev_prime;

/// Largest `n` accepted by [`turan_bruteforce`].
pub const TURAN_MAX_N: usize = 10;
/// Largest `n` accepted by [`h_bruteforce`].
pub const H_MAX_N: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("n = {n} exceeds the exhaustive-search limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{edges} edges do not fit on {n} vertices")]
    TooManyEdges { n: usize, edges: usize },
    #[error("no prime at or below {0}")]
    NoPrimeBelow(u64),
    #[error("no prime in window: largest prime {p} at or below {x} is under x - x^0.525")]
    EmptyWindow { x: String, p: u64 },
    #[error("odd order {0}")]
    OddOrder(u64),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// `floor(n/4 (1 + sqrt(4n - 3)))`, exactly.
pub fn reiman_bound(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let n_big = BigUint::from(n);
    // n/4 (1 + sqrt(4n-3)) = (n + sqrt(n^2 (4n-3))) / 4, and n is an integer
    let root = (&n_big * &n_big * (BigUint::from(4u32) * &n_big - 3u32)).sqrt();
    let value: BigUint = (n_big + root) / 4u32;
    u64::try_from(value).expect("bound fits in u64")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FurediValue {
    pub q: u64,
    pub value: u64,
    /// The upper bound is not established for this `q`.
    pub excluded: bool,
}

/// `q (q+1)^2 / 2`, with a flag for the orders the theorem leaves out.
pub fn furedi_value(q: u64) -> FurediValue {
    FurediValue { q, value: q * (q + 1) * (q + 1) / 2, excluded: matches!(q, 1 | 7 | 9 | 11 | 13) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TuranRecord {
    pub n: usize,
    pub ex_value: usize,
    pub extremal_count: Option<u64>,
    pub method: Method,
    /// One extremal graph.
    pub witness: Vec<(u32, u32)>,
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn pairs_to_edges(adj: &[u16], n: usize) -> Vec<(u32, u32)> {
    all_pairs(n).into_iter().filter(|&(u, v)| adj[u] >> v & 1 == 1).map(|(u, v)| (u as u32, v as u32)).collect()
}

/// New 4-cycles created by adding `uv` to the graph `adj`.
#[inline]
fn c4_gain(adj: &[u16], u: usize, v: usize) -> u32 {
    let mut nu = adj[u];
    let mut total = 0;
    while nu != 0 {
        let a = nu.trailing_zeros() as usize;
        nu &= nu - 1;
        total += (adj[a] & adj[v]).count_ones();
    }
    total
}

struct TuranSearch<'a> {
    n: usize,
    pairs: Vec<(usize, usize)>,
    smaller: &'a [usize],
    adj: [u16; 16],
    best: usize,
    best_adj: [u16; 16],
}

impl TuranSearch<'_> {
    fn dfs(&mut self, idx: usize, cur: usize) {
        if cur > self.best {
            self.best = cur;
            self.best_adj = self.adj;
        }
        let Some(&(u, v)) = self.pairs.get(idx) else { return };
        // rest of row u, plus whatever a C4-free graph on the later vertices allows
        if cur + (self.n - v) + self.smaller[self.n - u - 1] <= self.best {
            return;
        }
        if c4_gain(&self.adj, u, v) == 0 {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
            self.dfs(idx + 1, cur + 1);
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
        self.dfs(idx + 1, cur);
    }
}

/// `ex(k, C4)` for every `k <= n` with one witness each.
fn turan_table(n: usize) -> Vec<(usize, Vec<(u32, u32)>)> {
    let mut values: Vec<usize> = vec![0];
    let mut out = vec![(0, Vec::new())];
    for k in 1..=n {
        // seed: an extremal graph on k-1 vertices plus an isolated vertex
        let mut seed = [0u16; 16];
        for &(u, v) in &out[k - 1].1 {
            seed[u as usize] |= 1u16 << v;
            seed[v as usize] |= 1u16 << u;
        }
        let mut search =
            TuranSearch { n: k, pairs: all_pairs(k), smaller: &values, adj: [0; 16], best: values[k - 1], best_adj: seed };
        search.dfs(0, 0);
        let (best, adj) = (search.best, search.best_adj);
        values.push(best);
        out.push((best, pairs_to_edges(&adj, k)));
    }
    out
}

/// Exact `ex(n, C4)` by depth-first search over edge sets (`n <= 10`).
pub fn turan_bruteforce(n: usize) -> Result<TuranRecord, ExtremalError> {
    if n > TURAN_MAX_N {
        return Err(ExtremalError::TooLarge { n, limit: TURAN_MAX_N });
    }
    let (ex_value, witness) = turan_table(n).pop().expect("table has n+1 rows");
    Ok(TuranRecord { n, ex_value, extremal_count: None, method: Method::Bruteforce, witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HRecord {
    pub n: usize,
    pub t: usize,
    pub edges: usize,
    pub value: u32,
    pub witness: Vec<(u32, u32)>,
}

struct HSearch {
    pairs: Vec<(usize, usize)>,
    target: usize,
    floor: u32,
    adj: [u16; 16],
    best: u32,
    best_adj: [u16; 16],
}

impl HSearch {
    fn dfs(&mut self, idx: usize, edges: usize, c4: u32) {
        if self.best == self.floor || c4 >= self.best {
            return;
        }
        if edges == self.target {
            self.best = c4;
            self.best_adj = self.adj;
            return;
        }
        if self.pairs.len() - idx < self.target - edges {
            return;
        }
        let (u, v) = self.pairs[idx];
        let gain = c4_gain(&self.adj, u, v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        self.dfs(idx + 1, edges + 1, c4 + gain);
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        self.dfs(idx + 1, edges, c4);
    }
}

/// Minimum number of 4-cycles over graphs on `n <= 9` vertices with
/// `ex(n, C4) + t` edges.
pub fn h_bruteforce(n: usize, t: usize) -> Result<HRecord, ExtremalError> {
    if n > H_MAX_N {
        return Err(ExtremalError::TooLarge { n, limit: H_MAX_N });
    }
    let ex = turan_table(n)[n].0;
    let target = ex + t;
    if target > n * n.saturating_sub(1) / 2 {
        return Err(ExtremalError::TooManyEdges { n, edges: target });
    }
    // any graph with more than ex(n) edges has a 4-cycle
    let floor = u32::from(t > 0);
    let mut search =
        HSearch { pairs: all_pairs(n), target, floor, adj: [0; 16], best: u32::MAX, best_adj: [0; 16] };
    search.dfs(0, 0, 0);
    Ok(HRecord { n, t, edges: target, value: search.best, witness: pairs_to_edges(&search.best_adj, n) })
}

/// Rational `num / 2^shift`.
#[derive(Debug, Clone)]
struct Dyadic {
    num: BigUint,
    shift: u32,
}

const PRECISION_BITS: u32 = 96;

/// Checks `(hi - p)^40 <= lo^21` for brackets `lo <= x <= hi`; sufficient for
/// `p >= x - x^0.525`.
fn window_holds(p: u64, lo: &Dyadic, hi: &Dyadic) -> bool {
    debug_assert_eq!(lo.shift, hi.shift);
    let s = lo.shift;
    let p_scaled = BigUint::from(p) << s;
    if hi.num <= p_scaled {
        return true;
    }
    let gap = &hi.num - p_scaled;
    // gap^40 / 2^(40s) <= lo^21 / 2^(21s)
    gap.pow(40) <= lo.num.pow(21) << (19 * s)
}

fn integer_dyadic(x: u64) -> Dyadic {
    Dyadic { num: BigUint::from(x), shift: 0 }
}

fn largest_prime_at_most(x: u64) -> Result<u64, ExtremalError> {
    prev_prime(x).ok_or(ExtremalError::NoPrimeBelow(x))
}

/// Largest prime `p <= x`, required to satisfy `p >= x - x^0.525`.
pub fn prime_in_interval(x: u64) -> Result<u64, ExtremalError> {
    let p = largest_prime_at_most(x)?;
    let d = integer_dyadic(x);
    if window_holds(p, &d, &d) {
        Ok(p)
    } else {
        Err(ExtremalError::EmptyWindow { x: x.to_string(), p })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub n: u64,
    /// `floor(x)` for `x = (sqrt(4n - 3) - 1) / 2`.
    pub x_floor: u64,
    pub p: u64,
    /// `p (p+1)^2 / 2`.
    pub bound: u128,
    /// `(n^1.5 - 3 n^1.2625 + n) / 2` in floating point, for display only.
    pub floor_formula: f64,
    /// `p >= sqrt(n) - n^0.2625 - 1`, decided exactly.
    pub p_condition: bool,
    /// `bound >= (n^1.5 - 3 n^1.2625 + n) / 2`, decided exactly.
    pub bound_condition: bool,
    pub chain_holds: bool,
}

/// Upper bracket on `sqrt(m)` with `PRECISION_BITS` fractional bits.
fn sqrt_upper(m: &BigUint) -> Dyadic {
    let scaled = m << (2 * PRECISION_BITS);
    let r = scaled.sqrt();
    let num = if &r * &r == scaled { r } else { r + 1u32 };
    Dyadic { num, shift: PRECISION_BITS }
}

/// Lower bracket on `n^(101/80)` with `PRECISION_BITS` fractional bits.
fn pow_101_80_lower(n: u64) -> Dyadic {
    let scaled = BigUint::from(n).pow(101) << (80 * PRECISION_BITS);
    Dyadic { num: scaled.nth_root(80), shift: PRECISION_BITS }
}

/// The prime-window lower bound on `ex(n, C4)` with every comparison decided exactly.
pub fn turan_lower_bound(n: u64) -> Result<LowerBound, ExtremalError> {
    if n < 3 {
        return Err(ExtremalError::Invalid(format!("n = {n} must be at least 3")));
    }
    let k = PRECISION_BITS;
    let disc = BigUint::from(4 * n - 3);
    let root_lo = (&disc << (2 * k)).sqrt();
    let root_hi = sqrt_upper(&disc).num;
    let one = BigUint::from(1u32) << k;
    // x = (sqrt(4n-3) - 1) / 2, bracketed with k+1 fractional bits
    let x_lo = Dyadic { num: &root_lo - &one, shift: k + 1 };
    let x_hi = Dyadic { num: &root_hi - &one, shift: k + 1 };
    let x_floor = u64::try_from(disc.sqrt() - 1u32).expect("fits") / 2;
    let p = largest_prime_at_most(x_floor)?;
    if !window_holds(p, &x_lo, &x_hi) {
        let x = (x_lo.num.to_string().parse::<f64>().unwrap_or(f64::NAN)) / 2f64.powi(k as i32 + 1);
        return Err(ExtremalError::EmptyWindow { x: format!("{x:.6}"), p });
    }

    let n_big = BigUint::from(n);
    let s_u = sqrt_upper(&n_big);
    // sqrt(n) - p - 1 <= n^(21/80), checked as (s_u - p - 1)^80 <= n^21
    let p1_scaled = BigUint::from(p + 1) << k;
    let p_condition = s_u.num <= p1_scaled || (&s_u.num - &p1_scaled).pow(80) <= n_big.pow(21) << (80 * k);

    // p(p+1)^2 - n >= n^1.5 - 3 n^(101/80), with n^1.5 <= n s_u and n^(101/80) >= r_l
    let r_l = pow_101_80_lower(n);
    let lhs = (BigInt::from(p) * BigInt::from(p + 1) * BigInt::from(p + 1) - BigInt::from(n)) << k;
    let rhs = BigInt::from(&n_big * &s_u.num) - BigInt::from(r_l.num) * 3;
    let bound_condition = lhs >= rhs;

    let nf = n as f64;
    let floor_formula = 0.5 * (nf.powf(1.5) - 3.0 * nf.powf(1.2625) + nf);
    let bound = p as u128 * (p as u128 + 1) * (p as u128 + 1) / 2;
    Ok(LowerBound {
        n,
        x_floor,
        p,
        bound,
        floor_formula,
        p_condition,
        bound_condition,
        chain_holds: p_condition && bound_condition,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryDecision {
    pub q: u64,
    pub lambda_lower: i64,
    pub slack: i64,
    /// `q (q+1)^2 / 2 - q / 2 + slack`.
    pub threshold: i64,
    /// 1 when `lambda >= threshold` (then `ex = lambda`), else 2 (then `ex < threshold`).
    pub branch: u8,
    /// `max(lambda, threshold)`.
    pub bound: i64,
    pub statement: String,
    /// No plane of order `q` exists by the Bruck-Ryser criterion.
    pub no_plane: bool,
}

/// Evaluates the case split deciding `ex(q^2+q+1, C4)` from a lower bound on
/// the largest polarity graph of order `q`.
pub fn corollary_turan_decision(q: u64, lambda_lower: i64, slack: i64) -> Result<CorollaryDecision, ExtremalError> {
    if q % 2 == 1 || q == 0 {
        return Err(ExtremalError::OddOrder(q));
    }
    let qi = q as i64;
    let threshold = qi * (qi + 1) * (qi + 1) / 2 - qi / 2 + slack;
    let (branch, statement) = if lambda_lower >= threshold {
        (1, format!("ex = lambda = {lambda_lower}"))
    } else {
        (2, format!("ex < {threshold}"))
    };
    Ok(CorollaryDecision {
        q,
        lambda_lower,
        slack,
        threshold,
        branch,
        bound: lambda_lower.max(threshold),
        statement,
        no_plane: bruck_ryser_excluded(q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn has_c4(adj: &[u16]) -> bool {
        let n = adj.len();
        (0..n).any(|u| (u + 1..n).any(|v| (adj[u] & adj[v]).count_ones() >= 2))
    }

    fn c4_count(adj: &[u16]) -> u32 {
        let n = adj.len();
        let mut twice = 0;
        for u in 0..n {
            for v in u + 1..n {
                let c = (adj[u] & adj[v]).count_ones();
                twice += c * c.saturating_sub(1) / 2;
            }
        }
        twice / 2
    }

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<u16> {
        let mut adj = vec![0u16; n];
        for &(u, v) in edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    /// ex(n, C4) by enumerating every edge subset.
    fn ex_by_subsets(n: usize) -> usize {
        let pairs = all_pairs(n);
        let mut best = 0;
        for mask in 0u32..1 << pairs.len() {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let chosen: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if !has_c4(&adjacency(n, &chosen)) {
                best = size;
            }
        }
        best
    }

    #[test]
    fn reiman_examples() {
        assert_eq!(reiman_bound(7), 10);
        assert_eq!(reiman_bound(4), 4);
        assert_eq!(reiman_bound(1), 0);
        for n in 1..2000u64 {
            let exact = n as f64 / 4.0 * (1.0 + ((4 * n - 3) as f64).sqrt());
            // away from integers the float value is reliable
            if (exact - exact.round()).abs() > 1e-6 {
                assert_eq!(reiman_bound(n), exact.floor() as u64, "n={n}");
            }
        }
    }

    #[test]
    fn furedi_examples() {
        assert_eq!(furedi_value(2), FurediValue { q: 2, value: 9, excluded: false });
        assert_eq!(furedi_value(8).value, 324);
        assert_eq!(furedi_value(1), FurediValue { q: 1, value: 2, excluded: true });
    }

    #[test]
    fn turan_matches_subset_enumeration() {
        for n in 1..=7 {
            assert_eq!(turan_bruteforce(n).unwrap().ex_value, ex_by_subsets(n), "n={n}");
        }
    }

    #[test]
    fn turan_values_and_witnesses() {
        let expected = [0, 0, 1, 3, 4, 6, 7, 9, 11, 13];
        let table = turan_table(9);
        for (n, (value, witness)) in table.iter().enumerate() {
            assert_eq!(*value, expected[n], "n={n}");
            assert_eq!(witness.len(), *value);
            let edges: Vec<(usize, usize)> = witness.iter().map(|&(u, v)| (u as usize, v as usize)).collect();
            assert!(!has_c4(&adjacency(n, &edges)));
            assert!(*value as u64 <= reiman_bound(n as u64).max(0));
        }
        assert_eq!(turan_bruteforce(7).unwrap().ex_value as u64, furedi_value(2).value);
        assert!(matches!(turan_bruteforce(11), Err(ExtremalError::TooLarge { .. })));
    }

    #[test]
    fn h_small() {
        assert_eq!(h_bruteforce(4, 1).unwrap().value, 1);
        for n in 2..=7 {
            assert_eq!(h_bruteforce(n, 0).unwrap().value, 0);
        }
        assert!(matches!(h_bruteforce(4, 3), Err(ExtremalError::TooManyEdges { .. })));
        assert!(matches!(h_bruteforce(10, 1), Err(ExtremalError::TooLarge { .. })));
    }

    #[test]
    fn h_seven_one_matches_enumeration() {
        let pairs = all_pairs(7);
        let oracle = pairs.iter().copied().combinations(10).map(|es| c4_count(&adjacency(7, &es))).min().unwrap();
        let rec = h_bruteforce(7, 1).unwrap();
        assert_eq!(rec.value, oracle);
        let es: Vec<(usize, usize)> = rec.witness.iter().map(|&(u, v)| (u as usize, v as usize)).collect();
        assert_eq!(es.len(), 10);
        assert_eq!(c4_count(&adjacency(7, &es)), rec.value);
    }

    #[test]
    fn h_five_two_matches_enumeration() {
        let pairs = all_pairs(5);
        let oracle = pairs.iter().copied().combinations(8).map(|es| c4_count(&adjacency(5, &es))).min().unwrap();
        assert_eq!(h_bruteforce(5, 2).unwrap().value, oracle);
    }

    #[test]
    fn prime_windows() {
        assert_eq!(prime_in_interval(100), Ok(97));
        assert_eq!(prime_in_interval(10), Ok(7));
        assert_eq!(prime_in_interval(4), Ok(3));
        assert_eq!(prime_in_interval(2), Ok(2));
        assert_eq!(prime_in_interval(1), Err(ExtremalError::NoPrimeBelow(1)));
    }

    #[test]
    fn window_check_against_floats() {
        for x in 4..20_000u64 {
            let p = largest_prime_at_most(x).unwrap();
            let gap = (x - p) as f64;
            let allowed = (x as f64).powf(0.525);
            if (gap - allowed).abs() > 1e-6 {
                assert_eq!(prime_in_interval(x).is_ok(), gap <= allowed, "x={x}");
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let lb = turan_lower_bound(1_000_000).unwrap();
        assert_eq!((lb.x_floor, lb.p, lb.bound), (999, 997, 496_507_994));
        assert!(lb.chain_holds);
        assert!((lb.floor_formula - 4.44e8).abs() < 1e7);
        let lb = turan_lower_bound(7).unwrap();
        assert_eq!((lb.p, lb.bound), (2, 9));
        for n in [10_000u64, 100_000_000] {
            assert!(turan_lower_bound(n).unwrap().chain_holds, "n={n}");
        }
    }

    #[test]
    fn lower_bound_within_reiman() {
        for n in (7..50_000u64).step_by(997) {
            if let Ok(lb) = turan_lower_bound(n) {
                assert!(lb.bound <= reiman_bound(n) as u128, "n={n}");
            }
        }
    }

    #[test]
    fn corollary_examples() {
        let d = corollary_turan_decision(8, 324, 0).unwrap();
        assert_eq!((d.branch, d.bound), (1, 324));
        let d = corollary_turan_decision(6, 0, 0).unwrap();
        assert_eq!((d.branch, d.threshold), (2, 144));
        assert!(d.no_plane);
        let d = corollary_turan_decision(2, 9, 0).unwrap();
        assert_eq!((d.branch, d.bound), (1, 9));
        assert_eq!(corollary_turan_decision(3, 0, 0), Err(ExtremalError::OddOrder(3)));
    }
}
