//! Polarities of PG(2, q) and their polarity graphs.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{is_c4_free, Graph};
use crate::plane::ProjectivePlane;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolarityError {
    #[error("sigma is not a permutation of 0..{n}")]
    NotPermutation { n: usize },
    #[error("not a polarity: point {0} lies on the image of {1} but not conversely")]
    NotAPolarity(u32, u32),
    #[error("Baer violation: {absolute} absolute points is not q+1+m*sqrt(q) for q = {q}")]
    BaerViolation { q: u64, absolute: u64 },
    #[error("polarity graph invariant failed: {0}")]
    InvariantViolated(String),
    #[error("odd order {0}: the special vertex exists only for even q")]
    OddOrder(u64),
    #[error("special vertex not found")]
    NotFound,
    #[error("special vertex not unique: {0:?}")]
    NotUnique(Vec<u32>),
    #[error("parse error on line {line_no}: {message}")]
    Parse { line_no: usize, message: String },
    #[error("{0}")]
    Field(String),
}

/// Pairs point `i` with line `sigma[i]`.
#[derive(Debug, Clone)]
pub struct Polarity<'p> {
    plane: &'p ProjectivePlane,
    sigma: Vec<u32>,
}

impl<'p> Polarity<'p> {
    pub fn new(plane: &'p ProjectivePlane, sigma: Vec<u32>) -> Result<Self, PolarityError> {
        let n = plane.n_points();
        let mut seen = vec![false; n];
        if sigma.len() != n {
            return Err(PolarityError::NotPermutation { n });
        }
        for &s in &sigma {
            if s as usize >= n || seen[s as usize] {
                return Err(PolarityError::NotPermutation { n });
            }
            seen[s as usize] = true;
        }
        Ok(Polarity { plane, sigma })
    }

    pub fn plane(&self) -> &'p ProjectivePlane {
        self.plane
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    pub fn order(&self) -> u64 {
        self.plane.order() as u64
    }

    /// Points of the line paired with point `i`.
    pub fn image(&self, i: u32) -> &[u32] {
        self.plane.structure().line(self.sigma[i as usize] as usize)
    }

    /// Row `i` is the characteristic vector of the line paired with point `i`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.plane.n_points();
        (0..n as u32)
            .map(|i| {
                let mut row = vec![0u8; n];
                for &p in self.image(i) {
                    row[p as usize] = 1;
                }
                row
            })
            .collect()
    }

    /// Points `x` with `x` on its own image.
    pub fn absolute_points(&self) -> Vec<u32> {
        (0..self.plane.n_points() as u32).filter(|&x| self.image(x).binary_search(&x).is_ok()).collect()
    }

    /// `q` on the first line, then `sigma[i]` one per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for s in &self.sigma {
            out.push_str(&format!("{s}\n"));
        }
        out
    }

    /// Parses [`Polarity::to_text`] output against `plane`.
    pub fn from_text(plane: &'p ProjectivePlane, text: &str) -> Result<Self, PolarityError> {
        let mut rows = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let parse = |line_no: usize, s: &str| {
            s.trim().parse::<u64>().map_err(|e| PolarityError::Parse { line_no: line_no + 1, message: format!("{s:?}: {e}") })
        };
        let (i, first) = rows.next().ok_or(PolarityError::Parse { line_no: 1, message: "missing order".into() })?;
        let q = parse(i, first)?;
        if q != plane.order() as u64 {
            return Err(PolarityError::Parse { line_no: i + 1, message: format!("order {q} does not match plane order {}", plane.order()) });
        }
        let sigma = rows.map(|(i, l)| parse(i, l).map(|v| v as u32)).collect::<Result<Vec<_>, _>>()?;
        Polarity::new(plane, sigma)
    }
}

/// The orthogonal polarity `[a:b:c] -> {x : ax + by + cz = 0}`. Points and
/// lines share coordinates in [`ProjectivePlane`], so sigma is the identity.
pub fn orthogonal_polarity(plane: &ProjectivePlane) -> Polarity<'_> {
    Polarity { plane, sigma: (0..plane.n_points() as u32).collect() }
}

/// The orthogonal polarity graph of order `q`.
pub fn orthogonal_polarity_graph(q: u64) -> Result<PolarityGraph, PolarityError> {
    let plane = ProjectivePlane::from_order(q).map_err(|e| PolarityError::Field(e.to_string()))?;
    polarity_graph(&orthogonal_polarity(&plane))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolarityVerdict {
    pub holds: bool,
    /// `(i, j)` with `j` on the image of `i` but `i` not on the image of `j`.
    pub witness: Option<(u32, u32)>,
}

/// Whether the incidence matrix induced by `pi` is symmetric.
pub fn verify_polarity(pi: &Polarity<'_>) -> PolarityVerdict {
    let n = pi.plane.n_points() as u32;
    let witness = (0..n)
        .into_par_iter()
        .find_map_first(|i| pi.image(i).iter().find(|&&j| pi.image(j).binary_search(&i).is_err()).map(|&j| (i, j)));
    PolarityVerdict { holds: witness.is_none(), witness }
}

/// A polarity graph together with its absolute points.
#[derive(Debug, Clone)]
pub struct PolarityGraph {
    pub q: u64,
    pub graph: Graph,
    pub absolute_points: Vec<u32>,
    /// `m` in `a = q + 1 + m sqrt(q)`.
    pub m_pi: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LambdaReport {
    pub q: u64,
    pub edges: u64,
    /// The value comes from one constructed polarity, not a maximum over all.
    pub lower_bound_only: bool,
}

impl PolarityGraph {
    pub fn lambda_report(&self) -> LambdaReport {
        LambdaReport { q: self.q, edges: self.graph.m() as u64, lower_bound_only: true }
    }

    /// Vertices of degree `q`.
    pub fn degree_q_vertices(&self) -> Vec<u32> {
        (0..self.graph.n() as u32).filter(|&v| self.graph.degree(v) as u64 == self.q).collect()
    }
}

fn exact_sqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

/// Builds `G(pi)`: `x ~ y` iff `x` lies on the image of `y`, loops dropped.
pub fn polarity_graph(pi: &Polarity<'_>) -> Result<PolarityGraph, PolarityError> {
    if let Some((i, j)) = verify_polarity(pi).witness {
        return Err(PolarityError::NotAPolarity(j, i));
    }
    let q = pi.order();
    let n = pi.plane.n_points() as u32;
    let mut edges = Vec::new();
    for x in 0..n {
        edges.extend(pi.image(x).iter().filter(|&&y| y > x).map(|&y| (x, y)));
    }
    let graph = Graph::from_edges(n as usize, &edges).expect("line points are in range");
    let absolute_points = pi.absolute_points();
    let a = absolute_points.len() as u64;
    let baer = PolarityError::BaerViolation { q, absolute: a };
    if a < q + 1 {
        return Err(baer);
    }
    let m_pi = match exact_sqrt(q) {
        Some(s) if (a - q - 1) % s == 0 => (a - q - 1) / s,
        None if a == q + 1 => 0,
        _ => return Err(baer),
    };
    let root = exact_sqrt(q).unwrap_or(0);
    if 2 * graph.m() as u64 + m_pi * root != q * (q + 1) * (q + 1) {
        return Err(PolarityError::InvariantViolated(format!("{} edges", graph.m())));
    }
    for v in 0..n {
        let d = graph.degree(v) as u64;
        let absolute = absolute_points.binary_search(&v).is_ok();
        if d != if absolute { q } else { q + 1 } {
            return Err(PolarityError::InvariantViolated(format!("vertex {v} has degree {d}")));
        }
    }
    if !is_c4_free(&graph) {
        return Err(PolarityError::InvariantViolated("graph contains a 4-cycle".into()));
    }
    Ok(PolarityGraph { q, graph, absolute_points, m_pi })
}

/// The vertex `w` of degree `q+1` whose neighborhood is exactly the set of
/// degree-`q` vertices (even `q`).
pub fn special_vertex_w(g: &PolarityGraph) -> Result<u32, PolarityError> {
    if g.q % 2 == 1 {
        return Err(PolarityError::OddOrder(g.q));
    }
    let low = g.degree_q_vertices();
    let found: Vec<u32> = (0..g.graph.n() as u32)
        .filter(|&v| g.graph.degree(v) as u64 == g.q + 1 && g.graph.neighbors(v) == &low[..])
        .collect();
    match found.as_slice() {
        [] => Err(PolarityError::NotFound),
        [w] => Ok(*w),
        _ => Err(PolarityError::NotUnique(found)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndependenceVerdict {
    pub holds: bool,
    pub witness: Option<(u32, u32)>,
}

/// Whether the vertices of degree `q` form an independent set.
pub fn degree_q_independence(g: &Graph, q: u64) -> IndependenceVerdict {
    let witness = g.edges().find(|&(u, v)| g.degree(u) as u64 == q && g.degree(v) as u64 == q);
    IndependenceVerdict { holds: witness.is_none(), witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sum_of_squares_zero(plane: &ProjectivePlane, i: usize) -> bool {
        let t = plane.coords(i);
        plane.bilinear(t, t) == 0
    }

    #[test]
    fn orthogonal_absolute_points() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let plane = ProjectivePlane::from_order(q).unwrap();
            let pi = orthogonal_polarity(&plane);
            assert!(verify_polarity(&pi).holds, "q={q}");
            let abs = pi.absolute_points();
            assert_eq!(abs.len() as u64, q + 1, "q={q}");
            // independent oracle: a^2 + b^2 + c^2 = 0
            let by_scan: Vec<u32> = (0..plane.n_points()).filter(|&i| sum_of_squares_zero(&plane, i)).map(|i| i as u32).collect();
            assert_eq!(abs, by_scan);
        }
    }

    #[test]
    fn matrix_is_symmetric() {
        let plane = ProjectivePlane::from_order(5).unwrap();
        let m = orthogonal_polarity(&plane).incidence_matrix();
        for i in 0..m.len() {
            for j in 0..m.len() {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
    }

    #[test]
    fn swapped_sigma_fails() {
        let plane = ProjectivePlane::from_order(3).unwrap();
        let mut sigma: Vec<u32> = (0..13).collect();
        sigma.swap(2, 7);
        let pi = Polarity::new(&plane, sigma).unwrap();
        let v = verify_polarity(&pi);
        assert!(!v.holds);
        let (i, j) = v.witness.unwrap();
        assert!(pi.image(i).contains(&j) && !pi.image(j).contains(&i));
    }

    #[test]
    fn shuffled_line_indexing_breaks_identity_pairing() {
        let plane = ProjectivePlane::from_order(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut sigma: Vec<u32> = (0..21).collect();
            sigma.shuffle(&mut rng);
            let pi = Polarity::new(&plane, sigma).unwrap();
            assert!(!verify_polarity(&pi).holds);
        }
    }

    #[test]
    fn adjacency_symmetry_matches_matrix_symmetry() {
        let plane = ProjectivePlane::from_order(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let mut sigma: Vec<u32> = (0..13).collect();
            if trial % 2 == 1 {
                sigma.shuffle(&mut rng);
            }
            let pi = Polarity::new(&plane, sigma).unwrap();
            // directed relation x -> y iff y on the image of x
            let mut arcs = std::collections::HashSet::new();
            for x in 0..13u32 {
                for &y in pi.image(x) {
                    arcs.insert((x, y));
                }
            }
            let symmetric = arcs.iter().all(|&(x, y)| arcs.contains(&(y, x)));
            assert_eq!(symmetric, verify_polarity(&pi).holds);
        }
    }

    #[test]
    fn rejects_non_permutation() {
        let plane = ProjectivePlane::from_order(2).unwrap();
        assert!(Polarity::new(&plane, vec![0, 0, 1, 2, 3, 4, 5]).is_err());
        assert!(Polarity::new(&plane, vec![0, 1]).is_err());
    }

    #[test]
    fn graph_sizes() {
        let plane = ProjectivePlane::from_order(2).unwrap();
        let g = polarity_graph(&orthogonal_polarity(&plane)).unwrap();
        assert_eq!((g.graph.n(), g.graph.m(), g.degree_q_vertices().len()), (7, 9, 3));
        let plane = ProjectivePlane::from_order(8).unwrap();
        let g = polarity_graph(&orthogonal_polarity(&plane)).unwrap();
        assert_eq!((g.graph.n(), g.graph.m(), g.degree_q_vertices().len()), (73, 324, 9));
        assert_eq!(g.m_pi, 0);
        assert_eq!(g.lambda_report(), LambdaReport { q: 8, edges: 324, lower_bound_only: true });
    }

    #[test]
    fn non_polarity_graph_is_rejected() {
        let plane = ProjectivePlane::from_order(3).unwrap();
        let mut sigma: Vec<u32> = (0..13).collect();
        sigma.swap(0, 1);
        let pi = Polarity::new(&plane, sigma).unwrap();
        assert!(matches!(polarity_graph(&pi), Err(PolarityError::NotAPolarity(..))));
    }

    #[test]
    fn special_vertex() {
        let plane = ProjectivePlane::from_order(2).unwrap();
        let g = polarity_graph(&orthogonal_polarity(&plane)).unwrap();
        let w = special_vertex_w(&g).unwrap();
        assert_eq!(g.graph.neighbors(w), &g.degree_q_vertices()[..]);
        let plane = ProjectivePlane::from_order(4).unwrap();
        let g = polarity_graph(&orthogonal_polarity(&plane)).unwrap();
        assert_eq!(g.graph.degree(special_vertex_w(&g).unwrap()), 5);
        let plane = ProjectivePlane::from_order(3).unwrap();
        let g = polarity_graph(&orthogonal_polarity(&plane)).unwrap();
        assert_eq!(special_vertex_w(&g), Err(PolarityError::OddOrder(3)));
    }

    #[test]
    fn independence() {
        for q in [8u64, 16] {
            let plane = ProjectivePlane::from_order(q).unwrap();
            let g = polarity_graph(&orthogonal_polarity(&plane)).unwrap();
            assert!(degree_q_independence(&g.graph, q).holds);
        }
        // path 0-1-2-3: the two inner vertices have degree 2 and are adjacent
        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let v = degree_q_independence(&p, 2);
        assert_eq!(v.witness, Some((1, 2)));
    }

    #[test]
    fn text_round_trip() {
        let plane = ProjectivePlane::from_order(3).unwrap();
        let pi = orthogonal_polarity(&plane);
        let back = Polarity::from_text(&plane, &pi.to_text()).unwrap();
        assert_eq!(back.sigma(), pi.sigma());
        let other = ProjectivePlane::from_order(2).unwrap();
        assert!(Polarity::from_text(&other, &pi.to_text()).is_err());
    }
}
