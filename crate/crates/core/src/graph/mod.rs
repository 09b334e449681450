//! Compact simple graphs in CSR layout.

mod cycles;
mod stats;

pub use cycles::{
    c4_through_edge, count_c4, count_c4_bruteforce, is_c4_free, max_codegree, Cycle4, C4_MAX_DEGREE, C4_MAX_VERTICES,
    MAX_MATERIALIZED_CYCLES,
};
pub use stats::{
    claim_c4_inequality, convexity_bound, neighborhood_family, up_p2_stats, ClaimCheck, ConvexityCheck,
    ConvexityError, GraphStats, NeighborhoodFamily,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: u32, v: u32, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("codegree of a vertex with itself is undefined (vertex {0})")]
    SameVertex(u32),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(u32, u32),
    #[error("({0}, {1}) is already an edge")]
    AlreadyAnEdge(u32, u32),
    #[error("graph too large for exact counting: {0}")]
    TooLarge(String),
    #[error("parse error on line {line_no}: {message}")]
    Parse { line_no: usize, message: String },
}

/// Undirected simple graph with sorted neighbor arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an edge list; duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as u32).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        (u as usize) < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Number of common neighbors of `u` and `v`.
    pub fn codegree(&self, u: u32, v: u32) -> Result<usize, GraphError> {
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        let (a, b) = (self.neighbors(u), self.neighbors(v));
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(c)
    }

    /// A copy with `add` inserted and `remove` deleted.
    pub fn with_changes(&self, add: &[(u32, u32)], remove: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj: Vec<Vec<u32>> = (0..self.n() as u32).map(|v| self.neighbors(v).to_vec()).collect();
        for &(u, v) in remove {
            if !self.has_edge(u, v) {
                return Err(GraphError::NotAnEdge(u, v));
            }
            adj[u as usize].retain(|&x| x != v);
            adj[v as usize].retain(|&x| x != u);
        }
        for &(u, v) in add {
            if u as usize >= self.n() || v as usize >= self.n() {
                return Err(GraphError::VertexOutOfRange { u, v, n: self.n() });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[u32]) -> Graph {
        let edges: Vec<(u32, u32)> = self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])).collect();
        Graph::from_edges(self.n(), &edges).expect("permutation keeps edges valid")
    }

    /// Canonical edge-list text: a `# vertices N` line, then `u v` per edge
    /// with `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# vertices {}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list format. Without a `# vertices N` line the vertex
    /// count is one more than the largest index.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            if let Some(comment) = row.strip_prefix('#') {
                let toks: Vec<&str> = comment.split_whitespace().collect();
                if let ["vertices", count] = toks.as_slice() {
                    n = Some(count.parse().map_err(|e| GraphError::Parse { line_no, message: format!("{e}") })?);
                }
                continue;
            }
            let toks: Vec<&str> = row.split_whitespace().collect();
            let [a, b] = toks.as_slice() else {
                return Err(GraphError::Parse { line_no, message: format!("expected `u v`, got {row:?}") });
            };
            let parse = |t: &str| t.parse::<u32>().map_err(|e| GraphError::Parse { line_no, message: format!("{t:?}: {e}") });
            let (u, v) = (parse(a)?, parse(b)?);
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(_, v)| v as usize + 1).max().unwrap_or(0));
        Graph::from_edges(n, &edges)
    }
}
