//! Incidence structures (hypergraphs), projective-plane axioms, 1-intersecting
//! families and their extension, and the partial-symmetry check for plane
//! incidence matrices.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("line {line} references point {point}, but there are only {n_points} points")]
    PointOutOfRange { line: usize, point: u32, n_points: usize },
    #[error("line {line} lists point {point} more than once")]
    DuplicatePoint { line: usize, point: u32 },
    #[error("line {line} is empty")]
    EmptyLine { line: usize },
    #[error("parse error on line {line_no}: {message}")]
    Parse { line_no: usize, message: String },
}

/// A hypergraph on points `0..n_points` with an ordered list of lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    n_points: usize,
    lines: Vec<Vec<u32>>,
    point_to_lines: Vec<Vec<u32>>,
}

impl IncidenceStructure {
    /// Builds the structure, sorting each line.
    pub fn new(n_points: usize, lines: Vec<Vec<u32>>) -> Result<Self, IncidenceError> {
        let mut sorted = Vec::with_capacity(lines.len());
        for (idx, mut line) in lines.into_iter().enumerate() {
            if line.is_empty() {
                return Err(IncidenceError::EmptyLine { line: idx });
            }
            line.sort_unstable();
            for w in line.windows(2) {
                if w[0] == w[1] {
                    return Err(IncidenceError::DuplicatePoint { line: idx, point: w[0] });
                }
            }
            if let Some(&last) = line.last() {
                if last as usize >= n_points {
                    return Err(IncidenceError::PointOutOfRange { line: idx, point: last, n_points });
                }
            }
            sorted.push(line);
        }
        let mut point_to_lines = vec![Vec::new(); n_points];
        for (idx, line) in sorted.iter().enumerate() {
            for &p in line {
                point_to_lines[p as usize].push(idx as u32);
            }
        }
        Ok(IncidenceStructure { n_points, lines: sorted, point_to_lines })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line(&self, idx: usize) -> &[u32] {
        &self.lines[idx]
    }

    /// Indices of the lines through `point`, ascending.
    pub fn lines_through(&self, point: usize) -> &[u32] {
        &self.point_to_lines[point]
    }

    pub fn contains(&self, line: usize, point: u32) -> bool {
        self.lines[line].binary_search(&point).is_ok()
    }

    /// The dual structure: lines become points and vice versa.
    pub fn dual(&self) -> IncidenceStructure {
        IncidenceStructure {
            n_points: self.lines.len(),
            lines: self.point_to_lines.clone(),
            point_to_lines: self.lines.clone(),
        }
    }

    /// Incidence matrix with rows indexed by points and columns by lines.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.lines.len()]; self.n_points];
        for (j, line) in self.lines.iter().enumerate() {
            for &p in line {
                m[p as usize][j] = 1;
            }
        }
        m
    }

    /// Treats each row of a 0/1 matrix as a line over the column indices.
    pub fn from_matrix_rows(matrix: &[Vec<u8>]) -> Result<Self, IncidenceError> {
        let n = matrix.first().map_or(0, Vec::len);
        let lines = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, _)| j as u32)
                    .collect()
            })
            .collect();
        Self::new(n, lines)
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("points {} lines {}\n", self.n_points, self.lines.len());
        for line in &self.lines {
            let row: Vec<String> = line.iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, IncidenceError> {
        let mut header: Option<(usize, usize)> = None;
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| IncidenceError::Parse { line_no, message };
            if header.is_none() {
                let toks: Vec<&str> = row.split_whitespace().collect();
                match toks.as_slice() {
                    ["points", n, "lines", l] => {
                        let n = n.parse().map_err(|e| parse_err(format!("points: {e}")))?;
                        let l = l.parse().map_err(|e| parse_err(format!("lines: {e}")))?;
                        header = Some((n, l));
                    }
                    _ => return Err(parse_err("expected header `points N lines L`".into())),
                }
                continue;
            }
            let pts = row
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| parse_err(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            lines.push(pts);
        }
        let (n, l) = header.ok_or(IncidenceError::Parse { line_no: 0, message: "missing header".into() })?;
        if lines.len() != l {
            return Err(IncidenceError::Parse {
                line_no: 0,
                message: format!("header declares {l} lines, found {}", lines.len()),
            });
        }
        Self::new(n, lines)
    }
}

/// Two lines (or points, for the dual check) whose intersection is not a
/// single element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub first: u32,
    pub second: u32,
    pub common: usize,
}

/// First pair `first < second` (lexicographically) of lines in `s` that do not
/// meet in exactly one point.
pub fn first_non_unit_intersection(s: &IncidenceStructure) -> Option<PairWitness> {
    let n_lines = s.n_lines();
    (0..n_lines)
        .into_par_iter()
        .map_init(
            || vec![0u32; n_lines],
            |count, l1| {
                for &p in s.line(l1) {
                    for &l2 in s.lines_through(p as usize) {
                        if l2 as usize > l1 {
                            count[l2 as usize] += 1;
                        }
                    }
                }
                let mut found = None;
                for l2 in l1 + 1..n_lines {
                    if found.is_none() && count[l2] != 1 {
                        found = Some(PairWitness {
                            first: l1 as u32,
                            second: l2 as u32,
                            common: count[l2] as usize,
                        });
                    }
                    count[l2] = 0;
                }
                found
            },
        )
        .find_first(Option::is_some)
        .flatten()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OneIntersecting {
    pub holds: bool,
    pub witness: Option<PairWitness>,
}

/// Whether every two distinct lines share exactly one point.
pub fn is_one_intersecting(s: &IncidenceStructure) -> OneIntersecting {
    let witness = first_non_unit_intersection(s);
    OneIntersecting { holds: witness.is_none(), witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Counts,
    Uniformity,
    Regularity,
    LineIntersection,
    PointPairCoverage,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Counts => "point and line counts are not equal to q^2+q+1",
            Axiom::Uniformity => "a line does not have q+1 points",
            Axiom::Regularity => "a point is not on q+1 lines",
            Axiom::LineIntersection => "two lines share \u{2260}1 point",
            Axiom::PointPairCoverage => "two points lie on \u{2260}1 common line",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub message: String,
    pub witness: Vec<u64>,
}

/// Outcome of [`verify_projective_plane`].
///
/// Every axiom is checked; `violations` holds at most one witness per axiom,
/// in checking order, so the first entry is the first failing axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneVerdict {
    pub order: Option<u64>,
    pub violations: Vec<Violation>,
}

impl PlaneVerdict {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// `q` with `q^2 + q + 1 = n`, if any.
pub fn plane_order_for(n: usize) -> Option<u64> {
    let n = n as u64;
    if n < 3 {
        return None;
    }
    let mut q = ((n as f64).sqrt() as u64).saturating_sub(1);
    while q * q + q + 1 < n {
        q += 1;
    }
    (q * q + q + 1 == n && q >= 1).then_some(q)
}

/// Checks the projective-plane axioms in order: counts, uniformity,
/// regularity, pairwise line intersections, point-pair coverage.
pub fn verify_projective_plane(s: &IncidenceStructure) -> PlaneVerdict {
    let mut violations = Vec::new();
    let n = s.n_points();
    let l = s.n_lines();
    let order = plane_order_for(n);
    if order.is_none() || n != l {
        violations.push(Violation {
            axiom: Axiom::Counts,
            message: format!("{} (points {n}, lines {l})", Axiom::Counts),
            witness: vec![n as u64, l as u64],
        });
    }
    // Fall back to the first line size so the remaining axioms still report.
    let q = order.or_else(|| s.lines().first().map(|line| line.len() as u64 - 1));
    if let Some(q) = q {
        let k = (q + 1) as usize;
        if let Some((idx, line)) = s.lines().iter().enumerate().find(|(_, line)| line.len() != k) {
            violations.push(Violation {
                axiom: Axiom::Uniformity,
                message: format!("line {idx} has {} points, expected {k}", line.len()),
                witness: vec![idx as u64, line.len() as u64],
            });
        }
        if let Some(p) = (0..n).find(|&p| s.lines_through(p).len() != k) {
            let deg = s.lines_through(p).len();
            violations.push(Violation {
                axiom: Axiom::Regularity,
                message: format!("point {p} lies on {deg} lines, expected {k}"),
                witness: vec![p as u64, deg as u64],
            });
        }
    }
    if let Some(w) = first_non_unit_intersection(s) {
        violations.push(Violation {
            axiom: Axiom::LineIntersection,
            message: format!("{}: lines {} and {} share {} points", Axiom::LineIntersection, w.first, w.second, w.common),
            witness: vec![w.first as u64, w.second as u64, w.common as u64],
        });
    }
    if let Some(w) = first_non_unit_intersection(&s.dual()) {
        violations.push(Violation {
            axiom: Axiom::PointPairCoverage,
            message: format!("points {} and {} lie on {} common lines", w.first, w.second, w.common),
            witness: vec![w.first as u64, w.second as u64, w.common as u64],
        });
    }
    PlaneVerdict { order, violations }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error("base family is not a 1-intersecting (q+1)-uniform family on q^2+q+1 points: {0}")]
    BadBase(String),
    #[error("candidate {candidate} is not (q+1)-uniform or repeats a family line")]
    BadCandidate { candidate: usize },
    #[error("no witness sunflower for candidate {candidate}")]
    NoWitnessSunflower { candidate: usize },
    #[error("hypothesis violated: extended family is not 1-intersecting ({0:?})")]
    HypothesisViolated(PairWitness),
}

/// Result of [`extend_one_intersecting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub structure: IncidenceStructure,
    /// Per candidate: the common point and the indices (into
    /// `structure.lines()`) of the `q` witness lines.
    pub witnesses: Vec<(u32, Vec<u32>)>,
}

/// Adds candidate lines one at a time to a 1-intersecting `(q+1)`-uniform
/// family, each time finding `q` family lines `h_1..h_q` through a common point
/// `u` of the candidate `f` with `f ∪ h_1 ∪ … ∪ h_q = V` and
/// `f ∩ h_1 ∩ … ∩ h_q = {u}`.
pub fn extend_one_intersecting(
    base: &IncidenceStructure,
    candidates: &[Vec<u32>],
) -> Result<Extension, ExtendError> {
    let n = base.n_points();
    let q = plane_order_for(n).ok_or_else(|| ExtendError::BadBase(format!("{n} points")))? as usize;
    if let Some(line) = base.lines().iter().position(|l| l.len() != q + 1) {
        return Err(ExtendError::BadBase(format!("line {line} has wrong size")));
    }
    if let Some(w) = first_non_unit_intersection(base) {
        return Err(ExtendError::BadBase(format!("{w:?}")));
    }

    let mut family: Vec<Vec<u32>> = base.lines().to_vec();
    let mut through: Vec<Vec<u32>> = (0..n).map(|p| base.lines_through(p).to_vec()).collect();
    let mut witnesses = Vec::with_capacity(candidates.len());
    let mut mark = vec![0u32; n];

    for (ci, cand) in candidates.iter().enumerate() {
        let mut f = cand.clone();
        f.sort_unstable();
        f.dedup();
        if f.len() != q + 1 || f.iter().any(|&p| p as usize >= n) || family.contains(&f) {
            return Err(ExtendError::BadCandidate { candidate: ci });
        }
        let mut found = None;
        for &u in &f {
            let hs = &through[u as usize];
            if hs.len() != q {
                continue;
            }
            // cover check: every point marked, only u marked by all q+1 sets
            mark.iter_mut().for_each(|m| *m = 0);
            for &p in &f {
                mark[p as usize] += 1;
            }
            for &h in hs {
                for &p in &family[h as usize] {
                    mark[p as usize] += 1;
                }
            }
            let covers = mark.iter().all(|&m| m > 0);
            let core: Vec<usize> = (0..n).filter(|&p| mark[p] as usize == q + 1).collect();
            if covers && core == [u as usize] {
                found = Some((u, hs.clone()));
                break;
            }
        }
        let Some(witness) = found else {
            return Err(ExtendError::NoWitnessSunflower { candidate: ci });
        };
        let idx = family.len() as u32;
        for &p in &f {
            through[p as usize].push(idx);
        }
        family.push(f);
        witnesses.push(witness);
    }

    let structure = IncidenceStructure::new(n, family).expect("lines validated above");
    if let Some(w) = first_non_unit_intersection(&structure) {
        debug_assert!(false, "extension produced a non 1-intersecting family: {w:?}");
        return Err(ExtendError::HypothesisViolated(w));
    }
    Ok(Extension { structure, witnesses })
}

/// True iff `q ≡ 1, 2 (mod 4)` and `q` is not a sum of two squares, in which
/// case no projective plane of order `q` exists.
pub fn bruck_ryser_excluded(q: u64) -> bool {
    if q % 4 != 1 && q % 4 != 2 {
        return false;
    }
    let mut a: u64 = 0;
    while a * a <= q {
        let rest = q - a * a;
        let b = rest.isqrt();
        if b * b == rest {
            return false;
        }
        a += 1;
    }
    true
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("not a plane incidence matrix: {0}")]
    NotPlaneMatrix(String),
}

/// Outcome of [`partial_symmetry_verify`]. Witnesses are 0-based `(row, col)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialSymmetry {
    pub threshold: usize,
    pub premise_holds: bool,
    pub fully_symmetric: bool,
    pub premise_witness: Option<(usize, usize)>,
    pub asymmetry_witness: Option<(usize, usize)>,
}

impl PartialSymmetry {
    /// Premise satisfied but the matrix is not symmetric; impossible for a
    /// genuine plane.
    pub fn is_contradiction(&self) -> bool {
        self.premise_holds && !self.fully_symmetric
    }
}

/// Checks whether `m_ij = m_ji` whenever `i <= q^2-q+3` or `j <= q^2-q+3`
/// (1-based), and whether the whole matrix is symmetric.
pub fn partial_symmetry_verify(matrix: &[Vec<u8>], q: u64) -> Result<PartialSymmetry, SymmetryError> {
    let n = (q * q + q + 1) as usize;
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(SymmetryError::NotPlaneMatrix(format!("expected {n}x{n} matrix")));
    }
    if matrix.iter().flatten().any(|&x| x > 1) {
        return Err(SymmetryError::NotPlaneMatrix("entries must be 0 or 1".into()));
    }
    let s = IncidenceStructure::from_matrix_rows(matrix)
        .map_err(|e| SymmetryError::NotPlaneMatrix(e.to_string()))?;
    let verdict = verify_projective_plane(&s);
    if let Some(v) = verdict.first_violation() {
        return Err(SymmetryError::NotPlaneMatrix(v.message.clone()));
    }
    let threshold = (q * q - q + 3) as usize;
    let mut premise_witness = None;
    let mut asymmetry_witness = None;
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                asymmetry_witness.get_or_insert((i, j));
                if (i < threshold || j < threshold) && premise_witness.is_none() {
                    premise_witness = Some((i, j));
                }
            }
        }
    }
    Ok(PartialSymmetry {
        threshold,
        premise_holds: premise_witness.is_none(),
        fully_symmetric: asymmetry_witness.is_none(),
        premise_witness,
        asymmetry_witness,
    })
}
