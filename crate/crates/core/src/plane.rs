//! The Desarguesian plane PG(2, q) built from homogeneous coordinates.

use crate::field::{FieldError, FieldSpec, GaloisField};
use crate::incidence::IncidenceStructure;

/// A homogeneous triple of field-element indices.
pub type Triple = [u32; 3];

/// PG(2, q) with coordinate labels.
///
/// Points and lines are both indexed by their normalized triple (first
/// nonzero coordinate equal to 1) in lexicographic order, so point `i` and
/// line `i` carry the same coordinates. Point `x` lies on line `[a:b:c]` iff
/// `ax + by + cz = 0`.
#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    field: GaloisField,
    coords: Vec<Triple>,
    structure: IncidenceStructure,
}

impl ProjectivePlane {
    pub fn new(spec: FieldSpec) -> Self {
        let field = GaloisField::new(spec);
        let q = field.q();
        let coords = normalized_triples(q);
        let lines: Vec<Vec<u32>> = coords.iter().map(|&abc| points_on_line(&field, abc)).collect();
        let structure = IncidenceStructure::new(coords.len(), lines).expect("valid line indices");
        ProjectivePlane { field, coords, structure }
    }

    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        Ok(Self::new(FieldSpec::for_order(q)?))
    }

    pub fn order(&self) -> u32 {
        self.field.q()
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn n_points(&self) -> usize {
        self.coords.len()
    }

    /// Homogeneous coordinates of point (or line) `i`.
    pub fn coords(&self, i: usize) -> Triple {
        self.coords[i]
    }

    /// Canonical index of a normalized triple.
    pub fn index_of(&self, t: Triple) -> usize {
        triple_index(self.field.q(), t)
    }

    /// Scales a nonzero triple so its first nonzero coordinate is 1.
    pub fn normalize(&self, t: Triple) -> Option<Triple> {
        normalize(&self.field, t)
    }

    pub fn bilinear(&self, x: Triple, y: Triple) -> u32 {
        dot(&self.field, x, y)
    }
}

/// Builds PG(2, q) over the field described by `spec`.
pub fn build_pg2(spec: FieldSpec) -> ProjectivePlane {
    ProjectivePlane::new(spec)
}

fn normalized_triples(q: u32) -> Vec<Triple> {
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    out.push([0, 0, 1]);
    for z in 0..q {
        out.push([0, 1, z]);
    }
    for y in 0..q {
        for z in 0..q {
            out.push([1, y, z]);
        }
    }
    out
}

fn triple_index(q: u32, t: Triple) -> usize {
    match t {
        [0, 0, _] => 0,
        [0, _, z] => 1 + z as usize,
        [_, y, z] => (1 + q + y * q + z) as usize,
    }
}

fn dot(f: &GaloisField, x: Triple, y: Triple) -> u32 {
    f.add(f.add(f.mul(x[0], y[0]), f.mul(x[1], y[1])), f.mul(x[2], y[2]))
}

fn normalize(f: &GaloisField, t: Triple) -> Option<Triple> {
    let lead = *t.iter().find(|&&c| c != 0)?;
    let s = f.inv(lead).ok()?;
    Some([f.mul(t[0], s), f.mul(t[1], s), f.mul(t[2], s)])
}

/// Sorted point indices of the line `[a:b:c]`.
fn points_on_line(f: &GaloisField, [a, b, c]: Triple) -> Vec<u32> {
    let q = f.q();
    // basis (v1, v2) of the solutions of ax + by + cz = 0
    let (v1, v2) = if a != 0 {
        let ai = f.inv(a).unwrap();
        ([f.neg(f.mul(b, ai)), 1, 0], [f.neg(f.mul(c, ai)), 0, 1])
    } else if b != 0 {
        let bi = f.inv(b).unwrap();
        ([1, 0, 0], [0, f.neg(f.mul(c, bi)), 1])
    } else {
        ([1, 0, 0], [0, 1, 0])
    };
    let mut pts = Vec::with_capacity(q as usize + 1);
    pts.push(triple_index(q, normalize(f, v2).unwrap()) as u32);
    for mu in 0..q {
        let v = [
            f.add(v1[0], f.mul(mu, v2[0])),
            f.add(v1[1], f.mul(mu, v2[1])),
            f.add(v1[2], f.mul(mu, v2[2])),
        ];
        pts.push(triple_index(q, normalize(f, v).unwrap()) as u32);
    }
    pts.sort_unstable();
    pts
}
