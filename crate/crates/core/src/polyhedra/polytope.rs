use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::PolyCone;
use crate::ratlinalg::{rank, Rat, RatVector};

/// A face of a polytope: its vertex indices and a supporting hyperplane
/// `<normal, x> + offset >= 0`, tight exactly on the face's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub normal: RatVector,
    pub offset: Rat,
}

impl Face {
    pub fn evaluate(&self, x: &RatVector) -> Rat {
        self.normal.dot(x) + &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<RatVector>,
    /// Nonempty faces, the polytope itself last; sorted by dimension then vertex set.
    faces: Vec<Face>,
    /// Indices of the facets within `faces`.
    facets: Vec<usize>,
    dim: Option<usize>,
}

impl Polytope {
    pub fn empty(ambient_dim: usize) -> Polytope {
        Polytope {
            ambient_dim,
            vertices: Vec::new(),
            faces: Vec::new(),
            facets: Vec::new(),
            dim: None,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; `None` for the empty polytope.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    pub fn facets(&self) -> impl Iterator<Item = &Face> {
        self.facets.iter().map(|&i| &self.faces[i])
    }

    /// Index of `p` among the vertices.
    pub fn vertex_index(&self, p: &RatVector) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Whether the given vertex set is exactly the vertex set of some face.
    pub fn is_face(&self, vertex_set: &[usize]) -> bool {
        let mut s = vertex_set.to_vec();
        s.sort_unstable();
        s.dedup();
        self.faces.iter().any(|f| f.vertices == s)
    }
}

fn affine_dim(points: &[&RatVector]) -> usize {
    let lifted: Vec<RatVector> = points.iter().map(|p| lift(p)).collect();
    rank(&lifted).saturating_sub(1)
}

fn lift(p: &RatVector) -> RatVector {
    let mut e = p.entries().to_vec();
    e.push(Rat::one());
    RatVector::new(e)
}

/// Convex hull of `points` with its full face lattice.
pub fn polytope_faces(points: &[RatVector]) -> Polytope {
    let Some(first) = points.first() else {
        return Polytope::empty(0);
    };
    let d = first.len();
    let lifted: Vec<RatVector> = points.iter().map(lift).collect();
    let cone = PolyCone::from_generators(d + 1, &lifted, &[]).expect("consistent dimensions");

    let mut vertices: Vec<RatVector> = cone
        .generators()
        .iter()
        .map(|r| {
            let h = r[d].clone();
            RatVector::new(r[..d].iter().map(|x| x / &h).collect())
        })
        .collect();
    vertices.sort();

    // facet vertex sets from the homogenized cone
    let facet_rows: Vec<(RatVector, Rat, BTreeSet<usize>)> = cone
        .inequalities()
        .iter()
        .map(|a| {
            let normal = RatVector::new(a[..d].to_vec());
            let offset = a[d].clone();
            let tight: BTreeSet<usize> = vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| (normal.dot(v) + &offset).is_zero())
                .map(|(i, _)| i)
                .collect();
            (normal, offset, tight)
        })
        .collect();

    // close facet vertex sets under intersection
    let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<usize>> = Vec::new();
    for (_, _, t) in &facet_rows {
        if !t.is_empty() && sets.insert(t.clone()) {
            frontier.push(t.clone());
        }
    }
    while let Some(s) = frontier.pop() {
        for (_, _, t) in &facet_rows {
            let i: BTreeSet<usize> = s.intersection(t).cloned().collect();
            if !i.is_empty() && sets.insert(i.clone()) {
                frontier.push(i);
            }
        }
    }

    let all: BTreeSet<usize> = (0..vertices.len()).collect();
    let full_dim = affine_dim(&vertices.iter().collect::<Vec<_>>());
    let mut faces: Vec<Face> = sets
        .into_iter()
        .filter(|s| *s != all)
        .map(|s| {
            let mut normal = RatVector::zeros(d);
            let mut offset = Rat::zero();
            for (n, o, t) in &facet_rows {
                if s.is_subset(t) {
                    normal = normal.add(n);
                    offset += o;
                }
            }
            let pts: Vec<&RatVector> = s.iter().map(|&i| &vertices[i]).collect();
            Face {
                dim: affine_dim(&pts),
                vertices: s.into_iter().collect(),
                normal,
                offset,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let facets: Vec<usize> = faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.dim + 1 == full_dim)
        .map(|(i, _)| i)
        .collect();
    faces.push(Face {
        vertices: all.into_iter().collect(),
        dim: full_dim,
        normal: RatVector::zeros(d),
        offset: Rat::zero(),
    });
    debug_assert!(faces.iter().all(|f| vertices.iter().enumerate().all(|(i, v)| {
        let val = f.evaluate(v);
        if f.vertices.contains(&i) {
            val.is_zero()
        } else {
            val.is_positive()
        }
    })));
    Polytope {
        ambient_dim: d,
        vertices,
        faces,
        facets,
        dim: Some(full_dim),
    }
}
