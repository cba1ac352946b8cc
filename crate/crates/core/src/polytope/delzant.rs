//! Delzant (smoothness) checks and unimodular normalization at a vertex.

use serde::Serialize;

use super::Polytope;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{Rat, RatVec};

#[derive(Clone, Debug, Serialize)]
pub struct VertexVerdict {
    pub vertex: RatVec,
    /// Primitive edge generators, sorted lexicographically.
    pub generators: Vec<RatVec>,
    /// Determinant of the generator matrix (rows in sorted order), when there are exactly n edges.
    #[serde(with = "crate::rational::serde_opt_rat")]
    pub determinant: Option<Rat>,
    pub delzant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DelzantReport {
    pub vertices: Vec<VertexVerdict>,
    pub delzant: bool,
}

impl DelzantReport {
    pub fn failing_vertices(&self) -> impl Iterator<Item = &VertexVerdict> {
        self.vertices.iter().filter(|v| !v.delzant)
    }

    pub fn verdict_at(&self, v: &RatVec) -> Option<&VertexVerdict> {
        self.vertices.iter().find(|x| &x.vertex == v)
    }
}

/// Checks at every vertex that the primitive edge generators form a basis of ℤⁿ.
pub fn is_delzant(p: &Polytope) -> Result<DelzantReport> {
    if !p.is_full_dimensional() {
        return Err(Error::DegenerateInput("Delzant check needs a full-dimensional polytope".into()));
    }
    if let Some(v) = p.vertices().iter().find(|v| !v.is_integral()) {
        return Err(Error::NotLatticePolytope(v.clone()));
    }
    let n = p.dim();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); p.vertices().len()];
    for (u, w) in p.edges() {
        neighbours[u].push(w);
        neighbours[w].push(u);
    }
    let vertices: Vec<VertexVerdict> = p
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut generators: Vec<RatVec> =
                neighbours[i].iter().map(|&w| (&p.vertices()[w] - v).primitive()).collect();
            generators.sort();
            let determinant = (generators.len() == n)
                .then(|| linalg::determinant(&generators.iter().map(|g| g.0.clone()).collect::<Vec<_>>()));
            let delzant = determinant.as_ref().is_some_and(|d| d.numer().magnitude() == d.denom().magnitude());
            VertexVerdict { vertex: v.clone(), generators, determinant, delzant }
        })
        .collect();
    let delzant = vertices.iter().all(|v| v.delzant);
    Ok(DelzantReport { vertices, delzant })
}

/// The affine lattice automorphism `x ↦ A(x − base)` with `A ∈ GL(n, ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularMap {
    pub matrix: Vec<Vec<i64>>,
    pub base: RatVec,
}

impl UnimodularMap {
    pub fn identity(n: usize) -> Self {
        UnimodularMap {
            matrix: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
            base: RatVec::zeros(n),
        }
    }

    fn rat_matrix(&self) -> Vec<Vec<Rat>> {
        self.matrix.iter().map(|r| r.iter().map(|&x| crate::rational::int(x)).collect()).collect()
    }

    pub fn apply(&self, x: &RatVec) -> RatVec {
        RatVec(linalg::mat_vec(&self.rat_matrix(), &(x - &self.base).0))
    }

    pub fn apply_inverse(&self, y: &RatVec) -> RatVec {
        let inv = linalg::inverse(&self.rat_matrix()).expect("unimodular");
        &RatVec(linalg::mat_vec(&inv, &y.0)) + &self.base
    }
}

/// Moves the Delzant vertex `v` to the origin and its sorted edge generators to
/// `e₁, …, eₙ`, so that the image lies in the positive orthant.
pub fn normalize_at_vertex(p: &Polytope, v: &RatVec) -> Result<(Polytope, UnimodularMap)> {
    let report = is_delzant(p)?;
    let verdict = report.verdict_at(v).ok_or_else(|| Error::NotDelzantVertex {
        vertex: v.clone(),
        reason: "not a vertex of the polytope".into(),
    })?;
    if !verdict.delzant {
        return Err(Error::NotDelzantVertex {
            vertex: v.clone(),
            reason: match &verdict.determinant {
                Some(d) => format!("edge generators have determinant {d}"),
                None => format!("{} edges meet at the vertex", verdict.generators.len()),
            },
        });
    }
    let n = p.dim();
    let mut generators = verdict.generators.clone();
    // An already normalized vertex keeps the identity map.
    let standard: Vec<RatVec> = (0..n).map(|i| RatVec::unit(n, i)).collect();
    if generators.iter().all(|g| standard.contains(g)) {
        generators = standard;
    }
    // Columns of G are the generators; A = G⁻¹.
    let g: Vec<Vec<Rat>> = (0..n).map(|r| generators.iter().map(|gen| gen.0[r].clone()).collect()).collect();
    let a = linalg::inverse(&g).expect("unimodular generator matrix");
    let matrix: Vec<Vec<i64>> = a.iter().map(|row| RatVec(row.clone()).to_i64()).collect();
    let map = UnimodularMap { matrix, base: v.clone() };
    let q = p.map_vertices(n, |x| map.apply(x))?;
    Ok((q, map))
}
