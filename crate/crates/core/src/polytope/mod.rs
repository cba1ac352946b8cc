//! Exact rational convex polytopes.
//!
//! A [`Polytope`] carries both descriptions: its vertices (sorted
//! lexicographically) and an irredundant inequality system. Polytopes that are
//! not full-dimensional additionally carry the equations of their affine hull
//! and a coordinate chart, a set of coordinates on which the projection of the
//! affine hull is injective. Facets of such polytopes are relative facets,
//! written in ambient coordinates with zero weight on the non-chart
//! coordinates. The empty polytope is an ordinary value.

mod delzant;
mod json;

pub use delzant::{is_delzant, normalize_at_vertex, DelzantReport, UnimodularMap, VertexVerdict};
pub use json::{PolytopeJson, HalfSpaceJson};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{ceil_to_i64, floor_to_i64, int, primitive_integer, Rat, RatVec};

/// The closed half-space `{x : ⟨normal, x⟩ ≤ offset}` (or, when used as an
/// equation, the hyperplane `⟨normal, x⟩ = offset`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct HalfSpace {
    pub normal: RatVec,
    #[serde(with = "crate::rational::serde_rat")]
    pub offset: Rat,
}

impl HalfSpace {
    pub fn new(normal: RatVec, offset: Rat) -> Self {
        HalfSpace { normal, offset }
    }

    /// Rescales so that the normal is a primitive integer vector.
    pub fn normalized(&self) -> HalfSpace {
        let Some(j) = self.normal.0.iter().position(|a| !a.is_zero()) else {
            return self.clone();
        };
        let normal = self.normal.primitive();
        let scale = &normal.0[j] / &self.normal.0[j];
        HalfSpace { offset: &self.offset * &scale, normal }
    }

    pub fn slack(&self, x: &RatVec) -> Rat {
        &self.offset - self.normal.dot(x)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        !self.slack(x).is_negative()
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, x⟩ ≤ {}", self.normal, self.offset)
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatVec>,
    facets: Vec<HalfSpace>,
    equations: Vec<HalfSpace>,
    chart: Vec<usize>,
    /// For every facet, the indices of the vertices lying on it.
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

fn check_dims(n: usize, points: &[RatVec]) -> Result<()> {
    for p in points {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
        }
    }
    Ok(())
}

impl Polytope {
    pub fn empty(dim: usize) -> Self {
        Polytope {
            dim,
            vertices: Vec::new(),
            facets: Vec::new(),
            equations: Vec::new(),
            chart: Vec::new(),
            incidence: Vec::new(),
        }
    }

    /// Convex hull of a full-dimensional point set.
    pub fn hull(points: &[RatVec]) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::DegenerateInput("no points".into()))?;
        let p = Self::conv(first.dim(), points)?;
        if !p.is_full_dimensional() {
            return Err(Error::DegenerateInput(format!(
                "affine span has dimension {} < {}",
                p.affine_dim().unwrap_or(0),
                p.dim
            )));
        }
        Ok(p)
    }

    /// Convex hull of an arbitrary finite point set in ℚⁿ, of any affine dimension.
    pub fn conv(dim: usize, points: &[RatVec]) -> Result<Self> {
        check_dims(dim, points)?;
        let pts: Vec<RatVec> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return Ok(Self::empty(dim));
        }
        let p0 = pts[0].clone();
        let mut dirs: Vec<Vec<Rat>> = pts[1..].iter().map(|p| (p - &p0).0).collect();
        let equations: Vec<HalfSpace> = linalg::null_space(&dirs, dim)
            .into_iter()
            .map(|c| {
                let normal = RatVec(c).primitive();
                let offset = normal.dot(&p0);
                HalfSpace { normal, offset }
            })
            .collect();
        let chart = linalg::rref(&mut dirs, dim);
        let d = chart.len();
        if d == 0 {
            return Ok(Polytope {
                dim,
                vertices: vec![p0],
                facets: Vec::new(),
                equations,
                chart,
                incidence: Vec::new(),
            });
        }
        let project = |p: &RatVec| -> Vec<Rat> { chart.iter().map(|&c| p.0[c].clone()).collect() };
        let rows: Vec<Vec<BigInt>> = pts
            .iter()
            .map(|p| {
                let mut r = vec![Rat::one()];
                r.extend(project(p));
                primitive_integer(&r)
            })
            .collect();
        let rays = linalg::extreme_rays(&rows, d + 1).expect("chart coordinates are affinely independent");
        let mut facets: Vec<HalfSpace> = rays
            .into_iter()
            .map(|ray| {
                // y0 + ⟨y', x⟩ ≥ 0  ⇔  ⟨-y', x⟩ ≤ y0
                let mut normal = RatVec::zeros(dim);
                for (k, &c) in chart.iter().enumerate() {
                    normal.0[c] = Rat::from_integer(-ray[k + 1].clone());
                }
                HalfSpace { normal, offset: Rat::from_integer(ray[0].clone()) }.normalized()
            })
            .collect();
        facets.sort();
        facets.dedup();
        let chart_normals: Vec<Vec<Rat>> =
            facets.iter().map(|h| chart.iter().map(|&c| h.normal.0[c].clone()).collect()).collect();
        let vertices: Vec<RatVec> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rat>> = facets
                    .iter()
                    .zip(&chart_normals)
                    .filter(|(h, _)| h.slack(p).is_zero())
                    .map(|(_, n)| n.clone())
                    .collect();
                linalg::rank(&tight, d) == d
            })
            .collect();
        let incidence = facets
            .iter()
            .map(|h| (0..vertices.len()).filter(|&i| h.slack(&vertices[i]).is_zero()).collect())
            .collect();
        Ok(Polytope { dim, vertices, facets, equations, chart, incidence })
    }

    /// Vertex enumeration of `{x : ⟨a, x⟩ ≤ b}` for a bounded system.
    pub fn from_inequalities(dim: usize, halfspaces: &[HalfSpace]) -> Result<Self> {
        for h in halfspaces {
            if h.normal.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: h.normal.dim() });
            }
        }
        let mut rows: Vec<Vec<BigInt>> = halfspaces
            .iter()
            .map(|h| {
                let mut r = vec![h.offset.clone()];
                r.extend(h.normal.0.iter().map(|a| -a));
                primitive_integer(&r)
            })
            .collect();
        let mut t_row = vec![BigInt::one()];
        t_row.extend(std::iter::repeat_n(BigInt::zero(), dim));
        rows.push(t_row);
        let rays = linalg::extreme_rays(&rows, dim + 1)
            .ok_or_else(|| Error::DegenerateInput("inequality system is unbounded".into()))?;
        let mut vertices = Vec::new();
        for ray in rays {
            if ray[0].is_zero() {
                return Err(Error::DegenerateInput("inequality system is unbounded".into()));
            }
            let t = Rat::from_integer(ray[0].clone());
            vertices.push(RatVec(ray[1..].iter().map(|x| Rat::from_integer(x.clone()) / &t).collect()));
        }
        Self::conv(dim, &vertices)
    }

    /// The standard simplex `conv{0, e₁, …, eₙ}` scaled by `scale`.
    pub fn simplex(dim: usize, scale: &Rat) -> Self {
        let mut pts = vec![RatVec::zeros(dim)];
        pts.extend((0..dim).map(|i| RatVec::unit(dim, i).scale(scale)));
        Self::conv(dim, &pts).expect("simplex")
    }

    /// The box `[0, a]ⁿ`.
    pub fn cube(dim: usize, side: &Rat) -> Self {
        let pts: Vec<RatVec> = (0..1usize << dim)
            .map(|mask| RatVec((0..dim).map(|i| if mask >> i & 1 == 1 { side.clone() } else { Rat::zero() }).collect()))
            .collect();
        Self::conv(dim, &pts).expect("cube")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Equations `⟨c, x⟩ = d` of the affine hull (empty when full-dimensional).
    pub fn equations(&self) -> &[HalfSpace] {
        &self.equations
    }

    /// Coordinates on which the affine hull projects injectively.
    pub fn chart(&self) -> &[usize] {
        &self.chart
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `None` for the empty polytope.
    pub fn affine_dim(&self) -> Option<usize> {
        (!self.is_empty()).then_some(self.chart.len())
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == Some(self.dim)
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(RatVec::is_integral)
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        if self.is_empty() {
            return false;
        }
        self.equations.iter().all(|e| e.slack(x).is_zero()) && self.facets.iter().all(|h| h.contains(x))
    }

    /// `x` lies in the interior (only possible when full-dimensional).
    pub fn contains_interior(&self, x: &RatVec) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|h| h.slack(x).is_positive())
    }

    /// `max_{v ∈ P} ⟨v, x⟩`; `None` for the empty polytope.
    pub fn support(&self, x: &RatVec) -> Option<Rat> {
        self.vertices.iter().map(|v| v.dot(x)).max()
    }

    pub fn support_f64(&self, x: &[f64]) -> f64 {
        self.vertices.iter().map(|v| v.dot_f64(x)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Image under an affine map applied to the vertices.
    pub fn map_vertices(&self, target_dim: usize, f: impl Fn(&RatVec) -> RatVec) -> Result<Polytope> {
        let pts: Vec<RatVec> = self.vertices.iter().map(f).collect();
        Polytope::conv(target_dim, &pts)
    }

    pub fn dilate(&self, k: &Rat) -> Polytope {
        self.map_vertices(self.dim, |v| v.scale(k)).expect("dilation preserves dimension")
    }

    pub fn translate(&self, t: &RatVec) -> Polytope {
        self.map_vertices(self.dim, |v| v + t).expect("translation preserves dimension")
    }

    pub fn permute_coordinates(&self, perm: &[usize]) -> Polytope {
        self.map_vertices(self.dim, |v| v.permuted(perm)).expect("permutation preserves dimension")
    }

    /// Pairs of vertex indices spanning an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let Some(d) = self.affine_dim() else { return Vec::new() };
        if d == 0 {
            return Vec::new();
        }
        let per_vertex: Vec<Vec<usize>> = (0..self.vertices.len())
            .map(|v| (0..self.facets.len()).filter(|&f| self.incidence[f].contains(&v)).collect())
            .collect();
        let mut out = Vec::new();
        for u in 0..self.vertices.len() {
            for w in u + 1..self.vertices.len() {
                let common: Vec<Vec<Rat>> = per_vertex[u]
                    .iter()
                    .filter(|f| per_vertex[w].contains(f))
                    .map(|&f| self.chart.iter().map(|&c| self.facets[f].normal.0[c].clone()).collect())
                    .collect();
                if common.len() + 1 < d {
                    continue;
                }
                if linalg::rank(&common, d) == d - 1 {
                    out.push((u, w));
                }
            }
        }
        out
    }

    /// Integer points of the dilate `kP`, sorted lexicographically.
    pub fn lattice_points(&self, k: u32) -> Vec<RatVec> {
        if self.is_empty() {
            return Vec::new();
        }
        let kr = int(k as i64);
        let n = self.dim;
        let lo: Vec<i64> = (0..n).map(|i| ceil_to_i64(&(&kr * self.vertices.iter().map(|v| &v.0[i]).min().unwrap()))).collect();
        let hi: Vec<i64> = (0..n).map(|i| floor_to_i64(&(&kr * self.vertices.iter().map(|v| &v.0[i]).max().unwrap()))).collect();
        if (0..n).any(|i| lo[i] > hi[i]) {
            return Vec::new();
        }
        let to_int = |h: &HalfSpace| -> Vec<i64> { RatVec(h.normal.0.clone()).to_i64() };
        let ineqs: Vec<(Vec<i64>, i64)> =
            self.facets.iter().map(|h| (to_int(h), floor_to_i64(&(&kr * &h.offset)))).collect();
        let mut eqs: Vec<(Vec<i64>, i64)> = Vec::new();
        for e in &self.equations {
            let rhs = &kr * &e.offset;
            if !rhs.is_integer() {
                return Vec::new();
            }
            eqs.push((to_int(e), rhs.to_integer().to_i64().expect("fits")));
        }
        let dot = |a: &[i64], x: &[i64]| -> i64 { a.iter().zip(x).map(|(p, q)| p * q).sum() };
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if eqs.iter().all(|(a, b)| dot(a, &x) == *b) && ineqs.iter().all(|(a, b)| dot(a, &x) <= *b) {
                out.push(RatVec::from_ints(&x));
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
            }
        }
    }

    fn affine_rank(&self, ids: &[usize]) -> usize {
        let p0 = &self.vertices[ids[0]];
        let rows: Vec<Vec<Rat>> = ids[1..].iter().map(|&i| (&self.vertices[i] - p0).0).collect();
        linalg::rank(&rows, self.dim)
    }

    fn triangulate_face(&self, face: &[usize], fd: usize, out: &mut Vec<Vec<usize>>) {
        if fd == 0 {
            out.push(vec![face[0]]);
            return;
        }
        let apex = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for tight in &self.incidence {
            let s: Vec<usize> = face.iter().copied().filter(|i| tight.contains(i)).collect();
            if s.len() < fd || s.contains(&apex) || subfaces.contains(&s) {
                continue;
            }
            if self.affine_rank(&s) == fd - 1 {
                subfaces.insert(s);
            }
        }
        for s in subfaces {
            let start = out.len();
            self.triangulate_face(&s, fd - 1, out);
            for simplex in &mut out[start..] {
                simplex.push(apex);
            }
        }
    }

    /// Pulling triangulation: simplices as vertex-index lists.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        let Some(d) = self.affine_dim() else { return Vec::new() };
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.triangulate_face(&all, d, &mut out);
        out
    }

    fn chart_volume(&self) -> Rat {
        let d = self.chart.len();
        let mut total = Rat::zero();
        for s in self.triangulation() {
            let base = &self.vertices[s[0]];
            let m: Vec<Vec<Rat>> = s[1..]
                .iter()
                .map(|&i| self.chart.iter().map(|&c| &self.vertices[i].0[c] - &base.0[c]).collect())
                .collect();
            total += linalg::determinant(&m).abs();
        }
        let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
        total / Rat::from_integer(fact)
    }

    /// Exact Lebesgue volume of a full-dimensional polytope.
    pub fn volume(&self) -> Result<Rat> {
        if !self.is_full_dimensional() {
            return Err(Error::DegenerateInput(format!(
                "volume of a {}-dimensional polytope in ℚ^{}",
                self.affine_dim().map_or(-1, |d| d as i64),
                self.dim
            )));
        }
        Ok(self.chart_volume())
    }

    /// Volume inside the affine hull, normalized so that a fundamental domain of
    /// the lattice `ℤⁿ ∩ (affine hull directions)` has volume 1.
    pub fn relative_volume(&self) -> Rat {
        match self.affine_dim() {
            None => Rat::zero(),
            Some(0) => Rat::one(),
            Some(_) if self.is_full_dimensional() => self.chart_volume(),
            Some(_) => self.chart_volume() / Rat::from_integer(BigInt::from(self.chart_lattice_index())),
        }
    }

    /// Index of the projected direction lattice inside `ℤ^chart`.
    fn chart_lattice_index(&self) -> u64 {
        let p0 = &self.vertices[0];
        let mut dirs: Vec<Vec<Rat>> = self.vertices[1..].iter().map(|p| (p - p0).0).collect();
        let pivots = linalg::rref(&mut dirs, self.dim);
        let others: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        // Generators of ℤ^d → (ℚ/ℤ)^others: y ↦ (Σ_k y_k r_k[j]) mod 1.
        let gens: Vec<Vec<Rat>> = dirs
            .iter()
            .map(|r| others.iter().map(|&j| frac(&r[j])).collect())
            .collect();
        let zero = vec![Rat::zero(); others.len()];
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(g) = frontier.pop() {
            for gen in &gens {
                let next: Vec<Rat> = g.iter().zip(gen).map(|(a, b)| frac(&(a + b))).collect();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len() as u64
    }

    /// `P ∩ {x : ⟨c, x⟩ = level}`.
    pub fn slice_by(&self, c: &RatVec, level: &Rat) -> Polytope {
        let vals: Vec<Rat> = self.vertices.iter().map(|v| c.dot(v)).collect();
        let mut pts: Vec<RatVec> =
            self.vertices.iter().zip(&vals).filter(|(_, s)| *s == level).map(|(v, _)| v.clone()).collect();
        for (u, w) in self.edges() {
            let (su, sw) = (&vals[u], &vals[w]);
            let crosses = (su < level && level < sw) || (sw < level && level < su);
            if crosses {
                let t = (level - su) / (sw - su);
                let (pu, pw) = (&self.vertices[u], &self.vertices[w]);
                pts.push(pu + &(&(pw - pu) * &t));
            }
        }
        Polytope::conv(self.dim, &pts).expect("slice points share the ambient dimension")
    }

    /// `P ∩ {x : Σ xᵢ = level}`.
    pub fn slice(&self, level: &Rat) -> Polytope {
        let ones = RatVec(vec![Rat::one(); self.dim]);
        self.slice_by(&ones, level)
    }

    /// `0` is a vertex and `P` lies in the closed positive orthant.
    pub fn is_normalized(&self) -> bool {
        self.is_full_dimensional()
            && self.vertices.iter().any(RatVec::is_zero)
            && self.vertices.iter().all(RatVec::is_nonnegative)
    }

    /// `sup{λ ≥ 0 : λΣ ⊆ P}` for a polytope normalized at the origin.
    pub fn simplex_inclusion(&self) -> Result<Rat> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized(
                "simplex inclusion needs 0 as a vertex and P in the positive orthant".into(),
            ));
        }
        let mut best: Option<Rat> = None;
        for h in &self.facets {
            let amax = h.normal.0.iter().max().expect("nonempty normal");
            if !amax.is_positive() {
                continue;
            }
            let bound = &h.offset / amax;
            if best.as_ref().is_none_or(|b| bound < *b) {
                best = Some(bound);
            }
        }
        Ok(best.expect("a bounded polytope has a facet with a positive normal entry"))
    }

    /// First vertex of `inner` that fails to lie strictly inside a facet of `self`.
    pub fn interior_witness(&self, inner: &Polytope) -> Option<(RatVec, HalfSpace)> {
        for h in &self.facets {
            for v in &inner.vertices {
                if !h.slack(v).is_positive() {
                    return Some((v.clone(), h.clone()));
                }
            }
        }
        None
    }
}

fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

/// `A ⊆ interior(B)`, decided by comparing vertices of `A` against facets of `B`.
pub fn strict_inclusion(a: &Polytope, b: &Polytope) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: a.dim() });
    }
    if a.is_empty() {
        return Ok(true);
    }
    if !b.is_full_dimensional() {
        return Ok(false);
    }
    Ok(b.interior_witness(a).is_none())
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Vertex generators helper shared by tests and the corpus: the gcd of an
/// integer vector's entries (its lattice length).
pub fn lattice_length(v: &RatVec) -> BigInt {
    v.0.iter().fold(BigInt::zero(), |acc, a| acc.gcd(&a.to_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pts(v: &[&[i64]]) -> Vec<RatVec> {
        v.iter().map(|p| RatVec::from_ints(p)).collect()
    }

    fn trapezoid() -> Polytope {
        Polytope::hull(&pts(&[&[0, 0], &[3, 0], &[1, 1], &[0, 1]])).unwrap()
    }

    #[test]
    fn standard_simplex_facets() {
        let s = Polytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let expected = vec![
            HalfSpace::new(RatVec::from_ints(&[-1, 0]), int(0)),
            HalfSpace::new(RatVec::from_ints(&[0, -1]), int(0)),
            HalfSpace::new(RatVec::from_ints(&[1, 1]), int(1)),
        ];
        assert_eq!(s.facets(), expected.as_slice());
        assert_eq!(s.vertices().len(), 3);
    }

    #[test]
    fn interior_point_dropped() {
        let sq = Polytope::hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]])).unwrap();
        assert_eq!(sq.vertices(), pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]).as_slice());
        assert_eq!(sq.facets().len(), 4);
        // Boundary (non-vertex) points are dropped too.
        let sq2 = Polytope::hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 0]])).unwrap();
        assert_eq!(sq2, sq);
    }

    #[test]
    fn degenerate_hull_is_an_error() {
        let err = Polytope::hull(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
        let seg = Polytope::conv(2, &pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap();
        assert_eq!(seg.affine_dim(), Some(1));
        assert_eq!(seg.vertices(), pts(&[&[0, 0], &[2, 2]]).as_slice());
        assert!(seg.contains(&RatVec::from_ints(&[1, 1])));
        assert!(!seg.contains(&RatVec::from_ints(&[1, 0])));
    }

    #[test]
    fn h_to_v_round_trip() {
        let t = trapezoid();
        let back = Polytope::from_inequalities(2, t.facets()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.facets(), t.facets());
    }

    #[test]
    fn lattice_counts() {
        let s = Polytope::simplex(2, &int(1));
        assert_eq!(s.lattice_points(2).len(), 6);
        assert_eq!(Polytope::cube(2, &int(2)).lattice_points(1).len(), 9);
        assert_eq!(trapezoid().lattice_points(1), pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1], &[2, 0], &[3, 0]]));
    }

    #[test]
    fn volumes() {
        assert_eq!(Polytope::simplex(2, &int(1)).volume().unwrap(), rat(1, 2));
        assert_eq!(Polytope::cube(2, &int(2)).volume().unwrap(), int(4));
        assert_eq!(trapezoid().volume().unwrap(), int(2));
        assert_eq!(Polytope::simplex(3, &int(1)).volume().unwrap(), rat(1, 6));
        assert_eq!(Polytope::cube(3, &int(2)).volume().unwrap(), int(8));
        let seg = Polytope::conv(2, &pts(&[&[0, 0], &[1, 1]])).unwrap();
        assert!(matches!(seg.volume(), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn simplex_inclusion_values() {
        assert_eq!(Polytope::simplex(2, &int(1)).simplex_inclusion().unwrap(), int(1));
        assert_eq!(Polytope::cube(2, &int(2)).simplex_inclusion().unwrap(), int(2));
        assert_eq!(trapezoid().simplex_inclusion().unwrap(), int(1));
        let shifted = Polytope::cube(2, &int(2)).translate(&RatVec::from_ints(&[1, 0]));
        assert!(matches!(shifted.simplex_inclusion(), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn slices() {
        let s = Polytope::simplex(2, &int(1));
        assert_eq!(s.slice(&int(1)).vertices(), pts(&[&[0, 1], &[1, 0]]).as_slice());
        assert!(s.slice(&int(2)).is_empty());
        let sq = Polytope::cube(2, &int(2));
        assert_eq!(sq.slice(&int(3)).vertices(), pts(&[&[1, 2], &[2, 1]]).as_slice());
        assert_eq!(s.slice(&int(0)).vertices(), pts(&[&[0, 0]]).as_slice());
        // Slice of a lower-dimensional polytope.
        let seg = Polytope::conv(2, &pts(&[&[0, 0], &[2, 2]])).unwrap();
        assert_eq!(seg.slice(&int(2)).vertices(), pts(&[&[1, 1]]).as_slice());
    }

    #[test]
    fn strict_inclusion_cases() {
        let sq = Polytope::cube(2, &int(2));
        let s = Polytope::simplex(2, &int(1));
        // Touching the facet x₁ ≥ 0 at the origin is boundary contact.
        assert!(!strict_inclusion(&s.dilate(&rat(3, 2)), &sq).unwrap());
        let shifted = s.dilate(&rat(3, 2)).translate(&RatVec(vec![rat(1, 4), rat(1, 4)]));
        assert!(strict_inclusion(&shifted, &sq).unwrap());
        assert!(!strict_inclusion(&s, &s).unwrap());
        assert!(!strict_inclusion(&s.dilate(&int(2)), &trapezoid()).unwrap());
    }

    #[test]
    fn relative_volume_of_slices() {
        // The diagonal facet of 2Σ is a lattice segment of length 2.
        let s = Polytope::simplex(2, &int(2));
        assert_eq!(s.slice(&int(2)).relative_volume(), int(2));
        // Segment (0,0)-(2,4): primitive direction (1,2), lattice length 2.
        let seg = Polytope::conv(2, &pts(&[&[0, 0], &[2, 4]])).unwrap();
        assert_eq!(seg.relative_volume(), int(2));
        // Facet x+y+z = 3 of 3Σ³ has normalized area 9/2.
        let s3 = Polytope::simplex(3, &int(3));
        assert_eq!(s3.slice(&int(3)).relative_volume(), rat(9, 2));
    }

    #[test]
    fn edges_of_square() {
        let sq = Polytope::cube(2, &int(1));
        assert_eq!(sq.edges().len(), 4);
        let cube = Polytope::cube(3, &int(1));
        assert_eq!(cube.edges().len(), 12);
    }
}
