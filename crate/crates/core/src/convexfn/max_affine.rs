//! Convex functions given as a finite maximum of affine forms, and their
//! Legendre conjugates.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{Rat, RatVec};

/// The affine form `x ↦ ⟨slope, x⟩ + offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffinePiece {
    pub slope: RatVec,
    #[serde(with = "crate::rational::serde_rat")]
    pub offset: Rat,
}

impl AffinePiece {
    pub fn new(slope: RatVec, offset: Rat) -> Self {
        AffinePiece { slope, offset }
    }

    pub fn eval(&self, x: &RatVec) -> Rat {
        self.slope.dot(x) + &self.offset
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.slope.dot_f64(x) + crate::rational::rat_to_f64(&self.offset)
    }
}

#[derive(Clone, Debug)]
pub struct MaxAffineFunction {
    dim: usize,
    pieces: Vec<AffinePiece>,
    slope_polytope: OnceLock<Polytope>,
}

/// Compares piece sets, so call [`MaxAffineFunction::pruned`] first when
/// inactive pieces may be present.
impl PartialEq for MaxAffineFunction {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pieces == other.pieces
    }
}

impl Eq for MaxAffineFunction {}

impl MaxAffineFunction {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        let dim = pieces.first().ok_or_else(|| Error::EmptyInput("max-affine function without pieces".into()))?.slope.dim();
        if let Some(p) = pieces.iter().find(|p| p.slope.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.slope.dim() });
        }
        let pieces: Vec<AffinePiece> = pieces.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(MaxAffineFunction { dim, pieces, slope_polytope: OnceLock::new() })
    }

    /// The support function `h_P(x) = max_{v ∈ P} ⟨v, x⟩`.
    pub fn support_function(p: &Polytope) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyInput("support function of the empty polytope".into()));
        }
        Self::new(p.vertices().iter().map(|v| AffinePiece::new(v.clone(), Rat::zero())).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn slope_polytope(&self) -> &Polytope {
        self.slope_polytope.get_or_init(|| {
            let slopes: Vec<RatVec> = self.pieces.iter().map(|p| p.slope.clone()).collect();
            Polytope::conv(self.dim, &slopes).expect("slopes share a dimension")
        })
    }

    pub fn eval_exact(&self, x: &RatVec) -> Result<Rat> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        Ok(self.pieces.iter().map(|p| p.eval(x)).max().expect("nonempty"))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self.pieces.iter().map(|p| p.eval_f64(x)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// Index of a piece attaining the maximum at `x`.
    pub fn active_piece(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut val = f64::NEG_INFINITY;
        for (i, p) in self.pieces.iter().enumerate() {
            let v = p.eval_f64(x);
            if v > val {
                val = v;
                best = i;
            }
        }
        best
    }

    pub fn shifted(&self, c: &Rat) -> MaxAffineFunction {
        let pieces = self.pieces.iter().map(|p| AffinePiece::new(p.slope.clone(), &p.offset + c)).collect();
        MaxAffineFunction::new(pieces).expect("nonempty")
    }

    /// Legendre conjugate: the lower convex envelope of the points
    /// `(slope, −offset)` over the slope polytope, `+∞` outside it.
    pub fn legendre(&self) -> Conjugate {
        let n = self.dim;
        let lifted: Vec<RatVec> = self
            .pieces
            .iter()
            .map(|p| {
                let mut c = p.slope.0.clone();
                c.push(-p.offset.clone());
                RatVec(c)
            })
            .collect();
        let top = lifted.iter().map(|v| v.0[n].clone()).max().expect("nonempty") + Rat::one();
        let mut pts = lifted.clone();
        pts.extend(self.pieces.iter().map(|p| {
            let mut c = p.slope.0.clone();
            c.push(top.clone());
            RatVec(c)
        }));
        // Adding vertical copies above every point makes the lower hull the
        // only part with downward facet normals.
        let q = Polytope::conv(n + 1, &pts).expect("lifted points share a dimension");
        let pieces: Vec<AffinePiece> = q
            .facets()
            .iter()
            .filter(|h| h.normal.0[n].is_negative())
            .map(|h| {
                let az = &h.normal.0[n];
                let slope = RatVec(h.normal.0[..n].iter().map(|a| -a / az).collect());
                AffinePiece::new(slope, &h.offset / az)
            })
            .collect();
        let support: Vec<AffinePiece> = q
            .vertices()
            .iter()
            .filter(|v| v.0[n] < top)
            .map(|v| AffinePiece::new(RatVec(v.0[..n].to_vec()), v.0[n].clone()))
            .collect();
        Conjugate { domain: self.slope_polytope().clone(), pieces, support }
    }

    /// Drops pieces that never strictly attain the maximum.
    pub fn pruned(&self) -> MaxAffineFunction {
        self.legendre().legendre()
    }

    pub fn union(functions: &[&MaxAffineFunction]) -> Result<MaxAffineFunction> {
        let pieces: Vec<AffinePiece> = functions.iter().flat_map(|f| f.pieces.iter().cloned()).collect();
        MaxAffineFunction::new(pieces)
    }
}

/// Legendre conjugate of a max-affine function: a polyhedral convex function on
/// a polytope, `+∞` elsewhere.
#[derive(Clone, Debug)]
pub struct Conjugate {
    domain: Polytope,
    /// Affine minorants whose maximum is the conjugate on the domain.
    pieces: Vec<AffinePiece>,
    /// Breakpoints `(y, f*(y))` of the envelope, stored as pieces with offset `f*(y)`.
    support: Vec<AffinePiece>,
}

impl Conjugate {
    pub fn domain(&self) -> &Polytope {
        &self.domain
    }

    pub fn envelope_pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    /// `None` encodes `+∞`.
    pub fn eval_exact(&self, y: &RatVec) -> Option<Rat> {
        if !self.domain.contains(y) {
            return None;
        }
        self.pieces.iter().map(|p| p.eval(y)).max()
    }

    /// Evaluates on the domain up to floating point membership; `+∞` outside.
    pub fn eval(&self, y: &[f64]) -> f64 {
        let tol = 1e-12;
        let inside = self.domain.equations().iter().all(|e| (e.normal.dot_f64(y) - crate::rational::rat_to_f64(&e.offset)).abs() <= tol)
            && self.domain.facets().iter().all(|h| h.normal.dot_f64(y) <= crate::rational::rat_to_f64(&h.offset) + tol);
        if !inside {
            return f64::INFINITY;
        }
        self.pieces.iter().map(|p| p.eval_f64(y)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Conjugate of the conjugate: the pruned original function.
    pub fn legendre(&self) -> MaxAffineFunction {
        let pieces = self.support.iter().map(|p| AffinePiece::new(p.slope.clone(), -p.offset.clone())).collect();
        MaxAffineFunction::new(pieces).expect("a nonempty domain has breakpoints")
    }
}

/// `v_λ(x) = inf_t f(x + t·𝟙) − λt`, returned as a max-affine function, or
/// `None` for the constant `−∞`.
///
/// The infimum over `t` is a one-constraint linear program; its dual feasible
/// set is spanned by single pieces with slope sum `λ` and by pairs of pieces
/// whose slope sums straddle `λ`.
pub fn radial_component(f: &MaxAffineFunction, level: &Rat) -> Option<MaxAffineFunction> {
    let s: Vec<Rat> = f.pieces().iter().map(|p| p.slope.sum() - level).collect();
    let mut pieces = Vec::new();
    for (i, pi) in f.pieces().iter().enumerate() {
        if s[i].is_zero() {
            pieces.push(pi.clone());
        }
        if !s[i].is_negative() {
            continue;
        }
        for (j, pj) in f.pieces().iter().enumerate() {
            if !s[j].is_positive() {
                continue;
            }
            let denom = &s[j] - &s[i];
            let wi = &s[j] / &denom;
            let wj = -&s[i] / &denom;
            let slope = &pi.slope.scale(&wi) + &pj.slope.scale(&wj);
            let offset = &pi.offset * &wi + &pj.offset * &wj;
            pieces.push(AffinePiece::new(slope, offset));
        }
    }
    if pieces.is_empty() {
        return None;
    }
    Some(MaxAffineFunction::new(pieces).expect("nonempty").pruned())
}

/// Pointwise maximum of loghomogeneous components.
pub fn reassemble(components: &BTreeMap<Rat, MaxAffineFunction>) -> Result<MaxAffineFunction> {
    if components.is_empty() {
        return Err(Error::EmptyInput("no components to reassemble".into()));
    }
    let fs: Vec<&MaxAffineFunction> = components.values().collect();
    Ok(MaxAffineFunction::union(&fs)?.pruned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn piece(slope: &[i64], offset: Rat) -> AffinePiece {
        AffinePiece::new(RatVec::from_ints(slope), offset)
    }

    fn h(p: &Polytope) -> MaxAffineFunction {
        MaxAffineFunction::support_function(p).unwrap()
    }

    #[test]
    fn support_function_eval() {
        let hs = h(&Polytope::simplex(2, &int(1)));
        assert_eq!(hs.eval(&[3.0, -1.0]).unwrap(), 3.0);
        assert_eq!(hs.eval_exact(&RatVec::from_ints(&[3, -1])).unwrap(), int(3));
        assert!(matches!(hs.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn conjugate_of_support_function_is_indicator() {
        let sq = Polytope::cube(2, &int(2));
        let c = h(&sq).legendre();
        assert_eq!(c.eval_exact(&RatVec::from_ints(&[1, 1])), Some(int(0)));
        assert_eq!(c.eval_exact(&RatVec::from_ints(&[2, 0])), Some(int(0)));
        assert_eq!(c.eval_exact(&RatVec::from_ints(&[3, 0])), None);
        assert_eq!(c.domain(), &sq);
    }

    #[test]
    fn conjugate_of_relu() {
        let relu = MaxAffineFunction::new(vec![piece(&[0], int(0)), piece(&[1], int(0))]).unwrap();
        let c = relu.legendre();
        assert_eq!(c.eval_exact(&RatVec(vec![rat(1, 3)])), Some(int(0)));
        assert_eq!(c.eval_exact(&RatVec::from_ints(&[2])), None);
        assert_eq!(c.eval_exact(&RatVec::from_ints(&[-1])), None);
    }

    #[test]
    fn conjugate_envelope_points() {
        let f = MaxAffineFunction::new(vec![piece(&[0], int(0)), piece(&[1], int(-1)), piece(&[2], int(-3))]).unwrap();
        let c = f.legendre();
        assert_eq!(c.eval_exact(&RatVec::from_ints(&[1])), Some(int(1)));
        assert_eq!(c.eval_exact(&RatVec(vec![rat(1, 2)])), Some(rat(1, 2)));
        assert_eq!(c.eval_exact(&RatVec(vec![rat(3, 2)])), Some(int(2)));
        assert_eq!(c.legendre(), f);
    }

    #[test]
    fn pruning_drops_inactive_pieces() {
        let f = MaxAffineFunction::new(vec![piece(&[0], int(0)), piece(&[1], int(0)), piece(&[2], int(0))]).unwrap();
        let g = MaxAffineFunction::new(vec![piece(&[0], int(0)), piece(&[2], int(0))]).unwrap();
        assert_eq!(f.pruned(), g);
        let single = MaxAffineFunction::new(vec![piece(&[1, 1], int(5))]).unwrap();
        assert_eq!(single.pruned(), single);
    }

    #[test]
    fn radial_components_of_simplex() {
        let hs = h(&Polytope::simplex(2, &int(1)));
        let v1 = radial_component(&hs, &int(1)).unwrap();
        let expected = MaxAffineFunction::new(vec![piece(&[1, 0], int(0)), piece(&[0, 1], int(0))]).unwrap();
        assert_eq!(v1, expected);
        let v0 = radial_component(&hs, &int(0)).unwrap();
        assert_eq!(v0, MaxAffineFunction::new(vec![piece(&[0, 0], int(0))]).unwrap());
        assert!(radial_component(&hs, &int(2)).is_none());
    }

    #[test]
    fn radial_component_of_square() {
        let hq = h(&Polytope::cube(2, &int(2)));
        let v3 = radial_component(&hq, &int(3)).unwrap();
        let expected = MaxAffineFunction::new(vec![piece(&[1, 2], int(0)), piece(&[2, 1], int(0))]).unwrap();
        assert_eq!(v3, expected);
    }

    #[test]
    fn reassembly_of_simplex() {
        let hs = h(&Polytope::simplex(2, &int(1)));
        let comps: BTreeMap<Rat, MaxAffineFunction> =
            [int(0), int(1)].into_iter().map(|l| (l.clone(), radial_component(&hs, &l).unwrap())).collect();
        assert_eq!(reassemble(&comps).unwrap(), hs);
        let single: BTreeMap<Rat, MaxAffineFunction> = [(int(1), comps[&int(1)].clone())].into();
        assert_eq!(reassemble(&single).unwrap(), comps[&int(1)]);
        assert!(matches!(reassemble(&BTreeMap::new()), Err(Error::EmptyInput(_))));
    }
}
