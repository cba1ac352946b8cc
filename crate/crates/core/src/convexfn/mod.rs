//! Convex functions on ℝⁿ: polyhedral and smooth toric potentials, bounded
//! difference certificates and growth comparisons.

mod certificate;
mod max_affine;
mod smooth;

pub use certificate::{BoundedDifferenceCertificate, CertificateMethod};
pub use max_affine::{radial_component, reassemble, AffinePiece, Conjugate, MaxAffineFunction};
pub use smooth::{logsumexp_from_polytope, LseKernel, SmoothToricPotential};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{HalfSpace, Polytope};
use crate::rational::RatVec;

#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    MaxAffine(MaxAffineFunction),
    Smooth(SmoothToricPotential),
}

impl From<MaxAffineFunction> for Potential {
    fn from(f: MaxAffineFunction) -> Self {
        Potential::MaxAffine(f)
    }
}

impl From<SmoothToricPotential> for Potential {
    fn from(f: SmoothToricPotential) -> Self {
        Potential::Smooth(f)
    }
}

impl Potential {
    pub fn dim(&self) -> usize {
        match self {
            Potential::MaxAffine(f) => f.dim(),
            Potential::Smooth(f) => f.dim(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Potential::MaxAffine(f) => f.eval(x),
            Potential::Smooth(f) => f.eval(x),
        }
    }

    pub fn slope_polytope(&self) -> Polytope {
        match self {
            Potential::MaxAffine(f) => f.slope_polytope().clone(),
            Potential::Smooth(f) => f.slope_polytope(),
        }
    }

    fn family(&self) -> &'static str {
        match self {
            Potential::MaxAffine(_) => "max_affine",
            Potential::Smooth(f) => f.family(),
        }
    }
}

/// First facet normal `d` (those of `pg`, then of `pf`) with `h_A(d) > h_B(d)`,
/// a direction along which `h_A − h_B` is unbounded above.
fn recession_direction(a: &Polytope, b: &Polytope, pf: &Polytope, pg: &Polytope) -> Option<RatVec> {
    let normals = |p: &Polytope| -> Vec<RatVec> {
        let mut out: Vec<RatVec> = p.facets().iter().map(|h| h.normal.clone()).collect();
        for e in p.equations() {
            out.push(e.normal.clone());
            out.push(-&e.normal);
        }
        out
    };
    normals(pg).into_iter().chain(normals(pf)).find(|d| a.support(d) > b.support(d))
}

fn incomparable(f: &Potential, g: &Potential) -> Error {
    Error::IncomparableFamilies(format!("{} vs {}", f.family(), g.family()))
}

/// Two-sided bound on `f − g` over ℝⁿ.
pub fn sup_difference(f: &Potential, g: &Potential) -> Result<BoundedDifferenceCertificate> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: g.dim() });
    }
    use SmoothToricPotential::LogSumExp;
    match (f, g) {
        (Potential::MaxAffine(f), Potential::MaxAffine(g)) => Ok(max_affine_difference(f, g)),
        (Potential::Smooth(u @ LogSumExp { .. }), Potential::MaxAffine(h)) => lse_vs_support(u, h),
        (Potential::MaxAffine(h), Potential::Smooth(u @ LogSumExp { .. })) => Ok(lse_vs_support(u, h)?.negated()),
        (Potential::Smooth(u @ LogSumExp { .. }), Potential::Smooth(w @ LogSumExp { .. })) => {
            if u.slope_polytope() != w.slope_polytope() {
                return Err(incomparable(f, g));
            }
            Ok(BoundedDifferenceCertificate::analytic(
                -w.smoothing_gap().expect("log-sum-exp"),
                u.smoothing_gap().expect("log-sum-exp"),
            ))
        }
        _ => Err(incomparable(f, g)),
    }
}

fn max_affine_difference(f: &MaxAffineFunction, g: &MaxAffineFunction) -> BoundedDifferenceCertificate {
    let (pf, pg) = (f.slope_polytope(), g.slope_polytope());
    // sup (f − g) = max over pieces (α, c) of f of c + g*(α), finite iff P_f ⊆ P_g.
    let one_side = |f: &MaxAffineFunction, g: &MaxAffineFunction| {
        let gs = g.legendre();
        f.pieces()
            .iter()
            .map(|p| gs.eval_exact(&p.slope).map(|v| v + &p.offset))
            .collect::<Option<Vec<_>>>()
            .map(|vals| vals.into_iter().max().expect("nonempty"))
    };
    let sup = one_side(f, g);
    let inf = one_side(g, f).map(|v| -v);
    let sup_witness = if sup.is_none() { recession_direction(pf, pg, pf, pg) } else { None };
    let inf_witness = if inf.is_none() { recession_direction(pg, pf, pf, pg) } else { None };
    BoundedDifferenceCertificate::exact(inf, sup, inf_witness, sup_witness)
}

fn lse_vs_support(u: &SmoothToricPotential, h: &MaxAffineFunction) -> Result<BoundedDifferenceCertificate> {
    if h.pieces().iter().any(|p| !p.offset.is_zero()) || &u.slope_polytope() != h.slope_polytope() {
        return Err(Error::IncomparableFamilies(
            "log-sum-exp is compared only with the support function of its own polytope".into(),
        ));
    }
    let gap = u.smoothing_gap().expect("log-sum-exp");
    let mut cert = BoundedDifferenceCertificate::analytic(0.0, gap);
    if h.slope_polytope().vertices().iter().any(RatVec::is_zero) {
        // At the origin h = 0 and u_k = ln N / k: the upper bound is attained.
        cert.witness_points.push(vec![0.0; h.dim()]);
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthComparison {
    pub slower: bool,
    /// Vertex of the slope polytope of `f` that obstructs the comparison.
    pub vertex: Option<RatVec>,
    /// Facet of the slope polytope of `g` it fails to clear.
    pub facet: Option<HalfSpace>,
}

/// Checks `A ⊆ B` with every vertex of `A` strictly inside each facet of `B`
/// that avoids the origin. Returns the first offending vertex and facet.
pub fn domination_witness(a: &Polytope, b: &Polytope) -> Option<(RatVec, HalfSpace)> {
    for e in b.equations() {
        if let Some(v) = a.vertices().iter().find(|v| !e.slack(v).is_zero()) {
            return Some((v.clone(), e.clone()));
        }
    }
    // The origin is scanned last: it is the normalized vertex and rarely the culprit.
    for v in a.vertices().iter().rev() {
        for h in b.facets() {
            let s = h.slack(v);
            if s.is_negative() || (s.is_zero() && !h.offset.is_zero()) {
                return Some((v.clone(), h.clone()));
            }
        }
    }
    None
}

/// Whether `g − f` is bounded below and grows without bound away from the
/// coordinate facets through the origin, decided on slope polytopes.
pub fn grows_slower(f: &Potential, g: &Potential) -> Result<GrowthComparison> {
    let f_ok = matches!(f, Potential::MaxAffine(_) | Potential::Smooth(SmoothToricPotential::ScaledFubiniStudy { .. }));
    let g_ok = matches!(g, Potential::MaxAffine(_) | Potential::Smooth(SmoothToricPotential::LogSumExp { .. }));
    if !f_ok || !g_ok {
        return Err(incomparable(f, g));
    }
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: f.dim() });
    }
    Ok(match domination_witness(&f.slope_polytope(), &g.slope_polytope()) {
        None => GrowthComparison { slower: true, vertex: None, facet: None },
        Some((v, h)) => GrowthComparison { slower: false, vertex: Some(v), facet: Some(h) },
    })
}

/// `ρ_ε(s)`: `|s|/2` off the band `|s| < ε`, a quadratic spline inside it.
fn rho(s: f64, eps: f64) -> f64 {
    if s.abs() >= eps {
        s.abs() / 2.0
    } else {
        (s * s + eps * eps) / (4.0 * eps)
    }
}

fn rho_prime(s: f64, eps: f64) -> f64 {
    if s.abs() >= eps {
        s.signum() / 2.0
    } else {
        s / (2.0 * eps)
    }
}

/// C¹ convex maximum `M_ε(a, b) = (a + b)/2 + ρ_ε(a − b)`.
pub fn regularized_max(a: f64, b: f64, eps: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonpositiveEpsilon(eps));
    }
    let s = a - b;
    if s.abs() >= eps {
        // Exact off the band, avoiding rounding in (a + b)/2 + |a − b|/2.
        return Ok(a.max(b));
    }
    Ok((a + b) / 2.0 + rho(s, eps))
}

/// Partial derivatives `(∂M/∂a, ∂M/∂b)`.
pub fn regularized_max_weights(a: f64, b: f64, eps: f64) -> Result<(f64, f64)> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonpositiveEpsilon(eps));
    }
    let r = rho_prime(a - b, eps);
    Ok((0.5 + r, 0.5 - r))
}
