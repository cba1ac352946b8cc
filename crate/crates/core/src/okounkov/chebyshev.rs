//! Legendre-type transform of a toric potential on the interior of its slope
//! polytope.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use serde::Serialize;

use crate::convexfn::{Conjugate, MaxAffineFunction, Potential, SmoothToricPotential};
use crate::error::Result;
use crate::polytope::Polytope;
use crate::rational::{rat_to_f64, Rat};

#[derive(Clone, Debug)]
pub enum ChebyshevTransform {
    Polyhedral(Conjugate),
    /// `λ·Σ_{i=0}^{n} qᵢ ln qᵢ` with `qᵢ = yᵢ/λ` and `q₀ = 1 − Σ qᵢ`.
    FubiniStudy { lambda: Rat, dim: usize },
    /// Numerical maximization, bracketed by `[−ln N/k, 0]`.
    LogSumExp { potential: SmoothToricPotential, domain: Polytope, gap: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebyshevValue {
    pub value: f64,
    /// Certified enclosure of the exact value.
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
}

impl ChebyshevValue {
    fn exact(value: f64) -> Self {
        ChebyshevValue { value, lower: value, upper: value, converged: true }
    }
}

pub fn chebyshev_transform(u: &Potential) -> Result<ChebyshevTransform> {
    Ok(match u {
        Potential::MaxAffine(f) => ChebyshevTransform::Polyhedral(f.legendre()),
        Potential::Smooth(SmoothToricPotential::ScaledFubiniStudy { lambda, dim }) => {
            ChebyshevTransform::FubiniStudy { lambda: lambda.clone(), dim: *dim }
        }
        Potential::Smooth(SmoothToricPotential::Affine { slope, offset }) => {
            let f = MaxAffineFunction::new(vec![crate::convexfn::AffinePiece::new(slope.clone(), offset.clone())])?;
            ChebyshevTransform::Polyhedral(f.legendre())
        }
        Potential::Smooth(p @ SmoothToricPotential::LogSumExp { .. }) => ChebyshevTransform::LogSumExp {
            potential: p.clone(),
            domain: p.slope_polytope(),
            gap: p.smoothing_gap().expect("log-sum-exp"),
        },
    })
}

fn xlnx(q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        q * q.ln()
    }
}

fn in_closed(p: &Polytope, y: &[f64], tol: f64) -> bool {
    p.equations().iter().all(|e| (e.normal.dot_f64(y) - rat_to_f64(&e.offset)).abs() <= tol)
        && p.facets().iter().all(|h| h.normal.dot_f64(y) <= rat_to_f64(&h.offset) + tol)
}

impl ChebyshevTransform {
    pub fn domain(&self) -> Polytope {
        match self {
            ChebyshevTransform::Polyhedral(c) => c.domain().clone(),
            ChebyshevTransform::FubiniStudy { lambda, dim } => Polytope::simplex(*dim, lambda),
            ChebyshevTransform::LogSumExp { domain, .. } => domain.clone(),
        }
    }

    /// Value at `y`; `+∞` off the slope polytope.
    pub fn eval(&self, y: &[f64]) -> Result<ChebyshevValue> {
        let domain = self.domain();
        if y.len() != domain.dim() {
            return Err(crate::Error::DimensionMismatch { expected: domain.dim(), got: y.len() });
        }
        if !in_closed(&domain, y, 1e-12) {
            return Ok(ChebyshevValue::exact(f64::INFINITY));
        }
        Ok(match self {
            ChebyshevTransform::Polyhedral(c) => ChebyshevValue::exact(c.eval(y)),
            ChebyshevTransform::FubiniStudy { lambda, .. } => {
                let l = rat_to_f64(lambda);
                if lambda.is_zero() {
                    return Ok(ChebyshevValue::exact(0.0));
                }
                let q: Vec<f64> = y.iter().map(|v| v / l).collect();
                let q0 = 1.0 - q.iter().sum::<f64>();
                ChebyshevValue::exact(l * (xlnx(q0) + q.iter().map(|&v| xlnx(v)).sum::<f64>()))
            }
            ChebyshevTransform::LogSumExp { potential, gap, .. } => maximize(potential, y, *gap)?,
        })
    }
}

/// Damped Newton ascent on the concave function `⟨y, x⟩ − u(x)`. Any iterate
/// gives a lower bound; `h ≤ u ≤ h + gap` gives the enclosure `[−gap, 0]`.
fn maximize(u: &SmoothToricPotential, y: &[f64], gap: f64) -> Result<ChebyshevValue> {
    let n = y.len();
    let objective = |x: &[f64]| -> Result<f64> { Ok(y.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - u.eval(x)?) };
    let mut x = vec![0.0; n];
    let mut fx = objective(&x)?;
    let mut converged = false;
    for _ in 0..500 {
        let grad: Vec<f64> = u.gradient(&x)?.iter().zip(y).map(|(g, yi)| yi - g).collect();
        if grad.iter().map(|g| g.abs()).fold(0.0, f64::max) < 1e-12 {
            converged = true;
            break;
        }
        let h = u.hessian(&x)?;
        let hm = DMatrix::from_fn(n, n, |i, j| h[i][j] + if i == j { 1e-12 } else { 0.0 });
        let step = hm.lu().solve(&DVector::from_column_slice(&grad)).unwrap_or_else(|| DVector::from_column_slice(&grad));
        let slope: f64 = step.iter().zip(&grad).map(|(d, g)| d * g).sum();
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-16 {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, d)| xi + t * d).collect();
            let fc = objective(&cand)?;
            if fc >= fx + 1e-4 * t * slope {
                x = cand;
                fx = fc;
                improved = true;
                break;
            }
            t /= 2.0;
        }
        if !improved {
            break;
        }
    }
    let lower = fx.max(-gap);
    Ok(ChebyshevValue { value: fx.max(lower), lower, upper: 0.0, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexfn::logsumexp_from_polytope;
    use crate::rational::int;

    #[test]
    fn support_function_transform_vanishes() {
        let h: Potential = MaxAffineFunction::support_function(&Polytope::simplex(2, &int(1))).unwrap().into();
        let c = chebyshev_transform(&h).unwrap();
        assert_eq!(c.eval(&[0.2, 0.3]).unwrap().value, 0.0);
        assert_eq!(c.eval(&[0.8, 0.8]).unwrap().value, f64::INFINITY);
    }

    #[test]
    fn fubini_study_closed_form_matches_grid() {
        let fs = SmoothToricPotential::scaled_fubini_study(int(3), 2);
        let c = chebyshev_transform(&fs.clone().into()).unwrap();
        let v = c.eval(&[1.0, 1.0]).unwrap().value;
        assert!((v + 3.0 * 3f64.ln()).abs() < 1e-12);
        // Grid maximization of ⟨y, x⟩ − u(x).
        let mut best = f64::NEG_INFINITY;
        for i in -100..=100 {
            for j in -100..=100 {
                let x = [f64::from(i) * 0.05, f64::from(j) * 0.05];
                best = best.max(x[0] + x[1] - fs.eval(&x).unwrap());
            }
        }
        assert!((best - v).abs() < 1e-3);
    }

    #[test]
    fn lse_transform_is_bracketed() {
        let u = logsumexp_from_polytope(&Polytope::simplex(2, &int(1)), 2).unwrap();
        let c = chebyshev_transform(&u.clone().into()).unwrap();
        let r = c.eval(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!(r.converged);
        assert!(r.value >= -(6f64.ln()) / 2.0 && r.value <= 0.0);
        let mut best = f64::NEG_INFINITY;
        for i in -80..=80 {
            for j in -80..=80 {
                let x = [f64::from(i) * 0.05, f64::from(j) * 0.05];
                best = best.max((x[0] + x[1]) / 3.0 - u.eval(&x).unwrap());
            }
        }
        assert!(best <= r.value + 1e-12 && r.value - best < 1e-3);
    }
}
