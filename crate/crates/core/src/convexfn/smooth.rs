//! Smooth toric potentials: log-sum-exp over lattice points, scaled
//! Fubini–Study, and affine forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{rat_to_f64, Rat, RatVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SmoothToricPotential {
    /// `(1/k)·ln Σ_α exp⟨α, x⟩` over the stored exponents.
    LogSumExp { k: u32, exponents: Vec<RatVec> },
    /// `λ·ln(1 + Σᵢ exp xᵢ)` on ℝⁿ.
    ScaledFubiniStudy {
        #[serde(with = "crate::rational::serde_rat")]
        lambda: Rat,
        dim: usize,
    },
    Affine {
        slope: RatVec,
        #[serde(with = "crate::rational::serde_rat")]
        offset: Rat,
    },
}

/// `s·ln Σ exp⟨αⱼ, x⟩` together with its gradient and Hessian, evaluated stably.
/// `scale·ln Σ exp⟨a, x⟩` with exponents converted to floats once, for
/// repeated evaluation.
#[derive(Clone, Debug)]
pub struct LseKernel {
    scale: f64,
    exponents: Vec<Vec<f64>>,
}

impl LseKernel {
    fn weights(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let vals: Vec<f64> = self.exponents.iter().map(|a| a.iter().zip(x).map(|(u, v)| u * v).sum()).collect();
        let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = vals.iter().map(|v| (v - m).exp()).collect();
        let total: f64 = w.iter().sum();
        (m + total.ln(), w.into_iter().map(|wi| wi / total).collect())
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.scale * self.weights(x).0
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (_, w) = self.weights(x);
        let mut g = vec![0.0; x.len()];
        for (a, wi) in self.exponents.iter().zip(&w) {
            for (gj, aj) in g.iter_mut().zip(a) {
                *gj += wi * aj;
            }
        }
        g.iter().map(|v| self.scale * v).collect()
    }

    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = x.len();
        let (_, w) = self.weights(x);
        let mean = {
            let mut g = vec![0.0; n];
            for (a, wi) in self.exponents.iter().zip(&w) {
                for (gj, aj) in g.iter_mut().zip(a) {
                    *gj += wi * aj;
                }
            }
            g
        };
        let mut h = vec![vec![0.0; n]; n];
        for (a, wi) in self.exponents.iter().zip(&w) {
            for i in 0..n {
                let di = a[i] - mean[i];
                for j in 0..n {
                    h[i][j] += wi * di * (a[j] - mean[j]);
                }
            }
        }
        h.into_iter().map(|row| row.into_iter().map(|v| self.scale * v).collect()).collect()
    }
}

impl SmoothToricPotential {
    pub fn scaled_fubini_study(lambda: Rat, dim: usize) -> Self {
        SmoothToricPotential::ScaledFubiniStudy { lambda, dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            SmoothToricPotential::LogSumExp { exponents, .. } => exponents.first().map_or(0, RatVec::dim),
            SmoothToricPotential::ScaledFubiniStudy { dim, .. } => *dim,
            SmoothToricPotential::Affine { slope, .. } => slope.dim(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            SmoothToricPotential::LogSumExp { .. } => "lse",
            SmoothToricPotential::ScaledFubiniStudy { .. } => "fs",
            SmoothToricPotential::Affine { .. } => "affine",
        }
    }

    /// Float kernel of the log-sum-exp type families; `None` for affine forms.
    pub fn kernel(&self) -> Option<LseKernel> {
        match self {
            SmoothToricPotential::LogSumExp { k, exponents } => {
                Some(LseKernel { scale: 1.0 / f64::from(*k), exponents: exponents.iter().map(RatVec::to_f64).collect() })
            }
            SmoothToricPotential::ScaledFubiniStudy { lambda, dim } => {
                let mut ex = vec![vec![0.0; *dim]];
                ex.extend((0..*dim).map(|i| (0..*dim).map(|j| f64::from(u8::from(i == j))).collect()));
                Some(LseKernel { scale: rat_to_f64(lambda), exponents: ex })
            }
            SmoothToricPotential::Affine { .. } => None,
        }
    }

    fn kernel_data(&self) -> LseKernel {
        self.kernel().expect("affine forms are handled separately")
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            SmoothToricPotential::Affine { slope, offset } => slope.dot_f64(x) + rat_to_f64(offset),
            _ => {
                self.kernel_data().value(x)
            }
        })
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(match self {
            SmoothToricPotential::Affine { slope, .. } => slope.to_f64(),
            _ => {
                self.kernel_data().gradient(x)
            }
        })
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_dim(x)?;
        let n = x.len();
        Ok(match self {
            SmoothToricPotential::Affine { .. } => vec![vec![0.0; n]; n],
            _ => {
                self.kernel_data().hessian(x)
            }
        })
    }

    /// Closure of the gradient image.
    pub fn slope_polytope(&self) -> Polytope {
        match self {
            SmoothToricPotential::LogSumExp { k, exponents } => {
                let k = Rat::from_integer((*k).into());
                Polytope::conv(self.dim(), exponents).expect("exponents share a dimension").dilate(&k.recip())
            }
            SmoothToricPotential::ScaledFubiniStudy { lambda, dim } => Polytope::simplex(*dim, lambda),
            SmoothToricPotential::Affine { slope, .. } => {
                Polytope::conv(slope.dim(), std::slice::from_ref(slope)).expect("one point")
            }
        }
    }

    /// `ln N / k` for log-sum-exp potentials with `N` exponents.
    pub fn smoothing_gap(&self) -> Option<f64> {
        match self {
            SmoothToricPotential::LogSumExp { k, exponents } => Some((exponents.len() as f64).ln() / f64::from(*k)),
            _ => None,
        }
    }
}

/// `u_k(x) = (1/k)·ln Σ_{α ∈ kP ∩ ℤⁿ} exp⟨α, x⟩`.
pub fn logsumexp_from_polytope(p: &Polytope, k: u32) -> Result<SmoothToricPotential> {
    if !p.is_normalized() {
        return Err(Error::NotNormalized(format!("{p}")));
    }
    if !p.is_lattice() {
        return Err(Error::NotLatticePolytope(p.vertices().iter().find(|v| !v.is_integral()).cloned().unwrap_or_default()));
    }
    if k == 0 {
        return Err(Error::DegenerateInput("level k must be positive".into()));
    }
    Ok(SmoothToricPotential::LogSumExp { k, exponents: p.lattice_points(k) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn lse_on_simplex_at_origin() {
        let u2 = logsumexp_from_polytope(&Polytope::simplex(2, &int(1)), 2).unwrap();
        assert!((u2.eval(&[0.0, 0.0]).unwrap() - 6f64.ln() / 2.0).abs() < 1e-15);
        assert!((u2.smoothing_gap().unwrap() - 6f64.ln() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn lse_converges_to_support_function() {
        let s = Polytope::simplex(2, &int(1));
        let mut prev = f64::INFINITY;
        for k in [1, 2, 4, 8] {
            let u = logsumexp_from_polytope(&s, k).unwrap();
            let gap = u.eval(&[10.0, 0.0]).unwrap() - 10.0;
            assert!(gap >= 0.0 && gap <= u.smoothing_gap().unwrap());
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn lse_on_interval() {
        for (a, k) in [(3, 1), (3, 2), (1, 4)] {
            let u = logsumexp_from_polytope(&Polytope::cube(1, &int(a)), k).unwrap();
            let expected = f64::from(k * u32::try_from(a).unwrap() + 1).ln() / f64::from(k);
            assert!((u.eval(&[0.0]).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn fubini_study_values() {
        let f = SmoothToricPotential::scaled_fubini_study(int(2), 2);
        assert!((f.eval(&[0.0, 0.0]).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-15);
        let g = f.gradient(&[0.0, 0.0]).unwrap();
        assert!((g[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!(f.eval(&[1.0]).is_err());
        // Large arguments stay finite.
        assert!((f.eval(&[800.0, 0.0]).unwrap() - 1600.0).abs() < 1e-9);
    }

    #[test]
    fn hessian_is_covariance() {
        let f = SmoothToricPotential::scaled_fubini_study(int(1), 1);
        let h = f.hessian(&[0.0]).unwrap();
        assert!((h[0][0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn slope_polytopes() {
        let s = Polytope::simplex(2, &int(1));
        assert_eq!(logsumexp_from_polytope(&s, 3).unwrap().slope_polytope(), s);
        assert_eq!(SmoothToricPotential::scaled_fubini_study(int(2), 2).slope_polytope(), Polytope::simplex(2, &int(2)));
    }

    #[test]
    fn requires_normalized_polytope() {
        let p = Polytope::cube(2, &int(1)).translate(&RatVec::from_ints(&[1, 0]));
        assert!(matches!(logsumexp_from_polytope(&p, 1), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn json_shape() {
        let f = SmoothToricPotential::scaled_fubini_study(crate::rational::rat(3, 2), 2);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"family":"scaled_fubini_study","lambda":"3/2","dim":2}"#);
    }
}
