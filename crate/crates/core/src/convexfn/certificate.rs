use serde::{Serialize, Serializer};

use crate::rational::{rat_to_f64, Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMethod {
    ExactLp,
    LatticeCount,
}

/// Certifies `inf_bound ≤ f − g ≤ sup_bound` on all of ℝⁿ. An infinite side
/// carries a direction along which `f − g` is unbounded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedDifferenceCertificate {
    #[serde(serialize_with = "extended_real")]
    pub inf_bound: f64,
    #[serde(serialize_with = "extended_real")]
    pub sup_bound: f64,
    #[serde(with = "crate::rational::serde_opt_rat")]
    exact_inf: Option<Rat>,
    #[serde(with = "crate::rational::serde_opt_rat")]
    exact_sup: Option<Rat>,
    pub method: CertificateMethod,
    /// Direction `d` with `f − g → −∞` along `t·d`.
    pub inf_witness: Option<RatVec>,
    /// Direction `d` with `f − g → +∞` along `t·d`.
    pub sup_witness: Option<RatVec>,
    /// Points where a bound is attained.
    pub witness_points: Vec<Vec<f64>>,
    /// Absolute floating point slack to allow when checking samples.
    pub error_budget: f64,
}

fn extended_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if *x > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

impl BoundedDifferenceCertificate {
    pub(crate) fn exact(inf: Option<Rat>, sup: Option<Rat>, inf_witness: Option<RatVec>, sup_witness: Option<RatVec>) -> Self {
        BoundedDifferenceCertificate {
            inf_bound: inf.as_ref().map_or(f64::NEG_INFINITY, rat_to_f64),
            sup_bound: sup.as_ref().map_or(f64::INFINITY, rat_to_f64),
            exact_inf: inf,
            exact_sup: sup,
            method: CertificateMethod::ExactLp,
            inf_witness,
            sup_witness,
            witness_points: Vec::new(),
            error_budget: 0.0,
        }
    }

    pub(crate) fn analytic(inf: f64, sup: f64) -> Self {
        BoundedDifferenceCertificate {
            inf_bound: inf,
            sup_bound: sup,
            exact_inf: None,
            exact_sup: None,
            method: CertificateMethod::LatticeCount,
            inf_witness: None,
            sup_witness: None,
            witness_points: Vec::new(),
            error_budget: f64::EPSILON * 4.0 * (1.0 + sup.abs().max(inf.abs())),
        }
    }

    /// The certificate for `g − f`.
    pub fn negated(self) -> Self {
        BoundedDifferenceCertificate {
            inf_bound: -self.sup_bound,
            sup_bound: -self.inf_bound,
            exact_inf: self.exact_sup.map(|r| -r),
            exact_sup: self.exact_inf.map(|r| -r),
            inf_witness: self.sup_witness,
            sup_witness: self.inf_witness,
            ..self
        }
    }

    /// `(inf, sup)` as rationals when the bound is exact and finite.
    pub fn exact_bounds(&self) -> (Option<Rat>, Option<Rat>) {
        (self.exact_inf.clone(), self.exact_sup.clone())
    }

    pub fn is_bounded(&self) -> bool {
        self.inf_bound.is_finite() && self.sup_bound.is_finite()
    }

    /// Width of the certified interval.
    pub fn radius(&self) -> f64 {
        self.sup_bound - self.inf_bound
    }

    pub fn contains(&self, diff: f64, tol: f64) -> bool {
        let slack = tol + self.error_budget;
        diff >= self.inf_bound - slack && diff <= self.sup_bound + slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn json_marks_infinite_bounds() {
        let c = BoundedDifferenceCertificate::exact(None, Some(int(0)), Some(RatVec::from_ints(&[0, 1])), None);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["inf_bound"], "-inf");
        assert_eq!(v["sup_bound"], 0.0);
        assert_eq!(v["exact_sup"], "0/1");
        assert_eq!(v["method"], "exact-lp");
    }

    #[test]
    fn negation_swaps_sides() {
        let c = BoundedDifferenceCertificate::analytic(0.0, 1.5).negated();
        assert_eq!((c.inf_bound, c.sup_bound), (-1.5, -0.0));
        assert!(c.contains(-1.0, 0.0));
        assert!(!c.contains(0.1, 0.0));
    }
}
