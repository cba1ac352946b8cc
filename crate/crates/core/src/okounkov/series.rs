use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::RatVec;

/// Per-degree sets of exponent vectors `W_k ⊆ ℤ≥0ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMonomialSeries {
    dim: usize,
    degrees: BTreeMap<u32, BTreeSet<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    degrees: BTreeMap<String, Vec<Vec<i64>>>,
}

impl GradedMonomialSeries {
    pub fn new(dim: usize, degrees: BTreeMap<u32, BTreeSet<Vec<i64>>>) -> Result<Self> {
        for a in degrees.values().flatten() {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
            if a.iter().any(|&x| x < 0) {
                return Err(Error::Parse(format!("exponent {a:?} has a negative entry")));
            }
        }
        if degrees.values().all(BTreeSet::is_empty) {
            return Err(Error::EmptyInput("series has no exponents".into()));
        }
        Ok(GradedMonomialSeries { dim, degrees })
    }

    /// `W_k = kP ∩ ℤⁿ` for `k = 1..=k_max`.
    pub fn toric(p: &Polytope, k_max: u32) -> Result<Self> {
        Self::restricted(p, k_max, |_, _| true)
    }

    /// `W_k = {α ∈ kP ∩ ℤⁿ : keep(k, α)}`.
    pub fn restricted(p: &Polytope, k_max: u32, keep: impl Fn(u32, &[i64]) -> bool) -> Result<Self> {
        if !p.vertices().iter().all(RatVec::is_nonnegative) || p.is_empty() {
            return Err(Error::NotNormalized("monomial exponents must be nonnegative".into()));
        }
        let degrees = (1..=k_max)
            .map(|k| {
                let w = p.lattice_points(k).iter().map(RatVec::to_i64).filter(|a| keep(k, a)).collect();
                (k, w)
            })
            .collect();
        Self::new(p.dim(), degrees)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self, k: u32) -> Option<&BTreeSet<Vec<i64>>> {
        self.degrees.get(&k)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (u32, &BTreeSet<Vec<i64>>)> {
        self.degrees.iter().map(|(k, w)| (*k, w))
    }

    /// First `(j, k, α)` with `α ∈ W_j + W_k` missing from a stored `W_{j+k}`.
    pub fn multiplicativity_violation(&self) -> Option<(u32, u32, Vec<i64>)> {
        for (&j, wj) in &self.degrees {
            for (&k, wk) in self.degrees.range(j..) {
                let Some(target) = self.degrees.get(&(j + k)) else { continue };
                for a in wj {
                    for b in wk {
                        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if !target.contains(&s) {
                            return Some((j, k, s));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        let degrees = self.degrees.iter().map(|(k, w)| (k.to_string(), w.iter().cloned().collect())).collect();
        serde_json::to_value(SeriesJson { degrees }).expect("serializable")
    }

    /// Parses `{"degrees": {"1": [[a, b], …], …}}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let sj: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut degrees = BTreeMap::new();
        let mut dim = None;
        for (k, w) in sj.degrees {
            let k: u32 = k.parse().map_err(|_| Error::Parse(format!("degree {k:?} is not a positive integer")))?;
            if k == 0 {
                return Err(Error::Parse("degrees start at 1".into()));
            }
            if let Some(a) = w.first() {
                dim.get_or_insert(a.len());
            }
            degrees.insert(k, w.into_iter().collect());
        }
        Self::new(dim.ok_or_else(|| Error::EmptyInput("series has no exponents".into()))?, degrees)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn toric_series_counts() {
        let s = GradedMonomialSeries::toric(&Polytope::simplex(2, &int(1)), 3).unwrap();
        let counts: Vec<usize> = s.degrees().map(|(_, w)| w.len()).collect();
        assert_eq!(counts, vec![3, 6, 10]);
        assert!(s.multiplicativity_violation().is_none());
    }

    #[test]
    fn restricted_series_is_multiplicative() {
        let s = GradedMonomialSeries::restricted(&Polytope::simplex(2, &int(1)), 8, |k, a| a[0] >= i64::from(k.div_ceil(2)))
            .unwrap();
        assert!(s.multiplicativity_violation().is_none());
        assert_eq!(s.degree(1).unwrap().len(), 1);
    }

    #[test]
    fn detects_violation() {
        let mut d = BTreeMap::new();
        d.insert(1, BTreeSet::from([vec![1, 0]]));
        d.insert(2, BTreeSet::from([vec![0, 2]]));
        let s = GradedMonomialSeries::new(2, d).unwrap();
        assert_eq!(s.multiplicativity_violation(), Some((1, 1, vec![2, 0])));
    }

    #[test]
    fn json_round_trip() {
        let s = GradedMonomialSeries::toric(&Polytope::simplex(2, &int(1)), 2).unwrap();
        let text = s.to_json().to_string();
        assert!(text.starts_with(r#"{"degrees":{"1":[[0,0],[0,1],[1,0]]"#));
        assert_eq!(GradedMonomialSeries::from_json_str(&text).unwrap(), s);
        assert!(GradedMonomialSeries::from_json_str(r#"{"degrees":{"1":[[-1,0]]}}"#).is_err());
        assert!(GradedMonomialSeries::from_json_str(r#"{"degrees":{"x":[[1,0]]}}"#).is_err());
    }
}
