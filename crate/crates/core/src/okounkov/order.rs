use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Deglex,
}

/// A monomial order on ℕⁿ. Lexicographic comparisons read the coordinates in
/// the order `permutation[0], permutation[1], …` (the choice of flag).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub permutation: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, permutation: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; permutation.len()];
        for &p in &permutation {
            if p >= permutation.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parse(format!("{permutation:?} is not a permutation")));
            }
        }
        Ok(MonomialOrder { kind, permutation })
    }

    pub fn lex(n: usize) -> Self {
        MonomialOrder { kind: OrderKind::Lex, permutation: (0..n).collect() }
    }

    pub fn deglex(n: usize) -> Self {
        MonomialOrder { kind: OrderKind::Deglex, permutation: (0..n).collect() }
    }

    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    /// Exponent in flag coordinates: `out[i] = α[permutation[i]]`.
    pub fn flag_coordinates(&self, a: &[i64]) -> Vec<i64> {
        self.permutation.iter().map(|&i| a[i]).collect()
    }

    pub fn compare(&self, a: &[i64], b: &[i64]) -> Result<Ordering> {
        for v in [a, b] {
            if v.len() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
            }
        }
        let by_degree = match self.kind {
            OrderKind::Deglex => a.iter().sum::<i64>().cmp(&b.iter().sum()),
            OrderKind::Lex => Ordering::Equal,
        };
        Ok(by_degree.then_with(|| self.flag_coordinates(a).cmp(&self.flag_coordinates(b))))
    }

    /// The least exponent of the support.
    pub fn valuation<'a, I>(&self, support: I) -> Result<Vec<i64>>
    where
        I: IntoIterator<Item = &'a Vec<i64>>,
    {
        let mut best: Option<&Vec<i64>> = None;
        for a in support {
            if best.is_none() || self.compare(a, best.expect("set"))? == Ordering::Less {
                best = Some(a);
            }
        }
        best.cloned().ok_or(Error::EmptySupport)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn deglex_examples() {
        let d = MonomialOrder::deglex(2);
        assert_eq!(d.compare(&[0, 1], &[1, 0]).unwrap(), Ordering::Less);
        assert_eq!(d.compare(&[1, 0], &[0, 5]).unwrap(), Ordering::Less);
        assert!(d.compare(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn valuations() {
        let d = MonomialOrder::deglex(2);
        let l = MonomialOrder::lex(2);
        let s = vec![vec![2, 0], vec![1, 1], vec![0, 3]];
        assert_eq!(d.valuation(&s).unwrap(), vec![1, 1]);
        assert_eq!(d.valuation(&vec![vec![3, 3]]).unwrap(), vec![3, 3]);
        let t = vec![vec![0, 2], vec![1, 0]];
        assert_eq!(d.valuation(&t).unwrap(), vec![1, 0]);
        assert_eq!(l.valuation(&t).unwrap(), vec![0, 2]);
        assert!(matches!(d.valuation(&Vec::<Vec<i64>>::new()), Err(Error::EmptySupport)));
    }

    #[test]
    fn order_axioms_on_random_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let perms = [vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]];
        for kind in [OrderKind::Lex, OrderKind::Deglex] {
            for p in &perms {
                let o = MonomialOrder::new(kind, p.clone()).unwrap();
                for _ in 0..1000 {
                    let mut r = || -> Vec<i64> { (0..3).map(|_| rng.gen_range(0..6)).collect() };
                    let (a, b, c) = (r(), r(), r());
                    let ab = o.compare(&a, &b).unwrap();
                    assert_eq!(ab, o.compare(&b, &a).unwrap().reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    let ac: Vec<i64> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
                    let bc: Vec<i64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
                    assert_eq!(o.compare(&ac, &bc).unwrap(), ab);
                    if ab == Ordering::Less && o.compare(&b, &c).unwrap() == Ordering::Less {
                        assert_eq!(o.compare(&a, &c).unwrap(), Ordering::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_permutation() {
        assert!(MonomialOrder::new(OrderKind::Lex, vec![0, 0]).is_err());
        assert!(MonomialOrder::new(OrderKind::Lex, vec![0, 2]).is_err());
    }
}
