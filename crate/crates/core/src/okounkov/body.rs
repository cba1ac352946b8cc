use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::order::MonomialOrder;
use super::series::GradedMonomialSeries;
use crate::error::{Error, Result};
use crate::growth::factorial;
use crate::polytope::Polytope;
use crate::rational::{int, rat_to_f64, Rat, RatVec};

#[derive(Clone, Debug, Serialize)]
pub struct OkounkovBody {
    pub order: MonomialOrder,
    /// Hull of `{v(s)/k : s ∈ W_k}` at each level.
    pub hull_at_k: BTreeMap<u32, Polytope>,
    /// The common hull when every level gives the same body.
    pub limit: Option<Polytope>,
}

impl OkounkovBody {
    pub fn dim(&self) -> usize {
        self.order.dim()
    }

    /// The limit if present, otherwise the hull at the largest level.
    pub fn best(&self) -> &Polytope {
        self.limit.as_ref().unwrap_or_else(|| self.hull_at_k.values().next_back().expect("at least one level"))
    }
}

/// Every monomial of `W_k` is a section, so the valuations at level `k` are
/// the elements of `W_k` read in flag coordinates.
pub fn okounkov_body(series: &GradedMonomialSeries, order: &MonomialOrder, k_max: u32) -> Result<OkounkovBody> {
    let n = series.dim();
    if order.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: order.dim() });
    }
    if k_max == 0 {
        return Err(Error::EmptyInput("k_max must be at least 1".into()));
    }
    let hulls: Vec<Result<(u32, Polytope)>> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let w = series.degree(k).filter(|w| !w.is_empty()).ok_or_else(|| Error::EmptyInput(format!("degree {k} of the series is empty")))?;
            let kk = int(i64::from(k));
            let pts: Vec<RatVec> = w
                .iter()
                .map(|a| RatVec(order.flag_coordinates(a).into_iter().map(|x| int(x) / &kk).collect()))
                .collect();
            Ok((k, Polytope::conv(n, &pts)?))
        })
        .collect();
    let hull_at_k: BTreeMap<u32, Polytope> = hulls.into_iter().collect::<Result<_>>()?;
    let first = hull_at_k.values().next().expect("k_max ≥ 1");
    let limit = hull_at_k.values().all(|h| h == first).then(|| first.clone());
    Ok(OkounkovBody { order: order.clone(), hull_at_k, limit })
}

/// Image under `F(α) = (|α|, α₁, …, α_{n−1})`.
pub fn infinitesimal_map(b: &Polytope) -> Polytope {
    let n = b.dim();
    b.map_vertices(n, |v| {
        let mut out = Vec::with_capacity(n);
        out.push(v.sum());
        out.extend(v.0[..n.saturating_sub(1)].iter().cloned());
        RatVec(out)
    })
    .expect("same dimension")
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelVolume {
    pub k: u32,
    /// `n!·vol(hull_at_k)`.
    #[serde(with = "crate::rational::serde_rat")]
    pub normalized_volume: Rat,
    /// `|n!·vol(hull_at_k) − vol(L)|`.
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeCheck {
    #[serde(with = "crate::rational::serde_rat")]
    pub vol_l: Rat,
    /// Exact verdict `n!·vol(limit) = vol(L)` when the body has stabilized.
    pub exact: Option<bool>,
    pub levels: Vec<LevelVolume>,
    /// Gaps do not increase along `k = 1, 2, 4, …`.
    pub gap_nonincreasing_on_doubling: bool,
}

fn normalized_volume(p: &Polytope) -> Rat {
    if p.is_full_dimensional() {
        p.volume().expect("full-dimensional") * factorial(p.dim())
    } else {
        int(0)
    }
}

pub fn volume_identity_check(body: &OkounkovBody, vol_l: &Rat) -> VolumeCheck {
    let levels: Vec<LevelVolume> = body
        .hull_at_k
        .iter()
        .map(|(&k, h)| {
            let normalized_volume = normalized_volume(h);
            let gap = rat_to_f64(&(&normalized_volume - vol_l)).abs();
            LevelVolume { k, normalized_volume, gap }
        })
        .collect();
    let doubling: Vec<f64> = levels.iter().filter(|l| l.k.is_power_of_two()).map(|l| l.gap).collect();
    VolumeCheck {
        vol_l: vol_l.clone(),
        exact: body.limit.as_ref().map(|l| &normalized_volume(l) == vol_l),
        gap_nonincreasing_on_doubling: doubling.windows(2).all(|w| w[1] <= w[0]),
        levels,
    }
}

/// `sup{λ : λΣ ⊆ B}` for a body normalized at the origin.
pub fn seshadri_from_body(b: &Polytope) -> Result<Rat> {
    b.simplex_inclusion()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::trapezoid;
    use crate::okounkov::order::OrderKind;
    use crate::rational::rat;

    fn pts(v: &[&[i64]]) -> Vec<RatVec> {
        v.iter().map(|p| RatVec::from_ints(p)).collect()
    }

    #[test]
    fn toric_bodies() {
        for p in [Polytope::simplex(2, &int(1)), trapezoid()] {
            let s = GradedMonomialSeries::toric(&p, 3).unwrap();
            let b = okounkov_body(&s, &MonomialOrder::deglex(2), 3).unwrap();
            assert!(b.hull_at_k.values().all(|h| h == &p));
            assert_eq!(b.limit.as_ref(), Some(&p));
        }
    }

    #[test]
    fn permuted_flag_permutes_body() {
        let t = trapezoid();
        let s = GradedMonomialSeries::toric(&t, 2).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, vec![1, 0]).unwrap();
        let b = okounkov_body(&s, &o, 2).unwrap();
        assert_eq!(b.limit.unwrap(), t.permute_coordinates(&[1, 0]));
    }

    #[test]
    fn restricted_body() {
        let sigma = Polytope::simplex(2, &int(1));
        let s = GradedMonomialSeries::restricted(&sigma, 8, |k, a| a[0] >= i64::from(k.div_ceil(2))).unwrap();
        let b = okounkov_body(&s, &MonomialOrder::deglex(2), 8).unwrap();
        assert!(b.limit.is_none());
        let target = Polytope::conv(2, &[RatVec(vec![rat(1, 2), int(0)]), RatVec::from_ints(&[1, 0]), RatVec(vec![rat(1, 2), rat(1, 2)])])
            .unwrap();
        assert_eq!(b.hull_at_k[&8], target);
        let check = volume_identity_check(&b, &rat(1, 4));
        assert!(check.exact.is_none());
        assert!(check.levels.last().unwrap().gap <= 0.1);
        assert!(check.gap_nonincreasing_on_doubling);
        // Hulls grow along the divisibility chain.
        for (j, k) in [(1, 2), (2, 4), (4, 8)] {
            assert!(b.hull_at_k[&j].vertices().iter().all(|v| b.hull_at_k[&k].contains(v)));
        }
    }

    #[test]
    fn f_map_images() {
        let s = infinitesimal_map(&Polytope::simplex(2, &int(1)));
        assert_eq!(s, Polytope::conv(2, &pts(&[&[0, 0], &[1, 1], &[1, 0]])).unwrap());
        let q = infinitesimal_map(&Polytope::cube(2, &int(2)));
        assert_eq!(q, Polytope::conv(2, &pts(&[&[0, 0], &[2, 2], &[4, 2], &[2, 0]])).unwrap());
        let o = infinitesimal_map(&Polytope::conv(2, &pts(&[&[0, 0]])).unwrap());
        assert_eq!(o.vertices(), pts(&[&[0, 0]]).as_slice());
    }

    #[test]
    fn volume_identity_for_toric_bodies() {
        let t = trapezoid();
        let b = okounkov_body(&GradedMonomialSeries::toric(&t, 2).unwrap(), &MonomialOrder::deglex(2), 2).unwrap();
        assert_eq!(volume_identity_check(&b, &int(4)).exact, Some(true));
        assert_eq!(volume_identity_check(&b, &int(5)).exact, Some(false));
    }

    #[test]
    fn seshadri_of_bodies() {
        assert_eq!(seshadri_from_body(&Polytope::simplex(2, &int(1))).unwrap(), int(1));
        assert_eq!(seshadri_from_body(&trapezoid()).unwrap(), int(1));
        let sq = Polytope::cube(2, &int(2));
        for perm in [[0, 1], [1, 0]] {
            let s = GradedMonomialSeries::toric(&sq, 1).unwrap();
            let o = MonomialOrder::new(OrderKind::Deglex, perm.to_vec()).unwrap();
            let b = okounkov_body(&s, &o, 1).unwrap();
            assert_eq!(seshadri_from_body(b.best()).unwrap(), int(2));
        }
        let shifted = sq.translate(&RatVec::from_ints(&[1, 1]));
        assert!(matches!(seshadri_from_body(&shifted), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn missing_level_is_an_error() {
        let s = GradedMonomialSeries::toric(&Polytope::simplex(2, &int(1)), 2).unwrap();
        assert!(matches!(okounkov_body(&s, &MonomialOrder::deglex(2), 3), Err(Error::EmptyInput(_))));
        assert!(okounkov_body(&s, &MonomialOrder::deglex(3), 2).is_err());
    }
}
