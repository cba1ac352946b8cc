//! The canonical toric growth condition at a vertex and the invariants read
//! off from it: gradient image, Monge–Ampère volume, Seshadri constant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::convexfn::{
    logsumexp_from_polytope, radial_component, reassemble, sup_difference, BoundedDifferenceCertificate,
    MaxAffineFunction, Potential, SmoothToricPotential,
};
use crate::error::{Error, Result};
use crate::polytope::{normalize_at_vertex, Polytope, UnimodularMap};
use crate::rational::{int, rat_from_f64_snapped, rat_to_f64, simplest_in, Rat, RatVec};

/// Radius of the sampling ball in logarithmic coordinates.
pub const SAMPLE_RADIUS: f64 = 50.0;
/// Grid on which sampled gradients are snapped before the exact hull.
const SNAP_BITS: u32 = 32;
/// Width of the final bracket of the Seshadri bisection.
pub const BISECTION_BITS: u32 = 40;

#[derive(Clone, Debug)]
pub struct GrowthCondition {
    source: Polytope,
    vertex: RatVec,
    map: UnimodularMap,
    polytope: Polytope,
    representative: MaxAffineFunction,
    approximants: Vec<(u32, SmoothToricPotential)>,
    certificates: Vec<BoundedDifferenceCertificate>,
    c_max: Rat,
}

/// Which potential the level-`k` approximant is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    Representative,
    Level(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledRecovery {
    pub k: u32,
    pub samples: usize,
    pub seed: u64,
    pub polytope: Polytope,
    /// Upper bound on the Hausdorff distance from the exact polytope.
    pub hausdorff_bound: f64,
    /// `n·ln N(k)/k`.
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloVolume {
    pub k: u32,
    pub samples: usize,
    pub seed: u64,
    pub hull_vertices: usize,
    pub volume_ma: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeshadriComparison {
    #[serde(with = "crate::rational::serde_rat")]
    pub lp: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub domination: Rat,
    /// Final bisection bracket `[lo, hi]` with `hi − lo ≤ 2⁻⁴⁰`.
    pub bracket: RatVec,
    pub steps: u32,
    pub agree: bool,
}

/// `ε ≤ (Lⁿ)^{1/n}` with `Lⁿ = n!·vol(Δ)`.
#[derive(Clone, Debug, Serialize)]
pub struct GapInequality {
    #[serde(with = "crate::rational::serde_rat")]
    pub epsilon: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub degree: Rat,
    pub root: f64,
    pub slack: f64,
    pub holds: bool,
    pub equality: bool,
}

impl GrowthCondition {
    /// Normalizes `p` at `vertex` and builds `h_Δ` with its log-sum-exp
    /// approximants `u_k`.
    pub fn build(p: &Polytope, vertex: &RatVec, levels: &[u32]) -> Result<Self> {
        if vertex.dim() != p.dim() {
            return Err(Error::DimensionMismatch { expected: p.dim(), got: vertex.dim() });
        }
        let (polytope, map) = normalize_at_vertex(p, vertex)?;
        let representative = MaxAffineFunction::support_function(&polytope)?;
        let mut levels = levels.to_vec();
        levels.sort_unstable();
        levels.dedup();
        let approximants = levels
            .iter()
            .map(|&k| Ok((k, logsumexp_from_polytope(&polytope, k)?)))
            .collect::<Result<Vec<_>>>()?;
        let rep: Potential = representative.clone().into();
        let certificates = approximants
            .iter()
            .map(|(_, u)| sup_difference(&u.clone().into(), &rep))
            .collect::<Result<Vec<_>>>()?;
        let c_max = polytope.vertices().iter().map(RatVec::sum).max().expect("nonempty");
        Ok(GrowthCondition {
            source: p.clone(),
            vertex: vertex.clone(),
            map,
            polytope,
            representative,
            approximants,
            certificates,
            c_max,
        })
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn source(&self) -> &Polytope {
        &self.source
    }

    pub fn vertex(&self) -> &RatVec {
        &self.vertex
    }

    pub fn normalization(&self) -> &UnimodularMap {
        &self.map
    }

    /// The moment polytope Δ in normalized position.
    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn representative(&self) -> &MaxAffineFunction {
        &self.representative
    }

    pub fn levels(&self) -> Vec<u32> {
        self.approximants.iter().map(|(k, _)| *k).collect()
    }

    pub fn approximant(&self, k: u32) -> Result<&SmoothToricPotential> {
        self.approximants.iter().find(|(l, _)| *l == k).map(|(_, u)| u).ok_or(Error::UnknownLevel(k))
    }

    /// Certificates for `u_k − h_Δ`, in level order.
    pub fn certificates(&self) -> &[BoundedDifferenceCertificate] {
        &self.certificates
    }

    /// `max Σαᵢ` over Δ.
    pub fn c_max(&self) -> &Rat {
        &self.c_max
    }

    /// Hull of the gradients of the representative, i.e. of its slopes.
    pub fn recover_polytope(&self) -> Polytope {
        self.representative.pruned().slope_polytope().clone()
    }

    /// Hull of sampled gradients of `u_k` over the ball of radius 50.
    pub fn recover_polytope_sampled(&self, k: u32, samples: usize, seed: u64) -> Result<SampledRecovery> {
        let u = self.approximant(k)?;
        let grads = sample_gradients(u, samples, seed)?;
        let polytope = sampled_hull(self.dim(), &grads);
        let hausdorff_bound = self
            .polytope
            .vertices()
            .iter()
            .map(|v| {
                let v = v.to_f64();
                grads.iter().map(|g| dist(g, &v)).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let tolerance = self.dim() as f64 * u.smoothing_gap().expect("log-sum-exp");
        Ok(SampledRecovery { k, samples, seed, polytope, hausdorff_bound, tolerance })
    }

    /// `n!·vol(Δ)`: the total Monge–Ampère mass of any potential in the class.
    pub fn volume_ma(&self) -> Rat {
        self.polytope.volume().expect("full-dimensional") * factorial(self.dim())
    }

    pub fn volume_polytope(&self) -> Rat {
        self.polytope.volume().expect("full-dimensional")
    }

    /// `n!` times the volume of the hull of sampled gradients of `u_k`.
    pub fn volume_ma_monte_carlo(&self, k: u32, samples: usize, seed: u64) -> Result<MonteCarloVolume> {
        let u = self.approximant(k)?;
        let grads = sample_gradients(u, samples, seed)?;
        let hull = sampled_hull(self.dim(), &grads);
        let vol = if hull.is_full_dimensional() { rat_to_f64(&hull.volume()?) } else { 0.0 };
        let volume_ma = vol * rat_to_f64(&factorial(self.dim()));
        let exact = rat_to_f64(&self.volume_ma());
        Ok(MonteCarloVolume {
            k,
            samples,
            seed,
            hull_vertices: hull.vertices().len(),
            volume_ma,
            relative_error: (volume_ma - exact).abs() / exact,
        })
    }

    /// Largest `λ` with `λΣ ⊆ Δ`, read off the facets.
    pub fn seshadri_lp(&self) -> Rat {
        self.polytope.simplex_inclusion().expect("normalized")
    }

    /// `sup{λ : λ·ln(1 + Σeˣⁱ) ≤ h_Δ + O(1)}` by bisection, each step deciding
    /// boundedness through the vertices of `λΣ`. The final bracket is
    /// resolved to its simplest rational.
    pub fn seshadri_domination(&self) -> (Rat, (Rat, Rat), u32) {
        let n = self.dim();
        let dominated = |l: &Rat| {
            let fs = SmoothToricPotential::scaled_fubini_study(l.clone(), n);
            fs.slope_polytope().vertices().iter().all(|v| self.polytope.contains(v))
        };
        let mut lo = Rat::zero();
        let mut hi = &self.c_max + Rat::one();
        let width = Rat::new(BigInt::one(), BigInt::one() << BISECTION_BITS);
        let mut steps = 0;
        while &hi - &lo > width {
            let mid = (&lo + &hi) / int(2);
            if dominated(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            steps += 1;
        }
        let value = simplest_in(&lo, &hi);
        let value = if dominated(&value) { value } else { lo.clone() };
        (value, (lo, hi), steps)
    }

    pub fn seshadri(&self) -> SeshadriComparison {
        let lp = self.seshadri_lp();
        let (domination, (lo, hi), steps) = self.seshadri_domination();
        SeshadriComparison {
            agree: lp == domination,
            lp,
            domination,
            bracket: RatVec(vec![lo, hi]),
            steps,
        }
    }

    pub fn gap_inequality(&self) -> GapInequality {
        let epsilon = self.seshadri_lp();
        let degree = self.volume_ma();
        let n = i32::try_from(self.dim()).expect("small dimension");
        let eps_pow = num_traits::pow(epsilon.clone(), self.dim());
        let root = rat_to_f64(&degree).powf(1.0 / f64::from(n));
        GapInequality {
            slack: root - rat_to_f64(&epsilon),
            holds: eps_pow <= degree,
            equality: eps_pow == degree,
            epsilon,
            degree,
            root,
        }
    }

    /// Distinct coordinate sums of the vertices of Δ.
    pub fn vertex_levels(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.polytope.vertices().iter().map(RatVec::sum).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `v_λ` of the representative at each level; `None` stands for `−∞`.
    pub fn decompose(&self, levels: &[Rat]) -> BTreeMap<Rat, Option<MaxAffineFunction>> {
        levels.iter().map(|l| (l.clone(), radial_component(&self.representative, l))).collect()
    }

    /// Pointwise maximum of the finite components.
    pub fn reassemble(components: &BTreeMap<Rat, Option<MaxAffineFunction>>) -> Result<MaxAffineFunction> {
        let finite: BTreeMap<Rat, MaxAffineFunction> =
            components.iter().filter_map(|(l, f)| f.clone().map(|f| (l.clone(), f))).collect();
        reassemble(&finite)
    }

    /// Bounds on `u_k − u_m` (or `u_k − h_Δ`).
    pub fn equivalence(&self, k: u32, reference: Reference) -> Result<BoundedDifferenceCertificate> {
        let u: Potential = self.approximant(k)?.clone().into();
        let other: Potential = match reference {
            Reference::Representative => self.representative.clone().into(),
            Reference::Level(m) => self.approximant(m)?.clone().into(),
        };
        if reference == Reference::Level(k) {
            let mut c = sup_difference(&u, &other)?;
            c.inf_bound = 0.0;
            c.sup_bound = 0.0;
            return Ok(c);
        }
        sup_difference(&u, &other)
    }

    pub fn report(&self, monte_carlo: Option<MonteCarloVolume>) -> GrowthReport {
        let seshadri = self.seshadri();
        GrowthReport {
            dim: self.dim(),
            vertex: self.vertex.clone(),
            normalization: self.map.clone(),
            polytope: self.polytope.clone(),
            c_max: self.c_max.clone(),
            levels: self.levels(),
            volume_ma: self.volume_ma(),
            volume_polytope: self.volume_polytope(),
            seshadri_lp: seshadri.lp.clone(),
            seshadri_domination: seshadri.domination.clone(),
            seshadri_bracket: seshadri.bracket.clone(),
            gap_inequality: self.gap_inequality(),
            certificates: self.certificates.clone(),
            monte_carlo,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub dim: usize,
    pub vertex: RatVec,
    pub normalization: UnimodularMap,
    pub polytope: Polytope,
    #[serde(with = "crate::rational::serde_rat")]
    pub c_max: Rat,
    pub levels: Vec<u32>,
    #[serde(with = "crate::rational::serde_rat")]
    pub volume_ma: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub volume_polytope: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub seshadri_lp: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub seshadri_domination: Rat,
    pub seshadri_bracket: RatVec,
    pub gap_inequality: GapInequality,
    pub certificates: Vec<BoundedDifferenceCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloVolume>,
}

pub fn factorial(n: usize) -> Rat {
    (1..=n).fold(Rat::one(), |acc, i| acc * int(i as i64))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Uniform point in the ball of radius `r` in ℝⁿ.
pub fn uniform_in_ball<R: Rng>(n: usize, r: f64, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let radius = r * rng.gen::<f64>().powf(1.0 / n as f64);
    g.into_iter().map(|x| x * radius / norm).collect()
}

const CHUNK: usize = 2048;

/// Gradients of `u` at `samples` uniform points of the ball of radius 50.
/// Chunks use independent streams, so the result does not depend on the
/// thread count.
pub fn sample_gradients(u: &SmoothToricPotential, samples: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let n = u.dim();
    let kernel = u.kernel();
    let chunks: Vec<Result<Vec<Vec<f64>>>> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len)
                .map(|_| {
                    let x = uniform_in_ball(n, SAMPLE_RADIUS, &mut rng);
                    match &kernel {
                        Some(k) => Ok(k.gradient(&x)),
                        None => u.gradient(&x),
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(samples);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Exact hull of floating point samples snapped to a dyadic grid. Candidates
/// extreme in a fixed set of directions seed the hull; samples found outside
/// it are added until none remain.
pub fn sampled_hull(n: usize, points: &[Vec<f64>]) -> Polytope {
    if points.is_empty() {
        return Polytope::empty(n);
    }
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut d = vec![0.0; n];
            d[i] = s;
            dirs.push(d);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..64 * n {
        dirs.push((0..n).map(|_| rng.sample(StandardNormal)).collect());
    }
    let mut chosen: Vec<usize> = dirs
        .iter()
        .map(|d| {
            (0..points.len())
                .max_by(|&a, &b| dot(d, &points[a]).total_cmp(&dot(d, &points[b])))
                .expect("nonempty")
        })
        .collect();
    chosen.sort_unstable();
    chosen.dedup();
    let snap = |p: &[f64]| RatVec(p.iter().map(|&x| rat_from_f64_snapped(x, SNAP_BITS)).collect());
    loop {
        let pts: Vec<RatVec> = chosen.iter().map(|&i| snap(&points[i])).collect();
        let hull = Polytope::conv(n, &pts).expect("samples share a dimension");
        let facets: Vec<(Vec<f64>, f64)> =
            hull.facets().iter().map(|h| (h.normal.to_f64(), rat_to_f64(&h.offset))).collect();
        let equations: Vec<(Vec<f64>, f64)> =
            hull.equations().iter().map(|h| (h.normal.to_f64(), rat_to_f64(&h.offset))).collect();
        let tol = 4.0 * (-(SNAP_BITS as f64)).exp2();
        let mut outside: Vec<(f64, usize)> = points
            .par_iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let scale = |a: &[f64]| a.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
                let worst = facets
                    .iter()
                    .map(|(a, b)| (dot(a, p) - b) / scale(a))
                    .chain(equations.iter().map(|(a, b)| (dot(a, p) - b).abs() / scale(a)))
                    .fold(f64::NEG_INFINITY, f64::max);
                (worst > tol).then_some((worst, i))
            })
            .collect();
        if outside.is_empty() {
            return hull;
        }
        outside.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        chosen.extend(outside.iter().take(32).map(|&(_, i)| i));
        chosen.sort_unstable();
        chosen.dedup();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::trapezoid;
    use crate::rational::rat;

    fn gc(p: &Polytope, levels: &[u32]) -> GrowthCondition {
        GrowthCondition::build(p, &RatVec::zeros(p.dim()), levels).unwrap()
    }

    #[test]
    fn build_simplex() {
        let g = gc(&Polytope::simplex(2, &int(1)), &[1, 2, 4]);
        assert_eq!(g.c_max(), &int(1));
        let expected = [3f64.ln(), 6f64.ln() / 2.0, 15f64.ln() / 4.0];
        for (c, e) in g.certificates().iter().zip(expected) {
            assert_eq!(c.inf_bound, 0.0);
            assert!((c.sup_bound - e).abs() < 1e-15);
        }
    }

    #[test]
    fn build_square_at_far_corner() {
        let sq = Polytope::cube(2, &int(2));
        let g = GrowthCondition::build(&sq, &RatVec::from_ints(&[2, 2]), &[1]).unwrap();
        assert_eq!(g.polytope(), &sq);
        assert_eq!(g.c_max(), &int(4));
        assert_eq!(gc(&trapezoid(), &[1]).c_max(), &int(3));
    }

    #[test]
    fn build_rejects_bad_input() {
        let p = Polytope::hull(&[RatVec::from_ints(&[0, 0]), RatVec::from_ints(&[2, 0]), RatVec::from_ints(&[0, 1])]).unwrap();
        assert!(matches!(GrowthCondition::build(&p, &RatVec::from_ints(&[0, 1]), &[1]), Err(Error::NotDelzantVertex { .. })));
        assert!(GrowthCondition::build(&p, &RatVec::zeros(3), &[1]).is_err());
    }

    #[test]
    fn exact_recovery() {
        for p in [Polytope::simplex(2, &int(1)), trapezoid(), Polytope::cube(3, &int(2))] {
            assert_eq!(gc(&p, &[]).recover_polytope(), p);
        }
    }

    #[test]
    fn sampled_recovery_of_square() {
        let g = gc(&Polytope::cube(2, &int(2)), &[4]);
        let r = g.recover_polytope_sampled(4, 10_000, 1).unwrap();
        assert!(r.hausdorff_bound < 0.5, "{}", r.hausdorff_bound);
        assert!(r.hausdorff_bound <= r.tolerance);
        let again = g.recover_polytope_sampled(4, 10_000, 1).unwrap();
        assert_eq!(r.polytope, again.polytope);
    }

    #[test]
    fn volumes() {
        assert_eq!(gc(&Polytope::simplex(2, &int(1)), &[]).volume_ma(), int(1));
        assert_eq!(gc(&Polytope::cube(2, &int(2)), &[]).volume_ma(), int(8));
        assert_eq!(gc(&trapezoid(), &[]).volume_ma(), int(4));
        assert_eq!(gc(&Polytope::cube(1, &int(5)), &[]).volume_ma(), int(5));
    }

    #[test]
    fn monte_carlo_volume_of_square() {
        let g = gc(&Polytope::cube(2, &int(2)), &[4]);
        let mc = g.volume_ma_monte_carlo(4, 20_000, 9).unwrap();
        assert!(mc.relative_error < 0.02, "{mc:?}");
        assert!(matches!(g.volume_ma_monte_carlo(3, 10, 9), Err(Error::UnknownLevel(3))));
    }

    #[test]
    fn seshadri_routes_agree() {
        for (p, e) in [(Polytope::simplex(2, &int(1)), int(1)), (Polytope::cube(2, &int(2)), int(2)), (trapezoid(), int(1))] {
            let s = gc(&p, &[]).seshadri();
            assert_eq!(s.lp, e);
            assert_eq!(s.domination, e);
            assert!(s.agree);
        }
        let odd = Polytope::cube(2, &rat(7, 3));
        let g = GrowthCondition {
            polytope: odd.clone(),
            c_max: rat(14, 3),
            ..gc(&Polytope::cube(2, &int(2)), &[])
        };
        assert_eq!(g.seshadri_domination().0, rat(7, 3));
    }

    #[test]
    fn gap_inequality_cases() {
        let s = gc(&Polytope::simplex(2, &int(1)), &[]).gap_inequality();
        assert!(s.equality && s.holds);
        let q = gc(&Polytope::cube(2, &int(2)), &[]).gap_inequality();
        assert!(q.holds && !q.equality);
        assert!((q.root - 8f64.sqrt()).abs() < 1e-12);
        let t = gc(&trapezoid(), &[]).gap_inequality();
        assert!(t.holds && !t.equality && (t.root - 2.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition() {
        let g = gc(&Polytope::simplex(2, &int(1)), &[]);
        let d = g.decompose(&[int(1), int(2)]);
        let expected = MaxAffineFunction::support_function(&Polytope::simplex(2, &int(1)).slice(&int(1))).unwrap();
        assert_eq!(d[&int(1)].as_ref().unwrap(), &expected);
        assert!(d[&int(2)].is_none());
        let sq = gc(&Polytope::cube(2, &int(2)), &[]);
        let levels: Vec<Rat> = (0..=4).map(int).collect();
        let all = sq.decompose(&levels);
        assert_eq!(GrowthCondition::reassemble(&all).unwrap(), *sq.representative());
        assert_eq!(sq.vertex_levels(), vec![int(0), int(2), int(4)]);
    }

    #[test]
    fn equivalence_certificates() {
        let g = gc(&Polytope::simplex(2, &int(1)), &[1, 2]);
        let c = g.equivalence(1, Reference::Level(2)).unwrap();
        assert!((c.radius() - (3f64.ln() + 6f64.ln() / 2.0)).abs() < 1e-14);
        assert_eq!(g.equivalence(2, Reference::Level(2)).unwrap().radius(), 0.0);
        assert!(matches!(g.equivalence(5, Reference::Representative), Err(Error::UnknownLevel(5))));
        let t = gc(&trapezoid(), &[1]).equivalence(1, Reference::Representative).unwrap();
        assert_eq!(t.inf_bound, 0.0);
        assert!((t.sup_bound - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn report_serializes() {
        let g = gc(&Polytope::simplex(2, &int(1)), &[1]);
        let v = serde_json::to_value(g.report(None)).unwrap();
        assert_eq!(v["volume_ma"], "1/1");
        assert_eq!(v["seshadri_domination"], "1/1");
        assert_eq!(v["gap_inequality"]["equality"], true);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(3), int(6));
    }
}
