//! Gluing a Fubini–Study type potential on a ball into the growth
//! representative with a regularized maximum, and the ball-packing bounds
//! that go with it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::convexfn::{grows_slower, regularized_max, MaxAffineFunction, Potential, SmoothToricPotential};
use crate::error::{Error, Result};
use crate::growth::{factorial, uniform_in_ball, GrowthCondition};
use crate::rational::{format_rat, rat_to_f64, Rat};

#[derive(Clone, Debug)]
pub struct FitOptions {
    /// Width of the regularized maximum.
    pub epsilon: f64,
    /// Extra slack beyond `ε` required on the inner and outer regions.
    pub margin: f64,
    /// Sample points per region.
    pub samples: usize,
    pub convexity_pairs: usize,
    pub seed: u64,
    /// Maximum number of unit steps in `2·ln R′` before giving up.
    pub horizon: u32,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { epsilon: 0.25, margin: 1.0, samples: 1000, convexity_pairs: 10_000, seed: 0, horizon: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionCheck {
    pub points: usize,
    pub min_margin: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub pairs: usize,
    pub min_slack: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GluingCertificate {
    #[serde(rename = "R")]
    pub r: f64,
    /// `sup (target − source)` over `X_R = {Σ eˣⁱ ≤ R²}`.
    pub inner_sup: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// `ln R′`, kept because `R′` itself may overflow.
    #[serde(rename = "ln_R_prime")]
    pub ln_r_prime: f64,
    #[serde(rename = "R_prime")]
    pub r_prime: f64,
    pub epsilon: f64,
    pub margin: f64,
    pub seed: u64,
    /// Inner: `source + C − target − ε` on `X_R`.
    pub inner_check: RegionCheck,
    /// Band: the glued value lies in `[max, max + ε/4]`.
    pub band_check: RegionCheck,
    /// Outer: `target − source − C − ε` off `X_{R′}`.
    pub outer_check: RegionCheck,
    pub convexity_check: ConvexityCheck,
    /// Convexity is certified in logarithmic coordinates only.
    pub scope: &'static str,
}

impl GluingCertificate {
    pub fn passed(&self) -> bool {
        self.inner_check.passed && self.band_check.passed && self.outer_check.passed && self.convexity_check.passed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Source,
    Band,
    Target,
}

/// `M_ε(source + C, target)`.
#[derive(Clone, Debug)]
pub struct GluedPotential {
    pub source: SmoothToricPotential,
    pub target: MaxAffineFunction,
    pub certificate: GluingCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub t: f64,
    pub source: f64,
    pub target: f64,
    pub glued: f64,
}

impl GluedPotential {
    fn parts(&self, x: &[f64]) -> Result<(f64, f64)> {
        Ok((self.source.eval(x)? + self.certificate.c, self.target.eval(x)?))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let (a, b) = self.parts(x)?;
        regularized_max(a, b, self.certificate.epsilon)
    }

    pub fn branch(&self, x: &[f64]) -> Result<Branch> {
        let (a, b) = self.parts(x)?;
        let eps = self.certificate.epsilon;
        Ok(if a - b >= eps {
            Branch::Source
        } else if b - a >= eps {
            Branch::Target
        } else {
            Branch::Band
        })
    }

    /// Values along the diagonal `x = t·𝟙`.
    pub fn radial_profile(&self, ts: &[f64]) -> Result<Vec<ProfileRow>> {
        let n = self.target.dim();
        ts.iter()
            .map(|&t| {
                let x = vec![t; n];
                let (source, target) = self.parts(&x)?;
                Ok(ProfileRow { t, source, target, glued: self.eval(&x)? })
            })
            .collect()
    }
}

/// `sup (h_Δ − λ·ln(1 + Σeˣⁱ))` over `Σ eˣⁱ ≤ R²`, in closed form per vertex:
/// the weights `eˣⁱ` split proportionally to `v`, and the total `W` solves a
/// one-variable problem.
fn inner_sup(gc: &GrowthCondition, lambda: f64, r: f64) -> f64 {
    let r2 = r * r;
    gc.polytope()
        .vertices()
        .iter()
        .map(|v| {
            let v = v.to_f64();
            let m: f64 = v.iter().sum();
            if m == 0.0 {
                return 0.0;
            }
            let entropy: f64 = v.iter().filter(|&&vi| vi > 0.0).map(|vi| vi * (vi / m).ln()).sum();
            let w = if lambda > m { (m / (lambda - m)).min(r2) } else { r2 };
            entropy + m * w.ln() - lambda * w.ln_1p()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Samples `x` with `Σ eˣⁱ = W` for `ln W` uniform in `[lo, hi]`.
fn sample_shell<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    let s = rng.gen_range(lo..=hi);
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|ei| s + (ei / total).ln()).collect()
}

/// Samples `x` from the image of the complex ball of radius `r`.
fn sample_inner<R: Rng>(n: usize, r: f64, rng: &mut R) -> Vec<f64> {
    let z = uniform_in_ball(2 * n, r, rng);
    (0..n).map(|i| (z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1]).ln()).collect()
}

const OUTER_DEPTH: f64 = 10.0;

/// Glues `source + C` (on the ball of radius `r`) into the representative of
/// `gc` (outside a larger ball) and certifies the result by sampling.
pub fn fit_ball(gc: &GrowthCondition, source: &SmoothToricPotential, r: f64, opts: &FitOptions) -> Result<GluedPotential> {
    let n = gc.dim();
    if source.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: source.dim() });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::DegenerateInput(format!("ball radius must be positive, got {r}")));
    }
    if opts.epsilon.is_nan() || opts.epsilon <= 0.0 {
        return Err(Error::NonpositiveEpsilon(opts.epsilon));
    }
    let target = gc.representative().clone();
    let SmoothToricPotential::ScaledFubiniStudy { lambda, .. } = source else {
        return Err(Error::IncomparableFamilies(format!("{} sources cannot be fitted", source.family())));
    };
    let cmp = grows_slower(&source.clone().into(), &Potential::MaxAffine(target.clone()))?;
    if !cmp.slower {
        let vertex = cmp.vertex.clone();
        let facet = cmp.facet.as_ref().map(|h| (h.normal.clone(), format_rat(&h.offset)));
        return Err(Error::GrowthViolation {
            message: format!(
                "{}·Σ is not inside the moment polytope away from the origin{}",
                format_rat(lambda),
                match (&cmp.vertex, &cmp.facet) {
                    (Some(v), Some(h)) => format!(": vertex {v} against facet {h}"),
                    _ => String::new(),
                }
            ),
            vertex,
            facet,
        });
    }
    let obstruction = volume_obstruction(source, gc);
    if !obstruction.passes {
        return Err(Error::GrowthViolation {
            message: format!(
                "source volume {} exceeds the degree {}",
                format_rat(&obstruction.source_volume),
                format_rat(&obstruction.target_volume)
            ),
            vertex: None,
            facet: None,
        });
    }

    let lam = rat_to_f64(lambda);
    let eps = opts.epsilon;
    let sup = inner_sup(gc, lam, r);
    let c = sup + eps + opts.margin;

    // Outside X_{R′}: h_Δ ≥ ε*·max(0, maxᵢ xᵢ) and the source is at most
    // λ·max(0, maxᵢ xᵢ) + λ·ln(n + 1), with maxᵢ xᵢ ≥ 2·ln R′ − ln n.
    let eps_star = rat_to_f64(&gc.seshadri_lp());
    let ln_n = (n as f64).ln();
    let need = c + eps + opts.margin;
    let mut s = (2.0 * r.ln()).max(ln_n).ceil();
    let mut steps = 0;
    while (eps_star - lam) * (s - ln_n) - lam * ((n + 1) as f64).ln() < need {
        s += 1.0;
        steps += 1;
        if steps > opts.horizon {
            return Err(Error::NonConvergence(format!("outer radius search passed 2·ln R′ = {s}")));
        }
    }
    let ln_r_prime = s / 2.0;

    let mut glued = GluedPotential {
        source: source.clone(),
        target,
        certificate: GluingCertificate {
            r,
            inner_sup: sup,
            c,
            ln_r_prime,
            r_prime: ln_r_prime.exp(),
            epsilon: eps,
            margin: opts.margin,
            seed: opts.seed,
            inner_check: RegionCheck { points: 0, min_margin: f64::NAN, passed: false },
            band_check: RegionCheck { points: 0, min_margin: f64::NAN, passed: false },
            outer_check: RegionCheck { points: 0, min_margin: f64::NAN, passed: false },
            convexity_check: ConvexityCheck { pairs: 0, min_slack: f64::NAN, passed: false },
            scope: "convexity in logarithmic coordinates",
        },
    };
    certify(&mut glued, opts)?;
    Ok(glued)
}

fn certify(g: &mut GluedPotential, opts: &FitOptions) -> Result<()> {
    let n = g.target.dim();
    let cert = &g.certificate;
    let (eps, ln_r2, ln_rp2) = (cert.epsilon, 2.0 * cert.r.ln(), 2.0 * cert.ln_r_prime);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let region = |which: u8, rng: &mut ChaCha8Rng| match which {
        0 => sample_inner(n, cert.r, rng),
        1 => sample_shell(n, ln_r2, ln_rp2.max(ln_r2), rng),
        _ => sample_shell(n, ln_rp2, ln_rp2 + OUTER_DEPTH, rng),
    };

    let mut inner = f64::INFINITY;
    let mut band = f64::INFINITY;
    let mut outer = f64::INFINITY;
    let mut branches_ok = true;
    for which in 0..3u8 {
        for _ in 0..opts.samples {
            let x = region(which, &mut rng);
            let (a, b) = g.parts(&x)?;
            let m = g.eval(&x)?;
            match which {
                0 => {
                    inner = inner.min(a - b - eps);
                    branches_ok &= m == a;
                }
                1 => band = band.min((m - a.max(b)).min(a.max(b) + eps / 4.0 - m)),
                _ => {
                    outer = outer.min(b - a - eps);
                    branches_ok &= m == b;
                }
            }
        }
    }
    let tol = 1e-12;
    let mut min_slack = f64::INFINITY;
    for _ in 0..opts.convexity_pairs {
        let (i, j) = (rng.gen_range(0..3u8), rng.gen_range(0..3u8));
        let (x, y) = (region(i, &mut rng), region(j, &mut rng));
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (a + b) / 2.0).collect();
        let slack = (g.eval(&x)? + g.eval(&y)?) / 2.0 - g.eval(&mid)?;
        min_slack = min_slack.min(slack);
    }
    let c = &mut g.certificate;
    c.inner_check = RegionCheck { points: opts.samples, min_margin: inner, passed: inner > 0.0 && branches_ok };
    c.band_check = RegionCheck { points: opts.samples, min_margin: band, passed: band >= -tol };
    c.outer_check = RegionCheck { points: opts.samples, min_margin: outer, passed: outer > 0.0 && branches_ok };
    c.convexity_check = ConvexityCheck { pairs: opts.convexity_pairs, min_slack, passed: min_slack >= -tol };
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct GromovBound {
    /// Largest `λ` such that `λ·ω_FS` fits; equals the Seshadri constant.
    #[serde(with = "crate::rational::serde_rat")]
    pub lambda: Rat,
    /// Radius `r` of the standard ball with `πr² = λ`.
    pub radius: f64,
}

pub fn gromov_lower_bound(gc: &GrowthCondition) -> GromovBound {
    let lambda = gc.seshadri_lp();
    let radius = (rat_to_f64(&lambda) / std::f64::consts::PI).sqrt();
    GromovBound { lambda, radius }
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeObstruction {
    /// `n!·vol` of the slope polytope of the source.
    #[serde(with = "crate::rational::serde_rat")]
    pub source_volume: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub target_volume: Rat,
    pub passes: bool,
}

/// The necessary condition `∫ω₀ⁿ ≤ (Lⁿ)`.
pub fn volume_obstruction(source: &SmoothToricPotential, gc: &GrowthCondition) -> VolumeObstruction {
    let p = source.slope_polytope();
    let source_volume = if p.is_full_dimensional() {
        p.volume().expect("full-dimensional") * factorial(p.dim())
    } else {
        Rat::from_integer(0.into())
    };
    let target_volume = gc.volume_ma();
    VolumeObstruction { passes: source_volume <= target_volume, source_volume, target_volume }
}
