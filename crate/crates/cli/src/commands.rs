use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use growthlab::convexfn::{logsumexp_from_polytope, Potential, SmoothToricPotential};
use growthlab::embed::{fit_ball, gromov_lower_bound, volume_obstruction, FitOptions};
use growthlab::growth::GrowthCondition;
use growthlab::okounkov::{
    chebyshev_transform, infinitesimal_map, okounkov_body, seshadri_from_body, volume_identity_check, GradedMonomialSeries,
    MonomialOrder, OrderKind,
};
use growthlab::polytope::{is_delzant, normalize_at_vertex};
use growthlab::rational::{format_rat, parse_rat, rat_to_f64};
use growthlab::{Error, Polytope, Rat, RatVec};
use serde_json::{json, Value};

use crate::{svg, Command, Order, Target};

#[derive(Debug)]
pub enum Failure {
    /// A violated precondition reported by the library.
    Precondition(Error),
    /// Unreadable or malformed input files and arguments.
    Input(String),
    Internal(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Precondition(e) => write!(f, "{e}"),
            Failure::Input(m) => write!(f, "{m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence(m) => Failure::Internal(m),
            e => Failure::Precondition(e),
        }
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut v = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::GrowthViolation { vertex, facet, .. } = e {
        v["vertex"] = json!(vertex);
        v["facet"] = match facet {
            Some((normal, offset)) => json!({ "normal": normal, "offset": offset }),
            None => Value::Null,
        };
    }
    v
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Precondition(_) | Failure::Input(_) => 2,
            Failure::Internal(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Precondition(e) => error_json(e),
            Failure::Input(m) => json!({ "kind": "InvalidInput", "message": m }),
            Failure::Internal(m) => json!({ "kind": "Internal", "message": m }),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub enum Output {
    Json(Value),
    Text(String),
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn load_polytope(path: &Path) -> CliResult<Polytope> {
    Ok(Polytope::from_json_str(&read(path)?)?)
}

pub fn parse_rat_arg(s: &str) -> CliResult<Rat> {
    parse_rat(s.trim()).map_err(|e| Failure::Input(format!("{s:?}: {e}")))
}

pub fn parse_point(s: &str) -> CliResult<RatVec> {
    Ok(RatVec(s.split(',').map(parse_rat_arg).collect::<CliResult<_>>()?))
}

fn vertex_or_origin(p: &Polytope, v: &Option<String>) -> CliResult<RatVec> {
    match v {
        Some(s) => parse_point(s),
        None => Ok(RatVec::zeros(p.dim())),
    }
}

fn growth_condition(t: &Target, levels: &[u32]) -> CliResult<GrowthCondition> {
    let p = load_polytope(&t.polytope)?;
    let v = vertex_or_origin(&p, &t.vertex)?;
    Ok(GrowthCondition::build(&p, &v, levels)?)
}

fn fs_source(lambda: &str, n: usize) -> CliResult<SmoothToricPotential> {
    let l = parse_rat_arg(lambda)?;
    if l < Rat::from_integer(0.into()) {
        return Err(Failure::Input(format!("λ must be nonnegative, got {lambda}")));
    }
    Ok(SmoothToricPotential::scaled_fubini_study(l, n))
}

pub fn run(cmd: &Command, seed: u64) -> CliResult<Output> {
    let v = match cmd {
        Command::CheckDelzant { polytope } => to_value(&is_delzant(&load_polytope(polytope)?)?),
        Command::Normalize(t) => {
            let p = load_polytope(&t.polytope)?;
            let (q, map) = normalize_at_vertex(&p, &vertex_or_origin(&p, &t.vertex)?)?;
            json!({ "polytope": q, "map": map })
        }
        Command::Growth { target, k, monte_carlo, samples, svg: svg_path } => {
            let gc = growth_condition(target, k)?;
            let mc = match (monte_carlo, k.iter().max()) {
                (true, Some(&top)) => Some(gc.volume_ma_monte_carlo(top, *samples, seed)?),
                _ => None,
            };
            if let Some(path) = svg_path {
                svg::check_planar(gc.polytope())?;
                let sigma = Polytope::simplex(gc.dim(), &gc.seshadri_lp());
                let layers = [
                    svg::Layer::new(gc.polytope(), "#1f4e79", "Δ"),
                    svg::Layer::new(&sigma, "#c0392b", &format!("{}·Σ", format_rat(&gc.seshadri_lp()))),
                ];
                write(path, &svg::render(&layers)?)?;
            }
            to_value(&gc.report(mc))
        }
        Command::Volume { target, k, samples } => {
            let gc = growth_condition(target, &[*k])?;
            json!({
                "volume_ma": format_rat(&gc.volume_ma()),
                "volume_polytope": format_rat(&gc.volume_polytope()),
                "monte_carlo": gc.volume_ma_monte_carlo(*k, *samples, seed)?,
            })
        }
        Command::Seshadri(t) => {
            let gc = growth_condition(t, &[])?;
            json!({ "seshadri": gc.seshadri(), "gap_inequality": gc.gap_inequality() })
        }
        Command::Decompose { target, levels } => {
            let gc = growth_condition(target, &[])?;
            let levels = match levels {
                Some(ls) => ls.iter().map(|s| parse_rat_arg(s)).collect::<CliResult<Vec<_>>>()?,
                None => gc.vertex_levels(),
            };
            let parts = gc.decompose(&levels);
            let components: BTreeMap<String, Value> = parts
                .iter()
                .map(|(l, f)| {
                    let v = f.as_ref().map(|f| json!({ "pieces": f.pieces(), "slope_polytope": f.slope_polytope() }));
                    (format_rat(l), v.unwrap_or(Value::Null))
                })
                .collect();
            let reassembled = GrowthCondition::reassemble(&parts).ok();
            json!({
                "polytope": gc.polytope(),
                "components": components,
                "reassembles": reassembled.map(|f| &f == gc.representative()),
            })
        }
        Command::Okounkov { polytope, vertex, series, order, perm, k_max, vol_l, svg: svg_path } => {
            let (s, vol) = match (polytope, series) {
                (Some(path), _) => {
                    let p = load_polytope(path)?;
                    let v = vertex_or_origin(&p, vertex)?;
                    let gc = GrowthCondition::build(&p, &v, &[])?;
                    (GradedMonomialSeries::toric(gc.polytope(), *k_max)?, Some(gc.volume_ma()))
                }
                (None, Some(path)) => {
                    let vol = vol_l.as_deref().map(parse_rat_arg).transpose()?;
                    (GradedMonomialSeries::from_json_str(&read(path)?)?, vol)
                }
                (None, None) => return Err(Failure::Input("either --polytope or --series is required".into())),
            };
            let n = s.dim();
            let kind = match order {
                Order::Lex => OrderKind::Lex,
                Order::Deglex => OrderKind::Deglex,
            };
            let order = MonomialOrder::new(kind, perm.clone().unwrap_or_else(|| (0..n).collect()))?;
            let body = okounkov_body(&s, &order, *k_max)?;
            let f_map = infinitesimal_map(body.best());
            if let Some(path) = svg_path {
                svg::check_planar(body.best())?;
                let mut layers: Vec<svg::Layer> =
                    body.hull_at_k.iter().map(|(k, h)| svg::Layer::new(h, "#1f4e79", &format!("k = {k}"))).collect();
                layers.push(svg::Layer::new(&f_map, "#c0392b", "F(Δ)"));
                write(path, &svg::render(&layers)?)?;
            }
            let seshadri = match seshadri_from_body(body.best()) {
                Ok(e) => json!(format_rat(&e)),
                Err(e) => json!({ "error": error_json(&e) }),
            };
            json!({
                "body": body,
                "multiplicativity_violation": s.multiplicativity_violation(),
                "volume_check": vol.map(|v| volume_identity_check(&body, &v)),
                "seshadri_from_body": seshadri,
                "f_map": f_map,
            })
        }
        Command::Chebyshev { polytope, vertex, k, fs_lambda, dim, at } => {
            let u: Potential = match (polytope, fs_lambda) {
                (Some(path), _) => {
                    let p = load_polytope(path)?;
                    let gc = GrowthCondition::build(&p, &vertex_or_origin(&p, vertex)?, &[])?;
                    match k {
                        Some(k) => logsumexp_from_polytope(gc.polytope(), *k)?.into(),
                        None => gc.representative().clone().into(),
                    }
                }
                (None, Some(l)) => fs_source(l, dim.expect("clap enforces --dim"))?.into(),
                (None, None) => return Err(Failure::Input("either --polytope or --fs-lambda is required".into())),
            };
            let c = chebyshev_transform(&u)?;
            let values = at
                .iter()
                .map(|s| {
                    let y: Vec<f64> = parse_point(s)?.iter().map(rat_to_f64).collect();
                    Ok(json!({ "y": y, "value": c.eval(&y)? }))
                })
                .collect::<CliResult<Vec<_>>>()?;
            json!({ "domain": c.domain(), "values": values })
        }
        Command::EmbedBall { target, fs_lambda, r, epsilon, samples, pairs, profile } => {
            let gc = growth_condition(target, &[])?;
            let source = fs_source(fs_lambda, gc.dim())?;
            let opts = FitOptions { epsilon: *epsilon, samples: *samples, convexity_pairs: *pairs, seed, ..FitOptions::default() };
            let glued = fit_ball(&gc, &source, *r, &opts)?;
            let cert = &glued.certificate;
            if let Some(path) = profile {
                let ln_n = (gc.dim() as f64).ln();
                let (lo, hi) = (2.0 * r.ln() - ln_n - 5.0, 2.0 * cert.ln_r_prime - ln_n + 5.0);
                let ts: Vec<f64> = (0..=200).map(|i| lo + (hi - lo) * f64::from(i) / 200.0).collect();
                let mut csv = String::from("t,source_plus_c,target,glued\n");
                for row in glued.radial_profile(&ts)? {
                    csv += &format!("{},{},{},{}\n", row.t, row.source, row.target, row.glued);
                }
                write(path, &csv)?;
            }
            if !cert.passed() {
                return Err(Failure::Internal(format!(
                    "gluing certificate failed: {}",
                    serde_json::to_string(cert).expect("serializable")
                )));
            }
            json!({ "certificate": cert, "volume_obstruction": volume_obstruction(&source, &gc) })
        }
        Command::Gromov(t) => to_value(&gromov_lower_bound(&growth_condition(t, &[])?)),
        Command::Corpus { dir, format } => return crate::corpus::run(dir.as_deref(), *format),
    };
    Ok(Output::Json(v))
}
