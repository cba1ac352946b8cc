//! Corpus runner: one row of exact invariants per (polytope, vertex).

use std::path::Path;

use growthlab::corpus::builtin;
use growthlab::embed::gromov_lower_bound;
use growthlab::growth::GrowthCondition;
use growthlab::okounkov::{okounkov_body, seshadri_from_body, volume_identity_check, GradedMonomialSeries, MonomialOrder};
use growthlab::polytope::PolytopeJson;
use growthlab::rational::format_rat;
use growthlab::{Error, Polytope, RatVec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::{error_json, read, CliResult, Failure, Output};
use crate::Format;

/// Levels used for the Okounkov body column.
const OKOUNKOV_LEVELS: u32 = 3;

#[derive(Deserialize)]
struct CorpusFile {
    #[serde(flatten)]
    polytope: PolytopeJson,
    vertex: Option<RatVec>,
}

struct Job {
    name: String,
    source: String,
    input: std::result::Result<(Polytope, RatVec), Error>,
}

#[derive(Serialize, Default)]
pub struct Row {
    pub name: String,
    pub source: String,
    pub dim: Option<usize>,
    pub vertex: Option<RatVec>,
    pub volume_ma: Option<String>,
    pub seshadri_lp: Option<String>,
    pub seshadri_domination: Option<String>,
    pub seshadri_agree: Option<bool>,
    pub okounkov_volume_identity: Option<bool>,
    pub okounkov_seshadri_agree: Option<bool>,
    pub gromov_lambda: Option<String>,
    pub gromov_radius: Option<f64>,
    /// `(Lⁿ)^{1/n} − ε`.
    pub gap_slack: Option<f64>,
    pub gap_equality: Option<bool>,
    pub error: Option<Value>,
}

fn load_dir(dir: &Path) -> CliResult<Vec<Job>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Input(format!("cannot list {}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let input = read(&path).map(|text| {
                serde_json::from_str::<CorpusFile>(&text).map_err(|e| Error::Parse(e.to_string())).and_then(|f| {
                    let p = f.polytope.to_polytope()?;
                    let v = match f.vertex {
                        Some(v) => v,
                        None => p.vertices().first().cloned().ok_or_else(|| Error::EmptyInput("polytope has no vertices".into()))?,
                    };
                    Ok((p, v))
                })
            })?;
            Ok(Job { name, source: path.display().to_string(), input })
        })
        .collect()
}

fn row(job: &Job) -> Row {
    let mut row = Row { name: job.name.clone(), source: job.source.clone(), ..Row::default() };
    if let Err(e) = fill(job, &mut row) {
        row.error = Some(error_json(&e));
    }
    row
}

fn fill(job: &Job, row: &mut Row) -> growthlab::Result<()> {
    let (p, v) = job.input.as_ref().map_err(Clone::clone)?;
    row.dim = Some(p.dim());
    row.vertex = Some(v.clone());
    let gc = GrowthCondition::build(p, v, &[])?;
    let vol = gc.volume_ma();
    row.volume_ma = Some(format_rat(&vol));
    let s = gc.seshadri();
    row.seshadri_lp = Some(format_rat(&s.lp));
    row.seshadri_domination = Some(format_rat(&s.domination));
    row.seshadri_agree = Some(s.agree);
    let gap = gc.gap_inequality();
    row.gap_slack = Some(gap.slack);
    row.gap_equality = Some(gap.equality);
    let g = gromov_lower_bound(&gc);
    row.gromov_lambda = Some(format_rat(&g.lambda));
    row.gromov_radius = Some(g.radius);
    let series = GradedMonomialSeries::toric(gc.polytope(), OKOUNKOV_LEVELS)?;
    let body = okounkov_body(&series, &MonomialOrder::deglex(p.dim()), OKOUNKOV_LEVELS)?;
    row.okounkov_volume_identity = volume_identity_check(&body, &vol).exact;
    row.okounkov_seshadri_agree = Some(seshadri_from_body(body.best())? == s.lp);
    Ok(())
}

pub fn rows(dir: Option<&Path>) -> CliResult<Vec<Row>> {
    let mut jobs: Vec<Job> = builtin()
        .into_iter()
        .map(|e| Job { name: e.name, source: "builtin".into(), input: Ok((e.polytope, e.vertex)) })
        .collect();
    if let Some(dir) = dir {
        jobs.extend(load_dir(dir)?);
    }
    Ok(jobs.par_iter().map(row).collect())
}

const COLUMNS: [&str; 15] = [
    "name",
    "source",
    "dim",
    "vertex",
    "volume_ma",
    "seshadri_lp",
    "seshadri_domination",
    "seshadri_agree",
    "okounkov_volume_identity",
    "okounkov_seshadri_agree",
    "gromov_lambda",
    "gromov_radius",
    "gap_slack",
    "gap_equality",
    "error",
];

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Object(o) => o.get("kind").and_then(Value::as_str).unwrap_or("error").to_string(),
        Value::Array(a) => a.iter().map(csv_field).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

pub fn run(dir: Option<&Path>, format: Format) -> CliResult<Output> {
    let rows = rows(dir)?;
    let values: Vec<Value> = rows.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect();
    Ok(match format {
        Format::Json => Output::Json(serde_json::json!({ "rows": values })),
        Format::Csv => {
            let mut out = COLUMNS.join(",") + "\n";
            for v in &values {
                let line: Vec<String> = COLUMNS.iter().map(|k| csv_field(&v[*k]).replace(',', ";")).collect();
                out += &(line.join(",") + "\n");
            }
            Output::Text(out)
        }
    })
}
