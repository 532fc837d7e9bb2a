//! Jobs behind the `momentconekit` command line: one JSON result and one exit
//! code per job.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use momentconekit::error::Error;
use momentconekit::glued::{build_glued_program, count_lattice_points, feasibility};
use momentconekit::lp::{self, LpOptions};
use momentconekit::lr::{lr_hive_count, lr_tableaux, multi_lr, zelevinsky_reduce};
use momentconekit::moment::{klyachko_membership, moment_cone_verdict, sample_moment_map, SpectrumTuple};
use momentconekit::partition::Partition;
use momentconekit::quiver::{build_flag_extension, BipartiteSpec, FlagExtension, Weight};
use momentconekit::rational::serde_text::Text;
use momentconekit::semiinv::{effective_weight_membership_with, semiinv_dim, semiinv_dim_single_sink, ExtendedWeight};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub mod cli;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Exit codes.
pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", content = "payload", rename_all = "kebab-case")]
pub enum Job {
    Lrcoef(LrcoefJob),
    MultiLrcoef(MultiLrcoefJob),
    Zelevinsky(ZelevinskyJob),
    SemiinvDim(SemiinvDimJob),
    EffMembership(EffMembershipJob),
    MomentMembership(MomentMembershipJob),
    Klyachko(KlyachkoJob),
    LpFeasible(LpFeasibleJob),
    Sample(SampleJob),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LrMethod {
    #[default]
    Hive,
    Tableaux,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LrcoefJob {
    pub nu: Partition,
    pub lambda: Partition,
    pub mu: Partition,
    #[serde(default)]
    pub method: LrMethod,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiLrcoefJob {
    pub nu: Partition,
    pub lambdas: Vec<Partition>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZelevinskyJob {
    pub lambdas: Vec<Partition>,
    /// Block length; the longest partition when absent.
    #[serde(default)]
    pub length: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Via {
    #[default]
    Formula,
    Polytope,
}

/// A weight on `Q_β`, either by vertex name or as a list in vertex order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightInput {
    Named(BTreeMap<String, Text>),
    List(Vec<Text>),
}

impl WeightInput {
    pub fn resolve(&self, ext: &FlagExtension) -> Result<Weight, Error> {
        match self {
            WeightInput::Named(map) => {
                let map = map.iter().map(|(k, v)| (k.clone(), v.0.clone())).collect();
                Weight::from_named(&ext.quiver, &map)
            }
            WeightInput::List(values) => {
                let w = Weight::new(values.iter().map(|t| t.0.clone()).collect());
                w.check_domain(&ext.quiver)?;
                Ok(w)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiinvDimJob {
    pub spec: BipartiteSpec,
    pub sigma: WeightInput,
    #[serde(default)]
    pub via: Via,
    #[serde(default)]
    pub single_sink: bool,
    /// Only decide whether the glued polytope is nonempty.
    #[serde(default)]
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffMembershipJob {
    pub spec: BipartiteSpec,
    pub sigma: WeightInput,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentMembershipJob {
    pub spec: BipartiteSpec,
    pub tuple: SpectrumTuple,
    #[serde(default)]
    pub witness: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KlyachkoJob {
    pub n: usize,
    pub lambda: Vec<Text>,
    pub mu: Vec<Text>,
    pub nu: Vec<Text>,
}

/// Either an inline LP dump or the path of a file holding one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpFeasibleJob {
    #[serde(default)]
    pub lp: Option<Value>,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleJob {
    pub spec: BipartiteSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub budget: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context { budget: DEFAULT_BUDGET }
    }
}

impl Context {
    fn lp_options(&self) -> LpOptions {
        LpOptions { budget: self.budget, ..LpOptions::default() }
    }
}

/// Result of one job.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit: i32,
    pub result: Value,
}

impl Outcome {
    fn decided(positive: bool, result: Value) -> Self {
        Outcome { exit: if positive { EXIT_POSITIVE } else { EXIT_NEGATIVE }, result }
    }

    pub fn error(exit: i32, message: String) -> Self {
        Outcome { exit, result: json!({ "error": message }) }
    }

    fn from_error(e: Error) -> Self {
        let exit = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Outcome::error(exit, e.to_string())
    }
}

pub fn run(job: &Job, ctx: &Context) -> Outcome {
    run_inner(job, ctx).unwrap_or_else(Outcome::from_error)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn run_inner(job: &Job, ctx: &Context) -> Result<Outcome, Error> {
    Ok(match job {
        Job::Lrcoef(j) => {
            let value = match j.method {
                LrMethod::Tableaux => lr_tableaux(&j.nu, &j.lambda, &j.mu),
                LrMethod::Hive => {
                    let size = j.nu.len().max(j.lambda.len()).max(j.mu.len()).max(1);
                    lr_hive_count(&j.nu, &j.lambda, &j.mu, size)?
                }
            };
            Outcome::decided(value > 0, json!({ "value": value }))
        }
        Job::MultiLrcoef(j) => {
            let value = multi_lr(&j.nu, &j.lambdas);
            Outcome::decided(value > 0, json!({ "value": value }))
        }
        Job::Zelevinsky(j) => {
            let longest = j.lambdas.iter().map(Partition::len).max().unwrap_or(0).max(1);
            let pair = zelevinsky_reduce(&j.lambdas, j.length.unwrap_or(longest))?;
            Outcome::decided(true, to_value(&pair))
        }
        Job::SemiinvDim(j) => {
            let ext = build_flag_extension(&j.spec);
            let sigma = j.sigma.resolve(&ext)?;
            if j.feasible {
                let w = ExtendedWeight::new(&ext, &sigma)?;
                let prog = build_glued_program(&w.k_input(&ext)?)?;
                let outcome = feasibility(&prog, &ctx.lp_options())?;
                return Ok(Outcome::decided(
                    outcome.feasible,
                    json!({ "feasible": outcome.feasible, "certificate": outcome.certificate }),
                ));
            }
            let value: u128 = if j.single_sink {
                semiinv_dim_single_sink(&ext, &sigma)?.into()
            } else {
                match j.via {
                    Via::Formula => semiinv_dim(&ext, &sigma)?.into(),
                    Via::Polytope => {
                        let w = ExtendedWeight::new(&ext, &sigma)?;
                        w.check()?;
                        count_lattice_points(&build_glued_program(&w.k_input(&ext)?)?, ctx.budget)?
                    }
                }
            };
            Outcome::decided(value > 0, json!({ "value": value }))
        }
        Job::EffMembership(j) => {
            let ext = build_flag_extension(&j.spec);
            let sigma = j.sigma.resolve(&ext)?;
            let m = effective_weight_membership_with(&ext, &sigma, &ctx.lp_options())?;
            Outcome::decided(m.member, to_value(&m))
        }
        Job::MomentMembership(j) => {
            let mut verdict = moment_cone_verdict(&j.spec, &j.tuple, &ctx.lp_options())?;
            if !j.witness {
                verdict.witness = None;
            }
            Outcome::decided(verdict.member, to_value(&verdict))
        }
        Job::Klyachko(j) => {
            let seq = |v: &[Text]| v.iter().map(|t| t.0.clone()).collect::<Vec<_>>();
            let member = klyachko_membership(j.n, &seq(&j.lambda), &seq(&j.mu), &seq(&j.nu))?;
            Outcome::decided(member, json!({ "member": member }))
        }
        Job::LpFeasible(j) => {
            let text = match (&j.lp, &j.path) {
                (Some(v), None) => v.to_string(),
                (None, Some(p)) => read_file(p)?,
                _ => return Err(Error::InvalidSpec("give exactly one of `lp` and `path`".into())),
            };
            let program = lp::from_dump_json(&text)?;
            let outcome = lp::feasible_with(&program, &ctx.lp_options())?;
            Outcome::decided(outcome.feasible, to_value(&outcome))
        }
        Job::Sample(j) => Outcome::decided(true, to_value(&sample_moment_map(&j.spec, j.seed))),
    })
}

pub fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))
}

/// Parses JSON into `T`, naming the offending field and position on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path.is_empty() || path == "." {
            format!("{what}: {inner}")
        } else {
            format!("{what}: field `{path}`: {inner}")
        }
    })
}

/// Jobs from a batch file: a JSON array of jobs, or one job per line.
pub fn parse_batch(text: &str) -> Vec<Result<Job, String>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return match parse_json::<Vec<Value>>(text, "batch") {
            Ok(values) => values
                .into_iter()
                .enumerate()
                .map(|(k, v)| parse_json::<Job>(&v.to_string(), &format!("job {}", k + 1)))
                .collect(),
            Err(e) => vec![Err(e)],
        };
    }
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(k, line)| parse_json::<Job>(line, &format!("line {}", k + 1)))
        .collect()
}

/// Runs a batch, `jobs` at a time, and returns one JSON line per job in input
/// order together with the largest exit code.
pub fn run_batch(text: &str, ctx: &Context, jobs: usize) -> (Vec<String>, i32) {
    use rayon::prelude::*;
    let parsed = parse_batch(text);
    let work = || -> Vec<Outcome> {
        parsed
            .par_iter()
            .map(|job| match job {
                Ok(job) => run(job, ctx),
                Err(msg) => Outcome::error(EXIT_INPUT, msg.clone()),
            })
            .collect()
    };
    let outcomes = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    let exit = outcomes.iter().map(|o| o.exit).max().unwrap_or(EXIT_POSITIVE);
    let lines = outcomes
        .into_iter()
        .enumerate()
        .map(|(k, o)| json!({ "index": k, "exit": o.exit, "result": o.result }).to_string())
        .collect();
    (lines, exit)
}

/// Budget from `budget = N` in a TOML config file, if present.
pub fn budget_from_config(path: &Path) -> Result<Option<u64>, String> {
    let Ok(text) = std::fs::read_to_string(path) else {
        return Ok(None);
    };
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Config {
        budget: Option<u64>,
    }
    toml::from_str::<Config>(&text)
        .map(|c| c.budget)
        .map_err(|e| format!("{}: {e}", path.display()))
}

pub fn default_config_path() -> Option<PathBuf> {
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".momentconekit.toml"))
}

/// Short human-readable rendering of a result.
pub fn render_plain(result: &Value) -> String {
    let Some(obj) = result.as_object() else {
        return result.to_string();
    };
    if let Some(e) = obj.get("error").and_then(Value::as_str) {
        return format!("error: {e}");
    }
    if obj.len() == 1 {
        if let Some(v) = obj.get("value") {
            return v.to_string();
        }
    }
    let diagnostic = obj.get("diagnostic").and_then(Value::as_str).map(|d| format!(" ({d})")).unwrap_or_default();
    if let Some(m) = obj.get("member").and_then(Value::as_bool) {
        return format!("{}{diagnostic}", if m { "member" } else { "not a member" });
    }
    if let Some(f) = obj.get("feasible").and_then(Value::as_bool) {
        return format!("{}{diagnostic}", if f { "feasible" } else { "infeasible" });
    }
    serde_json::to_string_pretty(result).expect("values print")
}
