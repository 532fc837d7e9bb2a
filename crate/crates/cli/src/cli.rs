//! Argument parsing. Each subcommand builds a [`Job`] and prints its result.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use momentconekit::moment::SpectrumTuple;
use momentconekit::partition::Partition;
use momentconekit::quiver::{build_flag_extension, BipartiteSpec};
use momentconekit::rational::{self, serde_text::Text};
use momentconekit::semiinv::ExtendedWeight;

use crate::*;

#[derive(Parser, Debug)]
#[command(name = "momentconekit", version, about = "Moment cones, semi-invariants and Littlewood-Richardson coefficients")]
pub struct Cli {
    /// Step budget for enumeration and LP work [default: config file, else 100000000].
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Config file holding `budget = N` [default: ~/.momentconekit.toml].
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Plain,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// c^ν_{λ,μ}.
    Lrcoef {
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long, value_enum, default_value_t = LrMethod::Hive)]
        method: LrMethod,
    },
    /// c^ν_{λ(1),…,λ(r)}; repeat --lambda for each factor.
    MultiLrcoef {
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[arg(long = "lambda", value_parser = parse_partition, required = true)]
        lambdas: Vec<Partition>,
    },
    /// The pair (λ̃, μ̃) with c^{λ̃}_{μ̃,ν} = c^ν_{λ(1),…,λ(r)}.
    Zelevinsky {
        #[arg(long = "lambda", value_parser = parse_partition, required = true)]
        lambdas: Vec<Partition>,
        #[arg(long)]
        length: Option<usize>,
    },
    /// dim SI(Q_β, β̃)_σ̃.
    SemiinvDim {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, alias = "weight")]
        sigma: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Formula)]
        via: Via,
        /// Use the one-coefficient formula (one sink only).
        #[arg(long)]
        single_sink: bool,
        /// Count lattice points of the glued polytope (same as --via polytope).
        #[arg(long, conflicts_with = "feasible")]
        count: bool,
        /// Only decide whether the glued polytope is nonempty.
        #[arg(long)]
        feasible: bool,
        /// Write the glued program as {"A","b","eq_rows","var_names"}.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Whether σ is an effective weight of (Q_β, β̃).
    EffMembership {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, alias = "weight")]
        sigma: PathBuf,
    },
    /// Whether a spectrum tuple lies in the moment cone.
    MomentMembership {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        /// Include the LP witness in the verdict.
        #[arg(long)]
        witness: bool,
    },
    /// Whether (λ, μ, ν) are spectra of Hermitian H_1, H_2 and H_1 + H_2.
    Klyachko {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rationals, allow_hyphen_values = true)]
        lambda: RationalList,
        #[arg(long, value_parser = parse_rationals, allow_hyphen_values = true)]
        mu: RationalList,
        #[arg(long, value_parser = parse_rationals, allow_hyphen_values = true)]
        nu: RationalList,
    },
    /// Feasibility of an LP dump.
    LpFeasible { file: PathBuf },
    /// Spectra of the moment map at a random representation.
    Sample {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a file of jobs (JSON array or one job per line).
    Batch {
        file: PathBuf,
        /// Jobs run in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Clone)]
pub struct RationalList(pub Vec<Text>);

fn parse_partition(s: &str) -> Result<Partition, String> {
    Partition::parse(s).map_err(|e| e.to_string())
}

fn parse_rationals(s: &str) -> Result<RationalList, String> {
    if s.trim().is_empty() {
        return Ok(RationalList(Vec::new()));
    }
    s.split(',')
        .map(|x| rational::parse(x.trim()).map(Text).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(RationalList)
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = read_file(path).map_err(|e| e.to_string())?;
    parse_json(&text, &path.display().to_string())
}

/// Builds the job for a subcommand; `Err` carries an input diagnostic.
fn job_for(command: &Command, ctx: &Context) -> Result<Job, String> {
    Ok(match command {
        Command::Lrcoef { nu, lambda, mu, method } => {
            Job::Lrcoef(LrcoefJob { nu: nu.clone(), lambda: lambda.clone(), mu: mu.clone(), method: *method })
        }
        Command::MultiLrcoef { nu, lambdas } => Job::MultiLrcoef(MultiLrcoefJob { nu: nu.clone(), lambdas: lambdas.clone() }),
        Command::Zelevinsky { lambdas, length } => Job::Zelevinsky(ZelevinskyJob { lambdas: lambdas.clone(), length: *length }),
        Command::SemiinvDim { spec, sigma, via, single_sink, count, feasible, dump_lp } => {
            let spec: BipartiteSpec = read_json(spec)?;
            let sigma: WeightInput = read_json(sigma)?;
            if let Some(out) = dump_lp {
                write_dump(&spec, &sigma, out, ctx)?;
            }
            Job::SemiinvDim(SemiinvDimJob {
                spec,
                sigma,
                via: if *count { Via::Polytope } else { *via },
                single_sink: *single_sink,
                feasible: *feasible,
            })
        }
        Command::EffMembership { spec, sigma } => {
            Job::EffMembership(EffMembershipJob { spec: read_json(spec)?, sigma: read_json(sigma)? })
        }
        Command::MomentMembership { spec, tuple, witness } => {
            let tuple: SpectrumTuple = read_json(tuple)?;
            Job::MomentMembership(MomentMembershipJob { spec: read_json(spec)?, tuple, witness: *witness })
        }
        Command::Klyachko { n, lambda, mu, nu } => Job::Klyachko(KlyachkoJob {
            n: *n,
            lambda: lambda.0.clone(),
            mu: mu.0.clone(),
            nu: nu.0.clone(),
        }),
        Command::LpFeasible { file } => Job::LpFeasible(LpFeasibleJob { lp: None, path: Some(file.clone()) }),
        Command::Sample { spec, seed } => Job::Sample(SampleJob { spec: read_json(spec)?, seed: *seed }),
        Command::Batch { .. } => unreachable!("batch is handled separately"),
    })
}

fn write_dump(spec: &BipartiteSpec, sigma: &WeightInput, out: &PathBuf, ctx: &Context) -> Result<(), String> {
    let ext = build_flag_extension(spec);
    let prog = (|| {
        let sigma = sigma.resolve(&ext)?;
        let w = ExtendedWeight::new(&ext, &sigma)?;
        momentconekit::glued::build_glued_program(&w.k_input(&ext)?)
    })()
    .map_err(|e| e.to_string())?;
    let dump = prog.dump(ctx.budget as usize).map_err(|e| e.to_string())?;
    let text = serde_json::to_string(&dump).expect("dump serializes");
    std::fs::write(out, text).map_err(|e| format!("{}: {e}", out.display()))
}

fn print(result: &serde_json::Value, format: Format) {
    match format {
        Format::Json => println!("{result}"),
        Format::Plain => println!("{}", render_plain(result)),
    }
}

/// Entry point shared by all binaries; `fixed` names the subcommand of a
/// single-purpose binary. Returns the process exit code.
pub fn main_with(fixed: Option<&str>) -> i32 {
    let mut args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    if let Some(name) = fixed {
        args.insert(1, name.into());
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_POSITIVE };
            let _ = e.print();
            return code;
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> i32 {
    let config_budget = match cli.config.clone().or_else(default_config_path) {
        Some(path) => match budget_from_config(&path) {
            Ok(b) => b,
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_INPUT;
            }
        },
        None => None,
    };
    let ctx = Context { budget: cli.budget.or(config_budget).unwrap_or(DEFAULT_BUDGET) };
    if let Command::Batch { file, jobs } = &cli.command {
        let text = match read_file(file) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
        };
        let (lines, exit) = run_batch(&text, &ctx, *jobs);
        for line in lines {
            match cli.format {
                Format::Json => println!("{line}"),
                Format::Plain => {
                    let v: serde_json::Value = serde_json::from_str(&line).expect("own output parses");
                    println!("{}: {}", v["index"], render_plain(&v["result"]));
                }
            }
        }
        return exit;
    }
    let outcome = match job_for(&cli.command, &ctx) {
        Ok(job) => run(&job, &ctx),
        Err(msg) => Outcome::error(EXIT_INPUT, msg),
    };
    if outcome.exit >= EXIT_INPUT {
        if let Some(msg) = outcome.result.get("error").and_then(|v| v.as_str()) {
            eprintln!("error: {msg}");
        }
    }
    print(&outcome.result, cli.format);
    outcome.exit
}
