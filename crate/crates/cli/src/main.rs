use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use colsched::exact::{solve_exact, SolveOptions, DEFAULT_MAX_TASKS};
use colsched::experiments::{
    self, AxiomAuditConfig, BenchConfig, CompareConfig, ExperimentReport, LmtEvalConfig, LrmAuditConfig,
    Reduction, UniquenessConfig,
};
use colsched::generators::{generate, GenSpec, Model};
use colsched::heuristics;
use colsched::io::InstanceFile;
use colsched::metrics;
use colsched::{Error, Instance, Objective, Rule, Schedule};

#[derive(Parser)]
#[command(name = "colsched", version, about = "Collective schedules: exact rules, heuristics and experiments")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout. Experiments also write a
    /// JSON twin next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Lengths {
    #[arg(long, default_value_t = 1)]
    len_min: u64,
    #[arg(long, default_value_t = 10)]
    len_max: u64,
}

impl Lengths {
    fn range(&self) -> (u64, u64) {
        (self.len_min, self.len_max)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long, default_value = "uniform")]
        model: Model,
        #[arg(long)]
        tasks: usize,
        #[arg(long)]
        voters: u64,
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Compute a collective schedule.
    Solve {
        /// sum-dev, sum-tard, pta-kemeny, lmt or lmt-ls.
        #[arg(long)]
        rule: Rule,
        #[arg(long)]
        input: PathBuf,
        /// List every optimal schedule (exact rules only).
        #[arg(long)]
        all_optima: bool,
        #[arg(long, default_value_t = 1000)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_TASKS)]
        max_tasks: usize,
    },
    /// Score a schedule under every objective.
    Score {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated task ids, first task first.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<String>,
    },
    /// Cross-rule ratio table.
    Compare {
        #[arg(long, value_delimiter = ',', default_value = "u,c")]
        models: Vec<Model>,
        #[arg(long, value_delimiter = ',', default_value = "5,10")]
        tasks: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        voters: u64,
        #[arg(long, default_value_t = 300)]
        instances: usize,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Deviation of LMT, with and without local search, against the optimum.
    LmtEval {
        #[arg(long, default_value = "uniform")]
        model: Model,
        #[arg(long, default_value_t = 10)]
        tasks: usize,
        #[arg(long, default_value_t = 100)]
        voters: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Length reduction monotonicity audit.
    LrmAudit {
        #[arg(long, value_delimiter = ',', default_value = "u,c")]
        models: Vec<Model>,
        #[arg(long, default_value_t = 8)]
        tasks: usize,
        #[arg(long, default_value_t = 50)]
        voters: u64,
        #[arg(long, default_value_t = 1200)]
        instances: usize,
        /// uniform-smaller or by-one.
        #[arg(long, default_value = "uniform-smaller")]
        reduction: Reduction,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Fraction of instances with a unique optimum.
    UniquenessAudit {
        #[arg(long, value_delimiter = ',', default_value = "u")]
        models: Vec<Model>,
        #[arg(long, default_value_t = 8)]
        tasks: usize,
        #[arg(long, value_delimiter = ',', default_value = "100,250")]
        voters: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// PTA Condorcet consistency and unanimity of every rule.
    AuditAxioms {
        #[arg(long, value_delimiter = ',', default_value = "u,c")]
        models: Vec<Model>,
        #[arg(long, default_value_t = 6)]
        tasks: usize,
        #[arg(long, default_value_t = 50)]
        voters: u64,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Exact solver timings.
    Bench {
        #[arg(long, default_value = "uniform")]
        model: Model,
        #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
        tasks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "50")]
        voters: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn load(path: &Path) -> Result<Instance> {
    let file = InstanceFile::read(path)?;
    Ok(file.to_instance()?)
}

fn names(inst: &Instance, s: &Schedule) -> Vec<String> {
    s.ids(inst.tasks()).into_iter().map(String::from).collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(out: Option<&Path>, report: &ExperimentReport, format: Format) -> Result<()> {
    match (out, format) {
        (Some(path), _) => {
            emit(Some(path), &report.to_csv()?)?;
            emit(Some(&path.with_extension("json")), &report.to_json())
        }
        (None, Format::Csv) => emit(None, &report.to_csv()?),
        (None, Format::Json) => emit(None, &(report.to_json() + "\n")),
    }
}

fn solve(inst: &Instance, rule: Rule, all_optima: bool, cap: usize, max_tasks: usize) -> Result<Value> {
    let objective = rule.objective();
    let mut out = json!({ "rule": rule.name(), "objective": objective.name() });
    match rule {
        Rule::Exact(o) => {
            let opts = SolveOptions {
                enumerate_all: all_optima,
                optimum_cap: cap,
                max_tasks,
                ..SolveOptions::default()
            };
            let r = solve_exact(inst, o, &opts)?;
            out["schedule"] = json!(names(inst, &r.schedule));
            out["score"] = json!(r.optimal_score);
            out["optimum_count"] = json!(r.optimum_count);
            if let Some(optima) = &r.optima {
                out["optima"] = json!(optima.iter().map(|s| names(inst, s)).collect::<Vec<_>>());
                out["optima_complete"] = json!(r.optima_complete);
            }
            out["states_explored"] = json!(r.states_explored);
            out["wall_time_ms"] = json!(r.wall_time.as_secs_f64() * 1e3);
        }
        Rule::Lmt | Rule::LmtLocalSearch => {
            let start = std::time::Instant::now();
            let s = heuristics::lmt(inst);
            let s = if rule == Rule::LmtLocalSearch {
                let (s, trace) =
                    heuristics::local_search(inst, &s, objective, heuristics::default_step_cap(inst))?;
                out["local_search"] = json!(trace);
                s
            } else {
                s
            };
            out["wall_time_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
            out["score"] = json!(metrics::score(objective, inst, &s)?);
            out["schedule"] = json!(names(inst, &s));
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    let seed = cli.seed;
    match cli.command {
        Command::Gen { model, tasks, voters, lengths } => {
            let spec = GenSpec::new(tasks, voters, model, seed).with_lengths(lengths.len_min, lengths.len_max);
            let (t, p) = generate(&spec)?;
            emit(out, &(InstanceFile::from_parts(&t, &p).to_json() + "\n"))
        }
        Command::Solve { rule, input, all_optima, cap, max_tasks } => {
            let inst = load(&input)?;
            let report = solve(&inst, rule, all_optima, cap, max_tasks)?;
            emit(out, &(serde_json::to_string_pretty(&report)? + "\n"))
        }
        Command::Score { input, schedule } => {
            let inst = load(&input)?;
            let s = Schedule::from_ids(inst.tasks(), &schedule)?;
            let mut report = json!({ "schedule": names(&inst, &s) });
            for o in Objective::ALL {
                report[o.name()] = json!(metrics::score(o, &inst, &s)?);
            }
            emit(out, &(serde_json::to_string_pretty(&report)? + "\n"))
        }
        Command::Compare { models, tasks, voters, instances, lengths, format } => {
            let cfg = CompareConfig {
                models,
                task_counts: tasks,
                voters,
                instances,
                seed,
                length_range: lengths.range(),
            };
            emit_report(out, &experiments::compare(&cfg)?, format)
        }
        Command::LmtEval { model, tasks, voters, instances, lengths, format } => {
            let cfg = LmtEvalConfig {
                model,
                n: tasks,
                voters,
                instances,
                seed,
                length_range: lengths.range(),
            };
            emit_report(out, &experiments::lmt_eval(&cfg)?, format)
        }
        Command::LrmAudit { models, tasks, voters, instances, reduction, lengths, format } => {
            let cfg = LrmAuditConfig {
                models,
                n: tasks,
                voters,
                instances,
                seed,
                length_range: lengths.range(),
                reduction,
                ..LrmAuditConfig::default()
            };
            emit_report(out, &experiments::lrm_audit(&cfg)?, format)
        }
        Command::UniquenessAudit { models, tasks, voters, instances, lengths, format } => {
            let cfg = UniquenessConfig {
                models,
                n: tasks,
                voter_counts: voters,
                instances,
                seed,
                length_range: lengths.range(),
            };
            emit_report(out, &experiments::uniqueness_audit(&cfg)?, format)
        }
        Command::AuditAxioms { models, tasks, voters, instances, lengths, format } => {
            let cfg = AxiomAuditConfig {
                models,
                n: tasks,
                voters,
                instances,
                seed,
                length_range: lengths.range(),
            };
            emit_report(out, &experiments::audit_axioms(&cfg)?, format)
        }
        Command::Bench { model, tasks, voters, instances, lengths, format } => {
            eprintln!(
                "bench: {} {} with {} threads available",
                std::env::consts::OS,
                std::env::consts::ARCH,
                std::thread::available_parallelism().map_or(1, |n| n.get())
            );
            let cfg = BenchConfig {
                model,
                task_counts: tasks,
                voter_counts: voters,
                instances,
                seed,
                length_range: lengths.range(),
            };
            emit_report(out, &experiments::bench(&cfg)?, format)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::TooManyTasks { .. }) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
