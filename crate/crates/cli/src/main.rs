use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mil_cli::recheck::recheck;
use mil_cli::scenarios::{run, Params, SCENARIOS};
use mil_core::families::{resolve, FAMILY_SPECS};

const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "mil", version, about = "Invariant rings of finite linear groups: differents, direct summands and coregularity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario, or `all`.
    Run {
        scenario: String,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        /// Largest polynomial degree examined.
        #[arg(long)]
        max_degree: Option<u32>,
        /// Largest graded piece, in monomials, handled by dense elimination.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scenarios run in parallel by `all`.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Re-verify every witness from the serialized report.
        #[arg(long)]
        recheck: bool,
        /// Record wall-clock time per scenario.
        #[arg(long)]
        timings: bool,
        /// Extra parameters as key=value (q, n, m, p, max-degree, budget, seed).
        #[arg(value_name = "KEY=VALUE")]
        extra: Vec<String>,
    },
    /// List the scenarios.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a group from a family spec such as `gu3:q=2:sub=Htilde`.
    Group {
        spec: String,
        /// Print generators, census and structural flags as JSON.
        #[arg(long)]
        describe: bool,
    },
}

fn apply_extra(params: &mut Params, extra: &[String]) -> Result<(), String> {
    for kv in extra {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected key=value, got {kv:?}"))?;
        let num = |v: &str| v.parse::<u64>().map_err(|_| format!("{k}: not a number: {v:?}"));
        match k {
            "q" => params.q = Some(num(v)? as u32),
            "n" => params.n = Some(num(v)? as u32),
            "m" => params.m = Some(num(v)? as u32),
            "p" => params.p = Some(num(v)? as u32),
            "max-degree" | "max_degree" => params.max_degree = Some(num(v)? as u32),
            "budget" => params.budget = Some(num(v)? as usize),
            "seed" => params.seed = num(v)?,
            _ => return Err(format!("unknown parameter {k:?}")),
        }
    }
    Ok(())
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("mil: {msg}");
    ExitCode::from(USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { scenario, q, n, m, p, max_degree, budget, seed, jobs, report, recheck: re, timings, extra } => {
            let mut params = Params { q, n, m, p, max_degree, budget, seed };
            if let Err(e) = apply_extra(&mut params, &extra) {
                return usage(e);
            }
            let mut out = match run(&scenario, &params, jobs, timings) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            if re {
                out = recheck(&out);
            }
            match report {
                Format::Text => print!("{}", out.to_text()),
                Format::Json => println!("{}", out.to_json()),
            }
            ExitCode::from(out.status.exit_code() as u8)
        }
        Command::List { format } => {
            match format {
                Format::Text => {
                    for s in SCENARIOS {
                        println!("{}\n    {}", s.name, s.anchor);
                        if !s.parameters.is_empty() {
                            println!("    parameters: {}", s.parameters);
                        }
                    }
                    println!("all\n    every scenario above, in name order");
                }
                Format::Json => {
                    let v: Vec<_> = SCENARIOS
                        .iter()
                        .map(|s| serde_json::json!({"name": s.name, "anchor": s.anchor, "parameters": s.parameters}))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
            }
            ExitCode::SUCCESS
        }
        Command::Group { spec, describe } => {
            let g = match resolve(&spec) {
                Ok(g) => g,
                Err(e) => return usage(format!("{e}\nknown families: {}", FAMILY_SPECS.iter().map(|(n, p)| format!("{n} ({p})")).collect::<Vec<_>>().join(", "))),
            };
            if describe {
                let c = g.census();
                let v = serde_json::json!({
                    "spec": spec,
                    "group": g.to_data(),
                    "census": c,
                    "abelian": g.is_abelian(),
                    "p_group": g.is_p_group(),
                    "nonmodular": g.is_nonmodular(),
                    "reflection_group": g.is_reflection_group(),
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("{}", g.order());
            }
            ExitCode::SUCCESS
        }
    }
}
