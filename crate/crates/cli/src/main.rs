use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bellsteer::harness::families::{sweep_family, werner_thresholds, Family};
use bellsteer::harness::io::{
    parse_points, parse_reals, report_json, write_regions_csv, write_samples_csv, write_sweep_csv,
};
use bellsteer::harness::regions::{region_slice, Axis};
use bellsteer::harness::report::{report, SampleRecord, SteeringReport};
use bellsteer::harness::sampling::sample_states_vec;
use bellsteer::harness::verify_inequalities;
use bellsteer::weiszfeld::fermat_toricelli;
use bellsteer::BellDiagonalState;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

/// Steerability of Bell-diagonal two-qubit states.
#[derive(Parser)]
#[command(name = "bellsteer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every measure for one state.
    Analyze(AnalyzeArgs),
    /// Tabulate a one-parameter family.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw uniformly distributed states and write their reports.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the measure inequalities on random states.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        /// Also fail when a family saturation check fails.
        #[arg(long)]
        strict: bool,
    },
    /// Classify an axis-aligned slice of the tetrahedron.
    Regions {
        #[arg(long)]
        axis: Axis,
        #[arg(long, allow_hyphen_values = true)]
        value: f64,
        #[arg(long)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bisect the class transitions along a family.
    Thresholds {
        #[arg(long)]
        family: Family,
    },
    /// Fermat-Toricelli point of four 3-vectors read from a file.
    Ft {
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StateSpec {
    /// Correlation triple `t1,t2,t3`.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Bell weights `p00,p01,p10,p11`.
    #[arg(long)]
    probs: Option<String>,
    #[arg(long)]
    werner: Option<f64>,
    #[arg(long)]
    edge: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    state: StateSpec,
    /// Run the restarted search for the three-measurement value.
    #[arg(long)]
    s3_estimate: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn build_state(spec: &StateSpec) -> Result<BellDiagonalState> {
    let state = if let Some(t) = &spec.t {
        let v = parse_reals(t, 3)?;
        BellDiagonalState::from_t(v[0], v[1], v[2])?
    } else if let Some(p) = &spec.probs {
        let v = parse_reals(p, 4)?;
        BellDiagonalState::from_probabilities(v[0], v[1], v[2], v[3])?
    } else if let Some(f) = spec.werner {
        BellDiagonalState::werner(f)?
    } else if let Some(p) = spec.edge {
        BellDiagonalState::edge(p)?
    } else {
        unreachable!("clap requires one state flag")
    };
    Ok(state)
}

fn print_report(r: &SteeringReport) {
    let [t1, t2, t3] = r.t;
    let [p00, p01, p10, p11] = r.probabilities;
    println!("t       = ({t1}, {t2}, {t3})");
    println!("p       = ({p00}, {p01}, {p10}, {p11})");
    println!("C       = {}", r.concurrence);
    println!("S       = {}", r.s);
    println!("chsh    = {}", r.chsh);
    println!("normS   = {}", r.normalized_s);
    println!("V       = {}", r.volume);
    println!("|T|_F   = {}", r.frobenius);
    println!("S3 >=   {}", r.s3_lower);
    if let Some(e) = r.s3_estimate {
        println!("S3 est  = {e}");
    }
    println!("class   = {}", r.class);
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(args) => {
            let state = build_state(&args.state)?;
            let r = report(&state, args.s3_estimate, args.seed)?;
            if args.json {
                println!("{}", report_json(&r)?);
            } else {
                print_report(&r);
            }
        }
        Command::Sweep {
            family,
            from,
            to,
            step,
            out,
        } => {
            let rows = sweep_family(family, from, to, step)?;
            write_sweep_csv(create(&out)?, &rows)?;
        }
        Command::Sample { n, seed, out } => {
            anyhow::ensure!(n >= 1, "--n must be at least 1");
            let records = sample_states_vec(n, seed)
                .par_iter()
                .enumerate()
                .map(|(i, s)| {
                    Ok(SampleRecord {
                        index: i as u64,
                        report: report(s, false, seed)?,
                    })
                })
                .collect::<bellsteer::Result<Vec<_>>>()?;
            write_samples_csv(create(&out)?, &records)?;
        }
        Command::Verify { n, seed, strict } => {
            anyhow::ensure!(n >= 1, "--n must be at least 1");
            let rep = verify_inequalities(n, seed);
            let mut out = std::io::stdout().lock();
            for b in rep.bounds.iter().chain(&rep.derived) {
                let status = if b.violated() { "VIOLATED" } else { "ok" };
                match (b.max_slack, b.worst_t) {
                    (Some(slack), Some(t)) => writeln!(
                        out,
                        "{status:<8} {:<36} samples {:>8}  max slack {slack:+.3e}  worst #{} t = {t:?}",
                        b.name,
                        b.samples,
                        b.worst_index.unwrap_or_default()
                    )?,
                    _ => writeln!(out, "{status:<8} {:<36} samples {:>8}", b.name, b.samples)?,
                }
            }
            for c in &rep.saturation {
                let status = if c.passed { "ok" } else { "UNSAT" };
                writeln!(out, "{status:<8} {} saturates {:<28} max gap {:.3e}", c.family, c.bound, c.max_gap)?;
            }
            let violations = rep.violations().count();
            let unsaturated = rep.saturation_failures().count();
            writeln!(out, "{violations} violations, {unsaturated} saturation failures")?;
            if violations > 0 || (strict && unsaturated > 0) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Regions { axis, value, res, out } => {
            let slice = region_slice(axis, value, res)?;
            write_regions_csv(create(&out)?, &slice)?;
        }
        Command::Thresholds { family } => {
            anyhow::ensure!(family == Family::Werner, "thresholds are only defined for the werner family");
            let t = werner_thresholds();
            println!("entangled  f > {:.12}", t.entangled);
            println!("certified3 f > {:.12}", t.certified3);
            println!("steerable2 f > {:.12}", t.steerable2);
        }
        Command::Ft { points } => {
            let text =
                std::fs::read_to_string(&points).with_context(|| format!("cannot read {}", points.display()))?;
            let sol = fermat_toricelli(&parse_points(&text)?);
            println!("ft = {} {} {}", sol.ft.x, sol.ft.y, sol.ft.z);
            println!("total_distance = {}", sol.total_distance);
            if !sol.converged {
                eprintln!("warning: iteration cap reached after {} iterations", sol.iterations);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
