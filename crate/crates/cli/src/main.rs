use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use macc_core::analysis::{comparison_table, default_grid, parse_fraction};
use macc_core::engine::simulate_with;
use macc_core::topology::{canonical_topology, count_topologies, random_topology};
use macc_core::{BlockChoice, Design, MaccError, PayloadMode, SchemeParams, Topology};
use serde_json::json;

#[derive(Parser)]
#[command(name = "macc", version, about = "Multi-access coded caching with cross resolvable designs")]
struct Cli {
    /// Seed for every random choice (topology, placement, payload bytes).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a residue-matrix design and verify it exhaustively.
    Design {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 1)]
        mu: usize,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build or load a user-to-cache graph and check C1-C3.
    Topology {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        z: usize,
        /// `canonical`, `random`, or a path to a topology JSON file.
        #[arg(long, default_value = "canonical")]
        source: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run placement and delivery and decode every user.
    Simulate(SimulateArgs),
    /// Emit the rate / subpacketization comparison table.
    Compare {
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        z: usize,
        /// Comma-separated M/N values (`0.16`, `4/25`). Defaults to
        /// j/K for j = 0..=ceil(K/z); an empty string gives an empty table.
        #[arg(long)]
        grid: Option<String>,
        /// CSV destination; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional exact JSON mirror of the CSV.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Number of users; give it with one of --m / --b.
    #[arg(long = "K")]
    k: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long)]
    z: usize,
    #[arg(long)]
    t: usize,
    /// Library size N; defaults to K.
    #[arg(long)]
    files: Option<usize>,
    /// `canonical`, `random`, or a path to a topology JSON file.
    #[arg(long, default_value = "canonical")]
    topology: String,
    #[arg(long, value_enum, default_value_t = Choice::Deterministic)]
    placement: Choice,
    /// JSON array with the file each user asks for; defaults to user u -> file u.
    #[arg(long)]
    demands: Option<PathBuf>,
    /// Run the byte-level oracle with subfiles of this many bytes.
    #[arg(long, num_args = 0..=1, default_missing_value = "64")]
    payload: Option<usize>,
    /// Transmission log, one JSON object per line.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Simulation report JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Choice {
    Deterministic,
    Seeded,
}

/// Bad input from the command line; exits with 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<MaccError>() {
        Some(
            MaccError::InvalidArgument(_)
            | MaccError::ResourceLimit { .. }
            | MaccError::ShapeMismatch(_)
            | MaccError::NotApplicable(_)
            | MaccError::Json(_),
        ) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Design { m, b, mu, out } => cmd_design(m, b, mu, out.as_deref()),
        Command::Topology { shape, z, source, out } => {
            let (m, b) = shape.resolve()?;
            cmd_topology(m, b, z, &source, cli.seed, out.as_deref())
        }
        Command::Simulate(args) => cmd_simulate(&args, cli.seed),
        Command::Compare { k, z, grid, out, json } => {
            cmd_compare(k, z, grid.as_deref(), out.as_deref(), json.as_deref())
        }
    }
}

impl Shape {
    fn resolve(&self) -> Result<(usize, usize)> {
        let (m, b) = match (self.m, self.b, self.k) {
            (Some(m), Some(b), k) => {
                if let Some(k) = k.filter(|&k| k != m * b) {
                    return Err(usage(format!("--K {k} disagrees with --m {m} --b {b}")));
                }
                (m, b)
            }
            (Some(d), None, Some(k)) | (None, Some(d), Some(k)) if d == 0 || k % d != 0 => {
                return Err(usage(format!("{d} does not divide K = {k}")));
            }
            (Some(m), None, Some(k)) => (m, k / m),
            (None, Some(b), Some(k)) => (k / b, b),
            _ => return Err(usage("give --m and --b, or --K with one of them")),
        };
        if m == 0 || b == 0 {
            return Err(usage("m and b must be positive"));
        }
        Ok((m, b))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_design(m: usize, b: usize, mu: usize, out: Option<&Path>) -> Result<bool> {
    let design = Design::construct(m, b, mu)?;
    let report = design.verify();
    emit(out, &pretty(&json!({ "design": design, "verification": report }))?)?;
    Ok(report.pass)
}

fn load_topology(source: &str, m: usize, b: usize, z: usize, seed: u64) -> Result<Topology> {
    let topo = match source {
        "canonical" => canonical_topology(m, b, z)?,
        "random" => random_topology(m, b, z, seed)?,
        path => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}")))?;
            let topo: Topology = serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            if (topo.m(), topo.b(), topo.z()) != (m, b, z) {
                return Err(usage(format!(
                    "{path} has (m, b, z) = ({}, {}, {}), expected ({m}, {b}, {z})",
                    topo.m(),
                    topo.b(),
                    topo.z()
                )));
            }
            topo
        }
    };
    Ok(topo)
}

fn cmd_topology(m: usize, b: usize, z: usize, source: &str, seed: u64, out: Option<&Path>) -> Result<bool> {
    let topo = load_topology(source, m, b, z, seed)?;
    let report = topo.validate();
    let matchings = topo
        .extract_matchings()
        .ok()
        .map(|f| (1..=m).map(|g| f.group_map(g).to_vec()).collect::<Vec<_>>());
    let value = json!({
        "topology": topo,
        "validation": report,
        "matchings": matchings,
        "admissible_count": count_topologies(m, b, z)?.to_string(),
    });
    emit(out, &pretty(&value)?)?;
    Ok(report.pass)
}

fn load_demands(path: Option<&Path>, users: usize) -> Result<Vec<usize>> {
    let Some(path) = path else {
        return Ok((1..=users).collect());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_simulate(args: &SimulateArgs, seed: u64) -> Result<bool> {
    let (m, b) = args.shape.resolve()?;
    let users = m * b;
    let n_files = args.files.unwrap_or(users);
    let params = SchemeParams::new(m, b, args.z, args.t, n_files)?;
    let topo = load_topology(&args.topology, m, b, args.z, seed)?;
    let design = Design::construct(m, b, 1)?;
    let demands = load_demands(args.demands.as_deref(), users)?;
    let payload = match args.payload {
        Some(0) => return Err(usage("--payload must be positive")),
        Some(size) => PayloadMode::Seeded { seed, size },
        None => PayloadMode::None,
    };
    let choice = match args.placement {
        Choice::Deterministic => BlockChoice::Deterministic,
        Choice::Seeded => BlockChoice::Seeded(seed),
    };
    let sim = simulate_with(&design, &topo, &params, &demands, payload, choice, None)?;

    if let Some(path) = &args.log {
        let mut text = String::new();
        for tx in &sim.transmissions {
            text.push_str(&serde_json::to_string(tx)?);
            text.push('\n');
        }
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let r = &sim.report;
    if let Some(path) = &args.report {
        fs::write(path, serde_json::to_string_pretty(r)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let decoded = r.users.iter().filter(|u| u.complete).count();
    let mut summary = format!(
        "transmissions {}\nsubpacketization {}\nrate {}/{} (expected {}/{})\ndecoded {decoded}/{}\n",
        r.transmissions,
        r.subpacketization,
        r.rate.numer(),
        r.rate.denom(),
        r.expected_rate.numer(),
        r.expected_rate.denom(),
        r.users.len(),
    );
    if let Some(g) = r.coding_gain {
        summary.push_str(&format!("coding gain {g}\n"));
    }
    if let Some(bytes) = &r.byte_check {
        summary.push_str(&format!(
            "byte oracle {} ({} subfiles of {} bytes, {} mismatches)\n",
            if bytes.pass { "pass" } else { "FAIL" },
            bytes.decoded,
            bytes.size,
            bytes.mismatches
        ));
    }
    summary.push_str(if r.pass { "pass\n" } else { "FAIL\n" });
    emit(None, &summary)?;
    Ok(r.pass)
}

fn cmd_compare(k: usize, z: usize, grid: Option<&str>, out: Option<&Path>, json: Option<&Path>) -> Result<bool> {
    let grid = match grid {
        None => default_grid(k, z)?,
        Some(text) if text.trim().is_empty() => Vec::new(),
        Some(text) => text
            .split(',')
            .map(|s| parse_fraction(s).map_err(|e| usage(e.to_string())))
            .collect::<Result<_>>()?,
    };
    let table = comparison_table(k, z, &grid)?;
    emit(out, &table.to_csv())?;
    if let Some(path) = json {
        fs::write(path, pretty(&table.to_json())?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(true)
}
