// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use nassc::bench::{run_bench, write_csv, BenchSpec};
use nassc::circuit::qasm::{parse_qasm, to_qasm};
use nassc::circuit::{equivalence_report, Circuit, Layouts};
use nassc::routing::{
    full_pipeline, Algorithm, DistanceKind, LayoutMethod, OptFlags, RouterConfig,
};
use nassc::topology::{load_coupling, NoiseProfile};

#[derive(Parser)]
#[command(name = "nassc", version, about = "Optimization-aware qubit routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route a QASM circuit onto a coupling map.
    Route(RouteArgs),
    /// Run a benchmark spec and write its CSV.
    Bench {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Check that a routed circuit implements the original.
    Verify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// JSON with `final` (and optionally `initial`) logical-to-physical placements.
        #[arg(long)]
        perm: PathBuf,
    },
}

#[derive(clap::Args)]
struct RouteArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Builtin name (`montreal`, `linear(n)`, `grid(r,c)`) or a coupling-map JSON file.
    #[arg(long)]
    coupling: String,
    #[arg(long, default_value = "nassc")]
    router: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    extended_size: usize,
    #[arg(long, default_value_t = 0.5)]
    extended_weight: f64,
    /// Comma-separated subset of `2q,commute1,commute2`.
    #[arg(long, value_delimiter = ',')]
    disable_opt: Vec<String>,
    /// Noise profile JSON; switches the router to noise-weighted distances.
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long, default_value = "sabre")]
    layout: LayoutMethod,
    #[arg(long, default_value_t = 3)]
    traversals: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    stats: Option<PathBuf>,
}

fn read_qasm(path: &PathBuf) -> Result<Circuit> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_qasm(&text).with_context(|| format!("parsing {}", path.display()))
}

fn opts(disabled: &[String]) -> Result<OptFlags> {
    let mut o = OptFlags::ALL;
    for d in disabled {
        match d.trim() {
            "2q" => o.b_2q = false,
            "commute1" => o.b_commute1 = false,
            "commute2" => o.b_commute2 = false,
            "" => {}
            other => bail!("unknown optimization {other:?}; expected 2q, commute1 or commute2"),
        }
    }
    Ok(o)
}

fn route(args: RouteArgs) -> Result<()> {
    let circuit = read_qasm(&args.input)?;
    let map = load_coupling(&args.coupling)?;
    let distance = match &args.noise {
        Some(p) => DistanceKind::Noise {
            profile: NoiseProfile::load(&p.display().to_string())?,
        },
        None => DistanceKind::Hops,
    };
    let cfg = RouterConfig {
        algorithm: args.router,
        extended_size: args.extended_size,
        extended_weight: args.extended_weight,
        opts: opts(&args.disable_opt)?,
        seed: args.seed,
        distance,
        traversals: args.traversals,
        layout: args.layout,
    };
    if cfg.extended_weight < 0.0 {
        bail!("--extended-weight must be non-negative");
    }
    let r = full_pipeline(&circuit, &map, &cfg)?;
    std::fs::write(&args.out, to_qasm(&r.circuit))
        .with_context(|| format!("writing {}", args.out.display()))?;
    let s = &r.stats;
    let json = serde_json::json!({
        "swaps_inserted": s.swaps_inserted,
        "cnot_add": s.cnot_add,
        "cnot_total": s.cnot_total,
        "cnot_total_orig": s.cnot_total_orig,
        "depth_total": s.depth_total,
        "depth_add": s.depth_add,
        "swaps_opt_by_2q": s.swaps_opt_by_2q,
        "swaps_opt_by_commute": s.swaps_opt_by_commute,
        "wall_time_s": s.wall_time_s,
        "final_mapping": r.final_mapping.log_to_phys(),
        "initial": r.initial_mapping.log_to_phys(),
        "final": r.final_mapping.log_to_phys(),
    });
    let text = serde_json::to_string_pretty(&json)?;
    match &args.stats {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn bench(spec: PathBuf) -> Result<()> {
    let spec = BenchSpec::load(&spec)?;
    let rows = run_bench(&spec)?;
    write_csv(&rows, &spec.output)?;
    for r in rows.iter().filter(|r| r.is_summary()) {
        if let Some(d) = r.delta_cnot_add {
            println!("{}: geomean delta CNOT_add {:.2}%", r.router, 100.0 * d);
        }
    }
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("{} / {}: {}", r.name, r.router, r.error.as_deref().unwrap_or_default());
    }
    println!("wrote {}", spec.output.display());
    Ok(())
}

fn verify(a: PathBuf, b: PathBuf, perm: PathBuf) -> Result<bool> {
    let (ca, cb) = (read_qasm(&a)?, read_qasm(&b)?);
    let text =
        std::fs::read_to_string(&perm).with_context(|| format!("reading {}", perm.display()))?;
    let layouts: Layouts = serde_json::from_str(&text)
        .with_context(|| format!("parsing placements in {}", perm.display()))?;
    let report = equivalence_report(&ca, &cb, &layouts)?;
    let ok = report.holds(1e-8);
    println!(
        "{}: max deviation {:.3e} over {} inputs",
        if ok { "equivalent" } else { "NOT equivalent" },
        report.max_deviation,
        report.inputs_checked
    );
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Route(args) => route(args).map(|_| true),
        Command::Bench { spec } => bench(spec).map(|_| true),
        Command::Verify { a, b, perm } => verify(a, b, perm),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
