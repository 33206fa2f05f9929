// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exactgeo::{Kernel, PerturbationSeed};
use exactgeo_cli::commands::{cmd_circles, cmd_delaunay, cmd_selftest, Options, PointMode, Report};
use exactgeo_cli::gen::ArcClass;

#[derive(Parser)]
#[command(name = "exactgeo", about = "Exact geometry benchmarks on the perturbation kernel")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    RandomNormal,
    Origin,
}

#[derive(Clone, Copy, ValueEnum)]
enum DegeneracyArg {
    Random,
    Near,
    Exact,
}

#[derive(clap::Args)]
struct Common {
    /// input size (largest value of the sweep)
    #[arg(long)]
    count: usize,
    /// start a geometric sweep at this size
    #[arg(long)]
    min_count: Option<usize>,
    /// seed of the input generator (independent of the perturbation seed)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// override the perturbation seed (hex, also: EXACTGEO_SEED)
    #[arg(long)]
    perturb_seed: Option<String>,
    /// evaluate both the interval filter and the exact path, asserting
    /// agreement (also: EXACTGEO_BOTH_PATHS=1)
    #[arg(long)]
    both_paths: bool,
    /// verify structural invariants of the result
    #[arg(long)]
    verify: bool,
    /// write the benchmark CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
    /// write the result (mesh or loops) here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Delaunay triangulation benchmark
    Delaunay {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::RandomNormal)]
        mode: ModeArg,
    },
    /// Circular-arc boolean union benchmark
    Circles {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DegeneracyArg::Random)]
        degeneracy: DegeneracyArg,
    },
    /// Deterministic property checks; byte-identical output across runs
    Selftest,
}

fn options_from(common: &Common) -> Result<Options, String> {
    let mut kernel = Kernel::from_env();
    if let Some(s) = &common.perturb_seed {
        let t = s.trim().trim_start_matches("0x");
        let v = u128::from_str_radix(t, 16).map_err(|_| "perturb seed must be hex".to_string())?;
        kernel.seed = PerturbationSeed(v);
    }
    kernel.both_paths |= common.both_paths;
    Ok(Options { kernel, seed: common.seed, verify: common.verify })
}

fn emit(report: &Report, common: Option<&Common>) -> Result<(), String> {
    for l in &report.lines {
        println!("{l}");
    }
    if let Some(common) = common {
        if let Some(path) = &common.csv {
            std::fs::write(path, &report.csv).map_err(|e| format!("writing csv: {e}"))?;
        }
        if let Some(path) = &common.out {
            std::fs::write(path, &report.payload).map_err(|e| format!("writing output: {e}"))?;
        }
    }
    Ok(())
}

fn run() -> Result<(), String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Delaunay { common, mode } => {
            let opts = options_from(&common)?;
            let mode = match mode {
                ModeArg::RandomNormal => PointMode::RandomNormal,
                ModeArg::Origin => PointMode::Origin,
            };
            let report = cmd_delaunay(common.count, common.min_count, mode, &opts)?;
            emit(&report, Some(&common))
        }
        Cmd::Circles { common, degeneracy } => {
            let opts = options_from(&common)?;
            let class = match degeneracy {
                DegeneracyArg::Random => ArcClass::Random,
                DegeneracyArg::Near => ArcClass::Near,
                DegeneracyArg::Exact => ArcClass::Exact,
            };
            let report = cmd_circles(common.count, common.min_count, class, &opts)?;
            emit(&report, Some(&common))
        }
        Cmd::Selftest => {
            let (report, failed) = cmd_selftest();
            emit(&report, None)?;
            if failed > 0 {
                return Err(format!("selftest failed {failed} checks"));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
