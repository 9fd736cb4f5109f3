//! `revq` command-line front end.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use revq::adder::{build_adder, identity_fixtures, AdderConfig, Structure};
use revq::circuit::Circuit;
use revq::io::{export_qasm3, serialize};
use revq::ladder::{build_l1_linear, build_l1_log, build_l2_carry_log, build_l2_linear, build_l2_polylog, LadderImpl};
use revq::report::{build_rows, write_csv};
use revq::sim::{CheckMode, SimError, EXHAUSTIVE_WIRE_CAP};

#[derive(Parser)]
#[command(name = "revq", version, about = "Ladder-based reversible adder synthesis and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit and write it as revq text or OpenQASM 3.
    Synth {
        #[arg(long, value_enum, default_value_t = Kind::Adder)]
        kind: Kind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1 << 20))]
        n: u64,
        #[arg(long, default_value = "optimized")]
        structure: Structure,
        #[arg(long, default_value = "carrylog")]
        ladder: LadderImpl,
        #[arg(long, value_enum, default_value_t = Format::Revq)]
        format: Format,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an adder against the addition oracle and print a JSON verdict.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1 << 20))]
        n: u64,
        #[arg(long, default_value = "optimized")]
        structure: Structure,
        #[arg(long, default_value = "carrylog")]
        ladder: LadderImpl,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit the resource table for every configuration over a width range.
    Report {
        /// Inclusive range `LO..HI` with `LO >= 2`.
        #[arg(long, value_parser = parse_range)]
        n_range: (usize, usize),
        /// Output path; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the rewrite identities by exhaustive truth tables.
    Identities,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Adder,
    #[value(name = "l2-linear")]
    L2Linear,
    #[value(name = "l2-polylog")]
    L2Polylog,
    #[value(name = "l2-carrylog")]
    L2Carrylog,
    #[value(name = "l1-log")]
    L1Log,
    #[value(name = "l1-linear")]
    L1Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Revq,
    Qasm3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo < 2 {
        return Err(format!("lower bound must be at least 2, got {lo}"));
    }
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct VerifyOutput {
    config: String,
    n: usize,
    mode: &'static str,
    seed: Option<u64>,
    cases_checked: u64,
    equivalent: bool,
    counterexample: Option<String>,
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn synth_circuit(kind: Kind, n: usize, structure: Structure, ladder: LadderImpl) -> Result<(Circuit, String), String> {
    let built = match kind {
        Kind::Adder => {
            let cfg = AdderConfig::new(n, structure, ladder);
            let adder = build_adder(cfg).map_err(|e| e.to_string())?;
            return Ok((adder.circuit, format!("config: {} n={n}", cfg.descriptor())));
        }
        Kind::L2Linear => build_l2_linear(n),
        Kind::L2Polylog => build_l2_polylog(n),
        Kind::L2Carrylog => build_l2_carry_log(n).map_err(|e| e.to_string())?,
        Kind::L1Log => build_l1_log(n),
        Kind::L1Linear => build_l1_linear(n),
    };
    let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    Ok((built, format!("config: {name} n={n}")))
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn io_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Synth { kind, n, structure, ladder, format, out } => {
            let (circuit, header) = match synth_circuit(kind, n as usize, structure, ladder) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let text = match format {
                Format::Revq => serialize(&circuit),
                Format::Qasm3 => export_qasm3(&circuit, &[header]),
            };
            match open_out(&out).and_then(|mut w| w.write_all(text.as_bytes()).and_then(|_| w.flush())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => io_error(e),
            }
        }
        Command::Verify { n, structure, ladder, mode, samples, seed } => {
            let cfg = AdderConfig::new(n as usize, structure, ladder);
            let adder = match build_adder(cfg) {
                Ok(a) => a,
                Err(e) => return usage_error(e),
            };
            let (check, mode_name) = match mode {
                Mode::Exhaustive => (CheckMode::Exhaustive, "exhaustive"),
                Mode::Random => (CheckMode::Random { samples, seed }, "random"),
            };
            let verdict = match adder.verify(check) {
                Ok(v) => v,
                Err(SimError::ExhaustiveCap(k)) => {
                    return usage_error(format!(
                        "exhaustive check over {k} free wires exceeds the cap of {EXHAUSTIVE_WIRE_CAP}; use --mode random"
                    ))
                }
                Err(e) => return usage_error(e),
            };
            let report = VerifyOutput {
                config: cfg.descriptor(),
                n: cfg.n,
                mode: mode_name,
                seed: verdict.seed,
                cases_checked: verdict.cases_checked,
                equivalent: verdict.equivalent,
                counterexample: verdict.counterexample.as_ref().map(|a| a.to_bitstring()),
            };
            println!("{}", serde_json::to_string(&report).expect("plain struct serializes"));
            if verdict.equivalent {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Report { n_range: (lo, hi), csv } => {
            let rows = match build_rows(lo, hi) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            let written = open_out(&csv)
                .map_err(|e| e.to_string())
                .and_then(|w| write_csv(w, &rows).map_err(|e| e.to_string()));
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => io_error(e),
            }
        }
        Command::Identities => {
            let fixtures = identity_fixtures();
            let mut passed = 0;
            for f in &fixtures {
                let v = f.check();
                if v.equivalent {
                    passed += 1;
                    println!("PASS {} ({} cases)", f.name, v.cases_checked);
                } else {
                    let cex = v.counterexample.as_ref().map(|a| a.to_bitstring()).unwrap_or_default();
                    println!("FAIL {} (counterexample {cex})", f.name);
                }
            }
            println!("{passed}/{} identities hold", fixtures.len());
            if passed == fixtures.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
