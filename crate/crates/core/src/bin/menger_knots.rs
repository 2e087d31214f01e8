//! Command-line front end: approximant statistics and mesh export, knot
//! validation and invariants, the containment pipeline, and certificate
//! verification.
//!
//! Exit codes: 0 success, 1 negative result (invalid knot, failed
//! verification), 2 usage/parse/resource errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use menger_knots::menger::{enumerate_retained, retained_per_level, retention_report};
use menger_knots::mesh::export_approximant_mesh;
use menger_knots::pipeline::LogEntry;
use menger_knots::{
    embed_in_menger, invariant_report, verify_certificate, CubicalKnot, Error,
    MengerCertificate, MengerParams, PipelineConfig,
};

/// Default cap on enumerated cells, overridable via MENGER_KNOTS_MAX_CELLS.
const DEFAULT_MAX_CELLS: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "menger-knots", version, about = "Menger approximants and cubical lattice knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximant queries
    #[command(subcommand)]
    Menger(MengerCmd),
    /// Knot file queries
    #[command(subcommand)]
    Knot(KnotCmd),
    /// Containment pipeline
    #[command(subcommand)]
    Pipeline(PipelineCmd),
    /// Certificate checks
    #[command(subcommand)]
    Cert(CertCmd),
}

#[derive(Args)]
struct ParamArgs {
    /// Ambient dimension m
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Skeleton dimension n (n < m)
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Subdivision depth k
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Subcommand)]
enum MengerCmd {
    /// Retained-cube counts and retention ratio for M^m_n at depth k
    Stats {
        #[command(flatten)]
        params: ParamArgs,
        /// Also enumerate the retained cubes and compare with the count
        #[arg(long)]
        check_enumeration: bool,
    },
    /// Write the boundary surface of the depth-k approximant (m = 3)
    ExportMesh {
        #[command(flatten)]
        params: ParamArgs,
        /// Output file
        #[arg(long = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum KnotCmd {
    /// Check closedness, unit steps, and self-avoidance
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Project along seeded random directions and count Fox p-colorings
    Invariants {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated odd primes
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        primes: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum PipelineCmd {
    /// Isotope a knot into the depth-k approximant M^3_1 and certify it
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        /// Target depth k
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Certificate output file (JSON)
        #[arg(long = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CertCmd {
    /// Re-check a certificate from scratch: hash, replay, witnesses, audit
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn max_cells() -> u64 {
    std::env::var("MENGER_KNOTS_MAX_CELLS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d),
        None => tempfile::NamedTempFile::new_in("."),
    }?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn read_knot(path: &Path) -> Result<CubicalKnot, Error> {
    let text = std::fs::read_to_string(path)?;
    CubicalKnot::from_file_str(&text)
}

/// Distinguishes "the check ran and said no" from "the run failed".
enum Outcome {
    Ok,
    Negative(String),
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Menger(MengerCmd::Stats { params, check_enumeration }) => {
            let p = MengerParams::new(params.m, params.n, params.k)?;
            let report = retention_report(&p);
            let total = &report.retained_count + &report.removed_count;
            println!("m={} n={} k={}", p.m, p.n, p.k);
            println!("retained per level:  {}", retained_per_level(p.m, p.n));
            println!("retained at depth k: {}", report.retained_count);
            println!("removed at depth k:  {}", report.removed_count);
            println!("total at depth k:    {total}");
            if check_enumeration {
                guard_cells(&report.retained_count)?;
                let counted = enumerate_retained(&p).count();
                if BigUint::from(counted) != report.retained_count {
                    return Ok(Outcome::Negative(format!(
                        "enumeration found {counted} cubes, closed form says {}",
                        report.retained_count
                    )));
                }
                println!("enumeration check:   ok ({counted} cubes)");
            }
            Ok(Outcome::Ok)
        }
        Command::Menger(MengerCmd::ExportMesh { params, out }) => {
            let p = MengerParams::new(params.m, params.n, params.k)?;
            let report = retention_report(&p);
            guard_cells(&report.retained_count)?;
            let mut buf = Vec::new();
            export_approximant_mesh(&p, &mut buf)?;
            write_atomic(&out, &buf)?;
            println!("wrote {}", out.display());
            Ok(Outcome::Ok)
        }
        Command::Knot(KnotCmd::Validate { input }) => {
            let knot = read_knot(&input)?;
            match knot.validate() {
                Ok(()) => {
                    println!(
                        "valid closed cubical knot: {} edges, scale exponent {}",
                        knot.vertices.len(),
                        knot.scale_exp
                    );
                    Ok(Outcome::Ok)
                }
                Err(v) => Ok(Outcome::Negative(v.to_string())),
            }
        }
        Command::Knot(KnotCmd::Invariants { input, seed, primes }) => {
            let knot = read_knot(&input)?.validated()?;
            let report = invariant_report(&knot, &primes, seed)?;
            for (p, count) in &report {
                println!("fox colorings p={p}: {count}");
            }
            Ok(Outcome::Ok)
        }
        Command::Pipeline(PipelineCmd::Run { input, depth, seed, out }) => {
            let knot = read_knot(&input)?.validated()?;
            let cfg = PipelineConfig { target_depth: depth, seed, ..PipelineConfig::default() };
            let cert = embed_in_menger(&knot, &cfg)?;
            let moves = cert
                .log
                .iter()
                .filter(|e| matches!(e, LogEntry::Move { .. }))
                .count();
            write_atomic(&out, cert.to_json().as_bytes())?;
            println!(
                "embedded at depth {depth}: {} moves, final knot {} edges, scale exponent {}",
                moves,
                cert.final_knot.vertices.len(),
                cert.final_knot.scale_exp
            );
            println!("wrote {}", out.display());
            Ok(Outcome::Ok)
        }
        Command::Cert(CertCmd::Verify { input }) => {
            let text = std::fs::read_to_string(&input)?;
            let cert = MengerCertificate::from_json(&text)?;
            match verify_certificate(&cert) {
                Ok(()) => {
                    println!(
                        "certificate ok: depth {}, {} log entries, {} witnesses",
                        cert.target_depth,
                        cert.log.len(),
                        cert.witnesses.len()
                    );
                    Ok(Outcome::Ok)
                }
                Err(Error::Certificate(msg)) => Ok(Outcome::Negative(msg)),
                Err(e) => Err(e),
            }
        }
    }
}

fn guard_cells(count: &BigUint) -> Result<(), Error> {
    if count > &BigUint::from(max_cells()) {
        return Err(Error::Resource(format!(
            "{count} cells exceeds the cap {} (set MENGER_KNOTS_MAX_CELLS to raise it)",
            max_cells()
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
