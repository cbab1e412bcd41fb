//! Command-line front end for the slit/tent domain pipeline.
//!
//! Subcommands: `gen` (domain document + SVG), `analyze` (modulus table,
//! validity verdict, membership reduction), `conformal` (disk map, covers,
//! strong-evaluation transcript, theorem checks), `enum` (rectangle
//! enumeration prefixes), `check` (named pipeline checks).
//!
//! Exit codes: 0 success, 1 validation failure, 2 solver failure, 3 usage.
//! Every error path prints a single `error: <kind>: <reason>` line.

use clap::{Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use slitmap::conformal::checks::{
    certified_crosscut, check_recognizably_bounds, witness_bound_check, WitnessParams,
};
use slitmap::conformal::cover::{strong_eval, CoverFamily};
use slitmap::conformal::ConformalMap;
use slitmap::connectivity::{mlc_table, turing_reduce_all, validate_bcf};
use slitmap::domain::DomainModel;
use slitmap::effective::{enum_closed_x, enum_open_d};
use slitmap::geom::{rat, QRect, RectKind};
use slitmap::staged::StagedSet;
use slitmap::verify;

#[derive(Parser)]
#[command(
    name = "slitmap",
    version,
    about = "Slit/tent domains and their disk maps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a domain from a stage table and emit its document and an SVG.
    Gen {
        /// Stage-table JSON file; omitted means the empty table (all spikes).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Truncation depth J (number of slots), at least 1.
        #[arg(long)]
        depth: u32,
        /// Output directory; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Modulus-of-local-connectivity table, validity verdict, and reduction.
    Analyze {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        depth: u32,
        /// User-supplied modulus table (comma-separated) to validate instead.
        #[arg(long)]
        bcf: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the disk map; emit state, covers, transcript, and checks.
    Conformal {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        depth: u32,
        /// Largest oscillation-cover exponent.
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Requested map accuracy.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump prefixes of the interior/boundary rectangle enumerations.
    Enum {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        depth: u32,
        /// Rectangles to emit from each stream.
        #[arg(long, default_value_t = 24)]
        count: usize,
    },
    /// Run one named pipeline check, or all of them.
    Check {
        /// Check name; omitted runs the full registry.
        name: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
    Validation(String),
    Solver(String),
}

impl CliError {
    fn report(&self) -> ExitCode {
        let (kind, msg, code) = match self {
            CliError::Validation(m) => ("validation", m, 1),
            CliError::Solver(m) => ("solver", m, 2),
            CliError::Usage(m) => ("usage", m, 3),
        };
        eprintln!("error: {kind}: {}", msg.replace('\n', " "));
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Gen { table, depth, out } => cmd_gen(table.as_deref(), depth, out.as_deref()),
        Cmd::Analyze {
            table,
            depth,
            bcf,
            out,
        } => cmd_analyze(table.as_deref(), depth, bcf.as_deref(), out.as_deref()),
        Cmd::Conformal {
            table,
            depth,
            kmax,
            eps,
            seed,
            out,
        } => cmd_conformal(table.as_deref(), depth, kmax, eps, seed, out.as_deref()),
        Cmd::Enum {
            table,
            depth,
            count,
        } => cmd_enum(table.as_deref(), depth, count),
        Cmd::Check { name, seed } => cmd_check(name.as_deref(), seed),
    }
}

/// Loads the stage table, defaulting to an empty (all-spike) table wide
/// enough for `depth`.
fn load_table(path: Option<&Path>, depth: u32) -> Result<StagedSet, CliError> {
    if depth == 0 {
        return Err(CliError::Usage("depth must be at least 1".into()));
    }
    match path {
        None => Ok(StagedSet::empty(depth.saturating_sub(1), 12)),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
            StagedSet::from_json(&text)
                .map_err(|e| CliError::Validation(format!("bad stage table: {e}")))
        }
    }
}

fn build_domain(table: Option<&Path>, depth: u32) -> Result<DomainModel, CliError> {
    let staged = load_table(table, depth)?;
    DomainModel::build(&staged, depth).map_err(|e| CliError::Validation(e.to_string()))
}

fn write_artifact(out: Option<&Path>, name: &str, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            println!("# {name}");
            println!("{content}");
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(name);
            std::fs::write(&path, content)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn cmd_gen(table: Option<&Path>, depth: u32, out: Option<&Path>) -> Result<(), CliError> {
    let dm = build_domain(table, depth)?;
    write_artifact(out, "domain.json", &dm.to_json())?;
    write_artifact(out, "domain.svg", &dm.to_svg(512, 512))?;
    Ok(())
}

fn parse_bcf(text: &str) -> Result<Vec<u32>, CliError> {
    let g: Result<Vec<u32>, _> = text.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let g = g.map_err(|e| CliError::Usage(format!("bad modulus table: {e}")))?;
    if g.is_empty() {
        return Err(CliError::Usage("modulus table is empty".into()));
    }
    if g.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Validation(
            "modulus table must be non-decreasing".into(),
        ));
    }
    Ok(g)
}

fn cmd_analyze(
    table: Option<&Path>,
    depth: u32,
    bcf: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let staged = load_table(table, depth)?;
    let dm = DomainModel::build(&staged, depth).map_err(|e| CliError::Validation(e.to_string()))?;
    let mut report = String::new();
    let g = match bcf {
        Some(text) => {
            let g = parse_bcf(text)?;
            writeln!(report, "modulus table (user): {g:?}").unwrap();
            g
        }
        None => {
            let g = mlc_table(&dm, depth as usize + 3);
            writeln!(report, "modulus table (computed): {g:?}").unwrap();
            g
        }
    };
    match validate_bcf(&dm, &g) {
        Ok(()) => writeln!(report, "validity: ok").unwrap(),
        Err(ce) => {
            writeln!(
                report,
                "validity: counterexample at k={} pair ({}, {}) dist^2={} arc^2={}",
                ce.k, ce.p, ce.q, ce.dist_sq, ce.arc_sq
            )
            .unwrap();
            write_artifact(out, "analyze.txt", &report)?;
            return Err(CliError::Validation(format!(
                "modulus table fails at k={}",
                ce.k
            )));
        }
    }
    let decoded =
        turing_reduce_all(&staged, &g, depth).map_err(|e| CliError::Validation(e.to_string()))?;
    let truth: Vec<bool> = (0..depth).map(|n| staged.stage_of(n).is_some()).collect();
    for n in 0..depth as usize {
        writeln!(
            report,
            "slot {n}: decoded={} ground-truth={}",
            decoded[n], truth[n]
        )
        .unwrap();
    }
    let agree = decoded == truth;
    writeln!(report, "reduction agreement: {agree}").unwrap();
    write_artifact(out, "analyze.txt", &report)?;
    if agree {
        Ok(())
    } else {
        Err(CliError::Validation(
            "reduction disagrees with the table".into(),
        ))
    }
}

fn fmt_rect(r: &QRect) -> String {
    format!("[{}, {}] x [{}, {}]", r.x_lo, r.x_hi, r.y_lo, r.y_hi)
}

fn cmd_conformal(
    table: Option<&Path>,
    depth: u32,
    kmax: u32,
    eps: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if !(eps > 0.0) || eps < 1e-10 {
        return Err(CliError::Usage("eps must lie in [1e-10, inf)".into()));
    }
    let dm = build_domain(table, depth)?;
    let cm = ConformalMap::solve(&dm, eps).map_err(|e| CliError::Solver(e.to_string()))?;
    write_artifact(
        out,
        "map.json",
        &serde_json::to_string_pretty(&cm.to_document()).expect("map state"),
    )?;

    let fam = CoverFamily::build(&cm, kmax).map_err(|e| CliError::Solver(e.to_string()))?;
    let mut covers = String::new();
    for (k, rects) in &fam.covers {
        writeln!(covers, "k={k} elements={}", rects.len()).unwrap();
        for r in rects {
            writeln!(covers, "  {}", fmt_rect(r)).unwrap();
        }
    }
    write_artifact(out, "covers.txt", &covers)?;

    // Strong-evaluation transcript over seeded demo rectangles.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transcript = String::new();
    for i in 0..8 {
        let den = 1i64 << rng.gen_range(6..=10);
        let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let cx = (ang.cos() * den as f64) as i64;
        let cy = (ang.sin() * den as f64) as i64;
        let w = rng.gen_range(1..=den / 16);
        let r = match QRect::new(
            rat(cx - w, den),
            rat(cx + w, den),
            rat(cy - w, den),
            rat(cy + w, den),
            RectKind::Open,
        ) {
            Ok(r) => r,
            Err(_) => continue,
        };
        match strong_eval(&cm, &fam, &r) {
            Some(img) => writeln!(
                transcript,
                "query {i}: {} -> {}",
                fmt_rect(&r),
                fmt_rect(&img)
            )
            .unwrap(),
            None => writeln!(transcript, "query {i}: {} -> declined", fmt_rect(&r)).unwrap(),
        }
    }
    write_artifact(out, "strong_eval.txt", &transcript)?;

    // Theorem-check reports on two witness configurations.
    let mut checks = String::new();
    for turns in [rat(1, 8), rat(3, 8)] {
        let wp = WitnessParams::new(rat(1, 4), rat(1, 16), turns.clone());
        writeln!(checks, "witness at {} turns:", turns).unwrap();
        match certified_crosscut(&cm, &dm, &wp, 65) {
            Ok(cut) => {
                let rec = check_recognizably_bounds(&cm, &cut, &wp);
                for c in &rec.clauses {
                    writeln!(
                        checks,
                        "  {}: {:?} (margin {:.3e})",
                        c.name, c.verdict, c.margin
                    )
                    .unwrap();
                }
                let wb = witness_bound_check(&cm, &cut, &wp, 200, seed);
                writeln!(
                    checks,
                    "  diameter-bound: {:?} over {} pairs (worst slack {:.3e})",
                    wb.verdict, wb.pairs, wb.worst_slack
                )
                .unwrap();
            }
            Err(e) => writeln!(checks, "  crosscut generator: inconclusive ({e})").unwrap(),
        }
    }
    write_artifact(out, "checks.txt", &checks)?;
    Ok(())
}

fn cmd_enum(table: Option<&Path>, depth: u32, count: usize) -> Result<(), CliError> {
    let dm = build_domain(table, depth)?;
    println!("closed rectangles inside D:");
    for (level, r) in enum_open_d(&dm).take(count) {
        println!("  level {level}: {}", fmt_rect(&r));
    }
    println!("open rectangles meeting X:");
    for (level, r) in enum_closed_x(&dm).take(count) {
        println!("  level {level}: {}", fmt_rect(&r));
    }
    Ok(())
}

fn cmd_check(name: Option<&str>, seed: u64) -> Result<(), CliError> {
    let outcomes = match name {
        Some(n) => match verify::run_check(n, seed) {
            Some(o) => vec![o],
            None => {
                let known: Vec<&str> = verify::registry().iter().map(|(n, _)| *n).collect();
                return Err(CliError::Usage(format!(
                    "unknown check {n:?}; known: {}",
                    known.join(", ")
                )));
            }
        },
        None => verify::run_all(seed),
    };
    let mut failed = 0usize;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} ({:.1}s): {}", o.name, o.seconds, o.details);
        if !o.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{failed} check(s) failed")))
    }
}
