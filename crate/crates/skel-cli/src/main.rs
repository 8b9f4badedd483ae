//! `skel` — command-line interface for spherical skeleton invariants.
//!
//! Reads `.skel` files (see `docs/FORMAT.md`), validates them, and runs
//! the library operations: derived sets and class group, the Cox
//! transform, iota, the conjecture check, isomorphism, factorialization,
//! and batch reports over a corpus directory.
//!
//! Exit codes: 0 success (or "all conjectures hold" for batch), 1 parse
//! or validation failure, 2 a conjecture violation was found, 3 a
//! precondition failure (e.g. factorializing an incomplete skeleton).

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lunavust::cox::{class_group, cox_transform};
use lunavust::exact::format_rat;
use lunavust::fact::{factorialize, StepCase};
use lunavust::file::{parse_skeleton_file, SkeletonFile};
use lunavust::iota::{check_conjecture, iota, IotaReport, Verdict};
use lunavust::iso::are_isomorphic;
use lunavust::skel::{derived_sets, is_complete, is_factorial, SphericalSkeleton};
use lunavust::Error;
use report::Report;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Parser)]
#[command(name = "skel", about = "spherical skeleton invariants", version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Write the produced skeleton file here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reject conventions that are merely tolerated: invariant divisors
    /// must have multiplicity 1
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for batch processing (default: rayon's choice)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a skeleton file against the validation rules
    Validate { file: PathBuf },
    /// Print derived sets and the class group of the Cox spectrum
    Info { file: PathBuf },
    /// Compute the skeleton of the spectrum of the Cox ring
    Cox { file: PathBuf },
    /// Compute iota with its certificate
    Iota { file: PathBuf },
    /// Check the conjecture bound iota <= dim G/P
    Conjecture { file: PathBuf },
    /// Decide whether two skeletons are isomorphic
    Iso { file1: PathBuf, file2: PathBuf },
    /// Produce a factorial complete skeleton without decreasing iota
    Factorialize { file: PathBuf },
    /// Report on every .skel file in a directory
    Batch { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}

fn run(cli: &Cli) -> u8 {
    match &cli.command {
        Command::Validate { file } => cmd_validate(cli, file),
        Command::Info { file } => cmd_info(cli, file),
        Command::Cox { file } => cmd_cox(cli, file),
        Command::Iota { file } => cmd_iota(cli, file),
        Command::Conjecture { file } => cmd_conjecture(cli, file),
        Command::Iso { file1, file2 } => cmd_iso(cli, file1, file2),
        Command::Factorialize { file } => cmd_factorialize(cli, file),
        Command::Batch { dir } => cmd_batch(cli, dir),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotComplete | Error::NotFactorial(_) | Error::AxiomViolation(_) => EXIT_PRECONDITION,
        _ => EXIT_INVALID,
    }
}

fn fail(err: &Error) -> u8 {
    eprintln!("error: {err}");
    exit_code_for(err)
}

/// The strict convention: invariant divisors carry multiplicity 1.
fn strict_problems(sk: &SphericalSkeleton) -> Vec<String> {
    sk.divisors
        .iter()
        .filter(|d| !d.is_color() && d.m != 1)
        .map(|d| {
            format!(
                "strict: invariant divisor {} has multiplicity {}, expected 1",
                d.name, d.m
            )
        })
        .collect()
}

/// Loads, parses, validates (and under --strict also applies the strict
/// conventions). All diagnostics go to stderr.
fn load(cli: &Cli, path: &Path) -> Result<(SkeletonFile, SphericalSkeleton), u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INVALID
    })?;
    let doc = SkeletonFile::from_text(&text).map_err(|e| fail(&e))?;
    let sk = parse_skeleton_file(&text).map_err(|e| fail(&e))?;
    if cli.strict {
        let problems = strict_problems(&sk);
        if !problems.is_empty() {
            for p in &problems {
                eprintln!("error: {p}");
            }
            return Err(EXIT_INVALID);
        }
    }
    Ok((doc, sk))
}

fn cmd_validate(cli: &Cli, path: &Path) -> u8 {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_INVALID;
        }
    };
    let doc = match SkeletonFile::from_text(&text) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let sk = match doc.to_skeleton() {
        Ok(sk) => sk,
        Err(e) => return fail(&e),
    };
    let mut problems: Vec<String> = sk.validate().iter().map(|v| v.to_string()).collect();
    if cli.strict {
        problems.extend(strict_problems(&sk));
    }
    match cli.format {
        Format::Machine => {
            let value = json!({
                "file": path.display().to_string(),
                "name": doc.name,
                "valid": problems.is_empty(),
                "violations": problems,
            });
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
        }
        Format::Human => {
            if problems.is_empty() {
                println!("{}: valid", doc.name);
            } else {
                println!("{}: {} violation(s)", doc.name, problems.len());
                for p in &problems {
                    println!("  {p}");
                }
            }
        }
    }
    if problems.is_empty() {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

fn cmd_info(cli: &Cli, path: &Path) -> u8 {
    let (doc, sk) = match load(cli, path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let ds = match derived_sets(&sk) {
        Ok(ds) => ds,
        Err(e) => return fail(&e),
    };
    let cg = match class_group(&sk) {
        Ok(cg) => cg,
        Err(e) => return fail(&e),
    };
    let complete = is_complete(&sk).unwrap_or(false);
    let factorial = is_factorial(&sk).unwrap_or(false);
    let fixed = lunavust::cox::has_fixed_point(&sk).unwrap_or(false);
    match cli.format {
        Format::Machine => {
            let value = json!({
                "name": doc.name,
                "root_system": sk.rs.spec().to_string(),
                "sigma_a": ds.sigma_a,
                "sigma_2a": ds.sigma_2a,
                "colors": ds.colors,
                "g_invariant": ds.g_invariant,
                "script_s": ds.script_s.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "d_script_s": ds.d_script_s().into_iter().collect::<Vec<_>>(),
                "class_group_rank": cg.rank,
                "class_group_generators": cg.generator_names,
                "complete": complete,
                "factorial": factorial,
                "fixed_point": fixed,
            });
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
        }
        Format::Human => {
            println!("{} ({})", doc.name, sk.rs.spec());
            let labels: Vec<String> = ds.script_s.iter().map(|l| l.to_string()).collect();
            println!("  colors: {}", ds.colors.join(", "));
            println!("  invariant divisors: {}", ds.g_invariant.join(", "));
            println!("  script_s: {{{}}}", labels.join(", "));
            println!(
                "  class group of the Cox spectrum: Z^{} (generators: {})",
                cg.rank,
                cg.generator_names.join(", ")
            );
            println!("  complete: {complete}   factorial: {factorial}   fixed point: {fixed}");
        }
    }
    EXIT_OK
}

fn skeleton_json(name: &str, sk: &SphericalSkeleton) -> serde_json::Value {
    serde_json::to_value(SkeletonFile::from_skeleton(name, sk)).unwrap()
}

fn write_or_print(cli: &Cli, name: &str, sk: &SphericalSkeleton, extra: serde_json::Value) -> u8 {
    let doc = SkeletonFile::from_skeleton(name, sk);
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, doc.to_text()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_INVALID;
        }
        println!("{}", serde_json::to_string_pretty(&extra).unwrap());
    } else {
        let mut value = extra;
        value["skeleton"] = skeleton_json(name, sk);
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    }
    EXIT_OK
}

fn cmd_cox(cli: &Cli, path: &Path) -> u8 {
    let (doc, sk) = match load(cli, path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let result = match cox_transform(&sk) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let name = format!("{}-cox", doc.name);
    let provenance: BTreeMap<&String, &String> = result.provenance.iter().collect();
    write_or_print(
        cli,
        &name,
        &result.skeleton,
        json!({ "provenance": provenance }),
    )
}

fn iota_json(report: &IotaReport) -> serde_json::Value {
    let vec_json = |v: &lunavust::exact::Vector| -> serde_json::Value {
        json!(v.iter().map(format_rat).collect::<Vec<_>>())
    };
    json!({
        "value": report.value.to_string(),
        "witness": report.witness.as_ref().map(vec_json),
        "ray": report.ray.as_ref().map(vec_json),
        "base_term": format_rat(&report.base_term),
    })
}

fn cmd_iota(cli: &Cli, path: &Path) -> u8 {
    let (doc, sk) = match load(cli, path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let report = match iota(&sk) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    match cli.format {
        Format::Machine => {
            let mut value = iota_json(&report);
            value["name"] = json!(doc.name);
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
        }
        Format::Human => {
            println!("iota({}) = {}", doc.name, report.value);
            println!("  base term = {}", format_rat(&report.base_term));
            if let Some(w) = &report.witness {
                println!("  witness = {w:?}");
            }
            if let Some(rdir) = &report.ray {
                println!("  unbounded along = {rdir:?}");
            }
        }
    }
    EXIT_OK
}

fn cmd_conjecture(cli: &Cli, path: &Path) -> u8 {
    let (doc, sk) = match load(cli, path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let verdict = match check_conjecture(&sk) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    match cli.format {
        Format::Machine => {
            let value = json!({
                "name": doc.name,
                "iota": iota_json(&verdict.iota),
                "dim_gp": verdict.dim_gp,
                "verdict": verdict.verdict.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
        }
        Format::Human => {
            println!(
                "{}: iota = {}, dim G/P = {}, verdict = {}",
                doc.name, verdict.iota.value, verdict.dim_gp, verdict.verdict
            );
        }
    }
    if verdict.verdict == Verdict::Violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn cmd_iso(cli: &Cli, path1: &Path, path2: &Path) -> u8 {
    let (doc1, sk1) = match load(cli, path1) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let (doc2, sk2) = match load(cli, path2) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let witness = match are_isomorphic(&sk1, &sk2) {
        Ok(w) => w,
        Err(e) => return fail(&e),
    };
    match cli.format {
        Format::Machine => {
            let value = match &witness {
                Some(iso) => json!({
                    "isomorphic": true,
                    "phi_r": iso.phi_r.iter()
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .collect::<BTreeMap<_, _>>(),
                    "phi_delta": iso.phi_delta.iter().cloned()
                        .collect::<BTreeMap<_, _>>(),
                }),
                None => json!({ "isomorphic": false }),
            };
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
        }
        Format::Human => match &witness {
            Some(iso) => {
                println!("{} and {} are isomorphic", doc1.name, doc2.name);
                for (a, b) in &iso.phi_r {
                    println!("  root {a} -> {b}");
                }
                for (a, b) in &iso.phi_delta {
                    println!("  divisor {a} -> {b}");
                }
            }
            None => println!("{} and {} are not isomorphic", doc1.name, doc2.name),
        },
    }
    EXIT_OK
}

fn cmd_factorialize(cli: &Cli, path: &Path) -> u8 {
    let (doc, sk) = match load(cli, path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let (out, trace) = match factorialize(&sk) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let steps: Vec<serde_json::Value> = trace
        .steps
        .iter()
        .map(|s| {
            let d = &s.added_divisor;
            let added = json!({
                "name": d.name,
                "varsigma": d.varsigma.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "c": d.c.iter().map(format_rat).collect::<Vec<_>>(),
                "m": d.m,
            });
            let case = match s.case {
                StepCase::AddColor => "AddColor",
                StepCase::AddInvariantDivisor => "AddInvariantDivisor",
            };
            json!({
                "alpha": s.alpha.to_string(),
                "case": case,
                "theta_prime": s.theta_prime.iter().map(format_rat).collect::<Vec<_>>(),
                "added_divisor": added,
            })
        })
        .collect();
    let name = format!("{}-factorial", doc.name);
    write_or_print(
        cli,
        &name,
        &out,
        json!({
            "trace": {
                "steps": steps,
                "iota_before": iota_json(&trace.iota_before),
                "iota_after": iota_json(&trace.iota_after),
            }
        }),
    )
}

fn report_for_file(cli: &Cli, path: &Path) -> Report {
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Report::failure(file, None, format!("cannot read: {e}")),
    };
    let name = SkeletonFile::from_text(&text).ok().map(|d| d.name);
    let sk = match parse_skeleton_file(&text) {
        Ok(sk) => sk,
        Err(e) => return Report::failure(file, name, e.to_string()),
    };
    if cli.strict {
        let problems = strict_problems(&sk);
        if !problems.is_empty() {
            return Report::failure(file, name, problems.join("; "));
        }
    }
    match Report::compute(file.clone(), name.clone().unwrap_or_default(), &sk) {
        Ok(report) => report,
        Err(e) => Report::failure(file, name, e.to_string()),
    }
}

fn cmd_batch(cli: &Cli, dir: &Path) -> u8 {
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", dir.display());
            return EXIT_INVALID;
        }
    };
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "skel"))
        .collect();
    paths.sort();

    let reports: Vec<Report> = if cli.jobs == Some(1) {
        paths.iter().map(|p| report_for_file(cli, p)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs.unwrap_or(0))
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            paths.par_iter().map(|p| report_for_file(cli, p)).collect()
        })
    };
    let mut reports = reports;
    reports.sort_by(|a, b| a.file.cmp(&b.file));

    match cli.format {
        Format::Machine => {
            println!("{}", serde_json::to_string_pretty(&reports).unwrap());
        }
        Format::Human => {
            println!("{}", Report::human_header());
            for r in &reports {
                println!("{}", r.human_row());
            }
        }
    }
    if reports.iter().any(|r| !r.valid) {
        EXIT_INVALID
    } else if reports
        .iter()
        .any(|r| r.verdict.as_deref() == Some("Violation"))
    {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}
