//! Command-line interface. Exit codes: 0 success (decide: projective),
//! 1 decide: not projective / fuzz: failures, 2 parse, validation or
//! usage errors, 3 decide: undetermined.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use dualcone::cone::{dual_membership, inner_point_test, DualMembership, InnerPointVerdict, SearchConfig};
use dualcone::decide::{decide_projectivity, elliptic_consistency_check};
use dualcone::model::{format_point, parse_point, ModelFile};
use dualcone::rat::format_rat;
use dualcone::report::build_decide_report;
use dualcone::suites::{run_suite, Suite};
use dualcone::surface::{
    construct_k3_am, descend_inner_point, descend_model, validate_model, BlowdownMap, EllipticData,
    SurfaceModel,
};

#[derive(Parser)]
#[command(
    name = "dualcone",
    version,
    about = "Exact projectivity decisions for lattice models of compact Kähler surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the signature triple of a model's ambient form
    Signature { path: PathBuf },
    /// Print a basis of the perp of named curve classes and the
    /// restricted signature
    Perp {
        path: PathBuf,
        /// Comma-separated curve names; empty means the full space
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        classes: Vec<String>,
    },
    /// Test open- and closed-cone membership of a point
    KahlerTest {
        path: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Run the dual-membership and inner-point tests on a point
    DualInnerTest {
        path: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
    /// Decide projectivity and write a certificate report
    Decide {
        path: PathBuf,
        #[arg(long, default_value_t = 5)]
        bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a model file
    Construct {
        /// Model family; currently `k3-am`
        #[arg(long)]
        kind: String,
        /// Chain length for the k3-am family (0..=19)
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descend a model and an inner integral point along a blow-down
    Blowdown {
        path: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the fiber-class consistency check on a model's elliptic data
    EllipticBound { path: PathBuf },
    /// Run a seeded property suite
    Fuzz {
        /// One of: lemma15, selfdual, blowdown, oracle
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load_model(path: &Path) -> Result<(ModelFile, SurfaceModel, Option<EllipticData>), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = ModelFile::from_json(&text).map_err(|e| e.to_string())?;
    let (model, elliptic) = file.to_parts().map_err(|e| e.to_string())?;
    let violations = validate_model(&model);
    if !violations.is_empty() {
        let mut msg = String::from("model validation failed:");
        for v in violations {
            msg.push_str(&format!("\n  - {v}"));
        }
        return Err(msg);
    }
    Ok((file, model, elliptic))
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Signature { path } => {
            let (_, model, _) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            println!("{}", model.space.signature());
            ExitCode::SUCCESS
        }
        Command::Perp { path, classes } => {
            let (_, model, _) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let names: Vec<&String> = classes.iter().filter(|s| !s.is_empty()).collect();
            let mut constraints = Vec::new();
            for name in names {
                match model.curves.iter().find(|c| c.name == name.trim()) {
                    Some(curve) => constraints.push(curve.class_rat()),
                    None => return fail(format!("unknown curve class {name:?}")),
                }
            }
            let perp = match model.space.orthogonal_complement(&constraints) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let restricted = match model.space.restrict_form(&perp) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            for b in &perp.basis {
                println!("basis: {}", format_point(b));
            }
            println!("{}", restricted.signature());
            ExitCode::SUCCESS
        }
        Command::KahlerTest { path, point } => {
            let (_, model, _) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let x = match parse_point(&point) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let cone = match model.cone_model() {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let open = match cone.kahler_membership(&x) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let closed = cone.closure_membership(&x).expect("dimension already checked");
            println!("kahler: {open}");
            println!("closure: {closed}");
            ExitCode::SUCCESS
        }
        Command::DualInnerTest { path, point, seed, bound } => {
            let (_, model, _) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let x = match parse_point(&point) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let cone = match model.cone_model() {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let cfg = SearchConfig { coefficient_bound: bound.max(1), seed, ..Default::default() };
            match dual_membership(&cone, &x) {
                Ok(DualMembership::Member { .. }) => println!("dual: member"),
                Ok(DualMembership::NotMember { witness }) => {
                    println!("dual: not-member");
                    println!("dual witness: {}", format_point(&witness.eta));
                }
                Ok(DualMembership::Undetermined) => println!("dual: undetermined"),
                Err(e) => return fail(e),
            }
            match inner_point_test(&cone, &x, &cfg) {
                Ok(verdict) => {
                    println!("inner: {}", verdict.status_str());
                    match verdict {
                        InnerPointVerdict::Inner { cert, margin_sq, .. } => {
                            println!("interior part: {}", format_point(&cert.interior));
                            if !cert.cut_coeffs.is_empty() {
                                println!("cut coefficients: {}", format_point(&cert.cut_coeffs));
                            }
                            if let Some(m) = margin_sq {
                                println!("margin_sq: {}", format_rat(&m));
                            }
                        }
                        InnerPointVerdict::NotInner { cert } => {
                            println!("witness: {}", format_point(&cert.eta));
                        }
                        InnerPointVerdict::Undetermined { reason } => {
                            println!("reason: {reason}");
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Decide { path, bound, seed, out } => {
            let (file, model, _) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let cfg = SearchConfig { coefficient_bound: bound.max(1), seed, ..Default::default() };
            let start = Instant::now();
            let verdict = match decide_projectivity(&model, &cfg) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let timing_ms = start.elapsed().as_millis() as u64;
            let report = build_decide_report(&file, &verdict, seed, cfg.coefficient_bound, timing_ms);
            if let Err(e) = write_or_print(&out, &report.to_json()) {
                return fail(e);
            }
            eprintln!("verdict: {}", verdict.status_str());
            match verdict.status_str() {
                "projective" => ExitCode::SUCCESS,
                "not-projective" => ExitCode::from(1),
                _ => ExitCode::from(3),
            }
        }
        Command::Construct { kind, m, out } => {
            if kind != "k3-am" {
                return fail(format!("unknown construction kind {kind:?}"));
            }
            let model = match construct_k3_am(m) {
                Ok(model) => model,
                Err(e) => return fail(e),
            };
            let file = ModelFile::from_parts(&model, None);
            match write_or_print(&out, &file.to_json()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Blowdown { path, point, out } => {
            let (_, source, _) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let x = match parse_point(&point) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let bd = match BlowdownMap::new(source.space.clone()) {
                Ok(bd) => bd,
                Err(e) => return fail(e),
            };
            let target = match descend_model(&bd, &source) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let cfg = SearchConfig::default();
            let verdict = match descend_inner_point(&bd, &source, &target, &x, &cfg) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let y = dualcone::surface::blow_down(&bd, &x).expect("dimension already checked");
            let file = ModelFile::from_parts(&target, None);
            if let Err(e) = write_or_print(&out, &file.to_json()) {
                return fail(e);
            }
            eprintln!("descended point: {}", format_point(&y));
            eprintln!("verdict: {}", verdict.status_str());
            ExitCode::SUCCESS
        }
        Command::EllipticBound { path } => {
            let (_, model, elliptic) = match load_model(&path) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let Some(data) = elliptic else {
                return fail("model file carries no elliptic data");
            };
            let cfg = SearchConfig::default();
            match elliptic_consistency_check(&model, &data, &cfg) {
                Ok(report) => {
                    println!("inner: {}", report.inner_status);
                    println!("fiber pairing: {}", format_rat(&report.fiber_pairing));
                    if report.contradiction {
                        println!("contradiction: inner verdict with non-positive fiber pairing");
                    }
                    if let Some(n) = &report.bound {
                        println!("bound n: {n}");
                    }
                    if let Some(sq) = &report.boosted_square {
                        println!("boosted square: {}", format_rat(sq));
                    }
                    if let Some(class) = &report.boosted_class {
                        let s: Vec<String> = class.iter().map(|c| c.to_string()).collect();
                        println!("boosted class: {}", s.join(","));
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Fuzz { suite, trials, seed } => {
            let Some(suite) = Suite::parse(&suite) else {
                return fail(format!("unknown suite {suite:?}"));
            };
            let summary = run_suite(suite, trials, seed);
            println!("{summary}");
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
