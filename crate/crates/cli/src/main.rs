//! `discharge`: command-line front end to the charge checks.
//!
//! Exit status: 0 when the check passes, 1 when violations were found (or,
//! for `match`, when the pattern does not match), 2 on usage or data errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use discharge_core::datasets::ConfigSet;
use discharge_core::report::VerificationReport;
use discharge_core::ring::{CompiledPattern, RingDescriptor};
use discharge_core::verify::{self, default_triangle_exclusions};
use discharge_core::{overlap_audit, FacePattern, MatchOptions, RuleEngine, RuleTable, Semantics};

#[derive(Parser, Debug)]
#[command(name = "discharge", version, about = "Exact verification of discharging rules on local neighborhoods")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rule file (default: the embedded table)
    #[arg(long, global = true, value_name = "PATH")]
    rules: Option<PathBuf>,

    /// Reducible configurations used as exclusions (default depends on the command)
    #[arg(long, global = true, value_name = "PATH")]
    configs: Option<PathBuf>,

    /// How the pattern character `4` is read
    #[arg(long, global = true, default_value = "inclusive4")]
    semantics: Semantics,

    /// Match patterns and rule windows in one direction only
    #[arg(long, global = true)]
    no_reflection: bool,

    /// Largest vertex degree checked by enumeration
    #[arg(long, global = true, default_value_t = 20)]
    dmax: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Require the configuration file to hold the complete list
    #[arg(long, global = true)]
    complete: bool,

    /// Most violations listed in a report (the count is always exact)
    #[arg(long, global = true, default_value_t = 100)]
    max_violations: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load the rule table and check that no two rules apply to the same window
    CheckRules,
    /// Check that every vertex ends with non-negative charge
    VerifyVertices,
    /// Check that every admissible 3-face receives at least one unit
    VerifyTriangles,
    /// Check that no admissible 5- or 6-face sends out too much
    VerifyFaces {
        #[arg(long, value_parser = clap::value_parser!(u8).range(5..=6))]
        size: u8,
    },
    /// Test a configuration pattern against a ring descriptor
    Match { pattern: String, descriptor: String },
    /// Show every rule firing on a ring descriptor
    Explain { descriptor: String },
    /// Print the rule table
    DumpRules,
    /// Print the configuration set
    DumpConfigs,
    /// Compare the face check under both readings of `4`
    DiffSemantics {
        #[arg(long, value_parser = clap::value_parser!(u8).range(5..=6))]
        size: u8,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let result = pool.install(|| run(&cli));
    eprintln!("elapsed {:.2?}", start.elapsed());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn options(cli: &Cli) -> MatchOptions {
    MatchOptions {
        semantics: cli.semantics,
        reflection: !cli.no_reflection,
    }
}

fn table(cli: &Cli) -> Result<RuleTable, Failure> {
    Ok(match &cli.rules {
        Some(p) => RuleTable::load(p)?,
        None => RuleTable::embedded(),
    })
}

fn configs(cli: &Cli, default: impl FnOnce() -> ConfigSet) -> Result<ConfigSet, Failure> {
    let set = match &cli.configs {
        Some(p) => ConfigSet::load(p)?,
        None => default(),
    };
    for w in set.warnings() {
        eprintln!("warning: {w}");
    }
    if cli.complete {
        set.check_complete()?;
    }
    Ok(set)
}

fn emit_report(cli: &Cli, report: &VerificationReport) -> bool {
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json()),
    }
    report.verified()
}

fn emit_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let opts = options(cli);
    match &cli.command {
        Command::CheckRules => {
            let table = table(cli)?;
            let (t, p, h) = table.counts();
            let conflicts = overlap_audit(&table, opts);
            match cli.format {
                Format::Json => emit_json(json!({
                    "rules": table.len(),
                    "t": t,
                    "p": p,
                    "h": h,
                    "semantics": opts.semantics.name(),
                    "reflection": opts.reflection,
                    "conflicts": conflicts,
                })),
                Format::Text => {
                    let audit = if conflicts.is_empty() {
                        "clean".to_string()
                    } else {
                        format!("{} conflicts", conflicts.len())
                    };
                    println!("{} rules ({t} T / {p} P / {h} H), overlap audit: {audit}", table.len());
                    for c in &conflicts {
                        println!("  {:?} {}: {} vs {}", c.kind, c.window, c.first, c.second);
                    }
                }
            }
            Ok(conflicts.is_empty())
        }
        Command::VerifyVertices => {
            let engine = RuleEngine::new(table(cli)?, opts);
            let report = verify::verify_vertices(&engine, cli.dmax, cli.max_violations)?;
            Ok(emit_report(cli, &report))
        }
        Command::VerifyTriangles => {
            let engine = RuleEngine::new(table(cli)?, opts);
            let ex = configs(cli, default_triangle_exclusions)?;
            let report = verify::verify_triangles(&engine, &ex, cli.max_violations)?;
            Ok(emit_report(cli, &report))
        }
        Command::VerifyFaces { size } => {
            let engine = RuleEngine::new(table(cli)?, opts);
            let cfg = configs(cli, ConfigSet::shipped)?;
            let report = verify::verify_faces(*size as usize, &engine, &cfg, cli.max_violations)?;
            Ok(emit_report(cli, &report))
        }
        Command::Match { pattern, descriptor } => {
            let pattern = FacePattern::parse(pattern)?;
            let ring = RingDescriptor::parse(descriptor)?;
            let image = CompiledPattern::compile(&pattern, opts.semantics).matching_image(&ring.slots(), opts.reflection);
            match cli.format {
                Format::Json => emit_json(json!({
                    "pattern": pattern.render(),
                    "descriptor": ring.encode(),
                    "matched": image.is_some(),
                    "image": image,
                })),
                Format::Text => match image {
                    Some(i) => println!("match (image {i})"),
                    None => println!("no match"),
                },
            }
            Ok(image.is_some())
        }
        Command::Explain { descriptor } => {
            let engine = RuleEngine::new(table(cli)?, opts);
            let cfg = configs(cli, ConfigSet::shipped)?;
            let x = verify::explain(descriptor, &engine, &cfg)?;
            match cli.format {
                Format::Json => emit_json(serde_json::to_value(&x)?),
                Format::Text => print!("{}", x.to_text()),
            }
            Ok(true)
        }
        Command::DumpRules => {
            let table = table(cli)?;
            match cli.format {
                Format::Text => print!("{}", table.serialize()),
                Format::Json => {
                    let rules: Vec<_> = table
                        .rules()
                        .iter()
                        .map(|r| {
                            json!({
                                "kind": r.kind.letter().to_string(),
                                "pattern": r.render(),
                                "amount": r.amount,
                                "cell": r.cell,
                            })
                        })
                        .collect();
                    emit_json(json!({ "rules": rules }));
                }
            }
            Ok(true)
        }
        Command::DumpConfigs => {
            let cfg = configs(cli, ConfigSet::shipped)?;
            match cli.format {
                Format::Text => print!("{}", cfg.save()),
                Format::Json => {
                    let entries: Vec<_> = cfg
                        .entries()
                        .iter()
                        .map(|e| json!({ "pattern": e.pattern.render_short(), "provenance": e.provenance().tag() }))
                        .collect();
                    emit_json(json!({
                        "pre_closure": cfg.pre_closure_count(),
                        "post_closure": cfg.post_closure_count(),
                        "entries": entries,
                        "canonical": cfg.canonical_forms().collect::<Vec<_>>(),
                    }));
                }
            }
            Ok(true)
        }
        Command::DiffSemantics { size } => {
            let table = table(cli)?;
            let cfg = configs(cli, ConfigSet::shipped)?;
            let diff = verify::diff_semantics(*size as usize, &table, &cfg, opts.reflection, cli.max_violations)?;
            match cli.format {
                Format::Json => emit_json(serde_json::to_value(&diff)?),
                Format::Text => print!("{}", diff.to_text()),
            }
            Ok(true)
        }
    }
}
