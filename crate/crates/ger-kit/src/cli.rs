//! Command-line entry point: parse, validate, generate, transform,
//! round-trip check, and diagram emission.
//!
//! Exit status contract: 0 on success, 1 on validation or round-trip
//! failure, 2 on usage or I/O errors. Diagnostics and mismatch reports go
//! to standard error; requested artifacts to standard output or the `-o`
//! file.

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::emit::{emit_dot, emit_rds_json, emit_sql};
use crate::genfuzz::{gen_schema, GenParams, SplitMix64};
use crate::labels::parse_label;
use crate::rds::{classify_relationship, from_rds, to_rds, RelClass};
use crate::schema::{
    format_schema, parse_binding, parse_schema, validate_binding, Diagnostic, GenericSchema,
    NameBinding, Severity,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(name = "ger", about = "Generic ER schema toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a single label and print its kind and canonical form.
    Parse {
        /// The label text, e.g. "s2(r1(e1.e2))".
        label: String,
    },
    /// Validate a schema file (and optionally a binding file).
    Check {
        /// Path to a .ger schema file.
        file: PathBuf,
        /// Path to a .gerb binding file.
        #[arg(long)]
        bindings: Option<PathBuf>,
    },
    /// Generate a random valid schema and print it as canonical .ger text.
    Gen(GenArgs),
    /// Transform a schema to its relational form and emit it.
    #[command(name = "to-rds")]
    ToRds {
        /// Path to a .ger schema file.
        file: PathBuf,
        /// Output format.
        #[arg(long, value_parser = ["json", "sql", "summary"])]
        format: String,
        /// Path to a .gerb binding file.
        #[arg(long)]
        bindings: Option<PathBuf>,
        /// Write to this file instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check that the relational transformation reconstructs its input.
    Roundtrip {
        /// Path to a .ger schema file to check.
        file: Option<PathBuf>,
        /// Generate and check this many random schemas instead.
        #[arg(long)]
        count: Option<u64>,
        /// Seed for --count mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit the schema as DOT diagram text.
    Dot {
        /// Path to a .ger schema file.
        file: PathBuf,
        /// Path to a .gerb binding file.
        #[arg(long)]
        bindings: Option<PathBuf>,
        /// Write to this file instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    entities: u32,
    #[arg(long, default_value_t = 5)]
    max_attrs: u32,
    #[arg(long, default_value_t = 3)]
    max_rels: u32,
    #[arg(long, default_value_t = 0.4)]
    density: f64,
    #[arg(long, default_value_t = 6)]
    max_card: u32,
    #[arg(long, default_value_t = 0.3)]
    unbounded_prob: f64,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        GenParams {
            seed: self.seed,
            max_entities: self.entities,
            max_attrs_per_owner: self.max_attrs,
            max_parallel_rels: self.max_rels,
            rel_density: self.density,
            max_card: self.max_card,
            unbounded_prob: self.unbounded_prob,
        }
    }
}

/// Runs the CLI against an argument vector (including the program name)
/// and returns the process exit status.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    EXIT_OK
                }
                _ => {
                    eprint!("{err}");
                    EXIT_USAGE
                }
            };
        }
    };

    match cli.command {
        Command::Parse { label } => cmd_parse(&label),
        Command::Check { file, bindings } => cmd_check(&file, bindings.as_deref()),
        Command::Gen(args) => cmd_gen(&args),
        Command::ToRds {
            file,
            format,
            bindings,
            out,
        } => cmd_to_rds(&file, &format, bindings.as_deref(), out.as_deref()),
        Command::Roundtrip { file, count, seed } => cmd_roundtrip(file.as_deref(), count, seed),
        Command::Dot {
            file,
            bindings,
            out,
        } => cmd_dot(&file, bindings.as_deref(), out.as_deref()),
    }
}

fn cmd_parse(text: &str) -> i32 {
    match parse_label(text) {
        Ok(label) => {
            println!("{}; canonical: {label}", label.kind());
            EXIT_OK
        }
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_FAILED
        }
    }
}

fn read_file(path: &std::path::Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|err| {
        eprintln!("error: cannot read {}: {err}", path.display());
        EXIT_USAGE
    })
}

fn write_output(out: Option<&std::path::Path>, text: &str) -> i32 {
    match out {
        Some(path) => match fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(err) => {
                eprintln!("error: cannot write {}: {err}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

fn report_diagnostics(diags: &[Diagnostic]) -> i32 {
    for diag in diags {
        eprintln!("{diag}");
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

fn load_schema(path: &std::path::Path) -> Result<GenericSchema, i32> {
    let text = read_file(path)?;
    parse_schema(&text).map_err(|diags| report_diagnostics(&diags))
}

fn load_binding(path: Option<&std::path::Path>) -> Result<Option<NameBinding>, i32> {
    match path {
        None => Ok(None),
        Some(path) => {
            let text = read_file(path)?;
            match parse_binding(&text) {
                Ok(binding) => Ok(Some(binding)),
                Err(diags) => Err(report_diagnostics(&diags)),
            }
        }
    }
}

fn cmd_check(file: &std::path::Path, bindings: Option<&std::path::Path>) -> i32 {
    let schema = match load_schema(file) {
        Ok(schema) => schema,
        Err(status) => return status,
    };
    let binding = match load_binding(bindings) {
        Ok(binding) => binding,
        Err(status) => return status,
    };
    if let Some(binding) = binding {
        let diags = validate_binding(&schema, &binding);
        if !diags.is_empty() {
            return report_diagnostics(&diags);
        }
    }
    eprintln!("ok");
    EXIT_OK
}

fn cmd_gen(args: &GenArgs) -> i32 {
    let schema = gen_schema(&args.params());
    write_output(args.out.as_deref(), &format_schema(&schema))
}

fn cmd_to_rds(
    file: &std::path::Path,
    format: &str,
    bindings: Option<&std::path::Path>,
    out: Option<&std::path::Path>,
) -> i32 {
    let schema = match load_schema(file) {
        Ok(schema) => schema,
        Err(status) => return status,
    };
    let binding = match load_binding(bindings) {
        Ok(binding) => binding,
        Err(status) => return status,
    };
    if let Some(binding) = &binding {
        let diags = validate_binding(&schema, binding);
        if !diags.is_empty() {
            return report_diagnostics(&diags);
        }
    }
    let rds = to_rds(&schema);
    let text = match format {
        "json" => emit_rds_json(&rds),
        "sql" => match emit_sql(&rds, binding.as_ref()) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_FAILED;
            }
        },
        "summary" => summary(&schema, &rds),
        _ => unreachable!("restricted by value_parser"),
    };
    write_output(out, &text)
}

fn summary(schema: &GenericSchema, rds: &crate::rds::Rds) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} relations, {} columns, {} ledger entries\n",
        rds.relations.len(),
        rds.relations.iter().map(|r| r.columns.len()).sum::<usize>(),
        rds.ledger.len() * 2,
    ));
    for rel in schema.rels() {
        let class = match classify_relationship(schema, &rel) {
            RelClass::OneToOne => "one-to-one".to_string(),
            RelClass::OneToManyTowards(side) => {
                format!("one-to-many (FK on e{})", side.entity())
            }
            RelClass::ManyToMany => "many-to-many (join table)".to_string(),
        };
        out.push_str(&format!("{rel}: {class}\n"));
    }
    out
}

fn roundtrip_one(schema: &GenericSchema) -> Result<(), String> {
    let rds = to_rds(schema);
    let back = match from_rds(&rds) {
        Ok(back) => back,
        Err(err) => return Err(format!("inversion failed: {err}")),
    };
    let expected = format_schema(schema);
    let actual = format_schema(&back);
    if expected == actual {
        Ok(())
    } else {
        let mut diff = String::from("reconstruction differs:\n");
        for (left, right) in expected.lines().zip(actual.lines()) {
            if left != right {
                diff.push_str(&format!("  expected: {left}\n  actual:   {right}\n"));
                break;
            }
        }
        if expected.lines().count() != actual.lines().count() {
            diff.push_str("  (line counts differ)\n");
        }
        Err(diff)
    }
}

fn cmd_roundtrip(file: Option<&std::path::Path>, count: Option<u64>, seed: u64) -> i32 {
    match (file, count) {
        (Some(path), None) => {
            let schema = match load_schema(path) {
                Ok(schema) => schema,
                Err(status) => return status,
            };
            match roundtrip_one(&schema) {
                Ok(()) => {
                    println!("1/1 ok");
                    EXIT_OK
                }
                Err(report) => {
                    eprintln!("{report}");
                    EXIT_FAILED
                }
            }
        }
        (None, Some(count)) => {
            // Per-iteration seeds come from one SplitMix64 stream, so the
            // whole run is a function of --seed alone.
            let mut rng = SplitMix64::new(seed);
            let mut ok = 0u64;
            for _ in 0..count {
                let params = GenParams::with_seed(rng.next_u64());
                let schema = gen_schema(&params);
                match roundtrip_one(&schema) {
                    Ok(()) => ok += 1,
                    Err(report) => {
                        eprintln!("seed {}: {report}", params.seed);
                        eprintln!("counterexample schema:\n{}", format_schema(&schema));
                        println!("{ok}/{count} ok");
                        return EXIT_FAILED;
                    }
                }
            }
            println!("{ok}/{count} ok");
            EXIT_OK
        }
        _ => {
            eprintln!("error: roundtrip takes either a schema file or --count");
            EXIT_USAGE
        }
    }
}

fn cmd_dot(
    file: &std::path::Path,
    bindings: Option<&std::path::Path>,
    out: Option<&std::path::Path>,
) -> i32 {
    let schema = match load_schema(file) {
        Ok(schema) => schema,
        Err(status) => return status,
    };
    let binding = match load_binding(bindings) {
        Ok(binding) => binding,
        Err(status) => return status,
    };
    if let Some(binding) = &binding {
        let diags = validate_binding(&schema, binding);
        if !diags.is_empty() {
            return report_diagnostics(&diags);
        }
    }
    write_output(out, &emit_dot(&schema, binding.as_ref()))
}
