use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use tangle_calc::{
    build_records, classify, classify_link, enumerate, export_pd, normalize, parse, parse_link,
    parse_tangle, read_jsonl, run_invariant_suite, write_jsonl, Expr, Fraction, PdCode,
    SurfaceRecord,
};

const STACK_SIZE: usize = 256 << 20;

#[derive(Parser)]
#[command(name = "tangle", version, about = "Arborescent tangle calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of a tangle, or the canonical text of a link.
    Fmt {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Decide whether a tangle complement is hyperbolic.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// List the essential surfaces of a tangle complement.
    Census {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a link complement is hyperbolic.
    ClassifyLink {
        #[arg(allow_hyphen_values = true)]
        link: String,
        #[arg(long)]
        json: bool,
    },
    /// Write every expression up to a leaf count as a JSONL corpus.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_leaves: u64,
        /// Comma-separated fractions, e.g. `1/2,-1/2,1/3`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_alphabet)]
        alphabet: Alphabet,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Re-run the invariant checks over a stored corpus.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Export a closed link as a PD code.
    ExportPd {
        #[arg(allow_hyphen_values = true)]
        link: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Invariants,
}

#[derive(Clone)]
struct Alphabet(Vec<Fraction>);

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    let fs = s
        .split(',')
        .map(|t| t.trim().parse::<Fraction>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if fs.is_empty() {
        return Err("alphabet is empty".into());
    }
    Ok(Alphabet(fs))
}

/// `kind k=v ...` from a serialized reason or surface.
fn describe(v: &Value) -> String {
    let map = match v {
        Value::Object(map) => map,
        Value::String(s) => return s.clone(),
        other => return other.to_string(),
    };
    let mut parts = Vec::new();
    if let Some(Value::String(k)) = map.get("kind") {
        parts.push(k.clone());
    }
    for (k, v) in map.iter().filter(|(k, _)| *k != "kind") {
        let text = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        parts.push(format!("{k}={text}"));
    }
    parts.join(" ")
}

fn print_json(out: &mut impl Write, v: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn surface_line(name: &str, s: &SurfaceRecord) -> String {
    format!("{name} m={} axis={} at {}", s.m, s.axis, s.path)
}

fn run(cmd: Command, out: &mut impl Write) -> Result<bool> {
    match cmd {
        Command::Fmt { expr } => {
            match parse(&expr)? {
                Expr::Tangle(t) => writeln!(out, "{}", normalize(&t)?.expr)?,
                Expr::Link(l) => writeln!(out, "{l}")?,
            }
            Ok(true)
        }
        Command::Classify { expr, json } => {
            let v = classify(&parse_tangle(&expr)?)?;
            if json {
                print_json(out, &v)?;
            } else {
                writeln!(
                    out,
                    "status: {}",
                    describe(&serde_json::to_value(v.status)?)
                )?;
                writeln!(out, "normal form: {}", v.normal_form)?;
                for r in &v.reasons {
                    writeln!(out, "reason: {}", describe(&serde_json::to_value(r)?))?;
                }
            }
            Ok(true)
        }
        Command::Census { expr, json } => {
            let c = tangle_calc::census(&parse_tangle(&expr)?)?;
            if json {
                print_json(out, &c)?;
            } else {
                if let Some(d) = &c.disk {
                    writeln!(out, "disk separates_strings={}", d.separates_strings)?;
                }
                for a in &c.annuli {
                    writeln!(out, "{}", surface_line("annulus", a))?;
                }
                for t in &c.tori {
                    writeln!(out, "{}", surface_line("torus", t))?;
                }
                for s in &c.spheres {
                    writeln!(out, "{}", surface_line("sphere", s))?;
                }
                if c.disk.is_none() && c.annuli.is_empty() && c.tori.is_empty() {
                    writeln!(out, "no essential surfaces")?;
                }
            }
            Ok(true)
        }
        Command::ClassifyLink { link, json } => {
            let r = classify_link(&parse_link(&link)?)?;
            if json {
                print_json(out, &r)?;
            } else {
                writeln!(
                    out,
                    "status: {}",
                    describe(&serde_json::to_value(r.status)?)
                )?;
                writeln!(out, "prime: {}", r.prime)?;
                writeln!(out, "split: {}", r.split)?;
                if let Some(m) = &r.canonical_montesinos {
                    let parts: Vec<String> = m.parts.iter().map(ToString::to_string).collect();
                    writeln!(out, "montesinos: parts=[{}] e={}", parts.join(","), m.e)?;
                }
                if let Some(tb) = &r.two_bridge {
                    writeln!(out, "two-bridge: {tb}")?;
                }
                for reason in &r.reasons {
                    writeln!(out, "reason: {}", describe(&serde_json::to_value(reason)?))?;
                }
            }
            Ok(true)
        }
        Command::Enumerate {
            max_leaves,
            alphabet,
            out: path,
            jobs,
        } => {
            let exprs = enumerate(max_leaves as usize, &alphabet.0, jobs);
            let records = build_records(&exprs, jobs)?;
            let file =
                File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_jsonl(&records, BufWriter::new(file))
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {} records to {}", records.len(), path.display());
            Ok(true)
        }
        Command::Check {
            suite: Suite::Invariants,
            corpus,
            jobs,
        } => {
            let file =
                File::open(&corpus).with_context(|| format!("opening {}", corpus.display()))?;
            let records = read_jsonl(BufReader::new(file))?;
            let report = run_invariant_suite(&records, jobs)?;
            writeln!(out, "records: {}", report.records)?;
            for (name, c) in &report.checks {
                writeln!(out, "{name}: {} passed, {} failed", c.passed, c.failed)?;
            }
            writeln!(
                out,
                "total: {} passed, {} failed",
                report.passed(),
                report.failed()
            )?;
            Ok(report.failed() == 0)
        }
        Command::ExportPd { link, json } => {
            let pd = export_pd(&parse_link(&link)?)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&pd)?)?;
            } else {
                print_pd(out, &pd)?;
            }
            Ok(true)
        }
    }
}

fn print_pd(out: &mut impl Write, pd: &PdCode) -> io::Result<()> {
    let xs: Vec<String> = pd
        .crossings
        .iter()
        .map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]"))
        .collect();
    writeln!(out, "PD[{}]", xs.join(", "))?;
    let signs: Vec<String> = pd.signs.iter().map(|s| format!("{s:+}")).collect();
    writeln!(out, "signs: [{}]", signs.join(","))?;
    writeln!(out, "components: {}", pd.components)?;
    if pd.free_loops > 0 {
        writeln!(out, "free loops: {}", pd.free_loops)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || {
            let mut out = BufWriter::new(io::stdout().lock());
            run(cli.command, &mut out).and_then(|ok| {
                out.flush()?;
                Ok(ok)
            })
        });
    let result = match worker.map(|w| w.join()) {
        Ok(Ok(r)) => r,
        Ok(Err(_)) => Err(anyhow::anyhow!("internal error")),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .is_some_and(|j| j.io_error_kind() == Some(io::ErrorKind::BrokenPipe))
    })
}
