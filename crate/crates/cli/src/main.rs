use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slimlat::diagram::PlanarDiagram;
use slimlat::doubling::double;
use slimlat::explore::{enumerate, realize, render, RealizabilityAnswer, RenderFormat, Verdict};
use slimlat::lamps::{lamp_poset, lamps, usage_stats, verify_lamp_con_iso};
use slimlat::multifork::{decompose, emit_dsl, parse_dsl, ProvenancedLattice};
use slimlat::order::{congruence_lattice, is_isomorphic, Poset};
use slimlat::reducer::{check_bounds, next_reduction};
use slimlat::Error;

#[derive(Parser)]
#[command(
    name = "slimlat",
    version,
    about = "Slim rectangular lattices from multifork sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file; standard input when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Input kind: a multifork sequence (dsl) or a lattice diagram (json).
    /// Inferred from the file extension when omitted.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 5)]
    max_len: usize,
    /// Step to double, counted from 1.
    #[arg(long, global = true)]
    step: Option<usize>,
    /// Lift the enumeration length cap.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Render format.
    #[arg(long, global = true, default_value = "dot")]
    to: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dsl,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sequence and print its lattice diagram as JSON.
    Build,
    /// Check that the input is a slim rectangular diagram.
    Validate,
    /// Lamps, usage patterns, lamp poset and the congruence witness.
    Lamps,
    /// Join-irreducible congruences and their order.
    Con,
    /// Apply the first applicable length reduction.
    Reduce,
    /// Reduce until no reduction applies; prints the trace.
    Minimize,
    /// Length and size bounds.
    Bounds,
    /// Recover a multifork sequence from a lattice diagram.
    Decompose,
    /// Double the lamp created by `--step`.
    Double,
    /// Count slim rectangular lattices by length up to `--max-len`.
    Enumerate,
    /// Minimal length of a lattice whose lamp poset is the input poset.
    Realize,
    /// Draw the lattice as DOT, SVG or TikZ (`--to`).
    Render,
}

enum Failure {
    Error(Error),
    Io(String),
    /// Ran fine, but the checked property does not hold.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Error(e)
    }
}

type Outcome = Result<String, Failure>;

fn read_input(cli: &Cli) -> Result<String, Failure> {
    let mut text = String::new();
    match &cli.input {
        Some(path) => {
            text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        }
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(text)
}

fn format_of(cli: &Cli, text: &str) -> Format {
    if let Some(f) = cli.format {
        return f;
    }
    let ext = cli
        .input
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| e.to_str());
    match ext {
        Some("json") => Format::Json,
        Some(_) => Format::Dsl,
        None if text.trim_start().starts_with('{') => Format::Json,
        None => Format::Dsl,
    }
}

fn diagram(cli: &Cli) -> Result<PlanarDiagram, Failure> {
    let text = read_input(cli)?;
    Ok(match format_of(cli, &text) {
        Format::Json => PlanarDiagram::from_json(&text)?,
        Format::Dsl => ProvenancedLattice::build(&parse_dsl(&text)?)?
            .diagram()
            .clone(),
    })
}

fn lattice(cli: &Cli) -> Result<ProvenancedLattice, Failure> {
    let text = read_input(cli)?;
    let seq = match format_of(cli, &text) {
        Format::Json => decompose(&PlanarDiagram::from_json(&text)?)?,
        Format::Dsl => parse_dsl(&text)?,
    };
    Ok(ProvenancedLattice::build(&seq)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn poset_json(p: &Poset) -> Value {
    json!(p.to_file())
}

fn run(cli: &Cli) -> Outcome {
    match cli.command {
        Command::Build => {
            let pl = lattice(cli)?;
            let mut s = pl.diagram().to_json();
            s.push('\n');
            Ok(s)
        }
        Command::Validate => {
            let d = diagram(cli)?;
            let r = d.check_slim_rectangular();
            if r.passed() {
                Ok(pretty(
                    &json!({ "slim_rectangular": true, "size": d.size() }),
                ))
            } else {
                Err(Failure::Check(r.failures.join("; ")))
            }
        }
        Command::Lamps => {
            let pl = lattice(cli)?;
            let lp = lamp_poset(&pl)?;
            let usage = usage_stats(&pl);
            let iso = verify_lamp_con_iso(&pl)?;
            let list: Vec<Value> = lamps(&pl)
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let pattern = usage
                        .internal
                        .iter()
                        .find(|u| u.lamp == i)
                        .map(|u| u.pattern.clone());
                    json!({
                        "id": i,
                        "kind": l.kind,
                        "foot": l.foot,
                        "peak": l.peak,
                        "tubes": l.tubes,
                        "step": l.step,
                        "pattern": pattern,
                    })
                })
                .collect();
            let out = pretty(&json!({
                "lamps": list,
                "poset": poset_json(&lp.order),
                "con_witness": iso.map,
                "failures": iso.failures,
            }));
            if iso.passed() {
                Ok(out)
            } else {
                emit(cli, &out)?;
                Err(Failure::Check("lamp poset differs from Jir(Con L)".into()))
            }
        }
        Command::Con => {
            let d = diagram(cli)?;
            let c = congruence_lattice(d.lattice());
            Ok(pretty(&json!({
                "jir": poset_json(&c.order),
                "generators": c.generators,
                "congruences": c.full_size.to_string(),
            })))
        }
        Command::Reduce => {
            let pl = lattice(cli)?;
            match next_reduction(&pl)? {
                Some(r) => Ok(pretty(&json!({
                    "step": r.step,
                    "lamp_map": r.lamp_map,
                    "sequence": emit_dsl(r.lattice.sequence()),
                }))),
                None => Ok(pretty(
                    &json!({ "step": null, "sequence": emit_dsl(pl.sequence()) }),
                )),
            }
        }
        Command::Minimize => {
            let pl = lattice(cli)?;
            let mut current = pl.clone();
            let mut trace = Vec::new();
            while let Some(r) = next_reduction(&current)? {
                let before = congruence_lattice(current.diagram().lattice()).order;
                let after = congruence_lattice(r.lattice.diagram().lattice()).order;
                trace.push(json!({
                    "step": r.step,
                    "con_preserved": is_isomorphic(&before, &after),
                    "slim_rectangular": r.lattice.diagram().is_slim_rectangular(),
                }));
                current = r.lattice;
            }
            Ok(pretty(&json!({
                "trace": trace,
                "length_before": pl.length(),
                "length_after": current.length(),
                "sequence": emit_dsl(current.sequence()),
            })))
        }
        Command::Bounds => {
            let pl = lattice(cli)?;
            let r = check_bounds(&pl)?;
            let out = pretty(&json!(r));
            if r.passed() {
                Ok(out)
            } else {
                emit(cli, &out)?;
                Err(Failure::Check(r.failures.join("; ")))
            }
        }
        Command::Decompose => {
            let d = diagram(cli)?;
            Ok(emit_dsl(&decompose(&d)?))
        }
        Command::Double => {
            let pl = lattice(cli)?;
            let t = cli
                .step
                .ok_or_else(|| Error::Argument("double needs --step".into()))?;
            Ok(emit_dsl(&double(pl.sequence(), t)?))
        }
        Command::Enumerate => {
            let e = enumerate(cli.max_len, cli.allow_large)?;
            let lattices: Vec<Value> = e
                .entries()
                .map(|x| json!({ "length": x.length(), "size": x.lattice.size(), "sequence": emit_dsl(x.sequence()) }))
                .collect();
            Ok(pretty(
                &json!({ "counts": e.counts(), "lattices": lattices }),
            ))
        }
        Command::Realize => {
            let text = read_input(cli)?;
            let p = Poset::from_json(&text)?;
            let a = realize(&p, cli.max_len, cli.allow_large)?;
            if let Some(path) = &cli.out {
                write_file(path, &pretty(&json!(a)))?;
            }
            let summary = summarize(&a);
            if a.verdict == Verdict::Unresolved {
                print!("{summary}");
                return Err(Failure::Error(Error::Budget(format!(
                    "searched up to length {} of {}",
                    a.searched_to, a.window.1
                ))));
            }
            Ok(summary)
        }
        Command::Render => {
            let pl = lattice(cli)?;
            let f: RenderFormat = cli.to.parse()?;
            Ok(render(&pl, f)?)
        }
    }
}

fn summarize(a: &RealizabilityAnswer) -> String {
    match &a.verdict {
        Verdict::Found { length, witness } => {
            let mut s = format!("min length {length}\n");
            for line in emit_dsl(witness).lines() {
                s.push_str(&format!("# {line}\n"));
            }
            s
        }
        Verdict::Chain { length } => format!("chain of length {length}\n"),
        Verdict::NotRepresentable => format!("not representable up to length {}\n", a.window.1),
        Verdict::Unresolved => format!("unresolved up to length {}\n", a.searched_to),
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match (&cli.out, &cli.command) {
        (_, Command::Realize) => Ok(()),
        (Some(path), _) => write_file(path, text),
        (None, _) => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| {
        if matches!(cli.command, Command::Realize) {
            print!("{text}");
            Ok(())
        } else {
            emit(&cli, &text)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                e if e.is_parse_error() => 2,
                Error::Budget(_) => 3,
                _ => 1,
            })
        }
    }
}
