//! `pmapkit`: one-shot queries over the pmapkit library.
//!
//! Exit status is 0 on success, 1 on malformed input and 2 when the input is
//! well formed but outside what the library decides.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pmapkit::blueprint::{truncate, GraphBlueprint};
use pmapkit::cbwitness::{full_witness, WitnessFactorization};
use pmapkit::classify::classify_blueprint;
use pmapkit::fluxdim::{abs_displacement, displacement, flux, flux_at, zk_embedding_check, EndPartition};
use pmapkit::lengthtree::{
    delta_exact, hyperbolicity_delta, is_ultrametric, parse_distance_table, ultratree, CombContext, LeveledVertex,
};
use pmapkit::mcg::{parse_element, Family, MappingClass};
use pmapkit::Error;

const SCHEMA: u32 = 1;

/// Extra window doublings used to re-check flux values.
const DOUBLINGS_VAR: &str = "PMAPKIT_DOUBLINGS";

#[derive(Parser)]
#[command(name = "pmapkit", version, about = "Mapping class groups of infinite graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a graph given as blueprint JSON (file or inline) or a family name.
    Classify {
        input: String,
        /// Truncation radius for DOT output.
        #[arg(long, default_value_t = 4)]
        radius: u32,
    },
    /// Normalize an element expression.
    Element {
        expr: String,
        #[arg(long, default_value = "lochness")]
        family: Family,
    },
    /// Factor an element over F ∪ V_K with K = [v1, v_window].
    Witness {
        /// Element expression, or a saved certificate with --certificate.
        input: String,
        #[arg(long, default_value = "lochness")]
        family: Family,
        #[arg(long, default_value_t = 1)]
        window: u32,
        /// Re-verify the certificate before printing it.
        #[arg(long)]
        check: bool,
        /// Treat the input as a certificate JSON file and verify it.
        #[arg(long)]
        certificate: bool,
    },
    /// Flux of an element across an end partition.
    Flux {
        expr: String,
        #[arg(long, default_value = "ladder")]
        family: Family,
        #[arg(long, default_value = "arm1:0-1")]
        partition: EndPartition,
    },
    /// Displacement of an element, or the ℤ^k embedding check with --zk.
    Displacement {
        expr: Option<String>,
        #[arg(long, default_value = "ladder")]
        family: Family,
        #[arg(long, default_value = "arm1:0-1")]
        partition: EndPartition,
        /// Rank of the shift lattice to check.
        #[arg(long)]
        zk: Option<u32>,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Dendrogram of comb elements under the length ultrametric.
    Tree {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Image of a leveled-tree vertex under a comb element.
    Leveled {
        /// Vertex `(n, {i: word, ...})`.
        #[arg(long)]
        vertex: LeveledVertex,
        expr: String,
    },
    /// Four-point hyperbolicity of a whitespace distance table ("-" for stdin).
    Hyp { input: String },
}

struct Output {
    json: Value,
    text: String,
    dot: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => match cli.format {
            Format::Json => {
                let mut v = out.json;
                v["schema"] = json!(SCHEMA);
                println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
                ExitCode::SUCCESS
            }
            Format::Text => {
                print!("{}", out.text);
                ExitCode::SUCCESS
            }
            Format::Dot => match out.dot {
                Some(d) => {
                    print!("{d}");
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("error: this subcommand has no DOT output");
                    ExitCode::from(1)
                }
            },
        },
        Err(e) => {
            let (kind, code) = match &e {
                Error::Parse(_) => ("parse", 1),
                Error::Rejected(_) => ("rejected", 2),
                Error::Unsupported(_) => ("unsupported", 2),
                Error::Internal(_) => ("internal", 1),
            };
            if cli.format == Format::Json {
                let v = json!({ "schema": SCHEMA, "error": { "kind": kind, "message": e.to_string() } });
                println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// The file's contents when `input` names a file, `input` itself otherwise.
fn read_input(input: &str) -> Result<String, Error> {
    if input == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(format!("stdin: {e}")));
    }
    if Path::new(input).is_file() {
        return std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("{input}: {e}")));
    }
    Ok(input.to_string())
}

fn parse_json(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn run(cmd: Command) -> Result<Output, Error> {
    match cmd {
        Command::Classify { input, radius } => classify(&input, radius),
        Command::Element { expr, family } => {
            let g = parse_element(family, &expr)?;
            Ok(Output {
                json: json!({ "family": family, "element": to_value(&g), "normalForm": g.to_expr().to_string() }),
                text: format!("{}\n", g.to_expr()),
                dot: None,
            })
        }
        Command::Witness { input, family, window, check, certificate } => {
            let w = if certificate {
                serde_json::from_value::<WitnessFactorization>(parse_json(&read_input(&input)?)?)
                    .map_err(|e| Error::Parse(format!("certificate: {e}")))?
            } else {
                full_witness(&parse_element(family, &input)?, window)?
            };
            if check || certificate {
                w.verify()?;
            }
            let names: Vec<&str> = w.factors.iter().map(|x| x.name.as_str()).collect();
            Ok(Output {
                text: format!(
                    "power {} of {} with {} factors{}\n{}\n",
                    w.power,
                    w.bound,
                    w.factors.len(),
                    if check || certificate { ", verified" } else { "" },
                    names.join(" · ")
                ),
                json: json!({ "verified": check || certificate, "witness": to_value(&w) }),
                dot: None,
            })
        }
        Command::Flux { expr, family, partition } => {
            let f = parse_element(family, &expr)?;
            let v = flux(&f, &partition)?;
            let depth = doublings()?;
            let mut m = v.m;
            for _ in 0..depth {
                m = 2 * m - v.n + 1;
                if flux_at(&f, &partition, m, v.n)? != Some(v.value) {
                    return Err(Error::Internal(format!("flux changes at the admissible pair ({m}, {})", v.n)));
                }
            }
            Ok(Output {
                json: json!({ "partition": partition.to_string(), "flux": to_value(&v), "extraChecks": depth }),
                text: format!("flux {} (m = {}, n = {})\n", v.value, v.m, v.n),
                dot: None,
            })
        }
        Command::Displacement { expr, family, partition, zk, bound } => match (zk, expr) {
            (Some(k), None) => {
                let r = zk_embedding_check(k, bound)?;
                Ok(Output {
                    text: format!("{} of {} vectors isometric\n", r.checked - r.failures.len(), r.checked),
                    json: json!({ "passed": r.passed(), "report": to_value(&r) }),
                    dot: None,
                })
            }
            (None, Some(expr)) => {
                let f = parse_element(family, &expr)?;
                let d = displacement(&f, &partition)?;
                let half = abs_displacement(&f, &partition)?;
                Ok(Output {
                    json: json!({ "partition": partition.to_string(), "displacement": d, "half": half.to_string() }),
                    text: format!("displacement {d}\n"),
                    dot: None,
                })
            }
            _ => Err(Error::Parse("give either an element or --zk".into())),
        },
        Command::Tree { exprs } => {
            let ctx = CombContext::for_family(Family::Comb)?;
            let els = exprs
                .iter()
                .map(|e| Ok((e.clone(), parse_element(Family::Comb, e)?)))
                .collect::<Result<Vec<(String, MappingClass)>, Error>>()?;
            let tree = ultratree(&ctx, &els)?;
            let mut dist = vec![];
            let mut lengths = vec![];
            for (_, g) in &els {
                lengths.push(ctx.length(g)?);
                dist.push(els.iter().map(|(_, h)| ctx.distance(g, h)).collect::<Result<Vec<_>, _>>()?);
            }
            let text = els
                .iter()
                .zip(&lengths)
                .map(|((s, _), l)| format!("{l}\t{s}\n"))
                .collect::<String>();
            Ok(Output {
                json: json!({ "labels": exprs, "lengths": lengths, "distances": dist, "tree": to_value(&tree) }),
                text,
                dot: Some(tree.to_dot()),
            })
        }
        Command::Leveled { vertex, expr } => {
            let phi = parse_element(Family::Comb, &expr)?;
            let image = vertex.act(&phi)?;
            Ok(Output {
                json: json!({ "vertex": vertex.to_string(), "image": image.to_string(), "imageWords": to_value(&image) }),
                text: format!("{image}\n"),
                dot: None,
            })
        }
        Command::Hyp { input } => {
            let d = parse_distance_table(&read_input(&input)?)?;
            let ultra = is_ultrametric(&d)?;
            let integral: Option<Vec<Vec<i64>>> = d
                .iter()
                .map(|r| r.iter().map(|&x| (x.fract() == 0.0).then_some(x as i64)).collect())
                .collect();
            let (delta, exact) = match integral {
                Some(ints) => {
                    let h = delta_exact(&ints)?;
                    (h.twice() as f64 / 2.0, Some(h.to_string()))
                }
                None => (hyperbolicity_delta(&d)?, None),
            };
            Ok(Output {
                json: json!({ "points": d.len(), "ultrametric": ultra, "delta": delta, "deltaExact": exact }),
                text: format!("delta: {}\nultrametric: {ultra}\n", exact.unwrap_or_else(|| delta.to_string())),
                dot: None,
            })
        }
    }
}

fn classify(input: &str, radius: u32) -> Result<Output, Error> {
    let text = read_input(input)?;
    let b = match text.trim().parse::<Family>() {
        Ok(f) => f.blueprint(),
        Err(_) => GraphBlueprint::from_json(&parse_json(&text)?)?,
    };
    let r = classify_blueprint(&b)?;
    let dot = truncate(&b, radius).ok().map(|t| t.to_dot());
    let v = to_value(&r);
    let text = format!(
        "cb: {} ({})\nlocally cb: {} ({})\nasdim: {}\nh1: {}\nmap: {}\n",
        plain(&v["cbVerdict"]),
        r.cb_reason.tag,
        plain(&v["locallyCbVerdict"]),
        r.loc_cb_reason.tag,
        plain(&v["asdim"]),
        plain(&v["h1LowerBound"]),
        plain(&v["mapCbNote"]),
    );
    Ok(Output { json: v, text, dot })
}

fn plain(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn doublings() -> Result<u32, Error> {
    match std::env::var(DOUBLINGS_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{DOUBLINGS_VAR} must be a small integer"))),
        Err(_) => Ok(1),
    }
}
