use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use twcoh::complex::{GlobalComplex, RelativeComplex};
use twcoh::eml::{operation_group, perverse_eml_skeleton};
use twcoh::ffs::normality_certificate;
use twcoh::linalg::{CohomologyGroup, Ring};
use twcoh::poset::parse_perversity;
use twcoh::sset::{self, Presentation};

mod gallery;
mod input;
mod table;

use table::Table;

const SCHEMA: &str = "twcoh/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lib(#[from] twcoh::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(name = "twcoh", version, about = "Blown-up intersection cohomology of stratified simplicial sets")]
struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection cohomology of one presentation.
    Cohomology {
        /// JSON presentation, or `example:NAME`.
        #[arg(long)]
        input: String,
        /// Poset used when the file has none: `point`, `unit`, `linear:N` or a JSON file.
        #[arg(long)]
        poset: Option<String>,
        #[arg(long, default_value = "0")]
        perversity: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long, default_value = "0..2")]
        degrees: String,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Cohomology of a pair `(X, A)`, with `A` given by cell ids.
    Relative {
        #[arg(long)]
        input: String,
        #[arg(long)]
        poset: Option<String>,
        /// Comma separated cell ids of a face-closed subcomplex.
        #[arg(long)]
        subcomplex: String,
        #[arg(long, default_value = "0")]
        perversity: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long, default_value = "0..2")]
        degrees: String,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Group of natural transformations `H^n_q -> H^m_p` over a prime field.
    Operations {
        #[arg(long = "P", default_value = "unit")]
        poset: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Perversity of the target cohomology.
        #[arg(long, default_value = "0")]
        p: String,
        /// Perversity of the source cohomology.
        #[arg(long, default_value = "0")]
        q: String,
        #[arg(long, default_value = "F2")]
        ring: String,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        strict_stable: bool,
    },
    /// Skeleton of a perverse Eilenberg-MacLane space.
    Eml {
        #[arg(long = "P", default_value = "unit")]
        poset: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value = "0")]
        perversity: String,
        #[arg(long, default_value = "F2")]
        ring: String,
        #[arg(long, default_value_t = 3)]
        truncation: usize,
        /// Writes the presentation as JSON to this file.
        #[arg(long)]
        output: Option<String>,
    },
    /// Worked examples with their expected values.
    Gallery {
        /// Runs one case; all cases by default.
        #[arg(long)]
        case: Option<String>,
        /// Lists the cases without running them.
        #[arg(long)]
        list: bool,
    },
    /// Validates a presentation and checks its normalization.
    Check {
        #[arg(long)]
        input: String,
        #[arg(long)]
        poset: Option<String>,
    },
    /// Builds a presentation and prints it as JSON.
    Build {
        #[command(subcommand)]
        what: Build,
    },
}

#[derive(Subcommand)]
enum Build {
    /// A built-in example.
    Example { name: String },
    /// `Δ[n]` over the point.
    Simplex { n: usize },
    /// `∂Δ[n]` over the point.
    Boundary { n: usize },
    /// The nerve of a poset.
    Nerve {
        #[arg(long = "P", default_value = "unit")]
        poset: String,
    },
    /// `Δ[0] ∗ X` for a presentation over the point.
    Cone {
        #[arg(long)]
        input: String,
    },
    /// `A ∗ B` for two presentations over the point.
    Join {
        #[arg(long)]
        input: String,
        #[arg(long)]
        with: String,
    },
    /// `X ⊗ Δ[n]`.
    Prism {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Cells of dimension at most `d`.
    Skeleton {
        #[arg(long)]
        input: String,
        #[arg(long)]
        d: usize,
    },
    /// Glues the restriction to regular cells back along shared faces.
    Normalize {
        #[arg(long)]
        input: String,
    },
    /// Collapses a face-closed set of cells with one label to a vertex.
    Quotient {
        #[arg(long)]
        input: String,
        #[arg(long)]
        cells: String,
    },
}

fn group_json(k: usize, g: &CohomologyGroup) -> Value {
    json!({
        "degree": k,
        "group": g.to_string(),
        "rank": g.free_rank,
        "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    })
}

fn groups_table(lo: usize, groups: &[CohomologyGroup]) -> String {
    let mut t = Table::new(&["degree", "group", "rank", "torsion"]);
    for (i, g) in groups.iter().enumerate() {
        let tors: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
        t.row(vec![
            (lo + i).to_string(),
            g.to_string(),
            g.free_rank.to_string(),
            if tors.is_empty() { "-".into() } else { tors.join(",") },
        ]);
    }
    t.render()
}

fn truncation_for(degrees: (usize, usize), truncation: Option<usize>) -> Result<usize, CliError> {
    let d = truncation.unwrap_or(degrees.1 + 1);
    if degrees.1 >= d {
        return Err(twcoh::Error::Truncation {
            degree: degrees.1,
            kmax: d,
        }
        .into());
    }
    Ok(d)
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

fn emit(format: Format, value: Value, table: impl FnOnce() -> String) -> Output {
    Output::ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
        Format::Table => table(),
    })
}

fn print_presentation(x: &Presentation) -> Output {
    Output::ok(format!("{}\n", x.to_json_string()))
}

fn cohomology(
    format: Format,
    command: &str,
    x: &Presentation,
    sub: Option<&[usize]>,
    perversity: &str,
    ring: &str,
    degrees: &str,
    truncation: Option<usize>,
) -> Result<Output, CliError> {
    let p = parse_perversity(&x.poset, perversity)?;
    let ring = input::ring(ring)?;
    let range = input::degrees(degrees)?;
    let kmax = truncation_for(range, truncation)?;
    let groups: Vec<CohomologyGroup> = match sub {
        Some(a) => {
            let rel = RelativeComplex::new(x, a, kmax)?;
            (range.0..=range.1).map(|k| rel.cohomology(&p, ring, k)).collect::<Result<_, _>>()?
        }
        None => {
            let c = GlobalComplex::new(x, kmax)?;
            (range.0..=range.1).map(|k| c.cohomology(&p, ring, k, None)).collect::<Result<_, _>>()?
        }
    };
    let value = json!({
        "schema": SCHEMA,
        "command": command,
        "ring": ring.to_string(),
        "perversity": p.to_json(&x.poset),
        "truncation": kmax,
        "cells": x.len(),
        "groups": groups.iter().enumerate().map(|(i, g)| group_json(range.0 + i, g)).collect::<Vec<_>>(),
    });
    Ok(emit(format, value, || groups_table(range.0, &groups)))
}

fn prime_of(ring: Ring) -> Result<u64, CliError> {
    match ring {
        Ring::Fp(q) => Ok(q),
        other => Err(CliError::Usage(format!("this command needs a prime field, got {other}"))),
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Cohomology {
            input,
            poset,
            perversity,
            ring,
            degrees,
            truncation,
        } => {
            let x = input::presentation(&input, poset.as_deref())?;
            cohomology(format, "cohomology", &x, None, &perversity, &ring, &degrees, truncation)
        }
        Command::Relative {
            input,
            poset,
            subcomplex,
            perversity,
            ring,
            degrees,
            truncation,
        } => {
            let x = input::presentation(&input, poset.as_deref())?;
            let a = input::cell_list(&x, &subcomplex)?;
            cohomology(format, "relative", &x, Some(&a), &perversity, &ring, &degrees, truncation)
        }
        Command::Operations {
            poset,
            n,
            m,
            p,
            q,
            ring,
            truncation,
            strict_stable,
        } => {
            let poset = input::poset(&poset)?;
            let ring = input::ring(&ring)?;
            let prime = prime_of(ring)?;
            let target = parse_perversity(&poset, &p)?;
            let source = parse_perversity(&poset, &q)?;
            let d = truncation.unwrap_or(m + 2);
            let r = operation_group(&poset, prime, n, &source, m, &target, d)?;
            let value = json!({
                "schema": SCHEMA,
                "command": "operations",
                "ring": ring.to_string(),
                "n": n,
                "m": m,
                "source": source.to_json(&poset),
                "target": target.to_json(&poset),
                "truncation": r.truncation,
                "group": r.group.to_string(),
                "rank": r.group.free_rank,
                "next": r.next.to_string(),
                "stable": r.stable,
            });
            let mut out = emit(format, value, || {
                let mut t = Table::new(&["n", "m", "source", "target", "truncation", "group", "rank", "stable"]);
                t.row(vec![
                    n.to_string(),
                    m.to_string(),
                    source.display(&poset),
                    target.display(&poset),
                    r.truncation.to_string(),
                    r.group.to_string(),
                    r.group.free_rank.to_string(),
                    if r.stable { "yes".into() } else { format!("no (next {})", r.next) },
                ]);
                t.render()
            });
            if strict_stable && !r.stable {
                out.code = 3;
            }
            Ok(out)
        }
        Command::Eml {
            poset,
            n,
            perversity,
            ring,
            truncation,
            output,
        } => {
            let poset = input::poset(&poset)?;
            let prime = prime_of(input::ring(&ring)?)?;
            let p = parse_perversity(&poset, &perversity)?;
            let k = perverse_eml_skeleton(&poset, prime, n, &p, truncation)?;
            if let Some(path) = &output {
                std::fs::write(path, k.pres.to_json_string()).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            }
            let counts = k.pres.count_by_dim();
            let value = json!({
                "schema": SCHEMA,
                "command": "eml",
                "ring": format!("F{prime}"),
                "n": n,
                "perversity": p.to_json(&poset),
                "truncation": truncation,
                "cells": k.pres.len(),
                "cells_by_dim": counts,
                "basepoint_cells": k.basepoint.len(),
            });
            Ok(emit(format, value, || {
                let mut t = Table::new(&["dim", "cells"]);
                for (d, c) in counts.iter().enumerate() {
                    t.row(vec![d.to_string(), c.to_string()]);
                }
                t.row(vec!["total".into(), k.pres.len().to_string()]);
                t.render()
            }))
        }
        Command::Gallery { case, list } => gallery::run(format, case.as_deref(), list),
        Command::Check { input, poset } => {
            let raw = input::presentation(&input, poset.as_deref());
            let x = match raw {
                Ok(x) => x,
                Err(CliError::Invalid(msg)) => {
                    let value = json!({"schema": SCHEMA, "command": "check", "valid": false, "errors": [msg]});
                    let mut out = emit(format, value, || format!("invalid: {msg}\n"));
                    out.code = 2;
                    return Ok(out);
                }
                Err(e) => return Err(e),
            };
            let report = x.validate();
            let norm = normality_certificate(&x).ok();
            let value = json!({
                "schema": SCHEMA,
                "command": "check",
                "valid": report.valid,
                "errors": report.errors,
                "cells": report.cells,
                "cells_by_dim": x.count_by_dim(),
                "maximal_cells": report.maximal_cells,
                "regular_cells": report.regular_cells,
                "nonsingular_cells": report.nonsingular_cells,
                "normalization": norm.as_ref().map(|(n, c)| json!({
                    "cells": n.len(),
                    "certificate": c.holds(),
                })),
            });
            Ok(emit(format, value, || {
                let mut t = Table::new(&["property", "value"]);
                t.row(vec!["valid".into(), report.valid.to_string()]);
                t.row(vec!["cells".into(), report.cells.to_string()]);
                t.row(vec!["regular".into(), report.regular_cells.len().to_string()]);
                t.row(vec!["maximal".into(), report.maximal_cells.join(",")]);
                t.row(vec!["nonsingular".into(), report.nonsingular_cells.join(",")]);
                let n = match &norm {
                    Some((n, c)) => format!("{} cells, certificate {}", n.len(), if c.holds() { "holds" } else { "fails" }),
                    None => "unavailable".into(),
                };
                t.row(vec!["normalization".into(), n]);
                t.render()
            }))
        }
        Command::Build { what } => {
            let x = match what {
                Build::Example { name } => twcoh::suite::by_name(&name)?,
                Build::Simplex { n } => sset::plain_simplex(n),
                Build::Boundary { n } => sset::plain_boundary(n),
                Build::Nerve { poset } => sset::nerve(&input::poset(&poset)?),
                Build::Cone { input } => {
                    let b = input::presentation(&input, Some("point"))?;
                    plain_only(&b)?;
                    sset::cone_on(&b)
                }
                Build::Join { input, with } => {
                    let a = input::presentation(&input, Some("point"))?;
                    let b = input::presentation(&with, Some("point"))?;
                    plain_only(&a)?;
                    plain_only(&b)?;
                    sset::join(&a, &b)
                }
                Build::Prism { input, n } => sset::tensor_with_standard(&input::presentation(&input, None)?, n),
                Build::Skeleton { input, d } => sset::skeleton(&input::presentation(&input, None)?, d),
                Build::Normalize { input } => sset::normalize(&input::presentation(&input, None)?)?,
                Build::Quotient { input, cells } => {
                    let x = input::presentation(&input, None)?;
                    let a = input::cell_list(&x, &cells)?;
                    sset::quotient(&x, &a)?.0
                }
            };
            Ok(print_presentation(&x))
        }
    }
}

fn plain_only(x: &Presentation) -> Result<(), CliError> {
    if x.poset.len() != 1 {
        return Err(CliError::Usage("expected a presentation over the point".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Io(_) => 1,
                _ => 2,
            })
        }
    }
}
