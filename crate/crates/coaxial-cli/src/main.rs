use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coaxial::hyperbolic;
use coaxial::io::{
    analyze, catalog, graph_dot, groups_summary, hyperbolic_report, lookup, parse_polyhedron_document,
    parse_tuple_document, smoothings_summary, Error, Sections, Subject,
};
use coaxial::smoothing::catalog::name_of_key;
use coaxial::smoothing::orbits;

#[derive(Parser)]
#[command(name = "coaxial", version, about = "Topology of intersections of coaxial ellipsoids")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Re-check module invariants; violations exit with code 4.
    #[arg(long, global = true)]
    paranoid: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Input {
    /// Built-in catalog entry (see `coaxial catalog`).
    #[arg(long)]
    catalog: Option<String>,
    /// Tuple document (JSON).
    #[arg(long)]
    tuple: Option<PathBuf>,
    /// Polyhedron incidence document (JSON).
    #[arg(long)]
    polyhedron: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected pipeline stages and print a JSON report.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        faces: bool,
        #[arg(long)]
        singularities: bool,
        #[arg(long)]
        homology: bool,
        /// Also report torsion coefficients (slower).
        #[arg(long)]
        torsion: bool,
        #[arg(long)]
        groups: bool,
        #[arg(long)]
        smoothings: bool,
        #[arg(long)]
        types: bool,
        #[arg(long)]
        hyperbolic: bool,
        /// Every stage that applies to the input.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Decorated graph of smoothings.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
        #[command(flatten)]
        output: Output,
    },
    /// List the built-in inputs.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Homology of the reflected complex.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        torsion: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Kernels of the orbifold group onto (Z/2)^n, punctured and not.
    Groups {
        #[command(flatten)]
        input: Input,
        /// Also enumerate small-cover colorings onto (Z/2)^K.
        #[arg(long, value_name = "K")]
        colorings: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Orbits of smoothings with topological types.
    Smoothings {
        #[command(flatten)]
        input: Input,
        /// Also compute the homology of each orbit representative.
        #[arg(long)]
        homology: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Right angles, vertex classes and volumes in the Klein model.
    Hyperbolic {
        /// Catalog entry with a Klein realization.
        #[arg(long, conflicts_with = "bipyramid")]
        catalog: Option<String>,
        /// Bipyramid with apex E = (a, a, a), `a` given as p/q.
        #[arg(long, value_name = "A")]
        bipyramid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

fn load(input: &Input) -> Result<Subject> {
    if let Some(name) = &input.catalog {
        return Ok(lookup(name).ok_or_else(|| Error::UnknownCatalog(name.clone()))?.subject.clone());
    }
    if let Some(path) = &input.tuple {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let (t, name) = parse_tuple_document(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Subject { name, tuple: Some(t), ..Default::default() });
    }
    let path = input.polyhedron.as_ref().expect("clap enforces one input");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (p, name) = parse_polyhedron_document(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Subject { name, polyhedron: Some(p), ..Default::default() })
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global()?;
    }
    let paranoid = cli.paranoid;
    match cli.command {
        Command::Analyze {
            input,
            faces,
            singularities,
            homology,
            torsion,
            groups,
            smoothings,
            types,
            hyperbolic,
            all,
            output,
        } => {
            let subject = load(&input)?;
            let mut s = Sections { faces, singularities, homology, torsion, groups, smoothings, types, hyperbolic, paranoid };
            if all {
                let lattice = subject.lattice()?;
                s.faces = true;
                s.singularities = true;
                s.homology = true;
                s.groups = true;
                s.types = true;
                s.smoothings = lattice.dim() == Some(3);
                s.hyperbolic = subject.klein.is_some();
            }
            if !(s.faces || s.singularities || s.homology || s.groups || s.smoothings || s.types || s.hyperbolic) {
                s.faces = true;
                s.singularities = true;
            }
            emit(&output, &json(&analyze(&subject, &s)?)?)
        }
        Command::Graph { input, format, output } => {
            let subject = load(&input)?;
            let lattice = subject.lattice()?;
            let p = subject.polyhedron3(&lattice)?;
            let (report, graph) = smoothings_summary(&p, false, false, paranoid)?;
            let text = match format {
                GraphFormat::Json => json(&report)?,
                GraphFormat::Dot => {
                    let names: Vec<Option<String>> =
                        orbits(&p)?.iter().map(|o| name_of_key(&o.unmarked_key).map(str::to_string)).collect();
                    let title = subject.name.clone().unwrap_or_else(|| "polyhedron".into());
                    graph_dot(&title, &graph, &names)
                }
            };
            emit(&output, &text)
        }
        Command::Catalog { json: as_json } => {
            let text = if as_json {
                let rows: Vec<_> = catalog()
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "name": e.name,
                            "description": e.description,
                            "note": e.note,
                            "tuple": e.subject.tuple.is_some(),
                            "klein": e.subject.klein.is_some(),
                        })
                    })
                    .collect();
                json(&rows)?
            } else {
                catalog().iter().map(|e| format!("{}\t{}\n", e.name, e.description)).collect()
            };
            print!("{text}");
            Ok(())
        }
        Command::Homology { input, torsion, output } => {
            let subject = load(&input)?;
            let s = Sections { homology: true, torsion, paranoid, ..Default::default() };
            let r = analyze(&subject, &s)?;
            emit(&output, &json(&r.homology)?)
        }
        Command::Groups { input, colorings, output } => {
            let subject = load(&input)?;
            let lattice = subject.lattice()?;
            emit(&output, &json(&groups_summary(&lattice, colorings)?)?)
        }
        Command::Smoothings { input, homology, output } => {
            let subject = load(&input)?;
            let lattice = subject.lattice()?;
            let p = subject.polyhedron3(&lattice)?;
            emit(&output, &json(&smoothings_summary(&p, true, homology, paranoid)?.0)?)
        }
        Command::Hyperbolic { catalog: name, bipyramid, output } => {
            let k = match (name, bipyramid) {
                (_, Some(a)) => {
                    let a = a.parse().map_err(|_| Error::Field { field: "bipyramid".into(), message: format!("`{a}` is not a rational") })?;
                    hyperbolic::bipyramid(a).map_err(Error::from)?
                }
                (Some(n), None) => lookup(&n)
                    .ok_or_else(|| Error::UnknownCatalog(n.clone()))?
                    .subject
                    .klein
                    .clone()
                    .ok_or_else(|| Error::Unsupported(format!("`{n}` has no Klein-model realization")))?,
                (None, None) => return Err(anyhow!(Error::Unsupported("give --catalog or --bipyramid".into()))),
            };
            emit(&output, &json(&hyperbolic_report(&k)?)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.chain().find_map(|c| c.downcast_ref::<Error>()).map_or(2, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
