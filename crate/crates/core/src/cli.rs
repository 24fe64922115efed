//! The `retract` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::crown::{bundle_family, classify, enumerate_crowns_in_e, inner, CrownKind};
use crate::format::{parse_poset, write_witness};
use crate::multigraph::{
    build_c_graph, build_c_max, build_f_graph, export_dot, Color, TwoColorMultigraph,
};
use crate::pointset::PointSet;
use crate::poset::Poset;
use crate::retract::{decide_retract, Decision};
use crate::search::pattern_in;
use crate::verify::{self, Bounds};

pub const EXIT_RETRACT: u8 = 0;
pub const EXIT_NOT_RETRACT: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "retract",
    version,
    about = "Height-one retracts of finite posets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Bundle multigraph of the poset.
    F,
    /// Full pattern multigraph.
    C,
    /// Pattern multigraph on principal up- and down-sets.
    Cmax,
}

#[derive(Debug, clap::Args)]
pub struct PatternArgs {
    /// Comma-separated minimal points of the pattern.
    #[arg(long, value_delimiter = ',')]
    pub lower: Vec<String>,
    /// Comma-separated maximal points of the pattern.
    #[arg(long, value_delimiter = ',')]
    pub upper: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Levels, 4-crowns, bundles and the bundle graph of a poset.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Decide whether the named points form a retract. Exit 0: retract, 1: not, 2: error.
    Decide {
        file: PathBuf,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Write the retraction here when one exists.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Render a multigraph as DOT.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the equivalence suites against the brute-force oracle.
    Verify {
        /// Cap on poset sizes in every suite.
        #[arg(long)]
        max_points: Option<usize>,
        /// Random posets per random suite.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Replace the decision procedure by a broken one.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelsReport {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub extremal: Vec<String>,
    pub middle: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrownReport {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub proper: bool,
    pub inner: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub vertices: usize,
    /// Unordered pairs with a shared minimal point, loops included.
    pub l_edges: usize,
    pub u_edges: usize,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub points: usize,
    pub levels: LevelsReport,
    pub crowns: Vec<CrownReport>,
    pub inner_points: Vec<String>,
    pub bundles: Vec<Vec<String>>,
    pub bundle_graph: GraphReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecideReport {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub retract: bool,
    /// `[point, image]` pairs of the retraction.
    pub map: Option<Vec<[String; 2]>>,
    pub witness_file: Option<String>,
}

fn names(p: &Poset, s: PointSet) -> Vec<String> {
    s.iter().map(|x| p.name(x)).collect()
}

fn graph_report(g: &TwoColorMultigraph) -> GraphReport {
    GraphReport {
        vertices: g.vertex_count(),
        l_edges: g.edge_count(Color::L),
        u_edges: g.edge_count(Color::U),
        complete: g.is_complete(),
    }
}

pub fn analyze(p: &Poset) -> Report {
    let levels = p.levels();
    let crowns = enumerate_crowns_in_e(p)
        .into_iter()
        .map(|c| CrownReport {
            lower: names(p, c.lower()),
            upper: names(p, c.upper()),
            proper: classify(p, &c) == CrownKind::Proper,
            inner: names(p, inner(p, &c)),
        })
        .collect();
    let bf = bundle_family(p);
    let graph = build_f_graph(p, &bf);
    Report {
        points: p.len(),
        levels: LevelsReport {
            lower: names(p, levels.lower),
            upper: names(p, levels.upper),
            extremal: names(p, levels.extremal),
            middle: names(p, levels.middle),
        },
        crowns,
        inner_points: names(p, bf.inner_points),
        bundles: bf.bundles.iter().map(|&b| names(p, b)).collect(),
        bundle_graph: graph_report(&graph),
    }
}

fn braces(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(","))
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let l = &self.levels;
        writeln!(out, "points: {}", self.points).unwrap();
        writeln!(out, "lower: {}", braces(&l.lower)).unwrap();
        writeln!(out, "upper: {}", braces(&l.upper)).unwrap();
        writeln!(out, "extremal: {}", braces(&l.extremal)).unwrap();
        writeln!(out, "middle: {}", braces(&l.middle)).unwrap();
        let improper = self.crowns.iter().filter(|c| !c.proper).count();
        writeln!(
            out,
            "crowns: {} ({} proper, {} improper)",
            self.crowns.len(),
            self.crowns.len() - improper,
            improper
        )
        .unwrap();
        for c in &self.crowns {
            write!(
                out,
                "  {} < {} {}",
                braces(&c.lower),
                braces(&c.upper),
                if c.proper { "proper" } else { "improper" }
            )
            .unwrap();
            if c.proper {
                out.push('\n');
            } else {
                writeln!(out, ", inner {}", braces(&c.inner)).unwrap();
            }
        }
        writeln!(out, "inner points: {}", braces(&self.inner_points)).unwrap();
        writeln!(out, "bundles: {}", self.bundles.len()).unwrap();
        for b in &self.bundles {
            writeln!(out, "  {}", braces(b)).unwrap();
        }
        let g = &self.bundle_graph;
        writeln!(
            out,
            "bundle graph: {} vertices, {} L-edges, {} U-edges, {}",
            g.vertices,
            g.l_edges,
            g.u_edges,
            if g.complete {
                "complete"
            } else {
                "not complete"
            }
        )
        .unwrap();
        out
    }
}

impl DecideReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "pattern {} < {}: {}\n",
            braces(&self.lower),
            braces(&self.upper),
            if self.retract {
                "retract"
            } else {
                "not a retract"
            }
        );
        if let Some(map) = &self.map {
            for [x, y] in map {
                writeln!(out, "  {x} -> {y}").unwrap();
            }
        }
        if let Some(path) = &self.witness_file {
            writeln!(out, "witness written to {path}").unwrap();
        }
        out
    }
}

/// A failure reported on stderr with exit code 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn load(path: &Path) -> Result<Poset, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?
    };
    parse_poset(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn resolve(p: &Poset, pattern: &PatternArgs) -> Result<PointSet, CliError> {
    if pattern.lower.is_empty() || pattern.upper.is_empty() {
        return Err(CliError("pattern needs --lower and --upper points".into()));
    }
    let mut z = PointSet::EMPTY;
    for name in pattern.lower.iter().chain(&pattern.upper) {
        let x = p
            .lookup(name.trim())
            .ok_or_else(|| CliError(format!("unknown point `{}`", name.trim())))?;
        if z.contains(x) {
            return Err(CliError(format!("point `{}` named twice", name.trim())));
        }
        z.insert(x);
    }
    Ok(z)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError(format!("{}: {e}", path.display())))
        }
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_decide(
    p: &Poset,
    pattern: &PatternArgs,
    witness: Option<&Path>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let z = resolve(p, pattern)?;
    let decision = decide_retract(p, z)?;
    let mut report = DecideReport {
        lower: pattern.lower.iter().map(|s| s.trim().to_string()).collect(),
        upper: pattern.upper.iter().map(|s| s.trim().to_string()).collect(),
        retract: decision.is_retract(),
        map: None,
        witness_file: None,
    };
    if let Decision::Retract(r) = &decision {
        report.map = Some(
            (0..p.len())
                .map(|x| [p.name(x), p.name(r.map[x])])
                .collect(),
        );
        if let Some(path) = witness {
            let verified = r.verify(p).is_ok();
            emit(out, Some(path), &write_witness(p, &r.map, verified))?;
            report.witness_file = Some(path.display().to_string());
        }
    }
    let text = match format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Json => json(&report)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(if decision.is_retract() {
        EXIT_RETRACT
    } else {
        EXIT_NOT_RETRACT
    })
}

fn cmd_graph(p: &Poset, which: Which, pattern: &PatternArgs) -> Result<String, CliError> {
    if which == Which::F {
        let g = build_f_graph(p, &bundle_family(p));
        return Ok(export_dot(&g, |x| p.name(x)));
    }
    let z = resolve(p, pattern)?;
    let (sub, c) = pattern_in(p, z)?;
    let g = match which {
        Which::C => build_c_graph(&c),
        _ => build_c_max(&c),
    };
    Ok(export_dot(&g, |k| p.name(sub.to_host[k])))
}

fn cmd_verify(
    bounds: &Bounds,
    inject_fault: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    let results = verify::run(bounds, inject_fault);
    let mut failed = false;
    for r in &results {
        writeln!(out, "{r}")?;
        if !r.passed() {
            failed = true;
            if let Some(text) = &r.counterexample {
                writeln!(err, "counterexample for criterion {}:\n{text}", r.criterion)?;
            }
        }
    }
    Ok(if failed { 1 } else { 0 })
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Analyze { file, format } => {
            let report = analyze(&load(&file)?);
            let text = match format {
                OutputFormat::Text => report.to_text(),
                OutputFormat::Json => json(&report)?,
            };
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::Decide {
            file,
            pattern,
            witness,
            format,
        } => cmd_decide(&load(&file)?, &pattern, witness.as_deref(), format, out),
        Command::Graph {
            file,
            which,
            pattern,
            out: path,
        } => {
            let dot = cmd_graph(&load(&file)?, which, &pattern)?;
            emit(out, path.as_deref(), &dot)?;
            Ok(0)
        }
        Command::Verify {
            max_points,
            random,
            seed,
            inject_fault,
        } => {
            let mut bounds = match (max_points, random) {
                (None, None) => Bounds::default(),
                (n, r) => Bounds::capped(
                    n.unwrap_or(usize::MAX),
                    r.unwrap_or(Bounds::default().random_posets),
                ),
            };
            if let Some(seed) = seed {
                bounds.seed = seed;
            }
            cmd_verify(&bounds, inject_fault, out, err)
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_ERROR;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(CliError(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}
