//! Command-line front end for the mirror-symmetric rigidity toolkit.
//!
//! Exit codes: 0 for success (and for positive verdicts), 1 when the input is
//! well-formed but the answer is negative or a construction gives up, 2 for
//! unreadable or unparseable input, 3 when the independent rigidity routes
//! contradict each other.

mod svg;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use refrig_core::corpus::{self, Provenance};
use refrig_core::decomposition::{decompose_tree_map, find_ross_circuits};
use refrig_core::direction_network::{
    classify, collapse_directions, random_directions, realization_space, special_pair,
    RealizationSpace,
};
use refrig_core::io::{emit_directions, emit_graph, parse_directions, parse_graph};
use refrig_core::rigidity::{certify, random_placement};
use refrig_core::sparsity::{check_counts, is_member};
use refrig_core::{CertificationReport, ColoredGraph, Error, Family, Vec2, Q};

#[derive(Parser)]
#[command(
    name = "refrig",
    version,
    about = "Decide generic rigidity of frameworks symmetric about a mirror line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the counted sparsity check on a quotient graph.
    Check {
        /// Graph file.
        file: PathBuf,
        /// Sparsity family to check against.
        #[arg(long, default_value = "reflection-laman")]
        family: Family,
        /// On failure, print the violating edge set.
        #[arg(long)]
        witness: bool,
    },
    /// Split a tight graph into a spanning tree and an unbalanced map graph.
    Decompose {
        /// Graph file.
        file: PathBuf,
    },
    /// Contract every Ross-circuit and print the reduced quotient graph.
    Reduce {
        /// Graph file.
        file: PathBuf,
    },
    /// Emit a direction assignment for the edges of a graph.
    Directions {
        /// Graph file.
        file: PathBuf,
        /// How the directions are chosen.
        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,
        /// Seed for the sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve a direction network and classify its realization space.
    Solve {
        /// Graph file.
        graph: PathBuf,
        /// Directions file, one `index x y` line per edge.
        directions: PathBuf,
        /// Draw a witness realization (faithful when one exists).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Cross-check the counting, rank, and direction-network verdicts.
    Certify {
        /// Graph file.
        file: PathBuf,
        /// Seed for placements and direction sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Draw the certifying realization.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Grow a random member of a sparsity family.
    Generate {
        /// Number of vertices.
        #[arg(long)]
        vertices: usize,
        /// Target family.
        #[arg(long, default_value = "reflection-laman")]
        family: Family,
        /// Seed for the growth process.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the membership table for the built-in graph corpus.
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Independent uniform directions.
    Random,
    /// Directions whose realizations all sit on the mirror line.
    Collapse,
    /// The primal half of a special pair.
    Special,
}

enum CliError {
    Core(Error),
    File { path: PathBuf, msg: String },
}

impl From<Error> for CliError {
    fn from(err: Error) -> CliError {
        CliError::Core(err)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(err) => write!(f, "{err}"),
            CliError::File { path, msg } => write!(f, "{}: {msg}", path.display()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::File { .. } => 2,
            CliError::Core(err) => match err {
                Error::Parse { .. } | Error::InvalidEdge { .. } | Error::TooManyEdges { .. } => 2,
                Error::InternalDisagreement { .. } => 3,
                _ => 1,
            },
        }
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Die quietly when the reader of a pipe goes away instead of panicking in
/// `println!`.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Check {
            file,
            family,
            witness,
        } => cmd_check(&file, family, witness),
        Command::Decompose { file } => cmd_decompose(&file),
        Command::Reduce { file } => cmd_reduce(&file),
        Command::Directions { file, mode, seed } => cmd_directions(&file, mode, seed),
        Command::Solve {
            graph,
            directions,
            svg,
        } => cmd_solve(&graph, &directions, svg.as_deref()),
        Command::Certify {
            file,
            seed,
            json,
            svg,
        } => cmd_certify(&file, seed, json.as_deref(), svg.as_deref()),
        Command::Generate {
            vertices,
            family,
            seed,
        } => cmd_generate(vertices, family, seed),
        Command::Oracle => cmd_oracle(),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|err| CliError::File {
        path: path.to_path_buf(),
        msg: err.to_string(),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|err| CliError::File {
        path: path.to_path_buf(),
        msg: err.to_string(),
    })
}

fn read_graph(path: &Path) -> Result<ColoredGraph, CliError> {
    let text = read_file(path)?;
    Ok(parse_graph(&text)?)
}

fn join_indices(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
    parts.join(" ")
}

fn cmd_check(path: &Path, family: Family, witness: bool) -> Result<u8, CliError> {
    let g = read_graph(path)?;
    let report = check_counts(&g, family)?;
    match &report.witness {
        None => {
            println!("{family}: PASS");
            Ok(0)
        }
        Some(w) => {
            println!("{family}: FAIL");
            if witness {
                println!("violating edges: {}", join_indices(&w.edges.indices()));
                println!(
                    "{} edges on {} vertices ({} unbalanced, {} balanced components), bound {}",
                    w.edge_count, w.spanned, w.unbalanced, w.balanced, w.bound
                );
            }
            Ok(1)
        }
    }
}

fn cmd_decompose(path: &Path) -> Result<u8, CliError> {
    let g = read_graph(path)?;
    let dec = decompose_tree_map(&g)?;
    println!("tree: {}", join_indices(&dec.tree.indices()));
    println!("map: {}", join_indices(&dec.map_part.indices()));
    let gains: Vec<String> = dec
        .recolored
        .edges()
        .iter()
        .map(|e| e.gain.bit().to_string())
        .collect();
    println!("switched gains: {}", gains.join(" "));
    Ok(0)
}

fn cmd_reduce(path: &Path) -> Result<u8, CliError> {
    let g = read_graph(path)?;
    let dec = find_ross_circuits(&g)?;
    println!("# contraction map: {}", join_indices(&dec.contraction_map));
    for (reduced_index, original) in dec.surviving.iter().enumerate() {
        println!("# edge {reduced_index}: original edge {original}");
    }
    for reduced_index in dec.surviving.len()..dec.reduced.edge_count() {
        println!("# edge {reduced_index}: loop for a contracted circuit");
    }
    print!("{}", emit_graph(&dec.reduced));
    Ok(0)
}

fn cmd_directions(path: &Path, mode: Mode, seed: u64) -> Result<u8, CliError> {
    let g = read_graph(path)?;
    let directions = match mode {
        Mode::Random => random_directions(&g, seed),
        Mode::Collapse => collapse_directions(&g, seed)?,
        Mode::Special => special_pair(&g, seed)?.directions,
    };
    print!("{}", emit_directions(&directions));
    Ok(0)
}

fn cmd_solve(
    graph_path: &Path,
    directions_path: &Path,
    svg_out: Option<&Path>,
) -> Result<u8, CliError> {
    let g = read_graph(graph_path)?;
    let text = read_file(directions_path)?;
    let directions = parse_directions(&text, g.edge_count())?;
    let space = realization_space(&g, &directions)?;
    let class = classify(&g, &directions)?;
    println!("rank: {}", space.rank);
    println!("dimension: {}", space.dimension());
    let label = if class.faithful_exists {
        "faithful"
    } else if class.collapsed_only {
        "collapsed"
    } else {
        "mixed"
    };
    println!("classification: {label}");
    if let Some(out) = svg_out {
        let points = match &class.witness {
            Some(points) => points.clone(),
            None => basis_points(&g, &space),
        };
        write_file(out, &svg::document(&g, &points))?;
    }
    Ok(0)
}

fn basis_points(g: &ColoredGraph, space: &RealizationSpace) -> Vec<Vec2> {
    match space.basis.first() {
        Some(vector) => vector
            .chunks(2)
            .map(|pair| Vec2 {
                x: pair[0].clone(),
                y: pair[1].clone(),
            })
            .collect(),
        None => vec![Vec2::zero(); g.vertex_count()],
    }
}

fn cmd_certify(
    path: &Path,
    seed: u64,
    json_out: Option<&Path>,
    svg_out: Option<&Path>,
) -> Result<u8, CliError> {
    let g = read_graph(path)?;
    match certify(&g, seed) {
        Ok(report) => {
            print_certification(&report);
            emit_certification_reports(&g, &report, seed, json_out, svg_out)?;
            Ok(if report.agreement && report.combinatorial.verdict {
                0
            } else {
                1
            })
        }
        Err(Error::InternalDisagreement { report }) => {
            print_certification(&report);
            emit_certification_reports(&g, &report, seed, json_out, svg_out)?;
            eprintln!("error: the independent routes disagree; see the report");
            Ok(3)
        }
        Err(err) => Err(err.into()),
    }
}

fn emit_certification_reports(
    g: &ColoredGraph,
    report: &CertificationReport,
    seed: u64,
    json_out: Option<&Path>,
    svg_out: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(out) = json_out {
        write_file(out, &report_json(report)?)?;
    }
    if let Some(out) = svg_out {
        let points = certification_points(g, report, seed);
        write_file(out, &svg::document(g, &points))?;
    }
    Ok(())
}

fn print_certification(report: &CertificationReport) {
    println!(
        "counts: {}",
        if report.combinatorial.verdict {
            "member"
        } else {
            "not a member"
        }
    );
    if let Some(w) = &report.combinatorial.witness {
        println!("violating edges: {}", join_indices(&w.edges));
    }
    println!(
        "rank: {} of {} ({})",
        report.numeric.rank,
        report.numeric.target,
        if report.numeric.minimal {
            "minimally rigid"
        } else {
            "not minimally rigid"
        }
    );
    println!(
        "special pair: {}",
        if report.special_pair.is_some() {
            "constructed"
        } else {
            "none"
        }
    );
    println!("agreement: {}", if report.agreement { "yes" } else { "no" });
}

fn report_json(report: &CertificationReport) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|err| CliError::Core(Error::Internal(err.to_string())))?;
    text.push('\n');
    Ok(text)
}

fn certification_points(g: &ColoredGraph, report: &CertificationReport, seed: u64) -> Vec<Vec2> {
    match &report.special_pair {
        Some(pair) => pair
            .realization
            .iter()
            .map(|[x, y]| Vec2 {
                x: parse_reported_rational(x),
                y: parse_reported_rational(y),
            })
            .collect(),
        None => random_placement(g, seed),
    }
}

fn parse_reported_rational(text: &str) -> Q {
    text.parse().expect("report rationals round-trip")
}

fn cmd_generate(vertices: usize, family: Family, seed: u64) -> Result<u8, CliError> {
    let g = corpus::generate(vertices, seed, family)?;
    print!("{}", emit_graph(&g));
    Ok(0)
}

fn cmd_oracle() -> Result<u8, CliError> {
    for entry in corpus::corpus() {
        let mut families = Vec::new();
        for family in Family::ALL {
            if is_member(&entry.graph, family)? {
                families.push(family.name());
            }
        }
        let provenance = match entry.provenance {
            Provenance::Analytic => "analytic".to_string(),
            Provenance::Generated { seed } => format!("generated(seed {seed})"),
        };
        let memberships = if families.is_empty() {
            "-".to_string()
        } else {
            families.join(" ")
        };
        println!(
            "{} [{}] n={} m={}: {}",
            entry.name,
            provenance,
            entry.graph.vertex_count(),
            entry.graph.edge_count(),
            memberships
        );
    }
    Ok(0)
}
