//! qwalk: walks on quivers from the command line.
//!
//! Every subcommand reads one graph — a JSON file or a built-in family
//! spec such as `complete(3)` or `cycle(5)` — and prints line-oriented
//! UTF-8. Output is deterministic; errors exit nonzero with a one-line
//! diagnostic on stderr.

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use quiver_walks::{
    cycle_rank, expand, factorize, factorize_ensemble, genfunc, genfunc_weighted, graph_to_json,
    load_graph, make_family, parse_walk, render_expr, star_height_cycles, star_height_graph,
    star_height_open, weighted_path_sum, EdgeWeights, Family, GraphData, Quiver, RenderMode,
    VertexId, DEFAULT_ENUMERATION_CAP,
};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Walks on quivers: factorization, ensembles, and exact path sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file (JSON), or a family spec: complete(n),
    /// complete_with_loops(n), cycle(n), path(n), truncated_bethe(d,r)
    #[arg(short = 'g', long = "graph")]
    graph: String,
}

#[derive(Args)]
struct PairArgs {
    /// Source vertex name
    #[arg(short = 's', long)]
    source: String,
    /// Target vertex name
    #[arg(short = 't', long)]
    target: String,
}

#[derive(Args)]
struct CharsetArgs {
    /// ASCII operators (default)
    #[arg(long, conflicts_with = "unicode")]
    ascii: bool,
    /// Unicode operators: ⊙ for nesting, ∗ and superscripts for repetition
    #[arg(long)]
    unicode: bool,
}

impl CharsetArgs {
    fn ascii(&self) -> bool {
        !self.unicode
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    /// Walks spelled as vertex sequences
    Vertex,
    /// Walks spelled as parenthesized edge tokens
    Edge,
    /// Walks spelled with the graph's edge labels
    Language,
}

impl From<Mode> for RenderMode {
    fn from(m: Mode) -> RenderMode {
        match m {
            Mode::Vertex => RenderMode::Vertex,
            Mode::Edge => RenderMode::Edge,
            Mode::Language => RenderMode::Language,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Factorize one walk into a nesting product of prime walks
    Factor {
        #[command(flatten)]
        graph: GraphArg,
        /// The walk, e.g. `133112343442333` or `(1 3 3 1)`
        #[arg(short = 'w', long)]
        walk: String,
        #[command(flatten)]
        charset: CharsetArgs,
    },
    /// Print the starred expression denoting all walks between two vertices
    Ensemble {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
        /// Rendering alphabet
        #[arg(long, value_enum, default_value_t = Mode::Vertex)]
        mode: Mode,
        #[command(flatten)]
        charset: CharsetArgs,
    },
    /// Expand the ensemble expression into explicit walks up to a length
    Expand {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
        /// Largest walk length to produce
        #[arg(short = 'L', long = "max-length")]
        max_length: usize,
        /// Abort if more walks than this would be produced
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Exact generating function counting walks between two vertices
    Genfunc {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Leading power-series coefficients of the generating function
    Series {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
        /// How many coefficients to print
        #[arg(short = 'N', long = "terms")]
        terms: usize,
    },
    /// Sum the matrix weights of every walk between two vertices
    WeightedSum {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Star height of the walk language at a vertex or between two vertices
    Starheight {
        #[command(flatten)]
        graph: GraphArg,
        /// Source vertex name
        #[arg(short = 's', long)]
        source: String,
        /// Target vertex name; omitted or equal to the source means closed
        /// walks
        #[arg(short = 't', long)]
        target: Option<String>,
    },
    /// Regular expression over edge labels for walks between two vertices
    Language {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// List every walk between two vertices up to a length
    Enumerate {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        pair: PairArgs,
        /// Largest walk length to list
        #[arg(short = 'L', long = "max-length")]
        max_length: usize,
        /// Abort if more walks than this would be listed
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Print a graph (family spec or file) as a graph file
    Family {
        #[command(flatten)]
        graph: GraphArg,
    },
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe, e.g. `qwalk ... | head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load(source: &str) -> Result<GraphData> {
    if source.contains('(') && source.ends_with(')') {
        let quiver = make_family(Family::parse(source)?)?;
        return Ok(GraphData {
            quiver,
            weights: None,
            poly_weights: EdgeWeights::new(),
        });
    }
    let text =
        fs::read_to_string(source).with_context(|| format!("cannot read graph file `{source}`"))?;
    Ok(load_graph(&text)?)
}

fn vertex(q: &Quiver, name: &str) -> Result<VertexId> {
    Ok(q.require_vertex(name)?)
}

fn pair(q: &Quiver, p: &PairArgs) -> Result<(VertexId, VertexId)> {
    Ok((vertex(q, &p.source)?, vertex(q, &p.target)?))
}

fn fmt_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Factor {
            graph,
            walk,
            charset,
        } => {
            let data = load(&graph.graph)?;
            let walk = parse_walk(&data.quiver, &walk)?;
            let tree = factorize(&walk);
            println!("{}", tree.to_text(charset.ascii()));
        }
        Command::Ensemble {
            graph,
            pair: p,
            mode,
            charset,
        } => {
            let data = load(&graph.graph)?;
            let (s, t) = pair(&data.quiver, &p)?;
            let expr = factorize_ensemble(&data.quiver, s, t)?;
            println!("{}", render_expr(&expr, mode.into(), charset.ascii())?);
        }
        Command::Expand {
            graph,
            pair: p,
            max_length,
            cap,
        } => {
            let data = load(&graph.graph)?;
            let (s, t) = pair(&data.quiver, &p)?;
            let expr = factorize_ensemble(&data.quiver, s, t)?;
            for walk in expand(&expr, max_length, cap)?.keys() {
                println!("{walk}");
            }
        }
        Command::Genfunc { graph, pair: p } => {
            let data = load(&graph.graph)?;
            let (s, t) = pair(&data.quiver, &p)?;
            let g = if data.poly_weights.is_empty() {
                genfunc(&data.quiver, s, t)?
            } else {
                genfunc_weighted(&data.quiver, s, t, &data.poly_weights)?
            };
            println!("{g}");
        }
        Command::Series {
            graph,
            pair: p,
            terms,
        } => {
            let data = load(&graph.graph)?;
            let (s, t) = pair(&data.quiver, &p)?;
            let g = if data.poly_weights.is_empty() {
                genfunc(&data.quiver, s, t)?
            } else {
                genfunc_weighted(&data.quiver, s, t, &data.poly_weights)?
            };
            let line: Vec<String> = g.series(terms)?.iter().map(|c| c.to_string()).collect();
            println!("{}", line.join(" "));
        }
        Command::WeightedSum { graph, pair: p } => {
            let data = load(&graph.graph)?;
            let Some(wq) = data.weights else {
                bail!("graph `{}` carries no matrix weights", graph.graph);
            };
            let (s, t) = pair(wq.quiver(), &p)?;
            let m = weighted_path_sum(&wq, s, t)?;
            for i in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols())
                    .map(|j| fmt_complex(m[(i, j)].re, m[(i, j)].im))
                    .collect();
                println!("{}", row.join(" "));
            }
        }
        Command::Starheight {
            graph,
            source,
            target,
        } => {
            let data = load(&graph.graph)?;
            let q = &data.quiver;
            let s = vertex(q, &source)?;
            match target {
                Some(t) if t != source => {
                    let t = vertex(q, &t)?;
                    println!("star height: {}", star_height_open(q, s, t)?);
                }
                _ => {
                    println!("star height: {}", star_height_cycles(q, s)?);
                    if q.first_one_way_edge().is_none() && q.is_connected() {
                        let report = star_height_graph(q, s)?;
                        println!("longest path length: {}", report.longest_path_length);
                        println!("witness: {}", report.witness);
                        println!("endpoint has loop: {}", report.endpoint_has_loop);
                        println!("cycle rank: {}", cycle_rank(q)?);
                    }
                }
            }
        }
        Command::Language { graph, pair: p } => {
            let data = load(&graph.graph)?;
            let (s, t) = pair(&data.quiver, &p)?;
            let expr = factorize_ensemble(&data.quiver, s, t)?;
            println!("{}", render_expr(&expr, RenderMode::Language, true)?);
        }
        Command::Enumerate {
            graph,
            pair: p,
            max_length,
            cap,
        } => {
            let data = load(&graph.graph)?;
            let (s, t) = pair(&data.quiver, &p)?;
            for walk in data.quiver.enumerate_walks(s, t, max_length, cap)? {
                println!("{walk}");
            }
        }
        Command::Family { graph } => {
            let data = load(&graph.graph)?;
            println!("{}", graph_to_json(&data.quiver));
        }
    }
    Ok(())
}
