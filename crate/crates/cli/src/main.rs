//! `psiarr`: decide supersolvability of weighted-graph arrangements,
//! compute characteristic polynomials, export intersection lattices,
//! and scan instance families.

mod instance;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use instance::InstanceFile;
use psi_arrangements::analysis::{self, factored_string, integer_root_factorization};
use psi_arrangements::lattice::DEFAULT_FLAT_LIMIT;
use psi_arrangements::{Arrangement, IntersectionLattice, PsiGraph, ScanParams};

#[derive(Parser)]
#[command(
    name = "psiarr",
    version,
    about = "Exact analysis of weighted-graph hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Refuse to enumerate intersection posets with more flats than this.
    #[arg(long, global = true, default_value_t = DEFAULT_FLAT_LIMIT)]
    flat_limit: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide supersolvability; exit 0 if supersolvable, 1 if not.
    Check {
        /// Instance file (JSON).
        file: PathBuf,
        /// Also build the cone intersection lattice, decide again by
        /// modular-chain search, and verify the two answers agree.
        #[arg(long)]
        oracle: bool,
        /// With the lattice built, additionally re-run the chain search
        /// by exhaustive enumeration and check it concurs.
        #[arg(long, requires = "oracle")]
        exhaustive: bool,
        /// Write the instance back out in normalized form.
        #[arg(long, value_name = "PATH")]
        emit_normalized: Option<PathBuf>,
        /// Print the full report as JSON (implies --oracle).
        #[arg(long)]
        json: bool,
    },
    /// Print the characteristic polynomial.
    Charpoly {
        file: PathBuf,
        /// Use the coned arrangement instead of the affine one.
        #[arg(long)]
        cone: bool,
    },
    /// Export the cone intersection lattice as a DOT diagram.
    Lattice {
        file: PathBuf,
        /// Write the diagram here instead of stdout.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Classify every small instance within the given bounds.
    Scan {
        /// Largest vertex count.
        #[arg(long)]
        max_n: usize,
        /// Comma-separated weight pool, e.g. "1,2" or "1,1/2".
        #[arg(long, default_value = "1,2")]
        pool: String,
        /// Largest number of weights per vertex.
        #[arg(long, default_value_t = 1)]
        max_psi: usize,
        /// Write the full report as JSON here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Classify one instance at a time instead of in parallel.
        #[arg(long)]
        serial: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            file,
            oracle,
            exhaustive,
            emit_normalized,
            json,
        } => {
            let graph = load(&file)?;
            if let Some(path) = emit_normalized {
                InstanceFile::from_graph(&graph).save(&path)?;
            }
            cmd_check(&graph, oracle || json, exhaustive, json, cli.flat_limit)
        }
        Command::Charpoly { file, cone } => {
            let graph = load(&file)?;
            cmd_charpoly(&graph, cone, cli.flat_limit)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lattice { file, dot } => {
            let graph = load(&file)?;
            cmd_lattice(&graph, dot.as_deref(), cli.flat_limit)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            max_n,
            pool,
            max_psi,
            out,
            serial,
        } => {
            cmd_scan(max_n, &pool, max_psi, out.as_deref(), serial, cli.flat_limit)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &PathBuf) -> Result<PsiGraph> {
    InstanceFile::load(path)?.to_graph()
}

fn names(graph: &PsiGraph, vertices: &[usize]) -> String {
    vertices
        .iter()
        .map(|&v| graph.name(v).to_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_check(
    graph: &PsiGraph,
    oracle: bool,
    exhaustive: bool,
    json: bool,
    flat_limit: usize,
) -> Result<ExitCode> {
    let supersolvable = if oracle {
        let report = analysis::classify(graph, flat_limit)
            .context("classification failed")?;
        if exhaustive {
            let coned = Arrangement::build_affine(graph)
                .cone()
                .expect("fresh affine arrangements cone");
            let lattice = IntersectionLattice::build_with_limit(&coned, flat_limit)?;
            let brute = lattice.modular_maximal_chain_exhaustive()?;
            anyhow::ensure!(
                brute.is_some() == report.supersolvable,
                "exhaustive chain enumeration contradicts the main searches"
            );
        }
        if json {
            println!("{}", serde_json::to_string_pretty(&report)?);
        } else {
            print_oracle_report(graph, &report, exhaustive);
        }
        report.supersolvable
    } else {
        print_greedy_report(graph)
    };
    Ok(if supersolvable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// The fast path: greedy elimination only, no lattice.
fn print_greedy_report(graph: &PsiGraph) -> bool {
    println!(
        "instance: {} vertices, {} edges, {} hyperplanes",
        graph.n(),
        graph.edges().len(),
        graph.hyperplane_count()
    );
    match graph.chordality() {
        psi_arrangements::Chordality::Chordal(_) => println!("chordal: yes"),
        psi_arrangements::Chordality::NotChordal(cycle) => {
            println!(
                "chordal: no (chordless cycle {})",
                names(graph, &cycle)
            );
        }
    }
    match graph.try_psi_elimination_order() {
        Ok(certificate) => {
            println!("elimination order: {}", names(graph, &certificate.order));
            let exponents = analysis::exponents(graph, &certificate)
                .expect("fresh certificates verify");
            println!(
                "exponents: {}",
                exponents
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!("supersolvable: yes");
            true
        }
        Err(blocked) => {
            println!(
                "elimination blocked with {} vertices remaining: {}",
                blocked.remaining.len(),
                names(graph, &blocked.remaining)
            );
            for b in &blocked.weight_blocked {
                println!(
                    "  {} is simplicial but its weights are not contained in those of {}",
                    graph.name(b.vertex),
                    graph.name(b.blocking_neighbor)
                );
            }
            if let Some((u, v)) = graph.nonfree_edge_witness() {
                println!(
                    "incomparable weights on edge ({}, {}): the arrangement is not free",
                    graph.name(u),
                    graph.name(v)
                );
            }
            println!("supersolvable: no");
            false
        }
    }
}

fn print_oracle_report(
    graph: &PsiGraph,
    report: &analysis::ClassifyReport,
    exhaustive: bool,
) {
    println!(
        "instance: {} vertices, {} edges, {} hyperplanes",
        graph.n(),
        report.edges.len(),
        report.hyperplanes.len()
    );
    match &report.chordless_cycle {
        None => println!("chordal: yes"),
        Some(cycle) => println!("chordal: no (chordless cycle {})", names(graph, cycle)),
    }
    match &report.elimination_order {
        Some(order) => {
            println!("elimination order: {}", names(graph, order));
            if let Some(exponents) = &report.exponents {
                println!(
                    "exponents: {}",
                    exponents
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
        }
        None => {
            if let Some(blocked) = &report.blocked_vertices {
                for (v, u) in blocked {
                    println!(
                        "{} is simplicial but its weights are not contained in those of {}",
                        graph.name(*v),
                        graph.name(*u)
                    );
                }
            }
        }
    }
    println!(
        "lattice oracle: {} affine flats, {} cone flats, both searches agree",
        report.affine_flats, report.cone_flats
    );
    if exhaustive {
        println!("exhaustive chain enumeration: agrees");
    }
    if let Some(chain) = &report.oracle_chain {
        println!("modular maximal chain:");
        for step in chain {
            println!("  {step}");
        }
    }
    println!(
        "characteristic polynomial: {}",
        report.characteristic_polynomial
    );
    if let Some(factored) = &report.factored {
        println!("splits as: {factored}");
    }
    if let Some((u, v)) = report.nonfree_edge {
        println!(
            "incomparable weights on edge ({}, {})",
            graph.name(u),
            graph.name(v)
        );
    }
    println!("supersolvable: {}", if report.supersolvable { "yes" } else { "no" });
    println!("verdict: {}", report.verdict);
}

fn cmd_charpoly(graph: &PsiGraph, cone: bool, flat_limit: usize) -> Result<()> {
    let mut arrangement = Arrangement::build_affine(graph);
    if cone {
        arrangement = arrangement.cone().expect("fresh affine arrangements cone");
    }
    let lattice = IntersectionLattice::build_with_limit(&arrangement, flat_limit)?;
    let chi = lattice.characteristic_polynomial();
    let plain = chi.to_string();
    match integer_root_factorization(&chi) {
        Some(roots) => {
            let factored = factored_string(&roots);
            if factored == plain {
                println!("{plain}");
            } else {
                println!("{plain} = {factored}");
            }
        }
        None => println!("{plain}   (does not split over the integers)"),
    }
    Ok(())
}

fn cmd_lattice(graph: &PsiGraph, dot: Option<&std::path::Path>, flat_limit: usize) -> Result<()> {
    let coned = Arrangement::build_affine(graph)
        .cone()
        .expect("fresh affine arrangements cone");
    let lattice = IntersectionLattice::build_with_limit(&coned, flat_limit)?;
    let rendered = lattice.to_dot();
    match dot {
        Some(path) => {
            std::fs::write(path, rendered)
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("wrote {} flats to {}", lattice.len(), path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_scan(
    max_n: usize,
    pool: &str,
    max_psi: usize,
    out: Option<&std::path::Path>,
    serial: bool,
    flat_limit: usize,
) -> Result<()> {
    anyhow::ensure!(max_n >= 1, "--max-n must be at least 1");
    anyhow::ensure!(max_n <= 6, "--max-n above 6 is not supported (growth is astronomical)");
    let pool = ScanParams::parse_pool(pool)?;
    let mut params = ScanParams::new(max_n, pool, max_psi);
    params.flat_limit = flat_limit;
    params.parallel = !serial;
    let report = analysis::scan(&params)?;
    print!("{}", analysis::render_scan_table(&report));
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote JSON report to {}", path.display());
    }
    Ok(())
}
