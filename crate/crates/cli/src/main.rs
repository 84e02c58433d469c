use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use seymour_core::search::{sample_rng, DEFAULT_CEILING, MAX_ENUMERABLE_N};
use seymour_core::{
    build_product, is_valid_second_factor, parse_digraph, render_json, run_filter, run_search,
    write_digraph, write_labeling, Digraph, Model, SearchSpec,
};

/// Exit status when a search turns up a counterexample or filter survivor.
const FOUND_EXIT: u8 = 2;

#[derive(Parser)]
#[command(name = "seymour", version, about = "Second-neighborhood analysis and search for digon-free digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-vertex |N1|, |N2|, anti-satisfaction and satisfactory flag.
    Analyze {
        file: PathBuf,
        /// Emit JSON instead of the text table.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the minimal-counterexample conditions with witnesses.
    Filter {
        file: PathBuf,
        /// Evaluate every condition even after a failure.
        #[arg(long)]
        no_short_circuit: bool,
    },
    /// Build the product of D and H.
    Product {
        d_file: PathBuf,
        h_file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Also write the `product d h` labeling table here.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Exhaustive or random search for graphs with no satisfactory vertex.
    Search {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long)]
        count: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        max_retries: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Only test for a satisfactory vertex; skip conditions 1 through 7.
        #[arg(long)]
        no_filter: bool,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: usize,
        /// Leave `elapsed_ms` out of the report.
        #[arg(long)]
        omit_timing: bool,
    },
    /// Emit one randomly generated graph.
    Generate {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        max_retries: u32,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Tournament,
    DigonFree,
    Acyclic,
    TriangleFree,
}

impl ModelArg {
    fn with(self, p: f64, max_retries: u32) -> Model {
        match self {
            ModelArg::Tournament => Model::Tournament,
            ModelArg::DigonFree => Model::DigonFree { p },
            ModelArg::Acyclic => Model::Acyclic { p },
            ModelArg::TriangleFree => Model::TriangleFree { p, max_retries },
        }
    }
}

fn read_graph(path: &Path) -> Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_digraph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn analyze(file: &Path, as_json: bool) -> Result<()> {
    let g = read_graph(file)?;
    let profiles = g.profiles();
    let satisfactory = profiles.iter().filter(|p| p.satisfactory).count();
    if as_json {
        let doc = json!({
            "vertex_count": g.vertex_count(),
            "edge_count": g.edge_count(),
            "satisfactory_count": satisfactory,
            "vertices": profiles,
        });
        print!("{}", render_json(&doc));
        return Ok(());
    }
    println!("# vertex n1 n2 anti_satisfaction satisfactory");
    for p in &profiles {
        let flag = if p.satisfactory { "yes" } else { "no" };
        println!("{} {} {} {} {flag}", p.vertex, p.n1, p.n2, p.anti_satisfaction);
    }
    println!("satisfactory {satisfactory}/{}", g.vertex_count());
    Ok(())
}

fn product(d_file: &Path, h_file: &Path, output: &Path, labels: Option<&Path>) -> Result<()> {
    let d = read_graph(d_file)?;
    let h = read_graph(h_file)?;
    if !is_valid_second_factor(&h) {
        eprintln!(
            "warning: {} has a vertex with negative anti-satisfaction; counterexamples are not guaranteed to propagate",
            h_file.display()
        );
    }
    let (p, labeling) = build_product(&d, &h);
    write_file(output, &write_digraph(&p))?;
    if let Some(path) = labels {
        write_file(path, &write_labeling(&labeling))?;
    }
    println!("product: {} vertices, {} edges", p.vertex_count(), p.edge_count());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn search(
    mode: ModeArg,
    n: usize,
    model: Option<ModelArg>,
    count: Option<u64>,
    seed: Option<u64>,
    p: f64,
    max_retries: u32,
    workers: usize,
    filter: bool,
    ceiling: usize,
    omit_timing: bool,
) -> Result<ExitCode> {
    let spec = match mode {
        ModeArg::Exhaustive => {
            if ceiling > MAX_ENUMERABLE_N {
                bail!("--ceiling may not exceed {MAX_ENUMERABLE_N}");
            }
            SearchSpec::exhaustive(n).with_ceiling(ceiling)
        }
        ModeArg::Random => {
            let Some(model) = model else { bail!("random mode needs --model") };
            let Some(count) = count else { bail!("random mode needs --count") };
            let Some(seed) = seed else { bail!("random mode needs an explicit --seed") };
            SearchSpec::random(model.with(p, max_retries), n, count, seed)
        }
    };
    let report = run_search(&spec.with_workers(workers).with_filter(filter))?;
    let found = report.found_anything();
    let report = if omit_timing { report.without_timing() } else { report };
    print!("{}", render_json(&report));
    Ok(if found {
        ExitCode::from(FOUND_EXIT)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { file, json } => analyze(&file, json)?,
        Command::Filter {
            file,
            no_short_circuit,
        } => {
            let g = read_graph(&file)?;
            print!("{}", render_json(&run_filter(&g, !no_short_circuit)));
        }
        Command::Product {
            d_file,
            h_file,
            output,
            labels,
        } => product(&d_file, &h_file, &output, labels.as_deref())?,
        Command::Search {
            mode,
            n,
            model,
            count,
            seed,
            p,
            max_retries,
            workers,
            no_filter,
            ceiling,
            omit_timing,
        } => {
            return search(
                mode,
                n,
                model,
                count,
                seed,
                p,
                max_retries,
                workers,
                !no_filter,
                ceiling,
                omit_timing,
            )
        }
        Command::Generate {
            model,
            n,
            seed,
            p,
            max_retries,
            output,
        } => {
            let model = model.with(p, max_retries);
            model.validate()?;
            let g = model.generate(n, &mut sample_rng(seed, 0))?;
            let text = write_digraph(&g);
            match output {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
