use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use golay3::catalog::{parse_shape, ArrayMethod, CatalogStore, Pruning, StoreOptions};
use golay3::construct::{default_seeds, parse_triad_lines, Seed};
use golay3_cli::tables::{self, Table};
use golay3_cli::{appendix_lines, explain_json, run_explain, search, verify, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "golay3", version, about = "Catalogs of 3-phase Golay sequence and array triads")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Fail instead of computing catalogs missing from the cache.
    #[arg(long, global = true)]
    no_compute: bool,
    #[arg(long, global = true, value_enum, default_value_t = PruningArg::On)]
    symmetry_pruning: PruningArg,
    /// How array catalogs are obtained.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum PruningArg {
    On,
    Off,
    /// Run pruned and unpruned searches and require the same classes.
    Validate,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Auto,
    Derive,
    Direct,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the catalog of one shape and print its summary.
    Search {
        #[arg(long)]
        shape: String,
        /// Write the catalog as JSON lines.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print a count table: 1 sequences, 2 arrays, 3 unexplained classes.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Largest length or product of extents.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed file for table 3 (default: the bundled seeds).
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// Re-check every record of a catalog file.
    Verify { file: PathBuf },
    /// Find which classes the constructions reach from the seeds.
    Explain {
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the construction graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write unexplained representatives as plain-digit lines.
        #[arg(long)]
        appendix: Option<PathBuf>,
    },
}

fn store(cli: &Cli) -> CatalogStore {
    let mut options = StoreOptions::from_env();
    options.compute = !cli.no_compute;
    options.pruning = match cli.symmetry_pruning {
        PruningArg::On => Pruning::On,
        PruningArg::Off => Pruning::Off,
        PruningArg::Validate => Pruning::Validate,
    };
    options.array_method = match cli.method {
        MethodArg::Auto => ArrayMethod::Auto,
        MethodArg::Derive => ArrayMethod::Derive,
        MethodArg::Direct => ArrayMethod::Direct,
    };
    CatalogStore::new(options)
}

fn seeds(path: Option<&PathBuf>) -> anyhow::Result<Vec<Seed>> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(parse_triad_lines(&text).with_context(|| format!("parsing {}", p.display()))?)
        }
        None => Ok(default_seeds()),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Tsv => table.to_tsv(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&table.to_json()).expect("json")),
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()?;
    }
    let store = store(cli);
    match &cli.command {
        Command::Search { shape, out, budget } => {
            let shape = parse_shape(shape)?;
            let catalog = search(&store, &shape, *budget, out.as_deref())?;
            println!("{}", catalog.summary());
        }
        Command::Table { which, max, format, out, seeds: seed_file } => {
            let table = match which {
                1 => tables::sequence_counts(&store, *max)?,
                2 => tables::array_counts(&store, *max)?,
                _ => {
                    let shapes = tables::unexplained_shapes(&store, *max)?;
                    let report = run_explain(&store, &seeds(seed_file.as_ref())?, *max, shapes)?;
                    tables::unexplained_counts(&report, *max)
                }
            };
            emit(&render(&table, *format), out.as_ref())?;
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let v = verify(&text).with_context(|| format!("parsing {}", file.display()))?;
            for f in &v.failures {
                println!("FAIL {f}");
            }
            for s in &v.summaries {
                println!("{s}");
            }
            if !v.passed() {
                println!("{} of {} records failed", v.failures.len(), v.records);
                return Ok(false);
            }
            println!("ok: {} records", v.records);
        }
        Command::Explain { seeds: seed_file, budget, out, dot, appendix } => {
            if *budget == 0 {
                bail!("budget must be positive");
            }
            let report = run_explain(&store, &seeds(seed_file.as_ref())?, *budget, Vec::new())?;
            if let Some(p) = dot {
                fs::write(p, report.to_dot())?;
            }
            if let Some(p) = appendix {
                fs::write(p, appendix_lines(&report))?;
            }
            let json = serde_json::to_string_pretty(&explain_json(&report))?;
            emit(&format!("{json}\n"), out.as_ref())?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
