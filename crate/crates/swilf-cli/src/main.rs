//! Command-line front end for the pattern-avoidance toolkit.

mod cache;
mod error;
mod output;
mod suites;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use swilf::count::{Counter, CounterConfig, WilfComparison};
use swilf::limits::{bound_report, AlgebraicValue};
use swilf::merge::{build_witness, WitnessParams};
use swilf::perm::{tower_pattern, BlockSpec, Decomposability, LayerComposition, Permutation};

use cache::CacheFile;
use error::CliError;
use output::{sig10, Format, Table};

#[derive(Parser)]
#[command(
    name = "swilf",
    version,
    about = "Exact pattern-avoidance counts and Stanley-Wilf growth bounds",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource ceiling."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Line-delimited JSON count cache to read and write through.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Worker threads for counting; 0 uses all available cores.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Overrides every resource ceiling (counting, enumeration, witnesses).
    #[arg(long, global = true, value_name = "N")]
    ceiling: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Lifts the resource ceilings entirely.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of n-permutations avoiding a pattern.
    Count {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        /// Refine the count by the number of left-to-right minima.
        #[arg(long)]
        by_lr_minima: bool,
    },
    /// List the avoiders of a pattern in lexicographic order.
    Avoiders {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
    },
    /// Structural classification of a pattern.
    Classify {
        #[arg(long)]
        pattern: String,
    },
    /// Compare the avoidance counts of two patterns for all n up to a bound.
    Wilf {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        versus: String,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Growth-rate report: closed form, finite lower bound, upper chain.
    Limit {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Build one of the pattern constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Layered,
    Bwx,
    Recprop,
    Supermult,
    Witness,
    Narayana,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Add 1 to each entry and prepend 1.
    Qprime {
        #[arg(long)]
        pattern: String,
    },
    /// Prepend 1 and append k+2 around the shifted pattern.
    Sandwich {
        #[arg(long)]
        pattern: String,
    },
    /// The pattern 1 2 ... (k-3) (k-1) k (k-2).
    Qk {
        #[arg(long)]
        k: usize,
    },
    /// The layered pattern with the given layer lengths.
    Layered {
        /// Comma-separated layer lengths, e.g. 3,4.
        #[arg(long)]
        layers: String,
    },
    /// The block-structured permutation over the given blocks.
    Block {
        /// One pattern per flag, leftmost block first.
        #[arg(long = "block", required = true)]
        blocks: Vec<String>,
    },
    /// A lower-bound witness from a 123-avoiding base and block patterns.
    Witness {
        /// The 123-avoiding base permutation.
        #[arg(long)]
        base: String,
        /// The buffer/block size.
        #[arg(long)]
        block_size: usize,
        /// One block pattern per flag, sized by the cutting rule.
        #[arg(long = "block", required = true)]
        blocks: Vec<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn parse_pattern(text: &str) -> Result<Permutation, CliError> {
    Ok(Permutation::from_str(text)?)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut cfg = CounterConfig { workers: cli.workers, ..Default::default() };
    if let Some(ceiling) = cli.ceiling {
        cfg.count_ceiling = ceiling;
        cfg.enum_ceiling = ceiling;
        cfg.witness_ceiling = ceiling;
    }
    if cli.force {
        cfg.count_ceiling = usize::MAX;
        cfg.enum_ceiling = usize::MAX;
        cfg.witness_ceiling = usize::MAX;
        cfg.composite_limit = usize::MAX;
    }
    let counter = Counter::new(cfg).map_err(CliError::from)?;

    let mut cache_file = cli.cache.map(CacheFile::new);
    if let Some(cache) = cache_file.as_mut() {
        counter.seed_table(&cache.load());
    }

    let (table, ok) = dispatch(&cli.command, &counter)?;
    print!("{}", table.render(cli.format));

    if let Some(cache) = cache_file.as_ref() {
        if let Err(e) = cache.append_new(&counter.table_snapshot(), swilf::engine_version()) {
            eprintln!("warning: could not write the count cache: {e}");
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn dispatch(command: &Command, counter: &Counter) -> Result<(Table, bool), CliError> {
    match command {
        Command::Count { pattern, n, by_lr_minima } => {
            let q = parse_pattern(pattern)?;
            if *by_lr_minima {
                let dist = counter.count_by_lr_minima(&q, *n)?;
                let mut table = Table::new(&["pattern", "n", "m", "count"]);
                for (m, count) in dist.iter() {
                    table.push(vec![
                        q.canonical_string(),
                        n.to_string(),
                        m.to_string(),
                        count.to_string(),
                    ]);
                }
                Ok((table, true))
            } else {
                let count = counter.count_avoiders(&q, *n)?;
                let mut table = Table::new(&["pattern", "n", "count"]);
                table.push(vec![q.canonical_string(), n.to_string(), count.to_string()]);
                table.scalar = Some(count.to_string());
                Ok((table, true))
            }
        }
        Command::Avoiders { pattern, n } => {
            let q = parse_pattern(pattern)?;
            let mut table = Table::new(&["permutation"]);
            for a in counter.enumerate_avoiders(&q, *n)? {
                table.push(vec![a.canonical_string()]);
            }
            Ok((table, true))
        }
        Command::Classify { pattern } => {
            let q = parse_pattern(pattern)?;
            Ok((classify_table(&q), true))
        }
        Command::Wilf { pattern, versus, max_n } => {
            let q1 = parse_pattern(pattern)?;
            let q2 = parse_pattern(versus)?;
            let verdict = counter.wilf_equivalent_upto(&q1, &q2, *max_n)?;
            let mut table = Table::new(&["n", "count_first", "count_second", "verdict"]);
            match verdict {
                WilfComparison::Agree { upto } => {
                    for n in 0..=upto {
                        let c = counter.count_avoiders(&q1, n)?;
                        table.push(vec![
                            n.to_string(),
                            c.to_string(),
                            c.to_string(),
                            "equal".into(),
                        ]);
                    }
                }
                WilfComparison::Disagree { n, first, second } => {
                    for i in 0..n {
                        let c = counter.count_avoiders(&q1, i)?;
                        table.push(vec![i.to_string(), c.to_string(), c.to_string(), "equal".into()]);
                    }
                    table.push(vec![
                        n.to_string(),
                        first.to_string(),
                        second.to_string(),
                        "differ".into(),
                    ]);
                }
            }
            Ok((table, true))
        }
        Command::Verify { suite, max_n } => {
            let report = match suite {
                Suite::Layered => suites::layered(counter, *max_n)?,
                Suite::Bwx => suites::bwx(counter, *max_n)?,
                Suite::Recprop => {
                    suites::recprop(*max_n, counter.config().count_ceiling)?
                }
                Suite::Supermult => suites::supermult(counter, *max_n)?,
                Suite::Witness => suites::witness(counter, *max_n)?,
                Suite::Narayana => suites::narayana(counter, *max_n)?,
            };
            Ok((report.table, report.ok))
        }
        Command::Limit { pattern, max_n } => {
            let q = parse_pattern(pattern)?;
            let report = bound_report(counter, &q, *max_n)?;
            let mut table = Table::new(&["field", "value"]);
            let closed_text = report
                .closed_form
                .as_ref()
                .map(AlgebraicValue::to_string)
                .unwrap_or_else(|| "unknown".into());
            let closed_decimal = report
                .closed_form
                .as_ref()
                .map(|v| sig10(v.to_f64()))
                .unwrap_or_default();
            table.push(vec!["pattern".into(), q.canonical_string()]);
            table.push(vec!["closed_form".into(), closed_text]);
            table.push(vec!["closed_form_decimal".into(), closed_decimal]);
            table.push(vec!["finite_lower".into(), sig10(report.finite_lower.best)]);
            table.push(vec![
                "finite_lower_witness_n".into(),
                report.finite_lower.witness_n.to_string(),
            ]);
            match &report.upper_chain {
                Some(chain) => {
                    table.push(vec!["upper_chain".into(), chain.value().to_string()]);
                    table.push(vec![
                        "upper_chain_decimal".into(),
                        sig10(chain.value().to_f64()),
                    ]);
                    table.push(vec![
                        "upper_chain_base".into(),
                        chain.base.canonical_string(),
                    ]);
                    let mut trace = vec![chain.base_value.to_string()];
                    trace.extend(chain.steps.iter().map(AlgebraicValue::to_string));
                    table.push(vec!["upper_chain_trace".into(), trace.join(" -> ")]);
                }
                None => {
                    table.push(vec!["upper_chain".into(), "none".into()]);
                }
            }
            table.push(vec!["valtr_floor".into(), sig10(report.valtr_floor)]);
            Ok((table, true))
        }
        Command::Construct { kind } => {
            let (q, note) = construct(kind)?;
            let mut table = Table::new(&["permutation"]);
            table.push(vec![q.canonical_string()]);
            table.scalar = Some(q.canonical_string());
            if let Some(note) = note {
                eprintln!("note: {note}");
            }
            Ok((table, true))
        }
    }
}

fn construct(kind: &ConstructKind) -> Result<(Permutation, Option<String>), CliError> {
    match kind {
        ConstructKind::Qprime { pattern } => Ok((parse_pattern(pattern)?.prepend_one(), None)),
        ConstructKind::Sandwich { pattern } => Ok((parse_pattern(pattern)?.sandwich(), None)),
        ConstructKind::Qk { k } => Ok((tower_pattern(*k)?, None)),
        ConstructKind::Layered { layers } => {
            let lengths: Result<Vec<usize>, _> =
                layers.split(',').map(|t| t.trim().parse::<usize>()).collect();
            let lengths =
                lengths.map_err(|_| CliError::Usage(format!("bad layer list '{layers}'")))?;
            let comp = LayerComposition::new(lengths)?;
            Ok((comp.to_permutation(), None))
        }
        ConstructKind::Block { blocks } => {
            let parsed: Result<Vec<Permutation>, CliError> =
                blocks.iter().map(|b| parse_pattern(b)).collect();
            let spec = BlockSpec::new(parsed?)?;
            Ok((spec.to_permutation(), None))
        }
        ConstructKind::Witness { base, block_size, blocks } => {
            let base = parse_pattern(base)?;
            let parsed: Result<Vec<Permutation>, CliError> =
                blocks.iter().map(|b| parse_pattern(b)).collect();
            let spec = BlockSpec::new(parsed?)?;
            let params = WitnessParams::new(base, *block_size, spec)?;
            let witness = build_witness(&params)?;
            let note = (!witness.minima_preserved)
                .then(|| "the block replacement shifted the minima profile".to_string());
            Ok((witness.permutation, note))
        }
    }
}

fn classify_table(q: &Permutation) -> Table {
    let mut table = Table::new(&["property", "value"]);
    table.push(vec!["pattern".into(), q.canonical_string()]);
    table.push(vec!["length".into(), q.len().to_string()]);
    let decomposability = match q.decomposability() {
        Decomposability::Indecomposable => "indecomposable".to_string(),
        Decomposability::DecomposableAt(cuts) => format!(
            "decomposable-at {}",
            cuts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        ),
    };
    table.push(vec!["decomposability".into(), decomposability]);
    table.push(vec![
        "sum_indecomposable".into(),
        q.is_sum_indecomposable().to_string(),
    ]);
    let layers = match q.layers() {
        Some(c) => c
            .lengths()
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(","),
        None => "not-layered".into(),
    };
    table.push(vec!["layers".into(), layers]);
    table.push(vec![
        "reverse_complement".into(),
        q.reverse_complement().canonical_string(),
    ]);
    if let Ok(minima) = q.lr_minima() {
        table.push(vec![
            "minima_positions".into(),
            minima.positions().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
        ]);
        table.push(vec![
            "minima_values".into(),
            minima.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        ]);
        let remaining = q.remaining_string();
        table.push(vec![
            "remaining_raw".into(),
            remaining.raw.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        ]);
        table.push(vec![
            "remaining_flattened".into(),
            remaining.flattened.canonical_string(),
        ]);
    }
    table
}
