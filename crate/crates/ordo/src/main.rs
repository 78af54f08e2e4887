use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use ordo::card::{self, CardOptions, DEFAULT_MAX_STORED};
use ordo::catalog::load_catalog;
use ordo::core::generators::{self, GenSpec, Kind, Perturbation};
use ordo::core::linalg::{self, GameRecord};
use ordo::core::lop::Method;
use ordo::core::rankability;
use ordo::core::rational::{format_rational, parse_rational, Rational};
use ordo::core::{DominanceMatrix, DEFAULT_CAP};
use ordo::ingest;
use ordo::parallel::solve_parallel;
use ordo::plot::{self, PairSelector};
use ordo::query::{self, Query};

/// Rankability analysis for dominance matrices.
#[derive(Parser)]
#[command(name = "ordo", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_method, default_value = "lop")]
    method: Method,
    /// Stop enumerating after this many optimal rankings.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Solver threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(clap::Args)]
struct CardArgs {
    #[arg(long, default_value_t = 0)]
    dataset_id: u64,
    #[arg(long, default_value = "artificial")]
    source: String,
    /// Most rankings stored in the card.
    #[arg(long, default_value_t = DEFAULT_MAX_STORED)]
    max_stored: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an artificial instance as matrix text.
    Generate {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Share of off-diagonal cells receiving noise, 0 to 100.
        #[arg(long, value_parser = parse_rational_arg, default_value = "0")]
        percent: Rational,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        lo: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        hi: i64,
        /// First block position (1-based) for `special`.
        #[arg(long, default_value_t = 1)]
        block_begin: usize,
        /// Last block position (1-based, inclusive) for `special`.
        #[arg(long, default_value_t = 1)]
        block_end: usize,
        #[arg(long, value_parser = parse_rational_arg, default_value = "0")]
        p_upset: Rational,
        #[arg(long, default_value_t = 1)]
        games_per_pair: u32,
        /// Required for stochastic kinds.
        #[arg(long)]
        seed: Option<u64>,
        /// Solve with this method and print a model card instead of the matrix.
        #[arg(long, value_parser = parse_method, value_name = "METHOD")]
        card: Option<Method>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        meta: CardArgs,
    },
    /// Randomly remove and add entries of a matrix.
    Perturb {
        input: PathBuf,
        #[arg(long, value_parser = parse_rational_arg, default_value = "0")]
        add: Rational,
        #[arg(long, value_parser = parse_rational_arg, default_value = "0")]
        remove: Rational,
        #[arg(long, default_value_t = 1)]
        lo: i64,
        #[arg(long, default_value_t = 1)]
        hi: i64,
        #[arg(long)]
        seed: u64,
    },
    /// Convert raw data to matrix text.
    Ingest {
        #[arg(value_enum)]
        format: IngestFormat,
        input: PathBuf,
        /// Feature columns where smaller values are better.
        #[arg(long = "lower-is-better", value_name = "FEATURE")]
        lower_is_better: Vec<String>,
        /// Replace every positive entry by 1.
        #[arg(long)]
        unweighted: bool,
    },
    /// Solve a matrix and print its model card.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        meta: CardArgs,
    },
    /// Massey or Colley ratings from a games CSV or a win-count matrix.
    Rank {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "massey")]
        method: RatingMethod,
        /// Rating gap below which two items count as tied.
        #[arg(long, default_value_t = linalg::FLOAT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Also print the Y* matrix.
        #[arg(long)]
        ystar: bool,
    },
    /// Print k, p, tau and beta for a matrix.
    Measures {
        input: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Validate a model card and print it in canonical form.
    Card {
        input: PathBuf,
        /// Fail unless the file is already canonical.
        #[arg(long)]
        check: bool,
    },
    /// Print the ids of catalog cards matching a query.
    Filter { dir: PathBuf, query: String },
    /// Render a model card as SVG.
    Plot {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "pixel")]
        kind: PlotKind,
        /// farthest, closest, or two 0-based indices into the stored rankings.
        #[arg(long, value_parser = parse_pair, default_value = "farthest")]
        pair: PairSelector,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IngestFormat {
    Games,
    Features,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum RatingMethod {
    Massey,
    Colley,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Pixel,
    Spaghetti,
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| "expected lop, hillside or k".into())
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    Kind::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Kind::ALL.iter().map(|k| k.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not an exact number"))
}

fn parse_pair(s: &str) -> Result<PairSelector, String> {
    PairSelector::parse(s).map_err(|e| e.to_string())
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<DominanceMatrix> {
    let parsed = ingest::parse_matrix(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.matrix)
}

/// Games from a CSV, or from a matrix whose entries count wins.
fn read_games(text: &str) -> anyhow::Result<(usize, Vec<String>, Vec<GameRecord>)> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.parse::<usize>().is_ok()) {
        let d = ingest::parse_matrix(text)?.matrix;
        let n = d.n();
        let names = d.item_names().map_or_else(|| (0..n).map(|i| i.to_string()).collect(), <[String]>::to_vec);
        let mut games = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = d.get(i, j);
                if !w.is_integer() {
                    bail!("entry ({i},{j}) = {} is not a whole number of wins", format_rational(&w));
                }
                games.extend((0..*w.numer()).map(|_| GameRecord::new(i, 1, j, 0)));
            }
        }
        return Ok((n, names, games));
    }
    let g = ingest::ingest_games(&ingest::parse_games_csv(text)?)?;
    Ok((g.names.len(), g.names, g.games))
}

fn build(d: &DominanceMatrix, solve: &SolveArgs, meta: &CardArgs, genspec: Option<GenSpec>) -> anyhow::Result<String> {
    if solve.cap == 0 {
        usage(ErrorKind::InvalidValue, "--cap must be at least 1");
    }
    let opts = CardOptions {
        dataset_id: meta.dataset_id,
        source: meta.source.clone(),
        max_stored: meta.max_stored,
        genspec,
    };
    let c = card::build_card(d, solve.method, solve.cap, solve.workers, &opts)?;
    Ok(card::emit(&c))
}

fn usage(kind: ErrorKind, msg: &str) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn run(cli: Cli) -> anyhow::Result<String> {
    Ok(match cli.command {
        Command::Generate {
            kind,
            n,
            percent,
            lo,
            hi,
            block_begin,
            block_end,
            p_upset,
            games_per_pair,
            seed,
            card,
            cap,
            workers,
            meta,
        } => {
            let seed = match seed {
                Some(s) => s,
                None if kind.is_stochastic() => {
                    usage(ErrorKind::MissingRequiredArgument, &format!("--seed is required for {}", kind.as_str()))
                }
                None => 0,
            };
            let spec = GenSpec::new(kind, n)
                .noise(percent, lo, hi)
                .block(block_begin, block_end)
                .games(p_upset, games_per_pair)
                .seed(seed);
            if let Err(e) = spec.validate() {
                usage(ErrorKind::InvalidValue, &e.to_string());
            }
            let d = generators::generate(&spec)?;
            match card {
                Some(method) => build(&d, &SolveArgs { method, cap, workers }, &meta, Some(spec))?,
                None => ingest::write_matrix(&d),
            }
        }
        Command::Perturb { input, add, remove, lo, hi, seed } => {
            let d = read_matrix(&input)?;
            let p = Perturbation { lo, hi, ..Perturbation::new(add, remove, seed) };
            ingest::write_matrix(&generators::perturb(&d, &p)?)
        }
        Command::Ingest { format, input, lower_is_better, unweighted } => {
            let text = read_input(&input)?;
            let d = match format {
                IngestFormat::Games => ingest::ingest_games(&ingest::parse_games_csv(&text)?)?.matrix,
                IngestFormat::Features => {
                    let table = ingest::parse_features_csv(&text)?;
                    for name in &lower_is_better {
                        if !table.features.contains(name) {
                            bail!("no feature column named `{name}`");
                        }
                    }
                    let higher: Vec<bool> = table.features.iter().map(|f| !lower_is_better.contains(f)).collect();
                    ingest::ingest_features(&table, &higher)?
                }
                IngestFormat::Matrix => {
                    let parsed = ingest::parse_matrix(&text)?;
                    for w in &parsed.warnings {
                        eprintln!("warning: {w}");
                    }
                    parsed.matrix
                }
            };
            ingest::write_matrix(&if unweighted { generators::unweighted(&d) } else { d })
        }
        Command::Solve { input, solve, meta } => build(&read_matrix(&input)?, &solve, &meta, None)?,
        Command::Rank { input, method, epsilon, cap, ystar } => {
            let (n, names, games) = read_games(&read_input(&input)?)?;
            let result = match method {
                RatingMethod::Massey => linalg::massey(&games, n)?,
                RatingMethod::Colley => linalg::colley(&games, n)?,
            };
            let mut out = String::from("item\trating\trank\n");
            let mut rank = vec![0; n];
            for (pos, &item) in result.ranking.order().iter().enumerate() {
                rank[item] = pos + 1;
            }
            for i in 0..n {
                out += &format!("{}\t{}\t{}\n", names[i], result.ratings[i], rank[i]);
            }
            let pseudo = linalg::pseudo_optimal_set(&result.ratings, epsilon, cap.max(1));
            out += &format!("pseudo_optimal={}\n", pseudo.len());
            if ystar {
                let y = linalg::ystar_from_ratings(&result.ratings);
                for row in y.chunks(n.max(1)) {
                    let cells: Vec<String> = row.iter().map(f64::to_string).collect();
                    out += &cells.join(" ");
                    out.push('\n');
                }
            }
            out
        }
        Command::Measures { input, solve } => {
            if solve.cap == 0 {
                usage(ErrorKind::InvalidValue, "--cap must be at least 1");
            }
            let d = read_matrix(&input)?;
            let workers = solve.workers;
            let a = rankability::analyze_with(&d, solve.method, solve.cap, |p, cap| solve_parallel(p, cap, workers))?;
            let m = &a.measures;
            let k = m.k.map_or_else(|| "NA".to_string(), |k| format_rational(&k));
            let pk = a.k_set.as_ref().map_or_else(|| "NA".to_string(), |s| count(s.len(), s.complete));
            format!(
                "k={k}\np(k)={pk}\np={}\ntau={}\nbeta={}\n",
                count(m.p, a.set.complete),
                m.tau,
                format_rational(&m.beta)
            )
        }
        Command::Card { input, check } => {
            let text = read_input(&input)?;
            let parsed = card::parse(&text)?;
            let canonical = card::emit(&parsed);
            if check && canonical != text {
                bail!("{} is valid but not in canonical form", input.display());
            }
            canonical
        }
        Command::Filter { dir, query } => {
            let q = match Query::parse(&query) {
                Ok(q) => q,
                Err(e) => usage(ErrorKind::InvalidValue, &format!("query {e}")),
            };
            let catalog = load_catalog(&dir).with_context(|| format!("reading catalog {}", dir.display()))?;
            for w in &catalog.warnings {
                eprintln!("warning: {}: {}", w.path.display(), w.msg);
            }
            query::filter(&catalog.cards, &q).iter().map(|id| format!("{id}\n")).collect()
        }
        Command::Plot { input, kind, pair } => {
            let c = card::parse(&read_input(&input)?)?;
            match kind {
                PlotKind::Pixel => plot::card_pixel(&c)?,
                PlotKind::Spaghetti => plot::card_spaghetti(&c, pair)?,
            }
        }
    })
}

/// A count, marked as a lower bound when enumeration hit the cap.
fn count(value: usize, exact: bool) -> String {
    if exact {
        value.to_string()
    } else {
        format!(">={value}")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let text = match run(cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let written = match out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(Into::into),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
