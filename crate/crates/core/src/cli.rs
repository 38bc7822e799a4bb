//! The `folkrec` command line.
//!
//! Exit codes: 0 on success, 1 on data errors (unreadable or malformed
//! input, empty dataset, nothing to evaluate), 2 on usage errors. Usage
//! errors are detected before any input is read.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eval::{evaluate, render_report, Algorithm, ReportFormat};
use crate::folksonomy::{
    compute_stats, p_core, parse_dataset, split_leave_latest, write_posts_tsv, Folksonomy,
    ParseOptions,
};
use crate::recommend::{ActrParams, FolkrankParams, GirptmParams, DEFAULT_NEIGHBORS};
use crate::Error;

/// Environment variable capping evaluation threads.
pub const THREADS_ENV: &str = "FOLKREC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "folkrec",
    version,
    about = "Folksonomy tag recommendation and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print corpus statistics (users, resources, tags, assignments, posts, narrowness).
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Write the p-core of the input as TSV.
    Core {
        #[command(flatten)]
        input: InputArgs,
        /// Minimum number of posts every user, resource and tag must occur in.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Hold out each user's latest post; writes PREFIX.train.tsv and PREFIX.test.tsv.
    Split {
        #[command(flatten)]
        input: InputArgs,
        /// Output prefix; defaults to the input path without its .tsv extension.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Split the input and evaluate recommenders on the held-out posts.
    Eval {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated algorithms.
        #[arg(
            long = "algo",
            value_enum,
            value_delimiter = ',',
            default_value = "mpr,mpur,cf,folkrank,girptm,actr"
        )]
        algos: Vec<AlgoName>,
        /// Ranking cut-off.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Print the top-k tags one algorithm suggests for a user and resource.
    Recommend {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        user: String,
        #[arg(long)]
        resource: String,
        #[arg(long = "algo", value_enum, default_value_t = AlgoName::Actr)]
        algo: AlgoName,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Reference time for time-aware algorithms; defaults to the latest timestamp in the input.
        #[arg(long)]
        t_ref: Option<i64>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Tab-separated user, resource, tag, timestamp lines; `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
    /// Keep tags exactly as written instead of trimming and lowercasing.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// User-component weight for mpur, girptm and actr.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// ACT-R power-law decay exponent.
    #[arg(long, default_value_t = 0.5)]
    decay: f64,
    /// ACT-R minimum usage lag in seconds.
    #[arg(long, default_value_t = 1)]
    min_lag: i64,
    /// GIRPTM recency time constant in seconds.
    #[arg(long, default_value_t = 2_419_200.0)]
    tau: f64,
    /// FolkRank spreading factor.
    #[arg(long, default_value_t = 0.7)]
    lambda: f64,
    /// FolkRank convergence tolerance (L1).
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
    /// FolkRank iteration limit.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// FolkRank preference boost [default: number of graph nodes].
    #[arg(long)]
    boost: Option<f64>,
    /// CF neighborhood size.
    #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
    neighbors: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoName {
    Mpr,
    Mpu,
    Mpur,
    Cf,
    Folkrank,
    Girptm,
    Actr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

impl ParamArgs {
    fn algorithm(&self, name: AlgoName) -> Algorithm {
        match name {
            AlgoName::Mpr => Algorithm::MpR,
            AlgoName::Mpu => Algorithm::MpU,
            AlgoName::Mpur => Algorithm::MpUr { beta: self.beta },
            AlgoName::Cf => Algorithm::Cf {
                neighbors: self.neighbors,
            },
            AlgoName::Folkrank => Algorithm::FolkRank(FolkrankParams {
                spread_lambda: self.lambda,
                tolerance: self.epsilon,
                max_iter: self.max_iter,
                preference_boost: self.boost,
            }),
            AlgoName::Girptm => Algorithm::Girptm(GirptmParams {
                recency_tau: self.tau,
                mix_beta: self.beta,
            }),
            AlgoName::Actr => Algorithm::Actr(ActrParams {
                decay: self.decay,
                mix_beta: self.beta,
                min_lag: self.min_lag,
            }),
        }
    }

    fn flag_for(name: AlgoName) -> &'static str {
        match name {
            AlgoName::Mpur => "--beta",
            AlgoName::Cf => "--neighbors",
            AlgoName::Folkrank => "--lambda/--epsilon/--max-iter/--boost",
            AlgoName::Girptm => "--tau/--beta",
            AlgoName::Actr => "--decay/--beta/--min-lag",
            AlgoName::Mpr | AlgoName::Mpu => "--algo",
        }
    }

    /// Builds and validates the algorithms before any data is touched.
    fn algorithms(&self, names: &[AlgoName]) -> Result<Vec<Algorithm>, Failure> {
        names
            .iter()
            .map(|&n| {
                let a = self.algorithm(n);
                a.validate()
                    .map(|_| a)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", Self::flag_for(n))))
            })
            .collect()
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(context: impl std::fmt::Display, e: Error) -> Failure {
        Failure::Data(format!("{context}: {e}"))
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match execute(cli.command, stdin, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn execute(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Data(format!("writing output: {e}"));
    match command {
        Command::Stats { input } => {
            let f = load(&input, stdin)?;
            let stats = compute_stats(&f).map_err(|e| Failure::data("--input", e))?;
            write!(stdout, "{stats}\n{}", stats.key_values()).map_err(io_err)?;
        }
        Command::Core { input, p, output } => {
            let f = load(&input, stdin)?;
            let core = p_core(&f, p as usize);
            match output {
                Some(path) => {
                    guard_overwrite(&input.input, &path, "--output")?;
                    let file = create(&path, "--output")?;
                    core.write_tsv(BufWriter::new(file)).map_err(io_err)?;
                }
                None => core.write_tsv(&mut *stdout).map_err(io_err)?,
            }
        }
        Command::Split { input, output } => {
            let prefix = match output {
                Some(p) => p,
                None if input.input.as_os_str() == "-" => {
                    return Err(Failure::Usage(
                        "--output is required when reading stdin".into(),
                    ))
                }
                None => input.input.with_extension(""),
            };
            let train_path = suffixed(&prefix, ".train.tsv");
            let test_path = suffixed(&prefix, ".test.tsv");
            guard_overwrite(&input.input, &train_path, "--output")?;
            guard_overwrite(&input.input, &test_path, "--output")?;
            let f = load(&input, stdin)?;
            let split = split_leave_latest(&f).map_err(|e| Failure::data("--input", e))?;
            split
                .train
                .write_tsv(BufWriter::new(create(&train_path, "--output")?))
                .map_err(io_err)?;
            write_posts_tsv(&split.test, BufWriter::new(create(&test_path, "--output")?))
                .map_err(io_err)?;
            writeln!(
                stdout,
                "train\t{}\t{} posts\ntest\t{}\t{} posts",
                train_path.display(),
                split.train.n_posts(),
                test_path.display(),
                split.test.len()
            )
            .map_err(io_err)?;
        }
        Command::Eval {
            input,
            algos,
            k,
            format,
            params,
        } => {
            let algorithms = params.algorithms(&algos)?;
            let threads = thread_cap()?;
            let f = load(&input, stdin)?;
            let split = split_leave_latest(&f).map_err(|e| Failure::data("--input", e))?;
            let run = || evaluate(&split, &algorithms, k as usize);
            let report = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Failure::Usage(format!("{THREADS_ENV}: {e}")))?
                    .install(run),
                None => run(),
            }
            .map_err(|e| Failure::data("eval", e))?;
            let text =
                render_report(&report, format.into()).map_err(|e| Failure::data("eval", e))?;
            stdout.write_all(text.as_bytes()).map_err(io_err)?;
        }
        Command::Recommend {
            input,
            user,
            resource,
            algo,
            k,
            t_ref,
            params,
        } => {
            let algorithm = params.algorithms(&[algo])?.remove(0);
            let f = load(&input, stdin)?;
            let t_ref = t_ref.unwrap_or_else(|| latest_timestamp(&f));
            let mut ranking = algorithm
                .recommend(&f, &user, &resource, t_ref)
                .map_err(|e| Failure::data(format!("--user {user} --resource {resource}"), e))?;
            ranking.truncate(k as usize);
            for (tag, score) in ranking.entries() {
                writeln!(stdout, "{tag}\t{score:.6}").map_err(io_err)?;
            }
        }
    }
    stdout.flush().map_err(io_err)
}

fn load(input: &InputArgs, stdin: &mut dyn Read) -> Result<Folksonomy, Failure> {
    let opts = ParseOptions {
        normalize_tags: !input.no_normalize,
    };
    let path = &input.input;
    let parsed = if path.as_os_str() == "-" {
        parse_dataset(stdin, opts)
    } else {
        let file = File::open(path)
            .map_err(|e| Failure::Data(format!("--input {}: {e}", path.display())))?;
        parse_dataset(file, opts)
    };
    parsed.map_err(|e| Failure::data(format!("--input {}", path.display()), e))
}

fn create(path: &Path, flag: &str) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Data(format!("{flag} {}: {e}", path.display())))
}

fn guard_overwrite(input: &Path, output: &Path, flag: &str) -> Result<(), Failure> {
    let same = match (input.canonicalize(), output.canonicalize()) {
        (Ok(a), Ok(b)) => a == b,
        _ => input == output,
    };
    if same {
        return Err(Failure::Usage(format!(
            "{flag} {} would overwrite the input file",
            output.display()
        )));
    }
    Ok(())
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn latest_timestamp(f: &Folksonomy) -> i64 {
    (0..f.n_posts())
        .map(|i| f.post(i).timestamp)
        .max()
        .unwrap_or(0)
}
