use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cqstein::channel_divergences::{
    channel_divergence, choi_trace_distance, diamond_distance_with_letter, hypothesis_test_channel, ArgInput,
    DivergenceKind, InputMode,
};
use cqstein::experiments::{self, fmt_num, SweepConfig};
use cqstein::free_sets::{holevo_capacity, log_robustness, membership, FreeSetDescriptor};
use cqstein::io::{self, ChannelSpec, MatrixSpec, SmoothedChannelSpec};
use cqstein::resource_ops::{arng_deficit, robustness_decompose, smooth_channel, Superchannel};
use cqstein::{catalog, CqChannel, Error};

#[derive(Parser)]
#[command(name = "cqstein", version, about = "Divergences, hypothesis tests and resource constructions for c-q channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    D,
    Renyi,
    Dmax,
    Dh,
    Diamond,
    ChoiDist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Channel divergence or distance between two channel files.
    Div {
        #[arg(long, value_enum)]
        kind: Kind,
        e: PathBuf,
        f: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Holevo capacity by Blahut–Arimoto.
    Capacity {
        e: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Log-robustness bracket against a free set.
    Robustness {
        e: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
    /// Robustness decomposition `(E + rE')/(1 + r) = F`.
    Decompose {
        e: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Max-divergence smoothing of `E^{⊗km}`, one row per k.
    Smooth {
        e: PathBuf,
        /// Free channel `F_m` on m-letter strings.
        #[arg(long)]
        free: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        rate: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Applies a test-and-prepare superchannel; with `--free` and `--set`
    /// also reports the generated log-robustness and its bound.
    Superchannel {
        #[arg(long)]
        recipe: PathBuf,
        n: PathBuf,
        #[arg(long, requires = "set")]
        free: Option<PathBuf>,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `(1/n) D_H^ε(ρ^{⊗n}‖σ^{⊗n})` for n = 1..nmax.
    SweepStein {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Per-n channel quantities against a free-set family.
    SweepGqsl {
        e: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Reproduces the worked examples with pass/fail verdicts.
    Examples {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Also write the example channels as channel files into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Parses and validates a channel, state, free-set or recipe file.
    Validate { path: PathBuf },
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 1.1)]
    alpha: f64,
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Adds a wall-clock column; off by default so output is byte-stable.
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Check(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::ConvergenceFailure(_) | Error::BracketTooWide { .. } => 3,
        Error::InfiniteRobustness => 1,
        _ => 2,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn arg_text(a: &ArgInput) -> String {
    match a {
        ArgInput::Letter(x) => x.to_string(),
        ArgInput::Distribution(p) => p.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(" "),
    }
}

fn div(kind: Kind, e: &Path, f: &Path, alpha: f64, eps: f64) -> Outcome {
    let (e, f) = (io::load_channel(e)?, io::load_channel(f)?);
    let (name, value, arg, lb) = match kind {
        Kind::D | Kind::Renyi | Kind::Dmax => {
            let k = match kind {
                Kind::D => DivergenceKind::Umegaki,
                Kind::Renyi => DivergenceKind::Renyi(alpha),
                _ => DivergenceKind::Dmax,
            };
            let r = channel_divergence(k, &e, &f)?;
            (k.name(), r.value, arg_text(&r.arg_input), false)
        }
        Kind::Dh => {
            let s = FreeSetDescriptor::singleton_iid(f, 1);
            let r = hypothesis_test_channel(&e, &s, eps, InputMode::ClassicalExhaustive)?;
            (format!("dh(eps={})", fmt_num(eps)), r.value, arg_text(&r.arg_input), r.lower_bound_only)
        }
        Kind::Diamond => {
            let (v, x) = diamond_distance_with_letter(&e, &f)?;
            ("diamond".to_string(), v, x.to_string(), false)
        }
        Kind::ChoiDist => ("choi-dist".to_string(), choi_trace_distance(&e, &f)?, "-".to_string(), false),
    };
    println!("kind: {name}");
    println!("value: {}{}", fmt_num(value), if lb { " lb" } else { "" });
    println!("arg: {arg}");
    Ok(())
}

fn capacity(e: &Path, tol: f64) -> Outcome {
    let r = holevo_capacity(&io::load_channel(e)?, tol)?;
    println!("lower: {}", fmt_num(r.lower));
    println!("upper: {}", fmt_num(r.upper));
    println!("iterations: {}", r.iterations);
    println!("optimal_p: {}", r.optimal_p.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(" "));
    Ok(())
}

fn robustness(e: &Path, set: &Path) -> Outcome {
    let r = log_robustness(&io::load_channel(e)?, &io::load_free_set(set)?)?;
    println!("lower: {}", fmt_num(r.lower));
    println!("upper: {}", fmt_num(r.upper));
    println!("width: {}", fmt_num(r.width()));
    Ok(())
}

fn decompose(e: &Path, set: &Path, out: Option<&Path>) -> Outcome {
    let e = io::load_channel(e)?;
    let s = io::load_free_set(set)?;
    let d = robustness_decompose(&e, &s)?;
    println!("r: {}", fmt_num(d.r));
    println!("residual: {}", fmt_num(d.reconstruction_residual(&e)?));
    println!("free_violation: {}", fmt_num(membership(&d.free_channel, &s)?.violation));
    if let Some(p) = out {
        let doc = serde_json::json!({
            "r": d.r,
            "free_channel": ChannelSpec::from_channel(&d.free_channel),
            "complement": ChannelSpec::from_channel(&d.complement),
        });
        emit(&(serde_json::to_string_pretty(&doc).expect("plain JSON") + "\n"), Some(p))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn smooth(e: &Path, free: &Path, set: &Path, rate: f64, ks: &[usize], m: usize, out: Option<&Path>) -> Outcome {
    let e = io::load_channel(e)?;
    let f_m = io::load_channel(free)?;
    let s = io::load_free_set(set)?;
    let rows = experiments::smooth_rows(&e, &f_m, m, &s, rate, ks)?;
    print!("{}", experiments::smooth_rows_to_csv(&rows));
    if let Some(p) = out {
        let specs = ks
            .iter()
            .map(|&k| Ok(SmoothedChannelSpec::from_smoothed(&smooth_channel(&e, &f_m, m, &s, rate, k)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        emit(&(io::to_json(&specs)? + "\n"), Some(p))?;
    }
    let violated = rows.iter().any(|r| r.dmax_upper > r.dmax_bound + 1e-8 || r.max_cut_weight > r.cut_bound + 1e-10);
    if violated {
        return Err(Failure::Check("a smoothing bound is violated".into()));
    }
    Ok(())
}

fn superchannel(recipe: &Path, n: &Path, free: Option<&Path>, set: Option<&Path>, out: Option<&Path>) -> Outcome {
    let theta = io::load_recipe(recipe)?;
    let n = io::load_channel(n)?;
    println!("acceptance: {}", fmt_num(theta.acceptance(&n)?));
    let result = theta.apply(&n)?;
    if let (Some(f), Some(s)) = (free, set) {
        let d = arng_deficit(&theta, &io::load_channel(f)?, &io::load_free_set(s)?)?;
        println!("deficit: {}", fmt_num(d.deficit));
        println!("bound: {}", d.bound.map(fmt_num).unwrap_or_else(|| "none".into()));
        if d.bound.is_some_and(|b| d.deficit > b + 1e-8) {
            return Err(Failure::Check("deficit exceeds its bound".into()));
        }
    }
    match out {
        Some(p) => io::save_channel(p, &result)?,
        None => println!("{}", io::to_json(&ChannelSpec::from_channel(&result))?),
    }
    Ok(())
}

fn render_rows(rows: &[experiments::SweepRow], args: &SweepArgs) -> Outcome {
    let text = match args.format {
        Format::Csv => experiments::rows_to_csv(rows, args.timing),
        Format::Json => experiments::rows_to_json(rows, args.timing) + "\n",
    };
    emit(&text, args.out.as_deref())?;
    let broken: Vec<usize> = rows
        .iter()
        .filter(|r| r.note.is_none() && r.dh_over_n > r.upper_bound + 1e-8)
        .map(|r| r.n)
        .collect();
    if !broken.is_empty() {
        return Err(Failure::Check(format!("upper bound violated at n = {broken:?}")));
    }
    Ok(())
}

fn config(args: &SweepArgs, guard: usize) -> SweepConfig {
    let mut c = SweepConfig::new(args.eps, args.alpha, args.nmax);
    c.n_guard = guard;
    c.timing = args.timing;
    c
}

fn examples(seed: u64, dir: Option<&Path>) -> Outcome {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
        let mut files: Vec<(String, CqChannel)> = vec![
            ("pure_or_mixed.chan".into(), catalog::pure_or_mixed()),
            ("constant_zero.chan".into(), catalog::constant_zero()),
            ("depolarizing.chan".into(), catalog::depolarizing_qubit()),
        ];
        for n in 1..=3 {
            files.push((format!("all_zero_n{n}.chan"), catalog::all_zero_string(n)?));
            files.push((format!("flag_all_ones_n{n}.chan"), catalog::flag_all_ones(n)?));
        }
        for (name, ch) in files {
            io::save_channel(&dir.join(name), &ch)?;
        }
        io::save_free_set(&dir.join("depolarizing.set"), &FreeSetDescriptor::singleton_iid(catalog::depolarizing_qubit(), 1))?;
        io::save_free_set(&dir.join("replacer.set"), &FreeSetDescriptor::replacer(1))?;
    }
    let report = experiments::examples_report(seed)?;
    print!("{}", report.render());
    let failed = report.failures().next().map(|c| c.name.clone());
    match failed {
        Some(name) => Err(Failure::Check(format!("failed: {name}"))),
        None => Ok(()),
    }
}

fn validate(path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let parse_err = |e: serde_json::Error| Error::Parse(e.to_string());
    if value.get("outputs").is_some() {
        let e = serde_json::from_value::<ChannelSpec>(value).map_err(parse_err)?.to_channel()?;
        println!("channel: alphabet_size {} out_dim {}", e.alphabet_size(), e.out_dim());
    } else if value.get("kind").is_some() {
        let s = serde_json::from_value::<io::FreeSetSpec>(value).map_err(parse_err)?.to_descriptor()?;
        println!("free set: {} n {}", s.kind_name(), s.n);
    } else if value.get("test_operator").is_some() {
        let r = serde_json::from_value::<io::RecipeSpec>(value).map_err(parse_err)?.to_recipe()?;
        println!("recipe: probe {} out_dim {}", r.probe, r.pass.out_dim());
    } else if value.get("matrix").is_some() {
        let s = serde_json::from_value::<io::StateSpec>(value).map_err(parse_err)?;
        let rho = cqstein::DensityMatrix::validate(MatrixSpec::to_matrix(&s.matrix, s.dim)?)?;
        println!("state: dim {}", rho.dim());
    } else {
        return Err(Error::Parse("unrecognized file: expected a channel, state, free set or recipe".into()).into());
    }
    println!("ok");
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Div { kind, e, f, alpha, eps } => div(kind, &e, &f, alpha, eps),
        Command::Capacity { e, tol } => capacity(&e, tol),
        Command::Robustness { e, set } => robustness(&e, &set),
        Command::Decompose { e, set, out } => decompose(&e, &set, out.as_deref()),
        Command::Smooth { e, free, set, rate, k, m, out } => smooth(&e, &free, &set, rate, &k, m, out.as_deref()),
        Command::Superchannel { recipe, n, free, set, out } => {
            superchannel(&recipe, &n, free.as_deref(), set.as_deref(), out.as_deref())
        }
        Command::SweepStein { rho, sigma, sweep } => {
            let rows = experiments::sweep_stein(&io::load_state(&rho)?, &io::load_state(&sigma)?, &config(&sweep, 12))?;
            render_rows(&rows, &sweep)
        }
        Command::SweepGqsl { e, set, sweep } => {
            let rows = experiments::sweep_gqsl(&io::load_channel(&e)?, &io::load_free_set(&set)?, &config(&sweep, 10))?;
            render_rows(&rows, &sweep)
        }
        Command::Examples { seed, emit } => examples(seed, emit.as_deref()),
        Command::Validate { path } => validate(&path),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
