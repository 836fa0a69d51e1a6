use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use specpart::criterion::{partition_test, DEFAULT_TOL_MASS};
use specpart::curved::{
    build_partition, construct, default_bracket, equalize, geometry_svg, labels_svg, sweep,
};
use specpart::eigen::{smallest_eigs, SolverConfig};
use specpart::grid::{rasterize_shape, GridSpec, LabelGrid};
use specpart::relaxed::{optimize_seeds, sharpen, OptimizerConfig};
use specpart::spectra::{bounds_csv, bounds_table, bounds_text, sector_csv, spectrum, NodalCount, TriangleLk};
use specpart::{Error, ShapeKind};

#[derive(Parser)]
#[command(name = "specpart", version, about = "Spectral minimal partitions of the square, disk and equilateral triangle")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
    Svg,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    shape: Option<ShapeKind>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Verb {
    /// Bound tables for k = 1..kmax and the sector energies.
    Tables {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        /// Resolution for the numeric triangle L_k column; skipped when absent.
        #[arg(long = "lk-n")]
        lk_n: Option<usize>,
    },
    /// First k eigenvalues, exact and (with --n) finite-difference.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Relaxed optimization; writes <out>.csv (energy history) and <out>.plbl.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Norm exponent, or `max` for the full exponent schedule.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of consecutive seeds; the best run is kept.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long = "C")]
        c: Option<f64>,
        /// key=value configuration file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Golden-section search for the ell minimizing the mean energy.
    CurvedSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        /// Also write every evaluated (ell, energy).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Bisection for the ell equalizing the cells' first eigenvalues.
    Equalize {
        #[command(flatten)]
        common: Common,
        /// Also write the equalized partition.
        #[arg(long)]
        plbl: Option<PathBuf>,
    },
    /// L²-mass test on a PLBL file or an equalized construction.
    Criterion {
        #[command(flatten)]
        common: Common,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long = "tol-mass", default_value_t = DEFAULT_TOL_MASS)]
        tol_mass: f64,
    },
    /// SVG of a PLBL file or of a curved construction at --ell.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        ell: Option<f64>,
    },
}

fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn need<T>(v: Option<T>, flag: &str, verb: &str) -> Result<T, Error> {
    v.ok_or_else(|| param(format!("{verb}: --{flag} is required")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| param(format!("cannot read {}: {e}", path.display())))
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn tables(common: Common, kmax: u32, lk_n: Option<usize>) -> Result<(), Error> {
    let shapes: Vec<ShapeKind> = common.shape.map_or(ShapeKind::ALL.to_vec(), |s| vec![s]);
    let triangle = lk_n.map_or(TriangleLk::Skip, |n| TriangleLk::Numeric { n });
    let sectors = sector_csv(&[3, 5, 7, 9])?;
    let mut text = String::new();
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            for (i, &shape) in shapes.iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                let _ = writeln!(text, "# {}", shape.name());
                text.push_str(&bounds_csv(&bounds_table(shape, kmax, triangle)?));
            }
            if common.shape.is_none() {
                text.push_str("\n# sectors\n");
                text.push_str(&sectors);
            }
        }
        Format::Text => {
            for &shape in &shapes {
                text.push_str(&bounds_text(shape, &bounds_table(shape, kmax, triangle)?));
                text.push('\n');
            }
            if common.shape.is_none() {
                text.push_str("sector energies j²_{k/2,1}\n");
                for line in sectors.lines().skip(1) {
                    let (k, e) = line.split_once(',').unwrap_or((line, ""));
                    let _ = writeln!(text, "{k:>3} | {e:>10}");
                }
            }
        }
        Format::Svg => return Err(param("tables: --format svg is not available")),
    }
    emit(common.out.as_deref(), &text)
}

fn spectrum_verb(common: Common) -> Result<(), Error> {
    let shape = need(common.shape, "shape", "spectrum")?;
    let k = need(common.k, "k", "spectrum")?;
    let exact = spectrum(shape, k)?;
    let numeric = match common.n {
        Some(n) => {
            let mask = rasterize_shape(&GridSpec::new(shape, n)?);
            Some(smallest_eigs(&mask, &SolverConfig::with_count(k))?)
        }
        None => None,
    };
    let mut text = String::from("index,m,n,lambda,multiplicity,nodal_count");
    if numeric.is_some() {
        text.push_str(",lambda_fd");
    }
    text.push('\n');
    for (i, e) in exact.iter().enumerate() {
        let nodal = match e.nodal_count {
            NodalCount::Known(c) => c.to_string(),
            NodalCount::Unknown => "unknown".into(),
        };
        let _ = write!(text, "{},{},{},{:.6},{},{}", i + 1, e.mode.m, e.mode.n, e.value, e.multiplicity, nodal);
        if let Some(pairs) = &numeric {
            let _ = write!(text, ",{:.6}", pairs[i].value);
        }
        text.push('\n');
    }
    emit(common.out.as_deref(), &text)
}

struct OptimizeArgs {
    common: Common,
    p: Option<String>,
    seed: Option<u64>,
    seeds: u64,
    c: Option<f64>,
    config: Option<PathBuf>,
}

fn optimize_verb(a: OptimizeArgs) -> Result<(), Error> {
    let mut config = match &a.config {
        Some(path) => OptimizerConfig::from_kv(&read(path)?)?,
        None => {
            let shape = need(a.common.shape, "shape", "optimize")?;
            let k = need(a.common.k, "k", "optimize")?;
            OptimizerConfig::new(shape, k)
        }
    };
    if let Some(shape) = a.common.shape {
        config.shape = shape;
    }
    if let Some(k) = a.common.k {
        config.k = k;
    }
    if let Some(n) = a.common.n {
        config.n = n;
    }
    if let Some(c) = a.c {
        config.c = c;
    }
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    match a.p.as_deref() {
        Some("max") => config = config.max_mode(),
        Some(p) => {
            config.p = p.parse().map_err(|_| param(format!("optimize: --p expects a number or `max`, got {p:?}")))?;
            config.p_schedule.clear();
        }
        None => {}
    }
    if a.seeds == 0 {
        return Err(param("optimize: --seeds must be at least 1"));
    }
    config.validate()?;
    let seeds: Vec<u64> = (config.seed..config.seed + a.seeds).collect();
    let (state, report) = optimize_seeds(&config, &seeds)?;
    let part = sharpen(&state)?;
    let summary = format!(
        "seed,relaxed_energy,sharp_mean,sharp_max\n{},{:.6},{:.6},{:.6}\n",
        report.seed, report.relaxed_energy, report.sharp_mean, report.sharp_max
    );
    match &a.common.out {
        Some(base) => {
            std::fs::write(with_extension(base, "csv"), report.to_csv())?;
            std::fs::write(with_extension(base, "plbl"), part.to_plbl())?;
            print!("{summary}");
        }
        None => print!("{summary}"),
    }
    Ok(())
}

fn curved_sweep(common: Common, lo: Option<f64>, hi: Option<f64>, trace: Option<PathBuf>) -> Result<(), Error> {
    let shape = need(common.shape, "shape", "curved-sweep")?;
    let k = need(common.k, "k", "curved-sweep")?;
    let n = common.n.unwrap_or(256);
    let (dlo, dhi) = default_bracket(shape, k)?;
    let r = sweep(shape, k, lo.unwrap_or(dlo), hi.unwrap_or(dhi), n)?;
    if let Some(path) = trace {
        std::fs::write(path, r.trace_csv())?;
    }
    let text = format!("shape,k,n,ell,energy\n{},{},{},{:.4},{:.4}\n", shape.name(), k, n, r.ell, r.energy);
    emit(common.out.as_deref(), &text)
}

fn equalize_verb(common: Common, plbl: Option<PathBuf>) -> Result<(), Error> {
    let shape = need(common.shape, "shape", "equalize")?;
    let k = need(common.k, "k", "equalize")?;
    let n = common.n.unwrap_or(256);
    let r = equalize(shape, k, n)?;
    if let Some(path) = plbl {
        std::fs::write(path, construct(shape, k, r.ell, n)?.to_plbl())?;
    }
    let text = format!(
        "shape,k,n,ell,lambda_common,gap\n{},{},{},{:.4},{:.4},{:.4}\n",
        shape.name(),
        k,
        n,
        r.ell,
        r.lambda_common,
        r.gap
    );
    emit(common.out.as_deref(), &text)
}

fn criterion_verb(common: Common, input: Option<PathBuf>, tol_mass: f64) -> Result<(), Error> {
    let part = match input {
        Some(path) => LabelGrid::from_plbl(&read(&path)?)?,
        None => {
            let shape = need(common.shape, "shape", "criterion (without --in)")?;
            let k = need(common.k, "k", "criterion (without --in)")?;
            let n = common.n.unwrap_or(256);
            let r = equalize(shape, k, n)?;
            construct(shape, k, r.ell, n)?
        }
    };
    let report = partition_test(&part, tol_mass)?;
    emit(common.out.as_deref(), &report.to_csv())
}

fn render(common: Common, input: Option<PathBuf>, ell: Option<f64>) -> Result<(), Error> {
    let svg = match input {
        Some(path) => labels_svg(&LabelGrid::from_plbl(&read(&path)?)?),
        None => {
            let shape = need(common.shape, "shape", "render (without --in)")?;
            let k = need(common.k, "k", "render (without --in)")?;
            let ell = need(ell, "ell", "render (without --in)")?;
            geometry_svg(&build_partition(shape, k, ell)?)
        }
    };
    emit(common.out.as_deref(), &svg)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.verb {
        Verb::Tables { common, kmax, lk_n } => tables(common, kmax, lk_n),
        Verb::Spectrum { common } => spectrum_verb(common),
        Verb::Optimize { common, p, seed, seeds, c, config } => {
            optimize_verb(OptimizeArgs { common, p, seed, seeds, c, config })
        }
        Verb::CurvedSweep { common, lo, hi, trace } => curved_sweep(common, lo, hi, trace),
        Verb::Equalize { common, plbl } => equalize_verb(common, plbl),
        Verb::Criterion { common, input, tol_mass } => criterion_verb(common, input, tol_mass),
        Verb::Render { common, input, ell } => render(common, input, ell),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(threads) = std::env::var("SPECPART_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            _ => {
                eprintln!("error: SPECPART_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
