//! Argument parsing and command dispatch for the `lambda-forge` binary.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lambda_forge::cache::{default_cache_dir, PolyCache, Provenance};
use lambda_forge::cdga::{CdgaModel, ModelSpec};
use lambda_forge::equivariant::AbelianGroup;
use lambda_forge::gamma::GammaRing;
use lambda_forge::lambda::contexts::BinomialRationals;
use lambda_forge::lambda::{verify_axioms, Mode, Report, VerifyOptions};
use lambda_forge::suites::{self, SuiteOptions};
use lambda_forge::symfun::PolyKind;
use lambda_forge::{diffk::DiffKRing, Error};

/// Exit status: every check passed.
pub const EXIT_OK: i32 = 0;
/// Exit status: a check failed; the report carries the witness.
pub const EXIT_FAILED: i32 = 1;
/// Exit status: bad invocation or unusable input.
pub const EXIT_USAGE: i32 = 2;

/// Groups checked by `verify equivariant` when neither `--group` nor the
/// model names one.
pub const DEFAULT_GROUPS: [&str; 3] = ["Z", "Z/2", "ZxZ/3"];

#[derive(Parser, Debug)]
#[command(
    name = "lambda-forge",
    version,
    about = "Exact lambda-ring and differential K-theory computations"
)]
pub struct Cli {
    /// Directory of the universal polynomial cache.
    #[arg(long, global = true, env = "LAMBDA_FORGE_CACHE")]
    pub cache: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print universal polynomials.
    Univpoly {
        #[command(subcommand)]
        which: Univpoly,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Inspect CDGA models.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Manage the polynomial cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum Univpoly {
    /// `P_n`, or the table `P_1..P_max-n`.
    Pn {
        #[arg(long, required_unless_present = "max_n")]
        n: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// `P_{n,m}`, or the table with `n <= max-n`, `m <= max-m`.
    Pnm {
        #[arg(long, requires = "m", required_unless_present_all = ["max_n", "max_m"])]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, requires = "max_m")]
        max_n: Option<usize>,
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// The Newton polynomial `nu_k`.
    Nu {
        #[arg(long, visible_alias = "n")]
        k: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Pre-λ axioms on differential K classes.
    PreLambda,
    /// The λ-ring axioms on differential K classes.
    Lambda,
    /// Adams identities, Newton cross-check and naturality.
    Adams,
    /// λ-ring axioms, Chern–Simons transgression and well-definedness.
    Diffk,
    /// λ-ring axioms on Γ(B) and the projection to closed even forms.
    Gamma,
    /// The equivariant suite over one or more character groups.
    Equivariant,
    /// Exact inversion of the splitting matrix on formal bases.
    Splitting,
    /// Ring laws of the Witt-style operations over Q and over Γ(B).
    Witt,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Built-in model name (see `model list`).
    #[arg(long, conflicts_with = "spec")]
    pub model: Option<String>,
    /// Path to a JSON model specification.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub trunc: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest rank for `splitting`; largest `n` in `λ_t(xy)` checks otherwise.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n: Option<u64>,
    /// Character group for `equivariant`, e.g. `ZxZ/3`.
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ModelAction {
    /// List built-in models.
    List,
    /// Build a model and check its axioms.
    Validate {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        model: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    Clear,
    Stats,
}

/// Resolved settings for one invocation; the seed is echoed in every report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<Arc<CdgaModel>>,
    pub opts: SuiteOptions,
    pub max_n: Option<usize>,
    pub group: Option<String>,
    pub cache: Option<PolyCache>,
    pub format: Format,
}

/// A failure that maps to an exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn resolve_cache(cli: &Cli) -> Option<PolyCache> {
    cli.cache
        .clone()
        .or_else(default_cache_dir)
        .map(PolyCache::new)
}

fn load_model(
    model: &Option<String>,
    spec: &Option<PathBuf>,
) -> Result<Option<Arc<CdgaModel>>, CliError> {
    match (model, spec) {
        (Some(name), _) => CdgaModel::builtin(name)
            .map(Some)
            .map_err(|_| CliError::Usage(format!("unknown model `{name}`; see `model list`"))),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let spec = ModelSpec::from_json(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(Some(CdgaModel::build(&spec).map_err(|e| {
                CliError::Usage(format!("{}: {e}", path.display()))
            })?))
        }
        (None, None) => Ok(None),
    }
}

/// Parses `argv` and runs the command, writing the report to `out`.
/// Returns the exit status.
pub fn run_from_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Univpoly { which } => univpoly(cli, which, out),
        Command::Verify { suite, run } => {
            let cfg = RunConfig {
                model: load_model(&run.model, &run.spec)?,
                opts: SuiteOptions::new(run.samples as usize, run.seed, run.trunc as usize),
                max_n: run.max_n.map(|n| n as usize),
                group: run.group.clone(),
                cache: resolve_cache(cli),
                format: cli.format,
            };
            verify(*suite, &cfg, out)
        }
        Command::Model { action } => model_cmd(cli, action, out),
        Command::Cache { action } => cache_cmd(cli, action, out),
    }
}

fn univpoly(cli: &Cli, which: &Univpoly, out: &mut dyn Write) -> Result<i32, CliError> {
    let kinds: Vec<PolyKind> = match *which {
        Univpoly::Pn { n: Some(n), .. } => vec![PolyKind::Pn { n }],
        Univpoly::Pn { n: None, max_n } => (1..=max_n.unwrap_or(1))
            .map(|n| PolyKind::Pn { n })
            .collect(),
        Univpoly::Pnm { n: Some(n), m, .. } => vec![PolyKind::Pnm {
            n,
            m: m.expect("clap requires m"),
        }],
        Univpoly::Pnm {
            n: None,
            max_n,
            max_m,
            ..
        } => {
            let (a, b) = (max_n.unwrap_or(1), max_m.unwrap_or(1));
            (1..=a)
                .flat_map(|n| (1..=b).map(move |m| PolyKind::Pnm { n, m }))
                .collect()
        }
        Univpoly::Nu { k } => vec![PolyKind::Nu { k }],
    };
    if kinds.iter().any(|k| {
        matches!(
            k,
            PolyKind::Pn { n: 0 }
                | PolyKind::Pnm { n: 0, .. }
                | PolyKind::Pnm { m: 0, .. }
                | PolyKind::Nu { k: 0 }
        )
    }) {
        return Err(CliError::Usage("indices must be positive".into()));
    }
    let cache = resolve_cache(cli);
    let mut entries = Vec::new();
    for kind in kinds {
        let (p, note) = match &cache {
            Some(c) => match c.get_or_compute(kind) {
                Ok((p, Provenance::Recomputed { reason })) => (
                    p,
                    Some(format!(
                        "cache entry {} was unusable ({reason}); recomputed",
                        kind.cache_key()
                    )),
                ),
                Ok((p, _)) => (p, None),
                Err(e) => (
                    Arc::new(kind.compute()?),
                    Some(format!("cache unavailable: {e}")),
                ),
            },
            None => (Arc::new(kind.compute()?), None),
        };
        entries.push((kind, p, note));
    }
    match cli.format {
        Format::Text => {
            for (kind, p, note) in &entries {
                writeln!(out, "{kind} = {}", p.poly())?;
                if let Some(n) = note {
                    writeln!(out, "note: {n}")?;
                }
            }
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = entries
                .iter()
                .map(|(kind, p, note)| {
                    json!({
                        "key": kind.cache_key(),
                        "name": kind.to_string(),
                        "poly": p.poly().to_json_value(),
                        "text": p.poly().to_string(),
                        "note": note,
                    })
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&items).expect("serializable")
            )?;
        }
    }
    Ok(EXIT_OK)
}

/// Fills the in-process memo from the cache for every polynomial a
/// verification at truncation `n` can touch. Cache trouble only costs time.
fn warm_memo(cache: &Option<PolyCache>, n: usize) {
    let Some(c) = cache else { return };
    let mut kinds: Vec<PolyKind> = (1..=n).map(|n| PolyKind::Pn { n }).collect();
    kinds.extend((1..=n).flat_map(|a| (1..=n / a).map(move |m| PolyKind::Pnm { n: a, m })));
    kinds.extend((1..=n.max(4)).map(|k| PolyKind::Nu { k }));
    for k in kinds {
        let _ = c.get_or_compute(k);
    }
}

fn require_model(cfg: &RunConfig) -> Result<Arc<CdgaModel>, CliError> {
    cfg.model
        .clone()
        .ok_or_else(|| CliError::Usage("this suite needs --model or --spec".into()))
}

fn verify(suite: Suite, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let o = &cfg.opts;
    if suite != Suite::Splitting {
        warm_memo(&cfg.cache, o.trunc);
    }
    let mul_trunc = cfg.max_n.unwrap_or(3).min(o.trunc);
    let reports: Vec<Report> = match suite {
        Suite::PreLambda | Suite::Lambda => {
            let m = require_model(cfg)?;
            let mode = if suite == Suite::PreLambda {
                Mode::PreLambda
            } else {
                Mode::Lambda
            };
            let mut v = VerifyOptions::new(mode, o.samples, o.seed, o.trunc);
            v.mul_trunc = Some(mul_trunc);
            vec![verify_axioms(&DiffKRing::new(&m), &v)]
        }
        Suite::Adams => vec![suites::adams_suite(&require_model(cfg)?, o)],
        Suite::Diffk => vec![suites::diffk_suite(&require_model(cfg)?, o, mul_trunc)],
        Suite::Gamma => vec![suites::gamma_suite(&require_model(cfg)?, o)],
        Suite::Equivariant => {
            let m = require_model(cfg)?;
            let groups: Vec<AbelianGroup> = match (&cfg.group, &m.spec().group) {
                (Some(g), _) => {
                    vec![AbelianGroup::parse(g).map_err(|e| CliError::Usage(e.to_string()))?]
                }
                (None, Some(g)) => vec![AbelianGroup::from_spec(g)?],
                (None, None) => DEFAULT_GROUPS
                    .iter()
                    .map(|g| AbelianGroup::parse(g))
                    .collect::<Result<_, _>>()?,
            };
            groups
                .iter()
                .map(|g| suites::equivariant_suite(&m, g, o, mul_trunc))
                .collect()
        }
        Suite::Splitting => vec![suites::splitting_suite(cfg.max_n.unwrap_or(5), o.seed)],
        Suite::Witt => {
            let mut v = vec![suites::witt_laws(&BinomialRationals, o)];
            if let Some(m) = &cfg.model {
                v.push(suites::witt_laws(&GammaRing::new(m), o));
            }
            v
        }
    };
    match cfg.format {
        Format::Text => {
            for r in &reports {
                write!(out, "{}", r.to_text())?;
            }
        }
        Format::Json => {
            if let [r] = reports.as_slice() {
                writeln!(out, "{}", r.to_json())?;
            } else {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&reports).expect("serializable")
                )?;
            }
        }
    }
    Ok(exit_status(&reports))
}

/// `EXIT_OK` iff every check of every report passed.
pub fn exit_status(reports: &[Report]) -> i32 {
    if reports.iter().all(Report::all_pass) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn model_summary(m: &CdgaModel) -> serde_json::Value {
    let dims: Vec<usize> = (0..=m.top_degree()).map(|k| m.dim_of_degree(k)).collect();
    let gens: Vec<serde_json::Value> = m
        .generators()
        .iter()
        .map(|g| json!({"name": g.name, "degree": g.degree}))
        .collect();
    json!({
        "name": m.name(),
        "top_degree": m.top_degree(),
        "dimensions": dims,
        "total_dimension": m.dim(),
        "generators": gens,
        "formal_differential": m.is_formal(),
        "group": m.spec().group,
    })
}

fn model_cmd(cli: &Cli, action: &ModelAction, out: &mut dyn Write) -> Result<i32, CliError> {
    match action {
        ModelAction::List => {
            let mut items = Vec::new();
            for name in ModelSpec::builtin_names() {
                let m = CdgaModel::builtin(name)?;
                items.push(model_summary(&m));
            }
            match cli.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&items).expect("serializable")
                )?,
                Format::Text => {
                    for it in &items {
                        writeln!(
                            out,
                            "{:<8} top degree {}, dimensions {}",
                            it["name"].as_str().unwrap_or(""),
                            it["top_degree"],
                            it["dimensions"]
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        ModelAction::Validate { model, spec } => {
            // building checks d^2 = 0, the Leibniz rule and graded commutativity
            let m = load_model(model, spec)?.expect("clap requires one of them");
            let s = model_summary(&m);
            match cli.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&json!({"valid": true, "model": s}))
                        .expect("serializable")
                )?,
                Format::Text => writeln!(
                    out,
                    "{}: valid, top degree {}, dimensions {}",
                    m.name(),
                    m.top_degree(),
                    s["dimensions"]
                )?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn cache_cmd(cli: &Cli, action: &CacheAction, out: &mut dyn Write) -> Result<i32, CliError> {
    let cache = resolve_cache(cli)
        .ok_or_else(|| CliError::Usage("no cache directory; pass --cache".into()))?;
    match action {
        CacheAction::Clear => {
            let n = cache.clear()?;
            match cli.format {
                Format::Json => writeln!(out, "{}", json!({"dir": cache.dir(), "removed": n}))?,
                Format::Text => {
                    writeln!(out, "removed {n} entries from {}", cache.dir().display())?
                }
            }
        }
        CacheAction::Stats => {
            let s = cache.stats();
            match cli.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"dir": cache.dir(), "entries": s.entries, "bytes": s.bytes, "Pn": s.pn, "Pnm": s.pnm, "nu": s.nu})
                )?,
                Format::Text => writeln!(
                    out,
                    "{}: {} entries ({} P_n, {} P_nm, {} nu), {} bytes",
                    cache.dir().display(),
                    s.entries,
                    s.pn,
                    s.pnm,
                    s.nu,
                    s.bytes
                )?,
            }
        }
    }
    Ok(EXIT_OK)
}
