//! Run settings: defaults, then the `key = value` file, then the worker
//! environment variable, then command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Parser;
use elliptic_currents::config::{parse_complex, parse_rational};
use elliptic_currents::verifier::SuiteConfig;
use elliptic_currents::{CartanMatrix, DeformationParams, Error, Result};

/// Environment variable for the worker count; a `--threads` flag wins.
pub const THREADS_ENV: &str = "ELLIPTIC_VERIFY_THREADS";

#[derive(Debug, Parser, Default)]
#[command(
    name = "verify",
    version,
    about = "Checks the relations of the elliptic current algebra in its free-field representation"
)]
pub struct Cli {
    /// Algebra label such as A2, D4, E6 (or a bare series letter with --rank).
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Elliptic nome p (complex values as `0.1+0.02i`).
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Central charge, an integer or fraction; operator checks need c = 1.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Truncation order of products and series.
    #[arg(long)]
    pub order: Option<usize>,
    /// Fock-space degree cap D.
    #[arg(long)]
    pub fock_degree: Option<u32>,
    /// Mode window |m|, |n| for the Fock route.
    #[arg(long)]
    pub fock_window: Option<i64>,
    /// Sample points per node pair for exchange and normal-ordering checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// |w/z| of those sample points.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub serre_samples: Option<usize>,
    #[arg(long)]
    pub structure_samples: Option<usize>,
    /// Tolerance of the series-route checks.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub fock_tol: Option<f64>,
    #[arg(long)]
    pub serre_tol: Option<f64>,
    #[arg(long)]
    pub structure_tol: Option<f64>,
    /// Comma-separated relation ids or groups (e.g. `exchange,commutator/EF`).
    #[arg(long)]
    pub relations: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (also read from ELLIPTIC_VERIFY_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Text summary path (the summary is always printed to stdout).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// `key = value` configuration file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// List the relation catalogue and exit.
    #[arg(long)]
    pub list: bool,
}

/// Everything the runner needs, after precedence has been applied.
#[derive(Debug)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "algebra",
    "rank",
    "p",
    "q",
    "c",
    "order",
    "fock_degree",
    "fock_window",
    "samples",
    "radius",
    "serre_samples",
    "structure_samples",
    "tol",
    "fock_tol",
    "serre_tol",
    "structure_tol",
    "relations",
    "seed",
    "threads",
    "out",
    "summary",
];

/// Parses `key = value` lines; `#` starts a comment, keys may use `-` or `_`.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key {:?}", n + 1, k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn pick<T>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T: std::str::FromStr,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key).map(|v| num(key, v)).transpose(),
    }
}

fn pick_str(flag: Option<String>, file: &BTreeMap<String, String>, key: &str) -> Option<String> {
    flag.or_else(|| file.get(key).cloned())
}

fn cartan(label: &str, rank: Option<usize>) -> Result<CartanMatrix> {
    let has_digits = label.chars().any(|c| c.is_ascii_digit());
    match (has_digits, rank) {
        (true, None) => label.parse(),
        (true, Some(r)) => {
            let m: CartanMatrix = label.parse()?;
            if m.rank() != r {
                return Err(Error::Config(format!("algebra {label} has rank {}, not {r}", m.rank())));
            }
            Ok(m)
        }
        (false, Some(r)) => format!("{label}{r}").parse(),
        (false, None) => Err(Error::Config(format!("algebra {label:?} needs a rank"))),
    }
}

impl Cli {
    /// Applies the precedence chain; `threads_env` is the raw value of
    /// [`THREADS_ENV`], passed in so that tests need not touch the process
    /// environment.
    pub fn resolve(self, threads_env: Option<&str>) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => parse_config_text(&read(path)?)?,
            None => BTreeMap::new(),
        };
        let label = pick_str(self.algebra, &file, "algebra").unwrap_or_else(|| "A2".into());
        let rank = pick(self.rank, &file, "rank")?;
        let cartan = cartan(&label, rank)?;

        let p = parse_complex(&pick_str(self.p, &file, "p").unwrap_or_else(|| "0.09".into()))?;
        let q = parse_complex(&pick_str(self.q, &file, "q").unwrap_or_else(|| "0.3".into()))?;
        let c = parse_rational(&pick_str(self.c, &file, "c").unwrap_or_else(|| "1".into()))?;
        let params = DeformationParams::new(p, q, c)?;

        let mut suite = SuiteConfig::new(cartan, params);
        if let Some(v) = pick(self.order, &file, "order")? {
            suite.order = v;
        }
        if let Some(v) = pick(self.fock_degree, &file, "fock_degree")? {
            suite.fock_degree = v;
        }
        if let Some(v) = pick(self.fock_window, &file, "fock_window")? {
            suite.fock_window = v;
        }
        if let Some(v) = pick(self.samples, &file, "samples")? {
            suite.samples = v;
        }
        if let Some(v) = pick(self.radius, &file, "radius")? {
            suite.radius = v;
        }
        if let Some(v) = pick(self.serre_samples, &file, "serre_samples")? {
            suite.serre_samples = v;
        }
        if let Some(v) = pick(self.structure_samples, &file, "structure_samples")? {
            suite.structure_samples = v;
        }
        let t = &mut suite.tolerances;
        for (slot, flag, key) in [
            (&mut t.series, self.tol, "tol"),
            (&mut t.fock, self.fock_tol, "fock_tol"),
            (&mut t.serre, self.serre_tol, "serre_tol"),
            (&mut t.structure, self.structure_tol, "structure_tol"),
        ] {
            if let Some(v) = pick(flag, &file, key)? {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{key} must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        if let Some(v) = pick_str(self.relations, &file, "relations") {
            suite.relations = v
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
        }
        if let Some(v) = pick(self.seed, &file, "seed")? {
            suite.seed = v;
        }
        // flag > environment > file
        suite.threads = match (self.threads, threads_env) {
            (Some(n), _) => Some(n),
            (None, Some(env)) => Some(num(THREADS_ENV, env.trim())?),
            (None, None) => file.get("threads").map(|v| num("threads", v)).transpose()?,
        };
        suite.validate()?;
        Ok(RunConfig {
            suite,
            out: pick_str(self.out.map(path_string), &file, "out").map(PathBuf::from),
            summary: pick_str(self.summary.map(path_string), &file, "summary").map(PathBuf::from),
        })
    }
}

fn path_string(p: PathBuf) -> String {
    p.to_string_lossy().into_owned()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))
}
