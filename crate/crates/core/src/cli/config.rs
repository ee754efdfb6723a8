use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexseq::IndexSequence;
use crate::numeration::NumerationSystem;
use crate::salem::{SalemParams, MIN_TOL};
use crate::text::parse_rational;
use crate::Rational;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_DEPTH: usize = 64;
/// Every evaluation allocates `O(q)` weights; larger bases are refused.
pub const MAX_Q: u32 = 1 << 16;

/// Flags shared by every subcommand. Each one overrides the same field of
/// the `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Base magnitude; digits run over 0..q-1.
    #[arg(short = 'q', long = "q", global = true)]
    pub q: Option<u32>,
    /// Comma-separated weights p_0,..,p_{q-1} (`a/b` or decimal).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Index sequence: `id` or `n_1,..,n_L|+d`.
    #[arg(long, global = true)]
    pub perm: Option<String>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Digit depth for identity checks and cylinder scans.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file with any of the fields q, p, perm, tol, depth, seed.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A weight written either as text (`"1/3"`) or as a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Weight {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Weight::Text(s) => parse_rational(s),
            Weight::Int(n) => parse_rational(&n.to_string()),
            // `Display` gives the shortest round-trip decimal, so 0.1 -> 1/10.
            Weight::Float(x) => parse_rational(&x.to_string()),
        }
    }
}

/// On-disk configuration. Every field is optional; missing ones take the
/// defaults of [`RunConfig`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<u32>,
    pub p: Option<Vec<Weight>>,
    pub perm: Option<String>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SalemParams,
    pub perm: IndexSequence,
    pub tol: f64,
    pub depth: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn system(&self) -> &NumerationSystem {
        self.params.system()
    }

    /// Merges flags over the optional config file and validates the result.
    pub fn resolve(args: &ConfigArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::merge(args, file)
    }

    pub fn merge(args: &ConfigArgs, file: ConfigFile) -> Result<Self> {
        let q = args.q.or(file.q).unwrap_or(2);
        if q > MAX_Q {
            return Err(Error::Argument(format!("q must be at most {MAX_Q}, got {q}")));
        }
        let params = match (&args.p, &file.p) {
            (Some(text), _) => SalemParams::new(
                q,
                text.split(',')
                    .map(|w| parse_rational(w.trim()))
                    .collect::<Result<_>>()?,
            )?,
            (None, Some(list)) => SalemParams::new(
                q,
                list.iter().map(Weight::to_rational).collect::<Result<_>>()?,
            )?,
            (None, None) => SalemParams::uniform(q)?,
        };
        let perm: IndexSequence = args
            .perm
            .as_deref()
            .or(file.perm.as_deref())
            .unwrap_or("id")
            .parse()?;
        let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol >= MIN_TOL) {
            return Err(Error::Argument(format!(
                "tol must be a finite number >= {MIN_TOL:e}, got {tol}"
            )));
        }
        let depth = args.depth.or(file.depth).unwrap_or(DEFAULT_DEPTH);
        if depth == 0 {
            return Err(Error::Argument("depth must be at least 1".into()));
        }
        Ok(Self {
            params,
            perm,
            tol,
            depth,
            seed: args.seed.or(file.seed).unwrap_or(0),
            out: args.out.clone(),
        })
    }
}
