//! Run configuration: a flat TOML file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use spcd_core::{Level, MRule};

use crate::error::{io_at, Error, Result};

pub const DEFAULT_N0: usize = 32;
pub const DEFAULT_LEVELS: usize = 7;
pub const DEFAULT_EPS_MAX_EXP: u32 = 26;

/// Every setting optional; used for both the file and the flags.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PartialConfig {
    pub example: Option<u32>,
    pub level: Option<u8>,
    pub n0: Option<usize>,
    pub levels: Option<usize>,
    pub eps_min_exp: Option<u32>,
    pub eps_max_exp: Option<u32>,
    pub m_rule: Option<String>,
    pub out: Option<PathBuf>,
    pub tables: Option<bool>,
    pub surfaces: Option<String>,
    pub workers: Option<usize>,
}

impl PartialConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path).map_err(io_at(path))?)
    }

    /// Values set in `over` win.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            example: over.example.or(self.example),
            level: over.level.or(self.level),
            n0: over.n0.or(self.n0),
            levels: over.levels.or(self.levels),
            eps_min_exp: over.eps_min_exp.or(self.eps_min_exp),
            eps_max_exp: over.eps_max_exp.or(self.eps_max_exp),
            m_rule: over.m_rule.or(self.m_rule),
            out: over.out.or(self.out),
            tables: over.tables.or(self.tables),
            surfaces: over.surfaces.or(self.surfaces),
            workers: over.workers.or(self.workers),
        }
    }
}

/// Which grid functions to dump as `(x, t, value)` triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceRequest {
    pub eps_exp: u32,
    pub n: usize,
    pub m: usize,
}

impl FromStr for SurfaceRequest {
    type Err = Error;

    /// `eps=<exp>,n=<int>[,m=<int>]`; `m` defaults to `n`.
    fn from_str(s: &str) -> Result<Self> {
        let (mut eps_exp, mut n, mut m) = (None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("surface spec entry `{part}` is not key=value")))?;
            let bad = || Error::Usage(format!("surface spec: bad value `{value}` for `{key}`"));
            match key.trim() {
                "eps" => eps_exp = Some(value.trim().parse().map_err(|_| bad())?),
                "n" => n = Some(value.trim().parse().map_err(|_| bad())?),
                "m" => m = Some(value.trim().parse().map_err(|_| bad())?),
                other => return Err(Error::Usage(format!("surface spec: unknown key `{other}`"))),
            }
        }
        match (eps_exp, n) {
            (Some(eps_exp), Some(n)) => Ok(SurfaceRequest { eps_exp, n, m: m.unwrap_or(n) }),
            _ => Err(Error::Usage(format!("surface spec `{s}` needs eps=<exp>,n=<int>"))),
        }
    }
}

pub fn parse_m_rule(s: &str) -> Result<MRule> {
    match s.trim() {
        "n" | "N" => Ok(MRule::MatchN),
        other => other
            .strip_prefix("fixed:")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&m: &usize| m > 0)
            .map(MRule::Fixed)
            .ok_or_else(|| Error::Usage(format!("m-rule `{s}`: expected `n` or `fixed:<int>`"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub example: u32,
    pub level: Level,
    pub n0: usize,
    /// Number of `D` columns; the finest solve uses `N = n0·2^levels`.
    pub levels: usize,
    /// Rows of the table, `ε = 2^{−e}`.
    pub eps_exponents: Vec<u32>,
    pub m_rule: MRule,
    pub out: PathBuf,
    pub tables: bool,
    pub surfaces: Option<SurfaceRequest>,
    /// `None` lets rayon pick.
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Defaults matching the published tables.
    pub fn new(example: u32) -> Self {
        RunConfig {
            example,
            level: Level::Jump,
            n0: DEFAULT_N0,
            levels: DEFAULT_LEVELS,
            eps_exponents: (0..=DEFAULT_EPS_MAX_EXP).collect(),
            m_rule: MRule::MatchN,
            out: PathBuf::from("."),
            tables: true,
            surfaces: None,
            workers: None,
        }
    }

    pub fn from_partial(p: PartialConfig) -> Result<Self> {
        let example = p.example.ok_or_else(|| Error::Usage("missing example id".into()))?;
        crate::examples::example(example)?;
        let mut cfg = RunConfig::new(example);
        if let Some(l) = p.level {
            cfg.level = Level::from_index(l).map_err(|_| Error::Usage(format!("level must be 0 or 1, got {l}")))?;
        }
        cfg.n0 = p.n0.unwrap_or(cfg.n0);
        cfg.levels = p.levels.unwrap_or(cfg.levels);
        let lo = p.eps_min_exp.unwrap_or(0);
        let hi = p.eps_max_exp.unwrap_or(DEFAULT_EPS_MAX_EXP);
        if lo > hi {
            return Err(Error::Usage(format!("eps-min-exp {lo} exceeds eps-max-exp {hi}")));
        }
        if hi > 60 {
            return Err(Error::Usage(format!("eps-max-exp {hi} is out of range")));
        }
        cfg.eps_exponents = (lo..=hi).collect();
        if let Some(r) = &p.m_rule {
            cfg.m_rule = parse_m_rule(r)?;
        }
        cfg.out = p.out.unwrap_or(cfg.out);
        cfg.tables = p.tables.unwrap_or(cfg.tables);
        cfg.surfaces = p.surfaces.as_deref().map(str::parse).transpose()?;
        if p.workers == Some(0) {
            return Err(Error::Usage("workers must be positive".into()));
        }
        cfg.workers = p.workers;
        if cfg.n0 < 4 || !cfg.n0.is_multiple_of(4) {
            return Err(Error::Usage(format!("n0 must be a positive multiple of 4, got {}", cfg.n0)));
        }
        if cfg.levels < 2 {
            return Err(Error::Usage(format!("levels must be at least 2, got {}", cfg.levels)));
        }
        Ok(cfg)
    }
}
