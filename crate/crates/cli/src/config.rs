//! Flat `key = value` run configuration. Values here override built-in
//! defaults and are themselves overridden by explicit flags.

use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;
use torelli::charvar::{BoundaryValue, Surface};
use torelli::polyring::MonomialOrder;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("`{key}`: {msg}")]
    Value { key: String, msg: String },
}

pub const KEYS: &[&str] = &[
    "surface", "c", "seed", "steps", "n", "budget", "pairs", "order", "row_variant", "bivector", "gens", "bins",
    "coords", "dt", "t", "project", "project_tol", "reject_tol", "out",
];

/// Settings shared by all subcommands; unset fields fall back to defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub surface: Option<Surface>,
    pub c: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub n: Option<usize>,
    pub budget: Option<u64>,
    pub pairs: Option<u64>,
    pub order: Option<MonomialOrder>,
    pub row_variant: Option<String>,
    pub bivector: Option<String>,
    pub gens: Option<Vec<String>>,
    pub bins: Option<usize>,
    pub coords: Option<Vec<String>>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub project: Option<bool>,
    pub project_tol: Option<f64>,
    pub reject_tol: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Splits the text into raw pairs. `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let key = k.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line: i + 1, key });
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(ConfigError::Duplicate { line: i + 1, key });
        }
    }
    Ok(out)
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        msg: e.to_string(),
    })
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (k, v) in parse_pairs(text)? {
            let v = v.as_str();
            match k.as_str() {
                "surface" => cfg.surface = Some(value(&k, v)?),
                "c" => {
                    cfg.c = Some(
                        v.split(',')
                            .map(|x| value::<f64>(&k, x.trim()))
                            .collect::<Result<_, _>>()?,
                    )
                }
                "seed" => cfg.seed = Some(value(&k, v)?),
                "steps" => cfg.steps = Some(value(&k, v)?),
                "n" => cfg.n = Some(value(&k, v)?),
                "budget" => cfg.budget = Some(value(&k, v)?),
                "pairs" => cfg.pairs = Some(value(&k, v)?),
                "order" => cfg.order = Some(value(&k, v)?),
                "row_variant" => cfg.row_variant = Some(v.to_string()),
                "bivector" => cfg.bivector = Some(v.to_string()),
                "gens" => cfg.gens = Some(list(v)),
                "bins" => cfg.bins = Some(value(&k, v)?),
                "coords" => cfg.coords = Some(list(v)),
                "dt" => cfg.dt = Some(value(&k, v)?),
                "t" => cfg.t_end = Some(value(&k, v)?),
                "project" => cfg.project = Some(value(&k, v)?),
                "project_tol" => cfg.project_tol = Some(value(&k, v)?),
                "reject_tol" => cfg.reject_tol = Some(value(&k, v)?),
                "out" => cfg.out = Some(PathBuf::from(v)),
                _ => unreachable!("key list checked in parse_pairs"),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Tolerances must be positive and boundary data must fit the surface.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, tol) in [("project_tol", self.project_tol), ("reject_tol", self.reject_tol)] {
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(ConfigError::Value {
                        key: key.into(),
                        msg: "must be positive".into(),
                    });
                }
            }
        }
        if let (Some(s), Some(c)) = (self.surface, &self.c) {
            BoundaryValue::new(s, c.clone()).map_err(|e| ConfigError::Value {
                key: "c".into(),
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let cfg = RunConfig::parse("# run\nsurface = 2ht\nc = 0.3, -1.1\nseed=7\norder = lex\nproject = true\n").unwrap();
        assert_eq!(cfg.surface, Some(Surface::TwoHoledTorus));
        assert_eq!(cfg.c, Some(vec![0.3, -1.1]));
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.order, Some(MonomialOrder::Lex));
        assert_eq!(cfg.project, Some(true));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(RunConfig::parse("seed 7"), Err(ConfigError::Syntax { line: 1 }));
        assert!(matches!(RunConfig::parse("colour = red"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(RunConfig::parse("seed=1\nseed=2"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(matches!(RunConfig::parse("seed = -1"), Err(ConfigError::Value { .. })));
        assert!(matches!(RunConfig::parse("project_tol = 0"), Err(ConfigError::Value { .. })));
        // arity must match the surface
        assert!(matches!(RunConfig::parse("surface = 4hs\nc = 0.3,-1.1"), Err(ConfigError::Value { .. })));
    }
}
