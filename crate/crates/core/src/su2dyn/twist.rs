use super::{trace_coords, RepTuple, Word};
use crate::charvar::{relation_k, Surface};
use crate::polyring::FloatPoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    #[error("twist table is not valid JSON: {0}")]
    Json(String),
    #[error("table is for {found}, expected {expected}")]
    Surface { expected: Surface, found: Surface },
    #[error("rule `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("no rule named `{0}`")]
    Unknown(String),
}

/// A free-group automorphism `F_i ↦ images[i]` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRule {
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// The curve twisted along; its trace is invariant.
    pub curve: Word,
    pub images: [Word; 3],
    pub inverse: [Word; 3],
}

impl TwistRule {
    pub fn apply(&self, r: &RepTuple) -> RepTuple {
        RepTuple(std::array::from_fn(|i| self.images[i].eval(r)))
    }

    pub fn apply_inverse(&self, r: &RepTuple) -> RepTuple {
        RepTuple(std::array::from_fn(|i| self.inverse[i].eval(r)))
    }
}

/// A twist or its inverse, as chosen by a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move<'a> {
    pub rule: &'a TwistRule,
    pub inverse: bool,
}

impl Move<'_> {
    pub fn apply(&self, r: &RepTuple) -> RepTuple {
        if self.inverse {
            self.rule.apply_inverse(r)
        } else {
            self.rule.apply(r)
        }
    }
}

impl fmt::Display for Move<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.rule.name)
        } else {
            write!(f, "{}", self.rule.name)
        }
    }
}

/// Words whose traces are the boundary values.
pub fn boundary_words(surface: Surface) -> Vec<Word> {
    let w = Word::from_signed;
    match surface {
        Surface::FourHoledSphere => vec![w(&[1]), w(&[2]), w(&[3]), w(&[1, 2, 3])],
        Surface::TwoHoledTorus => vec![w(&[1, 2, 3]), w(&[1, 3, 2])],
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Validation {
    pub samples: usize,
    pub seed: u64,
    pub trace_tol: f64,
    pub relation_tol: f64,
}

impl Default for Validation {
    fn default() -> Self {
        Validation {
            samples: 1000,
            seed: 0x7715,
            trace_tol: 1e-12,
            relation_tol: 1e-10,
        }
    }
}

/// Worst deviations seen while validating one rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RuleReport {
    pub boundary: f64,
    pub curve: f64,
    pub relation: f64,
}

/// Checks that `rule` is an automorphism with the given inverse and that it
/// preserves the boundary traces, its own curve trace and the relation.
pub fn validate_rule(surface: Surface, rule: &TwistRule, v: &Validation) -> Result<RuleReport, TwistError> {
    let invalid = |reason: String| TwistError::Invalid {
        name: rule.name.clone(),
        reason,
    };
    for i in 0..3 {
        let g = Word::generator(i as u8 + 1);
        if rule.inverse[i].substitute(&rule.images) != g || rule.images[i].substitute(&rule.inverse) != g {
            return Err(invalid(format!("inverse does not undo F{} after free reduction", i + 1)));
        }
    }
    let k = FloatPoly::new(&relation_k());
    let boundary = boundary_words(surface);
    let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
    let mut rep = RuleReport::default();
    for _ in 0..v.samples {
        let a = RepTuple::random(&mut rng);
        for b in [rule.apply(&a), rule.apply_inverse(&a)] {
            for w in &boundary {
                rep.boundary = rep.boundary.max((w.eval(&a).trace() - w.eval(&b).trace()).abs());
            }
            rep.curve = rep.curve.max((rule.curve.eval(&a).trace() - rule.curve.eval(&b).trace()).abs());
            rep.relation = rep.relation.max(k.eval(&trace_coords(&b)).abs());
        }
    }
    if rep.boundary > v.trace_tol {
        return Err(invalid(format!("boundary trace moved by {:e}", rep.boundary)));
    }
    if rep.curve > v.trace_tol {
        return Err(invalid(format!("curve trace moved by {:e}", rep.curve)));
    }
    if rep.relation > v.relation_tol {
        return Err(invalid(format!("relation residual {:e}", rep.relation)));
    }
    Ok(rep)
}

/// The twists generating the mapping class action on one surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistTable {
    pub surface: Surface,
    pub rules: Vec<TwistRule>,
}

impl TwistTable {
    /// Parses and validates a table; a rule failing any check rejects the table.
    pub fn from_json(surface: Surface, text: &str) -> Result<TwistTable, TwistError> {
        let table = TwistTable::parse(text)?;
        if table.surface != surface {
            return Err(TwistError::Surface {
                expected: surface,
                found: table.surface,
            });
        }
        table.validate(&Validation::default())?;
        Ok(table)
    }

    /// Parses without validating.
    pub fn parse(text: &str) -> Result<TwistTable, TwistError> {
        serde_json::from_str(text).map_err(|e| TwistError::Json(e.to_string()))
    }

    pub fn validate(&self, v: &Validation) -> Result<Vec<RuleReport>, TwistError> {
        self.rules.iter().map(|r| validate_rule(self.surface, r, v)).collect()
    }

    /// The validated table shipped with the crate.
    pub fn shipped(surface: Surface) -> &'static TwistTable {
        static SPHERE: OnceLock<TwistTable> = OnceLock::new();
        static TORUS: OnceLock<TwistTable> = OnceLock::new();
        match surface {
            Surface::FourHoledSphere => SPHERE.get_or_init(|| {
                TwistTable::from_json(surface, include_str!("../../data/twists_4hs.json")).expect("shipped sphere twists")
            }),
            Surface::TwoHoledTorus => TORUS.get_or_init(|| {
                TwistTable::from_json(surface, include_str!("../../data/twists_2ht.json")).expect("shipped torus twists")
            }),
        }
    }

    pub fn get(&self, name: &str) -> Result<&TwistRule, TwistError> {
        self.rules
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| TwistError::Unknown(name.to_string()))
    }

    /// Rules by name, all of them when `names` is empty.
    pub fn select(&self, names: &[&str]) -> Result<Vec<&TwistRule>, TwistError> {
        if names.is_empty() {
            return Ok(self.rules.iter().collect());
        }
        names.iter().map(|n| self.get(n)).collect()
    }
}
