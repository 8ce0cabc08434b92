//! The relation `k`, the coefficient polynomials, the torus sum/product
//! formulas, boundary maps and trace functions for both surfaces.

use crate::polyring::{FloatPoly, Point7, Poly, Var};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use thiserror::Error;

use Var::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharvarError {
    #[error("trace function {name} is not defined on the {surface}")]
    UnknownTrace { surface: Surface, name: TraceName },
    #[error("{surface} expects {expected} boundary values, got {got}")]
    BoundaryArity {
        surface: Surface,
        expected: usize,
        got: usize,
    },
    #[error("boundary value {value} outside [-2, 2]")]
    BoundaryRange { value: f64 },
    #[error("unknown surface `{0}` (expected 4hs or 2ht)")]
    UnknownSurface(String),
    #[error("unknown trace function `{0}`")]
    UnknownTraceName(String),
}

/// The two surfaces whose fundamental group is free of rank three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Surface {
    /// Genus 0 with four boundary components.
    #[serde(rename = "4hs")]
    FourHoledSphere,
    /// Genus 1 with two boundary components.
    #[serde(rename = "2ht")]
    TwoHoledTorus,
}

impl Surface {
    pub const ALL: [Surface; 2] = [Surface::FourHoledSphere, Surface::TwoHoledTorus];

    pub fn tag(self) -> &'static str {
        match self {
            Surface::FourHoledSphere => "4hs",
            Surface::TwoHoledTorus => "2ht",
        }
    }

    pub fn boundary_count(self) -> usize {
        match self {
            Surface::FourHoledSphere => 4,
            Surface::TwoHoledTorus => 2,
        }
    }

    /// The boundary map `F`: `(t1, t2, t3, t4)` on the sphere and
    /// `(t4, k_s - t4)` on the torus.
    pub fn boundary_functions(self) -> &'static [Poly] {
        static SPHERE: OnceLock<Vec<Poly>> = OnceLock::new();
        static TORUS: OnceLock<Vec<Poly>> = OnceLock::new();
        match self {
            Surface::FourHoledSphere => SPHERE.get_or_init(|| {
                vec![Poly::var(T1), Poly::var(T2), Poly::var(T3), Poly::var(T4)]
            }),
            Surface::TwoHoledTorus => TORUS.get_or_init(|| {
                let (ks, _) = sum_product();
                vec![Poly::var(T4), ks - Poly::var(T4)]
            }),
        }
    }

    /// Names of the trace functions whose Hamiltonian flows drive the action.
    pub fn trace_names(self) -> &'static [TraceName] {
        match self {
            Surface::FourHoledSphere => &[TraceName::P12, TraceName::P0],
            Surface::TwoHoledTorus => &[TraceName::P12, TraceName::P23, TraceName::P13, TraceName::P0],
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::FourHoledSphere => "4-holed sphere",
            Surface::TwoHoledTorus => "2-holed torus",
        })
    }
}

impl FromStr for Surface {
    type Err = CharvarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4hs" => Ok(Surface::FourHoledSphere),
            "2ht" => Ok(Surface::TwoHoledTorus),
            other => Err(CharvarError::UnknownSurface(other.to_string())),
        }
    }
}

/// Trace functions of the twist curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceName {
    P12,
    P23,
    P13,
    P0,
}

impl TraceName {
    pub fn tag(self) -> &'static str {
        match self {
            TraceName::P12 => "p12",
            TraceName::P23 => "p23",
            TraceName::P13 => "p13",
            TraceName::P0 => "p0",
        }
    }
}

impl fmt::Display for TraceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TraceName {
    type Err = CharvarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p12" => Ok(TraceName::P12),
            "p23" => Ok(TraceName::P23),
            "p13" => Ok(TraceName::P13),
            "p0" => Ok(TraceName::P0),
            other => Err(CharvarError::UnknownTraceName(other.to_string())),
        }
    }
}

fn v(x: Var) -> Poly {
    Poly::var(x)
}

fn n(c: i64) -> Poly {
    Poly::int(c)
}

/// `c12 = t1 t2 + t3 t4`
pub fn c12() -> Poly {
    v(T1) * v(T2) + v(T3) * v(T4)
}

/// `c23 = t2 t3 + t1 t4`
pub fn c23() -> Poly {
    v(T2) * v(T3) + v(T1) * v(T4)
}

/// `c13 = t1 t3 + t2 t4`
pub fn c13() -> Poly {
    v(T1) * v(T3) + v(T2) * v(T4)
}

/// `c0 = 4 - t1^2 - t2^2 - t3^2 - t4^2 - t1 t2 t3 t4`
pub fn c0() -> Poly {
    n(4) - v(T1).pow(2) - v(T2).pow(2) - v(T3).pow(2) - v(T4).pow(2)
        - v(T1) * v(T2) * v(T3) * v(T4)
}

/// The defining relation of the rank-three free group character variety,
/// with the coefficient polynomials expanded.
pub fn relation_k() -> Poly {
    static K: OnceLock<Poly> = OnceLock::new();
    K.get_or_init(|| {
        v(T12).pow(2) + v(T23).pow(2) + v(T13).pow(2) + v(T12) * v(T23) * v(T13)
            - c12() * v(T12)
            - c23() * v(T23)
            - c13() * v(T13)
            - c0()
    })
    .clone()
}

/// The torus sum and product formulas `(k_s, k_p)`: traces of the two
/// boundary words add to `k_s` and multiply to `k_p`.
pub fn sum_product() -> (Poly, Poly) {
    static KS_KP: OnceLock<(Poly, Poly)> = OnceLock::new();
    KS_KP
        .get_or_init(|| {
            let ks = v(T13) * v(T2) + v(T1) * v(T23) + v(T12) * v(T3) - v(T1) * v(T2) * v(T3);
            let kp = v(T2).pow(2)
                + v(T3).pow(2)
                + v(T1).pow(2)
                + v(T12).pow(2)
                + v(T13).pow(2)
                + v(T23).pow(2)
                + v(T12) * v(T13) * v(T23)
                - v(T2) * v(T3) * v(T23)
                - v(T2) * v(T1) * v(T12)
                - v(T3) * v(T1) * v(T13)
                - n(4);
            (ks, kp)
        })
        .clone()
}

/// `k - (k_p - t4 (k_s - t4))`, which should vanish identically.
pub fn relation_identity_defect() -> Poly {
    let (ks, kp) = sum_product();
    relation_k() - (kp - v(T4) * (ks - v(T4)))
}

pub fn verify_relation_identity() -> bool {
    relation_identity_defect().is_zero()
}

fn commutator_trace(a: Var, b: Var, ab: Var) -> Poly {
    n(-2) + v(a).pow(2) + v(ab).pow(2) - v(a) * v(ab) * v(b) + v(b).pow(2)
}

/// The trace function attached to a twist curve.
pub fn trace_fn(surface: Surface, name: TraceName) -> Result<Poly, CharvarError> {
    match (surface, name) {
        (Surface::FourHoledSphere, TraceName::P12) => Ok(v(T12)),
        (Surface::FourHoledSphere, TraceName::P0) => Ok(c12() - v(T23) * v(T13) - v(T12)),
        (Surface::FourHoledSphere, name) => Err(CharvarError::UnknownTrace { surface, name }),
        (Surface::TwoHoledTorus, TraceName::P12) => Ok(commutator_trace(T1, T2, T12)),
        (Surface::TwoHoledTorus, TraceName::P23) => Ok(commutator_trace(T2, T3, T23)),
        (Surface::TwoHoledTorus, TraceName::P13) => Ok(commutator_trace(T1, T3, T13)),
        (Surface::TwoHoledTorus, TraceName::P0) => Ok(c0()
            + v(T1) * v(T12) * v(T2)
            + v(T4) * v(T13) * v(T2)
            + v(T1) * v(T4) * v(T23)
            + v(T12) * v(T4) * v(T3)
            - v(T1) * v(T13) * v(T3)
            - v(T1) * v(T12) * v(T23) * v(T3)
            + v(T2) * v(T23) * v(T3)
            + v(T1).pow(2) * v(T3).pow(2)
            - n(2)),
    }
}

/// Boundary data `c`, one trace per boundary component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryValue(Vec<f64>);

impl BoundaryValue {
    pub fn new(surface: Surface, values: Vec<f64>) -> Result<BoundaryValue, CharvarError> {
        if values.len() != surface.boundary_count() {
            return Err(CharvarError::BoundaryArity {
                surface,
                expected: surface.boundary_count(),
                got: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|x| !(-2.0..=2.0).contains(*x)) {
            return Err(CharvarError::BoundaryRange { value: bad });
        }
        Ok(BoundaryValue(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Parses `0.3,-1.1` style lists.
    pub fn parse(surface: Surface, text: &str) -> Result<BoundaryValue, String> {
        let values = text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad boundary value `{s}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        BoundaryValue::new(surface, values).map_err(|e| e.to_string())
    }
}

/// Float-compiled constraint functions: the boundary map followed by `k`.
pub fn constraint_functions(surface: Surface) -> &'static [FloatPoly] {
    static SPHERE: OnceLock<Vec<FloatPoly>> = OnceLock::new();
    static TORUS: OnceLock<Vec<FloatPoly>> = OnceLock::new();
    let build = |s: Surface| {
        let mut out: Vec<FloatPoly> = s.boundary_functions().iter().map(FloatPoly::new).collect();
        out.push(FloatPoly::new(&relation_k()));
        out
    };
    match surface {
        Surface::FourHoledSphere => SPHERE.get_or_init(|| build(Surface::FourHoledSphere)),
        Surface::TwoHoledTorus => TORUS.get_or_init(|| build(Surface::TwoHoledTorus)),
    }
}

/// `F(x) - c` per component, with `k(x)` appended.
pub fn boundary_residual(surface: Surface, c: &BoundaryValue, x: &Point7) -> Vec<f64> {
    let fs = constraint_functions(surface);
    let nb = surface.boundary_count();
    fs.iter()
        .enumerate()
        .map(|(i, f)| if i < nb { f.eval(x) - c.values()[i] } else { f.eval(x) })
        .collect()
}
