//! Dependency polynomials `s` (Jacobian determinants of the boundary traces,
//! `k` and the twist Hamiltonians) and exact splitting of `s` into factors.

mod split;
pub mod univariate;

pub use split::{poly_sqrt, split_by_lines, try_quadratic_split};

use crate::charvar::{relation_k, sum_product, trace_fn, Surface, TraceName};
use crate::polyring::{Point7, Poly, PolyMatrix, Rat, Var};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocusError {
    #[error("Jacobian determinant vanishes identically for rows {0:?}")]
    Degenerate(Vec<String>),
}

/// Which torus boundary function is used for the second row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowVariant {
    /// `k_s - t4`, the trace of the second boundary curve.
    #[default]
    Ks,
    /// `k_p - t4`.
    Kp,
}

impl FromStr for RowVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ks" => Ok(RowVariant::Ks),
            "kp" => Ok(RowVariant::Kp),
            other => Err(format!("unknown row variant `{other}` (expected ks or kp)")),
        }
    }
}

impl fmt::Display for RowVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowVariant::Ks => "ks",
            RowVariant::Kp => "kp",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DependencyResult {
    pub s: Poly,
    /// Gradient rows, one per function in `row_labels`.
    pub jacobian: PolyMatrix,
    pub row_labels: Vec<String>,
    /// `det(jacobian) = normalization * s`.
    pub normalization: Rat,
}

/// Orientation of the volume form: with this scalar the sphere determinant
/// is `2 t23^2 - c23 t23 - 2 t13^2 + c13 t13` on the nose.
const NORMALIZATION: i64 = 1;

/// The rows defining `s` for a surface.
pub fn dependency_rows(surface: Surface, variant: RowVariant) -> Vec<(String, Poly)> {
    let trace = |n: TraceName| trace_fn(surface, n).expect("trace exists on surface");
    let t = |v: Var| Poly::var(v);
    match surface {
        Surface::FourHoledSphere => vec![
            ("t4".into(), t(Var::T4)),
            ("t1".into(), t(Var::T1)),
            ("t2".into(), t(Var::T2)),
            ("t3".into(), t(Var::T3)),
            ("k".into(), relation_k()),
            ("p0".into(), trace(TraceName::P0)),
            ("p12".into(), trace(TraceName::P12)),
        ],
        Surface::TwoHoledTorus => {
            let (ks, kp) = sum_product();
            let second = match variant {
                RowVariant::Ks => ("k_s - t4".to_string(), ks - t(Var::T4)),
                RowVariant::Kp => ("k_p - t4".to_string(), kp - t(Var::T4)),
            };
            vec![
                ("t4".into(), t(Var::T4)),
                second,
                ("k".into(), relation_k()),
                ("p12".into(), trace(TraceName::P12)),
                ("p23".into(), trace(TraceName::P23)),
                ("p13".into(), trace(TraceName::P13)),
                ("p0".into(), trace(TraceName::P0)),
            ]
        }
    }
}

pub fn jacobian(rows: &[(String, Poly)]) -> PolyMatrix {
    PolyMatrix::from_rows(rows.iter().map(|(_, f)| f.gradient().to_vec()).collect())
}

/// The dependency polynomial `s` with its Jacobian.
pub fn dependency_poly(surface: Surface, variant: RowVariant) -> Result<DependencyResult, LocusError> {
    let rows = dependency_rows(surface, variant);
    let jac = jacobian(&rows);
    let det = jac.det();
    let labels: Vec<String> = rows.into_iter().map(|(l, _)| l).collect();
    if det.is_zero() {
        return Err(LocusError::Degenerate(labels));
    }
    let normalization = Rat::from_integer(NORMALIZATION.into());
    let s = det.scale(&(Rat::one() / &normalization));
    Ok(DependencyResult {
        s,
        jacobian: jac,
        row_labels: labels,
        normalization,
    })
}

/// `|s(x)| < tol`.
pub fn on_locus(s: &Poly, x: &Point7, tol: f64) -> bool {
    s.eval_f64(x).abs() < tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_s_reference() -> Poly {
        "2*t23^2 - t2*t3*t23 - t1*t4*t23 - 2*t13^2 + t1*t3*t13 + t2*t4*t13"
            .parse()
            .unwrap()
    }

    #[test]
    fn sphere_s() {
        let r = dependency_poly(Surface::FourHoledSphere, RowVariant::Ks).unwrap();
        assert_eq!(r.s, sphere_s_reference());
        assert_eq!(r.jacobian.det_cofactor(), r.s);
        assert!(on_locus(&r.s, &[2.0; 7], 1e-9));
        assert_eq!(r.s.diff(Var::T23), "4*t23 - t2*t3 - t1*t4".parse().unwrap());
    }

    #[test]
    fn swapping_rows_negates() {
        let r = dependency_poly(Surface::FourHoledSphere, RowVariant::Ks).unwrap();
        let mut m = r.jacobian.clone();
        m.swap_rows(4, 6);
        assert_eq!(m.det(), -&r.s);
    }

    #[test]
    fn degenerate_rows_are_reported() {
        let rows = vec![("t1".to_string(), Poly::var(Var::T1)); 7];
        assert!(jacobian(&rows).det().is_zero());
    }

    #[test]
    fn off_locus_point() {
        let s = sphere_s_reference();
        let mut x = [0.0; 7];
        x[Var::T23.index()] = 0.5;
        assert_eq!(s.eval_f64(&x), 0.5);
        assert!(!on_locus(&s, &x, 1e-9));
    }
}
