//! Goldman bivectors, Hamiltonian vector fields and brackets.
//!
//! Convention: `bracket(f, g) = ∇f · W · ∇g`, so the Hamiltonian field of
//! `f` has component `j` equal to `Σᵢ ∂ᵢf · W[i][j]`.

use crate::charvar::{relation_k, sum_product, Surface};
use crate::polyring::{Poly, PolyMatrix, Var, NVARS};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use Var::*;

/// Which torus table to use. The sphere ignores this.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BivectorVariant {
    /// The torus table with the sign of the `(t12, t13, t23)` block
    /// flipped; satisfies Jacobi and has `t4`, `k_s`, `k` as Casimirs.
    #[default]
    Corrected,
    /// The uncorrected torus table, signs of the t12/t13/t23 block included. Not a Poisson bivector.
    Literal,
}

impl FromStr for BivectorVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "corrected" => Ok(BivectorVariant::Corrected),
            "literal" => Ok(BivectorVariant::Literal),
            other => Err(format!("unknown bivector variant `{other}` (expected corrected or literal)")),
        }
    }
}

impl fmt::Display for BivectorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BivectorVariant::Corrected => "corrected",
            BivectorVariant::Literal => "literal",
        })
    }
}

/// A skew-symmetric 7×7 matrix of polynomials indexed by [`Var`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivectorMatrix(PolyMatrix);

impl BivectorMatrix {
    fn from_upper(entries: &[(Var, Var, Poly)]) -> BivectorMatrix {
        let mut m = PolyMatrix::zeros(NVARS);
        for (a, b, p) in entries {
            m.set(a.index(), b.index(), p.clone());
            m.set(b.index(), a.index(), -p);
        }
        BivectorMatrix(m)
    }

    pub fn get(&self, a: Var, b: Var) -> &Poly {
        self.0.get(a.index(), b.index())
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.0
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.0.is_skew_symmetric()
    }

    /// `Σ_cyc {{a, b}, c}` for coordinate functions; zero for a Poisson bivector.
    pub fn jacobiator(&self, a: Var, b: Var, c: Var) -> Poly {
        let term = |x: Var, y: Var, z: Var| -> Poly {
            // {{x,y},z} = ∇W[x][y] · W · e_z
            let wxy = self.get(x, y);
            Var::ALL
                .iter()
                .map(|&i| wxy.diff(i) * self.get(i, z))
                .sum()
        };
        term(a, b, c) + term(b, c, a) + term(c, a, b)
    }

    /// Coordinate triples on which the Jacobi identity fails.
    pub fn jacobi_failures(&self) -> Vec<(Var, Var, Var)> {
        let mut out = Vec::new();
        for i in 0..NVARS {
            for j in i + 1..NVARS {
                for k in j + 1..NVARS {
                    let (a, b, c) = (Var::ALL[i], Var::ALL[j], Var::ALL[k]);
                    if !self.jacobiator(a, b, c).is_zero() {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }
}

fn v(x: Var) -> Poly {
    Poly::var(x)
}

fn n(c: i64) -> Poly {
    Poly::int(c)
}

fn sphere_bivector() -> BivectorMatrix {
    let k = relation_k();
    BivectorMatrix::from_upper(&[
        (T12, T23, k.diff(T13)),
        (T12, T13, -k.diff(T23)),
        (T23, T13, k.diff(T12)),
    ])
}

fn torus_bivector(variant: BivectorVariant) -> BivectorMatrix {
    let block = match variant {
        BivectorVariant::Corrected => n(-1),
        BivectorVariant::Literal => n(1),
    };
    BivectorMatrix::from_upper(&[
        (T1, T2, n(-2) * v(T12) + v(T1) * v(T2)),
        (T1, T3, n(2) * v(T13) - v(T1) * v(T3)),
        (T1, T12, -v(T1) * v(T12) + n(2) * v(T2)),
        (T1, T13, v(T1) * v(T13) - n(2) * v(T3)),
        (T2, T3, n(-2) * v(T23) + v(T2) * v(T3)),
        (T2, T12, n(-2) * v(T1) + v(T12) * v(T2)),
        (T2, T23, -v(T2) * v(T23) + n(2) * v(T3)),
        (T3, T13, n(2) * v(T1) - v(T13) * v(T3)),
        (T3, T23, n(-2) * v(T2) + v(T23) * v(T3)),
        (
            T12,
            T13,
            &block * (-v(T12) * v(T13) - n(2) * v(T23) + n(2) * v(T2) * v(T3)),
        ),
        (
            T12,
            T23,
            &block * (n(2) * v(T13) + v(T12) * v(T23) - n(2) * v(T1) * v(T3)),
        ),
        (
            T13,
            T23,
            &block * (n(-2) * v(T12) + n(2) * v(T1) * v(T2) - v(T13) * v(T23)),
        ),
    ])
}

/// The Poisson bivector of a surface.
pub fn bivector(surface: Surface, variant: BivectorVariant) -> &'static BivectorMatrix {
    static SPHERE: OnceLock<BivectorMatrix> = OnceLock::new();
    static TORUS: OnceLock<BivectorMatrix> = OnceLock::new();
    static TORUS_LITERAL: OnceLock<BivectorMatrix> = OnceLock::new();
    match (surface, variant) {
        (Surface::FourHoledSphere, _) => SPHERE.get_or_init(sphere_bivector),
        (Surface::TwoHoledTorus, BivectorVariant::Corrected) => {
            TORUS.get_or_init(|| torus_bivector(BivectorVariant::Corrected))
        }
        (Surface::TwoHoledTorus, BivectorVariant::Literal) => {
            TORUS_LITERAL.get_or_init(|| torus_bivector(BivectorVariant::Literal))
        }
    }
}

/// A derivation `Σ fᵢ ∂/∂tᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorField(pub [Poly; NVARS]);

impl VectorField {
    pub fn zero() -> VectorField {
        VectorField(std::array::from_fn(|_| Poly::zero()))
    }

    pub fn component(&self, v: Var) -> &Poly {
        &self.0[v.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in Var::ALL {
            writeln!(f, "d/d{v}: {}", self.component(v))?;
        }
        Ok(())
    }
}

pub fn ham_field_with(w: &BivectorMatrix, f: &Poly) -> VectorField {
    let grad: Vec<Poly> = Var::ALL.iter().map(|&i| f.diff(i)).collect();
    VectorField(std::array::from_fn(|j| {
        let vj = Var::ALL[j];
        Var::ALL
            .iter()
            .zip(&grad)
            .filter(|(_, g)| !g.is_zero())
            .map(|(&i, g)| g * w.get(i, vj))
            .sum()
    }))
}

/// Hamiltonian vector field of `f`.
pub fn ham_field(surface: Surface, f: &Poly) -> VectorField {
    ham_field_with(bivector(surface, BivectorVariant::Corrected), f)
}

/// Directional derivative of `g` along `v`.
pub fn apply_field(v: &VectorField, g: &Poly) -> Poly {
    Var::ALL
        .iter()
        .filter(|&&i| !v.component(i).is_zero())
        .map(|&i| v.component(i) * &g.diff(i))
        .sum()
}

pub fn bracket(surface: Surface, f: &Poly, g: &Poly) -> Poly {
    apply_field(&ham_field(surface, f), g)
}

pub fn bracket_with(w: &BivectorMatrix, f: &Poly, g: &Poly) -> Poly {
    apply_field(&ham_field_with(w, f), g)
}

/// Functions expected to Poisson-commute with everything: the boundary
/// traces and `k`. Returns those that fail, with the first offending
/// coordinate bracket.
pub fn casimir_defects(surface: Surface, w: &BivectorMatrix) -> Vec<(String, Var, Poly)> {
    let mut named: Vec<(String, Poly)> = surface
        .boundary_functions()
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("boundary[{i}]"), p.clone()))
        .collect();
    named.push(("k".into(), relation_k()));
    if surface == Surface::TwoHoledTorus {
        named.push(("k_p".into(), sum_product().1));
    }
    let mut out = Vec::new();
    for (name, f) in named {
        for x in Var::ALL {
            let b = bracket_with(w, &f, &v(x));
            if !b.is_zero() {
                out.push((name.clone(), x, b));
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::arb_poly;
    use proptest::prelude::*;

    const FOUR: Surface = Surface::FourHoledSphere;
    const TWO: Surface = Surface::TwoHoledTorus;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn torus_entries() {
        let w = bivector(TWO, BivectorVariant::Corrected);
        assert_eq!(w.get(T1, T2), &p("-2*t12 + t1*t2"));
        assert_eq!(bracket(TWO, &v(T1), &v(T2)), p("-2*t12 + t1*t2"));
        for x in Var::ALL {
            assert!(w.get(T4, x).is_zero());
        }
        assert!(ham_field(TWO, &v(T4)).is_zero());
        let lit = bivector(TWO, BivectorVariant::Literal);
        assert_eq!(lit.get(T12, T13), &p("-t12*t13 - 2*t23 + 2*t2*t3"));
        assert_eq!(w.get(T12, T13), &-lit.get(T12, T13));
    }

    #[test]
    fn sphere_entries() {
        let w = bivector(FOUR, BivectorVariant::Corrected);
        assert_eq!(w.get(T12, T23), &p("2*t13 + t12*t23 - t1*t3 - t4*t2"));
        for a in [T1, T2, T3, T4] {
            for x in Var::ALL {
                assert!(w.get(a, x).is_zero());
            }
        }
    }

    #[test]
    fn sphere_h12_components() {
        let h = ham_field(FOUR, &v(T12));
        let k = relation_k();
        assert_eq!(h.component(T23), &k.diff(T13));
        assert_eq!(h.component(T13), &-k.diff(T23));
        assert!(h.component(T12).is_zero());
    }

    #[test]
    fn skew_symmetry() {
        for s in Surface::ALL {
            assert!(bivector(s, BivectorVariant::Corrected).is_skew_symmetric());
        }
        assert!(bivector(TWO, BivectorVariant::Literal).is_skew_symmetric());
    }

    #[test]
    fn trivial_fields() {
        assert!(ham_field(TWO, &Poly::int(5)).is_zero());
        let h = ham_field(TWO, &p("t1*t12"));
        assert!(apply_field(&h, &Poly::one()).is_zero());
        assert!(apply_field(&h, &p("t1*t12")).is_zero());
    }

    #[test]
    fn jacobi_holds_for_corrected_tables() {
        assert!(bivector(FOUR, BivectorVariant::Corrected).jacobi_failures().is_empty());
        assert!(bivector(TWO, BivectorVariant::Corrected).jacobi_failures().is_empty());
    }

    #[test]
    fn literal_torus_table_is_not_poisson() {
        let lit = bivector(TWO, BivectorVariant::Literal);
        assert_eq!(lit.jacobi_failures().len(), 15);
        let defects = casimir_defects(TWO, lit);
        let names: Vec<&str> = defects.iter().map(|d| d.0.as_str()).collect();
        assert!(names.contains(&"boundary[1]"));
        assert!(names.contains(&"k"));
    }

    #[test]
    fn casimirs() {
        for s in Surface::ALL {
            assert!(casimir_defects(s, bivector(s, BivectorVariant::Corrected)).is_empty());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn antisymmetric(f in arb_poly(2, 4), g in arb_poly(2, 4), torus in any::<bool>()) {
            let s = if torus { TWO } else { FOUR };
            prop_assert!((bracket(s, &f, &g) + bracket(s, &g, &f)).is_zero());
            prop_assert!(bracket(s, &f, &f).is_zero());
        }

        #[test]
        fn leibniz(f in arb_poly(2, 3), g in arb_poly(2, 3), h in arb_poly(2, 3), torus in any::<bool>()) {
            let s = if torus { TWO } else { FOUR };
            let lhs = bracket(s, &f, &(&g * &h));
            let rhs = &g * &bracket(s, &f, &h) + &bracket(s, &f, &g) * &h;
            prop_assert_eq!(lhs, rhs);
        }
    }
}
