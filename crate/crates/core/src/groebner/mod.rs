//! Buchberger's algorithm over the rationals, normal forms, and
//! non-membership certificates for the transversality of `H(p12)` to the
//! dependency locus.

mod engine;
mod witness;

pub use witness::{numeric_witness, numeric_witness_with, WitnessSearch};

use crate::charvar::{relation_k, trace_fn, Surface, TraceName};
use crate::locus::{dependency_poly, split_by_lines, try_quadratic_split, RowVariant};
use crate::poisson::{apply_field, ham_field, VectorField};
use crate::polyring::{MonomialOrder, Point7, Poly, Rat, Var};
use engine::{IPoly, Reducer};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("budget exhausted after {steps} reduction steps and {pairs} pairs")]
    BudgetExceeded { steps: u64, pairs: u64 },
    #[error("ideal has no nonzero generators")]
    EmptyIdeal,
    #[error("could not split the dependency polynomial into factors")]
    NoSplit,
}

/// Work limits for Buchberger and normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_steps: u64,
    pub max_pairs: u64,
    #[serde(skip)]
    steps: u64,
    #[serde(skip)]
    pairs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(1_000_000, 100_000)
    }
}

impl Budget {
    pub fn new(max_steps: u64, max_pairs: u64) -> Budget {
        Budget {
            max_steps,
            max_pairs,
            steps: 0,
            pairs: 0,
        }
    }

    pub fn steps_used(&self) -> u64 {
        self.steps
    }

    pub fn pairs_used(&self) -> u64 {
        self.pairs
    }

    fn exceeded(&self) -> GroebnerError {
        GroebnerError::BudgetExceeded {
            steps: self.steps,
            pairs: self.pairs,
        }
    }

    pub(crate) fn step(&mut self) -> Result<(), GroebnerError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(self.exceeded());
        }
        Ok(())
    }

    pub(crate) fn pair(&mut self) -> Result<(), GroebnerError> {
        self.pairs += 1;
        if self.pairs > self.max_pairs {
            return Err(self.exceeded());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
}

impl Ideal {
    pub fn new(generators: Vec<Poly>, order: MonomialOrder) -> Ideal {
        Ideal {
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order,
        }
    }
}

/// A reduced Gröbner basis with monic elements, sorted by descending
/// leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBasis {
    pub basis: Vec<Poly>,
    pub order: MonomialOrder,
    #[serde(skip)]
    internal: Vec<IPoly>,
}

impl GroebnerBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Leading monomials under the basis order.
    pub fn leading_monomials(&self) -> Vec<Poly> {
        self.internal
            .iter()
            .map(|g| Poly::term(Rat::from_integer(1.into()), *g.lm()))
            .collect()
    }
}

pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with(ideal, &mut Budget::default())
}

pub fn buchberger_with(ideal: &Ideal, budget: &mut Budget) -> Result<GroebnerBasis, GroebnerError> {
    if ideal.generators.is_empty() {
        return Err(GroebnerError::EmptyIdeal);
    }
    let gens: Vec<IPoly> = ideal
        .generators
        .iter()
        .map(|g| IPoly::from_poly(g, ideal.order).0)
        .collect();
    let internal = engine::buchberger(&gens, ideal.order, budget)?;
    Ok(GroebnerBasis {
        basis: internal.iter().map(IPoly::to_monic_poly).collect(),
        order: ideal.order,
        internal,
    })
}

/// Remainder of `f` on division by `gb`; zero exactly when `f` is in the ideal.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Poly {
    normal_form_with(f, gb, &mut Budget::new(u64::MAX, u64::MAX)).expect("unbounded budget")
}

pub fn normal_form_with(f: &Poly, gb: &GroebnerBasis, budget: &mut Budget) -> Result<Poly, GroebnerError> {
    if f.is_zero() {
        return Ok(Poly::zero());
    }
    let (fi, factor) = IPoly::from_poly(f, gb.order);
    let basis: Vec<&IPoly> = gb.internal.iter().collect();
    let (r, lambda) = Reducer {
        order: gb.order,
        budget,
    }
    .reduce(&fi, &basis)?;
    // fi = factor * f, so NF(f) = lambda * r / factor
    Ok(r.to_poly().scale(&(lambda / factor)))
}

/// Checks both defining properties: every S-polynomial and every source
/// generator reduces to zero.
pub fn verify_basis(ideal: &Ideal, gb: &GroebnerBasis) -> bool {
    let gens_ok = ideal.generators.iter().all(|g| normal_form(g, gb).is_zero());
    let n = gb.internal.len();
    let spolys_ok = (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let (f, g) = (&gb.basis[i], &gb.basis[j]);
            let (fm, gm) = (gb.internal[i].lm(), gb.internal[j].lm());
            let l = fm.lcm(gm);
            let one = Rat::from_integer(1.into());
            // basis elements are monic
            let s = f.mul_term(&one, &fm.quotient_of(&l)) - g.mul_term(&one, &gm.quotient_of(&l));
            normal_form(&s, gb).is_zero()
        })
    });
    let monic = gb.basis.iter().zip(&gb.internal).all(|(p, i)| p.coeff(i.lm()) == Rat::from_integer(1.into()));
    gens_ok && spolys_ok && monic
}

/// Residue of the field's derivative of `s` modulo one factor of `s`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentCertificate {
    pub factor: Poly,
    pub gb_size: usize,
    pub residue: Poly,
    pub residue_nonzero: bool,
    pub witness: Option<Point7>,
}

/// Non-membership certificate for `H(s)` in `(k, s)` or `(k, s_i)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub surface: Surface,
    pub order: MonomialOrder,
    pub s: Poly,
    pub h12s: Poly,
    pub components: Vec<ComponentCertificate>,
    pub gb_size: usize,
    pub residue_nonzero: bool,
    pub witness: Option<Point7>,
    pub verdict: bool,
    pub timings: Timings,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub derive_ms: f64,
    pub groebner_ms: f64,
    pub witness_ms: f64,
}

#[derive(Clone, Debug)]
pub struct CertificateOptions {
    pub order: MonomialOrder,
    pub budget: Budget,
    pub seed: u64,
    /// Search for numeric witnesses.
    pub witness: bool,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions {
            order: MonomialOrder::Grevlex,
            budget: Budget::default(),
            seed: 1,
            witness: true,
        }
    }
}

/// The factors of `s` handled separately: `s` itself on the sphere, its
/// two factors on the torus.
pub fn locus_components(surface: Surface) -> Result<Vec<Poly>, GroebnerError> {
    let s = dependency_poly(surface, RowVariant::Ks)
        .expect("dependency rows are independent")
        .s;
    match surface {
        Surface::FourHoledSphere => Ok(vec![s]),
        Surface::TwoHoledTorus => {
            let split = Var::ALL
                .iter()
                .find_map(|&v| try_quadratic_split(&s, v))
                .or_else(|| split_by_lines(&s, 0));
            match split {
                Some((a, b)) => Ok(vec![a.primitive(), b.primitive()]),
                None => Err(GroebnerError::NoSplit),
            }
        }
    }
}

pub fn transversality_certificate(surface: Surface, opts: &CertificateOptions) -> Result<Certificate, GroebnerError> {
    let p12 = trace_fn(surface, TraceName::P12).expect("p12 exists on both surfaces");
    certificate_for_field(surface, &ham_field(surface, &p12), opts)
}

/// Certificate for an arbitrary field in place of `H(p12)`.
pub fn certificate_for_field(surface: Surface, field: &VectorField, opts: &CertificateOptions) -> Result<Certificate, GroebnerError> {
    let t0 = Instant::now();
    let s = dependency_poly(surface, RowVariant::Ks)
        .expect("dependency rows are independent")
        .s;
    let factors = locus_components(surface)?;
    let h12s = apply_field(field, &s);
    let k = relation_k();
    let derive_ms = ms(t0);

    let t1 = Instant::now();
    let mut budget = opts.budget;
    let mut components = Vec::new();
    for f in &factors {
        let gb = buchberger_with(&Ideal::new(vec![k.clone(), f.clone()], opts.order), &mut budget)?;
        let residue = normal_form_with(&h12s, &gb, &mut budget)?;
        components.push(ComponentCertificate {
            factor: f.clone(),
            gb_size: gb.len(),
            residue_nonzero: !residue.is_zero(),
            residue,
            witness: None,
        });
    }
    let groebner_ms = ms(t1);

    let t2 = Instant::now();
    if opts.witness {
        for c in components.iter_mut().filter(|c| c.residue_nonzero) {
            c.witness = numeric_witness(&k, &c.factor, &h12s, opts.seed);
        }
    }
    let witness_ms = ms(t2);

    let residue_nonzero = components.iter().all(|c| c.residue_nonzero);
    Ok(Certificate {
        surface,
        order: opts.order,
        gb_size: components.iter().map(|c| c.gb_size).sum(),
        witness: components.first().and_then(|c| c.witness),
        verdict: residue_nonzero,
        residue_nonzero,
        s,
        h12s,
        components,
        timings: Timings {
            derive_ms,
            groebner_ms,
            witness_ms,
        },
    })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Ten small ideals used to exercise the engine end to end.
pub fn self_test_corpus() -> Vec<Ideal> {
    let p = |s: &str| s.parse::<Poly>().expect("corpus polynomial");
    let g = MonomialOrder::Grevlex;
    let l = MonomialOrder::Lex;
    vec![
        Ideal::new(vec![p("t12")], g),
        Ideal::new(vec![p("t12 - 1"), p("t12*t13 - t13")], g),
        Ideal::new(vec![p("t1^2 + t2^2 - 1"), p("t1 - t2")], l),
        Ideal::new(vec![p("t1^2 - t2"), p("t1^3 - t3")], l),
        Ideal::new(vec![p("t1*t2 - t3"), p("t2*t3 - t1"), p("t3*t1 - t2")], g),
        Ideal::new(vec![p("t1^2*t2 - t3^2"), p("t1*t3^2 - t2^3 + 1")], g),
        Ideal::new(vec![p("t12^2 + t13^2 + t23^2 + t12*t13*t23 - 4")], g),
        Ideal::new(vec![p("t1 + t2 + t3"), p("t1*t2 + t2*t3 + t3*t1"), p("t1*t2*t3 - 1")], l),
        Ideal::new(vec![p("t4^2 - 2*t1*t4 + 3"), p("t4*t1 - t2^2"), p("t2^3 - t1 - 1/2")], g),
        Ideal::new(vec![p("t12*t13 - t23"), p("t13*t23 - t12"), p("t23*t12 - t13"), p("t12^2 - t13^2")], g),
    ]
}
