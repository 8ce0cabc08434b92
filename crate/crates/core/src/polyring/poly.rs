use super::mono::Mono;
use super::{is_one, is_zero, rat, Rat, Var, NVARS};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending grevlex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Rat)>,
}

fn sort_desc(terms: &mut [(Mono, Rat)]) {
    terms.sort_by(|a, b| b.0.grevlex_cmp(&a.0));
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::term(c, Mono::ONE)
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Rat::one(), Mono::var(v))
    }

    pub fn term(c: Rat, m: Mono) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Rat)>>(it: I) -> Poly {
        let mut acc: HashMap<Mono, Rat> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Poly { terms }
    }

    /// Wraps terms that are already sorted, merged and nonzero.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Mono, Rat)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0.grevlex_cmp(&w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Rat)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms
            .binary_search_by(|(t, _)| m.grevlex_cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rat::zero())
    }

    /// Leading term in grevlex.
    pub fn leading(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Variables that occur with positive exponent.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|&v| self.degree_in(v) > 0)
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_term(&self, c: &Rat, m: &Mono) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the order
        Poly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| m.lower(v).map(|(e, lm)| (lm, c * rat(e as i64))));
        Poly::from_terms(terms)
    }

    pub fn gradient(&self) -> [Poly; NVARS] {
        std::array::from_fn(|i| self.diff(Var::ALL[i]))
    }

    /// Exact evaluation.
    pub fn eval_rat(&self, x: &[Rat; NVARS]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m.0.iter()) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Floating-point evaluation. For repeated evaluation compile a
    /// [`super::FloatPoly`] instead.
    pub fn eval_f64(&self, x: &[f64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = super::rat_to_f64(c);
                for (xi, &e) in x.iter().zip(m.0.iter()) {
                    if e > 0 {
                        t *= xi.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes a variable by a polynomial.
    pub fn substitute(&self, v: Var, by: &Poly) -> Poly {
        let max = self.degree_in(v) as usize;
        let mut powers = vec![Poly::one()];
        for i in 1..=max {
            let next = &powers[i - 1] * by;
            powers.push(next);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut rest = *m;
            rest.0[v.index()] = 0;
            out += &powers[e].mul_term(c, &rest);
        }
        out
    }

    /// Multivariate division by a single divisor in grevlex; returns
    /// `(quotient, remainder)` with no remainder term divisible by the
    /// divisor's leading monomial.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let (lm, lc) = d.leading().expect("division by zero polynomial").clone();
        let mut q_terms = Vec::new();
        let mut r_terms = Vec::new();
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.first().cloned() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c / &lc;
                p -= &d.mul_term(&qc, &qm);
                q_terms.push((qm, qc));
            } else {
                r_terms.push((m, c));
                p.terms.remove(0);
            }
        }
        (Poly::from_terms(q_terms), Poly::from_sorted_unchecked(r_terms))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Divides out the rational content and makes the leading coefficient
    /// positive, giving a primitive integer polynomial.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut num = num_bigint::BigInt::zero();
        for (_, c) in &self.terms {
            let v = (c * Rat::from_integer(den.clone())).to_integer();
            num = num.gcd(&v);
        }
        let mut scale = Rat::new(den, num);
        if self.terms[0].1.is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.grevlex_cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, if negate { -c } else { c.clone() })));
        Poly { terms: out }
    }

    fn product(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Mono, Rat> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Poly { terms }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut first = true;
            if !is_one(&abs) || m.is_one() {
                write!(f, "{}", abs)?;
                first = false;
            }
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(v.name())?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::int(n)
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Poly {
        Poly::constant(c)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                $body(self, rhs)
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                $body(&self, rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Poly, b: &Poly| a.merge(b, false));
binop!(Sub, sub, |a: &Poly, b: &Poly| a.merge(b, true));
binop!(Mul, mul, |a: &Poly, b: &Poly| a.product(b));

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        *self = self.merge(rhs, true);
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| acc + p)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
