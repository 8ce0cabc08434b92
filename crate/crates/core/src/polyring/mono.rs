use super::{Var, NVARS};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Exponent vector over the seven trace variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; NVARS]);

    pub fn var(v: Var) -> Mono {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Mono(e)
    }

    pub fn exps(&self) -> &[u16; NVARS] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Mono(e)
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        let mut e = other.0;
        for (a, b) in e.iter_mut().zip(self.0.iter()) {
            debug_assert!(*a >= *b);
            *a -= b;
        }
        Mono(e)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = (*a).max(*b);
        }
        Mono(e)
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Derivative exponent bookkeeping: returns the multiplicity and the
    /// lowered monomial, or `None` when the variable is absent.
    pub fn lower(&self, v: Var) -> Option<(u16, Mono)> {
        let i = v.index();
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0;
        e[i] -= 1;
        Some((self.0[i], Mono(e)))
    }

    pub fn grevlex_cmp(&self, other: &Mono) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..NVARS).rev() {
            if self.0[i] != other.0[i] {
                // smaller exponent in the last differing variable wins
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }

    pub fn lex_cmp(&self, other: &Mono) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// Monomial order for leading terms and canonical sorting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonomialOrder::Grevlex => a.grevlex_cmp(b),
            MonomialOrder::Lex => a.lex_cmp(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}
