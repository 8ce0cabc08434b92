use crate::polyring::{rat_to_f64, Rat};
use num_complex::Complex64;
use num_traits::{One, Zero};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    pub fn constant(c: Rat) -> UPoly {
        UPoly(vec![c]).trimmed()
    }

    /// `a + b T`
    pub fn linear(a: Rat, b: Rat) -> UPoly {
        UPoly(vec![a, b]).trimmed()
    }

    pub(crate) fn trimmed(mut self) -> UPoly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rat::zero();
        UPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .trimmed()
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly(Vec::new());
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly(out).trimmed()
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let dd = d.degree()?;
        let Some(nd) = self.degree() else {
            return Some(UPoly(Vec::new()));
        };
        if nd < dd {
            return None;
        }
        let mut r = self.0.clone();
        let lead = &d.0[dd];
        let mut q = vec![Rat::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &r[k + dd] / lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        if r.iter().all(Zero::is_zero) {
            Some(UPoly(q).trimmed())
        } else {
            None
        }
    }

    /// All complex roots by the Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(n) = self.degree() else {
            return Vec::new();
        };
        if n == 0 {
            return Vec::new();
        }
        let lead = rat_to_f64(&self.0[n]);
        let c: Vec<Complex64> = self
            .0
            .iter()
            .map(|a| Complex64::new(rat_to_f64(a) / lead, 0.0))
            .collect();
        aberth(&c)
    }
}

impl One for UPoly {
    fn one() -> UPoly {
        UPoly(vec![Rat::one()])
    }
}

impl std::ops::Mul for UPoly {
    type Output = UPoly;
    fn mul(self, o: UPoly) -> UPoly {
        UPoly::mul(&self, &o)
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of a monic polynomial given lowest degree first.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    // Cauchy bound for the initial circle
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + 0.25) / n as f64;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulse: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::one() - ratio * repulse);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
