use super::{rat_to_f64, Point7, Poly, NVARS};

/// A polynomial lowered to `f64` coefficients for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(f64, [u16; NVARS])>,
    max_exp: [usize; NVARS],
}

impl FloatPoly {
    pub fn new(p: &Poly) -> FloatPoly {
        let mut max_exp = [0usize; NVARS];
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                for (mx, &e) in max_exp.iter_mut().zip(m.exps().iter()) {
                    *mx = (*mx).max(e as usize);
                }
                (rat_to_f64(c), *m.exps())
            })
            .collect();
        FloatPoly { terms, max_exp }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &Point7) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        // power table; exponents in this crate stay small
        let mut pw = [[1.0f64; 16]; NVARS];
        for i in 0..NVARS {
            let top = self.max_exp[i].min(15);
            for e in 1..=top {
                pw[i][e] = pw[i][e - 1] * x[i];
            }
        }
        let mut acc = 0.0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for i in 0..NVARS {
                let k = e[i] as usize;
                if k > 0 {
                    t *= if k < 16 { pw[i][k] } else { x[i].powi(k as i32) };
                }
            }
            acc += t;
        }
        acc
    }
}

impl From<&Poly> for FloatPoly {
    fn from(p: &Poly) -> Self {
        FloatPoly::new(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_evaluation() {
        let p: Poly = "t12^2*t13 - 1/3*t1*t2*t3*t4 + 5".parse().unwrap();
        let x = [0.3, -1.2, 0.7, 1.9, -0.4, 1.1, 0.05];
        let f = FloatPoly::new(&p);
        assert!((f.eval(&x) - p.eval_f64(&x)).abs() < 1e-14);
        assert_eq!(FloatPoly::new(&Poly::zero()).eval(&x), 0.0);
    }
}
