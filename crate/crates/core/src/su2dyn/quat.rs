use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

/// An element of SU(2) as a unit quaternion `a + b i + c j + d k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SU2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SU2 {
    pub const IDENTITY: SU2 = SU2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
    };

    /// Normalizes `(a, b, c, d)`; a zero quaternion maps to the identity.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> SU2 {
        SU2 { a, b, c, d }.normalized()
    }

    /// The element with trace `trace` rotating about the unit `axis`.
    pub fn from_trace_axis(trace: f64, axis: [f64; 3]) -> SU2 {
        let a = (0.5 * trace).clamp(-1.0, 1.0);
        let s = (1.0 - a * a).max(0.0).sqrt();
        SU2::new(a, s * axis[0], s * axis[1], s * axis[2])
    }

    /// Haar-distributed element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> SU2 {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-9 {
                return SU2 {
                    a: v[0] / n,
                    b: v[1] / n,
                    c: v[2] / n,
                    d: v[3] / n,
                };
            }
        }
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.a
    }

    pub fn inverse(&self) -> SU2 {
        SU2 {
            a: self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> SU2 {
        let n = self.norm();
        if n == 0.0 {
            return SU2::IDENTITY;
        }
        SU2 {
            a: self.a / n,
            b: self.b / n,
            c: self.c / n,
            d: self.d / n,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Imaginary part.
    pub fn vector(&self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    pub fn distance(&self, o: &SU2) -> f64 {
        let (x, y) = (self.as_array(), o.as_array());
        x.iter().zip(&y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt()
    }
}

impl Mul for SU2 {
    type Output = SU2;

    fn mul(self, q: SU2) -> SU2 {
        let p = self;
        SU2 {
            a: p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            b: p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            c: p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            d: p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quaternion_units() {
        let i = SU2::new(0.0, 1.0, 0.0, 0.0);
        let j = SU2::new(0.0, 0.0, 1.0, 0.0);
        let k = SU2::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * i, k.inverse());
        assert_eq!((i * i).trace(), -2.0);
    }

    #[test]
    fn inverse_and_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let (x, y) = (SU2::random(&mut rng), SU2::random(&mut rng));
            assert!((x * x.inverse()).distance(&SU2::IDENTITY) < 1e-14);
            assert!(((x * y).trace() - (y * x).trace()).abs() < 1e-14);
            // tr(xy) + tr(x y^-1) = tr(x) tr(y)
            let lhs = (x * y).trace() + (x * y.inverse()).trace();
            assert!((lhs - x.trace() * y.trace()).abs() < 1e-13);
            assert!(((x * y).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_axis_constructor() {
        let g = SU2::from_trace_axis(-0.6, [0.0, 0.6, 0.8]);
        assert!((g.trace() + 0.6).abs() < 1e-15);
        assert!((g.norm() - 1.0).abs() < 1e-15);
    }
}
