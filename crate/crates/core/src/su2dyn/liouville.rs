use super::SampleError;
use crate::charvar::{c0, c12, c13, c23, BoundaryValue};
use crate::polyring::Point7;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Consecutive rejections after which the boundary data is declared degenerate.
const MAX_REJECTIONS: usize = 1_000_000;

/// Samples of the symplectic volume on the sphere leaf `F = c`, density
/// `1/|dk/dt13|` summed over both roots in the `(t12, t23)` chart.
///
/// Writing `k = t13^2 + (t12 t23 - c13) t13 + q(t12, t23)` the discriminant
/// `D` is quadratic in `t23` with leading coefficient `t12^2 - 4`, and
/// `|dk/dt13| = sqrt(D)`. Integrating out `t23` leaves an arcsine marginal
/// for `t12` and an arcsine conditional for `t23` between the roots of `D`,
/// so both are drawn exactly; draws leaving `[-2, 2]^3` are rejected.
pub fn liouville_sample_4hs(c: &BoundaryValue, n: usize, seed: u64) -> Result<Vec<Point7>, SampleError> {
    let v = c.values();
    if v.len() != 4 {
        return Err(SampleError::Boundary("the sphere has four boundary values".into()));
    }
    let (t1, t2, t3, t4) = (v[0], v[1], v[2], v[3]);
    let mut b: Point7 = [0.0; 7];
    b[..4].copy_from_slice(&[t4, t1, t2, t3]);
    let coef = |p: crate::polyring::Poly| p.eval_f64(&b);
    let (c12, c13, c23, c0) = (coef(c12()), coef(c13()), coef(c23()), coef(c0()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut rejected = 0usize;
    let pi = std::f64::consts::PI;
    while out.len() < n {
        if rejected >= MAX_REJECTIONS {
            return Err(SampleError::Degenerate(v.to_vec()));
        }
        let t12 = 2.0 * (pi * rng.random::<f64>()).cos();
        let a2 = t12 * t12 - 4.0;
        let a1 = -2.0 * t12 * c13 + 4.0 * c23;
        let a0 = c13 * c13 - 4.0 * (t12 * t12 - c12 * t12 - c0);
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if a2 >= 0.0 || disc < 0.0 {
            rejected += 1;
            continue;
        }
        let (r1, r2) = ((-a1 + disc.sqrt()) / (2.0 * a2), (-a1 - disc.sqrt()) / (2.0 * a2));
        let (mid, half) = (0.5 * (r1 + r2), 0.5 * (r1 - r2).abs());
        let t23 = mid + half * (pi * rng.random::<f64>()).cos();
        let d = (a2 * t23 * t23 + a1 * t23 + a0).max(0.0);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let t13 = 0.5 * (c13 - t12 * t23 + sign * d.sqrt());
        if t13.abs() > 2.0 || t23.abs() > 2.0 {
            rejected += 1;
            continue;
        }
        rejected = 0;
        let mut x = b;
        x[4] = t12;
        x[5] = t13;
        x[6] = t23;
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvar::{relation_k, Surface};
    use crate::polyring::{FloatPoly, Poly, Var};

    fn zero() -> BoundaryValue {
        BoundaryValue::new(Surface::FourHoledSphere, vec![0.0; 4]).unwrap()
    }

    #[test]
    fn samples_lie_on_the_leaf() {
        let k = FloatPoly::new(&relation_k());
        let c = BoundaryValue::new(Surface::FourHoledSphere, vec![0.4, -0.3, 1.1, 0.2]).unwrap();
        for x in liouville_sample_4hs(&c, 2000, 1).unwrap() {
            assert!(k.eval(&x).abs() < 1e-10);
            assert_eq!(&x[..4], &[0.2, 0.4, -0.3, 1.1]);
            assert!(x.iter().all(|t| t.abs() <= 2.0));
        }
    }

    #[test]
    fn relation_is_odd_pair_symmetric_at_zero_boundary() {
        let zero = Poly::zero();
        let mut k = relation_k();
        for v in [Var::T1, Var::T2, Var::T3, Var::T4] {
            k = k.substitute(v, &zero);
        }
        let flipped = k
            .substitute(Var::T12, &-Poly::var(Var::T12))
            .substitute(Var::T13, &-Poly::var(Var::T13));
        assert_eq!(flipped, k);
    }

    #[test]
    fn t12_marginal_is_symmetric_at_zero_boundary() {
        // k is invariant under t12 -> -t12, t13 -> -t13 when c = 0
        let xs = liouville_sample_4hs(&zero(), 100_000, 2).unwrap();
        let pos = xs.iter().filter(|x| x[4] > 0.0).count() as f64 / xs.len() as f64;
        assert!((pos - 0.5).abs() < 0.01, "{pos}");
        let mean = xs.iter().map(|x| x[4]).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn deterministic() {
        assert_eq!(liouville_sample_4hs(&zero(), 10, 5), liouville_sample_4hs(&zero(), 10, 5));
    }
}
