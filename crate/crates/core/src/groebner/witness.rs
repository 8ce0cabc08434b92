//! Floating-point search for a real point on `{k = 0, s = 0}` where a target
//! polynomial is visibly nonzero.

use crate::polyring::{FloatPoly, Point7, Poly, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct WitnessSearch {
    pub attempts: usize,
    /// Grid cells for the sign-change scan in `t23`.
    pub grid: usize,
    /// Bound on `|k|` and `|s|` at the witness.
    pub tol: f64,
    /// Lower bound on `|target|` at the witness.
    pub min_target: f64,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch {
            attempts: 100_000,
            grid: 64,
            tol: 1e-10,
            min_target: 1e-3,
        }
    }
}

pub fn numeric_witness(k: &Poly, s: &Poly, target: &Poly, seed: u64) -> Option<Point7> {
    numeric_witness_with(k, s, target, seed, &WitnessSearch::default())
}

const T13: usize = 5;
const T23: usize = 6;

/// Fixes `t4, t1, t2, t3, t12` at random in `[-2, 2]`, solves `k` for `t13`
/// on each branch, then brackets a root of `s` in `t23` and bisects.
pub fn numeric_witness_with(k: &Poly, s: &Poly, target: &Poly, seed: u64, opts: &WitnessSearch) -> Option<Point7> {
    if k.degree_in(Var::T13) != 2 {
        return None;
    }
    let (kf, sf, tf) = (FloatPoly::new(k), FloatPoly::new(s), FloatPoly::new(target));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..opts.attempts {
        let mut x = [0.0; 7];
        for xi in x.iter_mut().take(T13) {
            *xi = rng.random_range(-2.0..=2.0);
        }
        for sign in [1.0, -1.0] {
            let g = |t23: f64| {
                let mut y = x;
                y[T23] = t23;
                let t13 = solve_t13(&kf, &y, sign)?;
                y[T13] = t13;
                Some((sf.eval(&y), y))
            };
            let step = 4.0 / opts.grid as f64;
            let mut prev: Option<(f64, f64)> = None;
            for i in 0..=opts.grid {
                let t = -2.0 + step * i as f64;
                let Some((v, _)) = g(t) else {
                    prev = None;
                    continue;
                };
                if let Some((tp, vp)) = prev {
                    if vp.signum() != v.signum() {
                        if let Some(y) = bisect(&g, tp, t, vp) {
                            if kf.eval(&y).abs() < opts.tol
                                && sf.eval(&y).abs() < opts.tol
                                && tf.eval(&y).abs() > opts.min_target
                            {
                                return Some(y);
                            }
                        }
                    }
                }
                prev = Some((t, v));
            }
        }
    }
    None
}

/// Root of `k` in `t13` on the chosen branch, with the other coordinates fixed.
fn solve_t13(kf: &FloatPoly, y: &Point7, sign: f64) -> Option<f64> {
    let at = |t: f64| {
        let mut z = *y;
        z[T13] = t;
        kf.eval(&z)
    };
    let (k0, k1, km) = (at(0.0), at(1.0), at(-1.0));
    let c = k0;
    let a = 0.5 * (k1 + km) - c;
    let b = 0.5 * (k1 - km);
    if a.abs() < 1e-12 {
        return None;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    // the stable form of the quadratic formula
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, if q != 0.0 { c / q } else { q / a });
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    Some(if sign > 0.0 { hi } else { lo })
}

fn bisect<G>(g: &G, mut a: f64, mut b: f64, mut va: f64) -> Option<Point7>
where
    G: Fn(f64) -> Option<(f64, Point7)>,
{
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let (vm, _) = g(m)?;
        if vm == 0.0 {
            return g(m).map(|(_, y)| y);
        }
        if vm.signum() == va.signum() {
            a = m;
            va = vm;
        } else {
            b = m;
        }
    }
    let (va, ya) = g(a)?;
    let (vb, yb) = g(b)?;
    Some(if va.abs() <= vb.abs() { ya } else { yb })
}
