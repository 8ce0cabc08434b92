use super::{trace_coords, RepTuple, SU2};
use crate::charvar::{boundary_residual, BoundaryValue, Surface};
use crate::polyring::Point7;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("no representation with boundary traces {c:?} found in {attempts} attempts")]
    Infeasible { c: Vec<f64>, attempts: usize },
    #[error("{0}")]
    Boundary(String),
    #[error("the density is not integrable at boundary data {0:?}")]
    Degenerate(Vec<f64>),
}

const ATTEMPTS: usize = 10_000;

pub fn sample_rep(surface: Surface, c: &BoundaryValue, seed: u64) -> Result<RepTuple, SampleError> {
    sample_rep_with(surface, c, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `n` trace points from one seeded stream.
pub fn sample_points(surface: Surface, c: &BoundaryValue, n: usize, seed: u64) -> Result<Vec<Point7>, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_rep_with(surface, c, &mut rng).map(|r| trace_coords(&r))).collect()
}

/// A tuple with the prescribed boundary traces, with free parameters drawn
/// at random; rejects draws for which the last condition has no solution.
pub fn sample_rep_with<R: Rng + ?Sized>(surface: Surface, c: &BoundaryValue, rng: &mut R) -> Result<RepTuple, SampleError> {
    if c.values().len() != surface.boundary_count() {
        return Err(SampleError::Boundary(format!("{surface} needs {} boundary values", surface.boundary_count())));
    }
    for _ in 0..ATTEMPTS {
        let r = match surface {
            Surface::FourHoledSphere => sphere_attempt(c.values(), rng),
            Surface::TwoHoledTorus => torus_attempt(c.values(), rng),
        };
        if let Some(r) = r {
            let res = boundary_residual(surface, c, &trace_coords(&r));
            if res.iter().all(|e| e.abs() < 1e-10) {
                return Ok(r);
            }
        }
    }
    Err(SampleError::Infeasible {
        c: c.values().to_vec(),
        attempts: ATTEMPTS,
    })
}

fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = dot3(&v, &v).sqrt();
        if n > 1e-9 {
            return v.map(|x| x / n);
        }
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `tr A_i = c_i` for `i = 1, 2, 3` and `tr(A1 A2 A3) = c_4`. The axis of
/// `A3` is placed on the cone fixed by the last condition.
fn sphere_attempt<R: Rng + ?Sized>(c: &[f64], rng: &mut R) -> Option<RepTuple> {
    let a1 = SU2::from_trace_axis(c[0], random_axis(rng));
    let a2 = SU2::from_trace_axis(c[1], random_axis(rng));
    let m = a1 * a2;
    let a = 0.5 * c[2];
    let b = (1.0 - a * a).max(0.0).sqrt();
    let mv = m.vector();
    let nm = dot3(&mv, &mv).sqrt();
    // Re(M A3) = m0 a - b <mv, axis>
    if b < 1e-12 || nm < 1e-12 {
        let fixed = 2.0 * m.a * a;
        if (fixed - c[3]).abs() > 1e-12 {
            return None;
        }
        return Some(RepTuple([a1, a2, SU2::from_trace_axis(c[2], random_axis(rng))]));
    }
    let cos = (m.a * a - 0.5 * c[3]) / (b * nm);
    if cos.abs() > 1.0 {
        return None;
    }
    let e = mv.map(|x| x / nm);
    let mut o = random_axis(rng);
    let proj = dot3(&o, &e);
    o = std::array::from_fn(|i| o[i] - proj * e[i]);
    let on = dot3(&o, &o).sqrt();
    if on < 1e-9 {
        return None;
    }
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    let axis: [f64; 3] = std::array::from_fn(|i| cos * e[i] + sin * o[i] / on);
    Some(RepTuple([a1, a2, SU2::from_trace_axis(c[2], axis)]))
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `tr(A1 A2 A3) = c_1` and `tr(A1 A3 A2) = c_2`: both are linear in `A3`
/// viewed as a unit vector of R^4, so `A3` lies on a circle.
fn torus_attempt<R: Rng + ?Sized>(c: &[f64], rng: &mut R) -> Option<RepTuple> {
    let a1 = SU2::random(rng);
    let a2 = SU2::random(rng);
    // Re(M q) = <conj(M), q>
    let u = (a1 * a2).inverse().as_array();
    let v = (a2 * a1).inverse().as_array();
    let (uu, uv, vv) = (dot4(&u, &u), dot4(&u, &v), dot4(&v, &v));
    let det = uu * vv - uv * uv;
    if det.abs() < 1e-8 {
        return None;
    }
    let (r1, r2) = (0.5 * c[0], 0.5 * c[1]);
    let l1 = (r1 * vv - r2 * uv) / det;
    let l2 = (r2 * uu - r1 * uv) / det;
    let q0: [f64; 4] = std::array::from_fn(|i| l1 * u[i] + l2 * v[i]);
    let rad2 = 1.0 - dot4(&q0, &q0);
    if rad2 < 0.0 {
        return None;
    }
    let mut basis: Vec<[f64; 4]> = vec![u, v];
    gram_schmidt(&mut basis);
    while basis.len() < 4 {
        basis.push(std::array::from_fn(|_| rng.sample(StandardNormal)));
        gram_schmidt(&mut basis);
    }
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let (e1, e2) = (basis[2], basis[3]);
    let rad = rad2.sqrt();
    let q: [f64; 4] = std::array::from_fn(|i| q0[i] + rad * (theta.cos() * e1[i] + theta.sin() * e2[i]));
    Some(RepTuple([a1, a2, SU2::new(q[0], q[1], q[2], q[3])]))
}

/// Orthonormalizes in place, dropping the last vector if it is dependent.
fn gram_schmidt(vs: &mut Vec<[f64; 4]>) {
    let mut out: Vec<[f64; 4]> = Vec::with_capacity(vs.len());
    for v in vs.iter() {
        let mut w = *v;
        for b in &out {
            let p = dot4(&w, b);
            w = std::array::from_fn(|i| w[i] - p * b[i]);
        }
        let n = dot4(&w, &w).sqrt();
        if n > 1e-9 {
            out.push(w.map(|x| x / n));
        }
    }
    *vs = out;
}
