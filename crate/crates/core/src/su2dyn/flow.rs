use crate::charvar::{relation_k, Surface};
use crate::poisson::{bivector, ham_field_with, BivectorVariant};
use crate::polyring::{FloatPoly, Point7, Poly, NVARS};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("start point is off the variety: |k| = {0:e}")]
    OffVariety(f64),
    #[error("time step {dt} does not divide the horizon {t_end} into a positive step count")]
    BadStep { t_end: f64, dt: f64 },
    #[error("step {step} rejected: constraint residual {residual:e}")]
    Rejected { step: usize, residual: f64 },
    #[error("projection did not converge at step {step}: residual {residual:e}")]
    Projection { step: usize, residual: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct FlowOptions {
    pub t_end: f64,
    pub dt: f64,
    pub project: bool,
    pub variant: BivectorVariant,
    /// Residual above which an unprojected step is rejected.
    pub reject_above: f64,
    /// Residual the projection must reach.
    pub project_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            t_end: 1.0,
            dt: 1e-3,
            project: false,
            variant: BivectorVariant::Corrected,
            reject_above: 1e-6,
            project_tol: 1e-10,
        }
    }
}

struct Constraints {
    funcs: Vec<FloatPoly>,
    grads: Vec<[FloatPoly; NVARS]>,
    targets: Vec<f64>,
}

impl Constraints {
    fn new(surface: Surface, x0: &Point7) -> Constraints {
        let mut polys: Vec<Poly> = surface.boundary_functions().to_vec();
        polys.push(relation_k());
        let funcs: Vec<FloatPoly> = polys.iter().map(FloatPoly::new).collect();
        let grads = polys.iter().map(|p| p.gradient().map(|g| FloatPoly::new(&g))).collect();
        let mut targets: Vec<f64> = funcs.iter().map(|f| f.eval(x0)).collect();
        *targets.last_mut().unwrap() = 0.0;
        Constraints { funcs, grads, targets }
    }

    fn residual(&self, x: &Point7) -> Vec<f64> {
        self.funcs.iter().zip(&self.targets).map(|(f, t)| f.eval(x) - t).collect()
    }

    /// Gauss-Newton with minimum-norm corrections.
    fn project(&self, x: &mut Point7, tol: f64) -> f64 {
        let mut worst = max_abs(&self.residual(x));
        for _ in 0..20 {
            if worst < 0.01 * tol {
                break;
            }
            let r = self.residual(x);
            let m = r.len();
            let jac = DMatrix::from_fn(m, NVARS, |i, j| self.grads[i][j].eval(x));
            let rhs = DVector::from_iterator(m, r.iter().map(|v| -v));
            let Ok(dx) = jac.svd(true, true).solve(&rhs, 1e-13) else {
                break;
            };
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi += d;
            }
            let next = max_abs(&self.residual(x));
            if next >= worst {
                worst = next;
                break;
            }
            worst = next;
        }
        worst
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// RK4 integration of the Hamiltonian field of `f` from `x0`, returning the
/// start point followed by one point per step.
pub fn flow(surface: Surface, x0: &Point7, f: &Poly, opts: &FlowOptions) -> Result<Vec<Point7>, FlowError> {
    let ratio = opts.t_end / opts.dt;
    if !ratio.is_finite() || ratio < 0.0 || opts.dt == 0.0 {
        return Err(FlowError::BadStep {
            t_end: opts.t_end,
            dt: opts.dt,
        });
    }
    let steps = ratio.round() as usize;
    let k0 = FloatPoly::new(&relation_k()).eval(x0);
    if !(k0.abs() < 1e-8) {
        return Err(FlowError::OffVariety(k0.abs()));
    }
    let field = ham_field_with(bivector(surface, opts.variant), f);
    let comps: Vec<FloatPoly> = field.0.iter().map(FloatPoly::new).collect();
    let eval = |x: &Point7| -> Point7 { std::array::from_fn(|i| comps[i].eval(x)) };
    let axpy = |x: &Point7, h: f64, k: &Point7| -> Point7 { std::array::from_fn(|i| x[i] + h * k[i]) };
    let cons = Constraints::new(surface, x0);
    let h = opts.dt;

    let mut out = Vec::with_capacity(steps + 1);
    let mut x = *x0;
    out.push(x);
    for step in 1..=steps {
        let k1 = eval(&x);
        let k2 = eval(&axpy(&x, 0.5 * h, &k1));
        let k3 = eval(&axpy(&x, 0.5 * h, &k2));
        let k4 = eval(&axpy(&x, h, &k3));
        x = std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if opts.project {
            let residual = cons.project(&mut x, opts.project_tol);
            if !(residual < opts.project_tol) {
                return Err(FlowError::Projection { step, residual });
            }
        } else {
            let residual = max_abs(&cons.residual(&x));
            if !(residual <= opts.reject_above) {
                return Err(FlowError::Rejected { step, residual });
            }
        }
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvar::{BoundaryValue, TraceName};
    use crate::su2dyn::{sample_rep, trace_coords};

    fn start(surface: Surface, c: &[f64], seed: u64) -> Point7 {
        let c = BoundaryValue::new(surface, c.to_vec()).unwrap();
        trace_coords(&sample_rep(surface, &c, seed).unwrap())
    }

    #[test]
    fn conserves_its_hamiltonian() {
        let x0 = start(Surface::FourHoledSphere, &[0.1, -0.4, 0.7, 0.2], 3);
        let f: Poly = "t12".parse().unwrap();
        let path = flow(Surface::FourHoledSphere, &x0, &f, &FlowOptions::default()).unwrap();
        assert_eq!(path.len(), 1001);
        let last = path.last().unwrap();
        assert!((last[4] - x0[4]).abs() < 1e-8);
        assert!(FloatPoly::new(&relation_k()).eval(last).abs() < 1e-6);
        // the flow actually moves
        assert!((last[6] - x0[6]).abs() + (last[5] - x0[5]).abs() > 1e-3);
    }

    #[test]
    fn projection_restores_constraints() {
        let x0 = start(Surface::TwoHoledTorus, &[0.3, -1.1], 4);
        let f = crate::charvar::trace_fn(Surface::TwoHoledTorus, TraceName::P23).unwrap();
        let opts = FlowOptions {
            project: true,
            ..FlowOptions::default()
        };
        let path = flow(Surface::TwoHoledTorus, &x0, &f, &opts).unwrap();
        let cons = Constraints::new(Surface::TwoHoledTorus, &x0);
        for x in &path {
            assert!(max_abs(&cons.residual(x)) < 1e-10);
        }
    }

    #[test]
    fn literal_torus_bivector_leaves_the_variety() {
        let x0 = start(Surface::TwoHoledTorus, &[0.3, -1.1], 5);
        let f = crate::charvar::trace_fn(Surface::TwoHoledTorus, TraceName::P12).unwrap();
        let opts = FlowOptions {
            variant: BivectorVariant::Literal,
            ..FlowOptions::default()
        };
        assert!(matches!(flow(Surface::TwoHoledTorus, &x0, &f, &opts), Err(FlowError::Rejected { .. })));
    }

    #[test]
    fn bad_arguments() {
        let f: Poly = "t12".parse().unwrap();
        let off = [0.0; 7];
        assert!(matches!(flow(Surface::FourHoledSphere, &off, &f, &FlowOptions::default()), Err(FlowError::OffVariety(_))));
        let x0 = [2.0; 7];
        let opts = FlowOptions {
            dt: 0.0,
            ..FlowOptions::default()
        };
        assert!(matches!(flow(Surface::FourHoledSphere, &x0, &f, &opts), Err(FlowError::BadStep { .. })));
    }
}
