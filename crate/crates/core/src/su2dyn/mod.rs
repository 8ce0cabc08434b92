//! Numerical layer: SU(2) representations of the free group on three
//! generators, their trace coordinates, twist actions, Hamiltonian flows,
//! random walks and histogram diagnostics.

mod flow;
mod hist;
mod liouville;
mod quat;
mod sample;
mod stream;
mod twist;
mod walk;
mod word;

pub use flow::{flow, FlowError, FlowOptions};
pub use hist::{histogram, tv, Hist, HistError};
pub use liouville::liouville_sample_4hs;
pub use quat::SU2;
pub use sample::{sample_points, sample_rep, sample_rep_with, SampleError};
pub use stream::{read_jsonl, write_jsonl, StreamError, StreamRow};
pub use twist::{boundary_words, validate_rule, Move, RuleReport, TwistError, TwistRule, TwistTable, Validation};
pub use walk::{walk, walk_batch, Walk};
pub use word::{Letter, Word, WordError};

use crate::polyring::{FloatPoly, Point7, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Images `(A1, A2, A3)` of the free generators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepTuple(pub [SU2; 3]);

impl RepTuple {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> RepTuple {
        RepTuple([SU2::random(rng), SU2::random(rng), SU2::random(rng)])
    }
}

/// `(t4, t1, t2, t3, t12, t13, t23)` with `t4 = tr(A1 A2 A3)`.
pub fn trace_coords(r: &RepTuple) -> Point7 {
    let [a1, a2, a3] = r.0;
    [
        (a1 * a2 * a3).trace(),
        a1.trace(),
        a2.trace(),
        a3.trace(),
        (a1 * a2).trace(),
        (a1 * a3).trace(),
        (a2 * a3).trace(),
    ]
}

/// Largest `|p(trace_coords(r)) - tr(w(r))|` over random tuples.
pub fn identity_defect(p: &Poly, w: &Word, trials: usize, seed: u64) -> f64 {
    let f = FloatPoly::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let r = RepTuple::random(&mut rng);
            (f.eval(&trace_coords(&r)) - w.eval(&r).trace()).abs()
        })
        .fold(0.0, f64::max)
}

/// Randomized test of the trace identity `p = tr(w)` to `1e-9`.
pub fn identity_test(p: &Poly, w: &Word, trials: usize, seed: u64) -> bool {
    identity_defect(p, w, trials, seed) < 1e-9
}
