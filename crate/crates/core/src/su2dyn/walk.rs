use super::{trace_coords, Move, RepTuple, StreamRow, TwistRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Random walk choosing uniformly among the given twists and their
/// inverses. Yields the trace coordinates after each move.
pub struct Walk<'a> {
    rules: Vec<&'a TwistRule>,
    state: RepTuple,
    rng: ChaCha8Rng,
    step: usize,
    remaining: usize,
}

impl<'a> Walk<'a> {
    pub fn new(r0: RepTuple, rules: Vec<&'a TwistRule>, steps: usize, seed: u64) -> Walk<'a> {
        assert!(!rules.is_empty(), "walk needs at least one twist");
        Walk {
            rules,
            state: r0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            step: 0,
            remaining: steps,
        }
    }

    pub fn state(&self) -> &RepTuple {
        &self.state
    }
}

impl Iterator for Walk<'_> {
    type Item = StreamRow;

    fn next(&mut self) -> Option<StreamRow> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        self.step += 1;
        let pick = self.rng.random_range(0..2 * self.rules.len());
        let mv = Move {
            rule: self.rules[pick / 2],
            inverse: pick % 2 == 1,
        };
        self.state = mv.apply(&self.state);
        Some(StreamRow {
            step: self.step,
            x: trace_coords(&self.state),
            gen: mv.to_string(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

pub fn walk(r0: RepTuple, rules: &[&TwistRule], steps: usize, seed: u64) -> Vec<StreamRow> {
    Walk::new(r0, rules.to_vec(), steps, seed).collect()
}

/// Independent walks, one per `(start, seed)`, returned in input order.
pub fn walk_batch(jobs: &[(RepTuple, u64)], rules: &[&TwistRule], steps: usize) -> Vec<Vec<StreamRow>> {
    jobs.par_iter().map(|(r0, seed)| walk(*r0, rules, steps, *seed)).collect()
}
