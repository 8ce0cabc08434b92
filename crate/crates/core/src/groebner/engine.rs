//! Integer-coefficient polynomials ordered by a chosen monomial order, and
//! the Buchberger loop. Coefficients are kept primitive so reductions never
//! need rational arithmetic.

use super::{Budget, GroebnerError};
use crate::polyring::{Mono, MonomialOrder, Poly, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Terms in ascending order, so the leading term is the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IPoly {
    pub(crate) terms: Vec<(Mono, BigInt)>,
}

impl IPoly {
    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn lm(&self) -> &Mono {
        &self.terms.last().expect("nonzero").0
    }

    pub(crate) fn lc(&self) -> &BigInt {
        &self.terms.last().expect("nonzero").1
    }

    /// Clears denominators and content; also returns the factor applied.
    pub(crate) fn from_poly(p: &Poly, order: MonomialOrder) -> (IPoly, Rat) {
        let prim = p.primitive();
        let factor = if p.is_zero() {
            Rat::one()
        } else {
            &prim.terms()[0].1 / &p.terms()[0].1
        };
        let mut terms: Vec<(Mono, BigInt)> = prim
            .terms()
            .iter()
            .map(|(m, c)| (*m, c.to_integer()))
            .collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
        (IPoly { terms }, factor)
    }

    pub(crate) fn to_poly(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, Rat::from_integer(c.clone()))))
    }

    /// Monic version over the rationals.
    pub(crate) fn to_monic_poly(&self) -> Poly {
        let lc = self.lc().clone();
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, Rat::new(c.clone(), lc.clone()))))
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub(crate) fn make_primitive(&mut self) {
        if self.is_zero() {
            return;
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c /= &g;
            }
        }
    }
}

/// `a * f - b * (m * g)`, all in ascending order.
fn axpy(order: MonomialOrder, a: &BigInt, f: &[(Mono, BigInt)], b: &BigInt, m: &Mono, g: &[(Mono, BigInt)]) -> Vec<(Mono, BigInt)> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < f.len() || j < g.len() {
        let gm = g.get(j).map(|(mm, _)| mm.mul(m));
        let ord = match (f.get(i), &gm) {
            (Some((fm, _)), Some(gm)) => order.cmp(fm, gm),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Less => {
                out.push((f[i].0, a * &f[i].1));
                i += 1;
            }
            Ordering::Greater => {
                out.push((gm.unwrap(), -(b * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &f[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((f[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Reduction state shared by Buchberger and normal forms.
pub(crate) struct Reducer<'a> {
    pub(crate) order: MonomialOrder,
    pub(crate) budget: &'a mut Budget,
}

impl Reducer<'_> {
    /// Full reduction of `f` by `basis`. Returns the primitive remainder and
    /// the rational `lambda` with `NF(f) = lambda * remainder` over the
    /// rationals, given that `f` entered with the factor it carries.
    pub(crate) fn reduce(&mut self, f: &IPoly, basis: &[&IPoly]) -> Result<(IPoly, Rat), GroebnerError> {
        let mut p = f.terms.clone();
        // remainder terms collected in descending order
        let mut r: Vec<(Mono, BigInt)> = Vec::new();
        // p_true + r_true = scale * (p + r) for the current working copies
        let mut scale = Rat::one();
        let mut since_content = 0usize;
        while let Some((lm, lc)) = p.last().cloned() {
            let divisor = basis.iter().find(|g| g.lm().divides(&lm));
            match divisor {
                Some(g) => {
                    self.budget.step()?;
                    let gl = g.lc();
                    let d = lc.gcd(gl);
                    let mut a = gl / &d;
                    let mut b = &lc / &d;
                    if a.is_negative() {
                        a = -a;
                        b = -b;
                    }
                    let m = g.lm().quotient_of(&lm);
                    p.pop();
                    let tail = &g.terms[..g.terms.len() - 1];
                    p = axpy(self.order, &a, &p, &b, &m, tail);
                    if !a.is_one() {
                        for (_, c) in &mut r {
                            *c *= &a;
                        }
                        scale /= Rat::from_integer(a);
                    }
                    since_content += 1;
                    if since_content >= 8 {
                        since_content = 0;
                        let mut g = BigInt::zero();
                        for (_, c) in p.iter().chain(r.iter()) {
                            g = g.gcd(c);
                            if g.is_one() {
                                break;
                            }
                        }
                        if !g.is_zero() && !g.is_one() {
                            for (_, c) in p.iter_mut().chain(r.iter_mut()) {
                                *c /= &g;
                            }
                            scale *= Rat::from_integer(g);
                        }
                    }
                }
                None => {
                    r.push(p.pop().unwrap());
                }
            }
        }
        r.reverse();
        let mut out = IPoly { terms: r };
        if !out.is_zero() {
            let before = out.lc().clone();
            out.make_primitive();
            scale *= Rat::new(before, out.lc().clone());
        }
        Ok((out, scale))
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

fn spoly(order: MonomialOrder, f: &IPoly, g: &IPoly, lcm: &Mono) -> IPoly {
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d;
    let b = f.lc() / &d;
    let mf = f.lm().quotient_of(lcm);
    let mg = g.lm().quotient_of(lcm);
    let fm: Vec<(Mono, BigInt)> = f.terms[..f.terms.len() - 1].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let mut out = IPoly {
        terms: axpy(order, &a, &fm, &b, &mg, &g.terms[..g.terms.len() - 1]),
    };
    out.make_primitive();
    out
}

/// Gebauer–Möller update: adds `h = polys[hi]` to the basis.
fn update(polys: &[IPoly], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, hi: usize) {
    let h = polys[hi].lm();
    let mut c: std::collections::VecDeque<Pair> = active
        .iter()
        .map(|&g| Pair {
            i: g,
            j: hi,
            lcm: polys[g].lm().lcm(h),
        })
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop_front() {
        let coprime = polys[p.i].lm().coprime(h);
        let beaten = c.iter().chain(d.iter()).any(|o| o.lcm.divides(&p.lcm));
        if coprime || !beaten {
            d.push(p);
        }
    }
    let e = d.into_iter().filter(|p| !polys[p.i].lm().coprime(h));
    pairs.retain(|p| {
        !h.divides(&p.lcm) || polys[p.i].lm().lcm(h) == p.lcm || polys[p.j].lm().lcm(h) == p.lcm
    });
    pairs.extend(e);
    active.retain(|&g| !h.divides(polys[g].lm()));
    active.push(hi);
}

/// Reduced Gröbner basis, each element primitive with positive leading
/// coefficient, sorted by descending leading monomial.
pub(crate) fn buchberger(gens: &[IPoly], order: MonomialOrder, budget: &mut Budget) -> Result<Vec<IPoly>, GroebnerError> {
    let mut polys: Vec<IPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for g in gens {
        let basis: Vec<&IPoly> = active.iter().map(|&i| &polys[i]).collect();
        let (r, _) = Reducer { order, budget }.reduce(g, &basis)?;
        if r.is_zero() {
            continue;
        }
        polys.push(r);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index for determinism
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                order
                    .cmp(&pairs[a].lcm, &pairs[b].lcm)
                    .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        budget.pair()?;
        let s = spoly(order, &polys[pair.i], &polys[pair.j], &pair.lcm);
        if s.is_zero() {
            continue;
        }
        let basis: Vec<&IPoly> = active.iter().map(|&i| &polys[i]).collect();
        let (r, _) = Reducer { order, budget }.reduce(&s, &basis)?;
        if r.is_zero() {
            continue;
        }
        polys.push(r);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    // minimalize, then inter-reduce
    let mut min: Vec<IPoly> = active.iter().map(|&i| polys[i].clone()).collect();
    min.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    let mut keep: Vec<IPoly> = Vec::new();
    for (idx, g) in min.iter().enumerate() {
        let dominated = min
            .iter()
            .enumerate()
            .any(|(k, o)| k != idx && o.lm().divides(g.lm()) && (o.lm() != g.lm() || k < idx));
        if !dominated {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for idx in 0..keep.len() {
        let others: Vec<&IPoly> = keep.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, g)| g).collect();
        let lead = keep[idx].terms.last().unwrap().clone();
        let tail = IPoly {
            terms: keep[idx].terms[..keep[idx].terms.len() - 1].to_vec(),
        };
        // reduce only the tail; the leading term is irreducible by minimality
        let (r, lambda) = Reducer { order, budget }.reduce(&tail, &others)?;
        // keep exact proportions: lead + tail_nf where tail_nf = lambda * r
        let mut terms: Vec<(Mono, Rat)> = r.terms.iter().map(|(m, c)| (*m, Rat::from_integer(c.clone()) * &lambda)).collect();
        terms.push((lead.0, Rat::from_integer(lead.1)));
        let (mut ip, _) = IPoly::from_poly(&Poly::from_terms(terms), order);
        ip.make_primitive();
        out.push(ip);
    }
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    Ok(out)
}
