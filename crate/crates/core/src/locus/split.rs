use super::univariate::UPoly;
use crate::polyring::{rat, Mono, Poly, Rat, Var, NVARS};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn rat_sqrt(c: &Rat) -> Option<Rat> {
    if c.is_negative() {
        return None;
    }
    let (n, d) = (c.numer(), c.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rat::new(rn, rd))
}

fn mono_sqrt(m: &Mono) -> Option<Mono> {
    let mut e = [0u16; NVARS];
    for (o, &x) in e.iter_mut().zip(m.exps()) {
        if x % 2 != 0 {
            return None;
        }
        *o = x / 2;
    }
    Some(Mono(e))
}

/// Exact square root in the polynomial ring, if one exists. The root is
/// returned with a positive leading coefficient.
pub fn poly_sqrt(d: &Poly) -> Option<Poly> {
    if d.is_zero() {
        return Some(Poly::zero());
    }
    let (m0, c0) = d.leading()?.clone();
    let lead = Poly::term(rat_sqrt(&c0)?, mono_sqrt(&m0)?);
    let (lm, lc) = lead.leading()?.clone();
    let min_deg = d.terms().iter().map(|(m, _)| m.degree()).min().unwrap_or(0);
    let mut q = lead.clone();
    let mut r = d - &(&q * &q);
    while let Some((mr, cr)) = r.leading().cloned() {
        if !lm.divides(&mr) {
            return None;
        }
        let t = Poly::term(cr / (rat(2) * &lc), lm.quotient_of(&mr));
        if 2 * t.degree() < min_deg {
            return None;
        }
        r = &r - &(&(&q * &t).scale(&rat(2)) + &(&t * &t));
        q += &t;
    }
    Some(q)
}

fn coefficients_in(s: &Poly, v: Var) -> [Poly; 3] {
    let mut parts: [Vec<(Mono, Rat)>; 3] = Default::default();
    for (m, c) in s.terms() {
        let e = m.exp(v) as usize;
        let mut rest = *m;
        rest.0[v.index()] = 0;
        parts[e].push((rest, c.clone()));
    }
    parts.map(Poly::from_terms)
}

/// Splits `s = a v^2 + b v + c` when the discriminant is a perfect square.
pub fn try_quadratic_split(s: &Poly, v: Var) -> Option<(Poly, Poly)> {
    if s.degree_in(v) != 2 {
        return None;
    }
    let [c, b, a] = coefficients_in(s, v);
    let disc = &(&b * &b) - &(&a * &c).scale(&rat(4));
    let q = poly_sqrt(&disc)?;
    let lin = &(&a * &Poly::var(v)).scale(&rat(2)) + &b;
    for cand in [&lin - &q, &lin + &q] {
        let f = cand.primitive();
        if f.is_constant() {
            continue;
        }
        if let Some(g) = s.div_exact(&f) {
            if !g.is_constant() && &f * &g == *s {
                return Some((f, g));
            }
        }
    }
    None
}

/// `s(p + T d)` as a univariate polynomial.
fn restrict_to_line(s: &Poly, p: &[BigInt; NVARS], d: &[BigInt; NVARS]) -> UPoly {
    restrict_to_line_i128(s, p, d).unwrap_or_else(|| restrict_to_line_exact(s, p, d))
}

fn mul_i128(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(*y)?)?;
        }
    }
    Some(out)
}

/// Machine-integer fast path; `None` on overflow or fractional coefficients.
fn restrict_to_line_i128(s: &Poly, p: &[BigInt; NVARS], d: &[BigInt; NVARS]) -> Option<UPoly> {
    let mut powers: Vec<Vec<Vec<i128>>> = Vec::with_capacity(NVARS);
    for i in 0..NVARS {
        let top = s.degree_in(Var::ALL[i]) as usize;
        let lin = [p[i].to_i128()?, d[i].to_i128()?];
        let mut row = vec![vec![1i128]];
        for e in 1..=top {
            row.push(mul_i128(&row[e - 1], &lin)?);
        }
        powers.push(row);
    }
    let mut out = vec![0i128; s.degree() as usize + 1];
    for (m, c) in s.terms() {
        if !c.is_integer() {
            return None;
        }
        let mut t = vec![c.to_integer().to_i128()?];
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = mul_i128(&t, &powers[i][e as usize])?;
            }
        }
        for (o, x) in out.iter_mut().zip(&t) {
            *o = o.checked_add(*x)?;
        }
    }
    let coeffs = out.into_iter().map(|x| Rat::from_integer(BigInt::from(x))).collect();
    Some(UPoly(coeffs).trimmed())
}

fn restrict_to_line_exact(s: &Poly, p: &[BigInt; NVARS], d: &[BigInt; NVARS]) -> UPoly {
    let mut powers: Vec<Vec<UPoly>> = Vec::with_capacity(NVARS);
    for i in 0..NVARS {
        let v = Var::ALL[i];
        let top = s.degree_in(v) as usize;
        let lin = UPoly::linear(Rat::from_integer(p[i].clone()), Rat::from_integer(d[i].clone()));
        let mut row = vec![UPoly::one()];
        for e in 1..=top {
            row.push(row[e - 1].mul(&lin));
        }
        powers.push(row);
    }
    let mut out = UPoly(Vec::new());
    for (m, c) in s.terms() {
        let mut t = UPoly::constant(c.clone());
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = t.mul(&powers[i][e as usize]);
            }
        }
        out = out.add(&t);
    }
    out
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        if f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Monic divisors of `f` formed from `size` of its roots, scaled by the
/// leading coefficient of `f` so they have integer coefficients when `f`
/// does. Returns each distinct divisor's constant term over that scale.
fn divisor_values(f: &UPoly, roots: &[Complex64], size: usize, limit: usize) -> Vec<Rat> {
    let lead = f.0.last().expect("nonzero slice").clone();
    let lead_f = lead.to_f64().unwrap_or(f64::INFINITY);
    let mut found: Vec<Rat> = Vec::new();
    combinations(roots.len(), size, |sub| {
        let mut q = vec![Complex64::one()];
        for &i in sub {
            let r = roots[i];
            let mut next = vec![Complex64::zero(); q.len() + 1];
            for (j, c) in q.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * r;
            }
            q = next;
        }
        let mut coeffs = Vec::with_capacity(q.len());
        for c in &q {
            let x = c * lead_f;
            let scale = x.norm().max(1.0);
            if x.im.abs() > 1e-6 * scale || x.re.abs() > 2f64.powi(52) {
                return false;
            }
            let rounded = x.re.round();
            // exact division below is the real check; this only prunes
            if (x.re - rounded).abs() > 1e-3 + 1e-9 * scale {
                return false;
            }
            coeffs.push(Rat::from_integer(BigInt::from(rounded as i64)));
        }
        let cand = UPoly(coeffs);
        if f.div_exact(&cand).is_some() {
            let val = &cand.0[0] / &lead;
            if !found.contains(&val) {
                found.push(val);
            }
        }
        found.len() >= limit
    });
    found
}

/// Lattice points `a` in `N^dim` with `|a| <= deg`, graded.
fn simplex(dim: usize, deg: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; dim]];
    let mut frontier = out.clone();
    for _ in 0..deg {
        let mut next = Vec::new();
        for a in &frontier {
            // extend only along the last nonzero axis or later to avoid repeats
            let start = a.iter().rposition(|&x| x > 0).unwrap_or(0);
            for i in start..dim {
                let mut b = a.clone();
                b[i] += 1;
                next.push(b);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `C(x - q, m)` as a polynomial in `v`.
fn binomial_poly(v: Var, q: i64, m: usize) -> Poly {
    let y = Poly::var(v) - Poly::int(q);
    let mut acc = Poly::one();
    for j in 0..m {
        acc = &acc * &(&y - &Poly::int(j as i64));
    }
    let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
    acc.scale(&Rat::new(BigInt::one(), fact))
}

/// Interpolates a polynomial of total degree `deg` in `vars` from its values
/// on the simplex `q + a`, `|a| <= deg`, via multivariate forward differences.
fn interpolate(vars: &[Var], q: &[i64], deg: usize, pts: &[Vec<usize>], vals: Vec<Rat>) -> Poly {
    use std::collections::HashMap;
    let index: HashMap<Vec<usize>, usize> = pts.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let mut g = vals;
    for axis in 0..vars.len() {
        for level in 1..=deg {
            // descending in the axis coordinate so each point sees old values
            let mut order: Vec<usize> = (0..pts.len()).filter(|&i| pts[i][axis] >= level).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(pts[i][axis]));
            for i in order {
                let mut prev = pts[i].clone();
                prev[axis] -= 1;
                let j = index[&prev];
                let delta = &g[i] - &g[j];
                g[i] = delta;
            }
        }
    }
    let mut out = Poly::zero();
    for (a, c) in pts.iter().zip(&g) {
        if c.is_zero() {
            continue;
        }
        let mut term = Poly::constant(c.clone());
        for (k, &m) in a.iter().enumerate() {
            if m > 0 {
                term = &term * &binomial_poly(vars[k], q[k], m);
            }
        }
        out += &term;
    }
    out
}

fn random_point(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> [i64; NVARS] {
    std::array::from_fn(|_| rng.random_range(lo..=hi))
}

/// Splits `s` into two nonconstant factors by restricting it to lines.
///
/// Fix an integer direction `e` on which the top-degree part of `s` does not
/// vanish. For a lattice point `x` the slice `T -> s(x + T e)` then has full
/// degree, and for a generic `x` the slice of each irreducible factor `f`
/// stays irreducible. The smallest exact divisor of the slice is then the
/// slice of `f` made monic, whose constant term is `f(x) / f_top(e)`.
/// Small lattice points sometimes give extra divisors, so three directions
/// are used and a value is kept only when they agree after rescaling.
/// Interpolating the values on a simplex of lattice points gives `f` up to a
/// constant, and exact division of `s` by `f` confirms the split.
pub fn split_by_lines(s: &Poly, seed: u64) -> Option<(Poly, Poly)> {
    const DIRECTIONS: usize = 3;
    const PROBES: usize = 4;
    let vars = s.vars();
    if vars.is_empty() {
        return None;
    }
    let total = s.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        // away from coordinate hyperplanes, where factors tend to vanish
        let q: Vec<i64> = vars
            .iter()
            .map(|_| rng.random_range(3..=8) * if rng.random_bool(0.5) { 1 } else { -1 })
            .collect();
        let point = |a: &[usize]| -> [BigInt; NVARS] {
            std::array::from_fn(|i| match vars.iter().position(|v| v.index() == i) {
                Some(k) => BigInt::from(q[k] + a[k] as i64),
                None => BigInt::zero(),
            })
        };
        let mut dirs = Vec::new();
        let origin = point(&vec![0; vars.len()]);
        while dirs.len() < DIRECTIONS {
            let e = random_point(&mut rng, -2, 2).map(BigInt::from);
            if restrict_to_line(s, &origin, &e).degree() == Some(total) {
                dirs.push(e);
            }
        }
        // slices through a few probe points; a spurious small divisor on one
        // of them is unlikely to repeat on all
        let mut probes = vec![origin];
        for _ in 0..PROBES - 1 {
            probes.push(random_point(&mut rng, -3, 3).map(BigInt::from));
        }
        let slices: Vec<Vec<(UPoly, Vec<Complex64>)>> = probes
            .iter()
            .map(|x| {
                dirs.iter()
                    .map(|e| {
                        let f = restrict_to_line(s, x, e);
                        let r = f.roots();
                        (f, r)
                    })
                    .collect()
            })
            .collect();
        let has_divisor = |m: usize| {
            slices.iter().flatten().all(|(f, r)| !divisor_values(f, r, m, 1).is_empty())
        };
        let Some(size) = (1..=total / 2).find(|&m| has_divisor(m)) else {
            return None;
        };
        // rescale every direction to the first one at a probe point where
        // each slice has a single candidate
        let calibration = slices.iter().find_map(|row| {
            row.iter()
                .map(|(f, r)| match divisor_values(f, r, size, 2).as_slice() {
                    [v] if !v.is_zero() => Some(v.clone()),
                    _ => None,
                })
                .collect::<Option<Vec<Rat>>>()
        });
        let Some(scale) = calibration else {
            continue;
        };
        let scale: Vec<Rat> = scale.iter().map(|v| &scale[0] / v).collect();
        let pts = simplex(vars.len(), size);
        let value_at = |a: &Vec<usize>| -> Option<Rat> {
            let x = point(a);
            let mut seen: Vec<(Rat, usize)> = Vec::new();
            for (e, w) in dirs.iter().zip(&scale) {
                let f = restrict_to_line(s, &x, e);
                for v in divisor_values(&f, &f.roots(), size, 6) {
                    let v = v * w;
                    match seen.iter_mut().find(|(u, _)| *u == v) {
                        Some((_, n)) => *n += 1,
                        None => seen.push((v, 1)),
                    }
                }
            }
            // a zero of the other factor at x adds a root T = 0 to every
            // slice, which can fake agreement on the value 0
            let best = seen.iter().map(|(_, n)| *n).max().unwrap_or(0);
            let mut top = seen.into_iter().filter(|(_, n)| *n == best);
            match (top.next(), top.next()) {
                (Some((v, n)), None) if n >= 2 => Some(v),
                _ => None,
            }
        };
        let Some(vals) = pts.par_iter().map(value_at).collect::<Option<Vec<Rat>>>() else {
            continue;
        };
        let f = interpolate(&vars, &q, size, &pts, vals).primitive();
        if f.is_constant() {
            continue;
        }
        if let Some(g) = s.div_exact(&f) {
            if !g.is_constant() && &f * &g == *s {
                return Some((f, g));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn quadratic_split_of_difference_of_squares() {
        let (a, b) = try_quadratic_split(&p("t12^2 - 1"), Var::T12).unwrap();
        let mut got = [a.to_string(), b.to_string()];
        got.sort();
        assert_eq!(got, ["t12 + 1", "t12 - 1"]);
    }

    #[test]
    fn quadratic_split_fails_when_irreducible() {
        assert!(try_quadratic_split(&p("t12^2 + 1"), Var::T12).is_none());
        assert!(try_quadratic_split(&p("t12^3 - 1"), Var::T12).is_none());
    }

    #[test]
    fn quadratic_split_multivariate() {
        let s = &p("t1*t12 + t2 - 3") * &p("2*t12 - t13*t3");
        let (a, b) = try_quadratic_split(&s, Var::T12).unwrap();
        assert_eq!(&a * &b, s);
    }

    #[test]
    fn square_roots() {
        let q = p("t1*t2 - 3*t12 + 1/2");
        assert_eq!(poly_sqrt(&(&q * &q)).map(|r| r.primitive()), Some(q.primitive()));
        assert_eq!(poly_sqrt(&p("t1^2 + 1")), None);
        assert_eq!(poly_sqrt(&p("4")), Some(p("2")));
    }

    #[test]
    fn simplex_size() {
        assert_eq!(simplex(3, 2).len(), 10);
        assert_eq!(simplex(6, 5).len(), 462);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p("t1^2*t2 - 3*t2*t3 + t1 - 7");
        let vars = [Var::T1, Var::T2, Var::T3];
        let q = [2i64, -1, 3];
        let pts = simplex(3, 3);
        let vals = pts
            .iter()
            .map(|a| {
                let mut x: [Rat; NVARS] = std::array::from_fn(|_| rat(0));
                for k in 0..3 {
                    x[vars[k].index()] = rat(q[k] + a[k] as i64);
                }
                f.eval_rat(&x)
            })
            .collect();
        assert_eq!(interpolate(&vars, &q, 3, &pts, vals), f);
    }

    #[test]
    fn line_split_of_a_product() {
        let a = p("t1*t12 - t2*t3 + 2");
        let b = p("t12^2*t13 + t13*t23 - t1 - 1");
        let s = (&a * &b).scale(&rat(3));
        let (f, g) = split_by_lines(&s, 1).unwrap();
        assert_eq!(&f * &g, s);
        assert!(f == a.primitive() || f == b.primitive());
    }

    #[test]
    fn line_split_needs_a_unique_smallest_factor() {
        // two factors of equal degree cannot be told apart on a line
        let s = &p("t1*t12 - t2*t3 + 2") * &p("t12^2 + t13*t23 - t1 - 1");
        assert!(split_by_lines(&s, 1).is_none());
    }

    #[test]
    fn line_split_rejects_irreducible() {
        assert!(split_by_lines(&p("t12^2 + t13^2 + t23^2 - t1"), 3).is_none());
    }
}
