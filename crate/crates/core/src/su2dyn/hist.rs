use crate::polyring::{Point7, Var};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HistError {
    #[error("histograms use different bin specs")]
    Mismatch,
    #[error("histogram is empty")]
    Empty,
    #[error("need at least one coordinate and one bin")]
    Shape,
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

/// Counts over a regular grid on `[lo, hi]^d` in the chosen coordinates,
/// bins in row-major order with the first coordinate slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hist {
    pub coords: Vec<Var>,
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Hist {
    pub fn empty(coords: Vec<Var>, bins: usize) -> Result<Hist, HistError> {
        if coords.is_empty() || bins == 0 {
            return Err(HistError::Shape);
        }
        let cells = bins
            .checked_pow(coords.len() as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or(HistError::Shape)?;
        Ok(Hist {
            coords,
            bins,
            lo: -2.0,
            hi: 2.0,
            counts: vec![0; cells],
            total: 0,
        })
    }

    fn cell(&self, v: f64) -> usize {
        let t = (v - self.lo) / (self.hi - self.lo) * self.bins as f64;
        (t.floor().max(0.0) as usize).min(self.bins - 1)
    }

    /// Points outside the grid fall into the edge bins; non-finite points are skipped.
    pub fn add(&mut self, x: &Point7) {
        let mut idx = 0;
        for v in &self.coords {
            let val = x[v.index()];
            if !val.is_finite() {
                return;
            }
            idx = idx * self.bins + self.cell(val);
        }
        self.counts[idx] += 1;
        self.total += 1;
    }

    pub fn same_spec(&self, o: &Hist) -> bool {
        self.coords == o.coords && self.bins == o.bins && self.lo == o.lo && self.hi == o.hi
    }

    /// Edges of bin `b` along any axis.
    pub fn bin_range(&self, b: usize) -> (f64, f64) {
        let w = (self.hi - self.lo) / self.bins as f64;
        (self.lo + w * b as f64, self.lo + w * (b + 1) as f64)
    }

    fn multi_index(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.coords.len()];
        for slot in out.iter_mut().rev() {
            *slot = i % self.bins;
            i /= self.bins;
        }
        out
    }

    /// `bin_index,<coord>_lo,<coord>_hi,...,count`, one row per bin.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_index");
        for v in &self.coords {
            write!(s, ",{0}_lo,{0}_hi", v.name()).unwrap();
        }
        s.push_str(",count\n");
        for (i, c) in self.counts.iter().enumerate() {
            write!(s, "{i}").unwrap();
            for b in self.multi_index(i) {
                let (lo, hi) = self.bin_range(b);
                write!(s, ",{lo},{hi}").unwrap();
            }
            writeln!(s, ",{c}").unwrap();
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Hist, HistError> {
        let err = |line: usize, msg: &str| HistError::Csv { line, msg: msg.to_string() };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.len() < 4 || cols.len() % 2 != 0 || cols[0] != "bin_index" || cols[cols.len() - 1] != "count" {
            return Err(err(1, "header must be bin_index,<coord>_lo,<coord>_hi,...,count"));
        }
        let mut coords = Vec::new();
        for pair in cols[1..cols.len() - 1].chunks(2) {
            let name = pair[0].strip_suffix("_lo").ok_or_else(|| err(1, "expected <coord>_lo"))?;
            if pair[1].strip_suffix("_hi") != Some(name) {
                return Err(err(1, "expected matching <coord>_hi"));
            }
            coords.push(Var::from_name(name).ok_or_else(|| err(1, "unknown coordinate"))?);
        }
        let mut rows: Vec<(usize, Vec<f64>, u64)> = Vec::new();
        for (n, line) in lines {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != cols.len() {
                return Err(err(n + 1, "wrong number of fields"));
            }
            let idx: usize = f[0].parse().map_err(|_| err(n + 1, "bad bin_index"))?;
            let ranges = f[1..f.len() - 1]
                .iter()
                .map(|x| x.parse::<f64>().map_err(|_| err(n + 1, "bad range")))
                .collect::<Result<Vec<_>, _>>()?;
            let count: u64 = f[f.len() - 1].parse().map_err(|_| err(n + 1, "bad count"))?;
            if idx != rows.len() {
                return Err(err(n + 1, "bin_index out of sequence"));
            }
            rows.push((idx, ranges, count));
        }
        let d = coords.len();
        let bins = (rows.len() as f64).powf(1.0 / d as f64).round() as usize;
        if bins == 0 || bins.checked_pow(d as u32) != Some(rows.len()) {
            return Err(err(0, "row count is not bins^dims"));
        }
        let mut h = Hist::empty(coords, bins).map_err(|_| err(0, "bad shape"))?;
        h.lo = rows[0].1[0];
        h.hi = rows[rows.len() - 1].1[2 * d - 1];
        if !(h.lo.is_finite() && h.hi.is_finite() && h.lo < h.hi) {
            return Err(err(2, "bad grid range"));
        }
        for (i, ranges, count) in rows {
            for (axis, b) in h.multi_index(i).into_iter().enumerate() {
                let (lo, hi) = h.bin_range(b);
                let tol = 1e-9 * (h.hi - h.lo);
                if (ranges[2 * axis] - lo).abs() > tol || (ranges[2 * axis + 1] - hi).abs() > tol {
                    return Err(err(i + 2, "bin range does not match the grid"));
                }
            }
            h.counts[i] = count;
            h.total = h.total.checked_add(count).ok_or_else(|| err(i + 2, "count overflow"))?;
        }
        Ok(h)
    }
}

pub fn histogram(points: &[Point7], bins: usize, coords: &[Var]) -> Result<Hist, HistError> {
    let mut h = Hist::empty(coords.to_vec(), bins)?;
    for x in points {
        h.add(x);
    }
    Ok(h)
}

/// Total variation distance `1/2 sum |p_i - q_i|` of the normalized counts.
pub fn tv(a: &Hist, b: &Hist) -> Result<f64, HistError> {
    if !a.same_spec(b) {
        return Err(HistError::Mismatch);
    }
    if a.total == 0 || b.total == 0 {
        return Err(HistError::Empty);
    }
    let (na, nb) = (a.total as f64, b.total as f64);
    let s: f64 = a
        .counts
        .iter()
        .zip(&b.counts)
        .map(|(&x, &y)| (x as f64 / na - y as f64 / nb).abs())
        .sum();
    Ok((0.5 * s).min(1.0))
}
