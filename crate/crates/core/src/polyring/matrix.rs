use super::Poly;
use std::collections::HashMap;
use std::fmt;

/// Square matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> PolyMatrix {
        PolyMatrix {
            n,
            entries: vec![Poly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    /// Builds a matrix from rows; panics unless the rows form a square.
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> PolyMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        PolyMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.get(i, j) == &(-self.get(j, i)))
        })
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Poly {
        self.det_bareiss()
    }

    pub fn det_bareiss(&self) -> Poly {
        let n = self.n;
        if n == 0 {
            return Poly::one();
        }
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                // smallest nonzero pivot candidate keeps intermediate sizes down
                let pick = (k + 1..n)
                    .filter(|&i| !a[i][k].is_zero())
                    .min_by_key(|&i| a[i][k].len());
                match pick {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Poly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly");
                }
                a[i][k] = Poly::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Determinant by Laplace expansion along rows, memoized on the set of
    /// remaining columns. Independent of [`PolyMatrix::det_bareiss`].
    pub fn det_cofactor(&self) -> Poly {
        assert!(self.n <= 20, "cofactor expansion limited to small matrices");
        let mut memo: HashMap<u32, Poly> = HashMap::new();
        let full = if self.n == 0 { 0 } else { (1u32 << self.n) - 1 };
        self.minor(full, &mut memo)
    }

    fn minor(&self, cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if cols == 0 {
            return Poly::one();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let row = self.n - cols.count_ones() as usize;
        let mut acc = Poly::zero();
        let mut position = 0;
        for c in 0..self.n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = self.get(row, c);
            if !entry.is_zero() {
                let sub = self.minor(cols & !(1 << c), memo);
                let term = entry * &sub;
                if position % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            position += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::poly::tests::arb_poly;
    use proptest::prelude::*;

    #[test]
    fn identity_has_unit_determinant() {
        assert_eq!(PolyMatrix::identity(7).det(), Poly::one());
        assert_eq!(PolyMatrix::identity(7).det_cofactor(), Poly::one());
    }

    #[test]
    fn repeated_rows_give_zero() {
        let r: Vec<Poly> = ["t1", "t2^2 - 1", "t12*t13"].iter().map(|s| s.parse().unwrap()).collect();
        let other: Vec<Poly> = ["1", "t3", "t4 + t23"].iter().map(|s| s.parse().unwrap()).collect();
        let m = PolyMatrix::from_rows(vec![r.clone(), other, r]);
        assert!(m.det().is_zero());
        assert!(m.det_cofactor().is_zero());
    }

    #[test]
    fn zero_leading_pivot_is_swapped() {
        let p = |s: &str| s.parse::<Poly>().unwrap();
        let m = PolyMatrix::from_rows(vec![
            vec![p("0"), p("t1")],
            vec![p("t2"), p("t3")],
        ]);
        assert_eq!(m.det(), p("-t1*t2"));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec(arb_poly(2, 3), n * n).prop_map(move |v| {
            PolyMatrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bareiss_matches_cofactor_3x3(m in arb_matrix(3)) {
            prop_assert_eq!(m.det_bareiss(), m.det_cofactor());
        }

        #[test]
        fn bareiss_matches_cofactor_4x4(m in arb_matrix(4)) {
            prop_assert_eq!(m.det_bareiss(), m.det_cofactor());
        }

        #[test]
        fn row_swap_negates(m in arb_matrix(3)) {
            let mut s = m.clone();
            s.swap_rows(0, 2);
            prop_assert_eq!(s.det(), -m.det());
        }
    }
}
