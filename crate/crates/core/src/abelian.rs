//! Abelianisation of `G_n(m,k)` through the integer Smith normal form of the
//! circulant relation matrix.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    /// Torsion coefficients `d_1 | d_2 | ...`, each greater than 1.
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigUint::one(), |acc, d| acc * d))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Row `i` has `+1` at `i`, `+1` at `i+m`, `-1` at `i+k` (indices mod `n`, summed).
pub fn relation_matrix(n: u32, m: u32, k: u32) -> IntMatrix {
    let n = n as usize;
    let mut mat = IntMatrix::zeros(n, n);
    for i in 0..n {
        mat[(i, i)] += 1;
        mat[(i, (i + m as usize) % n)] += 1;
        mat[(i, (i + k as usize) % n)] -= 1;
    }
    mat
}

/// Smith normal form by repeated least-absolute-value pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> AbelianInvariants {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag: Vec<BigInt> = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // least nonzero |entry| in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        let mut done = true;
        let p = a[(t, t)].clone();
        for i in (t + 1)..rows {
            if a[(i, t)].is_zero() {
                continue;
            }
            let q = a[(i, t)].div_floor(&p);
            for j in t..cols {
                let v = &q * &a[(t, j)];
                a[(i, j)] -= v;
            }
            if !a[(i, t)].is_zero() {
                done = false;
            }
        }
        for j in (t + 1)..cols {
            if a[(t, j)].is_zero() {
                continue;
            }
            let q = a[(t, j)].div_floor(&p);
            for i in t..rows {
                let v = &q * &a[(i, t)];
                a[(i, j)] -= v;
            }
            if !a[(t, j)].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // pivot must divide the rest of the block
        let bad = ((t + 1)..rows).flat_map(|i| ((t + 1)..cols).map(move |j| (i, j))).find(|&(i, j)| !(&a[(i, j)] % &p).is_zero());
        if let Some((i, _)) = bad {
            for j in t..cols {
                let v = a[(i, j)].clone();
                a[(t, j)] += v;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    let nonzero = diag.len();
    let torsion = diag
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_biguint().expect("absolute value"))
        .collect();
    AbelianInvariants { torsion, free_rank: cols - nonzero }
}

pub fn abelian_invariants(n: u32, m: u32, k: u32) -> AbelianInvariants {
    smith_normal_form(&relation_matrix(n, m, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    /// Fraction-free Gaussian elimination determinant.
    fn bareiss_det(m: &IntMatrix) -> BigInt {
        let n = m.rows;
        let mut a = m.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(r) = ((k + 1)..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, r);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn resultant_abs(n: u32, m: u32, k: u32) -> f64 {
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 0..n {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            prod *= Complex64::new(1.0, 0.0) + z.powu(m) - z.powu(k);
        }
        prod.norm()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn relation_matrix_rows() {
        let m = relation_matrix(3, 1, 2);
        assert_eq!(m, IntMatrix::from_rows(&[vec![1, 1, -1], vec![-1, 1, 1], vec![1, -1, 1]]));
        let m = relation_matrix(5, 0, 3);
        assert_eq!(m[(0, 0)], BigInt::from(2));
        assert_eq!(m[(0, 3)], BigInt::from(-1));
        for (n, mm, k) in [(7, 2, 5), (9, 4, 4), (6, 0, 0)] {
            let m = relation_matrix(n, mm, k);
            for i in 0..n as usize {
                let s: BigInt = (0..n as usize).map(|j| m[(i, j)].clone()).sum();
                assert_eq!(s, BigInt::one());
            }
        }
    }

    #[test]
    fn snf_small() {
        let id = smith_normal_form(&IntMatrix::identity(4));
        assert!(id.is_trivial());
        let d = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 6]]));
        assert_eq!(d.torsion, vec![big(2), big(6)]);
        let d = smith_normal_form(&IntMatrix::from_rows(&[vec![6, 0], vec![0, 4]]));
        assert_eq!(d.torsion, vec![big(2), big(12)]);
        let d = smith_normal_form(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 3]]));
        assert_eq!((d.free_rank, d.torsion.clone()), (1, vec![big(3)]));
        assert_eq!(d.to_string(), "Z x Z_3");
        assert_eq!(smith_normal_form(&IntMatrix::zeros(3, 3)).to_string(), "Z^3");
    }

    #[test]
    fn snf_table_values() {
        assert_eq!(abelian_invariants(8, 5, 1).torsion, vec![big(17)]);
        assert_eq!(abelian_invariants(8, 5, 1).to_string(), "Z_17");
        assert_eq!(abelian_invariants(10, 1, 6).order(), Some(big(31)));
        assert_eq!(abelian_invariants(12, 7, 1).order(), Some(big(65)));
        let f26 = abelian_invariants(6, 1, 2);
        assert!(f26.order().is_some_and(|o| o > BigUint::one()));
        // m = 0
        assert_eq!(abelian_invariants(14, 0, 3).order(), Some(big(16383)));
    }

    #[test]
    fn det_matches_resultant() {
        for n in 2..=24u32 {
            for m in 0..n {
                for k in 0..n {
                    let mat = relation_matrix(n, m, k);
                    let det: f64 = bareiss_det(&mat).abs().to_string().parse().unwrap();
                    let res = resultant_abs(n, m, k);
                    let tol = 1e-6 * det.max(1.0);
                    assert!((det - res).abs() <= tol, "({n},{m},{k}) det={det} res={res}");
                }
            }
        }
    }

    #[test]
    fn order_equals_det() {
        for n in 2..=14u32 {
            for m in 0..n {
                for k in 0..n {
                    let inv = abelian_invariants(n, m, k);
                    let det = bareiss_det(&relation_matrix(n, m, k)).abs();
                    match inv.order() {
                        Some(o) => assert_eq!(BigInt::from(o), det, "({n},{m},{k})"),
                        None => assert!(det.is_zero()),
                    }
                    for w in inv.torsion.windows(2) {
                        assert!((&w[1] % &w[0]).is_zero());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn invariant_under_iso_moves(n in 3u32..30, m in 0u32..30, k in 0u32..30, c in 1u32..30) {
            let (m, k) = (m % n, k % n);
            let p = crate::params::derive(n, m, k).unwrap();
            let base = abelian_invariants(n, m, k);
            let s = crate::params::swap_iso(&p);
            prop_assert_eq!(&abelian_invariants(n, s.m, s.k), &base);
            if let Ok(r) = crate::params::rescale_iso(&p, c) {
                prop_assert_eq!(&abelian_invariants(n, r.m, r.k), &base);
            }
        }

        #[test]
        fn snf_chain_and_det(rows in proptest::collection::vec(proptest::collection::vec(-9i64..10, 4), 4)) {
            let m = IntMatrix::from_rows(&rows);
            let inv = smith_normal_form(&m);
            for w in inv.torsion.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            let det = bareiss_det(&m).abs();
            match inv.order() {
                Some(o) => prop_assert_eq!(BigInt::from(o), det),
                None => prop_assert!(det.is_zero()),
            }
        }
    }
}
