//! Exact dense matrices over ℚ with a fraction-free determinant.
//!
//! Resultant matrices grow quickly (dimension `(n+1)·C(n+ν, n)` for the
//! multivariate case), so the determinant uses Bareiss elimination over
//! BigInt after clearing row denominators: every intermediate division is
//! exact and entry growth stays polynomial in the input size.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> RationalMatrix {
        if let Some(first) = rows.first() {
            let w = first.len();
            assert!(rows.iter().all(|r| r.len() == w), "ragged rows");
        }
        RationalMatrix { rows }
    }

    pub fn identity(n: usize) -> RationalMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    pub fn diagonal(entries: &[BigRational]) -> RationalMatrix {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            entries[i].clone()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.ncols(), other.nrows(), "dimension mismatch");
        let n = self.nrows();
        let m = other.ncols();
        let rows = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut acc = BigRational::zero();
                        for k in 0..self.ncols() {
                            acc += &self.rows[i][k] * &other.rows[k][j];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    pub fn scale(&self, c: &BigRational) -> RationalMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        RationalMatrix { rows }
    }

    /// Exact determinant. The empty 0×0 matrix has determinant 1, the
    /// multiplicative identity, matching the convention for determinants
    /// of minors indexed by an empty set.
    pub fn det(&self) -> BigRational {
        assert_eq!(self.nrows(), self.ncols(), "determinant of non-square matrix");
        let n = self.nrows();
        if n == 0 {
            return BigRational::one();
        }
        // Clear denominators row by row so Bareiss runs over BigInt.
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for row in &self.rows {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            m.push(
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            scale *= lcm;
        }
        let d = int_det_bareiss(m);
        BigRational::new(d, scale)
    }

    /// Adjugate: `A · adj(A) = det(A) · I`. Cofactor expansion is fine
    /// here since only coordinate-sized matrices (dimension ≤ 4) are
    /// adjugated.
    pub fn adjugate(&self) -> RationalMatrix {
        assert_eq!(self.nrows(), self.ncols(), "adjugate of non-square matrix");
        let n = self.nrows();
        if n == 1 {
            return RationalMatrix::identity(1);
        }
        let mut adj = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigRational>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != i)
                            .map(|c| self.rows[r][c].clone())
                            .collect()
                    })
                    .collect();
                let d = RationalMatrix { rows: minor }.det();
                adj[i][j] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        RationalMatrix { rows: adj }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }
}

/// Bareiss fraction-free elimination; consumes the matrix.
fn int_det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn mat(entries: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            entries
                .iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn det_examples() {
        assert_eq!(RationalMatrix::identity(3).det(), rat(1, 1));
        assert_eq!(mat(&[&[2, 0], &[0, 1]]).det(), rat(2, 1));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).det(), rat(-1, 1));
        assert_eq!(RationalMatrix::from_rows(vec![]).det(), rat(1, 1));
        let m = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 6)],
        ]);
        assert_eq!(m.det(), rat(0, 1));
    }

    #[test]
    fn det_larger_integer_matrix() {
        // Vandermonde on 1, 2, 3, 4: det = Π_{i<j} (x_j - x_i) = 12.
        let m = mat(&[
            &[1, 1, 1, 1],
            &[1, 2, 4, 8],
            &[1, 3, 9, 27],
            &[1, 4, 16, 64],
        ]);
        assert_eq!(m.det(), rat(12, 1));
    }

    #[test]
    fn adjugate_examples() {
        let d = RationalMatrix::diagonal(&[rat(2, 1), rat(1, 1)]);
        assert_eq!(d.adjugate(), RationalMatrix::diagonal(&[rat(1, 1), rat(2, 1)]));
        let swap = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.adjugate(), mat(&[&[0, -1], &[-1, 0]]));
        assert_eq!(mat(&[&[5]]).adjugate(), RationalMatrix::identity(1));
    }

    proptest! {
        #[test]
        fn adjugate_product_is_det_times_identity(
            dim in 1usize..=4,
            raw in proptest::collection::vec(-9i64..=9, 16),
        ) {
            let m = RationalMatrix::from_rows(
                (0..dim).map(|i| (0..dim).map(|j| rat(raw[i * 4 + j], 1)).collect()).collect(),
            );
            let det = m.det();
            let prod = m.mul(&m.adjugate());
            let expect = RationalMatrix::diagonal(&vec![det; dim]);
            prop_assert_eq!(prod, expect);
        }

        #[test]
        fn det_is_multiplicative(
            raw_a in proptest::collection::vec(-9i64..=9, 9),
            raw_b in proptest::collection::vec(-9i64..=9, 9),
        ) {
            let a = RationalMatrix::from_rows(
                (0..3).map(|i| (0..3).map(|j| rat(raw_a[i * 3 + j], 1)).collect()).collect(),
            );
            let b = RationalMatrix::from_rows(
                (0..3).map(|i| (0..3).map(|j| rat(raw_b[i * 3 + j], 1)).collect()).collect(),
            );
            prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
        }
    }
}
