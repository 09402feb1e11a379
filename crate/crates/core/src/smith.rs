//! Smith normal form over the integers.

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::RingInteger;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("integer overflow during Smith normal form reduction")]
pub struct Overflow;

/// Diagonal of the Smith normal form: the nonzero invariant factors
/// `d_1 | d_2 | ... | d_r`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub rows: usize,
    pub cols: usize,
    pub factors: Vec<T>,
}

impl<T: RingInteger> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<T> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }

    pub fn diagonal_matrix(&self) -> Matrix<T> {
        let mut d = Matrix::zeros(self.rows, self.cols);
        for (i, f) in self.factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }

    pub fn has_divisibility_chain(&self) -> bool {
        self.factors.iter().all(|f| f.is_positive())
            && self.factors.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }

    pub fn to_bigint(&self) -> SmithForm<BigInt> {
        SmithForm {
            rows: self.rows,
            cols: self.cols,
            factors: self.factors.iter().map(RingInteger::to_bigint).collect(),
        }
    }
}

fn sub_mul<T: RingInteger>(a: &T, q: &T, b: &T) -> Result<T, Overflow> {
    let p = q.checked_mul(b).ok_or(Overflow)?;
    a.checked_sub(&p).ok_or(Overflow)
}

struct Work<T> {
    a: Matrix<T>,
}

impl<T: RingInteger> Work<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        self.a.get(i, j)
    }

    /// row_i -= q * row_t, from column `from` on.
    fn row_sub(&mut self, i: usize, t: usize, q: &T, from: usize) -> Result<(), Overflow> {
        for k in from..self.a.cols() {
            let b = self.a.get(t, k);
            if b.is_zero() {
                continue;
            }
            let v = sub_mul(self.a.get(i, k), q, b)?;
            self.a.set(i, k, v);
        }
        Ok(())
    }

    /// col_j -= q * col_t, from row `from` on.
    fn col_sub(&mut self, j: usize, t: usize, q: &T, from: usize) -> Result<(), Overflow> {
        for k in from..self.a.rows() {
            let b = self.a.get(k, t);
            if b.is_zero() {
                continue;
            }
            let v = sub_mul(self.a.get(k, j), q, b)?;
            self.a.set(k, j, v);
        }
        Ok(())
    }

    fn row_add(&mut self, t: usize, i: usize, from: usize) -> Result<(), Overflow> {
        for k in from..self.a.cols() {
            let v = self.a.get(t, k).checked_add(self.a.get(i, k)).ok_or(Overflow)?;
            self.a.set(t, k, v);
        }
        Ok(())
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let m = v.abs();
                if m.is_one() {
                    return Some((i, j));
                }
                if best.as_ref().is_none_or(|(_, _, b)| m < *b) {
                    best = Some((i, j, m));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero entry in row `t` or column `t` of the active block.
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.at(t, t).abs());
        let mut consider = |i: usize, j: usize, v: &T| {
            if !v.is_zero() && (best.2.is_zero() || v.abs() < best.2) {
                best = (i, j, v.abs());
            }
        };
        for i in t + 1..self.a.rows() {
            consider(i, t, self.at(i, t));
        }
        for j in t + 1..self.a.cols() {
            consider(t, j, self.at(t, j));
        }
        (best.0, best.1)
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = self.at(t, t);
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.at(i, j).is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form by repeated division with the smallest-magnitude pivot.
///
/// Fixed-width integer types report [`Overflow`]; `BigInt` never does.
pub fn smith_normal_form<T: RingInteger>(m: &Matrix<T>) -> Result<SmithForm<T>, Overflow> {
    let (rows, cols) = m.shape();
    let mut w = Work { a: m.clone() };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.smallest_in_block(t) else { break };
        w.a.swap_rows(t, pi);
        w.a.swap_cols(t, pj);
        loop {
            let pivot = w.at(t, t).clone();
            let mut clear = true;
            for i in t + 1..rows {
                if w.at(i, t).is_zero() {
                    continue;
                }
                let q = w.at(i, t).div_floor(&pivot);
                w.row_sub(i, t, &q, t)?;
                clear &= w.at(i, t).is_zero();
            }
            for j in t + 1..cols {
                if w.at(t, j).is_zero() {
                    continue;
                }
                let q = w.at(t, j).div_floor(&pivot);
                w.col_sub(j, t, &q, t)?;
                clear &= w.at(t, j).is_zero();
            }
            if !clear {
                let (i, j) = w.smallest_in_cross(t);
                w.a.swap_rows(t, i);
                w.a.swap_cols(t, j);
                continue;
            }
            match w.non_divisible(t) {
                Some(i) => w.row_add(t, i, t)?,
                None => break,
            }
        }
        t += 1;
    }
    let factors = (0..t).map(|i| w.at(i, i).abs()).collect();
    Ok(SmithForm { rows, cols, factors })
}

/// Smith normal form with `i64` arithmetic, redone in `BigInt` on overflow.
pub fn smith_normal_form_adaptive(m: &Matrix<i64>) -> SmithForm<BigInt> {
    match smith_normal_form(m) {
        Ok(s) => s.to_bigint(),
        Err(Overflow) => smith_normal_form(&m.map(|v| BigInt::from(*v)))
            .expect("BigInt arithmetic cannot overflow"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rank;
    use num_traits::{One, Zero};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn diag_two_three() {
        // gcd = 1 and the determinant 6 is preserved: factors (1, 6).
        let s = smith_normal_form(&mat(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(s.factors, vec![1, 6]);
    }

    #[test]
    fn identity_and_zero() {
        let s = smith_normal_form(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(s.factors, vec![1, 1, 1]);
        let z = smith_normal_form(&mat(&[&[0, 0], &[0, 0], &[0, 0]])).unwrap();
        assert_eq!(z.rank(), 0);
        let empty = smith_normal_form(&Matrix::<i64>::zeros(0, 3)).unwrap();
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn known_forms() {
        // d1 = gcd(2,4,6,8) = 2 and |det| = 8, so the factors are (2, 4).
        let s = smith_normal_form(&mat(&[&[2, 4], &[6, 8]])).unwrap();
        assert_eq!(s.factors, vec![2, 4]);
        let s = smith_normal_form(&mat(&[&[4, 0], &[0, 6]])).unwrap();
        assert_eq!(s.factors, vec![2, 12]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2 + 1;
        let m = mat(&[&[big, 3], &[big - 1, big]]);
        let s = smith_normal_form_adaptive(&m);
        assert!(s.has_divisibility_chain());
        assert_eq!(s.rank(), 2);
    }

    /// Determinantal divisors by brute-force minor enumeration.
    fn determinantal_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
        fn det(m: &[Vec<BigInt>]) -> BigInt {
            if m.is_empty() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for j in 0..m.len() {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 { acc += term } else { acc -= term }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let r = m.len();
        let c = m[0].len();
        let mut divisors = vec![BigInt::one()];
        for k in 1..=r.min(c) {
            let mut g = BigInt::zero();
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<BigInt>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
                    g = num_integer::Integer::gcd(&g, &det(&sub));
                }
            }
            if g.is_zero() {
                break;
            }
            divisors.push(g);
        }
        divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
    }

    proptest! {
        #[test]
        fn matches_determinantal_divisors(entries in proptest::collection::vec(-6i64..=6, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
            let m = Matrix::from_rows(rows.clone());
            let s = smith_normal_form_adaptive(&m);
            prop_assert!(s.has_divisibility_chain());
            prop_assert_eq!(s.factors.clone(), determinantal_factors(&rows));
            let q = m.map(|&v| BigRational::from_integer(BigInt::from(v)));
            prop_assert_eq!(s.rank(), rank(&q));
        }
    }
}
