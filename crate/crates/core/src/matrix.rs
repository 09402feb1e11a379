//! Dense row-major matrices and Gaussian elimination over any [`Field`].

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone> Matrix<T> {
    /// Builds a matrix from equally long rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<U, G: Fn(&T) -> U>(&self, g: G) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Mutable view of row `target` alongside a shared view of row `source`.
    fn row_pair(&mut self, target: usize, source: usize) -> (&mut [T], &[T]) {
        assert_ne!(target, source);
        let c = self.cols;
        if target < source {
            let (head, tail) = self.data.split_at_mut(source * c);
            (&mut head[target * c..(target + 1) * c], &tail[..c])
        } else {
            let (head, tail) = self.data.split_at_mut(target * c);
            (&mut tail[..c], &head[source * c..(source + 1) * c])
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn choose_pivot<F: Field>(m: &Matrix<F>, col: usize, from: usize) -> Option<usize> {
    if F::EXACT {
        (from..m.rows).find(|&i| !m.get(i, col).is_negligible())
    } else {
        let mut best: Option<(usize, f64)> = None;
        for i in from..m.rows {
            let v = m.get(i, col);
            if v.is_negligible() {
                continue;
            }
            let mag = v.magnitude();
            if best.is_none_or(|(_, b)| mag > b) {
                best = Some((i, mag));
            }
        }
        best.map(|(i, _)| i)
    }
}

fn eliminate_row<F: Field>(m: &mut Matrix<F>, target: usize, pivot_row: usize, col: usize) {
    let factor = m.get(target, col).clone();
    if factor.is_negligible() {
        return;
    }
    let (t, p) = m.row_pair(target, pivot_row);
    for k in col..t.len() {
        if p[k].is_zero() {
            continue;
        }
        t[k] = t[k].clone() - factor.clone() * p[k].clone();
    }
    t[col] = F::zero();
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub fn rref<F: Field>(mut m: Matrix<F>) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = choose_pivot(&m, col, r) else { continue };
        m.swap_rows(p, r);
        let inv = m.get(r, col).inverse().expect("pivot is invertible");
        for k in col..m.cols {
            let v = m.get(r, k).clone() * inv.clone();
            m.set(r, k, v);
        }
        for i in 0..m.rows {
            if i != r {
                eliminate_row(&mut m, i, r, col);
            }
        }
        pivots.push(col);
        r += 1;
    }
    Echelon { matrix: m, pivots }
}

/// Rank by forward elimination only.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut m = m.clone();
    // Eliminating along the shorter side keeps the work proportional to rank.
    if m.cols > m.rows {
        m = m.transpose();
    }
    let mut r = 0;
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = choose_pivot(&m, col, r) else { continue };
        m.swap_rows(p, r);
        let inv = m.get(r, col).inverse().expect("pivot is invertible");
        for k in col..m.cols {
            let v = m.get(r, k).clone() * inv.clone();
            m.set(r, k, v);
        }
        for i in r + 1..m.rows {
            eliminate_row(&mut m, i, r, col);
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per free column,
/// with the free coordinate set to one.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let cols = m.cols;
    let ech = rref(m.clone());
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut x = vec![F::zero(); cols];
        x[free] = F::one();
        for (row, &p) in ech.pivots.iter().enumerate() {
            let v = ech.matrix.get(row, free);
            if !v.is_zero() {
                x[p] = -v.clone();
            }
        }
        basis.push(x);
    }
    basis
}

/// `M x` for a column vector `x`.
pub fn apply<F: Field>(m: &Matrix<F>, x: &[F]) -> Vec<F> {
    assert_eq!(m.cols, x.len());
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(x)
                .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(rank(&m), 1);
        let id = Matrix::from_rows(vec![vec![1.0f64, 0.0], vec![0.0, 1.0]]);
        assert_eq!(rank(&id), 2);
        let z: Matrix<Fp> = Matrix::zeros(3, 4);
        assert_eq!(rank(&z), 0);
        let empty: Matrix<Fp> = Matrix::zeros(4, 0);
        assert_eq!(rank(&empty), 0);
        assert!(kernel_basis(&empty).is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), q(3), q(4)],
            vec![q(2), q(4), q(6), q(8)],
            vec![q(0), q(1), q(1), q(0)],
        ]);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(apply(&m, v).iter().all(Zero::is_zero));
        }
    }

    proptest! {
        // Rank over GF(p) of a small integer matrix agrees with rank over Q
        // whenever entries are tiny (no determinant can be divisible by p).
        #[test]
        fn fp_rank_matches_rational(entries in proptest::collection::vec(-3i64..=3, 20)) {
            let rows: Vec<Vec<i64>> = entries.chunks(5).map(<[i64]>::to_vec).collect();
            let mq = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect());
            let mp = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Fp::from_i64(v)).collect()).collect());
            let r = rank(&mq);
            prop_assert_eq!(r, rank(&mp));
            prop_assert_eq!(kernel_basis(&mp).len(), 5 - r);
            prop_assert_eq!(rref(mq).rank(), r);
        }
    }
}
