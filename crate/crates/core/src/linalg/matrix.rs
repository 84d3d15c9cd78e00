use std::fmt;

use super::field::{Field, PrimeField, Rational, RationalField};
use crate::error::Result;

/// Dense row-major matrix. Arithmetic goes through a [`Field`] context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Rational>;
pub type FpMatrix = Matrix<u64>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Clone>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Block diagonal `[self 0; 0 other]`.
    pub fn block_diag(&self, other: &Self, zero: T) -> Self {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        Matrix::from_fn(rows, cols, |r, c| {
            if r < self.rows && c < self.cols {
                self.get(r, c).clone()
            } else if r >= self.rows && c >= self.cols {
                other.get(r - self.rows, c - self.cols).clone()
            } else {
                zero.clone()
            }
        })
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn zeros<F: Field<Elem = T>>(field: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = T>>(field: &F, n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { field.one() } else { field.zero() })
    }

    pub fn is_zero<F: Field<Elem = T>>(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn mul<F: Field<Elem = T>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if field.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if field.is_zero(b) {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = field.add(&out.data[idx], &field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add<F: Field<Elem = T>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn sub<F: Field<Elem = T>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.sub(a, b))
                .collect(),
        }
    }

    pub fn scale<F: Field<Elem = T>>(&self, field: &F, s: &T) -> Self {
        self.map(|x| field.mul(x, s))
    }

    /// Adds `s * other` into `self` in place.
    pub fn add_scaled<F: Field<Elem = T>>(&mut self, field: &F, s: &T, other: &Self) {
        assert_eq!(self.shape(), other.shape());
        if field.is_zero(s) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !field.is_zero(b) {
                *a = field.add(a, &field.mul(s, b));
            }
        }
    }

    pub fn mul_vec<F: Field<Elem = T>>(&self, field: &F, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !field.is_zero(a) && !field.is_zero(b))
                    .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
            })
            .collect()
    }
}

/// In-place Gaussian elimination. With `reduced` the result is the reduced row
/// echelon form; otherwise only entries below pivots are cleared. Returns the
/// pivot columns.
pub fn row_reduce<F: Field>(field: &F, m: &mut Matrix<F::Elem>, reduced: bool) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        let Some(found) = (pr..rows).find(|&r| !field.is_zero(m.get(r, col))) else {
            continue;
        };
        m.swap_rows(pr, found);
        let inv = field.inv(m.get(pr, col));
        let mut support = Vec::new();
        for c in col..cols {
            let v = m.get(pr, c);
            if !field.is_zero(v) {
                let scaled = field.mul(v, &inv);
                m.set(pr, c, scaled);
                support.push(c);
            }
        }
        let start = if reduced { 0 } else { pr + 1 };
        for r in start..rows {
            if r == pr {
                continue;
            }
            let factor = m.get(r, col).clone();
            if field.is_zero(&factor) {
                continue;
            }
            for &c in &support {
                let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(pr, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        pr += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // Eliminate along the shorter side.
    let mut work = if m.rows() > m.cols() { m.transpose() } else { m.clone() };
    row_reduce(field, &mut work, false).len()
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = m.cols();
    let mut work = m.clone();
    let pivots = row_reduce(field, &mut work, true);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(cols - pivots.len());
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &p) in pivots.iter().enumerate() {
            let x = work.get(row, free);
            if !field.is_zero(x) {
                v[p] = field.neg(x);
            }
        }
        basis.push(v);
    }
    basis
}

/// Entrywise image of a rational matrix in F_p.
pub fn reduce_mod_p(m: &QMatrix, p: u64) -> Result<FpMatrix> {
    let field = PrimeField::any_size(p)?;
    reduce_in(m, &field)
}

/// Entrywise image of a rational matrix in the given prime field.
pub fn reduce_in(m: &QMatrix, field: &PrimeField) -> Result<FpMatrix> {
    m.try_map(|q| field.from_rational(q))
}

impl QMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let f = RationalField;
        Matrix::from_fn(r, c, |i, j| f.from_i64(rows[i][j]))
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(super::format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::DEFAULT_PRIME;
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64_rows(rows)
    }

    #[test]
    fn rank_examples() {
        let f = RationalField;
        assert_eq!(rank(&f, &Matrix::identity(&f, 2)), 2);
        assert_eq!(rank(&f, &QMatrix::zeros(&f, 0, 3)), 0);
        assert_eq!(rank(&f, &QMatrix::zeros(&f, 3, 0)), 0);
        assert_eq!(rank(&f, &q(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn nullspace_examples() {
        let f = RationalField;
        let ns = nullspace(&f, &q(&[&[1, 1]]));
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![f.from_i64(-1), f.from_i64(1)]);
        assert!(nullspace(&f, &Matrix::identity(&f, 2)).is_empty());
        assert_eq!(nullspace(&f, &QMatrix::zeros(&f, 2, 2)).len(), 2);
    }

    #[test]
    fn reduce_mod_p_examples() {
        let f = RationalField;
        let half = QMatrix::from_vec(1, 1, vec![Rational::new(1.into(), 2.into())]);
        assert_eq!(reduce_mod_p(&half, 5).unwrap(), FpMatrix::from_vec(1, 1, vec![3]));
        let third = QMatrix::from_vec(1, 1, vec![Rational::new(1.into(), 3.into())]);
        assert!(matches!(reduce_mod_p(&third, 3), Err(Error::BadPrime(3, _))));
        let zero = QMatrix::zeros(&f, 2, 3);
        assert_eq!(reduce_mod_p(&zero, 7).unwrap(), FpMatrix::filled(2, 3, 0));
        assert!(reduce_mod_p(&zero, 8).is_err());
    }

    #[test]
    fn reduce_in_large_field_rejects_divisible_denominator() {
        let big = PrimeField::new(DEFAULT_PRIME).unwrap();
        let m = QMatrix::from_vec(
            1,
            1,
            vec![Rational::new(1.into(), (DEFAULT_PRIME as i64).into())],
        );
        assert!(reduce_in(&m, &big).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                let f = RationalField;
                QMatrix::from_vec(r, c, v.into_iter().map(|x| f.from_i64(x)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in small_matrix()) {
            let f = RationalField;
            prop_assert_eq!(rank(&f, &m), rank(&f, &m.transpose()));
        }

        #[test]
        fn nullspace_vectors_are_kernel_vectors(m in small_matrix()) {
            let f = RationalField;
            let ns = nullspace(&f, &m);
            prop_assert_eq!(ns.len(), m.cols() - rank(&f, &m));
            for v in &ns {
                prop_assert!(m.mul_vec(&f, v).iter().all(|x| f.is_zero(x)));
            }
            if !ns.is_empty() {
                let stacked = QMatrix::from_fn(ns.len(), m.cols(), |r, c| ns[r][c].clone());
                prop_assert_eq!(rank(&f, &stacked), ns.len());
            }
        }

        #[test]
        fn modular_rank_never_exceeds_rational_rank(m in small_matrix()) {
            let f = RationalField;
            let fp = PrimeField::new(DEFAULT_PRIME).unwrap();
            let reduced = reduce_in(&m, &fp).unwrap();
            prop_assert!(rank(&fp, &reduced) <= rank(&f, &m));
        }
    }
}
