//! Homomorphism spaces between Kronecker representations.
//!
//! A homomorphism `N -> M` is a pair `(phi1, phi2)` with
//! `E_M phi1 = phi2 E_N` and `H_M phi1 = phi2 H_N`, where `phi1` acts on
//! vertex 1 (columns) and `phi2` on vertex 2 (rows).
//!
//! [`hom_basis`] solves these equations exactly for arbitrary pencils.
//! [`structured_generic_hom`] describes the same space blockwise for
//! canonical pencils: blocks between summands of the same family have a
//! closed band form, blocks between different families are solved exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::{DimensionVector, KroneckerInvariants};
use crate::linalg::{nullspace, Field, Matrix, QMatrix, Rational, RationalField};
use crate::pencil::{indecomposable_pencil, summands, Indecomposable, Pencil};

/// One homomorphism `(phi1, phi2)` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub phi1: QMatrix,
    pub phi2: QMatrix,
}

/// Basis of `Hom(N, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBasis {
    pub source: DimensionVector,
    pub target: DimensionVector,
    pub basis: Vec<HomElement>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `sum_i coeffs[i] * basis[i]`, computed in `field`.
    pub fn specialize<F: Field>(
        &self,
        field: &F,
        coeffs: &[F::Elem],
    ) -> Result<(Matrix<F::Elem>, Matrix<F::Elem>)> {
        if coeffs.len() != self.basis.len() {
            return Err(Error::ArityMismatch {
                expected: self.basis.len(),
                got: coeffs.len(),
            });
        }
        let mut phi1 = Matrix::zeros(field, self.target.dim1, self.source.dim1);
        let mut phi2 = Matrix::zeros(field, self.target.dim2, self.source.dim2);
        for (t, el) in coeffs.iter().zip(&self.basis) {
            if field.is_zero(t) {
                continue;
            }
            phi1.add_scaled(field, t, &el.phi1.try_map(|q| field.from_rational(q))?);
            phi2.add_scaled(field, t, &el.phi2.try_map(|q| field.from_rational(q))?);
        }
        Ok((phi1, phi2))
    }
}

/// Exact basis of the solution space of the intertwining equations.
/// Basis vectors are scaled to integers with content 1.
pub fn hom_basis(source: &Pencil, target: &Pencil) -> HomBasis {
    let f = RationalField;
    let (n1, n2) = (source.cols(), source.rows());
    let (m1, m2) = (target.cols(), target.rows());
    let unknowns = m1 * n1 + m2 * n2;
    let phi1_var = |k: usize, j: usize| k * n1 + j;
    let phi2_var = |i: usize, l: usize| m1 * n1 + i * n2 + l;

    let mut system = QMatrix::zeros(&f, 2 * m2 * n1, unknowns);
    for (arrow, (xm, xn)) in [(target.e(), source.e()), (target.h(), source.h())]
        .into_iter()
        .enumerate()
    {
        for i in 0..m2 {
            for j in 0..n1 {
                let row = arrow * m2 * n1 + i * n1 + j;
                for k in 0..m1 {
                    let v = xm.get(i, k);
                    if !v.is_zero() {
                        let col = phi1_var(k, j);
                        let cur = system.get(row, col) + v;
                        system.set(row, col, cur);
                    }
                }
                for l in 0..n2 {
                    let v = xn.get(l, j);
                    if !v.is_zero() {
                        let col = phi2_var(i, l);
                        let cur = system.get(row, col) - v;
                        system.set(row, col, cur);
                    }
                }
            }
        }
    }

    let basis = nullspace(&f, &system)
        .into_iter()
        .map(|v| {
            let v = primitive_integer_vector(v);
            HomElement {
                phi1: QMatrix::from_fn(m1, n1, |k, j| v[phi1_var(k, j)].clone()),
                phi2: QMatrix::from_fn(m2, n2, |i, l| v[phi2_var(i, l)].clone()),
            }
        })
        .collect();
    HomBasis {
        source: source.dimension_vector(),
        target: target.dimension_vector(),
        basis,
    }
}

/// Scales a nonzero rational vector to coprime integers, first nonzero entry positive.
fn primitive_integer_vector(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        return v;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        content = -content;
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &content))
        .collect()
}

/// Checks both intertwining equations in `field`.
pub fn is_homomorphism<F: Field>(
    field: &F,
    source: &Pencil,
    target: &Pencil,
    phi1: &Matrix<F::Elem>,
    phi2: &Matrix<F::Elem>,
) -> Result<bool> {
    if phi1.shape() != (target.cols(), source.cols()) || phi2.shape() != (target.rows(), source.rows())
    {
        return Ok(false);
    }
    let lift = |m: &QMatrix| m.try_map(|q| field.from_rational(q));
    for (xm, xn) in [(target.e(), source.e()), (target.h(), source.h())] {
        let left = lift(xm)?.mul(field, phi1);
        let right = phi2.mul(field, &lift(xn)?);
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shape of one block of a generic homomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// Lower band, constant along diagonals, between preprojectives `Q_d -> Q_a`, `a >= d`.
    Form1,
    /// Upper band between preinjectives `J_f -> J_c`, `c <= f`.
    Form2,
    /// Upper-right Toeplitz band between regular blocks at the same point.
    Form3,
    /// Forced zero.
    Zero,
    /// Between different families; parametrized by an exact basis.
    Unstructured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockShape {
    pub form: Form,
    pub rows: usize,
    pub cols: usize,
    pub param_count: usize,
}

/// One cell of the block grid: rows indexed by summands of the target,
/// columns by summands of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCell {
    pub target: Indecomposable,
    pub source: Indecomposable,
    pub component1: BlockShape,
    pub component2: BlockShape,
    /// Identifier of the first parameter; the cell owns a consecutive range.
    pub first_param: usize,
    /// Exact basis for unstructured cells.
    pub basis: Option<HomBasis>,
}

impl HomCell {
    pub fn form(&self) -> Form {
        self.component2.form
    }

    pub fn param_count(&self) -> usize {
        self.component2.param_count
    }

    pub fn params(&self) -> std::ops::Range<usize> {
        self.first_param..self.first_param + self.param_count()
    }
}

/// Generic homomorphism between canonical representations, as a grid of
/// cells in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericHom {
    pub source: KroneckerInvariants,
    pub target: KroneckerInvariants,
    pub row_summands: Vec<Indecomposable>,
    pub col_summands: Vec<Indecomposable>,
    pub cells: Vec<HomCell>,
}

fn family_rank(s: &Indecomposable) -> u8 {
    match s {
        Indecomposable::Preprojective(_) => 0,
        Indecomposable::Regular(..) => 1,
        Indecomposable::Preinjective(_) => 2,
    }
}

fn shape(form: Form, dims: (usize, usize), params: usize) -> BlockShape {
    BlockShape {
        form,
        rows: dims.0,
        cols: dims.1,
        param_count: params,
    }
}

fn cell_shapes(target: &Indecomposable, source: &Indecomposable) -> (Form, usize) {
    use Indecomposable::*;
    match (target, source) {
        (Preprojective(a), Preprojective(d)) if a >= d => (Form::Form1, a - d + 1),
        (Preinjective(c), Preinjective(f)) if c <= f => (Form::Form2, f - c + 1),
        (Regular(p, b), Regular(q, e)) if p == q => (Form::Form3, (*b).min(*e)),
        _ if family_rank(target) > family_rank(source) => (Form::Unstructured, 0),
        _ => (Form::Zero, 0),
    }
}

/// Block description of the generic homomorphism from `source` to `target`.
pub fn structured_generic_hom(
    source: &KroneckerInvariants,
    target: &KroneckerInvariants,
) -> GenericHom {
    let rows = summands(target);
    let cols = summands(source);
    let mut cells = Vec::with_capacity(rows.len() * cols.len());
    let mut next_param = 0;
    for t in &rows {
        for s in &cols {
            let (tdim, sdim) = (t.dimension_vector(), s.dimension_vector());
            let dims1 = (tdim.dim1, sdim.dim1);
            let dims2 = (tdim.dim2, sdim.dim2);
            let (form, mut params) = cell_shapes(t, s);
            let basis = (form == Form::Unstructured).then(|| {
                let b = hom_basis(
                    &indecomposable_pencil(s).expect("positive size"),
                    &indecomposable_pencil(t).expect("positive size"),
                );
                params = b.dim();
                b
            });
            cells.push(HomCell {
                target: t.clone(),
                source: s.clone(),
                component1: shape(form, dims1, params),
                component2: shape(form, dims2, params),
                first_param: next_param,
                basis,
            });
            next_param += params;
        }
    }
    GenericHom {
        source: source.clone(),
        target: target.clone(),
        row_summands: rows,
        col_summands: cols,
        cells,
    }
}

impl GenericHom {
    /// Total number of parameters, unstructured cells included.
    pub fn total_params(&self) -> usize {
        self.cells.iter().map(HomCell::param_count).sum()
    }

    pub fn unstructured_cells(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.form() == Form::Unstructured)
            .count()
    }

    /// Number of free parameters when every cell has a closed form.
    pub fn param_count(&self) -> Result<usize> {
        match self.unstructured_cells() {
            0 => Ok(self.total_params()),
            n => Err(Error::UnstructuredCells(n)),
        }
    }

    pub fn cell(&self, row: usize, col: usize) -> &HomCell {
        &self.cells[row * self.col_summands.len() + col]
    }

    /// Substitutes `values[id]` for parameter `id` and assembles `(phi1, phi2)`
    /// between the canonical pencils of source and target.
    pub fn specialize<F: Field>(
        &self,
        field: &F,
        values: &[F::Elem],
    ) -> Result<(Matrix<F::Elem>, Matrix<F::Elem>)> {
        let expected = self.total_params();
        if values.len() != expected {
            return Err(Error::ArityMismatch {
                expected,
                got: values.len(),
            });
        }
        let tdim = self.target.dimension_vector();
        let sdim = self.source.dimension_vector();
        let mut phi1 = Matrix::zeros(field, tdim.dim1, sdim.dim1);
        let mut phi2 = Matrix::zeros(field, tdim.dim2, sdim.dim2);
        let offsets = |list: &[Indecomposable]| -> Vec<(usize, usize)> {
            let mut acc = (0, 0);
            list.iter()
                .map(|s| {
                    let here = acc;
                    let d = s.dimension_vector();
                    acc = (acc.0 + d.dim1, acc.1 + d.dim2);
                    here
                })
                .collect()
        };
        let row_off = offsets(&self.row_summands);
        let col_off = offsets(&self.col_summands);
        let ncols = self.col_summands.len();
        for (idx, cell) in self.cells.iter().enumerate() {
            let (ri, ci) = (idx / ncols, idx % ncols);
            let params = &values[cell.params()];
            let (b1, b2) = cell_blocks(field, cell, params)?;
            phi1.place(row_off[ri].0, col_off[ci].0, &b1);
            phi2.place(row_off[ri].1, col_off[ci].1, &b2);
        }
        Ok((phi1, phi2))
    }
}

fn cell_blocks<F: Field>(
    field: &F,
    cell: &HomCell,
    params: &[F::Elem],
) -> Result<(Matrix<F::Elem>, Matrix<F::Elem>)> {
    let band = |shape: &BlockShape| -> Matrix<F::Elem> {
        let (rows, cols) = (shape.rows, shape.cols);
        Matrix::from_fn(rows, cols, |r, c| {
            let slot = match shape.form {
                // x_{r-c+1} on the diagonals 0..=a-d below the main one.
                Form::Form1 => r.checked_sub(c).filter(|&k| k < shape.param_count),
                // x_{c-r+1} on the diagonals 0..=f-c above the main one.
                Form::Form2 => c.checked_sub(r).filter(|&k| k < shape.param_count),
                // x_1 in the top-right corner, x_g on the lowest nonzero diagonal.
                Form::Form3 => (r + cols)
                    .checked_sub(c + 1)
                    .filter(|&k| k < shape.param_count),
                Form::Zero | Form::Unstructured => None,
            };
            slot.map_or_else(|| field.zero(), |k| params[k].clone())
        })
    };
    match (&cell.basis, cell.form()) {
        (Some(basis), Form::Unstructured) => basis.specialize(field, params),
        _ => Ok((band(&cell.component1), band(&cell.component2))),
    }
}
