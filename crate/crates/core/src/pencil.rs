//! Matrix pencils `xE + H` read as Kronecker representations: columns carry
//! the space at vertex 1, rows the space at vertex 2, `E` is the first arrow
//! and `H` the second.

use serde::{Deserialize, Serialize};

use crate::error::{parse_json, Error, Result};
use crate::invariants::{DimensionVector, KroneckerInvariants, ProjectivePoint};
use crate::linalg::{format_rational, parse_rational, Field, QMatrix, Rational, RationalField};

/// An indecomposable representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Indecomposable {
    /// `Q_a`, dimension vector `(a-1, a)`.
    Preprojective(usize),
    /// `R_{p,b}`, dimension vector `(b, b)`.
    Regular(ProjectivePoint, usize),
    /// `J_c`, dimension vector `(c, c-1)`.
    Preinjective(usize),
}

impl Indecomposable {
    pub fn size(&self) -> usize {
        match self {
            Indecomposable::Preprojective(s)
            | Indecomposable::Regular(_, s)
            | Indecomposable::Preinjective(s) => *s,
        }
    }

    pub fn dimension_vector(&self) -> DimensionVector {
        match *self {
            Indecomposable::Preprojective(a) => DimensionVector::new(a.saturating_sub(1), a),
            Indecomposable::Regular(_, b) => DimensionVector::new(b, b),
            Indecomposable::Preinjective(c) => DimensionVector::new(c, c.saturating_sub(1)),
        }
    }
}

/// Indecomposable summands in canonical order: preprojective, regular by
/// point, preinjective; sizes descending within each group.
pub fn summands(inv: &KroneckerInvariants) -> Vec<Indecomposable> {
    let mut out: Vec<Indecomposable> = inv
        .preprojective()
        .iter()
        .map(|&a| Indecomposable::Preprojective(a))
        .collect();
    for (p, sizes) in inv.regular() {
        out.extend(sizes.iter().map(|&b| Indecomposable::Regular(p.clone(), b)));
    }
    out.extend(inv.preinjective().iter().map(|&c| Indecomposable::Preinjective(c)));
    out
}

/// A pair of equal-shape rational matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pencil {
    e: QMatrix,
    h: QMatrix,
}

impl Pencil {
    pub fn new(e: QMatrix, h: QMatrix) -> Result<Self> {
        if e.shape() != h.shape() {
            return Err(Error::ShapeMismatch(format!(
                "E is {}x{} but H is {}x{}",
                e.rows(),
                e.cols(),
                h.rows(),
                h.cols()
            )));
        }
        Ok(Pencil { e, h })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        let z = QMatrix::zeros(&RationalField, rows, cols);
        Pencil { e: z.clone(), h: z }
    }

    pub fn e(&self) -> &QMatrix {
        &self.e
    }

    pub fn h(&self) -> &QMatrix {
        &self.h
    }

    pub fn rows(&self) -> usize {
        self.e.rows()
    }

    pub fn cols(&self) -> usize {
        self.e.cols()
    }

    /// `(cols, rows)`: vertex 1 is the column space.
    pub fn dimension_vector(&self) -> DimensionVector {
        DimensionVector::new(self.cols(), self.rows())
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Pencil) -> Pencil {
        let zero = RationalField.zero();
        Pencil {
            e: self.e.block_diag(&other.e, zero.clone()),
            h: self.h.block_diag(&other.h, zero),
        }
    }

    /// The dual representation: both matrices transposed, vertices swapped.
    pub fn transpose_dual(&self) -> Pencil {
        Pencil {
            e: self.e.transpose(),
            h: self.h.transpose(),
        }
    }

    /// Strictly equivalent pencil `(P E Q, P H Q)`.
    pub fn transform(&self, left: &QMatrix, right: &QMatrix) -> Result<Pencil> {
        if left.cols() != self.rows() || right.rows() != self.cols() {
            return Err(Error::ShapeMismatch(format!(
                "cannot transform a {}x{} pencil by {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                left.rows(),
                left.cols(),
                right.rows(),
                right.cols()
            )));
        }
        let f = RationalField;
        Pencil::new(
            left.mul(&f, &self.e).mul(&f, right),
            left.mul(&f, &self.h).mul(&f, right),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PencilJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: PencilJson = parse_json(text)?;
        parsed.into_pencil()
    }
}

fn nilpotent_jordan(n: usize) -> QMatrix {
    let f = RationalField;
    QMatrix::from_fn(n, n, |r, c| if c == r + 1 { f.one() } else { f.zero() })
}

/// Canonical matrices of one indecomposable.
pub fn indecomposable_pencil(kind: &Indecomposable) -> Result<Pencil> {
    let f = RationalField;
    let size = kind.size();
    if size < 1 {
        return Err(Error::InvalidPart(size));
    }
    let one_if = |b: bool| if b { f.one() } else { f.zero() };
    let pencil = match kind {
        Indecomposable::Preprojective(a) => {
            let (rows, cols) = (*a, a - 1);
            Pencil {
                e: QMatrix::from_fn(rows, cols, |r, c| one_if(r == c)),
                h: QMatrix::from_fn(rows, cols, |r, c| one_if(r == c + 1)),
            }
        }
        Indecomposable::Preinjective(c) => {
            let (rows, cols) = (c - 1, *c);
            Pencil {
                e: QMatrix::from_fn(rows, cols, |r, k| one_if(r == k)),
                h: QMatrix::from_fn(rows, cols, |r, k| one_if(k == r + 1)),
            }
        }
        Indecomposable::Regular(ProjectivePoint::Infinity, b) => Pencil {
            e: nilpotent_jordan(*b),
            h: QMatrix::identity(&f, *b),
        },
        Indecomposable::Regular(ProjectivePoint::Finite(p), b) => {
            let shifted = QMatrix::identity(&f, *b)
                .scale(&f, p)
                .add(&f, &nilpotent_jordan(*b));
            Pencil {
                e: QMatrix::identity(&f, *b),
                h: shifted,
            }
        }
    };
    Ok(pencil)
}

/// Block-diagonal pencil of the canonical summands, in canonical order.
pub fn canonical_pencil(inv: &KroneckerInvariants) -> Pencil {
    summands(inv)
        .iter()
        .map(|s| indecomposable_pencil(s).expect("normalized parts are positive"))
        .fold(Pencil::zero(0, 0), |acc, p| acc.direct_sum(&p))
}

/// Wire form: `{"rows":m,"cols":n,"E":[["0","1/2"],...],"H":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilJson {
    pub rows: usize,
    pub cols: usize,
    #[serde(rename = "E")]
    pub e: Vec<Vec<Scalar>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Scalar>>,
}

/// A rational given as a string, or an integer literal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Int(i64),
}

impl PencilJson {
    pub fn into_pencil(self) -> Result<Pencil> {
        let e = matrix_from_json("E", self.rows, self.cols, &self.e)?;
        let h = matrix_from_json("H", self.rows, self.cols, &self.h)?;
        Pencil::new(e, h)
    }
}

fn matrix_from_json(name: &str, rows: usize, cols: usize, data: &[Vec<Scalar>]) -> Result<QMatrix> {
    if data.len() != rows {
        return Err(Error::Parse(format!(
            "field {name}: expected {rows} rows, found {}",
            data.len()
        )));
    }
    let mut entries: Vec<Rational> = Vec::with_capacity(rows * cols);
    for (r, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "field {name}[{r}]: expected {cols} entries, found {}",
                row.len()
            )));
        }
        for (c, v) in row.iter().enumerate() {
            let q = match v {
                Scalar::Text(s) => parse_rational(s)
                    .map_err(|e| {
                        let detail = match e {
                            Error::Parse(m) => m,
                            other => other.to_string(),
                        };
                        Error::Parse(format!("field {name}[{r}][{c}]: {detail}"))
                    })?,
                Scalar::Int(i) => Rational::from_integer((*i).into()),
            };
            entries.push(q);
        }
    }
    Ok(QMatrix::from_vec(rows, cols, entries))
}

fn matrix_to_json(m: &QMatrix) -> Vec<Vec<Scalar>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|q| Scalar::Text(format_rational(q))).collect())
        .collect()
}

impl From<&Pencil> for PencilJson {
    fn from(p: &Pencil) -> Self {
        PencilJson {
            rows: p.rows(),
            cols: p.cols(),
            e: matrix_to_json(&p.e),
            h: matrix_to_json(&p.h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64_rows(rows)
    }

    #[test]
    fn preprojective_two() {
        let p = indecomposable_pencil(&Indecomposable::Preprojective(2)).unwrap();
        assert_eq!(p.e(), &q(&[&[1], &[0]]));
        assert_eq!(p.h(), &q(&[&[0], &[1]]));
        let q1 = indecomposable_pencil(&Indecomposable::Preprojective(1)).unwrap();
        assert_eq!((q1.rows(), q1.cols()), (1, 0));
    }

    #[test]
    fn regular_at_zero() {
        let p = indecomposable_pencil(&Indecomposable::Regular(ProjectivePoint::zero(), 2)).unwrap();
        assert_eq!(p.e(), &q(&[&[1, 0], &[0, 1]]));
        assert_eq!(p.h(), &q(&[&[0, 1], &[0, 0]]));
        let inf = indecomposable_pencil(&Indecomposable::Regular(ProjectivePoint::Infinity, 2)).unwrap();
        assert_eq!(inf.e(), &q(&[&[0, 1], &[0, 0]]));
        assert_eq!(inf.h(), &q(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn preinjective_two() {
        let p = indecomposable_pencil(&Indecomposable::Preinjective(2)).unwrap();
        assert_eq!(p.e(), &q(&[&[1, 0]]));
        assert_eq!(p.h(), &q(&[&[0, 1]]));
        let j1 = indecomposable_pencil(&Indecomposable::Preinjective(1)).unwrap();
        assert_eq!((j1.rows(), j1.cols()), (0, 1));
    }

    #[test]
    fn size_zero_rejected() {
        assert_eq!(
            indecomposable_pencil(&Indecomposable::Preinjective(0)),
            Err(Error::InvalidPart(0))
        );
    }

    #[test]
    fn canonical_examples() {
        let inv = KroneckerInvariants::new(vec![2], vec![], vec![1]).unwrap();
        let p = canonical_pencil(&inv);
        assert_eq!(p.e(), &q(&[&[1, 0], &[0, 0]]));
        assert_eq!(p.h(), &q(&[&[0, 0], &[1, 0]]));
        assert_eq!(p.dimension_vector(), inv.dimension_vector());

        let empty = canonical_pencil(&KroneckerInvariants::empty());
        assert_eq!((empty.rows(), empty.cols()), (0, 0));

        let two_points = KroneckerInvariants::regular_only(vec![
            (ProjectivePoint::zero(), vec![1]),
            (ProjectivePoint::finite(1, 1), vec![1]),
        ])
        .unwrap();
        let p = canonical_pencil(&two_points);
        assert_eq!(p.e(), &q(&[&[1, 0], &[0, 1]]));
        assert_eq!(p.h(), &q(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn direct_sum_examples() {
        let q1 = indecomposable_pencil(&Indecomposable::Preprojective(1)).unwrap();
        let j1 = indecomposable_pencil(&Indecomposable::Preinjective(1)).unwrap();
        assert_eq!(q1.direct_sum(&j1), Pencil::zero(1, 1));
        assert_eq!(q1.direct_sum(&Pencil::zero(0, 0)), q1);
        let r = indecomposable_pencil(&Indecomposable::Regular(ProjectivePoint::zero(), 1)).unwrap();
        let rr = r.direct_sum(&r);
        assert_eq!(rr.e(), &q(&[&[1, 0], &[0, 1]]));
        assert_eq!(rr.h(), &q(&[&[0, 0], &[0, 0]]));
    }

    #[test]
    fn transpose_dual_swaps_families() {
        let q2 = indecomposable_pencil(&Indecomposable::Preprojective(2)).unwrap();
        let j2 = indecomposable_pencil(&Indecomposable::Preinjective(2)).unwrap();
        assert_eq!(q2.transpose_dual(), j2);
        assert_eq!(Pencil::zero(0, 0).transpose_dual(), Pencil::zero(0, 0));
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let inv = KroneckerInvariants::new(vec![2], vec![(ProjectivePoint::finite(-1, 2), vec![2])], vec![1])
            .unwrap();
        let p = canonical_pencil(&inv);
        let text = p.to_json();
        assert_eq!(Pencil::from_json(&text).unwrap(), p);
        assert!(text.contains("\"-1/2\""));

        let zero = r#"{"rows":1,"cols":2,"E":[["0",0]],"H":[["0","0"]]}"#;
        assert_eq!(Pencil::from_json(zero).unwrap(), Pencil::zero(1, 2));

        let bad = r#"{"rows":1,"cols":2,"E":[["0"]],"H":[["0","0"]]}"#;
        let err = Pencil::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("E[0]"), "{err}");
        let bad = r#"{"rows":1,"cols":1,"E":[["1/0"]],"H":[["0"]]}"#;
        assert!(Pencil::from_json(bad).unwrap_err().to_string().contains("E[0][0]"));
    }
}
