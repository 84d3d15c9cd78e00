use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{format_rational, Rational};
use super::matrix::QMatrix;

/// Univariate polynomial over the rationals, coefficients in ascending degree.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    /// `a x + b`.
    pub fn linear(a: &Rational, b: &Rational) -> Self {
        Poly::new(vec![b.clone(), a.clone()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            // Keep remainders primitive-ish to slow coefficient growth.
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return Poly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Largest `k` with `(x - root)^k` dividing `self`, and the cofactor.
    pub fn strip_root(&self, root: &Rational) -> (usize, Poly) {
        let factor = Poly::linear(&Rational::one(), &-root);
        let mut k = 0;
        let mut cur = self.clone();
        if cur.is_zero() {
            return (0, cur);
        }
        loop {
            let (q, r) = cur.div_rem(&factor);
            if !r.is_zero() {
                return (k, cur);
            }
            k += 1;
            cur = q;
        }
    }

    /// Integer coefficients of a primitive scalar multiple, ascending.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coeff = format_rational(&mag);
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coeff}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coeff}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Matrix with polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// The linear matrix `x * lead + constant`.
    pub fn linear(lead: &QMatrix, constant: &QMatrix) -> Self {
        assert_eq!(lead.shape(), constant.shape());
        let entries = lead
            .entries()
            .iter()
            .zip(constant.entries())
            .map(|(a, b)| Poly::linear(a, b))
            .collect();
        PolyMatrix::new(lead.rows(), lead.cols(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows)
            .map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    /// Monic invariant factors `d_1 | d_2 | ... | d_r`, `r` the normal rank.
    pub fn smith_normal_form(&self) -> Vec<Poly> {
        smith_invariant_factors(self.to_rows(), self.rows, self.cols)
    }
}

/// Euclidean Smith reduction over Q[x] with unimodular row and column moves.
/// Rows are rescaled by constants after every update to keep coefficients in
/// check.
fn smith_invariant_factors(mut a: Vec<Vec<Poly>>, rows: usize, cols: usize) -> Vec<Poly> {
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_degree_entry(&a, t, rows, cols) else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut clean = true;
            // Clear column t below the pivot.
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]);
                let pivot_row = a[t].clone();
                for j in t..cols {
                    if !pivot_row[j].is_zero() {
                        a[i][j] = a[i][j].sub(&q.mul(&pivot_row[j]));
                    }
                }
                normalize_row(&mut a[i]);
                if !r.is_zero() {
                    clean = false;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]);
                for row in a.iter_mut().take(rows).skip(t) {
                    if !row[t].is_zero() {
                        let v = row[j].sub(&q.mul(&row[t]));
                        row[j] = v;
                    }
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder of smaller degree appeared; move it to the pivot.
                let (mut best, mut best_deg) = ((t, t), a[t][t].degree().unwrap());
                for i in t + 1..rows {
                    if let Some(d) = a[i][t].degree() {
                        if d < best_deg {
                            best = (i, t);
                            best_deg = d;
                        }
                    }
                }
                for j in t + 1..cols {
                    if let Some(d) = a[t][j].degree() {
                        if d < best_deg {
                            best = (t, j);
                            best_deg = d;
                        }
                    }
                }
                let (bi, bj) = best;
                a.swap(t, bi);
                if bj != t {
                    for row in a.iter_mut() {
                        row.swap(t, bj);
                    }
                }
                continue;
            }
            // Pivot must divide every remaining entry.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero() && !a[t][t].divides(&a[i][j]));
            match offender {
                Some((i, _)) => {
                    let src = a[i].clone();
                    for j in t..cols {
                        a[t][j] = a[t][j].add(&src[j]);
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].monic());
        t += 1;
    }
    factors
}

fn min_degree_entry(a: &[Vec<Poly>], t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), usize)> = None;
    for (i, row) in a.iter().enumerate().take(rows).skip(t) {
        for (j, p) in row.iter().enumerate().take(cols).skip(t) {
            if let Some(d) = p.degree() {
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some(((i, j), d));
                }
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Divides a row by the leading coefficient of its first nonzero entry.
fn normalize_row(row: &mut [Poly]) {
    let Some(lc) = row.iter().find_map(|p| p.leading().cloned()) else {
        return;
    };
    if lc.is_one() {
        return;
    }
    let inv = lc.recip();
    for p in row.iter_mut() {
        *p = p.scale(&inv);
    }
}
