//! Kronecker invariants of an arbitrary rational pencil.
//!
//! Minimal indices come from kernel dimensions of block Toeplitz matrices,
//! elementary divisors from the Smith form of `lambda E + H` (finite points)
//! and of `mu H + E` (the point at infinity).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::invariants::{KroneckerInvariants, ProjectivePoint, RegularPart};
use crate::linalg::{is_prime, rank, Field, Poly, PolyMatrix, QMatrix, Rational, RationalField};
use crate::pencil::Pencil;

/// Block matrix with `H` on the block diagonal and `E` on the block
/// subdiagonal; its kernel holds the polynomial kernel vectors of
/// `lambda E + H` of degree at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToeplitzStack {
    pub k: usize,
    pub matrix: QMatrix,
}

impl ToeplitzStack {
    pub fn build(p: &Pencil, k: usize) -> Self {
        let f = RationalField;
        let (m, n) = (p.rows(), p.cols());
        let mut matrix = QMatrix::zeros(&f, (k + 2) * m, (k + 1) * n);
        for j in 0..=k {
            matrix.place(j * m, j * n, p.h());
            matrix.place((j + 1) * m, j * n, p.e());
        }
        ToeplitzStack { k, matrix }
    }

    pub fn nullity(&self) -> usize {
        self.matrix.cols() - rank(&RationalField, &self.matrix)
    }
}

/// Rank of `lambda E + H` over the rational function field.
///
/// A nonzero minor of size `r` vanishes at no more than `r` values of
/// `lambda`, so the maximum over `min(m, n) + 1` points is exact.
pub fn normal_rank(p: &Pencil) -> usize {
    let f = RationalField;
    let bound = p.rows().min(p.cols());
    (0..=bound as i64)
        .map(|lambda| {
            let at = p.e().scale(&f, &f.from_i64(lambda)).add(&f, p.h());
            rank(&f, &at)
        })
        .max()
        .unwrap_or(0)
}

/// Degrees of a minimal polynomial basis of the right kernel of `lambda E + H`,
/// sorted descending.
pub fn column_minimal_indices(p: &Pencil) -> Vec<usize> {
    let expected = p.cols() - normal_rank(p);
    let mut found: Vec<usize> = Vec::with_capacity(expected);
    // kappa_{k-1}, kappa_{k-2}
    let (mut prev1, mut prev2) = (0usize, 0usize);
    let mut k = 0;
    while found.len() < expected {
        let kappa = ToeplitzStack::build(p, k).nullity();
        let count = (kappa + prev2) - 2 * prev1;
        found.extend(std::iter::repeat_n(k, count));
        prev2 = prev1;
        prev1 = kappa;
        k += 1;
    }
    found.sort_unstable_by(|a, b| b.cmp(a));
    found
}

/// Column minimal indices of the transposed pencil.
pub fn row_minimal_indices(p: &Pencil) -> Vec<usize> {
    column_minimal_indices(&p.transpose_dual())
}

/// Partitions of the regular part, keyed by point.
pub fn elementary_divisors(p: &Pencil) -> Result<RegularPart> {
    let mut out = RegularPart::new();

    let finite = PolyMatrix::linear(p.e(), p.h()).smith_normal_form();
    if let Some(last) = finite.last().filter(|d| !d.is_constant()) {
        for root in rational_roots(&last.squarefree_part())? {
            let sizes = multiplicities(&finite, &root);
            out.insert(ProjectivePoint::Finite(-root), sizes);
        }
    }

    let infinite = PolyMatrix::linear(p.h(), p.e()).smith_normal_form();
    let sizes = multiplicities(&infinite, &Rational::zero());
    if !sizes.is_empty() {
        out.insert(ProjectivePoint::Infinity, sizes);
    }
    Ok(out)
}

fn multiplicities(factors: &[Poly], root: &Rational) -> Vec<usize> {
    let mut sizes: Vec<usize> = factors
        .iter()
        .map(|d| d.strip_root(root).0)
        .filter(|&e| e > 0)
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// All rational roots of a squarefree polynomial that splits over the
/// rationals; anything left over is reported as non-split.
fn rational_roots(poly: &Poly) -> Result<Vec<Rational>> {
    let mut rest = poly.monic();
    let mut roots = Vec::new();
    let (mult, cofactor) = rest.strip_root(&Rational::zero());
    if mult > 0 {
        roots.push(Rational::zero());
        rest = cofactor;
    }
    if !rest.is_constant() {
        let ints = rest.primitive_integer_coeffs();
        let to_u64 = |v: &BigInt| {
            v.abs()
                .to_u64()
                .ok_or_else(|| Error::UnsupportedSpectrum(format!("coefficient {v} of {rest} exceeds 64 bits")))
        };
        let constant = to_u64(&ints[0])?;
        let lead = to_u64(ints.last().expect("nonconstant"))?;
        let numerators = divisors(constant);
        'search: for q in divisors(lead) {
            for &num in &numerators {
                if num.gcd(&q) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let candidate = Rational::new(BigInt::from(num) * sign, BigInt::from(q));
                    if rest.eval(&candidate).is_zero() {
                        rest = rest.strip_root(&candidate).1;
                        roots.push(candidate);
                        if rest.is_constant() {
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    if !rest.is_constant() {
        return Err(Error::NonSplitSpectrum(rest.to_string()));
    }
    roots.sort();
    Ok(roots)
}

/// Positive divisors of `n > 0`, ascending.
fn divisors(n: u64) -> Vec<u64> {
    let mut primes: BTreeMap<u64, u32> = BTreeMap::new();
    factor(n, &mut primes);
    let mut out = vec![1u64];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut power = 1u64;
            for _ in 0..=e {
                next.push(d * power);
                power = power.saturating_mul(p);
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

fn factor(mut n: u64, into: &mut BTreeMap<u64, u32>) {
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n.is_multiple_of(p) {
            *into.entry(p).or_default() += 1;
            n /= p;
        }
    }
    if n > 1 {
        split(n, into);
    }
}

fn split(n: u64, into: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *into.entry(n).or_default() += 1;
        return;
    }
    let d = pollard_rho(n);
    split(d, into);
    split(n / d, into);
}

/// A nontrivial factor of a composite `n` with no small prime factors.
fn pollard_rho(n: u64) -> u64 {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    for c in 1u64.. {
        let step = |x: u64| ((mul(x, x) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = step(x);
            y = step(step(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("some constant yields a factor")
}

/// Invariants of `p`; the result is checked against the pencil's shape.
pub fn extract_invariants(p: &Pencil) -> Result<KroneckerInvariants> {
    let preinjective = column_minimal_indices(p).into_iter().map(|e| e + 1).collect();
    let preprojective = row_minimal_indices(p).into_iter().map(|e| e + 1).collect();
    let regular = elementary_divisors(p)?;
    let inv = KroneckerInvariants::new(preprojective, regular.into_iter().collect(), preinjective)?;
    if inv.dimension_vector() != p.dimension_vector() {
        return Err(Error::InternalInconsistency(format!(
            "extracted invariants {inv} have dimension vector {:?}, pencil has {:?}",
            inv.dimension_vector(),
            p.dimension_vector()
        )));
    }
    Ok(inv)
}

/// Whether two pencils have the same Kronecker invariants.
pub fn strictly_equivalent(p1: &Pencil, p2: &Pencil) -> Result<bool> {
    if (p1.rows(), p1.cols()) != (p2.rows(), p2.cols()) {
        return Ok(false);
    }
    Ok(extract_invariants(p1)? == extract_invariants(p2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::KroneckerInvariants;
    use crate::pencil::{canonical_pencil, indecomposable_pencil, Indecomposable};
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64_rows(rows)
    }

    fn ind(kind: Indecomposable) -> Pencil {
        indecomposable_pencil(&kind).unwrap()
    }

    #[test]
    fn normal_rank_examples() {
        assert_eq!(normal_rank(&ind(Indecomposable::Preinjective(2))), 1);
        assert_eq!(normal_rank(&Pencil::zero(1, 2)), 0);
        assert_eq!(normal_rank(&ind(Indecomposable::Regular(ProjectivePoint::zero(), 2))), 2);
    }

    #[test]
    fn minimal_index_examples() {
        assert_eq!(column_minimal_indices(&ind(Indecomposable::Preinjective(2))), vec![1]);
        assert_eq!(column_minimal_indices(&Pencil::zero(1, 1)), vec![0]);
        assert!(column_minimal_indices(&ind(Indecomposable::Regular(ProjectivePoint::zero(), 1))).is_empty());
        assert_eq!(row_minimal_indices(&ind(Indecomposable::Preprojective(2))), vec![1]);
        assert_eq!(row_minimal_indices(&ind(Indecomposable::Preprojective(1))), vec![0]);
        assert!(row_minimal_indices(&ind(Indecomposable::Regular(ProjectivePoint::Infinity, 1))).is_empty());
    }

    #[test]
    fn elementary_divisor_examples() {
        let r = elementary_divisors(&ind(Indecomposable::Regular(ProjectivePoint::zero(), 2))).unwrap();
        assert_eq!(r, [(ProjectivePoint::zero(), vec![2])].into_iter().collect());
        let r = elementary_divisors(&ind(Indecomposable::Regular(ProjectivePoint::Infinity, 1))).unwrap();
        assert_eq!(r, [(ProjectivePoint::Infinity, vec![1])].into_iter().collect());
        // lambda^2 + 1
        let p = Pencil::new(q(&[&[1, 0], &[0, 1]]), q(&[&[0, -1], &[1, 0]])).unwrap();
        assert!(matches!(elementary_divisors(&p), Err(Error::NonSplitSpectrum(_))));
        assert!(matches!(extract_invariants(&p), Err(Error::NonSplitSpectrum(_))));
    }

    #[test]
    fn extraction_examples() {
        let inv = KroneckerInvariants::new(vec![2], vec![(ProjectivePoint::zero(), vec![1])], vec![1]).unwrap();
        assert_eq!(extract_invariants(&canonical_pencil(&inv)).unwrap(), inv);

        let zero = extract_invariants(&Pencil::zero(1, 2)).unwrap();
        assert_eq!(zero, KroneckerInvariants::new(vec![1], vec![], vec![1, 1]).unwrap());

        let p = Pencil::new(q(&[&[1, 0], &[0, 1]]), q(&[&[0, 0], &[0, 1]])).unwrap();
        let expected = KroneckerInvariants::regular_only(vec![
            (ProjectivePoint::zero(), vec![1]),
            (ProjectivePoint::finite(1, 1), vec![1]),
        ])
        .unwrap();
        assert_eq!(extract_invariants(&p).unwrap(), expected);
    }

    #[test]
    fn rational_points_and_multiplicities() {
        // (2 lambda + 1)^2 (3 lambda - 2) splits into roots -1/2 (twice) and 2/3.
        let e = q(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let h = q(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, -2]]);
        let p = Pencil::new(e, h).unwrap();
        let expected = KroneckerInvariants::regular_only(vec![
            (ProjectivePoint::finite(1, 2), vec![2]),
            (ProjectivePoint::finite(-2, 3), vec![1]),
        ])
        .unwrap();
        assert_eq!(extract_invariants(&p).unwrap(), expected);
    }

    #[test]
    fn strict_equivalence_examples() {
        let p = ind(Indecomposable::Preinjective(3));
        assert!(strictly_equivalent(&p, &p).unwrap());
        let bigger = p.direct_sum(&ind(Indecomposable::Preprojective(1)));
        assert!(!strictly_equivalent(&p, &bigger).unwrap());
        let left = q(&[&[1, 1], &[0, 1]]);
        let right = q(&[&[1, 0, 2], &[0, 1, 0], &[1, 0, 1]]);
        let conj = p.transform(&left, &right).unwrap();
        assert!(strictly_equivalent(&p, &conj).unwrap());
    }

    #[test]
    fn divisor_enumeration() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(divisors(big), vec![1, 998_244_353, 1_000_000_007, big]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn index_counts_match_normal_rank(rows in 0usize..4, cols in 0usize..4, seed in proptest::collection::vec(-1i64..2, 32)) {
            let mut it = seed.into_iter().cycle();
            let f = RationalField;
            let e = Matrix::from_fn(rows, cols, |_, _| f.from_i64(it.next().unwrap()));
            let h = Matrix::from_fn(rows, cols, |_, _| f.from_i64(it.next().unwrap()));
            let p = Pencil::new(e, h).unwrap();
            let nr = normal_rank(&p);
            prop_assert_eq!(column_minimal_indices(&p).len(), cols - nr);
            prop_assert_eq!(row_minimal_indices(&p).len(), rows - nr);
        }
    }
}
