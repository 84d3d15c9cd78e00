//! Closed-form generic ranks of structured homomorphisms and a sampled
//! rank oracle over a large prime field.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom::HomBasis;
use crate::invariants::{is_sorted_desc, RegularPart};
use crate::linalg::{rank, reduce_in, FpMatrix, Matrix, PrimeField, DEFAULT_PRIME};

/// Which vertex a homomorphism component acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::One, Component::Two];

    pub fn index(self) -> usize {
        match self {
            Component::One => 1,
            Component::Two => 2,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Staircase of zero blocks in the generic homomorphism between two
/// preprojective (or, dually, preinjective) representations.
///
/// `r` has `t` entries ending in the length of the `d`-list, `s` has `t - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepProfile {
    pub r: Vec<usize>,
    pub s: Vec<usize>,
}

impl StepProfile {
    pub fn t(&self) -> usize {
        self.r.len()
    }

    /// `s_i` with `s_0 = 0`.
    pub fn s_at(&self, i: usize) -> usize {
        if i == 0 { 0 } else { self.s[i - 1] }
    }

    /// `r_i` (1-based) with `r_0 = 0`.
    pub fn r_at(&self, i: usize) -> usize {
        if i == 0 { 0 } else { self.r[i - 1] }
    }
}

fn check_sorted(v: &[usize]) -> Result<()> {
    if is_sorted_desc(v) {
        Ok(())
    } else {
        Err(Error::NotSorted(v.to_vec()))
    }
}

/// Profile of the pair `(a, d)`: `a` indexes block rows, `d` block columns.
pub fn step_profile(a: &[usize], d: &[usize]) -> Result<StepProfile> {
    check_sorted(a)?;
    check_sorted(d)?;
    let (m, n) = (a.len(), d.len());
    let a_at = |i: usize| if (1..=m).contains(&i) { a[i - 1] } else { 0 };
    let d_at = |j: usize| if (1..=n).contains(&j) { d[j - 1] } else { 0 };
    let mut r = Vec::new();
    let mut s = Vec::new();
    let mut s_prev = 0;
    loop {
        let bound = a_at(s_prev + 1);
        let rl = (1..=n).rev().find(|&j| d_at(j) > bound).unwrap_or(0);
        r.push(rl);
        if rl == n {
            break;
        }
        let next = d_at(rl + 1);
        let sl = (1..=m).rev().find(|&i| next <= a_at(i)).unwrap_or(0);
        s.push(sl);
        s_prev = sl;
    }
    Ok(StepProfile { r, s })
}

/// `min_i (sum_{j <= i} rows_j + sum_{j > i} cols_j)` over `0 <= i <= q`.
pub fn rank_block_triangular(row_sizes: &[usize], col_sizes: &[usize]) -> Result<usize> {
    if row_sizes.len() != col_sizes.len() {
        return Err(Error::LengthMismatch(row_sizes.len(), col_sizes.len()));
    }
    let mut best: usize = col_sizes.iter().sum();
    let mut value = best;
    for (r, c) in row_sizes.iter().zip(col_sizes) {
        value = value + r - c;
        best = best.min(value);
    }
    Ok(best)
}

fn profile_minimum(profile: &StepProfile, rows: &[usize], cols: &[usize]) -> usize {
    (0..profile.t())
        .map(|i| {
            let taken: usize = rows[..profile.s_at(i)].iter().sum();
            let rest: usize = cols[profile.r[i]..].iter().sum();
            taken + rest
        })
        .min()
        .unwrap_or(0)
}

fn shifted(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x - 1).collect()
}

/// Generic rank of one component of the homomorphism `Q(d) -> Q(a)`.
pub fn rank_pp(a: &[usize], d: &[usize], component: Component) -> Result<usize> {
    let profile = step_profile(a, d)?;
    Ok(match component {
        Component::Two => profile_minimum(&profile, a, d),
        Component::One => profile_minimum(&profile, &shifted(a), &shifted(d)),
    })
}

/// Generic rank of one component of the homomorphism `J(f) -> J(c)`.
pub fn rank_ii(c: &[usize], f: &[usize], component: Component) -> Result<usize> {
    let profile = step_profile(f, c)?;
    Ok(match component {
        Component::One => profile_minimum(&profile, f, c),
        Component::Two => profile_minimum(&profile, &shifted(f), &shifted(c)),
    })
}

/// Generic rank of the homomorphism between regular parts, `source -> target`.
/// Both components have the same rank.
pub fn rank_rr(target: &RegularPart, source: &RegularPart) -> usize {
    target
        .iter()
        .filter_map(|(p, b)| source.get(p).map(|e| (b, e)))
        .map(|(b, e)| b.iter().zip(e).map(|(x, y)| x.min(y)).sum::<usize>())
        .sum()
}

/// Outcome of comparing a closed-form rank with the sampled one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub component: Component,
    pub rows: usize,
    pub cols: usize,
    pub formula_rank: Option<usize>,
    pub sampled_rank: usize,
    pub trials: usize,
    pub prime: u64,
    pub agreement: bool,
    /// Upper bound on the probability that `sampled_rank` underestimates the generic rank.
    pub error_bound: f64,
}

/// Parameters of the randomized oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            trials: 3,
            prime: DEFAULT_PRIME,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn field(&self) -> Result<PrimeField> {
        if self.trials == 0 {
            return Err(Error::BadPrime(self.prime, "at least one trial is required"));
        }
        PrimeField::new(self.prime)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A homomorphism basis reduced into a prime field.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    field: PrimeField,
    shape1: (usize, usize),
    shape2: (usize, usize),
    elements: Vec<(FpMatrix, FpMatrix)>,
}

impl ReducedBasis {
    pub fn new(basis: &HomBasis, field: &PrimeField) -> Result<Self> {
        let elements = basis
            .basis
            .iter()
            .map(|el| Ok((reduce_in(&el.phi1, field)?, reduce_in(&el.phi2, field)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedBasis {
            field: *field,
            shape1: (basis.target.dim1, basis.source.dim1),
            shape2: (basis.target.dim2, basis.source.dim2),
            elements,
        })
    }

    pub fn shape(&self, component: Component) -> (usize, usize) {
        match component {
            Component::One => self.shape1,
            Component::Two => self.shape2,
        }
    }

    /// Random combination of the basis; both components use the same coefficients.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (FpMatrix, FpMatrix) {
        let f = &self.field;
        let mut phi1 = Matrix::zeros(f, self.shape1.0, self.shape1.1);
        let mut phi2 = Matrix::zeros(f, self.shape2.0, self.shape2.1);
        for (b1, b2) in &self.elements {
            let t = f.random(rng);
            phi1.add_scaled(f, &t, b1);
            phi2.add_scaled(f, &t, b2);
        }
        (phi1, phi2)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }
}

/// Per-trial ranks of both components under a shared random specialization.
pub fn sample_ranks<R: Rng + ?Sized>(
    basis: &ReducedBasis,
    trials: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    (0..trials)
        .map(|_| {
            let (phi1, phi2) = basis.sample(rng);
            (rank(basis.field(), &phi1), rank(basis.field(), &phi2))
        })
        .collect()
}

/// Maximum over `trials` random specializations of the rank of one component.
pub fn sampled_generic_rank<R: Rng + ?Sized>(
    basis: &HomBasis,
    component: Component,
    trials: usize,
    prime: u64,
    rng: &mut R,
) -> Result<usize> {
    let config = OracleConfig {
        trials,
        prime,
        seed: 0,
    };
    let reduced = ReducedBasis::new(basis, &config.field()?)?;
    Ok(sample_ranks(&reduced, trials, rng)
        .into_iter()
        .map(|(r1, r2)| if component == Component::One { r1 } else { r2 })
        .max()
        .unwrap_or(0))
}

/// Probability bound that every one of `trials` specializations drops below a
/// generic rank whose witnessing minor has `degree` at most `min_dim`.
pub fn underestimate_bound(min_dim: usize, trials: usize, prime: u64) -> f64 {
    if min_dim == 0 {
        return 0.0;
    }
    (min_dim as f64 / prime as f64).min(1.0).powi(trials as i32)
}

/// Builds a report for one component given the sampled rank.
pub fn report(
    component: Component,
    shape: (usize, usize),
    formula_rank: Option<usize>,
    sampled_rank: usize,
    config: &OracleConfig,
) -> RankReport {
    RankReport {
        component,
        rows: shape.0,
        cols: shape.1,
        formula_rank,
        sampled_rank,
        trials: config.trials,
        prime: config.prime,
        agreement: formula_rank.is_none_or(|f| f == sampled_rank),
        error_bound: underestimate_bound(shape.0.min(shape.1), config.trials, config.prime),
    }
}

/// Sampled rank of a block upper triangular matrix with independent generic
/// blocks on and above the diagonal.
pub fn sampled_block_triangular_rank<R: Rng + ?Sized>(
    row_sizes: &[usize],
    col_sizes: &[usize],
    field: &PrimeField,
    trials: usize,
    rng: &mut R,
) -> Result<usize> {
    if row_sizes.len() != col_sizes.len() {
        return Err(Error::LengthMismatch(row_sizes.len(), col_sizes.len()));
    }
    let starts = |sizes: &[usize]| -> Vec<usize> {
        sizes
            .iter()
            .scan(0, |acc, s| {
                let here = *acc;
                *acc += s;
                Some(here)
            })
            .collect()
    };
    let (row_start, col_start) = (starts(row_sizes), starts(col_sizes));
    let block_of = |starts: &[usize], sizes: &[usize], x: usize| {
        (0..sizes.len())
            .rev()
            .find(|&k| sizes[k] > 0 && starts[k] <= x)
            .expect("index inside some block")
    };
    let rows: usize = row_sizes.iter().sum();
    let cols: usize = col_sizes.iter().sum();
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let m = Matrix::from_fn(rows, cols, |r, c| {
            let (bi, bj) = (
                block_of(&row_start, row_sizes, r),
                block_of(&col_start, col_sizes, c),
            );
            if bi <= bj { field.random(rng) } else { 0 }
        });
        best = best.max(rank(field, &m));
    }
    Ok(best)
}

/// Sizes of the nonzero block rows and columns of the preprojective grid,
/// grouped so that the grid is block upper triangular.
pub fn pp_block_profile(
    a: &[usize],
    d: &[usize],
    component: Component,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let profile = step_profile(a, d)?;
    let (rows, cols) = match component {
        Component::Two => (a.to_vec(), d.to_vec()),
        Component::One => (shifted(a), shifted(d)),
    };
    Ok(group_sizes(&profile, &rows, &cols))
}

/// Same grouping for the preinjective grid `J(f) -> J(c)`.
pub fn ii_block_profile(
    c: &[usize],
    f: &[usize],
    component: Component,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let profile = step_profile(f, c)?;
    let (rows, cols) = match component {
        Component::One => (f.to_vec(), c.to_vec()),
        Component::Two => (shifted(f), shifted(c)),
    };
    Ok(group_sizes(&profile, &rows, &cols))
}

fn group_sizes(profile: &StepProfile, rows: &[usize], cols: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let q = profile.t() - 1;
    let row_groups = (1..=q)
        .map(|l| rows[profile.s_at(l - 1)..profile.s_at(l)].iter().sum())
        .collect();
    let col_groups = (1..=q)
        .map(|l| cols[profile.r_at(l)..profile.r_at(l + 1)].iter().sum())
        .collect();
    (row_groups, col_groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_basis;
    use crate::invariants::{KroneckerInvariants, ProjectivePoint};
    use crate::pencil::canonical_pencil;
    use proptest::prelude::*;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn block_triangular_examples() {
        assert_eq!(rank_block_triangular(&[2], &[3]), Ok(2));
        assert_eq!(rank_block_triangular(&[1, 2], &[2, 1]), Ok(2));
        assert_eq!(rank_block_triangular(&[1, 1], &[1, 1]), Ok(2));
        assert_eq!(rank_block_triangular(&[], &[]), Ok(0));
        assert_eq!(rank_block_triangular(&[1], &[1, 2]), Err(Error::LengthMismatch(1, 2)));
        let f = field();
        assert_eq!(sampled_block_triangular_rank(&[1, 2], &[2, 1], &f, 3, &mut rng()), Ok(2));
        assert_eq!(sampled_block_triangular_rank(&[1, 1], &[1, 1], &f, 3, &mut rng()), Ok(2));
    }

    #[test]
    fn step_profile_examples() {
        let p = step_profile(&[3], &[2]).unwrap();
        assert_eq!((p.r.clone(), p.s.clone(), p.t()), (vec![0, 1], vec![1], 2));
        let p = step_profile(&[3], &[2, 2]).unwrap();
        assert_eq!((p.r.clone(), p.s.clone(), p.t()), (vec![0, 2], vec![1], 2));
        let p = step_profile(&[2, 2], &[3]).unwrap();
        assert_eq!((p.r.clone(), p.t()), (vec![1], 1));
        assert_eq!(step_profile(&[1, 2], &[1]), Err(Error::NotSorted(vec![1, 2])));
        assert_eq!(step_profile(&[], &[]).unwrap().r, vec![0]);
    }

    #[test]
    fn pp_ii_examples() {
        use Component::*;
        assert_eq!(rank_pp(&[3], &[2], Two), Ok(2));
        assert_eq!(rank_pp(&[3], &[2], One), Ok(1));
        assert_eq!(rank_pp(&[3], &[2, 2], Two), Ok(3));
        assert_eq!(rank_ii(&[1, 1], &[2], One), Ok(2));
        assert_eq!(rank_ii(&[1, 1], &[2], Two), Ok(0));
        assert_eq!(rank_ii(&[2], &[1], One), Ok(0));
    }

    #[test]
    fn rr_examples() {
        let part = |v: Vec<usize>| -> RegularPart { [(ProjectivePoint::zero(), v)].into_iter().collect() };
        assert_eq!(rank_rr(&part(vec![2]), &part(vec![1])), 1);
        assert_eq!(rank_rr(&part(vec![1]), &part(vec![2])), 1);
        assert_eq!(rank_rr(&part(vec![3, 1]), &part(vec![2, 2])), 3);
    }

    fn basis_between(n: &KroneckerInvariants, m: &KroneckerInvariants) -> HomBasis {
        hom_basis(&canonical_pencil(n), &canonical_pencil(m))
    }

    #[test]
    fn sampled_rank_examples() {
        let q = |v: Vec<usize>| KroneckerInvariants::preprojective_only(v).unwrap();
        let empty = basis_between(&q(vec![3]), &q(vec![2]));
        assert_eq!(sampled_generic_rank(&empty, Component::Two, 3, DEFAULT_PRIME, &mut rng()), Ok(0));
        let same = basis_between(&q(vec![2]), &q(vec![2]));
        assert_eq!(sampled_generic_rank(&same, Component::Two, 3, DEFAULT_PRIME, &mut rng()), Ok(2));
        let two = basis_between(&q(vec![2, 2]), &q(vec![3]));
        assert_eq!(sampled_generic_rank(&two, Component::Two, 3, DEFAULT_PRIME, &mut rng()), Ok(3));
        assert!(matches!(
            sampled_generic_rank(&two, Component::Two, 3, 15, &mut rng()),
            Err(Error::BadPrime(15, _))
        ));
    }

    #[test]
    fn monotone_in_target_parts() {
        for a in [vec![3], vec![4, 2], vec![2, 2, 1]] {
            for d in [vec![2], vec![3, 1], vec![1, 1, 1]] {
                for extra in 1..4 {
                    let mut bigger = a.clone();
                    bigger.push(extra);
                    bigger.sort_unstable_by(|x, y| y.cmp(x));
                    for c in Component::BOTH {
                        assert!(rank_pp(&bigger, &d, c).unwrap() >= rank_pp(&a, &d, c).unwrap());
                    }
                }
            }
        }
    }

    fn partition() -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(1usize..5, 0..4).prop_map(|mut v| {
            v.sort_unstable_by(|x, y| y.cmp(x));
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn grouped_profile_gives_same_rank(a in partition(), d in partition()) {
            for c in Component::BOTH {
                let (rows, cols) = pp_block_profile(&a, &d, c).unwrap();
                prop_assert_eq!(rank_block_triangular(&rows, &cols).unwrap(), rank_pp(&a, &d, c).unwrap());
                let (rows, cols) = ii_block_profile(&a, &d, c).unwrap();
                prop_assert_eq!(rank_block_triangular(&rows, &cols).unwrap(), rank_ii(&a, &d, c).unwrap());
            }
        }

        #[test]
        fn pp_formula_matches_sampling(a in partition(), d in partition()) {
            let basis = basis_between(
                &KroneckerInvariants::preprojective_only(d.clone()).unwrap(),
                &KroneckerInvariants::preprojective_only(a.clone()).unwrap(),
            );
            for c in Component::BOTH {
                let sampled = sampled_generic_rank(&basis, c, 3, DEFAULT_PRIME, &mut rng()).unwrap();
                prop_assert_eq!(sampled, rank_pp(&a, &d, c).unwrap());
            }
        }
    }
}
