//! Deciding whether one representation is a subrepresentation (or a factor
//! representation) of another.
//!
//! Pure pairs of the same family, and preprojective into preinjective, have
//! numerical criteria in terms of invariants. Every pair can be decided by
//! the randomized oracle: `N` embeds in `M` iff the generic homomorphism
//! `N -> M` is injective on both vertices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::extract_invariants;
use crate::hom::hom_basis;
use crate::invariants::{DimensionVector, KroneckerInvariants, ProjectivePoint, RegularPart};
use crate::pencil::{canonical_pencil, Pencil};
use crate::rank::{
    rank_ii, rank_pp, rank_rr, report, sample_ranks, step_profile, Component, OracleConfig,
    RankReport, ReducedBasis,
};

/// `Q(d)` embeds in `Q(a)`.
pub fn embeds_preprojective(d: &[usize], a: &[usize]) -> Result<bool> {
    let profile = step_profile(a, d)?;
    if profile.r[0] != 0 {
        return Ok(false);
    }
    let holds = |shift: usize| {
        (1..profile.t()).all(|i| {
            let rows: usize = a[..profile.s_at(i)].iter().map(|x| x - shift).sum();
            let cols: usize = d[profile.r[0]..profile.r[i]].iter().map(|x| x - shift).sum();
            rows >= cols
        })
    };
    Ok(holds(0) && holds(1))
}

/// `J(f)` embeds in `J(c)`.
pub fn embeds_preinjective(f: &[usize], c: &[usize]) -> Result<bool> {
    let profile = step_profile(f, c)?;
    let w = profile.t();
    let last = profile.s_at(w - 1);
    if last != f.len() {
        return Ok(false);
    }
    let holds = |shift: usize| {
        (0..w - 1).all(|i| {
            let left: usize = f[profile.s_at(i)..last].iter().map(|x| x - shift).sum();
            let right: usize = c[profile.r[i]..].iter().map(|x| x - shift).sum();
            left <= right
        })
    };
    Ok(holds(0) && holds(1))
}

/// Regular part `source` embeds in regular part `target`: at every point the
/// target has at least as many parts, each at least as large.
pub fn embeds_regular(source: &RegularPart, target: &RegularPart) -> bool {
    source.iter().all(|(p, e)| {
        let b = target.get(p).map_or(&[][..], Vec::as_slice);
        b.len() >= e.len() && b.iter().zip(e).all(|(x, y)| x >= y)
    })
}

/// `Q(d)` embeds in `J(c)`.
pub fn embeds_pre_into_pri(d: &[usize], c: &[usize]) -> bool {
    c.iter().map(|x| x - 1).sum::<usize>() >= d.iter().sum::<usize>()
}

/// Outcome of the randomized oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub embeds: bool,
    pub hom_dim: usize,
    pub reports: [RankReport; 2],
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
}

/// Randomized decision: some trial gives a homomorphism injective on both vertices.
///
/// A positive answer is certain. A negative answer is wrong with probability
/// at most the `error_bound` of the reports.
pub fn embeds_generic(n: &Pencil, m: &Pencil, config: &OracleConfig) -> Result<OracleVerdict> {
    oracle_with_formula(n, m, config, None)
}

/// [`embeds_generic`] with closed-form ranks attached to the reports.
pub fn oracle_with_formula(
    n: &Pencil,
    m: &Pencil,
    config: &OracleConfig,
    formula: Option<[usize; 2]>,
) -> Result<OracleVerdict> {
    let field = config.field()?;
    let basis = hom_basis(n, m);
    let reduced = ReducedBasis::new(&basis, &field)?;
    let mut rng = config.rng();
    let trials = sample_ranks(&reduced, config.trials, &mut rng);
    let (n1, n2) = (n.cols(), n.rows());
    let embeds = trials.iter().any(|&(r1, r2)| r1 == n1 && r2 == n2);
    let best1 = trials.iter().map(|t| t.0).max().unwrap_or(0);
    let best2 = trials.iter().map(|t| t.1).max().unwrap_or(0);
    let reports = [
        report(Component::One, reduced.shape(Component::One), formula.map(|f| f[0]), best1, config),
        report(Component::Two, reduced.shape(Component::Two), formula.map(|f| f[1]), best2, config),
    ];
    Ok(OracleVerdict {
        embeds,
        hom_dim: basis.dim(),
        reports,
        trials: config.trials,
        prime: config.prime,
        seed: config.seed,
    })
}

/// Families present in a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Family {
    Preprojective,
    Regular,
    Preinjective,
}

fn families(inv: &KroneckerInvariants) -> BTreeSet<Family> {
    let mut out = BTreeSet::new();
    if inv.has_preprojective() {
        out.insert(Family::Preprojective);
    }
    if inv.has_regular() {
        out.insert(Family::Regular);
    }
    if inv.has_preinjective() {
        out.insert(Family::Preinjective);
    }
    out
}

/// Which numerical criterion decides a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Zero sub-object.
    Trivial,
    Preprojective,
    Preinjective,
    Regular,
    PreprojectiveIntoPreinjective,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Criterion::Trivial => "trivial",
            Criterion::Preprojective => "preprojective",
            Criterion::Preinjective => "preinjective",
            Criterion::Regular => "regular",
            Criterion::PreprojectiveIntoPreinjective => "preprojective-into-preinjective",
        };
        f.write_str(s)
    }
}

/// The criterion covering `(sub, target)`, if any. An empty side counts as
/// pure of any family.
pub fn covering_criterion(sub: &KroneckerInvariants, target: &KroneckerInvariants) -> Option<Criterion> {
    use Family::*;
    let (fs, ft) = (families(sub), families(target));
    let within = |allowed: &[Family]| ft.iter().all(|f| allowed.contains(f));
    let only = |f: Family| fs.len() == 1 && fs.contains(&f);
    if fs.is_empty() {
        Some(Criterion::Trivial)
    } else if only(Preprojective) && within(&[Preprojective]) {
        Some(Criterion::Preprojective)
    } else if only(Preprojective) && within(&[Preinjective]) {
        Some(Criterion::PreprojectiveIntoPreinjective)
    } else if only(Regular) && within(&[Regular]) {
        Some(Criterion::Regular)
    } else if only(Preinjective) && within(&[Preinjective]) {
        Some(Criterion::Preinjective)
    } else {
        None
    }
}

/// Numerical verdict for a covered pair.
pub fn theorem_verdict(sub: &KroneckerInvariants, target: &KroneckerInvariants) -> Result<(Criterion, bool)> {
    let criterion = covering_criterion(sub, target).ok_or_else(|| {
        Error::CriterionUnavailable(format!("sub-object {sub} into {target}"))
    })?;
    let answer = match criterion {
        Criterion::Trivial => true,
        Criterion::Preprojective => embeds_preprojective(sub.preprojective(), target.preprojective())?,
        Criterion::Preinjective => embeds_preinjective(sub.preinjective(), target.preinjective())?,
        Criterion::Regular => embeds_regular(sub.regular(), target.regular()),
        Criterion::PreprojectiveIntoPreinjective => {
            embeds_pre_into_pri(sub.preprojective(), target.preinjective())
        }
    };
    Ok((criterion, answer))
}

/// Closed-form ranks of both components of the generic homomorphism, when
/// both sides are pure of the same family.
pub fn formula_ranks(sub: &KroneckerInvariants, target: &KroneckerInvariants) -> Result<Option<[usize; 2]>> {
    let ranks = match covering_criterion(sub, target) {
        Some(Criterion::Preprojective) => {
            let (a, d) = (target.preprojective(), sub.preprojective());
            Some([rank_pp(a, d, Component::One)?, rank_pp(a, d, Component::Two)?])
        }
        Some(Criterion::Preinjective) => {
            let (c, f) = (target.preinjective(), sub.preinjective());
            Some([rank_ii(c, f, Component::One)?, rank_ii(c, f, Component::Two)?])
        }
        Some(Criterion::Regular) => {
            let r = rank_rr(target.regular(), sub.regular());
            Some([r, r])
        }
        Some(Criterion::Trivial) => Some([0, 0]),
        _ => None,
    };
    Ok(ranks)
}

/// Input to a decision: either invariants or an explicit pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Invariants(KroneckerInvariants),
    Pencil(Pencil),
}

impl Representation {
    pub fn pencil(&self) -> Pencil {
        match self {
            Representation::Invariants(inv) => canonical_pencil(inv),
            Representation::Pencil(p) => p.clone(),
        }
    }

    pub fn invariants(&self) -> Result<KroneckerInvariants> {
        match self {
            Representation::Invariants(inv) => Ok(inv.clone()),
            Representation::Pencil(p) => extract_invariants(p),
        }
    }

    pub fn dimension_vector(&self) -> DimensionVector {
        match self {
            Representation::Invariants(inv) => inv.dimension_vector(),
            Representation::Pencil(p) => p.dimension_vector(),
        }
    }

    /// Representation of the opposite quiver, read back as a Kronecker representation.
    pub fn dual(&self) -> Representation {
        match self {
            Representation::Invariants(inv) => Representation::Invariants(inv.dualize()),
            Representation::Pencil(p) => Representation::Pencil(p.transpose_dual()),
        }
    }
}

impl From<KroneckerInvariants> for Representation {
    fn from(inv: KroneckerInvariants) -> Self {
        Representation::Invariants(inv)
    }
}

impl From<Pencil> for Representation {
    fn from(p: Pencil) -> Self {
        Representation::Pencil(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theorem,
    Generic,
    #[default]
    Both,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Mode::Theorem),
            "generic" => Ok(Mode::Generic),
            "both" => Ok(Mode::Both),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// A decision together with how it was reached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub embeds: bool,
    pub mode: Mode,
    pub criterion: Option<Criterion>,
    pub theorem: Option<bool>,
    pub oracle: Option<OracleVerdict>,
}

/// Decides whether `sub` is a subrepresentation of `target`.
///
/// In [`Mode::Both`] a disagreement between criterion and oracle is an error.
pub fn decide(
    sub: &Representation,
    target: &Representation,
    mode: Mode,
    config: &OracleConfig,
) -> Result<Verdict> {
    let theorem = match mode {
        Mode::Generic => None,
        Mode::Theorem => Some(theorem_verdict(&sub.invariants()?, &target.invariants()?)?),
        Mode::Both => match theorem_verdict(&sub.invariants()?, &target.invariants()?) {
            Ok(t) => Some(t),
            Err(Error::CriterionUnavailable(_)) => None,
            Err(e) => return Err(e),
        },
    };
    let oracle = match mode {
        Mode::Theorem => None,
        _ => {
            let formula = match mode {
                Mode::Both => formula_ranks(&sub.invariants()?, &target.invariants()?)?,
                _ => None,
            };
            Some(oracle_with_formula(&sub.pencil(), &target.pencil(), config, formula)?)
        }
    };
    if let (Some((_, t)), Some(o)) = (&theorem, &oracle) {
        if *t != o.embeds {
            return Err(Error::Disagreement {
                theorem: *t,
                oracle: o.embeds,
            });
        }
    }
    let embeds = theorem
        .map(|t| t.1)
        .or(oracle.as_ref().map(|o| o.embeds))
        .expect("some procedure ran");
    Ok(Verdict {
        embeds,
        mode,
        criterion: theorem.map(|t| t.0),
        theorem: theorem.map(|t| t.1),
        oracle,
    })
}

/// Decides whether `quotient` is a factor representation of `whole`, by
/// deciding the dual embedding.
pub fn is_factor(
    quotient: &Representation,
    whole: &Representation,
    mode: Mode,
    config: &OracleConfig,
) -> Result<Verdict> {
    decide(&quotient.dual(), &whole.dual(), mode, config)
}

/// Heuristic search for a representation `L` with `N` a factor of `L` and
/// `L` a subrepresentation of `M`.
///
/// Candidates for `L` have dimension vector between those of `N` and `M`
/// and regular points among those of `N` and `M`. Whether the point
/// restriction loses solutions is not known, so `None` is not a proof that
/// `N` is not a subfactor.
pub fn subfactor_search(
    n: &KroneckerInvariants,
    m: &KroneckerInvariants,
    config: &OracleConfig,
) -> Result<Option<KroneckerInvariants>> {
    let (low, high) = (n.dimension_vector(), m.dimension_vector());
    if !low.fits_in(high) {
        return Ok(None);
    }
    let points: Vec<ProjectivePoint> = n
        .regular()
        .keys()
        .chain(m.regular().keys())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (np, mp) = (canonical_pencil(n), canonical_pencil(m));
    for l in invariants_between(low, high, &points) {
        let lp = canonical_pencil(&l);
        if embeds_generic(&lp, &mp, config)?.embeds
            && embeds_generic(&np.transpose_dual(), &lp.transpose_dual(), config)?.embeds
        {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Partitions of `total` into parts of size at most `max`, descending.
pub fn partitions(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All partitions with sum at most `bound`.
pub fn partitions_up_to(bound: usize) -> Vec<Vec<usize>> {
    (0..=bound).flat_map(|t| partitions(t, t)).collect()
}

/// Every set of invariants whose dimension vector lies componentwise
/// between `low` and `high`, with regular parts supported on `points`.
pub fn invariants_between(
    low: DimensionVector,
    high: DimensionVector,
    points: &[ProjectivePoint],
) -> Vec<KroneckerInvariants> {
    let mut out = Vec::new();
    let budget = high.total();
    // Preprojective Q_a has dims (a-1, a), preinjective J_c has (c, c-1), R has (b, b).
    for pre in partitions_up_to(high.dim2) {
        let pre_dims = (pre.iter().map(|a| a - 1).sum::<usize>(), pre.iter().sum::<usize>());
        if pre_dims.0 > high.dim1 {
            continue;
        }
        for pri in partitions_up_to(high.dim1 - pre_dims.0) {
            let pri_dims = (pri.iter().sum::<usize>(), pri.iter().map(|c| c - 1).sum::<usize>());
            let used = (pre_dims.0 + pri_dims.0, pre_dims.1 + pri_dims.1);
            if used.0 > high.dim1 || used.1 > high.dim2 {
                continue;
            }
            let room = (high.dim1 - used.0).min(high.dim2 - used.1);
            for regular in regular_parts(room, points) {
                let size: usize = regular.iter().map(|(_, v)| v.iter().sum::<usize>()).sum();
                let dims = DimensionVector::new(used.0 + size, used.1 + size);
                if low.fits_in(dims) && dims.total() <= budget {
                    let inv = KroneckerInvariants::new(pre.clone(), regular, pri.clone())
                        .expect("parts are positive");
                    out.push(inv);
                }
            }
        }
    }
    out
}

fn regular_parts(room: usize, points: &[ProjectivePoint]) -> Vec<Vec<(ProjectivePoint, Vec<usize>)>> {
    match points.split_first() {
        None => vec![vec![]],
        Some((p, rest)) => {
            let mut out = Vec::new();
            for part in partitions_up_to(room) {
                let used: usize = part.iter().sum();
                for mut tail in regular_parts(room - used, rest) {
                    if !part.is_empty() {
                        tail.insert(0, (p.clone(), part.clone()));
                    }
                    out.push(tail);
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pre(v: Vec<usize>) -> KroneckerInvariants {
        KroneckerInvariants::preprojective_only(v).unwrap()
    }
    fn pri(v: Vec<usize>) -> KroneckerInvariants {
        KroneckerInvariants::preinjective_only(v).unwrap()
    }
    fn reg(v: Vec<(ProjectivePoint, Vec<usize>)>) -> KroneckerInvariants {
        KroneckerInvariants::regular_only(v).unwrap()
    }
    fn oracle(n: &KroneckerInvariants, m: &KroneckerInvariants) -> bool {
        embeds_generic(&canonical_pencil(n), &canonical_pencil(m), &OracleConfig::default())
            .unwrap()
            .embeds
    }

    #[test]
    fn preprojective_examples() {
        assert!(embeds_preprojective(&[2], &[3]).unwrap());
        assert!(!embeds_preprojective(&[2, 2], &[3]).unwrap());
        assert!(!embeds_preprojective(&[3], &[2, 2]).unwrap());
        assert!(embeds_preprojective(&[], &[]).unwrap());
        assert!(oracle(&pre(vec![2]), &pre(vec![3])));
        assert!(!oracle(&pre(vec![2, 2]), &pre(vec![3])));
        assert!(!oracle(&pre(vec![3]), &pre(vec![2, 2])));
    }

    #[test]
    fn preinjective_examples() {
        assert!(!embeds_preinjective(&[1], &[2]).unwrap());
        assert!(!embeds_preinjective(&[2], &[1, 1]).unwrap());
        // Hom(J_2, J_3) = 0: maps between preinjectives only go to smaller ones.
        assert!(!embeds_preinjective(&[2], &[3]).unwrap());
        assert!(!oracle(&pri(vec![2]), &pri(vec![3])));
        assert!(embeds_preinjective(&[1], &[2, 1]).unwrap());
        assert!(!oracle(&pri(vec![1]), &pri(vec![2])));
        assert!(!oracle(&pri(vec![2]), &pri(vec![1, 1])));
        assert!(oracle(&pri(vec![1]), &pri(vec![2, 1])));
        assert!(embeds_preinjective(&[2], &[2, 1]).unwrap());
        assert!(oracle(&pri(vec![2]), &pri(vec![2, 1])));
    }

    #[test]
    fn regular_examples() {
        let zero = ProjectivePoint::zero();
        let one = ProjectivePoint::finite(1, 1);
        let m = reg(vec![(zero.clone(), vec![2])]);
        assert!(embeds_regular(reg(vec![(zero.clone(), vec![1])]).regular(), m.regular()));
        assert!(!embeds_regular(
            reg(vec![(zero.clone(), vec![1, 1])]).regular(),
            reg(vec![(zero.clone(), vec![1])]).regular()
        ));
        assert!(!embeds_regular(reg(vec![(one.clone(), vec![1])]).regular(), m.regular()));
        assert!(!oracle(&reg(vec![(one, vec![1])]), &m));
    }

    #[test]
    fn pre_into_pri_examples() {
        assert!(embeds_pre_into_pri(&[1], &[2]));
        assert!(!embeds_pre_into_pri(&[2], &[2]));
        assert!(embeds_pre_into_pri(&[1, 1], &[3]));
        assert!(oracle(&pre(vec![1]), &pri(vec![2])));
        assert!(!oracle(&pre(vec![2]), &pri(vec![2])));
        assert!(oracle(&pre(vec![1, 1]), &pri(vec![3])));
    }

    #[test]
    fn generic_examples() {
        let r0 = reg(vec![(ProjectivePoint::zero(), vec![1])]);
        let both = reg(vec![(ProjectivePoint::zero(), vec![1]), (ProjectivePoint::finite(1, 1), vec![1])]);
        assert!(oracle(&r0, &r0));
        assert!(!oracle(&r0, &pre(vec![2])));
        assert!(oracle(&pre(vec![2]), &both));
    }

    #[test]
    fn factor_examples() {
        let cfg = OracleConfig::default();
        let q1: Representation = pre(vec![1]).into();
        let q2: Representation = pre(vec![2]).into();
        assert!(is_factor(&q2, &q2, Mode::Both, &cfg).unwrap().embeds);
        assert!(!is_factor(&q1, &q2, Mode::Both, &cfg).unwrap().embeds);
        let r1: Representation = reg(vec![(ProjectivePoint::zero(), vec![1])]).into();
        let r2: Representation = reg(vec![(ProjectivePoint::zero(), vec![2])]).into();
        assert!(is_factor(&r1, &r2, Mode::Both, &cfg).unwrap().embeds);
        // Pencil inputs dualize by transposition.
        let p2 = Representation::Pencil(r2.pencil());
        assert!(is_factor(&r1, &p2, Mode::Generic, &cfg).unwrap().embeds);
    }

    #[test]
    fn decide_modes() {
        let cfg = OracleConfig::default();
        let n: Representation = pre(vec![2]).into();
        let m: Representation = pre(vec![3]).into();
        let v = decide(&n, &m, Mode::Both, &cfg).unwrap();
        assert!(v.embeds);
        assert_eq!(v.criterion, Some(Criterion::Preprojective));
        let reports = &v.oracle.as_ref().unwrap().reports;
        assert!(reports.iter().all(|r| r.agreement && r.formula_rank.is_some()));

        let mixed: Representation =
            KroneckerInvariants::new(vec![2], vec![(ProjectivePoint::zero(), vec![1])], vec![]).unwrap().into();
        assert!(matches!(
            decide(&mixed, &m, Mode::Theorem, &cfg),
            Err(Error::CriterionUnavailable(_))
        ));
        let v = decide(&mixed, &mixed, Mode::Both, &cfg).unwrap();
        assert!(v.embeds && v.theorem.is_none());
        let v = decide(&mixed, &m, Mode::Generic, &cfg).unwrap();
        assert!(!v.embeds);
        assert_eq!(v.oracle.unwrap().reports[0].trials, 3);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(partitions_up_to(8).len(), 67);
    }

    #[test]
    fn subfactor_search_finds_intermediate() {
        let cfg = OracleConfig::default();
        let zero = ProjectivePoint::zero();
        let n = reg(vec![(zero.clone(), vec![1])]);
        let m = reg(vec![(zero, vec![2])]);
        let l = subfactor_search(&n, &m, &cfg).unwrap().expect("R(0,1) is a factor of itself");
        assert!(l.dimension_vector().fits_in(m.dimension_vector()));
        assert!(subfactor_search(&m, &n, &cfg).unwrap().is_none());
    }
}
