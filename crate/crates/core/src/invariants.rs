//! Kronecker invariants: the complete isomorphism invariant of a
//! representation of the Kronecker quiver.
//!
//! A representation decomposes as a sum of preprojective blocks `Q_a`
//! (dimension vector `(a-1, a)`), regular blocks `R_{p,b}` at a point `p` of
//! the projective line (dimension vector `(b, b)`), and preinjective blocks
//! `J_c` (dimension vector `(c, c-1)`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{parse_json, Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};

/// A point of the projective line over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Infinity,
    Finite(Rational),
}

impl ProjectivePoint {
    pub fn finite(num: i64, den: i64) -> Self {
        ProjectivePoint::Finite(Rational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        ProjectivePoint::Finite(Rational::zero())
    }
}

impl Ord for ProjectivePoint {
    /// Infinity first, then finite points by value.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjectivePoint::Infinity, ProjectivePoint::Infinity) => Ordering::Equal,
            (ProjectivePoint::Infinity, _) => Ordering::Less,
            (_, ProjectivePoint::Infinity) => Ordering::Greater,
            (ProjectivePoint::Finite(a), ProjectivePoint::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ProjectivePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Infinity => write!(f, "inf"),
            ProjectivePoint::Finite(q) => write!(f, "{}", format_rational(q)),
        }
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(ProjectivePoint::Infinity),
            other => parse_rational(other).map(ProjectivePoint::Finite),
        }
    }
}

/// Dimensions of the spaces at vertex 1 and vertex 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DimensionVector {
    pub dim1: usize,
    pub dim2: usize,
}

impl DimensionVector {
    pub fn new(dim1: usize, dim2: usize) -> Self {
        DimensionVector { dim1, dim2 }
    }

    pub fn swap(self) -> Self {
        DimensionVector::new(self.dim2, self.dim1)
    }

    /// Componentwise `<=`.
    pub fn fits_in(self, other: DimensionVector) -> bool {
        self.dim1 <= other.dim1 && self.dim2 <= other.dim2
    }

    pub fn total(self) -> usize {
        self.dim1 + self.dim2
    }
}

/// Partitions attached to points of the projective line.
pub type RegularPart = BTreeMap<ProjectivePoint, Vec<usize>>;

/// Normalized Kronecker invariants: every list sorted descending, all parts
/// at least 1, no empty regular partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct KroneckerInvariants {
    preprojective: Vec<usize>,
    regular: RegularPart,
    preinjective: Vec<usize>,
}

/// Invariants as supplied by a caller: unsorted, possibly repeating points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInvariants {
    pub preprojective: Vec<usize>,
    pub regular: Vec<(ProjectivePoint, Vec<usize>)>,
    pub preinjective: Vec<usize>,
}

impl RawInvariants {
    /// Sorts every list, merges partitions given at the same point and
    /// rejects parts below 1.
    pub fn normalize(self) -> Result<KroneckerInvariants> {
        let check = |parts: &[usize]| -> Result<()> {
            match parts.iter().find(|&&p| p < 1) {
                Some(&p) => Err(Error::InvalidPart(p)),
                None => Ok(()),
            }
        };
        check(&self.preprojective)?;
        check(&self.preinjective)?;
        let mut regular = RegularPart::new();
        for (point, sizes) in self.regular {
            check(&sizes)?;
            if sizes.is_empty() {
                continue;
            }
            regular.entry(point).or_default().extend(sizes);
        }
        for sizes in regular.values_mut() {
            sort_desc(sizes);
        }
        let mut preprojective = self.preprojective;
        let mut preinjective = self.preinjective;
        sort_desc(&mut preprojective);
        sort_desc(&mut preinjective);
        Ok(KroneckerInvariants {
            preprojective,
            regular,
            preinjective,
        })
    }
}

fn sort_desc(v: &mut [usize]) {
    v.sort_unstable_by(|a, b| b.cmp(a));
}

pub(crate) fn is_sorted_desc(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

impl KroneckerInvariants {
    pub fn new(
        preprojective: Vec<usize>,
        regular: Vec<(ProjectivePoint, Vec<usize>)>,
        preinjective: Vec<usize>,
    ) -> Result<Self> {
        RawInvariants {
            preprojective,
            regular,
            preinjective,
        }
        .normalize()
    }

    pub fn empty() -> Self {
        KroneckerInvariants::default()
    }

    pub fn preprojective_only(parts: Vec<usize>) -> Result<Self> {
        KroneckerInvariants::new(parts, vec![], vec![])
    }

    pub fn preinjective_only(parts: Vec<usize>) -> Result<Self> {
        KroneckerInvariants::new(vec![], vec![], parts)
    }

    pub fn regular_only(regular: Vec<(ProjectivePoint, Vec<usize>)>) -> Result<Self> {
        KroneckerInvariants::new(vec![], regular, vec![])
    }

    pub fn preprojective(&self) -> &[usize] {
        &self.preprojective
    }

    pub fn regular(&self) -> &RegularPart {
        &self.regular
    }

    pub fn preinjective(&self) -> &[usize] {
        &self.preinjective
    }

    pub fn is_zero(&self) -> bool {
        self.preprojective.is_empty() && self.regular.is_empty() && self.preinjective.is_empty()
    }

    pub fn has_preprojective(&self) -> bool {
        !self.preprojective.is_empty()
    }

    pub fn has_regular(&self) -> bool {
        !self.regular.is_empty()
    }

    pub fn has_preinjective(&self) -> bool {
        !self.preinjective.is_empty()
    }

    /// Number of indecomposable summands.
    pub fn summand_count(&self) -> usize {
        self.preprojective.len()
            + self.regular.values().map(Vec::len).sum::<usize>()
            + self.preinjective.len()
    }

    pub fn dimension_vector(&self) -> DimensionVector {
        let pre1: usize = self.preprojective.iter().map(|a| a - 1).sum();
        let pre2: usize = self.preprojective.iter().sum();
        let reg: usize = self.regular.values().flatten().sum();
        let pri1: usize = self.preinjective.iter().sum();
        let pri2: usize = self.preinjective.iter().map(|c| c - 1).sum();
        DimensionVector::new(pre1 + reg + pri1, pre2 + reg + pri2)
    }

    /// Invariants of the dual representation: preprojective and preinjective
    /// lists trade places, regular partitions stay at their points.
    pub fn dualize(&self) -> KroneckerInvariants {
        KroneckerInvariants {
            preprojective: self.preinjective.clone(),
            regular: self.regular.clone(),
            preinjective: self.preprojective.clone(),
        }
    }

    /// Direct sum of two representations.
    pub fn direct_sum(&self, other: &KroneckerInvariants) -> KroneckerInvariants {
        let mut raw = self.to_raw();
        let o = other.to_raw();
        raw.preprojective.extend(o.preprojective);
        raw.regular.extend(o.regular);
        raw.preinjective.extend(o.preinjective);
        raw.normalize().expect("parts of normalized invariants are valid")
    }

    pub fn to_raw(&self) -> RawInvariants {
        RawInvariants {
            preprojective: self.preprojective.clone(),
            regular: self
                .regular
                .iter()
                .map(|(p, s)| (p.clone(), s.clone()))
                .collect(),
            preinjective: self.preinjective.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InvariantsJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: InvariantsJson = parse_json(text)?;
        parsed.into_invariants()
    }
}

impl fmt::Display for KroneckerInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.preprojective)?;
        for (p, sizes) in &self.regular {
            write!(f, " R({p}){sizes:?}")?;
        }
        write!(f, " I{:?}", self.preinjective)
    }
}

/// Wire form of invariants. Points are `"inf"` or reduced rational strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsJson {
    #[serde(default)]
    pub preinjective: Vec<usize>,
    #[serde(default)]
    pub preprojective: Vec<usize>,
    #[serde(default)]
    pub regular: Vec<RegularEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularEntryJson {
    pub point: String,
    pub sizes: Vec<usize>,
}

impl InvariantsJson {
    pub fn into_invariants(self) -> Result<KroneckerInvariants> {
        let regular = self
            .regular
            .into_iter()
            .map(|e| {
                let point = e
                    .point
                    .parse::<ProjectivePoint>()
                    .map_err(|err| Error::Parse(format!("regular.point: {err}")))?;
                Ok((point, e.sizes))
            })
            .collect::<Result<Vec<_>>>()?;
        RawInvariants {
            preprojective: self.preprojective,
            regular,
            preinjective: self.preinjective,
        }
        .normalize()
    }
}

impl From<&KroneckerInvariants> for InvariantsJson {
    fn from(inv: &KroneckerInvariants) -> Self {
        InvariantsJson {
            preinjective: inv.preinjective.clone(),
            preprojective: inv.preprojective.clone(),
            regular: inv
                .regular
                .iter()
                .map(|(p, sizes)| RegularEntryJson {
                    point: p.to_string(),
                    sizes: sizes.clone(),
                })
                .collect(),
        }
    }
}
