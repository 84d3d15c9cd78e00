//! Agreement suites comparing the numerical criteria and rank formulas with
//! the randomized oracle, plus extraction round-trips and order properties.
//!
//! Shared by the command-line `verify` subcommand and the acceptance tests.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::criteria::{
    decide, embeds_regular, formula_ranks, oracle_with_formula, partitions_up_to, theorem_verdict,
    Mode, Representation,
};
use crate::hom::hom_basis;
use crate::error::{Error, Result};
use crate::extract::extract_invariants;
use crate::invariants::{KroneckerInvariants, ProjectivePoint};
use crate::linalg::{rank, Field, QMatrix, RationalField};
use crate::pencil::{canonical_pencil, Indecomposable};
use crate::rank::{
    ii_block_profile, pp_block_profile, rank_block_triangular, rank_ii, rank_pp, rank_rr,
    sampled_block_triangular_rank, Component, OracleConfig,
};

const MAX_RECORDED: usize = 20;

/// Counts of checks per kind and the first few failures.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub suite: String,
    pub instances: usize,
    pub checks: BTreeMap<String, usize>,
    pub failure_count: usize,
    pub failures_by_kind: BTreeMap<String, usize>,
    pub failures: Vec<String>,
    /// Union bound on the chance that some sampled rank came out too low.
    pub underestimate_bound: f64,
    pub elapsed_ms: u128,
}

impl Summary {
    fn new(suite: &str) -> Self {
        Summary {
            suite: suite.to_string(),
            ..Summary::default()
        }
    }

    fn count(&mut self, kind: &str) {
        *self.checks.entry(kind.to_string()).or_default() += 1;
    }

    fn fail(&mut self, kind: &str, message: String) {
        self.failure_count += 1;
        *self.failures_by_kind.entry(kind.to_string()).or_default() += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(message);
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn checks_of(&self, kind: &str) -> usize {
        self.checks.get(kind).copied().unwrap_or(0)
    }

    pub fn failures_of(&self, kind: &str) -> usize {
        self.failures_by_kind.get(kind).copied().unwrap_or(0)
    }

    fn absorb(&mut self, other: Summary) {
        self.instances += other.instances;
        for (k, v) in other.checks {
            *self.checks.entry(k).or_default() += v;
        }
        self.failure_count += other.failure_count;
        self.underestimate_bound += other.underestimate_bound;
        for (k, v) in other.failures_by_kind {
            *self.failures_by_kind.entry(k).or_default() += v;
        }
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(f);
            }
        }
    }
}

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = [
    "pp",
    "ii",
    "rr",
    "pre-into-pri",
    "blocktri",
    "remark",
    "roundtrip",
    "order",
];

/// Runs the named suite with size bound `max_dim`.
pub fn run_suite(name: &str, max_dim: usize, seed: u64) -> Result<Summary> {
    let config = OracleConfig {
        seed,
        ..OracleConfig::default()
    };
    match name {
        "pp" => Ok(preprojective_suite(max_dim, &config)),
        "ii" => Ok(preinjective_suite(max_dim, &config)),
        "rr" => Ok(regular_suite(max_dim, &standard_points(), 1000, &config)),
        "pre-into-pri" => Ok(pre_into_pri_suite(max_dim, &config)),
        "blocktri" => Ok(block_triangular_suite(4, max_dim, &config)),
        "remark" => Ok(remark_suite(max_dim)),
        "roundtrip" => Ok(roundtrip_suite(200, max_dim, 20, seed)),
        "order" => Ok(order_suite(max_dim, 1000, &config)),
        other => Err(Error::Parse(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// The points `0`, `1`, `inf`.
pub fn standard_points() -> Vec<ProjectivePoint> {
    vec![
        ProjectivePoint::zero(),
        ProjectivePoint::finite(1, 1),
        ProjectivePoint::Infinity,
    ]
}

/// Compares criterion, oracle and (when available) closed-form ranks on one
/// pair. Returns the oracle's verdict and sampled ranks.
pub fn check_pair(
    sub: &KroneckerInvariants,
    target: &KroneckerInvariants,
    config: &OracleConfig,
    summary: &mut Summary,
) -> Option<(bool, [usize; 2])> {
    summary.instances += 1;
    let formula = match formula_ranks(sub, target) {
        Ok(f) => f,
        Err(e) => {
            summary.fail("rank", format!("{sub} into {target}: {e}"));
            None
        }
    };
    let oracle = match oracle_with_formula(&canonical_pencil(sub), &canonical_pencil(target), config, formula) {
        Ok(o) => o,
        Err(e) => {
            summary.fail("oracle", format!("{sub} into {target}: {e}"));
            return None;
        }
    };
    match theorem_verdict(sub, target) {
        Ok((_, verdict)) => {
            summary.count("criterion");
            if verdict != oracle.embeds {
                summary.fail(
                    "criterion",
                    format!("{sub} into {target}: criterion says {verdict}, oracle says {}", oracle.embeds),
                );
            }
        }
        Err(Error::CriterionUnavailable(_)) => {}
        Err(e) => summary.fail("criterion", format!("{sub} into {target}: {e}")),
    }
    for r in &oracle.reports {
        summary.underestimate_bound += r.error_bound;
        if let Some(expected) = r.formula_rank {
            summary.count("rank");
            if !r.agreement {
                summary.fail(
                    "rank",
                    format!(
                        "rank of component {} for {sub} -> {target}: formula {expected}, sampled {}",
                        r.component, r.sampled_rank
                    ),
                );
            }
        }
    }
    summary.count("dimension");
    if oracle.embeds && !sub.dimension_vector().fits_in(target.dimension_vector()) {
        summary.fail("dimension", format!("{sub} embeds in {target} despite larger dimension vector"));
    }
    Some((oracle.embeds, [oracle.reports[0].sampled_rank, oracle.reports[1].sampled_rank]))
}

fn timed(mut summary: Summary, start: Instant) -> Summary {
    summary.elapsed_ms = start.elapsed().as_millis();
    summary
}

fn derived(config: &OracleConfig, index: usize) -> OracleConfig {
    OracleConfig {
        seed: config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64),
        ..*config
    }
}

/// All pairs of preprojective lists with sums at most `max_dim`.
pub fn preprojective_suite(max_dim: usize, config: &OracleConfig) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("pp");
    let lists = partitions_up_to(max_dim);
    let mut index = 0;
    for d in &lists {
        for a in &lists {
            let n = KroneckerInvariants::preprojective_only(d.clone()).expect("partition");
            let m = KroneckerInvariants::preprojective_only(a.clone()).expect("partition");
            check_pair(&n, &m, &derived(config, index), &mut summary);
            index += 1;
        }
    }
    timed(summary, start)
}

/// All pairs of preinjective lists with sums at most `max_dim`.
pub fn preinjective_suite(max_dim: usize, config: &OracleConfig) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("ii");
    let lists = partitions_up_to(max_dim);
    let mut index = 0;
    for f in &lists {
        for c in &lists {
            let n = KroneckerInvariants::preinjective_only(f.clone()).expect("partition");
            let m = KroneckerInvariants::preinjective_only(c.clone()).expect("partition");
            check_pair(&n, &m, &derived(config, index), &mut summary);
            index += 1;
        }
    }
    timed(summary, start)
}

/// All preprojective lists against all preinjective lists, sums at most `max_dim`.
pub fn pre_into_pri_suite(max_dim: usize, config: &OracleConfig) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("pre-into-pri");
    let lists = partitions_up_to(max_dim);
    let mut index = 0;
    for d in &lists {
        for c in &lists {
            let n = KroneckerInvariants::preprojective_only(d.clone()).expect("partition");
            let m = KroneckerInvariants::preinjective_only(c.clone()).expect("partition");
            check_pair(&n, &m, &derived(config, index), &mut summary);
            index += 1;
        }
    }
    timed(summary, start)
}

/// Regular parts over `points` with at most `per_point` at each point.
pub fn regular_universe(points: &[ProjectivePoint], per_point: usize) -> Vec<KroneckerInvariants> {
    let lists = partitions_up_to(per_point);
    let mut out = vec![Vec::new()];
    for p in points {
        let mut next = Vec::new();
        for prefix in &out {
            for part in &lists {
                let mut entry: Vec<(ProjectivePoint, Vec<usize>)> = prefix.clone();
                if !part.is_empty() {
                    entry.push((p.clone(), part.clone()));
                }
                next.push(entry);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|r| KroneckerInvariants::regular_only(r).expect("partitions"))
        .collect()
}

/// Regular pairs over `points`, per-point sums at most `per_point`.
///
/// Checked directly against the oracle: every single-point pair, every pair
/// with total size at most `per_point`, and `sampled` random pairs from the
/// full product universe. Homomorphisms between blocks at different points
/// are checked to vanish; the generic homomorphism of any pair is then block
/// diagonal by point, so its oracle verdict and ranks are assembled from the
/// single-point results and compared with the criterion on every pair of
/// the full universe.
pub fn regular_suite(
    per_point: usize,
    points: &[ProjectivePoint],
    sampled: usize,
    config: &OracleConfig,
) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("rr");
    let mut index = 0;
    let mut run = |n: &KroneckerInvariants, m: &KroneckerInvariants, kind: &str, summary: &mut Summary| {
        summary.count(kind);
        let out = check_pair(n, m, &derived(config, index), summary);
        index += 1;
        out
    };

    let lists = partitions_up_to(per_point);
    let position: BTreeMap<&[usize], usize> =
        lists.iter().enumerate().map(|(i, l)| (l.as_slice(), i)).collect();
    // table[point][sub][target] = (embeds, rank)
    let mut table = vec![vec![vec![None; lists.len()]; lists.len()]; points.len()];
    for (pi, p) in points.iter().enumerate() {
        let single = |l: &Vec<usize>| {
            KroneckerInvariants::regular_only(vec![(p.clone(), l.clone())]).expect("partition")
        };
        for (i, e) in lists.iter().enumerate() {
            for (j, b) in lists.iter().enumerate() {
                table[pi][i][j] = run(&single(e), &single(b), "single-point pair", &mut summary)
                    .map(|(embeds, ranks)| (embeds, ranks[1]));
            }
        }
    }

    for p in points {
        for q in points.iter().filter(|q| *q != p) {
            for b in 1..=per_point {
                for e in 1..=per_point {
                    summary.count("cross-point hom");
                    let source = canonical_pencil(
                        &KroneckerInvariants::regular_only(vec![(p.clone(), vec![e])]).expect("size"),
                    );
                    let target = canonical_pencil(
                        &KroneckerInvariants::regular_only(vec![(q.clone(), vec![b])]).expect("size"),
                    );
                    let dim = hom_basis(&source, &target).dim();
                    if dim != 0 {
                        summary.fail("cross-point hom", format!("Hom(R({p},{e}), R({q},{b})) has dimension {dim}"));
                    }
                }
            }
        }
    }

    let size = |inv: &KroneckerInvariants| inv.regular().values().flatten().sum::<usize>();
    let full = regular_universe(points, per_point);
    let small: Vec<&KroneckerInvariants> = full.iter().filter(|r| size(r) <= per_point).collect();
    for n in &small {
        for m in &small {
            run(n, m, "bounded-total pair", &mut summary);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed);
    for _ in 0..sampled {
        let n = full.choose(&mut rng).expect("nonempty universe");
        let m = full.choose(&mut rng).expect("nonempty universe");
        run(n, m, "sampled pair", &mut summary);
    }

    if summary.passed() {
        let coords: Vec<Vec<usize>> = full
            .iter()
            .map(|inv| {
                points
                    .iter()
                    .map(|p| {
                        let part = inv.regular().get(p).map_or(&[][..], Vec::as_slice);
                        position[part]
                    })
                    .collect()
            })
            .collect();
        for (n, nc) in full.iter().zip(&coords) {
            for (m, mc) in full.iter().zip(&coords) {
                let mut embeds = true;
                let mut generic_rank = 0;
                for (pi, (&i, &j)) in nc.iter().zip(mc).enumerate() {
                    let (e, r) = table[pi][i][j].expect("single-point pairs succeeded");
                    embeds &= e;
                    generic_rank += r;
                }
                summary.count("composed pair");
                if embeds_regular(n.regular(), m.regular()) != embeds {
                    summary.fail("criterion", format!("{n} into {m}: criterion disagrees with assembled oracle"));
                }
                if rank_rr(m.regular(), n.regular()) != generic_rank {
                    summary.fail("rank", format!("{n} into {m}: rank formula disagrees with assembled ranks"));
                }
            }
        }
    }
    timed(summary, start)
}

/// All profiles with `q <= max_q` blocks of size `0..=max_size`: closed form
/// against the sampled rank of an assembled block upper triangular matrix.
pub fn block_triangular_suite(max_q: usize, max_size: usize, config: &OracleConfig) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("blocktri");
    let field = config.field().expect("valid oracle configuration");
    let mut rng = config.rng();
    for q in 0..=max_q {
        let base = max_size + 1;
        let total = base.pow(2 * q as u32);
        for code in 0..total {
            let mut digits = (0..2 * q).scan(code, |rest, _| {
                let d = *rest % base;
                *rest /= base;
                Some(d)
            });
            let rows: Vec<usize> = digits.by_ref().take(q).collect();
            let cols: Vec<usize> = digits.take(q).collect();
            summary.instances += 1;
            summary.count("rank");
            let formula = rank_block_triangular(&rows, &cols).expect("equal lengths");
            let sampled = sampled_block_triangular_rank(&rows, &cols, &field, config.trials, &mut rng)
                .expect("equal lengths");
            if formula != sampled {
                summary.fail("rank", format!("rows {rows:?} cols {cols:?}: formula {formula}, sampled {sampled}"));
            }
        }
    }
    timed(summary, start)
}

/// Grouped block profiles reproduce the closed-form ranks.
pub fn remark_suite(max_dim: usize) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("remark");
    let lists = partitions_up_to(max_dim);
    for x in &lists {
        for y in &lists {
            summary.instances += 1;
            for c in Component::BOTH {
                summary.count("rank");
                let (rows, cols) = pp_block_profile(x, y, c).expect("sorted");
                let grouped = rank_block_triangular(&rows, &cols).expect("equal lengths");
                let direct = rank_pp(x, y, c).expect("sorted");
                if grouped != direct {
                    summary.fail("rank", format!("pp a={x:?} d={y:?} component {c}: {grouped} vs {direct}"));
                }
                let (rows, cols) = ii_block_profile(x, y, c).expect("sorted");
                let grouped = rank_block_triangular(&rows, &cols).expect("equal lengths");
                let direct = rank_ii(x, y, c).expect("sorted");
                if grouped != direct {
                    summary.fail("rank", format!("ii c={x:?} f={y:?} component {c}: {grouped} vs {direct}"));
                }
            }
        }
    }
    timed(summary, start)
}

/// Points used for random invariants in round-trip tests.
pub fn roundtrip_points() -> Vec<ProjectivePoint> {
    vec![
        ProjectivePoint::zero(),
        ProjectivePoint::finite(1, 1),
        ProjectivePoint::finite(-1, 1),
        ProjectivePoint::finite(1, 2),
        ProjectivePoint::Infinity,
    ]
}

/// Random invariants with `dim1 + dim2 <= max_total`.
pub fn random_invariants<R: Rng + ?Sized>(
    rng: &mut R,
    max_total: usize,
    points: &[ProjectivePoint],
) -> KroneckerInvariants {
    let target = rng.gen_range(0..=max_total);
    let mut inv = KroneckerInvariants::empty();
    for _ in 0..32 {
        let room = target - inv.dimension_vector().total();
        if room == 0 {
            break;
        }
        // Q_a and J_c have total dimension 2a - 1, R_{p,b} has 2b.
        let kind = match rng.gen_range(0..3) {
            0 => Indecomposable::Preprojective(rng.gen_range(1..=room.div_ceil(2))),
            1 => Indecomposable::Preinjective(rng.gen_range(1..=room.div_ceil(2))),
            _ if room >= 2 => Indecomposable::Regular(
                points.choose(rng).expect("nonempty").clone(),
                rng.gen_range(1..=room / 2),
            ),
            _ => continue,
        };
        let single = match kind {
            Indecomposable::Preprojective(a) => KroneckerInvariants::preprojective_only(vec![a]),
            Indecomposable::Preinjective(c) => KroneckerInvariants::preinjective_only(vec![c]),
            Indecomposable::Regular(p, b) => KroneckerInvariants::regular_only(vec![(p, vec![b])]),
        }
        .expect("positive size");
        inv = inv.direct_sum(&single);
    }
    inv
}

/// Random invertible matrix with small integer entries.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    let f = RationalField;
    loop {
        let m = QMatrix::from_fn(n, n, |_, _| f.from_i64(rng.gen_range(-2..=2)));
        if rank(&f, &m) == n {
            return m;
        }
    }
}

/// Extraction inverts canonical construction and is constant on orbits.
pub fn roundtrip_suite(samples: usize, max_total: usize, conjugates: usize, seed: u64) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("roundtrip");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = roundtrip_points();
    for _ in 0..samples {
        let inv = random_invariants(&mut rng, max_total, &points);
        let pencil = canonical_pencil(&inv);
        summary.instances += 1;
        summary.count("roundtrip");
        match extract_invariants(&pencil) {
            Ok(back) if back == inv => {}
            Ok(back) => summary.fail("roundtrip", format!("{inv} extracted as {back}")),
            Err(e) => summary.fail("roundtrip", format!("{inv}: {e}")),
        }
        for _ in 0..conjugates {
            summary.count("conjugate");
            let left = random_invertible(&mut rng, pencil.rows());
            let right = random_invertible(&mut rng, pencil.cols());
            let moved = pencil.transform(&left, &right).expect("matching shapes");
            match extract_invariants(&moved) {
                Ok(back) if back == inv => {}
                Ok(back) => summary.fail("conjugate", format!("conjugate of {inv} extracted as {back}")),
                Err(e) => summary.fail("conjugate", format!("conjugate of {inv}: {e}")),
            }
        }
    }
    timed(summary, start)
}

/// Same-family universes used by the order suite.
pub fn order_universe(max_dim: usize) -> Vec<Vec<KroneckerInvariants>> {
    let lists = partitions_up_to(max_dim);
    let pre = lists
        .iter()
        .map(|l| KroneckerInvariants::preprojective_only(l.clone()).expect("partition"))
        .collect();
    let pri = lists
        .iter()
        .map(|l| KroneckerInvariants::preinjective_only(l.clone()).expect("partition"))
        .collect();
    let reg = regular_universe(&standard_points(), max_dim.min(5));
    vec![pre, pri, reg]
}

/// Reflexivity over the universes, transitivity of criterion verdicts on
/// random triples, and dimension necessity of every positive verdict.
pub fn order_suite(max_dim: usize, triples: usize, config: &OracleConfig) -> Summary {
    let start = Instant::now();
    let mut summary = Summary::new("order");
    let universes = order_universe(max_dim);
    let mut index = 0;
    for universe in &universes {
        for m in universe {
            summary.instances += 1;
            summary.count("reflexive");
            let rep = Representation::Invariants(m.clone());
            match decide(&rep, &rep, Mode::Both, &derived(config, index)) {
                Ok(v) if v.embeds => {}
                Ok(_) => summary.fail("reflexive", format!("{m} does not embed in itself")),
                Err(e) => summary.fail("reflexive", format!("{m} into itself: {e}")),
            }
            index += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7a5);
    let theorem = |n: &KroneckerInvariants, m: &KroneckerInvariants| {
        theorem_verdict(n, m).map(|(_, v)| v)
    };
    for t in 0..triples {
        let universe = &universes[t % universes.len()];
        let pick = |rng: &mut ChaCha8Rng| universe.choose(rng).expect("nonempty").clone();
        let (n, l, m) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        summary.instances += 1;
        summary.count("triple");
        match (theorem(&n, &l), theorem(&l, &m), theorem(&n, &m)) {
            (Ok(nl), Ok(lm), Ok(nm)) => {
                if nl && lm {
                    summary.count("chained triple");
                    if !nm {
                        summary.fail("transitive", format!("{n} <= {l} <= {m} but not {n} <= {m}"));
                    }
                }
                for (x, y, v) in [(&n, &l, nl), (&l, &m, lm), (&n, &m, nm)] {
                    summary.count("dimension");
                    if v && !x.dimension_vector().fits_in(y.dimension_vector()) {
                        summary.fail("dimension", format!("{x} <= {y} violates dimensions"));
                    }
                }
            }
            (a, b, c) => {
                let e = [a, b, c].into_iter().find_map(|r| r.err()).expect("one failed");
                summary.fail("transitive", format!("triple {n}, {l}, {m}: {e}"));
            }
        }
    }
    timed(summary, start)
}

/// Runs several suites and merges them into one summary.
pub fn combine(name: &str, parts: Vec<Summary>) -> Summary {
    let mut total = Summary::new(name);
    for p in parts {
        total.elapsed_ms += p.elapsed_ms;
        total.absorb(p);
    }
    total
}
