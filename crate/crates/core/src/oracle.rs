//! Brute-force ground truth on finite instances, a seeded instance
//! generator, and the differential check of the theorems against it.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certifier::{check_theorem, Claim, Status, Theorem};
use crate::contraction::{m_value, n_value, ComparisonFunction, ContractionCondition, Variant};
use crate::instance::{FiniteInstance, Setting};
use crate::mappings::{CoincidenceProfile, FiniteMap, Pair};
use crate::relspace::{DistanceTable, FiniteRelation, FiniteSpace, PointId};
use crate::scalar::rat;

/// `C(f,g)`, the points of coincidence and the common fixed points by direct
/// scan of the value tables.
pub fn brute_force_solutions(inst: &FiniteInstance) -> CoincidenceProfile<PointId> {
    let f = &inst.pair.f.0;
    let g = &inst.pair.g.0;
    let mut coincidence = BTreeSet::new();
    let mut values = BTreeSet::new();
    let mut fixed = BTreeSet::new();
    for x in 0..f.len() {
        if f[x] != g[x] {
            continue;
        }
        coincidence.insert(PointId(x));
        values.insert(f[x]);
        if f[x].0 == x {
            fixed.insert(PointId(x));
        }
    }
    CoincidenceProfile {
        coincidence_points: coincidence.into_iter().collect(),
        points_of_coincidence: values.into_iter().collect(),
        common_fixed_points: fixed.into_iter().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Random weights in `1..=10` closed under shortest paths.
    RandomTable,
    /// Points on a line with random positive gaps.
    Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceGeneratorConfig {
    /// In `2..=8`.
    pub carrier_size: usize,
    /// In `(0,1]`.
    pub relation_density: BigRational,
    pub metric: MetricKind,
    pub seed: u64,
}

impl InstanceGeneratorConfig {
    /// The configuration the fuzz loop derives from a seed: size in
    /// `2..=max_size`, density in `{1/4, 1/2, 3/4, 1}`, either metric.
    pub fn for_seed(seed: u64, max_size: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let max_size = max_size.clamp(2, MAX_CARRIER);
        InstanceGeneratorConfig {
            carrier_size: rng.gen_range(2..=max_size),
            relation_density: rat(rng.gen_range(1..=4), 4),
            metric: if rng.gen_bool(0.5) { MetricKind::RandomTable } else { MetricKind::Path },
            seed,
        }
    }
}

pub const MAX_CARRIER: usize = 8;
const RELATION_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("carrier size must be in 2..=8, found {0}")]
    Size(usize),
    #[error("relation density must be in (0,1], found {0}")]
    Density(String),
    #[error("no nonempty relation after {RELATION_RETRIES} draws")]
    EmptyRelation,
}

/// A random finite instance, deterministic in the seed. `Y` is the whole
/// carrier or `f(X)` plus random extra points, with equal odds.
pub fn random_instance(cfg: &InstanceGeneratorConfig) -> Result<FiniteInstance, GeneratorError> {
    let n = cfg.carrier_size;
    if !(2..=MAX_CARRIER).contains(&n) {
        return Err(GeneratorError::Size(n));
    }
    let density = &cfg.relation_density;
    if density <= &BigRational::zero() || density > &BigRational::one() {
        return Err(GeneratorError::Density(crate::scalar::format_rational(density)));
    }
    let num: u32 = density.numer().try_into().map_err(|_| GeneratorError::Density(density.to_string()))?;
    let den: u32 = density.denom().try_into().map_err(|_| GeneratorError::Density(density.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let rows = match cfg.metric {
        MetricKind::RandomTable => random_table(&mut rng, n),
        MetricKind::Path => path_metric(&mut rng, n),
    };
    let mut relation = None;
    for _ in 0..RELATION_RETRIES {
        let mut r = FiniteRelation::empty(n);
        for u in 0..n {
            for v in 0..n {
                if rng.gen_ratio(num, den) {
                    r.insert(PointId(u), PointId(v));
                }
            }
        }
        if !r.is_empty() {
            relation = Some(r);
            break;
        }
    }
    let relation = relation.ok_or(GeneratorError::EmptyRelation)?;
    let f = FiniteMap::from_indices((0..n).map(|_| rng.gen_range(0..n)));
    let g = FiniteMap::from_indices((0..n).map(|_| rng.gen_range(0..n)));
    let subspace = if rng.gen_bool(0.5) {
        None
    } else {
        let mut y: BTreeSet<PointId> = f.image().into_iter().collect();
        y.extend((0..n).filter(|_| rng.gen_bool(0.25)).map(PointId));
        Some(y.into_iter().collect())
    };
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    let space = FiniteSpace::new(
        labels,
        DistanceTable::from_rows(rows).expect("square table"),
        relation,
        subspace,
    )
    .expect("generated spaces satisfy the axioms");
    Ok(FiniteInstance::new(space, Pair::new(f, g)).expect("total maps"))
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<BigRational>> {
    let mut d = vec![vec![0i64; n]; n];
    for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
        let w = rng.gen_range(1..=10);
        d[i][j] = w;
        d[j][i] = w;
    }
    // Floyd–Warshall; positive weights keep distinct points apart.
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d.into_iter()
        .map(|row| row.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect()
}

fn path_metric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<BigRational>> {
    let mut coords = vec![0i64; n];
    for i in 1..n {
        coords[i] = coords[i - 1] + rng.gen_range(1..=5);
    }
    coords
        .iter()
        .map(|a| coords.iter().map(|b| BigRational::from_integer((a - b).abs().into())).collect())
        .collect()
}

/// The least `k` with `d(fu,fv) ≤ k·T(u,v)` over `(gu,gv) ∈ R`, where `T` is
/// `M_f` or `N_f`; `None` when some related pair has `T = 0 < d(fu,fv)` or
/// the least `k` is not below 1.
pub fn fit_linear_phi(inst: &FiniteInstance, variant: &Variant) -> Option<BigRational> {
    let n_type = matches!(variant, Variant::N);
    let mut best = BigRational::zero();
    for u in inst.space.points() {
        for v in inst.space.points() {
            if !inst.related(&inst.g(&u), &inst.g(&v)) {
                continue;
            }
            let lhs = inst.distance(&inst.f(&u), &inst.f(&v));
            if lhs.is_zero() {
                continue;
            }
            let t = if n_type { n_value(inst, &u, &v) } else { m_value(inst, &u, &v) };
            if t.is_zero() {
                return None;
            }
            let ratio = lhs.as_rational()? / t.as_rational()?;
            best = best.max(ratio);
        }
    }
    (best < BigRational::one()).then_some(best)
}

/// The `(m)` or `(q)` condition with the fitted `φ(t) = k·t`, or `k = 9/10`
/// when no fit exists.
pub fn fitted_condition(inst: &FiniteInstance, variant: Variant) -> ContractionCondition {
    let k = fit_linear_phi(inst, &variant).unwrap_or_else(|| rat(9, 10));
    ContractionCondition::new(variant, Some(ComparisonFunction::linear(k).expect("nonnegative")))
        .expect("k < 1")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DifferentialVerdict {
    /// The th1 hypotheses certified and every certified conclusion held.
    /// Lists the theorems that certified.
    Pass(Vec<Theorem>),
    /// The th1 hypotheses are not all met.
    Skipped(String),
    /// A certified theorem's conclusion failed; this is an implementation bug.
    TheoremViolated(String),
}

impl DifferentialVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, DifferentialVerdict::TheoremViolated(_))
    }
}

/// Certifies th1 under `cond`; when it certifies, checks the oracle's
/// `C(f,g)` is nonempty and contains the solver's terminal point. Then
/// checks the uniqueness conclusion of every other theorem that certifies.
pub fn differential_check(inst: &FiniteInstance, cond: &ContractionCondition) -> DifferentialVerdict {
    let truth = brute_force_solutions(inst);
    let th1 = match check_theorem(Theorem::Th1, inst, cond) {
        Ok(r) => r,
        Err(e) => return DifferentialVerdict::Skipped(e.to_string()),
    };
    if th1.conclusion.oracle_agreement == Some(false) {
        return DifferentialVerdict::TheoremViolated("closed-form profile disagrees with brute force".into());
    }
    if th1.status != Status::Certified {
        let failing: Vec<&str> = th1
            .entries
            .iter()
            .filter(|e| !e.verdict.passes())
            .map(|e| e.label)
            .collect();
        return DifferentialVerdict::Skipped(format!("th1 not certified; failing: {}", failing.join(" ")));
    }
    if truth.coincidence_points.is_empty() {
        return DifferentialVerdict::TheoremViolated("th1 certified but C(f,g) is empty".into());
    }
    match th1.conclusion.trace.as_ref().and_then(|t| t.terminal_point()) {
        Some(p) if truth.coincidence_points.contains(p) => {}
        other => {
            return DifferentialVerdict::TheoremViolated(format!(
                "th1 certified but the solver ended at {other:?}, outside C(f,g)"
            ))
        }
    }
    let mut certified = vec![Theorem::Th1];
    for theorem in [Theorem::Th2, Theorem::Th3, Theorem::Th4, Theorem::Cor10] {
        let Ok(report) = check_theorem(theorem, inst, cond) else { continue };
        for (claim, _) in theorem.claims() {
            if report.claim(claim) != Some(Status::Certified) {
                continue;
            }
            let (count, what) = match claim {
                Claim::CoincidenceExists => (usize::from(!truth.coincidence_points.is_empty()), "coincidence"),
                Claim::UniquePointOfCoincidence => (truth.points_of_coincidence.len(), "point of coincidence"),
                Claim::UniqueCoincidencePoint => (truth.coincidence_points.len(), "coincidence point"),
                Claim::UniqueCommonFixedPoint => (truth.common_fixed_points.len(), "common fixed point"),
            };
            if count != 1 {
                return DifferentialVerdict::TheoremViolated(format!(
                    "{theorem} certified `{claim}` but the oracle finds {count} {what}(s)"
                ));
            }
        }
        if report.status == Status::Certified {
            certified.push(theorem);
        }
    }
    DifferentialVerdict::Pass(certified)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedResult {
    pub seed: u64,
    pub carrier_size: usize,
    /// One verdict per condition tried: fitted `(m)`, then fitted `(q)`.
    pub verdicts: Vec<DifferentialVerdict>,
    pub oracle_agrees: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzSummary {
    pub instances: usize,
    pub oracle_disagreements: Vec<u64>,
    /// Instances on which each theorem certified under some condition.
    pub certified: Vec<(Theorem, usize)>,
    pub violations: Vec<(u64, String)>,
    pub generator_errors: Vec<(u64, String)>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.oracle_disagreements.is_empty() && self.violations.is_empty() && self.generator_errors.is_empty()
    }

    pub fn certified_count(&self, theorem: Theorem) -> usize {
        self.certified.iter().find(|(t, _)| *t == theorem).map_or(0, |(_, n)| *n)
    }
}

pub fn fuzz_seed(seed: u64, max_size: usize) -> Result<SeedResult, GeneratorError> {
    let cfg = InstanceGeneratorConfig::for_seed(seed, max_size);
    let inst = random_instance(&cfg)?;
    let oracle_agrees = crate::mappings::coincidence_profile(&inst.pair) == brute_force_solutions(&inst);
    let verdicts = [Variant::M, Variant::N]
        .into_iter()
        .map(|v| differential_check(&inst, &fitted_condition(&inst, v)))
        .collect();
    Ok(SeedResult {
        seed,
        carrier_size: cfg.carrier_size,
        verdicts,
        oracle_agrees,
    })
}

/// Runs [`fuzz_seed`] over `seeds` in parallel; the summary is in seed order
/// and independent of scheduling.
pub fn fuzz(seeds: std::ops::Range<u64>, max_size: usize) -> FuzzSummary {
    let results: Vec<(u64, Result<SeedResult, GeneratorError>)> =
        seeds.into_par_iter().map(|s| (s, fuzz_seed(s, max_size))).collect();
    let mut summary = FuzzSummary::default();
    let mut counts = std::collections::BTreeMap::new();
    for (seed, result) in results {
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                summary.generator_errors.push((seed, e.to_string()));
                continue;
            }
        };
        summary.instances += 1;
        if !r.oracle_agrees {
            summary.oracle_disagreements.push(seed);
        }
        let mut seen = BTreeSet::new();
        for v in &r.verdicts {
            match v {
                DifferentialVerdict::Pass(ts) => seen.extend(ts.iter().copied()),
                DifferentialVerdict::TheoremViolated(msg) => summary.violations.push((seed, msg.clone())),
                DifferentialVerdict::Skipped(_) => {}
            }
        }
        for t in seen {
            *counts.entry(t).or_insert(0) += 1;
        }
    }
    summary.certified = counts.into_iter().collect();
    summary
}

/// Bounded enumeration of eventually periodic sequences, the ground truth
/// for the finite-carrier characterizations of the sequence-quantified
/// definitions.
///
/// A sequence is a prefix of length at most 2 followed by a cycle of period
/// at most `|X|`, repeated forever; every predicate below only looks at
/// terms up to index `prefix + 2·period ≤ 3|X|`. On a finite metric space a
/// sequence converges iff its cycle is constant, and a property holds
/// "eventually" or "infinitely often" iff it holds on all or on some cycle
/// terms.
pub mod sequences {
    use crate::instance::FiniteInstance;
    use crate::relspace::{PointId, Relation};

    pub const MAX_PREFIX: usize = 2;

    /// An eventually periodic sequence `prefix, cycle, cycle, …`.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Periodic {
        pub prefix: Vec<PointId>,
        pub cycle: Vec<PointId>,
    }

    impl Periodic {
        pub fn term(&self, n: usize) -> PointId {
            if n < self.prefix.len() {
                self.prefix[n]
            } else {
                self.cycle[(n - self.prefix.len()) % self.cycle.len()]
            }
        }

        /// Enough terms to see every consecutive pair.
        pub fn horizon(&self) -> usize {
            self.prefix.len() + 2 * self.cycle.len()
        }

        pub fn map(&self, h: impl Fn(PointId) -> PointId) -> Periodic {
            Periodic {
                prefix: self.prefix.iter().map(|&p| h(p)).collect(),
                cycle: self.cycle.iter().map(|&p| h(p)).collect(),
            }
        }

        pub fn preserves<R: Relation<PointId>>(&self, r: &R) -> bool {
            (0..self.horizon()).all(|n| r.contains(&self.term(n), &self.term(n + 1)))
        }
    }

    /// Every sequence over `points` with prefix length `≤ MAX_PREFIX` and
    /// period `≤ max_period`.
    pub fn enumerate(points: &[PointId], max_period: usize) -> Vec<Periodic> {
        let mut out = Vec::new();
        for pre in 0..=MAX_PREFIX {
            for per in 1..=max_period {
                for word in words(points, pre + per) {
                    out.push(Periodic {
                        prefix: word[..pre].to_vec(),
                        cycle: word[pre..].to_vec(),
                    });
                }
            }
        }
        out
    }

    fn words(points: &[PointId], len: usize) -> Vec<Vec<PointId>> {
        let mut acc = vec![Vec::new()];
        for _ in 0..len {
            acc = acc
                .into_iter()
                .flat_map(|w| {
                    points.iter().map(move |&p| {
                        let mut w = w.clone();
                        w.push(p);
                        w
                    })
                })
                .collect();
        }
        acc
    }

    fn zero(inst: &FiniteInstance, a: PointId, b: PointId) -> bool {
        num_traits::Zero::is_zero(inst.space.distance(a, b))
    }

    /// The limit, if `d(x_n, u) → 0` for some `u` in the carrier.
    pub fn limit(inst: &FiniteInstance, s: &Periodic) -> Option<PointId> {
        inst.space
            .points()
            .find(|&u| s.cycle.iter().all(|&c| zero(inst, c, u)))
    }

    /// `d(x_m, x_n) → 0`.
    pub fn is_cauchy(inst: &FiniteInstance, s: &Periodic) -> bool {
        s.cycle.iter().all(|&a| s.cycle.iter().all(|&b| zero(inst, a, b)))
    }

    /// Every `R`-preserving Cauchy sequence in `Y` converges to a point of `Y`.
    pub fn r_complete(inst: &FiniteInstance, max_period: usize) -> bool {
        let y = inst.space.subspace();
        let r = inst.space.relation();
        enumerate(&y, max_period)
            .iter()
            .filter(|s| s.preserves(r) && is_cauchy(inst, s))
            .all(|s| limit(inst, s).is_some_and(|u| y.contains(&u)))
    }

    /// Every convergent `R`-preserving `u_n → u` has a subsequence with
    /// `[g u_{n_k}, g u] ∈ R` (`g` the identity when absent). Returns the
    /// first offending limit.
    pub fn d_self_closed(
        inst: &FiniteInstance,
        g: Option<&crate::mappings::FiniteMap>,
        max_period: usize,
    ) -> Result<(), PointId> {
        let r = inst.space.relation();
        let points: Vec<PointId> = inst.space.points().collect();
        let g = |p: PointId| g.map_or(p, |g| g.apply(p));
        for s in enumerate(&points, max_period) {
            if !s.preserves(r) {
                continue;
            }
            let Some(u) = limit(inst, &s) else { continue };
            if !s.cycle.iter().any(|&c| r.comparable(&g(c), &g(u))) {
                return Err(u);
            }
        }
        Ok(())
    }

    /// For every `u_n` with `fu_n`, `gu_n` both `R`-preserving and tending
    /// to a common `t`, `d(g f u_n, f g u_n) → 0`. Returns the first
    /// offending `t`.
    pub fn r_compatible(inst: &FiniteInstance, max_period: usize) -> Result<(), PointId> {
        let r = inst.space.relation();
        let (f, g) = (&inst.pair.f, &inst.pair.g);
        let points: Vec<PointId> = inst.space.points().collect();
        for s in enumerate(&points, max_period) {
            let (fs, gs) = (s.map(|p| f.apply(p)), s.map(|p| g.apply(p)));
            if !fs.preserves(r) || !gs.preserves(r) {
                continue;
            }
            let (Some(t), Some(t2)) = (limit(inst, &fs), limit(inst, &gs)) else { continue };
            if t != t2 {
                continue;
            }
            if !s.cycle.iter().all(|&c| zero(inst, g.apply(f.apply(c)), f.apply(g.apply(c)))) {
                return Err(t);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::{d_self_closed_finite, r_compatible_finite};
    use crate::mappings::coincidence_profile;
    use crate::worked::second_example_finite;

    #[test]
    fn second_example_restriction() {
        let inst = second_example_finite();
        let p = brute_force_solutions(&inst);
        assert_eq!(p.coincidence_points, vec![PointId(0)]);
        assert_eq!(p.common_fixed_points, vec![PointId(0)]);
        let cond = ContractionCondition::new(Variant::M, Some(ComparisonFunction::linear(rat(5, 6)).unwrap())).unwrap();
        let DifferentialVerdict::Pass(ts) = differential_check(&inst, &cond) else { panic!() };
        assert!(ts.contains(&Theorem::Th2) && ts.contains(&Theorem::Th4));
    }

    #[test]
    fn equal_maps_coincide_everywhere() {
        let inst = random_instance(&InstanceGeneratorConfig::for_seed(3, 5)).unwrap();
        let f = inst.pair.f.clone();
        let same = FiniteInstance::new(inst.space.clone(), Pair::new(f.clone(), f)).unwrap();
        assert_eq!(brute_force_solutions(&same).coincidence_points.len(), same.space.len());
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = InstanceGeneratorConfig {
            carrier_size: 4,
            relation_density: rat(1, 2),
            metric: MetricKind::RandomTable,
            seed: 1,
        };
        let a = random_instance(&cfg).unwrap();
        let b = random_instance(&cfg).unwrap();
        assert_eq!(a.pair, b.pair);
        assert_eq!(a.space, b.space);
    }

    #[test]
    fn full_density_on_two_points_is_universal() {
        let cfg = InstanceGeneratorConfig {
            carrier_size: 2,
            relation_density: rat(1, 1),
            metric: MetricKind::Path,
            seed: 7,
        };
        assert_eq!(random_instance(&cfg).unwrap().space.relation(), &FiniteRelation::universal(2));
    }

    #[test]
    fn generated_spaces_pass_the_axioms() {
        for seed in 0..200 {
            let inst = random_instance(&InstanceGeneratorConfig::for_seed(seed, 8)).unwrap();
            assert!(crate::relspace::metric_axioms_check(&inst.space).passed(), "seed {seed}");
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        let mut cfg = InstanceGeneratorConfig::for_seed(0, 4);
        cfg.carrier_size = 9;
        assert_eq!(random_instance(&cfg).unwrap_err(), GeneratorError::Size(9));
        cfg.carrier_size = 3;
        cfg.relation_density = rat(0, 1);
        assert!(matches!(random_instance(&cfg), Err(GeneratorError::Density(_))));
    }

    #[test]
    fn small_fuzz_run_is_clean_and_reproducible() {
        let a = fuzz(0..64, 5);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a, fuzz(0..64, 5));
        assert_eq!(a.instances, 64);
    }

    #[test]
    fn characterizations_match_sequence_enumeration() {
        for seed in 0..60 {
            let inst = random_instance(&InstanceGeneratorConfig::for_seed(seed, 4)).unwrap();
            let n = inst.space.len();
            assert!(sequences::r_complete(&inst, n));
            assert_eq!(sequences::d_self_closed(&inst, None, n), Ok(()));
            assert_eq!(
                sequences::d_self_closed(&inst, Some(&inst.pair.g), n).is_ok(),
                d_self_closed_finite(inst.space.relation(), Some(&inst.pair.g)).is_ok(),
                "seed {seed}"
            );
            assert_eq!(
                sequences::r_compatible(&inst, n).is_ok(),
                r_compatible_finite(&inst).is_ok(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn profile_agrees_with_brute_force() {
        for seed in 0..200 {
            let inst = random_instance(&InstanceGeneratorConfig::for_seed(seed, 8)).unwrap();
            assert_eq!(coincidence_profile(&inst.pair), brute_force_solutions(&inst));
        }
    }
}
