//! Carriers, metrics and binary relations, plus the purely relational
//! predicates (closure, comparability, completeness, directedness).
//!
//! Two kinds of space are supported. A [`FiniteSpace`] has labelled points
//! indexed by [`PointId`], an explicit distance table and an explicit set of
//! related pairs. An [`IntervalSpace`] is a bounded rational interval with the
//! absolute-difference metric and a relation drawn from a small catalogue
//! ([`RelationDescriptor`]). No predicate assumes reflexivity, symmetry or
//! transitivity of the relation.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::region::{Cell, Interval, Region};
use crate::scalar::Scalar;

/// Index of a point in a finite carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("point {0} is not in a carrier of {1} points")]
    UnknownPoint(usize, usize),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("the carrier is empty")]
    EmptyCarrier,
    #[error("the distance table must be {expected}x{expected}, found a row of length {found}")]
    TableShape { expected: usize, found: usize },
    #[error("the distance table must have {expected} rows, found {found}")]
    TableRows { expected: usize, found: usize },
    #[error("the relation is empty")]
    EmptyRelation,
    #[error("the subspace Y is empty")]
    EmptySubspace,
    #[error("the subspace Y is not contained in the carrier (witness {0})")]
    SubspaceOutside(String),
    #[error("relation pair ({0}, {1}) lies outside the carrier")]
    PairOutside(String, String),
}

/// Membership of ordered pairs.
pub trait Relation<P> {
    fn contains(&self, u: &P, v: &P) -> bool;

    /// `[u,v] ∈ R`: either `(u,v)` or `(v,u)` is related.
    fn comparable(&self, u: &P, v: &P) -> bool {
        self.contains(u, v) || self.contains(v, u)
    }
}

/// A relation on `{0, ..., n-1}` stored as a dense boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: usize,
    bits: Vec<bool>,
}

impl FiniteRelation {
    pub fn empty(n: usize) -> Self {
        FiniteRelation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn universal(n: usize) -> Self {
        FiniteRelation {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, SpaceError> {
        let mut r = FiniteRelation::empty(n);
        for (u, v) in pairs {
            for x in [u, v] {
                if x >= n {
                    return Err(SpaceError::UnknownPoint(x, n));
                }
            }
            r.insert(PointId(u), PointId(v));
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, u: PointId, v: PointId) {
        self.bits[u.0 * self.n + v.0] = true;
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Related pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.bits[i])
            .map(|i| (PointId(i / self.n), PointId(i % self.n)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(u, v)| self.contains(&v, &u))
    }

    pub fn is_subset_of(&self, other: &FiniteRelation) -> bool {
        self.n == other.n && self.pairs().all(|(u, v)| other.contains(&u, &v))
    }

    /// `R|_D`: pairs with both ends in `d`.
    pub fn restrict(&self, d: &[PointId]) -> FiniteRelation {
        let keep: BTreeSet<PointId> = d.iter().copied().collect();
        let mut r = FiniteRelation::empty(self.n);
        for (u, v) in self.pairs() {
            if keep.contains(&u) && keep.contains(&v) {
                r.insert(u, v);
            }
        }
        r
    }

    fn check(&self, p: PointId) -> Result<(), SpaceError> {
        if p.0 < self.n {
            Ok(())
        } else {
            Err(SpaceError::UnknownPoint(p.0, self.n))
        }
    }
}

impl Relation<PointId> for FiniteRelation {
    fn contains(&self, u: &PointId, v: &PointId) -> bool {
        self.bits[u.0 * self.n + v.0]
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(u, v)| (u.0, v.0)))
            .finish()
    }
}

/// `S = R ∪ R⁻¹`.
pub fn symmetric_closure(r: &FiniteRelation) -> FiniteRelation {
    let mut s = r.clone();
    for (u, v) in r.pairs() {
        s.insert(v, u);
    }
    s
}

/// `[u,v] ∈ R`, with bounds checking.
pub fn comparable(r: &FiniteRelation, u: PointId, v: PointId) -> Result<bool, SpaceError> {
    r.check(u)?;
    r.check(v)?;
    Ok(r.comparable(&u, &v))
}

/// Whether every pair of `d` (diagonal included) is comparable. An empty `d`
/// is vacuously complete. On failure returns the first incomparable pair.
pub fn is_complete_relation<P: Clone, R: Relation<P> + ?Sized>(
    r: &R,
    d: &[P],
) -> Result<(), (P, P)> {
    for (i, u) in d.iter().enumerate() {
        for v in &d[i..] {
            if !r.comparable(u, v) {
                return Err((u.clone(), v.clone()));
            }
        }
    }
    Ok(())
}

/// Outcome of a directedness scan: the serving point for each pair, or the
/// first pair no candidate serves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directedness<P> {
    Directed(Vec<(P, P, P)>),
    Undirected(P, P),
}

impl<P> Directedness<P> {
    pub fn holds(&self) -> bool {
        matches!(self, Directedness::Directed(_))
    }
}

/// Whether `d` is `R`-directed (every `u, v ∈ d` have some `w` among
/// `candidates` with `(u,w), (v,w) ∈ R`), or `(g,R)`-directed when `g` is
/// given (the common successor is `g(w)`). Directed witnesses record `w`.
pub fn is_directed<P, R, G>(r: &R, d: &[P], candidates: &[P], g: Option<G>) -> Directedness<P>
where
    P: Clone,
    R: Relation<P> + ?Sized,
    G: Fn(&P) -> P,
{
    let targets: Vec<(P, P)> = candidates
        .iter()
        .map(|w| {
            let t = g.as_ref().map_or_else(|| w.clone(), |g| g(w));
            (w.clone(), t)
        })
        .collect();
    let mut served = Vec::new();
    for (i, u) in d.iter().enumerate() {
        for v in &d[i..] {
            match targets
                .iter()
                .find(|(_, t)| r.contains(u, t) && r.contains(v, t))
            {
                Some((w, _)) => served.push((u.clone(), v.clone(), w.clone())),
                None => return Directedness::Undirected(u.clone(), v.clone()),
            }
        }
    }
    Directedness::Directed(served)
}

/// A symmetric table of exact distances on a finite carrier.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    entries: Vec<BigRational>,
}

impl DistanceTable {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, SpaceError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(SpaceError::TableShape {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(DistanceTable { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: PointId, v: PointId) -> &BigRational {
        &self.entries[u.0 * self.n + v.0]
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }
}

impl fmt::Debug for DistanceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// One violated metric axiom with the points that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum AxiomViolation {
    /// `d(u,v) < 0`.
    Negative { u: String, v: String, distance: String },
    /// `d(u,u) ≠ 0`.
    NonzeroSelfDistance { u: String, distance: String },
    /// `d(u,v) = 0` for `u ≠ v`.
    ZeroSeparation { u: String, v: String },
    /// `d(u,v) ≠ d(v,u)`.
    Asymmetric { u: String, v: String, forward: String, backward: String },
    /// `d(u,v) > d(u,w) + d(w,v)`.
    Triangle { u: String, v: String, via: String, direct: String, detour: String },
}

/// Every axiom violation found; empty iff the checked set satisfies all axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub exhaustive: bool,
    pub points_checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite carrier with labels, a distance table, a relation and an optional
/// subspace `Y` (absent means `Y = X`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    metric: DistanceTable,
    relation: FiniteRelation,
    subspace: Option<Vec<PointId>>,
}

impl FiniteSpace {
    /// Checks shapes, label uniqueness, nonemptiness of the relation and of
    /// `Y`. Metric axioms are *not* checked here; see [`metric_axioms_check`].
    pub fn new(
        labels: Vec<String>,
        metric: DistanceTable,
        relation: FiniteRelation,
        subspace: Option<Vec<PointId>>,
    ) -> Result<Self, SpaceError> {
        let n = labels.len();
        if n == 0 {
            return Err(SpaceError::EmptyCarrier);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        if metric.size() != n {
            return Err(SpaceError::TableRows {
                expected: n,
                found: metric.size(),
            });
        }
        if relation.size() != n {
            return Err(SpaceError::UnknownPoint(relation.size().max(n), n));
        }
        if relation.is_empty() {
            return Err(SpaceError::EmptyRelation);
        }
        let subspace = match subspace {
            Some(mut y) => {
                if y.is_empty() {
                    return Err(SpaceError::EmptySubspace);
                }
                if let Some(p) = y.iter().find(|p| p.0 >= n) {
                    return Err(SpaceError::UnknownPoint(p.0, n));
                }
                y.sort();
                y.dedup();
                Some(y)
            }
            None => None,
        };
        Ok(FiniteSpace {
            labels,
            metric,
            relation,
            subspace,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + Clone {
        (0..self.labels.len()).map(PointId)
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<PointId> {
        self.labels.iter().position(|l| l == label).map(PointId)
    }

    pub fn distance(&self, u: PointId, v: PointId) -> &BigRational {
        self.metric.get(u, v)
    }

    pub fn metric(&self) -> &DistanceTable {
        &self.metric
    }

    pub fn relation(&self) -> &FiniteRelation {
        &self.relation
    }

    /// `Y`, defaulting to the whole carrier.
    pub fn subspace(&self) -> Vec<PointId> {
        self.subspace
            .clone()
            .unwrap_or_else(|| self.points().collect())
    }

    pub fn declared_subspace(&self) -> Option<&[PointId]> {
        self.subspace.as_deref()
    }

    pub fn with_relation(&self, relation: FiniteRelation) -> Result<FiniteSpace, SpaceError> {
        FiniteSpace::new(
            self.labels.clone(),
            self.metric.clone(),
            relation,
            self.subspace.clone(),
        )
    }
}

/// Exhaustive check of the metric axioms on a finite carrier. Triangle
/// violations are reported as `(u, v, via)` with `u < v`.
pub fn metric_axioms_check(space: &FiniteSpace) -> AxiomReport {
    let mut violations = Vec::new();
    let name = |p: PointId| space.label(p).to_string();
    let show = |d: &BigRational| crate::scalar::format_rational(d);
    for u in space.points() {
        let duu = space.distance(u, u);
        if !duu.is_zero() {
            violations.push(AxiomViolation::NonzeroSelfDistance {
                u: name(u),
                distance: show(duu),
            });
        }
        for v in space.points() {
            let d = space.distance(u, v);
            if d.is_negative() {
                violations.push(AxiomViolation::Negative {
                    u: name(u),
                    v: name(v),
                    distance: show(d),
                });
            }
            if u < v {
                let back = space.distance(v, u);
                if d != back {
                    violations.push(AxiomViolation::Asymmetric {
                        u: name(u),
                        v: name(v),
                        forward: show(d),
                        backward: show(back),
                    });
                }
                if d.is_zero() {
                    violations.push(AxiomViolation::ZeroSeparation { u: name(u), v: name(v) });
                }
                for w in space.points() {
                    let detour = space.distance(u, w) + space.distance(w, v);
                    if *d > detour {
                        violations.push(AxiomViolation::Triangle {
                            u: name(u),
                            v: name(v),
                            via: name(w),
                            direct: show(d),
                            detour: show(&detour),
                        });
                    }
                }
            }
        }
    }
    AxiomReport {
        exhaustive: true,
        points_checked: space.len(),
        violations,
    }
}

/// The closed catalogue of relations on interval carriers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "catalogue", rename_all = "kebab-case")]
pub enum RelationDescriptor {
    /// `{(x,y) : x ≥ y ≥ 0} ∪ {(x,y) : x ≤ y ≤ 0}`.
    SignCone,
    /// An explicit nonempty list of pairs.
    Explicit { pairs: Vec<(Scalar, Scalar)> },
    /// `X × X`.
    Universal,
    /// `R ∪ R⁻¹` of an inner descriptor.
    Symmetric { inner: Box<RelationDescriptor> },
}

impl RelationDescriptor {
    pub fn symmetric_closure(&self) -> RelationDescriptor {
        match self {
            RelationDescriptor::Universal | RelationDescriptor::Symmetric { .. } => self.clone(),
            RelationDescriptor::Explicit { pairs } => {
                let mut all: BTreeSet<(Scalar, Scalar)> = pairs.iter().cloned().collect();
                all.extend(pairs.iter().map(|(u, v)| (v.clone(), u.clone())));
                RelationDescriptor::Explicit {
                    pairs: all.into_iter().collect(),
                }
            }
            other => RelationDescriptor::Symmetric {
                inner: Box::new(other.clone()),
            },
        }
    }

    /// Points mentioned by an explicit list (the only possible partners of
    /// any point under such a relation).
    pub fn support(&self) -> Option<Vec<Scalar>> {
        match self {
            RelationDescriptor::Explicit { pairs } => {
                let mut pts: Vec<Scalar> = pairs
                    .iter()
                    .flat_map(|(u, v)| [u.clone(), v.clone()])
                    .collect();
                pts.sort();
                pts.dedup();
                Some(pts)
            }
            RelationDescriptor::Symmetric { inner } => inner.support(),
            _ => None,
        }
    }

    pub fn is_universal(&self) -> bool {
        match self {
            RelationDescriptor::Universal => true,
            RelationDescriptor::Symmetric { inner } => inner.is_universal(),
            _ => false,
        }
    }
}

impl Relation<Scalar> for RelationDescriptor {
    fn contains(&self, u: &Scalar, v: &Scalar) -> bool {
        match self {
            RelationDescriptor::SignCone => {
                let zero = Scalar::zero();
                (u >= v && *v >= zero) || (u <= v && *v <= zero)
            }
            RelationDescriptor::Explicit { pairs } => {
                pairs.iter().any(|(a, b)| a == u && b == v)
            }
            RelationDescriptor::Universal => true,
            RelationDescriptor::Symmetric { inner } => inner.comparable(u, v),
        }
    }
}

/// A bounded interval carrier with `d(x,y) = |x - y|`, a catalogue relation
/// and an optional subspace `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSpace {
    domain: Interval,
    relation: RelationDescriptor,
    subspace: Option<Region>,
}

impl IntervalSpace {
    pub fn new(
        domain: Interval,
        relation: RelationDescriptor,
        subspace: Option<Region>,
    ) -> Result<Self, SpaceError> {
        if let RelationDescriptor::Explicit { pairs } = &relation {
            if pairs.is_empty() {
                return Err(SpaceError::EmptyRelation);
            }
            if let Some((u, v)) = pairs
                .iter()
                .find(|(u, v)| !domain.contains(u) || !domain.contains(v))
            {
                return Err(SpaceError::PairOutside(u.to_string(), v.to_string()));
            }
        }
        if let Some(y) = &subspace {
            if y.is_empty() {
                return Err(SpaceError::EmptySubspace);
            }
            let carrier = Region::new(vec![Cell::all(domain.clone())]);
            if let Err(x) = y.subset_of(&carrier) {
                return Err(SpaceError::SubspaceOutside(x.to_string()));
            }
        }
        Ok(IntervalSpace {
            domain,
            relation,
            subspace,
        })
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn carrier(&self) -> Region {
        Region::new(vec![Cell::all(self.domain.clone())])
    }

    pub fn relation(&self) -> &RelationDescriptor {
        &self.relation
    }

    pub fn subspace(&self) -> Region {
        self.subspace.clone().unwrap_or_else(|| self.carrier())
    }

    pub fn declared_subspace(&self) -> Option<&Region> {
        self.subspace.as_ref()
    }

    pub fn distance(&self, u: &Scalar, v: &Scalar) -> Scalar {
        (u - v).abs()
    }
}

/// Spot-check of the absolute-difference metric on sample points.
pub fn interval_metric_axioms_check(space: &IntervalSpace, samples: &[Scalar]) -> AxiomReport {
    let mut violations = Vec::new();
    for u in samples {
        for v in samples {
            let d = space.distance(u, v);
            if d != space.distance(v, u) {
                violations.push(AxiomViolation::Asymmetric {
                    u: u.to_string(),
                    v: v.to_string(),
                    forward: d.to_string(),
                    backward: space.distance(v, u).to_string(),
                });
            }
            if u != v && d.is_zero() {
                violations.push(AxiomViolation::ZeroSeparation {
                    u: u.to_string(),
                    v: v.to_string(),
                });
            }
            for w in samples {
                let detour = &space.distance(u, w) + &space.distance(w, v);
                if d > detour {
                    violations.push(AxiomViolation::Triangle {
                        u: u.to_string(),
                        v: v.to_string(),
                        via: w.to_string(),
                        direct: d.to_string(),
                        detour: detour.to_string(),
                    });
                }
            }
        }
    }
    AxiomReport {
        exhaustive: false,
        points_checked: samples.len(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    /// R of the second worked example on labels 0..=3.
    fn example_relation() -> FiniteRelation {
        FiniteRelation::from_pairs(4, [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn abs_table(n: usize) -> DistanceTable {
        DistanceTable::from_rows(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| rat((i as i64 - j as i64).abs(), 1))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    fn space(rows: Vec<Vec<i64>>) -> FiniteSpace {
        let n = rows.len();
        let table = DistanceTable::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| rat(x, 1)).collect())
                .collect(),
        )
        .unwrap();
        FiniteSpace::new(
            (0..n).map(|i| i.to_string()).collect(),
            table,
            FiniteRelation::universal(n),
            None,
        )
        .unwrap()
    }

    #[test]
    fn closure_of_a_single_pair() {
        let r = FiniteRelation::from_pairs(3, [(1, 2)]).unwrap();
        let s = symmetric_closure(&r);
        assert_eq!(
            s.pairs().map(|(u, v)| (u.0, v.0)).collect::<Vec<_>>(),
            vec![(1, 2), (2, 1)]
        );
    }

    #[test]
    fn closure_of_the_worked_example() {
        let s = symmetric_closure(&example_relation());
        let expected = FiniteRelation::from_pairs(
            4,
            [(0, 0), (0, 1), (1, 0), (2, 3), (1, 1), (1, 2), (2, 1), (3, 2)],
        )
        .unwrap();
        assert_eq!(s, expected);
        assert_eq!(symmetric_closure(&s), s);
    }

    #[test]
    fn comparability_in_the_worked_example() {
        let r = example_relation();
        assert!(comparable(&r, PointId(0), PointId(1)).unwrap());
        assert!(comparable(&r, PointId(3), PointId(2)).unwrap());
        assert!(!comparable(&r, PointId(0), PointId(2)).unwrap());
        assert_eq!(
            comparable(&r, PointId(0), PointId(9)),
            Err(SpaceError::UnknownPoint(9, 4))
        );
    }

    #[test]
    fn completeness_includes_the_diagonal() {
        let r = example_relation();
        let s = symmetric_closure(&r);
        assert!(is_complete_relation(&s, &[PointId(0), PointId(1)]).is_ok());
        assert_eq!(
            is_complete_relation(&r, &[PointId(0), PointId(2)]),
            Err((PointId(0), PointId(2)))
        );
        // (2,2) is missing even though {2} has a single point
        assert_eq!(
            is_complete_relation(&r, &[PointId(2)]),
            Err((PointId(2), PointId(2)))
        );
        let empty: [PointId; 0] = [];
        assert!(is_complete_relation(&r, &empty).is_ok());
        assert!(is_complete_relation(&FiniteRelation::universal(4), &[PointId(1), PointId(3)]).is_ok());
    }

    #[test]
    fn directedness_with_and_without_g() {
        let s = symmetric_closure(&example_relation());
        let all: Vec<PointId> = (0..4).map(PointId).collect();
        // g = identity on {0,1,2}, 3 elsewhere (finite analogue of the example)
        let g = |p: &PointId| if p.0 <= 2 { *p } else { PointId(3) };
        let d = [PointId(0), PointId(1)];
        match is_directed(&s, &d, &all, Some(g)) {
            Directedness::Directed(w) => assert!(w.iter().all(|(_, _, w)| *w == PointId(1) || *w == PointId(0))),
            other => panic!("{other:?}"),
        }
        let empty: [PointId; 0] = [];
        assert!(is_directed(&s, &empty, &all, None::<fn(&PointId) -> PointId>).holds());
        assert_eq!(
            is_directed(&s, &[PointId(0), PointId(3)], &all, None::<fn(&PointId) -> PointId>),
            Directedness::Undirected(PointId(0), PointId(3))
        );
    }

    #[test]
    fn cone_relation_matches_its_definition() {
        let cone = RelationDescriptor::SignCone;
        let s = |t: &str| t.parse::<Scalar>().unwrap();
        assert!(cone.contains(&s("0"), &s("0")));
        assert!(cone.contains(&s("2"), &s("1")));
        assert!(!cone.contains(&s("1"), &s("2")));
        assert!(cone.contains(&s("-1"), &s("-1/2")));
        assert!(!cone.contains(&s("1"), &s("-1")));
        assert!(!cone.is_universal());
        let sym = cone.symmetric_closure();
        assert!(sym.contains(&s("1"), &s("2")));
        assert!(!sym.contains(&s("1"), &s("-2")));
        assert_eq!(sym.symmetric_closure(), sym);
    }

    #[test]
    fn absolute_difference_table_passes() {
        let sp = FiniteSpace::new(
            (0..4).map(|i| i.to_string()).collect(),
            abs_table(4),
            example_relation(),
            None,
        )
        .unwrap();
        assert!(metric_axioms_check(&sp).passed());
    }

    #[test]
    fn asymmetric_table_is_reported() {
        let report = metric_axioms_check(&space(vec![vec![0, 1], vec![2, 0]]));
        assert_eq!(
            report.violations,
            vec![AxiomViolation::Asymmetric {
                u: "0".into(),
                v: "1".into(),
                forward: "1".into(),
                backward: "2".into()
            }]
        );
    }

    #[test]
    fn triangle_violation_is_reported() {
        let report = metric_axioms_check(&space(vec![
            vec![0, 1, 5],
            vec![1, 0, 1],
            vec![5, 1, 0],
        ]));
        assert_eq!(
            report.violations,
            vec![AxiomViolation::Triangle {
                u: "0".into(),
                v: "2".into(),
                via: "1".into(),
                direct: "5".into(),
                detour: "2".into()
            }]
        );
    }

    #[test]
    fn empty_relation_and_subspace_are_rejected() {
        let err = FiniteSpace::new(vec!["a".into()], abs_table(1), FiniteRelation::empty(1), None);
        assert_eq!(err, Err(SpaceError::EmptyRelation));
        let err = FiniteSpace::new(
            vec!["a".into()],
            abs_table(1),
            FiniteRelation::universal(1),
            Some(vec![]),
        );
        assert_eq!(err, Err(SpaceError::EmptySubspace));
    }

    fn arb_relation() -> impl Strategy<Value = FiniteRelation> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n)
                .prop_map(move |bits| FiniteRelation { n, bits })
        })
    }

    proptest! {
        #[test]
        fn comparability_is_membership_in_the_closure(r in arb_relation()) {
            let s = symmetric_closure(&r);
            for u in 0..r.size() {
                for v in 0..r.size() {
                    let (u, v) = (PointId(u), PointId(v));
                    prop_assert_eq!(r.comparable(&u, &v), s.contains(&u, &v));
                }
            }
        }

        #[test]
        fn closure_is_idempotent_and_monotone(r in arb_relation(), extra in any::<u64>()) {
            let s = symmetric_closure(&r);
            prop_assert!(s.is_symmetric());
            prop_assert!(r.is_subset_of(&s));
            prop_assert_eq!(symmetric_closure(&s), s.clone());
            let mut bigger = r.clone();
            let n = r.size();
            bigger.insert(PointId((extra as usize) % n), PointId((extra as usize / 7) % n));
            prop_assert!(s.is_subset_of(&symmetric_closure(&bigger)));
        }

        #[test]
        fn complete_and_reflexive_sets_are_directed(r in arb_relation(), mask in any::<u8>()) {
            let n = r.size();
            let d: Vec<PointId> = (0..n).filter(|i| mask & (1 << i) != 0).map(PointId).collect();
            let reflexive_on_d = d.iter().all(|p| r.contains(p, p));
            if is_complete_relation(&r, &d).is_ok() && reflexive_on_d {
                let all: Vec<PointId> = (0..n).map(PointId).collect();
                let s = symmetric_closure(&r);
                prop_assert!(is_directed(&s, &d, &all, None::<fn(&PointId) -> PointId>).holds());
            }
        }
    }
}
