//! Per-hypothesis decision procedures and theorem-level reports.
//!
//! Finite carriers make the sequence-quantified definitions decidable:
//! convergent sequences are eventually constant, so
//! - every `R`-preserving Cauchy sequence converges (`R`-completeness holds);
//! - `R` is `d`-self-closed, and `(g,d)`-self-closed iff `(u,u) ∈ R` implies
//!   `(gu,gu) ∈ R`;
//! - `(f,g)` is `R`-compatible iff every point of coincidence `v` with
//!   `(v,v) ∈ R` has `fv = gv`.
//!
//! Interval instances never receive a plain "holds" for these; they are
//! trivially true in the cases noted below, externally asserted by the
//! caller, or undecidable.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::contraction::{check_contraction_over, ContractionCondition, ContractionVerdict, Variant};
use crate::instance::{FiniteInstance, IntervalInstance, Rep, Setting};
use crate::mappings::{is_fg_closed, CoincidenceProfile, Closedness, FiniteMap, PiecewiseMap};
use crate::region::{NumberClass, Region};
use crate::relspace::{is_complete_relation, is_directed, Directedness, FiniteRelation, PointId, Relation, RelationDescriptor};
use crate::scalar::Scalar;
use crate::solver::{find_starting_point, picard_jungck, IterationTrace, SolverConfig};

/// Samples per atom for non-exhaustive interval scans.
pub const SAMPLE_DENSITY: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Th1,
    Th2,
    Th3,
    Th4,
    Cor0,
    Cor2,
    Cor5,
    Cor6,
    Cor8,
    Cor9,
    Cor10,
}

impl Theorem {
    pub const ALL: [Theorem; 11] = [
        Theorem::Th1,
        Theorem::Th2,
        Theorem::Th3,
        Theorem::Th4,
        Theorem::Cor0,
        Theorem::Cor2,
        Theorem::Cor5,
        Theorem::Cor6,
        Theorem::Cor8,
        Theorem::Cor9,
        Theorem::Cor10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Th1 => "th1",
            Theorem::Th2 => "th2",
            Theorem::Th3 => "th3",
            Theorem::Th4 => "th4",
            Theorem::Cor0 => "cor0",
            Theorem::Cor2 => "cor2",
            Theorem::Cor5 => "cor5",
            Theorem::Cor6 => "cor6",
            Theorem::Cor8 => "cor8",
            Theorem::Cor9 => "cor9",
            Theorem::Cor10 => "cor10",
        }
    }

    /// The hypothesis labels, in report order. The contraction label is the
    /// one the theorem states.
    pub fn hypotheses(self) -> Vec<&'static str> {
        let existence = |c: &'static str| vec!["(f)", "(g)", "(h)", "(i)", "(k1)", "(k2)", "(l1)", "(l2)", "(l3)", c];
        let with = |mut v: Vec<&'static str>, extra: &[&'static str]| {
            v.extend_from_slice(extra);
            v
        };
        match self {
            Theorem::Th1 => existence("(m)"),
            Theorem::Cor2 => existence("(q)"),
            Theorem::Th2 => with(existence("(q)"), &["(r)", "(wc)"]),
            Theorem::Th3 => with(existence("(q)"), &["(r)", "(s)"]),
            Theorem::Th4 => with(existence("(m)"), &["(t)", "(wc)"]),
            Theorem::Cor0 => vec!["(h)", "(i)", "(m)", "(n)", "(o)", "(p)", "(k2)", "(l1)", "(l2)", "(l3)"],
            Theorem::Cor5 => with(existence("(q1)"), &["(r)", "(wc)"]),
            Theorem::Cor6 => with(existence("(q2)"), &["(r)", "(wc)"]),
            Theorem::Cor8 => with(existence("(q3)"), &["(r)", "(wc)"]),
            Theorem::Cor9 => with(existence("(q4)"), &["(r)", "(wc)"]),
            Theorem::Cor10 => vec!["(A)", "(B)", "(wc)"],
        }
    }

    /// The claims the theorem makes and the extra labels each needs beyond
    /// the existence hypotheses.
    pub fn claims(self) -> Vec<(Claim, Vec<&'static str>)> {
        use Claim::*;
        match self {
            Theorem::Th1 | Theorem::Cor0 | Theorem::Cor2 => vec![(CoincidenceExists, vec![])],
            Theorem::Th2 | Theorem::Cor5 | Theorem::Cor6 | Theorem::Cor8 | Theorem::Cor9 => vec![
                (CoincidenceExists, vec![]),
                (UniquePointOfCoincidence, vec!["(r)"]),
                (UniqueCommonFixedPoint, vec!["(r)", "(wc)"]),
            ],
            Theorem::Th3 => vec![
                (CoincidenceExists, vec![]),
                (UniqueCoincidencePoint, vec!["(r)", "(s)"]),
            ],
            Theorem::Th4 => vec![
                (CoincidenceExists, vec![]),
                (UniquePointOfCoincidence, vec!["(t)"]),
                (UniqueCommonFixedPoint, vec!["(t)", "(wc)"]),
            ],
            Theorem::Cor10 => vec![
                (CoincidenceExists, vec![]),
                (UniquePointOfCoincidence, vec![]),
                (UniqueCommonFixedPoint, vec!["(wc)"]),
            ],
        }
    }

    /// Labels that are extras over the existence part of the theorem.
    fn uniqueness_labels(self) -> &'static [&'static str] {
        match self {
            Theorem::Th2 | Theorem::Cor5 | Theorem::Cor6 | Theorem::Cor8 | Theorem::Cor9 => &["(r)", "(wc)"],
            Theorem::Th3 => &["(r)", "(s)"],
            Theorem::Th4 => &["(t)", "(wc)"],
            Theorem::Cor10 => &["(wc)"],
            _ => &[],
        }
    }

    /// Brings a condition in line with the variant the theorem states:
    /// `(m)` is read as `(q)` with the same `φ` where `(q)` is required, and
    /// `(m)`/`(q)` as `(B)` for the universal-relation corollary. Any
    /// variant implies `(m)`, so theorems stated with `(m)` take all but `(B)`.
    pub fn adapt(self, cond: &ContractionCondition) -> Result<ContractionCondition, CertifierError> {
        let v = cond.variant();
        let mismatch = || CertifierError::VariantMismatch {
            theorem: self.name(),
            variant: v.label(),
        };
        let requires_n = |c: &ContractionCondition| match c.variant() {
            Variant::M => Ok(ContractionCondition::with_phi(Variant::N, c.phi().cloned().expect("validated"))),
            Variant::UniversalN => Err(mismatch()),
            _ => Ok(c.clone()),
        };
        match self {
            Theorem::Th1 | Theorem::Th4 | Theorem::Cor0 => match v {
                Variant::UniversalN => Err(mismatch()),
                _ => Ok(cond.clone()),
            },
            Theorem::Cor2 | Theorem::Th2 | Theorem::Th3 => requires_n(cond),
            Theorem::Cor5 => matches!(v, Variant::ScaledN { .. }).then(|| cond.clone()).ok_or_else(mismatch),
            Theorem::Cor6 => matches!(v, Variant::HardyRogers { .. }).then(|| cond.clone()).ok_or_else(mismatch),
            Theorem::Cor8 => matches!(v, Variant::Kannan { .. }).then(|| cond.clone()).ok_or_else(mismatch),
            Theorem::Cor9 => matches!(v, Variant::Chatterjea { .. }).then(|| cond.clone()).ok_or_else(mismatch),
            Theorem::Cor10 => match v {
                Variant::M | Variant::N | Variant::UniversalN => Ok(ContractionCondition::with_phi(
                    Variant::UniversalN,
                    cond.phi().cloned().expect("validated"),
                )),
                _ => Err(mismatch()),
            },
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = CertifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| CertifierError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    CoincidenceExists,
    UniquePointOfCoincidence,
    UniqueCoincidencePoint,
    UniqueCommonFixedPoint,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::CoincidenceExists => "a coincidence point exists",
            Claim::UniquePointOfCoincidence => "the point of coincidence is unique",
            Claim::UniqueCoincidencePoint => "the coincidence point is unique",
            Claim::UniqueCommonFixedPoint => "there is exactly one common fixed point",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifierError {
    #[error("unknown theorem `{0}` (expected one of th1, th2, th3, th4, cor0, cor2, cor5, cor6, cor8, cor9, cor10)")]
    UnknownTheorem(String),
    #[error("{theorem} cannot be checked with contraction variant {variant}")]
    VariantMismatch { theorem: &'static str, variant: &'static str },
}

/// The verdict on one hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<P> {
    /// Decided by an exhaustive scan.
    Holds,
    /// Fails, with the points that witness it.
    Fails(Vec<Rep<P>>),
    /// No counterexample among this many sampled cases.
    HoldsOnSamples(usize),
    /// Follows from the structure of the instance; the reason says how.
    TriviallyHolds(String),
    /// Declared by the caller, not checked.
    ExternallyAsserted { holds: bool },
    Undecidable(String),
}

impl<P> Verdict<P> {
    pub fn passes(&self) -> bool {
        matches!(
            self,
            Verdict::Holds
                | Verdict::TriviallyHolds(_)
                | Verdict::HoldsOnSamples(_)
                | Verdict::ExternallyAsserted { holds: true }
        )
    }

    /// Passes without relying on samples or declarations.
    pub fn is_exact_pass(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::TriviallyHolds(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails(_) => "fails",
            Verdict::HoldsOnSamples(_) => "holds-on-samples",
            Verdict::TriviallyHolds(_) => "trivially-holds",
            Verdict::ExternallyAsserted { holds: true } => "externally-asserted",
            Verdict::ExternallyAsserted { holds: false } => "externally-asserted-fails",
            Verdict::Undecidable(_) => "undecidable",
        }
    }
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry<P> {
    pub label: &'static str,
    pub verdict: Verdict<P>,
    pub detail: Option<String>,
}

impl<P> Entry<P> {
    fn new(label: &'static str, verdict: Verdict<P>) -> Self {
        Entry {
            label,
            verdict,
            detail: None,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

pub fn describe(label: &str) -> &'static str {
    match label {
        "(f)" => "(Y,d) is R-complete",
        "(g)" => "f(X) ⊆ Y ∩ g(X)",
        "(h)" => "some w0 has (gw0, fw0) ∈ R",
        "(i)" => "R is (f,g)-closed",
        "(k1)" => "Y ⊆ g(X)",
        "(k2)" => "f is (g,R)-continuous, or f and g are continuous, or R|Y is d-self-closed",
        "(l1)" => "(f,g) is R-compatible",
        "(l2)" => "g is R-continuous",
        "(l3)" => "f is R-continuous or R is (g,d)-self-closed",
        "(m)" => "d(fu,fv) ≤ φ(M_f(gu,gv)) whenever (gu,gv) ∈ R",
        "(q)" => "d(fu,fv) ≤ φ(N_f(gu,gv)) whenever (gu,gv) ∈ R",
        "(j)" => "d(fu,fv) ≤ α·d(gu,gv) whenever (gu,gv) ∈ R",
        "(q1)" => "d(fu,fv) ≤ k·N_f(gu,gv) whenever (gu,gv) ∈ R",
        "(q2)" => "d(fu,fv) ≤ a·d(gu,gv) + b[d(gu,fu)+d(gv,fv)] + c[d(gu,fv)+d(gv,fu)] whenever (gu,gv) ∈ R",
        "(q3)" => "d(fu,fv) ≤ k[d(gu,fu)+d(gv,fv)] whenever (gu,gv) ∈ R",
        "(q4)" => "d(fu,fv) ≤ k[d(gu,fv)+d(gv,fu)] whenever (gu,gv) ∈ R",
        "(B)" => "d(fu,fv) ≤ φ(N_f(gu,gv)) for all u, v",
        "(n)" => "(X,d) is R-complete",
        "(o)" => "f(X) ⊆ g(X)",
        "(p)" => "g is onto",
        "(r)" => "f(X) is (g,R^s)-directed",
        "(s)" => "f or g is one-to-one",
        "(t)" => "R restricted to f(X) is complete",
        "(A)" => "(Y,d) is complete for some f(X) ⊆ Y ⊆ g(X)",
        "(wc)" => "(f,g) commute at their coincidence points",
        _ => "",
    }
}

/// Caller declarations for hypotheses that cannot be decided, keyed by label.
pub type Assertions = BTreeMap<String, bool>;

/// The instance-kind-specific decision procedures.
pub trait Certifiable: Setting {
    /// `(Y,d)` is `R`-complete (`(f)`), or `(X,d)` is (`(n)`, `whole`).
    fn r_complete(&self, whole: bool) -> Verdict<Self::Point>;
    /// `(Y,d)` is complete (`(A)`), independent of the relation.
    fn y_complete(&self) -> Verdict<Self::Point>;
    /// `f(X) ⊆ Y ∩ g(X)`.
    fn images_in_y_and_g(&self) -> Verdict<Self::Point>;
    /// `Y ⊆ g(X)`, or `X ⊆ g(X)` when `whole`.
    fn y_in_g_image(&self, whole: bool) -> Verdict<Self::Point>;
    /// `f(X) ⊆ Y ⊆ g(X)`.
    fn y_between_images(&self) -> Verdict<Self::Point>;
    /// `f(X) ⊆ g(X)`.
    fn f_image_in_g_image(&self) -> Verdict<Self::Point>;
    fn k2(&self) -> (Verdict<Self::Point>, Option<String>);
    fn l1(&self) -> Verdict<Self::Point>;
    fn l2(&self) -> Verdict<Self::Point>;
    fn l3(&self) -> Verdict<Self::Point>;
    /// `f` or `g` one-to-one.
    fn one_to_one(&self) -> Verdict<Self::Point>;
    /// Oracle cross-check of the coincidence profile, where available.
    fn oracle_agreement(&self, profile: &CoincidenceProfile<Self::Point>) -> Option<bool>;
}

/// Exact on finite carriers: an `R`-preserving Cauchy sequence in a finite
/// metric space is eventually constant, hence convergent.
pub fn r_complete_finite() -> Verdict<PointId> {
    Verdict::TriviallyHolds(
        "finite carrier: every Cauchy sequence is eventually constant, hence convergent".into(),
    )
}

/// `d`-self-closedness (no `g`) or `(g,d)`-self-closedness of `R` on a
/// finite carrier. A convergent `R`-preserving sequence is eventually the
/// constant `u` with `(u,u) ∈ R`; with `g` the subsequence needs
/// `[gu,gu] ∈ R`. Fails with the first such `u` lacking `(gu,gu) ∈ R`.
pub fn d_self_closed_finite(r: &FiniteRelation, g: Option<&FiniteMap>) -> Result<(), PointId> {
    let Some(g) = g else { return Ok(()) };
    (0..r.size())
        .map(PointId)
        .find(|u| r.contains(u, u) && !r.contains(&g.apply(*u), &g.apply(*u)))
        .map_or(Ok(()), Err)
}

/// `R`-compatibility on a finite carrier: admissible sequences have
/// `fu_n = gu_n = v` eventually with `(v,v) ∈ R`, so the limit of
/// `d(g(fu_n), f(gu_n))` is `d(gv, fv)`. Fails with the first such `v`
/// where `fv ≠ gv`.
pub fn r_compatible_finite(inst: &FiniteInstance) -> Result<(), PointId> {
    let r = inst.space.relation();
    let profile = crate::mappings::coincidence_profile(&inst.pair);
    profile
        .points_of_coincidence
        .into_iter()
        .find(|v| r.contains(v, v) && inst.pair.f.apply(*v) != inst.pair.g.apply(*v))
        .map_or(Ok(()), Err)
}

fn finite_subset(
    inst: &FiniteInstance,
    sub: &[PointId],
    sup: impl Fn(PointId) -> bool,
) -> Verdict<PointId> {
    match sub.iter().find(|&&p| !sup(p)) {
        Some(&p) => Verdict::Fails(vec![inst.rep(p)]),
        None => Verdict::Holds,
    }
}

impl Certifiable for FiniteInstance {
    fn r_complete(&self, _whole: bool) -> Verdict<PointId> {
        r_complete_finite()
    }

    fn y_complete(&self) -> Verdict<PointId> {
        Verdict::TriviallyHolds("finite subspace: every Cauchy sequence is eventually constant".into())
    }

    fn images_in_y_and_g(&self) -> Verdict<PointId> {
        let y = self.space.subspace();
        let g_img = self.g_image();
        finite_subset(self, &self.pair.f.image(), |p| y.contains(&p) && g_img.contains(&p))
    }

    fn y_in_g_image(&self, whole: bool) -> Verdict<PointId> {
        let g_img = self.g_image();
        let y: Vec<PointId> = if whole { self.space.points().collect() } else { self.space.subspace() };
        finite_subset(self, &y, |p| g_img.contains(&p))
    }

    fn y_between_images(&self) -> Verdict<PointId> {
        match self.images_in_y_and_g() {
            Verdict::Holds => self.y_in_g_image(false),
            other => other,
        }
    }

    fn f_image_in_g_image(&self) -> Verdict<PointId> {
        let g_img = self.g_image();
        finite_subset(self, &self.pair.f.image(), |p| g_img.contains(&p))
    }

    fn k2(&self) -> (Verdict<PointId>, Option<String>) {
        (
            Verdict::TriviallyHolds(
                "finite carrier: convergent sequences are eventually constant, so f and g are continuous".into(),
            ),
            None,
        )
    }

    fn l1(&self) -> Verdict<PointId> {
        match r_compatible_finite(self) {
            Ok(()) => Verdict::Holds,
            Err(v) => Verdict::Fails(vec![self.rep(v)]),
        }
    }

    fn l2(&self) -> Verdict<PointId> {
        Verdict::TriviallyHolds("finite carrier: every map is R-continuous".into())
    }

    fn l3(&self) -> Verdict<PointId> {
        Verdict::TriviallyHolds("finite carrier: every map is R-continuous".into())
    }

    fn one_to_one(&self) -> Verdict<PointId> {
        match (self.pair.f.is_injective(), self.pair.g.is_injective()) {
            (Ok(()), _) | (_, Ok(())) => Verdict::Holds,
            (Err((a, b)), Err((c, d))) => {
                Verdict::Fails(vec![self.rep(a), self.rep(b), self.rep(c), self.rep(d)])
            }
        }
    }

    fn oracle_agreement(&self, profile: &CoincidenceProfile<PointId>) -> Option<bool> {
        Some(crate::oracle::brute_force_solutions(self) == *profile)
    }
}

fn region_subset(inst: &IntervalInstance, sub: &Region, sup: &Region) -> Verdict<Scalar> {
    match sub.subset_of(sup) {
        Ok(()) => Verdict::Holds,
        Err(x) => Verdict::Fails(vec![inst.rep(x)]),
    }
}

/// Closed bounded cells over all reals are complete.
fn closed_bounded(region: &Region) -> bool {
    region
        .cells
        .iter()
        .all(|c| c.class == NumberClass::Any && c.interval.lo.closed && c.interval.hi.closed)
}

fn finitely_supported(r: &RelationDescriptor) -> bool {
    r.support().is_some()
}

impl IntervalInstance {
    fn asserted_or(&self, label: &str, assertions: &Assertions, reason: &str) -> Verdict<Scalar> {
        match assertions.get(label) {
            Some(&holds) => Verdict::ExternallyAsserted { holds },
            None => Verdict::Undecidable(reason.into()),
        }
    }
}

/// Interval instances with the caller's declarations attached.
pub struct Declared<'a> {
    pub instance: &'a IntervalInstance,
    pub assertions: &'a Assertions,
}

impl Setting for Declared<'_> {
    type Point = Scalar;

    fn f(&self, u: &Scalar) -> Scalar {
        self.instance.f(u)
    }
    fn g(&self, u: &Scalar) -> Scalar {
        self.instance.g(u)
    }
    fn distance(&self, u: &Scalar, v: &Scalar) -> Scalar {
        self.instance.distance(u, v)
    }
    fn related(&self, u: &Scalar, v: &Scalar) -> bool {
        self.instance.related(u, v)
    }
    fn rep(&self, p: Scalar) -> Rep<Scalar> {
        self.instance.rep(p)
    }
    fn quantifier(&self, density: usize) -> crate::instance::Quantifier<Scalar> {
        self.instance.quantifier(density)
    }
    fn f_constant(&self) -> Option<Scalar> {
        self.instance.f_constant()
    }
    fn g_preimage(&self, y: &Scalar) -> Option<Scalar> {
        self.instance.g_preimage(y)
    }
    fn coincidence_profile(&self) -> Result<CoincidenceProfile<Scalar>, crate::mappings::MappingError> {
        self.instance.coincidence_profile()
    }
    fn f_image_points(&self) -> Option<Vec<Scalar>> {
        self.instance.f_image_points()
    }
    fn start_candidates(&self) -> Vec<Scalar> {
        self.instance.start_candidates()
    }
    fn is_finite(&self) -> bool {
        false
    }
}

impl Certifiable for Declared<'_> {
    fn r_complete(&self, whole: bool) -> Verdict<Scalar> {
        let inst = self.instance;
        let region = if whole { inst.space.carrier() } else { inst.space.subspace() };
        if region.finite_points().is_some() {
            return Verdict::TriviallyHolds("finite subspace: every Cauchy sequence is eventually constant".into());
        }
        if finitely_supported(inst.space.relation()) {
            return Verdict::TriviallyHolds(
                "R lists finitely many pairs: R-preserving sequences take finitely many values, \
                 so Cauchy ones are eventually constant"
                    .into(),
            );
        }
        if closed_bounded(&region) {
            return Verdict::TriviallyHolds("closed bounded interval: complete, hence R-complete".into());
        }
        let label = if whole { "(n)" } else { "(f)" };
        inst.asserted_or(label, self.assertions, "R-completeness of a non-closed interval is not decided")
    }

    fn y_complete(&self) -> Verdict<Scalar> {
        let y = self.instance.space.subspace();
        if y.finite_points().is_some() || closed_bounded(&y) {
            return Verdict::TriviallyHolds("finite or closed bounded subspace".into());
        }
        self.instance
            .asserted_or("(A)", self.assertions, "completeness of a non-closed interval is not decided")
    }

    fn images_in_y_and_g(&self) -> Verdict<Scalar> {
        let inst = self.instance;
        region_subset(inst, &inst.f_image(), &inst.space.subspace().intersect(&inst.g_image()))
    }

    fn y_in_g_image(&self, whole: bool) -> Verdict<Scalar> {
        let inst = self.instance;
        let y = if whole { inst.space.carrier() } else { inst.space.subspace() };
        region_subset(inst, &y, &inst.g_image())
    }

    fn y_between_images(&self) -> Verdict<Scalar> {
        match self.images_in_y_and_g() {
            Verdict::Holds => self.y_in_g_image(false),
            other => other,
        }
    }

    fn f_image_in_g_image(&self) -> Verdict<Scalar> {
        let inst = self.instance;
        region_subset(inst, &inst.f_image(), &inst.g_image())
    }

    fn k2(&self) -> (Verdict<Scalar>, Option<String>) {
        let inst = self.instance;
        if inst.f_constant().is_some() {
            return (
                Verdict::TriviallyHolds("f is constant, hence (g,R)-continuous".into()),
                Some("branch: f is (g,R)-continuous".into()),
            );
        }
        if inst.space.subspace().finite_points().is_some() || finitely_supported(inst.space.relation()) {
            return (
                Verdict::TriviallyHolds(
                    "R-preserving sequences in Y take finitely many values: a convergent one is eventually \
                     the constant u with (u,u) ∈ R"
                        .into(),
                ),
                Some("branch: R|Y is d-self-closed".into()),
            );
        }
        (inst.asserted_or("(k2)", self.assertions, "continuity is not decided on interval carriers"), None)
    }

    fn l1(&self) -> Verdict<Scalar> {
        self.instance
            .asserted_or("(l1)", self.assertions, "R-compatibility is not decided on interval carriers")
    }

    fn l2(&self) -> Verdict<Scalar> {
        if piecewise_constant(&self.instance.pair.g) {
            return Verdict::TriviallyHolds("g is constant".into());
        }
        self.instance
            .asserted_or("(l2)", self.assertions, "R-continuity is not decided on interval carriers")
    }

    fn l3(&self) -> Verdict<Scalar> {
        if self.instance.f_constant().is_some() {
            return Verdict::TriviallyHolds("f is constant, hence R-continuous".into());
        }
        self.instance
            .asserted_or("(l3)", self.assertions, "R-continuity is not decided on interval carriers")
    }

    fn one_to_one(&self) -> Verdict<Scalar> {
        let inst = self.instance;
        let carrier = inst.space.carrier();
        match (injective(&inst.pair.f, &carrier), injective(&inst.pair.g, &carrier)) {
            (Ok(()), _) | (_, Ok(())) => Verdict::Holds,
            (Err((a, b)), Err((c, d))) => Verdict::Fails(
                [a, b, c, d].into_iter().map(|x| inst.rep(x)).collect(),
            ),
        }
    }

    fn oracle_agreement(&self, _profile: &CoincidenceProfile<Scalar>) -> Option<bool> {
        None
    }
}

fn piecewise_constant(m: &PiecewiseMap) -> bool {
    m.constant_value().is_some()
}

/// Injectivity of a piecewise-affine map on `carrier`: every piece is
/// injective and piece images are pairwise disjoint. Fails with two points
/// sharing an image.
pub fn injective(m: &PiecewiseMap, carrier: &Region) -> Result<(), (Scalar, Scalar)> {
    let pieces: Vec<crate::mappings::Piece> = m
        .pieces()
        .iter()
        .flat_map(|p| {
            Region::new(vec![p.cell.clone()])
                .intersect(carrier)
                .cells
                .into_iter()
                .map(move |cell| crate::mappings::Piece { cell, ..p.clone() })
        })
        .collect();
    for p in &pieces {
        if p.cell.as_point().is_none() && p.slope == num_rational::BigRational::from_integer(0.into()) {
            let s = p.cell.samples(2);
            return Err((s[0].clone(), s[1].clone()));
        }
    }
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            let (ra, rb) = (Region::new(vec![a.image()]), Region::new(vec![b.image()]));
            if let Some(y) = ra.common_point(&rb) {
                let back = |p: &crate::mappings::Piece| match p.cell.as_point() {
                    Some(x) => x,
                    None => (&y - &Scalar::from_rational(p.intercept.clone())).div_rational(&p.slope),
                };
                return Err((back(a), back(b)));
            }
        }
    }
    Ok(())
}

/// What the theorem concludes, computed independently of the hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conclusion<P> {
    pub profile: Result<CoincidenceProfile<P>, String>,
    pub start: Option<P>,
    pub trace: Option<IterationTrace<P>>,
    pub oracle_agreement: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every hypothesis decided exactly.
    Certified,
    /// Every hypothesis passes, some by sampling or declaration.
    ConditionallyCertified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimStatus {
    pub claim: Claim,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport<P> {
    pub theorem: Theorem,
    /// The condition as checked, after [`Theorem::adapt`].
    pub condition: String,
    pub entries: Vec<Entry<P>>,
    pub claims: Vec<ClaimStatus>,
    pub status: Status,
    pub conclusion: Conclusion<P>,
}

impl<P> HypothesisReport<P> {
    pub fn entry(&self, label: &str) -> Option<&Entry<P>> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn claim(&self, claim: Claim) -> Option<Status> {
        self.claims.iter().find(|c| c.claim == claim).map(|c| c.status)
    }

    /// Whether `claim` holds at least conditionally.
    pub fn supports(&self, claim: Claim) -> bool {
        matches!(
            self.claim(claim),
            Some(Status::Certified | Status::ConditionallyCertified)
        )
    }
}

/// Status of a set of labels, where `(k1 ∧ k2)` and `(l1 ∧ l2 ∧ l3)` (or,
/// for cor0, `(p ∧ k2)` and the `l` block) are alternatives.
fn status_of<P>(entries: &[Entry<P>], labels: &[&str]) -> Status {
    let get = |l: &str| entries.iter().find(|e| e.label == l).map(|e| &e.verdict);
    let grade = |ls: &[&str]| -> Status {
        let mut status = Status::Certified;
        for l in ls {
            match get(l) {
                Some(v) if v.is_exact_pass() => {}
                Some(v) if v.passes() => status = Status::ConditionallyCertified,
                Some(_) => return Status::NotCertified,
                None => {}
            }
        }
        status
    };
    let alternatives = ["(k1)", "(k2)", "(l1)", "(l2)", "(l3)", "(p)"];
    let plain: Vec<&str> = labels.iter().copied().filter(|l| !alternatives.contains(l)).collect();
    let base = grade(&plain);
    let has = |l: &str| labels.contains(&l);
    let k_branch: Vec<&str> = ["(k1)", "(k2)", "(p)"].into_iter().filter(|l| has(l)).collect();
    let l_branch: Vec<&str> = ["(l1)", "(l2)", "(l3)"].into_iter().filter(|l| has(l)).collect();
    let branch = if k_branch.is_empty() && l_branch.is_empty() {
        Status::Certified
    } else {
        best(grade(&k_branch), grade(&l_branch))
    };
    worst(base, branch)
}

fn rank(s: Status) -> u8 {
    match s {
        Status::Certified => 2,
        Status::ConditionallyCertified => 1,
        Status::NotCertified => 0,
    }
}

fn best(a: Status, b: Status) -> Status {
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

fn worst(a: Status, b: Status) -> Status {
    if rank(a) <= rank(b) {
        a
    } else {
        b
    }
}

fn fails_with<P: Clone>(points: &[Rep<P>]) -> Verdict<P> {
    Verdict::Fails(points.to_vec())
}

/// Decides every hypothesis of `theorem` and computes the conclusion.
pub fn check_theorem<S: Certifiable>(
    theorem: Theorem,
    s: &S,
    cond: &ContractionCondition,
) -> Result<HypothesisReport<S::Point>, CertifierError> {
    let cond = theorem.adapt(cond)?;
    let labels = theorem.hypotheses();
    let mut entries = Vec::new();
    for &label in &labels {
        let entry = match label {
            "(f)" => Entry::new(label, s.r_complete(false)),
            "(n)" => Entry::new(label, s.r_complete(true)),
            "(A)" => match s.y_complete() {
                v if v.passes() => Entry::new(label, s.y_between_images()).with_detail(format!(
                    "completeness: {}",
                    v.kind()
                )),
                v => Entry::new(label, v),
            },
            "(g)" => Entry::new(label, s.images_in_y_and_g()),
            "(k1)" => Entry::new(label, s.y_in_g_image(false)),
            "(o)" => Entry::new(label, s.f_image_in_g_image()),
            "(p)" => Entry::new(label, s.y_in_g_image(true)),
            "(k2)" => {
                let (v, branch) = s.k2();
                let e = Entry::new(label, v);
                match branch {
                    Some(b) => e.with_detail(b),
                    None => e,
                }
            }
            "(l1)" => Entry::new(label, s.l1()),
            "(l2)" => Entry::new(label, s.l2()),
            "(l3)" => Entry::new(label, s.l3()),
            "(h)" => match find_starting_point(s) {
                Some(w) => Entry::new(label, Verdict::Holds).with_detail(format!("w0 = {}", s.rep(w))),
                None if s.is_finite() => Entry::new(label, Verdict::Fails(vec![]))
                    .with_detail("no point w has (gw, fw) ∈ R"),
                None => Entry::new(label, Verdict::Undecidable("no sampled w0 has (gw0, fw0) ∈ R".into())),
            },
            "(i)" => match is_fg_closed(s, |u, v| s.related(u, v), SAMPLE_DENSITY) {
                Closedness::Closed { exhaustive: true, .. } => Entry::new(label, Verdict::Holds),
                Closedness::Closed { pairs_checked, .. } => {
                    Entry::new(label, Verdict::HoldsOnSamples(pairs_checked))
                }
                Closedness::Violated { u, v } => {
                    let detail = format!("(gu,gv) ∈ R but (fu,fv) ∉ R at (u,v) = ({u}, {v})");
                    Entry::new(label, fails_with(&[u, v])).with_detail(detail)
                }
            },
            "(r)" => directedness(s),
            "(t)" => match s.f_image_points() {
                Some(img) => match is_complete_relation(&Related(s), &img) {
                    Ok(()) => Entry::new(label, Verdict::Holds),
                    Err((a, b)) => Entry::new(label, Verdict::Fails(vec![s.rep(a), s.rep(b)]))
                        .with_detail("incomparable points of f(X)"),
                },
                None => Entry::new(label, Verdict::Undecidable("f(X) is infinite".into())),
            },
            "(s)" => Entry::new(label, s.one_to_one()),
            "(wc)" => match s.coincidence_profile() {
                Ok(profile) => match profile
                    .coincidence_points
                    .iter()
                    .find(|x| s.f(&s.g(x)) != s.g(&s.f(x)))
                {
                    None => Entry::new(label, Verdict::Holds),
                    Some(x) => Entry::new(label, Verdict::Fails(vec![s.rep(x.clone())]))
                        .with_detail("f(gx) ≠ g(fx) at a coincidence point x"),
                },
                Err(e) => Entry::new(label, Verdict::Undecidable(e.to_string())),
            },
            contraction => {
                let related = |u: &S::Point, v: &S::Point| s.related(u, v);
                let verdict = check_contraction_over(&cond, s, related, SAMPLE_DENSITY);
                let label = if contraction == "(m)" && cond.label() != "(m)" { cond.label() } else { contraction };
                match verdict {
                    ContractionVerdict::Certified(c) => {
                        let v = if c.exhaustive { Verdict::Holds } else { Verdict::HoldsOnSamples(c.pairs_checked) };
                        let detail = match (&c.reason, &c.binding) {
                            (Some(r), _) => r.clone(),
                            (None, Some(b)) => format!("binding pair {b}"),
                            (None, None) => "d(fu,fv) = 0 on every related pair".into(),
                        };
                        Entry::new(label, v).with_detail(detail)
                    }
                    ContractionVerdict::Violated(b) => {
                        let detail = b.to_string();
                        Entry::new(label, Verdict::Fails(vec![b.u, b.v])).with_detail(detail)
                    }
                }
            }
        };
        entries.push(entry);
    }

    let entry_labels: Vec<&str> = entries.iter().map(|e| e.label).collect();
    let extras = theorem.uniqueness_labels();
    let base: Vec<&str> = entry_labels.iter().copied().filter(|l| !extras.contains(l)).collect();
    let claims = theorem
        .claims()
        .into_iter()
        .map(|(claim, needs)| {
            let mut ls = base.clone();
            ls.extend(needs);
            ClaimStatus {
                claim,
                status: status_of(&entries, &ls),
            }
        })
        .collect();
    let status = status_of(&entries, &entry_labels);
    Ok(HypothesisReport {
        theorem,
        condition: cond.to_string(),
        entries,
        claims,
        status,
        conclusion: conclude(s),
    })
}

/// Coincidence profile, a solver run from the first admissible start, and
/// the oracle cross-check.
pub fn conclude<S: Certifiable>(s: &S) -> Conclusion<S::Point> {
    let profile = s.coincidence_profile().map_err(|e| e.to_string());
    let start = find_starting_point(s);
    let trace = start
        .clone()
        .and_then(|w| picard_jungck(s, w, &SolverConfig::default()).ok());
    let oracle_agreement = profile.as_ref().ok().and_then(|p| s.oracle_agreement(p));
    Conclusion {
        profile,
        start,
        trace,
        oracle_agreement,
    }
}

struct Related<'a, S>(&'a S);

impl<S: Setting> Relation<S::Point> for Related<'_, S> {
    fn contains(&self, u: &S::Point, v: &S::Point) -> bool {
        self.0.related(u, v)
    }
}

struct SymmetricRelated<'a, S>(&'a S);

impl<S: Setting> Relation<S::Point> for SymmetricRelated<'_, S> {
    fn contains(&self, u: &S::Point, v: &S::Point) -> bool {
        self.0.related(u, v) || self.0.related(v, u)
    }
}

/// `(r)`: `f(X)` is `(g,R^s)`-directed. A witness found among the scanned
/// points proves directedness; failure is exact only on exhaustive scans.
fn directedness<S: Setting>(s: &S) -> Entry<S::Point> {
    let Some(img) = s.f_image_points() else {
        return Entry::new("(r)", Verdict::Undecidable("f(X) is infinite".into()));
    };
    let q = s.quantifier(SAMPLE_DENSITY);
    let candidates: Vec<S::Point> = q.reps.iter().map(|r| r.point.clone()).collect();
    match is_directed(&SymmetricRelated(s), &img, &candidates, Some(|w: &S::Point| s.g(w))) {
        Directedness::Directed(_) => Entry::new("(r)", Verdict::Holds),
        Directedness::Undirected(a, b) if q.exhaustive => {
            Entry::new("(r)", Verdict::Fails(vec![s.rep(a), s.rep(b)]))
                .with_detail("no w has [u,gw], [v,gw] ∈ R")
        }
        Directedness::Undirected(a, b) => Entry::new(
            "(r)",
            Verdict::Undecidable(format!(
                "no sampled w serves ({}, {})",
                s.rep(a),
                s.rep(b)
            )),
        ),
    }
}
