//! The functionals `M_f`, `N_f`, comparison functions `φ` and the contraction
//! condition variants.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::instance::{Rep, Setting};
use crate::scalar::{format_rational, rat, Scalar};

/// `max{d(gu,gv), d(gu,fu), d(gv,fv), ½[d(gu,fv) + d(gv,fu)]}`.
pub fn m_value<S: Setting>(s: &S, u: &S::Point, v: &S::Point) -> Scalar {
    let t = Terms::new(s, u, v);
    t.gg.clone()
        .max(t.gu_fu.clone())
        .max(t.gv_fv.clone())
        .max(t.cross.half())
}

/// `max{d(gu,gv), ½[d(gu,fu) + d(gv,fv)], ½[d(gu,fv) + d(gv,fu)]}`.
pub fn n_value<S: Setting>(s: &S, u: &S::Point, v: &S::Point) -> Scalar {
    let t = Terms::new(s, u, v);
    t.gg.clone().max((&t.gu_fu + &t.gv_fv).half()).max(t.cross.half())
}

/// The distances every right-hand side is built from.
struct Terms {
    gg: Scalar,
    gu_fu: Scalar,
    gv_fv: Scalar,
    /// `d(gu,fv) + d(gv,fu)`
    cross: Scalar,
}

impl Terms {
    fn new<S: Setting>(s: &S, u: &S::Point, v: &S::Point) -> Self {
        let (fu, fv, gu, gv) = (s.f(u), s.f(v), s.g(u), s.g(v));
        Terms {
            gg: s.distance(&gu, &gv),
            gu_fu: s.distance(&gu, &fu),
            gv_fv: s.distance(&gv, &fv),
            cross: &s.distance(&gu, &fv) + &s.distance(&gv, &fu),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhiError {
    #[error("knot abscissae must be positive and strictly increasing (at knot {0})")]
    KnotOrder(usize),
    #[error("φ must be nonnegative (knot {0})")]
    NegativeValue(usize),
    #[error("the tail slope must be nonnegative")]
    NegativeTail,
    #[error("the declared ratio bound must lie in (0,1), found {0}")]
    RatioBound(String),
    #[error("the slope must be nonnegative, found {0}")]
    NegativeSlope(String),
}

/// A candidate `φ : [0,∞) → [0,∞)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComparisonFunction {
    /// `φ(t) = k·t`.
    Linear { k: BigRational },
    /// Piecewise-linear interpolation of `(0,0)` and the knots, continued
    /// past the last knot with `tail_slope`. `ratio_bound` is the declared
    /// `q < 1` with `φ(t) ≤ q·t`, which dominates the iterate series by a
    /// geometric one.
    Tabulated {
        knots: Vec<(Scalar, Scalar)>,
        tail_slope: Scalar,
        ratio_bound: Scalar,
    },
}

impl ComparisonFunction {
    pub fn linear(k: BigRational) -> Result<Self, PhiError> {
        if k.is_negative() {
            return Err(PhiError::NegativeSlope(format_rational(&k)));
        }
        Ok(ComparisonFunction::Linear { k })
    }

    pub fn tabulated(
        knots: Vec<(BigRational, BigRational)>,
        tail_slope: BigRational,
        ratio_bound: BigRational,
    ) -> Result<Self, PhiError> {
        let mut prev = BigRational::zero();
        for (i, (x, y)) in knots.iter().enumerate() {
            if *x <= prev {
                return Err(PhiError::KnotOrder(i));
            }
            if y.is_negative() {
                return Err(PhiError::NegativeValue(i));
            }
            prev = x.clone();
        }
        if tail_slope.is_negative() {
            return Err(PhiError::NegativeTail);
        }
        if !ratio_bound.is_positive() || ratio_bound >= BigRational::one() {
            return Err(PhiError::RatioBound(format_rational(&ratio_bound)));
        }
        let s = Scalar::from_rational;
        Ok(ComparisonFunction::Tabulated {
            knots: knots.into_iter().map(|(x, y)| (s(x), s(y))).collect(),
            tail_slope: s(tail_slope),
            ratio_bound: s(ratio_bound),
        })
    }

    pub fn apply(&self, t: &Scalar) -> Scalar {
        match self {
            ComparisonFunction::Linear { k } => t.scale(k),
            ComparisonFunction::Tabulated {
                knots, tail_slope, ..
            } => {
                let mut x0 = Scalar::zero();
                let mut y0 = Scalar::zero();
                for (x1, y1) in knots {
                    if t <= x1 {
                        // y0 + (t - x0)(y1 - y0)/(x1 - x0), with rational knots
                        let slope = (y1 - &y0)
                            .as_rational()
                            .zip((x1 - &x0).as_rational())
                            .map(|(dy, dx)| dy / dx)
                            .expect("knots are rational");
                        return &y0 + &(t - &x0).scale(&slope);
                    }
                    x0 = x1.clone();
                    y0 = y1.clone();
                }
                &y0 + &(&(t - &x0) * tail_slope)
            }
        }
    }

    /// `φⁿ(t)`.
    pub fn iterate(&self, t: &Scalar, n: usize) -> Scalar {
        (0..n).fold(t.clone(), |acc, _| self.apply(&acc))
    }

    /// A rational `q` with `φ(t) ≤ q·t` claimed for all `t`.
    pub fn ratio(&self) -> Scalar {
        match self {
            ComparisonFunction::Linear { k } => Scalar::from_rational(k.clone()),
            ComparisonFunction::Tabulated { ratio_bound, .. } => ratio_bound.clone(),
        }
    }
}

impl fmt::Display for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonFunction::Linear { k } => write!(f, "φ(t) = {}·t", format_rational(k)),
            ComparisonFunction::Tabulated {
                knots,
                tail_slope,
                ratio_bound,
            } => {
                let pts: Vec<String> = knots.iter().map(|(x, y)| format!("({x},{y})")).collect();
                write!(
                    f,
                    "φ through (0,0) {} with tail slope {tail_slope}, φ(t) ≤ {ratio_bound}·t",
                    pts.join(" ")
                )
            }
        }
    }
}

/// `j/10` for `j = 1..=100`.
pub fn default_grid() -> Vec<Scalar> {
    (1..=100).map(|j| Scalar::ratio(j, 10)).collect()
}

pub const DEFAULT_HORIZON: usize = 32;

/// How the iterate series was shown to converge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Summability {
    /// `φ(t) = k·t` with `k < 1`: the series is geometric.
    Geometric { ratio: Scalar },
    /// `φ(t) ≤ q·t` holds exactly on every segment and the partial sums up
    /// to the horizon respect `t·q/(1-q)` on the grid.
    Dominated { ratio: Scalar, horizon: usize },
    Failed { reason: String },
}

/// Findings of [`validate_phi`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub phi: String,
    /// `s < t` on the grid with `φ(s) > φ(t)`.
    pub monotonicity_failures: Vec<(Scalar, Scalar)>,
    /// Grid points with `φ(s) ≥ s`.
    pub lemma_failures: Vec<Scalar>,
    pub summability: Summability,
    pub grid_size: usize,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_failures.is_empty()
            && self.lemma_failures.is_empty()
            && !matches!(self.summability, Summability::Failed { .. })
    }
}

/// Checks that `φ` is increasing, that `φ(s) < s`, and that its iterates are
/// summable, on `grid` and (for the tabulated kind) exactly on every segment.
pub fn validate_phi(phi: &ComparisonFunction, grid: &[Scalar], horizon: usize) -> PhiReport {
    let values: Vec<Scalar> = grid.iter().map(|s| phi.apply(s)).collect();
    // An inversion exists iff some adjacent pair of the sorted grid descends.
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| grid[i].cmp(&grid[j]));
    let mut monotonicity_failures = Vec::new();
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        if grid[i] < grid[j] && values[i] > values[j] {
            monotonicity_failures.push((grid[i].clone(), grid[j].clone()));
        }
    }
    let lemma_failures = grid
        .iter()
        .zip(&values)
        .filter(|(s, v)| s.is_positive() && *v >= *s)
        .map(|(s, _)| s.clone())
        .collect();
    let summability = match phi {
        ComparisonFunction::Linear { k } => {
            if *k < BigRational::one() {
                Summability::Geometric {
                    ratio: Scalar::from_rational(k.clone()),
                }
            } else {
                Summability::Failed {
                    reason: format!("k = {} is not below 1", format_rational(k)),
                }
            }
        }
        ComparisonFunction::Tabulated {
            knots,
            tail_slope,
            ratio_bound,
        } => tabulated_summability(phi, knots, tail_slope, ratio_bound, grid, horizon),
    };
    if let ComparisonFunction::Tabulated { knots, tail_slope, .. } = phi {
        let mut prev = Scalar::zero();
        for (x, y) in knots {
            if *y < prev {
                monotonicity_failures.push((x.clone(), x.clone()));
            }
            prev = y.clone();
        }
        if tail_slope.is_negative() {
            let last = knots.last().map(|k| k.0.clone()).unwrap_or_else(Scalar::zero);
            monotonicity_failures.push((last.clone(), last));
        }
    }
    PhiReport {
        phi: phi.to_string(),
        monotonicity_failures,
        lemma_failures,
        summability,
        grid_size: grid.len(),
    }
}

fn tabulated_summability(
    phi: &ComparisonFunction,
    knots: &[(Scalar, Scalar)],
    tail_slope: &Scalar,
    q: &Scalar,
    grid: &[Scalar],
    horizon: usize,
) -> Summability {
    // φ is linear between knots and through the origin, so φ(t) ≤ q·t
    // everywhere iff it holds at the knots and the tail slope is ≤ q.
    if let Some((x, y)) = knots.iter().find(|(x, y)| *y > x * q) {
        return Summability::Failed {
            reason: format!("φ({x}) = {y} exceeds the declared bound {q}·{x}"),
        };
    }
    if tail_slope > q {
        return Summability::Failed {
            reason: format!("tail slope {tail_slope} exceeds the declared bound {q}"),
        };
    }
    let one_minus = &Scalar::one() - q;
    for t in grid {
        let bound = (t * q).div_rational(one_minus.as_rational().expect("rational bound"));
        let mut term = t.clone();
        let mut sum = Scalar::zero();
        for _ in 0..horizon {
            term = phi.apply(&term);
            sum = &sum + &term;
        }
        if sum > bound {
            return Summability::Failed {
                reason: format!("partial sum {sum} at t = {t} exceeds {bound}"),
            };
        }
    }
    Summability::Dominated {
        ratio: q.clone(),
        horizon,
    }
}

/// A comparison function that passed [`validate_phi`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedPhi(ComparisonFunction);

impl ValidatedPhi {
    /// Validates on [`default_grid`] with [`DEFAULT_HORIZON`].
    pub fn new(phi: ComparisonFunction) -> Result<Self, Box<PhiReport>> {
        let report = validate_phi(&phi, &default_grid(), DEFAULT_HORIZON);
        if report.passed() {
            Ok(ValidatedPhi(phi))
        } else {
            Err(Box::new(report))
        }
    }

    pub fn linear(k: BigRational) -> Result<Self, Box<PhiReport>> {
        let phi = ComparisonFunction::Linear { k };
        ValidatedPhi::new(phi)
    }

    pub fn function(&self) -> &ComparisonFunction {
        &self.0
    }

    pub fn apply(&self, t: &Scalar) -> Scalar {
        self.0.apply(t)
    }

    pub fn iterate(&self, t: &Scalar, n: usize) -> Scalar {
        self.0.iterate(t, n)
    }
}

impl fmt::Display for ValidatedPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The contraction variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    /// `d(fu,fv) ≤ φ(M_f(gu,gv))`
    M,
    /// `d(fu,fv) ≤ φ(N_f(gu,gv))`
    N,
    /// `d(fu,fv) ≤ α·d(gu,gv)`
    Linear { alpha: BigRational },
    /// `d(fu,fv) ≤ k·N_f(gu,gv)`
    ScaledN { k: BigRational },
    /// `a·d(gu,gv) + b[d(gu,fu) + d(gv,fv)] + c[d(gu,fv) + d(gv,fu)]`
    HardyRogers {
        a: BigRational,
        b: BigRational,
        c: BigRational,
    },
    /// `k[d(gu,fu) + d(gv,fv)]`
    Kannan { k: BigRational },
    /// `k[d(gu,fv) + d(gv,fu)]`
    Chatterjea { k: BigRational },
    /// `φ(N_f(gu,gv))` for all `u, v`, regardless of the relation.
    UniversalN,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::M => "(m)",
            Variant::N => "(q)",
            Variant::Linear { .. } => "(j)",
            Variant::ScaledN { .. } => "(q1)",
            Variant::HardyRogers { .. } => "(q2)",
            Variant::Kannan { .. } => "(q3)",
            Variant::Chatterjea { .. } => "(q4)",
            Variant::UniversalN => "(B)",
        }
    }

    fn needs_phi(&self) -> bool {
        matches!(self, Variant::M | Variant::N | Variant::UniversalN)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConditionError {
    #[error("variant {0} requires a comparison function")]
    MissingPhi(&'static str),
    #[error("variant {0} takes no comparison function")]
    UnexpectedPhi(&'static str),
    #[error("the comparison function is not in the admissible family: {0:?}")]
    InvalidPhi(Box<PhiReport>),
    #[error("constant {name} = {value} violates {constraint}")]
    Constant {
        name: &'static str,
        value: String,
        constraint: &'static str,
    },
}

/// A variant with its constants and comparison function, all validated.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCondition {
    variant: Variant,
    phi: Option<ValidatedPhi>,
}

impl ContractionCondition {
    pub fn new(variant: Variant, phi: Option<ComparisonFunction>) -> Result<Self, ConditionError> {
        let label = variant.label();
        let phi = match (variant.needs_phi(), phi) {
            (true, None) => return Err(ConditionError::MissingPhi(label)),
            (false, Some(_)) => return Err(ConditionError::UnexpectedPhi(label)),
            (true, Some(phi)) => Some(ValidatedPhi::new(phi).map_err(ConditionError::InvalidPhi)?),
            (false, None) => None,
        };
        let zero = BigRational::zero();
        let one = BigRational::one();
        let half = rat(1, 2);
        let check = |name, value: &BigRational, ok: bool, constraint| {
            if ok {
                Ok(())
            } else {
                Err(ConditionError::Constant {
                    name,
                    value: format_rational(value),
                    constraint,
                })
            }
        };
        match &variant {
            Variant::Linear { alpha } => {
                check("α", alpha, *alpha >= zero && *alpha < one, "0 ≤ α < 1")?
            }
            Variant::ScaledN { k } => check("k", k, *k >= zero && *k < one, "0 ≤ k < 1")?,
            Variant::HardyRogers { a, b, c } => {
                for (name, x) in [("a", a), ("b", b), ("c", c)] {
                    check(name, x, *x >= zero, "nonnegativity")?;
                }
                let sum = a + b * rat(2, 1) + c * rat(2, 1);
                check("a+2b+2c", &sum, sum < one, "a+2b+2c < 1")?;
            }
            Variant::Kannan { k } | Variant::Chatterjea { k } => {
                check("k", k, *k >= zero && *k < half, "0 ≤ k < 1/2")?
            }
            Variant::M | Variant::N | Variant::UniversalN => {}
        }
        Ok(ContractionCondition { variant, phi })
    }

    pub fn with_phi(variant: Variant, phi: ValidatedPhi) -> Self {
        ContractionCondition {
            variant,
            phi: Some(phi),
        }
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn label(&self) -> &'static str {
        self.variant.label()
    }

    pub fn phi(&self) -> Option<&ValidatedPhi> {
        self.phi.as_ref()
    }

    /// A `φ` for which this condition implies `(m)` (and, except for `(m)`
    /// itself, `(q)`): linear variants give `φ(t) = κ·t`.
    pub fn implied_phi(&self) -> ValidatedPhi {
        let two = rat(2, 1);
        let k = match &self.variant {
            Variant::M | Variant::N | Variant::UniversalN => {
                return self.phi.clone().expect("validated at construction")
            }
            Variant::Linear { alpha } => alpha.clone(),
            Variant::ScaledN { k } => k.clone(),
            Variant::HardyRogers { a, b, c } => a + b * &two + c * &two,
            Variant::Kannan { k } | Variant::Chatterjea { k } => k * &two,
        };
        ValidatedPhi(ComparisonFunction::Linear { k })
    }

    /// Whether the condition bounds `d(fu,fv)` by `φ(N_f)` for
    /// [`implied_phi`](Self::implied_phi).
    pub fn implies_n_type(&self) -> bool {
        !matches!(self.variant, Variant::M)
    }

    /// Whether the inequality is required on every pair, not only on pairs
    /// with `(gu,gv) ∈ R`.
    pub fn ignores_relation(&self) -> bool {
        matches!(self.variant, Variant::UniversalN)
    }

    /// The right-hand side at `(u, v)`.
    pub fn rhs<S: Setting>(&self, s: &S, u: &S::Point, v: &S::Point) -> Scalar {
        let phi = || self.phi.as_ref().expect("validated at construction");
        match &self.variant {
            Variant::M => phi().apply(&m_value(s, u, v)),
            Variant::N | Variant::UniversalN => phi().apply(&n_value(s, u, v)),
            Variant::Linear { alpha } => Terms::new(s, u, v).gg.scale(alpha),
            Variant::ScaledN { k } => n_value(s, u, v).scale(k),
            Variant::HardyRogers { a, b, c } => {
                let t = Terms::new(s, u, v);
                &(&t.gg.scale(a) + &(&t.gu_fu + &t.gv_fv).scale(b)) + &t.cross.scale(c)
            }
            Variant::Kannan { k } => {
                let t = Terms::new(s, u, v);
                (&t.gu_fu + &t.gv_fv).scale(k)
            }
            Variant::Chatterjea { k } => Terms::new(s, u, v).cross.scale(k),
        }
    }
}

impl fmt::Display for ContractionCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match (&self.variant, &self.phi) {
            (Variant::Linear { alpha }, _) => write!(f, "(j) with α = {}", r(alpha)),
            (Variant::ScaledN { k }, _) => write!(f, "(q1) with k = {}", r(k)),
            (Variant::HardyRogers { a, b, c }, _) => {
                write!(f, "(q2) with a = {}, b = {}, c = {}", r(a), r(b), r(c))
            }
            (Variant::Kannan { k }, _) => write!(f, "(q3) with k = {}", r(k)),
            (Variant::Chatterjea { k }, _) => write!(f, "(q4) with k = {}", r(k)),
            (v, Some(phi)) => write!(f, "{} with {}", v.label(), phi),
            (v, None) => f.write_str(v.label()),
        }
    }
}

/// One evaluated pair: `lhs = d(fu,fv)` against the variant's `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBound<P> {
    pub u: Rep<P>,
    pub v: Rep<P>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl<P> fmt::Display for PairBound<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.lhs <= self.rhs { "≤" } else { ">" };
        write!(
            f,
            "(u, v) = ({}, {}): d(fu,fv) = {} {op} {}",
            self.u, self.v, self.lhs, self.rhs
        )
    }
}

/// Proof that the inequality holds on the scanned pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate<P> {
    pub exhaustive: bool,
    pub pairs_checked: usize,
    /// The pair maximizing `lhs / rhs` among pairs with `lhs > 0`.
    pub binding: Option<PairBound<P>>,
    /// Set when the certificate follows without a scan.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionVerdict<P> {
    Certified(Certificate<P>),
    /// The first violating pair in scan order.
    Violated(PairBound<P>),
}

impl<P> ContractionVerdict<P> {
    pub fn holds(&self) -> bool {
        matches!(self, ContractionVerdict::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate<P>> {
        match self {
            ContractionVerdict::Certified(c) => Some(c),
            ContractionVerdict::Violated(_) => None,
        }
    }
}

/// Checks the condition over all `(u, v)` with `(gu,gv) ∈ R` (every pair
/// for `(B)`).
pub fn check_contraction<S: Setting>(
    cond: &ContractionCondition,
    s: &S,
    density: usize,
) -> ContractionVerdict<S::Point> {
    check_contraction_over(cond, s, |a, b| s.related(a, b), density)
}

/// As [`check_contraction`], with the relation supplied by the caller.
pub fn check_contraction_over<S: Setting>(
    cond: &ContractionCondition,
    s: &S,
    related: impl Fn(&S::Point, &S::Point) -> bool,
    density: usize,
) -> ContractionVerdict<S::Point> {
    if s.f_constant().is_some() {
        return ContractionVerdict::Certified(Certificate {
            exhaustive: true,
            pairs_checked: 0,
            binding: None,
            reason: Some("f is constant, so d(fu,fv) = 0 for all u, v".into()),
        });
    }
    let q = s.quantifier(density);
    let mut checked = 0;
    let mut binding: Option<PairBound<S::Point>> = None;
    for ru in &q.reps {
        let gu = s.g(&ru.point);
        let fu = s.f(&ru.point);
        for rv in &q.reps {
            if !cond.ignores_relation() && !related(&gu, &s.g(&rv.point)) {
                continue;
            }
            checked += 1;
            let lhs = s.distance(&fu, &s.f(&rv.point));
            if lhs.is_zero() {
                continue;
            }
            let rhs = cond.rhs(s, &ru.point, &rv.point);
            let pb = PairBound {
                u: ru.clone(),
                v: rv.clone(),
                lhs,
                rhs,
            };
            if pb.lhs > pb.rhs {
                return ContractionVerdict::Violated(pb);
            }
            let tighter = match &binding {
                None => true,
                // lhs/rhs > b.lhs/b.rhs, all positive
                Some(b) => (&pb.lhs * &b.rhs).cmp(&(&b.lhs * &pb.rhs)) == Ordering::Greater,
            };
            if tighter {
                binding = Some(pb);
            }
        }
    }
    ContractionVerdict::Certified(Certificate {
        exhaustive: q.exhaustive,
        pairs_checked: checked,
        binding,
        reason: None,
    })
}

/// Whether checking over `(gu,gv) ∈ R` and over `[gu,gv] ∈ R` agree.
pub fn closure_equivalence_check<S: Setting>(cond: &ContractionCondition, s: &S) -> bool {
    let direct = check_contraction(cond, s, 2).holds();
    let symmetric =
        check_contraction_over(cond, s, |a, b| s.related(a, b) || s.related(b, a), 2).holds();
    direct == symmetric
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worked::{first_example, second_example, second_example_finite};
    use proptest::prelude::*;

    fn linear(num: i64, den: i64) -> ComparisonFunction {
        ComparisonFunction::linear(rat(num, den)).unwrap()
    }

    fn cond(variant: Variant, phi: Option<ComparisonFunction>) -> ContractionCondition {
        ContractionCondition::new(variant, phi).unwrap()
    }

    #[test]
    fn functionals_at_the_binding_case() {
        let inst = second_example();
        let two = Scalar::from_integer(2);
        let irr = Scalar::sqrt2_times(rat(1, 1));
        assert_eq!(m_value(&inst, &two, &irr), two);
        assert_eq!(n_value(&inst, &two, &irr), two);
        let fixed = Scalar::zero();
        assert_eq!(m_value(&inst, &fixed, &fixed), Scalar::zero());
        assert_eq!(n_value(&inst, &fixed, &fixed), Scalar::zero());
    }

    #[test]
    fn phi_validation() {
        for (n, d) in [(1, 3), (5, 6), (0, 1)] {
            let report = validate_phi(&linear(n, d), &default_grid(), DEFAULT_HORIZON);
            assert!(report.passed(), "{report:?}");
        }
        let identity = validate_phi(&linear(1, 1), &default_grid(), DEFAULT_HORIZON);
        assert!(!identity.passed());
        assert_eq!(identity.lemma_failures.len(), 100);
        assert!(ValidatedPhi::linear(rat(3, 2)).is_err());
        assert!(ComparisonFunction::linear(rat(-1, 2)).is_err());
    }

    #[test]
    fn tabulated_phi() {
        // t/2 up to 1, then flat-ish growth at slope 1/4
        let phi = ComparisonFunction::tabulated(vec![(rat(1, 1), rat(1, 2))], rat(1, 4), rat(1, 2))
            .unwrap();
        assert_eq!(phi.apply(&Scalar::ratio(1, 2)), Scalar::ratio(1, 4));
        assert_eq!(phi.apply(&Scalar::from_integer(3)), Scalar::one());
        assert!(ValidatedPhi::new(phi).is_ok());

        let bad_bound =
            ComparisonFunction::tabulated(vec![(rat(1, 1), rat(9, 10))], rat(1, 4), rat(1, 2))
                .unwrap();
        let report = validate_phi(&bad_bound, &default_grid(), 8);
        assert!(matches!(report.summability, Summability::Failed { .. }));

        let decreasing = ComparisonFunction::tabulated(
            vec![(rat(1, 1), rat(1, 2)), (rat(2, 1), rat(1, 4))],
            rat(0, 1),
            rat(1, 2),
        )
        .unwrap();
        assert!(!validate_phi(&decreasing, &default_grid(), 8).monotonicity_failures.is_empty());
        assert_eq!(
            ComparisonFunction::tabulated(vec![(rat(1, 1), rat(1, 2))], rat(1, 4), rat(1, 1)),
            Err(PhiError::RatioBound("1".into()))
        );
    }

    #[test]
    fn constants_are_range_checked() {
        let bad = [
            Variant::Linear { alpha: rat(1, 1) },
            Variant::ScaledN { k: rat(1, 1) },
            Variant::HardyRogers {
                a: rat(1, 2),
                b: rat(1, 8),
                c: rat(1, 8),
            },
            Variant::Kannan { k: rat(1, 2) },
            Variant::Chatterjea { k: rat(-1, 4) },
        ];
        for v in bad {
            assert!(ContractionCondition::new(v.clone(), None).is_err(), "{v:?}");
        }
        assert!(ContractionCondition::new(Variant::M, None).is_err());
        assert!(ContractionCondition::new(Variant::Kannan { k: rat(1, 4) }, Some(linear(1, 2))).is_err());
        assert!(ContractionCondition::new(Variant::M, Some(linear(1, 1))).is_err());
    }

    #[test]
    fn m_type_certificate_binds_at_two_and_an_irrational() {
        let inst = second_example();
        let verdict = check_contraction(&cond(Variant::M, Some(linear(5, 6))), &inst, 2);
        let cert = verdict.certificate().expect("certified").clone();
        assert!(cert.exhaustive);
        let b = cert.binding.unwrap();
        assert_eq!(b.u.point, Scalar::from_integer(2));
        assert!(!b.v.point.is_rational());
        assert!(b.v.class.as_deref().unwrap().contains("irrational"));
        assert_eq!(b.lhs, Scalar::one());
        assert_eq!(b.rhs, Scalar::ratio(5, 3));
    }

    #[test]
    fn linear_condition_fails_at_two_and_an_irrational() {
        let inst = second_example();
        for alpha in [rat(0, 1), rat(1, 2), rat(99, 100)] {
            let verdict = check_contraction(&cond(Variant::Linear { alpha }, None), &inst, 2);
            let ContractionVerdict::Violated(w) = verdict else {
                panic!("expected a violation")
            };
            assert_eq!(w.u.point, Scalar::from_integer(2));
            assert!(!w.v.point.is_rational());
            assert_eq!(w.lhs, Scalar::one());
        }
        // the irrational named in the text violates it too
        let alpha = cond(Variant::Linear { alpha: rat(99, 100) }, None);
        let sqrt2 = Scalar::sqrt2_times(rat(1, 1));
        let two = Scalar::from_integer(2);
        assert!(inst.related(&inst.g(&two), &inst.g(&sqrt2)));
        assert!(inst.distance(&inst.f(&two), &inst.f(&sqrt2)) > alpha.rhs(&inst, &two, &sqrt2));
    }

    #[test]
    fn constant_f_certifies_every_variant() {
        let inst = first_example();
        for c in [
            cond(Variant::M, Some(linear(1, 3))),
            cond(Variant::Linear { alpha: rat(0, 1) }, None),
            cond(Variant::Kannan { k: rat(0, 1) }, None),
        ] {
            let cert = check_contraction(&c, &inst, 2).certificate().cloned().unwrap();
            assert!(cert.exhaustive);
            assert!(cert.reason.is_some());
        }
    }

    #[test]
    fn finite_restriction_agrees_with_the_interval_instance() {
        let inst = second_example_finite();
        let m = cond(Variant::M, Some(linear(5, 6)));
        let cert = check_contraction(&m, &inst, 0).certificate().cloned().unwrap();
        let b = cert.binding.unwrap();
        assert_eq!((b.u.label.as_str(), b.v.label.as_str()), ("2", "s"));
        assert_eq!(b.rhs, Scalar::ratio(5, 3));
        assert!(closure_equivalence_check(&m, &inst));
        assert!(!check_contraction(&cond(Variant::Linear { alpha: rat(1, 2) }, None), &inst, 0).holds());
    }

    proptest! {
        #[test]
        fn linear_phi_stays_below_identity(num in 0i64..99, t in 1i64..1000) {
            let phi = ValidatedPhi::linear(rat(num, 100)).unwrap();
            let t = Scalar::ratio(t, 7);
            prop_assert!(phi.apply(&t) < t);
        }

        #[test]
        fn tabulated_phi_respects_its_declared_ratio(
            ys in proptest::collection::vec(0i64..50, 1..6),
            tail in 0i64..50,
        ) {
            // nondecreasing knots at x = 1..=n with φ(x) ≤ x/2
            let mut knots = Vec::new();
            let mut prev = 0;
            for (i, y) in ys.iter().enumerate() {
                let x = i as i64 + 1;
                let y = (prev + y % 10).min(50 * x);
                prev = y;
                knots.push((rat(x, 1), rat(y, 100)));
            }
            let phi = ComparisonFunction::tabulated(knots, rat(tail, 100), rat(1, 2)).unwrap();
            let report = validate_phi(&phi, &default_grid(), 6);
            prop_assert!(report.passed(), "{:?}", report);
            for s in default_grid() {
                prop_assert!(phi.apply(&s) <= s.scale(&rat(1, 2)));
            }
        }
    }
}
