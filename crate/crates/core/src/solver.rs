//! Picard–Jungck iteration `g(w_{n+1}) = f(w_n)` with trace recording and
//! a-priori error bounds.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::contraction::{ComparisonFunction, ValidatedPhi};
use crate::instance::{Rep, Setting};
use crate::scalar::Scalar;

/// How `w_{n+1}` is chosen from `g⁻¹(f(w_n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionPolicy<P> {
    /// The setting's deterministic preimage (least id on finite carriers).
    MinPreimage,
    /// A user table `y ↦ w` with `g(w) = y`; values absent from the table
    /// have no preimage.
    Table(BTreeMap<P, P>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig<P> {
    /// Tolerance on `d(fw_n, gw_n)` for interval instances; finite
    /// instances stop only on exact coincidence.
    pub epsilon: BigRational,
    pub max_iterations: usize,
    pub section: SectionPolicy<P>,
}

impl<P> Default for SolverConfig<P> {
    fn default() -> Self {
        SolverConfig {
            epsilon: BigRational::new(1.into(), 1_000_000_000.into()),
            max_iterations: 10_000,
            section: SectionPolicy::MinPreimage,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<P> {
    /// `f(w_n) = g(w_n)` exactly.
    Coincidence(P),
    /// `0 < d(fw_n, gw_n) ≤ ε` on an interval instance.
    WithinTolerance { point: P, residual: Scalar },
    /// The deterministic iteration revisited `w_n` without coinciding.
    Stalled { cycle_start: usize },
    BudgetExhausted,
    /// `g⁻¹(f(w_n))` is empty at this step.
    NoPreimage { step: usize },
}

/// The sequences `w_n`, `gw_n` and `d_n = d(gw_n, gw_{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace<P> {
    pub w: Vec<P>,
    pub gw: Vec<P>,
    pub step_distances: Vec<Scalar>,
    pub outcome: Outcome<P>,
}

impl<P: Clone> IterationTrace<P> {
    pub fn terminal_point(&self) -> Option<&P> {
        match &self.outcome {
            Outcome::Coincidence(p) | Outcome::WithinTolerance { point: p, .. } => Some(p),
            _ => None,
        }
    }

    pub fn steps(&self) -> usize {
        self.step_distances.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("(gw0, fw0) = ({gw0}, {fw0}) is not in R")]
    StartNotRelated { gw0: String, fw0: String },
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("max_iterations must be at least 1")]
    ZeroBudget,
}

/// The first candidate `w₀` with `(gw₀, fw₀) ∈ R`.
pub fn find_starting_point<S: Setting>(s: &S) -> Option<S::Point> {
    s.start_candidates()
        .into_iter()
        .find(|w| s.related(&s.g(w), &s.f(w)))
}

pub fn picard_jungck<S: Setting>(
    s: &S,
    w0: S::Point,
    config: &SolverConfig<S::Point>,
) -> Result<IterationTrace<S::Point>, SolverError> {
    if config.max_iterations == 0 {
        return Err(SolverError::ZeroBudget);
    }
    if config.epsilon <= BigRational::from_integer(0.into()) {
        return Err(SolverError::NonPositiveEpsilon);
    }
    let (gw0, fw0) = (s.g(&w0), s.f(&w0));
    if !s.related(&gw0, &fw0) {
        return Err(SolverError::StartNotRelated {
            gw0: s.rep(gw0).to_string(),
            fw0: s.rep(fw0).to_string(),
        });
    }
    let epsilon = Scalar::from_rational(config.epsilon.clone());
    let mut seen: BTreeMap<S::Point, usize> = BTreeMap::new();
    let mut trace = IterationTrace {
        w: vec![w0.clone()],
        gw: vec![gw0],
        step_distances: Vec::new(),
        outcome: Outcome::BudgetExhausted,
    };
    let mut w = w0;
    for step in 0..=config.max_iterations {
        let fw = s.f(&w);
        let gw = s.g(&w);
        if fw == gw {
            trace.outcome = Outcome::Coincidence(w);
            return Ok(trace);
        }
        if !s.is_finite() {
            let residual = s.distance(&fw, &gw);
            if residual <= epsilon {
                trace.outcome = Outcome::WithinTolerance { point: w, residual };
                return Ok(trace);
            }
        }
        if let Some(&first) = seen.get(&w) {
            trace.outcome = Outcome::Stalled { cycle_start: first };
            return Ok(trace);
        }
        seen.insert(w.clone(), step);
        if step == config.max_iterations {
            break;
        }
        let next = match &config.section {
            SectionPolicy::MinPreimage => s.g_preimage(&fw),
            SectionPolicy::Table(table) => table.get(&fw).filter(|w| s.g(w) == fw).cloned(),
        };
        let Some(next) = next else {
            trace.outcome = Outcome::NoPreimage { step };
            return Ok(trace);
        };
        trace.step_distances.push(s.distance(&gw, &fw));
        trace.gw.push(fw);
        trace.w.push(next.clone());
        w = next;
    }
    trace.outcome = Outcome::BudgetExhausted;
    Ok(trace)
}

/// `Σ_{k≥n} φ^k(d₀)`, an upper bound on `d(gw_n, gw_m)` for all `m ≥ n`.
///
/// Linear `φ(t) = k·t` gives `kⁿ·d₀/(1-k)` exactly. A tabulated `φ` gives
/// the partial sum over `n..n+H` plus `φ^{n+H}(d₀)/(1-q)`, where `q` is its
/// validated ratio bound.
pub fn error_bound(phi: &ValidatedPhi, d0: &Scalar, n: usize) -> Scalar {
    match phi.function() {
        ComparisonFunction::Linear { k } => {
            let kn: BigRational = Pow::pow(k, n);
            d0.scale(&kn).div_rational(&(BigRational::one() - k))
        }
        ComparisonFunction::Tabulated { ratio_bound, .. } => {
            const H: usize = 16;
            let mut term = phi.iterate(d0, n);
            let mut sum = Scalar::zero();
            for _ in 0..H {
                sum = &sum + &term;
                term = phi.apply(&term);
            }
            let q = ratio_bound.as_rational().expect("rational bound");
            &sum + &term.div_rational(&(BigRational::one() - q))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PromotionFailure<P> {
    NotCoincidence(Rep<P>),
    /// `f(gx) ≠ g(fx)`.
    NotWeaklyCompatible { x: Rep<P>, fgx: Rep<P>, gfx: Rep<P> },
    /// `y = gx` is not fixed by both maps.
    NotFixed { y: Rep<P>, fy: Rep<P>, gy: Rep<P> },
}

impl<P> std::fmt::Display for PromotionFailure<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PromotionFailure::NotCoincidence(x) => write!(f, "{x} is not a coincidence point"),
            PromotionFailure::NotWeaklyCompatible { x, fgx, gfx } => {
                write!(f, "f(gx) = {fgx} differs from g(fx) = {gfx} at x = {x}")
            }
            PromotionFailure::NotFixed { y, fy, gy } => {
                write!(f, "y = gx = {y} has fy = {fy}, gy = {gy}")
            }
        }
    }
}

/// From a coincidence point `x` of a weakly compatible pair, `y = gx` is a
/// coincidence point; it is a common fixed point when `fy = gy = y`.
pub fn promote_to_common_fixed<S: Setting>(
    s: &S,
    x: &S::Point,
) -> Result<S::Point, PromotionFailure<S::Point>> {
    let (fx, gx) = (s.f(x), s.g(x));
    if fx != gx {
        return Err(PromotionFailure::NotCoincidence(s.rep(x.clone())));
    }
    let (fgx, gfx) = (s.f(&gx), s.g(&fx));
    if fgx != gfx {
        return Err(PromotionFailure::NotWeaklyCompatible {
            x: s.rep(x.clone()),
            fgx: s.rep(fgx),
            gfx: s.rep(gfx),
        });
    }
    let (fy, gy) = (s.f(&gx), s.g(&gx));
    if fy != gx || gy != gx {
        return Err(PromotionFailure::NotFixed {
            y: s.rep(gx),
            fy: s.rep(fy),
            gy: s.rep(gy),
        });
    }
    Ok(gx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::FiniteInstance;
    use crate::mappings::{FiniteMap, Pair};
    use crate::relspace::{DistanceTable, FiniteRelation, FiniteSpace, PointId};
    use crate::scalar::rat;
    use crate::worked::{first_example, second_example, second_example_finite};

    fn line(f: &[usize], g: &[usize], pairs: &[(usize, usize)]) -> FiniteInstance {
        let n = f.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| rat((i as i64 - j as i64).abs(), 1)).collect())
            .collect();
        let space = FiniteSpace::new(
            (0..n).map(|i| format!("p{i}")).collect(),
            DistanceTable::from_rows(rows).unwrap(),
            FiniteRelation::from_pairs(n, pairs.iter().copied()).unwrap(),
            None,
        )
        .unwrap();
        FiniteInstance::new(
            space,
            Pair::new(
                FiniteMap::from_indices(f.iter().copied()),
                FiniteMap::from_indices(g.iter().copied()),
            ),
        )
        .unwrap()
    }

    #[test]
    fn starting_points_of_the_worked_instances() {
        assert_eq!(find_starting_point(&first_example()), Some(Scalar::zero()));
        assert_eq!(find_starting_point(&second_example()), Some(Scalar::zero()));
        assert_eq!(find_starting_point(&second_example_finite()), Some(PointId(0)));
        // (g0, f0) = (0, 1) and (g1, f1) = (1, 0) are both outside R
        assert_eq!(find_starting_point(&line(&[1, 0], &[0, 1], &[(0, 0)])), None);
    }

    #[test]
    fn first_example_from_three() {
        let inst = first_example();
        let trace = picard_jungck(&inst, Scalar::from_integer(3), &SolverConfig::default()).unwrap();
        assert_eq!(trace.outcome, Outcome::Coincidence(Scalar::zero()));
        assert_eq!(trace.w, vec![Scalar::from_integer(3), Scalar::zero()]);
        assert_eq!(trace.step_distances, vec![Scalar::one()]);
        assert_eq!(trace.gw[1], inst.f(&trace.w[0]));
    }

    #[test]
    fn second_example_stops_immediately() {
        let trace = picard_jungck(&second_example(), Scalar::zero(), &SolverConfig::default()).unwrap();
        assert_eq!(trace.outcome, Outcome::Coincidence(Scalar::zero()));
        assert_eq!(trace.steps(), 0);
    }

    #[test]
    fn refusals_and_failures() {
        let inst = line(&[1, 0], &[0, 1], &[(0, 0)]);
        assert!(matches!(
            picard_jungck(&inst, PointId(0), &SolverConfig::default()),
            Err(SolverError::StartNotRelated { .. })
        ));
        // f(0) = 2 has no g-preimage since g ≡ 0
        let inst = line(&[2, 2, 2], &[0, 0, 0], &[(0, 2)]);
        let trace = picard_jungck(&inst, PointId(0), &SolverConfig::default()).unwrap();
        assert_eq!(trace.outcome, Outcome::NoPreimage { step: 0 });
        // a swap under g = id cycles without coinciding
        let inst = line(&[1, 0], &[0, 1], &[(0, 1), (1, 0)]);
        let trace = picard_jungck(&inst, PointId(0), &SolverConfig::default()).unwrap();
        assert_eq!(trace.outcome, Outcome::Stalled { cycle_start: 0 });
        let config = SolverConfig {
            max_iterations: 1,
            ..SolverConfig::default()
        };
        let trace = picard_jungck(&inst, PointId(0), &config).unwrap();
        assert_eq!(trace.outcome, Outcome::BudgetExhausted);
    }

    #[test]
    fn user_sections() {
        // g folds 1 and 2 onto 1; f sends everything to 1
        let inst = line(&[1, 1, 1], &[0, 1, 1], &[(0, 1), (1, 1)]);
        let table = BTreeMap::from([(PointId(1), PointId(2))]);
        let config = SolverConfig {
            section: SectionPolicy::Table(table),
            ..SolverConfig::default()
        };
        let trace = picard_jungck(&inst, PointId(0), &config).unwrap();
        assert_eq!(trace.w, vec![PointId(0), PointId(2)]);
        assert_eq!(trace.outcome, Outcome::Coincidence(PointId(2)));
    }

    #[test]
    fn error_bounds() {
        let third = ValidatedPhi::linear(rat(1, 3)).unwrap();
        assert_eq!(error_bound(&third, &Scalar::one(), 2), Scalar::ratio(1, 6));
        let five_sixths = ValidatedPhi::linear(rat(5, 6)).unwrap();
        assert_eq!(error_bound(&five_sixths, &Scalar::from_integer(2), 0), Scalar::from_integer(12));
        assert_eq!(error_bound(&five_sixths, &Scalar::zero(), 3), Scalar::zero());
        // independent oracle: partial sums of the geometric series approach the bound from below
        let mut partial = Scalar::zero();
        let mut term = Scalar::ratio(1, 9);
        for _ in 0..40 {
            partial = &partial + &term;
            term = term.scale(&rat(1, 3));
        }
        let bound = error_bound(&third, &Scalar::one(), 2);
        assert!(partial < bound);
        assert!((&bound - &partial) < Scalar::ratio(1, 1_000_000_000));
    }

    #[test]
    fn tabulated_error_bound_dominates_the_series() {
        let phi = ValidatedPhi::new(
            ComparisonFunction::tabulated(vec![(rat(1, 1), rat(1, 2))], rat(1, 4), rat(1, 2)).unwrap(),
        )
        .unwrap();
        let d0 = Scalar::from_integer(3);
        for n in 0..4 {
            let series: Scalar = (n..n + 60).fold(Scalar::zero(), |acc, k| &acc + &phi.iterate(&d0, k));
            assert!(error_bound(&phi, &d0, n) >= series);
        }
    }

    #[test]
    fn promotion() {
        assert_eq!(promote_to_common_fixed(&first_example(), &Scalar::zero()), Ok(Scalar::zero()));
        assert_eq!(promote_to_common_fixed(&second_example(), &Scalar::zero()), Ok(Scalar::zero()));
        // f ≡ 0, g swaps: 1 coincides (f1 = g1 = 0) but f(g1) = 0 ≠ g(f1) = 1
        let inst = line(&[0, 0], &[1, 0], &[(0, 0)]);
        assert!(matches!(
            promote_to_common_fixed(&inst, &PointId(1)),
            Err(PromotionFailure::NotWeaklyCompatible { .. })
        ));
        assert!(matches!(
            promote_to_common_fixed(&inst, &PointId(0)),
            Err(PromotionFailure::NotCoincidence(_))
        ));
    }
}
