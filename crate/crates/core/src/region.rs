//! Bounded rational intervals, rationality classes and finite unions of them.
//!
//! A [`Region`] is a finite union of [`Cell`]s, each an interval intersected
//! with a number class (all reals, rationals only, irrationals only). Subset
//! and disjointness tests are exact: the endpoints of both regions split the
//! line into finitely many elementary pieces (single rational points and
//! open gaps), and within one open gap membership of a cell depends only on
//! the class of the point.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{format_rational, parse_rational, rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bound {
    pub value: BigRational,
    pub closed: bool,
}

impl Bound {
    pub fn closed(value: BigRational) -> Self {
        Bound { value, closed: true }
    }

    pub fn open(value: BigRational) -> Self {
        Bound { value, closed: false }
    }
}

/// A bounded interval with rational endpoints; `[a,a]` is a single point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("`{0}` is not an interval (expected forms like `[0,4)`, `(-2,3]` or `{{2}}`)")]
    Syntax(String),
    #[error("interval `{0}` is empty")]
    Empty(String),
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self, IntervalError> {
        let iv = Interval { lo, hi };
        if iv.is_empty() {
            return Err(IntervalError::Empty(iv.to_string()));
        }
        Ok(iv)
    }

    pub fn point(value: BigRational) -> Self {
        Interval {
            lo: Bound::closed(value.clone()),
            hi: Bound::closed(value),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.value.cmp(&self.hi.value) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !(self.lo.closed && self.hi.closed),
            std::cmp::Ordering::Greater => true,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo.value == self.hi.value && self.lo.closed && self.hi.closed
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let lo = Scalar::from_rational(self.lo.value.clone());
        let hi = Scalar::from_rational(self.hi.value.clone());
        let above = if self.lo.closed { *x >= lo } else { *x > lo };
        let below = if self.hi.closed { *x <= hi } else { *x < hi };
        above && below
    }

    /// Intersection, or `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = match self.lo.value.cmp(&other.lo.value) {
            std::cmp::Ordering::Greater => self.lo.clone(),
            std::cmp::Ordering::Less => other.lo.clone(),
            std::cmp::Ordering::Equal => Bound {
                value: self.lo.value.clone(),
                closed: self.lo.closed && other.lo.closed,
            },
        };
        let hi = match self.hi.value.cmp(&other.hi.value) {
            std::cmp::Ordering::Less => self.hi.clone(),
            std::cmp::Ordering::Greater => other.hi.clone(),
            std::cmp::Ordering::Equal => Bound {
                value: self.hi.value.clone(),
                closed: self.hi.closed && other.hi.closed,
            },
        };
        let iv = Interval { lo, hi };
        (!iv.is_empty()).then_some(iv)
    }

    /// Image under `x ↦ slope·x + intercept` with `slope ≠ 0`.
    fn affine_image(&self, slope: &BigRational, intercept: &BigRational) -> Interval {
        let lo = Bound {
            value: &self.lo.value * slope + intercept,
            closed: self.lo.closed,
        };
        let hi = Bound {
            value: &self.hi.value * slope + intercept,
            closed: self.hi.closed,
        };
        if slope.is_negative() {
            Interval { lo: hi, hi: lo }
        } else {
            Interval { lo, hi }
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi.value - &self.lo.value
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", format_rational(&self.lo.value));
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo.closed { '[' } else { '(' },
            format_rational(&self.lo.value),
            format_rational(&self.hi.value),
            if self.hi.closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Interval {
    type Err = IntervalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let syntax = || IntervalError::Syntax(text.to_string());
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            return parse_rational(inner).map(Interval::point).ok_or_else(syntax);
        }
        let mut chars = t.chars();
        let lo_closed = match chars.next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(syntax()),
        };
        let hi_closed = match chars.next_back() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(syntax()),
        };
        let (lo, hi) = chars.as_str().split_once(',').ok_or_else(syntax)?;
        let lo = parse_rational(lo).ok_or_else(syntax)?;
        let hi = parse_rational(hi).ok_or_else(syntax)?;
        Interval::new(
            Bound { value: lo, closed: lo_closed },
            Bound { value: hi, closed: hi_closed },
        )
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Which reals of an interval a cell keeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumberClass {
    #[default]
    Any,
    Rational,
    Irrational,
}

impl NumberClass {
    pub fn admits(self, x: &Scalar) -> bool {
        match self {
            NumberClass::Any => true,
            NumberClass::Rational => x.is_rational(),
            NumberClass::Irrational => !x.is_rational(),
        }
    }

    pub fn intersect(self, other: NumberClass) -> Option<NumberClass> {
        use NumberClass::*;
        match (self, other) {
            (Any, c) | (c, Any) => Some(c),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

/// An interval restricted to a number class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub interval: Interval,
    pub class: NumberClass,
}

impl Cell {
    pub fn new(interval: Interval, class: NumberClass) -> Self {
        Cell { interval, class }
    }

    pub fn all(interval: Interval) -> Self {
        Cell::new(interval, NumberClass::Any)
    }

    pub fn point(value: BigRational) -> Self {
        Cell::all(Interval::point(value))
    }

    /// Irrational cells over a single (rational) point are empty.
    pub fn is_empty(&self) -> bool {
        self.interval.is_empty() || (self.interval.is_point() && self.class == NumberClass::Irrational)
    }

    /// The single point of a degenerate cell.
    pub fn as_point(&self) -> Option<Scalar> {
        (self.interval.is_point() && self.class != NumberClass::Irrational)
            .then(|| Scalar::from_rational(self.interval.lo.value.clone()))
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.class.admits(x) && self.interval.contains(x)
    }

    pub fn intersect(&self, other: &Cell) -> Option<Cell> {
        let class = self.class.intersect(other.class)?;
        let interval = self.interval.intersect(&other.interval)?;
        let cell = Cell { interval, class };
        (!cell.is_empty()).then_some(cell)
    }

    /// Image under the affine map `slope·x + intercept`.
    pub fn affine_image(&self, slope: &BigRational, intercept: &BigRational) -> Cell {
        if slope.is_zero() {
            Cell::point(intercept.clone())
        } else {
            Cell::new(self.interval.affine_image(slope, intercept), self.class)
        }
    }

    /// A canonical member: the simplest rational for rational-admitting cells,
    /// otherwise an irrational of the form `c + k·√2`.
    pub fn representative(&self) -> Scalar {
        match self.class {
            NumberClass::Irrational => irrational_in(&self.interval),
            _ => simplest_rational_in(&self.interval),
        }
    }

    /// Up to `count` members spread across the cell, endpoints included when
    /// closed. Irrational-admitting cells contribute irrational members too.
    pub fn samples(&self, count: usize) -> Vec<Scalar> {
        if let Some(p) = self.as_point() {
            return vec![p];
        }
        let count = count.max(1);
        let iv = &self.interval;
        let mut out = Vec::new();
        if self.class != NumberClass::Irrational {
            out.push(simplest_rational_in(iv));
            if iv.lo.closed {
                out.push(Scalar::from_rational(iv.lo.value.clone()));
            }
            if iv.hi.closed {
                out.push(Scalar::from_rational(iv.hi.value.clone()));
            }
            for j in 1..=count {
                let t = rat(j as i64, count as i64 + 1);
                out.push(Scalar::from_rational(&iv.lo.value + iv.width() * t));
            }
        }
        if self.class != NumberClass::Rational {
            out.push(irrational_in(iv));
            // lo + w·j/(count+1)·(√2/2) stays strictly inside (lo, hi).
            for j in 1..=count {
                let k = iv.width() * rat(j as i64, 2 * (count as i64 + 1));
                out.push(Scalar::new(iv.lo.value.clone(), k));
            }
        }
        out.retain(|x| self.contains(x));
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            NumberClass::Any => write!(f, "{}", self.interval),
            NumberClass::Rational => write!(f, "rationals in {}", self.interval),
            NumberClass::Irrational => write!(f, "irrationals in {}", self.interval),
        }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The rational with the smallest denominator (then smallest magnitude) in a
/// nonempty interval.
pub fn simplest_rational_in(iv: &Interval) -> Scalar {
    if iv.is_point() {
        return Scalar::from_rational(iv.lo.value.clone());
    }
    let mut den: i64 = 1;
    loop {
        let d = BigRational::from_integer(den.into());
        let first = (&iv.lo.value * &d).ceil();
        let last = (&iv.hi.value * &d).floor();
        // Numerators nearest zero first; open ends may exclude the extremes.
        let mut candidates = Vec::new();
        if first <= BigRational::zero() && last >= BigRational::zero() {
            candidates.push(BigRational::zero());
        }
        for k in [&first, &last] {
            for step in 0..2 {
                candidates.push(if k == &first {
                    k + BigRational::from_integer(step.into())
                } else {
                    k - BigRational::from_integer(step.into())
                });
            }
        }
        candidates.sort_by(|a, b| a.abs().cmp(&b.abs()).then(a.cmp(b)));
        if let Some(x) = candidates
            .into_iter()
            .map(|k| k / &d)
            .find(|x| iv.contains(&Scalar::from_rational(x.clone())))
        {
            return Scalar::from_rational(x);
        }
        den += 1;
    }
}

/// A canonical irrational inside a non-degenerate interval: the first of
/// `√2, √2/2, 2√2, -√2, ...` that fits, else `lo + w·√2/2`.
pub fn irrational_in(iv: &Interval) -> Scalar {
    for (n, d) in [(1, 1), (1, 2), (2, 1), (3, 2), (-1, 1), (-1, 2), (-2, 1), (1, 4), (5, 2)] {
        let x = Scalar::sqrt2_times(rat(n, d));
        if iv.contains(&x) {
            return x;
        }
    }
    Scalar::new(iv.lo.value.clone(), iv.width() * rat(1, 2))
}

/// A finite union of cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    pub cells: Vec<Cell>,
}

impl Region {
    pub fn new(cells: Vec<Cell>) -> Self {
        Region {
            cells: cells.into_iter().filter(|c| !c.is_empty()).collect(),
        }
    }

    pub fn from_points(points: impl IntoIterator<Item = BigRational>) -> Self {
        Region::new(points.into_iter().map(Cell::point).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.cells.iter().any(|c| c.contains(x))
    }

    /// The points of the region when it is a finite set.
    pub fn finite_points(&self) -> Option<Vec<Scalar>> {
        let mut out = self
            .cells
            .iter()
            .map(Cell::as_point)
            .collect::<Option<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Some(out)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Region::new(cells)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if let Some(c) = a.intersect(b) {
                    cells.push(c);
                }
            }
        }
        Region::new(cells)
    }

    /// One representative per elementary piece of the common refinement of
    /// `self` and `other`. Each representative stands for every point of its
    /// piece with the same rationality.
    fn elementary_witnesses(&self, other: &Region) -> Vec<Scalar> {
        let mut ends: Vec<BigRational> = self
            .cells
            .iter()
            .chain(other.cells.iter())
            .flat_map(|c| [c.interval.lo.value.clone(), c.interval.hi.value.clone()])
            .collect();
        ends.sort();
        ends.dedup();
        let mut out: Vec<Scalar> = ends.iter().cloned().map(Scalar::from_rational).collect();
        for pair in ends.windows(2) {
            let gap = Interval {
                lo: Bound::open(pair[0].clone()),
                hi: Bound::open(pair[1].clone()),
            };
            out.push(Scalar::from_rational((&pair[0] + &pair[1]) * rat(1, 2)));
            out.push(irrational_in(&gap));
        }
        out
    }

    /// `Ok(())` when `self ⊆ other`, else a point of `self` outside `other`.
    pub fn subset_of(&self, other: &Region) -> Result<(), Scalar> {
        match self
            .elementary_witnesses(other)
            .into_iter()
            .find(|x| self.contains(x) && !other.contains(x))
        {
            Some(x) => Err(x),
            None => Ok(()),
        }
    }

    /// `None` when disjoint, else a common point.
    pub fn common_point(&self, other: &Region) -> Option<Scalar> {
        self.elementary_witnesses(other)
            .into_iter()
            .find(|x| self.contains(x) && other.contains(x))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(text: &str) -> Interval {
        text.parse().unwrap()
    }

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn interval_syntax() {
        assert_eq!(iv("(-2,4)").to_string(), "(-2,4)");
        assert_eq!(iv("[0,4)").to_string(), "[0,4)");
        assert_eq!(iv("{2}").to_string(), "{2}");
        assert_eq!(iv("[2,2]").to_string(), "{2}");
        assert!("(2,2)".parse::<Interval>().is_err());
        assert!("[0,4".parse::<Interval>().is_err());
    }

    #[test]
    fn membership_respects_open_ends_and_class() {
        let c = Cell::new(iv("(0,1)"), NumberClass::Irrational);
        assert!(c.contains(&s("1/2*sqrt2")));
        assert!(!c.contains(&s("1/2")));
        assert!(!c.contains(&s("sqrt2")));
        assert!(!iv("(0,1)").contains(&Scalar::zero()));
        assert!(iv("[0,1)").contains(&Scalar::zero()));
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_rational_in(&iv("(-2,3]")), Scalar::zero());
        assert_eq!(simplest_rational_in(&iv("(3,4)")), s("7/2"));
        assert_eq!(simplest_rational_in(&iv("(1/3,1/2)")), s("2/5"));
        assert_eq!(simplest_rational_in(&iv("[5,7]")), s("5"));
    }

    #[test]
    fn subset_is_exact_on_gaps_and_classes() {
        // Example-5.1 style: [-1/2,1) ⊆ (-2/3,1]
        let y = Region::new(vec![Cell::all(iv("[-1/2,1)"))]);
        let gx = Region::new(vec![Cell::all(iv("(-2/3,1]"))]);
        assert!(y.subset_of(&gx).is_ok());
        assert!(gx.subset_of(&y).is_err());

        // rationals ∪ irrationals of an interval cover the interval
        let split = Region::new(vec![
            Cell::new(iv("[0,4)"), NumberClass::Rational),
            Cell::new(iv("[0,4)"), NumberClass::Irrational),
        ]);
        let whole = Region::new(vec![Cell::all(iv("[0,4)"))]);
        assert!(whole.subset_of(&split).is_ok());
        let rationals = Region::new(vec![Cell::new(iv("[0,4)"), NumberClass::Rational)]);
        let missing = whole.subset_of(&rationals).unwrap_err();
        assert!(!missing.is_rational());
    }

    #[test]
    fn affine_images() {
        let c = Cell::all(iv("(-2,3]"));
        assert_eq!(c.affine_image(&rat(1, 3), &rat(0, 1)).interval, iv("(-2/3,1]"));
        assert_eq!(c.affine_image(&rat(-1, 1), &rat(0, 1)).interval, iv("[-3,2)"));
        assert_eq!(c.affine_image(&rat(0, 1), &rat(5, 1)).as_point(), Some(s("5")));
    }

    #[test]
    fn samples_stay_inside() {
        for text in ["(0,1)", "[0,4)", "(-2,3]", "(2,4)"] {
            for class in [NumberClass::Any, NumberClass::Rational, NumberClass::Irrational] {
                let c = Cell::new(iv(text), class);
                let xs = c.samples(5);
                assert!(!xs.is_empty());
                assert!(xs.iter().all(|x| c.contains(x)));
            }
        }
    }
}
