//! Instances `(X, d, R, f, g)` and the [`Setting`] abstraction the checkers
//! quantify over.
//!
//! A finite instance quantifies over every point. An interval instance
//! quantifies over the atoms of the common refinement of the pieces of `f`
//! and `g`: when both maps are constant on every atom, one representative per
//! atom decides any predicate built from `fu`, `gu` and `R`, and the scan is
//! exhaustive. Otherwise each atom contributes sample points and the scan is
//! flagged as sampled.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::mappings::{
    coincidence_profile, coincidence_profile_interval, CoincidenceProfile, FiniteMap, FinitePair,
    IntervalPair, MappingError, Piece, PiecewiseMap,
};
use crate::region::{Cell, Region};
use crate::relspace::{FiniteSpace, IntervalSpace, PointId, Relation};
use crate::scalar::Scalar;

/// A point together with how to print it and, for interval instances, the
/// class it stands for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rep<P> {
    pub point: P,
    pub label: String,
    pub class: Option<String>,
}

impl<P> fmt::Display for Rep<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.class {
            Some(class) => write!(f, "{} [{}]", self.label, class),
            None => f.write_str(&self.label),
        }
    }
}

/// The points a universally quantified check ranges over.
#[derive(Debug, Clone)]
pub struct Quantifier<P> {
    pub reps: Vec<Rep<P>>,
    pub exhaustive: bool,
}

/// What the checkers need from an instance.
pub trait Setting: Sync {
    type Point: Clone + Ord + fmt::Debug + Send + Sync;

    fn f(&self, u: &Self::Point) -> Self::Point;
    fn g(&self, u: &Self::Point) -> Self::Point;
    fn distance(&self, u: &Self::Point, v: &Self::Point) -> Scalar;
    fn related(&self, u: &Self::Point, v: &Self::Point) -> bool;

    fn rep(&self, p: Self::Point) -> Rep<Self::Point>;

    /// Points for universally quantified scans; `density` is the number of
    /// samples per atom when the scan cannot be exhaustive.
    fn quantifier(&self, density: usize) -> Quantifier<Self::Point>;

    /// The value of `f` when `f` is constant.
    fn f_constant(&self) -> Option<Self::Point>;

    /// A deterministic point of `g⁻¹(y)`, if any.
    fn g_preimage(&self, y: &Self::Point) -> Option<Self::Point>;

    fn coincidence_profile(&self) -> Result<CoincidenceProfile<Self::Point>, MappingError>;

    /// `f(X)` when it is a finite set.
    fn f_image_points(&self) -> Option<Vec<Self::Point>>;

    /// Candidates for `w₀`, in preference order.
    fn start_candidates(&self) -> Vec<Self::Point>;

    /// Finite carriers allow exact termination and exact sequence arguments.
    fn is_finite(&self) -> bool;
}

/// A space together with a validated pair of self-maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<S, M> {
    pub space: S,
    pub pair: crate::mappings::Pair<M>,
}

pub type FiniteInstance = Instance<FiniteSpace, FiniteMap>;
pub type IntervalInstance = Instance<IntervalSpace, PiecewiseMap>;

impl FiniteInstance {
    pub fn new(space: FiniteSpace, pair: FinitePair) -> Result<Self, MappingError> {
        pair.f.validate("f", space.len())?;
        pair.g.validate("g", space.len())?;
        Ok(Instance { space, pair })
    }

    pub fn label(&self, p: PointId) -> &str {
        self.space.label(p)
    }

    pub fn labels_of(&self, points: &[PointId]) -> Vec<String> {
        points.iter().map(|&p| self.label(p).to_string()).collect()
    }

    pub fn g_image(&self) -> Vec<PointId> {
        self.pair.g.image()
    }
}

impl Setting for FiniteInstance {
    type Point = PointId;

    fn f(&self, u: &PointId) -> PointId {
        self.pair.f.apply(*u)
    }

    fn g(&self, u: &PointId) -> PointId {
        self.pair.g.apply(*u)
    }

    fn distance(&self, u: &PointId, v: &PointId) -> Scalar {
        Scalar::from_rational(self.space.distance(*u, *v).clone())
    }

    fn related(&self, u: &PointId, v: &PointId) -> bool {
        self.space.relation().contains(u, v)
    }

    fn rep(&self, p: PointId) -> Rep<PointId> {
        Rep {
            label: self.label(p).to_string(),
            point: p,
            class: None,
        }
    }

    fn quantifier(&self, _density: usize) -> Quantifier<PointId> {
        Quantifier {
            reps: self.space.points().map(|p| self.rep(p)).collect(),
            exhaustive: true,
        }
    }

    fn f_constant(&self) -> Option<PointId> {
        let img = self.pair.f.image();
        (img.len() == 1).then(|| img[0])
    }

    fn g_preimage(&self, y: &PointId) -> Option<PointId> {
        self.space.points().find(|&w| self.pair.g.apply(w) == *y)
    }

    fn coincidence_profile(&self) -> Result<CoincidenceProfile<PointId>, MappingError> {
        Ok(coincidence_profile(&self.pair))
    }

    fn f_image_points(&self) -> Option<Vec<PointId>> {
        Some(self.pair.f.image())
    }

    fn start_candidates(&self) -> Vec<PointId> {
        self.space.points().collect()
    }

    fn is_finite(&self) -> bool {
        true
    }
}

impl IntervalInstance {
    pub fn new(space: IntervalSpace, pair: IntervalPair) -> Result<Self, MappingError> {
        let carrier = space.carrier();
        pair.f.validate("f", &carrier)?;
        pair.g.validate("g", &carrier)?;
        Ok(Instance { space, pair })
    }

    /// Nonempty intersections of a piece of `f`, a piece of `g` and the
    /// carrier. They partition the carrier.
    pub fn atoms(&self) -> Vec<Cell> {
        let carrier = self.space.carrier();
        let mut atoms = Vec::new();
        for pf in self.pair.f.pieces() {
            for pg in self.pair.g.pieces() {
                if let Some(cell) = pf.cell.intersect(&pg.cell) {
                    atoms.extend(Region::new(vec![cell]).intersect(&carrier).cells);
                }
            }
        }
        atoms
    }

    /// Whether `f` and `g` are constant on every atom.
    pub fn is_reducible(&self) -> bool {
        self.atoms().iter().all(|atom| {
            let x = atom.representative();
            let constant = |m: &PiecewiseMap| m.piece_at(&x).is_some_and(|p| p.is_constant());
            atom.as_point().is_some() || (constant(&self.pair.f) && constant(&self.pair.g))
        })
    }

    pub fn f_image(&self) -> Region {
        self.image_on_carrier(&self.pair.f)
    }

    pub fn g_image(&self) -> Region {
        self.image_on_carrier(&self.pair.g)
    }

    fn image_on_carrier(&self, map: &PiecewiseMap) -> Region {
        let carrier = self.space.carrier();
        let cells = map
            .pieces()
            .iter()
            .flat_map(|p| {
                Region::new(vec![p.cell.clone()])
                    .intersect(&carrier)
                    .cells
                    .into_iter()
                    .map(move |cell| Piece { cell, ..p.clone() }.image())
            })
            .collect();
        Region::new(cells)
    }

    fn rep_in(&self, x: Scalar, atom: &Cell) -> Rep<Scalar> {
        let class = atom.as_point().is_none().then(|| atom.to_string());
        Rep {
            label: x.to_string(),
            point: x,
            class,
        }
    }
}

/// Orders points by simplicity: rationals before irrationals, then smaller
/// denominators, then smaller magnitude.
pub fn simplicity_key(x: &Scalar) -> (bool, num_bigint::BigInt, Scalar, Scalar) {
    let denom = x.rational_part().denom().lcm(x.surd_part().denom());
    (!x.is_rational(), denom, x.abs(), x.clone())
}

impl Setting for IntervalInstance {
    type Point = Scalar;

    fn f(&self, u: &Scalar) -> Scalar {
        self.pair.f.eval(u).expect("f is total on the carrier")
    }

    fn g(&self, u: &Scalar) -> Scalar {
        self.pair.g.eval(u).expect("g is total on the carrier")
    }

    fn distance(&self, u: &Scalar, v: &Scalar) -> Scalar {
        self.space.distance(u, v)
    }

    fn related(&self, u: &Scalar, v: &Scalar) -> bool {
        self.space.relation().contains(u, v)
    }

    fn rep(&self, p: Scalar) -> Rep<Scalar> {
        match self.atoms().into_iter().find(|a| a.contains(&p)) {
            Some(atom) if atom.as_point().is_none() && !p.is_rational() => self.rep_in(p, &atom),
            _ => Rep {
                label: p.to_string(),
                point: p,
                class: None,
            },
        }
    }

    fn quantifier(&self, density: usize) -> Quantifier<Scalar> {
        let exhaustive = self.is_reducible();
        let mut reps: Vec<Rep<Scalar>> = Vec::new();
        for atom in self.atoms() {
            if exhaustive {
                reps.push(self.rep_in(atom.representative(), &atom));
            } else {
                for x in atom.samples(density) {
                    reps.push(self.rep_in(x, &atom));
                }
            }
        }
        reps.sort_by(|a, b| a.point.cmp(&b.point));
        reps.dedup_by(|a, b| a.point == b.point);
        Quantifier { reps, exhaustive }
    }

    fn f_constant(&self) -> Option<Scalar> {
        self.f_image().finite_points().filter(|p| p.len() == 1).map(|mut p| p.remove(0))
    }

    fn g_preimage(&self, y: &Scalar) -> Option<Scalar> {
        let carrier = self.space.carrier();
        let mut found: Vec<Scalar> = Vec::new();
        for piece in self.pair.g.pieces() {
            if piece.slope.is_zero() {
                if Scalar::from_rational(piece.intercept.clone()) == *y {
                    let cells = Region::new(vec![piece.cell.clone()]).intersect(&carrier).cells;
                    found.extend(cells.iter().map(Cell::representative));
                }
            } else {
                let x = (y - &Scalar::from_rational(piece.intercept.clone())).div_rational(&piece.slope);
                if piece.cell.contains(&x) && carrier.contains(&x) {
                    found.push(x);
                }
            }
        }
        found.into_iter().min_by_key(simplicity_key)
    }

    fn coincidence_profile(&self) -> Result<CoincidenceProfile<Scalar>, MappingError> {
        coincidence_profile_interval(&self.pair, &self.space.carrier())
    }

    fn f_image_points(&self) -> Option<Vec<Scalar>> {
        self.f_image().finite_points()
    }

    fn start_candidates(&self) -> Vec<Scalar> {
        let mut pts: Vec<Scalar> = self
            .atoms()
            .iter()
            .flat_map(|a| a.samples(4))
            .collect();
        pts.sort_by_key(simplicity_key);
        pts.dedup();
        pts
    }

    fn is_finite(&self) -> bool {
        false
    }
}
