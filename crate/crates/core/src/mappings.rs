//! Mapping pairs `(f, g)` and the pair-level predicates: coincidence sets,
//! commutation variants, `(f,g)`-closedness and the injective section of `g`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::instance::{Rep, Setting};
use crate::region::{Cell, Region};
use crate::relspace::PointId;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error("map `{map}` sends {point} to {image}, outside the carrier")]
    ImageOutside { map: String, point: String, image: String },
    #[error("map `{map}` has {found} values for a carrier of {expected} points")]
    WrongLength { map: String, expected: usize, found: usize },
    #[error("map `{map}` is undefined at {point}")]
    NotTotal { map: String, point: String },
    #[error("map `{map}` has overlapping pieces at {point}")]
    Overlap { map: String, point: String },
    #[error("undecidable: {0}")]
    Undecidable(String),
}

/// A pair of self-maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair<M> {
    pub f: M,
    pub g: M,
}

impl<M> Pair<M> {
    pub fn new(f: M, g: M) -> Self {
        Pair { f, g }
    }

    pub fn swapped(self) -> Pair<M> {
        Pair { f: self.g, g: self.f }
    }
}

/// A total self-map of a finite carrier, stored as its value list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMap(pub Vec<PointId>);

impl FiniteMap {
    pub fn from_indices(values: impl IntoIterator<Item = usize>) -> Self {
        FiniteMap(values.into_iter().map(PointId).collect())
    }

    pub fn identity(n: usize) -> Self {
        FiniteMap::from_indices(0..n)
    }

    pub fn constant(n: usize, value: usize) -> Self {
        FiniteMap::from_indices(std::iter::repeat_n(value, n))
    }

    pub fn apply(&self, p: PointId) -> PointId {
        self.0[p.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `f(X)`, sorted.
    pub fn image(&self) -> Vec<PointId> {
        let set: BTreeSet<PointId> = self.0.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_injective(&self) -> Result<(), (PointId, PointId)> {
        let mut seen: BTreeMap<PointId, PointId> = BTreeMap::new();
        for (i, &y) in self.0.iter().enumerate() {
            if let Some(&first) = seen.get(&y) {
                return Err((first, PointId(i)));
            }
            seen.insert(y, PointId(i));
        }
        Ok(())
    }

    pub fn validate(&self, name: &str, n: usize) -> Result<(), MappingError> {
        if self.0.len() != n {
            return Err(MappingError::WrongLength {
                map: name.into(),
                expected: n,
                found: self.0.len(),
            });
        }
        if let Some((i, y)) = self.0.iter().enumerate().find(|(_, y)| y.0 >= n) {
            return Err(MappingError::ImageOutside {
                map: name.into(),
                point: i.to_string(),
                image: y.0.to_string(),
            });
        }
        Ok(())
    }
}

pub type FinitePair = Pair<FiniteMap>;

/// One affine piece `x ↦ slope·x + intercept` on a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub cell: Cell,
    pub slope: BigRational,
    pub intercept: BigRational,
}

impl Piece {
    pub fn constant(cell: Cell, value: BigRational) -> Self {
        Piece {
            cell,
            slope: BigRational::zero(),
            intercept: value,
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        &x.scale(&self.slope) + &Scalar::from_rational(self.intercept.clone())
    }

    pub fn image(&self) -> Cell {
        self.cell.affine_image(&self.slope, &self.intercept)
    }

    /// Constant on its cell (zero slope, or a single-point cell).
    pub fn is_constant(&self) -> bool {
        self.slope.is_zero() || self.cell.as_point().is_some()
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::scalar::format_rational as r;
        if self.slope.is_zero() {
            write!(f, "{} on {}", r(&self.intercept), self.cell)
        } else {
            write!(f, "{}x+{} on {}", r(&self.slope), r(&self.intercept), self.cell)
        }
    }
}

/// A piecewise-affine map with pairwise-disjoint pieces over rational
/// breakpoints, optionally split by rationality. Covers constants,
/// piecewise-linear maps and piecewise-by-rationality maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseMap {
    pieces: Vec<Piece>,
}

impl PiecewiseMap {
    pub fn new(pieces: Vec<Piece>) -> Self {
        PiecewiseMap { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece_at(&self, x: &Scalar) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.cell.contains(x))
    }

    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        self.piece_at(x).map(|p| p.eval(x))
    }

    pub fn image(&self) -> Region {
        Region::new(self.pieces.iter().map(Piece::image).collect())
    }

    /// The single value of a constant map.
    pub fn constant_value(&self) -> Option<Scalar> {
        let img = self.image().finite_points()?;
        (img.len() == 1).then(|| img[0].clone())
    }

    /// Totality on `carrier`, disjointness of pieces and `image ⊆ carrier`.
    pub fn validate(&self, name: &str, carrier: &Region) -> Result<(), MappingError> {
        let domain = Region::new(self.pieces.iter().map(|p| p.cell.clone()).collect());
        if let Err(x) = carrier.subset_of(&domain) {
            return Err(MappingError::NotTotal {
                map: name.into(),
                point: x.to_string(),
            });
        }
        for (i, a) in self.pieces.iter().enumerate() {
            for b in &self.pieces[i + 1..] {
                let ra = Region::new(vec![a.cell.clone()]).intersect(carrier);
                if let Some(x) = ra.common_point(&Region::new(vec![b.cell.clone()])) {
                    return Err(MappingError::Overlap {
                        map: name.into(),
                        point: x.to_string(),
                    });
                }
            }
        }
        for piece in &self.pieces {
            let Some(cell) = Region::new(vec![piece.cell.clone()])
                .intersect(carrier)
                .cells
                .first()
                .cloned()
            else {
                continue;
            };
            let restricted = Piece { cell, ..piece.clone() };
            if let Err(y) = Region::new(vec![restricted.image()]).subset_of(carrier) {
                return Err(MappingError::ImageOutside {
                    map: name.into(),
                    point: restricted.cell.to_string(),
                    image: y.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

pub type IntervalPair = Pair<PiecewiseMap>;

/// `C(f,g)`, the points of coincidence and the common fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoincidenceProfile<P> {
    pub coincidence_points: Vec<P>,
    pub points_of_coincidence: Vec<P>,
    pub common_fixed_points: Vec<P>,
}

impl<P: Ord + Clone> CoincidenceProfile<P> {
    /// Builds the profile from `C(f,g)` and `g`.
    pub fn from_coincidences(mut coincidences: Vec<P>, g: impl Fn(&P) -> P) -> Self {
        coincidences.sort();
        coincidences.dedup();
        let mut poc: Vec<P> = coincidences.iter().map(&g).collect();
        poc.sort();
        poc.dedup();
        let common = coincidences
            .iter()
            .filter(|u| g(u) == **u)
            .cloned()
            .collect();
        CoincidenceProfile {
            coincidence_points: coincidences,
            points_of_coincidence: poc,
            common_fixed_points: common,
        }
    }

    pub fn is_coincidence(&self, p: &P) -> bool {
        self.coincidence_points.binary_search(p).is_ok()
    }
}

/// Exhaustive `C(f,g)` on a finite carrier.
pub fn coincidence_profile(pair: &FinitePair) -> CoincidenceProfile<PointId> {
    let c = (0..pair.f.len())
        .map(PointId)
        .filter(|&u| pair.f.apply(u) == pair.g.apply(u))
        .collect();
    CoincidenceProfile::from_coincidences(c, |&u| pair.g.apply(u))
}

/// Closed-form `C(f,g)` for piecewise-affine maps: on each common cell of a
/// piece of `f` and a piece of `g` the equation `a·x + b = c·x + d` has at
/// most one root unless both pieces agree, in which case the whole cell
/// coincides. A coincident cell with more than one point is reported as
/// undecidable.
pub fn coincidence_profile_interval(
    pair: &IntervalPair,
    carrier: &Region,
) -> Result<CoincidenceProfile<Scalar>, MappingError> {
    let mut points = Vec::new();
    for pf in pair.f.pieces() {
        for pg in pair.g.pieces() {
            let Some(cell) = pf.cell.intersect(&pg.cell) else {
                continue;
            };
            let Some(cell) = Region::new(vec![cell]).intersect(carrier).cells.first().cloned() else {
                continue;
            };
            let ds = &pf.slope - &pg.slope;
            if ds.is_zero() {
                if pf.intercept == pg.intercept {
                    match cell.as_point() {
                        Some(p) => points.push(p),
                        None => {
                            return Err(MappingError::Undecidable(format!(
                                "f and g agree on all of {cell}; the coincidence set is a continuum"
                            )))
                        }
                    }
                }
            } else {
                let x = Scalar::from_rational((&pg.intercept - &pf.intercept) / ds);
                if cell.contains(&x) {
                    points.push(x);
                }
            }
        }
    }
    let g = |x: &Scalar| pair.g.eval(x).expect("coincidence point lies in the carrier");
    Ok(CoincidenceProfile::from_coincidences(points, g))
}

/// One commutation flag: `Ok` or the first witness point.
pub type Flag<P> = Result<(), Rep<P>>;

/// Commuting, weakly commuting and weakly compatible (commuting at every
/// coincidence point) flags, each with a witness when false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingProfile<P> {
    pub commuting: Flag<P>,
    pub weakly_commuting: Flag<P>,
    pub weakly_compatible: Flag<P>,
    /// Whether the scan covered every point (or every equivalence class).
    pub exhaustive: bool,
}

/// Scans the setting's quantification domain for the three commutation
/// properties. `weakly_compatible` is decided on `C(f,g)` when it is known
/// in closed form, otherwise on the scanned points that coincide.
pub fn commuting_profile<S: Setting>(setting: &S, density: usize) -> CommutingProfile<S::Point> {
    let q = setting.quantifier(density);
    let mut commuting = Ok(());
    let mut weakly_commuting = Ok(());
    for rep in &q.reps {
        let u = &rep.point;
        let fg = setting.f(&setting.g(u));
        let gf = setting.g(&setting.f(u));
        if commuting.is_ok() && fg != gf {
            commuting = Err(rep.clone());
        }
        if weakly_commuting.is_ok()
            && setting.distance(&fg, &gf) > setting.distance(&setting.f(u), &setting.g(u))
        {
            weakly_commuting = Err(rep.clone());
        }
    }
    let (coincidences, exact) = match setting.coincidence_profile() {
        Ok(profile) => (
            profile
                .coincidence_points
                .into_iter()
                .map(|p| setting.rep(p))
                .collect::<Vec<_>>(),
            true,
        ),
        Err(_) => (
            q.reps
                .iter()
                .filter(|r| setting.f(&r.point) == setting.g(&r.point))
                .cloned()
                .collect(),
            false,
        ),
    };
    let weakly_compatible = match coincidences
        .into_iter()
        .find(|r| setting.f(&setting.g(&r.point)) != setting.g(&setting.f(&r.point)))
    {
        Some(r) => Err(r),
        None => Ok(()),
    };
    CommutingProfile {
        commuting,
        weakly_commuting,
        weakly_compatible,
        exhaustive: q.exhaustive && exact,
    }
}

/// Result of an `(f,g)`-closedness scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closedness<P> {
    Closed { exhaustive: bool, pairs_checked: usize },
    /// `(gu,gv) ∈ R` but `(fu,fv) ∉ R`.
    Violated { u: Rep<P>, v: Rep<P> },
}

impl<P> Closedness<P> {
    pub fn holds(&self) -> bool {
        matches!(self, Closedness::Closed { .. })
    }
}

/// `(gu,gv) ∈ R ⇒ (fu,fv) ∈ R` for all `u, v`. A constant `f = c` with
/// `(c,c) ∈ R` is closed outright.
pub fn is_fg_closed<S: Setting>(
    setting: &S,
    related: impl Fn(&S::Point, &S::Point) -> bool,
    density: usize,
) -> Closedness<S::Point> {
    if let Some(c) = setting.f_constant() {
        if related(&c, &c) {
            return Closedness::Closed {
                exhaustive: true,
                pairs_checked: 0,
            };
        }
    }
    let q = setting.quantifier(density);
    let images: Vec<(S::Point, S::Point)> = q
        .reps
        .iter()
        .map(|r| (setting.f(&r.point), setting.g(&r.point)))
        .collect();
    let mut checked = 0;
    for (i, (fu, gu)) in images.iter().enumerate() {
        for (j, (fv, gv)) in images.iter().enumerate() {
            if related(gu, gv) {
                checked += 1;
                if !related(fu, fv) {
                    return Closedness::Violated {
                        u: q.reps[i].clone(),
                        v: q.reps[j].clone(),
                    };
                }
            }
        }
    }
    Closedness::Closed {
        exhaustive: q.exhaustive,
        pairs_checked: checked,
    }
}

/// A subset `Z` on which `g` is injective with `g(Z) = g(X)`, choosing the
/// least point of each fibre.
pub fn g_section(g: &FiniteMap) -> Vec<PointId> {
    let mut first: BTreeMap<PointId, PointId> = BTreeMap::new();
    for (i, &y) in g.0.iter().enumerate() {
        first.entry(y).or_insert(PointId(i));
    }
    let mut z: Vec<PointId> = first.into_values().collect();
    z.sort();
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::FiniteInstance;
    use crate::relspace::{DistanceTable, FiniteRelation, FiniteSpace};
    use crate::scalar::rat;

    fn finite(f: &[usize], g: &[usize], pairs: &[(usize, usize)]) -> FiniteInstance {
        let n = f.len();
        let table = DistanceTable::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| rat((i as i64 - j as i64).abs(), 1)).collect())
                .collect(),
        )
        .unwrap();
        let space = FiniteSpace::new(
            (0..n).map(|i| i.to_string()).collect(),
            table,
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
    fn identity_pair_coincides_everywhere() {
        let pair = Pair::new(FiniteMap::identity(4), FiniteMap::identity(4));
        let profile = coincidence_profile(&pair);
        assert_eq!(profile.coincidence_points.len(), 4);
        assert_eq!(profile.common_fixed_points, profile.coincidence_points);
    }

    #[test]
    fn cyclic_pair_on_three_points() {
        // f(x) = x+1 mod 3, g(x) = 2x mod 3. f(g(x)) = 2x+1, g(f(x)) = 2x+2.
        let inst = finite(&[1, 2, 0], &[0, 2, 1], &[(0, 0)]);
        let profile = coincidence_profile(&inst.pair);
        // x+1 ≡ 2x (mod 3) ⇔ x = 1
        assert_eq!(profile.coincidence_points, vec![PointId(1)]);
        assert_eq!(profile.points_of_coincidence, vec![PointId(2)]);
        assert!(profile.common_fixed_points.is_empty());
        let flags = commuting_profile(&inst, 0);
        assert_eq!(flags.commuting.unwrap_err().point, PointId(0));
        // d(f(g0), g(f0)) = d(1, 2) = 1 > d(f0, g0) = d(1, 0) = 1? equal, so 0 passes; 1 fails.
        assert_eq!(flags.weakly_commuting.unwrap_err().point, PointId(1));
        assert_eq!(flags.weakly_compatible.unwrap_err().point, PointId(1));
        assert!(flags.exhaustive);
    }

    #[test]
    fn flags_are_monotone_on_small_pairs() {
        // every pair of maps on 3 points
        let maps: Vec<Vec<usize>> = (0..27).map(|k| vec![k % 3, (k / 3) % 3, k / 9]).collect();
        for f in &maps {
            for g in &maps {
                let inst = finite(f, g, &[(0, 1)]);
                let p = commuting_profile(&inst, 0);
                if p.commuting.is_ok() {
                    assert!(p.weakly_commuting.is_ok());
                }
                if p.weakly_commuting.is_ok() {
                    assert!(p.weakly_compatible.is_ok());
                }
                let a = coincidence_profile(&inst.pair);
                let b = coincidence_profile(&inst.pair.clone().swapped());
                assert_eq!(a.coincidence_points, b.coincidence_points);
            }
        }
    }

    #[test]
    fn constant_f_outside_the_relation_breaks_closedness() {
        // g = identity, f ≡ 2, (2,2) ∉ R, (0,1) ∈ R
        let inst = finite(&[2, 2, 2], &[0, 1, 2], &[(0, 1)]);
        match is_fg_closed(&inst, |u, v| inst.space.relation().contains(u, v), 0) {
            Closedness::Violated { u, v } => {
                assert_eq!((u.point, v.point), (PointId(0), PointId(1)))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sections() {
        // finite analogue of the second example: labels 0,1,2,q,r with g = id on
        // {0,1,2} and 3 elsewhere; slot 3 holds the value 3 itself.
        let g = FiniteMap::from_indices([0, 1, 2, 3, 3, 3]);
        assert_eq!(g_section(&g), vec![PointId(0), PointId(1), PointId(2), PointId(3)]);
        assert_eq!(g_section(&FiniteMap::identity(4)).len(), 4);
        assert_eq!(g_section(&FiniteMap::constant(5, 3)), vec![PointId(0)]);
    }

    use crate::relspace::Relation;
}
