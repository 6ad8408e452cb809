//! The two worked instances, built directly in code.
//!
//! `first_example`: `X = (-2,4)`, the sign cone relation, `f ≡ 0`,
//! `g(x) = x/3` on `(-2,3]` and `1` on `(3,4)`, `Y = [-1/2,1)`, `φ(t) = t/3`.
//!
//! `second_example`: `X = [0,4)`, an explicit six-pair relation, `f` equal to
//! `0` on rationals and `1` on irrationals, `g` the identity on `{0,1,2}` and
//! `3` elsewhere, `Y = {0,1}`, `φ(t) = 5t/6`.

use crate::mappings::{FiniteMap, Pair, Piece, PiecewiseMap};
use crate::region::{Cell, Interval, NumberClass, Region};
use crate::relspace::{DistanceTable, FiniteRelation, FiniteSpace, IntervalSpace, PointId, RelationDescriptor};
use crate::instance::{FiniteInstance, IntervalInstance};
use crate::scalar::{rat, Scalar};

fn interval(text: &str) -> Interval {
    text.parse().expect("literal interval")
}

pub fn first_example() -> IntervalInstance {
    let space = IntervalSpace::new(
        interval("(-2,4)"),
        RelationDescriptor::SignCone,
        Some(Region::new(vec![Cell::all(interval("[-1/2,1)"))])),
    )
    .expect("valid space");
    let f = PiecewiseMap::new(vec![Piece::constant(Cell::all(interval("(-2,4)")), rat(0, 1))]);
    let g = PiecewiseMap::new(vec![
        Piece {
            cell: Cell::all(interval("(-2,3]")),
            slope: rat(1, 3),
            intercept: rat(0, 1),
        },
        Piece::constant(Cell::all(interval("(3,4)")), rat(1, 1)),
    ]);
    IntervalInstance::new(space, Pair::new(f, g)).expect("valid maps")
}

/// The relation of the second example as integer pairs.
pub const SECOND_RELATION: [(i64, i64); 6] = [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 3)];

pub fn second_example() -> IntervalInstance {
    let pairs = SECOND_RELATION
        .iter()
        .map(|&(a, b)| (Scalar::from_integer(a), Scalar::from_integer(b)))
        .collect();
    let space = IntervalSpace::new(
        interval("[0,4)"),
        RelationDescriptor::Explicit { pairs },
        Some(Region::from_points([rat(0, 1), rat(1, 1)])),
    )
    .expect("valid space");
    let f = PiecewiseMap::new(vec![
        Piece::constant(Cell::new(interval("[0,4)"), NumberClass::Rational), rat(0, 1)),
        Piece::constant(Cell::new(interval("[0,4)"), NumberClass::Irrational), rat(1, 1)),
    ]);
    let identity_at = |p: i64| Piece {
        cell: Cell::point(rat(p, 1)),
        slope: rat(1, 1),
        intercept: rat(0, 1),
    };
    let g = PiecewiseMap::new(vec![
        identity_at(0),
        identity_at(1),
        identity_at(2),
        Piece::constant(Cell::all(interval("(0,1)")), rat(3, 1)),
        Piece::constant(Cell::all(interval("(1,2)")), rat(3, 1)),
        Piece::constant(Cell::all(interval("(2,4)")), rat(3, 1)),
    ]);
    IntervalInstance::new(space, Pair::new(f, g)).expect("valid maps")
}

/// A six-point restriction of the second example: the points `0, 1, 2, 3`,
/// a rational slot `1/2` and a slot `s` standing for an irrational (placed at
/// `3/2`, where `f` takes the irrational branch).
pub fn second_example_finite() -> FiniteInstance {
    let coords = [rat(0, 1), rat(1, 1), rat(2, 1), rat(3, 1), rat(1, 2), rat(3, 2)];
    let labels = ["0", "1", "2", "3", "1/2", "s"].map(String::from).to_vec();
    let rows = coords
        .iter()
        .map(|a| coords.iter().map(|b| num_traits::Signed::abs(&(a - b))).collect())
        .collect();
    let relation = FiniteRelation::from_pairs(
        6,
        SECOND_RELATION.iter().map(|&(a, b)| (a as usize, b as usize)),
    )
    .expect("pairs inside the carrier");
    let space = FiniteSpace::new(
        labels,
        DistanceTable::from_rows(rows).expect("square table"),
        relation,
        Some(vec![PointId(0), PointId(1)]),
    )
    .expect("valid space");
    let f = FiniteMap::from_indices([0, 0, 0, 0, 0, 1]);
    let g = FiniteMap::from_indices([0, 1, 2, 3, 3, 3]);
    FiniteInstance::new(space, Pair::new(f, g)).expect("valid maps")
}
