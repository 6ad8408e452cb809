//! Uniqueness claims on small hand-built instances, checked against the
//! brute-force oracle.

use relfix_core::certifier::{check_theorem, Claim, Status, Theorem, Verdict};
use relfix_core::contraction::{check_contraction, ComparisonFunction, ContractionCondition, Variant};
use relfix_core::instance::FiniteInstance;
use relfix_core::mappings::{FiniteMap, Pair};
use relfix_core::oracle::brute_force_solutions;
use relfix_core::relspace::{DistanceTable, FiniteRelation, FiniteSpace, PointId};
use relfix_core::scalar::rat;

fn instance(labels: &[&str], rows: &[&[i64]], pairs: &[(usize, usize)], f: &[usize], g: &[usize]) -> FiniteInstance {
    let n = labels.len();
    let rows = rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
    let space = FiniteSpace::new(
        labels.iter().map(|s| s.to_string()).collect(),
        DistanceTable::from_rows(rows).unwrap(),
        FiniteRelation::from_pairs(n, pairs.iter().copied()).unwrap(),
        None,
    )
    .unwrap();
    FiniteInstance::new(space, Pair::new(FiniteMap::from_indices(f.iter().copied()), FiniteMap::from_indices(g.iter().copied()))).unwrap()
}

fn cond(variant: Variant, k: (i64, i64)) -> ContractionCondition {
    ContractionCondition::new(variant, Some(ComparisonFunction::linear(rat(k.0, k.1)).unwrap())).unwrap()
}

/// `g = id`, `f` fixes `a, b` and swaps `w, z`.
fn two_fixed_points() -> FiniteInstance {
    let (a, b, w, z) = (0, 1, 2, 3);
    instance(
        &["a", "b", "w", "z"],
        &[&[0, 1, 5, 5], &[1, 0, 5, 5], &[5, 5, 0, 10], &[5, 5, 10, 0]],
        &[(a, a), (b, b), (a, w), (b, w), (a, z), (b, z)],
        &[a, b, z, w],
        &[a, b, w, z],
    )
}

#[test]
fn unique_coincidence_point_needs_the_n_type_condition() {
    let inst = two_fixed_points();
    assert_eq!(brute_force_solutions(&inst).coincidence_points, vec![PointId(0), PointId(1)]);

    // every other hypothesis of the injective-map uniqueness claim holds
    // together with the M-type inequality
    let m = cond(Variant::M, (1, 2));
    assert!(check_contraction(&m, &inst, 0).holds());
    let th1 = check_theorem(Theorem::Th1, &inst, &m).unwrap();
    assert_eq!(th1.status, Status::Certified);

    let th3 = check_theorem(Theorem::Th3, &inst, &m).unwrap();
    assert_eq!(th3.condition, "(q) with φ(t) = 1/2·t");
    assert_eq!(th3.entry("(r)").unwrap().verdict, Verdict::Holds);
    assert_eq!(th3.entry("(s)").unwrap().verdict, Verdict::Holds);
    assert!(matches!(th3.entry("(q)").unwrap().verdict, Verdict::Fails(_)));
    assert_eq!(th3.claim(Claim::UniqueCoincidencePoint), Some(Status::NotCertified));
}

#[test]
fn unique_common_fixed_point_needs_weak_compatibility() {
    // f ≡ 0, g swaps: 1 is the only coincidence point and is not fixed
    let inst = instance(&["0", "1"], &[&[0, 1], &[1, 0]], &[(0, 0)], &[0, 0], &[1, 0]);
    let profile = brute_force_solutions(&inst);
    assert_eq!(profile.coincidence_points, vec![PointId(1)]);
    assert!(profile.common_fixed_points.is_empty());

    let r = check_theorem(Theorem::Cor10, &inst, &cond(Variant::M, (1, 2))).unwrap();
    assert_eq!(r.entry("(A)").unwrap().verdict, Verdict::Holds);
    assert_eq!(r.entry("(B)").unwrap().verdict, Verdict::Holds);
    let Verdict::Fails(w) = &r.entry("(wc)").unwrap().verdict else { panic!() };
    assert_eq!(w[0].point, PointId(1));
    assert_eq!(r.claim(Claim::CoincidenceExists), Some(Status::Certified));
    assert_eq!(r.claim(Claim::UniquePointOfCoincidence), Some(Status::Certified));
    assert_eq!(r.claim(Claim::UniqueCommonFixedPoint), Some(Status::NotCertified));
}

#[test]
fn corollary_conditions_must_match() {
    let inst = two_fixed_points();
    let kannan = ContractionCondition::new(Variant::Kannan { k: rat(1, 3) }, None).unwrap();
    assert!(check_theorem(Theorem::Cor5, &inst, &kannan).is_err());
    assert!(check_theorem(Theorem::Cor8, &inst, &kannan).is_ok());
}

#[test]
fn incompatible_pair_fails_with_its_point_of_coincidence() {
    // f0 = g0 = 1, (1,1) ∈ R, f1 = 0 ≠ 1 = g1
    let inst = instance(&["0", "1"], &[&[0, 1], &[1, 0]], &[(1, 1)], &[1, 0], &[1, 1]);
    let r = check_theorem(Theorem::Th1, &inst, &cond(Variant::M, (1, 2))).unwrap();
    let Verdict::Fails(w) = &r.entry("(l1)").unwrap().verdict else { panic!() };
    assert_eq!(w[0].point, PointId(1));
}
