use proptest::prelude::*;

use relfix_core::certifier::{
    check_theorem, d_self_closed_finite, Claim, Status, Theorem, Verdict,
};
use relfix_core::contraction::{
    closure_equivalence_check, default_grid, m_value, n_value, ComparisonFunction, ContractionCondition,
    ValidatedPhi, Variant,
};
use relfix_core::instance::{FiniteInstance, Setting};
use relfix_core::mappings::FiniteMap;
use relfix_core::oracle::{brute_force_solutions, fitted_condition, random_instance, InstanceGeneratorConfig};
use relfix_core::relspace::{FiniteRelation, PointId};
use relfix_core::scalar::{rat, Scalar};
use relfix_core::solver::error_bound;

fn arb_instance() -> impl Strategy<Value = FiniteInstance> {
    (any::<u64>(), 2usize..=8)
        .prop_map(|(seed, size)| random_instance(&InstanceGeneratorConfig::for_seed(seed, size)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn n_is_at_most_m(inst in arb_instance()) {
        for u in inst.space.points() {
            for v in inst.space.points() {
                prop_assert!(n_value(&inst, &u, &v) <= m_value(&inst, &u, &v));
            }
        }
    }

    #[test]
    fn symmetric_closure_does_not_change_contraction(inst in arb_instance(), k in 1i64..10) {
        let phi = ComparisonFunction::linear(rat(k, 10)).unwrap();
        for variant in [Variant::M, Variant::N] {
            let c = ContractionCondition::new(variant, Some(phi.clone())).unwrap();
            prop_assert!(closure_equivalence_check(&c, &inst));
        }
    }

    #[test]
    fn finite_sequence_hypotheses_are_trivial(inst in arb_instance()) {
        let r = check_theorem(Theorem::Th1, &inst, &fitted_condition(&inst, Variant::M)).unwrap();
        for l in ["(f)", "(k2)", "(l2)", "(l3)"] {
            prop_assert!(matches!(r.entry(l).unwrap().verdict, Verdict::TriviallyHolds(_)), "{}", l);
        }
    }

    #[test]
    fn uniqueness_claims_match_the_oracle(inst in arb_instance()) {
        let truth = brute_force_solutions(&inst);
        for variant in [Variant::M, Variant::N] {
            let c = fitted_condition(&inst, variant);
            if check_theorem(Theorem::Th2, &inst, &c).unwrap().status == Status::Certified {
                prop_assert_eq!(truth.common_fixed_points.len(), 1);
            }
            if check_theorem(Theorem::Th4, &inst, &c).unwrap().status == Status::Certified {
                prop_assert_eq!(truth.points_of_coincidence.len(), 1);
            }
            let th1 = check_theorem(Theorem::Th1, &inst, &c).unwrap();
            if th1.claim(Claim::CoincidenceExists) == Some(Status::Certified) {
                prop_assert!(!truth.coincidence_points.is_empty());
            }
        }
    }

    #[test]
    fn scaled_n_certifying_implies_linear_n_certifies(inst in arb_instance(), k in 1i64..10) {
        let k = rat(k, 10);
        let q1 = ContractionCondition::new(Variant::ScaledN { k: k.clone() }, None).unwrap();
        let q = ContractionCondition::new(Variant::N, Some(ComparisonFunction::linear(k).unwrap())).unwrap();
        let cor5 = check_theorem(Theorem::Cor5, &inst, &q1).unwrap();
        let cor2 = check_theorem(Theorem::Cor2, &inst, &q).unwrap();
        if cor5.claim(Claim::CoincidenceExists) == Some(Status::Certified) {
            prop_assert_eq!(cor2.status, Status::Certified);
        }
    }

    #[test]
    fn identity_reduces_self_closedness(inst in arb_instance()) {
        let id = FiniteMap::identity(inst.space.len());
        prop_assert_eq!(d_self_closed_finite(inst.space.relation(), Some(&id)), Ok(()));
        prop_assert_eq!(d_self_closed_finite(inst.space.relation(), None), Ok(()));
    }
}

#[test]
fn validated_phis_stay_below_identity() {
    for k in 0..100 {
        let phi = ValidatedPhi::linear(rat(k, 100)).unwrap();
        for s in default_grid() {
            assert!(phi.apply(&s) < s);
        }
    }
}

#[test]
fn diagonal_transport_witness() {
    // (0,0) ∈ R but g0 = 1 and (1,1) ∉ R
    let r = FiniteRelation::from_pairs(2, [(0, 0)]).unwrap();
    let g = FiniteMap::from_indices([1, 1]);
    assert_eq!(d_self_closed_finite(&r, Some(&g)), Err(PointId(0)));
}

#[test]
fn certified_traces_respect_the_iterate_bounds() {
    let mut traces = 0;
    for seed in 0..1000 {
        let inst = random_instance(&InstanceGeneratorConfig::for_seed(seed, 8)).unwrap();
        let c = fitted_condition(&inst, Variant::M);
        let r = check_theorem(Theorem::Th1, &inst, &c).unwrap();
        if r.status != Status::Certified {
            continue;
        }
        traces += 1;
        let phi = c.phi().unwrap();
        let trace = r.conclusion.trace.unwrap();
        let d0 = trace.step_distances.first().cloned().unwrap_or_else(Scalar::zero);
        for (n, dn) in trace.step_distances.iter().enumerate() {
            assert!(*dn <= phi.iterate(&d0, n), "seed {seed}");
        }
        for n in 0..trace.gw.len() {
            for m in n..trace.gw.len() {
                assert!(inst.distance(&trace.gw[n], &trace.gw[m]) <= error_bound(phi, &d0, n), "seed {seed}");
            }
        }
    }
    assert!(traces > 0);
}
