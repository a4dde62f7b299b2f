//! The oracle, the solver, the closed forms and the bound report checked
//! against each other on small instances.

use isect::assignment::{from_family, solve_kappa_ilp, to_family};
use isect::bounds::{best_bounds, kappa_exact_small, BoundOptions, BoundParams, Extended};
use isect::oracle::{oracle_assignment, oracle_kappa, oracle_mu, SearchBudget};
use isect::{verify, IntersectionLaw};
use proptest::prelude::*;

fn budget() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn oracle_matches_closed_forms() {
    for m in 2..=4u64 {
        for l in 1..=3u64 {
            for n in l + m..=12 {
                if m == 4 && n > 10 {
                    continue;
                }
                let law = IntersectionLaw::single(l as usize);
                let r = oracle_kappa(n as usize, m as usize, &law, true, budget());
                assert!(r.exact);
                assert_eq!(r.value, Some(kappa_exact_small(l, n, m).unwrap()), "l={l} m={m} n={n}");
                assert!(verify(r.witness.as_ref().unwrap(), &law).valid);
            }
        }
    }
}

#[test]
fn assignment_oracle_solver_and_family_oracle_agree() {
    for m in 1..=4usize {
        for l in 0..=3u64 {
            for n in 1..=12u64 {
                let enumerated = oracle_assignment(l, m, n);
                let solved = solve_kappa_ilp(l, m, n).unwrap();
                assert_eq!(enumerated.map(|v| v as i64), solved.value(), "l={l} m={m} n={n}");
                if n >= l + m as u64 && n <= 9 {
                    let law = IntersectionLaw::single(l as usize);
                    for distinct in [false, true] {
                        let r = oracle_kappa(n as usize, m, &law, distinct, budget());
                        assert_eq!(r.value, enumerated, "l={l} m={m} n={n} distinct={distinct}");
                    }
                }
            }
        }
    }
}

#[test]
fn solver_witnesses_become_valid_families() {
    for (l, m, n) in [(1, 4, 6), (2, 4, 10), (3, 3, 11), (1, 5, 12)] {
        let outcome = solve_kappa_ilp(l, m, n).unwrap();
        let isect::assignment::SolveOutcome::Optimal { value, witness, .. } = outcome else {
            panic!("expected an optimum");
        };
        let family = to_family(&witness).unwrap();
        assert_eq!(family.uniform_size(), Some(value as usize));
        assert!(verify(&family, &IntersectionLaw::single(l as usize)).valid);
        assert_eq!(from_family(&family).unwrap(), witness);
    }
}

#[test]
fn square_root_values_never_decrease() {
    let mut previous = 0;
    for n in 2..=12 {
        let r = oracle_kappa(n, n, &IntersectionLaw::at_most(1), true, budget());
        let v = r.value.unwrap();
        assert!(v >= previous, "n={n}");
        previous = v;
    }
}

fn within(value: Option<u64>, lower: Extended, upper: Extended) -> bool {
    let v = value.map_or(Extended::NegInf, |v| Extended::Finite(v as i64));
    lower <= v && v <= upper
}

fn arb_law() -> impl Strategy<Value = IntersectionLaw> {
    let kind = prop_oneof![
        (0usize..3).prop_map(IntersectionLaw::single),
        (0usize..3).prop_map(IntersectionLaw::at_most),
        Just(IntersectionLaw::positive()),
        Just(IntersectionLaw::exact(vec![0, 2]).unwrap()),
    ];
    (kind, 2usize..=3).prop_map(|(law, t)| law.with_t(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn oracle_kappa_lies_within_the_report(n in 1usize..=8, m in 1usize..=5, law in arb_law()) {
        let r = oracle_kappa(n, m, &law, true, budget());
        prop_assert!(r.exact);
        if let Some(w) = &r.witness {
            prop_assert!(verify(w, &law).valid);
        }
        let params = BoundParams::Kappa { n: n as u64, m: m as u64, law: law.clone() };
        let report = best_bounds(&params, &BoundOptions::default()).unwrap();
        prop_assert!(report.diagnostics.is_empty(), "{:?}", report.diagnostics);
        prop_assert!(within(r.value, report.lower, report.upper), "{} in [{}, {}]", r.value.unwrap_or(0), report.lower, report.upper);
    }

    #[test]
    fn oracle_mu_lies_within_the_report(n in 1usize..=7, k in 0usize..=5, law in arb_law()) {
        let r = oracle_mu(n, k, &law, budget());
        prop_assert!(r.exact);
        let w = r.witness.as_ref().unwrap();
        prop_assert!(verify(w, &law).valid);
        prop_assert_eq!(w.len() as u64, r.value.unwrap());
        let params = BoundParams::Mu { n: n as u64, k: k as u64, law: law.clone() };
        let report = best_bounds(&params, &BoundOptions::default()).unwrap();
        prop_assert!(report.diagnostics.is_empty(), "{:?}", report.diagnostics);
        prop_assert!(within(r.value, report.lower, report.upper));
    }

    #[test]
    fn repeats_never_lower_kappa(n in 1usize..=7, m in 1usize..=4, law in arb_law()) {
        let distinct = oracle_kappa(n, m, &law, true, budget()).value;
        let repeated = oracle_kappa(n, m, &law, false, budget()).value;
        prop_assert!(repeated >= distinct);
    }
}
