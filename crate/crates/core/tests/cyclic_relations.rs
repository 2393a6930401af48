use hopfcyclic::cyclic::{verify_lambda_relations, verify_tau_power, CyclicContext};
use hopfcyclic::hopf::ModularPair;

#[test]
fn lambda_relations_codim_one() {
    let ctx = CyclicContext::canonical(1);
    let reps = verify_lambda_relations(&ctx, 3, 25, 11);
    for r in &reps {
        assert!(r.pass, "{r:?}");
    }
    assert_eq!(reps.len(), 18);
}

#[test]
fn untwisted_pair_breaks_cyclicity() {
    let ctx = CyclicContext::new(ModularPair::untwisted(1));
    let reps = verify_lambda_relations(&ctx, 1, 5, 0);
    let pow = reps.iter().find(|r| r.relation == "cyclic-power").unwrap();
    assert!(!pow.pass);
    assert!(pow.counterexample.is_some());
}

#[test]
fn lambda_relations_codim_two() {
    let ctx = CyclicContext::canonical(2);
    for r in verify_lambda_relations(&ctx, 2, 10, 3) {
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn tau_power_both_pairs() {
    for pair in [ModularPair::canonical(1), ModularPair::untwisted(1)] {
        let ctx = CyclicContext::new(pair);
        for r in verify_tau_power(&ctx, 3, 10, 4) {
            assert!(r.pass, "{r:?}");
        }
    }
}
