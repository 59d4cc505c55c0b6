use isoterm::basis::{claims::claim1, BasisEngine, DeriveOutcome};
use isoterm::derivation::{verify_trace, DerivationTrace};
use isoterm::identity::Identity;
use isoterm::rees::ReesMonoid;
use isoterm::sigma::{sigma_members, w_identity};
use isoterm::suite::{run_suite, SuiteConfig};
use isoterm::word::{Var, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn trace_survives_json() {
    let e = BasisEngine::new();
    let DeriveOutcome::Derived(t) = e.derive(&w("ttxyxyt"), &w("yxyxttt")).unwrap() else {
        panic!("refuted")
    };
    let back = DerivationTrace::from_json(&t.to_json()).unwrap();
    assert_eq!(verify_trace(&back, None), Ok(()));
    assert_eq!(back.start, t.start);
    assert_eq!(back.steps.len(), t.steps.len());
}

#[test]
fn monoid_file_survives_json() {
    let m = ReesMonoid::new(vec![w("abba"), w("aabb")]).unwrap();
    for with_factors in [false, true] {
        let back = ReesMonoid::from_json(&m.to_json(with_factors)).unwrap();
        assert_eq!(back.elements(), m.elements());
    }
    let ids = sigma_members(5).unwrap();
    assert!(m.satisfies_all(&ids).unwrap().iter().all(Option::is_none));
}

#[test]
fn derivations_only_use_the_system() {
    let e = BasisEngine::new();
    let id = w_identity(4).unwrap();
    let ctx = w("ab");
    let (u, v) = (ctx.concat(&id.lhs).concat(&ctx), ctx.concat(&id.rhs).concat(&ctx));
    let DeriveOutcome::Derived(t) = e.derive(&u, &v).unwrap() else { panic!("refuted") };
    assert_eq!(verify_trace(&t, Some(4)), Ok(()));
    assert!(t.steps.iter().all(|s| s.rule.tag == "w_4"));
}

#[test]
fn quick_suites_pass_end_to_end() {
    let cfg = SuiteConfig { random_instances: 50, ..SuiteConfig::default() };
    for name in ["catalogue", "lemma-easy", "lemma-u-isoterms", "degeneracy", "sandwich", "lemma-v-isoterms"] {
        let r = run_suite(name, &cfg).unwrap();
        assert!(r.passed(), "{r}");
    }
}

/// Interlocking does not propagate on reduced words. This identity comes
/// out of the exhaustive run, holds in M(V) and still derives.
#[test]
fn interlock_propagation_has_counterexamples() {
    let (u, v) = (w("abcdadbc"), w("acbdadcb"));
    assert!(claim1(&u, Var::letter('b')).is_err());
    let e = BasisEngine::new();
    assert!(e.monoid().satisfies(&Identity::new(u.clone(), v.clone())).unwrap().is_none());
    let DeriveOutcome::Derived(t) = e.derive(&u, &v).unwrap() else { panic!("refuted") };
    assert_eq!(verify_trace(&t, None), Ok(()));
}
