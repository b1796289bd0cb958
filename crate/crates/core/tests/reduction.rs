use silting_core::corpus;
use silting_core::model::{enumerate_rigid, explore_silt_poset, Handle, RigidSubcat};
use silting_core::reduction::*;

fn each_rigid(mut f: impl FnMut(&Handle, &RigidSubcat)) {
    for m in corpus::all().unwrap() {
        for r in enumerate_rigid(m.as_ref()) {
            f(&m, &r);
        }
    }
}

#[test]
fn reductions_are_zero_auslander() {
    each_rigid(|m, r| {
        let v = validate_zero_auslander(&reduce(m, r).unwrap(), false);
        assert!(v.passed(), "{}", v.to_text());
    });
}

#[test]
fn rigid_bijection_holds() {
    for m in corpus::all().unwrap() {
        let poset = explore_silt_poset(m.as_ref(), 1000).unwrap();
        for r in enumerate_rigid(m.as_ref()) {
            let red = reduce(&m, &r).unwrap();
            let b = rigid_bijection(m.as_ref(), &poset, &r, &red, 1000).unwrap();
            assert!(b.passed(), "{} / {}: {b:?}", m.name(), r.describe(m.as_ref()));
        }
    }
}

#[test]
fn approximations_exist() {
    each_rigid(|m, r| {
        let g = check_gcp(m.as_ref(), r, WitnessConfig::default());
        assert!(g.passed(), "{} / {}: {g:?}", m.name(), r.describe(m.as_ref()));
    });
}

#[test]
fn approximation_functor_is_well_defined() {
    let reversed = WitnessConfig { order: SearchOrder::Reversed, ..Default::default() };
    each_rigid(|m, r| {
        for &x in m.objects() {
            let f = approx_functor_f(m.as_ref(), r, &[x], WitnessConfig::default()).unwrap();
            assert_eq!(f, approx_functor_f(m.as_ref(), r, &[x], reversed).unwrap());
            if r.contains(x) {
                assert!(f.is_empty(), "F({}) != 0", m.label(x));
            }
        }
    });
}

#[test]
fn double_reduction_is_coherent() {
    for m in corpus::all().unwrap() {
        let rigid = enumerate_rigid(m.as_ref());
        for r in &rigid {
            for q in rigid.iter().filter(|q| r.is_subset(q)) {
                let d = double_reduction_check(&m, r, q, 1000).unwrap();
                assert!(d.passed(), "{} / {} / {}: {d:?}", m.name(), r.describe(m.as_ref()), q.describe(m.as_ref()));
            }
        }
    }
}
