use silting_core::corpus;
use silting_core::model::{enumerate_rigid, injectives, projective_injectives, projectives, strip, support};
use silting_core::picture::*;

fn build(m: &silting_core::model::Handle) -> PictureCategory {
    build_picture_category(m, PictureOptions::default()).unwrap()
}

#[test]
fn corpus_picture_categories_are_cubical() {
    for m in corpus::all().unwrap() {
        let cat = build(&m);
        assert!(check_identities(&cat).is_empty(), "{}", m.name());
        assert!(check_associativity(&cat).is_empty(), "{}", m.name());
        assert!(check_sink_homs(&cat, 1000).unwrap().is_empty(), "{}", m.name());
        let cub = check_cubical(&cat);
        assert!(cub.passed(), "{}: {cub:?}", m.name());
        let i12 = check_i1_i2(&cat);
        assert!(i12.passed(), "{}: {i12:?}", m.name());
        // identity plus one morphism per nonzero rigid subcategory
        assert_eq!(cat.out_of(cat.root).len(), enumerate_rigid(m.as_ref()).len(), "{}", m.name());
    }
}

#[test]
fn homotopy_reduction_on_corpus() {
    for m in corpus::all().unwrap() {
        let cat = build(&m);
        let (h, small) = homotopy_reduction_check(&cat, PictureOptions::default()).unwrap();
        assert!(h.passed(), "{}: {h:?}", m.name());
        assert_eq!(small.objects.len(), h.reduced_objects.len());
        if projective_injectives(m.as_ref()).is_empty() {
            assert!(h.lambda.iter().all(|(a, b)| a == b), "{}", m.name());
        }
    }
}

#[test]
fn counts() {
    let expect = [("per(k)", 2, 4), ("per(k[x]/x²)", 2, 4), ("per(kA₂)", 5, 21), ("mod(Λ2)", 5, 14), ("mod(Λ3)", 14, 79)];
    for (m, (name, objs, mors)) in corpus::all().unwrap().into_iter().zip(expect) {
        let cat = build(&m);
        assert_eq!(m.name(), name);
        assert_eq!((cat.objects.len(), cat.morphisms.len()), (objs, mors), "{name}");
    }
}

#[test]
fn lambda2_diagram() {
    let m = corpus::lambda(2);
    let cat = build(&m);
    let pi = projective_injectives(m.as_ref());
    let p = strip(&projectives(m.as_ref()), &pi);
    let i = strip(&injectives(m.as_ref()), &pi);
    assert_eq!((pi.len(), p.len(), i.len()), (1, 1, 1));
    let (a, o) = (cat.root, cat.sink);
    assert_eq!(cat.hom(a, o).len(), 2);
    let to = |xs: &[usize]| cat.morphism(a, &support(xs)).unwrap();
    let a_n = cat.morphisms[to(&pi)].target;
    // both shaded squares commute: A -x-> A/x -> O equals A -n-> A/n -> O
    for x in [&p, &i] {
        let diag = to(&[x.as_slice(), &pi].concat());
        let via = |first: usize| {
            cat.hom(cat.morphisms[first].target, o).into_iter().filter(|&g| cat.compose(first, g) == Some(diag)).count()
        };
        assert_eq!(via(to(x)), 1);
        assert_eq!(via(to(&pi)), 1);
    }
    // the full subcategory on {A/n, O} is the picture category of k
    let k = build(&corpus::field().unwrap());
    assert!(is_isomorphic(&cat, &[a_n, o], &k, &[k.root, k.sink]));
}

#[test]
fn exports() {
    let cat = build(&corpus::field().unwrap());
    let dot = cat.to_dot();
    assert_eq!(dot.matches("->").count(), 2);
    assert_eq!(dot, build(&corpus::field().unwrap()).to_dot());
    let cat = build(&corpus::lambda(2));
    let json = cat.to_json(false);
    assert_eq!(json["schema"], 1);
    assert_eq!(json["morphisms"].as_array().unwrap().len(), 14);
    assert!(json.get("provenance").is_none());
    assert!(cat.to_json(true).get("provenance").is_some());
    assert_eq!(serde_json::to_string(&json).unwrap(), serde_json::to_string(&build(&corpus::lambda(2)).to_json(false)).unwrap());
}
