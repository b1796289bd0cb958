//! Reduction by projective-injectives as a left adjoint on picture categories.

use serde::Serialize;

use super::{build_picture_category, PictureCategory, PictureOptions};
use crate::error::{Error, Result};
use crate::model::{projective_injectives, strip, support, Handle, RigidSubcat};
use crate::reduction::reduce;

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyReport {
    pub projective_injectives: Vec<String>,
    /// `(L, λL)` by label.
    pub lambda: Vec<(String, String)>,
    /// Objects whose reduced model has no projective-injectives.
    pub reduced_objects: Vec<String>,
    pub functorial: bool,
    pub unit_payloads: bool,
    pub counit: bool,
    pub adjunction: bool,
    /// The picture category of `C / [proj-inj]` embeds fully faithfully onto
    /// the reduced objects.
    pub inclusion: bool,
    pub failures: Vec<String>,
}

impl HomotopyReport {
    pub fn passed(&self) -> bool {
        self.functorial && self.unit_payloads && self.counit && self.adjunction && self.inclusion
    }
}

pub fn homotopy_reduction_check(
    cat: &PictureCategory,
    opts: PictureOptions,
) -> Result<(HomotopyReport, PictureCategory)> {
    let model = cat.model().clone();
    let m = model.as_ref();
    let pi = projective_injectives(m);
    let n_obj = cat.objects.len();
    let mut failures = Vec::new();

    // λ on objects and the unit η_L: L -> ιλL
    let mut lambda = Vec::with_capacity(n_obj);
    let mut unit = Vec::with_capacity(n_obj);
    let mut unit_payloads = true;
    let mut in_red = Vec::with_capacity(n_obj);
    for (k, obj) in cat.objects.iter().enumerate() {
        let pi_l = projective_injectives(obj.reduced.as_ref());
        in_red.push(pi_l.is_empty());
        let t = support(&[obj.rep.members(), &pi_l].concat());
        let target = cat.object_of(&t).ok_or_else(|| {
            Error::InvariantViolation(format!("{} with its projective-injectives is not rigid", obj.label))
        })?;
        let eta = cat.morphism(k, &t).expect("rigid supersets of the representative are morphisms");
        unit_payloads &= cat.morphisms[eta].payload == pi_l;
        lambda.push(target);
        unit.push(eta);
    }
    for (k, &l) in lambda.iter().enumerate() {
        if !in_red[l] {
            failures.push(format!("λ({}) = {} still has projective-injectives", cat.objects[k].label, cat.objects[l].label));
        }
    }

    // λ on morphisms: the unique h with h ∘ η_L = η_M ∘ f
    let nm = cat.morphisms.len();
    let mut lam_mor = vec![None; nm];
    for (f, lm) in lam_mor.iter_mut().enumerate() {
        let (s, t) = (cat.morphisms[f].source, cat.morphisms[f].target);
        let want = cat.compose(f, unit[t]);
        let hs: Vec<usize> =
            cat.hom(lambda[s], lambda[t]).into_iter().filter(|&h| cat.compose(unit[s], h) == want).collect();
        match hs.as_slice() {
            [h] => *lm = Some(*h),
            _ => failures.push(format!("λ({}) has {} candidates", cat.describe_morphism(f), hs.len())),
        }
    }
    let mut functorial = lam_mor.iter().all(Option::is_some);
    if functorial {
        for k in 0..n_obj {
            functorial &= lam_mor[cat.identity(k)] == Some(cat.identity(lambda[k]));
        }
        for f in 0..nm {
            for g in 0..nm {
                if let Some(gf) = cat.compose(f, g) {
                    functorial &= lam_mor[gf] == cat.compose(lam_mor[f].unwrap(), lam_mor[g].unwrap());
                }
            }
        }
    }

    let counit = (0..n_obj).filter(|&k| in_red[k]).all(|k| lambda[k] == k && unit[k] == cat.identity(k));

    // Hom(λL, M) -> Hom(L, M), h ↦ h ∘ η_L, for reduced M
    let mut adjunction = true;
    for l in 0..n_obj {
        for mm in (0..n_obj).filter(|&k| in_red[k]) {
            let mut image: Vec<Option<usize>> =
                cat.hom(lambda[l], mm).into_iter().map(|h| cat.compose(unit[l], h)).collect();
            image.sort();
            let mut direct: Vec<Option<usize>> = cat.hom(l, mm).into_iter().map(Some).collect();
            direct.sort();
            if image != direct {
                adjunction = false;
                failures.push(format!("Hom({}, {}) is not Hom(λ{}, {})", cat.objects[l].label, cat.objects[mm].label, cat.objects[l].label, cat.objects[mm].label));
            }
        }
    }

    // the picture category of C/[PI] maps onto the reduced objects
    let base: Handle = std::sync::Arc::new(reduce(&model, &RigidSubcat::new(m, pi.iter().copied())?)?);
    let small = build_picture_category(&base, opts)?;
    let phi_obj: Vec<usize> = small
        .objects
        .iter()
        .map(|o| {
            cat.object_of(&support(&[o.rep.members(), &pi].concat()))
                .ok_or_else(|| Error::InvariantViolation(format!("{} does not lift", o.label)))
        })
        .collect::<Result<_>>()?;
    let mut phi_mor = Vec::with_capacity(small.morphisms.len());
    for (f, mor) in small.morphisms.iter().enumerate() {
        let src = phi_obj[mor.source];
        let lifted = cat.transport(cat.objects[src].rep.members(), &strip(&mor.payload, &pi))?;
        match cat.morphism(src, &lifted) {
            Some(g) => phi_mor.push(g),
            None => {
                return Err(Error::InvariantViolation(format!("{} does not lift", small.describe_morphism(f))));
            }
        }
    }
    let mut targets: Vec<usize> = phi_obj.clone();
    targets.sort_unstable();
    let mut red_objs: Vec<usize> = (0..n_obj).filter(|&k| in_red[k]).collect();
    red_objs.sort_unstable();
    let mut inclusion = targets == red_objs;
    for a in 0..small.objects.len() {
        for b in 0..small.objects.len() {
            let mut mapped: Vec<usize> = small.hom(a, b).into_iter().map(|f| phi_mor[f]).collect();
            mapped.sort_unstable();
            inclusion &= mapped == cat.hom(phi_obj[a], phi_obj[b]);
        }
    }
    for f in 0..small.morphisms.len() {
        for g in 0..small.morphisms.len() {
            if let Some(gf) = small.compose(f, g) {
                inclusion &= cat.compose(phi_mor[f], phi_mor[g]) == Some(phi_mor[gf]);
            }
        }
    }
    if !inclusion {
        failures.push("reduced picture category does not embed onto the reduced objects".into());
    }

    let report = HomotopyReport {
        projective_injectives: pi.iter().map(|&x| m.label(x)).collect(),
        lambda: (0..n_obj).map(|k| (cat.objects[k].label.clone(), cat.objects[lambda[k]].label.clone())).collect(),
        reduced_objects: red_objs.iter().map(|&k| cat.objects[k].label.clone()).collect(),
        functorial,
        unit_payloads,
        counit,
        adjunction,
        inclusion,
        failures,
    };
    Ok((report, small))
}

/// Whether the full subcategories on `objs1` and `objs2` are isomorphic, by
/// backtracking over object and morphism bijections.
pub fn is_isomorphic(c1: &PictureCategory, objs1: &[usize], c2: &PictureCategory, objs2: &[usize]) -> bool {
    if objs1.len() != objs2.len() {
        return false;
    }
    let inside = |c: &PictureCategory, objs: &[usize]| -> Vec<usize> {
        (0..c.morphisms.len())
            .filter(|&f| objs.contains(&c.morphisms[f].source) && objs.contains(&c.morphisms[f].target))
            .collect()
    };
    let (m1, m2) = (inside(c1, objs1), inside(c2, objs2));
    if m1.len() != m2.len() {
        return false;
    }
    permutations(objs2.len()).into_iter().any(|perm| {
        let obj_map = |o: usize| objs2[perm[objs1.iter().position(|&x| x == o).unwrap()]];
        let hom_sizes_match = objs1.iter().all(|&a| {
            objs1.iter().all(|&b| c1.hom(a, b).len() == c2.hom(obj_map(a), obj_map(b)).len())
        });
        if !hom_sizes_match {
            return false;
        }
        let mut assign: Vec<Option<usize>> = vec![None; c1.morphisms.len()];
        let mut used = vec![false; c2.morphisms.len()];
        extend(c1, c2, &m1, 0, &obj_map, &mut assign, &mut used)
    })
}

fn extend(
    c1: &PictureCategory,
    c2: &PictureCategory,
    m1: &[usize],
    i: usize,
    obj_map: &dyn Fn(usize) -> usize,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if i == m1.len() {
        return true;
    }
    let f = m1[i];
    let (s, t) = (c1.morphisms[f].source, c1.morphisms[f].target);
    for g in c2.hom(obj_map(s), obj_map(t)) {
        if used[g] || c1.morphisms[f].is_identity() != c2.morphisms[g].is_identity() {
            continue;
        }
        assign[f] = Some(g);
        used[g] = true;
        let consistent = m1[..=i].iter().all(|&a| {
            m1[..=i].iter().all(|&b| match c1.compose(a, b) {
                Some(ab) => match assign[ab] {
                    Some(x) => c2.compose(assign[a].unwrap(), assign[b].unwrap()) == Some(x),
                    None => true,
                },
                None => true,
            })
        });
        if consistent && extend(c1, c2, m1, i + 1, obj_map, assign, used) {
            return true;
        }
        assign[f] = None;
        used[g] = false;
    }
    false
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
