//! The picture category: objects are reductions `C̄_R` up to equality of
//! thick closures, morphisms out of `C̄_R` are rigid subcategories of it,
//! and composition pulls the second payload back along the approximation
//! functor of the first.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{enumerate_rigid, support, Handle, Model, ObjId, RigidSubcat};
use crate::reduction::{approx_functor_f, reduce, thick_equal, ReducedModel, ThickVerdict, WitnessConfig};

mod checks;
mod export;
mod homotopy;

pub use checks::{
    check_associativity, check_cubical, check_i1_i2, check_identities, check_sink_homs, CubicalReport, I12Report,
};
pub use homotopy::{homotopy_reduction_check, is_isomorphic, HomotopyReport};

pub struct PictureObject {
    /// First rigid subcategory of the class in `(size, members)` order.
    pub rep: RigidSubcat,
    /// Every rigid subcategory identified into this object, with the verdict
    /// that merged it (the representative itself included).
    pub identified: Vec<(RigidSubcat, ThickVerdict)>,
    pub reduced: Arc<ReducedModel>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PictureMorphism {
    pub source: usize,
    pub target: usize,
    /// The rigid subcategory `Q ⊇ R` of the ambient model.
    pub full: Vec<ObjId>,
    /// `Q \ R`, a rigid subcategory of the source's reduced model.
    pub payload: Vec<ObjId>,
}

impl PictureMorphism {
    pub fn rank(&self) -> usize {
        self.payload.len()
    }

    pub fn is_identity(&self) -> bool {
        self.payload.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct PictureOptions {
    pub witness: WitnessConfig,
}


pub struct PictureCategory {
    model: Handle,
    pub objects: Vec<PictureObject>,
    pub morphisms: Vec<PictureMorphism>,
    /// `comp[f * n + g] = g ∘ f` for composable pairs.
    comp: Vec<Option<usize>>,
    by_full: HashMap<(usize, Vec<ObjId>), usize>,
    class_of: HashMap<Vec<ObjId>, usize>,
    pub root: usize,
    pub sink: usize,
    opts: PictureOptions,
    f_cache: Mutex<HashMap<(Vec<ObjId>, ObjId), Vec<ObjId>>>,
}

impl PictureCategory {
    pub fn model(&self) -> &Handle {
        &self.model
    }

    /// `g ∘ f`, if `f` ends where `g` starts.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.morphisms.len() + g]
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.by_full[&(obj, self.objects[obj].rep.members().to_vec())]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].source == a && self.morphisms[f].target == b).collect()
    }

    pub fn out_of(&self, a: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].source == a).collect()
    }

    pub fn into(&self, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].target == b).collect()
    }

    /// The object a rigid subcategory of the ambient model reduces to.
    pub fn object_of(&self, members: &[ObjId]) -> Option<usize> {
        self.class_of.get(members).copied()
    }

    /// The morphism out of `source` given by the ambient rigid `full`.
    pub fn morphism(&self, source: usize, full: &[ObjId]) -> Option<usize> {
        self.by_full.get(&(source, full.to_vec())).copied()
    }

    pub fn object_label(&self, obj: usize) -> &str {
        &self.objects[obj].label
    }

    pub fn describe_morphism(&self, f: usize) -> String {
        let m = &self.morphisms[f];
        let p: Vec<String> = m.payload.iter().map(|&x| self.model.label(x)).collect();
        format!("{} -[{}]-> {}", self.objects[m.source].label, p.join("+"), self.objects[m.target].label)
    }

    /// `F_Q` applied to `x`, cached.
    fn functor(&self, q: &[ObjId], x: ObjId) -> Result<Vec<ObjId>> {
        if let Some(v) = self.f_cache.lock().unwrap().get(&(q.to_vec(), x)) {
            return Ok(v.clone());
        }
        let rq = RigidSubcat::new(self.model.as_ref(), q.iter().copied())?;
        let v = approx_functor_f(self.model.as_ref(), &rq, &[x], self.opts.witness)?;
        self.f_cache.lock().unwrap().insert((q.to_vec(), x), v.clone());
        Ok(v)
    }

    /// Moves a payload over one representative of an object to another:
    /// `to ∪ supp F_to(payload)`.
    pub fn transport(&self, to: &[ObjId], payload: &[ObjId]) -> Result<Vec<ObjId>> {
        let mut all: Vec<ObjId> = to.to_vec();
        for &x in payload {
            if to.contains(&x) {
                continue;
            }
            all.extend(self.functor(to, x)?);
        }
        Ok(support(&all))
    }

    fn composite(&self, f: usize, g: usize) -> Result<usize> {
        let (mf, mg) = (&self.morphisms[f], &self.morphisms[g]);
        let full = self.transport(&mf.full, &mg.payload)?;
        let h = self.morphism(mf.source, &full).ok_or_else(|| {
            Error::InvariantViolation(format!(
                "composite of {} and {} is not rigid",
                self.describe_morphism(f),
                self.describe_morphism(g)
            ))
        })?;
        if self.morphisms[h].target != mg.target {
            return Err(Error::InvariantViolation(format!(
                "composite of {} and {} lands in {}",
                self.describe_morphism(f),
                self.describe_morphism(g),
                self.objects[self.morphisms[h].target].label
            )));
        }
        Ok(h)
    }
}

fn object_label(model: &dyn Model, r: &RigidSubcat, root: bool, sink: bool) -> String {
    if root {
        "A".into()
    } else if sink {
        "O".into()
    } else {
        let l: Vec<String> = r.members().iter().map(|&x| model.label(x)).collect();
        format!("A/{}", l.join("+"))
    }
}

pub fn build_picture_category(model: &Handle, opts: PictureOptions) -> Result<PictureCategory> {
    let m = model.as_ref();
    let rigids = enumerate_rigid(m);
    // classify by thick closure; candidates share the size of the generator
    let mut reps: Vec<RigidSubcat> = Vec::new();
    let mut identified: Vec<Vec<(RigidSubcat, ThickVerdict)>> = Vec::new();
    let mut class_of: HashMap<Vec<ObjId>, usize> = HashMap::new();
    for r in &rigids {
        let mut found = None;
        for (k, rep) in reps.iter().enumerate() {
            if rep.len() != r.len() {
                continue;
            }
            match thick_equal(m, rep, r)? {
                v @ ThickVerdict::Equal { .. } => {
                    found = Some((k, v));
                    break;
                }
                ThickVerdict::Different { .. } => {}
                ThickVerdict::Undecided => {
                    return Err(Error::UndecidedIdentity(rep.describe(m), r.describe(m)));
                }
            }
        }
        let k = match found {
            Some((k, v)) => {
                identified[k].push((r.clone(), v));
                k
            }
            None => {
                reps.push(r.clone());
                identified.push(vec![(r.clone(), ThickVerdict::Equal { reason: "representative".into() })]);
                reps.len() - 1
            }
        };
        class_of.insert(r.members().to_vec(), k);
    }
    let reduced = crate::par::try_map(&reps, |r| reduce(model, r).map(Arc::new))?;
    let root = class_of[&Vec::new()];
    let sink = (0..reps.len())
        .find(|&k| reduced[k].objects().is_empty())
        .ok_or_else(|| Error::InvariantViolation("no object reduces to the zero category".into()))?;
    if (0..reps.len()).filter(|&k| reduced[k].objects().is_empty()).count() != 1 {
        return Err(Error::InvariantViolation("several objects reduce to the zero category".into()));
    }
    let objects: Vec<PictureObject> = reps
        .into_iter()
        .zip(identified)
        .zip(reduced)
        .enumerate()
        .map(|(k, ((rep, identified), reduced))| PictureObject {
            label: object_label(m, &rep, k == root, k == sink),
            rep,
            identified,
            reduced,
        })
        .collect();
    let mut morphisms = Vec::new();
    let mut by_full = HashMap::new();
    for (k, obj) in objects.iter().enumerate() {
        for q in rigids.iter().filter(|q| obj.rep.is_subset(q)) {
            by_full.insert((k, q.members().to_vec()), morphisms.len());
            morphisms.push(PictureMorphism {
                source: k,
                target: class_of[q.members()],
                full: q.members().to_vec(),
                payload: crate::model::strip(q.members(), obj.rep.members()),
            });
        }
    }
    let n = morphisms.len();
    let mut cat = PictureCategory {
        model: model.clone(),
        objects,
        morphisms,
        comp: vec![None; n * n],
        by_full,
        class_of,
        root,
        sink,
        opts,
        f_cache: Mutex::new(HashMap::new()),
    };
    let rows = crate::par::try_map_range(n, |f| {
        (0..n)
            .map(|g| {
                if cat.morphisms[f].target == cat.morphisms[g].source {
                    cat.composite(f, g).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()
    })?;
    cat.comp = rows.into_iter().flatten().collect();
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn lambda2_has_five_objects_and_fourteen_morphisms() {
        let cat = build_picture_category(&corpus::lambda(2), PictureOptions::default()).unwrap();
        assert_eq!(cat.objects.len(), 5);
        assert_eq!(cat.morphisms.len(), 14);
        assert_eq!(cat.hom(cat.root, cat.sink).len(), 2);
    }

    #[test]
    fn dual_numbers_circle() {
        let cat = build_picture_category(&corpus::dual_numbers().unwrap(), PictureOptions::default()).unwrap();
        assert_eq!(cat.objects.len(), 2);
        assert_eq!(cat.morphisms.len(), 4);
    }
}
