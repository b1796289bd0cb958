//! Finite extriangulated categories behind one interface.
//!
//! A model exposes a finite registry of indecomposable objects, the
//! dimensions of `Hom` and `E` between them, ranks of compositions through
//! other indecomposables, and middle terms of conflations. Objects of the
//! category are multisets of indecomposables.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::scalar::{int, Scalar};

pub mod interval;
pub mod silt;
pub mod tabulated;
pub mod twoterm;

pub use silt::{explore_silt_poset, is_silting, mutate, Direction, Mutation, SiltingPoset};

pub type ObjId = usize;

/// Shared handle to a model.
pub type Handle = Arc<dyn Model>;

/// An element of `E(c, a)` for multisets `c` and `a`.
///
/// Coordinates come in blocks ordered by `(k, l)`, one block per summand pair
/// `(c[k], a[l])`, each block written in the model's basis of `E(c[k], a[l])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtClass {
    pub source: Vec<ObjId>,
    pub target: Vec<ObjId>,
    pub coords: Vec<Scalar>,
}

impl ExtClass {
    pub fn zero(model: &dyn Model, source: Vec<ObjId>, target: Vec<ObjId>) -> Self {
        let d = ext_dim_multi(model, &source, &target);
        ExtClass { source, target, coords: vec![Scalar::zero(); d] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `(k, l, offset, len)` for every block.
    pub fn blocks(&self, model: &dyn Model) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (k, &c) in self.source.iter().enumerate() {
            for (l, &a) in self.target.iter().enumerate() {
                let d = model.ext_dim(c, a);
                out.push((k, l, off, d));
                off += d;
            }
        }
        out
    }

    pub fn describe(&self, model: &dyn Model) -> String {
        let coords: Vec<String> = self.coords.iter().map(crate::exact::scalar::format_scalar).collect();
        format!("{} <- {} [{}]", format_multiset(model, &self.target), format_multiset(model, &self.source), coords.join(","))
    }
}

/// A realized conflation `a -> middle -> c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflation {
    pub class: ExtClass,
    pub middle: Vec<ObjId>,
}

impl Conflation {
    pub fn left(&self) -> &[ObjId] {
        &self.class.target
    }

    pub fn right(&self) -> &[ObjId] {
        &self.class.source
    }
}

/// Nonsplit conflations between small multisets of indecomposables, used by
/// thick-closure saturation and the validator.
#[derive(Clone, Debug, Default)]
pub struct Catalogue {
    pub conflations: Vec<Conflation>,
    pub max_size: usize,
}

pub trait Model: Send + Sync {
    fn name(&self) -> String;

    /// Registered indecomposables, ascending.
    fn objects(&self) -> &[ObjId];

    fn label(&self, x: ObjId) -> String;

    fn hom_dim(&self, x: ObjId, y: ObjId) -> usize;

    fn ext_dim(&self, x: ObjId, y: ObjId) -> usize;

    /// Rank of the composition map `⊕_r Hom(x, r) ⊗ Hom(r, y) -> Hom(x, y)`
    /// over `r` in `through`.
    fn ideal_rank(&self, x: ObjId, y: ObjId, through: &[ObjId]) -> Result<usize>;

    /// Middle term of a conflation realizing `xi`, decomposed.
    fn middle(&self, xi: &ExtClass) -> Result<Vec<ObjId>>;

    fn catalogue(&self) -> Arc<Catalogue>;

    fn is_projective(&self, x: ObjId) -> bool {
        self.objects().iter().all(|&y| self.ext_dim(x, y) == 0)
    }

    fn is_injective(&self, x: ObjId) -> bool {
        self.objects().iter().all(|&y| self.ext_dim(y, x) == 0)
    }

    /// Coordinate vectors tried by witness searches in `E(c, a)`.
    fn candidate_classes(&self, c: &[ObjId], a: &[ObjId]) -> Vec<Vec<Scalar>> {
        default_candidates(ext_dim_multi_dyn(self, c, a))
    }
}

fn ext_dim_multi_dyn<M: Model + ?Sized>(m: &M, c: &[ObjId], a: &[ObjId]) -> usize {
    c.iter().map(|&x| a.iter().map(|&y| m.ext_dim(x, y)).sum::<usize>()).sum()
}

pub fn ext_dim_multi(m: &dyn Model, c: &[ObjId], a: &[ObjId]) -> usize {
    ext_dim_multi_dyn(m, c, a)
}

pub fn hom_dim_multi(m: &dyn Model, x: &[ObjId], y: &[ObjId]) -> usize {
    x.iter().map(|&u| y.iter().map(|&v| m.hom_dim(u, v)).sum::<usize>()).sum()
}

/// Nonzero coordinate vectors of a `d`-dimensional space, in a fixed order:
/// all of `{-1,0,1}^d` up to dimension 3, `{0,1}^d` up to 6, else the basis
/// vectors and the all-ones vector.
pub fn default_candidates(d: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    if d <= 3 {
        let vals = [int(1), int(-1), int(0)];
        let total = 3usize.pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<Scalar> = (0..d)
                .map(|_| {
                    let x = vals[c % 3].clone();
                    c /= 3;
                    x
                })
                .collect();
            if v.iter().any(|x| !x.is_zero()) {
                out.push(v);
            }
        }
    } else if d <= 6 {
        for mask in 1u32..(1 << d) {
            out.push((0..d).map(|i| if mask & (1 << i) != 0 { int(1) } else { int(0) }).collect());
        }
        out.sort_by_key(|v| std::cmp::Reverse(v.iter().filter(|x| !x.is_zero()).count()));
    } else {
        out.push(vec![Scalar::one(); d]);
        for i in 0..d {
            let mut v = vec![Scalar::zero(); d];
            v[i] = Scalar::one();
            out.push(v);
        }
    }
    out
}

pub fn format_multiset(model: &dyn Model, xs: &[ObjId]) -> String {
    if xs.is_empty() {
        "0".into()
    } else {
        xs.iter().map(|&x| model.label(x)).collect::<Vec<_>>().join("+")
    }
}

pub fn sorted(mut v: Vec<ObjId>) -> Vec<ObjId> {
    v.sort_unstable();
    v
}

/// Removes every summand lying in `r`.
pub fn strip(xs: &[ObjId], r: &[ObjId]) -> Vec<ObjId> {
    xs.iter().copied().filter(|x| !r.contains(x)).collect()
}

/// Distinct elements of a multiset.
pub fn support(xs: &[ObjId]) -> Vec<ObjId> {
    xs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// All multisets of size `1..=max_size` over `objs`, ascending by size.
pub fn multisets(objs: &[ObjId], max_size: usize) -> Vec<Vec<ObjId>> {
    let mut out: Vec<Vec<ObjId>> = Vec::new();
    let mut layer: Vec<Vec<ObjId>> = vec![vec![]];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().map_or(0, |&l| objs.iter().position(|&o| o == l).unwrap());
            for &o in &objs[start..] {
                let mut n = m.clone();
                n.push(o);
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Builds a catalogue of nonsplit conflations `a -> b -> c` with `a`, `c`
/// multisets of size at most `max_size`, trying the model's candidate classes.
pub fn build_catalogue(model: &dyn Model, max_size: usize) -> Result<Catalogue> {
    let ms = multisets(model.objects(), max_size);
    let pairs: Vec<(Vec<ObjId>, Vec<ObjId>)> = ms
        .iter()
        .flat_map(|c| ms.iter().map(move |a| (c.clone(), a.clone())))
        .filter(|(c, a)| ext_dim_multi(model, c, a) > 0)
        .collect();
    let found = crate::par::try_map(&pairs, |(c, a)| -> Result<Vec<Conflation>> {
        let mut out = Vec::new();
        for coords in model.candidate_classes(c, a) {
            let class = ExtClass { source: c.clone(), target: a.clone(), coords };
            match model.middle(&class) {
                Ok(middle) => out.push(Conflation { class, middle }),
                Err(Error::RealizationUnavailable(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    })?;
    Ok(Catalogue { conflations: found.into_iter().flatten().collect(), max_size })
}

/// A set of indecomposables with pairwise vanishing `E`, and the pairs checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigidSubcat {
    members: Vec<ObjId>,
    certificate: Vec<(ObjId, ObjId)>,
}

impl RigidSubcat {
    pub fn new(model: &dyn Model, members: impl IntoIterator<Item = ObjId>) -> Result<Self> {
        let members: Vec<ObjId> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut certificate = Vec::with_capacity(members.len() * members.len());
        for &r in &members {
            if !model.objects().contains(&r) {
                return Err(Error::InvariantViolation(format!("object {r} is not registered in {}", model.name())));
            }
            for &s in &members {
                if model.ext_dim(r, s) != 0 {
                    return Err(Error::InvariantViolation(format!(
                        "not rigid: E({}, {}) != 0",
                        model.label(r),
                        model.label(s)
                    )));
                }
                certificate.push((r, s));
            }
        }
        Ok(RigidSubcat { members, certificate })
    }

    pub fn empty() -> Self {
        RigidSubcat { members: vec![], certificate: vec![] }
    }

    pub fn members(&self) -> &[ObjId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: ObjId) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &RigidSubcat) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn certificate(&self) -> &[(ObjId, ObjId)] {
        &self.certificate
    }

    pub fn describe(&self, model: &dyn Model) -> String {
        format!("{{{}}}", self.members.iter().map(|&x| model.label(x)).collect::<Vec<_>>().join(", "))
    }
}

pub fn is_rigid_set(model: &dyn Model, xs: &[ObjId]) -> bool {
    xs.iter().all(|&r| xs.iter().all(|&s| model.ext_dim(r, s) == 0))
}

pub fn projectives(model: &dyn Model) -> Vec<ObjId> {
    model.objects().iter().copied().filter(|&x| model.is_projective(x)).collect()
}

pub fn injectives(model: &dyn Model) -> Vec<ObjId> {
    model.objects().iter().copied().filter(|&x| model.is_injective(x)).collect()
}

pub fn projective_injectives(model: &dyn Model) -> Vec<ObjId> {
    model.objects().iter().copied().filter(|&x| model.is_projective(x) && model.is_injective(x)).collect()
}

/// Number of indecomposable summands of a silting object, read off the
/// projectives.
pub fn rank(model: &dyn Model) -> Result<usize> {
    if model.objects().is_empty() {
        return Ok(0);
    }
    match projectives(model).len() {
        0 => Err(Error::RankUnknown),
        n => Ok(n),
    }
}

/// All rigid subcategories (including the empty one), ordered by size and
/// then by members.
pub fn enumerate_rigid(model: &dyn Model) -> Vec<RigidSubcat> {
    let objs: Vec<ObjId> = model.objects().iter().copied().filter(|&x| model.ext_dim(x, x) == 0).collect();
    let n = objs.len();
    let compatible: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| model.ext_dim(objs[i], objs[j]) == 0 && model.ext_dim(objs[j], objs[i]) == 0).collect())
        .collect();
    // cliques grown from each start vertex, in parallel
    let per_start: Vec<Vec<Vec<usize>>> = crate::par::map_range(n, |s| {
        let mut out = Vec::new();
        let mut stack = vec![vec![s]];
        while let Some(c) = stack.pop() {
            let last = *c.last().unwrap();
            for j in (last + 1)..n {
                if c.iter().all(|&i| compatible[i][j]) {
                    let mut d = c.clone();
                    d.push(j);
                    stack.push(d);
                }
            }
            out.push(c);
        }
        out
    });
    let mut all: Vec<Vec<ObjId>> = vec![vec![]];
    all.extend(per_start.into_iter().flatten().map(|c| c.into_iter().map(|i| objs[i]).collect()));
    all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    all.into_iter().map(|m| RigidSubcat::new(model, m).expect("clique is rigid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_counts() {
        assert!(default_candidates(0).is_empty());
        assert_eq!(default_candidates(1).len(), 2);
        assert_eq!(default_candidates(2).len(), 8);
        assert_eq!(default_candidates(4).len(), 15);
        assert_eq!(default_candidates(8).len(), 9);
    }

    #[test]
    fn multiset_enumeration() {
        let m = multisets(&[3, 5], 2);
        assert_eq!(m, vec![vec![3], vec![5], vec![3, 3], vec![3, 5], vec![5, 5]]);
    }
}
