//! Approximation conflations for the cotorsion pairs `(R, R^⊥)` and
//! `(^⊥R, R)`, and the functor `F: C -> Z_R / [R]` built from them.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{perp, Side};
use crate::error::{Error, Result};
use crate::exact::scalar::Scalar;
use crate::model::{sorted, strip, Conflation, ExtClass, Model, ObjId, RigidSubcat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOrder {
    Forward,
    Reversed,
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessConfig {
    /// Largest multiplicity of a single member of `R` in the end term.
    pub bound: usize,
    pub order: SearchOrder,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig { bound: 3, order: SearchOrder::Forward }
    }
}

/// Multiplicity vectors `0 <= m_i <= caps_i`, nonzero, by total then lex.
fn multiplicity_vectors(caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in caps {
        out = out.into_iter().flat_map(|v: Vec<usize>| (0..=c).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out.retain(|v| v.iter().any(|&k| k > 0));
    out.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
    out
}

/// Universal class: copy `j` of `r_i` carries the `j`-th basis vector of its block.
fn universal(members: &[(ObjId, usize)]) -> (Vec<ObjId>, Vec<Scalar>) {
    let mut objs = Vec::new();
    let mut coords = Vec::new();
    for &(r, e) in members {
        for j in 0..e {
            objs.push(r);
            coords.extend((0..e).map(|t| if t == j { Scalar::one() } else { Scalar::zero() }));
        }
    }
    (objs, coords)
}

enum End {
    /// `x -> b -> c` with `c ∈ add R`; the class lives in `E(c, x)`.
    Left,
    /// `a -> b' -> x` with `a ∈ add R`; the class lives in `E(x, a)`.
    Right,
}

fn search(model: &dyn Model, r: &RigidSubcat, x: ObjId, end: End, cfg: WitnessConfig) -> Result<Conflation> {
    let e = |s: ObjId| match end {
        End::Left => model.ext_dim(s, x),
        End::Right => model.ext_dim(x, s),
    };
    let mut members: Vec<(ObjId, usize)> = r.members().iter().map(|&s| (s, e(s))).filter(|&(_, d)| d > 0).collect();
    let accept = |b: &[ObjId]| match end {
        End::Left => b.iter().all(|&y| r.members().iter().all(|&s| model.ext_dim(s, y) == 0)),
        End::Right => b.iter().all(|&y| r.members().iter().all(|&s| model.ext_dim(y, s) == 0)),
    };
    let class_of = |objs: Vec<ObjId>, coords: Vec<Scalar>| match end {
        End::Left => ExtClass { source: objs, target: vec![x], coords },
        End::Right => ExtClass { source: vec![x], target: objs, coords },
    };
    if members.is_empty() {
        return Ok(Conflation { class: class_of(vec![], vec![]), middle: vec![x] });
    }
    if cfg.order == SearchOrder::Reversed {
        members.reverse();
    }
    let caps: Vec<usize> = members.iter().map(|&(_, d)| d.min(cfg.bound)).collect();
    for m in multiplicity_vectors(&caps) {
        let objs: Vec<ObjId> = members.iter().zip(&m).flat_map(|(&(s, _), &k)| std::iter::repeat_n(s, k)).collect();
        let probe = class_of(objs.clone(), vec![]);
        let mut cands = match end {
            End::Left => model.candidate_classes(&probe.source, &[x]),
            End::Right => model.candidate_classes(&[x], &probe.target),
        };
        if cfg.order == SearchOrder::Reversed {
            cands.reverse();
        }
        for coords in cands {
            let class = class_of(objs.clone(), coords);
            match model.middle(&class) {
                Ok(b) if accept(&b) => return Ok(Conflation { class, middle: b }),
                Ok(_) | Err(Error::RealizationUnavailable(_)) => {}
                Err(err) => return Err(err),
            }
        }
    }
    let (objs, coords) = universal(&members);
    let class = class_of(objs, coords);
    match model.middle(&class) {
        Ok(b) if accept(&b) => Ok(Conflation { class, middle: b }),
        Ok(_) | Err(Error::RealizationUnavailable(_)) => Err(Error::WitnessSearchExhausted {
            what: format!(
                "{} approximation of {} by {}",
                if matches!(end, End::Left) { "left" } else { "right" },
                model.label(x),
                r.describe(model)
            ),
            bound: cfg.bound,
        }),
        Err(err) => Err(err),
    }
}

/// A conflation `x -> b -> c` with `c ∈ add R` and `b ∈ R^⊥`.
pub fn ct3l(model: &dyn Model, r: &RigidSubcat, x: ObjId, cfg: WitnessConfig) -> Result<Conflation> {
    search(model, r, x, End::Left, cfg)
}

/// A conflation `a -> b' -> x` with `a ∈ add R` and `b' ∈ ^⊥R`.
pub fn ct3r(model: &dyn Model, r: &RigidSubcat, x: ObjId, cfg: WitnessConfig) -> Result<Conflation> {
    search(model, r, x, End::Right, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct GcpEntry {
    pub object: String,
    pub left: Option<String>,
    pub right: Option<String>,
    pub error: Option<String>,
    #[serde(skip)]
    pub witnesses: Option<(Conflation, Conflation)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GcpReport {
    pub reducing: String,
    pub entries: Vec<GcpEntry>,
}

impl GcpReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.error.is_none())
    }
}

fn describe(model: &dyn Model, c: &Conflation) -> String {
    format!(
        "{} -> {} -> {} [{}]",
        crate::model::format_multiset(model, c.left()),
        crate::model::format_multiset(model, &c.middle),
        crate::model::format_multiset(model, c.right()),
        c.class.coords.iter().map(crate::exact::scalar::format_scalar).collect::<Vec<_>>().join(",")
    )
}

/// Searches both approximation witnesses for every object and re-checks them.
pub fn check_gcp(model: &dyn Model, r: &RigidSubcat, cfg: WitnessConfig) -> GcpReport {
    let right_perp = perp(model, r.members(), Side::Right);
    let left_perp = perp(model, r.members(), Side::Left);
    let entries = crate::par::map(model.objects(), |&x| {
        let found = ct3l(model, r, x, cfg).and_then(|l| Ok((l, ct3r(model, r, x, cfg)?)));
        match found {
            Ok((l, rt)) => {
                let mut error = None;
                if !l.right().iter().all(|&c| r.contains(c)) || !l.middle.iter().all(|b| right_perp.contains(b)) {
                    error = Some(format!("left witness for {} leaves (R, R^⊥)", model.label(x)));
                }
                if !rt.left().iter().all(|&a| r.contains(a)) || !rt.middle.iter().all(|b| left_perp.contains(b)) {
                    error = Some(format!("right witness for {} leaves (^⊥R, R)", model.label(x)));
                }
                GcpEntry {
                    object: model.label(x),
                    left: Some(describe(model, &l)),
                    right: Some(describe(model, &rt)),
                    error,
                    witnesses: Some((l, rt)),
                }
            }
            Err(e) => GcpEntry { object: model.label(x), left: None, right: None, error: Some(e.to_string()), witnesses: None },
        }
    });
    GcpReport { reducing: r.describe(model), entries }
}

/// `F(x)`: the middle of a left witness, then the middles of right witnesses
/// of its summands, with `R` stripped.
pub fn approx_functor_f(model: &dyn Model, r: &RigidSubcat, xs: &[ObjId], cfg: WitnessConfig) -> Result<Vec<ObjId>> {
    let mut out = Vec::new();
    for &x in xs {
        let b = ct3l(model, r, x, cfg)?.middle;
        for y in b {
            out.extend(ct3r(model, r, y, cfg)?.middle);
        }
    }
    Ok(sorted(strip(&out, r.members())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::interval::IntervalModel;

    #[test]
    fn vectors_are_ordered_by_total() {
        let v = multiplicity_vectors(&[1, 2]);
        assert_eq!(v, vec![vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn lambda2_witnesses() {
        let m = IntervalModel::new(2);
        let (p, n, i) = (m.id(2, 2).unwrap(), m.id(1, 2).unwrap(), m.id(1, 1).unwrap());
        let r = RigidSubcat::new(&m, [p]).unwrap();
        let w = ct3r(&m, &r, i, WitnessConfig::default()).unwrap();
        assert_eq!((w.left(), w.middle.as_slice()), (&[p][..], &[n][..]));
        assert!(check_gcp(&m, &r, WitnessConfig::default()).passed());
        assert_eq!(approx_functor_f(&m, &r, &[i], WitnessConfig::default()).unwrap(), vec![n]);
        assert!(approx_functor_f(&m, &r, &[p], WitnessConfig::default()).unwrap().is_empty());
    }
}
