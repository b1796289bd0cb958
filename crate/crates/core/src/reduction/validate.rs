//! Checks the 0-Auslander axioms on the data a model exposes.

use serde::Serialize;

use crate::model::{format_multiset, projective_injectives, sorted, Conflation, ExtClass, Model, ObjId};

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub passed: bool,
    /// Labels of the objects (or pairs) violating the axiom.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub objects: usize,
    /// No nonzero projective-injective objects.
    pub reduced: bool,
    pub axioms: Vec<AxiomResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.axiom == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("model {} ({} indecomposables{})\n", self.model, self.objects, if self.reduced { ", reduced" } else { "" });
        for a in &self.axioms {
            s += &format!("{:<36} {}", a.axiom, if a.passed { "pass" } else { "FAIL" });
            if !a.witnesses.is_empty() {
                s += &format!("  [{}]", a.witnesses.join("; "));
            }
            s.push('\n');
        }
        s
    }
}

fn result(axiom: &'static str, witnesses: Vec<String>) -> AxiomResult {
    AxiomResult { axiom, passed: witnesses.is_empty(), witnesses }
}

pub fn validate_zero_auslander(model: &dyn Model, enough_injectives: bool) -> ValidationReport {
    let objs = model.objects().to_vec();
    let cat = model.catalogue();
    let proj = |xs: &[ObjId]| xs.iter().all(|&x| model.is_projective(x));
    let inj = |xs: &[ObjId]| xs.iter().all(|&x| model.is_injective(x));
    let pi = projective_injectives(model);
    let ending_at = |x: ObjId| cat.conflations.iter().filter(move |c| c.right() == [x]);
    let mut axioms = Vec::new();

    let mut bad = Vec::new();
    for &c in &objs {
        for &a in &objs {
            let zero = ExtClass::zero(model, vec![c], vec![a]);
            match model.middle(&zero) {
                Ok(m) if m == sorted(vec![a, c]) => {}
                Ok(m) => bad.push(format!(
                    "{} -> {} -> {}",
                    model.label(a),
                    format_multiset(model, &m),
                    model.label(c)
                )),
                Err(e) => bad.push(format!("{} <- {}: {e}", model.label(a), model.label(c))),
            }
        }
    }
    axioms.push(result("split-sequence", bad));

    let mut bad = Vec::new();
    for &x in &objs {
        if model.is_projective(x) {
            if let Some(&y) = objs.iter().find(|&&y| model.ext_dim(x, y) != 0) {
                bad.push(format!("E({}, {}) != 0", model.label(x), model.label(y)));
            }
        }
        if model.is_injective(x) {
            if let Some(&y) = objs.iter().find(|&&y| model.ext_dim(y, x) != 0) {
                bad.push(format!("E({}, {}) != 0", model.label(y), model.label(x)));
            }
        }
    }
    axioms.push(result("projective-injective-flags", bad));

    let covers: Vec<(ObjId, Vec<&Conflation>)> =
        objs.iter().map(|&x| (x, ending_at(x).filter(|c| proj(&c.middle)).collect())).collect();
    let bad = covers
        .iter()
        .filter(|(x, cs)| !model.is_projective(*x) && cs.is_empty())
        .map(|(x, _)| model.label(*x))
        .collect();
    axioms.push(result("enough-projectives", bad));

    let bad = covers
        .iter()
        .filter(|(x, cs)| !model.is_projective(*x) && !cs.iter().any(|c| proj(c.left())))
        .map(|(x, _)| model.label(*x))
        .collect();
    axioms.push(result("heredity", bad));

    let bad = objs
        .iter()
        .filter(|&&p| model.is_projective(p) && !pi.contains(&p))
        .filter(|&&p| !cat.conflations.iter().any(|c| c.left() == [p] && c.middle.iter().all(|m| pi.contains(m))))
        .map(|&p| model.label(p))
        .collect();
    axioms.push(result("projective-to-projective-injective", bad));

    // dimension shift along y -> p -> x: E²(x, z) is a quotient of E(y, z)
    // by the image of E(p, z), so it is nonzero once dim E(y,z) > dim E(p,z)
    let mut bad = Vec::new();
    for (x, cs) in &covers {
        for c in cs {
            for &z in &objs {
                let ey: usize = c.left().iter().map(|&y| model.ext_dim(y, z)).sum();
                let ep: usize = c.middle.iter().map(|&p| model.ext_dim(p, z)).sum();
                if ey > ep {
                    bad.push(format!("E²({}, {})", model.label(*x), model.label(z)));
                }
            }
        }
    }
    bad.dedup();
    axioms.push(result("e2-vanishing", bad));

    if enough_injectives {
        let bad = objs
            .iter()
            .filter(|&&x| !model.is_injective(x))
            .filter(|&&x| !cat.conflations.iter().any(|c| c.left() == [x] && inj(&c.middle)))
            .map(|&x| model.label(x))
            .collect();
        axioms.push(result("enough-injectives", bad));
    }

    ValidationReport { model: model.name(), objects: objs.len(), reduced: pi.is_empty(), axioms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::interval::IntervalModel;

    #[test]
    fn interval_models_pass() {
        for n in 1..=3 {
            let r = validate_zero_auslander(&IntervalModel::new(n), true);
            assert!(r.passed(), "{}", r.to_text());
            assert!(!r.reduced);
        }
    }
}
