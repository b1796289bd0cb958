//! DOT and JSON renderings of a picture category.

use serde_json::{json, Value};

use super::PictureCategory;
use crate::model::Model;

impl PictureCategory {
    /// Objects as nodes and non-identity morphisms as edges labelled by
    /// their payload.
    pub fn to_dot(&self) -> String {
        let m = self.model();
        let mut s = String::from("digraph picture {\n");
        for (k, o) in self.objects.iter().enumerate() {
            s += &format!("  o{k} [label=\"{}\"];\n", o.label);
        }
        for mor in self.morphisms.iter().filter(|f| !f.is_identity()) {
            let label: Vec<String> = mor.payload.iter().map(|&x| m.label(x)).collect();
            s += &format!("  o{} -> o{} [label=\"{}\"];\n", mor.source, mor.target, label.join("+"));
        }
        s += "}\n";
        s
    }

    pub fn to_json(&self, certificates: bool) -> Value {
        let m = self.model();
        let labels = |xs: &[usize]| xs.iter().map(|&x| m.label(x)).collect::<Vec<_>>();
        let objects: Vec<Value> = self
            .objects
            .iter()
            .enumerate()
            .map(|(k, o)| {
                json!({
                    "id": k,
                    "label": o.label,
                    "representative": labels(o.rep.members()),
                    "reduced_objects": labels(o.reduced.objects()),
                })
            })
            .collect();
        let morphisms: Vec<Value> = self
            .morphisms
            .iter()
            .enumerate()
            .map(|(k, f)| {
                json!({
                    "id": k,
                    "source": f.source,
                    "target": f.target,
                    "payload": labels(&f.payload),
                    "rank": f.rank(),
                })
            })
            .collect();
        let n = self.morphisms.len();
        let composition: Vec<Value> = (0..n)
            .flat_map(|f| (0..n).filter_map(move |g| self.compose(f, g).map(|h| json!([f, g, h]))))
            .collect();
        let mut doc = json!({
            "schema": 1,
            "model": m.name(),
            "root": self.root,
            "sink": self.sink,
            "objects": objects,
            "morphisms": morphisms,
            "composition": composition,
        });
        if certificates {
            let prov: Vec<Value> = self
                .objects
                .iter()
                .map(|o| {
                    json!({
                        "object": o.label,
                        "identified": o.identified.iter().map(|(r, v)| json!({
                            "generators": labels(r.members()),
                            "certificate": v,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            doc["provenance"] = Value::Array(prov);
        }
        doc
    }
}
