//! Bound quiver algebras `kQ/I` with an explicit path basis.
//!
//! Paths are read left to right: `a.b` is `a` followed by `b`, so a path
//! from `i` to `j` lies in `e_i Λ e_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::algebra::{FinDimAlgebra, Vector};
use super::matrix::{independent_subset, Factorized, Matrix};
use super::scalar::{format_scalar, parse_scalar, Scalar};
use crate::error::{malformed, Error, Result};

/// Default bound on path length before the algebra is declared infinite.
pub const DEFAULT_PATH_BOUND: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    /// True for the trivial path at a vertex.
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.target == other.source).then(|| {
            let mut arrows = self.arrows.clone();
            arrows.extend_from_slice(&other.arrows);
            Path { source: self.source, target: other.target, arrows }
        })
    }

    fn order_key(&self) -> (usize, &[usize], usize) {
        (self.len(), &self.arrows, self.source)
    }
}

pub type Relation = Vec<(Scalar, Path)>;

#[derive(Clone, Debug)]
pub struct BoundQuiverAlgebra {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation>,
    basis: Vec<Path>,
    index: BTreeMap<(usize, usize, Vec<usize>), usize>,
    /// Paths of this length and longer vanish.
    nil_length: usize,
    /// Normal forms of all paths shorter than `nil_length` that are not basis paths.
    reductions: BTreeMap<Vec<usize>, Vector>,
    algebra: FinDimAlgebra,
}

impl BoundQuiverAlgebra {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>, relations: Vec<Relation>) -> Result<Self> {
        Self::with_bound(vertices, arrows, relations, DEFAULT_PATH_BOUND)
    }

    pub fn with_bound(
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        relations: Vec<Relation>,
        bound: usize,
    ) -> Result<Self> {
        for (k, rel) in relations.iter().enumerate() {
            check_relation(rel).map_err(|m| Error::InvariantViolation(format!("relation {}: {m}", k + 1)))?;
        }
        let n = vertices.len();
        let mut by_len: Vec<Vec<Path>> = vec![(0..n).map(Path::trivial).collect()];
        let mut nil_length = None;
        for len in 1..=bound {
            let prev = by_len.last().unwrap();
            let mut next = Vec::new();
            for p in prev {
                for (a, arr) in arrows.iter().enumerate() {
                    if arr.source == p.target {
                        let mut arrows_ = p.arrows.clone();
                        arrows_.push(a);
                        next.push(Path { source: p.source, target: arr.target, arrows: arrows_ });
                    }
                }
            }
            next.sort_by(|x, y| x.order_key().cmp(&y.order_key()));
            by_len.push(next);
            if Self::top_layer_in_ideal(&by_len, &relations, len) {
                nil_length = Some(len);
                break;
            }
        }
        let nil_length = nil_length.ok_or(Error::InfiniteDimensional(bound))?;
        let paths: Vec<Path> = by_len[..nil_length].iter().flatten().cloned().collect();
        let pos: BTreeMap<(usize, usize, Vec<usize>), usize> =
            paths.iter().enumerate().map(|(i, p)| ((p.source, p.target, p.arrows.clone()), i)).collect();
        let m = paths.len();
        let ideal = Self::ideal_span(&paths, &pos, &relations, nil_length);
        // greedy basis: paths independent modulo the ideal, in (length, lex) order
        let mut family = ideal.clone();
        family.extend((0..m).map(|i| unit_vec(m, i)));
        let chosen = independent_subset(&family, m);
        let ideal_rank = chosen.iter().filter(|&&i| i < ideal.len()).count();
        let basis_idx: Vec<usize> =
            chosen.iter().filter(|&&i| i >= ideal.len()).map(|&i| i - ideal.len()).collect();
        let cols: Vec<Vector> = chosen.iter().map(|&i| family[i].clone()).collect();
        let solver = Factorized::new(&Matrix::from_columns(m, &cols));
        let d = basis_idx.len();
        let normal_form = |v: &Vector| -> Vector { solver.solve(v).expect("spanning set")[ideal_rank..].to_vec() };
        let mut reductions = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            if !basis_idx.contains(&i) {
                reductions.insert(path_key(p), normal_form(&unit_vec(m, i)));
            }
        }
        let basis: Vec<Path> = basis_idx.iter().map(|&i| paths[i].clone()).collect();
        let index = basis.iter().enumerate().map(|(i, p)| ((p.source, p.target, p.arrows.clone()), i)).collect();
        let mut out = BoundQuiverAlgebra {
            vertices,
            arrows,
            relations,
            basis,
            index,
            nil_length,
            reductions,
            algebra: FinDimAlgebra::new_unchecked(vec![], vec![]),
        };
        let mut table = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                if let Some(p) = out.basis[i].concat(&out.basis[j]) {
                    table[i][j] = out.path_vector(&p);
                }
            }
        }
        let mut unit = vec![Scalar::zero(); d];
        for v in 0..n {
            unit[out.trivial_index(v)] = Scalar::one();
        }
        out.algebra = FinDimAlgebra::new_unchecked(table, unit);
        Ok(out)
    }

    /// All paths of length `len` lie in the span of `u ρ v` whose monomials
    /// have length at most `len`.
    fn top_layer_in_ideal(by_len: &[Vec<Path>], relations: &[Relation], len: usize) -> bool {
        let top = &by_len[len];
        if top.is_empty() {
            return true;
        }
        let paths: Vec<Path> = by_len.iter().flatten().cloned().collect();
        let pos: BTreeMap<(usize, usize, Vec<usize>), usize> =
            paths.iter().enumerate().map(|(i, p)| ((p.source, p.target, p.arrows.clone()), i)).collect();
        let m = paths.len();
        let mut gens = Vec::new();
        for_each_multiple(&paths, relations, len + 1, |terms| {
            if terms.iter().all(|(_, p)| p.len() <= len) {
                let mut v = vec![Scalar::zero(); m];
                for (c, p) in terms {
                    v[pos[&(p.source, p.target, p.arrows.clone())]] += c;
                }
                gens.push(v);
            }
        });
        let r = independent_subset(&gens, m).len();
        let mut with_top = gens.clone();
        for p in top {
            with_top.push(unit_vec(m, pos[&(p.source, p.target, p.arrows.clone())]));
        }
        independent_subset(&with_top, m).len() == r
    }

    /// Span of the truncations of `u ρ v` below `nil_length`.
    fn ideal_span(
        paths: &[Path],
        pos: &BTreeMap<(usize, usize, Vec<usize>), usize>,
        relations: &[Relation],
        nil_length: usize,
    ) -> Vec<Vector> {
        let m = paths.len();
        let mut gens = Vec::new();
        for_each_multiple(paths, relations, nil_length, |terms| {
            let mut v = vec![Scalar::zero(); m];
            for (c, p) in terms {
                if p.len() < nil_length {
                    v[pos[&(p.source, p.target, p.arrows.clone())]] += c;
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                gens.push(v);
            }
        });
        gens
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn nil_length(&self) -> usize {
        self.nil_length
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn trivial_index(&self, v: usize) -> usize {
        self.index[&(v, v, Vec::new())]
    }

    /// Basis indices of `e_i Λ e_j`, i.e. paths from `i` to `j`.
    pub fn corner(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].source == i && self.basis[k].target == j).collect()
    }

    /// Basis indices of paths starting at `i` (the right projective `e_i Λ`).
    pub fn starting_at(&self, i: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].source == i).collect()
    }

    /// Coordinates of an arbitrary path in the basis.
    pub fn path_vector(&self, p: &Path) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim()];
        if p.len() >= self.nil_length {
            return v;
        }
        if let Some(&i) = self.index.get(&(p.source, p.target, p.arrows.clone())) {
            v[i] = Scalar::one();
        } else if let Some(r) = self.reductions.get(&path_key(p)) {
            v.clone_from(r);
        }
        v
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.algebra.mul(a, b)
    }

    /// The coefficient of the trivial path `e_v` in `a`.
    pub fn top_coefficient(&self, a: &[Scalar], v: usize) -> Scalar {
        a[self.trivial_index(v)].clone()
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.is_trivial() {
            format!("e{}", self.vertices[p.source])
        } else {
            p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn format_element(&self, a: &[Scalar]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = self.path_name(&self.basis[i]);
                if c.is_one() {
                    name
                } else {
                    format!("{}*{}", format_scalar(c), name)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Parses the AlgebraSpec text format.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_bound(text, DEFAULT_PATH_BOUND)
    }

    pub fn parse_with_bound(text: &str, bound: usize) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut arrows: Vec<Arrow> = Vec::new();
        let mut raw_relations: Vec<(usize, String)> = Vec::new();
        let mut seen_vertices = false;
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(':').ok_or_else(|| malformed(line_no, "expected `key: value`"))?;
            match key.trim() {
                "vertices" => {
                    seen_vertices = true;
                    for v in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                        if vertices.iter().any(|w| w == v) {
                            return Err(malformed(line_no, format!("duplicate vertex `{v}`")));
                        }
                        vertices.push(v.to_string());
                    }
                }
                "arrows" => {
                    for item in rest.split([';', ',']).map(str::trim).filter(|s| !s.is_empty()) {
                        let (name, ends) =
                            item.split_once(':').ok_or_else(|| malformed(line_no, format!("arrow `{item}` lacks a name")))?;
                        let (s, t) = ends
                            .split_once("->")
                            .ok_or_else(|| malformed(line_no, format!("arrow `{item}` lacks `->`")))?;
                        let name = name.trim();
                        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                            return Err(malformed(line_no, format!("bad arrow name `{name}`")));
                        }
                        if arrows.iter().any(|a| a.name == name) {
                            return Err(malformed(line_no, format!("duplicate arrow `{name}`")));
                        }
                        let find = |v: &str| {
                            vertices
                                .iter()
                                .position(|w| w == v.trim())
                                .ok_or_else(|| malformed(line_no, format!("unknown vertex `{}`", v.trim())))
                        };
                        arrows.push(Arrow { name: name.to_string(), source: find(s)?, target: find(t)? });
                    }
                }
                "relations" => {
                    for item in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                        raw_relations.push((line_no, item.to_string()));
                    }
                }
                other => return Err(malformed(line_no, format!("unknown key `{other}`"))),
            }
        }
        if !seen_vertices || vertices.is_empty() {
            return Err(malformed(0, "no vertices declared"));
        }
        let mut relations = Vec::new();
        for (line_no, item) in raw_relations {
            let rel = parse_relation(&item, &arrows).map_err(|m| malformed(line_no, m))?;
            check_relation(&rel).map_err(|m| malformed(line_no, m))?;
            relations.push(rel);
        }
        Self::with_bound(vertices, arrows, relations, bound)
    }

    /// Renders the algebra back to the AlgebraSpec text format.
    pub fn to_spec(&self) -> String {
        let mut s = format!("vertices: {}\n", self.vertices.join(" "));
        if !self.arrows.is_empty() {
            let arrows: Vec<String> = self
                .arrows
                .iter()
                .map(|a| format!("{}: {} -> {}", a.name, self.vertices[a.source], self.vertices[a.target]))
                .collect();
            s += &format!("arrows: {}\n", arrows.join("; "));
        }
        for rel in &self.relations {
            let terms: Vec<String> = rel
                .iter()
                .map(|(c, p)| format!("{}*{}", format_scalar(c), self.path_name(p)))
                .collect();
            s += &format!("relations: {} = 0\n", terms.join(" + "));
        }
        s
    }

    /// `k[x]/(x^n)` as a one-loop quiver.
    pub fn truncated_loop(n: usize) -> Self {
        let rel = vec![(Scalar::one(), Path { source: 0, target: 0, arrows: vec![0; n] })];
        Self::new(vec!["1".into()], vec![Arrow { name: "x".into(), source: 0, target: 0 }], vec![rel])
            .expect("truncated loop is finite dimensional")
    }

    /// Linearly oriented `A_n` without relations.
    pub fn linear_a(n: usize) -> Self {
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let arrows =
            (0..n.saturating_sub(1)).map(|i| Arrow { name: format!("a{}", i + 1), source: i, target: i + 1 }).collect();
        Self::new(vertices, arrows, vec![]).expect("A_n is finite dimensional")
    }
}

impl fmt::Display for BoundQuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_spec())
    }
}

fn path_key(p: &Path) -> Vec<usize> {
    let mut k = vec![p.source, p.target];
    k.extend_from_slice(&p.arrows);
    k
}

fn unit_vec(m: usize, i: usize) -> Vector {
    let mut v = vec![Scalar::zero(); m];
    v[i] = Scalar::one();
    v
}

fn check_relation(rel: &Relation) -> std::result::Result<(), String> {
    let Some((_, first)) = rel.first() else { return Err("empty relation".into()) };
    for (_, p) in rel {
        if p.len() < 2 {
            return Err("relation contains a path of length < 2".into());
        }
        if p.source != first.source || p.target != first.target {
            return Err("relation paths are not parallel".into());
        }
    }
    Ok(())
}

/// Calls `f` with the terms of `u ρ v` for all relations `ρ` and paths `u`,
/// `v` from `paths` whenever `len(u) + len(v) + mindeg(ρ) < limit`.
fn for_each_multiple(paths: &[Path], relations: &[Relation], limit: usize, mut f: impl FnMut(&[(Scalar, Path)])) {
    for rel in relations {
        let mindeg = rel.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
        let (s, t) = (rel[0].1.source, rel[0].1.target);
        for u in paths.iter().filter(|u| u.target == s) {
            for v in paths.iter().filter(|v| v.source == t) {
                if u.len() + v.len() + mindeg >= limit {
                    continue;
                }
                let terms: Vec<(Scalar, Path)> = rel
                    .iter()
                    .map(|(c, p)| (c.clone(), u.concat(p).and_then(|up| up.concat(v)).unwrap()))
                    .collect();
                f(&terms);
            }
        }
    }
}

fn parse_relation(item: &str, arrows: &[Arrow]) -> std::result::Result<Relation, String> {
    let (lhs, rhs) = item.split_once('=').ok_or_else(|| format!("relation `{item}` lacks `= 0`"))?;
    if rhs.trim() != "0" {
        return Err(format!("relation `{item}` must have right-hand side 0"));
    }
    let compact: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, c) in compact.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    terms.push(cur);
    let mut out: Vec<(Scalar, Path)> = Vec::new();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-Scalar::one(), b),
            None => (Scalar::one(), term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, path) = match body.rsplit_once('*') {
            Some((c, p)) => (parse_scalar(c).ok_or_else(|| format!("bad coefficient `{c}`"))?, p),
            None => (Scalar::one(), body),
        };
        if path.is_empty() {
            return Err(format!("empty path in `{item}`"));
        }
        let mut ids = Vec::new();
        for name in path.split('.') {
            ids.push(arrows.iter().position(|a| a.name == name).ok_or_else(|| format!("unknown arrow `{name}`"))?);
        }
        for w in ids.windows(2) {
            if arrows[w[0]].target != arrows[w[1]].source {
                return Err(format!("path `{path}` is not composable"));
            }
        }
        let p = Path { source: arrows[ids[0]].source, target: arrows[*ids.last().unwrap()].target, arrows: ids };
        let c = sign * coef;
        if let Some(slot) = out.iter_mut().find(|(_, q)| *q == p) {
            slot.0 += c;
        } else {
            out.push((c, p));
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_of_small_algebras() {
        let a2 = BoundQuiverAlgebra::parse("vertices: 1 2\narrows: a: 1 -> 2\n").unwrap();
        assert_eq!(a2.dim(), 3);
        let dual = BoundQuiverAlgebra::parse("vertices: 1\narrows: x: 1 -> 1\nrelations: x.x = 0\n").unwrap();
        assert_eq!(dual.dim(), 2);
        for n in 1..=5 {
            assert_eq!(BoundQuiverAlgebra::linear_a(n).dim(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn free_loop_is_infinite() {
        let err = BoundQuiverAlgebra::parse_with_bound("vertices: 1\narrows: x: 1 -> 1\n", 6).unwrap_err();
        assert_eq!(err, Error::InfiniteDimensional(6));
    }

    #[test]
    fn commutativity_relation() {
        // commutative square: a.b = c.d
        let text = "vertices: 1 2 3 4\narrows: a: 1 -> 2; b: 2 -> 4; c: 1 -> 3; d: 3 -> 4\nrelations: a.b - c.d = 0\n";
        let alg = BoundQuiverAlgebra::parse(text).unwrap();
        assert_eq!(alg.dim(), 4 + 4 + 1);
        alg.algebra().check_invariants().unwrap();
        let ab = alg.path_vector(&Path { source: 0, target: 3, arrows: vec![0, 1] });
        let cd = alg.path_vector(&Path { source: 0, target: 3, arrows: vec![2, 3] });
        assert_eq!(ab, cd);
    }

    #[test]
    fn zero_relation_kills_longer_paths() {
        let text = "vertices: 1 2 3\narrows: a: 1 -> 2; b: 2 -> 3\nrelations: a.b = 0\n";
        let alg = BoundQuiverAlgebra::parse(text).unwrap();
        assert_eq!(alg.dim(), 5);
        assert!(alg.corner(0, 2).is_empty());
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("arrows: a: 1 -> 2\n", 1),
            ("vertices: 1 2\narrows: a 1 -> 2\n", 2),
            ("vertices: 1\narrows: x: 1 -> 1\nrelations: x.y = 0\n", 3),
            ("vertices: 1 2\narrows: a: 1 -> 2\nrelations: a = 0\n", 3),
            ("vertices: 1\nfoo: bar\n", 2),
        ];
        for (text, line) in cases {
            match BoundQuiverAlgebra::parse(text) {
                Err(Error::MalformedSpec { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("expected malformed for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn trivial_paths_are_orthogonal_idempotents() {
        let alg = BoundQuiverAlgebra::linear_a(3);
        let a = alg.algebra();
        a.check_invariants().unwrap();
        let es: Vec<Vector> = (0..3).map(|v| a.basis_vector(alg.trivial_index(v))).collect();
        for (i, e) in es.iter().enumerate() {
            assert!(a.is_idempotent(e));
            for (j, f) in es.iter().enumerate() {
                if i != j {
                    assert!(a.mul(e, f).iter().all(Zero::is_zero));
                }
            }
        }
    }

    #[test]
    fn spec_roundtrip() {
        let text = "vertices: 1 2\narrows: a: 1 -> 2; b: 2 -> 1\nrelations: a.b = 0; 1/2*b.a = 0\n";
        let alg = BoundQuiverAlgebra::parse(text).unwrap();
        let again = BoundQuiverAlgebra::parse(&alg.to_spec()).unwrap();
        assert_eq!(alg.dim(), again.dim());
        assert_eq!(alg.basis(), again.basis());
    }
}
