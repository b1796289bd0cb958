//! The two-term category `K^[-1,0](proj Λ)` of a bound quiver algebra.
//!
//! Complexes `P1 -> P0` of right projectives are stored as lists of vertex
//! slots and a differential whose `(r, c)` entry lies in `e_{p0[r]} Λ e_{p1[c]}`
//! and acts by left multiplication. `E(X, Y)` is `Hom_K(X, ΣY)`, the space of
//! maps `X1 -> Y0` modulo `dY h1 + h0 dX`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::{build_catalogue, ext_dim_multi, multisets, Catalogue, ExtClass, Model, ObjId};
use crate::error::{Error, Result};
use crate::exact::algebra::{FinDimAlgebra, Vector};
use crate::exact::matrix::{independent_subset, rank_of, Factorized, Matrix};
use crate::exact::quiver::BoundQuiverAlgebra;
use crate::exact::scalar::Scalar;

/// A matrix of homomorphisms between sums of indecomposable projectives.
#[derive(Clone, PartialEq, Eq)]
pub struct PMat {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    entries: Vec<Vector>,
}

impl fmt::Debug for PMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PMat {:?} <- {:?}: {:?}", self.rows, self.cols, self.entries)
    }
}

impl PMat {
    pub fn zero(alg: &BoundQuiverAlgebra, rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let n = rows.len() * cols.len();
        PMat { rows, cols, entries: vec![vec![Scalar::zero(); alg.dim()]; n] }
    }

    pub fn identity(alg: &BoundQuiverAlgebra, slots: &[usize]) -> Self {
        let mut m = PMat::zero(alg, slots.to_vec(), slots.to_vec());
        for (i, &v) in slots.iter().enumerate() {
            m.entries[i * slots.len() + i][alg.trivial_index(v)] = Scalar::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Vector {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Vector) {
        let n = self.cols.len();
        self.entries[r * n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(Zero::is_zero))
    }

    pub fn mul(&self, alg: &BoundQuiverAlgebra, other: &PMat) -> PMat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = PMat::zero(alg, self.rows.clone(), other.cols.clone());
        for r in 0..self.rows.len() {
            for k in 0..self.cols.len() {
                let a = self.get(r, k);
                if a.iter().all(Zero::is_zero) {
                    continue;
                }
                for c in 0..other.cols.len() {
                    let b = other.get(k, c);
                    if b.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let p = alg.mul(a, b);
                    let idx = r * other.cols.len() + c;
                    for (x, y) in out.entries[idx].iter_mut().zip(p) {
                        *x += y;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PMat) -> PMat {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        PMat { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    pub fn sub(&self, other: &PMat) -> PMat {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        PMat { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &PMat) {
        for r in 0..block.rows.len() {
            for c in 0..block.cols.len() {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Top coefficients (of trivial paths) as a scalar matrix.
    pub fn top(&self, alg: &BoundQuiverAlgebra) -> Matrix {
        let mut m = Matrix::zero(self.rows.len(), self.cols.len());
        for r in 0..self.rows.len() {
            for c in 0..self.cols.len() {
                if self.rows[r] == self.cols[c] {
                    m[(r, c)] = alg.top_coefficient(self.get(r, c), self.rows[r]);
                }
            }
        }
        m
    }

    fn select(&self, alg: &BoundQuiverAlgebra, rows: &[usize], cols: &[usize]) -> PMat {
        let mut out = PMat::zero(alg, rows.iter().map(|&r| self.rows[r]).collect(), cols.iter().map(|&c| self.cols[c]).collect());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }
}

/// Coordinates on the space of all `PMat`s with fixed row and column slots.
struct PSpace {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Basis indices of `e_{rows[r]} Λ e_{cols[c]}` per entry.
    corners: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl PSpace {
    fn new(alg: &BoundQuiverAlgebra, rows: &[usize], cols: &[usize]) -> Self {
        let mut corners = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for &r in rows {
            for &c in cols {
                let k = alg.corner(r, c);
                offsets.push(dim);
                dim += k.len();
                corners.push(k);
            }
        }
        PSpace { rows: rows.to_vec(), cols: cols.to_vec(), corners, offsets, dim }
    }

    fn to_pmat(&self, alg: &BoundQuiverAlgebra, x: &[Scalar]) -> PMat {
        let mut m = PMat::zero(alg, self.rows.clone(), self.cols.clone());
        for (e, corner) in self.corners.iter().enumerate() {
            for (t, &b) in corner.iter().enumerate() {
                m.entries[e][b] = x[self.offsets[e] + t].clone();
            }
        }
        m
    }

    fn from_pmat(&self, m: &PMat) -> Vec<Scalar> {
        let mut x = Vec::with_capacity(self.dim);
        for (e, corner) in self.corners.iter().enumerate() {
            for &b in corner {
                x.push(m.entries[e][b].clone());
            }
        }
        x
    }

    fn unit(&self, alg: &BoundQuiverAlgebra, k: usize) -> PMat {
        let mut x = vec![Scalar::zero(); self.dim];
        x[k] = Scalar::one();
        self.to_pmat(alg, &x)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Complex {
    pub p1: Vec<usize>,
    pub p0: Vec<usize>,
    pub d: PMat,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex {:?} -> {:?} d={:?}", self.p1, self.p0, self.d)
    }
}

impl Complex {
    pub fn new(alg: &BoundQuiverAlgebra, p1: Vec<usize>, p0: Vec<usize>) -> Self {
        let d = PMat::zero(alg, p0.clone(), p1.clone());
        Complex { p1, p0, d }
    }

    pub fn stalk(alg: &BoundQuiverAlgebra, v: usize) -> Self {
        Complex::new(alg, vec![], vec![v])
    }

    pub fn shifted_stalk(alg: &BoundQuiverAlgebra, v: usize) -> Self {
        Complex::new(alg, vec![v], vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.p1.is_empty() && self.p0.is_empty()
    }

    /// Multiplicity vectors `(m1, m0)` over the vertices.
    pub fn multiplicities(&self, n: usize) -> (Vec<usize>, Vec<usize>) {
        let count = |s: &[usize]| (0..n).map(|v| s.iter().filter(|&&x| x == v).count()).collect();
        (count(&self.p1), count(&self.p0))
    }

    pub fn direct_sum(alg: &BoundQuiverAlgebra, parts: &[&Complex]) -> Complex {
        let p1: Vec<usize> = parts.iter().flat_map(|c| c.p1.iter().copied()).collect();
        let p0: Vec<usize> = parts.iter().flat_map(|c| c.p0.iter().copied()).collect();
        let mut d = PMat::zero(alg, p0.clone(), p1.clone());
        let (mut r0, mut c0) = (0, 0);
        for c in parts {
            d.set_block(r0, c0, &c.d);
            r0 += c.p0.len();
            c0 += c.p1.len();
        }
        Complex { p1, p0, d }
    }

    /// Cancels every component of the differential with invertible top,
    /// leaving a homotopy-equivalent complex whose differential is radical.
    pub fn minimalize(&self, alg: &BoundQuiverAlgebra) -> Complex {
        let mut cur = self.clone();
        loop {
            let mut pivot = None;
            'search: for r in 0..cur.p0.len() {
                for c in 0..cur.p1.len() {
                    if cur.p0[r] == cur.p1[c] && !alg.top_coefficient(cur.d.get(r, c), cur.p0[r]).is_zero() {
                        pivot = Some((r, c));
                        break 'search;
                    }
                }
            }
            let Some((r, c)) = pivot else { return cur };
            let uinv = corner_inverse(alg, cur.d.get(r, c), cur.p0[r]);
            let rows: Vec<usize> = (0..cur.p0.len()).filter(|&i| i != r).collect();
            let cols: Vec<usize> = (0..cur.p1.len()).filter(|&j| j != c).collect();
            let mut d = cur.d.select(alg, &rows, &cols);
            for (i, &ri) in rows.iter().enumerate() {
                let left = alg.mul(cur.d.get(ri, c), &uinv);
                if left.iter().all(Zero::is_zero) {
                    continue;
                }
                for (j, &cj) in cols.iter().enumerate() {
                    let corr = alg.mul(&left, cur.d.get(r, cj));
                    let e: Vector = d.get(i, j).iter().zip(&corr).map(|(a, b)| a - b).collect();
                    d.set(i, j, e);
                }
            }
            cur = Complex { p1: d.cols.clone(), p0: d.rows.clone(), d };
        }
    }

    pub fn is_minimal(&self, alg: &BoundQuiverAlgebra) -> bool {
        self.d.top(alg).is_zero()
    }
}

/// Inverse of an element of `e_v Λ e_v` with nonzero top coefficient.
fn corner_inverse(alg: &BoundQuiverAlgebra, u: &[Scalar], v: usize) -> Vector {
    let t = alg.trivial_index(v);
    let lambda = u[t].clone();
    let inv = lambda.recip();
    // u = λ(e - n) with n radical; u^{-1} = λ^{-1} Σ n^k
    let mut n: Vector = u.iter().map(|x| -(x * &inv)).collect();
    n[t] += Scalar::one();
    let mut sum = vec![Scalar::zero(); alg.dim()];
    sum[t] = Scalar::one();
    let mut power = sum.clone();
    for _ in 0..=alg.nil_length() {
        power = alg.mul(&power, &n);
        if power.iter().all(Zero::is_zero) {
            break;
        }
        for (s, p) in sum.iter_mut().zip(&power) {
            *s += p;
        }
    }
    sum.iter().map(|x| x * &inv).collect()
}

/// Inverse of a square `PMat` whose top is the identity.
fn unipotent_inverse(alg: &BoundQuiverAlgebra, u: &PMat) -> PMat {
    let id = PMat::identity(alg, &u.rows);
    let x = id.sub(u);
    let mut sum = id.clone();
    let mut power = id;
    for _ in 0..=(alg.nil_length() * u.rows.len().max(1)) {
        power = power.mul(alg, &x);
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power);
    }
    sum
}

/// A chain map `(f1, f0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub f1: PMat,
    pub f0: PMat,
}

impl ChainMap {
    pub fn compose(&self, alg: &BoundQuiverAlgebra, after: &ChainMap) -> ChainMap {
        ChainMap { f1: after.f1.mul(alg, &self.f1), f0: after.f0.mul(alg, &self.f0) }
    }
}

/// Chain maps `X -> Y`, their homotopy quotient and a section of it.
struct HomData {
    s1: PSpace,
    s0: PSpace,
    /// Basis of strict chain maps.
    cycles: Vec<ChainMap>,
    /// Representatives of a basis of `Hom_K(X, Y)`.
    reps: Vec<ChainMap>,
    /// Solves for coordinates against `[boundaries | reps]`.
    solver: Factorized,
    boundary_rank: usize,
}

impl HomData {
    fn flatten(&self, f: &ChainMap) -> Vec<Scalar> {
        let mut v = self.s1.from_pmat(&f.f1);
        v.extend(self.s0.from_pmat(&f.f0));
        v
    }

    /// Coordinates of a chain map in the basis of `Hom_K`.
    fn coords(&self, f: &ChainMap) -> Vec<Scalar> {
        let x = self.solver.solve(&self.flatten(f)).expect("argument is a chain map");
        x[self.boundary_rank..].to_vec()
    }
}

fn chain_maps(alg: &BoundQuiverAlgebra, x: &Complex, y: &Complex) -> (PSpace, PSpace, Vec<ChainMap>) {
    let s1 = PSpace::new(alg, &y.p1, &x.p1);
    let s0 = PSpace::new(alg, &y.p0, &x.p0);
    let t = PSpace::new(alg, &y.p0, &x.p1);
    let n = s1.dim + s0.dim;
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let v = if k < s1.dim {
            let f1 = s1.unit(alg, k);
            t.from_pmat(&y.d.mul(alg, &f1))
        } else {
            let f0 = s0.unit(alg, k - s1.dim);
            let m = f0.mul(alg, &x.d);
            t.from_pmat(&m).into_iter().map(|z| -z).collect()
        };
        cols.push(v);
    }
    let kernel = if t.dim == 0 {
        (0..n).map(|k| {
            let mut e = vec![Scalar::zero(); n];
            e[k] = Scalar::one();
            e
        }).collect()
    } else {
        Matrix::from_columns(t.dim, &cols).kernel()
    };
    let cycles = kernel
        .iter()
        .map(|z| ChainMap { f1: s1.to_pmat(alg, &z[..s1.dim]), f0: s0.to_pmat(alg, &z[s1.dim..]) })
        .collect();
    (s1, s0, cycles)
}

fn hom_data(alg: &BoundQuiverAlgebra, x: &Complex, y: &Complex) -> HomData {
    let (s1, s0, cycles) = chain_maps(alg, x, y);
    let h = PSpace::new(alg, &y.p1, &x.p0);
    let n = s1.dim + s0.dim;
    let mut boundaries: Vec<Vec<Scalar>> = (0..h.dim)
        .map(|k| {
            let hk = h.unit(alg, k);
            let mut v = s1.from_pmat(&hk.mul(alg, &x.d));
            v.extend(s0.from_pmat(&y.d.mul(alg, &hk)));
            v
        })
        .collect();
    let keep = independent_subset(&boundaries, n);
    boundaries = keep.iter().map(|&i| boundaries[i].clone()).collect();
    let boundary_rank = boundaries.len();
    let flat = |f: &ChainMap| {
        let mut v = s1.from_pmat(&f.f1);
        v.extend(s0.from_pmat(&f.f0));
        v
    };
    let mut family = boundaries.clone();
    family.extend(cycles.iter().map(flat));
    let chosen = independent_subset(&family, n);
    let reps: Vec<ChainMap> =
        chosen.iter().filter(|&&i| i >= boundary_rank).map(|&i| cycles[i - boundary_rank].clone()).collect();
    let cols: Vec<Vec<Scalar>> = chosen.iter().map(|&i| family[i].clone()).collect();
    let solver = Factorized::new(&Matrix::from_columns(n, &cols));
    HomData { s1, s0, cycles, reps, solver, boundary_rank }
}

/// Representatives of a basis of `E(X, Y)` as maps `X1 -> Y0`.
struct ExtData {
    space: PSpace,
    reps: Vec<Vec<Scalar>>,
}

fn ext_data(alg: &BoundQuiverAlgebra, x: &Complex, y: &Complex) -> ExtData {
    let t = PSpace::new(alg, &y.p0, &x.p1);
    let h1 = PSpace::new(alg, &y.p1, &x.p1);
    let h0 = PSpace::new(alg, &y.p0, &x.p0);
    let mut image: Vec<Vec<Scalar>> = (0..h1.dim).map(|k| t.from_pmat(&y.d.mul(alg, &h1.unit(alg, k)))).collect();
    image.extend((0..h0.dim).map(|k| t.from_pmat(&h0.unit(alg, k).mul(alg, &x.d))));
    let mut family = image.clone();
    family.extend((0..t.dim).map(|k| {
        let mut e = vec![Scalar::zero(); t.dim];
        e[k] = Scalar::one();
        e
    }));
    let chosen = independent_subset(&family, t.dim);
    let reps = chosen.into_iter().filter(|&i| i >= image.len()).map(|i| family[i].clone()).collect();
    ExtData { space: t, reps }
}

/// Scalar `λ` with `h ≡ λ·1` modulo the radical of `End(X)`, for `X`
/// indecomposable with local endomorphism ring split over the rationals.
fn residue(alg: &BoundQuiverAlgebra, h: &ChainMap) -> Scalar {
    let slots = h.f1.rows.len() + h.f0.rows.len();
    let (t1, t0) = (h.f1.top(alg), h.f0.top(alg));
    let mut tr = Scalar::zero();
    for i in 0..t1.rows() {
        tr += &t1[(i, i)];
    }
    for i in 0..t0.rows() {
        tr += &t0[(i, i)];
    }
    tr / Scalar::from_integer((slots as i64).into())
}

/// Number of summands of `m` isomorphic to the indecomposable `x`: the rank
/// of the pairing `Hom(x, m) × Hom(m, x) -> End(x)/rad`.
fn multiplicity(alg: &BoundQuiverAlgebra, x: &Complex, m: &Complex) -> usize {
    let (_, _, fs) = chain_maps(alg, x, m);
    if fs.is_empty() {
        return 0;
    }
    let (_, _, gs) = chain_maps(alg, m, x);
    if gs.is_empty() {
        return 0;
    }
    let mut p = Matrix::zero(fs.len(), gs.len());
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            p[(i, j)] = residue(alg, &f.compose(alg, g));
        }
    }
    p.rank()
}

/// Splits a minimal complex into indecomposable summands via primitive
/// idempotents of its chain endomorphism algebra.
pub fn split_complex(alg: &BoundQuiverAlgebra, m: &Complex) -> Result<Vec<Complex>> {
    if m.is_zero() {
        return Ok(vec![]);
    }
    let (s1, s0, z) = chain_maps(alg, m, m);
    let flat = |f: &ChainMap| {
        let mut v = s1.from_pmat(&f.f1);
        v.extend(s0.from_pmat(&f.f0));
        v
    };
    let n = s1.dim + s0.dim;
    let zcols: Vec<Vec<Scalar>> = z.iter().map(flat).collect();
    let solver = Factorized::new(&Matrix::from_columns(n, &zcols));
    let coords = |f: &ChainMap| solver.solve(&flat(f)).expect("endomorphisms are closed under composition");
    let d = z.len();
    let mut table = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            table[i][j] = coords(&z[j].compose(alg, &z[i]));
        }
    }
    let id = ChainMap { f1: PMat::identity(alg, &m.p1), f0: PMat::identity(alg, &m.p0) };
    let end = FinDimAlgebra::new_unchecked(table, coords(&id));
    let idems = end.decompose_idempotents()?;
    if idems.len() == 1 {
        return Ok(vec![m.clone()]);
    }
    let to_map = |e: &[Scalar]| {
        let mut v = vec![Scalar::zero(); n];
        for (c, zi) in e.iter().zip(&zcols) {
            if !c.is_zero() {
                for (a, b) in v.iter_mut().zip(zi) {
                    *a += c * b;
                }
            }
        }
        ChainMap { f1: s1.to_pmat(alg, &v[..s1.dim]), f0: s0.to_pmat(alg, &v[s1.dim..]) }
    };
    let mut out = Vec::new();
    for e in &idems {
        let e = to_map(e);
        let (i1, _) = image_of(alg, &e.f1);
        let (i0, p0) = image_of(alg, &e.f0);
        let u0 = p0.mul(alg, &i0);
        let dn = unipotent_inverse(alg, &u0).mul(alg, &p0).mul(alg, &m.d).mul(alg, &i1);
        let piece = Complex { p1: i1.cols.clone(), p0: i0.cols.clone(), d: dn }.minimalize(alg);
        out.push(piece);
    }
    Ok(out)
}

/// For an idempotent `e` on a sum of projectives, returns `(ι, π)` with
/// `ι: N -> M`, `π: M -> N` where `N` is the image of `e`, and `πι` has
/// identity top.
fn image_of(alg: &BoundQuiverAlgebra, e: &PMat) -> (PMat, PMat) {
    let slots = &e.rows;
    let top = e.top(alg);
    let nv = alg.vertex_count();
    let mut n_slots = Vec::new();
    let mut a_entries: Vec<(usize, usize, Scalar)> = Vec::new(); // (m-slot, n-slot, coeff)
    let mut b_entries: Vec<(usize, usize, Scalar)> = Vec::new(); // (n-slot, m-slot, coeff)
    for v in 0..nv {
        let idx: Vec<usize> = (0..slots.len()).filter(|&i| slots[i] == v).collect();
        if idx.is_empty() {
            continue;
        }
        let ev = Matrix::from_rows(idx.iter().map(|&r| idx.iter().map(|&c| top[(r, c)].clone()).collect()).collect());
        let ech = ev.rref();
        for (k, &p) in ech.pivots.iter().enumerate() {
            let ns = n_slots.len();
            n_slots.push(v);
            for (a, &r) in idx.iter().enumerate() {
                a_entries.push((r, ns, ev[(a, p)].clone()));
                b_entries.push((ns, r, ech.matrix[(k, a)].clone()));
            }
        }
    }
    let mut at = PMat::zero(alg, slots.clone(), n_slots.clone());
    for (r, c, x) in a_entries {
        if !x.is_zero() {
            let mut v = vec![Scalar::zero(); alg.dim()];
            v[alg.trivial_index(slots[r])] = x;
            at.set(r, c, v);
        }
    }
    let mut bt = PMat::zero(alg, n_slots.clone(), slots.clone());
    for (r, c, x) in b_entries {
        if !x.is_zero() {
            let mut v = vec![Scalar::zero(); alg.dim()];
            v[alg.trivial_index(n_slots[r])] = x;
            bt.set(r, c, v);
        }
    }
    (e.mul(alg, &at), bt.mul(alg, e))
}

#[derive(Clone, Debug)]
pub struct TwoTermOptions {
    /// Largest multisets whose extensions are taken while closing the registry.
    pub closure_size: usize,
    pub max_objects: usize,
    /// Largest multisets in the conflation catalogue.
    pub catalogue_size: usize,
}

impl Default for TwoTermOptions {
    fn default() -> Self {
        TwoTermOptions { closure_size: 1, max_objects: 64, catalogue_size: 2 }
    }
}

pub struct TwoTermModel {
    alg: Arc<BoundQuiverAlgebra>,
    name: String,
    complexes: Vec<Complex>,
    labels: Vec<String>,
    objects: Vec<ObjId>,
    hom: Vec<Vec<HomData>>,
    ext: Vec<Vec<ExtData>>,
    middles: Mutex<HashMap<ExtClass, Vec<ObjId>>>,
    compositions: Mutex<HashMap<(ObjId, ObjId, ObjId), Arc<Vec<Vec<Scalar>>>>>,
    catalogue: OnceLock<Arc<Catalogue>>,
    catalogue_size: usize,
}

impl TwoTermModel {
    pub fn new(alg: BoundQuiverAlgebra) -> Result<Self> {
        Self::with_options(alg, TwoTermOptions::default())
    }

    pub fn with_options(alg: BoundQuiverAlgebra, opts: TwoTermOptions) -> Result<Self> {
        let alg = Arc::new(alg);
        let registry = close_registry(&alg, &opts)?;
        let mut keyed: Vec<((usize, usize, Vec<usize>, Vec<usize>, usize), Complex)> = registry
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let (mut s1, mut s0) = (c.p1.clone(), c.p0.clone());
                s1.sort_unstable();
                s0.sort_unstable();
                let class = if c.p1.is_empty() {
                    0
                } else if c.p0.is_empty() {
                    2
                } else {
                    1
                };
                ((class, c.p1.len() + c.p0.len(), s0, s1, i), c)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let complexes: Vec<Complex> = keyed.into_iter().map(|(_, c)| c).collect();
        let mut labels: Vec<String> = complexes.iter().map(|c| complex_label(&alg, c)).collect();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for l in labels.iter_mut() {
            let k = seen.entry(l.clone()).or_insert(0);
            *k += 1;
            if *k > 1 {
                *l = format!("{l}#{k}");
            }
        }
        let hom = crate::par::map(&complexes, |x| complexes.iter().map(|y| hom_data(&alg, x, y)).collect());
        let ext = crate::par::map(&complexes, |x| complexes.iter().map(|y| ext_data(&alg, x, y)).collect());
        let name = format!("per[0,1]({})", algebra_name(&alg));
        Ok(TwoTermModel {
            objects: (0..complexes.len()).collect(),
            alg,
            name,
            complexes,
            labels,
            hom,
            ext,
            middles: Mutex::new(HashMap::new()),
            compositions: Mutex::new(HashMap::new()),
            catalogue: OnceLock::new(),
            catalogue_size: opts.catalogue_size,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &BoundQuiverAlgebra {
        &self.alg
    }

    pub fn complex(&self, x: ObjId) -> &Complex {
        &self.complexes[x]
    }

    pub fn id(&self, label: &str) -> Option<ObjId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Basis of `Hom_K(X, Y)` as chain-map representatives.
    pub fn hom_basis(&self, x: ObjId, y: ObjId) -> Vec<ChainMap> {
        self.hom[x][y].reps.clone()
    }

    /// Strict chain maps `X -> Y` (before dividing out homotopies).
    pub fn chain_map_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.hom[x][y].cycles.len()
    }

    /// Decomposes an arbitrary complex into registered indecomposables.
    pub fn decompose(&self, c: &Complex) -> Result<Vec<ObjId>> {
        let m = c.minimalize(&self.alg);
        let nv = self.alg.vertex_count();
        let (mut r1, mut r0) = m.multiplicities(nv);
        let mut out = Vec::new();
        for (id, x) in self.complexes.iter().enumerate() {
            let (x1, x0) = x.multiplicities(nv);
            if (0..nv).any(|v| x1[v] > r1[v] || x0[v] > r0[v]) {
                continue;
            }
            let k = multiplicity(&self.alg, x, &m);
            for _ in 0..k {
                out.push(id);
                for v in 0..nv {
                    r1[v] -= x1[v];
                    r0[v] -= x0[v];
                }
            }
        }
        if r1.iter().chain(&r0).any(|&k| k != 0) {
            return Err(Error::RealizationUnavailable(format!(
                "complex {:?} has a summand outside the registry of {}",
                m, self.name
            )));
        }
        Ok(out)
    }

    fn assemble(&self, xi: &ExtClass) -> Result<Complex> {
        let alg = &*self.alg;
        if xi.coords.len() != ext_dim_multi(self, &xi.source, &xi.target) {
            return Err(Error::InvariantViolation(format!("extension class has {} coordinates", xi.coords.len())));
        }
        let cs: Vec<&Complex> = xi.source.iter().map(|&c| &self.complexes[c]).collect();
        let as_: Vec<&Complex> = xi.target.iter().map(|&a| &self.complexes[a]).collect();
        let c = Complex::direct_sum(alg, &cs);
        let a = Complex::direct_sum(alg, &as_);
        let mut f = PMat::zero(alg, a.p0.clone(), c.p1.clone());
        let mut off = 0;
        let mut col = 0;
        for &ck in &xi.source {
            let mut row = 0;
            for &al in &xi.target {
                let ed = &self.ext[ck][al];
                let mut v = vec![Scalar::zero(); ed.space.dim];
                for (t, rep) in ed.reps.iter().enumerate() {
                    let s = &xi.coords[off + t];
                    if !s.is_zero() {
                        for (x, r) in v.iter_mut().zip(rep) {
                            *x += s * r;
                        }
                    }
                }
                off += ed.reps.len();
                f.set_block(row, col, &ed.space.to_pmat(alg, &v));
                row += self.complexes[al].p0.len();
            }
            col += self.complexes[ck].p1.len();
        }
        Ok(cone(alg, &a, &c, &f))
    }

    fn composites(&self, x: ObjId, y: ObjId, r: ObjId) -> Arc<Vec<Vec<Scalar>>> {
        if let Some(v) = self.compositions.lock().unwrap().get(&(x, y, r)) {
            return v.clone();
        }
        let hxy = &self.hom[x][y];
        let mut out = Vec::new();
        for f in &self.hom[x][r].reps {
            for g in &self.hom[r][y].reps {
                out.push(hxy.coords(&f.compose(&self.alg, g)));
            }
        }
        let out = Arc::new(out);
        self.compositions.lock().unwrap().insert((x, y, r), out.clone());
        out
    }
}

/// The middle term `a -> M -> c` of the class represented by `f: c1 -> a0`.
fn cone(alg: &BoundQuiverAlgebra, a: &Complex, c: &Complex, f: &PMat) -> Complex {
    let p1: Vec<usize> = a.p1.iter().chain(&c.p1).copied().collect();
    let p0: Vec<usize> = a.p0.iter().chain(&c.p0).copied().collect();
    let mut d = PMat::zero(alg, p0.clone(), p1.clone());
    d.set_block(0, 0, &a.d);
    d.set_block(0, a.p1.len(), f);
    d.set_block(a.p0.len(), a.p1.len(), &c.d);
    Complex { p1, p0, d }
}

fn algebra_name(alg: &BoundQuiverAlgebra) -> String {
    let arrows: Vec<String> = alg
        .arrows()
        .iter()
        .map(|a| format!("{}:{}->{}", a.name, alg.vertices()[a.source], alg.vertices()[a.target]))
        .collect();
    if arrows.is_empty() {
        format!("k^{}", alg.vertex_count())
    } else {
        format!("{}/{}", arrows.join(","), alg.relations().len())
    }
}

fn complex_label(alg: &BoundQuiverAlgebra, c: &Complex) -> String {
    let names = |s: &[usize]| s.iter().map(|&v| format!("P{}", alg.vertices()[v])).collect::<Vec<_>>().join(",");
    match (c.p1.is_empty(), c.p0.is_empty()) {
        (true, _) => names(&c.p0),
        (false, true) => format!("Σ{}", names(&c.p1)),
        _ => format!("({}->{})", names(&c.p1), names(&c.p0)),
    }
}

fn close_registry(alg: &BoundQuiverAlgebra, opts: &TwoTermOptions) -> Result<Vec<Complex>> {
    let n = alg.vertex_count();
    let mut reg: Vec<Complex> = (0..n).map(|v| Complex::stalk(alg, v)).collect();
    reg.extend((0..n).map(|v| Complex::shifted_stalk(alg, v)));
    let mut ext_cache: HashMap<(usize, usize), Arc<ExtData>> = HashMap::new();
    let mut done: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    loop {
        let ids: Vec<usize> = (0..reg.len()).collect();
        let ms = multisets(&ids, opts.closure_size);
        let mut pending = Vec::new();
        for c in &ms {
            for a in &ms {
                if done.insert((c.clone(), a.clone())) {
                    pending.push((c.clone(), a.clone()));
                }
            }
        }
        if pending.is_empty() {
            return Ok(reg);
        }
        let mut needed: Vec<(usize, usize)> =
            pending.iter().flat_map(|(c, a)| c.iter().flat_map(|&x| a.iter().map(move |&y| (x, y)))).collect();
        needed.sort_unstable();
        needed.dedup();
        needed.retain(|k| !ext_cache.contains_key(k));
        let computed = crate::par::map(&needed, |&(x, y)| Arc::new(ext_data(alg, &reg[x], &reg[y])));
        ext_cache.extend(needed.into_iter().zip(computed));
        // middles of all candidate classes, in parallel
        let cones: Vec<Complex> = pending
            .iter()
            .flat_map(|(c, a)| {
                let d: usize = c.iter().map(|&x| a.iter().map(|&y| ext_cache[&(x, y)].reps.len()).sum::<usize>()).sum();
                super::default_candidates(d).into_iter().map(move |coords| (c.clone(), a.clone(), coords))
            })
            .map(|(c, a, coords)| {
                let cs: Vec<&Complex> = c.iter().map(|&x| &reg[x]).collect();
                let as_: Vec<&Complex> = a.iter().map(|&x| &reg[x]).collect();
                let cc = Complex::direct_sum(alg, &cs);
                let aa = Complex::direct_sum(alg, &as_);
                let mut f = PMat::zero(alg, aa.p0.clone(), cc.p1.clone());
                let (mut off, mut col) = (0, 0);
                for &ck in &c {
                    let mut row = 0;
                    for &al in &a {
                        let ed = &ext_cache[&(ck, al)];
                        let mut v = vec![Scalar::zero(); ed.space.dim];
                        for (t, rep) in ed.reps.iter().enumerate() {
                            let s = &coords[off + t];
                            for (x, r) in v.iter_mut().zip(rep) {
                                *x += s * r;
                            }
                        }
                        off += ed.reps.len();
                        f.set_block(row, col, &ed.space.to_pmat(alg, &v));
                        row += reg[al].p0.len();
                    }
                    col += reg[ck].p1.len();
                }
                cone(alg, &aa, &cc, &f)
            })
            .collect();
        let minimal = crate::par::map(&cones, |m| m.minimalize(alg));
        let pieces = crate::par::try_map(&minimal, |m| split_unknown(alg, &reg, m))?;
        let mut added = false;
        for piece in pieces.into_iter().flatten() {
            if !reg.iter().any(|x| is_isomorphic(alg, x, &piece)) {
                if reg.len() >= opts.max_objects {
                    return Err(Error::BudgetExceeded(format!("more than {} indecomposables", opts.max_objects)));
                }
                reg.push(piece);
                added = true;
            }
        }
        if !added && done.len() >= ms.len() * ms.len() {
            return Ok(reg);
        }
    }
}

/// Summands of a minimal complex not accounted for by the registry.
fn split_unknown(alg: &BoundQuiverAlgebra, reg: &[Complex], m: &Complex) -> Result<Vec<Complex>> {
    let nv = alg.vertex_count();
    let (mut r1, mut r0) = m.multiplicities(nv);
    for x in reg {
        let (x1, x0) = x.multiplicities(nv);
        if (0..nv).any(|v| x1[v] > r1[v] || x0[v] > r0[v]) {
            continue;
        }
        let k = multiplicity(alg, x, m);
        for v in 0..nv {
            r1[v] -= k * x1[v];
            r0[v] -= k * x0[v];
        }
    }
    if r1.iter().chain(&r0).all(|&k| k == 0) {
        return Ok(vec![]);
    }
    let parts = split_complex(alg, m)?;
    Ok(parts.into_iter().filter(|p| !reg.iter().any(|x| is_isomorphic(alg, x, p))).collect())
}

fn is_isomorphic(alg: &BoundQuiverAlgebra, x: &Complex, y: &Complex) -> bool {
    let nv = alg.vertex_count();
    x.multiplicities(nv) == y.multiplicities(nv) && multiplicity(alg, x, y) == 1
}

impl Model for TwoTermModel {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    fn label(&self, x: ObjId) -> String {
        self.labels[x].clone()
    }

    fn hom_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.hom[x][y].reps.len()
    }

    fn ext_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.ext[x][y].reps.len()
    }

    fn ideal_rank(&self, x: ObjId, y: ObjId, through: &[ObjId]) -> Result<usize> {
        let mut vecs = Vec::new();
        for &r in through {
            vecs.extend(self.composites(x, y, r).iter().cloned());
        }
        Ok(rank_of(&vecs, self.hom_dim(x, y)))
    }

    fn middle(&self, xi: &ExtClass) -> Result<Vec<ObjId>> {
        if let Some(m) = self.middles.lock().unwrap().get(xi) {
            return Ok(m.clone());
        }
        let c = self.assemble(xi)?;
        let mut m = self.decompose(&c)?;
        m.sort_unstable();
        self.middles.lock().unwrap().insert(xi.clone(), m.clone());
        Ok(m)
    }

    fn catalogue(&self) -> Arc<Catalogue> {
        self.catalogue
            .get_or_init(|| Arc::new(build_catalogue(self, self.catalogue_size).expect("catalogue middles")))
            .clone()
    }

    fn is_projective(&self, x: ObjId) -> bool {
        self.complexes[x].p1.is_empty()
    }

    fn is_injective(&self, x: ObjId) -> bool {
        self.complexes[x].p0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    fn a2() -> TwoTermModel {
        TwoTermModel::new(BoundQuiverAlgebra::linear_a(2)).unwrap()
    }

    #[test]
    fn registry_of_a2() {
        let m = a2();
        let labels: Vec<String> = m.objects().iter().map(|&x| m.label(x)).collect();
        assert_eq!(labels, ["P1", "P2", "(P2->P1)", "ΣP1", "ΣP2"]);
    }

    #[test]
    fn registry_of_dual_numbers() {
        let m = TwoTermModel::new(BoundQuiverAlgebra::truncated_loop(2)).unwrap();
        let labels: Vec<String> = m.objects().iter().map(|&x| m.label(x)).collect();
        assert_eq!(labels, ["P1", "(P1->P1)", "ΣP1"]);
        let x = m.id("(P1->P1)").unwrap();
        assert_eq!(m.ext_dim(x, x), 1);
    }

    #[test]
    fn field_shift_extension_is_contractible() {
        let m = TwoTermModel::new(BoundQuiverAlgebra::linear_a(1)).unwrap();
        let (p, sp) = (m.id("P1").unwrap(), m.id("ΣP1").unwrap());
        assert_eq!(m.ext_dim(sp, p), 1);
        assert_eq!(m.hom_dim(p, p), 1);
        let xi = ExtClass { source: vec![sp], target: vec![p], coords: vec![int(1)] };
        assert!(m.middle(&xi).unwrap().is_empty());
    }

    #[test]
    fn split_recovers_direct_sums() {
        let m = a2();
        let alg = m.algebra();
        let c = m.id("(P2->P1)").unwrap();
        let p1 = m.id("P1").unwrap();
        let sum = Complex::direct_sum(alg, &[m.complex(c), m.complex(p1), m.complex(c)]);
        assert_eq!(m.decompose(&sum).unwrap(), vec![p1, c, c]);
        let parts = split_complex(alg, &sum.minimalize(alg)).unwrap();
        assert_eq!(parts.len(), 3);
    }
}
