//! Dense matrices over the rationals with exact row reduction.

use std::fmt;

use num_traits::{One, Zero};

use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Solution set of `A x = B`: one particular solution per column of `B`
/// and a basis of the null space of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub particular: Matrix,
    pub kernel: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| super::scalar::int(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Places `blocks` along the diagonal.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zero(r, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            m.set_block(ro, co, b);
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        let v = &m[(row, c)] * &f;
                        m[(r, c)] -= v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, with the free
    /// variable set to 1 and the others to 0.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let e = self.rref();
        kernel_from_echelon(&e, self.cols)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(n));
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = e.matrix[(r, n + c)].clone();
            }
        }
        Some(inv)
    }
}

fn kernel_from_echelon(e: &Echelon, cols: usize) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, &p) in e.pivots.iter().enumerate() {
            v[p] = -e.matrix[(r, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `A X = B`. Returns `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<SolutionSpace> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let n = a.cols();
    let mut aug = Matrix::zero(a.rows(), n + b.cols());
    aug.set_block(0, 0, a);
    aug.set_block(0, n, b);
    let e = aug.rref();
    if e.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut particular = Matrix::zero(n, b.cols());
    for (r, &p) in e.pivots.iter().enumerate() {
        for c in 0..b.cols() {
            particular[(p, c)] = e.matrix[(r, n + c)].clone();
        }
    }
    let coeff = Echelon {
        matrix: {
            let mut m = Matrix::zero(a.rows(), n);
            for r in 0..a.rows() {
                for c in 0..n {
                    m[(r, c)] = e.matrix[(r, c)].clone();
                }
            }
            m
        },
        pivots: e.pivots.clone(),
    };
    Some(SolutionSpace { particular, kernel: kernel_from_echelon(&coeff, n) })
}

/// A pre-factored coefficient matrix `G` for repeated solves of `G x = v`.
///
/// Stores the row operations `T` with `T G = rref(G)` so each right-hand side
/// costs one matrix-vector product.
#[derive(Clone, Debug)]
pub struct Factorized {
    ops: Matrix,
    echelon: Echelon,
    cols: usize,
}

impl Factorized {
    pub fn new(g: &Matrix) -> Self {
        let n = g.rows();
        let mut aug = Matrix::zero(n, g.cols() + n);
        aug.set_block(0, 0, g);
        aug.set_block(0, g.cols(), &Matrix::identity(n));
        let full = aug.rref();
        let pivots: Vec<usize> = full.pivots.iter().copied().filter(|&p| p < g.cols()).collect();
        let mut ops = Matrix::zero(n, n);
        let mut red = Matrix::zero(n, g.cols());
        for r in 0..n {
            for c in 0..n {
                ops[(r, c)] = full.matrix[(r, g.cols() + c)].clone();
            }
            for c in 0..g.cols() {
                red[(r, c)] = full.matrix[(r, c)].clone();
            }
        }
        Factorized { ops, echelon: Echelon { matrix: red, pivots }, cols: g.cols() }
    }

    pub fn rank(&self) -> usize {
        self.echelon.pivots.len()
    }

    /// One solution of `G x = v` (free variables zero), or `None`.
    pub fn solve(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let w = self.ops.mul_vec(v);
        let rank = self.rank();
        if w[rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in self.echelon.pivots.iter().enumerate() {
            x[p] = w[r].clone();
        }
        Some(x)
    }
}

/// Rank of a set of vectors of common length.
pub fn rank_of(vectors: &[Vec<Scalar>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.iter().map(|v| {
        assert_eq!(v.len(), len);
        v.clone()
    }).collect())
    .rank()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in order.
pub fn independent_subset(vectors: &[Vec<Scalar>], len: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut basis: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (p, b) in &basis {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for k in 0..len {
                    if !b[k].is_zero() {
                        let t = &b[k] * &f;
                        w[k] -= t;
                    }
                }
            }
        }
        if let Some(p) = w.iter().position(|x| !x.is_zero()) {
            let inv = w[p].recip();
            for x in w.iter_mut() {
                *x = &*x * &inv;
            }
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    for k in 0..len {
                        let t = &w[k] * &f;
                        b[k] -= t;
                    }
                }
            }
            basis.push((p, w));
            chosen.push(i);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    fn col(v: &[i64]) -> Matrix {
        Matrix::from_columns(v.len(), &[v.iter().map(|&x| int(x)).collect()])
    }

    #[test]
    fn identity_system() {
        let s = solve(&Matrix::identity(2), &col(&[3, 5])).unwrap();
        assert_eq!(s.particular, col(&[3, 5]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn zero_system() {
        let s = solve(&Matrix::zero(2, 2), &col(&[0, 0])).unwrap();
        assert!(s.particular.is_zero());
        assert_eq!(s.kernel.len(), 2);
        assert!(solve(&Matrix::zero(2, 2), &col(&[1, 0])).is_none());
    }

    #[test]
    fn rank_one_system() {
        let a = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let s = solve(&a, &col(&[1, 2])).unwrap();
        assert_eq!(s.particular, col(&[1, 0]));
        assert_eq!(s.kernel, vec![vec![int(-2), int(1)]]);
        // substitution oracle
        assert_eq!(a.mul(&s.particular), col(&[1, 2]));
        assert!(a.mul_vec(&s.kernel[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_and_factorized() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let f = Factorized::new(&Matrix::from_i64(&[&[1, 2], &[2, 4], &[0, 0]]));
        assert_eq!(f.rank(), 1);
        assert_eq!(f.solve(&[int(3), int(6), int(0)]), Some(vec![int(3), int(0)]));
        assert_eq!(f.solve(&[int(3), int(5), int(0)]), None);
    }

    #[test]
    fn greedy_independent_subset() {
        let v = vec![
            vec![int(1), int(0)],
            vec![int(2), int(0)],
            vec![int(1), int(1)],
        ];
        assert_eq!(independent_subset(&v, 2), vec![0, 2]);
    }
}
