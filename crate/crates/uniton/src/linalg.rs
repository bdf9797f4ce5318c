//! Dense matrices, frames, projections and the subspace lattice.
//!
//! Exact elements use Gauss–Jordan elimination with the first nonzero entry
//! as pivot, so ranks are exact. Float elements go
//! through a complex SVD with the rank threshold `1e-8·σ_max`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::Field;

/// Singular values below `FLOAT_RANK_RTOL · σ_max` count as zero.
pub const FLOAT_RANK_RTOL: f64 = 1e-8;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are `cols`, each of length `nrows`.
    pub fn from_columns(cols: &[Vec<T>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = v.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> Matrix<Complex64> {
        self.map(|x| x.to_c64())
    }

    pub fn mul(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        if let Some(data) = T::matmul(&self.data, &o.data, self.rows, self.cols, o.cols) {
            return Matrix { rows: self.rows, cols: o.cols, data };
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        if let Some(out) = T::matmul(&self.data, v, self.rows, self.cols, 1) {
            return out;
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, vk) in v.iter().enumerate() {
                    let a = &self.data[i * self.cols + k];
                    if !a.is_zero() && !vk.is_zero() {
                        acc = acc + a.clone() * vk.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|a| -a.clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix<T> {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn hstack(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.rows, o.rows);
        let mut cols = self.columns();
        cols.extend(o.columns());
        Self::from_columns(&cols, self.rows)
    }

    pub fn vstack(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self − o`.
    pub fn dist(&self, o: &Matrix<T>) -> f64 {
        self.to_c64().sub(&o.to_c64()).max_abs()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn rank(&self) -> usize {
        if T::EXACT {
            exact_rref(self).1.len()
        } else {
            float_singular_values(&self.to_c64()).1
        }
    }

    /// Indices of a maximal set of linearly independent columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        if T::EXACT {
            exact_rref(self).1
        } else {
            float_independent_columns(self)
        }
    }

    /// Basis of the null space `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        if T::EXACT {
            exact_kernel(self)
        } else {
            float_kernel(&self.to_c64())
                .into_iter()
                .map(|v| v.into_iter().map(T::from_c64).collect())
                .collect()
        }
    }

    /// Inverse by Gauss–Jordan; `None` if singular (exactly, or to working
    /// precision in the float backend).
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.hstack(&Self::identity(n));
        for c in 0..n {
            let p = if T::EXACT {
                (c..n).find(|&r| !a.get(r, c).is_zero())?
            } else {
                let p = (c..n).max_by(|&x, &y| a.get(x, c).abs_f64().total_cmp(&a.get(y, c).abs_f64()))?;
                if a.get(p, c).abs_f64() == 0.0 {
                    return None;
                }
                p
            };
            a.swap_rows(c, p);
            let inv = T::one() / a.get(c, c).clone();
            for j in 0..2 * n {
                let v = a.get(c, j).clone() * inv.clone();
                a.set(c, j, v);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..2 * n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(c, j).clone();
                    a.set(r, j, v);
                }
            }
        }
        Some(Matrix::from_columns(&a.columns()[n..], n))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced row echelon form and pivot columns, exact pivoting.
fn exact_rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    if let Some((data, pivots)) = T::rref(&m.data, m.rows, m.cols) {
        return (Matrix { rows: m.rows, cols: m.cols, data }, pivots);
    }
    plain_rref(m)
}

fn plain_rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, c).is_zero()) else { continue };
        a.swap_rows(row, p);
        let inv = T::one() / a.get(row, c).clone();
        for j in c..a.cols {
            let v = a.get(row, j).clone() * inv.clone();
            a.set(row, j, v);
        }
        for r in 0..a.rows {
            if r == row || a.get(r, c).is_zero() {
                continue;
            }
            let f = a.get(r, c).clone();
            for j in c..a.cols {
                let v = a.get(r, j).clone() - f.clone() * a.get(row, j).clone();
                a.set(r, j, v);
            }
        }
        pivots.push(c);
        row += 1;
    }
    (a, pivots)
}

fn exact_kernel<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = exact_rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

fn to_na(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| *m.get(i, j))
}

/// Singular values (descending) and numerical rank.
pub fn float_singular_values(m: &Matrix<Complex64>) -> (Vec<f64>, usize) {
    if m.rows == 0 || m.cols == 0 {
        return (Vec::new(), 0);
    }
    let mut sv: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let smax = sv[0];
    let rank = if smax == 0.0 { 0 } else { sv.iter().filter(|&&s| s > FLOAT_RANK_RTOL * smax).count() };
    (sv, rank)
}

fn float_kernel(m: &Matrix<Complex64>) -> Vec<Vec<Complex64>> {
    let n = m.cols;
    if n == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the SVD returns a full set of right vectors.
    let rows = m.rows.max(n);
    let mut a = DMatrix::<Complex64>::zeros(rows, n);
    for i in 0..m.rows {
        for j in 0..n {
            a[(i, j)] = *m.get(i, j);
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    (0..n)
        .filter(|&i| smax == 0.0 || svd.singular_values[i] <= FLOAT_RANK_RTOL * smax)
        .map(|i| (0..n).map(|j| vt[(i, j)].conj()).collect())
        .collect()
}

/// Greedy column selection: keep a column if it raises the numerical rank.
fn float_independent_columns<T: Field>(m: &Matrix<T>) -> Vec<usize> {
    let cols = m.to_c64().columns();
    let total = float_singular_values(&m.to_c64()).1;
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..cols.len() {
        if keep.len() == total {
            break;
        }
        let mut trial: Vec<Vec<Complex64>> = keep.iter().map(|&k| cols[k].clone()).collect();
        trial.push(cols[j].clone());
        if float_singular_values(&Matrix::from_columns(&trial, m.rows)).1 > keep.len() {
            keep.push(j);
        }
    }
    keep
}

/// A finite family of vectors in an ambient space of dimension `dim`,
/// possibly dependent or empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<T> {
    pub dim: usize,
    pub columns: Vec<Vec<T>>,
}

impl<T: Field> Frame<T> {
    pub fn new(dim: usize, columns: Vec<Vec<T>>) -> Self {
        assert!(columns.iter().all(|c| c.len() == dim), "frame column of wrong length");
        Frame { dim, columns }
    }

    pub fn empty(dim: usize) -> Self {
        Frame { dim, columns: Vec::new() }
    }

    /// The standard basis vectors `e_idx` for `idx` in `indices`.
    pub fn standard(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let cols = indices
            .into_iter()
            .map(|i| {
                let mut v = vec![T::zero(); dim];
                v[i] = T::one();
                v
            })
            .collect();
        Frame::new(dim, cols)
    }

    pub fn matrix(&self) -> Matrix<T> {
        Matrix::from_columns(&self.columns, self.dim)
    }

    pub fn rank(&self) -> usize {
        if self.columns.is_empty() {
            return 0;
        }
        self.matrix().rank()
    }

    /// Independent sub-frame spanning the same space.
    pub fn basis(&self) -> Frame<T> {
        if self.columns.is_empty() {
            return self.clone();
        }
        let idx = self.matrix().independent_columns();
        Frame::new(self.dim, idx.into_iter().map(|i| self.columns[i].clone()).collect())
    }

    /// Orthogonal projection onto the span. Exact fields use `B(B*B)⁻¹B*` on
    /// an independent sub-frame `B`; `Complex64` uses the SVD; other inexact
    /// fields orthogonalise `B` by Gram–Schmidt applied twice and sum
    /// `qq*/(q*q)`, which avoids squaring the condition number of `B`.
    pub fn projector(&self) -> Matrix<T> {
        if !T::NALGEBRA {
            let b = self.basis();
            if b.columns.is_empty() {
                return Matrix::zeros(self.dim, self.dim);
            }
            if T::EXACT {
                let bm = b.matrix();
                let bh = bm.adjoint();
                let g = bh.mul(&bm).inverse().expect("Gram matrix of independent columns is invertible");
                return bm.mul(&g).mul(&bh);
            }
            let qs = orthogonalise(&b.columns);
            let mut p: Matrix<T> = Matrix::zeros(self.dim, self.dim);
            for q in &qs {
                let nn = dot(q, q);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let v = p.get(i, j).clone() + q[i].clone() * q[j].conj() / nn.clone();
                        p.set(i, j, v);
                    }
                }
            }
            p
        } else {
            let m = self.matrix().to_c64();
            if self.columns.is_empty() || m.max_abs() == 0.0 {
                return Matrix::zeros(self.dim, self.dim);
            }
            let svd = to_na(&m).svd(true, false);
            let u = svd.u.expect("left singular vectors requested");
            let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
            let mut p = Matrix::<Complex64>::zeros(self.dim, self.dim);
            for (k, s) in svd.singular_values.iter().enumerate() {
                if *s <= FLOAT_RANK_RTOL * smax {
                    continue;
                }
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let v = *p.get(i, j) + u[(i, k)] * u[(j, k)].conj();
                        p.set(i, j, v);
                    }
                }
            }
            p.map(|x| T::from_c64(*x))
        }
    }

    /// `A ∩ B` from the kernel of `[A | −B]`.
    pub fn intersect(&self, o: &Frame<T>) -> Frame<T> {
        assert_eq!(self.dim, o.dim);
        let a = self.basis();
        let b = o.basis();
        if a.columns.is_empty() || b.columns.is_empty() {
            return Frame::empty(self.dim);
        }
        let stacked = a.matrix().hstack(&b.matrix().neg());
        let am = a.matrix();
        let na = a.columns.len();
        let cols = stacked.kernel().into_iter().map(|x| am.mul_vec(&x[..na])).collect();
        Frame::new(self.dim, cols).basis()
    }

    /// `A + B` by concatenation and rank reduction.
    pub fn sum(&self, o: &Frame<T>) -> Frame<T> {
        assert_eq!(self.dim, o.dim);
        let mut cols = self.columns.clone();
        cols.extend(o.columns.iter().cloned());
        Frame::new(self.dim, cols).basis()
    }

    /// `A⊥` as the kernel of `A*`.
    pub fn orthocomplement(&self) -> Frame<T> {
        let b = self.basis();
        if b.columns.is_empty() {
            return Frame::standard(self.dim, 0..self.dim);
        }
        Frame::new(self.dim, b.matrix().adjoint().kernel())
    }

    /// Span membership by a rank test.
    pub fn contains(&self, v: &[T]) -> bool {
        let mut cols = self.columns.clone();
        cols.push(v.to_vec());
        Frame::new(self.dim, cols).rank() == self.rank()
    }

    /// Equality of spans.
    pub fn same_span(&self, o: &Frame<T>) -> bool {
        let r = self.rank();
        r == o.rank() && self.sum(o).rank() == r
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Frame<U> {
        Frame { dim: self.dim, columns: self.columns.iter().map(|c| c.iter().map(&f).collect()).collect() }
    }
}

/// `u*v`.
fn dot<T: Field>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
}

/// Pairwise orthogonal vectors with the same span as the independent
/// columns `cols`, unnormalised.
fn orthogonalise<T: Field>(cols: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut qs: Vec<Vec<T>> = Vec::with_capacity(cols.len());
    for c in cols {
        let mut v = c.clone();
        for _ in 0..2 {
            for q in &qs {
                let t = dot(q, &v) / dot(q, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x = x.clone() - t.clone() * y.clone();
                }
            }
        }
        qs.push(v);
    }
    qs
}

/// `2P − I`, the Cartan image of the subspace with projector `P`.
pub fn reflection<T: Field>(p: &Matrix<T>) -> Matrix<T> {
    p.scale(&T::from_i64(2)).sub(&Matrix::identity(p.nrows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussRat;
    use num_traits::Zero;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }
    fn v(xs: &[&str]) -> Vec<GaussRat> {
        xs.iter().map(|s| g(s)).collect()
    }

    #[test]
    fn projector_examples() {
        let p = Frame::new(2, vec![v(&["1", "0"])]).projector();
        assert_eq!(p, Matrix::from_rows(vec![v(&["1", "0"]), v(&["0", "0"])]));
        let p = Frame::new(2, vec![v(&["1", "i"])]).projector();
        assert_eq!(p, Matrix::from_rows(vec![v(&["1/2", "-1/2i"]), v(&["1/2i", "1/2"])]));
        let p = Frame::new(2, vec![v(&["1", "0"]), v(&["2", "0"])]).projector();
        assert_eq!(p, Matrix::from_rows(vec![v(&["1", "0"]), v(&["0", "0"])]));
        assert!(Frame::<GaussRat>::empty(3).projector().is_zero());
    }

    fn small_gauss() -> impl proptest::strategy::Strategy<Value = GaussRat> {
        use proptest::prelude::*;
        (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3).prop_map(|(a, b, c, d)| GaussRat::from_fracs(a, b, c, d))
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        // The fraction-free route and plain elimination give the same
        // reduced form; duplicated rows force rank deficiency.
        #[test]
        fn fraction_free_rref_agrees(
            rows in 1usize..5,
            cols in 1usize..6,
            entries in proptest::collection::vec(small_gauss(), 30),
            dup in proptest::bool::ANY,
        ) {
            let mut data: Vec<GaussRat> = entries[..rows * cols].to_vec();
            if dup && rows > 1 {
                let (first, rest) = data.split_at_mut(cols);
                rest[..cols].clone_from_slice(first);
            }
            let m = Matrix { rows, cols, data };
            let fast = exact_rref(&m);
            let slow = plain_rref(&m);
            proptest::prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(Frame::new(2, vec![v(&["1", "0"]), v(&["0", "1"])]).rank(), 2);
        assert_eq!(Frame::new(2, vec![v(&["1", "1"]), v(&["2", "2"])]).rank(), 1);
        assert_eq!(Frame::<GaussRat>::empty(2).rank(), 0);
        let f = Frame::new(2, vec![v(&["1", "1"]), v(&["2", "2"])]).map(|x| x.to_c64());
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn lattice_examples() {
        let e = |i: usize| Frame::<GaussRat>::standard(3, [i]);
        let e12 = e(0).sum(&e(1));
        let e23 = e(1).sum(&e(2));
        let meet = e12.intersect(&e23);
        assert_eq!(meet.rank(), 1);
        assert!(meet.same_span(&e(1)));
        assert!(e(0).orthocomplement().same_span(&e23));
        let e1_plus_e2 = Frame::new(3, vec![v(&["1", "1", "0"])]);
        assert!(e(0).sum(&e1_plus_e2).same_span(&e12));
    }

    #[test]
    fn inverse_and_kernel() {
        let m = Matrix::from_rows(vec![v(&["1", "i"]), v(&["2", "3"])]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let s = Matrix::from_rows(vec![v(&["1", "2"]), v(&["2", "4"])]);
        assert!(s.inverse().is_none());
        let k = s.kernel();
        assert_eq!(k.len(), 1);
        assert!(s.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn float_projector_is_hermitian_idempotent() {
        let f = Frame::new(3, vec![v(&["1", "i", "2"]), v(&["0", "1", "1/3"])]).map(|x| x.to_c64());
        let p = f.projector();
        assert!(p.dist(&p.adjoint()) < 1e-12);
        assert!(p.dist(&p.mul(&p)) < 1e-12);
        let exact = Frame::new(3, vec![v(&["1", "i", "2"]), v(&["0", "1", "1/3"])]).projector();
        assert!(p.dist(&exact.to_c64()) < 1e-12);
    }
}
