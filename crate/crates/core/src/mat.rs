//! Matrices over the local rings S̃ and S₁.

use std::fmt::Debug;

use crate::dprings::{DpRing, S1Elem, TildeSElem};
use crate::gf::{FieldElem, GaloisField};
use crate::linalg::Matrix;

/// A commutative local ring whose units are exactly the elements with a
/// nonzero constant term.
#[allow(clippy::wrong_self_convention)]
pub trait LocalRing {
    type Elem: Clone + PartialEq + Debug;
    fn field(&self) -> &GaloisField;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_scalar(&self, c: FieldElem) -> Self::Elem;
    fn constant_term(&self, a: &Self::Elem) -> FieldElem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Frobenius of the ring.
    fn phi(&self, a: &Self::Elem) -> Self::Elem;
    /// Monodromy derivation of the ring.
    fn monodromy(&self, a: &Self::Elem) -> Self::Elem;

    /// Number of k-coordinates of an element.
    fn basis_len(&self) -> usize;
    fn to_dense(&self, a: &Self::Elem) -> Vec<FieldElem>;
    fn from_dense(&self, v: &[FieldElem]) -> Self::Elem;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    /// Column of ring elements as one k-vector, component-major.
    fn flatten(&self, x: &[Self::Elem]) -> Vec<FieldElem> {
        x.iter().flat_map(|a| self.to_dense(a)).collect()
    }

    fn unflatten(&self, v: &[FieldElem]) -> Vec<Self::Elem> {
        v.chunks(self.basis_len()).map(|c| self.from_dense(c)).collect()
    }
}

/// S̃ = k[u]/u^p as a [`LocalRing`].
#[derive(Clone, Debug)]
pub struct TildeRing {
    field: GaloisField,
}

impl TildeRing {
    pub fn new(field: GaloisField) -> Self {
        TildeRing { field }
    }

    pub fn p(&self) -> usize {
        self.field.p() as usize
    }
}

impl LocalRing for TildeRing {
    type Elem = TildeSElem;

    fn field(&self) -> &GaloisField {
        &self.field
    }
    fn zero(&self) -> TildeSElem {
        TildeSElem::zero(self.p())
    }
    fn one(&self) -> TildeSElem {
        TildeSElem::one(&self.field)
    }
    fn from_scalar(&self, c: FieldElem) -> TildeSElem {
        TildeSElem::constant(self.p(), c)
    }
    fn constant_term(&self, a: &TildeSElem) -> FieldElem {
        a.constant_term()
    }
    fn add(&self, a: &TildeSElem, b: &TildeSElem) -> TildeSElem {
        a.add(&self.field, b)
    }
    fn sub(&self, a: &TildeSElem, b: &TildeSElem) -> TildeSElem {
        a.sub(&self.field, b)
    }
    fn mul(&self, a: &TildeSElem, b: &TildeSElem) -> TildeSElem {
        a.mul(&self.field, b)
    }
    fn inv(&self, a: &TildeSElem) -> Option<TildeSElem> {
        a.inv(&self.field)
    }
    fn is_zero(&self, a: &TildeSElem) -> bool {
        a.is_zero()
    }
    fn phi(&self, a: &TildeSElem) -> TildeSElem {
        a.phi(&self.field)
    }
    fn monodromy(&self, a: &TildeSElem) -> TildeSElem {
        a.monodromy(&self.field)
    }
    fn basis_len(&self) -> usize {
        self.p()
    }
    fn to_dense(&self, a: &TildeSElem) -> Vec<FieldElem> {
        a.0.clone()
    }
    fn from_dense(&self, v: &[FieldElem]) -> TildeSElem {
        TildeSElem(v.to_vec())
    }
}

impl LocalRing for DpRing {
    type Elem = S1Elem;

    fn field(&self) -> &GaloisField {
        DpRing::field(self)
    }
    fn zero(&self) -> S1Elem {
        S1Elem::zero()
    }
    fn one(&self) -> S1Elem {
        DpRing::one(self)
    }
    fn from_scalar(&self, c: FieldElem) -> S1Elem {
        self.scalar(c)
    }
    fn constant_term(&self, a: &S1Elem) -> FieldElem {
        a.constant_term()
    }
    fn add(&self, a: &S1Elem, b: &S1Elem) -> S1Elem {
        a.add(DpRing::field(self), b)
    }
    fn sub(&self, a: &S1Elem, b: &S1Elem) -> S1Elem {
        a.sub(DpRing::field(self), b)
    }
    fn mul(&self, a: &S1Elem, b: &S1Elem) -> S1Elem {
        self.s1_mul(a, b)
    }
    fn inv(&self, a: &S1Elem) -> Option<S1Elem> {
        self.s1_inv(a)
    }
    fn is_zero(&self, a: &S1Elem) -> bool {
        a.is_zero()
    }
    fn phi(&self, a: &S1Elem) -> S1Elem {
        self.s1_phi(a)
    }
    fn monodromy(&self, a: &S1Elem) -> S1Elem {
        self.s1_n(a)
    }
    fn basis_len(&self) -> usize {
        self.trunc_degree()
    }
    fn to_dense(&self, a: &S1Elem) -> Vec<FieldElem> {
        a.to_dense(self.trunc_degree())
    }
    fn from_dense(&self, v: &[FieldElem]) -> S1Elem {
        S1Elem::from_dense(v)
    }
}

/// Row-major matrix over a [`LocalRing`]. Columns of a basis-change matrix
/// are the new basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type Column<E> = Vec<E>;

impl<E: Clone + PartialEq + Debug> RMatrix<E> {
    pub fn zeros<R: LocalRing<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity<R: LocalRing<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[Column<E>]) -> Self {
        let c = cols.len();
        let mut data = Vec::with_capacity(rows * c);
        for i in 0..rows {
            for col in cols {
                assert_eq!(col.len(), rows, "ragged matrix");
                data.push(col[i].clone());
            }
        }
        RMatrix { rows, cols: c, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        RMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: E) {
        self.data[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Column<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn cols_vec(&self) -> Vec<Column<E>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn map<F, R2: Clone + PartialEq + Debug>(&self, mut g: F) -> RMatrix<R2>
    where
        F: FnMut(&E) -> R2,
    {
        RMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut g).collect() }
    }

    pub fn mul<R: LocalRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !ring.is_zero(b) {
                        let v = ring.add(out.get(i, j), &ring.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_col<R: LocalRing<Elem = E>>(&self, ring: &R, v: &[E]) -> Column<E> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !ring.is_zero(a) && !ring.is_zero(x) {
                        acc = ring.add(&acc, &ring.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Constant terms as a matrix over k.
    pub fn constant_part<R: LocalRing<Elem = E>>(&self, ring: &R) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, ring.constant_term(self.get(i, j)));
            }
        }
        m
    }

    /// Inverse over the local ring; exists iff the constant part is invertible.
    pub fn inverse<R: LocalRing<Elem = E>>(&self, ring: &R) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(ring, n);
        for col in 0..n {
            let pr = (col..n).find(|&i| !ring.constant_term(a.get(i, col)).is_zero())?;
            a.swap_rows(pr, col);
            inv.swap_rows(pr, col);
            let pinv = ring.inv(a.get(col, col))?;
            a.scale_row(ring, col, &pinv);
            inv.scale_row(ring, col, &pinv);
            for i in 0..n {
                if i != col && !ring.is_zero(a.get(i, col)) {
                    let factor = a.get(i, col).clone();
                    a.sub_row_multiple(ring, i, col, &factor);
                    inv.sub_row_multiple(ring, i, col, &factor);
                }
            }
        }
        Some(inv)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row<R: LocalRing<Elem = E>>(&mut self, ring: &R, i: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    /// `row_i −= c · row_t`.
    pub(crate) fn sub_row_multiple<R: LocalRing<Elem = E>>(&mut self, ring: &R, i: usize, t: usize, c: &E) {
        for j in 0..self.cols {
            let x = self.get(t, j);
            if !ring.is_zero(x) {
                let v = ring.sub(self.get(i, j), &ring.mul(c, x));
                self.set(i, j, v);
            }
        }
    }

    /// `col_j −= c · col_t`.
    pub(crate) fn sub_col_multiple<R: LocalRing<Elem = E>>(&mut self, ring: &R, j: usize, t: usize, c: &E) {
        for i in 0..self.rows {
            let x = self.get(i, t);
            if !ring.is_zero(x) {
                let v = ring.sub(self.get(i, j), &ring.mul(c, x));
                self.set(i, j, v);
            }
        }
    }

    /// `col_t += c · col_i`.
    pub(crate) fn add_col_multiple<R: LocalRing<Elem = E>>(&mut self, ring: &R, t: usize, i: usize, c: &E) {
        for r in 0..self.rows {
            let x = self.get(r, i);
            if !ring.is_zero(x) {
                let v = ring.add(self.get(r, t), &ring.mul(c, x));
                self.set(r, t, v);
            }
        }
    }
}

/// Column helpers shared by the module types.
pub fn col_add<R: LocalRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Column<R::Elem> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

pub fn col_sub<R: LocalRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Column<R::Elem> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub fn col_scale<R: LocalRing>(ring: &R, s: &R::Elem, a: &[R::Elem]) -> Column<R::Elem> {
    a.iter().map(|x| ring.mul(s, x)).collect()
}

pub fn col_is_zero<R: LocalRing>(ring: &R, a: &[R::Elem]) -> bool {
    a.iter().all(|x| ring.is_zero(x))
}

pub fn unit_col<R: LocalRing>(ring: &R, d: usize, l: usize) -> Column<R::Elem> {
    (0..d).map(|i| if i == l { ring.one() } else { ring.zero() }).collect()
}

/// `N(Σ x_l e_l) = Σ N(x_l) e_l + x_l N(e_l)` with `N(e_l)` the l-th column of `n_mat`.
pub fn col_monodromy<R: LocalRing>(ring: &R, n_mat: &RMatrix<R::Elem>, x: &[R::Elem]) -> Column<R::Elem> {
    let base: Column<R::Elem> = x.iter().map(|s| ring.monodromy(s)).collect();
    col_add(ring, &base, &n_mat.mul_col(ring, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dprings::RingParams;

    #[test]
    fn tilde_inverse() {
        let f = GaloisField::prime(5).unwrap();
        let t = TildeRing::new(f.clone());
        let u = TildeSElem::u_pow(&f, 1);
        let m = RMatrix::from_rows(vec![vec![t.one(), u.clone()], vec![u.clone(), t.from_scalar(f.from_int(2))]]);
        let inv = m.inverse(&t).unwrap();
        assert_eq!(m.mul(&t, &inv), RMatrix::identity(&t, 2));
        let sing = RMatrix::from_rows(vec![vec![u.clone(), t.one()], vec![u.clone(), t.one()]]);
        assert!(sing.inverse(&t).is_none());
    }

    #[test]
    fn s1_inverse() {
        let ring = DpRing::new(RingParams::standard(3, 1, 1, 1)).unwrap();
        let m = RMatrix::from_rows(vec![
            vec![ring.c().clone(), ring.basis(4)],
            vec![ring.basis(1), LocalRing::one(&ring)],
        ]);
        let inv = m.inverse(&ring).unwrap();
        assert_eq!(m.mul(&ring, &inv), RMatrix::identity(&ring, 2));
        assert_eq!(inv.mul(&ring, &m), RMatrix::identity(&ring, 2));
    }
}
