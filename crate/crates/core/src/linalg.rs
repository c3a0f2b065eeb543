//! Dense linear algebra over a [`GaloisField`].

use crate::gf::{FieldElem, GaloisField};

/// Row-major dense matrix. Entries belong to whatever field the caller passes
/// to the arithmetic methods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(f: &GaloisField, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: &[Vec<FieldElem>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged matrix");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &GaloisField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &GaloisField, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Entrywise Frobenius power `x ↦ x^(p^j)`.
    pub fn map_frobenius(&self, f: &GaloisField, j: u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.frobenius_iter(x, j)).collect(),
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &GaloisField) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, row);
            let inv = f.inv(m.get(row, col)).unwrap();
            for j in 0..m.cols {
                let x = m.get(row, j);
                m.set(row, j, f.mul(x, inv));
            }
            let pivot_row = m.row(row).to_vec();
            for i in 0..m.rows {
                if i != row {
                    let factor = m.get(i, col);
                    let cols = m.cols;
                    f.sub_scaled(&mut m.data[i * cols..(i + 1) * cols], factor, &pivot_row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &GaloisField) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self, f: &GaloisField) -> Vec<Vec<FieldElem>> {
        let (r, pivots) = self.rref(f);
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(k, free));
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self, f: &GaloisField) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, f.one());
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Some `x` with `A x = b`, if one exists.
    pub fn solve(&self, f: &GaloisField, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let cols: Vec<Vec<FieldElem>> = (0..self.cols).map(|j| self.col(j)).collect();
        let mut solver = ColumnSolver::new(self.rows);
        for c in &cols {
            solver.insert(f, c);
        }
        solver.solve(f, b)
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

struct Row {
    pivot: usize,
    vec: Vec<FieldElem>,
    combo: Vec<FieldElem>,
}

/// Incremental echelon form of a growing list of column vectors, with the
/// combinations that express each echelon row in the inserted columns.
///
/// ```
/// use breuil::gf::GaloisField;
/// use breuil::linalg::ColumnSolver;
///
/// let f = GaloisField::prime(5).unwrap();
/// let v = |xs: &[i64]| xs.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
/// let mut s = ColumnSolver::new(2);
/// assert!(s.insert(&f, &v(&[1, 2])).is_none());
/// let dep = s.insert(&f, &v(&[2, 4])).unwrap();
/// assert_eq!(dep, v(&[-2, 1]));
/// assert_eq!(s.solve(&f, &v(&[3, 1])), Some(v(&[3, 0])));
/// assert_eq!(s.solve(&f, &v(&[1, 0])), None);
/// ```
pub struct ColumnSolver {
    dim: usize,
    rows: Vec<Row>,
    count: usize,
}

impl ColumnSolver {
    pub fn new(dim: usize) -> Self {
        ColumnSolver { dim, rows: Vec::new(), count: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of inserted columns.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn reduce(&self, f: &GaloisField, v: &[FieldElem]) -> (Vec<FieldElem>, Vec<FieldElem>) {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut res = v.to_vec();
        let mut combo = vec![f.zero(); self.count];
        let minus_one = f.from_int(-1);
        for row in &self.rows {
            let c = res[row.pivot];
            if c.is_zero() {
                continue;
            }
            f.sub_scaled(&mut res, c, &row.vec);
            // combo += c * row.combo
            f.sub_scaled(&mut combo[..row.combo.len()], f.mul(c, minus_one), &row.combo);
        }
        (res, combo)
    }

    /// Inserts a column. Returns `None` if it was independent of the previous
    /// ones, else a kernel vector of length `len()` whose last entry is 1.
    pub fn insert(&mut self, f: &GaloisField, v: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let (res, combo) = self.reduce(f, v);
        let idx = self.count;
        self.count += 1;
        match res.iter().position(|x| !x.is_zero()) {
            None => {
                let mut k: Vec<FieldElem> = combo.iter().map(|&c| f.neg(c)).collect();
                k.push(f.one());
                Some(k)
            }
            Some(pivot) => {
                let inv = f.inv(res[pivot]).unwrap();
                let vec = res.iter().map(|&x| f.mul(x, inv)).collect();
                let mut c: Vec<FieldElem> = combo.iter().map(|&x| f.neg(f.mul(x, inv))).collect();
                c.push(inv);
                debug_assert_eq!(c.len(), idx + 1);
                self.rows.push(Row { pivot, vec, combo: c });
                None
            }
        }
    }

    pub fn contains(&self, f: &GaloisField, v: &[FieldElem]) -> bool {
        self.reduce(f, v).0.iter().all(|x| x.is_zero())
    }

    /// Coefficients `λ` with `Σ λ_b v_b = target`, if the target is in the span.
    pub fn solve(&self, f: &GaloisField, target: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let (res, combo) = self.reduce(f, target);
        res.iter().all(|x| x.is_zero()).then_some(combo)
    }
}

/// Rank of the span of a list of vectors.
pub fn span_rank(f: &GaloisField, vectors: &[Vec<FieldElem>], dim: usize) -> usize {
    let mut s = ColumnSolver::new(dim);
    for v in vectors {
        s.insert(f, v);
    }
    s.rank()
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(f: &GaloisField, a: &[Vec<FieldElem>], b: &[Vec<FieldElem>], dim: usize) -> bool {
    let mut sa = ColumnSolver::new(dim);
    for v in a {
        sa.insert(f, v);
    }
    let mut sb = ColumnSolver::new(dim);
    for v in b {
        sb.insert(f, v);
    }
    sa.rank() == sb.rank() && b.iter().all(|v| sa.contains(f, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(f: &GaloisField, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect())
    }

    #[test]
    fn inverse_small() {
        let f = GaloisField::prime(7).unwrap();
        let a = mat(&f, &[&[1, 2], &[3, 4]]);
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &inv), Matrix::identity(&f, 2));
        assert!(mat(&f, &[&[1, 2], &[2, 4]]).inverse(&f).is_none());
    }

    #[test]
    fn kernel_small() {
        let f = GaloisField::prime(5).unwrap();
        let a = mat(&f, &[&[1, 2, 3], &[2, 1, 1]]);
        let k = a.kernel(&f);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&f, &k[0]).iter().all(|x| x.is_zero()));
        assert_eq!(a.rank(&f), 2);
    }

    #[test]
    fn kernel_over_extension() {
        let f = GaloisField::new(3, 2).unwrap();
        let e = f.from_coeffs(&[0, 1]).unwrap();
        let a = Matrix::from_rows(vec![vec![f.one(), e], vec![e, f.from_int(-1)]]);
        assert_eq!(a.rank(&f), 1);
        let k = a.kernel(&f);
        assert!(a.mul_vec(&f, &k[0]).iter().all(|x| x.is_zero()));
    }

    proptest! {
        #[test]
        fn random_square_inverse(entries in proptest::collection::vec(0u32..25, 9)) {
            let f = GaloisField::new(5, 2).unwrap();
            let rows: Vec<Vec<FieldElem>> = entries
                .chunks(3)
                .map(|c| c.iter().map(|&x| f.from_index(x).unwrap()).collect())
                .collect();
            let a = Matrix::from_rows(rows);
            match a.inverse(&f) {
                Some(inv) => {
                    prop_assert_eq!(a.mul(&f, &inv), Matrix::identity(&f, 3));
                    prop_assert_eq!(a.rank(&f), 3);
                }
                None => prop_assert!(a.rank(&f) < 3),
            }
        }

        #[test]
        fn solver_combination_is_exact(entries in proptest::collection::vec(0u32..3, 12), target in proptest::collection::vec(0u32..3, 3)) {
            let f = GaloisField::prime(3).unwrap();
            let cols: Vec<Vec<FieldElem>> = entries
                .chunks(3)
                .map(|c| c.iter().map(|&x| f.from_index(x).unwrap()).collect())
                .collect();
            let mut s = ColumnSolver::new(3);
            for c in &cols {
                if let Some(k) = s.insert(&f, c) {
                    let mut acc = [f.zero(); 3];
                    for (b, &l) in k.iter().enumerate() {
                        for i in 0..3 {
                            acc[i] = f.add(acc[i], f.mul(l, cols[b][i]));
                        }
                    }
                    prop_assert!(acc.iter().all(|x| x.is_zero()));
                }
            }
            let t: Vec<FieldElem> = target.iter().map(|&x| f.from_index(x).unwrap()).collect();
            if let Some(l) = s.solve(&f, &t) {
                let mut acc = vec![f.zero(); 3];
                for (b, &lb) in l.iter().enumerate() {
                    for i in 0..3 {
                        acc[i] = f.add(acc[i], f.mul(lb, cols[b][i]));
                    }
                }
                prop_assert_eq!(acc, t);
            } else {
                prop_assert!(s.rank() < 3);
            }
        }
    }
}
