//! k-linear model of a filtered module with a semilinear map on Fil.
//!
//! A module free of rank d over S̃ or S₁ is flattened to k^{d·nb} (nb
//! coordinates per component, component-major). Fil is spanned by a finite
//! list of vectors plus every coordinate vector of degree ≥ er. The divided
//! Frobenius is known on each spanning vector and on each of those coordinate
//! vectors, and is σ-semilinear. Since the coordinate vectors of degree ≥ er
//! are independent, everything reduces to linear algebra on the degree < er
//! coordinates.

use crate::gf::{FieldElem, GaloisField};
use crate::linalg::{span_rank, ColumnSolver};

pub(crate) struct FilPresentation {
    field: GaloisField,
    d: usize,
    nb: usize,
    er: usize,
    spans: Vec<Vec<FieldElem>>,
    images: Vec<Vec<FieldElem>>,
    /// Image of each coordinate vector of degree ≥ er; `None` means zero.
    high: Vec<Option<Vec<FieldElem>>>,
    low: ColumnSolver,
    kernel: Vec<Vec<FieldElem>>,
}

impl FilPresentation {
    pub(crate) fn new(
        field: &GaloisField,
        d: usize,
        nb: usize,
        er: usize,
        spans: Vec<Vec<FieldElem>>,
        images: Vec<Vec<FieldElem>>,
        high: Vec<Option<Vec<FieldElem>>>,
    ) -> Self {
        assert_eq!(spans.len(), images.len());
        assert_eq!(high.len(), d * nb);
        let er = er.min(nb);
        let mut low = ColumnSolver::new(d * er);
        let mut kernel = Vec::new();
        let mut pres = FilPresentation {
            field: field.clone(),
            d,
            nb,
            er,
            spans: Vec::new(),
            images: Vec::new(),
            high,
            low: ColumnSolver::new(0),
            kernel: Vec::new(),
        };
        for s in &spans {
            if let Some(k) = low.insert(field, &pres.low_part(s)) {
                kernel.push(k);
            }
        }
        let n = spans.len();
        for k in kernel.iter_mut() {
            k.resize(n, FieldElem::ZERO);
        }
        pres.spans = spans;
        pres.images = images;
        pres.low = low;
        pres.kernel = kernel;
        pres
    }

    pub(crate) fn dim_total(&self) -> usize {
        self.d * self.nb
    }

    fn is_low(&self, c: usize) -> bool {
        c % self.nb < self.er
    }

    pub(crate) fn low_part(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(self.d * self.er);
        for l in 0..self.d {
            out.extend_from_slice(&x[l * self.nb..l * self.nb + self.er]);
        }
        out
    }

    /// Semilinear image of the degree ≥ er part of `y`.
    fn high_image(&self, y: &[FieldElem]) -> Vec<FieldElem> {
        let f = &self.field;
        let mut out = vec![FieldElem::ZERO; self.dim_total()];
        for (c, &w) in y.iter().enumerate() {
            if w.is_zero() || self.is_low(c) {
                continue;
            }
            if let Some(img) = &self.high[c] {
                f.sub_scaled(&mut out, f.neg(f.frobenius(w)), img);
            }
        }
        out
    }

    fn combine(&self, lambda: &[FieldElem], vectors: &[Vec<FieldElem>], twist: bool) -> Vec<FieldElem> {
        let f = &self.field;
        let mut out = vec![FieldElem::ZERO; self.dim_total()];
        for (l, v) in lambda.iter().zip(vectors) {
            if !l.is_zero() {
                let c = if twist { f.frobenius(*l) } else { *l };
                f.sub_scaled(&mut out, f.neg(c), v);
            }
        }
        out
    }

    pub(crate) fn contains(&self, x: &[FieldElem]) -> bool {
        self.low.contains(&self.field, &self.low_part(x))
    }

    /// `φ_r(x)`, or `None` if `x ∉ Fil`.
    pub(crate) fn phi_r(&self, x: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let f = &self.field;
        let lambda = self.low.solve(f, &self.low_part(x))?;
        let rest = self.combine(&lambda, &self.spans, false);
        let rem: Vec<FieldElem> = x.iter().zip(&rest).map(|(&a, &b)| f.sub(a, b)).collect();
        let mut out = self.combine(&lambda, &self.images, true);
        let hi = self.high_image(&rem);
        for (o, h) in out.iter_mut().zip(hi) {
            *o = f.add(*o, h);
        }
        Some(out)
    }

    /// First linear relation among the spanning data on which the stored
    /// images disagree, as `(relation index, defect)`.
    pub(crate) fn inconsistency(&self) -> Option<(usize, Vec<FieldElem>)> {
        let f = &self.field;
        for (idx, lambda) in self.kernel.iter().enumerate() {
            let combo = self.combine(lambda, &self.spans, false);
            let via_images = self.combine(lambda, &self.images, true);
            let via_high = self.high_image(&combo);
            let defect: Vec<FieldElem> = via_images.iter().zip(&via_high).map(|(&a, &b)| f.sub(a, b)).collect();
            if defect.iter().any(|x| !x.is_zero()) {
                return Some((idx, defect));
            }
        }
        None
    }

    /// Rank of the constant terms of all images of φ_r.
    pub(crate) fn image_constant_rank(&self) -> usize {
        let consts = |v: &Vec<FieldElem>| -> Vec<FieldElem> { (0..self.d).map(|l| v[l * self.nb]).collect() };
        let mut vs: Vec<Vec<FieldElem>> = self.images.iter().map(consts).collect();
        vs.extend(self.high.iter().flatten().map(consts));
        span_rank(&self.field, &vs, self.d)
    }

    /// k-dimension of Fil.
    pub(crate) fn dim(&self) -> usize {
        self.low.rank() + self.d * (self.nb - self.er)
    }

    pub(crate) fn spans(&self) -> &[Vec<FieldElem>] {
        &self.spans
    }

    /// Whether every spanning vector of `other` lies in this Fil.
    pub(crate) fn contains_all(&self, other: &FilPresentation) -> bool {
        self.er <= other.er && other.spans.iter().all(|s| self.contains(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_tilde_model() {
        // S̃ over GF(5), d = 1, er = 2, Fil = u·S̃ with φ_r(u) = 1 and φ_r(u^2) = 0.
        let f = GaloisField::prime(5).unwrap();
        let unit = |i: usize| {
            let mut v = vec![FieldElem::ZERO; 5];
            v[i] = f.one();
            v
        };
        let spans = (0..5).map(|a| if a + 1 < 5 { unit(a + 1) } else { vec![FieldElem::ZERO; 5] }).collect::<Vec<_>>();
        let images = (0..5).map(|a| if a == 0 { unit(0) } else { vec![FieldElem::ZERO; 5] }).collect();
        let high = (0..5).map(|_| None).collect();
        let pres = FilPresentation::new(&f, 1, 5, 2, spans, images, high);
        assert!(pres.inconsistency().is_none());
        assert_eq!(pres.dim(), 4);
        assert!(!pres.contains(&unit(0)));
        assert_eq!(pres.phi_r(&unit(1)).unwrap(), unit(0));
        assert_eq!(pres.image_constant_rank(), 1);
    }
}
