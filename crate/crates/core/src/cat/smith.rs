//! Adapted bases: `Fil^r M̃ = ⊕ u^{n_i} S̃ e'_i`.

use crate::dprings::TildeSElem;
use crate::error::{Error, Result};
use crate::mat::{LocalRing, RMatrix, TildeRing};
use crate::report::{Check, ValidationReport};

use super::module::{TildeColumn, TildeModule};

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedBasis {
    /// Columns are the new basis vectors `e'_i` in the old coordinates.
    pub basis_change: RMatrix<TildeSElem>,
    pub weights: Vec<usize>,
}

impl AdaptedBasis {
    pub fn basis_vector(&self, i: usize) -> TildeColumn {
        self.basis_change.col(i)
    }
}

/// Smith normal form of `[g_1 … g_k | u^{er} I]` over S̃, tracking the row
/// operations so that the resulting diagonal is expressed in a new basis.
pub fn smith_adapted(tr: &TildeRing, d: usize, er: usize, gens: &[TildeColumn]) -> Result<AdaptedBasis> {
    let f = tr.field().clone();
    let mut cols: Vec<TildeColumn> = gens.to_vec();
    for l in 0..d {
        let mut c = vec![tr.zero(); d];
        c[l] = TildeSElem::u_pow(&f, er);
        cols.push(c);
    }
    let mut a = RMatrix::from_cols(d, &cols);
    let ncols = a.cols();
    let mut pinv = RMatrix::identity(tr, d);
    let mut weights = Vec::with_capacity(d);
    for t in 0..d {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..d {
            for j in t..ncols {
                if let Some(v) = a.get(i, j).valuation() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, pi, pj) = best.ok_or_else(|| Error::InvalidFil("Fil^r does not contain u^{er}M".into()))?;
        if pi != t {
            a.swap_rows(t, pi);
            pinv.swap_cols(t, pi);
        }
        if pj != t {
            a.swap_cols(t, pj);
        }
        let pivot = a.get(t, t).clone();
        for i in t + 1..d {
            if a.get(i, t).is_zero() {
                continue;
            }
            let c = a.get(i, t).div_exact(&f, &pivot).expect("pivot has minimal valuation");
            a.sub_row_multiple(tr, i, t, &c);
            pinv.add_col_multiple(tr, t, i, &c);
        }
        for j in t + 1..ncols {
            if a.get(t, j).is_zero() {
                continue;
            }
            let c = a.get(t, j).div_exact(&f, &pivot).expect("pivot has minimal valuation");
            a.sub_col_multiple(tr, j, t, &c);
        }
        weights.push(v.min(er));
    }
    Ok(AdaptedBasis { basis_change: pinv, weights })
}

pub fn adapted_basis(m: &TildeModule) -> Result<AdaptedBasis> {
    smith_adapted(m.tilde_ring(), m.d(), m.ring().er(), m.fil_gens())
}

impl TildeModule {
    /// The module rewritten in an adapted basis, with generators `u^{n_i}e'_i`.
    pub fn in_adapted_basis(&self) -> Result<(TildeModule, AdaptedBasis)> {
        let ab = adapted_basis(self)?;
        let m = self.change_basis(&ab.basis_change)?.with_diagonal_generators(&ab.weights)?;
        Ok((m, ab))
    }
}

fn s_span(m: &TildeModule, gens: &[TildeColumn]) -> Vec<Vec<crate::gf::FieldElem>> {
    let t = m.tilde_ring();
    gens.iter().flat_map(|g| (0..m.ring().p()).map(move |a| t.flatten(&m.u_shift(g, a)))).collect()
}

/// Checks that `ab` is an adapted basis of `m`: weights in `[0, er]`, the
/// change of basis is invertible, and `⊕ u^{n_i} S̃ e'_i` equals `Fil^r M̃`.
pub fn verify_adapted(m: &TildeModule, ab: &AdaptedBasis) -> ValidationReport {
    let er = m.ring().er();
    let mut rep = ValidationReport::new();
    rep.push(match ab.weights.iter().find(|&&n| n > er) {
        None if ab.weights.len() == m.d() => Check::pass("weights_in_range"),
        None => Check::fail("weights_in_range", format!("{} weights for rank {}", ab.weights.len(), m.d())),
        Some(n) => Check::fail("weights_in_range", format!("weight {n} exceeds er = {er}")),
    });
    let invertible = ab.basis_change.rows() == m.d() && ab.basis_change.inverse(m.tilde_ring()).is_some();
    rep.push(if invertible { Check::pass("basis_invertible") } else { Check::fail("basis_invertible", "change of basis is singular") });
    if !invertible || ab.weights.len() != m.d() {
        rep.push(Check::fail("regenerates_fil", "no decomposition to compare"));
        return rep;
    }
    let f = m.tilde_ring().field();
    let ambient = m.d() * m.ring().p();
    let original = s_span(m, &m.fil_module_generators());
    let decomposed: Vec<TildeColumn> =
        ab.weights.iter().enumerate().map(|(i, &n)| m.u_shift(&ab.basis_vector(i), n)).collect();
    let dec = s_span(m, &decomposed);
    let mut orig = crate::linalg::ColumnSolver::new(ambient);
    for v in &original {
        orig.insert(f, v);
    }
    let forward = dec.iter().all(|v| orig.contains(f, v));
    let back = forward && crate::linalg::span_rank(f, &dec, ambient) == orig.rank();
    rep.push(match (forward, back) {
        (true, true) => Check::pass("regenerates_fil"),
        (false, _) => Check::fail("regenerates_fil", "some u^{n_i} e'_i lies outside Fil^r"),
        (true, false) => Check::fail("regenerates_fil", "the decomposition misses part of Fil^r"),
    });
    rep
}
