use std::sync::Arc;

use crate::cat::TildeModule;
use crate::dprings::{DpRing, S1Elem};
use crate::error::{Error, Result};
use crate::linalg::ColumnSolver;
use crate::mat::{col_add, col_monodromy, col_scale, unit_col, Column, LocalRing, RMatrix};
use crate::presentation::FilPresentation;
use crate::report::{Check, ValidationReport};

pub type S1Column = Column<S1Elem>;

/// Free module of rank d over the truncated S₁ with Fil^r, φ_r and N.
#[derive(Clone)]
pub struct S1Module {
    ring: DpRing,
    d: usize,
    fil_gens: Vec<S1Column>,
    phi_gens: Vec<S1Column>,
    /// φ_r(E(u)^r ê_l).
    phi_basis: Vec<S1Column>,
    n_mat: RMatrix<S1Elem>,
    pres: Arc<FilPresentation>,
}

impl std::fmt::Debug for S1Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("S1Module")
            .field("d", &self.d)
            .field("fil_gens", &self.fil_gens)
            .field("phi_gens", &self.phi_gens)
            .field("phi_basis", &self.phi_basis)
            .field("n_mat", &self.n_mat)
            .finish()
    }
}

fn check_column(ring: &DpRing, d: usize, c: &S1Column, what: &str) -> Result<()> {
    if c.len() != d {
        return Err(Error::DimensionMismatch(format!("{what} has {} entries, expected {d}", c.len())));
    }
    let trunc = ring.trunc_degree();
    if c.iter().any(|x| x.max_degree().is_some_and(|m| m >= trunc)) {
        return Err(Error::DimensionMismatch(format!("{what} has a term of degree ≥ trunc_degree {trunc}")));
    }
    Ok(())
}

impl S1Module {
    /// `phi_on_fil` lists φ_r of each generator, optionally followed by
    /// φ_r(E(u)^r ê_l); when omitted those are derived from the generators.
    pub fn new(
        ring: &DpRing,
        d: usize,
        fil_gens: Vec<S1Column>,
        phi_on_fil: Vec<S1Column>,
        n_mat: RMatrix<S1Elem>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch("rank must be positive".into()));
        }
        for (j, g) in fil_gens.iter().enumerate() {
            check_column(ring, d, g, &format!("fil_gens[{j}]"))?;
        }
        for (j, g) in phi_on_fil.iter().enumerate() {
            check_column(ring, d, g, &format!("phi_on_fil[{j}]"))?;
        }
        if n_mat.rows() != d || n_mat.cols() != d {
            return Err(Error::DimensionMismatch(format!("n_mat is {}x{}, expected {d}x{d}", n_mat.rows(), n_mat.cols())));
        }
        let k = fil_gens.len();
        let (phi_gens, phi_basis) = if phi_on_fil.len() == k + d {
            let mut g = phi_on_fil;
            let b = g.split_off(k);
            (g, b)
        } else if phi_on_fil.len() == k {
            let b = derive_basis_images(ring, d, &fil_gens, &phi_on_fil)?;
            (phi_on_fil, b)
        } else {
            return Err(Error::DimensionMismatch(format!(
                "phi_on_fil has {} columns, expected {k} or {}",
                phi_on_fil.len(),
                k + d
            )));
        };
        let pres = build_presentation(ring, d, &fil_gens, &phi_gens, &phi_basis);
        Ok(S1Module { ring: ring.clone(), d, fil_gens, phi_gens, phi_basis, n_mat, pres: Arc::new(pres) })
    }

    pub fn ring(&self) -> &DpRing {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fil_gens(&self) -> &[S1Column] {
        &self.fil_gens
    }

    pub fn phi_on_gens(&self) -> &[S1Column] {
        &self.phi_gens
    }

    pub fn phi_on_basis(&self) -> &[S1Column] {
        &self.phi_basis
    }

    pub fn n_mat(&self) -> &RMatrix<S1Elem> {
        &self.n_mat
    }

    pub fn basis_vector(&self, l: usize) -> S1Column {
        unit_col(&self.ring, self.d, l)
    }

    pub fn zero_col(&self) -> S1Column {
        vec![S1Elem::zero(); self.d]
    }

    pub fn scale(&self, s: &S1Elem, x: &[S1Elem]) -> S1Column {
        col_scale(&self.ring, s, x)
    }

    pub fn in_fil(&self, x: &[S1Elem]) -> bool {
        self.pres.contains(&self.ring.flatten(x))
    }

    pub fn phi_r(&self, x: &[S1Elem]) -> Result<S1Column> {
        let v = self.pres.phi_r(&self.ring.flatten(x)).ok_or_else(|| Error::NotInFil {
            level: self.ring.r() as u32,
            detail: "element is not in Fil^r".into(),
        })?;
        Ok(self.ring.unflatten(&v))
    }

    pub fn monodromy(&self, x: &[S1Elem]) -> S1Column {
        col_monodromy(&self.ring, &self.n_mat, x)
    }

    /// S₁-module generators of Fil^r: the listed ones, then `(u^{en}/n!)·ê_l` for n ≥ r.
    pub fn fil_module_generators(&self) -> Vec<S1Column> {
        let mut out = self.fil_gens.clone();
        let e = self.ring.e();
        for n in self.ring.r().. {
            if e * n >= self.ring.trunc_degree() {
                break;
            }
            for l in 0..self.d {
                out.push(self.scale(&self.ring.basis(e * n), &self.basis_vector(l)));
            }
        }
        out
    }

    /// Listed generators and `E(u)^r ê_l` with their φ_r-images.
    pub(crate) fn phi_pairs(&self) -> Vec<(S1Column, S1Column)> {
        let er = self.ring.er();
        let mut out: Vec<(S1Column, S1Column)> =
            self.fil_gens.iter().cloned().zip(self.phi_gens.iter().cloned()).collect();
        for (l, z) in self.phi_basis.iter().enumerate() {
            out.push((self.scale(&self.ring.u_pow(er), &self.basis_vector(l)), z.clone()));
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let ring = &self.ring;
        let mut rep = ValidationReport::new();
        rep.push(Check::pass_with("fil_contains_fil_r_S_M", "Fil^r S₁·M is part of the presentation"));
        match self.pres.inconsistency() {
            None => rep.push(Check::pass("phi_r_well_defined")),
            Some((idx, defect)) => rep.push(Check::fail(
                "phi_r_well_defined",
                format!("linear relation #{idx} among Fil generators maps to {}", fmt_s1col(ring, &ring.unflatten(&defect))),
            )),
        }
        let rank = self.pres.image_constant_rank();
        rep.push(if rank == self.d {
            Check::pass("phi_r_image_generates")
        } else {
            Check::fail("phi_r_image_generates", format!("image spans rank {rank} of {} modulo the maximal ideal", self.d))
        });
        let ue = ring.u_pow(ring.e());
        let mut stable = Ok(());
        let mut square = Ok(());
        for (idx, x) in self.fil_module_generators().iter().enumerate() {
            let y = self.scale(&ue, &self.monodromy(x));
            let Ok(lhs) = self.phi_r(&y) else {
                if stable.is_ok() {
                    stable = Err(format!("E·N(generator #{idx}) = {} is not in Fil", fmt_s1col(ring, &y)));
                }
                continue;
            };
            let phix = self.phi_r(x).expect("generator lies in Fil");
            let rhs = self.scale(ring.c(), &self.monodromy(&phix));
            if lhs != rhs && square.is_ok() {
                square = Err(format!(
                    "generator #{idx}: φ_r(E N x) = {} but c·N(φ_r x) = {}",
                    fmt_s1col(ring, &lhs),
                    fmt_s1col(ring, &rhs)
                ));
            }
        }
        rep.push(Check::from_result("E_N_preserves_fil", stable));
        rep.push(Check::from_result("phi_r_N_commutation", square));
        rep
    }
}

pub(crate) fn fmt_s1col(ring: &DpRing, x: &[S1Elem]) -> String {
    let parts: Vec<String> = x.iter().map(|s| s.display(ring.field())).collect();
    format!("({})", parts.join(", "))
}

/// `φ_r(E^r ê_l) = Σ σ(λ_{i,j}) φ(u^i/q(i)!) φ_r(g_j)` from `u^{er} ê_l = Σ λ_{i,j} (u^i/q(i)!) g_j`.
fn derive_basis_images(ring: &DpRing, d: usize, gens: &[S1Column], imgs: &[S1Column]) -> Result<Vec<S1Column>> {
    let f = ring.field();
    let dd = ring.trunc_degree();
    let er = ring.er();
    let mut solver = ColumnSolver::new(d * dd);
    let mut index = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        for i in 0..dd {
            let v = col_scale(ring, &ring.basis(i), g);
            solver.insert(f, &ring.flatten(&v));
            index.push((i, j));
        }
    }
    (0..d)
        .map(|l| {
            let target = col_scale(ring, &ring.u_pow(er), &unit_col(ring, d, l));
            let lambda = solver.solve(f, &ring.flatten(&target)).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "E(u)^r·ê_{l} is not in the span of fil_gens; phi_on_fil must also list its φ_r-image"
                ))
            })?;
            let mut acc = vec![S1Elem::zero(); d];
            for (&(i, j), &lam) in index.iter().zip(&lambda) {
                if !lam.is_zero() {
                    let s = ring.s1_phi(&ring.basis(i)).scale(f, f.frobenius(lam));
                    acc = col_add(ring, &acc, &col_scale(ring, &s, &imgs[j]));
                }
            }
            Ok(acc)
        })
        .collect()
}

fn build_presentation(
    ring: &DpRing,
    d: usize,
    gens: &[S1Column],
    phi_gens: &[S1Column],
    phi_basis: &[S1Column],
) -> FilPresentation {
    let dd = ring.trunc_degree();
    let er = ring.er();
    let mut spans = Vec::with_capacity(gens.len() * dd);
    let mut images = Vec::with_capacity(gens.len() * dd);
    for (g, img) in gens.iter().zip(phi_gens) {
        for i in 0..dd {
            let b = ring.basis(i);
            spans.push(ring.flatten(&col_scale(ring, &b, g)));
            images.push(ring.flatten(&col_scale(ring, &ring.s1_phi(&b), img)));
        }
    }
    let mut high = vec![None; d * dd];
    for i in er..dd {
        // φ_r((u^i/q(i)!) ê_l) = c^{-r} φ_r(u^i/q(i)!) φ_r(E^r ê_l)
        let w = ring.s1_mul(ring.c_neg_r(), &ring.phi_r_basis(i));
        if w.is_zero() {
            continue;
        }
        for (l, z) in phi_basis.iter().enumerate() {
            high[l * dd + i] = Some(ring.flatten(&col_scale(ring, &w, z)));
        }
    }
    FilPresentation::new(ring.field(), d, dd, er, spans, images, high)
}

/// `T(M) = M ⊗_{S₁} S̃`: project every piece of data along S₁ → S̃.
pub fn functor_t(m: &S1Module) -> Result<TildeModule> {
    let ring = &m.ring;
    let proj = |c: &S1Column| -> Column<crate::dprings::TildeSElem> { c.iter().map(|s| ring.project_tilde(s)).collect() };
    let gens: Vec<_> = m.fil_gens.iter().map(proj).collect();
    let phi: Vec<_> = m.phi_gens.iter().chain(&m.phi_basis).map(proj).collect();
    let n_cols: Vec<_> = m.n_mat.cols_vec().iter().map(proj).collect();
    TildeModule::new(ring, m.d, gens, phi, RMatrix::from_cols(m.d, &n_cols))
        .map_err(|e| Error::InvalidObject(format!("reduction is malformed: {e}")))
}
