use std::sync::Arc;

use crate::dprings::{DpRing, TildeSElem};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::linalg::ColumnSolver;
use crate::mat::{col_add, col_is_zero, col_monodromy, col_scale, unit_col, Column, LocalRing, RMatrix, TildeRing};
use crate::presentation::FilPresentation;
use crate::report::{Check, ValidationReport};

pub type TildeColumn = Column<TildeSElem>;

/// An object of M̃^r: free S̃-module of rank d with Fil^r, φ_r and N.
#[derive(Clone)]
pub struct TildeModule {
    ring: DpRing,
    tr: TildeRing,
    d: usize,
    fil_gens: Vec<TildeColumn>,
    phi_gens: Vec<TildeColumn>,
    phi_basis: Vec<TildeColumn>,
    n_mat: RMatrix<TildeSElem>,
    pres: Arc<FilPresentation>,
}

impl std::fmt::Debug for TildeModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TildeModule")
            .field("d", &self.d)
            .field("fil_gens", &self.fil_gens)
            .field("phi_gens", &self.phi_gens)
            .field("phi_basis", &self.phi_basis)
            .field("n_mat", &self.n_mat)
            .finish()
    }
}

impl PartialEq for TildeModule {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring
            && self.d == o.d
            && self.fil_gens == o.fil_gens
            && self.phi_gens == o.phi_gens
            && self.phi_basis == o.phi_basis
            && self.n_mat == o.n_mat
    }
}

fn check_column(p: usize, d: usize, c: &TildeColumn, what: &str) -> Result<()> {
    if c.len() != d {
        return Err(Error::DimensionMismatch(format!("{what} has {} entries, expected {d}", c.len())));
    }
    if let Some(x) = c.iter().find(|x| x.len() != p) {
        return Err(Error::DimensionMismatch(format!("{what} has an entry of length {}, expected p = {p}", x.len())));
    }
    Ok(())
}

impl TildeModule {
    /// `phi_on_fil` lists φ_r of each generator, optionally followed by φ_r(u^{er}e_l)
    /// for each basis vector; when omitted those are derived from the generators.
    pub fn new(
        ring: &DpRing,
        d: usize,
        fil_gens: Vec<TildeColumn>,
        phi_on_fil: Vec<TildeColumn>,
        n_mat: RMatrix<TildeSElem>,
    ) -> Result<Self> {
        let p = ring.p();
        if d == 0 {
            return Err(Error::DimensionMismatch("rank must be positive".into()));
        }
        for (j, g) in fil_gens.iter().enumerate() {
            check_column(p, d, g, &format!("fil_gens[{j}]"))?;
        }
        for (j, g) in phi_on_fil.iter().enumerate() {
            check_column(p, d, g, &format!("phi_on_fil[{j}]"))?;
        }
        if n_mat.rows() != d || n_mat.cols() != d {
            return Err(Error::DimensionMismatch(format!("n_mat is {}x{}, expected {d}x{d}", n_mat.rows(), n_mat.cols())));
        }
        let k = fil_gens.len();
        let tr = TildeRing::new(ring.field().clone());
        let (phi_gens, phi_basis) = if phi_on_fil.len() == k + d {
            let mut g = phi_on_fil;
            let b = g.split_off(k);
            (g, b)
        } else if phi_on_fil.len() == k {
            let b = derive_basis_images(ring, &tr, d, &fil_gens, &phi_on_fil)?;
            (phi_on_fil, b)
        } else {
            return Err(Error::DimensionMismatch(format!(
                "phi_on_fil has {} columns, expected {k} or {}",
                phi_on_fil.len(),
                k + d
            )));
        };
        let pres = build_presentation(ring, &tr, d, &fil_gens, &phi_gens, &phi_basis);
        Ok(TildeModule { ring: ring.clone(), tr, d, fil_gens, phi_gens, phi_basis, n_mat, pres: Arc::new(pres) })
    }

    pub fn ring(&self) -> &DpRing {
        &self.ring
    }

    pub fn tilde_ring(&self) -> &TildeRing {
        &self.tr
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fil_gens(&self) -> &[TildeColumn] {
        &self.fil_gens
    }

    /// φ_r of each generator.
    pub fn phi_on_gens(&self) -> &[TildeColumn] {
        &self.phi_gens
    }

    /// φ_r(u^{er}·e_l).
    pub fn phi_on_basis(&self) -> &[TildeColumn] {
        &self.phi_basis
    }

    pub fn phi_on_fil(&self) -> Vec<TildeColumn> {
        self.phi_gens.iter().chain(&self.phi_basis).cloned().collect()
    }

    pub fn n_mat(&self) -> &RMatrix<TildeSElem> {
        &self.n_mat
    }

    pub(crate) fn presentation(&self) -> &FilPresentation {
        &self.pres
    }

    pub fn zero_col(&self) -> TildeColumn {
        vec![self.tr.zero(); self.d]
    }

    pub fn basis_vector(&self, l: usize) -> TildeColumn {
        unit_col(&self.tr, self.d, l)
    }

    pub fn u_shift(&self, x: &[TildeSElem], k: usize) -> TildeColumn {
        x.iter().map(|s| s.shift(k)).collect()
    }

    pub fn in_fil(&self, x: &[TildeSElem]) -> bool {
        self.pres.contains(&self.tr.flatten(x))
    }

    /// k-dimension of Fil^r M̃.
    pub fn fil_dim(&self) -> usize {
        self.pres.dim()
    }

    /// φ_r of an element of Fil^r M̃ given by its coordinates.
    pub fn phi_r(&self, x: &[TildeSElem]) -> Result<TildeColumn> {
        let v = self.pres.phi_r(&self.tr.flatten(x)).ok_or_else(|| Error::NotInFil {
            level: self.ring.r() as u32,
            detail: "element is not in Fil^r".into(),
        })?;
        Ok(self.tr.unflatten(&v))
    }

    /// `φ_r(Σ s_j g_j + Σ t_l u^{er} e_l) = Σ φ(s_j) φ_r(g_j) + Σ φ(t_l) φ_r(u^{er} e_l)`.
    pub fn apply_phi_r(&self, gen_coeffs: &[TildeSElem], basis_coeffs: &[TildeSElem]) -> Result<TildeColumn> {
        if gen_coeffs.len() != self.fil_gens.len() || basis_coeffs.len() != self.d {
            return Err(Error::DimensionMismatch("presentation coefficient count".into()));
        }
        let mut acc = self.zero_col();
        for (s, img) in gen_coeffs.iter().zip(&self.phi_gens).chain(basis_coeffs.iter().zip(&self.phi_basis)) {
            acc = col_add(&self.tr, &acc, &col_scale(&self.tr, &self.tr.phi(s), img));
        }
        Ok(acc)
    }

    /// Element of M̃ presented by S̃-coefficients on the generators and on `u^{er}e_l`.
    pub fn presented_element(&self, gen_coeffs: &[TildeSElem], basis_coeffs: &[TildeSElem]) -> TildeColumn {
        let er = self.ring.er();
        let mut acc = self.zero_col();
        for (s, g) in gen_coeffs.iter().zip(&self.fil_gens) {
            acc = col_add(&self.tr, &acc, &col_scale(&self.tr, s, g));
        }
        for (l, t) in basis_coeffs.iter().enumerate() {
            acc[l] = acc[l].add(self.tr.field(), &t.shift(er));
        }
        acc
    }

    /// Monodromy on M̃ by the Leibniz rule.
    pub fn monodromy(&self, x: &[TildeSElem]) -> TildeColumn {
        col_monodromy(&self.tr, &self.n_mat, x)
    }

    /// S̃-module generators of Fil^r: the listed ones, then `u^{er}e_l`.
    pub fn fil_module_generators(&self) -> Vec<TildeColumn> {
        let er = self.ring.er();
        let mut out = self.fil_gens.clone();
        out.extend((0..self.d).map(|l| self.u_shift(&self.basis_vector(l), er)));
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let f = self.tr.field();
        let mut rep = ValidationReport::new();
        rep.push(Check::pass_with("fil_contains_u_er_M", "u^{er}M is part of the presentation"));
        match self.pres.inconsistency() {
            None => rep.push(Check::pass("phi_r_well_defined")),
            Some((idx, defect)) => rep.push(Check::fail(
                "phi_r_well_defined",
                format!("linear relation #{idx} among Fil generators maps to {}", fmt_col(f, &self.tr.unflatten(&defect))),
            )),
        }
        let rank = self.pres.image_constant_rank();
        rep.push(if rank == self.d {
            Check::pass("phi_r_image_generates")
        } else {
            Check::fail("phi_r_image_generates", format!("image spans rank {rank} of {} mod u", self.d))
        });
        let e = self.ring.e();
        let c_pi = self.ring.c_pi();
        let mut stable = Ok(());
        let mut square = Ok(());
        for (idx, x) in self.fil_module_generators().iter().enumerate() {
            let y = self.u_shift(&self.monodromy(x), e);
            let Ok(lhs) = self.phi_r(&y) else {
                if stable.is_ok() {
                    stable = Err(format!("u^e N(generator #{idx}) = {} is not in Fil", fmt_col(f, &y)));
                }
                continue;
            };
            let phix = self.phi_r(x).expect("generator lies in Fil");
            let rhs: TildeColumn = self.monodromy(&phix).iter().map(|s| s.scale(f, c_pi)).collect();
            if lhs != rhs && square.is_ok() {
                square = Err(format!(
                    "generator #{idx}: φ_r(u^e N x) = {} but c_π N(φ_r x) = {}",
                    fmt_col(f, &lhs),
                    fmt_col(f, &rhs)
                ));
            }
        }
        rep.push(Check::from_result("u_e_N_preserves_fil", stable));
        rep.push(Check::from_result("phi_r_N_commutation", square));
        rep
    }

    /// The same object in the basis given by the columns of `b`.
    pub fn change_basis(&self, b: &RMatrix<TildeSElem>) -> Result<TildeModule> {
        let binv = b.inverse(&self.tr).ok_or(Error::NotAUnit)?;
        let er = self.ring.er();
        let gens: Vec<TildeColumn> = self.fil_gens.iter().map(|g| binv.mul_col(&self.tr, g)).collect();
        let imgs: Vec<TildeColumn> = self.phi_gens.iter().map(|g| binv.mul_col(&self.tr, g)).collect();
        let mut basis_imgs = Vec::with_capacity(self.d);
        let mut n_cols = Vec::with_capacity(self.d);
        for l in 0..self.d {
            let bl = b.col(l);
            basis_imgs.push(binv.mul_col(&self.tr, &self.phi_r(&self.u_shift(&bl, er))?));
            n_cols.push(binv.mul_col(&self.tr, &self.monodromy(&bl)));
        }
        let n_mat = RMatrix::from_cols(self.d, &n_cols);
        let mut phi = imgs;
        phi.extend(basis_imgs);
        TildeModule::new(&self.ring, self.d, gens, phi, n_mat)
    }

    /// Replaces the generators by `u^{n_i}e_i`, which must span the same Fil.
    pub(crate) fn with_diagonal_generators(&self, weights: &[usize]) -> Result<TildeModule> {
        let gens: Vec<TildeColumn> =
            weights.iter().enumerate().map(|(i, &n)| self.u_shift(&self.basis_vector(i), n)).collect();
        let mut phi = Vec::with_capacity(2 * self.d);
        for g in &gens {
            phi.push(self.phi_r(g)?);
        }
        phi.extend(self.phi_basis.iter().cloned());
        let m = TildeModule::new(&self.ring, self.d, gens, phi, self.n_mat.clone())?;
        if !(m.pres.contains_all(&self.pres) && self.pres.contains_all(&m.pres)) {
            return Err(Error::InvalidFil("diagonal generators do not span Fil^r".into()));
        }
        Ok(m)
    }

    /// Matrix over k of φ_r on the listed generators, constant terms only.
    pub fn phi_constant_matrix(&self) -> crate::linalg::Matrix {
        let cols: Vec<Vec<FieldElem>> =
            self.phi_gens.iter().map(|c| c.iter().map(|s| s.constant_term()).collect()).collect();
        crate::linalg::Matrix::from_cols(&cols)
    }

    pub fn is_monodromy_zero(&self) -> bool {
        (0..self.d).all(|l| col_is_zero(&self.tr, &self.n_mat.col(l)))
    }
}

pub(crate) fn fmt_col(f: &crate::gf::GaloisField, x: &[TildeSElem]) -> String {
    let parts: Vec<String> = x
        .iter()
        .map(|s| {
            let terms: Vec<String> = s
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, &c)| match i {
                    0 => f.fmt_elem(c),
                    1 => format!("{}u", f.fmt_elem(c)),
                    _ => format!("{}u^{i}", f.fmt_elem(c)),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join("+")
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// `φ_r(u^{er}e_l) = Σ σ(λ_{0,j}) φ_r(g_j)` from any expression `u^{er}e_l = Σ λ_{a,j} u^a g_j`.
fn derive_basis_images(
    ring: &DpRing,
    tr: &TildeRing,
    d: usize,
    gens: &[TildeColumn],
    imgs: &[TildeColumn],
) -> Result<Vec<TildeColumn>> {
    let f = ring.field();
    let p = ring.p();
    let er = ring.er();
    let mut solver = ColumnSolver::new(d * p);
    let mut index = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        for a in 0..p {
            let v: TildeColumn = g.iter().map(|s| s.shift(a)).collect();
            solver.insert(f, &tr.flatten(&v));
            index.push((a, j));
        }
    }
    (0..d)
        .map(|l| {
            let target: TildeColumn = unit_col(tr, d, l).iter().map(|s| s.shift(er)).collect();
            let lambda = solver.solve(f, &tr.flatten(&target)).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "u^{er}·e_{l} is not in the span of fil_gens; phi_on_fil must also list φ_r(u^(er)·e_l)"
                ))
            })?;
            let mut acc = vec![tr.zero(); d];
            for (&(a, j), &lam) in index.iter().zip(&lambda) {
                if a == 0 && !lam.is_zero() {
                    acc = col_add(tr, &acc, &col_scale(tr, &tr.from_scalar(f.frobenius(lam)), &imgs[j]));
                }
            }
            Ok(acc)
        })
        .collect()
}

fn build_presentation(
    ring: &DpRing,
    tr: &TildeRing,
    d: usize,
    gens: &[TildeColumn],
    phi_gens: &[TildeColumn],
    phi_basis: &[TildeColumn],
) -> FilPresentation {
    let p = ring.p();
    let er = ring.er();
    let zero = vec![FieldElem::ZERO; d * p];
    let mut spans = Vec::with_capacity(gens.len() * p);
    let mut images = Vec::with_capacity(gens.len() * p);
    for (g, img) in gens.iter().zip(phi_gens) {
        for a in 0..p {
            let v: TildeColumn = g.iter().map(|s| s.shift(a)).collect();
            spans.push(tr.flatten(&v));
            images.push(if a == 0 { tr.flatten(img) } else { zero.clone() });
        }
    }
    let mut high = vec![None; d * p];
    for (l, z) in phi_basis.iter().enumerate() {
        if er < p {
            high[l * p + er] = Some(tr.flatten(z));
        }
    }
    FilPresentation::new(ring.field(), d, p, er, spans, images, high)
}
