//! The filtration `Fil^t M̃ = {x : u^{e(r−t)} x ∈ Fil^r M̃}` for `0 ≤ t ≤ r`
//! together with `φ_t = c_π^{t−r} φ_r(u^{e(r−t)} ·)`.

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::linalg::ColumnSolver;
use crate::mat::LocalRing;

use super::module::{TildeColumn, TildeModule};

pub struct AdmissibleFiltration<'a> {
    module: &'a TildeModule,
    t: usize,
    shift: usize,
    basis: Vec<Vec<FieldElem>>,
    solver: ColumnSolver,
}

pub fn admissible_filtration(m: &TildeModule, t: usize) -> Result<AdmissibleFiltration<'_>> {
    let r = m.ring().r();
    if t > r {
        return Err(Error::params("t", format!("must be at most r = {r}")));
    }
    let f = m.tilde_ring().field();
    let p = m.ring().p();
    let dim = m.d() * p;
    let shift = m.ring().e() * (r - t);
    let pres = m.presentation();
    let spans = pres.spans();
    // Relations Σ μ_b span_b + Σ λ_c low(u^shift e_c) = 0 on the low coordinates
    // give exactly the x = Σ λ_c e_c with u^shift x ∈ Fil^r.
    let mut rel = ColumnSolver::new(pres.low_part(&vec![FieldElem::ZERO; dim]).len());
    for s in spans {
        rel.insert(f, &pres.low_part(s));
    }
    let mut basis = Vec::new();
    let mut solver = ColumnSolver::new(dim);
    for c in 0..dim {
        let (l, i) = (c / p, c % p);
        let mut y = vec![FieldElem::ZERO; dim];
        if i + shift < p {
            y[l * p + i + shift] = f.one();
        }
        if let Some(k) = rel.insert(f, &pres.low_part(&y)) {
            let mut x = k[spans.len()..].to_vec();
            x.resize(dim, FieldElem::ZERO);
            solver.insert(f, &x);
            basis.push(x);
        }
    }
    Ok(AdmissibleFiltration { module: m, t, shift, basis, solver })
}

impl AdmissibleFiltration<'_> {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// k-basis of Fil^t, flattened component-major.
    pub fn k_basis(&self) -> &[Vec<FieldElem>] {
        &self.basis
    }

    pub fn contains(&self, x: &[crate::dprings::TildeSElem]) -> bool {
        let tr = self.module.tilde_ring();
        self.solver.contains(tr.field(), &tr.flatten(x))
    }

    pub fn phi_t(&self, x: &[crate::dprings::TildeSElem]) -> Result<TildeColumn> {
        if !self.contains(x) {
            return Err(Error::NotInFil { level: self.t as u32, detail: "element is not in Fil^t".into() });
        }
        let m = self.module;
        let f = m.tilde_ring().field();
        let y = m.u_shift(x, self.shift);
        let c = f.inv(f.pow(m.ring().c_pi(), (m.ring().r() - self.t) as u64)).expect("c_π is a unit");
        Ok(m.phi_r(&y)?.iter().map(|s| s.scale(f, c)).collect())
    }
}
