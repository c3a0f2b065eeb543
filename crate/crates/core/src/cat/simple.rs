use crate::dprings::{DpRing, TildeSElem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::mat::{LocalRing, RMatrix, TildeRing};

use super::module::{TildeColumn, TildeModule};

/// Rank-d object with `Fil^r = ⊕ u^{n_i} S̃ e_i`, `φ_r(u^{n_i}e_i) = Σ_j G_{ji} e_j`
/// and `N = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleObject {
    ring: DpRing,
    weights: Vec<usize>,
    g: Matrix,
    cyclic: bool,
}

/// The matrix with `G[(i+1) % d][i] = 1`, i.e. `φ_r(u^{n_i}e_i) = e_{i+1}`.
pub fn cyclic_matrix(ring: &DpRing, d: usize) -> Matrix {
    let f = ring.field();
    let mut g = Matrix::zeros(d, d);
    for i in 0..d {
        g.set((i + 1) % d, i, f.one());
    }
    g
}

impl SimpleObject {
    pub fn new(ring: &DpRing, weights: Vec<usize>, g: Matrix, cyclic: bool) -> Result<Self> {
        let d = weights.len();
        if d == 0 {
            return Err(Error::DimensionMismatch("at least one weight is required".into()));
        }
        let er = ring.er();
        if let Some(&w) = weights.iter().find(|&&w| w > er) {
            return Err(Error::WeightOutOfRange { weight: w as u32, bound: er as u32 });
        }
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch(format!("G is {}x{}, expected {d}x{d}", g.rows(), g.cols())));
        }
        if g.inverse(ring.field()).is_none() {
            return Err(Error::SingularG);
        }
        if cyclic && g != cyclic_matrix(ring, d) {
            return Err(Error::InvalidInput("cyclic flag set but G is not the cyclic permutation matrix".into()));
        }
        Ok(SimpleObject { ring: ring.clone(), weights, g, cyclic })
    }

    pub fn cyclic(ring: &DpRing, weights: Vec<usize>) -> Result<Self> {
        let g = cyclic_matrix(ring, weights.len());
        Self::new(ring, weights, g, true)
    }

    pub fn ring(&self) -> &DpRing {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn to_module(&self) -> TildeModule {
        make_simple(&self.ring, &self.weights, &self.g).expect("validated simple data")
    }
}

/// Builds the module of a simple object without cyclicity requirements.
pub fn make_simple(ring: &DpRing, weights: &[usize], g: &Matrix) -> Result<TildeModule> {
    let d = weights.len();
    let tr = TildeRing::new(ring.field().clone());
    let er = ring.er();
    if g.rows() != d || g.cols() != d {
        return Err(Error::DimensionMismatch(format!("G is {}x{}, expected {d}x{d}", g.rows(), g.cols())));
    }
    if let Some(&w) = weights.iter().find(|&&w| w > er) {
        return Err(Error::WeightOutOfRange { weight: w as u32, bound: er as u32 });
    }
    let col = |i: usize| -> TildeColumn { g.col(i).into_iter().map(|c| tr.from_scalar(c)).collect() };
    let mut gens = Vec::with_capacity(d);
    let mut phi = Vec::with_capacity(2 * d);
    for (i, &n) in weights.iter().enumerate() {
        let mut v = vec![tr.zero(); d];
        v[i] = TildeSElem::u_pow(ring.field(), n);
        gens.push(v);
        phi.push(col(i));
    }
    for (i, &n) in weights.iter().enumerate() {
        phi.push(if n == er { col(i) } else { vec![tr.zero(); d] });
    }
    TildeModule::new(ring, d, gens, phi, RMatrix::zeros(&tr, d, d))
}
