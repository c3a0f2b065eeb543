use crate::dprings::TildeSElem;
use crate::error::{Error, Result};
use crate::mat::{LocalRing, RMatrix, TildeRing};
use crate::report::{Check, ValidationReport};

use super::module::{fmt_col, TildeColumn, TildeModule};

/// An S̃-linear map given by its matrix (columns are images of the source basis).
#[derive(Clone, Debug)]
pub struct TildeMorphism {
    pub source: TildeModule,
    pub target: TildeModule,
    pub mat: RMatrix<TildeSElem>,
}

impl TildeMorphism {
    pub fn new(source: TildeModule, target: TildeModule, mat: RMatrix<TildeSElem>) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::DimensionMismatch("source and target have different parameters".into()));
        }
        if mat.rows() != target.d() || mat.cols() != source.d() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                target.d(),
                source.d()
            )));
        }
        Ok(TildeMorphism { source, target, mat })
    }

    fn tr(&self) -> &TildeRing {
        self.source.tilde_ring()
    }

    pub fn apply(&self, x: &[TildeSElem]) -> TildeColumn {
        self.mat.mul_col(self.tr(), x)
    }
}

pub fn check_morphism(f: &TildeMorphism) -> ValidationReport {
    let field = f.tr().field().clone();
    let (src, tgt) = (&f.source, &f.target);
    let mut rep = ValidationReport::new();
    let gens = src.fil_module_generators();
    let mut fil = Ok(());
    let mut phi = Ok(());
    for (idx, x) in gens.iter().enumerate() {
        let fx = f.apply(x);
        match tgt.phi_r(&fx) {
            Err(_) => {
                if fil.is_ok() {
                    fil = Err(format!("image of Fil generator #{idx} is {} which is not in Fil'", fmt_col(&field, &fx)));
                }
            }
            Ok(lhs) => {
                let rhs = f.apply(&src.phi_r(x).expect("generator lies in Fil"));
                if lhs != rhs && phi.is_ok() {
                    phi = Err(format!(
                        "generator #{idx}: φ_r'(f x) = {} but f(φ_r x) = {}",
                        fmt_col(&field, &lhs),
                        fmt_col(&field, &rhs)
                    ));
                }
            }
        }
    }
    rep.push(Check::from_result("preserves_fil", fil));
    rep.push(Check::from_result("commutes_with_phi_r", phi));
    let mut n = Ok(());
    for l in 0..src.d() {
        let e = src.basis_vector(l);
        let lhs = tgt.monodromy(&f.apply(&e));
        let rhs = f.apply(&src.monodromy(&e));
        if lhs != rhs {
            n = Err(format!("e_{l}: N'(f e) = {} but f(N e) = {}", fmt_col(&field, &lhs), fmt_col(&field, &rhs)));
            break;
        }
    }
    rep.push(Check::from_result("commutes_with_N", n));
    rep
}
