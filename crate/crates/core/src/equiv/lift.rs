//! Successive approximation: lifting objects and morphisms from S̃ to S₁.

use crate::cat::{check_morphism, AdaptedBasis, TildeModule, TildeMorphism};
use crate::dprings::{DpRing, S1Elem, TildeSElem};
use crate::error::{Error, Result};
use crate::linalg::ColumnSolver;
use crate::mat::{col_add, col_monodromy, col_scale, LocalRing, RMatrix};
use crate::report::{Check, ValidationReport};

use super::module::{fmt_s1col, functor_t, S1Column, S1Module};

const MAX_ROUNDS: usize = 16;

#[derive(Clone, Debug)]
pub struct LiftedObject {
    pub module: S1Module,
    /// The input rewritten in its adapted basis; `functor_t(module)` equals it.
    pub reduced: TildeModule,
    pub adapted: AdaptedBasis,
    /// Monodromy correction rounds run, including the final no-op one.
    pub rounds: usize,
}

fn section_col(ring: &DpRing, c: &[TildeSElem]) -> S1Column {
    c.iter().map(|s| ring.section(s)).collect()
}

fn section_mat(ring: &DpRing, m: &RMatrix<TildeSElem>) -> RMatrix<S1Elem> {
    m.map(|s| ring.section(s))
}

pub fn lift_object(mt: &TildeModule) -> Result<LiftedObject> {
    let ring = mt.ring().clone();
    let d = mt.d();
    let er = ring.er();
    let (ad, adapted) = mt.in_adapted_basis()?;
    let gens: Vec<S1Column> = adapted
        .weights
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut v = vec![S1Elem::zero(); d];
            v[i] = ring.u_pow(n);
            v
        })
        .collect();
    let xs: Vec<S1Column> = ad.phi_on_gens().iter().map(|c| section_col(&ring, c)).collect();
    // u^{er} ê_l = u^{er−n_l}·(u^{n_l} ê_l) forces φ_r(E^r ê_l) = φ(u^{er−n_l})·x̂_l.
    let zs: Vec<S1Column> =
        adapted.weights.iter().zip(&xs).map(|(&n, x)| col_scale(&ring, &ring.phi_u_pow(er - n), x)).collect();
    let big_x = RMatrix::from_cols(d, &xs);
    let x_inv = big_x
        .inverse(&ring)
        .ok_or_else(|| Error::InvalidObject("φ_r-images of the adapted generators do not form a basis".into()))?;
    let mut phi = xs.clone();
    phi.extend(zs);
    let n0 = section_mat(&ring, ad.n_mat());
    let shell = S1Module::new(&ring, d, gens.clone(), phi.clone(), n0.clone())?;
    let ue = ring.u_pow(ring.e());
    let step = |nk: &RMatrix<S1Elem>| -> Result<RMatrix<S1Elem>> {
        // Force c·N(x̂_i) = φ_r(E·N(ĝ_i)) and extend to the basis by Leibniz.
        let mut vs = Vec::with_capacity(d);
        for g in &gens {
            let y = col_scale(&ring, &ue, &col_monodromy(&ring, nk, g));
            let img = shell.phi_r(&y).map_err(|_| {
                Error::InvalidObject(format!("E·N(generator) = {} leaves Fil^r", fmt_s1col(&ring, &y)))
            })?;
            vs.push(col_scale(&ring, ring.c_inv(), &img));
        }
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut acc = vec![S1Elem::zero(); d];
            for i in 0..d {
                let a = x_inv.get(i, j);
                acc = col_add(&ring, &acc, &col_scale(&ring, &ring.s1_n(a), &xs[i]));
                acc = col_add(&ring, &acc, &col_scale(&ring, a, &vs[i]));
            }
            cols.push(acc);
        }
        Ok(RMatrix::from_cols(d, &cols))
    };
    let mut n = n0;
    let mut rounds = 0;
    loop {
        let next = step(&n)?;
        rounds += 1;
        let done = next == n;
        n = next;
        if rounds >= 2 && done {
            break;
        }
        if rounds > 2 && ring.r() > 0 {
            return Err(Error::LiftInconsistent("monodromy corrections did not stabilize after two rounds".into()));
        }
        if rounds >= MAX_ROUNDS {
            return Err(Error::LiftInconsistent(format!("monodromy corrections did not stabilize in {MAX_ROUNDS} rounds")));
        }
    }
    let module = S1Module::new(&ring, d, gens, phi, n)?;
    let rep = module.validate();
    if !rep.all_pass() {
        return Err(Error::InvalidObject(format!("lifted object fails validation:\n{}", rep.to_text())));
    }
    Ok(LiftedObject { module, reduced: ad, adapted, rounds })
}

pub fn apply_s1(ring: &DpRing, f: &RMatrix<S1Elem>, x: &[S1Elem]) -> S1Column {
    f.mul_col(ring, x)
}

/// Lifts a morphism `T(M) → T(M')` to the unique S₁-linear morphism `M → M'`.
pub fn lift_morphism(src: &S1Module, tgt: &S1Module, ft: &TildeMorphism) -> Result<RMatrix<S1Elem>> {
    let ring = src.ring().clone();
    if tgt.ring() != &ring || ft.source.ring() != &ring {
        return Err(Error::DimensionMismatch("objects have different parameters".into()));
    }
    if ft.mat.rows() != tgt.d() || ft.mat.cols() != src.d() {
        return Err(Error::DimensionMismatch("morphism matrix does not match the ranks".into()));
    }
    let rep = check_morphism(ft);
    if !rep.all_pass() {
        let w: Vec<String> = rep.failures().map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())).collect();
        return Err(Error::NotAMorphism(w.join("; ")));
    }
    let d = src.d();
    // Fil elements whose φ_r-images reduce to a basis of M mod the maximal ideal.
    let mut picked: Vec<(S1Column, S1Column)> = Vec::with_capacity(d);
    let mut solver = ColumnSolver::new(d);
    for (x, img) in src.phi_pairs() {
        let consts: Vec<_> = img.iter().map(|s| s.constant_term()).collect();
        if solver.insert(ring.field(), &consts).is_none() {
            picked.push((x, img));
            if picked.len() == d {
                break;
            }
        }
    }
    if picked.len() < d {
        return Err(Error::LiftInconsistent("φ_r-images of the source do not generate it".into()));
    }
    let cols: Vec<S1Column> = picked.iter().map(|(_, i)| i.clone()).collect();
    let phi_inv = RMatrix::from_cols(d, &cols)
        .inverse(&ring)
        .ok_or_else(|| Error::LiftInconsistent("φ_r-image matrix is not invertible".into()))?;
    let step = |f: &RMatrix<S1Elem>| -> Result<RMatrix<S1Elem>> {
        let mut psi = Vec::with_capacity(d);
        for (x, _) in &picked {
            let fx = f.mul_col(&ring, x);
            psi.push(tgt.phi_r(&fx).map_err(|_| {
                Error::LiftInconsistent(format!("f(x) = {} is not in the target Fil^r", fmt_s1col(&ring, &fx)))
            })?);
        }
        Ok(RMatrix::from_cols(tgt.d(), &psi).mul(&ring, &phi_inv))
    };
    let f0 = section_mat(&ring, &ft.mat);
    let f1 = step(&f0)?;
    let f2 = step(&f1)?;
    if step(&f2)? != f2 {
        return Err(Error::LiftInconsistent("a third approximation step changed the map".into()));
    }
    let mut rep = check_s1_morphism(src, tgt, &f2);
    let proj = f2.map(|s| ring.project_tilde(s));
    rep.push(if proj == ft.mat {
        Check::pass("reduces_to_input")
    } else {
        Check::fail("reduces_to_input", "lift does not reduce to the given morphism modulo κ")
    });
    if !rep.all_pass() {
        let w: Vec<String> = rep.failures().map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())).collect();
        return Err(Error::LiftInconsistent(w.join("; ")));
    }
    Ok(f2)
}

pub fn check_s1_morphism(src: &S1Module, tgt: &S1Module, f: &RMatrix<S1Elem>) -> ValidationReport {
    let ring = src.ring();
    let mut rep = ValidationReport::new();
    let mut fil = Ok(());
    let mut phi = Ok(());
    for (idx, x) in src.fil_module_generators().iter().enumerate() {
        let fx = f.mul_col(ring, x);
        match tgt.phi_r(&fx) {
            Err(_) => {
                if fil.is_ok() {
                    fil = Err(format!("image of Fil generator #{idx} is not in Fil'"));
                }
            }
            Ok(lhs) => {
                let rhs = f.mul_col(ring, &src.phi_r(x).expect("generator lies in Fil"));
                if lhs != rhs && phi.is_ok() {
                    phi = Err(format!(
                        "generator #{idx}: φ_r'(f x) = {} but f(φ_r x) = {}",
                        fmt_s1col(ring, &lhs),
                        fmt_s1col(ring, &rhs)
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
        let lhs = tgt.monodromy(&f.mul_col(ring, &e));
        let rhs = f.mul_col(ring, &src.monodromy(&e));
        if lhs != rhs {
            n = Err(format!("ê_{l}: N'(f e) = {} but f(N e) = {}", fmt_s1col(ring, &lhs), fmt_s1col(ring, &rhs)));
            break;
        }
    }
    rep.push(Check::from_result("commutes_with_N", n));
    rep
}

/// `λ·I` over S₁.
pub fn scalar_matrix<R: LocalRing>(ring: &R, d: usize, c: crate::gf::FieldElem) -> RMatrix<R::Elem> {
    let mut m = RMatrix::zeros(ring, d, d);
    for i in 0..d {
        m.set(i, i, ring.from_scalar(c));
    }
    m
}

fn error_check(name: &str, e: &Error) -> Check {
    Check::fail(name, e.to_string())
}

/// Lifts `m` and compares the reduction of the lift with `m`: rank, weights,
/// φ_r data in the adapted basis, and an isomorphism back to the input.
pub fn round_trip_report(m: &TildeModule) -> (Option<LiftedObject>, ValidationReport) {
    let mut rep = ValidationReport::new();
    let lifted = match lift_object(m) {
        Ok(l) => l,
        Err(e) => {
            rep.push(error_check("lift_object", &e));
            return (None, rep);
        }
    };
    rep.push(Check::pass_with("lift_object", format!("{} monodromy rounds", lifted.rounds)));
    let v = lifted.module.validate();
    rep.push(if v.all_pass() {
        Check::pass("lifted_valid")
    } else {
        Check::fail("lifted_valid", v.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "))
    });
    let back = match functor_t(&lifted.module) {
        Ok(b) => b,
        Err(e) => {
            rep.push(error_check("round_trip", &e));
            return (Some(lifted), rep);
        }
    };
    rep.push(if back.d() == m.d() {
        Check::pass("round_trip_rank")
    } else {
        Check::fail("round_trip_rank", format!("rank {} after the round trip, {} before", back.d(), m.d()))
    });
    let weights = crate::cat::adapted_basis(&back).map(|a| a.weights);
    rep.push(match weights {
        Ok(w) if w == lifted.adapted.weights => Check::pass_with("round_trip_weights", format!("{w:?}")),
        Ok(w) => Check::fail("round_trip_weights", format!("{w:?} after the round trip, {:?} before", lifted.adapted.weights)),
        Err(e) => error_check("round_trip_weights", &e),
    });
    rep.push(if back == lifted.reduced {
        Check::pass("round_trip_phi")
    } else {
        Check::fail("round_trip_phi", "φ_r or N data differ after the round trip")
    });
    // The adapted basis change is itself an isomorphism from the reduced form to the input.
    let iso = TildeMorphism::new(lifted.reduced.clone(), m.clone(), lifted.adapted.basis_change.clone())
        .map(|f| check_morphism(&f));
    rep.push(match iso {
        Ok(r) if r.all_pass() => Check::pass("isomorphic_to_input"),
        Ok(r) => Check::fail("isomorphic_to_input", r.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", ")),
        Err(e) => error_check("isomorphic_to_input", &e),
    });
    (Some(lifted), rep)
}

/// Lifts the given prime-field scalars and zero on a lifted object.
pub fn scalar_lift_report(lifted: &LiftedObject, scalars: &[u32]) -> ValidationReport {
    let red = &lifted.reduced;
    let s1 = &lifted.module;
    let ring = s1.ring();
    let t = red.tilde_ring();
    let mut rep = ValidationReport::new();
    let mut one = |name: String, c: crate::gf::FieldElem| {
        let ft = TildeMorphism::new(red.clone(), red.clone(), scalar_matrix(t, red.d(), c));
        let res = ft.and_then(|ft| lift_morphism(s1, s1, &ft));
        rep.push(match res {
            Ok(f) if f == scalar_matrix(ring, s1.d(), c) => {
                let ch = check_s1_morphism(s1, s1, &f);
                if ch.all_pass() {
                    Check::pass(name)
                } else {
                    Check::fail(name, ch.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "))
                }
            }
            Ok(_) => Check::fail(name, "lift is not the scalar matrix"),
            Err(e) => error_check(&name, &e),
        });
    };
    one("zero_lifts_to_zero".into(), ring.field().zero());
    for &c in scalars {
        one(format!("scalar_{c}"), ring.field().from_int(c as i64));
    }
    rep
}

#[derive(Clone, Debug)]
pub struct LiftedMorphism {
    pub source: LiftedObject,
    pub target: LiftedObject,
    /// Matrix between the adapted bases of the lifted objects.
    pub matrix: RMatrix<S1Elem>,
}

/// Lifts both objects of `f`, rewrites `f` in their adapted bases and lifts it.
pub fn lift_tilde_morphism(f: &TildeMorphism) -> Result<LiftedMorphism> {
    let source = lift_object(&f.source)?;
    let target = lift_object(&f.target)?;
    let t = f.source.tilde_ring();
    let tinv = target
        .adapted
        .basis_change
        .inverse(t)
        .ok_or_else(|| Error::InvalidObject("adapted basis change is singular".into()))?;
    let mat = tinv.mul(t, &f.mat).mul(t, &source.adapted.basis_change);
    let reduced = TildeMorphism::new(source.reduced.clone(), target.reduced.clone(), mat)?;
    let matrix = lift_morphism(&source.module, &target.module, &reduced)?;
    Ok(LiftedMorphism { source, target, matrix })
}
