use proptest::prelude::*;

use super::*;
use crate::dprings::{DpRing, RingParams, TildeSElem};
use crate::gf::FieldElem;
use crate::linalg::Matrix;
use crate::mat::{LocalRing, RMatrix, TildeRing};

fn ring(p: u32, m: u32, e: usize, r: usize) -> DpRing {
    DpRing::new(RingParams::standard(p, m, e as u32, r as u32)).unwrap()
}

fn up(ring: &DpRing, coeffs: &[u32]) -> TildeSElem {
    let f = ring.field();
    let mut v = TildeSElem::zero(ring.p());
    for (i, &c) in coeffs.iter().enumerate() {
        v.0[i] = f.from_int(c as i64);
    }
    v
}

fn tr(ring: &DpRing) -> TildeRing {
    TildeRing::new(ring.field().clone())
}

#[test]
fn simple_cyclic_p5_e2_r1() {
    let r = ring(5, 1, 2, 1);
    let s = SimpleObject::cyclic(&r, vec![1, 2]).unwrap();
    let m = s.to_module();
    let rep = m.validate();
    assert!(rep.all_pass(), "{}", rep.to_text());
    let t = tr(&r);
    let e1 = m.basis_vector(0);
    let e2 = m.basis_vector(1);
    assert_eq!(m.phi_r(&m.u_shift(&e1, 1)).unwrap(), e2);
    assert_eq!(m.phi_r(&m.u_shift(&e2, 2)).unwrap(), e1);
    assert_eq!(m.phi_r(&m.u_shift(&e1, 2)).unwrap(), m.zero_col());
    // apply_phi_r on the presentation u·(u e₁)
    let u = TildeSElem::u_pow(r.field(), 1);
    let out = m.apply_phi_r(&[u, t.zero()], &[t.zero(), t.zero()]).unwrap();
    assert_eq!(out, m.zero_col());
    assert!(!m.in_fil(&e1));
    assert_eq!(m.apply_phi_r(&[t.zero(), t.zero()], &[t.zero(), t.zero()]).unwrap(), m.zero_col());
}

#[test]
fn unit_object_r0() {
    let r = ring(5, 1, 1, 0);
    let s = SimpleObject::new(&r, vec![0], Matrix::identity(r.field(), 1), true).unwrap();
    let m = s.to_module();
    assert!(m.validate().all_pass());
    let e = m.basis_vector(0);
    assert!(m.in_fil(&e));
    assert_eq!(m.phi_r(&e).unwrap(), e);
}

#[test]
fn simple_errors() {
    let r = ring(5, 1, 1, 2);
    assert!(matches!(SimpleObject::cyclic(&r, vec![3]), Err(crate::Error::WeightOutOfRange { weight: 3, bound: 2 })));
    let z = Matrix::zeros(1, 1);
    assert!(matches!(SimpleObject::new(&r, vec![1], z, false), Err(crate::Error::SingularG)));
    let g = Matrix::from_rows(vec![vec![r.field().from_int(2)]]);
    assert!(SimpleObject::new(&r, vec![1], g.clone(), true).is_err());
    assert!(SimpleObject::new(&r, vec![1], g, false).unwrap().to_module().validate().all_pass());
}

#[test]
fn minimal_fil_passes_and_zero_phi_fails() {
    let r = ring(5, 1, 1, 2);
    let t = tr(&r);
    let e = |l| crate::mat::unit_col(&t, 2, l);
    let n = RMatrix::zeros(&t, 2, 2);
    let m = TildeModule::new(&r, 2, vec![], vec![e(1), e(0)], n.clone()).unwrap();
    assert!(m.validate().all_pass(), "{}", m.validate().to_text());
    let zero = vec![t.zero(); 2];
    let m0 = TildeModule::new(&r, 2, vec![], vec![zero.clone(), zero], n).unwrap();
    let rep = m0.validate();
    assert!(!rep.get("phi_r_image_generates").unwrap().pass);
    assert!(rep.get("phi_r_well_defined").unwrap().pass);
}

#[test]
fn missing_basis_images_is_input_error() {
    let r = ring(5, 1, 1, 2);
    let t = tr(&r);
    // Fil generated by u^3 e together with u^2 e: the listed generator does not cover u^{er}e.
    let g = vec![TildeSElem::u_pow(r.field(), 3)];
    let res = TildeModule::new(&r, 1, vec![g], vec![vec![t.one()]], RMatrix::zeros(&t, 1, 1));
    assert!(matches!(res, Err(crate::Error::InvalidInput(_))));
}

#[test]
fn inconsistent_phi_detected() {
    // Generators u e and u^2 e with φ_r(u^2 e) = e, but φ_r(u·(u e)) = φ(u)φ_r(u e) = 0.
    let r = ring(5, 1, 1, 2);
    let t = tr(&r);
    let f = r.field();
    let gens = vec![vec![TildeSElem::u_pow(f, 1)], vec![TildeSElem::u_pow(f, 2)]];
    let m = TildeModule::new(&r, 1, gens, vec![vec![t.one()], vec![t.one()]], RMatrix::zeros(&t, 1, 1)).unwrap();
    let rep = m.validate();
    assert!(!rep.get("phi_r_well_defined").unwrap().pass);
    assert!(rep.get("phi_r_well_defined").unwrap().witness.is_some());
}

#[test]
fn adapted_basis_example() {
    let r = ring(5, 1, 1, 2);
    let t = tr(&r);
    let gens = vec![vec![up(&r, &[0, 1]), t.zero()], vec![t.one(), up(&r, &[0, 0, 1])]];
    // φ_r data is irrelevant for the Fil decomposition.
    let zero = vec![t.zero(), t.zero()];
    let m = TildeModule::new(&r, 2, gens, vec![zero.clone(); 4], RMatrix::zeros(&t, 2, 2)).unwrap();
    let ab = adapted_basis(&m).unwrap();
    assert_eq!(ab.weights, vec![0, 2]);
    assert_eq!(ab.basis_vector(0), vec![t.one(), up(&r, &[0, 0, 1])]);
    check_decomposition(&m, &ab);
}

#[test]
fn adapted_basis_trivial_cases() {
    let r = ring(7, 1, 2, 2);
    let t = tr(&r);
    let zero = vec![t.zero(), t.zero()];
    let m = TildeModule::new(&r, 2, vec![], vec![zero.clone(), zero.clone()], RMatrix::zeros(&t, 2, 2)).unwrap();
    let ab = adapted_basis(&m).unwrap();
    assert_eq!(ab.weights, vec![4, 4]);
    assert_eq!(ab.basis_change, RMatrix::identity(&t, 2));
    let e = |l| crate::mat::unit_col(&t, 2, l);
    let full = TildeModule::new(&r, 2, vec![e(0), e(1)], vec![zero.clone(), zero], RMatrix::zeros(&t, 2, 2)).unwrap();
    assert_eq!(adapted_basis(&full).unwrap().weights, vec![0, 0]);
}

/// Two-way membership of the decomposition against the original Fil, by
/// normal forms of k-spans.
fn check_decomposition(m: &TildeModule, ab: &AdaptedBasis) {
    let t = m.tilde_ring();
    let f = t.field();
    let p = m.ring().p();
    let span_of = |gens: &[TildeColumn]| -> Vec<Vec<FieldElem>> {
        let mut out = Vec::new();
        for g in gens {
            for a in 0..p {
                out.push(t.flatten(&m.u_shift(g, a)));
            }
        }
        out
    };
    let rep = verify_adapted(m, ab);
    assert!(rep.all_pass(), "{}", rep.to_text());
    let decomposed: Vec<TildeColumn> =
        ab.weights.iter().enumerate().map(|(i, &n)| m.u_shift(&ab.basis_vector(i), n)).collect();
    let e = m.ring().e();
    if e * (m.ring().r() + 1) <= p {
        let filp = span_of(&decomposed);
        let ufil: Vec<Vec<FieldElem>> = decomposed.iter().flat_map(|g| span_of(&[m.u_shift(g, e)])).collect();
        let dim = crate::linalg::span_rank(f, &filp, m.d() * p) - crate::linalg::span_rank(f, &ufil, m.d() * p);
        assert_eq!(dim, m.d() * e);
    }
}

#[test]
fn morphism_examples() {
    let r = ring(5, 2, 2, 1);
    let t = tr(&r);
    let f = r.field();
    let m = SimpleObject::cyclic(&r, vec![1, 2]).unwrap().to_module();
    let id = TildeMorphism::new(m.clone(), m.clone(), RMatrix::identity(&t, 2)).unwrap();
    assert!(check_morphism(&id).all_pass());
    let scalar = |c: FieldElem| {
        let mut s = RMatrix::zeros(&t, 2, 2);
        for i in 0..2 {
            s.set(i, i, t.from_scalar(c));
        }
        TildeMorphism::new(m.clone(), m.clone(), s).unwrap()
    };
    assert!(check_morphism(&scalar(f.from_int(3))).all_pass());
    let lam = f.from_coeffs(&[0, 1]).unwrap();
    let rep = check_morphism(&scalar(lam));
    assert!(rep.get("preserves_fil").unwrap().pass);
    assert!(!rep.get("commutes_with_phi_r").unwrap().pass);
    assert!(TildeMorphism::new(m.clone(), m, RMatrix::identity(&t, 1)).is_err());
}

#[test]
fn filtration_examples() {
    let r = ring(7, 1, 2, 2);
    let m = SimpleObject::cyclic(&r, vec![1, 3, 4]).unwrap().to_module();
    let top = admissible_filtration(&m, 2).unwrap();
    assert_eq!(top.dim(), m.fil_dim());
    assert_eq!(admissible_filtration(&m, 0).unwrap().dim(), 3 * 7);
    assert!(admissible_filtration(&m, 3).is_err());
    let mid = admissible_filtration(&m, 1).unwrap();
    // weights shift down by e(r-t) = 2: (0, 1, 2)
    assert_eq!(mid.dim(), 7 + 6 + 5);
    let e2 = m.basis_vector(1);
    assert!(mid.contains(&m.u_shift(&e2, 1)));
    assert!(!mid.contains(&e2));
    // φ_1(u e₂) = c_π^{-1} φ_2(u^3 e₂) = c_π^{-1} e₃
    let f = r.field();
    let ci = f.inv(r.c_pi()).unwrap();
    let expect: Vec<TildeSElem> = m.basis_vector(2).iter().map(|s| s.scale(f, ci)).collect();
    assert_eq!(mid.phi_t(&m.u_shift(&e2, 1)).unwrap(), expect);
    assert!(mid.phi_t(&e2).is_err());
}

#[test]
fn change_basis_round_trip() {
    let r = ring(5, 1, 1, 3);
    let t = tr(&r);
    let m = SimpleObject::cyclic(&r, vec![1, 3]).unwrap().to_module();
    let b = RMatrix::from_rows(vec![vec![t.one(), up(&r, &[0, 2, 1])], vec![up(&r, &[0, 0, 3]), up(&r, &[4, 1])]]);
    let m2 = m.change_basis(&b).unwrap();
    assert!(m2.validate().all_pass(), "{}", m2.validate().to_text());
    let (m3, ab) = m2.in_adapted_basis().unwrap();
    let mut w = ab.weights.clone();
    w.sort();
    assert_eq!(w, vec![1, 3]);
    assert!(m3.validate().all_pass());
    check_decomposition(&m2, &ab);
}

fn admissible() -> impl Strategy<Value = (u32, usize, usize)> {
    prop_oneof![Just(3u32), Just(5), Just(7)].prop_flat_map(|p| {
        (Just(p), 1usize..=3).prop_flat_map(move |(p, e)| {
            let rmax = (p as usize - 2) / e;
            (Just(p), Just(e), 0..=rmax)
        })
    })
    .prop_filter("er ≤ p-2", |(p, e, r)| e * r <= *p as usize - 2)
}

fn random_simple() -> impl Strategy<Value = (u32, usize, usize, Vec<usize>, Vec<u32>)> {
    admissible().prop_flat_map(|(p, e, r)| {
        let er = e * r;
        (1usize..=3).prop_flat_map(move |d| {
            (Just(p), Just(e), Just(r), prop::collection::vec(0..=er, d), prop::collection::vec(0..p, d * d))
        })
    })
}

fn matrix_from(ring: &DpRing, d: usize, g: &[u32]) -> Matrix {
    let f = ring.field();
    Matrix::from_rows((0..d).map(|i| (0..d).map(|j| f.from_int(g[i * d + j] as i64)).collect()).collect())
}

fn random_unimodular(t: &TildeRing, d: usize, coeffs: &[u32]) -> RMatrix<TildeSElem> {
    // unit lower triangular times upper triangular with unit diagonal
    let f = t.field();
    let p = t.p();
    let elem = |k: usize| {
        let mut v = TildeSElem::zero(p);
        for a in 0..p {
            v.0[a] = f.from_int(coeffs[(k * p + a) % coeffs.len()] as i64);
        }
        v
    };
    let mut lo = RMatrix::identity(t, d);
    let mut hi = RMatrix::identity(t, d);
    let mut k = 0;
    for i in 0..d {
        for j in 0..d {
            if i > j {
                lo.set(i, j, elem(k));
            } else if i < j {
                hi.set(i, j, elem(k));
            }
            k += 1;
        }
    }
    lo.mul(t, &hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn simple_objects_validate((p, e, r, w, g) in random_simple()) {
        let ring = ring(p, 1, e, r);
        let d = w.len();
        let gm = matrix_from(&ring, d, &g);
        prop_assume!(gm.inverse(ring.field()).is_some());
        let s = SimpleObject::new(&ring, w.clone(), gm, false).unwrap();
        let m = s.to_module();
        prop_assert!(m.validate().all_pass());
        prop_assert!(m.is_monodromy_zero());
        let ab = adapted_basis(&m).unwrap();
        let mut a = ab.weights.clone();
        let mut b = w.clone();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        check_decomposition(&m, &ab);
    }

    #[test]
    fn presentation_independence((p, e, r, w, _g) in random_simple(), coeffs in prop::collection::vec(0u32..7, 30), b in prop::collection::vec(0u32..7, 20)) {
        let ring = ring(p, 1, e, r);
        let d = w.len();
        let t = tr(&ring);
        let m = SimpleObject::cyclic(&ring, w).unwrap().to_module();
        let m = m.change_basis(&random_unimodular(&t, d, &b)).unwrap();
        prop_assert!(m.validate().all_pass());
        let pp = p as usize;
        let elem = |k: usize| {
            let mut v = TildeSElem::zero(pp);
            for a in 0..pp { v.0[a] = ring.field().from_int(coeffs[(k * pp + a) % coeffs.len()] as i64); }
            v
        };
        let s: Vec<TildeSElem> = (0..d).map(elem).collect();
        let tt: Vec<TildeSElem> = (d..2 * d).map(elem).collect();
        let x = m.presented_element(&s, &tt);
        let direct = m.apply_phi_r(&s, &tt).unwrap();
        prop_assert_eq!(&direct, &m.phi_r(&x).unwrap());
        // A second presentation: fold the u^{er} part into the generators.
        let (m2, ab) = m.in_adapted_basis().unwrap();
        let binv = ab.basis_change.inverse(&t).unwrap();
        let y = binv.mul_col(&t, &x);
        let viaad = ab.basis_change.mul_col(&t, &m2.phi_r(&y).unwrap());
        prop_assert_eq!(direct, viaad);
    }

    #[test]
    fn admissible_filtration_axioms((p, e, r, w, _g) in random_simple()) {
        let ring = ring(p, 1, e, r);
        let m = SimpleObject::cyclic(&ring, w.clone()).unwrap().to_module();
        let t_ring = tr(&ring);
        let pp = p as usize;
        for t in 0..=r {
            let fil = admissible_filtration(&m, t).unwrap();
            let expect: usize = w.iter().map(|&n| pp - n.saturating_sub(e * (r - t))).sum();
            prop_assert_eq!(fil.dim(), expect);
            for t2 in t..=r {
                let fil2 = admissible_filtration(&m, t2).unwrap();
                for v in fil.k_basis() {
                    let x = t_ring.unflatten(v);
                    prop_assert!(fil2.contains(&m.u_shift(&x, e * (t2 - t))));
                    if t > 0 {
                        let lower = admissible_filtration(&m, t - 1).unwrap();
                        prop_assert!(lower.contains(&m.monodromy(&x)));
                    }
                }
            }
        }
    }
}
