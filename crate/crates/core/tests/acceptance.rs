//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::PathBuf;
use std::process::Command as Proc;
use std::time::{Duration, Instant};

use breuil::cat::{adapted_basis, check_morphism, verify_adapted, SimpleObject, TildeModule, TildeMorphism};
use breuil::dprings::{DpRing, RingParams, S1Elem, TildeSElem};
use breuil::equiv::{check_s1_morphism, functor_t, lift_morphism, lift_object, scalar_matrix};
use breuil::inertia::{
    ambient_field, base_p_digits, character_of_simple, serre_check, weight_exponents, weight_exponents_for, TameCharacter,
};
use breuil::linalg::Matrix;
use breuil::mat::{LocalRing, RMatrix, TildeRing};
use breuil::oracle;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t <= limit, "{what} took {t:?}, limit {limit:?}");
    Ok(t)
}

fn ring(p: u32, e: usize, r: usize) -> DpRing {
    DpRing::new(RingParams::standard(p, 1, e as u32, r as u32)).expect("admissible parameters")
}

/// (e, r) with er ≤ p − 2, r = 0 only with e = 1.
fn admissible(p: u32, r_min: usize) -> Vec<(usize, usize)> {
    let pu = p as usize;
    let mut out = Vec::new();
    for r in r_min..=pu - 2 {
        let emax = (pu - 2).checked_div(r).unwrap_or(1);
        out.extend((1..=emax).map(|e| (e, r)));
    }
    out
}

fn weight_tuples(d: usize, er: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|t| (0..=er).map(move |n| [t.clone(), vec![n]].concat())).collect();
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for p in [3u32, 5, 7] {
        for (e, r) in admissible(p, 1) {
            let ring = ring(p, e, r);
            let f = ring.field();
            let inv_rf = (1..=r as i64).fold(f.one(), |acc, k| f.mul(acc, f.inv(f.from_int(k)).unwrap()));
            let cr = ring.s1_pow(ring.c(), r);
            for (i, g) in ring.kappa_generators() {
                ensure!(g.in_fil(r, e), "p={p} e={e} r={r}: u^{i}/q(i)! is not in Fil^r");
                let img = ring.s1_phi_r(&g).map_err(|x| format!("φ_r(γ̃_{i}) failed: {x}"))?;
                ensure!(
                    img.min_degree().is_none_or(|m| m >= 2 * p as usize),
                    "p={p} e={e} r={r}: φ_r(γ̃_{i}) has a term below degree 2p"
                );
                // Independent form: c^r u^{p(i−er)}/r! when q(i) = r, zero otherwise.
                let expected = if i / e == r {
                    ring.s1_mul(&cr, &ring.u_pow(p as usize * (i - e * r))).scale(f, inv_rf)
                } else {
                    S1Elem::zero()
                };
                ensure!(img == expected, "p={p} e={e} r={r}: φ_r(γ̃_{i}) differs from the closed form");
                let twice = ring.s1_phi_r(&img).map_err(|x| format!("φ_r(φ_r(γ̃_{i})) failed: {x}"))?;
                ensure!(twice.is_zero(), "p={p} e={e} r={r}: φ_r∘φ_r(γ̃_{i}) ≠ 0");
                count += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(1), "κ vanishing")?;
    Ok(format!("{count} κ-generators, {t:?}"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for p in [3u32, 5, 7] {
        for (e, r) in admissible(p, 1) {
            let ring = ring(p, e, r);
            let f = ring.field();
            ensure!(ring.c_pi() == f.from_int(p as i64 - 1), "p={p} e={e}: c_π = {}", f.fmt_elem(ring.c_pi()));
            // φ(u^e − p)/p = u^{pe}/p − 1 = (p−1)!·u^{pe}/p! − 1 ≡ −γ̃_{pe} − 1.
            let minus_one = f.from_int(-1);
            let expected = S1Elem::term(0, minus_one).add(f, &S1Elem::term(p as usize * e, minus_one));
            ensure!(*ring.c() == expected, "p={p} e={e}: c = {} differs from the expansion", ring.c().display(f));
            count += 1;
        }
    }
    Ok(format!("{count} rings, c = −1 − u^(pe)/p! and c_π = p − 1"))
}

fn random_unit_matrix(t: &TildeRing, d: usize, rng: &mut StdRng) -> RMatrix<TildeSElem> {
    let f = t.field();
    let p = t.p();
    loop {
        let mut b = RMatrix::zeros(t, d, d);
        for i in 0..d {
            for j in 0..d {
                let v: Vec<_> = (0..p).map(|_| f.from_int(rng.gen_range(0..p as i64))).collect();
                b.set(i, j, TildeSElem(v));
            }
        }
        if b.inverse(t).is_some() {
            return b;
        }
    }
}

fn random_simple(ring: &DpRing, d: usize, rng: &mut StdRng) -> SimpleObject {
    let f = ring.field();
    let weights: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=ring.er())).collect();
    loop {
        let rows: Vec<Vec<_>> =
            (0..d).map(|_| (0..d).map(|_| f.from_int(rng.gen_range(0..ring.p() as i64))).collect()).collect();
        let g = Matrix::from_rows(rows);
        if g.inverse(f).is_some() {
            return SimpleObject::new(ring, weights, g, false).unwrap();
        }
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut count = 0;
    for e in [1usize, 2] {
        let rs: Vec<usize> = (1..=3 / e).collect();
        for d in 1..=3 {
            for k in 0..200 {
                let r = rs[k % rs.len()];
                let ring = ring(5, e, r);
                let t = TildeRing::new(ring.field().clone());
                let s = random_simple(&ring, d, &mut rng);
                let b = random_unit_matrix(&t, d, &mut rng);
                let m = s.to_module().change_basis(&b).map_err(|x| x.to_string())?;
                let v = m.validate();
                ensure!(v.all_pass(), "e={e} r={r} d={d}: generated module invalid:\n{}", v.to_text());
                let ab = adapted_basis(&m).map_err(|x| format!("e={e} r={r} d={d}: {x}"))?;
                let rep = verify_adapted(&m, &ab);
                ensure!(rep.all_pass(), "e={e} r={r} d={d}:\n{}", rep.to_text());
                let mut got = ab.weights.clone();
                let mut want = s.weights().to_vec();
                got.sort_unstable();
                want.sort_unstable();
                ensure!(got == want, "e={e} r={r} d={d}: weights {got:?}, built from {want:?}");
                count += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(10), "adapted basis suite")?;
    Ok(format!("{count} random modules, {t:?}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for p in [3u32, 5] {
        for (e, r) in admissible(p, 0) {
            let er = (e * r) as u64;
            for d in 1..=3 {
                let q = (p as u64).pow(d as u32);
                let v = er * (q - 1) / (p as u64 - 1);
                for n in weight_tuples(d, e * r) {
                    let w = weight_exponents_for(p, e, r, &n).map_err(|x| x.to_string())?;
                    for i in 0..d {
                        let next = w.s[(i + 1) % d];
                        ensure!(
                            p as u64 * w.s[i] == next + n[i] as u64 * (q - 1),
                            "p={p} e={e} r={r} n={n:?}: p·s_{i} ≠ s_{} + n_{i}(q−1)",
                            (i + 1) % d
                        );
                        ensure!(w.s[i] + w.t[i] == v, "p={p} e={e} r={r} n={n:?}: s_{i} + t_{i} ≠ {v}");
                        // little-endian digit j of s_i is n_{i+d−1−j}
                        let digits = base_p_digits(w.s[i], p, d);
                        let want: Vec<u32> = (0..d).map(|j| n[(i + d - 1 - j) % d] as u32).collect();
                        ensure!(digits == want, "p={p} e={e} r={r} n={n:?}: digits of s_{i} are {digits:?}");
                    }
                    count += 1;
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(1), "weight formulas")?;
    Ok(format!("{count} weight tuples, {t:?}"))
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for p in [3u32, 5] {
        for (e, r) in admissible(p, 0) {
            let ring = ring(p, e, r);
            for d in 1..=3 {
                for n in weight_tuples(d, e * r) {
                    let s = SimpleObject::cyclic(&ring, n.clone()).map_err(|x| x.to_string())?;
                    let chi = character_of_simple(&s).map_err(|x| x.to_string())?.character;
                    let (ok, rep) = serre_check(&chi, e, r);
                    ensure!(ok, "p={p} e={e} r={r} n={n:?}:\n{}", rep.to_text());
                    count += 1;
                }
                // A lone digit p − 1 is the exponent p − 1 ≡ 0, so it needs d ≥ 2 to stay visible.
                if d > 1 || e * r + 2 < p as usize {
                    let mut digits = vec![0u32; d];
                    digits[d - 1] = (e * r + 1) as u32;
                    let bad = TameCharacter::from_digits(p, &digits).map_err(|x| x.to_string())?;
                    ensure!(!serre_check(&bad, e, r).0, "p={p} e={e} r={r}: digit er + 1 accepted");
                }
            }
        }
    }
    Ok(format!("{count} simples within [0, er], synthetic digit er + 1 rejected"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let entries = oracle::grid(5, 2).map_err(|x| x.to_string())?;
    if let Some(bad) = entries.iter().find(|g| !g.pass) {
        return Err(format!("p={} e={} r={} n={:?}: {}", bad.p, bad.e, bad.r, bad.weights, bad.failures.join(", ")));
    }
    // Spot-check that non-degeneracy is part of what ran, on the largest configuration.
    let w = weight_exponents_for(5, 1, 3, &[3, 1]).map_err(|x| x.to_string())?;
    let amb = ambient_field(5, 1, 2).map_err(|x| x.to_string())?;
    let rep = oracle::verify_weights(&w, &amb).map_err(|x| x.to_string())?;
    let nd = rep.get("non_degenerate").ok_or("non_degenerate check missing")?;
    ensure!(nd.pass, "non_degenerate failed: {:?}", nd.witness);
    let t = within(start, Duration::from_secs(30), "oracle grid")?;
    Ok(format!("{} configurations, {t:?}", entries.len()))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for p in [3u32, 5] {
        for (e, r) in admissible(p, 0) {
            let ring = ring(p, e, r);
            for d in 1..=2 {
                let q = (p as u64).pow(d as u32);
                let amb = ambient_field(p, 1, d).map_err(|x| x.to_string())?;
                for n in weight_tuples(d, e * r) {
                    let s = SimpleObject::cyclic(&ring, n.clone()).map_err(|x| x.to_string())?;
                    let info = character_of_simple(&s).map_err(|x| x.to_string())?;
                    ensure!(info.group_rank == d && info.group_order == q, "p={p} n={n:?}: group ({}, {})", info.group_rank, info.group_order);
                    let w = weight_exponents(&s).map_err(|x| x.to_string())?;
                    let rep = oracle::verify_solution_family(&w, &amb).map_err(|x| x.to_string())?;
                    let card = rep.get("family_cardinality").ok_or("family_cardinality missing")?;
                    ensure!(card.pass, "p={p} n={n:?}: {:?}", card.witness);
                    count += 1;
                }
                let roots = amb.twisted_roots(d as u32, 0).map_err(|x| x.to_string())?;
                ensure!(roots.len() as u64 == q, "|F_q| = {} in the ambient field", roots.len());
            }
        }
    }
    Ok(format!("{count} simples, group (Z/p)^d and family of size p^d"))
}

fn scalar_tilde(m: &TildeModule, c: i64) -> TildeMorphism {
    let t = m.tilde_ring();
    TildeMorphism::new(m.clone(), m.clone(), scalar_matrix(t, m.d(), t.field().from_int(c))).unwrap()
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for p in [3u32, 5] {
        for (e, r) in admissible(p, 0) {
            let ring = ring(p, e, r);
            for d in 1..=3 {
                for n in weight_tuples(d, e * r) {
                    let ctx = format!("p={p} e={e} r={r} n={n:?}");
                    let s = SimpleObject::cyclic(&ring, n.clone()).unwrap();
                    let m = s.to_module();
                    let lifted = lift_object(&m).map_err(|x| format!("{ctx}: {x}"))?;
                    let back = functor_t(&lifted.module).map_err(|x| format!("{ctx}: {x}"))?;
                    ensure!(back.d() == d, "{ctx}: rank {}", back.d());
                    ensure!(back == lifted.reduced, "{ctx}: T(lift) differs from the reduced input");
                    let mut w = adapted_basis(&back).map_err(|x| x.to_string())?.weights;
                    let mut want = n.clone();
                    w.sort_unstable();
                    want.sort_unstable();
                    ensure!(w == want, "{ctx}: weights {w:?} after the round trip");
                    let iso = TildeMorphism::new(lifted.reduced.clone(), m.clone(), lifted.adapted.basis_change.clone())
                        .map_err(|x| x.to_string())?;
                    ensure!(check_morphism(&iso).all_pass(), "{ctx}: reduced form is not isomorphic to the input");
                    // φ_r on the adapted generators is G up to the basis permutation.
                    let g_back = back.phi_constant_matrix();
                    let perm = lifted.adapted.basis_change.constant_part(m.tilde_ring());
                    let f = ring.field();
                    ensure!(perm.mul(f, &g_back) == s.g().mul(f, &perm), "{ctx}: φ_r matrix changed");
                    let s1 = &lifted.module;
                    for c in 0..p as i64 {
                        let lift = lift_morphism(s1, s1, &scalar_tilde(&lifted.reduced, c)).map_err(|x| format!("{ctx}: {x}"))?;
                        ensure!(lift == scalar_matrix(&ring, d, f.from_int(c)), "{ctx}: lift of {c} is not scalar");
                        ensure!(check_s1_morphism(s1, s1, &lift).all_pass(), "{ctx}: lift of {c} does not commute");
                    }
                    count += 1;
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(10), "lifting round trips")?;
    Ok(format!("{count} simples lifted with all scalars, {t:?}"))
}

fn criterion_9() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests");
    let bin = env!("CARGO_BIN_EXE_breuil");
    let mut jobs: Vec<(String, Vec<String>)> = Vec::new();
    let mut fixtures: Vec<_> = std::fs::read_dir(dir.join("fixtures"))
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    fixtures.sort();
    for path in &fixtures {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let cmd = name.trim_end_matches("-morphism").to_string();
        jobs.push((name, vec![cmd, "--json".into(), path.to_string_lossy().to_string()]));
    }
    jobs.push(("oracle-grid".into(), ["oracle", "--json", "--grid", "pmax=5", "dmax=2"].map(String::from).to_vec()));
    let mut seen = std::collections::BTreeSet::new();
    for (name, args) in &jobs {
        let run = || Proc::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure!(a.status.code() == Some(0), "{name}: exit {:?}\n{}", a.status.code(), String::from_utf8_lossy(&a.stderr));
        ensure!(a.stdout == b.stdout, "{name}: two runs differ");
        let golden = std::fs::read(dir.join("golden").join(format!("{name}.json"))).map_err(|e| format!("{name}: {e}"))?;
        ensure!(a.stdout == golden, "{name}: output differs from the golden file");
        seen.insert(args[0].clone());
    }
    ensure!(seen.len() == 8, "fixtures cover only {seen:?}");
    // Inadmissible parameters are rejected with the bound in the message.
    let bad = dir.join("fixtures").join("validate.json");
    let text = std::fs::read_to_string(&bad).map_err(|e| e.to_string())?.replace("\"r\": 1", "\"r\": 2");
    let tmp = std::env::temp_dir().join(format!("breuil-inadmissible-{}.json", std::process::id()));
    std::fs::write(&tmp, text).map_err(|e| e.to_string())?;
    let out = Proc::new(bin).args(["validate", tmp.to_str().unwrap()]).output().map_err(|e| e.to_string())?;
    let _ = std::fs::remove_file(&tmp);
    ensure!(out.status.code() == Some(2), "er = p − 1 exited with {:?}", out.status.code());
    ensure!(String::from_utf8_lossy(&out.stderr).contains("e·r ≤ p − 2"), "diagnostic does not cite the bound");
    Ok(format!("{} golden reports byte-identical across runs", jobs.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("κ vanishing", criterion_1),
        ("c_π cross-check", criterion_2),
        ("adapted basis", criterion_3),
        ("weight formulas", criterion_4),
        ("Serre bound", criterion_5),
        ("oracle grid", criterion_6),
        ("group order", criterion_7),
        ("lifting round trip", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
