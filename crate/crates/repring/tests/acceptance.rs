//! One line per acceptance criterion, with the time limits pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use repring::characters::{mackey_audit, RepRing, VirtualCharacter};
use repring::cyclicring::{ind_cyclic, res_cyclic, unit_in_modular_quotient, CyclicRingElem};
use repring::cyclotomic::{cyclotomic_poly, psi_idempotent, RationalCyclicPoly};
use repring::groups::catalog_group;
use repring::homalg::{
    is_flat, kunneth_ends, mat_mul, smith_normal_form, tensor, tor1, verify_ses, verify_snf, Elem, EuclideanRing,
    FPModule, Matrix,
};
use repring::lifting::{assemble_and_glue, audit_family, brauer_coefficients};
use repring::localization::{certificates_equal, is_unit, verify_answer, Comparison, MultSet, UnitAnswer, UnitProfile, DEFAULT_BOUND};

const LIMITS: [(u32, u64); 8] = [(1, 120), (2, 5), (3, 5), (4, 30), (5, 600), (6, 60), (7, 60), (8, 10)];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ring(name: &str) -> RepRing {
    RepRing::new(Arc::new(catalog_group(name).expect("catalog group")))
}

fn mackey_suite() -> Outcome {
    let mut total = 0;
    for name in ["C12", "D4", "Q8", "S3", "A4", "S4"] {
        let audit = mackey_audit(&ring(name)).map_err(|e| e.to_string())?;
        if let Some(bad) = audit.relations.iter().find(|t| t.failed > 0) {
            return Err(format!("{}: {} fails {} of {}", name, bad.name, bad.failed, bad.checked));
        }
        total += audit.checked();
    }
    Ok(format!("{} relation instances", total))
}

fn cyclic_compositions() -> Outcome {
    let mut count = 0;
    for (p, m) in [(2usize, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 2), (3, 3)] {
        let n = p.pow(m);
        let d = n / p;
        let phi = cyclotomic_poly(n);
        let phi = CyclicRingElem::from_coeffs(n, &phi.coeffs);
        for j in 0..n {
            let x = CyclicRingElem::monomial(n, j);
            let back = ind_cyclic(&res_cyclic(&x, d).map_err(|e| e.to_string())?, n).map_err(|e| e.to_string())?;
            ensure(back == &phi * &x, format!("I res t^{} at {}", j, n))?;
            count += 1;
        }
        for j in 0..d {
            let y = CyclicRingElem::monomial(d, j);
            let back = res_cyclic(&ind_cyclic(&y, n).map_err(|e| e.to_string())?, d).map_err(|e| e.to_string())?;
            ensure(back == y.scale(&BigInt::from(p)), format!("res I t^{} at {}", j, n))?;
            count += 1;
        }
    }
    Ok(format!("{} monomials", count))
}

fn psi_suite() -> Outcome {
    for n in 1..=24usize {
        let ks: Vec<usize> = (1..=n).filter(|k| n % k == 0).collect();
        let psis: Vec<RationalCyclicPoly> =
            ks.iter().map(|&k| psi_idempotent(k, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let sum = psis.iter().fold(RationalCyclicPoly::zero(n), |a, b| a.add(b));
        ensure(sum == RationalCyclicPoly::one(n), format!("sum at n = {}", n))?;
        for (i, a) in psis.iter().enumerate() {
            for (j, b) in psis.iter().enumerate() {
                let want = if i == j { a.clone() } else { RationalCyclicPoly::zero(n) };
                ensure(a.mul(b) == want, format!("psi_{} psi_{} at n = {}", ks[i], ks[j], n))?;
            }
        }
    }
    Ok("n = 1..24".into())
}

fn quotient_units() -> Outcome {
    let mut count = 0;
    for (p, m) in [(2usize, 2u32), (2, 3), (3, 2)] {
        // f runs over R(Z/p^m); [f] is its image in Z[t]/(t^(p^(m-1)) - 1, p)
        let n = p.pow(m);
        let total = 5usize.pow(n as u32);
        for code in 0..total {
            let coeffs: Vec<i64> = (0..n).map(|i| (code / 5usize.pow(i as u32) % 5) as i64 - 2).collect();
            let f = CyclicRingElem::from_i64(n, &coeffs);
            let reduced = res_cyclic(&f, n / p).map_err(|e| e.to_string())?;
            let unit = unit_in_modular_quotient(&reduced, p).map_err(|e| e.to_string())?;
            let criterion = !(f.eval_one() % BigInt::from(p)).is_zero();
            ensure(unit == criterion, format!("{:?} at p = {}", coeffs, p))?;
            count += 1;
        }
    }
    Ok(format!("{} elements", count))
}

fn cyclic_of_order(r: &RepRing, n: usize) -> usize {
    (0..r.num_subgroups()).find(|&h| r.subgroup(h).order() == n && r.subgroup(h).is_cyclic(r.group())).expect("subgroup")
}

fn on_k(r: &RepRing, k: usize, coeffs: &[i64]) -> VirtualCharacter {
    let gen = r.subgroup(k).cyclic_generator(r.group()).expect("cyclic");
    r.from_cyclic(k, gen, &CyclicRingElem::from_i64(r.subgroup(k).order(), coeffs)).expect("element")
}

fn lift_case(r: &RepRing, k: usize, f: &VirtualCharacter, s: MultSet) -> Result<(), String> {
    let profile = UnitProfile::new(s, DEFAULT_BOUND);
    let res = assemble_and_glue(r, k, f, &profile).map_err(|e| format!("{}: {}", r.group().name(), e))?;
    for fam in &res.families {
        audit_family(r, fam)?;
    }
    let gen = r.subgroup(k).cyclic_generator(r.group()).expect("cyclic");
    let fk = r.to_cyclic(&r.restrict(&res.f_tilde, k).map_err(|e| e.to_string())?, gen).map_err(|e| e.to_string())?;
    ensure(fk == &res.multiplier * &r.to_cyclic(f, gen).map_err(|e| e.to_string())?, "res^K(f~) != multiplier * f")?;
    for l in 0..r.num_subgroups() {
        if !r.subgroup(l).is_cyclic(r.group()) {
            continue;
        }
        let fl = r.restrict(&res.f_tilde, l).map_err(|e| e.to_string())?;
        let s = profile.at(r, l).map_err(|e| e.to_string())?;
        let ans = is_unit(r, &fl, &s, DEFAULT_BOUND);
        ensure(ans.is_unit() && verify_answer(r, &fl, &s, &ans), format!("res to subgroup {} is not a certified unit", l))?;
    }
    Ok(())
}

fn lifting_suite() -> Outcome {
    let two = BigInt::from(2);
    let s3 = ring("S3");
    let c3 = cyclic_of_order(&s3, 3);
    lift_case(&s3, c3, &s3.constant(c3, &two), MultSet::integers(&s3, s3.whole_id(), &[2]))?;
    let c2 = cyclic_of_order(&s3, 2);
    let pi = s3.induce(&s3.one(c2), s3.whole_id()).map_err(|e| e.to_string())?;
    let norm = on_k(&s3, c3, &[1, 1, 1]);
    lift_case(&s3, c3, &norm, MultSet::new(s3.whole_id(), vec![pi.clone()]).map_err(|e| e.to_string())?)?;
    let with_two = MultSet::new(s3.whole_id(), vec![pi, s3.constant(s3.whole_id(), &two)]).map_err(|e| e.to_string())?;
    lift_case(&s3, c3, &norm, with_two)?;
    let a4 = ring("A4");
    let k = cyclic_of_order(&a4, 3);
    lift_case(&a4, k, &a4.constant(k, &two), MultSet::integers(&a4, a4.whole_id(), &[2]))?;
    let q8 = ring("Q8");
    let k = cyclic_of_order(&q8, 4);
    lift_case(&q8, k, &on_k(&q8, k, &[0, 1]), MultSet::trivial(q8.whole_id()))?;
    let s4 = ring("S4");
    let k = cyclic_of_order(&s4, 4);
    lift_case(&s4, k, &s4.constant(k, &two), MultSet::integers(&s4, s4.whole_id(), &[2]))?;
    Ok("6 lifts".into())
}

fn brauer_suite() -> Outcome {
    for name in ["S3", "A4", "S4", "A5", "D27", "Q8"] {
        let r = ring(name);
        let b = brauer_coefficients(&r).map_err(|e| format!("{}: {}", name, e))?;
        ensure(b.total(&r) == r.one(r.whole_id()), format!("{}: sum is not 1", name))?;
    }
    Ok("6 groups".into())
}

fn random_elem(rng: &mut ChaCha8Rng, r: &EuclideanRing, k: i64) -> Elem {
    let c: Vec<i64> = (0..r.degree()).map(|_| rng.gen_range(-k..=k)).collect();
    r.elem(&c)
}

/// A product of elementary matrices (and a row swap).
fn random_unimodular(rng: &mut ChaCha8Rng, r: &EuclideanRing, n: usize) -> Matrix {
    let mut m: Matrix = (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..3 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            m.swap(0, n - 1);
            continue;
        }
        let c = random_elem(rng, r, 2);
        let rj = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(&rj) {
            *x = &*x + &(&c * y);
        }
    }
    m
}

fn random_diagonal(rng: &mut ChaCha8Rng, r: &EuclideanRing, n: usize) -> Vec<Elem> {
    (0..n)
        .map(|_| match rng.gen_range(0..5) {
            0 => r.zero(),
            1 => r.one(),
            _ => random_elem(rng, r, 2),
        })
        .collect()
}

fn homalg_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rings = [EuclideanRing::integers(), EuclideanRing::cyclotomic(3).unwrap(), EuclideanRing::cyclotomic(5).unwrap()];
    let e = |x: repring::Error| x.to_string();
    for i in 0..200 {
        let r = rings[i % 3];
        let g = rng.gen_range(1..=3);
        let base = FPModule::diagonal(r, &random_diagonal(&mut rng, &r, g)).map_err(e)?;
        let u = random_unimodular(&mut rng, &r, g);
        let v = random_unimodular(&mut rng, &r, g);
        let moved = mat_mul(&r, &mat_mul(&r, &u, base.relations(), g, g), &v, g, g);
        let other = FPModule::new(r, g, moved.clone()).map_err(e)?;
        let snf = smith_normal_form(&r, &moved, g).map_err(e)?;
        verify_snf(&r, &moved, &snf).map_err(e)?;
        let h = rng.gen_range(1..=2);
        let n = FPModule::diagonal(r, &random_diagonal(&mut rng, &r, h)).map_err(e)?;
        let t1 = tor1(&base, &n).map_err(e)?.invariants().map_err(e)?;
        let t2 = tor1(&other, &n).map_err(e)?.invariants().map_err(e)?;
        let t3 = tor1(&n, &other).map_err(e)?.invariants().map_err(e)?;
        ensure(t1 == t2 && t2 == t3, format!("presentation {} over {}", i, r))?;
        for m in [&base, &other, &n] {
            let tor_zero = tor1(m, m).map_err(e)?.is_zero().map_err(e)?;
            ensure(tor_zero == is_flat(m).map_err(e)?, format!("Tor(M,M) criterion on presentation {}", i))?;
        }
    }
    let r3 = EuclideanRing::cyclotomic(3).unwrap();
    let m = FPModule::diagonal(r3, &[r3.from_int(2), r3.elem(&[1, 2]), r3.zero()]).map_err(e)?;
    let free = FPModule::free(r3, 2);
    let ends = kunneth_ends(&m, &free).map_err(e)?;
    ensure(ends.1.is_zero().map_err(e)?, "Tor with a free module")?;
    ensure(verify_ses(&ends, &tensor(&m, &free).map_err(e)?).map_err(e)?.consistent, "free factor case")?;
    let rl = FPModule::cyclic(r3, r3.elem(&[1, -1])).map_err(e)?;
    let ends = kunneth_ends(&rl, &rl).map_err(e)?;
    let middle = FPModule::cyclic(r3, r3.from_int(3)).map_err(e)?;
    let rep = verify_ses(&ends, &middle).map_err(e)?;
    ensure(rep.consistent && rep.torsion_middle == BigInt::from(9), "R/(lambda) case")?;
    ensure(!verify_ses(&ends, &rl).map_err(e)?.consistent, "R/(lambda) case accepts a wrong middle")?;
    Ok("200 presentations".into())
}

fn classification_smoke() -> Outcome {
    let r = ring("S3");
    let w = r.whole_id();
    let set = |v: &[i64]| MultSet::integers(&r, w, v);
    for other in [&[3i64][..], &[6]] {
        let (a, b) = (set(&[2]), set(other));
        match certificates_equal(&r, &a, &b, DEFAULT_BOUND).map_err(|e| e.to_string())? {
            Comparison::Distinct { side, index, certificate } => {
                let (g, s) = if side == 0 { (&a.generators()[index], &b) } else { (&b.generators()[index], &a) };
                ensure(verify_answer(&r, g, s, &UnitAnswer::NonUnit(certificate)), "certificate does not verify")?;
            }
            c => return Err(format!("<2> vs {:?}: {:?}", other, c)),
        }
    }
    let (a, b) = (set(&[2]), set(&[2, 4]));
    ensure(certificates_equal(&r, &a, &b, DEFAULT_BOUND).map_err(|e| e.to_string())? == Comparison::Equal, "<2> vs <2, 4>")?;
    for (x, y) in [(&a, &b), (&b, &a)] {
        for g in x.generators() {
            let ans = is_unit(&r, g, y, DEFAULT_BOUND);
            ensure(ans.is_unit() && verify_answer(&r, g, y, &ans), "unit witness")?;
        }
    }
    Ok("3 comparisons".into())
}

#[test]
fn acceptance() {
    let suites: [(&str, fn() -> Outcome); 8] = [
        ("Mackey relations and Frobenius formulas", mackey_suite),
        ("cyclic composition identities", cyclic_compositions),
        ("psi idempotents", psi_suite),
        ("units of the modular quotient", quotient_units),
        ("lifting end to end", lifting_suite),
        ("Brauer induction of 1", brauer_suite),
        ("homological algebra", homalg_suite),
        ("certificate comparison over R(S3)", classification_smoke),
    ];
    let mut failures = Vec::new();
    for ((name, run), (id, limit)) in suites.into_iter().zip(LIMITS) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let line = match (&outcome, in_time) {
            (Ok(detail), true) => format!("criterion {}: PASS {} ({}; {:.2?}, limit {} s)", id, name, detail, elapsed, limit),
            (Ok(detail), false) => format!("criterion {}: FAIL {} ({}; {:.2?} over the limit of {} s)", id, name, detail, elapsed, limit),
            (Err(why), _) => format!("criterion {}: FAIL {} ({}; {:.2?})", id, name, why, elapsed),
        };
        println!("{}", line);
        if !line.contains("PASS") {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "{:#?}", failures);
}
