use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use repring::characters::{RepRing, VirtualCharacter};
use repring::cyclicring::CyclicRingElem;
use repring::groups::catalog_group;
use repring::lifting::{assemble_and_glue, audit_family};
use repring::localization::{MultSet, UnitProfile, DEFAULT_BOUND};

fn ring(name: &str) -> RepRing {
    RepRing::new(Arc::new(catalog_group(name).unwrap()))
}

fn cyclic_of_order(r: &RepRing, n: usize) -> usize {
    (0..r.num_subgroups()).find(|&h| r.subgroup(h).order() == n && r.subgroup(h).is_cyclic(r.group())).unwrap()
}

fn on_k(r: &RepRing, k: usize, coeffs: &[i64]) -> VirtualCharacter {
    let gen = r.subgroup(k).cyclic_generator(r.group()).unwrap();
    r.from_cyclic(k, gen, &CyclicRingElem::from_i64(r.subgroup(k).order(), coeffs)).unwrap()
}

fn run(r: &RepRing, k: usize, f: &VirtualCharacter, s: MultSet) {
    let start = Instant::now();
    let profile = UnitProfile::new(s, DEFAULT_BOUND);
    let res = assemble_and_glue(r, k, f, &profile).unwrap();
    for fam in &res.families {
        audit_family(r, fam).unwrap();
    }
    let fk = r.restrict(&res.f_tilde, k).unwrap();
    let gen = r.subgroup(k).cyclic_generator(r.group()).unwrap();
    assert_eq!(r.to_cyclic(&fk, gen).unwrap(), &res.multiplier * &r.to_cyclic(f, gen).unwrap());
    eprintln!("{} {:?}", r.group().name(), start.elapsed());
}

#[test]
fn s3_constant_two() {
    let r = ring("S3");
    let k = cyclic_of_order(&r, 3);
    let s = MultSet::integers(&r, r.whole_id(), &[2]);
    run(&r, k, &r.constant(k, &BigInt::from(2)), s);
}

#[test]
fn s3_norm_element_with_permutation_character() {
    let r = ring("S3");
    let k = cyclic_of_order(&r, 3);
    let c2 = cyclic_of_order(&r, 2);
    let pi = r.induce(&r.one(c2), r.whole_id()).unwrap();
    let f = on_k(&r, k, &[1, 1, 1]);
    run(&r, k, &f, MultSet::new(r.whole_id(), vec![pi.clone()]).unwrap());
    let two = r.constant(r.whole_id(), &BigInt::from(2));
    run(&r, k, &f, MultSet::new(r.whole_id(), vec![pi, two]).unwrap());
}

#[test]
fn a4_constant_two() {
    let r = ring("A4");
    let k = cyclic_of_order(&r, 3);
    let s = MultSet::integers(&r, r.whole_id(), &[2]);
    run(&r, k, &r.constant(k, &BigInt::from(2)), s);
}

#[test]
fn q8_generator() {
    let r = ring("Q8");
    let k = cyclic_of_order(&r, 4);
    run(&r, k, &on_k(&r, k, &[0, 1]), MultSet::trivial(r.whole_id()));
}

#[test]
fn s4_constant_two() {
    let r = ring("S4");
    let k = cyclic_of_order(&r, 4);
    let s = MultSet::integers(&r, r.whole_id(), &[2]);
    run(&r, k, &r.constant(k, &BigInt::from(2)), s);
}
