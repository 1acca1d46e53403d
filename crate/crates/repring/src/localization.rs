//! Finitely generated multiplicative sets `S` in `R(H)`, unit decisions in the
//! saturation of `S` and comparison of two such sets.
//!
//! `f` is a unit of `R(H)_S` iff `f` divides some element of `S`. Since every
//! product of generators divides a power of their product `T`, this is
//! equivalent to `f | T^k` for some `k`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::prime_power;
use crate::characters::{RepRing, VirtualCharacter};
use crate::cyclicring::{split, unsplit, CyclicRingElem, LocalCyclicElem};
use crate::cyclotomic::CycNum;
use crate::linalg::{det_rational, mat_vec, solve_integer};
use crate::Error;

/// Default exponent bound for unit searches.
pub const DEFAULT_BOUND: u32 = 8;

/// A multiplicative set generated by finitely many virtual characters of one subgroup.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultSet {
    sub: usize,
    generators: Vec<VirtualCharacter>,
}

impl MultSet {
    pub fn new(sub: usize, generators: Vec<VirtualCharacter>) -> Result<Self, Error> {
        if generators.iter().any(|g| g.subgroup() != sub) {
            return Err(Error::Mismatch("generators live on different subgroups".into()));
        }
        Ok(MultSet { sub, generators })
    }

    /// `{1}`.
    pub fn trivial(sub: usize) -> Self {
        MultSet { sub, generators: Vec::new() }
    }

    /// The set generated by integer constants.
    pub fn integers(ring: &RepRing, sub: usize, values: &[i64]) -> Self {
        MultSet { sub, generators: values.iter().map(|&v| ring.constant(sub, &BigInt::from(v))).collect() }
    }

    pub fn subgroup(&self) -> usize {
        self.sub
    }

    pub fn generators(&self) -> &[VirtualCharacter] {
        &self.generators
    }

    /// Product of all generators.
    pub fn product(&self, ring: &RepRing) -> VirtualCharacter {
        self.generators.iter().fold(ring.one(self.sub), |acc, g| ring.mul(&acc, g))
    }

    /// The same set with one more generator.
    pub fn with(&self, g: VirtualCharacter) -> Result<Self, Error> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(self.sub, gens)
    }
}

/// `res^K(S)`: generators are restricted one by one.
pub fn restricted_profile(ring: &RepRing, s: &MultSet, k: usize) -> Result<MultSet, Error> {
    let gens = s.generators.iter().map(|g| ring.restrict(g, k)).collect::<Result<Vec<_>, _>>()?;
    Ok(MultSet { sub: k, generators: gens })
}

/// Primes that become invertible in the dimension image of `S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DivisiblePrimes {
    Finite(Vec<u64>),
    /// Some generator has dimension zero, so the integer part vanishes.
    All,
}

impl DivisiblePrimes {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            DivisiblePrimes::Finite(v) => v.contains(&p),
            DivisiblePrimes::All => true,
        }
    }
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// True iff `n` has a prime factor not dividing `m` (`n` nonzero). Uses gcd
/// peeling so that large inputs never need a full factorization.
fn has_foreign_prime(n: &BigInt, m: &BigInt) -> bool {
    let mut n = n.abs();
    let m = m.abs();
    loop {
        let g = n.gcd(&m);
        if g.is_one() {
            return !n.is_one();
        }
        while (&n % &g).is_zero() {
            n /= &g;
        }
    }
}

/// Primes dividing the dimension of some generator.
pub fn divisible_primes(ring: &RepRing, s: &MultSet) -> DivisiblePrimes {
    let mut set = BTreeSet::new();
    for g in &s.generators {
        let d = ring.dimension(g);
        if d.is_zero() {
            return DivisiblePrimes::All;
        }
        for p in prime_factors(&d) {
            set.insert(p.to_u64().expect("small prime"));
        }
    }
    DivisiblePrimes::Finite(set.into_iter().collect())
}

/// Evidence that `f * cofactor = T^exponent` with `T` the product of the generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitWitness {
    pub cofactor: VirtualCharacter,
    pub exponent: u64,
}

/// Evidence that `f` cannot divide any power of `T`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NonUnitCertificate {
    /// Under the dimension map `f(1)` does not divide any power of `T(1)`.
    Dimension { f_dim: BigInt, t_dim: BigInt },
    /// Under evaluation at the element `element`, `f(x)` does not divide any
    /// power of `T(x)` in `Z[zeta]`: either `f(x) = 0 != T(x)` or the norm of
    /// `f(x)` has a prime factor not dividing the norm of `T(x)`.
    ClassValue { element: usize, f_norm: BigInt, t_norm: BigInt },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UnitAnswer {
    Unit(UnitWitness),
    NonUnit(NonUnitCertificate),
    Undecided { bound: u32 },
}

impl UnitAnswer {
    pub fn is_unit(&self) -> bool {
        matches!(self, UnitAnswer::Unit(_))
    }

    pub fn is_nonunit(&self) -> bool {
        matches!(self, UnitAnswer::NonUnit(_))
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            UnitAnswer::Unit(_) => "unit",
            UnitAnswer::NonUnit(_) => "nonunit",
            UnitAnswer::Undecided { .. } => "undecided",
        }
    }
}

/// Exponents tried for `f | T^k`: `0`, the powers `2^j` with `j <= bound`,
/// and, for `f` not a zero divisor, the nilpotency bound of `T` in the finite
/// ring `R(H)/fR(H)` (the bit length of its order `|det M_f|`). For zero
/// divisors the bit length of the product of the nonzero class-value norms
/// is tried instead; that one is only a guess.
fn candidate_exponents(det: &BigInt, bound: u32, zero_divisor_guess: Option<u64>) -> Vec<u64> {
    let mut ks: Vec<u64> = vec![0];
    ks.extend((0..=bound.min(62)).map(|j| 1u64 << j));
    if !det.is_zero() {
        ks.push(det.abs().bits().max(1));
    }
    ks.extend(zero_divisor_guess);
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let q: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
    det_rational(&q).to_integer()
}

fn norm_of(x: &CycNum) -> BigInt {
    x.norm().to_integer()
}

/// Searches for a nonunit certificate by ring-map evaluations.
fn nonunit_certificate(ring: &RepRing, f: &VirtualCharacter, t: &VirtualCharacter) -> Option<NonUnitCertificate> {
    let f_dim = ring.dimension(f);
    let t_dim = ring.dimension(t);
    if !t_dim.is_zero() && (f_dim.is_zero() || has_foreign_prime(&f_dim, &t_dim)) {
        return Some(NonUnitCertificate::Dimension { f_dim, t_dim });
    }
    let table = ring.table(f.subgroup());
    for (c, rep) in table.class_representatives().into_iter().enumerate().skip(1) {
        let fv = ring.class_value(f, c);
        let tv = ring.class_value(t, c);
        if tv.is_zero() {
            continue;
        }
        let t_norm = norm_of(&tv);
        if fv.is_zero() {
            return Some(NonUnitCertificate::ClassValue { element: rep, f_norm: BigInt::zero(), t_norm });
        }
        let f_norm = norm_of(&fv);
        if has_foreign_prime(&f_norm, &t_norm) {
            return Some(NonUnitCertificate::ClassValue { element: rep, f_norm, t_norm });
        }
    }
    None
}

/// Decides whether `f` is a unit of `R(H)_S` as far as the bound allows.
pub fn is_unit(ring: &RepRing, f: &VirtualCharacter, s: &MultSet, bound: u32) -> UnitAnswer {
    assert_eq!(f.subgroup(), s.sub, "element and multiplicative set on different subgroups");
    let t = s.product(ring);
    let m = ring.mult_matrix(f);
    let n = m.len();
    let det = int_det(&m);
    let mut tk = ring.one(f.subgroup());
    let mut cur = 0u64;
    let guess = det.is_zero().then(|| {
        let t = ring.table(f.subgroup());
        let prod: BigInt = (0..t.num_classes())
            .map(|c| ring.class_value(f, c))
            .filter(|v| !v.is_zero())
            .map(|v| norm_of(&v).abs())
            .product();
        prod.bits().max(1)
    });
    for k in candidate_exponents(&det, bound, guess) {
        if k > cur {
            tk = ring.mul(&tk, &ring.pow(&t, k - cur));
            cur = k;
        }
        if let Some(g) = solve_integer(&m, n, tk.coords()) {
            let cofactor = ring.from_coords(f.subgroup(), g).expect("same rank");
            return UnitAnswer::Unit(UnitWitness { cofactor, exponent: k });
        }
    }
    match nonunit_certificate(ring, f, &t) {
        Some(c) => UnitAnswer::NonUnit(c),
        None => UnitAnswer::Undecided { bound },
    }
}

/// Re-checks a witness or certificate from scratch.
pub fn verify_answer(ring: &RepRing, f: &VirtualCharacter, s: &MultSet, answer: &UnitAnswer) -> bool {
    let t = s.product(ring);
    match answer {
        UnitAnswer::Unit(w) => ring.mul(f, &w.cofactor) == ring.pow(&t, w.exponent),
        UnitAnswer::NonUnit(NonUnitCertificate::Dimension { f_dim, t_dim }) => {
            *f_dim == ring.dimension(f)
                && *t_dim == ring.dimension(&t)
                && !t_dim.is_zero()
                && (f_dim.is_zero() || has_foreign_prime(f_dim, t_dim))
        }
        UnitAnswer::NonUnit(NonUnitCertificate::ClassValue { element, f_norm, t_norm }) => {
            let fv = ring.value_at(f, *element);
            let tv = ring.value_at(&t, *element);
            if tv.is_zero() || norm_of(&tv) != *t_norm {
                return false;
            }
            if fv.is_zero() {
                return f_norm.is_zero();
            }
            norm_of(&fv) == *f_norm && has_foreign_prime(f_norm, t_norm)
        }
        UnitAnswer::Undecided { .. } => true,
    }
}

/// The invariant attached to a multiplicative set on the whole group: its
/// restrictions to subgroups and a memo table of unit queries.
pub struct UnitProfile {
    base: MultSet,
    bound: u32,
    restricted: Mutex<HashMap<usize, MultSet>>,
    cache: Mutex<HashMap<(usize, Vec<BigInt>), UnitAnswer>>,
}

impl fmt::Debug for UnitProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitProfile({:?}, bound {})", self.base, self.bound)
    }
}

impl UnitProfile {
    pub fn new(base: MultSet, bound: u32) -> Self {
        UnitProfile { base, bound, restricted: Mutex::new(HashMap::new()), cache: Mutex::new(HashMap::new()) }
    }

    pub fn base(&self) -> &MultSet {
        &self.base
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn divisible_primes(&self, ring: &RepRing) -> DivisiblePrimes {
        divisible_primes(ring, &self.base)
    }

    /// `S^H` up to saturation.
    pub fn at(&self, ring: &RepRing, h: usize) -> Result<MultSet, Error> {
        if let Some(s) = self.restricted.lock().unwrap().get(&h) {
            return Ok(s.clone());
        }
        let s = restricted_profile(ring, &self.base, h)?;
        self.restricted.lock().unwrap().insert(h, s.clone());
        Ok(s)
    }

    /// Memoized [`is_unit`] against `S^H` for the subgroup carrying `f`.
    pub fn is_unit(&self, ring: &RepRing, f: &VirtualCharacter) -> Result<UnitAnswer, Error> {
        let key = (f.subgroup(), f.coords().to_vec());
        if let Some(a) = self.cache.lock().unwrap().get(&key) {
            return Ok(a.clone());
        }
        let s = self.at(ring, f.subgroup())?;
        let a = is_unit(ring, f, &s, self.bound);
        self.cache.lock().unwrap().insert(key, a.clone());
        Ok(a)
    }

    pub fn cached_queries(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

/// Result of comparing two multiplicative sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Comparison {
    Equal,
    /// Generator `index` of side `side` (0 or 1) is provably not a unit for the other side.
    Distinct { side: usize, index: usize, certificate: NonUnitCertificate },
    Undecided { side: usize, index: usize },
}

/// Compares saturations by checking every generator of each side against the other.
pub fn certificates_equal(ring: &RepRing, s1: &MultSet, s2: &MultSet, bound: u32) -> Result<Comparison, Error> {
    if s1.sub != s2.sub {
        return Err(Error::Mismatch("multiplicative sets on different subgroups".into()));
    }
    let mut undecided = None;
    for (side, (a, b)) in [(s1, s2), (s2, s1)].into_iter().enumerate() {
        for (index, g) in a.generators.iter().enumerate() {
            match is_unit(ring, g, b, bound) {
                UnitAnswer::Unit(_) => {}
                UnitAnswer::NonUnit(certificate) => return Ok(Comparison::Distinct { side, index, certificate }),
                UnitAnswer::Undecided { .. } => {
                    undecided.get_or_insert(Comparison::Undecided { side, index });
                }
            }
        }
    }
    Ok(undecided.unwrap_or(Comparison::Equal))
}

/// Description of `K_*^H` of the model action for `S`: `K_0 = R(H)_{S^H}`, `K_1 = 0`.
#[derive(Clone, Debug)]
pub struct ModelKGroup {
    pub subgroup: usize,
    pub generators: Vec<VirtualCharacter>,
    /// For `H` cyclic of order `p^m` with `p` invertible: the levels `p^m, .., p, 1`
    /// of the decomposition `R(H)[1/p] = Z[zeta_(p^m), 1/p] + .. + Z[1/p]`.
    pub split_levels: Option<Vec<usize>>,
}

impl ModelKGroup {
    pub fn k1_vanishes(&self) -> bool {
        true
    }
}

pub fn model_kgroups(ring: &RepRing, s: &MultSet) -> Result<Vec<ModelKGroup>, Error> {
    let primes = divisible_primes(ring, s);
    let g = ring.group();
    let mut out = Vec::new();
    for h in 0..ring.num_subgroups() {
        let sub = ring.subgroup(h);
        let generators = restricted_profile(ring, s, h)?.generators;
        let split_levels = match prime_power(sub.order()) {
            Some((p, m)) if sub.is_cyclic(g) && primes.contains(p as u64) => {
                Some((0..=m).rev().map(|j| p.pow(j)).collect())
            }
            _ => None,
        };
        out.push(ModelKGroup { subgroup: h, generators, split_levels });
    }
    Ok(out)
}

/// Full decomposition of `f` in `R(Z/p^m)[1/p]` into its components in
/// `Z[zeta_(p^j), 1/p]` for `j = m, .., 0`.
pub fn split_components(f: &LocalCyclicElem) -> Result<Vec<CycNum>, Error> {
    let mut out = Vec::new();
    let mut cur = f.clone();
    while cur.modulus() > 1 {
        let (a, b) = split(&cur)?;
        out.push(a);
        cur = b;
    }
    let c: Vec<BigRational> = cur.rationals();
    out.push(CycNum::from_rational(1, c[0].clone()));
    Ok(out)
}

/// Inverse of [`split_components`].
pub fn unsplit_components(p: usize, parts: &[CycNum]) -> Result<LocalCyclicElem, Error> {
    let last = parts.last().ok_or_else(|| Error::Mismatch("no components".into()))?;
    let mut cur = LocalCyclicElem::from_rationals(1, p, &[last.as_rational().expect("rational")])?;
    for a in parts[..parts.len() - 1].iter().rev() {
        cur = unsplit(a, &cur)?;
    }
    Ok(cur)
}

/// Convenience: the cyclic element of a generator on a cyclic subgroup.
pub fn as_cyclic(ring: &RepRing, f: &VirtualCharacter) -> Result<CyclicRingElem, Error> {
    let gen = ring.subgroup(f.subgroup()).cyclic_generator(ring.group()).ok_or(Error::NotCyclic)?;
    ring.to_cyclic(f, gen)
}

/// `M_f x` for a coordinate vector, exposed for witness checks in tests.
pub fn apply_mult(ring: &RepRing, f: &VirtualCharacter, x: &[BigInt]) -> Vec<BigInt> {
    mat_vec(&ring.mult_matrix(f), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog_group;
    use std::sync::Arc;

    fn ring(name: &str) -> RepRing {
        RepRing::new(Arc::new(catalog_group(name).unwrap()))
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn restricted_profile_examples() {
        let r = ring("S3");
        let w = r.whole_id();
        let c3 = r.id_of(&r.group().parse_subgroup("(0 1 2)").unwrap());
        let triv = MultSet::trivial(w);
        assert!(restricted_profile(&r, &triv, c3).unwrap().generators().is_empty());
        let two = MultSet::integers(&r, w, &[2]);
        assert_eq!(restricted_profile(&r, &two, c3).unwrap(), MultSet::integers(&r, c3, &[2]));

        let r = ring("C4");
        let w = r.whole_id();
        let gen = r.subgroup(w).cyclic_generator(r.group()).unwrap();
        let f = r.from_cyclic(w, gen, &CyclicRingElem::from_i64(4, &[1, 0, 1])).unwrap();
        let s = MultSet::new(w, vec![f]).unwrap();
        let c2 = r.id_of(&r.group().closure(&[r.group().pow(gen, 2)]));
        let res = restricted_profile(&r, &s, c2).unwrap();
        assert_eq!(res.generators()[0], r.constant(c2, &int(2)));
    }

    #[test]
    fn unit_examples() {
        let r = ring("C2");
        let w = r.whole_id();
        let two = MultSet::integers(&r, w, &[2]);
        assert!(is_unit(&r, &r.one(w), &two, 8).is_unit());
        let gen = r.subgroup(w).cyclic_generator(r.group()).unwrap();
        let t = r.from_cyclic(w, gen, &CyclicRingElem::from_i64(2, &[0, 1])).unwrap();
        let a = is_unit(&r, &t, &two, 8);
        assert!(a.is_unit());
        assert!(verify_answer(&r, &t, &two, &a));

        let r = ring("C1");
        let e = r.whole_id();
        let s = MultSet::integers(&r, e, &[2]);
        let a = is_unit(&r, &r.constant(e, &int(3)), &s, 8);
        assert!(matches!(a, UnitAnswer::NonUnit(NonUnitCertificate::Dimension { .. })));
        assert!(verify_answer(&r, &r.constant(e, &int(3)), &s, &a));
        let a = is_unit(&r, &r.constant(e, &int(-16)), &s, 2);
        assert!(a.is_unit());
    }

    #[test]
    fn zero_divisor_is_not_a_unit_for_three() {
        // 1 + t + t^2 kills 1 - t, while 3 does not
        let r = ring("C3");
        let w = r.whole_id();
        let gen = r.subgroup(w).cyclic_generator(r.group()).unwrap();
        let f = r.from_cyclic(w, gen, &CyclicRingElem::from_i64(3, &[1, 1, 1])).unwrap();
        let s = MultSet::integers(&r, w, &[3]);
        let a = is_unit(&r, &f, &s, 8);
        assert!(a.is_nonunit(), "{:?}", a);
        assert!(verify_answer(&r, &f, &s, &a));
        // but (1 + t + t^2)^2 = 3 (1 + t + t^2), so 3 is a unit the other way round
        let s2 = MultSet::new(w, vec![f.clone()]).unwrap();
        let a = is_unit(&r, &r.constant(w, &int(3)), &s2, 8);
        assert!(a.is_unit());
        assert!(verify_answer(&r, &r.constant(w, &int(3)), &s2, &a));
    }

    #[test]
    fn divisible_prime_examples() {
        let r = ring("C2");
        let w = r.whole_id();
        assert_eq!(divisible_primes(&r, &MultSet::trivial(w)), DivisiblePrimes::Finite(vec![]));
        assert_eq!(divisible_primes(&r, &MultSet::integers(&r, w, &[6])), DivisiblePrimes::Finite(vec![2, 3]));
        let gen = r.subgroup(w).cyclic_generator(r.group()).unwrap();
        let t = r.from_cyclic(w, gen, &CyclicRingElem::from_i64(2, &[0, 1])).unwrap();
        assert_eq!(divisible_primes(&r, &MultSet::new(w, vec![t]).unwrap()), DivisiblePrimes::Finite(vec![]));
        let d = r.from_cyclic(w, gen, &CyclicRingElem::from_i64(2, &[1, -1])).unwrap();
        assert_eq!(divisible_primes(&r, &MultSet::new(w, vec![d]).unwrap()), DivisiblePrimes::All);
    }

    #[test]
    fn certificate_examples() {
        let r = ring("C1");
        let e = r.whole_id();
        let s = |v: &[i64]| MultSet::integers(&r, e, v);
        assert!(matches!(certificates_equal(&r, &s(&[2]), &s(&[3]), 8).unwrap(), Comparison::Distinct { .. }));
        assert!(matches!(certificates_equal(&r, &s(&[2]), &s(&[6]), 8).unwrap(), Comparison::Distinct { .. }));
        assert_eq!(certificates_equal(&r, &s(&[2]), &s(&[2, 4]), 8).unwrap(), Comparison::Equal);
        let r3 = ring("S3");
        let w = r3.whole_id();
        let x = r3.from_i64(w, &[1, 0, 1]).unwrap();
        let a = MultSet::new(w, vec![x.clone()]).unwrap();
        let b = a.with(r3.mul(&x, &x)).unwrap();
        assert_eq!(certificates_equal(&r3, &a, &b, 8).unwrap(), Comparison::Equal);
        assert!(certificates_equal(&r3, &a, &MultSet::trivial(0), 8).is_err());
    }

    #[test]
    fn model_kgroup_examples() {
        let r = ring("C2");
        let w = r.whole_id();
        let ks = model_kgroups(&r, &MultSet::trivial(w)).unwrap();
        assert!(ks.iter().all(|k| k.generators.is_empty() && k.split_levels.is_none() && k.k1_vanishes()));
        let ks = model_kgroups(&r, &MultSet::integers(&r, w, &[2])).unwrap();
        assert_eq!(ks[w].split_levels, Some(vec![2, 1]));
    }

    #[test]
    fn restriction_composes_on_s4() {
        let r = ring("S4");
        let w = r.whole_id();
        let x = r.from_i64(w, &[2, -1, 1, 0, 3]).unwrap();
        let s = MultSet::new(w, vec![x, r.constant(w, &int(3))]).unwrap();
        for h in 0..r.num_subgroups() {
            let sh = restricted_profile(&r, &s, h).unwrap();
            for k in 0..r.num_subgroups() {
                if r.subgroup(k).is_subset_of(r.subgroup(h)) {
                    assert_eq!(restricted_profile(&r, &sh, k).unwrap(), restricted_profile(&r, &s, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn splitting_round_trips() {
        for (p, m) in [(2usize, 1u32), (2, 2), (3, 1), (2, 3), (3, 2)] {
            let n = p.pow(m);
            let f = CyclicRingElem::from_i64(n, &(0..n as i64).map(|i| 3 * i - 5).collect::<Vec<_>>());
            let lf = LocalCyclicElem::from_integral(&f, p);
            let parts = split_components(&lf).unwrap();
            assert_eq!(parts.len(), m as usize + 1);
            assert_eq!(unsplit_components(p, &parts).unwrap(), lf);
        }
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig { cases: 40, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

        #[test]
        fn answers_verify_and_are_monotone(c in proptest::collection::vec(-3i64..=3, 3), s in 1i64..=6) {
            let r = ring("S3");
            let w = r.whole_id();
            let f = r.from_i64(w, &c).unwrap();
            let set = MultSet::integers(&r, w, &[s]).with(r.from_i64(w, &[1, 0, 1]).unwrap()).unwrap();
            let mut seen_unit = false;
            let mut seen_nonunit = false;
            for b in [0u32, 2, 4, 8] {
                let a = is_unit(&r, &f, &set, b);
                prop_assert!(verify_answer(&r, &f, &set, &a));
                prop_assert!(!(seen_unit && a.is_nonunit()));
                prop_assert!(!(seen_nonunit && a.is_unit()));
                seen_unit |= a.is_unit();
                seen_nonunit |= a.is_nonunit();
            }
        }
    }
}
