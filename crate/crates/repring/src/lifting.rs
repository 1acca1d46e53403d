//! Compatible families over the `p`-subgroups of an EPPO group and their
//! gluing by Brauer induction into a global element `f~` of `R(G)` whose
//! restriction to a cyclic subgroup `K` is a multiple of a given unit `f`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, is_power_of};
use crate::characters::{RepRing, VirtualCharacter};
use crate::cyclicring::{mod_phi, CyclicRingElem};
use crate::groups::{is_eppo, normalizer};
use crate::linalg::{solve_integer, solve_rational};
use crate::localization::{UnitAnswer, UnitProfile};
use crate::Error;

/// A family `(f_H)` indexed by lattice ids of `p`-subgroups.
#[derive(Clone, PartialEq, Eq)]
pub struct MackeyFamily {
    pub prime: usize,
    pub entries: BTreeMap<usize, VirtualCharacter>,
}

impl fmt::Debug for MackeyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MackeyFamily(p = {}, {} entries)", self.prime, self.entries.len())
    }
}

impl MackeyFamily {
    pub fn get(&self, h: usize) -> Option<&VirtualCharacter> {
        self.entries.get(&h)
    }

    /// Entry at the trivial subgroup, as an integer.
    pub fn trivial_value(&self) -> BigInt {
        self.entries[&0].coords()[0].clone()
    }

    pub fn pow(&self, ring: &RepRing, e: u64) -> MackeyFamily {
        MackeyFamily {
            prime: self.prime,
            entries: self.entries.iter().map(|(&h, v)| (h, ring.pow(v, e))).collect(),
        }
    }

    fn mul(&self, ring: &RepRing, o: &MackeyFamily) -> MackeyFamily {
        MackeyFamily {
            prime: self.prime,
            entries: self.entries.iter().map(|(&h, v)| (h, ring.mul(v, &o.entries[&h]))).collect(),
        }
    }

    fn scale(&self, ring: &RepRing, c: &BigInt) -> MackeyFamily {
        MackeyFamily { prime: self.prime, entries: self.entries.iter().map(|(&h, v)| (h, ring.scale(v, c))).collect() }
    }
}

/// Checks (res) for all `L ⊆ H` and (con) for all `g` on the members of the family.
pub fn audit_family(ring: &RepRing, fam: &MackeyFamily) -> Result<(), String> {
    for (&h, fh) in &fam.entries {
        for &l in fam.entries.keys() {
            if l != h && ring.subgroup(l).is_subset_of(ring.subgroup(h)) {
                let r = ring.restrict(fh, l).map_err(|e| e.to_string())?;
                if r != fam.entries[&l] {
                    return Err(format!("res from subgroup {} to {} fails", h, l));
                }
            }
        }
        for g in 0..ring.group().order() {
            let c = ring.conjugate(fh, g);
            match fam.entries.get(&c.subgroup()) {
                Some(t) if *t == c => {}
                Some(_) => return Err(format!("con by element {} on subgroup {} fails", g, h)),
                None => return Err(format!("conjugate of subgroup {} missing", h)),
            }
        }
    }
    Ok(())
}

/// `num / den` with `den > 0` in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug)]
struct QChar {
    num: VirtualCharacter,
    den: BigInt,
}

impl QChar {
    fn new(ring: &RepRing, num: VirtualCharacter, den: BigInt) -> QChar {
        let mut g = den.clone();
        for c in num.coords() {
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        if g.is_one() {
            return QChar { num, den };
        }
        let coords = num.coords().iter().map(|c| c / &g).collect();
        QChar { num: ring.from_coords(num.subgroup(), coords).expect("same rank"), den: den / g }
    }

    fn int(num: VirtualCharacter) -> QChar {
        QChar { num, den: BigInt::one() }
    }

    fn sub_id(&self) -> usize {
        self.num.subgroup()
    }

    fn add(&self, ring: &RepRing, o: &QChar) -> QChar {
        let l = self.den.lcm(&o.den);
        let a = ring.scale(&self.num, &(&l / &self.den));
        let b = ring.scale(&o.num, &(&l / &o.den));
        QChar::new(ring, ring.add(&a, &b), l)
    }

    fn sub(&self, ring: &RepRing, o: &QChar) -> QChar {
        self.add(ring, &QChar { num: ring.neg(&o.num), den: o.den.clone() })
    }

    fn mul(&self, ring: &RepRing, o: &QChar) -> QChar {
        QChar::new(ring, ring.mul(&self.num, &o.num), &self.den * &o.den)
    }

    fn div_int(&self, ring: &RepRing, c: &BigInt) -> QChar {
        QChar::new(ring, self.num.clone(), &self.den * c)
    }

    fn scale(&self, ring: &RepRing, c: &BigInt) -> QChar {
        QChar::new(ring, ring.scale(&self.num, c), self.den.clone())
    }

    #[cfg(test)]
    fn restrict(&self, ring: &RepRing, k: usize) -> QChar {
        QChar { num: ring.restrict(&self.num, k).expect("containment"), den: self.den.clone() }
    }

    fn induce(&self, ring: &RepRing, h: usize) -> QChar {
        QChar::new(ring, ring.induce(&self.num, h).expect("containment"), self.den.clone())
    }

    fn conjugate(&self, ring: &RepRing, g: usize) -> QChar {
        QChar { num: ring.conjugate(&self.num, g), den: self.den.clone() }
    }

    fn one(ring: &RepRing, h: usize) -> QChar {
        QChar::int(ring.one(h))
    }

    fn integral(&self) -> Option<&VirtualCharacter> {
        self.den.is_one().then_some(&self.num)
    }
}

type QFamily = BTreeMap<usize, QChar>;

/// Lattice ids of the `p`-subgroups (including the trivial one) and the cyclic ones among them.
fn p_subgroups(ring: &RepRing, p: usize) -> (Vec<usize>, Vec<usize>) {
    let g = ring.group();
    let members: Vec<usize> =
        (0..ring.num_subgroups()).filter(|&i| is_power_of(ring.subgroup(i).order(), p)).collect();
    let cyclic = members.iter().copied().filter(|&i| ring.subgroup(i).is_cyclic(g)).collect();
    (members, cyclic)
}

/// The subgroup of index `p` in a nontrivial cyclic `p`-group.
fn index_p_subgroup(ring: &RepRing, h: usize, p: usize) -> usize {
    let g = ring.group();
    let gen = ring.subgroup(h).cyclic_generator(g).expect("cyclic");
    ring.id_of(&g.closure(&[g.pow(gen, p)]))
}

/// `1 + I^L_{pL}(b - 1) / p`: the element with component `1` in `Z[zeta_|L|, 1/p]`
/// and restriction `b` to `pL`.
fn lift_one(ring: &RepRing, l: usize, b: &QChar, p: usize) -> QChar {
    let d = b.sub(ring, &QChar::one(ring, b.sub_id()));
    QChar::one(ring, l).add(ring, &d.induce(ring, l).div_int(ring, &BigInt::from(p)))
}

fn unit_check(ring: &RepRing, profile: &UnitProfile, f: &VirtualCharacter, what: &str) -> Result<(), Error> {
    match profile.is_unit(ring, f)? {
        UnitAnswer::Unit(_) => Ok(()),
        UnitAnswer::NonUnit(c) => Err(Error::NotUnit(format!("{}: {:?}", what, c))),
        UnitAnswer::Undecided { bound } => Err(Error::Undecided(format!("{} at bound {}", what, bound))),
    }
}

fn check_cyclic_prime_power(ring: &RepRing, k: usize, p: usize) -> Result<(), Error> {
    if !ring.subgroup(k).is_cyclic(ring.group()) {
        return Err(Error::NotCyclic);
    }
    if !is_power_of(ring.subgroup(k).order(), p) {
        return Err(Error::Mismatch(format!("subgroup is not a {}-group", p)));
    }
    Ok(())
}

/// A family over the cyclic `p`-subgroups with (res), `f_K` a multiple of `f`,
/// `f_e = res(f)^N` and every entry `= 1 mod p`. Returns the family and `N`.
pub fn pre_family(
    ring: &RepRing,
    p: usize,
    k: usize,
    f: &VirtualCharacter,
    profile: &UnitProfile,
) -> Result<(MackeyFamily, u64), Error> {
    check_cyclic_prime_power(ring, k, p)?;
    if profile.divisible_primes(ring).contains(p as u64) {
        return Err(Error::Mismatch(format!("{} is divisible for the profile", p)));
    }
    unit_check(ring, profile, f, "input of pre_family")?;
    let (_, cyclic) = p_subgroups(ring, p);
    let pb = BigInt::from(p);
    let ks = ring.subgroup(k);
    let mut fam: BTreeMap<usize, VirtualCharacter> = BTreeMap::new();
    let fe = ring.restrict(f, 0)?;
    fam.insert(0, ring.pow(&fe, (p - 1) as u64));
    let mut n: u64 = (p - 1) as u64;
    let max_order = cyclic.iter().map(|&h| ring.subgroup(h).order()).max().unwrap_or(1);
    let mut order = p;
    while order <= max_order {
        let pr = order as u64;
        let mut level = BTreeMap::new();
        for &l in cyclic.iter().filter(|&&h| ring.subgroup(h).order() == order) {
            let ft = if ring.subgroup(l).is_subset_of(ks) {
                ring.pow(&ring.restrict(f, l)?, n)
            } else {
                let b = &fam[&index_p_subgroup(ring, l, p)];
                let lifted = lift_one(ring, l, &QChar::int(b.clone()), p);
                lifted.integral().cloned().ok_or_else(|| Error::Inexact("cyclic lift".into()))?
            };
            level.insert(l, ring.pow(&ft, pr));
        }
        for v in fam.values_mut() {
            *v = ring.pow(v, pr);
        }
        fam.extend(level);
        n = n.checked_mul(pr).ok_or_else(|| Error::Internal("exponent overflow".into()))?;
        order *= p;
    }
    for v in fam.values() {
        let d = ring.sub(v, &ring.one(v.subgroup()));
        if d.coords().iter().any(|c| !(c % &pb).is_zero()) {
            return Err(Error::Internal("pre_family entry not congruent to 1 mod p".into()));
        }
    }
    Ok((MackeyFamily { prime: p, entries: fam }, n))
}

/// Replaces `f_H` by `prod_{g in G} con_g(f_{H^g}^(p^(r-1)))`; returns the
/// family and the factor by which the exponent of `f_e` grew.
pub fn stabilize_family(ring: &RepRing, fam: &MackeyFamily, r: u32) -> (MackeyFamily, u64) {
    let g = ring.group();
    let e = (fam.prime as u64).pow(r.saturating_sub(1));
    let powered: BTreeMap<usize, VirtualCharacter> = fam.entries.iter().map(|(&h, v)| (h, ring.pow(v, e))).collect();
    let mut out = BTreeMap::new();
    for &h in fam.entries.keys() {
        let mut acc = ring.one(h);
        for x in 0..g.order() {
            let hx = ring.conjugate_id(g.inv(x), h);
            acc = ring.mul(&acc, &ring.conjugate(&powered[&hx], x));
        }
        out.insert(h, acc);
    }
    (MackeyFamily { prime: fam.prime, entries: out }, e * g.order() as u64)
}

/// Representatives of the `E`-conjugacy classes of cyclic subgroups of `E`
/// (least lattice id in each class).
fn cyclic_class_reps(ring: &RepRing, e: usize) -> Vec<usize> {
    let g = ring.group();
    let es = ring.subgroup(e);
    let mut reps = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for h in 0..ring.num_subgroups() {
        let hs = ring.subgroup(h);
        if !hs.is_subset_of(es) || !hs.is_cyclic(g) || seen.contains(&h) {
            continue;
        }
        reps.push(h);
        for &x in es.elements() {
            seen.insert(ring.conjugate_id(x, h));
        }
    }
    reps
}

/// `1 + I^E_e((f_e - 1)/|E|) + sum_{H in C_E, H != e} I^E_H((f_H - 1)/|N_E(H)/H| - I^H_{pH}((f_pH - 1)/|N_E(H)/pH|))`.
fn f_e_formula(ring: &RepRing, e: usize, fam: &QFamily, p: usize) -> QChar {
    let g = ring.group();
    let es = ring.subgroup(e);
    let one = |h: usize| QChar::one(ring, h);
    let mut acc = one(e);
    let t = fam[&0].sub(ring, &one(0)).div_int(ring, &BigInt::from(es.order()));
    acc = acc.add(ring, &t.induce(ring, e));
    for h in cyclic_class_reps(ring, e) {
        if h == 0 {
            continue;
        }
        let hs = ring.subgroup(h);
        let ph = index_p_subgroup(ring, h, p);
        let n = normalizer(g, es, hs).expect("subgroup").order();
        let a = fam[&h].sub(ring, &one(h)).div_int(ring, &BigInt::from(n / hs.order()));
        let b = fam[&ph].sub(ring, &one(ph)).div_int(ring, &BigInt::from(n / ring.subgroup(ph).order()));
        let term = a.sub(ring, &b.induce(ring, h));
        acc = acc.add(ring, &term.induce(ring, e));
    }
    acc
}

/// Extends a family from the cyclic `p`-subgroups to all `p`-subgroups by the
/// `f_E` formula; every division must be exact.
pub fn extend_to_p_groups(ring: &RepRing, fam: &MackeyFamily) -> Result<MackeyFamily, Error> {
    let p = fam.prime;
    let (members, _) = p_subgroups(ring, p);
    let q: QFamily = fam.entries.iter().map(|(&h, v)| (h, QChar::int(v.clone()))).collect();
    let mut out = fam.entries.clone();
    for &e in &members {
        if out.contains_key(&e) {
            continue;
        }
        let fe = f_e_formula(ring, e, &q, p);
        let v = fe.integral().cloned().ok_or_else(|| Error::Inexact(format!("f_E at subgroup {}", e)))?;
        out.insert(e, v);
    }
    Ok(MackeyFamily { prime: p, entries: out })
}

/// Evaluates the `f_E` formula at any member of the family (used to re-check
/// that it reproduces the cyclic entries and restrictions).
pub fn f_e_formula_at(ring: &RepRing, fam: &MackeyFamily, e: usize) -> Option<VirtualCharacter> {
    let q: QFamily = fam.entries.iter().map(|(&h, v)| (h, QChar::int(v.clone()))).collect();
    f_e_formula(ring, e, &q, fam.prime).integral().cloned()
}

/// The family over all `p`-subgroups for `p` not divisible: `f_K` a multiple of `f`,
/// `f_e = res(f)^N`. Returns the family and `N`.
pub fn f_lift_not_p_divisible(
    ring: &RepRing,
    p: usize,
    k: usize,
    f: &VirtualCharacter,
    profile: &UnitProfile,
) -> Result<(MackeyFamily, u64), Error> {
    let (fam, n) = pre_family(ring, p, k, f, profile)?;
    let r = factorize(ring.group().order()).into_iter().find(|&(q, _)| q == p).map_or(0, |(_, r)| r);
    let (fam, m) = stabilize_family(ring, &fam, r);
    let fam = extend_to_p_groups(ring, &fam)?;
    Ok((fam, n * m))
}

/// Components `mod Phi_|H|` of a cyclic entry, as a rational vector.
fn phi_component(ring: &RepRing, x: &QChar, h: usize) -> Vec<BigRational> {
    let gen = ring.subgroup(h).cyclic_generator(ring.group()).expect("cyclic");
    let c = ring.to_cyclic(&x.num, gen).expect("cyclic");
    let den = BigRational::from_integer(x.den.clone());
    if ring.subgroup(h).order() == 1 {
        return vec![BigRational::from_integer(c.coeffs()[0].clone()) / den];
    }
    mod_phi(&c).expect("prime power").coeffs().iter().map(|v| v / &den).collect()
}

/// The family over all `p`-subgroups for `p` divisible: cyclic entries from the
/// splitting `R(L)[1/p] = Z[zeta, 1/p] + R(pL)[1/p]`, symmetrized, non-cyclic
/// entries from their cyclotomic components, then scaled by the least `p^N`
/// making everything integral. Returns the family and `N`.
pub fn p_divisible_lift(
    ring: &RepRing,
    p: usize,
    k: usize,
    f: &VirtualCharacter,
    profile: &UnitProfile,
) -> Result<(MackeyFamily, u32), Error> {
    check_cyclic_prime_power(ring, k, p)?;
    if !profile.divisible_primes(ring).contains(p as u64) {
        return Err(Error::Mismatch(format!("{} is not divisible for the profile", p)));
    }
    unit_check(ring, profile, f, "input of p_divisible_lift")?;
    let g = ring.group();
    let (members, cyclic) = p_subgroups(ring, p);
    let ks = ring.subgroup(k);
    let mut fam: QFamily = BTreeMap::new();
    let mut by_order = cyclic.clone();
    by_order.sort_by_key(|&h| ring.subgroup(h).order());
    for &l in &by_order {
        let v = if ring.subgroup(l).is_subset_of(ks) {
            QChar::int(ring.restrict(f, l)?)
        } else {
            lift_one(ring, l, &fam[&index_p_subgroup(ring, l, p)], p)
        };
        fam.insert(l, v);
    }
    let mut sym: QFamily = BTreeMap::new();
    for &h in &cyclic {
        let mut acc = QChar::one(ring, h);
        for x in 0..g.order() {
            let hx = ring.conjugate_id(g.inv(x), h);
            acc = acc.mul(ring, &fam[&hx].conjugate(ring, x));
        }
        sym.insert(h, acc);
    }
    for &l in &members {
        if sym.contains_key(&l) {
            continue;
        }
        let v = solve_from_components(ring, l, &sym)?;
        sym.insert(l, v);
    }
    let pb = BigInt::from(p);
    let mut n = 0u32;
    for v in sym.values() {
        let mut d = v.den.clone();
        let mut e = 0u32;
        while (&d % &pb).is_zero() {
            d /= &pb;
            e += 1;
        }
        if !d.is_one() {
            return Err(Error::BadDenominator(p));
        }
        n = n.max(e);
    }
    let scale = pb.pow(n);
    let entries = sym
        .into_iter()
        .map(|(h, v)| {
            let s = v.scale(ring, &scale);
            (h, s.integral().cloned().expect("cleared denominators"))
        })
        .collect();
    Ok((MackeyFamily { prime: p, entries }, n))
}

/// The element of `R(L)[1/p]` whose image mod `Phi_|H|` equals that of the
/// given cyclic entry for every cyclic `H ⊆ L`.
fn solve_from_components(ring: &RepRing, l: usize, cyc: &QFamily) -> Result<QChar, Error> {
    let ls = ring.subgroup(l);
    let n = ring.rank(l);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for (&h, v) in cyc {
        if !ring.subgroup(h).is_subset_of(ls) || !ring.subgroup(h).is_cyclic(ring.group()) {
            continue;
        }
        let cols: Vec<Vec<BigRational>> = (0..n)
            .map(|j| phi_component(ring, &QChar::int(ring.restrict(&ring.irreducible(l, j), h).expect("subset")), h))
            .collect();
        let target = phi_component(ring, v, h);
        for (i, t) in target.into_iter().enumerate() {
            rows.push(cols.iter().map(|c| c[i].clone()).collect());
            rhs.push(t);
        }
    }
    let x = solve_rational(&rows, n, &rhs).ok_or_else(|| Error::Internal("component system inconsistent".into()))?;
    let den = x.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let coords = x.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    Ok(QChar::new(ring, ring.from_coords(l, coords)?, den))
}

/// The family `psi` over all `p`-subgroups with `psi_e = p^r a`, built from
/// `psi'_H = 1 - Phi/p + I(psi'_pH)/p` and the `f_E` formula, scaled by `p^r`.
pub fn integer_lift(
    ring: &RepRing,
    p: usize,
    r: u32,
    a: &BigInt,
    profile: &UnitProfile,
) -> Result<MackeyFamily, Error> {
    if !profile.divisible_primes(ring).contains(p as u64) {
        return Err(Error::Mismatch(format!("{} is not divisible for the profile", p)));
    }
    unit_check(ring, profile, &ring.constant(0, a), "integer_lift input")?;
    integer_lift_unchecked(ring, p, r, a)
}

fn integer_lift_unchecked(ring: &RepRing, p: usize, r: u32, a: &BigInt) -> Result<MackeyFamily, Error> {
    let (members, cyclic) = p_subgroups(ring, p);
    let mut fam: QFamily = BTreeMap::new();
    fam.insert(0, QChar::int(ring.constant(0, a)));
    let mut by_order = cyclic.clone();
    by_order.sort_by_key(|&h| ring.subgroup(h).order());
    for &h in by_order.iter().filter(|&&h| h != 0) {
        let v = lift_one(ring, h, &fam[&index_p_subgroup(ring, h, p)], p);
        fam.insert(h, v);
    }
    for &l in &members {
        if !fam.contains_key(&l) {
            let v = f_e_formula(ring, l, &fam, p);
            fam.insert(l, v);
        }
    }
    let scale = BigInt::from(p).pow(r);
    let mut entries = BTreeMap::new();
    for (h, v) in fam {
        let s = v.scale(ring, &scale);
        let s = s.integral().cloned().ok_or_else(|| Error::Inexact(format!("integer lift at subgroup {}", h)))?;
        entries.insert(h, s);
    }
    Ok(MackeyFamily { prime: p, entries })
}

/// `phi_H` for conjugacy representatives `H` of the subgroups of prime-power
/// order (the trivial subgroup included) with `sum Ind(phi_H) = 1`.
#[derive(Clone, Debug)]
pub struct BrauerDecomposition {
    pub entries: Vec<(usize, VirtualCharacter)>,
}

impl BrauerDecomposition {
    /// `sum_H Ind_H^G(phi_H)`.
    pub fn total(&self, ring: &RepRing) -> VirtualCharacter {
        let w = ring.whole_id();
        self.entries.iter().fold(ring.zero(w), |acc, (_, phi)| ring.add(&acc, &ring.induce(phi, w).expect("subgroup")))
    }
}

/// Least lattice id in each conjugacy class of subgroups of prime-power order (and `{e}`).
pub fn elementary_class_reps(ring: &RepRing) -> Vec<usize> {
    let g = ring.group();
    let mut seen = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for h in 0..ring.num_subgroups() {
        let o = ring.subgroup(h).order();
        let pp = o == 1 || factorize(o).len() == 1;
        if !pp || seen.contains(&h) {
            continue;
        }
        reps.push(h);
        for x in 0..g.order() {
            seen.insert(ring.conjugate_id(x, h));
        }
    }
    reps
}

pub fn brauer_coefficients(ring: &RepRing) -> Result<BrauerDecomposition, Error> {
    let g = ring.group();
    if !is_eppo(g) {
        return Err(Error::NotEppo(g.name().to_string()));
    }
    let w = ring.whole_id();
    let reps = elementary_class_reps(ring);
    let mut cols: Vec<(usize, usize, Vec<BigInt>)> = Vec::new();
    for &h in &reps {
        for i in 0..ring.rank(h) {
            let ind = ring.induce(&ring.irreducible(h, i), w)?;
            cols.push((h, i, ind.coords().to_vec()));
        }
    }
    let n = ring.rank(w);
    let a: Vec<Vec<BigInt>> = (0..n).map(|r| cols.iter().map(|c| c.2[r].clone()).collect()).collect();
    let mut b = vec![BigInt::zero(); n];
    b[0] = BigInt::one();
    let x = solve_integer(&a, cols.len(), &b).ok_or_else(|| Error::Internal("Brauer system has no integer solution".into()))?;
    let mut entries: Vec<(usize, VirtualCharacter)> = reps.iter().map(|&h| (h, ring.zero(h))).collect();
    for ((h, i, _), c) in cols.iter().zip(x) {
        let slot = entries.iter_mut().find(|(id, _)| id == h).expect("rep");
        let mut coords = slot.1.coords().to_vec();
        coords[*i] += c;
        slot.1 = ring.from_coords(*h, coords)?;
    }
    let dec = BrauerDecomposition { entries };
    if dec.total(ring) != ring.one(w) {
        return Err(Error::Internal("Brauer identity fails".into()));
    }
    Ok(dec)
}

/// Output of [`assemble_and_glue`].
#[derive(Clone, Debug)]
pub struct LiftResult {
    pub f_tilde: VirtualCharacter,
    pub families: Vec<MackeyFamily>,
    /// `res^K(f~) = multiplier * f`, in `Z[t]/(t^|K| - 1)` for the canonical generator of `K`.
    pub multiplier: CyclicRingElem,
    pub log: Vec<String>,
}

fn exponent_of(p: usize, g_order: usize) -> u32 {
    factorize(g_order).into_iter().find(|&(q, _)| q == p).map_or(0, |(_, r)| r)
}

fn pow_u64(x: &BigInt, e: u64) -> BigInt {
    num_traits::pow(x.clone(), e.to_usize().expect("exponent fits"))
}

/// Builds the families for all primes of `|G|` with a common value at `{e}`
/// and glues them with Brauer coefficients.
pub fn assemble_and_glue(
    ring: &RepRing,
    k: usize,
    f: &VirtualCharacter,
    profile: &UnitProfile,
) -> Result<LiftResult, Error> {
    let g = ring.group();
    if !is_eppo(g) {
        return Err(Error::NotEppo(g.name().to_string()));
    }
    if f.subgroup() != k {
        return Err(Error::Mismatch("f does not live on K".into()));
    }
    let ks = ring.subgroup(k);
    let kgen = ks.cyclic_generator(g).ok_or(Error::NotCyclic)?;
    unit_check(ring, profile, f, "input f")?;
    let mut log = Vec::new();
    let primes = factorize(g.order());
    let w = ring.whole_id();
    if primes.is_empty() {
        let multiplier = CyclicRingElem::one(1);
        log.push("trivial group: f~ = f".into());
        return Ok(LiftResult { f_tilde: f.clone(), families: vec![], multiplier, log });
    }
    let div = profile.divisible_primes(ring);
    let is_div = |p: usize| div.contains(p as u64);
    let pk = if ks.order() > 1 {
        factorize(ks.order())[0].0
    } else {
        primes.iter().map(|&(p, _)| p).find(|&p| !is_div(p)).unwrap_or(primes[0].0)
    };
    let big_r: BigInt = primes.iter().filter(|&&(p, _)| is_div(p)).map(|&(p, r)| BigInt::from(p).pow(r)).product();
    log.push(format!(
        "primes {:?}, divisible {:?}, K has prime {}",
        primes.iter().map(|x| x.0).collect::<Vec<_>>(),
        primes.iter().map(|x| x.0).filter(|&p| is_div(p)).collect::<Vec<_>>(),
        pk
    ));
    let mut fams: BTreeMap<usize, MackeyFamily> = BTreeMap::new();
    if is_div(pk) {
        let (fp, n) = p_divisible_lift(ring, pk, k, f, profile)?;
        log.push(format!("p = {}: p-divisible lift, scaled by {}^{}", pk, pk, n));
        let rk = exponent_of(pk, g.order());
        let a = &big_r / BigInt::from(pk).pow(rk);
        let psi = integer_lift(ring, pk, rk, &a, profile)?;
        log.push(format!("p = {}: integer lift with psi_e = {}", pk, big_r));
        fams.insert(pk, fp.mul(ring, &psi));
    } else {
        let (fp, n) = f_lift_not_p_divisible(ring, pk, k, f, profile)?;
        log.push(format!("p = {}: lift for a non-divisible prime, f_e = res(f)^{}", pk, n));
        let fam = if big_r > BigInt::one() {
            let (fpp, _) = f_lift_not_p_divisible(ring, pk, 0, &ring.constant(0, &big_r), profile)?;
            let c = fpp.trivial_value();
            log.push(format!("p = {}: second lift from {{e}} gives the constant factor {}", pk, c));
            fp.scale(ring, &c)
        } else {
            fp
        };
        fams.insert(pk, fam);
    }
    let mut fe = fams[&pk].trivial_value();
    for &(p, r) in primes.iter().filter(|&&(p, _)| p != pk && is_div(p)) {
        let a = &fe / BigInt::from(p).pow(r);
        fams.insert(p, integer_lift(ring, p, r, &a, profile)?);
        log.push(format!("p = {}: integer lift matching f_e", p));
    }
    for &(p, _) in primes.iter().filter(|&&(p, _)| p != pk && !is_div(p)) {
        let (fam, n) = f_lift_not_p_divisible(ring, p, 0, &ring.constant(0, &fe), profile)?;
        for v in fams.values_mut() {
            *v = v.pow(ring, n);
        }
        fe = pow_u64(&fe, n);
        fams.insert(p, fam);
        log.push(format!("p = {}: lift from {{e}}, other families raised to the power {}", p, n));
    }
    for fam in fams.values() {
        if fam.trivial_value() != fe {
            return Err(Error::Internal("families disagree at {e}".into()));
        }
        audit_family(ring, fam).map_err(Error::Internal)?;
        log.push(format!("p = {}: (res) and (con) hold on {} subgroups", fam.prime, fam.entries.len()));
    }

    let brauer = brauer_coefficients(ring)?;
    let mut f_tilde = ring.zero(w);
    for (h, phi) in &brauer.entries {
        let o = ring.subgroup(*h).order();
        let p = if o == 1 { pk } else { factorize(o)[0].0 };
        let fh = &fams[&p].entries[h];
        f_tilde = ring.add(&f_tilde, &ring.induce(&ring.mul(phi, fh), w)?);
    }
    log.push(format!("glued over {} elementary classes", brauer.entries.len()));

    let mut checked = std::collections::HashSet::new();
    for l in 0..ring.num_subgroups() {
        let ls = ring.subgroup(l);
        if !ls.is_cyclic(g) {
            continue;
        }
        let o = ls.order();
        let p = if o == 1 { pk } else { factorize(o)[0].0 };
        let fl = &fams[&p].entries[&l];
        if ring.restrict(&f_tilde, l)? != *fl {
            return Err(Error::Internal(format!("res of f~ to subgroup {} differs from the family", l)));
        }
        if checked.insert(class_key(ring, l)) {
            unit_check(ring, profile, fl, "restriction of f~")?;
            log.push(format!("res to {} is a unit", ls.generators_text(g)));
        }
    }
    log.push("res^L(f~) = f_L for every cyclic L".into());

    let fk = ring.restrict(&f_tilde, k)?;
    let m = ring.mult_matrix(f);
    let x = solve_integer(&m, m.len(), fk.coords()).ok_or_else(|| Error::Internal("res^K(f~) is not a multiple of f".into()))?;
    let mult = ring.from_coords(k, x)?;
    let multiplier = ring.to_cyclic(&mult, kgen)?;
    log.push("res^K(f~) = multiplier * f".into());
    Ok(LiftResult { f_tilde, families: fams.into_values().collect(), multiplier, log })
}

fn class_key(ring: &RepRing, l: usize) -> usize {
    let g = ring.group();
    (0..g.order()).map(|x| ring.conjugate_id(x, l)).min().expect("nonempty group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclicring::{unsplit, LocalCyclicElem};
    use crate::cyclotomic::CycNum;
    use crate::groups::catalog_group;
    use crate::localization::{MultSet, DEFAULT_BOUND};
    use std::sync::Arc;

    fn ring(name: &str) -> RepRing {
        RepRing::new(Arc::new(catalog_group(name).unwrap()))
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn profile(r: &RepRing, ints: &[i64]) -> UnitProfile {
        UnitProfile::new(MultSet::integers(r, r.whole_id(), ints), DEFAULT_BOUND)
    }

    fn cyc(r: &RepRing, id: usize) -> usize {
        r.subgroup(id).cyclic_generator(r.group()).unwrap()
    }

    #[test]
    fn pre_family_examples() {
        let r = ring("C3");
        let w = r.whole_id();
        let pr = profile(&r, &[2]);
        let (fam, n) = pre_family(&r, 3, w, &r.constant(w, &int(2)), &pr).unwrap();
        assert_eq!(fam.trivial_value(), int(2).pow(n as u32));
        let top = &fam.entries[&w];
        let d = r.sub(top, &r.one(w));
        assert!(d.coords().iter().all(|c| (c % BigInt::from(3)).is_zero()));

        let r = ring("S3");
        let c3 = r.id_of(&r.group().parse_subgroup("(0 1 2)").unwrap());
        let t = r.from_cyclic(c3, cyc(&r, c3), &CyclicRingElem::from_i64(3, &[0, 1])).unwrap();
        let (fam, _) = pre_family(&r, 3, c3, &t, &profile(&r, &[])).unwrap();
        assert_eq!(fam.trivial_value(), int(1));

        let (fam, _) = pre_family(&r, 3, c3, &r.one(c3), &profile(&r, &[])).unwrap();
        assert!(fam.entries.iter().all(|(&h, v)| *v == r.one(h)));
        assert!(pre_family(&r, 3, c3, &r.one(c3), &profile(&r, &[3])).is_err());
    }

    #[test]
    fn stabilized_family_satisfies_con() {
        let r = ring("S3");
        let c3 = r.id_of(&r.group().parse_subgroup("(0 1 2)").unwrap());
        let pr = profile(&r, &[2]);
        let f = r.from_cyclic(c3, cyc(&r, c3), &CyclicRingElem::from_i64(3, &[2, 0, 0])).unwrap();
        let (fam, _) = pre_family(&r, 3, c3, &f, &pr).unwrap();
        let (st, _) = stabilize_family(&r, &fam, 1);
        audit_family(&r, &st).unwrap();
        let ones = MackeyFamily { prime: 3, entries: fam.entries.keys().map(|&h| (h, r.one(h))).collect() };
        assert_eq!(stabilize_family(&r, &ones, 1).0, ones);
        // over a cyclic group stabilizing is a plain power
        let r = ring("C9");
        let w = r.whole_id();
        let (fam, _) = pre_family(&r, 3, w, &r.constant(w, &int(2)), &profile(&r, &[2])).unwrap();
        let (st, m) = stabilize_family(&r, &fam, 2);
        assert_eq!(st, fam.pow(&r, m));
    }

    #[test]
    fn extension_over_q8_and_s3() {
        let r = ring("Q8");
        let c4 = (0..r.num_subgroups()).find(|&h| r.subgroup(h).order() == 4).unwrap();
        let pr = profile(&r, &[3]);
        let f = r.constant(c4, &int(3));
        let (fam, _) = f_lift_not_p_divisible(&r, 2, c4, &f, &pr).unwrap();
        assert_eq!(fam.entries.len(), r.num_subgroups());
        audit_family(&r, &fam).unwrap();
        for (&h, v) in &fam.entries {
            assert_eq!(f_e_formula_at(&r, &fam, h).as_ref(), Some(v), "subgroup {}", h);
        }
        let ones = MackeyFamily { prime: 2, entries: (0..r.num_subgroups()).filter(|&h| r.subgroup(h).is_cyclic(r.group())).map(|h| (h, r.one(h))).collect() };
        let ext = extend_to_p_groups(&r, &ones).unwrap();
        assert!(ext.entries.iter().all(|(&h, v)| *v == r.one(h)));

        let r = ring("S3");
        let c3 = r.id_of(&r.group().parse_subgroup("(0 1 2)").unwrap());
        let (fam, _) = pre_family(&r, 3, c3, &r.constant(c3, &int(2)), &profile(&r, &[2])).unwrap();
        let (st, _) = stabilize_family(&r, &fam, 1);
        assert_eq!(extend_to_p_groups(&r, &st).unwrap(), st);
    }

    #[test]
    fn f1_lemma_part_one() {
        let r = ring("D4");
        let g = r.group();
        let c4 = (0..r.num_subgroups()).find(|&h| r.subgroup(h).order() == 4 && r.subgroup(h).is_cyclic(g)).unwrap();
        let pr = profile(&r, &[3]);
        let (fam, _) = f_lift_not_p_divisible(&r, 2, c4, &r.constant(c4, &int(3)), &pr).unwrap();
        let w = r.whole_id();
        let ws = r.subgroup(w);
        for (&h, fh) in fam.entries.iter().filter(|(&h, _)| h != 0 && r.subgroup(h).is_cyclic(g)) {
            let ph = index_p_subgroup(&r, h, 2);
            let n = normalizer(g, ws, r.subgroup(h)).unwrap().order();
            for l in 0..r.num_subgroups() {
                if r.subgroup(h).is_subset_of(r.subgroup(l)) {
                    continue;
                }
                let hl = r.id_of(&r.subgroup(h).intersect(g, r.subgroup(l)));
                let a = QChar::int(r.sub(fh, &r.one(h))).div_int(&r, &int((n / r.subgroup(h).order()) as i64));
                let b = QChar::int(r.sub(&fam.entries[&ph], &r.one(ph))).div_int(&r, &int((n / r.subgroup(ph).order()) as i64));
                let x = a.sub(&r, &b.induce(&r, h)).restrict(&r, hl);
                assert!(x.num.is_zero());
            }
        }
    }

    #[test]
    fn integer_lift_examples() {
        let r = ring("C2");
        let w = r.whole_id();
        let fam = integer_lift(&r, 2, 1, &int(3), &profile(&r, &[6])).unwrap();
        assert_eq!(fam.trivial_value(), int(6));
        assert_eq!(r.to_cyclic(&fam.entries[&w], cyc(&r, w)).unwrap(), CyclicRingElem::from_i64(2, &[4, 2]));
        assert!(integer_lift(&r, 2, 1, &int(3), &profile(&r, &[])).is_err());

        let r = ring("C5");
        let fam = integer_lift(&r, 5, 1, &int(1), &profile(&r, &[5])).unwrap();
        assert_eq!(fam.trivial_value(), int(5));
        audit_family(&r, &fam).unwrap();

        let r = ring("C4");
        let fam = integer_lift(&r, 2, 2, &int(1), &profile(&r, &[2])).unwrap();
        assert_eq!(fam.trivial_value(), int(4));
        audit_family(&r, &fam).unwrap();

        let r = ring("Q8");
        let fam = integer_lift(&r, 2, 3, &int(5), &profile(&r, &[10])).unwrap();
        assert_eq!(fam.trivial_value(), int(40));
        audit_family(&r, &fam).unwrap();
    }

    #[test]
    fn lift_one_is_unsplit() {
        for (p, m) in [(2usize, 2u32), (3, 1), (2, 3), (3, 2)] {
            let n = p.pow(m);
            let r = ring(&format!("C{}", n));
            let w = r.whole_id();
            let gen = cyc(&r, w);
            let sub = r.id_of(&r.group().closure(&[r.group().pow(gen, p)]));
            let sgen = r.group().pow(gen, p);
            let b = CyclicRingElem::from_i64(n / p, &(0..(n / p) as i64).map(|i| 2 * i + 1).collect::<Vec<_>>());
            let bq = QChar::int(r.from_cyclic(sub, sgen, &b).unwrap());
            let lifted = lift_one(&r, w, &bq, p);
            let expect = unsplit(&CycNum::one(n), &LocalCyclicElem::from_integral(&b, p)).unwrap();
            let got = LocalCyclicElem::from_rationals(
                n,
                p,
                &r.to_cyclic(&lifted.num, gen)
                    .unwrap()
                    .coeffs()
                    .iter()
                    .map(|c| BigRational::new(c.clone(), lifted.den.clone()))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn p_divisible_examples() {
        let r = ring("C4");
        let w = r.whole_id();
        let gen = cyc(&r, w);
        let c2 = r.id_of(&r.group().closure(&[r.group().pow(gen, 2)]));
        let t2 = r.from_cyclic(c2, r.group().pow(gen, 2), &CyclicRingElem::from_i64(2, &[0, 1])).unwrap();
        let pr = profile(&r, &[2]);
        let (fam, n) = p_divisible_lift(&r, 2, c2, &t2, &pr).unwrap();
        audit_family(&r, &fam).unwrap();
        let top = r.to_cyclic(&fam.entries[&w], gen).unwrap();
        let expect = unsplit(&CycNum::one(4), &LocalCyclicElem::from_integral(&CyclicRingElem::from_i64(2, &[0, 1]), 2)).unwrap();
        // symmetrizing over the abelian group raises to the |G|-th power
        let expect = (0..4).fold(LocalCyclicElem::from_integral(&CyclicRingElem::one(4), 2), |acc, _| acc.mul(&expect));
        let scaled = LocalCyclicElem::new(top, 2, n);
        assert_eq!(scaled, expect);

        let (fam, n) = p_divisible_lift(&r, 2, w, &r.one(w), &pr).unwrap();
        assert_eq!(n, 0);
        assert!(fam.entries.iter().all(|(&h, v)| *v == r.one(h)));

        let r = ring("Q8");
        let c4 = (0..r.num_subgroups()).find(|&h| r.subgroup(h).order() == 4).unwrap();
        let t = r.from_cyclic(c4, cyc(&r, c4), &CyclicRingElem::from_i64(4, &[0, 1])).unwrap();
        let pr = profile(&r, &[2]);
        let (fam, _) = p_divisible_lift(&r, 2, c4, &t, &pr).unwrap();
        assert_eq!(fam.entries.len(), r.num_subgroups());
        audit_family(&r, &fam).unwrap();
    }

    #[test]
    fn brauer_examples() {
        for name in ["C1", "C8", "Q8", "S3", "A4"] {
            let r = ring(name);
            let b = brauer_coefficients(&r).unwrap();
            assert_eq!(b.total(&r), r.one(r.whole_id()), "{}", name);
        }
        let r = ring("C6");
        assert!(brauer_coefficients(&r).is_err());
    }

    #[test]
    fn glue_examples() {
        let r = ring("S3");
        let c3 = r.id_of(&r.group().parse_subgroup("(0 1 2)").unwrap());
        let pr = profile(&r, &[2]);
        let res = assemble_and_glue(&r, c3, &r.one(c3), &pr).unwrap();
        let d = r.dimension(&res.f_tilde);
        assert!(d > BigInt::zero());
        for l in 0..r.num_subgroups() {
            let v = r.restrict(&res.f_tilde, l).unwrap();
            if r.subgroup(l).is_cyclic(r.group()) {
                assert_eq!(r.dimension(&v), d);
            }
        }

        let r = ring("C4");
        let w = r.whole_id();
        let gen = cyc(&r, w);
        let f = r.from_cyclic(w, gen, &CyclicRingElem::from_i64(4, &[0, 1])).unwrap();
        let res = assemble_and_glue(&r, w, &f, &profile(&r, &[])).unwrap();
        assert_eq!(res.families.len(), 1);
        assert_eq!(res.f_tilde, res.families[0].entries[&w]);
    }
}
