//! Character tables and the representation rings `R(H)` of all subgroups
//! of a permutation group, with restriction, induction and conjugation.
//!
//! Character values are stored as integer coordinates in the power basis of
//! `Z[zeta_N]`, where `N` is the exponent of the ambient group.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::euler_phi;
use crate::cyclicring::CyclicRingElem;
use crate::cyclotomic::CycNum;
use crate::groups::{classes_within, double_cosets, normalizer, PermGroup, Subgroup};
use crate::Error;

/// Integer arithmetic in `Z[zeta_n]` on power-basis coordinates.
pub(crate) struct CycArith {
    level: usize,
    phi: usize,
    zpow: Vec<Vec<i64>>,
}

impl CycArith {
    fn new(level: usize) -> Self {
        let zpow = (0..level)
            .map(|k| CycNum::zeta_pow(level, k as i64).to_i64_vec().expect("roots of unity are integral"))
            .collect();
        CycArith { level, phi: euler_phi(level), zpow }
    }

    fn zero(&self) -> Vec<i64> {
        vec![0; self.phi]
    }

    fn int(&self, c: i64) -> Vec<i64> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    fn zeta(&self, k: usize) -> &[i64] {
        &self.zpow[k % self.level]
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut raw = vec![0i64; 2 * self.phi - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                raw[i + j] += x * y;
            }
        }
        let mut out = self.zero();
        for (k, &c) in raw.iter().enumerate() {
            if c != 0 {
                for (o, z) in out.iter_mut().zip(self.zeta(k)) {
                    *o += c * z;
                }
            }
        }
        out
    }

    fn conj(&self, a: &[i64]) -> Vec<i64> {
        let mut out = self.zero();
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                for (o, z) in out.iter_mut().zip(self.zeta(self.level - i)) {
                    *o += c * z;
                }
            }
        }
        out
    }
}

pub(crate) fn arith(level: usize) -> Arc<CycArith> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CycArith>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache.lock().unwrap().entry(level).or_insert_with(|| Arc::new(CycArith::new(level))).clone()
}

fn to_cycnum(level: usize, v: &[i64]) -> CycNum {
    CycNum::from_poly(level, v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
}

/// Conjugacy classes of a subgroup together with the arithmetic used for its
/// character values.
pub struct ClassData {
    order: usize,
    classes: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    class_of: Vec<u32>,
    arith: Arc<CycArith>,
}

impl ClassData {
    fn new(g: &PermGroup, els: &[usize], level: usize) -> Self {
        let classes = classes_within(g, els);
        let sizes = classes.iter().map(|c| c.len()).collect();
        let mut class_of = vec![u32::MAX; g.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i as u32;
            }
        }
        ClassData { order: els.len(), classes, sizes, class_of, arith: arith(level) }
    }

    fn class(&self, x: usize) -> usize {
        let c = self.class_of[x];
        assert!(c != u32::MAX, "element outside the subgroup");
        c as usize
    }

    fn pair(&self, a: &[Vec<i64>], dual: &[Vec<i64>]) -> Option<i64> {
        let mut acc = self.arith.zero();
        for (x, y) in a.iter().zip(dual) {
            for (s, t) in acc.iter_mut().zip(self.arith.mul(x, y)) {
                *s += t;
            }
        }
        let ord = self.order as i64;
        (acc[1..].iter().all(|&c| c == 0) && acc[0] % ord == 0).then(|| acc[0] / ord)
    }

    fn dual(&self, chi: &[Vec<i64>]) -> Vec<Vec<i64>> {
        chi.iter()
            .zip(&self.sizes)
            .map(|(v, &s)| self.arith.conj(v).into_iter().map(|c| c * s as i64).collect())
            .collect()
    }
}

/// A class function with values in `Z[zeta_N]`.
#[derive(Clone)]
pub struct ClassFunction {
    data: Arc<ClassData>,
    vals: Vec<Vec<i64>>,
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values().iter().map(|c| c.to_text()).collect();
        write!(f, "[{}]", v.join(", "))
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) && self.vals == other.vals
    }
}

impl ClassFunction {
    pub fn level(&self) -> usize {
        self.data.arith.level
    }

    /// Values on the classes, in class order.
    pub fn values(&self) -> Vec<CycNum> {
        self.vals.iter().map(|v| to_cycnum(self.level(), v)).collect()
    }

    pub fn degree(&self) -> i64 {
        self.vals[0][0]
    }

    fn map2(&self, o: &Self, f: impl Fn(&[i64], &[i64]) -> Vec<i64>) -> Self {
        assert!(Arc::ptr_eq(&self.data, &o.data), "class functions on different groups");
        ClassFunction { data: self.data.clone(), vals: self.vals.iter().zip(&o.vals).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let ar = self.data.arith.clone();
        self.map2(o, |a, b| ar.mul(a, b))
    }

    pub fn scale(&self, c: i64) -> Self {
        ClassFunction { data: self.data.clone(), vals: self.vals.iter().map(|v| v.iter().map(|x| x * c).collect()).collect() }
    }
}

/// `<chi, psi> = |G|^-1 sum chi(g) conj(psi(g))`.
pub fn inner_product(chi: &ClassFunction, psi: &ClassFunction) -> Result<CycNum, Error> {
    if !Arc::ptr_eq(&chi.data, &psi.data) {
        return Err(Error::Mismatch("class functions on different groups".into()));
    }
    let d = &chi.data;
    let dual = d.dual(&psi.vals);
    let mut acc = CycNum::zero(d.arith.level);
    for (x, y) in chi.vals.iter().zip(&dual) {
        acc = &acc + &to_cycnum(d.arith.level, &d.arith.mul(x, y));
    }
    Ok(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(d.order))))
}

/// The irreducible characters of a group (or of a subgroup of an ambient group).
pub struct CharacterTable {
    data: Arc<ClassData>,
    irr: Vec<Vec<Vec<i64>>>,
    duals: Vec<Vec<Vec<i64>>>,
}

impl fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharacterTable(order {}, degrees {:?})", self.data.order, self.degrees())
    }
}

impl CharacterTable {
    pub fn level(&self) -> usize {
        self.data.arith.level
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn num_classes(&self) -> usize {
        self.data.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.data.classes
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.data.sizes
    }

    /// The least element of each class; class 0 is the identity.
    pub fn class_representatives(&self) -> Vec<usize> {
        self.data.classes.iter().map(|c| c[0]).collect()
    }

    /// Class index of an element of the subgroup.
    pub fn class_of(&self, x: usize) -> Option<usize> {
        let c = self.data.class_of[x];
        (c != u32::MAX).then_some(c as usize)
    }

    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.irr.iter().map(|v| v[0][0]).collect()
    }

    pub fn irreducible(&self, i: usize) -> ClassFunction {
        ClassFunction { data: self.data.clone(), vals: self.irr[i].clone() }
    }

    pub fn irreducibles(&self) -> Vec<ClassFunction> {
        (0..self.irr.len()).map(|i| self.irreducible(i)).collect()
    }

    /// A class function from values given per class.
    pub fn class_function(&self, values: &[CycNum]) -> Result<ClassFunction, Error> {
        if values.len() != self.num_classes() {
            return Err(Error::Mismatch("wrong number of class values".into()));
        }
        let mut vals = Vec::new();
        for v in values {
            let v = if v.level() == self.level() { v.clone() } else { v.lift_to(self.level()) };
            vals.push(v.to_i64_vec().ok_or_else(|| Error::Mismatch("class values must be integral".into()))?);
        }
        Ok(ClassFunction { data: self.data.clone(), vals })
    }

    fn decompose_raw(&self, vals: &[Vec<i64>]) -> Option<Vec<i64>> {
        self.duals.iter().map(|d| self.data.pair(vals, d)).collect()
    }

    /// Integer coordinates in the irreducible basis, `None` for a class
    /// function outside the character lattice.
    pub fn decompose(&self, f: &ClassFunction) -> Option<Vec<i64>> {
        if !Arc::ptr_eq(&f.data, &self.data) {
            return None;
        }
        let c = self.decompose_raw(&f.vals)?;
        let back = self.combine(&c);
        (back == f.vals).then_some(c)
    }

    fn combine(&self, c: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![self.data.arith.zero(); self.num_classes()];
        for (ci, chi) in c.iter().zip(&self.irr) {
            if *ci == 0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(chi) {
                for (s, t) in o.iter_mut().zip(v) {
                    *s += ci * t;
                }
            }
        }
        out
    }
}

/// The character table of the whole group, values at level `exp(G)`.
pub fn character_table(g: &PermGroup) -> CharacterTable {
    let els: Vec<usize> = (0..g.order()).collect();
    build_table(g, &els, g.exponent())
}

/// Induced characters `Ind_C^H lambda` for every cyclic subgroup `C` (up to
/// conjugacy) and every linear character `lambda` of `C`.
fn artin_seeds(g: &PermGroup, data: &ClassData) -> Vec<Vec<Vec<i64>>> {
    let ar = &data.arith;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for cls in &data.classes {
        let x = cls[0];
        let m = g.element_order(x);
        let mut powers = Vec::with_capacity(m);
        let mut y = g.identity();
        for _ in 0..m {
            powers.push(y);
            y = g.mul(y, x);
        }
        let mut key = powers.clone();
        key.sort_unstable();
        if !seen.insert(key) {
            continue;
        }
        let step = ar.level / m;
        for j in 0..m {
            let mut vals = vec![ar.zero(); data.classes.len()];
            for (k, &p) in powers.iter().enumerate() {
                let c = data.class(p);
                for (s, t) in vals[c].iter_mut().zip(ar.zeta(step * j * k)) {
                    *s += t;
                }
            }
            for (c, v) in vals.iter_mut().enumerate() {
                let centralizer = (data.order / data.sizes[c]) as i64;
                for s in v.iter_mut() {
                    debug_assert_eq!(*s * centralizer % m as i64, 0);
                    *s = *s * centralizer / m as i64;
                }
            }
            out.push(vals);
        }
    }
    out
}

fn build_table(g: &PermGroup, els: &[usize], level: usize) -> CharacterTable {
    let data = Arc::new(ClassData::new(g, els, level));
    let ar = data.arith.clone();
    let nclasses = data.classes.len();
    let order = data.order as i64;

    let mut irr: Vec<Vec<Vec<i64>>> = vec![vec![ar.int(1); nclasses]];
    let mut duals: Vec<Vec<Vec<i64>>> = vec![data.dual(&irr[0])];
    let mut sumsq: i64 = 1;

    let reduce = |chi: &[Vec<i64>], irr: &[Vec<Vec<i64>>], duals: &[Vec<Vec<i64>>]| -> Vec<Vec<i64>> {
        let mut rho = chi.to_vec();
        for (psi, d) in irr.iter().zip(duals) {
            let c = data.pair(chi, d).expect("virtual character");
            if c != 0 {
                for (r, v) in rho.iter_mut().zip(psi) {
                    for (s, t) in r.iter_mut().zip(v) {
                        *s -= c * t;
                    }
                }
            }
        }
        rho
    };
    let is_zero = |v: &[Vec<i64>]| v.iter().all(|x| x.iter().all(|&c| c == 0));
    let norm = |v: &[Vec<i64>]| data.pair(v, &data.dual(v)).expect("virtual character");

    let mut queue: VecDeque<Vec<Vec<i64>>> = artin_seeds(g, &data).into();
    let mut pool: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut rounds = 0;
    while sumsq < order {
        while let Some(chi) = queue.pop_front() {
            if sumsq == order {
                break;
            }
            let rho = reduce(&chi, &irr, &duals);
            if is_zero(&rho) {
                continue;
            }
            if norm(&rho) == 1 {
                let rho = if rho[0][0] < 0 {
                    rho.iter().map(|v| v.iter().map(|c| -c).collect()).collect()
                } else {
                    rho
                };
                sumsq += rho[0][0] * rho[0][0];
                duals.push(data.dual(&rho));
                irr.push(rho);
                let new = irr.last().unwrap();
                for psi in &irr {
                    queue.push_back(new.iter().zip(psi).map(|(a, b)| ar.mul(a, b)).collect());
                }
                queue.extend(pool.drain(..));
            } else {
                pool.push(rho);
            }
        }
        if sumsq == order {
            break;
        }
        rounds += 1;
        assert!(rounds <= 8, "character table peeling did not complete (order {})", order);
        // Stuck: look for norm-one combinations of the leftover characters.
        let mut rest: Vec<Vec<Vec<i64>>> = Vec::new();
        for r in pool.drain(..) {
            let r = reduce(&r, &irr, &duals);
            if !is_zero(&r) && !rest.contains(&r) {
                rest.push(r);
            }
        }
        let rd: Vec<Vec<Vec<i64>>> = rest.iter().map(|r| data.dual(r)).collect();
        let gram: Vec<Vec<i64>> =
            rest.iter().map(|a| rd.iter().map(|d| data.pair(a, d).unwrap()).collect()).collect();
        let n = rest.len();
        let lin = |coef: &[(usize, i64)]| -> Vec<Vec<i64>> {
            let mut out = vec![ar.zero(); nclasses];
            for &(i, c) in coef {
                for (o, v) in out.iter_mut().zip(&rest[i]) {
                    for (s, t) in o.iter_mut().zip(v) {
                        *s += c * t;
                    }
                }
            }
            out
        };
        for i in 0..n {
            for j in i + 1..n {
                for s in [-1i64, 1] {
                    if gram[i][i] + gram[j][j] + 2 * s * gram[i][j] == 1 {
                        queue.push_back(lin(&[(i, 1), (j, s)]));
                    }
                    for k in j + 1..n {
                        for s2 in [-1i64, 1] {
                            let nn = gram[i][i] + gram[j][j] + gram[k][k]
                                + 2 * s * gram[i][j]
                                + 2 * s2 * gram[i][k]
                                + 2 * s * s2 * gram[j][k];
                            if nn == 1 {
                                queue.push_back(lin(&[(i, 1), (j, s), (k, s2)]));
                            }
                        }
                    }
                }
            }
        }
        for r in &rest {
            for psi in &irr {
                queue.push_back(r.iter().zip(psi).map(|(a, b)| ar.mul(a, b)).collect());
            }
            for r2 in &rest {
                queue.push_back(r.iter().zip(r2).map(|(a, b)| ar.mul(a, b)).collect());
            }
        }
        pool = rest;
    }
    assert_eq!(irr.len(), nclasses, "character table has the wrong number of irreducibles");

    // trivial character first, then by (degree, value vector)
    let mut order_idx: Vec<usize> = (1..irr.len()).collect();
    order_idx.sort_by(|&a, &b| (irr[a][0][0], &irr[a]).cmp(&(irr[b][0][0], &irr[b])));
    order_idx.insert(0, 0);
    let irr: Vec<Vec<Vec<i64>>> = order_idx.iter().map(|&i| irr[i].clone()).collect();
    let duals = irr.iter().map(|c| data.dual(c)).collect();
    CharacterTable { data, irr, duals }
}

/// An element of `R(H)` for a subgroup `H` of the ambient group of a
/// [`RepRing`], as integer coordinates in the irreducible basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VirtualCharacter {
    sub: usize,
    coords: Vec<BigInt>,
}

impl fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "V{}[{}]", self.sub, c.join(", "))
    }
}

impl VirtualCharacter {
    /// Lattice id of the subgroup carrying this element.
    pub fn subgroup(&self) -> usize {
        self.sub
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

type IntMat = Vec<Vec<i64>>;

/// Representation rings of all subgroups of a fixed group, with cached
/// character tables and Mackey operation matrices.
pub struct RepRing {
    group: Arc<PermGroup>,
    level: usize,
    tables: Vec<OnceLock<Arc<CharacterTable>>>,
    structure: Vec<OnceLock<Arc<Vec<Vec<Vec<i64>>>>>>,
    res: Mutex<HashMap<(usize, usize), Arc<IntMat>>>,
    con: Mutex<HashMap<(usize, usize), Arc<(usize, Vec<usize>)>>>,
}

impl fmt::Debug for RepRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepRing({:?})", self.group)
    }
}

impl RepRing {
    pub fn new(group: Arc<PermGroup>) -> Self {
        let n = group.subgroups().len();
        RepRing {
            level: group.exponent(),
            tables: (0..n).map(|_| OnceLock::new()).collect(),
            structure: (0..n).map(|_| OnceLock::new()).collect(),
            res: Mutex::new(HashMap::new()),
            con: Mutex::new(HashMap::new()),
            group,
        }
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<PermGroup> {
        self.group.clone()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn subgroup(&self, id: usize) -> &Subgroup {
        &self.group.subgroups()[id]
    }

    pub fn num_subgroups(&self) -> usize {
        self.tables.len()
    }

    pub fn id_of(&self, h: &Subgroup) -> usize {
        self.group.subgroup_id(h)
    }

    pub fn whole_id(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn trivial_id(&self) -> usize {
        0
    }

    pub fn table(&self, id: usize) -> Arc<CharacterTable> {
        self.tables[id]
            .get_or_init(|| Arc::new(build_table(&self.group, self.subgroup(id).elements(), self.level)))
            .clone()
    }

    /// Number of irreducibles of the subgroup.
    pub fn rank(&self, id: usize) -> usize {
        self.table(id).len()
    }

    pub fn zero(&self, id: usize) -> VirtualCharacter {
        VirtualCharacter { sub: id, coords: vec![BigInt::zero(); self.rank(id)] }
    }

    pub fn one(&self, id: usize) -> VirtualCharacter {
        self.constant(id, &BigInt::one())
    }

    /// `c` times the trivial character.
    pub fn constant(&self, id: usize, c: &BigInt) -> VirtualCharacter {
        let mut z = self.zero(id);
        z.coords[0] = c.clone();
        z
    }

    pub fn irreducible(&self, id: usize, i: usize) -> VirtualCharacter {
        let mut z = self.zero(id);
        z.coords[i] = BigInt::one();
        z
    }

    pub fn from_coords(&self, id: usize, coords: Vec<BigInt>) -> Result<VirtualCharacter, Error> {
        if coords.len() != self.rank(id) {
            return Err(Error::Mismatch(format!("expected {} coordinates", self.rank(id))));
        }
        Ok(VirtualCharacter { sub: id, coords })
    }

    pub fn from_i64(&self, id: usize, coords: &[i64]) -> Result<VirtualCharacter, Error> {
        self.from_coords(id, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The virtual character with the given class function values.
    pub fn from_class_function(&self, id: usize, f: &ClassFunction) -> Result<VirtualCharacter, Error> {
        let t = self.table(id);
        let c = t.decompose(f).ok_or_else(|| Error::Mismatch("not a virtual character of this subgroup".into()))?;
        self.from_i64(id, &c)
    }

    fn check_same(&self, a: &VirtualCharacter, b: &VirtualCharacter) {
        assert_eq!(a.sub, b.sub, "virtual characters on different subgroups");
    }

    pub fn add(&self, a: &VirtualCharacter, b: &VirtualCharacter) -> VirtualCharacter {
        self.check_same(a, b);
        VirtualCharacter { sub: a.sub, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &VirtualCharacter, b: &VirtualCharacter) -> VirtualCharacter {
        self.check_same(a, b);
        VirtualCharacter { sub: a.sub, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &VirtualCharacter) -> VirtualCharacter {
        VirtualCharacter { sub: a.sub, coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &VirtualCharacter, c: &BigInt) -> VirtualCharacter {
        VirtualCharacter { sub: a.sub, coords: a.coords.iter().map(|x| x * c).collect() }
    }

    /// Structure constants: `chi_i chi_j = sum_k N[i][j][k] chi_k`.
    fn structure(&self, id: usize) -> Arc<Vec<Vec<Vec<i64>>>> {
        self.structure[id]
            .get_or_init(|| {
                let t = self.table(id);
                let ar = &t.data.arith;
                let n = t.len();
                let mut out = vec![vec![Vec::new(); n]; n];
                for i in 0..n {
                    for j in i..n {
                        let prod: Vec<Vec<i64>> =
                            t.irr[i].iter().zip(&t.irr[j]).map(|(a, b)| ar.mul(a, b)).collect();
                        let c = t.decompose_raw(&prod).expect("products of characters are characters");
                        out[i][j] = c.clone();
                        out[j][i] = c;
                    }
                }
                Arc::new(out)
            })
            .clone()
    }

    pub fn mul(&self, a: &VirtualCharacter, b: &VirtualCharacter) -> VirtualCharacter {
        self.check_same(a, b);
        let n = a.coords.len();
        if n == 1 {
            return VirtualCharacter { sub: a.sub, coords: vec![&a.coords[0] * &b.coords[0]] };
        }
        let st = self.structure(a.sub);
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, &c) in out.iter_mut().zip(&st[i][j]) {
                    if c != 0 {
                        *o += &xy * c;
                    }
                }
            }
        }
        VirtualCharacter { sub: a.sub, coords: out }
    }

    pub fn pow(&self, a: &VirtualCharacter, mut e: u64) -> VirtualCharacter {
        let mut base = a.clone();
        let mut acc = self.one(a.sub);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `f`: column `j` holds the coordinates of `f * chi_j`.
    pub fn mult_matrix(&self, f: &VirtualCharacter) -> Vec<Vec<BigInt>> {
        let n = f.coords.len();
        let cols: Vec<VirtualCharacter> = (0..n).map(|j| self.mul(f, &self.irreducible(f.sub, j))).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c].coords[r].clone()).collect()).collect()
    }

    /// `f(1)`.
    pub fn dimension(&self, f: &VirtualCharacter) -> BigInt {
        let t = self.table(f.sub);
        f.coords.iter().zip(t.degrees()).map(|(c, d)| c * d).sum()
    }

    /// The value `f(x)` for an element `x` of the subgroup, at the ring's level.
    pub fn value_at(&self, f: &VirtualCharacter, x: usize) -> CycNum {
        let t = self.table(f.sub);
        let c = t.data.class(x);
        self.class_value(f, c)
    }

    /// The value of `f` on class `c` of its subgroup.
    pub fn class_value(&self, f: &VirtualCharacter, c: usize) -> CycNum {
        let t = self.table(f.sub);
        let mut acc = vec![BigInt::zero(); t.data.arith.phi];
        for (k, chi) in f.coords.iter().zip(&t.irr) {
            if k.is_zero() {
                continue;
            }
            for (s, &v) in acc.iter_mut().zip(&chi[c]) {
                *s += k * v;
            }
        }
        CycNum::from_poly(self.level, acc.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn class_values(&self, f: &VirtualCharacter) -> Vec<CycNum> {
        (0..self.table(f.sub).num_classes()).map(|c| self.class_value(f, c)).collect()
    }

    /// `<a, b>` in the irreducible basis.
    pub fn inner(&self, a: &VirtualCharacter, b: &VirtualCharacter) -> BigInt {
        self.check_same(a, b);
        a.coords.iter().zip(&b.coords).map(|(x, y)| x * y).sum()
    }

    /// Row `i` holds the coordinates in `R(K)` of the restriction of the `i`-th irreducible of `H`.
    fn res_matrix(&self, h: usize, k: usize) -> Arc<IntMat> {
        if let Some(m) = self.res.lock().unwrap().get(&(h, k)) {
            return m.clone();
        }
        let th = self.table(h);
        let tk = self.table(k);
        let reps = tk.class_representatives();
        let rows: IntMat = th
            .irr
            .iter()
            .map(|chi| {
                let vals: Vec<Vec<i64>> = reps.iter().map(|&x| chi[th.data.class(x)].clone()).collect();
                tk.decompose_raw(&vals).expect("restriction of a character")
            })
            .collect();
        let m = Arc::new(rows);
        self.res.lock().unwrap().insert((h, k), m.clone());
        m
    }

    /// `res^K_H`.
    pub fn restrict(&self, f: &VirtualCharacter, k: usize) -> Result<VirtualCharacter, Error> {
        if !self.subgroup(k).is_subset_of(self.subgroup(f.sub)) {
            return Err(Error::Containment);
        }
        if k == f.sub {
            return Ok(f.clone());
        }
        let m = self.res_matrix(f.sub, k);
        let mut out = vec![BigInt::zero(); self.rank(k)];
        for (c, row) in f.coords.iter().zip(m.iter()) {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * r;
                }
            }
        }
        Ok(VirtualCharacter { sub: k, coords: out })
    }

    /// `I^H_K`, via Frobenius reciprocity against the restriction matrix.
    pub fn induce(&self, f: &VirtualCharacter, h: usize) -> Result<VirtualCharacter, Error> {
        if !self.subgroup(f.sub).is_subset_of(self.subgroup(h)) {
            return Err(Error::Containment);
        }
        if h == f.sub {
            return Ok(f.clone());
        }
        let m = self.res_matrix(h, f.sub);
        let out = m
            .iter()
            .map(|row| row.iter().zip(&f.coords).filter(|(&r, _)| r != 0).map(|(&r, c)| c * r).sum())
            .collect();
        Ok(VirtualCharacter { sub: h, coords: out })
    }

    /// The induced class function by the Frobenius formula
    /// `(Ind f)(h) = |K|^-1 sum_{g in H, g^-1 h g in K} f(g^-1 h g)`.
    pub fn induce_class_function(&self, f: &ClassFunction, k: usize, h: usize) -> Result<ClassFunction, Error> {
        let tk = self.table(k);
        if !Arc::ptr_eq(&f.data, &tk.data) {
            return Err(Error::Mismatch("class function does not live on the subgroup".into()));
        }
        if !self.subgroup(k).is_subset_of(self.subgroup(h)) {
            return Err(Error::Containment);
        }
        let th = self.table(h);
        let ar = &th.data.arith;
        let hs = self.subgroup(h);
        let vals = th
            .class_representatives()
            .iter()
            .map(|&x| {
                let mut acc = ar.zero();
                for &g in hs.elements() {
                    let y = self.group.conj(self.group.inv(g), x);
                    if let Some(c) = tk.class_of(y) {
                        for (s, t) in acc.iter_mut().zip(&f.vals[c]) {
                            *s += t;
                        }
                    }
                }
                acc.iter().map(|s| s / tk.order() as i64).collect()
            })
            .collect();
        Ok(ClassFunction { data: th.data.clone(), vals })
    }

    /// `con_{g,H} : R(H) -> R(gHg^-1)`, as the image subgroup and a permutation of irreducibles.
    fn con_perm(&self, g: usize, h: usize) -> Arc<(usize, Vec<usize>)> {
        if let Some(m) = self.con.lock().unwrap().get(&(g, h)) {
            return m.clone();
        }
        let target = self.id_of(&self.group.conjugate_subgroup(g, self.subgroup(h)));
        let th = self.table(h);
        let tt = self.table(target);
        let ginv = self.group.inv(g);
        let lookup: HashMap<&Vec<Vec<i64>>, usize> = tt.irr.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let perm = th
            .irr
            .iter()
            .map(|chi| {
                let vals: Vec<Vec<i64>> = tt
                    .class_representatives()
                    .iter()
                    .map(|&y| chi[th.data.class(self.group.conj(ginv, y))].clone())
                    .collect();
                *lookup.get(&vals).expect("conjugate of an irreducible is irreducible")
            })
            .collect();
        let m = Arc::new((target, perm));
        self.con.lock().unwrap().insert((g, h), m.clone());
        m
    }

    /// `con_{g,H}`: `(con f)(g x g^-1) = f(x)`.
    pub fn conjugate(&self, f: &VirtualCharacter, g: usize) -> VirtualCharacter {
        let m = self.con_perm(g, f.sub);
        let mut out = vec![BigInt::zero(); m.1.len()];
        for (c, &j) in f.coords.iter().zip(&m.1) {
            out[j] = c.clone();
        }
        VirtualCharacter { sub: m.0, coords: out }
    }

    /// Lattice id of `g H g^-1`.
    pub fn conjugate_id(&self, g: usize, h: usize) -> usize {
        self.con_perm(g, h).0
    }

    /// The right side of the double coset formula
    /// `res^L_H I^H_K f = sum_x I^L_{L cap xKx^-1} con_x res^{L^x cap K}_K f`.
    pub fn mackey_double_coset(
        &self,
        l: usize,
        h: usize,
        f: &VirtualCharacter,
    ) -> Result<VirtualCharacter, Error> {
        let k = f.sub;
        let (ls, hs, ks) = (self.subgroup(l), self.subgroup(h), self.subgroup(k));
        if !ls.is_subset_of(hs) || !ks.is_subset_of(hs) {
            return Err(Error::Containment);
        }
        let g = &self.group;
        let mut acc = self.zero(l);
        for x in double_cosets(g, ls, hs, ks)? {
            let lx = g.conjugate_subgroup(g.inv(x), ls);
            let lxk = self.id_of(&lx.intersect(g, ks));
            let term = self.restrict(f, lxk)?;
            let term = self.conjugate(&term, x);
            acc = self.add(&acc, &self.induce(&term, l)?);
        }
        Ok(acc)
    }

    /// Index of the irreducible `lambda_j : gen -> zeta_n^j` of a cyclic subgroup.
    fn cyclic_indices(&self, id: usize, gen: usize) -> Result<Vec<usize>, Error> {
        let n = self.subgroup(id).order();
        if !self.subgroup(id).contains(gen) || self.group.element_order(gen) != n {
            return Err(Error::NotCyclic);
        }
        let t = self.table(id);
        let ar = &t.data.arith;
        let c = t.data.class(gen);
        let lookup: HashMap<&Vec<i64>, usize> = t.irr.iter().enumerate().map(|(i, v)| (&v[c], i)).collect();
        Ok((0..n).map(|j| lookup[&ar.zeta(ar.level / n * j).to_vec()]).collect())
    }

    /// The isomorphism `R(<gen>) -> Z[t]/(t^n - 1)` sending `gen -> zeta_n` to `t`.
    pub fn to_cyclic(&self, f: &VirtualCharacter, gen: usize) -> Result<CyclicRingElem, Error> {
        let idx = self.cyclic_indices(f.sub, gen)?;
        let coeffs: Vec<BigInt> = idx.iter().map(|&i| f.coords[i].clone()).collect();
        Ok(CyclicRingElem::from_coeffs(coeffs.len(), &coeffs))
    }

    pub fn from_cyclic(&self, id: usize, gen: usize, f: &CyclicRingElem) -> Result<VirtualCharacter, Error> {
        let idx = self.cyclic_indices(id, gen)?;
        if f.modulus() != idx.len() {
            return Err(Error::Mismatch("modulus differs from the subgroup order".into()));
        }
        let mut z = self.zero(id);
        for (&i, c) in idx.iter().zip(f.coeffs()) {
            z.coords[i] = c.clone();
        }
        Ok(z)
    }
}

/// Counts of checked and failed instances of one Mackey relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTally {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
}

/// Exhaustive check of the Mackey relations and both Frobenius formulas on
/// irreducible basis elements, over all subgroup pairs and triples.
#[derive(Clone, Debug)]
pub struct MackeyAudit {
    pub relations: Vec<RelationTally>,
}

impl MackeyAudit {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.failed == 0)
    }

    pub fn checked(&self) -> usize {
        self.relations.iter().map(|r| r.checked).sum()
    }
}

pub fn mackey_audit(ring: &RepRing) -> Result<MackeyAudit, Error> {
    let g = ring.group();
    let n = ring.num_subgroups();
    let sub = |a: usize, b: usize| ring.subgroup(a).is_subset_of(ring.subgroup(b));
    let irr = |h: usize| (0..ring.rank(h)).map(move |i| ring.irreducible(h, i));
    let mut out = Vec::new();
    let mut tally = |name: &'static str, results: Vec<bool>| {
        out.push(RelationTally { name, checked: results.len(), failed: results.iter().filter(|&&ok| !ok).count() });
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|h| (0..n).map(move |k| (k, h))).filter(|&(k, h)| sub(k, h)).collect();

    let mut r = Vec::new();
    for &(k, h) in &pairs {
        for j in (0..n).filter(|&j| sub(h, j)) {
            for x in irr(j) {
                r.push(ring.restrict(&ring.restrict(&x, h)?, k)? == ring.restrict(&x, k)?);
            }
        }
    }
    tally("res transitivity", r);

    let mut r = Vec::new();
    for &(k, h) in &pairs {
        for j in (0..n).filter(|&j| sub(h, j)) {
            for x in irr(k) {
                r.push(ring.induce(&ring.induce(&x, h)?, j)? == ring.induce(&x, j)?);
            }
        }
    }
    tally("ind transitivity", r);

    let mut r = Vec::new();
    for h in 0..n {
        for x in irr(h) {
            for a in 0..g.order() {
                let ca = ring.conjugate(&x, a);
                for b in 0..g.order() {
                    r.push(ring.conjugate(&ca, b) == ring.conjugate(&x, g.mul(b, a)));
                }
            }
        }
    }
    tally("con composition", r);

    let mut r = Vec::new();
    for &(k, h) in &pairs {
        for a in 0..g.order() {
            let ah = ring.conjugate_id(a, h);
            for x in irr(k) {
                r.push(ring.conjugate(&ring.induce(&x, h)?, a) == ring.induce(&ring.conjugate(&x, a), ah)?);
            }
            let ak = ring.conjugate_id(a, k);
            for y in irr(h) {
                r.push(ring.conjugate(&ring.restrict(&y, k)?, a) == ring.restrict(&ring.conjugate(&y, a), ak)?);
            }
        }
    }
    tally("con with ind and res", r);

    let mut r = Vec::new();
    for h in 0..n {
        for x in irr(h) {
            r.push(ring.induce(&x, h)? == x && ring.restrict(&x, h)? == x);
            for &e in ring.subgroup(h).elements() {
                r.push(ring.conjugate(&x, e) == x);
            }
        }
    }
    tally("identities", r);

    let mut r = Vec::new();
    for h in 0..n {
        let inside: Vec<usize> = (0..n).filter(|&k| sub(k, h)).collect();
        for &l in &inside {
            for &k in &inside {
                for x in irr(k) {
                    r.push(ring.restrict(&ring.induce(&x, h)?, l)? == ring.mackey_double_coset(l, h, &x)?);
                }
            }
        }
    }
    tally("double coset formula", r);

    let mut r = Vec::new();
    for &(k, h) in &pairs {
        for x in irr(h) {
            for y in irr(k) {
                let lhs = ring.mul(&x, &ring.induce(&y, h)?);
                r.push(lhs == ring.induce(&ring.mul(&ring.restrict(&x, k)?, &y), h)?);
                let lhs = ring.mul(&ring.induce(&y, h)?, &x);
                r.push(lhs == ring.induce(&ring.mul(&y, &ring.restrict(&x, k)?), h)?);
            }
        }
    }
    tally("Frobenius formulas", r);
    Ok(MackeyAudit { relations: out })
}

/// The image of `W_H = N_G(H)/H` in `(Z/|H|)^x`: the exponents `a` with
/// `g h g^-1 = h^a` for a generator `h` of the cyclic subgroup `H`.
pub fn weyl_action(g: &PermGroup, h: &Subgroup) -> Result<Vec<usize>, Error> {
    let gen = h.cyclic_generator(g).ok_or(Error::NotCyclic)?;
    let n = h.order();
    let mut exp_of = HashMap::new();
    let mut y = g.identity();
    for a in 0..n {
        exp_of.insert(y, a);
        y = g.mul(y, gen);
    }
    let norm = normalizer(g, &g.whole(), h)?;
    let mut out: Vec<usize> = norm.elements().iter().map(|&x| exp_of[&g.conj(x, gen)] % n.max(1)).collect();
    if n == 1 {
        out = vec![1];
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Sum of degrees squared; equals the group order for a complete table.
pub fn degree_square_sum(t: &CharacterTable) -> i64 {
    t.degrees().iter().map(|d| d * d).sum()
}

/// True when every class value is fixed by complex conjugation.
pub fn is_real(f: &ClassFunction) -> bool {
    let ar = &f.data.arith;
    f.vals.iter().all(|v| ar.conj(v) == *v)
}

/// The coordinate vector with the largest absolute entry, for display and bounds.
pub fn max_abs_coord(f: &VirtualCharacter) -> BigInt {
    f.coords.iter().map(|c| c.abs()).max().unwrap_or_default()
}
