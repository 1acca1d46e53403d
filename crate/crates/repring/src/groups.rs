//! Finite permutation groups: elements, subgroup lattice, normalizers,
//! double cosets and prime-power subgroup families.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::Error;

/// Default bound on the order of any group we are willing to enumerate.
pub const ORDER_CAP: usize = 5000;

/// A permutation of `{0, .., n-1}` given by its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Parse(format!("not a bijection: {:?}", images)));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, Error> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::Parse(format!("bad cycle {:?}", c)));
                }
                touched[a] = true;
                images[a] = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn order(&self) -> usize {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut ord = 1usize;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.images[x];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    fn padded(&self, n: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.images.len()..n);
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses a single permutation in cycle notation, e.g. `(0 1 2)(3 4)`.
/// The degree is `max(min_degree, largest point + 1)`.
pub fn parse_cycles(s: &str, min_degree: usize) -> Result<Permutation, Error> {
    let cycles = parse_cycle_list(s)?;
    let n = cycles
        .iter()
        .flatten()
        .map(|&x| x + 1)
        .max()
        .unwrap_or(0)
        .max(min_degree)
        .max(1);
    Permutation::from_cycles(n, &cycles)
}

fn parse_cycle_list(s: &str) -> Result<Vec<Vec<usize>>, Error> {
    let s = s.trim();
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in {:?}", s)));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {:?}", s)))?;
        let body = &rest[1..close];
        let pts: Result<Vec<usize>, _> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>())
            .collect();
        let pts = pts.map_err(|e| Error::Parse(format!("{} in {:?}", e, s)))?;
        if pts.len() > 1 {
            cycles.push(pts);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// A finite permutation group with all elements listed in lexicographic
/// order of their image arrays.
pub struct PermGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    identity: usize,
    subgroups: OnceLock<Vec<Subgroup>>,
    classes: OnceLock<Vec<Vec<usize>>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup({}, order {})", self.name, self.order())
    }
}

const TABLE_LIMIT: usize = 1500;

impl PermGroup {
    /// Closes the generators under products, failing beyond `cap` elements.
    pub fn from_generators(
        name: &str,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<PermGroup, Error> {
        let degree = generators.iter().map(|g| g.degree()).max().unwrap_or(1).max(1);
        let generators: Vec<Permutation> = generators.iter().map(|g| g.padded(degree)).collect();
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::OrderCap(cap));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let index: HashMap<Permutation, usize> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let table = if n <= TABLE_LIMIT {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&elements[a].compose(&elements[b])] as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let orders = elements.iter().map(|p| p.order()).collect();
        let identity = index[&Permutation::identity(degree)];
        Ok(PermGroup {
            name: name.to_string(),
            degree,
            generators,
            elements,
            index,
            table,
            inverses,
            orders,
            identity,
            subgroups: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        if p.degree() > self.degree {
            let extra_moved = p.images()[self.degree..]
                .iter()
                .enumerate()
                .any(|(k, &x)| x != k + self.degree);
            if extra_moved {
                return None;
            }
            let q = Permutation { images: p.images()[..self.degree].to_vec() };
            return self.index.get(&q).copied();
        }
        self.index.get(&p.padded(self.degree)).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g^-1`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut r = self.identity;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes of the whole group, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        self.classes.get_or_init(|| {
            let all: Vec<usize> = (0..self.order()).collect();
            classes_within(self, &all)
        })
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self, (0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(self, vec![self.identity])
    }

    /// Smallest subgroup containing the given elements.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![0u64; self.order().div_ceil(64)];
        let mut elems = vec![self.identity];
        set_bit(&mut mask, self.identity);
        let mut k = 0;
        while k < elems.len() {
            let x = elems[k];
            for &g in gens {
                let y = self.mul(g, x);
                if !get_bit(&mask, y) {
                    set_bit(&mut mask, y);
                    elems.push(y);
                }
            }
            k += 1;
        }
        elems.sort_unstable();
        Subgroup { elements: elems, mask }
    }

    /// All subgroups, sorted by (order, element list).
    pub fn subgroups(&self) -> &[Subgroup] {
        self.subgroups.get_or_init(|| enumerate_subgroups(self))
    }

    /// Position of a subgroup in [`PermGroup::subgroups`].
    pub fn subgroup_id(&self, h: &Subgroup) -> usize {
        self.subgroups()
            .binary_search_by(|s| s.cmp_canonical(h))
            .expect("subgroup belongs to the lattice")
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut els: Vec<usize> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        els.sort_unstable();
        Subgroup::from_sorted(self, els)
    }

    /// Parses an element in cycle notation relative to this group.
    pub fn parse_element(&self, s: &str) -> Result<usize, Error> {
        let p = parse_cycles(s, self.degree)?;
        self.index_of(&p)
            .ok_or_else(|| Error::Parse(format!("{} is not an element of {}", s, self.name)))
    }

    /// Parses a subgroup given by generators, e.g. `(0 1 2); (0 1)`.
    pub fn parse_subgroup(&self, s: &str) -> Result<Subgroup, Error> {
        let mut gens = Vec::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            gens.push(self.parse_element(part)?);
        }
        Ok(self.closure(&gens))
    }
}

fn set_bit(mask: &mut [u64], i: usize) {
    mask[i / 64] |= 1 << (i % 64);
}

fn get_bit(mask: &[u64], i: usize) -> bool {
    mask[i / 64] >> (i % 64) & 1 == 1
}

/// Conjugacy classes of the subgroup with element set `els` (sorted).
pub(crate) fn classes_within(g: &PermGroup, els: &[usize]) -> Vec<Vec<usize>> {
    let mut assigned: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for &x in els {
        if assigned.contains(&x) {
            continue;
        }
        let mut cls: Vec<usize> = els.iter().map(|&h| g.conj(h, x)).collect();
        cls.sort_unstable();
        cls.dedup();
        assigned.extend(cls.iter().copied());
        out.push(cls);
    }
    out
}

/// A subgroup of a [`PermGroup`], stored as a sorted list of element indices.
#[derive(Clone)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: Vec<u64>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

impl Subgroup {
    pub fn from_sorted(g: &PermGroup, elements: Vec<usize>) -> Subgroup {
        let mut mask = vec![0u64; g.order().div_ceil(64)];
        for &e in &elements {
            set_bit(&mut mask, e);
        }
        Subgroup { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        get_bit(&self.mask, x)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, g: &PermGroup, other: &Subgroup) -> Subgroup {
        let els = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_sorted(g, els)
    }

    /// Canonical order: by order, then by element list.
    pub fn cmp_canonical(&self, other: &Subgroup) -> std::cmp::Ordering {
        (self.order(), &self.elements).cmp(&(other.order(), &other.elements))
    }

    /// A generator if the subgroup is cyclic (the least element of maximal order).
    pub fn cyclic_generator(&self, g: &PermGroup) -> Option<usize> {
        self.elements.iter().copied().find(|&x| g.element_order(x) == self.order())
    }

    pub fn is_cyclic(&self, g: &PermGroup) -> bool {
        self.cyclic_generator(g).is_some()
    }

    pub fn is_normal_in(&self, g: &PermGroup, e: &Subgroup) -> bool {
        e.elements.iter().all(|&x| self.elements.iter().all(|&h| self.contains(g.conj(x, h))))
    }

    pub fn exponent(&self, g: &PermGroup) -> usize {
        self.elements.iter().fold(1, |acc, &x| num_integer::lcm(acc, g.element_order(x)))
    }

    pub fn generators_text(&self, g: &PermGroup) -> String {
        let gens = small_generating_set(g, self);
        if gens.is_empty() {
            return "()".into();
        }
        gens.iter().map(|&x| g.element(x).to_string()).collect::<Vec<_>>().join("; ")
    }
}

/// Greedy generating set: repeatedly add the least element not yet generated.
pub fn small_generating_set(g: &PermGroup, h: &Subgroup) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut cur = g.trivial();
    while cur.order() < h.order() {
        let x = *h.elements.iter().rev().find(|&&x| !cur.contains(x)).expect("proper");
        gens.push(x);
        cur = g.closure(&gens);
    }
    gens
}

fn enumerate_subgroups(g: &PermGroup) -> Vec<Subgroup> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
    for x in 0..g.order() {
        let c = g.closure(&[x]);
        if seen.insert(c.elements.clone()) {
            cyclic.push((x, c));
        }
    }
    let mut all: Vec<Subgroup> = cyclic.iter().map(|(_, c)| c.clone()).collect();
    let mut frontier: Vec<Subgroup> = all.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for (x, c) in &cyclic {
                if c.is_subset_of(h) {
                    continue;
                }
                let mut gens = small_generating_set(g, h);
                gens.push(*x);
                let j = g.closure(&gens);
                if seen.insert(j.elements.clone()) {
                    next.push(j);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.sort_by(|a, b| a.cmp_canonical(b));
    all
}

/// `N_E(H) = {g in E : g H g^-1 = H}`.
pub fn normalizer(g: &PermGroup, e: &Subgroup, h: &Subgroup) -> Result<Subgroup, Error> {
    if !h.is_subset_of(e) {
        return Err(Error::Containment);
    }
    let els = e
        .elements
        .iter()
        .copied()
        .filter(|&x| h.elements.iter().all(|&y| h.contains(g.conj(x, y))))
        .collect();
    Ok(Subgroup::from_sorted(g, els))
}

/// Minimal representatives of the double cosets `L x H` inside `mid`.
pub fn double_cosets(
    g: &PermGroup,
    l: &Subgroup,
    mid: &Subgroup,
    h: &Subgroup,
) -> Result<Vec<usize>, Error> {
    if !l.is_subset_of(mid) || !h.is_subset_of(mid) {
        return Err(Error::Containment);
    }
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    for &x in &mid.elements {
        if covered[x] {
            continue;
        }
        reps.push(x);
        for &a in &l.elements {
            let ax = g.mul(a, x);
            for &b in &h.elements {
                covered[g.mul(ax, b)] = true;
            }
        }
    }
    Ok(reps)
}

/// Size of the double coset `L x H`.
pub fn double_coset_size(g: &PermGroup, l: &Subgroup, x: usize, h: &Subgroup) -> usize {
    let mut s = HashSet::new();
    for &a in &l.elements {
        let ax = g.mul(a, x);
        for &b in &h.elements {
            s.insert(g.mul(ax, b));
        }
    }
    s.len()
}

pub fn is_prime_power(n: usize) -> bool {
    n > 1 && crate::arith::factorize(n).len() == 1
}

/// True iff every element has order 1 or a prime power.
pub fn is_eppo(g: &PermGroup) -> bool {
    eppo_witness(g).is_none()
}

/// Least element order which is not a prime power, if any.
pub fn eppo_witness(g: &PermGroup) -> Option<usize> {
    (0..g.order())
        .map(|x| g.element_order(x))
        .filter(|&o| o > 1 && !is_prime_power(o))
        .min()
}

/// The p-subgroups of a group together with the cyclic ones and
/// representatives of the conjugacy classes of cyclic members.
#[derive(Clone, Debug)]
pub struct SubgroupFamily {
    pub prime: usize,
    /// Lattice ids of all p-subgroups, in canonical order.
    pub members: Vec<usize>,
    /// Lattice ids of the cyclic p-subgroups.
    pub cyclic: Vec<usize>,
    /// One cyclic p-subgroup per conjugacy class (the canonically least).
    pub class_reps: Vec<usize>,
}

/// One family per prime dividing `|G|`. Fails for non-EPPO groups unless `allow_non_eppo`.
pub fn prime_subgroup_families(
    g: &PermGroup,
    allow_non_eppo: bool,
) -> Result<Vec<SubgroupFamily>, Error> {
    if !allow_non_eppo && !is_eppo(g) {
        return Err(Error::NotEppo(g.name().to_string()));
    }
    let subs = g.subgroups();
    let mut out = Vec::new();
    for (p, _) in crate::arith::factorize(g.order()) {
        let members: Vec<usize> = (0..subs.len())
            .filter(|&i| subs[i].order() == 1 || crate::arith::is_power_of(subs[i].order(), p))
            .collect();
        let cyclic: Vec<usize> =
            members.iter().copied().filter(|&i| subs[i].is_cyclic(g)).collect();
        let mut class_reps = Vec::new();
        let mut done: HashSet<usize> = HashSet::new();
        for &i in &cyclic {
            if done.contains(&i) {
                continue;
            }
            class_reps.push(i);
            for x in 0..g.order() {
                done.insert(g.subgroup_id(&g.conjugate_subgroup(x, &subs[i])));
            }
        }
        out.push(SubgroupFamily { prime: p, members, cyclic, class_reps });
    }
    Ok(out)
}

/// Builds a group from a catalog name (`C12`, `D4`, `Q8`, `S4`, `A5`) or from
/// generators in cycle notation separated by `;`.
///
/// `Cn` is cyclic of order n, `Dn` the symmetries of the n-gon (order 2n),
/// `Qn` the dicyclic group of order n (n divisible by 4; `Q8` is the quaternion
/// group), `Sn` and `An` the symmetric and alternating groups on n points.
pub fn catalog_group(name: &str) -> Result<PermGroup, Error> {
    catalog_group_capped(name, ORDER_CAP)
}

pub fn catalog_group_capped(name: &str, cap: usize) -> Result<PermGroup, Error> {
    let name = name.trim();
    if name.starts_with('(') {
        let mut gens = Vec::new();
        for part in name.split(';') {
            gens.push(parse_cycles(part, 1)?);
        }
        return PermGroup::from_generators(name, gens, cap);
    }
    let bad = || Error::UnknownGroup(name.to_string());
    let mut chars = name.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: usize = digits.parse().map_err(|_| bad())?;
    let expected: Option<u128> = match kind {
        'C' | 'Q' => Some(n as u128),
        'D' => Some(2 * n as u128),
        'S' => (1..=n as u128).try_fold(1u128, |a, k| a.checked_mul(k)),
        'A' => (1..=n as u128).try_fold(1u128, |a, k| a.checked_mul(k)).map(|f| (f / 2).max(1)),
        _ => return Err(bad()),
    };
    match expected {
        Some(o) if o <= cap as u128 => {}
        _ => return Err(Error::OrderCap(cap)),
    }
    let cyc = |pts: Vec<usize>| vec![pts];
    let gens: Vec<Permutation> = match kind {
        'C' => {
            if n == 0 {
                return Err(bad());
            }
            vec![Permutation::from_cycles(n, &cyc((0..n).collect()))?]
        }
        'D' => match n {
            0 => return Err(bad()),
            1 => vec![Permutation::from_cycles(2, &cyc(vec![0, 1]))?],
            2 => vec![
                Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]])?,
                Permutation::from_cycles(4, &[vec![0, 2], vec![1, 3]])?,
            ],
            _ => {
                let rot = Permutation::from_cycles(n, &cyc((0..n).collect()))?;
                let refl: Vec<Vec<usize>> =
                    (1..n).map(|i| (i, n - i)).filter(|(a, b)| a < b).map(|(a, b)| vec![a, b]).collect();
                vec![rot, Permutation::from_cycles(n, &refl)?]
            }
        },
        'Q' => {
            if n < 4 || n % 4 != 0 {
                return Err(bad());
            }
            dicyclic_generators(n / 4)
        }
        'S' => {
            if n == 0 {
                return Err(bad());
            }
            if n < 2 {
                vec![Permutation::identity(1)]
            } else {
                vec![
                    Permutation::from_cycles(n, &cyc((0..n).collect()))?,
                    Permutation::from_cycles(n, &cyc(vec![0, 1]))?,
                ]
            }
        }
        'A' => {
            if n == 0 {
                return Err(bad());
            }
            if n < 3 {
                vec![Permutation::identity(n)]
            } else {
                (2..n)
                    .map(|i| Permutation::from_cycles(n, &cyc(vec![0, 1, i])))
                    .collect::<Result<_, _>>()?
            }
        }
        _ => unreachable!(),
    };
    PermGroup::from_generators(name, gens, cap)
}

/// Left regular action of `<a, x | a^2k, x^2 = a^k, x a x^-1 = a^-1>` on
/// the points `a^i x^j <-> i + 2k j`.
fn dicyclic_generators(k: usize) -> Vec<Permutation> {
    let m = 2 * k;
    let idx = |i: usize, j: usize| i % m + m * j;
    // a * a^i x^j = a^(i+1) x^j
    let a: Vec<usize> = (0..2 * m).map(|p| idx(p % m + 1, p / m)).collect();
    // x * a^i = a^-i x ; x * a^i x = a^-i x^2 = a^(k-i)
    let x: Vec<usize> = (0..2 * m)
        .map(|p| {
            let (i, j) = (p % m, p / m);
            if j == 0 {
                idx(m - i, 1)
            } else {
                idx(k + m - i, 0)
            }
        })
        .collect();
    vec![Permutation { images: a }, Permutation { images: x }]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_subgroups(g: &PermGroup) -> HashSet<Vec<usize>> {
        // every subgroup is generated by at most two elements for these small groups
        let mut out = HashSet::new();
        for a in 0..g.order() {
            for b in a..g.order() {
                out.insert(g.closure(&[a, b]).elements().to_vec());
            }
        }
        out
    }

    #[test]
    fn catalog_orders() {
        for (name, order) in [
            ("S3", 6),
            ("A5", 60),
            ("C12", 12),
            ("D4", 8),
            ("Q8", 8),
            ("Q12", 12),
            ("D27", 54),
            ("A4", 12),
            ("S1", 1),
            ("C1", 1),
            ("S5", 120),
        ] {
            assert_eq!(catalog_group(name).unwrap().order(), order, "{}", name);
        }
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog_group("X3"), Err(Error::UnknownGroup(_))));
        assert!(matches!(catalog_group("S"), Err(Error::UnknownGroup(_))));
        assert!(matches!(catalog_group("Q6"), Err(Error::UnknownGroup(_))));
        assert!(matches!(catalog_group("S7"), Err(Error::OrderCap(_))));
        assert!(matches!(catalog_group("S100"), Err(Error::OrderCap(_))));
    }

    #[test]
    fn quaternion_shape() {
        let q = catalog_group("Q8").unwrap();
        let orders: Vec<usize> = (0..8).map(|x| q.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
        assert!(!q.is_abelian());
        let c4 = q.subgroups().iter().filter(|s| s.order() == 4).count();
        assert_eq!(c4, 3);
    }

    #[test]
    fn cycle_notation() {
        let g = catalog_group("(0 1 2)(3 4); (0 1)").unwrap();
        assert_eq!(g.order(), 12);
        let p = parse_cycles("(0 2)", 3).unwrap();
        assert_eq!(p.images(), &[2, 1, 0]);
        assert_eq!(p.to_string(), "(0 2)");
        assert!(parse_cycles("(0 1", 1).is_err());
        assert!(parse_cycles("(0 0)", 1).is_err());
    }

    #[test]
    fn subgroup_counts() {
        let c4 = catalog_group("C4").unwrap();
        assert_eq!(c4.subgroups().len(), 3);
        let s3 = catalog_group("S3").unwrap();
        let orders: Vec<usize> = s3.subgroups().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        let t = catalog_group("C1").unwrap();
        assert_eq!(t.subgroups().len(), 1);
        assert_eq!(catalog_group("S4").unwrap().subgroups().len(), 30);
        assert_eq!(catalog_group("A5").unwrap().subgroups().len(), 59);
    }

    #[test]
    fn subgroups_match_brute_force() {
        for name in ["S3", "D4", "Q8", "A4", "C12", "S4", "D6"] {
            let g = catalog_group(name).unwrap();
            let ours: HashSet<Vec<usize>> =
                g.subgroups().iter().map(|s| s.elements().to_vec()).collect();
            assert_eq!(ours, brute_subgroups(&g), "{}", name);
            for w in g.subgroups().windows(2) {
                assert_eq!(w[0].cmp_canonical(&w[1]), std::cmp::Ordering::Less);
            }
            for s in g.subgroups() {
                assert_eq!(g.order() % s.order(), 0);
                for x in 0..g.order() {
                    let c = g.conjugate_subgroup(x, s);
                    assert!(ours.contains(c.elements()));
                }
            }
        }
    }

    #[test]
    fn normalizers() {
        let s3 = catalog_group("S3").unwrap();
        let whole = s3.whole();
        let c3 = s3.parse_subgroup("(0 1 2)").unwrap();
        assert_eq!(normalizer(&s3, &whole, &c3).unwrap(), whole);
        let t = s3.parse_subgroup("(0 1)").unwrap();
        assert_eq!(normalizer(&s3, &whole, &t).unwrap(), t);
        let c12 = catalog_group("C12").unwrap();
        for h in c12.subgroups() {
            assert_eq!(normalizer(&c12, &c12.whole(), h).unwrap(), c12.whole());
        }
        assert!(normalizer(&s3, &t, &c3).is_err());
    }

    #[test]
    fn double_coset_examples() {
        let s3 = catalog_group("S3").unwrap();
        let whole = s3.whole();
        let t = s3.parse_subgroup("(0 1)").unwrap();
        let reps = double_cosets(&s3, &t, &whole, &t).unwrap();
        assert_eq!(reps.len(), 2);
        let mut sizes: Vec<usize> = reps.iter().map(|&x| double_coset_size(&s3, &t, x, &t)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
        assert_eq!(double_cosets(&s3, &whole, &whole, &whole).unwrap().len(), 1);
        let e = s3.trivial();
        assert_eq!(double_cosets(&s3, &e, &whole, &e).unwrap().len(), 6);
    }

    #[test]
    fn double_cosets_partition() {
        let g = catalog_group("S4").unwrap();
        let subs = g.subgroups();
        let whole = g.whole();
        for l in subs.iter().step_by(3) {
            for h in subs.iter().step_by(4) {
                let reps = double_cosets(&g, l, &whole, h).unwrap();
                let total: usize = reps.iter().map(|&x| double_coset_size(&g, l, x, h)).sum();
                assert_eq!(total, g.order());
            }
        }
    }

    #[test]
    fn eppo_examples() {
        assert!(is_eppo(&catalog_group("S4").unwrap()));
        assert!(is_eppo(&catalog_group("A5").unwrap()));
        assert!(is_eppo(&catalog_group("D27").unwrap()));
        assert_eq!(eppo_witness(&catalog_group("C6").unwrap()), Some(6));
        assert_eq!(eppo_witness(&catalog_group("S5").unwrap()), Some(6));
        assert!(is_eppo(&catalog_group("C1").unwrap()));
    }

    #[test]
    fn eppo_matches_scan() {
        for name in ["C6", "C8", "D3", "D5", "D6", "Q8", "Q12", "S3", "S4", "S5", "A4", "A5", "C30"] {
            let g = catalog_group(name).unwrap();
            let scan = g.elements().iter().all(|p| {
                let o = p.order();
                o == 1 || crate::arith::factorize(o).len() == 1
            });
            assert_eq!(is_eppo(&g), scan, "{}", name);
        }
    }

    #[test]
    fn families() {
        let s3 = catalog_group("S3").unwrap();
        let fam = prime_subgroup_families(&s3, false).unwrap();
        assert_eq!(fam[0].prime, 2);
        assert_eq!(fam[0].members.len(), 4);
        assert_eq!(fam[0].class_reps.len(), 2);
        assert_eq!(fam[1].prime, 3);
        assert_eq!(fam[1].members.len(), 2);
        let a4 = catalog_group("A4").unwrap();
        let fam = prime_subgroup_families(&a4, false).unwrap();
        assert!(fam[0].members.iter().any(|&i| a4.subgroups()[i].order() == 4));
        assert!(fam[0].cyclic.len() < fam[0].members.len());
        assert!(prime_subgroup_families(&catalog_group("C6").unwrap(), false).is_err());
        assert!(prime_subgroup_families(&catalog_group("C6").unwrap(), true).is_ok());
    }
}
