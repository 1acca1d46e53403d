//! Finitely presented modules over `Z` and the norm-Euclidean rings `Z[zeta_n]`,
//! `n in {3, 4, 5, 8, 12}`: Smith normal form, tensor products, `Tor_1`, flatness.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::CycNum;
use crate::Error;

pub type Elem = CycNum;
pub type Matrix = Vec<Vec<Elem>>;

const SUPPORTED: [usize; 6] = [1, 3, 4, 5, 8, 12];

/// `Z` (level 1) or `Z[zeta_n]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct EuclideanRing {
    level: usize,
}

impl fmt::Display for EuclideanRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 1 {
            write!(f, "Z")
        } else {
            write!(f, "Z[zeta{}]", self.level)
        }
    }
}

impl EuclideanRing {
    pub fn integers() -> Self {
        EuclideanRing { level: 1 }
    }

    pub fn cyclotomic(n: usize) -> Result<Self, Error> {
        let n = if n == 2 { 1 } else { n };
        if SUPPORTED.contains(&n) {
            Ok(EuclideanRing { level: n })
        } else {
            Err(Error::UnsupportedRing(format!("Z[zeta{}]", n)))
        }
    }

    /// Accepts `z`, `integers` or `zetaN`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "z" | "Z" | "integers" => Ok(Self::integers()),
            _ => {
                let n = s
                    .strip_prefix("zeta")
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::UnsupportedRing(s.to_string()))?;
                Self::cyclotomic(n)
            }
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        crate::arith::euler_phi(self.level)
    }

    pub fn zero(&self) -> Elem {
        CycNum::zero(self.level)
    }

    pub fn one(&self) -> Elem {
        CycNum::one(self.level)
    }

    pub fn from_int(&self, a: i64) -> Elem {
        CycNum::from_int(self.level, a)
    }

    /// Element from polynomial coefficients in `zeta` (reduced mod `Phi_n`).
    pub fn elem(&self, coeffs: &[i64]) -> Elem {
        CycNum::from_poly(self.level, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn contains(&self, x: &Elem) -> bool {
        x.level() == self.level && x.is_integral()
    }

    /// `|N(x)|` as an integer.
    pub fn norm(&self, x: &Elem) -> BigInt {
        x.norm().abs().to_integer()
    }

    /// Exact quotient `a / b` when it lies in the ring.
    pub fn div_exact(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let q = a * &b.inverse()?;
        q.is_integral().then_some(q)
    }

    pub fn divides(&self, b: &Elem, a: &Elem) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        self.div_exact(a, b).is_some()
    }

    pub fn is_unit(&self, x: &Elem) -> bool {
        !x.is_zero() && self.norm(x).is_one()
    }

    /// `(q, r)` with `a = q b + r` and `N(r) < N(b)`; the quotient is rounded
    /// coefficientwise, trying the corners of the unit cube around the exact
    /// quotient when plain rounding does not decrease the norm.
    pub fn div_rem(&self, a: &Elem, b: &Elem) -> Result<(Elem, Elem), Error> {
        let inv = b.inverse().ok_or_else(|| Error::Internal("division by zero".into()))?;
        let exact = a * &inv;
        let nb = self.norm(b);
        let rounded: Vec<BigRational> = exact.coeffs().iter().map(|c| c.round()).collect();
        let q = CycNum::from_poly(self.level, rounded);
        let r = a - &(&q * b);
        if self.norm(&r) < nb {
            return Ok((q, r));
        }
        let d = exact.coeffs().len();
        let mut best: Option<(BigInt, Elem, Elem)> = None;
        for mask in 0..(1u32 << d) {
            let coeffs = exact
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| if mask >> i & 1 == 1 { c.ceil() } else { c.floor() })
                .collect();
            let q = CycNum::from_poly(self.level, coeffs);
            let r = a - &(&q * b);
            let nr = self.norm(&r);
            if best.as_ref().is_none_or(|(n, _, _)| nr < *n) {
                best = Some((nr, q, r));
            }
        }
        match best {
            Some((nr, q, r)) if nr < nb => Ok((q, r)),
            _ => Err(Error::Internal(format!("no Euclidean step in {}", self))),
        }
    }

    pub fn gcd(&self, a: &Elem, b: &Elem) -> Result<Elem, Error> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = self.div_rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.canonical(&x))
    }

    /// Roots of unity in the ring.
    pub fn torsion_units(&self) -> Vec<Elem> {
        let n = self.level;
        let mut out: Vec<Elem> = (0..n as i64).map(|j| CycNum::zeta_pow(n, j)).collect();
        if n % 2 == 1 {
            let neg: Vec<Elem> = out.iter().map(|u| -u).collect();
            out.extend(neg);
        }
        out
    }

    /// A unit generating the unit group modulo roots of unity, when that quotient is infinite.
    pub fn fundamental_unit(&self) -> Option<Elem> {
        match self.level {
            5 | 12 => Some(self.elem(&[1, 1])),
            8 => Some(self.elem(&[1, 1, 0, -1])),
            _ => None,
        }
    }

    /// `sum |sigma(x)|^2` over the complex embeddings.
    fn t2(&self, x: &Elem) -> BigRational {
        let m = (x * &x.conj()).mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).fold(BigRational::zero(), |a, b| a + b)
    }

    /// Fixed representative of the associate class: minimal `T2` over powers of the
    /// fundamental unit, then among root-of-unity multiples the one with fewest
    /// negative coefficients and lexicographically least coefficient vector.
    pub fn canonical(&self, x: &Elem) -> Elem {
        if x.is_zero() {
            return x.clone();
        }
        let mut minima = vec![x.clone()];
        if let Some(eps) = self.fundamental_unit() {
            let inv = eps.inverse().expect("unit");
            let mut cur = x.clone();
            let mut t = self.t2(&cur);
            loop {
                let up = &cur * &eps;
                let down = &cur * &inv;
                let (tu, td) = (self.t2(&up), self.t2(&down));
                if tu < t && tu <= td {
                    cur = up;
                    t = tu;
                } else if td < t {
                    cur = down;
                    t = td;
                } else {
                    minima = vec![cur.clone()];
                    if tu == t {
                        minima.push(up);
                    }
                    if td == t {
                        minima.push(down);
                    }
                    break;
                }
            }
        }
        let units = self.torsion_units();
        minima
            .iter()
            .flat_map(|m| units.iter().map(move |u| u * m))
            .min_by(|a, b| assoc_key_cmp(a, b))
            .expect("nonempty")
    }
}

fn assoc_key_cmp(a: &Elem, b: &Elem) -> Ordering {
    let neg = |x: &Elem| x.coeffs().iter().filter(|c| c.is_negative()).count();
    neg(a).cmp(&neg(b)).then_with(|| a.coeffs().cmp(b.coeffs()))
}

fn identity(ring: &EuclideanRing, n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect()
}

pub fn mat_mul(ring: &EuclideanRing, a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(ring.zero(), |acc, k| &acc + &(&row[k] * &b[k][j])))
                .collect()
        })
        .collect()
}

/// `U * M * V = D` with `U`, `V` invertible and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub rows: usize,
    pub cols: usize,
    pub diag: Vec<Elem>,
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
    /// `U^-1` and `V^-1`.
    pub u_inv: Matrix,
    pub v_inv: Matrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct SnfState<'a> {
    ring: &'a EuclideanRing,
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
    rows: usize,
    cols: usize,
}

impl SnfState<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &Elem) {
        for m in [&mut self.a, &mut self.u] {
            let rj = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&rj) {
                *x = &*x + &(c * y);
            }
        }
        for row in self.u_inv.iter_mut() {
            row[j] = &row[j] - &(&row[i] * c);
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &Elem) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row[i] = &row[i] + &(&row[j] * c);
        }
        let ri = self.v_inv[i].clone();
        for (x, y) in self.v_inv[j].iter_mut().zip(&ri) {
            *x = &*x - &(c * y);
        }
    }

    fn scale_row(&mut self, i: usize, unit: &Elem) {
        let inv = unit.inverse().expect("unit");
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = &*x * unit;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = &row[i] * &inv;
        }
    }

    fn min_entry(&self, t: usize, only_cross: bool) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if only_cross && i != t && j != t {
                    continue;
                }
                if self.a[i][j].is_zero() {
                    continue;
                }
                let n = self.ring.norm(&self.a[i][j]);
                if best.as_ref().is_none_or(|(b, _, _)| n < *b) {
                    best = Some((n, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(&mut self) -> Result<Vec<Elem>, Error> {
        let ring = *self.ring;
        let mut diag = Vec::new();
        for t in 0..self.rows.min(self.cols) {
            let Some((i, j)) = self.min_entry(t, false) else { break };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let (q, _) = ring.div_rem(&self.a[i][t], &self.a[t][t])?;
                        self.add_row(i, t, &-&q);
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let (q, _) = ring.div_rem(&self.a[t][j], &self.a[t][t])?;
                        self.add_col(j, t, &-&q);
                    }
                }
                if let Some((i, j)) = self.min_entry(t, true).filter(|&(i, j)| i != t || j != t) {
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !ring.divides(&self.a[t][t], &self.a[i][j])));
                match bad {
                    Some(i) => self.add_row(t, i, &ring.one()),
                    None => break,
                }
            }
            let d = self.a[t][t].clone();
            let c = ring.canonical(&d);
            let unit = ring.div_exact(&c, &d).ok_or_else(|| Error::Internal("associate".into()))?;
            self.scale_row(t, &unit);
            diag.push(c);
        }
        Ok(diag)
    }
}

pub fn smith_normal_form(ring: &EuclideanRing, m: &Matrix, cols: usize) -> Result<Snf, Error> {
    let rows = m.len();
    for row in m {
        if row.len() != cols {
            return Err(Error::Mismatch("ragged matrix".into()));
        }
        if let Some(x) = row.iter().find(|x| !ring.contains(x)) {
            return Err(Error::Mismatch(format!("entry {} is not in {}", x, ring)));
        }
    }
    let mut st = SnfState {
        ring,
        a: m.clone(),
        u: identity(ring, rows),
        u_inv: identity(ring, rows),
        v: identity(ring, cols),
        v_inv: identity(ring, cols),
        rows,
        cols,
    };
    let diag = st.run()?;
    let snf = Snf { rows, cols, diag, d: st.a, u: st.u, v: st.v, u_inv: st.u_inv, v_inv: st.v_inv };
    verify_snf(ring, m, &snf)?;
    Ok(snf)
}

/// Re-checks `U M V = D`, `U U^-1 = 1`, `V V^-1 = 1`, the diagonal shape and the divisibility chain.
pub fn verify_snf(ring: &EuclideanRing, m: &Matrix, s: &Snf) -> Result<(), Error> {
    let (r, c) = (s.rows, s.cols);
    let umv = mat_mul(ring, &mat_mul(ring, &s.u, m, r, c), &s.v, c, c);
    if umv != s.d {
        return Err(Error::Internal("U M V != D".into()));
    }
    if mat_mul(ring, &s.u, &s.u_inv, r, r) != identity(ring, r) || mat_mul(ring, &s.v, &s.v_inv, c, c) != identity(ring, c)
    {
        return Err(Error::Internal("transformation not invertible".into()));
    }
    for i in 0..r {
        for j in 0..c {
            let want = if i == j && i < s.diag.len() { s.diag[i].clone() } else { ring.zero() };
            if s.d[i][j] != want {
                return Err(Error::Internal("D is not the recorded diagonal".into()));
            }
        }
    }
    if s.diag.windows(2).any(|w| !ring.divides(&w[0], &w[1])) || s.diag.iter().any(|d| d.is_zero()) {
        return Err(Error::Internal("diagonal is not a divisibility chain".into()));
    }
    Ok(())
}

/// `R^gens / (row space of relations)`.
#[derive(Clone, Debug)]
pub struct FPModule {
    ring: EuclideanRing,
    gens: usize,
    relations: Matrix,
}

/// `R^free_rank + sum R/(d)` with canonical non-unit `d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleInvariants {
    pub free_rank: usize,
    pub torsion: Vec<Elem>,
}

impl FPModule {
    pub fn new(ring: EuclideanRing, gens: usize, relations: Matrix) -> Result<Self, Error> {
        for row in &relations {
            if row.len() != gens {
                return Err(Error::Mismatch(format!("relation of length {} for {} generators", row.len(), gens)));
            }
            if let Some(x) = row.iter().find(|x| !ring.contains(x)) {
                return Err(Error::Mismatch(format!("entry {} is not in {}", x, ring)));
            }
        }
        Ok(FPModule { ring, gens, relations })
    }

    pub fn zero(ring: EuclideanRing) -> Self {
        FPModule { ring, gens: 0, relations: vec![] }
    }

    pub fn free(ring: EuclideanRing, rank: usize) -> Self {
        FPModule { ring, gens: rank, relations: vec![] }
    }

    /// `R/(d)`.
    pub fn cyclic(ring: EuclideanRing, d: Elem) -> Result<Self, Error> {
        FPModule::new(ring, 1, vec![vec![d]])
    }

    /// `sum R/(d_i)` (zero entries give free summands).
    pub fn diagonal(ring: EuclideanRing, ds: &[Elem]) -> Result<Self, Error> {
        let n = ds.len();
        let rows = ds
            .iter()
            .enumerate()
            .map(|(i, d)| (0..n).map(|j| if i == j { d.clone() } else { ring.zero() }).collect())
            .collect();
        FPModule::new(ring, n, rows)
    }

    /// Relations given as rows of coefficient vectors.
    pub fn from_coeffs(ring: EuclideanRing, gens: usize, rows: &[Vec<Vec<i64>>]) -> Result<Self, Error> {
        let m = rows.iter().map(|r| r.iter().map(|c| ring.elem(c)).collect()).collect();
        FPModule::new(ring, gens, m)
    }

    pub fn ring(&self) -> EuclideanRing {
        self.ring
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn snf(&self) -> Result<Snf, Error> {
        smith_normal_form(&self.ring, &self.relations, self.gens)
    }

    pub fn invariants(&self) -> Result<ModuleInvariants, Error> {
        let s = self.snf()?;
        let torsion: Vec<Elem> = s.diag.iter().filter(|d| !self.ring.is_unit(d)).cloned().collect();
        Ok(ModuleInvariants { free_rank: self.gens - s.rank(), torsion })
    }

    /// The diagonal presentation `R^f + sum R/(d)`.
    pub fn canonical(&self) -> Result<FPModule, Error> {
        let inv = self.invariants()?;
        let mut ds = inv.torsion;
        ds.extend((0..inv.free_rank).map(|_| self.ring.zero()));
        let mut m = FPModule::diagonal(self.ring, &ds)?;
        m.relations.retain(|r| r.iter().any(|x| !x.is_zero()));
        Ok(m)
    }

    pub fn is_isomorphic(&self, o: &FPModule) -> Result<bool, Error> {
        Ok(self.ring == o.ring && self.invariants()? == o.invariants()?)
    }

    pub fn rank(&self) -> Result<usize, Error> {
        Ok(self.invariants()?.free_rank)
    }

    /// `|torsion submodule| = prod |N(d)|`.
    pub fn torsion_order(&self) -> Result<BigInt, Error> {
        Ok(self.invariants()?.torsion.iter().map(|d| self.ring.norm(d)).product())
    }

    pub fn is_zero(&self) -> Result<bool, Error> {
        let i = self.invariants()?;
        Ok(i.free_rank == 0 && i.torsion.is_empty())
    }

    /// A basis of the relation syzygies `{x : x * relations = 0}`, checked to be
    /// free of rank `#relations - rank`.
    pub fn relation_kernel(&self) -> Result<Matrix, Error> {
        let s = self.snf()?;
        let basis: Matrix = s.u[s.rank()..].to_vec();
        let prod = mat_mul(&self.ring, &basis, &self.relations, self.relations.len(), self.gens);
        if prod.iter().flatten().any(|x| !x.is_zero()) {
            return Err(Error::Internal("kernel vector fails".into()));
        }
        let ks = smith_normal_form(&self.ring, &basis, self.relations.len())?;
        if ks.rank() != self.relations.len() - s.rank() || ks.diag.iter().any(|d| !self.ring.is_unit(d)) {
            return Err(Error::Internal("kernel is not a free direct summand".into()));
        }
        Ok(basis)
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.invariants() {
            Ok(inv) => {
                let mut parts: Vec<String> = inv.torsion.iter().map(|d| format!("{}/({})", self.ring, d)).collect();
                if inv.free_rank > 0 {
                    parts.insert(0, format!("{}^{}", self.ring, inv.free_rank));
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
            Err(e) => write!(f, "<{}>", e),
        }
    }
}

fn same_ring(m: &FPModule, n: &FPModule) -> Result<EuclideanRing, Error> {
    if m.ring != n.ring {
        return Err(Error::Mismatch(format!("{} vs {}", m.ring, n.ring)));
    }
    Ok(m.ring)
}

/// Presentation `(rel_M x 1) ; (1 x rel_N)` on `gens_M * gens_N` generators, canonicalized.
pub fn tensor(m: &FPModule, n: &FPModule) -> Result<FPModule, Error> {
    let ring = same_ring(m, n)?;
    let (gm, gn) = (m.gens, n.gens);
    let mut rows: Matrix = Vec::new();
    for r in &m.relations {
        for b in 0..gn {
            let mut row = vec![ring.zero(); gm * gn];
            for (a, x) in r.iter().enumerate() {
                row[a * gn + b] = x.clone();
            }
            rows.push(row);
        }
    }
    for a in 0..gm {
        for r in &n.relations {
            let mut row = vec![ring.zero(); gm * gn];
            for (b, x) in r.iter().enumerate() {
                row[a * gn + b] = x.clone();
            }
            rows.push(row);
        }
    }
    FPModule::new(ring, gm * gn, rows)?.canonical()
}

/// `d`-torsion `{x in N : d x = 0}` of a canonical diagonal module.
fn torsion_by(ring: &EuclideanRing, d: &Elem, inv: &ModuleInvariants) -> Result<Vec<Elem>, Error> {
    let mut out = Vec::new();
    for e in &inv.torsion {
        let g = ring.gcd(d, e)?;
        if !ring.is_unit(&g) {
            out.push(g);
        }
    }
    Ok(out)
}

/// `Tor_1(M, N)` from the resolution `0 -> im(rel_M) -> R^gens -> M -> 0`.
/// After Smith normal form the first map is `diag(d_i)`, so `Tor_1` is the
/// kernel of `sum d_i : N^rank -> N^rank`, that is `sum_i N[d_i]`.
pub fn tor1(m: &FPModule, n: &FPModule) -> Result<FPModule, Error> {
    let ring = same_ring(m, n)?;
    let s = m.snf()?;
    let ninv = n.invariants()?;
    let mut ds = Vec::new();
    for d in &s.diag {
        ds.extend(torsion_by(&ring, d, &ninv)?);
    }
    FPModule::diagonal(ring, &ds)?.canonical()
}

/// Finitely presented modules over a PID are flat exactly when free.
pub fn is_flat(m: &FPModule) -> Result<bool, Error> {
    Ok(m.invariants()?.torsion.is_empty())
}

/// `(M (x) N, Tor_1(M, N))`.
pub fn kunneth_ends(m: &FPModule, n: &FPModule) -> Result<(FPModule, FPModule), Error> {
    Ok((tensor(m, n)?, tor1(m, n)?))
}

#[derive(Clone, Debug)]
pub struct SesReport {
    pub left: FPModule,
    pub right: FPModule,
    pub rank_left: usize,
    pub rank_right: usize,
    pub rank_middle: usize,
    pub torsion_left: BigInt,
    pub torsion_right: BigInt,
    pub torsion_middle: BigInt,
    pub consistent: bool,
}

/// Necessary conditions for `0 -> left -> middle -> right -> 0`: additive rank
/// and multiplicative torsion order. The extension class is not examined.
pub fn verify_ses(ends: &(FPModule, FPModule), middle: &FPModule) -> Result<SesReport, Error> {
    let (left, right) = ends;
    same_ring(left, middle)?;
    same_ring(right, middle)?;
    let (rl, rr, rm) = (left.rank()?, right.rank()?, middle.rank()?);
    let (tl, tr, tm) = (left.torsion_order()?, right.torsion_order()?, middle.torsion_order()?);
    let consistent = rm == rl + rr && tm == &tl * &tr;
    Ok(SesReport {
        left: left.clone(),
        right: right.clone(),
        rank_left: rl,
        rank_right: rr,
        rank_middle: rm,
        torsion_left: tl,
        torsion_right: tr,
        torsion_middle: tm,
        consistent,
    })
}
