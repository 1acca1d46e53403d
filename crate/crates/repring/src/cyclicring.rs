//! The representation ring of a cyclic group, `R(Z/n) = Z[t]/(t^n - 1)`,
//! with restriction, induction, the cyclotomic quotient, the reduction
//! `pi` modulo `(t^(p^(m-1)) - 1, p)` and the splitting after inverting `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, prime_power};
use crate::cyclotomic::{cyclotomic_poly, poly_text, CycNum};
use crate::linalg::rank_mod_p;
use crate::Error;

/// An element `sum a_i t^i` of `Z[t]/(t^n - 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicRingElem {
    modulus: usize,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CyclicRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod t^{}-1)", self.to_text(), self.modulus)
    }
}

impl CyclicRingElem {
    pub fn zero(n: usize) -> Self {
        CyclicRingElem { modulus: n, coeffs: vec![BigInt::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigInt::one())
    }

    pub fn constant(n: usize, c: BigInt) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = c;
        z
    }

    /// `t^k`.
    pub fn monomial(n: usize, k: usize) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[k % n] = BigInt::one();
        z
    }

    /// Folds a coefficient list of any length into `Z[t]/(t^n - 1)`.
    pub fn from_coeffs(n: usize, coeffs: &[BigInt]) -> Self {
        let mut z = Self::zero(n);
        for (k, c) in coeffs.iter().enumerate() {
            z.coeffs[k % n] += c;
        }
        z
    }

    pub fn from_i64(n: usize, coeffs: &[i64]) -> Self {
        let v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_coeffs(n, &v)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The dimension `f(1)`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CyclicRingElem { modulus: self.modulus, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division by an integer, `None` if some coefficient is not divisible.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.modulus);
        for x in &self.coeffs {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CyclicRingElem { modulus: self.modulus, coeffs: out })
    }

    pub fn to_text(&self) -> String {
        let q: Vec<BigRational> = self.coeffs.iter().cloned().map(BigRational::from_integer).collect();
        poly_text(&q, "t")
    }
}

impl Add for &CyclicRingElem {
    type Output = CyclicRingElem;
    fn add(self, o: &CyclicRingElem) -> CyclicRingElem {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        CyclicRingElem { modulus: self.modulus, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CyclicRingElem {
    type Output = CyclicRingElem;
    fn sub(self, o: &CyclicRingElem) -> CyclicRingElem {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        CyclicRingElem { modulus: self.modulus, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CyclicRingElem {
    type Output = CyclicRingElem;
    fn neg(self) -> CyclicRingElem {
        CyclicRingElem { modulus: self.modulus, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CyclicRingElem {
    type Output = CyclicRingElem;
    fn mul(self, o: &CyclicRingElem) -> CyclicRingElem {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        let n = self.modulus;
        let mut z = CyclicRingElem::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    z.coeffs[(i + j) % n] += a * b;
                }
            }
        }
        z
    }
}

/// Restriction to the subgroup of order `d`: exponents are reduced mod `d`.
pub fn res_cyclic(f: &CyclicRingElem, d: usize) -> Result<CyclicRingElem, Error> {
    if d == 0 || f.modulus % d != 0 {
        return Err(Error::NotDivisor(d, f.modulus));
    }
    Ok(CyclicRingElem::from_coeffs(d, &f.coeffs))
}

/// Induction from the subgroup of order `d` to `Z/n`: `t^j -> t^j (1 + t^d + .. + t^(n-d))`.
pub fn ind_cyclic(h: &CyclicRingElem, n: usize) -> Result<CyclicRingElem, Error> {
    let d = h.modulus;
    if n % d != 0 {
        return Err(Error::NotDivisor(d, n));
    }
    let mut z = CyclicRingElem::zero(n);
    for (j, c) in h.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for k in (j..n).step_by(d) {
            z.coeffs[k] += c;
        }
    }
    Ok(z)
}

/// Reduction modulo `Phi_(p^m)`, landing in `Z[zeta_(p^m)]`.
pub fn mod_phi(f: &CyclicRingElem) -> Result<CycNum, Error> {
    let n = f.modulus;
    prime_power(n).ok_or(Error::NotPrimePower(n))?;
    Ok(CycNum::from_poly(n, f.coeffs.iter().cloned().map(BigRational::from_integer).collect()))
}

/// An element of `F_p[t]/(t^m - 1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModPElem {
    pub modulus: usize,
    pub p: usize,
    pub coeffs: Vec<u64>,
}

impl ModPElem {
    pub fn from_cyclic(f: &CyclicRingElem, p: usize) -> Self {
        let pb = BigInt::from(p);
        ModPElem {
            modulus: f.modulus,
            p,
            coeffs: f.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().expect("small")).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, &c)| c == u64::from(i == 0))
    }
}

/// `pi : Z[zeta_(p^m)] -> Z[t]/(t^(p^(m-1)) - 1, p)`: lift along the power
/// basis `zeta -> t`, then reduce exponents and coefficients.
pub fn pi_map(x: &CycNum) -> Result<ModPElem, Error> {
    let n = x.level();
    let (p, m) = prime_power(n).ok_or(Error::NotPrimePower(n))?;
    if !x.is_integral() {
        return Err(Error::Mismatch("pi_map needs an element of Z[zeta]".into()));
    }
    let sub = p.pow(m - 1);
    let lift: Vec<BigInt> = x.coeffs().iter().map(|c| c.to_integer()).collect();
    Ok(ModPElem::from_cyclic(&CyclicRingElem::from_coeffs(sub, &lift), p))
}

/// `[f]` for `f` in `Z[t]/(t^m - 1)`.
pub fn reduce_mod_p(f: &CyclicRingElem, p: usize) -> Result<ModPElem, Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(ModPElem::from_cyclic(f, p))
}

/// Whether the class of `f` in `Z[t]/(t^m - 1, p)` is a unit, decided by the
/// rank of multiplication by `f` over `F_p`.
pub fn unit_in_modular_quotient(f: &CyclicRingElem, p: usize) -> Result<bool, Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = f.modulus;
    let r = ModPElem::from_cyclic(f, p);
    let mat: Vec<Vec<i64>> = (0..m)
        .map(|row| (0..m).map(|col| r.coeffs[(row + m - col) % m] as i64).collect())
        .collect();
    Ok(rank_mod_p(&mat, p as i64) == m)
}

/// An element `num / p^exp` of `Z[1/p][t]/(t^n - 1)` with `exp` minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalCyclicElem {
    modulus: usize,
    p: usize,
    num: Vec<BigInt>,
    exp: u32,
}

impl fmt::Debug for LocalCyclicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / {}^{} (mod t^{}-1)", CyclicRingElem { modulus: self.modulus, coeffs: self.num.clone() }.to_text(), self.p, self.exp, self.modulus)
    }
}

impl LocalCyclicElem {
    pub fn new(num: CyclicRingElem, p: usize, exp: u32) -> Self {
        let mut z = LocalCyclicElem { modulus: num.modulus, p, num: num.coeffs, exp };
        z.normalize();
        z
    }

    pub fn from_integral(f: &CyclicRingElem, p: usize) -> Self {
        Self::new(f.clone(), p, 0)
    }

    /// From rational coefficients whose denominators are powers of `p`.
    pub fn from_rationals(n: usize, p: usize, coeffs: &[BigRational]) -> Result<Self, Error> {
        let pb = BigInt::from(p);
        let mut exp = 0u32;
        for c in coeffs {
            let mut d = c.denom().clone();
            let mut e = 0;
            while (&d % &pb).is_zero() {
                d /= &pb;
                e += 1;
            }
            if !d.is_one() {
                return Err(Error::BadDenominator(p));
            }
            exp = exp.max(e);
        }
        let scale = BigRational::from_integer(pb.pow(exp));
        let num: Vec<BigInt> = coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
        Ok(Self::new(CyclicRingElem::from_coeffs(n, &num), p, exp))
    }

    fn normalize(&mut self) {
        let pb = BigInt::from(self.p);
        while self.exp > 0 && self.num.iter().all(|c| (c % &pb).is_zero()) {
            for c in self.num.iter_mut() {
                *c /= &pb;
            }
            self.exp -= 1;
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.exp
    }

    pub fn numerator(&self) -> CyclicRingElem {
        CyclicRingElem { modulus: self.modulus, coeffs: self.num.clone() }
    }

    pub fn rationals(&self) -> Vec<BigRational> {
        let d = BigInt::from(self.p).pow(self.exp);
        self.num.iter().map(|c| BigRational::new(c.clone(), d.clone())).collect()
    }

    /// The integral element if there is no denominator.
    pub fn to_integral(&self) -> Option<CyclicRingElem> {
        (self.exp == 0).then(|| self.numerator())
    }

    fn align(&self, o: &Self) -> (Vec<BigInt>, Vec<BigInt>, u32) {
        assert_eq!((self.modulus, self.p), (o.modulus, o.p), "mismatched local elements");
        let e = self.exp.max(o.exp);
        let pb = BigInt::from(self.p);
        let a = pb.pow(e - self.exp);
        let b = pb.pow(e - o.exp);
        (
            self.num.iter().map(|c| c * &a).collect(),
            o.num.iter().map(|c| c * &b).collect(),
            e,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b, e) = self.align(o);
        let s: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Self::new(CyclicRingElem { modulus: self.modulus, coeffs: s }, self.p, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LocalCyclicElem { modulus: self.modulus, p: self.p, num: self.num.iter().map(|c| -c).collect(), exp: self.exp }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!((self.modulus, self.p), (o.modulus, o.p), "mismatched local elements");
        let prod = &self.numerator() * &o.numerator();
        Self::new(prod, self.p, self.exp + o.exp)
    }
}

/// The splitting `R(Z/p^m)[1/p] -> Z[zeta_(p^m), 1/p] x R(Z/p^(m-1))[1/p]`,
/// given by `(mod_phi, res)`.
pub fn split(f: &LocalCyclicElem) -> Result<(CycNum, LocalCyclicElem), Error> {
    let n = f.modulus;
    let (p, m) = prime_power(n).ok_or(Error::NotPrimePower(n))?;
    if p != f.p {
        return Err(Error::BadDenominator(p));
    }
    let a = CycNum::from_poly(n, f.rationals());
    let sub = p.pow(m - 1);
    let b = LocalCyclicElem::new(res_cyclic(&f.numerator(), sub)?, p, f.exp);
    Ok((a, b))
}

/// Inverse of [`split`]: `e * lift(a) + (1 - e) * section(b)` with the
/// idempotent `e = 1 - Phi_(p^m)/p`.
pub fn unsplit(a: &CycNum, b: &LocalCyclicElem) -> Result<LocalCyclicElem, Error> {
    let n = a.level();
    let (p, _) = prime_power(n).ok_or(Error::NotPrimePower(n))?;
    if b.p != p || b.modulus * p != n {
        return Err(Error::Mismatch(format!("unsplit needs b at modulus {} over {}", n / p, p)));
    }
    let lift = LocalCyclicElem::from_rationals(n, p, a.coeffs())?;
    let phi = CyclicRingElem::from_coeffs(n, &cyclotomic_poly(n).coeffs);
    let phi_over_p = LocalCyclicElem::new(phi, p, 1);
    let one = LocalCyclicElem::from_integral(&CyclicRingElem::one(n), p);
    let e = one.sub(&phi_over_p);
    let section = LocalCyclicElem::new(CyclicRingElem::from_coeffs(n, &b.num), p, b.exp);
    Ok(e.mul(&lift).add(&phi_over_p.mul(&section)))
}

/// Parses `c0 + c1*t + c2*t^2 - ...` with integer coefficients.
pub fn parse_poly(s: &str, n: usize) -> Result<CyclicRingElem, Error> {
    let q = parse_rational_poly(s)?;
    let mut coeffs = Vec::new();
    for c in q {
        if !c.is_integer() {
            return Err(Error::Parse(format!("non-integer coefficient in {:?}", s)));
        }
        coeffs.push(c.to_integer());
    }
    Ok(CyclicRingElem::from_coeffs(n, &coeffs))
}

/// Parses a polynomial in `t` with rational coefficients, lowest degree first.
pub fn parse_rational_poly(s: &str) -> Result<Vec<BigRational>, Error> {
    let bad = || Error::Parse(format!("cannot parse polynomial {:?}", s));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    let mut out: Vec<BigRational> = Vec::new();
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, deg) = if let Some(pos) = term.find('t') {
            let (c, rest) = term.split_at(pos);
            let c = c.trim_end_matches('*');
            let coef = if c.is_empty() { BigRational::one() } else { parse_rational(c).ok_or_else(bad)? };
            let deg = if rest == "t" {
                1
            } else if let Some(e) = rest.strip_prefix("t^") {
                e.parse::<usize>().map_err(|_| bad())?
            } else {
                return Err(bad());
            };
            (coef, deg)
        } else {
            (parse_rational(&term).ok_or_else(bad)?, 0)
        };
        if out.len() <= deg {
            out.resize(deg + 1, BigRational::zero());
        }
        out[deg] += if neg { -coef } else { coef };
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.parse().ok()?;
        let b: BigInt = b.parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(BigRational::new(a, b))
    } else {
        s.parse::<BigInt>().ok().map(BigRational::from_integer)
    }
}

/// True iff `(f - 1)` has all coefficients divisible by `m`.
pub fn congruent_one_mod(f: &CyclicRingElem, m: &BigInt) -> bool {
    let g = f - &CyclicRingElem::one(f.modulus);
    g.coeffs.iter().all(|c| (c % m).is_zero())
}

/// Sign-aware helper used by tests and callers: `|f(1)|`.
pub fn abs_dimension(f: &CyclicRingElem) -> BigInt {
    f.eval_one().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ce(n: usize, c: &[i64]) -> CyclicRingElem {
        CyclicRingElem::from_i64(n, c)
    }

    fn phi_elem(n: usize) -> CyclicRingElem {
        CyclicRingElem::from_coeffs(n, &cyclotomic_poly(n).coeffs)
    }

    #[test]
    fn res_examples() {
        for (p, m) in [(2usize, 1u32), (2, 3), (3, 2), (5, 1)] {
            let n = p.pow(m);
            let r = res_cyclic(&phi_elem(n), n / p).unwrap();
            assert_eq!(r, CyclicRingElem::constant(n / p, BigInt::from(p)));
        }
        assert_eq!(res_cyclic(&CyclicRingElem::one(6), 3).unwrap(), CyclicRingElem::one(3));
        assert_eq!(res_cyclic(&ce(4, &[0, 1]), 2).unwrap(), ce(2, &[0, 1]));
        assert_eq!(res_cyclic(&ce(4, &[1, 2, 3, 4]), 1).unwrap(), ce(1, &[10]));
        assert!(res_cyclic(&ce(4, &[1]), 3).is_err());
    }

    #[test]
    fn ind_examples() {
        assert_eq!(ind_cyclic(&CyclicRingElem::one(1), 2).unwrap(), ce(2, &[1, 1]));
        assert_eq!(ind_cyclic(&CyclicRingElem::one(1), 2).unwrap(), phi_elem(2));
        let h = ce(1, &[5]);
        assert_eq!(res_cyclic(&ind_cyclic(&h, 2).unwrap(), 1).unwrap(), ce(1, &[10]));
        let h = ce(3, &[1, -2, 7]);
        assert_eq!(ind_cyclic(&h, 3).unwrap(), h);
        assert!(ind_cyclic(&h, 4).is_err());
    }

    #[test]
    fn composition_identities_exhaustive() {
        for n in 1..=27usize {
            for d in crate::arith::divisors(n) {
                let sum = ind_cyclic(&CyclicRingElem::one(d), n).unwrap();
                for j in 0..d {
                    let h = CyclicRingElem::monomial(d, j);
                    let ri = res_cyclic(&ind_cyclic(&h, n).unwrap(), d).unwrap();
                    assert_eq!(ri, h.scale(&BigInt::from(n / d)));
                }
                for j in 0..n {
                    let x = CyclicRingElem::monomial(n, j);
                    let ir = ind_cyclic(&res_cyclic(&x, d).unwrap(), n).unwrap();
                    assert_eq!(ir, &x * &sum);
                }
            }
        }
    }

    #[test]
    fn mod_phi_examples() {
        assert!(mod_phi(&phi_elem(9)).unwrap().is_zero());
        assert_eq!(mod_phi(&ce(2, &[4, 1])).unwrap(), CycNum::from_int(2, 3));
        assert!(mod_phi(&CyclicRingElem::one(8)).unwrap().is_one());
        assert!(mod_phi(&ce(6, &[1])).is_err());
    }

    #[test]
    fn pi_examples() {
        let p = pi_map(&CycNum::from_int(4, 2)).unwrap();
        assert!(p.coeffs.iter().all(|&c| c == 0));
        assert!(pi_map(&CycNum::one(9)).unwrap().is_one());
        let z = pi_map(&CycNum::zeta_pow(4, 1)).unwrap();
        assert_eq!(z.coeffs, vec![0, 1]);
    }

    #[test]
    fn pi_square_commutes() {
        for n in [2usize, 4, 8, 3, 9, 25] {
            let (p, _) = prime_power(n).unwrap();
            for j in 0..n {
                let x = CyclicRingElem::monomial(n, j);
                let left = pi_map(&mod_phi(&x).unwrap()).unwrap();
                let right = reduce_mod_p(&res_cyclic(&x, n / p).unwrap(), p).unwrap();
                assert_eq!(left, right, "n = {}, j = {}", n, j);
            }
        }
    }

    #[test]
    fn modular_units() {
        assert!(!unit_in_modular_quotient(&ce(2, &[1, 1]), 2).unwrap());
        assert!(unit_in_modular_quotient(&ce(2, &[0, 1]), 2).unwrap());
        assert!(unit_in_modular_quotient(&ce(2, &[1, 2]), 2).unwrap());
        assert!(unit_in_modular_quotient(&ce(3, &[1, 1]), 4).is_err());
    }

    #[test]
    fn split_unsplit_examples() {
        let one = LocalCyclicElem::from_integral(&CyclicRingElem::one(1), 2);
        let u = unsplit(&CycNum::one(2), &one).unwrap();
        assert_eq!(u, LocalCyclicElem::from_integral(&CyclicRingElem::one(2), 2));
        let t = LocalCyclicElem::from_integral(&ce(2, &[0, 1]), 2);
        let (a, b) = split(&t).unwrap();
        assert_eq!(unsplit(&a, &b).unwrap(), t);
        let three = LocalCyclicElem::from_integral(&ce(1, &[3]), 2);
        let u = unsplit(&CycNum::one(2), &three).unwrap();
        assert_eq!(u.to_integral().unwrap(), ce(2, &[2, 1]));
        let (a, b) = split(&u).unwrap();
        assert!(a.is_one());
        assert_eq!(b, three);
    }

    #[test]
    fn local_normalization() {
        let x = LocalCyclicElem::new(ce(2, &[4, 8]), 2, 3);
        assert_eq!(x.denominator_exponent(), 1);
        assert_eq!(x.numerator(), ce(2, &[1, 2]));
        let half = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(LocalCyclicElem::from_rationals(2, 2, &[half.clone(), half]).is_err());
    }

    #[test]
    fn parse_polys() {
        assert_eq!(parse_poly("1 + t + t^2", 3).unwrap(), ce(3, &[1, 1, 1]));
        assert_eq!(parse_poly("2", 3).unwrap(), ce(3, &[2]));
        assert_eq!(parse_poly("-3*t^2 + 4 - t", 4).unwrap(), ce(4, &[4, -1, -3]));
        assert_eq!(parse_poly("t^5", 4).unwrap(), ce(4, &[0, 1]));
        assert!(parse_poly("1/2 + t", 2).is_err());
        assert!(parse_poly("x + 1", 2).is_err());
        let q = parse_rational_poly("1/2 - 1/2*t").unwrap();
        assert_eq!(q[1], BigRational::new(BigInt::from(-1), BigInt::from(2)));
    }

    use proptest::prelude::*;

    fn local_elem(p: usize, m: u32) -> impl Strategy<Value = LocalCyclicElem> {
        let n = p.pow(m);
        (proptest::collection::vec(-20i64..=20, n), 0u32..3)
            .prop_map(move |(c, e)| LocalCyclicElem::new(CyclicRingElem::from_i64(n, &c), p, e))
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

        #[test]
        fn split_roundtrip_2_2(f in local_elem(2, 2)) {
            let (a, b) = split(&f).unwrap();
            prop_assert_eq!(unsplit(&a, &b).unwrap(), f);
        }

        #[test]
        fn split_roundtrip_3_2(f in local_elem(3, 2)) {
            let (a, b) = split(&f).unwrap();
            let back = unsplit(&a, &b).unwrap();
            let (a2, b2) = split(&back).unwrap();
            prop_assert_eq!(back, f);
            prop_assert_eq!((a2, b2), (a, b));
        }

        #[test]
        fn split_is_multiplicative(f in local_elem(2, 3), g in local_elem(2, 3)) {
            let (a1, b1) = split(&f).unwrap();
            let (a2, b2) = split(&g).unwrap();
            let (a, b) = split(&f.mul(&g)).unwrap();
            prop_assert_eq!(a, &a1 * &a2);
            prop_assert_eq!(b, b1.mul(&b2));
        }

        #[test]
        fn unit_criterion_prime_power(c in proptest::collection::vec(-4i64..=4, 9)) {
            let f = CyclicRingElem::from_i64(9, &c);
            let expect = !(f.eval_one() % BigInt::from(3)).is_zero();
            prop_assert_eq!(unit_in_modular_quotient(&f, 3).unwrap(), expect);
        }

        #[test]
        fn dimension_is_ring_map(a in proptest::collection::vec(-9i64..=9, 6), b in proptest::collection::vec(-9i64..=9, 6)) {
            let f = CyclicRingElem::from_i64(6, &a);
            let g = CyclicRingElem::from_i64(6, &b);
            prop_assert_eq!((&f * &g).eval_one(), f.eval_one() * g.eval_one());
            prop_assert_eq!((&f + &g).eval_one(), f.eval_one() + g.eval_one());
        }
    }
}
