//! Exact arithmetic in cyclotomic fields, cyclotomic polynomials and the
//! idempotents `psi_k` of `Z[t, 1/n]/(t^n - 1)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{divisors, euler_phi, gcd};
use crate::linalg;
use crate::Error;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The cyclotomic polynomial `Phi_n` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    pub index: usize,
    pub coeffs: Vec<BigInt>,
}

impl CyclotomicPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates at an integer.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

fn phi_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn phi_coeffs(n: usize) -> Arc<Vec<BigInt>> {
    if let Some(c) = phi_cache().lock().unwrap().get(&n) {
        return c.clone();
    }
    // t^n - 1 divided by Phi_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    num[0] = BigInt::from(-1);
    num[n] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let (quo, rem) = poly_divmod_monic(&num, &phi_coeffs(d));
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        num = quo;
    }
    let c = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, c.clone());
    c
}

/// `Phi_n`, computed by dividing `t^n - 1` by `Phi_d` for the proper divisors `d`.
pub fn cyclotomic_poly(n: usize) -> CyclotomicPoly {
    assert!(n >= 1, "cyclotomic_poly needs n >= 1");
    CyclotomicPoly { index: n, coeffs: phi_coeffs(n).as_ref().clone() }
}

/// Division by a monic integer polynomial. Returns (quotient, remainder).
pub(crate) fn poly_divmod_monic(a: &[BigInt], m: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return (vec![BigInt::zero()], r);
    }
    let mut quo = vec![BigInt::zero(); r.len() - dm];
    for i in (dm..r.len()).rev() {
        let c = std::mem::take(&mut r[i]);
        if c.is_zero() {
            continue;
        }
        for j in 0..dm {
            r[i - dm + j] -= &c * &m[j];
        }
        quo[i - dm] = c;
    }
    r.truncate(dm);
    (quo, r)
}

fn reduce_rational(mut a: Vec<BigRational>, m: &[BigInt]) -> Vec<BigRational> {
    let dm = m.len() - 1;
    if a.len() > dm {
        for i in (dm..a.len()).rev() {
            let c = std::mem::replace(&mut a[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..dm {
                if !m[j].is_zero() {
                    a[i - dm + j] -= &c * BigRational::from_integer(m[j].clone());
                }
            }
        }
    }
    a.resize(dm, BigRational::zero());
    a
}

/// An element of `Q(zeta_n)` in the power basis `1, zeta, .., zeta^(phi(n)-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    level: usize,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero(level: usize) -> Self {
        CycNum { level, coeffs: vec![BigRational::zero(); euler_phi(level)] }
    }

    pub fn one(level: usize) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_int(level: usize, a: i64) -> Self {
        Self::from_rational(level, q(a))
    }

    pub fn from_rational(level: usize, a: BigRational) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = a;
        z
    }

    /// Reduces an arbitrary rational polynomial in `zeta_n`.
    pub fn from_poly(level: usize, poly: Vec<BigRational>) -> Self {
        CycNum { level, coeffs: reduce_rational(poly, &phi_coeffs(level)) }
    }

    /// Reduces a rational coefficient vector indexed by exponents mod `level`.
    pub fn from_exponents(level: usize, exps: &[BigRational]) -> Self {
        let mut poly = vec![BigRational::zero(); level];
        for (k, c) in exps.iter().enumerate() {
            poly[k % level] += c;
        }
        Self::from_poly(level, poly)
    }

    /// `zeta_n^k` for any integer k.
    pub fn zeta_pow(level: usize, k: i64) -> Self {
        let e = k.rem_euclid(level as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(level, poly)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// True iff the element lies in `Z[zeta_n]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycNum { level: self.level, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Re-expresses the element at a level divisible by the current one.
    pub fn lift_to(&self, level: usize) -> Self {
        assert_eq!(level % self.level, 0, "lift_to needs a multiple of the level");
        if level == self.level {
            return self.clone();
        }
        let step = level / self.level;
        let mut poly = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::from_poly(level, poly)
    }

    /// The Galois automorphism `zeta -> zeta^j`.
    pub fn galois(&self, j: usize) -> Result<Self, Error> {
        if gcd(j % self.level, self.level) != 1 && self.level > 1 {
            return Err(Error::NotCoprime(j, self.level));
        }
        let mut exps = vec![BigRational::zero(); self.level];
        for (i, c) in self.coeffs.iter().enumerate() {
            exps[(i * j) % self.level] += c;
        }
        Ok(Self::from_poly(self.level, exps))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(self.level - 1 + usize::from(self.level == 1)).expect("coprime")
    }

    /// Product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let n = self.level;
        let mut acc = CycNum::one(n);
        for j in 1..=n {
            if gcd(j, n) == 1 {
                acc = &acc * &self.galois(j).expect("coprime");
            }
        }
        acc.as_rational().expect("norm is rational")
    }

    /// The multiplication-by-self matrix on the power basis (column i is self * zeta^i).
    pub fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.coeffs.len();
        let cols: Vec<CycNum> = (0..d).map(|i| self * &CycNum::zeta_pow(self.level, i as i64)).collect();
        (0..d).map(|r| (0..d).map(|c| cols[c].coeffs[r].clone()).collect()).collect()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.mult_matrix();
        let mut e = vec![BigRational::zero(); self.coeffs.len()];
        e[0] = BigRational::one();
        let x = linalg::solve_rational(&m, e.len(), &e)?;
        Some(CycNum { level: self.level, coeffs: x })
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Coefficients as machine integers when integral and small.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Text form `a0 + a1*z + a2*z^2` with `z = zeta_n`.
    pub fn to_text(&self) -> String {
        poly_text(&self.coeffs, "z")
    }
}

pub(crate) fn poly_text(coeffs: &[BigRational], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let mag = c.abs();
        let body = if i == 0 {
            mag.to_string()
        } else if mag.is_one() {
            mono
        } else {
            format!("{}*{}", mag, mono)
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{}", body) } else { body });
        } else {
            parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.to_text(), self.level)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        assert_eq!(self.level, o.level, "level mismatch");
        CycNum { level: self.level, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        assert_eq!(self.level, o.level, "level mismatch");
        CycNum { level: self.level, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { level: self.level, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        assert_eq!(self.level, o.level, "level mismatch");
        let d = self.coeffs.len();
        let mut poly = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        CycNum::from_poly(self.level, poly)
    }
}

/// Element of `Q[t]/(t^n - 1)`, coefficients of `t^0 .. t^(n-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalCyclicPoly {
    pub modulus: usize,
    pub coeffs: Vec<BigRational>,
}

impl fmt::Debug for RationalCyclicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod t^{}-1", poly_text(&self.coeffs, "t"), self.modulus)
    }
}

impl RationalCyclicPoly {
    pub fn zero(n: usize) -> Self {
        RationalCyclicPoly { modulus: n, coeffs: vec![BigRational::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = BigRational::one();
        z
    }

    pub fn from_poly(n: usize, poly: &[BigRational]) -> Self {
        let mut z = Self::zero(n);
        for (k, c) in poly.iter().enumerate() {
            z.coeffs[k % n] += c;
        }
        z
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalCyclicPoly {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.modulus;
        let mut z = Self::zero(n);
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True iff every denominator divides a power of `m`.
    pub fn denominators_divide_power_of(&self, m: usize) -> bool {
        self.coeffs.iter().all(|c| {
            let mut d = c.denom().clone();
            let mb = BigInt::from(m);
            loop {
                let g = d.gcd(&mb);
                if g.is_one() {
                    break;
                }
                while (&d % &g).is_zero() {
                    d /= &g;
                }
            }
            d.is_one()
        })
    }
}

/// The idempotent `psi_k = t (t^n - 1) Phi_k'(t) / (n Phi_k(t))` reduced mod `t^n - 1`.
pub fn psi_idempotent(k: usize, n: usize) -> Result<RationalCyclicPoly, Error> {
    if k == 0 || n == 0 || n % k != 0 {
        return Err(Error::NotDivisor(k, n));
    }
    let phik = phi_coeffs(k);
    let mut tn1 = vec![BigInt::zero(); n + 1];
    tn1[0] = BigInt::from(-1);
    tn1[n] = BigInt::one();
    let (cof, rem) = poly_divmod_monic(&tn1, &phik);
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal("Phi_k does not divide t^n - 1".into()));
    }
    let deriv: Vec<BigInt> = phik.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut prod = vec![BigInt::zero(); cof.len() + deriv.len() + 1];
    for (i, a) in cof.iter().enumerate() {
        for (j, b) in deriv.iter().enumerate() {
            prod[i + j + 1] += a * b;
        }
    }
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    let poly: Vec<BigRational> =
        prod.into_iter().map(|c| BigRational::from_integer(c) * &inv_n).collect();
    let psi = RationalCyclicPoly::from_poly(n, &poly);
    if !psi.denominators_divide_power_of(n) {
        return Err(Error::Internal(format!("psi_{} at level {} has a bad denominator", k, n)));
    }
    Ok(psi)
}

/// Integer matrix of `zeta -> zeta^j` on the power basis (column i = image of zeta^i).
fn galois_matrix(n: usize, j: usize) -> Vec<Vec<BigInt>> {
    let d = euler_phi(n);
    let cols: Vec<CycNum> = (0..d)
        .map(|i| CycNum::zeta_pow(n, i as i64).galois(j).expect("coprime"))
        .collect();
    (0..d)
        .map(|r| (0..d).map(|c| cols[c].coeffs[r].to_integer()).collect())
        .collect()
}

/// A Z-basis, in Hermite normal form, of the elements of `Z[zeta_n]` fixed by
/// every `zeta -> zeta^j`, `j` in `w`.
pub fn fixed_sublattice(n: usize, w: &[usize]) -> Result<Vec<CycNum>, Error> {
    for &j in w {
        if n > 1 && gcd(j % n, n) != 1 {
            return Err(Error::NotCoprime(j, n));
        }
    }
    let d = euler_phi(n);
    let mut stacked: Vec<Vec<BigInt>> = Vec::new();
    for &j in w {
        let mut m = galois_matrix(n, j);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= BigInt::one();
        }
        stacked.extend(m);
    }
    let basis = if stacked.is_empty() {
        (0..d)
            .map(|i| (0..d).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        linalg::integer_kernel(&stacked, d)
    };
    Ok(basis
        .into_iter()
        .map(|v| CycNum { level: n, coeffs: v.into_iter().map(BigRational::from_integer).collect() })
        .collect())
}
