//! Small integer helpers.

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n > 1 && factorize(n) == vec![(n, 1)]
}

/// True iff `n = p^k` for some `k >= 0`.
pub fn is_power_of(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// `(p, m)` with `n = p^m`, `m >= 1`.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    match factorize(n).as_slice() {
        [(p, m)] => Some((*p, *m)),
        _ => None,
    }
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn euler_phi(n: usize) -> usize {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert!(is_power_of(27, 3) && is_power_of(1, 3) && !is_power_of(12, 2));
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert!(is_prime(13) && !is_prime(1) && !is_prime(9));
    }
}
