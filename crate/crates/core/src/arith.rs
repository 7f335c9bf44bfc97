//! Small integer helpers shared by the group and matrix code.

use num_integer::Integer;

/// Prime factorization as (prime, exponent) pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Inverse of `a` modulo `m`, if `a` is a unit.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Splits `n = 2^k * odd`.
pub fn two_adic(n: u64) -> (u32, u64) {
    let k = n.trailing_zeros();
    (k, n >> k)
}

/// Smallest `k` with `p^k >= n` (for `n >= 1`).
pub fn ceil_log(p: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut acc = 1u64;
    while acc < n {
        acc *= p;
        k += 1;
    }
    k
}
