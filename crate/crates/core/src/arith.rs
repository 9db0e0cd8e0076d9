//! Small integer helpers.

use num_bigint::BigUint;
use num_integer::Integer;

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// `(p, k)` with `n = p^k`, if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = prime_factors(n);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let (mut m, mut k) = (n, 0);
    while m > 1 {
        m /= p;
        k += 1;
    }
    Some((p, k))
}

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Least primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let f = prime_factors(p - 1);
    (2..p)
        .find(|&g| f.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime modulus has a primitive root")
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// `|PSL_d(q)|`.
pub fn psl_order(d: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let mut order = qb.pow(d * (d - 1) / 2);
    for i in 2..=d {
        order *= qb.pow(i) - 1u32;
    }
    order / gcd(d as u64, q - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(phi(1), 1);
        assert_eq!(phi(10), 4);
        assert_eq!(phi(12), 4);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(11), 2);
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn psl_orders() {
        assert_eq!(psl_order(2, 5), BigUint::from(60u32));
        assert_eq!(psl_order(3, 2), BigUint::from(168u32));
        assert_eq!(psl_order(2, 11), BigUint::from(660u32));
        assert_eq!(psl_order(4, 2), BigUint::from(20160u32));
        assert_eq!(psl_order(2, 9), BigUint::from(360u32));
    }
}
