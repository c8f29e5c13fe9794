//! Small integer number-theory helpers used across modules.

use num_integer::Integer;

/// Prime factorization of n ≥ 1 as (prime, exponent) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
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

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    for (p, _) in factorize(n) {
        result = result / p * (p - 1);
    }
    result
}

/// All positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let base = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// True if n has no repeated prime factor.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// b^e mod m.
pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    assert!(m > 0);
    let mut base = b % m;
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod m, if gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let a = (a % m) as i64;
    let m_i = m as i64;
    let e = i64::extended_gcd(&a, &m_i);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m_i) as u64)
}

/// Smallest primitive root mod an odd prime p.
pub fn primitive_root(p: u64) -> u64 {
    assert!(p >= 3);
    let factors = factorize(p - 1);
    'cand: for g in 2..p {
        for &(q, _) in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

/// Discrete log of a to base g mod p, for a coprime to p. Brute force;
/// p stays desk-scale here.
pub fn discrete_log(g: u64, a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let mut acc = 1u64;
    for k in 0..p - 1 {
        if acc == a {
            return Some(k);
        }
        acc = acc * g % p;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(35), 24);
        assert_eq!(divisors(35), vec![1, 5, 7, 35]);
        assert!(is_squarefree(35));
        assert!(!is_squarefree(12));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        // g^dlog = a
        for a in 1..7 {
            let k = discrete_log(3, a, 7).unwrap();
            assert_eq!(pow_mod(3, k, 7), a);
        }
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 35), Some(12));
        assert_eq!(inv_mod(5, 35), None);
    }
}
