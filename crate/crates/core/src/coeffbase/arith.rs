use alloc::vec::Vec;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

/// Largest relative precision `r` with `p^r < 2^62`, so products of two
/// residues fit in `u128`.
pub fn max_rel_precision(p: u64) -> i64 {
    let mut r = 0;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 62) {
        acc *= p as u128;
        r += 1;
    }
    r
}

pub(crate) fn pow_u128(p: u64, e: i64) -> u128 {
    debug_assert!(e >= 0);
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= p as u128;
    }
    acc
}

pub(crate) fn mod_pow(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn mod_inv(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u128)
}

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
