//! Elementary modular arithmetic on machine integers.
//!
//! Everything here works on `u64` with `u128` intermediates, which is plenty
//! for the moduli this crate deals with (primes below a few million, p^r
//! below 2^31).

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Reduces a signed integer into `0..modulus`.
pub fn reduce_signed(a: i64, modulus: u64) -> u64 {
    let m = modulus as i128;
    (((a as i128) % m + m) % m) as u64
}

/// Inverse modulo a prime, by Fermat.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least primitive root modulo an odd prime (or 2).
pub fn least_primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, (q - 1) / f, q) != 1))
        .expect("prime modulus has a primitive root")
}

/// Sieve of Eratosthenes, inclusive bound.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn ipow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("integer power overflow")
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: i64, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs odd modulus");
    let mut a = reduce_signed(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let sieve = primes_up_to(5000);
        let direct: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, direct);
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(least_primitive_root(7), 3);
        assert_eq!(least_primitive_root(13), 2);
        assert_eq!(least_primitive_root(41), 6);
    }

    #[test]
    fn jacobi_against_euler() {
        for &q in &[3u64, 5, 7, 11, 13, 101] {
            for a in -30i64..30 {
                let r = reduce_signed(a, q);
                let euler = match mod_pow(r, (q - 1) / 2, q) {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(jacobi(a, q), euler, "a={a} q={q}");
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(18, 3), 2);
        assert_eq!(valuation(7, 3), 0);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }
}
