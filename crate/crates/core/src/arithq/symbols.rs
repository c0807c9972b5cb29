use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{
    is_prime, jacobi, least_primitive_root, mod_pow, prime_factors, reduce_signed,
};

/// p-th power residue index of `a` modulo a prime `ell ≡ 1 (mod p)`:
/// the `k ∈ F_p` with `a^{(ℓ-1)/p} ≡ g^{k(ℓ-1)/p}` for the least primitive
/// root g. Zero exactly when a is a p-th power mod ℓ.
pub fn res_index(a: i64, ell: u64, p: u64) -> Result<u64> {
    let g = if is_prime(ell) {
        least_primitive_root(ell)
    } else {
        0
    };
    res_index_with_root(a, ell, p, g)
}

pub(crate) fn res_index_with_root(a: i64, ell: u64, p: u64, g: u64) -> Result<u64> {
    if !is_prime(ell) || !(ell - 1).is_multiple_of(p) {
        return Err(Error::Domain(format!(
            "{ell} is not a prime congruent to 1 mod {p}"
        )));
    }
    let a = reduce_signed(a, ell);
    if a == 0 {
        return Err(Error::Domain(format!("{ell} divides the argument")));
    }
    let e = (ell - 1) / p;
    let zeta = mod_pow(g, e, ell);
    let target = mod_pow(a, e, ell);
    let mut cur = 1u64;
    for k in 0..p {
        if cur == target {
            return Ok(k);
        }
        cur = (cur as u128 * zeta as u128 % ell as u128) as u64;
    }
    unreachable!("a^((l-1)/p) is a p-th root of unity")
}

/// Whether `a` is a nonzero p-th power residue modulo ℓ (ℓ ≡ 1 mod p).
pub(crate) fn is_pth_power(a: i64, ell: u64, p: u64) -> bool {
    let a = reduce_signed(a, ell);
    a != 0 && mod_pow(a, (ell - 1) / p, ell) == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(q) => write!(f, "{q}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn split_valuation(mut x: i64, q: i64) -> (u32, i64) {
    let mut v = 0;
    while x % q == 0 {
        x /= q;
        v += 1;
    }
    (v, x)
}

/// Quadratic Hilbert symbol `(a, b)_v ∈ {+1, -1}`.
pub fn hilbert_symbol(a: i64, b: i64, place: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("Hilbert symbol of zero".into()));
    }
    match place {
        Place::Infinity => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            let eps = |x: i64| -> u32 { (x.rem_euclid(4) == 3) as u32 };
            let omega = |x: i64| -> u32 { matches!(x.rem_euclid(8), 3 | 5) as u32 };
            let exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            Ok(if exponent % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(q) => {
            if !is_prime(q) {
                return Err(Error::Domain(format!("{q} is not prime")));
            }
            let (alpha, u) = split_valuation(a, q as i64);
            let (beta, v) = split_valuation(b, q as i64);
            let mut sign: i8 = if (alpha * beta) % 2 == 1 && q % 4 == 3 {
                -1
            } else {
                1
            };
            if beta % 2 == 1 {
                sign *= jacobi(u, q);
            }
            if alpha % 2 == 1 {
                sign *= jacobi(v, q);
            }
            Ok(sign)
        }
    }
}

/// Places where `(a, b)_v` can be nontrivial: ∞, 2 and the primes dividing ab.
pub fn relevant_places(a: i64, b: i64) -> Vec<Place> {
    let mut primes: Vec<u64> = prime_factors(a.unsigned_abs());
    primes.extend(prime_factors(b.unsigned_abs()));
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Infinity)
        .chain(primes.into_iter().map(Place::Prime))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolLedger {
    pub a: i64,
    pub b: i64,
    pub symbols: Vec<(Place, i8)>,
    pub vanishes: bool,
}

/// Cup product of the quadratic characters attached to `a` and `b`, which
/// vanishes iff every Hilbert symbol `(a, b)_v` is +1.
pub fn cup_vanishes_p2(a: i64, b: i64) -> Result<SymbolLedger> {
    let symbols: Vec<(Place, i8)> = relevant_places(a, b)
        .into_iter()
        .map(|v| hilbert_symbol(a, b, v).map(|s| (v, s)))
        .collect::<Result<_>>()?;
    let vanishes = symbols.iter().all(|&(_, s)| s == 1);
    Ok(SymbolLedger {
        a,
        b,
        symbols,
        vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn res_index_examples() {
        assert_eq!(res_index(2, 13, 3).unwrap(), 1);
        assert_eq!(res_index(3, 7, 3).unwrap(), 1);
        assert_eq!(res_index(5, 13, 3).unwrap(), 0);
        assert_ne!(res_index(5, 7, 3).unwrap(), 0);
        assert_eq!(res_index(7, 13, 3).unwrap(), 2);
        assert_eq!(res_index(13, 7, 3).unwrap(), 0);
        assert!(res_index(5, 11, 3).is_err());
        assert!(res_index(14, 7, 3).is_err());
    }

    #[test]
    fn res_index_agrees_with_discrete_log() {
        for ell in [7u64, 13, 19, 31, 37, 43] {
            let g = least_primitive_root(ell);
            let mut x = 1u64;
            for k in 0..ell - 1 {
                assert_eq!(res_index(x as i64, ell, 3).unwrap(), k % 3);
                x = x * g % ell;
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        for v in [
            Place::Infinity,
            Place::Prime(2),
            Place::Prime(3),
            Place::Prime(17),
        ] {
            assert_eq!(hilbert_symbol(1, -7, v).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol(-1, -1, Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Prime(3)).unwrap(), 1);
        assert_eq!(hilbert_symbol(2, 3, Place::Prime(3)).unwrap(), -1);
        assert!(hilbert_symbol(0, 3, Place::Prime(3)).is_err());
    }

    #[test]
    fn cup_p2_examples() {
        for (a, b) in [(34, 2), (2, 17), (17, 34), (221, 13), (13, 17), (17, 221)] {
            assert!(cup_vanishes_p2(a, b).unwrap().vanishes, "({a},{b})");
        }
        let l = cup_vanishes_p2(-1, -1).unwrap();
        assert!(!l.vanishes);
        assert_eq!(
            l.symbols,
            vec![(Place::Infinity, -1), (Place::Prime(2), -1)]
        );
    }
}
