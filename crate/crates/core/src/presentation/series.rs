use std::collections::BTreeMap;

use crate::modular::reduce_signed;

/// A noncommutative polynomial over F_p in variables `X_1, X_2, …`,
/// truncated above total degree `cutoff`.
///
/// Monomials are keyed by their multi-index `(i_1, …, i_k)`; the empty key is
/// the constant term. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSeries {
    p: u64,
    cutoff: usize,
    coeffs: BTreeMap<Vec<usize>, u64>,
}

impl NcSeries {
    pub fn one(p: u64, cutoff: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), 1 % p);
        Self { p, cutoff, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeff(&self, index: &[usize]) -> u64 {
        self.coeffs.get(index).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&[])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, u64)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    /// `(1 + X_g)^e` truncated, for any integer e.
    pub fn generator_power(g: usize, e: i64, p: u64, cutoff: usize) -> Self {
        let uni = binomial_series(e, p, cutoff);
        let mut coeffs = BTreeMap::new();
        for (k, &c) in uni.iter().enumerate() {
            if c != 0 {
                coeffs.insert(vec![g; k], c);
            }
        }
        Self { p, cutoff, coeffs }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let cutoff = self.cutoff.min(other.cutoff);
        let mut coeffs: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (a, &x) in &self.coeffs {
            for (b, &y) in &other.coeffs {
                if a.len() + b.len() > cutoff {
                    continue;
                }
                let mut key = Vec::with_capacity(a.len() + b.len());
                key.extend_from_slice(a);
                key.extend_from_slice(b);
                let slot = coeffs.entry(key).or_insert(0);
                *slot = (*slot + x * y) % self.p;
            }
        }
        coeffs.retain(|_, v| *v != 0);
        Self {
            p: self.p,
            cutoff,
            coeffs,
        }
    }

    /// Least positive degree carrying a nonzero coefficient.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(Vec::len).filter(|&d| d > 0).min()
    }
}

/// Coefficients of `(1 + X)^e` in F_p[X]/(X^{cutoff+1}).
pub(crate) fn binomial_series(e: i64, p: u64, cutoff: usize) -> Vec<u64> {
    let base: Vec<u64> = if e >= 0 {
        let mut b = vec![0u64; cutoff + 1];
        b[0] = 1 % p;
        if cutoff >= 1 {
            b[1] = 1 % p;
        }
        b
    } else {
        // (1 + X)^{-1} = 1 - X + X^2 - …
        (0..=cutoff)
            .map(|k| {
                if k % 2 == 0 {
                    1 % p
                } else {
                    reduce_signed(-1, p)
                }
            })
            .collect()
    };
    let mut acc = vec![0u64; cutoff + 1];
    acc[0] = 1 % p;
    let mut sq = base;
    let mut exp = e.unsigned_abs();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul(&acc, &sq, p);
        }
        exp >>= 1;
        if exp > 0 {
            sq = poly_mul(&sq, &sq, p);
        }
    }
    acc
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}
