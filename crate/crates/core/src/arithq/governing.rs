use serde::Serialize;

use super::symbols::res_index;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, span_elements};
use crate::modular::{is_prime, mod_pow, prime_factors};

/// Representatives of `V^T / (Q^×)^p` for odd p: the primes of T themselves,
/// since `V^∅` is trivial modulo p-th powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoverningBasis {
    pub p: u64,
    #[serde(rename = "T")]
    pub t: Vec<u64>,
    pub basis: Vec<u64>,
}

impl GoverningBasis {
    pub fn new(p: u64, t: &[u64]) -> Result<Self> {
        check_odd_prime(p)?;
        let mut basis = t.to_vec();
        basis.sort_unstable();
        basis.dedup();
        if basis.len() != t.len() {
            return Err(Error::Domain("T contains a repeated prime".into()));
        }
        if let Some(&q) = basis.iter().find(|&&q| !is_prime(q)) {
            return Err(Error::Domain(format!("{q} is not prime")));
        }
        Ok(Self {
            p,
            t: t.to_vec(),
            basis,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrasMunnierCertificate {
    pub p: u64,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    /// Coefficients `a_i ∈ F_p^×` with `Σ a_i σ_{q_i} = 0`.
    pub a: Vec<u64>,
    #[serde(rename = "basisT")]
    pub basis_t: Vec<u64>,
}

impl GrasMunnierCertificate {
    /// Re-checks that every coefficient is nonzero and the relation holds.
    pub fn verify(&self) -> Result<bool> {
        if self.a.len() != self.s.len() || self.a.iter().any(|&x| x == 0 || x >= self.p) {
            return Ok(false);
        }
        let m = frobenius_matrix(&self.s, &self.basis_t, self.p)?;
        Ok(m.iter()
            .all(|row| row.iter().zip(&self.a).map(|(x, a)| x * a).sum::<u64>() % self.p == 0))
    }

    /// The character this certificate describes, `Σ a_i χ_{q_i}`, trivial on T.
    pub fn character(&self) -> Result<super::CharacterQ> {
        super::CharacterQ::new(
            self.p,
            self.s.iter().zip(&self.a).map(|(&q, &a)| (q, a as i64)),
        )
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Unsupported(
            "governing-field computations need odd p".into(),
        ));
    }
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(())
}

fn check_sets(s: &[u64], t: &[u64], p: u64) -> Result<()> {
    check_odd_prime(p)?;
    for &q in s {
        if !is_prime(q) || q % p != 1 {
            return Err(Error::Domain(format!(
                "{q} in S is not a prime congruent to 1 mod {p}"
            )));
        }
    }
    for &q in t {
        if !is_prime(q) {
            return Err(Error::Domain(format!("{q} in T is not prime")));
        }
        if s.contains(&q) {
            return Err(Error::Domain(format!("{q} lies in both S and T")));
        }
    }
    let mut all = s.to_vec();
    all.sort_unstable();
    all.dedup();
    if all.len() != s.len() {
        return Err(Error::Domain("S contains a repeated prime".into()));
    }
    Ok(())
}

/// `|T| × |S|` matrix whose column i is the Frobenius `σ_{q_i}` in the
/// governing field, coordinate at `t` being `res_index(t, q_i, p)`.
pub fn frobenius_matrix(s: &[u64], t: &[u64], p: u64) -> Result<Vec<Vec<u64>>> {
    t.iter()
        .map(|&tp| s.iter().map(|&q| res_index(tp as i64, q, p)).collect())
        .collect()
}

/// Existence of a Z/p-extension of Q ramified exactly at S and split
/// completely at T, decided by a relation `Σ a_i σ_{q_i} = 0` with every
/// `a_i ≠ 0`. Returns the lexicographically least such relation.
pub fn gras_munnier(s: &[u64], t: &[u64], p: u64) -> Result<Option<GrasMunnierCertificate>> {
    check_sets(s, t, p)?;
    let basis = GoverningBasis::new(p, t)?;
    let m = frobenius_matrix(s, &basis.basis, p)?;
    let kernel = kernel_basis(&m, s.len(), p);
    let mut span = span_elements(&kernel, s.len(), p);
    span.sort();
    Ok(span
        .into_iter()
        .find(|v| v.iter().all(|&x| x != 0))
        .map(|a| GrasMunnierCertificate {
            p,
            s: s.to_vec(),
            a,
            basis_t: basis.basis,
        }))
}

/// Discrete logarithm table mod a prime q, using the largest primitive root.
fn dlog_table(q: u64) -> Vec<u64> {
    let factors = prime_factors(q - 1);
    let h = (2..q)
        .rev()
        .find(|&h| factors.iter().all(|&f| mod_pow(h, (q - 1) / f, q) != 1))
        .unwrap_or(1);
    let mut table = vec![0u64; q as usize];
    let mut x = 1u64;
    for k in 0..q - 1 {
        table[x as usize] = k;
        x = x * h % q;
    }
    table
}

/// Brute-force counterpart of [`gras_munnier`]: enumerates every Z/p-valued
/// character of `(Z/∏S)^×` and looks for one that is nontrivial on each
/// factor `(Z/q)^×` and kills every prime of T.
///
/// `budget` bounds both `∏S` and the number of characters enumerated.
pub fn dirichlet_oracle(s: &[u64], t: &[u64], p: u64, budget: u64) -> Result<bool> {
    let modulus = s
        .iter()
        .try_fold(1u64, |acc, &q| acc.checked_mul(q))
        .unwrap_or(u64::MAX);
    let count = (p as u128).pow(s.len() as u32);
    if modulus > budget || count > budget as u128 {
        return Err(Error::BudgetExceeded(budget));
    }
    if s.iter().any(|&q| q % p != 1) {
        return Ok(false);
    }
    let logs: Vec<Vec<u64>> = s
        .iter()
        .map(|&q| {
            let table = dlog_table(q);
            t.iter().map(|&tp| table[(tp % q) as usize] % p).collect()
        })
        .collect();
    // Only characters with every component nonzero matter.
    let mut c = vec![1u64; s.len()];
    loop {
        let kills_t =
            (0..t.len()).all(|j| (0..s.len()).map(|i| c[i] * logs[i][j]).sum::<u64>() % p == 0);
        if kills_t {
            return Ok(true);
        }
        let mut i = s.len();
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if c[i] + 1 < p {
                c[i] += 1;
                break;
            }
            c[i] = 1;
        }
    }
}
