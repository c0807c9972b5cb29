//! Upper-triangular unipotent matrices over Z/p^r.
//!
//! A [`UniMatrix`] of dimension `n + 1` stores only its strictly upper
//! triangular part; the diagonal is implicitly 1. Public row/column indices
//! are 1-based so that `E_{1,n+1}` reads the way it is usually written.

mod filtration;
mod plan;

pub use filtration::{Layer, WeightFiltration};
pub use plan::{abelian_plan, block_plan, sr_plan, BlockSpec, LocalPlan, PlanKind};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{ipow, is_prime};

/// Largest admissible modulus p^r. Keeps every entry product inside a u64
/// even after summing a full row.
pub const MAX_MODULUS: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct UniMatrix {
    dim: usize,
    p: u64,
    r: u32,
    modulus: u64,
    entries: Vec<u64>,
}

/// Depth of a matrix in the lower central series filtration of U_{n+1}.
/// The identity lies in every term and gets the `Infinite` sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

/// The term γ_k of the filtration: matrices vanishing at distance < k from the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiltrationLevel(usize);

impl FiltrationLevel {
    pub fn new(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain("filtration level must be at least 1".into()));
        }
        Ok(Self(k))
    }

    pub fn k(self) -> usize {
        self.0
    }
}

#[inline]
fn offset(dim: usize, i: usize) -> usize {
    // row k (0-based) holds dim-1-k entries
    i * (dim - 1) - i * i.saturating_sub(1) / 2
}

impl UniMatrix {
    pub fn identity(dim: usize, p: u64, r: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(format!("matrix size {dim} < 2")));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if r < 1 {
            return Err(Error::Domain("exponent r must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(r)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| Error::Unsupported(format!("modulus {p}^{r} too large")))?;
        Ok(Self {
            dim,
            p,
            r,
            modulus,
            entries: vec![0; dim * (dim - 1) / 2],
        })
    }

    /// Builds a matrix from 1-based `(i, j, value)` triples with `i < j`.
    pub fn from_entries(
        dim: usize,
        p: u64,
        r: u32,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut m = Self::identity(dim, p, r)?;
        for (i, j, v) in entries {
            m.set(i, j, v)?;
        }
        Ok(m)
    }

    /// `I + value * E_{i,j}` (1-based).
    pub fn elementary(dim: usize, p: u64, r: u32, i: usize, j: usize, value: i64) -> Result<Self> {
        Self::from_entries(dim, p, r, [(i, j, value)])
    }

    /// Matrix with the given near-diagonal `(a_{1,2}, …, a_{n,n+1})` and zeros elsewhere.
    pub fn from_near_diagonal(p: u64, r: u32, values: &[i64]) -> Result<Self> {
        let dim = values.len() + 1;
        Self::from_entries(
            dim,
            p,
            r,
            values.iter().enumerate().map(|(a, &v)| (a + 1, a + 2, v)),
        )
    }

    /// The regular unipotent element: every near-diagonal entry equal to 1.
    pub fn regular(dim: usize, p: u64, r: u32) -> Result<Self> {
        Self::from_near_diagonal(p, r, &vec![1; dim - 1])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// n, for a matrix in U_{n+1}.
    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        // 0-based i < j
        offset(self.dim, i) + (j - i - 1)
    }

    #[inline]
    pub(crate) fn get0(&self, i: usize, j: usize) -> u64 {
        self.entries[self.idx(i, j)]
    }

    #[inline]
    pub(crate) fn set0(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.entries[k] = v % self.modulus;
    }

    /// Entry at 1-based `(i, j)`; diagonal entries are 1 and lower entries 0.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        assert!(
            i >= 1 && j >= 1 && i <= self.dim && j <= self.dim,
            "index out of range"
        );
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.get0(i - 1, j - 1),
            std::cmp::Ordering::Equal => 1 % self.modulus,
            std::cmp::Ordering::Greater => 0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) -> Result<()> {
        if !(1 <= i && i < j && j <= self.dim) {
            return Err(Error::Dimension(format!(
                "position ({i},{j}) is not strictly upper triangular in size {}",
                self.dim
            )));
        }
        let v = crate::modular::reduce_signed(value, self.modulus);
        self.set0(i - 1, j - 1, v);
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.modulus != other.modulus {
            return Err(Error::Dimension(format!(
                "cannot combine U_{}(Z/{}) with U_{}(Z/{})",
                self.dim, self.modulus, other.dim, other.modulus
            )));
        }
        Ok(())
    }

    /// Group law of U_{n+1}(Z/p^r).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul(other))
    }

    /// Product without the compatibility check; callers guarantee matching shapes.
    pub(crate) fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let m = self.modulus;
        let mut out = vec![0u64; self.entries.len()];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut acc = self.get0(i, j) + other.get0(i, j);
                for l in (i + 1)..j {
                    acc += self.get0(i, l) * other.get0(l, j);
                }
                out[k] = acc % m;
                k += 1;
            }
        }
        self.with_entries(out)
    }

    /// Inverse via the finite Neumann series I - N + N^2 - …, where N is the
    /// strictly upper part. Exact and division-free.
    pub fn inverse(&self) -> Self {
        let m = self.modulus;
        // `power` holds the strictly upper entries of N^k
        let mut power = self.entries.clone();
        let mut total = self.identity_like();
        for k in 1..self.dim {
            if k > 1 {
                power = self.nil_mul(&power);
            }
            for (t, &x) in total.entries.iter_mut().zip(&power) {
                *t = if k % 2 == 1 {
                    (*t + m - x) % m
                } else {
                    (*t + x) % m
                };
            }
        }
        total
    }

    /// Strictly upper entries of `P * N` for nilpotent `P` (given by entries) and N = self - I.
    fn nil_mul(&self, lhs: &[u64]) -> Vec<u64> {
        let n = self.dim;
        let mut out = vec![0u64; lhs.len()];
        for i in 0..n {
            for j in (i + 1)..n {
                let mut acc = 0u64;
                for l in (i + 1)..j {
                    acc += lhs[self.idx(i, l)] * self.get0(l, j);
                }
                out[self.idx(i, j)] = acc % self.modulus;
            }
        }
        out
    }

    fn with_entries(&self, entries: Vec<u64>) -> Self {
        Self {
            dim: self.dim,
            p: self.p,
            r: self.r,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn identity_like(&self) -> Self {
        self.with_entries(vec![0; self.entries.len()])
    }

    /// `self^exp` for a signed exponent.
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        base.pow_unsigned(exp.unsigned_abs())
    }

    pub fn pow_unsigned(&self, mut exp: u64) -> Self {
        let mut acc = self.identity_like();
        let mut b = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&b);
            }
            exp >>= 1;
            if exp > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul(other).mul(&self.inverse()).mul(&other.inverse()))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.mul(other) == other.mul(self))
    }

    /// Least k ≥ 1 with `self^k = I`; always a power of p.
    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut ord = 1u64;
        while !x.is_identity() {
            x = x.pow_unsigned(self.p);
            ord *= self.p;
        }
        ord
    }

    /// `(a_{1,2}, …, a_{n,n+1})`.
    pub fn near_diagonal(&self) -> Vec<u64> {
        (0..self.dim - 1).map(|a| self.get0(a, a + 1)).collect()
    }

    /// Largest k with `self ∈ γ_k`: the least distance from the diagonal
    /// of a nonzero entry.
    pub fn filtration_depth(&self) -> Depth {
        (1..self.dim)
            .find(|&d| (0..self.dim - d).any(|i| self.get0(i, i + d) != 0))
            .map_or(Depth::Infinite, Depth::Finite)
    }

    /// Canonical representative of the coset modulo γ_k: entries at distance ≥ k zeroed.
    pub fn reduce_mod_level(&self, level: FiltrationLevel) -> Self {
        let mut out = self.clone();
        for d in level.k()..self.dim {
            for i in 0..self.dim - d {
                out.set0(i, i + d, 0);
            }
        }
        out
    }

    /// Entrywise reduction to Z/p^s for s ≤ r.
    pub fn reduce_modulus(&self, s: u32) -> Result<Self> {
        if s < 1 || s > self.r {
            return Err(Error::Domain(format!(
                "cannot reduce Z/{}^{} to exponent {s}",
                self.p, self.r
            )));
        }
        let modulus = ipow(self.p, s);
        Ok(Self {
            dim: self.dim,
            p: self.p,
            r: s,
            modulus,
            entries: self.entries.iter().map(|e| e % modulus).collect(),
        })
    }

    /// Value of the corner entry (1, n+1), which spans the center.
    pub fn corner(&self) -> u64 {
        self.get0(0, self.dim - 1)
    }

    /// Drops the corner entry: the canonical representative in U_{n+1}/Z_{n+1}.
    pub fn mod_center(&self) -> Self {
        let mut out = self.clone();
        out.set0(0, self.dim - 1, 0);
        out
    }

    /// Whether every entry other than the corner vanishes.
    pub fn is_central(&self) -> bool {
        self.mod_center().is_identity()
    }

    #[cfg(test)]
    pub(crate) fn entries_raw(&self) -> &[u64] {
        &self.entries
    }

    pub(crate) fn entries_raw_mut(&mut self) -> &mut [u64] {
        &mut self.entries
    }

    /// Full matrix rows, diagonal and zeros included.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        (1..=self.dim)
            .map(|i| (1..=self.dim).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Exponent of U_{n+1}(Z/p^r): p^{r - 1 + ⌈log_p(n+1)⌉}.
pub fn group_exponent(n: usize, p: u64, r: u32) -> Result<u64> {
    let mut ceil_log = 0u32;
    while (ipow(p, ceil_log) as usize) < n + 1 {
        ceil_log += 1;
    }
    let closed = ipow(p, r - 1 + ceil_log);
    debug_assert_eq!(closed, UniMatrix::regular(n + 1, p, r)?.order());
    Ok(closed)
}

impl fmt::Debug for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}(Z/{})", self.dim, self.modulus)?;
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Wire form: `{n, p, r, rows}` with `rows` the full (n+1)x(n+1) matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub p: u64,
    pub r: u32,
    pub rows: Vec<Vec<u64>>,
}

impl From<UniMatrix> for MatrixJson {
    fn from(m: UniMatrix) -> Self {
        MatrixJson {
            n: m.n(),
            p: m.p,
            r: m.r,
            rows: m.rows(),
        }
    }
}

impl TryFrom<MatrixJson> for UniMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let dim = j.n + 1;
        let mut m = UniMatrix::identity(dim, j.p, j.r)?;
        if j.rows.len() != dim || j.rows.iter().any(|row| row.len() != dim) {
            return Err(Error::Dimension(format!("expected {dim}x{dim} rows")));
        }
        for (i, row) in j.rows.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                let v = v % m.modulus;
                match i.cmp(&k) {
                    std::cmp::Ordering::Less => m.set0(i, k, v),
                    std::cmp::Ordering::Equal if v != 1 % m.modulus => {
                        return Err(Error::Domain(format!(
                            "diagonal entry ({},{}) is not 1",
                            i + 1,
                            k + 1
                        )))
                    }
                    std::cmp::Ordering::Greater if v != 0 => {
                        return Err(Error::Domain(format!(
                            "entry ({},{}) below the diagonal",
                            i + 1,
                            k + 1
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(m)
    }
}
