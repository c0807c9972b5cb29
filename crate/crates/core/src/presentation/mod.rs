//! Finitely presented pro-p groups, the Magnus expansion over F_p and the
//! Zassenhaus filtration it detects.
//!
//! A word `w` lies in the n-th Zassenhaus term `F_(n)` exactly when every
//! Magnus coefficient `ε_I(w)` with `1 ≤ |I| < n` vanishes; its depth is the
//! first degree carrying a nonzero coefficient.

mod series;
mod word;

pub use series::NcSeries;
pub use word::Word;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::is_prime;
use crate::unipotent::UniMatrix;

/// A pro-p group `⟨x_1, …, x_g | relators⟩`.
///
/// Every relator must have all exponent sums divisible by p, so that it lies
/// in `F^p[F, F]` and the generators stay minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    num_generators: usize,
    relators: Vec<Word>,
    p: u64,
}

impl Presentation {
    pub fn new(num_generators: usize, relators: Vec<Word>, p: u64) -> Result<Self> {
        if num_generators < 1 {
            return Err(Error::Domain(
                "a presentation needs at least one generator".into(),
            ));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        for (k, r) in relators.iter().enumerate() {
            if r.max_generator() > num_generators {
                return Err(Error::Domain(format!(
                    "relator {} uses x{} but there are only {num_generators} generators",
                    k + 1,
                    r.max_generator()
                )));
            }
            for g in 1..=num_generators {
                if r.exponent_sum(g).rem_euclid(p as i64) != 0 {
                    return Err(Error::Domain(format!(
                        "relator {} has exponent sum {} in x{g}, not divisible by {p}",
                        k + 1,
                        r.exponent_sum(g)
                    )));
                }
            }
        }
        Ok(Self {
            num_generators,
            relators,
            p,
        })
    }

    /// The free pro-p group on `g` generators.
    pub fn free(g: usize, p: u64) -> Result<Self> {
        Self::new(g, Vec::new(), p)
    }

    /// `⟨x | x^e⟩`.
    pub fn cyclic(e: i64, p: u64) -> Result<Self> {
        Self::new(1, vec![Word::power_of_generator(1, e)], p)
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Parses the text format
    ///
    /// ```text
    /// gens: 2
    /// rel: x1^3 x2 x1^-1 x2^-1
    /// ```
    ///
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str, p: u64) -> Result<Self> {
        let mut gens: Option<usize> = None;
        let mut relators = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
            match key.trim() {
                "gens" => {
                    if gens.is_some() {
                        return Err(err("duplicate `gens` line".into()));
                    }
                    let g = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad generator count `{}`", value.trim())))?;
                    gens = Some(g);
                }
                "rel" => {
                    let w = Word::parse(value).map_err(err)?;
                    if let Some(g) = gens {
                        if w.max_generator() > g {
                            return Err(err(format!(
                                "x{} exceeds the {g} generators",
                                w.max_generator()
                            )));
                        }
                    }
                    for g in 1..=w.max_generator() {
                        if w.exponent_sum(g).rem_euclid(p as i64) != 0 {
                            return Err(err(format!(
                                "exponent sum of x{g} is not divisible by {p}"
                            )));
                        }
                    }
                    relators.push(w);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let g = gens.ok_or(Error::Parse {
            line: 0,
            msg: "missing `gens:` line".into(),
        })?;
        Self::new(g, relators, p)
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn exponent_sum_matrix(&self) -> Vec<Vec<u64>> {
        self.relators
            .iter()
            .map(|r| {
                (1..=self.num_generators)
                    .map(|g| r.exponent_sum(g).rem_euclid(self.p as i64) as u64)
                    .collect()
            })
            .collect()
    }
}

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "gens: {}", self.num_generators)?;
        for r in &self.relators {
            writeln!(f, "rel: {r}")?;
        }
        Ok(())
    }
}

/// Image of `w` under `x_i ↦ 1 + X_i` in F_p⟨⟨X⟩⟩, truncated above degree `cutoff`.
pub fn magnus_expand(w: &Word, p: u64, cutoff: usize) -> NcSeries {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    w.letters()
        .iter()
        .fold(NcSeries::one(p, cutoff), |acc, &(g, e)| {
            acc.mul(&NcSeries::generator_power(g, e, p, cutoff))
        })
}

/// Magnus coefficient `ε_I(w)` of the monomial `X_{i_1} ⋯ X_{i_k}`.
pub fn epsilon(w: &Word, index: &[usize], p: u64) -> u64 {
    if index.is_empty() {
        return 1 % p;
    }
    magnus_expand(w, p, index.len()).coeff(index)
}

/// Zassenhaus depth of a word, searched up to a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WordDepth {
    Exact(usize),
    /// No nonzero coefficient up to the cap: the word lies in `F_(cap+1)`.
    Exceeds(usize),
}

impl WordDepth {
    pub fn is_greater_than(self, n: usize) -> bool {
        match self {
            WordDepth::Exact(d) => d > n,
            WordDepth::Exceeds(cap) => cap >= n,
        }
    }
}

pub fn zassenhaus_depth(w: &Word, p: u64, cap: usize) -> WordDepth {
    match magnus_expand(w, p, cap).min_positive_degree() {
        Some(d) => WordDepth::Exact(d),
        None => WordDepth::Exceeds(cap),
    }
}

/// True iff every relator has depth at least `n + 1`, which forces the strong
/// k-fold Massey property for every `2 ≤ k ≤ n`.
pub fn vogel_check(presentation: &Presentation, n: usize) -> bool {
    assert!(n >= 2, "vogel_check needs n >= 2");
    presentation
        .relators()
        .iter()
        .all(|r| zassenhaus_depth(r, presentation.p(), n).is_greater_than(n))
}

/// `ρ_I(w) ∈ U_{n+1}(F_p)` for `n = |I|`, with `(a, b)` entry
/// `ε_{(i_a, …, i_{b-1})}(w)`. A homomorphism in `w`.
pub fn magnus_representation(index: &[usize], w: &Word, p: u64) -> Result<UniMatrix> {
    let n = index.len();
    if n < 1 {
        return Err(Error::Domain("multi-index must be nonempty".into()));
    }
    if index.contains(&0) {
        return Err(Error::Domain("multi-index entries are 1-based".into()));
    }
    let id = UniMatrix::identity(n + 1, p, 1)?;
    let mut acc = id.clone();
    for &(g, e) in w.letters() {
        let uni = series::binomial_series(e, p, n);
        let mut letter = id.clone();
        for a in 0..n {
            for b in (a + 1)..=n {
                if index[a..b].iter().all(|&i| i == g) {
                    letter.set0(a, b, uni[b - a]);
                }
            }
        }
        acc = acc.mul(&letter);
    }
    Ok(acc)
}

/// Pairing of the Massey obstruction of `barlift` with the relator `f`.
///
/// `barlift` holds generator images in `U_{n+1}/Z_{n+1}` (the corner entry of
/// each is ignored). The relator is evaluated on the canonical preimages and
/// lands in the center; its corner entry is returned. The value does not
/// depend on the preimages because the exponent sums of `f` vanish mod p.
pub fn obstruction_on_relator(
    presentation: &Presentation,
    barlift: &[UniMatrix],
    f: &Word,
) -> Result<u64> {
    if barlift.len() != presentation.num_generators() {
        return Err(Error::Dimension(format!(
            "{} images for {} generators",
            barlift.len(),
            presentation.num_generators()
        )));
    }
    let lifts: Vec<UniMatrix> = barlift.iter().map(UniMatrix::mod_center).collect();
    for (k, r) in presentation.relators().iter().enumerate() {
        if !r.evaluate(&lifts)?.is_central() {
            return Err(Error::Precondition(format!(
                "relator {} fails in U/Z",
                k + 1
            )));
        }
    }
    let value = f.evaluate(&lifts)?;
    if !value.is_central() {
        return Err(Error::Precondition(format!("{f} does not vanish in U/Z")));
    }
    Ok(value.corner())
}

#[cfg(test)]
mod tests;
