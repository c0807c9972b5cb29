use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unipotent::UniMatrix;

/// A word in the free group on generators `x_1, x_2, …`, stored as a
/// normalized sequence of syllables `(generator, exponent)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a word from raw syllables; merges neighbours and drops zero exponents.
    pub fn new(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut w = Self::default();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn generator(g: usize) -> Self {
        Self::new([(g, 1)])
    }

    pub fn power_of_generator(g: usize, e: i64) -> Self {
        Self::new([(g, e)])
    }

    fn push(&mut self, g: usize, e: i64) {
        assert!(g >= 1, "generators are 1-based");
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, e));
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of |exponent| over syllables.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|&(g, _)| g).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.letters.iter().filter(|l| l.0 == g).map(|l| l.1).sum()
    }

    /// Substitutes `images[g - 1]` for `x_g` and multiplies out.
    pub fn evaluate(&self, images: &[UniMatrix]) -> Result<UniMatrix> {
        if self.max_generator() > images.len() {
            return Err(Error::Dimension(format!(
                "word uses x{} but only {} images were given",
                self.max_generator(),
                images.len()
            )));
        }
        let Some(first) = images.first() else {
            return Err(Error::Dimension("no generator images".into()));
        };
        for m in images {
            if m.dim() != first.dim() || m.modulus() != first.modulus() {
                return Err(Error::Dimension(
                    "generator images of different shapes".into(),
                ));
            }
        }
        Ok(self.evaluate_unchecked(images, &first.identity_like()))
    }

    pub(crate) fn evaluate_unchecked(
        &self,
        images: &[UniMatrix],
        identity: &UniMatrix,
    ) -> UniMatrix {
        let mut acc = identity.clone();
        for &(g, e) in &self.letters {
            acc = acc.mul(&images[g - 1].pow(e));
        }
        acc
    }

    /// Parses whitespace-separated tokens `x<i>` or `x<i>^<e>`.
    pub fn parse(text: &str) -> std::result::Result<Word, String> {
        let mut w = Word::identity();
        for tok in text.split_whitespace() {
            let body = tok
                .strip_prefix('x')
                .ok_or_else(|| format!("token `{tok}` must start with x"))?;
            let (gen, exp) = match body.split_once('^') {
                Some((g, e)) => (
                    g,
                    e.parse::<i64>()
                        .map_err(|_| format!("bad exponent in `{tok}`"))?,
                ),
                None => (body, 1),
            };
            let g: usize = gen
                .parse()
                .map_err(|_| format!("bad generator index in `{tok}`"))?;
            if g == 0 {
                return Err(format!("generator index in `{tok}` must be at least 1"));
            }
            if exp == 0 {
                return Err(format!("zero exponent in `{tok}`"));
            }
            w.push(g, exp);
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    format!("x{g}")
                } else {
                    format!("x{g}^{e}")
                }
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
