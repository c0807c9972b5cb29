use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::symbols::res_index_with_root;
use crate::error::{Error, Result};
use crate::modular::{is_prime, least_primitive_root};

/// A Z/p-valued Dirichlet character, written as `Σ e_q χ_q` where `χ_q` is
/// the character of conductor q sending the least primitive root mod q to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterQ {
    p: u64,
    components: BTreeMap<u64, u64>,
    #[serde(skip)]
    roots: BTreeMap<u64, u64>,
}

impl CharacterQ {
    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, std::iter::empty())
    }

    /// Builds the character from `(q, e_q)` pairs. Repeated primes add up and
    /// zero components are dropped.
    pub fn new(p: u64, components: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::Domain(format!(
                "characters need an odd prime, got {p}"
            )));
        }
        let mut map: BTreeMap<u64, u64> = BTreeMap::new();
        for (q, e) in components {
            if !is_prime(q) || q % p != 1 {
                return Err(Error::Domain(format!(
                    "{q} is not a prime congruent to 1 mod {p}"
                )));
            }
            let slot = map.entry(q).or_insert(0);
            *slot = (*slot + e.rem_euclid(p as i64) as u64) % p;
        }
        map.retain(|_, e| *e != 0);
        let roots = map.keys().map(|&q| (q, least_primitive_root(q))).collect();
        Ok(Self {
            p,
            components: map,
            roots,
        })
    }

    /// Parses `p: 3` followed by `comp: q e` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p: Option<u64> = None;
        let mut comps = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: k + 1, msg };
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
            match key.trim() {
                "p" => {
                    let v = value
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| err(format!("bad prime `{}`", value.trim())))?;
                    p = Some(v);
                }
                "comp" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let [q, e] = parts[..] else {
                        return Err(err("expected `comp: q e`".into()));
                    };
                    let q = q
                        .parse::<u64>()
                        .map_err(|_| err(format!("bad prime `{q}`")))?;
                    let e = e
                        .parse::<i64>()
                        .map_err(|_| err(format!("bad exponent `{e}`")))?;
                    comps.push((q, e));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or(Error::Parse {
            line: 0,
            msg: "missing `p:` line".into(),
        })?;
        Self::new(p, comps)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn components(&self) -> &BTreeMap<u64, u64> {
        &self.components
    }

    pub fn component(&self, q: u64) -> u64 {
        self.components.get(&q).copied().unwrap_or(0)
    }

    /// Primes where the character is ramified.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.components.keys().copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    /// `χ(a)` for an integer coprime to the conductor.
    pub fn evaluate(&self, a: i64) -> Result<u64> {
        let mut total = 0;
        for (&q, &e) in &self.components {
            total = (total + e * res_index_with_root(a, q, self.p, self.roots[&q])?) % self.p;
        }
        Ok(total)
    }

    /// Value on a Frobenius at a prime ℓ outside the support.
    pub fn frobenius(&self, ell: u64) -> Result<u64> {
        if self.components.contains_key(&ell) {
            return Err(Error::Domain(format!("χ is ramified at {ell}")));
        }
        self.evaluate(ell as i64)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Domain(format!(
                "characters mod {} and mod {}",
                self.p, other.p
            )));
        }
        let all = self
            .components
            .iter()
            .chain(other.components.iter())
            .map(|(&q, &e)| (q, e as i64));
        Self::new(self.p, all)
    }

    pub fn scale(&self, lambda: i64) -> Self {
        Self::new(
            self.p,
            self.components
                .iter()
                .map(|(&q, &e)| (q, e as i64 * lambda)),
        )
        .expect("same components")
    }
}

impl fmt::Display for CharacterQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p: {}", self.p)?;
        for (q, e) in &self.components {
            writeln!(f, "comp: {q} {e}")?;
        }
        Ok(())
    }
}

/// Restriction of a character to the decomposition group at a tame prime:
/// `t = χ(τ_q)` on inertia and `s = χ(σ_q)` on Frobenius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalDatum {
    pub q: u64,
    pub t: u64,
    pub s: u64,
}

impl LocalDatum {
    pub fn new(q: u64, t: i64, s: i64, p: u64) -> Result<Self> {
        if !is_prime(q) || q == p {
            return Err(Error::Domain(format!(
                "{q} is not a tame prime for p = {p}"
            )));
        }
        let t = t.rem_euclid(p as i64) as u64;
        let s = s.rem_euclid(p as i64) as u64;
        if t != 0 && q % p != 1 {
            return Err(Error::Domain(format!(
                "ramified datum at {q}, but {q} is not 1 mod {p}"
            )));
        }
        Ok(Self { q, t, s })
    }

    pub fn is_zero(&self) -> bool {
        self.t == 0 && self.s == 0
    }
}

pub fn local_restriction(chi: &CharacterQ, q: u64) -> Result<LocalDatum> {
    let p = chi.p;
    if q == p {
        return Err(Error::Unsupported(format!(
            "{q} is the wild place; its local group is free"
        )));
    }
    if !is_prime(q) {
        return Err(Error::Domain(format!("{q} is not prime")));
    }
    let mut s = 0;
    for (&q2, &e) in &chi.components {
        if q2 != q {
            s = (s + e * res_index_with_root(q as i64, q2, p, chi.roots[&q2])?) % p;
        }
    }
    Ok(LocalDatum {
        q,
        t: chi.component(q),
        s,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacePairing {
    pub q: u64,
    pub local: (LocalDatum, LocalDatum),
    pub pairing: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupLedger {
    pub vanishes: bool,
    pub places: Vec<PlacePairing>,
}

impl CupLedger {
    /// Places where the local cup product is nonzero.
    pub fn obstructing_places(&self) -> Vec<u64> {
        self.places
            .iter()
            .filter(|pl| pl.pairing != 0)
            .map(|pl| pl.q)
            .collect()
    }
}

/// Vanishing of `χ ∪ χ'` in `H^2(Γ_Q, Z/p)`, tested place by place through the
/// tame pairing `t·s' − t'·s`. Only primes in either support can contribute.
pub fn global_cup_vanishes(chi: &CharacterQ, chi2: &CharacterQ) -> Result<CupLedger> {
    let p = chi.p;
    if chi2.p != p {
        return Err(Error::Domain(format!(
            "characters mod {} and mod {}",
            p, chi2.p
        )));
    }
    let mut places: Vec<u64> = chi.support().chain(chi2.support()).collect();
    places.sort_unstable();
    places.dedup();
    let mut ledger = Vec::with_capacity(places.len());
    for q in places {
        let a = local_restriction(chi, q)?;
        let b = local_restriction(chi2, q)?;
        let pairing = (a.t * b.s + p * p - b.t * a.s % p) % p;
        ledger.push(PlacePairing {
            q,
            local: (a, b),
            pairing,
        });
    }
    let vanishes = ledger.iter().all(|pl| pl.pairing == 0);
    Ok(CupLedger {
        vanishes,
        places: ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_examples() {
        let triv = CharacterQ::trivial(3).unwrap();
        assert_eq!(
            local_restriction(&triv, 7).unwrap(),
            LocalDatum { q: 7, t: 0, s: 0 }
        );
        let c7 = CharacterQ::new(3, [(7, 1)]).unwrap();
        let c13 = CharacterQ::new(3, [(13, 1)]).unwrap();
        assert_eq!(
            local_restriction(&c7, 13).unwrap(),
            LocalDatum { q: 13, t: 0, s: 0 }
        );
        assert_eq!(
            local_restriction(&c13, 7).unwrap(),
            LocalDatum { q: 7, t: 0, s: 2 }
        );
        assert_eq!(
            local_restriction(&c7, 7).unwrap(),
            LocalDatum { q: 7, t: 1, s: 0 }
        );
        assert!(matches!(
            local_restriction(&c7, 3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cup_examples() {
        let triv = CharacterQ::trivial(3).unwrap();
        let c7 = CharacterQ::new(3, [(7, 1)]).unwrap();
        let c13 = CharacterQ::new(3, [(13, 1)]).unwrap();
        assert!(global_cup_vanishes(&c7, &triv).unwrap().vanishes);
        assert!(global_cup_vanishes(&c7, &c7).unwrap().vanishes);
        let l = global_cup_vanishes(&c7, &c13).unwrap();
        assert!(!l.vanishes);
        assert_eq!(l.obstructing_places(), vec![7]);
        assert_eq!(l.places[0].pairing, 2);
        assert_eq!(l.places[1].pairing, 0);
    }

    #[test]
    fn character_validation_and_parse() {
        assert!(CharacterQ::new(3, [(5, 1)]).is_err());
        assert!(CharacterQ::new(2, [(5, 1)]).is_err());
        let c = CharacterQ::new(3, [(7, 1), (7, 2), (13, 4)]).unwrap();
        assert_eq!(c.components().len(), 1);
        assert_eq!(c.component(13), 1);
        let parsed = CharacterQ::parse("# test\np: 3\ncomp: 13 1\n").unwrap();
        assert_eq!(parsed, c);
        assert_eq!(CharacterQ::parse(&c.to_string()).unwrap(), c);
        assert!(matches!(
            CharacterQ::parse("p: 3\ncomp: 13\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            CharacterQ::parse("comp: 13 1\n"),
            Err(Error::Parse { line: 0, .. })
        ));
        assert!(LocalDatum::new(5, 1, 0, 3).is_err());
        assert!(LocalDatum::new(5, 0, 1, 3).is_ok());
    }

    #[test]
    fn evaluate_is_a_homomorphism() {
        let c = CharacterQ::new(5, [(11, 2), (31, 3)]).unwrap();
        for a in [2i64, 3, 7, 13, -1, -6] {
            for b in [2i64, 5, 17, -3] {
                let lhs = c.evaluate(a * b).unwrap();
                assert_eq!(lhs, (c.evaluate(a).unwrap() + c.evaluate(b).unwrap()) % 5);
            }
        }
    }
}
