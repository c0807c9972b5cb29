use serde::Serialize;

use super::character::{local_restriction, CharacterQ, LocalDatum};
use super::symbols::{is_pth_power, res_index};
use crate::error::{Error, Result};
use crate::modular::is_prime;

/// Outcome of an auxiliary-prime scan, with the data needed to compare the
/// size of the answer against the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxSearch {
    pub prime: Option<u64>,
    pub bound: u64,
    /// Primes with the right `v_p(ℓ - 1)` that were tested against the
    /// splitting conditions.
    pub candidates_examined: u64,
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Unsupported(format!(
            "prime search needs an odd prime, got {p}"
        )));
    }
    Ok(())
}

/// Scans `ℓ = 1 + k p^m` upward for primes with `v_p(ℓ - 1) = m` exactly,
/// calling `accept` on each until it returns a value.
fn scan<T>(
    p: u64,
    m: u32,
    bound: u64,
    mut accept: impl FnMut(u64) -> Option<T>,
) -> Result<(Option<(u64, T)>, u64)> {
    if m < 1 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let step = p
        .checked_pow(m)
        .ok_or_else(|| Error::Domain(format!("{p}^{m} overflows")))?;
    let mut examined = 0;
    let mut k = 1u64;
    while let Some(ell) = k.checked_mul(step).and_then(|x| x.checked_add(1)) {
        if ell > bound {
            break;
        }
        if !k.is_multiple_of(p) && is_prime(ell) {
            examined += 1;
            if let Some(v) = accept(ell) {
                return Ok((Some((ell, v)), examined));
            }
        }
        k += 1;
    }
    Ok((None, examined))
}

/// Least prime `ℓ ≤ bound` with `v_p(ℓ - 1) = m`, every `a` in
/// `split_kummer` a p-th power mod ℓ, and every character in `split_chars`
/// unramified with trivial Frobenius at ℓ.
pub fn find_aux_prime(
    p: u64,
    m: u32,
    split_kummer: &[i64],
    split_chars: &[CharacterQ],
    bound: u64,
) -> Result<AuxSearch> {
    check_odd_prime(p)?;
    if let Some(chi) = split_chars.iter().find(|c| c.p() != p) {
        return Err(Error::Domain(format!(
            "character mod {} in a search mod {p}",
            chi.p()
        )));
    }
    let (found, examined) = scan(p, m, bound, |ell| {
        let ok = split_kummer.iter().all(|&a| is_pth_power(a, ell, p))
            && split_chars
                .iter()
                .all(|c| c.component(ell) == 0 && c.frobenius(ell) == Ok(0));
        ok.then_some(())
    })?;
    Ok(AuxSearch {
        prime: found.map(|(ell, ())| ell),
        bound,
        candidates_examined: examined,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxPrime {
    pub prime: u64,
    pub exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCharacter {
    pub chi: CharacterQ,
    pub aux: Option<AuxPrime>,
    pub candidates_examined: u64,
}

/// A character whose restriction at each prescribed prime is the given
/// `(t, s)`, ramified at one auxiliary prime ℓ with `v_p(ℓ - 1) = m`.
///
/// When every datum is zero the trivial character is returned and no
/// auxiliary prime is used.
pub fn character_with_local_data(
    prescribed: &[LocalDatum],
    p: u64,
    m: u32,
    bound: u64,
) -> Result<LocalCharacter> {
    if prescribed.iter().all(LocalDatum::is_zero) {
        check_data(prescribed, p)?;
        return Ok(LocalCharacter {
            chi: CharacterQ::trivial(p)?,
            aux: None,
            candidates_examined: 0,
        });
    }
    character_with_local_data_ramified(prescribed, p, m, bound)
}

/// As [`character_with_local_data`], but always ramified at an auxiliary
/// prime, including when every datum is zero.
pub fn character_with_local_data_ramified(
    prescribed: &[LocalDatum],
    p: u64,
    m: u32,
    bound: u64,
) -> Result<LocalCharacter> {
    check_data(prescribed, p)?;
    let base = CharacterQ::new(
        p,
        prescribed
            .iter()
            .filter(|d| d.t != 0)
            .map(|d| (d.q, d.t as i64)),
    )
    .map_err(|e| Error::Domain(format!("prescribed inertia: {e}")))?;
    // Frobenius values the auxiliary component still has to supply.
    let deficits: Vec<(u64, u64)> = prescribed
        .iter()
        .map(|d| local_restriction(&base, d.q).map(|have| (d.q, (d.s + p - have.s) % p)))
        .collect::<Result<_>>()?;
    let (found, examined) = scan(p, m, bound, |ell| {
        if prescribed.iter().any(|d| d.q == ell) {
            return None;
        }
        let idx: Vec<u64> = deficits
            .iter()
            .map(|&(q, _)| res_index(q as i64, ell, p).expect("ell is 1 mod p"))
            .collect();
        (1..p).find(|&e| {
            deficits
                .iter()
                .zip(&idx)
                .all(|(&(_, want), &k)| e * k % p == want)
        })
    })?;
    let Some((ell, e)) = found else {
        return Err(Error::NotFound {
            bound,
            detail: format!(
                "no prime l with v_{p}(l - 1) = {m} meets the Frobenius conditions ({examined} candidates examined)"
            ),
        });
    };
    let chi = base.add(&CharacterQ::new(p, [(ell, e as i64)])?)?;
    Ok(LocalCharacter {
        chi,
        aux: Some(AuxPrime {
            prime: ell,
            exponent: e,
        }),
        candidates_examined: examined,
    })
}

fn check_data(prescribed: &[LocalDatum], p: u64) -> Result<()> {
    check_odd_prime(p)?;
    let mut qs: Vec<u64> = prescribed.iter().map(|d| d.q).collect();
    qs.sort_unstable();
    qs.dedup();
    if qs.len() != prescribed.len() {
        return Err(Error::Domain("a prime is prescribed twice".into()));
    }
    for d in prescribed {
        LocalDatum::new(d.q, d.t as i64, d.s as i64, p)?;
        if d.t >= p || d.s >= p {
            return Err(Error::Domain(format!(
                "datum at {} is not reduced mod {p}",
                d.q
            )));
        }
    }
    Ok(())
}

/// Necessary condition for a character ramified at q to lift to a
/// near-diagonal `Z/p^r` representation: `q ≡ 1 (mod p^r)`.
pub fn pr_lift_required(q: u64, p: u64, r: u32) -> Result<bool> {
    if q == p {
        return Err(Error::Domain(format!("{q} is the wild place")));
    }
    let m = p
        .checked_pow(r)
        .ok_or_else(|| Error::Domain(format!("{p}^{r} overflows")))?;
    Ok(q % m == 1 % m)
}
