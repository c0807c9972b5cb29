//! Local plans: images of the tame generators σ (Frobenius) and τ (inertia)
//! in U_{n+1}, subject to σ τ σ⁻¹ = τ^{N(q)}.

use serde::Serialize;

use super::UniMatrix;
use crate::error::{Error, Result};
use crate::modular::{is_prime, valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    /// Trivial Frobenius image, inertia of order dividing q - 1.
    Sr,
    Trivial,
    Abelian,
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalPlan {
    pub sigma_image: UniMatrix,
    pub tau_image: UniMatrix,
    pub q: u64,
    pub kind: PlanKind,
}

impl LocalPlan {
    /// Checks the tame relation and builds the plan.
    pub fn new(
        sigma_image: UniMatrix,
        tau_image: UniMatrix,
        q: u64,
        kind: PlanKind,
    ) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Domain(format!("{q} is not prime")));
        }
        if q == sigma_image.p() {
            return Err(Error::Unsupported(format!("q = {q} is the wild place")));
        }
        let lhs = sigma_image.compose(&tau_image)?.mul(&sigma_image.inverse());
        let rhs = tau_image.pow_unsigned(q);
        if lhs != rhs {
            return Err(Error::PlanInvalid(format!(
                "tame relation fails at q = {q}"
            )));
        }
        Ok(Self {
            sigma_image,
            tau_image,
            q,
            kind,
        })
    }

    pub fn satisfies_tame_relation(&self) -> bool {
        self.sigma_image
            .mul(&self.tau_image)
            .mul(&self.sigma_image.inverse())
            == self.tau_image.pow_unsigned(self.q)
    }
}

fn check_inertia_order(y: &UniMatrix, q: u64) -> Result<()> {
    let ord = y.order();
    if !(q - 1).is_multiple_of(ord) {
        let needed = valuation(ord, y.p());
        return Err(Error::PlanInvalid(format!(
            "inertia image has order {ord}; needs v_{}(q - 1) >= {needed}, but v_{}({}) = {}",
            y.p(),
            y.p(),
            q - 1,
            valuation(q - 1, y.p())
        )));
    }
    Ok(())
}

/// Trivial Frobenius, inertia ↦ `y`.
pub fn sr_plan(y: &UniMatrix, q: u64) -> Result<LocalPlan> {
    if !is_prime(q) {
        return Err(Error::Domain(format!("{q} is not prime")));
    }
    check_inertia_order(y, q)?;
    let kind = if y.is_identity() {
        PlanKind::Trivial
    } else {
        PlanKind::Sr
    };
    let sigma = UniMatrix::identity(y.dim(), y.p(), y.r())?;
    LocalPlan::new(sigma, y.clone(), q, kind)
}

/// Frobenius ↦ `x`, inertia ↦ `y` for a commuting pair.
pub fn abelian_plan(x: &UniMatrix, y: &UniMatrix, q: u64) -> Result<LocalPlan> {
    if !x.commutes_with(y)? {
        return Err(Error::PlanInvalid("xy != yx".into()));
    }
    if !is_prime(q) {
        return Err(Error::Domain(format!("{q} is not prime")));
    }
    check_inertia_order(y, q)?;
    let kind = if x.is_identity() && y.is_identity() {
        PlanKind::Trivial
    } else {
        PlanKind::Abelian
    };
    LocalPlan::new(x.clone(), y.clone(), q, kind)
}

/// A run of consecutive near-diagonal positions `start ..= start + lambdas.len()`
/// (1-based) on which the local characters are proportional:
/// `χ_{i+1} = λ_i χ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub start: usize,
    pub lambdas: Vec<u64>,
}

impl BlockSpec {
    fn end(&self) -> usize {
        self.start + self.lambdas.len()
    }
}

/// Block-diagonal plan `σ ↦ I + chi_sigma·Λ`, `τ ↦ I + chi_tau·Λ`, where Λ
/// carries `1, λ_1, λ_1λ_2, …` along each block's near-diagonal.
///
/// Positions outside every block get the trivial lift. Blocks must be
/// disjoint and separated by at least one position so that their Λ's
/// multiply to zero.
pub fn block_plan(
    n: usize,
    p: u64,
    chi_sigma: u64,
    chi_tau: u64,
    blocks: &[BlockSpec],
    q: u64,
) -> Result<LocalPlan> {
    if p <= n as u64 {
        return Err(Error::Unsupported(format!(
            "block plans need p > n, got p = {p}, n = {n}"
        )));
    }
    if !is_prime(q) {
        return Err(Error::Domain(format!("{q} is not prime")));
    }
    if q % p != 1 {
        return Err(Error::PlanInvalid(format!("q = {q} is not 1 mod {p}")));
    }
    let mut sorted: Vec<&BlockSpec> = blocks.iter().collect();
    sorted.sort_by_key(|b| b.start);
    for b in &sorted {
        if b.start < 1 || b.end() > n {
            return Err(Error::PlanInvalid(format!(
                "block at {} exceeds 1..={n}",
                b.start
            )));
        }
    }
    for w in sorted.windows(2) {
        if w[1].start <= w[0].end() + 1 {
            return Err(Error::PlanInvalid(
                "blocks must be separated by a zero position".into(),
            ));
        }
    }
    let mut lambda = vec![0u64; n];
    for b in &sorted {
        let mut acc = 1u64;
        lambda[b.start - 1] = 1;
        for (k, &l) in b.lambdas.iter().enumerate() {
            acc = acc * (l % p) % p;
            lambda[b.start + k] = acc;
        }
    }
    let image = |c: u64| -> Result<UniMatrix> {
        let values: Vec<i64> = lambda.iter().map(|&l| (l * (c % p) % p) as i64).collect();
        UniMatrix::from_near_diagonal(p, 1, &values)
    };
    let sigma = image(chi_sigma)?;
    let tau = image(chi_tau)?;
    let kind = if sigma.is_identity() && tau.is_identity() {
        PlanKind::Trivial
    } else {
        PlanKind::Block
    };
    LocalPlan::new(sigma, tau, q, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u4(entries: &[(usize, usize, i64)]) -> UniMatrix {
        UniMatrix::from_entries(4, 3, 1, entries.iter().copied()).unwrap()
    }

    #[test]
    fn sr_plan_order_condition() {
        let j = UniMatrix::regular(4, 3, 1).unwrap();
        assert!(sr_plan(&j, 19).is_ok());
        let err = sr_plan(&j, 7).unwrap_err();
        assert!(
            matches!(err, Error::PlanInvalid(ref m) if m.contains(">= 2")),
            "{err}"
        );
        let id = UniMatrix::identity(4, 3, 1).unwrap();
        assert_eq!(sr_plan(&id, 5).unwrap().kind, PlanKind::Trivial);
    }

    #[test]
    fn abelian_plan_commutation() {
        let x = u4(&[(1, 2, 1)]);
        let y = u4(&[(1, 3, 1)]);
        let plan = abelian_plan(&x, &y, 7).unwrap();
        assert!(plan.satisfies_tame_relation());
        let y2 = u4(&[(2, 3, 1)]);
        assert!(matches!(
            abelian_plan(&x, &y2, 7),
            Err(Error::PlanInvalid(_))
        ));
        let id = u4(&[]);
        assert_eq!(abelian_plan(&id, &id, 7).unwrap().kind, PlanKind::Trivial);
    }

    #[test]
    fn block_plan_matches_displayed_matrix() {
        // n = 3, p = 5, one block with λ = (2, 3), χ(τ) = 1
        let b = BlockSpec {
            start: 1,
            lambdas: vec![2, 3],
        };
        let plan = block_plan(3, 5, 4, 1, &[b], 11).unwrap();
        assert_eq!(plan.tau_image.near_diagonal(), vec![1, 2, 1]);
        assert_eq!(plan.sigma_image.near_diagonal(), vec![4, 3, 4]);
        assert_eq!(plan.tau_image.order(), 5);
    }

    #[test]
    fn block_plan_rejects_small_p_and_bad_q() {
        let b = BlockSpec {
            start: 1,
            lambdas: vec![1, 1],
        };
        assert!(matches!(
            block_plan(3, 3, 1, 1, std::slice::from_ref(&b), 7),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            block_plan(3, 5, 1, 1, &[b], 7),
            Err(Error::PlanInvalid(_))
        ));
    }

    #[test]
    fn zero_characters_give_identity() {
        let b = BlockSpec {
            start: 1,
            lambdas: vec![1],
        };
        let plan = block_plan(4, 5, 0, 0, &[b], 11).unwrap();
        assert!(plan.sigma_image.is_identity() && plan.tau_image.is_identity());
        assert_eq!(plan.kind, PlanKind::Trivial);
    }

    #[test]
    fn adjacent_blocks_rejected() {
        let a = BlockSpec {
            start: 1,
            lambdas: vec![1],
        };
        let b = BlockSpec {
            start: 3,
            lambdas: vec![1],
        };
        assert!(block_plan(4, 5, 1, 1, &[a.clone(), b], 11).is_err());
        let c = BlockSpec {
            start: 4,
            lambdas: vec![],
        };
        assert!(block_plan(4, 5, 1, 2, &[a, c], 11).is_ok());
    }
}
