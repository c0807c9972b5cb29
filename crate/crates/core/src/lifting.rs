//! Deciding cup, defined and vanishing conditions for a character tuple by
//! lifting it through the central series of U_{n+1}(Z/p^r).
//!
//! A lifting state at weight `w` assigns to each generator an element of
//! `U / G_{w+1}` such that every relator vanishes there. To pass to weight
//! `w + 1` any entrywise preimage is taken and the relators are evaluated;
//! they land in the central layer `G_{w+1} / G_{w+2}`. Changing the preimage
//! by a layer element multiplies each relator value by its exponent-sum
//! combination of the change, which is zero because exponent sums vanish
//! mod p. So a state either has no children at all, or its children are all
//! `state · χ` with `χ ∈ Hom(G, layer)`: a torsor. The search is a depth-first
//! walk over these torsors, children in lexicographic order, so the first
//! witness found is canonical.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{increment, kernel_basis, span_elements};
use crate::presentation::{Presentation, Word};
use crate::unipotent::{UniMatrix, WeightFiltration};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// The characters `(χ_1, …, χ_n)` as a `g x n` table over F_p:
/// `values[generator][j] = χ_{j+1}(x_{generator+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CharTuple {
    p: u64,
    values: Vec<Vec<u64>>,
}

impl CharTuple {
    pub fn new(presentation: &Presentation, values: Vec<Vec<u64>>) -> Result<Self> {
        let p = presentation.p();
        let g = presentation.num_generators();
        if values.len() != g {
            return Err(Error::Dimension(format!(
                "{} rows for {g} generators",
                values.len()
            )));
        }
        let n = values.first().map_or(0, Vec::len);
        if n < 2 {
            return Err(Error::Domain("a character tuple needs n >= 2".into()));
        }
        if values.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("ragged character table".into()));
        }
        let values: Vec<Vec<u64>> = values
            .into_iter()
            .map(|row| row.into_iter().map(|v| v % p).collect())
            .collect();
        let sums = presentation.exponent_sum_matrix();
        for j in 0..n {
            for (k, row) in sums.iter().enumerate() {
                let s: u64 = row.iter().zip(&values).map(|(e, v)| e * v[j]).sum::<u64>() % p;
                if s != 0 {
                    return Err(Error::Domain(format!(
                        "character {} does not kill relator {}",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { p, values })
    }

    /// The same character repeated n times.
    pub fn repeated(presentation: &Presentation, chi: &[u64], n: usize) -> Result<Self> {
        Self::new(presentation, chi.iter().map(|&v| vec![v; n]).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.values[0].len()
    }

    pub fn num_generators(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    /// Values of χ_j (1-based) on the generators.
    pub fn column(&self, j: usize) -> Vec<u64> {
        self.values.iter().map(|row| row[j - 1]).collect()
    }

    /// The sub-tuple `(χ_i, χ_{i+1})`.
    fn pair(&self, i: usize) -> Self {
        Self {
            p: self.p,
            values: self
                .values
                .iter()
                .map(|row| vec![row[i - 1], row[i]])
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|&v| v == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// U_{n+1}: the Massey product vanishes.
    Full,
    /// U_{n+1} / Z_{n+1}: the Massey product is defined.
    Quotient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftStatus {
    Lifted,
    Obstructed,
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_branching: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.max_branching = self.max_branching.max(other.max_branching);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftResult {
    pub status: LiftStatus,
    /// Generator images of the first lift found.
    pub witness: Option<Vec<UniMatrix>>,
    pub stats: SearchStats,
}

impl LiftResult {
    pub fn ok(&self) -> Option<bool> {
        match self.status {
            LiftStatus::Lifted => Some(true),
            LiftStatus::Obstructed => Some(false),
            LiftStatus::BudgetExceeded => None,
        }
    }
}

pub fn evaluate_word(images: &[UniMatrix], w: &Word) -> Result<UniMatrix> {
    w.evaluate(images)
}

/// F_p-valued characters of the presented group, in lexicographic order.
pub fn character_group(presentation: &Presentation) -> Vec<Vec<u64>> {
    let g = presentation.num_generators();
    let basis = kernel_basis(&presentation.exponent_sum_matrix(), g, presentation.p());
    let mut all = span_elements(&basis, g, presentation.p());
    all.sort();
    all
}

struct Search<'a> {
    presentation: &'a Presentation,
    filtration: WeightFiltration,
    /// Hom(G, Z/p), each as a vector of generator values.
    homs: Vec<Vec<u64>>,
    identity: UniMatrix,
    budget: u64,
    stats: SearchStats,
}

enum Step {
    Found(Vec<UniMatrix>),
    Dead,
    OutOfBudget,
}

impl Search<'_> {
    fn relators_vanish(&self, images: &[UniMatrix], weight: usize) -> bool {
        self.presentation.relators().iter().all(|r| {
            let mut v = r.evaluate_unchecked(images, &self.identity);
            self.filtration.truncate(&mut v, weight);
            v.is_identity()
        })
    }

    fn dfs(&mut self, images: Vec<UniMatrix>, weight: usize) -> Step {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Step::OutOfBudget;
        }
        let last = self.filtration.final_weight();
        if weight == last {
            return Step::Found(images);
        }
        let next = weight + 1;
        if !self.relators_vanish(&images, next) {
            return Step::Dead;
        }
        let layer = self.filtration.layer(next);
        if layer.dim() == 0 || next == last {
            // every child is a lift; the zero adjustment is the least one
            self.stats.max_branching = self.stats.max_branching.max(1);
            return self.dfs(images, next);
        }
        let branching = (self.homs.len() as u64).saturating_pow(layer.dim() as u32);
        self.stats.max_branching = self.stats.max_branching.max(branching);
        // one Hom(G, Z/p) element per layer coordinate
        let mut choice = vec![0u64; layer.dim()];
        loop {
            let mut child = images.clone();
            for (gen, image) in child.iter_mut().enumerate() {
                let coords: Vec<u64> = choice.iter().map(|&c| self.homs[c as usize][gen]).collect();
                self.filtration.add_layer(image, &layer, &coords);
            }
            match self.dfs(child, next) {
                Step::Dead => {}
                found_or_budget => return found_or_budget,
            }
            if !increment(&mut choice, self.homs.len() as u64) {
                return Step::Dead;
            }
        }
    }
}

/// Searches for a lift of `theta` to `U_{n+1}(Z/p^r)` (or its quotient by the
/// center) that is a homomorphism on the presented group.
pub fn lift_tower(
    presentation: &Presentation,
    theta: &CharTuple,
    target: Target,
    r: u32,
    budget: u64,
) -> Result<LiftResult> {
    if theta.num_generators() != presentation.num_generators() || theta.p() != presentation.p() {
        return Err(Error::Dimension(
            "character tuple does not match the presentation".into(),
        ));
    }
    let p = presentation.p();
    let n = theta.n();
    let dim = n + 1;
    let identity = UniMatrix::identity(dim, p, r)?;
    let filtration = WeightFiltration::new(dim, p, r, target == Target::Quotient);
    let root: Vec<UniMatrix> = theta
        .values()
        .iter()
        .map(|row| {
            let nd: Vec<i64> = row.iter().map(|&v| v as i64).collect();
            UniMatrix::from_near_diagonal(p, r, &nd)
        })
        .collect::<Result<_>>()?;
    let mut search = Search {
        presentation,
        filtration,
        homs: character_group(presentation),
        identity,
        budget,
        stats: SearchStats::default(),
    };
    let step = search.dfs(root, 1);
    let stats = search.stats;
    Ok(match step {
        Step::Found(witness) => LiftResult {
            status: LiftStatus::Lifted,
            witness: Some(witness),
            stats,
        },
        Step::Dead => LiftResult {
            status: LiftStatus::Obstructed,
            witness: None,
            stats,
        },
        Step::OutOfBudget => LiftResult {
            status: LiftStatus::BudgetExceeded,
            witness: None,
            stats,
        },
    })
}

fn pair_lifts(
    presentation: &Presentation,
    pair: &CharTuple,
    budget: u64,
) -> Result<(bool, SearchStats)> {
    let res = lift_tower(presentation, pair, Target::Full, 1, budget)?;
    match res.ok() {
        Some(b) => Ok((b, res.stats)),
        None => Err(Error::BudgetExceeded(res.stats.nodes)),
    }
}

/// For each adjacent pair `(χ_i, χ_{i+1})`: whether it lifts to the
/// Heisenberg group U_3(F_p), i.e. whether `χ_i ∪ χ_{i+1} = 0`.
pub fn cup_condition(presentation: &Presentation, theta: &CharTuple) -> Result<Vec<bool>> {
    (1..theta.n())
        .map(|i| pair_lifts(presentation, &theta.pair(i), DEFAULT_NODE_BUDGET).map(|(b, _)| b))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub ok: Option<bool>,
    pub status: LiftStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<UniMatrix>>,
}

impl From<LiftResult> for Decision {
    fn from(r: LiftResult) -> Self {
        Decision {
            ok: r.ok(),
            status: r.status,
            witness: r.witness,
        }
    }
}

/// The (C_n, B_n, A_n) membership of one character tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub cup_ok: Vec<bool>,
    pub defined: Decision,
    pub vanishing: Decision,
    pub stats: SearchStats,
}

impl Verdict {
    pub fn all_cups_vanish(&self) -> bool {
        self.cup_ok.iter().all(|&b| b)
    }
}

/// Decides cup conditions, definedness and vanishing, and checks
/// `vanishing ⇒ defined ⇒ cups` (the second implication for n ≥ 3; for n = 3
/// definedness and the cup conditions must agree).
pub fn decide(
    presentation: &Presentation,
    theta: &CharTuple,
    r: u32,
    budget: u64,
) -> Result<Verdict> {
    let mut stats = SearchStats::default();
    let mut cup_ok = Vec::with_capacity(theta.n() - 1);
    for i in 1..theta.n() {
        let (b, s) = pair_lifts(presentation, &theta.pair(i), budget)?;
        stats.absorb(s);
        cup_ok.push(b);
    }
    let defined = lift_tower(presentation, theta, Target::Quotient, r, budget)?;
    let vanishing = lift_tower(presentation, theta, Target::Full, r, budget)?;
    stats.absorb(defined.stats);
    stats.absorb(vanishing.stats);
    let verdict = Verdict {
        cup_ok,
        defined: defined.into(),
        vanishing: vanishing.into(),
        stats,
    };
    check_inclusions(&verdict, theta.n());
    Ok(verdict)
}

fn check_inclusions(v: &Verdict, n: usize) {
    if v.vanishing.ok == Some(true) {
        assert_ne!(
            v.defined.ok,
            Some(false),
            "vanishing Massey product reported as undefined"
        );
    }
    if n >= 3 && v.defined.ok == Some(true) {
        assert!(
            v.all_cups_vanish(),
            "defined Massey product with a nonzero cup product"
        );
    }
    if n == 3 {
        if let Some(defined) = v.defined.ok {
            assert_eq!(
                defined,
                v.all_cups_vanish(),
                "triple Massey definedness disagrees with cup conditions"
            );
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MasseyCheck {
    Holds,
    Fails { counterexample: CharTuple },
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasseyReport {
    pub n: usize,
    pub r: u32,
    #[serde(flatten)]
    pub result: MasseyCheck,
    /// Tuples with all cup products zero that were lifted.
    pub tuples_checked: u64,
    pub stats: SearchStats,
}

impl MasseyReport {
    pub fn holds(&self) -> Option<bool> {
        match self.result {
            MasseyCheck::Holds => Some(true),
            MasseyCheck::Fails { .. } => Some(false),
            MasseyCheck::BudgetExceeded => None,
        }
    }
}

/// Checks the strong n-fold Massey property: every tuple whose adjacent cup
/// products vanish must lift to U_{n+1}(Z/p^r). Tuples are enumerated in
/// lexicographic order and the first failure is reported.
pub fn strong_massey_check(
    presentation: &Presentation,
    n: usize,
    r: u32,
    budget: u64,
) -> Result<MasseyReport> {
    if n < 2 {
        return Err(Error::Domain("n must be at least 2".into()));
    }
    let chars = character_group(presentation);
    let g = presentation.num_generators();
    let mut stats = SearchStats::default();
    let mut cup_cache: HashMap<(usize, usize), bool> = HashMap::new();
    let mut checked = 0u64;
    let mut pick = vec![0u64; n];
    let report = |result, checked, stats| MasseyReport {
        n,
        r,
        result,
        tuples_checked: checked,
        stats,
    };
    loop {
        let values: Vec<Vec<u64>> = (0..g)
            .map(|gen| pick.iter().map(|&c| chars[c as usize][gen]).collect())
            .collect();
        let theta = CharTuple::new(presentation, values)?;
        let mut cups = true;
        for i in 0..n - 1 {
            let key = (pick[i] as usize, pick[i + 1] as usize);
            let ok = match cup_cache.get(&key) {
                Some(&b) => b,
                None => {
                    let remaining = budget.saturating_sub(stats.nodes);
                    let (b, s) = match pair_lifts(presentation, &theta.pair(i + 1), remaining) {
                        Ok(x) => x,
                        Err(Error::BudgetExceeded(_)) => {
                            return Ok(report(MasseyCheck::BudgetExceeded, checked, stats))
                        }
                        Err(e) => return Err(e),
                    };
                    stats.absorb(s);
                    cup_cache.insert(key, b);
                    b
                }
            };
            if !ok {
                cups = false;
                break;
            }
        }
        if cups {
            checked += 1;
            let remaining = budget.saturating_sub(stats.nodes);
            let res = lift_tower(presentation, &theta, Target::Full, r, remaining)?;
            stats.absorb(res.stats);
            match res.status {
                LiftStatus::Lifted => {}
                LiftStatus::Obstructed => {
                    return Ok(report(
                        MasseyCheck::Fails {
                            counterexample: theta,
                        },
                        checked,
                        stats,
                    ))
                }
                LiftStatus::BudgetExceeded => {
                    return Ok(report(MasseyCheck::BudgetExceeded, checked, stats))
                }
            }
        }
        if !increment(&mut pick, chars.len() as u64) {
            return Ok(report(MasseyCheck::Holds, checked, stats));
        }
    }
}

/// Re-validates a witness: relators vanish in the target and the near-diagonal
/// reduces to `theta` mod p.
pub fn validate_witness(
    presentation: &Presentation,
    theta: &CharTuple,
    target: Target,
    witness: &[UniMatrix],
) -> bool {
    if witness.len() != presentation.num_generators() {
        return false;
    }
    let p = presentation.p();
    let near_ok = witness.iter().zip(theta.values()).all(|(m, row)| {
        m.near_diagonal()
            .iter()
            .map(|v| v % p)
            .eq(row.iter().copied())
    });
    let relators_ok = presentation
        .relators()
        .iter()
        .all(|rel| match rel.evaluate(witness) {
            Ok(v) => match target {
                Target::Full => v.is_identity(),
                Target::Quotient => v.is_central(),
            },
            Err(_) => false,
        });
    near_ok && relators_ok
}

/// Exhaustive enumeration of homomorphisms, for cross-checking the solver on
/// small groups. Independent of the filtration machinery.
pub mod brute_force {
    use super::*;

    /// Every element of U_{dim}(Z/p^r), with the corner forced to zero in
    /// quotient mode.
    pub fn all_elements(dim: usize, p: u64, r: u32, target: Target) -> Vec<UniMatrix> {
        let id = UniMatrix::identity(dim, p, r).expect("valid shape");
        let slots = dim * (dim - 1) / 2;
        let mut digits = vec![0u64; slots];
        let mut out = Vec::new();
        loop {
            let mut m = id.clone();
            m.entries_raw_mut().copy_from_slice(&digits);
            if target == Target::Full || m.corner() == 0 {
                out.push(m);
            }
            if !increment(&mut digits, id.modulus()) {
                return out;
            }
        }
    }

    /// All generator assignments that satisfy the relators in the target and
    /// whose near-diagonals reduce to `theta` (when given).
    pub fn homomorphisms(
        presentation: &Presentation,
        n: usize,
        r: u32,
        target: Target,
        theta: Option<&CharTuple>,
    ) -> Vec<Vec<UniMatrix>> {
        let p = presentation.p();
        let elements = all_elements(n + 1, p, r, target);
        let g = presentation.num_generators();
        let candidates: Vec<Vec<&UniMatrix>> = (0..g)
            .map(|gen| {
                elements
                    .iter()
                    .filter(|m| {
                        theta.is_none_or(|t| {
                            m.near_diagonal()
                                .iter()
                                .map(|v| v % p)
                                .eq(t.values()[gen].iter().copied())
                        })
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0u64; g];
        if candidates.iter().any(Vec::is_empty) {
            return out;
        }
        loop {
            let images: Vec<UniMatrix> = pick
                .iter()
                .enumerate()
                .map(|(gen, &k)| candidates[gen][k as usize].clone())
                .collect();
            let ok = presentation.relators().iter().all(|rel| {
                let v = rel.evaluate(&images).expect("shapes agree");
                match target {
                    Target::Full => v.is_identity(),
                    Target::Quotient => v.is_central(),
                }
            });
            if ok {
                out.push(images);
            }
            // odometer with per-generator radix
            let mut k = g;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                pick[k] += 1;
                if (pick[k] as usize) < candidates[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(e: i64, p: u64) -> Presentation {
        Presentation::cyclic(e, p).unwrap()
    }

    #[test]
    fn evaluate_word_examples() {
        let a = UniMatrix::elementary(3, 3, 1, 1, 2, 1).unwrap();
        assert!(evaluate_word(std::slice::from_ref(&a), &Word::identity())
            .unwrap()
            .is_identity());
        let sq = evaluate_word(std::slice::from_ref(&a), &Word::power_of_generator(1, 2)).unwrap();
        assert_eq!(sq, UniMatrix::elementary(3, 3, 1, 1, 2, 2).unwrap());
        let b = UniMatrix::elementary(3, 3, 1, 1, 3, 1).unwrap();
        let c = Word::generator(1).commutator(&Word::generator(2));
        assert!(evaluate_word(&[a.clone(), b], &c).unwrap().is_identity());
        assert!(matches!(evaluate_word(&[a], &c), Err(Error::Dimension(_))));
    }

    #[test]
    fn cup_condition_examples() {
        let g = cyclic(3, 3);
        assert_eq!(
            cup_condition(&g, &CharTuple::repeated(&g, &[1], 2).unwrap()).unwrap(),
            vec![true]
        );
        let g4 = cyclic(4, 2);
        assert_eq!(
            cup_condition(&g4, &CharTuple::repeated(&g4, &[1], 2).unwrap()).unwrap(),
            vec![true]
        );
        let g2 = cyclic(2, 2);
        assert_eq!(
            cup_condition(&g2, &CharTuple::repeated(&g2, &[1], 2).unwrap()).unwrap(),
            vec![false]
        );
        let t = CharTuple::new(&g2, vec![vec![1, 0, 1]]).unwrap();
        assert_eq!(cup_condition(&g2, &t).unwrap(), vec![true, true]);
    }

    #[test]
    fn cup_condition_matches_heisenberg_enumeration() {
        for (e, p) in [(3i64, 3u64), (4, 2), (2, 2), (9, 3), (5, 5)] {
            let g = cyclic(e, p);
            for a in 0..p {
                for b in 0..p {
                    let t = CharTuple::new(&g, vec![vec![a, b]]).unwrap();
                    let oracle =
                        !brute_force::homomorphisms(&g, 2, 1, Target::Full, Some(&t)).is_empty();
                    assert_eq!(
                        cup_condition(&g, &t).unwrap(),
                        vec![oracle],
                        "e={e} p={p} ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn lift_tower_examples() {
        let g = cyclic(3, 3);
        let theta = CharTuple::repeated(&g, &[1], 3).unwrap();
        let bar = lift_tower(&g, &theta, Target::Quotient, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(bar.status, LiftStatus::Lifted);
        assert!(validate_witness(
            &g,
            &theta,
            Target::Quotient,
            bar.witness.as_ref().unwrap()
        ));
        let full = lift_tower(&g, &theta, Target::Full, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(full.status, LiftStatus::Obstructed);

        let g9 = cyclic(9, 3);
        let theta9 = CharTuple::repeated(&g9, &[1], 3).unwrap();
        let res = lift_tower(&g9, &theta9, Target::Full, 1, DEFAULT_NODE_BUDGET).unwrap();
        let w = res.witness.unwrap();
        assert_eq!(w[0].order(), 9);
        assert!(validate_witness(&g9, &theta9, Target::Full, &w));

        let zero = CharTuple::repeated(&g, &[0], 4).unwrap();
        let res = lift_tower(&g, &zero, Target::Full, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert!(res.witness.unwrap().iter().all(UniMatrix::is_identity));
    }

    #[test]
    fn budget_is_reported_not_swallowed() {
        let g = cyclic(3, 3);
        let theta = CharTuple::repeated(&g, &[1], 3).unwrap();
        let res = lift_tower(&g, &theta, Target::Full, 1, 2).unwrap();
        assert_eq!(res.status, LiftStatus::BudgetExceeded);
        assert_eq!(res.ok(), None);
        let report = strong_massey_check(&g, 3, 1, 3).unwrap();
        assert_eq!(report.result, MasseyCheck::BudgetExceeded);
    }

    #[test]
    fn decide_examples() {
        let free = Presentation::free(2, 3).unwrap();
        let theta = CharTuple::new(&free, vec![vec![1, 2, 0], vec![1, 1, 1]]).unwrap();
        let v = decide(&free, &theta, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert!(v.all_cups_vanish());
        assert_eq!((v.defined.ok, v.vanishing.ok), (Some(true), Some(true)));

        let g = cyclic(3, 3);
        let theta = CharTuple::repeated(&g, &[1], 3).unwrap();
        let v = decide(&g, &theta, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(v.cup_ok, vec![true, true]);
        assert_eq!(v.defined.ok, Some(true));
        assert_eq!(v.vanishing.ok, Some(false));
    }

    #[test]
    fn char_tuple_validation() {
        let g = Presentation::new(2, vec![Word::new([(1, 3), (2, 3)])], 3).unwrap();
        assert!(CharTuple::new(&g, vec![vec![1, 2], vec![2, 1]]).is_ok());
        assert!(CharTuple::new(&g, vec![vec![1, 2]]).is_err());
        assert!(CharTuple::new(&g, vec![vec![1], vec![1]]).is_err());
    }

    #[test]
    fn character_group_of_frattini_presentation_is_everything() {
        let g = Presentation::new(2, vec![Word::new([(1, 3), (2, -3)])], 3).unwrap();
        assert_eq!(character_group(&g).len(), 9);
    }

    #[test]
    fn strong_massey_small_cases() {
        let g = cyclic(3, 3);
        let rep = strong_massey_check(&g, 3, 1, DEFAULT_NODE_BUDGET).unwrap();
        match rep.result {
            MasseyCheck::Fails { counterexample } => {
                assert_eq!(counterexample.values(), &[vec![1, 1, 1]])
            }
            other => panic!("expected failure, got {other:?}"),
        }
        let free = Presentation::free(1, 5).unwrap();
        for n in 2..=5 {
            assert_eq!(
                strong_massey_check(&free, n, 1, DEFAULT_NODE_BUDGET)
                    .unwrap()
                    .holds(),
                Some(true)
            );
        }
        let g9 = cyclic(9, 3);
        for n in 3..=8 {
            assert_eq!(
                strong_massey_check(&g9, n, 1, DEFAULT_NODE_BUDGET)
                    .unwrap()
                    .holds(),
                Some(true),
                "n={n}"
            );
        }
    }

    #[test]
    fn torsor_children_match_enumeration() {
        // Homomorphisms to U/G_{w+2}, grouped by their reduction to U/G_{w+1}:
        // whenever a parent has any child, the children are exactly parent·χ
        // for χ in Hom(G, layer).
        let p = 2;
        let n = 3;
        let rel = Word::generator(1)
            .commutator(&Word::generator(2))
            .mul(&Word::power_of_generator(1, 2));
        let pres = Presentation::new(2, vec![rel], p).unwrap();
        let homs = character_group(&pres);
        let f = WeightFiltration::new(n + 1, p, 1, false);
        let id = UniMatrix::identity(n + 1, p, 1).unwrap();
        let elements = brute_force::all_elements(n + 1, p, 1, Target::Full);
        for w in 1..n {
            let truncated: std::collections::BTreeSet<Vec<u64>> = elements
                .iter()
                .map(|m| {
                    let mut m = m.clone();
                    f.truncate(&mut m, w + 1);
                    m.entries_raw().to_vec()
                })
                .collect();
            let reps: Vec<UniMatrix> = truncated
                .into_iter()
                .map(|e| {
                    let mut m = id.clone();
                    m.entries_raw_mut().copy_from_slice(&e);
                    m
                })
                .collect();
            let mut by_parent: HashMap<Vec<UniMatrix>, std::collections::HashSet<Vec<UniMatrix>>> =
                HashMap::new();
            for a in &reps {
                for b in &reps {
                    let images = vec![a.clone(), b.clone()];
                    let ok = pres.relators().iter().all(|r| {
                        let mut v = r.evaluate(&images).unwrap();
                        f.truncate(&mut v, w + 1);
                        v.is_identity()
                    });
                    if ok {
                        let parent: Vec<UniMatrix> = images
                            .iter()
                            .map(|m| {
                                let mut m = m.clone();
                                f.truncate(&mut m, w);
                                m
                            })
                            .collect();
                        by_parent.entry(parent).or_default().insert(images);
                    }
                }
            }
            assert!(!by_parent.is_empty());
            let layer = f.layer(w + 1);
            for (parent, children) in &by_parent {
                let mut torsor = std::collections::HashSet::new();
                let mut choice = vec![0u64; layer.dim()];
                loop {
                    let mut child = parent.clone();
                    for (gen, image) in child.iter_mut().enumerate() {
                        let coords: Vec<u64> =
                            choice.iter().map(|&c| homs[c as usize][gen]).collect();
                        f.add_layer(image, &layer, &coords);
                    }
                    torsor.insert(child);
                    if !increment(&mut choice, homs.len() as u64) {
                        break;
                    }
                }
                assert_eq!(
                    torsor.len(),
                    (homs.len() as u64).pow(layer.dim() as u32) as usize
                );
                assert_eq!(children, &torsor, "weight {w}");
            }
        }
    }
}
