use std::collections::HashMap;

use proptest::prelude::*;

use super::*;

/// Naive truncated expansion: every syllable x^e is expanded letter by letter
/// as |e| factors of (1 + X) or (1 - X + X^2 - …), multiplied densely.
fn naive_expand(w: &Word, p: u64, cutoff: usize) -> HashMap<Vec<usize>, u64> {
    let mut acc: HashMap<Vec<usize>, u64> = HashMap::from([(vec![], 1)]);
    for &(g, e) in w.letters() {
        for _ in 0..e.unsigned_abs() {
            let factor: Vec<(Vec<usize>, u64)> = if e > 0 {
                vec![(vec![], 1), (vec![g], 1)]
            } else {
                (0..=cutoff)
                    .map(|k| (vec![g; k], if k % 2 == 0 { 1 } else { p - 1 }))
                    .collect()
            };
            let mut next: HashMap<Vec<usize>, u64> = HashMap::new();
            for (a, x) in &acc {
                for (b, y) in &factor {
                    if a.len() + b.len() <= cutoff {
                        let key = [a.as_slice(), b.as_slice()].concat();
                        *next.entry(key).or_insert(0) += x * y % p;
                    }
                }
            }
            acc = next
                .into_iter()
                .map(|(k, v)| (k, v % p))
                .filter(|(_, v)| *v != 0)
                .collect();
        }
    }
    acc
}

fn as_map(s: &NcSeries) -> HashMap<Vec<usize>, u64> {
    s.terms().map(|(k, v)| (k.clone(), v)).collect()
}

fn x(g: usize) -> Word {
    Word::generator(g)
}

#[test]
fn expansion_examples() {
    assert_eq!(
        as_map(&magnus_expand(&Word::identity(), 3, 4)),
        HashMap::from([(vec![], 1)])
    );
    for &(p, pm) in &[(3u64, 9i64), (2, 4), (5, 5)] {
        let s = magnus_expand(&Word::power_of_generator(1, pm), p, pm as usize + 1);
        let expected = HashMap::from([(vec![], 1), (vec![1; pm as usize], 1)]);
        assert_eq!(as_map(&s), expected);
        assert_eq!(
            naive_expand(&Word::power_of_generator(1, pm), p, pm as usize + 1),
            expected
        );
    }
    let c = x(1).commutator(&x(2));
    let s = magnus_expand(&c, 5, 2);
    assert_eq!(
        as_map(&s),
        HashMap::from([(vec![], 1), (vec![1, 2], 1), (vec![2, 1], 4)])
    );
    assert_eq!(as_map(&s), naive_expand(&c, 5, 2));
}

#[test]
fn epsilon_examples() {
    let c = x(1).commutator(&x(2));
    assert_eq!(epsilon(&x(1), &[1], 3), 1);
    assert_eq!(epsilon(&c, &[1, 2], 3), 1);
    assert_eq!(epsilon(&c, &[2, 1], 3), 2);
    assert_eq!(epsilon(&c, &[1], 3), 0);
}

#[test]
fn depth_examples() {
    assert_eq!(
        zassenhaus_depth(&Word::power_of_generator(1, 9), 3, 12),
        WordDepth::Exact(9)
    );
    let c = x(1).commutator(&x(2));
    assert_eq!(zassenhaus_depth(&c, 3, 5), WordDepth::Exact(2));
    assert_eq!(
        zassenhaus_depth(&c.commutator(&x(1)), 3, 5),
        WordDepth::Exact(3)
    );
    assert_eq!(
        zassenhaus_depth(&Word::identity(), 3, 5),
        WordDepth::Exceeds(5)
    );
    assert_eq!(
        zassenhaus_depth(&Word::power_of_generator(1, 9), 3, 4),
        WordDepth::Exceeds(4)
    );
}

#[test]
fn depth_of_prime_powers() {
    for p in [2u64, 3, 5] {
        for m in 1..=2u32 {
            let pm = p.pow(m);
            let w = Word::power_of_generator(1, pm as i64);
            assert_eq!(
                zassenhaus_depth(&w, p, pm as usize + 2),
                WordDepth::Exact(pm as usize),
                "p={p} m={m}"
            );
        }
    }
}

#[test]
fn vogel_examples() {
    assert!(vogel_check(&Presentation::cyclic(9, 3).unwrap(), 3));
    assert!(!vogel_check(&Presentation::cyclic(3, 3).unwrap(), 3));
    assert!(vogel_check(&Presentation::free(2, 3).unwrap(), 7));
}

#[test]
fn magnus_representation_examples() {
    assert!(magnus_representation(&[1, 2, 1], &Word::identity(), 3)
        .unwrap()
        .is_identity());
    let c = x(1).commutator(&x(2));
    let m = magnus_representation(&[1, 2], &c, 3).unwrap();
    assert_eq!(m, UniMatrix::elementary(3, 3, 1, 1, 3, 1).unwrap());
}

#[test]
fn obstruction_examples() {
    let cyc = Presentation::cyclic(3, 3).unwrap();
    let id = UniMatrix::identity(4, 3, 1).unwrap();
    assert_eq!(
        obstruction_on_relator(&cyc, &[id], &cyc.relators()[0]).unwrap(),
        0
    );
    let j = UniMatrix::regular(4, 3, 1).unwrap();
    let value = obstruction_on_relator(&cyc, &[j.mod_center()], &cyc.relators()[0]).unwrap();
    assert_ne!(value, 0);
    // x^3 for the regular unipotent of U_4(F_3) is I + E_{1,4}
    assert_eq!(j.pow(3), UniMatrix::elementary(4, 3, 1, 1, 4, 1).unwrap());
    assert_eq!(value, 1);
}

#[test]
fn obstruction_rejects_bad_barlift() {
    // ⟨x | x^3⟩ with n = 4: the regular element cubed is not central in U_5
    let cyc = Presentation::cyclic(3, 3).unwrap();
    let j = UniMatrix::regular(5, 3, 1).unwrap();
    assert!(matches!(
        obstruction_on_relator(&cyc, &[j], &cyc.relators()[0]),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn parse_format() {
    let text = "# a two-generator group\ngens: 2\nrel: x1^3 x2 x1^-1 x2^-1 x1^-2\n\nrel: x2^9\n";
    let p = Presentation::parse(text, 3).unwrap();
    assert_eq!(p.num_generators(), 2);
    assert_eq!(p.relators().len(), 2);
    assert_eq!(p.relators()[0].to_string(), "x1^3 x2 x1^-1 x2^-1 x1^-2");
    assert_eq!(Presentation::parse(&p.to_string(), 3).unwrap(), p);
    assert!(Presentation::parse("gens: 1\n", 5)
        .unwrap()
        .relators()
        .is_empty());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("gens: 1\nrel: x1^2\n", 2),
        ("gens: 1\n\nrel: y1\n", 3),
        ("gens: 1\nrel: x2^3\n", 2),
        ("gens: 1\nfoo: 3\n", 2),
        ("gens: x\n", 1),
        ("gens: 1\nrel: x1^0\n", 2),
    ];
    for (text, line) in cases {
        match Presentation::parse(text, 3) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    assert!(matches!(
        Presentation::parse("rel: x1^3\n", 3),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn presentation_rejects_non_frattini_relators() {
    assert!(Presentation::new(1, vec![Word::power_of_generator(1, 4)], 3).is_err());
    assert!(Presentation::new(1, vec![Word::power_of_generator(2, 3)], 3).is_err());
}

fn arb_word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(
        (1..=gens, prop::sample::select(vec![-2i64, -1, 1, 2, 3])),
        0..max_len,
    )
    .prop_map(Word::new)
}

fn all_indices(gens: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| (1..=gens).map(move |g| [v.clone(), vec![g]].concat()))
            .collect();
    }
    out
}

proptest! {
    #[test]
    fn expansion_matches_naive(w in arb_word(3, 8), p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assert_eq!(as_map(&magnus_expand(&w, p, 4)), naive_expand(&w, p, 4));
    }

    #[test]
    fn expansion_is_multiplicative(a in arb_word(2, 6), b in arb_word(2, 6), d in 1usize..=6) {
        let p = 3;
        let lhs = magnus_expand(&a.mul(&b), p, d);
        let rhs = magnus_expand(&a, p, d).mul(&magnus_expand(&b, p, d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coefficients_vanish_below_depth(w in arb_word(2, 10), p in prop::sample::select(vec![2u64, 3])) {
        let w = w.commutator(&Word::generator(1));
        if let WordDepth::Exact(d) = zassenhaus_depth(&w, p, 5) {
            for len in 1..d {
                for idx in all_indices(2, len) {
                    prop_assert_eq!(epsilon(&w, &idx, p), 0);
                }
            }
            prop_assert!(all_indices(2, d).iter().any(|idx| epsilon(&w, idx, p) != 0));
        }
    }

    #[test]
    fn magnus_representation_is_homomorphism(
        a in arb_word(3, 8),
        b in arb_word(3, 8),
        idx in proptest::collection::vec(1usize..=3, 1..5),
    ) {
        let p = 3;
        let ra = magnus_representation(&idx, &a, p).unwrap();
        let rb = magnus_representation(&idx, &b, p).unwrap();
        prop_assert_eq!(magnus_representation(&idx, &a.mul(&b), p).unwrap(), ra.mul(&rb));
        // entries agree with the Magnus coefficients
        for i in 0..idx.len() {
            for j in (i + 1)..=idx.len() {
                prop_assert_eq!(ra.entry(i + 1, j + 1), epsilon(&a, &idx[i..j], p));
            }
        }
        for g in 1..=3 {
            let nd = magnus_representation(&idx, &Word::generator(g), p).unwrap().near_diagonal();
            let expected: Vec<u64> = idx.iter().map(|&i| u64::from(i == g)).collect();
            prop_assert_eq!(nd, expected);
        }
    }

    #[test]
    fn obstruction_independent_of_central_preimages(
        body in arb_word(2, 6),
        idx in proptest::collection::vec(1usize..=2, 2..=3),
    ) {
        let p = 3;
        let n = idx.len();
        // depth ≥ n relator: an (n-1)-fold commutator with a generator
        let mut f = Word::generator(1).commutator(&body.mul(&Word::generator(2)));
        for _ in 2..n {
            f = f.commutator(&Word::generator(1));
        }
        let pres = Presentation::new(2, vec![f.clone()], p).unwrap();
        let bar: Vec<UniMatrix> = (1..=2).map(|g| magnus_representation(&idx, &Word::generator(g), p).unwrap()).collect();
        if let Ok(base) = obstruction_on_relator(&pres, &bar, &f) {
            for c1 in 0..p {
                for c2 in 0..p {
                    let mut shifted = bar.clone();
                    shifted[0].set(1, n + 1, c1 as i64).unwrap();
                    shifted[1].set(1, n + 1, c2 as i64).unwrap();
                    let lifts: Vec<UniMatrix> = shifted.clone();
                    prop_assert_eq!(f.evaluate(&lifts).unwrap().corner(), base);
                }
            }
        }
    }
}
