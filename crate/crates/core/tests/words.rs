use std::collections::HashMap;

use parafree_core::parse::{parse_presentation, parse_word};
use parafree_core::word::{free_reduce, lcs_relators};
use parafree_core::{Alphabet, Gen, Presentation, Word};
use proptest::prelude::*;

fn raw_word(ngens: u32, max_len: usize) -> impl Strategy<Value = Vec<(u32, i64)>> {
    prop::collection::vec((0..ngens, -3i64..=3), 0..max_len)
}

fn word(ngens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    raw_word(ngens, max_len).prop_map(|raw| Word::from_syllables(raw.into_iter().map(|(g, e)| (Gen(g), e))))
}

// Letter-by-letter reduction with an explicit stack.
fn stack_reduce(raw: &[(u32, i64)]) -> Vec<(u32, i64)> {
    let mut stack: Vec<(u32, i64)> = Vec::new();
    for &(g, e) in raw {
        let s = e.signum();
        for _ in 0..e.abs() {
            match stack.last() {
                Some(&(h, t)) if h == g && t == -s => {
                    stack.pop();
                }
                _ => stack.push((g, s)),
            }
        }
    }
    stack
}

fn letters(w: &Word) -> Vec<(u32, i64)> {
    w.letters().map(|(g, s)| (g.0, s)).collect()
}

proptest! {
    #[test]
    fn reduction_matches_stack_oracle(raw in raw_word(3, 12)) {
        let w = Word::from_syllables(raw.iter().map(|&(g, e)| (Gen(g), e)));
        prop_assert_eq!(letters(&w), stack_reduce(&raw));
        for pair in w.syllables().windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0);
        }
        prop_assert!(w.syllables().iter().all(|&(_, e)| e != 0));
    }

    #[test]
    fn free_reduce_is_idempotent(w in word(3, 12)) {
        let again = Word::from_syllables(w.syllables().iter().copied());
        prop_assert_eq!(again, w);
    }

    #[test]
    fn multiplication_is_associative_with_identity(u in word(3, 8), v in word(3, 8), x in word(3, 8)) {
        prop_assert_eq!(u.mul(&v).mul(&x), u.mul(&v.mul(&x)));
        prop_assert_eq!(u.mul(&Word::identity()), u.clone());
        prop_assert_eq!(Word::identity().mul(&u), u.clone());
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.inverse().inverse(), u);
    }

    #[test]
    fn substitution_is_a_homomorphism(u in word(2, 8), v in word(2, 8), ia in word(3, 5), ib in word(3, 5)) {
        let images = [ia, ib];
        let lhs = u.mul(&v).substitute(&images).unwrap();
        let rhs = u.substitute(&images).unwrap().mul(&v.substitute(&images).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degenerate_commutators_vanish(w in word(3, 8)) {
        prop_assert!(Word::commutator(&w, &w).is_identity());
        prop_assert!(Word::commutator(&w, &Word::identity()).is_identity());
    }

    #[test]
    fn words_round_trip_through_text(w in word(3, 10)) {
        let al = Alphabet::new(["a", "b", "c"]).unwrap();
        let text = w.display(&al).to_string();
        prop_assert_eq!(parse_word(&text, &al).unwrap(), w);
    }

    #[test]
    fn presentations_round_trip_through_text(rels in prop::collection::vec(word(2, 6), 0..4)) {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let pres = Presentation::new_lenient(al, rels).unwrap();
        prop_assert_eq!(parse_presentation(&pres.to_string()).unwrap(), pres);
    }
}

#[test]
fn spec_word_examples() {
    let al = Alphabet::new(["a", "b"]).unwrap();
    assert!(free_reduce(&al, &[("a", 1), ("a", -1)]).unwrap().is_identity());
    assert_eq!(free_reduce(&al, &[("a", 2), ("a", 3)]).unwrap(), Word::power_of(Gen(0), 5));
    assert_eq!(free_reduce(&al, &[("a", 1), ("b", 1), ("b", -1), ("a", 1)]).unwrap(), Word::power_of(Gen(0), 2));
    assert!(free_reduce(&al, &[("c", 1)]).is_err());

    let w = |s: &str| parse_word(s, &al).unwrap();
    assert_eq!(w("a b").mul(&w("b^-1 a")), w("a^2"));
    assert_eq!(w("a^2 b^-1").inverse(), w("b a^-2"));
    assert_eq!(Word::commutator(&w("a"), &w("b")), w("a^-1 b^-1 a b"));

    // gamma [b, gamma] = gamma b^-1 gamma^-1 b gamma
    let gamma = w("a b^2 a");
    let b = w("b");
    let expanded = gamma.mul(&b.inverse()).mul(&gamma.inverse()).mul(&b).mul(&gamma);
    assert_eq!(gamma.mul(&Word::commutator(&b, &gamma)), expanded);

    let mut images = HashMap::new();
    images.insert(Gen(0), w("a [b,a]"));
    assert_eq!(w("a^3").substitute_map(&images, true).unwrap(), w("(a*[b,a])^3"));
    images.insert(Gen(0), w("a [a^3,b]"));
    assert_eq!(w("a").substitute_map(&images, true).unwrap(), w("a a^-3 b^-1 a^3 b"));
    assert!(matches!(
        w("a").substitute_map(&HashMap::new(), false),
        Err(parafree_core::Error::MissingImage(_))
    ));
}

#[test]
fn lcs_relator_sets() {
    let al = Alphabet::new(["a", "b"]).unwrap();
    let w = |s: &str| parse_word(s, &al).unwrap();
    let two = lcs_relators(&al, 2).unwrap();
    assert_eq!(two, vec![w("[a,b]"), w("[b,a]")]);
    let three = lcs_relators(&al, 3).unwrap();
    assert_eq!(three.len(), 4);
    for r in ["[[a,b],a]", "[[a,b],b]", "[[b,a],a]", "[[b,a],b]"] {
        assert!(three.contains(&w(r)), "{r}");
    }
    assert!(lcs_relators(&Alphabet::new(["a"]).unwrap(), 2).unwrap().is_empty());
    assert!(lcs_relators(&al, 1).is_err());
}
