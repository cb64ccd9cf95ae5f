use parafree_core::freeprod::{enumerate_normal_forms, ClaimVerdict, Context, Factor, Order};
use parafree_core::{Gen, Word};
use proptest::prelude::*;

// Positive letters 'a'/'b'; inverses become m - 1 copies, then a^m and b^m
// are deleted until none remain.
fn brute_force(w: &Word, ma: u64, mb: u64) -> String {
    let mut s = String::new();
    for (g, sign) in w.letters() {
        let (c, m) = if g == Gen(0) { ('a', ma) } else { ('b', mb) };
        let copies = if sign > 0 { 1 } else { m - 1 };
        s.extend(std::iter::repeat_n(c, copies as usize));
    }
    let ra = "a".repeat(ma as usize);
    let rb = "b".repeat(mb as usize);
    loop {
        let next = s.replacen(&ra, "", 1).replacen(&rb, "", 1);
        if next == s {
            return s;
        }
        s = next;
    }
}

fn expand(w: &Word) -> String {
    w.letters().map(|(g, _)| if g == Gen(0) { 'a' } else { 'b' }).collect()
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0u32..2, -4i64..=4), 0..max_len)
        .prop_map(|raw| Word::from_syllables(raw.into_iter().map(|(g, e)| (Gen(g), e))))
}

proptest! {
    #[test]
    fn normal_form_agrees_with_rewriting(w in word(8), lk in prop::sample::select(vec![(1u32, 1u32), (1, 2), (2, 1)])) {
        let c = Context::new(3, lk.0, lk.1).unwrap();
        let nf = c.nf_reduce(&w).unwrap();
        let oracle = brute_force(&w, c.order_of(Factor::First), c.order_of(Factor::Second));
        prop_assert_eq!(expand(&nf.to_word()), oracle);
        prop_assert_eq!(c.nf_reduce(&nf.to_word()).unwrap(), nf);
    }

    #[test]
    fn normal_form_is_multiplicative(u in word(6), v in word(6)) {
        let c = Context::new(5, 1, 1).unwrap();
        let lhs = c.nf_reduce(&u.mul(&v)).unwrap();
        let rhs = c.nf_mul(&c.nf_reduce(&u).unwrap(), &c.nf_reduce(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
        let inv = c.nf_inverse(&c.nf_reduce(&u).unwrap());
        prop_assert_eq!(inv, c.nf_reduce(&u.inverse()).unwrap());
    }

    #[test]
    fn order_is_a_conjugacy_invariant(w in word(6), t in word(6)) {
        let c = Context::new(3, 1, 2).unwrap();
        prop_assert_eq!(c.element_order(&w).unwrap(), c.element_order(&w.conjugate_by(&t)).unwrap());
    }

    #[test]
    fn finite_orders_are_honest(w in word(6)) {
        let c = Context::new(3, 1, 1).unwrap();
        if let Order::Finite(m) = c.element_order(&w).unwrap() {
            prop_assert!(c.nf_reduce(&w.pow(m as i64)).unwrap().is_empty());
            if m > 1 {
                prop_assert!(!c.nf_reduce(&w.pow(m as i64 / 3)).unwrap().is_empty());
            }
        } else {
            // a cyclically reduced word of length >= 2 only grows under powers
            prop_assert!(c.nf_reduce(&w.pow(6)).unwrap().len() > c.nf_reduce(&w).unwrap().len());
        }
    }

    #[test]
    fn relators_are_invisible(w in word(6)) {
        let c = Context::new(3, 1, 2).unwrap();
        let with = w.mul(&Word::power_of(Gen(1), 9)).mul(&Word::power_of(Gen(0), -3));
        prop_assert!(c.nf_equal(&w, &with).unwrap());
    }
}

#[test]
fn claim_holds_for_short_gammas() {
    for p in [3u64, 5] {
        let c = Context::new(p, 1, 1).unwrap();
        let mut confirmed = 0;
        for nf in enumerate_normal_forms(&c, 4) {
            match c.check_inf_order_claim(&nf.to_word()).unwrap() {
                ClaimVerdict::InfiniteConfirmed => confirmed += 1,
                ClaimVerdict::PreconditionViolated => {
                    assert!(nf.is_empty() || (nf.len() == 1 && nf.to_word().syllables()[0].0 == Gen(1)));
                }
            }
        }
        // everything except the identity and the p - 1 nontrivial powers of b
        let total = enumerate_normal_forms(&c, 4).len();
        assert_eq!(confirmed, total - p as usize);
    }
}
