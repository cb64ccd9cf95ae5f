//! Normal forms and element orders in `C_{p^l} * C_{p^k} = <a,b | a^{p^l}, b^{p^k}>`.
//!
//! Words are read over a two-letter alphabet whose first generator is `a`
//! and whose second is `b`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Alphabet, Gen, Word};

/// One of the two free factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    First,
    Second,
}

impl Factor {
    pub fn gen(self) -> Gen {
        match self {
            Factor::First => Gen(0),
            Factor::Second => Gen(1),
        }
    }

    fn of(g: Gen) -> Result<Factor> {
        match g.0 {
            0 => Ok(Factor::First),
            1 => Ok(Factor::Second),
            i => Err(Error::GeneratorOutOfRange { index: i as usize, size: 2 }),
        }
    }
}

/// The group `C_{p^l} * C_{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    p: u64,
    l: u32,
    k: u32,
    orders: [u64; 2],
    alphabet: Alphabet,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Context {
    pub fn new(p: u64, l: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
        }
        if l == 0 || k == 0 {
            return Err(Error::InvalidArgument("exponents l and k must be at least 1".into()));
        }
        let pow = |e: u32| {
            p.checked_pow(e)
                .filter(|&m| m <= i64::MAX as u64)
                .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows")))
        };
        let orders = [pow(l)?, pow(k)?];
        let alphabet = Alphabet::new(["a", "b"])?;
        Ok(Context { p, l, k, orders, alphabet })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order_of(&self, f: Factor) -> u64 {
        match f {
            Factor::First => self.orders[0],
            Factor::Second => self.orders[1],
        }
    }

    /// The case analysis for `γ[b,γ]` needs an odd prime.
    pub fn in_scope(&self) -> bool {
        self.p % 2 == 1
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn presentation(&self) -> Presentation {
        let relators = vec![
            Word::power_of(Gen(0), self.orders[0] as i64),
            Word::power_of(Gen(1), self.orders[1] as i64),
        ];
        Presentation::new(self.alphabet.clone(), relators).expect("nonempty relators")
    }

    fn residue(&self, f: Factor, e: i64) -> u64 {
        e.rem_euclid(self.order_of(f) as i64) as u64
    }

    fn push(&self, out: &mut Vec<(Factor, u64)>, f: Factor, e: u64) {
        let m = self.order_of(f);
        let e = e % m;
        if e == 0 {
            return;
        }
        match out.last_mut() {
            Some((g, x)) if *g == f => {
                let s = (*x + e) % m;
                if s == 0 {
                    out.pop();
                } else {
                    *x = s;
                }
            }
            _ => out.push((f, e)),
        }
    }

    pub fn nf_reduce(&self, w: &Word) -> Result<SyllableNF> {
        let mut out = Vec::with_capacity(w.syllable_len());
        for &(g, e) in w.syllables() {
            let f = Factor::of(g)?;
            self.push(&mut out, f, self.residue(f, e));
        }
        Ok(SyllableNF { syllables: out })
    }

    pub fn nf_equal(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.nf_reduce(u)? == self.nf_reduce(v)?)
    }

    pub fn nf_mul(&self, x: &SyllableNF, y: &SyllableNF) -> SyllableNF {
        let mut out = x.syllables.clone();
        for &(f, e) in &y.syllables {
            self.push(&mut out, f, e);
        }
        SyllableNF { syllables: out }
    }

    pub fn nf_inverse(&self, x: &SyllableNF) -> SyllableNF {
        let syllables =
            x.syllables.iter().rev().map(|&(f, e)| (f, self.order_of(f) - e)).collect();
        SyllableNF { syllables }
    }

    /// Conjugates the last syllable onto the front until the ends lie in
    /// different factors.
    pub fn cyclic_reduce(&self, nf: &SyllableNF) -> SyllableNF {
        let mut s = nf.syllables.clone();
        while s.len() >= 2 && s[0].0 == s[s.len() - 1].0 {
            let (f, last) = s.pop().expect("len >= 2");
            let merged = (s[0].1 + last) % self.order_of(f);
            if merged == 0 {
                s.remove(0);
            } else {
                s[0].1 = merged;
            }
        }
        SyllableNF { syllables: s }
    }

    pub fn element_order(&self, w: &Word) -> Result<Order> {
        let c = self.cyclic_reduce(&self.nf_reduce(w)?);
        Ok(match c.syllables.as_slice() {
            [] => Order::Finite(1),
            [(f, e)] => {
                let m = self.order_of(*f);
                Order::Finite(m / m.gcd(e))
            }
            _ => Order::Infinite,
        })
    }

    /// Tests that `γ[b,γ]` has infinite order whenever `γ` is neither trivial
    /// nor a power of `b`.
    pub fn check_inf_order_claim(&self, gamma: &Word) -> Result<ClaimVerdict> {
        let nf = self.nf_reduce(gamma)?;
        match nf.syllables.as_slice() {
            [] | [(Factor::Second, _)] => return Ok(ClaimVerdict::PreconditionViolated),
            _ => {}
        }
        let b = Word::generator(Gen(1));
        let target = gamma.mul(&Word::commutator(&b, gamma));
        match self.element_order(&target)? {
            Order::Infinite => Ok(ClaimVerdict::InfiniteConfirmed),
            Order::Finite(m) => {
                let reduced = self.nf_reduce(&target)?;
                Err(Error::ClaimViolation(format!(
                    "p = {}: gamma = {} gives gamma[b,gamma] = {} of order {m}",
                    self.p,
                    nf.display(),
                    reduced.display()
                )))
            }
        }
    }
}

/// Alternating syllables with exponents in `[1, order)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SyllableNF {
    syllables: Vec<(Factor, u64)>,
}

impl SyllableNF {
    pub fn syllables(&self) -> &[(Factor, u64)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::from_syllables(self.syllables.iter().map(|&(f, e)| (f.gen(), e as i64)))
    }

    pub fn display(&self) -> String {
        let al = Alphabet::new(["a", "b"]).expect("valid names");
        self.to_word().display(&al).to_string()
    }
}

impl fmt::Display for SyllableNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimVerdict {
    InfiniteConfirmed,
    PreconditionViolated,
}

/// Every normal form with at most `max_len` syllables, in length-then-lex order.
pub fn enumerate_normal_forms(ctx: &Context, max_len: usize) -> Vec<SyllableNF> {
    let mut out = vec![SyllableNF::default()];
    let mut frontier = vec![SyllableNF::default()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for nf in &frontier {
            for f in [Factor::First, Factor::Second] {
                if nf.syllables.last().is_some_and(|&(g, _)| g == f) {
                    continue;
                }
                for e in 1..ctx.order_of(f) {
                    let mut s = nf.syllables.clone();
                    s.push((f, e));
                    next.push(SyllableNF { syllables: s });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    fn ctx(p: u64) -> Context {
        Context::new(p, 1, 1).unwrap()
    }

    fn w(c: &Context, s: &str) -> Word {
        parse_word(s, c.alphabet()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let c = ctx(3);
        assert_eq!(c.nf_reduce(&w(&c, "a^4")).unwrap().display(), "a");
        assert_eq!(c.nf_reduce(&w(&c, "a b b^2 a")).unwrap().display(), "a^2");
        assert_eq!(c.nf_reduce(&w(&c, "a b^-1")).unwrap().display(), "a*b^2");
        assert!(c.nf_equal(&w(&c, "a^4"), &w(&c, "a")).unwrap());
        assert!(!c.nf_equal(&w(&c, "ab"), &w(&c, "ba")).unwrap());

        let cr = |s: &str| c.cyclic_reduce(&c.nf_reduce(&w(&c, s)).unwrap()).display();
        assert_eq!(cr("a b a^-1"), "b");
        assert_eq!(cr("a b"), "a*b");
        assert_eq!(cr("a b^2 a^2"), "b^2");

        assert_eq!(c.element_order(&w(&c, "a")).unwrap(), Order::Finite(3));
        assert_eq!(c.element_order(&w(&c, "ab")).unwrap(), Order::Infinite);
        assert_eq!(c.element_order(&w(&c, "b a b^-1")).unwrap(), Order::Finite(3));
        assert_eq!(c.element_order(&w(&c, "1")).unwrap(), Order::Finite(1));
    }

    #[test]
    fn orders_in_larger_factors() {
        let c = Context::new(3, 2, 1).unwrap();
        assert_eq!(c.element_order(&w(&c, "a^3")).unwrap(), Order::Finite(3));
        assert_eq!(c.element_order(&w(&c, "a^2")).unwrap(), Order::Finite(9));
        assert_eq!(c.nf_reduce(&w(&c, "a^9 b^4")).unwrap().display(), "b");
    }

    #[test]
    fn claim_examples() {
        let c = ctx(3);
        assert_eq!(c.check_inf_order_claim(&w(&c, "b")).unwrap(), ClaimVerdict::PreconditionViolated);
        assert_eq!(c.check_inf_order_claim(&w(&c, "b^3")).unwrap(), ClaimVerdict::PreconditionViolated);
        assert_eq!(c.check_inf_order_claim(&w(&c, "a")).unwrap(), ClaimVerdict::InfiniteConfirmed);
        assert_eq!(c.check_inf_order_claim(&w(&c, "b a b^2")).unwrap(), ClaimVerdict::InfiniteConfirmed);
    }

    #[test]
    fn claim_fails_for_p_two() {
        let c = ctx(2);
        assert!(!c.in_scope());
        assert!(matches!(c.check_inf_order_claim(&w(&c, "a")), Err(Error::ClaimViolation(_))));
    }

    #[test]
    fn rejects_foreign_generators_and_bad_contexts() {
        let c = ctx(3);
        let foreign = Word::generator(Gen(2));
        assert!(matches!(c.nf_reduce(&foreign), Err(Error::GeneratorOutOfRange { .. })));
        assert!(Context::new(9, 1, 1).is_err());
        assert!(Context::new(3, 0, 1).is_err());
        assert!(Context::new(3, 100, 1).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // (p-1) choices per syllable, two starting factors.
        let c = ctx(3);
        let all = enumerate_normal_forms(&c, 3);
        assert_eq!(all.len(), 1 + 4 + 8 + 16);
        let mut dedup = all.clone();
        dedup.sort_by_key(|x| x.display());
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }
}
