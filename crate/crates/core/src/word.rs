//! Free-group words in syllable (run-length) form.
//!
//! Commutators follow the convention `[x, y] = x^-1 y^-1 x y`. Every check on
//! the two-generator families depends on this; the opposite convention
//! produces different groups.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator, identified by its position in an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gen(pub u32);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered list of pairwise distinct generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, Gen>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic()) && chars.all(|c| c.is_alphanumeric())
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet { names: Vec::new(), lookup: HashMap::new() };
        for name in names {
            out.push(name.into())?;
        }
        Ok(out)
    }

    pub fn push(&mut self, name: String) -> Result<Gen> {
        if !valid_name(&name) {
            return Err(Error::InvalidGeneratorName(name));
        }
        if self.lookup.contains_key(&name) {
            return Err(Error::DuplicateGenerator(name));
        }
        let g = Gen(self.names.len() as u32);
        self.lookup.insert(name.clone(), g);
        self.names.push(name);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Result<Gen> {
        self.lookup.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.lookup.contains_key(name)
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.names.len() as u32).map(Gen)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.syllables().iter().find(|(g, _)| g.index() >= self.len()) {
            Some((g, _)) => Err(Error::GeneratorOutOfRange { index: g.index(), size: self.len() }),
            None => Ok(()),
        }
    }
}

/// A freely reduced word: adjacent syllables never share a generator and no
/// exponent is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<(Gen, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Gen) -> Self {
        Word { syllables: vec![(g, 1)] }
    }

    pub fn power_of(g: Gen, e: i64) -> Self {
        let mut w = Word::identity();
        w.push(g, e);
        w
    }

    /// Builds the freely reduced form of an arbitrary syllable sequence.
    pub fn from_syllables<I: IntoIterator<Item = (Gen, i64)>>(raw: I) -> Self {
        let mut w = Word::identity();
        for (g, e) in raw {
            w.push(g, e);
        }
        w
    }

    /// Appends `g^e`, cancelling against the tail.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    pub fn syllables(&self) -> &[(Gen, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    /// Length as a sequence of letters `g` and `g^-1`.
    pub fn letter_len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    /// Letter-by-letter expansion as `(generator, +1 or -1)`.
    pub fn letters(&self) -> impl Iterator<Item = (Gen, i64)> + '_ {
        self.syllables
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.syllables.iter().map(|&(g, _)| g)
    }

    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.syllables.iter().filter(|(h, _)| *h == g).map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &(g, e) in &other.syllables {
            out.push(g, e);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word { syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().mul(&y.inverse()).mul(x).mul(y)
    }

    /// Left-normed commutator `[x1, x2, ..., xn] = [[x1, ..., x(n-1)], xn]`.
    pub fn left_normed(parts: &[Word]) -> Word {
        let mut iter = parts.iter();
        let Some(first) = iter.next() else {
            return Word::identity();
        };
        iter.fold(first.clone(), |acc, x| Word::commutator(&acc, x))
    }

    /// `t^-1 w t`.
    pub fn conjugate_by(&self, t: &Word) -> Word {
        t.inverse().mul(self).mul(t)
    }

    /// Applies the endomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut out = Word::identity();
        for &(g, e) in &self.syllables {
            let image = images
                .get(g.index())
                .ok_or_else(|| Error::MissingImage(format!("#{}", g.index())))?;
            out = out.mul(&image.pow(e));
        }
        Ok(out)
    }

    /// Like [`Word::substitute`], but generators without an image map to
    /// themselves only if `keep_unmapped` is set.
    pub fn substitute_map(&self, images: &HashMap<Gen, Word>, keep_unmapped: bool) -> Result<Word> {
        let mut out = Word::identity();
        for &(g, e) in &self.syllables {
            match images.get(&g) {
                Some(image) => out = out.mul(&image.pow(e)),
                None if keep_unmapped => out.push(g, e),
                None => return Err(Error::MissingImage(format!("#{}", g.index()))),
            }
        }
        Ok(out)
    }

    /// Removes a conjugating prefix/suffix pair, returning the cyclically
    /// reduced core.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.syllables.clone();
        while s.len() >= 2 && s[0].0 == s[s.len() - 1].0 {
            let (_, first) = s.remove(0);
            let last = s.len() - 1;
            s[last].1 += first;
            if s[last].1 == 0 {
                s.pop();
            }
        }
        Word { syllables: s }
    }

    /// Rotations of a cyclically reduced word by whole syllables, and the
    /// same for its inverse.
    pub fn cyclic_variants(&self) -> Vec<Word> {
        let core = self.cyclically_reduced();
        let mut out = Vec::new();
        for w in [core.clone(), core.inverse()] {
            let n = w.syllables.len();
            for i in 0..n.max(1) {
                let mut s = w.syllables[i..].to_vec();
                s.extend_from_slice(&w.syllables[..i]);
                out.push(Word { syllables: s });
            }
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.alphabet.name(g))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Free reduction of a raw list of named syllables.
pub fn free_reduce(alphabet: &Alphabet, raw: &[(&str, i64)]) -> Result<Word> {
    let mut w = Word::identity();
    for &(name, e) in raw {
        w.push(alphabet.get(name)?, e);
    }
    Ok(w)
}

/// All left-normed commutators of weight exactly `class` in the generators,
/// skipping those that are trivial in the free group. Their normal closure is
/// the `class`-th term of the lower central series.
pub fn lcs_relators(alphabet: &Alphabet, class: usize) -> Result<Vec<Word>> {
    if class < 2 {
        return Err(Error::InvalidClass(class));
    }
    let gens: Vec<Word> = alphabet.gens().map(Word::generator).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Word, usize)> = gens.iter().map(|g| (g.clone(), 1)).collect();
    // depth-first in lexicographic generator order
    stack.reverse();
    while let Some((w, weight)) = stack.pop() {
        if weight == class {
            if !w.is_identity() {
                out.push(w);
            }
            continue;
        }
        if w.is_identity() {
            continue;
        }
        for g in gens.iter().rev() {
            stack.push((Word::commutator(&w, g), weight + 1));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(raw: &[(u32, i64)]) -> Word {
        Word::from_syllables(raw.iter().map(|&(g, e)| (Gen(g), e)))
    }

    #[test]
    fn free_reduce_examples() {
        let al = ab();
        assert!(free_reduce(&al, &[("a", 1), ("a", -1)]).unwrap().is_identity());
        assert_eq!(free_reduce(&al, &[("a", 2), ("a", 3)]).unwrap(), w(&[(0, 5)]));
        assert_eq!(
            free_reduce(&al, &[("a", 1), ("b", 1), ("b", -1), ("a", 1)]).unwrap(),
            w(&[(0, 2)])
        );
        assert_eq!(
            free_reduce(&al, &[("c", 1)]),
            Err(Error::UnknownGenerator("c".into()))
        );
    }

    #[test]
    fn multiply_and_invert() {
        let a = w(&[(0, 1)]);
        assert!(a.mul(&a.inverse()).is_identity());
        let ab = w(&[(0, 1), (1, 1)]);
        let b_inv_a = w(&[(1, -1), (0, 1)]);
        assert_eq!(ab.mul(&b_inv_a), w(&[(0, 2)]));
        assert_eq!(Word::identity().mul(&ab), ab);
        assert_eq!(w(&[(0, 2), (1, -1)]).inverse(), w(&[(1, 1), (0, -2)]));
        assert!(Word::identity().inverse().is_identity());
    }

    #[test]
    fn commutator_convention() {
        let a = Word::generator(Gen(0));
        let b = Word::generator(Gen(1));
        assert!(Word::commutator(&a, &a).is_identity());
        assert_eq!(Word::commutator(&a, &b), w(&[(0, -1), (1, -1), (0, 1), (1, 1)]));
        // gamma [b, gamma] = gamma b^-1 gamma^-1 b gamma
        let gamma = w(&[(0, 1), (1, 2)]);
        let lhs = gamma.mul(&Word::commutator(&b, &gamma));
        let rhs = gamma.mul(&b.inverse()).mul(&gamma.inverse()).mul(&b).mul(&gamma);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_examples() {
        let a = Word::generator(Gen(0));
        let b = Word::generator(Gen(1));
        let p = 3;
        // a -> a[a^p, b]
        let img = a.mul(&Word::commutator(&a.pow(p), &b));
        let out = a.substitute(&[img.clone(), b.clone()]).unwrap();
        assert_eq!(out, w(&[(0, 1 - p), (1, -1), (0, p), (1, 1)]));
        // a^p under a -> a[b, a]
        let img = a.mul(&Word::commutator(&b, &a));
        let out = a.pow(p).substitute(&[img.clone(), b.clone()]).unwrap();
        assert_eq!(out, img.pow(p));
        let x = w(&[(0, 2), (1, -3), (0, 1)]);
        assert_eq!(x.substitute(&[a.clone(), b.clone()]).unwrap(), x);
        assert!(matches!(x.substitute(&[a]), Err(Error::MissingImage(_))));
    }

    #[test]
    fn lcs_relator_sets() {
        let al = ab();
        let a = Word::generator(Gen(0));
        let b = Word::generator(Gen(1));
        let two = lcs_relators(&al, 2).unwrap();
        assert_eq!(two, vec![Word::commutator(&a, &b), Word::commutator(&b, &a)]);
        let three = lcs_relators(&al, 3).unwrap();
        let ab_ = Word::commutator(&a, &b);
        let ba = Word::commutator(&b, &a);
        let expected = vec![
            Word::commutator(&ab_, &a),
            Word::commutator(&ab_, &b),
            Word::commutator(&ba, &a),
            Word::commutator(&ba, &b),
        ];
        assert_eq!(three, expected);
        let one = Alphabet::new(["a"]).unwrap();
        assert!(lcs_relators(&one, 2).unwrap().is_empty());
        assert_eq!(lcs_relators(&al, 1), Err(Error::InvalidClass(1)));
    }

    #[test]
    fn cyclic_reduction() {
        let x = w(&[(0, 1), (1, 2), (0, -1)]);
        assert_eq!(x.cyclically_reduced(), w(&[(1, 2)]));
        let y = w(&[(0, 2), (1, 1), (0, 1)]);
        assert_eq!(y.cyclically_reduced(), w(&[(1, 1), (0, 3)]));
    }

    #[test]
    fn alphabet_validation() {
        assert!(matches!(Alphabet::new(["a", "a"]), Err(Error::DuplicateGenerator(_))));
        assert!(matches!(Alphabet::new(["1a"]), Err(Error::InvalidGeneratorName(_))));
        assert!(matches!(Alphabet::new(["a_b"]), Err(Error::InvalidGeneratorName(_))));
        assert!(Alphabet::new(["x1", "x2"]).is_ok());
    }
}
