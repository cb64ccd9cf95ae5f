use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Gen, Word};

/// Generators and relators of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators that reduce to the identity are rejected.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        for (index, r) in relators.iter().enumerate() {
            alphabet.check(r)?;
            if r.is_identity() {
                return Err(Error::EmptyRelator { index });
            }
        }
        Ok(Presentation { alphabet, relators })
    }

    /// Same as [`Presentation::new`] but silently drops trivial relators.
    pub fn new_lenient(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        let relators = relators.into_iter().filter(|r| !r.is_identity()).collect();
        Presentation::new(alphabet, relators)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.alphabet.len()
    }

    pub fn gen(&self, name: &str) -> Result<Gen> {
        self.alphabet.get(name)
    }

    /// A copy with further relators appended.
    pub fn with_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut relators = self.relators.clone();
        for r in extra {
            self.alphabet.check(r)?;
            if !r.is_identity() {
                relators.push(r.clone());
            }
        }
        Ok(Presentation { alphabet: self.alphabet.clone(), relators })
    }

    pub fn into_parts(self) -> (Alphabet, Vec<Word>) {
        (self.alphabet, self.relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.alphabet.names().join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {}", r.display(&self.alphabet))?;
        }
        f.write_str(">")
    }
}
