//! Exact word arithmetic in a finitely generated free group.
//!
//! Words are kept freely reduced at all times: every constructor and every
//! operation returns the canonical reduced form, so equality of values is
//! equality in the group.

mod parse;

pub use parse::{parse_template, WordExpr};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator names must be nonempty")]
    EmptyGeneratorName,
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown generator `{name}` at byte {pos}")]
    UnknownGenerator { pos: usize, name: String },
    #[error("unbound parameter `m` at byte {pos}")]
    UnboundParameter { pos: usize },
    #[error("ad power must be nonnegative, got {0}")]
    NegativeAdPower(i64),
}

/// A named free-group generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    name: String,
}

impl Generator {
    pub fn name(&self) -> &str {
        &self.name
    }
}

/// An ordered alphabet of generators with unique nonempty names.
#[derive(Debug, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Self>, FreeGroupError> {
        let mut gens: Vec<Generator> = Vec::new();
        for name in names {
            let name = name.into();
            if name.is_empty() {
                return Err(FreeGroupError::EmptyGeneratorName);
            }
            if gens.iter().any(|g| g.name == name) {
                return Err(FreeGroupError::DuplicateGenerator(name));
            }
            gens.push(Generator { name });
        }
        Ok(Arc::new(Alphabet { gens }))
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.gens[index].name
    }
}

/// One letter of a word: a generator index together with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    fn inverted(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A freely reduced word over a shared alphabet. The empty word is the
/// identity.
#[derive(Debug, Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.same_alphabet(other) && self.letters == other.letters
    }
}

impl Eq for Word {}

impl Word {
    pub fn identity(alphabet: Arc<Alphabet>) -> Word {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn generator(alphabet: Arc<Alphabet>, index: usize) -> Word {
        assert!(index < alphabet.rank(), "generator index out of range");
        Word {
            alphabet,
            letters: vec![Letter {
                gen: index,
                inverse: false,
            }],
        }
    }

    /// Builds a word from raw letters, applying free reduction.
    pub fn from_letters(
        alphabet: Arc<Alphabet>,
        letters: impl IntoIterator<Item = Letter>,
    ) -> Word {
        let mut reduced: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l.gen < alphabet.rank(), "letter index out of range");
            match reduced.last() {
                Some(&last) if last.cancels(l) => {
                    reduced.pop();
                }
                _ => reduced.push(l),
            }
        }
        Word {
            alphabet,
            letters: reduced,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_alphabet(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || *self.alphabet == *other.alphabet
    }

    /// Reduced concatenation `self · other`.
    pub fn multiply(&self, other: &Word) -> Result<Word, FreeGroupError> {
        if !self.same_alphabet(other) {
            return Err(FreeGroupError::AlphabetMismatch);
        }
        Ok(Word::from_letters(
            self.alphabet.clone(),
            self.letters.iter().chain(other.letters.iter()).copied(),
        ))
    }

    pub fn invert(&self) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Group commutator `u v u⁻¹ v⁻¹`, reduced.
    pub fn commutator(&self, other: &Word) -> Result<Word, FreeGroupError> {
        if !self.same_alphabet(other) {
            return Err(FreeGroupError::AlphabetMismatch);
        }
        Ok(Word::from_letters(
            self.alphabet.clone(),
            self.letters
                .iter()
                .copied()
                .chain(other.letters.iter().copied())
                .chain(self.letters.iter().rev().map(|l| l.inverted()))
                .chain(other.letters.iter().rev().map(|l| l.inverted())),
        ))
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.invert()
        } else {
            self.clone()
        };
        let mut letters = Vec::with_capacity(base.letters.len() * exponent.unsigned_abs() as usize);
        for _ in 0..exponent.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word::from_letters(self.alphabet.clone(), letters)
    }

    /// `ad(self)^m(other)`: the m-fold iterated commutator
    /// `[self, [self, … [self, other]]]`, with `ad^0(other) = other`.
    pub fn ad(&self, m: u32, other: &Word) -> Result<Word, FreeGroupError> {
        let mut acc = other.clone();
        for _ in 0..m {
            acc = self.commutator(&acc)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    /// Prints in the same syntax `parse` accepts; the identity prints as `()`.
    /// Runs of a repeated letter collapse to a power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "()");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self.alphabet.name(l.gen);
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Parses a word expression over the given alphabet. The grammar supports
/// concatenation, `^` powers, `[u, v]` commutators and `ad(u)^m(v)`;
/// see the crate documentation for the full grammar.
pub fn parse(text: &str, alphabet: &Arc<Alphabet>) -> Result<Word, FreeGroupError> {
    parse::parse_template(text)?.instantiate(alphabet, None)
}
