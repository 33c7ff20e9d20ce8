//! Digit alphabets and letter indexing.
//!
//! Every automaton reads letters from an [`AlphabetSpec`]. Letters are stored
//! internally as dense indices: the non-`*` letters come first, ordered by
//! their mixed-radix value with component 0 most significant, and the
//! separator `*` is always the last index.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a letter inside an alphabet.
pub type LetterIndex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    /// One letter carries a digit of every component.
    Parallel,
    /// Digits of the components are interleaved, one per letter.
    Sequential,
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingKind::Parallel => f.write_str("parallel"),
            EncodingKind::Sequential => f.write_str("sequential"),
        }
    }
}

/// A symbol inside a letter: a digit or the fixed-component marker `□`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Digit(u32),
    Box,
}

impl Symbol {
    pub fn digit(self) -> Option<u32> {
        match self {
            Symbol::Digit(d) => Some(d),
            Symbol::Box => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Digit(d) => write!(f, "{d}"),
            Symbol::Box => f.write_str("_"),
        }
    }
}

/// A letter: the separator, or a column of symbols (one symbol for sequential
/// alphabets, `dim` symbols for parallel ones).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Star,
    Column(Vec<Symbol>),
}

impl Letter {
    pub fn digits(digits: &[u32]) -> Letter {
        Letter::Column(digits.iter().map(|&d| Symbol::Digit(d)).collect())
    }

    pub fn is_star(&self) -> bool {
        matches!(self, Letter::Star)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Star => f.write_str("*"),
            Letter::Column(symbols) => {
                for (i, s) in symbols.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("dimension must be at least 1")]
    BadDimension,
    #[error("fixed component {index} is out of range for dimension {dim}")]
    FixedOutOfRange { index: usize, dim: usize },
    #[error("letter has {got} symbols, expected {expected}")]
    WrongWidth { got: usize, expected: usize },
    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("□ used in component {0}, which is not fixed")]
    BoxInFreeComponent(usize),
    #[error("digit used in fixed component {0}")]
    DigitInFixedComponent(usize),
    #[error("letter index {index} out of range ({count} letters)")]
    IndexOutOfRange { index: usize, count: usize },
}

/// Base, dimension and encoding of an alphabet, plus the set of components
/// that have been replaced by `□`.
///
/// For parallel alphabets there are `b^(d - |fixed|)` non-separator letters.
/// For sequential alphabets there are `b` digit letters, plus one `□` letter
/// when some component is fixed; `dim` only describes word structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphabetSpec {
    base: u32,
    dim: usize,
    encoding: EncodingKind,
    fixed: BTreeSet<usize>,
}

impl AlphabetSpec {
    pub fn new(base: u32, dim: usize, encoding: EncodingKind) -> Result<Self, AlphabetError> {
        Self::with_fixed(base, dim, encoding, BTreeSet::new())
    }

    pub fn parallel(base: u32, dim: usize) -> Result<Self, AlphabetError> {
        Self::new(base, dim, EncodingKind::Parallel)
    }

    pub fn sequential(base: u32, dim: usize) -> Result<Self, AlphabetError> {
        Self::new(base, dim, EncodingKind::Sequential)
    }

    pub fn with_fixed(
        base: u32,
        dim: usize,
        encoding: EncodingKind,
        fixed: BTreeSet<usize>,
    ) -> Result<Self, AlphabetError> {
        if base < 2 {
            return Err(AlphabetError::BadBase(base));
        }
        if dim == 0 {
            return Err(AlphabetError::BadDimension);
        }
        if let Some(&index) = fixed.iter().find(|&&i| i >= dim) {
            return Err(AlphabetError::FixedOutOfRange { index, dim });
        }
        Ok(AlphabetSpec {
            base,
            dim,
            encoding,
            fixed,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn encoding(&self) -> EncodingKind {
        self.encoding
    }

    pub fn fixed(&self) -> &BTreeSet<usize> {
        &self.fixed
    }

    pub fn is_fixed(&self, component: usize) -> bool {
        self.fixed.contains(&component)
    }

    /// The same alphabet with one more component replaced by `□`.
    pub fn fixing(&self, component: usize) -> Result<Self, AlphabetError> {
        let mut fixed = self.fixed.clone();
        fixed.insert(component);
        Self::with_fixed(self.base, self.dim, self.encoding, fixed)
    }

    /// Number of symbols per letter.
    pub fn width(&self) -> usize {
        match self.encoding {
            EncodingKind::Parallel => self.dim,
            EncodingKind::Sequential => 1,
        }
    }

    /// Number of letters other than `*`.
    pub fn digit_letter_count(&self) -> usize {
        match self.encoding {
            EncodingKind::Parallel => {
                (self.base as usize).pow((self.dim - self.fixed.len()) as u32)
            }
            EncodingKind::Sequential => self.base as usize + usize::from(!self.fixed.is_empty()),
        }
    }

    pub fn letter_count(&self) -> usize {
        self.digit_letter_count() + 1
    }

    pub fn star(&self) -> LetterIndex {
        self.digit_letter_count()
    }

    pub fn is_star(&self, letter: LetterIndex) -> bool {
        letter == self.star()
    }

    /// Index of the `□` letter of a fixed sequential alphabet.
    pub fn box_letter(&self) -> Option<LetterIndex> {
        (self.encoding == EncodingKind::Sequential && !self.fixed.is_empty())
            .then_some(self.base as usize)
    }

    /// The letter whose free components are all zero.
    pub fn zero(&self) -> LetterIndex {
        0
    }

    /// The letter whose free components all equal `digit`.
    pub fn uniform(&self, digit: u32) -> LetterIndex {
        match self.encoding {
            EncodingKind::Sequential => digit as usize,
            EncodingKind::Parallel => {
                let free = self.dim - self.fixed.len();
                let mut index = 0usize;
                for _ in 0..free {
                    index = index * self.base as usize + digit as usize;
                }
                index
            }
        }
    }

    pub fn letter_index(&self, letter: &Letter) -> Result<LetterIndex, AlphabetError> {
        let symbols = match letter {
            Letter::Star => return Ok(self.star()),
            Letter::Column(symbols) => symbols,
        };
        if symbols.len() != self.width() {
            return Err(AlphabetError::WrongWidth {
                got: symbols.len(),
                expected: self.width(),
            });
        }
        match self.encoding {
            EncodingKind::Sequential => match symbols[0] {
                Symbol::Digit(d) if d < self.base => Ok(d as usize),
                Symbol::Digit(d) => Err(AlphabetError::DigitOutOfRange {
                    digit: d,
                    base: self.base,
                }),
                Symbol::Box => self.box_letter().ok_or(AlphabetError::BoxInFreeComponent(0)),
            },
            EncodingKind::Parallel => {
                let mut index = 0usize;
                for (component, symbol) in symbols.iter().enumerate() {
                    match (*symbol, self.is_fixed(component)) {
                        (Symbol::Box, true) => {}
                        (Symbol::Box, false) => {
                            return Err(AlphabetError::BoxInFreeComponent(component))
                        }
                        (Symbol::Digit(_), true) => {
                            return Err(AlphabetError::DigitInFixedComponent(component))
                        }
                        (Symbol::Digit(d), false) => {
                            if d >= self.base {
                                return Err(AlphabetError::DigitOutOfRange {
                                    digit: d,
                                    base: self.base,
                                });
                            }
                            index = index * self.base as usize + d as usize;
                        }
                    }
                }
                Ok(index)
            }
        }
    }

    pub fn letter(&self, index: LetterIndex) -> Result<Letter, AlphabetError> {
        if index >= self.letter_count() {
            return Err(AlphabetError::IndexOutOfRange {
                index,
                count: self.letter_count(),
            });
        }
        if index == self.star() {
            return Ok(Letter::Star);
        }
        Ok(Letter::Column(self.symbols(index)))
    }

    /// Symbols of a non-`*` letter.
    pub fn symbols(&self, index: LetterIndex) -> Vec<Symbol> {
        debug_assert!(index < self.star());
        match self.encoding {
            EncodingKind::Sequential => {
                if Some(index) == self.box_letter() {
                    vec![Symbol::Box]
                } else {
                    vec![Symbol::Digit(index as u32)]
                }
            }
            EncodingKind::Parallel => {
                let mut out = vec![Symbol::Box; self.dim];
                let mut rest = index;
                for component in (0..self.dim).rev() {
                    if !self.is_fixed(component) {
                        out[component] = Symbol::Digit((rest % self.base as usize) as u32);
                        rest /= self.base as usize;
                    }
                }
                out
            }
        }
    }

    /// Digit of `component` in a parallel letter, `None` for `*` or `□`.
    pub fn component(&self, index: LetterIndex, component: usize) -> Option<u32> {
        if index == self.star() || self.is_fixed(component) {
            return None;
        }
        match self.encoding {
            EncodingKind::Sequential => (Some(index) != self.box_letter()).then_some(index as u32),
            EncodingKind::Parallel => {
                let weight = self.weight(component);
                Some(((index / weight) % self.base as usize) as u32)
            }
        }
    }

    /// The parallel letter obtained by overwriting a free component.
    pub fn with_component(&self, index: LetterIndex, component: usize, digit: u32) -> LetterIndex {
        debug_assert!(self.encoding == EncodingKind::Parallel);
        debug_assert!(!self.is_fixed(component) && digit < self.base);
        let weight = self.weight(component);
        let current = (index / weight) % self.base as usize;
        index - current * weight + digit as usize * weight
    }

    // Positional weight of a free component in the mixed-radix order.
    fn weight(&self, component: usize) -> usize {
        let lower_free = ((component + 1)..self.dim)
            .filter(|c| !self.is_fixed(*c))
            .count();
        (self.base as usize).pow(lower_free as u32)
    }

    /// Iterator over all non-`*` letter indices.
    pub fn digit_letters(&self) -> std::ops::Range<LetterIndex> {
        0..self.star()
    }

    pub fn letters(&self) -> std::ops::Range<LetterIndex> {
        0..self.letter_count()
    }

    pub fn describe(&self, index: LetterIndex) -> String {
        self.letter(index)
            .map(|l| l.to_string())
            .unwrap_or_else(|_| format!("#{index}"))
    }
}
