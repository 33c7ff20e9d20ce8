//! Word literals.
//!
//! Letters are separated by whitespace. A parallel letter is a comma-joined
//! list of digits (`1,0`), a sequential letter a single digit, `*` is the
//! separator and `_` the fixed-component marker. An optional `/` splits a
//! lasso into prefix and period: `1,0 0,0 * / 1,0`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::{AlphabetError, AlphabetSpec, Letter, LetterIndex, Symbol};
use crate::encoding::Lasso;

/// An ultimately periodic word over letters.
pub type LassoWord = Lasso<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("bad symbol `{0}`")]
    BadSymbol(String),
    #[error("more than one `/` in word literal")]
    TwoSeparators,
    #[error("a lasso word needs a nonempty period after `/`")]
    EmptyPeriod,
    #[error("letter `{token}`: {source}")]
    Letter {
        token: String,
        #[source]
        source: AlphabetError,
    },
}

pub fn parse_letter(token: &str) -> Result<Letter, WordError> {
    if token == "*" {
        return Ok(Letter::Star);
    }
    let symbols = token
        .split(',')
        .map(|s| match s {
            "_" => Ok(Symbol::Box),
            _ => s
                .parse::<u32>()
                .map(Symbol::Digit)
                .map_err(|_| WordError::BadSymbol(s.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Letter::Column(symbols))
}

/// Parses a finite sequence of letters (no `/`).
pub fn parse_finite(text: &str) -> Result<Vec<Letter>, WordError> {
    text.split_whitespace().map(parse_letter).collect()
}

/// Parses `prefix / period`. Without `/` the whole literal is a finite word
/// and the period is empty.
pub fn parse_lasso(text: &str) -> Result<LassoWord, WordError> {
    let mut parts = text.split('/');
    let prefix = parse_finite(parts.next().unwrap_or(""))?;
    let period = match parts.next() {
        Some(p) => {
            let period = parse_finite(p)?;
            if period.is_empty() {
                return Err(WordError::EmptyPeriod);
            }
            period
        }
        None => Vec::new(),
    };
    if parts.next().is_some() {
        return Err(WordError::TwoSeparators);
    }
    Ok(Lasso::new(prefix, period))
}

pub fn to_indices(letters: &[Letter], alphabet: &AlphabetSpec) -> Result<Vec<LetterIndex>, WordError> {
    letters
        .iter()
        .map(|l| {
            alphabet.letter_index(l).map_err(|source| WordError::Letter {
                token: l.to_string(),
                source,
            })
        })
        .collect()
}

/// Parses a finite literal straight to letter indices.
pub fn parse_letters(text: &str, alphabet: &AlphabetSpec) -> Result<Vec<LetterIndex>, WordError> {
    to_indices(&parse_finite(text)?, alphabet)
}

pub fn format_letters(letters: &[Letter]) -> String {
    let mut out = String::new();
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{l}");
    }
    out
}

pub fn format_indices(word: &[LetterIndex], alphabet: &AlphabetSpec) -> String {
    word.iter()
        .map(|&a| alphabet.describe(a))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn format_lasso(word: &LassoWord) -> String {
    if word.period.is_empty() {
        return format_letters(&word.prefix);
    }
    let prefix = format_letters(&word.prefix);
    let period = format_letters(&word.period);
    if prefix.is_empty() {
        format!("/ {period}")
    } else {
        format!("{prefix} / {period}")
    }
}

/// A lasso given as letter indices, rendered back into letters.
pub fn lasso_from_indices(
    prefix: &[LetterIndex],
    period: &[LetterIndex],
    alphabet: &AlphabetSpec,
) -> LassoWord {
    let conv = |w: &[LetterIndex]| -> Vec<Letter> {
        w.iter()
            .map(|&a| alphabet.letter(a).expect("letter index in range"))
            .collect()
    };
    Lasso::new(conv(prefix), conv(period))
}
