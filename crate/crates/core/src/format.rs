//! Line-oriented text format for automata.
//!
//! ```text
//! rva-automaton v1
//! base: 3
//! dim: 1
//! encoding: parallel
//! states: 2
//! initial: 0
//! accepting: 1
//! transitions:
//! 0 0 -> 0
//! ...
//! ```
//!
//! `#` starts a comment. An optional `fixed:` line after `encoding:` lists
//! components replaced by `_`. Letters are written as in word literals.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::alphabet::{AlphabetSpec, EncodingKind};
use crate::automaton::{Automaton, AutomatonError};
use crate::word::parse_letter;

pub const HEADER: &str = "rva-automaton v1";

/// Largest transition table the parser will allocate.
pub const MAX_TABLE_CELLS: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatErrorKind {
    #[error("expected header `{HEADER}`")]
    Header,
    #[error("expected `{0}:`")]
    ExpectedField(&'static str),
    #[error("expected `transitions:`")]
    ExpectedTransitions,
    #[error("`{0}` is not a number")]
    BadNumber(String),
    #[error("unknown encoding `{0}`")]
    UnknownEncoding(String),
    #[error("expected `<src> <letter> -> <dst>`")]
    BadTransition,
    #[error("state {state} out of range ({states} states)")]
    StateOutOfRange { state: usize, states: usize },
    #[error("letter `{token}`: {message}")]
    BadLetter { token: String, message: String },
    #[error("duplicate transition from state {state} on `{letter}`")]
    DuplicateTransition { state: usize, letter: String },
    #[error("{0}")]
    Invalid(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

/// A format error with its 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub kind: FormatErrorKind,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

/// A non-blank line: 1-based number, its text without comment, and the raw
/// line for column numbers.
struct Line<'a> {
    number: usize,
    text: &'a str,
    raw: &'a str,
}

impl<'a> Line<'a> {
    fn error(&self, token: &str, kind: FormatErrorKind) -> FormatError {
        // column of `token` inside the raw line, when it is a subslice
        let start = self.raw.as_ptr() as usize;
        let at = token.as_ptr() as usize;
        let column = if at >= start && at <= start + self.raw.len() {
            at - start + 1
        } else {
            1
        };
        FormatError {
            line: self.number,
            column,
            kind,
        }
    }

    /// Value of `name: value`, or an error.
    fn field(&self, name: &'static str) -> Result<&'a str, FormatError> {
        let (key, value) = self
            .text
            .split_once(':')
            .ok_or_else(|| self.error(self.text, FormatErrorKind::ExpectedField(name)))?;
        if key.trim() != name {
            return Err(self.error(self.text, FormatErrorKind::ExpectedField(name)));
        }
        Ok(value.trim())
    }

    fn number(&self, token: &str) -> Result<usize, FormatError> {
        token
            .parse()
            .map_err(|_| self.error(token, FormatErrorKind::BadNumber(token.to_string())))
    }
}

fn significant(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let code = raw.split('#').next().unwrap_or("").trim();
        (!code.is_empty()).then_some(Line {
            number: i + 1,
            text: code,
            raw,
        })
    })
}

/// Parses the text format. With `complete_with_sink`, missing transitions go
/// to a fresh rejecting sink; otherwise they are an error.
pub fn parse_automaton(text: &str, complete_with_sink: bool) -> Result<Automaton, FormatError> {
    let mut lines = significant(text).peekable();
    let last_line = text.lines().count().max(1);
    let end = || FormatError {
        line: last_line,
        column: 1,
        kind: FormatErrorKind::UnexpectedEnd,
    };
    let mut next = || lines.next().ok_or_else(end);

    let header = next()?;
    if header.text.split_whitespace().collect::<Vec<_>>() != HEADER.split(' ').collect::<Vec<_>>() {
        return Err(header.error(header.text, FormatErrorKind::Header));
    }
    let line = next()?;
    let base_token = line.field("base")?;
    let base = u32::try_from(line.number(base_token)?)
        .map_err(|_| line.error(base_token, FormatErrorKind::BadNumber(base_token.to_string())))?;
    let line = next()?;
    let dim = line.number(line.field("dim")?)?;
    let line = next()?;
    let enc = line.field("encoding")?;
    let encoding = match enc {
        "parallel" => EncodingKind::Parallel,
        "sequential" => EncodingKind::Sequential,
        other => return Err(line.error(other, FormatErrorKind::UnknownEncoding(other.to_string()))),
    };
    let mut line = next()?;
    let mut fixed = BTreeSet::new();
    if line.text.starts_with("fixed") {
        for token in line.field("fixed")?.split_whitespace() {
            fixed.insert(line.number(token)?);
        }
        line = next()?;
    }
    let alphabet = AlphabetSpec::with_fixed(base, dim, encoding, fixed)
        .map_err(|e| line.error(line.text, FormatErrorKind::Invalid(e.to_string())))?;
    let states = line.number(line.field("states")?)?;
    let line = next()?;
    let initial_token = line.field("initial")?;
    let initial = line.number(initial_token)?;
    if initial >= states {
        return Err(line.error(initial_token, FormatErrorKind::StateOutOfRange { state: initial, states }));
    }
    let line = next()?;
    let mut accepting = Vec::new();
    for token in line.field("accepting")?.split_whitespace() {
        let q = line.number(token)?;
        if q >= states {
            return Err(line.error(token, FormatErrorKind::StateOutOfRange { state: q, states }));
        }
        accepting.push(q);
    }
    let line = next()?;
    if line.text != "transitions:" {
        return Err(line.error(line.text, FormatErrorKind::ExpectedTransitions));
    }

    let cells = u64::from(base)
        .checked_pow(u32::try_from(dim).unwrap_or(u32::MAX))
        .and_then(|l| l.checked_mul(states as u64));
    if cells.is_none_or(|c| c > MAX_TABLE_CELLS) {
        return Err(line.error(
            line.text,
            FormatErrorKind::Invalid(format!("transition table over {MAX_TABLE_CELLS} entries")),
        ));
    }
    let letters = alphabet.letter_count();
    let mut delta = vec![None; states * letters];
    for line in lines {
        let tokens: Vec<&str> = line.text.split_whitespace().collect();
        if tokens.len() != 4 || tokens[2] != "->" {
            return Err(line.error(line.text, FormatErrorKind::BadTransition));
        }
        let state = |token: &str| -> Result<usize, FormatError> {
            let q = line.number(token)?;
            if q >= states {
                return Err(line.error(token, FormatErrorKind::StateOutOfRange { state: q, states }));
            }
            Ok(q)
        };
        let src = state(tokens[0])?;
        let dst = state(tokens[3])?;
        let bad_letter = |message: String| {
            line.error(
                tokens[1],
                FormatErrorKind::BadLetter {
                    token: tokens[1].to_string(),
                    message,
                },
            )
        };
        let letter = parse_letter(tokens[1]).map_err(|e| bad_letter(e.to_string()))?;
        let a = alphabet
            .letter_index(&letter)
            .map_err(|e| bad_letter(e.to_string()))?;
        let slot = &mut delta[src * letters + a];
        if slot.is_some() {
            return Err(line.error(
                tokens[1],
                FormatErrorKind::DuplicateTransition {
                    state: src,
                    letter: tokens[1].to_string(),
                },
            ));
        }
        *slot = Some(dst);
    }
    Automaton::from_partial(alphabet, states, initial, accepting, delta, complete_with_sink).map_err(
        |e: AutomatonError| FormatError {
            line: last_line,
            column: 1,
            kind: FormatErrorKind::Invalid(e.to_string()),
        },
    )
}

/// Canonical text: states ascending, letters by index.
pub fn serialize_automaton(aut: &Automaton) -> String {
    let alphabet = aut.alphabet();
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "base: {}", alphabet.base());
    let _ = writeln!(out, "dim: {}", alphabet.dim());
    let _ = writeln!(out, "encoding: {}", alphabet.encoding());
    if !alphabet.fixed().is_empty() {
        let fixed: Vec<String> = alphabet.fixed().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "fixed: {}", fixed.join(" "));
    }
    let _ = writeln!(out, "states: {}", aut.state_count());
    let _ = writeln!(out, "initial: {}", aut.initial());
    let accepting: Vec<String> = aut.accepting_states().map(|q| q.to_string()).collect();
    if accepting.is_empty() {
        let _ = writeln!(out, "accepting:");
    } else {
        let _ = writeln!(out, "accepting: {}", accepting.join(" "));
    }
    let _ = writeln!(out, "transitions:");
    for q in 0..aut.state_count() {
        for (a, &p) in aut.row(q).iter().enumerate() {
            let _ = writeln!(out, "{q} {} -> {p}", alphabet.describe(a));
        }
    }
    out
}
