//! Deciding whether a weak deterministic Büchi automaton over base-b digit
//! alphabets recognizes a set of real vectors, that is, whether its language
//! is closed under taking alternative encodings of the same vector.

pub mod alphabet;
pub mod automaton;
pub mod check;
pub mod encoding;
pub mod fixing;
pub mod format;
pub mod functional;
pub mod generate;
pub mod minimize;
pub mod oracle;
pub mod samples;
pub mod scc;
pub mod shape;
pub mod word;
