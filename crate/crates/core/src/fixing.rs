//! Automata reading words in which one component is replaced by `□`, the
//! automaton substituting a fixed digit for it.

use thiserror::Error;

use crate::alphabet::{AlphabetError, EncodingKind, Symbol};
use crate::automaton::{Automaton, AutomatonError, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error("expected a {expected} automaton")]
    WrongEncoding { expected: EncodingKind },
    #[error("component {component} out of range for dimension {dim}")]
    ComponentOutOfRange { component: usize, dim: usize },
    #[error("component {0} is already fixed")]
    AlreadyFixed(usize),
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// An automaton over an alphabet with one more `□` component, together with
/// the component and digit it stands for.
#[derive(Debug, Clone)]
pub struct FixedAutomaton {
    pub automaton: Automaton,
    pub component: usize,
    pub digit: u32,
    /// Number of position classes per source state: 1 for parallel, `d` for
    /// sequential.
    classes: usize,
}

impl FixedAutomaton {
    /// State standing for source state `q` at position class `class`.
    pub fn state(&self, q: StateId, class: usize) -> StateId {
        debug_assert!(class < self.classes);
        q * self.classes + class
    }

    /// The fresh rejecting sink of a sequential construction.
    pub fn sink(&self) -> Option<StateId> {
        (self.automaton.alphabet().encoding() == EncodingKind::Sequential)
            .then(|| self.automaton.state_count() - 1)
    }
}

fn check_digit(aut: &Automaton, z: u32) -> Result<(), FixError> {
    let base = aut.alphabet().base();
    if z >= base {
        return Err(FixError::DigitOutOfRange { digit: z, base });
    }
    Ok(())
}

/// Same states; on a letter with `□` at `f`, moves as the source does on the
/// letter with `z` at `f`.
pub fn fix_parallel(aut: &Automaton, f: usize, z: u32) -> Result<FixedAutomaton, FixError> {
    let source = aut.alphabet();
    if source.encoding() != EncodingKind::Parallel {
        return Err(FixError::WrongEncoding {
            expected: EncodingKind::Parallel,
        });
    }
    if f >= source.dim() {
        return Err(FixError::ComponentOutOfRange {
            component: f,
            dim: source.dim(),
        });
    }
    if source.is_fixed(f) {
        return Err(FixError::AlreadyFixed(f));
    }
    check_digit(aut, z)?;
    let alphabet = source.fixing(f)?;
    // source letter for each fixed letter
    let letter_map: Vec<usize> = alphabet
        .letters()
        .map(|a| {
            if alphabet.is_star(a) {
                return source.star();
            }
            let mut symbols = alphabet.symbols(a);
            symbols[f] = Symbol::Digit(z);
            source
                .letter_index(&crate::alphabet::Letter::Column(symbols))
                .expect("substituted letter is valid")
        })
        .collect();
    let n = aut.state_count();
    let mut delta = Vec::with_capacity(n * letter_map.len());
    for q in 0..n {
        let row = aut.row(q);
        delta.extend(letter_map.iter().map(|&a| row[a]));
    }
    let automaton = Automaton::new(alphabet, n, aut.initial(), aut.accepting_states(), delta)?;
    Ok(FixedAutomaton {
        automaton,
        component: f,
        digit: z,
        classes: 1,
    })
}

/// Sequential version, fixing the last component of each `d`-block: states
/// are pairs (q, i) with `i` counting digits modulo `d`, plus a fresh sink.
/// Digits are read at classes `0..d-1`, `□` (standing for `z`) only at class
/// `d - 1`, and `*` keeps the class. State (q, i) is numbered `q * d + i`.
pub fn fix_sequential(aut: &Automaton, z: u32) -> Result<FixedAutomaton, FixError> {
    let source = aut.alphabet();
    if source.encoding() != EncodingKind::Sequential || !source.fixed().is_empty() {
        return Err(FixError::WrongEncoding {
            expected: EncodingKind::Sequential,
        });
    }
    check_digit(aut, z)?;
    let d = source.dim();
    let alphabet = source.fixing(d - 1)?;
    let boxed = alphabet.box_letter().expect("fixed sequential alphabet");
    let star = alphabet.star();
    let n = aut.state_count();
    let sink = n * d;
    let letters = alphabet.letter_count();
    let mut delta = Vec::with_capacity((sink + 1) * letters);
    for q in 0..n {
        for i in 0..d {
            for a in 0..letters {
                delta.push(if a == star {
                    aut.step(q, source.star()) * d + i
                } else if a == boxed {
                    if i == d - 1 {
                        aut.step(q, z as usize) * d
                    } else {
                        sink
                    }
                } else if i < d - 1 {
                    aut.step(q, a) * d + i + 1
                } else {
                    sink
                });
            }
        }
    }
    delta.extend(std::iter::repeat_n(sink, letters));
    let accepting = aut
        .accepting_states()
        .flat_map(|q| (0..d).map(move |i| q * d + i));
    let automaton = Automaton::new(alphabet, sink + 1, aut.initial() * d, accepting, delta)?;
    Ok(FixedAutomaton {
        automaton,
        component: d - 1,
        digit: z,
        classes: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{AlphabetSpec, Letter};
    use crate::samples::leading_pattern;
    use crate::word::parse_letters;

    #[test]
    fn parallel_fix_substitutes_digit() {
        let alphabet = AlphabetSpec::parallel(2, 2).unwrap();
        let letters = alphabet.letter_count();
        // state q goes to the index of the letter read, star to 0
        let delta: Vec<usize> = (0..letters)
            .flat_map(|_| (0..letters).map(|a| a % letters))
            .collect();
        let a = Automaton::new(alphabet.clone(), letters, 0, [], delta).unwrap();
        let fixed = fix_parallel(&a, 0, 1).unwrap();
        let fa = &fixed.automaton;
        assert_eq!(fa.letter_count(), 3);
        let boxed = fa
            .alphabet()
            .letter_index(&Letter::Column(vec![Symbol::Box, Symbol::Digit(0)]))
            .unwrap();
        assert_eq!(fa.step(0, boxed), alphabet.letter_index(&Letter::digits(&[1, 0])).unwrap());
        assert_eq!(fa.step(0, fa.alphabet().star()), a.step(0, alphabet.star()));
    }

    #[test]
    fn parallel_fix_preserves_weakness() {
        let a = leading_pattern();
        for z in 0..3 {
            let fixed = fix_parallel(&a, 0, z).unwrap();
            assert!(fixed.automaton.is_weak());
            assert_eq!(fixed.automaton.letter_count(), 2);
        }
    }

    #[test]
    fn parallel_fix_rejects_bad_arguments() {
        let a = leading_pattern();
        assert!(matches!(fix_parallel(&a, 1, 0), Err(FixError::ComponentOutOfRange { .. })));
        assert!(matches!(fix_parallel(&a, 0, 3), Err(FixError::DigitOutOfRange { .. })));
        let once = fix_parallel(&a, 0, 0).unwrap().automaton;
        assert!(matches!(fix_parallel(&once, 0, 0), Err(FixError::AlreadyFixed(0))));
        assert!(matches!(fix_sequential(&a, 0), Err(FixError::WrongEncoding { .. })));
    }

    #[test]
    fn sequential_fix_structure() {
        let d = 2;
        let alphabet = AlphabetSpec::sequential(2, d).unwrap();
        // q0 -digits-> q1 -digits-> q0, star from q0 -> q2 accepting loop, sink q3
        #[rustfmt::skip]
        let delta = vec![
            1, 1, 2,
            0, 0, 3,
            2, 2, 3,
            3, 3, 3,
        ];
        let a = Automaton::new(alphabet, 4, 0, [2], delta).unwrap();
        let fixed = fix_sequential(&a, 1).unwrap();
        let fa = &fixed.automaton;
        assert_eq!(fa.state_count(), 4 * d + 1);
        assert_eq!(fa.letter_count(), 4);
        assert!(fa.is_weak());
        assert_eq!(fixed.sink(), Some(8));
        let w = parse_letters("0 _ 1 _ *", fa.alphabet()).unwrap();
        assert_eq!(fa.run(fa.initial(), &w), fixed.state(2, 0));
        // □ in class 0, or a digit in class 1, is dead
        let bad = parse_letters("_", fa.alphabet()).unwrap();
        assert_eq!(fa.run(fa.initial(), &bad), 8);
        let bad = parse_letters("0 1", fa.alphabet()).unwrap();
        assert_eq!(fa.run(fa.initial(), &bad), 8);
        assert!(fa.accepts_lasso(&parse_letters("0 _ *", fa.alphabet()).unwrap(), &parse_letters("1 _", fa.alphabet()).unwrap()));
        assert!(!fa.accepts_lasso(&parse_letters("0 _ *", fa.alphabet()).unwrap(), &parse_letters("1", fa.alphabet()).unwrap()));
    }
}
