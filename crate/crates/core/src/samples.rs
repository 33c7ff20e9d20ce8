//! Small hand-written automata used by tests, docs and the CLI data files.

use crate::alphabet::AlphabetSpec;
use crate::automaton::Automaton;

/// Base-3, dimension-1 automaton with seven states recognizing
/// `(00)* (01 + 2) Σ* * Σ^ω`. It is weak but not saturated: `2*0^ω` is
/// accepted while `02*0^ω` is not.
///
/// States: 0 initial (accepting but transient), 1 and 2 count pairs of
/// leading zeros, {3, 4} read the rest of the natural part, 5 is the accepting
/// fractional loop and 6 the rejecting sink.
pub fn leading_pattern() -> Automaton {
    #[rustfmt::skip]
    let delta = vec![
        // 0  1  2  *
           1, 6, 3, 6, // q0
           2, 3, 6, 6, // q1
           1, 6, 3, 6, // q2
           4, 3, 4, 5, // q3
           3, 4, 3, 5, // q4
           5, 5, 5, 6, // q5
           6, 6, 6, 6, // q6
    ];
    Automaton::new(AlphabetSpec::parallel(3, 1).expect("valid"), 7, 0, [0, 5], delta)
        .expect("well formed")
}
