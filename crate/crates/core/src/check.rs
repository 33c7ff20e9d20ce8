//! The saturation decision procedures.
//!
//! Every check first tests weakness, then trims and minimizes, then tests the
//! language shape, the zero loop at the initial state, and finally compares
//! the languages of component-fixed automata pairwise.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{AlphabetSpec, EncodingKind, LetterIndex};
use crate::automaton::{Automaton, AutomatonError, StateId};
use crate::fixing::{fix_parallel, fix_sequential, FixError};
use crate::functional::{cycles, output_classes};
use crate::minimize::{joint_equivalence, minimize_weak, MinimizeError};
use crate::shape::{empty_states, is_d_parallel, is_d_sequential, ShapeReason, ShapeReport};
use crate::word::format_indices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Parallel,
    Sequential,
    Dim1,
    Complement,
}

impl CheckMode {
    pub const ALL: [CheckMode; 4] = [
        CheckMode::Parallel,
        CheckMode::Sequential,
        CheckMode::Dim1,
        CheckMode::Complement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckMode::Parallel => "parallel",
            CheckMode::Sequential => "sequential",
            CheckMode::Dim1 => "dim1",
            CheckMode::Complement => "complement",
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

/// A state of the minimized automaton together with a word reaching it from
/// the initial state. The word reaches a language-equivalent state in the
/// original automaton too.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRef {
    pub state: StateId,
    pub access: Vec<LetterIndex>,
}

/// Why an automaton is not saturated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    NotWeak,
    NotShape {
        state: StateRef,
        reason: ShapeReason,
    },
    /// Reading the zero word (one zero vector, or `d` zero digits) from the
    /// initial state leads elsewhere.
    ZeroLoopBroken { zero: Vec<LetterIndex> },
    /// After reaching `state`, reading `letter` and then `b-1` forever in the
    /// fixed component is not equivalent to reading `dual` and then `0`.
    /// `component` is absent for sequential automata.
    PairMismatch {
        component: Option<usize>,
        state: StateRef,
        letter: LetterIndex,
        dual: LetterIndex,
    },
    /// A first letter other than a sign letter leads to a live state.
    ComplementPrefix { letter: LetterIndex },
    /// Repeating the sign letter changes the state.
    SignNotAbsorbed { letter: LetterIndex },
    /// The two encodings of zero in `component` are not treated alike.
    ComplementInitialLanguage { component: usize },
}

impl Witness {
    pub fn describe(&self, alphabet: &AlphabetSpec) -> String {
        let word = |w: &[LetterIndex]| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                format_indices(w, alphabet)
            }
        };
        match self {
            Witness::NotWeak => "the accepting set is not a union of SCCs".to_string(),
            Witness::NotShape { state, reason } => {
                let what = match reason {
                    ShapeReason::SecondSeparator => "a second `*` can still be accepted".to_string(),
                    ShapeReason::MisalignedSeparator { class } => {
                        format!("`*` can be accepted after {class} digits modulo d")
                    }
                    ShapeReason::NoSeparator => "an accepting cycle without `*` is reachable".to_string(),
                };
                format!("after `{}` (state {}): {what}", word(&state.access), state.state)
            }
            Witness::ZeroLoopBroken { zero } => {
                format!("reading `{}` from the initial state leaves it", word(zero))
            }
            Witness::PairMismatch {
                component,
                state,
                letter,
                dual,
            } => {
                let comp = component.map_or(String::new(), |f| format!(" in component {f}"));
                format!(
                    "after `{}` (state {}), `{}` followed by b-1 differs from `{}` followed by 0{comp}",
                    word(&state.access),
                    state.state,
                    alphabet.describe(*letter),
                    alphabet.describe(*dual)
                )
            }
            Witness::ComplementPrefix { letter } => {
                format!("non-sign first letter `{}` leads to a live state", alphabet.describe(*letter))
            }
            Witness::SignNotAbsorbed { letter } => {
                let l = alphabet.describe(*letter);
                format!("`{l} {l}` and `{l}` lead to different states")
            }
            Witness::ComplementInitialLanguage { component } => {
                format!("the all-(b-1) and all-0 encodings of 0 differ in component {component}")
            }
        }
    }
}

/// Result of a check: the answer is yes exactly when there is no witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    answer: bool,
    witness: Option<Witness>,
}

impl Verdict {
    pub fn yes() -> Verdict {
        Verdict {
            answer: true,
            witness: None,
        }
    }

    pub fn no(witness: Witness) -> Verdict {
        Verdict {
            answer: false,
            witness: Some(witness),
        }
    }

    fn from_witness(witness: Option<Witness>) -> Verdict {
        witness.map_or_else(Verdict::yes, Verdict::no)
    }

    pub fn answer(&self) -> bool {
        self.answer
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("mode {mode} needs a {expected} alphabet")]
    WrongEncoding { mode: CheckMode, expected: EncodingKind },
    #[error("mode dim1 needs dimension 1, got {0}")]
    NotDimensionOne(usize),
    #[error("the automaton already reads fixed components")]
    FixedAlphabet,
    #[error(transparent)]
    Fix(#[from] FixError),
    #[error(transparent)]
    Minimize(#[from] MinimizeError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

pub fn check(aut: &Automaton, mode: CheckMode) -> Result<Verdict, CheckError> {
    match mode {
        CheckMode::Parallel => check_rva_parallel(aut),
        CheckMode::Sequential => check_rva_sequential(aut),
        CheckMode::Dim1 => check_rva_dim1(aut),
        CheckMode::Complement => check_rva_complement_parallel(aut),
    }
}

/// The trimmed, minimized automaton with an access word per state.
struct Prepared {
    min: Automaton,
    access: Vec<Vec<LetterIndex>>,
}

impl Prepared {
    fn state_ref(&self, q: StateId) -> StateRef {
        StateRef {
            state: q,
            access: self.access[q].clone(),
        }
    }
}

/// Minimal automaton, or the not-weak witness.
fn prepare(aut: &Automaton) -> Result<Result<Prepared, Witness>, CheckError> {
    if !aut.is_weak() {
        return Ok(Err(Witness::NotWeak));
    }
    let (trimmed, _) = aut.trim_accessible();
    let min = minimize_weak(&trimmed)?.target;
    let access = min
        .access_words()
        .into_iter()
        .map(|w| w.expect("quotient of an accessible automaton is accessible"))
        .collect();
    Ok(Ok(Prepared { min, access }))
}

fn shape_witness(report: ShapeReport) -> Option<Witness> {
    report.violation.map(|v| Witness::NotShape {
        state: StateRef {
            state: v.state,
            access: v.access,
        },
        reason: v.reason,
    })
}

fn expect_encoding(aut: &Automaton, mode: CheckMode, expected: EncodingKind) -> Result<(), CheckError> {
    if aut.alphabet().encoding() != expected {
        return Err(CheckError::WrongEncoding { mode, expected });
    }
    if !aut.alphabet().fixed().is_empty() {
        return Err(CheckError::FixedAlphabet);
    }
    Ok(())
}

macro_rules! try_witness {
    ($e:expr) => {
        if let Some(w) = $e {
            return Ok(Verdict::no(w));
        }
    };
}

/// Pair condition for one component of a minimal parallel automaton: for the
/// given states `q` and each letter `a` with `a_f < b-1`, the state reached by
/// `a` in the `b-1`-fixed automaton must be equivalent to the state reached by
/// `a` with `a_f + 1` in the `0`-fixed one.
fn parallel_pairs(
    p: &Prepared,
    f: usize,
    states: &[StateRef],
) -> Result<Option<Witness>, CheckError> {
    let alphabet = p.min.alphabet();
    let top = alphabet.base() - 1;
    let fix_top = fix_parallel(&p.min, f, top)?;
    let fix_zero = fix_parallel(&p.min, f, 0)?;
    let table = joint_equivalence(&[&fix_top.automaton, &fix_zero.automaton])?;
    for state in states {
        let q = state.state;
        for a in alphabet.digit_letters() {
            let digit = alphabet.component(a, f).expect("digit letter");
            if digit == top {
                continue;
            }
            let dual = alphabet.with_component(a, f, digit + 1);
            if !table.equivalent(0, p.min.step(q, a), 1, p.min.step(q, dual)) {
                return Ok(Some(Witness::PairMismatch {
                    component: Some(f),
                    state: state.clone(),
                    letter: a,
                    dual,
                }));
            }
        }
    }
    Ok(None)
}

/// First failing component, in component order. Components run in parallel.
fn first_failing<F>(d: usize, per_component: F) -> Result<Option<Witness>, CheckError>
where
    F: Fn(usize) -> Result<Option<Witness>, CheckError> + Sync + Send,
{
    let results: Vec<_> = (0..d).into_par_iter().map(per_component).collect();
    for r in results {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Saturation of a weak automaton reading parallel encodings.
pub fn check_rva_parallel(aut: &Automaton) -> Result<Verdict, CheckError> {
    expect_encoding(aut, CheckMode::Parallel, EncodingKind::Parallel)?;
    let p = match prepare(aut)? {
        Ok(p) => p,
        Err(w) => return Ok(Verdict::no(w)),
    };
    try_witness!(shape_witness(is_d_parallel(&p.min)));
    let zero = p.min.alphabet().zero();
    if p.min.step(p.min.initial(), zero) != p.min.initial() {
        return Ok(Verdict::no(Witness::ZeroLoopBroken { zero: vec![zero] }));
    }
    let states: Vec<StateRef> = (0..p.min.state_count()).map(|q| p.state_ref(q)).collect();
    let d = p.min.alphabet().dim();
    Ok(Verdict::from_witness(first_failing(d, |f| {
        parallel_pairs(&p, f, &states)
    })?))
}

/// Saturation of a weak automaton reading sequential encodings.
pub fn check_rva_sequential(aut: &Automaton) -> Result<Verdict, CheckError> {
    expect_encoding(aut, CheckMode::Sequential, EncodingKind::Sequential)?;
    let p = match prepare(aut)? {
        Ok(p) => p,
        Err(w) => return Ok(Verdict::no(w)),
    };
    try_witness!(shape_witness(is_d_sequential(&p.min)));
    let d = p.min.alphabet().dim();
    let q0 = p.min.initial();
    let zero = vec![0; d];
    if p.min.run(q0, &zero) != q0 {
        return Ok(Verdict::no(Witness::ZeroLoopBroken { zero }));
    }
    let top = p.min.alphabet().base() - 1;
    let fix_top = fix_sequential(&p.min, top)?;
    let fix_zero = fix_sequential(&p.min, 0)?;
    let table = joint_equivalence(&[&fix_top.automaton, &fix_zero.automaton])?;
    for q in 0..p.min.state_count() {
        for a in 0..top as usize {
            let left = fix_top.state(p.min.step(q, a), 0);
            let right = fix_zero.state(p.min.step(q, a + 1), 0);
            if !table.equivalent(0, left, 1, right) {
                return Ok(Verdict::no(Witness::PairMismatch {
                    component: None,
                    state: p.state_ref(q),
                    letter: a,
                    dual: a + 1,
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

/// Linear-time saturation check for dimension 1. The fixed automata read
/// only `□` and `*`, and in a shaped automaton every accepted word has at most
/// one `*`, so the language of a fixed state is determined by the sequence,
/// along its `□`-successors, of whether `□^ω` is accepted there and after a
/// `*`. Comparing those sequences replaces the general equivalence test.
pub fn check_rva_dim1(aut: &Automaton) -> Result<Verdict, CheckError> {
    if aut.alphabet().dim() != 1 {
        return Err(CheckError::NotDimensionOne(aut.alphabet().dim()));
    }
    if !aut.alphabet().fixed().is_empty() {
        return Err(CheckError::FixedAlphabet);
    }
    // a one-component sequential alphabet has the same letters
    let aut = &aut.relabel(AlphabetSpec::parallel(aut.alphabet().base(), 1).expect("valid"))?;
    let p = match prepare(aut)? {
        Ok(p) => p,
        Err(w) => return Ok(Verdict::no(w)),
    };
    try_witness!(shape_witness(is_d_parallel(&p.min)));
    let q0 = p.min.initial();
    if p.min.step(q0, 0) != q0 {
        return Ok(Verdict::no(Witness::ZeroLoopBroken { zero: vec![0] }));
    }
    let top = p.min.alphabet().base() - 1;
    let n = p.min.state_count();
    // both fixed automata side by side: top-fixed states first
    let fixed = [fix_parallel(&p.min, 0, top)?.automaton, fix_parallel(&p.min, 0, 0)?.automaton];
    let boxed = fixed[0].alphabet().digit_letters().start;
    let star = fixed[0].alphabet().star();
    let succ: Vec<StateId> = (0..2 * n).map(|v| fixed[v / n].step(v % n, boxed) + v / n * n).collect();
    let cyc = cycles(&succ);
    let cycle_accepts: Vec<bool> = cyc
        .lists
        .iter()
        .map(|c| c.iter().any(|&v| fixed[v / n].is_accepting(v % n)))
        .collect();
    let boxes_accepted = |v: usize| cycle_accepts[cyc.of[v]];
    let out: Vec<(bool, bool)> = (0..2 * n)
        .map(|v| (boxes_accepted(v), boxes_accepted(fixed[v / n].step(v % n, star) + v / n * n)))
        .collect();
    let class = output_classes(&succ, &out);
    for q in 0..n {
        for a in 0..top as usize {
            if class[p.min.step(q, a)] != class[n + p.min.step(q, a + 1)] {
                return Ok(Verdict::no(Witness::PairMismatch {
                    component: Some(0),
                    state: p.state_ref(q),
                    letter: a,
                    dual: a + 1,
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

/// Letters whose components are all `0` or all `b-1`... each component
/// independently: the possible first letters of a b-complement encoding.
pub fn sign_letters(alphabet: &AlphabetSpec) -> Vec<LetterIndex> {
    let top = alphabet.base() - 1;
    alphabet
        .digit_letters()
        .filter(|&a| {
            (0..alphabet.dim()).all(|f| matches!(alphabet.component(a, f), Some(x) if x == 0 || x == top))
        })
        .collect()
}

/// Saturation of a weak parallel automaton reading b-complement encodings.
pub fn check_rva_complement_parallel(aut: &Automaton) -> Result<Verdict, CheckError> {
    expect_encoding(aut, CheckMode::Complement, EncodingKind::Parallel)?;
    let p = match prepare(aut)? {
        Ok(p) => p,
        Err(w) => return Ok(Verdict::no(w)),
    };
    try_witness!(shape_witness(is_d_parallel(&p.min)));
    let min = &p.min;
    let alphabet = min.alphabet();
    let q0 = min.initial();
    let signs = sign_letters(alphabet);

    // repeating the sign letter is absorbed
    for &a in &signs {
        let once = min.step(q0, a);
        if min.step(once, a) != once {
            return Ok(Verdict::no(Witness::SignNotAbsorbed { letter: a }));
        }
    }
    // every other first letter, `*` included, is dead
    let empty = empty_states(min);
    for x in alphabet.letters() {
        if !signs.contains(&x) && !empty[min.step(q0, x)] {
            return Ok(Verdict::no(Witness::ComplementPrefix { letter: x }));
        }
    }
    // dual pairs at positions after the sign digit
    let after_first = reachable_by_nonempty_word(min);
    let d = alphabet.dim();
    try_witness!(first_failing(d, |f| parallel_pairs(&p, f, &after_first))?);
    // the two encodings of zero
    for f in 0..d {
        let top = alphabet.base() - 1;
        let fix_top = fix_parallel(min, f, top)?;
        let fix_zero = fix_parallel(min, f, 0)?;
        let table = joint_equivalence(&[&fix_top.automaton, &fix_zero.automaton])?;
        if !table.equivalent(0, q0, 1, q0) {
            return Ok(Verdict::no(Witness::ComplementInitialLanguage { component: f }));
        }
    }
    Ok(Verdict::yes())
}

/// States reached from the initial state by at least one letter, ascending,
/// each with a shortest such word.
fn reachable_by_nonempty_word(aut: &Automaton) -> Vec<StateRef> {
    let n = aut.state_count();
    let mut parent: Vec<Option<(Option<StateId>, LetterIndex)>> = vec![None; n];
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for (a, &p) in aut.row(aut.initial()).iter().enumerate() {
        if parent[p].is_none() {
            parent[p] = Some((None, a));
            queue.push_back(p);
        }
    }
    while let Some(q) = queue.pop_front() {
        for (a, &p) in aut.row(q).iter().enumerate() {
            if parent[p].is_none() {
                parent[p] = Some((Some(q), a));
                queue.push_back(p);
            }
        }
    }
    (0..n)
        .filter(|&q| parent[q].is_some())
        .map(|q| {
            let mut access = Vec::new();
            let mut cur = Some(q);
            while let Some((prev, a)) = cur.and_then(|c| parent[c]) {
                access.push(a);
                cur = prev;
            }
            access.reverse();
            StateRef { state: q, access }
        })
        .collect()
}
