//! Total deterministic Büchi automata over digit alphabets.

use std::collections::VecDeque;

use thiserror::Error;

use crate::alphabet::{AlphabetError, AlphabetSpec, EncodingKind, Letter, LetterIndex};
use crate::scc::{SccInfo, SccKind};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("initial state {initial} out of range ({states} states)")]
    InitialOutOfRange { initial: StateId, states: usize },
    #[error("accepting state {0} out of range")]
    AcceptingOutOfRange(StateId),
    #[error("transition table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("transition {state} --{letter}--> {target} leaves the state range")]
    TargetOutOfRange {
        state: StateId,
        letter: String,
        target: StateId,
    },
    #[error("missing transition from state {state} on letter {letter}")]
    MissingTransition { state: StateId, letter: String },
    #[error("expected a {expected} alphabet, got {got}")]
    WrongEncoding {
        expected: EncodingKind,
        got: EncodingKind,
    },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// A total deterministic Büchi automaton.
///
/// Transitions live in a dense row-major table: the successor of state `q`
/// on letter `a` is `delta[q * letter_count + a]`. Values are immutable once
/// built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: AlphabetSpec,
    initial: StateId,
    accepting: Vec<bool>,
    delta: Vec<StateId>,
}

impl Automaton {
    pub fn new(
        alphabet: AlphabetSpec,
        states: usize,
        initial: StateId,
        accepting: impl IntoIterator<Item = StateId>,
        delta: Vec<StateId>,
    ) -> Result<Self, AutomatonError> {
        if states == 0 {
            return Err(AutomatonError::NoStates);
        }
        if initial >= states {
            return Err(AutomatonError::InitialOutOfRange { initial, states });
        }
        let letters = alphabet.letter_count();
        if delta.len() != states * letters {
            return Err(AutomatonError::TableSize {
                got: delta.len(),
                expected: states * letters,
            });
        }
        if let Some(pos) = delta.iter().position(|&t| t >= states) {
            return Err(AutomatonError::TargetOutOfRange {
                state: pos / letters,
                letter: alphabet.describe(pos % letters),
                target: delta[pos],
            });
        }
        let mut flags = vec![false; states];
        for q in accepting {
            if q >= states {
                return Err(AutomatonError::AcceptingOutOfRange(q));
            }
            flags[q] = true;
        }
        Ok(Automaton {
            alphabet,
            initial,
            accepting: flags,
            delta,
        })
    }

    /// Builds an automaton from a possibly partial table. Missing entries are
    /// an error unless `complete_with_sink` is set, in which case they are
    /// sent to a fresh rejecting sink appended after the existing states.
    pub fn from_partial(
        alphabet: AlphabetSpec,
        states: usize,
        initial: StateId,
        accepting: impl IntoIterator<Item = StateId>,
        delta: Vec<Option<StateId>>,
        complete_with_sink: bool,
    ) -> Result<Self, AutomatonError> {
        let letters = alphabet.letter_count();
        if delta.len() != states * letters {
            return Err(AutomatonError::TableSize {
                got: delta.len(),
                expected: states * letters,
            });
        }
        let missing = delta.iter().position(Option::is_none);
        match missing {
            None => Self::new(
                alphabet,
                states,
                initial,
                accepting,
                delta.into_iter().map(|t| t.expect("checked")).collect(),
            ),
            Some(pos) if !complete_with_sink => Err(AutomatonError::MissingTransition {
                state: pos / letters,
                letter: alphabet.describe(pos % letters),
            }),
            Some(_) => {
                let sink = states;
                let mut table: Vec<StateId> = delta.into_iter().map(|t| t.unwrap_or(sink)).collect();
                table.extend(std::iter::repeat_n(sink, letters));
                Self::new(alphabet, states + 1, initial, accepting, table)
            }
        }
    }

    pub fn alphabet(&self) -> &AlphabetSpec {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter_map(|(q, &a)| a.then_some(q))
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.letter_count()
    }

    #[inline]
    pub fn step(&self, q: StateId, letter: LetterIndex) -> StateId {
        self.delta[q * self.letter_count() + letter]
    }

    pub fn step_letter(&self, q: StateId, letter: &Letter) -> Result<StateId, AutomatonError> {
        Ok(self.step(q, self.alphabet.letter_index(letter)?))
    }

    /// Row of successors of `q`, indexed by letter.
    pub fn row(&self, q: StateId) -> &[StateId] {
        let c = self.letter_count();
        &self.delta[q * c..(q + 1) * c]
    }

    pub fn successors(&self, q: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.row(q).iter().copied()
    }

    pub fn run(&self, q: StateId, word: &[LetterIndex]) -> StateId {
        word.iter().fold(q, |state, &a| self.step(state, a))
    }

    /// Whether the run from `q` on `prefix · period^ω` is accepting.
    ///
    /// Iterates the period from the state reached after the prefix until a
    /// state repeats at a period boundary; the run is accepting iff an
    /// accepting state is visited inside the repeating block.
    pub fn accepts_lasso_from(&self, q: StateId, prefix: &[LetterIndex], period: &[LetterIndex]) -> bool {
        assert!(!period.is_empty(), "lasso period must be nonempty");
        let mut state = self.run(q, prefix);
        let mut seen_at = vec![usize::MAX; self.state_count()];
        let mut boundary_states = Vec::new();
        let mut accepting_in_block = Vec::new();
        loop {
            if seen_at[state] != usize::MAX {
                let start = seen_at[state];
                return accepting_in_block[start..].iter().any(|&a| a);
            }
            seen_at[state] = boundary_states.len();
            boundary_states.push(state);
            let mut any = false;
            for &a in period {
                any |= self.is_accepting(state);
                state = self.step(state, a);
            }
            accepting_in_block.push(any);
        }
    }

    pub fn accepts_lasso(&self, prefix: &[LetterIndex], period: &[LetterIndex]) -> bool {
        self.accepts_lasso_from(self.initial, prefix, period)
    }

    /// The same automaton started from `q`.
    pub fn with_initial(&self, q: StateId) -> Automaton {
        assert!(q < self.state_count());
        Automaton {
            initial: q,
            ..self.clone()
        }
    }

    pub fn sccs(&self) -> SccInfo {
        SccInfo::compute(self)
    }

    /// True iff the accepting set is a union of strongly connected components.
    pub fn is_weak(&self) -> bool {
        let info = self.sccs();
        (0..info.component_count()).all(|c| info.kind(c) != SccKind::Mixed)
    }

    /// States reachable from the initial state, in BFS order (letters scanned
    /// by index).
    pub fn reachable_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for p in self.successors(q) {
                if !seen[p] {
                    seen[p] = true;
                    order.push(p);
                }
            }
        }
        order
    }

    /// For each reachable state, a shortest word leading to it from the
    /// initial state. Unreachable states get `None`.
    pub fn access_words(&self) -> Vec<Option<Vec<LetterIndex>>> {
        let n = self.state_count();
        let mut parent: Vec<Option<(StateId, LetterIndex)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for (a, &p) in self.row(q).iter().enumerate() {
                if !seen[p] {
                    seen[p] = true;
                    parent[p] = Some((q, a));
                    queue.push_back(p);
                }
            }
        }
        (0..n)
            .map(|q| {
                if !seen[q] {
                    return None;
                }
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((prev, a)) = parent[cur] {
                    word.push(a);
                    cur = prev;
                }
                word.reverse();
                Some(word)
            })
            .collect()
    }

    /// Restriction to the states reachable from the initial state. Returns the
    /// trimmed automaton and the old-to-new state map (`None` for dropped
    /// states). Reachable states keep their relative order.
    pub fn trim_accessible(&self) -> (Automaton, Vec<Option<StateId>>) {
        let n = self.state_count();
        let mut reachable = vec![false; n];
        for q in self.reachable_order() {
            reachable[q] = true;
        }
        let mut map = vec![None; n];
        let mut next = 0;
        for q in 0..n {
            if reachable[q] {
                map[q] = Some(next);
                next += 1;
            }
        }
        if next == n {
            return (self.clone(), map);
        }
        let mut delta = Vec::with_capacity(next * self.letter_count());
        let mut accepting = Vec::new();
        for q in (0..n).filter(|&q| reachable[q]) {
            delta.extend(self.row(q).iter().map(|&p| map[p].expect("closed under steps")));
            if self.accepting[q] {
                accepting.push(map[q].expect("reachable"));
            }
        }
        let trimmed = Automaton::new(
            self.alphabet.clone(),
            next,
            map[self.initial].expect("initial is reachable"),
            accepting,
            delta,
        )
        .expect("trimmed automaton is well formed");
        (trimmed, map)
    }

    /// Replaces the alphabet metadata without touching the table. The letter
    /// counts must agree.
    pub fn relabel(&self, alphabet: AlphabetSpec) -> Result<Automaton, AutomatonError> {
        Automaton::new(
            alphabet,
            self.state_count(),
            self.initial,
            self.accepting_states(),
            self.delta.clone(),
        )
    }

    /// Parallel automaton reading one `d`-vector per letter, obtained from a
    /// sequential automaton by reading the vector's digits in order.
    pub fn parallelize(&self) -> Result<Automaton, AutomatonError> {
        let seq = &self.alphabet;
        if seq.encoding() != EncodingKind::Sequential || !seq.fixed().is_empty() {
            return Err(AutomatonError::WrongEncoding {
                expected: EncodingKind::Sequential,
                got: seq.encoding(),
            });
        }
        let par = AlphabetSpec::parallel(seq.base(), seq.dim())?;
        let mut delta = Vec::with_capacity(self.state_count() * par.letter_count());
        for q in 0..self.state_count() {
            for letter in par.digit_letters() {
                let state = (0..seq.dim()).fold(q, |s, c| {
                    self.step(s, par.component(letter, c).expect("free digit") as usize)
                });
                delta.push(state);
            }
            delta.push(self.step(q, seq.star()));
        }
        Automaton::new(
            par,
            self.state_count(),
            self.initial,
            self.accepting_states(),
            delta,
        )
    }

    /// Sequential automaton simulating a parallel one: states remember the
    /// digits read so far inside the current vector. A `*` in the middle of a
    /// vector leads to a fresh rejecting sink.
    pub fn sequentialize(&self) -> Result<Automaton, AutomatonError> {
        let par = &self.alphabet;
        if par.encoding() != EncodingKind::Parallel || !par.fixed().is_empty() {
            return Err(AutomatonError::WrongEncoding {
                expected: EncodingKind::Parallel,
                got: par.encoding(),
            });
        }
        let b = par.base() as usize;
        let d = par.dim();
        let seq = AlphabetSpec::sequential(par.base(), d)?;
        // partial vectors of length k < d are numbered by offset[k] + value
        let mut offset = vec![0usize; d + 1];
        for k in 1..=d {
            offset[k] = offset[k - 1] + b.pow((k - 1) as u32);
        }
        let per_state = offset[d];
        let n = self.state_count();
        let sink = n * per_state;
        let id = |q: StateId, k: usize, value: usize| q * per_state + offset[k] + value;
        let letters = seq.letter_count();
        let mut delta = vec![sink; (sink + 1) * letters];
        let mut accepting = Vec::new();
        for q in 0..n {
            for k in 0..d {
                for value in 0..b.pow(k as u32) {
                    let from = id(q, k, value);
                    // partial vectors inherit acceptance, which keeps the result weak
                    if self.is_accepting(q) {
                        accepting.push(from);
                    }
                    for digit in 0..b {
                        let next_value = value * b + digit;
                        let to = if k + 1 == d {
                            id(self.step(q, next_value), 0, 0)
                        } else {
                            id(q, k + 1, next_value)
                        };
                        delta[from * letters + digit] = to;
                    }
                    if k == 0 {
                        delta[from * letters + seq.star()] = id(self.step(q, par.star()), 0, 0);
                    }
                }
            }
        }
        Automaton::new(seq, sink + 1, id(self.initial, 0, 0), accepting, delta)
    }
}
