//! Which states can still accept, where the separator may be read, and the
//! resulting test for "every accepted word has exactly one `*`, after a
//! multiple of `d_seq` digits".

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::LetterIndex;
use crate::automaton::{Automaton, StateId};
use crate::scc::{tarjan, SccInfo};

/// Predecessor lists over all letters, in compressed row form.
#[derive(Debug, Clone)]
pub struct Predecessors {
    start: Vec<usize>,
    list: Vec<StateId>,
}

impl Predecessors {
    pub fn new(aut: &Automaton) -> Predecessors {
        let n = aut.state_count();
        let mut start = vec![0usize; n + 1];
        for q in 0..n {
            for p in aut.successors(q) {
                start[p + 1] += 1;
            }
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut list = vec![0; start[n]];
        for q in 0..n {
            for p in aut.successors(q) {
                list[fill[p]] = q;
                fill[p] += 1;
            }
        }
        Predecessors { start, list }
    }

    /// Predecessors of `q`, with multiplicity (one entry per transition).
    pub fn of(&self, q: StateId) -> &[StateId] {
        &self.list[self.start[q]..self.start[q + 1]]
    }
}

/// States whose language is empty: those that cannot reach an accepting state
/// lying on a cycle. Computed backwards from those states.
pub fn empty_states(aut: &Automaton) -> Vec<bool> {
    empty_states_with(aut, &aut.sccs(), &Predecessors::new(aut))
}

pub fn empty_states_with(aut: &Automaton, sccs: &SccInfo, preds: &Predecessors) -> Vec<bool> {
    let n = aut.state_count();
    let mut empty = vec![true; n];
    let mut to_process: Vec<StateId> = (0..n)
        .filter(|&q| sccs.is_accepting_recurrent(aut, q))
        .collect();
    for &q in &to_process {
        empty[q] = false;
    }
    while let Some(q) = to_process.pop() {
        for &p in preds.of(q) {
            if empty[p] {
                empty[p] = false;
                to_process.push(p);
            }
        }
    }
    empty
}

/// Digit-position classes of the natural part: `sets[i][q]` holds when `q` is
/// reached from the initial state by a `*`-free word whose length is `i`
/// modulo `d_seq`.
#[derive(Debug, Clone)]
pub struct ModStates {
    pub sets: Vec<Vec<bool>>,
    /// For each reached (class, state), the previous pair and the letter read.
    parent: Vec<Option<(usize, StateId, LetterIndex)>>,
    /// Number of (state, class) pairs taken from the worklist.
    pub visits: usize,
}

impl ModStates {
    pub fn contains(&self, class: usize, q: StateId) -> bool {
        self.sets[class][q]
    }

    pub fn in_any(&self, q: StateId) -> bool {
        self.sets.iter().any(|s| s[q])
    }

    /// A `*`-free word from the initial state reaching `q` in `class`.
    pub fn access(&self, class: usize, q: StateId) -> Vec<LetterIndex> {
        let n = self.sets[0].len();
        let mut word = Vec::new();
        let (mut i, mut p) = (class, q);
        while let Some((pi, pp, a)) = self.parent[i * n + p] {
            word.push(a);
            i = pi;
            p = pp;
        }
        word.reverse();
        word
    }
}

pub fn mod_states(aut: &Automaton, d_seq: usize) -> ModStates {
    assert!(d_seq >= 1, "d_seq must be positive");
    let n = aut.state_count();
    let star = aut.alphabet().star();
    let mut sets = vec![vec![false; n]; d_seq];
    let mut parent = vec![None; n * d_seq];
    let mut work = VecDeque::new();
    sets[0][aut.initial()] = true;
    work.push_back((0usize, aut.initial()));
    let mut visits = 0;
    while let Some((i, q)) = work.pop_front() {
        visits += 1;
        let j = (i + 1) % d_seq;
        for (a, &p) in aut.row(q).iter().enumerate() {
            if a != star && !sets[j][p] {
                sets[j][p] = true;
                parent[j * n + p] = Some((i, q, a));
                work.push_back((j, p));
            }
        }
    }
    ModStates {
        sets,
        parent,
        visits,
    }
}

/// States of the fractional part: `*`-successors of natural-part states,
/// closed under digit letters. Each reached state records how it was reached.
#[derive(Debug, Clone)]
pub struct FraStates {
    pub set: Vec<bool>,
    origin: Vec<Option<FraOrigin>>,
    pub visits: usize,
}

#[derive(Debug, Clone, Copy)]
enum FraOrigin {
    Star { class: usize, from: StateId },
    Digit { from: StateId, letter: LetterIndex },
}

impl FraStates {
    pub fn contains(&self, q: StateId) -> bool {
        self.set[q]
    }

    /// A word with one `*` leading from the initial state to `q`. The `*` is
    /// written as `usize::MAX`; [`check_shape`] substitutes the real index.
    pub fn access(&self, mods: &ModStates, q: StateId) -> Vec<LetterIndex> {
        let mut tail = Vec::new();
        let mut p = q;
        loop {
            match self.origin[p].expect("reached state") {
                FraOrigin::Digit { from, letter } => {
                    tail.push(letter);
                    p = from;
                }
                FraOrigin::Star { class, from } => {
                    let mut word = mods.access(class, from);
                    word.push(usize::MAX); // placeholder for `*`
                    tail.reverse();
                    word.extend(tail);
                    return word;
                }
            }
        }
    }
}

pub fn fra_states(aut: &Automaton, mods: &ModStates) -> FraStates {
    let n = aut.state_count();
    let star = aut.alphabet().star();
    let mut set = vec![false; n];
    let mut origin = vec![None; n];
    let mut work = VecDeque::new();
    for (class, s) in mods.sets.iter().enumerate() {
        for q in (0..n).filter(|&q| s[q]) {
            let p = aut.step(q, star);
            if !set[p] {
                set[p] = true;
                origin[p] = Some(FraOrigin::Star { class, from: q });
                work.push_back(p);
            }
        }
    }
    let mut visits = 0;
    while let Some(q) = work.pop_front() {
        visits += 1;
        for (a, &p) in aut.row(q).iter().enumerate() {
            if a != star && !set[p] {
                set[p] = true;
                origin[p] = Some(FraOrigin::Digit { from: q, letter: a });
                work.push_back(p);
            }
        }
    }
    FraStates { set, origin, visits }
}

/// All state sets used by the shape test.
#[derive(Debug, Clone)]
pub struct ShapeSets {
    pub empty: Vec<bool>,
    pub modulo: ModStates,
    pub fractional: FraStates,
}

impl ShapeSets {
    pub fn compute(aut: &Automaton, d_seq: usize) -> ShapeSets {
        let modulo = mod_states(aut, d_seq);
        let fractional = fra_states(aut, &modulo);
        ShapeSets {
            empty: empty_states(aut),
            modulo,
            fractional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeReason {
    /// A second `*` can be read after the first and still be accepted.
    SecondSeparator,
    /// `*` can be read after a number of digits not divisible by `d_seq`.
    MisalignedSeparator { class: usize },
    /// An accepting cycle is reachable without reading `*`.
    NoSeparator,
}

/// A state where the shape fails, with a word from the initial state reaching
/// it. In the word, `*` is given by the alphabet's star index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeViolation {
    pub state: StateId,
    pub access: Vec<LetterIndex>,
    pub reason: ShapeReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("letters have width {width}, but d_par = {d_par}")]
    WidthMismatch { width: usize, d_par: usize },
    #[error("d_seq must be positive")]
    ZeroPeriod,
}

/// Outcome of [`check_shape`]: the sets, and the first violation found if any.
#[derive(Debug, Clone)]
pub struct ShapeReport {
    pub sets: ShapeSets,
    pub violation: Option<ShapeViolation>,
}

impl ShapeReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Tests whether every accepted word has exactly one `*`, read after a
/// multiple of `d_seq` letters. `d_par` is the number of components per
/// letter and must match the alphabet.
pub fn check_shape(aut: &Automaton, d_par: usize, d_seq: usize) -> Result<ShapeReport, ShapeError> {
    let width = aut.alphabet().width();
    if width != d_par {
        return Err(ShapeError::WidthMismatch { width, d_par });
    }
    if d_seq == 0 {
        return Err(ShapeError::ZeroPeriod);
    }
    let sets = ShapeSets::compute(aut, d_seq);
    let star = aut.alphabet().star();
    let n = aut.state_count();
    let live_star = |q: StateId| !sets.empty[aut.step(q, star)];
    let fix_star = |mut w: Vec<LetterIndex>| {
        w.iter_mut().filter(|a| **a == usize::MAX).for_each(|a| *a = star);
        w
    };

    let mut violation = None;
    if let Some(q) = (0..n).find(|&q| sets.fractional.contains(q) && live_star(q)) {
        violation = Some(ShapeViolation {
            state: q,
            access: fix_star(sets.fractional.access(&sets.modulo, q)),
            reason: ShapeReason::SecondSeparator,
        });
    }
    if violation.is_none() {
        'classes: for class in 1..d_seq {
            for q in 0..n {
                if sets.modulo.contains(class, q) && live_star(q) {
                    violation = Some(ShapeViolation {
                        state: q,
                        access: sets.modulo.access(class, q),
                        reason: ShapeReason::MisalignedSeparator { class },
                    });
                    break 'classes;
                }
            }
        }
    }
    if violation.is_none() {
        violation = star_free_acceptance(aut, &sets.modulo).map(|(class, q)| ShapeViolation {
            state: q,
            access: sets.modulo.access(class, q),
            reason: ShapeReason::NoSeparator,
        });
    }
    Ok(ShapeReport { sets, violation })
}

/// An accepting state of the natural part lying on a `*`-free cycle, with one
/// class it was reached in.
fn star_free_acceptance(aut: &Automaton, mods: &ModStates) -> Option<(usize, StateId)> {
    let n = aut.state_count();
    let star = aut.alphabet().star();
    let inside = |q: StateId| mods.in_any(q);
    let component = tarjan(n, |q, out| {
        if inside(q) {
            out.extend(
                aut.row(q)
                    .iter()
                    .enumerate()
                    .filter(|&(a, &p)| a != star && inside(p))
                    .map(|(_, &p)| p),
            );
        }
    });
    let mut size = vec![0usize; n];
    for q in 0..n {
        size[component[q]] += 1;
    }
    (0..n)
        .filter(|&q| inside(q) && aut.is_accepting(q))
        .find(|&q| {
            size[component[q]] > 1
                || aut
                    .row(q)
                    .iter()
                    .enumerate()
                    .any(|(a, &p)| a != star && p == q)
        })
        .map(|q| {
            let class = (0..mods.sets.len()).find(|&i| mods.contains(i, q)).expect("inside");
            (class, q)
        })
}

/// Shape test for parallel alphabets: one `*`, anywhere.
pub fn is_d_parallel(aut: &Automaton) -> ShapeReport {
    check_shape(aut, aut.alphabet().width(), 1).expect("matching width")
}

/// Shape test for sequential alphabets: one `*`, after a multiple of `d`
/// digits.
pub fn is_d_sequential(aut: &Automaton) -> ShapeReport {
    check_shape(aut, 1, aut.alphabet().dim()).expect("matching width")
}
