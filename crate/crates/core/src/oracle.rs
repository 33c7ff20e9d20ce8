//! Ground truth for saturation, computed without minimization or fixing.
//!
//! Saturation fails exactly when some accepted word is not a well-formed
//! encoding, or when two encodings of the same vector are treated
//! differently. Two encodings of one vector with the same natural length
//! differ, per component, by swapping `a (b-1)^ω` with `(a+1) 0^ω` (or, in
//! b-complement, the whole component `(b-1)^ω` with `0^ω`); natural lengths
//! are equalized by leading zeros (sign extension in b-complement). Changing
//! one component at a time connects any two encodings, so it suffices to
//! search for one of these single steps on which the automaton disagrees.
//! Each search runs over pairs of runs and yields a concrete lasso pair.

use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::alphabet::{AlphabetSpec, EncodingKind, Letter, LetterIndex, Symbol};
use crate::automaton::{Automaton, StateId};
use crate::check::{sign_letters, CheckMode, Witness};
use crate::encoding::{
    alternative_encodings, default_natural_bound, value_complement, value_real, EncodingError,
    Lasso, PairWord, RationalVector,
};
use crate::fixing::{fix_parallel, fix_sequential};
use crate::minimize::minimize_weak;
use crate::scc::tarjan;
use crate::shape::ShapeReason;
use crate::word::{lasso_from_indices, to_indices};

/// How digits are turned into numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    /// Non-negative reals.
    Unsigned,
    /// b-complement: the first digit of each component is a sign digit.
    Complement,
}

impl Reading {
    pub fn of_mode(mode: CheckMode) -> Reading {
        match mode {
            CheckMode::Complement => Reading::Complement,
            _ => Reading::Unsigned,
        }
    }
}

/// A lasso over letter indices.
pub type IndexLasso = Lasso<LetterIndex>;

/// Exact value of an encoding, or why the word is not one.
pub fn value_of(
    word: &IndexLasso,
    alphabet: &AlphabetSpec,
    reading: Reading,
) -> Result<RationalVector, EncodingError> {
    if word.period.is_empty() {
        return Err(EncodingError::FiniteWord);
    }
    let letters = lasso_from_indices(&word.prefix, &word.period, alphabet);
    let pw = PairWord::from_lasso_word(&letters)?;
    match reading {
        Reading::Unsigned => value_real(&pw, alphabet),
        Reading::Complement => value_complement(&pw, alphabet),
    }
}

/// Evidence that a language is not saturated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Counterexample {
    /// An accepted word that encodes nothing.
    BadShape { word: IndexLasso },
    /// Two encodings of the same vector, exactly one of them accepted.
    Pair {
        accepted: IndexLasso,
        rejected: IndexLasso,
    },
}

impl Counterexample {
    pub fn describe(&self, alphabet: &AlphabetSpec) -> String {
        let show = |w: &IndexLasso| {
            crate::word::format_lasso(&lasso_from_indices(&w.prefix, &w.period, alphabet))
        };
        match self {
            Counterexample::BadShape { word } => {
                format!("accepted word `{}` is not an encoding", show(word))
            }
            Counterexample::Pair { accepted, rejected } => format!(
                "`{}` is accepted but `{}`, encoding the same vector, is not",
                show(accepted),
                show(rejected)
            ),
        }
    }
}

/// Checks a counterexample against the automaton with exact arithmetic.
pub fn verify_counterexample(
    aut: &Automaton,
    reading: Reading,
    cx: &Counterexample,
) -> Result<(), String> {
    let alphabet = aut.alphabet();
    let accepts = |w: &IndexLasso| aut.accepts_lasso(&w.prefix, &w.period);
    match cx {
        Counterexample::BadShape { word } => {
            if !accepts(word) {
                return Err("the word is not accepted".into());
            }
            match value_of(word, alphabet, reading) {
                Err(_) => Ok(()),
                Ok(v) => Err(format!("the word encodes {v}")),
            }
        }
        Counterexample::Pair { accepted, rejected } => {
            if !accepts(accepted) {
                return Err("the first word is not accepted".into());
            }
            if accepts(rejected) {
                return Err("the second word is accepted".into());
            }
            let x = value_of(accepted, alphabet, reading).map_err(|e| e.to_string())?;
            let y = value_of(rejected, alphabet, reading).map_err(|e| e.to_string())?;
            if x != y {
                return Err(format!("values differ: {x} vs {y}"));
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the automaton reads fixed components")]
    FixedAlphabet,
    #[error("b-complement encodings are read by parallel automata only")]
    ComplementNeedsParallel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum OracleOutcome {
    NotWeak,
    Counterexample { counterexample: Counterexample },
    /// No counterexample, or none within the length bound.
    NoneFound { exhaustive: bool },
}

impl OracleOutcome {
    /// Saturated according to the oracle.
    pub fn saturated(&self) -> bool {
        matches!(self, OracleOutcome::NoneFound { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            OracleOutcome::Counterexample { counterexample } => Some(counterexample),
            _ => None,
        }
    }
}

/// Result of a lasso search: prefix and period for the left and the right
/// word.
struct FoundPair {
    left: IndexLasso,
    right: IndexLasso,
}

/// Shortest lasso through a "bad" node of an implicit graph. Starts carry the
/// letters already read on each side. Among bad nodes lying on a cycle, picks
/// one minimizing prefix plus period length, and gives up if that exceeds
/// `bound`.
fn find_lasso<E, B>(
    node_count: usize,
    starts: &[(usize, Vec<LetterIndex>, Vec<LetterIndex>)],
    edges: E,
    bad: B,
    bound: Option<usize>,
) -> Option<FoundPair>
where
    E: Fn(usize, &mut Vec<(usize, LetterIndex, LetterIndex)>),
    B: Fn(usize) -> bool,
{
    const NONE: usize = usize::MAX;
    // BFS: compact ids in discovery order
    let mut id = vec![NONE; node_count];
    let mut nodes: Vec<usize> = Vec::new();
    let mut parent: Vec<(usize, LetterIndex, LetterIndex)> = Vec::new();
    let mut start_of: Vec<usize> = Vec::new();
    let mut dist: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    for (si, (v, lp, _)) in starts.iter().enumerate() {
        if id[*v] == NONE {
            id[*v] = nodes.len();
            nodes.push(*v);
            parent.push((NONE, 0, 0));
            start_of.push(si);
            dist.push(lp.len());
            queue.push_back(*v);
        }
    }
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        out.clear();
        edges(v, &mut out);
        let iv = id[v];
        for &(w, a, b) in &out {
            if id[w] == NONE {
                id[w] = nodes.len();
                nodes.push(w);
                parent.push((iv, a, b));
                start_of.push(start_of[iv]);
                dist.push(dist[iv] + 1);
                queue.push_back(w);
            }
        }
    }
    let m = nodes.len();
    let succ = |i: usize, out: &mut Vec<(usize, LetterIndex, LetterIndex)>| {
        let mut raw = Vec::new();
        edges(nodes[i], &mut raw);
        out.extend(raw.into_iter().map(|(w, a, b)| (id[w], a, b)));
    };
    let comp = tarjan(m, |i, out| {
        let mut labelled = Vec::new();
        succ(i, &mut labelled);
        out.extend(labelled.into_iter().map(|(w, _, _)| w));
    });

    // shortest cycle through `i` inside its component
    let cycle = |i: usize| -> Option<Vec<(LetterIndex, LetterIndex)>> {
        let mut back: Vec<Option<(usize, LetterIndex, LetterIndex)>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([i]);
        let mut labelled = Vec::new();
        while let Some(v) = queue.pop_front() {
            labelled.clear();
            succ(v, &mut labelled);
            for &(w, a, b) in &labelled {
                if comp[w] != comp[i] {
                    continue;
                }
                if w == i {
                    let mut path = vec![(a, b)];
                    let mut cur = v;
                    while cur != i {
                        let (p, a, b) = back[cur].expect("path");
                        path.push((a, b));
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                if !seen[w] {
                    seen[w] = true;
                    back[w] = Some((v, a, b));
                    queue.push_back(w);
                }
            }
        }
        None
    };

    let mut best: Option<(usize, usize, Vec<(LetterIndex, LetterIndex)>)> = None;
    for i in 0..m {
        if best.as_ref().is_some_and(|(total, _, _)| dist[i] + 1 > *total) {
            break;
        }
        if !bad(nodes[i]) {
            continue;
        }
        if let Some(c) = cycle(i) {
            let total = dist[i] + c.len();
            if best.as_ref().is_none_or(|(t, _, _)| total < *t) {
                best = Some((total, i, c));
            }
        }
    }
    let (total, i, c) = best?;
    if bound.is_some_and(|b| total > b) {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = i;
    while parent[cur].0 != NONE {
        let (p, a, b) = parent[cur];
        path.push((a, b));
        cur = p;
    }
    path.reverse();
    let (_, lp, rp) = &starts[start_of[i]];
    let mut left = lp.clone();
    let mut right = rp.clone();
    left.extend(path.iter().map(|x| x.0));
    right.extend(path.iter().map(|x| x.1));
    Some(FoundPair {
        left: Lasso::new(left, c.iter().map(|x| x.0).collect()),
        right: Lasso::new(right, c.iter().map(|x| x.1).collect()),
    })
}

/// Pair of runs of one automaton, with `extra` bits of bookkeeping per node.
struct PairGraph<'a> {
    aut: &'a Automaton,
    extra: usize,
}

impl PairGraph<'_> {
    fn node(&self, p: StateId, q: StateId, e: usize) -> usize {
        (p * self.aut.state_count() + q) * self.extra + e
    }

    fn split(&self, v: usize) -> (StateId, StateId, usize) {
        let e = v % self.extra;
        let pq = v / self.extra;
        let n = self.aut.state_count();
        (pq / n, pq % n, e)
    }

    fn size(&self) -> usize {
        self.aut.state_count() * self.aut.state_count() * self.extra
    }

    /// Bad nodes: the two runs disagree on acceptance, and `e` passes.
    fn disagree(&self, v: usize, e_ok: impl Fn(usize) -> bool) -> bool {
        let (p, q, e) = self.split(v);
        e_ok(e) && self.aut.is_accepting(p) != self.aut.is_accepting(q)
    }
}

fn orient(aut: &Automaton, found: FoundPair) -> Counterexample {
    if aut.accepts_lasso(&found.left.prefix, &found.left.period) {
        Counterexample::Pair {
            accepted: found.left,
            rejected: found.right,
        }
    } else {
        Counterexample::Pair {
            accepted: found.right,
            rejected: found.left,
        }
    }
}

/// Accepted words that are not encodings: no `*`, several `*`, a `*` off a
/// vector boundary, or (b-complement) no sign digit in front.
fn shape_counterexample(aut: &Automaton, reading: Reading, bound: Option<usize>) -> Option<Counterexample> {
    let alphabet = aut.alphabet();
    let star = alphabet.star();
    let period = match alphabet.encoding() {
        EncodingKind::Sequential => alphabet.dim(),
        EncodingKind::Parallel => 1,
    };
    // counter states: 0..period natural part by digits read, then fraction,
    // bad, and (b-complement) the start before the sign letter
    let frac = period;
    let bad_c = period + 1;
    let start_c = period + 2;
    let classes = period + 3;
    let signs = sign_letters(alphabet);
    let counter = |c: usize, a: LetterIndex| -> usize {
        if c == bad_c {
            return bad_c;
        }
        if c == start_c {
            return if signs.contains(&a) { 0 } else { bad_c };
        }
        if a == star {
            return if c == 0 { frac } else { bad_c };
        }
        if c == frac {
            frac
        } else {
            (c + 1) % period
        }
    };
    let first = match reading {
        Reading::Unsigned => 0,
        Reading::Complement => start_c,
    };
    let letters = aut.letter_count();
    let found = find_lasso(
        aut.state_count() * classes,
        &[(aut.initial() * classes + first, vec![], vec![])],
        |v, out| {
            let (q, c) = (v / classes, v % classes);
            for a in 0..letters {
                out.push((aut.step(q, a) * classes + counter(c, a), a, a));
            }
        },
        |v| aut.is_accepting(v / classes) && v % classes != frac,
        bound,
    )?;
    Some(Counterexample::BadShape { word: found.left })
}

/// Same word read from two different states.
fn same_word(
    aut: &Automaton,
    starts: Vec<(StateId, StateId, Vec<LetterIndex>, Vec<LetterIndex>)>,
    bound: Option<usize>,
) -> Option<Counterexample> {
    let g = PairGraph { aut, extra: 1 };
    let starts: Vec<_> = starts
        .into_iter()
        .map(|(p, q, l, r)| (g.node(p, q, 0), l, r))
        .collect();
    let letters = aut.letter_count();
    let found = find_lasso(
        g.size(),
        &starts,
        |v, out| {
            let (p, q, _) = g.split(v);
            for a in 0..letters {
                out.push((g.node(aut.step(p, a), aut.step(q, a), 0), a, a));
            }
        },
        |v| g.disagree(v, |_| true),
        bound,
    )?;
    Some(orient(aut, found))
}

const BEFORE: usize = 0;
const AFTER: usize = 1;

/// One parallel component swapped from `a (b-1)^ω` to `(a+1) 0^ω`, the swap
/// starting anywhere reachable from the starts in mode `BEFORE`, or from the
/// very first letter for starts in mode `AFTER`.
fn parallel_flip(
    aut: &Automaton,
    f: usize,
    starts: Vec<(StateId, usize, Vec<LetterIndex>)>,
    bound: Option<usize>,
) -> Option<Counterexample> {
    let alphabet = aut.alphabet();
    let top = alphabet.base() - 1;
    let g = PairGraph { aut, extra: 2 };
    let starts: Vec<_> = starts
        .into_iter()
        .map(|(q, mode, w)| (g.node(q, q, mode), w.clone(), w))
        .collect();
    let star = alphabet.star();
    let found = find_lasso(
        g.size(),
        &starts,
        |v, out| {
            let (p, q, mode) = g.split(v);
            out.push((g.node(aut.step(p, star), aut.step(q, star), mode), star, star));
            for a in alphabet.digit_letters() {
                let x = alphabet.component(a, f).expect("free component");
                if mode == BEFORE {
                    out.push((g.node(aut.step(p, a), aut.step(q, a), BEFORE), a, a));
                    if x < top {
                        let b = alphabet.with_component(a, f, x + 1);
                        out.push((g.node(aut.step(p, a), aut.step(q, b), AFTER), a, b));
                    }
                } else if x == top {
                    let b = alphabet.with_component(a, f, 0);
                    out.push((g.node(aut.step(p, a), aut.step(q, b), AFTER), a, b));
                }
            }
        },
        |v| g.disagree(v, |e| e == AFTER),
        bound,
    )?;
    Some(orient(aut, found))
}

/// Sequential version: the swapped digits are those at positions `f` modulo
/// `d` among the digits.
fn sequential_flip(aut: &Automaton, f: usize, bound: Option<usize>) -> Option<Counterexample> {
    let alphabet = aut.alphabet();
    let d = alphabet.dim();
    let b = alphabet.base() as usize;
    let star = alphabet.star();
    let g = PairGraph { aut, extra: 2 * d };
    let enc = |mode: usize, i: usize| mode * d + i;
    let q0 = aut.initial();
    let found = find_lasso(
        g.size(),
        &[(g.node(q0, q0, enc(BEFORE, 0)), vec![], vec![])],
        |v, out| {
            let (p, q, e) = g.split(v);
            let (mode, i) = (e / d, e % d);
            out.push((g.node(aut.step(p, star), aut.step(q, star), e), star, star));
            let next = (i + 1) % d;
            for x in 0..b {
                if mode == BEFORE {
                    out.push((g.node(aut.step(p, x), aut.step(q, x), enc(BEFORE, next)), x, x));
                    if i == f && x + 1 < b {
                        out.push((g.node(aut.step(p, x), aut.step(q, x + 1), enc(AFTER, next)), x, x + 1));
                    }
                } else if i != f {
                    out.push((g.node(aut.step(p, x), aut.step(q, x), enc(AFTER, next)), x, x));
                } else if x == b - 1 {
                    out.push((g.node(aut.step(p, x), aut.step(q, 0), enc(AFTER, next)), x, 0));
                }
            }
        },
        |v| g.disagree(v, |e| e / d == AFTER),
        bound,
    )?;
    Some(orient(aut, found))
}

/// Decides saturation by searching for a counterexample. `bound` limits the
/// total length (prefix plus period) of the counterexamples considered;
/// without it the search is exhaustive.
pub fn saturation_oracle(
    aut: &Automaton,
    reading: Reading,
    bound: Option<usize>,
) -> Result<OracleOutcome, OracleError> {
    let alphabet = aut.alphabet();
    if !alphabet.fixed().is_empty() {
        return Err(OracleError::FixedAlphabet);
    }
    if reading == Reading::Complement && alphabet.encoding() != EncodingKind::Parallel {
        return Err(OracleError::ComplementNeedsParallel);
    }
    if !aut.is_weak() {
        return Ok(OracleOutcome::NotWeak);
    }
    let found = search(aut, reading, bound);
    Ok(match found {
        Some(counterexample) => OracleOutcome::Counterexample { counterexample },
        None => OracleOutcome::NoneFound {
            exhaustive: bound.is_none(),
        },
    })
}

fn search(aut: &Automaton, reading: Reading, bound: Option<usize>) -> Option<Counterexample> {
    let alphabet = aut.alphabet();
    let q0 = aut.initial();
    let d = alphabet.dim();
    if let Some(cx) = shape_counterexample(aut, reading, bound) {
        return Some(cx);
    }
    match (reading, alphabet.encoding()) {
        (Reading::Unsigned, EncodingKind::Parallel) => {
            let zero = alphabet.zero();
            same_word(aut, vec![(q0, aut.step(q0, zero), vec![], vec![zero])], bound)
                .or_else(|| (0..d).find_map(|f| parallel_flip(aut, f, vec![(q0, BEFORE, vec![])], bound)))
        }
        (Reading::Unsigned, EncodingKind::Sequential) => {
            let zeros = vec![0; d];
            same_word(aut, vec![(q0, aut.run(q0, &zeros), vec![], zeros)], bound)
                .or_else(|| (0..d).find_map(|f| sequential_flip(aut, f, bound)))
        }
        (Reading::Complement, _) => {
            let signs = sign_letters(alphabet);
            let extensions = signs
                .iter()
                .map(|&s| (aut.step(q0, s), aut.run(q0, &[s, s]), vec![s], vec![s, s]))
                .collect();
            same_word(aut, extensions, bound)
                .or_else(|| {
                    (0..d).find_map(|f| {
                        let starts = alphabet
                            .digit_letters()
                            .map(|c| (aut.step(q0, c), BEFORE, vec![c]))
                            .collect();
                        parallel_flip(aut, f, starts, bound)
                    })
                })
                .or_else(|| (0..d).find_map(|f| parallel_flip(aut, f, vec![(q0, AFTER, vec![])], bound)))
        }
    }
}

/// A lasso accepted from `p` in `a` but not from `q` in `b`, or the other way
/// round, for weak automata reading the same letters.
pub fn distinguishing_lasso(a: &Automaton, p: StateId, b: &Automaton, q: StateId) -> Option<IndexLasso> {
    assert_eq!(a.letter_count(), b.letter_count(), "automata read different alphabets");
    let nb = b.state_count();
    let letters = a.letter_count();
    let found = find_lasso(
        a.state_count() * nb,
        &[(p * nb + q, vec![], vec![])],
        |v, out| {
            let (x, y) = (v / nb, v % nb);
            for l in 0..letters {
                out.push((a.step(x, l) * nb + b.step(y, l), l, l));
            }
        },
        |v| a.is_accepting(v / nb) != b.is_accepting(v % nb),
        None,
    )?;
    Some(found.left)
}

/// Language equality of two states of weak automata, by product search.
pub fn state_languages_equal(a: &Automaton, p: StateId, b: &Automaton, q: StateId) -> bool {
    distinguishing_lasso(a, p, b, q).is_none()
}

/// Some lasso accepted from `q`, restricted to the given letters.
fn accepted_lasso(aut: &Automaton, q: StateId, letters: &[LetterIndex]) -> Option<IndexLasso> {
    let found = find_lasso(
        aut.state_count(),
        &[(q, vec![], vec![])],
        |v, out| out.extend(letters.iter().map(|&a| (aut.step(v, a), a, a))),
        |v| aut.is_accepting(v),
        None,
    )?;
    Some(found.left)
}

/// Replaces `□` by `z` in a lasso over a fixed alphabet.
fn unfix(word: &IndexLasso, fixed: &AlphabetSpec, source: &AlphabetSpec, z: u32) -> IndexLasso {
    word.map(|&a| {
        let letter = match fixed.letter(a).expect("in range") {
            Letter::Star => Letter::Star,
            Letter::Column(symbols) => Letter::Column(
                symbols
                    .into_iter()
                    .map(|s| if s == Symbol::Box { Symbol::Digit(z) } else { s })
                    .collect(),
            ),
        };
        source.letter_index(&letter).expect("substituted letter")
    })
}

fn prefixed(head: &[LetterIndex], word: &IndexLasso) -> IndexLasso {
    word.prepend(head)
}

/// Turns a witness of the check into a concrete counterexample over the
/// original automaton. Returns `None` for non-weak automata, which have no
/// word-level witness.
pub fn expand_witness(aut: &Automaton, witness: &Witness) -> Option<Counterexample> {
    let (trimmed, _) = aut.trim_accessible();
    let mut min = minimize_weak(&trimmed).ok()?.target;
    // a component-indexed pair from the dim1 check on a one-component
    // sequential automaton refers to its parallel relabelling
    if matches!(witness, Witness::PairMismatch { component: Some(_), .. })
        && min.alphabet().encoding() == EncodingKind::Sequential
    {
        min = min
            .relabel(AlphabetSpec::parallel(min.alphabet().base(), 1).expect("valid"))
            .ok()?;
    }
    let alphabet = min.alphabet().clone();
    let q0 = min.initial();
    let top = alphabet.base() - 1;
    let pair = |left: IndexLasso, right: IndexLasso| orient(aut, FoundPair { left, right });
    match witness {
        Witness::NotWeak => None,
        Witness::NotShape { state, reason } => {
            let q = min.run(q0, &state.access);
            let word = match reason {
                ShapeReason::NoSeparator => {
                    let digits: Vec<LetterIndex> = alphabet.digit_letters().collect();
                    let cycle = find_lasso(
                        min.state_count(),
                        &[(q, vec![], vec![])],
                        |v, out| out.extend(digits.iter().map(|&a| (min.step(v, a), a, a))),
                        |v| v == q,
                        None,
                    )?;
                    Lasso::new(state.access.clone(), cycle.left.period)
                }
                _ => {
                    let star = alphabet.star();
                    let all: Vec<LetterIndex> = alphabet.letters().collect();
                    let rest = accepted_lasso(&min, min.step(q, star), &all)?;
                    let mut head = state.access.clone();
                    head.push(star);
                    prefixed(&head, &rest)
                }
            };
            Some(Counterexample::BadShape { word })
        }
        Witness::ZeroLoopBroken { zero } => {
            let w = distinguishing_lasso(&min, q0, &min, min.run(q0, zero))?;
            Some(pair(w.clone(), prefixed(zero, &w)))
        }
        Witness::PairMismatch {
            component,
            state,
            letter,
            dual,
        } => {
            let q = min.run(q0, &state.access);
            let (fb, f0) = match component {
                Some(f) => (fix_parallel(&min, *f, top).ok()?, fix_parallel(&min, *f, 0).ok()?),
                None => (fix_sequential(&min, top).ok()?, fix_sequential(&min, 0).ok()?),
            };
            let x = distinguishing_lasso(
                &fb.automaton,
                fb.state(min.step(q, *letter), 0),
                &f0.automaton,
                f0.state(min.step(q, *dual), 0),
            )?;
            let fixed = fb.automaton.alphabet();
            let mut lh = state.access.clone();
            lh.push(*letter);
            let mut rh = state.access.clone();
            rh.push(*dual);
            let left = prefixed(&lh, &unfix(&x, fixed, &alphabet, top));
            let right = prefixed(&rh, &unfix(&x, fixed, &alphabet, 0));
            Some(pair(left, right))
        }
        Witness::ComplementPrefix { letter } => {
            let all: Vec<LetterIndex> = alphabet.letters().collect();
            let rest = accepted_lasso(&min, min.step(q0, *letter), &all)?;
            Some(Counterexample::BadShape {
                word: prefixed(&[*letter], &rest),
            })
        }
        Witness::SignNotAbsorbed { letter } => {
            let s = *letter;
            let w = distinguishing_lasso(&min, min.run(q0, &[s, s]), &min, min.step(q0, s))?;
            Some(pair(prefixed(&[s, s], &w), prefixed(&[s], &w)))
        }
        Witness::ComplementInitialLanguage { component } => {
            let fb = fix_parallel(&min, *component, top).ok()?;
            let f0 = fix_parallel(&min, *component, 0).ok()?;
            let x = distinguishing_lasso(&fb.automaton, q0, &f0.automaton, q0)?;
            let fixed = fb.automaton.alphabet();
            Some(pair(unfix(&x, fixed, &alphabet, top), unfix(&x, fixed, &alphabet, 0)))
        }
    }
}

/// Literal check: every lasso with prefix and period of at most `max_len`
/// letters that is accepted must be an encoding, and every other encoding of
/// its value (natural parts up to the default bound) must be accepted too.
/// Unsigned reading only.
pub fn enumerate_counterexample(aut: &Automaton, max_len: usize) -> Option<Counterexample> {
    let letters = aut.letter_count();
    let words = |len: usize| -> Vec<Vec<LetterIndex>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..letters).map(move |a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        out
    };
    let prefixes: Vec<Vec<LetterIndex>> = (0..=max_len).flat_map(words).collect();
    let periods: Vec<Vec<LetterIndex>> = (1..=max_len).flat_map(words).collect();
    for prefix in &prefixes {
        for period in &periods {
            if let Some(cx) = audit_word(aut, &Lasso::new(prefix.clone(), period.clone())) {
                return Some(cx);
            }
        }
    }
    None
}

/// Checks one word: if accepted, it must be an encoding whose alternatives
/// are all accepted.
fn audit_word(aut: &Automaton, word: &IndexLasso) -> Option<Counterexample> {
    if !aut.accepts_lasso(&word.prefix, &word.period) {
        return None;
    }
    let alphabet = aut.alphabet();
    if value_of(word, alphabet, Reading::Unsigned).is_err() {
        return Some(Counterexample::BadShape { word: word.clone() });
    }
    let letters = lasso_from_indices(&word.prefix, &word.period, alphabet);
    let pw = PairWord::from_lasso_word(&letters).expect("valid encoding");
    let bound = default_natural_bound(&pw, alphabet).expect("valid encoding");
    for alt in alternative_encodings(&pw, alphabet, bound).expect("valid encoding") {
        let lw = alt.to_lasso_word();
        let other = Lasso::new(
            to_indices(&lw.prefix, alphabet).expect("same alphabet"),
            to_indices(&lw.period, alphabet).expect("same alphabet"),
        );
        if !aut.accepts_lasso(&other.prefix, &other.period) {
            return Some(Counterexample::Pair {
                accepted: word.clone(),
                rejected: other,
            });
        }
    }
    None
}

/// Random spot check of `samples` well-formed words (unsigned reading), seeded
/// for reproducibility. Natural parts, fraction prefixes and periods have at
/// most `max_len` letters.
pub fn sample_counterexample(
    aut: &Automaton,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Option<Counterexample> {
    let alphabet = aut.alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digits = alphabet.digit_letter_count();
    let block = match alphabet.encoding() {
        EncodingKind::Sequential => alphabet.dim(),
        EncodingKind::Parallel => 1,
    };
    for _ in 0..samples {
        let nat_len = rng.gen_range(0..=max_len / block) * block;
        let frac_len = rng.gen_range(0..=max_len);
        let per_len = rng.gen_range(1..=max_len.max(1));
        let mut prefix: Vec<LetterIndex> = (0..nat_len).map(|_| rng.gen_range(0..digits)).collect();
        prefix.push(alphabet.star());
        prefix.extend((0..frac_len).map(|_| rng.gen_range(0..digits)));
        let period: Vec<LetterIndex> = (0..per_len).map(|_| rng.gen_range(0..digits)).collect();
        if let Some(cx) = audit_word(aut, &Lasso::new(prefix, period)) {
            return Some(cx);
        }
    }
    None
}

/// Number of components in which two parallel encodings with the same `*`
/// position differ, comparing digit sequences as infinite words. `None` when
/// the `*` positions or widths differ.
pub fn component_distance(x: &PairWord, y: &PairWord) -> Option<usize> {
    if x.stars != y.stars || x.width() != y.width() {
        return None;
    }
    let mut count = 0;
    for c in 0..x.width() {
        let a = x.component_digits(c).ok()?;
        let b = y.component_digits(c).ok()?;
        if a != b {
            count += 1;
        }
    }
    Some(count)
}
