//! Minimization of weak deterministic Büchi automata.
//!
//! States are first coloured by walking the SCC DAG from the sinks upwards:
//! a recurrent SCC gets the least colour not below the colours it can exit to
//! whose parity matches its acceptance (even = accepting), and a transient
//! state takes the largest colour among its successors. Language-equivalent
//! states always receive equal colours, so minimizing the automaton as a DFA
//! whose final states are the even-coloured ones yields the minimal weak
//! automaton.

use std::collections::VecDeque;

use thiserror::Error;

use crate::alphabet::AlphabetSpec;
use crate::automaton::{Automaton, AutomatonError, StateId};
use crate::scc::SccInfo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimizeError {
    #[error("automaton is not weak")]
    NotWeak,
    #[error("automata do not share one alphabet")]
    AlphabetMismatch,
    #[error("no automata given")]
    Empty,
    #[error("{count} automata cannot be routed from a fresh state over {letters} letters")]
    TooManyAutomata { count: usize, letters: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// A language-preserving surjection from `source` onto its minimal quotient.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub source: Automaton,
    pub target: Automaton,
    pub map: Vec<StateId>,
}

impl Morphism {
    pub fn image(&self, q: StateId) -> StateId {
        self.map[q]
    }

    /// Source states grouped by target state, each group ascending.
    pub fn classes(&self) -> Vec<Vec<StateId>> {
        let mut out = vec![Vec::new(); self.target.state_count()];
        for (q, &t) in self.map.iter().enumerate() {
            out[t].push(q);
        }
        out
    }
}

/// Per-state colour; even colours mark states whose eventual SCC is accepting.
pub fn colours(aut: &Automaton, sccs: &SccInfo) -> Vec<u32> {
    let count = sccs.component_count();
    let mut members: Vec<Vec<StateId>> = vec![Vec::new(); count];
    for q in 0..aut.state_count() {
        members[sccs.component_of(q)].push(q);
    }
    let mut colour_of_scc = vec![0u32; count];
    // component ids are a reverse topological order: successors come first
    for c in 0..count {
        let exits = members[c]
            .iter()
            .flat_map(|&q| aut.successors(q))
            .filter(|&p| sccs.component_of(p) != c)
            .map(|p| colour_of_scc[sccs.component_of(p)])
            .max();
        let kind = sccs.kind(c);
        colour_of_scc[c] = if !kind.is_recurrent() {
            exits.unwrap_or(0)
        } else {
            let parity = u32::from(!aut.is_accepting(members[c][0]));
            match exits {
                None => parity,
                Some(m) if m % 2 == parity => m,
                Some(m) => m + 1,
            }
        };
    }
    (0..aut.state_count())
        .map(|q| colour_of_scc[sccs.component_of(q)])
        .collect()
}

/// Coarsest partition refining `initial` that is stable under every letter.
/// Hopcroft's algorithm: each split re-queues only the smaller half unless the
/// split block was already pending.
pub(crate) fn refine(aut: &Automaton, initial: &[usize]) -> Vec<usize> {
    let n = aut.state_count();
    let letters = aut.letter_count();

    // predecessors per letter, CSR
    let mut pred_start = vec![0usize; letters * n + 1];
    for q in 0..n {
        for (a, &p) in aut.row(q).iter().enumerate() {
            pred_start[a * n + p + 1] += 1;
        }
    }
    for i in 0..letters * n {
        pred_start[i + 1] += pred_start[i];
    }
    let mut fill = pred_start.clone();
    let mut pred = vec![0usize; letters * n];
    for q in 0..n {
        for (a, &p) in aut.row(q).iter().enumerate() {
            pred[fill[a * n + p]] = q;
            fill[a * n + p] += 1;
        }
    }

    // blocks are contiguous ranges of `elems`
    let block_count = initial.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; block_count];
    for &b in initial {
        sizes[b] += 1;
    }
    let mut start = Vec::with_capacity(block_count);
    let mut acc = 0;
    for &s in &sizes {
        start.push(acc);
        acc += s;
    }
    let mut end: Vec<usize> = start.clone();
    let mut elems = vec![0usize; n];
    let mut pos = vec![0usize; n];
    let mut block = initial.to_vec();
    for q in 0..n {
        let b = initial[q];
        elems[end[b]] = q;
        pos[q] = end[b];
        end[b] += 1;
    }
    // drop empty blocks from the worklist; they never split
    let mut pending = vec![false; block_count * letters];
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for b in 0..block_count {
        if start[b] < end[b] {
            for a in 0..letters {
                pending[b * letters + a] = true;
                work.push_back((b, a));
            }
        }
    }

    let mut marked = vec![0usize; block_count];
    let mut touched = Vec::new();
    let mut splitter = Vec::new();
    while let Some((s, a)) = work.pop_front() {
        pending[s * letters + a] = false;
        splitter.clear();
        splitter.extend_from_slice(&elems[start[s]..end[s]]);
        for &p in &splitter {
            let base = a * n + p;
            for &q in &pred[pred_start[base]..pred_start[base + 1]] {
                let b = block[q];
                let slot = start[b] + marked[b];
                if pos[q] < slot {
                    continue; // already marked
                }
                if marked[b] == 0 {
                    touched.push(b);
                }
                let other = elems[slot];
                elems.swap(pos[q], slot);
                pos[other] = pos[q];
                pos[q] = slot;
                marked[b] += 1;
            }
        }
        for b in touched.drain(..) {
            let m = std::mem::take(&mut marked[b]);
            if m == end[b] - start[b] {
                continue;
            }
            // marked prefix becomes a new block
            let new = start.len();
            start.push(start[b]);
            end.push(start[b] + m);
            start[b] += m;
            marked.push(0);
            for &q in &elems[start[new]..end[new]] {
                block[q] = new;
            }
            pending.extend(std::iter::repeat_n(false, letters));
            for c in 0..letters {
                let smaller = if end[new] - start[new] <= end[b] - start[b] { new } else { b };
                let target = if pending[b * letters + c] { new } else { smaller };
                if !pending[target * letters + c] {
                    pending[target * letters + c] = true;
                    work.push_back((target, c));
                }
            }
        }
    }
    block
}

/// Quotient of `aut` by a letter-stable partition whose blocks agree on
/// `accepting`. Target states are numbered by breadth-first discovery from the
/// initial state, letters in index order; blocks unreachable from it follow in
/// order of their least member.
fn quotient(aut: &Automaton, blocks: &[usize], accepting: impl Fn(StateId) -> bool) -> Morphism {
    let n = aut.state_count();
    let count = blocks.iter().copied().max().map_or(0, |m| m + 1);
    let mut representative = vec![usize::MAX; count];
    for q in (0..n).rev() {
        representative[blocks[q]] = q;
    }
    let mut number = vec![usize::MAX; count];
    let mut order = Vec::with_capacity(count);
    let mut queue = VecDeque::new();
    let roots = std::iter::once(aut.initial()).chain(0..n);
    for root in roots {
        let b = blocks[root];
        if number[b] != usize::MAX {
            continue;
        }
        number[b] = order.len();
        order.push(b);
        queue.push_back(b);
        while let Some(b) = queue.pop_front() {
            for &p in aut.row(representative[b]) {
                let c = blocks[p];
                if number[c] == usize::MAX {
                    number[c] = order.len();
                    order.push(c);
                    queue.push_back(c);
                }
            }
        }
    }
    let letters = aut.letter_count();
    let mut delta = Vec::with_capacity(count * letters);
    for &b in &order {
        delta.extend(aut.row(representative[b]).iter().map(|&p| number[blocks[p]]));
    }
    let target = Automaton::new(
        aut.alphabet().clone(),
        count,
        0,
        order
            .iter()
            .enumerate()
            .filter(|(_, &b)| accepting(representative[b]))
            .map(|(i, _)| i),
        delta,
    )
    .expect("quotient is well formed");
    Morphism {
        source: aut.clone(),
        target,
        map: blocks.iter().map(|&b| number[b]).collect(),
    }
}

/// Minimal weak automaton equivalent to `aut`, with the state map. Every
/// state is kept in the quotient, accessible or not.
pub fn minimize_weak(aut: &Automaton) -> Result<Morphism, MinimizeError> {
    let sccs = aut.sccs();
    if !aut.is_weak() {
        return Err(MinimizeError::NotWeak);
    }
    let colour = colours(aut, &sccs);
    let initial: Vec<usize> = colour.iter().map(|&c| (c % 2) as usize).collect();
    let blocks = refine(aut, &compact(&initial));
    Ok(quotient(aut, &blocks, |q| colour[q] % 2 == 0))
}

// renumber block labels densely
fn compact(labels: &[usize]) -> Vec<usize> {
    let mut seen = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = seen.len();
            *seen.entry(l).or_insert(next)
        })
        .collect()
}

/// Language equivalence across several automata over one alphabet, answered
/// by comparing classes of their joint quotient.
#[derive(Debug, Clone)]
pub struct EquivalenceTable {
    offsets: Vec<usize>,
    morphism: Morphism,
}

impl EquivalenceTable {
    /// Class of state `q` of automaton `i`.
    pub fn class(&self, i: usize, q: StateId) -> usize {
        self.morphism.map[self.offsets[i] + q]
    }

    pub fn equivalent(&self, i: usize, q: StateId, j: usize, p: StateId) -> bool {
        self.class(i, q) == self.class(j, p)
    }

    pub fn class_count(&self) -> usize {
        self.morphism.target.state_count()
    }

    /// The quotient of the disjoint union.
    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }
}

fn shared_alphabet(auts: &[&Automaton]) -> Result<AlphabetSpec, MinimizeError> {
    let first = auts.first().ok_or(MinimizeError::Empty)?;
    if auts.iter().any(|a| a.alphabet() != first.alphabet()) {
        return Err(MinimizeError::AlphabetMismatch);
    }
    Ok(first.alphabet().clone())
}

fn union_table(auts: &[&Automaton]) -> (Vec<usize>, Vec<StateId>, Vec<StateId>) {
    let mut offsets = Vec::with_capacity(auts.len());
    let mut delta = Vec::new();
    let mut accepting = Vec::new();
    let mut offset = 0;
    for a in auts {
        offsets.push(offset);
        for q in 0..a.state_count() {
            delta.extend(a.row(q).iter().map(|&p| p + offset));
            if a.is_accepting(q) {
                accepting.push(q + offset);
            }
        }
        offset += a.state_count();
    }
    (offsets, delta, accepting)
}

/// Joint quotient of the disjoint union plus a fresh initial state: letter 0
/// leads to the first automaton's initial state, letter `i` to that of
/// automaton `min(i, k - 1)`. The fresh state is only a root and takes no part
/// in queries.
pub fn joint_equivalence(auts: &[&Automaton]) -> Result<EquivalenceTable, MinimizeError> {
    let alphabet = shared_alphabet(auts)?;
    let letters = alphabet.letter_count();
    if auts.len() > letters {
        return Err(MinimizeError::TooManyAutomata {
            count: auts.len(),
            letters,
        });
    }
    let (offsets, mut delta, accepting) = union_table(auts);
    let fresh = delta.len() / letters;
    delta.extend((0..letters).map(|a| offsets[a.min(auts.len() - 1)] + auts[a.min(auts.len() - 1)].initial()));
    let union = Automaton::new(alphabet, fresh + 1, fresh, accepting, delta)?;
    Ok(EquivalenceTable {
        offsets,
        morphism: minimize_weak(&union)?,
    })
}

/// Same answers as [`joint_equivalence`] without the fresh state: minimization
/// does not depend on which state is initial, so the union is rooted at the
/// first automaton's initial state.
pub fn joint_equivalence_direct(auts: &[&Automaton]) -> Result<EquivalenceTable, MinimizeError> {
    let alphabet = shared_alphabet(auts)?;
    let (offsets, delta, accepting) = union_table(auts);
    let states = delta.len() / alphabet.letter_count();
    let union = Automaton::new(alphabet, states, auts[0].initial(), accepting, delta)?;
    Ok(EquivalenceTable {
        offsets,
        morphism: minimize_weak(&union)?,
    })
}
