//! Strongly connected components of the transition graph.

use crate::automaton::{Automaton, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SccKind {
    /// A single state that cannot reach itself.
    Transient,
    /// Recurrent, every state accepting.
    Accepting,
    /// Recurrent, no state accepting.
    Rejecting,
    /// Recurrent with both accepting and rejecting states. Never occurs in a
    /// weak automaton.
    Mixed,
}

impl SccKind {
    pub fn is_recurrent(self) -> bool {
        self != SccKind::Transient
    }
}

/// SCC partition of an automaton.
///
/// Components are numbered in the order Tarjan's algorithm closes them, which
/// is a reverse topological order: every transition leaving component `c`
/// enters a component with a smaller id.
#[derive(Debug, Clone)]
pub struct SccInfo {
    component: Vec<usize>,
    kinds: Vec<SccKind>,
}

impl SccInfo {
    pub fn compute(aut: &Automaton) -> SccInfo {
        let component = tarjan(aut.state_count(), |q, out| {
            out.extend(aut.successors(q));
        });
        let count = component.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &c in &component {
            sizes[c] += 1;
        }
        let mut has_accepting = vec![false; count];
        let mut has_rejecting = vec![false; count];
        let mut self_loop = vec![false; count];
        for q in 0..aut.state_count() {
            let c = component[q];
            if aut.is_accepting(q) {
                has_accepting[c] = true;
            } else {
                has_rejecting[c] = true;
            }
            if aut.successors(q).any(|p| p == q) {
                self_loop[c] = true;
            }
        }
        let kinds = (0..count)
            .map(|c| {
                if sizes[c] == 1 && !self_loop[c] {
                    SccKind::Transient
                } else {
                    match (has_accepting[c], has_rejecting[c]) {
                        (true, false) => SccKind::Accepting,
                        (false, true) => SccKind::Rejecting,
                        _ => SccKind::Mixed,
                    }
                }
            })
            .collect();
        SccInfo { component, kinds }
    }

    pub fn component_of(&self, q: StateId) -> usize {
        self.component[q]
    }

    pub fn kind_of(&self, q: StateId) -> SccKind {
        self.kinds[self.component[q]]
    }

    pub fn kind(&self, component: usize) -> SccKind {
        self.kinds[component]
    }

    pub fn component_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn components(&self) -> &[usize] {
        &self.component
    }

    /// Accepting states lying on a cycle.
    pub fn is_accepting_recurrent(&self, aut: &Automaton, q: StateId) -> bool {
        aut.is_accepting(q) && self.kind_of(q).is_recurrent()
    }
}

/// Iterative Tarjan over an implicit graph with `n` nodes. `edges(v, out)`
/// pushes the successors of `v`. Returns the component id of every node,
/// numbered in reverse topological order.
pub(crate) fn tarjan<F>(n: usize, mut edges: F) -> Vec<usize>
where
    F: FnMut(usize, &mut Vec<usize>),
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut next_component = 0usize;

    // successor lists are materialized per frame; each frame keeps a cursor
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let mut scratch = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        scratch.clear();
        edges(root, &mut scratch);
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, std::mem::take(&mut scratch), 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNVISITED {
                    let mut succ = Vec::new();
                    edges(w, &mut succ);
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succ, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            let (v, succ, _) = frames.pop().expect("frame");
            scratch = succ;
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component[w] = next_component;
                    if w == v {
                        break;
                    }
                }
                next_component += 1;
            }
            if let Some(parent) = frames.last() {
                let p = parent.0;
                low[p] = low[p].min(low[v]);
            }
        }
    }
    component
}
