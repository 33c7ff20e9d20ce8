//! Functional graphs: every node has exactly one successor.
//!
//! Used by the dimension-1 check, where the fixed automata have a single
//! digit letter and their digit transitions form such a graph.

use std::collections::HashMap;

/// The cycles of a functional graph.
#[derive(Debug, Clone)]
pub struct Cycles {
    /// Index of the cycle each node eventually enters.
    pub of: Vec<usize>,
    pub on_cycle: Vec<bool>,
    /// Each cycle's nodes in successor order.
    pub lists: Vec<Vec<usize>>,
}

pub fn cycles(succ: &[usize]) -> Cycles {
    const NONE: usize = usize::MAX;
    let n = succ.len();
    let mut of = vec![NONE; n];
    let mut on_cycle = vec![false; n];
    // walk that last visited a node, to spot a cycle closing on the path
    let mut walk = vec![NONE; n];
    let mut lists = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        if of[start] != NONE {
            continue;
        }
        path.clear();
        let mut v = start;
        while of[v] == NONE && walk[v] != start {
            walk[v] = start;
            path.push(v);
            v = succ[v];
        }
        let c = if of[v] != NONE {
            of[v]
        } else {
            let from = path.iter().position(|&x| x == v).expect("cycle closes on the path");
            let cycle = path[from..].to_vec();
            for &x in &cycle {
                on_cycle[x] = true;
            }
            lists.push(cycle);
            lists.len() - 1
        };
        for &x in &path {
            of[x] = c;
        }
    }
    Cycles { of, on_cycle, lists }
}

/// Length of the shortest `p` with `s` a power of `s[..p]`.
fn primitive_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    // prefix function
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi.last().copied().unwrap_or(0);
    if n % p == 0 {
        p
    } else {
        n
    }
}

/// Start of the lexicographically least rotation of `s`.
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Classes of nodes with equal output sequences `out(v), out(succ(v)), ...`,
/// in expected linear time. Cycle nodes are keyed by the least rotation of
/// their cycle's primitive output word and their phase in it; other nodes by
/// their output and their successor's class.
pub fn output_classes<T: Ord + Clone + std::hash::Hash>(succ: &[usize], out: &[T]) -> Vec<usize> {
    assert_eq!(succ.len(), out.len());
    let n = succ.len();
    let cyc = cycles(succ);
    let mut class = vec![usize::MAX; n];
    let mut roots: HashMap<Vec<T>, usize> = HashMap::new();
    let mut next = 0;
    for cycle in &cyc.lists {
        let word: Vec<T> = cycle.iter().map(|&v| out[v].clone()).collect();
        let p = primitive_period(&word);
        let r = least_rotation(&word[..p]);
        let root: Vec<T> = (0..p).map(|i| word[(r + i) % p].clone()).collect();
        let first = *roots.entry(root).or_insert_with(|| {
            next += p;
            next - p
        });
        for (i, &v) in cycle.iter().enumerate() {
            class[v] = first + (i + p - r) % p;
        }
    }

    // a node's class is fixed by its output and its successor's class
    let mut by_step: HashMap<(T, usize), usize> = HashMap::new();
    for cycle in &cyc.lists {
        for &v in cycle {
            by_step.insert((out[v].clone(), class[succ[v]]), class[v]);
        }
    }
    let mut preds = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| !cyc.on_cycle[v]) {
        preds[succ[v]].push(v);
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| cyc.on_cycle[v]).collect();
    while let Some(v) = stack.pop() {
        for &u in &preds[v] {
            class[u] = *by_step.entry((out[u].clone(), class[v])).or_insert_with(|| {
                next += 1;
                next - 1
            });
            stack.push(u);
        }
    }
    class
}
