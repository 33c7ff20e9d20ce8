//! Automaton generators: known saturated families, random weak automata,
//! mutants and products, used by tests, the CLI and the benchmarks.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alphabet::{AlphabetError, AlphabetSpec, EncodingKind, LetterIndex};
use crate::automaton::{Automaton, AutomatonError, StateId};
use crate::check::{sign_letters, CheckMode};
use crate::minimize::minimize_weak;
use crate::scc::SccInfo;

/// Families of automata known to be saturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Every encoding of every non-negative vector.
    FullSpace,
    /// The encodings of the zero vector.
    ZeroOnly,
    /// Vectors with every component in [0, 1].
    UnitBox,
    /// Vectors of non-negative integers.
    Integers,
    /// Every vector, in b-complement.
    ComplementFull,
    /// The zero vector, in b-complement.
    ComplementZero,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::FullSpace,
        Family::ZeroOnly,
        Family::UnitBox,
        Family::Integers,
        Family::ComplementFull,
        Family::ComplementZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::FullSpace => "full-space",
            Family::ZeroOnly => "zero-only",
            Family::UnitBox => "unit-box",
            Family::Integers => "integers",
            Family::ComplementFull => "complement-full",
            Family::ComplementZero => "complement-zero",
        }
    }

    pub fn is_complement(self) -> bool {
        matches!(self, Family::ComplementFull | Family::ComplementZero)
    }

    /// The check that should accept members of this family.
    pub fn mode(self, encoding: EncodingKind) -> CheckMode {
        match (self.is_complement(), encoding) {
            (true, _) => CheckMode::Complement,
            (false, EncodingKind::Parallel) => CheckMode::Parallel,
            (false, EncodingKind::Sequential) => CheckMode::Sequential,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("b-complement families are parallel only")]
    ComplementNeedsParallel,
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Incremental table builder; unset transitions go to a sink added at the
/// end.
struct Builder {
    alphabet: AlphabetSpec,
    delta: Vec<Option<StateId>>,
    accepting: Vec<StateId>,
    states: usize,
}

impl Builder {
    fn new(alphabet: AlphabetSpec, states: usize) -> Builder {
        let letters = alphabet.letter_count();
        Builder {
            alphabet,
            delta: vec![None; states * letters],
            accepting: Vec::new(),
            states,
        }
    }

    fn set(&mut self, q: StateId, a: LetterIndex, p: StateId) {
        self.delta[q * self.alphabet.letter_count() + a] = Some(p);
    }

    fn accept(&mut self, q: StateId) {
        self.accepting.push(q);
    }

    fn build(self) -> Result<Automaton, AutomatonError> {
        Automaton::from_partial(self.alphabet, self.states, 0, self.accepting, self.delta, true)
    }
}

/// The full-space automaton over a parallel alphabet: natural part, then
/// fractional part, then the sink. Three states.
fn full_space_parallel(base: u32, dim: usize) -> Result<Automaton, GenError> {
    let alphabet = AlphabetSpec::parallel(base, dim)?;
    let mut b = Builder::new(alphabet.clone(), 2);
    for a in alphabet.digit_letters() {
        b.set(0, a, 0);
        b.set(1, a, 1);
    }
    b.set(0, alphabet.star(), 1);
    b.accept(1);
    Ok(b.build()?)
}

/// The full-space automaton over a sequential alphabet: `d` states counting
/// digits modulo `d`, the fractional loop, and the sink. `d + 2` states.
fn full_space_sequential(base: u32, dim: usize) -> Result<Automaton, GenError> {
    let alphabet = AlphabetSpec::sequential(base, dim)?;
    let frac = dim;
    let mut b = Builder::new(alphabet.clone(), dim + 1);
    for i in 0..dim {
        for a in alphabet.digit_letters() {
            b.set(i, a, (i + 1) % dim);
        }
    }
    for a in alphabet.digit_letters() {
        b.set(frac, a, frac);
    }
    b.set(0, alphabet.star(), frac);
    b.accept(frac);
    Ok(b.build()?)
}

fn zero_only(alphabet: &AlphabetSpec) -> Result<Automaton, GenError> {
    let mut b = Builder::new(alphabet.clone(), 2);
    let zero = alphabet.zero();
    b.set(0, zero, 0);
    b.set(0, alphabet.star(), 1);
    b.set(1, zero, 1);
    b.accept(1);
    Ok(b.build()?)
}

/// Natural states `N_S` and fractional states `F_S`, where `S` is the set of
/// components whose natural part ended with a 1 (so their fraction must be
/// 0^ω). Numbered `N_S = S`, `F_S = 2^d + S`.
fn unit_box(alphabet: &AlphabetSpec) -> Result<Automaton, GenError> {
    let d = alphabet.dim();
    let subsets = 1usize << d;
    let mut b = Builder::new(alphabet.clone(), 2 * subsets);
    let mask_of = |a: LetterIndex, digit: u32| -> usize {
        (0..d)
            .filter(|&f| alphabet.component(a, f) == Some(digit))
            .fold(0, |m, f| m | (1 << f))
    };
    for a in alphabet.digit_letters() {
        let zeros = mask_of(a, 0);
        let ones = mask_of(a, 1);
        // after a trailing 1 no further natural digit is allowed
        if zeros | ones == subsets - 1 {
            b.set(0, a, ones);
        }
        for s in 0..subsets {
            if zeros & s == s {
                b.set(subsets + s, a, subsets + s);
            }
        }
    }
    for s in 0..subsets {
        b.set(s, alphabet.star(), subsets + s);
        b.accept(subsets + s);
    }
    Ok(b.build()?)
}

/// Natural part free; each fraction component is constantly 0 or constantly
/// b-1, fixed by the first fractional letter.
fn integers(alphabet: &AlphabetSpec) -> Result<Automaton, GenError> {
    let letters: Vec<LetterIndex> = sign_letters(alphabet);
    let mut b = Builder::new(alphabet.clone(), 2 + letters.len());
    for a in alphabet.digit_letters() {
        b.set(0, a, 0);
    }
    b.set(0, alphabet.star(), 1);
    for (i, &a) in letters.iter().enumerate() {
        b.set(1, a, 2 + i);
        b.set(2 + i, a, 2 + i);
        b.accept(2 + i);
    }
    Ok(b.build()?)
}

fn complement_full(alphabet: &AlphabetSpec) -> Result<Automaton, GenError> {
    let mut b = Builder::new(alphabet.clone(), 3);
    for a in sign_letters(alphabet) {
        b.set(0, a, 1);
    }
    for a in alphabet.digit_letters() {
        b.set(1, a, 1);
        b.set(2, a, 2);
    }
    b.set(1, alphabet.star(), 2);
    b.accept(2);
    Ok(b.build()?)
}

/// Each component is all 0 or all b-1, which both encode 0.
fn complement_zero(alphabet: &AlphabetSpec) -> Result<Automaton, GenError> {
    let signs = sign_letters(alphabet);
    let k = signs.len();
    let mut b = Builder::new(alphabet.clone(), 1 + 2 * k);
    for (i, &s) in signs.iter().enumerate() {
        let (nat, frac) = (1 + i, 1 + k + i);
        b.set(0, s, nat);
        b.set(nat, s, nat);
        b.set(nat, alphabet.star(), frac);
        b.set(frac, s, frac);
        b.accept(frac);
    }
    Ok(b.build()?)
}

/// Trimmed minimal automaton accepting the same language.
pub fn minimal(aut: &Automaton) -> Automaton {
    let (trimmed, _) = aut.trim_accessible();
    minimize_weak(&trimmed)
        .expect("generated automata are weak")
        .target
}

/// A member of a known saturated family. Full space uses the textbook
/// constructions (3 states parallel, `d + 2` sequential); the other
/// sequential members are sequentialized from the parallel ones and
/// minimized.
pub fn gen_known_rva(
    family: Family,
    base: u32,
    dim: usize,
    encoding: EncodingKind,
) -> Result<Automaton, GenError> {
    if family.is_complement() && encoding != EncodingKind::Parallel {
        return Err(GenError::ComplementNeedsParallel);
    }
    match (family, encoding) {
        (Family::FullSpace, EncodingKind::Parallel) => return full_space_parallel(base, dim),
        (Family::FullSpace, EncodingKind::Sequential) => return full_space_sequential(base, dim),
        _ => {}
    }
    let alphabet = AlphabetSpec::parallel(base, dim)?;
    let parallel = match family {
        Family::FullSpace => unreachable!("handled above"),
        Family::ZeroOnly => zero_only(&alphabet)?,
        Family::UnitBox => unit_box(&alphabet)?,
        Family::Integers => integers(&alphabet)?,
        Family::ComplementFull => complement_full(&alphabet)?,
        Family::ComplementZero => complement_zero(&alphabet)?,
    };
    Ok(match encoding {
        EncodingKind::Parallel => parallel,
        EncodingKind::Sequential => minimal(&parallel.sequentialize()?),
    })
}

/// Full space over base `base`, dimension 1, with the natural part read by a
/// cycle of `k` states. Minimizes to 3 states; `k + 2` states in total.
pub fn padded_full_space(base: u32, k: usize) -> Result<Automaton, GenError> {
    let alphabet = AlphabetSpec::parallel(base, 1)?;
    let frac = k;
    let mut b = Builder::new(alphabet.clone(), k + 1);
    for q in 0..k {
        for a in alphabet.digit_letters() {
            b.set(q, a, (q + 1) % k);
        }
        b.set(q, alphabet.star(), frac);
    }
    for a in alphabet.digit_letters() {
        b.set(frac, a, frac);
    }
    b.accept(frac);
    Ok(b.build()?)
}

/// Makes acceptance uniform on every SCC by copying the flag of the SCC's
/// least state.
pub fn make_weak(aut: &Automaton) -> Automaton {
    let sccs = SccInfo::compute(aut);
    let n = aut.state_count();
    let mut flag = vec![None; sccs.component_count()];
    for q in 0..n {
        flag[sccs.component_of(q)].get_or_insert(aut.is_accepting(q));
    }
    let accepting = (0..n).filter(|&q| flag[sccs.component_of(q)] == Some(true));
    let delta = (0..n).flat_map(|q| aut.row(q).to_vec()).collect();
    Automaton::new(aut.alphabet().clone(), n, aut.initial(), accepting, delta)
        .expect("same table")
}

/// Random total table with acceptance chosen per SCC. Same seed, same
/// automaton.
pub fn gen_random_weak(
    n: usize,
    base: u32,
    dim: usize,
    encoding: EncodingKind,
    seed: u64,
) -> Result<Automaton, GenError> {
    let alphabet = AlphabetSpec::new(base, dim, encoding)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_weak(&mut rng, n, &alphabet))
}

pub fn random_weak(rng: &mut impl Rng, n: usize, alphabet: &AlphabetSpec) -> Automaton {
    assert!(n >= 1, "an automaton needs a state");
    let letters = alphabet.letter_count();
    let delta: Vec<StateId> = (0..n * letters).map(|_| rng.gen_range(0..n)).collect();
    let table = Automaton::new(alphabet.clone(), n, 0, [], delta.clone()).expect("valid table");
    let sccs = SccInfo::compute(&table);
    let flags: Vec<bool> = (0..sccs.component_count()).map(|_| rng.gen_bool(0.5)).collect();
    let accepting = (0..n).filter(|&q| flags[sccs.component_of(q)]);
    Automaton::new(alphabet.clone(), n, 0, accepting, delta).expect("valid table")
}

/// Random automaton with a natural part of `nat` states and a fractional
/// part of `frac` states, plus a sink. `*` only leads from the natural part
/// into the fractional part, and only fractional SCCs may accept. For
/// b-complement, state 0 reads a sign letter first. Parallel alphabets only.
pub fn random_shaped(
    rng: &mut impl Rng,
    nat: usize,
    frac: usize,
    alphabet: &AlphabetSpec,
    complement: bool,
) -> Automaton {
    assert_eq!(alphabet.encoding(), EncodingKind::Parallel);
    assert!(nat >= 1 && frac >= 1);
    let star = alphabet.star();
    let signs = sign_letters(alphabet);
    let sink = nat + frac;
    let n = sink + 1;
    let mut b = Builder::new(alphabet.clone(), n);
    let sink_chance = 0.15;
    let pick = |rng: &mut dyn rand::RngCore, lo: usize, hi: usize| -> StateId {
        if rng.gen_bool(sink_chance) {
            sink
        } else {
            rng.gen_range(lo..hi)
        }
    };
    // leading zeros are harmless more often than not
    let zero_loop = !complement && rng.gen_bool(0.5);
    for q in 0..nat {
        for a in alphabet.digit_letters() {
            let target = if complement && q == 0 && !signs.contains(&a) {
                sink
            } else if zero_loop && q == 0 && a == alphabet.zero() {
                0
            } else {
                pick(rng, 0, nat)
            };
            b.set(q, a, target);
        }
        let star_target = if complement && q == 0 { sink } else { pick(rng, nat, nat + frac) };
        b.set(q, star, star_target);
    }
    for q in nat..nat + frac {
        for a in alphabet.digit_letters() {
            b.set(q, a, pick(rng, nat, nat + frac));
        }
        b.set(q, star, sink);
    }
    for a in alphabet.letters() {
        b.set(sink, a, sink);
    }
    let table = b.build().expect("valid table");
    let sccs = SccInfo::compute(&table);
    let flags: Vec<bool> = (0..sccs.component_count()).map(|_| rng.gen_bool(0.5)).collect();
    let accepting = (nat..nat + frac).filter(|&q| flags[sccs.component_of(q)]);
    let delta = (0..n).flat_map(|q| table.row(q).to_vec()).collect();
    Automaton::new(alphabet.clone(), n, 0, accepting, delta).expect("valid table")
}

/// One random edit: redirect a transition, or flip the acceptance of an SCC.
/// The result is made weak again.
pub fn mutate(rng: &mut impl Rng, aut: &Automaton) -> Automaton {
    let n = aut.state_count();
    let letters = aut.letter_count();
    let mut delta: Vec<StateId> = (0..n).flat_map(|q| aut.row(q).to_vec()).collect();
    let mut accepting: Vec<bool> = (0..n).map(|q| aut.is_accepting(q)).collect();
    if rng.gen_bool(0.6) {
        let slot = rng.gen_range(0..n * letters);
        delta[slot] = rng.gen_range(0..n);
    } else {
        let sccs = SccInfo::compute(aut);
        let c = sccs.component_of(rng.gen_range(0..n));
        for q in (0..n).filter(|&q| sccs.component_of(q) == c) {
            accepting[q] = !accepting[q];
        }
    }
    let accepting = (0..n).filter(|&q| accepting[q]);
    let raw = Automaton::new(aut.alphabet().clone(), n, aut.initial(), accepting, delta)
        .expect("same shape");
    make_weak(&raw)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Union,
    Intersection,
}

/// Synchronous product accepting the union or intersection. Weak inputs give
/// a weak product.
pub fn product(a: &Automaton, b: &Automaton, combine: Combine) -> Automaton {
    assert_eq!(a.alphabet(), b.alphabet(), "product needs one alphabet");
    let nb = b.state_count();
    let n = a.state_count() * nb;
    let letters = a.letter_count();
    let mut delta = Vec::with_capacity(n * letters);
    let mut accepting = Vec::new();
    for x in 0..a.state_count() {
        for y in 0..nb {
            delta.extend((0..letters).map(|l| a.step(x, l) * nb + b.step(y, l)));
            let (fa, fb) = (a.is_accepting(x), b.is_accepting(y));
            let acc = match combine {
                Combine::Union => fa || fb,
                Combine::Intersection => fa && fb,
            };
            if acc {
                accepting.push(x * nb + y);
            }
        }
    }
    let raw = Automaton::new(
        a.alphabet().clone(),
        n,
        a.initial() * nb + b.initial(),
        accepting,
        delta,
    )
    .expect("product table");
    raw.trim_accessible().0
}

/// One automaton of a test corpus with the check it should be run under.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub automaton: Automaton,
    pub mode: CheckMode,
    pub origin: &'static str,
}

/// Seeded corpus of small weak automata (at most `max_states` states) mixing
/// random tables, shaped random automata, mutants and products of known
/// saturated automata, over bases 2 and 3, dimensions 1 and 2, both
/// encodings, and b-complement.
pub fn corpus(seed: u64, count: usize, max_states: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let base = *[2u32, 3].choose(&mut rng).expect("nonempty");
        let dim = *[1usize, 2].choose(&mut rng).expect("nonempty");
        let encoding = if rng.gen_bool(0.5) {
            EncodingKind::Parallel
        } else {
            EncodingKind::Sequential
        };
        let complement = encoding == EncodingKind::Parallel && rng.gen_bool(0.3);
        let mode = match (complement, encoding) {
            (true, _) => CheckMode::Complement,
            (false, EncodingKind::Parallel) => CheckMode::Parallel,
            (false, EncodingKind::Sequential) => CheckMode::Sequential,
        };
        let alphabet = AlphabetSpec::new(base, dim, encoding).expect("valid");
        let par = AlphabetSpec::parallel(base, dim).expect("valid");
        let families: Vec<Family> = Family::ALL
            .into_iter()
            .filter(|f| f.is_complement() == complement)
            .collect();
        let known = |rng: &mut ChaCha8Rng| {
            let family = *families.choose(rng).expect("nonempty");
            gen_known_rva(family, base, dim, encoding).expect("valid parameters")
        };
        let (automaton, origin) = match rng.gen_range(0..5) {
            0 => {
                let n = rng.gen_range(1..=max_states);
                (random_weak(&mut rng, n, &alphabet), "random")
            }
            1 => {
                let nat = rng.gen_range(1..=3);
                let frac = rng.gen_range(1..=3);
                let shaped = random_shaped(&mut rng, nat, frac, &par, complement);
                let shaped = match encoding {
                    EncodingKind::Parallel => shaped,
                    EncodingKind::Sequential => shaped.sequentialize().expect("parallel"),
                };
                (shaped, "shaped")
            }
            2 => {
                let k = known(&mut rng);
                let m = mutate(&mut rng, &k);
                (m, "mutant")
            }
            3 => {
                let x = known(&mut rng);
                let y = known(&mut rng);
                let combine = if rng.gen_bool(0.5) { Combine::Union } else { Combine::Intersection };
                let p = product(&x, &y, combine);
                let p = if rng.gen_bool(0.5) { mutate(&mut rng, &p) } else { p };
                (p, "product")
            }
            _ => (known(&mut rng), "known"),
        };
        // keep the corpus small: use the minimal form when it fits
        let small = if automaton.state_count() <= max_states {
            automaton
        } else {
            minimal(&automaton)
        };
        if small.state_count() <= max_states {
            out.push(CorpusEntry {
                automaton: small,
                mode,
                origin,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check;

    #[test]
    fn full_space_sizes() {
        for b in 2..=3 {
            for d in 1..=3 {
                assert_eq!(gen_known_rva(Family::FullSpace, b, d, EncodingKind::Parallel).unwrap().state_count(), 3);
                let seq = gen_known_rva(Family::FullSpace, b, d, EncodingKind::Sequential).unwrap();
                assert_eq!(seq.state_count(), d + 2);
                assert_eq!(minimal(&seq).state_count(), d + 2);
            }
        }
    }

    #[test]
    fn known_families_pass_their_checks() {
        for family in Family::ALL {
            for encoding in [EncodingKind::Parallel, EncodingKind::Sequential] {
                if family.is_complement() && encoding == EncodingKind::Sequential {
                    continue;
                }
                for b in 2..=3 {
                    for d in 1..=2 {
                        let a = gen_known_rva(family, b, d, encoding).unwrap();
                        let v = check(&a, family.mode(encoding)).unwrap();
                        assert!(v.answer(), "{family} b={b} d={d} {encoding}: {v:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn random_weak_is_seeded_and_weak() {
        let x = gen_random_weak(6, 2, 2, EncodingKind::Parallel, 7).unwrap();
        let y = gen_random_weak(6, 2, 2, EncodingKind::Parallel, 7).unwrap();
        assert_eq!(x, y);
        for seed in 0..50 {
            assert!(gen_random_weak(8, 3, 1, EncodingKind::Sequential, seed).unwrap().is_weak());
        }
    }

    #[test]
    fn padded_full_space_minimizes_to_three() {
        let a = padded_full_space(2, 50).unwrap();
        assert_eq!(a.state_count(), 52);
        assert_eq!(minimal(&a).state_count(), 3);
    }

    #[test]
    fn corpus_respects_size() {
        let c = corpus(1, 60, 8);
        assert_eq!(c.len(), 60);
        assert!(c.iter().all(|e| e.automaton.state_count() <= 8 && e.automaton.is_weak()));
    }
}
