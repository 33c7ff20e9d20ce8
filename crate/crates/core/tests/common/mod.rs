//! Property suites shared by the `properties` and `acceptance` targets.
//!
//! Each suite runs a deterministic proptest runner and returns the first
//! failure as a string.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rva_core::alphabet::{AlphabetSpec, EncodingKind, LetterIndex, Symbol};
use rva_core::automaton::Automaton;
use rva_core::check::check;
use rva_core::encoding::{
    alternative_encodings, default_natural_bound, fix_component_parallel, fix_component_sequential,
    parallelize, sequentialize, value_fractional, value_real, Lasso, PairWord, Rational,
};
use rva_core::fixing::{fix_parallel, fix_sequential};
use rva_core::format::{parse_automaton, serialize_automaton};
use rva_core::generate::{corpus, gen_random_weak, minimal, random_shaped, random_weak};
use rva_core::minimize::{joint_equivalence, joint_equivalence_direct, minimize_weak};
use rva_core::oracle::{
    component_distance, distinguishing_lasso, enumerate_counterexample, expand_witness, saturation_oracle,
    state_languages_equal, verify_counterexample, Reading,
};
use rva_core::scc::SccKind;
use rva_core::shape::ShapeSets;
use rva_core::word::{lasso_from_indices, to_indices};

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("value_dual_encodings", value_dual_encodings),
    ("value_leading_zero_vectors", value_leading_zero_vectors),
    ("value_alternative_encodings_agree", value_alternative_encodings_agree),
    ("value_partial_sum_sandwich", value_partial_sum_sandwich),
    ("value_fractional_range", value_fractional_range),
    ("word_parallel_sequential_round_trip", word_parallel_sequential_round_trip),
    ("automaton_sequentialize_preserves_language", automaton_sequentialize_preserves_language),
    ("automaton_parallelize_preserves_language", automaton_parallelize_preserves_language),
    ("lasso_rotation_and_unrolling", lasso_rotation_and_unrolling),
    ("weakness_matches_scc_definition", weakness_matches_scc_definition),
    ("trim_preserves_language", trim_preserves_language),
    ("shape_sets_are_fixpoints", shape_sets_are_fixpoints),
    ("empty_states_match_exact_search", empty_states_match_exact_search),
    ("fixing_preserves_weakness", fixing_preserves_weakness),
    ("parallel_fix_word_correspondence", parallel_fix_word_correspondence),
    ("sequential_fix_word_correspondence", sequential_fix_word_correspondence),
    ("fixing_commutes_with_initial_state", fixing_commutes_with_initial_state),
    ("morphism_preserves_language", morphism_preserves_language),
    ("quotient_is_minimal_weak_and_idempotent", quotient_is_minimal_weak_and_idempotent),
    ("joint_equivalence_matches_exact_search", joint_equivalence_matches_exact_search),
    ("component_distance_is_a_metric", component_distance_is_a_metric),
    ("oracle_matches_literal_enumeration", oracle_matches_literal_enumeration),
    ("check_is_deterministic_and_minimality_blind", check_is_deterministic_and_minimality_blind),
    ("generators_are_seed_deterministic", generators_are_seed_deterministic),
    ("format_round_trips_on_corpus", format_round_trips_on_corpus),
];

fn run<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- strategies

#[derive(Debug, Clone, Copy)]
struct Params {
    seed: u64,
    n: usize,
    base: u32,
    dim: usize,
}

fn params(max_n: usize, max_dim: usize) -> impl Strategy<Value = Params> {
    (any::<u64>(), 1..=max_n, 2u32..=3, 1..=max_dim).prop_map(|(seed, n, base, dim)| Params { seed, n, base, dim })
}

fn weak(p: Params, encoding: EncodingKind) -> Automaton {
    let alphabet = AlphabetSpec::new(p.base, p.dim, encoding).unwrap();
    random_weak(&mut ChaCha8Rng::seed_from_u64(p.seed), p.n, &alphabet)
}

/// Raw letter choices, reduced modulo the alphabet size when used.
fn raw_word(min: usize, max: usize) -> impl Strategy<Value = Vec<u16>> {
    vec(any::<u16>(), min..=max)
}

fn letters(raw: &[u16], alphabet: &AlphabetSpec) -> Vec<LetterIndex> {
    raw.iter().map(|&x| x as usize % alphabet.letter_count()).collect()
}

/// Like [`letters`] but without `*`.
fn digit_letters(raw: &[u16], alphabet: &AlphabetSpec) -> Vec<LetterIndex> {
    raw.iter().map(|&x| x as usize % alphabet.digit_letter_count()).collect()
}

/// Pair form of a lasso whose period is `*`-free.
fn pair_word(prefix: &[LetterIndex], period: &[LetterIndex], alphabet: &AlphabetSpec) -> PairWord {
    PairWord::from_lasso_word(&lasso_from_indices(prefix, period, alphabet)).unwrap()
}

fn index_lasso(pw: &PairWord, alphabet: &AlphabetSpec) -> (Vec<LetterIndex>, Vec<LetterIndex>) {
    let word = pw.to_lasso_word();
    (
        to_indices(&word.prefix, alphabet).unwrap(),
        to_indices(&word.period, alphabet).unwrap(),
    )
}

fn accepts(aut: &Automaton, word: &(Vec<LetterIndex>, Vec<LetterIndex>)) -> bool {
    aut.accepts_lasso(&word.0, &word.1)
}

fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn reachable(aut: &Automaton, from: usize) -> Vec<bool> {
    let mut seen = vec![false; aut.state_count()];
    let mut work = VecDeque::from([from]);
    seen[from] = true;
    while let Some(q) = work.pop_front() {
        for p in aut.successors(q) {
            if !seen[p] {
                seen[p] = true;
                work.push_back(p);
            }
        }
    }
    seen
}

// ------------------------------------------------------------------ encoding

/// `u a (b-1)^ω` and `u (a+1) 0^ω` have the same value for `a < b-1`.
pub fn value_dual_encodings() -> Result<(), String> {
    let strategy = (2u32..=5, vec(any::<u32>(), 0..8), any::<u32>(), any::<usize>());
    run(256, strategy, |(base, u, a, star)| {
        let u: Vec<u32> = u.iter().map(|x| x % base).collect();
        let a = a % (base - 1);
        let star = star % (u.len() + 2);
        let alphabet = AlphabetSpec::parallel(base, 1).unwrap();
        let mut low = u.clone();
        low.push(a);
        let mut high = u;
        high.push(a + 1);
        let x = value_real(&PairWord::from_digits(&low, &[base - 1], [star]), &alphabet).unwrap();
        let y = value_real(&PairWord::from_digits(&high, &[0], [star]), &alphabet).unwrap();
        prop_assert_eq!(&x, &y);
        let fx = value_fractional(&Lasso::new(low, vec![base - 1]), base).unwrap();
        let fy = value_fractional(&Lasso::new(high, vec![0]), base).unwrap();
        prop_assert_eq!(fx, fy);
        Ok(())
    })
}

/// A leading zero vector does not change the value.
pub fn value_leading_zero_vectors() -> Result<(), String> {
    let strategy = (params(1, 3), raw_word(0, 6), raw_word(1, 4), any::<usize>());
    run(256, strategy, |(p, prefix, period, star)| {
        let alphabet = AlphabetSpec::parallel(p.base, p.dim).unwrap();
        let prefix = digit_letters(&prefix, &alphabet);
        let period = digit_letters(&period, &alphabet);
        let star = star % (prefix.len() + 1);
        let mut word = prefix.clone();
        word.insert(star, alphabet.star());
        let mut padded = word.clone();
        padded.insert(0, alphabet.zero());
        let x = value_real(&pair_word(&word, &period, &alphabet), &alphabet).unwrap();
        let y = value_real(&pair_word(&padded, &period, &alphabet), &alphabet).unwrap();
        prop_assert_eq!(x, y);
        Ok(())
    })
}

/// Every alternative encoding, in either encoding kind, has the input's value.
pub fn value_alternative_encodings_agree() -> Result<(), String> {
    let strategy = (params(1, 2), raw_word(0, 5), prop_oneof![Just(0u16), Just(u16::MAX), any::<u16>()], any::<usize>(), any::<bool>());
    run(128, strategy, |(p, prefix, tail, star, sequential)| {
        let alphabet = AlphabetSpec::parallel(p.base, p.dim).unwrap();
        let prefix = digit_letters(&prefix, &alphabet);
        // all-zero, all-top or mixed tails, so duals are exercised
        let period = if tail == u16::MAX {
            vec![alphabet.uniform(p.base - 1)]
        } else {
            digit_letters(&[tail], &alphabet)
        };
        let star = star % (prefix.len() + 1);
        let mut word = prefix;
        word.insert(star, alphabet.star());
        let mut pw = pair_word(&word, &period, &alphabet);
        let mut alpha = alphabet.clone();
        if sequential {
            pw = sequentialize(&pw);
            alpha = AlphabetSpec::sequential(p.base, p.dim).unwrap();
        }
        let value = value_real(&pw, &alpha).unwrap();
        let bound = default_natural_bound(&pw, &alpha).unwrap();
        let alternatives = alternative_encodings(&pw, &alpha, bound).unwrap();
        prop_assert!(alternatives.contains(&pw));
        for alt in &alternatives {
            prop_assert_eq!(&value_real(alt, &alpha).unwrap(), &value);
        }
        Ok(())
    })
}

/// The closed form lies between the 64-digit partial sum and that sum plus
/// `b^-64`.
pub fn value_partial_sum_sandwich() -> Result<(), String> {
    let strategy = (2u32..=10, vec(any::<u32>(), 0..12), vec(any::<u32>(), 1..8));
    run(256, strategy, |(base, prefix, period)| {
        let prefix: Vec<u32> = prefix.iter().map(|x| x % base).collect();
        let period: Vec<u32> = period.iter().map(|x| x % base).collect();
        let word = Lasso::new(prefix, period);
        let value = value_fractional(&word, base).unwrap();
        let b = rational(i64::from(base));
        let mut sum = Rational::zero();
        let mut weight = Rational::one();
        for i in 0..64 {
            weight /= &b;
            sum += &weight * rational(i64::from(*word.at(i).unwrap()));
        }
        prop_assert!(sum <= value);
        prop_assert!(value <= sum + weight);
        Ok(())
    })
}

/// `0.w` lies in [0, 1] and is 1 only for `(b-1)^ω`.
pub fn value_fractional_range() -> Result<(), String> {
    let strategy = (2u32..=5, vec(any::<u32>(), 0..6), vec(any::<u32>(), 1..5), any::<bool>());
    run(256, strategy, |(base, prefix, period, top)| {
        let reduce = |w: &[u32]| -> Vec<u32> {
            w.iter().map(|x| if top { base - 1 - x % 2 } else { x % base }).collect()
        };
        let word = Lasso::new(reduce(&prefix), reduce(&period));
        let value = value_fractional(&word, base).unwrap();
        prop_assert!(value >= Rational::zero() && value <= Rational::one());
        let all_top = word.prefix.iter().chain(&word.period).all(|&x| x == base - 1);
        prop_assert_eq!(value == Rational::one(), all_top);
        prop_assert_eq!(
            value_fractional(&Lasso::new(vec![], vec![base - 1]), base).unwrap(),
            Rational::one()
        );
        Ok(())
    })
}

/// Grouping undoes flattening, and flattening undoes grouping on aligned
/// sequential words.
pub fn word_parallel_sequential_round_trip() -> Result<(), String> {
    let strategy = (params(1, 3), raw_word(0, 8), raw_word(0, 5), vec(any::<usize>(), 0..3));
    run(256, strategy, |(p, prefix, period, stars)| {
        let alphabet = AlphabetSpec::parallel(p.base, p.dim).unwrap();
        let prefix = digit_letters(&prefix, &alphabet);
        let period = digit_letters(&period, &alphabet);
        let mut word = prefix.clone();
        let mut cuts: Vec<usize> = stars.iter().map(|s| s % (prefix.len() + 1)).collect();
        cuts.sort_unstable();
        for (rank, cut) in cuts.iter().enumerate() {
            word.insert(cut + rank, alphabet.star());
        }
        let pw = pair_word(&word, &period, &alphabet);
        let seq = sequentialize(&pw);
        prop_assert_eq!(&parallelize(&seq, p.dim).unwrap(), &pw);
        prop_assert_eq!(sequentialize(&parallelize(&seq, p.dim).unwrap()), seq);
        Ok(())
    })
}

// ------------------------------------------------------------------ automata

/// Parallel words are accepted by `A` iff their flattening is accepted by the
/// sequentialized automaton.
pub fn automaton_sequentialize_preserves_language() -> Result<(), String> {
    let strategy = (params(6, 2), vec((raw_word(0, 6), raw_word(1, 4)), 16));
    run(96, strategy, |(p, words)| {
        let a = weak(p, EncodingKind::Parallel);
        let s = a.sequentialize().unwrap();
        prop_assert!(s.is_weak());
        for (prefix, period) in words {
            let prefix = letters(&prefix, a.alphabet());
            let period = digit_letters(&period, a.alphabet());
            let pw = pair_word(&prefix, &period, a.alphabet());
            let flat = index_lasso(&sequentialize(&pw), s.alphabet());
            prop_assert_eq!(a.accepts_lasso(&prefix, &period), accepts(&s, &flat));
        }
        Ok(())
    })
}

/// Aligned sequential words are accepted by `A` iff their grouping is
/// accepted by the parallelized automaton.
pub fn automaton_parallelize_preserves_language() -> Result<(), String> {
    let strategy = (params(6, 2), vec((raw_word(0, 6), raw_word(1, 4)), 16));
    run(96, strategy, |(p, words)| {
        let a = weak(p, EncodingKind::Sequential);
        let par = a.parallelize().unwrap();
        for (prefix, period) in words {
            let prefix = letters(&prefix, par.alphabet());
            let period = digit_letters(&period, par.alphabet());
            let pw = pair_word(&prefix, &period, par.alphabet());
            let flat = index_lasso(&sequentialize(&pw), a.alphabet());
            prop_assert_eq!(par.accepts_lasso(&prefix, &period), accepts(&a, &flat));
        }
        Ok(())
    })
}

pub fn lasso_rotation_and_unrolling() -> Result<(), String> {
    let strategy = (params(8, 2), raw_word(0, 8), raw_word(1, 6), any::<bool>());
    run(256, strategy, |(p, u, v, sequential)| {
        let encoding = if sequential { EncodingKind::Sequential } else { EncodingKind::Parallel };
        let a = weak(p, encoding);
        let u = letters(&u, a.alphabet());
        let v = letters(&v, a.alphabet());
        let base = a.accepts_lasso(&u, &v);
        let uv: Vec<_> = u.iter().chain(&v).copied().collect();
        let vv: Vec<_> = v.iter().chain(&v).copied().collect();
        prop_assert_eq!(base, a.accepts_lasso(&uv, &v));
        prop_assert_eq!(base, a.accepts_lasso(&u, &vv));
        let mut rotated = v.clone();
        rotated.rotate_left(1);
        prop_assert_eq!(base, a.accepts_lasso(&uv[..u.len() + 1], &rotated));
        Ok(())
    })
}

/// `is_weak` holds iff every SCC is all accepting or all rejecting.
pub fn weakness_matches_scc_definition() -> Result<(), String> {
    let strategy = (params(8, 1), vec(any::<u16>(), 8 * 4), vec(any::<bool>(), 8));
    run(256, strategy, |(p, table, accepting)| {
        let alphabet = AlphabetSpec::parallel(p.base, p.dim).unwrap();
        let letters = alphabet.letter_count();
        let delta: Vec<usize> = table.iter().take(p.n * letters).map(|&x| x as usize % p.n).collect();
        let accepting = (0..p.n).filter(|&q| accepting[q]);
        let a = Automaton::new(alphabet, p.n, 0, accepting, delta).unwrap();
        let sccs = a.sccs();
        let mut mixed = false;
        for q in 0..p.n {
            for r in 0..p.n {
                if sccs.component_of(q) == sccs.component_of(r) && a.is_accepting(q) != a.is_accepting(r) {
                    mixed = true;
                }
            }
        }
        prop_assert_eq!(a.is_weak(), !mixed);
        Ok(())
    })
}

/// Trimming keeps acceptance of all lassos with `|u|, |v| ≤ n²`.
pub fn trim_preserves_language() -> Result<(), String> {
    let strategy = (params(8, 2), vec((raw_word(0, 64), raw_word(1, 64)), 16));
    run(128, strategy, |(p, words)| {
        let a = weak(p, EncodingKind::Parallel);
        let (t, map) = a.trim_accessible();
        prop_assert_eq!(map[a.initial()], Some(t.initial()));
        let bound = p.n * p.n;
        for (u, v) in words {
            let u = letters(&u[..u.len().min(bound)], a.alphabet());
            let v = letters(&v[..v.len().min(bound)], a.alphabet());
            prop_assert_eq!(a.accepts_lasso(&u, &v), t.accepts_lasso(&u, &v));
        }
        prop_assert!(state_languages_equal(&a, a.initial(), &t, t.initial()));
        Ok(())
    })
}

// --------------------------------------------------------------------- shape

/// The empty, natural-part and fractional-part sets satisfy their fixpoint
/// equations and every member has a witnessing access word.
pub fn shape_sets_are_fixpoints() -> Result<(), String> {
    let strategy = (params(8, 3), any::<bool>(), any::<bool>());
    run(256, strategy, |(p, sequential, shaped)| {
        let alphabet = AlphabetSpec::new(p.base, p.dim, EncodingKind::Parallel).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let a = if shaped && p.n >= 2 {
            random_shaped(&mut rng, p.n / 2, p.n - p.n / 2, &alphabet, false)
        } else {
            random_weak(&mut rng, p.n, &alphabet)
        };
        let d_seq = if sequential { p.dim } else { 1 };
        let n = a.state_count();
        let star = a.alphabet().star();
        let sets = ShapeSets::compute(&a, d_seq);
        let sccs = a.sccs();

        for q in 0..n {
            let live = reachable(&a, q)
                .iter()
                .enumerate()
                .any(|(r, &seen)| seen && a.is_accepting(r) && sccs.kind_of(r) != SccKind::Transient);
            prop_assert_eq!(sets.empty[q], !live, "state {}", q);
            if sets.empty[q] {
                prop_assert!(a.successors(q).all(|r| sets.empty[r]));
            }
        }

        let m = &sets.modulo;
        prop_assert!(m.contains(0, a.initial()));
        prop_assert!(m.visits <= n * d_seq);
        for i in 0..d_seq {
            for q in (0..n).filter(|&q| m.contains(i, q)) {
                for (letter, &r) in a.row(q).iter().enumerate() {
                    if letter != star {
                        prop_assert!(m.contains((i + 1) % d_seq, r));
                    }
                }
                let w = m.access(i, q);
                prop_assert!(!w.contains(&star));
                prop_assert_eq!(w.len() % d_seq, i);
                prop_assert_eq!(a.run(a.initial(), &w), q);
            }
        }

        let f = &sets.fractional;
        prop_assert!(f.visits <= n);
        for q in 0..n {
            if m.in_any(q) {
                prop_assert!(f.contains(a.step(q, star)));
            }
            if f.contains(q) {
                for (letter, &r) in a.row(q).iter().enumerate() {
                    if letter != star {
                        prop_assert!(f.contains(r));
                    }
                }
                let w: Vec<LetterIndex> = f
                    .access(m, q)
                    .into_iter()
                    .map(|x| if x == usize::MAX { star } else { x })
                    .collect();
                prop_assert_eq!(w.iter().filter(|&&x| x == star).count(), 1);
                prop_assert_eq!(a.run(a.initial(), &w), q);
            }
        }
        Ok(())
    })
}

/// A state is empty iff its language equals that of a rejecting sink.
pub fn empty_states_match_exact_search() -> Result<(), String> {
    run(256, params(6, 2), |p| {
        let a = weak(p, EncodingKind::Parallel);
        let letters = a.letter_count();
        let sink = Automaton::new(a.alphabet().clone(), 1, 0, [], vec![0; letters]).unwrap();
        let sets = ShapeSets::compute(&a, 1);
        for q in 0..a.state_count() {
            prop_assert_eq!(sets.empty[q], state_languages_equal(&a, q, &sink, 0));
        }
        Ok(())
    })
}

// -------------------------------------------------------------------- fixing

pub fn fixing_preserves_weakness() -> Result<(), String> {
    run(256, (params(8, 3), any::<u32>()), |(p, z)| {
        let z = z % p.base;
        let a = weak(p, EncodingKind::Parallel);
        for f in 0..p.dim {
            prop_assert!(fix_parallel(&a, f, z).unwrap().automaton.is_weak());
        }
        let s = weak(p, EncodingKind::Sequential);
        prop_assert!(fix_sequential(&s, z).unwrap().automaton.is_weak());
        Ok(())
    })
}

/// A word whose component `f` is `z` throughout is accepted iff its `□`
/// version is accepted by the fixed automaton.
pub fn parallel_fix_word_correspondence() -> Result<(), String> {
    let strategy = (params(8, 3), any::<u32>(), any::<usize>(), vec((raw_word(0, 8), raw_word(1, 5)), 12));
    run(128, strategy, |(p, z, f, words)| {
        let (z, f) = (z % p.base, f % p.dim);
        let a = weak(p, EncodingKind::Parallel);
        let fixed = fix_parallel(&a, f, z).unwrap().automaton;
        for (u, v) in words {
            let u = letters(&u, a.alphabet());
            let v = digit_letters(&v, a.alphabet());
            let pw = pair_word(&u, &v, a.alphabet());
            let src = fix_component_parallel(&pw, f, Symbol::Digit(z)).unwrap();
            let boxed = fix_component_parallel(&pw, f, Symbol::Box).unwrap();
            prop_assert_eq!(
                accepts(&a, &index_lasso(&src, a.alphabet())),
                accepts(&fixed, &index_lasso(&boxed, fixed.alphabet()))
            );
        }
        Ok(())
    })
}

/// Sequential version: every digit at index `d-1` mod `d` is `z`.
pub fn sequential_fix_word_correspondence() -> Result<(), String> {
    let strategy = (params(8, 3), any::<u32>(), vec((raw_word(0, 8), raw_word(1, 5)), 12));
    run(128, strategy, |(p, z, words)| {
        let z = z % p.base;
        let a = weak(p, EncodingKind::Sequential);
        let fixed = fix_sequential(&a, z).unwrap();
        prop_assert_eq!(fixed.automaton.initial(), fixed.state(a.initial(), 0));
        let fixed = fixed.automaton;
        for (u, v) in words {
            let u = letters(&u, a.alphabet());
            let v = digit_letters(&v, a.alphabet());
            let pw = pair_word(&u, &v, a.alphabet());
            let src = fix_component_sequential(&pw, p.dim, p.dim - 1, Symbol::Digit(z)).unwrap();
            let boxed = fix_component_sequential(&pw, p.dim, p.dim - 1, Symbol::Box).unwrap();
            prop_assert_eq!(
                accepts(&a, &index_lasso(&src, a.alphabet())),
                accepts(&fixed, &index_lasso(&boxed, fixed.alphabet()))
            );
        }
        Ok(())
    })
}

/// Fixing `A` started at `q` gives the language of the fixed `A` at `q`.
pub fn fixing_commutes_with_initial_state() -> Result<(), String> {
    run(128, (params(6, 2), any::<u32>(), any::<usize>()), |(p, z, f)| {
        let (z, f) = (z % p.base, f % p.dim);
        let a = weak(p, EncodingKind::Parallel);
        let s = weak(p, EncodingKind::Sequential);
        let fa = fix_parallel(&a, f, z).unwrap();
        let fs = fix_sequential(&s, z).unwrap();
        for q in 0..p.n {
            let fq = fix_parallel(&a.with_initial(q), f, z).unwrap().automaton;
            let table = joint_equivalence(&[&fa.automaton, &fq]).unwrap();
            prop_assert!(table.equivalent(0, fa.state(q, 0), 1, fq.initial()));
            let sq = fix_sequential(&s.with_initial(q), z).unwrap().automaton;
            let table = joint_equivalence(&[&fs.automaton, &sq]).unwrap();
            prop_assert!(table.equivalent(0, fs.state(q, 0), 1, sq.initial()));
        }
        Ok(())
    })
}

// -------------------------------------------------------------- minimization

/// Every state and its image accept the same lassos: sampled with
/// `|u|, |v| ≤ n²`, and exactly by product search.
pub fn morphism_preserves_language() -> Result<(), String> {
    let strategy = (params(8, 2), any::<bool>(), vec((any::<usize>(), raw_word(0, 64), raw_word(1, 64)), 24));
    run(128, strategy, |(p, sequential, words)| {
        let encoding = if sequential { EncodingKind::Sequential } else { EncodingKind::Parallel };
        let a = weak(p, encoding);
        let m = minimize_weak(&a).unwrap();
        let bound = p.n * p.n;
        for (q, u, v) in words {
            let q = q % p.n;
            let u = letters(&u[..u.len().min(bound)], a.alphabet());
            let v = letters(&v[..v.len().min(bound)], a.alphabet());
            prop_assert_eq!(
                a.accepts_lasso_from(q, &u, &v),
                m.target.accepts_lasso_from(m.image(q), &u, &v)
            );
        }
        for q in 0..p.n {
            prop_assert!(state_languages_equal(&a, q, &m.target, m.image(q)));
        }
        Ok(())
    })
}

/// Distinct target states are distinguished by a lasso with `|u|, |v| ≤ n²`;
/// the quotient is weak and minimizing again changes nothing.
pub fn quotient_is_minimal_weak_and_idempotent() -> Result<(), String> {
    run(128, (params(8, 2), any::<bool>()), |(p, sequential)| {
        let encoding = if sequential { EncodingKind::Sequential } else { EncodingKind::Parallel };
        let a = weak(p, encoding);
        let t = minimize_weak(&a).unwrap().target;
        prop_assert!(t.is_weak());
        prop_assert_eq!(minimize_weak(&t).unwrap().target.state_count(), t.state_count());
        let n = t.state_count();
        for x in 0..n {
            for y in x + 1..n {
                let lasso = distinguishing_lasso(&t, x, &t, y);
                prop_assert!(lasso.is_some(), "states {} and {} are equivalent", x, y);
                let lasso = lasso.unwrap();
                prop_assert!(lasso.prefix.len() <= n * n && lasso.period.len() <= n * n);
                prop_assert_ne!(
                    t.accepts_lasso_from(x, &lasso.prefix, &lasso.period),
                    t.accepts_lasso_from(y, &lasso.prefix, &lasso.period)
                );
            }
        }
        Ok(())
    })
}

/// Joint quotients agree with the exact search on every pair of states.
pub fn joint_equivalence_matches_exact_search() -> Result<(), String> {
    run(96, (params(6, 2), any::<u64>(), 1usize..=6), |(p, seed, m)| {
        let a = weak(p, EncodingKind::Parallel);
        // a copy with a different initial state shares many languages
        let b = if seed % 2 == 0 {
            a.with_initial((seed as usize / 2) % p.n)
        } else {
            weak(Params { seed, n: m, ..p }, EncodingKind::Parallel)
        };
        let table = joint_equivalence(&[&a, &b]).unwrap();
        let direct = joint_equivalence_direct(&[&a, &b]).unwrap();
        for q in 0..a.state_count() {
            for r in 0..b.state_count() {
                let exact = state_languages_equal(&a, q, &b, r);
                prop_assert_eq!(table.equivalent(0, q, 1, r), exact);
                prop_assert_eq!(direct.equivalent(0, q, 1, r), exact);
            }
        }
        Ok(())
    })
}

// -------------------------------------------------------------------- oracle

pub fn component_distance_is_a_metric() -> Result<(), String> {
    let word = || (raw_word(0, 4), raw_word(1, 3));
    let strategy = (params(1, 3), any::<usize>(), word(), word(), word());
    run(256, strategy, |(p, star, x, y, z)| {
        let alphabet = AlphabetSpec::parallel(p.base, p.dim).unwrap();
        let make = |(u, v): &(Vec<u16>, Vec<u16>)| {
            let u = digit_letters(u, &alphabet);
            let v = digit_letters(v, &alphabet);
            PairWord::new(pair_word(&u, &v, &alphabet).digits, [star % 4])
        };
        let (x, y, z) = (make(&x), make(&y), make(&z));
        let d = |a: &PairWord, b: &PairWord| component_distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert!(d(&x, &y) <= p.dim);
        prop_assert_eq!(d(&x, &y) == 0, x == y);
        prop_assert_eq!(d(&x, &x), 0);
        Ok(())
    })
}

/// On a three-letter alphabet, the product search and a literal enumeration
/// of lassos with prefix and period of at most 3 letters agree, and every
/// counterexample re-verifies.
pub fn oracle_matches_literal_enumeration() -> Result<(), String> {
    run(96, (any::<u64>(), 1usize..=4, any::<bool>()), |(seed, n, shaped)| {
        let alphabet = AlphabetSpec::parallel(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = if shaped && n >= 2 {
            random_shaped(&mut rng, n / 2, n - n / 2, &alphabet, false)
        } else {
            random_weak(&mut rng, n, &alphabet)
        };
        let outcome = saturation_oracle(&a, Reading::Unsigned, None).unwrap();
        if let Some(cx) = outcome.counterexample() {
            prop_assert!(verify_counterexample(&a, Reading::Unsigned, cx).is_ok());
        }
        let literal = enumerate_counterexample(&a, 3);
        if let Some(cx) = &literal {
            prop_assert!(verify_counterexample(&a, Reading::Unsigned, cx).is_ok());
            prop_assert!(!outcome.saturated());
        }
        if outcome.saturated() {
            prop_assert!(literal.is_none());
        }
        Ok(())
    })
}

// --------------------------------------------------------------------- check

/// Same verdict twice, same answer on the minimal automaton, and every
/// witness expands to a verified counterexample.
pub fn check_is_deterministic_and_minimality_blind() -> Result<(), String> {
    run(64, any::<u64>(), |seed| {
        for entry in corpus(seed, 8, 8) {
            let a = &entry.automaton;
            let v = check(a, entry.mode).unwrap();
            prop_assert_eq!(&check(a, entry.mode).unwrap(), &v);
            if a.is_weak() {
                prop_assert_eq!(check(&minimal(a), entry.mode).unwrap().answer(), v.answer());
            }
            if let Some(w) = v.witness() {
                let cx = expand_witness(a, w);
                prop_assert!(cx.is_some(), "witness {:?} did not expand", w);
                let reading = Reading::of_mode(entry.mode);
                prop_assert!(verify_counterexample(a, reading, &cx.unwrap()).is_ok());
            }
        }
        Ok(())
    })
}

pub fn generators_are_seed_deterministic() -> Result<(), String> {
    run(64, (params(8, 2), any::<bool>()), |(p, sequential)| {
        let encoding = if sequential { EncodingKind::Sequential } else { EncodingKind::Parallel };
        let a = gen_random_weak(p.n, p.base, p.dim, encoding, p.seed).unwrap();
        prop_assert_eq!(&a, &gen_random_weak(p.n, p.base, p.dim, encoding, p.seed).unwrap());
        prop_assert!(a.is_weak());
        let x: Vec<Automaton> = corpus(p.seed, 6, 8).into_iter().map(|e| e.automaton).collect();
        let y: Vec<Automaton> = corpus(p.seed, 6, 8).into_iter().map(|e| e.automaton).collect();
        prop_assert_eq!(x, y);
        Ok(())
    })
}

pub fn format_round_trips_on_corpus() -> Result<(), String> {
    run(32, any::<u64>(), |seed| {
        for entry in corpus(seed, 32, 8) {
            let text = serialize_automaton(&entry.automaton);
            let back = parse_automaton(&text, false).unwrap();
            prop_assert_eq!(&back, &entry.automaton);
            prop_assert_eq!(serialize_automaton(&back), text);
        }
        Ok(())
    })
}
