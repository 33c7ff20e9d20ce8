//! Exact values of base-b encodings.
//!
//! Words are kept in pair form: an ultimately periodic sequence of digit
//! columns plus the finite set of positions, in the combined word, where the
//! separator `*` occurs. All values are exact rationals.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alphabet::{AlphabetSpec, EncodingKind, Letter, Symbol};
use crate::word::LassoWord;

pub type Rational = BigRational;

/// An ultimately periodic word `prefix · period^ω`, or the finite word
/// `prefix` when the period is empty.
///
/// Equality, hashing and ordering are semantic: two lassos presenting the same
/// infinite word compare equal.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Lasso<T> {
    pub prefix: Vec<T>,
    pub period: Vec<T>,
}

impl<T> Lasso<T> {
    pub fn new(prefix: Vec<T>, period: Vec<T>) -> Self {
        Lasso { prefix, period }
    }

    pub fn finite(word: Vec<T>) -> Self {
        Lasso {
            prefix: word,
            period: Vec::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }
}

impl<T: Clone> Lasso<T> {
    pub fn at(&self, i: usize) -> Option<&T> {
        if i < self.prefix.len() {
            Some(&self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// First `k` letters (fewer if the word is finite and shorter).
    pub fn take(&self, k: usize) -> Vec<T> {
        (0..k).map_while(|i| self.at(i).cloned()).collect()
    }

    /// The suffix starting at position `k`.
    pub fn skip(&self, k: usize) -> Lasso<T> {
        if k <= self.prefix.len() {
            return Lasso::new(self.prefix[k..].to_vec(), self.period.clone());
        }
        if self.period.is_empty() {
            return Lasso::finite(Vec::new());
        }
        let shift = (k - self.prefix.len()) % self.period.len();
        let mut period = self.period[shift..].to_vec();
        period.extend_from_slice(&self.period[..shift]);
        Lasso::new(Vec::new(), period)
    }

    /// Same word with the prefix lengthened to at least `len` letters.
    pub fn unroll(&self, len: usize) -> Lasso<T> {
        if len <= self.prefix.len() || self.period.is_empty() {
            return self.clone();
        }
        let prefix = self.take(len);
        let tail = self.skip(len);
        Lasso::new(prefix, tail.period)
    }

    /// Same word with the period repeated `times` times.
    pub fn repeat_period(&self, times: usize) -> Lasso<T> {
        let period = (0..times).flat_map(|_| self.period.iter().cloned()).collect();
        Lasso::new(self.prefix.clone(), period)
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Lasso<U> {
        Lasso::new(
            self.prefix.iter().map(&mut f).collect(),
            self.period.iter().map(&mut f).collect(),
        )
    }

    /// Maps letters together with their position in the word. Only valid for
    /// position-dependent maps whose period divides the period length.
    fn map_indexed<U>(&self, mut f: impl FnMut(usize, &T) -> U) -> Lasso<U> {
        let p = self.prefix.len();
        Lasso::new(
            self.prefix.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
            self.period
                .iter()
                .enumerate()
                .map(|(i, t)| f(p + i, t))
                .collect(),
        )
    }

    pub fn prepend(&self, letters: &[T]) -> Lasso<T> {
        let mut prefix = letters.to_vec();
        prefix.extend_from_slice(&self.prefix);
        Lasso::new(prefix, self.period.clone())
    }
}

impl<T: Clone + PartialEq> Lasso<T> {
    /// Shortest prefix and primitive period presenting the same word.
    pub fn canonical(&self) -> Lasso<T> {
        if self.period.is_empty() {
            return self.clone();
        }
        let n = self.period.len();
        let root = (1..=n)
            .find(|&k| n % k == 0 && (k..n).all(|i| self.period[i] == self.period[i - k]))
            .unwrap_or(n);
        let mut prefix = self.prefix.clone();
        let mut period = self.period[..root].to_vec();
        while let Some(last) = prefix.last() {
            if *last != period[root - 1] {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Lasso::new(prefix, period)
    }
}

impl<T: Clone + PartialEq> PartialEq for Lasso<T> {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.prefix == b.prefix && a.period == b.period
    }
}

impl<T: Clone + Eq> Eq for Lasso<T> {}

impl<T: Clone + Eq + Hash> Hash for Lasso<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.prefix.hash(state);
        c.period.hash(state);
    }
}

impl<T: Clone + Ord> PartialOrd for Lasso<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Clone + Ord> Ord for Lasso<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.canonical();
        let b = other.canonical();
        (a.prefix, a.period).cmp(&(b.prefix, b.period))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("a real encoding needs exactly one `*`, found {0}")]
    StarCount(usize),
    #[error("the period contains `*`, so the word has infinitely many separators")]
    InfiniteStars,
    #[error("`*` at position {0} is not on a vector boundary")]
    Misaligned(usize),
    #[error("finite word of {len} digits cannot be split into {dim}-vectors")]
    RaggedLength { len: usize, dim: usize },
    #[error("the word is finite; a value needs an infinite fractional part")]
    FiniteWord,
    #[error("the word contains □, which has no numeric value")]
    BoxSymbol,
    #[error("expected letters of width {expected}, found {got}")]
    WrongWidth { expected: usize, got: usize },
    #[error("component {component} out of range for width {width}")]
    ComponentOutOfRange { component: usize, width: usize },
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("b-complement encodings need a sign digit 0 or b-1 in every component")]
    NoSignDigit,
}

/// A column of symbols: one per component.
pub type Column = Vec<Symbol>;

/// A word as (digit columns, separator positions).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairWord {
    pub digits: Lasso<Column>,
    /// Positions of `*` in the combined word.
    pub stars: BTreeSet<usize>,
}

impl PairWord {
    pub fn new(digits: Lasso<Column>, stars: impl IntoIterator<Item = usize>) -> Self {
        PairWord {
            digits,
            stars: stars.into_iter().collect(),
        }
    }

    /// Pair form of a one-component digit word.
    pub fn from_digits(prefix: &[u32], period: &[u32], stars: impl IntoIterator<Item = usize>) -> Self {
        let col = |d: &u32| vec![Symbol::Digit(*d)];
        PairWord::new(
            Lasso::new(prefix.iter().map(col).collect(), period.iter().map(col).collect()),
            stars,
        )
    }

    pub fn width(&self) -> usize {
        self.digits
            .prefix
            .first()
            .or(self.digits.period.first())
            .map_or(0, Vec::len)
    }

    /// Number of digit columns before the `*` at combined position `pos`.
    fn digits_before(&self, pos: usize) -> usize {
        pos - self.stars.range(..pos).count()
    }

    pub fn from_lasso_word(word: &LassoWord) -> Result<PairWord, EncodingError> {
        if word.period.iter().any(Letter::is_star) {
            return Err(EncodingError::InfiniteStars);
        }
        let mut stars = BTreeSet::new();
        let mut prefix = Vec::new();
        for (i, letter) in word.prefix.iter().enumerate() {
            match letter {
                Letter::Star => {
                    stars.insert(i);
                }
                Letter::Column(c) => prefix.push(c.clone()),
            }
        }
        let period = word
            .period
            .iter()
            .map(|l| match l {
                Letter::Column(c) => c.clone(),
                Letter::Star => unreachable!("checked above"),
            })
            .collect();
        Ok(PairWord::new(Lasso::new(prefix, period), stars))
    }

    /// The combined word, with separators interleaved.
    pub fn to_lasso_word(&self) -> LassoWord {
        let last = self.stars.iter().next_back().copied();
        let needed = last.map_or(0, |p| self.digits_before(p));
        let digits = self.digits.unroll(needed);
        let mut prefix = Vec::new();
        let mut next_digit = 0;
        let combined_len = last.map_or(0, |p| p + 1).max(digits.prefix.len() + self.stars.len());
        for pos in 0..combined_len {
            if self.stars.contains(&pos) {
                prefix.push(Letter::Star);
            } else if next_digit < digits.prefix.len() {
                prefix.push(Letter::Column(digits.prefix[next_digit].clone()));
                next_digit += 1;
            }
        }
        Lasso::new(prefix, digits.period.iter().cloned().map(Letter::Column).collect())
    }

    fn single_star(&self) -> Result<usize, EncodingError> {
        if self.stars.len() != 1 {
            return Err(EncodingError::StarCount(self.stars.len()));
        }
        Ok(*self.stars.iter().next().expect("one star"))
    }

    /// Digit sequence of one component, natural and fractional parts
    /// concatenated.
    pub fn component_digits(&self, component: usize) -> Result<Lasso<u32>, EncodingError> {
        let width = self.width();
        if component >= width {
            return Err(EncodingError::ComponentOutOfRange { component, width });
        }
        let mut boxed = false;
        let lasso = self.digits.map(|col| match col[component] {
            Symbol::Digit(d) => d,
            Symbol::Box => {
                boxed = true;
                0
            }
        });
        if boxed {
            return Err(EncodingError::BoxSymbol);
        }
        Ok(lasso)
    }
}

impl fmt::Display for PairWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::word::format_lasso(&self.to_lasso_word()))
    }
}

/// A vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rational>);

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

fn pow(base: u32, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// Value of a finite digit word read most significant digit first.
pub fn value_natural(digits: &[u32], base: u32) -> Rational {
    let mut acc = BigInt::zero();
    for &d in digits {
        acc = acc * base + d;
    }
    Rational::from_integer(acc)
}

/// Value of `0.w` for an infinite digit word `w`, using the closed form
/// `(nat(prefix) + nat(period) / (b^|period| - 1)) / b^|prefix|`.
pub fn value_fractional(word: &Lasso<u32>, base: u32) -> Result<Rational, EncodingError> {
    if word.period.is_empty() {
        return Err(EncodingError::FiniteWord);
    }
    let period_den = Rational::from_integer(pow(base, word.period.len()) - 1);
    let tail = value_natural(&word.period, base) / period_den;
    let head = value_natural(&word.prefix, base);
    Ok((head + tail) / Rational::from_integer(pow(base, word.prefix.len())))
}

fn check_digits(word: &Lasso<u32>, base: u32) -> Result<(), EncodingError> {
    match word.prefix.iter().chain(&word.period).find(|&&d| d >= base) {
        Some(&digit) => Err(EncodingError::DigitOutOfRange { digit, base }),
        None => Ok(()),
    }
}

fn as_parallel(pw: &PairWord, alphabet: &AlphabetSpec) -> Result<PairWord, EncodingError> {
    match alphabet.encoding() {
        EncodingKind::Parallel => {
            if pw.width() != alphabet.dim() {
                return Err(EncodingError::WrongWidth {
                    expected: alphabet.dim(),
                    got: pw.width(),
                });
            }
            Ok(pw.clone())
        }
        EncodingKind::Sequential => parallelize(pw, alphabet.dim()),
    }
}

/// Real vector encoded by a word with exactly one `*`. Sequential words are
/// parallelized first.
pub fn value_real(pw: &PairWord, alphabet: &AlphabetSpec) -> Result<RationalVector, EncodingError> {
    let par = as_parallel(pw, alphabet)?;
    let star = par.single_star()?;
    if par.digits.is_finite() {
        return Err(EncodingError::FiniteWord);
    }
    let base = alphabet.base();
    (0..alphabet.dim())
        .map(|c| {
            let digits = par.component_digits(c)?;
            check_digits(&digits, base)?;
            let natural = value_natural(&digits.take(star), base);
            Ok(natural + value_fractional(&digits.skip(star), base)?)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RationalVector)
}

/// Real vector encoded in b-complement: the first natural digit of each
/// component is a sign digit, 0 for non-negative and b-1 for negative
/// numbers, contributing `-b^(l-1)` for a natural part of length `l`.
pub fn value_complement(pw: &PairWord, alphabet: &AlphabetSpec) -> Result<RationalVector, EncodingError> {
    let par = as_parallel(pw, alphabet)?;
    let star = par.single_star()?;
    if star == 0 {
        return Err(EncodingError::NoSignDigit);
    }
    let base = alphabet.base();
    let unsigned = value_real(&par, &AlphabetSpec::parallel(base, alphabet.dim()).expect("valid"))?;
    let mut out = Vec::with_capacity(alphabet.dim());
    for (c, value) in unsigned.0.into_iter().enumerate() {
        let sign = *par.component_digits(c)?.at(0).expect("infinite word");
        if sign == 0 {
            out.push(value);
        } else if sign == base - 1 {
            // the sign digit was read as (b-1)·b^(l-1); its weight is -b^(l-1)
            out.push(value - Rational::from_integer(pow(base, star - 1) * BigInt::from(base)));
        } else {
            return Err(EncodingError::NoSignDigit);
        }
    }
    Ok(RationalVector(out))
}

/// Groups a one-symbol-per-letter word into `d`-vectors. Every `*` must sit
/// on a vector boundary.
pub fn parallelize(pw: &PairWord, d: usize) -> Result<PairWord, EncodingError> {
    if pw.width() > 1 {
        return Err(EncodingError::WrongWidth {
            expected: 1,
            got: pw.width(),
        });
    }
    let mut stars = BTreeSet::new();
    for (rank, &pos) in pw.stars.iter().enumerate() {
        let before = pos - rank;
        if before % d != 0 {
            return Err(EncodingError::Misaligned(pos));
        }
        stars.insert(before / d + rank);
    }
    let digits = &pw.digits;
    let grouped = if digits.is_finite() {
        if digits.prefix.len() % d != 0 {
            return Err(EncodingError::RaggedLength {
                len: digits.prefix.len(),
                dim: d,
            });
        }
        Lasso::finite(group(&digits.prefix, d))
    } else {
        let prefix_len = digits.prefix.len().div_ceil(d) * d;
        let reps = d / digits.period.len().gcd(&d);
        let aligned = digits.unroll(prefix_len).repeat_period(reps);
        Lasso::new(group(&aligned.prefix, d), group(&aligned.period, d))
    };
    Ok(PairWord {
        digits: grouped,
        stars,
    })
}

fn group(symbols: &[Column], d: usize) -> Vec<Column> {
    symbols
        .chunks(d)
        .map(|chunk| chunk.iter().map(|c| c[0]).collect())
        .collect()
}

/// Inverse of [`parallelize`]: flattens each `d`-vector into `d` letters.
pub fn sequentialize(pw: &PairWord) -> PairWord {
    let d = pw.width().max(1);
    let flatten = |cols: &[Column]| -> Vec<Column> {
        cols.iter()
            .flat_map(|c| c.iter().map(|s| vec![*s]))
            .collect()
    };
    let stars = pw
        .stars
        .iter()
        .enumerate()
        .map(|(rank, &pos)| (pos - rank) * d + rank)
        .collect();
    PairWord {
        digits: Lasso::new(flatten(&pw.digits.prefix), flatten(&pw.digits.period)),
        stars,
    }
}

/// Replaces component `f` of every digit column by `z`.
pub fn fix_component_parallel(pw: &PairWord, f: usize, z: Symbol) -> Result<PairWord, EncodingError> {
    let width = pw.width();
    if f >= width {
        return Err(EncodingError::ComponentOutOfRange { component: f, width });
    }
    Ok(PairWord {
        digits: pw.digits.map(|col| {
            let mut col = col.clone();
            col[f] = z;
            col
        }),
        stars: pw.stars.clone(),
    })
}

/// Sequential version: replaces every digit whose index among the digits is
/// congruent to `f` modulo `d`.
pub fn fix_component_sequential(
    pw: &PairWord,
    d: usize,
    f: usize,
    z: Symbol,
) -> Result<PairWord, EncodingError> {
    if f >= d {
        return Err(EncodingError::ComponentOutOfRange { component: f, width: d });
    }
    if pw.width() > 1 {
        return Err(EncodingError::WrongWidth {
            expected: 1,
            got: pw.width(),
        });
    }
    let digits = if pw.digits.is_finite() {
        pw.digits.clone()
    } else {
        let prefix_len = pw.digits.prefix.len().div_ceil(d) * d;
        let reps = d / pw.digits.period.len().gcd(&d);
        pw.digits.unroll(prefix_len).repeat_period(reps)
    };
    Ok(PairWord {
        digits: digits.map_indexed(|i, col| if i % d == f { vec![z] } else { col.clone() }),
        stars: pw.stars.clone(),
    })
}

/// Combines per-component digit lassos into a lasso of columns.
fn zip_components(parts: &[Lasso<u32>]) -> Lasso<Column> {
    let prefix_len = parts.iter().map(|p| p.prefix.len()).max().unwrap_or(0);
    let period_len = parts
        .iter()
        .map(|p| p.period.len().max(1))
        .fold(1usize, |acc, l| acc.lcm(&l));
    let aligned: Vec<Lasso<u32>> = parts
        .iter()
        .map(|p| {
            let u = p.unroll(prefix_len);
            u.repeat_period(period_len / u.period.len().max(1))
        })
        .collect();
    let column = |i: usize, from_period: bool| -> Column {
        aligned
            .iter()
            .map(|p| Symbol::Digit(if from_period { p.period[i] } else { p.prefix[i] }))
            .collect()
    };
    Lasso::new(
        (0..prefix_len).map(|i| column(i, false)).collect(),
        (0..period_len).map(|i| column(i, true)).collect(),
    )
}

/// The other encoding of the same number with the same natural length, if
/// any: `x a (b-1)^ω` and `x (a+1) 0^ω` are swapped.
pub fn dual_tail(digits: &Lasso<u32>, base: u32) -> Option<Lasso<u32>> {
    let c = digits.canonical();
    if c.period.len() != 1 {
        return None;
    }
    let top = base - 1;
    let (tail, replacement) = match c.period[0] {
        t if t == top => (top, 0),
        0 => (0, top),
        _ => return None,
    };
    let k = c.prefix.iter().rposition(|&x| x != tail)?;
    let mut prefix = c.prefix[..k].to_vec();
    prefix.push(if tail == top { c.prefix[k] + 1 } else { c.prefix[k] - 1 });
    Some(Lasso::new(prefix, vec![replacement]))
}

/// Default natural-part bound for [`alternative_encodings`]: the longest
/// minimal natural length among the components, plus the word's own natural
/// length, plus two.
pub fn default_natural_bound(pw: &PairWord, alphabet: &AlphabetSpec) -> Result<usize, EncodingError> {
    let value = value_real(pw, alphabet)?;
    let par = as_parallel(pw, alphabet)?;
    let natural = par.single_star()?;
    let b = Rational::from_integer(BigInt::from(alphabet.base()));
    let longest = value
        .0
        .iter()
        .map(|q| {
            // smallest l with b^l >= q + 1
            let target = q + Rational::one();
            let mut l = 0usize;
            let mut power = Rational::one();
            while power < target {
                power *= &b;
                l += 1;
            }
            l
        })
        .max()
        .unwrap_or(0);
    Ok(longest + natural + 2)
}

/// All encodings of the same vector whose natural part has at most
/// `max_natural` letters: leading zero vectors added or removed, and any
/// combination of per-component dual tails. The input itself is included
/// when it fits the bound.
pub fn alternative_encodings(
    pw: &PairWord,
    alphabet: &AlphabetSpec,
    max_natural: usize,
) -> Result<Vec<PairWord>, EncodingError> {
    let par = as_parallel(pw, alphabet)?;
    let star = par.single_star()?;
    if par.digits.is_finite() {
        return Err(EncodingError::FiniteWord);
    }
    let base = alphabet.base();
    let components = (0..alphabet.dim())
        .map(|c| {
            let digits = par.component_digits(c)?;
            check_digits(&digits, base)?;
            Ok(digits)
        })
        .collect::<Result<Vec<_>, EncodingError>>()?;

    // every encoding, padded to a common natural length `top`
    let top = max_natural.max(star);
    let padded: Vec<Vec<Lasso<u32>>> = components
        .iter()
        .map(|digits| {
            let shifted = digits.prepend(&vec![0; top - star]);
            let mut choices = vec![shifted.clone()];
            choices.extend(dual_tail(&shifted, base));
            choices
        })
        .collect();

    let mut out = BTreeSet::new();
    for natural in 0..=max_natural {
        let cut = top - natural;
        let options: Vec<Vec<Lasso<u32>>> = padded
            .iter()
            .map(|choices| {
                choices
                    .iter()
                    .filter(|c| c.take(cut).iter().all(|&x| x == 0))
                    .map(|c| c.skip(cut))
                    .collect()
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let mut picks = vec![0usize; options.len()];
        loop {
            let parts: Vec<Lasso<u32>> = picks
                .iter()
                .zip(&options)
                .map(|(&i, o)| o[i].clone())
                .collect();
            out.insert(PairWord::new(zip_components(&parts), [natural]));
            // odometer over the per-component choices
            let mut c = 0;
            while c < picks.len() {
                picks[c] += 1;
                if picks[c] < options[c].len() {
                    break;
                }
                picks[c] = 0;
                c += 1;
            }
            if c == picks.len() {
                break;
            }
        }
    }
    let mut words: Vec<PairWord> = out.into_iter().collect();
    if alphabet.encoding() == EncodingKind::Sequential {
        words = words.iter().map(sequentialize).collect();
    }
    Ok(words)
}
