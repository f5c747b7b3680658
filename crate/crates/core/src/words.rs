//! Words with equal letter counts and their lattice-path views.
//!
//! A word in `W_n^(N)` has length `N·n` and contains each of the `N` letters
//! exactly `n` times. Letters are stored as indices `0..N` and rendered as
//! `A, B, C, …` only at text boundaries.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics;
use crate::error::{Error, Result};

/// Default cap on the word length `N·n` accepted by exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Largest alphabet that has a single-letter text form.
pub const MAX_ALPHABET: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    n: usize,
    alphabet: usize,
}

impl Word {
    /// Builds a word from letter indices, checking that each of the
    /// `alphabet` letters occurs the same number of times.
    pub fn new(letters: Vec<u8>, alphabet: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&alphabet) {
            return Err(Error::UnsupportedAlphabet {
                found: alphabet,
                context: "words need between 2 and 26 letters",
            });
        }
        if letters.is_empty() || !letters.len().is_multiple_of(alphabet) {
            return Err(Error::InvalidWord(format!(
                "length {} is not a positive multiple of the alphabet size {alphabet}",
                letters.len()
            )));
        }
        let n = letters.len() / alphabet;
        let mut counts = vec![0usize; alphabet];
        for &l in &letters {
            let slot = counts.get_mut(l as usize).ok_or_else(|| {
                Error::InvalidWord(format!(
                    "letter index {l} outside alphabet of size {alphabet}"
                ))
            })?;
            *slot += 1;
        }
        if let Some((k, &c)) = counts.iter().enumerate().find(|(_, &c)| c != n) {
            return Err(Error::InvalidWord(format!(
                "letter {} occurs {c} times, expected {n}",
                letter_char(k as u8)
            )));
        }
        Ok(Word {
            letters,
            n,
            alphabet,
        })
    }

    /// Parses the uppercase text form, inferring the alphabet size from the
    /// largest letter present.
    pub fn parse(text: &str) -> Result<Self> {
        let letters = parse_letters(text)?;
        let alphabet = letters.iter().copied().max().map_or(0, |m| m as usize + 1);
        Word::new(letters, alphabet)
    }

    /// Parses the text form against a fixed alphabet size.
    pub fn parse_with_alphabet(text: &str, alphabet: usize) -> Result<Self> {
        Word::new(parse_letters(text)?, alphabet)
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<u8>, n: usize, alphabet: usize) -> Self {
        debug_assert_eq!(letters.len(), n * alphabet);
        Word {
            letters,
            n,
            alphabet,
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Occurrences of each letter.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Returns a copy with positions `i` and `i + 1` interchanged.
    pub fn swapped(&self, i: usize) -> Result<Word> {
        if i + 1 >= self.letters.len() {
            return Err(Error::Range(format!(
                "swap position {i} needs a successor in a word of length {}",
                self.letters.len()
            )));
        }
        let mut letters = self.letters.clone();
        letters.swap(i, i + 1);
        Ok(Word { letters, ..*self })
    }

    pub(crate) fn check_same_shape(&self, other: &Word) -> Result<()> {
        if self.n != other.n || self.alphabet != other.alphabet {
            return Err(Error::shape(format!(
                "words from different sets: (n={}, N={}) vs (n={}, N={})",
                self.n, self.alphabet, other.n, other.alphabet
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters.iter().map(|&l| letter_char(l)).collect();
        f.write_str(&s)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

pub fn letter_char(index: u8) -> char {
    (b'A' + index) as char
}

fn parse_letters(text: &str) -> Result<Vec<u8>> {
    text.trim()
        .chars()
        .map(|c| {
            if c.is_ascii_uppercase() {
                Ok(c as u8 - b'A')
            } else {
                Err(Error::InvalidWord(format!("unexpected character {c:?}")))
            }
        })
        .collect()
}

fn check_params(n: usize, alphabet: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    if !(2..=MAX_ALPHABET).contains(&alphabet) {
        return Err(Error::UnsupportedAlphabet {
            found: alphabet,
            context: "words need between 2 and 26 letters",
        });
    }
    Ok(())
}

/// The cyclic word `A_1 A_2 … A_N` repeated `n` times.
pub fn standard_word(n: usize, alphabet: usize) -> Result<Word> {
    check_params(n, alphabet)?;
    let letters = (0..n).flat_map(|_| 0..alphabet as u8).collect();
    Ok(Word::from_letters_unchecked(letters, n, alphabet))
}

/// The word `A^n B^n …` with every letter block contiguous.
pub fn sorted_word(n: usize, alphabet: usize) -> Result<Word> {
    check_params(n, alphabet)?;
    let letters = (0..alphabet as u8)
        .flat_map(|k| std::iter::repeat_n(k, n))
        .collect();
    Ok(Word::from_letters_unchecked(letters, n, alphabet))
}

/// Number of words in `W_n^(N)` as a machine integer, if it fits.
pub fn word_count_u128(n: usize, alphabet: usize) -> Option<u128> {
    multinomial_u128(&vec![n; alphabet])
}

fn multinomial_u128(parts: &[usize]) -> Option<u128> {
    let mut total: u128 = 1;
    let mut seen: u128 = 0;
    for &p in parts {
        for i in 1..=p as u128 {
            seen += 1;
            // total * seen / i stays integral at each step
            total = total.checked_mul(seen)? / i;
        }
    }
    Some(total)
}

/// Streams every word of `W_n^(N)` in lexicographic order, refusing word
/// lengths above [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_words(n: usize, alphabet: usize) -> Result<WordIter> {
    enumerate_words_capped(n, alphabet, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_words_capped(n: usize, alphabet: usize, cap: usize) -> Result<WordIter> {
    check_params(n, alphabet)?;
    let length = n * alphabet;
    let total = match word_count_u128(n, alphabet) {
        Some(t) if length <= cap => t,
        _ => {
            return Err(Error::SizeLimit {
                count: combinatorics::multinomial(&vec![n as u64; alphabet]).to_string(),
                length,
                cap,
            })
        }
    };
    Ok(WordIter {
        current: Some(sorted_word(n, alphabet)?.letters),
        remaining: total,
        n,
        alphabet,
    })
}

/// Streams the words with lexicographic ranks in `start..end`.
///
/// Ranges partition the enumeration, so workers can each take a range.
pub fn enumerate_range(n: usize, alphabet: usize, start: u128, end: u128) -> Result<WordIter> {
    check_params(n, alphabet)?;
    let total = word_count_u128(n, alphabet)
        .ok_or_else(|| Error::Range("word count does not fit in 128 bits".into()))?;
    let end = end.min(total);
    if start >= end {
        return Ok(WordIter {
            current: None,
            remaining: 0,
            n,
            alphabet,
        });
    }
    Ok(WordIter {
        current: Some(unrank(n, alphabet, start)?.letters),
        remaining: end - start,
        n,
        alphabet,
    })
}

/// The word at lexicographic position `rank` (0-based).
pub fn unrank(n: usize, alphabet: usize, rank: u128) -> Result<Word> {
    check_params(n, alphabet)?;
    let total = word_count_u128(n, alphabet)
        .ok_or_else(|| Error::Range("word count does not fit in 128 bits".into()))?;
    if rank >= total {
        return Err(Error::Range(format!(
            "rank {rank} exceeds word count {total}"
        )));
    }
    let mut left = vec![n; alphabet];
    let mut rank = rank;
    let mut letters = Vec::with_capacity(n * alphabet);
    for _ in 0..n * alphabet {
        for k in 0..alphabet {
            if left[k] == 0 {
                continue;
            }
            left[k] -= 1;
            let block = multinomial_u128(&left).expect("bounded by total");
            if rank < block {
                letters.push(k as u8);
                break;
            }
            rank -= block;
            left[k] += 1;
        }
    }
    Ok(Word::from_letters_unchecked(letters, n, alphabet))
}

/// Lexicographic position of `w` among the words of its set.
pub fn rank(w: &Word) -> u128 {
    let mut left = vec![w.n; w.alphabet];
    let mut rank = 0u128;
    for &l in &w.letters {
        for k in 0..l as usize {
            if left[k] > 0 {
                left[k] -= 1;
                rank += multinomial_u128(&left).expect("bounded by total");
                left[k] += 1;
            }
        }
        left[l as usize] -= 1;
    }
    rank
}

#[derive(Debug, Clone)]
pub struct WordIter {
    current: Option<Vec<u8>>,
    remaining: u128,
    n: usize,
    alphabet: usize,
}

impl WordIter {
    pub fn remaining(&self) -> u128 {
        self.remaining
    }
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.remaining == 0 {
            return None;
        }
        let letters = self.current.take()?;
        self.remaining -= 1;
        if self.remaining > 0 {
            let mut next = letters.clone();
            if next_permutation(&mut next) {
                self.current = Some(next);
            }
        }
        Some(Word::from_letters_unchecked(letters, self.n, self.alphabet))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Advances to the next lexicographic arrangement of a multiset.
fn next_permutation(v: &mut [u8]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[pivot])
        .expect("v[i] > pivot");
    v.swap(pivot, j);
    v[i..].reverse();
    true
}

/// Uniform sampler over `W_n^(N)` driven by a seeded ChaCha stream.
pub struct WordSampler {
    rng: ChaCha8Rng,
    base: Vec<u8>,
    n: usize,
    alphabet: usize,
}

impl WordSampler {
    pub fn new(n: usize, alphabet: usize, seed: u64) -> Result<Self> {
        Ok(WordSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            base: sorted_word(n, alphabet)?.letters,
            n,
            alphabet,
        })
    }

    pub fn next_word(&mut self) -> Word {
        let mut letters = self.base.clone();
        letters.shuffle(&mut self.rng);
        Word::from_letters_unchecked(letters, self.n, self.alphabet)
    }
}

/// A single uniform draw from `W_n^(N)`, deterministic in `seed`.
pub fn sample_word(n: usize, alphabet: usize, seed: u64) -> Result<Word> {
    Ok(WordSampler::new(n, alphabet, seed)?.next_word())
}

/// `counts[k][j]`: occurrences of letter `k` among the first `j` letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCounts {
    counts: Vec<Vec<u32>>,
}

impl PrefixCounts {
    pub fn get(&self, letter: usize, j: usize) -> u32 {
        self.counts[letter][j]
    }

    /// Counts for `letter` at `j = 0..=len`.
    pub fn letter(&self, letter: usize) -> &[u32] {
        &self.counts[letter]
    }

    pub fn alphabet(&self) -> usize {
        self.counts.len()
    }

    /// Word length; columns are indexed `0..=len()`.
    pub fn len(&self) -> usize {
        self.counts[0].len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn prefix_counts(w: &Word) -> PrefixCounts {
    let mut counts = vec![Vec::with_capacity(w.len() + 1); w.alphabet];
    for c in &mut counts {
        c.push(0);
    }
    for &l in &w.letters {
        for (k, c) in counts.iter_mut().enumerate() {
            let last = *c.last().expect("seeded with 0");
            c.push(last + u32::from(k == l as usize));
        }
    }
    PrefixCounts { counts }
}

/// A non-decreasing step function on `[0, 1]` taking value `heights[i] / n`
/// on the `i`-th of `n` equal subintervals.
///
/// For a two-letter word, `heights[i]` is the number of `B`s preceding the
/// `(i+1)`-th `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    heights: Vec<u32>,
}

impl StepFunction {
    pub fn from_heights(heights: Vec<u32>) -> Result<Self> {
        let n = heights.len();
        if n == 0 {
            return Err(Error::Range("step function needs at least one step".into()));
        }
        if heights.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::NonMonotone(format!("heights {heights:?}")));
        }
        if heights.iter().any(|&h| h as usize > n) {
            return Err(Error::Range(format!("heights {heights:?} exceed {n}")));
        }
        Ok(StepFunction { heights })
    }

    /// Quantizes an increasing function to `m` steps: `f` is sampled at
    /// interval midpoints, scaled by `m`, rounded to the nearest integer with
    /// ties going down, clamped to `0..=m` and made monotone by a running max.
    pub fn quantize(f: impl Fn(f64) -> f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Range("discretization m must be at least 1".into()));
        }
        let samples: Vec<f64> = (0..m).map(|i| f((i as f64 + 0.5) / m as f64)).collect();
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("function value {bad} is not finite")));
        }
        if let Some(i) = samples.windows(2).position(|p| p[1] < p[0] - 1e-12) {
            return Err(Error::NonMonotone(format!(
                "value drops from {} to {} between samples {i} and {}",
                samples[i],
                samples[i + 1],
                i + 1
            )));
        }
        let mut running = 0u32;
        let heights = samples
            .iter()
            .map(|&v| {
                let scaled = v * m as f64;
                let rounded = (scaled - 0.5 - 1e-9).ceil().clamp(0.0, m as f64) as u32;
                running = running.max(rounded);
                running
            })
            .collect();
        Ok(StepFunction { heights })
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn n(&self) -> usize {
        self.heights.len()
    }

    pub fn level(&self, i: usize) -> Ratio<u64> {
        Ratio::new(u64::from(self.heights[i]), self.n() as u64)
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.heights.iter().map(|&h| f64::from(h) / n).collect()
    }

    /// Evaluates at `x ∈ [0, 1]`, taking the right-hand step at breakpoints.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.n();
        let i = ((x * n as f64).floor() as usize).min(n - 1);
        f64::from(self.heights[i]) / n as f64
    }

    /// The two-letter word whose `i`-th `A` is preceded by `heights[i]` `B`s.
    pub fn to_word(&self) -> Word {
        let n = self.n();
        let mut letters = Vec::with_capacity(2 * n);
        let mut bs = 0u32;
        for &h in &self.heights {
            while bs < h {
                letters.push(1);
                bs += 1;
            }
            letters.push(0);
        }
        letters.extend(std::iter::repeat_n(1u8, n - bs as usize));
        Word::from_letters_unchecked(letters, n, 2)
    }
}

/// The step function of a two-letter word.
pub fn step_function(w: &Word) -> Result<StepFunction> {
    if w.alphabet != 2 {
        return Err(Error::UnsupportedAlphabet {
            found: w.alphabet,
            context: "step functions are defined for two-letter words",
        });
    }
    let mut bs = 0u32;
    let mut heights = Vec::with_capacity(w.n);
    for &l in &w.letters {
        if l == 0 {
            heights.push(bs);
        } else {
            bs += 1;
        }
    }
    Ok(StepFunction { heights })
}
