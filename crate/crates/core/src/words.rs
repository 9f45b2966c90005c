//! Finite-word primitives: letters, words, Parikh vectors, occurrence search
//! and factor statistics over materialized prefixes of infinite words.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stream::WordStream;

/// A letter of an alphabet `{0, 1, ..., d-1}`.
pub type Letter = u8;

/// Largest supported alphabet.
pub const MAX_ALPHABET: usize = 16;

/// Default spacing of the cumulative Parikh checkpoints in a [`PrefixBuffer`].
pub const DEFAULT_STRIDE: usize = 1024;

pub(crate) fn check_alphabet(d: usize) -> Result<()> {
    if d == 0 || d > MAX_ALPHABET {
        return Err(Error::AlphabetSize(d));
    }
    Ok(())
}

pub(crate) fn check_letters(letters: &[Letter], d: usize) -> Result<()> {
    match letters.iter().find(|&&a| usize::from(a) >= d) {
        Some(&letter) => Err(Error::InvalidAlphabet {
            letter,
            alphabet: d,
        }),
        None => Ok(()),
    }
}

/// Renders letters as digits `0-9a-f`.
pub fn letters_to_string(letters: &[Letter]) -> String {
    letters
        .iter()
        .map(|&a| char::from_digit(u32::from(a), 16).unwrap_or('?'))
        .collect()
}

pub(crate) fn letter_from_char(c: char) -> Option<Letter> {
    c.to_digit(16).map(|v| v as Letter)
}

/// A finite word. Dereferences to its letter slice.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(&self.0)
    }

    /// Smallest alphabet size containing every letter of the word.
    pub fn alphabet_hint(&self) -> usize {
        self.0
            .iter()
            .map(|&a| usize::from(a) + 1)
            .max()
            .unwrap_or(1)
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a digit string such as `"01001"`; the empty string is ε.
    fn from_str(s: &str) -> Result<Self> {
        s.char_indices()
            .map(|(i, c)| {
                letter_from_char(c).ok_or_else(|| Error::Parse {
                    position: i,
                    message: format!("unexpected character {c:?}"),
                    expected: "a letter digit 0-9 or a-f".into(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters_to_string(&self.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn is_palindrome(w: &[Letter]) -> bool {
    w.iter().eq(w.iter().rev())
}

/// Per-letter occurrence counts `(|w|_0, ..., |w|_{d-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ParikhVector(pub Vec<u64>);

impl ParikhVector {
    pub fn zero(d: usize) -> Self {
        ParikhVector(vec![0; d])
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Componentwise reduction modulo `m`.
    pub fn reduced(&self, m: u64) -> Vec<u64> {
        self.0.iter().map(|c| c % m).collect()
    }
}

/// Parikh vector of `w` over the alphabet `{0, ..., d-1}`.
pub fn parikh(w: &[Letter], d: usize) -> Result<ParikhVector> {
    check_alphabet(d)?;
    let mut counts = vec![0u64; d];
    for &a in w {
        let slot = counts
            .get_mut(usize::from(a))
            .ok_or(Error::InvalidAlphabet {
                letter: a,
                alphabet: d,
            })?;
        *slot += 1;
    }
    Ok(ParikhVector(counts))
}

/// A materialized prefix of an infinite word with cumulative Parikh
/// checkpoints every `stride` letters.
///
/// Immutable after construction, so it can be shared across threads.
#[derive(Clone, Debug)]
pub struct PrefixBuffer {
    letters: Vec<Letter>,
    alphabet: usize,
    source: String,
    stride: usize,
    // checkpoints[k * alphabet + a] = |Pref_{k*stride}|_a
    checkpoints: Vec<u64>,
}

impl PrefixBuffer {
    pub fn from_letters(letters: Vec<Letter>, alphabet: usize) -> Result<Self> {
        Self::with_stride(letters, alphabet, DEFAULT_STRIDE, String::new())
    }

    pub fn with_stride(
        letters: Vec<Letter>,
        alphabet: usize,
        stride: usize,
        source: String,
    ) -> Result<Self> {
        check_alphabet(alphabet)?;
        check_letters(&letters, alphabet)?;
        if stride == 0 {
            return Err(Error::InvalidParameter(
                "checkpoint stride must be positive".into(),
            ));
        }
        let mut checkpoints = Vec::with_capacity((letters.len() / stride + 1) * alphabet);
        let mut running = vec![0u64; alphabet];
        for (i, &a) in letters.iter().enumerate() {
            if i % stride == 0 {
                checkpoints.extend_from_slice(&running);
            }
            running[usize::from(a)] += 1;
        }
        if letters.len().is_multiple_of(stride) {
            checkpoints.extend_from_slice(&running);
        }
        Ok(PrefixBuffer {
            letters,
            alphabet,
            source,
            stride,
            checkpoints,
        })
    }

    /// Materializes the first `len` letters of `stream`.
    pub fn from_stream(stream: &mut dyn WordStream, len: usize) -> Result<Self> {
        let alphabet = stream.alphabet_size();
        let letters = stream.prefix(len);
        Self::with_stride(letters, alphabet, DEFAULT_STRIDE, stream.describe())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Parikh vector of `Pref_i`, for `i <= len()`.
    pub fn parikh_prefix(&self, i: usize) -> ParikhVector {
        assert!(i <= self.letters.len(), "prefix index out of range");
        let k = i / self.stride;
        let d = self.alphabet;
        let mut counts = self.checkpoints[k * d..(k + 1) * d].to_vec();
        for &a in &self.letters[k * self.stride..i] {
            counts[usize::from(a)] += 1;
        }
        ParikhVector(counts)
    }
}

// KMP failure table.
fn failure_table(w: &[Letter]) -> Vec<usize> {
    let mut fail = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Incremental matcher reporting each position where a pattern ends.
#[derive(Clone, Debug)]
pub(crate) struct Matcher {
    pattern: Vec<Letter>,
    fail: Vec<usize>,
    state: usize,
}

impl Matcher {
    pub(crate) fn new(pattern: &[Letter]) -> Self {
        assert!(!pattern.is_empty());
        Matcher {
            pattern: pattern.to_vec(),
            fail: failure_table(pattern),
            state: 0,
        }
    }

    /// Feeds one letter; returns true when the pattern ends at this letter.
    #[inline]
    pub(crate) fn push(&mut self, a: Letter) -> bool {
        if self.state == self.pattern.len() {
            self.state = self.fail[self.state - 1];
        }
        while self.state > 0 && self.pattern[self.state] != a {
            self.state = self.fail[self.state - 1];
        }
        if self.pattern[self.state] == a {
            self.state += 1;
        }
        self.state == self.pattern.len()
    }
}

/// All indices `i` with `letters[i..i+|w|] == w`, ascending.
pub fn occurrences_in(w: &[Letter], letters: &[Letter]) -> Vec<usize> {
    if w.is_empty() {
        return (0..=letters.len()).collect();
    }
    let mut m = Matcher::new(w);
    letters
        .iter()
        .enumerate()
        .filter(|&(_, &a)| m.push(a))
        .map(|(j, _)| j + 1 - w.len())
        .collect()
}

/// Occurrences of `w` in the prefix buffer.
pub fn occurrences(w: &[Letter], p: &PrefixBuffer) -> Vec<usize> {
    occurrences_in(w, p.letters())
}

/// A right special factor together with its right extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialFactor {
    pub factor: Word,
    pub extensions: Vec<Letter>,
}

/// Every length-`len` factor of `p` followed (inside `p`) by at least two
/// distinct letters, sorted by factor.
pub fn right_special_factors(p: &PrefixBuffer, len: usize) -> Result<Vec<SpecialFactor>> {
    let letters = p.letters();
    if len >= letters.len() {
        return Err(Error::InsufficientPrefix {
            need: len,
            have: letters.len(),
        });
    }
    let mut extensions: HashMap<&[Letter], u16> = HashMap::new();
    for i in 0..letters.len() - len {
        *extensions.entry(&letters[i..i + len]).or_default() |= 1 << letters[i + len];
    }
    let mut out: Vec<SpecialFactor> = extensions
        .into_iter()
        .filter(|(_, mask)| mask.count_ones() >= 2)
        .map(|(w, mask)| SpecialFactor {
            factor: Word::from(w),
            extensions: (0..16u8).filter(|b| mask & (1 << b) != 0).collect(),
        })
        .collect();
    out.sort_by(|a, b| a.factor.cmp(&b.factor));
    Ok(out)
}

/// Number of distinct length-`n` factors contained in `p`.
pub fn factor_complexity(p: &PrefixBuffer, n: usize) -> Result<usize> {
    let letters = p.letters();
    if n >= letters.len() {
        return Err(Error::InsufficientPrefix {
            need: n,
            have: letters.len(),
        });
    }
    Ok(factors_of_length(letters, n).len())
}

/// Distinct factors of length `n` in `letters`.
pub fn factors_of_length(letters: &[Letter], n: usize) -> HashSet<&[Letter]> {
    if n == 0 {
        return std::iter::once(&letters[..0]).collect();
    }
    letters.windows(n).collect()
}
