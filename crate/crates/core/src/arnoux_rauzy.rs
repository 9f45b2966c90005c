//! Characteristic Arnoux-Rauzy words as iterated right palindromic closures
//! of a directive sequence.
//!
//! The generator does not search for palindromic suffixes. Its palindromic
//! prefixes `b_0 = ε, b_1, b_2, ...` obey `b_{i+1} = b_i Δ_i b_i` when `Δ_i`
//! is new, and otherwise `b_{i+1} = b_i b_j^{-1} b_i` with `j` the last index
//! where `Δ_j = Δ_i`. Each step appends a slice of the existing buffer, so
//! the output costs O(1) amortized per letter. [`palindromic_closure`]
//! implements the definition independently and is used to cross-check.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::stream::{RandomAccess, WordStream};
use crate::words::{check_alphabet, Letter, ParikhVector, Word, MAX_ALPHABET};

/// Default number of directive letters inspected for the "every letter
/// occurs" promise.
pub const DEFAULT_VALIDATION_PREFIX: usize = 1000;

// Length of the longest palindromic suffix: the longest suffix of `v` equal
// to a prefix of its reversal, via the KMP border of `rev(v) # v`.
fn longest_palindromic_suffix(v: &[Letter]) -> usize {
    if v.is_empty() {
        return 0;
    }
    const SEP: Letter = Letter::MAX;
    let text: Vec<Letter> = v
        .iter()
        .rev()
        .copied()
        .chain(std::iter::once(SEP))
        .chain(v.iter().copied())
        .collect();
    let mut fail = vec![0usize; text.len()];
    let mut k = 0;
    for i in 1..text.len() {
        while k > 0 && text[i] != text[k] {
            k = fail[k - 1];
        }
        if text[i] == text[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail[text.len() - 1]
}

/// `v^(+)`, the shortest palindrome having `v` as a prefix.
pub fn palindromic_closure(v: &[Letter]) -> Word {
    let p = longest_palindromic_suffix(v);
    let head = &v[..v.len() - p];
    let mut out = Vec::with_capacity(v.len() + head.len());
    out.extend_from_slice(v);
    out.extend(head.iter().rev());
    Word::new(out)
}

/// `ψ(δ)`: `ψ(ε) = ε`, `ψ(δa) = (ψ(δ)a)^(+)`.
pub fn iterated_palindromic_closure(directive: &[Letter]) -> Word {
    directive.iter().fold(Word::empty(), |acc, &a| {
        let mut v = acc.into_letters();
        v.push(a);
        palindromic_closure(&v)
    })
}

/// The chain of bispecial prefixes `b_0, ..., b_i` of a characteristic
/// Arnoux-Rauzy word, stored as one buffer holding `b_i`.
#[derive(Clone, Debug)]
pub struct BispecialChain {
    alphabet: usize,
    buf: Vec<Letter>,
    lengths: Vec<usize>,
    // parikh[i*alphabet + a] = |b_i|_a
    parikh: Vec<u64>,
    directive: Vec<Letter>,
    last_occurrence: [Option<usize>; MAX_ALPHABET],
}

impl BispecialChain {
    pub fn new(alphabet: usize) -> Result<Self> {
        check_alphabet(alphabet)?;
        Ok(BispecialChain {
            alphabet,
            buf: Vec::new(),
            lengths: vec![0],
            parikh: vec![0; alphabet],
            directive: Vec::new(),
            last_occurrence: [None; MAX_ALPHABET],
        })
    }

    /// Index `i` of the latest bispecial `b_i`.
    pub fn index(&self) -> usize {
        self.lengths.len() - 1
    }

    pub fn bispecial(&self, i: usize) -> &[Letter] {
        &self.buf[..self.lengths[i]]
    }

    pub fn latest(&self) -> &[Letter] {
        &self.buf
    }

    pub fn parikh(&self, i: usize) -> ParikhVector {
        ParikhVector(self.parikh[i * self.alphabet..(i + 1) * self.alphabet].to_vec())
    }

    pub fn directive(&self) -> &[Letter] {
        &self.directive
    }

    /// Largest `j` so far with `Δ_j = a`.
    pub fn last_occurrence(&self, a: Letter) -> Option<usize> {
        self.last_occurrence[usize::from(a)]
    }

    /// Consumes `Δ_i` and returns `b_{i+1}`.
    pub fn next_bispecial(&mut self, delta: Letter) -> Result<&[Letter]> {
        let d = self.alphabet;
        if usize::from(delta) >= d {
            return Err(Error::InvalidAlphabet {
                letter: delta,
                alphabet: d,
            });
        }
        let i = self.index();
        let len_i = self.buf.len();
        let parikh_i = i * d;
        let mut next: Vec<u64> = self.parikh[parikh_i..parikh_i + d].to_vec();
        match self.last_occurrence[usize::from(delta)] {
            None => {
                debug_assert_eq!(next[usize::from(delta)], 0);
                // b_i Δ_i b_i
                self.buf.push(delta);
                self.buf.extend_from_within(..len_i);
                for c in next.iter_mut() {
                    *c *= 2;
                }
                next[usize::from(delta)] += 1;
            }
            Some(j) => {
                // b_i b_j^{-1} b_i: append the part of b_i after its prefix b_j
                let len_j = self.lengths[j];
                self.buf.extend_from_within(len_j..len_i);
                let pj = &self.parikh[j * d..(j + 1) * d];
                for (c, &cj) in next.iter_mut().zip(pj) {
                    *c = 2 * *c - cj;
                }
            }
        }
        self.last_occurrence[usize::from(delta)] = Some(i);
        self.directive.push(delta);
        self.lengths.push(self.buf.len());
        self.parikh.extend_from_slice(&next);
        Ok(&self.buf)
    }
}

/// A directive sequence: a stream promised to contain every letter of its
/// alphabet infinitely often.
pub struct DirectiveSequence {
    stream: Box<dyn WordStream>,
    replay: Vec<Letter>,
    replay_pos: usize,
}

impl DirectiveSequence {
    /// Checks that every letter occurs within the first `validate` letters.
    /// Infinite recurrence cannot be verified on a stream; this is the only
    /// check performed.
    pub fn new(mut stream: Box<dyn WordStream>, validate: usize) -> Result<Self> {
        let d = stream.alphabet_size();
        if d < 2 {
            return Err(Error::InvalidDirective(
                "alphabet must have at least 2 letters".into(),
            ));
        }
        let replay = stream.prefix(validate);
        let mut seen = vec![false; d];
        for &a in &replay {
            seen[usize::from(a)] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidDirective(format!(
                "letter {missing} does not occur in the first {validate} directive letters"
            )));
        }
        Ok(DirectiveSequence {
            stream,
            replay,
            replay_pos: 0,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.stream.alphabet_size()
    }

    pub fn next_letter(&mut self) -> Letter {
        if self.replay_pos < self.replay.len() {
            self.replay_pos += 1;
            self.replay[self.replay_pos - 1]
        } else {
            self.stream.next_letter()
        }
    }

    pub fn describe(&self) -> String {
        self.stream.describe()
    }
}

/// Streaming characteristic Arnoux-Rauzy word `ψ(Δ)`.
///
/// The emitted prefix is kept in memory because later letters are copied
/// from it.
pub struct ArStream {
    directive: DirectiveSequence,
    chain: BispecialChain,
    pos: usize,
}

impl ArStream {
    pub fn new(directive: DirectiveSequence) -> Result<Self> {
        let chain = BispecialChain::new(directive.alphabet_size())?;
        Ok(ArStream {
            directive,
            chain,
            pos: 0,
        })
    }

    pub fn chain(&self) -> &BispecialChain {
        &self.chain
    }

    fn grow_past(&mut self, pos: usize) {
        while self.chain.latest().len() <= pos {
            let delta = self.directive.next_letter();
            self.chain
                .next_bispecial(delta)
                .expect("directive letters lie in the alphabet");
        }
    }
}

impl WordStream for ArStream {
    fn alphabet_size(&self) -> usize {
        self.chain.alphabet
    }

    fn next_letter(&mut self) -> Letter {
        self.grow_past(self.pos);
        self.pos += 1;
        self.chain.buf[self.pos - 1]
    }

    fn fill(&mut self, out: &mut [Letter]) {
        if out.is_empty() {
            return;
        }
        self.grow_past(self.pos + out.len() - 1);
        out.copy_from_slice(&self.chain.buf[self.pos..self.pos + out.len()]);
        self.pos += out.len();
    }

    fn describe(&self) -> String {
        format!("ar:{}", self.directive.describe())
    }
}

impl RandomAccess for ArStream {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        self.pos = pos
            .to_usize()
            .ok_or_else(|| Error::InvalidParameter("position exceeds addressable memory".into()))?;
        Ok(())
    }
}
