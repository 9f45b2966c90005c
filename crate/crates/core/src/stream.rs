//! The uniform interface over infinite words.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::words::{check_alphabet, check_letters, letters_to_string, Letter};

/// An infinite word read letter by letter.
pub trait WordStream: Send {
    /// Size `d` of the alphabet `{0, ..., d-1}` the stream's letters live in.
    fn alphabet_size(&self) -> usize;

    fn next_letter(&mut self) -> Letter;

    /// Writes the next `out.len()` letters.
    fn fill(&mut self, out: &mut [Letter]) {
        for slot in out {
            *slot = self.next_letter();
        }
    }

    /// Materializes the next `n` letters.
    fn prefix(&mut self, n: usize) -> Vec<Letter> {
        let mut out = vec![0; n];
        self.fill(&mut out);
        out
    }

    /// Human-readable origin of the stream.
    fn describe(&self) -> String;
}

/// Streams that can be repositioned to an arbitrary index.
pub trait RandomAccess: WordStream {
    /// Repositions the stream so the next letter emitted is `u_pos`.
    fn seek(&mut self, pos: &BigUint) -> Result<()>;

    /// Returns `u_pos` and leaves the stream positioned at `pos + 1`.
    fn letter_at(&mut self, pos: &BigUint) -> Result<Letter> {
        self.seek(pos)?;
        Ok(self.next_letter())
    }
}

impl<S: WordStream + ?Sized> WordStream for Box<S> {
    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }
    fn next_letter(&mut self) -> Letter {
        (**self).next_letter()
    }
    fn fill(&mut self, out: &mut [Letter]) {
        (**self).fill(out)
    }
    fn prefix(&mut self, n: usize) -> Vec<Letter> {
        (**self).prefix(n)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<S: RandomAccess + ?Sized> RandomAccess for Box<S> {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        (**self).seek(pos)
    }
}

/// The periodic word `v^ω`.
#[derive(Clone, Debug)]
pub struct CycleStream {
    pattern: Vec<Letter>,
    alphabet: usize,
    pos: usize,
}

impl CycleStream {
    pub fn new(pattern: Vec<Letter>, alphabet: usize) -> Result<Self> {
        check_alphabet(alphabet)?;
        if pattern.is_empty() {
            return Err(Error::InvalidParameter(
                "cycle pattern must be nonempty".into(),
            ));
        }
        check_letters(&pattern, alphabet)?;
        Ok(CycleStream {
            pattern,
            alphabet,
            pos: 0,
        })
    }

    /// Uses the smallest alphabet containing the pattern's letters.
    pub fn from_pattern(pattern: Vec<Letter>) -> Result<Self> {
        let d = pattern
            .iter()
            .map(|&a| usize::from(a) + 1)
            .max()
            .unwrap_or(1)
            .max(1);
        Self::new(pattern, d)
    }
}

impl WordStream for CycleStream {
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    fn next_letter(&mut self) -> Letter {
        let a = self.pattern[self.pos];
        self.pos += 1;
        if self.pos == self.pattern.len() {
            self.pos = 0;
        }
        a
    }

    fn describe(&self) -> String {
        format!("cycle:{}", letters_to_string(&self.pattern))
    }
}

impl RandomAccess for CycleStream {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        let period = BigUint::from(self.pattern.len());
        self.pos = (pos % period).to_usize().expect("residue below period");
        Ok(())
    }
}

/// Iterator adapter over a borrowed stream.
pub struct Letters<'a, S: WordStream + ?Sized>(pub &'a mut S);

impl<S: WordStream + ?Sized> Iterator for Letters<'_, S> {
    type Item = Letter;
    fn next(&mut self) -> Option<Letter> {
        Some(self.0.next_letter())
    }
}
