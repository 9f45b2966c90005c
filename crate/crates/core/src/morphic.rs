//! Morphisms, their fixed points, and word transforms.
//!
//! [`FixedPointStream`] generates the fixed point `u = φ^ω(a)` by a
//! depth-first walk of the φ-expansion tree. The walk stops `power` levels
//! above the leaves and copies precomputed blocks `φ^power(b)` instead, so
//! almost all output is produced by `memcpy`. Only the path from the root to
//! the current block is kept, which makes memory logarithmic in the position.
//! The same tree, annotated with the image lengths `|φ^k(b)|`, gives random
//! access ("leap-frogging") to any position.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stream::{RandomAccess, WordStream};
use crate::words::{
    check_alphabet, check_letters, letter_from_char, letters_to_string, Letter, ParikhVector, Word,
};

/// Default upper bound on the length of a precomputed block `φ^n(b)`.
pub const DEFAULT_BLOCK_CAP: usize = 4096;

/// A nonerasing morphism on the alphabet `{0, ..., d-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    images: Vec<Vec<Letter>>,
}

impl Morphism {
    /// Builds a morphism from the images of `0, 1, ..., d-1`.
    pub fn new(images: Vec<Vec<Letter>>) -> Result<Self> {
        let d = images.len();
        check_alphabet(d)?;
        for (b, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::InvalidMorphism(format!("image of {b} is empty")));
            }
            check_letters(img, d)?;
        }
        Ok(Morphism { images })
    }

    /// `0 -> 01, 1 -> 0`.
    pub fn fibonacci() -> Self {
        Morphism {
            images: vec![vec![0, 1], vec![0]],
        }
    }

    /// `0 -> 01, 1 -> 02, 2 -> 0`.
    pub fn tribonacci() -> Self {
        Morphism {
            images: vec![vec![0, 1], vec![0, 2], vec![0]],
        }
    }

    /// `0 -> 01, 1 -> 10`.
    pub fn thue_morse() -> Self {
        Morphism {
            images: vec![vec![0, 1], vec![1, 0]],
        }
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new((0..d as Letter).map(|b| vec![b]).collect())
    }

    /// The letter-to-letter morphism `b -> mapping[b]`.
    pub fn letter_map(mapping: &[Letter]) -> Result<Self> {
        Self::new(mapping.iter().map(|&b| vec![b]).collect())
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, b: Letter) -> &[Letter] {
        &self.images[usize::from(b)]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `φ(w)`, the concatenation of the images of the letters of `w`.
    pub fn apply(&self, w: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(w.len() * self.max_image_len());
        for &a in w {
            out.extend_from_slice(self.image(a));
        }
        Word::new(out)
    }

    /// `φ^k(w)`.
    pub fn apply_power(&self, w: &[Letter], k: u32) -> Word {
        (0..k).fold(Word::from(w), |acc, _| self.apply(&acc))
    }

    /// True iff `|φ(a)| >= 2` and `a` is a prefix of `φ(a)`.
    pub fn is_prolongable(&self, a: Letter) -> bool {
        let img = self.image(a);
        img.len() >= 2 && img[0] == a
    }

    /// True when every image is a single letter.
    pub fn is_letter_to_letter(&self) -> bool {
        self.images.iter().all(|img| img.len() == 1)
    }

    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        let d = self.alphabet_size();
        let mut entries = vec![0u64; d * d];
        for (j, img) in self.images.iter().enumerate() {
            for &i in img {
                entries[usize::from(i) * d + j] += 1;
            }
        }
        AdjacencyMatrix { d, entries }
    }
}

impl FromStr for Morphism {
    type Err = Error;

    /// Parses rules such as `0->01,1->0`. Every letter `0..d` must have
    /// exactly one rule, where `d` is one more than the largest letter used.
    fn from_str(s: &str) -> Result<Self> {
        let (m, used) = parse_rules(s, 0)?;
        if used != s.len() {
            return Err(Error::Parse {
                position: used,
                message: "trailing input after morphism rules".into(),
                expected: "',' or end of input".into(),
            });
        }
        Ok(m)
    }
}

/// Parses `digit->digits(,digit->digits)*` starting at byte `offset` of the
/// original input. Returns the morphism and the number of bytes consumed.
pub(crate) fn parse_rules(s: &str, offset: usize) -> Result<(Morphism, usize)> {
    let bytes = s.as_bytes();
    let err = |pos: usize, message: &str, expected: &str| Error::Parse {
        position: offset + pos,
        message: message.into(),
        expected: expected.into(),
    };
    let mut rules: Vec<(Letter, Vec<Letter>, usize)> = Vec::new();
    let mut i = 0;
    loop {
        let src = bytes
            .get(i)
            .and_then(|&c| letter_from_char(c as char))
            .ok_or_else(|| err(i, "malformed morphism rule", "a letter digit"))?;
        let rule_pos = i;
        i += 1;
        if bytes.get(i..i + 2) != Some(b"->") {
            return Err(err(i, "malformed morphism rule", "'->'"));
        }
        i += 2;
        let start = i;
        while bytes
            .get(i)
            .is_some_and(|&c| letter_from_char(c as char).is_some())
        {
            i += 1;
        }
        if i == start {
            return Err(err(
                i,
                "empty image in morphism rule",
                "at least one letter digit",
            ));
        }
        let image = s[start..i].chars().filter_map(letter_from_char).collect();
        rules.push((src, image, rule_pos));
        // Another rule follows only if ',' is followed by `digit->`.
        let another = bytes.get(i) == Some(&b',')
            && bytes
                .get(i + 1)
                .is_some_and(|&c| letter_from_char(c as char).is_some())
            && bytes.get(i + 2..i + 4) == Some(b"->");
        if !another {
            break;
        }
        i += 1;
    }
    let d = rules
        .iter()
        .flat_map(|(b, img, _)| std::iter::once(b).chain(img.iter()))
        .map(|&a| usize::from(a) + 1)
        .max()
        .unwrap_or(1);
    let mut images: Vec<Option<Vec<Letter>>> = vec![None; d];
    for (b, img, pos) in rules {
        if images[usize::from(b)].replace(img).is_some() {
            return Err(err(
                pos,
                &format!("duplicate rule for letter {b}"),
                "one rule per letter",
            ));
        }
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(b, img)| {
            img.ok_or_else(|| {
                err(
                    i,
                    &format!("no rule for letter {b}"),
                    &format!("a rule '{b}->...'"),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Morphism::new(images)?, i))
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, img) in self.images.iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            write!(
                f,
                "{}->{}",
                letters_to_string(&[b as Letter]),
                letters_to_string(img)
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

/// `Φ[i][j] = |φ(j)|_i`, so that `parikh(φ(w)) = Φ · parikh(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyMatrix {
    d: usize,
    entries: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.d).map(<[u64]>::to_vec).collect()
    }

    pub fn apply(&self, v: &ParikhVector) -> ParikhVector {
        assert_eq!(v.dim(), self.d);
        ParikhVector(
            (0..self.d)
                .map(|i| (0..self.d).map(|j| self.get(i, j) * v.0[j]).sum())
                .collect(),
        )
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.d;
        let mut a: Vec<Vec<BigInt>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

/// Prefix of length `n` of the fixed point of `φ` starting with `a`, built by
/// repeated application of the morphism.
pub fn naive_fixed_point_prefix(m: &Morphism, a: Letter, n: usize) -> Result<Vec<Letter>> {
    if !m.is_prolongable(a) {
        return Err(Error::NotProlongable(a));
    }
    let mut w = vec![a];
    while w.len() < n {
        w = m.apply(&w).into_letters();
    }
    w.truncate(n);
    Ok(w)
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    letter: Letter,
    // the frame expands φ^level(letter)
    level: u32,
    next_child: u32,
}

/// Streaming generator of a morphic fixed point.
#[derive(Clone, Debug)]
pub struct FixedPointStream {
    morphism: Morphism,
    seed: Letter,
    power: u32,
    blocks: Vec<Vec<Letter>>,
    stack: Vec<Frame>,
    current: usize,
    offset: usize,
    // position of the start of the current block = base + emitted
    base: BigUint,
    emitted: u64,
    peak_depth: usize,
    // lengths[k][b] = |φ^(power + k)(b)|
    lengths: Vec<Vec<BigUint>>,
}

impl FixedPointStream {
    /// Uses the largest power `n` with every `|φ^n(b)| <= block_cap`.
    pub fn new(morphism: Morphism, seed: Letter, block_cap: usize) -> Result<Self> {
        let power = Self::choose_power(&morphism, seed, block_cap)?;
        Self::with_power(morphism, seed, power)
    }

    pub fn with_default_cap(morphism: Morphism, seed: Letter) -> Result<Self> {
        Self::new(morphism, seed, DEFAULT_BLOCK_CAP)
    }

    /// Uses blocks `φ^power(b)`. `power = 1` is the plain φ-rule traversal
    /// that copies at most `max |φ(b)|` letters per tree step.
    pub fn with_power(morphism: Morphism, seed: Letter, power: u32) -> Result<Self> {
        if usize::from(seed) >= morphism.alphabet_size() {
            return Err(Error::InvalidAlphabet {
                letter: seed,
                alphabet: morphism.alphabet_size(),
            });
        }
        if !morphism.is_prolongable(seed) {
            return Err(Error::NotProlongable(seed));
        }
        let d = morphism.alphabet_size() as Letter;
        let blocks: Vec<Vec<Letter>> = (0..d)
            .map(|b| morphism.apply_power(&[b], power).into_letters())
            .collect();
        let base_lengths = blocks.iter().map(|b| BigUint::from(b.len())).collect();
        let mut s = FixedPointStream {
            morphism,
            seed,
            power,
            blocks,
            stack: Vec::with_capacity(64),
            current: 0,
            offset: 0,
            base: BigUint::zero(),
            emitted: 0,
            peak_depth: 0,
            lengths: vec![base_lengths],
        };
        s.reset();
        Ok(s)
    }

    /// Largest `n >= 1` with `max_b |φ^n(b)| <= block_cap`.
    pub fn choose_power(morphism: &Morphism, seed: Letter, block_cap: usize) -> Result<u32> {
        if !morphism.is_prolongable(seed) {
            return Err(Error::NotProlongable(seed));
        }
        let need = morphism.max_image_len();
        if block_cap < need {
            return Err(Error::BlockCapTooSmall {
                cap: block_cap,
                need,
            });
        }
        let mut lens: Vec<usize> = morphism.images().iter().map(Vec::len).collect();
        let mut power = 1;
        loop {
            let next: Vec<usize> = morphism
                .images()
                .iter()
                .map(|img| {
                    img.iter()
                        .map(|&c| lens[usize::from(c)])
                        .fold(0usize, usize::saturating_add)
                })
                .collect();
            if next.iter().any(|&l| l > block_cap) {
                return Ok(power);
            }
            lens = next;
            power += 1;
        }
    }

    fn reset(&mut self) {
        self.stack.clear();
        self.stack.push(Frame {
            letter: self.seed,
            level: self.power + 1,
            next_child: 1,
        });
        self.peak_depth = self.peak_depth.max(1);
        self.current = usize::from(self.seed);
        self.offset = 0;
        self.base = BigUint::zero();
        self.emitted = 0;
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    /// The power `n` of the precomputed blocks `φ^n(b)`.
    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn block(&self, b: Letter) -> &[Letter] {
        &self.blocks[usize::from(b)]
    }

    /// Index of the next letter to be emitted.
    pub fn position(&self) -> BigUint {
        &self.base + self.emitted + self.offset as u64
    }

    /// Current number of traversal frames.
    pub fn stack_depth(&self) -> usize {
        self.stack.len()
    }

    /// Largest number of traversal frames held since construction.
    pub fn peak_stack_depth(&self) -> usize {
        self.peak_depth
    }

    /// Bytes held by the traversal frames at peak depth.
    pub fn peak_stack_bytes(&self) -> usize {
        self.peak_depth * std::mem::size_of::<Frame>()
    }

    // Moves to the next block of the depth-first traversal.
    fn advance(&mut self) {
        let finished = self.blocks[self.current].len() as u64;
        match self.emitted.checked_add(finished) {
            Some(e) => self.emitted = e,
            None => {
                self.base += self.emitted;
                self.emitted = finished;
            }
        }
        loop {
            let top = self
                .stack
                .last_mut()
                .expect("traversal stack is never empty");
            let image = &self.morphism.images[usize::from(top.letter)];
            if top.next_child as usize == image.len() {
                let done = self.stack.pop().expect("nonempty");
                if self.stack.is_empty() {
                    // φ^(L+1)(a) = φ^L(a) φ^L(rest of φ(a)): the finished root
                    // is the first child of the next root.
                    self.stack.push(Frame {
                        letter: self.seed,
                        level: done.level + 1,
                        next_child: 1,
                    });
                }
                continue;
            }
            let child = image[top.next_child as usize];
            top.next_child += 1;
            let child_level = top.level - 1;
            if child_level == self.power {
                self.current = usize::from(child);
                self.offset = 0;
                return;
            }
            self.stack.push(Frame {
                letter: child,
                level: child_level,
                next_child: 0,
            });
            self.peak_depth = self.peak_depth.max(self.stack.len());
        }
    }

    // lengths row for level `power + k`, extending the table as needed.
    fn lengths_at(&mut self, k: usize) -> &[BigUint] {
        if self.lengths.len() <= k {
            let phi = self.morphism.adjacency_matrix();
            let d = phi.dim();
            while self.lengths.len() <= k {
                let prev = self.lengths.last().expect("nonempty");
                // |φ^(k+1)(b)| = Σ_c |φ^k(c)| · Φ[c][b]
                let next = (0..d)
                    .map(|b| {
                        (0..d)
                            .filter(|&c| phi.get(c, b) > 0)
                            .map(|c| &prev[c] * phi.get(c, b))
                            .sum::<BigUint>()
                    })
                    .collect();
                self.lengths.push(next);
            }
        }
        &self.lengths[k]
    }
}

impl WordStream for FixedPointStream {
    fn alphabet_size(&self) -> usize {
        self.morphism.alphabet_size()
    }

    #[inline]
    fn next_letter(&mut self) -> Letter {
        if self.offset == self.blocks[self.current].len() {
            self.advance();
        }
        let a = self.blocks[self.current][self.offset];
        self.offset += 1;
        a
    }

    fn fill(&mut self, out: &mut [Letter]) {
        let mut done = 0;
        while done < out.len() {
            let block = &self.blocks[self.current];
            if self.offset == block.len() {
                self.advance();
                continue;
            }
            let n = (block.len() - self.offset).min(out.len() - done);
            out[done..done + n].copy_from_slice(&block[self.offset..self.offset + n]);
            self.offset += n;
            done += n;
        }
    }

    fn describe(&self) -> String {
        format!("morphism:{}:{}", self.morphism, self.seed)
    }
}

impl RandomAccess for FixedPointStream {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        let seed = usize::from(self.seed);
        // smallest root level strictly above the blocks whose expansion covers pos
        let mut k = 1;
        while self.lengths_at(k)[seed] <= *pos {
            k += 1;
        }
        self.stack.clear();
        let mut rem = pos.clone();
        let mut letter = self.seed;
        let mut level = self.power + k as u32;
        loop {
            let depth_row = (level - 1 - self.power) as usize;
            let row = self.lengths_at(depth_row).to_vec();
            let image = self.morphism.image(letter).to_vec();
            let mut chosen = None;
            for (i, &c) in image.iter().enumerate() {
                let len = &row[usize::from(c)];
                if rem < *len {
                    chosen = Some((i, c));
                    break;
                }
                rem -= len;
            }
            let (i, c) = chosen.expect("position lies inside the expansion");
            self.stack.push(Frame {
                letter,
                level,
                next_child: i as u32 + 1,
            });
            self.peak_depth = self.peak_depth.max(self.stack.len());
            if level - 1 == self.power {
                self.current = usize::from(c);
                self.offset = rem.to_usize().expect("offset inside a block");
                self.base = pos - BigUint::from(self.offset);
                self.emitted = 0;
                return Ok(());
            }
            letter = c;
            level -= 1;
        }
    }
}

/// Letterwise image of a stream under a surjective letter map.
#[derive(Clone, Debug)]
pub struct MergedStream<S> {
    inner: S,
    mapping: Vec<Letter>,
    alphabet: usize,
}

/// Applies `mapping` (letter `b` becomes `mapping[b]`) to every letter of `inner`.
///
/// The mapping must be defined on the whole source alphabet and hit every
/// letter of the (possibly smaller) target alphabet.
pub fn merge_letters<S: WordStream>(inner: S, mapping: Vec<Letter>) -> Result<MergedStream<S>> {
    let d = inner.alphabet_size();
    if mapping.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: mapping.len(),
        });
    }
    let target = check_surjection(&mapping)?;
    Ok(MergedStream {
        inner,
        mapping,
        alphabet: target,
    })
}

/// Returns the target alphabet size if `mapping` is onto `0..max+1`.
pub(crate) fn check_surjection(mapping: &[Letter]) -> Result<usize> {
    let target = mapping
        .iter()
        .map(|&a| usize::from(a) + 1)
        .max()
        .unwrap_or(0);
    let mut hit = vec![false; target];
    for &a in mapping {
        hit[usize::from(a)] = true;
    }
    if hit.iter().all(|&h| h) && target > 0 {
        Ok(target)
    } else {
        Err(Error::NotSurjective(target))
    }
}

impl<S> MergedStream<S> {
    pub fn mapping(&self) -> &[Letter] {
        &self.mapping
    }
}

impl<S: WordStream> WordStream for MergedStream<S> {
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    fn next_letter(&mut self) -> Letter {
        self.mapping[usize::from(self.inner.next_letter())]
    }

    fn fill(&mut self, out: &mut [Letter]) {
        self.inner.fill(out);
        for a in out {
            *a = self.mapping[usize::from(*a)];
        }
    }

    fn describe(&self) -> String {
        format!(
            "merge:{}:{}",
            letters_to_string(&self.mapping),
            self.inner.describe()
        )
    }
}

impl<S: RandomAccess> RandomAccess for MergedStream<S> {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        self.inner.seek(pos)
    }
}

/// `u_0 c u_1 c u_2 c ...` where `c` is a fresh letter.
#[derive(Clone, Debug)]
pub struct InterleavedStream<S> {
    inner: S,
    separator: Letter,
    separator_next: bool,
}

/// Inserts the new letter `separator` after every letter of `inner`.
/// `separator` must equal the source alphabet size.
pub fn interleave_letter<S: WordStream>(
    inner: S,
    separator: Letter,
) -> Result<InterleavedStream<S>> {
    let d = inner.alphabet_size();
    if usize::from(separator) != d {
        return Err(Error::InvalidParameter(format!(
            "interleaved letter must be the new letter {d}, got {separator}"
        )));
    }
    check_alphabet(d + 1)?;
    Ok(InterleavedStream {
        inner,
        separator,
        separator_next: false,
    })
}

impl<S: WordStream> WordStream for InterleavedStream<S> {
    fn alphabet_size(&self) -> usize {
        usize::from(self.separator) + 1
    }

    fn next_letter(&mut self) -> Letter {
        let sep = self.separator_next;
        self.separator_next = !sep;
        if sep {
            self.separator
        } else {
            self.inner.next_letter()
        }
    }

    fn describe(&self) -> String {
        format!("interleave:{}", self.inner.describe())
    }
}

impl<S: RandomAccess> RandomAccess for InterleavedStream<S> {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        let k: BigUint = pos >> 1u32;
        if pos.bit(0) {
            self.inner.seek(&(k + 1u32))?;
            self.separator_next = true;
        } else {
            self.inner.seek(&k)?;
            self.separator_next = false;
        }
        Ok(())
    }
}
