//! Text descriptors for words and generators.
//!
//! Words:
//!
//! ```text
//! fib | fib2 | trib | tm
//! cycle:<letters>
//! morphism:<rules>[:<seed>]          (alias morphic:)
//! ar:<word>                          directive word
//! rot:<alpha>:<rho>[:left|right]
//! merge:<letters>:<word>             letter b becomes letters[b]
//! interleave:<word>                  new letter after every letter
//! ```
//!
//! Generators:
//!
//! ```text
//! lcg:m=<n>,a=<n>,c=<n>[,seed=<n>]   numbers as 123, 2^31, 2^47-115
//! randu | l47-115 | l63-25 | l59 | l63 | l64_28 | l64_32 | l64_39 [:seed=<n>]
//! shuffle:<word>:<gen>,<gen>[,...]
//! ```
//!
//! Formatting is canonical and parses back to an equal descriptor.

use std::fmt;
use std::str::FromStr;

use crate::arnoux_rauzy::{ArStream, DirectiveSequence, DEFAULT_VALIDATION_PREFIX};
use crate::error::{Error, Result};
use crate::morphic::{
    check_surjection, interleave_letter, merge_letters, parse_rules, FixedPointStream, Morphism,
    DEFAULT_BLOCK_CAP,
};
use crate::prng::{Lcg, Prng, ShuffledPrng, NAMED_LCGS};
use crate::rotation::{parse_quadratic, Convention, RotationCoding, RotationStream};
use crate::stream::{CycleStream, RandomAccess, WordStream};
use crate::words::{check_alphabet, letter_from_char, letters_to_string, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WordSpec {
    /// Fixed point of `morphism` starting with `seed`.
    Morphic {
        morphism: Morphism,
        seed: Letter,
    },
    Cycle(Word),
    /// Characteristic Arnoux-Rauzy word of a directive.
    ArnouxRauzy(Box<WordSpec>),
    Rotation(RotationCoding),
    Merge {
        mapping: Vec<Letter>,
        inner: Box<WordSpec>,
    },
    Interleave(Box<WordSpec>),
}

impl WordSpec {
    pub fn fibonacci() -> Self {
        WordSpec::Morphic {
            morphism: Morphism::fibonacci(),
            seed: 0,
        }
    }

    pub fn tribonacci() -> Self {
        WordSpec::Morphic {
            morphism: Morphism::tribonacci(),
            seed: 0,
        }
    }

    pub fn thue_morse() -> Self {
        WordSpec::Morphic {
            morphism: Morphism::thue_morse(),
            seed: 0,
        }
    }

    /// The Fibonacci word with a new letter after each letter.
    pub fn fibonacci2() -> Self {
        WordSpec::Interleave(Box::new(WordSpec::fibonacci()))
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            WordSpec::Morphic { morphism, .. } => morphism.alphabet_size(),
            WordSpec::Cycle(w) => w.alphabet_hint(),
            WordSpec::ArnouxRauzy(d) => d.alphabet_size(),
            WordSpec::Rotation(_) => 2,
            WordSpec::Merge { mapping, .. } => mapping
                .iter()
                .map(|&a| usize::from(a) + 1)
                .max()
                .unwrap_or(1),
            WordSpec::Interleave(inner) => inner.alphabet_size() + 1,
        }
    }

    /// Checks everything that can fail in [`WordSpec::build`] except the
    /// directive recurrence check.
    pub fn validate(&self) -> Result<()> {
        match self {
            WordSpec::Morphic { morphism, seed } => {
                if usize::from(*seed) >= morphism.alphabet_size() || !morphism.is_prolongable(*seed)
                {
                    return Err(Error::NotProlongable(*seed));
                }
                FixedPointStream::choose_power(morphism, *seed, DEFAULT_BLOCK_CAP).map(|_| ())
            }
            WordSpec::Cycle(w) => {
                if w.is_empty() {
                    return Err(Error::InvalidParameter(
                        "cycle pattern must be nonempty".into(),
                    ));
                }
                check_alphabet(w.alphabet_hint())
            }
            WordSpec::ArnouxRauzy(d) => {
                d.validate()?;
                if d.alphabet_size() < 2 {
                    return Err(Error::InvalidDirective(
                        "alphabet must have at least 2 letters".into(),
                    ));
                }
                Ok(())
            }
            WordSpec::Rotation(_) => Ok(()),
            WordSpec::Merge { mapping, inner } => {
                inner.validate()?;
                if mapping.len() != inner.alphabet_size() {
                    return Err(Error::DimensionMismatch {
                        expected: inner.alphabet_size(),
                        got: mapping.len(),
                    });
                }
                check_surjection(mapping).map(|_| ())
            }
            WordSpec::Interleave(inner) => {
                inner.validate()?;
                check_alphabet(inner.alphabet_size() + 1)
            }
        }
    }

    pub fn build(&self) -> Result<Box<dyn RandomAccess>> {
        self.build_with_cap(DEFAULT_BLOCK_CAP)
    }

    /// Builds the stream; `block_cap` applies to every morphic component.
    pub fn build_with_cap(&self, block_cap: usize) -> Result<Box<dyn RandomAccess>> {
        Ok(match self {
            WordSpec::Morphic { morphism, seed } => {
                Box::new(FixedPointStream::new(morphism.clone(), *seed, block_cap)?)
            }
            WordSpec::Cycle(w) => Box::new(CycleStream::from_pattern(w.letters().to_vec())?),
            WordSpec::ArnouxRauzy(d) => {
                let directive = Box::new(d.build_with_cap(block_cap)?);
                Box::new(ArStream::new(DirectiveSequence::new(
                    directive,
                    DEFAULT_VALIDATION_PREFIX,
                )?)?)
            }
            WordSpec::Rotation(c) => Box::new(RotationStream::new(c.clone())),
            WordSpec::Merge { mapping, inner } => Box::new(merge_letters(
                inner.build_with_cap(block_cap)?,
                mapping.clone(),
            )?),
            WordSpec::Interleave(inner) => {
                let inner = inner.build_with_cap(block_cap)?;
                let sep = inner.alphabet_size() as Letter;
                Box::new(interleave_letter(inner, sep)?)
            }
        })
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Morphic { morphism, seed } => {
                if *seed == 0 && *morphism == Morphism::fibonacci() {
                    f.write_str("fib")
                } else if *seed == 0 && *morphism == Morphism::tribonacci() {
                    f.write_str("trib")
                } else if *seed == 0 && *morphism == Morphism::thue_morse() {
                    f.write_str("tm")
                } else {
                    write!(f, "morphism:{morphism}:{seed:x}")
                }
            }
            WordSpec::Cycle(w) => write!(f, "cycle:{w}"),
            WordSpec::ArnouxRauzy(d) => write!(f, "ar:{d}"),
            WordSpec::Rotation(c) => write!(f, "rot:{}:{}:{}", c.alpha(), c.rho(), c.convention()),
            WordSpec::Merge { mapping, inner } => {
                write!(f, "merge:{}:{inner}", letters_to_string(mapping))
            }
            WordSpec::Interleave(inner) if **inner == WordSpec::fibonacci() => f.write_str("fib2"),
            WordSpec::Interleave(inner) => write!(f, "interleave:{inner}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GenSpec {
    Lcg {
        m: u128,
        a: u64,
        c: u64,
        seed: Option<u64>,
    },
    /// A generator from [`NAMED_LCGS`].
    Named { name: String, seed: Option<u64> },
    Shuffle {
        steering: WordSpec,
        sources: Vec<GenSpec>,
    },
}

impl GenSpec {
    /// Builds the generator; sources without an explicit seed get `default_seed`.
    pub fn build(&self, default_seed: u64) -> Result<Box<dyn Prng>> {
        Ok(match self {
            GenSpec::Lcg { m, a, c, seed } => {
                Box::new(Lcg::new(*m, *a, *c, seed.unwrap_or(default_seed))?)
            }
            GenSpec::Named { name, seed } => {
                Box::new(Lcg::named(name, seed.unwrap_or(default_seed))?)
            }
            GenSpec::Shuffle { steering, sources } => {
                let sources = sources
                    .iter()
                    .map(|s| s.build(default_seed))
                    .collect::<Result<Vec<_>>>()?;
                Box::new(ShuffledPrng::new(Box::new(steering.build()?), sources)?)
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GenSpec::Lcg { m, a, c, seed } => Lcg::new(*m, *a, *c, seed.unwrap_or(0)).map(|_| ()),
            GenSpec::Named { name, seed } => Lcg::named(name, seed.unwrap_or(0)).map(|_| ()),
            GenSpec::Shuffle { steering, sources } => {
                steering.validate()?;
                let d = steering.alphabet_size();
                if d > sources.len() {
                    return Err(Error::AlphabetMismatch {
                        letter: (d - 1) as Letter,
                        sources: sources.len(),
                    });
                }
                let mut range = None;
                for s in sources {
                    if matches!(s, GenSpec::Shuffle { .. }) {
                        return Err(Error::InvalidParameter(
                            "shuffle sources must be plain generators".into(),
                        ));
                    }
                    s.validate()?;
                    let r = s.build(0)?.output_range();
                    if range.is_some_and(|x| x != r) {
                        return Err(Error::InvalidParameter(
                            "shuffle sources must share one output set".into(),
                        ));
                    }
                    range = Some(r);
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Lcg { m, a, c, seed } => {
                write!(f, "lcg:m={m},a={a},c={c}")?;
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
                Ok(())
            }
            GenSpec::Named { name, seed } => {
                f.write_str(name)?;
                if let Some(s) = seed {
                    write!(f, ":seed={s}")?;
                }
                Ok(())
            }
            GenSpec::Shuffle { steering, sources } => {
                write!(f, "shuffle:{steering}:")?;
                for (k, s) in sources.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    s: &'a str,
    i: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.i..]
    }

    fn err(&self, message: impl Into<String>, expected: impl Into<String>) -> Error {
        Error::Parse {
            position: self.i,
            message: message.into(),
            expected: expected.into(),
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.i += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected {tok:?}"), format!("{tok:?}")))
        }
    }

    fn peek_byte(&self, k: usize) -> Option<u8> {
        self.s.as_bytes().get(self.i + k).copied()
    }

    fn name(&mut self, extra: &[u8]) -> &'a str {
        let start = self.i;
        while self
            .peek_byte(0)
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_' || extra.contains(&c))
        {
            self.i += 1;
        }
        &self.s[start..self.i]
    }

    fn letters(&mut self) -> Result<Vec<Letter>> {
        let start = self.i;
        while self
            .peek_byte(0)
            .is_some_and(|c| letter_from_char(c as char).is_some())
        {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected letters", "letter digits 0-9, a-f"));
        }
        Ok(self.s[start..self.i]
            .chars()
            .filter_map(letter_from_char)
            .collect())
    }

    fn decimal(&mut self) -> Result<u128> {
        let start = self.i;
        while self.peek_byte(0).is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a number", "decimal digits"));
        }
        self.s[start..self.i].parse().map_err(|_| {
            self.i = start;
            self.err("number too large", "a value below 2^128")
        })
    }

    // n | b^e | b^e+j | b^e-j
    fn number(&mut self) -> Result<u128> {
        let start = self.i;
        let mut v = self.decimal()?;
        if self.eat("^") {
            let e = self.decimal()?;
            v = u32::try_from(e)
                .ok()
                .and_then(|e| v.checked_pow(e))
                .ok_or_else(|| Error::Parse {
                    position: start,
                    message: "power too large".into(),
                    expected: "a value below 2^128".into(),
                })?;
            if self.eat("+") {
                let j = self.decimal()?;
                v = v
                    .checked_add(j)
                    .ok_or_else(|| self.err("number too large", "a value below 2^128"))?;
            } else if self.peek_byte(0) == Some(b'-')
                && self.peek_byte(1).is_some_and(|c| c.is_ascii_digit())
            {
                self.i += 1;
                let j = self.decimal()?;
                v = v
                    .checked_sub(j)
                    .ok_or_else(|| self.err("negative number", "a nonnegative value"))?;
            }
        }
        Ok(v)
    }

    fn u64_number(&mut self) -> Result<u64> {
        let start = self.i;
        let v = self.number()?;
        u64::try_from(v).map_err(|_| Error::Parse {
            position: start,
            message: format!("{v} does not fit in 64 bits"),
            expected: "a value below 2^64".into(),
        })
    }

    fn validated<T>(&self, start: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            e @ Error::Parse { .. } => e,
            other => Error::Parse {
                position: start,
                message: other.to_string(),
                expected: "a valid descriptor".into(),
            },
        })
    }

    fn word(&mut self) -> Result<WordSpec> {
        let start = self.i;
        let head = self.name(&[]);
        let spec = match head {
            "fib" => WordSpec::fibonacci(),
            "fib2" => WordSpec::fibonacci2(),
            "trib" => WordSpec::tribonacci(),
            "tm" => WordSpec::thue_morse(),
            "cycle" => {
                self.expect(":")?;
                WordSpec::Cycle(Word::new(self.letters()?))
            }
            "morphism" | "morphic" => {
                self.expect(":")?;
                let (morphism, used) = parse_rules(self.rest(), self.i)?;
                self.i += used;
                let seed = if self.peek_byte(0) == Some(b':')
                    && self
                        .peek_byte(1)
                        .is_some_and(|c| letter_from_char(c as char).is_some())
                {
                    self.i += 1;
                    let pos = self.i;
                    let seed = self.letters()?;
                    if seed.len() != 1 {
                        self.i = pos;
                        return Err(self.err("seed must be a single letter", "one letter digit"));
                    }
                    seed[0]
                } else {
                    0
                };
                WordSpec::Morphic { morphism, seed }
            }
            "ar" => {
                self.expect(":")?;
                WordSpec::ArnouxRauzy(Box::new(self.word()?))
            }
            "rot" => {
                self.expect(":")?;
                let (alpha, used) = parse_quadratic(self.rest(), self.i)?;
                self.i += used;
                self.expect(":")?;
                let (rho, used) = parse_quadratic(self.rest(), self.i)?;
                self.i += used;
                let convention = if self.eat(":left") {
                    Convention::Left
                } else if self.eat(":right") {
                    Convention::Right
                } else {
                    Convention::Left
                };
                let coding = self.validated(start, RotationCoding::new(alpha, rho, convention))?;
                WordSpec::Rotation(coding)
            }
            "merge" => {
                self.expect(":")?;
                let mapping = self.letters()?;
                self.expect(":")?;
                WordSpec::Merge {
                    mapping,
                    inner: Box::new(self.word()?),
                }
            }
            "interleave" => {
                self.expect(":")?;
                WordSpec::Interleave(Box::new(self.word()?))
            }
            _ => {
                self.i = start;
                return Err(self.err(
                    format!("unknown word {head:?}"),
                    "fib, fib2, trib, tm, cycle:, morphism:, ar:, rot:, merge:, interleave:",
                ));
            }
        };
        self.validated(start, spec.validate())?;
        Ok(spec)
    }

    fn source(&mut self) -> Result<GenSpec> {
        let start = self.i;
        let head = self.name(b"-");
        let spec = if head == "lcg" {
            self.expect(":")?;
            let (mut m, mut a, mut c, mut seed) = (None, None, None, None);
            loop {
                let key_pos = self.i;
                let key = self.name(&[]);
                self.expect("=")?;
                let slot = match key {
                    "m" => {
                        m = Some(self.number()?);
                        None
                    }
                    "a" => Some(&mut a),
                    "c" => Some(&mut c),
                    "seed" => Some(&mut seed),
                    _ => {
                        self.i = key_pos;
                        return Err(
                            self.err(format!("unknown lcg field {key:?}"), "m=, a=, c= or seed=")
                        );
                    }
                };
                if let Some(slot) = slot {
                    *slot = Some(self.u64_number()?);
                }
                // continue only on `,key=`
                let more = self.rest().strip_prefix(',').is_some_and(|r| {
                    let k: String = r
                        .chars()
                        .take_while(|c| c.is_ascii_alphanumeric())
                        .collect();
                    !k.is_empty() && r[k.len()..].starts_with('=')
                });
                if !more {
                    break;
                }
                self.i += 1;
            }
            let missing = |what: &str| Error::Parse {
                position: start,
                message: format!("lcg needs {what}="),
                expected: "m=, a= and c=".into(),
            };
            GenSpec::Lcg {
                m: m.ok_or_else(|| missing("m"))?,
                a: a.ok_or_else(|| missing("a"))?,
                c: c.ok_or_else(|| missing("c"))?,
                seed,
            }
        } else if NAMED_LCGS.iter().any(|(n, ..)| *n == head) {
            let seed = if self.eat(":seed=") {
                Some(self.u64_number()?)
            } else {
                None
            };
            GenSpec::Named {
                name: head.to_string(),
                seed,
            }
        } else {
            self.i = start;
            let names: Vec<&str> = NAMED_LCGS.iter().map(|(n, ..)| *n).collect();
            return Err(self.err(
                format!("unknown generator {head:?}"),
                format!("lcg:, shuffle: or one of {}", names.join(", ")),
            ));
        };
        self.validated(start, spec.validate())?;
        Ok(spec)
    }

    fn gen(&mut self) -> Result<GenSpec> {
        let start = self.i;
        if !self.eat("shuffle:") {
            return self.source();
        }
        let steering = self.word()?;
        self.expect(":")?;
        let mut sources = vec![self.source()?];
        while self.eat(",") {
            sources.push(self.source()?);
        }
        let spec = GenSpec::Shuffle { steering, sources };
        self.validated(start, spec.validate())?;
        Ok(spec)
    }

    fn finish(&self) -> Result<()> {
        if self.i == self.s.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input", "end of descriptor"))
        }
    }
}

pub fn parse_word_spec(text: &str) -> Result<WordSpec> {
    let mut p = Parser { s: text, i: 0 };
    let spec = p.word()?;
    p.finish()?;
    Ok(spec)
}

pub fn parse_gen_spec(text: &str) -> Result<GenSpec> {
    let mut p = Parser { s: text, i: 0 };
    let spec = p.gen()?;
    p.finish()?;
    Ok(spec)
}

impl FromStr for WordSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_word_spec(s)
    }
}

impl FromStr for GenSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_gen_spec(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> String {
        let mut w = parse_word_spec(s).unwrap().build().unwrap();
        letters_to_string(&w.prefix(16))
    }

    #[test]
    fn aliases() {
        assert_eq!(
            parse_word_spec("fib").unwrap(),
            parse_word_spec("morphism:0->01,1->0").unwrap()
        );
        assert_eq!(
            parse_word_spec("fib").unwrap(),
            parse_word_spec("morphic:0->01,1->0:0").unwrap()
        );
        assert_eq!(
            parse_word_spec("fib2").unwrap(),
            parse_word_spec("interleave:fib").unwrap()
        );
        assert_eq!(
            parse_word_spec("morphism:0->01,1->0").unwrap().to_string(),
            "fib"
        );
    }

    #[test]
    fn word_streams() {
        assert_eq!(word("fib"), "0100101001001010");
        assert_eq!(word("fib2"), "0212020212021202");
        assert_eq!(word("trib"), "0102010010201010");
        assert_eq!(word("tm"), "0110100110010110");
        assert_eq!(word("cycle:012"), "0120120120120120");
        assert_eq!(word("ar:cycle:01"), word("fib"));
        assert_eq!(word("ar:cycle:012"), word("trib"));
        assert_eq!(word("merge:010:trib")[..7], *"0100010");
        assert_eq!(word("rot:(3-sqrt(5))/2:(3-sqrt(5))/2"), word("fib"));
        assert_eq!(word("morphism:0->1,1->10:1"), "1011010110110101");
    }

    #[test]
    fn shuffle_spec() {
        let g = parse_gen_spec("shuffle:trib:l64_28,l64_32,l64_39").unwrap();
        let GenSpec::Shuffle { steering, sources } = &g else {
            panic!("not a shuffle")
        };
        assert_eq!(*steering, WordSpec::tribonacci());
        assert_eq!(sources.len(), 3);
        assert_eq!(g.to_string(), "shuffle:trib:l64_28,l64_32,l64_39");
        let g = parse_gen_spec(
            "shuffle:morphism:0->01,1->0:lcg:m=2^5,a=5,c=1,seed=3,lcg:m=32,a=13,c=3",
        )
        .unwrap();
        let GenSpec::Shuffle { sources, .. } = &g else {
            panic!()
        };
        assert_eq!(
            sources[0],
            GenSpec::Lcg {
                m: 32,
                a: 5,
                c: 1,
                seed: Some(3)
            }
        );
        assert_eq!(parse_gen_spec(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn gen_numbers() {
        let g = parse_gen_spec("lcg:m=2^47-115,a=71971110957370,c=0").unwrap();
        assert_eq!(
            g,
            GenSpec::Lcg {
                m: (1 << 47) - 115,
                a: 71971110957370,
                c: 0,
                seed: None
            }
        );
        let mut r = parse_gen_spec("randu:seed=1").unwrap().build(7).unwrap();
        assert_eq!(r.next_u32(), 65539);
        assert!(parse_gen_spec("lcg:m=2^64,a=2^64,c=1").is_err());
        assert!(parse_gen_spec("lcg:m=2^65,a=3,c=1").is_err());
    }

    fn parse_error(r: Result<impl fmt::Debug>) -> (usize, String) {
        match r {
            Err(Error::Parse {
                position, expected, ..
            }) => (position, expected),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics() {
        assert_eq!(parse_error(parse_word_spec("fob")).0, 0);
        assert_eq!(parse_error(parse_word_spec("morphism:0->01,1-0")).0, 14);
        assert_eq!(parse_error(parse_word_spec("fib:")).0, 3);
        assert_eq!(parse_error(parse_word_spec("merge:01:trib")).0, 0);
        assert_eq!(parse_error(parse_word_spec("merge:22:fib")).0, 0);
        assert_eq!(parse_error(parse_word_spec("morphism:0->1,1->0")).0, 0);
        assert_eq!(parse_error(parse_word_spec("rot:1/3:0")).0, 0);
        assert_eq!(parse_error(parse_word_spec("ar:cycle:0")).0, 0);
        assert_eq!(parse_error(parse_gen_spec("lcg:m=16,b=3")).0, 9);
        assert_eq!(parse_error(parse_gen_spec("lcg:m=16,a=3")).0, 0);
        assert_eq!(
            parse_error(parse_gen_spec("shuffle:trib:l64_28,l64_32")).0,
            0
        );
        assert_eq!(parse_error(parse_gen_spec("shuffle:fib:randu,l64_28")).0, 0);
        assert_eq!(
            parse_error(parse_gen_spec("shuffle:fib:l64_28,shuffle:fib:l64_28")).0,
            19
        );
    }

    #[test]
    fn canonical_round_trips() {
        for s in [
            "fib",
            "fib2",
            "trib",
            "tm",
            "cycle:0110",
            "morphism:0->02,1->0,2->1:0",
            "ar:cycle:012",
            "ar:morphism:0->01,1->2,2->0:0",
            "rot:(3-1*sqrt(5))/2:(3-1*sqrt(5))/2:left",
            "rot:(-1+1*sqrt(2)):1/3:right",
            "merge:010:trib",
            "interleave:tm",
        ] {
            let w = parse_word_spec(s).unwrap();
            assert_eq!(w.to_string(), s);
            assert_eq!(parse_word_spec(&w.to_string()).unwrap(), w);
        }
    }
}
