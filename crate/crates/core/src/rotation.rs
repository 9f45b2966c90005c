//! Sturmian words as codings of an irrational rotation, decided exactly.
//!
//! Angles and intercepts are quadratic irrationals `(p + q√D)/r`. Every
//! interval test reduces to the sign of `A + B√D` for integers `A, B`, which
//! is decided by comparing `A²` with `B²D`; no floating point is involved.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stream::{RandomAccess, WordStream};
use crate::words::Letter;

/// Sign of `a + b√d` for a positive non-square `d` (or any `d` when `b = 0`).
fn sign_big(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    match (sa, sb) {
        (_, Sign::NoSign) => a.cmp(&BigInt::zero()),
        (Sign::NoSign, _) => b.cmp(&BigInt::zero()),
        (Sign::Plus, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus) => Ordering::Less,
        _ => {
            let a2 = a * a;
            let b2d = b * b * BigInt::from(d);
            // a and b have opposite signs; the larger magnitude wins
            let mag = a2.cmp(&b2d);
            if sa == Sign::Plus {
                mag
            } else {
                mag.reverse()
            }
        }
    }
}

/// Same as [`sign_big`] on machine integers; `None` on overflow.
#[inline]
fn sign_small(a: i128, b: i128, d: i128) -> Option<Ordering> {
    if b == 0 {
        return Some(a.cmp(&0));
    }
    if a == 0 {
        return Some(b.cmp(&0));
    }
    if (a > 0) == (b > 0) {
        return Some(a.cmp(&0));
    }
    let a2 = a.checked_mul(a)?;
    let b2d = b.checked_mul(b)?.checked_mul(d)?;
    let mag = a2.cmp(&b2d);
    Some(if a > 0 { mag } else { mag.reverse() })
}

fn square_free_part(d: u64) -> (u64, u64) {
    // d = s^2 * f with f square-free
    let mut f = d;
    let mut s = 1u64;
    let mut k = 2u64;
    while k.saturating_mul(k) <= f {
        while f.is_multiple_of(k * k) {
            f /= k * k;
            s *= k;
        }
        k += 1;
    }
    (s, f)
}

/// An exact real `(p + q√D)/r` with `r > 0` and `D` square-free.
///
/// Rationals have `q = 0` and are stored with `D = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: u64,
}

impl QuadraticIrrational {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        d: u64,
    ) -> Result<Self> {
        let (p, q, r) = (p.into(), q.into(), r.into());
        if r.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Ok(Self::canonical(p, q, r, d))
    }

    pub fn rational(p: impl Into<BigInt>, r: impl Into<BigInt>) -> Result<Self> {
        Self::new(p, 0, r, 1)
    }

    pub fn integer(p: impl Into<BigInt>) -> Self {
        Self::canonical(p.into(), BigInt::zero(), BigInt::one(), 1)
    }

    fn canonical(mut p: BigInt, mut q: BigInt, mut r: BigInt, d: u64) -> Self {
        let (s, f) = if d == 0 { (0, 1) } else { square_free_part(d) };
        q *= BigInt::from(s);
        let mut d = f;
        if d == 1 {
            p += &q;
            q = BigInt::zero();
        }
        if q.is_zero() {
            d = 1;
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadraticIrrational { p, q, r, d }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    /// The square-free radicand (1 for rationals).
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    fn field_with(&self, other: &Self) -> Result<u64> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(Error::UnsupportedField(self.d, other.d)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        Ok(Self::canonical(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadraticIrrational {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::canonical(&self.p * k, &self.q * k, self.r.clone(), self.d)
    }

    pub fn signum(&self) -> Ordering {
        sign_big(&self.p, &self.q, self.d)
    }

    /// Exact comparison.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        let d = self.field_with(other)?;
        let a = &self.p * &other.r - &other.p * &self.r;
        let b = &self.q * &other.r - &other.q * &self.r;
        Ok(sign_big(&a, &b, d))
    }

    /// `⌊x⌋`.
    pub fn floor(&self) -> BigInt {
        // ⌊N/r⌋ = ⌊⌊N⌋/r⌋ for integer r > 0, with N = p + q√D
        let root = (&self.q * &self.q * BigInt::from(self.d)).sqrt();
        let floor_q_root = match self.q.sign() {
            Sign::Minus => -root - 1,
            _ => root,
        };
        (&self.p + floor_q_root).div_floor(&self.r)
    }

    /// `{x} = x - ⌊x⌋`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let f = self.floor();
        Self::canonical(
            &self.p - f * &self.r,
            self.q.clone(),
            self.r.clone(),
            self.d,
        )
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        (p + q * (self.d as f64).sqrt()) / r
    }
}

/// Exact ordering of two quadratic irrationals.
pub fn frac_compare(x: &QuadraticIrrational, y: &QuadraticIrrational) -> Result<Ordering> {
    x.compare(y)
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let op = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))", self.p, op, self.q.abs(), self.d)?;
        if !self.r.is_one() {
            write!(f, "/{}", self.r)?;
        }
        Ok(())
    }
}

impl Serialize for QuadraticIrrational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct QiParser<'a> {
    s: &'a [u8],
    i: usize,
    offset: usize,
}

impl QiParser<'_> {
    fn err(&self, message: &str, expected: &str) -> Error {
        Error::Parse {
            position: self.offset + self.i,
            message: message.into(),
            expected: expected.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek() == Some(b' ') {
            self.i += 1;
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a number", "decimal digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.i]).expect("ascii");
        Ok(text.parse().expect("digits"))
    }

    fn sqrt(&mut self) -> Result<u64> {
        if !self.s[self.i..].starts_with(b"sqrt(") {
            return Err(self.err("expected sqrt", "'sqrt('"));
        }
        self.i += 5;
        let d = self.integer()?;
        if !self.eat(b')') {
            return Err(self.err("unclosed sqrt", "')'"));
        }
        d.to_u64()
            .ok_or_else(|| self.err("radicand too large", "a 64-bit radicand"))
    }

    // sum of terms `[±] int`, `[±] [int*] sqrt(D)`
    fn linear(&mut self) -> Result<(BigInt, BigInt, Option<u64>)> {
        let mut p = BigInt::zero();
        let mut q = BigInt::zero();
        let mut d: Option<u64> = None;
        let mut first = true;
        loop {
            self.skip_ws();
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                break;
            };
            first = false;
            self.skip_ws();
            let (coef, is_sqrt) = if self.peek() == Some(b's') {
                (BigInt::one(), true)
            } else {
                let n = self.integer()?;
                if self.eat(b'*') {
                    (n, true)
                } else {
                    (n, false)
                }
            };
            let coef = if negative { -coef } else { coef };
            if is_sqrt {
                let pos = self.i;
                let rad = self.sqrt()?;
                if d.is_some_and(|old| old != rad) {
                    self.i = pos;
                    return Err(self.err("mixed radicands", "a single sqrt(D) per number"));
                }
                d = Some(rad);
                q += coef;
            } else {
                p += coef;
            }
        }
        Ok((p, q, d))
    }

    fn number(&mut self) -> Result<QuadraticIrrational> {
        self.skip_ws();
        let (p, q, d) = if self.eat(b'(') {
            let v = self.linear()?;
            self.skip_ws();
            if !self.eat(b')') {
                return Err(self.err("unclosed parenthesis", "')'"));
            }
            v
        } else {
            self.linear()?
        };
        self.skip_ws();
        let r = if self.eat(b'/') {
            self.skip_ws();
            let r = self.integer()?;
            if r.is_zero() {
                return Err(self.err("zero denominator", "a positive denominator"));
            }
            r
        } else {
            BigInt::one()
        };
        Ok(QuadraticIrrational::canonical(p, q, r, d.unwrap_or(1)))
    }
}

/// Parses a quadratic irrational at the start of `s`; returns it and the
/// number of bytes consumed. `offset` shifts reported error positions.
pub(crate) fn parse_quadratic(s: &str, offset: usize) -> Result<(QuadraticIrrational, usize)> {
    let mut parser = QiParser {
        s: s.as_bytes(),
        i: 0,
        offset,
    };
    let x = parser.number()?;
    Ok((x, parser.i))
}

impl FromStr for QuadraticIrrational {
    type Err = Error;

    /// Accepts forms like `(3-sqrt(5))/2`, `(1+1*sqrt(5))/2`, `618034/1000000`.
    fn from_str(s: &str) -> Result<Self> {
        let (x, used) = parse_quadratic(s, 0)?;
        if used != s.len() {
            return Err(Error::Parse {
                position: used,
                message: "trailing input".into(),
                expected: "end of number".into(),
            });
        }
        Ok(x)
    }
}

/// Which endpoints the two coding intervals include.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `I_0 = [0, 1-α)`, `I_1 = [1-α, 1)`.
    #[default]
    Left,
    /// `I'_0 = (0, 1-α]`, `I'_1 = (1-α, 1]`.
    Right,
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Convention::Left),
            "right" => Ok(Convention::Right),
            _ => Err(Error::InvalidParameter(format!(
                "unknown convention {s:?} (left|right)"
            ))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Left => "left",
            Convention::Right => "right",
        })
    }
}

/// The coding of the orbit of `ρ` under rotation by `α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationCoding {
    alpha: QuadraticIrrational,
    rho: QuadraticIrrational,
    convention: Convention,
}

impl RotationCoding {
    pub fn new(
        alpha: QuadraticIrrational,
        rho: QuadraticIrrational,
        convention: Convention,
    ) -> Result<Self> {
        if alpha.is_rational() {
            return Err(Error::InvalidRotation("angle must be irrational".into()));
        }
        let zero = QuadraticIrrational::integer(0);
        let one = QuadraticIrrational::integer(1);
        if alpha.compare(&zero)? != Ordering::Greater || alpha.compare(&one)? != Ordering::Less {
            return Err(Error::InvalidRotation("angle must lie in (0, 1)".into()));
        }
        if rho.compare(&zero)? == Ordering::Less || rho.compare(&one)? != Ordering::Less {
            return Err(Error::InvalidRotation(
                "intercept must lie in [0, 1)".into(),
            ));
        }
        alpha.field_with(&rho)?;
        Ok(RotationCoding {
            alpha,
            rho,
            convention,
        })
    }

    /// `α = ρ = (3-√5)/2`, whose coding is the Fibonacci word.
    pub fn fibonacci() -> Self {
        let alpha = QuadraticIrrational::new(3, -1, 2, 5).expect("valid");
        RotationCoding::new(alpha.clone(), alpha, Convention::Left).expect("valid")
    }

    pub fn alpha(&self) -> &QuadraticIrrational {
        &self.alpha
    }
    pub fn rho(&self) -> &QuadraticIrrational {
        &self.rho
    }
    pub fn convention(&self) -> Convention {
        self.convention
    }

    fn letter_of(&self, x: &QuadraticIrrational) -> Letter {
        // x in [0,1); boundary 1 - α
        let boundary = QuadraticIrrational::integer(1)
            .checked_sub(&self.alpha)
            .expect("same field");
        let cmp = x.compare(&boundary).expect("same field");
        match self.convention {
            Convention::Left => Letter::from(cmp != Ordering::Less),
            Convention::Right => {
                let zero = x.signum() == Ordering::Equal;
                Letter::from(zero || cmp == Ordering::Greater)
            }
        }
    }

    /// `{ρ + nα}`.
    pub fn orbit_point(&self, n: &BigUint) -> QuadraticIrrational {
        let n = BigInt::from(n.clone());
        self.rho
            .checked_add(&self.alpha.mul_int(&n))
            .expect("same field")
            .fract()
    }

    /// The `n`-th letter, computed directly.
    pub fn letter(&self, n: &BigUint) -> Letter {
        self.letter_of(&self.orbit_point(n))
    }
}

/// `s_{α,ρ}(n)`.
pub fn rotation_letter(c: &RotationCoding, n: &BigUint) -> Letter {
    c.letter(n)
}

// x = (p + q√D)/r with the stream's fixed denominator r
#[derive(Clone, Debug)]
enum OrbitState {
    Small { p: i128, q: i128 },
    Big { p: BigInt, q: BigInt },
}

#[derive(Clone, Debug)]
struct Constants<T> {
    // α = (pa + qa√D)/r
    pa: T,
    qa: T,
    r: T,
    d: T,
}

/// Streaming rotation coding; the orbit point is advanced by exact addition.
#[derive(Clone, Debug)]
pub struct RotationStream {
    coding: RotationCoding,
    big: Constants<BigInt>,
    small: Option<Constants<i128>>,
    state: OrbitState,
}

impl RotationStream {
    pub fn new(coding: RotationCoding) -> Self {
        let a = coding.alpha();
        let r = a.r().lcm(coding.rho().r());
        let scale = &r / a.r();
        let big = Constants {
            pa: a.p() * &scale,
            qa: a.q() * &scale,
            r,
            d: BigInt::from(a.radicand()),
        };
        let small = (|| {
            Some(Constants {
                pa: big.pa.to_i128()?,
                qa: big.qa.to_i128()?,
                r: big.r.to_i128()?,
                d: big.d.to_i128()?,
            })
        })();
        let mut s = RotationStream {
            coding,
            big,
            small,
            state: OrbitState::Small { p: 0, q: 0 },
        };
        s.set_point(&s.coding.rho().clone());
        s
    }

    pub fn coding(&self) -> &RotationCoding {
        &self.coding
    }

    fn set_point(&mut self, x: &QuadraticIrrational) {
        // rescale x to the stream denominator
        let scale = &self.big.r / x.r();
        let p = x.p() * &scale;
        let q = x.q() * &scale;
        self.state = match (&self.small, p.to_i128(), q.to_i128()) {
            (Some(_), Some(p), Some(q)) => OrbitState::Small { p, q },
            _ => OrbitState::Big { p, q },
        };
    }

    fn promote(&mut self) {
        if let OrbitState::Small { p, q } = self.state {
            self.state = OrbitState::Big {
                p: BigInt::from(p),
                q: BigInt::from(q),
            };
        }
    }

    // letter of the current point, then step the orbit; None on overflow
    #[inline]
    fn step_small(&mut self) -> Option<Letter> {
        let c = self.small.as_ref()?;
        let OrbitState::Small { p, q } = &mut self.state else {
            return None;
        };
        // x >= 1 - α  <=>  (p + pa - r) + (q + qa)√D >= 0
        let a = p.checked_add(c.pa)?.checked_sub(c.r)?;
        let b = q.checked_add(c.qa)?;
        let cmp = sign_small(a, b, c.d)?;
        let letter = match self.coding.convention {
            Convention::Left => Letter::from(cmp != Ordering::Less),
            Convention::Right => Letter::from((*p == 0 && *q == 0) || cmp == Ordering::Greater),
        };
        // advance: x + α, minus 1 when it reaches 1
        let np = p.checked_add(c.pa)?;
        let nq = b;
        let wrap = sign_small(np.checked_sub(c.r)?, nq, c.d)? != Ordering::Less;
        *p = if wrap { np - c.r } else { np };
        *q = nq;
        Some(letter)
    }

    fn step_big(&mut self) -> Letter {
        self.promote();
        let c = &self.big;
        let OrbitState::Big { p, q } = &mut self.state else {
            unreachable!()
        };
        let a = &*p + &c.pa - &c.r;
        let b = &*q + &c.qa;
        let d = c.d.to_u64().expect("radicand fits u64");
        let cmp = sign_big(&a, &b, d);
        let letter = match self.coding.convention {
            Convention::Left => Letter::from(cmp != Ordering::Less),
            Convention::Right => {
                Letter::from((p.is_zero() && q.is_zero()) || cmp == Ordering::Greater)
            }
        };
        *p += &c.pa;
        *q += &c.qa;
        if sign_big(&(&*p - &c.r), q, d) != Ordering::Less {
            *p -= &c.r;
        }
        letter
    }
}

impl WordStream for RotationStream {
    fn alphabet_size(&self) -> usize {
        2
    }

    fn next_letter(&mut self) -> Letter {
        if let OrbitState::Small { .. } = self.state {
            let saved = self.state.clone();
            if let Some(letter) = self.step_small() {
                return letter;
            }
            self.state = saved;
        }
        self.step_big()
    }

    fn describe(&self) -> String {
        format!(
            "rot:{}:{}:{}",
            self.coding.alpha, self.coding.rho, self.coding.convention
        )
    }
}

impl RandomAccess for RotationStream {
    fn seek(&mut self, pos: &BigUint) -> Result<()> {
        let x = self.coding.orbit_point(pos);
        self.set_point(&x);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::letters_to_string;

    fn qi(s: &str) -> QuadraticIrrational {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        let tau = qi("(1+sqrt(5))/2");
        assert_eq!(frac_compare(&tau, &qi("3/2")).unwrap(), Ordering::Greater);
        assert_eq!(frac_compare(&tau, &tau).unwrap(), Ordering::Equal);
        let phi = qi("(-1+sqrt(5))/2");
        assert_eq!(
            frac_compare(&phi, &qi("618033/1000000")).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            frac_compare(&phi, &qi("618034/1000000")).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            frac_compare(&qi("1-sqrt(2)"), &qi("-4142136/10000000")).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            frac_compare(&qi("sqrt(2)"), &qi("sqrt(3)")),
            Err(Error::UnsupportedField(2, 3))
        );
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(qi("(2+2*sqrt(5))/4"), qi("(1+sqrt(5))/2"));
        assert_eq!(qi("sqrt(8)"), qi("2*sqrt(2)"));
        assert_eq!(qi("sqrt(9)"), QuadraticIrrational::integer(3));
        assert_eq!(qi("(1+sqrt(5))/2").to_string(), "(1+1*sqrt(5))/2");
        assert_eq!(
            QuadraticIrrational::new(1, 1, -2, 5).unwrap(),
            qi("(-1-sqrt(5))/2")
        );
        assert_eq!(qi("(3-sqrt(5))/2").to_string(), "(3-1*sqrt(5))/2");
        assert_eq!(qi("-7/14").to_string(), "-1/2");
        assert!("(1+sqrt(5)".parse::<QuadraticIrrational>().is_err());
        assert!("1/0".parse::<QuadraticIrrational>().is_err());
        assert!("sqrt(2)+sqrt(3)".parse::<QuadraticIrrational>().is_err());
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(qi("(1+sqrt(5))/2").floor(), BigInt::from(1));
        assert_eq!(qi("(1-sqrt(5))/2").floor(), BigInt::from(-1));
        assert_eq!(qi("-7/2").floor(), BigInt::from(-4));
        assert_eq!(qi("(1+sqrt(5))/2").fract(), qi("(-1+sqrt(5))/2"));
        let x = qi("(-31+17*sqrt(7))/3");
        let f = x.fract();
        assert_eq!(
            f.compare(&QuadraticIrrational::integer(0)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            f.compare(&QuadraticIrrational::integer(1)).unwrap(),
            Ordering::Less
        );
        assert!((x.to_f64().fract() - f.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn fibonacci_parameterization() {
        let c = RotationCoding::fibonacci();
        let direct: String = (0..32u32)
            .map(|n| char::from(b'0' + c.letter(&BigUint::from(n))))
            .collect();
        assert_eq!(direct, "01001010010010100101001001010010");
        let mut s = RotationStream::new(c);
        assert_eq!(letters_to_string(&s.prefix(32)), direct);
    }

    #[test]
    fn zero_intercept_starts_with_zero() {
        let c = RotationCoding::new(
            qi("sqrt(2)-1"),
            QuadraticIrrational::integer(0),
            Convention::Left,
        )
        .unwrap();
        assert_eq!(c.letter(&BigUint::from(0u32)), 0);
    }

    #[test]
    fn boundary_point_conventions() {
        // ρ = 1 - α lies exactly on the boundary at n = 0
        let alpha = qi("(3-sqrt(5))/2");
        let rho = QuadraticIrrational::integer(1).checked_sub(&alpha).unwrap();
        let left = RotationCoding::new(alpha.clone(), rho.clone(), Convention::Left).unwrap();
        let right = RotationCoding::new(alpha, rho, Convention::Right).unwrap();
        assert_eq!(left.letter(&BigUint::from(0u32)), 1);
        assert_eq!(right.letter(&BigUint::from(0u32)), 0);
        assert_eq!(RotationStream::new(left).next_letter(), 1);
        assert_eq!(RotationStream::new(right).next_letter(), 0);
    }

    #[test]
    fn invalid_codings() {
        let zero = QuadraticIrrational::integer(0);
        assert!(RotationCoding::new(qi("1/3"), zero.clone(), Convention::Left).is_err());
        assert!(RotationCoding::new(qi("(1+sqrt(5))/2"), zero.clone(), Convention::Left).is_err());
        assert!(RotationCoding::new(qi("sqrt(2)-1"), qi("sqrt(3)-1"), Convention::Left).is_err());
        assert!(RotationCoding::new(
            qi("sqrt(2)-1"),
            QuadraticIrrational::integer(1),
            Convention::Left
        )
        .is_err());
    }

    #[test]
    fn stream_matches_direct_evaluation() {
        for (alpha, rho, conv) in [
            ("(3-sqrt(5))/2", "(3-sqrt(5))/2", Convention::Left),
            ("sqrt(2)-1", "1/3", Convention::Right),
            ("(5-sqrt(7))/4", "(-1+sqrt(7))/3", Convention::Left),
        ] {
            let c = RotationCoding::new(qi(alpha), qi(rho), conv).unwrap();
            let mut s = RotationStream::new(c.clone());
            let streamed = s.prefix(2000);
            for (n, &a) in streamed.iter().enumerate().step_by(7) {
                assert_eq!(a, c.letter(&BigUint::from(n)), "{alpha} n={n}");
            }
            assert_eq!(
                s.letter_at(&BigUint::from(1234u32)).unwrap(),
                streamed[1234]
            );
            assert_eq!(s.next_letter(), streamed[1235]);
        }
    }

    #[test]
    fn big_path_agrees_with_small_path() {
        let c = RotationCoding::fibonacci();
        let mut small = RotationStream::new(c.clone());
        let mut big = RotationStream::new(c);
        big.promote();
        for _ in 0..5000 {
            assert_eq!(small.next_letter(), big.next_letter());
        }
    }
}
