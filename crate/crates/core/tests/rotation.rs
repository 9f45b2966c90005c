use aperiodic::morphic::{FixedPointStream, Morphism};
use aperiodic::rotation::{Convention, QuadraticIrrational, RotationCoding, RotationStream};
use aperiodic::{Letter, RandomAccess, WordStream};
use num_bigint::BigUint;
use proptest::prelude::*;

fn qi(s: &str) -> QuadraticIrrational {
    s.parse().unwrap()
}

#[test]
fn fibonacci_rotation_matches_morphism() {
    let mut rot = RotationStream::new(RotationCoding::fibonacci());
    let mut fib = FixedPointStream::with_default_cap(Morphism::fibonacci(), 0).unwrap();
    assert_eq!(rot.prefix(1_000_000), fib.prefix(1_000_000));
}

#[test]
fn letter_frequency_is_alpha() {
    for (alpha, rho) in [
        ("sqrt(2)-1", "0"),
        ("(5-sqrt(5))/10", "1/3"),
        ("(3-sqrt(5))/2", "(3-sqrt(5))/2"),
    ] {
        let c = RotationCoding::new(qi(alpha), qi(rho), Convention::Left).unwrap();
        let n = 200_000;
        let ones = RotationStream::new(c.clone())
            .prefix(n)
            .iter()
            .filter(|&&a| a == 1)
            .count();
        let freq = ones as f64 / n as f64;
        assert!((freq - c.alpha().to_f64()).abs() < 1e-3, "{alpha}: {freq}");
    }
}

#[test]
fn codings_are_balanced() {
    let c = RotationCoding::new(qi("sqrt(3)-1"), qi("1/7"), Convention::Right).unwrap();
    let w = RotationStream::new(c).prefix(20_000);
    let mut prefix = vec![0usize];
    for &a in &w {
        prefix.push(prefix.last().unwrap() + usize::from(a));
    }
    for n in 1..50 {
        let weights = (0..=w.len() - n).map(|i| prefix[i + n] - prefix[i]);
        let (lo, hi) = weights.fold((usize::MAX, 0), |(lo, hi), x| (lo.min(x), hi.max(x)));
        assert!(hi - lo <= 1, "length {n}: {lo}..{hi}");
    }
}

#[test]
fn conventions_agree_off_the_boundary() {
    let left = RotationCoding::new(qi("sqrt(2)-1"), qi("1/5"), Convention::Left).unwrap();
    let right = RotationCoding::new(qi("sqrt(2)-1"), qi("1/5"), Convention::Right).unwrap();
    assert_eq!(
        RotationStream::new(left).prefix(10_000),
        RotationStream::new(right).prefix(10_000)
    );
}

fn float_letter(alpha: f64, rho: f64, n: u64) -> Option<Letter> {
    let x = (rho + n as f64 * alpha).fract();
    let edge = 1.0 - alpha;
    // too close to a boundary to trust the float
    if (x - edge).abs() < 1e-9 || !(1e-9..=1.0 - 1e-9).contains(&x) {
        return None;
    }
    Some(u8::from(x >= edge))
}

proptest! {
    #[test]
    fn exact_letters_agree_with_floats(num in 1i64..40, rad in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10]), n in 0u64..100_000) {
        let alpha = QuadraticIrrational::new(0, 1, 1, rad).unwrap().fract();
        let rho = QuadraticIrrational::rational(num, 41).unwrap();
        let c = RotationCoding::new(alpha.clone(), rho.clone(), Convention::Left).unwrap();
        if let Some(expected) = float_letter(alpha.to_f64(), rho.to_f64(), n) {
            prop_assert_eq!(c.letter(&BigUint::from(n)), expected);
        }
    }

    #[test]
    fn seek_matches_streaming(positions in prop::collection::vec(0u64..20_000, 1..10)) {
        let c = RotationCoding::new(qi("(sqrt(7)-1)/3"), qi("sqrt(7)/5"), Convention::Left).unwrap();
        let reference = RotationStream::new(c.clone()).prefix(20_001);
        let mut s = RotationStream::new(c);
        for p in positions {
            prop_assert_eq!(s.letter_at(&BigUint::from(p)).unwrap(), reference[p as usize]);
            prop_assert_eq!(s.next_letter(), reference[p as usize + 1]);
        }
    }
}

#[test]
fn far_positions_use_exact_arithmetic() {
    let c = RotationCoding::fibonacci();
    let mut s = RotationStream::new(c.clone());
    let far = BigUint::from(10u32).pow(30);
    let a = s.letter_at(&far).unwrap();
    assert_eq!(a, c.letter(&far));
    let next: Vec<Letter> = s.prefix(100);
    let direct: Vec<Letter> = (1..=100u32).map(|k| c.letter(&(&far + k))).collect();
    assert_eq!(next, direct);
}
