use aperiodic::morphic::{FixedPointStream, Morphism};
use aperiodic::words::{factor_complexity, occurrences, occurrences_in, right_special_factors};
use aperiodic::{Letter, PrefixBuffer, WordStream};
use proptest::prelude::*;

fn naive_occurrences(w: &[Letter], text: &[Letter]) -> Vec<usize> {
    if w.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - w.len())
        .filter(|&i| &text[i..i + w.len()] == w)
        .collect()
}

proptest! {
    #[test]
    fn occurrences_match_naive_scan(
        w in prop::collection::vec(0u8..2, 1..6),
        text in prop::collection::vec(0u8..2, 0..300),
    ) {
        prop_assert_eq!(occurrences_in(&w, &text), naive_occurrences(&w, &text));
    }

    #[test]
    fn parikh_prefix_counts(text in prop::collection::vec(0u8..3, 1..5000), cut in any::<prop::sample::Index>()) {
        let i = cut.index(text.len() + 1);
        let p = PrefixBuffer::from_letters(text.clone(), 3).unwrap();
        let expected: Vec<u64> = (0..3u8).map(|a| text[..i].iter().filter(|&&b| b == a).count() as u64).collect();
        prop_assert_eq!(p.parikh_prefix(i).0, expected);
    }
}

#[test]
fn fibonacci_is_sturmian() {
    let mut s = FixedPointStream::with_default_cap(Morphism::fibonacci(), 0).unwrap();
    let p = PrefixBuffer::from_stream(&mut s, 100_000).unwrap();
    for n in 0..60 {
        assert_eq!(factor_complexity(&p, n).unwrap(), n + 1);
        if n > 0 {
            assert_eq!(right_special_factors(&p, n).unwrap().len(), 1);
        }
    }
}

#[test]
fn fibonacci_occurrences_in_buffer() {
    let mut s = FixedPointStream::with_default_cap(Morphism::fibonacci(), 0).unwrap();
    let p = PrefixBuffer::from_stream(&mut s, 50_000).unwrap();
    for w in [&[0u8][..], &[1], &[0, 0], &[1, 0, 1], &[0, 1, 0, 0, 1]] {
        assert_eq!(occurrences(w, &p), naive_occurrences(w, p.letters()));
    }
    assert!(occurrences(&[1, 1], &p).is_empty());
}

#[test]
fn thue_morse_is_overlap_free_on_a_prefix() {
    let mut s = FixedPointStream::with_default_cap(Morphism::thue_morse(), 0).unwrap();
    let t = s.prefix(4096);
    for i in 0..t.len() {
        for p in 1..=(t.len() - i - 1) / 2 {
            let overlap = (0..=p).all(|k| t[i + k] == t[i + p + k]);
            assert!(!overlap, "overlap at {i} period {p}");
        }
    }
}
