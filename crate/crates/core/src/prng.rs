//! Linear congruential generators, word-steered shuffles of them, and the
//! analyses used to compare the two: hyperplane counting on t-tuples,
//! right-special witnesses, and χ² tests.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::stream::WordStream;
use crate::words::Letter;

/// A source of 32-bit outputs drawn from `[0, output_range())`.
pub trait Prng: Send {
    fn next_u32(&mut self) -> u32;

    /// Size of the output set.
    fn output_range(&self) -> u64;

    /// Skips `n` outputs.
    fn discard(&mut self, n: u64) {
        for _ in 0..n {
            self.next_u32();
        }
    }

    fn describe(&self) -> String;
}

impl<P: Prng + ?Sized> Prng for Box<P> {
    fn next_u32(&mut self) -> u32 {
        (**self).next_u32()
    }
    fn output_range(&self) -> u64 {
        (**self).output_range()
    }
    fn discard(&mut self, n: u64) {
        (**self).discard(n)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

const TWO_64: u128 = 1 << 64;

/// `Z_{n+1} = (a Z_n + c) mod m` for `2 ≤ m ≤ 2^64`.
///
/// The output is the top 32 bits of the `bitlen(m-1)`-bit state, or the whole
/// state when it has at most 32 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lcg {
    m: u128,
    a: u64,
    c: u64,
    state: u64,
    shift: u32,
    name: Option<&'static str>,
}

/// Name, modulus, multiplier, increment.
pub const NAMED_LCGS: [(&str, u128, u64, u64); 8] = [
    ("randu", 1 << 31, 65539, 0),
    ("l47-115", (1 << 47) - 115, 71_971_110_957_370, 0),
    ("l63-25", (1 << 63) - 25, 2_307_085_864, 0),
    ("l59", 1 << 59, 302_875_106_592_253, 0),
    ("l63", 1 << 63, 19_073_486_328_125, 1),
    ("l64_28", TWO_64, 2_862_933_555_777_941_757, 1),
    ("l64_32", TWO_64, 3_202_034_522_624_059_733, 1),
    ("l64_39", TWO_64, 3_935_559_000_370_003_845, 1),
];

fn mulmod(x: u64, y: u64, m: u128) -> u64 {
    ((u128::from(x) * u128::from(y)) % m) as u64
}

impl Lcg {
    pub fn new(m: u128, a: u64, c: u64, seed: u64) -> Result<Self> {
        if !(2..=TWO_64).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "modulus {m} outside [2, 2^64]"
            )));
        }
        for (what, v) in [("multiplier", a), ("increment", c), ("seed", seed)] {
            if u128::from(v) >= m {
                return Err(Error::InvalidParameter(format!(
                    "{what} {v} not below modulus {m}"
                )));
            }
        }
        let bits = 128 - (m - 1).leading_zeros();
        Ok(Lcg {
            m,
            a,
            c,
            state: seed,
            shift: bits.saturating_sub(32),
            name: None,
        })
    }

    /// One of [`NAMED_LCGS`].
    pub fn named(name: &str, seed: u64) -> Result<Self> {
        let key = name.to_ascii_lowercase();
        let &(n, m, a, c) = NAMED_LCGS
            .iter()
            .find(|(n, ..)| *n == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown generator {name:?}")))?;
        let mut g = Lcg::new(m, a, c, seed)?;
        g.name = Some(n);
        Ok(g)
    }

    pub fn randu(seed: u64) -> Self {
        Lcg::named("randu", seed).expect("valid constants")
    }

    pub fn modulus(&self) -> u128 {
        self.m
    }
    pub fn multiplier(&self) -> u64 {
        self.a
    }
    pub fn increment(&self) -> u64 {
        self.c
    }
    pub fn state(&self) -> u64 {
        self.state
    }
    pub fn name(&self) -> Option<&'static str> {
        self.name
    }

    #[inline]
    fn next_state_of(&self, z: u64) -> u64 {
        if self.m == TWO_64 {
            self.a.wrapping_mul(z).wrapping_add(self.c)
        } else if self.m.is_power_of_two() {
            let mask = (self.m - 1) as u64;
            self.a.wrapping_mul(z).wrapping_add(self.c) & mask
        } else {
            ((u128::from(self.a) * u128::from(z) + u128::from(self.c)) % self.m) as u64
        }
    }

    /// Advances the state and returns it.
    #[inline]
    pub fn step(&mut self) -> u64 {
        self.state = self.next_state_of(self.state);
        self.state
    }

    /// Jumps `n` steps ahead in `O(log n)` by composing the affine map.
    pub fn jump(&mut self, mut n: u64) {
        let m = self.m;
        // accumulated map x -> acc_a x + acc_c, and the current square
        let (mut acc_a, mut acc_c) = (1u64, 0u64);
        let (mut a, mut c) = (self.a, self.c);
        while n > 0 {
            if n & 1 == 1 {
                acc_a = mulmod(acc_a, a, m);
                acc_c = ((u128::from(acc_c) * u128::from(a) + u128::from(c)) % m) as u64;
            }
            c = ((u128::from(c) * u128::from(a) + u128::from(c)) % m) as u64;
            a = mulmod(a, a, m);
            n >>= 1;
        }
        self.state = ((u128::from(acc_a) * u128::from(self.state) + u128::from(acc_c)) % m) as u64;
    }
}

impl Prng for Lcg {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.step() >> self.shift) as u32
    }

    fn output_range(&self) -> u64 {
        if self.shift == 0 {
            self.m as u64
        } else {
            1 << 32
        }
    }

    fn discard(&mut self, n: u64) {
        self.jump(n);
    }

    fn describe(&self) -> String {
        match self.name {
            Some(n) => n.to_string(),
            None => format!("lcg:m={},a={},c={}", self.m, self.a, self.c),
        }
    }
}

/// Keeps `bits` bits of each output starting at bit `shift`.
#[derive(Clone, Debug)]
pub struct BitFilter<P> {
    inner: P,
    shift: u32,
    bits: u32,
}

impl<P: Prng> BitFilter<P> {
    pub fn new(inner: P, shift: u32, bits: u32) -> Result<Self> {
        if bits == 0 || shift + bits > 32 {
            return Err(Error::InvalidParameter(format!(
                "bit window {shift}+{bits} outside 32 bits"
            )));
        }
        Ok(BitFilter { inner, shift, bits })
    }

    /// The least significant output bit.
    pub fn low_bit(inner: P) -> Self {
        BitFilter {
            inner,
            shift: 0,
            bits: 1,
        }
    }
}

impl<P: Prng> Prng for BitFilter<P> {
    fn next_u32(&mut self) -> u32 {
        let mask = if self.bits == 32 {
            u32::MAX
        } else {
            (1 << self.bits) - 1
        };
        (self.inner.next_u32() >> self.shift) & mask
    }
    fn output_range(&self) -> u64 {
        1 << self.bits
    }
    fn discard(&mut self, n: u64) {
        self.inner.discard(n)
    }
    fn describe(&self) -> String {
        format!(
            "bits({}, {}..{})",
            self.inner.describe(),
            self.shift,
            self.shift + self.bits
        )
    }
}

const STEER_BLOCK: usize = 4096;

/// Output `n` is the next unused output of source `u_n`.
pub struct ShuffledPrng {
    steering: Box<dyn WordStream>,
    sources: Vec<Box<dyn Prng>>,
    consumed: Vec<u64>,
    block: Vec<Letter>,
    block_pos: usize,
}

impl ShuffledPrng {
    pub fn new(steering: Box<dyn WordStream>, sources: Vec<Box<dyn Prng>>) -> Result<Self> {
        let d = steering.alphabet_size();
        if d > sources.len() {
            return Err(Error::AlphabetMismatch {
                letter: (d - 1) as Letter,
                sources: sources.len(),
            });
        }
        let range = sources[0].output_range();
        if let Some(s) = sources.iter().find(|s| s.output_range() != range) {
            return Err(Error::InvalidParameter(format!(
                "sources must share one output set: {} has {} outputs, {} has {}",
                sources[0].describe(),
                range,
                s.describe(),
                s.output_range()
            )));
        }
        Ok(ShuffledPrng {
            steering,
            consumed: vec![0; sources.len()],
            sources,
            block: vec![0; STEER_BLOCK],
            block_pos: STEER_BLOCK,
        })
    }

    /// Outputs drawn from each source so far.
    pub fn consumed(&self) -> &[u64] {
        &self.consumed
    }

    pub fn sources(&self) -> &[Box<dyn Prng>] {
        &self.sources
    }

    #[inline]
    fn next_steering(&mut self) -> Letter {
        if self.block_pos == STEER_BLOCK {
            self.steering.fill(&mut self.block);
            self.block_pos = 0;
        }
        let a = self.block[self.block_pos];
        self.block_pos += 1;
        a
    }
}

impl Prng for ShuffledPrng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        let a = usize::from(self.next_steering());
        self.consumed[a] += 1;
        self.sources[a].next_u32()
    }

    fn output_range(&self) -> u64 {
        self.sources[0].output_range()
    }

    /// Reads `n` steering letters, then advances each source by its count.
    fn discard(&mut self, mut n: u64) {
        let mut counts = vec![0u64; self.sources.len()];
        while n > 0 {
            if self.block_pos == STEER_BLOCK {
                self.steering.fill(&mut self.block);
                self.block_pos = 0;
            }
            let take = (STEER_BLOCK - self.block_pos).min(n.min(STEER_BLOCK as u64) as usize);
            for &a in &self.block[self.block_pos..self.block_pos + take] {
                counts[usize::from(a)] += 1;
            }
            self.block_pos += take;
            n -= take as u64;
        }
        for ((src, used), k) in self.sources.iter_mut().zip(&mut self.consumed).zip(counts) {
            src.discard(k);
            *used += k;
        }
    }

    fn describe(&self) -> String {
        let names: Vec<String> = self.sources.iter().map(|s| s.describe()).collect();
        format!("shuffle:{}:{}", self.steering.describe(), names.join(","))
    }
}

impl fmt::Debug for ShuffledPrng {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShuffledPrng")
            .field("description", &self.describe())
            .field("consumed", &self.consumed)
            .finish()
    }
}

/// Writes `n` outputs as little-endian 32-bit words and flushes.
pub fn stream_export<W: Write>(g: &mut dyn Prng, n: u64, sink: W) -> io::Result<()> {
    let mut out = BufWriter::with_capacity(1 << 16, sink);
    for _ in 0..n {
        out.write_all(&g.next_u32().to_le_bytes())?;
    }
    out.flush()
}

/// Floyd cycle detection on `x -> f(x)` from `x0`: returns the tail length
/// and period, or `None` if no cycle closes within `limit` steps.
pub fn floyd<T: PartialEq + Clone>(x0: T, f: impl Fn(&T) -> T, limit: u64) -> Option<(u64, u64)> {
    let mut tortoise = f(&x0);
    let mut hare = f(&tortoise);
    let mut steps = 1u64;
    while tortoise != hare {
        if steps >= limit {
            return None;
        }
        tortoise = f(&tortoise);
        hare = f(&f(&hare));
        steps += 1;
    }
    let mut mu = 0u64;
    tortoise = x0;
    while tortoise != hare {
        tortoise = f(&tortoise);
        hare = f(&hare);
        mu += 1;
    }
    let mut lambda = 1u64;
    hare = f(&tortoise);
    while tortoise != hare {
        hare = f(&hare);
        lambda += 1;
    }
    Some((mu, lambda))
}

/// Tail length and period of an LCG's state sequence from its current state.
pub fn lcg_cycle(g: &Lcg, limit: u64) -> Option<(u64, u64)> {
    floyd(g.state(), |&z| g.next_state_of(z), limit)
}

/// Smallest `p ≤ max_period` such that the second half of `seq` is
/// `p`-periodic. Only periods repeating at least twice within that half are
/// considered, so `seq` must be at least `4 * max_period` long to rule out
/// every candidate.
pub fn suffix_period<T: PartialEq>(seq: &[T], max_period: usize) -> Option<usize> {
    let start = seq.len() / 2;
    (1..=max_period.min((seq.len() - start) / 2))
        .find(|&p| (start..seq.len() - p).all(|i| seq[i] == seq[i + p]))
}

/// Overlapping t-tuples of consecutive raw outputs.
#[derive(Clone, Debug)]
pub struct LatticeSample {
    t: usize,
    scale: u64,
    values: Vec<i64>,
}

impl LatticeSample {
    /// Draws `tuples + t - 1` outputs.
    pub fn from_prng(g: &mut dyn Prng, t: usize, tuples: usize) -> Result<Self> {
        if t == 0 || tuples == 0 {
            return Err(Error::InvalidParameter(
                "sample needs t ≥ 1 and at least one tuple".into(),
            ));
        }
        let values = (0..tuples + t - 1)
            .map(|_| i64::from(g.next_u32()))
            .collect();
        Ok(LatticeSample {
            t,
            scale: g.output_range(),
            values,
        })
    }

    pub fn from_values(values: Vec<u64>, t: usize, scale: u64) -> Result<Self> {
        if t == 0 || values.len() < t {
            return Err(Error::InvalidParameter(
                "sample shorter than one tuple".into(),
            ));
        }
        if scale == 0 || scale > 1 << 32 || values.iter().any(|&v| v >= scale) {
            return Err(Error::InvalidParameter(
                "values must lie in [0, scale) with scale ≤ 2^32".into(),
            ));
        }
        Ok(LatticeSample {
            t,
            scale,
            values: values.into_iter().map(|v| v as i64).collect(),
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.values.len() + 1 - self.t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tuple(&self, i: usize) -> Vec<u64> {
        self.values[i..i + self.t]
            .iter()
            .map(|&v| v as u64)
            .collect()
    }

    /// Tuple `i` scaled to `[0, 1)^t`.
    pub fn normalized(&self, i: usize) -> Vec<f64> {
        self.values[i..i + self.t]
            .iter()
            .map(|&v| v as f64 / self.scale as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub t: usize,
    pub normal: Vec<i64>,
    /// Distinct classes `⌊n·x / scale⌋` among the sample tuples.
    pub plane_count: u64,
    pub sample_size: u64,
    /// Classes attained by the full lattice `M^t`.
    pub comparison: u64,
    /// All tuples share one residue `n·x mod scale`, so the classes are
    /// parallel hyperplanes containing every sample point.
    pub covering: bool,
}

impl LatticeReport {
    pub fn ratio(&self) -> f64 {
        self.plane_count as f64 / self.comparison as f64
    }

    // exact comparison of plane_count / comparison
    fn ratio_cmp(&self, other: &Self) -> std::cmp::Ordering {
        (u128::from(self.plane_count) * u128::from(other.comparison))
            .cmp(&(u128::from(other.plane_count) * u128::from(self.comparison)))
    }
}

/// Counts hyperplane classes of `sample` for the integer `normal`.
pub fn plane_count(sample: &LatticeSample, normal: &[i64]) -> Result<LatticeReport> {
    let t = sample.t;
    if normal.len() != t {
        return Err(Error::DimensionMismatch {
            expected: t,
            got: normal.len(),
        });
    }
    if normal.iter().all(|&c| c == 0) {
        return Err(Error::InvalidParameter("normal must be nonzero".into()));
    }
    let scale = sample.scale as i64;
    let top = scale - 1;
    let mut lo = 0i64;
    let mut hi = 0i64;
    for &c in normal {
        let term = c
            .checked_mul(top)
            .ok_or(Error::Overflow("normal coefficient"))?;
        if c < 0 {
            lo = lo
                .checked_add(term)
                .ok_or(Error::Overflow("dot product range"))?;
        } else {
            hi = hi
                .checked_add(term)
                .ok_or(Error::Overflow("dot product range"))?;
        }
    }
    let klo = lo.div_euclid(scale);
    let comparison = (hi.div_euclid(scale) - klo + 1) as usize;
    let mut seen = vec![false; comparison];
    let values = &sample.values;
    let n = sample.len();

    let mut residue = None::<i64>;
    let mut covering = true;
    let mut classify = |k: i64, r: i64| {
        seen[(k - klo) as usize] = true;
        match residue {
            None => residue = Some(r),
            Some(r0) if r0 != r => covering = false,
            _ => {}
        }
    };
    if sample.scale.is_power_of_two() {
        let bits = sample.scale.trailing_zeros();
        let mask = scale - 1;
        for i in 0..n {
            let dot: i64 = normal
                .iter()
                .zip(&values[i..i + t])
                .map(|(&c, &v)| c * v)
                .sum();
            classify(dot >> bits, dot & mask);
        }
    } else {
        for i in 0..n {
            let dot: i64 = normal
                .iter()
                .zip(&values[i..i + t])
                .map(|(&c, &v)| c * v)
                .sum();
            classify(dot.div_euclid(scale), dot.rem_euclid(scale));
        }
    }
    Ok(LatticeReport {
        t,
        normal: normal.to_vec(),
        plane_count: seen.iter().filter(|&&s| s).count() as u64,
        sample_size: n as u64,
        comparison: comparison as u64,
        covering,
    })
}

/// Primitive integer vectors in `[-bound, bound]^t` whose first nonzero
/// coordinate is positive, in lexicographic order.
pub fn canonical_normals(t: usize, bound: i64) -> Vec<Vec<i64>> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let side = (2 * bound + 1) as usize;
    let total = side.pow(t as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut v = vec![0i64; t];
        for slot in v.iter_mut().rev() {
            *slot = (c % side) as i64 - bound;
            c /= side;
        }
        let first = v.iter().copied().find(|&x| x != 0);
        if first.is_some_and(|x| x > 0) && v.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeSearch {
    pub t: usize,
    pub bound: i64,
    pub sample_size: u64,
    pub normals_tested: u64,
    pub covering_normals: u64,
    /// Covering normals rank first, then lower class ratio.
    pub best: LatticeReport,
}

/// Runs [`plane_count`] for every canonical normal with coefficients in
/// `[-bound, bound]`.
pub fn lattice_search(
    sample: &LatticeSample,
    bound: i64,
    exec: Execution,
) -> Result<LatticeSearch> {
    if bound < 1 {
        return Err(Error::InvalidParameter(
            "coefficient bound must be at least 1".into(),
        ));
    }
    let normals = canonical_normals(sample.t, bound);
    let reports = exec.map(&normals, |n| plane_count(sample, n));
    let mut best: Option<LatticeReport> = None;
    let mut covering_normals = 0;
    for r in reports {
        let r = r?;
        covering_normals += u64::from(r.covering);
        let better = match &best {
            None => true,
            Some(b) => {
                (r.covering && !b.covering) || (r.covering == b.covering && r.ratio_cmp(b).is_lt())
            }
        };
        if better {
            best = Some(r);
        }
    }
    Ok(LatticeSearch {
        t: sample.t,
        bound,
        sample_size: sample.len() as u64,
        normals_tested: normals.len() as u64,
        covering_normals,
        best: best.expect("at least one normal"),
    })
}

/// Positions `i ≠ j` where the same `ℓ`-tuple is followed by `A` and by `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialWitness {
    pub tuple: Vec<u32>,
    pub followed_by_a: u64,
    pub followed_by_b: u64,
}

/// Searches the first `budget` outputs for an `ℓ`-tuple that is followed by
/// both `a` and `b`.
pub fn right_special_witness(
    g: &mut dyn Prng,
    ell: usize,
    a: u32,
    b: u32,
    budget: u64,
) -> Result<Option<SpecialWitness>> {
    if ell == 0 {
        return Err(Error::InvalidParameter(
            "tuple length must be at least 1".into(),
        ));
    }
    if a == b {
        return Err(Error::InvalidParameter(
            "the two successors must differ".into(),
        ));
    }
    let mut window: Vec<u32> = Vec::with_capacity(ell + 1);
    let mut seen: HashMap<Vec<u32>, (Option<u64>, Option<u64>)> = HashMap::new();
    for pos in 0..budget {
        let x = g.next_u32();
        if window.len() == ell {
            if x == a || x == b {
                let start = pos - ell as u64;
                let entry = seen.entry(window.clone()).or_default();
                if x == a {
                    entry.0.get_or_insert(start);
                } else {
                    entry.1.get_or_insert(start);
                }
                if let (Some(i), Some(j)) = *entry {
                    return Ok(Some(SpecialWitness {
                        tuple: window,
                        followed_by_a: i,
                        followed_by_b: j,
                    }));
                }
            }
            window.remove(0);
        }
        window.push(x);
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub test: String,
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    pub samples: u64,
}

/// Upper tail of the χ² distribution.
pub fn chi_square_p(statistic: f64, df: u64) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    gamma_ur(df as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0)
}

fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let diff = o as f64 - e;
            diff * diff / e
        })
        .sum()
}

#[inline]
fn cell(x: u32, bins: usize, range: u64) -> usize {
    (u128::from(x) * bins as u128 / u128::from(range)) as usize
}

fn check_bins(bins: usize, n: u64) -> Result<()> {
    if bins < 2 {
        return Err(Error::InvalidParameter(
            "at least two bins are needed".into(),
        ));
    }
    let need = 100 * bins as u64;
    if n < need {
        return Err(Error::InsufficientSamples { need, got: n });
    }
    Ok(())
}

/// χ² test of `n` outputs over `bins` equal cells of the output range.
pub fn chi_square_equidist(g: &mut dyn Prng, bins: usize, n: u64) -> Result<StatsReport> {
    check_bins(bins, n)?;
    let range = g.output_range();
    let mut counts = vec![0u64; bins];
    for _ in 0..n {
        counts[cell(g.next_u32(), bins, range)] += 1;
    }
    let expected: Vec<f64> = (0..bins)
        .map(|k| n as f64 * cell_width(k, bins, range))
        .collect();
    let statistic = chi_square(&counts, &expected);
    let df = bins as u64 - 1;
    Ok(StatsReport {
        test: "chi2".into(),
        statistic,
        df,
        p_value: chi_square_p(statistic, df),
        samples: n,
    })
}

// fraction of the output range mapped to cell k
fn cell_width(k: usize, bins: usize, range: u64) -> f64 {
    let start = |k: usize| (u128::from(range) * k as u128).div_ceil(bins as u128);
    (start(k + 1) - start(k)) as f64 / range as f64
}

/// χ² test over `bins²` cells of `n / 2` disjoint consecutive pairs.
pub fn serial_pairs(g: &mut dyn Prng, bins: usize, n: u64) -> Result<StatsReport> {
    check_bins(bins, n)?;
    let pairs = n / 2;
    let need = 10 * (bins * bins) as u64;
    if 2 * pairs < need {
        return Err(Error::InsufficientSamples { need, got: n });
    }
    let range = g.output_range();
    let mut counts = vec![0u64; bins * bins];
    for _ in 0..pairs {
        let x = cell(g.next_u32(), bins, range);
        let y = cell(g.next_u32(), bins, range);
        counts[x * bins + y] += 1;
    }
    let widths: Vec<f64> = (0..bins).map(|k| cell_width(k, bins, range)).collect();
    let expected: Vec<f64> = (0..bins * bins)
        .map(|c| pairs as f64 * widths[c / bins] * widths[c % bins])
        .collect();
    let statistic = chi_square(&counts, &expected);
    let df = (bins * bins) as u64 - 1;
    Ok(StatsReport {
        test: "serial".into(),
        statistic,
        df,
        p_value: chi_square_p(statistic, df),
        samples: 2 * pairs,
    })
}

/// Gap test: lengths of runs of outputs outside `[lo, hi)` (as fractions of
/// the output range) between hits inside it, against geometric expectations.
pub fn gap_test(g: &mut dyn Prng, lo: f64, hi: f64, n: u64) -> Result<StatsReport> {
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gap interval [{lo}, {hi}) not inside [0, 1)"
        )));
    }
    let range = g.output_range();
    let lo_v = (lo * range as f64).ceil() as u64;
    let hi_v = (hi * range as f64).ceil() as u64;
    let p = (hi_v - lo_v) as f64 / range as f64;
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidParameter(
            "gap interval must hold some but not all outputs".into(),
        ));
    }
    // cells 0..tail-1 for exact lengths, tail for ≥ tail
    let gaps_expected = n as f64 * p;
    let mut tail = 0usize;
    while tail < 64 && gaps_expected * p * (1.0 - p).powi(tail as i32 + 1) >= 5.0 {
        tail += 1;
    }
    if tail == 0 {
        let need = (10.0 / (p * p * (1.0 - p))).ceil() as u64;
        return Err(Error::InsufficientSamples { need, got: n });
    }
    let mut counts = vec![0u64; tail + 1];
    let mut run = 0usize;
    for _ in 0..n {
        let x = u64::from(g.next_u32());
        if (lo_v..hi_v).contains(&x) {
            counts[run.min(tail)] += 1;
            run = 0;
        } else {
            run += 1;
        }
    }
    let gaps: u64 = counts.iter().sum();
    let mut expected: Vec<f64> = (0..tail)
        .map(|r| gaps as f64 * p * (1.0 - p).powi(r as i32))
        .collect();
    expected.push(gaps as f64 * (1.0 - p).powi(tail as i32));
    let statistic = chi_square(&counts, &expected);
    let df = tail as u64;
    Ok(StatsReport {
        test: "gap".into(),
        statistic,
        df,
        p_value: chi_square_p(statistic, df),
        samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphic::{FixedPointStream, Morphism};
    use crate::stream::CycleStream;

    fn fib_steering() -> Box<dyn WordStream> {
        Box::new(FixedPointStream::with_default_cap(Morphism::fibonacci(), 0).unwrap())
    }

    #[test]
    fn randu_states() {
        let mut g = Lcg::randu(1);
        assert_eq!([g.step(), g.step()], [65539, 393225]);
        let mut g = Lcg::randu(1);
        assert_eq!(g.next_u32(), 65539);
        assert_eq!(g.output_range(), 1 << 31);
    }

    #[test]
    fn l64_39_first_output() {
        let a = 3_935_559_000_370_003_845u64;
        let mut g = Lcg::named("l64_39", 1).unwrap();
        let z = a.wrapping_add(1);
        assert_eq!(g.next_u32(), (z >> 32) as u32);
        assert_eq!(g.state(), z);
    }

    #[test]
    fn non_power_of_two_output_window() {
        let mut g = Lcg::named("l47-115", 1).unwrap();
        let z = 71_971_110_957_370u64;
        assert_eq!(g.next_u32(), (z >> 15) as u32);
        let g = Lcg::named("l63-25", 1).unwrap();
        assert_eq!(g.shift, 31);
    }

    #[test]
    fn parameter_errors() {
        assert!(Lcg::new(16, 16, 0, 1).is_err());
        assert!(Lcg::new(16, 5, 16, 1).is_err());
        assert!(Lcg::new(16, 5, 1, 16).is_err());
        assert!(Lcg::named("nope", 1).is_err());
    }

    #[test]
    fn identity_generator_is_constant() {
        let mut g = Lcg::new(1 << 32, 1, 0, 7).unwrap();
        assert!((0..10).all(|_| g.next_u32() == 7));
    }

    #[test]
    fn jump_matches_stepping() {
        for (name, ..) in NAMED_LCGS {
            let mut a = Lcg::named(name, 1).unwrap();
            let mut b = a.clone();
            for _ in 0..1000 {
                a.step();
            }
            b.jump(1000);
            assert_eq!(a.state(), b.state(), "{name}");
        }
        let mut a = Lcg::new(1000, 21, 7, 3).unwrap();
        let mut b = a.clone();
        (0..12345).for_each(|_| {
            a.step();
        });
        b.jump(12345);
        assert_eq!(a.state(), b.state());
    }

    #[test]
    fn randu_plane_identity() {
        let mut g = Lcg::randu(1);
        let z: Vec<i64> = (0..1002).map(|_| g.step() as i64).collect();
        for w in z.windows(3) {
            assert_eq!((9 * w[0] - 6 * w[1] + w[2]).rem_euclid(1 << 31), 0);
        }
    }

    #[test]
    fn randu_plane_count() {
        let sample = LatticeSample::from_prng(&mut Lcg::randu(1), 3, 100_000).unwrap();
        let r = plane_count(&sample, &[9, -6, 1]).unwrap();
        assert!(r.covering);
        assert!(r.plane_count <= 15);
        assert_eq!(r.comparison, 16);
        assert!(plane_count(&sample, &[1, 2]).is_err());
        assert!(plane_count(&sample, &[0, 0, 0]).is_err());
    }

    #[test]
    fn plane_count_non_power_of_two_scale() {
        // x_{i+1} = 3 x_i mod 7 lies on 3x - y ≡ 0
        let mut values = vec![1u64];
        for _ in 0..50 {
            values.push(values.last().unwrap() * 3 % 7);
        }
        let s = LatticeSample::from_values(values, 2, 7).unwrap();
        let r = plane_count(&s, &[3, -1]).unwrap();
        assert!(r.covering);
        assert!(r.plane_count <= r.comparison);
    }

    #[test]
    fn canonical_normal_set() {
        let n = canonical_normals(2, 1);
        assert_eq!(n, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
        assert!(canonical_normals(3, 2)
            .iter()
            .all(|v| !v.contains(&0) || v.iter().any(|&x| x != 0)));
        assert!(!canonical_normals(3, 2).contains(&vec![2, 0, 0]));
    }

    #[test]
    fn search_finds_randu_planes() {
        let sample = LatticeSample::from_prng(&mut Lcg::randu(1), 3, 20_000).unwrap();
        let s = lattice_search(&sample, 10, Execution::default()).unwrap();
        assert!(s.best.covering);
        assert!(s.best.plane_count <= 15);
        let seq = lattice_search(&sample, 10, Execution::Sequential).unwrap();
        assert_eq!(s, seq);
    }

    #[test]
    fn shuffle_follows_steering() {
        let steer = Box::new(CycleStream::new(vec![0, 1, 0], 2).unwrap());
        let x = Lcg::named("l64_28", 1).unwrap();
        let y = Lcg::named("l64_32", 1).unwrap();
        let (mut xr, mut yr) = (x.clone(), y.clone());
        let mut z = ShuffledPrng::new(steer, vec![Box::new(x), Box::new(y)]).unwrap();
        let got: Vec<u32> = (0..3).map(|_| z.next_u32()).collect();
        let x1 = xr.next_u32();
        let y1 = yr.next_u32();
        let x2 = xr.next_u32();
        assert_eq!(got, vec![x1, y1, x2]);
        assert_eq!(z.consumed(), &[2, 1]);
    }

    #[test]
    fn shuffle_rejects_mismatches() {
        let steer = Box::new(CycleStream::new(vec![0, 1, 2], 3).unwrap());
        let r = ShuffledPrng::new(
            steer,
            vec![Box::new(Lcg::randu(1)), Box::new(Lcg::randu(2))],
        );
        assert!(matches!(r, Err(Error::AlphabetMismatch { .. })));
        let r = ShuffledPrng::new(
            fib_steering(),
            vec![
                Box::new(Lcg::randu(1)),
                Box::new(Lcg::named("l64_28", 1).unwrap()),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn shuffle_discard_matches_stepping() {
        let make = || {
            ShuffledPrng::new(
                fib_steering(),
                vec![
                    Box::new(Lcg::named("l64_28", 1).unwrap()) as Box<dyn Prng>,
                    Box::new(Lcg::named("l64_32", 1).unwrap()),
                ],
            )
            .unwrap()
        };
        let mut a = make();
        let mut b = make();
        for _ in 0..10_007 {
            a.next_u32();
        }
        b.discard(10_007);
        assert_eq!(a.consumed(), b.consumed());
        assert!((0..100).all(|_| a.next_u32() == b.next_u32()));
    }

    #[test]
    fn export_bytes() {
        let mut out = Vec::new();
        stream_export(&mut Lcg::randu(1), 2, &mut out).unwrap();
        let mut want = 65539u32.to_le_bytes().to_vec();
        want.extend_from_slice(&393225u32.to_le_bytes());
        assert_eq!(out, want);
        let mut empty = Vec::new();
        stream_export(&mut Lcg::randu(1), 0, &mut empty).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn toy_lcg_period_divides_modulus() {
        for (a, c) in [(5u64, 1u64), (13, 3), (21, 7), (9, 0), (3, 0)] {
            let g = Lcg::new(32, a, c, 1).unwrap();
            let (_, lambda) = lcg_cycle(&g, 1000).unwrap();
            assert_eq!(32 % lambda, 0, "a={a} c={c}");
        }
        assert_eq!(
            lcg_cycle(&Lcg::new(32, 5, 1, 0).unwrap(), 1000),
            Some((0, 32))
        );
    }

    #[test]
    fn suffix_period_detection() {
        let seq: Vec<u32> = (0..100).map(|i| [1, 2, 3][i % 3]).collect();
        assert_eq!(suffix_period(&seq, 10), Some(3));
        let fib = FixedPointStream::with_default_cap(Morphism::fibonacci(), 0)
            .unwrap()
            .prefix(10_000);
        assert_eq!(suffix_period(&fib, 2000), None);
    }

    #[test]
    fn special_witnesses() {
        let mut constant = Lcg::new(32, 1, 0, 3).unwrap();
        assert_eq!(
            right_special_witness(&mut constant, 2, 3, 4, 10_000).unwrap(),
            None
        );
        let mut lcg = Lcg::new(32, 5, 1, 1).unwrap();
        assert_eq!(
            right_special_witness(&mut lcg, 5, 0, 1, 100_000).unwrap(),
            None
        );
        let mut z = ShuffledPrng::new(
            fib_steering(),
            vec![
                Box::new(Lcg::new(32, 5, 1, 1).unwrap()) as Box<dyn Prng>,
                Box::new(Lcg::new(32, 13, 3, 1).unwrap()),
            ],
        )
        .unwrap();
        let w = right_special_witness(&mut z, 2, 5, 6, 1_000_000)
            .unwrap()
            .unwrap();
        assert_ne!(w.followed_by_a, w.followed_by_b);
    }

    #[test]
    fn constant_stream_fails_equidistribution() {
        let mut g = Lcg::new(1 << 32, 1, 0, 12345).unwrap();
        let r = chi_square_equidist(&mut g, 16, 10_000).unwrap();
        assert!(r.p_value < 1e-6);
        assert!(chi_square_equidist(&mut g, 16, 100).is_err());
        assert!(chi_square_equidist(&mut g, 1, 1000).is_err());
    }

    #[test]
    fn p_values_in_range() {
        assert!((chi_square_p(0.0, 3) - 1.0).abs() < 1e-12);
        // median of χ²(2) is 2 ln 2
        assert!((chi_square_p(2.0 * 2f64.ln(), 2) - 0.5).abs() < 1e-10);
        let mut g = Lcg::named("l64_28", 1).unwrap();
        for r in [
            serial_pairs(&mut g, 8, 100_000).unwrap(),
            gap_test(&mut g, 0.0, 0.25, 100_000).unwrap(),
        ] {
            assert!((0.0..=1.0).contains(&r.p_value));
        }
        assert!(gap_test(&mut g, 0.5, 0.25, 1000).is_err());
    }

    #[test]
    fn low_bit_filter() {
        let mut g = BitFilter::low_bit(Lcg::randu(1));
        // RANDU states are odd
        assert!((0..100).all(|_| g.next_u32() == 1));
        assert_eq!(g.output_range(), 2);
        assert!(BitFilter::new(Lcg::randu(1), 30, 4).is_err());
    }
}
