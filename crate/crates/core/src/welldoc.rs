//! Empirical checks of well distributed occurrences.
//!
//! For a factor `w` and modulus `m`, the checker records the Parikh vector
//! (mod `m`) of the prefix preceding each occurrence of `w`. Coverage of all
//! of `ℤ_m^d` within a finite prefix is a certificate for that `(w, m)`; the
//! absence of coverage proves nothing, so such reports are `Undetermined`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::morphic::Morphism;
use crate::stream::WordStream;
use crate::words::{check_letters, parikh, Letter, Matcher, PrefixBuffer, Word};

/// Default letter budget for one check.
pub const DEFAULT_MAX_PREFIX: u64 = 10_000_000;

// dense tables beyond this are refused
const MAX_VECTORS: u64 = 1 << 20;
const MAX_FACTOR_CODES: u64 = 1 << 22;
const MAX_SCAN_CELLS: u64 = 1 << 24;
const SCAN_CHUNK: usize = 1 << 20;
const READ_CHUNK: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Covered,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Covered => "COVERED",
            Verdict::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WelldocQuery {
    pub factor: Word,
    pub m: u64,
    pub max_prefix: u64,
    /// Keep scanning until every vector has this many occurrences.
    pub min_hits: u64,
}

impl WelldocQuery {
    pub fn new(factor: Word, m: u64, max_prefix: u64) -> Result<Self> {
        let q = WelldocQuery {
            factor,
            m,
            max_prefix,
            min_hits: 1,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_min_hits(mut self, min_hits: u64) -> Self {
        self.min_hits = min_hits.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidParameter(format!(
                "modulus must be at least 2, got {}",
                self.m
            )));
        }
        if self.factor.is_empty() {
            return Err(Error::InvalidParameter("factor must be nonempty".into()));
        }
        if self.max_prefix <= self.factor.len() as u64 {
            return Err(Error::InvalidParameter(
                "prefix budget must exceed the factor length".into(),
            ));
        }
        Ok(())
    }
}

/// One vector of `ℤ_m^d` that was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveredVector {
    pub vector: Vec<u64>,
    /// Smallest occurrence index `i` of the factor with `parikh(Pref_i) ≡ vector`.
    pub witness: u64,
    pub hits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WelldocReport {
    pub factor: Word,
    pub m: u64,
    pub alphabet: usize,
    pub covered: Vec<CoveredVector>,
    pub missing: Vec<Vec<u64>>,
    pub occurrences_seen: u64,
    pub prefix_scanned: u64,
    /// Prefix length at which the covered set first reached its final size.
    pub covered_at: Option<u64>,
    pub verdict: Verdict,
}

impl WelldocReport {
    pub fn is_covered(&self) -> bool {
        self.verdict == Verdict::Covered
    }

    pub fn covers(&self, vector: &[u64]) -> bool {
        self.covered.iter().any(|c| c.vector == vector)
    }

    pub fn covered_vectors(&self) -> impl Iterator<Item = &[u64]> {
        self.covered.iter().map(|c| c.vector.as_slice())
    }
}

// vectors of ℤ_m^d packed as base-m integers, coordinate a at weight m^a
#[derive(Clone, Debug)]
struct VectorSpace {
    m: u64,
    d: usize,
    weights: Vec<u64>,
    size: u64,
}

impl VectorSpace {
    fn new(m: u64, d: usize) -> Result<Self> {
        let mut weights = Vec::with_capacity(d);
        let mut size = 1u64;
        for _ in 0..d {
            weights.push(size);
            size = size
                .checked_mul(m)
                .filter(|&s| s <= MAX_VECTORS)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("m^d too large for m={m}, d={d}"))
                })?;
        }
        Ok(VectorSpace {
            m,
            d,
            weights,
            size,
        })
    }

    fn decode(&self, mut idx: u64) -> Vec<u64> {
        (0..self.d)
            .map(|_| {
                let c = idx % self.m;
                idx /= self.m;
                c
            })
            .collect()
    }

    fn encode(&self, v: &[u64]) -> u64 {
        v.iter()
            .zip(&self.weights)
            .map(|(&c, &w)| (c % self.m) * w)
            .sum()
    }
}

// Parikh vector mod m, kept both as coordinates and as a packed index
#[derive(Clone, Debug)]
struct RunningVector {
    coords: Vec<u64>,
    idx: u64,
}

impl RunningVector {
    fn new(space: &VectorSpace, start: &[u64]) -> Self {
        let coords: Vec<u64> = start.iter().map(|&c| c % space.m).collect();
        let idx = space.encode(&coords);
        RunningVector { coords, idx }
    }

    #[inline]
    fn push(&mut self, space: &VectorSpace, a: Letter) {
        let a = usize::from(a);
        let c = &mut self.coords[a];
        *c += 1;
        if *c == space.m {
            *c = 0;
            self.idx -= (space.m - 1) * space.weights[a];
        } else {
            self.idx += space.weights[a];
        }
    }
}

const NONE: u64 = u64::MAX;

#[derive(Clone, Debug)]
struct Tally {
    first: Vec<u64>,
    hits: Vec<u64>,
}

impl Tally {
    fn new(size: usize) -> Self {
        Tally {
            first: vec![NONE; size],
            hits: vec![0; size],
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (f, &g) in self.first.iter_mut().zip(&other.first) {
            *f = (*f).min(g);
        }
        for (h, &g) in self.hits.iter_mut().zip(&other.hits) {
            *h += g;
        }
    }
}

fn build_report(
    factor: Word,
    space: &VectorSpace,
    first: &[u64],
    hits: &[u64],
    prefix_scanned: u64,
) -> WelldocReport {
    let mut covered = Vec::new();
    let mut missing = Vec::new();
    let mut last_witness = None::<u64>;
    for (idx, (&f, &h)) in first.iter().zip(hits).enumerate() {
        let vector = space.decode(idx as u64);
        if f == NONE {
            missing.push(vector);
        } else {
            last_witness = Some(last_witness.map_or(f, |w| w.max(f)));
            covered.push(CoveredVector {
                vector,
                witness: f,
                hits: h,
            });
        }
    }
    let verdict = if missing.is_empty() {
        Verdict::Covered
    } else {
        Verdict::Undetermined
    };
    let len = factor.len() as u64;
    WelldocReport {
        factor,
        m: space.m,
        alphabet: space.d,
        occurrences_seen: hits.iter().sum(),
        covered,
        missing,
        prefix_scanned,
        covered_at: last_witness.map(|w| w + len),
        verdict,
    }
}

/// Reads up to `q.max_prefix` letters of `stream` from its current position,
/// stopping as soon as every vector of `ℤ_m^d` has `q.min_hits` occurrences.
pub fn welldoc_check(stream: &mut dyn WordStream, q: &WelldocQuery) -> Result<WelldocReport> {
    q.validate()?;
    let d = stream.alphabet_size();
    check_letters(&q.factor, d)?;
    let space = VectorSpace::new(q.m, d)?;
    let size = space.size as usize;

    // running vector of Pref_{t+1} - parikh(w), so at a match ending at t it
    // equals parikh(Pref_i) for the occurrence start i
    let pw = parikh(&q.factor, d)?;
    let start: Vec<u64> = pw.counts().iter().map(|&c| (q.m - c % q.m) % q.m).collect();
    let mut running = RunningVector::new(&space, &start);
    let mut matcher = Matcher::new(&q.factor);
    let mut tally = Tally::new(size);
    let mut unsatisfied = size as u64;
    let len = q.factor.len() as u64;

    let mut buf = vec![0; READ_CHUNK];
    let mut scanned = 0u64;
    'outer: while scanned < q.max_prefix {
        let n = (q.max_prefix - scanned).min(READ_CHUNK as u64) as usize;
        stream.fill(&mut buf[..n]);
        for &a in &buf[..n] {
            running.push(&space, a);
            scanned += 1;
            if matcher.push(a) {
                let idx = running.idx as usize;
                let h = &mut tally.hits[idx];
                *h += 1;
                if *h == 1 {
                    tally.first[idx] = scanned - len;
                }
                if *h == q.min_hits {
                    unsatisfied -= 1;
                    if unsatisfied == 0 {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(build_report(
        q.factor.clone(),
        &space,
        &tally.first,
        &tally.hits,
        scanned,
    ))
}

/// Factors of each length `1..=max_len` occurring in `letters`, in
/// length-then-lexicographic order.
fn collect_factors(
    letters: &[Letter],
    d: usize,
    max_len: usize,
    exec: Execution,
) -> Result<Vec<Vec<Word>>> {
    let mut total = 0u64;
    let mut sizes = Vec::with_capacity(max_len);
    let mut size = 1u64;
    for _ in 0..max_len {
        size = size.saturating_mul(d as u64);
        total = total.saturating_add(size);
        sizes.push(size as usize);
    }
    if total > MAX_FACTOR_CODES {
        return Err(Error::InvalidParameter(format!(
            "factor length {max_len} over {d} letters exceeds the scan table limit"
        )));
    }
    let n = letters.len();
    let chunks = n.div_ceil(SCAN_CHUNK);
    let partial = exec.map_range(chunks, |c| {
        let lo = c * SCAN_CHUNK;
        let hi = (lo + SCAN_CHUNK).min(n);
        let mut seen: Vec<Vec<bool>> = sizes.iter().map(|&s| vec![false; s]).collect();
        for i in lo..hi {
            let mut code = 0usize;
            for l in 0..max_len.min(n - i) {
                code = code * d + usize::from(letters[i + l]);
                seen[l][code] = true;
            }
        }
        seen
    });
    let mut out = Vec::with_capacity(max_len);
    for l in 0..max_len {
        let mut words = Vec::new();
        for code in 0..sizes[l] {
            if partial.iter().any(|p| p[l][code]) {
                let mut w = vec![0; l + 1];
                let mut c = code;
                for slot in w.iter_mut().rev() {
                    *slot = (c % d) as Letter;
                    c /= d;
                }
                words.push(Word::new(w));
            }
        }
        out.push(words);
    }
    Ok(out)
}

/// Runs the check for every factor of length `1..=max_len` occurring in the
/// buffer, over the whole buffer, in one pass split into independent chunks.
///
/// Reports are ordered by length, then lexicographically.
pub fn welldoc_scan_buffer(
    buf: &PrefixBuffer,
    m: u64,
    max_len: usize,
    exec: Execution,
) -> Result<Vec<WelldocReport>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "modulus must be at least 2, got {m}"
        )));
    }
    if max_len == 0 {
        return Ok(Vec::new());
    }
    let d = buf.alphabet_size();
    let space = VectorSpace::new(m, d)?;
    let letters = buf.letters();
    let n = letters.len();
    let factors = collect_factors(letters, d, max_len, exec)?;

    // code -> compact id, per length
    let mut ids: Vec<Vec<u32>> = Vec::with_capacity(max_len);
    let mut all: Vec<Word> = Vec::new();
    let mut size = 1usize;
    for words in &factors {
        size *= d;
        let mut table = vec![u32::MAX; size];
        for w in words {
            let code = w.iter().fold(0usize, |c, &a| c * d + usize::from(a));
            table[code] = all.len() as u32;
            all.push(w.clone());
        }
        ids.push(table);
    }
    let cells = (all.len() as u64).saturating_mul(space.size);
    if cells > MAX_SCAN_CELLS {
        return Err(Error::InvalidParameter(format!(
            "{} factors times {} vectors exceeds the scan table limit",
            all.len(),
            space.size
        )));
    }
    let vsize = space.size as usize;

    let chunks = n.div_ceil(SCAN_CHUNK);
    let partial = exec.map_range(chunks, |c| {
        let lo = c * SCAN_CHUNK;
        let hi = (lo + SCAN_CHUNK).min(n);
        let mut tally = Tally::new(cells as usize);
        let start = buf.parikh_prefix(lo);
        let mut running = RunningVector::new(&space, start.counts());
        for i in lo..hi {
            let v = running.idx as usize;
            let mut code = 0usize;
            for l in 0..max_len.min(n - i) {
                code = code * d + usize::from(letters[i + l]);
                let cell = ids[l][code] as usize * vsize + v;
                tally.hits[cell] += 1;
                if tally.first[cell] == NONE {
                    tally.first[cell] = i as u64;
                }
            }
            running.push(&space, letters[i]);
        }
        tally
    });
    let mut total = Tally::new(cells as usize);
    for t in &partial {
        total.merge(t);
    }
    let reports = all
        .into_iter()
        .enumerate()
        .map(|(k, w)| {
            let range = k * vsize..(k + 1) * vsize;
            build_report(
                w,
                &space,
                &total.first[range.clone()],
                &total.hits[range],
                n as u64,
            )
        })
        .collect();
    Ok(reports)
}

/// Materializes `max_prefix` letters of `stream` and scans them.
pub fn welldoc_scan(
    stream: &mut dyn WordStream,
    m: u64,
    max_len: usize,
    max_prefix: usize,
    exec: Execution,
) -> Result<Vec<WelldocReport>> {
    let buf = PrefixBuffer::from_stream(stream, max_prefix)?;
    welldoc_scan_buffer(&buf, m, max_len, exec)
}

/// Why a morphism is known to carry the property from `u` to `φ(u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The adjacency matrix is unimodular.
    Determinant { det: i8 },
    /// A letter-to-letter surjection onto `{0, ..., target-1}`.
    LetterMerging { target: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preservation {
    pub preserves: bool,
    #[serde(serialize_with = "serialize_bigint")]
    pub determinant: BigInt,
    pub certificate: Option<Certificate>,
}

fn serialize_bigint<S: serde::Serializer>(
    x: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Checks the two sufficient criteria. `preserves = false` only means that
/// neither applies, not that the property is lost.
pub fn preserves_welldoc(phi: &Morphism) -> Preservation {
    let determinant = phi.adjacency_matrix().determinant();
    let certificate = if determinant.is_one() {
        Some(Certificate::Determinant { det: 1 })
    } else if (-&determinant).is_one() {
        Some(Certificate::Determinant { det: -1 })
    } else if phi.is_letter_to_letter() {
        let d = phi.alphabet_size();
        let mut used = vec![false; d];
        for img in phi.images() {
            used[usize::from(img[0])] = true;
        }
        let target = used.iter().take_while(|&&u| u).count();
        let onto_prefix = used[target..].iter().all(|&u| !u);
        (onto_prefix && target < d).then_some(Certificate::LetterMerging { target })
    } else {
        None
    };
    Preservation {
        preserves: certificate.is_some(),
        determinant,
        certificate,
    }
}
