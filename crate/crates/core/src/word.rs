//! Biperiodic Fibonacci words and their companion words.
//!
//! For parameters `a, b >= 1` the family is
//!
//! ```text
//! f(0) = 0
//! f(1) = 0^(a-1) 1
//! f(n) = f(n-1)^r(n) f(n-2)      r(n) = a for even n, b for odd n
//! ```
//!
//! `t(n)` is `f(n)` with its final two symbols exchanged, `p(n)` is `f(n)`
//! without them, and `I(n)` is the word that starts as `f(n)` and ends as
//! `t(n)` with the two copies sharing a known overlap.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest word the generators will materialize unless told otherwise.
pub const DEFAULT_LENGTH_CAP: u64 = 10_000_000;

/// Smallest level at which `I(n)` is defined.
pub const MIN_I_LEVEL: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("parameters must be positive (got a={a}, b={b})")]
    InvalidParams { a: u32, b: u32 },
    #[error("the classical-swapped convention requires a = b = 1 (got a={a}, b={b})")]
    ConventionMismatch { a: u32, b: u32 },
    #[error("word too large: length of f(n={n}) overflows 64 bits")]
    Overflow { n: u32 },
    #[error("word too large: {length} symbols exceeds the cap of {cap}")]
    CapExceeded { length: u64, cap: u64 },
    #[error("t undefined: f(n={n}) has {length} symbol(s), need at least 2")]
    TUndefined { n: u32, length: u64 },
    #[error("p undefined: f(n={n}) has {length} symbol(s), need at least 2")]
    PUndefined { n: u32, length: u64 },
    #[error("I undefined below n = {min} (got n={n})")]
    ILevelTooSmall { n: u32, min: u32 },
    #[error("overlap of I(n={n}) is inconsistent at position {position}")]
    IOverlapConflict { n: u32, position: usize },
    #[error("I(n={n}) built from overlaps differs from f(n-1)^2 t(n) at position {position}")]
    IMismatch { n: u32, position: usize },
    #[error("invalid symbol {0:?}, expected '0' or '1'")]
    InvalidSymbol(char),
}

/// Which initial conditions seed the recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `f(0) = 0`, `f(1) = 0^(a-1) 1`.
    #[default]
    Standard,
    /// `f(0) = 1`, `f(1) = 0`; the classical Fibonacci words, `a = b = 1` only.
    ClassicalSwapped,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::ClassicalSwapped => "classical-swapped",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The parameter pair `(a, b)` together with the initial-condition convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    a: u32,
    b: u32,
    convention: Convention,
}

impl Params {
    pub fn new(a: u32, b: u32) -> Result<Self, WordError> {
        Self::with_convention(a, b, Convention::Standard)
    }

    /// The classical Fibonacci words: `a = b = 1` with swapped initial conditions.
    pub fn classical() -> Self {
        Params {
            a: 1,
            b: 1,
            convention: Convention::ClassicalSwapped,
        }
    }

    pub fn with_convention(a: u32, b: u32, convention: Convention) -> Result<Self, WordError> {
        if a == 0 || b == 0 {
            return Err(WordError::InvalidParams { a, b });
        }
        if convention == Convention::ClassicalSwapped && (a, b) != (1, 1) {
            return Err(WordError::ConventionMismatch { a, b });
        }
        Ok(Params { a, b, convention })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// True when `a = 1` or `b = 1`; those families need one extra level
    /// before any identity involving `t` applies.
    pub fn has_unit_parameter(&self) -> bool {
        self.a == 1 || self.b == 1
    }

    /// `r(n)` and `s(n)`: the exponent used most recently and the one before it.
    pub fn rs(&self, n: u32) -> ParityPair {
        if n % 2 == 0 {
            ParityPair { r: self.a, s: self.b }
        } else {
            ParityPair { r: self.b, s: self.a }
        }
    }

    /// `r(n)` alone.
    pub fn r(&self, n: u32) -> u32 {
        self.rs(n).r
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}, {})", self.a, self.b, self.convention)
    }
}

/// `r` is the exponent applied at the current step, `s` the one applied at the step before.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ParityPair {
    pub r: u32,
    pub s: u32,
}

/// Free-function form of [`Params::rs`].
pub fn rs(params: &Params, n: u32) -> ParityPair {
    params.rs(n)
}

/// A finite word over `{0, 1}`, stored one symbol per byte.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self, WordError> {
        if let Some(&bad) = symbols.iter().find(|&&s| s > 1) {
            return Err(WordError::InvalidSymbol(char::from(b'0'.wrapping_add(bad))));
        }
        Ok(Word { symbols })
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Word {
            symbols: Vec::with_capacity(capacity),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn append(&mut self, other: &Word) -> &mut Self {
        self.symbols.extend_from_slice(&other.symbols);
        self
    }

    pub fn append_n(&mut self, other: &Word, times: u32) -> &mut Self {
        for _ in 0..times {
            self.symbols.extend_from_slice(&other.symbols);
        }
        self
    }

    /// Concatenation of `parts` in order.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut out = Word::empty();
        for part in parts {
            out.append(part);
        }
        out
    }

    pub fn repeat(&self, times: u32) -> Word {
        let mut out = Word::with_capacity(self.len() * times as usize);
        out.append_n(self, times);
        out
    }

    pub fn prefix(&self, len: usize) -> &[u8] {
        &self.symbols[..len]
    }

    pub fn suffix(&self, len: usize) -> &[u8] {
        &self.symbols[self.symbols.len() - len..]
    }

    pub fn is_palindrome(&self) -> bool {
        let s = &self.symbols;
        s.iter().eq(s.iter().rev())
    }

    /// Number of `1` symbols.
    pub fn ones(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == 1).count()
    }

    /// First index where `self` and `other` differ, including a length difference.
    pub fn first_mismatch(&self, other: &Word) -> Option<usize> {
        first_mismatch(&self.symbols, &other.symbols)
    }

    fn swap_last_two(&mut self) {
        let len = self.symbols.len();
        self.symbols.swap(len - 2, len - 1);
    }
}

pub(crate) fn first_mismatch(left: &[u8], right: &[u8]) -> Option<usize> {
    left.iter()
        .zip(right)
        .position(|(x, y)| x != y)
        .or_else(|| (left.len() != right.len()).then(|| left.len().min(right.len())))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self.symbols.iter().map(|&s| char::from(b'0' + s)).collect();
        f.write_str(&text)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 64;
        if self.len() <= SHOWN {
            write!(f, "Word({self})")
        } else {
            let head = Word {
                symbols: self.symbols[..SHOWN].to_vec(),
            };
            write!(f, "Word({head}... [{} symbols])", self.len())
        }
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(WordError::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(|symbols| Word { symbols })
    }
}

/// Lengths `L(0), ..., L(n)` of the words `f(0), ..., f(n)`.
pub fn lengths(params: &Params, n: u32) -> Result<Vec<u64>, WordError> {
    let first = match params.convention {
        Convention::Standard => params.a as u64,
        Convention::ClassicalSwapped => 1,
    };
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(1u64);
    if n >= 1 {
        out.push(first);
    }
    for k in 2..=n {
        let r = params.r(k) as u64;
        let next = out[k as usize - 1]
            .checked_mul(r)
            .and_then(|v| v.checked_add(out[k as usize - 2]))
            .ok_or(WordError::Overflow { n: k })?;
        out.push(next);
    }
    Ok(out)
}

/// `|f(n)|`, computed from the length recurrence without building the word.
pub fn length_f(params: &Params, n: u32) -> Result<u64, WordError> {
    lengths(params, n).map(|l| l[n as usize])
}

/// `|I(n)| = L(n) + 2 L(n-1)`.
pub fn length_i(params: &Params, n: u32) -> Result<u64, WordError> {
    if n < MIN_I_LEVEL {
        return Err(WordError::ILevelTooSmall {
            n,
            min: MIN_I_LEVEL,
        });
    }
    let l = lengths(params, n)?;
    l[n as usize]
        .checked_add(2 * l[n as usize - 1])
        .ok_or(WordError::Overflow { n })
}

fn check_cap(length: u64, cap: u64) -> Result<(), WordError> {
    if length > cap {
        Err(WordError::CapExceeded { length, cap })
    } else {
        Ok(())
    }
}

fn seeds(params: &Params) -> (Word, Word) {
    match params.convention {
        Convention::Standard => {
            let mut f1 = vec![0u8; params.a as usize - 1];
            f1.push(1);
            (Word { symbols: vec![0] }, Word { symbols: f1 })
        }
        Convention::ClassicalSwapped => (Word { symbols: vec![1] }, Word { symbols: vec![0] }),
    }
}

/// `f(n)` and, for `n >= 1`, `f(n-1)`, built bottom-up with two buffers.
fn top_two(params: &Params, n: u32, cap: u64) -> Result<(Word, Option<Word>), WordError> {
    check_cap(length_f(params, n)?, cap)?;
    let (f0, f1) = seeds(params);
    if n == 0 {
        return Ok((f0, None));
    }
    let (mut older, mut newer) = (f0, f1);
    for k in 2..=n {
        let mut next = newer.repeat(params.r(k));
        next.append(&older);
        older = std::mem::replace(&mut newer, next);
    }
    Ok((newer, Some(older)))
}

/// `f(n)` under the default length cap.
pub fn word_f(params: &Params, n: u32) -> Result<Word, WordError> {
    word_f_capped(params, n, DEFAULT_LENGTH_CAP)
}

pub fn word_f_capped(params: &Params, n: u32, cap: u64) -> Result<Word, WordError> {
    top_two(params, n, cap).map(|(w, _)| w)
}

/// `t(n)`: `f(n)` with the last two symbols interchanged.
pub fn word_t(params: &Params, n: u32) -> Result<Word, WordError> {
    word_t_capped(params, n, DEFAULT_LENGTH_CAP)
}

pub fn word_t_capped(params: &Params, n: u32, cap: u64) -> Result<Word, WordError> {
    let length = length_f(params, n)?;
    if length < 2 {
        return Err(WordError::TUndefined { n, length });
    }
    let mut w = word_f_capped(params, n, cap)?;
    w.swap_last_two();
    Ok(w)
}

/// `p(n)`: `f(n)` without its last two symbols. A palindrome for `n >= 3`.
pub fn palindromic_prefix(params: &Params, n: u32) -> Result<Word, WordError> {
    let length = length_f(params, n)?;
    if length < 2 {
        return Err(WordError::PUndefined { n, length });
    }
    let mut w = word_f(params, n)?;
    w.symbols.truncate(length as usize - 2);
    Ok(w)
}

/// The final two symbols of `f(n)`, as computed (always `01` or `10`).
pub fn last_two(params: &Params, n: u32) -> Result<Word, WordError> {
    let length = length_f(params, n)?;
    if length < 2 {
        return Err(WordError::TUndefined { n, length });
    }
    let w = word_f(params, n)?;
    Ok(Word {
        symbols: w.suffix(2).to_vec(),
    })
}

/// Length of the overlap between `f(n)` and `t(n)` inside `I(n)` when `r(n) >= 2`:
/// `(r-2) L(n-1) + L(n-2)`.
pub fn boundary_overlap_len(params: &Params, n: u32) -> Result<u64, WordError> {
    let l = lengths(params, n)?;
    let r = params.r(n) as u64;
    debug_assert!(r >= 2 && n >= 2);
    Ok((r - 2) * l[n as usize - 1] + l[n as usize - 2])
}

/// Writes `part` at the end of `out`, sharing its first `overlap` symbols
/// with the tail already in `out`.
fn glue(out: &mut Word, part: &Word, overlap: usize, n: u32) -> Result<(), WordError> {
    let start = out.len() - overlap;
    if let Some(i) = first_mismatch(&out.symbols[start..], &part.symbols[..overlap]) {
        return Err(WordError::IOverlapConflict {
            n,
            position: start + i,
        });
    }
    out.symbols.extend_from_slice(&part.symbols[overlap..]);
    Ok(())
}

/// `I(n)` assembled from its overlap description only:
///
/// * `r(n) >= 2`: `f(n)` then `t(n)`, overlapping in `f(n-1)^(r-2) f(n-2)`;
/// * `r(n) = 1`: `f(n)`, `f(n)`, `t(n)`, each adjacent pair overlapping in `f(n-2)`.
///
/// No comparison against `f(n-1)^2 t(n)` is made; see [`word_i`].
pub fn word_i_from_overlap(params: &Params, n: u32) -> Result<Word, WordError> {
    word_i_from_overlap_capped(params, n, DEFAULT_LENGTH_CAP)
}

pub fn word_i_from_overlap_capped(params: &Params, n: u32, cap: u64) -> Result<Word, WordError> {
    let total = length_i(params, n)?;
    check_cap(total, cap)?;
    let f = word_f_capped(params, n, cap)?;
    let t = word_t_capped(params, n, cap)?;
    let l = lengths(params, n)?;
    let mut out = Word::with_capacity(total as usize);
    out.append(&f);
    if params.r(n) >= 2 {
        let overlap = boundary_overlap_len(params, n)? as usize;
        glue(&mut out, &t, overlap, n)?;
    } else {
        let overlap = l[n as usize - 2] as usize;
        glue(&mut out, &f, overlap, n)?;
        glue(&mut out, &t, overlap, n)?;
    }
    debug_assert_eq!(out.len() as u64, total);
    Ok(out)
}

/// `I(n)` built from its overlap description and checked against
/// `f(n-1) f(n-1) t(n)`. A disagreement is reported as [`WordError::IMismatch`].
pub fn word_i(params: &Params, n: u32) -> Result<Word, WordError> {
    word_i_capped(params, n, DEFAULT_LENGTH_CAP)
}

pub fn word_i_capped(params: &Params, n: u32, cap: u64) -> Result<Word, WordError> {
    let overlapped = word_i_from_overlap_capped(params, n, cap)?;
    let (mut t, f_prev) = top_two(params, n, cap)?;
    t.swap_last_two();
    let mut direct = f_prev.expect("n >= 5").repeat(2);
    direct.append(&t);
    match overlapped.first_mismatch(&direct) {
        None => Ok(overlapped),
        Some(position) => Err(WordError::IMismatch { n, position }),
    }
}
