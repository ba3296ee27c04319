//! Brute-force verification of the word identities.
//!
//! Each check builds its left side with the independent [`oracle`] and its
//! right side from the identity's formula (or decomposition) using the
//! library generators, then compares symbol by symbol.

mod balance;
pub mod oracle;

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cell::{expand_all_i, flatten};
use crate::decompose::{decompose, DecomposeOptions, ParityCase};
use crate::word::{self, first_mismatch, Convention, Params, Word, WordError};

pub use balance::check_balanced;
use oracle::Oracle;

/// Default factor length for [`check_balanced`] sweeps.
pub const DEFAULT_MAX_FACTOR_LEN: usize = 64;

/// Default length cap for grid sweeps.
pub const DEFAULT_GRID_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    /// `f(n)` ends in `01` or `10`, alternating with the parity of `n`.
    SuffixParity,
    /// `p(n)` is a palindrome, `n >= 3`.
    Palindrome,
    /// `f(n-1) p(n-2) = f(n-2) p(n-1)`, `n >= 3`.
    Exchange,
    /// `f(n-1) f(n-2) = f(n-2) t(n-1)`, `n >= 5`.
    SwapFt,
    /// `f(n-1) t(n-2) = f(n-2) f(n-1)`, `n >= 5`.
    SwapFf,
    /// `f(n)` ends and `t(n)` begins with `f(n-1)^(r-2) f(n-2)`, `n >= 5`, `r >= 2`.
    BoundaryOverlap,
    /// `I(n) = f(n-1)^2 t(n)`, `n >= 5`.
    IEqualsFft,
    /// `f(n)^2 = f(n-1)^r I(n-1) t(n-1)^(r-1)`, `n >= 6`.
    FSquared,
    /// Decomposition at level n-2 for even `r`, written with `f`, `I`, `t` words.
    LemmaREven,
    /// Decomposition through `f(n-2)^2`, `t(n-3)`, `f(n-3)` for odd `r`, `s`.
    LemmaBothOdd,
    /// Decomposition through `f(n-3)^2`, `t(n-4)`, `f(n-4)` for odd `r`, even `s`.
    LemmaOddEven,
    /// Table row 1 via cell structure and flatten.
    Table1Row1,
    /// Table row 2 via cell structure and flatten.
    Table1Row2,
    /// Table row 3 via cell structure and flatten.
    Table1Row3,
    /// `I(n)` for `r(n) = 1`: `f, f, t` with adjacent overlaps `f(n-2)`.
    IVariantR1,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::SuffixParity,
        IdentityId::Palindrome,
        IdentityId::Exchange,
        IdentityId::SwapFt,
        IdentityId::SwapFf,
        IdentityId::BoundaryOverlap,
        IdentityId::IEqualsFft,
        IdentityId::FSquared,
        IdentityId::LemmaREven,
        IdentityId::LemmaBothOdd,
        IdentityId::LemmaOddEven,
        IdentityId::Table1Row1,
        IdentityId::Table1Row2,
        IdentityId::Table1Row3,
        IdentityId::IVariantR1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::SuffixParity => "SUFFIX_PARITY",
            IdentityId::Palindrome => "PALINDROME",
            IdentityId::Exchange => "EXCHANGE",
            IdentityId::SwapFt => "SWAP_FT",
            IdentityId::SwapFf => "SWAP_FF",
            IdentityId::BoundaryOverlap => "BOUNDARY_OVERLAP",
            IdentityId::IEqualsFft => "I_EQUALS_FFT",
            IdentityId::FSquared => "F_SQUARED",
            IdentityId::LemmaREven => "LEMMA_R_EVEN",
            IdentityId::LemmaBothOdd => "LEMMA_BOTH_ODD",
            IdentityId::LemmaOddEven => "LEMMA_ODD_EVEN",
            IdentityId::Table1Row1 => "TABLE1_ROW1",
            IdentityId::Table1Row2 => "TABLE1_ROW2",
            IdentityId::Table1Row3 => "TABLE1_ROW3",
            IdentityId::IVariantR1 => "I_VARIANT_R1",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == wanted)
            .ok_or_else(|| format!("unknown identity {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedPrecondition,
}

/// First disagreement between the two sides. `None` symbols mean the side ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub position: u64,
    pub left: Option<u8>,
    pub right: Option<u8>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: Option<u8>| s.map_or("end".to_string(), |v| v.to_string());
        write!(
            f,
            "first mismatch at position {}: left {} vs right {}",
            self.position,
            show(self.left),
            show(self.right)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub params: Params,
    pub n: u32,
    pub status: Status,
    /// Failure description, skip reason, or an annotation on a pass.
    pub detail: Option<String>,
    pub mismatch: Option<Mismatch>,
    pub elapsed: Duration,
}

/// Line-delimited serialized form of a report, fields in this order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub identity: IdentityId,
    pub a: u32,
    pub b: u32,
    pub n: u32,
    pub convention: Convention,
    pub status: Status,
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn to_record(&self) -> ReportRecord {
        ReportRecord {
            identity: self.identity,
            a: self.params.a(),
            b: self.params.b(),
            n: self.n,
            convention: self.params.convention(),
            status: self.status,
            detail: self.detail.clone(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }
}

enum Outcome {
    Pass(Option<String>),
    Fail(String, Option<Mismatch>),
    Skip(String),
}

fn compare(left: &[u8], right: &[u8], what: &str) -> Result<(), Outcome> {
    match first_mismatch(left, right) {
        None => Ok(()),
        Some(i) => {
            let mismatch = Mismatch {
                position: i as u64,
                left: left.get(i).copied(),
                right: right.get(i).copied(),
            };
            Err(Outcome::Fail(format!("{what}: {mismatch}"), Some(mismatch)))
        }
    }
}

fn word_failure(err: WordError) -> Outcome {
    match err {
        WordError::CapExceeded { .. } | WordError::Overflow { .. } => {
            Outcome::Skip(format!("size cap: {err}"))
        }
        other => Outcome::Fail(other.to_string(), None),
    }
}

impl From<WordError> for Outcome {
    fn from(err: WordError) -> Self {
        word_failure(err)
    }
}

fn minimum(params: &Params, n: u32, base: u32) -> Result<(), Outcome> {
    let min = base + u32::from(params.has_unit_parameter());
    if n < min {
        let why = if params.has_unit_parameter() {
            " (a or b is 1)"
        } else {
            ""
        };
        return Err(Outcome::Skip(format!("requires n >= {min}{why}")));
    }
    Ok(())
}

/// Minimum for statements that do not involve `t`; no shift for `a = 1` or `b = 1`.
fn at_least(n: u32, min: u32) -> Result<(), Outcome> {
    if n < min {
        return Err(Outcome::Skip(format!("requires n >= {min}")));
    }
    Ok(())
}

fn case_minimum(params: &Params, n: u32, case: ParityCase) -> Result<(), Outcome> {
    let actual = ParityCase::of(params, n);
    if actual != case {
        return Err(Outcome::Skip(format!(
            "parity case at n={n} is {actual}, identity needs {case}"
        )));
    }
    let min = case.min_level(params);
    if n < min {
        return Err(Outcome::Skip(format!("requires n >= {min} for {case}")));
    }
    Ok(())
}

fn cat(parts: &[(&[u8], u32)]) -> Vec<u8> {
    let mut out = Vec::new();
    for (part, times) in parts {
        for _ in 0..*times {
            out.extend_from_slice(part);
        }
    }
    out
}

/// Suffix the stated parity rule assigns to `f(n)`: `01` for even `n`, `10` for odd.
pub fn stated_suffix(n: u32) -> &'static str {
    if n % 2 == 0 {
        "01"
    } else {
        "10"
    }
}

struct Check<'a> {
    params: &'a Params,
    n: u32,
    oracle: Oracle,
}

impl Check<'_> {
    fn f(&self, k: u32) -> Result<Word, Outcome> {
        Ok(word::word_f(self.params, k)?)
    }

    fn t(&self, k: u32) -> Result<Word, Outcome> {
        Ok(word::word_t(self.params, k)?)
    }

    fn i(&self, k: u32) -> Result<Word, Outcome> {
        Ok(word::word_i_from_overlap(self.params, k)?)
    }

    fn oracle_t(&mut self, k: u32) -> Result<Vec<u8>, Outcome> {
        self.oracle
            .t(k)
            .ok_or_else(|| Outcome::Skip(format!("t({k}) undefined")))
    }

    fn run(&mut self, id: IdentityId) -> Result<Option<String>, Outcome> {
        let n = self.n;
        let params = *self.params;
        let pair = params.rs(n);
        let (r, s) = (pair.r, pair.s);
        match id {
            IdentityId::SuffixParity => {
                at_least(n, 3)?;
                let suffix = word::last_two(&params, n)?;
                let reference = self.oracle.f(n);
                compare(&reference[reference.len() - 2..], suffix.symbols(), "suffix")?;
                let observed = suffix.to_string();
                if observed != "01" && observed != "10" {
                    return Err(Outcome::Fail(format!("suffix {observed} is neither 01 nor 10"), None));
                }
                if n > 3 {
                    let before = word::last_two(&params, n - 1)?.to_string();
                    if before == observed {
                        return Err(Outcome::Fail(
                            format!("suffix {observed} at n={n} repeats the suffix at n={}", n - 1),
                            None,
                        ));
                    }
                }
                let stated = stated_suffix(n);
                let parity = if n % 2 == 0 { "even" } else { "odd" };
                let verdict = if stated == observed { "agrees" } else { "differs" };
                Ok(Some(format!(
                    "observed {observed} at {parity} n; stated direction {stated} {verdict}"
                )))
            }
            IdentityId::Palindrome => {
                at_least(n, 3)?;
                let p = word::palindromic_prefix(&params, n)?;
                let reference = self.oracle.f(n);
                compare(&reference[..reference.len() - 2], p.symbols(), "prefix")?;
                let reversed: Vec<u8> = p.symbols().iter().rev().copied().collect();
                compare(p.symbols(), &reversed, "palindrome")?;
                Ok(None)
            }
            IdentityId::Exchange => {
                at_least(n, 3)?;
                let lo = self.oracle.f(n - 2);
                if lo.len() < 2 {
                    return Err(Outcome::Skip(format!("p({}) undefined", n - 2)));
                }
                let hi = self.oracle.f(n - 1);
                let left = cat(&[(&hi, 1), (&lo[..lo.len() - 2], 1)]);
                let right = Word::concat([
                    &self.f(n - 2)?,
                    &word::palindromic_prefix(&params, n - 1)?,
                ]);
                compare(&left, right.symbols(), "exchange")?;
                Ok(None)
            }
            IdentityId::SwapFt | IdentityId::SwapFf => {
                minimum(&params, n, 5)?;
                let hi = self.oracle.f(n - 1);
                let (left, right) = if id == IdentityId::SwapFt {
                    let lo = self.oracle.f(n - 2);
                    (
                        cat(&[(&hi, 1), (&lo, 1)]),
                        Word::concat([&self.f(n - 2)?, &self.t(n - 1)?]),
                    )
                } else {
                    let lo_t = self.oracle_t(n - 2)?;
                    (
                        cat(&[(&hi, 1), (&lo_t, 1)]),
                        Word::concat([&self.f(n - 2)?, &self.f(n - 1)?]),
                    )
                };
                compare(&left, right.symbols(), "swap")?;
                Ok(None)
            }
            IdentityId::BoundaryOverlap => {
                minimum(&params, n, 5)?;
                if r < 2 {
                    return Err(Outcome::Skip(format!("requires r(n) >= 2, r({n}) = {r}")));
                }
                let shared = self.f(n - 1)?.repeat(r - 2);
                let shared = Word::concat([&shared, &self.f(n - 2)?]);
                let len = shared.len();
                let f = self.oracle.f(n);
                let t = self.oracle_t(n)?;
                compare(&f[f.len() - len..], shared.symbols(), "suffix of f(n)")?;
                compare(&t[..len], shared.symbols(), "prefix of t(n)")?;
                Ok(None)
            }
            IdentityId::IEqualsFft => {
                minimum(&params, n, 5)?;
                let hi = self.oracle.f(n - 1);
                let t = self.oracle_t(n)?;
                let left = cat(&[(&hi, 2), (&t, 1)]);
                compare(&left, self.i(n)?.symbols(), "I(n)")?;
                let path = if r == 1 { "overlap f,f,t (r = 1)" } else { "overlap f,t" };
                Ok(Some(format!("built via {path}")))
            }
            IdentityId::IVariantR1 => {
                minimum(&params, n, 5)?;
                if r != 1 {
                    return Err(Outcome::Skip(format!("requires r(n) = 1, r({n}) = {r}")));
                }
                let lo = self.oracle.f(n - 2);
                let len = lo.len();
                let f = self.f(n)?;
                let t = self.t(n)?;
                compare(f.suffix(len), &lo, "suffix of f(n)")?;
                compare(f.prefix(len), &lo, "prefix of f(n)")?;
                compare(t.prefix(len), &lo, "prefix of t(n)")?;
                let hi = self.oracle.f(n - 1);
                let tn = self.oracle_t(n)?;
                let left = cat(&[(&hi, 2), (&tn, 1)]);
                compare(&left, self.i(n)?.symbols(), "I(n)")?;
                Ok(None)
            }
            IdentityId::FSquared => {
                minimum(&params, n, 6)?;
                let f = self.oracle.f(n);
                let left = cat(&[(&f, 2)]);
                let mut right = self.f(n - 1)?.repeat(r);
                right.append(&self.i(n - 1)?);
                right.append_n(&self.t(n - 1)?, r - 1);
                compare(&left, right.symbols(), "f(n)^2")?;
                Ok(None)
            }
            IdentityId::LemmaREven => {
                case_minimum(&params, n, ParityCase::EvenR)?;
                let (f2, i2, t2) = (self.f(n - 2)?, self.i(n - 2)?, self.t(n - 2)?);
                let mut group = f2.repeat(s);
                group.append(&i2).append_n(&t2, s - 1);
                let mut right = group.repeat(r / 2);
                right.append(&f2);
                compare(&self.oracle.f(n), right.symbols(), "f(n)")?;
                Ok(None)
            }
            IdentityId::LemmaBothOdd => {
                case_minimum(&params, n, ParityCase::BothOdd)?;
                let sq = self.f(n - 2)?.repeat(2);
                let (f3, t3) = (self.f(n - 3)?, self.t(n - 3)?);
                let mut block = sq.repeat((s + 1) / 2);
                block.append(&t3).append_n(&sq, (s - 1) / 2).append(&f3);
                let mut right = block.repeat((r - 1) / 2);
                right.append_n(&sq, (s + 1) / 2).append(&t3);
                compare(&self.oracle.f(n), right.symbols(), "f(n)")?;
                Ok(None)
            }
            IdentityId::LemmaOddEven => {
                case_minimum(&params, n, ParityCase::OddEven)?;
                let sq = self.f(n - 3)?.repeat(2);
                let (f4, t4) = (self.f(n - 4)?, self.t(n - 4)?);
                let mut x = sq.repeat((r + 1) / 2);
                x.append(&t4).append_n(&sq, (r - 1) / 2).append(&f4);
                let head = sq.repeat((r + 1) / 2);
                let mut braced = x.repeat(s / 2);
                braced
                    .append(&head)
                    .append(&f4)
                    .append_n(&x, (s - 2) / 2)
                    .append(&head)
                    .append(&t4);
                let mut right = braced.repeat((r - 1) / 2);
                right.append_n(&x, s / 2).append(&head).append(&f4);
                compare(&self.oracle.f(n), right.symbols(), "f(n)")?;
                Ok(None)
            }
            IdentityId::Table1Row1 | IdentityId::Table1Row2 | IdentityId::Table1Row3 => {
                let case = match id {
                    IdentityId::Table1Row1 => ParityCase::EvenR,
                    IdentityId::Table1Row2 => ParityCase::BothOdd,
                    _ => ParityCase::OddEven,
                };
                case_minimum(&params, n, case)?;
                let structure = decompose(&params, n, DecomposeOptions::default())
                    .map_err(|e| Outcome::Fail(e.to_string(), None))?;
                let expanded =
                    expand_all_i(&structure).map_err(|e| Outcome::Fail(e.to_string(), None))?;
                let reference = self.oracle.f(n);
                for (label, s) in [("cells", &structure), ("expanded cells", &expanded)] {
                    s.validate()
                        .map_err(|e| Outcome::Fail(format!("{label}: {e}"), None))?;
                    let flat = flatten(s).map_err(|e| Outcome::Fail(format!("{label}: {e}"), None))?;
                    compare(&reference, flat.symbols(), label)?;
                }
                Ok(Some(format!("{} cells at level {}", structure.cells.len(), n - case.drop())))
            }
        }
    }
}

/// `Instant` is unavailable on wasm32-unknown-unknown; elapsed reads zero there.
struct Stopwatch(Option<Instant>);

impl Stopwatch {
    fn start() -> Self {
        #[cfg(not(target_arch = "wasm32"))]
        return Stopwatch(Some(Instant::now()));
        #[cfg(target_arch = "wasm32")]
        return Stopwatch(None);
    }

    fn elapsed(&self) -> Duration {
        self.0.map_or(Duration::ZERO, |t| t.elapsed())
    }
}

/// Checks one identity at one `(a, b, n)`. Precondition failures and words
/// beyond the size cap are reported as skipped, never as errors.
pub fn verify_identity(id: IdentityId, params: &Params, n: u32) -> VerificationReport {
    let start = Stopwatch::start();
    let fits = word::length_f(params, n)
        .map(|l| l <= word::DEFAULT_LENGTH_CAP / 2)
        .unwrap_or(false);
    let outcome = if !fits {
        Outcome::Skip(format!(
            "size cap: f(n={n}) exceeds {} symbols",
            word::DEFAULT_LENGTH_CAP / 2
        ))
    } else {
        let mut check = Check {
            params,
            n,
            oracle: Oracle::new(params),
        };
        match check.run(id) {
            Ok(note) => Outcome::Pass(note),
            Err(outcome) => outcome,
        }
    };
    let (status, detail, mismatch) = match outcome {
        Outcome::Pass(note) => (Status::Pass, note, None),
        Outcome::Fail(why, mismatch) => (Status::Fail, Some(why), mismatch),
        Outcome::Skip(why) => (Status::SkippedPrecondition, Some(why), None),
    };
    VerificationReport {
        identity: id,
        params: *params,
        n,
        status,
        detail,
        mismatch,
        elapsed: start.elapsed(),
    }
}

/// Parameter grid for [`verify_grid`].
#[derive(Debug, Clone)]
pub struct Grid {
    pub a: RangeInclusive<u32>,
    pub b: RangeInclusive<u32>,
    /// Largest `n`; `None` runs until `f(n)` outgrows `length_cap`.
    pub n_max: Option<u32>,
    pub length_cap: u64,
    pub ids: Vec<IdentityId>,
    /// Use the classical-swapped convention at `a = b = 1`.
    pub classical_unit: bool,
}

impl Grid {
    pub fn new(a: RangeInclusive<u32>, b: RangeInclusive<u32>) -> Self {
        Grid {
            a,
            b,
            n_max: None,
            length_cap: DEFAULT_GRID_CAP,
            ids: IdentityId::ALL.to_vec(),
            classical_unit: true,
        }
    }

    pub fn params_for(&self, a: u32, b: u32) -> Params {
        if self.classical_unit && (a, b) == (1, 1) {
            Params::classical()
        } else {
            Params::new(a, b).expect("grid values are positive")
        }
    }

    /// Every `(params, n)` in report order.
    pub fn points(&self) -> Vec<(Params, u32)> {
        let mut points = Vec::new();
        for a in self.a.clone().filter(|&a| a >= 1) {
            for b in self.b.clone().filter(|&b| b >= 1) {
                let params = self.params_for(a, b);
                let mut n = 0u32;
                loop {
                    if self.n_max.is_some_and(|max| n > max) {
                        break;
                    }
                    match word::length_f(&params, n) {
                        Ok(len) if len <= self.length_cap => points.push((params, n)),
                        _ => break,
                    }
                    n += 1;
                }
            }
        }
        points
    }
}

/// Runs every identity in `grid.ids` at every grid point, in the order
/// a, b, n, identity. Work fans out across threads; order is unaffected.
pub fn verify_grid(grid: &Grid) -> Vec<VerificationReport> {
    let mut ids = grid.ids.clone();
    ids.sort();
    ids.dedup();
    if ids.is_empty() {
        return Vec::new();
    }
    let jobs: Vec<(Params, u32, IdentityId)> = grid
        .points()
        .into_iter()
        .flat_map(|(p, n)| ids.iter().map(move |&id| (p, n, id)))
        .collect();
    jobs.into_par_iter()
        .map(|(p, n, id)| verify_identity(id, &p, n))
        .collect()
}

/// Counts of pass, fail and skipped reports.
pub fn tally(reports: &[VerificationReport]) -> (usize, usize, usize) {
    reports.iter().fold((0, 0, 0), |(p, f, s), r| match r.status {
        Status::Pass => (p + 1, f, s),
        Status::Fail => (p, f + 1, s),
        Status::SkippedPrecondition => (p, f, s + 1),
    })
}
