//! Overlapping self-similar decompositions of `f(a,b,n)`.
//!
//! Every decomposition is built from the block
//!
//! ```text
//! G(k, e) = f(k)^e I(k) t(k)^(e-1)        (= f(k+1)^2 when e = r(k+1))
//! ```
//!
//! laid out at level `k = n-2`, `n-3` or `n-4` according to the parities of
//! `r = r(n)` and `s = s(n)`. Offsets come from the length recurrence alone.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cell::{expand_all_i, Cell, CellKind, CellStructure, ExpandError, ParentWord};
use crate::word::{self, Params, WordError};

/// Which row of the parity table governs `f(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCase {
    /// `r` even; cells at level `n-2`.
    EvenR,
    /// `r` and `s` odd; cells at level `n-3`.
    BothOdd,
    /// `r` odd, `s` even; cells at level `n-4`.
    OddEven,
}

impl ParityCase {
    pub fn of(params: &Params, n: u32) -> Self {
        let pair = params.rs(n);
        match (pair.r % 2 == 0, pair.s % 2 == 0) {
            (true, _) => ParityCase::EvenR,
            (false, false) => ParityCase::BothOdd,
            (false, true) => ParityCase::OddEven,
        }
    }

    /// Level drop of one decomposition step.
    pub fn drop(self) -> u32 {
        match self {
            ParityCase::EvenR => 2,
            ParityCase::BothOdd => 3,
            ParityCase::OddEven => 4,
        }
    }

    fn base_min(self) -> u32 {
        match self {
            ParityCase::EvenR => 7,
            ParityCase::BothOdd => 8,
            ParityCase::OddEven => 9,
        }
    }

    /// Smallest `n` at which this case's decomposition is asserted.
    /// One higher when `a = 1` or `b = 1`.
    pub fn min_level(self, params: &Params) -> u32 {
        self.base_min() + u32::from(params.has_unit_parameter())
    }

    /// Row of the decomposition table, 1-based.
    pub fn row(self) -> u32 {
        match self {
            ParityCase::EvenR => 1,
            ParityCase::BothOdd => 2,
            ParityCase::OddEven => 3,
        }
    }
}

impl fmt::Display for ParityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParityCase::EvenR => "r even",
            ParityCase::BothOdd => "r, s odd",
            ParityCase::OddEven => "r odd, s even",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("n too small for this parity case ({case}): need n >= {min}, got n = {n}")]
    TooSmall { n: u32, min: u32, case: ParityCase },
    #[error("f(n={n}) falls in case {actual}, not {expected}")]
    WrongCase {
        n: u32,
        expected: ParityCase,
        actual: ParityCase,
    },
    #[error("depth exhausts minimum level: cells at level {level} need level >= {min}")]
    DepthExhausted { level: u32, min: u32 },
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Period of the self-similar structure: 2 when `a` and `b` are both even,
/// 4 when exactly one is odd, 6 when both are odd.
pub fn period_l(params: &Params) -> u32 {
    match (params.a() % 2, params.b() % 2) {
        (0, 0) => 2,
        (1, 1) => 6,
        _ => 4,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Replace every I cell by its f/t copies.
    pub expand_i: bool,
    /// In the both-odd case, apply the step twice (drop of 6).
    pub compose_twice: bool,
}

/// Lays cells end to end from offset 0.
struct Layout<'a> {
    params: &'a Params,
    lengths: Vec<u64>,
    cells: Vec<Cell>,
    cursor: u64,
}

impl<'a> Layout<'a> {
    fn new(params: &'a Params, top: u32) -> Result<Self, WordError> {
        Ok(Layout {
            params,
            lengths: word::lengths(params, top)?,
            cells: Vec::new(),
            cursor: 0,
        })
    }

    fn push(&mut self, kind: CellKind, level: u32, times: u32) {
        let l = &self.lengths;
        let length = match kind {
            CellKind::F | CellKind::T => l[level as usize],
            CellKind::I => l[level as usize] + 2 * l[level as usize - 1],
        };
        for _ in 0..times {
            self.cells.push(Cell {
                kind,
                level,
                offset: self.cursor,
                length,
            });
            self.cursor += length;
        }
    }

    /// `(f(k)^e I(k) t(k)^(e-1))^times`.
    fn block(&mut self, level: u32, exponent: u32, times: u32) {
        for _ in 0..times {
            self.push(CellKind::F, level, exponent);
            self.push(CellKind::I, level, 1);
            self.push(CellKind::T, level, exponent - 1);
        }
    }

    fn finish(
        self,
        root_level: u32,
        parent: ParentWord,
        period: u32,
        self_similar: bool,
    ) -> CellStructure {
        CellStructure {
            params: *self.params,
            root_level,
            parent,
            parent_length: self.cursor,
            period,
            self_similar,
            cells: self.cells,
        }
    }
}

fn require(params: &Params, n: u32, expected: ParityCase) -> Result<(), DecomposeError> {
    let actual = ParityCase::of(params, n);
    if actual != expected {
        return Err(DecomposeError::WrongCase {
            n,
            expected,
            actual,
        });
    }
    let min = expected.min_level(params);
    if n < min {
        return Err(DecomposeError::TooSmall {
            n,
            min,
            case: expected,
        });
    }
    Ok(())
}

/// `r` even:
///
/// ```text
/// f(n) = (f^s I t^(s-1))^(r/2) f        all at level n-2
/// ```
pub fn decompose_even_r(params: &Params, n: u32) -> Result<CellStructure, DecomposeError> {
    require(params, n, ParityCase::EvenR)?;
    let pair = params.rs(n);
    let k = n - 2;
    let mut layout = Layout::new(params, n)?;
    layout.block(k, pair.s, pair.r / 2);
    layout.push(CellKind::F, k, 1);
    Ok(layout.finish(n, ParentWord::F, 2, true))
}

/// `r` and `s` odd, with `G = f^r I t^(r-1)` at level n-3:
///
/// ```text
/// f(n) = [G^((s+1)/2) t G^((s-1)/2) f]^((r-1)/2) G^((s+1)/2) t
/// ```
///
/// `G` is `f(n-2)^2`, so its exponent is `r(n-2) = r(n)`.
pub fn decompose_odd_odd(params: &Params, n: u32) -> Result<CellStructure, DecomposeError> {
    require(params, n, ParityCase::BothOdd)?;
    let pair = params.rs(n);
    let (r, s) = (pair.r, pair.s);
    let k = n - 3;
    let mut layout = Layout::new(params, n)?;
    for _ in 0..(r - 1) / 2 {
        layout.block(k, r, (s + 1) / 2);
        layout.push(CellKind::T, k, 1);
        layout.block(k, r, (s - 1) / 2);
        layout.push(CellKind::F, k, 1);
    }
    layout.block(k, r, (s + 1) / 2);
    layout.push(CellKind::T, k, 1);
    Ok(layout.finish(n, ParentWord::F, 3, params.a() == params.b()))
}

/// `r` odd and `s` even, with `G = f^s I t^(s-1)` at level n-4 and
/// `X = G^((r+1)/2) t G^((r-1)/2) f`:
///
/// ```text
/// f(n) = { X^(s/2) G^((r+1)/2) f X^((s-2)/2) G^((r+1)/2) t }^((r-1)/2)
///        X^(s/2) G^((r+1)/2) f
/// ```
pub fn decompose_odd_even(params: &Params, n: u32) -> Result<CellStructure, DecomposeError> {
    require(params, n, ParityCase::OddEven)?;
    let pair = params.rs(n);
    let (r, s) = (pair.r, pair.s);
    let k = n - 4;
    let mut layout = Layout::new(params, n)?;
    let x = |layout: &mut Layout, times: u32| {
        for _ in 0..times {
            layout.block(k, s, (r + 1) / 2);
            layout.push(CellKind::T, k, 1);
            layout.block(k, s, (r - 1) / 2);
            layout.push(CellKind::F, k, 1);
        }
    };
    for _ in 0..(r - 1) / 2 {
        x(&mut layout, s / 2);
        layout.block(k, s, (r + 1) / 2);
        layout.push(CellKind::F, k, 1);
        x(&mut layout, (s - 2) / 2);
        layout.block(k, s, (r + 1) / 2);
        layout.push(CellKind::T, k, 1);
    }
    x(&mut layout, s / 2);
    layout.block(k, s, (r + 1) / 2);
    layout.push(CellKind::F, k, 1);
    Ok(layout.finish(n, ParentWord::F, 4, true))
}

/// One decomposition step for whichever case `n` falls in.
fn decompose_step(params: &Params, n: u32) -> Result<CellStructure, DecomposeError> {
    let case = ParityCase::of(params, n);
    let min = case.min_level(params);
    if n < min {
        return Err(DecomposeError::TooSmall { n, min, case });
    }
    match case {
        ParityCase::EvenR => decompose_even_r(params, n),
        ParityCase::BothOdd => decompose_odd_odd(params, n),
        ParityCase::OddEven => decompose_odd_even(params, n),
    }
}

/// Decomposes `f(n)` by the parity table, optionally composing the
/// both-odd step with itself and expanding I cells.
pub fn decompose(
    params: &Params,
    n: u32,
    options: DecomposeOptions,
) -> Result<CellStructure, DecomposeError> {
    let mut structure = decompose_step(params, n)?;
    let case = ParityCase::of(params, n);
    if options.compose_twice && case == ParityCase::BothOdd {
        let min = case.min_level(params) + case.drop();
        if n < min {
            return Err(DecomposeError::TooSmall { n, min, case });
        }
        structure = refine(&structure, 1)?;
    }
    if options.expand_i {
        structure = expand_all_i(&structure)?;
    }
    Ok(structure)
}

/// `f(n)^2 = f(n-1)^r I(n-1) t(n-1)^(r-1)` with `r = r(n)`, as cells at level n-1
/// over the doubled parent `f(n) f(n)`.
pub fn expand_f_squared(params: &Params, n: u32) -> Result<CellStructure, DecomposeError> {
    let min = 6 + u32::from(params.has_unit_parameter());
    if n < min {
        return Err(DecomposeError::TooSmall {
            n,
            min,
            case: ParityCase::of(params, n),
        });
    }
    let mut layout = Layout::new(params, n)?;
    layout.block(n - 1, params.r(n), 1);
    Ok(layout.finish(n, ParentWord::FSquared, 1, true))
}

/// Decomposes every cell once more, `depth` times.
///
/// I cells are first split into their f/t copies. A T cell reuses the
/// decomposition of f at its level with the kind of the final cell toggled,
/// since `t` and `f` differ only in the last two symbols and the final cell of
/// every row covers them.
pub fn refine(structure: &CellStructure, depth: u32) -> Result<CellStructure, DecomposeError> {
    let params = structure.params;
    let mut current = structure.clone();
    for _ in 0..depth {
        let expanded = expand_all_i(&current)?;
        let mut cells = Vec::new();
        let mut drop = 0;
        let mut templates: Vec<(u32, CellStructure)> = Vec::new();
        for cell in &expanded.cells {
            let slot = match templates.iter().position(|(level, _)| *level == cell.level) {
                Some(i) => i,
                None => {
                    let t = decompose_step(&params, cell.level).map_err(|e| match e {
                        DecomposeError::TooSmall { n, min, .. } => {
                            DecomposeError::DepthExhausted { level: n, min }
                        }
                        other => other,
                    })?;
                    templates.push((cell.level, t));
                    templates.len() - 1
                }
            };
            let template = &templates[slot].1;
            drop = template.period;
            cells.extend(template.cells.iter().map(|c| Cell {
                offset: c.offset + cell.offset,
                ..*c
            }));
            if cell.kind == CellKind::T {
                let last = cells.last_mut().expect("decompositions are nonempty");
                debug_assert!(last.kind != CellKind::I);
                last.kind = last.kind.toggled();
            }
        }
        cells.sort_by_key(|c| c.offset);
        let period = current.period + drop;
        let self_similar = if ParityCase::of(&params, current.root_level) == ParityCase::BothOdd
            && params.a() != params.b()
            && current.parent == ParentWord::F
        {
            period % 6 == 0
        } else {
            current.self_similar
        };
        current = CellStructure {
            period,
            self_similar,
            cells,
            ..current
        };
    }
    Ok(current)
}

/// Top-level cell count of a row-1 decomposition: `r s + 1`.
pub fn even_r_cell_count(params: &Params, n: u32) -> u64 {
    let pair = params.rs(n);
    pair.r as u64 * pair.s as u64 + 1
}

/// Row-1 cell count after I expansion when `r(n-2) >= 2`: `(r/2)(2s+1) + 1`.
pub fn even_r_expanded_cell_count(params: &Params, n: u32) -> u64 {
    let pair = params.rs(n);
    (pair.r as u64 / 2) * (2 * pair.s as u64 + 1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::flatten;
    use crate::word::word_f;

    fn params(a: u32, b: u32) -> Params {
        Params::new(a, b).unwrap()
    }

    fn kinds(s: &CellStructure) -> String {
        s.cells.iter().map(|c| c.kind.to_string()).collect()
    }

    #[test]
    fn period_values() {
        assert_eq!(period_l(&params(2, 4)), 2);
        assert_eq!(period_l(&params(3, 2)), 4);
        assert_eq!(period_l(&Params::classical()), 6);
    }

    #[test]
    fn even_r_example() {
        let p = params(2, 3);
        let s = decompose_even_r(&p, 8).unwrap();
        assert_eq!(kinds(&s), "FFFITTF");
        assert_eq!(s.levels(), vec![6]);
        assert_eq!(s.cells[3].offset, 921);
        assert_eq!(s.parent_length, 2417);
        assert_eq!(s.period, 2);
        assert_eq!(flatten(&s).unwrap(), word_f(&p, 8).unwrap());
        assert_eq!(kinds(&decompose_even_r(&params(2, 2), 8).unwrap()), "FFITF");
    }

    #[test]
    fn odd_odd_examples() {
        let s = decompose_odd_odd(&Params::classical(), 9).unwrap();
        assert_eq!(kinds(&s), "FIT");
        assert_eq!(s.levels(), vec![6]);
        for (a, b, n) in [(3, 3, 8), (3, 5, 9), (5, 3, 9), (3, 5, 8)] {
            let p = params(a, b);
            let s = decompose_odd_odd(&p, n).unwrap();
            assert_eq!(flatten(&s).unwrap(), word_f(&p, n).unwrap(), "({a},{b},{n})");
            assert_eq!(s.self_similar, a == b);
        }
    }

    #[test]
    fn odd_even_examples() {
        let p = params(3, 2);
        let s = decompose_odd_even(&p, 10).unwrap();
        assert_eq!(s.levels(), vec![6]);
        assert_eq!(flatten(&s).unwrap(), word_f(&p, 10).unwrap());
        let p = params(2, 3);
        let s = decompose_odd_even(&p, 9).unwrap();
        assert_eq!(flatten(&s).unwrap(), word_f(&p, 9).unwrap());
    }

    #[test]
    fn dispatch_follows_parity_table() {
        assert_eq!(ParityCase::of(&params(2, 2), 7), ParityCase::EvenR);
        assert_eq!(ParityCase::of(&params(3, 2), 8), ParityCase::OddEven);
        assert_eq!(ParityCase::of(&params(2, 3), 8), ParityCase::EvenR);
        assert_eq!(ParityCase::of(&params(3, 2), 9), ParityCase::EvenR);
        assert_eq!(ParityCase::of(&params(3, 5), 4), ParityCase::BothOdd);
        let s = decompose(&params(2, 2), 7, DecomposeOptions::default()).unwrap();
        assert_eq!(s.period, 2);
    }

    #[test]
    fn below_minimum_is_an_error() {
        let err = decompose(&params(2, 3), 5, DecomposeOptions::default()).unwrap_err();
        assert_eq!(
            err,
            DecomposeError::TooSmall {
                n: 5,
                min: 9,
                case: ParityCase::OddEven
            }
        );
        let err = decompose(&params(2, 3), 6, DecomposeOptions::default()).unwrap_err();
        assert!(matches!(err, DecomposeError::TooSmall { min: 7, .. }));
        // a = 1 shifts every minimum by one.
        assert!(decompose(&params(1, 2), 7, DecomposeOptions::default()).is_err());
        assert!(decompose(&params(2, 1), 8, DecomposeOptions::default()).is_ok());
    }

    #[test]
    fn wrong_case_is_an_error() {
        assert!(matches!(
            decompose_even_r(&params(3, 3), 9),
            Err(DecomposeError::WrongCase { .. })
        ));
    }

    #[test]
    fn compose_twice_drops_six() {
        let p = params(3, 3);
        let options = DecomposeOptions {
            compose_twice: true,
            ..Default::default()
        };
        let s = decompose(&p, 11, options).unwrap();
        assert_eq!(s.period, 6);
        assert!(s.self_similar);
        assert_eq!(s.levels(), vec![5]);
        assert_eq!(flatten(&s).unwrap(), word_f(&p, 11).unwrap());
        assert!(matches!(
            decompose(&p, 10, options),
            Err(DecomposeError::TooSmall { min: 11, .. })
        ));
    }

    #[test]
    fn f_squared_examples() {
        let p = params(2, 3);
        let s = expand_f_squared(&p, 6).unwrap();
        assert_eq!(kinds(&s), "FFIT");
        assert_eq!(s.levels(), vec![5]);
        assert_eq!(s.parent_length, 614);
        let s7 = expand_f_squared(&p, 7).unwrap();
        assert_eq!(kinds(&s7), "FFFITT");
        for (n, s) in [(6, s), (7, s7)] {
            let f = word_f(&p, n).unwrap();
            assert_eq!(flatten(&s).unwrap(), f.repeat(2));
        }
    }

    #[test]
    fn refine_examples() {
        let p = params(2, 2);
        let s = decompose(&p, 9, DecomposeOptions::default()).unwrap();
        let refined = refine(&s, 1).unwrap();
        assert_eq!(refined.levels(), vec![5]);
        assert_eq!(refined.period, 4);
        refined.validate().unwrap();
        assert_eq!(flatten(&refined).unwrap(), word_f(&p, 9).unwrap());
        assert_eq!(refine(&s, 0).unwrap(), s);
        assert!(matches!(
            refine(&s, 2),
            Err(DecomposeError::DepthExhausted { level: 5, min: 7 })
        ));
    }

    #[test]
    fn row_one_counts() {
        for (a, b, n) in [(2, 3, 8), (2, 2, 8), (4, 3, 10), (2, 5, 8)] {
            let p = params(a, b);
            let s = decompose(&p, n, DecomposeOptions::default()).unwrap();
            assert_eq!(s.cells.len() as u64, even_r_cell_count(&p, n));
            let e = expand_all_i(&s).unwrap();
            assert_eq!(e.cells.len() as u64, even_r_expanded_cell_count(&p, n));
        }
    }
}
