//! Positioned copies of `f`, `t` and `I` words inside a parent word.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{self, Convention, Params, Word, WordError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    F,
    T,
    I,
}

impl CellKind {
    /// F becomes T and T becomes F; I is unchanged.
    pub fn toggled(self) -> Self {
        match self {
            CellKind::F => CellKind::T,
            CellKind::T => CellKind::F,
            CellKind::I => CellKind::I,
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CellKind::F => "F",
            CellKind::T => "T",
            CellKind::I => "I",
        };
        f.write_str(s)
    }
}

/// One copy of `f(level)`, `t(level)` or `I(level)` starting at `offset` in the parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub kind: CellKind,
    pub level: u32,
    pub offset: u64,
    pub length: u64,
}

impl Cell {
    pub fn end(&self) -> u64 {
        self.offset + self.length
    }
}

/// Length of the word a cell of this kind and level refers to.
pub fn cell_length(params: &Params, kind: CellKind, level: u32) -> Result<u64, WordError> {
    match kind {
        CellKind::F | CellKind::T => word::length_f(params, level),
        CellKind::I => word::length_i(params, level),
    }
}

/// The word a cell structure claims to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParentWord {
    /// `f(root_level)`.
    F,
    /// `f(root_level) f(root_level)`.
    FSquared,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellStructure {
    pub params: Params,
    pub root_level: u32,
    pub parent: ParentWord,
    pub parent_length: u64,
    /// Level drop from the parent to its cells.
    pub period: u32,
    /// False for a single both-odd step with `a != b`, which must be applied
    /// twice before the pattern repeats.
    pub self_similar: bool,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("first cell starts at {0}, expected 0")]
    BadStart(u64),
    #[error("cells out of order at index {index}")]
    Unsorted { index: usize },
    #[error("gap at position {position} before cell {index}")]
    Gap { position: u64, index: usize },
    #[error("cells end at {end}, parent has length {parent_length}")]
    BadEnd { end: u64, parent_length: u64 },
    #[error("cell {index} has length {actual}, its word has length {expected}")]
    LengthMismatch {
        index: usize,
        expected: u64,
        actual: u64,
    },
    #[error("structure has no cells")]
    Empty,
    #[error(transparent)]
    Word(#[from] WordError),
}

impl CellStructure {
    /// Checks ordering, gap-free coverage and per-cell lengths. Overlap
    /// consistency needs the words themselves and is left to [`flatten`].
    pub fn validate(&self) -> Result<(), StructureError> {
        let first = self.cells.first().ok_or(StructureError::Empty)?;
        if first.offset != 0 {
            return Err(StructureError::BadStart(first.offset));
        }
        let mut reach = 0u64;
        for (index, cell) in self.cells.iter().enumerate() {
            if index > 0 && cell.offset < self.cells[index - 1].offset {
                return Err(StructureError::Unsorted { index });
            }
            if cell.offset > reach {
                return Err(StructureError::Gap {
                    position: reach,
                    index,
                });
            }
            let expected = cell_length(&self.params, cell.kind, cell.level)?;
            if expected != cell.length {
                return Err(StructureError::LengthMismatch {
                    index,
                    expected,
                    actual: cell.length,
                });
            }
            reach = reach.max(cell.end());
        }
        if reach != self.parent_length {
            return Err(StructureError::BadEnd {
                end: reach,
                parent_length: self.parent_length,
            });
        }
        Ok(())
    }

    /// Number of cells of each kind, in the order F, T, I.
    pub fn kind_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for cell in &self.cells {
            counts[cell.kind as usize] += 1;
        }
        counts
    }

    /// Distinct cell levels, ascending.
    pub fn levels(&self) -> Vec<u32> {
        let mut levels: Vec<u32> = self.cells.iter().map(|c| c.level).collect();
        levels.sort_unstable();
        levels.dedup();
        levels
    }

    /// Total length of the regions shared by a cell and the cells before it.
    pub fn overlap_total(&self) -> u64 {
        let mut reach = 0u64;
        let mut shared = 0u64;
        for cell in &self.cells {
            shared += reach.saturating_sub(cell.offset).min(cell.length);
            reach = reach.max(cell.end());
        }
        shared
    }

    pub fn to_record(&self) -> StructureRecord {
        StructureRecord {
            a: self.params.a(),
            b: self.params.b(),
            n: self.root_level,
            convention: self.params.convention(),
            period: self.period,
            self_similar: self.self_similar,
            cells: self.cells.clone(),
        }
    }

    /// Single-line JSON document; see [`StructureRecord`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RecordError> {
        let record: StructureRecord = serde_json::from_str(text)?;
        record.into_structure()
    }
}

/// Flat serialized form of a decomposition of `f(a,b,n)`.
///
/// Fields appear in exactly this order:
///
/// ```text
/// {"a":2,"b":3,"n":8,"convention":"standard","period":2,"self_similar":true,
///  "cells":[{"kind":"F","level":6,"offset":0,"length":307}, ...]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureRecord {
    pub a: u32,
    pub b: u32,
    pub n: u32,
    pub convention: Convention,
    pub period: u32,
    pub self_similar: bool,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed structure record: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid structure: {0}")]
    Structure(#[from] StructureError),
}

impl StructureRecord {
    pub fn into_structure(self) -> Result<CellStructure, RecordError> {
        let params = Params::with_convention(self.a, self.b, self.convention)?;
        let structure = CellStructure {
            params,
            root_level: self.n,
            parent: ParentWord::F,
            parent_length: word::length_f(&params, self.n)?,
            period: self.period,
            self_similar: self.self_similar,
            cells: self.cells,
        };
        structure.validate()?;
        Ok(structure)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("cell is {0}, not I")]
    NotI(CellKind),
    #[error("I cell at level {level} is below the minimum level {min}")]
    LevelTooSmall { level: u32, min: u32 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Replaces an I cell by the f/t copies it is made of.
///
/// With `r(m) >= 2` that is `F` at the cell offset and `T` at `+2 L(m-1)`;
/// with `r(m) = 1` it is `F, F, T` spaced `L(m) - L(m-2)` apart.
pub fn expand_i(cell: &Cell, params: &Params) -> Result<Vec<Cell>, ExpandError> {
    if cell.kind != CellKind::I {
        return Err(ExpandError::NotI(cell.kind));
    }
    let m = cell.level;
    if m < word::MIN_I_LEVEL {
        return Err(ExpandError::LevelTooSmall {
            level: m,
            min: word::MIN_I_LEVEL,
        });
    }
    let l = word::lengths(params, m)?;
    let (lm, lm1, lm2) = (l[m as usize], l[m as usize - 1], l[m as usize - 2]);
    let at = |kind, offset| Cell {
        kind,
        level: m,
        offset: cell.offset + offset,
        length: lm,
    };
    Ok(if params.r(m) >= 2 {
        vec![at(CellKind::F, 0), at(CellKind::T, 2 * lm1)]
    } else {
        let step = lm - lm2;
        vec![
            at(CellKind::F, 0),
            at(CellKind::F, step),
            at(CellKind::T, 2 * step),
        ]
    })
}

/// The same structure with every I cell replaced by its f/t copies.
pub fn expand_all_i(structure: &CellStructure) -> Result<CellStructure, ExpandError> {
    let mut cells = Vec::with_capacity(structure.cells.len() * 2);
    for cell in &structure.cells {
        if cell.kind == CellKind::I {
            cells.extend(expand_i(cell, &structure.params)?);
        } else {
            cells.push(*cell);
        }
    }
    cells.sort_by_key(|c| c.offset);
    Ok(CellStructure {
        cells,
        ..structure.clone()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("overlap conflict at position {position} between cell {first} and cell {second}")]
    Conflict {
        position: u64,
        first: usize,
        second: usize,
    },
    #[error("gap at position {position}")]
    Gap { position: u64 },
    #[error("cell {index} ends at {end}, past the parent length {parent_length}")]
    OutOfBounds {
        index: usize,
        end: u64,
        parent_length: u64,
    },
    #[error("cell {index} claims length {claimed}, its word has length {actual}")]
    LengthMismatch {
        index: usize,
        claimed: u64,
        actual: u64,
    },
    #[error(transparent)]
    Word(#[from] WordError),
}

const UNOWNED: u32 = u32::MAX;

/// Writes every cell's word at its offset and returns the resulting parent word.
///
/// A position written twice with different symbols is a conflict; a position
/// never written is a gap.
pub fn flatten(structure: &CellStructure) -> Result<Word, FlattenError> {
    let params = &structure.params;
    let total = structure.parent_length as usize;
    let mut buffer = vec![0u8; total];
    let mut owner = vec![UNOWNED; total];
    let mut words: HashMap<(CellKind, u32), Word> = HashMap::new();

    for (index, cell) in structure.cells.iter().enumerate() {
        if cell.end() > structure.parent_length {
            return Err(FlattenError::OutOfBounds {
                index,
                end: cell.end(),
                parent_length: structure.parent_length,
            });
        }
        let key = (cell.kind, cell.level);
        if !words.contains_key(&key) {
            let w = match cell.kind {
                CellKind::F => word::word_f(params, cell.level)?,
                CellKind::T => word::word_t(params, cell.level)?,
                CellKind::I => word::word_i(params, cell.level)?,
            };
            words.insert(key, w);
        }
        let w = &words[&key];
        if w.len() as u64 != cell.length {
            return Err(FlattenError::LengthMismatch {
                index,
                claimed: cell.length,
                actual: w.len() as u64,
            });
        }
        let start = cell.offset as usize;
        for (i, &symbol) in w.symbols().iter().enumerate() {
            let pos = start + i;
            match owner[pos] {
                UNOWNED => {
                    buffer[pos] = symbol;
                    owner[pos] = index as u32;
                }
                prev if buffer[pos] != symbol => {
                    return Err(FlattenError::Conflict {
                        position: pos as u64,
                        first: prev as usize,
                        second: index,
                    });
                }
                _ => {}
            }
        }
    }
    if let Some(position) = owner.iter().position(|&o| o == UNOWNED) {
        return Err(FlattenError::Gap {
            position: position as u64,
        });
    }
    Ok(Word::new(buffer).expect("cell words are binary"))
}
