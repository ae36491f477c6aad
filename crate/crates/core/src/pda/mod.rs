//! Placement delivery arrays.
//!
//! A `(K, F, Z, S)` PDA is an `F x K` array of stars and ordinary symbols
//! `1..=S` in which every column holds exactly `Z` stars, and any two cells
//! sharing a symbol sit in distinct rows and columns with stars at the two
//! opposite corners of their 2x2 sub-array. Rows index packets, columns index
//! users: a star means the user caches that packet, a shared symbol means one
//! multicast block serves all of its cells.

mod bounds;
mod text;

pub use bounds::{lsub_parameters, min_subpacketization, symbol_count_bound, LsubParameters, SymbolCountBound};
pub use text::{parse_pda, render_pda};

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{frac, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdaError {
    #[error("empty array")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("ordinary symbols are 1-based; found 0 at ({row}, {col})")]
    ZeroSymbol { row: usize, col: usize },
    #[error("column {col} has {stars} stars, column 1 has {expected}")]
    UnequalStarCount { col: usize, stars: usize, expected: usize },
    #[error("symbol {0} does not occur although larger symbols do")]
    MissingSymbol(u32),
    #[error("symbol {symbol} repeats within a row or column at {first:?} and {second:?}")]
    CollisionSameRowOrColumn { symbol: u32, first: (usize, usize), second: (usize, usize) },
    #[error("symbol {symbol} at {first:?} and {second:?} lacks stars at the opposite corners")]
    MissingStarPair { symbol: u32, first: (usize, usize), second: (usize, usize) },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parameter out of range: {0}")]
    Domain(String),
}

/// One cell of a PDA. Symbols are 1-based; a star is never encoded as 0.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PdaEntry {
    Star,
    Ordinary(u32),
}

impl PdaEntry {
    pub fn is_star(self) -> bool {
        matches!(self, PdaEntry::Star)
    }

    pub fn symbol(self) -> Option<u32> {
        match self {
            PdaEntry::Star => None,
            PdaEntry::Ordinary(s) => Some(s),
        }
    }
}

impl fmt::Display for PdaEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdaEntry::Star => f.write_str("*"),
            PdaEntry::Ordinary(s) => write!(f, "{s}"),
        }
    }
}

/// A validated PDA. Rows and columns are 0-based in the API; symbols 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pda {
    k: usize,
    f: usize,
    z: usize,
    s: usize,
    entries: Vec<PdaEntry>,
    // occurrences[s - 1] = cells holding symbol s, row-major order
    occurrences: Vec<Vec<(usize, usize)>>,
}

impl Pda {
    /// Checks `grid` (rows of equal length) against the PDA conditions.
    pub fn validate(grid: Vec<Vec<PdaEntry>>) -> Result<Pda, PdaError> {
        let f = grid.len();
        if f == 0 || grid[0].is_empty() {
            return Err(PdaError::Empty);
        }
        let k = grid[0].len();
        for (row, cells) in grid.iter().enumerate() {
            if cells.len() != k {
                return Err(PdaError::Ragged { row: row + 1, len: cells.len(), expected: k });
            }
            if let Some(col) = cells.iter().position(|&e| e == PdaEntry::Ordinary(0)) {
                return Err(PdaError::ZeroSymbol { row: row + 1, col: col + 1 });
            }
        }
        let stars_in = |col: usize| grid.iter().filter(|r| r[col].is_star()).count();
        let z = stars_in(0);
        for col in 1..k {
            let stars = stars_in(col);
            if stars != z {
                return Err(PdaError::UnequalStarCount { col: col + 1, stars, expected: z });
            }
        }

        let s = grid.iter().flatten().filter_map(|e| e.symbol()).max().unwrap_or(0) as usize;
        let mut occurrences = vec![Vec::new(); s];
        for (i, cells) in grid.iter().enumerate() {
            for (j, e) in cells.iter().enumerate() {
                if let Some(sym) = e.symbol() {
                    occurrences[sym as usize - 1].push((i, j));
                }
            }
        }
        if let Some(missing) = occurrences.iter().position(|o| o.is_empty()) {
            return Err(PdaError::MissingSymbol(missing as u32 + 1));
        }
        for (idx, cells) in occurrences.iter().enumerate() {
            let symbol = idx as u32 + 1;
            for (&(i, j), &(i2, j2)) in cells.iter().tuple_combinations() {
                let first = (i + 1, j + 1);
                let second = (i2 + 1, j2 + 1);
                if i == i2 || j == j2 {
                    return Err(PdaError::CollisionSameRowOrColumn { symbol, first, second });
                }
                if !grid[i][j2].is_star() || !grid[i2][j].is_star() {
                    return Err(PdaError::MissingStarPair { symbol, first, second });
                }
            }
        }
        Ok(Pda { k, f, z, s, entries: grid.into_iter().flatten().collect(), occurrences })
    }

    /// Number of columns (users).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of rows (subpacketization).
    pub fn f(&self) -> usize {
        self.f
    }

    /// Stars per column.
    pub fn z(&self) -> usize {
        self.z
    }

    /// Number of distinct ordinary symbols.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn params(&self) -> (usize, usize, usize, usize) {
        (self.k, self.f, self.z, self.s)
    }

    pub fn entry(&self, row: usize, col: usize) -> PdaEntry {
        self.entries[row * self.k + col]
    }

    pub fn row(&self, row: usize) -> &[PdaEntry] {
        &self.entries[row * self.k..(row + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[PdaEntry]> {
        self.entries.chunks(self.k)
    }

    /// Cells `(row, col)` holding ordinary symbol `symbol` (1-based).
    pub fn occurrences(&self, symbol: u32) -> &[(usize, usize)] {
        &self.occurrences[symbol as usize - 1]
    }

    /// Number of ordinary cells, `K (F - Z)`.
    pub fn ordinary_count(&self) -> usize {
        self.k * (self.f - self.z)
    }

    pub fn to_grid(&self) -> Vec<Vec<PdaEntry>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// `Some(g)` when every symbol occurs exactly `g` times. An array with no
    /// ordinary symbols has no regularity.
    pub fn regularity(&self) -> Option<usize> {
        let first = self.occurrences.first()?.len();
        self.occurrences.iter().all(|o| o.len() == first).then_some(first)
    }

    /// Relabels symbols in order of first appearance, row-major.
    pub fn canonical(&self) -> Pda {
        let mut relabel = HashMap::new();
        let entries: Vec<PdaEntry> = self
            .entries
            .iter()
            .map(|&e| match e {
                PdaEntry::Star => PdaEntry::Star,
                PdaEntry::Ordinary(s) => {
                    let next = relabel.len() as u32 + 1;
                    PdaEntry::Ordinary(*relabel.entry(s).or_insert(next))
                }
            })
            .collect();
        let grid = entries.chunks(self.k).map(|r| r.to_vec()).collect();
        Pda::validate(grid).expect("relabeling preserves the PDA conditions")
    }

    /// Memory-load pair `(1 + Z(N-1)/F, S/F)` of the scheme built on this array
    /// for `n_files >= 2` files.
    pub fn memory_load(&self, n_files: usize) -> (Rational, Rational) {
        let f = self.f as i64;
        let m = frac(f + self.z as i64 * (n_files as i64 - 1), f);
        (m, frac(self.s as i64, f))
    }
}

impl fmt::Display for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_pda(self))
    }
}

/// The array whose rows are the `t`-subsets of `[K]` in lexicographic order;
/// cell `(T, j)` is a star when `j` is in `T` and otherwise the lexicographic
/// rank (1-based) of `T + {j}` among `(t+1)`-subsets.
pub fn man_pda(k: usize, t: usize) -> Result<Pda, PdaError> {
    if k == 0 || t > k {
        return Err(PdaError::Domain(format!("MAN array needs 1 <= K and t <= K, got K={k}, t={t}")));
    }
    let rank: HashMap<Vec<usize>, u32> =
        (0..k).combinations(t + 1).enumerate().map(|(r, set)| (set, r as u32 + 1)).collect();
    let grid = (0..k)
        .combinations(t)
        .map(|row_set| {
            (0..k)
                .map(|j| {
                    if row_set.contains(&j) {
                        PdaEntry::Star
                    } else {
                        let mut key = row_set.clone();
                        key.push(j);
                        key.sort_unstable();
                        PdaEntry::Ordinary(rank[&key])
                    }
                })
                .collect()
        })
        .collect();
    Pda::validate(grid)
}
