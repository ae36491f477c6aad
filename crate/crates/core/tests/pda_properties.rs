//! Property tests for PDA validation over randomized star patterns.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splfr_core::pda::{min_subpacketization, parse_pda, render_pda, symbol_count_bound};
use splfr_core::rational::frac;
use splfr_core::{man_pda, Pda, PdaEntry};

type Grid = Vec<Vec<PdaEntry>>;

/// Direct check of the PDA conditions, written without reference to the
/// library's validator.
fn oracle_valid(grid: &Grid) -> bool {
    let f = grid.len();
    if f == 0 || grid[0].is_empty() || grid.iter().any(|r| r.len() != grid[0].len()) {
        return false;
    }
    let k = grid[0].len();
    let stars = |j: usize| (0..f).filter(|&i| grid[i][j] == PdaEntry::Star).count();
    if (0..k).any(|j| stars(j) != stars(0)) {
        return false;
    }
    let mut cells = Vec::new();
    for (i, row) in grid.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if let PdaEntry::Ordinary(s) = *e {
                if s == 0 {
                    return false;
                }
                cells.push((s, i, j));
            }
        }
    }
    let max = cells.iter().map(|c| c.0).max().unwrap_or(0);
    if (1..=max).any(|s| !cells.iter().any(|c| c.0 == s)) {
        return false;
    }
    for &(s, i, j) in &cells {
        for &(s2, i2, j2) in &cells {
            if s != s2 || (i, j) == (i2, j2) {
                continue;
            }
            if i == i2 || j == j2 || grid[i][j2] != PdaEntry::Star || grid[i2][j] != PdaEntry::Star {
                return false;
            }
        }
    }
    true
}

/// A random valid array: a random star pattern with `z` stars per column, then
/// ordinary cells visited in random order, each joining a random compatible
/// symbol class or opening a new one.
fn random_pda(seed: u64, f: usize, k: usize, z: usize) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = vec![vec![PdaEntry::Ordinary(0); k]; f];
    for j in 0..k {
        let mut rows: Vec<usize> = (0..f).collect();
        rows.shuffle(&mut rng);
        for &i in &rows[..z] {
            grid[i][j] = PdaEntry::Star;
        }
    }
    let mut open: Vec<(usize, usize)> =
        (0..f).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|&(i, j)| grid[i][j] != PdaEntry::Star).collect();
    open.shuffle(&mut rng);
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, j) in open {
        let fits: Vec<usize> = (0..classes.len())
            .filter(|&c| {
                classes[c].iter().all(|&(i2, j2)| {
                    i != i2 && j != j2 && grid[i][j2] == PdaEntry::Star && grid[i2][j] == PdaEntry::Star
                })
            })
            .collect();
        let class = if !fits.is_empty() && rng.gen_bool(0.8) {
            fits[rng.gen_range(0..fits.len())]
        } else {
            classes.push(Vec::new());
            classes.len() - 1
        };
        classes[class].push((i, j));
        grid[i][j] = PdaEntry::Ordinary(class as u32 + 1);
    }
    grid
}

/// Changes one cell to a star or to another symbol.
fn mutate(grid: &Grid, seed: u64) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = grid.clone();
    let (i, j) = (rng.gen_range(0..g.len()), rng.gen_range(0..g[0].len()));
    let max = g.iter().flatten().filter_map(|e| e.symbol()).max().unwrap_or(0);
    g[i][j] = if rng.gen_bool(0.3) { PdaEntry::Star } else { PdaEntry::Ordinary(rng.gen_range(0..=max + 1)) };
    g
}

/// Equality in the symbol-count bound: every row has the same number `r` of
/// ordinary cells and every symbol occurs exactly `K + 1 - r` times.
fn oracle_equality(pda: &Pda) -> bool {
    let grid = pda.to_grid();
    let per_row: Vec<usize> = grid.iter().map(|r| r.iter().filter(|e| e.symbol().is_some()).count()).collect();
    if per_row.iter().any(|&c| c != per_row[0]) {
        return false;
    }
    let mut counts = std::collections::BTreeMap::new();
    for s in grid.iter().flatten().filter_map(|e| e.symbol()) {
        *counts.entry(s).or_insert(0usize) += 1;
    }
    counts.values().all(|&c| c + per_row[0] == pda.k() + 1)
}

fn row_minimum_applies(pda: &Pda) -> Option<usize> {
    let g = pda.regularity()?;
    let rows_ok = pda.rows().all(|r| r.iter().filter(|e| e.is_star()).count() == g - 1);
    (g >= 2 && pda.k() >= g && rows_ok).then_some(g)
}

fn check_valid_properties(pda: &Pda) {
    let b = symbol_count_bound(pda);
    assert!(b.bound <= frac(pda.s() as i64, 1), "S below the symbol-count bound");
    assert!(!b.tight || b.structure_equal, "tight without the row/symbol structure on\n{pda}");
    assert_eq!(b.tight, oracle_equality(pda), "equality case mismatch on\n{pda}");
    assert_eq!(parse_pda(&render_pda(pda)).unwrap(), *pda);
    let c = pda.canonical();
    assert_eq!(c.canonical(), c);
    assert_eq!(c.params(), pda.params());
    if let Some(g) = row_minimum_applies(pda) {
        assert!(pda.f() as u64 >= min_subpacketization(pda.k(), g).unwrap());
    }
    let (m, r) = pda.memory_load(3);
    assert_eq!(m, frac((pda.f() + 2 * pda.z()) as i64, pda.f() as i64));
    assert_eq!(r, frac(pda.s() as i64, pda.f() as i64));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn generated_arrays_are_valid(seed in any::<u64>(), f in 1usize..7, k in 1usize..6, zf in 0usize..=6) {
        let z = zf.min(f);
        let grid = random_pda(seed, f, k, z);
        prop_assert!(oracle_valid(&grid));
        let pda = Pda::validate(grid).expect("generator output is valid");
        check_valid_properties(&pda);
    }

    #[test]
    fn validator_agrees_with_oracle_on_mutants(seed in any::<u64>(), f in 1usize..6, k in 1usize..6, zf in 0usize..=5) {
        let grid = mutate(&random_pda(seed, f, k, zf.min(f)), seed ^ 1);
        let verdict = Pda::validate(grid.clone());
        prop_assert_eq!(verdict.is_ok(), oracle_valid(&grid), "grid {:?}: {:?}", grid, verdict);
    }

    #[test]
    fn malformed_text_is_rejected(k in 2usize..6, f in 1usize..5) {
        let pda = man_pda(k, 1).unwrap();
        let mut text = render_pda(&pda);
        // Drop the last token of the first row.
        let first_row_end = text[text.find('\n').unwrap() + 1..].find('\n').unwrap() + text.find('\n').unwrap() + 1;
        let cut = text[..first_row_end].rfind(' ').unwrap();
        text.replace_range(cut..first_row_end, "");
        prop_assert!(parse_pda(&text).is_err());
        let header_only = format!("PDA K={k} F={f}\n");
        prop_assert!(parse_pda(&header_only).is_err());
    }
}

#[test]
fn man_corpus() {
    for k in 1..=12usize {
        for t in 0..=k {
            let pda = man_pda(k, t).unwrap();
            check_valid_properties(&pda);
            let b = symbol_count_bound(&pda);
            assert!(b.tight, "K={k} t={t}");
            if t < k {
                assert_eq!(pda.regularity(), Some(t + 1));
            }
        }
    }
}

/// Rows and symbols are uniform here, yet S = 2 sits above the bound 4/3:
/// each symbol would need to occur K + 1 - n/F = 3 times.
#[test]
fn uniform_structure_alone_is_not_equality() {
    let pda = parse_pda("PDA K=4 F=2\n1 2 * *\n* * 2 1\n").unwrap();
    let b = symbol_count_bound(&pda);
    assert_eq!(b.bound, frac(4, 3));
    assert!(b.structure_equal && !b.tight);
    assert!(!oracle_equality(&pda));
    check_valid_properties(&pda);
}

/// Stacking two copies of a MAN array, with the second copy's symbols shifted,
/// keeps the row-star and regularity conditions and doubles F.
#[test]
fn stacked_man_arrays_respect_row_minimum() {
    for k in 3..=7usize {
        for t in 1..k {
            let pda = man_pda(k, t).unwrap();
            let s = pda.s() as u32;
            let mut grid = pda.to_grid();
            for row in pda.to_grid() {
                grid.push(row.into_iter().map(|e| e.symbol().map_or(PdaEntry::Star, |x| PdaEntry::Ordinary(x + s))).collect());
            }
            let stacked = Pda::validate(grid).unwrap();
            assert_eq!(row_minimum_applies(&stacked), Some(t + 1));
            assert_eq!(stacked.f() as u64, 2 * min_subpacketization(k, t + 1).unwrap());
            check_valid_properties(&stacked);
        }
    }
}
