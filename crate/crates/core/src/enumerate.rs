//! Exhaustive search for normal additive magic squares of order 4, and the
//! order-3 semi-magic count.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_integer::{binomial, Integer};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::canonical_d8;
use crate::square::{lines, Square, ORDER};
use crate::AdditiveSquare;

const MAGIC: u32 = 30;
const CELLS: usize = ORDER * ORDER;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    /// Sorted row-major lexicographically, pairwise distinct.
    pub squares: Vec<AdditiveSquare>,
    pub total: usize,
    pub d8_orbit_count: usize,
}

/// Per cell (row-major index): the lines whose last cell, in row-major
/// order, is this one.
fn closing_lines() -> [Vec<[usize; ORDER]>; CELLS] {
    let mut out: [Vec<[usize; ORDER]>; CELLS] = Default::default();
    for line in lines() {
        let mut idx = line.cells.map(|(r, c)| r * ORDER + c);
        idx.sort_unstable();
        out[idx[3]].push(idx);
    }
    out
}

/// Per cell: the lines for which it is the third cell filled, in row-major
/// order. The fourth cell of such a line is then forced.
fn third_lines() -> [Vec<[usize; ORDER]>; CELLS] {
    let mut out: [Vec<[usize; ORDER]>; CELLS] = Default::default();
    for line in lines() {
        let mut idx = line.cells.map(|(r, c)| r * ORDER + c);
        idx.sort_unstable();
        out[idx[2]].push(idx);
    }
    out
}

struct Search<'a> {
    closing: &'a [Vec<[usize; ORDER]>; CELLS],
    third: &'a [Vec<[usize; ORDER]>; CELLS],
    grid: [u32; CELLS],
    used: u16,
    found: Vec<AdditiveSquare>,
}

impl Search<'_> {
    fn place(&mut self, pos: usize, value: u32) {
        self.grid[pos] = value;
        self.used |= 1 << value;
        if self.fourth_cells_feasible(pos) {
            self.descend(pos + 1);
        }
        self.used &= !(1 << value);
    }

    /// Lines that just received their third cell must leave a value in
    /// `0..16` that is still unused for the fourth.
    fn fourth_cells_feasible(&self, pos: usize) -> bool {
        self.third[pos].iter().all(|idx| {
            let partial: u32 = idx[..3].iter().map(|&c| self.grid[c]).sum();
            partial <= MAGIC && {
                let v = MAGIC - partial;
                v < 16 && self.used & (1 << v) == 0
            }
        })
    }

    /// Value forced at `pos` by the lines it completes, if any: `Some(None)`
    /// means the lines disagree or the value is unavailable.
    fn forced(&self, pos: usize) -> Option<Option<u32>> {
        let closing = &self.closing[pos];
        if closing.is_empty() {
            return None;
        }
        let mut want = None;
        for idx in closing {
            let partial: u32 = idx[..3].iter().map(|&c| self.grid[c]).sum();
            if partial > MAGIC {
                return Some(None);
            }
            let v = MAGIC - partial;
            match want {
                None => want = Some(v),
                Some(w) if w != v => return Some(None),
                _ => {}
            }
        }
        Some(want.filter(|&v| v < 16 && self.used & (1 << v) == 0))
    }

    fn descend(&mut self, pos: usize) {
        if pos == CELLS {
            let mut rows = [[0u32; ORDER]; ORDER];
            for (i, row) in rows.iter_mut().enumerate() {
                row.copy_from_slice(&self.grid[i * ORDER..(i + 1) * ORDER]);
            }
            self.found.push(Square::new(rows));
            return;
        }
        match self.forced(pos) {
            Some(Some(v)) => self.place(pos, v),
            Some(None) => {}
            None => {
                for v in 0..16 {
                    if self.used & (1 << v) == 0 {
                        self.place(pos, v);
                    }
                }
            }
        }
    }
}

/// Every normal additive magic square of order 4.
///
/// Cells are filled row-major; a cell that completes a line takes the forced
/// value `30 - partial sum`, and as soon as a line has three cells placed the
/// value its fourth cell needs must still be available. The search is split on the first two cells of
/// row 0 and the subtrees run in parallel; the merged output is sorted, so
/// the result does not depend on scheduling.
pub fn enumerate_normal_additive() -> EnumerationResult {
    let closing = closing_lines();
    let third = third_lines();
    let prefixes: Vec<(u32, u32)> = (0..16)
        .flat_map(|a| (0..16).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut squares: Vec<AdditiveSquare> = prefixes
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut s = Search {
                closing: &closing,
                third: &third,
                grid: [0; CELLS],
                used: 0,
                found: Vec::new(),
            };
            s.grid[0] = a;
            s.grid[1] = b;
            s.used = (1 << a) | (1 << b);
            s.descend(2);
            s.found
        })
        .collect();
    squares.sort_unstable();
    squares.dedup();
    let d8_orbit_count = count_d8_orbits(&squares);
    EnumerationResult {
        total: squares.len(),
        squares,
        d8_orbit_count,
    }
}

/// Number of distinct D8 canonical forms among `squares`.
pub fn count_d8_orbits(squares: &[AdditiveSquare]) -> usize {
    squares
        .par_iter()
        .map(canonical_d8)
        .collect::<BTreeSet<_>>()
        .len()
}

/// Shared, lazily computed copy of [`enumerate_normal_additive`].
pub fn normal_catalog() -> &'static EnumerationResult {
    static CATALOG: OnceLock<EnumerationResult> = OnceLock::new();
    CATALOG.get_or_init(enumerate_normal_additive)
}

/// Canonical D8 representatives of the normal squares, sorted; 880 of them.
pub fn orbit_representatives() -> &'static [AdditiveSquare] {
    static REPS: OnceLock<Vec<AdditiveSquare>> = OnceLock::new();
    REPS.get_or_init(|| {
        let reps: BTreeSet<_> = normal_catalog().squares.iter().map(canonical_d8).collect();
        reps.into_iter().collect()
    })
}

/// Position of the D8 orbit of `sq` in [`orbit_representatives`], if `sq`
/// is a normal magic square.
pub fn orbit_index(sq: &AdditiveSquare) -> Option<usize> {
    orbit_representatives()
        .binary_search(&canonical_d8(sq))
        .ok()
}

/// `C(r+4,4) + C(r+3,4) + C(r+2,4)`: the number of 3x3 non-negative integer
/// matrices whose rows and columns all sum to `r`.
pub fn count_semimagic_order3<T: Integer + Clone>(r: T) -> Result<T> {
    if r < T::zero() {
        return Err(Error::ArgumentOutOfRange("negative line sum".into()));
    }
    let one = T::one();
    let two = one.clone() + one.clone();
    let three = two.clone() + one.clone();
    let four = two.clone() + two.clone();
    Ok(binomial(r.clone() + four.clone(), four.clone())
        + binomial(r.clone() + three, four.clone())
        + binomial(r + two, four))
}

/// Largest line sum accepted by [`brute_semimagic_order3`].
pub const BRUTE_SEMIMAGIC_MAX: u32 = 8;

/// Counts 3x3 semi-magic matrices with line sum `r` directly: the upper-left
/// 2x2 block determines the rest, which must be non-negative.
pub fn brute_semimagic_order3(r: u32) -> Result<u64> {
    if r > BRUTE_SEMIMAGIC_MAX {
        return Err(Error::ArgumentOutOfRange(format!(
            "line sum {r} (brute force supports 0..={BRUTE_SEMIMAGIC_MAX})"
        )));
    }
    let r = r as i64;
    let mut count = 0;
    for a in 0..=r {
        for b in 0..=r {
            for c in 0..=r {
                for d in 0..=r {
                    let derived = [
                        r - a - b,
                        r - c - d,
                        r - a - c,
                        r - b - d,
                        a + b + c + d - r,
                    ];
                    if derived.iter().all(|&x| x >= 0) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{orbit_size_d8, D8Element};
    use crate::square::check_additive;
    use crate::square::fixtures::*;

    #[test]
    fn full_enumeration() {
        let res = normal_catalog();
        assert_eq!(res.total, 7040);
        assert_eq!(res.squares.len(), res.total);
        assert_eq!(res.d8_orbit_count, 880);
        assert!(res.squares.windows(2).all(|w| w[0] < w[1]));
        assert!(res.squares.binary_search(&EXAMPLE_1).is_ok());
        assert!(res.squares.binary_search(&IMAGE_2010).is_ok());
        assert_eq!(orbit_representatives().len(), 880);
        assert_eq!(orbit_index(&res.squares[0]), Some(0));
        assert_eq!(orbit_index(&Square::new([[0; 4]; 4])), None);
        for sq in &res.squares {
            let rep = check_additive(sq);
            assert!(rep.is_normal);
            assert_eq!(rep.constant, Some(30));
        }
    }

    #[test]
    fn enumeration_is_d8_closed_with_free_orbits() {
        let res = normal_catalog();
        for sq in &res.squares {
            for g in D8Element::ALL {
                assert!(res.squares.binary_search(&g.apply(sq)).is_ok());
            }
            assert_eq!(orbit_size_d8(sq), 8);
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        assert_eq!(&enumerate_normal_additive(), normal_catalog());
    }

    #[test]
    fn semimagic_formula_values() {
        assert_eq!(count_semimagic_order3(0u64).unwrap(), 1);
        assert_eq!(count_semimagic_order3(1i32).unwrap(), 6);
        assert_eq!(count_semimagic_order3(2u128).unwrap(), 21);
        assert!(count_semimagic_order3(-1i64).is_err());
    }

    #[test]
    fn semimagic_brute_force() {
        assert_eq!(brute_semimagic_order3(0).unwrap(), 1);
        assert_eq!(brute_semimagic_order3(1).unwrap(), 6);
        assert_eq!(brute_semimagic_order3(2).unwrap(), 21);
        assert!(brute_semimagic_order3(9).is_err());
        for r in 0..=BRUTE_SEMIMAGIC_MAX {
            assert_eq!(
                brute_semimagic_order3(r).unwrap(),
                count_semimagic_order3(r as u64).unwrap()
            );
        }
    }
}
