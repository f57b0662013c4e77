//! 4x4 grids, lines and the magic predicates.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, PrimInt, Zero};

use crate::error::{Error, Result};
use crate::AdditiveSquare;

/// Side length of every square handled by the crate.
pub const ORDER: usize = 4;

/// A 4x4 grid, row-major.
///
/// Ordering (`Ord`) compares the row-major entry sequence lexicographically,
/// which is the order used for sorted catalogs and D8 canonical forms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Square<T>([[T; ORDER]; ORDER]);

impl<T: Copy> Square<T> {
    pub const fn new(rows: [[T; ORDER]; ORDER]) -> Self {
        Square(rows)
    }

    /// Builds a square from arbitrary nested rows, rejecting anything that
    /// is not exactly 4x4.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let lengths: Vec<usize> = rows.iter().map(|r| r.as_ref().len()).collect();
        if rows.len() != ORDER || lengths.iter().any(|&l| l != ORDER) {
            return Err(Error::Shape {
                rows: rows.len(),
                lengths,
            });
        }
        let first = rows[0].as_ref()[0];
        let mut grid = [[first; ORDER]; ORDER];
        for (dst, src) in grid.iter_mut().zip(rows) {
            dst.copy_from_slice(src.as_ref());
        }
        Ok(Square(grid))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self
    where
        T: Default,
    {
        let mut grid = [[T::default(); ORDER]; ORDER];
        for (i, row) in grid.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f(i, j);
            }
        }
        Square(grid)
    }

    pub fn rows(&self) -> &[[T; ORDER]; ORDER] {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.0[row][col]
    }

    /// Entries in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = T> + '_ {
        self.0.iter().flatten().copied()
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(T) -> U) -> Square<U> {
        Square(self.0.map(|row| row.map(&mut f)))
    }

    /// Values of the square along `line`, in the line's cell order.
    pub fn line_values(&self, line: &Line) -> [T; ORDER] {
        line.cells.map(|(r, c)| self.0[r][c])
    }
}

impl<T> From<[[T; ORDER]; ORDER]> for Square<T> {
    fn from(rows: [[T; ORDER]; ORDER]) -> Self {
        Square(rows)
    }
}

impl<T: fmt::Debug> fmt::Debug for Square<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<T: fmt::Display> fmt::Display for Square<T> {
    /// Four lines of four whitespace-separated values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// What a line is, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineKind {
    Row(usize),
    Column(usize),
    MainDiagonal,
    AntiDiagonal,
}

impl fmt::Display for LineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineKind::Row(i) => write!(f, "row {i}"),
            LineKind::Column(j) => write!(f, "column {j}"),
            LineKind::MainDiagonal => f.write_str("main diagonal"),
            LineKind::AntiDiagonal => f.write_str("anti-diagonal"),
        }
    }
}

/// A row, column or main diagonal: four `(row, col)` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    pub kind: LineKind,
    pub cells: [(usize, usize); ORDER],
}

const fn build_lines() -> [Line; 10] {
    let mut out = [Line {
        kind: LineKind::MainDiagonal,
        cells: [(0, 0); ORDER],
    }; 10];
    let mut i = 0;
    while i < ORDER {
        out[i] = Line {
            kind: LineKind::Row(i),
            cells: [(i, 0), (i, 1), (i, 2), (i, 3)],
        };
        out[ORDER + i] = Line {
            kind: LineKind::Column(i),
            cells: [(0, i), (1, i), (2, i), (3, i)],
        };
        i += 1;
    }
    out[8] = Line {
        kind: LineKind::MainDiagonal,
        cells: [(0, 0), (1, 1), (2, 2), (3, 3)],
    };
    out[9] = Line {
        kind: LineKind::AntiDiagonal,
        cells: [(0, 3), (1, 2), (2, 1), (3, 0)],
    };
    out
}

static LINES: [Line; 10] = build_lines();

/// The ten lines: rows 0-3, columns 0-3, main diagonal, anti-diagonal.
/// Broken diagonals are not lines.
pub fn lines() -> &'static [Line; 10] {
    &LINES
}

/// Sum over each of the ten lines, in [`lines`] order.
pub fn line_sums<T>(sq: &Square<T>) -> [T; 10]
where
    T: Copy + Zero + Add<Output = T>,
{
    LINES.map(|l| {
        sq.line_values(&l)
            .into_iter()
            .fold(T::zero(), |acc, v| acc + v)
    })
}

/// Product over each of the ten lines, in [`lines`] order.
pub fn line_products<T>(sq: &Square<T>) -> [T; 10]
where
    T: Copy + One + Mul<Output = T>,
{
    LINES.map(|l| {
        sq.line_values(&l)
            .into_iter()
            .fold(T::one(), |acc, v| acc * v)
    })
}

/// `n(n²-1)/2`, the line sum of a normal additive square of order `n`.
pub fn additive_magic_constant<T: PrimInt>(n: T) -> T {
    let two = T::one() + T::one();
    n * (n * n - T::one()) / two
}

/// Common value of all ten entries, if they agree.
pub(crate) fn common_value<T: Copy + PartialEq>(values: &[T; 10]) -> Option<T> {
    let first = values[0];
    values.iter().all(|&v| v == first).then_some(first)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MagicReport<T> {
    pub is_magic: bool,
    pub constant: Option<T>,
    pub is_normal: bool,
}

/// True iff the sixteen entries are exactly `0..16`.
pub fn is_normal_entries(sq: &AdditiveSquare) -> bool {
    let mut seen = 0u16;
    for v in sq.cells() {
        if v >= 16 {
            return false;
        }
        seen |= 1 << v;
    }
    seen == u16::MAX
}

pub fn check_additive(sq: &AdditiveSquare) -> MagicReport<u32> {
    let constant = common_value(&line_sums(sq));
    let is_magic = constant.is_some();
    MagicReport {
        is_magic,
        constant,
        is_normal: is_magic && is_normal_entries(sq),
    }
}

/// Ensures every entry fits in four bits.
pub(crate) fn check_nibbles(sq: &AdditiveSquare) -> Result<()> {
    for (i, row) in sq.rows().iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v >= 16 {
                return Err(Error::EntryOutOfRange {
                    row: i,
                    col: j,
                    value: v as u64,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Square;
    use crate::AdditiveSquare;

    /// Image of the first worked multiplicative example.
    pub const EXAMPLE_1: AdditiveSquare =
        Square::new([[14, 3, 0, 13], [5, 8, 11, 6], [9, 4, 7, 10], [2, 15, 12, 1]]);

    /// Image of the k = 2010 example.
    pub const IMAGE_2010: AdditiveSquare =
        Square::new([[15, 2, 1, 12], [4, 9, 10, 7], [8, 5, 6, 11], [3, 14, 13, 0]]);
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ten_lines_in_documented_order() {
        let ls = lines();
        assert_eq!(ls.len(), 10);
        assert_eq!(ls[0].cells, [(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(ls[9].cells, [(0, 3), (1, 2), (2, 1), (3, 0)]);
        assert_eq!(ls[8].cells, [(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(ls[5].kind, LineKind::Column(1));
        for l in ls {
            let distinct: HashSet<_> = l.cells.iter().collect();
            assert_eq!(distinct.len(), 4);
        }
        // each cell is on exactly one row and one column
        let mut row_cover = [[0; 4]; 4];
        let mut col_cover = [[0; 4]; 4];
        for l in &ls[..4] {
            for &(r, c) in &l.cells {
                row_cover[r][c] += 1;
            }
        }
        for l in &ls[4..8] {
            for &(r, c) in &l.cells {
                col_cover[r][c] += 1;
            }
        }
        assert_eq!(row_cover, [[1; 4]; 4]);
        assert_eq!(col_cover, [[1; 4]; 4]);
    }

    #[test]
    fn line_sums_of_examples() {
        assert_eq!(line_sums(&AdditiveSquare::default()), [0; 10]);
        assert_eq!(line_sums(&EXAMPLE_1), [30; 10]);
        assert_eq!(line_sums(&IMAGE_2010), [30; 10]);
    }

    #[test]
    fn magic_constant() {
        assert_eq!(additive_magic_constant(4u32), 30);
        assert_eq!(additive_magic_constant(1i64), 0);
        assert_eq!(additive_magic_constant(3u8), 12);
    }

    #[test]
    fn check_additive_cases() {
        let r = check_additive(&EXAMPLE_1);
        assert_eq!(
            r,
            MagicReport {
                is_magic: true,
                constant: Some(30),
                is_normal: true
            }
        );
        let r = check_additive(&AdditiveSquare::default());
        assert!(r.is_magic && !r.is_normal);
        assert_eq!(r.constant, Some(0));

        let mut rows = *EXAMPLE_1.rows();
        rows[0][0] = 13;
        let r = check_additive(&Square::new(rows));
        assert!(!r.is_magic && !r.is_normal);
        assert_eq!(r.constant, None);
        // pure
        assert_eq!(check_additive(&EXAMPLE_1), check_additive(&EXAMPLE_1));
    }

    #[test]
    fn from_rows_rejects_bad_shapes() {
        assert!(Square::<u32>::from_rows(&[vec![1, 2, 3]]).is_err());
        let ragged = vec![vec![0u32; 4], vec![0; 4], vec![0; 3], vec![0; 4]];
        assert!(matches!(
            Square::from_rows(&ragged),
            Err(Error::Shape { rows: 4, .. })
        ));
        let ok = vec![vec![1u32; 4]; 4];
        assert_eq!(Square::from_rows(&ok).unwrap(), Square::new([[1; 4]; 4]));
    }

    #[test]
    fn generic_over_scalar() {
        let sq: Square<i64> = Square::new([[-1; 4]; 4]);
        assert_eq!(line_sums(&sq), [-4; 10]);
        let sq: Square<u128> = Square::new([[3; 4]; 4]);
        assert_eq!(line_products(&sq), [81; 10]);
    }

    #[test]
    fn display_is_four_rows() {
        assert_eq!(
            EXAMPLE_1.to_string(),
            "14 3 0 13\n5 8 11 6\n9 4 7 10\n2 15 12 1"
        );
    }
}
