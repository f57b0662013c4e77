//! The prime-divisibility map between multiplicative and additive squares.
//!
//! A normal multiplicative square over four primes `p1 < p2 < p3 < p4` has as
//! entries the sixteen divisors of `k = p1·p2·p3·p4`. Each entry is encoded by
//! the 4-bit string recording which primes divide it, read as a binary number
//! with `p1` as the most significant bit. Masks are the stored representation;
//! entry values are recomputed from them when needed.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::enumerate::{count_d8_orbits, normal_catalog};
use crate::error::{Error, Result};
use crate::square::{check_nibbles, common_value, is_normal_entries, lines, Square};
use crate::{AdditiveSquare, MaskSquare, ValueSquare, Wide};

/// Four distinct primes in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeBasis {
    primes: [u64; 4],
    k: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeBasis {
    /// `k = p1·p2·p3·p4` must fit in 64 bits so that `k²` is exact in
    /// [`Wide`].
    pub fn new(primes: [u64; 4]) -> Result<Self> {
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidBasis(format!("{p} is not prime")));
        }
        if !primes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidBasis(format!(
                "primes {primes:?} are not strictly ascending"
            )));
        }
        let k = primes
            .iter()
            .try_fold(1u64, |acc, &p| acc.checked_mul(p))
            .ok_or_else(|| {
                Error::InvalidBasis(format!("product of {primes:?} overflows 64 bits"))
            })?;
        Ok(PrimeBasis { primes, k })
    }

    /// Sorts `primes` before validating.
    pub fn from_unsorted(mut primes: [u64; 4]) -> Result<Self> {
        primes.sort_unstable();
        Self::new(primes)
    }

    pub fn primes(&self) -> [u64; 4] {
        self.primes
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Product of the primes selected by `mask` (bit weight 8 is `p1`).
    pub fn value_of(&self, mask: u8) -> u64 {
        self.primes
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (8 >> i) != 0)
            .map(|(_, &p)| p)
            .product()
    }

    /// `p1^e1 · p2^e2 · p3^e3 · p4^e4`, if it fits in [`Wide`].
    pub fn power_product(&self, exponents: [u8; 4]) -> Option<Wide> {
        let mut acc: Wide = 1;
        for (&p, &e) in self.primes.iter().zip(&exponents) {
            for _ in 0..e {
                acc = acc.checked_mul(Wide::from(p))?;
            }
        }
        Some(acc)
    }

    /// Inverse of [`value_of`](Self::value_of); `None` if `value` is not a
    /// squarefree product of basis primes.
    pub fn mask_of(&self, value: u64) -> Option<u8> {
        if value == 0 {
            return None;
        }
        let mut rest = value;
        let mut mask = 0u8;
        for (i, &p) in self.primes.iter().enumerate() {
            if rest.is_multiple_of(p) {
                rest /= p;
                if rest.is_multiple_of(p) {
                    return None;
                }
                mask |= 8 >> i;
            }
        }
        (rest == 1).then_some(mask)
    }
}

/// A square of squarefree divisors of `k`, stored as prime masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultSquare {
    basis: PrimeBasis,
    masks: MaskSquare,
}

impl MultSquare {
    pub fn from_masks(basis: PrimeBasis, masks: MaskSquare) -> Result<Self> {
        check_nibbles(&masks.map(u32::from))?;
        Ok(MultSquare { basis, masks })
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn masks(&self) -> &MaskSquare {
        &self.masks
    }

    pub fn values(&self) -> ValueSquare {
        self.masks.map(|m| self.basis.value_of(m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultReport {
    pub is_magic: bool,
    pub is_normal: bool,
    /// Exponent of each prime (`p1` first) in the common line product.
    pub exponents: Option<[u8; 4]>,
    /// The common line product. Absent when the square is not magic, or in
    /// the rare non-normal case where the product exceeds 128 bits.
    pub constant: Option<Wide>,
}

/// Reads each mask as a binary number.
pub fn apply_f(m: &MultSquare) -> AdditiveSquare {
    m.masks.map(u32::from)
}

/// Generalized inverse of [`apply_f`], defined on every square with entries
/// in `0..16`. The result is normal and magic exactly when `a` is normal and
/// compatible.
pub fn f_inverse(a: &AdditiveSquare, basis: &PrimeBasis) -> Result<MultSquare> {
    check_nibbles(a)?;
    Ok(MultSquare {
        basis: *basis,
        masks: a.map(|v| v as u8),
    })
}

/// First `(line index, bit position)` at which a line does not have exactly
/// two entries with that bit set, with the offending count. Bit positions are
/// 1..=4 from the most significant.
pub fn first_bit_violation(a: &AdditiveSquare) -> Option<(usize, u8, usize)> {
    for (li, line) in lines().iter().enumerate() {
        let vals = a.line_values(line);
        for pos in 1..=4u8 {
            let bit = 8u32 >> (pos - 1);
            let count = vals.iter().filter(|&&v| v & bit != 0).count();
            if count != 2 {
                return Some((li, pos, count));
            }
        }
    }
    None
}

/// True iff every line has exactly two entries with each bit set.
pub fn is_compatible(a: &AdditiveSquare) -> Result<bool> {
    if !is_normal_entries(a) {
        return Err(Error::NotNormal);
    }
    Ok(first_bit_violation(a).is_none())
}

/// Like [`is_compatible`], but explains a failure.
pub fn require_compatible(a: &AdditiveSquare) -> Result<()> {
    if !is_normal_entries(a) {
        return Err(Error::NotNormal);
    }
    match first_bit_violation(a) {
        None => Ok(()),
        Some((li, position, count)) => Err(Error::NotCompatible {
            line: lines()[li].kind.to_string(),
            position,
            count,
        }),
    }
}

/// The compatible normal squares, sorted.
pub fn compatible_squares() -> &'static [AdditiveSquare] {
    static COMPATIBLE: OnceLock<Vec<AdditiveSquare>> = OnceLock::new();
    COMPATIBLE.get_or_init(|| {
        normal_catalog()
            .squares
            .par_iter()
            .filter(|a| first_bit_violation(a).is_none())
            .copied()
            .collect()
    })
}

/// `(total, D8 orbit count)` of compatible squares.
pub fn count_compatible() -> (usize, usize) {
    let squares = compatible_squares();
    (squares.len(), count_d8_orbits(squares))
}

/// Lines are compared through the exponent of each prime in their product,
/// which is exact whatever the size of the product.
pub fn check_multiplicative(m: &MultSquare) -> MultReport {
    let exponents = common_value(&lines().map(|l| {
        let masks = m.masks.line_values(&l);
        [8u8, 4, 2, 1].map(|bit| masks.iter().filter(|&&x| x & bit != 0).count() as u8)
    }));
    let is_magic = exponents.is_some();
    let constant = exponents.and_then(|e| m.basis.power_product(e));
    MultReport {
        is_magic,
        is_normal: is_magic && is_normal_entries(&apply_f(m)),
        exponents,
        constant,
    }
}

/// Factors each entry over `basis`.
pub fn parse_mult_square(entries: &ValueSquare, basis: &PrimeBasis) -> Result<MultSquare> {
    let mut masks = [[0u8; 4]; 4];
    for (i, row) in entries.rows().iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            masks[i][j] = basis.mask_of(value).ok_or(Error::NotInBasis {
                row: i,
                col: j,
                value,
            })?;
        }
    }
    Ok(MultSquare {
        basis: *basis,
        masks: Square::new(masks),
    })
}
