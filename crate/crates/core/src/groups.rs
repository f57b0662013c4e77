//! The dihedral group of the square and the bit-position permutations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::square::{check_nibbles, Square};
use crate::AdditiveSquare;

/// One of the eight symmetries of the square.
///
/// `Rot90` turns the grid a quarter turn clockwise; `FlipHorizontal` mirrors
/// left to right; `FlipVertical` mirrors top to bottom; `AntiTranspose`
/// reflects across the anti-diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum D8Element {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipHorizontal,
    FlipVertical,
    Transpose,
    AntiTranspose,
}

use D8Element::*;

/// `COMPOSITION[a][b]` is `a ∘ b`: apply `b`, then `a`.
const COMPOSITION: [[u8; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 2, 3, 0, 7, 6, 4, 5],
    [2, 3, 0, 1, 5, 4, 7, 6],
    [3, 0, 1, 2, 6, 7, 5, 4],
    [4, 6, 5, 7, 0, 2, 1, 3],
    [5, 7, 4, 6, 2, 0, 3, 1],
    [6, 5, 7, 4, 3, 1, 0, 2],
    [7, 4, 6, 5, 1, 3, 2, 0],
];

impl D8Element {
    pub const ALL: [D8Element; 8] = [
        Identity,
        Rot90,
        Rot180,
        Rot270,
        FlipHorizontal,
        FlipVertical,
        Transpose,
        AntiTranspose,
    ];

    fn index(self) -> usize {
        self as usize
    }

    /// Cell of the input that lands on `(row, col)` of the output.
    pub fn source(self, row: usize, col: usize) -> (usize, usize) {
        let (i, j) = (row, col);
        match self {
            Identity => (i, j),
            Rot90 => (3 - j, i),
            Rot180 => (3 - i, 3 - j),
            Rot270 => (j, 3 - i),
            FlipHorizontal => (i, 3 - j),
            FlipVertical => (3 - i, j),
            Transpose => (j, i),
            AntiTranspose => (3 - j, 3 - i),
        }
    }

    /// `self ∘ other`.
    pub fn compose(self, other: D8Element) -> D8Element {
        Self::ALL[COMPOSITION[self.index()][other.index()] as usize]
    }

    pub fn inverse(self) -> D8Element {
        match self {
            Rot90 => Rot270,
            Rot270 => Rot90,
            g => g,
        }
    }

    pub fn apply<T: Copy + Default>(self, sq: &Square<T>) -> Square<T> {
        Square::from_fn(|i, j| {
            let (r, c) = self.source(i, j);
            sq.get(r, c)
        })
    }
}

impl fmt::Display for D8Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Identity => "identity",
            Rot90 => "rot90",
            Rot180 => "rot180",
            Rot270 => "rot270",
            FlipHorizontal => "flip-horizontal",
            FlipVertical => "flip-vertical",
            Transpose => "transpose",
            AntiTranspose => "anti-transpose",
        };
        f.write_str(name)
    }
}

pub fn apply_d8<T: Copy + Default>(g: D8Element, sq: &Square<T>) -> Square<T> {
    g.apply(sq)
}

/// All eight images of `sq`, in [`D8Element::ALL`] order.
pub fn d8_images<T: Copy + Default>(sq: &Square<T>) -> [Square<T>; 8] {
    D8Element::ALL.map(|g| g.apply(sq))
}

/// Lexicographically smallest (row-major) image of `sq` under D8.
pub fn canonical_d8<T: Copy + Default + Ord>(sq: &Square<T>) -> Square<T> {
    d8_images(sq).into_iter().min().expect("eight images")
}

/// Number of distinct D8 images of `sq`.
pub fn orbit_size_d8<T: Copy + Default + Ord>(sq: &Square<T>) -> usize {
    d8_images(sq).into_iter().collect::<BTreeSet<_>>().len()
}

/// A permutation of the four bit positions of a nibble.
///
/// Positions are numbered 1..=4 from the most significant bit (weight 8,
/// smallest prime) to the least significant (weight 1). Position `i` is sent
/// to position `targets[i - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitPermutation {
    targets: [u8; 4],
}

impl BitPermutation {
    pub const IDENTITY: BitPermutation = BitPermutation {
        targets: [1, 2, 3, 4],
    };

    /// `targets[i]` is where position `i + 1` goes. Returns `None` unless
    /// `targets` is a rearrangement of `1..=4`.
    pub fn new(targets: [u8; 4]) -> Option<Self> {
        let mut seen = 0u8;
        for &t in &targets {
            if !(1..=4).contains(&t) {
                return None;
            }
            seen |= 1 << (t - 1);
        }
        (seen == 0b1111).then_some(BitPermutation { targets })
    }

    /// Exchanges positions `a` and `b`.
    pub fn swap(a: u8, b: u8) -> Option<Self> {
        if !(1..=4).contains(&a) || !(1..=4).contains(&b) {
            return None;
        }
        let mut targets = [1, 2, 3, 4];
        targets.swap(a as usize - 1, b as usize - 1);
        Some(BitPermutation { targets })
    }

    /// All 24 permutations in lexicographic order of `targets`; the identity
    /// comes first.
    pub fn all() -> Vec<BitPermutation> {
        let mut out = Vec::with_capacity(24);
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    for d in 1..=4u8 {
                        if let Some(p) = BitPermutation::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn targets(&self) -> [u8; 4] {
        self.targets
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Permutes the bits of a value below 16.
    pub fn apply_nibble(&self, value: u8) -> u8 {
        let mut out = 0;
        for (i, &t) in self.targets.iter().enumerate() {
            let from = 3 - i as u32;
            let to = 4 - t as u32;
            if value & (1 << from) != 0 {
                out |= 1 << to;
            }
        }
        out
    }
}

/// Permutes the bit positions of every entry. Entries must be below 16.
pub fn apply_bitperm(p: BitPermutation, sq: &AdditiveSquare) -> Result<AdditiveSquare> {
    check_nibbles(sq)?;
    Ok(sq.map(|v| p.apply_nibble(v as u8) as u32))
}

/// Number of distinct images of `sq` under the 24 bit permutations.
pub fn orbit_size_s4(sq: &AdditiveSquare) -> Result<usize> {
    check_nibbles(sq)?;
    let images: BTreeSet<AdditiveSquare> = BitPermutation::all()
        .into_iter()
        .map(|p| sq.map(|v| p.apply_nibble(v as u8) as u32))
        .collect();
    Ok(images.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::fixtures::*;
    use crate::square::{check_additive, Square};

    fn tagged() -> Square<u32> {
        Square::from_fn(|i, j| (4 * i + j) as u32)
    }

    #[test]
    fn composition_table_matches_action() {
        let t = tagged();
        for a in D8Element::ALL {
            for b in D8Element::ALL {
                assert_eq!(a.compose(b).apply(&t), a.apply(&b.apply(&t)), "{a} ∘ {b}");
            }
        }
    }

    #[test]
    fn group_axioms() {
        for a in D8Element::ALL {
            assert_eq!(a.compose(Identity), a);
            assert_eq!(Identity.compose(a), a);
            assert_eq!(a.compose(a.inverse()), Identity);
            assert_eq!(a.inverse().compose(a), Identity);
            for b in D8Element::ALL {
                for c in D8Element::ALL {
                    assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
                }
            }
        }
        let images: BTreeSet<_> = D8Element::ALL.iter().map(|g| g.apply(&tagged())).collect();
        assert_eq!(images.len(), 8);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply_d8(Identity, &EXAMPLE_1), EXAMPLE_1);
        assert_eq!(apply_d8(Rot180, &apply_d8(Rot180, &EXAMPLE_1)), EXAMPLE_1);
        let r = apply_d8(Rot90, &EXAMPLE_1);
        assert_eq!(r.rows()[0], [2, 9, 5, 14]);
        for g in D8Element::ALL {
            assert_eq!(
                check_additive(&g.apply(&EXAMPLE_1)),
                check_additive(&EXAMPLE_1)
            );
        }
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let c = canonical_d8(&EXAMPLE_1);
        assert_eq!(canonical_d8(&c), c);
        for g in D8Element::ALL {
            assert_eq!(canonical_d8(&g.apply(&EXAMPLE_1)), c);
            assert!(c <= g.apply(&EXAMPLE_1));
        }
        assert_eq!(orbit_size_d8(&EXAMPLE_1), 8);
        assert_eq!(orbit_size_d8(&Square::new([[7u8; 4]; 4])), 1);
    }

    #[test]
    fn bit_permutations() {
        let all = BitPermutation::all();
        assert_eq!(all.len(), 24);
        assert!(all[0].is_identity());
        assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 24);
        let swap = BitPermutation::swap(1, 4).unwrap();
        assert_eq!(swap.apply_nibble(0b1110), 0b0111);
        assert_eq!(BitPermutation::new([1, 1, 2, 3]), None);
        assert_eq!(BitPermutation::new([0, 1, 2, 3]), None);
        assert_eq!(
            apply_bitperm(BitPermutation::IDENTITY, &EXAMPLE_1).unwrap(),
            EXAMPLE_1
        );
        // each nibble map is a bijection on 0..16 fixing 0 and 15
        for p in &all {
            let image: BTreeSet<u8> = (0..16).map(|v| p.apply_nibble(v)).collect();
            assert_eq!(image.len(), 16);
            assert_eq!(p.apply_nibble(0), 0);
            assert_eq!(p.apply_nibble(15), 15);
        }
    }

    #[test]
    fn s4_orbits_of_examples() {
        assert_eq!(orbit_size_s4(&EXAMPLE_1).unwrap(), 24);
        assert_eq!(orbit_size_s4(&IMAGE_2010).unwrap(), 24);
        for p in BitPermutation::all().into_iter().skip(1) {
            assert_ne!(apply_bitperm(p, &EXAMPLE_1).unwrap(), EXAMPLE_1);
        }
    }

    #[test]
    fn bitperm_rejects_wide_entries() {
        let sq = Square::new([[16u32; 4]; 4]);
        assert!(apply_bitperm(BitPermutation::IDENTITY, &sq).is_err());
        assert!(orbit_size_s4(&sq).is_err());
    }
}
