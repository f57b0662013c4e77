//! Bit-plane forms: 4x4 binary matrices with exactly two ones on every line.
//!
//! A compatible square splits into four bit planes (weights 8, 4, 2, 1), each
//! of which is a form. There are sixteen forms, falling into five D8 orbits
//! `A`..`E` generated by five fundamental forms. The multiset of orbit letters
//! of a square's planes is its class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::correspond::{compatible_squares, require_compatible};
use crate::error::{Error, Result};
use crate::groups::D8Element;
use crate::square::{check_nibbles, is_normal_entries, lines, Square, ORDER};
use crate::AdditiveSquare;

/// Bit of cell `(row, col)` in the row-major 16-bit reading, `(0,0)` highest.
const fn cell_bit(row: usize, col: usize) -> u16 {
    1 << (15 - (row * ORDER + col))
}

const ALL_ONES: u16 = u16::MAX;

/// Ones on each line of `bits`, in [`lines`] order.
fn line_counts(bits: u16) -> [u32; 10] {
    lines().map(|l| {
        l.cells
            .iter()
            .filter(|&&(r, c)| bits & cell_bit(r, c) != 0)
            .count() as u32
    })
}

/// A form, stored as its row-major bit reading. Ordering by that reading is
/// the sort order used for forms throughout.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form(u16);

impl Form {
    pub fn from_bits(bits: u16) -> Result<Self> {
        match line_counts(bits).iter().zip(lines()).find(|(&n, _)| n != 2) {
            None => Ok(Form(bits)),
            Some((&count, line)) => Err(Error::NotAForm {
                line: line.kind.to_string(),
                count,
            }),
        }
    }

    pub fn is_form(bits: u16) -> bool {
        line_counts(bits).iter().all(|&n| n == 2)
    }

    /// Builds a form from printed rows such as `"0011"`.
    pub fn from_strs(rows: [&str; 4]) -> Result<Self> {
        let mut bits = 0u16;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_bytes();
            if row.len() != ORDER || row.iter().any(|b| !matches!(b, b'0' | b'1')) {
                return Err(Error::Shape {
                    rows: 4,
                    lengths: rows.iter().map(|r| r.len()).collect(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                if b == b'1' {
                    bits |= cell_bit(i, j);
                }
            }
        }
        Form::from_bits(bits)
    }

    pub fn from_square(sq: &Square<u8>) -> Result<Self> {
        let mut bits = 0u16;
        for (i, row) in sq.rows().iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => bits |= cell_bit(i, j),
                    _ => {
                        return Err(Error::EntryOutOfRange {
                            row: i,
                            col: j,
                            value: v as u64,
                        })
                    }
                }
            }
        }
        Form::from_bits(bits)
    }

    pub fn bits(&self) -> u16 {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        (self.0 & cell_bit(row, col) != 0) as u8
    }

    pub fn to_square(&self) -> Square<u8> {
        Square::from_fn(|i, j| self.get(i, j))
    }

    /// Row `i` as a string of `0`/`1`.
    pub fn row_string(&self, row: usize) -> String {
        (0..ORDER)
            .map(|j| if self.get(row, j) == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn transform(&self, g: D8Element) -> Form {
        let sq = g.apply(&self.to_square());
        Form::from_square(&sq).expect("D8 maps forms to forms")
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..ORDER).map(|i| self.row_string(i)).collect();
        write!(f, "Form({})", rows.join("/"))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..ORDER).map(|i| self.row_string(i)).collect();
        f.write_str(&rows.join(" "))
    }
}

/// All sixteen forms, found by testing every 4x4 binary matrix.
pub fn enumerate_forms() -> Vec<Form> {
    (0..=u16::MAX)
        .filter(|&b| Form::is_form(b))
        .map(Form)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitLetter {
    A,
    B,
    C,
    D,
    E,
}

impl OrbitLetter {
    pub const ALL: [OrbitLetter; 5] = [
        OrbitLetter::A,
        OrbitLetter::B,
        OrbitLetter::C,
        OrbitLetter::D,
        OrbitLetter::E,
    ];

    pub fn as_char(self) -> char {
        match self {
            OrbitLetter::A => 'A',
            OrbitLetter::B => 'B',
            OrbitLetter::C => 'C',
            OrbitLetter::D => 'D',
            OrbitLetter::E => 'E',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(OrbitLetter::A),
            'B' => Some(OrbitLetter::B),
            'C' => Some(OrbitLetter::C),
            'D' => Some(OrbitLetter::D),
            'E' => Some(OrbitLetter::E),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// The five fundamental forms, one per orbit, in letter order.
pub fn fundamental_forms() -> [(OrbitLetter, Form); 5] {
    let f = |rows| Form::from_strs(rows).expect("fundamental form");
    [
        (OrbitLetter::A, f(["0011", "0101", "1010", "1100"])),
        (OrbitLetter::B, f(["0011", "1100", "0011", "1100"])),
        (OrbitLetter::C, f(["0011", "1100", "1100", "0011"])),
        (OrbitLetter::D, f(["0101", "1010", "1010", "0101"])),
        (OrbitLetter::E, f(["0101", "1100", "0011", "1010"])),
    ]
}

/// Orbit letter plus position within the orbit. The fundamental form has
/// index 0; the other members follow in form order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitLabel {
    pub letter: OrbitLetter,
    pub index: u8,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.index)
    }
}

struct OrbitTable {
    /// Members of each orbit, indexed by letter, in label-index order.
    members: [Vec<Form>; 5],
    labels: BTreeMap<Form, OrbitLabel>,
}

fn orbit_table() -> &'static OrbitTable {
    static TABLE: OnceLock<OrbitTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut members: [Vec<Form>; 5] = Default::default();
        let mut labels = BTreeMap::new();
        for (slot, (letter, fundamental)) in fundamental_forms().into_iter().enumerate() {
            let others: BTreeSet<Form> = D8Element::ALL
                .iter()
                .map(|&g| fundamental.transform(g))
                .filter(|&x| x != fundamental)
                .collect();
            let orbit: Vec<Form> = std::iter::once(fundamental).chain(others).collect();
            for (index, &x) in orbit.iter().enumerate() {
                let label = OrbitLabel {
                    letter,
                    index: index as u8,
                };
                assert!(labels.insert(x, label).is_none(), "orbits overlap at {x:?}");
            }
            members[slot] = orbit;
        }
        OrbitTable { members, labels }
    })
}

/// Members of the orbit `letter`, in label-index order.
pub fn orbit(letter: OrbitLetter) -> &'static [Form] {
    &orbit_table().members[letter as usize]
}

pub fn label_form(x: &Form) -> Result<OrbitLabel> {
    orbit_table()
        .labels
        .get(x)
        .copied()
        .ok_or_else(|| match Form::from_bits(x.0) {
            Err(e) => e,
            Ok(_) => unreachable!("every form lies in one of the five orbits"),
        })
}

/// Label of a form; every value of type [`Form`] has one.
fn label_of(x: &Form) -> OrbitLabel {
    orbit_table().labels[x]
}

/// Form whose sum with `x` is the all-ones matrix.
pub fn complement(x: &Form) -> Form {
    Form(x.0 ^ ALL_ONES)
}

/// Unordered pairs of forms that sum to the all-ones matrix, smaller first.
pub fn complement_pairs() -> Vec<(Form, Form)> {
    enumerate_forms()
        .into_iter()
        .filter_map(|x| {
            let y = complement(&x);
            (x < y).then_some((x, y))
        })
        .collect()
}

/// `8·q[0] + 4·q[1] + 2·q[2] + q[3]`.
pub fn compose(q: &[Form; 4]) -> AdditiveSquare {
    Square::from_fn(|i, j| {
        q.iter()
            .fold(0u32, |acc, x| (acc << 1) | u32::from(x.get(i, j)))
    })
}

/// Raw bit planes of a square with entries below 16, weight 8 first.
pub fn bit_planes(a: &AdditiveSquare) -> Result<[u16; 4]> {
    check_nibbles(a)?;
    let mut planes = [0u16; 4];
    for (i, row) in a.rows().iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            for (k, plane) in planes.iter_mut().enumerate() {
                if v & (8 >> k) != 0 {
                    *plane |= cell_bit(i, j);
                }
            }
        }
    }
    Ok(planes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decomposition {
    /// Bit planes with weights 8, 4, 2, 1.
    pub planes: [Form; 4],
    pub labels: [OrbitLabel; 4],
}

impl Decomposition {
    pub fn from_planes(planes: [Form; 4]) -> Self {
        Decomposition {
            labels: planes.map(|x| label_of(&x)),
            planes,
        }
    }

    pub fn compose(&self) -> AdditiveSquare {
        compose(&self.planes)
    }

    pub fn class(&self) -> ClassLabel {
        ClassLabel::new(self.labels.map(|l| l.letter))
    }
}

impl fmt::Display for Decomposition {
    /// `8·C1 + 4·C0 + 2·D2 + 1·D3`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, label) in self.labels.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·{}", 8 >> k, label)?;
        }
        Ok(())
    }
}

/// Splits a normal compatible square into its four bit-plane forms.
pub fn decompose(a: &AdditiveSquare) -> Result<Decomposition> {
    require_compatible(a)?;
    let planes = bit_planes(a)?.map(Form);
    Ok(Decomposition::from_planes(planes))
}

/// Sorted multiset of four orbit letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel([OrbitLetter; 4]);

impl ClassLabel {
    pub fn new(mut letters: [OrbitLetter; 4]) -> Self {
        letters.sort_unstable();
        ClassLabel(letters)
    }

    pub fn letters(&self) -> [OrbitLetter; 4] {
        self.0
    }

    pub fn is_admissible(&self) -> bool {
        ADMISSIBLE_CLASSES.contains(self)
    }
}

impl fmt::Display for ClassLabel {
    /// `(C,C,D,D)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    /// Accepts `(C,C,D,D)`, `C,C,D,D` or `CCDD`, in any letter order.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidClassLabel(s.to_string());
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(inner);
        let letters: Vec<OrbitLetter> = inner
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(OrbitLetter::from_char)
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        let letters: [OrbitLetter; 4] = letters.try_into().map_err(|_| bad())?;
        Ok(ClassLabel::new(letters))
    }
}

macro_rules! class {
    ($a:ident, $b:ident, $c:ident, $d:ident) => {
        ClassLabel([
            OrbitLetter::$a,
            OrbitLetter::$b,
            OrbitLetter::$c,
            OrbitLetter::$d,
        ])
    };
}

/// The seven classes that contain normal squares.
pub const ADMISSIBLE_CLASSES: [ClassLabel; 7] = [
    class!(A, C, D, E),
    class!(B, B, C, C),
    class!(B, B, C, D),
    class!(B, B, D, D),
    class!(B, C, C, D),
    class!(B, C, D, D),
    class!(C, C, D, D),
];

/// Expected number of normal squares in each admissible class.
pub const EXPECTED_CENSUS: [(ClassLabel, usize); 7] = [
    (class!(A, C, D, E), 768),
    (class!(B, B, C, C), 384),
    (class!(B, B, C, D), 768),
    (class!(B, B, D, D), 384),
    (class!(B, C, C, D), 768),
    (class!(B, C, D, D), 768),
    (class!(C, C, D, D), 384),
];

pub fn classify(a: &AdditiveSquare) -> Result<ClassLabel> {
    Ok(decompose(a)?.class())
}

/// Number of compatible squares in each class that occurs.
pub fn class_census() -> BTreeMap<ClassLabel, usize> {
    let mut census = BTreeMap::new();
    for a in compatible_squares() {
        let class = classify(a).expect("compatible squares decompose");
        *census.entry(class).or_insert(0) += 1;
    }
    census
}

/// Compatible squares of `class`, sorted, with their decompositions.
pub fn class_members(class: &ClassLabel) -> Vec<(AdditiveSquare, Decomposition)> {
    compatible_squares()
        .iter()
        .filter_map(|a| {
            let d = decompose(a).expect("compatible squares decompose");
            (d.class() == *class).then_some((*a, d))
        })
        .collect()
}

/// Composes all 16⁴ ordered quadruples of forms and keeps the distinct normal
/// results.
pub fn generate_from_forms() -> BTreeSet<AdditiveSquare> {
    let forms = enumerate_forms();
    let found: Vec<AdditiveSquare> = forms
        .par_iter()
        .flat_map_iter(|&a| {
            let forms = &forms;
            forms.iter().flat_map(move |&b| {
                forms.iter().flat_map(move |&c| {
                    forms.iter().filter_map(move |&d| {
                        let sq = compose(&[a, b, c, d]);
                        is_normal_entries(&sq).then_some(sq)
                    })
                })
            })
        })
        .collect();
    let total = found.len();
    let set: BTreeSet<AdditiveSquare> = found.into_iter().collect();
    debug_assert_eq!(set.len(), total, "distinct quadruples gave equal squares");
    set
}

/// Forms that appear alongside `x` as another plane of some compatible
/// square, optionally restricted to squares of one class.
pub fn partners(x: &Form, class: Option<&ClassLabel>) -> BTreeSet<Form> {
    let mut out = BTreeSet::new();
    for a in compatible_squares() {
        let d = decompose(a).expect("compatible squares decompose");
        if class.is_some_and(|c| *c != d.class()) || !d.planes.contains(x) {
            continue;
        }
        out.extend(d.planes.iter().filter(|&p| p != x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::fixtures::*;
    use crate::square::line_sums;

    fn form(rows: [&str; 4]) -> Form {
        Form::from_strs(rows).unwrap()
    }

    #[test]
    fn sixteen_forms_from_six_rows() {
        let forms = enumerate_forms();
        assert_eq!(forms.len(), 16);
        assert!(forms.windows(2).all(|w| w[0] < w[1]));
        let allowed = ["1100", "1010", "1001", "0110", "0101", "0011"];
        for x in &forms {
            for i in 0..4 {
                assert!(allowed.contains(&x.row_string(i).as_str()));
            }
        }
        for (_, x) in fundamental_forms() {
            assert!(forms.contains(&x));
        }
    }

    #[test]
    fn fundamental_rows() {
        let [a, _, _, d, e] = fundamental_forms().map(|(_, x)| x);
        assert_eq!(a.row_string(0), "0011");
        assert_eq!(d.row_string(0), "0101");
        assert_eq!(e.row_string(1), "1100");
    }

    #[test]
    fn orbits_partition_forms() {
        let sizes: Vec<usize> = OrbitLetter::ALL.iter().map(|&l| orbit(l).len()).collect();
        assert_eq!(sizes, [2, 4, 4, 4, 2]);
        for x in enumerate_forms() {
            let label = label_form(&x).unwrap();
            assert_eq!(orbit(label.letter)[label.index as usize], x);
        }
        let a0 = fundamental_forms()[0].1;
        assert_eq!(
            label_form(&a0).unwrap(),
            OrbitLabel {
                letter: OrbitLetter::A,
                index: 0
            }
        );
        assert_eq!(
            label_form(&complement(&a0)).unwrap(),
            OrbitLabel {
                letter: OrbitLetter::A,
                index: 1
            }
        );
    }

    #[test]
    fn label_rejects_non_forms() {
        assert!(Form::from_bits(0).is_err());
        assert!(Form::from_strs(["0011", "0011", "0011", "0011"]).is_err());
        assert!(Form::from_strs(["001", "0011", "0011", "0011"]).is_err());
    }

    #[test]
    fn complements_stay_in_orbit() {
        for x in enumerate_forms() {
            let y = complement(&x);
            assert_eq!(complement(&y), x);
            assert_eq!(
                label_form(&y).unwrap().letter,
                label_form(&x).unwrap().letter
            );
            assert_eq!(x.bits() ^ y.bits(), ALL_ONES);
        }
        let pairs = complement_pairs();
        assert_eq!(pairs.len(), 8);
        let mut per_orbit = BTreeMap::new();
        for (x, _) in &pairs {
            *per_orbit.entry(label_form(x).unwrap().letter).or_insert(0) += 1;
        }
        use OrbitLetter::*;
        assert_eq!(
            per_orbit,
            BTreeMap::from([(A, 1), (B, 2), (C, 2), (D, 2), (E, 1)])
        );
    }

    #[test]
    fn compose_second_worked_example() {
        let q = [
            form(["0011", "1100", "0011", "1100"]),
            form(["1010", "1010", "0101", "0101"]),
            form(["0110", "0110", "1001", "1001"]),
            form(["1100", "0011", "0011", "1100"]),
        ];
        assert_eq!(
            compose(&q),
            Square::new([[5, 3, 14, 8], [12, 10, 7, 1], [2, 4, 9, 15], [11, 13, 0, 6]])
        );
        let permuted = [q[3], q[0], q[1], q[2]];
        assert_eq!(
            compose(&permuted),
            Square::new([[10, 9, 7, 4], [6, 5, 11, 8], [1, 2, 12, 15], [13, 14, 0, 3]])
        );
    }

    #[test]
    fn repeated_form_is_magic_not_normal() {
        let a0 = fundamental_forms()[0].1;
        let sq = compose(&[a0; 4]);
        assert_eq!(sq, a0.to_square().map(|v| 15 * v as u32));
        assert_eq!(line_sums(&sq), [30; 10]);
        assert!(!is_normal_entries(&sq));
    }

    #[test]
    fn decompose_first_worked_example() {
        let d = decompose(&EXAMPLE_1).unwrap();
        assert_eq!(
            d.planes,
            [
                form(["1001", "0110", "1001", "0110"]),
                form(["1001", "1001", "0110", "0110"]),
                form(["1100", "0011", "0011", "1100"]),
                form(["0101", "1010", "1010", "0101"]),
            ]
        );
        assert_eq!(d.compose(), EXAMPLE_1);
        assert_eq!(d.class().to_string(), "(C,C,D,D)");
    }

    #[test]
    fn decompose_2010_example() {
        let d = decompose(&IMAGE_2010).unwrap();
        assert_eq!(
            d.planes,
            [
                form(["1001", "0110", "1001", "0110"]),
                form(["1001", "1001", "0110", "0110"]),
                form(["1100", "0011", "0011", "1100"]),
                form(["1010", "0101", "0101", "1010"]),
            ]
        );
        assert_eq!(classify(&IMAGE_2010).unwrap().to_string(), "(C,C,D,D)");
    }

    #[test]
    fn decompose_rejects_bad_input() {
        assert_eq!(decompose(&AdditiveSquare::default()), Err(Error::NotNormal));
        let natural = Square::from_fn(|i, j| (4 * i + j) as u32);
        assert!(matches!(
            decompose(&natural),
            Err(Error::NotCompatible { .. })
        ));
    }

    #[test]
    fn class_label_parsing() {
        let c: ClassLabel = "(C,C,D,D)".parse().unwrap();
        assert_eq!(c, "DCDC".parse().unwrap());
        assert_eq!(c.to_string(), "(C,C,D,D)");
        assert!("(A,B,C)".parse::<ClassLabel>().is_err());
        assert!("(A,B,C,F)".parse::<ClassLabel>().is_err());
        assert!(!"(A,A,A,A)".parse::<ClassLabel>().unwrap().is_admissible());
        assert!(c.is_admissible());
    }

    #[test]
    fn census_matches_expected() {
        let census = class_census();
        assert_eq!(census, BTreeMap::from(EXPECTED_CENSUS));
        assert_eq!(census.values().sum::<usize>(), 4224);
    }
}
