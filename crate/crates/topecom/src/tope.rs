//! Tope sets of simple oriented matroids.
//!
//! A tope is a full sign vector in {+,-}^t; the matroid is represented
//! solely by its symmetric set of topes. Validation enforces simplicity
//! (no duplicate topes, closure under negation, no two ground elements
//! whose sign columns agree up to global sign).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Subsets of a tope set are u128 bitmasks, so a set holds at most 128 topes.
pub const MAX_TOPES: usize = 128;
/// Topes are packed into u32 bitmasks, one bit per ground element.
pub const MAX_GROUND: usize = 32;

/// One of the two sign values a tope coordinate can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A sign vector in {+,-}^t, packed as a bitmask with + encoded as 1.
///
/// Coordinate 1 sits in the most significant used bit, so the derived
/// integer order is exactly lexicographic order with '-' < '+'. That order
/// is canonical throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tope {
    t: u8,
    bits: u32,
}

impl Tope {
    /// Parse a string over {+,-}. Detailed errors are produced at the
    /// tope-set level where line numbers are known.
    pub fn parse(s: &str) -> Option<Tope> {
        let t = s.chars().count();
        if t == 0 || t > MAX_GROUND {
            return None;
        }
        let mut bits = 0u32;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '+' => bits |= 1,
                '-' => {}
                _ => return None,
            }
        }
        Some(Tope { t: t as u8, bits })
    }

    pub fn ground_size(&self) -> usize {
        self.t as usize
    }

    /// Sign at ground element `e` (1-indexed).
    pub fn sign(&self, e: usize) -> Result<Sign> {
        let t = self.t as usize;
        if e < 1 || e > t {
            return Err(Error::IndexOutOfRange { index: e, t });
        }
        Ok(if self.is_plus_at(e - 1) {
            Sign::Plus
        } else {
            Sign::Minus
        })
    }

    /// 0-indexed coordinate test.
    pub(crate) fn is_plus_at(&self, e0: usize) -> bool {
        self.bits >> (self.t as usize - 1 - e0) & 1 == 1
    }

    /// The opposite tope -T.
    pub fn negated(&self) -> Tope {
        let full = if self.t as usize == 32 {
            u32::MAX
        } else {
            (1u32 << self.t) - 1
        };
        Tope {
            t: self.t,
            bits: self.bits ^ full,
        }
    }

    /// The all-plus tope of a given ground size.
    pub fn all_plus(t: usize) -> Tope {
        assert!(t >= 1 && t <= MAX_GROUND);
        let full = if t == 32 { u32::MAX } else { (1u32 << t) - 1 };
        Tope {
            t: t as u8,
            bits: full,
        }
    }

    fn flip_coords(&self, coord_mask: u32) -> Tope {
        Tope {
            t: self.t,
            bits: self.bits ^ coord_mask,
        }
    }
}

impl fmt::Display for Tope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e0 in 0..self.t as usize {
            write!(f, "{}", if self.is_plus_at(e0) { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tope({self})")
    }
}

/// The set of opposites {-T : T in G}.
pub fn negate_set(g: &BTreeSet<Tope>) -> BTreeSet<Tope> {
    g.iter().map(Tope::negated).collect()
}

/// A subset of a tope set, as a bitmask over canonical tope indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TopeSubset(u128);

impl TopeSubset {
    pub const EMPTY: TopeSubset = TopeSubset(0);

    pub fn from_bits(bits: u128) -> TopeSubset {
        TopeSubset(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(i: usize) -> TopeSubset {
        TopeSubset(1u128 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> TopeSubset {
        TopeSubset(self.0 | 1u128 << i)
    }

    pub fn without(self, i: usize) -> TopeSubset {
        TopeSubset(self.0 & !(1u128 << i))
    }

    pub fn union(self, other: TopeSubset) -> TopeSubset {
        TopeSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: TopeSubset) -> TopeSubset {
        TopeSubset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: TopeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Indices of the member topes, ascending.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Debug for TopeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// The positive or negative halfspace of a ground element: the topes whose
/// sign at that element is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub element: usize,
    pub sign: Sign,
    pub members: TopeSubset,
}

/// The full, symmetric tope set of a simple oriented matroid.
///
/// Topes are stored in canonical ascending order; all iteration and
/// serialization orders derive from it. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct TopeSet {
    t: usize,
    topes: Vec<Tope>,
    opposite: Vec<usize>,
    plus_masks: Vec<TopeSubset>,
}

impl TopeSet {
    /// Validate raw sign strings and build a canonical tope set.
    ///
    /// Rows are numbered 1.. for error reporting; use [`TopeSet::from_rows`]
    /// to supply file line numbers instead.
    pub fn from_strings<I, S>(rows: I) -> Result<TopeSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let owned: Vec<String> = rows.into_iter().map(|s| s.as_ref().to_string()).collect();
        TopeSet::from_rows(owned.iter().enumerate().map(|(i, s)| (i + 1, s.as_str())))
    }

    /// Core validator; each row carries the label used in error messages.
    pub fn from_rows<'a, I>(rows: I) -> Result<TopeSet>
    where
        I: IntoIterator<Item = (usize, &'a str)>,
    {
        let rows: Vec<(usize, &str)> = rows.into_iter().collect();
        let Some(&(first_line, first)) = rows.first() else {
            return Err(Error::EmptyInput);
        };
        let t = first.chars().count();
        if t == 0 {
            return Err(Error::RaggedInput {
                line: first_line,
                expected: 1,
                found: 0,
            });
        }
        if t > MAX_GROUND {
            return Err(Error::TooLarge {
                what: "ground-set size",
                value: t,
                limit: MAX_GROUND,
            });
        }
        if rows.len() > MAX_TOPES {
            return Err(Error::TooLarge {
                what: "number of topes",
                value: rows.len(),
                limit: MAX_TOPES,
            });
        }

        let mut parsed: Vec<(usize, Tope)> = Vec::with_capacity(rows.len());
        for &(line, row) in &rows {
            let found = row.chars().count();
            if found != t {
                return Err(Error::RaggedInput {
                    line,
                    expected: t,
                    found,
                });
            }
            if let Some(bad) = row.chars().find(|&c| c != '+' && c != '-') {
                return Err(Error::BadSymbol { line, symbol: bad });
            }
            parsed.push((line, Tope::parse(row).expect("validated alphabet")));
        }

        let mut seen: BTreeSet<Tope> = BTreeSet::new();
        for &(line, tope) in &parsed {
            if !seen.insert(tope) {
                return Err(Error::Duplicate {
                    tope: tope.to_string(),
                    line,
                });
            }
        }

        let mut topes: Vec<Tope> = parsed.iter().map(|&(_, tope)| tope).collect();
        topes.sort_unstable();
        for tope in &topes {
            if !seen.contains(&tope.negated()) {
                return Err(Error::NotSymmetric {
                    tope: tope.to_string(),
                });
            }
        }

        let set = TopeSet::from_sorted_topes(t, topes);
        set.check_columns()?;
        Ok(set)
    }

    /// Assemble the lookup tables from a sorted, distinct, symmetric list.
    fn from_sorted_topes(t: usize, topes: Vec<Tope>) -> TopeSet {
        let opposite = topes
            .iter()
            .map(|tope| {
                topes
                    .binary_search(&tope.negated())
                    .expect("negation-closed")
            })
            .collect();
        let plus_masks = (0..t)
            .map(|e0| {
                let mut mask = TopeSubset::EMPTY;
                for (i, tope) in topes.iter().enumerate() {
                    if tope.is_plus_at(e0) {
                        mask = mask.with(i);
                    }
                }
                mask
            })
            .collect();
        TopeSet {
            t,
            topes,
            opposite,
            plus_masks,
        }
    }

    /// Simplicity: no two sign columns may agree up to global sign.
    fn check_columns(&self) -> Result<()> {
        let full = self.full_subset();
        for e0 in 0..self.t {
            for f0 in e0 + 1..self.t {
                let col_e = self.plus_masks[e0];
                let col_f = self.plus_masks[f0];
                if col_e == col_f {
                    return Err(Error::ParallelElements {
                        e: e0 + 1,
                        f: f0 + 1,
                        relation: "parallel",
                    });
                }
                if col_e.bits() == full.bits() & !col_f.bits() {
                    return Err(Error::ParallelElements {
                        e: e0 + 1,
                        f: f0 + 1,
                        relation: "antiparallel",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.t
    }

    /// Number of topes, written |T| in the API docs.
    pub fn len(&self) -> usize {
        self.topes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topes.is_empty()
    }

    pub fn topes(&self) -> &[Tope] {
        &self.topes
    }

    pub fn tope(&self, i: usize) -> Tope {
        self.topes[i]
    }

    pub fn index_of(&self, tope: Tope) -> Option<usize> {
        self.topes.binary_search(&tope).ok()
    }

    pub fn contains(&self, tope: Tope) -> bool {
        self.index_of(tope).is_some()
    }

    /// Index of -topes[i].
    pub fn opposite_index(&self, i: usize) -> usize {
        self.opposite[i]
    }

    /// The subset holding every tope.
    pub fn full_subset(&self) -> TopeSubset {
        if self.topes.len() == 128 {
            TopeSubset::from_bits(u128::MAX)
        } else {
            TopeSubset::from_bits((1u128 << self.topes.len()) - 1)
        }
    }

    /// The positive or negative halfspace of ground element `e` (1-indexed).
    pub fn halfspace(&self, e: usize, sign: Sign) -> Result<Halfspace> {
        if e < 1 || e > self.t {
            return Err(Error::IndexOutOfRange { index: e, t: self.t });
        }
        let plus = self.plus_masks[e - 1];
        let members = match sign {
            Sign::Plus => plus,
            Sign::Minus => TopeSubset::from_bits(self.full_subset().bits() & !plus.bits()),
        };
        Ok(Halfspace {
            element: e,
            sign,
            members,
        })
    }

    pub(crate) fn plus_mask(&self, e0: usize) -> TopeSubset {
        self.plus_masks[e0]
    }

    /// Reorient on a set of ground elements: flip those coordinates in
    /// every tope. An involution; the result is again a valid tope set.
    pub fn reorient(&self, set: &[usize]) -> Result<TopeSet> {
        let mut coord_mask = 0u32;
        for &e in set {
            if e < 1 || e > self.t {
                return Err(Error::IndexOutOfRange { index: e, t: self.t });
            }
            coord_mask |= 1 << (self.t - e);
        }
        let mut topes: Vec<Tope> = self
            .topes
            .iter()
            .map(|tope| tope.flip_coords(coord_mask))
            .collect();
        topes.sort_unstable();
        // Negation closure and column simplicity survive coordinate flips.
        Ok(TopeSet::from_sorted_topes(self.t, topes))
    }

    /// An oriented matroid given by its topes is acyclic iff the all-plus
    /// tope is present (iff a singleton committee exists).
    pub fn is_acyclic(&self) -> bool {
        self.contains(Tope::all_plus(self.t))
    }

    /// Map a subset through tope negation.
    pub fn negate_subset(&self, s: TopeSubset) -> TopeSubset {
        let mut out = TopeSubset::EMPTY;
        for i in s.indices() {
            out = out.with(self.opposite[i]);
        }
        out
    }

    /// Bitmask for an explicit list of member topes.
    pub fn subset_of(&self, members: &[Tope]) -> Result<TopeSubset> {
        let mut out = TopeSubset::EMPTY;
        for &tope in members {
            match self.index_of(tope) {
                Some(i) => out = out.with(i),
                None => {
                    return Err(Error::NotSubset {
                        tope: tope.to_string(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Member topes of a subset, in canonical order.
    pub fn subset_topes(&self, s: TopeSubset) -> Vec<Tope> {
        s.indices().map(|i| self.topes[i]).collect()
    }

    pub fn tope_strings(&self) -> Vec<String> {
        self.topes.iter().map(Tope::to_string).collect()
    }
}

impl fmt::Debug for TopeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TopeSet(t={}, {:?})", self.t, self.tope_strings())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn lines3() -> TopeSet {
        TopeSet::from_strings(["+++", "-++", "-+-", "---", "+--", "+-+"]).unwrap()
    }

    #[test]
    fn lines3_is_valid_and_canonical() {
        let m = lines3();
        assert_eq!(m.ground_size(), 3);
        assert_eq!(m.len(), 6);
        assert_eq!(
            m.tope_strings(),
            ["---", "-+-", "-++", "+--", "+-+", "+++"]
        );
    }

    #[test]
    fn parallel_columns_rejected() {
        let err = TopeSet::from_strings(["++", "--"]).unwrap_err();
        match err {
            Error::ParallelElements { e, f, relation } => {
                assert_eq!((e, f), (1, 2));
                assert_eq!(relation, "parallel");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn antiparallel_columns_rejected() {
        let err = TopeSet::from_strings(["+-", "-+"]).unwrap_err();
        match err {
            Error::ParallelElements { e, f, relation } => {
                assert_eq!((e, f), (1, 2));
                assert_eq!(relation, "antiparallel");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_opposite_rejected() {
        let err = TopeSet::from_strings(["++", "+-"]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
    }

    #[test]
    fn ragged_and_bad_symbol_name_the_line() {
        match TopeSet::from_strings(["+++", "++"]).unwrap_err() {
            Error::RaggedInput {
                line,
                expected,
                found,
            } => assert_eq!((line, expected, found), (2, 3, 2)),
            other => panic!("unexpected error {other:?}"),
        }
        match TopeSet::from_strings(["+++", "+0+"]).unwrap_err() {
            Error::BadSymbol { line, symbol } => assert_eq!((line, symbol), (2, '0')),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_rejected() {
        let err = TopeSet::from_strings(["+-", "-+", "+-"]).unwrap_err();
        assert!(matches!(err, Error::Duplicate { line: 3, .. }));
    }

    #[test]
    fn halfspaces_partition() {
        let m = lines3();
        let plus = m.halfspace(1, Sign::Plus).unwrap();
        let minus = m.halfspace(1, Sign::Minus).unwrap();
        assert_eq!(
            m.subset_topes(plus.members)
                .iter()
                .map(Tope::to_string)
                .collect::<Vec<_>>(),
            ["+--", "+-+", "+++"]
        );
        assert_eq!(plus.members.len(), 3);
        assert_eq!(minus.members.len(), 3);
        assert!(plus.members.intersection(minus.members).is_empty());
        assert_eq!(plus.members.union(minus.members), m.full_subset());
        assert!(m.halfspace(4, Sign::Plus).is_err());
    }

    #[test]
    fn reorient_examples() {
        let m = lines3();
        let flipped = m.reorient(&[3]).unwrap();
        assert_eq!(
            flipped.tope_strings(),
            ["--+", "-+-", "-++", "+--", "+-+", "++-"]
        );
        assert_eq!(flipped.reorient(&[3]).unwrap(), m);
        assert_eq!(m.reorient(&[]).unwrap(), m);
        assert_eq!(m.reorient(&[1, 2, 3]).unwrap(), m);
        assert!(m.reorient(&[4]).is_err());
    }

    #[test]
    fn acyclicity() {
        let m = lines3();
        assert!(m.is_acyclic());
        assert!(!m.reorient(&[3]).unwrap().is_acyclic());
    }

    #[test]
    fn negate_set_involution() {
        let g: BTreeSet<Tope> = [Tope::parse("+++").unwrap()].into_iter().collect();
        let n = negate_set(&g);
        assert_eq!(n.iter().next().unwrap().to_string(), "---");
        assert_eq!(negate_set(&n), g);
        assert!(negate_set(&BTreeSet::new()).is_empty());
    }

    #[test]
    fn subset_roundtrip_and_not_subset() {
        let m = lines3();
        let s = m
            .subset_of(&[Tope::parse("+++").unwrap(), Tope::parse("-++").unwrap()])
            .unwrap();
        assert_eq!(s.len(), 2);
        let negated = m.negate_subset(s);
        assert_eq!(
            m.subset_topes(negated)
                .iter()
                .map(Tope::to_string)
                .collect::<Vec<_>>(),
            ["---", "+--"]
        );
        assert!(m.subset_of(&[Tope::parse("++-").unwrap()]).is_err());
    }
}
