//! Ground-truth enumeration of tope committees.
//!
//! A committee is a tope subset with a strict + majority in every
//! coordinate. Everything here is exhaustive search; the closed-form
//! modules are tested against these counts.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::tope::{Tope, TopeSet, TopeSubset};

/// Which committees a count refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaVariant {
    /// All committees.
    General,
    /// Committees containing no pair {T, -T}.
    OppositeFree,
}

/// Committee counts by cardinality k = 1 ..= |T|/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaVector {
    variant: KappaVariant,
    counts: Vec<BigInt>,
}

impl KappaVector {
    pub fn new(variant: KappaVariant, counts: Vec<BigInt>) -> KappaVector {
        KappaVector { variant, counts }
    }

    pub fn variant(&self) -> KappaVariant {
        self.variant
    }

    /// Number of components, |T|/2.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// The count at cardinality `k` (1-indexed).
    pub fn get(&self, k: usize) -> &BigInt {
        &self.counts[k - 1]
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    /// Exact decimal strings, for JSON output.
    pub fn decimal_strings(&self) -> Vec<String> {
        self.counts.iter().map(BigInt::to_string).collect()
    }
}

impl std::fmt::Display for KappaVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A tope committee: strict per-coordinate + majority among its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Committee {
    pub members: TopeSubset,
}

impl Committee {
    pub fn topes(&self, m: &TopeSet) -> Vec<Tope> {
        m.subset_topes(self.members)
    }
}

/// Strict majority test on an explicit list of member topes.
pub fn is_committee(m: &TopeSet, members: &[Tope]) -> Result<bool> {
    if members.is_empty() {
        return Err(Error::BadCardinality {
            k: 0,
            max: m.len() / 2,
        });
    }
    let subset = m.subset_of(members)?;
    if subset.len() != members.len() {
        // repeated topes collapse in the mask; treat as a bad subset
        return Err(Error::NotSubset {
            tope: "repeated member".to_string(),
        });
    }
    Ok(is_committee_mask(m, subset))
}

/// Strict majority test on a subset mask.
pub fn is_committee_mask(m: &TopeSet, subset: TopeSubset) -> bool {
    let k = subset.len();
    (0..m.ground_size()).all(|e0| 2 * subset.intersection(m.plus_mask(e0)).len() > k)
}

/// Walks k-subsets in canonical order with incremental per-coordinate
/// tallies; the coordinate that failed last is checked first on the next
/// leaf, which is where almost all rejections happen.
struct Walker<'a> {
    m: &'a TopeSet,
    k: usize,
    opposite_free: bool,
    tallies: Vec<u32>,
    chosen: TopeSubset,
    last_failed: usize,
}

impl<'a> Walker<'a> {
    fn new(m: &'a TopeSet, k: usize, opposite_free: bool) -> Walker<'a> {
        Walker {
            m,
            k,
            opposite_free,
            tallies: vec![0; m.ground_size()],
            chosen: TopeSubset::EMPTY,
            last_failed: 0,
        }
    }

    fn push(&mut self, i: usize) {
        for e0 in 0..self.m.ground_size() {
            if self.m.tope(i).is_plus_at(e0) {
                self.tallies[e0] += 1;
            }
        }
        self.chosen = self.chosen.with(i);
    }

    fn pop(&mut self, i: usize) {
        for e0 in 0..self.m.ground_size() {
            if self.m.tope(i).is_plus_at(e0) {
                self.tallies[e0] -= 1;
            }
        }
        self.chosen = self.chosen.without(i);
    }

    fn majority_holds(&mut self) -> bool {
        let t = self.m.ground_size();
        let k = self.k as u32;
        for off in 0..t {
            let e0 = (self.last_failed + off) % t;
            if 2 * self.tallies[e0] <= k {
                self.last_failed = e0;
                return false;
            }
        }
        true
    }

    fn walk(&mut self, start: usize, depth: usize, out: &mut impl FnMut(TopeSubset)) {
        if depth == self.k {
            if self.majority_holds() {
                out(self.chosen);
            }
            return;
        }
        let n = self.m.len();
        // not enough topes left to reach cardinality k
        let last = n - (self.k - depth);
        for i in start..=last {
            if self.opposite_free && self.chosen.contains(self.m.opposite_index(i)) {
                continue;
            }
            self.push(i);
            self.walk(i + 1, depth + 1, out);
            self.pop(i);
        }
    }
}

fn check_cardinality(m: &TopeSet, k: usize) -> Result<()> {
    let max = m.len() / 2;
    if k < 1 || k > max {
        return Err(Error::BadCardinality { k, max });
    }
    Ok(())
}

/// All committees of cardinality k, in canonical order.
pub fn committees_of_size(m: &TopeSet, k: usize, opposite_free: bool) -> Result<Vec<Committee>> {
    check_cardinality(m, k)?;
    let mut found = Vec::new();
    let mut walker = Walker::new(m, k, opposite_free);
    walker.walk(0, 0, &mut |members| found.push(Committee { members }));
    Ok(found)
}

/// Exhaustive count of committees of cardinality k. Parallelized by
/// partitioning on the first member; exact integer sums commute, so the
/// result does not depend on scheduling.
pub fn count_committees_of_size(m: &TopeSet, k: usize, opposite_free: bool) -> Result<BigInt> {
    check_cardinality(m, k)?;
    let n = m.len();
    let total: u64 = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            let mut walker = Walker::new(m, k, opposite_free);
            walker.push(first);
            walker.walk(first + 1, 1, &mut |_| count += 1);
            count
        })
        .sum();
    Ok(BigInt::from(total))
}

/// The committee-count vector kappa* (or its opposite-free variant) by
/// brute force, components k = 1 ..= |T|/2.
pub fn kappa_star(m: &TopeSet, variant: KappaVariant) -> KappaVector {
    let counts = (1..=m.len() / 2)
        .map(|k| {
            count_committees_of_size(m, k, variant == KappaVariant::OppositeFree)
                .expect("k in range")
        })
        .collect();
    KappaVector::new(variant, counts)
}

/// Recover the general vector from the opposite-free one:
/// kappa*_k = sum over j <= k, j = k (mod 2) of
/// C((|T|-2j)/2, (k-j)/2) * ring_j.
///
/// Every opposite-free committee of size j extends to a size-k committee by
/// adding (k-j)/2 of the (|T|-2j)/2 untouched opposite pairs.
pub fn expand_ring_to_general(ring: &KappaVector, t_size: usize) -> Result<KappaVector> {
    if ring.variant() != KappaVariant::OppositeFree {
        return Err(Error::WrongVariant);
    }
    if t_size % 2 != 0 || ring.len() != t_size / 2 {
        return Err(Error::LengthMismatch {
            expected: ring.len() * 2,
            found: t_size,
        });
    }
    let half = t_size / 2;
    let counts = (1..=half)
        .map(|k| {
            let mut total = BigInt::zero();
            for j in (1..=k).rev().step_by(2).rev() {
                // j runs over 1..=k with j = k (mod 2)
                let pairs = (t_size as i64 - 2 * j as i64) / 2;
                total += binomial(pairs, ((k - j) / 2) as i64) * ring.get(j);
            }
            total
        })
        .collect();
    Ok(KappaVector::new(KappaVariant::General, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use std::collections::BTreeSet;

    fn lines3() -> TopeSet {
        TopeSet::from_strings(["+++", "-++", "-+-", "---", "+--", "+-+"]).unwrap()
    }

    fn tope(s: &str) -> Tope {
        Tope::parse(s).unwrap()
    }

    /// Test-only oracle, independent of the walker: plain combinations and
    /// per-coordinate sums over sign characters.
    fn naive_committees(rows: &[&str], k: usize, opposite_free: bool) -> Vec<BTreeSet<String>> {
        let t = rows[0].len();
        let mut sorted: Vec<&str> = rows.to_vec();
        sorted.sort_by_key(|s| s.chars().map(|c| c == '+').collect::<Vec<_>>());
        let neg = |s: &str| -> String {
            s.chars().map(|c| if c == '+' { '-' } else { '+' }).collect()
        };
        sorted
            .iter()
            .combinations(k)
            .filter(|combo| {
                if opposite_free {
                    let set: BTreeSet<&str> = combo.iter().map(|s| **s).collect();
                    if combo.iter().any(|s| set.contains(neg(s).as_str())) {
                        return false;
                    }
                }
                (0..t).all(|e| {
                    let plus = combo.iter().filter(|s| s.as_bytes()[e] == b'+').count();
                    2 * plus > k
                })
            })
            .map(|combo| combo.into_iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn is_committee_examples() {
        let m = lines3();
        assert!(is_committee(&m, &[tope("+++")]).unwrap());
        assert!(!is_committee(&m, &[tope("+++"), tope("-++")]).unwrap());
        assert!(is_committee(&m, &[tope("+++"), tope("-++"), tope("+-+")]).unwrap());
        assert!(is_committee(&m, &[tope("++-")]).is_err());
        assert!(is_committee(&m, &[]).is_err());
    }

    #[test]
    fn lines3_committees_of_size_three() {
        let m = lines3();
        let ring = committees_of_size(&m, 3, true).unwrap();
        assert_eq!(ring.len(), 1);
        assert_eq!(
            ring[0]
                .topes(&m)
                .iter()
                .map(Tope::to_string)
                .collect::<Vec<_>>(),
            ["-++", "+-+", "+++"]
        );
        let general = committees_of_size(&m, 3, false).unwrap();
        assert_eq!(general.len(), 3);
        assert!(committees_of_size(&m, 2, false).unwrap().is_empty());
        assert!(committees_of_size(&m, 4, false).is_err());
        assert!(committees_of_size(&m, 0, false).is_err());
    }

    #[test]
    fn kappa_vectors_lines3() {
        let m = lines3();
        let general = kappa_star(&m, KappaVariant::General);
        let ring = kappa_star(&m, KappaVariant::OppositeFree);
        assert_eq!(general.decimal_strings(), ["1", "0", "3"]);
        assert_eq!(ring.decimal_strings(), ["1", "0", "1"]);
        // non-acyclic reorientation: kappa*_1 = 0 and kappa*_3 = ring kappa*_3
        let flipped = m.reorient(&[3]).unwrap();
        let fg = kappa_star(&flipped, KappaVariant::General);
        let fr = kappa_star(&flipped, KappaVariant::OppositeFree);
        assert_eq!(fg.decimal_strings(), ["0", "0", "1"]);
        assert_eq!(fr.decimal_strings(), ["0", "0", "1"]);
    }

    #[test]
    fn matches_naive_oracle_on_lines3_and_reorientations() {
        let rows = ["+++", "-++", "-+-", "---", "+--", "+-+"];
        let m = lines3();
        for reorientation in [vec![], vec![1], vec![3], vec![1, 2]] {
            let m = m.reorient(&reorientation).unwrap();
            let rows: Vec<String> = m.tope_strings();
            let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
            for k in 1..=3 {
                for ring in [false, true] {
                    let ours: Vec<BTreeSet<String>> = committees_of_size(&m, k, ring)
                        .unwrap()
                        .iter()
                        .map(|c| c.topes(&m).iter().map(Tope::to_string).collect())
                        .collect();
                    let naive = naive_committees(&rows, k, ring);
                    assert_eq!(ours, naive, "k={k} ring={ring}");
                }
            }
        }
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn expansion_examples() {
        let ring = KappaVector::new(
            KappaVariant::OppositeFree,
            vec![1, 0, 1].into_iter().map(BigInt::from).collect(),
        );
        let general = expand_ring_to_general(&ring, 6).unwrap();
        assert_eq!(general.decimal_strings(), ["1", "0", "3"]);

        let ring = KappaVector::new(
            KappaVariant::OppositeFree,
            vec![0, 0, 5].into_iter().map(BigInt::from).collect(),
        );
        let general = expand_ring_to_general(&ring, 6).unwrap();
        assert_eq!(general.decimal_strings(), ["0", "0", "5"]);

        // kappa*_5 = (|T|-4)(|T|-2)/8 for a lone singleton committee
        let ring = KappaVector::new(
            KappaVariant::OppositeFree,
            vec![1, 0, 0, 0, 0].into_iter().map(BigInt::from).collect(),
        );
        let general = expand_ring_to_general(&ring, 10).unwrap();
        assert_eq!(general.get(5), &BigInt::from(6));

        assert!(expand_ring_to_general(&ring, 6).is_err());
        let general_in = KappaVector::new(KappaVariant::General, vec![BigInt::zero()]);
        assert!(matches!(
            expand_ring_to_general(&general_in, 2),
            Err(Error::WrongVariant)
        ));
    }

    #[test]
    fn count_matches_collect() {
        let m = lines3();
        for k in 1..=3 {
            for ring in [false, true] {
                assert_eq!(
                    count_committees_of_size(&m, k, ring).unwrap(),
                    BigInt::from(committees_of_size(&m, k, ring).unwrap().len())
                );
            }
        }
    }
}
