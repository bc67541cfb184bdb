//! Families of equal-cardinality tope subsets drawn from positive
//! halfspaces; the index sets of the alternating sums.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::tope::{Sign, TopeSet, TopeSubset};

/// A deduplicated, canonically ordered family of h-subsets of halfspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    h: usize,
    members: Vec<TopeSubset>,
}

impl SubsetFamily {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[TopeSubset] {
        &self.members
    }

    fn from_set(h: usize, set: BTreeSet<TopeSubset>) -> SubsetFamily {
        let mut members: Vec<TopeSubset> = set.into_iter().collect();
        // canonical order: lexicographic on ascending member-index lists
        members.sort_by_key(|s| s.indices().collect::<Vec<_>>());
        SubsetFamily { h, members }
    }
}

fn check_h(m: &TopeSet, h: usize) -> Result<()> {
    let max = m.len() / 2;
    if h < 1 || h > max {
        return Err(Error::BadH { h, max });
    }
    Ok(())
}

/// Push every h-subset of `pool` into `out`.
fn h_subsets_into(pool: &[usize], h: usize, out: &mut BTreeSet<TopeSubset>) {
    let n = pool.len();
    if h > n {
        return;
    }
    let mut stack = vec![0usize; h];
    let mut depth = 0;
    let mut next = 0;
    let mut current = TopeSubset::EMPTY;
    loop {
        if depth == h {
            out.insert(current);
            if depth == 0 {
                return;
            }
            depth -= 1;
            let i = stack[depth];
            current = current.without(pool[i]);
            next = i + 1;
            continue;
        }
        if next + (h - depth) > n {
            if depth == 0 {
                return;
            }
            depth -= 1;
            let i = stack[depth];
            current = current.without(pool[i]);
            next = i + 1;
            continue;
        }
        stack[depth] = next;
        current = current.with(pool[next]);
        next += 1;
        depth += 1;
    }
}

/// The family of all h-subsets of the positive halfspaces of the ground
/// elements, optionally omitting one element's contribution.
pub fn build_family(m: &TopeSet, h: usize, exclude_element: Option<usize>) -> Result<SubsetFamily> {
    check_h(m, h)?;
    if let Some(a) = exclude_element {
        if a < 1 || a > m.ground_size() {
            return Err(Error::IndexOutOfRange {
                index: a,
                t: m.ground_size(),
            });
        }
    }
    let mut set = BTreeSet::new();
    for e in 1..=m.ground_size() {
        if Some(e) == exclude_element {
            continue;
        }
        let pool: Vec<usize> = m.halfspace(e, Sign::Plus)?.members.indices().collect();
        h_subsets_into(&pool, h, &mut set);
    }
    Ok(SubsetFamily::from_set(h, set))
}

/// h-subsets of one halfspace of `a` that belong to NO other element's
/// positive-halfspace family: the difference families of the split and
/// reorientation-delta sums.
pub fn build_difference_family(
    m: &TopeSet,
    a: usize,
    sign: Sign,
    h: usize,
) -> Result<SubsetFamily> {
    check_h(m, h)?;
    let shared = build_family(m, h, Some(a))?;
    let shared_set: BTreeSet<TopeSubset> = shared.members.iter().copied().collect();
    let mut own = BTreeSet::new();
    let pool: Vec<usize> = m.halfspace(a, sign)?.members.indices().collect();
    h_subsets_into(&pool, h, &mut own);
    let diff: BTreeSet<TopeSubset> = own.difference(&shared_set).copied().collect();
    Ok(SubsetFamily::from_set(h, diff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines3() -> TopeSet {
        TopeSet::from_strings(["+++", "-++", "-+-", "---", "+--", "+-+"]).unwrap()
    }

    #[test]
    fn lines3_pair_family_after_dedup() {
        // 3 halfspaces contribute 3 pairs each, but {+++,-++} lies in both
        // halfspace 2 and 3, and {+++,+-+} in both 1 and 3.
        let m = lines3();
        let fam = build_family(&m, 2, None).unwrap();
        assert_eq!(fam.len(), 7);
        assert!(fam.members().iter().all(|s| s.len() == 2));
        let fam_excl = build_family(&m, 2, Some(1)).unwrap();
        assert_eq!(fam_excl.len(), 5);
    }

    #[test]
    fn bad_h_rejected() {
        let m = lines3();
        assert!(matches!(
            build_family(&m, 4, None),
            Err(Error::BadH { h: 4, max: 3 })
        ));
        assert!(build_family(&m, 0, None).is_err());
    }

    #[test]
    fn full_halfspace_family() {
        // h = |T|/2 leaves exactly one subset per halfspace
        let m = lines3();
        let fam = build_family(&m, 3, None).unwrap();
        assert_eq!(fam.len(), 3);
        for e in 1..=3 {
            assert!(fam
                .members()
                .contains(&m.halfspace(e, Sign::Plus).unwrap().members));
        }
    }

    #[test]
    fn difference_family_drops_shared_subsets() {
        let m = lines3();
        // pairs within T+_3 that are h-subsets of no other positive halfspace:
        // only {-++,+-+} survives ({+++,-++} is in T+_2, {+++,+-+} in T+_1)
        let diff = build_difference_family(&m, 3, Sign::Plus, 2).unwrap();
        assert_eq!(diff.len(), 1);
        let topes = m.subset_topes(diff.members()[0]);
        let strings: Vec<String> = topes.iter().map(|t| t.to_string()).collect();
        assert_eq!(strings, ["-++", "+-+"]);
    }

    #[test]
    fn difference_family_is_sign_sensitive() {
        let m = lines3();
        // T+_1 pairs minus shared: {+++,+--} and {+--,+-+} survive;
        // T-_1 pairs minus shared: {---,-+-} and {---,-++} survive.
        let plus = build_difference_family(&m, 1, Sign::Plus, 2).unwrap();
        let minus = build_difference_family(&m, 1, Sign::Minus, 2).unwrap();
        assert_eq!(plus.len(), 2);
        assert_eq!(minus.len(), 2);
        assert!(plus
            .members()
            .iter()
            .all(|s| !minus.members().contains(s)));
    }
}
