//! Union semilattices of set families, with Mobius values against the
//! adjoined least element.
//!
//! Elements are raw u128 bitmasks so the same machinery serves tope
//! subsets and Boolean-lattice elements. A single Mobius-weighted term per
//! distinct union replaces the full subfamily expansion of the alternating
//! sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// All distinct unions of nonempty subfamilies whose size stays within a
/// cap, ordered by inclusion, with mu(0^, z) for each stored element.
///
/// The adjoined bottom 0^ is the empty set; it is kept implicit
/// (mu(0^, 0^) = 1). Dropping unions above the size cap is sound whenever
/// the weights of the dropped elements vanish, because every element below
/// a stored element is itself stored.
#[derive(Clone, Debug)]
pub struct UnionSemilattice {
    elements: Vec<u128>,
    moebius: Vec<BigInt>,
}

impl UnionSemilattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Stored unions, sorted by (popcount, value).
    pub fn elements(&self) -> &[u128] {
        &self.elements
    }

    pub fn moebius(&self, index: usize) -> &BigInt {
        &self.moebius[index]
    }

    /// (element, mu) pairs for the elements strictly above 0^.
    pub fn iter(&self) -> impl Iterator<Item = (u128, &BigInt)> {
        self.elements.iter().copied().zip(self.moebius.iter())
    }

    /// Defining identity: for every stored z, the mu values over the closed
    /// interval [0^, z] sum to zero.
    pub fn moebius_sums_vanish(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, &z)| {
            let mut sum = BigInt::one(); // mu(0^, 0^)
            for (j, &w) in self.elements.iter().enumerate() {
                if w & !z == 0 {
                    if w == z && j != i {
                        return false; // duplicates would corrupt the recursion
                    }
                    sum += &self.moebius[j];
                }
            }
            sum.is_zero()
        })
    }
}

/// Close a generator family under union, keeping unions of size at most
/// `size_cap` bits, then compute Mobius values by the standard recursion
/// mu(0^, z) = -sum of mu(0^, w) over w < z.
pub fn build_union_semilattice(
    generators: &[u128],
    size_cap: usize,
    max_elements: u64,
) -> Result<UnionSemilattice> {
    let mut elements: Vec<u128> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut frontier: Vec<u128> = Vec::new();
    for &g in generators {
        if (g.count_ones() as usize) <= size_cap && g != 0 && seen.insert(g) {
            frontier.push(g);
        }
    }
    while let Some(z) = frontier.pop() {
        elements.push(z);
        if elements.len() as u64 > max_elements {
            return Err(Error::BudgetExceeded {
                what: "semilattice elements",
                limit: max_elements,
            });
        }
        for &g in generators {
            let joined = z | g;
            if (joined.count_ones() as usize) <= size_cap && seen.insert(joined) {
                frontier.push(joined);
            }
        }
    }
    elements.sort_unstable_by_key(|&z| (z.count_ones(), z));

    let mut moebius: Vec<BigInt> = Vec::with_capacity(elements.len());
    for (i, &z) in elements.iter().enumerate() {
        let mut below = BigInt::one(); // the bottom element
        for j in 0..i {
            if elements[j] & !z == 0 {
                below += &moebius[j];
            }
        }
        moebius.push(-below);
    }
    Ok(UnionSemilattice { elements, moebius })
}
