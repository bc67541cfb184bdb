//! The Boolean lattice B(2m) over +-[1,m]: opposite-pair identities,
//! crosspolytope face counts, and relatively r-blocking elements counted
//! three ways (exhaustively, by inclusion-exclusion over a generating set
//! of order-ideal slices, and by the Mobius function of their join
//! closure).

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::binom::{binomial, pow2};
use crate::counting::{Budget, Evaluation};
use crate::error::{Error, Result};
use crate::semilattice::build_union_semilattice;

/// Largest supported half-universe; elements are u64 bitmasks over 2m bits.
pub const MAX_HALF_UNIVERSE: usize = 32;

/// An exact rational threshold in [0, 1).
pub type Threshold = Ratio<u64>;

/// An element of B(2m): a subset of {-m,...,-1,1,...,m}.
///
/// Bit i-1 holds +i, bit m+i-1 holds -i; negation swaps the two halves.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BLElement {
    m: usize,
    bits: u64,
}

impl BLElement {
    pub fn empty(m: usize) -> Result<BLElement> {
        if m < 1 || m > MAX_HALF_UNIVERSE {
            return Err(Error::BadRange {
                what: "m",
                value: m as i64,
                range: "1..=32",
            });
        }
        Ok(BLElement { m, bits: 0 })
    }

    /// Build from signed member integers, e.g. [1, -2, 3].
    pub fn from_members(m: usize, members: &[i64]) -> Result<BLElement> {
        let mut out = BLElement::empty(m)?;
        for &x in members {
            if x == 0 || x.unsigned_abs() as usize > m {
                return Err(Error::BadRange {
                    what: "element",
                    value: x,
                    range: "+-[1,m]",
                });
            }
            let i = x.unsigned_abs() as usize - 1;
            out.bits |= 1 << if x > 0 { i } else { m + i };
        }
        Ok(out)
    }

    pub fn half_universe(&self) -> usize {
        self.m
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub(crate) fn from_bits(m: usize, bits: u64) -> BLElement {
        BLElement { m, bits }
    }

    /// Poset rank: the number of members.
    pub fn rank(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// {-w : w in self}.
    pub fn negated(&self) -> BLElement {
        BLElement {
            m: self.m,
            bits: negate_bits(self.m, self.bits),
        }
    }

    pub fn meet(&self, other: &BLElement) -> BLElement {
        BLElement {
            m: self.m,
            bits: self.bits & other.bits,
        }
    }

    pub fn join(&self, other: &BLElement) -> BLElement {
        BLElement {
            m: self.m,
            bits: self.bits | other.bits,
        }
    }

    pub fn is_subset_of(&self, other: &BLElement) -> bool {
        self.bits & !other.bits == 0
    }

    /// b ^ -b = 0^: no pair {i, -i} inside.
    pub fn is_opposite_free(&self) -> bool {
        self.bits & negate_bits(self.m, self.bits) == 0
    }

    /// Signed members sorted by absolute value, positives first at ties.
    pub fn members(&self) -> Vec<i64> {
        let mut out: Vec<i64> = (0..self.m)
            .flat_map(|i| {
                let mut v = Vec::new();
                if self.bits >> i & 1 == 1 {
                    v.push(i as i64 + 1);
                }
                if self.bits >> (self.m + i) & 1 == 1 {
                    v.push(-(i as i64 + 1));
                }
                v
            })
            .collect();
        out.sort_by_key(|x| (x.abs(), *x < 0));
        out
    }
}

impl std::fmt::Debug for BLElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.members().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

fn negate_bits(m: usize, bits: u64) -> u64 {
    let low = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    (bits & low) << m | (bits >> m & low)
}

/// An antichain in B(2m) paired with its rational blocking threshold.
#[derive(Clone, Debug)]
pub struct Antichain {
    m: usize,
    r: Threshold,
    elements: Vec<BLElement>,
}

impl Antichain {
    pub fn new(m: usize, r: Threshold, elements: Vec<BLElement>) -> Result<Antichain> {
        BLElement::empty(m)?;
        if r >= Threshold::one() {
            return Err(Error::BadThreshold { r: r.to_string() });
        }
        for lam in &elements {
            debug_assert_eq!(lam.half_universe(), m);
        }
        for (i, a) in elements.iter().enumerate() {
            for b in elements.iter().skip(i + 1) {
                let (lower, upper) = if a.is_subset_of(b) {
                    (a, b)
                } else if b.is_subset_of(a) {
                    (b, a)
                } else {
                    continue;
                };
                return Err(Error::BadAntichain {
                    lower: format!("{lower:?}"),
                    upper: format!("{upper:?}"),
                });
            }
        }
        Ok(Antichain { m, r, elements })
    }

    pub fn half_universe(&self) -> usize {
        self.m
    }

    pub fn threshold(&self) -> Threshold {
        self.r
    }

    pub fn elements(&self) -> &[BLElement] {
        &self.elements
    }

    /// floor(r * k), the slack every meet must strictly exceed.
    fn floor_rk(&self, k: usize) -> usize {
        (self.r * Threshold::from_integer(k as u64))
            .floor()
            .to_integer() as usize
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < 1 || k > self.m {
            return Err(Error::BadRange {
                what: "k",
                value: k as i64,
                range: "1..=m",
            });
        }
        let needed = self.floor_rk(k) + 1;
        if let Some(min_rank) = self.elements.iter().map(BLElement::rank).min() {
            if needed > min_rank {
                return Err(Error::ThresholdRankConflict {
                    needed: needed as u64,
                    min_rank: min_rank as u64,
                });
            }
        }
        Ok(())
    }

    /// Strict relative-blocking test by cross-multiplied integers.
    fn blocks(&self, bits: u64, k: usize) -> bool {
        let (p, q) = (*self.r.numer() as u128, *self.r.denom() as u128);
        self.elements.iter().all(|lam| {
            let rho = (bits & lam.bits).count_ones() as u128;
            rho * q > p * k as u128
        })
    }
}

/// C(m, k) 2^k: the number of opposite-free k-subsets of +-[1,m], i.e. of
/// (k-1)-faces of the m-dimensional crosspolytope.
pub fn crosspolytope_count(m: usize, k: usize) -> Result<BigInt> {
    if k > m {
        return Err(Error::BadRange {
            what: "k",
            value: k as i64,
            range: "0..=m",
        });
    }
    Ok(binomial(m as i64, k as i64) * pow2(k as u64))
}

/// For W a subset of +-[1,m]: how many members lack their opposite in W,
/// and how many pairs {i,-i} miss W entirely.
pub fn opposite_pair_stats(w: &BLElement) -> (usize, usize) {
    let with_opposites = w.join(&w.negated());
    let excess = with_opposites.rank() - w.rank();
    let free_pairs = w.half_universe() - with_opposites.rank() / 2;
    (excess, free_pairs)
}

fn disjoint_opposite_free_terms(m: usize, bits: u64, k: usize) -> BigInt {
    let with_opposites = bits | negate_bits(m, bits);
    let excess = (with_opposites.count_ones() - bits.count_ones()) as i64;
    let free_pairs = m as i64 - with_opposites.count_ones() as i64 / 2;
    let mut total = BigInt::zero();
    for j in 0..=k as i64 {
        let tail = binomial(free_pairs, k as i64 - j);
        if tail.is_zero() {
            continue;
        }
        total += binomial(excess, j) * tail * pow2((k as i64 - j) as u64);
    }
    total
}

/// Number of opposite-free k-subsets V of +-[1,m] with V disjoint from W:
/// choose j members whose opposite lies in W, then k-j of the untouched
/// pairs with a sign each.
pub fn count_disjoint_opposite_free(w: &BLElement, k: usize) -> Result<BigInt> {
    let m = w.half_universe();
    if k > m {
        return Err(Error::BadRange {
            what: "k",
            value: k as i64,
            range: "0..=m",
        });
    }
    Ok(disjoint_opposite_free_terms(m, w.bits(), k))
}

fn for_each_opposite_free_rank_k(m: usize, k: usize, mut f: impl FnMut(u64)) {
    // choose k of the m pairs, then a sign per chosen pair
    fn rec(m: usize, k: usize, start: usize, bits: u64, f: &mut impl FnMut(u64)) {
        if k == 0 {
            f(bits);
            return;
        }
        for p in start..=m - k {
            rec(m, k - 1, p + 1, bits | 1 << p, f);
            rec(m, k - 1, p + 1, bits | 1 << (m + p), f);
        }
    }
    if k <= m {
        rec(m, k, 0, 0, &mut f);
    }
}

/// Exhaustive count of the rank-k opposite-free elements whose meet with
/// every antichain member has rank strictly above r*k.
pub fn relative_blocking_brute(antichain: &Antichain, k: usize) -> Result<BigInt> {
    antichain.check_k(k)?;
    let mut count: u64 = 0;
    for_each_opposite_free_rank_k(antichain.half_universe(), k, |bits| {
        if antichain.blocks(bits, k) {
            count += 1;
        }
    });
    Ok(BigInt::from(count))
}

/// Minimal elements of the union over the antichain of the rank
/// (rho(lambda) - floor(r k)) slices of each principal ideal.
fn generating_set(antichain: &Antichain, k: usize) -> Vec<u64> {
    let slack = antichain.floor_rk(k);
    let mut fam: Vec<u64> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for lam in antichain.elements() {
        let members: Vec<usize> = (0..64).filter(|&i| lam.bits() >> i & 1 == 1).collect();
        let d = lam.rank() - slack;
        subsets_of_size(&members, d, &mut |bits| {
            if seen.insert(bits) {
                fam.push(bits);
            }
        });
    }
    fam.sort_unstable_by_key(|b| b.count_ones());
    let mut minimal: Vec<u64> = Vec::new();
    for &b in &fam {
        if !minimal.iter().any(|&g| g & !b == 0) {
            minimal.push(b);
        }
    }
    minimal
}

fn subsets_of_size(pool: &[usize], d: usize, f: &mut impl FnMut(u64)) {
    fn rec(pool: &[usize], d: usize, start: usize, bits: u64, f: &mut impl FnMut(u64)) {
        if d == 0 {
            f(bits);
            return;
        }
        if start + d > pool.len() {
            return;
        }
        for i in start..=pool.len() - d {
            rec(pool, d - 1, i + 1, bits | 1 << pool[i], f);
        }
    }
    rec(pool, d, 0, 0, f);
}

/// Largest k for which some opposite-free k-subset avoids `bits`; it only
/// shrinks as unions grow, so it prunes the subfamily walk.
fn max_avoiding_k(m: usize, bits: u64) -> usize {
    let with_opposites = bits | negate_bits(m, bits);
    let excess = (with_opposites.count_ones() - bits.count_ones()) as usize;
    let free_pairs = m - with_opposites.count_ones() as usize / 2;
    excess + free_pairs
}

/// Inclusion-exclusion over the generating set: C(m,k) 2^k plus the signed
/// disjoint counts of the subfamily joins.
pub fn relative_blocking_ie(antichain: &Antichain, k: usize, budget: &Budget) -> Result<Evaluation> {
    antichain.check_k(k)?;
    let m = antichain.half_universe();
    let gens = generating_set(antichain, k);
    let mut value = crosspolytope_count(m, k)?;
    let mut nodes: u64 = 0;
    fn walk(
        gens: &[u64],
        start: usize,
        union: u64,
        odd: bool,
        m: usize,
        k: usize,
        nodes: &mut u64,
        max_nodes: u64,
        value: &mut BigInt,
    ) -> Result<()> {
        for i in start..gens.len() {
            let next = union | gens[i];
            if max_avoiding_k(m, next) < k {
                continue; // every extension keeps a zero inner count
            }
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::BudgetExceeded {
                    what: "subfamily DFS nodes",
                    limit: max_nodes,
                });
            }
            let term = disjoint_opposite_free_terms(m, next, k);
            if !odd {
                *value -= term;
            } else {
                *value += term;
            }
            walk(gens, i + 1, next, !odd, m, k, nodes, max_nodes, value)?;
        }
        Ok(())
    }
    walk(
        &gens,
        0,
        0,
        false,
        m,
        k,
        &mut nodes,
        budget.dfs_nodes,
        &mut value,
    )?;
    Ok(Evaluation {
        value,
        terms: nodes,
    })
}

/// Mobius form over the join closure of the generating set.
pub fn relative_blocking_moebius(
    antichain: &Antichain,
    k: usize,
    budget: &Budget,
) -> Result<Evaluation> {
    antichain.check_k(k)?;
    let m = antichain.half_universe();
    let gens: Vec<u128> = generating_set(antichain, k)
        .into_iter()
        .map(u128::from)
        .collect();
    let lat = build_union_semilattice(&gens, 2 * m, budget.lattice_elements)?;
    let mut value = crosspolytope_count(m, k)?;
    for (z, mu) in lat.iter() {
        value += mu * disjoint_opposite_free_terms(m, z as u64, k);
    }
    Ok(Evaluation {
        value,
        terms: lat.len() as u64,
    })
}
