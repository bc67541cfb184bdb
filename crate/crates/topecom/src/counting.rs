//! Closed-form committee counts: the alternating sums over subfamilies of
//! halfspace h-subsets, their Mobius-function collapses over the union
//! semilattice, and the splits that isolate one ground element.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::binom::{binomial, pow2};
use crate::error::{Error, Result};
use crate::family::{build_difference_family, build_family, SubsetFamily};
use crate::semilattice::build_union_semilattice;
use crate::tope::{Sign, TopeSet, TopeSubset};

/// Hard caps on the exponential pieces. Exceeding a budget is an error,
/// never an approximation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Subfamily DFS nodes across one evaluation.
    pub dfs_nodes: u64,
    /// Stored union-semilattice elements.
    pub lattice_elements: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            dfs_nodes: 1 << 24,
            lattice_elements: 1 << 20,
        }
    }
}

/// An exact count plus how many terms the evaluation summed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: BigInt,
    pub terms: u64,
}

/// Which of the two admissible l values parameterizes the general sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EllChoice {
    /// l = k. The default: the smaller l gives the smaller family and the
    /// tighter union bound for every k <= |T|/2.
    #[default]
    K,
    /// l = |T| - k.
    Complement,
}

impl EllChoice {
    pub fn ell(self, t_size: usize, k: usize) -> usize {
        match self {
            EllChoice::K => k,
            EllChoice::Complement => t_size - k,
        }
    }
}

/// Depth-first walk over the nonempty subfamilies of `members`, starting
/// from a base union. Unions only grow, so a branch is cut as soon as the
/// union passes `cap`; with `cap = None` every subfamily is visited and the
/// zero binomial factors do the discarding. `visit` receives the parity of
/// the subfamily size and the accumulated union.
pub(crate) fn walk_subfamilies(
    members: &[u128],
    start: usize,
    union: u128,
    odd: bool,
    cap: Option<usize>,
    nodes: &mut u64,
    max_nodes: u64,
    visit: &mut impl FnMut(bool, u128),
) -> Result<()> {
    for i in start..members.len() {
        let next = union | members[i];
        if let Some(cap) = cap {
            if next.count_ones() as usize > cap {
                continue;
            }
        }
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(Error::BudgetExceeded {
                what: "subfamily DFS nodes",
                limit: max_nodes,
            });
        }
        visit(!odd, next);
        walk_subfamilies(members, i + 1, next, !odd, cap, nodes, max_nodes, visit)?;
    }
    Ok(())
}

pub(crate) fn dfs_subfamilies(
    members: &[u128],
    cap: Option<usize>,
    max_nodes: u64,
    visit: &mut impl FnMut(bool, u128),
) -> Result<u64> {
    let mut nodes = 0;
    walk_subfamilies(members, 0, 0, false, cap, &mut nodes, max_nodes, visit)?;
    Ok(nodes)
}

/// Paired walk for the element-isolating sums: the shared family is walked
/// including the empty subfamily, and under each node the difference family
/// is walked nonempty. The visited parity is the total subfamily size; the
/// cap applies to the combined union, which dominates the per-part bounds.
pub(crate) fn dfs_pairs(
    shared: &[u128],
    diff: &[u128],
    cap: Option<usize>,
    max_nodes: u64,
    visit: &mut impl FnMut(bool, u128),
) -> Result<u64> {
    fn outer(
        shared: &[u128],
        diff: &[u128],
        start: usize,
        union: u128,
        odd: bool,
        cap: Option<usize>,
        nodes: &mut u64,
        max_nodes: u64,
        visit: &mut impl FnMut(bool, u128),
    ) -> Result<()> {
        walk_subfamilies(diff, 0, union, false, cap, nodes, max_nodes, &mut |p, u| {
            visit(p ^ odd, u)
        })?;
        for i in start..shared.len() {
            let next = union | shared[i];
            if let Some(cap) = cap {
                if next.count_ones() as usize > cap {
                    continue;
                }
            }
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::BudgetExceeded {
                    what: "subfamily DFS nodes",
                    limit: max_nodes,
                });
            }
            outer(shared, diff, i + 1, next, !odd, cap, nodes, max_nodes, visit)?;
        }
        Ok(())
    }
    let mut nodes = 0;
    outer(
        shared, diff, 0, 0, false, cap, &mut nodes, max_nodes, visit,
    )?;
    Ok(nodes)
}

pub(crate) fn member_bits(fam: &SubsetFamily) -> Vec<u128> {
    fam.members().iter().map(|s| s.bits()).collect()
}

pub(crate) fn signed(sum: &mut BigInt, odd: bool, term: BigInt) {
    if odd {
        *sum -= term;
    } else {
        *sum += term;
    }
}

fn check_k(m: &TopeSet, k: usize) -> Result<()> {
    let max = m.len() / 2;
    if k < 1 || k > max {
        return Err(Error::BadCardinality { k, max });
    }
    Ok(())
}

/// The opposite-free inner weight: the number of k-subsets that avoid U and
/// contain no opposite pair, summed by how many members have their opposite
/// inside U.
pub(crate) fn ring_weight(m: &TopeSet, union: TopeSubset, k: usize) -> BigInt {
    let n = m.len() as i64;
    let with_opposites = union.union(m.negate_subset(union));
    let excess = (with_opposites.len() - union.len()) as i64;
    let free_pairs = (n - with_opposites.len() as i64) / 2;
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

/// Number of committees of cardinality k by the alternating halfspace sum
/// with parameter l: C(|T|, |T|-l) plus signed C(|T|-|U|, |T|-l) over the
/// subfamilies whose union has at most l topes.
pub fn count_committees_ie(
    m: &TopeSet,
    k: usize,
    ell_choice: EllChoice,
    budget: &Budget,
) -> Result<Evaluation> {
    count_committees_ie_impl(m, k, ell_choice, budget, true)
}

/// As [`count_committees_ie`] but visiting every subfamily; bound terms
/// contribute zero. Exists to check that pruning is sound.
pub fn count_committees_ie_unpruned(
    m: &TopeSet,
    k: usize,
    ell_choice: EllChoice,
    budget: &Budget,
) -> Result<Evaluation> {
    count_committees_ie_impl(m, k, ell_choice, budget, false)
}

fn count_committees_ie_impl(
    m: &TopeSet,
    k: usize,
    ell_choice: EllChoice,
    budget: &Budget,
    pruned: bool,
) -> Result<Evaluation> {
    check_k(m, k)?;
    let n = m.len();
    let ell = ell_choice.ell(n, k);
    let h = (ell + 1) / 2;
    let fam = build_family(m, h, None)?;
    let members = member_bits(&fam);
    let choose = (n - ell) as i64;
    let mut value = binomial(n as i64, choose);
    let cap = pruned.then_some(ell);
    let terms = dfs_subfamilies(&members, cap, budget.dfs_nodes, &mut |odd, u| {
        signed(
            &mut value,
            odd,
            binomial(n as i64 - u.count_ones() as i64, choose),
        );
    })?;
    Ok(Evaluation { value, terms })
}

/// Number of opposite-free committees of cardinality k by the alternating
/// sum with leading term C(|T|/2, k) 2^k and the two-factor inner weight.
pub fn count_ring_ie(m: &TopeSet, k: usize, budget: &Budget) -> Result<Evaluation> {
    count_ring_ie_impl(m, k, budget, true)
}

/// Unpruned variant of [`count_ring_ie`], for the pruning-soundness check.
pub fn count_ring_ie_unpruned(m: &TopeSet, k: usize, budget: &Budget) -> Result<Evaluation> {
    count_ring_ie_impl(m, k, budget, false)
}

fn count_ring_ie_impl(m: &TopeSet, k: usize, budget: &Budget, pruned: bool) -> Result<Evaluation> {
    check_k(m, k)?;
    let n = m.len();
    let h = (n - k + 1) / 2;
    let fam = build_family(m, h, None)?;
    let members = member_bits(&fam);
    let mut value = binomial((n / 2) as i64, k as i64) * pow2(k as u64);
    let cap = pruned.then_some(n - k);
    let terms = dfs_subfamilies(&members, cap, budget.dfs_nodes, &mut |odd, u| {
        signed(&mut value, odd, ring_weight(m, TopeSubset::from_bits(u), k));
    })?;
    Ok(Evaluation { value, terms })
}

/// Mobius collapse of the general count: one term per distinct union G,
/// weighted mu(0^, G) C(|T|-|G|, k), over unions of size at most |T|-k.
pub fn count_committees_moebius(m: &TopeSet, k: usize, budget: &Budget) -> Result<Evaluation> {
    check_k(m, k)?;
    let n = m.len();
    let h = (n - k + 1) / 2;
    let fam = build_family(m, h, None)?;
    let lat = build_union_semilattice(&member_bits(&fam), n - k, budget.lattice_elements)?;
    let mut value = binomial(n as i64, k as i64);
    for (z, mu) in lat.iter() {
        value += mu * binomial(n as i64 - z.count_ones() as i64, k as i64);
    }
    Ok(Evaluation {
        value,
        terms: lat.len() as u64,
    })
}

/// Mobius collapse of the opposite-free count.
pub fn count_ring_moebius(m: &TopeSet, k: usize, budget: &Budget) -> Result<Evaluation> {
    check_k(m, k)?;
    let n = m.len();
    let h = (n - k + 1) / 2;
    let fam = build_family(m, h, None)?;
    let lat = build_union_semilattice(&member_bits(&fam), n - k, budget.lattice_elements)?;
    let mut value = binomial((n / 2) as i64, k as i64) * pow2(k as u64);
    for (z, mu) in lat.iter() {
        value += mu * ring_weight(m, TopeSubset::from_bits(z), k);
    }
    Ok(Evaluation {
        value,
        terms: lat.len() as u64,
    })
}

/// The two pieces of the general count split at a ground element: the sum
/// over subfamilies avoiding `a`'s halfspace entirely, and the signed rest.
/// They satisfy alpha + a_part = kappa*_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvaluation {
    pub base: BigInt,
    pub a_part: BigInt,
    pub terms: u64,
}

/// Split of the general count at element `a` with parameter l.
pub fn alpha_split(
    m: &TopeSet,
    a: usize,
    k: usize,
    ell_choice: EllChoice,
    budget: &Budget,
) -> Result<SplitEvaluation> {
    check_k(m, k)?;
    let n = m.len();
    let ell = ell_choice.ell(n, k);
    let h = (ell + 1) / 2;
    let shared = member_bits(&build_family(m, h, Some(a))?);
    let diff = member_bits(&build_difference_family(m, a, Sign::Plus, h)?);
    let choose = (n - ell) as i64;
    let mut base = binomial(n as i64, choose);
    let mut terms = dfs_subfamilies(&shared, Some(ell), budget.dfs_nodes, &mut |odd, u| {
        signed(&mut base, odd, binomial(n as i64 - u.count_ones() as i64, choose));
    })?;
    let mut a_part = BigInt::zero();
    terms += dfs_pairs(&shared, &diff, Some(ell), budget.dfs_nodes, &mut |odd, u| {
        signed(
            &mut a_part,
            odd,
            binomial(n as i64 - u.count_ones() as i64, choose),
        );
    })?;
    Ok(SplitEvaluation {
        base,
        a_part,
        terms,
    })
}

/// The alpha component alone.
pub fn alpha_k(
    m: &TopeSet,
    a: usize,
    k: usize,
    ell_choice: EllChoice,
    budget: &Budget,
) -> Result<BigInt> {
    Ok(alpha_split(m, a, k, ell_choice, budget)?.base)
}

/// Split of the opposite-free count at element `a` (here l is pinned to
/// |T|-k by the shape of the inner weight).
pub fn beta_split(m: &TopeSet, a: usize, k: usize, budget: &Budget) -> Result<SplitEvaluation> {
    check_k(m, k)?;
    let n = m.len();
    let h = (n - k + 1) / 2;
    let shared = member_bits(&build_family(m, h, Some(a))?);
    let diff = member_bits(&build_difference_family(m, a, Sign::Plus, h)?);
    let cap = n - k;
    let mut base = binomial((n / 2) as i64, k as i64) * pow2(k as u64);
    let mut terms = dfs_subfamilies(&shared, Some(cap), budget.dfs_nodes, &mut |odd, u| {
        signed(&mut base, odd, ring_weight(m, TopeSubset::from_bits(u), k));
    })?;
    let mut a_part = BigInt::zero();
    terms += dfs_pairs(&shared, &diff, Some(cap), budget.dfs_nodes, &mut |odd, u| {
        signed(&mut a_part, odd, ring_weight(m, TopeSubset::from_bits(u), k));
    })?;
    Ok(SplitEvaluation {
        base,
        a_part,
        terms,
    })
}

/// The beta component alone.
pub fn beta_k(m: &TopeSet, a: usize, k: usize, budget: &Budget) -> Result<BigInt> {
    Ok(beta_split(m, a, k, budget)?.base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::committee::{kappa_star, KappaVariant};

    fn lines3() -> TopeSet {
        TopeSet::from_strings(["+++", "-++", "-+-", "---", "+--", "+-+"]).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn general_count_matches_oracle_both_ell_choices() {
        let m = lines3();
        let budget = Budget::default();
        let expected = [1, 0, 3];
        for k in 1..=3 {
            for choice in [EllChoice::K, EllChoice::Complement] {
                let got = count_committees_ie(&m, k, choice, &budget).unwrap();
                assert_eq!(got.value, big(expected[k - 1]), "k={k} {choice:?}");
            }
            let moebius = count_committees_moebius(&m, k, &budget).unwrap();
            assert_eq!(moebius.value, big(expected[k - 1]), "moebius k={k}");
        }
    }

    #[test]
    fn ring_count_matches_oracle() {
        let m = lines3();
        let budget = Budget::default();
        let expected = [1, 0, 1];
        for k in 1..=3 {
            assert_eq!(
                count_ring_ie(&m, k, &budget).unwrap().value,
                big(expected[k - 1])
            );
            assert_eq!(
                count_ring_moebius(&m, k, &budget).unwrap().value,
                big(expected[k - 1])
            );
        }
    }

    #[test]
    fn formulas_match_brute_force_on_a_non_acyclic_instance() {
        let m = lines3().reorient(&[3]).unwrap();
        let budget = Budget::default();
        let general = kappa_star(&m, KappaVariant::General);
        let ring = kappa_star(&m, KappaVariant::OppositeFree);
        for k in 1..=3 {
            assert_eq!(
                &count_committees_ie(&m, k, EllChoice::K, &budget)
                    .unwrap()
                    .value,
                general.get(k)
            );
            assert_eq!(
                &count_committees_moebius(&m, k, &budget).unwrap().value,
                general.get(k)
            );
            assert_eq!(&count_ring_ie(&m, k, &budget).unwrap().value, ring.get(k));
            assert_eq!(
                &count_ring_moebius(&m, k, &budget).unwrap().value,
                ring.get(k)
            );
        }
    }

    #[test]
    fn pruned_and_unpruned_sums_agree() {
        let m = lines3();
        let budget = Budget::default();
        for k in 1..=3 {
            for choice in [EllChoice::K, EllChoice::Complement] {
                let pruned = count_committees_ie(&m, k, choice, &budget).unwrap();
                let unpruned = count_committees_ie_unpruned(&m, k, choice, &budget).unwrap();
                assert_eq!(pruned.value, unpruned.value);
                assert!(pruned.terms <= unpruned.terms);
            }
            assert_eq!(
                count_ring_ie(&m, k, &budget).unwrap().value,
                count_ring_ie_unpruned(&m, k, &budget).unwrap().value
            );
        }
    }

    #[test]
    fn split_balance_every_element_and_cardinality() {
        let m = lines3();
        let budget = Budget::default();
        let general = kappa_star(&m, KappaVariant::General);
        let ring = kappa_star(&m, KappaVariant::OppositeFree);
        for a in 1..=3 {
            for k in 1..=3 {
                for choice in [EllChoice::K, EllChoice::Complement] {
                    let split = alpha_split(&m, a, k, choice, &budget).unwrap();
                    assert_eq!(&split.base + &split.a_part, *general.get(k));
                }
                let split = beta_split(&m, a, k, &budget).unwrap();
                assert_eq!(&split.base + &split.a_part, *ring.get(k));
            }
        }
    }

    #[test]
    fn alpha_is_invariant_under_reorienting_a() {
        // the defining family omits a, so flipping a cannot change alpha
        let m = lines3();
        let budget = Budget::default();
        for a in 1..=3 {
            let flipped = m.reorient(&[a]).unwrap();
            for k in 1..=3 {
                assert_eq!(
                    alpha_k(&m, a, k, EllChoice::Complement, &budget).unwrap(),
                    alpha_k(&flipped, a, k, EllChoice::Complement, &budget).unwrap()
                );
                assert_eq!(
                    beta_k(&m, a, k, &budget).unwrap(),
                    beta_k(&flipped, a, k, &budget).unwrap()
                );
            }
        }
    }

    #[test]
    fn dfs_budget_is_enforced() {
        let m = lines3();
        let budget = Budget {
            dfs_nodes: 3,
            lattice_elements: 1 << 20,
        };
        let err = count_committees_ie(&m, 3, EllChoice::K, &budget).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn bad_cardinality_rejected() {
        let m = lines3();
        let budget = Budget::default();
        assert!(count_committees_ie(&m, 0, EllChoice::K, &budget).is_err());
        assert!(count_committees_ie(&m, 4, EllChoice::K, &budget).is_err());
        assert!(count_ring_ie(&m, 4, &budget).is_err());
    }
}
