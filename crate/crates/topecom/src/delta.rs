//! How reorienting one ground element changes the committee counts,
//! without recounting either side: signed double sums over the shared
//! family (all elements but `a`) paired with the difference families of
//! `a`'s two halfspaces, and their Mobius collapse.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::binom::binomial;
use crate::committee::{count_committees_of_size, KappaVariant};
use crate::counting::{member_bits, ring_weight, signed, walk_subfamilies, Budget, Evaluation};
use crate::error::{Error, Result};
use crate::family::{build_difference_family, build_family};
use crate::semilattice::build_union_semilattice;
use crate::tope::{Sign, TopeSet, TopeSubset};

/// One delta computation: kappa_k of the matroid reoriented on {a} minus
/// kappa_k of the matroid itself, for the chosen count variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaRequest {
    pub a: usize,
    pub k: usize,
    pub variant: KappaVariant,
}

fn check_request(m: &TopeSet, req: &DeltaRequest) -> Result<()> {
    if req.a < 1 || req.a > m.ground_size() {
        return Err(Error::IndexOutOfRange {
            index: req.a,
            t: m.ground_size(),
        });
    }
    let max = m.len() / 2;
    if req.k < 1 || req.k > max {
        return Err(Error::BadCardinality { k: req.k, max });
    }
    Ok(())
}

struct DeltaFamilies {
    shared: Vec<u128>,
    diff_minus: Vec<u128>,
    diff_plus: Vec<u128>,
    cap: usize,
}

fn delta_families(m: &TopeSet, req: &DeltaRequest) -> Result<DeltaFamilies> {
    let n = m.len();
    // the weight C(|T|-|U|, k) pins l to |T|-k, hence this h
    let h = (n - req.k + 1) / 2;
    Ok(DeltaFamilies {
        shared: member_bits(&build_family(m, h, Some(req.a))?),
        diff_minus: member_bits(&build_difference_family(m, req.a, Sign::Minus, h)?),
        diff_plus: member_bits(&build_difference_family(m, req.a, Sign::Plus, h)?),
        cap: n - req.k,
    })
}

fn weight(m: &TopeSet, req: &DeltaRequest, union: u128) -> BigInt {
    match req.variant {
        KappaVariant::General => binomial(
            m.len() as i64 - union.count_ones() as i64,
            req.k as i64,
        ),
        KappaVariant::OppositeFree => ring_weight(m, TopeSubset::from_bits(union), req.k),
    }
}

/// The signed double sum: for every shared subfamily (the empty one
/// included) both difference families are walked before moving on, so the
/// common part is traversed once.
pub fn delta_ie(m: &TopeSet, req: &DeltaRequest, budget: &Budget) -> Result<Evaluation> {
    check_request(m, req)?;
    let fams = delta_families(m, req)?;
    let cap = Some(fams.cap);
    let mut value = BigInt::zero();
    let mut nodes: u64 = 0;

    fn outer(
        m: &TopeSet,
        req: &DeltaRequest,
        fams: &DeltaFamilies,
        start: usize,
        union: u128,
        odd: bool,
        cap: Option<usize>,
        nodes: &mut u64,
        max_nodes: u64,
        value: &mut BigInt,
    ) -> Result<()> {
        walk_subfamilies(
            &fams.diff_minus,
            0,
            union,
            false,
            cap,
            nodes,
            max_nodes,
            &mut |p, u| signed(value, p ^ odd, weight(m, req, u)),
        )?;
        walk_subfamilies(
            &fams.diff_plus,
            0,
            union,
            false,
            cap,
            nodes,
            max_nodes,
            &mut |p, u| signed(value, !(p ^ odd), weight(m, req, u)),
        )?;
        for i in start..fams.shared.len() {
            let next = union | fams.shared[i];
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
            outer(
                m, req, fams, i + 1, next, !odd, cap, nodes, max_nodes, value,
            )?;
        }
        Ok(())
    }

    outer(
        m,
        req,
        &fams,
        0,
        0,
        false,
        cap,
        &mut nodes,
        budget.dfs_nodes,
        &mut value,
    )?;
    Ok(Evaluation {
        value,
        terms: nodes,
    })
}

/// The Mobius form: three union semilattices (shared with its bottom, and
/// one per difference family), one weighted term per element pair.
pub fn delta_moebius(m: &TopeSet, req: &DeltaRequest, budget: &Budget) -> Result<Evaluation> {
    check_request(m, req)?;
    let fams = delta_families(m, req)?;
    let lat_shared =
        build_union_semilattice(&fams.shared, fams.cap, budget.lattice_elements)?;
    let lat_minus =
        build_union_semilattice(&fams.diff_minus, fams.cap, budget.lattice_elements)?;
    let lat_plus = build_union_semilattice(&fams.diff_plus, fams.cap, budget.lattice_elements)?;

    let bottom = (0u128, BigInt::one());
    let mut value = BigInt::zero();
    let mut terms: u64 = 0;
    for (g2, mu2) in std::iter::once((bottom.0, &bottom.1)).chain(lat_shared.iter()) {
        let mut inner = BigInt::zero();
        for (g1, mu1) in lat_minus.iter() {
            inner += mu1 * weight(m, req, g1 | g2);
            terms += 1;
        }
        for (g1, mu1) in lat_plus.iter() {
            inner -= mu1 * weight(m, req, g1 | g2);
            terms += 1;
        }
        value += mu2 * inner;
    }
    Ok(Evaluation { value, terms })
}

/// Oracle: two brute-force counts and a subtraction.
pub fn delta_direct(m: &TopeSet, req: &DeltaRequest) -> Result<BigInt> {
    check_request(m, req)?;
    let flipped = m.reorient(&[req.a])?;
    let opposite_free = req.variant == KappaVariant::OppositeFree;
    Ok(count_committees_of_size(&flipped, req.k, opposite_free)?
        - count_committees_of_size(m, req.k, opposite_free)?)
}
