//! Bogomolov multipliers: full restriction-kernel computation, the Sylow
//! reduction for Frobenius groups, and sufficient vanishing criteria.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{h2_qz, restrict, CocycleVector, CohomologyError, LocalModel};
use crate::frobenius::{is_fixed_point_free, FrobeniusError, FrobeniusStructure};
use crate::group::{factorize, Group, GroupError, Subgroup};
use crate::zlinalg::{AbelianInvariants, LocalKernelSolver, LocalQuotient};

#[derive(Debug, Error)]
pub enum BogomolovError {
    #[error("group of order {order} exceeds the cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("not a p-group (order {0})")]
    NotAPGroup(usize),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum B0Method {
    FullCocycle,
    SylowReduction,
    Criterion,
}

#[derive(Debug, Clone, Serialize)]
pub struct B0Result {
    pub invariants: AbelianInvariants,
    pub method: B0Method,
    pub details: String,
    /// nonzero classes, values in `(1/modulus)Z/Z`
    pub witnesses: Vec<CocycleVector>,
}

impl B0Result {
    pub fn is_trivial(&self) -> bool {
        self.invariants.is_trivial()
    }

    fn trivial(method: B0Method, details: String) -> Self {
        B0Result {
            invariants: AbelianInvariants::trivial(),
            method,
            details,
            witnesses: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicyclicSubgroup {
    pub subgroup: Subgroup,
    pub cyclic: bool,
    pub maximal: bool,
}

/// Every subgroup `⟨x, y⟩` with `xy = yx`, deduplicated, maximal ones flagged.
pub fn bicyclic_subgroups(g: &Group, cap: usize) -> Result<Vec<BicyclicSubgroup>, BogomolovError> {
    if g.order() > cap {
        return Err(BogomolovError::OrderCapExceeded {
            order: g.order(),
            cap,
        });
    }
    let mut cyclic: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for x in 0..g.order() {
        let mut s = vec![0usize];
        let mut y = x;
        while y != 0 {
            s.push(y);
            y = g.mul(x, y);
        }
        s.sort_unstable();
        if seen.insert(s.clone()) {
            cyclic.push((x, s));
        }
    }
    let mut sets: Vec<(Vec<usize>, bool)> = cyclic.iter().map(|(_, s)| (s.clone(), true)).collect();
    for (i, (x, cx)) in cyclic.iter().enumerate() {
        for (y, cy) in &cyclic[i + 1..] {
            if !g.commute(*x, *y) {
                continue;
            }
            let mut s: Vec<usize> = cx.iter().flat_map(|&a| cy.iter().map(move |&b| g.mul(a, b))).collect();
            s.sort_unstable();
            s.dedup();
            if seen.insert(s.clone()) {
                let is_cyclic = s.iter().any(|&z| g.element_order(z) as usize == s.len());
                sets.push((s, is_cyclic));
            }
        }
    }
    sets.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
    let masks: Vec<Vec<bool>> = sets
        .iter()
        .map(|(s, _)| {
            let mut m = vec![false; g.order()];
            for &x in s {
                m[x] = true;
            }
            m
        })
        .collect();
    Ok(sets
        .iter()
        .enumerate()
        .map(|(i, (s, c))| {
            let maximal = !(0..i).any(|j| sets[j].0.len() > s.len() && s.iter().all(|&x| masks[j][x]));
            BicyclicSubgroup {
                subgroup: g.subgroup_from_set(s),
                cyclic: *c,
                maximal,
            }
        })
        .collect())
}

/// `B0(G)` as the intersection of restriction kernels over the maximal bicyclic subgroups.
pub fn b0(g: &Group, cap: usize) -> Result<B0Result, BogomolovError> {
    b0_over(g, cap, true)
}

/// Same as [`b0`], intersecting over all bicyclic subgroups when `maximal_only` is false.
pub fn b0_over(g: &Group, cap: usize, maximal_only: bool) -> Result<B0Result, BogomolovError> {
    let m = h2_qz(g, cap)?;
    let bic = bicyclic_subgroups(g, cap)?;
    let targets: Vec<&BicyclicSubgroup> = bic
        .iter()
        .filter(|b| !b.cyclic && (b.maximal || !maximal_only))
        .collect();
    let details = format!(
        "{} bicyclic subgroups, {} used",
        bic.len(),
        bic.iter().filter(|b| b.maximal || !maximal_only).count()
    );
    let mut orders = Vec::new();
    let mut witnesses = Vec::new();
    for local in &m.locals {
        let r = local.quotient.exponents.len();
        if r == 0 {
            continue;
        }
        let ring = local.ring;
        let q = ring.q;
        let gens: Vec<CocycleVector> = (0..r)
            .map(|j| CocycleVector {
                modulus: q,
                group_order: g.order(),
                values: local.generator_values(j),
            })
            .collect();
        let mut solver = LocalKernelSolver::new(ring, r);
        for t in &targets {
            let (ag, _) = t.subgroup.to_group(g);
            let am = LocalModel::build(&ag, ring, true)?;
            let target_orders = am.orders();
            if target_orders.is_empty() {
                continue;
            }
            let images: Vec<Vec<u64>> = gens
                .iter()
                .map(|c| am.coordinates(&restrict(c, g, &t.subgroup).values))
                .collect();
            for (ti, &o) in target_orders.iter().enumerate() {
                let scale = q / o;
                let row: Vec<(usize, u64)> = (0..r)
                    .map(|j| (j, ring.mul(images[j][ti], scale)))
                    .filter(|e| e.1 != 0)
                    .collect();
                solver.add_row(&row);
            }
        }
        let kernel = solver.finalize();
        let rels: Vec<Vec<u64>> = (0..r)
            .map(|j| {
                let mut d = vec![0u64; r];
                d[j] = ring.p.pow(local.quotient.exponents[j]) % q;
                kernel.coordinates(&d)
            })
            .collect();
        let quot = LocalQuotient::new(ring, &kernel.order_exponents, &rels);
        for (j, &e) in quot.exponents.iter().enumerate() {
            orders.push(ring.p.pow(e));
            let c = kernel.combine(&quot.generator(j));
            let mut w = CocycleVector::zero(g.order(), q);
            for (cj, gj) in c.iter().zip(&gens) {
                w = w.add(&gj.scale(*cj));
            }
            witnesses.push(w);
        }
    }
    Ok(B0Result {
        invariants: AbelianInvariants::from_cyclic_orders(&orders, 0),
        method: B0Method::FullCocycle,
        details,
        witnesses,
    })
}

fn cyclic_quotient(g: &Group, n: &Subgroup) -> bool {
    let idx = (g.order() / n.order()) as u64;
    (0..g.order()).any(|x| {
        let mut k = 1u64;
        let mut y = x;
        while !n.contains(y) {
            y = g.mul(x, y);
            k += 1;
        }
        k == idx
    })
}

/// First sufficient condition for `B0(H) = 0` that applies to the p-group `h`.
pub fn b0_zero_criteria(h: &Group) -> Result<Option<&'static str>, BogomolovError> {
    let o = h.order();
    if o == 1 || h.is_abelian() {
        return Ok(Some("abelian"));
    }
    let p = h.is_p_group().ok_or(BogomolovError::NotAPGroup(o))?;
    let normals = h.normal_subgroups();
    let is_cyc = |s: &Subgroup| s.elements().iter().any(|&x| h.element_order(x) as usize == s.order());
    if normals.iter().any(|n| is_cyc(n) && cyclic_quotient(h, n)) {
        return Ok(Some("metacyclic"));
    }
    if h.element_orders().iter().any(|&e| e as usize * (p * p) as usize == o) {
        return Ok(Some("cyclic subgroup of index p^2"));
    }
    let abelian_normals: Vec<&Subgroup> = normals
        .iter()
        .filter(|n| n.to_group(h).0.is_abelian())
        .collect();
    if abelian_normals.iter().any(|n| cyclic_quotient(h, n)) {
        return Ok(Some("abelian normal subgroup with cyclic quotient"));
    }
    if o <= 256 {
        let bic = bicyclic_subgroups(h, o)?;
        for n in &abelian_normals {
            let want = o / n.order();
            if bic
                .iter()
                .any(|b| b.subgroup.order() == want && n.intersection(&b.subgroup).len() == 1)
            {
                return Ok(Some("abelian normal subgroup with bicyclic complement"));
            }
        }
    }
    if p == 2 && o <= 32 {
        return Ok(Some("2-group of order at most 32"));
    }
    if p != 2 && (o as u64) <= p.pow(4) {
        return Ok(Some("p-group of order at most p^4"));
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub enum SylowReduction {
    Trivial(B0Result),
    Inconclusive { prime: u64, reason: String },
}

/// `B0(G) = 0` whenever every Sylow subgroup of the Frobenius kernel has trivial `B0`.
pub fn b0_sylow_reduction(
    g: &Group,
    s: &FrobeniusStructure,
    cap: usize,
) -> Result<SylowReduction, BogomolovError> {
    if !is_fixed_point_free(g, &s.kernel, &s.complement)? {
        return Err(FrobeniusError::NotAFrobeniusComplementInG("action has fixed points".into()).into());
    }
    let (kernel, _) = s.kernel.to_group(g);
    let mut reasons = Vec::new();
    for (p, _) in factorize(kernel.order() as u64) {
        let (np, _) = kernel.sylow(p)?.to_group(&kernel);
        if let Some(c) = b0_zero_criteria(&np)? {
            reasons.push(format!("N_{p} (order {}): {c}", np.order()));
            continue;
        }
        if np.order() > cap {
            return Ok(SylowReduction::Inconclusive {
                prime: p,
                reason: format!("N_{p} of order {} has no criterion and exceeds the cap", np.order()),
            });
        }
        let r = b0(&np, cap)?;
        if !r.is_trivial() {
            return Ok(SylowReduction::Inconclusive {
                prime: p,
                reason: format!("B0(N_{p}) = {}", r.invariants),
            });
        }
        reasons.push(format!("N_{p} (order {}): full computation", np.order()));
    }
    Ok(SylowReduction::Trivial(B0Result::trivial(
        B0Method::SylowReduction,
        reasons.join("; "),
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B0Strategy {
    Auto,
    Full,
    Sylow,
    Criteria,
}

/// Runs the requested strategy; `None` means no method settled the question.
pub fn b0_with(g: &Group, strategy: B0Strategy, cap: usize) -> Result<Option<B0Result>, BogomolovError> {
    let criteria = || -> Result<Option<B0Result>, BogomolovError> {
        if g.order() > 1 && g.is_p_group().is_none() && !g.is_abelian() {
            return Ok(None);
        }
        Ok(b0_zero_criteria(g)?.map(|c| B0Result::trivial(B0Method::Criterion, c.to_string())))
    };
    let sylow = || -> Result<Option<B0Result>, BogomolovError> {
        for s in crate::frobenius::find_frobenius_structures(g)? {
            if let SylowReduction::Trivial(r) = b0_sylow_reduction(g, &s, cap)? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    };
    match strategy {
        B0Strategy::Full => b0(g, cap).map(Some),
        B0Strategy::Criteria => criteria(),
        B0Strategy::Sylow => sylow(),
        B0Strategy::Auto => {
            if let Some(r) = criteria()? {
                return Ok(Some(r));
            }
            if g.order() <= cap {
                return b0(g, cap).map(Some);
            }
            sylow()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::DEFAULT_COHOMOLOGY_CAP as CAP;
    use crate::constructors::{abelian, cyclic, dihedral, metacyclic, quaternion_generalized, symmetric};
    use crate::frobenius::find_frobenius_structures;

    #[test]
    fn bicyclic_examples() {
        let c6 = bicyclic_subgroups(&cyclic(6), CAP).unwrap();
        let max: Vec<_> = c6.iter().filter(|b| b.maximal).collect();
        assert_eq!(max.len(), 1);
        assert_eq!(max[0].subgroup.order(), 6);
        let q8 = bicyclic_subgroups(&quaternion_generalized(8).unwrap(), CAP).unwrap();
        assert!(q8.iter().all(|b| b.cyclic));
        assert_eq!(q8.iter().filter(|b| b.maximal).count(), 3);
        let v4 = bicyclic_subgroups(&abelian(&[2, 2]), CAP).unwrap();
        let max: Vec<_> = v4.iter().filter(|b| b.maximal).collect();
        assert_eq!(max.len(), 1);
        assert!(!max[0].cyclic && max[0].subgroup.order() == 4);
    }

    #[test]
    fn b0_small() {
        for g in [
            abelian(&[2, 2]),
            abelian(&[2, 4]),
            quaternion_generalized(8).unwrap(),
            dihedral(4).unwrap(),
            symmetric(3).unwrap(),
            symmetric(4).unwrap(),
        ] {
            let r = b0(&g, CAP).unwrap();
            assert!(r.is_trivial(), "order {}", g.order());
            assert!(r.witnesses.is_empty());
        }
    }

    #[test]
    fn maximal_matches_all() {
        for g in [dihedral(4).unwrap(), abelian(&[2, 2, 2]), symmetric(4).unwrap()] {
            let a = b0_over(&g, CAP, true).unwrap();
            let b = b0_over(&g, CAP, false).unwrap();
            assert_eq!(a.invariants, b.invariants);
        }
    }

    #[test]
    fn criteria() {
        assert_eq!(b0_zero_criteria(&cyclic(4)).unwrap(), Some("abelian"));
        assert_eq!(
            b0_zero_criteria(&quaternion_generalized(8).unwrap()).unwrap(),
            Some("metacyclic")
        );
        assert!(matches!(
            b0_zero_criteria(&symmetric(3).unwrap()),
            Err(BogomolovError::NotAPGroup(6))
        ));
        // D4 × C2: not metacyclic, but an order-16 2-group
        let g = dihedral(4).unwrap().direct_product(&cyclic(2)).unwrap();
        assert!(b0_zero_criteria(&g).unwrap().is_some());
    }

    #[test]
    fn sylow_reduction() {
        for g in [symmetric(3).unwrap(), metacyclic(7, 3, 2).unwrap()] {
            let s = &find_frobenius_structures(&g).unwrap()[0];
            let r = b0_sylow_reduction(&g, s, CAP).unwrap();
            assert!(matches!(r, SylowReduction::Trivial(_)));
            assert!(b0(&g, CAP).unwrap().is_trivial());
        }
    }

    #[test]
    fn strategies() {
        let g = metacyclic(7, 3, 2).unwrap();
        for s in [B0Strategy::Auto, B0Strategy::Full, B0Strategy::Sylow] {
            assert!(b0_with(&g, s, CAP).unwrap().unwrap().is_trivial());
        }
        assert!(b0_with(&g, B0Strategy::Criteria, CAP).unwrap().is_none());
    }
}
