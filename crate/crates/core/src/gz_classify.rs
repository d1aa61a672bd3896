//! pq-conditions, Z- and GZ-group recognition, and the type classification
//! of GZ-groups.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::constructors::{gz_type, sl2, ConstructError, Family, PresentationParams};
use crate::frobenius::sylows_cyclic_or_quaternion;
use crate::group::{factorize, is_prime, Group, GroupError, Subgroup};

#[derive(Debug, Error)]
pub enum GzError {
    #[error("group is not a solvable GZ-group")]
    NotSolvableGz,
    #[error("group is not a non-solvable GZ-group")]
    NotNonsolvableGz,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

fn primes_of(n: usize) -> Vec<u64> {
    factorize(n as u64).into_iter().map(|(p, _)| p).collect()
}

/// Every subgroup of order `pq` is cyclic. Subgroups are enumerated as
/// `⟨x, y⟩` with `x` running over class representatives.
pub fn satisfies_pq_condition(g: &Group, p: u64, q: u64) -> Result<bool, GzError> {
    for r in [p, q] {
        if !is_prime(r) {
            return Err(GroupError::NotPrime(r).into());
        }
    }
    let target = (p * q) as usize;
    if !g.order().is_multiple_of(target) {
        return Ok(true);
    }
    let orders = g.element_orders();
    let relevant: Vec<usize> = (1..g.order())
        .filter(|&x| orders[x] == p || orders[x] == q)
        .collect();
    for class in &g.conjugacy_classes().classes {
        let x = class[0];
        if x == 0 || !(orders[x] == p || orders[x] == q) {
            continue;
        }
        for &y in &relevant {
            if let Some(s) = g.closure_bounded(&[x, y], target, None) {
                if s.order() == target {
                    let (h, _) = s.to_group(g);
                    if !h.is_cyclic() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

pub fn is_z_group(g: &Group) -> Result<bool, GzError> {
    for p in primes_of(g.order()) {
        let (s, _) = g.sylow(p)?.to_group(g);
        if !s.is_cyclic() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every abelian subgroup is cyclic, tested on commuting pairs `(x, y)`
/// with `x` a class representative.
pub fn abelian_subgroups_cyclic(g: &Group) -> bool {
    let orders = g.element_orders();
    for class in &g.conjugacy_classes().classes {
        let x = class[0];
        let ox = orders[x];
        let mut in_x = vec![false; g.order()];
        let mut p = 0;
        for _ in 0..ox {
            in_x[p] = true;
            p = g.mul(x, p);
        }
        for y in g.centralizer(&[x]).elements().iter().copied() {
            let oy = orders[y];
            let mut common = 0;
            let mut p = 0;
            for _ in 0..oy {
                common += in_x[p] as u64;
                p = g.mul(y, p);
            }
            if ox * oy / common != num_integer::lcm(ox, oy) {
                return false;
            }
        }
    }
    true
}

/// Sylow shapes, cross-checked against the abelian-subgroup and p²-condition characterizations.
pub fn is_gz_group(g: &Group) -> Result<bool, GzError> {
    let sylow = sylows_cyclic_or_quaternion(g)?;
    let abelian = abelian_subgroups_cyclic(g);
    let mut pp = true;
    for p in primes_of(g.order()) {
        pp &= satisfies_pq_condition(g, p, p)?;
    }
    if sylow != abelian || sylow != pp {
        return Err(GzError::InternalInconsistency(format!(
            "sylow shapes {sylow}, abelian subgroups cyclic {abelian}, p²-conditions {pp}"
        )));
    }
    Ok(sylow)
}

fn recover_type_i(g: &Group) -> Option<PresentationParams> {
    let d = g.derived_subgroup();
    let (dg, dmap) = d.to_group(g);
    if !dg.is_cyclic() {
        return None;
    }
    let m = d.order() as u64;
    let n = g.order() as u64 / m;
    let sigma = if m == 1 {
        0
    } else {
        dmap[(0..dg.order()).find(|&x| dg.element_order(x) == m)?]
    };
    let orders = g.element_orders();
    let mut best: Option<u64> = None;
    for tau in (0..g.order()).filter(|&x| orders[x] == n) {
        let img = g.conj(tau, sigma);
        let r = if m == 1 {
            1
        } else {
            (1..m).find(|&r| g.pow(sigma, r as i64) == img)?
        };
        if g.closure(&[sigma, tau]).order() == g.order() {
            best = Some(best.map_or(r, |b| b.min(r)));
        }
    }
    let p = PresentationParams::metacyclic(m, n, best?);
    p.validate().ok()?;
    Some(p)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Smallest parameters (in sweep order) whose construction is isomorphic to `g`.
fn sweep(g: &Group, family: Family) -> Option<PresentationParams> {
    let order = g.order() as u64;
    let base = match family {
        Family::II => 2,
        Family::III => 8,
        Family::IV => 16,
        _ => return None,
    };
    if !order.is_multiple_of(base) || order > 2000 {
        return None;
    }
    let mn = order / base;
    for m in divisors(mn) {
        let n = mn / m;
        let mut cands = Vec::new();
        for r in 1..=m.max(1) {
            let p = PresentationParams::new(family).with("m", m).with("n", n).with("r", r % m.max(2));
            match family {
                Family::II => {
                    for l in 1..=m.max(1) {
                        for k in 1..=n {
                            cands.push(p.clone().with("l", l % m.max(2)).with("k", k));
                        }
                    }
                }
                Family::III => cands.push(p),
                Family::IV => {
                    for t in 1..=m.max(1) {
                        for k in 1..=n {
                            cands.push(p.clone().with("t", t % m.max(2)).with("k", k));
                        }
                    }
                }
                _ => {}
            }
        }
        for c in cands {
            if c.validate().is_err() {
                continue;
            }
            if let Ok(built) = gz_type(&c) {
                if built.group.is_isomorphic(g).is_some() {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// Type tag of a solvable GZ-group, with best-effort parameters.
pub fn classify_solvable_gz(g: &Group) -> Result<(Family, Option<PresentationParams>), GzError> {
    if !g.is_solvable() || !is_gz_group(g)? {
        return Err(GzError::NotSolvableGz);
    }
    if is_z_group(g)? {
        return Ok((Family::I, recover_type_i(g)));
    }
    let p2 = g.sylow(2)?;
    let odd = g.largest_odd_normal();
    let family = if odd.order() * p2.order() == g.order() {
        Family::II
    } else if p2.order() == 8 {
        Family::III
    } else {
        Family::IV
    };
    Ok((family, sweep(g, family)))
}

/// `NS-I` when `g = H × L` with `L ≅ SL2(F_p)` perfect and `H` a Z-group of coprime order.
#[derive(Debug, Clone, Serialize)]
pub struct NonsolvableReport {
    pub family: Family,
    pub p: u64,
    /// order of the direct factor `H` for NS-I
    pub h_order: Option<usize>,
}

pub fn classify_nonsolvable_gz(g: &Group) -> Result<NonsolvableReport, GzError> {
    if g.is_solvable() || !is_gz_group(g)? {
        return Err(GzError::NotNonsolvableGz);
    }
    let mut l = g.whole();
    loop {
        let (lg, map) = l.to_group(g);
        let d = lg.derived_subgroup();
        if d.order() == lg.order() {
            break;
        }
        let elems: Vec<usize> = d.elements().iter().map(|&x| map[x]).collect();
        l = g.subgroup_from_set(&elems);
    }
    let lo = l.order() as u64;
    let p = (5..=lo)
        .find(|&p| is_prime(p) && p * (p * p - 1) == lo)
        .ok_or_else(|| GzError::InternalInconsistency(format!("perfect core of order {lo}")))?;
    let c = g.centralizer(l.elements());
    let h: Vec<usize> = c
        .elements()
        .iter()
        .copied()
        .filter(|&x| num_integer::gcd(g.element_order(x), lo) == 1)
        .collect();
    let split = g.is_subgroup_set(&h) && h.len() * l.order() == g.order();
    Ok(NonsolvableReport {
        family: if split { Family::NsI } else { Family::NsII },
        p,
        h_order: split.then_some(h.len()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HTag {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "SL2F3")]
    Sl2F3,
    #[serde(rename = "SL2F5")]
    Sl2F5,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplementCriterion {
    #[serde(skip)]
    pub prime_order_subgroup: Subgroup,
    pub prime_order_subgroup_order: usize,
    pub decomposition: Option<(u64, HTag)>,
    pub is_frobenius_complement: bool,
}

fn references() -> &'static [(HTag, Group); 2] {
    static REFS: OnceLock<[(HTag, Group); 2]> = OnceLock::new();
    REFS.get_or_init(|| {
        [
            (HTag::Sl2F3, sl2(3).expect("SL2(F3)")),
            (HTag::Sl2F5, sl2(5).expect("SL2(F5)")),
        ]
    })
}

fn squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, k)| k == 1)
}

/// Whether the subgroup generated by prime-order elements is `C_n × H` with
/// `n` squarefree, coprime to `|H|`, and `H ∈ {1, SL2(F3), SL2(F5)}`.
pub fn frobenius_complement_criterion(g: &Group) -> Result<ComplementCriterion, GzError> {
    let gens: Vec<usize> = (1..g.order())
        .filter(|&x| is_prime(g.element_order(x)))
        .collect();
    let e = g.closure(&gens);
    let (eg, _) = e.to_group(g);
    let en = eg.order() as u64;
    let center = eg.center();
    let mut decomposition = None;
    let candidates = [(HTag::Trivial, 1u64), (HTag::Sl2F3, 24), (HTag::Sl2F5, 120)];
    for (tag, h) in candidates {
        if !en.is_multiple_of(h) {
            continue;
        }
        let n = en / h;
        if !squarefree(n) || num_integer::gcd(n, h) != 1 {
            continue;
        }
        let cn: Vec<usize> = center
            .elements()
            .iter()
            .copied()
            .filter(|&x| eg.pow(x, n as i64) == 0)
            .collect();
        if cn.len() as u64 != n {
            continue;
        }
        let (c, _) = eg.subgroup_from_set(&cn).to_group(&eg);
        if !c.is_cyclic() {
            continue;
        }
        let hs: Vec<usize> = (0..eg.order()).filter(|&x| eg.pow(x, h as i64) == 0).collect();
        if hs.len() as u64 != h || !eg.is_subgroup_set(&hs) {
            continue;
        }
        let iso = match tag {
            HTag::Trivial => true,
            _ => {
                let (hg, _) = eg.subgroup_from_set(&hs).to_group(&eg);
                let reference = &references().iter().find(|(t, _)| *t == tag).expect("cached").1;
                hg.is_isomorphic(reference).is_some()
            }
        };
        if iso {
            decomposition = Some((n, tag));
            break;
        }
    }
    Ok(ComplementCriterion {
        prime_order_subgroup_order: e.order(),
        prime_order_subgroup: e,
        is_frobenius_complement: decomposition.is_some(),
        decomposition,
    })
}

/// Everything this module can say about one group.
#[derive(Debug, Clone, Serialize)]
pub struct GzReport {
    pub is_z_group: bool,
    pub is_gz_group: bool,
    pub solvable_type: Option<Family>,
    pub nonsolvable_type: Option<Family>,
    pub params: Option<PresentationParams>,
    pub complement_criterion: ComplementCriterion,
    pub pq_conditions_all: bool,
}

pub fn gz_report(g: &Group) -> Result<GzReport, GzError> {
    let is_gz = is_gz_group(g)?;
    let is_z = is_z_group(g)?;
    if is_z && !is_gz {
        return Err(GzError::InternalInconsistency("Z-group that is not GZ".into()));
    }
    let (mut solvable_type, mut nonsolvable_type, mut params) = (None, None, None);
    if is_gz {
        if g.is_solvable() {
            let (f, p) = classify_solvable_gz(g)?;
            solvable_type = Some(f);
            params = p;
        } else {
            nonsolvable_type = Some(classify_nonsolvable_gz(g)?.family);
        }
    }
    let primes = primes_of(g.order());
    let mut pq_all = true;
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i..] {
            pq_all &= satisfies_pq_condition(g, p, q)?;
        }
    }
    Ok(GzReport {
        is_z_group: is_z,
        is_gz_group: is_gz,
        solvable_type,
        nonsolvable_type,
        params,
        complement_criterion: frobenius_complement_criterion(g)?,
        pq_conditions_all: pq_all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{abelian, alternating, cyclic, metacyclic, quaternion_generalized, symmetric};

    #[test]
    fn pq_examples() {
        assert!(!satisfies_pq_condition(&abelian(&[2, 2]), 2, 2).unwrap());
        assert!(satisfies_pq_condition(&quaternion_generalized(8).unwrap(), 2, 2).unwrap());
        assert!(!satisfies_pq_condition(&symmetric(3).unwrap(), 2, 3).unwrap());
        assert!(satisfies_pq_condition(&cyclic(6), 2, 3).unwrap());
        assert!(satisfies_pq_condition(&cyclic(6), 2, 4).is_err());
    }

    #[test]
    fn z_and_gz() {
        assert!(is_z_group(&cyclic(15)).unwrap());
        assert!(is_z_group(&symmetric(3).unwrap()).unwrap());
        let q8 = quaternion_generalized(8).unwrap();
        assert!(!is_z_group(&q8).unwrap());
        assert!(is_gz_group(&q8).unwrap());
        assert!(is_gz_group(&sl2(3).unwrap()).unwrap());
        assert!(!is_gz_group(&alternating(4).unwrap()).unwrap());
        assert!(is_gz_group(&sl2(5).unwrap()).unwrap());
    }

    #[test]
    fn solvable_types() {
        let (f, p) = classify_solvable_gz(&metacyclic(7, 3, 2).unwrap()).unwrap();
        assert_eq!(f, Family::I);
        assert_eq!(p.unwrap(), PresentationParams::metacyclic(7, 3, 2));
        let (f, p) = classify_solvable_gz(&sl2(3).unwrap()).unwrap();
        assert_eq!(f, Family::III);
        let p = p.unwrap();
        assert_eq!((p.m, p.n), (1, 3));
        let iv = gz_type(&PresentationParams::new(Family::IV).with("n", 3).with("k", 2)).unwrap();
        assert_eq!(classify_solvable_gz(&iv.group).unwrap().0, Family::IV);
        assert_eq!(classify_solvable_gz(&quaternion_generalized(16).unwrap()).unwrap().0, Family::II);
        assert!(matches!(
            classify_solvable_gz(&alternating(4).unwrap()),
            Err(GzError::NotSolvableGz)
        ));
    }

    #[test]
    fn nonsolvable_types() {
        let r = classify_nonsolvable_gz(&sl2(5).unwrap()).unwrap();
        assert_eq!((r.family, r.p, r.h_order), (Family::NsI, 5, Some(1)));
        let g = cyclic(7).direct_product(&sl2(5).unwrap()).unwrap();
        let r = classify_nonsolvable_gz(&g).unwrap();
        assert_eq!((r.family, r.h_order), (Family::NsI, Some(7)));
        let ns2 = gz_type(&PresentationParams::new(Family::NsII).with("p", 5)).unwrap();
        assert_eq!(classify_nonsolvable_gz(&ns2.group).unwrap().family, Family::NsII);
    }

    #[test]
    fn complement_criterion() {
        for g in [cyclic(2), cyclic(3), cyclic(4), quaternion_generalized(8).unwrap(), sl2(3).unwrap(), sl2(5).unwrap()] {
            assert!(frobenius_complement_criterion(&g).unwrap().is_frobenius_complement);
        }
        for g in [symmetric(3).unwrap(), alternating(4).unwrap(), abelian(&[2, 2])] {
            assert!(!frobenius_complement_criterion(&g).unwrap().is_frobenius_complement);
        }
        let c = frobenius_complement_criterion(&sl2(3).unwrap()).unwrap();
        assert_eq!(c.prime_order_subgroup_order, 24);
        assert_eq!(c.decomposition, Some((1, HTag::Sl2F3)));
    }
}
