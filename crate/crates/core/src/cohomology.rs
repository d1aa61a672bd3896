//! Trivial-coefficient `H²` over `Z/n`, the `Q/Z` model, and restriction.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use crate::group::{Group, Subgroup};
use crate::zlinalg::{
    crt_lift, kernel_mod_n, prime_power_parts, smith_normal_form, AbelianInvariants, LinalgError,
    LocalKernel, LocalKernelSolver, LocalQuotient, LocalRing, SparseIntMatrix,
};

pub const DEFAULT_COHOMOLOGY_CAP: usize = 72;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("group of order {order} exceeds the cohomology cap {cap}")]
    CohomologyCapExceeded { order: usize, cap: usize },
    #[error("bad modulus {0}")]
    BadModulus(u64),
    #[error("cocycle belongs to a different module: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A normalized 2-cochain `f: G × G → Z/n`, stored on `(G∖1)²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleVector {
    pub modulus: u64,
    pub group_order: usize,
    pub values: Vec<u64>,
}

fn var(n: usize, g: usize, h: usize) -> usize {
    (g - 1) * (n - 1) + (h - 1)
}

impl CocycleVector {
    pub fn zero(group_order: usize, modulus: u64) -> Self {
        let m = group_order.saturating_sub(1);
        CocycleVector {
            modulus,
            group_order,
            values: vec![0; m * m],
        }
    }

    pub fn get(&self, g: usize, h: usize) -> u64 {
        if g == 0 || h == 0 {
            0
        } else {
            self.values[var(self.group_order, g, h)]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `f(g,h) + f(gh,k) = f(h,k) + f(g,hk)` for all triples.
    pub fn is_cocycle(&self, g: &Group) -> bool {
        let n = self.modulus;
        let o = g.order();
        if o != self.group_order {
            return false;
        }
        for a in 1..o {
            for b in 1..o {
                let ab = g.mul(a, b);
                for c in 1..o {
                    let bc = g.mul(b, c);
                    let lhs = (self.get(a, b) + self.get(ab, c)) % n;
                    let rhs = (self.get(b, c) + self.get(a, bc)) % n;
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn add(&self, other: &CocycleVector) -> CocycleVector {
        assert_eq!(self.modulus, other.modulus);
        CocycleVector {
            modulus: self.modulus,
            group_order: self.group_order,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| (a + b) % self.modulus)
                .collect(),
        }
    }

    pub fn scale(&self, s: u64) -> CocycleVector {
        let n = self.modulus as u128;
        CocycleVector {
            modulus: self.modulus,
            group_order: self.group_order,
            values: self.values.iter().map(|&a| ((a as u128 * s as u128) % n) as u64).collect(),
        }
    }

    /// Coboundary `δc(g,h) = c(g) + c(h) - c(gh)` of a normalized 1-cochain.
    pub fn coboundary(g: &Group, c: &[u64], modulus: u64) -> CocycleVector {
        let o = g.order();
        let mut out = CocycleVector::zero(o, modulus);
        for a in 1..o {
            for b in 1..o {
                let v = (c[a] + c[b] + modulus - c[g.mul(a, b)] % modulus) % modulus;
                out.values[var(o, a, b)] = v;
            }
        }
        out
    }
}

/// Exponent-sum coordinates of every element along a BFS tree, and the
/// relations from non-tree edges.
fn tree_relations(g: &Group) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let gens = g.generator_indices();
    let r = gens.len();
    let mut coords: Vec<Option<Vec<i64>>> = vec![None; g.order()];
    coords[0] = Some(vec![0; r]);
    let mut queue = VecDeque::from([0usize]);
    let mut rels: HashSet<Vec<i64>> = HashSet::new();
    let mut pending = Vec::new();
    while let Some(x) = queue.pop_front() {
        let cx = coords[x].clone().expect("visited");
        for (i, &s) in gens.iter().enumerate() {
            let y = g.mul(s, x);
            let mut cy = cx.clone();
            cy[i] += 1;
            match &coords[y] {
                None => {
                    coords[y] = Some(cy);
                    queue.push_back(y);
                }
                Some(_) => pending.push((y, cy)),
            }
        }
    }
    let coords: Vec<Vec<i64>> = coords.into_iter().map(|c| c.expect("connected")).collect();
    for (y, cy) in pending {
        let d: Vec<i64> = cy.iter().zip(&coords[y]).map(|(a, b)| a - b).collect();
        if d.iter().any(|&v| v != 0) {
            rels.insert(d);
        }
    }
    let mut rels: Vec<Vec<i64>> = rels.into_iter().collect();
    rels.sort();
    (coords, rels)
}

/// `G^{ab}` as abelian invariants.
pub fn abelianization(g: &Group) -> AbelianInvariants {
    let (_, rels) = tree_relations(g);
    let r = g.generator_indices().len();
    let entries = rels
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(|e| *e.1 != 0).map(move |(j, &v)| (j, i, v)))
        .collect();
    let m = SparseIntMatrix::new(r, rels.len(), entries);
    let s = smith_normal_form(&m, false);
    let factors: Vec<u64> = s
        .invariant_factors()
        .iter()
        .map(|d| u64::try_from(d).expect("finite group invariants fit"))
        .collect();
    AbelianInvariants::from_cyclic_orders(&factors, s.free_rank())
}

/// Generators of `Hom(G, Z/n)`, each as its value on every element.
pub fn hom_generators(g: &Group, n: u64) -> Result<Vec<Vec<u64>>, CohomologyError> {
    if n < 2 {
        return Err(CohomologyError::BadModulus(n));
    }
    let (coords, rels) = tree_relations(g);
    let r = g.generator_indices().len();
    let entries = rels
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(|e| *e.1 != 0).map(move |(j, &v)| (i, j, v)))
        .collect();
    let m = SparseIntMatrix::new(rels.len(), r, entries);
    let k = kernel_mod_n(&m, n)?;
    Ok(k.generators
        .iter()
        .map(|v| {
            coords
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(v)
                        .fold(0i128, |acc, (&a, &b)| (acc + a as i128 * b as i128).rem_euclid(n as i128))
                        as u64
                })
                .collect()
        })
        .collect())
}

/// Every homomorphism `G → Z/n`, each as its value on every element.
pub fn hom_to_cyclic(g: &Group, n: u64) -> Result<Vec<Vec<u64>>, CohomologyError> {
    let gens = hom_generators(g, n)?;
    let mut all: HashSet<Vec<u64>> = HashSet::from([vec![0; g.order()]]);
    for h in &gens {
        let mut next = all.clone();
        for a in &all {
            let mut cur = a.clone();
            loop {
                cur = cur.iter().zip(h).map(|(&x, &y)| (x + y) % n).collect();
                if !next.insert(cur.clone()) {
                    break;
                }
            }
        }
        all = next;
    }
    let mut v: Vec<Vec<u64>> = all.into_iter().collect();
    v.sort();
    Ok(v)
}

/// `Z²/B²` over `Z/p^k`, optionally also modulo connecting-map images of `Hom(G, Z/p^k)`.
#[derive(Debug, Clone)]
pub struct LocalModel {
    pub ring: LocalRing,
    pub group_order: usize,
    pub kernel: LocalKernel,
    pub quotient: LocalQuotient,
}

impl LocalModel {
    pub fn build(g: &Group, ring: LocalRing, qz: bool) -> Result<LocalModel, CohomologyError> {
        let o = g.order();
        let m = o.saturating_sub(1);
        let ncols = m * m;
        let q = ring.q;
        let mut solver = LocalKernelSolver::new(ring, ncols);
        let mut row: SmallVec<[(usize, u64); 4]> = SmallVec::new();
        for a in 1..o {
            for b in 1..o {
                let ab = g.mul(a, b);
                for c in 1..o {
                    let bc = g.mul(b, c);
                    row.clear();
                    let mut push = |col: usize, v: u64| match row.iter_mut().find(|e| e.0 == col) {
                        Some(e) => e.1 = (e.1 + v) % q,
                        None => row.push((col, v % q)),
                    };
                    push(var(o, a, b), 1);
                    if ab != 0 {
                        push(var(o, ab, c), 1);
                    }
                    push(var(o, b, c), q - 1);
                    if bc != 0 {
                        push(var(o, a, bc), q - 1);
                    }
                    row.retain(|e| e.1 != 0);
                    if !row.is_empty() {
                        solver.add_row(&row);
                    }
                }
            }
        }
        let kernel = solver.finalize();
        let mut relations = Vec::new();
        let mut e = vec![0u64; o];
        for x in 1..o {
            e[x] = 1;
            relations.push(kernel.coordinates(&CocycleVector::coboundary(g, &e, q).values));
            e[x] = 0;
        }
        if qz && o > 1 {
            for h in hom_generators(g, q)? {
                let mut d = CocycleVector::zero(o, q);
                for a in 1..o {
                    for b in 1..o {
                        let s = h[a] + h[b];
                        let t = h[g.mul(a, b)];
                        debug_assert_eq!((s - t) % q, 0);
                        d.values[var(o, a, b)] = (s - t) / q;
                    }
                }
                relations.push(kernel.coordinates(&d.values));
            }
        }
        let quotient = LocalQuotient::new(ring, &kernel.order_exponents, &relations);
        Ok(LocalModel {
            ring,
            group_order: o,
            kernel,
            quotient,
        })
    }

    /// Orders `p^e` of the cyclic summands.
    pub fn orders(&self) -> Vec<u64> {
        self.quotient.exponents.iter().map(|&e| self.ring.p.pow(e)).collect()
    }

    /// Class coordinates of a cocycle given by its values mod `p^k`.
    pub fn coordinates(&self, values: &[u64]) -> Vec<u64> {
        let q = self.ring.q;
        let reduced: Vec<u64> = values.iter().map(|&v| v % q).collect();
        self.quotient.coordinates(&self.kernel.coordinates(&reduced))
    }

    /// A cocycle (values mod `p^k`) representing the `j`-th summand generator.
    pub fn generator_values(&self, j: usize) -> Vec<u64> {
        self.kernel.combine(&self.quotient.generator(j))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    #[serde(rename = "H2_mod_n")]
    H2ModN,
    #[serde(rename = "H2_QZ_model")]
    H2QzModel,
}

#[derive(Debug, Clone)]
pub struct CohomologyModule {
    pub kind: ModuleKind,
    pub modulus: u64,
    pub invariants: AbelianInvariants,
    /// one representative per invariant factor, in the same order
    pub basis: Vec<CocycleVector>,
    pub locals: Vec<LocalModel>,
}

impl CohomologyModule {
    fn lift(&self, ring: &LocalRing, x: u64) -> u64 {
        match self.kind {
            ModuleKind::H2ModN => crt_lift(x, ring, self.modulus),
            ModuleKind::H2QzModel => x * (self.modulus / ring.q),
        }
    }

    /// Values mod `p^k` of the `p`-part of a cocycle with this module's modulus.
    fn local_values(&self, ring: &LocalRing, c: &CocycleVector) -> Vec<u64> {
        match self.kind {
            ModuleKind::H2ModN => c.values.iter().map(|&v| v % ring.q).collect(),
            ModuleKind::H2QzModel => {
                let n = self.modulus;
                let co = n / ring.q;
                let e = crt_lift(1, ring, n) as u128;
                c.values
                    .iter()
                    .map(|&v| (((v as u128 * e) % n as u128) as u64 / co) % ring.q)
                    .collect()
            }
        }
    }

    /// Class coordinates, one vector per prime-power component.
    pub fn coordinates(&self, c: &CocycleVector) -> Result<Vec<Vec<u64>>, CohomologyError> {
        if c.modulus != self.modulus {
            return Err(CohomologyError::Mismatch(format!(
                "modulus {} vs {}",
                c.modulus, self.modulus
            )));
        }
        Ok(self
            .locals
            .iter()
            .map(|l| l.coordinates(&self.local_values(&l.ring, c)))
            .collect())
    }

    pub fn is_zero_class(&self, c: &CocycleVector) -> Result<bool, CohomologyError> {
        Ok(self.coordinates(c)?.iter().flatten().all(|&x| x == 0))
    }

    pub fn order(&self) -> u128 {
        self.invariants.torsion_order()
    }
}

fn check_cap(g: &Group, cap: usize) -> Result<(), CohomologyError> {
    if g.order() > cap {
        return Err(CohomologyError::CohomologyCapExceeded {
            order: g.order(),
            cap,
        });
    }
    Ok(())
}

fn assemble(
    g: &Group,
    kind: ModuleKind,
    modulus: u64,
    rings: Vec<LocalRing>,
) -> Result<CohomologyModule, CohomologyError> {
    let qz = kind == ModuleKind::H2QzModel;
    let locals = if g.order() == 1 {
        Vec::new()
    } else {
        rings
            .into_iter()
            .map(|r| LocalModel::build(g, r, qz))
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut module = CohomologyModule {
        kind,
        modulus,
        invariants: AbelianInvariants::trivial(),
        basis: Vec::new(),
        locals,
    };
    // per prime, summands sorted by decreasing order; the t-th largest of
    // every prime combine into the t-th largest invariant factor
    let mut per_prime: Vec<Vec<(u64, Vec<u64>)>> = module
        .locals
        .iter()
        .map(|l| {
            let mut v: Vec<(u64, Vec<u64>)> = l
                .orders()
                .into_iter()
                .enumerate()
                .map(|(j, o)| {
                    let vals = l.generator_values(j).iter().map(|&x| module.lift(&l.ring, x)).collect();
                    (o, vals)
                })
                .collect();
            v.sort_by_key(|e| std::cmp::Reverse(e.0));
            v
        })
        .collect();
    let count = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors = Vec::new();
    let mut basis = Vec::new();
    for t in 0..count {
        let mut order = 1u64;
        let mut c = CocycleVector::zero(g.order(), modulus);
        for part in per_prime.iter_mut() {
            if let Some((o, vals)) = part.get(t) {
                order *= o;
                c = c.add(&CocycleVector {
                    modulus,
                    group_order: g.order(),
                    values: vals.clone(),
                });
            }
        }
        factors.push(order);
        basis.push(c);
    }
    factors.reverse();
    basis.reverse();
    module.invariants = AbelianInvariants {
        factors,
        free_rank: 0,
    };
    module.basis = basis;
    Ok(module)
}

/// `H²(G, Z/n)` with normalized cocycles.
pub fn h2_mod_n(g: &Group, n: u64, cap: usize) -> Result<CohomologyModule, CohomologyError> {
    check_cap(g, cap)?;
    if n < 2 {
        return Err(CohomologyError::BadModulus(n));
    }
    assemble(g, ModuleKind::H2ModN, n, prime_power_parts(n))
}

/// `H²(G, Q/Z)`, computed as `H²(G, Z/|G|)` modulo the image of `Hom(G, Q/Z)`.
pub fn h2_qz(g: &Group, cap: usize) -> Result<CohomologyModule, CohomologyError> {
    check_cap(g, cap)?;
    let n = g.order() as u64;
    assemble(g, ModuleKind::H2QzModel, n.max(1), prime_power_parts(n))
}

/// Pointwise restriction to `A`, indexed by the elements of `a.to_group(g)`.
pub fn restrict(c: &CocycleVector, g: &Group, a: &Subgroup) -> CocycleVector {
    let (ag, map) = a.to_group(g);
    let o = ag.order();
    let mut out = CocycleVector::zero(o, c.modulus);
    for x in 1..o {
        for y in 1..o {
            out.values[var(o, x, y)] = c.get(map[x], map[y]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{abelian, cyclic, quaternion_generalized, sl2, symmetric};

    const CAP: usize = DEFAULT_COHOMOLOGY_CAP;

    #[test]
    fn trivial_group() {
        let g = Group::trivial(1);
        assert!(h2_mod_n(&g, 5, CAP).unwrap().invariants.is_trivial());
        assert!(h2_qz(&g, CAP).unwrap().invariants.is_trivial());
    }

    #[test]
    fn c2_mod_2() {
        let m = h2_mod_n(&cyclic(2), 2, CAP).unwrap();
        assert_eq!(m.invariants.factors, vec![2]);
        assert!(m.basis[0].is_cocycle(&cyclic(2)));
    }

    #[test]
    fn klein_mod_4() {
        // Hom(Z/2, Z/4) + Ext(Z/2 + Z/2, Z/4)
        let g = abelian(&[2, 2]);
        let m = h2_mod_n(&g, 4, CAP).unwrap();
        assert_eq!(m.invariants.factors, vec![2, 2, 2]);
        for b in &m.basis {
            assert!(b.is_cocycle(&g));
        }
    }

    #[test]
    fn schur_multipliers() {
        for n in [2, 3, 4, 6] {
            assert!(h2_qz(&cyclic(n), CAP).unwrap().invariants.is_trivial());
        }
        let v4 = h2_qz(&abelian(&[2, 2]), CAP).unwrap();
        assert_eq!(v4.invariants.factors, vec![2]);
        assert!(h2_qz(&quaternion_generalized(8).unwrap(), CAP).unwrap().invariants.is_trivial());
        assert_eq!(h2_qz(&abelian(&[2, 4]), CAP).unwrap().invariants.factors, vec![2]);
        assert_eq!(h2_qz(&abelian(&[3, 3]), CAP).unwrap().invariants.factors, vec![3]);
        assert_eq!(h2_qz(&abelian(&[2, 6]), CAP).unwrap().invariants.factors, vec![2]);
        assert!(h2_qz(&symmetric(3).unwrap(), CAP).unwrap().invariants.is_trivial());
        assert_eq!(h2_qz(&symmetric(4).unwrap(), CAP).unwrap().invariants.factors, vec![2]);
        assert!(h2_qz(&sl2(3).unwrap(), CAP).unwrap().invariants.is_trivial());
    }

    #[test]
    fn basis_are_cocycles_and_nonzero() {
        let g = abelian(&[2, 2, 2]);
        let m = h2_qz(&g, CAP).unwrap();
        assert_eq!(m.invariants.factors, vec![2, 2, 2]);
        for b in &m.basis {
            assert!(b.is_cocycle(&g));
            assert!(!m.is_zero_class(b).unwrap());
        }
    }

    #[test]
    fn restriction_kills_on_cyclic() {
        let g = abelian(&[2, 2]);
        let m = h2_qz(&g, CAP).unwrap();
        let c = &m.basis[0];
        for gen in g.generator_indices() {
            let a = g.closure(&[*gen]);
            let r = restrict(c, &g, &a);
            let (ag, _) = a.to_group(&g);
            let ma = h2_qz(&ag, CAP).unwrap();
            assert!(ma.invariants.is_trivial());
            assert!(r.is_cocycle(&ag));
        }
        let t = restrict(c, &g, &g.trivial_subgroup());
        assert!(t.values.is_empty());
    }

    #[test]
    fn coboundaries_are_zero() {
        let g = symmetric(3).unwrap();
        let m = h2_mod_n(&g, 6, CAP).unwrap();
        let c: Vec<u64> = (0..6).map(|x| (x * x % 6) as u64).collect();
        let mut c = c;
        c[0] = 0;
        let b = CocycleVector::coboundary(&g, &c, 6);
        assert!(b.is_cocycle(&g));
        assert!(m.is_zero_class(&b).unwrap());
    }

    #[test]
    fn homs() {
        assert_eq!(hom_to_cyclic(&cyclic(6), 6).unwrap().len(), 6);
        assert_eq!(hom_to_cyclic(&symmetric(3).unwrap(), 6).unwrap().len(), 2);
        assert_eq!(hom_to_cyclic(&sl2(5).unwrap(), 10).unwrap().len(), 1);
        assert_eq!(abelianization(&symmetric(4).unwrap()).factors, vec![2]);
        assert_eq!(abelianization(&abelian(&[2, 4])).factors, vec![2, 4]);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            h2_qz(&sl2(5).unwrap(), CAP),
            Err(CohomologyError::CohomologyCapExceeded { order: 120, cap: 72 })
        ));
    }
}
