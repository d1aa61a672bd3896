//! Finite permutation groups with full element enumeration.
//!
//! A [`Group`] is materialized eagerly: every element is stored, indexed
//! `0..order` with `0` the identity. Products are resolved through a short
//! base (points whose images separate all elements), so `mul` costs
//! `O(|base|)` plus one hash lookup rather than a full permutation product.

mod hom;
mod perm;
mod products;
mod structure;
mod subgroup;

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_integer::Integer;
use smallvec::SmallVec;
use thiserror::Error;

pub use hom::Isomorphism;
pub use perm::Perm;
pub use products::SemidirectProduct;
pub use structure::{PredicateFlags, Quotient, StructuralPredicates};
pub use subgroup::Subgroup;

pub const DEFAULT_ORDER_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("group order exceeds the materialization cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("element is not in the group")]
    ElementNotInGroup,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("relation violated: {0}")]
    RelationViolation(String),
}

type Key = SmallVec<[u32; 4]>;

pub struct Group {
    degree: usize,
    generators: Vec<Perm>,
    gen_index: Vec<usize>,
    elements: Vec<Perm>,
    base: Vec<usize>,
    index: HashMap<Key, usize>,
    inverses: Vec<usize>,
    orders: Vec<u64>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Conjugacy classes, each sorted, listed in order of their smallest element.
#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl Clone for Group {
    fn clone(&self) -> Self {
        Group {
            degree: self.degree,
            generators: self.generators.clone(),
            gen_index: self.gen_index.clone(),
            elements: self.elements.clone(),
            base: self.base.clone(),
            index: self.index.clone(),
            inverses: self.inverses.clone(),
            orders: self.orders.clone(),
            classes: OnceLock::new(),
        }
    }
}

impl Group {
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<Group, GroupError> {
        Self::from_generators_with_cap(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_generators_with_cap(
        degree: usize,
        gens: Vec<Perm>,
        cap: usize,
    ) -> Result<Group, GroupError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(GroupError::NotAPermutation(format!(
                    "generator {g} has degree {} but group degree is {degree}",
                    g.degree()
                )));
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut seen: HashMap<Perm, usize> = HashMap::new();
        seen.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            for g in &gens {
                let y = g.compose(&elements[head]);
                if !seen.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    seen.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            head += 1;
        }
        let gen_index = gens.iter().map(|g| seen[g]).collect();
        drop(seen);
        Ok(Self::finish(degree, gens, gen_index, elements))
    }

    fn finish(
        degree: usize,
        generators: Vec<Perm>,
        gen_index: Vec<usize>,
        elements: Vec<Perm>,
    ) -> Group {
        let base = choose_base(degree, &elements);
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let key: Key = base.iter().map(|&b| e.images()[b]).collect();
            index.insert(key, i);
        }
        let mut g = Group {
            degree,
            generators,
            gen_index,
            elements,
            base,
            index,
            inverses: Vec::new(),
            orders: Vec::new(),
            classes: OnceLock::new(),
        };
        g.inverses = g
            .elements
            .iter()
            .map(|e| g.index_of(&e.inverse()).expect("closed under inverse"))
            .collect();
        g.orders = g.elements.iter().map(|e| e.order()).collect();
        g
    }

    pub fn trivial(degree: usize) -> Group {
        Group::from_generators(degree, Vec::new()).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Element indices of the generators, in the order they were supplied.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_index
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        if p.degree() != self.degree {
            return None;
        }
        let key: Key = self.base.iter().map(|&b| p.images()[b]).collect();
        let i = *self.index.get(&key)?;
        (self.elements[i] == *p).then_some(i)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index_of(p).is_some()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let ea = self.elements[a].images();
        let eb = self.elements[b].images();
        let key: Key = self.base.iter().map(|&pt| ea[eb[pt] as usize]).collect();
        self.index[&key]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a b a^-1 b^-1`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ai_bi = self.mul(self.inv(a), self.inv(b));
        self.mul(ab, ai_bi)
    }

    /// `g x g^-1`
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        let ea = self.elements[a].images();
        let eb = self.elements[b].images();
        (0..self.degree).all(|i| ea[eb[i] as usize] == eb[ea[i] as usize])
    }

    pub fn pow(&self, a: usize, exp: i64) -> usize {
        let ord = self.orders[a] as i64;
        let e = exp.rem_euclid(ord);
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn element_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| acc.lcm(&o))
    }

    /// Histogram of element orders, an isomorphism invariant.
    pub fn order_statistics(&self) -> Vec<(u64, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for &o in &self.orders {
            *m.entry(o).or_insert(0usize) += 1;
        }
        m.into_iter().collect()
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for start in 0..n {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = vec![start];
                class_of[start] = id;
                let mut queue = VecDeque::from([start]);
                while let Some(x) = queue.pop_front() {
                    for &g in &self.gen_index {
                        let y = self.conj(g, x);
                        if class_of[y] == usize::MAX {
                            class_of[y] = id;
                            members.push(y);
                            queue.push_back(y);
                        }
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            ConjugacyClasses { classes, class_of }
        })
    }

    pub fn class_size(&self, a: usize) -> usize {
        let cc = self.conjugacy_classes();
        cc.classes[cc.class_of[a]].len()
    }

    /// Builds the left-regular permutation representation of an abstract
    /// group given by a multiplication rule on `0..n` (identity `0`).
    pub fn from_multiplication<F>(n: usize, gens: &[usize], mul: F) -> Result<Group, GroupError>
    where
        F: Fn(usize, usize) -> usize,
    {
        let perms = gens
            .iter()
            .map(|&g| Perm::from_images((0..n).map(|x| mul(g, x) as u32).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Group::from_generators(n, perms)
    }
}

/// Greedy base: add moved points until only the identity fixes all of them.
fn choose_base(degree: usize, elements: &[Perm]) -> Vec<usize> {
    let mut base = Vec::new();
    let mut stab: Vec<usize> = (1..elements.len()).collect();
    while let Some(&e) = stab.first() {
        let pt = (0..degree)
            .find(|&i| elements[e].apply(i) != i)
            .expect("non-identity moves a point");
        base.push(pt);
        stab.retain(|&x| elements[x].apply(pt) == pt);
    }
    if base.is_empty() && degree > 0 {
        base.push(0);
    }
    base
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, k)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn p_part(n: u64, p: u64) -> u64 {
    let mut n = n;
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> Group {
        Group::from_generators(
            3,
            vec![
                Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn s3_has_order_six() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn trivial_group() {
        let g = Group::from_generators(1, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let gens = vec![
            Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            Perm::from_cycles(5, &[&[0, 1]]).unwrap(),
        ];
        let err = Group::from_generators_with_cap(5, gens, 100).unwrap_err();
        assert_eq!(err, GroupError::OrderCapExceeded { cap: 100 });
    }

    #[test]
    fn closure_and_mul_agree_with_perm_product() {
        let g = s3();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let p = g.element(a).compose(g.element(b));
                assert_eq!(g.index_of(&p), Some(g.mul(a, b)));
            }
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn cyclic_four_element_order() {
        let c4 = Group::from_generators(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()])
            .unwrap();
        let gen = c4.generator_indices()[0];
        assert_eq!(c4.element_order(gen), 4);
        assert_eq!(c4.element_order(0), 1);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(p_part(360, 3), 9);
        assert!(is_prime(73) && !is_prime(91));
    }
}
