use std::collections::{HashSet, VecDeque};

use super::{Group, GroupError, Perm};

/// A subgroup of a parent [`Group`], stored as sorted element indices of the parent.
///
/// Equality compares element sets only, so two subgroups with different
/// generating sets but the same elements are equal.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Subgroup {
    pub(crate) fn from_parts(mut elements: Vec<usize>, generators: Vec<usize>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        Subgroup {
            elements,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn generator_perms(&self, parent: &Group) -> Vec<Perm> {
        self.generators
            .iter()
            .map(|&i| parent.element(i).clone())
            .collect()
    }

    pub fn intersection(&self, other: &Subgroup) -> Vec<usize> {
        self.elements
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect()
    }

    /// Membership mask over the parent's elements.
    pub fn mask(&self, parent_order: usize) -> Vec<bool> {
        let mut m = vec![false; parent_order];
        for &x in &self.elements {
            m[x] = true;
        }
        m
    }

    /// Materializes the subgroup as a standalone group on the parent's points.
    /// The returned vector maps element indices of the new group to the parent.
    pub fn to_group(&self, parent: &Group) -> (Group, Vec<usize>) {
        let gens = self.generator_perms(parent);
        let sub = Group::from_generators_with_cap(parent.degree(), gens, self.order().max(1))
            .expect("subgroup closure fits its own order");
        let map = sub
            .elements()
            .iter()
            .map(|p| parent.index_of(p).expect("subgroup element in parent"))
            .collect();
        (sub, map)
    }
}

impl Group {
    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
            generators: self.gen_index.clone(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![0],
            generators: Vec::new(),
        }
    }

    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        self.closure_bounded(gens, self.order(), None)
            .expect("unbounded closure")
    }

    /// Closure of `gens`, abandoned (returning `None`) as soon as it grows past
    /// `limit` elements or touches an element flagged in `forbidden`.
    pub fn closure_bounded(
        &self,
        gens: &[usize],
        limit: usize,
        forbidden: Option<&[bool]>,
    ) -> Option<Subgroup> {
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut seen: HashSet<usize> = HashSet::from([0]);
        let mut elems = vec![0];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head];
            head += 1;
            for &g in &gens {
                let y = self.mul(g, x);
                if seen.insert(y) {
                    if elems.len() >= limit || forbidden.is_some_and(|f| f[y]) {
                        return None;
                    }
                    elems.push(y);
                }
            }
        }
        Some(Subgroup::from_parts(elems, gens))
    }

    pub fn subgroup_generated(&self, elems: &[Perm]) -> Result<Subgroup, GroupError> {
        let idx = elems
            .iter()
            .map(|p| self.index_of(p).ok_or(GroupError::ElementNotInGroup))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.closure(&idx))
    }

    /// Smallest normal subgroup containing `gens`: the set reachable from the
    /// identity by left multiplication with `gens` and conjugation by the group
    /// generators is already closed.
    pub fn normal_closure(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut elems = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let nexts = gens
                .iter()
                .map(|&h| self.mul(h, x))
                .chain(self.gen_index.iter().map(|&g| self.conj(g, x)));
            for y in nexts.collect::<Vec<_>>() {
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        let mut generators: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        generators.dedup();
        // keep a generating set that works inside the subgroup itself
        let sub = Subgroup::from_parts(elems, Vec::new());
        let generators = self.reduce_generators(&sub, generators);
        Subgroup { generators, ..sub }
    }

    /// Extends `start` greedily until it generates `sub`.
    fn reduce_generators(&self, sub: &Subgroup, start: Vec<usize>) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut cur = self.trivial_subgroup();
        let mut rest = sub.elements().to_vec();
        rest.sort_by_key(|&x| std::cmp::Reverse(self.element_order(x)));
        let candidates = start.into_iter().chain(rest);
        for c in candidates {
            if cur.order() == sub.order() {
                break;
            }
            if !cur.contains(c) {
                gens.push(c);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_normal(&self, sub: &Subgroup) -> bool {
        let hs = if sub.generators().is_empty() {
            sub.elements()
        } else {
            sub.generators()
        };
        self.gen_index
            .iter()
            .all(|&g| hs.iter().all(|&h| sub.contains(self.conj(g, h))))
    }

    pub fn is_subgroup_set(&self, set: &[usize]) -> bool {
        let mut s: Vec<usize> = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.first() != Some(&0) {
            return false;
        }
        s.iter()
            .all(|&a| s.iter().all(|&b| s.binary_search(&self.mul(a, b)).is_ok()))
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(&self, set: &[usize]) -> Subgroup {
        let elems: Vec<usize> = (0..self.order())
            .filter(|&x| set.iter().all(|&s| self.commute(x, s)))
            .collect();
        let sub = Subgroup::from_parts(elems, Vec::new());
        let generators = self.reduce_generators(&sub, Vec::new());
        Subgroup { generators, ..sub }
    }

    pub fn normalizer(&self, sub: &Subgroup) -> Subgroup {
        let elems: Vec<usize> = (0..self.order())
            .filter(|&x| {
                sub.generators()
                    .iter()
                    .all(|&h| sub.contains(self.conj(x, h)))
            })
            .collect();
        let s = Subgroup::from_parts(elems, Vec::new());
        let generators = self.reduce_generators(&s, sub.generators().to_vec());
        Subgroup { generators, ..s }
    }

    /// Subgroup generated by an arbitrary element set, keeping a short generating list.
    pub fn subgroup_from_set(&self, set: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = Vec::new();
        let mut cur = self.trivial_subgroup();
        let mut sorted: Vec<usize> = set.to_vec();
        sorted.sort_by_key(|&x| std::cmp::Reverse(self.element_order(x)));
        for x in sorted {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        cur
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut gens = a.generators().to_vec();
        gens.extend_from_slice(b.generators());
        let all = self.closure(&gens);
        let generators = self.reduce_generators(&all, gens);
        Subgroup { generators, ..all }
    }

    pub fn conjugate_subgroup(&self, g: usize, sub: &Subgroup) -> Subgroup {
        let elems = sub.elements().iter().map(|&x| self.conj(g, x)).collect();
        let gens = sub.generators().iter().map(|&x| self.conj(g, x)).collect();
        Subgroup::from_parts(elems, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::s3;
    use super::*;

    #[test]
    fn generated_subgroups_of_s3() {
        let g = s3();
        let id = Perm::identity(3);
        assert!(g.subgroup_generated(&[id]).unwrap().is_trivial());
        let c3 = g
            .subgroup_generated(&[Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()])
            .unwrap();
        assert_eq!(c3.order(), 3);
        assert!(g.is_normal(&c3));
        let t = g
            .subgroup_generated(&[Perm::from_cycles(3, &[&[0, 1]]).unwrap()])
            .unwrap();
        assert!(!g.is_normal(&t));
    }

    #[test]
    fn foreign_element_is_rejected() {
        let g = s3();
        let p = Perm::from_cycles(4, &[&[0, 3]]).unwrap();
        assert_eq!(
            g.subgroup_generated(&[p]).unwrap_err(),
            GroupError::ElementNotInGroup
        );
    }

    #[test]
    fn equality_ignores_generators() {
        let g = s3();
        let r = g.index_of(&Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()).unwrap();
        assert_eq!(g.closure(&[r]), g.closure(&[g.inv(r)]));
    }

    #[test]
    fn normal_closure_of_transposition_is_everything() {
        let g = s3();
        let t = g.index_of(&Perm::from_cycles(3, &[&[0, 1]]).unwrap()).unwrap();
        let n = g.normal_closure(&[t]);
        assert_eq!(n.order(), 6);
        assert_eq!(g.closure(n.generators()).order(), 6);
    }

    #[test]
    fn bounded_closure_stops() {
        let g = s3();
        assert!(g.closure_bounded(g.generator_indices(), 3, None).is_none());
        assert_eq!(
            g.closure_bounded(g.generator_indices(), 6, None)
                .unwrap()
                .order(),
            6
        );
    }
}
