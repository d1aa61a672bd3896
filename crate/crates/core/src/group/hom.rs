use std::collections::{BTreeMap, VecDeque};

use super::{Group, GroupError};

/// A verified isomorphism, as a map between element indices.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub map: Vec<usize>,
}

impl Group {
    /// Extends generator images to a homomorphism defined on every element,
    /// failing if some relation of the group is not respected.
    pub fn extend_to_homomorphism<T, F>(
        &self,
        gen_images: &[T],
        identity: T,
        mul: F,
    ) -> Result<Vec<T>, GroupError>
    where
        T: Clone + PartialEq,
        F: Fn(&T, &T) -> T,
    {
        assert_eq!(gen_images.len(), self.gen_index.len());
        let mut image: Vec<Option<T>> = vec![None; self.order()];
        image[0] = Some(identity);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let fx = image[x].clone().expect("visited");
            for (i, &g) in self.gen_index.iter().enumerate() {
                let y = self.mul(g, x);
                let fy = mul(&gen_images[i], &fx);
                match &image[y] {
                    Some(existing) => {
                        if *existing != fy {
                            return Err(GroupError::RelationViolation(format!(
                                "generator {i} applied to element {x} is inconsistent"
                            )));
                        }
                    }
                    None => {
                        image[y] = Some(fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(image.into_iter().map(|v| v.expect("all reached")).collect())
    }

    /// Homomorphism into `target` determined by images of this group's generators.
    pub fn hom_to(&self, target: &Group, gen_images: &[usize]) -> Result<Vec<usize>, GroupError> {
        self.extend_to_homomorphism(gen_images, 0, |&a, &b| target.mul(a, b))
    }

    /// Per element, the pair (element order, class size).
    fn fingerprints(&self) -> Vec<(u64, usize)> {
        (0..self.order())
            .map(|x| (self.element_order(x), self.class_size(x)))
            .collect()
    }

    fn fingerprint_histogram(&self) -> BTreeMap<(u64, usize), usize> {
        let mut m = BTreeMap::new();
        for f in self.fingerprints() {
            *m.entry(f).or_insert(0) += 1;
        }
        m
    }

    /// A short generating set, chosen greedily by descending element order.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (1..self.order()).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut cur = self.trivial_subgroup();
        for x in by_order {
            if cur.order() == self.order() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    /// Backtracking search for an isomorphism `self -> other`.
    ///
    /// Generators of `self` are sent to elements with matching order and
    /// class size; the first image ranges over class representatives only.
    pub fn is_isomorphic(&self, other: &Group) -> Option<Isomorphism> {
        if self.order() != other.order()
            || self.order_statistics() != other.order_statistics()
            || self.is_abelian() != other.is_abelian()
            || self.fingerprint_histogram() != other.fingerprint_histogram()
        {
            return None;
        }
        if self.order() == 1 {
            return Some(Isomorphism { map: vec![0] });
        }
        let gens = self.small_generating_set();
        let fp_self = self.fingerprints();
        let fp_other = other.fingerprints();
        let reps: Vec<usize> = other
            .conjugacy_classes()
            .classes
            .iter()
            .map(|c| c[0])
            .collect();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let pool: Vec<usize> = if i == 0 {
                    reps.clone()
                } else {
                    (0..other.order()).collect()
                };
                pool.into_iter().filter(|&y| fp_other[y] == fp_self[g]).collect()
            })
            .collect();
        let mut chosen = Vec::with_capacity(gens.len());
        self.iso_search(other, &gens, &candidates, &mut chosen)
            .map(|map| Isomorphism { map })
    }

    fn iso_search(
        &self,
        other: &Group,
        gens: &[usize],
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        let k = chosen.len();
        if k == gens.len() {
            return self.partial_map(other, gens, chosen, true);
        }
        for &y in &candidates[k] {
            chosen.push(y);
            let ok = k + 1 == gens.len() || self.partial_map(other, &gens[..=k], chosen, false).is_some();
            if ok {
                if let Some(m) = self.iso_search(other, gens, candidates, chosen) {
                    return Some(m);
                }
            }
            chosen.pop();
        }
        None
    }

    /// Injective homomorphism from `<gens>` into `other` with the given images, if consistent.
    /// With `full`, the result is a map on all of `self`.
    fn partial_map(
        &self,
        other: &Group,
        gens: &[usize],
        images: &[usize],
        full: bool,
    ) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; other.order()];
        map[0] = 0;
        used[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for (i, &g) in gens.iter().enumerate() {
                let y = self.mul(g, x);
                let fy = other.mul(images[i], map[x]);
                if map[y] == usize::MAX {
                    if used[fy] {
                        return None;
                    }
                    used[fy] = true;
                    map[y] = fy;
                    count += 1;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        if full && count != n {
            return None;
        }
        Some(map)
    }

    /// Checks that `map` is a bijective homomorphism onto `other`.
    pub fn verify_isomorphism(&self, other: &Group, map: &[usize]) -> bool {
        if map.len() != self.order() || self.order() != other.order() {
            return false;
        }
        let mut seen = vec![false; other.order()];
        for &y in map {
            if y >= other.order() || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        (0..self.order()).all(|a| {
            self.gen_index
                .iter()
                .all(|&g| map[self.mul(g, a)] == other.mul(map[g], map[a]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::s3;
    use super::super::Perm;
    use super::*;

    fn cyclic(n: usize) -> Group {
        let cyc: Vec<usize> = (0..n).collect();
        Group::from_generators(n, vec![Perm::from_cycles(n, &[&cyc]).unwrap()]).unwrap()
    }

    #[test]
    fn c4_not_klein() {
        let klein = Group::from_generators(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(cyclic(4).is_isomorphic(&klein).is_none());
    }

    #[test]
    fn s3_and_dihedral_six() {
        // symmetries of a triangle acting on its 3 edges, presented differently
        let d3 = Group::from_generators(
            6,
            vec![
                Perm::from_cycles(6, &[&[0, 2, 4], &[1, 3, 5]]).unwrap(),
                Perm::from_cycles(6, &[&[0, 1], &[2, 5], &[3, 4]]).unwrap(),
            ],
        )
        .unwrap();
        let g = s3();
        let iso = g.is_isomorphic(&d3).expect("isomorphic");
        assert!(g.verify_isomorphism(&d3, &iso.map));
        let back = d3.is_isomorphic(&g).expect("symmetric");
        assert!(d3.verify_isomorphism(&g, &back.map));
    }

    #[test]
    fn homomorphism_extension_detects_relations() {
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let gen2 = c2.generator_indices()[0];
        assert!(c4.hom_to(&c2, &[gen2]).is_ok());
        let c3 = cyclic(3);
        let gen3 = c3.generator_indices()[0];
        assert!(matches!(
            c4.hom_to(&c3, &[gen3]),
            Err(GroupError::RelationViolation(_))
        ));
    }
}
