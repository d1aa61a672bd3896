use super::{Group, GroupError, Perm, Subgroup};

/// `N ⋊ H` together with the images of both factors.
#[derive(Debug, Clone)]
pub struct SemidirectProduct {
    pub group: Group,
    pub normal: Subgroup,
    pub complement: Subgroup,
    /// element index of `N` -> element index of the product
    pub normal_embedding: Vec<usize>,
    /// element index of `H` -> element index of the product
    pub complement_embedding: Vec<usize>,
}

impl Group {
    pub fn direct_product(&self, other: &Group) -> Result<Group, GroupError> {
        let total = self.degree + other.degree;
        let mut gens: Vec<Perm> = self.generators.iter().map(|g| g.embed(0, total)).collect();
        gens.extend(other.generators.iter().map(|g| g.embed(self.degree, total)));
        Group::from_generators(total, gens)
    }

    /// Automorphism of `self` given by images of its generators, as an element permutation.
    pub fn automorphism_from_images(&self, images: &[usize]) -> Result<Vec<usize>, GroupError> {
        let map = self
            .hom_to(self, images)
            .map_err(|e| GroupError::NotAnAutomorphism(e.to_string()))?;
        let mut seen = vec![false; self.order()];
        for &y in &map {
            if std::mem::replace(&mut seen[y], true) {
                return Err(GroupError::NotAnAutomorphism("map is not injective".into()));
            }
        }
        Ok(map)
    }

    /// `N ⋊ H` where `action[i]` lists the images (element indices of `n`)
    /// of `n`'s generators under the automorphism attached to `h`'s generator `i`.
    ///
    /// The result acts on `|N| + |H|` points: `(m, k)` sends `x` in the
    /// `N`-block to `m·α_k(x)` and `y` in the `H`-block to `k·y`.
    pub fn semidirect_product(
        n: &Group,
        h: &Group,
        action: &[Vec<usize>],
    ) -> Result<SemidirectProduct, GroupError> {
        if action.len() != h.generators.len() {
            return Err(GroupError::NotAnAutomorphism(format!(
                "{} action entries for {} generators",
                action.len(),
                h.generators.len()
            )));
        }
        let autos: Vec<Perm> = action
            .iter()
            .map(|imgs| {
                if imgs.len() != n.generators.len() {
                    return Err(GroupError::NotAnAutomorphism(
                        "wrong number of generator images".into(),
                    ));
                }
                let m = n.automorphism_from_images(imgs)?;
                Ok(Perm::from_raw(m.into_iter().map(|v| v as u32).collect()))
            })
            .collect::<Result<_, _>>()?;
        h.extend_to_homomorphism(&autos, Perm::identity(n.order()), |a, b| a.compose(b))?;

        let (nn, hn) = (n.order(), h.order());
        let total = nn + hn;
        let mut gens = Vec::new();
        for &g in &n.gen_index {
            let mut img: Vec<u32> = (0..total as u32).collect();
            for x in 0..nn {
                img[x] = n.mul(g, x) as u32;
            }
            gens.push(Perm::from_raw(img));
        }
        for (i, &k) in h.gen_index.iter().enumerate() {
            let mut img: Vec<u32> = Vec::with_capacity(total);
            img.extend_from_slice(autos[i].images());
            img.extend((0..hn).map(|y| (nn + h.mul(k, y)) as u32));
            gens.push(Perm::from_raw(img));
        }
        let group = Group::from_generators(total, gens)?;
        let ng = n.gen_index.len();
        let n_imgs: Vec<usize> = group.gen_index[..ng].to_vec();
        let h_imgs: Vec<usize> = group.gen_index[ng..].to_vec();
        let normal_embedding = n.hom_to(&group, &n_imgs)?;
        let complement_embedding = h.hom_to(&group, &h_imgs)?;
        let normal = Subgroup::from_parts(normal_embedding.clone(), n_imgs);
        let complement = Subgroup::from_parts(complement_embedding.clone(), h_imgs);
        Ok(SemidirectProduct {
            group,
            normal,
            complement,
            normal_embedding,
            complement_embedding,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Group {
        let cyc: Vec<usize> = (0..n).collect();
        Group::from_generators(n, vec![Perm::from_cycles(n, &[&cyc]).unwrap()]).unwrap()
    }

    #[test]
    fn inversion_gives_s3() {
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        let s = c3.generator_indices()[0];
        let sp = Group::semidirect_product(&c3, &c2, &[vec![c3.inv(s)]]).unwrap();
        assert_eq!(sp.group.order(), 6);
        assert!(!sp.group.is_abelian());
        assert!(sp.group.is_normal(&sp.normal));
        assert_eq!(sp.complement.order(), 2);
    }

    #[test]
    fn bad_action_rejected() {
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        // x -> x^0 is not an automorphism
        assert!(matches!(
            Group::semidirect_product(&c3, &c2, &[vec![0]]),
            Err(GroupError::NotAnAutomorphism(_))
        ));
        // x -> x^2 on C5 has order 4, which does not factor through C2
        let c5 = cyclic(5);
        let s = c5.generator_indices()[0];
        let sq = c5.mul(s, s);
        assert!(matches!(
            Group::semidirect_product(&c5, &c2, &[vec![sq]]),
            Err(GroupError::RelationViolation(_))
        ));
    }

    #[test]
    fn trivial_action_matches_direct_product() {
        let c2 = cyclic(2);
        let c3 = cyclic(3);
        let s = c3.generator_indices()[0];
        let sp = Group::semidirect_product(&c3, &c2, &[vec![s]]).unwrap();
        let dp = c3.direct_product(&c2).unwrap();
        assert!(sp.group.is_isomorphic(&dp).is_some());
        assert!(dp.is_cyclic());
    }
}
