use std::collections::HashSet;

use serde::Serialize;

use super::{factorize, is_prime, p_part, Group, GroupError, Perm, Subgroup};

#[derive(Clone, Debug)]
pub struct StructuralPredicates {
    pub is_abelian: bool,
    pub is_cyclic: bool,
    pub is_nilpotent: bool,
    pub is_solvable: bool,
    pub is_perfect: bool,
    pub center: Subgroup,
    pub derived_subgroup: Subgroup,
}

/// Summary flags without the subgroups, convenient for reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PredicateFlags {
    pub is_abelian: bool,
    pub is_cyclic: bool,
    pub is_nilpotent: bool,
    pub is_solvable: bool,
    pub is_perfect: bool,
    pub center_order: usize,
    pub derived_order: usize,
}

impl StructuralPredicates {
    pub fn flags(&self) -> PredicateFlags {
        PredicateFlags {
            is_abelian: self.is_abelian,
            is_cyclic: self.is_cyclic,
            is_nilpotent: self.is_nilpotent,
            is_solvable: self.is_solvable,
            is_perfect: self.is_perfect,
            center_order: self.center.order(),
            derived_order: self.derived_subgroup.order(),
        }
    }
}

/// `G/N` acting on the cosets of `N`, with the projection `G -> G/N` by element index.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Group,
    pub projection: Vec<usize>,
}

impl Group {
    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_index;
        g.iter()
            .enumerate()
            .all(|(i, &a)| g[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order() as u64;
        self.orders.contains(&n)
    }

    pub fn is_p_group(&self) -> Option<u64> {
        let f = factorize(self.order() as u64);
        match f.as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.gen_index.clone())
    }

    /// Normal closure of the commutators of generator pairs.
    pub fn derived_subgroup(&self) -> Subgroup {
        let g = &self.gen_index;
        let mut comms = Vec::new();
        for (i, &a) in g.iter().enumerate() {
            for &b in &g[i + 1..] {
                let c = self.commutator(a, b);
                if c != 0 && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Orders of the derived series, ending at the first repeated term.
    pub fn derived_series_orders(&self) -> Vec<usize> {
        let mut out = vec![self.order()];
        let mut cur = self.clone();
        loop {
            let d = cur.derived_subgroup();
            if d.order() == cur.order() {
                return out;
            }
            out.push(d.order());
            if d.order() == 1 {
                return out;
            }
            cur = d.to_group(&cur).0;
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series_orders().last() == Some(&1)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    pub fn is_nilpotent(&self) -> bool {
        factorize(self.order() as u64).iter().all(|&(p, _)| {
            let s = self.sylow(p).expect("p is prime");
            self.is_normal(&s)
        })
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        StructuralPredicates {
            is_abelian: self.is_abelian(),
            is_cyclic: self.is_cyclic(),
            is_nilpotent: self.is_nilpotent(),
            is_solvable: self.is_solvable(),
            is_perfect: self.is_perfect(),
            center: self.center(),
            derived_subgroup: self.derived_subgroup(),
        }
    }

    /// A non-cyclic 2-group with a unique involution.
    pub fn is_generalized_quaternion(&self) -> bool {
        self.order() >= 8
            && self.is_p_group() == Some(2)
            && !self.is_cyclic()
            && self.orders.iter().filter(|&&o| o == 2).count() == 1
    }

    /// A Sylow `p`-subgroup grown greedily from a p-element of maximal order.
    pub fn sylow(&self, p: u64) -> Result<Subgroup, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let target = p_part(self.order() as u64, p) as usize;
        if target == 1 {
            return Ok(self.trivial_subgroup());
        }
        let is_p_power = |n: usize| p_part(n as u64, p) as usize == n;
        let mut p_elems: Vec<usize> = (1..self.order())
            .filter(|&x| is_p_power(self.orders[x] as usize))
            .collect();
        p_elems.sort_by_key(|&x| std::cmp::Reverse(self.orders[x]));
        let mut gens = vec![p_elems[0]];
        let mut h = self.closure(&gens);
        while h.order() < target {
            let mut grown = false;
            for &y in &p_elems {
                if h.contains(y) {
                    continue;
                }
                let mut cand = gens.clone();
                cand.push(y);
                if let Some(k) = self.closure_bounded(&cand, target, None) {
                    if is_p_power(k.order()) {
                        gens = cand;
                        h = k;
                        grown = true;
                        break;
                    }
                }
            }
            assert!(grown, "a proper p-subgroup has a p-element normalizing it");
        }
        Ok(h)
    }

    /// All normal subgroups: normal closures of single classes, closed under joins.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let classes = self.conjugacy_classes();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out: Vec<Subgroup> = Vec::new();
        let mut push = |s: Subgroup, out: &mut Vec<Subgroup>| {
            if seen.insert(s.elements().to_vec()) {
                out.push(s);
                true
            } else {
                false
            }
        };
        push(self.trivial_subgroup(), &mut out);
        for c in &classes.classes {
            push(self.normal_closure(&c[..1]), &mut out);
        }
        let mut i = 0;
        while i < out.len() {
            for j in 0..i {
                if out[i].is_subgroup_of(&out[j]) || out[j].is_subgroup_of(&out[i]) {
                    continue;
                }
                let joined = self.join(&out[i], &out[j]);
                push(joined, &mut out);
            }
            i += 1;
        }
        out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements().cmp(b.elements())));
        out
    }

    /// Left cosets `xN`, as a coset id per element and one representative per coset.
    pub fn cosets(&self, n: &Subgroup) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &m in n.elements() {
                coset_of[self.mul(x, m)] = id;
            }
        }
        (coset_of, reps)
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient, GroupError> {
        if !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        let (coset_of, reps) = self.cosets(n);
        let k = reps.len();
        let action = |x: usize| -> Perm {
            Perm::from_raw(reps.iter().map(|&r| coset_of[self.mul(x, r)] as u32).collect())
        };
        let gens = self.gen_index.iter().map(|&g| action(g)).collect();
        let q = Group::from_generators(k, gens)?;
        let rep_image: Vec<usize> = reps
            .iter()
            .map(|&r| q.index_of(&action(r)).expect("coset action lies in quotient"))
            .collect();
        let projection = coset_of.iter().map(|&c| rep_image[c]).collect();
        Ok(Quotient {
            group: q,
            projection,
        })
    }

    /// The largest normal subgroup of odd order (normal odd subgroups are closed under joins).
    pub fn largest_odd_normal(&self) -> Subgroup {
        let mut best = self.trivial_subgroup();
        for n in self.normal_subgroups() {
            if n.order() % 2 == 1 && n.order() > best.order() {
                best = n;
            }
        }
        best
    }
}
