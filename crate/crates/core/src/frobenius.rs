//! Frobenius kernels and complements.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::group::{factorize, Group, GroupError, Subgroup};

#[derive(Debug, Error)]
pub enum FrobeniusError {
    #[error("not a complement: {0}")]
    NotAComplement(String),
    #[error("not a Frobenius complement in G: {0}")]
    NotAFrobeniusComplementInG(String),
    #[error("structure theorem violated: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A Frobenius kernel `N` with a complement `G0` acting fixed-point-freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusStructure {
    pub kernel: Subgroup,
    pub complement: Subgroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremChecks {
    pub coprime_orders: bool,
    pub even_complement_implies_abelian_kernel: bool,
    pub kernel_nilpotent: bool,
    pub complement_sylow_shapes: bool,
    pub kernel_abelian: bool,
}

impl TheoremChecks {
    pub fn all_hold(&self) -> bool {
        self.coprime_orders
            && self.even_complement_implies_abelian_kernel
            && self.kernel_nilpotent
            && self.complement_sylow_shapes
    }
}

fn check_complement(g: &Group, n: &Subgroup, g0: &Subgroup) -> Result<(), FrobeniusError> {
    if !g.is_normal(n) {
        return Err(FrobeniusError::NotAComplement("N is not normal".into()));
    }
    if n.order() * g0.order() != g.order() {
        return Err(FrobeniusError::NotAComplement("|N|·|G0| != |G|".into()));
    }
    if n.intersection(g0).len() != 1 {
        return Err(FrobeniusError::NotAComplement("N ∩ G0 is not trivial".into()));
    }
    Ok(())
}

fn fixes_nothing(g: &Group, n: &Subgroup, h: usize) -> bool {
    n.elements().iter().skip(1).all(|&x| g.conj(h, x) != x)
}

/// Exhaustive check that `g x g⁻¹ ≠ x` for all `x ∈ N∖1`, `g ∈ G0∖1`.
pub fn is_fixed_point_free(g: &Group, n: &Subgroup, g0: &Subgroup) -> Result<bool, FrobeniusError> {
    check_complement(g, n, g0)?;
    Ok(g0.elements().iter().skip(1).all(|&h| fixes_nothing(g, n, h)))
}

/// Every Frobenius structure of `g`, one complement per conjugacy class.
pub fn find_frobenius_structures(g: &Group) -> Result<Vec<FrobeniusStructure>, FrobeniusError> {
    let mut out = Vec::new();
    if g.order() < 6 {
        return Ok(out);
    }
    for n in g.normal_subgroups() {
        if n.is_trivial() || n.order() == g.order() {
            continue;
        }
        let h = g.order() / n.order();
        // elements outside N acting fixed-point-freely on N
        let fpf: Vec<bool> = (0..g.order())
            .map(|x| x == 0 || (!n.contains(x) && fixes_nothing(g, &n, x)))
            .collect();
        let forbidden: Vec<bool> = fpf.iter().map(|&ok| !ok).collect();
        let q = g.quotient(&n)?;
        let qgens = q.group.small_generating_set();
        let lifts: Vec<Vec<usize>> = qgens
            .iter()
            .map(|&y| (0..g.order()).filter(|&x| q.projection[x] == y && fpf[x]).collect())
            .collect();
        if lifts.iter().any(Vec::is_empty) {
            continue;
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut choice = vec![0usize; lifts.len()];
        'outer: loop {
            let gens: Vec<usize> = choice.iter().zip(&lifts).map(|(&i, l)| l[i]).collect();
            if let Some(k) = g.closure_bounded(&gens, h, Some(&forbidden)) {
                if k.order() == h && !seen.contains(k.elements()) {
                    for x in 0..g.order() {
                        seen.insert(g.conjugate_subgroup(x, &k).elements().to_vec());
                    }
                    out.push(FrobeniusStructure {
                        kernel: n.clone(),
                        complement: k,
                    });
                }
            }
            for i in (0..choice.len()).rev() {
                choice[i] += 1;
                if choice[i] < lifts[i].len() {
                    continue 'outer;
                }
                choice[i] = 0;
            }
            break;
        }
    }
    Ok(out)
}

pub fn is_frobenius(g: &Group) -> Result<bool, FrobeniusError> {
    Ok(!find_frobenius_structures(g)?.is_empty())
}

/// `{1} ∪ (G ∖ ⋃ x(G0∖1)x⁻¹)`, required to be a subgroup of order `|G|/|G0|`.
pub fn kernel_by_partition(g: &Group, g0: &Subgroup) -> Result<Subgroup, FrobeniusError> {
    if g0.is_trivial() || g0.order() == g.order() {
        return Err(FrobeniusError::NotAFrobeniusComplementInG(
            "complement must be proper and nontrivial".into(),
        ));
    }
    let mut covered = vec![false; g.order()];
    for x in 0..g.order() {
        for &h in g0.elements().iter().skip(1) {
            covered[g.conj(x, h)] = true;
        }
    }
    let k: Vec<usize> = (0..g.order()).filter(|&x| x == 0 || !covered[x]).collect();
    if k.len() * g0.order() != g.order() {
        return Err(FrobeniusError::NotAFrobeniusComplementInG(format!(
            "{} elements remain, expected {}",
            k.len(),
            g.order() / g0.order()
        )));
    }
    if !g.is_subgroup_set(&k) {
        return Err(FrobeniusError::NotAFrobeniusComplementInG(
            "remaining elements are not closed".into(),
        ));
    }
    Ok(g.subgroup_from_set(&k))
}

/// Sylow subgroups of odd order cyclic, Sylow 2-subgroups cyclic or generalized quaternion.
pub fn sylows_cyclic_or_quaternion(g: &Group) -> Result<bool, GroupError> {
    for (p, _) in factorize(g.order() as u64) {
        let (s, _) = g.sylow(p)?.to_group(g);
        if !(s.is_cyclic() || (p == 2 && s.is_generalized_quaternion())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Necessary conditions every Frobenius structure satisfies; a failure is an internal error.
pub fn verify_structure_theorems(
    g: &Group,
    s: &FrobeniusStructure,
) -> Result<TheoremChecks, FrobeniusError> {
    let (kn, hn) = (s.kernel.order(), s.complement.order());
    let (kernel, _) = s.kernel.to_group(g);
    let (complement, _) = s.complement.to_group(g);
    let kernel_abelian = kernel.is_abelian();
    let checks = TheoremChecks {
        coprime_orders: num_integer::gcd(kn, hn) == 1,
        even_complement_implies_abelian_kernel: hn % 2 == 1 || kernel_abelian,
        kernel_nilpotent: kernel.is_nilpotent(),
        complement_sylow_shapes: sylows_cyclic_or_quaternion(&complement)?,
        kernel_abelian,
    };
    if !checks.all_hold() {
        return Err(FrobeniusError::TheoremViolation(format!("{checks:?}")));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{abelian, metacyclic, quaternion_generalized, sl2, symmetric};

    #[test]
    fn s3_structure() {
        let g = symmetric(3).unwrap();
        let s = find_frobenius_structures(&g).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].kernel.order(), 3);
        assert_eq!(s[0].complement.order(), 2);
        assert!(is_fixed_point_free(&g, &s[0].kernel, &s[0].complement).unwrap());
        let k = kernel_by_partition(&g, &s[0].complement).unwrap();
        assert_eq!(k, s[0].kernel);
        let t = verify_structure_theorems(&g, &s[0]).unwrap();
        assert!(t.kernel_abelian);
    }

    #[test]
    fn klein_four_is_not_frobenius() {
        let g = abelian(&[2, 2]);
        let n = g.closure(&g.generator_indices()[..1]);
        let h = g.closure(&g.generator_indices()[1..]);
        assert!(!is_fixed_point_free(&g, &n, &h).unwrap());
        assert!(find_frobenius_structures(&g).unwrap().is_empty());
    }

    #[test]
    fn sl2_f3_q8_c3_not_fpf() {
        let g = sl2(3).unwrap();
        let q8 = g.sylow(2).unwrap();
        let c3 = g.sylow(3).unwrap();
        assert!(!is_fixed_point_free(&g, &q8, &c3).unwrap());
        assert!(find_frobenius_structures(&g).unwrap().is_empty());
    }

    #[test]
    fn metacyclic_frobenius() {
        let g = metacyclic(7, 3, 2).unwrap();
        let s = find_frobenius_structures(&g).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].kernel.order(), s[0].complement.order()), (7, 3));
        let g = metacyclic(17, 8, 2).unwrap();
        let tau = g.sylow(2).unwrap();
        assert_eq!(kernel_by_partition(&g, &tau).unwrap().order(), 17);
    }

    #[test]
    fn q8_and_s4() {
        assert!(find_frobenius_structures(&quaternion_generalized(8).unwrap()).unwrap().is_empty());
        let s4 = symmetric(4).unwrap();
        let p3 = s4.sylow(3).unwrap();
        assert!(matches!(
            kernel_by_partition(&s4, &p3),
            Err(FrobeniusError::NotAFrobeniusComplementInG(_))
        ));
        assert!(find_frobenius_structures(&s4).unwrap().is_empty());
    }

    #[test]
    fn non_complement_rejected() {
        let g = symmetric(3).unwrap();
        let n = g.whole();
        let h = g.trivial_subgroup();
        assert!(is_fixed_point_free(&g, &h, &n).is_ok());
        let a3 = g.derived_subgroup();
        assert!(matches!(
            is_fixed_point_free(&g, &a3, &a3),
            Err(FrobeniusError::NotAComplement(_))
        ));
    }
}
