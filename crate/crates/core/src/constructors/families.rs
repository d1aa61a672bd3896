use crate::group::Group;

use super::matrices::{sl2_matrix_group, theta_images};
use super::{nf_group, require_all, Check, ConstructError, Family, PresentationParams, Relations};

/// A group with named generators and the outcome of every defining relation.
#[derive(Debug, Clone)]
pub struct Presented {
    pub group: Group,
    pub params: PresentationParams,
    pub named: Vec<(String, usize)>,
    pub relations: Vec<Check>,
}

impl Presented {
    pub fn element(&self, name: &str) -> Option<usize> {
        self.named.iter().find(|(n, _)| n == name).map(|&(_, i)| i)
    }
}

/// `⟨K, t⟩` with `t x t⁻¹ = α(x)` and `t^d = w`.
#[derive(Debug, Clone)]
pub struct CyclicExtension {
    pub group: Group,
    /// element index of `K` -> element index of the extension
    pub embedding: Vec<usize>,
    pub t: usize,
}

/// Cyclic extension of `k` by an automorphism given on `k`'s generators.
/// The result's generators are `k`'s generators followed by `t`.
pub fn cyclic_extension(
    k: &Group,
    alpha_images: &[usize],
    d: u64,
    w: usize,
) -> Result<CyclicExtension, ConstructError> {
    if d < 2 {
        return Err(ConstructError::BadOrder(d));
    }
    let alpha = k.automorphism_from_images(alpha_images)?;
    if alpha[w] != w {
        return Err(ConstructError::RelationViolation("α(w) != w".into()));
    }
    let d = d as usize;
    let kn = k.order();
    let mut powers = vec![(0..kn).collect::<Vec<_>>()];
    for i in 1..=d {
        let prev: &Vec<usize> = &powers[i - 1];
        let next = prev.iter().map(|&x| alpha[x]).collect();
        powers.push(next);
    }
    for x in 0..kn {
        if powers[d][x] != k.conj(w, x) {
            return Err(ConstructError::RelationViolation("α^d is not conjugation by w".into()));
        }
    }
    powers.truncate(d);
    let n = kn * d;
    let mul = |u: usize, v: usize| {
        let (x, i) = (u % kn, u / kn);
        let (y, j) = (v % kn, v / kn);
        let mut z = k.mul(x, powers[i][y]);
        let mut e = i + j;
        if e >= d {
            z = k.mul(z, w);
            e -= d;
        }
        z + e * kn
    };
    let mut gens: Vec<usize> = k.generator_indices().to_vec();
    gens.push(kn);
    let (group, index) = nf_group(n, &gens, mul)?;
    Ok(CyclicExtension {
        embedding: index[..kn].to_vec(),
        t: index[kn],
        group,
    })
}

/// `⟨σ, τ | σ^m = τ^n = 1, τστ⁻¹ = σ^r⟩`, acting regularly on `Z/m × Z/n`.
pub fn metacyclic_presented(m: u64, n: u64, r: u64) -> Result<Presented, ConstructError> {
    let params = PresentationParams::metacyclic(m, n, r);
    params.validate()?;
    let (mu, nu) = (m as usize, n as usize);
    let rpow: Vec<usize> = (0..nu).map(|b| super::pow_mod(r, b as u64, m) as usize).collect();
    // σ^a τ^b  <->  a + m b
    let mul = |u: usize, v: usize| {
        let (a1, b1) = (u % mu, u / mu);
        let (a2, b2) = (v % mu, v / mu);
        (a1 + a2 * rpow[b1]) % mu + mu * ((b1 + b2) % nu)
    };
    let (group, index) = nf_group(mu * nu, &[1 % mu, mu % (mu * nu)], mul)?;
    let sigma = index[1 % mu];
    let tau = index[mu % (mu * nu)];
    let mut rel = Relations::new(&group);
    rel.eq("σ^m = 1", rel.pow(sigma, m as i64), 0);
    rel.eq("τ^n = 1", rel.pow(tau, n as i64), 0);
    rel.eq("τστ⁻¹ = σ^r", rel.conj(tau, sigma), rel.pow(sigma, r as i64));
    let relations = rel.checks;
    require_all(&relations)?;
    Ok(Presented {
        group,
        params,
        named: vec![("σ".into(), sigma), ("τ".into(), tau)],
        relations,
    })
}

pub fn metacyclic(m: u64, n: u64, r: u64) -> Result<Group, ConstructError> {
    Ok(metacyclic_presented(m, n, r)?.group)
}

/// Generalized quaternion group `⟨x, y | x^{2^{s-1}} = 1, y² = x^{2^{s-2}}, yxy⁻¹ = x⁻¹⟩`.
pub fn quaternion_generalized(order: u64) -> Result<Group, ConstructError> {
    if order < 8 || !order.is_power_of_two() || order > 1 << 14 {
        return Err(ConstructError::BadOrder(order));
    }
    let (g, _, _) = quaternion_nf(order as usize)?;
    Ok(g)
}

/// Returns the group with `x` and `y`.
fn quaternion_nf(order: usize) -> Result<(Group, usize, usize), ConstructError> {
    let h = order / 2;
    // x^a y^b  <->  a + h b
    let mul = |u: usize, v: usize| {
        let (a1, b1) = (u % h, u / h);
        let (a2, b2) = (v % h, v / h);
        if b1 == 0 {
            (a1 + a2) % h + h * b2
        } else if b2 == 0 {
            (a1 + h - a2) % h + h
        } else {
            (a1 + h - a2 + h / 2) % h
        }
    };
    let (g, index) = nf_group(order, &[1, h], mul)?;
    Ok((g, index[1], index[h]))
}

/// `C_m × Q8` with generators `σ, λ, ρ`.
fn cm_times_q8(m: usize) -> Result<(Group, [usize; 3]), ConstructError> {
    let (q8, x, y) = quaternion_nf(8)?;
    let mul = |u: usize, v: usize| {
        let (a1, q1) = (u % m, u / m);
        let (a2, q2) = (v % m, v / m);
        (a1 + a2) % m + m * q8.mul(q1, q2)
    };
    let gens = [1 % m, m * x, m * y];
    let (g, index) = nf_group(8 * m, &gens, mul)?;
    Ok((g, gens.map(|u| index[u])))
}

fn check_order(p: &Presented) -> Result<(), ConstructError> {
    let expect = p.params.order();
    if p.group.order() as u64 != expect {
        return Err(ConstructError::RelationViolation(format!(
            "order {} differs from the formula {expect}",
            p.group.order()
        )));
    }
    Ok(())
}

fn type_ii(params: &PresentationParams) -> Result<Presented, ConstructError> {
    let (m, n) = (params.m, params.n);
    let base = metacyclic_presented(m, n, params.r)?;
    let k = &base.group;
    let (sigma, tau) = (base.named[0].1, base.named[1].1);
    let images = [k.pow(sigma, params.l as i64), k.pow(tau, params.k as i64)];
    let gen_images: Vec<usize> = k
        .generator_indices()
        .iter()
        .enumerate()
        .map(|(i, _)| images[i])
        .collect();
    let w = k.pow(tau, (n / 2) as i64);
    let ext = cyclic_extension(k, &gen_images, 2, w)?;
    let g = &ext.group;
    let (s, t, l) = (ext.embedding[sigma], ext.embedding[tau], ext.t);
    let mut rel = Relations::new(g);
    rel.eq("σ^m = 1", rel.pow(s, m as i64), 0);
    rel.eq("τ^n = 1", rel.pow(t, n as i64), 0);
    rel.eq("τστ⁻¹ = σ^r", rel.conj(t, s), rel.pow(s, params.r as i64));
    rel.eq("λ² = τ^(n/2)", rel.pow(l, 2), rel.pow(t, (n / 2) as i64));
    rel.eq("λσλ⁻¹ = σ^l", rel.conj(l, s), rel.pow(s, params.l as i64));
    rel.eq("λτλ⁻¹ = τ^k", rel.conj(l, t), rel.pow(t, params.k as i64));
    let relations = rel.checks;
    require_all(&relations)?;
    Ok(Presented {
        group: ext.group,
        params: params.clone(),
        named: vec![("σ".into(), s), ("τ".into(), t), ("λ".into(), l)],
        relations,
    })
}

fn type_iii_relations(rel: &mut Relations, params: &PresentationParams, [s, t, l, p]: [usize; 4]) {
    rel.eq("σ^m = 1", rel.pow(s, params.m as i64), 0);
    rel.eq("τ^n = 1", rel.pow(t, params.n as i64), 0);
    rel.eq("λ⁴ = 1", rel.pow(l, 4), 0);
    rel.eq("λ² = ρ²", rel.pow(l, 2), rel.pow(p, 2));
    rel.eq("ρ² = (λρ)²", rel.pow(p, 2), rel.pow(rel.mul(l, p), 2));
    rel.eq("τστ⁻¹ = σ^r", rel.conj(t, s), rel.pow(s, params.r as i64));
    rel.eq("λσ = σλ", rel.mul(l, s), rel.mul(s, l));
    rel.eq("ρσ = σρ", rel.mul(p, s), rel.mul(s, p));
    rel.eq("τλτ⁻¹ = ρ", rel.conj(t, l), p);
    rel.eq("τρτ⁻¹ = λρ", rel.conj(t, p), rel.mul(l, p));
}

fn type_iii(params: &PresentationParams) -> Result<Presented, ConstructError> {
    let (k, [sigma, lambda, rho]) = cm_times_q8(params.m as usize)?;
    let images = [
        k.pow(sigma, params.r as i64),
        rho,
        k.mul(lambda, rho),
    ];
    let ext = cyclic_extension(&k, &images, params.n, 0)?;
    let e = &ext.embedding;
    let named = [e[sigma], ext.t, e[lambda], e[rho]];
    let mut rel = Relations::new(&ext.group);
    type_iii_relations(&mut rel, params, named);
    let relations = rel.checks;
    require_all(&relations)?;
    Ok(Presented {
        group: ext.group,
        params: params.clone(),
        named: ["σ", "τ", "λ", "ρ"]
            .iter()
            .zip(named)
            .map(|(n, i)| (n.to_string(), i))
            .collect(),
        relations,
    })
}

fn type_iv(params: &PresentationParams) -> Result<Presented, ConstructError> {
    let iii_params = PresentationParams {
        family: Family::III,
        ..params.clone()
    };
    let base = type_iii(&iii_params)?;
    let k = &base.group;
    let [s, t, l, p] = [0, 1, 2, 3].map(|i| base.named[i].1);
    // generators of the type III group are σ, λ, ρ, τ
    let images = [
        k.pow(s, params.t as i64),
        k.mul(p, l),
        k.inv(p),
        k.pow(t, params.k as i64),
    ];
    let w = k.pow(l, 2);
    let ext = cyclic_extension(k, &images, 2, w)?;
    let e = &ext.embedding;
    let named = [e[s], e[t], e[l], e[p], ext.t];
    let g = &ext.group;
    let mut rel = Relations::new(g);
    type_iii_relations(&mut rel, params, [named[0], named[1], named[2], named[3]]);
    let [s, t, l, p, v] = named;
    rel.eq("ν² = λ²", rel.pow(v, 2), rel.pow(l, 2));
    rel.eq("νλν⁻¹ = ρλ", rel.conj(v, l), rel.mul(p, l));
    rel.eq("νρν⁻¹ = ρ⁻¹", rel.conj(v, p), g.inv(p));
    rel.eq("νσν⁻¹ = σ^t", rel.conj(v, s), rel.pow(s, params.t as i64));
    rel.eq("ντν⁻¹ = τ^k", rel.conj(v, t), rel.pow(t, params.k as i64));
    let relations = rel.checks;
    require_all(&relations)?;
    Ok(Presented {
        group: ext.group,
        params: params.clone(),
        named: ["σ", "τ", "λ", "ρ", "ν"]
            .iter()
            .zip(named)
            .map(|(n, i)| (n.to_string(), i))
            .collect(),
        relations,
    })
}

/// Builds a solvable family (I–IV) group, verifying every defining relation and the order formula.
pub fn gz_type(params: &PresentationParams) -> Result<Presented, ConstructError> {
    params.validate()?;
    let p = match params.family {
        Family::I => metacyclic_presented(params.m, params.n, params.r)?,
        Family::II => type_ii(params)?,
        Family::III => type_iii(params)?,
        Family::IV => type_iv(params)?,
        Family::NsI => nonsolvable_type_i(params)?,
        Family::NsII => nonsolvable_type_ii(params)?,
    };
    check_order(&p)?;
    Ok(p)
}

/// `H × SL2(F_p)` with `H` the metacyclic group of the parameters.
pub fn nonsolvable_type_i(params: &PresentationParams) -> Result<Presented, ConstructError> {
    params.validate()?;
    let h = metacyclic_presented(params.m, params.n, params.r)?;
    let l = sl2_matrix_group(params.p)?;
    let group = h.group.direct_product(&l.group)?;
    let hg = h.group.generators().len();
    let named_h = h.group.hom_to(&group, &group.generator_indices()[..hg])?;
    let named = vec![
        ("σ".to_string(), named_h[h.named[0].1]),
        ("τ".to_string(), named_h[h.named[1].1]),
    ];
    let p = Presented {
        group,
        params: params.clone(),
        named,
        relations: h.relations,
    };
    check_order(&p)?;
    Ok(p)
}

/// `⟨σ, τ, λ, L⟩` with `L ≅ SL2(F_p)`, `λ² = ε` and `λ` acting on `L` through `θ`.
pub fn nonsolvable_type_ii(params: &PresentationParams) -> Result<Presented, ConstructError> {
    params.validate()?;
    let meta = metacyclic_presented(params.m, params.n, params.r)?;
    let lm = sl2_matrix_group(params.p)?;
    let (mg, lg) = (&meta.group, &lm.group);
    let (mn, ln) = (mg.order(), lg.order());
    let eps = lm
        .index_of_matrix(&lm.field.mat_scalar(2, lm.field.neg(1)))
        .expect("-I lies in SL2");
    // (x, y) <-> x + |M| y
    let mul = |u: usize, v: usize| {
        mg.mul(u % mn, v % mn) + mn * lg.mul(u / mn, v / mn)
    };
    let mut gens: Vec<usize> = mg.generator_indices().to_vec();
    gens.extend(lg.generator_indices().iter().map(|&y| mn * y));
    let (k, index) = nf_group(mn * ln, &gens, mul)?;
    let (sigma, tau) = (meta.named[0].1, meta.named[1].1);
    let gen_m = mg.generator_indices().len();
    let theta = theta_images(&lm)?;
    let mut images = vec![index[mg.inv(sigma)], index[tau]];
    images.truncate(gen_m);
    images.extend(theta.iter().map(|&y| index[mn * y]));
    let ext = cyclic_extension(&k, &images, 2, index[mn * eps])?;
    let g = &ext.group;
    let e = |u: usize| ext.embedding[index[u]];
    let (s, t, lam, ee) = (e(sigma), e(tau), ext.t, e(mn * eps));
    let mut rel = Relations::new(g);
    rel.eq("σ^m = 1", rel.pow(s, params.m as i64), 0);
    rel.eq("τ^n = 1", rel.pow(t, params.n as i64), 0);
    rel.eq("λ⁴ = 1", rel.pow(lam, 4), 0);
    rel.eq("τστ⁻¹ = σ^r", rel.conj(t, s), rel.pow(s, params.r as i64));
    rel.eq("λσλ⁻¹ = σ⁻¹", rel.conj(lam, s), g.inv(s));
    rel.eq("τλ = λτ", rel.mul(t, lam), rel.mul(lam, t));
    rel.eq("λ² = ε", rel.pow(lam, 2), ee);
    let mut all_commute = true;
    let mut all_theta = true;
    for y in 0..ln {
        let rho = e(mn * y);
        all_commute &= g.commute(s, rho) && g.commute(t, rho);
        let th = lm
            .index_of_matrix(&lm.field.mat_conj(&theta_matrix(&lm), &lm.matrix_of(y)))
            .expect("θ preserves SL2");
        all_theta &= rel.conj(lam, rho) == e(mn * th);
    }
    rel.checks.push(Check::new("σρ = ρσ, τρ = ρτ for ρ ∈ L", all_commute));
    rel.checks.push(Check::new("λρλ⁻¹ = θ(ρ) for ρ ∈ L", all_theta));
    let relations = rel.checks;
    require_all(&relations)?;
    let p = Presented {
        group: ext.group,
        params: params.clone(),
        named: vec![
            ("σ".into(), s),
            ("τ".into(), t),
            ("λ".into(), lam),
            ("ε".into(), ee),
        ],
        relations,
    };
    check_order(&p)?;
    Ok(p)
}

fn theta_matrix(lm: &super::MatrixGroup) -> super::FqMat {
    let f = &lm.field;
    let omega = f.generator() as i64;
    f.mat(&[&[0, -1], &[omega, 0]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metacyclic_examples() {
        let c5 = metacyclic(1, 5, 1).unwrap();
        assert!(c5.is_cyclic());
        assert_eq!(c5.order(), 5);
        let f21 = metacyclic(7, 3, 2).unwrap();
        assert_eq!(f21.order(), 21);
        assert!(!f21.is_abelian());
        let s3 = metacyclic(3, 2, 2).unwrap();
        assert!(s3.is_isomorphic(&super::super::symmetric(3).unwrap()).is_some());
        assert!(matches!(
            metacyclic(7, 3, 3),
            Err(ConstructError::ParameterCongruenceViolated(_))
        ));
    }

    #[test]
    fn quaternion_has_unique_involution() {
        for order in [8, 16, 32] {
            let q = quaternion_generalized(order).unwrap();
            assert_eq!(q.order() as u64, order);
            let invs = q.element_orders().iter().filter(|&&o| o == 2).count();
            assert_eq!(invs, 1);
            assert_eq!(q.center().order(), 2);
        }
        assert!(quaternion_generalized(12).is_err());
        assert!(quaternion_generalized(4).is_err());
    }

    #[test]
    fn type_ii_smallest_is_q8() {
        let p = PresentationParams::new(Family::II).with("n", 4).with("k", 3);
        let g = gz_type(&p).unwrap();
        assert_eq!(g.group.order(), 8);
        let q8 = quaternion_generalized(8).unwrap();
        assert!(g.group.is_isomorphic(&q8).is_some());
    }

    #[test]
    fn type_iii_is_sl2_f3() {
        let p = PresentationParams::new(Family::III).with("n", 3);
        let g = gz_type(&p).unwrap();
        assert_eq!(g.group.order(), 24);
        let sl = super::super::sl2(3).unwrap();
        assert!(g.group.is_isomorphic(&sl).is_some());
    }

    #[test]
    fn type_iv_order_48() {
        let p = PresentationParams::new(Family::IV).with("n", 3).with("k", 2);
        let g = gz_type(&p).unwrap();
        assert_eq!(g.group.order(), 48);
        assert!(g.relations.iter().all(|c| c.passed));
    }

    #[test]
    fn type_iii_sweep_orders() {
        for (m, n, r) in [(1, 9, 1), (5, 3, 1), (7, 3, 2), (1, 15, 1)] {
            let p = PresentationParams::new(Family::III).with("m", m).with("n", n).with("r", r);
            if p.validate().is_err() {
                continue;
            }
            let g = gz_type(&p).unwrap();
            assert_eq!(g.group.order() as u64, 8 * m * n);
        }
    }

    #[test]
    fn nonsolvable_families() {
        let p = PresentationParams::new(Family::NsII).with("p", 5);
        let g = gz_type(&p).unwrap();
        assert_eq!(g.group.order(), 240);
        let p = PresentationParams::new(Family::NsI).with("p", 5).with("n", 7);
        let g = gz_type(&p).unwrap();
        assert_eq!(g.group.order(), 840);
    }
}
