use serde::{Deserialize, Serialize};

use crate::group::{is_prime, Group, GroupError, Perm, Subgroup, DEFAULT_ORDER_CAP};

use super::fq::{Fe, Fq, FqMat, MatrixGroup};
use super::{Check, ConstructError, VerificationReport};

/// `SL2(F_p)` acting on the nonzero vectors of `F_p²`.
pub fn sl2_matrix_group(p: u64) -> Result<MatrixGroup, ConstructError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p).into());
    }
    let f = Fq::new(p as u32)?;
    MatrixGroup::new(
        &f,
        vec![f.mat(&[&[1, 1], &[0, 1]]), f.mat(&[&[1, 0], &[1, 1]])],
        DEFAULT_ORDER_CAP,
    )
}

pub fn sl2(p: u64) -> Result<Group, ConstructError> {
    Ok(sl2_matrix_group(p)?.group)
}

fn theta_matrix(f: &Fq, omega: Fe) -> FqMat {
    f.mat_from(2, vec![0, f.neg(1), omega, 0])
}

/// Images of the generators of `SL2(F_p)` under `ρ ↦ MρM⁻¹`, `M = [[0,-1],[ω,0]]`
/// with `ω` a generator of `F_p^×`.
pub(crate) fn theta_images(lm: &MatrixGroup) -> Result<Vec<usize>, ConstructError> {
    let f = &lm.field;
    let m = theta_matrix(f, f.generator());
    lm.generators
        .iter()
        .map(|g| {
            lm.index_of_matrix(&f.mat_conj(&m, g))
                .ok_or_else(|| ConstructError::RelationViolation("θ leaves SL2".into()))
        })
        .collect()
}

/// The matrices `A, B, C` of `SL2(F_5)` and the scalar `ω = 2`.
#[derive(Debug, Clone)]
pub struct LemmaMatrices {
    pub field: Fq,
    pub a: FqMat,
    pub b: FqMat,
    pub c: FqMat,
    pub omega: Fe,
}

pub fn lemma_matrices() -> LemmaMatrices {
    let f = Fq::new(5).expect("F_5");
    LemmaMatrices {
        a: f.mat(&[&[-1, 1], &[0, -1]]),
        b: f.mat(&[&[2, 1], &[0, -2]]),
        c: f.mat(&[&[2, 0], &[2, -2]]),
        omega: 2,
        field: f,
    }
}

/// The binary icosahedral group `H = ⟨a, b, c⟩ ⊂ SL2(F_q)`.
#[derive(Debug, Clone)]
pub struct BinaryIcosahedral {
    pub zeta: Fe,
    pub a: FqMat,
    pub b: FqMat,
    pub c: FqMat,
    pub eps: FqMat,
    /// generators in the order `a, b, c`
    pub matrices: MatrixGroup,
    pub relations: Vec<Check>,
}

impl BinaryIcosahedral {
    pub fn group(&self) -> &Group {
        &self.matrices.group
    }

    pub fn field(&self) -> &Fq {
        &self.matrices.field
    }
}

pub fn binary_icosahedral(q: u32) -> Result<BinaryIcosahedral, ConstructError> {
    let f = Fq::new(q)?;
    let p = f.characteristic();
    if p == 2 || p == 5 {
        return Err(ConstructError::BadCharacteristic(p as u64));
    }
    let zeta = f.root_of_unity(5).ok_or(ConstructError::NoFifthRoot(q as u64))?;
    let zi = f.inv(zeta);
    let a = f.mat_neg(&f.mat_from(2, vec![f.pow(zeta, 3), 0, 0, f.pow(zeta, 2)]));
    let b = f.mat(&[&[0, 1], &[-1, 0]]);
    let s = f.inv(f.sub(f.pow(zeta, 2), f.pow(zeta, -2)));
    let z = f.add(zeta, zi);
    let c = f.mat_scale(s, &f.mat_from(2, vec![z, 1, 1, f.neg(z)]));
    let eps = f.mat_pow(&a, 5);
    let id = f.mat_identity(2);
    let inv = |x: &FqMat| f.mat_inv(x).expect("invertible");
    let mm = |x: &FqMat, y: &FqMat| f.mat_mul(x, y);
    let relations = vec![
        Check::new("ε = a⁵ ≠ 1", eps != id),
        Check::new("ε² = 1", mm(&eps, &eps) == id),
        Check::new("b² = ε", mm(&b, &b) == eps),
        Check::new("c² = ε", mm(&c, &c) == eps),
        Check::new("bab⁻¹ = a⁻¹", mm(&mm(&b, &a), &inv(&b)) == inv(&a)),
        Check::new("bcb⁻¹ = εc", mm(&mm(&b, &c), &inv(&b)) == mm(&eps, &c)),
        Check::new("cac = acba", mm(&mm(&c, &a), &c) == mm(&mm(&a, &c), &mm(&b, &a))),
        Check::new(
            "ca²c = a⁻²ca⁻²",
            mm(&mm(&c, &mm(&a, &a)), &c) == mm(&mm(&f.mat_pow(&a, -2), &c), &f.mat_pow(&a, -2)),
        ),
    ];
    super::require_all(&relations)?;
    let matrices = MatrixGroup::new(&f, vec![a.clone(), b.clone(), c.clone()], DEFAULT_ORDER_CAP)?;
    if matrices.group.order() != 120 {
        return Err(ConstructError::RelationViolation(format!(
            "⟨a, b, c⟩ has order {}",
            matrices.group.order()
        )));
    }
    Ok(BinaryIcosahedral {
        zeta,
        a,
        b,
        c,
        eps,
        matrices,
        relations,
    })
}

fn cycles5(spec: &[&[&[usize]]]) -> Vec<Perm> {
    spec.iter()
        .map(|cs| Perm::from_cycles(5, cs).expect("valid cycles"))
        .collect()
}

/// Images of `a, b, c` (and optionally `λ`) in `S5`, points renumbered from 0.
fn pi_images(with_lambda: bool) -> Vec<Perm> {
    let mut spec: Vec<&[&[usize]]> = vec![&[&[0, 1, 2, 3, 4]], &[&[0, 3], &[1, 2]], &[&[0, 2], &[1, 3]]];
    if with_lambda {
        spec.push(&[&[2, 3]]);
    }
    cycles5(&spec)
}

/// Extends permutation images to a homomorphism; when the images only
/// respect the relations under left-to-right composition, the inverted
/// images are used instead. Returns the map and the convention used.
fn perm_hom(g: &Group, images: &[Perm]) -> Option<(Vec<Perm>, Vec<Perm>, &'static str)> {
    let id = Perm::identity(images[0].degree());
    if let Ok(m) = g.extend_to_homomorphism(images, id.clone(), |x, y| x.compose(y)) {
        return Some((m, images.to_vec(), "right-to-left"));
    }
    let inv: Vec<Perm> = images.iter().map(Perm::inverse).collect();
    g.extend_to_homomorphism(&inv, id, |x, y| x.compose(y))
        .ok()
        .map(|m| (m, inv, "left-to-right"))
}

/// Machine check of the isomorphisms `SL2(F_5) ≅ H`, the projection
/// `H → A5` and the automorphism `θ`.
pub fn verify_lemma_4_10(q: u32) -> Result<VerificationReport, ConstructError> {
    let h = binary_icosahedral(q)?;
    let lm = lemma_matrices();
    let f5 = &lm.field;
    let fq = h.field();
    let mut checks = Vec::new();
    checks.push(Check::new("H has order 120", h.group().order() == 120));
    checks.extend(h.relations.iter().cloned());

    let l = MatrixGroup::new(f5, vec![lm.a.clone(), lm.b.clone(), lm.c.clone()], DEFAULT_ORDER_CAP)?;
    checks.push(Check::new("A, B, C generate SL2(F5)", l.group.order() == 120));
    let phi = l.group.extend_to_homomorphism(
        &[h.a.clone(), h.b.clone(), h.c.clone()],
        fq.mat_identity(2),
        |x, y| fq.mat_mul(x, y),
    );
    checks.push(Check::new("φ is a homomorphism", phi.is_ok()));
    let bijective = phi.as_ref().is_ok_and(|m| {
        let mut s: Vec<&FqMat> = m.iter().collect();
        s.sort();
        s.dedup();
        s.len() == 120
    });
    checks.push(Check::new("φ is bijective", bijective));

    match perm_hom(h.group(), &pi_images(false)) {
        Some((pi, _, convention)) => {
            checks.push(Check::with_detail("π is a homomorphism", true, convention));
            let mut image: Vec<&Perm> = pi.iter().collect();
            image.sort();
            image.dedup();
            checks.push(Check::new("π has image of order 60", image.len() == 60));
            let eps = h.matrices.index_of_matrix(&h.eps).expect("ε ∈ H");
            let kernel: Vec<usize> = (0..pi.len()).filter(|&x| pi[x].is_identity()).collect();
            checks.push(Check::new("π(ε) = 1", pi[eps].is_identity()));
            checks.push(Check::new("ker π = {1, ε}", kernel == [0, eps] || kernel == [eps, 0]));
        }
        None => checks.push(Check::new("π is a homomorphism", false)),
    }

    let m = theta_matrix(f5, lm.omega);
    let theta = |x: &FqMat| f5.mat_conj(&m, x);
    let (a, b, c) = (&lm.a, &lm.b, &lm.c);
    let a3ca = f5.mat_mul(&f5.mat_mul(&f5.mat_pow(a, 3), c), a);
    checks.push(Check::new("θ(A) = -A³CA", theta(a) == f5.mat_neg(&a3ca)));
    checks.push(Check::new("θ(B) = -C", theta(b) == f5.mat_neg(c)));
    checks.push(Check::new("θ(C) = -B", theta(c) == f5.mat_neg(b)));
    Ok(VerificationReport {
        subject: format!("binary icosahedral group over F_{q}"),
        checks,
    })
}

/// `G+ = ⟨λ, L⟩` realized in `GL2(F_q)`, `q` a power of 5.
#[derive(Debug, Clone)]
pub struct GPlus {
    /// generators in the order `A, B, C, λ`
    pub matrices: MatrixGroup,
    pub lambda: usize,
    pub eps: usize,
    pub l: Subgroup,
    pub checks: Vec<Check>,
}

impl GPlus {
    pub fn group(&self) -> &Group {
        &self.matrices.group
    }
}

pub fn g_plus(q: u32) -> Result<GPlus, ConstructError> {
    let f = Fq::new(q)?;
    if f.characteristic() != 5 {
        return Err(ConstructError::BadCharacteristic(f.characteristic() as u64));
    }
    let lm = lemma_matrices();
    let lift = |x: &FqMat| f.mat_from(2, x.e.clone());
    let (a, b, c) = (lift(&lm.a), lift(&lm.b), lift(&lm.c));
    let omega = lm.omega;
    let m = theta_matrix(&f, omega);
    // (s·M)² = -s²ω·I must equal -I
    let s = f.sqrt(f.inv(omega)).ok_or(ConstructError::NoSuchScalar(q as u64))?;
    let lambda_m = f.mat_scale(s, &m);
    let matrices = MatrixGroup::new(&f, vec![a, b, c, lambda_m.clone()], DEFAULT_ORDER_CAP)?;
    let g = &matrices.group;
    let gi = g.generator_indices();
    let lambda = gi[3];
    let eps = matrices
        .index_of_matrix(&f.mat_scalar(2, f.neg(1)))
        .ok_or_else(|| ConstructError::RelationViolation("-I ∉ G+".into()))?;
    let l = g.closure(&gi[..3]);
    let mut theta_ok = true;
    for &x in l.elements() {
        let rho = matrices.matrix_of(x);
        let lhs = f.mat_conj(&lambda_m, &rho);
        theta_ok &= lhs == f.mat_conj(&m, &rho) && l.contains(g.conj(lambda, x));
    }
    let checks = vec![
        Check::new("|G+| = 240", g.order() == 240),
        Check::new("|L| = 120", l.order() == 120),
        Check::new("λ has order 4", g.element_order(lambda) == 4),
        Check::new("λ² = ε", g.pow(lambda, 2) == eps),
        Check::new("λρλ⁻¹ = θ(ρ) for ρ ∈ L", theta_ok),
        Check::new("⟨λ, L⟩ = G+", g.closure(gi).order() == g.order()),
    ];
    super::require_all(&checks)?;
    Ok(GPlus {
        lambda,
        eps,
        l,
        checks,
        matrices,
    })
}

/// `ψ: G+ → S5` with `A ↦ (1 2 3 4 5)`, `B ↦ (1 4)(2 3)`, `C ↦ (1 3)(2 4)`, `λ ↦ (3 4)`,
/// as generator images together with the composition convention that makes it a homomorphism.
pub fn g_plus_psi(gp: &GPlus) -> Result<(Vec<Perm>, &'static str), ConstructError> {
    let (_, images, convention) = perm_hom(gp.group(), &pi_images(true))
        .ok_or_else(|| ConstructError::RelationViolation("ψ is not a homomorphism".into()))?;
    Ok((images, convention))
}

/// The `G+` checks together with `G+/⟨ε⟩ ≅ S5` and the cover type.
pub fn verify_g_plus(q: u32) -> Result<VerificationReport, ConstructError> {
    let gp = g_plus(q)?;
    let g = gp.group();
    let mut checks = gp.checks.clone();
    let (images, convention) = g_plus_psi(&gp)?;
    checks.push(Check::with_detail("ψ is a homomorphism", true, convention));
    let eps = g.closure(&[gp.eps]);
    let quotient = g.quotient(&eps)?;
    let s5 = super::symmetric(5)?;
    checks.push(Check::new(
        "G+/⟨ε⟩ ≅ S5",
        quotient.group.order() == 120 && quotient.group.is_isomorphic(&s5).is_some(),
    ));
    checks.push(Check::new("ψ(λ) is a transposition", cycle_type(&images[3]) == [2]));
    let cover = double_cover_type(g, gp.eps, &images);
    checks.push(Check::with_detail(
        "G+ is the hat cover",
        matches!(cover, Ok(CoverType::Hat)),
        format!("{cover:?}"),
    ));
    Ok(VerificationReport {
        subject: format!("G+ over F_{q}"),
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverType {
    /// transpositions lift to elements of order 4
    Hat,
    /// transpositions lift to involutions
    Tilde,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn cycle_type(p: &Perm) -> Vec<usize> {
    let mut t: Vec<usize> = p.cycles().iter().map(Vec::len).filter(|&l| l > 1).collect();
    t.sort_unstable();
    t
}

/// Distinguishes the two double covers of `S_n` given the images of the
/// generators of `g` in `S_n` and the central involution `z`.
pub fn double_cover_type(g: &Group, z: usize, gen_images: &[Perm]) -> Result<CoverType, ConstructError> {
    let bad = |s: &str| ConstructError::NotACentralExtension(s.to_string());
    if g.element_order(z) != 2 || (0..g.order()).any(|x| !g.commute(x, z)) {
        return Err(bad("z is not a central involution"));
    }
    let n = gen_images.first().map_or(0, Perm::degree);
    let map = g
        .extend_to_homomorphism(gen_images, Perm::identity(n), |x, y| x.compose(y))
        .map_err(|e| bad(&e.to_string()))?;
    let kernel: Vec<usize> = (0..g.order()).filter(|&x| map[x].is_identity()).collect();
    if kernel.len() != 2 || !kernel.contains(&z) {
        return Err(bad("kernel is not {1, z}"));
    }
    if g.order() != 2 * factorial(n) {
        return Err(bad("projection is not onto S_n"));
    }
    let lift_order = |shape: &[usize]| {
        (0..g.order())
            .find(|&x| cycle_type(&map[x]) == shape)
            .map(|x| g.element_order(x))
    };
    if n >= 4 && lift_order(&[2, 2]) != Some(4) {
        return Err(bad("a double transposition lifts to an involution, so the extension splits"));
    }
    match lift_order(&[2]) {
        Some(4) => Ok(CoverType::Hat),
        Some(2) if n >= 4 => Ok(CoverType::Tilde),
        _ => Err(bad("transpositions do not lift to elements of order 2 or 4")),
    }
}

/// Matrices of a representation and the outcome of its checks.
#[derive(Debug, Clone, Serialize)]
pub struct RepReport {
    pub q: u32,
    pub names: Vec<String>,
    pub matrices: Vec<Vec<Vec<Fe>>>,
    pub generated_order: usize,
    pub generated_exponent: u64,
    pub expected_order: usize,
    pub faithful: bool,
    pub relations: Vec<Check>,
    pub irreducibility_verified: bool,
}

impl RepReport {
    pub fn all_passed(&self) -> bool {
        self.faithful && self.relations.iter().all(|c| c.passed)
    }
}

fn rows(m: &FqMat) -> Vec<Vec<Fe>> {
    m.e.chunks(m.n).map(<[Fe]>::to_vec).collect()
}

struct Roots {
    f: Fq,
    eta: Fe,
    i: Fe,
    zeta: Fe,
    half: Fe,
}

fn roots(l: u32, q: u32) -> Result<Roots, ConstructError> {
    if l == 0 {
        return Err(ConstructError::BadModulus("l must be at least 1".into()));
    }
    let three = 3u64.pow(l);
    let need = num_integer::lcm(8, three);
    if !(q as u64 - 1).is_multiple_of(need) {
        return Err(ConstructError::BadModulus(format!("q = {q} is not 1 mod {need}")));
    }
    let f = Fq::new(q)?;
    let eta = f.root_of_unity(8).expect("8 | q - 1");
    let zeta = f.root_of_unity(three).expect("3^l | q - 1");
    Ok(Roots {
        i: f.mul(eta, eta),
        half: f.inv(f.from_int(2)),
        eta,
        zeta,
        f,
    })
}

fn mat_relations(f: &Fq, named: &[(&str, &FqMat)], rels: &[(&str, Vec<(&str, i64)>, Vec<(&str, i64)>)]) -> Vec<Check> {
    let n = named[0].1.n;
    let word = |w: &[(&str, i64)]| {
        w.iter().fold(f.mat_identity(n), |acc, &(g, e)| {
            let m = named.iter().find(|(x, _)| *x == g).expect("named generator").1;
            f.mat_mul(&acc, &f.mat_pow(m, e))
        })
    };
    rels.iter()
        .map(|(name, lhs, rhs)| Check::new(*name, word(lhs) == word(rhs)))
        .collect()
}

fn g1_relations(three: i64) -> Vec<(&'static str, Vec<(&'static str, i64)>, Vec<(&'static str, i64)>)> {
    vec![
        ("τ^(3^l) = 1", vec![("τ", three)], vec![]),
        ("λ⁴ = 1", vec![("λ", 4)], vec![]),
        ("λ² = ρ²", vec![("λ", 2)], vec![("ρ", 2)]),
        ("ρ² = (λρ)²", vec![("ρ", 2)], vec![("λ", 1), ("ρ", 1), ("λ", 1), ("ρ", 1)]),
        ("τλτ⁻¹ = ρ", vec![("τ", 1), ("λ", 1), ("τ", -1)], vec![("ρ", 1)]),
        ("τρτ⁻¹ = λρ", vec![("τ", 1), ("ρ", 1), ("τ", -1)], vec![("λ", 1), ("ρ", 1)]),
    ]
}

/// The two-dimensional representation of `G1 = ⟨τ, λ, ρ⟩` over `F_q`.
pub fn rep_phi(l: u32, q: u32) -> Result<RepReport, ConstructError> {
    let Roots { f, eta, i, zeta, .. } = roots(l, q)?;
    let sqrt2 = f.add(eta, f.inv(eta));
    if f.mul(sqrt2, sqrt2) != f.from_int(2) {
        return Err(ConstructError::BadModulus("η + η⁻¹ is not a square root of 2".into()));
    }
    let three = 3i64.pow(l);
    let lambda = f.mat_from(2, vec![i, 0, 0, f.neg(i)]);
    let rho = f.mat(&[&[0, -1], &[1, 0]]);
    let eta3 = f.pow(eta, 3);
    let tau = f.mat_scale(
        f.div(zeta, sqrt2),
        &f.mat_from(2, vec![f.neg(eta), eta, eta3, eta3]),
    );
    let named = [("λ", &lambda), ("ρ", &rho), ("τ", &tau)];
    let relations = mat_relations(&f, &named, &g1_relations(three));
    let expected = 8 * three as usize;
    let elems = f.matrix_closure(&[lambda.clone(), rho.clone(), tau.clone()], DEFAULT_ORDER_CAP)?;
    let generated = elems.len();
    Ok(RepReport {
        q,
        names: named.iter().map(|(n, _)| n.to_string()).collect(),
        matrices: named.iter().map(|(_, m)| rows(m)).collect(),
        generated_order: generated,
        generated_exponent: exponent(&f, &elems),
        expected_order: expected,
        faithful: generated == expected,
        relations,
        irreducibility_verified: false,
    })
}

fn exponent(f: &Fq, elems: &[FqMat]) -> u64 {
    let cap = elems.len() as u64;
    elems
        .iter()
        .fold(1, |e, m| num_integer::lcm(e, f.mat_order(m, cap).expect("element of a finite group")))
}

fn block_diag(f: &Fq, top: &FqMat, bottom: &FqMat) -> FqMat {
    let mut e = vec![0; 16];
    for r in 0..2 {
        for c in 0..2 {
            e[r * 4 + c] = top.get(r, c);
            e[(r + 2) * 4 + c + 2] = bottom.get(r, c);
        }
    }
    f.mat_from(4, e)
}

fn is_block_diagonal(m: &FqMat) -> bool {
    (0..4).all(|r| (0..4).all(|c| (r < 2) == (c < 2) || m.get(r, c) == 0))
}

fn block(m: &FqMat, lower: bool) -> FqMat {
    let o = if lower { 2 } else { 0 };
    FqMat {
        n: 2,
        e: vec![m.get(o, o), m.get(o, o + 1), m.get(o + 1, o), m.get(o + 1, o + 1)],
    }
}

/// The four-dimensional representation of `G2 = ⟨G1, ν⟩` over `F_q`, with `k = -1 mod 3^l`.
pub fn rep_psi(l: u32, q: u32) -> Result<RepReport, ConstructError> {
    let Roots { f, eta, i, zeta, half } = roots(l, q)?;
    let sqrt_m2 = f.add(f.pow(eta, 3), eta);
    if f.mul(sqrt_m2, sqrt_m2) != f.from_int(-2) {
        return Err(ConstructError::BadModulus("η³ + η is not a square root of -2".into()));
    }
    let three = 3i64.pow(l);
    let id2 = f.mat_identity(2);
    let one = f.one();
    let lambda = block_diag(&f, &f.mat_from(2, vec![i, 0, 0, f.neg(i)]), &id2);
    let rho = block_diag(&f, &f.mat(&[&[0, -1], &[1, 0]]), &id2);
    let h = |x: Fe| f.mul(x, half);
    let tau_top = f.mat_from(
        2,
        vec![
            h(f.sub(f.neg(one), i)),
            h(f.add(one, i)),
            h(f.add(f.neg(one), i)),
            h(f.add(f.neg(one), i)),
        ],
    );
    let tau = block_diag(&f, &tau_top, &f.mat_from(2, vec![zeta, 0, 0, f.inv(zeta)]));
    let s = f.inv(sqrt_m2);
    let nu = block_diag(
        &f,
        &f.mat_from(2, vec![s, s, s, f.neg(s)]),
        &f.mat(&[&[0, 1], &[1, 0]]),
    );
    let k = three - 1;
    let named = [("λ", &lambda), ("ρ", &rho), ("τ", &tau), ("ν", &nu)];
    let mut rels = g1_relations(three);
    rels.extend([
        ("ν² = λ²", vec![("ν", 2)], vec![("λ", 2)]),
        ("νλν⁻¹ = ρλ", vec![("ν", 1), ("λ", 1), ("ν", -1)], vec![("ρ", 1), ("λ", 1)]),
        ("νρν⁻¹ = ρ⁻¹", vec![("ν", 1), ("ρ", 1), ("ν", -1)], vec![("ρ", -1)]),
        ("ντν⁻¹ = τ^k", vec![("ν", 1), ("τ", 1), ("ν", -1)], vec![("τ", k)]),
        ("ντν⁻¹ = τ⁻¹", vec![("ν", 1), ("τ", 1), ("ν", -1)], vec![("τ", -1)]),
    ]);
    let mut relations = mat_relations(&f, &named, &rels);
    relations.push(Check::new(
        "all four matrices preserve the 2+2 blocks",
        named.iter().all(|(_, m)| is_block_diagonal(m)),
    ));
    let (nb, tb) = (block(&nu, true), block(&tau, true));
    relations.push(Check::new(
        "ν swaps the eigenlines of τ in the second block",
        f.mat_conj(&nb, &tb) == f.mat_inv(&tb).expect("invertible"),
    ));
    let expected = 16 * three as usize;
    let gens: Vec<FqMat> = named.iter().map(|(_, m)| (*m).clone()).collect();
    let elems = f.matrix_closure(&gens, DEFAULT_ORDER_CAP)?;
    let generated = elems.len();
    Ok(RepReport {
        q,
        names: named.iter().map(|(n, _)| n.to_string()).collect(),
        matrices: named.iter().map(|(_, m)| rows(m)).collect(),
        generated_order: generated,
        generated_exponent: exponent(&f, &elems),
        expected_order: expected,
        faithful: generated == expected,
        relations,
        irreducibility_verified: false,
    })
}

/// `F_q^d ⋊ H` acting on `F_q^d`, for `H` generated by the given matrices.
/// Generators: translations first, then the matrices.
pub fn affine_group(f: &Fq, mats: &[FqMat]) -> Result<Group, ConstructError> {
    let d = mats.first().map_or(1, |m| m.n);
    let q = f.q() as usize;
    let npts = q.checked_pow(d as u32).filter(|&n| n <= 1 << 16).ok_or_else(|| {
        ConstructError::BadModulus(format!("affine space F_{q}^{d} is too large"))
    })?;
    let decode = |mut x: usize| -> Vec<Fe> {
        (0..d)
            .map(|_| {
                let v = (x % q) as Fe;
                x /= q;
                v
            })
            .collect()
    };
    let encode = |v: &[Fe]| v.iter().rev().fold(0usize, |acc, &x| acc * q + x as usize);
    let points: Vec<Vec<Fe>> = (0..npts).map(decode).collect();
    let mut gens = Vec::new();
    let mut basis = vec![f.one()];
    for _ in 1..f.degree() {
        basis.push(f.mul(*basis.last().expect("nonempty"), f.generator()));
    }
    for i in 0..d {
        for &x in &basis {
            let img = points
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w[i] = f.add(w[i], x);
                    encode(&w) as u32
                })
                .collect();
            gens.push(Perm::from_images(img)?);
        }
    }
    for m in mats {
        let img = points.iter().map(|v| encode(&f.apply(m, v)) as u32).collect();
        gens.push(Perm::from_images(img).map_err(|_| {
            ConstructError::BadModulus(format!("singular matrix {m:?}"))
        })?);
    }
    Ok(Group::from_generators(npts, gens)?)
}

/// `F_q² ⋊ H` with `H` the binary icosahedral group over `F_q`.
pub fn affine_binary_icosahedral(q: u32) -> Result<Group, ConstructError> {
    let h = binary_icosahedral(q)?;
    affine_group(h.field(), &[h.a.clone(), h.b.clone(), h.c.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_orders() {
        assert_eq!(sl2(3).unwrap().order(), 24);
        let s5 = sl2(5).unwrap();
        assert_eq!(s5.order(), 120);
        assert!(s5.is_perfect());
        let z = s5.center();
        assert_eq!(z.order(), 2);
        let q = s5.quotient(&z).unwrap();
        assert_eq!(q.group.order(), 60);
        assert_eq!(q.group.normal_subgroups().len(), 2);
    }

    #[test]
    fn binary_icosahedral_over_f11() {
        let h = binary_icosahedral(11).unwrap();
        assert_eq!(h.zeta, 3);
        assert_eq!(h.group().order(), 120);
        assert!(h.relations.iter().all(|c| c.passed));
        let eps = h.matrices.index_of_matrix(&h.eps).unwrap();
        assert_eq!(h.group().center().elements(), &[0, eps]);
        assert!(matches!(binary_icosahedral(7), Err(ConstructError::NoFifthRoot(7))));
        assert!(matches!(binary_icosahedral(25), Err(ConstructError::BadCharacteristic(5))));
    }

    #[test]
    fn lemma_report_passes() {
        let r = verify_lemma_4_10(11).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn g_plus_is_hat_s5() {
        let gp = g_plus(25).unwrap();
        assert_eq!(gp.group().order(), 240);
        assert!(matches!(g_plus(5), Err(ConstructError::NoSuchScalar(5))));
        let (images, _) = g_plus_psi(&gp).unwrap();
        assert_eq!(double_cover_type(gp.group(), gp.eps, &images).unwrap(), CoverType::Hat);
        let r = verify_g_plus(25).unwrap();
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn split_cover_rejected() {
        let s5 = super::super::symmetric(5).unwrap();
        let c2 = super::super::cyclic(2);
        let g = s5.direct_product(&c2).unwrap();
        let z = g.generator_indices()[2];
        let mut images: Vec<Perm> = s5.generators().to_vec();
        images.push(Perm::identity(5));
        assert!(matches!(
            double_cover_type(&g, z, &images),
            Err(ConstructError::NotACentralExtension(_))
        ));
    }

    #[test]
    fn representations_l1() {
        let phi = rep_phi(1, 73).unwrap();
        assert!(phi.all_passed(), "{phi:?}");
        assert_eq!(phi.generated_order, 24);
        let psi = rep_psi(1, 73).unwrap();
        assert!(psi.all_passed(), "{psi:?}");
        assert_eq!(psi.generated_order, 48);
        assert_eq!((phi.generated_exponent, psi.generated_exponent), (12, 24));
        assert!(matches!(rep_phi(1, 71), Err(ConstructError::BadModulus(_))));
    }

    #[test]
    fn representations_l2() {
        let phi = rep_phi(2, 73).unwrap();
        assert!(phi.all_passed());
        assert_eq!((phi.generated_order, phi.generated_exponent), (72, 36));
        let psi = rep_psi(2, 73).unwrap();
        assert!(psi.all_passed());
        assert_eq!((psi.generated_order, psi.generated_exponent), (144, 72));
    }

    #[test]
    fn affine_frobenius_orders() {
        let f3 = Fq::new(3).unwrap();
        let g = affine_group(&f3, &[f3.mat(&[&[0, -1], &[1, 0]])]).unwrap();
        assert_eq!(g.order(), 36);
        assert_eq!(affine_binary_icosahedral(11).unwrap().order(), 14520);
    }
}
