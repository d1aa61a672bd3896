mod common;

use std::collections::HashSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use frobkit::bogomolov::{b0, b0_over, b0_sylow_reduction, SylowReduction};
use frobkit::cohomology::h2_qz;
use frobkit::constructors::{
    affine_binary_icosahedral, binary_icosahedral, cyclic, double_cover_type, g_plus, g_plus_psi, metacyclic,
    quaternion_generalized, rep_phi, rep_psi, sl2, abelian, alternating, symmetric, verify_g_plus,
    verify_lemma_4_10,
};
use frobkit::frobenius::{find_frobenius_structures, kernel_by_partition, sylows_cyclic_or_quaternion, verify_structure_theorems};
use frobkit::group::factorize;
use frobkit::gz_classify::{abelian_subgroups_cyclic, frobenius_complement_criterion, satisfies_pq_condition};
use frobkit::rationality::{builtin_field, certify, rule, Outcome, Verdict};
use frobkit::zlinalg::{kernel_mod_n, smith_normal_form, SparseIntMatrix};
use frobkit::Group;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, frobenius_sl2_f5, Entry};

const CAP: usize = 72;

fn lemma_matrices_suite() {
    let h = binary_icosahedral(11).unwrap();
    assert_eq!(h.group().order(), 120);
    let r = verify_lemma_4_10(11).unwrap();
    for c in &r.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert!(r.checks.len() >= 10, "expected relation, φ, π and θ checks");
}

fn g_plus_suite() {
    let gp = g_plus(25).unwrap();
    let g = gp.group();
    assert_eq!(g.order(), 240);
    assert_eq!(g.element_order(gp.lambda), 4);
    assert_eq!(g.element_order(gp.eps), 2);
    let (images, _) = g_plus_psi(&gp).unwrap();
    let t = double_cover_type(g, gp.eps, &images).unwrap();
    assert_eq!(format!("{t:?}").to_lowercase(), "hat");
    let r = verify_g_plus(25).unwrap();
    for c in &r.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}

fn representation_suite() {
    for (l, q) in [(1u32, 73u32), (2, 73)] {
        assert_eq!(q % (8 * 3u32.pow(l)), 1);
        let three = 3u64.pow(l);
        let phi = rep_phi(l, q).unwrap();
        let psi = rep_psi(l, q).unwrap();
        assert_eq!(phi.generated_order as u64, 8 * three, "|G1| at l = {l}");
        assert_eq!(psi.generated_order as u64, 16 * three, "|G2| at l = {l}");
        assert_eq!(phi.generated_exponent, 4 * three, "exp(G1) at l = {l}");
        assert_eq!(psi.generated_exponent, 8 * three, "exp(G2) at l = {l}");
        assert!(phi.all_passed() && psi.all_passed());
    }
}

fn frobenius_suite() {
    let mut entries = corpus();
    entries.push(frobenius_sl2_f5());
    assert!(entries.len() >= 20);
    let mut frobenius = 0;
    for Entry { name, group: g, kernel } in &entries {
        let found = find_frobenius_structures(g).unwrap();
        match kernel {
            None => assert!(found.is_empty(), "{name} should not be Frobenius"),
            Some(k) => {
                frobenius += 1;
                assert!(!found.is_empty(), "{name} should be Frobenius");
                for s in &found {
                    assert_eq!(s.kernel.order(), *k, "{name} kernel");
                    let t = verify_structure_theorems(g, s).unwrap();
                    assert!(t.all_hold(), "{name}: {t:?}");
                    assert_eq!(kernel_by_partition(g, &s.complement).unwrap(), s.kernel, "{name}");
                }
            }
        }
        if g.order() <= 200 {
            let malnormal = common::malnormal_subgroup_orders(g);
            assert_eq!(!malnormal.is_empty(), kernel.is_some(), "{name}: malnormal oracle");
            if let Some(k) = kernel {
                assert!(malnormal.contains(&(g.order() / k)), "{name}: complement order");
            }
        }
    }
    assert!(frobenius >= 10);
}

/// No subgroup `C_p × C_p`: two commuting elements of order `p` always generate the same cyclic group.
fn no_elementary_rank_two(g: &Group) -> bool {
    let n = g.order();
    for x in 1..n {
        let p = g.element_order(x);
        if factorize(p).len() != 1 || factorize(p)[0].1 != 1 {
            continue;
        }
        let powers: HashSet<usize> = (0..p as i64).map(|k| g.pow(x, k)).collect();
        for y in 1..n {
            if g.element_order(y) == p && g.commute(x, y) && !powers.contains(&y) {
                return false;
            }
        }
    }
    true
}

fn gz_suite() {
    let mut entries = corpus();
    entries.push(frobenius_sl2_f5());
    let extra = [
        ("C3xSL2(F5)", sl2(5).unwrap().direct_product(&cyclic(3)).unwrap()),
        ("C5xQ8", quaternion_generalized(8).unwrap().direct_product(&cyclic(5)).unwrap()),
        ("Q32", quaternion_generalized(32).unwrap()),
        ("C3xS3", symmetric(3).unwrap().direct_product(&cyclic(3)).unwrap()),
    ];
    let mut groups: Vec<(String, Group)> = entries.into_iter().map(|e| (e.name.to_string(), e.group)).collect();
    groups.extend(extra.into_iter().map(|(n, g)| (n.to_string(), g)));
    for (name, g) in &groups {
        if g.order() > 2000 {
            continue;
        }
        let sylow = sylows_cyclic_or_quaternion(g).unwrap();
        let abelian = abelian_subgroups_cyclic(g);
        let pp = factorize(g.order() as u64)
            .iter()
            .all(|&(p, _)| satisfies_pq_condition(g, p, p).unwrap());
        assert_eq!(sylow, abelian, "{name}: Sylow shapes vs abelian subgroups");
        assert_eq!(sylow, pp, "{name}: Sylow shapes vs p² conditions");
        if g.order() <= 200 {
            assert_eq!(sylow, no_elementary_rank_two(g), "{name}: oracle");
        }
    }
}

fn complement_criterion_suite() {
    let yes = [
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("C30", cyclic(30)),
        ("Q8", quaternion_generalized(8).unwrap()),
        ("SL2(F3)", sl2(3).unwrap()),
        ("SL2(F5)", sl2(5).unwrap()),
        ("C7xSL2(F5)", sl2(5).unwrap().direct_product(&cyclic(7)).unwrap()),
        ("C5xSL2(F3)", sl2(3).unwrap().direct_product(&cyclic(5)).unwrap()),
    ];
    let no = [
        ("C7:C3", metacyclic(7, 3, 2).unwrap()),
        ("S3", symmetric(3).unwrap()),
        ("A4", alternating(4).unwrap()),
        ("C2xC2", abelian(&[2, 2])),
        ("C3xSL2(F5)", sl2(5).unwrap().direct_product(&cyclic(3)).unwrap()),
        ("A5", alternating(5).unwrap()),
    ];
    for (name, g) in &yes {
        let c = frobenius_complement_criterion(g).unwrap();
        assert!(c.is_frobenius_complement, "{name}: {c:?}");
    }
    for (name, g) in &no {
        let c = frobenius_complement_criterion(g).unwrap();
        assert!(!c.is_frobenius_complement, "{name}: {c:?}");
    }
}

fn cohomology_suite() {
    let mut checked = 0;
    for Entry { name, group: g, .. } in corpus() {
        if g.order() > 16 {
            continue;
        }
        let m = h2_qz(&g, CAP).unwrap();
        let oracle = common::schur_multiplier_oracle(&g);
        assert_eq!(m.invariants.factors, oracle, "{name}");
        assert_eq!(m.invariants.free_rank, 0);
        match name {
            "C2" | "C4" | "C8" | "C16" | "Q8" | "Q16" => assert!(oracle.is_empty(), "{name}"),
            "C2xC2" => assert_eq!(oracle, [2]),
            _ => {}
        }
        checked += 1;
    }
    assert!(checked >= 15);
}

fn b0_suite() {
    for Entry { name, group: g, .. } in corpus() {
        if g.order() <= 32 {
            assert!(b0(&g, CAP).unwrap().is_trivial(), "{name}");
        }
        if g.order() <= 24 {
            let maximal = b0_over(&g, CAP, true).unwrap();
            let all = b0_over(&g, CAP, false).unwrap();
            assert_eq!(maximal.invariants, all.invariants, "{name}");
        }
    }
    let mut entries: Vec<Entry> = corpus().into_iter().filter(|e| e.kernel.is_some()).collect();
    entries.push(frobenius_sl2_f5());
    for Entry { name, group: g, .. } in &entries {
        let structures = find_frobenius_structures(g).unwrap();
        assert!(!structures.is_empty());
        for s in &structures {
            match b0_sylow_reduction(g, s, CAP).unwrap() {
                SylowReduction::Trivial(r) => assert!(r.is_trivial()),
                SylowReduction::Inconclusive { prime, reason } => panic!("{name}: p = {prime}: {reason}"),
            }
        }
        if g.order() <= 32 {
            assert!(b0(g, CAP).unwrap().is_trivial(), "{name}: full method agrees");
        }
    }
}

fn verdict(g: &Group, field: &str) -> Verdict {
    certify(g, &builtin_field(&field.parse().unwrap()).unwrap()).unwrap()
}

fn rule_ids(v: &Verdict) -> Vec<&str> {
    v.trace.iter().map(|s| s.rule.as_str()).collect()
}

fn rule_engine_suite() {
    let c17 = metacyclic(17, 8, 2).unwrap();
    let v = verdict(&c17, "Q");
    assert_eq!(v.outcome, Outcome::NotRetractRational);
    assert_eq!(rule_ids(&v), ["N-AB", "N-DESC"]);
    let citations: Vec<&str> = v.trace.iter().map(|s| s.citation.as_str()).collect();
    assert_eq!(citations, [rule("N-AB").citation.as_str(), rule("N-DESC").citation.as_str()]);
    assert!(rule("N-DESC").citation.starts_with("Theorem 1.11"));
    assert_eq!(rule("N-AB").citation, "Theorem 3.1");

    let v = verdict(&metacyclic(7, 3, 2).unwrap(), "C");
    assert_eq!(v.outcome, Outcome::RetractRational);
    assert_eq!(rule_ids(&v), ["R-ZK"]);
    assert_eq!(v.trace[0].citation, "Theorem c4.2");

    let v = verdict(&affine_binary_icosahedral(11).unwrap(), "Q");
    assert_eq!(v.outcome, Outcome::RetractRational);
    assert_eq!(rule_ids(&v), ["R-SL25"]);
    assert_eq!(v.trace[0].citation, "Theorem 1.14");
    let notes: Vec<&str> = v.corollaries.iter().map(|c| c.citation.as_str()).collect();
    assert_eq!(notes, ["Theorem 1.12", "Theorem 1.15"]);

    let c8 = cyclic(8);
    let v = verdict(&c8, "Q");
    assert_eq!(v.outcome, Outcome::NotRetractRational);
    assert_eq!(rule_ids(&v), ["N-AB"]);
    let v = verdict(&c8, "Qzeta:8");
    assert_eq!(v.outcome, Outcome::RetractRational);
    assert_eq!(rule_ids(&v), ["R-AB"]);
    assert_eq!(v.trace[0].citation, "Theorem 3.1");

    for (g, field) in [(&c17, "Q"), (&c8, "Qzeta:8"), (&c8, "Q")] {
        let a = serde_json::to_string(&verdict(g, field)).unwrap();
        let b = serde_json::to_string(&verdict(&g.clone(), field)).unwrap();
        assert_eq!(a, b);
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            u[i].iter_mut().for_each(|x| *x = -*x);
            continue;
        }
        let f = rng.random_range(-2..=2);
        let row = u[j].clone();
        for (a, b) in u[i].iter_mut().zip(row) {
            *a += f * b;
        }
    }
    u
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect())
        .collect()
}

fn sparse(a: &[Vec<i64>], cols: usize) -> SparseIntMatrix {
    let mut entries = Vec::new();
    for (i, r) in a.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if x != 0 {
                entries.push((i, j, x));
            }
        }
    }
    SparseIntMatrix::new(a.len(), cols, entries)
}

fn linalg_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..500 {
        let rows = rng.random_range(1..=8);
        let cols = rng.random_range(1..=8);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.random_range(-20..=20)).collect()).collect();
        let s = smith_normal_form(&sparse(&a, cols), false);
        let u = random_unimodular(&mut rng, rows);
        let v = random_unimodular(&mut rng, cols);
        let b = matmul(&matmul(&u, &a), &v);
        let t = smith_normal_form(&sparse(&b, cols), false);
        assert_eq!(s.rank(), t.rank(), "trial {trial}");
        assert_eq!(s.invariant_factors(), t.invariant_factors(), "trial {trial}");
        if rows <= 4 && cols <= 4 {
            let minors: Vec<BigInt> = common::invariant_factors_by_minors(&a).into_iter().map(BigInt::from).collect();
            assert_eq!(s.invariant_factors(), minors, "trial {trial}: determinantal divisors");
        }
    }
    for trial in 0..300 {
        let n = rng.random_range(2..=12u64);
        let rows = rng.random_range(1..=3);
        let cols = rng.random_range(1..=4);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.random_range(-12..=12)).collect()).collect();
        let k = kernel_mod_n(&sparse(&a, cols), n).unwrap();
        let expected = common::kernel_by_enumeration(&a, cols, n);
        assert_eq!(k.size(), expected.len() as u128, "trial {trial}, n = {n}");
        let span = common::span_mod(&k.generators, cols, n);
        assert_eq!(span, expected, "trial {trial}, n = {n}");
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn()); 10] = [
        ("binary icosahedral matrices, relations, φ, π and θ", lemma_matrices_suite),
        ("G+ of order 240 and its Ŝ5 quotient cover", g_plus_suite),
        ("Φ and Ψ representation orders and exponents at l = 1, 2", representation_suite),
        ("Frobenius structure invariants over the corpus", frobenius_suite),
        ("three GZ characterizations agree", gz_suite),
        ("Frobenius complement criterion", complement_criterion_suite),
        ("Schur multipliers match dense elimination", cohomology_suite),
        ("B0: full method, Sylow reduction, maximal bicyclics", b0_suite),
        ("rule engine worked examples and determinism", rule_engine_suite),
        ("SNF invariance and kernels mod n", linalg_suite),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (i, (desc, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        let line = format!(
            "criterion {}: {} {desc} ({:.1}s)\n",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        stdout.write_all(line.as_bytes()).unwrap();
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
