#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use frobkit::constructors::{
    abelian, affine_binary_icosahedral, affine_group, alternating, cyclic, dihedral, metacyclic,
    quaternion_generalized, sl2, symmetric, Fq,
};
use frobkit::group::factorize;
use frobkit::Group;

pub struct Entry {
    pub name: &'static str,
    pub group: Group,
    /// order of the Frobenius kernel, when the group is Frobenius
    pub kernel: Option<usize>,
}

fn e(name: &'static str, group: Group, kernel: Option<usize>) -> Entry {
    Entry { name, group, kernel }
}

/// Small groups with known Frobenius status.
pub fn corpus() -> Vec<Entry> {
    let f3 = Fq::new(3).unwrap();
    let c4_on_f3 = affine_group(&f3, &[f3.mat(&[&[0, -1], &[1, 0]])]).unwrap();
    let q8_on_f3 = affine_group(&f3, &[f3.mat(&[&[0, -1], &[1, 0]]), f3.mat(&[&[1, 1], &[1, -1]])]).unwrap();
    let d4 = dihedral(4).unwrap();
    let q8 = quaternion_generalized(8).unwrap();
    vec![
        e("C2", cyclic(2), None),
        e("C3", cyclic(3), None),
        e("C4", cyclic(4), None),
        e("C6", cyclic(6), None),
        e("C8", cyclic(8), None),
        e("C12", cyclic(12), None),
        e("C16", cyclic(16), None),
        e("C2xC2", abelian(&[2, 2]), None),
        e("C2xC4", abelian(&[2, 4]), None),
        e("C2^3", abelian(&[2, 2, 2]), None),
        e("C3xC3", abelian(&[3, 3]), None),
        e("C2xC6", abelian(&[2, 6]), None),
        e("C4xC4", abelian(&[4, 4]), None),
        e("C2xC8", abelian(&[2, 8]), None),
        e("C2^2xC4", abelian(&[2, 2, 4]), None),
        e("C2^4", abelian(&[2, 2, 2, 2]), None),
        e("S3", symmetric(3).unwrap(), Some(3)),
        e("D4", d4.clone(), None),
        e("D5", dihedral(5).unwrap(), Some(5)),
        e("D6", dihedral(6).unwrap(), None),
        e("D7", dihedral(7).unwrap(), Some(7)),
        e("D8", dihedral(8).unwrap(), None),
        e("Q8", q8.clone(), None),
        e("Q16", quaternion_generalized(16).unwrap(), None),
        e("C2xQ8", q8.direct_product(&cyclic(2)).unwrap(), None),
        e("C2xD4", d4.direct_product(&cyclic(2)).unwrap(), None),
        e("Dic3", metacyclic(3, 4, 2).unwrap(), None),
        e("A4", alternating(4).unwrap(), Some(4)),
        e("C5:C4", metacyclic(5, 4, 2).unwrap(), Some(5)),
        e("C7:C3", metacyclic(7, 3, 2).unwrap(), Some(7)),
        e("S4", symmetric(4).unwrap(), None),
        e("SL2(F3)", sl2(3).unwrap(), None),
        e("C11:C5", metacyclic(11, 5, 3).unwrap(), Some(11)),
        e("C13:C4", metacyclic(13, 4, 5).unwrap(), Some(13)),
        e("(C3xC3):C4", c4_on_f3, Some(9)),
        e("(C3xC3):Q8", q8_on_f3, Some(9)),
        e("A5", alternating(5).unwrap(), None),
        e("SL2(F5)", sl2(5).unwrap(), None),
        e("C17:C8", metacyclic(17, 8, 2).unwrap(), Some(17)),
    ]
}

pub fn frobenius_sl2_f5() -> Entry {
    e("F11^2:SL2(F5)", affine_binary_icosahedral(11).unwrap(), Some(121))
}

fn pow_mod(mut b: u64, mut e: u32, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_unit(a: u64, m: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(m as i128) as u64
}

fn valuation(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Orders `p^v`, `0 < v < k`, of the elementary divisors of a dense matrix over `Z/p^k`.
fn local_elementary_divisors(mut a: Vec<Vec<u64>>, cols: usize, p: u64, k: u32) -> Vec<u64> {
    let q = p.pow(k);
    let mut out = Vec::new();
    let mut row_alive = vec![true; a.len()];
    let mut col_alive = vec![true; cols];
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate() {
            if !row_alive[i] {
                continue;
            }
            for j in 0..cols {
                if !col_alive[j] || row[j] == 0 {
                    continue;
                }
                let v = valuation(row[j], p, k);
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else { break };
        let pp = p.pow(v);
        let unit_inv = inv_unit((a[pi][pj] / pp) % q, q);
        let pivot_row = a[pi].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == pi || !row_alive[i] || row[pj] == 0 {
                continue;
            }
            let f = (row[pj] / pp) % q * unit_inv % q;
            for j in 0..cols {
                if col_alive[j] && pivot_row[j] != 0 {
                    row[j] = (row[j] + q - f * pivot_row[j] % q) % q;
                }
            }
        }
        row_alive[pi] = false;
        col_alive[pj] = false;
        if v > 0 {
            out.push(pp);
        }
    }
    out
}

fn invariant_factors(mut by_prime: Vec<Vec<u64>>) -> Vec<u64> {
    for v in &mut by_prime {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let n = by_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut f: Vec<u64> = (0..n)
        .map(|t| by_prime.iter().filter_map(|v| v.get(t)).product())
        .collect();
    f.reverse();
    f
}

/// `M(G) ≅ H³(G, Z)`, read off as the torsion of the cokernel of the integral
/// normalized coboundary `C² → C³`, one prime at a time modulo `p^(v+2)`.
pub fn schur_multiplier_oracle(g: &Group) -> Vec<u64> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    let m = n - 1;
    let col = |x: usize, y: usize| (x - 1) * m + (y - 1);
    let mut by_prime = Vec::new();
    for (p, v) in factorize(n as u64) {
        let k = v + 2;
        let q = p.pow(k);
        let mut rows = Vec::with_capacity(m * m * m);
        let mut seen: HashSet<Vec<(usize, u64)>> = HashSet::new();
        for a in 1..n {
            for b in 1..n {
                for c in 1..n {
                    // (δf)(a,b,c) = f(b,c) - f(ab,c) + f(a,bc) - f(a,b)
                    let mut row = vec![0u64; m * m];
                    let mut add = |i: usize, s: i64| row[i] = (row[i] as i64 + s).rem_euclid(q as i64) as u64;
                    add(col(b, c), 1);
                    let ab = g.mul(a, b);
                    if ab != 0 {
                        add(col(ab, c), -1);
                    }
                    let bc = g.mul(b, c);
                    if bc != 0 {
                        add(col(a, bc), 1);
                    }
                    add(col(a, b), -1);
                    let key: Vec<(usize, u64)> = row.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
                    if !key.is_empty() && seen.insert(key) {
                        rows.push(row);
                    }
                }
            }
        }
        let divisors = local_elementary_divisors(rows, m * m, p, k);
        by_prime.push(divisors);
    }
    invariant_factors(by_prime)
}

fn closure(g: &Group, gens: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0usize]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &y in gens {
            let z = g.mul(x, y);
            if s.insert(z) {
                queue.push_back(z);
            }
        }
    }
    s
}

/// Orders of proper nontrivial malnormal subgroups among those generated by at
/// most two elements: `H ∩ xHx⁻¹ = 1` for every `x ∉ H`.
pub fn malnormal_subgroup_orders(g: &Group) -> BTreeSet<usize> {
    let n = g.order();
    let mut subgroups: HashSet<BTreeSet<usize>> = HashSet::new();
    for a in 1..n {
        for b in a..n {
            subgroups.insert(closure(g, &[a, b]));
        }
    }
    let mut out = BTreeSet::new();
    for h in subgroups {
        if h.len() == 1 || h.len() == n {
            continue;
        }
        let malnormal = (0..n).filter(|x| !h.contains(x)).all(|x| {
            h.iter()
                .skip(1)
                .all(|&y| !h.contains(&g.mul(g.mul(x, y), g.inv(x))))
        });
        if malnormal {
            out.insert(h.len());
        }
    }
    out
}

/// Brute-force kernel of `A x ≡ 0 (mod n)`.
pub fn kernel_by_enumeration(a: &[Vec<i64>], cols: usize, n: u64) -> HashSet<Vec<u64>> {
    let total = (n as usize).pow(cols as u32);
    let mut out = HashSet::new();
    for code in 0..total {
        let mut x = vec![0u64; cols];
        let mut c = code;
        for xi in x.iter_mut() {
            *xi = (c % n as usize) as u64;
            c /= n as usize;
        }
        let ok = a.iter().all(|row| {
            row.iter()
                .zip(&x)
                .map(|(&r, &xi)| r * xi as i64)
                .sum::<i64>()
                .rem_euclid(n as i64)
                == 0
        });
        if ok {
            out.insert(x);
        }
    }
    out
}

/// Subgroup of `(Z/n)^d` spanned by the given vectors.
pub fn span_mod(gens: &[Vec<u64>], d: usize, n: u64) -> HashSet<Vec<u64>> {
    let zero = vec![0u64; d];
    let mut s = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(&a, &b)| (a + b) % n).collect();
            if s.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    s
}

/// Determinantal divisors `d_k = gcd` of all `k × k` minors; invariant factors are `d_k / d_{k-1}`.
pub fn invariant_factors_by_minors(a: &[Vec<i64>]) -> Vec<u64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect()).collect();
                d = gcd(d, det(m));
            }
        }
        if d == 0 {
            break;
        }
        out.push((d / prev) as u64);
        prev = d;
    }
    out.retain(|&x| x != 1);
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Fraction-free (Bareiss) determinant.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else { return 0 };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

pub fn p_power(n: u64, p: u64, v: u32) -> bool {
    pow_mod(p, v, u64::MAX) == n
}
