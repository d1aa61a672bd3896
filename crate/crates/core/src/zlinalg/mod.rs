//! Exact linear algebra over `Z` and `Z/n`.
//!
//! Modular problems are split by the Chinese remainder theorem into
//! prime-power components and solved over the local rings `Z/p^k`.

mod local;
mod snf;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::factorize;

pub use local::{
    local_snf, valuation_echelon, LocalKernel, LocalKernelSolver, LocalRing, LocalSnf,
};
pub use snf::{
    integer_left_kernel, smith_normal_form, smith_normal_form_bigint, SmithForm, SmithTransforms,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("a relation does not lie in the span of the generators")]
    RelationOutsideSpan,
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value does not fit in 64 bits")]
    Overflow,
}

/// Integer matrix stored as `(row, col, value)` triples, one per nonzero position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseIntMatrix {
    /// Duplicate positions are summed and zeros dropped.
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize, i64)>) -> SparseIntMatrix {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (r, c, x) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc.entry((r, c)).or_insert(0) += x;
        }
        SparseIntMatrix {
            rows,
            cols,
            entries: acc
                .into_iter()
                .filter(|e| e.1 != 0)
                .map(|((r, c), x)| (r, c, x))
                .collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> SparseIntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &x)| (i, j, x)))
            .collect();
        SparseIntMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for &(r, c, x) in &self.entries {
            d[r][c] = x;
        }
        d
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        SparseIntMatrix::new(
            self.cols,
            self.rows,
            self.entries.iter().map(|&(r, c, x)| (c, r, x)).collect(),
        )
    }

    fn rows_mod(&self, ring: &LocalRing) -> Vec<Vec<(usize, u64)>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c, x) in &self.entries {
            let v = ring.reduce(x);
            if v != 0 {
                out[r].push((c, v));
            }
        }
        out
    }
}

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r` with `d_i | d_{i+1}`, `d_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub factors: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> AbelianInvariants {
        AbelianInvariants::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    /// Builds the invariant factor chain from arbitrary cyclic orders.
    pub fn from_cyclic_orders(orders: &[u64], free_rank: usize) -> AbelianInvariants {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in orders {
            for (p, k) in factorize(d) {
                by_prime.entry(p).or_default().push(p.pow(k));
            }
        }
        let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for mut powers in by_prime.into_values() {
            powers.sort_unstable();
            let offset = len - powers.len();
            for (i, q) in powers.into_iter().enumerate() {
                factors[offset + i] *= q;
            }
        }
        AbelianInvariants { factors, free_rank }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Prime-power components `(p, k)` of `n`.
pub fn prime_power_parts(n: u64) -> Vec<LocalRing> {
    factorize(n).into_iter().map(|(p, k)| LocalRing::new(p, k)).collect()
}

/// Embeds `Z/p^k` into `Z/n` compatibly with the CRT splitting.
pub fn crt_lift(x: u64, ring: &LocalRing, n: u64) -> u64 {
    let co = n / ring.q;
    let e = (co * ring.inv(co % ring.q)) % n;
    ((x as u128 * e as u128) % n as u128) as u64
}

/// Generators of `{x : M x ≡ 0 (mod n)}` with the order of each generator.
#[derive(Clone, Debug)]
pub struct ModKernel {
    pub modulus: u64,
    pub generators: Vec<Vec<u64>>,
    pub orders: Vec<u64>,
}

impl ModKernel {
    /// Number of solutions; generators of coprime components are independent.
    pub fn size(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }
}

pub fn kernel_mod_n(m: &SparseIntMatrix, n: u64) -> Result<ModKernel, LinalgError> {
    if n < 2 {
        return Err(LinalgError::BadModulus(n));
    }
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for ring in prime_power_parts(n) {
        let mut solver = LocalKernelSolver::new(ring, m.cols());
        for row in m.rows_mod(&ring) {
            solver.add_row(&row);
        }
        let k = solver.finalize();
        for (g, e) in k.generators.iter().zip(&k.order_exponents) {
            generators.push(g.iter().map(|&x| crt_lift(x, &ring, n)).collect());
            orders.push(ring.p.pow(*e));
        }
    }
    Ok(ModKernel {
        modulus: n,
        generators,
        orders,
    })
}

/// The quotient of `⊕ Z/p^{o_i}` by a set of relations, with explicit coordinates.
#[derive(Clone, Debug)]
pub struct LocalQuotient {
    pub ring: LocalRing,
    /// exponents of the cyclic summands of the quotient (all positive)
    pub exponents: Vec<u32>,
    slots: Vec<usize>,
    v: Vec<Vec<u64>>,
    v_inv: Vec<Vec<u64>>,
}

impl LocalQuotient {
    pub fn new(ring: LocalRing, order_exponents: &[u32], relations: &[Vec<u64>]) -> LocalQuotient {
        let m = order_exponents.len();
        let mut mat: Vec<Vec<u64>> = relations.to_vec();
        for (i, &o) in order_exponents.iter().enumerate() {
            if o < ring.k {
                let mut r = vec![0u64; m];
                r[i] = ring.p.pow(o) % ring.q;
                mat.push(r);
            }
        }
        let snf = local_snf(ring, &mat, m, true);
        let mut exponents = Vec::new();
        let mut slots = Vec::new();
        for j in 0..m {
            let e = snf.valuations.get(j).copied().unwrap_or(ring.k);
            if e > 0 {
                exponents.push(e);
                slots.push(j);
            }
        }
        LocalQuotient {
            ring,
            exponents,
            slots,
            v: snf.v,
            v_inv: snf.v_inv,
        }
    }

    /// Coordinates in the quotient of an element given in the original coordinates.
    pub fn coordinates(&self, a: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        self.slots
            .iter()
            .zip(&self.exponents)
            .map(|(&j, &e)| {
                let s = a
                    .iter()
                    .zip(&self.v)
                    .fold(0, |acc, (&x, row)| ring.add(acc, ring.mul(x % ring.q, row[j])));
                s % ring.p.pow(e)
            })
            .collect()
    }

    /// Preimage, in the original coordinates, of the `j`-th quotient generator.
    pub fn generator(&self, j: usize) -> Vec<u64> {
        self.v_inv[self.slots[j]].clone()
    }

    pub fn invariants(&self) -> AbelianInvariants {
        let orders: Vec<u64> = self.exponents.iter().map(|&e| self.ring.p.pow(e)).collect();
        AbelianInvariants::from_cyclic_orders(&orders, 0)
    }
}

/// Invariants of `span(generators) / span(relations)` inside `(Z/n)^d`.
pub fn quotient_invariants(
    generators: &[Vec<u64>],
    relations: &[Vec<u64>],
    n: u64,
) -> Result<AbelianInvariants, LinalgError> {
    if n < 2 {
        return Err(LinalgError::BadModulus(n));
    }
    let d = generators
        .first()
        .or(relations.first())
        .map_or(0, |v| v.len());
    if generators.iter().chain(relations).any(|v| v.len() != d) {
        return Err(LinalgError::DimensionMismatch("vectors of unequal length".into()));
    }
    let m = generators.len();
    let mut orders = Vec::new();
    for ring in prime_power_parts(n) {
        let gmat: Vec<Vec<u64>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| x % ring.q).collect())
            .collect();
        // syzygies among the generators
        let mut solver = LocalKernelSolver::new(ring, m);
        for j in 0..d {
            let col: Vec<(usize, u64)> = (0..m).map(|i| (i, gmat[i][j])).filter(|e| e.1 != 0).collect();
            solver.add_row(&col);
        }
        let syz = solver.finalize();
        let mut pres: Vec<Vec<u64>> = syz.generators.clone();
        let snf = local_snf(ring, &gmat, d, true);
        for r in relations {
            let rv: Vec<u64> = (0..d)
                .map(|j| {
                    (0..d).fold(0, |acc, i| ring.add(acc, ring.mul(r[i] % ring.q, snf.v[i][j])))
                })
                .collect();
            let mut w = vec![0u64; m];
            for (j, &x) in rv.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let Some(&dj) = snf.diag.get(j).filter(|&&dj| dj != 0) else {
                    return Err(LinalgError::RelationOutsideSpan);
                };
                if ring.valuation(x) < ring.valuation(dj) {
                    return Err(LinalgError::RelationOutsideSpan);
                }
                w[j] = ring.quotient(x, dj);
            }
            let c: Vec<u64> = (0..m)
                .map(|l| (0..m).fold(0, |acc, j| ring.add(acc, ring.mul(w[j], snf.u[j][l]))))
                .collect();
            pres.push(c);
        }
        let q = LocalQuotient::new(ring, &vec![ring.k; m], &pres);
        orders.extend(q.exponents.iter().map(|&e| ring.p.pow(e)));
    }
    Ok(AbelianInvariants::from_cyclic_orders(&orders, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_chain_from_orders() {
        let a = AbelianInvariants::from_cyclic_orders(&[2, 3, 4], 0);
        assert_eq!(a.factors, vec![2, 12]);
        assert_eq!(a.to_string(), "Z/2 + Z/12");
        assert!(AbelianInvariants::from_cyclic_orders(&[], 0).is_trivial());
    }

    #[test]
    fn kernel_identity_is_zero() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(kernel_mod_n(&m, 12).unwrap().size(), 1);
    }

    #[test]
    fn kernel_two_mod_four() {
        let m = SparseIntMatrix::from_dense(&[vec![2]]);
        let k = kernel_mod_n(&m, 4).unwrap();
        assert_eq!(k.generators, vec![vec![2]]);
        assert_eq!(k.size(), 2);
    }

    #[test]
    fn kernel_two_three_mod_six() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 3]]);
        let k = kernel_mod_n(&m, 6).unwrap();
        assert_eq!(k.size(), 6);
        for g in &k.generators {
            assert_eq!((2 * g[0] + 3 * g[1]) % 6, 0);
        }
    }

    #[test]
    fn quotient_examples() {
        let free = quotient_invariants(&[vec![1, 0], vec![0, 1]], &[], 4).unwrap();
        assert_eq!(free.factors, vec![4, 4]);
        let half = quotient_invariants(&[vec![1]], &[vec![2]], 4).unwrap();
        assert_eq!(half.factors, vec![2]);
        let glued = quotient_invariants(&[vec![4, 0], vec![0, 1]], &[vec![4, 4]], 8).unwrap();
        assert_eq!(glued.factors, vec![8]);
        assert_eq!(
            quotient_invariants(&[vec![2]], &[vec![1]], 4).unwrap_err(),
            LinalgError::RelationOutsideSpan
        );
    }

    #[test]
    fn local_quotient_coordinates() {
        let ring = LocalRing::new(2, 3);
        // Z/8 ⊕ Z/2 modulo (2, 1): the second summand becomes -2 times the first
        let q = LocalQuotient::new(ring, &[3, 1], &[vec![2, 1]]);
        assert_eq!(q.invariants().factors, vec![4]);
        assert_eq!(q.coordinates(&[2, 1]), vec![0]);
        let g = q.generator(0);
        assert_ne!(q.coordinates(&g), vec![0]);
    }
}
