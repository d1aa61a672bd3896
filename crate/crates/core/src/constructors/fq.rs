//! Finite fields `F_q` and small matrices over them.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::group::{factorize, Group, Perm};

use super::ConstructError;

pub type Fe = u32;

/// `F_q` with elements encoded as base-`p` digit strings of polynomial
/// coefficients, multiplied through discrete log tables.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<Fe>,
    log: Vec<u32>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl Fq {
    pub fn new(q: u32) -> Result<Fq, ConstructError> {
        let f = factorize(q as u64);
        let [(p, k)] = f.as_slice() else {
            return Err(ConstructError::NotPrimePower(q as u64));
        };
        let (p, k) = (*p as u32, *k);
        if q > 1 << 20 {
            return Err(ConstructError::BadModulus(format!("field of size {q} is too large")));
        }
        // search for a primitive monic polynomial: x then has order q - 1
        let mut coeffs = vec![0u32; k as usize];
        loop {
            if let Some(exp) = primitive_powers(p, k, &coeffs) {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                return Ok(Fq { p, k, q, exp, log });
            }
            // next candidate, lowest coefficient first
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    unreachable!("a primitive polynomial always exists");
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn zero(&self) -> Fe {
        0
    }

    pub fn one(&self) -> Fe {
        1
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, x: i64) -> Fe {
        x.rem_euclid(self.p as i64) as Fe
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "zero has no inverse");
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e).rem_euclid(n);
        self.exp[l as usize]
    }

    pub fn generator(&self) -> Fe {
        self.exp[1 % self.exp.len()]
    }

    pub fn multiplicative_order(&self, a: Fe) -> u64 {
        assert!(a != 0);
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    /// The smallest element (in the encoding order) of multiplicative order `n`.
    pub fn root_of_unity(&self, n: u64) -> Option<Fe> {
        (1..self.q).find(|&a| self.multiplicative_order(a) == n)
    }

    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        (0..self.q).find(|&x| self.mul(x, x) == a)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.q
    }
}

fn poly_mul_x(p: u32, k: u32, coeffs: &[u32], v: &[u32]) -> Vec<u32> {
    // x·v mod (x^k + coeffs[k-1] x^{k-1} + … + coeffs[0])
    let k = k as usize;
    let top = v[k - 1];
    let mut out = vec![0u32; k];
    for i in (1..k).rev() {
        out[i] = v[i - 1];
    }
    for i in 0..k {
        out[i] = (out[i] + (p - coeffs[i] % p) * top) % p;
    }
    out
}

fn encode(p: u32, v: &[u32]) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn primitive_powers(p: u32, k: u32, coeffs: &[u32]) -> Option<Vec<Fe>> {
    let q = p.pow(k);
    let mut v = vec![0u32; k as usize];
    v[0] = 1;
    let mut out = Vec::with_capacity((q - 1) as usize);
    let mut seen = vec![false; q as usize];
    for _ in 0..q - 1 {
        let e = encode(p, &v);
        if e == 0 || seen[e as usize] {
            return None;
        }
        seen[e as usize] = true;
        out.push(e);
        v = if k == 1 {
            // prime field: powers of a candidate generator coeffs[0] + 1
            vec![v[0] * ((coeffs[0] + 1) % p) % p]
        } else {
            poly_mul_x(p, k, coeffs, &v)
        };
    }
    (encode(p, &v) == 1).then_some(out)
}

/// A square matrix over some `F_q`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMat {
    pub n: usize,
    pub e: Vec<Fe>,
}

impl fmt::Debug for FqMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Fe]> = self.e.chunks(self.n).collect();
        write!(f, "{rows:?}")
    }
}

impl FqMat {
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.e[i * self.n + j]
    }
}

impl Fq {
    pub fn mat(&self, rows: &[&[i64]]) -> FqMat {
        let n = rows.len();
        FqMat {
            n,
            e: rows.iter().flat_map(|r| r.iter().map(|&x| self.from_int(x))).collect(),
        }
    }

    pub fn mat_from(&self, n: usize, e: Vec<Fe>) -> FqMat {
        assert_eq!(e.len(), n * n);
        FqMat { n, e }
    }

    pub fn mat_identity(&self, n: usize) -> FqMat {
        self.mat_scalar(n, 1)
    }

    pub fn mat_scalar(&self, n: usize, s: Fe) -> FqMat {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = s;
        }
        FqMat { n, e }
    }

    pub fn mat_mul(&self, a: &FqMat, b: &FqMat) -> FqMat {
        let n = a.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for l in 0..n {
                    acc = self.add(acc, self.mul(a.e[i * n + l], b.e[l * n + j]));
                }
                e[i * n + j] = acc;
            }
        }
        FqMat { n, e }
    }

    pub fn mat_scale(&self, s: Fe, a: &FqMat) -> FqMat {
        FqMat {
            n: a.n,
            e: a.e.iter().map(|&x| self.mul(s, x)).collect(),
        }
    }

    pub fn mat_neg(&self, a: &FqMat) -> FqMat {
        self.mat_scale(self.neg(1), a)
    }

    pub fn det(&self, a: &FqMat) -> Fe {
        let n = a.n;
        let mut m = a.e.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m[r * n + c] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    m.swap(piv * n + j, c * n + j);
                }
                det = self.neg(det);
            }
            let d = m[c * n + c];
            det = self.mul(det, d);
            let dinv = self.inv(d);
            for r in c + 1..n {
                let f = self.mul(m[r * n + c], dinv);
                if f != 0 {
                    for j in c..n {
                        m[r * n + j] = self.sub(m[r * n + j], self.mul(f, m[c * n + j]));
                    }
                }
            }
        }
        det
    }

    pub fn mat_inv(&self, a: &FqMat) -> Option<FqMat> {
        let n = a.n;
        let mut m = a.e.clone();
        let mut inv = self.mat_identity(n).e;
        for c in 0..n {
            let piv = (c..n).find(|&r| m[r * n + c] != 0)?;
            for j in 0..n {
                m.swap(piv * n + j, c * n + j);
                inv.swap(piv * n + j, c * n + j);
            }
            let dinv = self.inv(m[c * n + c]);
            for j in 0..n {
                m[c * n + j] = self.mul(m[c * n + j], dinv);
                inv[c * n + j] = self.mul(inv[c * n + j], dinv);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = m[r * n + c];
                if f != 0 {
                    for j in 0..n {
                        m[r * n + j] = self.sub(m[r * n + j], self.mul(f, m[c * n + j]));
                        inv[r * n + j] = self.sub(inv[r * n + j], self.mul(f, inv[c * n + j]));
                    }
                }
            }
        }
        Some(FqMat { n, e: inv })
    }

    pub fn mat_pow(&self, a: &FqMat, e: i64) -> FqMat {
        let base = if e < 0 {
            self.mat_inv(a).expect("invertible")
        } else {
            a.clone()
        };
        let mut acc = self.mat_identity(a.n);
        let mut sq = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &sq);
            }
            sq = self.mat_mul(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, or `None` past `limit`.
    pub fn mat_order(&self, a: &FqMat, limit: u64) -> Option<u64> {
        let id = self.mat_identity(a.n);
        let mut x = a.clone();
        for i in 1..=limit {
            if x == id {
                return Some(i);
            }
            x = self.mat_mul(&x, a);
        }
        None
    }

    pub fn apply(&self, a: &FqMat, v: &[Fe]) -> Vec<Fe> {
        let n = a.n;
        (0..n)
            .map(|i| {
                (0..n).fold(0, |acc, j| self.add(acc, self.mul(a.e[i * n + j], v[j])))
            })
            .collect()
    }

    /// `x a x^{-1}`
    pub fn mat_conj(&self, x: &FqMat, a: &FqMat) -> FqMat {
        self.mat_mul(&self.mat_mul(x, a), &self.mat_inv(x).expect("invertible"))
    }

    /// Size of the group generated by `gens`, by closure over matrices.
    pub fn matrix_closure_order(&self, gens: &[FqMat], cap: usize) -> Result<usize, ConstructError> {
        Ok(self.matrix_closure(gens, cap)?.len())
    }

    /// Every element of the matrix group generated by `gens`.
    pub fn matrix_closure(&self, gens: &[FqMat], cap: usize) -> Result<Vec<FqMat>, ConstructError> {
        let n = gens.first().map_or(1, |g| g.n);
        let id = self.mat_identity(n);
        let mut seen: HashSet<FqMat> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mat_mul(g, &x);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(ConstructError::Group(
                            crate::group::GroupError::OrderCapExceeded { cap },
                        ));
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }
}

/// A matrix group realized faithfully as permutations of the orbit of the
/// standard basis vectors.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub field: Fq,
    pub generators: Vec<FqMat>,
    pub group: Group,
    pub points: Vec<Vec<Fe>>,
    point_index: HashMap<Vec<Fe>, usize>,
}

impl MatrixGroup {
    pub fn new(field: &Fq, gens: Vec<FqMat>, cap: usize) -> Result<MatrixGroup, ConstructError> {
        let n = gens.first().map_or(1, |g| g.n);
        for g in &gens {
            if field.det(g) == 0 {
                return Err(ConstructError::BadModulus(format!("singular generator {g:?}")));
            }
        }
        let mut points: Vec<Vec<Fe>> = Vec::new();
        let mut point_index: HashMap<Vec<Fe>, usize> = HashMap::new();
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            if !point_index.contains_key(&v) {
                point_index.insert(v.clone(), points.len());
                points.push(v);
            }
        }
        let mut head = 0;
        while head < points.len() {
            for g in &gens {
                let w = field.apply(g, &points[head]);
                if !point_index.contains_key(&w) {
                    point_index.insert(w.clone(), points.len());
                    points.push(w);
                }
            }
            head += 1;
        }
        let mut mg = MatrixGroup {
            field: field.clone(),
            generators: gens.clone(),
            group: Group::trivial(points.len().max(1)),
            points,
            point_index,
        };
        let perms = gens.iter().map(|g| mg.perm_of(g)).collect::<Option<Vec<_>>>().expect("orbit closed");
        mg.group = Group::from_generators_with_cap(mg.points.len(), perms, cap)?;
        Ok(mg)
    }

    /// The permutation induced on the orbit, if the matrix preserves it.
    pub fn perm_of(&self, m: &FqMat) -> Option<Perm> {
        let images = self
            .points
            .iter()
            .map(|v| self.point_index.get(&self.field.apply(m, v)).map(|&i| i as u32))
            .collect::<Option<Vec<_>>>()?;
        Perm::from_images(images).ok()
    }

    pub fn index_of_matrix(&self, m: &FqMat) -> Option<usize> {
        self.group.index_of(&self.perm_of(m)?)
    }

    /// Recovers the matrix of a group element from its action on the basis vectors.
    pub fn matrix_of(&self, idx: usize) -> FqMat {
        let n = self.generators.first().map_or(1, |g| g.n);
        let perm = self.group.element(idx);
        let mut e = vec![0; n * n];
        for j in 0..n {
            let col = &self.points[perm.apply(j)];
            for i in 0..n {
                e[i * n + j] = col[i];
            }
        }
        FqMat { n, e }
    }
}
