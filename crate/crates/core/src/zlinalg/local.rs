//! Linear algebra over the local rings `Z/p^k`.

use std::collections::HashSet;

/// Arithmetic in `Z/p^k` with `p^k < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalRing {
    pub p: u64,
    pub k: u32,
    pub q: u64,
}

impl LocalRing {
    pub fn new(p: u64, k: u32) -> LocalRing {
        let q = p.pow(k);
        assert!(q < (1 << 32), "modulus too large");
        LocalRing { p, k, q }
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a) % self.q
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// p-adic valuation, with `k` standing in for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut a = a;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv(&self, a: u64) -> u64 {
        let (g, x) = ext_gcd(a as i64, self.q as i64);
        assert_eq!(g, 1, "{a} is not a unit mod {}", self.q);
        self.reduce(x)
    }

    /// `b / a` where `v(a) <= v(b)`, choosing the representative `(b/p^v)·u^{-1}`.
    pub fn quotient(&self, b: u64, a: u64) -> u64 {
        let v = self.valuation(a);
        let pv = self.p.pow(v);
        debug_assert!(b.is_multiple_of(pv));
        self.mul((b / pv) % self.q, self.inv((a / pv) % self.q))
    }
}

/// Returns `(g, x)` with `a·x ≡ g (mod m)`.
fn ext_gcd(a: i64, m: i64) -> (i64, i64) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// Smith form over `Z/p^k` with `U·M·V = D`; diagonal entries are `p^v·unit`.
#[derive(Clone, Debug)]
pub struct LocalSnf {
    pub ring: LocalRing,
    /// valuations of the diagonal; `k` marks a zero entry; length `min(rows, cols)`
    pub valuations: Vec<u32>,
    pub diag: Vec<u64>,
    pub u: Vec<Vec<u64>>,
    pub u_inv: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
    pub v_inv: Vec<Vec<u64>>,
}

fn identity(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// Smith normal form over `Z/p^k`, pivoting on an entry of minimal valuation.
pub fn local_snf(ring: LocalRing, mat: &[Vec<u64>], cols: usize, transforms: bool) -> LocalSnf {
    let rows = mat.len();
    let mut a: Vec<Vec<u64>> = mat.iter().map(|r| r.iter().map(|&x| x % ring.q).collect()).collect();
    let (mut u, mut u_inv, mut v, mut v_inv) = if transforms {
        (identity(rows), identity(rows), identity(cols), identity(cols))
    } else {
        (Vec::new(), Vec::new(), Vec::new(), Vec::new())
    };
    let n = rows.min(cols);
    let mut valuations = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let val = ring.valuation(x);
                    if best.is_none_or(|b| val < b.0) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else {
            for _ in t..n {
                valuations.push(ring.k);
                diag.push(0);
            }
            break;
        };
        if pi != t {
            a.swap(pi, t);
            if transforms {
                u.swap(pi, t);
                for row in u_inv.iter_mut() {
                    row.swap(pi, t);
                }
            }
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            if transforms {
                for row in v.iter_mut() {
                    row.swap(pj, t);
                }
                v_inv.swap(pj, t);
            }
        }
        let piv = a[t][t];
        for i in t + 1..rows {
            if a[i][t] == 0 {
                continue;
            }
            let f = ring.quotient(a[i][t], piv);
            let (top, rest) = a.split_at_mut(i);
            let src = &top[t];
            for (x, &s) in rest[0].iter_mut().zip(src.iter()) {
                *x = ring.sub(*x, ring.mul(f, s));
            }
            if transforms {
                let (top, rest) = u.split_at_mut(i);
                for (x, &s) in rest[0].iter_mut().zip(top[t].iter()) {
                    *x = ring.sub(*x, ring.mul(f, s));
                }
                for row in u_inv.iter_mut() {
                    row[t] = ring.add(row[t], ring.mul(f, row[i]));
                }
            }
        }
        for j in t + 1..cols {
            if a[t][j] == 0 {
                continue;
            }
            let f = ring.quotient(a[t][j], piv);
            for row in a.iter_mut() {
                let s = row[t];
                row[j] = ring.sub(row[j], ring.mul(f, s));
            }
            if transforms {
                for row in v.iter_mut() {
                    let s = row[t];
                    row[j] = ring.sub(row[j], ring.mul(f, s));
                }
                let (top, rest) = v_inv.split_at_mut(j);
                for (x, &s) in top[t].iter_mut().zip(rest[0].iter()) {
                    *x = ring.add(*x, ring.mul(f, s));
                }
            }
        }
        valuations.push(val);
        diag.push(piv);
    }
    LocalSnf {
        ring,
        valuations,
        diag,
        u,
        u_inv,
        v,
        v_inv,
    }
}

/// A row over `Z/p^k`, sparse until it fills past 30% of the columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Row {
    Sparse(Vec<(u32, u32)>),
    Dense(Vec<u32>),
}

impl Row {
    fn get(&self, c: usize) -> u64 {
        match self {
            Row::Sparse(v) => v
                .binary_search_by_key(&(c as u32), |e| e.0)
                .map(|i| v[i].1 as u64)
                .unwrap_or(0),
            Row::Dense(v) => v[c] as u64,
        }
    }

    fn entries(&self) -> Vec<(usize, u64)> {
        match self {
            Row::Sparse(v) => v.iter().map(|&(c, x)| (c as usize, x as u64)).collect(),
            Row::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|e| *e.1 != 0)
                .map(|(c, &x)| (c, x as u64))
                .collect(),
        }
    }

    fn from_entries(mut e: Vec<(usize, u64)>, ncols: usize) -> Row {
        e.retain(|x| x.1 != 0);
        e.sort_unstable_by_key(|x| x.0);
        if e.len() * 10 > ncols * 3 {
            let mut d = vec![0u32; ncols];
            for (c, x) in e {
                d[c] = x as u32;
            }
            Row::Dense(d)
        } else {
            Row::Sparse(e.into_iter().map(|(c, x)| (c as u32, x as u32)).collect())
        }
    }
}

/// Dense accumulator for row reduction.
struct Scratch {
    vals: Vec<u64>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch {
            vals: vec![0; n],
            touched: Vec::new(),
            mark: vec![false; n],
        }
    }

    fn add(&mut self, ring: &LocalRing, c: usize, x: u64) {
        if !self.mark[c] {
            self.mark[c] = true;
            self.touched.push(c);
        }
        self.vals[c] = ring.add(self.vals[c], x);
    }

    fn drain(&mut self) -> Vec<(usize, u64)> {
        let mut out = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            if self.vals[c] != 0 {
                out.push((c, self.vals[c]));
            }
            self.vals[c] = 0;
            self.mark[c] = false;
        }
        self.touched.clear();
        out
    }
}

/// The solution module `{x : M x = 0}` over `Z/p^k` as a direct sum of cyclic pieces.
#[derive(Clone, Debug)]
pub struct LocalKernel {
    pub ring: LocalRing,
    pub ncols: usize,
    /// generators, each of order `p^orders_exp[i]`
    pub generators: Vec<Vec<u64>>,
    pub order_exponents: Vec<u32>,
    free_cols: Vec<usize>,
    /// per retained SNF slot: index into `v_inv` rows and the shift `k - v`
    slots: Vec<(usize, u32)>,
    v_inv: Vec<Vec<u64>>,
}

impl LocalKernel {
    pub fn size_log_p(&self) -> u32 {
        self.order_exponents.iter().sum()
    }

    /// Coordinates of a kernel element with respect to `generators`.
    pub fn coordinates(&self, x: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let y: Vec<u64> = self.free_cols.iter().map(|&c| x[c] % ring.q).collect();
        self.slots
            .iter()
            .zip(&self.order_exponents)
            .map(|(&(i, shift), &e)| {
                let z = self.v_inv[i]
                    .iter()
                    .zip(&y)
                    .fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)));
                let s = ring.p.pow(shift);
                debug_assert_eq!(z % s, 0, "vector not in kernel");
                (z / s) % ring.p.pow(e)
            })
            .collect()
    }

    pub fn combine(&self, coords: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0u64; self.ncols];
        for (g, &c) in self.generators.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(g) {
                *o = ring.add(*o, ring.mul(c % ring.q, x));
            }
        }
        out
    }
}

/// Streaming elimination for `{x : M x = 0}` over `Z/p^k`.
///
/// Rows with a unit entry become pivots of a reduced row echelon form.
/// Rows whose entries are all divisible by `p` are set aside and handled
/// by a Smith form on the free columns at the end.
pub struct LocalKernelSolver {
    ring: LocalRing,
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<(usize, Row)>,
    deferred: Vec<Row>,
    deferred_seen: HashSet<Row>,
    scratch: Scratch,
    compress_at: usize,
}

impl LocalKernelSolver {
    pub fn new(ring: LocalRing, ncols: usize) -> LocalKernelSolver {
        LocalKernelSolver {
            ring,
            ncols,
            pivot_row: vec![None; ncols],
            rows: Vec::new(),
            deferred: Vec::new(),
            deferred_seen: HashSet::new(),
            scratch: Scratch::new(ncols),
            compress_at: 4 * ncols.max(16),
        }
    }

    pub fn rank_so_far(&self) -> usize {
        self.rows.len()
    }

    /// Reduces a row against the current pivots, returning entries in free columns only.
    fn reduce(&mut self, entries: &[(usize, u64)]) -> Vec<(usize, u64)> {
        let ring = self.ring;
        let mut hits = Vec::new();
        for &(c, x) in entries {
            let x = x % ring.q;
            if x == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => hits.push((r, x)),
                None => self.scratch.add(&ring, c, x),
            }
        }
        for (r, x) in hits {
            let f = ring.neg(x);
            let (pc, row) = &self.rows[r];
            for (c, y) in row.entries() {
                if c != *pc {
                    self.scratch.add(&ring, c, ring.mul(f, y));
                }
            }
        }
        self.scratch.drain()
    }

    pub fn add_row(&mut self, entries: &[(usize, u64)]) {
        let ring = self.ring;
        let red = self.reduce(entries);
        if red.is_empty() {
            return;
        }
        let Some(&(pc, pv)) = red.iter().find(|e| ring.is_unit(e.1)) else {
            let row = Row::from_entries(red, self.ncols);
            if self.deferred_seen.insert(row.clone()) {
                self.deferred.push(row);
                if self.deferred.len() >= self.compress_at {
                    self.compress();
                }
            }
            return;
        };
        let inv = ring.inv(pv);
        let normalized: Vec<(usize, u64)> = red.into_iter().map(|(c, x)| (c, ring.mul(inv, x))).collect();
        let new_row = Row::from_entries(normalized.clone(), self.ncols);
        for i in 0..self.rows.len() {
            let x = self.rows[i].1.get(pc);
            if x == 0 {
                continue;
            }
            let f = ring.neg(x);
            let mut e = self.rows[i].1.entries();
            e.retain(|&(c, _)| c != pc);
            for &(c, y) in &normalized {
                if c != pc {
                    e.push((c, ring.mul(f, y)));
                }
            }
            let merged = merge(&ring, e);
            self.rows[i].1 = Row::from_entries(merged, self.ncols);
        }
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push((pc, new_row));
    }

    /// Re-reduces the deferred rows and replaces them by an echelon basis of their span.
    fn compress(&mut self) {
        let old = std::mem::take(&mut self.deferred);
        self.deferred_seen.clear();
        let mut reduced: Vec<Vec<(usize, u64)>> = Vec::new();
        for r in old {
            let red = self.reduce(&r.entries());
            if !red.is_empty() {
                reduced.push(red);
            }
        }
        let basis = valuation_echelon(&self.ring, reduced, self.ncols);
        for r in basis {
            let row = Row::from_entries(r, self.ncols);
            if self.deferred_seen.insert(row.clone()) {
                self.deferred.push(row);
            }
        }
        self.compress_at = (self.deferred.len() * 2).max(4 * self.ncols.max(16));
    }

    pub fn finalize(mut self) -> LocalKernel {
        let ring = self.ring;
        self.compress();
        let free_cols: Vec<usize> = (0..self.ncols).filter(|&c| self.pivot_row[c].is_none()).collect();
        let mut pos = vec![usize::MAX; self.ncols];
        for (i, &c) in free_cols.iter().enumerate() {
            pos[c] = i;
        }
        let nf = free_cols.len();
        let dmat: Vec<Vec<u64>> = self
            .deferred
            .iter()
            .map(|r| {
                let mut d = vec![0u64; nf];
                for (c, x) in r.entries() {
                    debug_assert!(pos[c] != usize::MAX);
                    d[pos[c]] = x;
                }
                d
            })
            .collect();
        let snf = local_snf(ring, &dmat, nf, true);
        // slot i < nf has diagonal valuation valuations[i] (k when beyond the rank)
        let mut generators = Vec::new();
        let mut order_exponents = Vec::new();
        let mut slots = Vec::new();
        for i in 0..nf {
            let val = snf.valuations.get(i).copied().unwrap_or(ring.k);
            if val == 0 {
                continue;
            }
            let shift = ring.k - val;
            let scale = ring.p.pow(shift) % ring.q;
            let y: Vec<u64> = (0..nf).map(|r| ring.mul(snf.v[r][i], scale)).collect();
            let mut x = vec![0u64; self.ncols];
            for (j, &c) in free_cols.iter().enumerate() {
                x[c] = y[j];
            }
            for (pc, row) in &self.rows {
                let mut acc = 0;
                for (c, a) in row.entries() {
                    if c != *pc {
                        acc = ring.add(acc, ring.mul(a, x[c]));
                    }
                }
                x[*pc] = ring.neg(acc);
            }
            generators.push(x);
            order_exponents.push(val);
            slots.push((i, shift));
        }
        LocalKernel {
            ring,
            ncols: self.ncols,
            generators,
            order_exponents,
            free_cols,
            slots,
            v_inv: snf.v_inv,
        }
    }
}

fn merge(ring: &LocalRing, mut e: Vec<(usize, u64)>) -> Vec<(usize, u64)> {
    e.sort_unstable_by_key(|x| x.0);
    let mut out: Vec<(usize, u64)> = Vec::with_capacity(e.len());
    for (c, x) in e {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = ring.add(last.1, x),
            _ => out.push((c, x)),
        }
    }
    out.retain(|x| x.1 != 0);
    out
}

/// Row-span-preserving echelon form over `Z/p^k`: repeatedly pick an entry
/// of minimal valuation and clear its column from the remaining rows.
pub fn valuation_echelon(
    ring: &LocalRing,
    rows: Vec<Vec<(usize, u64)>>,
    ncols: usize,
) -> Vec<Vec<(usize, u64)>> {
    let mut dense: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![0u64; ncols];
            for (c, x) in r {
                d[c] = ring.add(d[c], x);
            }
            d
        })
        .collect();
    let mut out = Vec::new();
    loop {
        dense.retain(|r| r.iter().any(|&x| x != 0));
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, r) in dense.iter().enumerate() {
            for (c, &x) in r.iter().enumerate() {
                if x != 0 {
                    let v = ring.valuation(x);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, c));
                    }
                }
            }
        }
        let Some((_, pi, pc)) = best else { break };
        let piv = dense.swap_remove(pi);
        for r in dense.iter_mut() {
            if r[pc] != 0 {
                let f = ring.quotient(r[pc], piv[pc]);
                for (x, &s) in r.iter_mut().zip(&piv) {
                    *x = ring.sub(*x, ring.mul(f, s));
                }
            }
        }
        out.push(
            piv.into_iter()
                .enumerate()
                .filter(|e| e.1 != 0)
                .collect(),
        );
    }
    out
}
