//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseIntMatrix;

/// `U·M·V = diag(d_1, .., d_r, 0, ..)` with `d_i | d_{i+1}` and `d_i > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// nonzero diagonal entries, including any 1s
    pub diagonal: Vec<BigInt>,
    pub transforms: Option<SmithTransforms>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithTransforms {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors of the cokernel: the diagonal entries greater than 1.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.rows - self.rank()
    }
}

trait SnfInt: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn is_negative(&self) -> bool;
    /// `self - q * other`
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// nearest integer to `self / d`
    fn div_round(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    fn from_i64(x: i64) -> Self;
    fn to_big(&self) -> BigInt;
}

impl SnfInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*other)?)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_round(&self, d: &Self) -> Self {
        let (q, r) = (self.div_euclid(*d), self.rem_euclid(*d));
        if 2 * r > d.abs() {
            q + d.signum()
        } else {
            q
        }
    }
    fn divides(&self, x: &Self) -> bool {
        x % self == 0
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        Some(self - q * other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_round(&self, d: &Self) -> Self {
        let (q, r) = self.div_mod_floor(&d.abs());
        let q = if r.clone() * 2u32 > d.abs() { q + 1u32 } else { q };
        if Signed::is_negative(d) {
            -q
        } else {
            q
        }
    }
    fn divides(&self, x: &Self) -> bool {
        x.is_multiple_of(self)
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Work<T> {
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    track: bool,
}

impl<T: SnfInt> Work<T> {
    fn row_axpy(&mut self, dst: usize, q: &T, src: usize) -> Option<()> {
        for j in 0..self.a[0].len() {
            let s = self.a[src][j].clone();
            if !s.is_zero() {
                self.a[dst][j] = self.a[dst][j].sub_mul(q, &s)?;
            }
        }
        if self.track {
            for j in 0..self.u[0].len() {
                let s = self.u[src][j].clone();
                if !s.is_zero() {
                    self.u[dst][j] = self.u[dst][j].sub_mul(q, &s)?;
                }
            }
        }
        Some(())
    }

    fn col_axpy(&mut self, dst: usize, q: &T, src: usize) -> Option<()> {
        for row in self.a.iter_mut() {
            let s = row[src].clone();
            if !s.is_zero() {
                row[dst] = row[dst].sub_mul(q, &s)?;
            }
        }
        if self.track {
            for row in self.v.iter_mut() {
                let s = row[src].clone();
                if !s.is_zero() {
                    row[dst] = row[dst].sub_mul(q, &s)?;
                }
            }
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if self.track {
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if self.track {
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        if self.track {
            for x in self.u[i].iter_mut() {
                *x = x.neg()?;
            }
        }
        Some(())
    }
}

fn identity<T: SnfInt>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

fn snf_generic<T: SnfInt>(m: &SparseIntMatrix, track: bool) -> Option<SmithForm> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = vec![vec![T::zero(); cols]; rows];
    for &(r, c, x) in m.entries() {
        a[r][c] = T::from_i64(x);
    }
    let mut w = Work {
        a,
        u: if track { identity(rows) } else { Vec::new() },
        v: if track { identity(cols) } else { Vec::new() },
        track,
    };
    let n = rows.min(cols);
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < n {
        loop {
            // least nonzero absolute value in the trailing block, keeping the pivot on ties
            let mut best = (!w.a[t][t].is_zero()).then_some((t, t));
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs_lt(&w.a[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut dirty = false;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_round(&w.a[t][t]);
                    w.row_axpy(i, &q, t)?;
                    dirty |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_round(&w.a[t][t]);
                    w.col_axpy(j, &q, t)?;
                    dirty |= !w.a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let piv = w.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !piv.divides(&w.a[i][j])));
            match bad {
                Some(i) => {
                    let minus_one = T::one().neg()?;
                    w.row_axpy(t, &minus_one, i)?;
                }
                None => break,
            }
        }
        if w.a[t][t].is_zero() {
            break;
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t)?;
        }
        diagonal.push(w.a[t][t].to_big());
        t += 1;
    }
    let transforms = track.then(|| SmithTransforms {
        u: w.u.iter().map(|r| r.iter().map(T::to_big).collect()).collect(),
        v: w.v.iter().map(|r| r.iter().map(T::to_big).collect()).collect(),
    });
    Some(SmithForm {
        rows,
        cols,
        diagonal,
        transforms,
    })
}

/// Rank and a nonzero maximal minor, by fraction-free elimination.
fn rank_and_minor(m: &SparseIntMatrix) -> (usize, BigInt) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = vec![vec![BigInt::from(0); cols]; rows];
    for &(r, c, x) in m.entries() {
        a[r][c] = BigInt::from(x);
    }
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if !Zero::is_zero(x) && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..cols {
                row[j] = (&pivot_row[k] * &row[j] - &f * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::from(0);
        }
        prev = pivot_row[k].clone();
        rank = k + 1;
    }
    (rank, prev.abs())
}

/// Diagonal of the Smith form over `Z/n`, as divisors of `n` below `n`.
fn snf_mod<T: Integer + Signed + Clone>(m: &SparseIntMatrix, n: T, conv: impl Fn(i64) -> T) -> Vec<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let red = |x: T| x.mod_floor(&n);
    let mut a = vec![vec![T::zero(); cols]; rows];
    for &(r, c, x) in m.entries() {
        a[r][c] = red(conv(x));
    }
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, T)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let g = x.gcd(&n);
                if best.as_ref().is_none_or(|b| g < b.2) {
                    best = Some((i, j, g));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            for i in t + 1..rows {
                let b = a[i][t].clone();
                if b.is_zero() {
                    continue;
                }
                let p = a[t][t].clone();
                if b.is_multiple_of(&p) {
                    let q = b / p;
                    for j in t..cols {
                        a[i][j] = red(a[i][j].clone() - q.clone() * a[t][j].clone());
                    }
                    continue;
                }
                let e = p.extended_gcd(&b);
                let (pg, bg) = (p / e.gcd.clone(), b / e.gcd.clone());
                for j in t..cols {
                    let (x, y) = (a[t][j].clone(), a[i][j].clone());
                    a[t][j] = red(e.x.clone() * x.clone() + e.y.clone() * y.clone());
                    a[i][j] = red(pg.clone() * y - bg.clone() * x);
                }
            }
            for j in t + 1..cols {
                let b = a[t][j].clone();
                if b.is_zero() {
                    continue;
                }
                let p = a[t][t].clone();
                if b.is_multiple_of(&p) {
                    let q = b / p;
                    for row in a.iter_mut().skip(t) {
                        row[j] = red(row[j].clone() - q.clone() * row[t].clone());
                    }
                    continue;
                }
                let e = p.extended_gcd(&b);
                let (pg, bg) = (p / e.gcd.clone(), b / e.gcd.clone());
                for row in a.iter_mut().skip(t) {
                    let (x, y) = (row[t].clone(), row[j].clone());
                    row[t] = red(e.x.clone() * x.clone() + e.y.clone() * y.clone());
                    row[j] = red(pg.clone() * y - bg.clone() * x);
                }
            }
            if (t + 1..rows).any(|i| !a[i][t].is_zero()) {
                continue;
            }
            let d = a[t][t].gcd(&n);
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&d)));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = red(a[t][j].clone() + a[i][j].clone());
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].gcd(&n));
    }
    diagonal
}

/// Smith form without transforms: the rank and a maximal minor `D` come from
/// fraction-free elimination, and the invariant factors, all dividing `D`,
/// are read off modulo `2D`.
fn snf_modular(m: &SparseIntMatrix) -> SmithForm {
    let (rank, minor) = rank_and_minor(m);
    let n = minor * 2u32;
    let diagonal: Vec<BigInt> = if rank == 0 {
        Vec::new()
    } else if let Ok(small) = i128::try_from(&n).map_err(|_| ()).and_then(|v| if v < 1 << 62 { Ok(v) } else { Err(()) }) {
        snf_mod(m, small, i128::from).into_iter().map(BigInt::from).collect()
    } else {
        snf_mod(m, n, BigInt::from)
    };
    debug_assert_eq!(diagonal.len(), rank);
    SmithForm {
        rows: m.rows(),
        cols: m.cols(),
        diagonal,
        transforms: None,
    }
}

/// Smith normal form. With transforms, overflow in the `i128` pass falls back to arbitrary precision.
pub fn smith_normal_form(m: &SparseIntMatrix, transforms: bool) -> SmithForm {
    if !transforms {
        return snf_modular(m);
    }
    snf_generic::<i128>(m, transforms)
        .unwrap_or_else(|| snf_generic::<BigInt>(m, transforms).expect("bigint never overflows"))
}

/// Forces the arbitrary-precision path, for cross-checking.
pub fn smith_normal_form_bigint(m: &SparseIntMatrix, transforms: bool) -> SmithForm {
    snf_generic::<BigInt>(m, transforms).expect("bigint never overflows")
}

/// Left kernel `{x : x·M = 0}` over the integers, as a basis of row vectors.
pub fn integer_left_kernel(m: &SparseIntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(m, true);
    let rank = s.rank();
    let t = s.transforms.expect("requested");
    t.u[rank..].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transforms(m: &SparseIntMatrix, s: &SmithForm) {
        let t = s.transforms.as_ref().unwrap();
        let a = m.to_dense();
        let (r, c) = (m.rows(), m.cols());
        for i in 0..r {
            for j in 0..c {
                let mut acc = BigInt::from(0);
                for k in 0..r {
                    for l in 0..c {
                        acc += &t.u[i][k] * BigInt::from(a[k][l]) * &t.v[l][j];
                    }
                }
                let expect = if i == j && i < s.rank() {
                    s.diagonal[i].clone()
                } else {
                    BigInt::from(0)
                };
                assert_eq!(acc, expect, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn diag_two_three() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m, true);
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        check_transforms(&m, &s);
    }

    #[test]
    fn rank_one() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 4], vec![4, 8]]);
        let s = smith_normal_form(&m, true);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(s.free_rank(), 1);
        check_transforms(&m, &s);
    }

    #[test]
    fn zero_matrix() {
        let m = SparseIntMatrix::new(2, 2, vec![]);
        let s = smith_normal_form(&m, true);
        assert!(s.diagonal.is_empty());
        assert_eq!(s.free_rank(), 2);
    }

    #[test]
    fn bigint_path_agrees() {
        let m = SparseIntMatrix::from_dense(&[vec![6, 4, 2], vec![9, -3, 12], vec![1, 1, 1]]);
        let a = smith_normal_form(&m, true);
        let b = smith_normal_form_bigint(&m, true);
        assert_eq!(a.diagonal, b.diagonal);
        check_transforms(&m, &b);
    }

    #[test]
    fn dense_matrix_stays_small() {
        let m = SparseIntMatrix::from_dense(&[
            vec![-16, 15, -18, 3, -1, 3],
            vec![10, -3, 5, -14, 15, -13],
            vec![2, 9, 4, -4, -14, -20],
            vec![-8, 10, -7, -13, 10, -4],
            vec![11, 6, 12, 18, -16, -13],
            vec![3, -18, -9, 6, -3, -9],
            vec![-9, -11, 17, -16, 18, 11],
        ]);
        let a = smith_normal_form(&m, false);
        assert_eq!(a.invariant_factors(), vec![BigInt::from(3)]);
        assert_eq!(a.rank(), 6);
        let b = smith_normal_form(&m, true);
        assert_eq!(a.diagonal, b.diagonal);
        check_transforms(&m, &b);
    }

    #[test]
    fn left_kernel() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let k = integer_left_kernel(&m);
        assert_eq!(k.len(), 1);
        let a = m.to_dense();
        for j in 0..2 {
            let s: BigInt = (0..3).map(|i| &k[0][i] * BigInt::from(a[i][j])).sum();
            assert_eq!(s, BigInt::from(0));
        }
    }
}
