//! Exact integer and rational linear algebra on dense matrices.
//!
//! All public entry points take and return arbitrary-precision integers.
//! Internally each algorithm first runs on a checked `i64` engine and falls
//! back to `BigInt` when any entry or intermediate value would overflow, so
//! results are always exact. Column-style Hermite normal form (lower
//! triangular, positive diagonal, off-diagonal entries reduced) is the one
//! canonical basis convention used across the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number (normalized `BigInt` fraction).
pub type Rational = num_rational::BigRational;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Smith normal form `left * m * right = diag` with unimodular transforms.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Convenience constructor from machine integers, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * k)
    }

    /// Gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for e in &self.data {
            if !e.is_zero() {
                g = g.gcd(e);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    /// Divides every entry by `k`, which must divide exactly.
    pub fn div_exact(&self, k: &BigInt) -> IntMatrix {
        assert!(!k.is_zero());
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (q, r) = self[(i, j)].div_rem(k);
            assert!(r.is_zero(), "inexact matrix division");
            q
        })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn submatrix_cols(&self, lo: usize, hi: usize) -> IntMatrix {
        IntMatrix::from_fn(self.rows, hi - lo, |i, j| self[(i, j + lo)].clone())
    }

    pub fn submatrix_rows(&self, lo: usize, hi: usize) -> IntMatrix {
        IntMatrix::from_fn(hi - lo, self.cols, |i, j| self[(i + lo, j)].clone())
    }

    fn to_i64(&self) -> Option<MatBuf<i64>> {
        let mut v = Vec::with_capacity(self.data.len());
        for e in &self.data {
            v.push(i64::try_from(e).ok()?);
        }
        Some(MatBuf { rows: self.rows, cols: self.cols, v })
    }

    fn to_big(&self) -> MatBuf<BigInt> {
        MatBuf { rows: self.rows, cols: self.cols, v: self.data.clone() }
    }

    /// Unique column-style Hermite normal form of a full-column-rank matrix:
    /// pivots positive and strictly descending by row, zero entries to the
    /// right of each pivot, entries to the left of a pivot reduced into
    /// `[0, pivot)`. For a nonsingular square matrix this is the lower
    /// triangular form with positive diagonal. The column span is preserved.
    pub fn hnf_columns(&self) -> Result<IntMatrix> {
        if let Some(mut buf) = self.to_i64() {
            if let Some(pivots) = hnf_engine(&mut buf, None) {
                if pivots.len() < self.cols {
                    return Err(Error::RankDeficient);
                }
                return Ok(buf.to_matrix());
            }
        }
        let mut buf = self.to_big();
        let pivots = hnf_engine(&mut buf, None).expect("bigint engine cannot overflow");
        if pivots.len() < self.cols {
            return Err(Error::RankDeficient);
        }
        Ok(buf.to_matrix())
    }

    /// Basis of the full integer kernel lattice `{x : m x = 0}`, returned in
    /// column HNF. The result has zero columns when the kernel is trivial.
    pub fn integer_kernel(&self) -> IntMatrix {
        if let Some(mut buf) = self.to_i64() {
            let mut v = MatBuf::<i64>::identity(self.cols);
            if let Some(pivots) = hnf_engine(&mut buf, Some(&mut v)) {
                let rank = pivots.len();
                let mut ker = v.to_matrix().submatrix_cols(rank, self.cols);
                if ker.cols() > 0 {
                    ker = ker.hnf_columns().expect("kernel basis is independent");
                }
                return ker;
            }
        }
        let mut buf = self.to_big();
        let mut v = MatBuf::<BigInt>::identity(self.cols);
        let pivots = hnf_engine(&mut buf, Some(&mut v)).expect("bigint engine cannot overflow");
        let rank = pivots.len();
        let mut ker = v.to_matrix().submatrix_cols(rank, self.cols);
        if ker.cols() > 0 {
            ker = ker.hnf_columns().expect("kernel basis is independent");
        }
        ker
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(BigInt::one());
        }
        if let Some(buf) = self.to_i64() {
            if let Some(d) = bareiss_det(buf) {
                return Ok(BigInt::from(d));
            }
        }
        Ok(bareiss_det(self.to_big()).expect("bigint engine cannot overflow"))
    }

    /// Smith normal form with unimodular transforms and the divisibility
    /// chain `d1 | d2 | ...` on the diagonal.
    pub fn snf(&self) -> Result<Snf> {
        if let Some(buf) = self.to_i64() {
            if let Some((d, l, r)) = snf_engine(buf) {
                return Ok(Snf { diag: d.to_matrix(), left: l.to_matrix(), right: r.to_matrix() });
            }
        }
        let (d, l, r) = snf_engine(self.to_big()).expect("bigint engine cannot overflow");
        Ok(Snf { diag: d.to_matrix(), left: l.to_matrix(), right: r.to_matrix() })
    }

    /// Inverse of a nonsingular square matrix as `(adj, den)` with
    /// `self * adj = den * I` and `den = det(self)`.
    pub fn inverse_scaled(&self) -> Result<(IntMatrix, BigInt)> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(Error::RankDeficient);
        }
        let n = self.rows;
        // Gauss-Jordan over exact rationals on [self | I].
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rational::from_integer(self[(i, j)].clone())
                        } else if j - n == i {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .ok_or(Error::RankDeficient)?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for j in col..2 * n {
                a[col][j] = &a[col][j] / &p;
            }
            for i in 0..n {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in col..2 * n {
                        let t = &f * &a[col][j];
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
        }
        let adj = IntMatrix::from_fn(n, n, |i, j| {
            let r = &a[i][j + n] * Rational::from_integer(det.clone());
            assert!(r.is_integer(), "scaled inverse must be integral");
            r.to_integer()
        });
        Ok((adj, det))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Integer arithmetic abstraction for the elimination engines. Every
/// operation reports overflow; the `BigInt` instance never overflows and is
/// the fallback, the `i64` instance is the fast path.
pub(crate) trait Ring: Sized + Clone + Eq + Ord + std::fmt::Debug {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg_c(&self) -> Option<Self>;
    fn add_c(&self, o: &Self) -> Option<Self>;
    fn sub_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    /// Floor division, `o` nonzero.
    fn div_floor_c(&self, o: &Self) -> Option<Self>;
    /// Exact division, caller guarantees divisibility.
    fn div_exact_c(&self, o: &Self) -> Option<Self>;
    /// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s a + t b = g`.
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)>;
    fn abs_cmp(&self, o: &Self) -> std::cmp::Ordering;
}

impl Ring for BigInt {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn add_c(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_floor_c(&self, o: &Self) -> Option<Self> {
        Some(self.div_floor(o))
    }
    fn div_exact_c(&self, o: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(o);
        debug_assert!(Zero::is_zero(&r), "inexact division in fraction-free step");
        Some(q)
    }
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(o);
        Some((e.gcd, e.x, e.y))
    }
    fn abs_cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.abs().cmp(&o.abs())
    }
}

impl Ring for i64 {
    fn r_zero() -> Self {
        0
    }
    fn r_one() -> Self {
        1
    }
    fn r_is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg_c(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add_c(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_floor_c(&self, o: &Self) -> Option<Self> {
        if *self == i64::MIN && *o == -1 {
            return None;
        }
        Some(self.div_floor(o))
    }
    fn div_exact_c(&self, o: &Self) -> Option<Self> {
        if *self == i64::MIN && *o == -1 {
            return None;
        }
        debug_assert_eq!(self % o, 0, "inexact division in fraction-free step");
        Some(self / o)
    }
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        // Run in i128: Bezout coefficients stay within max(|a|, |b|).
        let (mut r0, mut r1) = (*self as i128, *o as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 < 0 {
            r0 = -r0;
            s0 = -s0;
            t0 = -t0;
        }
        Some((i64::try_from(r0).ok()?, i64::try_from(s0).ok()?, i64::try_from(t0).ok()?))
    }
    fn abs_cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.unsigned_abs().cmp(&o.unsigned_abs())
    }
}

pub(crate) struct MatBuf<T> {
    rows: usize,
    cols: usize,
    v: Vec<T>,
}

impl<T: Ring> MatBuf<T> {
    fn identity(n: usize) -> Self {
        let mut v = vec![T::r_zero(); n * n];
        for i in 0..n {
            v[i * n + i] = T::r_one();
        }
        MatBuf { rows: n, cols: n, v }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.v[i * self.cols + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, x: T) {
        self.v[i * self.cols + j] = x;
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.v.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn col_neg(&mut self, j: usize) -> Option<()> {
        for i in 0..self.rows {
            let x = self.at(i, j).neg_c()?;
            self.set(i, j, x);
        }
        Some(())
    }

    /// `col_d += k * col_s`
    fn col_addmul(&mut self, d: usize, s: usize, k: &T) -> Option<()> {
        if k.r_is_zero() {
            return Some(());
        }
        for i in 0..self.rows {
            let t = self.at(i, s).mul_c(k)?;
            let x = self.at(i, d).add_c(&t)?;
            self.set(i, d, x);
        }
        Some(())
    }

    /// `(col_a, col_b) <- (p*col_a + q*col_b, r*col_a + s*col_b)`
    fn col_transform2(&mut self, a: usize, b: usize, p: &T, q: &T, r: &T, s: &T) -> Option<()> {
        for i in 0..self.rows {
            let x = self.at(i, a);
            let y = self.at(i, b);
            let nx = x.mul_c(p)?.add_c(&y.mul_c(q)?)?;
            let ny = x.mul_c(r)?.add_c(&y.mul_c(s)?)?;
            self.set(i, a, nx);
            self.set(i, b, ny);
        }
        Some(())
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.v.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn row_neg(&mut self, i: usize) -> Option<()> {
        for j in 0..self.cols {
            let x = self.at(i, j).neg_c()?;
            self.set(i, j, x);
        }
        Some(())
    }

    fn row_addmul(&mut self, d: usize, s: usize, k: &T) -> Option<()> {
        if k.r_is_zero() {
            return Some(());
        }
        for j in 0..self.cols {
            let t = self.at(s, j).mul_c(k)?;
            let x = self.at(d, j).add_c(&t)?;
            self.set(d, j, x);
        }
        Some(())
    }

    fn row_transform2(&mut self, a: usize, b: usize, p: &T, q: &T, r: &T, s: &T) -> Option<()> {
        for j in 0..self.cols {
            let x = self.at(a, j);
            let y = self.at(b, j);
            let nx = x.mul_c(p)?.add_c(&y.mul_c(q)?)?;
            let ny = x.mul_c(r)?.add_c(&y.mul_c(s)?)?;
            self.set(a, j, nx);
            self.set(b, j, ny);
        }
        Some(())
    }
}

pub(crate) trait IntoBig {
    fn into_big(self) -> BigInt;
}

impl IntoBig for i64 {
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl IntoBig for BigInt {
    fn into_big(self) -> BigInt {
        self
    }
}

impl<T: Ring + IntoBig> MatBuf<T> {
    fn to_matrix(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.v.into_iter().map(IntoBig::into_big).collect(),
        }
    }
}

/// `a | b` for nonzero `a`, overflow-checked.
fn divides<T: Ring>(a: &T, b: &T) -> Option<bool> {
    let q = b.div_floor_c(a)?;
    Some(b.sub_c(&q.mul_c(a)?)?.r_is_zero())
}

/// Column HNF reduction in place; mirrors every column operation on the
/// optional transform matrix. Returns the pivot row of each pivot column,
/// or `None` on overflow.
pub(crate) fn hnf_engine<T: Ring>(
    w: &mut MatBuf<T>,
    mut trans: Option<&mut MatBuf<T>>,
) -> Option<Vec<usize>> {
    let (rows, cols) = (w.rows, w.cols);
    let mut pivots: Vec<usize> = Vec::new();
    let mut pc = 0usize;
    for row in 0..rows {
        if pc == cols {
            break;
        }
        // Collapse the entries of this row (columns pc..) to one nonzero.
        let mut lead: Option<usize> = None;
        for j in pc..cols {
            if !w.at(row, j).r_is_zero() {
                match lead {
                    None => lead = Some(j),
                    Some(l) => {
                        let a = w.at(row, l).clone();
                        let b = w.at(row, j).clone();
                        if divides(&a, &b)? {
                            let k = b.div_exact_c(&a)?.neg_c()?;
                            w.col_addmul(j, l, &k)?;
                            if let Some(tr) = trans.as_deref_mut() {
                                tr.col_addmul(j, l, &k)?;
                            }
                        } else {
                            let (g, s, t) = a.xgcd(&b)?;
                            let bg = b.div_exact_c(&g)?.neg_c()?;
                            let ag = a.div_exact_c(&g)?;
                            w.col_transform2(l, j, &s, &t, &bg, &ag)?;
                            if let Some(tr) = trans.as_deref_mut() {
                                tr.col_transform2(l, j, &s, &t, &bg, &ag)?;
                            }
                        }
                    }
                }
            }
        }
        let Some(l) = lead else { continue };
        w.col_swap(pc, l);
        if let Some(tr) = trans.as_deref_mut() {
            tr.col_swap(pc, l);
        }
        if w.at(row, pc).is_neg() {
            w.col_neg(pc)?;
            if let Some(tr) = trans.as_deref_mut() {
                tr.col_neg(pc)?;
            }
        }
        // Reduce the entries left of the pivot into [0, pivot).
        let p = w.at(row, pc).clone();
        for j in 0..pc {
            let q = w.at(row, j).div_floor_c(&p)?;
            if !q.r_is_zero() {
                let k = q.neg_c()?;
                w.col_addmul(j, pc, &k)?;
                if let Some(tr) = trans.as_deref_mut() {
                    tr.col_addmul(j, pc, &k)?;
                }
            }
        }
        pivots.push(row);
        pc += 1;
    }
    Some(pivots)
}

/// Fraction-free (Bareiss) determinant; consumes the buffer.
fn bareiss_det<T: Ring>(mut w: MatBuf<T>) -> Option<T> {
    let n = w.rows;
    let mut sign_neg = false;
    let mut prev = T::r_one();
    for k in 0..n {
        if w.at(k, k).r_is_zero() {
            let Some(r) = (k + 1..n).find(|&i| !w.at(i, k).r_is_zero()) else {
                return Some(T::r_zero());
            };
            w.row_swap(k, r);
            sign_neg = !sign_neg;
        }
        if k == n - 1 {
            break;
        }
        let pk = w.at(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let a = w.at(i, j).mul_c(&pk)?;
                let b = w.at(i, k).mul_c(w.at(k, j))?;
                let x = a.sub_c(&b)?.div_exact_c(&prev)?;
                w.set(i, j, x);
            }
            w.set(i, k, T::r_zero());
        }
        prev = pk;
    }
    let d = w.at(n - 1, n - 1).clone();
    if sign_neg {
        d.neg_c()
    } else {
        Some(d)
    }
}

/// Smith normal form engine. Returns `(diag, left, right)` such that
/// `left * input * right = diag` with the divisibility chain on the diagonal.
#[allow(clippy::type_complexity)]
fn snf_engine<T: Ring>(mut w: MatBuf<T>) -> Option<(MatBuf<T>, MatBuf<T>, MatBuf<T>)> {
    let (rows, cols) = (w.rows, w.cols);
    let mut left = MatBuf::<T>::identity(rows);
    let mut right = MatBuf::<T>::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        // Move a nonzero entry of smallest magnitude to the pivot seat.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.at(i, j).r_is_zero()
                    && best.is_none_or(|(bi, bj)| {
                        w.at(i, j).abs_cmp(w.at(bi, bj)) == std::cmp::Ordering::Less
                    })
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.row_swap(t, bi);
        left.row_swap(t, bi);
        w.col_swap(t, bj);
        right.col_swap(t, bj);
        loop {
            // Clear column t below the pivot. A plain elimination step is
            // used when the pivot divides the entry: it keeps the pivot row
            // fixed, which the general transform does not guarantee (a unit
            // pivot could swap rows forever). The gcd transform strictly
            // shrinks the pivot, so the outer loop terminates.
            for i in t + 1..rows {
                if w.at(i, t).r_is_zero() {
                    continue;
                }
                let a = w.at(t, t).clone();
                let b = w.at(i, t).clone();
                if divides(&a, &b)? {
                    let k = b.div_exact_c(&a)?.neg_c()?;
                    w.row_addmul(i, t, &k)?;
                    left.row_addmul(i, t, &k)?;
                } else {
                    let (g, s, tt) = a.xgcd(&b)?;
                    let bg = b.div_exact_c(&g)?.neg_c()?;
                    let ag = a.div_exact_c(&g)?;
                    w.row_transform2(t, i, &s, &tt, &bg, &ag)?;
                    left.row_transform2(t, i, &s, &tt, &bg, &ag)?;
                }
            }
            // Clear row t right of the pivot, same strategy with columns.
            for j in t + 1..cols {
                if w.at(t, j).r_is_zero() {
                    continue;
                }
                let a = w.at(t, t).clone();
                let b = w.at(t, j).clone();
                if divides(&a, &b)? {
                    let k = b.div_exact_c(&a)?.neg_c()?;
                    w.col_addmul(j, t, &k)?;
                    right.col_addmul(j, t, &k)?;
                } else {
                    let (g, s, tt) = a.xgcd(&b)?;
                    let bg = b.div_exact_c(&g)?.neg_c()?;
                    let ag = a.div_exact_c(&g)?;
                    w.col_transform2(t, j, &s, &tt, &bg, &ag)?;
                    right.col_transform2(t, j, &s, &tt, &bg, &ag)?;
                }
            }
            if (t + 1..rows).all(|i| w.at(i, t).r_is_zero())
                && (t + 1..cols).all(|j| w.at(t, j).r_is_zero())
            {
                // Pivot must divide the rest of the block for the chain.
                let p = w.at(t, t).clone();
                let mut culprit = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        let q = w.at(i, j).div_floor_c(&p)?;
                        let r = w.at(i, j).sub_c(&q.mul_c(&p)?)?;
                        if !r.r_is_zero() {
                            culprit = Some(i);
                            break 'scan;
                        }
                    }
                }
                match culprit {
                    None => break,
                    Some(i) => {
                        let one = T::r_one();
                        w.row_addmul(t, i, &one)?;
                        left.row_addmul(t, i, &one)?;
                    }
                }
            }
        }
        if w.at(t, t).is_neg() {
            w.row_neg(t)?;
            left.row_neg(t)?;
        }
    }
    Some((w, left, right))
}
