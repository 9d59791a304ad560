//! Hermite and Smith normal forms over the integers, generic over the
//! integer type.

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// Integer types usable by the normal forms.
pub trait IntScalar: Integer + Signed + Clone + Debug {}
impl<T: Integer + Signed + Clone + Debug> IntScalar for T {}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).clone() + a.clone() * o.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn map<U: IntScalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return T::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j).clone() * a.get(k, k).clone()
                        - a.get(i, k).clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row_i += c * row_j`
    fn add_row(&mut self, i: usize, j: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let v = self.get(i, k).clone() + c.clone() * self.get(j, k).clone();
            self.set(i, k, v);
        }
    }

    /// `col_j += c * col_i`
    fn add_col(&mut self, j: usize, i: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, j).clone() + c.clone() * self.get(r, i).clone();
            self.set(r, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -self.get(i, k).clone();
            self.set(i, k, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }
}

/// `U · M = H` with `U` unimodular and `H` in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// `(row, col)` of each pivot
    pub pivots: Vec<(usize, usize)>,
}

pub fn hnf<T: IntScalar>(m: &Matrix<T>) -> Hnf<T> {
    let mut h = m.clone();
    let mut u = Matrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let best = (r..m.rows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m.rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = -h.get(i, col).div_floor(h.get(r, col));
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                clean &= h.get(i, col).is_zero();
            }
            if clean {
                break;
            }
        }
        if h.get(r, col).is_zero() {
            continue;
        }
        if h.get(r, col).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, col).div_floor(h.get(r, col));
            h.add_row(i, r, &q);
            u.add_row(i, r, &q);
        }
        pivots.push((r, col));
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// `M = L · A · R` with `L`, `R` unimodular and `A` diagonal,
/// `A[i][i] | A[i+1][i+1]`, nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<T> {
    pub l: Matrix<T>,
    pub a: Matrix<T>,
    pub r: Matrix<T>,
}

impl<T: IntScalar> Snf<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.a.rows.min(self.a.cols))
            .map(|i| self.a.get(i, i).clone())
            .collect()
    }
}

/// Position of the smallest nonzero |entry| in row `t` and column `t`, or
/// failing that in the whole trailing block.
fn snf_pivot<T: IntScalar>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let by_abs =
        |x: &(usize, usize), y: &(usize, usize)| a.get(x.0, x.1).abs().cmp(&a.get(y.0, y.1).abs());
    let cross = (t..a.rows)
        .map(|i| (i, t))
        .chain((t + 1..a.cols).map(|j| (t, j)))
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .min_by(by_abs);
    if cross.is_some() {
        return cross;
    }
    (t..a.rows)
        .flat_map(|i| (t..a.cols).map(move |j| (i, j)))
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .min_by(by_abs)
}

pub fn snf<T: IntScalar>(m: &Matrix<T>) -> Snf<T> {
    let mut a = m.clone();
    let mut l = Matrix::identity(m.rows);
    let mut r = Matrix::identity(m.cols);
    for t in 0..m.rows.min(m.cols) {
        loop {
            let Some((pi, pj)) = snf_pivot(&a, t) else {
                break;
            };
            a.swap_rows(t, pi);
            l.swap_cols(t, pi);
            a.swap_cols(t, pj);
            r.swap_rows(t, pj);
            let mut clean = true;
            for i in t + 1..m.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(a.get(t, t));
                a.add_row(i, t, &q);
                // L' = L E^-1: col_t -= q col_i
                l.add_col(t, i, &-q.clone());
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..m.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(a.get(t, t));
                a.add_col(j, t, &q);
                // R' = F^-1 R: row_t -= q row_j
                r.add_row(t, j, &-q.clone());
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m.rows)
                .find(|&i| (t + 1..m.cols).any(|j| !a.get(i, j).is_multiple_of(a.get(t, t))));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &T::one());
                    l.add_col(i, t, &-T::one());
                }
                None => break,
            }
        }
        if t < m.rows && t < m.cols && a.get(t, t).is_negative() {
            a.negate_row(t);
            l.negate_col(t);
        }
    }
    Snf { l, a, r }
}

/// Diagonal of a Smith form computed with every entry kept in `[0, d)`.
///
/// Only `gcd(s_i, d)` is meaningful; the result has one entry per
/// `min(rows, cols)`.
pub fn snf_mod(m: &Matrix<i64>, d: i64) -> Vec<i64> {
    let mut a = m.map(|v| v.rem_euclid(d));
    let (rows, cols) = (a.rows, a.cols);
    let norm = |a: &mut Matrix<i64>, i: usize, j: usize| {
        let v = a.get(i, j).rem_euclid(d);
        a.set(i, j, v);
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = snf_pivot(&a, t) else {
                break;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let p = *a.get(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let v = *a.get(i, t);
                if v == 0 {
                    continue;
                }
                let q = -(v / p);
                for k in t..cols {
                    let w = *a.get(t, k);
                    if w != 0 {
                        let nv = a.get(i, k) + q * w;
                        a.set(i, k, nv);
                        norm(&mut a, i, k);
                    }
                }
                clean &= *a.get(i, t) == 0;
            }
            for j in t + 1..cols {
                let v = *a.get(t, j);
                if v == 0 {
                    continue;
                }
                let q = -(v / p);
                for k in t..rows {
                    let w = *a.get(k, t);
                    if w != 0 {
                        let nv = a.get(k, j) + q * w;
                        a.set(k, j, nv);
                        norm(&mut a, k, j);
                    }
                }
                clean &= *a.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a.get(i, j) % p != 0));
            match bad {
                Some(i) => {
                    for k in t..cols {
                        let nv = a.get(t, k) + a.get(i, k);
                        a.set(t, k, nv);
                        norm(&mut a, t, k);
                    }
                }
                None => break,
            }
        }
        diag.push(*a.get(t, t));
    }
    diag
}
