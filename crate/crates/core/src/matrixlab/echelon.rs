//! Row reduction over Z_d with relation tracking.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::CoeffMatrix;
use crate::error::{Error, Result};
use crate::laurent::{inv_mod, is_prime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub value: u32,
}

/// Echelon form over Z_d plus the relation matrix.
///
/// Row `i` of `relation` expresses echelon row `i` as a combination of the
/// original input rows. Pivot rows come first, in increasing pivot column,
/// followed by the zero rows; zero-row relations generate every relation
/// among the original rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EchelonResult {
    d: u32,
    ncols: usize,
    n_orig: usize,
    rows: Vec<Vec<u32>>,
    relation: Vec<Vec<u32>>,
    pivots: Vec<Pivot>,
    zero_rows: Vec<usize>,
}

// Relation self-checks in debug builds are cubic; skip them on big inputs.
const SELF_CHECK_LIMIT: usize = 20_000;

struct Work {
    v: Vec<u32>,
    rel: Vec<u32>,
}

impl Work {
    fn is_trivial(&self, from: usize) -> bool {
        self.v[from..].iter().all(|&e| e == 0) && self.rel.iter().all(|&e| e == 0)
    }
}

/// `dst += c * src (mod d)`, with `c < d <= 65535`.
#[inline]
fn axpy(dst: &mut [u32], src: &[u32], c: u32, d: u32) {
    if c == 0 {
        return;
    }
    for (a, &b) in dst.iter_mut().zip(src) {
        if b != 0 {
            *a = (*a + c * b) % d;
        }
    }
}

#[inline]
fn scale(v: &mut [u32], c: u32, d: u32) {
    for a in v.iter_mut() {
        *a = (*a * c) % d;
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

/// `work[dst] -= q * work[src]` on columns `from..` and on the relation.
fn row_sub(work: &mut [Work], dst: usize, src: usize, q: u64, from: usize, d: u32) {
    let c = ((d as u64 - q % d as u64) % d as u64) as u32;
    if c == 0 {
        return;
    }
    let (a, b) = pair_mut(work, dst, src);
    axpy(&mut a.v[from..], &b.v[from..], c, d);
    axpy(&mut a.rel, &b.rel, c, d);
}

/// Euclid subtraction on column `col` among `parts`, whose integer values
/// at that column are `vals`. Repeatedly reduces every other entry by the
/// smallest nonzero one until a single nonzero entry, the gcd, remains.
/// Returns the position in `parts` holding it.
fn dance(work: &mut [Work], parts: &[usize], vals: &mut [u64], col: usize, d: u32) -> usize {
    loop {
        let mut mp = usize::MAX;
        for (k, &v) in vals.iter().enumerate() {
            if v != 0 && (mp == usize::MAX || v < vals[mp]) {
                mp = k;
            }
        }
        let others: Vec<usize> = (0..vals.len())
            .filter(|&k| k != mp && vals[k] != 0)
            .collect();
        if others.is_empty() {
            for (k, &p) in parts.iter().enumerate() {
                work[p].v[col] = (vals[k] % d as u64) as u32;
            }
            return mp;
        }
        for k in others {
            let q = vals[k] / vals[mp];
            row_sub(work, parts[k], parts[mp], q, col + 1, d);
            vals[k] -= q * vals[mp];
        }
    }
}

/// Modified Gaussian elimination over Z_d.
///
/// Column by column, the rows with a nonzero entry and a virtual row
/// `d e_col` undergo the Euclid dance; the row left holding `gcd(entries, d)`
/// becomes the pivot and the rest, including whatever the virtual row turned
/// into, continue to the next column. Unit pivots are scaled to 1.
pub fn mge(m: &CoeffMatrix) -> EchelonResult {
    let d = m.d();
    let (n, c) = (m.nrows(), m.ncols());
    let mut work: Vec<Work> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut rel = vec![0; n];
            rel[i] = 1;
            Work { v: r.clone(), rel }
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut piv: Vec<(usize, usize)> = Vec::new();

    for col in 0..c {
        let cand: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| work[i].v[col] != 0)
            .collect();
        if cand.is_empty() {
            continue;
        }
        let unit = cand.iter().copied().find(|&i| work[i].v[col].gcd(&d) == 1);
        let pivot = match unit {
            Some(pi) => {
                let inv = inv_mod(work[pi].v[col], d).expect("unit");
                scale(&mut work[pi].v[col..], inv, d);
                scale(&mut work[pi].rel, inv, d);
                for &o in cand.iter().filter(|&&o| o != pi) {
                    let q = work[o].v[col] as u64;
                    row_sub(&mut work, o, pi, q, col, d);
                }
                pi
            }
            None => {
                work.push(Work {
                    v: vec![0; c],
                    rel: vec![0; n],
                });
                let vi = work.len() - 1;
                let mut parts = cand.clone();
                parts.push(vi);
                let mut vals: Vec<u64> = cand.iter().map(|&i| work[i].v[col] as u64).collect();
                vals.push(d as u64);
                let pivot = parts[dance(&mut work, &parts, &mut vals, col, d)];
                if pivot != vi && !work[vi].is_trivial(col) {
                    active.push(vi);
                }
                pivot
            }
        };
        active.retain(|&i| i != pivot);
        piv.push((pivot, col));
    }

    let mut rows = Vec::with_capacity(piv.len() + active.len());
    let mut relation = Vec::with_capacity(rows.capacity());
    let mut pivots = Vec::with_capacity(piv.len());
    for (k, &(wi, col)) in piv.iter().enumerate() {
        let w = std::mem::take(&mut work[wi].v);
        pivots.push(Pivot {
            row: k,
            col,
            value: w[col],
        });
        rows.push(w);
        relation.push(std::mem::take(&mut work[wi].rel));
    }
    let mut zero_rows = Vec::new();
    for wi in active {
        if work[wi].rel.iter().any(|&e| e != 0) {
            zero_rows.push(rows.len());
            rows.push(std::mem::take(&mut work[wi].v));
            relation.push(std::mem::take(&mut work[wi].rel));
        }
    }
    let out = EchelonResult {
        d,
        ncols: c,
        n_orig: n,
        rows,
        relation,
        pivots,
        zero_rows,
    };
    debug_assert!(m.nrows() * m.ncols() > SELF_CHECK_LIMIT || out.check_relations(m));
    out
}

/// Reduced row echelon form over the prime field F_p with relation tracking.
pub fn ge_field(m: &CoeffMatrix, p: u32) -> Result<EchelonResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > super::MAX_MODULUS {
        return Err(Error::InvalidModulus(p));
    }
    let out = if p == 2 { ge_f2(m) } else { ge_fp(m, p) };
    debug_assert!(m.nrows() * m.ncols() > SELF_CHECK_LIMIT || out.check_relations(m));
    Ok(out)
}

fn ge_fp(m: &CoeffMatrix, p: u32) -> EchelonResult {
    let (n, c) = (m.nrows(), m.ncols());
    let mut work: Vec<Work> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut rel = vec![0; n];
            rel[i] = 1;
            Work {
                v: r.iter().map(|&e| e % p).collect(),
                rel,
            }
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..c {
        if r == n {
            break;
        }
        let Some(i) = (r..n).find(|&i| work[i].v[col] != 0) else {
            continue;
        };
        work.swap(r, i);
        let inv = inv_mod(work[r].v[col], p).expect("field");
        scale(&mut work[r].v[col..], inv, p);
        scale(&mut work[r].rel, inv, p);
        for o in 0..n {
            if o != r && work[o].v[col] != 0 {
                let q = work[o].v[col] as u64;
                row_sub(&mut work, o, r, q, col, p);
            }
        }
        pivots.push(Pivot {
            row: r,
            col,
            value: 1,
        });
        r += 1;
    }
    let (rows, relation) = work.into_iter().map(|w| (w.v, w.rel)).unzip();
    EchelonResult {
        d: p,
        ncols: c,
        n_orig: n,
        rows,
        relation,
        pivots,
        zero_rows: (r..n).collect(),
    }
}

/// F_2 elimination on packed bit rows.
fn ge_f2(m: &CoeffMatrix) -> EchelonResult {
    let (n, c) = (m.nrows(), m.ncols());
    let wv = c.div_ceil(64);
    let wr = n.div_ceil(64);
    let stride = wv + wr;
    let mut bits = vec![0u64; n * stride];
    for (i, row) in m.rows().iter().enumerate() {
        let base = i * stride;
        for (j, &e) in row.iter().enumerate() {
            if e % 2 == 1 {
                bits[base + j / 64] |= 1 << (j % 64);
            }
        }
        bits[base + wv + i / 64] |= 1 << (i % 64);
    }
    let bit = |bits: &[u64], i: usize, j: usize| bits[i * stride + j / 64] >> (j % 64) & 1 == 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..c {
        if r == n {
            break;
        }
        let Some(i) = (r..n).find(|&i| bit(&bits, i, col)) else {
            continue;
        };
        if i != r {
            for k in 0..stride {
                bits.swap(i * stride + k, r * stride + k);
            }
        }
        let start = col / 64;
        let src: Vec<u64> = bits[r * stride..(r + 1) * stride].to_vec();
        for o in 0..n {
            if o != r && bit(&bits, o, col) {
                let dst = &mut bits[o * stride..(o + 1) * stride];
                for k in start..stride {
                    dst[k] ^= src[k];
                }
            }
        }
        pivots.push(Pivot {
            row: r,
            col,
            value: 1,
        });
        r += 1;
    }
    let unpack = |i: usize, off: usize, len: usize| -> Vec<u32> {
        (0..len)
            .map(|j| (bits[i * stride + off + j / 64] >> (j % 64) & 1) as u32)
            .collect()
    };
    let rows = (0..n).map(|i| unpack(i, 0, c)).collect();
    let relation = (0..n).map(|i| unpack(i, wv, n)).collect();
    EchelonResult {
        d: 2,
        ncols: c,
        n_orig: n,
        rows,
        relation,
        pivots,
        zero_rows: (r..n).collect(),
    }
}

/// Eliminate with `ge_field` when `d` is prime, `mge` otherwise.
pub fn eliminate(m: &CoeffMatrix) -> EchelonResult {
    if is_prime(m.d()) {
        ge_field(m, m.d()).expect("prime")
    } else {
        mge(m)
    }
}

/// Expresses `v` in the row span of the echelon form, if possible.
///
/// Walks the columns in order: a pivot must divide the current entry (as
/// integers, since pivots divide d) and is then subtracted out; any other
/// column must already be zero. Returns one coefficient per echelon row.
pub fn span_check(ech: &EchelonResult, v: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(
        v.len(),
        ech.ncols,
        "vector length must match the echelon width"
    );
    let d = ech.d;
    let mut v: Vec<u32> = v.iter().map(|&e| e % d).collect();
    let mut alpha = vec![0; ech.rows.len()];
    let mut next = 0;
    for col in 0..ech.ncols {
        let e = v[col];
        if next < ech.pivots.len() && ech.pivots[next].col == col {
            let pv = ech.pivots[next];
            next += 1;
            if !e.is_multiple_of(pv.value) {
                return None;
            }
            let q = e / pv.value;
            if q != 0 {
                axpy(&mut v[col..], &ech.rows[pv.row][col..], (d - q) % d, d);
                alpha[pv.row] = q;
            }
        } else if e != 0 {
            return None;
        }
    }
    Some(alpha)
}

impl EchelonResult {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of original rows the relations refer to.
    pub fn n_orig(&self) -> usize {
        self.n_orig
    }

    pub fn echelon(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn relation(&self) -> &[Vec<u32>] {
        &self.relation
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    pub fn zero_rows(&self) -> &[usize] {
        &self.zero_rows
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn zero_relations(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.zero_rows.iter().map(|&i| self.relation[i].as_slice())
    }

    /// Size of the row span: the product of `d / pivot` over pivots.
    pub fn span_size(&self) -> BigUint {
        self.pivots.iter().fold(BigUint::from(1u32), |acc, p| {
            acc * BigUint::from(self.d / p.value)
        })
    }

    /// `alpha · relation`: coefficients on the original rows.
    pub fn combine(&self, alpha: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.n_orig];
        for (a, rel) in alpha.iter().zip(&self.relation) {
            axpy(&mut out, rel, *a % self.d, self.d);
        }
        out
    }

    /// Checks `relation · original == echelon (mod d)` for every row.
    pub fn check_relations(&self, original: &CoeffMatrix) -> bool {
        if original.nrows() != self.n_orig {
            return false;
        }
        self.rows.iter().zip(&self.relation).all(|(row, rel)| {
            let mut acc = vec![0; self.ncols];
            for (i, &c) in rel.iter().enumerate() {
                axpy(&mut acc, original.row(i), c, self.d);
            }
            &acc == row
        })
    }

    /// Appends `k` original-row slots with zero coefficients to every
    /// relation, so that new rows can be inserted and tracked.
    pub fn extend_relations(&mut self, k: usize) {
        self.n_orig += k;
        for r in self.relation.iter_mut() {
            r.resize(self.n_orig, 0);
        }
    }

    /// Drops all relation data and restarts tracking with `k` slots, keeping
    /// the echelon itself.
    pub fn reset_relations(&mut self, k: usize) {
        self.n_orig = k;
        let zero: Vec<usize> = self.zero_rows.clone();
        for r in self.relation.iter_mut() {
            *r = vec![0; k];
        }
        // zero rows carry no information once their relations are gone
        let keep: Vec<bool> = (0..self.rows.len()).map(|i| !zero.contains(&i)).collect();
        let mut it = keep.iter();
        self.rows.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        self.relation.retain(|_| *it.next().unwrap());
        self.zero_rows.clear();
    }

    /// Inserts one more row whose relation is `rel`, keeping the span
    /// closure property that `span_check` relies on.
    pub fn insert(&mut self, row: Vec<u32>, rel: Vec<u32>) {
        assert_eq!(row.len(), self.ncols, "row length");
        assert_eq!(rel.len(), self.n_orig, "relation length");
        let d = self.d;
        let c = self.ncols;
        let mut pivot_at: Vec<Option<usize>> = vec![None; c];
        let mut work: Vec<Work> = Vec::with_capacity(self.rows.len() + 4);
        let mut zero: Vec<usize> = Vec::new();
        let old_zero: std::collections::BTreeSet<usize> = self.zero_rows.iter().copied().collect();
        for (i, (v, r)) in std::mem::take(&mut self.rows)
            .into_iter()
            .zip(std::mem::take(&mut self.relation))
            .enumerate()
        {
            work.push(Work { v, rel: r });
            if old_zero.contains(&i) {
                zero.push(i);
            }
        }
        for p in &self.pivots {
            pivot_at[p.col] = Some(p.row);
        }
        work.push(Work {
            v: row.into_iter().map(|e| e % d).collect(),
            rel: rel.into_iter().map(|e| e % d).collect(),
        });
        let mut queue = vec![work.len() - 1];
        while let Some(i) = queue.pop() {
            let Some(col) = work[i].v.iter().position(|&e| e != 0) else {
                if work[i].rel.iter().any(|&e| e != 0) {
                    zero.push(i);
                }
                continue;
            };
            let mut parts = Vec::with_capacity(3);
            if let Some(p) = pivot_at[col] {
                parts.push(p);
            }
            parts.push(i);
            work.push(Work {
                v: vec![0; c],
                rel: vec![0; self.n_orig],
            });
            parts.push(work.len() - 1);
            let mut vals: Vec<u64> = parts.iter().map(|&k| work[k].v[col] as u64).collect();
            *vals.last_mut().unwrap() = d as u64;
            let mp = dance(&mut work, &parts, &mut vals, col, d);
            pivot_at[col] = Some(parts[mp]);
            for (k, &wi) in parts.iter().enumerate() {
                if k != mp && !work[wi].is_trivial(0) {
                    queue.push(wi);
                }
            }
        }
        let mut rows = Vec::new();
        let mut relation = Vec::new();
        let mut pivots = Vec::new();
        for (col, slot) in pivot_at.iter().enumerate() {
            if let Some(wi) = *slot {
                let w = std::mem::take(&mut work[wi].v);
                pivots.push(Pivot {
                    row: rows.len(),
                    col,
                    value: w[col],
                });
                rows.push(w);
                relation.push(std::mem::take(&mut work[wi].rel));
            }
        }
        let mut zero_rows = Vec::new();
        for wi in zero {
            zero_rows.push(rows.len());
            rows.push(std::mem::take(&mut work[wi].v));
            relation.push(std::mem::take(&mut work[wi].rel));
        }
        self.rows = rows;
        self.relation = relation;
        self.pivots = pivots;
        self.zero_rows = zero_rows;
    }
}
