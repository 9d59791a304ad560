//! Independent oracles and seeded suites shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabtopo::matrixlab::{ge_field, hnf, mge, span_check, CoeffMatrix, Layout, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rows(rng: &mut ChaCha8Rng, r: usize, c: usize, d: u32) -> Vec<Vec<u32>> {
    (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(0..d)).collect())
        .collect()
}

pub fn coeff(d: u32, rows: Vec<Vec<u32>>, cols: usize) -> CoeffMatrix {
    CoeffMatrix::new(d, Layout::flat(cols), rows).unwrap()
}

/// Row rank over F_p by plain Gauss-Jordan.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| (e % p) as u64).collect())
        .collect();
    let p = p as u64;
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (1..p).find(|x| x * m[rank][c] % p == 1).unwrap();
        for e in m[rank].iter_mut() {
            *e = *e * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `Σ rel_i · row_i mod d`
pub fn apply(rel: &[u32], rows: &[Vec<u32>], d: u32) -> Vec<u32> {
    let c = rows.first().map_or(0, Vec::len);
    let mut out = vec![0u64; c];
    for (&a, row) in rel.iter().zip(rows) {
        for (o, &e) in out.iter_mut().zip(row) {
            *o = (*o + a as u64 * e as u64) % d as u64;
        }
    }
    out.into_iter().map(|e| e as u32).collect()
}

/// For prime `p`, the zero relations of `mge` and `ge_field` both lie in the
/// left kernel and both span all of it.
pub fn mge_matches_ge_field(rows: &[Vec<u32>], cols: usize, p: u32) -> bool {
    let m = coeff(p, rows.to_vec(), cols);
    let a = mge(&m);
    let b = ge_field(&m, p).unwrap();
    let kernel_dim = rows.len() - rank_mod_p(rows, p);
    let ra: Vec<Vec<u32>> = a.zero_relations().map(<[u32]>::to_vec).collect();
    let rb: Vec<Vec<u32>> = b.zero_relations().map(<[u32]>::to_vec).collect();
    let annihilates =
        |rs: &[Vec<u32>]| rs.iter().all(|r| apply(r, rows, p).iter().all(|&e| e == 0));
    let both: Vec<Vec<u32>> = ra.iter().chain(&rb).cloned().collect();
    annihilates(&ra)
        && annihilates(&rb)
        && rank_mod_p(&ra, p) == kernel_dim
        && rank_mod_p(&rb, p) == kernel_dim
        && rank_mod_p(&both, p) == kernel_dim
        && a.rank() == b.rank()
}

fn stacked(rows: &[Vec<u32>], cols: usize, d: u32) -> Matrix<BigInt> {
    let mut out: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    for j in 0..cols {
        let mut e = vec![BigInt::from(0); cols];
        e[j] = BigInt::from(d);
        out.push(e);
    }
    Matrix::from_rows(out)
}

/// Elimination over Z_d agrees with integer elimination of `[M; d I]`: the
/// echelon rows generate the same lattice, and each pivot matches the
/// Hermite diagonal up to a unit.
pub fn mge_matches_integer_hnf(rows: &[Vec<u32>], cols: usize, d: u32) -> bool {
    let m = coeff(d, rows.to_vec(), cols);
    let e = mge(&m);
    // [M; d I] has full column rank, so only the top `cols` rows are nonzero
    let h_orig = hnf(&stacked(rows, cols, d)).h.to_rows();
    let h_ech = hnf(&stacked(e.echelon(), cols, d)).h.to_rows();
    if h_orig[..cols] != h_ech[..cols]
        || h_orig[cols..]
            .iter()
            .chain(&h_ech[cols..])
            .flatten()
            .any(|x| *x != BigInt::from(0))
    {
        return false;
    }
    if !e.check_relations(&m) {
        return false;
    }
    (0..cols).all(|j| {
        let piv = e
            .pivots()
            .iter()
            .find(|p| p.col == j)
            .map_or(d, |p| p.value);
        BigInt::from(num_integer::gcd(piv, d)) == h_orig[j][j]
    })
}

/// Checks `span_check` on one in-span vector and one random vector.
pub fn span_sound(rng: &mut ChaCha8Rng) -> bool {
    let d = rng.gen_range(2..=12u32);
    let r = rng.gen_range(1..=8usize);
    let c = rng.gen_range(1..=10usize);
    let rows = random_rows(rng, r, c, d);
    let e = mge(&coeff(d, rows.clone(), c));
    let alpha: Vec<u32> = (0..r).map(|_| rng.gen_range(0..d)).collect();
    let inside = apply(&alpha, &rows, d);
    let reproduces = |alpha: &[u32], v: &[u32]| {
        apply(alpha, e.echelon(), d) == v && apply(&e.combine(alpha), &rows, d) == v
    };
    let Some(found) = span_check(&e, &inside) else {
        return false;
    };
    if !reproduces(&found, &inside) {
        return false;
    }
    let v: Vec<u32> = (0..c).map(|_| rng.gen_range(0..d)).collect();
    match span_check(&e, &v) {
        Some(a) => reproduces(&a, &v),
        None => true,
    }
}

const PRIMES: [u32; 5] = [2, 3, 5, 7, 11];

/// Failures of the ge_field equivalence over `cases` random 12×18 matrices.
pub fn suite_mge_ge_field(cases: usize, seed: u64) -> usize {
    let mut g = rng(seed);
    (0..cases)
        .filter(|i| {
            let p = PRIMES[i % PRIMES.len()];
            let rows = random_rows(&mut g, 12, 18, p);
            !mge_matches_ge_field(&rows, 18, p)
        })
        .count()
}

/// Failures of the integer equivalence over random 8×10 matrices for each
/// modulus.
pub fn suite_integer_hnf(cases: usize, seed: u64) -> usize {
    let mut g = rng(seed);
    let mut failures = 0;
    for d in [4u32, 6, 8, 9, 12] {
        for _ in 0..cases {
            let rows = random_rows(&mut g, 8, 10, d);
            failures += usize::from(!mge_matches_integer_hnf(&rows, 10, d));
        }
    }
    failures
}

pub fn suite_span(cases: usize, seed: u64) -> usize {
    let mut g = rng(seed);
    (0..cases).filter(|_| !span_sound(&mut g)).count()
}
