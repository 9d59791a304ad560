use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{AnyonTheory, StringOperator};
use crate::error::{Error, Result};
use crate::laurent::{inv_mod, LaurentPoly};
use crate::matrixlab::{ge_field, CoeffMatrix, Layout};
use crate::symplectic::{dot_constant, PauliVector};

/// How far past the starting extension `q` is pushed before giving up.
const Q_SEARCH: usize = 48;

/// `Σ_{k=from..=to} x^(k sx) y^(k sy)`
fn geometric(sx: i32, sy: i32, from: i32, to: i32, d: u32) -> LaurentPoly {
    LaurentPoly::from_terms((from..=to).map(|k| ((k * sx, k * sy), 1)), d)
}

fn bracket(a: &PauliVector, b: &PauliVector) -> i64 {
    dot_constant(a, b).expect("matching widths") as i64
}

/// The three extended strings `U1, U2, U3` meeting at the origin.
pub fn t_junction(s: &StringOperator, q: usize) -> [PauliVector; 3] {
    let d = s.px.modulus();
    let (nx, ny, q) = (s.nx as i32, s.ny as i32, q as i32);
    let u1 = s.px.mul_poly(&geometric(-nx, 0, 1, q, d));
    let u2 = s.py.mul_poly(&geometric(0, -ny, 0, q, d));
    let u3 = -&s.px.mul_poly(&geometric(nx, 0, 0, q, d));
    [u1, u2, u3]
}

/// Spin exponent `[U1,U2] + [U2,U3] + [U3,U1] mod d` at extension `q`.
pub fn topological_spin(s: &StringOperator, q: usize) -> u32 {
    let d = s.px.modulus() as i64;
    let [u1, u2, u3] = t_junction(s, q);
    (bracket(&u1, &u2) + bracket(&u2, &u3) + bracket(&u3, &u1)).rem_euclid(d) as u32
}

/// Smallest `q >= q0` (and at least 2) from which the spin is constant
/// through `q + 3`, with that spin.
pub fn stable_spin(s: &StringOperator, q0: usize) -> Result<(u32, usize)> {
    let start = q0.max(2);
    for q in start..start + Q_SEARCH {
        let e = topological_spin(s, q);
        if (1..=3).all(|k| topological_spin(s, q + k) == e) {
            return Ok((e, q));
        }
    }
    Err(Error::Invalid(format!(
        "spin did not stabilize for q in {start}..{}",
        start + Q_SEARCH
    )))
}

/// `θ(a × b) - θ(a) - θ(b) mod d` at extension `q`.
pub fn braiding(a: &StringOperator, b: &StringOperator, q: usize) -> Result<u32> {
    let d = a.px.modulus() as i64;
    let ab = a.compose(b)?;
    let e = topological_spin(&ab, q) as i64
        - topological_spin(a, q) as i64
        - topological_spin(b, q) as i64;
    Ok(e.rem_euclid(d) as u32)
}

/// Braiding from the twelve-operator exchange product, accumulated as
/// `-z32 + z12 - z21 + z31 + z23 - z13` with `z_ij = [U_i^a, U_j^b]`.
pub fn braiding_direct(a: &StringOperator, b: &StringOperator, q: usize) -> Result<u32> {
    // compose checks that the steps agree
    a.compose(b)?;
    let d = a.px.modulus() as i64;
    let ua = t_junction(a, q);
    let ub = t_junction(b, q);
    let z = |i: usize, j: usize| bracket(&ua[i - 1], &ub[j - 1]);
    let e = -z(3, 2) + z(1, 2) - z(2, 1) + z(3, 1) + z(2, 3) - z(1, 3);
    Ok(e.rem_euclid(d) as u32)
}

/// Spins and the full braiding matrix of a set of strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistics {
    pub spins: Vec<u32>,
    pub braiding: Vec<Vec<u32>>,
    pub q: usize,
}

fn table_at(strings: &[StringOperator], q: usize, d: u32) -> Result<(Vec<u32>, Vec<Vec<u32>>)> {
    let spins: Vec<u32> = strings.iter().map(|s| topological_spin(s, q)).collect();
    let k = strings.len();
    let mut b = vec![vec![0u32; k]; k];
    for i in 0..k {
        for j in i..k {
            let e = braiding(&strings[i], &strings[j], q)?;
            b[i][j] = e % d;
            b[j][i] = e % d;
        }
    }
    Ok((spins, b))
}

/// Increases `q` from `q0` until the whole table agrees for four
/// consecutive extensions.
pub fn statistics(strings: &[StringOperator], q0: usize, d: u32) -> Result<Statistics> {
    let start = q0.max(2);
    let mut tables = vec![table_at(strings, start, d)?];
    for q in start..start + Q_SEARCH {
        while tables.len() < q - start + 4 {
            tables.push(table_at(strings, start + tables.len(), d)?);
        }
        let t = &tables[q - start];
        if (1..=3).all(|k| &tables[q - start + k] == t) {
            let (spins, braiding) = t.clone();
            return Ok(Statistics { spins, braiding, q });
        }
    }
    Err(Error::Invalid(format!(
        "statistics did not stabilize for q in {start}..{}",
        start + Q_SEARCH
    )))
}

/// A boson `e` and partner `m` with unit braiding, decoupled from all other
/// pairs. Coefficients refer to the theory's basis anyons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmPair {
    pub e: Vec<i64>,
    pub m: Vec<i64>,
}

/// Output of the e/m rearrangement. `spins` and `braiding` are recomputed
/// from strings in the order `e1, m1, e2, m2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmDecomposition {
    pub p: u32,
    pub pairs: Vec<EmPair>,
    pub spins: Vec<u32>,
    pub braiding: Vec<Vec<u32>>,
}

impl EmDecomposition {
    /// Every spin 0, braiding `d/p` inside each pair and 0 elsewhere.
    pub fn is_block_form(&self, d: u32) -> bool {
        let unit = d / self.p;
        let n = self.spins.len();
        self.spins.iter().all(|&s| s == 0)
            && (0..n).all(|i| {
                (0..n)
                    .all(|j| self.braiding[i][j] == if i / 2 == j / 2 && i != j { unit } else { 0 })
            })
    }
}

/// Spin and braiding of combinations, in units of `d/p`, memoised.
struct Phases<'a> {
    theory: &'a AnyonTheory,
    p: i64,
    unit: u32,
    cache: HashMap<Vec<i64>, i64>,
}

impl Phases<'_> {
    fn norm(&self, v: &[i64]) -> Vec<i64> {
        v.iter().map(|c| c.rem_euclid(self.p)).collect()
    }

    fn spin(&mut self, v: &[i64]) -> Result<i64> {
        let key = self.norm(v);
        if let Some(&e) = self.cache.get(&key) {
            return Ok(e);
        }
        let raw = stable_spin(&self.theory.combination(&key), self.theory.q)?.0;
        if raw % self.unit != 0 {
            return Err(Error::Invalid(format!(
                "spin exponent {raw} mod {} is not a multiple of {}",
                self.theory.d, self.unit
            )));
        }
        let e = (raw / self.unit) as i64 % self.p;
        self.cache.insert(key, e);
        Ok(e)
    }

    fn braid(&mut self, a: &[i64], b: &[i64]) -> Result<i64> {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok((self.spin(&sum)? - self.spin(a)? - self.spin(b)?).rem_euclid(self.p))
    }

    fn combo(&self, gens: &[Vec<i64>], coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.theory.basis.len()];
        for (g, c) in gens.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(g) {
                *o = (*o + c * x).rem_euclid(self.p);
            }
        }
        out
    }
}

fn rank_mod_p(vectors: &[Vec<i64>], p: u32) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let k = vectors[0].len();
    let rows = vectors
        .iter()
        .map(|v| v.iter().map(|c| c.rem_euclid(p as i64) as u32).collect())
        .collect();
    let m = CoeffMatrix::new(p, Layout::flat(k), rows).expect("small prime");
    ge_field(&m, p).expect("prime").rank()
}

/// First nonzero combination of `gens` that is a boson, screened with the
/// quadratic form of the generators and then confirmed from its string.
fn find_boson(ph: &mut Phases, gens: &[Vec<i64>]) -> Result<Option<Vec<i64>>> {
    let r = gens.len();
    let p = ph.p;
    let mut th = Vec::with_capacity(r);
    for g in gens {
        th.push(ph.spin(g)?);
    }
    let mut br = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            br[i][j] = ph.braid(&gens[i], &gens[j])?;
        }
    }
    let total = (p as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    let mut coeffs = vec![0i64; r];
    for idx in 1..total {
        let mut x = idx;
        for c in coeffs.iter_mut() {
            *c = (x % p as u128) as i64;
            x /= p as u128;
        }
        // scalar multiples of a boson are bosons; keep leading coefficient 1
        if coeffs.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut q = 0i64;
        for i in 0..r {
            q += coeffs[i] * coeffs[i] * th[i];
            for j in i + 1..r {
                q += coeffs[i] * coeffs[j] * br[i][j];
            }
        }
        if q.rem_euclid(p) != 0 {
            continue;
        }
        let b = ph.combo(gens, &coeffs);
        if ph.spin(&b)? == 0 {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Splits an order-`p` theory into decoupled e/m pairs: pick a boson `b`,
/// a partner `c` with unit braiding, make `c` a boson, strip the braiding of
/// the remaining generators with both, and recurse.
pub fn rearrange_em_pairs(theory: &AnyonTheory, p: u32) -> Result<EmDecomposition> {
    if !crate::laurent::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !theory.d.is_multiple_of(p) || theory.basis.iter().any(|a| a.order != p) {
        return Err(Error::Invalid(format!(
            "every basis anyon must have order {p} dividing d"
        )));
    }
    let k = theory.basis.len();
    let mut ph = Phases {
        theory,
        p: p as i64,
        unit: theory.d / p,
        cache: HashMap::new(),
    };
    let pi = p as i64;
    let mut remaining: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            let mut v = vec![0i64; k];
            v[i] = 1;
            v
        })
        .collect();
    let mut pairs = Vec::new();
    while !remaining.is_empty() {
        let b = find_boson(&mut ph, &remaining)?.ok_or(Error::NoBoson(remaining.len()))?;
        let mut partner = None;
        for g in &remaining {
            let e = ph.braid(&b, g)?;
            if e != 0 {
                let inv = inv_mod(e as u32, p).expect("prime") as i64;
                partner = Some(
                    g.iter()
                        .map(|x| (x * inv).rem_euclid(pi))
                        .collect::<Vec<i64>>(),
                );
                break;
            }
        }
        let c = partner.ok_or(Error::NoPartner)?;
        let tc = ph.spin(&c)?;
        let c: Vec<i64> = c
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - tc * y).rem_euclid(pi))
            .collect();
        if ph.spin(&c)? != 0 || ph.braid(&b, &c)? != 1 {
            return Err(Error::Invalid(
                "bosonized partner lost its braiding with the boson".into(),
            ));
        }
        let mut kept = vec![b.clone(), c.clone()];
        let mut rest = Vec::new();
        for g in &remaining {
            let mut trial = kept.clone();
            trial.push(g.clone());
            if rank_mod_p(&trial, p) == trial.len() {
                kept.push(g.clone());
                rest.push(g.clone());
            }
        }
        let mut next = Vec::with_capacity(rest.len());
        for v in rest {
            let (ec, eb) = (ph.braid(&c, &v)?, ph.braid(&b, &v)?);
            next.push(
                (0..k)
                    .map(|i| (v[i] - ec * b[i] - eb * c[i]).rem_euclid(pi))
                    .collect(),
            );
        }
        pairs.push(EmPair { e: b, m: c });
        remaining = next;
    }
    let order: Vec<&Vec<i64>> = pairs.iter().flat_map(|pr| [&pr.e, &pr.m]).collect();
    let spins = order
        .iter()
        .map(|v| Ok(stable_spin(&theory.combination(v), theory.q)?.0))
        .collect::<Result<Vec<u32>>>()?;
    let n = order.len();
    let mut braiding_table = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in i..n {
            let e = theory.braiding_of(order[i], order[j])?;
            braiding_table[i][j] = e;
            braiding_table[j][i] = e;
        }
    }
    Ok(EmDecomposition {
        p,
        pairs,
        spins,
        braiding: braiding_table,
    })
}
