//! Brute-force checks on a finite L×L torus, independent of the polynomial
//! elimination machinery.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrixlab::{snf_mod, Matrix};
use crate::pipeline::StringOperator;
use crate::symplectic::{PauliVector, StabilizerCode, Syndrome};

/// A code on an L×L torus: one dense row per translated generator, columns
/// ordered `slot * L² + a + b * L` with the X slots before the Z slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusInstance {
    l: usize,
    code: StabilizerCode,
    rows: Vec<Vec<u32>>,
}

fn wrap(e: i32, l: usize) -> usize {
    e.rem_euclid(l as i32) as usize
}

/// Writes a Pauli vector onto the torus, exponents reduced mod L.
pub fn materialize(p: &PauliVector, l: usize) -> Vec<u32> {
    let d = p.modulus();
    let cells = l * l;
    let mut out = vec![0u32; p.entries().len() * cells];
    for (slot, f) in p.entries().iter().enumerate() {
        for ((a, b), c) in f.terms() {
            let i = slot * cells + wrap(a, l) + wrap(b, l) * l;
            out[i] = (out[i] + c) % d;
        }
    }
    out
}

fn materialize_syndrome(s: &Syndrome, l: usize) -> Vec<u32> {
    let d = s.modulus();
    let cells = l * l;
    let mut out = vec![0u32; s.t() * cells];
    for (j, f) in s.entries().iter().enumerate() {
        for ((a, b), c) in f.terms() {
            let i = j * cells + wrap(a, l) + wrap(b, l) * l;
            out[i] = (out[i] + c) % d;
        }
    }
    out
}

/// `Σ u_X v_Z - u_Z v_X mod d` over all qudits.
fn finite_form(u: &[u32], v: &[u32], d: u32) -> u32 {
    let half = u.len() / 2;
    let d = d as u64;
    let mut acc = 0u64;
    for i in 0..half {
        acc += u[i] as u64 * v[half + i] as u64 % d;
        acc += (d - v[i] as u64 * u[half + i] as u64 % d) % d;
    }
    (acc % d) as u32
}

impl TorusInstance {
    pub fn size(&self) -> usize {
        self.l
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    /// Rows ordered generator-major, then `b`, then `a`.
    pub fn stabilizer_rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Syndrome of a torus operator: one value per stabilizer row.
    pub fn syndrome(&self, op: &[u32]) -> Vec<u32> {
        let d = self.code.d();
        self.rows.iter().map(|r| finite_form(r, op, d)).collect()
    }
}

pub fn instantiate_torus(code: &StabilizerCode, l: usize) -> Result<TorusInstance> {
    let r = code.range() as usize;
    if l <= 2 * r {
        return Err(Error::Torus {
            size: l,
            msg: format!("needs L > 2·range = {}", 2 * r),
        });
    }
    let d = code.d();
    let mut rows = Vec::with_capacity(code.t() * l * l);
    for g in code.generators() {
        for b in 0..l as i32 {
            for a in 0..l as i32 {
                rows.push(materialize(&g.shift(a, b), l));
            }
        }
    }
    // translation invariance: checking the untranslated generators suffices
    for (j, _) in code.generators().iter().enumerate() {
        let base = &rows[j * l * l];
        for (i, other) in rows.iter().enumerate() {
            if finite_form(base, other, d) != 0 {
                return Err(Error::Commutation {
                    first: format!("S{}", j + 1),
                    second: format!("S{}", i / (l * l) + 1),
                    monomial: format!("torus offset {}", i % (l * l)),
                });
            }
        }
    }
    Ok(TorusInstance {
        l,
        code: code.clone(),
        rows,
    })
}

fn torus_distance(a: usize, b: usize, l: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(l - d)
}

/// Lays `ell` copies of `px` end to end and checks that its syndrome on the
/// torus is `anyon` at the start, `-anyon` shifted to the far end, and
/// nothing else.
pub fn verify_string_endpoints(
    inst: &TorusInstance,
    s: &StringOperator,
    ell: usize,
) -> Result<bool> {
    let l = inst.l;
    let d = inst.code.d();
    let span = ell * s.nx;
    if 2 * span >= l {
        return Err(Error::Torus {
            size: l,
            msg: format!("string of length {span} needs L > {}", 2 * span),
        });
    }
    let mut op = PauliVector::zero(inst.code.w(), d);
    for k in 0..ell {
        op.add_scaled(&s.px.shift((k * s.nx) as i32, 0), 1);
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for f in op.entries() {
        for ((a, b), _) in f.terms() {
            xs.push(a);
            ys.push(b);
        }
    }
    let width = |v: &[i32]| {
        v.iter()
            .max()
            .zip(v.iter().min())
            .map_or(0, |(hi, lo)| (hi - lo) as usize)
    };
    if width(&xs) >= l || width(&ys) >= l {
        return Err(Error::Torus {
            size: l,
            msg: "string support wraps the torus".into(),
        });
    }
    let syn = inst.syndrome(&materialize(&op, l));
    let start = materialize_syndrome(&s.anyon, l);
    let end = materialize_syndrome(&s.anyon.shift(span as i32, 0).scale(-1), l);
    let rho = s.anyon.range() as usize;
    let cells = l * l;
    for (i, &v) in syn.iter().enumerate() {
        let cell = i % cells;
        let (a, b) = (cell % l, cell / l);
        let near_start = torus_distance(a, 0, l).max(torus_distance(b, 0, l)) <= rho;
        let near_end = torus_distance(a, span % l, l).max(torus_distance(b, 0, l)) <= rho;
        let expected = match (near_start, near_end) {
            (true, false) => start[i],
            (false, true) => end[i],
            (true, true) => (start[i] + end[i]) % d,
            (false, false) => 0,
        };
        if v != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ground-state degeneracy `d^(w L²) / |S|`, with the stabilizer group
/// order read from the Smith form of the row matrix taken mod d.
pub fn torus_gsd(inst: &TorusInstance) -> BigUint {
    let d = inst.code.d() as i64;
    let rows: Vec<Vec<i64>> = inst
        .rows
        .iter()
        .map(|r| r.iter().map(|&e| e as i64).collect())
        .collect();
    let diag = snf_mod(&Matrix::from_rows(rows), d);
    let group = diag.iter().fold(BigUint::from(1u32), |acc, &s| {
        acc * BigUint::from((d / s.gcd(&d)) as u64)
    });
    let qudits = (inst.code.w() * inst.l * inst.l) as u32;
    BigUint::from(d as u64).pow(qudits) / group
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codelib::builtin;

    #[test]
    fn toric_torus_shape() {
        let inst = instantiate_torus(&builtin("toric").unwrap(), 4).unwrap();
        assert_eq!(inst.stabilizer_rows().len(), 32);
        assert_eq!(inst.stabilizer_rows()[0].len(), 2 * 2 * 16);
        assert_eq!(torus_gsd(&inst), BigUint::from(4u32));
    }

    #[test]
    fn trivial_torus_is_weight_one() {
        let inst = instantiate_torus(&builtin("trivial").unwrap(), 3).unwrap();
        assert_eq!(inst.stabilizer_rows().len(), 18);
        assert!(inst
            .stabilizer_rows()
            .iter()
            .all(|r| r.iter().filter(|&&e| e != 0).count() == 1));
        assert_eq!(torus_gsd(&inst), BigUint::from(1u32));
    }

    #[test]
    fn too_small_torus() {
        assert!(matches!(
            instantiate_torus(&builtin("toric").unwrap(), 2),
            Err(Error::Torus { .. })
        ));
    }
}
