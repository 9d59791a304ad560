//! End-to-end extraction of Abelian anyon data: topological-order check,
//! string operators, fusion, spins, braiding and e/m-pair decomposition.

mod solve;
mod stats;

pub use solve::{
    anyon_equivalent, basis_and_fusion, check_to_condition, solve_anyon_equation, sweep_n,
    y_string, y_strings, AnyonSolution, BasisAnyon, Fusion, Sweep, SweepEntry, ToReport,
};
pub use stats::{
    braiding, braiding_direct, rearrange_em_pairs, stable_spin, statistics, t_junction,
    topological_spin, EmDecomposition, EmPair, Statistics,
};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{is_prime, LaurentPoly};
use crate::matrixlab::Region;
use crate::symplectic::{excitation_map, PauliVector, StabilizerCode, Syndrome};

pub const DEFAULT_K: usize = 6;
pub const DEFAULT_M: usize = 3;
pub const DEFAULT_MPRIME: usize = 4;
pub const DEFAULT_NMAX: usize = 8;
pub const DEFAULT_Q: usize = 2;

/// Operators moving `anyon` by `nx` steps along +x and `ny` steps along -y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringOperator {
    pub anyon: Syndrome,
    pub nx: usize,
    /// `ε(px) = (1 - x^nx) anyon`
    pub px: PauliVector,
    pub ny: usize,
    /// `ε(py) = (1 - y^-ny) anyon`
    pub py: PauliVector,
}

impl StringOperator {
    pub fn vacuum(code: &StabilizerCode) -> Self {
        StringOperator {
            anyon: Syndrome::zero(code.t(), code.d()),
            nx: 1,
            px: PauliVector::zero(code.w(), code.d()),
            ny: 1,
            py: PauliVector::zero(code.w(), code.d()),
        }
    }

    /// Re-checks both defining equations with the excitation map.
    pub fn verify(&self, code: &StabilizerCode) -> Result<bool> {
        let d = code.d();
        let sx = &LaurentPoly::one(d) - &LaurentPoly::monomial(1, self.nx as i32, 0, d);
        let sy = &LaurentPoly::one(d) - &LaurentPoly::monomial(1, 0, -(self.ny as i32), d);
        Ok(excitation_map(code, &self.px)? == self.anyon.mul_poly(&sx)
            && excitation_map(code, &self.py)? == self.anyon.mul_poly(&sy))
    }

    /// True for the all-zero string, which composes with any step.
    pub fn is_trivial(&self) -> bool {
        self.anyon.is_zero() && self.px.is_zero() && self.py.is_zero()
    }

    /// String of the fused anyon `self × other`: the operators add.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.is_trivial() {
            return Ok(self.clone());
        }
        if self.is_trivial() {
            return Ok(other.clone());
        }
        if (self.nx, self.ny) != (other.nx, other.ny) {
            return Err(Error::Invalid(format!(
                "cannot compose strings with steps ({}, {}) and ({}, {})",
                self.nx, self.ny, other.nx, other.ny
            )));
        }
        Ok(StringOperator {
            anyon: &self.anyon + &other.anyon,
            nx: self.nx,
            px: &self.px + &other.px,
            ny: self.ny,
            py: &self.py + &other.py,
        })
    }

    pub fn scale(&self, c: i64) -> Self {
        StringOperator {
            anyon: self.anyon.scale(c),
            nx: self.nx,
            px: self.px.scale(c),
            ny: self.ny,
            py: self.py.scale(c),
        }
    }
}

/// A basis anyon with its order and strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonClass {
    pub order: u32,
    pub string: StringOperator,
}

impl AnyonClass {
    pub fn anyon(&self) -> &Syndrome {
        &self.string.anyon
    }
}

/// Fusion, spin and braiding data of the basis anyons. Phases are exponents
/// `e` of `exp(2πi e / d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonTheory {
    pub d: u32,
    pub basis: Vec<AnyonClass>,
    pub spins: Vec<u32>,
    pub braiding: Vec<Vec<u32>>,
    /// string extension at which spins and braiding stabilized
    pub q: usize,
}

impl AnyonTheory {
    /// Number of anyon types: the product of basis orders.
    pub fn anyon_count(&self) -> BigUint {
        self.basis
            .iter()
            .fold(BigUint::from(1u32), |acc, a| acc * a.order)
    }

    pub fn orders(&self) -> Vec<u32> {
        self.basis.iter().map(|a| a.order).collect()
    }

    /// String of `Σ c_i v_i`.
    pub fn combination(&self, coeffs: &[i64]) -> StringOperator {
        assert_eq!(
            coeffs.len(),
            self.basis.len(),
            "one coefficient per basis anyon"
        );
        let first = &self.basis[0].string;
        let mut acc = StringOperator {
            anyon: Syndrome::zero(first.anyon.t(), self.d),
            nx: first.nx,
            px: PauliVector::zero(first.px.w(), self.d),
            ny: first.ny,
            py: PauliVector::zero(first.py.w(), self.d),
        };
        for (c, a) in coeffs.iter().zip(&self.basis) {
            if c % self.d as i64 != 0 {
                acc = acc.compose(&a.string.scale(*c)).expect("common steps");
            }
        }
        acc
    }

    /// Spin exponent of `Σ c_i v_i` from its own composite string.
    pub fn spin_of(&self, coeffs: &[i64]) -> Result<u32> {
        Ok(stable_spin(&self.combination(coeffs), self.q)?.0)
    }

    /// `θ(a × b) - θ(a) - θ(b)` for combinations `a`, `b`.
    pub fn braiding_of(&self, a: &[i64], b: &[i64]) -> Result<u32> {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let d = self.d as i64;
        let e = self.spin_of(&sum)? as i64 - self.spin_of(a)? as i64 - self.spin_of(b)? as i64;
        Ok(e.rem_euclid(d) as u32)
    }
}

/// Knobs of the analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    pub region: Region,
    pub nmax: usize,
    /// first string extension tried
    pub q: usize,
}

impl Options {
    /// Defaults, with the truncation widened if the code's range needs it.
    pub fn for_code(code: &StabilizerCode) -> Self {
        let k = DEFAULT_K.max(DEFAULT_MPRIME + code.range() as usize);
        Options {
            region: Region::square(k, DEFAULT_M, DEFAULT_MPRIME).expect("valid defaults"),
            nmax: DEFAULT_NMAX,
            q: DEFAULT_Q,
        }
    }
}

/// Everything `analyze` found. Later stages are absent when an earlier one
/// failed or did not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub options: Options,
    pub to_condition: ToReport,
    /// anyon count for n = 1..=nmax
    pub counts: Vec<usize>,
    pub chosen_n: Option<usize>,
    pub theory: Option<AnyonTheory>,
    pub em: Option<EmDecomposition>,
    /// why the e/m rearrangement was skipped
    pub em_note: Option<String>,
}

/// Prime `p` such that every basis anyon has order `p` and `p | d`.
pub fn uniform_prime_order(theory: &AnyonTheory) -> Option<u32> {
    let p = theory.basis.first()?.order;
    (is_prime(p) && theory.d.is_multiple_of(p) && theory.basis.iter().all(|a| a.order == p)).then_some(p)
}

/// Runs the whole pipeline on a validated code.
pub fn analyze(code: &StabilizerCode, opts: &Options) -> Result<Analysis> {
    crate::symplectic::validate_code(code).into_result()?;
    let to = check_to_condition(code, &opts.region)?;
    let mut out = Analysis {
        options: *opts,
        to_condition: to,
        counts: Vec::new(),
        chosen_n: None,
        theory: None,
        em: None,
        em_note: None,
    };
    if !out.to_condition.holds {
        return Ok(out);
    }
    let sweep = sweep_n(code, opts.nmax, &opts.region)?;
    out.counts = sweep.counts();
    let chosen = sweep.chosen_entry();
    out.chosen_n = Some(chosen.n);
    let anyons: Vec<Syndrome> = chosen
        .fusion
        .basis
        .iter()
        .map(|b| b.anyon.clone())
        .collect();
    let mut found = None;
    let mut missing = 0;
    for ny in 1..=opts.nmax {
        let pys = y_strings(code, &anyons, ny, &opts.region)?;
        match pys.iter().position(Option::is_none) {
            None => {
                found = Some((ny, pys.into_iter().map(Option::unwrap).collect::<Vec<_>>()));
                break;
            }
            Some(i) => missing = i,
        }
    }
    let Some((ny, pys)) = found else {
        return Err(Error::NoYString {
            anyon: missing,
            nmax: opts.nmax,
        });
    };
    let basis: Vec<AnyonClass> = chosen
        .fusion
        .basis
        .iter()
        .zip(pys)
        .map(|(b, py)| AnyonClass {
            order: b.order,
            string: StringOperator {
                anyon: b.anyon.clone(),
                nx: chosen.n,
                px: b.px.clone(),
                ny,
                py,
            },
        })
        .collect();
    let strings: Vec<StringOperator> = basis.iter().map(|a| a.string.clone()).collect();
    let st = statistics(&strings, opts.q, code.d())?;
    let theory = AnyonTheory {
        d: code.d(),
        basis,
        spins: st.spins,
        braiding: st.braiding,
        q: st.q,
    };
    match uniform_prime_order(&theory) {
        Some(p) => match rearrange_em_pairs(&theory, p) {
            Ok(em) => out.em = Some(em),
            Err(e) => out.em_note = Some(format!("rearrangement skipped: {e}")),
        },
        None if theory.basis.is_empty() => {}
        None => {
            out.em_note =
                Some("rearrangement needs every basis anyon to have the same prime order".into())
        }
    }
    out.theory = Some(theory);
    Ok(out)
}
