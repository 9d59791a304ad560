//! Pauli operators as polynomial vectors, the symplectic form and the
//! excitation map.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Translation-invariant Pauli operator modulo phase: a length-`2w` column,
/// X-block first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliVector {
    w: usize,
    entries: Vec<LaurentPoly>,
}

impl PauliVector {
    pub fn zero(w: usize, d: u32) -> Self {
        PauliVector {
            w,
            entries: vec![LaurentPoly::zero(d); 2 * w],
        }
    }

    /// Build from explicit X and Z blocks of equal length.
    pub fn from_blocks(xs: Vec<LaurentPoly>, zs: Vec<LaurentPoly>) -> Result<Self> {
        if xs.len() != zs.len() {
            return Err(Error::WidthMismatch {
                left: xs.len(),
                right: zs.len(),
            });
        }
        let w = xs.len();
        let mut entries = xs;
        entries.extend(zs);
        Self::from_entries(w, entries)
    }

    pub fn from_entries(w: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != 2 * w || w == 0 {
            return Err(Error::WidthMismatch {
                left: entries.len(),
                right: 2 * w,
            });
        }
        let d = entries[0].modulus();
        if let Some(e) = entries.iter().find(|e| e.modulus() != d) {
            return Err(Error::ModulusMismatch(d, e.modulus()));
        }
        Ok(PauliVector { w, entries })
    }

    /// Single-site generator on slot `slot` of the `2w` slots (X slots first).
    pub fn unit(slot: usize, w: usize, d: u32) -> Self {
        let mut v = Self::zero(w, d);
        v.entries[slot] = LaurentPoly::one(d);
        v
    }

    /// 𝒳_i with zero-based `i`.
    pub fn x(i: usize, w: usize, d: u32) -> Self {
        Self::unit(i, w, d)
    }

    /// 𝒵_i with zero-based `i`.
    pub fn z(i: usize, w: usize, d: u32) -> Self {
        Self::unit(w + i, w, d)
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn modulus(&self) -> u32 {
        self.entries[0].modulus()
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn entry(&self, slot: usize) -> &LaurentPoly {
        &self.entries[slot]
    }

    pub fn x_block(&self) -> &[LaurentPoly] {
        &self.entries[..self.w]
    }

    pub fn z_block(&self) -> &[LaurentPoly] {
        &self.entries[self.w..]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn range(&self) -> i32 {
        self.entries
            .iter()
            .map(LaurentPoly::range)
            .max()
            .unwrap_or(0)
    }

    pub fn shift(&self, a: i32, b: i32) -> Self {
        self.map(|e| e.shift(a, b))
    }

    pub fn scale(&self, c: i64) -> Self {
        self.map(|e| e.scale(c))
    }

    /// Entrywise product with a ring element.
    pub fn mul_poly(&self, f: &LaurentPoly) -> Self {
        self.map(|e| f * e)
    }

    pub fn add_scaled(&mut self, other: &Self, c: i64) {
        assert_eq!(self.w, other.w, "width mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, c);
        }
    }

    fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        PauliVector {
            w: self.w,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl Add<&PauliVector> for &PauliVector {
    type Output = PauliVector;
    fn add(self, o: &PauliVector) -> PauliVector {
        let mut out = self.clone();
        out.add_scaled(o, 1);
        out
    }
}

impl Sub<&PauliVector> for &PauliVector {
    type Output = PauliVector;
    fn sub(self, o: &PauliVector) -> PauliVector {
        let mut out = self.clone();
        out.add_scaled(o, -1);
        out
    }
}

impl Neg for &PauliVector {
    type Output = PauliVector;
    fn neg(self) -> PauliVector {
        self.scale(-1)
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.x_block().iter().map(|e| e.to_string()).collect();
        let z: Vec<String> = self.z_block().iter().map(|e| e.to_string()).collect();
        write!(f, "[{} | {}]", x.join(", "), z.join(", "))
    }
}

/// Excitation pattern: one polynomial per stabilizer generator.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    entries: Vec<LaurentPoly>,
}

impl Syndrome {
    pub fn new(entries: Vec<LaurentPoly>) -> Self {
        assert!(!entries.is_empty(), "syndrome must have at least one entry");
        Syndrome { entries }
    }

    pub fn zero(t: usize, d: u32) -> Self {
        Syndrome::new(vec![LaurentPoly::zero(d); t])
    }

    /// One-hot row with `f` in slot `i`.
    pub fn unit(i: usize, t: usize, f: LaurentPoly) -> Self {
        let mut s = Self::zero(t, f.modulus());
        s.entries[i] = f;
        s
    }

    pub fn t(&self) -> usize {
        self.entries.len()
    }

    pub fn modulus(&self) -> u32 {
        self.entries[0].modulus()
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn range(&self) -> i32 {
        self.entries
            .iter()
            .map(LaurentPoly::range)
            .max()
            .unwrap_or(0)
    }

    pub fn shift(&self, a: i32, b: i32) -> Self {
        Syndrome::new(self.entries.iter().map(|e| e.shift(a, b)).collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        Syndrome::new(self.entries.iter().map(|e| e.scale(c)).collect())
    }

    pub fn mul_poly(&self, f: &LaurentPoly) -> Self {
        Syndrome::new(self.entries.iter().map(|e| f * e).collect())
    }

    pub fn add_scaled(&mut self, other: &Self, c: i64) {
        assert_eq!(self.t(), other.t(), "length mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, c);
        }
    }
}

impl Add<&Syndrome> for &Syndrome {
    type Output = Syndrome;
    fn add(self, o: &Syndrome) -> Syndrome {
        let mut out = self.clone();
        out.add_scaled(o, 1);
        out
    }
}

impl Sub<&Syndrome> for &Syndrome {
    type Output = Syndrome;
    fn sub(self, o: &Syndrome) -> Syndrome {
        let mut out = self.clone();
        out.add_scaled(o, -1);
        out
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", e.join(", "))
    }
}

/// `antipode(v1)^T Λ v2` with `Λ = [[0, I], [-I, 0]]`.
pub fn symplectic_dot(v1: &PauliVector, v2: &PauliVector) -> Result<LaurentPoly> {
    if v1.w != v2.w {
        return Err(Error::WidthMismatch {
            left: v1.w,
            right: v2.w,
        });
    }
    let d = v1.modulus();
    if d != v2.modulus() {
        return Err(Error::ModulusMismatch(d, v2.modulus()));
    }
    let mut acc = LaurentPoly::zero(d);
    for i in 0..v1.w {
        let (x1, z1) = (&v1.entries[i], &v1.entries[v1.w + i]);
        let (x2, z2) = (&v2.entries[i], &v2.entries[v2.w + i]);
        if !x1.is_zero() && !z2.is_zero() {
            acc.add_scaled(&(&x1.antipode() * z2), 1);
        }
        if !z1.is_zero() && !x2.is_zero() {
            acc.add_scaled(&(&z1.antipode() * x2), -1);
        }
    }
    Ok(acc)
}

/// Constant coefficient of `symplectic_dot`.
pub fn dot_constant(v1: &PauliVector, v2: &PauliVector) -> Result<u32> {
    // Only pairs of terms with equal exponents contribute to the constant
    // term, so skip the full product.
    if v1.w != v2.w {
        return Err(Error::WidthMismatch {
            left: v1.w,
            right: v2.w,
        });
    }
    let d = v1.modulus() as i64;
    let pair = |a: &LaurentPoly, b: &LaurentPoly| -> i64 {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        small
            .terms()
            .map(|((p, q), c)| c as i64 * large.coeff(p, q) as i64 % d)
            .sum()
    };
    let mut acc = 0i64;
    for i in 0..v1.w {
        acc += pair(&v1.entries[i], &v2.entries[v2.w + i]);
        acc -= pair(&v1.entries[v1.w + i], &v2.entries[i]);
    }
    Ok(acc.rem_euclid(d) as u32)
}

/// True iff the two operators commute (constant term of the dot vanishes).
pub fn commutes(v1: &PauliVector, v2: &PauliVector) -> Result<bool> {
    Ok(dot_constant(v1, v2)? == 0)
}

/// Translation-invariant stabilizer code.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerCode {
    d: u32,
    w: usize,
    generators: Vec<PauliVector>,
}

impl StabilizerCode {
    /// Checks shapes and nonzero generators; commutation is left to
    /// [`validate_code`].
    pub fn new(d: u32, w: usize, generators: Vec<PauliVector>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidModulus(d));
        }
        if generators.is_empty() {
            return Err(Error::Invalid("a code needs at least one generator".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.w != w {
                return Err(Error::WidthMismatch {
                    left: g.w,
                    right: w,
                });
            }
            if g.modulus() != d {
                return Err(Error::ModulusMismatch(d, g.modulus()));
            }
            if g.is_zero() {
                return Err(Error::ZeroGenerator(i));
            }
        }
        Ok(StabilizerCode { d, w, generators })
    }

    /// `new` followed by `validate_code`, failing on the first offending pair.
    pub fn validated(d: u32, w: usize, generators: Vec<PauliVector>) -> Result<Self> {
        let code = Self::new(d, w, generators)?;
        validate_code(&code).into_result()?;
        Ok(code)
    }

    /// Quarter turn `x -> y`, `y -> x^-1`: strings along `-y` become
    /// strings along `+x`.
    pub fn rotated(&self) -> Self {
        StabilizerCode {
            d: self.d,
            w: self.w,
            generators: self
                .generators
                .iter()
                .map(|g| g.map(|e| e.map_exponents(|a, b| (-b, a))))
                .collect(),
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn t(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliVector] {
        &self.generators
    }

    /// Max absolute exponent appearing in any generator.
    pub fn range(&self) -> i32 {
        self.generators
            .iter()
            .map(PauliVector::range)
            .max()
            .unwrap_or(0)
    }

    /// Syndromes of the `2w` single-site Paulis, X slots first.
    pub fn single_site_syndromes(&self) -> Vec<Syndrome> {
        (0..2 * self.w)
            .map(|s| excitation_map(self, &PauliVector::unit(s, self.w, self.d)).expect("width"))
            .collect()
    }
}

impl fmt::Debug for StabilizerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d = {}, w = {}, t = {}", self.d, self.w, self.t())?;
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "  S{}: {:?}", i + 1, g)?;
        }
        Ok(())
    }
}

/// A generator pair whose symplectic dot is not identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationFailure {
    /// zero-based generator indices, `first <= second`
    pub first: usize,
    pub second: usize,
    pub dot: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<CommutationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failures.into_iter().next() {
            None => Ok(()),
            Some(f) => {
                let ((a, b), c) = f.dot.terms().next().expect("nonzero dot");
                let mono = LaurentPoly::monomial(c as i64, a, b, f.dot.modulus());
                Err(Error::Commutation {
                    first: format!("S{}", f.first + 1),
                    second: format!("S{}", f.second + 1),
                    monomial: mono.to_string(),
                })
            }
        }
    }
}

/// Every pair of generators (including each with itself) must have an
/// identically vanishing symplectic dot, since all translates belong to the
/// stabilizer group.
pub fn validate_code(code: &StabilizerCode) -> ValidationReport {
    let mut failures = Vec::new();
    for i in 0..code.t() {
        for j in i..code.t() {
            let dot = symplectic_dot(&code.generators[i], &code.generators[j]).expect("same width");
            if !dot.is_zero() {
                failures.push(CommutationFailure {
                    first: i,
                    second: j,
                    dot,
                });
            }
        }
    }
    ValidationReport { failures }
}

/// `ε(P)_i = S_i · P`
pub fn excitation_map(code: &StabilizerCode, p: &PauliVector) -> Result<Syndrome> {
    if p.w != code.w {
        return Err(Error::WidthMismatch {
            left: p.w,
            right: code.w,
        });
    }
    let entries = code
        .generators
        .iter()
        .map(|s| symplectic_dot(s, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Syndrome::new(entries))
}
