use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrixlab::{
    eliminate, snf, span_check, td_offset, td_truncated, truncate_row, CoeffMatrix, EchelonResult,
    Layout, Region, Snf,
};
use crate::symplectic::{excitation_map, PauliVector, StabilizerCode, Syndrome};
use crate::IntMatrix;

/// Verdict of the topological-order check. Witnesses are local operators
/// that commute with every stabilizer but are not generated by them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToReport {
    pub holds: bool,
    pub witnesses: Vec<PauliVector>,
}

/// One solution of `ε(px) = (1 - x^n) anyon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonSolution {
    pub anyon: Syndrome,
    pub px: PauliVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisAnyon {
    pub anyon: Syndrome,
    pub px: PauliVector,
    pub order: u32,
    /// integer coefficients over `Fusion::generators`
    pub combination: Vec<i64>,
}

/// Result of greedy generator selection followed by the Smith form of the
/// anyon relation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fusion {
    /// pool indices of the selected generators
    pub generators: Vec<usize>,
    /// row `i`: the least multiple of generator `i` that reduces to earlier
    /// generators, written as a relation
    pub relations: Vec<Vec<i64>>,
    /// basis anyons, vacuum rows dropped
    pub basis: Vec<BasisAnyon>,
}

impl Fusion {
    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.relations.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub n: usize,
    pub pool: Vec<AnyonSolution>,
    pub fusion: Fusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sweep {
    pub entries: Vec<SweepEntry>,
    pub chosen: usize,
}

impl Sweep {
    /// Number of basis anyons for each n, starting at n = 1.
    pub fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.fusion.basis.len()).collect()
    }

    pub fn chosen_entry(&self) -> &SweepEntry {
        &self.entries[self.chosen - 1]
    }
}

/// `ε` of each single-slot Pauli, X block first.
fn single_pauli_syndromes(code: &StabilizerCode) -> Vec<Vec<LaurentPoly>> {
    let (w, d) = (code.w(), code.d());
    (0..2 * w)
        .map(|i| {
            excitation_map(code, &PauliVector::unit(i, w, d))
                .expect("matching width")
                .entries()
                .to_vec()
        })
        .collect()
}

/// Stacks `td(source, mx, my)` for each source.
fn td_matrix(
    sources: &[Vec<LaurentPoly>],
    mx: usize,
    my: usize,
    layout: Layout,
    d: u32,
) -> Result<CoeffMatrix> {
    let mut rows = Vec::with_capacity(sources.len() * (2 * mx + 1) * (2 * my + 1));
    for s in sources {
        rows.extend(td_truncated(s, mx, my, &layout)?);
    }
    CoeffMatrix::new(d, layout, rows)
}

/// Reads a relation on a `td_matrix` of `blocks` unit sources back as one
/// polynomial per source.
fn decode_relation(rel: &[u32], blocks: usize, mx: usize, my: usize, d: u32) -> Vec<LaurentPoly> {
    let per = (2 * mx + 1) * (2 * my + 1);
    (0..blocks)
        .map(|s| {
            let mut f = LaurentPoly::zero(d);
            for (idx, &c) in rel[s * per..(s + 1) * per].iter().enumerate() {
                if c != 0 {
                    let (a, b) = td_offset(idx, mx, my);
                    f.add_term(a, b, c as i64);
                }
            }
            f
        })
        .collect()
}

fn extent_of(polys: &[LaurentPoly]) -> (usize, usize) {
    polys.iter().fold((0, 0), |(ex, ey), f| {
        let (a, b) = f.extent();
        (ex.max(a as usize), ey.max(b as usize))
    })
}

/// Translates of all single-site syndromes, eliminated; spans the local
/// syndromes supported in its window.
struct LocalModule {
    layout: Layout,
    mx: usize,
    my: usize,
    w: usize,
    d: u32,
    ech: EchelonResult,
}

impl LocalModule {
    /// Window large enough to test syndromes within `extent` of the origin.
    fn covering(code: &StabilizerCode, extent: (usize, usize), min_m: usize) -> Result<Self> {
        let r = code.range() as usize;
        let mx = (extent.0 + r + 1).max(min_m);
        let my = (extent.1 + r + 1).max(min_m);
        let layout = Layout::new(code.t(), mx + r, my + r);
        let m1 = td_matrix(&single_pauli_syndromes(code), mx, my, layout, code.d())?;
        Ok(LocalModule {
            layout,
            mx,
            my,
            w: code.w(),
            d: code.d(),
            ech: eliminate(&m1),
        })
    }

    fn row(&self, s: &Syndrome) -> Result<Vec<u32>> {
        truncate_row(s.entries(), &self.layout)
    }

    fn is_local(&self, s: &Syndrome) -> Result<bool> {
        Ok(span_check(&self.ech, &self.row(s)?).is_some())
    }

    /// Some `P` with `ε(P) = s`, if one exists inside the window.
    fn preimage(&self, s: &Syndrome) -> Result<Option<PauliVector>> {
        let Some(alpha) = span_check(&self.ech, &self.row(s)?) else {
            return Ok(None);
        };
        let coeffs = self.ech.combine(&alpha);
        let parts = decode_relation(&coeffs, 2 * self.w, self.mx, self.my, self.d);
        Ok(Some(PauliVector::from_entries(self.w, parts)?))
    }
}

/// Checks that every local operator commuting with all stabilizers (up to
/// range `m`) is generated by stabilizer translates (up to range `m'`).
pub fn check_to_condition(code: &StabilizerCode, region: &Region) -> Result<ToReport> {
    let (d, w, t) = (code.d(), code.w(), code.t());
    let (m, mp) = (region.m, region.mprime);
    let syn_layout = Layout::new(t, region.kx, region.ky);
    let m1 = td_matrix(&single_pauli_syndromes(code), m, m, syn_layout, d)?;
    let ech1 = eliminate(&m1);

    let pauli_layout = Layout::new(2 * w, region.kx, region.ky);
    let daggered: Vec<Vec<LaurentPoly>> = code
        .generators()
        .iter()
        .map(|s| s.entries().iter().map(|f| f.antipode()).collect())
        .collect();
    let m2 = td_matrix(&daggered, mp, mp, pauli_layout, d)?;
    let ech2 = eliminate(&m2);

    let mut witnesses = Vec::new();
    for rel in ech1.zero_relations() {
        let op = PauliVector::from_entries(w, decode_relation(rel, 2 * w, m, m, d))?;
        if op.is_zero() {
            continue;
        }
        debug_assert!(excitation_map(code, &op)?.is_zero());
        let dag: Vec<LaurentPoly> = op.entries().iter().map(|f| f.antipode()).collect();
        if span_check(&ech2, &truncate_row(&dag, &pauli_layout)?).is_none() {
            witnesses.push(op);
        }
    }
    Ok(ToReport {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// All anyons `v` (with strings `px`) found as zero-row relations of
/// `[td(ε(P_i)); td((1 - x^n) e_j)]`.
pub fn solve_anyon_equation(
    code: &StabilizerCode,
    n: usize,
    region: &Region,
) -> Result<Vec<AnyonSolution>> {
    if n == 0 {
        return Err(Error::Invalid("string step n must be at least 1".into()));
    }
    let (d, w, t) = (code.d(), code.w(), code.t());
    let r = code.range() as usize;
    let (mx, my) = (region.m + n.div_ceil(2), region.m);
    let layout = Layout::new(t, region.kx.max(mx + r.max(n)), region.ky.max(my + r));
    let step = &LaurentPoly::one(d) - &LaurentPoly::monomial(1, n as i32, 0, d);
    let mut sources = single_pauli_syndromes(code);
    for j in 0..t {
        sources.push(Syndrome::unit(j, t, step.clone()).entries().to_vec());
    }
    let m3 = td_matrix(&sources, mx, my, layout, d)?;
    let ech = eliminate(&m3);

    let mut out: Vec<AnyonSolution> = Vec::new();
    for rel in ech.zero_relations() {
        let parts = decode_relation(rel, 2 * w + t, mx, my, d);
        let anyon = Syndrome::new(parts[2 * w..].iter().map(|f| -f).collect());
        if anyon.is_zero() || out.iter().any(|s| s.anyon == anyon) {
            continue;
        }
        let px = PauliVector::from_entries(w, parts[..2 * w].to_vec())?;
        if excitation_map(code, &px)? != anyon.mul_poly(&step) {
            return Err(Error::Invalid(format!(
                "anyon equation residual at n = {n}"
            )));
        }
        out.push(AnyonSolution { anyon, px });
    }
    Ok(out)
}

/// True iff `v - v'` is a local syndrome.
pub fn anyon_equivalent(
    code: &StabilizerCode,
    v: &Syndrome,
    v2: &Syndrome,
    region: &Region,
) -> Result<bool> {
    if v.t() != v2.t() {
        return Err(Error::LengthMismatch {
            got: v2.t(),
            expected: v.t(),
        });
    }
    let diff = v - v2;
    if diff.is_zero() {
        return Ok(true);
    }
    LocalModule::covering(code, extent_of(diff.entries()), region.m)?.is_local(&diff)
}

/// Greedy generator selection from the pool, then the Smith form of the
/// relation matrix to obtain basis anyons and their orders.
pub fn basis_and_fusion(
    code: &StabilizerCode,
    pool: &[AnyonSolution],
    region: &Region,
) -> Result<Fusion> {
    let d = code.d();
    if pool.is_empty() {
        return Ok(Fusion {
            generators: Vec::new(),
            relations: Vec::new(),
            basis: Vec::new(),
        });
    }
    let extent = pool.iter().fold((0, 0), |(ex, ey), s| {
        let (a, b) = extent_of(s.anyon.entries());
        (ex.max(a), ey.max(b))
    });
    let module = LocalModule::covering(code, extent, region.m)?;
    let mut ech = module.ech.clone();
    ech.reset_relations(0);

    let mut generators = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for (i, sol) in pool.iter().enumerate() {
        let row = module.row(&sol.anyon)?;
        if span_check(&ech, &row).is_some() {
            continue;
        }
        let k = generators.len();
        let (c, alpha) = (2..=d)
            .find_map(|c| {
                let scaled: Vec<u32> = row.iter().map(|&e| (e * c) % d).collect();
                span_check(&ech, &scaled).map(|a| (c, a))
            })
            .expect("d times any row vanishes");
        let coeffs = ech.combine(&alpha);
        let mut rel = vec![0i64; k + 1];
        for (j, &cj) in coeffs.iter().enumerate() {
            rel[j] = -(cj as i64);
        }
        rel[k] = c as i64;
        relations.push(rel);
        ech.extend_relations(1);
        let mut unit = vec![0; k + 1];
        unit[k] = 1;
        ech.insert(row, unit);
        generators.push(i);
    }
    let k = generators.len();
    for rel in relations.iter_mut() {
        rel.resize(k, 0);
    }
    let Snf { a, r, .. } = snf(&IntMatrix::from_rows(relations.clone()));
    let mut basis = Vec::new();
    for j in 0..k {
        let order = a.get(j, j).unsigned_abs();
        if order == 1 {
            continue;
        }
        let combination = r.row(j).to_vec();
        let mut anyon = Syndrome::zero(code.t(), d);
        let mut px = PauliVector::zero(code.w(), d);
        for (&c, &g) in combination.iter().zip(&generators) {
            anyon.add_scaled(&pool[g].anyon, c);
            px.add_scaled(&pool[g].px, c);
        }
        basis.push(BasisAnyon {
            anyon,
            px,
            order: order as u32,
            combination,
        });
    }
    Ok(Fusion {
        generators,
        relations,
        basis,
    })
}

/// Solves the anyon equation for n = 1..=nmax and keeps the smallest n with
/// the most basis anyons.
pub fn sweep_n(code: &StabilizerCode, nmax: usize, region: &Region) -> Result<Sweep> {
    if nmax == 0 {
        return Err(Error::Invalid("nmax must be at least 1".into()));
    }
    let entries = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let pool = solve_anyon_equation(code, n, region)?;
            let fusion = basis_and_fusion(code, &pool, region)?;
            Ok(SweepEntry { n, pool, fusion })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = entries
        .iter()
        .map(|e| e.fusion.basis.len())
        .max()
        .unwrap_or(0);
    let chosen = entries
        .iter()
        .find(|e| e.fusion.basis.len() == best)
        .map(|e| e.n)
        .unwrap_or(1);
    Ok(Sweep { entries, chosen })
}

/// Strings `py` with `ε(py) = (1 - y^-ny) v` for each anyon, solved in one
/// shared window; `None` where no solution fits.
pub fn y_strings(
    code: &StabilizerCode,
    anyons: &[Syndrome],
    ny: usize,
    region: &Region,
) -> Result<Vec<Option<PauliVector>>> {
    let d = code.d();
    if ny == 0 {
        return Err(Error::Invalid("string step ny must be at least 1".into()));
    }
    // centre the target so the window stays symmetric
    let s = (ny / 2) as i32;
    let step = &LaurentPoly::monomial(1, 0, s, d) - &LaurentPoly::monomial(1, 0, s - ny as i32, d);
    let targets: Vec<Syndrome> = anyons.iter().map(|v| v.mul_poly(&step)).collect();
    let extent = targets.iter().fold((0, 0), |(ex, ey), u| {
        let (a, b) = extent_of(u.entries());
        (ex.max(a), ey.max(b))
    });
    let module = LocalModule::covering(code, extent, region.m)?;
    let back = &LaurentPoly::one(d) - &LaurentPoly::monomial(1, 0, -(ny as i32), d);
    let mut out = Vec::with_capacity(anyons.len());
    for (v, u) in anyons.iter().zip(&targets) {
        let py = module.preimage(u)?.map(|p| p.shift(0, -s));
        if let Some(py) = &py {
            if excitation_map(code, py)? != v.mul_poly(&back) {
                return Err(Error::Invalid(format!("y-string residual at ny = {ny}")));
            }
        }
        out.push(py);
    }
    Ok(out)
}

pub fn y_string(
    code: &StabilizerCode,
    v: &Syndrome,
    ny: usize,
    region: &Region,
) -> Result<Option<PauliVector>> {
    if v.is_zero() {
        return Ok(Some(PauliVector::zero(code.w(), code.d())));
    }
    Ok(y_strings(code, std::slice::from_ref(v), ny, region)?
        .pop()
        .flatten())
}
