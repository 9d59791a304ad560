//! Truncation of polynomial rows to Z_d coefficient vectors, translational
//! duplicates, elimination over Z_d and integer normal forms.

mod echelon;
pub mod normal_form;

pub use echelon::{eliminate, ge_field, mge, span_check, EchelonResult, Pivot};
pub use normal_form::{hnf, snf, snf_mod, Hnf, Matrix, Snf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Truncation and duplication half-widths.
///
/// Monomials `x^a y^b` with `|a| <= kx`, `|b| <= ky` are kept; `m` and
/// `mprime` are the translation ranges for syndrome and stabilizer duplicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kx: usize,
    pub ky: usize,
    pub m: usize,
    pub mprime: usize,
}

impl Region {
    pub fn square(k: usize, m: usize, mprime: usize) -> Result<Self> {
        Self::new(k, k, m, mprime)
    }

    pub fn new(kx: usize, ky: usize, m: usize, mprime: usize) -> Result<Self> {
        let r = Region { kx, ky, m, mprime };
        if !(m < mprime && mprime <= kx.min(ky)) {
            return Err(Error::Invalid(format!(
                "region needs m < m' <= min(kx, ky), got kx={kx} ky={ky} m={m} m'={mprime}"
            )));
        }
        Ok(r)
    }
}

/// Monomial-to-column bijection for rows of `slots` polynomials truncated to
/// `|a| <= kx`, `|b| <= ky`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub slots: usize,
    pub kx: usize,
    pub ky: usize,
}

impl Layout {
    pub fn new(slots: usize, kx: usize, ky: usize) -> Self {
        Layout { slots, kx, ky }
    }

    /// One column per slot; for matrices with no polynomial structure.
    pub fn flat(cols: usize) -> Self {
        Layout {
            slots: cols,
            kx: 0,
            ky: 0,
        }
    }

    pub fn cells(&self) -> usize {
        (2 * self.kx + 1) * (2 * self.ky + 1)
    }

    pub fn width(&self) -> usize {
        self.slots * self.cells()
    }

    /// Column of `x^a y^b` in `slot`, if inside the window.
    pub fn col(&self, slot: usize, a: i32, b: i32) -> Option<usize> {
        let (kx, ky) = (self.kx as i32, self.ky as i32);
        if a.abs() > kx || b.abs() > ky || slot >= self.slots {
            return None;
        }
        let local = (a + kx) as usize + (b + ky) as usize * (2 * self.kx + 1);
        Some(slot * self.cells() + local)
    }

    /// Inverse of [`Layout::col`].
    pub fn monomial(&self, col: usize) -> (usize, i32, i32) {
        let cells = self.cells();
        let (slot, local) = (col / cells, col % cells);
        let wx = 2 * self.kx + 1;
        let a = (local % wx) as i32 - self.kx as i32;
        let b = (local / wx) as i32 - self.ky as i32;
        (slot, a, b)
    }
}

/// Dense matrix over Z_d with a column layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffMatrix {
    d: u32,
    layout: Layout,
    rows: Vec<Vec<u32>>,
}

/// Largest supported modulus; keeps `d * d + d` inside `u32`.
pub const MAX_MODULUS: u32 = 65_535;

impl CoeffMatrix {
    pub fn new(d: u32, layout: Layout, rows: Vec<Vec<u32>>) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&d) {
            return Err(Error::InvalidModulus(d));
        }
        let width = layout.width();
        let mut rows = rows;
        for r in rows.iter_mut() {
            if r.len() != width {
                return Err(Error::LengthMismatch {
                    got: r.len(),
                    expected: width,
                });
            }
            for e in r.iter_mut() {
                *e %= d;
            }
        }
        Ok(CoeffMatrix { d, layout, rows })
    }

    /// Signed entries reduced into `[0, d)`.
    pub fn from_signed(d: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| crate::laurent::reduce(v, d)).collect())
            .collect();
        Self::new(d, Layout::flat(cols), rows)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.layout.width()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn push_row(&mut self, row: Vec<u32>) -> Result<()> {
        if row.len() != self.ncols() {
            return Err(Error::LengthMismatch {
                got: row.len(),
                expected: self.ncols(),
            });
        }
        self.rows
            .push(row.into_iter().map(|e| e % self.d).collect());
        Ok(())
    }
}

/// Lossy truncation: terms outside the window are dropped.
pub fn truncate(f: &LaurentPoly, layout: &Layout, slot: usize) -> Vec<u32> {
    let mut row = vec![0; layout.width()];
    truncate_into(&mut row, f, layout, slot);
    row
}

/// Adds the in-window coefficients of `f` into `row`; returns false if any
/// term fell outside.
pub fn truncate_into(row: &mut [u32], f: &LaurentPoly, layout: &Layout, slot: usize) -> bool {
    let d = f.modulus();
    let mut lossless = true;
    for ((a, b), c) in f.terms() {
        match layout.col(slot, a, b) {
            Some(i) => row[i] = (row[i] + c) % d,
            None => lossless = false,
        }
    }
    lossless
}

/// Truncates a row of polynomials (one per slot), failing instead of
/// dropping terms.
pub fn truncate_row(entries: &[LaurentPoly], layout: &Layout) -> Result<Vec<u32>> {
    if entries.len() != layout.slots {
        return Err(Error::LengthMismatch {
            got: entries.len(),
            expected: layout.slots,
        });
    }
    let mut row = vec![0; layout.width()];
    for (s, f) in entries.iter().enumerate() {
        if !truncate_into(&mut row, f, layout, s) {
            return Err(Error::RegionTooSmall(format!(
                "polynomial {f} in slot {s} exceeds |x| <= {}, |y| <= {}",
                layout.kx, layout.ky
            )));
        }
    }
    Ok(row)
}

pub fn untruncate(row: &[u32], layout: &Layout, slot: usize, d: u32) -> Result<LaurentPoly> {
    if row.len() != layout.width() {
        return Err(Error::LengthMismatch {
            got: row.len(),
            expected: layout.width(),
        });
    }
    let cells = layout.cells();
    let base = slot * cells;
    let mut f = LaurentPoly::zero(d);
    for (i, &c) in row[base..base + cells].iter().enumerate() {
        if c != 0 {
            let (_, a, b) = layout.monomial(base + i);
            f.add_term(a, b, c as i64);
        }
    }
    Ok(f)
}

pub fn untruncate_row(row: &[u32], layout: &Layout, d: u32) -> Result<Vec<LaurentPoly>> {
    (0..layout.slots)
        .map(|s| untruncate(row, layout, s, d))
        .collect()
}

/// Translates `x^i y^j F` for `|i| <= mx`, `|j| <= my`, j-major then i
/// ascending.
pub fn td(f: &[LaurentPoly], mx: usize, my: usize) -> Vec<Vec<LaurentPoly>> {
    let (mx, my) = (mx as i32, my as i32);
    let mut out = Vec::with_capacity(((2 * mx + 1) * (2 * my + 1)) as usize);
    for j in -my..=my {
        for i in -mx..=mx {
            out.push(f.iter().map(|e| e.shift(i, j)).collect());
        }
    }
    out
}

/// Offset `(i, j)` of row `idx` within a `td(_, mx, my)` block.
pub fn td_offset(idx: usize, mx: usize, my: usize) -> (i32, i32) {
    let wx = 2 * mx + 1;
    debug_assert!(idx < wx * (2 * my + 1));
    ((idx % wx) as i32 - mx as i32, (idx / wx) as i32 - my as i32)
}

/// `td` followed by exact truncation.
pub fn td_truncated(
    f: &[LaurentPoly],
    mx: usize,
    my: usize,
    layout: &Layout,
) -> Result<Vec<Vec<u32>>> {
    td(f, mx, my)
        .iter()
        .map(|r| truncate_row(r, layout))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: u32) -> LaurentPoly {
        LaurentPoly::parse(s, d).unwrap()
    }

    #[test]
    fn coefficient_vector_positions() {
        // f = 1 + 2x + xy + 3y^2 at k = 2: index (a + k) + (b + k)(2k + 1)
        let f = p("1 + 2x + x*y + 3y^2", 5);
        let lay = Layout::new(1, 2, 2);
        let row = truncate(&f, &lay, 0);
        assert_eq!(row.len(), 25);
        let mut expected = vec![0; 25];
        expected[2 + 2 * 5] = 1;
        expected[3 + 2 * 5] = 2;
        expected[3 + 3 * 5] = 1;
        expected[2 + 4 * 5] = 3;
        assert_eq!(row, expected);
        assert_eq!(untruncate(&row, &lay, 0, 5).unwrap(), f);
    }

    #[test]
    fn single_cell_and_zero() {
        let lay = Layout::new(1, 0, 0);
        assert_eq!(truncate(&p("3 + x + y^-1", 7), &lay, 0), vec![3]);
        assert_eq!(truncate(&p("0", 7), &Layout::new(2, 1, 1), 1), vec![0; 18]);
    }

    #[test]
    fn exact_truncation_rejects_overflow() {
        let lay = Layout::new(1, 1, 1);
        assert!(matches!(
            truncate_row(&[p("x^2", 3)], &lay),
            Err(Error::RegionTooSmall(_))
        ));
    }

    #[test]
    fn td_ordering() {
        let f = vec![p("1", 2), p("x", 2)];
        assert_eq!(td(&f, 0, 0), vec![f.clone()]);
        let rows = td(&f, 1, 1);
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0][0], p("x^-1 y^-1", 2));
        assert_eq!(rows[1][0], p("y^-1", 2));
        assert_eq!(rows[3][0], p("x^-1", 2));
        assert_eq!(td_offset(5, 1, 1), (1, 0));
    }

    #[test]
    fn layout_round_trip() {
        let lay = Layout::new(3, 2, 1);
        for col in 0..lay.width() {
            let (s, a, b) = lay.monomial(col);
            assert_eq!(lay.col(s, a, b), Some(col));
        }
    }
}
