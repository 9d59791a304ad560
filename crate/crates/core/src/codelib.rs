//! Built-in stabilizer codes and the line-oriented code-file format.
//!
//! Slot conventions: on the square lattice slot 0 is the horizontal edge and
//! slot 1 the vertical edge of a unit cell; on the honeycomb lattice the two
//! slots are the two vertices of a unit cell. Codes with two qudits per edge
//! list the first qudit of both edges before the second.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::symplectic::{validate_code, PauliVector, StabilizerCode};

/// Textual description of a code, as written in a code file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub name: String,
    pub d: u32,
    pub w: usize,
    pub t: usize,
    /// per generator, `(slot key, polynomial)` pairs such as `("X0", "1 - x^-1")`
    pub generators: Vec<Vec<(String, String)>>,
    pub note: String,
}

impl CodeDescriptor {
    pub fn to_code_file(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}: {}", self.name, self.note);
        let _ = writeln!(s, "d = {}", self.d);
        let _ = writeln!(s, "qudits = {}", self.w);
        for (i, g) in self.generators.iter().enumerate() {
            let _ = writeln!(s, "stabilizer S{}:", i + 1);
            for (k, p) in g {
                let _ = writeln!(s, "  {k}: {p}");
            }
        }
        s
    }

    pub fn build(&self) -> Result<StabilizerCode> {
        parse_code_file(&self.to_code_file())
    }
}

/// Optional parameters for parameterised builtins.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuiltinParams {
    /// qudit dimension for `toric`, `toric2` and `trivial` (default 2)
    pub d: Option<u32>,
    /// shift for `shifted_double_semion` (default 1)
    pub l: Option<i32>,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "trivial",
    "toric",
    "toric2",
    "double_semion",
    "shifted_double_semion",
    "color",
    "color_bad",
    "modified_a",
    "modified_b",
    "modified_c",
    "modified_d",
    "css_double_semion",
    "six_semion",
];

fn gens(list: &[&[(&str, &str)]]) -> Vec<Vec<(String, String)>> {
    list.iter()
        .map(|g| {
            g.iter()
                .map(|(k, p)| (k.to_string(), p.to_string()))
                .collect()
        })
        .collect()
}

fn x_pow(l: i32) -> String {
    match l {
        0 => String::new(),
        1 => "x*".into(),
        _ => format!("x^{l}*"),
    }
}

fn self_dual_css(name: &str, f1: &str, f2: &str, note: &str) -> CodeDescriptor {
    CodeDescriptor {
        name: name.into(),
        d: 2,
        w: 2,
        t: 2,
        generators: gens(&[&[("X0", f1), ("X1", f2)], &[("Z0", f1), ("Z1", f2)]]),
        note: note.into(),
    }
}

const DS: [[&str; 4]; 4] = [
    ["-1 + x^-1", "-1 + y^-1", "1 - y", "-1 + x"],
    ["0", "0", "2 + 2y", "2 + 2x"],
    ["2", "0", "0", "2y^-1"],
    ["0", "2", "2x^-1", "0"],
];

fn negate(p: &str) -> String {
    match p {
        "0" => "0".into(),
        _ => format!("-({p})"),
    }
}

pub fn describe(name: &str, params: BuiltinParams) -> Result<CodeDescriptor> {
    let d = params.d.unwrap_or(2);
    let desc = match name {
        "trivial" => CodeDescriptor {
            name: name.into(),
            d,
            w: 2,
            t: 2,
            generators: gens(&[&[("X0", "1")], &[("X1", "1")]]),
            note: "product state, single-site X stabilizers".into(),
        },
        "toric" => CodeDescriptor {
            name: name.into(),
            d,
            w: 2,
            t: 2,
            generators: gens(&[
                &[("X0", "1 - x^-1"), ("X1", "1 - y^-1")],
                &[("Z0", "1 - y"), ("Z1", "-1 + x")],
            ]),
            note: "Z_d toric code, vertex and plaquette terms".into(),
        },
        "toric2" => CodeDescriptor {
            name: name.into(),
            d,
            w: 2,
            t: 2,
            generators: gens(&[
                &[("X0", "1 - x^-2"), ("X1", "1 - y^-1")],
                &[("Z0", "1 - y"), ("Z1", "-1 + x^2")],
            ]),
            note: "two interleaved toric codes along x".into(),
        },
        "double_semion" | "shifted_double_semion" => {
            let l = if name == "double_semion" {
                0
            } else {
                params.l.unwrap_or(1)
            };
            let xl = x_pow(l);
            let g: Vec<Vec<(String, String)>> = vec![
                vec![
                    ("X0".into(), DS[0][0].into()),
                    ("X1".into(), DS[0][1].into()),
                    ("Z0".into(), format!("{xl}(1 - y)")),
                    ("Z1".into(), format!("{xl}(-1 + x)")),
                ],
                vec![
                    ("Z0".into(), DS[1][2].into()),
                    ("Z1".into(), DS[1][3].into()),
                ],
                vec![
                    ("X0".into(), format!("2{}", xl.trim_end_matches('*'))),
                    ("Z1".into(), DS[2][3].into()),
                ],
                vec![
                    ("X1".into(), format!("2{}", xl.trim_end_matches('*'))),
                    ("Z0".into(), DS[3][2].into()),
                ],
            ];
            CodeDescriptor {
                name: name.into(),
                d: 4,
                w: 2,
                t: 4,
                generators: g,
                note: if l == 0 {
                    "double semion on Z_4 qudits".into()
                } else {
                    format!("double semion with the semion hopping shifted by x^{l}")
                },
            }
        }
        "color" => self_dual_css(name, "1 + x^-1 + y", "1 + y^-1 + x", "honeycomb color code"),
        "color_bad" => self_dual_css(
            name,
            "1 + x^-1 + y + x^-1 y^-1",
            "1 + y^-1 + x + x*y",
            "modified color code violating the topological order condition",
        ),
        "modified_a" => self_dual_css(
            name,
            "1 + x^-1 + y + x^-1 y^-1 + x*y",
            "1 + y^-1 + x + x^-1 y^-1 + x*y",
            "modified color code A",
        ),
        "modified_b" => self_dual_css(
            name,
            "1 + x^-1 + y + x^-1 y^-1 + x*y + x^-1 y",
            "1 + y^-1 + x + x^-1 y^-1 + x*y + x*y^-1",
            "modified color code B",
        ),
        "modified_c" => self_dual_css(
            name,
            "1 + x^-1 + y + y^2",
            "1 + y^-1 + x + y^-2",
            "modified color code C",
        ),
        "modified_d" => self_dual_css(
            name,
            "1 + x^-1 + y + x*y^3",
            "1 + y^-1 + x + x^-1 y^-3",
            "modified color code D",
        ),
        "css_double_semion" => {
            // Each double-semion generator (a | b) yields an X-type term with
            // X-block (a, b) and a Z-type term with Z-block (b, -a).
            let mut g = Vec::new();
            for row in DS {
                let (a, b) = (&row[..2], &row[2..]);
                let mut xs = Vec::new();
                for (i, p) in a.iter().chain(b).enumerate() {
                    if *p != "0" {
                        xs.push((format!("X{i}"), p.to_string()));
                    }
                }
                g.push(xs);
            }
            for row in DS {
                let (a, b) = (&row[..2], &row[2..]);
                let mut zs = Vec::new();
                for (i, p) in b
                    .iter()
                    .map(|p| p.to_string())
                    .chain(a.iter().map(|p| negate(p)))
                    .enumerate()
                {
                    if p != "0" {
                        zs.push((format!("Z{i}"), p));
                    }
                }
                g.push(zs);
            }
            CodeDescriptor {
                name: name.into(),
                d: 4,
                w: 4,
                t: 8,
                generators: g,
                note: "CSS code obtained from the double semion by doubling every qudit".into(),
            }
        }
        "six_semion" => CodeDescriptor {
            name: name.into(),
            d: 4,
            w: 4,
            t: 8,
            // slots: (h1, v1, h2, v2) for the two Z_4 toric copies
            generators: gens(&[
                &[
                    ("X0", "-1 + x^-1"),
                    ("X1", "-1 + y^-1"),
                    ("X2", "1 - x^-1"),
                    ("X3", "1 - y^-1"),
                    ("Z0", "1 - y"),
                    ("Z1", "-1 + x"),
                ],
                &[("Z0", "2 - 2y"), ("Z1", "-2 + 2x")],
                &[
                    ("X2", "-1 + x^-1"),
                    ("X3", "-1 + y^-1"),
                    ("Z2", "1 - y"),
                    ("Z3", "-1 + x"),
                ],
                &[("Z2", "2 - 2y"), ("Z3", "-2 + 2x")],
                &[("X1", "2x"), ("Z0", "2")],
                &[("X0", "2y"), ("Z1", "2")],
                &[("X3", "2x"), ("Z0", "2"), ("Z2", "2")],
                &[("X2", "2y"), ("Z1", "2"), ("Z3", "2")],
            ]),
            note: "two Z_4 toric codes with e1^2 m1^2 and e1^2 e2^2 m2^2 condensed".into(),
        },
        other => return Err(Error::UnknownCode(other.to_string())),
    };
    Ok(desc)
}

/// Builtin code by name with default parameters.
pub fn builtin(name: &str) -> Result<StabilizerCode> {
    builtin_with(name, BuiltinParams::default())
}

pub fn builtin_with(name: &str, params: BuiltinParams) -> Result<StabilizerCode> {
    describe(name, params)?.build()
}

fn line_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::CodeFile {
        line,
        msg: msg.into(),
    })
}

/// Parses a polynomial that may contain one level of `c(…)` grouping written
/// by [`describe`], e.g. `x*(1 - y)` or `-(2y)`.
fn parse_entry(text: &str, d: u32) -> Result<LaurentPoly> {
    let text = text.trim();
    if let Some(open) = text.find('(') {
        let close = text.rfind(')').ok_or(Error::Syntax {
            pos: open,
            msg: "unclosed `(`".into(),
        })?;
        if close + 1 != text.len() {
            return Err(Error::Syntax {
                pos: close + 1,
                msg: "trailing text after `)`".into(),
            });
        }
        let prefix = text[..open].trim().trim_end_matches('*').trim();
        let inner = LaurentPoly::parse(&text[open + 1..close], d)?;
        let factor = match prefix {
            "" | "+" => LaurentPoly::one(d),
            "-" => LaurentPoly::constant(-1, d),
            p => LaurentPoly::parse(p, d)?,
        };
        return Ok(&factor * &inner);
    }
    LaurentPoly::parse(text, d)
}

/// Parses the code-file format and validates commutation.
pub fn parse_code_file(text: &str) -> Result<StabilizerCode> {
    let mut d: Option<u32> = None;
    let mut w: Option<usize> = None;
    let mut gens: Vec<(String, usize, Vec<(usize, bool, String, usize)>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("stabilizer") {
            let name = rest.trim().strip_suffix(':');
            match name {
                Some(n) if !n.trim().is_empty() => {
                    gens.push((n.trim().to_string(), ln, Vec::new()))
                }
                _ => return line_err(ln, "expected `stabilizer <name>:`"),
            }
            continue;
        }
        let Some((key, value)) = line.split_once([':', '=']) else {
            return line_err(ln, format!("cannot parse `{line}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "d" if gens.is_empty() => match value.parse::<u32>() {
                Ok(v) if v >= 2 => d = Some(v),
                _ => return line_err(ln, format!("invalid modulus `{value}`")),
            },
            "qudits" if gens.is_empty() => match value.parse::<usize>() {
                Ok(v) if v >= 1 => w = Some(v),
                _ => return line_err(ln, format!("invalid qudit count `{value}`")),
            },
            _ => {
                let Some(g) = gens.last_mut() else {
                    return line_err(ln, format!("unexpected `{key}` before any stabilizer"));
                };
                let (is_x, num) = match (key.chars().next(), key.get(1..)) {
                    (Some('X'), Some(n)) => (true, n),
                    (Some('Z'), Some(n)) => (false, n),
                    _ => return line_err(ln, format!("expected X<i> or Z<i>, got `{key}`")),
                };
                let Ok(slot) = num.parse::<usize>() else {
                    return line_err(ln, format!("bad slot index in `{key}`"));
                };
                g.2.push((slot, is_x, value.to_string(), ln));
            }
        }
    }
    let Some(d) = d else {
        return line_err(1, "missing `d = <modulus>`");
    };
    let Some(w) = w else {
        return line_err(1, "missing `qudits = <count>`");
    };
    if gens.is_empty() {
        return line_err(1, "no stabilizers");
    }
    let mut vectors = Vec::new();
    let mut names = Vec::new();
    for (name, ln, entries) in gens {
        let mut v = PauliVector::zero(w, d);
        let mut seen = vec![false; 2 * w];
        for (slot, is_x, poly, pl) in entries {
            if slot >= w {
                return line_err(pl, format!("slot {slot} out of range for {w} qudits"));
            }
            let idx = if is_x { slot } else { w + slot };
            if seen[idx] {
                return line_err(pl, "slot given twice");
            }
            seen[idx] = true;
            let f = parse_entry(&poly, d).or_else(|e| match e {
                Error::Syntax { pos, msg } => line_err(pl, format!("column {pos}: {msg}")),
                other => Err(other),
            })?;
            v.add_scaled(&PauliVector::unit(idx, w, d).mul_poly(&f), 1);
        }
        if v.is_zero() {
            return line_err(ln, format!("stabilizer {name} is zero"));
        }
        vectors.push(v);
        names.push(name);
    }
    let code = StabilizerCode::new(d, w, vectors)?;
    let report = validate_code(&code);
    if let Some(f) = report.failures.first() {
        let ((a, b), c) = f.dot.terms().next().expect("nonzero dot");
        return Err(Error::Commutation {
            first: names[f.first].clone(),
            second: names[f.second].clone(),
            monomial: LaurentPoly::monomial(c as i64, a, b, d).to_string(),
        });
    }
    Ok(code)
}

/// Writes a code in the code-file format.
pub fn format_code_file(code: &StabilizerCode) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "d = {}", code.d());
    let _ = writeln!(s, "qudits = {}", code.w());
    for (i, g) in code.generators().iter().enumerate() {
        let _ = writeln!(s, "stabilizer S{}:", i + 1);
        for (slot, e) in g.entries().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let key = if slot < code.w() {
                format!("X{slot}")
            } else {
                format!("Z{}", slot - code.w())
            };
            let _ = writeln!(s, "  {key}: {e}");
        }
    }
    s
}
