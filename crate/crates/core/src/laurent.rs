//! Z_d scalars and sparse bivariate Laurent polynomials over Z_d.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduce a signed integer into `[0, d)`.
#[inline]
pub fn reduce(v: i64, d: u32) -> u32 {
    v.rem_euclid(d as i64) as u32
}

/// Inverse of `a` modulo `d`, if it exists.
pub fn inv_mod(a: u32, d: u32) -> Option<u32> {
    let (mut r0, mut r1) = (d as i64, (a % d) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| reduce(s0, d))
}

pub fn is_prime(n: u32) -> bool {
    n >= 2
        && (2u64..)
            .take_while(|k| k * k <= n as u64)
            .all(|k| !(n as u64).is_multiple_of(k))
}

/// Element of Z_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZdScalar {
    value: u32,
    modulus: u32,
}

impl ZdScalar {
    pub fn new(v: i64, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        ZdScalar {
            value: reduce(v, modulus),
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        inv_mod(self.value, self.modulus).map(|v| ZdScalar::new(v as i64, self.modulus))
    }

    /// Representative in `(-d/2, d/2]`.
    pub fn signed(self) -> i64 {
        let (v, d) = (self.value as i64, self.modulus as i64);
        if 2 * v > d {
            v - d
        } else {
            v
        }
    }

    fn check(self, o: Self) {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
    }
}

impl Add for ZdScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check(o);
        ZdScalar::new(self.value as i64 + o.value as i64, self.modulus)
    }
}

impl Sub for ZdScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.check(o);
        ZdScalar::new(self.value as i64 - o.value as i64, self.modulus)
    }
}

impl Mul for ZdScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.check(o);
        ZdScalar::new(self.value as i64 * o.value as i64, self.modulus)
    }
}

impl Neg for ZdScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ZdScalar::new(-(self.value as i64), self.modulus)
    }
}

impl fmt::Display for ZdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Sparse element of Z_d[x, y, x^-1, y^-1].
///
/// Terms are keyed by the exponent pair `(a, b)` of `x^a y^b`; stored
/// coefficients are always in `[1, d)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    d: u32,
    terms: BTreeMap<(i32, i32), u32>,
}

impl LaurentPoly {
    pub fn zero(d: u32) -> Self {
        assert!(d >= 2, "modulus must be at least 2");
        LaurentPoly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: u32) -> Self {
        Self::constant(1, d)
    }

    pub fn constant(c: i64, d: u32) -> Self {
        Self::monomial(c, 0, 0, d)
    }

    /// `c x^a y^b`
    pub fn monomial(c: i64, a: i32, b: i32, d: u32) -> Self {
        let mut p = Self::zero(d);
        p.add_term(a, b, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), i64)>>(terms: I, d: u32) -> Self {
        let mut p = Self::zero(d);
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    /// Adds `c x^a y^b` in place.
    pub fn add_term(&mut self, a: i32, b: i32, c: i64) {
        let d = self.d;
        let c = reduce(c, d);
        if c == 0 {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert(0);
        *e = (*e + c) % d;
        if *e == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `((a, b), c)` in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), u32)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, a: i32, b: i32) -> u32 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn coeff_scalar(&self, a: i32, b: i32) -> ZdScalar {
        ZdScalar::new(self.coeff(a, b) as i64, self.d)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(0, 0)
    }

    /// Largest |exponent| over both variables; 0 for the zero polynomial.
    pub fn range(&self) -> i32 {
        self.terms
            .keys()
            .map(|&(a, b)| a.abs().max(b.abs()))
            .max()
            .unwrap_or(0)
    }

    /// `(max |a|, max |b|)` over all terms.
    pub fn extent(&self) -> (i32, i32) {
        self.terms.keys().fold((0, 0), |(ea, eb), &(a, b)| {
            (ea.max(a.abs()), eb.max(b.abs()))
        })
    }

    /// Multiplication by the monomial `x^a y^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        LaurentPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(&(p, q), &c)| ((p + a, q + b), c))
                .collect(),
        }
    }

    /// Substitutes exponents, `x^a y^b -> x^a' y^b'` with `(a', b') = f(a, b)`.
    pub fn map_exponents(&self, f: impl Fn(i32, i32) -> (i32, i32)) -> Self {
        LaurentPoly::from_terms(self.terms().map(|((a, b), c)| (f(a, b), c as i64)), self.d)
    }

    /// `x^a y^b -> x^-a y^-b`
    pub fn antipode(&self) -> Self {
        LaurentPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), &c)| ((-a, -b), c))
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = reduce(c, self.d) as u64;
        let d = self.d as u64;
        let mut out = Self::zero(self.d);
        if c == 0 {
            return out;
        }
        for (&k, &v) in &self.terms {
            let nv = (v as u64 * c % d) as u32;
            if nv != 0 {
                out.terms.insert(k, nv);
            }
        }
        out
    }

    /// Reduce every coefficient into a smaller modulus `e` dividing `d`.
    pub fn with_modulus(&self, e: u32) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c as i64)), e)
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Self, c: i64) {
        assert_eq!(self.d, other.d, "modulus mismatch");
        let c = reduce(c, self.d) as i64;
        if c == 0 {
            return;
        }
        for (&(a, b), &v) in &other.terms {
            self.add_term(a, b, v as i64 * c);
        }
    }

    pub fn parse(text: &str, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidModulus(d));
        }
        Parser::new(text, d).parse()
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(o, 1);
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(o, -1);
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.d, o.d, "modulus mismatch");
        let d = self.d as u64;
        let mut acc: BTreeMap<(i32, i32), u64> = BTreeMap::new();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &o.terms {
                let e = acc.entry((a1 + a2, b1 + b2)).or_insert(0);
                *e = (*e + c1 as u64 * c2 as u64) % d;
            }
        }
        LaurentPoly {
            d: self.d,
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(k, c)| (k, c as u32))
                .collect(),
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: &LaurentPoly) -> LaurentPoly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

fn write_monomial(out: &mut String, a: i32, b: i32) {
    let mut first = true;
    for (v, e) in [('x', a), ('y', b)] {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push(v);
        if e != 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms ordered by y then x exponent; coefficients printed in `(-d/2, d/2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(a, b)| (b, a));
        let mut out = String::new();
        for (i, (a, b)) in keys.into_iter().enumerate() {
            let c = ZdScalar::new(self.terms[&(a, b)] as i64, self.d).signed();
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            if (a, b) == (0, 0) {
                out.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    out.push_str(&mag.to_string());
                }
                write_monomial(&mut out, a, b);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.d)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    d: u32,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, d: u32) -> Self {
        Parser {
            s: text.as_bytes(),
            pos: 0,
            d,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        // reduce digit by digit so long literals cannot overflow
        let text = std::str::from_utf8(&self.s[start..self.pos]).ok()?;
        let mut v: i64 = 0;
        for ch in text.bytes() {
            v = (v * 10 + (ch - b'0') as i64) % (self.d as i64);
        }
        Some(v)
    }

    fn exponent(&mut self) -> Result<i32> {
        self.skip_ws();
        let mut neg = false;
        if let Some(c @ (b'-' | b'+')) = self.s.get(self.pos).copied() {
            neg = c == b'-';
            self.pos += 1;
            self.skip_ws();
        }
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected exponent");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<i32>() {
            Ok(v) => Ok(if neg { -v } else { v }),
            Err(_) => {
                self.pos = start;
                self.err("exponent out of range")
            }
        }
    }

    fn term(&mut self) -> Result<(i64, i32, i32)> {
        self.skip_ws();
        let mut coeff = None;
        let mut seen_any = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.digits();
            seen_any = true;
            if self.peek() == Some(b'.') {
                return self.err("non-integer coefficient");
            }
        }
        let (mut a, mut b) = (0i32, 0i32);
        loop {
            let save = self.pos;
            let mut star = false;
            if self.peek() == Some(b'*') {
                if !seen_any {
                    return self.err("unexpected `*`");
                }
                self.pos += 1;
                star = true;
            }
            match self.peek() {
                Some(v @ (b'x' | b'y')) => {
                    self.pos += 1;
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        1
                    };
                    if v == b'x' {
                        a += e;
                    } else {
                        b += e;
                    }
                    seen_any = true;
                }
                _ if star => return self.err("expected `x` or `y` after `*`"),
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        if !seen_any {
            return self.err("expected a term");
        }
        Ok((coeff.unwrap_or(1), a, b))
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero(self.d);
        let mut sign = 1i64;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = if c == b'-' { -1 } else { 1 };
            self.pos += 1;
        }
        loop {
            let (c, a, b) = self.term()?;
            p.add_term(a, b, sign * c);
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(ch) => return self.err(format!("unexpected character `{}`", ch as char)),
            }
            self.pos += 1;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: u32) -> LaurentPoly {
        LaurentPoly::parse(s, d).unwrap()
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(p("x^2*y^-1", 5).antipode(), p("x^-2 y", 5));
        assert_eq!(p("1", 3).antipode(), p("1", 3));
        assert_eq!(p("1 + 2x", 4).antipode(), p("1 + 2x^-1", 4));
    }

    #[test]
    fn parse_examples() {
        let f = p("1 - x^-1", 2);
        assert_eq!(
            f.terms().collect::<Vec<_>>(),
            vec![((-1, 0), 1), ((0, 0), 1)]
        );
        let g = p("1 + 2x + x*y + 3y^2", 5);
        assert_eq!(g.coeff(0, 0), 1);
        assert_eq!(g.coeff(1, 0), 2);
        assert_eq!(g.coeff(1, 1), 1);
        assert_eq!(g.coeff(0, 2), 3);
        assert_eq!(g.len(), 4);
        assert!(p("0", 7).is_zero());
        assert_eq!(p("-1 + x^2", 4).coeff(0, 0), 3);
        assert_eq!(
            p("2 + 2y", 4),
            LaurentPoly::from_terms([((0, 0), 2), ((0, 1), 2)], 4)
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            LaurentPoly::parse("1 +", 3),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(LaurentPoly::parse("1.5x", 3).is_err());
        assert!(LaurentPoly::parse("x^", 3).is_err());
        assert!(LaurentPoly::parse("z", 3).is_err());
        assert!(LaurentPoly::parse("", 3).is_err());
        assert!(LaurentPoly::parse("x * * y", 3).is_err());
    }

    #[test]
    fn format_round_trip() {
        for (s, d) in [
            ("1 - x^-1", 2),
            ("2 + 2y", 4),
            ("-1 + x^2", 4),
            ("3x^-2*y^5 - y", 7),
            ("0", 3),
        ] {
            let f = p(s, d);
            assert_eq!(p(&f.to_string(), d), f, "{s}");
        }
        assert_eq!(p("-1 + x", 4).to_string(), "-1 + x");
    }

    #[test]
    fn scalar_ops() {
        let a = ZdScalar::new(-3, 8);
        assert_eq!(a.value(), 5);
        assert_eq!(a.inverse().unwrap().value(), 5);
        assert!(ZdScalar::new(2, 8).inverse().is_none());
        assert_eq!((a * ZdScalar::new(3, 8)).value(), 7);
        assert_eq!((-a).value(), 3);
        assert_eq!(ZdScalar::new(6, 8).signed(), -2);
    }

    #[test]
    fn shift_is_monomial_product() {
        let f = p("1 + 2x - y^-3", 5);
        assert_eq!(f.shift(2, -1), &f * &LaurentPoly::monomial(1, 2, -1, 5));
    }
}
