use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::MahlerError;

/// Variable names in their fixed order.
pub const VARIABLES: [char; 4] = ['x', 'y', 'z', 't'];

/// Laurent polynomial with integer coefficients in `x, y, z, t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    pub terms: BTreeMap<[i32; 4], i64>,
}

impl LaurentPoly {
    pub fn constant(c: i64) -> Self {
        let mut p = LaurentPoly::default();
        if c != 0 {
            p.terms.insert([0; 4], c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        LaurentPoly {
            terms: BTreeMap::from([(e, 1)]),
        }
    }

    pub fn monomial(c: i64, e: [i32; 4]) -> Self {
        let mut p = LaurentPoly::default();
        if c != 0 {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, MahlerError> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let v = out.terms.entry(*e).or_insert(0);
            *v = v.checked_add(*c).ok_or(MahlerError::Overflow)?;
            if *v == 0 {
                out.terms.remove(e);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MahlerError> {
        let mut out = LaurentPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                let c = c1.checked_mul(*c2).ok_or(MahlerError::Overflow)?;
                out = out.add(&LaurentPoly::monomial(c, e))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, MahlerError> {
        let mut out = LaurentPoly::constant(1);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..4)
            .filter(|&i| self.terms.keys().any(|e| e[i] != 0))
            .collect()
    }

    /// `(min, max)` exponent of variable `i`.
    pub fn degree_range(&self, i: usize) -> (i32, i32) {
        let lo = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
        let hi = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        (lo, hi)
    }

    /// Multiplies by a monomial so that every exponent is non-negative with
    /// minimum zero in each variable.
    pub fn normalized(&self) -> Self {
        let mut shift = [0; 4];
        for (i, s) in shift.iter_mut().enumerate() {
            *s = self.degree_range(i).0;
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        [
                            e[0] - shift[0],
                            e[1] - shift[1],
                            e[2] - shift[2],
                            e[3] - shift[3],
                        ],
                        *c,
                    )
                })
                .collect(),
        }
    }

    /// `x_i ↦ 1/x_i`.
    pub fn invert_variable(&self, i: usize) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[i] = -e[i];
                    (e, *c)
                })
                .collect(),
        }
    }

    /// Coefficients of `x_i^k`, as polynomials in the other variables.
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[i] = 0;
            out.entry(e[i]).or_default().terms.insert(rest, *c);
        }
        out
    }

    /// Value at `x_j = e^{iθ_j}`.
    pub fn eval_torus(&self, theta: &[f64; 4]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let phase: f64 = (0..4).map(|j| e[j] as f64 * theta[j]).sum();
                Complex64::from_polar(*c as f64, phase)
            })
            .sum()
    }

    pub fn parse(text: &str) -> Result<Self, MahlerError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(MahlerError::Parse(format!(
                "unexpected token at position {}",
                p.pos
            )));
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = (0..4)
                .filter(|&j| e[j] != 0)
                .map(|j| {
                    if e[j] == 1 {
                        VARIABLES[j].to_string()
                    } else {
                        format!("{}^{}", VARIABLES[j], e[j])
                    }
                })
                .collect();
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let abs = c.abs();
            let body = match (abs, mono.is_empty()) {
                (_, true) => abs.to_string(),
                (1, false) => mono.join("*"),
                (_, false) => format!("{abs}*{}", mono.join("*")),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, MahlerError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(
                    s.parse()
                        .map_err(|_| MahlerError::Parse(format!("number {s}")))?,
                ));
            }
            v => match VARIABLES.iter().position(|&x| x == v) {
                Some(j) => out.push(Tok::Var(j)),
                None => return Err(MahlerError::Parse(format!("unexpected character `{v}`"))),
            },
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<LaurentPoly, MahlerError> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            neg = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// Factors joined by `*` or juxtaposition.
    fn term(&mut self) -> Result<LaurentPoly, MahlerError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, MahlerError> {
        let base = match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                LaurentPoly::constant(n)
            }
            Some(Tok::Var(j)) => {
                self.pos += 1;
                LaurentPoly::var(j)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(MahlerError::Parse("missing `)`".into()));
                }
                self.pos += 1;
                e
            }
            other => return Err(MahlerError::Parse(format!("unexpected {other:?}"))),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    if negative {
                        // Only monomials have Laurent inverses.
                        if base.terms.len() != 1 {
                            return Err(MahlerError::Parse(
                                "negative power of a non-monomial".into(),
                            ));
                        }
                        let (e, c) = base.terms.iter().next().map(|(e, c)| (*e, *c)).unwrap();
                        if c.abs() != 1 {
                            return Err(MahlerError::Parse("negative power of a non-unit".into()));
                        }
                        let n = n as i32;
                        let sign = if n % 2 == 1 { c } else { 1 };
                        return Ok(LaurentPoly::monomial(sign, e.map(|x| -x * n)));
                    }
                    return base.pow(n as u32);
                }
                _ => return Err(MahlerError::Parse("exponent must be an integer".into())),
            }
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_products() {
        let p = LaurentPoly::parse("(1+x)(1+y)+z").unwrap();
        assert_eq!(p.terms.len(), 5);
        let q = LaurentPoly::parse("1 + x + y + x*y + z").unwrap();
        assert_eq!(p, q);
        let r = LaurentPoly::parse("(x-1)^3 + (x+1) (y+z)").unwrap();
        assert_eq!(r.terms[&[3, 0, 0, 0]], 1);
        assert_eq!(r.terms[&[0, 0, 0, 0]], -1);
        assert_eq!(r.terms[&[1, 1, 0, 0]], 1);
    }

    #[test]
    fn parse_errors() {
        assert!(LaurentPoly::parse("1 + w").is_err());
        assert!(LaurentPoly::parse("(1+x").is_err());
        assert!(LaurentPoly::parse("(1+x)^-1").is_err());
        assert_eq!(
            LaurentPoly::parse("x^-2").unwrap(),
            LaurentPoly::monomial(1, [-2, 0, 0, 0])
        );
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            "1+x+y-x*y+z",
            "x^2-x+1+(x+1)(y+z)",
            "(1+x)(1+y)(1+z)+t",
            "-3*x^2*y+7",
        ] {
            let p = LaurentPoly::parse(s).unwrap();
            assert_eq!(LaurentPoly::parse(&p.to_string()).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn normalisation_and_inversion() {
        let p = LaurentPoly::parse("x^-1 + 2 + x*y").unwrap();
        let n = p.normalized();
        assert_eq!(n.degree_range(0), (0, 2));
        let q = p.invert_variable(0).invert_variable(0);
        assert_eq!(p, q);
    }
}
