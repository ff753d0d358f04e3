//! The free graded-commutative algebra on a list of generators, and a parser
//! for polynomial expressions in those generators.
//!
//! Monomials are exponent vectors in generator order; odd generators have
//! exponent at most one. Products carry the Koszul sign from reordering odd
//! factors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

pub type FreeMono = Vec<u32>;

/// A (not necessarily homogeneous) element of the free algebra.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FreeElem(pub BTreeMap<FreeMono, Rational>);

impl FreeElem {
    pub fn zero() -> Self {
        FreeElem(BTreeMap::new())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(vec![0; n], c);
        }
        FreeElem(m)
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut m = BTreeMap::new();
        m.insert(e, Rational::one());
        FreeElem(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &FreeElem) {
        for (m, x) in &other.0 {
            let e = self.0.entry(m.clone()).or_insert_with(Rational::zero);
            *e += &(c * x);
            if e.is_zero() {
                self.0.remove(m);
            }
        }
    }

    pub fn mul(&self, other: &FreeElem, gens: &[Generator]) -> FreeElem {
        let mut out = FreeElem::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                if let Some((sign, m)) = mono_mul(gens, ma, mb) {
                    let c = ca * cb;
                    let c = if sign < 0 { -c } else { c };
                    let e = out.0.entry(m.clone()).or_insert_with(Rational::zero);
                    *e += &c;
                    if e.is_zero() {
                        out.0.remove(&m);
                    }
                }
            }
        }
        out
    }

    /// Degree of every term, if homogeneous (the zero element has none).
    pub fn homogeneous_degree(&self, gens: &[Generator]) -> Result<Option<usize>> {
        let mut deg = None;
        for m in self.0.keys() {
            let d = mono_degree(gens, m);
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => {
                    return Err(Error::Parse("expression is not homogeneous".into()));
                }
                _ => {}
            }
        }
        Ok(deg)
    }
}

pub fn mono_degree(gens: &[Generator], m: &[u32]) -> usize {
    gens.iter()
        .zip(m)
        .map(|(g, e)| g.degree * *e as usize)
        .sum()
}

/// Product of two monomials with its Koszul sign, or `None` when an odd
/// generator would be squared.
pub fn mono_mul(gens: &[Generator], a: &[u32], b: &[u32]) -> Option<(i8, FreeMono)> {
    let mut sign = 1i8;
    let mut out = Vec::with_capacity(a.len());
    // Moving each odd factor of `b` left past the odd factors of `a` that
    // come after it in generator order.
    let mut odd_in_a_after = 0usize;
    let odd: Vec<bool> = gens.iter().map(|g| g.degree % 2 == 1).collect();
    for i in (0..a.len()).rev() {
        if odd[i] && b[i] > 0 && odd_in_a_after % 2 == 1 {
            sign = -sign;
        }
        if odd[i] && a[i] > 0 {
            odd_in_a_after += 1;
        }
    }
    for i in 0..a.len() {
        let e = a[i] + b[i];
        if odd[i] && e > 1 {
            return None;
        }
        out.push(e);
    }
    Some((sign, out))
}

/// All monomials of total degree `deg`, in generator-exponent form.
pub fn monomials_of_degree(gens: &[Generator], deg: usize) -> Vec<FreeMono> {
    fn rec(gens: &[Generator], i: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<FreeMono>) {
        if i == gens.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = &gens[i];
        let max = if g.degree == 0 {
            0
        } else if g.degree % 2 == 1 {
            (left / g.degree).min(1)
        } else {
            left / g.degree
        };
        for e in 0..=max {
            cur.push(e as u32);
            rec(gens, i + 1, left - e * g.degree, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, deg, &mut Vec::new(), &mut out);
    out
}

/// Human-readable monomial label, e.g. `dx1*dx3` or `x^2*h`.
pub fn mono_label(gens: &[Generator], m: &[u32]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(m)
        .filter(|(_, e)| **e > 0)
        .map(|(g, e)| {
            if *e == 1 {
                g.name.clone()
            } else {
                format!("{}^{}", g.name, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Parses expressions like `x^2 - 3/2*a*b + (a + b)^2` over the given
/// generators. Multiplication is written `*` and is order-sensitive for odd
/// generators.
pub fn parse_expr(src: &str, gens: &[Generator]) -> Result<FreeElem> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        toks: &tokens,
        pos: 0,
        gens,
        src,
    };
    let e = p.expr()?;
    if p.pos != tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[s..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[s..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!(
                "unexpected character {c:?} in {src:?}"
            )));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    gens: &'a [Generator],
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FreeElem> {
        let n = self.gens.len();
        let mut acc = FreeElem::zero();
        let mut sign = if self.eat('-') {
            -Rational::one()
        } else {
            self.eat('+');
            Rational::one()
        };
        loop {
            let t = self.term()?;
            acc.add_scaled(&sign, &t);
            if self.eat('+') {
                sign = Rational::one();
            } else if self.eat('-') {
                sign = -Rational::one();
            } else {
                break;
            }
        }
        let _ = n;
        Ok(acc)
    }

    fn term(&mut self) -> Result<FreeElem> {
        let mut acc = self.power()?;
        while self.eat('*') {
            let f = self.power()?;
            acc = acc.mul(&f, self.gens);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<FreeElem> {
        let base = self.atom()?;
        if self.eat('^') {
            let Some(Tok::Num(e)) = self.peek().cloned() else {
                return Err(self.err("expected exponent"));
            };
            self.pos += 1;
            let e: u32 = e.parse().map_err(|_| self.err("bad exponent"))?;
            let mut acc = FreeElem::scalar(self.gens.len(), Rational::one());
            for _ in 0..e {
                acc = acc.mul(&base, self.gens);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FreeElem> {
        let n = self.gens.len();
        match self.peek().cloned() {
            Some(Tok::Num(a)) => {
                self.pos += 1;
                let mut q: Rational = a.parse()?;
                if self.peek() == Some(&Tok::Sym('/')) {
                    self.pos += 1;
                    let Some(Tok::Num(b)) = self.peek().cloned() else {
                        return Err(self.err("expected denominator"));
                    };
                    self.pos += 1;
                    q = format!("{a}/{b}").parse()?;
                }
                Ok(FreeElem::scalar(n, q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .gens
                    .iter()
                    .position(|g| g.name == name)
                    .ok_or_else(|| {
                        Error::Parse(format!("unknown generator `{name}` in {:?}", self.src))
                    })?;
                Ok(FreeElem::generator(n, i))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                let mut a = self.atom()?;
                for v in a.0.values_mut() {
                    *v = -&*v;
                }
                Ok(a)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<Generator> {
        vec![
            Generator {
                name: "a".into(),
                degree: 1,
            },
            Generator {
                name: "b".into(),
                degree: 1,
            },
            Generator {
                name: "x".into(),
                degree: 2,
            },
        ]
    }

    #[test]
    fn odd_generators_anticommute() {
        let g = gens();
        let ab = parse_expr("a*b", &g).unwrap();
        let ba = parse_expr("b*a", &g).unwrap();
        let mut sum = ab.clone();
        sum.add_scaled(&Rational::one(), &ba);
        assert!(sum.is_zero());
        assert!(parse_expr("a*a", &g).unwrap().is_zero());
    }

    #[test]
    fn even_generators_commute() {
        let g = gens();
        assert_eq!(
            parse_expr("x*a", &g).unwrap(),
            parse_expr("a*x", &g).unwrap()
        );
    }

    #[test]
    fn parses_powers_and_fractions() {
        let g = gens();
        let e = parse_expr("(x + 1)^2 - 1/2*x", &g).unwrap();
        let expected = parse_expr("x^2 + 3/2*x + 1", &g).unwrap();
        assert_eq!(e, expected);
        assert!(parse_expr("y", &g).is_err());
        assert!(parse_expr("x +", &g).is_err());
    }

    #[test]
    fn enumerates_monomials() {
        let g = gens();
        // degree 2: a*b, x
        assert_eq!(monomials_of_degree(&g, 2).len(), 2);
        // degree 4: x^2, a*b*x
        assert_eq!(monomials_of_degree(&g, 4).len(), 2);
    }

    #[test]
    fn homogeneity() {
        let g = gens();
        assert_eq!(
            parse_expr("a*b + x", &g)
                .unwrap()
                .homogeneous_degree(&g)
                .unwrap(),
            Some(2)
        );
        assert!(parse_expr("a + x", &g)
            .unwrap()
            .homogeneous_degree(&g)
            .is_err());
    }
}
