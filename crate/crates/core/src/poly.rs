//! Sparse multivariate polynomials over Q with named indeterminates.
//!
//! The representation is canonical: variables are exactly those that occur,
//! sorted in natural order (`s2 < s10 < sigma1`), and terms are keyed by
//! exponent vectors under graded lexicographic order. Two polynomials are
//! mathematically equal iff they are structurally equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::Ring;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Natural ordering of indeterminate names: alphabetic stem, then numeric
/// suffix by value.
pub fn var_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let idx = s
            .char_indices()
            .rev()
            .take_while(|(_, c)| c.is_ascii_digit())
            .last()
            .map(|(i, _)| i)
            .unwrap_or(s.len());
        let (stem, digits) = s.split_at(idx);
        (stem, digits.parse().ok())
    }
    let (sa, na) = split(a);
    let (sb, nb) = split(b);
    sa.cmp(sb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(vec![]), c);
        }
        MultiPoly {
            vars: vec![],
            terms,
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Rational::one(), &[(name, 1)])
    }

    /// `coef * prod name^exp`. Repeated names multiply together.
    pub fn monomial(coef: Rational, factors: &[(&str, u32)]) -> Self {
        let mut by_name: BTreeMap<&str, u32> = BTreeMap::new();
        for (n, e) in factors {
            *by_name.entry(n).or_default() += e;
        }
        let mut vars: Vec<String> = by_name.keys().map(|s| s.to_string()).collect();
        vars.sort_by(|a, b| var_cmp(a, b));
        let exps = vars.iter().map(|v| by_name[v.as_str()]).collect();
        let mut p = MultiPoly {
            vars,
            terms: BTreeMap::new(),
        };
        if !coef.is_zero() {
            p.terms.insert(Monomial(exps), coef);
        }
        p.normalize();
        p
    }

    /// Builds a polynomial from raw parts; the result is normalized.
    pub fn from_terms(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut sorted = vars.clone();
        sorted.sort_by(|a, b| var_cmp(a, b));
        sorted.dedup();
        let perm: Vec<usize> = vars
            .iter()
            .map(|v| sorted.iter().position(|s| s == v).unwrap())
            .collect();
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exp, c) in terms {
            let mut e = vec![0u32; sorted.len()];
            for (i, x) in exp.iter().enumerate() {
                e[perm[i]] += x;
            }
            *out.entry(Monomial(e)).or_insert_with(Rational::zero) += c;
        }
        let mut p = MultiPoly {
            vars: sorted,
            terms: out,
        };
        p.normalize();
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms with their variables named, in descending (canonical display)
    /// order.
    pub fn named_terms(&self) -> Vec<(Vec<(&str, u32)>, &Rational)> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let f = self
                    .vars
                    .iter()
                    .zip(&m.0)
                    .filter(|(_, e)| **e > 0)
                    .map(|(v, e)| (v.as_str(), *e))
                    .collect();
                (f, c)
            })
            .collect()
    }

    pub fn coefficient(&self, factors: &[(&str, u32)]) -> Rational {
        let probe = MultiPoly::monomial(Rational::one(), factors);
        let Some((m, _)) = probe.terms.iter().next() else {
            return Rational::zero();
        };
        if probe.vars.iter().any(|v| !self.vars.contains(v)) {
            return Rational::zero();
        }
        let e = self.lift(&probe.vars, m);
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(Rational::is_integer)
    }

    fn lift(&self, from_vars: &[String], m: &Monomial) -> Monomial {
        let mut e = vec![0u32; self.vars.len()];
        for (v, x) in from_vars.iter().zip(&m.0) {
            if *x > 0 {
                let i = self
                    .vars
                    .iter()
                    .position(|w| w == v)
                    .expect("variable present");
                e[i] = *x;
            }
        }
        Monomial(e)
    }

    fn merged_vars(&self, other: &MultiPoly) -> Vec<String> {
        let mut v: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        v.sort_by(|a, b| var_cmp(a, b));
        v.dedup();
        v
    }

    fn reindexed(&self, vars: &[String]) -> BTreeMap<Monomial, Rational> {
        if vars == self.vars.as_slice() {
            return self.terms.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; vars.len()];
                for (i, x) in m.0.iter().enumerate() {
                    e[map[i]] = *x;
                }
                (Monomial(e), c.clone())
            })
            .collect()
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let n = self.vars.len();
        let used: Vec<bool> = (0..n)
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.iter().all(|u| *u) {
            return;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, u)| **u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| {
                let e =
                    m.0.iter()
                        .zip(&used)
                        .filter(|(_, u)| **u)
                        .map(|(x, _)| *x)
                        .collect();
                (Monomial(e), c)
            })
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let vars = self.merged_vars(other);
        let mut terms = self.reindexed(&vars);
        for (m, c) in other.reindexed(&vars) {
            *terms.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut p = MultiPoly { vars, terms };
        p.normalize();
        p
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> MultiPoly {
        let mut p = MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let vars = self.merged_vars(other);
        let a = self.reindexed(&vars);
        let b = other.reindexed(&vars);
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let e = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                *terms.entry(Monomial(e)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let mut p = MultiPoly { vars, terms };
        p.normalize();
        p
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exchanges two indeterminates.
    pub fn swap_vars(&self, a: &str, b: &str) -> MultiPoly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                if v == a {
                    b.to_string()
                } else if v == b {
                    a.to_string()
                } else {
                    v.clone()
                }
            })
            .collect();
        MultiPoly::from_terms(
            vars,
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        )
    }

    /// Exponent of `var` in each term, paired with the term.
    pub fn exponent_of(&self, var: &str, m: &Monomial) -> u32 {
        self.vars
            .iter()
            .position(|v| v == var)
            .map(|i| m.0[i])
            .unwrap_or(0)
    }

    /// Evaluates the polynomial in an arbitrary commutative ring.
    ///
    /// Non-integer coefficients require the target ring to support rational
    /// scaling.
    pub fn eval_in<R, F>(&self, ring: &R, mut assign: F) -> Result<R::Elem>
    where
        R: Ring + ?Sized,
        F: FnMut(&str) -> Option<R::Elem>,
    {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            values.push(assign(v).ok_or_else(|| Error::MissingAssignment(v.clone()))?);
        }
        // powers[i][e] = values[i]^e, filled lazily up to the max exponent.
        let mut max_exp = vec![0u32; self.vars.len()];
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(*e);
            }
        }
        let powers: Vec<Vec<R::Elem>> = values
            .iter()
            .zip(&max_exp)
            .map(|(v, &top)| {
                let mut p = vec![ring.one()];
                for k in 1..=top as usize {
                    let next = if k == 1 {
                        v.clone()
                    } else {
                        ring.mul(&p[k - 1], v)
                    };
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut term: Option<R::Elem> = None;
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let f = &powers[i][*e as usize];
                term = Some(match term {
                    None => f.clone(),
                    Some(t) => ring.mul(&t, f),
                });
            }
            let term = term.unwrap_or_else(|| ring.one());
            let scaled = if c.is_one() {
                term
            } else if *c == -Rational::one() {
                ring.neg(&term)
            } else {
                ring.scale_checked(c, &term)
                    .ok_or_else(|| Error::NonIntegerCoefficient(c.to_string()))?
            };
            acc = ring.add(&acc, &scaled);
        }
        Ok(acc)
    }

    /// Substitutes polynomials for indeterminates; unassigned indeterminates
    /// are left in place.
    pub fn substitute(&self, subs: &BTreeMap<String, MultiPoly>) -> MultiPoly {
        self.eval_in(&PolyRing, |v| {
            Some(subs.get(v).cloned().unwrap_or_else(|| MultiPoly::var(v)))
        })
        .expect("every variable has a value")
    }

    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    /// Canonical compact JSON; `from_json(to_json(p)) == p` and re-encoding
    /// a decoded canonical string reproduces it byte for byte.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(j: &PolyJson) -> Result<MultiPoly> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != j.vars.len() {
                return Err(Error::Parse(format!(
                    "term has {} exponents for {} variables",
                    t.exp.len(),
                    j.vars.len()
                )));
            }
            let num: num_bigint::BigInt = t.num.parse().map_err(|_| Error::Parse(t.num.clone()))?;
            let den: num_bigint::BigInt = t.den.parse().map_err(|_| Error::Parse(t.den.clone()))?;
            terms.push((t.exp.clone(), Rational::new(num, den)?));
        }
        Ok(MultiPoly::from_terms(j.vars.clone(), terms))
    }

    pub fn from_json(s: &str) -> Result<MultiPoly> {
        let j: PolyJson = serde_json::from_str(s)?;
        Self::from_json_value(&j)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (factors, c)) in self.named_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = factors
                .iter()
                .map(|(v, e)| {
                    if *e == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// Q[vars] as a [`Ring`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PolyRing;

impl Ring for PolyRing {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero()
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::one()
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.add(b)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        a.neg()
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.mul(b)
    }
    fn scale(&self, q: &Rational, a: &MultiPoly) -> Option<MultiPoly> {
        Some(a.scale(q))
    }
    fn is_q_linear(&self) -> bool {
        true
    }
    fn from_int(&self, n: &num_bigint::BigInt) -> MultiPoly {
        MultiPoly::constant(Rational::from_int(n.clone()))
    }
    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntegerRing, RationalField};

    fn v(n: &str) -> MultiPoly {
        MultiPoly::var(n)
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn natural_variable_order() {
        let mut names = vec!["sigma1", "s10", "s2", "s1", "x"];
        names.sort_by(|a, b| var_cmp(a, b));
        assert_eq!(names, ["s1", "s2", "s10", "sigma1", "x"]);
    }

    #[test]
    fn difference_of_squares() {
        let p = v("s1").add(&v("sigma1"));
        let m = v("s1").sub(&v("sigma1"));
        let expected = v("s1").pow(2).sub(&v("sigma1").pow(2));
        assert_eq!(p.mul(&m), expected);
    }

    #[test]
    fn multiplicative_identity() {
        let p = v("s1").mul(&v("s2")).add(&MultiPoly::constant(q(3)));
        assert_eq!(p.mul(&MultiPoly::one()), p);
    }

    #[test]
    fn binomial_square() {
        let p = v("s1").add(&v("s2"));
        let expected = v("s1")
            .pow(2)
            .add(&v("s1").mul(&v("s2")).scale(&q(2)))
            .add(&v("s2").pow(2));
        assert_eq!(p.mul(&p), expected);
    }

    #[test]
    fn cancellation_drops_variables() {
        let p = v("a").add(&v("b")).sub(&v("b"));
        assert_eq!(p.vars(), ["a"]);
        assert_eq!(p, v("a"));
    }

    #[test]
    fn display_is_descending_grlex() {
        let p = MultiPoly::from_terms(
            vec!["s1".into(), "s2".into(), "sigma1".into(), "sigma2".into()],
            [
                (vec![0, 1, 0, 1], q(-2)),
                (vec![2, 0, 0, 1], q(1)),
                (vec![0, 1, 2, 0], q(1)),
            ],
        );
        assert_eq!(p.to_string(), "s1^2*sigma2 + s2*sigma1^2 - 2*s2*sigma2");
    }

    #[test]
    fn eval_in_rationals() {
        let p = v("s1").mul(&v("sigma1"));
        let val = p
            .eval_in(&RationalField, |n| match n {
                "s1" => Some(q(2)),
                "sigma1" => Some(q(3)),
                _ => None,
            })
            .unwrap();
        assert_eq!(val, q(6));
    }

    #[test]
    fn eval_zero_assignment() {
        // s1^2 sigma2 + s2 sigma1^2 - 2 s2 sigma2 at the origin.
        let p = v("s1")
            .pow(2)
            .mul(&v("sigma2"))
            .add(&v("s2").mul(&v("sigma1").pow(2)))
            .sub(&v("s2").mul(&v("sigma2")).scale(&q(2)));
        assert_eq!(p.eval_in(&RationalField, |_| Some(q(0))).unwrap(), q(0));
    }

    #[test]
    fn eval_into_polynomial_ring() {
        // nu2 = s1^2 - 2 s2 with s_i -> e_i(x, y) gives x^2 + y^2.
        let nu2 = v("s1").pow(2).sub(&v("s2").scale(&q(2)));
        let e1 = v("x").add(&v("y"));
        let e2 = v("x").mul(&v("y"));
        let val = nu2
            .eval_in(&PolyRing, |n| match n {
                "s1" => Some(e1.clone()),
                "s2" => Some(e2.clone()),
                _ => None,
            })
            .unwrap();
        assert_eq!(val, v("x").pow(2).add(&v("y").pow(2)));
    }

    #[test]
    fn eval_errors() {
        let p = v("a").mul(&v("b"));
        match p.eval_in(&RationalField, |n| (n == "a").then(|| q(1))) {
            Err(Error::MissingAssignment(name)) => assert_eq!(name, "b"),
            other => panic!("unexpected {other:?}"),
        }
        let half = v("a").scale(&Rational::new(1, 2).unwrap());
        assert!(matches!(
            half.eval_in(&IntegerRing, |_| Some(num_bigint::BigInt::from(2))),
            Err(Error::NonIntegerCoefficient(_))
        ));
    }

    #[test]
    fn json_is_canonical() {
        let p = v("s1").pow(2).sub(&v("s2").scale(&q(2)));
        let s = p.to_json();
        assert_eq!(
            s,
            r#"{"vars":["s1","s2"],"terms":[{"exp":[2,0],"num":"1","den":"1"},{"exp":[0,1],"num":"-2","den":"1"}]}"#
        );
        let back = MultiPoly::from_json(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn json_rejects_ragged_terms() {
        let bad = r#"{"vars":["a"],"terms":[{"exp":[1,2],"num":"1","den":"1"}]}"#;
        assert!(MultiPoly::from_json(bad).is_err());
    }
}
