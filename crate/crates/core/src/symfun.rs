//! The universal polynomials `P_n`, `P_{n,m}` and the Newton polynomials
//! `nu_k`, written in elementary symmetric functions `s_i` (and `sigma_j` for
//! the second family of `P_n`).
//!
//! `P_n` is the coefficient of `t^n` in `prod_{i,j} (1 + xi_i zeta_j t)` and
//! `P_{n,m}` the coefficient of `t^n` in `prod_{i_1<..<i_m} (1 + xi_{i_1}..xi_{i_m} t)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::ring::Ring;

pub fn s_var(i: usize) -> String {
    format!("s{i}")
}

pub fn sigma_var(j: usize) -> String {
    format!("sigma{j}")
}

/// Which universal polynomial, with its indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolyKind {
    Pn { n: usize },
    Pnm { n: usize, m: usize },
    Nu { k: usize },
}

impl PolyKind {
    /// Key used for persistent storage: `Pn/<n>`, `Pnm/<n>/<m>`, `nu/<k>`.
    pub fn cache_key(&self) -> String {
        match self {
            PolyKind::Pn { n } => format!("Pn/{n}"),
            PolyKind::Pnm { n, m } => format!("Pnm/{n}/{m}"),
            PolyKind::Nu { k } => format!("nu/{k}"),
        }
    }

    pub fn compute(&self) -> Result<UniversalPoly> {
        match *self {
            PolyKind::Pn { n } => compute_pn_with(n, n, n),
            PolyKind::Pnm { n, m } => compute_pnm_with(n, m, n * m),
            PolyKind::Nu { k } => compute_nu(k),
        }
    }
}

impl fmt::Display for PolyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyKind::Pn { n } => write!(f, "P_{n}"),
            PolyKind::Pnm { n, m } => write!(f, "P_{{{n},{m}}}"),
            PolyKind::Nu { k } => write!(f, "nu_{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalPoly {
    kind: PolyKind,
    poly: MultiPoly,
}

/// Splits `s3` into `("s", 3)` and `sigma12` into `("sigma", 12)`.
fn parse_var(v: &str) -> Option<(&str, usize)> {
    let i = v.find(|c: char| c.is_ascii_digit())?;
    let (stem, idx) = v.split_at(i);
    Some((stem, idx.parse().ok()?))
}

impl UniversalPoly {
    pub fn new(kind: PolyKind, poly: MultiPoly) -> Self {
        UniversalPoly { kind, poly }
    }

    pub fn kind(&self) -> PolyKind {
        self.kind
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// The common weight of all terms in the family `stem` (`s_i` has weight
    /// `i`), or `None` if the terms disagree. The zero polynomial has weight
    /// `Some(0)` by convention.
    pub fn weight(&self, stem: &str) -> Option<u32> {
        let vars: Vec<Option<(&str, usize)>> =
            self.poly.vars().iter().map(|v| parse_var(v)).collect();
        let mut w = None;
        for (m, _) in self.poly.terms() {
            let tw: u32 =
                m.0.iter()
                    .zip(&vars)
                    .filter(|(_, v)| v.map(|(s, _)| s) == Some(stem))
                    .map(|(e, v)| e * v.unwrap().1 as u32)
                    .sum();
            match w {
                None => w = Some(tw),
                Some(x) if x != tw => return None,
                _ => {}
            }
        }
        Some(w.unwrap_or(0))
    }

    /// Whether the weights are the ones the definition forces.
    pub fn has_expected_weights(&self) -> bool {
        match self.kind {
            PolyKind::Pn { n } => {
                self.weight("s") == Some(n as u32) && self.weight("sigma") == Some(n as u32)
            }
            PolyKind::Pnm { n, m } => self.weight("s") == Some((n * m) as u32),
            PolyKind::Nu { k } => self.weight("s") == Some(k as u32),
        }
    }

    /// Evaluates with `s_i -> a[i-1]` and `sigma_j -> b[j-1]`.
    pub fn eval<R: Ring + ?Sized>(
        &self,
        ring: &R,
        a: &[R::Elem],
        b: &[R::Elem],
    ) -> Result<R::Elem> {
        self.poly.eval_in(ring, |v| {
            let (stem, i) = parse_var(v)?;
            if i == 0 {
                return None;
            }
            match stem {
                "s" => a.get(i - 1).cloned(),
                "sigma" => b.get(i - 1).cloned(),
                _ => None,
            }
        })
    }
}

impl fmt::Display for UniversalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Polynomial in a family of variables, coefficients in the remaining ones.
type Grouped = BTreeMap<Vec<u32>, MultiPoly>;
/// Polynomial in a family of variables with rational coefficients.
type FamilyPoly = HashMap<Vec<u32>, Rational>;

fn fp_mul(a: &FamilyPoly, b: &FamilyPoly) -> FamilyPoly {
    let mut out: FamilyPoly = HashMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let e: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn elementary(q: usize, i: usize) -> FamilyPoly {
    fn rec(q: usize, left: usize, cur: &mut Vec<u32>, out: &mut FamilyPoly) {
        if cur.len() == q {
            if left == 0 {
                out.insert(cur.clone(), Rational::one());
            }
            return;
        }
        if q - cur.len() > left {
            cur.push(0);
            rec(q, left, cur, out);
            cur.pop();
        }
        if left > 0 {
            cur.push(1);
            rec(q, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = HashMap::new();
    rec(q, i, &mut Vec::with_capacity(q), &mut out);
    out
}

/// `prod_i e_i^{a_i}` in `q` variables, memoized per call site.
struct ElementaryProducts {
    q: usize,
    memo: HashMap<Vec<u32>, Arc<FamilyPoly>>,
}

impl ElementaryProducts {
    fn new(q: usize) -> Self {
        ElementaryProducts {
            q,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, a: &[u32]) -> Arc<FamilyPoly> {
        if let Some(p) = self.memo.get(a) {
            return p.clone();
        }
        let p = match a.iter().rposition(|&x| x > 0) {
            None => {
                let mut one = HashMap::new();
                one.insert(vec![0; self.q], Rational::one());
                one
            }
            Some(i) => {
                let mut prev = a.to_vec();
                prev[i] -= 1;
                let base = self.get(&prev);
                fp_mul(&base, &elementary(self.q, i + 1))
            }
        };
        let p = Arc::new(p);
        self.memo.insert(a.to_vec(), p.clone());
        p
    }
}

/// Leading-term subtraction: repeatedly removes `c * e^lambda'` where the
/// lex-leading family exponent is `lambda`. Input must be symmetric in the
/// family; `out[i]` names the `(i+1)`-th elementary symmetric function.
fn grouped_to_elementary(mut g: Grouped, q: usize, out: &[String]) -> Result<MultiPoly> {
    let mut products = ElementaryProducts::new(q);
    let mut result = MultiPoly::zero();
    while let Some((lead, coef)) = g.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        if let Some(i) = (0..q.saturating_sub(1)).find(|&i| lead[i] < lead[i + 1]) {
            return Err(Error::NotSymmetric(
                format!("#{}", i + 1),
                format!("#{}", i + 2),
            ));
        }
        let a: Vec<u32> = (0..q)
            .map(|i| lead[i] - if i + 1 < q { lead[i + 1] } else { 0 })
            .collect();
        let e = products.get(&a);
        for (mono, r) in e.iter() {
            let delta = coef.scale(r);
            let entry = g.entry(mono.clone()).or_insert_with(MultiPoly::zero);
            *entry = entry.sub(&delta);
            if entry.is_zero() {
                g.remove(mono);
            }
        }
        let factors: Vec<(&str, u32)> = a
            .iter()
            .enumerate()
            .filter(|(_, x)| **x > 0)
            .map(|(i, x)| (out[i].as_str(), *x))
            .collect();
        result = result.add(&coef.mul(&MultiPoly::monomial(Rational::one(), &factors)));
    }
    Ok(result)
}

/// Rewrites a polynomial symmetric in the variables `family` as a polynomial
/// in elementary symmetric functions named `out` (same length). Variables
/// outside the family are treated as coefficients.
pub fn to_elementary_basis(p: &MultiPoly, family: &[String], out: &[String]) -> Result<MultiPoly> {
    if family.len() != out.len() {
        return Err(Error::InvalidArgument(
            "family and output names differ in length".into(),
        ));
    }
    for w in family.windows(2) {
        if p.swap_vars(&w[0], &w[1]) != *p {
            return Err(Error::NotSymmetric(w[0].clone(), w[1].clone()));
        }
    }
    let q = family.len();
    let idx: Vec<Option<usize>> = p
        .vars()
        .iter()
        .map(|v| family.iter().position(|f| f == v))
        .collect();
    let mut g: Grouped = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = vec![0u32; q];
        let mut rest = Vec::new();
        for (j, e) in m.0.iter().enumerate() {
            match idx[j] {
                Some(i) => key[i] = *e,
                None if *e > 0 => rest.push((p.vars()[j].as_str(), *e)),
                None => {}
            }
        }
        let term = MultiPoly::monomial(c.clone(), &rest);
        let entry = g.entry(key).or_insert_with(MultiPoly::zero);
        *entry = entry.add(&term);
    }
    g.retain(|_, v| !v.is_zero());
    grouped_to_elementary(g, q, out)
}

/// `to_elementary_basis` for the family `xi1..xiq`, producing `s1..sq`.
pub fn symmetric_to_elementary(p: &MultiPoly, q: usize) -> Result<MultiPoly> {
    let family: Vec<String> = (1..=q).map(|i| format!("xi{i}")).collect();
    let out: Vec<String> = (1..=q).map(s_var).collect();
    to_elementary_basis(p, &family, &out)
}

fn check_positive(what: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidArgument(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// All compositions of `n` into `r` parts, each at most `cap`.
fn compositions(n: usize, r: usize, cap: usize) -> Vec<Vec<u32>> {
    fn rec(left: usize, r: usize, cap: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left.min(cap) {
            cur.push(k as u32);
            rec(left - k, r, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, cap, &mut Vec::new(), &mut out);
    out
}

/// `P_n` computed with `q` variables `xi` and `r` variables `zeta`.
///
/// Uses `prod_{i,j}(1 + xi_i zeta_j t) = prod_j sum_k s_k zeta_j^k t^k`, so
/// only the `zeta` family needs rewriting.
pub fn compute_pn_with(n: usize, q: usize, r: usize) -> Result<UniversalPoly> {
    check_positive("n", n)?;
    check_positive("q", q)?;
    check_positive("r", r)?;
    let mut g: Grouped = BTreeMap::new();
    for comp in compositions(n, r, q.min(n)) {
        let factors: Vec<(String, u32)> = comp
            .iter()
            .filter(|&&k| k > 0)
            .map(|&k| (s_var(k as usize), 1))
            .collect();
        let refs: Vec<(&str, u32)> = factors.iter().map(|(v, e)| (v.as_str(), *e)).collect();
        let term = MultiPoly::monomial(Rational::one(), &refs);
        let entry = g.entry(comp).or_insert_with(MultiPoly::zero);
        *entry = entry.add(&term);
    }
    let out: Vec<String> = (1..=r).map(sigma_var).collect();
    let poly = grouped_to_elementary(g, r, &out)?;
    Ok(UniversalPoly::new(PolyKind::Pn { n }, poly))
}

/// `P_{n,m}` computed with `q >= m` variables by direct expansion.
pub fn compute_pnm_with(n: usize, m: usize, q: usize) -> Result<UniversalPoly> {
    check_positive("n", n)?;
    check_positive("m", m)?;
    if q < m {
        return Err(Error::InvalidArgument(format!(
            "need at least m = {m} variables, got {q}"
        )));
    }
    // by_t[k] = coefficient of t^k of the partial product
    let mut by_t: Vec<FamilyPoly> = vec![HashMap::new(); n + 1];
    by_t[0].insert(vec![0; q], Rational::one());
    let mut subset = Vec::with_capacity(m);
    let mut factors = Vec::new();
    fn subsets(q: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            let mut e = vec![0u32; q];
            for &i in cur.iter() {
                e[i] = 1;
            }
            out.push(e);
            return;
        }
        for i in start..q {
            cur.push(i);
            subsets(q, m, i + 1, cur, out);
            cur.pop();
        }
    }
    subsets(q, m, 0, &mut subset, &mut factors);
    for f in &factors {
        for k in (1..=n).rev() {
            let (lo, hi) = by_t.split_at_mut(k);
            let src = &lo[k - 1];
            let dst = &mut hi[0];
            for (mono, c) in src {
                let e: Vec<u32> = mono.iter().zip(f).map(|(a, b)| a + b).collect();
                *dst.entry(e).or_insert_with(Rational::zero) += c;
            }
        }
    }
    let g: Grouped = by_t
        .pop()
        .expect("n + 1 entries")
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, MultiPoly::constant(c)))
        .collect();
    let out: Vec<String> = (1..=q).map(s_var).collect();
    let poly = grouped_to_elementary(g, q, &out)?;
    Ok(UniversalPoly::new(PolyKind::Pnm { n, m }, poly))
}

/// `nu_k = xi_1^k + ... + xi_k^k` in elementary symmetric functions.
pub fn compute_nu(k: usize) -> Result<UniversalPoly> {
    check_positive("k", k)?;
    let g: Grouped = (0..k)
        .map(|i| {
            let mut e = vec![0u32; k];
            e[i] = k as u32;
            (e, MultiPoly::one())
        })
        .collect();
    let out: Vec<String> = (1..=k).map(s_var).collect();
    let poly = grouped_to_elementary(g, k, &out)?;
    Ok(UniversalPoly::new(PolyKind::Nu { k }, poly))
}

type Memo = RwLock<HashMap<PolyKind, Arc<UniversalPoly>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Process-wide memoized computation.
pub fn universal(kind: PolyKind) -> Result<Arc<UniversalPoly>> {
    if let Some(p) = memo().read().expect("memo lock").get(&kind) {
        return Ok(p.clone());
    }
    let p = Arc::new(kind.compute()?);
    memo()
        .write()
        .expect("memo lock")
        .entry(kind)
        .or_insert(p.clone());
    Ok(p)
}

/// Seeds the in-process memo, e.g. from a persistent cache.
pub fn seed_memo(p: UniversalPoly) {
    memo()
        .write()
        .expect("memo lock")
        .insert(p.kind, Arc::new(p));
}

pub fn compute_pn(n: usize) -> Result<Arc<UniversalPoly>> {
    universal(PolyKind::Pn { n })
}

pub fn compute_pnm(n: usize, m: usize) -> Result<Arc<UniversalPoly>> {
    universal(PolyKind::Pnm { n, m })
}

pub fn newton_nu(k: usize) -> Result<Arc<UniversalPoly>> {
    universal(PolyKind::Nu { k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> MultiPoly {
        MultiPoly::var(name)
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn p1_and_p2() {
        assert_eq!(compute_pn(1).unwrap().to_string(), "s1*sigma1");
        let p2 = compute_pn(2).unwrap();
        let expected = v("s1")
            .pow(2)
            .mul(&v("sigma2"))
            .add(&v("s2").mul(&v("sigma1").pow(2)))
            .sub(&v("s2").mul(&v("sigma2")).scale(&q(2)));
        assert_eq!(*p2.poly(), expected);
        assert!(p2.has_expected_weights());
    }

    #[test]
    fn small_pnm() {
        let p22 = compute_pnm(2, 2).unwrap();
        assert_eq!(*p22.poly(), v("s1").mul(&v("s3")).sub(&v("s4")));
        for n in 1..=4 {
            assert_eq!(*compute_pnm(n, 1).unwrap().poly(), v(&s_var(n)));
            assert_eq!(*compute_pnm(1, n).unwrap().poly(), v(&s_var(n)));
        }
    }

    #[test]
    fn newton_polynomials() {
        assert_eq!(*newton_nu(1).unwrap().poly(), v("s1"));
        assert_eq!(
            *newton_nu(2).unwrap().poly(),
            v("s1").pow(2).sub(&v("s2").scale(&q(2)))
        );
        let nu3 = v("s1")
            .pow(3)
            .sub(&v("s1").mul(&v("s2")).scale(&q(3)))
            .add(&v("s3").scale(&q(3)));
        assert_eq!(*newton_nu(3).unwrap().poly(), nu3);
    }

    #[test]
    fn elementary_rewriting() {
        let s = symmetric_to_elementary(&v("xi1").add(&v("xi2")), 2).unwrap();
        assert_eq!(s, v("s1"));
        let s = symmetric_to_elementary(&v("xi1").mul(&v("xi2")), 2).unwrap();
        assert_eq!(s, v("s2"));
        let p = v("xi1").pow(2).add(&v("xi2").pow(2));
        assert_eq!(
            symmetric_to_elementary(&p, 2).unwrap(),
            *newton_nu(2).unwrap().poly()
        );
    }

    #[test]
    fn rejects_non_symmetric() {
        let p = v("xi1").pow(2).add(&v("xi2"));
        match symmetric_to_elementary(&p, 2) {
            Err(Error::NotSymmetric(a, b)) => assert_eq!((a.as_str(), b.as_str()), ("xi1", "xi2")),
            other => panic!("expected NotSymmetric, got {other:?}"),
        }
    }

    #[test]
    fn coefficients_outside_family() {
        // a*(xi1 + xi2) + xi1*xi2
        let p = v("a")
            .mul(&v("xi1").add(&v("xi2")))
            .add(&v("xi1").mul(&v("xi2")));
        let r = symmetric_to_elementary(&p, 2).unwrap();
        assert_eq!(r, v("a").mul(&v("s1")).add(&v("s2")));
    }

    #[test]
    fn zero_index_rejected() {
        assert!(compute_pn_with(0, 1, 1).is_err());
        assert!(compute_pnm_with(1, 0, 1).is_err());
        assert!(compute_nu(0).is_err());
    }

    #[test]
    fn eval_in_rationals() {
        let p1 = compute_pn(1).unwrap();
        let val = p1
            .eval(&crate::ring::RationalField, &[q(2)], &[q(3)])
            .unwrap();
        assert_eq!(val, q(6));
        assert!(matches!(
            p1.eval(&crate::ring::RationalField, &[q(2)], &[]),
            Err(Error::MissingAssignment(_))
        ));
    }
}
