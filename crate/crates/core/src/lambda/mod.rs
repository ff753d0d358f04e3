//! λ-operations: the Witt-style pre-λ-ring on `1 + A[[t]]^+`, conversion
//! between λ-operations and Adams operations, and the context interface used
//! by the axiom harness.

pub mod contexts;
pub mod verify;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::Ring;
use crate::series::{self, TruncSeries};
use crate::symfun;

pub use verify::{verify_axioms, Check, Mode, Report, VerifyOptions};

/// A truncated series with constant term one.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeries<E> {
    series: TruncSeries<E>,
}

impl<E: Clone + PartialEq> LambdaSeries<E> {
    pub fn new<R: Ring<Elem = E> + ?Sized>(ring: &R, series: TruncSeries<E>) -> Result<Self> {
        if series.coeff(0) != &ring.one() {
            return Err(Error::NotUnitConstant);
        }
        Ok(LambdaSeries { series })
    }

    /// `1 + a_1 t + ... + a_N t^N` from `a_1..a_N`.
    pub fn from_tail<R: Ring<Elem = E> + ?Sized>(ring: &R, tail: Vec<E>) -> Self {
        let mut c = Vec::with_capacity(tail.len() + 1);
        c.push(ring.one());
        c.extend(tail);
        LambdaSeries {
            series: TruncSeries::from_coeffs(c),
        }
    }

    /// The Witt zero, `1`.
    pub fn zero<R: Ring<Elem = E> + ?Sized>(ring: &R, trunc: usize) -> Self {
        LambdaSeries {
            series: TruncSeries::one(ring, trunc),
        }
    }

    /// The Witt identity, `1 + t`.
    pub fn one<R: Ring<Elem = E> + ?Sized>(ring: &R, trunc: usize) -> Self {
        Self::linear(ring, ring.one(), trunc)
    }

    /// `1 + x t`.
    pub fn linear<R: Ring<Elem = E> + ?Sized>(ring: &R, x: E, trunc: usize) -> Self {
        let mut c = vec![ring.one()];
        if trunc >= 1 {
            c.push(x);
        }
        LambdaSeries {
            series: TruncSeries::from_partial(ring, c, trunc),
        }
    }

    pub fn series(&self) -> &TruncSeries<E> {
        &self.series
    }

    pub fn trunc(&self) -> usize {
        self.series.trunc()
    }

    pub fn coeff(&self, n: usize) -> &E {
        self.series.coeff(n)
    }

    pub fn coeffs(&self) -> &[E] {
        self.series.coeffs()
    }

    pub fn truncate(&self, n: usize) -> Self {
        LambdaSeries {
            series: self.series.truncate(n),
        }
    }
}

fn check_trunc<E: Clone>(i: &LambdaSeries<E>, j: &LambdaSeries<E>) -> Result<()> {
    if i.series.trunc() != j.series.trunc() {
        return Err(Error::TruncationMismatch(
            i.series.trunc(),
            j.series.trunc(),
        ));
    }
    Ok(())
}

/// Witt addition: the series product.
pub fn witt_add<R: Ring + ?Sized>(
    ring: &R,
    i: &LambdaSeries<R::Elem>,
    j: &LambdaSeries<R::Elem>,
) -> Result<LambdaSeries<R::Elem>> {
    Ok(LambdaSeries {
        series: series::series_mul(ring, &i.series, &j.series)?,
    })
}

/// Witt negation: the series inverse.
pub fn witt_neg<R: Ring + ?Sized>(
    ring: &R,
    i: &LambdaSeries<R::Elem>,
) -> Result<LambdaSeries<R::Elem>> {
    Ok(LambdaSeries {
        series: series::series_invert(ring, &i.series)?,
    })
}

/// Witt multiplication: coefficient `n` is `P_n(a_1..a_n; b_1..b_n)`.
pub fn witt_mul<R: Ring + ?Sized>(
    ring: &R,
    i: &LambdaSeries<R::Elem>,
    j: &LambdaSeries<R::Elem>,
) -> Result<LambdaSeries<R::Elem>> {
    check_trunc(i, j)?;
    let n_max = i.trunc();
    let a = &i.coeffs()[1..];
    let b = &j.coeffs()[1..];
    let mut tail = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let p = symfun::compute_pn(n)?;
        tail.push(p.eval(ring, &a[..n], &b[..n])?);
    }
    Ok(LambdaSeries::from_tail(ring, tail))
}

/// Witt λ-operation: coefficient `n` is `P_{n,m}(a_1..a_{nm})`.
///
/// Coefficient `n` needs `a_{nm}`, so for `m >= 1` the result is truncated at
/// `floor(N/m)`. `λ̃^0(I) = 1 + t` keeps order `N`.
pub fn witt_lambda<R: Ring + ?Sized>(
    ring: &R,
    m: usize,
    i: &LambdaSeries<R::Elem>,
) -> Result<LambdaSeries<R::Elem>> {
    let n_in = i.trunc();
    if m == 0 {
        return Ok(LambdaSeries::one(ring, n_in));
    }
    let n_out = n_in / m;
    let a = &i.coeffs()[1..];
    let mut tail = Vec::with_capacity(n_out);
    for n in 1..=n_out {
        let p = symfun::compute_pnm(n, m)?;
        tail.push(p.eval(ring, &a[..n * m], &[])?);
    }
    Ok(LambdaSeries::from_tail(ring, tail))
}

/// Adams operations `Ψ^1..Ψ^N` from `λ_t` via the logarithmic derivative:
/// `Ψ^(n+1) = (-1)^n [t^n] (s' / s)`.
///
/// Only the series inverse is needed, so this works over any ring.
pub fn adams_via_log<R: Ring + ?Sized>(
    ring: &R,
    s: &LambdaSeries<R::Elem>,
) -> Result<Vec<R::Elem>> {
    let n = s.trunc();
    if n == 0 {
        return Ok(Vec::new());
    }
    let deriv = series::series_derivative(ring, &s.series);
    let inv = series::series_invert(ring, &s.series.truncate(n - 1))?;
    let q = series::series_mul(ring, &deriv, &inv)?;
    Ok(q.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c.clone() } else { ring.neg(c) })
        .collect())
}

/// `λ_t = exp(sum_k (-1)^(k-1) Ψ^k t^k / k)` from `Ψ^1..Ψ^N`, by Newton's
/// identity `n λ^n = sum_{k=1..n} (-1)^(k-1) Ψ^k λ^(n-k)`. Needs division by
/// integers.
pub fn lambda_from_adams<R: Ring + ?Sized>(
    ring: &R,
    psi: &[R::Elem],
    trunc: usize,
) -> Result<LambdaSeries<R::Elem>> {
    if psi.len() < trunc {
        return Err(Error::InvalidArgument(format!(
            "need {trunc} Adams values, got {}",
            psi.len()
        )));
    }
    let mut lam = vec![ring.one()];
    for n in 1..=trunc {
        let mut acc = ring.zero();
        for k in 1..=n {
            let term = ring.mul(&psi[k - 1], &lam[n - k]);
            acc = if k % 2 == 1 {
                ring.add(&acc, &term)
            } else {
                ring.sub(&acc, &term)
            };
        }
        let inv = Rational::new(1, n as i64)?;
        let v = ring
            .scale(&inv, &acc)
            .ok_or_else(|| Error::NotRational("lambda_from_adams divides by integers".into()))?;
        lam.push(v);
    }
    Ok(LambdaSeries {
        series: TruncSeries::from_coeffs(lam),
    })
}

/// A commutative ring with operations `λ^n` and a seeded sample generator.
/// The harness checks the axioms; implementations need not satisfy them.
pub trait LambdaContext: Ring {
    fn name(&self) -> String;

    fn lambda(&self, n: usize, x: &Self::Elem) -> Self::Elem;

    /// `λ^0(x) + λ^1(x) t + ... + λ^N(x) t^N`. Override when the whole
    /// series is cheaper to compute at once.
    fn lambda_series(&self, x: &Self::Elem, trunc: usize) -> TruncSeries<Self::Elem> {
        TruncSeries::from_coeffs((0..=trunc).map(|n| self.lambda(n, x)).collect())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Natively defined Adams operation, if the context has one; the harness
    /// compares it with the one extracted from `λ_t`.
    fn adams(&self, _k: usize, _x: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn describe(&self, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

/// `λ_t(x)` as a series with constant term one.
pub fn lambda_t<C: LambdaContext + ?Sized>(
    ctx: &C,
    x: &C::Elem,
    trunc: usize,
) -> Result<LambdaSeries<C::Elem>> {
    LambdaSeries::new(ctx, ctx.lambda_series(x, trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MultiPoly, PolyRing};
    use crate::ring::{IntegerRing, RationalField};
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn qs(tail: &[i64]) -> LambdaSeries<Rational> {
        LambdaSeries::from_tail(&RationalField, tail.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn witt_add_linear_factors() {
        let a = MultiPoly::var("a");
        let b = MultiPoly::var("b");
        let i = LambdaSeries::linear(&PolyRing, a.clone(), 2);
        let j = LambdaSeries::linear(&PolyRing, b.clone(), 2);
        let s = witt_add(&PolyRing, &i, &j).unwrap();
        assert_eq!(s.coeffs(), &[MultiPoly::one(), a.add(&b), a.mul(&b)]);
    }

    #[test]
    fn witt_identity_and_zero() {
        let j = qs(&[3, -1, 4, 1]);
        let one = LambdaSeries::one(&RationalField, 4);
        let zero = LambdaSeries::zero(&RationalField, 4);
        assert_eq!(witt_mul(&RationalField, &one, &j).unwrap(), j);
        assert_eq!(witt_mul(&RationalField, &zero, &j).unwrap(), zero);
        assert_eq!(witt_add(&RationalField, &zero, &j).unwrap(), j);
    }

    #[test]
    fn witt_lambda_edges() {
        let i = qs(&[2, 5, -3, 7, 1, 1]);
        assert_eq!(
            witt_lambda(&RationalField, 0, &i).unwrap(),
            LambdaSeries::one(&RationalField, 6)
        );
        assert_eq!(witt_lambda(&RationalField, 1, &i).unwrap(), i);
        let lin = qs(&[7, 0, 0, 0, 0, 0]);
        let l2 = witt_lambda(&RationalField, 2, &lin).unwrap();
        assert_eq!(l2, LambdaSeries::zero(&RationalField, 3));
    }

    #[test]
    fn adams_of_line() {
        let x = q(3);
        let s = LambdaSeries::linear(&RationalField, x.clone(), 5);
        let psi = adams_via_log(&RationalField, &s).unwrap();
        let expected: Vec<Rational> = (1..=5).map(|n| x.pow(n)).collect();
        assert_eq!(psi, expected);
        let one = LambdaSeries::one(&RationalField, 5);
        assert!(adams_via_log(&RationalField, &one)
            .unwrap()
            .iter()
            .all(Rational::is_one));
    }

    #[test]
    fn adams_roundtrip() {
        let psi = vec![q(2), q(-1), q(5), q(0), q(7)];
        let s = lambda_from_adams(&RationalField, &psi, 5).unwrap();
        assert_eq!(adams_via_log(&RationalField, &s).unwrap(), psi);
        let zero = lambda_from_adams(&RationalField, &[q(0), q(0), q(0)], 3).unwrap();
        assert_eq!(zero, LambdaSeries::zero(&RationalField, 3));
    }

    #[test]
    fn lambda2_from_adams() {
        let psi = vec![q(3), q(5)];
        let s = lambda_from_adams(&RationalField, &psi, 2).unwrap();
        // (3^2 - 5) / 2
        assert_eq!(s.coeff(2), &q(2));
    }

    #[test]
    fn adams_over_integers_needs_no_division() {
        let s = LambdaSeries::from_tail(
            &IntegerRing,
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(0)],
        );
        let psi = adams_via_log(&IntegerRing, &s).unwrap();
        // two lines with roots 1, 1 and one more: (1+t)^2 -> psi = 2
        assert_eq!(psi, vec![BigInt::from(2); 3]);
        assert!(matches!(
            lambda_from_adams(&IntegerRing, &psi, 3),
            Err(Error::NotRational(_))
        ));
    }

    #[test]
    fn truncation_mismatch() {
        assert!(matches!(
            witt_mul(&RationalField, &qs(&[1, 2]), &qs(&[1])),
            Err(Error::TruncationMismatch(2, 1))
        ));
    }
}
