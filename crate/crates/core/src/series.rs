//! Truncated univariate power series `A[[t]] / t^(N+1)` over an abstract ring.

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Coefficients `c_0..=c_N`; everything of degree above `N` is discarded.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> TruncSeries<E> {
    /// Panics if `coeffs` is empty: a series always has a constant term.
    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        TruncSeries { coeffs }
    }

    /// Pads with zeros (or truncates) to exactly `trunc + 1` coefficients.
    pub fn from_partial<R: Ring<Elem = E> + ?Sized>(
        ring: &R,
        mut coeffs: Vec<E>,
        trunc: usize,
    ) -> Self {
        coeffs.resize(trunc + 1, ring.zero());
        TruncSeries { coeffs }
    }

    pub fn constant<R: Ring<Elem = E> + ?Sized>(ring: &R, c: E, trunc: usize) -> Self {
        Self::from_partial(ring, vec![c], trunc)
    }

    pub fn one<R: Ring<Elem = E> + ?Sized>(ring: &R, trunc: usize) -> Self {
        Self::constant(ring, ring.one(), trunc)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &E {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    /// Drops terms above `n`. `n` must not exceed the current order.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(n <= self.trunc(), "cannot extend a truncated series");
        TruncSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn map<F, R>(&self, f: F) -> TruncSeries<R>
    where
        F: FnMut(&E) -> R,
    {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

fn check_orders<E>(f: &TruncSeries<E>, g: &TruncSeries<E>) -> Result<()> {
    if f.coeffs.len() != g.coeffs.len() {
        return Err(Error::TruncationMismatch(
            f.coeffs.len() - 1,
            g.coeffs.len() - 1,
        ));
    }
    Ok(())
}

pub fn series_add<R: Ring + ?Sized>(
    ring: &R,
    f: &TruncSeries<R::Elem>,
    g: &TruncSeries<R::Elem>,
) -> Result<TruncSeries<R::Elem>> {
    check_orders(f, g)?;
    Ok(TruncSeries {
        coeffs: f
            .coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| ring.add(a, b))
            .collect(),
    })
}

/// Cauchy product truncated at the common order.
pub fn series_mul<R: Ring + ?Sized>(
    ring: &R,
    f: &TruncSeries<R::Elem>,
    g: &TruncSeries<R::Elem>,
) -> Result<TruncSeries<R::Elem>> {
    check_orders(f, g)?;
    let n = f.trunc();
    let coeffs = (0..=n)
        .map(|k| {
            let mut acc: Option<R::Elem> = None;
            for i in 0..=k {
                let (a, b) = (&f.coeffs[i], &g.coeffs[k - i]);
                if ring.is_zero(a) || ring.is_zero(b) {
                    continue;
                }
                let p = ring.mul(a, b);
                acc = Some(match acc {
                    None => p,
                    Some(s) => ring.add(&s, &p),
                });
            }
            acc.unwrap_or_else(|| ring.zero())
        })
        .collect();
    Ok(TruncSeries { coeffs })
}

/// Multiplicative inverse of a series with constant term one.
pub fn series_invert<R: Ring + ?Sized>(
    ring: &R,
    f: &TruncSeries<R::Elem>,
) -> Result<TruncSeries<R::Elem>> {
    if f.coeffs[0] != ring.one() {
        return Err(Error::NotUnitConstant);
    }
    let n = f.trunc();
    let mut g: Vec<R::Elem> = Vec::with_capacity(n + 1);
    g.push(ring.one());
    // g_k = -sum_{i=1..k} f_i g_{k-i}
    for k in 1..=n {
        let mut acc = ring.zero();
        for i in 1..=k {
            if ring.is_zero(&f.coeffs[i]) || ring.is_zero(&g[k - i]) {
                continue;
            }
            acc = ring.add(&acc, &ring.mul(&f.coeffs[i], &g[k - i]));
        }
        g.push(ring.neg(&acc));
    }
    Ok(TruncSeries { coeffs: g })
}

/// Formal derivative; the result has order one less.
pub fn series_derivative<R: Ring + ?Sized>(
    ring: &R,
    f: &TruncSeries<R::Elem>,
) -> TruncSeries<R::Elem> {
    let n = f.trunc();
    if n == 0 {
        return TruncSeries {
            coeffs: vec![ring.zero()],
        };
    }
    TruncSeries {
        coeffs: (1..=n)
            .map(|k| ring.mul(&ring.from_i64(k as i64), &f.coeffs[k]))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MultiPoly, PolyRing};
    use crate::rational::Rational;
    use crate::ring::RationalField;

    fn qs(v: &[i64]) -> TruncSeries<Rational> {
        TruncSeries::from_coeffs(v.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn product_of_linear_factors() {
        let a = MultiPoly::var("a");
        let b = MultiPoly::var("b");
        let f = TruncSeries::from_partial(&PolyRing, vec![MultiPoly::one(), a.clone()], 2);
        let g = TruncSeries::from_partial(&PolyRing, vec![MultiPoly::one(), b.clone()], 2);
        let p = series_mul(&PolyRing, &f, &g).unwrap();
        assert_eq!(p.coeffs(), &[MultiPoly::one(), a.add(&b), a.mul(&b)]);
    }

    #[test]
    fn unit_is_neutral() {
        let f = qs(&[1, 4, -2, 7]);
        let one = TruncSeries::one(&RationalField, 3);
        assert_eq!(series_mul(&RationalField, &f, &one).unwrap(), f);
    }

    #[test]
    fn geometric_identity() {
        let p = series_mul(&RationalField, &qs(&[1, 1, 0, 0]), &qs(&[1, -1, 1, -1])).unwrap();
        assert_eq!(p, qs(&[1, 0, 0, 0]));
    }

    #[test]
    fn invert_one_plus_t() {
        assert_eq!(
            series_invert(&RationalField, &qs(&[1, 1, 0, 0])).unwrap(),
            qs(&[1, -1, 1, -1])
        );
        assert_eq!(series_invert(&RationalField, &qs(&[1])).unwrap(), qs(&[1]));
    }

    #[test]
    fn invert_requires_unit_constant() {
        assert!(matches!(
            series_invert(&RationalField, &qs(&[2, 1])),
            Err(Error::NotUnitConstant)
        ));
    }

    #[test]
    fn mismatched_orders() {
        assert!(matches!(
            series_mul(&RationalField, &qs(&[1, 1]), &qs(&[1, 1, 1])),
            Err(Error::TruncationMismatch(1, 2))
        ));
    }

    #[test]
    fn derivative_of_polynomial() {
        let d = series_derivative(&RationalField, &qs(&[5, 1, 3, 2]));
        assert_eq!(d, qs(&[1, 6, 6]));
    }
}
