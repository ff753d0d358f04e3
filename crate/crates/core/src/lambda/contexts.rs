//! Small λ-contexts over the rationals and integers, including deliberately
//! broken ones for exercising the harness.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::LambdaContext;
use crate::rational::Rational;
use crate::ring::{IntegerRing, RationalField, Ring};

fn binomial(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc = acc
            * (x - &Rational::from(i as i64))
            * Rational::new(1, (i + 1) as i64).expect("nonzero");
    }
    acc
}

fn sample_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-6..=6);
    let den: i64 = rng.gen_range(1..=3);
    Rational::new(num, den).expect("nonzero denominator")
}

macro_rules! delegate_rational_ring {
    ($t:ty) => {
        impl Ring for $t {
            type Elem = Rational;
            fn zero(&self) -> Rational {
                RationalField.zero()
            }
            fn one(&self) -> Rational {
                RationalField.one()
            }
            fn add(&self, a: &Rational, b: &Rational) -> Rational {
                a + b
            }
            fn neg(&self, a: &Rational) -> Rational {
                -a
            }
            fn mul(&self, a: &Rational, b: &Rational) -> Rational {
                a * b
            }
            fn scale(&self, q: &Rational, a: &Rational) -> Option<Rational> {
                Some(q * a)
            }
            fn is_q_linear(&self) -> bool {
                true
            }
            fn from_int(&self, n: &BigInt) -> Rational {
                RationalField.from_int(n)
            }
            fn is_zero(&self, a: &Rational) -> bool {
                a.is_zero()
            }
        }
    };
}

/// `Q` with `λ^n(x) = binom(x, n)`, i.e. `λ_t(x) = (1 + t)^x`. A λ-ring with
/// trivial Adams operations.
#[derive(Debug, Clone, Copy, Default)]
pub struct BinomialRationals;
delegate_rational_ring!(BinomialRationals);

impl LambdaContext for BinomialRationals {
    fn name(&self) -> String {
        "binomial-rationals".into()
    }
    fn lambda(&self, n: usize, x: &Rational) -> Rational {
        binomial(x, n)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        sample_rational(rng)
    }
    fn adams(&self, _k: usize, x: &Rational) -> Option<Rational> {
        Some(x.clone())
    }
    fn describe(&self, x: &Rational) -> String {
        x.to_string()
    }
}

/// `Z` with binomial λ-operations: a λ-ring that is not a Q-algebra.
#[derive(Debug, Clone, Copy, Default)]
pub struct BinomialIntegers;

impl Ring for BinomialIntegers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        IntegerRing.zero()
    }
    fn one(&self) -> BigInt {
        IntegerRing.one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
}

impl LambdaContext for BinomialIntegers {
    fn name(&self) -> String {
        "binomial-integers".into()
    }
    fn lambda(&self, n: usize, x: &BigInt) -> BigInt {
        let b = binomial(&Rational::from(x.clone()), n);
        debug_assert!(b.is_integer());
        b.numer().clone()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> BigInt {
        BigInt::from(rng.gen_range(-8i64..=8))
    }
    fn adams(&self, _k: usize, x: &BigInt) -> Option<BigInt> {
        Some(x.clone())
    }
    fn describe(&self, x: &BigInt) -> String {
        x.to_string()
    }
}

/// Planted failure: `λ^n(x) = 0` for every `n >= 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroLambda;
delegate_rational_ring!(ZeroLambda);

impl LambdaContext for ZeroLambda {
    fn name(&self) -> String {
        "zero-lambda".into()
    }
    fn lambda(&self, n: usize, _x: &Rational) -> Rational {
        if n == 0 {
            Rational::one()
        } else {
            Rational::zero()
        }
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        let mut x = sample_rational(rng);
        if x.is_zero() {
            x = Rational::one();
        }
        x
    }
    fn describe(&self, x: &Rational) -> String {
        x.to_string()
    }
}

/// Planted failure of the λ-ring (but not the pre-λ) axioms:
/// `λ_t(x) = exp(xt)`, so `λ_t(1) != 1 + t`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialLambda;
delegate_rational_ring!(ExponentialLambda);

impl LambdaContext for ExponentialLambda {
    fn name(&self) -> String {
        "exponential-lambda".into()
    }
    fn lambda(&self, n: usize, x: &Rational) -> Rational {
        x.pow(n as u32) * Rational::factorial(n as u32).recip().expect("nonzero")
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        sample_rational(rng)
    }
    fn describe(&self, x: &Rational) -> String {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{verify_axioms, Mode, VerifyOptions};

    #[test]
    fn binomial_rationals_form_a_lambda_ring() {
        for mode in [Mode::PreLambda, Mode::Lambda, Mode::AdamsCriterion] {
            let r = verify_axioms(&BinomialRationals, &VerifyOptions::new(mode, 20, 3, 6));
            assert!(r.all_pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn binomial_integers_form_a_lambda_ring() {
        for mode in [Mode::PreLambda, Mode::Lambda, Mode::AdamsCriterion] {
            let r = verify_axioms(&BinomialIntegers, &VerifyOptions::new(mode, 20, 5, 5));
            assert!(r.all_pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn zero_lambda_fails_with_witness() {
        let r = verify_axioms(&ZeroLambda, &VerifyOptions::new(Mode::PreLambda, 10, 1, 4));
        let fail = r
            .failures()
            .find(|c| c.axiom == "lambda^1(x) = x")
            .expect("planted failure detected");
        assert!(fail.witness.as_deref().unwrap().contains("x = "));
    }

    #[test]
    fn exponential_is_pre_lambda_only() {
        let pre = verify_axioms(
            &ExponentialLambda,
            &VerifyOptions::new(Mode::PreLambda, 10, 1, 5),
        );
        assert!(pre.all_pass(), "{}", pre.to_text());
        let full = verify_axioms(
            &ExponentialLambda,
            &VerifyOptions::new(Mode::Lambda, 10, 1, 5),
        );
        assert!(full.failures().any(|c| c.axiom == "lambda_t(1) = 1 + t"));
    }

    #[test]
    fn reports_are_deterministic() {
        let o = VerifyOptions::new(Mode::Lambda, 16, 42, 5);
        let a = verify_axioms(&BinomialRationals, &o).to_json();
        let b = verify_axioms(&BinomialRationals, &o).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"seed\": 42"));
    }
}
