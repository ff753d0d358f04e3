//! The commutative-ring interface every algebraic structure in the crate
//! implements.
//!
//! Rings are *context objects*: an element alone does not know how to
//! multiply itself (a form needs its CDGA model, a class needs its ring), so
//! operations go through `&self` of the ring.

use std::fmt::Debug;

use num_bigint::BigInt;

use crate::rational::Rational;

pub trait Ring: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplication by a rational scalar. `None` when the ring is not a
    /// Q-algebra (or the scalar cannot act, e.g. a fraction on integers).
    fn scale(&self, _q: &Rational, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Whether `scale` succeeds for every rational.
    fn is_q_linear(&self) -> bool {
        false
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// The image of an integer under the unique ring map from Z.
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        use num_traits::{Signed, Zero};
        let mut acc = self.zero();
        let mut base = self.one();
        let mut m = n.abs();
        let two = BigInt::from(2);
        while !m.is_zero() {
            if (&m % &two) == BigInt::from(1) {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            m /= &two;
        }
        if n.is_negative() {
            self.neg(&acc)
        } else {
            acc
        }
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    /// `q * a`, using exact scaling when available and falling back to
    /// integer multiples otherwise.
    fn scale_checked(&self, q: &Rational, a: &Self::Elem) -> Option<Self::Elem> {
        if let Some(v) = self.scale(q, a) {
            return Some(v);
        }
        if q.is_integer() {
            Some(self.mul(&self.from_int(q.numer()), a))
        } else {
            None
        }
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// The field of rationals.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalField;

impl Ring for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
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
        Rational::from_int(n.clone())
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// The integers: a ring with no division by integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::from(0)
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
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
