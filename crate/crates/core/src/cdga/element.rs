//! Elements of a CDGA model and canonical cosets modulo exact forms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::free;
use super::model::CdgaModel;
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rational::Rational;

pub(crate) fn same_model(a: &Arc<CdgaModel>, b: &Arc<CdgaModel>) -> bool {
    Arc::ptr_eq(a, b) || (a.name() == b.name() && a.spec() == b.spec())
}

/// A form in a model, stored as a dense coordinate vector in the model's
/// global basis (all degrees concatenated).
#[derive(Clone)]
pub struct GradedElement {
    model: Arc<CdgaModel>,
    coords: Vector,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.coords == other.coords
    }
}
impl Eq for GradedElement {}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.model.name(), self)
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let label = &self.model.basis()[i].label;
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (mag.is_one(), label.as_str()) {
                (_, "1") => write!(f, "{mag}")?,
                (true, l) => write!(f, "{l}")?,
                (false, l) => write!(f, "{mag}*{l}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl GradedElement {
    pub fn zero(model: &Arc<CdgaModel>) -> Self {
        GradedElement {
            model: model.clone(),
            coords: linalg::zero_vector(model.dim()),
        }
    }

    pub fn scalar(model: &Arc<CdgaModel>, c: Rational) -> Self {
        let mut e = Self::zero(model);
        e.coords[0] = c;
        e
    }

    pub fn one(model: &Arc<CdgaModel>) -> Self {
        Self::scalar(model, Rational::one())
    }

    pub fn basis(model: &Arc<CdgaModel>, i: usize) -> Self {
        let mut e = Self::zero(model);
        e.coords[i] = Rational::one();
        e
    }

    pub fn from_coords(model: &Arc<CdgaModel>, coords: Vector) -> Result<Self> {
        if coords.len() != model.dim() {
            return Err(Error::InvalidModel {
                model: model.name().into(),
                reason: format!("expected {} coordinates, got {}", model.dim(), coords.len()),
            });
        }
        Ok(GradedElement {
            model: model.clone(),
            coords,
        })
    }

    /// Element of degree `k` from local coordinates in that degree.
    pub fn from_degree_coords(model: &Arc<CdgaModel>, k: usize, local: &[Rational]) -> Self {
        let mut e = Self::zero(model);
        let r = model.degree_range(k);
        debug_assert_eq!(local.len(), r.len());
        for (i, x) in r.zip(local) {
            e.coords[i] = x.clone();
        }
        e
    }

    /// Parses an expression in the model's generators, e.g. `x^2 - 2*y`.
    pub fn parse(model: &Arc<CdgaModel>, src: &str) -> Result<Self> {
        let f = free::parse_expr(src, model.generators())?;
        Ok(GradedElement {
            model: model.clone(),
            coords: model.reduce_free(&f),
        })
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn degree_coords(&self, k: usize) -> &[Rational] {
        &self.coords[self.model.degree_range(k)]
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vector(&self.coords)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coords[0]
    }

    /// Degrees with a nonzero component.
    pub fn support_degrees(&self) -> Vec<usize> {
        (0..=self.model.top_degree())
            .filter(|&k| !linalg::is_zero_vector(self.degree_coords(k)))
            .collect()
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.support_degrees().iter().all(|&d| d == k)
    }

    pub fn is_even(&self) -> bool {
        self.support_degrees().iter().all(|d| d % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.support_degrees().iter().all(|d| d % 2 == 1)
    }

    /// The component of degree `k`.
    pub fn component(&self, k: usize) -> Self {
        let mut e = Self::zero(&self.model);
        for i in self.model.degree_range(k) {
            e.coords[i] = self.coords[i].clone();
        }
        e
    }

    fn filter_degrees(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut e = self.clone();
        for (i, c) in e.coords.iter_mut().enumerate() {
            if !keep(self.model.basis_degree(i)) {
                *c = Rational::zero();
            }
        }
        e
    }

    pub fn even_part(&self) -> Self {
        self.filter_degrees(|d| d % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter_degrees(|d| d % 2 == 1)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch(
                self.model.name().into(),
                other.model.name().into(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&-other))
    }

    /// The graded-commutative product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wedge_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        GradedElement {
            model: self.model.clone(),
            coords,
        }
    }

    fn wedge_unchecked(&self, other: &Self) -> Self {
        let mut out = linalg::zero_vector(self.model.dim());
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let sp = self.model.mul_basis(i, j);
                if sp.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, x) in sp {
                    out[*k] += &(&ab * x);
                }
            }
        }
        GradedElement {
            model: self.model.clone(),
            coords: out,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GradedElement {
            model: self.model.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.model);
        for _ in 0..e {
            acc = acc.wedge_unchecked(self);
        }
        acc
    }

    pub fn differential(&self) -> Self {
        let mut out = linalg::zero_vector(self.model.dim());
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, x) in self.model.d_basis(i) {
                out[*k] += &(a * x);
            }
        }
        GradedElement {
            model: self.model.clone(),
            coords: out,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// Multiplies the degree-`2l` and degree-`2l-1` components by `k^l`.
    pub fn adams_scale(&self, k: i64) -> Self {
        let kq = Rational::from(k);
        let mut coords = self.coords.clone();
        for (i, c) in coords.iter_mut().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.model.basis_degree(i);
            let l = d.div_ceil(2) as u32;
            *c *= &kq.pow(l);
        }
        GradedElement {
            model: self.model.clone(),
            coords,
        }
    }

    /// `exp(self)` truncated by nilpotency; requires a vanishing constant
    /// term (an even form of positive degree).
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Unsupported(
                "exp of a form with nonzero constant term".into(),
            ));
        }
        let mut acc = Self::one(&self.model);
        let mut term = Self::one(&self.model);
        for n in 1..=self.model.top_degree() {
            term = term
                .wedge_unchecked(self)
                .scale(&Rational::new(1, n as i64)?);
            if term.is_zero() {
                break;
            }
            acc = acc.add_unchecked(&term);
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    /// Panics on model mismatch; use `try_add` for a checked version.
    fn add(self, rhs: &GradedElement) -> GradedElement {
        self.try_add(rhs)
            .expect("graded elements from different models")
    }
}

impl<'a> Sub<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        self.try_sub(rhs)
            .expect("graded elements from different models")
    }
}

impl<'a> Mul<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        self.wedge(rhs)
            .expect("graded elements from different models")
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            model: self.model.clone(),
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

/// Coordinate serialization: rationals as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordsJson(pub Vec<String>);

impl GradedElement {
    pub fn to_coords_json(&self) -> CoordsJson {
        CoordsJson(self.coords.iter().map(|c| c.to_string()).collect())
    }

    pub fn from_coords_json(model: &Arc<CdgaModel>, c: &CoordsJson) -> Result<Self> {
        let coords = c.0.iter().map(|s| s.parse()).collect::<Result<Vector>>()?;
        Self::from_coords(model, coords)
    }
}

/// A coset of `Omega^odd / Im d`, stored by its canonical representative:
/// in each odd degree the coordinates at the pivot columns of `Im d` are
/// zero.
#[derive(Clone, PartialEq, Eq)]
pub struct OddCoset {
    rep: GradedElement,
}

impl fmt::Debug for OddCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

impl fmt::Display for OddCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// Projects every odd-degree component onto the canonical complement of
/// `Im d`; even components are left untouched.
pub(crate) fn normalize_odd_in_place(e: &mut GradedElement) {
    let model = e.model.clone();
    for k in (1..=model.top_degree()).step_by(2) {
        let ech = model.image_of_d(k);
        if ech.rank() == 0 {
            continue;
        }
        let r = model.degree_range(k);
        let mut local = e.coords[r.clone()].to_vec();
        ech.reduce(&mut local);
        for (i, x) in r.zip(local) {
            e.coords[i] = x;
        }
    }
}

impl OddCoset {
    pub fn zero(model: &Arc<CdgaModel>) -> Self {
        OddCoset {
            rep: GradedElement::zero(model),
        }
    }

    /// The coset of an odd form.
    pub fn normalize(a: &GradedElement) -> Result<Self> {
        if !a.is_odd() {
            return Err(Error::WrongParity(format!("expected an odd form, got {a}")));
        }
        let mut rep = a.clone();
        normalize_odd_in_place(&mut rep);
        Ok(OddCoset { rep })
    }

    /// The coset of the odd part of `a`, ignoring its even part.
    pub fn of_odd_part(a: &GradedElement) -> Self {
        let mut rep = a.odd_part();
        normalize_odd_in_place(&mut rep);
        OddCoset { rep }
    }

    pub fn representative(&self) -> &GradedElement {
        &self.rep
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        self.rep.model()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// `d` is well defined on cosets.
    pub fn differential(&self) -> GradedElement {
        self.rep.differential()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(OddCoset {
            rep: self.rep.try_add(&other.rep)?,
        })
    }

    pub fn neg(&self) -> Self {
        OddCoset { rep: -&self.rep }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        OddCoset {
            rep: self.rep.scale(c),
        }
    }

    pub fn adams_scale(&self, k: i64) -> Self {
        // Scaling by k^l per degree preserves Im d degreewise, so the
        // representative stays canonical.
        OddCoset {
            rep: self.rep.adams_scale(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::model::ModelSpec;

    fn torus2() -> Arc<CdgaModel> {
        CdgaModel::build(&ModelSpec::torus(2)).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let m = torus2();
        let dx1 = GradedElement::parse(&m, "dx1").unwrap();
        assert!((&dx1 * &dx1).is_zero());
    }

    #[test]
    fn graded_sign() {
        let m = torus2();
        let dx1 = GradedElement::parse(&m, "dx1").unwrap();
        let dx2 = GradedElement::parse(&m, "dx2").unwrap();
        assert_eq!(&dx1 * &dx2, -&(&dx2 * &dx1));
        assert_eq!(&dx1 * &GradedElement::one(&m), dx1);
    }

    #[test]
    fn differential_on_s2() {
        let m = CdgaModel::build(&ModelSpec::s2()).unwrap();
        let x = GradedElement::parse(&m, "x").unwrap();
        let y = GradedElement::parse(&m, "y").unwrap();
        assert!(x.differential().is_zero());
        assert_eq!(y.differential(), GradedElement::parse(&m, "x^2").unwrap());
    }

    #[test]
    fn mismatched_models() {
        let a = GradedElement::one(&torus2());
        let b = GradedElement::one(&CdgaModel::build(&ModelSpec::torus(3)).unwrap());
        assert!(matches!(a.wedge(&b), Err(Error::ModelMismatch(..))));
    }

    #[test]
    fn exact_odd_forms_die() {
        let m = CdgaModel::build(&ModelSpec::heis3()).unwrap();
        let c = GradedElement::parse(&m, "c").unwrap();
        // d(c) = a*b is exact but has even degree; an odd exact form:
        // d(a*c) = -a*a*b = 0, so use nil5 instead for a nonzero one.
        assert!(OddCoset::normalize(&c.differential()).is_err());
        let n = CdgaModel::build(&ModelSpec::nil5()).unwrap();
        let e = GradedElement::parse(&n, "e3*e4").unwrap();
        let de = e.differential();
        assert!(!de.is_zero());
        assert!(OddCoset::normalize(&de).unwrap().is_zero());
        assert!(OddCoset::normalize(&GradedElement::zero(&n))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn normalization_is_idempotent() {
        let n = CdgaModel::build(&ModelSpec::nil5()).unwrap();
        let a = GradedElement::parse(&n, "e1*e2*e5 + 3*e2*e3*e4 - e3*e4*e5").unwrap();
        let c = OddCoset::normalize(&a).unwrap();
        assert_eq!(OddCoset::normalize(c.representative()).unwrap(), c);
    }

    #[test]
    fn exp_of_nilpotent_root() {
        let m = CdgaModel::build(&ModelSpec::cpn(2)).unwrap();
        let x = GradedElement::parse(&m, "x").unwrap();
        let expected = GradedElement::parse(&m, "1 + x + 1/2*x^2").unwrap();
        assert_eq!(x.exp_nilpotent().unwrap(), expected);
    }
}
