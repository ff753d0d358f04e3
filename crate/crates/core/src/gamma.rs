//! The ring `Γ(B) = Z^even(B) ⊕ Ω^odd(B)/Im d` with product
//! `(ω1, φ1) * (ω2, φ2) = (ω1 ω2, ω1 φ2 + φ1 ω2 - dφ1 φ2)`, its Adams
//! operations (scaling the degree-`l` part `(Z^2l, Ω^(2l-1))` by `k^l`) and
//! the λ-operations `λ_t = exp(sum (-1)^(k-1) Ψ^k t^k / k)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cdga::element::normalize_odd_in_place;
use crate::cdga::{CdgaModel, GradedElement, OddCoset};
use crate::error::{Error, Result};
use crate::lambda::{lambda_from_adams, LambdaContext};
use crate::linalg;
use crate::rational::Rational;
use crate::ring::Ring;
use crate::series::TruncSeries;

/// An element of `Γ(B)`, stored as a single form whose even part is closed
/// and whose odd part is the canonical coset representative.
#[derive(Clone, PartialEq, Eq)]
pub struct GammaElement {
    form: GradedElement,
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, [{}])", self.form.even_part(), self.form.odd_part())
    }
}

impl GammaElement {
    pub fn new(even: &GradedElement, odd: &GradedElement) -> Result<Self> {
        if !even.is_even() {
            return Err(Error::WrongParity(format!("even part {even}")));
        }
        if !even.is_closed() {
            return Err(Error::NotClosed(even.to_string()));
        }
        let coset = OddCoset::normalize(odd)?;
        Ok(GammaElement {
            form: even.try_add(coset.representative())?,
        })
    }

    pub fn from_even(even: &GradedElement) -> Result<Self> {
        Self::new(even, &GradedElement::zero(even.model()))
    }

    pub fn from_coset(phi: &OddCoset) -> Self {
        GammaElement {
            form: phi.representative().clone(),
        }
    }

    pub fn zero(model: &Arc<CdgaModel>) -> Self {
        GammaElement {
            form: GradedElement::zero(model),
        }
    }

    pub fn one(model: &Arc<CdgaModel>) -> Self {
        GammaElement {
            form: GradedElement::one(model),
        }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        self.form.model()
    }

    pub fn even(&self) -> GradedElement {
        self.form.even_part()
    }

    pub fn odd(&self) -> OddCoset {
        OddCoset::of_odd_part(&self.form)
    }

    /// The even part, closed by construction.
    pub fn even_restriction_p(&self) -> GradedElement {
        self.even()
    }

    /// Assumes the even part of `form` is closed.
    pub(crate) fn from_form_unchecked(mut form: GradedElement) -> Self {
        normalize_odd_in_place(&mut form);
        GammaElement { form }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(GammaElement {
            form: self.form.try_add(&other.form)?,
        })
    }

    pub fn neg(&self) -> Self {
        GammaElement { form: -&self.form }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GammaElement {
            form: self.form.scale(c),
        }
    }
}

/// The twisted product.
pub fn gamma_mul(x: &GammaElement, y: &GammaElement) -> Result<GammaElement> {
    let (w1, p1) = (x.form.even_part(), x.form.odd_part());
    let (w2, p2) = (y.form.even_part(), y.form.odd_part());
    let even = w1.wedge(&w2)?;
    let odd = &(&(&w1 * &p2) + &(&p1 * &w2)) - &(&p1.differential() * &p2);
    Ok(GammaElement::from_form_unchecked(&even + &odd))
}

pub fn gamma_adams(k: usize, x: &GammaElement) -> GammaElement {
    GammaElement {
        form: x.form.adams_scale(k as i64),
    }
}

/// `λ^0..λ^N` of `x`, from the Adams operations.
pub fn gamma_lambda_series(x: &GammaElement, trunc: usize) -> TruncSeries<GammaElement> {
    let ring = GammaRing::new(x.model());
    let psi: Vec<GammaElement> = (1..=trunc).map(|k| gamma_adams(k, x)).collect();
    lambda_from_adams(&ring, &psi, trunc)
        .expect("Γ is a Q-algebra")
        .series()
        .clone()
}

pub fn gamma_lambda(n: usize, x: &GammaElement) -> GammaElement {
    gamma_lambda_series(x, n).coeff(n).clone()
}

pub(crate) fn sample_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    match rng.gen_range(0..8) {
        0..=3 => Rational::zero(),
        4 => Rational::new(rng.gen_range(-3i64..=3), 2).expect("nonzero"),
        _ => Rational::from(rng.gen_range(-3i64..=3)),
    }
}

/// Basis of the closed forms of degree `k`.
pub fn closed_basis(model: &Arc<CdgaModel>, k: usize) -> Vec<GradedElement> {
    let r = model.degree_range(k);
    let next = model.degree_range(k + 1);
    let images: Vec<linalg::Vector> = r
        .clone()
        .map(|i| {
            let mut v = linalg::zero_vector(next.len());
            for (j, x) in model.d_basis(i) {
                v[j - next.start] = x.clone();
            }
            v
        })
        .collect();
    linalg::kernel(&images, next.len())
        .into_iter()
        .map(|kv| GradedElement::from_degree_coords(model, k, &kv))
        .collect()
}

/// Basis vectors of degree `k` that are canonical modulo `Im d`.
pub fn canonical_basis(model: &Arc<CdgaModel>, k: usize) -> Vec<GradedElement> {
    let pivots = model.image_of_d(k).pivots();
    model
        .degree_range(k)
        .enumerate()
        .filter(|(l, _)| k == 0 || !pivots.contains(l))
        .map(|(_, i)| GradedElement::basis(model, i))
        .collect()
}

/// Bases for sampling: closed even forms and canonical odd representatives.
#[derive(Debug)]
struct Bases {
    closed_even: Vec<GradedElement>,
    odd: Vec<GradedElement>,
}

fn bases(model: &Arc<CdgaModel>) -> Bases {
    let mut closed_even = Vec::new();
    let mut odd = Vec::new();
    for k in 0..=model.top_degree() {
        if k % 2 == 0 {
            closed_even.extend(closed_basis(model, k));
        } else {
            odd.extend(canonical_basis(model, k));
        }
    }
    Bases { closed_even, odd }
}

/// Random closed even form; the degree-0 part is a small integer.
pub fn sample_closed_even(model: &Arc<CdgaModel>, rng: &mut ChaCha8Rng) -> GradedElement {
    let b = bases(model);
    sample_from(&b.closed_even, model, rng)
}

/// Random canonical odd representative.
pub fn sample_odd(model: &Arc<CdgaModel>, rng: &mut ChaCha8Rng) -> OddCoset {
    let b = bases(model);
    OddCoset::normalize(&sample_from(&b.odd, model, rng)).expect("odd by construction")
}

pub(crate) fn sample_from(
    basis: &[GradedElement],
    model: &Arc<CdgaModel>,
    rng: &mut ChaCha8Rng,
) -> GradedElement {
    let mut acc = GradedElement::zero(model);
    for b in basis {
        let c = sample_coefficient(rng);
        if !c.is_zero() {
            acc = &acc + &b.scale(&c);
        }
    }
    acc
}

/// `Γ(B)` as a ring and λ-context.
#[derive(Debug, Clone)]
pub struct GammaRing {
    model: Arc<CdgaModel>,
    bases: Arc<OnceLock<Bases>>,
}

impl GammaRing {
    pub fn new(model: &Arc<CdgaModel>) -> Self {
        GammaRing {
            model: model.clone(),
            bases: Arc::default(),
        }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }

    pub fn sample_element(&self, rng: &mut ChaCha8Rng) -> GammaElement {
        let b = self.bases.get_or_init(|| bases(&self.model));
        let even = sample_from(&b.closed_even, &self.model, rng);
        let odd = sample_from(&b.odd, &self.model, rng);
        GammaElement::from_form_unchecked(&even + &odd)
    }
}

impl Ring for GammaRing {
    type Elem = GammaElement;

    fn zero(&self) -> GammaElement {
        GammaElement::zero(&self.model)
    }
    fn one(&self) -> GammaElement {
        GammaElement::one(&self.model)
    }
    fn add(&self, a: &GammaElement, b: &GammaElement) -> GammaElement {
        a.add(b).expect("same model")
    }
    fn neg(&self, a: &GammaElement) -> GammaElement {
        a.neg()
    }
    fn mul(&self, a: &GammaElement, b: &GammaElement) -> GammaElement {
        gamma_mul(a, b).expect("same model")
    }
    fn scale(&self, q: &Rational, a: &GammaElement) -> Option<GammaElement> {
        Some(a.scale(q))
    }
    fn is_q_linear(&self) -> bool {
        true
    }
    fn from_int(&self, n: &num_bigint::BigInt) -> GammaElement {
        GammaElement::one(&self.model).scale(&Rational::from(n.clone()))
    }
    fn is_zero(&self, a: &GammaElement) -> bool {
        a.form.is_zero()
    }
}

impl LambdaContext for GammaRing {
    fn name(&self) -> String {
        format!("gamma({})", self.model.name())
    }
    fn lambda(&self, n: usize, x: &GammaElement) -> GammaElement {
        gamma_lambda(n, x)
    }
    fn lambda_series(&self, x: &GammaElement, trunc: usize) -> TruncSeries<GammaElement> {
        gamma_lambda_series(x, trunc)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> GammaElement {
        self.sample_element(rng)
    }
    fn adams(&self, k: usize, x: &GammaElement) -> Option<GammaElement> {
        Some(gamma_adams(k, x))
    }
    fn describe(&self, x: &GammaElement) -> String {
        format!("{x:?}")
    }
}

/// The subring `Z^even(B)` of closed even forms with the wedge product and
/// the same Adams scaling.
#[derive(Debug, Clone)]
pub struct ZEvenRing {
    model: Arc<CdgaModel>,
    bases: Arc<OnceLock<Bases>>,
}

impl ZEvenRing {
    pub fn new(model: &Arc<CdgaModel>) -> Self {
        ZEvenRing {
            model: model.clone(),
            bases: Arc::default(),
        }
    }
}

pub fn z_adams(k: usize, x: &GradedElement) -> GradedElement {
    x.adams_scale(k as i64)
}

pub fn z_lambda_series(x: &GradedElement, trunc: usize) -> TruncSeries<GradedElement> {
    let ring = ZEvenRing::new(x.model());
    let psi: Vec<GradedElement> = (1..=trunc).map(|k| z_adams(k, x)).collect();
    lambda_from_adams(&ring, &psi, trunc)
        .expect("Z^even is a Q-algebra")
        .series()
        .clone()
}

impl Ring for ZEvenRing {
    type Elem = GradedElement;

    fn zero(&self) -> GradedElement {
        GradedElement::zero(&self.model)
    }
    fn one(&self) -> GradedElement {
        GradedElement::one(&self.model)
    }
    fn add(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a + b
    }
    fn neg(&self, a: &GradedElement) -> GradedElement {
        -a
    }
    fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a * b
    }
    fn scale(&self, q: &Rational, a: &GradedElement) -> Option<GradedElement> {
        Some(a.scale(q))
    }
    fn is_q_linear(&self) -> bool {
        true
    }
    fn from_int(&self, n: &num_bigint::BigInt) -> GradedElement {
        GradedElement::scalar(&self.model, Rational::from(n.clone()))
    }
    fn is_zero(&self, a: &GradedElement) -> bool {
        a.is_zero()
    }
}

impl LambdaContext for ZEvenRing {
    fn name(&self) -> String {
        format!("zeven({})", self.model.name())
    }
    fn lambda(&self, n: usize, x: &GradedElement) -> GradedElement {
        z_lambda_series(x, n).coeff(n).clone()
    }
    fn lambda_series(&self, x: &GradedElement, trunc: usize) -> TruncSeries<GradedElement> {
        z_lambda_series(x, trunc)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> GradedElement {
        let b = self.bases.get_or_init(|| bases(&self.model));
        sample_from(&b.closed_even, &self.model, rng)
    }
    fn adams(&self, k: usize, x: &GradedElement) -> Option<GradedElement> {
        Some(z_adams(k, x))
    }
    fn describe(&self, x: &GradedElement) -> String {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::verify::sample_rng;
    use crate::lambda::{verify_axioms, Mode, VerifyOptions};

    fn model(name: &str) -> Arc<CdgaModel> {
        CdgaModel::builtin(name).unwrap()
    }

    #[test]
    fn product_of_pure_odd_elements() {
        let m = model("nil5");
        let phi1 = OddCoset::normalize(&GradedElement::parse(&m, "e3").unwrap()).unwrap();
        let phi2 = OddCoset::normalize(&GradedElement::parse(&m, "e5").unwrap()).unwrap();
        let p = gamma_mul(
            &GammaElement::from_coset(&phi1),
            &GammaElement::from_coset(&phi2),
        )
        .unwrap();
        let expected = -&(&phi1.differential() * phi2.representative());
        assert!(p.even().is_zero());
        assert_eq!(p.odd(), OddCoset::normalize(&expected).unwrap());
        assert!(!p.odd().is_zero());
    }

    #[test]
    fn unit_is_neutral() {
        let m = model("s2");
        let ring = GammaRing::new(&m);
        let mut rng = sample_rng(9, 0);
        for _ in 0..5 {
            let x = ring.sample_element(&mut rng);
            assert_eq!(gamma_mul(&x, &GammaElement::one(&m)).unwrap(), x);
        }
    }

    #[test]
    fn adams_composition() {
        let m = model("torus4");
        let ring = GammaRing::new(&m);
        let x = ring.sample_element(&mut sample_rng(1, 2));
        assert_eq!(gamma_adams(1, &x), x);
        assert_eq!(gamma_adams(2, &gamma_adams(3, &x)), gamma_adams(6, &x));
    }

    #[test]
    fn lambda_parity_separation() {
        let m = model("nil5");
        let mut rng = sample_rng(4, 0);
        for _ in 0..3 {
            let w = sample_closed_even(&m, &mut rng);
            let phi = sample_odd(&m, &mut rng);
            for k in 0..=4 {
                assert!(gamma_lambda(k, &GammaElement::from_even(&w).unwrap())
                    .odd()
                    .is_zero());
                if k > 0 {
                    assert!(gamma_lambda(k, &GammaElement::from_coset(&phi))
                        .even()
                        .is_zero());
                }
            }
        }
    }

    #[test]
    fn lambda2_formula() {
        let m = model("cp3");
        let ring = GammaRing::new(&m);
        let x = GammaElement::from_even(&GradedElement::parse(&m, "2 + x - x^3").unwrap()).unwrap();
        let expected = gamma_mul(&x, &x)
            .unwrap()
            .add(&gamma_adams(2, &x).neg())
            .unwrap()
            .scale(&Rational::new(1, 2).unwrap());
        assert_eq!(gamma_lambda(2, &x), expected);
        assert_eq!(ring.lambda(1, &x), x);
    }

    #[test]
    fn gamma_is_a_lambda_ring_on_small_models() {
        for name in ["torus2", "s2", "heis3"] {
            let r = verify_axioms(
                &GammaRing::new(&model(name)),
                &VerifyOptions::new(Mode::Lambda, 8, 11, 4),
            );
            assert!(r.all_pass(), "{}", r.to_text());
        }
        let z = verify_axioms(
            &ZEvenRing::new(&model("cp2")),
            &VerifyOptions::new(Mode::AdamsCriterion, 8, 11, 4),
        );
        assert!(z.all_pass(), "{}", z.to_text());
    }

    #[test]
    fn rejects_open_or_odd_even_part() {
        let m = model("nil5");
        assert!(GammaElement::from_even(&GradedElement::parse(&m, "e1*e2").unwrap()).is_ok());
        let open = GradedElement::parse(&m, "e3*e4").unwrap();
        assert!(matches!(
            GammaElement::from_even(&open),
            Err(Error::NotClosed(_))
        ));
        let odd = GradedElement::parse(&m, "e1").unwrap();
        assert!(matches!(
            GammaElement::from_even(&odd),
            Err(Error::WrongParity(_))
        ));
    }
}
