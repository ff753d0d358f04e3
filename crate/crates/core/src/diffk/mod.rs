//! A finite model of differential K-theory: split geometric triples as lists
//! of closed degree-2 forms (formal Chern roots), cycles `(E, φ)` with `φ` an
//! odd form modulo `Im d`, and virtual classes in normal form.
//!
//! A class is stored as a signed multiset of canonical roots together with a
//! single odd coset: `[P, φ] - [M, 0]`. A root is canonical when its
//! coordinates on the pivot columns of `Im d` vanish; replacing a root `x` by
//! its canonical representative `x + dβ` shifts `φ` by the Chern–Simons form
//! of that change, which is how equivalent cycles reach the same normal form.
//!
//! Perturbations only move roots by `dβ` with `β` in a fixed complement of the
//! closed 1-forms. Flat twists (closed `β`) are not represented.

mod ring;
pub mod splitting;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cdga::{CdgaModel, CdgaMorphism, CoordsJson, GradedElement, OddCoset};
use crate::error::{Error, Result};
use crate::gamma::{gamma_lambda_series, GammaElement};
use crate::lambda::LambdaSeries;
use crate::linalg;
use crate::multiset::{exterior_powers, SignedMultiset};
use crate::rational::Rational;
use crate::series;

pub use ring::{DiffKRing, SampleShape};
pub use splitting::{exp_basis_matrix, SplittingData};

/// Canonical degree-2 coordinates of a root.
pub type RootKey = Vec<Rational>;

pub(crate) fn has_degree_two(model: &CdgaModel) -> bool {
    model.top_degree() >= 2
}

pub(crate) fn zero_key(model: &CdgaModel) -> RootKey {
    linalg::zero_vector(if has_degree_two(model) {
        model.dim_of_degree(2)
    } else {
        0
    })
}

pub(crate) fn key_add(a: &RootKey, b: &RootKey) -> RootKey {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn key_scale(k: i64, a: &RootKey) -> RootKey {
    let k = Rational::from(k);
    a.iter().map(|x| x * &k).collect()
}

pub(crate) fn root_form(model: &Arc<CdgaModel>, key: &RootKey) -> GradedElement {
    if key.is_empty() {
        GradedElement::zero(model)
    } else {
        GradedElement::from_degree_coords(model, 2, key)
    }
}

/// The formal first Chern form of a line: closed, of degree 2 (or zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineRoot {
    x: GradedElement,
}

impl LineRoot {
    pub fn new(x: GradedElement) -> Result<Self> {
        if !x.is_zero() && !x.is_homogeneous_of(2) {
            return Err(Error::InvalidArgument(format!(
                "root {x} is not of degree 2"
            )));
        }
        if !x.is_closed() {
            return Err(Error::NotClosed(x.to_string()));
        }
        Ok(LineRoot { x })
    }

    pub fn trivial(model: &Arc<CdgaModel>) -> Self {
        LineRoot {
            x: GradedElement::zero(model),
        }
    }

    pub fn form(&self) -> &GradedElement {
        &self.x
    }

    /// `(canonical key, β)` with `canonical = x + dβ`.
    pub(crate) fn canonicalize(&self) -> (RootKey, GradedElement) {
        let model = self.x.model();
        if !has_degree_two(model) {
            return (Vec::new(), GradedElement::zero(model));
        }
        let mut v = self.x.degree_coords(2).to_vec();
        let ech = model.image_of_d(2);
        let coeffs = ech.reduce(&mut v);
        let mut beta = linalg::zero_vector(model.dim_of_degree(1));
        for (c, r) in coeffs.iter().zip(ech.rows()) {
            if !c.is_zero() {
                linalg::axpy(&mut beta, &-c, &r.tag);
            }
        }
        (v, GradedElement::from_degree_coords(model, 1, &beta))
    }
}

/// A split geometric triple: a list of line roots.
#[derive(Clone, Debug)]
pub struct SplitTriple {
    model: Arc<CdgaModel>,
    roots: Vec<LineRoot>,
}

impl PartialEq for SplitTriple {
    fn eq(&self, other: &Self) -> bool {
        crate::cdga::element::same_model(&self.model, &other.model) && self.roots == other.roots
    }
}

impl Eq for SplitTriple {}

impl SplitTriple {
    pub fn new(model: &Arc<CdgaModel>, roots: Vec<LineRoot>) -> Result<Self> {
        for r in &roots {
            if !crate::cdga::element::same_model(r.x.model(), model) {
                return Err(Error::ModelMismatch(
                    model.name().into(),
                    r.x.model().name().into(),
                ));
            }
        }
        Ok(SplitTriple {
            model: model.clone(),
            roots,
        })
    }

    pub fn from_forms(model: &Arc<CdgaModel>, roots: &[GradedElement]) -> Result<Self> {
        Self::new(
            model,
            roots
                .iter()
                .cloned()
                .map(LineRoot::new)
                .collect::<Result<_>>()?,
        )
    }

    pub fn empty(model: &Arc<CdgaModel>) -> Self {
        SplitTriple {
            model: model.clone(),
            roots: Vec::new(),
        }
    }

    pub fn trivial(model: &Arc<CdgaModel>, rank: usize) -> Self {
        SplitTriple {
            model: model.clone(),
            roots: vec![LineRoot::trivial(model); rank],
        }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[LineRoot] {
        &self.roots
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        SplitTriple {
            model: self.model.clone(),
            roots,
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut roots = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.roots {
            for b in &other.roots {
                roots.push(LineRoot { x: &a.x + &b.x });
            }
        }
        SplitTriple {
            model: self.model.clone(),
            roots,
        }
    }

    /// `Λ^k E`: roots are the sums over `k`-subsets.
    pub fn exterior_power(&self, k: usize) -> Self {
        let mut roots = Vec::new();
        let n = self.rank();
        if k <= n {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let mut x = GradedElement::zero(&self.model);
                for &i in &idx {
                    x = &x + &self.roots[i].x;
                }
                roots.push(LineRoot { x });
                // next combination
                let mut i = k;
                while i > 0 && idx[i - 1] == n - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        SplitTriple {
            model: self.model.clone(),
            roots,
        }
    }

    /// `Ψ^k E = ⊕ L_j^k`: every root is multiplied by `k`.
    pub fn adams(&self, k: usize) -> Self {
        let c = Rational::from(k as i64);
        SplitTriple {
            model: self.model.clone(),
            roots: self
                .roots
                .iter()
                .map(|r| LineRoot { x: r.x.scale(&c) })
                .collect(),
        }
    }

    pub fn pullback(&self, f: &CdgaMorphism) -> Result<Self> {
        let roots = self
            .roots
            .iter()
            .map(|r| LineRoot::new(f.pullback(&r.x)?))
            .collect::<Result<_>>()?;
        Ok(SplitTriple {
            model: f.target().clone(),
            roots,
        })
    }
}

/// `ch(E) = sum_i exp(x_i)`.
pub fn chern_character(e: &SplitTriple) -> GradedElement {
    let mut acc = GradedElement::zero(&e.model);
    for r in &e.roots {
        acc = &acc + &r.x.exp_nilpotent().expect("roots have no constant term");
    }
    acc
}

/// A change of connection: one degree-1 form per root, moving `x` to
/// `x + dβ`. Each `β` is replaced by the canonical preimage of `dβ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    betas: Vec<GradedElement>,
}

impl Perturbation {
    pub fn new(betas: Vec<GradedElement>) -> Result<Self> {
        let mut out = Vec::with_capacity(betas.len());
        for b in betas {
            if !b.is_zero() && !b.is_homogeneous_of(1) {
                return Err(Error::InvalidArgument(format!(
                    "perturbation {b} is not of degree 1"
                )));
            }
            out.push(project_beta(&b));
        }
        Ok(Perturbation { betas: out })
    }

    pub fn zero(model: &Arc<CdgaModel>, rank: usize) -> Self {
        Perturbation {
            betas: vec![GradedElement::zero(model); rank],
        }
    }

    pub fn betas(&self) -> &[GradedElement] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }
}

fn project_beta(b: &GradedElement) -> GradedElement {
    let model = b.model();
    if !has_degree_two(model) {
        return GradedElement::zero(model);
    }
    let db = b.differential();
    let pre = model
        .image_of_d(2)
        .preimage(db.degree_coords(2))
        .expect("dβ lies in Im d");
    GradedElement::from_degree_coords(model, 1, &pre)
}

/// `β ∧ sum_{n>=1} (1/n!) sum_{j<n} x^j x'^(n-1-j)`, whose differential is
/// `exp(x') - exp(x)` when `x' = x + dβ`.
pub(crate) fn cs_line(
    x: &GradedElement,
    x1: &GradedElement,
    beta: &GradedElement,
) -> GradedElement {
    let model = x.model();
    if beta.is_zero() {
        return GradedElement::zero(model);
    }
    let n_max = model.top_degree() / 2 + 1;
    let mut px = vec![GradedElement::one(model)];
    let mut py = vec![GradedElement::one(model)];
    for i in 1..n_max {
        px.push(&px[i - 1] * x);
        py.push(&py[i - 1] * x1);
    }
    let mut s = GradedElement::zero(model);
    for n in 1..=n_max {
        let mut inner = GradedElement::zero(model);
        for j in 0..n {
            inner = &inner + &(&px[j] * &py[n - 1 - j]);
        }
        let c = Rational::factorial(n as u32).recip().expect("nonzero");
        s = &s + &inner.scale(&c);
    }
    beta * &s
}

/// Chern–Simons form of the change `E -> E'` given by `pert`, as a coset.
pub fn chern_simons(e: &SplitTriple, pert: &Perturbation) -> Result<OddCoset> {
    if pert.len() != e.rank() {
        return Err(Error::ArityMismatch {
            rank: e.rank(),
            given: pert.len(),
        });
    }
    let mut acc = GradedElement::zero(&e.model);
    for (r, b) in e.roots.iter().zip(&pert.betas) {
        let x1 = &r.x + &b.differential();
        acc = &acc + &cs_line(&r.x, &x1, b);
    }
    OddCoset::normalize(&acc)
}

/// The perturbed triple `E'` with roots `x_i + dβ_i`.
pub fn perturb_triple(e: &SplitTriple, pert: &Perturbation) -> Result<SplitTriple> {
    if pert.len() != e.rank() {
        return Err(Error::ArityMismatch {
            rank: e.rank(),
            given: pert.len(),
        });
    }
    let roots = e
        .roots
        .iter()
        .zip(&pert.betas)
        .map(|(r, b)| LineRoot {
            x: &r.x + &b.differential(),
        })
        .collect();
    Ok(SplitTriple {
        model: e.model.clone(),
        roots,
    })
}

/// A cycle `(E, φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffKCycle {
    pub triple: SplitTriple,
    pub phi: OddCoset,
}

impl DiffKCycle {
    pub fn new(triple: SplitTriple, phi: OddCoset) -> Result<Self> {
        if !crate::cdga::element::same_model(triple.model(), phi.model()) {
            return Err(Error::ModelMismatch(
                triple.model().name().into(),
                phi.model().name().into(),
            ));
        }
        Ok(DiffKCycle { triple, phi })
    }

    pub fn of_triple(triple: SplitTriple) -> Self {
        let phi = OddCoset::zero(triple.model());
        DiffKCycle { triple, phi }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        self.triple.model()
    }

    /// `(E', φ + CS(E, E'))`: an equivalent cycle.
    pub fn perturb(&self, pert: &Perturbation) -> Result<Self> {
        let cs = chern_simons(&self.triple, pert)?;
        Ok(DiffKCycle {
            triple: perturb_triple(&self.triple, pert)?,
            phi: self.phi.add(&cs)?,
        })
    }

    /// `λ^k(E, φ) = (Λ^k E, [λ^k_Γ(ch E, φ)]_odd)` on the representative.
    pub fn lambda(&self, k: usize) -> Self {
        let phi = if self.phi.is_zero() {
            OddCoset::zero(self.model())
        } else {
            let g = GammaElement::from_form_unchecked(
                &chern_character(&self.triple) + self.phi.representative(),
            );
            gamma_lambda_series(&g, k).coeff(k).odd()
        };
        DiffKCycle {
            triple: self.triple.exterior_power(k),
            phi,
        }
    }

    /// `(E ⊗ F, ch(E) ψ + φ ch(F) - dφ ψ)`.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        let phi = twisted_odd(
            &chern_character(&self.triple),
            &self.phi,
            &chern_character(&other.triple),
            &other.phi,
        );
        DiffKCycle::new(self.triple.tensor(&other.triple), phi)
    }

    pub fn pullback(&self, f: &CdgaMorphism) -> Result<Self> {
        let phi = OddCoset::normalize(&f.pullback(self.phi.representative())?)?;
        Ok(DiffKCycle {
            triple: self.triple.pullback(f)?,
            phi,
        })
    }
}

/// Odd part of `(w1, p1) * (w2, p2)` in `Γ`.
pub(crate) fn twisted_odd(
    w1: &GradedElement,
    p1: &OddCoset,
    w2: &GradedElement,
    p2: &OddCoset,
) -> OddCoset {
    let model = w1.model();
    let mut acc = GradedElement::zero(model);
    if !p2.is_zero() {
        acc = &acc + &(w1 * p2.representative());
    }
    if !p1.is_zero() {
        acc = &acc + &(p1.representative() * w2);
        if !p2.is_zero() {
            acc = &acc - &(&p1.differential() * p2.representative());
        }
    }
    OddCoset::of_odd_part(&acc)
}

/// A virtual class `[P, φ] - [M, 0]` in normal form.
#[derive(Clone)]
pub struct DiffKClass {
    model: Arc<CdgaModel>,
    roots: SignedMultiset<RootKey>,
    phi: OddCoset,
}

impl PartialEq for DiffKClass {
    fn eq(&self, other: &Self) -> bool {
        crate::cdga::element::same_model(&self.model, &other.model)
            && self.roots == other.roots
            && self.phi == other.phi
    }
}

impl Eq for DiffKClass {}

impl fmt::Debug for DiffKClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DiffKClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, m) in self.roots.iter() {
            let sign = if m < 0 { "-" } else { "+" };
            if first {
                if m < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if m.abs() != 1 {
                write!(f, "{}*", m.abs())?;
            }
            write!(f, "L({})", root_form(&self.model, k))?;
        }
        if !self.phi.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "a({})", self.phi.representative())?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Normal form of `[plus] - [minus]`.
pub fn normal_form(plus: &DiffKCycle, minus: &DiffKCycle) -> Result<DiffKClass> {
    if !crate::cdga::element::same_model(plus.model(), minus.model()) {
        return Err(Error::ModelMismatch(
            plus.model().name().into(),
            minus.model().name().into(),
        ));
    }
    let model = plus.model().clone();
    let mut roots = SignedMultiset::new();
    let mut phi = plus
        .phi
        .representative()
        .try_sub(minus.phi.representative())?;
    for (cycle, sign) in [(plus, 1i64), (minus, -1i64)] {
        for r in &cycle.triple.roots {
            let (key, beta) = r.canonicalize();
            if !beta.is_zero() {
                let x1 = &r.x + &beta.differential();
                let cs = cs_line(&r.x, &x1, &beta);
                phi = if sign > 0 { &phi + &cs } else { &phi - &cs };
            }
            roots.insert(key, sign);
        }
    }
    Ok(DiffKClass {
        model,
        roots,
        phi: OddCoset::normalize(&phi)?,
    })
}

impl DiffKClass {
    pub fn from_cycle(c: &DiffKCycle) -> Result<Self> {
        normal_form(c, &DiffKCycle::of_triple(SplitTriple::empty(c.model())))
    }

    pub fn zero(model: &Arc<CdgaModel>) -> Self {
        DiffKClass {
            model: model.clone(),
            roots: SignedMultiset::new(),
            phi: OddCoset::zero(model),
        }
    }

    /// `1 = [C, 0]`.
    pub fn one(model: &Arc<CdgaModel>) -> Self {
        Self::from_int(model, 1)
    }

    pub fn from_int(model: &Arc<CdgaModel>, n: i64) -> Self {
        DiffKClass {
            model: model.clone(),
            roots: SignedMultiset::with_multiplicity(zero_key(model), n),
            phi: OddCoset::zero(model),
        }
    }

    /// `[L, 0]` for a line with root `x`.
    pub fn line(root: &LineRoot) -> Self {
        let model = root.x.model();
        let cycle = DiffKCycle::of_triple(SplitTriple {
            model: model.clone(),
            roots: vec![root.clone()],
        });
        Self::from_cycle(&cycle).expect("same model")
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }

    pub fn roots(&self) -> &SignedMultiset<RootKey> {
        &self.roots
    }

    pub fn phi(&self) -> &OddCoset {
        &self.phi
    }

    pub fn rank(&self) -> i64 {
        self.roots.rank()
    }

    fn triple_of(&self, ms: &SignedMultiset<RootKey>) -> SplitTriple {
        let roots = ms
            .to_vec()
            .into_iter()
            .map(|k| LineRoot {
                x: root_form(&self.model, &k),
            })
            .collect();
        SplitTriple {
            model: self.model.clone(),
            roots,
        }
    }

    /// The cycle `(P, φ)`.
    pub fn plus(&self) -> DiffKCycle {
        DiffKCycle {
            triple: self.triple_of(&self.roots.positive_part()),
            phi: self.phi.clone(),
        }
    }

    /// The cycle `(M, 0)`.
    pub fn minus(&self) -> DiffKCycle {
        DiffKCycle::of_triple(self.triple_of(&self.roots.negative_part()))
    }

    /// Recomputes the normal form from `plus` and `minus`.
    pub fn normal_form(&self) -> Self {
        normal_form(&self.plus(), &self.minus()).expect("same model")
    }

    fn check_model(&self, other: &Self) -> Result<()> {
        if crate::cdga::element::same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch(
                self.model.name().into(),
                other.model.name().into(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_model(other)?;
        Ok(DiffKClass {
            model: self.model.clone(),
            roots: self.roots.add(&other.roots),
            phi: self.phi.add(&other.phi)?,
        })
    }

    pub fn neg(&self) -> Self {
        DiffKClass {
            model: self.model.clone(),
            roots: self.roots.neg(),
            phi: self.phi.neg(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Virtual Chern character `ch(P) - ch(M)`.
    pub fn chern_character(&self) -> GradedElement {
        virtual_ch(&self.model, &self.roots)
    }

    pub fn pullback(&self, f: &CdgaMorphism) -> Result<Self> {
        normal_form(&self.plus().pullback(f)?, &self.minus().pullback(f)?)
    }

    pub fn to_json(&self) -> String {
        let cycle = |c: &DiffKCycle| CycleJson {
            roots: c
                .triple
                .roots
                .iter()
                .map(|r| r.x.to_coords_json())
                .collect(),
            phi: c.phi.representative().to_coords_json(),
        };
        let j = ClassJson {
            model: self.model.name().to_string(),
            plus: cycle(&self.plus()),
            minus: cycle(&self.minus()),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    /// Reads a fixture and normalizes it; the model name must match.
    pub fn from_json(model: &Arc<CdgaModel>, s: &str) -> Result<Self> {
        let j: ClassJson = serde_json::from_str(s)?;
        if j.model != model.name() {
            return Err(Error::ModelMismatch(model.name().into(), j.model));
        }
        let cycle = |c: &CycleJson| -> Result<DiffKCycle> {
            let roots = c
                .roots
                .iter()
                .map(|r| LineRoot::new(GradedElement::from_coords_json(model, r)?))
                .collect::<Result<_>>()?;
            let phi = OddCoset::normalize(&GradedElement::from_coords_json(model, &c.phi)?)?;
            DiffKCycle::new(SplitTriple::new(model, roots)?, phi)
        };
        normal_form(&cycle(&j.plus)?, &cycle(&j.minus)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CycleJson {
    roots: Vec<CoordsJson>,
    phi: CoordsJson,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    model: String,
    plus: CycleJson,
    minus: CycleJson,
}

fn virtual_ch(model: &Arc<CdgaModel>, roots: &SignedMultiset<RootKey>) -> GradedElement {
    let mut acc = GradedElement::zero(model);
    for (k, m) in roots.iter() {
        let e = root_form(model, k)
            .exp_nilpotent()
            .expect("roots have no constant term");
        acc = &acc + &e.scale(&Rational::from(m));
    }
    acc
}

/// The cup product.
pub fn cycle_mul(a: &DiffKClass, b: &DiffKClass) -> Result<DiffKClass> {
    a.check_model(b)?;
    let roots = a.roots.mul(&b.roots, key_add);
    let phi = if a.phi.is_zero() && b.phi.is_zero() {
        OddCoset::zero(&a.model)
    } else {
        twisted_odd(&a.chern_character(), &a.phi, &b.chern_character(), &b.phi)
    };
    Ok(DiffKClass {
        model: a.model.clone(),
        roots,
        phi,
    })
}

/// `λ^0(a), ..., λ^N(a)`: `λ_t(P, φ) · λ_t(-[M, 0])`.
pub fn lambda_t_cycle(a: &DiffKClass, trunc: usize) -> LambdaSeries<DiffKClass> {
    let model = &a.model;
    let unit = zero_key(model);
    let p = a.roots.positive_part();
    let plus_roots = exterior_powers(&p, trunc, &unit, key_add);
    let plus_phi: Vec<OddCoset> = if a.phi.is_zero() {
        vec![OddCoset::zero(model); trunc + 1]
    } else {
        let g = GammaElement::from_form_unchecked(&virtual_ch(model, &p) + a.phi.representative());
        gamma_lambda_series(&g, trunc)
            .coeffs()
            .iter()
            .map(GammaElement::odd)
            .collect()
    };
    let plus: Vec<DiffKClass> = plus_roots
        .into_iter()
        .zip(plus_phi)
        .map(|(roots, phi)| DiffKClass {
            model: model.clone(),
            roots,
            phi,
        })
        .collect();
    let m = a.roots.negative_part();
    if m.is_empty() {
        return LambdaSeries::from_tail(&DiffKRing::new(model), plus[1..].to_vec());
    }
    let minus: Vec<DiffKClass> = exterior_powers(&m.neg(), trunc, &unit, key_add)
        .into_iter()
        .map(|roots| DiffKClass {
            model: model.clone(),
            roots,
            phi: OddCoset::zero(model),
        })
        .collect();
    let ring = DiffKRing::new(model);
    let s = series::series_mul(
        &ring,
        &series::TruncSeries::from_coeffs(plus),
        &series::TruncSeries::from_coeffs(minus),
    )
    .expect("equal truncation");
    LambdaSeries::new(&ring, s).expect("constant term one")
}

pub fn cycle_lambda(k: usize, a: &DiffKClass) -> DiffKClass {
    lambda_t_cycle(a, k).coeff(k).clone()
}

/// `Ψ^k`: roots scaled by `k`, `φ_l` by `k^l`.
pub fn cycle_adams(k: usize, a: &DiffKClass) -> DiffKClass {
    DiffKClass {
        model: a.model.clone(),
        roots: a.roots.map_keys(|x| key_scale(k as i64, x)),
        phi: a.phi.adams_scale(k as i64),
    }
}

/// `R(a) = ch(a) - dφ`.
pub fn curvature_map(a: &DiffKClass) -> GradedElement {
    &a.chern_character() - &a.phi.differential()
}

/// `a(φ) = [0, φ]`.
pub fn map_a(phi: &OddCoset) -> DiffKClass {
    DiffKClass {
        model: phi.model().clone(),
        roots: SignedMultiset::new(),
        phi: phi.clone(),
    }
}

/// The underlying class with forms dropped: canonical roots are the
/// cohomology classes of the Chern roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgetfulClass {
    pub roots: SignedMultiset<RootKey>,
}

impl ForgetfulClass {
    pub fn mul(&self, other: &Self) -> Self {
        ForgetfulClass {
            roots: self.roots.mul(&other.roots, key_add),
        }
    }

    pub fn adams(&self, k: usize) -> Self {
        ForgetfulClass {
            roots: self.roots.map_keys(|x| key_scale(k as i64, x)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.roots.is_empty()
    }
}

#[allow(non_snake_case)]
pub fn map_I(a: &DiffKClass) -> ForgetfulClass {
    ForgetfulClass {
        roots: a.roots.clone(),
    }
}

#[cfg(test)]
mod tests;
