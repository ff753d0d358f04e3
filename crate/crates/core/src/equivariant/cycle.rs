use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{AbelianGroup, Character, GammaGElement, GammaGRing, RepRingElement};
use crate::cdga::element::same_model;
use crate::cdga::{CdgaModel, GradedElement, OddCoset};
use crate::diffk::{
    cs_line, key_add, key_scale, perturb_triple, root_form, twisted_odd, zero_key, DiffKRing,
    LineRoot, Perturbation, RootKey, SplitTriple,
};
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::lambda::{LambdaContext, LambdaSeries};
use crate::multiset::{exterior_powers, SignedMultiset};
use crate::rational::Rational;
use crate::ring::Ring;
use crate::series::{self, TruncSeries};

type PhiMap = BTreeMap<Character, OddCoset>;
type FormMap = BTreeMap<Character, GradedElement>;
type EquivKey = (RootKey, Character);

fn phi_insert(m: &mut PhiMap, c: Character, v: OddCoset) {
    let entry = match m.remove(&c) {
        Some(old) => old.add(&v).expect("same model"),
        None => v,
    };
    if !entry.is_zero() {
        m.insert(c, entry);
    }
}

fn phi_add(a: &PhiMap, b: &PhiMap) -> PhiMap {
    let mut out = a.clone();
    for (c, v) in b {
        phi_insert(&mut out, c.clone(), v.clone());
    }
    out
}

fn phi_neg(a: &PhiMap) -> PhiMap {
    a.iter().map(|(c, v)| (c.clone(), v.neg())).collect()
}

fn form_insert(m: &mut FormMap, c: Character, v: GradedElement) {
    let entry = match m.remove(&c) {
        Some(old) => &old + &v,
        None => v,
    };
    if !entry.is_zero() {
        m.insert(c, entry);
    }
}

/// Lines `(x, γ)`: the summand `L_x ⊗ V_γ`.
#[derive(Clone, Debug)]
pub struct EquivTriple {
    model: Arc<CdgaModel>,
    group: AbelianGroup,
    lines: Vec<(LineRoot, Character)>,
}

impl PartialEq for EquivTriple {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model)
            && self.group == other.group
            && self.lines == other.lines
    }
}

impl Eq for EquivTriple {}

impl EquivTriple {
    pub fn new(
        model: &Arc<CdgaModel>,
        group: &AbelianGroup,
        lines: Vec<(LineRoot, Character)>,
    ) -> Result<Self> {
        for (r, c) in &lines {
            if !same_model(r.form().model(), model) {
                return Err(Error::ModelMismatch(
                    model.name().into(),
                    r.form().model().name().into(),
                ));
            }
            if !group.contains(c) {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(EquivTriple {
            model: model.clone(),
            group: group.clone(),
            lines,
        })
    }

    pub fn empty(model: &Arc<CdgaModel>, group: &AbelianGroup) -> Self {
        EquivTriple {
            model: model.clone(),
            group: group.clone(),
            lines: Vec::new(),
        }
    }

    pub fn lines(&self) -> &[(LineRoot, Character)] {
        &self.lines
    }

    pub fn rank(&self) -> usize {
        self.lines.len()
    }

    fn roots(&self) -> SplitTriple {
        SplitTriple::new(
            &self.model,
            self.lines.iter().map(|(r, _)| r.clone()).collect(),
        )
        .expect("same model")
    }

    /// `Λ^k`: `k`-subsets contribute (sum of roots, sum of characters).
    pub fn exterior_power(&self, k: usize) -> Self {
        let n = self.rank();
        let mut lines = Vec::new();
        if k <= n {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let mut x = GradedElement::zero(&self.model);
                let mut c = self.group.zero();
                for &i in &idx {
                    x = &x + self.lines[i].0.form();
                    c = self.group.add(&c, &self.lines[i].1);
                }
                lines.push((LineRoot::new(x).expect("sum of roots"), c));
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
        EquivTriple {
            model: self.model.clone(),
            group: self.group.clone(),
            lines,
        }
    }
}

/// `ch_{T_g}(E) = sum_γ ch(E_γ) ⊗ χ_γ`.
pub fn ch_tg(e: &EquivTriple) -> BTreeMap<Character, GradedElement> {
    let mut out = FormMap::new();
    for (r, c) in &e.lines {
        form_insert(
            &mut out,
            c.clone(),
            r.form().exp_nilpotent().expect("no constant term"),
        );
    }
    out
}

/// Equivariant Chern–Simons form: the per-line transgression attached to
/// each line's character.
pub fn equiv_chern_simons(
    e: &EquivTriple,
    pert: &Perturbation,
) -> Result<BTreeMap<Character, OddCoset>> {
    if pert.len() != e.rank() {
        return Err(Error::ArityMismatch {
            rank: e.rank(),
            given: pert.len(),
        });
    }
    let mut out = PhiMap::new();
    for ((r, c), b) in e.lines.iter().zip(pert.betas()) {
        let x1 = r.form() + &b.differential();
        phi_insert(
            &mut out,
            c.clone(),
            OddCoset::normalize(&cs_line(r.form(), &x1, b))?,
        );
    }
    Ok(out)
}

/// Odd part of the `Γ_g` product of `(w1, p1)` and `(w2, p2)`.
fn twisted_odd_g(
    model: &Arc<CdgaModel>,
    group: &AbelianGroup,
    w1: &FormMap,
    p1: &PhiMap,
    w2: &FormMap,
    p2: &PhiMap,
) -> PhiMap {
    let mut out = PhiMap::new();
    if p1.is_empty() && p2.is_empty() {
        return out;
    }
    let keys = |w: &FormMap, p: &PhiMap| -> Vec<Character> {
        let mut k: Vec<Character> = w.keys().chain(p.keys()).cloned().collect();
        k.sort();
        k.dedup();
        k
    };
    let zero_w = GradedElement::zero(model);
    let zero_p = OddCoset::zero(model);
    for c in keys(w1, p1) {
        for d in keys(w2, p2) {
            let (a, x) = (w1.get(&c).unwrap_or(&zero_w), p1.get(&c).unwrap_or(&zero_p));
            let (b, y) = (w2.get(&d).unwrap_or(&zero_w), p2.get(&d).unwrap_or(&zero_p));
            if x.is_zero() && y.is_zero() {
                continue;
            }
            phi_insert(&mut out, group.add(&c, &d), twisted_odd(a, x, b, y));
        }
    }
    out
}

fn gamma_g_of(model: &Arc<CdgaModel>, w: &FormMap, p: &PhiMap) -> GammaGElement {
    let mut keys: Vec<&Character> = w.keys().chain(p.keys()).collect();
    keys.sort();
    keys.dedup();
    GammaGElement::from_parts(
        model,
        keys.into_iter()
            .map(|c| {
                let mut f = w
                    .get(c)
                    .cloned()
                    .unwrap_or_else(|| GradedElement::zero(model));
                if let Some(v) = p.get(c) {
                    f = &f + v.representative();
                }
                (c.clone(), GammaElement::from_form_unchecked(f))
            })
            .collect::<Vec<_>>(),
    )
}

fn odd_parts(x: &GammaGElement) -> PhiMap {
    let mut out = PhiMap::new();
    for (c, g) in x.parts() {
        phi_insert(&mut out, c.clone(), g.odd());
    }
    out
}

/// An equivariant cycle `(E, φ)`, `φ ∈ (Ω^odd/Im d) ⊗ R(T_g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivCycle {
    pub triple: EquivTriple,
    pub phi: BTreeMap<Character, OddCoset>,
}

impl EquivCycle {
    pub fn new(triple: EquivTriple, phi: BTreeMap<Character, OddCoset>) -> Result<Self> {
        let mut clean = PhiMap::new();
        for (c, v) in phi {
            if !triple.group.contains(&c) {
                return Err(Error::GroupMismatch);
            }
            phi_insert(&mut clean, c, v);
        }
        Ok(EquivCycle { triple, phi: clean })
    }

    pub fn of_triple(triple: EquivTriple) -> Self {
        EquivCycle {
            triple,
            phi: PhiMap::new(),
        }
    }

    pub fn perturb(&self, pert: &Perturbation) -> Result<Self> {
        let cs = equiv_chern_simons(&self.triple, pert)?;
        let roots = perturb_triple(&self.triple.roots(), pert)?;
        let lines = roots
            .roots()
            .iter()
            .cloned()
            .zip(self.triple.lines.iter().map(|(_, c)| c.clone()))
            .collect();
        let triple = EquivTriple {
            model: self.triple.model.clone(),
            group: self.triple.group.clone(),
            lines,
        };
        Ok(EquivCycle {
            triple,
            phi: phi_add(&self.phi, &cs),
        })
    }

    /// `(Λ^k E, [λ^k_{Γ_g}(ch_{T_g} E, φ)]_odd)` on the representative.
    pub fn lambda(&self, k: usize) -> Self {
        let t = &self.triple;
        let phi = if self.phi.is_empty() {
            PhiMap::new()
        } else {
            let ring = GammaGRing::new(&t.model, &t.group);
            let g = gamma_g_of(&t.model, &ch_tg(t), &self.phi);
            odd_parts(ring.gamma_g_lambda_series(&g, k).coeff(k))
        };
        EquivCycle {
            triple: t.exterior_power(k),
            phi,
        }
    }
}

/// A virtual equivariant class in normal form.
#[derive(Clone)]
pub struct EquivClass {
    model: Arc<CdgaModel>,
    group: AbelianGroup,
    roots: SignedMultiset<EquivKey>,
    phi: PhiMap,
}

impl PartialEq for EquivClass {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model)
            && self.group == other.group
            && self.roots == other.roots
            && self.phi == other.phi
    }
}

impl Eq for EquivClass {}

impl fmt::Debug for EquivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EquivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for ((k, c), m) in self.roots.iter() {
            let mult = if m == 1 {
                String::new()
            } else {
                format!("{m}*")
            };
            terms.push(format!("{mult}L({})*{c}", root_form(&self.model, k)));
        }
        for (c, v) in &self.phi {
            terms.push(format!("a({})*{c}", v.representative()));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl EquivClass {
    pub fn zero(model: &Arc<CdgaModel>, group: &AbelianGroup) -> Self {
        EquivClass {
            model: model.clone(),
            group: group.clone(),
            roots: SignedMultiset::new(),
            phi: PhiMap::new(),
        }
    }

    pub fn one(model: &Arc<CdgaModel>, group: &AbelianGroup) -> Self {
        Self::from_int(model, group, 1)
    }

    pub fn from_int(model: &Arc<CdgaModel>, group: &AbelianGroup, n: i64) -> Self {
        EquivClass {
            model: model.clone(),
            group: group.clone(),
            roots: SignedMultiset::with_multiplicity((zero_key(model), group.zero()), n),
            phi: PhiMap::new(),
        }
    }

    /// `[0, φ ⊗ χ_γ]`.
    pub fn map_a(group: &AbelianGroup, c: Character, phi: &OddCoset) -> Self {
        let mut m = PhiMap::new();
        phi_insert(&mut m, c, phi.clone());
        EquivClass {
            model: phi.model().clone(),
            group: group.clone(),
            roots: SignedMultiset::new(),
            phi: m,
        }
    }

    pub fn line(group: &AbelianGroup, root: &LineRoot, c: Character) -> Result<Self> {
        let model = root.form().model();
        let t = EquivTriple::new(model, group, vec![(root.clone(), c)])?;
        Self::from_cycle(&EquivCycle::of_triple(t))
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn roots(&self) -> &SignedMultiset<(RootKey, Character)> {
        &self.roots
    }

    pub fn phi(&self) -> &BTreeMap<Character, OddCoset> {
        &self.phi
    }

    /// Normal form of `[plus] - [minus]`.
    pub fn normal_form(plus: &EquivCycle, minus: &EquivCycle) -> Result<Self> {
        let (p, m) = (&plus.triple, &minus.triple);
        if !same_model(&p.model, &m.model) {
            return Err(Error::ModelMismatch(
                p.model.name().into(),
                m.model.name().into(),
            ));
        }
        if p.group != m.group {
            return Err(Error::GroupMismatch);
        }
        let mut roots = SignedMultiset::new();
        let mut phi = phi_add(&plus.phi, &phi_neg(&minus.phi));
        for (cycle, sign) in [(plus, 1i64), (minus, -1i64)] {
            for (r, c) in &cycle.triple.lines {
                let (key, beta) = r.canonicalize();
                if !beta.is_zero() {
                    let x1 = r.form() + &beta.differential();
                    let cs = OddCoset::normalize(&cs_line(r.form(), &x1, &beta))?;
                    phi_insert(&mut phi, c.clone(), if sign > 0 { cs } else { cs.neg() });
                }
                roots.insert((key, c.clone()), sign);
            }
        }
        Ok(EquivClass {
            model: p.model.clone(),
            group: p.group.clone(),
            roots,
            phi,
        })
    }

    pub fn from_cycle(c: &EquivCycle) -> Result<Self> {
        Self::normal_form(
            c,
            &EquivCycle::of_triple(EquivTriple::empty(&c.triple.model, &c.triple.group)),
        )
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_model(&self.model, &other.model) {
            return Err(Error::ModelMismatch(
                self.model.name().into(),
                other.model.name().into(),
            ));
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(EquivClass {
            model: self.model.clone(),
            group: self.group.clone(),
            roots: self.roots.add(&other.roots),
            phi: phi_add(&self.phi, &other.phi),
        })
    }

    pub fn neg(&self) -> Self {
        EquivClass {
            model: self.model.clone(),
            group: self.group.clone(),
            roots: self.roots.neg(),
            phi: phi_neg(&self.phi),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Virtual `ch_{T_g}`.
    pub fn ch_tg(&self) -> BTreeMap<Character, GradedElement> {
        virtual_ch_tg(&self.model, &self.roots)
    }

    /// `R(a) = ch_{T_g}(a) - dφ`, characterwise.
    pub fn curvature(&self) -> BTreeMap<Character, GradedElement> {
        let mut out = self.ch_tg();
        for (c, v) in &self.phi {
            form_insert(&mut out, c.clone(), -&v.differential());
        }
        out
    }

    /// The underlying class with forms dropped.
    pub fn forgetful(&self) -> SignedMultiset<(RootKey, Character)> {
        self.roots.clone()
    }

    /// The image in `R(T_g)` of the rank: forget roots, keep characters.
    pub fn rep_rank(&self) -> RepRingElement {
        let mut r = RepRingElement::zero(&self.group);
        for ((_, c), m) in self.roots.iter() {
            let t = RepRingElement {
                group: self.group.clone(),
                terms: SignedMultiset::with_multiplicity(c.clone(), m),
            };
            r = r.add(&t).expect("same group");
        }
        r
    }
}

fn virtual_ch_tg(model: &Arc<CdgaModel>, roots: &SignedMultiset<EquivKey>) -> FormMap {
    let mut out = FormMap::new();
    for ((k, c), m) in roots.iter() {
        let e = root_form(model, k)
            .exp_nilpotent()
            .expect("no constant term");
        form_insert(&mut out, c.clone(), e.scale(&Rational::from(m)));
    }
    out
}

fn key_combine(group: &AbelianGroup) -> impl Fn(&EquivKey, &EquivKey) -> EquivKey + '_ {
    move |a, b| (key_add(&a.0, &b.0), group.add(&a.1, &b.1))
}

/// Cup product, with `(φ ⊗ χ_V)(ψ ⊗ χ_W) = φψ ⊗ χ_V χ_W`.
pub fn equiv_cycle_mul(a: &EquivClass, b: &EquivClass) -> Result<EquivClass> {
    a.check(b)?;
    let roots = a.roots.mul(&b.roots, key_combine(&a.group));
    let phi = if a.phi.is_empty() && b.phi.is_empty() {
        PhiMap::new()
    } else {
        twisted_odd_g(&a.model, &a.group, &a.ch_tg(), &a.phi, &b.ch_tg(), &b.phi)
    };
    Ok(EquivClass {
        model: a.model.clone(),
        group: a.group.clone(),
        roots,
        phi,
    })
}

pub fn equiv_lambda_t(a: &EquivClass, trunc: usize) -> LambdaSeries<EquivClass> {
    let (model, group) = (&a.model, &a.group);
    let unit = (zero_key(model), group.zero());
    let ring = EquivRing::new(model, group);
    let p = a.roots.positive_part();
    let plus_roots = exterior_powers(&p, trunc, &unit, key_combine(group));
    let plus_phi: Vec<PhiMap> = if a.phi.is_empty() {
        vec![PhiMap::new(); trunc + 1]
    } else {
        let gring = GammaGRing::new(model, group);
        let g = gamma_g_of(model, &virtual_ch_tg(model, &p), &a.phi);
        gring
            .gamma_g_lambda_series(&g, trunc)
            .coeffs()
            .iter()
            .map(odd_parts)
            .collect()
    };
    let mk = |roots, phi| EquivClass {
        model: model.clone(),
        group: group.clone(),
        roots,
        phi,
    };
    let plus: Vec<EquivClass> = plus_roots
        .into_iter()
        .zip(plus_phi)
        .map(|(r, f)| mk(r, f))
        .collect();
    let m = a.roots.negative_part();
    if m.is_empty() {
        return LambdaSeries::from_tail(&ring, plus[1..].to_vec());
    }
    let minus: Vec<EquivClass> = exterior_powers(&m.neg(), trunc, &unit, key_combine(group))
        .into_iter()
        .map(|r| mk(r, PhiMap::new()))
        .collect();
    let s = series::series_mul(
        &ring,
        &TruncSeries::from_coeffs(plus),
        &TruncSeries::from_coeffs(minus),
    )
    .expect("equal truncation");
    LambdaSeries::new(&ring, s).expect("constant term one")
}

pub fn equiv_lambda(n: usize, a: &EquivClass) -> EquivClass {
    equiv_lambda_t(a, n).coeff(n).clone()
}

/// Roots `x ↦ kx`, characters `γ ↦ kγ`, `α_l ⊗ χ_γ ↦ k^l α_l ⊗ χ_{kγ}`.
pub fn equiv_adams(k: usize, a: &EquivClass) -> EquivClass {
    let g = &a.group;
    let k = k as i64;
    let mut phi = PhiMap::new();
    for (c, v) in &a.phi {
        phi_insert(&mut phi, g.scale(k, c), v.adams_scale(k));
    }
    EquivClass {
        model: a.model.clone(),
        group: g.clone(),
        roots: a.roots.map_keys(|(x, c)| (key_scale(k, x), g.scale(k, c))),
        phi,
    }
}

/// Equivariant classes on a fixed-point model as a λ-context.
#[derive(Debug, Clone)]
pub struct EquivRing {
    group: AbelianGroup,
    base: DiffKRing,
}

impl EquivRing {
    pub fn new(model: &Arc<CdgaModel>, group: &AbelianGroup) -> Self {
        EquivRing {
            group: group.clone(),
            base: DiffKRing::new(model),
        }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        self.base.model()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn sample_line(&self, rng: &mut ChaCha8Rng) -> (LineRoot, Character) {
        (self.base.sample_root(rng), self.group.sample_character(rng))
    }

    pub fn sample_phi(&self, rng: &mut ChaCha8Rng) -> BTreeMap<Character, OddCoset> {
        let mut m = PhiMap::new();
        for _ in 0..rng.gen_range(0..=2) {
            phi_insert(
                &mut m,
                self.group.sample_character(rng),
                self.base.sample_phi(rng),
            );
        }
        m
    }

    pub fn sample_cycle(&self, rng: &mut ChaCha8Rng, rank: usize) -> EquivCycle {
        let lines = (0..rank).map(|_| self.sample_line(rng)).collect();
        let t = EquivTriple::new(self.model(), &self.group, lines).expect("sampled in group");
        EquivCycle::new(t, self.sample_phi(rng)).expect("sampled in group")
    }

    pub fn sample_class(&self, rng: &mut ChaCha8Rng) -> EquivClass {
        let np = rng.gen_range(0..=3);
        let nm = rng.gen_range(0..=1);
        let plus = self.sample_cycle(rng, np);
        let lines = (0..nm).map(|_| self.sample_line(rng)).collect();
        let minus = EquivCycle::of_triple(
            EquivTriple::new(self.model(), &self.group, lines).expect("in group"),
        );
        EquivClass::normal_form(&plus, &minus).expect("same model")
    }
}

impl Ring for EquivRing {
    type Elem = EquivClass;

    fn zero(&self) -> EquivClass {
        EquivClass::zero(self.model(), &self.group)
    }
    fn one(&self) -> EquivClass {
        EquivClass::one(self.model(), &self.group)
    }
    fn add(&self, a: &EquivClass, b: &EquivClass) -> EquivClass {
        a.add(b).expect("same model")
    }
    fn neg(&self, a: &EquivClass) -> EquivClass {
        a.neg()
    }
    fn mul(&self, a: &EquivClass, b: &EquivClass) -> EquivClass {
        equiv_cycle_mul(a, b).expect("same model")
    }
    fn from_int(&self, n: &BigInt) -> EquivClass {
        EquivClass::from_int(
            self.model(),
            &self.group,
            n.to_i64().expect("small integer"),
        )
    }
    fn is_zero(&self, a: &EquivClass) -> bool {
        a.roots.is_empty() && a.phi.is_empty()
    }
}

impl LambdaContext for EquivRing {
    fn name(&self) -> String {
        format!("equivariant({}, {})", self.model().name(), self.group)
    }
    fn lambda(&self, n: usize, x: &EquivClass) -> EquivClass {
        equiv_lambda(n, x)
    }
    fn lambda_series(&self, x: &EquivClass, trunc: usize) -> TruncSeries<EquivClass> {
        equiv_lambda_t(x, trunc).series().clone()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> EquivClass {
        self.sample_class(rng)
    }
    fn adams(&self, k: usize, x: &EquivClass) -> Option<EquivClass> {
        Some(equiv_adams(k, x))
    }
    fn describe(&self, x: &EquivClass) -> String {
        x.to_string()
    }
}
