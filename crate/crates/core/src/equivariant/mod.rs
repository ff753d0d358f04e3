//! Equivariant extension over a fixed-point model `B^g`: characters of a
//! finitely generated abelian group, the representation ring as its exact
//! group ring, `Γ_g(B) = Γ(B^g) ⊗ R(T_g)`, and equivariant cycles.
//!
//! The group is known only through its characters; nothing evaluates a
//! character at a group element.

mod cycle;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cdga::{CdgaModel, GroupSpec};
use crate::error::{Error, Result};
use crate::gamma::{gamma_adams, gamma_mul, GammaElement, GammaRing};
use crate::lambda::{lambda_from_adams, LambdaContext};
use crate::multiset::SignedMultiset;
use crate::rational::Rational;
use crate::ring::Ring;
use crate::series::TruncSeries;

pub use cycle::{
    ch_tg, equiv_adams, equiv_chern_simons, equiv_cycle_mul, equiv_lambda, equiv_lambda_t,
    EquivClass, EquivCycle, EquivRing, EquivTriple,
};

/// `Z^r × Z/n_1 × ... × Z/n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if torsion.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument(
                "torsion orders must be at least 2".into(),
            ));
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    pub fn from_spec(g: &GroupSpec) -> Result<Self> {
        Self::new(g.free_rank, g.torsion.clone())
    }

    /// Parses `Z`, `Z/2`, `ZxZ/3`, `Z^2xZ/2xZ/4`, `1` (trivial).
    pub fn parse(s: &str) -> Result<Self> {
        let mut free_rank = 0;
        let mut torsion = Vec::new();
        if s.trim() == "1" {
            return Self::new(0, torsion);
        }
        for part in s.split('x') {
            let part = part.trim();
            if let Some(n) = part.strip_prefix("Z/") {
                torsion.push(
                    n.parse()
                        .map_err(|_| Error::Parse(format!("bad torsion order in `{s}`")))?,
                );
            } else if part == "Z" {
                free_rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free_rank += r
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad rank in `{s}`")))?;
            } else {
                return Err(Error::Parse(format!("unrecognized group factor `{part}`")));
            }
        }
        Self::new(free_rank, torsion)
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn zero(&self) -> Character {
        Character {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion.len()],
        }
    }

    pub fn character(&self, free: &[i64], residues: &[i64]) -> Result<Character> {
        if free.len() != self.free_rank || residues.len() != self.torsion.len() {
            return Err(Error::GroupMismatch);
        }
        Ok(Character {
            free: free.to_vec(),
            torsion: residues
                .iter()
                .zip(&self.torsion)
                .map(|(&r, &n)| r.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub fn contains(&self, c: &Character) -> bool {
        c.free.len() == self.free_rank
            && c.torsion.len() == self.torsion.len()
            && c.torsion.iter().zip(&self.torsion).all(|(r, n)| r < n)
    }

    pub fn add(&self, a: &Character, b: &Character) -> Character {
        Character {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64, a: &Character) -> Character {
        Character {
            free: a.free.iter().map(|x| k * x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(x, &n)| ((*x as i128 * k as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        }
    }

    pub fn sample_character(&self, rng: &mut ChaCha8Rng) -> Character {
        Character {
            free: (0..self.free_rank).map(|_| rng.gen_range(-2..=2)).collect(),
            torsion: self.torsion.iter().map(|&n| rng.gen_range(0..n)).collect(),
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("x"))
        }
    }
}

/// A one-dimensional representation `V_γ`, indexed by `γ ∈ G`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Character {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<String> = self
            .free
            .iter()
            .map(i64::to_string)
            .chain(self.torsion.iter().map(u64::to_string))
            .collect();
        write!(f, "chi({})", all.join(","))
    }
}

/// An element of `R(T_g)`: integer combination of characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepRingElement {
    group: AbelianGroup,
    terms: SignedMultiset<Character>,
}

impl RepRingElement {
    pub fn zero(group: &AbelianGroup) -> Self {
        RepRingElement {
            group: group.clone(),
            terms: SignedMultiset::new(),
        }
    }

    pub fn one(group: &AbelianGroup) -> Self {
        Self::character(group, group.zero())
    }

    pub fn character(group: &AbelianGroup, c: Character) -> Self {
        RepRingElement {
            group: group.clone(),
            terms: SignedMultiset::singleton(c),
        }
    }

    pub fn terms(&self) -> &SignedMultiset<Character> {
        &self.terms
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(RepRingElement {
            group: self.group.clone(),
            terms: self.terms.add(&other.terms),
        })
    }

    pub fn neg(&self) -> Self {
        RepRingElement {
            group: self.group.clone(),
            terms: self.terms.neg(),
        }
    }

    /// `dim`: the augmentation.
    pub fn dimension(&self) -> i64 {
        self.terms.rank()
    }

    /// `χ ↦ χ^k`.
    pub fn adams(&self, k: usize) -> Self {
        let g = &self.group;
        RepRingElement {
            group: g.clone(),
            terms: self.terms.map_keys(|c| g.scale(k as i64, c)),
        }
    }
}

/// `χ_V χ_W = χ_{V ⊗ W}`, extended bilinearly.
pub fn rep_mul(u: &RepRingElement, v: &RepRingElement) -> Result<RepRingElement> {
    u.check(v)?;
    let g = &u.group;
    Ok(RepRingElement {
        group: g.clone(),
        terms: u.terms.mul(&v.terms, |a, b| g.add(a, b)),
    })
}

/// An element of `Γ(B^g) ⊗ R(T_g)`: a `Γ` component per character, with no
/// zero components.
#[derive(Clone)]
pub struct GammaGElement {
    model: Arc<CdgaModel>,
    parts: BTreeMap<Character, GammaElement>,
}

impl PartialEq for GammaGElement {
    fn eq(&self, other: &Self) -> bool {
        crate::cdga::element::same_model(&self.model, &other.model) && self.parts == other.parts
    }
}

impl Eq for GammaGElement {}

impl fmt::Debug for GammaGElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|(c, g)| format!("{g:?}*{c}"))
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

impl GammaGElement {
    pub fn zero(model: &Arc<CdgaModel>) -> Self {
        GammaGElement {
            model: model.clone(),
            parts: BTreeMap::new(),
        }
    }

    pub fn from_parts(
        model: &Arc<CdgaModel>,
        parts: impl IntoIterator<Item = (Character, GammaElement)>,
    ) -> Self {
        let mut out = Self::zero(model);
        for (c, g) in parts {
            out.insert(c, g);
        }
        out
    }

    fn insert(&mut self, c: Character, g: GammaElement) {
        let entry = match self.parts.remove(&c) {
            Some(old) => old.add(&g).expect("same model"),
            None => g,
        };
        if !entry.even().is_zero() || !entry.odd().is_zero() {
            self.parts.insert(c, entry);
        }
    }

    pub fn parts(&self) -> &BTreeMap<Character, GammaElement> {
        &self.parts
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }
}

/// `Γ_g(B)` as a ring and λ-context.
#[derive(Debug, Clone)]
pub struct GammaGRing {
    group: AbelianGroup,
    gamma: GammaRing,
}

impl GammaGRing {
    pub fn new(model: &Arc<CdgaModel>, group: &AbelianGroup) -> Self {
        GammaGRing {
            group: group.clone(),
            gamma: GammaRing::new(model),
        }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        self.gamma.model()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// `Ψ^k(α ⊗ χ_γ) = k^l α ⊗ χ_{kγ}` on the degree-`l` part.
    pub fn gamma_g_adams(&self, k: usize, x: &GammaGElement) -> GammaGElement {
        GammaGElement::from_parts(
            self.model(),
            x.parts
                .iter()
                .map(|(c, g)| (self.group.scale(k as i64, c), gamma_adams(k, g))),
        )
    }

    pub fn gamma_g_lambda_series(
        &self,
        x: &GammaGElement,
        trunc: usize,
    ) -> TruncSeries<GammaGElement> {
        let psi: Vec<GammaGElement> = (1..=trunc).map(|k| self.gamma_g_adams(k, x)).collect();
        lambda_from_adams(self, &psi, trunc)
            .expect("Q-algebra")
            .series()
            .clone()
    }
}

impl Ring for GammaGRing {
    type Elem = GammaGElement;

    fn zero(&self) -> GammaGElement {
        GammaGElement::zero(self.model())
    }
    fn one(&self) -> GammaGElement {
        GammaGElement::from_parts(
            self.model(),
            [(self.group.zero(), GammaElement::one(self.model()))],
        )
    }
    fn add(&self, a: &GammaGElement, b: &GammaGElement) -> GammaGElement {
        let mut out = a.clone();
        for (c, g) in &b.parts {
            out.insert(c.clone(), g.clone());
        }
        out
    }
    fn neg(&self, a: &GammaGElement) -> GammaGElement {
        GammaGElement {
            model: a.model.clone(),
            parts: a.parts.iter().map(|(c, g)| (c.clone(), g.neg())).collect(),
        }
    }
    fn mul(&self, a: &GammaGElement, b: &GammaGElement) -> GammaGElement {
        let mut out = GammaGElement::zero(self.model());
        for (c, x) in &a.parts {
            for (d, y) in &b.parts {
                out.insert(self.group.add(c, d), gamma_mul(x, y).expect("same model"));
            }
        }
        out
    }
    fn scale(&self, q: &Rational, a: &GammaGElement) -> Option<GammaGElement> {
        Some(GammaGElement::from_parts(
            self.model(),
            a.parts.iter().map(|(c, g)| (c.clone(), g.scale(q))),
        ))
    }
    fn is_q_linear(&self) -> bool {
        true
    }
    fn is_zero(&self, a: &GammaGElement) -> bool {
        a.parts.is_empty()
    }
}

impl LambdaContext for GammaGRing {
    fn name(&self) -> String {
        format!("gamma_g({}, {})", self.model().name(), self.group)
    }
    fn lambda(&self, n: usize, x: &GammaGElement) -> GammaGElement {
        self.gamma_g_lambda_series(x, n).coeff(n).clone()
    }
    fn lambda_series(&self, x: &GammaGElement, trunc: usize) -> TruncSeries<GammaGElement> {
        self.gamma_g_lambda_series(x, trunc)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> GammaGElement {
        let n = rng.gen_range(1..=2);
        GammaGElement::from_parts(
            self.model(),
            (0..n)
                .map(|_| {
                    (
                        self.group.sample_character(rng),
                        self.gamma.sample_element(rng),
                    )
                })
                .collect::<Vec<_>>(),
        )
    }
    fn adams(&self, k: usize, x: &GammaGElement) -> Option<GammaGElement> {
        Some(self.gamma_g_adams(k, x))
    }
}

#[cfg(test)]
mod tests;
