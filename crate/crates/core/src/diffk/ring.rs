use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{cycle_adams, cycle_mul, lambda_t_cycle, DiffKClass, LineRoot};
use crate::cdga::{CdgaModel, GradedElement, OddCoset};
use crate::gamma::{canonical_basis, closed_basis, sample_from};
use crate::lambda::LambdaContext;
use crate::rational::Rational;
use crate::ring::Ring;
use crate::series::TruncSeries;

/// Ranks of sampled classes: `plus` lines minus `minus` lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleShape {
    pub max_plus: usize,
    pub max_minus: usize,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape {
            max_plus: 3,
            max_minus: 1,
        }
    }
}

#[derive(Debug)]
struct Bases {
    roots: Vec<GradedElement>,
    odd: Vec<GradedElement>,
}

/// The ring of virtual classes on a model, as a λ-context.
#[derive(Debug, Clone)]
pub struct DiffKRing {
    model: Arc<CdgaModel>,
    shape: SampleShape,
    bases: Arc<OnceLock<Bases>>,
}

impl DiffKRing {
    pub fn new(model: &Arc<CdgaModel>) -> Self {
        Self::with_shape(model, SampleShape::default())
    }

    pub fn with_shape(model: &Arc<CdgaModel>, shape: SampleShape) -> Self {
        DiffKRing {
            model: model.clone(),
            shape,
            bases: Arc::default(),
        }
    }

    pub fn model(&self) -> &Arc<CdgaModel> {
        &self.model
    }

    fn bases(&self) -> &Bases {
        self.bases.get_or_init(|| {
            let m = &self.model;
            let roots = if m.top_degree() >= 2 {
                closed_basis(m, 2)
            } else {
                Vec::new()
            };
            let odd = (1..=m.top_degree())
                .step_by(2)
                .flat_map(|k| canonical_basis(m, k))
                .collect();
            Bases { roots, odd }
        })
    }

    /// A closed degree-2 form with small integer coordinates; zero about a
    /// third of the time.
    pub fn sample_root(&self, rng: &mut ChaCha8Rng) -> LineRoot {
        let mut x = GradedElement::zero(&self.model);
        if rng.gen_range(0..3) > 0 {
            for b in &self.bases().roots {
                let c: i64 = rng.gen_range(-2..=2);
                if c != 0 {
                    x = &x + &b.scale(&Rational::from(c));
                }
            }
        }
        LineRoot::new(x).expect("closed degree-2 form")
    }

    pub fn sample_phi(&self, rng: &mut ChaCha8Rng) -> OddCoset {
        if rng.gen_bool(0.4) {
            return OddCoset::zero(&self.model);
        }
        OddCoset::normalize(&sample_from(&self.bases().odd, &self.model, rng)).expect("odd")
    }

    pub fn sample_class(&self, rng: &mut ChaCha8Rng) -> DiffKClass {
        let np = rng.gen_range(0..=self.shape.max_plus);
        let nm = rng.gen_range(0..=self.shape.max_minus);
        let mut acc = super::map_a(&self.sample_phi(rng));
        for _ in 0..np {
            acc = acc
                .add(&DiffKClass::line(&self.sample_root(rng)))
                .expect("same model");
        }
        for _ in 0..nm {
            acc = acc
                .sub(&DiffKClass::line(&self.sample_root(rng)))
                .expect("same model");
        }
        acc
    }
}

impl Ring for DiffKRing {
    type Elem = DiffKClass;

    fn zero(&self) -> DiffKClass {
        DiffKClass::zero(&self.model)
    }
    fn one(&self) -> DiffKClass {
        DiffKClass::one(&self.model)
    }
    fn add(&self, a: &DiffKClass, b: &DiffKClass) -> DiffKClass {
        a.add(b).expect("same model")
    }
    fn neg(&self, a: &DiffKClass) -> DiffKClass {
        a.neg()
    }
    fn mul(&self, a: &DiffKClass, b: &DiffKClass) -> DiffKClass {
        cycle_mul(a, b).expect("same model")
    }
    fn from_int(&self, n: &BigInt) -> DiffKClass {
        DiffKClass::from_int(&self.model, n.to_i64().expect("small integer"))
    }
    fn is_zero(&self, a: &DiffKClass) -> bool {
        a.roots.is_empty() && a.phi.is_zero()
    }
}

impl LambdaContext for DiffKRing {
    fn name(&self) -> String {
        format!("diffk({})", self.model.name())
    }
    fn lambda(&self, n: usize, x: &DiffKClass) -> DiffKClass {
        super::cycle_lambda(n, x)
    }
    fn lambda_series(&self, x: &DiffKClass, trunc: usize) -> TruncSeries<DiffKClass> {
        lambda_t_cycle(x, trunc).series().clone()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> DiffKClass {
        self.sample_class(rng)
    }
    fn adams(&self, k: usize, x: &DiffKClass) -> Option<DiffKClass> {
        Some(cycle_adams(k, x))
    }
    fn describe(&self, x: &DiffKClass) -> String {
        x.to_string()
    }
}
