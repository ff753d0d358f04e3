//! Morphisms of CDGA models, given by images of generators.

use std::sync::Arc;

use super::element::GradedElement;
use super::free::{self, FreeElem};
use super::model::{CdgaModel, ModelSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};

/// A validated degree-preserving algebra map commuting with `d`.
#[derive(Clone, Debug)]
pub struct CdgaMorphism {
    name: String,
    source: Arc<CdgaModel>,
    target: Arc<CdgaModel>,
    /// Image of each source basis element (target coordinates).
    matrix: Vec<Vector>,
}

fn eval_free(e: &FreeElem, images: &[GradedElement], target: &Arc<CdgaModel>) -> GradedElement {
    let mut acc = GradedElement::zero(target);
    for (m, c) in &e.0 {
        let mut t = GradedElement::one(target);
        for (g, &p) in m.iter().enumerate() {
            for _ in 0..p {
                t = &t * &images[g];
            }
        }
        acc = &acc + &t.scale(c);
    }
    acc
}

impl CdgaMorphism {
    /// `images[i]` is an expression in the target generators giving the image
    /// of the `i`-th source generator.
    pub fn new(
        name: &str,
        source: &Arc<CdgaModel>,
        target: &Arc<CdgaModel>,
        images: &[&str],
    ) -> Result<Self> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(Error::InvalidMorphism(format!(
                "{name}: {} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let imgs = images
            .iter()
            .map(|s| GradedElement::parse(target, s))
            .collect::<Result<Vec<_>>>()?;
        for (g, img) in gens.iter().zip(&imgs) {
            if !img.is_homogeneous_of(g.degree) {
                return Err(Error::InvalidMorphism(format!(
                    "{name}: image of {} is not of degree {}",
                    g.name, g.degree
                )));
            }
        }
        let spec = source.spec();
        let bad = |what: String| Error::InvalidMorphism(format!("{name}: {what}"));
        for r in &spec.relations {
            let e = free::parse_expr(r, gens)?;
            if !eval_free(&e, &imgs, target).is_zero() {
                return Err(bad(format!("relation {r} does not map to zero")));
            }
        }
        for k in source.top_degree() + 1..=target.top_degree() {
            for m in free::monomials_of_degree(gens, k) {
                let mut e = FreeElem::zero();
                e.0.insert(m.clone(), crate::rational::Rational::one());
                if !eval_free(&e, &imgs, target).is_zero() {
                    return Err(bad(format!(
                        "{} vanishes in the source above its top degree but not in the target",
                        free::mono_label(gens, &m)
                    )));
                }
            }
        }
        for (i, g) in gens.iter().enumerate() {
            let dg = match spec.differential.iter().find(|d| d.of == g.name) {
                Some(d) => free::parse_expr(&d.value, gens)?,
                None => FreeElem::zero(),
            };
            if eval_free(&dg, &imgs, target) != imgs[i].differential() {
                return Err(bad(format!("does not commute with d on {}", g.name)));
            }
        }
        let matrix = source
            .basis()
            .iter()
            .map(|b| {
                let mut e = FreeElem::zero();
                e.0.insert(b.mono.clone(), crate::rational::Rational::one());
                eval_free(&e, &imgs, target).coords().to_vec()
            })
            .collect();
        Ok(CdgaMorphism {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    pub fn identity(model: &Arc<CdgaModel>) -> Self {
        let names: Vec<String> = model.generators().iter().map(|g| g.name.clone()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::new("id", model, model, &refs).expect("identity is a morphism")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<CdgaModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CdgaModel> {
        &self.target
    }

    pub fn pullback(&self, a: &GradedElement) -> Result<GradedElement> {
        if !super::element::same_model(a.model(), &self.source) {
            return Err(Error::ModelMismatch(
                a.model().name().into(),
                self.source.name().into(),
            ));
        }
        let mut out = linalg::zero_vector(self.target.dim());
        for (i, c) in a.coords().iter().enumerate() {
            if !c.is_zero() {
                linalg::axpy(&mut out, c, &self.matrix[i]);
            }
        }
        GradedElement::from_coords(&self.target, out)
    }
}

/// Nontrivial morphisms used for naturality checks.
pub fn morphism_catalog() -> Result<Vec<CdgaMorphism>> {
    let b = |s: ModelSpec| CdgaModel::build(&s);
    let torus2 = b(ModelSpec::torus(2))?;
    let torus4 = b(ModelSpec::torus(4))?;
    let s2 = b(ModelSpec::s2())?;
    let cp1 = b(ModelSpec::cpn(1))?;
    let cp2 = b(ModelSpec::cpn(2))?;
    let cp3 = b(ModelSpec::cpn(3))?;
    let cp4 = b(ModelSpec::cpn(4))?;
    let heis3 = b(ModelSpec::heis3())?;
    Ok(vec![
        CdgaMorphism::new(
            "torus4-linear",
            &torus4,
            &torus4,
            &["dx1 + dx2", "dx2 - 2*dx3", "dx3 + dx4", "3*dx4 - dx1"],
        )?,
        CdgaMorphism::new(
            "torus2-to-torus4",
            &torus2,
            &torus4,
            &["dx1 + dx3", "2*dx2 - dx4"],
        )?,
        CdgaMorphism::new("cp1-to-torus4", &cp1, &torus4, &["dx1*dx2"])?,
        CdgaMorphism::new("s2-scale", &s2, &s2, &["2*x", "4*y"])?,
        CdgaMorphism::new("s2-flip", &s2, &s2, &["-x", "y"])?,
        CdgaMorphism::new("cp2-to-s2", &cp2, &s2, &["x"])?,
        CdgaMorphism::new("cp3-scale", &cp3, &cp3, &["-3*x"])?,
        CdgaMorphism::new("cp4-to-cp3", &cp4, &cp3, &["x"])?,
        CdgaMorphism::new("heis3-scale", &heis3, &heis3, &["2*a", "b", "2*c"])?,
    ])
}
