//! Property suites beyond the axiom harness: the Witt ring laws, the
//! projection `p: Γ(B) → Z^even(B)`, well-definedness and Chern–Simons on
//! cycles, the Adams identities, their equivariant analogues, and the
//! splitting matrix.
//!
//! Every suite returns a [`Report`] assembled by sample index, so equal
//! options give byte-identical JSON.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cdga::{morphism_catalog, CdgaModel, GradedElement, ModelSpec};
use crate::diffk::{
    chern_character, chern_simons, curvature_map, cycle_adams, map_I, perturb_triple, DiffKClass,
    DiffKCycle, DiffKRing, LineRoot, Perturbation, SplitTriple,
};
use crate::equivariant::{
    ch_tg, equiv_adams, equiv_chern_simons, AbelianGroup, Character, EquivClass, EquivRing,
    GammaGRing,
};
use crate::error::Result;
use crate::gamma::{z_adams, z_lambda_series, GammaRing, ZEvenRing};
use crate::lambda::verify::{clip, sample_rng};
use crate::lambda::{
    verify_axioms, witt_add, witt_lambda, witt_mul, Check, LambdaContext, LambdaSeries, Mode,
    Report, VerifyOptions,
};
use crate::rational::Rational;
use crate::ring::Ring;
use crate::symfun::newton_nu;

/// Stream offset separating suite samples from the harness samples drawn
/// with the same seed.
const EXTRA_STREAM: u64 = 1 << 32;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    pub trunc: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            samples: 100,
            seed: 0,
            trunc: 6,
        }
    }
}

impl SuiteOptions {
    pub fn new(samples: usize, seed: u64, trunc: usize) -> Self {
        SuiteOptions {
            samples,
            seed,
            trunc,
        }
    }

    fn harness(&self, mode: Mode) -> VerifyOptions {
        VerifyOptions::new(mode, self.samples, self.seed, self.trunc)
    }

    fn rng(&self, i: usize) -> ChaCha8Rng {
        sample_rng(self.seed, EXTRA_STREAM + i as u64)
    }
}

fn per_sample<F>(samples: usize, f: F) -> Vec<Check>
where
    F: Fn(usize) -> Vec<Check> + Sync + Send,
{
    let chunks: Vec<Vec<Check>> = (0..samples).into_par_iter().map(f).collect();
    chunks.into_iter().flatten().collect()
}

fn differ<T: PartialEq + Display>(lhs: &T, rhs: &T) -> Option<String> {
    (lhs != rhs).then(|| clip(format!("{lhs} != {rhs}")))
}

fn differ_with<T: PartialEq>(lhs: &T, rhs: &T, show: impl Fn(&T) -> String) -> Option<String> {
    (lhs != rhs).then(|| clip(format!("{} != {}", show(lhs), show(rhs))))
}

fn series_differ<C: LambdaContext + ?Sized>(
    ctx: &C,
    a: &LambdaSeries<C::Elem>,
    b: &LambdaSeries<C::Elem>,
) -> Option<String> {
    if a.trunc() != b.trunc() {
        return Some(format!("truncations {} vs {}", a.trunc(), b.trunc()));
    }
    let n = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .position(|(x, y)| x != y)?;
    Some(clip(format!(
        "coefficient t^{n}: {} != {}",
        ctx.describe(a.coeff(n)),
        ctx.describe(b.coeff(n))
    )))
}

fn sample_series<C: LambdaContext + ?Sized>(
    ctx: &C,
    rng: &mut ChaCha8Rng,
    n: usize,
) -> LambdaSeries<C::Elem> {
    LambdaSeries::from_tail(ctx, (0..n).map(|_| ctx.sample(rng)).collect())
}

/// A degree-one form with coordinates in `-2..=2`.
pub fn sample_beta(model: &Arc<CdgaModel>, rng: &mut ChaCha8Rng) -> GradedElement {
    let mut b = GradedElement::zero(model);
    for i in model.degree_range(1) {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            b = &b + &GradedElement::basis(model, i).scale(&Rational::from(c));
        }
    }
    b
}

pub fn sample_perturbation(
    model: &Arc<CdgaModel>,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Perturbation {
    Perturbation::new((0..rank).map(|_| sample_beta(model, rng)).collect())
        .expect("degree-one forms")
}

/// Commutativity and distributivity of `+~`, `*~` and the addition formula
/// for `λ~^n`, `n ≤ 4`, on random series triples over `ctx`.
pub fn witt_laws<C: LambdaContext + Sync + ?Sized>(ctx: &C, opts: &SuiteOptions) -> Report
where
    C::Elem: Send,
{
    let n = opts.trunc;
    let mut report = Report::new("witt-laws", &ctx.name(), opts.seed, n);
    report.checks = per_sample(opts.samples, |i| {
        let mut rng = opts.rng(i);
        let a = sample_series(ctx, &mut rng, n);
        let b = sample_series(ctx, &mut rng, n);
        let c = sample_series(ctx, &mut rng, n);
        let inst = format!("triple {i}");
        let mut out = Vec::new();
        let add_comm = (|| {
            Ok(series_differ(
                ctx,
                &witt_add(ctx, &a, &b)?,
                &witt_add(ctx, &b, &a)?,
            ))
        })();
        out.push(Check::from_result(
            "I +~ J = J +~ I",
            inst.clone(),
            add_comm,
        ));
        let mul_comm = (|| {
            Ok(series_differ(
                ctx,
                &witt_mul(ctx, &a, &b)?,
                &witt_mul(ctx, &b, &a)?,
            ))
        })();
        out.push(Check::from_result(
            "I *~ J = J *~ I",
            inst.clone(),
            mul_comm,
        ));
        let dist = (|| {
            let lhs = witt_mul(ctx, &witt_add(ctx, &a, &b)?, &c)?;
            let rhs = witt_add(ctx, &witt_mul(ctx, &a, &c)?, &witt_mul(ctx, &b, &c)?)?;
            Ok(series_differ(ctx, &lhs, &rhs))
        })();
        out.push(Check::from_result(
            "(I +~ J) *~ K = I *~ K +~ J *~ K",
            inst.clone(),
            dist,
        ));
        let l0 =
            witt_lambda(ctx, 0, &a).map(|l| series_differ(ctx, &l, &LambdaSeries::one(ctx, n)));
        out.push(Check::from_result("lambda~^0(I) = 1 + t", inst.clone(), l0));
        let l1 = witt_lambda(ctx, 1, &a).map(|l| series_differ(ctx, &l, &a));
        out.push(Check::from_result("lambda~^1(I) = I", inst.clone(), l1));
        for m in 2..=n.min(4) {
            let k = n / m;
            let add = (|| {
                let lhs = witt_lambda(ctx, m, &witt_add(ctx, &a, &b)?)?;
                let mut rhs = LambdaSeries::zero(ctx, k);
                for j in 0..=m {
                    let x = witt_lambda(ctx, j, &a)?.truncate(k);
                    let y = witt_lambda(ctx, m - j, &b)?.truncate(k);
                    rhs = witt_add(ctx, &rhs, &witt_mul(ctx, &x, &y)?)?;
                }
                Ok(series_differ(ctx, &lhs, &rhs))
            })();
            out.push(Check::from_result(
                "lambda~^n(I +~ J) = sum~_j lambda~^j(I) *~ lambda~^(n-j)(J)",
                format!("{inst}, n = {m}, up to t^{k}"),
                add,
            ));
        }
        out
    });
    report
}

/// The λ-ring axioms on `Γ(B)`, and `p` commuting with `+`, `·` and `λ^k`
/// on the same samples.
pub fn gamma_suite(model: &Arc<CdgaModel>, opts: &SuiteOptions) -> Report {
    let ring = GammaRing::new(model);
    let z = ZEvenRing::new(model);
    let n = opts.trunc;
    let mut report = verify_axioms(&ring, &opts.harness(Mode::Lambda));
    report.mode = "gamma".into();
    report.checks.extend(per_sample(opts.samples, |i| {
        // the harness draws x, y from the same stream
        let mut rng = sample_rng(opts.seed, i as u64);
        let x = ring.sample(&mut rng);
        let y = ring.sample(&mut rng);
        let p = |g: &crate::gamma::GammaElement| g.even_restriction_p();
        let inst = format!("sample {i}");
        let mut out = vec![
            Check::new(
                "p(x + y) = p(x) + p(y)",
                inst.clone(),
                differ(&p(&ring.add(&x, &y)), &z.add(&p(&x), &p(&y))),
            ),
            Check::new(
                "p(xy) = p(x) p(y)",
                inst.clone(),
                differ(&p(&ring.mul(&x, &y)), &z.mul(&p(&x), &p(&y))),
            ),
        ];
        let lam_x = ring.lambda_series(&x, n);
        let lam_px = z_lambda_series(&p(&x), n);
        let w = (0..=n)
            .find(|&k| p(&lam_x.coeffs()[k]) != lam_px.coeffs()[k])
            .map(|k| {
                clip(format!(
                    "k = {k}: {} != {}",
                    p(&lam_x.coeffs()[k]),
                    lam_px.coeffs()[k]
                ))
            });
        out.push(Check::new(
            "p(lambda^k x) = lambda_Z^k(p x)",
            format!("{inst}, k <= {n}"),
            w,
        ));
        out
    }));
    report
}

/// λ-ring axioms on classes (composition up to `t^trunc`, products up to
/// `t^mul_trunc`), Chern–Simons transgression and well-definedness of `λ^k`
/// under perturbation of the connection.
pub fn diffk_suite(model: &Arc<CdgaModel>, opts: &SuiteOptions, mul_trunc: usize) -> Report {
    let ring = DiffKRing::new(model);
    let mut h = opts.harness(Mode::Lambda);
    h.mul_trunc = Some(mul_trunc.min(opts.trunc));
    let mut report = verify_axioms(&ring, &h);
    report.mode = "diffk".into();
    report.checks.extend(per_sample(opts.samples, |i| {
        let mut rng = opts.rng(i);
        let rank = rng.gen_range(1..=4);
        let c = DiffKCycle::new(
            SplitTriple::new(
                model,
                (0..rank).map(|_| ring.sample_root(&mut rng)).collect(),
            )
            .expect("same model"),
            ring.sample_phi(&mut rng),
        )
        .expect("same model");
        let pert = sample_perturbation(model, rank, &mut rng);
        transgression_checks(&c, &pert, &format!("pair {i}, rank {rank}"))
    }));
    report
}

fn transgression_checks(c: &DiffKCycle, pert: &Perturbation, inst: &str) -> Vec<Check> {
    let mut out = Vec::new();
    let cs = (|| {
        let cs = chern_simons(&c.triple, pert)?;
        let e1 = perturb_triple(&c.triple, pert)?;
        Ok(differ(
            &cs.differential(),
            &(&chern_character(&e1) - &chern_character(&c.triple)),
        ))
    })();
    out.push(Check::from_result(
        "d CS(E0, E1) = ch(E1) - ch(E0)",
        inst,
        cs,
    ));
    let c1 = match c.perturb(pert) {
        Ok(c1) => c1,
        Err(e) => {
            out.push(Check::new(
                "[E1, phi + CS] = [E0, phi]",
                inst,
                Some(format!("error: {e}")),
            ));
            return out;
        }
    };
    let same = (|| {
        Ok(differ(
            &DiffKClass::from_cycle(&c1)?,
            &DiffKClass::from_cycle(c)?,
        ))
    })();
    out.push(Check::from_result("[E1, phi + CS] = [E0, phi]", inst, same));
    for k in 0..=3 {
        let w = (|| {
            Ok(differ(
                &DiffKClass::from_cycle(&c1.lambda(k))?,
                &DiffKClass::from_cycle(&c.lambda(k))?,
            ))
        })();
        out.push(Check::from_result(
            "lambda^k well defined",
            format!("{inst}, k = {k}"),
            w,
        ));
    }
    out
}

/// `Ψ^k` as `ν_k(λ^1, ..., λ^k)` in `ring`.
fn adams_via_newton(ring: &DiffKRing, k: usize, a: &DiffKClass) -> Result<DiffKClass> {
    let lam = ring.lambda_series(a, k);
    newton_nu(k)?.eval(ring, &lam.coeffs()[1..], &[])
}

/// The Adams identities: the three laws through the log-derivative
/// criterion, `Ψ^k(L) = L^k`, `Ψ^k` on sums of lines, `ch ∘ Ψ^k = Ψ_Z^k ∘ ch`,
/// compatibility with the curvature and forgetful maps, the Newton
/// cross-check for `k ≤ 4`, and naturality along the morphism catalog.
pub fn adams_suite(model: &Arc<CdgaModel>, opts: &SuiteOptions) -> Report {
    let ring = DiffKRing::new(model);
    let mut report = verify_axioms(&ring, &opts.harness(Mode::AdamsCriterion));
    report.mode = "adams".into();
    report.checks.extend(per_sample(opts.samples, |i| {
        let mut rng = opts.rng(i);
        let inst = format!("sample {i}");
        let mut out = Vec::new();
        let line = DiffKClass::line(&ring.sample_root(&mut rng));
        let w = (1..=4).find_map(|k| {
            differ(&cycle_adams(k, &line), &ring.pow(&line, k as u32))
                .map(|w| format!("k = {k}: {w}"))
        });
        out.push(Check::new("Psi^k(L) = L^k", inst.clone(), w));

        let r = rng.gen_range(1..=4);
        let e = SplitTriple::new(model, (0..r).map(|_| ring.sample_root(&mut rng)).collect())
            .expect("same model");
        let lines: Vec<DiffKClass> = e.roots().iter().map(DiffKClass::line).collect();
        let class = DiffKClass::from_cycle(&DiffKCycle::of_triple(e.clone())).expect("same model");
        for k in 1..=4 {
            let w = (|| {
                let sum_of_powers = lines
                    .iter()
                    .fold(ring.zero(), |acc, l| ring.add(&acc, &ring.pow(l, k as u32)));
                let of_triple = DiffKClass::from_cycle(&DiffKCycle::of_triple(e.adams(k)))?;
                let lhs = cycle_adams(k, &class);
                Ok(differ(&lhs, &sum_of_powers).or_else(|| differ(&lhs, &of_triple)))
            })();
            out.push(Check::from_result(
                "Psi^k[E, 0] = [sum L_j^k, 0]",
                format!("{inst}, rank {r}, k = {k}"),
                w,
            ));
            let w = (|| {
                let nu = adams_via_newton(&ring, k, &class)?;
                Ok(differ(
                    &curvature_map(&nu),
                    &z_adams(k, &chern_character(&e)),
                ))
            })();
            out.push(Check::from_result(
                "ch(Psi^k E) = Psi_Z^k ch(E)",
                format!("{inst}, rank {r}, k = {k}"),
                w,
            ));
        }

        let a = ring.sample_class(&mut rng);
        for k in 1..=4 {
            let ks = format!("{inst}, k = {k}");
            let pa = cycle_adams(k, &a);
            out.push(Check::new(
                "R(Psi^k a) = Psi_Z^k R(a)",
                ks.clone(),
                differ(&curvature_map(&pa), &z_adams(k, &curvature_map(&a))),
            ));
            out.push(Check::new(
                "I(Psi^k a) = Psi^k I(a)",
                ks.clone(),
                differ_with(&map_I(&pa), &map_I(&a).adams(k), |f| {
                    format!("{:?}", f.roots)
                }),
            ));
            let w = adams_via_newton(&ring, k, &a).map(|nu| differ(&pa, &nu));
            out.push(Check::from_result(
                "Psi^k a = nu_k(lambda^1 a, ..., lambda^k a)",
                ks,
                w,
            ));
        }
        out
    }));
    report.checks.extend(naturality_checks(opts));
    report
}

/// `Ψ^k(f^* a) = f^* Ψ^k(a)` and `λ^k(f^* a) = f^* λ^k(a)` along every
/// catalog morphism, `k ≤ 3`.
pub fn naturality_checks(opts: &SuiteOptions) -> Vec<Check> {
    let catalog = match morphism_catalog() {
        Ok(c) => c,
        Err(e) => {
            return vec![Check::new(
                "morphism catalog",
                "build",
                Some(format!("error: {e}")),
            )]
        }
    };
    let per = opts.samples.clamp(1, 20);
    let mut out = Vec::new();
    for (mi, f) in catalog.iter().enumerate() {
        let ring = DiffKRing::new(f.source());
        out.extend(per_sample(per, |i| {
            let mut rng = sample_rng(opts.seed, 2 * EXTRA_STREAM + (mi * 1000 + i) as u64);
            let a = ring.sample_class(&mut rng);
            let inst = format!("{} sample {i}", f.name());
            let psi = (|| {
                let fa = a.pullback(f)?;
                for k in 1..=3 {
                    let w = differ(&cycle_adams(k, &fa), &cycle_adams(k, &a).pullback(f)?);
                    if w.is_some() {
                        return Ok(w.map(|w| format!("k = {k}: {w}")));
                    }
                }
                Ok(None)
            })();
            let lam = (|| {
                let fa = a.pullback(f)?;
                for k in 1..=3 {
                    let w = differ(
                        &crate::diffk::cycle_lambda(k, &fa),
                        &crate::diffk::cycle_lambda(k, &a).pullback(f)?,
                    );
                    if w.is_some() {
                        return Ok(w.map(|w| format!("k = {k}: {w}")));
                    }
                }
                Ok(None)
            })();
            vec![
                Check::from_result("Psi^k(f^* a) = f^* Psi^k(a)", inst.clone(), psi),
                Check::from_result("lambda^k(f^* a) = f^* lambda^k(a)", inst, lam),
            ]
        }));
    }
    out
}

type FormMap = BTreeMap<Character, GradedElement>;

fn nonzero(m: FormMap) -> FormMap {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn show_forms(m: &FormMap) -> String {
    let parts: Vec<String> = m.iter().map(|(c, v)| format!("{c}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// `Ψ^k` on character-graded closed forms: `ω ⊗ χ ↦ Ψ_Z^k ω ⊗ χ^k`.
fn adams_forms(group: &AbelianGroup, k: usize, m: &FormMap) -> FormMap {
    let mut out = FormMap::new();
    for (c, v) in m {
        let key = group.scale(k as i64, c);
        let w = z_adams(k, v);
        let e = out
            .entry(key)
            .or_insert_with(|| GradedElement::zero(v.model()));
        *e = &*e + &w;
    }
    nonzero(out)
}

/// The equivariant λ-ring axioms on classes and on `Γ_g`, the Adams
/// criterion against the native `Ψ^k(x, χ) = (kx, χ^k)`, and the equivariant
/// transgression, well-definedness and compatibility checks.
pub fn equivariant_suite(
    model: &Arc<CdgaModel>,
    group: &AbelianGroup,
    opts: &SuiteOptions,
    mul_trunc: usize,
) -> Report {
    let ring = EquivRing::new(model, group);
    let gamma_g = GammaGRing::new(model, group);
    let mut report = Report::new("equivariant", &ring.name(), opts.seed, opts.trunc);
    let tag = |r: Report| {
        let ctx = r.context.clone();
        let mode = r.mode.clone();
        r.checks.into_iter().map(move |mut c| {
            c.instance = format!("{ctx} {mode}: {}", c.instance);
            c
        })
    };
    let mut h = opts.harness(Mode::Lambda);
    h.mul_trunc = Some(mul_trunc.min(opts.trunc));
    report.checks.extend(tag(verify_axioms(&ring, &h)));
    report.checks.extend(tag(verify_axioms(
        &ring,
        &opts.harness(Mode::AdamsCriterion),
    )));
    report
        .checks
        .extend(tag(verify_axioms(&gamma_g, &opts.harness(Mode::Lambda))));
    report.checks.extend(per_sample(opts.samples, |i| {
        let mut rng = opts.rng(i);
        let inst = format!("sample {i}");
        let mut out = Vec::new();

        let (root, gamma) = ring.sample_line(&mut rng);
        let w = (|| {
            let line = EquivClass::line(group, &root, gamma.clone())?;
            for k in 1..=4 {
                let scaled = LineRoot::new(root.form().scale(&Rational::from(k as i64)))?;
                let expected = EquivClass::line(group, &scaled, group.scale(k as i64, &gamma))?;
                if let Some(w) = differ(&equiv_adams(k, &line), &expected) {
                    return Ok(Some(format!("k = {k}: {w}")));
                }
            }
            Ok(None)
        })();
        out.push(Check::from_result(
            "Psi^k(x, chi) = (kx, chi^k)",
            inst.clone(),
            w,
        ));

        let rank = rng.gen_range(1..=3);
        let c = ring.sample_cycle(&mut rng, rank);
        let pert = sample_perturbation(model, rank, &mut rng);
        let cs = (|| {
            let c1 = c.perturb(&pert)?;
            let cs = equiv_chern_simons(&c.triple, &pert)?;
            let mut diff = ch_tg(&c1.triple);
            for (g, v) in ch_tg(&c.triple) {
                let e = diff.entry(g).or_insert_with(|| GradedElement::zero(model));
                *e = &*e - &v;
            }
            let dcs: FormMap = cs
                .iter()
                .map(|(g, v)| (g.clone(), v.differential()))
                .collect();
            Ok(differ_with(&nonzero(dcs), &nonzero(diff), show_forms))
        })();
        out.push(Check::from_result(
            "d CS_Tg = ch_Tg(E1) - ch_Tg(E0)",
            inst.clone(),
            cs,
        ));
        let wd = (|| {
            let c1 = c.perturb(&pert)?;
            if let Some(w) = differ(&EquivClass::from_cycle(&c1)?, &EquivClass::from_cycle(&c)?) {
                return Ok(Some(w));
            }
            for k in 0..=3 {
                if let Some(w) = differ(
                    &EquivClass::from_cycle(&c1.lambda(k))?,
                    &EquivClass::from_cycle(&c.lambda(k))?,
                ) {
                    return Ok(Some(format!("k = {k}: {w}")));
                }
            }
            Ok(None)
        })();
        out.push(Check::from_result(
            "equivariant lambda^k well defined",
            format!("{inst}, k <= 3"),
            wd,
        ));

        let a = ring.sample_class(&mut rng);
        for k in 1..=4 {
            let pa = equiv_adams(k, &a);
            let ks = format!("{inst}, k = {k}");
            out.push(Check::new(
                "R(Psi^k a) = Psi_Z^k R(a), equivariant",
                ks.clone(),
                differ_with(
                    &nonzero(pa.curvature()),
                    &adams_forms(group, k, &a.curvature()),
                    show_forms,
                ),
            ));
            let forgot = a.forgetful().map_keys(|(x, g)| {
                (
                    x.iter().map(|c| c * &Rational::from(k as i64)).collect(),
                    group.scale(k as i64, g),
                )
            });
            out.push(Check::new(
                "I(Psi^k a) = Psi^k I(a), equivariant",
                ks,
                differ_with(&pa.forgetful(), &forgot, |m| format!("{m:?}")),
            ));
        }
        out
    }));
    report
}

/// Formal bases used by the splitting suite.
pub fn splitting_bases() -> Vec<ModelSpec> {
    vec![
        ModelSpec::point(),
        ModelSpec::cpn(1),
        ModelSpec::cpn(2),
        ModelSpec::cpn(3),
        ModelSpec::cp1xcp1(),
        ModelSpec::torus(2),
    ]
}

/// Chern classes `c_1..c_r` with seeded small coefficients on the degree
/// `2j` basis of `base`.
pub fn sample_chern_classes(base: &Arc<CdgaModel>, r: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    (1..=r)
        .map(|j| {
            let mut c = GradedElement::zero(base);
            if 2 * j <= base.top_degree() {
                for i in base.degree_range(2 * j) {
                    let a: i64 = rng.gen_range(-3..=3);
                    c = &c + &GradedElement::basis(base, i).scale(&Rational::from(a));
                }
            }
            if c.is_zero() {
                "0".to_string()
            } else {
                c.to_string()
            }
        })
        .collect()
}

/// Inverts `A = V + B` for every rank `r ≤ max_r` on every formal base and
/// checks both change-of-basis identities and freeness.
pub fn splitting_suite(max_r: usize, seed: u64) -> Report {
    let mut report = Report::new("splitting", "formal bases", seed, max_r);
    let cases: Vec<(ModelSpec, usize)> = splitting_bases()
        .into_iter()
        .flat_map(|b| (1..=max_r).map(move |r| (b.clone(), r)))
        .collect();
    let checks: Vec<Vec<Check>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (spec, r))| {
            let mut rng = sample_rng(seed, EXTRA_STREAM + i as u64);
            let base = match CdgaModel::build(spec) {
                Ok(b) => b,
                Err(e) => {
                    return vec![Check::new(
                        "base model",
                        spec.name.clone(),
                        Some(format!("error: {e}")),
                    )]
                }
            };
            let chern = sample_chern_classes(&base, *r, &mut rng);
            let inst = format!("{} r = {r}, c = ({})", spec.name, chern.join(", "));
            match crate::diffk::exp_basis_matrix(spec, *r, &chern) {
                Ok(s) => vec![
                    Check::new(
                        "e = f A and f = e A^-1",
                        inst.clone(),
                        (!s.verified).then(|| "identity fails".into()),
                    ),
                    Check::new(
                        "A A^-1 = 1",
                        inst.clone(),
                        (!crate::diffk::splitting::is_identity(
                            &crate::diffk::splitting::mat_mul_base(&s.base, &s.a, &s.a_inv),
                        ))
                        .then(|| "product is not the identity".into()),
                    ),
                    Check::new(
                        "1, c, ..., c^(r-1) is a free basis",
                        inst,
                        (!s.is_free())
                            .then(|| format!("rank {} of {}", s.module_rank, s.bundle.dim())),
                    ),
                ],
                Err(e) => vec![Check::new(
                    "exp basis matrix",
                    inst,
                    Some(format!("error: {e}")),
                )],
            }
        })
        .collect();
    report.checks = checks.into_iter().flatten().collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::contexts::BinomialRationals;

    fn model(name: &str) -> Arc<CdgaModel> {
        CdgaModel::builtin(name).unwrap()
    }

    #[test]
    fn witt_laws_over_rationals_and_gamma() {
        let o = SuiteOptions::new(8, 1, 6);
        let r = witt_laws(&BinomialRationals, &o);
        assert!(r.all_pass(), "{}", r.to_text());
        let r = witt_laws(
            &GammaRing::new(&model("torus2")),
            &SuiteOptions::new(4, 1, 4),
        );
        assert!(r.all_pass(), "{}", r.to_text());
    }

    #[test]
    fn small_suites_pass() {
        let o = SuiteOptions::new(4, 2, 4);
        for r in [
            gamma_suite(&model("s2"), &o),
            diffk_suite(&model("heis3"), &o, 3),
            adams_suite(&model("cp2"), &o),
            equivariant_suite(
                &model("torus2"),
                &AbelianGroup::parse("Z/2").unwrap(),
                &o,
                3,
            ),
            splitting_suite(3, 2),
        ] {
            assert!(r.all_pass(), "{}", r.to_text());
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let o = SuiteOptions::new(3, 9, 4);
        let m = model("heis3");
        assert_eq!(
            diffk_suite(&m, &o, 3).to_json(),
            diffk_suite(&m, &o, 3).to_json()
        );
    }
}
