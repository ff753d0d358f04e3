//! Sample-based verification of the pre-λ, λ and Adams axioms.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{adams_via_log, witt_lambda, witt_mul, LambdaContext, LambdaSeries};
use crate::series::{self, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PreLambda,
    Lambda,
    AdamsCriterion,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::PreLambda => "pre-lambda",
            Mode::Lambda => "lambda",
            Mode::AdamsCriterion => "adams-criterion",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub axiom: String,
    pub instance: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(axiom: &str, instance: impl Into<String>, witness: Option<String>) -> Self {
        Check {
            axiom: axiom.into(),
            instance: instance.into(),
            pass: witness.is_none(),
            witness,
        }
    }

    pub fn from_result(
        axiom: &str,
        instance: impl Into<String>,
        r: crate::error::Result<Option<String>>,
    ) -> Self {
        match r {
            Ok(w) => Self::new(axiom, instance, w),
            Err(e) => Self::new(axiom, instance, Some(format!("error: {e}"))),
        }
    }
}

/// Outcome of a verification run. Serialized field order is fixed, so equal
/// runs produce byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub mode: String,
    pub context: String,
    pub seed: u64,
    pub truncation: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(mode: &str, context: &str, seed: u64, truncation: usize) -> Self {
        Report {
            mode: mode.into(),
            context: context.into(),
            seed,
            truncation,
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} on {} (seed {}, N = {}): {}/{} checks pass\n",
            self.mode,
            self.context,
            self.seed,
            self.truncation,
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        );
        for c in self.failures() {
            out.push_str(&format!(
                "FAIL {} [{}]: {}\n",
                c.axiom,
                c.instance,
                c.witness.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

const WITNESS_LIMIT: usize = 600;

pub(crate) fn clip(s: String) -> String {
    if s.len() <= WITNESS_LIMIT {
        return s;
    }
    let mut end = WITNESS_LIMIT;
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    format!("{}...", &s[..end])
}

/// The per-sample generator: stream `index` of the ChaCha generator seeded
/// with `seed`, so samples are independent of evaluation order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    /// Truncation order `N` for `λ_t`.
    pub trunc: usize,
    /// Order up to which `λ_t(xy) = λ_t(x) ×̃ λ_t(y)` is checked; defaults to
    /// `trunc`.
    pub mul_trunc: Option<usize>,
}

impl VerifyOptions {
    pub fn new(mode: Mode, samples: usize, seed: u64, trunc: usize) -> Self {
        VerifyOptions {
            mode,
            samples,
            seed,
            trunc,
            mul_trunc: None,
        }
    }
}

fn series_mismatch<C: LambdaContext + ?Sized>(
    ctx: &C,
    lhs: &[C::Elem],
    rhs: &[C::Elem],
) -> Option<String> {
    if lhs.len() != rhs.len() {
        return Some(format!("lengths {} vs {}", lhs.len(), rhs.len()));
    }
    let n = lhs.iter().zip(rhs).position(|(a, b)| a != b)?;
    Some(clip(format!(
        "coefficient t^{n}: {} != {}",
        ctx.describe(&lhs[n]),
        ctx.describe(&rhs[n])
    )))
}

fn elem_mismatch<C: LambdaContext + ?Sized>(
    ctx: &C,
    lhs: &C::Elem,
    rhs: &C::Elem,
) -> Option<String> {
    (lhs != rhs).then(|| clip(format!("{} != {}", ctx.describe(lhs), ctx.describe(rhs))))
}

fn with_sample<C: LambdaContext + ?Sized>(
    ctx: &C,
    x: &C::Elem,
    w: Option<String>,
) -> Option<String> {
    w.map(|w| clip(format!("x = {}; {w}", ctx.describe(x))))
}

/// Checks the axioms of `opts.mode` on `opts.samples` seeded samples.
///
/// Failures are report entries, never errors: an operation that errors (for
/// instance a λ_t without constant term one) fails its check with the error
/// as witness.
///
/// `Mode::AdamsCriterion` only implies the λ-ring axioms when the ring is
/// torsion free. That holds for every Q-linear context here; it is not
/// checked for other contexts.
pub fn verify_axioms<C: LambdaContext + ?Sized>(ctx: &C, opts: &VerifyOptions) -> Report {
    let n = opts.trunc;
    let mut report = Report::new(opts.mode.as_str(), &ctx.name(), opts.seed, n);

    // Sample-independent checks.
    let zero = ctx.zero();
    let one_series = LambdaSeries::one(ctx, n);
    report.checks.push(Check::new(
        "lambda_t(0) = 1",
        "x = 0",
        series_mismatch(
            ctx,
            ctx.lambda_series(&zero, n).coeffs(),
            TruncSeries::one(ctx, n).coeffs(),
        ),
    ));
    if opts.mode != Mode::PreLambda {
        report.checks.push(Check::new(
            "lambda_t(1) = 1 + t",
            "x = 1",
            series_mismatch(
                ctx,
                ctx.lambda_series(&ctx.one(), n).coeffs(),
                one_series.coeffs(),
            ),
        ));
    }
    if opts.mode == Mode::AdamsCriterion {
        let w = super::lambda_t(ctx, &ctx.one(), n)
            .and_then(|s| adams_via_log(ctx, &s))
            .map(|psi| {
                let ones = vec![ctx.one(); psi.len()];
                series_mismatch(ctx, &psi, &ones)
            });
        report
            .checks
            .push(Check::from_result("Psi^n(1) = 1", "x = 1", w));
    }

    let per_sample: Vec<Vec<Check>> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(opts.seed, i as u64);
            let x = ctx.sample(&mut rng);
            let y = ctx.sample(&mut rng);
            match opts.mode {
                Mode::PreLambda => pre_lambda_checks(ctx, i, &x, &y, n),
                Mode::Lambda => {
                    let mut c = pre_lambda_checks(ctx, i, &x, &y, n);
                    c.extend(lambda_checks(
                        ctx,
                        i,
                        &x,
                        &y,
                        n,
                        opts.mul_trunc.unwrap_or(n),
                    ));
                    c
                }
                Mode::AdamsCriterion => adams_checks(ctx, i, &x, &y, n),
            }
        })
        .collect();
    report.checks.extend(per_sample.into_iter().flatten());
    report
}

fn pre_lambda_checks<C: LambdaContext + ?Sized>(
    ctx: &C,
    i: usize,
    x: &C::Elem,
    y: &C::Elem,
    n: usize,
) -> Vec<Check> {
    let inst = format!("sample {i}");
    let mut out = Vec::new();
    let lx = ctx.lambda_series(x, n);
    out.push(Check::new(
        "lambda^0(x) = 1",
        inst.clone(),
        with_sample(ctx, x, elem_mismatch(ctx, lx.coeff(0), &ctx.one())),
    ));
    if n >= 1 {
        out.push(Check::new(
            "lambda^1(x) = x",
            inst.clone(),
            with_sample(ctx, x, elem_mismatch(ctx, lx.coeff(1), x)),
        ));
    }
    let ly = ctx.lambda_series(y, n);
    let lxy = ctx.lambda_series(&ctx.add(x, y), n);
    let w = series::series_mul(ctx, &lx, &ly)
        .map(|prod| series_mismatch(ctx, lxy.coeffs(), prod.coeffs()));
    out.push(Check::from_result(
        "lambda_t(x + y) = lambda_t(x) lambda_t(y)",
        format!("{inst}, up to t^{n}"),
        w.map(|o| with_sample(ctx, x, o)),
    ));
    out
}

fn lambda_checks<C: LambdaContext + ?Sized>(
    ctx: &C,
    i: usize,
    x: &C::Elem,
    y: &C::Elem,
    n: usize,
    mul_n: usize,
) -> Vec<Check> {
    let inst = format!("sample {i}");
    let mut out = Vec::new();
    let mul = (|| {
        let lx = super::lambda_t(ctx, x, mul_n)?;
        let ly = super::lambda_t(ctx, y, mul_n)?;
        let lxy = ctx.lambda_series(&ctx.mul(x, y), mul_n);
        let rhs = witt_mul(ctx, &lx, &ly)?;
        Ok(series_mismatch(ctx, lxy.coeffs(), rhs.coeffs()))
    })();
    out.push(Check::from_result(
        "lambda_t(xy) = lambda_t(x) *~ lambda_t(y)",
        format!("{inst}, up to t^{mul_n}"),
        mul.map(|o| with_sample(ctx, x, o)),
    ));
    for m in 2..=n {
        let k = n / m;
        let comp = (|| {
            let lx = super::lambda_t(ctx, x, n)?;
            let rhs = witt_lambda(ctx, m, &lx)?;
            let lm = ctx.lambda(m, x);
            let lhs = ctx.lambda_series(&lm, k);
            Ok(series_mismatch(ctx, lhs.coeffs(), rhs.coeffs()))
        })();
        out.push(Check::from_result(
            "lambda_t(lambda^m x) = lambda~^m(lambda_t x)",
            format!("{inst}, m = {m}, up to t^{k}"),
            comp.map(|o| with_sample(ctx, x, o)),
        ));
    }
    out
}

fn adams_checks<C: LambdaContext + ?Sized>(
    ctx: &C,
    i: usize,
    x: &C::Elem,
    y: &C::Elem,
    n: usize,
) -> Vec<Check> {
    let inst = format!("sample {i}");
    let psi = |e: &C::Elem| super::lambda_t(ctx, e, n).and_then(|s| adams_via_log(ctx, &s));
    let mut out = Vec::new();
    let r = (|| -> crate::error::Result<_> {
        let px = psi(x)?;
        let py = psi(y)?;
        let sum = psi(&ctx.add(x, y))?;
        let prod = psi(&ctx.mul(x, y))?;
        let add_rhs: Vec<C::Elem> = px.iter().zip(&py).map(|(a, b)| ctx.add(a, b)).collect();
        let mul_rhs: Vec<C::Elem> = px.iter().zip(&py).map(|(a, b)| ctx.mul(a, b)).collect();
        let mut comp = None;
        for m in 1..=n {
            let pm = psi(&px[m - 1])?;
            for k in 1..=n / m {
                if comp.is_none() && pm[k - 1] != px[k * m - 1] {
                    comp = Some(clip(format!(
                        "Psi^{k}(Psi^{m} x) = {} but Psi^{} x = {}",
                        ctx.describe(&pm[k - 1]),
                        k * m,
                        ctx.describe(&px[k * m - 1])
                    )));
                }
            }
        }
        let has_native = ctx.adams(1, x).is_some();
        let mut native = None;
        for k in 1..=n {
            if let Some(v) = ctx.adams(k, x) {
                if native.is_none() && v != px[k - 1] {
                    native = Some(clip(format!(
                        "native Psi^{k} x = {} but log-derived = {}",
                        ctx.describe(&v),
                        ctx.describe(&px[k - 1])
                    )));
                }
            }
        }
        Ok((
            series_mismatch(ctx, &sum, &add_rhs),
            series_mismatch(ctx, &prod, &mul_rhs),
            comp,
            has_native.then_some(native),
        ))
    })();
    let names = [
        "Psi^n(x + y) = Psi^n x + Psi^n y",
        "Psi^n(xy) = Psi^n x Psi^n y",
        "Psi^n(Psi^m x) = Psi^nm x",
        "native Psi^n agrees with log derivative",
    ];
    match r {
        Ok((a, b, c, d)) => {
            for (name, w) in names.iter().zip([Some(a), Some(b), Some(c), d]) {
                if let Some(w) = w {
                    out.push(Check::new(
                        name,
                        format!("{inst}, up to n = {n}"),
                        with_sample(ctx, x, w),
                    ));
                }
            }
        }
        Err(e) => {
            for name in names {
                out.push(Check::new(name, inst.clone(), Some(format!("error: {e}"))));
            }
        }
    }
    out
}
