//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use lambda_forge::cdga::CdgaModel;
use lambda_forge::diffk::{DiffKClass, DiffKRing};
use lambda_forge::gamma::{GammaElement, GammaRing};
use lambda_forge::lambda::verify::sample_rng;
use lambda_forge::lambda::{LambdaContext, LambdaSeries};

pub fn model(name: &str) -> Arc<CdgaModel> {
    CdgaModel::builtin(name).expect("built-in model")
}

pub fn diffk_pair(name: &str, seed: u64) -> (DiffKRing, DiffKClass, DiffKClass) {
    let ring = DiffKRing::new(&model(name));
    let mut rng = sample_rng(seed, 0);
    let a = ring.sample_class(&mut rng);
    let b = ring.sample_class(&mut rng);
    (ring, a, b)
}

pub fn gamma_pair(name: &str, seed: u64) -> (GammaRing, GammaElement, GammaElement) {
    let ring = GammaRing::new(&model(name));
    let mut rng = sample_rng(seed, 0);
    let a = ring.sample(&mut rng);
    let b = ring.sample(&mut rng);
    (ring, a, b)
}

/// A series `1 + a_1 t + ... + a_n t^n` with sampled coefficients.
pub fn series<C: LambdaContext>(ctx: &C, n: usize, seed: u64) -> LambdaSeries<C::Elem> {
    let mut rng = sample_rng(seed, 1);
    let tail = (0..n).map(|_| ctx.sample(&mut rng)).collect();
    LambdaSeries::from_tail(ctx, tail)
}
