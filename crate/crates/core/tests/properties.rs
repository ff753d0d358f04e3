use std::sync::Arc;

use proptest::prelude::*;

use lambda_forge::cdga::{CdgaModel, GradedElement, OddCoset};
use lambda_forge::diffk::{cycle_mul, DiffKClass, DiffKCycle, DiffKRing, SplitTriple};
use lambda_forge::equivariant::{rep_mul, AbelianGroup, RepRingElement};
use lambda_forge::gamma::{gamma_adams, gamma_mul, GammaRing};
use lambda_forge::lambda::contexts::BinomialRationals;
use lambda_forge::lambda::verify::sample_rng;
use lambda_forge::lambda::{
    adams_via_log, lambda_from_adams, witt_add, witt_mul, LambdaContext, LambdaSeries,
};
use lambda_forge::series::{series_invert, series_mul};
use lambda_forge::suites::sample_perturbation;
use lambda_forge::{MultiPoly, Rational, RationalField, TruncSeries};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    let vars = || vec!["x".to_string(), "y".to_string(), "z".to_string()];
    prop::collection::vec((prop::collection::vec(0u32..3, 3), rational()), 0..5)
        .prop_map(move |terms| MultiPoly::from_terms(vars(), terms))
}

fn unit_series(n: usize) -> impl Strategy<Value = TruncSeries<Rational>> {
    prop::collection::vec(rational(), n).prop_map(|tail| {
        let mut c = vec![Rational::one()];
        c.extend(tail);
        TruncSeries::from_coeffs(c)
    })
}

fn model(name: &str) -> Arc<CdgaModel> {
    CdgaModel::builtin(name).unwrap()
}

fn random_form(m: &Arc<CdgaModel>, seed: u64) -> GradedElement {
    use rand::Rng;
    let mut rng = sample_rng(seed, 0);
    let mut x = GradedElement::zero(m);
    for i in 0..m.dim() {
        let c: i64 = rng.gen_range(-2..=2);
        x = &x + &GradedElement::basis(m, i).scale(&Rational::from(c));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poly_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.add(&q).mul(&r), p.mul(&r).add(&q.mul(&r)));
        prop_assert_eq!(MultiPoly::from_json(&p.to_json()).unwrap().to_json(), p.to_json());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), vals in prop::collection::vec(rational(), 3)) {
        let assign = |v: &str| match v { "x" => Some(vals[0].clone()), "y" => Some(vals[1].clone()), _ => Some(vals[2].clone()) };
        let lhs = p.mul(&q).eval_in(&RationalField, assign).unwrap();
        let rhs = p.eval_in(&RationalField, assign).unwrap() * q.eval_in(&RationalField, assign).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_series_form_a_group(f in unit_series(6), g in unit_series(6), h in unit_series(6)) {
        let q = RationalField;
        let one = TruncSeries::one(&q, 6);
        let inv = series_invert(&q, &f).unwrap();
        prop_assert_eq!(series_mul(&q, &f, &inv).unwrap(), one);
        prop_assert_eq!(series_invert(&q, &inv).unwrap(), f.clone());
        prop_assert_eq!(series_mul(&q, &f, &g).unwrap(), series_mul(&q, &g, &f).unwrap());
        let fg_h = series_mul(&q, &series_mul(&q, &f, &g).unwrap(), &h).unwrap();
        let f_gh = series_mul(&q, &f, &series_mul(&q, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(fg_h, f_gh);
    }

    #[test]
    fn adams_log_roundtrip(psi in prop::collection::vec(rational(), 5)) {
        let q = BinomialRationals;
        let s = lambda_from_adams(&q, &psi, 5).unwrap();
        prop_assert_eq!(adams_via_log(&q, &s).unwrap(), psi);
    }

    #[test]
    fn witt_operations_commute(f in unit_series(5), g in unit_series(5)) {
        let q = RationalField;
        let (i, j) = (LambdaSeries::new(&q, f).unwrap(), LambdaSeries::new(&q, g).unwrap());
        prop_assert_eq!(witt_add(&q, &i, &j).unwrap(), witt_add(&q, &j, &i).unwrap());
        prop_assert_eq!(witt_mul(&q, &i, &j).unwrap(), witt_mul(&q, &j, &i).unwrap());
        let unit = LambdaSeries::linear(&q, Rational::one(), 5);
        prop_assert_eq!(witt_mul(&q, &unit, &i).unwrap(), i);
    }

    #[test]
    fn cdga_structure(seed in any::<u64>(), name in prop::sample::select(vec!["torus4", "s2", "heis3", "nil5", "cp1xcp1"])) {
        let m = model(name);
        let a = random_form(&m, seed);
        let b = random_form(&m, seed.wrapping_add(1));
        prop_assert!(a.differential().differential().is_zero());
        // Leibniz and graded commutativity on homogeneous components
        for k in 0..=m.top_degree() {
            for l in 0..=m.top_degree() {
                let (x, y) = (a.component(k), b.component(l));
                let sign = if k % 2 == 1 { Rational::from(-1) } else { Rational::one() };
                let lhs = (&x * &y).differential();
                let rhs = &(&x.differential() * &y) + &(&x * &y.differential()).scale(&sign);
                prop_assert_eq!(lhs, rhs);
                let swap = if k * l % 2 == 1 { Rational::from(-1) } else { Rational::one() };
                prop_assert_eq!(&x * &y, (&y * &x).scale(&swap));
            }
        }
        let odd = a.odd_part();
        let c = OddCoset::normalize(&odd).unwrap();
        prop_assert_eq!(OddCoset::normalize(c.representative()).unwrap(), c.clone());
        let shifted = &odd + &a.even_part().differential();
        prop_assert_eq!(OddCoset::normalize(&shifted).unwrap(), c);
    }

    #[test]
    fn gamma_product_is_a_commutative_ring(seed in any::<u64>(), name in prop::sample::select(vec!["torus4", "heis3", "nil5"])) {
        let ring = GammaRing::new(&model(name));
        let mut rng = sample_rng(seed, 0);
        let (x, y, z) = (ring.sample(&mut rng), ring.sample(&mut rng), ring.sample(&mut rng));
        prop_assert_eq!(gamma_mul(&x, &y).unwrap(), gamma_mul(&y, &x).unwrap());
        prop_assert_eq!(
            gamma_mul(&gamma_mul(&x, &y).unwrap(), &z).unwrap(),
            gamma_mul(&x, &gamma_mul(&y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(gamma_adams(3, &gamma_mul(&x, &y).unwrap()), gamma_mul(&gamma_adams(3, &x), &gamma_adams(3, &y)).unwrap());
    }

    #[test]
    fn class_normal_forms(seed in any::<u64>(), name in prop::sample::select(vec!["heis3", "nil5", "torus4"])) {
        let m = model(name);
        let ring = DiffKRing::new(&m);
        let mut rng = sample_rng(seed, 0);
        let (a, b) = (ring.sample_class(&mut rng), ring.sample_class(&mut rng));
        prop_assert_eq!(cycle_mul(&a, &b).unwrap(), cycle_mul(&b, &a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a.clone());
        prop_assert_eq!(DiffKClass::from_json(&m, &a.to_json()).unwrap(), a.clone());
        let roots = (0..2).map(|_| ring.sample_root(&mut rng)).collect();
        let c = DiffKCycle::new(SplitTriple::new(&m, roots).unwrap(), ring.sample_phi(&mut rng)).unwrap();
        let moved = c.perturb(&sample_perturbation(&m, 2, &mut rng)).unwrap();
        prop_assert_eq!(DiffKClass::from_cycle(&moved).unwrap(), DiffKClass::from_cycle(&c).unwrap());
    }

    #[test]
    fn character_arithmetic(free in -5i64..=5, r1 in 0i64..6, r2 in 0i64..6, k in 1i64..7) {
        let g = AbelianGroup::parse("ZxZ/2xZ/3").unwrap();
        let c = g.character(&[free], &[r1, r2]).unwrap();
        // 6 kills the torsion part
        prop_assert_eq!(g.scale(6, &c), g.character(&[6 * free], &[0, 0]).unwrap());
        prop_assert_eq!(g.scale(k, &g.add(&c, &c)), g.scale(2 * k, &c));
        let u = RepRingElement::character(&g, c.clone());
        let v = RepRingElement::character(&g, g.scale(k, &c));
        prop_assert_eq!(rep_mul(&u, &v).unwrap(), rep_mul(&v, &u).unwrap());
        prop_assert_eq!(rep_mul(&u, &RepRingElement::one(&g)).unwrap(), u.clone());
        prop_assert_eq!(u.adams(k as usize), v);
    }
}
