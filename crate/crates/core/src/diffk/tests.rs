use super::*;
use crate::lambda::verify::sample_rng;
use crate::lambda::{verify_axioms, Mode, VerifyOptions};
use crate::ring::Ring;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn model(name: &str) -> Arc<CdgaModel> {
    CdgaModel::builtin(name).unwrap()
}

fn el(m: &Arc<CdgaModel>, s: &str) -> GradedElement {
    GradedElement::parse(m, s).unwrap()
}

fn triple(m: &Arc<CdgaModel>, roots: &[&str]) -> SplitTriple {
    SplitTriple::from_forms(m, &roots.iter().map(|s| el(m, s)).collect::<Vec<_>>()).unwrap()
}

fn coset(m: &Arc<CdgaModel>, s: &str) -> OddCoset {
    OddCoset::normalize(&el(m, s)).unwrap()
}

fn random_beta(m: &Arc<CdgaModel>, rng: &mut ChaCha8Rng) -> GradedElement {
    let mut b = GradedElement::zero(m);
    for i in m.degree_range(1) {
        let c: i64 = rng.gen_range(-2..=2);
        b = &b + &GradedElement::basis(m, i).scale(&Rational::from(c));
    }
    b
}

fn random_cycle(ring: &DiffKRing, rng: &mut ChaCha8Rng, rank: usize) -> DiffKCycle {
    let roots = (0..rank).map(|_| ring.sample_root(rng)).collect();
    DiffKCycle::new(
        SplitTriple::new(ring.model(), roots).unwrap(),
        ring.sample_phi(rng),
    )
    .unwrap()
}

#[test]
fn chern_character_examples() {
    let cp2 = model("cp2");
    assert_eq!(
        chern_character(&SplitTriple::trivial(&cp2, 3)),
        GradedElement::scalar(&cp2, Rational::from(3))
    );
    assert_eq!(
        chern_character(&triple(&cp2, &["x"])),
        el(&cp2, "1 + x + 1/2*x^2")
    );
    let cp4 = model("cp4");
    assert_eq!(
        chern_character(&triple(&cp4, &["x", "-x"])),
        el(&cp4, "2 + x^2 + 1/12*x^4")
    );
}

#[test]
fn chern_simons_transgresses() {
    for name in ["heis3", "nil5", "torus4"] {
        let m = model(name);
        let ring = DiffKRing::new(&m);
        let mut rng = sample_rng(21, 0);
        for _ in 0..20 {
            let e = random_cycle(&ring, &mut rng, 3).triple;
            let pert =
                Perturbation::new((0..3).map(|_| random_beta(&m, &mut rng)).collect()).unwrap();
            let cs = chern_simons(&e, &pert).unwrap();
            let e1 = perturb_triple(&e, &pert).unwrap();
            assert_eq!(
                cs.differential(),
                &chern_character(&e1) - &chern_character(&e)
            );
        }
        let e = triple(&m, &["0"]);
        assert!(chern_simons(&e, &Perturbation::zero(&m, 1))
            .unwrap()
            .is_zero());
        assert!(matches!(
            chern_simons(&e, &Perturbation::zero(&m, 2)),
            Err(Error::ArityMismatch { rank: 1, given: 2 })
        ));
    }
}

#[test]
fn chern_simons_of_a_single_line() {
    let m = model("nil5");
    let beta = el(&m, "e5");
    let e = triple(&m, &["0"]);
    let cs = chern_simons(&e, &Perturbation::new(vec![beta.clone()]).unwrap()).unwrap();
    let db = beta.differential();
    let expected = &beta
        * &(&(&GradedElement::one(&m) + &db.scale(&Rational::new(1, 2).unwrap()))
            + &(&db * &db).scale(&Rational::new(1, 6).unwrap()));
    assert_eq!(cs, OddCoset::normalize(&expected).unwrap());
    assert_eq!(
        cs.differential(),
        &db.exp_nilpotent().unwrap() - &GradedElement::one(&m)
    );
}

#[test]
fn cup_product_examples() {
    let m = model("nil5");
    let e =
        DiffKClass::from_cycle(&DiffKCycle::of_triple(triple(&m, &["e2*e3", "e1*e5"]))).unwrap();
    assert!(e.phi().is_zero());
    let psi = coset(&m, "e4");
    let phi = coset(&m, "e5");
    let prod = cycle_mul(&e, &map_a(&psi)).unwrap();
    let expected = OddCoset::of_odd_part(&(&e.chern_character() * psi.representative()));
    assert_eq!(prod, map_a(&expected));
    let h = model("heis3");
    let c = coset(&h, "c + a");
    let pp = cycle_mul(&map_a(&c), &map_a(&c)).unwrap();
    assert_eq!(pp, map_a(&coset(&h, "-a*b*c")));
    let a = e.add(&map_a(&phi)).unwrap();
    assert_eq!(cycle_mul(&a, &DiffKClass::one(&m)).unwrap(), a);
}

#[test]
fn cycle_level_cup_matches_class_product() {
    let m = model("heis3");
    let ring = DiffKRing::new(&m);
    let mut rng = sample_rng(2, 0);
    for _ in 0..10 {
        let c1 = random_cycle(&ring, &mut rng, 2);
        let c2 = random_cycle(&ring, &mut rng, 2);
        let a = DiffKClass::from_cycle(&c1.cup(&c2).unwrap()).unwrap();
        let b = cycle_mul(
            &DiffKClass::from_cycle(&c1).unwrap(),
            &DiffKClass::from_cycle(&c2).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn lambda_of_lines_and_pure_forms() {
    let m = model("cp3");
    let l = DiffKClass::line(&LineRoot::new(el(&m, "2*x")).unwrap());
    for k in 2..=4 {
        assert_eq!(cycle_lambda(k, &l), DiffKClass::zero(&m));
    }
    assert_eq!(cycle_lambda(1, &l), l);
    let e = triple(&m, &["x", "-x", "0"]);
    let c = DiffKClass::from_cycle(&DiffKCycle::of_triple(e.clone())).unwrap();
    for k in 0..=3 {
        let expected = DiffKClass::from_cycle(&DiffKCycle::of_triple(e.exterior_power(k))).unwrap();
        assert_eq!(cycle_lambda(k, &c), expected);
    }
    let n = model("nil5");
    let phi = coset(&n, "e3 + e4");
    let g = GammaElement::from_coset(&phi);
    for k in 1..=3 {
        assert_eq!(
            cycle_lambda(k, &map_a(&phi)),
            map_a(&crate::gamma::gamma_lambda(k, &g).odd())
        );
    }
}

#[test]
fn lambda_t_of_one_and_inverse() {
    let m = model("heis3");
    let ring = DiffKRing::new(&m);
    let one = lambda_t_cycle(&DiffKClass::one(&m), 4);
    assert_eq!(one, LambdaSeries::one(&ring, 4));
    let mut rng = sample_rng(5, 0);
    for _ in 0..5 {
        let a = ring.sample_class(&mut rng);
        let s = series::series_mul(
            &ring,
            lambda_t_cycle(&a, 4).series(),
            lambda_t_cycle(&a.neg(), 4).series(),
        )
        .unwrap();
        assert_eq!(s, series::TruncSeries::one(&ring, 4));
    }
}

#[test]
fn normal_form_absorbs_perturbations() {
    for name in ["heis3", "nil5"] {
        let m = model(name);
        let ring = DiffKRing::new(&m);
        let mut rng = sample_rng(8, 1);
        for _ in 0..20 {
            let c = random_cycle(&ring, &mut rng, 3);
            let pert =
                Perturbation::new((0..3).map(|_| random_beta(&m, &mut rng)).collect()).unwrap();
            let c1 = c.perturb(&pert).unwrap();
            let a = DiffKClass::from_cycle(&c).unwrap();
            assert_eq!(DiffKClass::from_cycle(&c1).unwrap(), a);
            assert_eq!(a.normal_form(), a);
            for k in 0..=3 {
                assert_eq!(
                    DiffKClass::from_cycle(&c1.lambda(k)).unwrap(),
                    DiffKClass::from_cycle(&c.lambda(k)).unwrap()
                );
            }
        }
    }
}

#[test]
fn stabilization_cancels() {
    let m = model("heis3");
    let e = DiffKCycle::new(triple(&m, &["a*b"]), coset(&m, "c")).unwrap();
    let g = triple(&m, &["a*c", "0"]);
    let plus = DiffKCycle::new(e.triple.direct_sum(&g), e.phi.clone()).unwrap();
    let nf = normal_form(&plus, &DiffKCycle::of_triple(g)).unwrap();
    assert_eq!(nf, DiffKClass::from_cycle(&e).unwrap());
}

#[test]
fn exact_root_is_trivial_up_to_chern_simons() {
    let m = model("heis3");
    // a*b = dc, so L(a*b) ~ (C, -CS) where CS = c - ...
    let l = DiffKClass::from_cycle(&DiffKCycle::of_triple(triple(&m, &["a*b"]))).unwrap();
    assert_eq!(l.roots().len(), 1);
    assert_eq!(l.rank(), 1);
    assert!(!l.phi().is_zero());
    assert_eq!(curvature_map(&l), el(&m, "1 + a*b"));
}

#[test]
fn curvature_and_forgetful_maps() {
    let m = model("nil5");
    let ring = DiffKRing::new(&m);
    let mut rng = sample_rng(13, 0);
    for _ in 0..10 {
        let a = ring.sample_class(&mut rng);
        let b = ring.sample_class(&mut rng);
        assert!(curvature_map(&a).is_closed());
        for k in 1..=3 {
            assert_eq!(
                curvature_map(&cycle_adams(k, &a)),
                crate::gamma::z_adams(k, &curvature_map(&a))
            );
            assert_eq!(map_I(&cycle_adams(k, &a)), map_I(&a).adams(k));
        }
        assert_eq!(
            map_I(&cycle_mul(&a, &b).unwrap()),
            map_I(&a).mul(&map_I(&b))
        );
        assert_eq!(
            curvature_map(&cycle_mul(&a, &b).unwrap()),
            &curvature_map(&a) * &curvature_map(&b)
        );
    }
    let phi = coset(&m, "e4");
    assert_eq!(curvature_map(&map_a(&phi)), -&phi.differential());
    assert!(map_I(&map_a(&phi)).is_zero());
    assert_eq!(curvature_map(&DiffKClass::one(&m)), GradedElement::one(&m));
}

#[test]
fn adams_of_line_is_power() {
    let m = model("cp3");
    let l = DiffKClass::line(&LineRoot::new(el(&m, "x")).unwrap());
    let ring = DiffKRing::new(&m);
    for k in 1..=4 {
        assert_eq!(cycle_adams(k, &l), ring.pow(&l, k as u32));
    }
}

#[test]
fn json_roundtrip() {
    let m = model("heis3");
    let ring = DiffKRing::new(&m);
    let mut rng = sample_rng(3, 3);
    for _ in 0..5 {
        let a = ring.sample_class(&mut rng);
        assert_eq!(DiffKClass::from_json(&m, &a.to_json()).unwrap(), a);
    }
    assert!(DiffKClass::from_json(&model("s2"), &DiffKClass::one(&m).to_json()).is_err());
}

#[test]
fn pullback_is_natural_for_adams() {
    let catalog = crate::cdga::morphism_catalog().unwrap();
    let f = catalog.iter().find(|f| f.name() == "heis3-scale").unwrap();
    let ring = DiffKRing::new(f.source());
    let mut rng = sample_rng(6, 0);
    for _ in 0..5 {
        let a = ring.sample_class(&mut rng);
        for k in 1..=3 {
            assert_eq!(
                cycle_adams(k, &a).pullback(f).unwrap(),
                cycle_adams(k, &a.pullback(f).unwrap())
            );
        }
    }
}

#[test]
fn lambda_ring_axioms_small() {
    for name in ["heis3", "torus2", "cp2"] {
        let ring = DiffKRing::new(&model(name));
        let mut o = VerifyOptions::new(Mode::Lambda, 6, 17, 4);
        o.mul_trunc = Some(3);
        let r = verify_axioms(&ring, &o);
        assert!(r.all_pass(), "{}", r.to_text());
        let r = verify_axioms(&ring, &VerifyOptions::new(Mode::AdamsCriterion, 6, 17, 4));
        assert!(r.all_pass(), "{}", r.to_text());
    }
}
