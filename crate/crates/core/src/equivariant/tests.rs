use super::*;
use crate::cdga::{GradedElement, OddCoset};
use crate::diffk::{LineRoot, Perturbation};
use crate::lambda::verify::sample_rng;
use crate::lambda::{verify_axioms, Mode, VerifyOptions};
use rand::Rng;

fn model(name: &str) -> Arc<CdgaModel> {
    CdgaModel::builtin(name).unwrap()
}

fn el(m: &Arc<CdgaModel>, s: &str) -> GradedElement {
    GradedElement::parse(m, s).unwrap()
}

#[test]
fn groups_parse_and_print() {
    for s in ["Z", "Z/2", "ZxZ/3", "Z^2xZ/4", "1"] {
        assert_eq!(AbelianGroup::parse(s).unwrap().to_string(), s);
    }
    assert!(AbelianGroup::parse("Q").is_err());
    assert!(AbelianGroup::new(0, vec![1]).is_err());
}

#[test]
fn rep_ring_products() {
    let g = AbelianGroup::parse("ZxZ/3").unwrap();
    let a = g.character(&[2], &[1]).unwrap();
    let b = g.character(&[-1], &[2]).unwrap();
    let u = RepRingElement::character(&g, a.clone());
    assert_eq!(rep_mul(&u, &RepRingElement::one(&g)).unwrap(), u);
    let p = rep_mul(&u, &RepRingElement::character(&g, b)).unwrap();
    assert_eq!(
        p,
        RepRingElement::character(&g, g.character(&[1], &[0]).unwrap())
    );
    let z2 = AbelianGroup::parse("Z/2").unwrap();
    let t = RepRingElement::character(&z2, z2.character(&[], &[1]).unwrap());
    assert_eq!(rep_mul(&t, &t).unwrap(), RepRingElement::one(&z2));
    assert!(matches!(rep_mul(&t, &u), Err(Error::GroupMismatch)));
    assert_eq!(g.scale(3, &a), g.character(&[6], &[0]).unwrap());
}

#[test]
fn equivariant_chern_character() {
    let m = model("s2");
    let g = AbelianGroup::parse("Z/2").unwrap();
    let x = LineRoot::new(el(&m, "x")).unwrap();
    let c1 = g.character(&[], &[1]).unwrap();
    let t = EquivTriple::new(&m, &g, vec![(x.clone(), c1.clone())]).unwrap();
    let ch = ch_tg(&t);
    assert_eq!(ch.len(), 1);
    assert_eq!(ch[&c1], el(&m, "1 + x + 1/2*x^2"));
    let triv = EquivTriple::new(&m, &g, vec![(x.clone(), g.zero()), (x, g.zero())]).unwrap();
    assert_eq!(ch_tg(&triv)[&g.zero()], el(&m, "2 + 2*x + x^2"));
}

#[test]
fn equivariant_chern_simons() {
    let m = model("heis3");
    let g = AbelianGroup::parse("ZxZ/3").unwrap();
    let ring = EquivRing::new(&m, &g);
    let mut rng = sample_rng(4, 0);
    for _ in 0..20 {
        let c = ring.sample_cycle(&mut rng, 3);
        let betas = (0..3)
            .map(|_| {
                let a: i64 = rng.gen_range(-2..=2);
                let b: i64 = rng.gen_range(-2..=2);
                el(&m, &format!("{a}*a + {b}*c"))
            })
            .collect();
        let pert = Perturbation::new(betas).unwrap();
        let c1 = c.perturb(&pert).unwrap();
        let cs = equiv_chern_simons(&c.triple, &pert).unwrap();
        let (e0, e1) = (ch_tg(&c.triple), ch_tg(&c1.triple));
        let mut chars: Vec<_> = e0
            .keys()
            .chain(e1.keys())
            .chain(cs.keys())
            .cloned()
            .collect();
        chars.dedup();
        for ch in chars {
            let z = GradedElement::zero(&m);
            let diff = e1.get(&ch).unwrap_or(&z) - e0.get(&ch).unwrap_or(&z);
            let dcs = cs.get(&ch).map(OddCoset::differential).unwrap_or(z);
            assert_eq!(dcs, diff);
        }
        assert_eq!(
            EquivClass::from_cycle(&c1).unwrap(),
            EquivClass::from_cycle(&c).unwrap()
        );
        for k in 0..=3 {
            assert_eq!(
                EquivClass::from_cycle(&c1.lambda(k)).unwrap(),
                EquivClass::from_cycle(&c.lambda(k)).unwrap()
            );
        }
    }
}

#[test]
fn cup_of_pure_forms() {
    let m = model("heis3");
    let g = AbelianGroup::parse("Z").unwrap();
    let (c, d) = (
        g.character(&[1], &[]).unwrap(),
        g.character(&[2], &[]).unwrap(),
    );
    let phi = OddCoset::normalize(&el(&m, "c")).unwrap();
    let psi = OddCoset::normalize(&el(&m, "c + b")).unwrap();
    let p = equiv_cycle_mul(
        &EquivClass::map_a(&g, c, &phi),
        &EquivClass::map_a(&g, d, &psi),
    )
    .unwrap();
    let expected = OddCoset::of_odd_part(&-&(&phi.differential() * psi.representative()));
    assert!(!expected.is_zero());
    assert_eq!(
        p,
        EquivClass::map_a(&g, g.character(&[3], &[]).unwrap(), &expected)
    );
}

#[test]
fn unit_line_and_adams() {
    let m = model("torus2");
    let g = AbelianGroup::parse("ZxZ/3").unwrap();
    let ring = EquivRing::new(&m, &g);
    let mut rng = sample_rng(7, 0);
    let gamma = g.character(&[1], &[2]).unwrap();
    let line = EquivClass::line(
        &g,
        &LineRoot::new(el(&m, "dx1*dx2")).unwrap(),
        gamma.clone(),
    )
    .unwrap();
    for k in 2..=4 {
        assert_eq!(equiv_lambda(k, &line), ring.zero());
    }
    let l2 = EquivClass::line(
        &g,
        &LineRoot::new(el(&m, "2*dx1*dx2")).unwrap(),
        g.scale(2, &gamma),
    )
    .unwrap();
    assert_eq!(equiv_adams(2, &line), l2);
    for _ in 0..10 {
        let a = ring.sample_class(&mut rng);
        assert_eq!(equiv_cycle_mul(&a, &ring.one()).unwrap(), a);
        assert_eq!(equiv_lambda(1, &a), a);
        assert_eq!(equiv_adams(1, &a), a);
        assert_eq!(equiv_adams(2, &equiv_adams(3, &a)), equiv_adams(6, &a));
    }
}

#[test]
fn gamma_g_and_classes_are_lambda_rings() {
    for (name, group) in [("torus2", "Z/2"), ("heis3", "ZxZ/3")] {
        let m = model(name);
        let g = AbelianGroup::parse(group).unwrap();
        let r = verify_axioms(
            &GammaGRing::new(&m, &g),
            &VerifyOptions::new(Mode::Lambda, 6, 3, 4),
        );
        assert!(r.all_pass(), "{}", r.to_text());
        let mut o = VerifyOptions::new(Mode::Lambda, 6, 3, 4);
        o.mul_trunc = Some(3);
        let r = verify_axioms(&EquivRing::new(&m, &g), &o);
        assert!(r.all_pass(), "{}", r.to_text());
    }
}
