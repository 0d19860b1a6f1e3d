use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::rng::Rng;
use crate::sampling::{random_form, random_integrable_sd, random_sd, random_vector};
use crate::Scalar;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn w(cf: &std::sync::Arc<Coframe>, i: usize) -> Form {
    Form::basis(cf, i - 1)
}

fn mono(cf: &std::sync::Arc<Coframe>, c: i64, idx: &[usize]) -> Form {
    let idx: Vec<usize> = idx.iter().map(|i| i - 1).collect();
    Form::monomial(cf, s(c), &idx)
}

fn e(n: usize, i: usize) -> Vector {
    Vector::basis(n, i - 1)
}

#[test]
fn wedge_examples() {
    let cf = Coframe::standard(3);
    assert_eq!(w(&cf, 1).wedge(&w(&cf, 2)).unwrap(), mono(&cf, 1, &[1, 2]));
    assert_eq!(w(&cf, 2).wedge(&w(&cf, 1)).unwrap(), mono(&cf, -1, &[1, 2]));
    let a = w(&cf, 1).add(&w(&cf, 2)).unwrap();
    let b = w(&cf, 1).sub(&w(&cf, 2)).unwrap();
    assert_eq!(a.wedge(&b).unwrap(), mono(&cf, -2, &[1, 2]));
}

#[test]
fn wedge_past_top_degree_is_zero() {
    let cf = Coframe::standard(2);
    let top = mono(&cf, 1, &[1, 2]);
    let f = top.wedge(&w(&cf, 1)).unwrap();
    assert!(f.is_zero());
    assert_eq!(f.degree(), 3);
}

#[test]
fn coframe_mismatch_is_an_error() {
    let a = Coframe::standard(3);
    let b = Coframe::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    assert_eq!(
        Form::basis(&a, 0).wedge(&Form::basis(&b, 1)),
        Err(Error::CoframeMismatch)
    );
}

#[test]
fn add_and_scale_examples() {
    let cf = Coframe::standard(3);
    let phi = mono(&cf, 3, &[1, 3]);
    assert!(phi.add(&phi.scale(&s(-1))).unwrap().is_zero());
    assert!(phi.scale(&s(0)).is_zero());
    let x = mono(&cf, 1, &[1, 2]).add(&mono(&cf, 2, &[1, 2])).unwrap();
    assert_eq!(x, mono(&cf, 3, &[1, 2]));
    assert_eq!(
        w(&cf, 1).add(&mono(&cf, 1, &[1, 2])),
        Err(Error::DegreeMismatch(1, 2))
    );
}

#[test]
fn evaluate_examples() {
    let cf = Coframe::standard(3);
    let f = mono(&cf, 1, &[1, 2]);
    assert_eq!(f.evaluate(&[e(3, 1), e(3, 2)]).unwrap(), s(1));
    assert_eq!(f.evaluate(&[e(3, 1), e(3, 1)]).unwrap(), s(0));
    assert_eq!(f.evaluate(&[e(3, 1).add(&e(3, 3)), e(3, 2)]).unwrap(), s(1));
    assert!(matches!(
        f.evaluate(&[e(3, 1)]),
        Err(Error::WrongVectorCount { expected: 2, got: 1 })
    ));
}

#[test]
fn interior_product_examples() {
    let cf = Coframe::standard(3);
    let f = mono(&cf, 1, &[1, 2]);
    assert_eq!(f.interior_product(&e(3, 1)).unwrap(), w(&cf, 2));
    assert!(f.interior_product(&e(3, 3)).unwrap().is_zero());
    let g = mono(&cf, 1, &[1, 2, 3]);
    assert_eq!(g.interior_product(&e(3, 2)).unwrap(), mono(&cf, -1, &[1, 3]));
    assert_eq!(
        Form::constant(&cf, s(1)).interior_product(&e(3, 1)),
        Err(Error::ZeroDegreeContraction)
    );
}

#[test]
fn exterior_derivative_examples() {
    let cf = Coframe::standard(3);
    let flat = StructureDifferential::flat(&cf);
    assert!(flat.d(&mono(&cf, 5, &[1, 3])).unwrap().is_zero());
    let sd = StructureDifferential::flat(&cf)
        .with(2, mono(&cf, 1, &[1, 2]))
        .unwrap();
    assert_eq!(sd.d(&w(&cf, 3)).unwrap(), mono(&cf, 1, &[1, 2]));
    // d(ω3∧ω1) = (ω1∧ω2)∧ω1 = 0
    assert!(sd.d(&mono(&cf, 1, &[3, 1])).unwrap().is_zero());
}

#[test]
fn undeclared_auxiliary() {
    let cf = Coframe::with_auxiliaries(vec!["x".into(), "y".into()], vec!["eta".into()]).unwrap();
    let sd = StructureDifferential::flat(&cf);
    let a = Form::basis(&cf, cf.aux_symbol(0));
    assert_eq!(sd.d(&a), Err(Error::UndeclaredAuxiliary("eta".into())));
    assert_eq!(sd.resolve(&a), Err(Error::UndeclaredAuxiliary("eta".into())));
    assert!(matches!(
        a.evaluate(&[Vector::basis(2, 0)]),
        Err(Error::UnresolvedAuxiliary(_))
    ));
}

#[test]
fn auxiliary_value_and_differential_are_independent() {
    let cf = Coframe::with_auxiliaries(vec!["x".into(), "y".into()], vec!["eta".into()]).unwrap();
    let mut sd = StructureDifferential::flat(&cf);
    let xy = Form::monomial(&cf, s(1), &[0, 1]);
    sd.declare_auxiliary(0, Form::zero(&cf, 1), xy.clone()).unwrap();
    let a = Form::basis(&cf, cf.aux_symbol(0));
    let beta = Form::basis(&cf, 0).sub(&a).unwrap();
    assert_eq!(sd.resolve(&beta).unwrap(), Form::basis(&cf, 0));
    assert_eq!(sd.d(&beta).unwrap(), xy.neg());
}

#[test]
fn d_squared_examples() {
    let cf = Coframe::standard(3);
    let flat = StructureDifferential::flat(&cf);
    assert!(flat.is_integrable().unwrap());
    let heis = flat.clone().with(2, mono(&cf, 1, &[1, 2])).unwrap();
    assert!(heis.is_integrable().unwrap());
    let so3 = flat
        .clone()
        .with(0, mono(&cf, 1, &[2, 3]))
        .unwrap()
        .with(1, mono(&cf, 1, &[3, 1]))
        .unwrap()
        .with(2, mono(&cf, 1, &[1, 2]))
        .unwrap();
    let defects = so3.d_squared_defects().unwrap();
    assert_eq!(defects.len(), 3);
    assert!(defects.iter().all(|(_, f)| f.is_zero()));
    // dω1 = ω2∧ω3, dω3 = ω1∧ω3 gives d(dω1) = −ω2∧ω1∧ω3
    let bad = flat
        .with(0, mono(&cf, 1, &[2, 3]))
        .unwrap()
        .with(2, mono(&cf, 1, &[1, 3]))
        .unwrap();
    let defects = bad.d_squared_defects().unwrap();
    assert_eq!(defects[0].1, mono(&cf, 1, &[1, 2, 3]));
    assert!(!bad.is_integrable().unwrap());
}

#[test]
fn matrix_examples() {
    let cf = Coframe::standard(3);
    let zero = FormMatrix::zero(&cf, 2, 2, 1);
    let mut b = FormMatrix::zero(&cf, 2, 2, 1);
    b.set(0, 1, w(&cf, 1)).unwrap();
    assert!(matrix_wedge(&zero, &b).unwrap().is_zero());

    let one = FormMatrix::column(&[w(&cf, 1)]).unwrap();
    let other = FormMatrix::column(&[w(&cf, 2)]).unwrap();
    assert_eq!(
        matrix_wedge(&one, &other.transpose()).unwrap().get(0, 0),
        &mono(&cf, 1, &[1, 2])
    );

    let mut omega = FormMatrix::zero(&cf, 2, 2, 1);
    omega.set(0, 1, w(&cf, 1)).unwrap();
    omega.set(1, 0, w(&cf, 1).neg()).unwrap();
    let sq = matrix_wedge(&omega, &omega).unwrap();
    assert!(sq.get(0, 0).is_zero());
    assert!(sq.is_zero());
    assert!(matches!(
        matrix_wedge(&omega, &FormMatrix::zero(&cf, 3, 1, 1)),
        Err(Error::Shape(_))
    ));
}

#[test]
fn canonical_rendering() {
    let cf = Coframe::standard(4);
    let f = mono(&cf, 2, &[3, 4])
        .add(&mono(&cf, -1, &[1, 2]))
        .unwrap()
        .add(&mono(&cf, 1, &[2, 3]).scale(&Scalar::ratio(1, 2)))
        .unwrap();
    assert_eq!(f.to_string(), "-1/1*w1^w2 + 1/2*w2^w3 + 2/1*w3^w4");
    assert_eq!(Form::zero(&cf, 2).to_string(), "0");
    assert_eq!(Form::constant(&cf, s(3)).to_string(), "3/1");
}

#[test]
fn restrict_matches_evaluation() {
    let cf = Coframe::standard(4);
    let f = mono(&cf, 1, &[1, 2]).add(&mono(&cf, 3, &[3, 4])).unwrap();
    let basis = [e(4, 1).add(&e(4, 3)), e(4, 2).add(&e(4, 4))];
    let r = f.restrict(&basis).unwrap();
    assert_eq!(r.coefficient(&MultiIndex::new(&[0, 1]).unwrap()), s(4));
}

#[test]
fn change_of_coframe_keeps_integrability() {
    let mut rng = Rng::new(3);
    for _ in 0..10 {
        let cf = Coframe::standard(4);
        let sd = random_integrable_sd(&mut rng, &cf).unwrap();
        assert!(sd.is_integrable().unwrap());
    }
}

fn pick_dim(seed: u64) -> usize {
    3 + (seed % 3) as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_graded_antisymmetry(seed in any::<u64>(), p in 0usize..4, q in 0usize..4) {
        let mut rng = Rng::new(seed);
        let cf = Coframe::standard(pick_dim(seed));
        let a = random_form(&mut rng, &cf, p, 3);
        let b = random_form(&mut rng, &cf, q, 3);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let expect = if (p * q) % 2 == 1 { ba.neg() } else { ba };
        prop_assert_eq!(ab, expect);
    }

    #[test]
    fn wedge_associative(seed in any::<u64>(), p in 0usize..3, q in 0usize..3, r in 0usize..3) {
        let mut rng = Rng::new(seed);
        let cf = Coframe::standard(pick_dim(seed));
        let a = random_form(&mut rng, &cf, p, 3);
        let b = random_form(&mut rng, &cf, q, 3);
        let c = random_form(&mut rng, &cf, r, 3);
        prop_assert_eq!(
            a.wedge(&b).unwrap().wedge(&c).unwrap(),
            a.wedge(&b.wedge(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let mut rng = Rng::new(seed);
        let cf = Coframe::standard(pick_dim(seed));
        let sd = random_sd(&mut rng, &cf, 2);
        let a = random_form(&mut rng, &cf, p, 3);
        let b = random_form(&mut rng, &cf, q, 3);
        let lhs = sd.d(&a.wedge(&b).unwrap()).unwrap();
        let left = sd.d(&a).unwrap().wedge(&b).unwrap();
        let right = a.wedge(&sd.d(&b).unwrap()).unwrap();
        let rhs = if p % 2 == 1 { left.sub(&right) } else { left.add(&right) }.unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_vanishes_when_integrable(seed in any::<u64>(), p in 0usize..3) {
        let mut rng = Rng::new(seed);
        let cf = Coframe::standard(pick_dim(seed));
        let sd = random_integrable_sd(&mut rng, &cf).unwrap();
        prop_assert!(sd.is_integrable().unwrap());
        let phi = random_form(&mut rng, &cf, p, 3);
        prop_assert!(sd.d(&sd.d(&phi).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn evaluate_is_alternating(seed in any::<u64>(), p in 2usize..4) {
        let mut rng = Rng::new(seed);
        let n = pick_dim(seed);
        let cf = Coframe::standard(n);
        let phi = random_form(&mut rng, &cf, p, 3);
        let mut vs: Vec<Vector> = (0..p).map(|_| random_vector(&mut rng, n, 3)).collect();
        let before = phi.evaluate(&vs).unwrap();
        let i = rng.below(p);
        let j = (i + 1 + rng.below(p - 1)) % p;
        vs.swap(i, j);
        prop_assert_eq!(phi.evaluate(&vs).unwrap(), -before);
    }

    #[test]
    fn evaluation_equals_iterated_contraction(seed in any::<u64>(), p in 1usize..4) {
        let mut rng = Rng::new(seed);
        let n = pick_dim(seed);
        let cf = Coframe::standard(n);
        let phi = random_form(&mut rng, &cf, p, 3);
        let vs: Vec<Vector> = (0..p).map(|_| random_vector(&mut rng, n, 3)).collect();
        let mut acc = phi.clone();
        for v in &vs {
            acc = acc.interior_product(v).unwrap();
        }
        prop_assert_eq!(acc.constant_value(), phi.evaluate(&vs).unwrap());
    }
}
