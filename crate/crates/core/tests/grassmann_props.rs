use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspace_core::echelon::Echelon;
use tspace_core::grassmann::trial_substitution;
use tspace_core::tspace::frame;
use tspace_core::{
    evaluate, falsify, is_central_for_g, is_identity_of_g, FalsifyMode, FreePoly, GrassmannElement,
    MultiDegree, PrimeField, Word,
};

const S: usize = 6;

fn element(field: PrimeField) -> impl Strategy<Value = GrassmannElement> {
    prop::collection::vec((0u64..(1 << S), 0..field.p()), 0..6)
        .prop_map(move |ts| GrassmannElement::from_terms(field, S, ts).unwrap())
}

fn triple() -> impl Strategy<Value = (GrassmannElement, GrassmannElement, GrassmannElement)> {
    prop_oneof![Just(3u32), Just(5)]
        .prop_map(|p| PrimeField::new(p).unwrap())
        .prop_flat_map(|f| (element(f), element(f), element(f)))
}

proptest! {
    #[test]
    fn associative_with_unit((a, b, c) in triple()) {
        let one = GrassmannElement::one(a.field(), S).unwrap();
        let ab_c = a.g_mul(&b).unwrap().g_mul(&c).unwrap();
        let a_bc = a.g_mul(&b.g_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.g_mul(&one).unwrap(), a.clone());
        prop_assert_eq!(one.g_mul(&a).unwrap(), a.clone());
        let lhs = a.g_mul(&b.try_add(&c).unwrap()).unwrap();
        let rhs = a.g_mul(&b).unwrap().try_add(&a.g_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn generators_anticommute() {
    let f = PrimeField::new(3).unwrap();
    for i in 1..=S {
        let ei = GrassmannElement::generator(f, S, i).unwrap();
        assert!(ei.g_mul(&ei).unwrap().is_zero());
        for j in 1..=S {
            let ej = GrassmannElement::generator(f, S, j).unwrap();
            let sum = ei
                .g_mul(&ej)
                .unwrap()
                .try_add(&ej.g_mul(&ei).unwrap())
                .unwrap();
            assert!(sum.is_zero());
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, field: PrimeField) -> FreePoly {
    let n = 4;
    let word = |rng: &mut ChaCha8Rng, max: usize| -> FreePoly {
        let len = rng.gen_range(1..=max);
        let w: Vec<u16> = (0..len).map(|_| rng.gen_range(1..=n as u16)).collect();
        FreePoly::from_terms(
            field,
            n,
            [(Word::from_letters(w), rng.gen_range(1..field.p()))],
        )
        .unwrap()
    };
    let x = |i: u16| FreePoly::var(field, n, i).unwrap();
    match rng.gen_range(0..6) {
        // plain sums of words: mostly neither identities nor central
        0 | 1 => {
            (0..rng.gen_range(1..=4)).fold(FreePoly::zero(field, n), |acc, _| &acc + &word(rng, 5))
        }
        // elements of T^(3)
        2 => {
            let a = word(rng, 1);
            let b = word(rng, 2);
            let c = word(rng, 1);
            let t = FreePoly::long_commutator(&[a, b, c]).unwrap();
            &(&word(rng, 1) * &t) + &t
        }
        // products of commutators and p-th powers: central
        3 => {
            let c = x(rng.gen_range(1..=2))
                .commutator(&x(rng.gen_range(3..=4)))
                .unwrap();
            &c + &x(rng.gen_range(1..=4)).pow(field.p())
        }
        // the double commutator identity in disguise
        4 => {
            let (a, b, c) = (x(1), x(2), x(3));
            &(&a.commutator(&b).unwrap() * &a.commutator(&c).unwrap()) + &word(rng, 1).scale(0)
        }
        _ => &x(1) * &x(2).commutator(&x(3)).unwrap(),
    }
}

#[test]
fn decisions_never_contradicted_by_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut identities = 0;
    let mut centrals = 0;
    for i in 0..200 {
        let field = PrimeField::new(if i % 2 == 0 { 3 } else { 5 }).unwrap();
        let f = random_poly(&mut rng, field);
        if is_identity_of_g(&f) {
            identities += 1;
            assert_eq!(
                falsify(&f, FalsifyMode::Identity, 8, 100, i).unwrap(),
                None,
                "{f}"
            );
        }
        if is_central_for_g(&f) {
            centrals += 1;
            assert_eq!(
                falsify(&f, FalsifyMode::Central, 8, 100, i).unwrap(),
                None,
                "{f}"
            );
        } else {
            // a non-central polynomial of degree <= 5 is refuted in G_8
            assert!(
                falsify(&f, FalsifyMode::Central, 8, 100, i)
                    .unwrap()
                    .is_some(),
                "{f}"
            );
        }
    }
    assert!(identities > 20 && centrals > identities);
}

fn degrees(n: usize, max: u32) -> Vec<MultiDegree> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for k in 0..=max - used {
                let mut w: Vec<u32> = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out.into_iter().map(MultiDegree).collect()
}

#[test]
fn basis_images_are_independent() {
    let field = PrimeField::new(3).unwrap();
    let n = 3;
    let subs: Vec<_> = (0..200)
        .map(|t| trial_substitution(field, n, 10, 7, t).unwrap())
        .collect();
    for d in degrees(n, 5) {
        let fr = frame(&d);
        let mut cols: HashMap<(usize, u64), usize> = HashMap::new();
        let mut sparse: Vec<Vec<(usize, u32)>> = Vec::new();
        for m in &fr {
            let lifted = m.lift(field);
            let mut row = Vec::new();
            for (t, s) in subs.iter().enumerate() {
                for (mask, c) in evaluate(&lifted, s).unwrap().terms() {
                    let next = cols.len();
                    let col = *cols.entry((t, mask)).or_insert(next);
                    row.push((col, c));
                }
            }
            sparse.push(row);
        }
        let mut ech = Echelon::new(field, cols.len());
        for row in sparse {
            let mut dense = vec![0u32; cols.len()];
            for (c, v) in row {
                dense[c] = v;
            }
            ech.insert(&dense);
        }
        assert_eq!(ech.rank(), fr.len(), "multidegree {d}");
    }
}
