use std::collections::{BTreeMap, HashMap, VecDeque};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspace_core::grassmann::trial_substitution;
use tspace_core::{
    commutator_product_normalize, evaluate, nm_mul, straighten, FreePoly, NormalMonomial,
    PrimeField, Var, Word,
};

fn f(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// Literal rewriting: find the leftmost adjacent inversion `x_a x_b` (a > b) and
/// replace `u x_a x_b v` by `u x_b x_a v + [x_a,x_b] u v`, collecting the central
/// commutator on the side. Commutator products are normalized by sorting with
/// sign, zero on a repeat.
fn rewrite_oracle(field: PrimeField, n: usize, word: &[Var]) -> BTreeMap<NormalMonomial, u32> {
    let mut todo: Vec<(Vec<Var>, Vec<Var>, u32)> = vec![(word.to_vec(), vec![], 1)];
    let mut out: BTreeMap<NormalMonomial, u32> = BTreeMap::new();
    while let Some((w, comms, c)) = todo.pop() {
        match w.windows(2).position(|p| p[0] > p[1]) {
            Some(i) => {
                let (a, b) = (w[i], w[i + 1]);
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                todo.push((swapped, comms.clone(), c));
                let mut shorter = w[..i].to_vec();
                shorter.extend_from_slice(&w[i + 2..]);
                let mut comms2 = comms;
                comms2.extend([a, b]);
                todo.push((shorter, comms2, c));
            }
            None => {
                let mut odd = false;
                let mut v = comms;
                for i in 0..v.len() {
                    for j in 0..v.len() - 1 - i {
                        if v[j] > v[j + 1] {
                            v.swap(j, j + 1);
                            odd = !odd;
                        }
                    }
                }
                if v.windows(2).any(|p| p[0] == p[1]) {
                    continue;
                }
                let mut exps = vec![0u32; n];
                for &x in &w {
                    exps[x as usize - 1] += 1;
                }
                let m = NormalMonomial::new(exps, v).unwrap();
                let coef = if odd { field.neg(c) } else { c };
                let e = out.entry(m).or_insert(0);
                *e = field.add(*e, coef);
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn all_words(n: u16, max_len: usize) -> Vec<Vec<Var>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Var>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for v in 1..=n {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn straighten_matches_leftmost_rewriting() {
    for p in [3, 5] {
        let field = f(p);
        for w in all_words(3, 6).into_iter().chain(all_words(4, 5)) {
            let n = 4;
            let nf = straighten(&FreePoly::word(field, n, &w).unwrap());
            let want = rewrite_oracle(field, n, &w);
            let got: BTreeMap<NormalMonomial, u32> =
                nf.terms().map(|(m, c)| (m.clone(), c)).collect();
            assert_eq!(got, want, "word {w:?} p={p}");
        }
    }
}

/// Signs of every arrangement of `[x_1,x_2]...[x_{2k-1},x_{2k}]`, reached from the
/// sorted product by three moves only: antisymmetry inside a commutator,
/// `[a,b][c,d] = -[c,b][a,d]`, and swapping two (central) commutators.
fn signs_by_relations(k: usize) -> HashMap<Vec<Var>, i8> {
    let start: Vec<Var> = (1..=2 * k as Var).collect();
    let mut seen: HashMap<Vec<Var>, i8> = HashMap::from([(start.clone(), 1)]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let sign = seen[&s];
        let mut moves: Vec<(Vec<Var>, i8)> = Vec::new();
        for i in 0..k {
            let mut t = s.clone();
            t.swap(2 * i, 2 * i + 1);
            moves.push((t, -sign));
            for j in 0..k {
                if i != j {
                    let mut t = s.clone();
                    t.swap(2 * i, 2 * j);
                    moves.push((t, -sign));
                    let mut t = s.clone();
                    t.swap(2 * i, 2 * j);
                    t.swap(2 * i + 1, 2 * j + 1);
                    moves.push((t, sign));
                }
            }
        }
        for (t, sg) in moves {
            match seen.get(&t) {
                Some(&old) => assert_eq!(old, sg, "relations give two signs for {t:?}"),
                None => {
                    seen.insert(t.clone(), sg);
                    queue.push_back(t);
                }
            }
        }
    }
    seen
}

#[test]
fn alternating_sign_follows_from_relations() {
    for k in 1..=3 {
        let signs = signs_by_relations(k);
        let fact: usize = (1..=2 * k).product();
        assert_eq!(signs.len(), fact);
        for (arr, sign) in signs {
            let (s, sorted) = commutator_product_normalize(&arr).unwrap().unwrap();
            assert_eq!(s, sign, "{arr:?}");
            assert_eq!(sorted, (1..=2 * k as Var).collect::<Vec<_>>());
        }
    }
    // [x3,x2][x1,x4] = -[x1,x2][x3,x4]
    assert_eq!(
        commutator_product_normalize(&[3, 2, 1, 4]).unwrap(),
        Some((-1, vec![1, 2, 3, 4]))
    );
    assert_eq!(commutator_product_normalize(&[1, 2, 1, 3]).unwrap(), None);
}

#[test]
fn words_agree_with_grassmann_evaluation() {
    let field = f(3);
    let n = 4;
    let subs: Vec<_> = (0..50)
        .map(|t| trial_substitution(field, n, 8, 0, t).unwrap())
        .collect();
    for w in all_words(n as u16, 6) {
        let word = FreePoly::word(field, n, &w).unwrap();
        let diff = &word - &straighten(&word).lift();
        for s in &subs {
            assert!(evaluate(&diff, s).unwrap().is_zero(), "word {w:?}");
        }
    }
}

fn poly_in(
    field: PrimeField,
    n: usize,
    max_terms: usize,
    max_len: usize,
) -> impl Strategy<Value = FreePoly> {
    let word = prop::collection::vec(1..=n as u16, 0..=max_len);
    prop::collection::vec((word, 1..field.p()), 0..=max_terms).prop_map(move |ts| {
        FreePoly::from_terms(
            field,
            n,
            ts.into_iter().map(|(w, c)| (Word::from_letters(w), c)),
        )
        .unwrap()
    })
}

fn field() -> impl Strategy<Value = PrimeField> {
    prop_oneof![Just(3u32), Just(5)].prop_map(f)
}

fn gs(count: usize, max_terms: usize, max_len: usize) -> impl Strategy<Value = Vec<FreePoly>> {
    field()
        .prop_flat_map(move |fl| prop::collection::vec(poly_in(fl, 4, max_terms, max_len), count))
}

fn comm(a: &FreePoly, b: &FreePoly) -> FreePoly {
    a.commutator(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn idempotent_through_lift(g in gs(1, 5, 5)) {
        let nf = straighten(&g[0]);
        prop_assert_eq!(straighten(&nf.lift()), nf);
    }

    #[test]
    fn multiplicative(g in gs(2, 4, 4)) {
        let lhs = straighten(&(&g[0] * &g[1]));
        prop_assert_eq!(lhs, nm_mul(&straighten(&g[0]), &straighten(&g[1])).unwrap());
    }

    #[test]
    fn relations_four(g in gs(4, 3, 3)) {
        prop_assert!(straighten(&(&comm(&g[0], &g[1]) * &comm(&g[0], &g[2]))).is_zero());
        let s = &(&comm(&g[0], &g[1]) * &comm(&g[2], &g[3])) + &(&comm(&g[2], &g[1]) * &comm(&g[0], &g[3]));
        prop_assert!(straighten(&s).is_zero());
        prop_assert!(straighten(&FreePoly::long_commutator(&g[..3]).unwrap()).is_zero());
    }

    #[test]
    fn power_commutator(g in gs(2, 2, 3), m in 1u32..=6) {
        let lhs = comm(&g[0].pow(m), &g[1]);
        let rhs = (&g[0].pow(m - 1) * &comm(&g[0], &g[1])).scale(m);
        prop_assert!(straighten(&(&lhs - &rhs)).is_zero());
    }

    #[test]
    fn relations_six(g in gs(2, 2, 3)) {
        let p = g[0].field().p();
        prop_assert!(straighten(&comm(&g[0].pow(p), &g[1])).is_zero());
        let prod = &(&g[0] * &g[1]).pow(p) - &(&g[0].pow(p) * &g[1].pow(p));
        prop_assert!(straighten(&prod).is_zero());
        let sum = &(&(&g[0] + &g[1]).pow(p) - &g[0].pow(p)) - &g[1].pow(p);
        prop_assert!(straighten(&sum).is_zero());
    }
}

#[test]
fn random_words_degree_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let len = rng.gen_range(0..=6);
        let w: Vec<Var> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        let field = f(5);
        let got: BTreeMap<NormalMonomial, u32> = straighten(&FreePoly::word(field, 4, &w).unwrap())
            .terms()
            .map(|(m, c)| (m.clone(), c))
            .collect();
        assert_eq!(got, rewrite_oracle(field, 4, &w));
    }
}
