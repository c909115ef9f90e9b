//! Cross-checks the type-reduced enumeration against a literal construction:
//! word-level polarization, substitution of words into every slot, two-sided
//! word multipliers for ideals, straightening, and elimination.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspace_core::echelon::Echelon;
use tspace_core::tspace::frame;
use tspace_core::{
    straighten, Closure, Engine, EngineConfig, FreePoly, GeneratorSpec, MultiDegree, PrimeField,
    Word,
};

fn words_of(d: &[u32]) -> Vec<Vec<u16>> {
    // all words with multidegree exactly d
    let total: u32 = d.iter().sum();
    let mut out = vec![(Vec::new(), d.to_vec())];
    for _ in 0..total {
        let mut next = Vec::new();
        for (w, rest) in out {
            for i in 0..rest.len() {
                if rest[i] > 0 {
                    let mut w2: Vec<u16> = w.clone();
                    w2.push(i as u16 + 1);
                    let mut r2: Vec<u32> = rest.clone();
                    r2[i] -= 1;
                    next.push((w2, r2));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(w, _)| w).collect()
}

fn sub_degrees(d: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &e in d {
        let mut next = Vec::new();
        for v in &out {
            for k in 0..=e {
                let mut v2: Vec<u32> = v.clone();
                v2.push(k);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}

/// Assign a multidegree to every active slot so that sum delta_j * m_j = d.
fn slot_assignments(deltas: &[u32], d: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn rec(deltas: &[u32], rest: Vec<u32>, acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if deltas.is_empty() {
            if rest.iter().all(|&r| r == 0) {
                out.push(acc.clone());
            }
            return;
        }
        let dl = deltas[0];
        for m in sub_degrees(&rest) {
            if m.iter().zip(&rest).any(|(&a, &b)| a * dl > b) {
                continue;
            }
            let r2: Vec<u32> = rest.iter().zip(&m).map(|(&r, &a)| r - a * dl).collect();
            acc.push(m);
            rec(&deltas[1..], r2, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(deltas, d.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn oracle_rows(spec: &GeneratorSpec, d: &MultiDegree) -> Vec<Vec<u32>> {
    let field = spec.field();
    let n = spec.n();
    let fr = frame(d);
    let mut ech = Echelon::new(field, fr.len());
    let mut push = |f: &FreePoly| {
        let nf = straighten(f);
        let v: Vec<u32> = fr.iter().map(|m| nf.coeff(m)).collect();
        for (m, _) in nf.terms() {
            assert_eq!(&m.multidegree(), d);
        }
        ech.insert(&v);
    };
    for g in spec.generators() {
        let poly = g.poly.clone();
        let dg = poly.components();
        for (_, comp) in dg {
            let parts: Vec<usize> = comp
                .terms()
                .next()
                .map(|(w, _)| {
                    w.multidegree(comp.n())
                        .0
                        .iter()
                        .map(|&e| (e as usize).max(1))
                        .collect()
                })
                .unwrap();
            for pol in comp.polarize(&parts).unwrap() {
                let deltas: Vec<u32> = pol.slot_degrees.0.clone();
                let active: Vec<usize> = (0..deltas.len()).filter(|&j| deltas[j] > 0).collect();
                let act_d: Vec<u32> = active.iter().map(|&j| deltas[j]).collect();
                // for ideals, the two multipliers take part of the degree
                let mult_degs: Vec<(Vec<u32>, Vec<u32>)> = match g.closure {
                    Closure::Space => vec![(vec![0; n], vec![0; n])],
                    Closure::Ideal => {
                        let mut v = Vec::new();
                        for u in sub_degrees(&d.0) {
                            let rest: Vec<u32> = d.0.iter().zip(&u).map(|(a, b)| a - b).collect();
                            for w in sub_degrees(&rest) {
                                v.push((u.clone(), w));
                            }
                        }
                        v
                    }
                };
                for (ud, vd) in mult_degs {
                    let core: Vec<u32> =
                        d.0.iter()
                            .zip(&ud)
                            .zip(&vd)
                            .map(|((a, b), c)| a - b - c)
                            .collect();
                    for assign in slot_assignments(&act_d, &core) {
                        let choices: Vec<Vec<Vec<u16>>> =
                            assign.iter().map(|m| words_of(m)).collect();
                        let mut idx = vec![0usize; choices.len()];
                        loop {
                            let mut images = vec![FreePoly::zero(field, n); deltas.len()];
                            for (k, &j) in active.iter().enumerate() {
                                images[j] = FreePoly::from_terms(
                                    field,
                                    n,
                                    [(Word::from_letters(choices[k][idx[k]].clone()), 1)],
                                )
                                .unwrap();
                            }
                            let inst = pol.poly.substitute(&images).unwrap();
                            for uw in words_of(&ud) {
                                for vw in words_of(&vd) {
                                    let u = FreePoly::from_terms(
                                        field,
                                        n,
                                        [(Word::from_letters(uw.clone()), 1)],
                                    )
                                    .unwrap();
                                    let v = FreePoly::from_terms(
                                        field,
                                        n,
                                        [(Word::from_letters(vw.clone()), 1)],
                                    )
                                    .unwrap();
                                    push(&(&(&u * &inst) * &v));
                                }
                            }
                            let mut k = 0;
                            while k < idx.len() {
                                idx[k] += 1;
                                if idx[k] < choices[k].len() {
                                    break;
                                }
                                idx[k] = 0;
                                k += 1;
                            }
                            if k == idx.len() {
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    ech.into_rows()
}

fn check(spec: &GeneratorSpec, d: &[u32]) {
    let d = MultiDegree(d.to_vec());
    let want = oracle_rows(spec, &d);
    for capacity in [true, false] {
        let engine = Engine::new(EngineConfig {
            capacity_pruning: capacity,
            ..EngineConfig::default()
        });
        let got = engine.component_basis(spec, &d).unwrap();
        assert_eq!(
            got.rows, want,
            "spec {} at {d} (capacity pruning {capacity})",
            spec
        );
    }
}

fn poly(s: &str, p: u32) -> FreePoly {
    tspace_core::syntax::parse_auto(s, PrimeField::new(p).unwrap()).unwrap()
}

fn space(n: usize, p: u32, gens: &[&str]) -> GeneratorSpec {
    let mut s = GeneratorSpec::new(PrimeField::new(p).unwrap(), n);
    for g in gens {
        s.push(poly(g, p), Closure::Space).unwrap();
    }
    s
}

#[test]
fn powers_and_products() {
    for d in [[3, 0], [3, 3], [4, 2], [6, 0], [2, 2], [5, 1]] {
        check(&space(2, 3, &["x1^3"]), &d);
        check(&space(2, 3, &["x1^2"]), &d);
        check(&space(2, 3, &["x1*x2"]), &d);
    }
}

#[test]
fn commutator_shapes() {
    for d in [[1, 1], [2, 1], [3, 3], [2, 2], [4, 1]] {
        check(&space(2, 3, &["[x1,x2]"]), &d);
        check(&space(2, 3, &["x1^2*[x1,x2]*x2^2"]), &d);
        check(&space(2, 3, &["x1*[x1,x2]"]), &d);
    }
    for d in [[1, 1, 1], [2, 1, 1], [1, 1, 2]] {
        check(&space(3, 3, &["x1*[x2,x3]", "x1^3"]), &d);
        check(&space(3, 3, &["[x1,x2]*x3"]), &d);
    }
}

#[test]
fn other_primes() {
    for d in [[5, 0], [5, 2], [10, 0], [6, 1]] {
        check(&space(2, 5, &["x1^5"]), &d);
    }
    for d in [[2, 3], [3, 2], [2, 2], [4, 1]] {
        check(&space(2, 5, &["x1*[x1,x2]*x2"]), &d);
        check(&space(2, 5, &["x1^2*x2 + 3*x2*x1*x1"]), &d);
    }
    for d in [[3, 1], [2, 2], [4, 2]] {
        check(&space(2, 7, &["x1^3*x2", "[x1,x2]"]), &d);
    }
}

#[test]
fn ideals() {
    let f = PrimeField::new(3).unwrap();
    let mut s = GeneratorSpec::new(f, 3);
    s.push(poly("[x1,x2]", 3), Closure::Ideal).unwrap();
    for d in [[1, 1, 0], [2, 1, 0], [1, 1, 1], [2, 2, 0]] {
        check(&s, &d);
    }
    let mut s = GeneratorSpec::new(f, 4);
    s.push(poly("[x1,x2]*[x3,x4]", 3), Closure::Ideal).unwrap();
    for d in [[1, 1, 1, 1], [2, 1, 1, 1]] {
        check(&s, &d);
    }
    let mut s = GeneratorSpec::new(f, 2);
    s.push(poly("x1^3", 3), Closure::Ideal).unwrap();
    for d in [[3, 1], [4, 0], [3, 2]] {
        check(&s, &d);
    }
}

#[test]
fn random_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..40 {
        let p = if case % 2 == 0 { 3 } else { 5 };
        let nv = rng.gen_range(1..=2usize);
        let mut text = String::new();
        for t in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(1..=3);
            let w: Vec<String> = (0..len)
                .map(|_| format!("x{}", rng.gen_range(1..=nv)))
                .collect();
            if t > 0 {
                text.push_str(" + ");
            }
            text.push_str(&format!("{}*{}", rng.gen_range(1..p), w.join("*")));
        }
        let spec = space(2, p, &[&text]);
        let d: Vec<u32> = (0..2).map(|_| rng.gen_range(0..=3)).collect();
        check(&spec, &d);
    }
}
