use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspace_core::echelon::Echelon;
use tspace_core::specs::{parse_poly, spec_cg, spec_q, spec_r, spec_t3k, spec_v, spec_v_stage};
use tspace_core::tspace::frame;
use tspace_core::{
    q_poly, straighten, Closure, Engine, EngineConfig, FreePoly, GeneratorSpec, MultiDegree,
    NormalPoly, PrimeField, Word,
};

fn f3() -> PrimeField {
    PrimeField::new(3).unwrap()
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

fn space(field: PrimeField, n: usize, gens: &[FreePoly]) -> GeneratorSpec {
    let mut s = GeneratorSpec::new(field, n);
    for g in gens {
        s.push(g.clone(), Closure::Space).unwrap();
    }
    s
}

#[test]
fn strict_chain_at_9_9() {
    let e = Engine::default();
    let target = q_poly(1, 2, f3()).unwrap();
    let d = MultiDegree(vec![9, 9]);
    assert_eq!(frame(&d).len(), 2);

    let r = e
        .member(&target, &spec_v_stage(f3(), 2, 1, 1).unwrap())
        .unwrap();
    assert!(!r.member);
    let c = &r.components[0];
    assert_eq!(
        (
            c.d.clone(),
            c.frame_size,
            c.rank,
            c.rank_with_target,
            c.complete
        ),
        (d.clone(), 2, 1, 2, true)
    );

    assert!(
        e.member(&target, &spec_v_stage(f3(), 2, 2, 1).unwrap())
            .unwrap()
            .member
    );
    // with T^(3,2) included, over enough variables for its generator
    assert!(
        !e.member(&target, &spec_v(f3(), 4, 1, 1).unwrap())
            .unwrap()
            .member
    );
    assert!(
        e.member(&target, &spec_v(f3(), 4, 2, 1).unwrap())
            .unwrap()
            .member
    );
}

#[test]
fn ladder() {
    let e = Engine::default();
    for (k, l) in [(1, 1), (1, 2), (2, 1)] {
        let target = q_poly(k, l - 1, f3()).unwrap();
        let spec = spec_q(f3(), 2 * k as usize, k, l).unwrap();
        assert!(e.member(&target, &spec).unwrap().member, "k={k} l={l}");
    }
    // the reverse inclusion fails: q_1^(1) is not in the T-space of q_1^(0)
    assert!(
        !e.member(
            &q_poly(1, 1, f3()).unwrap(),
            &spec_q(f3(), 2, 1, 0).unwrap()
        )
        .unwrap()
        .member
    );
}

#[test]
fn products_of_commutators_vanish_in_few_variables() {
    let e = Engine::new(EngineConfig {
        capacity_pruning: false,
        ..EngineConfig::default()
    });
    for n in [2, 3] {
        let spec = spec_t3k(f3(), n, 2).unwrap();
        for d in degrees(n, 8) {
            assert_eq!(e.dim(&spec, &d).unwrap(), 0, "n={n} d={d}");
        }
    }
    // four variables are enough for [x1,x2][x3,x4]
    let spec = spec_t3k(f3(), 4, 2).unwrap();
    assert_eq!(e.dim(&spec, &MultiDegree(vec![1, 1, 1, 1])).unwrap(), 1);
}

#[test]
fn t3k_components_are_spanned_by_long_commutator_products() {
    let e = Engine::default();
    for k in [1usize, 2] {
        let spec = spec_t3k(f3(), 4, k as u32).unwrap();
        for d in degrees(4, 6) {
            let b = e.component_basis(&spec, &d).unwrap();
            let mut want = Echelon::new(f3(), b.frame.len());
            for (i, m) in b.frame.iter().enumerate() {
                let nf = NormalPoly::monomial(f3(), m.clone(), 1);
                assert_eq!(nf.in_t3k_span(k), m.s() >= k);
                if m.s() >= k {
                    let mut v = vec![0; b.frame.len()];
                    v[i] = 1;
                    want.insert(&v);
                }
            }
            assert_eq!(b.rows, want.into_rows(), "k={k} d={d}");
        }
    }
}

#[test]
fn monomial_with_commutator_generates_q() {
    // x1^2 x2^5 [x1,x2] and q_1^(1) generate the same T-space modulo T^(3)
    let e = Engine::default();
    let m = parse_poly("x1^2*x2^5*[x1,x2]", f3()).unwrap();
    let sm = space(f3(), 2, std::slice::from_ref(&m));
    let q = spec_q(f3(), 2, 1, 1).unwrap();
    assert!(e.member(&m, &q).unwrap().member);
    assert!(e.member(&q_poly(1, 1, f3()).unwrap(), &sm).unwrap().member);
    for d in [[3, 6], [3, 3], [4, 4], [6, 6]] {
        assert!(
            e.subspace_equal(&sm, &q, &MultiDegree(d.to_vec())).unwrap(),
            "{d:?}"
        );
    }
}

/// Dimension of `{f in component d : [f, x_{n+1}] in T^(3)}`, from the normal form alone.
fn central_kernel_dim(field: PrimeField, d: &MultiDegree) -> usize {
    let n = d.n();
    let fr = frame(d);
    let mut d1 = d.0.clone();
    d1.push(1);
    let big = frame(&MultiDegree(d1));
    let x = NormalPoly::var(field, n + 1, (n + 1) as u16);
    let mut img = Echelon::new(field, big.len());
    for m in &fr {
        let lifted = m.lift(field).with_ambient(n + 1).unwrap();
        let nf = straighten(&lifted);
        let c = nf
            .try_mul(&x)
            .unwrap()
            .try_sub(&x.try_mul(&nf).unwrap())
            .unwrap();
        img.insert(&big.iter().map(|b| c.coeff(b)).collect::<Vec<_>>());
    }
    fr.len() - img.rank()
}

#[test]
fn central_generators_give_all_central_polynomials() {
    let e = Engine::default();
    for p in [3, 5] {
        let field = PrimeField::new(p).unwrap();
        let mut ds = degrees(3, 6);
        ds.extend(degrees(4, 4));
        ds.push(MultiDegree(vec![1, 1, 1, 1, 1]));
        ds.push(MultiDegree(vec![2, 1, 1, 1, 1]));
        ds.push(MultiDegree(vec![5, 5]));
        for d in ds {
            let spec = spec_cg(field, d.n(), d.total() / 2).unwrap();
            assert_eq!(
                e.dim(&spec, &d).unwrap(),
                central_kernel_dim(field, &d),
                "p={p} d={d}"
            );
        }
    }
}

#[test]
fn separates_rk_from_central() {
    let e = Engine::default();
    let f = parse_poly("x1*[x2,x3]*[x4,x5]", f3()).unwrap();
    assert!(
        e.member(&f, &spec_r(f3(), 5, 1, 2).unwrap())
            .unwrap()
            .member
    );
    let r = e.member(&f, &spec_cg(f3(), 5, 2).unwrap()).unwrap();
    assert!(!r.member);
    assert_eq!((r.components[0].frame_size, r.components[0].rank), (16, 8));
}

#[test]
fn telescoping_sums_of_q() {
    let e = Engine::default();
    for (k, l, n, max) in [(1u32, 1u32, 2usize, 8u32), (1, 2, 2, 10), (2, 1, 4, 5)] {
        let top = spec_q(f3(), n, k, l).unwrap();
        let mut sum = GeneratorSpec::new(f3(), n);
        for i in 0..=l {
            sum.push(q_poly(k, i, f3()).unwrap(), Closure::Space)
                .unwrap();
        }
        for d in degrees(n, max) {
            assert!(
                e.subspace_equal(&top, &sum, &d).unwrap(),
                "k={k} l={l} d={d}"
            );
        }
    }
}

fn random_word_poly(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, max_len: usize) -> FreePoly {
    let len = rng.gen_range(0..=max_len);
    let w: Vec<u16> = (0..len).map(|_| rng.gen_range(1..=n as u16)).collect();
    FreePoly::from_terms(field, n, [(Word::from_letters(w), 1)]).unwrap()
}

#[test]
fn closed_under_monomial_endomorphisms_and_extensions() {
    let e = Engine::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gens = [
        "x1^3",
        "x1*[x2,x3,x4]",
        "x1^2*[x1,x2]*x2^2",
        "[x1,x2]",
        "x1*x2*x1",
    ];
    for case in 0..30 {
        let g = parse_poly(gens[case % gens.len()], f3()).unwrap();
        let n = 3;
        let spec = space(f3(), n, std::slice::from_ref(&g));
        let sigma: Vec<FreePoly> = (0..g.max_var())
            .map(|_| random_word_poly(&mut rng, f3(), n, 2))
            .collect();
        let image = g.substitute(&sigma).unwrap();
        if image.degree().unwrap_or(0) > 12 {
            continue;
        }
        assert!(
            e.member(&image, &spec).unwrap().member,
            "{g} under {sigma:?}"
        );
        let mut bigger = spec.clone();
        bigger
            .push(random_word_poly(&mut rng, f3(), n, 3), Closure::Space)
            .unwrap();
        assert!(e.member(&image, &bigger).unwrap().member);
    }
}

#[test]
fn dimensions_bounded_by_frame_and_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = Engine::default();
    let b = Engine::new(EngineConfig {
        capacity_pruning: false,
        ..EngineConfig::default()
    });
    let pool = [
        "x1^3",
        "[x1,x2]*x3",
        "x1*x2 + x2*x1",
        "x1^2*x2",
        "[x1,x2]*[x3,x4]",
        "x1*[x1,x2]",
    ];
    for _ in 0..25 {
        let mut spec = GeneratorSpec::new(f3(), 3);
        let mut rev = GeneratorSpec::new(f3(), 3);
        let chosen: Vec<&str> = (0..2).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        for g in &chosen {
            spec.push(parse_poly(g, f3()).unwrap(), Closure::Space)
                .unwrap();
        }
        for g in chosen.iter().rev() {
            rev.push(parse_poly(g, f3()).unwrap(), Closure::Space)
                .unwrap();
        }
        let d = MultiDegree((0..3).map(|_| rng.gen_range(0..=3)).collect());
        let x = a.component_basis(&spec, &d).unwrap();
        assert!(x.rank() <= frame(&d).len());
        assert_eq!(x, a.component_basis(&spec, &d).unwrap());
        assert_eq!(x, b.component_basis(&spec, &d).unwrap());
        assert_eq!(x.rows, a.component_basis(&rev, &d).unwrap().rows);
    }
}

#[test]
fn documented_small_spans() {
    let e = Engine::default();
    let d11 = MultiDegree(vec![1, 1]);
    let x1 = space(f3(), 2, &[parse_poly("x1", f3()).unwrap()]);
    assert_eq!(e.dim(&x1, &d11).unwrap(), 2);
    assert_eq!(e.dim(&x1, &MultiDegree(vec![1, 0])).unwrap(), 1);
    let c = space(f3(), 2, &[parse_poly("[x1,x2]", f3()).unwrap()]);
    let b = e.component_basis(&c, &d11).unwrap();
    assert_eq!(b.rows, vec![vec![0, 1]]);
    assert!(e
        .subspace_equal(&c, &spec_q(f3(), 2, 1, 0).unwrap(), &d11)
        .unwrap());
    assert!(
        !e.member(&parse_poly("x1", f3()).unwrap(), &c)
            .unwrap()
            .member
    );
    let t3 = GeneratorSpec::new(f3(), 3)
        .ideal(parse_poly("[x1,x2,x3]", f3()).unwrap())
        .unwrap();
    for d in degrees(3, 4) {
        assert_eq!(e.dim(&t3, &d).unwrap(), 0);
    }
}

#[test]
fn budgets_are_errors() {
    let e = Engine::new(EngineConfig {
        max_degree: 4,
        ..EngineConfig::default()
    });
    let spec = spec_q(f3(), 2, 1, 1).unwrap();
    assert!(e.component_basis(&spec, &MultiDegree(vec![3, 3])).is_err());
    let e = Engine::new(EngineConfig {
        max_instances: 3,
        ..EngineConfig::default()
    });
    assert!(e.component_basis(&spec, &MultiDegree(vec![3, 3])).is_err());
}
