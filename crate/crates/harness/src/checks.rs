use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use tspace_core::echelon::Echelon;
use tspace_core::grassmann::trial_substitution;
use tspace_core::specs::{
    parse_poly, spec_cg, spec_q, spec_r, spec_t3k, spec_v, spec_v_stage, t3_space_generator,
    x1p_qj, DEFAULT_LEVELS,
};
use tspace_core::tspace::frame;
use tspace_core::{
    evaluate, falsify, is_central_for_g, is_identity_of_g, nm_mul, q_poly, straighten,
    ComponentBasis, ComponentVerdict, Engine, EngineConfig, Error, FalsifyMode, FreePoly,
    GeneratorSpec, MemberReport, MultiDegree, NormalPoly, PrimeField, Result, Var,
};

use crate::random::{mixed_poly, poly, trial_rng, word};
use crate::{HarnessConfig, Outcome};

pub(crate) fn dispatch(id: &str, cfg: &HarnessConfig) -> Result<Outcome> {
    match id {
        "CHK-CENTRAL" => central(cfg),
        "CHK-GAMMA" => gamma(cfg),
        "CHK-GXVAL" => gxval(cfg),
        "CHK-LEMMA11" => lemma11(cfg),
        "CHK-LGT" => lgt(cfg),
        "CHK-PROP10" => prop10(cfg),
        "CHK-QLADDER" => qladder(cfg),
        "CHK-REL4" => rel4(cfg),
        "CHK-REL6" => rel6(cfg),
        "CHK-RKCHAIN" => rkchain(cfg),
        "CHK-RKSEP" => rksep(cfg),
        "CHK-T3N" => t3n(cfg),
        _ => Err(Error::Argument(format!("unknown check id {id:?}"))),
    }
}

fn text(f: &FreePoly) -> String {
    f.to_string()
}

fn verdict_json(c: &ComponentVerdict) -> Value {
    json!({
        "d": c.d.to_string(),
        "frame_size": c.frame_size,
        "rank": c.rank,
        "rank_with_target": c.rank_with_target,
        "complete": c.complete,
        "contains": c.contains,
    })
}

fn report_json(r: &MemberReport) -> Value {
    json!({ "member": r.member, "components": r.components.iter().map(verdict_json).collect::<Vec<_>>() })
}

fn comm_nf(a: &NormalPoly, b: &NormalPoly) -> Result<NormalPoly> {
    nm_mul(a, b)?.try_sub(&nm_mul(b, a)?)
}

fn pow_nf(a: &NormalPoly, e: u32) -> Result<NormalPoly> {
    let mut acc = NormalPoly::one(a.field(), a.n());
    for _ in 0..e {
        acc = nm_mul(&acc, a)?;
    }
    Ok(acc)
}

fn relation_failure(trial: u64, relation: &str, gs: &[FreePoly], residue: &NormalPoly) -> Outcome {
    Outcome {
        params: Value::Null,
        pass: false,
        witness: json!({
            "trial": trial,
            "relation": relation,
            "g": gs.iter().map(text).collect::<Vec<_>>(),
            "residue": residue.to_string(),
        }),
    }
}

/// `[g1,g2][g1,g3]`, `[g1,g2][g3,g4] + [g3,g2][g1,g4]` and
/// `[g1^m,g2] - m g1^(m-1) [g1,g2]` vanish modulo `T^(3)`.
fn rel4(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let n = 4;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let g: Vec<FreePoly> = (0..4).map(|_| poly(&mut rng, field, n, 3, 3)).collect();
        let c = |a: &FreePoly, b: &FreePoly| a.commutator(b).expect("same ring");
        let first = straighten(&(&c(&g[0], &g[1]) * &c(&g[0], &g[2])));
        if !first.is_zero() {
            return Ok(relation_failure(trial, "[g1,g2][g1,g3]", &g, &first));
        }
        let swap = &(&c(&g[0], &g[1]) * &c(&g[2], &g[3])) + &(&c(&g[2], &g[1]) * &c(&g[0], &g[3]));
        let second = straighten(&swap);
        if !second.is_zero() {
            return Ok(relation_failure(
                trial,
                "[g1,g2][g3,g4]+[g3,g2][g1,g4]",
                &g,
                &second,
            ));
        }
        // the exponent cycles through 1..=6 across trials
        let m = (trial % 6) as u32 + 1;
        let nf: Vec<NormalPoly> = g.iter().map(straighten).collect();
        let lhs = comm_nf(&pow_nf(&nf[0], m)?, &nf[1])?;
        let rhs = nm_mul(&pow_nf(&nf[0], m - 1)?, &comm_nf(&nf[0], &nf[1])?)?.scale(m % field.p());
        let third = lhs.try_sub(&rhs)?;
        if !third.is_zero() {
            return Ok(relation_failure(
                trial,
                &format!("[g1^{m},g2]-{m}g1^{}[g1,g2]", m - 1),
                &g,
                &third,
            ));
        }
    }
    Ok(Outcome {
        params: json!({ "trials": cfg.trials, "n": n, "max_degree": 3 }),
        pass: true,
        witness: json!({ "holding": format!("{}/{}", cfg.trials, cfg.trials) }),
    })
}

/// `[g^p,h]`, `(g1 g2)^p - g1^p g2^p` and `(g1+g2)^p - g1^p - g2^p` vanish
/// modulo `T^(3)`.
fn rel6(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let p = field.p();
    let n = 4;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let g: Vec<FreePoly> = (0..2).map(|_| poly(&mut rng, field, n, 3, 3)).collect();
        let nf: Vec<NormalPoly> = g.iter().map(straighten).collect();
        let first = comm_nf(&pow_nf(&nf[0], p)?, &nf[1])?;
        if !first.is_zero() {
            return Ok(relation_failure(trial, "[g^p,h]", &g, &first));
        }
        let prod = straighten(&(&g[0] * &g[1]));
        let second =
            pow_nf(&prod, p)?.try_sub(&nm_mul(&pow_nf(&nf[0], p)?, &pow_nf(&nf[1], p)?)?)?;
        if !second.is_zero() {
            return Ok(relation_failure(trial, "(g1g2)^p-g1^pg2^p", &g, &second));
        }
        let sum = straighten(&(&g[0] + &g[1]));
        let third = pow_nf(&sum, p)?
            .try_sub(&pow_nf(&nf[0], p)?)?
            .try_sub(&pow_nf(&nf[1], p)?)?;
        if !third.is_zero() {
            return Ok(relation_failure(trial, "(g1+g2)^p-g1^p-g2^p", &g, &third));
        }
    }
    Ok(Outcome {
        params: json!({ "trials": cfg.trials, "n": n, "max_degree": 3 }),
        pass: true,
        witness: json!({ "holding": format!("{}/{}", cfg.trials, cfg.trials) }),
    })
}

const LADDER: [(u32, u32); 3] = [(1, 1), (1, 2), (2, 1)];

/// The multidegree-`(p^(l-1), ...)` component of `q_k^(l)(1+x_1, ..., 1+x_2k)`
/// is `gamma q_k^(l-1)` with `gamma = 1`.
fn gamma(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let p = field.p() as u64;
    let mut rows = Vec::new();
    let mut pass = true;
    for (k, l) in LADDER {
        let n = 2 * k as usize;
        let q = q_poly(k, l, field)?;
        let shifted: Vec<FreePoly> = (1..=n as Var)
            .map(|i| &FreePoly::one(field, n) + &FreePoly::var(field, n, i).expect("in range"))
            .collect();
        let expanded = q.substitute(&shifted)?;
        let d = MultiDegree(vec![p.pow(l - 1) as u32; n]);
        let comp = expanded
            .components()
            .remove(&d)
            .unwrap_or_else(|| FreePoly::zero(field, n));
        let lower = q_poly(k, l - 1, field)?;
        let (w, c) = lower
            .terms()
            .next()
            .map(|(w, c)| (w.clone(), c))
            .expect("q is nonzero");
        let g = field.mul(comp.coeff(&w), field.inv(c).expect("nonzero"));
        let proportional = comp == lower.scale(g);
        let predicted = field.pow(field.binomial(p.pow(l) - 1, p.pow(l - 1) - 1), 2 * k as u64);
        let ok = proportional && g == 1 && predicted == 1;
        pass &= ok;
        rows.push(json!({
            "k": k,
            "l": l,
            "d": d.to_string(),
            "gamma": g,
            "predicted": predicted,
            "proportional": proportional,
        }));
    }
    Ok(Outcome {
        params: json!({ "pairs": LADDER.to_vec() }),
        pass,
        witness: Value::Array(rows),
    })
}

/// `q_k^(l-1)` lies in `Q^(k,l)`.
fn qladder(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let e = Engine::new(cfg.engine.clone());
    let mut rows = Vec::new();
    let mut pass = true;
    for (k, l) in LADDER {
        let r = e.member(
            &q_poly(k, l - 1, field)?,
            &spec_q(field, 2 * k as usize, k, l)?,
        )?;
        pass &= r.member;
        rows.push(json!({ "k": k, "l": l, "report": report_json(&r) }));
    }
    Ok(Outcome {
        params: json!({ "pairs": LADDER.to_vec() }),
        pass,
        witness: Value::Array(rows),
    })
}

fn degrees(n: usize, max_total: u32) -> Vec<MultiDegree> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for k in 0..=max_total - used {
                let mut w: Vec<u32> = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out.into_iter().map(MultiDegree).collect()
}

/// `T^(3,2)` meets two and three variables only in `T^(3)`: every component
/// of total degree at most 8 is zero, computed without capacity pruning.
fn t3n(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let e = Engine::new(EngineConfig {
        capacity_pruning: false,
        ..cfg.engine.clone()
    });
    let max_total = 8;
    let mut rows = Vec::new();
    let mut pass = true;
    for n in [2usize, 3] {
        let spec = spec_t3k(field, n, 2)?;
        let ds = degrees(n, max_total);
        let mut nonzero = Vec::new();
        for d in &ds {
            let rank = e.dim(&spec, d)?;
            if rank != 0 {
                nonzero.push(
                    json!({ "d": d.to_string(), "rank": rank, "frame_size": frame(d).len() }),
                );
            }
        }
        pass &= nonzero.is_empty();
        rows.push(json!({ "n": n, "i": 2, "multidegrees": ds.len(), "nonzero": nonzero }));
    }
    // the same ideal is visible once four variables are available
    let control = e.dim(&spec_t3k(field, 4, 2)?, &MultiDegree(vec![1, 1, 1, 1]))?;
    pass &= control == 1;
    Ok(Outcome {
        params: json!({ "i": 2, "n": [2, 3], "max_total": max_total, "capacity_pruning": false }),
        pass,
        witness: json!({ "instances": rows, "control_rank_n4": control }),
    })
}

/// `x1^(p-1) x2^(2p-1) [x1,x2]` and `q_1^(1)` generate the same T-space.
fn lgt(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let p = field.p();
    let e = Engine::new(cfg.engine.clone());
    let m = parse_poly(&format!("x1^{}*x2^{}*[x1,x2]", p - 1, 2 * p - 1), field)?;
    let q = spec_q(field, 2, 1, 1)?;
    let ms = GeneratorSpec::new(field, 2).space(m.clone())?;
    let forward = e.member(&m, &q)?;
    let backward = e.member(&q_poly(1, 1, field)?, &ms)?;
    Ok(Outcome {
        params: json!({ "m": text(&m), "k": 1, "l": 1 }),
        pass: forward.member && backward.member,
        witness: json!({ "m_in_Q": report_json(&forward), "q_in_m": report_json(&backward) }),
    })
}

/// Centrality of the generators of `C(G)` and non-centrality of `x1`, `x1 x2`.
fn central(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let mut expected: Vec<(FreePoly, bool)> = Vec::new();
    for j in 0..=2 {
        expected.push((x1p_qj(field, j)?, true));
    }
    expected.push((t3_space_generator(field), true));
    expected.push((parse_poly("x1", field)?, false));
    expected.push((parse_poly("x1*x2", field)?, false));
    let mut rows = Vec::new();
    let mut pass = true;
    for (f, want) in expected {
        let got = is_central_for_g(&f);
        pass &= got == want;
        let refuted = if got {
            None
        } else {
            falsify(&f, FalsifyMode::Central, 8, 100, cfg.seed)?.map(|c| c.trial)
        };
        rows.push(json!({ "poly": text(&f), "central": got, "expected": want, "refuted_at_trial": refuted }));
    }
    Ok(Outcome {
        params: Value::Null,
        pass,
        witness: Value::Array(rows),
    })
}

/// `q_1^(2)` lies outside `U^(0) + Q^(1,1)` and inside `U^(0) + Q^(1,1) + Q^(1,2)`.
fn prop10(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let e = Engine::new(cfg.engine.clone());
    let target = q_poly(1, 2, field)?;
    let v1 = e.member(&target, &spec_v_stage(field, 2, 1, 1)?)?;
    let v2 = e.member(&target, &spec_v_stage(field, 2, 2, 1)?)?;
    Ok(Outcome {
        params: json!({ "k": 1, "n": 2, "target": "q_1^(2)" }),
        pass: !v1.member && v2.member,
        witness: json!({ "V_1": report_json(&v1), "V_2": report_json(&v2) }),
    })
}

/// The same strict step with `T^(3,2)` added, over four variables.
fn rkchain(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let e = Engine::new(cfg.engine.clone());
    let target = q_poly(1, 2, field)?;
    let v1 = e.member(&target, &spec_v(field, 4, 1, 1)?)?;
    let v2 = e.member(&target, &spec_v(field, 4, 2, 1)?)?;
    Ok(Outcome {
        params: json!({ "k": 1, "n": 4, "target": "q_1^(2)" }),
        pass: !v1.member && v2.member,
        witness: json!({ "V_1": report_json(&v1), "V_2": report_json(&v2) }),
    })
}

/// `x1[x2,x3][x4,x5]` lies in `R_1` but is not central.
fn rksep(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let e = Engine::new(cfg.engine.clone());
    let f = parse_poly("x1*[x2,x3]*[x4,x5]", field)?;
    let r = e.member(&f, &spec_r(field, 5, 1, DEFAULT_LEVELS)?)?;
    // generators x1^p q_j with j > 2 vanish at total degree 5
    let c = e.member(&f, &spec_cg(field, 5, 2)?)?;
    Ok(Outcome {
        params: json!({ "poly": text(&f), "k": 1, "n": 5, "levels": DEFAULT_LEVELS }),
        pass: r.member && !c.member,
        witness: json!({ "R_1": report_json(&r), "C(G)": report_json(&c) }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Shape {
    Everything,
    Commutators,
    Theta(usize),
}

fn shape_spec(field: PrimeField, n: usize, shape: Shape) -> Result<GeneratorSpec> {
    let x = |i: Var| FreePoly::var(field, n, i).expect("shape variables fit in n");
    let comm = x(1).commutator(&x(2))?;
    let s = GeneratorSpec::new(field, n);
    match shape {
        Shape::Everything => s.space(x(1)),
        Shape::Commutators => s.space(comm),
        Shape::Theta(t) => {
            let mut g = x(1);
            for i in 0..t {
                let a = 2 * i as Var + 2;
                g = &g * &x(a).commutator(&x(a + 1))?;
            }
            s.space(g)?.space(comm)
        }
    }
}

/// `<f> + <[x1,x2]> + T^(3)` is one of the three shapes allowed when some
/// variable occurs with degree one, checked at every multidegree of total at most 6.
fn lemma11(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let e = Engine::new(cfg.engine.clone());
    let max_total = 6;
    let instances: [(&str, usize, Shape); 7] = [
        ("x1*[x2,x3]*x4", 4, Shape::Theta(1)),
        ("x2*[x1,x3]*x4", 4, Shape::Theta(1)),
        ("x1*x2^2*[x3,x4]", 4, Shape::Theta(1)),
        ("x1*[x2,x3]*[x4,x5]", 5, Shape::Theta(2)),
        ("x1*x2", 2, Shape::Everything),
        ("x1*x2 + x3*x4", 4, Shape::Everything),
        ("[x1,x2]", 2, Shape::Commutators),
    ];
    let mut rows = Vec::new();
    let mut pass = true;
    for (src, n, expected) in instances {
        let f = parse_poly(src, field)?;
        let l = GeneratorSpec::new(field, n)
            .space(f)?
            .space(parse_poly("[x1,x2]", field)?)?;
        let mut shapes = vec![Shape::Everything, Shape::Commutators];
        shapes.extend((1..=(n - 1) / 2).map(Shape::Theta));
        let candidates: Vec<(Shape, GeneratorSpec)> = shapes
            .into_iter()
            .map(|s| Ok((s, shape_spec(field, n, s)?)))
            .collect::<Result<_>>()?;
        let mut alive: Vec<bool> = vec![true; candidates.len()];
        for d in degrees(n, max_total) {
            let lb = e.component_basis(&l, &d)?;
            for (i, (_, spec)) in candidates.iter().enumerate() {
                if alive[i] && e.component_basis(spec, &d)?.rows != lb.rows {
                    alive[i] = false;
                }
            }
        }
        let matched: Vec<Shape> = candidates
            .iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|((s, _), _)| *s)
            .collect();
        let ok = matched == [expected];
        pass &= ok;
        rows.push(json!({ "f": src, "n": n, "expected": expected, "matched": matched }));
    }
    Ok(Outcome {
        params: json!({ "max_total": max_total }),
        pass,
        witness: Value::Array(rows),
    })
}

/// Checks `w - lift(straighten(w))` on `words` random words (degree at most 6
/// in at most 4 variables) against `subs` random substitutions into `G_8`.
/// Returns the first offending word.
pub fn rewriting_soundness(
    field: PrimeField,
    words: u64,
    subs: u64,
    seed: u64,
) -> Result<Option<String>> {
    let n = 4;
    let substitutions: Vec<_> = (0..subs)
        .map(|t| trial_substitution(field, n, 8, seed, t))
        .collect::<Result<_>>()?;
    for i in 0..words {
        let mut rng = trial_rng(seed ^ 0x5157, i);
        let vars = rng.gen_range(1..=n);
        let w = FreePoly::word(field, n, &word(&mut rng, vars, 0, 6))?;
        let diff = w.try_sub(&straighten(&w).lift())?;
        for s in &substitutions {
            if !evaluate(&diff, s)?.is_zero() {
                return Ok(Some(text(&w)));
            }
        }
    }
    Ok(None)
}

fn basis_image_rank_deficits(field: PrimeField, seed: u64) -> Result<Vec<Value>> {
    let n = 3;
    let subs: Vec<_> = (0..200)
        .map(|t| trial_substitution(field, n, 10, seed, t))
        .collect::<Result<_>>()?;
    let mut bad = Vec::new();
    for d in degrees(n, 5) {
        let fr = frame(&d);
        let mut cols: HashMap<(usize, u64), usize> = HashMap::new();
        let mut sparse = Vec::with_capacity(fr.len());
        for m in &fr {
            let lifted = m.lift(field);
            let mut row = Vec::new();
            for (t, s) in subs.iter().enumerate() {
                for (mask, c) in evaluate(&lifted, s)?.terms() {
                    let next = cols.len();
                    row.push((*cols.entry((t, mask)).or_insert(next), c));
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
        if ech.rank() != fr.len() {
            bad.push(json!({ "d": d.to_string(), "frame_size": fr.len(), "rank": ech.rank() }));
        }
    }
    Ok(bad)
}

/// Normal form against Grassmann evaluation: rewriting soundness, decisions
/// never refuted by evaluation, and independence of basis images.
fn gxval(cfg: &HarnessConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let words = 500;
    let subs = 20;
    let offending_word = rewriting_soundness(field, words, subs, cfg.seed)?;

    let mut identities = 0;
    let mut centrals = 0;
    let mut refuted_non_central = 0;
    let mut contradictions = Vec::new();
    for i in 0..200u64 {
        let mut rng = trial_rng(cfg.seed ^ 0x6a7e, i);
        let f = mixed_poly(&mut rng, field);
        if is_identity_of_g(&f) {
            identities += 1;
            if let Some(c) = falsify(&f, FalsifyMode::Identity, 8, 100, cfg.seed)? {
                contradictions
                    .push(json!({ "poly": text(&f), "mode": "identity", "trial": c.trial }));
            }
        }
        let cent = falsify(&f, FalsifyMode::Central, 8, 100, cfg.seed)?;
        if is_central_for_g(&f) {
            centrals += 1;
            if let Some(c) = cent {
                contradictions
                    .push(json!({ "poly": text(&f), "mode": "central", "trial": c.trial }));
            }
        } else if cent.is_some() {
            refuted_non_central += 1;
        }
    }
    let deficits = basis_image_rank_deficits(field, cfg.seed)?;
    Ok(Outcome {
        params: json!({ "words": words, "word_substitutions": subs, "s": 8, "random_polys": 200, "falsify_trials": 100 }),
        pass: offending_word.is_none() && contradictions.is_empty() && deficits.is_empty(),
        witness: json!({
            "offending_word": offending_word,
            "identities": identities,
            "centrals": centrals,
            "refuted_non_central": refuted_non_central,
            "contradictions": contradictions,
            "basis_image_deficits": deficits,
        }),
    })
}

/// Result of comparing `T^(3,k)` components with the span of basis elements
/// having at least `k` commutators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanCheck {
    pub multidegrees: usize,
    pub mismatches: Vec<MultiDegree>,
}

/// Compares the closure computation of `T^(3,k)` over `n` variables with the
/// span predicted by the commutator count, at every multidegree of total at
/// most `max_total`.
pub fn t3k_span_check(
    field: PrimeField,
    n: usize,
    k: u32,
    max_total: u32,
    config: &EngineConfig,
) -> Result<SpanCheck> {
    let e = Engine::new(config.clone());
    let spec = spec_t3k(field, n, k)?;
    let ds = degrees(n, max_total);
    let mut mismatches = Vec::new();
    for d in &ds {
        let b: ComponentBasis = e.component_basis(&spec, d)?;
        let mut want = Echelon::new(field, b.frame.len());
        for (i, m) in b.frame.iter().enumerate() {
            if NormalPoly::monomial(field, m.clone(), 1).in_t3k_span(k as usize) {
                let mut v = vec![0; b.frame.len()];
                v[i] = 1;
                want.insert(&v);
            }
        }
        if want.rows() != b.rows.as_slice() {
            mismatches.push(d.clone());
        }
    }
    Ok(SpanCheck {
        multidegrees: ds.len(),
        mismatches,
    })
}
