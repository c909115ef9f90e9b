//! Multidegree components of T-subspaces of `F<X_n>/T^(3)`.
//!
//! A generator `g` of multidegree `D` contributes, at multidegree `d`, the
//! span of the polarization coefficients `P_delta g(b_1, ..., b_r)` with the
//! `b_j` basis monomials (the unit included). These are evaluated in the
//! supercommutative model of [`crate::supermodel`], where the image of `b_j`
//! depends only on its commutator set and on its exponents mod `p`. Basis
//! monomials are therefore grouped into *types*; a configuration assigns types
//! and multiplicities to the slots of each generator variable, and is kept
//! when some choice of actual monomials of those types lands exactly on `d`.
//!
//! T-ideal generators `f` are handled as T-space generators `y f y'` with two
//! fresh variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::echelon::Echelon;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::freepoly::FreePoly;
use crate::normalform::{straighten, NormalMonomial, NormalPoly};
use crate::supermodel::{
    basis_image, is_zero_vec, super_add_assign, super_mul, FrameModel, Support,
};
use crate::word::{MultiDegree, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    /// Closed under endomorphisms.
    Space,
    /// Closed under endomorphisms and two-sided multiplication.
    Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub poly: FreePoly,
    pub closure: Closure,
}

/// A finite generator list defining a subspace of `F<X_n>/T^(3)`.
///
/// Generators may use more variables than `n`: substitution sends them into
/// `F<X_n>` anyway.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    field: PrimeField,
    n: usize,
    label: String,
    generators: Vec<Generator>,
}

impl GeneratorSpec {
    pub fn new(field: PrimeField, n: usize) -> Self {
        GeneratorSpec {
            field,
            n,
            label: String::new(),
            generators: Vec::new(),
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn push(&mut self, poly: FreePoly, closure: Closure) -> Result<()> {
        if poly.field() != self.field {
            return Err(Error::Config("generator over a different field".into()));
        }
        self.generators.push(Generator { poly, closure });
        Ok(())
    }

    pub fn space(mut self, poly: FreePoly) -> Result<Self> {
        self.push(poly, Closure::Space)?;
        Ok(self)
    }

    pub fn ideal(mut self, poly: FreePoly) -> Result<Self> {
        self.push(poly, Closure::Ideal)?;
        Ok(self)
    }

    /// The sum of two subspaces.
    pub fn union(&self, other: &GeneratorSpec) -> Result<GeneratorSpec> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Config(
                "summing subspaces over different ambients".into(),
            ));
        }
        let label = match (self.label.is_empty(), other.label.is_empty()) {
            (false, false) => format!("{} + {}", self.label, other.label),
            (false, true) => self.label.clone(),
            (true, _) => other.label.clone(),
        };
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(GeneratorSpec {
            field: self.field,
            n: self.n,
            label,
            generators,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Canonical text determining the subspace (used for cache keys).
    pub fn canonical_text(&self) -> String {
        let mut out = format!("p={};n={}", self.field.p(), self.n);
        for g in &self.generators {
            let tag = match g.closure {
                Closure::Space => "space",
                Closure::Ideal => "ideal",
            };
            out.push_str(&format!(";{tag}:{}", g.poly));
        }
        out
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_empty() {
            write!(f, "{}", self.canonical_text())
        } else {
            write!(f, "{}", self.label)
        }
    }
}

/// Budgets and switches for the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Largest total degree of a multidegree that may be examined.
    pub max_degree: u32,
    /// Largest frame (component dimension) handled.
    pub max_frame: usize,
    /// Largest number of configurations plus evaluated instances per component.
    pub max_instances: u64,
    /// Skip partial configurations whose commutator slots cannot fit in the
    /// support of `d`. Sound in the supercommutative model; disabling it only
    /// costs time.
    pub capacity_pruning: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_degree: 18,
            max_frame: 5000,
            max_instances: 2_000_000,
            capacity_pruning: true,
        }
    }
}

/// The reduced echelon basis of one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentBasis {
    pub d: MultiDegree,
    pub frame: Vec<NormalMonomial>,
    pub rows: Vec<Vec<u32>>,
}

impl ComponentBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, field: PrimeField, v: &[u32]) -> bool {
        Echelon::from_rows(field, self.frame.len(), self.rows.iter().cloned()).contains(v)
    }
}

/// Cache key for a computed component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisKey {
    pub p: u32,
    pub n: usize,
    pub spec: String,
    pub d: MultiDegree,
}

/// Persistent storage for computed components.
pub trait BasisStore: Send + Sync {
    fn load(&self, key: &BasisKey) -> Option<ComponentBasis>;
    fn save(&self, key: &BasisKey, basis: &ComponentBasis);
}

/// All basis monomials of multidegree `d`, in canonical order.
pub fn frame(d: &MultiDegree) -> Vec<NormalMonomial> {
    let sup = Support::of(d);
    let w = sup.width();
    let mut out = Vec::with_capacity(1 << w.saturating_sub(1));
    for jmask in 0u64..(1u64 << w) {
        if jmask.count_ones() % 2 != 0 {
            continue;
        }
        let mut e = d.0.clone();
        let mut comm = Vec::new();
        for (k, &v) in sup.vars().iter().enumerate() {
            if jmask >> k & 1 == 1 {
                e[v as usize - 1] -= 1;
                comm.push(v);
            }
        }
        out.push(NormalMonomial::from_parts_unchecked(e, comm));
    }
    out.sort();
    out
}

/// Number of basis monomials of multidegree `d`.
pub fn frame_len(d: &MultiDegree) -> u64 {
    let w = Support::of(d).width() as u32;
    if w == 0 {
        1
    } else {
        1u64 << (w - 1)
    }
}

/// Outcome of a membership test at one multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub d: MultiDegree,
    pub frame_size: usize,
    /// Rank of the subspace found before stopping.
    pub rank: usize,
    /// Rank after adding the target component.
    pub rank_with_target: usize,
    /// The enumeration ran to completion (so `rank` is the exact dimension).
    pub complete: bool,
    pub contains: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberReport {
    pub member: bool,
    pub components: Vec<ComponentVerdict>,
}

struct PreparedTerm {
    coef: u32,
    m: Vec<u32>,
    jmask: u64,
    s: u32,
}

struct Prepared {
    label: String,
    degrees: Vec<u32>,
    terms: Vec<PreparedTerm>,
}

fn prepare(spec: &GeneratorSpec) -> Result<Vec<Prepared>> {
    let field = spec.field;
    let mut out = Vec::new();
    for g in &spec.generators {
        let label = g.poly.to_string();
        let vars = (g.poly.max_var() as usize).max(1);
        let base = g.poly.with_ambient(vars)?;
        let poly = match g.closure {
            Closure::Space => base,
            Closure::Ideal => {
                let wide = base.with_ambient(vars + 2)?;
                let y = FreePoly::var(field, vars + 2, (vars + 1) as Var)?;
                let y2 = FreePoly::var(field, vars + 2, (vars + 2) as Var)?;
                &(&y * &wide) * &y2
            }
        };
        for (deg, comp) in straighten(&poly).components() {
            let terms = comp
                .terms()
                .map(|(m, c)| PreparedTerm {
                    coef: c,
                    m: m.exponents().to_vec(),
                    jmask: m.comm_indices().iter().fold(0u64, |a, &j| a | 1 << (j - 1)),
                    s: m.s() as u32,
                })
                .collect();
            out.push(Prepared {
                label: label.clone(),
                degrees: deg.0,
                terms,
            });
        }
    }
    Ok(out)
}

struct TypeInfo {
    emin: Vec<u32>,
    jbits: u32,
    v0_pows: Vec<Arc<Vec<u32>>>,
    v1: Arc<Vec<u32>>,
}

fn enumerate_types(field: PrimeField, local_d: &[u32], max_pow: u32) -> Vec<TypeInfo> {
    let w = local_d.len();
    let p = field.p();
    let size = 1usize << w;
    let mut out = Vec::new();
    for jmask in 0u32..(1 << w) {
        if jmask.count_ones() % 2 != 0 {
            continue;
        }
        // residues with e_min = res + 1_J <= d
        let bounds: Vec<u32> = (0..w)
            .map(|k| {
                let lb = jmask >> k & 1;
                if local_d[k] < lb {
                    0
                } else {
                    (local_d[k] - lb).min(p - 1) + 1
                }
            })
            .collect();
        if bounds.contains(&0) {
            continue;
        }
        let mut res = vec![0u32; w];
        loop {
            let emin: Vec<u32> = (0..w).map(|k| res[k] + (jmask >> k & 1)).collect();
            let img = basis_image(field, w, &res, jmask);
            let mut v0 = vec![0u32; size];
            let mut v1 = vec![0u32; size];
            for (s, &c) in img.iter().enumerate() {
                if s.count_ones() % 2 == 0 {
                    v0[s] = c;
                } else {
                    v1[s] = c;
                }
            }
            let top = if jmask == 0 { max_pow } else { 1 };
            let mut pows = Vec::with_capacity(top as usize + 1);
            let mut unit = vec![0u32; size];
            unit[0] = 1;
            pows.push(Arc::new(unit));
            for k in 1..=top as usize {
                let next = super_mul(field, &pows[k - 1], &v0);
                pows.push(Arc::new(next));
            }
            out.push(TypeInfo {
                emin,
                jbits: jmask.count_ones(),
                v0_pows: pows,
                v1: Arc::new(v1),
            });
            // next residue vector
            let mut k = 0;
            while k < w {
                res[k] += 1;
                if res[k] < bounds[k] {
                    break;
                }
                res[k] = 0;
                k += 1;
            }
            if k == w {
                break;
            }
        }
    }
    out
}

/// Slot assignment for one generator variable.
struct Config {
    slots: usize,
    emin: Vec<u32>,
    bits: u32,
    gens: u32,
    /// Per term: the variable's factor, `None` when it vanishes.
    factors: Vec<Option<Arc<Vec<u32>>>>,
}

fn digits_mask(mut delta: u32, p: u32) -> u32 {
    let mut mask = 0;
    let mut i = 0;
    while delta > 0 {
        if !delta.is_multiple_of(p) {
            mask |= 1 << i;
        }
        delta /= p;
        i += 1;
    }
    mask
}

struct Budget<'a> {
    used: u64,
    limit: u64,
    label: &'a str,
    d: &'a MultiDegree,
}

impl Budget<'_> {
    fn spend(&mut self, k: u64) -> Result<()> {
        self.used += k;
        if self.used > self.limit {
            return Err(Error::Resource(format!(
                "instance budget {} exceeded for generator {} at multidegree {}",
                self.limit, self.label, self.d
            )));
        }
        Ok(())
    }
}

fn product(
    field: PrimeField,
    size: usize,
    factors: impl IntoIterator<Item = Arc<Vec<u32>>>,
) -> Vec<u32> {
    let mut acc = vec![0u32; size];
    acc[0] = 1;
    for f in factors {
        acc = super_mul(field, &acc, &f);
        if is_zero_vec(&acc) {
            break;
        }
    }
    acc
}

/// Factor of one generator variable for one term, given the slot list.
fn var_factor(
    field: PrimeField,
    types: &[TypeInfo],
    slots: &[(usize, u32)],
    m: u32,
    in_j: bool,
    size: usize,
) -> Vec<u32> {
    let deltas: Vec<u64> = slots.iter().map(|&(_, d)| d as u64).collect();
    let mut out = vec![0u32; size];
    let pow_of = |t: usize, e: u32| types[t].v0_pows.get(e as usize).cloned();
    if !in_j {
        let c = field.multinomial(&deltas);
        if c == 0 {
            return out;
        }
        // (u0 + u1)^m picks up u0^m + m u0^{m-1} u1
        let all: Option<Vec<_>> = slots.iter().map(|&(t, d)| pow_of(t, d)).collect();
        if let Some(all) = all {
            super_add_assign(field, &mut out, &product(field, size, all), c);
        }
        for (j, &(tj, dj)) in slots.iter().enumerate() {
            let mut rest: Vec<u64> = deltas.clone();
            rest[j] -= 1;
            let cj = field.mul(field.reduce(m as u64), field.multinomial(&rest));
            if cj == 0 {
                continue;
            }
            let parts: Option<Vec<_>> = slots
                .iter()
                .enumerate()
                .map(|(k, &(t, d))| pow_of(t, if k == j { d - 1 } else { d }))
                .collect();
            if let Some(mut parts) = parts {
                parts.push(types[tj].v1.clone());
                super_add_assign(field, &mut out, &product(field, size, parts), cj);
            }
            let _ = dj;
        }
    } else {
        // u0^m u1, the odd part of the variable inside a commutator
        for (j, &(tj, _)) in slots.iter().enumerate() {
            let mut rest: Vec<u64> = deltas.clone();
            rest[j] -= 1;
            let cj = field.multinomial(&rest);
            if cj == 0 {
                continue;
            }
            let parts: Option<Vec<_>> = slots
                .iter()
                .enumerate()
                .map(|(k, &(t, d))| pow_of(t, if k == j { d - 1 } else { d }))
                .collect();
            if let Some(mut parts) = parts {
                parts.push(types[tj].v1.clone());
                super_add_assign(field, &mut out, &product(field, size, parts), cj);
            }
        }
        let _ = m;
    }
    out
}

/// Enumeration state for one prepared generator at one multidegree.
struct Search<'a> {
    field: PrimeField,
    size: usize,
    width: u32,
    local_d: Vec<u32>,
    gen: &'a Prepared,
    vars: Vec<usize>,
    configs: Vec<Vec<Config>>,
    capacity: bool,
    min_j_bits: u32,
}

fn build_configs(
    field: PrimeField,
    types: &[TypeInfo],
    local_d: &[u32],
    gen: &Prepared,
    var: usize,
    size: usize,
    budget: &mut Budget,
) -> Result<Vec<Config>> {
    let total = gen.degrees[var];
    let p = field.p();
    let mut out = Vec::new();
    let mut slots: Vec<(usize, u32)> = Vec::new();
    let mut emin = vec![0u32; local_d.len()];
    // keyed by (m_i, i in J) to share factors between terms
    #[allow(clippy::too_many_arguments)]
    fn rec(
        field: PrimeField,
        types: &[TypeInfo],
        local_d: &[u32],
        gen: &Prepared,
        var: usize,
        size: usize,
        start: usize,
        remaining: u32,
        slots: &mut Vec<(usize, u32)>,
        emin: &mut Vec<u32>,
        out: &mut Vec<Config>,
        budget: &mut Budget,
        p: u32,
    ) -> Result<()> {
        if remaining == 0 {
            budget.spend(1)?;
            let mut cache: HashMap<(u32, bool), Option<Arc<Vec<u32>>>> = HashMap::new();
            let mut factors = Vec::with_capacity(gen.terms.len());
            for t in &gen.terms {
                let in_j = t.jmask >> var & 1 == 1;
                let m = t.m[var];
                let f = cache
                    .entry((m, in_j))
                    .or_insert_with(|| {
                        let v = var_factor(field, types, slots, m, in_j, size);
                        (!is_zero_vec(&v)).then(|| Arc::new(v))
                    })
                    .clone();
                factors.push(f);
            }
            if factors.iter().all(Option::is_none) {
                return Ok(());
            }
            let bits = slots.iter().map(|&(t, d)| types[t].jbits * d).sum();
            let gens = slots.iter().fold(0, |g, &(_, d)| g | digits_mask(d, p));
            out.push(Config {
                slots: slots.len(),
                emin: emin.clone(),
                bits,
                gens,
                factors,
            });
            return Ok(());
        }
        for t in start..types.len() {
            let ty = &types[t];
            let max_delta = if ty.jbits > 0 { 1 } else { remaining };
            for delta in 1..=max_delta {
                if (0..local_d.len()).any(|k| emin[k] + delta * ty.emin[k] > local_d[k]) {
                    break;
                }
                for k in 0..local_d.len() {
                    emin[k] += delta * ty.emin[k];
                }
                slots.push((t, delta));
                rec(
                    field,
                    types,
                    local_d,
                    gen,
                    var,
                    size,
                    t + 1,
                    remaining - delta,
                    slots,
                    emin,
                    out,
                    budget,
                    p,
                )?;
                slots.pop();
                for k in 0..local_d.len() {
                    emin[k] -= delta * ty.emin[k];
                }
            }
        }
        Ok(())
    }
    rec(
        field, types, local_d, gen, var, size, 0, total, &mut slots, &mut emin, &mut out, budget, p,
    )?;
    out.sort_by_key(|c| c.slots);
    Ok(out)
}

impl Search<'_> {
    fn feasible(&self, emin: &[u32], gens: u32) -> bool {
        let p = self.field.p() as u64;
        let step = if gens == 0 {
            None
        } else {
            Some(p.pow(gens.trailing_zeros()))
        };
        emin.iter().zip(&self.local_d).all(|(&e, &d)| {
            let r = (d - e) as u64;
            if !r.is_multiple_of(p) {
                return false;
            }
            let q = r / p;
            match step {
                None => q == 0,
                Some(s) => q.is_multiple_of(s),
            }
        })
    }

    #[allow(clippy::too_many_arguments)]
    #[allow(clippy::too_many_arguments, clippy::type_complexity)]
    fn dfs(
        &self,
        level: usize,
        limit: usize,
        reached: bool,
        emin: &mut Vec<u32>,
        bits: u32,
        gens: u32,
        partial: &[(Option<Vec<u32>>, Option<Vec<u32>>)],
        sink: &mut dyn FnMut(Vec<u32>) -> Result<bool>,
    ) -> Result<bool> {
        if level == self.vars.len() {
            if !reached || !self.feasible(emin, gens) {
                return Ok(false);
            }
            let mut value = vec![0u32; self.size];
            for (t, (pf, pg)) in self.gen.terms.iter().zip(partial) {
                if let (Some(pf), Some(pg)) = (pf, pg) {
                    let v = super_mul(self.field, pf, pg);
                    let c = self.field.mul(t.coef, self.field.pow(2, t.s as u64));
                    super_add_assign(self.field, &mut value, &v, c);
                }
            }
            return sink(value);
        }
        let var = self.vars[level];
        for cfg in &self.configs[level] {
            if cfg.slots > limit {
                break;
            }
            if (0..emin.len()).any(|k| emin[k] + cfg.emin[k] > self.local_d[k]) {
                continue;
            }
            let nbits = bits + cfg.bits;
            if self.capacity && nbits + self.min_j_bits > self.width {
                continue;
            }
            let mut next = Vec::with_capacity(partial.len());
            let mut alive = false;
            for ((t, (pf, pg)), f) in self.gen.terms.iter().zip(partial).zip(&cfg.factors) {
                let entry = match (pf, pg, f) {
                    (Some(pf), Some(pg), Some(f)) => {
                        if t.jmask >> var & 1 == 1 {
                            let g = super_mul(self.field, pg, f);
                            (Some(pf.clone()), (!is_zero_vec(&g)).then_some(g))
                        } else {
                            let g = super_mul(self.field, pf, f);
                            ((!is_zero_vec(&g)).then_some(g), Some(pg.clone()))
                        }
                    }
                    _ => (None, None),
                };
                if let (Some(_), Some(_)) = entry {
                    alive = true;
                    next.push(entry);
                } else {
                    next.push((None, None));
                }
            }
            if !alive {
                continue;
            }
            for k in 0..emin.len() {
                emin[k] += cfg.emin[k];
            }
            let stop = self.dfs(
                level + 1,
                limit,
                reached || cfg.slots == limit,
                emin,
                nbits,
                gens | cfg.gens,
                &next,
                sink,
            )?;
            for k in 0..emin.len() {
                emin[k] -= cfg.emin[k];
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Instances are checked against the stop condition in chunks of this size.
const CHUNK: usize = 64;

/// The computation engine: budgets plus an optional basis store.
#[derive(Clone, Default)]
pub struct Engine {
    pub config: EngineConfig,
    store: Option<Arc<dyn BasisStore>>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("config", &self.config)
            .field("store", &self.store.is_some())
            .finish()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Engine {
            config,
            store: None,
        }
    }

    pub fn with_store(mut self, store: Arc<dyn BasisStore>) -> Self {
        self.store = Some(store);
        self
    }

    fn check_d(&self, spec: &GeneratorSpec, d: &MultiDegree) -> Result<()> {
        if d.n() != spec.n {
            return Err(Error::Config(format!(
                "multidegree {d} has {} entries but the ambient has {} variables",
                d.n(),
                spec.n
            )));
        }
        if d.total() > self.config.max_degree {
            return Err(Error::Resource(format!(
                "multidegree {d} exceeds the degree budget {}",
                self.config.max_degree
            )));
        }
        let len = frame_len(d);
        if len > self.config.max_frame as u64 {
            return Err(Error::Resource(format!(
                "frame at {d} has {len} elements, above the budget {}",
                self.config.max_frame
            )));
        }
        Ok(())
    }

    fn key(spec: &GeneratorSpec, d: &MultiDegree) -> BasisKey {
        BasisKey {
            p: spec.field.p(),
            n: spec.n,
            spec: spec.canonical_text(),
            d: d.clone(),
        }
    }

    /// Runs the enumeration, feeding frame-coordinate vectors into `ech` until
    /// `stop` holds. Returns whether the enumeration was cut short.
    fn accumulate(
        &self,
        spec: &GeneratorSpec,
        d: &MultiDegree,
        model: &FrameModel,
        ech: &mut Echelon,
        stop: &dyn Fn(&Echelon) -> bool,
    ) -> Result<bool> {
        let field = spec.field;
        let sup = model.support();
        let local_d = sup.local_degrees(d);
        let size = 1usize << sup.width();
        let prepared = prepare(spec)?;
        let max_pow = prepared
            .iter()
            .flat_map(|g| g.degrees.iter().copied())
            .max()
            .unwrap_or(0);
        let types = enumerate_types(field, &local_d, max_pow);
        if stop(ech) {
            return Ok(true);
        }
        for gen in &prepared {
            let mut budget = Budget {
                used: 0,
                limit: self.config.max_instances,
                label: &gen.label,
                d,
            };
            let vars: Vec<usize> = (0..gen.degrees.len())
                .filter(|&i| gen.degrees[i] > 0)
                .collect();
            let mut configs = Vec::with_capacity(vars.len());
            let mut dead = false;
            for &v in &vars {
                let c = build_configs(field, &types, &local_d, gen, v, size, &mut budget)?;
                dead |= c.is_empty();
                configs.push(c);
            }
            if dead {
                continue;
            }
            let max_slots = configs
                .iter()
                .flat_map(|c| c.iter().map(|x| x.slots))
                .max()
                .unwrap_or(0);
            let search = Search {
                field,
                size,
                width: sup.width() as u32,
                local_d: local_d.clone(),
                gen,
                vars,
                configs,
                capacity: self.config.capacity_pruning,
                min_j_bits: gen.terms.iter().map(|t| 2 * t.s).min().unwrap_or(0),
            };
            let mut unit = vec![0u32; size];
            unit[0] = 1;
            let start: Vec<_> = gen
                .terms
                .iter()
                .map(|_| (Some(unit.clone()), Some(unit.clone())))
                .collect();
            let mut pending = 0usize;
            let mut failure: Option<Error> = None;
            let mut sink = |value: Vec<u32>| -> Result<bool> {
                budget.spend(1)?;
                let coords = model.coordinates(&value)?;
                ech.insert(&coords);
                pending += 1;
                if pending >= CHUNK || ech.is_full() {
                    pending = 0;
                    return Ok(stop(ech));
                }
                Ok(false)
            };
            let mut stopped = false;
            for limit in 1..=max_slots.max(if search.vars.is_empty() { 1 } else { 0 }) {
                let mut emin = vec![0u32; local_d.len()];
                let reached = search.vars.is_empty();
                match search.dfs(0, limit, reached, &mut emin, 0, 0, &start, &mut sink) {
                    Ok(true) => {
                        stopped = true;
                        break;
                    }
                    Ok(false) => {}
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            if let Some(e) = failure {
                return Err(e);
            }
            if stopped || stop(ech) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Reduced echelon basis of the multidegree-`d` component of `spec`.
    pub fn component_basis(&self, spec: &GeneratorSpec, d: &MultiDegree) -> Result<ComponentBasis> {
        self.check_d(spec, d)?;
        let key = Engine::key(spec, d);
        if let Some(store) = &self.store {
            if let Some(b) = store.load(&key) {
                if b.d == *d && b.frame == frame(d) {
                    return Ok(b);
                }
            }
        }
        let model = FrameModel::new(spec.field, d)?;
        let mut ech = Echelon::new(spec.field, model.len());
        self.accumulate(spec, d, &model, &mut ech, &|e| e.is_full())?;
        let basis = ComponentBasis {
            d: d.clone(),
            frame: model.monomials().to_vec(),
            rows: ech.into_rows(),
        };
        if let Some(store) = &self.store {
            store.save(&key, &basis);
        }
        Ok(basis)
    }

    pub fn dim(&self, spec: &GeneratorSpec, d: &MultiDegree) -> Result<usize> {
        Ok(self.component_basis(spec, d)?.rank())
    }

    pub fn subspace_equal(
        &self,
        a: &GeneratorSpec,
        b: &GeneratorSpec,
        d: &MultiDegree,
    ) -> Result<bool> {
        Ok(self.component_basis(a, d)?.rows == self.component_basis(b, d)?.rows)
    }

    /// Coordinates of a multihomogeneous normal form in the frame at `d`.
    pub fn coordinates(poly: &NormalPoly, d: &MultiDegree) -> Vec<u32> {
        frame(d).iter().map(|m| poly.coeff(m)).collect()
    }

    /// Decides whether one multihomogeneous component lies in `spec`.
    pub fn member_component(
        &self,
        comp: &NormalPoly,
        d: &MultiDegree,
        spec: &GeneratorSpec,
    ) -> Result<ComponentVerdict> {
        self.check_d(spec, d)?;
        let target = Engine::coordinates(comp, d);
        let field = spec.field;
        if let Some(store) = &self.store {
            if let Some(b) = store.load(&Engine::key(spec, d)) {
                if b.d == *d && b.frame == frame(d) {
                    let ech = Echelon::from_rows(field, b.frame.len(), b.rows.iter().cloned());
                    let contains = ech.contains(&target);
                    return Ok(ComponentVerdict {
                        d: d.clone(),
                        frame_size: b.frame.len(),
                        rank: ech.rank(),
                        rank_with_target: ech.rank() + usize::from(!contains),
                        complete: true,
                        contains,
                    });
                }
            }
        }
        let model = FrameModel::new(field, d)?;
        let mut ech = Echelon::new(field, model.len());
        let stopped = self.accumulate(spec, d, &model, &mut ech, &|e| {
            e.is_full() || e.contains(&target)
        })?;
        let contains = ech.contains(&target);
        let rank = ech.rank();
        if !stopped {
            if let Some(store) = &self.store {
                let basis = ComponentBasis {
                    d: d.clone(),
                    frame: model.monomials().to_vec(),
                    rows: ech.rows().to_vec(),
                };
                store.save(&Engine::key(spec, d), &basis);
            }
        }
        Ok(ComponentVerdict {
            d: d.clone(),
            frame_size: model.len(),
            rank,
            rank_with_target: rank + usize::from(!contains),
            complete: !stopped || ech.is_full(),
            contains,
        })
    }

    /// Every multihomogeneous component of `f + T^(3)` lies in `spec`.
    pub fn member(&self, f: &FreePoly, spec: &GeneratorSpec) -> Result<MemberReport> {
        if f.field() != spec.field {
            return Err(Error::Config(
                "target and generators over different fields".into(),
            ));
        }
        let f = f.with_ambient(spec.n)?;
        let comps: BTreeMap<MultiDegree, NormalPoly> = straighten(&f).components();
        let mut components = Vec::with_capacity(comps.len());
        for (d, comp) in &comps {
            components.push(self.member_component(comp, d, spec)?);
        }
        Ok(MemberReport {
            member: components.iter().all(|c| c.contains),
            components,
        })
    }
}
