//! The Grassmann algebra `G_s` over `F_p`, used as an evaluation oracle.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::freepoly::FreePoly;

/// Largest supported number of generators.
pub const MAX_S: usize = 62;

/// Maximum number of support terms in a random element.
pub const RANDOM_TERMS: usize = 8;

/// Largest subset size in a random support term. Products of several elements
/// with large supports vanish almost surely, which would blind the oracle.
pub const RANDOM_TERM_WIDTH: usize = 2;

/// Sign of `e_A * e_B` relative to `e_{A ∪ B}` for disjoint sorted index sets:
/// the parity of pairs `(a, b)` with `a in A`, `b in B`, `a > b`.
#[inline]
pub fn interleave_sign(a: u64, b: u64) -> bool {
    let mut odd = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        odd += (a >> y >> 1).count_ones();
    }
    odd & 1 == 1
}

/// An element of `G_s`: coefficients indexed by subsets of `{1..s}` (bit `i-1` for `e_i`).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassmannElement {
    field: PrimeField,
    s: usize,
    terms: BTreeMap<u64, u32>,
}

fn check_s(s: usize) -> Result<()> {
    if s > MAX_S {
        return Err(Error::Config(format!("G_s supports s <= {MAX_S}, got {s}")));
    }
    Ok(())
}

impl GrassmannElement {
    pub fn zero(field: PrimeField, s: usize) -> Result<Self> {
        check_s(s)?;
        Ok(GrassmannElement {
            field,
            s,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(field: PrimeField, s: usize, c: u32) -> Result<Self> {
        let mut g = GrassmannElement::zero(field, s)?;
        g.add_term(0, c % field.p());
        Ok(g)
    }

    pub fn one(field: PrimeField, s: usize) -> Result<Self> {
        GrassmannElement::scalar(field, s, 1)
    }

    /// The generator `e_i`, `1 <= i <= s`.
    pub fn generator(field: PrimeField, s: usize, i: usize) -> Result<Self> {
        if i == 0 || i > s {
            return Err(Error::Argument(format!("generator e{i} outside 1..={s}")));
        }
        GrassmannElement::from_terms(field, s, [(1u64 << (i - 1), 1)])
    }

    pub fn from_terms(
        field: PrimeField,
        s: usize,
        terms: impl IntoIterator<Item = (u64, u32)>,
    ) -> Result<Self> {
        let mut g = GrassmannElement::zero(field, s)?;
        let limit = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
        for (mask, c) in terms {
            if mask & !limit != 0 {
                return Err(Error::Argument(format!("subset uses an index above {s}")));
            }
            g.add_term(mask, c % field.p());
        }
        Ok(g)
    }

    fn add_term(&mut self, mask: u64, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.field;
        let e = self.terms.entry(mask).or_insert(0);
        *e = field.add(*e, c);
        if *e == 0 {
            self.terms.remove(&mask);
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, mask: u64) -> u32 {
        self.terms.get(&mask).copied().unwrap_or(0)
    }

    fn check_compat(&self, other: &GrassmannElement) -> Result<()> {
        if self.s != other.s || self.field != other.field {
            return Err(Error::Config(format!(
                "Grassmann elements over G_{} and G_{} (p = {}, {})",
                self.s,
                other.s,
                self.field.p(),
                other.field.p()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GrassmannElement) -> Result<GrassmannElement> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GrassmannElement) -> Result<GrassmannElement> {
        self.try_add(&other.scale(self.field.p() - 1))
    }

    pub fn scale(&self, c: u32) -> GrassmannElement {
        let field = self.field;
        let c = c % field.p();
        let terms = if c == 0 {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(&m, &a)| (m, field.mul(a, c)))
                .collect()
        };
        GrassmannElement {
            field,
            s: self.s,
            terms,
        }
    }

    /// The product `self * other`.
    pub fn g_mul(&self, other: &GrassmannElement) -> Result<GrassmannElement> {
        self.check_compat(other)?;
        let field = self.field;
        let mut out = GrassmannElement {
            field,
            s: self.s,
            terms: BTreeMap::new(),
        };
        for (&a, &x) in &self.terms {
            for (&b, &y) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let mut c = field.mul(x, y);
                if interleave_sign(a, b) {
                    c = field.neg(c);
                }
                out.add_term(a | b, c);
            }
        }
        Ok(out)
    }

    /// `z e_i = e_i z` for every generator.
    pub fn is_central_element(&self) -> bool {
        (1..=self.s).all(|i| {
            let e = GrassmannElement::generator(self.field, self.s, i).expect("i in range");
            self.g_mul(&e).expect("same algebra") == e.g_mul(self).expect("same algebra")
        })
    }

    /// Random element with at most [`RANDOM_TERMS`] support terms, each a
    /// uniform subset of uniform size in `0..=RANDOM_TERM_WIDTH`.
    pub fn random<R: Rng>(field: PrimeField, s: usize, rng: &mut R) -> Result<Self> {
        check_s(s)?;
        let count = rng.gen_range(1..=RANDOM_TERMS);
        let terms: Vec<(u64, u32)> = (0..count)
            .map(|_| {
                let size = rng.gen_range(0..=RANDOM_TERM_WIDTH.min(s));
                let mask = rand::seq::index::sample(rng, s, size)
                    .iter()
                    .fold(0u64, |m, i| m | 1 << i);
                (mask, rng.gen_range(1..field.p()))
            })
            .collect();
        GrassmannElement::from_terms(field, s, terms)
    }
}

impl fmt::Debug for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // same ordering and shape as polynomial printing: lower degree first
        let mut items: Vec<(u64, u32)> = self.terms().collect();
        items.sort_by_key(|&(m, _)| (m.count_ones(), m.reverse_bits()));
        let mut first = true;
        for (m, c) in items {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let body: Vec<String> = (0..64)
                .filter(|b| m >> b & 1 == 1)
                .map(|b| format!("e{}", b + 1))
                .collect();
            match (m, c) {
                (0, c) => write!(f, "{c}")?,
                (_, 1) => write!(f, "{}", body.join("*"))?,
                (_, c) => write!(f, "{c}*{}", body.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Image of `f` under `x_i -> images[i-1]` in `G_s`.
pub fn evaluate(f: &FreePoly, images: &[GrassmannElement]) -> Result<GrassmannElement> {
    let mv = f.max_var() as usize;
    if mv > images.len() {
        return Err(Error::Argument(format!(
            "no Grassmann image assigned to x{mv}"
        )));
    }
    let (field, s) = match images.first() {
        Some(g) => (g.field, g.s),
        None => (f.field(), 0),
    };
    if field != f.field() {
        return Err(Error::Config(
            "Grassmann images over a different field".into(),
        ));
    }
    for g in images {
        if g.s != s || g.field != field {
            return Err(Error::Config(
                "Grassmann images in different algebras".into(),
            ));
        }
    }
    let mut out = GrassmannElement::zero(field, s)?;
    for (w, c) in f.terms() {
        let mut acc = GrassmannElement::scalar(field, s, c)?;
        for &v in w.letters() {
            acc = acc.g_mul(&images[v as usize - 1])?;
            if acc.is_zero() {
                break;
            }
        }
        for (m, c) in acc.terms {
            out.add_term(m, c);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FalsifyMode {
    Identity,
    Central,
}

/// A substitution refuting identity or centrality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: u64,
    pub substitution: Vec<GrassmannElement>,
    pub value: GrassmannElement,
}

/// The seeded random substitution used by trial `trial`.
pub fn trial_substitution(
    field: PrimeField,
    vars: usize,
    s: usize,
    seed: u64,
    trial: u64,
) -> Result<Vec<GrassmannElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    (0..vars)
        .map(|_| GrassmannElement::random(field, s, &mut rng))
        .collect()
}

/// Searches `trials` seeded random substitutions into `G_s` for one refuting
/// `mode`; returns the counterexample with the smallest trial index, if any.
pub fn falsify(
    f: &FreePoly,
    mode: FalsifyMode,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<Option<Counterexample>> {
    check_s(s)?;
    if trials == 0 {
        return Err(Error::Argument("falsify needs at least one trial".into()));
    }
    let vars = f.max_var() as usize;
    let run = |trial: u64| -> Result<Option<Counterexample>> {
        let sub = trial_substitution(f.field(), vars, s, seed, trial)?;
        let value = if vars == 0 {
            GrassmannElement::scalar(f.field(), s, f.coeff(&crate::word::Word::unit()))?
        } else {
            evaluate(f, &sub)?
        };
        let refuted = match mode {
            FalsifyMode::Identity => !value.is_zero(),
            FalsifyMode::Central => !value.is_central_element(),
        };
        Ok(refuted.then_some(Counterexample {
            trial,
            substitution: sub,
            value,
        }))
    };
    let found: Vec<Option<Counterexample>> = (0..trials)
        .into_par_iter()
        .map(run)
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().min_by_key(|c| c.trial))
}
