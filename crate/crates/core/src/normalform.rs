//! Canonical forms in `F<X_n>/T^(3)`.
//!
//! Basis monomials are `x_1^{m_1} ... x_n^{m_n} [x_{j1},x_{j2}] ... [x_{j(2s-1)},x_{j(2s)}]`
//! with `j1 < ... < j(2s)`. Modulo `T^(3)` commutators are central and a
//! product of commutators is alternating in its `2s` slots.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::freepoly::FreePoly;
use crate::word::{MultiDegree, Var};

/// A basis monomial `x^m [x_J]` of `F<X_n>/T^(3)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalMonomial {
    exponents: Vec<u32>,
    comm: Vec<Var>,
}

impl NormalMonomial {
    pub fn unit(n: usize) -> Self {
        NormalMonomial {
            exponents: vec![0; n],
            comm: Vec::new(),
        }
    }

    /// Builds `x^exponents [x_{comm[0]}, x_{comm[1]}] ...`; `comm` must be even
    /// and strictly increasing with entries in `1..=exponents.len()`.
    pub fn new(exponents: Vec<u32>, comm: Vec<Var>) -> Result<Self> {
        let n = exponents.len();
        if !comm.len().is_multiple_of(2) {
            return Err(Error::Argument(
                "commutator index list has odd length".into(),
            ));
        }
        if comm.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(
                "commutator indices must be strictly increasing".into(),
            ));
        }
        if comm.iter().any(|&v| v == 0 || v as usize > n) {
            return Err(Error::Argument(format!("commutator index outside 1..={n}")));
        }
        Ok(NormalMonomial { exponents, comm })
    }

    pub(crate) fn from_parts_unchecked(exponents: Vec<u32>, comm: Vec<Var>) -> Self {
        NormalMonomial { exponents, comm }
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exponents[v as usize - 1]
    }

    pub fn comm_indices(&self) -> &[Var] {
        &self.comm
    }

    /// Number of commutator factors.
    pub fn s(&self) -> usize {
        self.comm.len() / 2
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum::<u32>() + self.comm.len() as u32
    }

    pub fn multidegree(&self) -> MultiDegree {
        let mut d = self.exponents.clone();
        for &j in &self.comm {
            d[j as usize - 1] += 1;
        }
        MultiDegree(d)
    }

    /// Commutator indices as a bitmask (bit `j-1` for `x_j`).
    pub fn comm_mask(&self) -> u64 {
        self.comm.iter().fold(0, |m, &j| m | 1u64 << (j - 1))
    }

    /// The word-and-commutator product this monomial names.
    pub fn lift(&self, field: PrimeField) -> FreePoly {
        let n = self.n();
        let mut acc = FreePoly::one(field, n);
        for (i, &e) in self.exponents.iter().enumerate() {
            if e > 0 {
                let x = FreePoly::var(field, n, (i + 1) as Var).expect("index in range");
                acc = &acc * &x.pow(e);
            }
        }
        for pair in self.comm.chunks(2) {
            let a = FreePoly::var(field, n, pair[0]).expect("index in range");
            let b = FreePoly::var(field, n, pair[1]).expect("index in range");
            acc = &acc * &a.commutator(&b).expect("same ambient");
        }
        acc
    }
}

impl Ord for NormalMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.comm.len().cmp(&other.comm.len()))
            .then_with(|| self.exponents.cmp(&other.exponents))
            .then_with(|| self.comm.cmp(&other.comm))
    }
}

impl PartialOrd for NormalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_monomial(self))
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_monomial(self))
    }
}

/// Sign and sorted order of a product of commutators `[x_{i1},x_{i2}][x_{i3},x_{i4}]...`.
///
/// Returns `Ok(None)` when an index repeats (the product lies in `T^(3)`),
/// otherwise `Ok(Some((sign, sorted)))` with `sign` in `{1, -1}`.
pub fn commutator_product_normalize(indices: &[Var]) -> Result<Option<(i8, Vec<Var>)>> {
    if !indices.len().is_multiple_of(2) {
        return Err(Error::Argument(
            "commutator product needs an even number of indices".into(),
        ));
    }
    Ok(sort_alternating(indices.to_vec()))
}

fn sort_alternating(mut v: Vec<Var>) -> Option<(i8, Vec<Var>)> {
    // insertion sort, counting transpositions
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((if odd { -1 } else { 1 }, v))
}

/// An element of `F<X_n>/T^(3)` in coordinates of the canonical basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalPoly {
    field: PrimeField,
    n: usize,
    terms: BTreeMap<NormalMonomial, u32>,
}

impl NormalPoly {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        NormalPoly {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: PrimeField, n: usize) -> Self {
        NormalPoly::monomial(field, NormalMonomial::unit(n), 1)
    }

    pub fn monomial(field: PrimeField, m: NormalMonomial, c: u32) -> Self {
        let mut out = NormalPoly::zero(field, m.n());
        out.add_term(m, c % field.p());
        out
    }

    pub fn var(field: PrimeField, n: usize, v: Var) -> Self {
        let mut e = vec![0; n];
        e[v as usize - 1] = 1;
        NormalPoly::monomial(
            field,
            NormalMonomial::from_parts_unchecked(e, Vec::new()),
            1,
        )
    }

    pub fn from_terms(
        field: PrimeField,
        n: usize,
        terms: impl IntoIterator<Item = (NormalMonomial, u32)>,
    ) -> Result<Self> {
        let mut out = NormalPoly::zero(field, n);
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::Config(format!(
                    "monomial over {} variables in a {n}-variable polynomial",
                    m.n()
                )));
            }
            out.add_term(m, c % field.p());
        }
        Ok(out)
    }

    fn add_term(&mut self, m: NormalMonomial, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalMonomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &NormalMonomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    fn check_compat(&self, other: &NormalPoly) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Config("normal forms over different ambients".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NormalPoly) -> Result<NormalPoly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &NormalPoly) -> Result<NormalPoly> {
        self.try_add(&other.scale(self.field.p() - 1))
    }

    pub fn scale(&self, c: u32) -> NormalPoly {
        let field = self.field;
        let c = c % field.p();
        let mut out = NormalPoly::zero(field, self.n);
        if c != 0 {
            out.terms = self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), field.mul(a, c)))
                .collect();
        }
        out
    }

    /// The same element viewed over `m >= n` variables.
    pub fn with_ambient(&self, m: usize) -> Result<NormalPoly> {
        if m < self.n {
            let used = self
                .terms
                .keys()
                .flat_map(|t| {
                    t.multidegree()
                        .0
                        .into_iter()
                        .enumerate()
                        .filter(|(_, e)| *e > 0)
                })
                .map(|(i, _)| i + 1)
                .max()
                .unwrap_or(0);
            if used > m {
                return Err(Error::Config(format!(
                    "element uses x{used}, which exceeds {m} variables"
                )));
            }
        }
        let terms = self.terms.iter().map(|(t, &c)| {
            let mut e = t.exponents.clone();
            e.resize(m, 0);
            (
                NormalMonomial {
                    exponents: e,
                    comm: t.comm.clone(),
                },
                c,
            )
        });
        NormalPoly::from_terms(self.field, m, terms)
    }

    /// Multihomogeneous components keyed by multidegree.
    pub fn components(&self) -> BTreeMap<MultiDegree, NormalPoly> {
        let mut out: BTreeMap<MultiDegree, NormalPoly> = BTreeMap::new();
        for (m, &c) in &self.terms {
            out.entry(m.multidegree())
                .or_insert_with(|| NormalPoly::zero(self.field, self.n))
                .terms
                .insert(m.clone(), c);
        }
        out
    }

    /// Minimum number of commutator factors over the stored terms; `None` for zero.
    pub fn min_comm_length(&self) -> Option<usize> {
        self.terms.keys().map(NormalMonomial::s).min()
    }

    /// Every stored term carries at least `k` commutator factors.
    pub fn in_t3k_span(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.s() >= k)
    }

    /// A representative in `F<X_n>`.
    pub fn lift(&self) -> FreePoly {
        let mut acc = FreePoly::zero(self.field, self.n);
        for (m, &c) in &self.terms {
            acc = &acc + &m.lift(self.field).scale(c);
        }
        acc
    }

    /// Right multiplication by the variable `x_a`.
    fn mul_var(&self, a: Var) -> NormalPoly {
        let field = self.field;
        let ai = a as usize - 1;
        let mut out = NormalPoly::zero(field, self.n);
        for (m, &c) in &self.terms {
            let mut e = m.exponents.clone();
            e[ai] += 1;
            out.add_term(
                NormalMonomial {
                    exponents: e,
                    comm: m.comm.clone(),
                },
                c,
            );
            // x_b^{m_b} x_a = x_a x_b^{m_b} + m_b x_b^{m_b - 1} [x_b, x_a] for b > a
            for bi in ai + 1..self.n {
                let mb = m.exponents[bi];
                if mb == 0 || mb % field.p() == 0 {
                    continue;
                }
                let mut seq = Vec::with_capacity(m.comm.len() + 2);
                seq.push((bi + 1) as Var);
                seq.push(a);
                seq.extend_from_slice(&m.comm);
                if let Some((sign, sorted)) = sort_alternating(seq) {
                    let mut e = m.exponents.clone();
                    e[bi] -= 1;
                    let mut coef = field.mul(c, mb % field.p());
                    if sign < 0 {
                        coef = field.neg(coef);
                    }
                    out.add_term(
                        NormalMonomial {
                            exponents: e,
                            comm: sorted,
                        },
                        coef,
                    );
                }
            }
        }
        out
    }

    /// Coset product.
    pub fn try_mul(&self, other: &NormalPoly) -> Result<NormalPoly> {
        self.check_compat(other)?;
        let field = self.field;
        let mut out = NormalPoly::zero(field, self.n);
        for (m2, &c2) in &other.terms {
            // x^{m} [S] * x^{m2} [S2] = (x^m x^{m2}) [S][S2]
            let mut left = NormalPoly::zero(field, self.n);
            for (m1, &c1) in &self.terms {
                left.add_term(
                    NormalMonomial {
                        exponents: m1.exponents.clone(),
                        comm: m1.comm.clone(),
                    },
                    c1,
                );
            }
            for (i, &e) in m2.exponents.iter().enumerate() {
                for _ in 0..e {
                    left = left.mul_var((i + 1) as Var);
                }
            }
            for (t, &c) in &left.terms {
                let mut seq = t.comm.clone();
                seq.extend_from_slice(&m2.comm);
                if let Some((sign, sorted)) = sort_alternating(seq) {
                    let mut coef = field.mul(c, c2);
                    if sign < 0 {
                        coef = field.neg(coef);
                    }
                    out.add_term(
                        NormalMonomial {
                            exponents: t.exponents.clone(),
                            comm: sorted,
                        },
                        coef,
                    );
                }
            }
        }
        Ok(out)
    }
}

/// Coordinates of `f + T^(3)` in the canonical basis.
pub fn straighten(f: &FreePoly) -> NormalPoly {
    let field = f.field();
    let n = f.n();
    let mut out = NormalPoly::zero(field, n);
    for (w, c) in f.terms() {
        let mut acc = NormalPoly::monomial(field, NormalMonomial::unit(n), c);
        for &v in w.letters() {
            acc = acc.mul_var(v);
        }
        for (m, c) in acc.terms {
            out.add_term(m, c);
        }
    }
    out
}

/// Coset product `a * b`.
pub fn nm_mul(a: &NormalPoly, b: &NormalPoly) -> Result<NormalPoly> {
    a.try_mul(b)
}

/// `f` is a polynomial identity of the infinite-dimensional Grassmann algebra.
pub fn is_identity_of_g(f: &FreePoly) -> bool {
    straighten(f).is_zero()
}

/// `f` is a central polynomial of the Grassmann algebra: `[f, x_fresh]` is an identity.
pub fn is_central_for_g(f: &FreePoly) -> bool {
    let fresh = f.max_var() as usize + 1;
    let m = fresh.max(f.n());
    let lifted = f.with_ambient(m).expect("ambient only grows");
    let nf = straighten(&lifted);
    let x = NormalPoly::var(f.field(), m, fresh as Var);
    let left = nf.try_mul(&x).expect("same ambient");
    let right = x.try_mul(&nf).expect("same ambient");
    left == right
}

impl fmt::Debug for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_normal(self))
    }
}

impl fmt::Display for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_normal(self))
    }
}
