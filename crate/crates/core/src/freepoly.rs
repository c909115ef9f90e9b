//! The free unitary associative algebra `F_p<x_1, ..., x_n>`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::word::{MultiDegree, Var, Word};

/// A noncommutative polynomial: a finitely supported map from words to
/// nonzero residues, over a fixed ambient variable count `n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreePoly {
    field: PrimeField,
    n: usize,
    terms: BTreeMap<Word, u32>,
}

/// One multihomogeneous component of a polarized polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    /// Polynomial in the extended variables `y_{i,j}`, numbered consecutively:
    /// `y_{1,1}, ..., y_{1,k_1}, y_{2,1}, ...`.
    pub poly: FreePoly,
    /// Degree of `poly` in each extended variable.
    pub slot_degrees: MultiDegree,
}

impl FreePoly {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        FreePoly {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, n: usize, c: u32) -> Self {
        let mut f = FreePoly::zero(field, n);
        let c = c % field.p();
        if c != 0 {
            f.terms.insert(Word::unit(), c);
        }
        f
    }

    pub fn one(field: PrimeField, n: usize) -> Self {
        FreePoly::constant(field, n, 1)
    }

    pub fn var(field: PrimeField, n: usize, v: Var) -> Result<Self> {
        FreePoly::word(field, n, &[v])
    }

    pub fn word(field: PrimeField, n: usize, letters: &[Var]) -> Result<Self> {
        FreePoly::from_terms(field, n, [(Word::from_letters(letters.to_vec()), 1)])
    }

    /// Builds a polynomial from `(word, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        field: PrimeField,
        n: usize,
        terms: impl IntoIterator<Item = (Word, u32)>,
    ) -> Result<Self> {
        let mut f = FreePoly::zero(field, n);
        for (w, c) in terms {
            if let Some(&v) = w.letters().iter().find(|&&v| v == 0 || v as usize > n) {
                return Err(Error::Argument(format!(
                    "variable index {v} outside 1..={n}"
                )));
            }
            f.add_term(w, c % field.p());
        }
        Ok(f)
    }

    fn add_term(&mut self, w: Word, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.field;
        match self.terms.entry(w) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, u32)> + '_ {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    /// Largest variable index occurring in some term (0 for constants).
    pub fn max_var(&self) -> Var {
        self.terms.keys().map(Word::max_var).max().unwrap_or(0)
    }

    /// The same polynomial viewed in `F<X_m>`.
    pub fn with_ambient(&self, m: usize) -> Result<Self> {
        if (self.max_var() as usize) > m {
            return Err(Error::Config(format!(
                "polynomial uses x{} which does not fit in {m} variables",
                self.max_var()
            )));
        }
        Ok(FreePoly {
            field: self.field,
            n: m,
            terms: self.terms.clone(),
        })
    }

    fn check_compat(&self, other: &FreePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Config(format!(
                "mismatched moduli {} and {}",
                self.field.p(),
                other.field.p()
            )));
        }
        if self.n != other.n {
            return Err(Error::Config(format!(
                "mismatched ambient variable counts {} and {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FreePoly) -> Result<FreePoly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &FreePoly) -> Result<FreePoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &FreePoly) -> Result<FreePoly> {
        self.check_compat(other)?;
        let field = self.field;
        let mut out = FreePoly::zero(field, self.n);
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                out.add_term(u.concat(v), field.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> FreePoly {
        let c = c % self.field.p();
        let field = self.field;
        let terms = if c == 0 {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(w, &a)| (w.clone(), field.mul(a, c)))
                .collect()
        };
        FreePoly {
            field,
            n: self.n,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> FreePoly {
        let mut acc = FreePoly::one(self.field, self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[f, g] = fg - gf`.
    pub fn commutator(&self, other: &FreePoly) -> Result<FreePoly> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Left-normed commutator `[f_1, ..., f_k] = [[f_1, ..., f_{k-1}], f_k]`.
    /// A single entry is returned unchanged.
    pub fn long_commutator(fs: &[FreePoly]) -> Result<FreePoly> {
        let (first, rest) = fs
            .split_first()
            .ok_or_else(|| Error::Argument("long commutator of an empty list".into()))?;
        rest.iter()
            .try_fold(first.clone(), |acc, g| acc.commutator(g))
    }

    /// Image under the endomorphism `x_i -> images[i-1]`.
    ///
    /// All images must share a modulus and an ambient variable count, which
    /// becomes the ambient count of the result. Variables beyond
    /// `images.len()` that actually occur in `self` are an argument error.
    pub fn substitute(&self, images: &[FreePoly]) -> Result<FreePoly> {
        let mv = self.max_var() as usize;
        if mv > images.len() {
            return Err(Error::Argument(format!("no image assigned to x{mv}")));
        }
        let target_n = match images.first() {
            Some(g) => g.n,
            None => self.n,
        };
        for g in images {
            if g.field != self.field {
                return Err(Error::Config(
                    "substitution image over a different field".into(),
                ));
            }
            if g.n != target_n {
                return Err(Error::Config(
                    "substitution images have different ambient variable counts".into(),
                ));
            }
        }
        let mut out = FreePoly::zero(self.field, target_n);
        for (w, &c) in &self.terms {
            let mut acc = FreePoly::constant(self.field, target_n, c);
            for &v in w.letters() {
                acc = &acc * &images[v as usize - 1];
                if acc.is_zero() {
                    break;
                }
            }
            for (u, a) in acc.terms {
                out.add_term(u, a);
            }
        }
        Ok(out)
    }

    /// Substitution given as a partial map; every occurring variable must be mapped.
    pub fn substitute_map(&self, map: &BTreeMap<Var, FreePoly>) -> Result<FreePoly> {
        let mv = self.max_var();
        let target_n = map.values().next().map(|g| g.n).unwrap_or(self.n);
        let mut images = Vec::with_capacity(mv as usize);
        let occurring: std::collections::BTreeSet<Var> = self
            .terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect();
        for v in 1..=mv {
            match map.get(&v) {
                Some(g) => images.push(g.clone()),
                None if occurring.contains(&v) => {
                    return Err(Error::Argument(format!("no image assigned to x{v}")))
                }
                None => images.push(FreePoly::zero(self.field, target_n)),
            }
        }
        if images.is_empty() {
            return self.with_ambient(target_n.max(self.max_var() as usize));
        }
        self.substitute(&images)
    }

    /// Renames variables through `rename`, landing in `F<X_m>`.
    pub fn rename(&self, m: usize, rename: impl Fn(Var) -> Var) -> Result<FreePoly> {
        let terms = self.terms.iter().map(|(w, &c)| {
            (
                Word::from_letters(w.letters().iter().map(|&v| rename(v)).collect()),
                c,
            )
        });
        FreePoly::from_terms(self.field, m, terms)
    }

    /// Shifts every variable index up by `offset`, into `F<X_m>`.
    pub fn shift(&self, offset: Var, m: usize) -> Result<FreePoly> {
        self.rename(m, |v| v + offset)
    }

    /// Multihomogeneous components keyed by multidegree; zero components are omitted.
    pub fn components(&self) -> BTreeMap<MultiDegree, FreePoly> {
        let mut out: BTreeMap<MultiDegree, FreePoly> = BTreeMap::new();
        for (w, &c) in &self.terms {
            out.entry(w.multidegree(self.n))
                .or_insert_with(|| FreePoly::zero(self.field, self.n))
                .terms
                .insert(w.clone(), c);
        }
        out
    }

    pub fn is_multihomogeneous(&self) -> bool {
        self.components().len() <= 1
    }

    /// Replaces each `x_i` by `y_{i,1} + ... + y_{i,k_i}` (with `k_i = parts[i-1]`,
    /// default 1) and returns every nonzero multihomogeneous component in the
    /// `y` variables together with its slot-degree vector.
    ///
    /// The expansion is done word by word, so the cost grows like
    /// `prod k_i^{deg_i}`; intended for small inputs.
    pub fn polarize(&self, parts: &[usize]) -> Result<Vec<Polarization>> {
        if parts.contains(&0) {
            return Err(Error::Argument("part counts must be at least 1".into()));
        }
        let counts: Vec<usize> = (0..self.n)
            .map(|i| parts.get(i).copied().unwrap_or(1))
            .collect();
        let mut offsets = Vec::with_capacity(self.n);
        let mut total = 0usize;
        for &k in &counts {
            offsets.push(total);
            total += k;
        }
        let mut expanded = FreePoly::zero(self.field, total);
        for (w, &c) in &self.terms {
            let mut partial: Vec<Vec<Var>> = vec![Vec::with_capacity(w.degree())];
            for &v in w.letters() {
                let i = v as usize - 1;
                let mut next = Vec::with_capacity(partial.len() * counts[i]);
                for prefix in &partial {
                    for j in 0..counts[i] {
                        let mut p = prefix.clone();
                        p.push((offsets[i] + j + 1) as Var);
                        next.push(p);
                    }
                }
                partial = next;
            }
            for letters in partial {
                expanded.add_term(Word::from_letters(letters), c);
            }
        }
        Ok(expanded
            .components()
            .into_iter()
            .map(|(slot_degrees, poly)| Polarization { poly, slot_degrees })
            .collect())
    }
}

/// `q_k^{(l)}(x_1, ..., x_{2k}) = prod_{i=1}^{k} x_{2i-1}^{p^l-1} [x_{2i-1}, x_{2i}] x_{2i}^{p^l-1}`
/// in `F<X_{2k}>`.
pub fn q_poly(k: u32, l: u32, field: PrimeField) -> Result<FreePoly> {
    if k == 0 {
        return Err(Error::Argument("q_k^(l) requires k >= 1".into()));
    }
    let e = (field.p() as u64)
        .checked_pow(l)
        .filter(|&v| v <= 4096)
        .ok_or_else(|| Error::Argument(format!("p^{l} is too large for q_k^(l)")))?
        as u32
        - 1;
    let n = 2 * k as usize;
    let mut acc = FreePoly::one(field, n);
    for i in 0..k {
        let a = FreePoly::var(field, n, (2 * i + 1) as Var)?;
        let b = FreePoly::var(field, n, (2 * i + 2) as Var)?;
        let block = &(&a.pow(e) * &a.commutator(&b)?) * &b.pow(e);
        acc = &acc * &block;
    }
    Ok(acc)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&FreePoly> for &FreePoly {
            type Output = FreePoly;

            /// Panics when the operands live in different ambients; use the
            /// `try_` method for a fallible variant.
            fn $method(self, rhs: &FreePoly) -> FreePoly {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $tr<FreePoly> for FreePoly {
            type Output = FreePoly;

            fn $method(self, rhs: FreePoly) -> FreePoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FreePoly {
    type Output = FreePoly;

    fn neg(self) -> FreePoly {
        self.scale(self.field.p() - 1)
    }
}

impl Neg for FreePoly {
    type Output = FreePoly;

    fn neg(self) -> FreePoly {
        -&self
    }
}

impl fmt::Debug for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print(self))
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn x(n: usize, v: Var) -> FreePoly {
        FreePoly::var(f3(), n, v).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = x(2, 1);
        let b = a.scale(2);
        assert!((&a + &b).is_zero());
        assert_eq!((&x(2, 1) + &x(2, 2)).len(), 2);
        let c = x(2, 1).commutator(&x(2, 2)).unwrap();
        let d = &(&x(2, 1) * &x(2, 2)) - &c;
        assert!((&d + &(-&d)).is_zero());
    }

    #[test]
    fn mismatched_ambient_is_config_error() {
        let a = x(2, 1);
        let b = x(3, 1);
        assert!(matches!(a.try_add(&b), Err(Error::Config(_))));
        let g = FreePoly::var(PrimeField::new(5).unwrap(), 2, 1).unwrap();
        assert!(matches!(a.try_mul(&g), Err(Error::Config(_))));
    }

    #[test]
    fn products_and_unit() {
        let prod = &x(2, 1) * &x(2, 2);
        assert_eq!(prod.coeff(&Word::from_letters(vec![1, 2])), 1);
        let f = &x(2, 1) + &x(2, 2);
        assert_eq!(&FreePoly::one(f3(), 2) * &f, f);
        let sq = &f * &f;
        assert_eq!(sq.len(), 4);
        for w in [[1, 1], [1, 2], [2, 1], [2, 2]] {
            assert_eq!(sq.coeff(&Word::from_letters(w.to_vec())), 1);
        }
    }

    #[test]
    fn commutators() {
        assert!(x(2, 1).commutator(&x(2, 1)).unwrap().is_zero());
        let c = x(2, 1).commutator(&x(2, 2)).unwrap();
        assert_eq!(c.coeff(&Word::from_letters(vec![1, 2])), 1);
        assert_eq!(c.coeff(&Word::from_letters(vec![2, 1])), 2);
        let long = FreePoly::long_commutator(&[x(3, 1), x(3, 2), x(3, 3)]).unwrap();
        let nested = x(3, 1)
            .commutator(&x(3, 2))
            .unwrap()
            .commutator(&x(3, 3))
            .unwrap();
        assert_eq!(long, nested);
        assert!(matches!(
            FreePoly::long_commutator(&[]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn substitution_examples() {
        let c = x(2, 1).commutator(&x(2, 2)).unwrap();
        let img = c.substitute(&[x(2, 1), FreePoly::one(f3(), 2)]).unwrap();
        assert!(img.is_zero());

        let sq = x(2, 1).pow(2);
        let img = sq.substitute(&[&x(2, 1) + &x(2, 2)]).unwrap();
        assert_eq!(img.len(), 4);

        let err = c.substitute(&[x(2, 1)]).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
    }

    #[test]
    fn gamma_component_of_q11() {
        // q_1^(1)(1+x1, 1+x2) at multidegree (1,1) is [x1,x2] when p = 3.
        let q = q_poly(1, 1, f3()).unwrap();
        let one = FreePoly::one(f3(), 2);
        let img = q.substitute(&[&one + &x(2, 1), &one + &x(2, 2)]).unwrap();
        let comps = img.components();
        let expected = x(2, 1).commutator(&x(2, 2)).unwrap();
        assert_eq!(comps[&MultiDegree(vec![1, 1])], expected);
    }

    #[test]
    fn components_partition() {
        let f = &x(2, 1) + &(&x(2, 1) * &x(2, 2));
        let comps = f.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&MultiDegree(vec![1, 0])], x(2, 1));
        assert!(FreePoly::zero(f3(), 2).components().is_empty());
    }

    #[test]
    fn polarize_square_and_cube() {
        let sq = x(1, 1).pow(2);
        let pol = sq.polarize(&[2]).unwrap();
        let degs: Vec<_> = pol.iter().map(|p| p.slot_degrees.0.clone()).collect();
        assert_eq!(degs, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let mixed = &pol[1].poly;
        assert_eq!(mixed.len(), 2);

        let cube = x(1, 1).pow(3);
        let pol = cube.polarize(&[2]).unwrap();
        let c21 = pol.iter().find(|p| p.slot_degrees.0 == vec![2, 1]).unwrap();
        assert_eq!(c21.poly.len(), 3);
        assert!(c21.poly.terms().all(|(_, c)| c == 1));
    }

    #[test]
    fn q_poly_shapes() {
        let f = f3();
        assert_eq!(
            q_poly(1, 0, f).unwrap(),
            x(2, 1).commutator(&x(2, 2)).unwrap()
        );
        let q11 = q_poly(1, 1, f).unwrap();
        let expected =
            &(&x(2, 1).pow(2) * &x(2, 1).commutator(&x(2, 2)).unwrap()) * &x(2, 2).pow(2);
        assert_eq!(q11, expected);
        let q20 = q_poly(2, 0, f).unwrap();
        let c12 = x(4, 1).commutator(&x(4, 2)).unwrap();
        let c34 = x(4, 3).commutator(&x(4, 4)).unwrap();
        assert_eq!(q20, &c12 * &c34);
        assert!(matches!(q_poly(0, 1, f), Err(Error::Argument(_))));
    }
}
