//! A faithful model of `F<X_n>/T^(3)` inside a supercommutative algebra.
//!
//! `x_i` maps to `a_i + b_i` with commuting `a_i` and anticommuting `b_i`
//! (`b_i^2 = 0`). The multidegree-`d` component of the image is spanned by
//! `a^{d - 1_S} b_S` for `S` inside the support of `d`, so an element is a dense
//! vector over subsets `S`, stored in local bit positions of the support.
//!
//! The basis monomial `x^m [x_J]` with `|J| = 2s` maps to
//! `sum_{T} 2^s prod_{i in T} m_i * sign(T, J) a^{..} b_{T ∪ J}`, `T` ranging over
//! subsets of `supp(m) \ J`. The leading entry at `S = J` is `2^s`, so the map
//! is injective on the basis and converting back is a triangular solve.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::grassmann::interleave_sign;
use crate::normalform::{NormalMonomial, NormalPoly};
use crate::word::{MultiDegree, Var, Word};

/// Largest support width handled (vectors have `2^w` entries).
pub const MAX_SUPPORT: usize = 16;

/// Product of two model elements given as dense vectors over local subsets.
pub fn super_mul(field: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    let mut out = vec![0u32; a.len()];
    let bn: Vec<(usize, u32)> = b
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect();
    if bn.is_empty() {
        return out;
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for &(j, y) in &bn {
            if i & j != 0 {
                continue;
            }
            let mut c = field.mul(x, y);
            if interleave_sign(i as u64, j as u64) {
                c = field.neg(c);
            }
            out[i | j] = field.add(out[i | j], c);
        }
    }
    out
}

pub fn super_add_assign(field: PrimeField, acc: &mut [u32], v: &[u32], scale: u32) {
    if scale == 0 {
        return;
    }
    for (a, &x) in acc.iter_mut().zip(v) {
        if x != 0 {
            *a = field.add(*a, field.mul(x, scale));
        }
    }
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Image of a basis monomial with exponent residues `m_res` (local positions)
/// and commutator set `jmask` (local bits), over a support of width `w`.
pub fn basis_image(field: PrimeField, w: usize, m_res: &[u32], jmask: u32) -> Vec<u32> {
    let mut out = vec![0u32; 1 << w];
    let s = jmask.count_ones() / 2;
    let lead = field.pow(2, s as u64);
    let free: Vec<usize> = (0..w)
        .filter(|&k| jmask >> k & 1 == 0 && !m_res[k].is_multiple_of(field.p()))
        .collect();
    for sub in 0u32..(1 << free.len()) {
        let mut t = 0u32;
        let mut c = lead;
        for (bit, &k) in free.iter().enumerate() {
            if sub >> bit & 1 == 1 {
                t |= 1 << k;
                c = field.mul(c, m_res[k] % field.p());
            }
        }
        if interleave_sign(t as u64, jmask as u64) {
            c = field.neg(c);
        }
        out[(t | jmask) as usize] = c;
    }
    out
}

/// Local coordinates for the support of a multidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    vars: Vec<Var>,
}

impl Support {
    pub fn of(d: &MultiDegree) -> Self {
        Support {
            vars: (0..d.n())
                .filter(|&i| d.0[i] > 0)
                .map(|i| (i + 1) as Var)
                .collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn local(&self, v: Var) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    pub fn local_degrees(&self, d: &MultiDegree) -> Vec<u32> {
        self.vars.iter().map(|&v| d.get(v)).collect()
    }

    /// Local residues and commutator mask of a monomial supported inside this support.
    pub fn encode(&self, field: PrimeField, m: &NormalMonomial) -> Option<(Vec<u32>, u32)> {
        let mut res = vec![0u32; self.width()];
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                res[self.local((i + 1) as Var)?] = e % field.p();
            }
        }
        let mut jmask = 0u32;
        for &j in m.comm_indices() {
            jmask |= 1 << self.local(j)?;
        }
        Some((res, jmask))
    }
}

/// Image of a multihomogeneous normal form of multidegree `d`.
pub fn image_of(poly: &NormalPoly, d: &MultiDegree) -> Result<Vec<u32>> {
    let field = poly.field();
    let sup = Support::of(d);
    check_width(sup.width())?;
    let mut out = vec![0u32; 1 << sup.width()];
    for (m, c) in poly.terms() {
        if &m.multidegree() != d {
            return Err(Error::Argument(format!(
                "term {m} is not of multidegree {d}"
            )));
        }
        let (res, jmask) = sup
            .encode(field, m)
            .expect("support covers the multidegree");
        super_add_assign(
            field,
            &mut out,
            &basis_image(field, sup.width(), &res, jmask),
            c,
        );
    }
    Ok(out)
}

/// Direct image of a multihomogeneous free polynomial of multidegree `d`,
/// multiplying letter images `a_i + b_i` word by word.
pub fn image_of_words<'a>(
    field: PrimeField,
    words: impl IntoIterator<Item = (&'a Word, u32)>,
    d: &MultiDegree,
) -> Result<Vec<u32>> {
    let sup = Support::of(d);
    check_width(sup.width())?;
    let size = 1usize << sup.width();
    let mut out = vec![0u32; size];
    for (w, c) in words {
        let mut acc = vec![0u32; size];
        acc[0] = c % field.p();
        for &v in w.letters() {
            let k = sup
                .local(v)
                .ok_or_else(|| Error::Argument(format!("word {w:?} is not of multidegree {d}")))?;
            let mut letter = vec![0u32; size];
            letter[0] = 1;
            letter[1 << k] = 1;
            acc = super_mul(field, &acc, &letter);
        }
        super_add_assign(field, &mut out, &acc, 1);
    }
    Ok(out)
}

pub fn check_width(w: usize) -> Result<()> {
    if w > MAX_SUPPORT {
        return Err(Error::Resource(format!(
            "multidegree involves {w} variables; at most {MAX_SUPPORT} are supported"
        )));
    }
    Ok(())
}

/// The canonical basis at a multidegree, with the data needed to read model
/// vectors back in frame coordinates.
#[derive(Clone, Debug)]
pub struct FrameModel {
    field: PrimeField,
    support: Support,
    monomials: Vec<NormalMonomial>,
    jmasks: Vec<u32>,
    by_jmask: HashMap<u32, usize>,
    images: Vec<Vec<u32>>,
    /// Even-size local subsets ordered by size.
    solve_order: Vec<u32>,
}

impl FrameModel {
    pub fn new(field: PrimeField, d: &MultiDegree) -> Result<Self> {
        let support = Support::of(d);
        let w = support.width();
        check_width(w)?;
        let local_d = support.local_degrees(d);
        let mut monomials: Vec<NormalMonomial> = Vec::new();
        for jmask in 0u32..(1 << w) {
            if jmask.count_ones() % 2 != 0 {
                continue;
            }
            let mut e = d.0.clone();
            let mut comm = Vec::new();
            for (k, &v) in support.vars().iter().enumerate() {
                if jmask >> k & 1 == 1 {
                    e[v as usize - 1] -= 1;
                    comm.push(v);
                }
            }
            monomials.push(NormalMonomial::from_parts_unchecked(e, comm));
        }
        monomials.sort();
        let mut jmasks = Vec::with_capacity(monomials.len());
        let mut images = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let (res, jmask) = support.encode(field, m).expect("inside support");
            images.push(basis_image(field, w, &res, jmask));
            jmasks.push(jmask);
        }
        debug_assert!(local_d.iter().all(|&e| e > 0));
        let by_jmask = jmasks.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let mut solve_order: Vec<u32> = jmasks.clone();
        solve_order.sort_by_key(|&j| (j.count_ones(), j));
        Ok(FrameModel {
            field,
            support,
            monomials,
            jmasks,
            by_jmask,
            images,
            solve_order,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn monomials(&self) -> &[NormalMonomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Local commutator mask of frame element `idx`.
    pub fn jmask(&self, idx: usize) -> u32 {
        self.jmasks[idx]
    }

    pub fn image(&self, idx: usize) -> &[u32] {
        &self.images[idx]
    }

    /// Frame coordinates of a model vector. Fails with a consistency error if
    /// the vector is not in the image of the frame.
    pub fn coordinates(&self, v: &[u32]) -> Result<Vec<u32>> {
        let field = self.field;
        let mut rest = v.to_vec();
        let mut coords = vec![0u32; self.monomials.len()];
        for &j in &self.solve_order {
            let c = rest[j as usize];
            if c == 0 {
                continue;
            }
            let idx = self.by_jmask[&j];
            let lead = self.images[idx][j as usize];
            let coef = field.mul(c, field.inv(lead).expect("leading entry is a power of 2"));
            coords[idx] = coef;
            super_add_assign(field, &mut rest, &self.images[idx], field.neg(coef));
        }
        if !is_zero_vec(&rest) {
            return Err(Error::Consistency(
                "model vector outside the image of the canonical basis".into(),
            ));
        }
        Ok(coords)
    }
}
