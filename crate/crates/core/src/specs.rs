//! Named generator lists and the textual spec syntax.
//!
//! ```text
//! spec  := item (';' item)*
//! item  := named | ['space:' | 'ideal:'] poly
//! named := 'C:'n[':'L] | 'C_'n | 'U:'k | 'Q:'k':'l | 'T3:'k | 'V:'l':'k | 'R:'k[':'L] | 'CG'[':'J]
//! ```
//!
//! Inside polynomial items `q:k:l` stands for `q_k^(l)`.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::freepoly::{q_poly, FreePoly};
use crate::tspace::{Closure, GeneratorSpec};
use crate::word::Var;

/// Number of `q_k^(l)` generators kept when a family is infinite.
pub const DEFAULT_LEVELS: u32 = 2;

fn x(field: PrimeField, n: usize, v: Var) -> FreePoly {
    FreePoly::var(field, n, v).expect("index in range")
}

/// `x_1 [x_2, x_3, x_4]`.
pub fn t3_space_generator(field: PrimeField) -> FreePoly {
    let xs: Vec<FreePoly> = (1..=4).map(|v| x(field, 4, v)).collect();
    let c = FreePoly::long_commutator(&xs[1..]).expect("nonempty");
    &xs[0] * &c
}

/// `x_1^p q_j(x_2, ..., x_{2j+1})`; `j = 0` gives `x_1^p`.
pub fn x1p_qj(field: PrimeField, j: u32) -> Result<FreePoly> {
    let n = 2 * j as usize + 1;
    let head = x(field, n, 1).pow(field.p());
    if j == 0 {
        return Ok(head);
    }
    let q = q_poly(j, 1, field)?.shift(1, n)?;
    Ok(&head * &q)
}

fn check_k(name: &str, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Argument(format!("{name} requires k >= 1")));
    }
    Ok(())
}

/// `U^(j) = <x_1^p, x_1^p q_1, ..., x_1^p q_j>`.
pub fn spec_u(field: PrimeField, n: usize, j: u32) -> Result<GeneratorSpec> {
    let mut s = GeneratorSpec::new(field, n).labeled(format!("U^({j})"));
    for i in 0..=j {
        s.push(x1p_qj(field, i)?, Closure::Space)?;
    }
    Ok(s)
}

/// `Q^(k,l) = <q_k^(l)>`.
pub fn spec_q(field: PrimeField, n: usize, k: u32, l: u32) -> Result<GeneratorSpec> {
    check_k("Q^(k,l)", k)?;
    GeneratorSpec::new(field, n)
        .labeled(format!("Q^({k},{l})"))
        .space(q_poly(k, l, field)?)
}

/// `T^(3,k)` as a T-ideal: `[x_1,x_2,x_3]` and `[x_1,x_2]...[x_{2k-1},x_{2k}]`.
pub fn spec_t3k(field: PrimeField, n: usize, k: u32) -> Result<GeneratorSpec> {
    check_k("T^(3,k)", k)?;
    let xs: Vec<FreePoly> = (1..=3).map(|v| x(field, 3, v)).collect();
    GeneratorSpec::new(field, n)
        .labeled(format!("T^(3,{k})"))
        .ideal(FreePoly::long_commutator(&xs)?)?
        .ideal(q_poly(k, 0, field)?)
}

/// `U^(k-1) + Q^(k,1) + ... + Q^(k,l)`, the chain stage without `T^(3,k+1)`.
pub fn spec_v_stage(field: PrimeField, n: usize, l: u32, k: u32) -> Result<GeneratorSpec> {
    check_k("V_l", k)?;
    let mut s = spec_u(field, n, k - 1)?;
    for i in 1..=l {
        s.push(q_poly(k, i, field)?, Closure::Space)?;
    }
    Ok(s.labeled(format!("U^({}) + Q^({k},1..{l})", k - 1)))
}

/// `V_l = U^(k-1) + Q^(k,1) + ... + Q^(k,l) + T^(3,k+1)`.
pub fn spec_v(field: PrimeField, n: usize, l: u32, k: u32) -> Result<GeneratorSpec> {
    let stage = spec_v_stage(field, n, l, k)?;
    Ok(stage
        .union(&spec_t3k(field, n, k + 1)?)?
        .labeled(format!("V_{l}(k={k})")))
}

/// The generators of `C_n`, with the infinite `q_k^(l)` family cut at `levels`
/// when `n` is even.
pub fn spec_c_n(field: PrimeField, n: usize, levels: u32) -> Result<GeneratorSpec> {
    if n == 0 {
        return Err(Error::Argument("C_n requires n >= 1".into()));
    }
    let k = (n / 2) as u32;
    let mut s = GeneratorSpec::new(field, n).labeled(format!("C_{n}"));
    s.push(t3_space_generator(field), Closure::Space)?;
    if n.is_multiple_of(2) {
        for j in 0..k {
            s.push(x1p_qj(field, j)?, Closure::Space)?;
        }
        for l in 1..=levels {
            s.push(q_poly(k, l, field)?, Closure::Space)?;
        }
    } else {
        for j in 0..=k {
            s.push(x1p_qj(field, j)?, Closure::Space)?;
        }
    }
    Ok(s)
}

/// `R_k = C_{2k} + T^(3,k+1)`.
pub fn spec_r(field: PrimeField, n: usize, k: u32, levels: u32) -> Result<GeneratorSpec> {
    check_k("R_k", k)?;
    let c = spec_c_n(field, 2 * k as usize, levels)?.with_n(n);
    Ok(c.union(&spec_t3k(field, n, k + 1)?)?
        .labeled(format!("R_{k}")))
}

/// The generators of `C(G)` through `x_1^p q_j` for `j <= j_max`. At a
/// multidegree of total degree `t` every generator with `j > t/2` contributes
/// nothing, so `j_max >= t/2` gives the exact component.
pub fn spec_cg(field: PrimeField, n: usize, j_max: u32) -> Result<GeneratorSpec> {
    let mut s = GeneratorSpec::new(field, n).labeled("C(G)");
    s.push(t3_space_generator(field), Closure::Space)?;
    for j in 0..=j_max {
        s.push(x1p_qj(field, j)?, Closure::Space)?;
    }
    Ok(s)
}

impl GeneratorSpec {
    /// The same generators over a different ambient variable count.
    pub fn with_n(&self, n: usize) -> GeneratorSpec {
        let mut s = GeneratorSpec::new(self.field(), n).labeled(self.label());
        for g in self.generators() {
            s.push(g.poly.clone(), g.closure).expect("same field");
        }
        s
    }
}

fn nums(parts: &[&str], item: &str) -> Result<Vec<u32>> {
    parts
        .iter()
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::Argument(format!("bad number in spec item '{item}'")))
        })
        .collect()
}

/// Options for reading spec text.
#[derive(Clone, Copy, Debug)]
pub struct SpecOptions {
    /// Levels kept from infinite `q_k^(l)` families.
    pub levels: u32,
    /// Total degree of interest; `CG` without an explicit bound uses half of it.
    pub degree_hint: u32,
}

impl Default for SpecOptions {
    fn default() -> Self {
        SpecOptions {
            levels: DEFAULT_LEVELS,
            degree_hint: 4,
        }
    }
}

/// Expands `q:k:l` shorthands inside polynomial text.
fn expand_q(text: &str, field: PrimeField) -> Result<String> {
    let mut out = String::new();
    let mut rest = text;
    while let Some(pos) = rest.find("q:") {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + 2..];
        let end = after
            .find(|c: char| !(c.is_ascii_digit() || c == ':'))
            .unwrap_or(after.len());
        let args: Vec<&str> = after[..end].split(':').collect();
        if args.len() != 2 {
            return Err(Error::Argument(format!(
                "'q:{}' must have the form q:k:l",
                &after[..end]
            )));
        }
        let v = nums(&args, text)?;
        out.push('(');
        out.push_str(&q_poly(v[0], v[1], field)?.to_string());
        out.push(')');
        rest = &after[end..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Parses a polynomial allowing the `q:k:l` shorthand.
pub fn parse_poly(text: &str, field: PrimeField) -> Result<FreePoly> {
    crate::syntax::parse_auto(&expand_q(text, field)?, field)
}

/// Reads a `;`-separated spec over `n` variables.
pub fn parse_spec(
    text: &str,
    field: PrimeField,
    n: usize,
    opts: SpecOptions,
) -> Result<GeneratorSpec> {
    let mut spec = GeneratorSpec::new(field, n);
    let mut labels = Vec::new();
    for raw in text.split(';') {
        let item = raw.trim();
        if item.is_empty() {
            continue;
        }
        let (head, tail) = match item.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t)),
            None => (item, None),
        };
        let args = |t: Option<&str>| -> Result<Vec<u32>> {
            match t {
                Some(t) => nums(&t.split(':').collect::<Vec<_>>(), item),
                None => Ok(Vec::new()),
            }
        };
        let named = match head {
            "C" => {
                let a = args(tail)?;
                match a.as_slice() {
                    [m] => Some(spec_c_n(field, *m as usize, opts.levels)?),
                    [m, l] => Some(spec_c_n(field, *m as usize, *l)?),
                    _ => return Err(Error::Argument(format!("'{item}' must be C:n or C:n:L"))),
                }
            }
            h if h.starts_with("C_") && tail.is_none() => {
                let m = nums(&[&h[2..]], item)?[0];
                Some(spec_c_n(field, m as usize, opts.levels)?)
            }
            "U" => match args(tail)?.as_slice() {
                [k] => Some(spec_u(field, n, *k)?),
                _ => return Err(Error::Argument(format!("'{item}' must be U:k"))),
            },
            "Q" => match args(tail)?.as_slice() {
                [k, l] => Some(spec_q(field, n, *k, *l)?),
                _ => return Err(Error::Argument(format!("'{item}' must be Q:k:l"))),
            },
            "T3" => match args(tail)?.as_slice() {
                [k] => Some(spec_t3k(field, n, *k)?),
                _ => return Err(Error::Argument(format!("'{item}' must be T3:k"))),
            },
            "V" => match args(tail)?.as_slice() {
                [l, k] => Some(spec_v(field, n, *l, *k)?),
                _ => return Err(Error::Argument(format!("'{item}' must be V:l:k"))),
            },
            "R" => match args(tail)?.as_slice() {
                [k] => Some(spec_r(field, n, *k, opts.levels)?),
                [k, l] => Some(spec_r(field, n, *k, *l)?),
                _ => return Err(Error::Argument(format!("'{item}' must be R:k or R:k:L"))),
            },
            "CG" => match args(tail)?.as_slice() {
                [] => Some(spec_cg(field, n, opts.degree_hint / 2)?),
                [j] => Some(spec_cg(field, n, *j)?),
                _ => return Err(Error::Argument(format!("'{item}' must be CG or CG:J"))),
            },
            _ => None,
        };
        match named {
            Some(s) => {
                labels.push(s.label().to_string());
                spec = spec.union(&s.with_n(n))?;
            }
            None => {
                let (closure, body) = match (head, tail) {
                    ("space", Some(t)) => (Closure::Space, t),
                    ("ideal", Some(t)) => (Closure::Ideal, t),
                    _ => (Closure::Space, item),
                };
                let poly = parse_poly(body, field)?;
                labels.push(format!("<{}>", poly));
                spec.push(poly, closure)?;
            }
        }
    }
    Ok(spec.labeled(labels.join(" + ")))
}
