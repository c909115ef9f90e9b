//! Seeded random polynomials for the relation and oracle checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspace_core::{FreePoly, PrimeField, Var, Word};

/// Generator for trial `trial` of a check seeded by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A word of length in `min_len..=max_len` over `x_1..x_n`.
pub fn word(rng: &mut ChaCha8Rng, n: usize, min_len: usize, max_len: usize) -> Vec<Var> {
    let len = rng.gen_range(min_len..=max_len);
    (0..len).map(|_| rng.gen_range(1..=n as Var)).collect()
}

/// A polynomial with `1..=max_terms` terms of degree at most `max_deg` and
/// nonzero coefficients (terms may still cancel).
pub fn poly(
    rng: &mut ChaCha8Rng,
    field: PrimeField,
    n: usize,
    max_terms: usize,
    max_deg: usize,
) -> FreePoly {
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<(Word, u32)> = (0..count)
        .map(|_| {
            (
                Word::from_letters(word(rng, n, 0, max_deg)),
                rng.gen_range(1..field.p()),
            )
        })
        .collect();
    FreePoly::from_terms(field, n, terms).expect("indices in range")
}

/// A polynomial in four variables of degree at most 5 drawn from a mix of
/// shapes, so that identities and central polynomials of `G` occur often.
pub fn mixed_poly(rng: &mut ChaCha8Rng, field: PrimeField) -> FreePoly {
    let n = 4;
    let x = |i: Var| FreePoly::var(field, n, i).expect("index in range");
    let w = |rng: &mut ChaCha8Rng, max: usize| {
        FreePoly::word(field, n, &word(rng, n, 1, max)).expect("index in range")
    };
    match rng.gen_range(0..6) {
        0 | 1 => poly(rng, field, n, 4, 5),
        2 => {
            let t =
                FreePoly::long_commutator(&[w(rng, 1), w(rng, 2), w(rng, 1)]).expect("nonempty");
            &(&w(rng, 1) * &t) + &t
        }
        3 => {
            let c = x(rng.gen_range(1..=2))
                .commutator(&x(rng.gen_range(3..=4)))
                .expect("same ring");
            &c + &x(rng.gen_range(1..=4)).pow(field.p().min(5))
        }
        4 => {
            let (a, b, c) = (x(1), w(rng, 1), w(rng, 1));
            &a.commutator(&b).expect("same ring") * &a.commutator(&c).expect("same ring")
        }
        _ => &x(1) * &x(2).commutator(&x(3)).expect("same ring"),
    }
}
