//! Seeded random polynomials for property checks and the `verify` command.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polynomial::{Monomial, Multiindex, Polynomial};
use crate::scalar::ExactScalar;

fn random_multiindex(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> Multiindex {
    let mut e = vec![0u32; n];
    for _ in 0..degree {
        e[rng.gen_range(0..n)] += 1;
    }
    Multiindex::new(e)
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=6);
    BigRational::new(num.into(), den.into())
}

/// A polynomial with up to `terms` terms of total degree `≤ max_degree` and
/// small Gaussian-rational coefficients. Deterministic in `seed`.
pub fn random_polynomial(n: usize, max_degree: u32, terms: usize, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<(Monomial, ExactScalar)> = (0..terms)
        .map(|_| {
            let k = rng.gen_range(0..=max_degree);
            let p = rng.gen_range(0..=k);
            let alpha = random_multiindex(&mut rng, n, p);
            let beta = random_multiindex(&mut rng, n, k - p);
            let c = if rng.gen_bool(0.5) {
                ExactScalar::real(random_rational(&mut rng))
            } else {
                ExactScalar::new(random_rational(&mut rng), random_rational(&mut rng))
            };
            (Monomial::new(alpha, beta), c)
        })
        .collect();
    Polynomial::from_terms(n, raw).expect("multiindices have length n")
}

/// A random linear combination of the given polynomials with nonzero
/// rational coefficients.
pub fn random_combination(elements: &[Polynomial], n: usize, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    elements.iter().fold(Polynomial::zero(n), |acc, e| {
        let mut c = random_rational(&mut rng);
        while c == BigRational::from_integer(0.into()) {
            c = random_rational(&mut rng);
        }
        &acc + &e.scale_rational(&c)
    })
}
