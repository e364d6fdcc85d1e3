//! Oracle bundle behind `kohn-spectra verify`.

use kohn_spectra::harmonic::verify_eigen_identities;
use kohn_spectra::operators::residual_check;
use kohn_spectra::polynomial::{monomial_sphere_integral, Multiindex};
use kohn_spectra::random::random_polynomial;
use kohn_spectra::scalar::{format_ratio, ExactScalar};
use kohn_spectra::schatten::{lower_term_exact, term_exact, upper_term_exact};
use kohn_spectra::sobolev::{equality_bidegrees, sobolev_gain_certificate};
use kohn_spectra::{Polynomial, Result};
use num_traits::{One, Zero};
use serde_json::{json, Value};

const SANDWICH_GRID: u64 = 50;

/// Diagonal integrals satisfy `Σ_j I(α+e_j) = I(α)` and `I(0) = 1`.
fn integral_recursion(n: usize, max_degree: u32) -> Value {
    let zero = Multiindex::zeros(n);
    let mut failures = Vec::new();
    if !monomial_sphere_integral(n, &zero, &zero).is_one() {
        failures.push("integral of 1 is not 1".to_string());
    }
    let mut checked = 0usize;
    for d in 0..max_degree {
        for alpha in Multiindex::all_of_degree(n, d) {
            let here = monomial_sphere_integral(n, &alpha, &alpha);
            let up = (0..n)
                .map(|j| {
                    let a = alpha.plus(&Multiindex::unit(n, j));
                    monomial_sphere_integral(n, &a, &a)
                })
                .fold(Zero::zero(), |acc: num_rational::BigRational, v| acc + v);
            checked += 1;
            if up != here {
                failures.push(format!("alpha {:?}", alpha.entries()));
            }
        }
    }
    json!({ "checked": checked, "failures": failures, "passed": failures.is_empty() })
}

fn residuals(n: usize, max_degree: u32, samples: u64, seed: u64) -> Value {
    let mut failures = Vec::new();
    for i in 0..samples {
        let f = random_polynomial(n, max_degree, 6, seed.wrapping_add(i));
        let r = residual_check(&f);
        if !r.is_zero() {
            failures.push(json!({ "sample": i, "residual": format_ratio(&r) }));
        }
    }
    json!({ "samples": samples, "failures": failures, "passed": failures.is_empty() })
}

fn sandwich(n: usize) -> Value {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for r in [n as u32 + 1, n as u32 + 2] {
        for p in n as u64..=SANDWICH_GRID {
            for q in 1..=SANDWICH_GRID {
                let t = term_exact(n, p, q, r);
                checked += 1;
                if !(lower_term_exact(n, p, q, r) <= t && t <= upper_term_exact(n, p, q, r)) {
                    failures.push(json!({ "r": r, "p": p, "q": q }));
                }
            }
        }
    }
    json!({ "checked": checked, "failures": failures, "passed": failures.is_empty() })
}

fn gain_certificates(n: usize, max_degree: u32, samples: u64, seed: u64) -> Result<Value> {
    let mut failures = Vec::new();
    let eq = equality_bidegrees(n)[0];
    // z_1^p zb_2 is harmonic of bidegree (p, 1)
    let mut alpha = vec![0; n];
    alpha[0] = eq.p;
    let mut beta = vec![0; n];
    beta[1] = 1;
    let witness = Polynomial::monomial(n, Multiindex::new(alpha), Multiindex::new(beta), ExactScalar::one());
    for s in 0..=1 {
        let c = sobolev_gain_certificate(n, &witness, s)?;
        if !(c.equality && c.in_equality_eigenspace) {
            failures.push(json!({ "case": "equality witness", "s": s }));
        }
    }
    for i in 0..samples {
        let f = random_polynomial(n, max_degree, 6, seed.wrapping_add(1000 + i));
        for s in 0..=1 {
            let c = sobolev_gain_certificate(n, &f, s)?;
            if !c.holds || c.equality != c.in_equality_eigenspace {
                failures.push(json!({ "case": "random", "sample": i, "s": s }));
            }
        }
    }
    Ok(json!({ "samples": samples, "failures": failures, "passed": failures.is_empty() }))
}

pub fn run(n: usize, max_degree: u32, samples: u64, seed: u64) -> Result<Value> {
    let eigen = verify_eigen_identities(n, max_degree)?;
    let integrals = integral_recursion(n, max_degree);
    let residual = residuals(n, max_degree, samples, seed);
    let sandwich = sandwich(n);
    let gain = gain_certificates(n, max_degree, samples, seed)?;
    let passed = eigen.passed
        && [&integrals, &residual, &sandwich, &gain]
            .iter()
            .all(|v| v["passed"].as_bool() == Some(true));
    Ok(json!({
        "n": n,
        "max_degree": max_degree,
        "seed": seed,
        "eigen_identities": {
            "cells_verified": eigen.cells_verified(),
            "orthogonality_pairs_checked": eigen.orthogonality_pairs_checked,
            "passed": eigen.passed,
            "report": eigen,
        },
        "integral_recursion": integrals,
        "residuals": residual,
        "schatten_sandwich": sandwich,
        "gain_certificates": gain,
        "passed": passed,
    }))
}
