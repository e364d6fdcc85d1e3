//! Schatten `r`-norms of the complex Green operator.
//!
//! `‖G‖_r^r = Σ_{q≥1} Σ_{p≥0} m_{p,q} / (2q(p+n−1))^r`, finite iff `r > n`.
//!
//! For `r > n` the discarded part of a truncated sum is bounded with the
//! majorant
//!
//! ```text
//! U(p,q) = (n+p+q−1)(p+n−2)^{n−2}(q+n−2)^{n−2} / ((n−1)!(n−2)! (2pq)^r),   p ≥ 1
//! B(q)   = (q+n−1)^{n−1} / ((n−1)! (2q(n−1))^r),                              p = 0
//! ```
//!
//! both decreasing in each variable once `r > n − 1`, so sums over tails are
//! dominated by integrals. For `p ≥ n` the minorant
//! `(p+q) p^{n−2} q^{n−2} / ((n−1)!(n−2)! (4pq)^r)` bounds terms from below;
//! it separates into one-dimensional power sums.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dimension, Error, Result};
use crate::polynomial::Bidegree;
use crate::scalar::{format_ratio, ratio_to_f64, SpectralValue};
use crate::spectrum::{binomial, multiplicity};

/// Relative inflation applied to float tail bounds to absorb rounding.
const OUTWARD_ROUNDING: f64 = 1e-9;

/// Terms beyond this many in a power sum are handled by Euler–Maclaurin.
const DIRECT_POWER_SUM_TERMS: u128 = 1 << 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges,
}

fn check_r(r: &BigRational) -> Result<()> {
    if r < &BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "Schatten exponent r must be at least 1, got {r}"
        )));
    }
    Ok(())
}

fn int_exponent(r: &BigRational) -> Option<u32> {
    r.is_integer().then(|| r.to_integer().to_u32()).flatten()
}

fn factorial_f64(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `‖G‖_r < ∞` iff `r > n`.
pub fn verdict(n: usize, r: &BigRational) -> Result<Verdict> {
    check_dimension(n)?;
    check_r(r)?;
    Ok(if r > &BigRational::from_integer(BigInt::from(n)) {
        Verdict::Converges
    } else {
        Verdict::Diverges
    })
}

/// `m_{p,q} λ_{p,q}^r` exactly, for `q ≥ 1` and integer `r`.
pub fn term_exact(n: usize, p: u64, q: u64, r: u32) -> BigRational {
    let m = multiplicity(n, Bidegree::new(p as u32, q as u32)).expect("n checked by caller");
    let lambda = BigInt::from(2 * q * (p + n as u64 - 1));
    BigRational::new(BigInt::from(m), num_traits::pow(lambda, r as usize))
}

/// Float multiplicity from the product form.
fn multiplicity_f64(n: usize, p: u64, q: u64) -> f64 {
    let mut num = (n as u64 + p + q - 1) as f64;
    for j in 1..=(n as u64 - 2) {
        num *= (p + j) as f64 * (q + j) as f64;
    }
    num / (factorial_f64(n - 1) * factorial_f64(n - 2))
}

pub fn term_f64(n: usize, p: u64, q: u64, r: f64) -> f64 {
    multiplicity_f64(n, p, q) / (2.0 * q as f64 * (p + n as u64 - 1) as f64).powf(r)
}

/// Majorant `U(p,q)` at a lattice point (`p ≥ 1`), exact for integer `r`.
pub fn upper_term_exact(n: usize, p: u64, q: u64, r: u32) -> BigRational {
    let n64 = n as u64;
    let num = BigUint::from(n64 + p + q - 1)
        * num_traits::pow(BigUint::from(p + n64 - 2), n - 2)
        * num_traits::pow(BigUint::from(q + n64 - 2), n - 2);
    let den = factorial_u(n - 1) * factorial_u(n - 2) * num_traits::pow(BigUint::from(2 * p * q), r as usize);
    BigRational::new(num.into(), den.into())
}

/// Minorant at a lattice point (`p ≥ n`), exact for integer `r`.
pub fn lower_term_exact(n: usize, p: u64, q: u64, r: u32) -> BigRational {
    let num = BigUint::from(p + q)
        * num_traits::pow(BigUint::from(p), n - 2)
        * num_traits::pow(BigUint::from(q), n - 2);
    let den = factorial_u(n - 1) * factorial_u(n - 2) * num_traits::pow(BigUint::from(4 * p * q), r as usize);
    BigRational::new(num.into(), den.into())
}

fn factorial_u(k: usize) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, j| acc * BigUint::from(j))
}

/// `Σ_{q=1}^{Q} Σ_{p=0}^{P} m_{p,q} λ_{p,q}^r`: exact for integer `r`,
/// otherwise a float summed in ascending order.
pub fn partial_sum(n: usize, r: &BigRational, cutoff_p: u64, cutoff_q: u64) -> Result<SpectralValue> {
    check_dimension(n)?;
    check_r(r)?;
    check_q(cutoff_q)?;
    match int_exponent(r) {
        Some(r) => Ok(SpectralValue::Exact(partial_sum_exact(n, r, cutoff_p, cutoff_q))),
        None => Ok(SpectralValue::Approx(partial_sum_f64(n, ratio_to_f64(r), cutoff_p, cutoff_q))),
    }
}

fn check_q(cutoff_q: u64) -> Result<()> {
    if cutoff_q < 1 {
        return Err(Error::InvalidParameter("cutoff Q must be at least 1".into()));
    }
    Ok(())
}

fn partial_sum_exact(n: usize, r: u32, cutoff_p: u64, cutoff_q: u64) -> BigRational {
    (1..=cutoff_q)
        .into_par_iter()
        .map(|q| {
            (0..=cutoff_p)
                .map(|p| term_exact(n, p, q, r))
                .fold(BigRational::zero(), |acc, t| acc + t)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// Float partial sum with terms added in ascending order.
pub fn partial_sum_f64(n: usize, r: f64, cutoff_p: u64, cutoff_q: u64) -> f64 {
    let mut terms: Vec<f64> = (1..=cutoff_q)
        .into_par_iter()
        .flat_map_iter(|q| (0..=cutoff_p).map(move |p| term_f64(n, p, q, r)))
        .collect();
    terms.par_sort_unstable_by(f64::total_cmp);
    terms.iter().sum()
}

/// `∫_from^∞ x^{i−r} dx`, finite because `i < r − 1`.
fn power_tail_integral(i: usize, r: f64, from: f64) -> f64 {
    let e = i as f64 - r + 1.0;
    debug_assert!(e < 0.0);
    from.powf(e) / -e
}

/// `(c + x + y)(x+a)^{a}(y+a)^{a}` with `a = n−2`, `c = n−1`, expanded as
/// `Σ coef · x^i y^j`.
fn majorant_numerator(n: usize) -> Vec<(usize, usize, f64)> {
    let a = n - 2;
    let shift = a as f64;
    let c = (n - 1) as f64;
    let binom = |k: usize| -> Vec<f64> {
        (0..=k)
            .map(|i| binomial(k as u64, i as u64).to_f64().unwrap() * shift.powi((k - i) as i32))
            .collect()
    };
    let ax = binom(a);
    let mut out = Vec::new();
    for (i, &ci) in ax.iter().enumerate() {
        for (j, &cj) in ax.iter().enumerate() {
            out.push((i, j, c * ci * cj));
            out.push((i + 1, j, ci * cj));
            out.push((i, j + 1, ci * cj));
        }
    }
    out
}

/// Rigorous upper bound for `Σ` of the terms outside `[0,P] × [1,Q]`;
/// `+∞` when `r ≤ n`.
pub fn tail_upper_bound(n: usize, r: &BigRational, cutoff_p: u64, cutoff_q: u64) -> Result<f64> {
    check_dimension(n)?;
    check_r(r)?;
    check_q(cutoff_q)?;
    if verdict(n, r)? == Verdict::Diverges {
        return Ok(f64::INFINITY);
    }
    let rf = ratio_to_f64(r);
    let k = 1.0 / (factorial_f64(n - 1) * factorial_f64(n - 2));
    let scale = k * 2f64.powf(-rf);
    let qf = cutoff_q as f64;
    // Σ_{p>P} U(p, y) in the x variable: the integral from P, or U(1,y) plus
    // the integral from 1 when P = 0.
    let px = |i: usize| -> f64 {
        if cutoff_p >= 1 {
            power_tail_integral(i, rf, cutoff_p as f64)
        } else {
            1.0 + power_tail_integral(i, rf, 1.0)
        }
    };
    let all_px = |i: usize| 1.0 + power_tail_integral(i, rf, 1.0);
    let mut q_sums = vec![0.0; n + 1];
    for (j, slot) in q_sums.iter_mut().enumerate() {
        let e = j as f64 - rf;
        let mut terms: Vec<f64> = (1..=cutoff_q).map(|y| (y as f64).powf(e)).collect();
        terms.sort_unstable_by(f64::total_cmp);
        *slot = terms.iter().sum();
    }

    let mut strip_p = 0.0; // q ≤ Q, p > P
    let mut strip_q = 0.0; // q > Q, p ≥ 1
    for (i, j, coef) in majorant_numerator(n) {
        strip_p += coef * px(i) * q_sums[j];
        strip_q += coef * all_px(i) * power_tail_integral(j, rf, qf);
    }
    strip_p *= scale;
    strip_q *= scale;

    // q > Q, p = 0
    let c = (n - 1) as f64;
    let mut hardy_edge = 0.0;
    for j in 0..n {
        let coef = binomial((n - 1) as u64, j as u64).to_f64().unwrap() * c.powi((n - 1 - j) as i32);
        hardy_edge += coef * power_tail_integral(j, rf, qf);
    }
    hardy_edge /= factorial_f64(n - 1) * (2.0 * c).powf(rf);

    Ok((strip_p + strip_q + hardy_edge) * (1.0 + OUTWARD_ROUNDING))
}

/// `Σ_{k=a}^{b} k^e` for `1 ≤ a`, `b = None` meaning `∞`. Infinite when the
/// series diverges.
pub fn power_sum(e: f64, a: u128, b: Option<u128>) -> f64 {
    assert!(a >= 1);
    if let Some(b) = b {
        if b < a {
            return 0.0;
        }
    } else if e >= -1.0 {
        return f64::INFINITY;
    }
    let direct_end = match b {
        Some(b) if b - a < DIRECT_POWER_SUM_TERMS => b,
        _ => a + DIRECT_POWER_SUM_TERMS - 1,
    };
    let mut terms: Vec<f64> = (a..=direct_end).map(|k| (k as f64).powf(e)).collect();
    terms.sort_unstable_by(f64::total_cmp);
    let direct: f64 = terms.iter().sum();
    if Some(direct_end) == b {
        return direct;
    }
    // Euler–Maclaurin for Σ_{k=s}^{b} k^e.
    let s = (direct_end + 1) as f64;
    let f = |x: f64| x.powf(e);
    let d1 = |x: f64| e * x.powf(e - 1.0);
    let d3 = |x: f64| e * (e - 1.0) * (e - 2.0) * x.powf(e - 3.0);
    let rest = match b {
        Some(b) => {
            let bf = b as f64;
            let integral = if e == -1.0 {
                (bf / s).ln()
            } else {
                s.powf(e + 1.0) * ((e + 1.0) * (bf / s).ln()).exp_m1() / (e + 1.0)
            };
            integral + (f(s) + f(bf)) / 2.0 + (d1(bf) - d1(s)) / 12.0 - (d3(bf) - d3(s)) / 720.0
        }
        None => s.powf(e + 1.0) / -(e + 1.0) + f(s) / 2.0 - d1(s) / 12.0 + d3(s) / 720.0,
    };
    direct + rest
}

fn minorant_exponents(n: usize, r: f64) -> [(f64, f64); 2] {
    let a = (n as f64) - 1.0 - r;
    let b = (n as f64) - 2.0 - r;
    [(a, b), (b, a)]
}

fn minorant_scale(n: usize, r: f64) -> f64 {
    4f64.powf(-r) / (factorial_f64(n - 1) * factorial_f64(n - 2))
}

/// `Σ_{q=1}^{Q} Σ_{p=n}^{P}` of the minorant: a lower bound for `‖G‖_r^r`.
pub fn lower_bound_sum(n: usize, r: &BigRational, cutoff_p: u128, cutoff_q: u128) -> Result<f64> {
    check_dimension(n)?;
    check_r(r)?;
    if cutoff_p < n as u128 {
        return Err(Error::InvalidParameter(format!(
            "cutoff P must be at least n = {n}, got {cutoff_p}"
        )));
    }
    if cutoff_q < 1 {
        return Err(Error::InvalidParameter("cutoff Q must be at least 1".into()));
    }
    let rf = ratio_to_f64(r);
    let total: f64 = minorant_exponents(n, rf)
        .iter()
        .map(|&(ep, eq)| {
            power_sum(ep, n as u128, Some(cutoff_p)) * power_sum(eq, 1, Some(cutoff_q))
        })
        .sum();
    Ok(minorant_scale(n, rf) * total)
}

/// Minorant summed over the tail region: a lower bound for the discarded
/// terms. `+∞` when `r ≤ n`.
pub fn tail_lower_bound(n: usize, r: &BigRational, cutoff_p: u64, cutoff_q: u64) -> Result<f64> {
    check_dimension(n)?;
    check_r(r)?;
    if verdict(n, r)? == Verdict::Diverges {
        return Ok(f64::INFINITY);
    }
    let rf = ratio_to_f64(r);
    let (np, p, q) = (n as u128, cutoff_p as u128, cutoff_q as u128);
    let total: f64 = minorant_exponents(n, rf)
        .iter()
        .map(|&(ep, eq)| {
            // {p > P, q ≥ 1} ∪ {n ≤ p ≤ P, q > Q}
            power_sum(ep, (p + 1).max(np), None) * power_sum(eq, 1, None)
                + power_sum(ep, np, Some(p)) * power_sum(eq, q + 1, None)
        })
        .sum();
    Ok(minorant_scale(n, rf) * total)
}

/// The closed-form approximation
/// `r / (4^r (r−n)(r−n+1) n^{r−n} (n−1)(n−1)!(n−2)!) + n/(2n−2)^r`.
pub fn approx_formula(n: usize, r: f64) -> Result<f64> {
    check_dimension(n)?;
    let nf = n as f64;
    if r.is_nan() || r <= nf {
        return Err(Error::InvalidParameter(format!(
            "approximation needs r > n = {n}, got {r}"
        )));
    }
    let den = 4f64.powf(r)
        * (r - nf)
        * (r - nf + 1.0)
        * nf.powf(r - nf)
        * (nf - 1.0)
        * factorial_f64(n - 1)
        * factorial_f64(n - 2);
    Ok(r / den + nf / (2.0 * nf - 2.0).powf(r))
}

/// `lim_{r→n⁺} (r−n)·A(r,n) = n / (4^n (n−1)(n−1)!(n−2)!)`.
pub fn approx_pole_residue(n: usize) -> f64 {
    let nf = n as f64;
    nf / (4f64.powi(n as i32) * (nf - 1.0) * factorial_f64(n - 1) * factorial_f64(n - 2))
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceWitness {
    pub baseline_cutoff: String,
    pub baseline: f64,
    pub cutoff: String,
    pub value: f64,
    pub doublings: u32,
}

/// Doubles `P = Q` from `start` until the minorant sum exceeds
/// `factor ×` its value at `start`.
pub fn divergence_witness(
    n: usize,
    r: &BigRational,
    start: u128,
    factor: f64,
    max_doublings: u32,
) -> Result<Option<DivergenceWitness>> {
    let baseline = lower_bound_sum(n, r, start, start)?;
    let mut cutoff = start;
    for doublings in 1..=max_doublings {
        cutoff = match cutoff.checked_mul(2) {
            Some(c) => c,
            None => return Ok(None),
        };
        let value = lower_bound_sum(n, r, cutoff, cutoff)?;
        if value > factor * baseline {
            return Ok(Some(DivergenceWitness {
                baseline_cutoff: start.to_string(),
                baseline,
                cutoff: cutoff.to_string(),
                value,
                doublings,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct Bracket {
    pub cutoff: u64,
    pub lower: f64,
    pub upper: f64,
    pub relative_width: f64,
}

/// Doubles `P = Q` from `start` up to `max_cutoff` until
/// `tail_upper / partial_sum ≤ rel_width`; returns the last bracket tried.
pub fn convergence_bracket(
    n: usize,
    r: &BigRational,
    start: u64,
    max_cutoff: u64,
    rel_width: f64,
) -> Result<Bracket> {
    let rf = ratio_to_f64(r);
    let mut cutoff = start.max(1);
    loop {
        let lower = partial_sum_f64(n, rf, cutoff, cutoff);
        let tail = tail_upper_bound(n, r, cutoff, cutoff)?;
        let bracket = Bracket {
            cutoff,
            lower,
            upper: lower + tail,
            relative_width: tail / lower,
        };
        if bracket.relative_width <= rel_width || cutoff >= max_cutoff {
            return Ok(bracket);
        }
        cutoff = (cutoff * 2).min(max_cutoff);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchattenReport {
    pub n: usize,
    pub r: String,
    pub r_float: f64,
    pub cutoff_p: u64,
    pub cutoff_q: u64,
    /// `"num/den"` when computed exactly.
    pub partial_sum: Option<String>,
    pub partial_sum_float: f64,
    /// `None` stands for `+∞`.
    pub tail_upper_float: Option<f64>,
    pub tail_lower_float: Option<f64>,
    pub verdict: Verdict,
    pub approx_value_float: Option<f64>,
}

/// Builds the full report. The partial sum is exact for integer `r` unless
/// `force_float` is set.
pub fn schatten_report(
    n: usize,
    r: &BigRational,
    cutoff_p: u64,
    cutoff_q: u64,
    force_float: bool,
) -> Result<SchattenReport> {
    let v = verdict(n, r)?;
    check_q(cutoff_q)?;
    let rf = ratio_to_f64(r);
    let (exact, float) = match (force_float, int_exponent(r)) {
        (false, Some(ri)) => {
            let s = partial_sum_exact(n, ri, cutoff_p, cutoff_q);
            let f = ratio_to_f64(&s);
            (Some(format_ratio(&s)), f)
        }
        _ => (None, partial_sum_f64(n, rf, cutoff_p, cutoff_q)),
    };
    let finite = |x: f64| x.is_finite().then_some(x);
    Ok(SchattenReport {
        n,
        r: format_ratio(r),
        r_float: rf,
        cutoff_p,
        cutoff_q,
        partial_sum: exact,
        partial_sum_float: float,
        tail_upper_float: finite(tail_upper_bound(n, r, cutoff_p, cutoff_q)?),
        tail_lower_float: finite(tail_lower_bound(n, r, cutoff_p, cutoff_q)?),
        verdict: v,
        approx_value_float: approx_formula(n, rf).ok(),
    })
}

/// `(cutoff, partial_sum)` at `P = Q = cutoff` for each requested cutoff, as CSV.
pub fn partial_sum_series_csv(n: usize, r: &BigRational, cutoffs: &[u64]) -> Result<String> {
    check_dimension(n)?;
    check_r(r)?;
    let rf = ratio_to_f64(r);
    let mut out = String::from("cutoff,partial_sum_float\n");
    for &c in cutoffs {
        check_q(c)?;
        out.push_str(&format!("{},{:e}\n", c, partial_sum_f64(n, rf, c, c)));
    }
    Ok(out)
}
