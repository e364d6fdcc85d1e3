//! Sobolev gain of the Green operator.
//!
//! With `μ(k) = k(k+2n−2)` and `λ_min(k) = 2(k+n−2)`, the operator maps
//! `H^s → H^{s+1}` with constant `C` iff `(1+μ(k))^s / λ_min(k)^2` stays
//! bounded, and the best `C²` is the supremum of the `s = 1` sequence.
//!
//! Writing `m = k+n−2`, the `s = 1` ratio is `(1 + 2/m + c/m²)/4` with
//! `c = 1 − n(n−2)`, which is strictly decreasing in `k` once
//! `m > −c`, i.e. for `k > n²−3n+1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{check_dimension, Error, Result};
use crate::operators::{apply_green, decompose};
use crate::polynomial::{Bidegree, Polynomial};
use crate::scalar::{format_ratio, rational_power, ratio_to_f64, SpectralValue};
use crate::spectrum::{lambda_min, laplace_beltrami_eigenvalue};

#[derive(Clone, Debug, PartialEq)]
pub struct RatioPoint {
    pub k: u64,
    pub value: SpectralValue,
}

/// `(1+μ(k))^s / λ_min(k)²`, exact for integer `s`.
pub fn ratio(n: usize, s: &BigRational, k: u64) -> Result<SpectralValue> {
    check_dimension(n)?;
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    let k = i64::try_from(k).map_err(|_| Error::InvalidParameter(format!("k too large: {k}")))?;
    let base = laplace_beltrami_eigenvalue(n, k)? + BigRational::one();
    let lm = lambda_min(n, k)?;
    Ok(match rational_power(&base, s) {
        SpectralValue::Exact(v) => SpectralValue::Exact(v / (&lm * &lm)),
        SpectralValue::Approx(v) => SpectralValue::Approx(v / ratio_to_f64(&lm).powi(2)),
    })
}

/// Float ratio for `k` beyond the range where exact powers are practical.
pub fn ratio_f64(n: usize, s: f64, k: u64) -> f64 {
    let kf = k as f64;
    let nf = n as f64;
    (kf * (kf + 2.0 * nf - 2.0) + 1.0).powf(s) / (4.0 * (kf + nf - 2.0).powi(2))
}

pub fn ratio_points(n: usize, s: &BigRational, ks: impl IntoIterator<Item = u64>) -> Result<Vec<RatioPoint>> {
    ks.into_iter()
        .map(|k| Ok(RatioPoint { k, value: ratio(n, s, k)? }))
        .collect()
}

/// CSV with header `k,value,value_float`; `value` is `num/den` when exact.
pub fn ratio_points_csv(points: &[RatioPoint]) -> String {
    let mut out = String::from("k,value,value_float\n");
    for p in points {
        let exact = match &p.value {
            SpectralValue::Exact(v) => format_ratio(v),
            SpectralValue::Approx(v) => format!("{v:e}"),
        };
        out.push_str(&format!("{},{},{:e}\n", p.k, exact, p.value.to_f64()));
    }
    out
}

/// `H^s → H^{s+1}` boundedness holds iff `s ≤ 1`.
pub fn is_bounded(_n: usize, s: &BigRational) -> bool {
    s <= &BigRational::one()
}

/// The ratio grows like `k^{2s−2}/4`.
pub fn growth_exponent(s: &BigRational) -> BigRational {
    s * BigRational::from_integer(2.into()) - BigRational::from_integer(2.into())
}

/// Smallest `k = 2^j` with `ratio(n, s, k) > bound`, if `s > 1` and one
/// exists below `2^62`.
pub fn unboundedness_witness(n: usize, s: &BigRational, bound: f64) -> Option<u64> {
    if is_bounded(n, s) {
        return None;
    }
    let sf = ratio_to_f64(s);
    (0..63).map(|j| 1u64 << j).find(|&k| ratio_f64(n, sf, k) > bound)
}

/// Critical index `n²−3n+1` (argmax for `n ≥ 3`), or 1 when `n = 2`.
pub fn critical_k(n: usize) -> u64 {
    let n = n as u64;
    if n == 2 {
        1
    } else {
        n * n - 3 * n + 1
    }
}

/// Smallest `k₀` such that the `s = 1` sequence is strictly decreasing on
/// `[k₀, ∞)`, derived from the sign of `1 + c/m`.
pub fn decreasing_from(n: usize) -> u64 {
    let nn = n as i64;
    let c = 1 - nn * (nn - 2);
    if c >= 0 {
        return 1;
    }
    // need k + n − 2 ≥ −c
    ((-c) - (nn - 2)).max(1) as u64
}

/// Bidegrees on which `‖Gf‖_{s+1} = C‖f‖_s`.
pub fn equality_bidegrees(n: usize) -> Vec<Bidegree> {
    if n == 2 {
        vec![Bidegree::new(0, 1)]
    } else {
        vec![Bidegree::new((n * n - 3 * n) as u32, 1)]
    }
}

#[derive(Clone, Debug)]
pub struct BestConstantReport {
    pub n: usize,
    pub c_squared: BigRational,
    pub argmax_k: u64,
    pub equality_bidegrees: Vec<Bidegree>,
    pub scan_max: u64,
    /// Strictly increasing up to `argmax_k` and strictly decreasing after, by
    /// exact neighbour comparison over the scan.
    pub unimodal_on_scan: bool,
    /// First `k` of the analytically decreasing tail.
    pub tail_decreasing_from: u64,
    pub theorem_display: BigRational,
    pub proof_display: Option<BigRational>,
    pub matches_theorem_display: bool,
    pub matches_proof_display: bool,
}

impl BestConstantReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "c_squared": format_ratio(&self.c_squared),
            "c_squared_float": ratio_to_f64(&self.c_squared),
            "argmax_k": self.argmax_k,
            "equality_bidegrees": self.equality_bidegrees,
            "scan_max": self.scan_max,
            "unimodal_on_scan": self.unimodal_on_scan,
            "tail_decreasing_from": self.tail_decreasing_from,
            "theorem_display": format_ratio(&self.theorem_display),
            "proof_display": self.proof_display.as_ref().map(format_ratio),
            "matches_theorem_display": self.matches_theorem_display,
            "matches_proof_display": self.matches_proof_display,
        })
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Smallest admissible `scan_max`: the critical index plus a margin of `n²`.
pub fn minimum_scan(n: usize) -> u64 {
    critical_k(n).max(1) + (n * n) as u64
}

/// Exact maximum of the `s = 1` ratio over `1 ≤ k ≤ scan_max`, which is the
/// supremum over all `k` because the scan reaches the decreasing tail.
pub fn best_constant(n: usize, scan_max: u64) -> Result<BestConstantReport> {
    check_dimension(n)?;
    let needed = minimum_scan(n);
    if scan_max < needed {
        return Err(Error::InvalidParameter(format!(
            "scan_max must be at least {needed} for n = {n}, got {scan_max}"
        )));
    }
    let tail = decreasing_from(n);
    assert!(tail <= scan_max);
    let one = int(1);
    let values: Vec<BigRational> = (1..=scan_max)
        .into_par_iter()
        .map(|k| {
            ratio(n, &one, k)?
                .exact()
                .cloned()
                .ok_or_else(|| Error::InvalidParameter("inexact ratio".into()))
        })
        .collect::<Result<_>>()?;

    let mut best = 0usize;
    for (i, v) in values.iter().enumerate().skip(1) {
        assert!(v != &values[best], "tie in ratio sequence at k = {} and k = {}", best + 1, i + 1);
        if v > &values[best] {
            best = i;
        }
    }
    let unimodal_on_scan = values
        .windows(2)
        .enumerate()
        .all(|(i, w)| if i < best { w[0] < w[1] } else { w[0] > w[1] });

    let nn = n as i64;
    let c_squared = values[best].clone();
    let theorem_display = int(nn * (nn - 2)) / int(4 * (nn - 1) * (nn - 1));
    let proof_display = (n >= 3).then(|| int(nn * (nn - 2)) / int(4 * (nn * nn - 2 * nn - 1)));
    Ok(BestConstantReport {
        n,
        argmax_k: best as u64 + 1,
        equality_bidegrees: equality_bidegrees(n),
        scan_max,
        unimodal_on_scan,
        tail_decreasing_from: tail,
        matches_theorem_display: c_squared == theorem_display,
        matches_proof_display: proof_display.as_ref() == Some(&c_squared),
        theorem_display,
        proof_display,
        c_squared,
    })
}

#[derive(Clone, Debug)]
pub struct GainCertificate {
    pub n: usize,
    pub s: u32,
    /// `‖Gf‖²_{s+1}`
    pub green_norm_squared: BigRational,
    /// `‖f‖²_s`
    pub input_norm_squared: BigRational,
    pub c_squared: BigRational,
    /// `green_norm_squared / input_norm_squared`, absent for `f = 0` on the sphere.
    pub ratio: Option<BigRational>,
    pub holds: bool,
    pub equality: bool,
    pub in_equality_eigenspace: bool,
}

impl GainCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "s": self.s,
            "green_norm_squared": format_ratio(&self.green_norm_squared),
            "bound": format_ratio(&(&self.c_squared * &self.input_norm_squared)),
            "c_squared": format_ratio(&self.c_squared),
            "ratio": self.ratio.as_ref().map(format_ratio),
            "holds": self.holds,
            "equality": self.equality,
            "in_equality_eigenspace": self.in_equality_eigenspace,
        })
    }
}

/// Compares `‖Gf‖²_{s+1}` with `C²‖f‖²_s` exactly.
pub fn sobolev_gain_certificate(n: usize, f: &Polynomial, s: u32) -> Result<GainCertificate> {
    check_dimension(n)?;
    if f.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: f.n() });
    }
    let c_squared = best_constant(n, minimum_scan(n))?.c_squared;
    let s_rat = int(s as i64);
    let s_next = int(s as i64 + 1);
    let exact = |v: SpectralValue| v.exact().cloned().expect("integer order is exact");
    let green_norm_squared = exact(apply_green(f).sobolev_norm_squared(&s_next));
    let parts = decompose(f);
    let input_norm_squared = exact(parts.sobolev_norm_squared(&s_rat));
    let bound = &c_squared * &input_norm_squared;
    let nonzero = input_norm_squared.is_positive();
    let targets = equality_bidegrees(n);
    let in_equality_eigenspace =
        parts.components.len() == 1 && targets.contains(&parts.components[0].bidegree);
    Ok(GainCertificate {
        n,
        s,
        ratio: nonzero.then(|| &green_norm_squared / &input_norm_squared),
        holds: green_norm_squared <= bound,
        equality: nonzero && green_norm_squared == bound,
        in_equality_eigenspace,
        green_norm_squared,
        input_norm_squared,
        c_squared,
    })
}

/// `(n²−3n+1)(n²−n−1) + 1 = n(n−2)(n²−2n−1)`, which turns the critical ratio
/// into `n(n−2)/(4(n²−2n−1))`.
pub fn critical_identity_holds(n: u64) -> bool {
    let n = n as i128;
    (n * n - 3 * n + 1) * (n * n - n - 1) + 1 == n * (n - 2) * (n * n - 2 * n - 1)
}
