//! Closed-form spectral data of `□_b` and the Laplace–Beltrami operator on
//! `S^{2n−1}`.
//!
//! `H_{p,q}` is an eigenspace of `□_b` with eigenvalue `2q(p+n−1)` and of the
//! (positive) Laplace–Beltrami operator with eigenvalue `k(k+2n−2)`, `k = p+q`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_dimension, Error, Result};
use crate::polynomial::Bidegree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub bidegree: Bidegree,
    pub eigenvalue: BigRational,
    pub multiplicity: BigUint,
}

/// One distinct eigenvalue with the bidegrees that produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregatedEntry {
    pub eigenvalue: BigRational,
    pub multiplicity: BigUint,
    pub contributors: Vec<Bidegree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AggregatedSpectrum {
    pub n: usize,
    pub entries: Vec<AggregatedEntry>,
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `2q(p+n−1)`; zero exactly on the Hardy space bidegrees `q = 0`.
pub fn boxb_eigenvalue(n: usize, d: Bidegree) -> Result<BigRational> {
    check_dimension(n)?;
    Ok(int(2 * d.q as u64 * (d.p as u64 + n as u64 - 1)))
}

/// Eigenvalue of `G` on `H_{p,q}`, `1/(2q(p+n−1))`, or `None` on the kernel.
pub fn green_eigenvalue(n: usize, d: Bidegree) -> Result<Option<BigRational>> {
    let lambda = boxb_eigenvalue(n, d)?;
    Ok((!lambda.is_zero()).then(|| lambda.recip()))
}

fn rising_from(start: u64, count: u64) -> BigUint {
    // (start+1)(start+2)...(start+count)
    (1..=count).fold(BigUint::one(), |acc, j| acc * BigUint::from(start + j))
}

fn factorial(k: u64) -> BigUint {
    rising_from(0, k)
}

pub fn binomial(top: u64, bottom: u64) -> BigUint {
    if bottom > top {
        return BigUint::zero();
    }
    rising_from(top - bottom, bottom) / factorial(bottom)
}

/// `dim H_{p,q}(S^{2n−1})` via the factorial-free product form
/// `(n+p+q−1)(p+1)⋯(p+n−2)(q+1)⋯(q+n−2) / ((n−1)!(n−2)!)`.
///
/// The form is symmetric in `p, q` and valid for `p = 0` or `q = 0`; `H_{0,0}`
/// (constants) is one-dimensional.
pub fn multiplicity(n: usize, d: Bidegree) -> Result<BigUint> {
    check_dimension(n)?;
    if d.p == 0 && d.q == 0 {
        return Ok(BigUint::one());
    }
    let n = n as u64;
    let (p, q) = (d.p as u64, d.q as u64);
    let num = BigUint::from(n + p + q - 1) * rising_from(p, n - 2) * rising_from(q, n - 2);
    let den = factorial(n - 1) * factorial(n - 2);
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    Ok(quot)
}

/// `dim H_{p,q}` from the binomial forms:
/// `(n−1)(n+p+q−1)/(pq) · C(n+p−2, p−1) C(n+q−2, q−1)` for `p, q ≥ 1`,
/// `C(n+q−1, q)` for `p = 0` and its conjugate for `q = 0`.
pub fn multiplicity_binomial(n: usize, d: Bidegree) -> Result<BigUint> {
    check_dimension(n)?;
    let n = n as u64;
    let (p, q) = (d.p as u64, d.q as u64);
    Ok(match (p, q) {
        (0, 0) => BigUint::one(),
        (0, q) => binomial(n + q - 1, q),
        (p, 0) => binomial(n + p - 1, p),
        (p, q) => {
            let num = BigUint::from((n - 1) * (n + p + q - 1))
                * binomial(n + p - 2, p - 1)
                * binomial(n + q - 2, q - 1);
            num / BigUint::from(p * q)
        }
    })
}

/// Dimension of degree-`k` spherical harmonics on `S^{2n−1}` as a real
/// sphere in `R^{2n}`: `C(k+2n−2, k) + C(k+2n−3, k−1)`.
pub fn degree_harmonics_dimension(n: usize, k: u32) -> Result<BigUint> {
    check_dimension(n)?;
    let (n, k) = (n as u64, k as u64);
    let first = binomial(k + 2 * n - 2, k);
    let second = if k == 0 {
        BigUint::zero()
    } else {
        binomial(k + 2 * n - 3, k - 1)
    };
    Ok(first + second)
}

/// `k(k+2n−2)`
pub fn laplace_beltrami_eigenvalue(n: usize, k: i64) -> Result<BigRational> {
    check_dimension(n)?;
    if k < 0 {
        return Err(Error::InvalidParameter(format!(
            "degree k must be nonnegative, got {k}"
        )));
    }
    let k = k as u64;
    Ok(int(k * (k + 2 * n as u64 - 2)))
}

/// Smallest nonzero `□_b` eigenvalue among bidegrees of total degree `k`,
/// `2(k+n−2)`, attained at `(k−1, 1)`.
pub fn lambda_min(n: usize, k: i64) -> Result<BigRational> {
    check_dimension(n)?;
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    Ok(int(2 * (k as u64 + n as u64 - 2)))
}

/// Every bidegree with nonzero eigenvalue `≤ cutoff`, sorted by eigenvalue
/// then bidegree.
pub fn spectrum_entries(n: usize, cutoff: &BigRational) -> Result<Vec<SpectrumEntry>> {
    check_dimension(n)?;
    if cutoff <= &BigRational::zero() {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    // 2q(p+n−1) ≤ cutoff forces q ≤ cutoff/(2(n−1)) and p+n−1 ≤ cutoff/2.
    let half = (cutoff / int(2)).floor().to_integer();
    let half: u64 = half.try_into().unwrap_or(0);
    let mut out = Vec::new();
    for q in 1..=half {
        for p in 0.. {
            if q * (p + n as u64 - 1) > half {
                break;
            }
            let d = Bidegree::new(p as u32, q as u32);
            let eigenvalue = boxb_eigenvalue(n, d)?;
            if &eigenvalue > cutoff {
                break;
            }
            out.push(SpectrumEntry {
                bidegree: d,
                eigenvalue,
                multiplicity: multiplicity(n, d)?,
            });
        }
    }
    out.sort_by(|a, b| {
        a.eigenvalue
            .cmp(&b.eigenvalue)
            .then_with(|| a.bidegree.cmp(&b.bidegree))
    });
    Ok(out)
}

/// Distinct nonzero eigenvalues `≤ cutoff` with summed multiplicities.
pub fn aggregate_spectrum(n: usize, cutoff: &BigRational) -> Result<AggregatedSpectrum> {
    let mut grouped: BTreeMap<BigRational, AggregatedEntry> = BTreeMap::new();
    for e in spectrum_entries(n, cutoff)? {
        let slot = grouped
            .entry(e.eigenvalue.clone())
            .or_insert_with(|| AggregatedEntry {
                eigenvalue: e.eigenvalue.clone(),
                multiplicity: BigUint::zero(),
                contributors: Vec::new(),
            });
        slot.multiplicity += &e.multiplicity;
        slot.contributors.push(e.bidegree);
    }
    Ok(AggregatedSpectrum {
        n,
        entries: grouped.into_values().collect(),
    })
}

#[derive(Serialize)]
struct EntryJson {
    eigenvalue: String,
    eigenvalue_float: f64,
    multiplicity: String,
    contributors: Vec<Bidegree>,
}

#[derive(Serialize)]
struct SpectrumJson {
    n: usize,
    entries: Vec<EntryJson>,
}

impl AggregatedSpectrum {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = SpectrumJson {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    eigenvalue: crate::scalar::format_ratio(&e.eigenvalue),
                    eigenvalue_float: crate::scalar::ratio_to_f64(&e.eigenvalue),
                    multiplicity: e.multiplicity.to_string(),
                    contributors: e.contributors.clone(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("spectrum serializes")
    }

    /// CSV with header `eigenvalue_num,eigenvalue_den,multiplicity,contributors`;
    /// contributors are `p:q` pairs joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eigenvalue_num,eigenvalue_den,multiplicity,contributors\n");
        for e in &self.entries {
            let contributors: Vec<String> = e
                .contributors
                .iter()
                .map(|d| format!("{}:{}", d.p, d.q))
                .collect();
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.eigenvalue.numer(),
                e.eigenvalue.denom(),
                e.multiplicity,
                contributors.join(";")
            ));
        }
        out
    }
}

/// CSV with header `p,q,eigenvalue_num,eigenvalue_den,multiplicity`.
pub fn entries_to_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from("p,q,eigenvalue_num,eigenvalue_den,multiplicity\n");
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.bidegree.p,
            e.bidegree.q,
            e.eigenvalue.numer(),
            e.eigenvalue.denom(),
            e.multiplicity
        ));
    }
    out
}
