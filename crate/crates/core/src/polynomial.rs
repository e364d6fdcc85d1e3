//! Sparse polynomials in `z_1..z_n, z̄_1..z̄_n` over Gaussian rationals.
//!
//! A polynomial is a canonical map from monomials `z^α z̄^β` to nonzero
//! coefficients. Every operation prunes zeros, so two polynomials are equal
//! exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Exponent vector of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiindex(Vec<u32>);

impl Multiindex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π α_j!`
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * factorial(a as u64))
    }

    pub fn plus(&self, other: &Multiindex) -> Multiindex {
        Multiindex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn with_delta(&self, j: usize, delta: i32) -> Option<Multiindex> {
        let mut e = self.0.clone();
        let v = e[j] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        e[j] = v as u32;
        Some(Multiindex(e))
    }

    /// All multiindices of length `n` with `|α| = degree`, in lexicographically
    /// decreasing order (`z_1^d` first).
    pub fn all_of_degree(n: usize, degree: u32) -> Vec<Multiindex> {
        fn rec(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Multiindex>) {
            if prefix.len() + 1 == n {
                prefix.push(remaining);
                out.push(Multiindex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=remaining).rev() {
                prefix.push(a);
                rec(n, remaining - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// The monomial `z^α z̄^β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Multiindex,
    pub beta: Multiindex,
}

impl Monomial {
    pub fn new(alpha: Multiindex, beta: Multiindex) -> Self {
        Self { alpha, beta }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.alpha.degree(), self.beta.degree())
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.alpha.plus(&other.alpha), self.beta.plus(&other.beta))
    }
}

/// Graded lexicographic order: total degree first, then `α`, then `β`,
/// each compared lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d1 = self.alpha.degree() + self.beta.degree();
        let d2 = other.alpha.degree() + other.beta.degree();
        d1.cmp(&d2)
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: u32,
    pub q: u32,
}

impl Bidegree {
    pub fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }

    /// Total degree `k = p + q`.
    pub fn total(&self) -> u32 {
        self.p + self.q
    }

    /// Bidegrees with `p + q <= max_degree`, ordered by total degree then `p`
    /// descending.
    pub fn up_to(max_degree: u32) -> Vec<Bidegree> {
        (0..=max_degree)
            .flat_map(|k| (0..=k).rev().map(move |p| Bidegree::new(p, k - p)))
            .collect()
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: ExactScalar) -> Self {
        Self::monomial(n, Multiindex::zeros(n), Multiindex::zeros(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, ExactScalar::one())
    }

    /// The coordinate `z_j` (0-based `j`).
    pub fn z(n: usize, j: usize) -> Self {
        Self::monomial(n, Multiindex::unit(n, j), Multiindex::zeros(n), ExactScalar::one())
    }

    /// The conjugate coordinate `z̄_j` (0-based `j`).
    pub fn zbar(n: usize, j: usize) -> Self {
        Self::monomial(n, Multiindex::zeros(n), Multiindex::unit(n, j), ExactScalar::one())
    }

    pub fn monomial(n: usize, alpha: Multiindex, beta: Multiindex, c: ExactScalar) -> Self {
        assert_eq!(alpha.len(), n, "multiindex length must equal n");
        assert_eq!(beta.len(), n, "multiindex length must equal n");
        let mut p = Self::zero(n);
        p.add_term(Monomial::new(alpha, beta), c);
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactScalar)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            for len in [m.alpha.len(), m.beta.len()] {
                if len != n {
                    return Err(Error::DimensionMismatch { left: n, right: len });
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// `|z|^2 = Σ z_j z̄_j`
    pub fn norm_squared(n: usize) -> Self {
        let mut p = Self::zero(n);
        for j in 0..n {
            p.add_term(
                Monomial::new(Multiindex::unit(n, j), Multiindex::unit(n, j)),
                ExactScalar::one(),
            );
        }
        p
    }

    /// `|z|^{2m}`
    pub fn norm_squared_power(n: usize, m: u32) -> Self {
        let base = Self::norm_squared(n);
        (0..m).fold(Self::one(n), |acc, _| &acc * &base)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_n(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_n(other)?;
        let mut out = Polynomial::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Polynomial {
        self.scale(&ExactScalar::real(c.clone()))
    }

    /// `Σ_j ∂²f/∂z_j∂z̄_j`, the Laplacian without the factor 4.
    pub(crate) fn half_laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            for j in 0..self.n {
                let (a, b) = (m.alpha.0[j], m.beta.0[j]);
                if a == 0 || b == 0 {
                    continue;
                }
                let alpha = m.alpha.with_delta(j, -1).unwrap();
                let beta = m.beta.with_delta(j, -1).unwrap();
                let factor = ExactScalar::from_integer(a as i64 * b as i64);
                out.add_term(Monomial::new(alpha, beta), c * &factor);
            }
        }
        out
    }

    /// `Δf = 4 Σ_j ∂²f/∂z_j∂z̄_j`
    pub fn ambient_laplacian(&self) -> Polynomial {
        self.half_laplacian().scale(&ExactScalar::from_integer(4))
    }

    pub fn is_harmonic(&self) -> bool {
        self.half_laplacian().is_zero()
    }

    /// Holomorphic Euler operator `Σ z_j ∂/∂z_j`; multiplies each term by `|α|`.
    pub fn holomorphic_euler(&self) -> Polynomial {
        self.map_coefficients(|m, c| c * &ExactScalar::from_integer(m.alpha.degree() as i64))
    }

    /// Antiholomorphic Euler operator `Σ z̄_j ∂/∂z̄_j`; multiplies each term by `|β|`.
    pub fn antiholomorphic_euler(&self) -> Polynomial {
        self.map_coefficients(|m, c| c * &ExactScalar::from_integer(m.beta.degree() as i64))
    }

    fn map_coefficients(&self, f: impl Fn(&Monomial, &ExactScalar) -> ExactScalar) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    /// Partitions the terms by bidegree `(|α|, |β|)`.
    pub fn bidegree_split(&self) -> BTreeMap<Bidegree, Polynomial> {
        let mut parts: BTreeMap<Bidegree, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.bidegree())
                .or_insert_with(|| Polynomial::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }

    /// The common bidegree of all terms, if the polynomial is nonzero and
    /// bihomogeneous.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.alpha.degree() + m.beta.degree())
            .max()
    }

    /// Complex conjugate: swaps `z` and `z̄` and conjugates coefficients.
    pub fn conj(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.beta.clone(), m.alpha.clone()), c.conj()))
                .collect(),
        }
    }

    /// Numeric evaluation at a point `z` given as `(re, im)` pairs.
    pub fn eval_f64(&self, z: &[(f64, f64)]) -> (f64, f64) {
        assert_eq!(z.len(), self.n, "point has wrong dimension");
        let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let mut acc = (0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_f64_pair();
            for ((&zj, &a), &b) in z.iter().zip(&m.alpha.0).zip(&m.beta.0) {
                for _ in 0..a {
                    v = cmul(v, zj);
                }
                for _ in 0..b {
                    v = cmul(v, (zj.0, -zj.1));
                }
            }
            acc.0 += v.0;
            acc.1 += v.1;
        }
        acc
    }
}

/// `∫_{S^{2n−1}} z^α z̄^β dσ` for the normalized surface measure.
///
/// Zero unless `α = β`, in which case it is `(n−1)! α! / (n−1+|α|)!`.
pub fn monomial_sphere_integral(n: usize, alpha: &Multiindex, beta: &Multiindex) -> BigRational {
    if alpha != beta {
        return BigRational::zero();
    }
    let num = factorial(n as u64 - 1) * alpha.factorial();
    let den = factorial(n as u64 - 1 + alpha.degree() as u64);
    BigRational::new(num, den)
}

/// `⟨f, g⟩ = ∫_{S^{2n−1}} f ḡ dσ` with total mass 1.
pub fn sphere_inner_product(f: &Polynomial, g: &Polynomial) -> Result<ExactScalar> {
    f.check_same_n(g)?;
    let mut acc = ExactScalar::zero();
    for (mf, cf) in &f.terms {
        for (mg, cg) in &g.terms {
            // z^a z̄^b · conj(z^c z̄^d) = z^{a+d} z̄^{b+c}
            let hol = mf.alpha.plus(&mg.beta);
            let anti = mf.beta.plus(&mg.alpha);
            if hol != anti {
                continue;
            }
            let w = monomial_sphere_integral(f.n, &hol, &anti);
            acc += &(cf * &cg.conj()).scale(&w);
        }
    }
    Ok(acc)
}

/// `⟨f, f⟩` as a nonnegative rational.
pub fn sphere_norm_squared(f: &Polynomial) -> BigRational {
    sphere_inner_product(f, f)
        .expect("same polynomial has a single dimension")
        .re
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&ExactScalar::from_integer(-1))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (j, &a) in m.alpha.0.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*z{}", j + 1)?,
                    _ => write!(f, "*z{}^{}", j + 1, a)?,
                }
            }
            for (j, &b) in m.beta.0.iter().enumerate() {
                match b {
                    0 => {}
                    1 => write!(f, "*zb{}", j + 1)?,
                    _ => write!(f, "*zb{}^{}", j + 1, b)?,
                }
            }
        }
        Ok(())
    }
}
