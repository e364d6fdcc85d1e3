//! Spectral calculus on sphere-restricted polynomials.
//!
//! Every polynomial agrees on `S^{2n−1}` with a finite sum of harmonic
//! bihomogeneous pieces `h_{p,q} ∈ H_{p,q}`. Operators diagonal in that
//! decomposition (`□_b`, `G`, `Δ_S`, `(I+Δ_S)^t`) act by scaling each piece.
//!
//! The decomposition of a bihomogeneous `f` of bidegree `(p,q)` is
//! `f = Σ_m |z|^{2m} h_m`. With `L = Σ_j ∂_j ∂̄_j` and `h` harmonic of total
//! degree `d`,
//!
//! ```text
//! L(|z|^{2j} h) = j (n + d + j − 1) |z|^{2(j−1)} h,
//! ```
//!
//! so the pieces of `Lf` are `m (n+p+q−m−1) h_m` for `m ≥ 1`. The pieces of
//! `f` are read off the (lower degree) decomposition of `Lf` and
//! `h_0 = f − Σ_{m≥1} |z|^{2m} h_m`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::json::{polynomial_to_json, PolynomialDoc};
use crate::polynomial::{sphere_inner_product, sphere_norm_squared, Bidegree, Polynomial};
use crate::scalar::{format_ratio, rational_power, SpectralValue};
use crate::spectrum;

/// A harmonic polynomial, bihomogeneous of `bidegree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicComponent {
    pub bidegree: Bidegree,
    pub part: Polynomial,
}

/// Harmonic pieces of a function on the sphere, sorted by bidegree, at most
/// one per bidegree and none zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalDecomposition {
    pub n: usize,
    pub components: Vec<HarmonicComponent>,
}

impl SphericalDecomposition {
    fn from_map(n: usize, map: BTreeMap<Bidegree, Polynomial>) -> Self {
        Self {
            n,
            components: map
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(bidegree, part)| HarmonicComponent { bidegree, part })
                .collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            components: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, d: Bidegree) -> Option<&Polynomial> {
        self.components
            .iter()
            .find(|c| c.bidegree == d)
            .map(|c| &c.part)
    }

    /// Sum of the pieces; equals the decomposed input on the sphere.
    pub fn to_polynomial(&self) -> Polynomial {
        self.components
            .iter()
            .fold(Polynomial::zero(self.n), |acc, c| &acc + &c.part)
    }

    /// Scales each piece by `factor(bidegree)`, dropping pieces mapped to zero.
    pub fn map_scaled(&self, factor: impl Fn(Bidegree) -> BigRational) -> Self {
        let components = self
            .components
            .iter()
            .filter_map(|c| {
                let f = factor(c.bidegree);
                (!f.is_zero()).then(|| HarmonicComponent {
                    bidegree: c.bidegree,
                    part: c.part.scale_rational(&f),
                })
            })
            .collect();
        Self {
            n: self.n,
            components,
        }
    }

    /// Exact `⟨h, h⟩` for each piece, in component order.
    pub fn squared_norms(&self) -> Vec<BigRational> {
        self.components
            .iter()
            .map(|c| sphere_norm_squared(&c.part))
            .collect()
    }

    /// `‖·‖²_{L²}`; pieces of different bidegree are orthogonal.
    pub fn norm_squared(&self) -> BigRational {
        self.squared_norms().into_iter().sum()
    }

    /// `Σ (1+μ(k))^s ⟨h,h⟩`, exact for integer `s`.
    pub fn sobolev_norm_squared(&self, s: &BigRational) -> SpectralValue {
        let norms = self.squared_norms();
        let factors = self.components.iter().map(|c| sobolev_factor(self.n, c.bidegree, s));
        if s.is_integer() {
            let total = factors
                .zip(&norms)
                .map(|(f, norm)| f.exact().expect("integer exponent is exact") * norm)
                .sum();
            SpectralValue::Exact(total)
        } else {
            let total = factors
                .zip(&norms)
                .map(|(f, norm)| f.to_f64() * crate::scalar::ratio_to_f64(norm))
                .sum();
            SpectralValue::Approx(total)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct ComponentJson {
            p: u32,
            q: u32,
            polynomial: PolynomialDoc,
            squared_norm: String,
        }
        let components: Vec<ComponentJson> = self
            .components
            .iter()
            .zip(self.squared_norms())
            .map(|(c, norm)| ComponentJson {
                p: c.bidegree.p,
                q: c.bidegree.q,
                polynomial: PolynomialDoc::from(&c.part),
                squared_norm: format_ratio(&norm),
            })
            .collect();
        serde_json::json!({ "n": self.n, "components": components })
    }
}

/// `1 + μ(k)` with `μ(k) = k(k+2n−2)`, `k = p + q`.
fn one_plus_mu(n: usize, d: Bidegree) -> BigRational {
    spectrum::laplace_beltrami_eigenvalue(n, d.total() as i64).expect("valid n and k")
        + BigRational::one()
}

fn sobolev_factor(n: usize, d: Bidegree, t: &BigRational) -> SpectralValue {
    rational_power(&one_plus_mu(n, d), t)
}

/// Pieces `h_0, h_1, …` of a bihomogeneous `f` of bidegree `d`, with `h_m` of
/// bidegree `(p−m, q−m)`.
fn fischer_pieces(f: &Polynomial, d: Bidegree, powers: &[Polynomial]) -> Vec<Polynomial> {
    let n = f.n();
    if d.p == 0 || d.q == 0 || f.is_zero() {
        return vec![f.clone()];
    }
    let lower = fischer_pieces(&f.half_laplacian(), Bidegree::new(d.p - 1, d.q - 1), powers);
    let total = (d.p + d.q) as i64;
    let mut pieces = vec![Polynomial::zero(n)];
    let mut h0 = f.clone();
    for (idx, piece) in lower.iter().enumerate() {
        let m = idx as i64 + 1;
        let coeff = BigRational::new(
            BigInt::one(),
            BigInt::from(m * (n as i64 + total - m - 1)),
        );
        let h = piece.scale_rational(&coeff);
        if !h.is_zero() {
            h0 = &h0 - &(&powers[m as usize] * &h);
        }
        pieces.push(h);
    }
    assert!(
        h0.is_harmonic(),
        "Fischer recursion produced a non-harmonic leading piece for bidegree {d}: {h0}"
    );
    pieces[0] = h0;
    pieces
}

/// Harmonic decomposition of `f` restricted to the sphere.
pub fn decompose(f: &Polynomial) -> SphericalDecomposition {
    let n = f.n();
    let split = f.bidegree_split();
    let max_m = split.keys().map(|d| d.p.min(d.q)).max().unwrap_or(0);
    let mut powers = vec![Polynomial::one(n)];
    let r2 = Polynomial::norm_squared(n);
    for m in 1..=max_m as usize {
        let next = &powers[m - 1] * &r2;
        powers.push(next);
    }
    let per_piece: Vec<(Bidegree, Vec<Polynomial>)> = split
        .par_iter()
        .map(|(&d, piece)| (d, fischer_pieces(piece, d, &powers)))
        .collect();
    let mut merged: BTreeMap<Bidegree, Polynomial> = BTreeMap::new();
    for (d, pieces) in per_piece {
        for (m, h) in pieces.into_iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let target = Bidegree::new(d.p - m as u32, d.q - m as u32);
            let slot = merged.entry(target).or_insert_with(|| Polynomial::zero(n));
            *slot = &*slot + &h;
        }
    }
    SphericalDecomposition::from_map(n, merged)
}

/// `□_b f`: each piece scaled by `2q(p+n−1)`; Hardy pieces vanish.
pub fn apply_boxb(f: &Polynomial) -> SphericalDecomposition {
    let n = f.n();
    decompose(f).map_scaled(|d| spectrum::boxb_eigenvalue(n, d).expect("valid n"))
}

/// The canonical solution `Gf`: pieces with `q ≥ 1` scaled by
/// `1/(2q(p+n−1))`, the `q = 0` part of `f` annihilated.
pub fn apply_green(f: &Polynomial) -> SphericalDecomposition {
    let n = f.n();
    green_of(&decompose(f), n)
}

fn green_of(dec: &SphericalDecomposition, n: usize) -> SphericalDecomposition {
    dec.map_scaled(|d| {
        spectrum::green_eigenvalue(n, d)
            .expect("valid n")
            .unwrap_or_else(BigRational::zero)
    })
}

/// `Δ_S f` for the positive Laplace–Beltrami operator.
pub fn apply_laplace_beltrami(f: &Polynomial) -> SphericalDecomposition {
    let n = f.n();
    decompose(f).map_scaled(|d| {
        spectrum::laplace_beltrami_eigenvalue(n, d.total() as i64).expect("valid n")
    })
}

/// Projection onto `ker □_b`: the `q = 0` pieces, constants included.
pub fn hardy_projection(f: &Polynomial) -> SphericalDecomposition {
    let dec = decompose(f);
    SphericalDecomposition {
        n: dec.n,
        components: dec
            .components
            .into_iter()
            .filter(|c| c.bidegree.q == 0)
            .collect(),
    }
}

/// `(I + Δ_S)^t f`.
#[derive(Clone, Debug, PartialEq)]
pub enum SobolevImage {
    /// Integer `t`: pieces already scaled exactly.
    Exact(SphericalDecomposition),
    /// Fractional `t`: unscaled exact pieces with their float factors.
    Approx(Vec<(HarmonicComponent, f64)>),
}

impl SobolevImage {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SobolevImage::Exact(dec) => {
                let mut v = dec.to_json();
                v["exact"] = serde_json::Value::Bool(true);
                v
            }
            SobolevImage::Approx(parts) => {
                let components: Vec<serde_json::Value> = parts
                    .iter()
                    .map(|(c, f)| {
                        serde_json::json!({
                            "p": c.bidegree.p,
                            "q": c.bidegree.q,
                            "polynomial": polynomial_to_json(&c.part),
                            "factor_float": f,
                        })
                    })
                    .collect();
                let n = parts.first().map(|(c, _)| c.part.n());
                serde_json::json!({ "n": n, "exact": false, "components": components })
            }
        }
    }
}

pub fn apply_sobolev_power(f: &Polynomial, t: &BigRational) -> SobolevImage {
    let n = f.n();
    let dec = decompose(f);
    if t.is_integer() {
        SobolevImage::Exact(dec.map_scaled(|d| {
            sobolev_factor(n, d, t)
                .exact()
                .cloned()
                .expect("integer exponent is exact")
        }))
    } else {
        SobolevImage::Approx(
            dec.components
                .into_iter()
                .map(|c| {
                    let factor = sobolev_factor(n, c.bidegree, t).to_f64();
                    (c, factor)
                })
                .collect(),
        )
    }
}

/// `‖f‖_s² = Σ (1+μ(k))^s ⟨h_{p,q}, h_{p,q}⟩`.
pub fn sobolev_norm_squared(f: &Polynomial, s: &BigRational) -> SpectralValue {
    decompose(f).sobolev_norm_squared(s)
}

/// `‖□_b(Gf) − (f − P_H f)‖²_{L²}`, which is zero for every polynomial.
pub fn residual_check(f: &Polynomial) -> BigRational {
    let n = f.n();
    let dec = decompose(f);
    let round_trip = green_of(&dec, n)
        .map_scaled(|d| spectrum::boxb_eigenvalue(n, d).expect("valid n"))
        .to_polynomial();
    let hardy = dec
        .components
        .iter()
        .filter(|c| c.bidegree.q == 0)
        .fold(Polynomial::zero(n), |acc, c| &acc + &c.part);
    let diff = &(&round_trip - f) + &hardy;
    sphere_inner_product(&diff, &diff)
        .expect("same dimension")
        .re
}

/// Largest `|⟨g, h⟩|²` over Hardy basis elements `h`; used to confirm that
/// `Gf` carries no `q = 0` content.
pub fn max_overlap_with(g: &Polynomial, basis: &[Polynomial]) -> BigRational {
    basis
        .iter()
        .map(|h| {
            sphere_inner_product(g, h)
                .expect("same dimension")
                .norm_sqr()
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use crate::harmonic::harmonic_basis;
    use crate::random::random_polynomial;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn zzb(n: usize, i: usize, j: usize) -> Polynomial {
        &Polynomial::z(n, i) * &Polynomial::zbar(n, j)
    }

    fn b(p: u32, q: u32) -> Bidegree {
        Bidegree::new(p, q)
    }

    fn scalar(v: i64) -> ExactScalar {
        ExactScalar::from_integer(v)
    }

    #[test]
    fn decompose_z1_zbar1() {
        let f = zzb(2, 0, 0);
        let dec = decompose(&f);
        assert_eq!(dec.components.len(), 2);
        assert_eq!(dec.component(b(0, 0)), Some(&Polynomial::constant(2, ExactScalar::from_ratio(1, 2))));
        let expected = (&zzb(2, 0, 0) - &zzb(2, 1, 1)).scale_rational(&q(1, 2));
        assert_eq!(dec.component(b(1, 1)), Some(&expected));
    }

    #[test]
    fn decompose_trivial_cases() {
        let zb = Polynomial::zbar(2, 0);
        let dec = decompose(&zb);
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.component(b(0, 1)), Some(&zb));

        let dec = decompose(&Polynomial::norm_squared(2));
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.component(b(0, 0)), Some(&Polynomial::one(2)));

        assert!(decompose(&Polynomial::zero(3)).is_zero());
    }

    #[test]
    fn decomposition_agrees_on_sphere() {
        for seed in 0..20 {
            let n = 2 + (seed % 3) as usize;
            let f = random_polynomial(n, 5, 6, seed);
            let dec = decompose(&f);
            let diff = &dec.to_polynomial() - &f;
            assert!(sphere_norm_squared(&diff).is_zero(), "seed {seed}");
            for c in &dec.components {
                assert!(c.part.is_harmonic());
                assert_eq!(c.part.bidegree(), Some(c.bidegree));
            }
        }
    }

    #[test]
    fn decomposition_of_high_power_of_norm() {
        // |z|^{2m} z̄_1 is z̄_1 on the sphere
        let f = &Polynomial::norm_squared_power(3, 4) * &Polynomial::zbar(3, 0);
        let dec = decompose(&f);
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.component(b(0, 1)), Some(&Polynomial::zbar(3, 0)));
    }

    #[test]
    fn boxb_examples() {
        let zb = Polynomial::zbar(2, 0);
        assert_eq!(apply_boxb(&zb).to_polynomial(), zb.scale(&scalar(2)));
        assert!(apply_boxb(&Polynomial::z(2, 0)).is_zero());
        assert!(apply_boxb(&Polynomial::constant(2, scalar(5))).is_zero());
    }

    #[test]
    fn green_examples() {
        let zb = Polynomial::zbar(2, 0);
        assert_eq!(apply_green(&zb).to_polynomial(), zb.scale_rational(&q(1, 2)));
        let z1_cubed = &(&Polynomial::z(2, 0) * &Polynomial::z(2, 0)) * &Polynomial::z(2, 0);
        assert!(apply_green(&z1_cubed).is_zero());
        let g = apply_green(&zzb(2, 0, 0));
        let expected = (&zzb(2, 0, 0) - &zzb(2, 1, 1)).scale_rational(&q(1, 8));
        assert_eq!(g.components.len(), 1);
        assert_eq!(g.component(b(1, 1)), Some(&expected));
    }

    #[test]
    fn hardy_examples() {
        let f = &Polynomial::z(2, 0) + &Polynomial::zbar(2, 0);
        assert_eq!(hardy_projection(&f).to_polynomial(), Polynomial::z(2, 0));
        assert_eq!(
            hardy_projection(&zzb(2, 0, 0)).to_polynomial(),
            Polynomial::constant(2, ExactScalar::from_ratio(1, 2))
        );
        assert!(hardy_projection(&Polynomial::zbar(2, 1)).is_zero());
    }

    #[test]
    fn sobolev_power_examples() {
        let zb = Polynomial::zbar(2, 0);
        let f = random_polynomial(3, 4, 5, 7);
        assert_eq!(
            apply_sobolev_power(&f, &q(0, 1)),
            SobolevImage::Exact(decompose(&f))
        );
        match apply_sobolev_power(&zb, &q(1, 1)) {
            SobolevImage::Exact(dec) => assert_eq!(dec.to_polynomial(), zb.scale(&scalar(4))),
            other => panic!("expected exact image, got {other:?}"),
        }
        match apply_sobolev_power(&zb, &q(1, 2)) {
            SobolevImage::Approx(parts) => {
                assert_eq!(parts.len(), 1);
                assert_eq!(parts[0].1, 2.0);
            }
            other => panic!("expected float image, got {other:?}"),
        }
    }

    #[test]
    fn sobolev_norm_examples() {
        let one = Polynomial::one(2);
        for s in [q(0, 1), q(3, 1), q(-2, 1)] {
            assert_eq!(sobolev_norm_squared(&one, &s), SpectralValue::Exact(q(1, 1)));
        }
        assert_eq!(sobolev_norm_squared(&one, &q(1, 3)), SpectralValue::Approx(1.0));
        let zb = Polynomial::zbar(2, 0);
        assert_eq!(sobolev_norm_squared(&zb, &q(0, 1)), SpectralValue::Exact(q(1, 2)));
        assert_eq!(sobolev_norm_squared(&zb, &q(1, 1)), SpectralValue::Exact(q(2, 1)));
    }

    #[test]
    fn sobolev_norm_is_monotone_and_anchored() {
        for seed in 0..10 {
            let f = random_polynomial(2, 4, 5, 100 + seed);
            assert_eq!(
                sobolev_norm_squared(&f, &q(0, 1)),
                SpectralValue::Exact(sphere_norm_squared(&f))
            );
            let mut last = BigRational::zero();
            for s in 0..4 {
                let v = sobolev_norm_squared(&f, &q(s, 1)).exact().unwrap().clone();
                assert!(v >= last);
                last = v;
            }
        }
    }

    #[test]
    fn residual_examples() {
        assert!(residual_check(&Polynomial::zbar(2, 0)).is_zero());
        assert!(residual_check(&zzb(2, 0, 0)).is_zero());
        for seed in 0..10 {
            assert!(residual_check(&random_polynomial(3, 5, 6, seed)).is_zero());
        }
    }

    #[test]
    fn green_output_has_no_hardy_content() {
        let n = 2;
        let hardy: Vec<Polynomial> = (0..=3)
            .flat_map(|p| harmonic_basis(n, b(p, 0)).unwrap().elements)
            .collect();
        for seed in 0..10 {
            let f = random_polynomial(n, 3, 6, 300 + seed);
            let g = apply_green(&f).to_polynomial();
            assert!(max_overlap_with(&g, &hardy).is_zero());
        }
    }

    #[test]
    fn laplace_beltrami_on_degree_one() {
        let zb = Polynomial::zbar(4, 2);
        // μ(1) = 2n − 1 = 7
        assert_eq!(apply_laplace_beltrami(&zb).to_polynomial(), zb.scale(&scalar(7)));
    }
}
