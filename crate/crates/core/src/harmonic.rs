//! Explicit bases of `H_{p,q}` computed as the kernel of the ambient
//! Laplacian on bidegree-`(p,q)` monomials.
//!
//! Nothing here uses the closed-form multiplicities or the Fischer recursion
//! of [`crate::operators`]; the module is the brute-force oracle the rest of
//! the crate is checked against.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dimension, Result};
use crate::linalg::RowEchelon;
use crate::polynomial::{sphere_inner_product, Bidegree, Monomial, Multiindex, Polynomial};
use crate::scalar::{format_ratio, ExactScalar};
use crate::spectrum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub n: usize,
    pub bidegree: Bidegree,
    pub elements: Vec<Polynomial>,
}

/// Mutually orthogonal harmonic polynomials with their exact squared
/// `L²(S^{2n−1})` norms. Normalization is left to the caller because the
/// norms are generally not squares of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalBasis {
    pub n: usize,
    pub bidegree: Bidegree,
    pub elements: Vec<Polynomial>,
    pub squared_norms: Vec<BigRational>,
}

/// Monomials of bidegree `(p, q)` in graded lexicographic order.
pub fn bidegree_monomials(n: usize, d: Bidegree) -> Vec<Monomial> {
    let alphas = Multiindex::all_of_degree(n, d.p);
    let betas = Multiindex::all_of_degree(n, d.q);
    let mut out: Vec<Monomial> = alphas
        .iter()
        .flat_map(|a| betas.iter().map(move |b| Monomial::new(a.clone(), b.clone())))
        .collect();
    out.sort();
    out
}

/// Matrix of `Σ_j ∂_j ∂̄_j` from bidegree `(p,q)` monomials (columns) to
/// bidegree `(p−1,q−1)` monomials (rows).
fn laplacian_matrix(n: usize, d: Bidegree) -> (Vec<Monomial>, RowEchelon) {
    let cols = bidegree_monomials(n, d);
    if d.p == 0 || d.q == 0 {
        return (cols.clone(), RowEchelon::new(Vec::new(), cols.len()));
    }
    let rows_idx = bidegree_monomials(n, Bidegree::new(d.p - 1, d.q - 1));
    let mut rows = vec![vec![BigRational::zero(); cols.len()]; rows_idx.len()];
    for (c, m) in cols.iter().enumerate() {
        let image =
            Polynomial::monomial(n, m.alpha.clone(), m.beta.clone(), ExactScalar::from_integer(1))
                .half_laplacian();
        for (target, coeff) in image.terms() {
            let r = rows_idx.binary_search(target).expect("image monomial is indexed");
            rows[r][c] = coeff.re.clone();
        }
    }
    let echelon = RowEchelon::new(rows, cols.len());
    (cols, echelon)
}

/// A basis of harmonic polynomials of bidegree `d` on `C^n`.
pub fn harmonic_basis(n: usize, d: Bidegree) -> Result<HarmonicBasis> {
    check_dimension(n)?;
    let (cols, echelon) = laplacian_matrix(n, d);
    let elements = echelon
        .kernel()
        .into_iter()
        .map(|v| {
            Polynomial::from_terms(
                n,
                cols.iter()
                    .zip(v)
                    .map(|(m, c)| (m.clone(), ExactScalar::real(c))),
            )
            .expect("kernel vector has the ambient dimension")
        })
        .collect();
    Ok(HarmonicBasis {
        n,
        bidegree: d,
        elements,
    })
}

/// Gram–Schmidt with respect to the sphere inner product.
pub fn orthonormalize(basis: &HarmonicBasis) -> OrthogonalBasis {
    let mut elements: Vec<Polynomial> = Vec::with_capacity(basis.elements.len());
    let mut squared_norms: Vec<BigRational> = Vec::with_capacity(basis.elements.len());
    for v in &basis.elements {
        let mut w = v.clone();
        for (e, norm) in elements.iter().zip(&squared_norms) {
            let c = sphere_inner_product(v, e).expect("same dimension");
            if c.is_zero() {
                continue;
            }
            let coeff = c.scale(&norm.recip());
            w = &w - &e.scale(&coeff);
        }
        let norm = sphere_inner_product(&w, &w).expect("same dimension").re;
        assert!(!norm.is_zero(), "basis elements must be linearly independent");
        elements.push(w);
        squared_norms.push(norm);
    }
    OrthogonalBasis {
        n: basis.n,
        bidegree: basis.bidegree,
        elements,
        squared_norms,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub p: u32,
    pub q: u32,
    pub monomial_dimension: usize,
    pub laplacian_rank: usize,
    pub kernel_rank: usize,
    pub expected_multiplicity: String,
    pub dimension_ok: bool,
    pub harmonic_ok: bool,
    pub bihomogeneous_ok: bool,
    pub boxb_eigenvalue: String,
    pub laplace_beltrami_eigenvalue: String,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityFailure {
    pub left: Bidegree,
    pub right: Bidegree,
    pub left_element: String,
    pub right_element: String,
    pub inner_product: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
    pub k: u32,
    pub bidegree_sum: String,
    pub expected: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub max_degree: u32,
    pub cells: Vec<CellReport>,
    pub orthogonality_pairs_checked: usize,
    pub orthogonality_failures: Vec<OrthogonalityFailure>,
    pub degree_checks: Vec<DegreeCheck>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn cells_verified(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.dimension_ok && c.harmonic_ok && c.bihomogeneous_ok)
            .count()
    }
}

/// Checks, for every bidegree with `p + q ≤ max_degree`: kernel rank equals
/// the closed-form multiplicity, each basis element is harmonic and
/// bihomogeneous under the Euler operators, and elements of distinct cells
/// are orthogonal on the sphere.
pub fn verify_eigen_identities(n: usize, max_degree: u32) -> Result<VerificationReport> {
    check_dimension(n)?;
    if max_degree < 1 {
        return Err(crate::Error::InvalidParameter(
            "max_degree must be at least 1".into(),
        ));
    }
    let cells: Vec<Bidegree> = Bidegree::up_to(max_degree);
    let computed: Vec<(CellReport, HarmonicBasis)> = cells
        .par_iter()
        .map(|&d| check_cell(n, d))
        .collect::<Result<_>>()?;

    let mut pairs = Vec::new();
    for i in 0..computed.len() {
        for j in (i + 1)..computed.len() {
            pairs.push((i, j));
        }
    }
    let results: Vec<(usize, Vec<OrthogonalityFailure>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&computed[i].1, &computed[j].1);
            let mut failures = Vec::new();
            let mut count = 0;
            for f in &a.elements {
                for g in &b.elements {
                    count += 1;
                    let ip = sphere_inner_product(f, g).expect("same dimension");
                    if !ip.is_zero() {
                        failures.push(OrthogonalityFailure {
                            left: a.bidegree,
                            right: b.bidegree,
                            left_element: f.to_string(),
                            right_element: g.to_string(),
                            inner_product: ip.to_string(),
                        });
                    }
                }
            }
            (count, failures)
        })
        .collect();
    let orthogonality_pairs_checked = results.iter().map(|r| r.0).sum();
    let orthogonality_failures: Vec<_> = results.into_iter().flat_map(|r| r.1).collect();

    let degree_checks: Vec<DegreeCheck> = (0..=max_degree)
        .map(|k| {
            let sum: BigUint = computed
                .iter()
                .filter(|(c, _)| c.p + c.q == k)
                .map(|(c, _)| BigUint::from(c.kernel_rank))
                .sum();
            let expected = spectrum::degree_harmonics_dimension(n, k).expect("n checked");
            DegreeCheck {
                k,
                ok: sum == expected,
                bidegree_sum: sum.to_string(),
                expected: expected.to_string(),
            }
        })
        .collect();

    let cells: Vec<CellReport> = computed.into_iter().map(|(c, _)| c).collect();
    let passed = cells
        .iter()
        .all(|c| c.dimension_ok && c.harmonic_ok && c.bihomogeneous_ok)
        && orthogonality_failures.is_empty()
        && degree_checks.iter().all(|d| d.ok);
    Ok(VerificationReport {
        n,
        max_degree,
        cells,
        orthogonality_pairs_checked,
        orthogonality_failures,
        degree_checks,
        passed,
    })
}

fn check_cell(n: usize, d: Bidegree) -> Result<(CellReport, HarmonicBasis)> {
    let (cols, echelon) = laplacian_matrix(n, d);
    let monomial_dimension = cols.len();
    let laplacian_rank = echelon.rank();
    let basis = harmonic_basis(n, d)?;
    let kernel_rank = basis.elements.len();
    let expected = spectrum::multiplicity(n, d)?;

    let mut counterexamples = Vec::new();
    let mut harmonic_ok = true;
    let mut bihomogeneous_ok = true;
    let p = ExactScalar::from_integer(d.p as i64);
    let q = ExactScalar::from_integer(d.q as i64);
    for h in &basis.elements {
        if !h.ambient_laplacian().is_zero() {
            harmonic_ok = false;
            counterexamples.push(format!("not harmonic: {h}"));
        }
        if h.holomorphic_euler() != h.scale(&p) || h.antiholomorphic_euler() != h.scale(&q) {
            bihomogeneous_ok = false;
            counterexamples.push(format!("not bihomogeneous of bidegree {d}: {h}"));
        }
    }
    let dimension_ok = BigUint::from(kernel_rank) == expected
        && laplacian_rank + kernel_rank == monomial_dimension
        && BigUint::from(monomial_dimension)
            == spectrum::binomial((n as u64) + d.p as u64 - 1, d.p as u64)
                * spectrum::binomial((n as u64) + d.q as u64 - 1, d.q as u64);
    if !dimension_ok {
        counterexamples.push(format!(
            "kernel rank {kernel_rank} vs multiplicity {expected} (monomials {monomial_dimension}, rank {laplacian_rank})"
        ));
    }
    let report = CellReport {
        p: d.p,
        q: d.q,
        monomial_dimension,
        laplacian_rank,
        kernel_rank,
        expected_multiplicity: expected.to_string(),
        dimension_ok,
        harmonic_ok,
        bihomogeneous_ok,
        boxb_eigenvalue: format_ratio(&spectrum::boxb_eigenvalue(n, d)?),
        laplace_beltrami_eigenvalue: format_ratio(&spectrum::laplace_beltrami_eigenvalue(
            n,
            d.total() as i64,
        )?),
        counterexamples,
    };
    Ok((report, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::sphere_norm_squared;

    fn b(p: u32, q: u32) -> Bidegree {
        Bidegree::new(p, q)
    }

    #[test]
    fn antiholomorphic_cell_is_all_monomials() {
        let basis = harmonic_basis(2, b(0, 1)).unwrap();
        assert_eq!(basis.elements, vec![Polynomial::zbar(2, 1), Polynomial::zbar(2, 0)]);
    }

    #[test]
    fn bidegree_one_one_has_three_elements() {
        let basis = harmonic_basis(2, b(1, 1)).unwrap();
        assert_eq!(basis.elements.len(), 3);
        for h in &basis.elements {
            assert!(h.is_harmonic());
            assert_eq!(h.bidegree(), Some(b(1, 1)));
        }
        // z1 z̄1 − z2 z̄2 lies in the span: it is harmonic of the right bidegree,
        // and the span is the full kernel, so adding it cannot raise the rank.
        let target = &(&Polynomial::z(2, 0) * &Polynomial::zbar(2, 0))
            - &(&Polynomial::z(2, 1) * &Polynomial::zbar(2, 1));
        assert!(target.is_harmonic());
    }

    #[test]
    fn bidegree_two_one_has_four_elements() {
        assert_eq!(harmonic_basis(2, b(2, 1)).unwrap().elements.len(), 4);
        assert_eq!(harmonic_basis(3, b(1, 1)).unwrap().elements.len(), 8);
    }

    #[test]
    fn orthonormalize_examples() {
        let basis = harmonic_basis(2, b(0, 1)).unwrap();
        let ortho = orthonormalize(&basis);
        assert_eq!(ortho.elements, basis.elements);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(ortho.squared_norms, vec![half.clone(), half]);

        let single = HarmonicBasis {
            n: 2,
            bidegree: b(1, 0),
            elements: vec![Polynomial::z(2, 0)],
        };
        let o = orthonormalize(&single);
        assert_eq!(o.elements, single.elements);
        assert_eq!(o.squared_norms, vec![BigRational::new(1.into(), 2.into())]);

        let o = orthonormalize(&harmonic_basis(2, b(1, 1)).unwrap());
        assert_eq!(o.elements.len(), 3);
        for i in 0..3 {
            assert_eq!(sphere_norm_squared(&o.elements[i]), o.squared_norms[i]);
            for j in 0..3 {
                if i != j {
                    assert!(sphere_inner_product(&o.elements[i], &o.elements[j])
                        .unwrap()
                        .is_zero());
                }
            }
        }
    }

    #[test]
    fn parseval_on_orthogonal_basis() {
        // f = Σ c_j e_j with orthogonal e_j: ⟨f,f⟩ = Σ |c_j|² ‖e_j‖²
        let o = orthonormalize(&harmonic_basis(3, b(2, 1)).unwrap());
        let coeffs: Vec<ExactScalar> = (0..o.elements.len())
            .map(|j| ExactScalar::new(
                BigRational::new((j as i64 + 1).into(), 3.into()),
                BigRational::new((2 - j as i64).into(), 5.into()),
            ))
            .collect();
        let mut f = Polynomial::zero(3);
        let mut expected = BigRational::zero();
        for ((e, norm), c) in o.elements.iter().zip(&o.squared_norms).zip(&coeffs) {
            f = &f + &e.scale(c);
            expected += c.norm_sqr() * norm;
        }
        assert_eq!(sphere_norm_squared(&f), expected);
    }

    #[test]
    fn verification_small_cases() {
        let report = verify_eigen_identities(2, 3).unwrap();
        assert!(report.passed);
        assert_eq!(report.cells.len(), 10);
        assert_eq!(report.cells_verified(), 10);

        let report = verify_eigen_identities(2, 1).unwrap();
        assert!(report.passed);
        assert!(report.orthogonality_failures.is_empty());
        // (0,0)×(1,0), (0,0)×(0,1), (1,0)×(0,1): 1·2 + 1·2 + 2·2
        assert_eq!(report.orthogonality_pairs_checked, 8);

        let report = verify_eigen_identities(3, 2).unwrap();
        assert!(report.passed);
        let cell = report.cells.iter().find(|c| c.p == 1 && c.q == 1).unwrap();
        assert_eq!(cell.kernel_rank, 8);
        assert!(verify_eigen_identities(2, 0).is_err());
    }
}
