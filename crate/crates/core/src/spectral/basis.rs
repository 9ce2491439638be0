//! Polynomials restricted to the cone or to its compact slice, and a
//! rank-revealing choice of independent monomials.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::Algebra;
use crate::cone::{cone_samples, rational_cone_samples, to_slice, ConePoint, RationalConePoint};
use crate::error::{JkaError, Result};
use crate::hidden::Monomial;

/// Relative residual below which a column counts as dependent.
pub const RANK_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Domain {
    /// The Kepler cone itself.
    Cone,
    /// The slice `⟨x|x⟩ = 2` of the cone.
    Slice,
}

#[derive(Clone, Debug)]
pub struct FilteredBasis {
    pub degree: usize,
    pub domain: Domain,
    /// Every monomial of degree `≤ degree`, grouped by degree.
    pub monomials: Vec<Monomial>,
    /// Indices into `monomials` of an independent spanning subset.
    pub selected: Vec<usize>,
    pub points: Vec<ConePoint>,
    /// The same points with exact coordinates, on the cone only.
    pub exact_points: Option<Vec<RationalConePoint>>,
    /// `points × selected` evaluation matrix.
    pub evaluation: DMatrix<f64>,
    /// `N_{≤k}` for `k = 0..=degree`.
    pub counts: Vec<usize>,
    /// Smallest relative residual among the accepted columns.
    pub weakest_accepted: f64,
    /// Largest relative residual among the rejected columns.
    pub strongest_rejected: f64,
}

impl FilteredBasis {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn selected_monomials(&self) -> Vec<Monomial> {
        self.selected.iter().map(|&i| self.monomials[i]).collect()
    }

    /// `N_{≤k} − N_{≤k−1}`.
    pub fn increments(&self) -> Vec<usize> {
        self.counts.iter().enumerate().map(|(k, &n)| if k == 0 { n } else { n - self.counts[k - 1] }).collect()
    }
}

fn sample_points(alg: &Algebra, domain: Domain, seed: u64, count: usize) -> (Vec<ConePoint>, Option<Vec<RationalConePoint>>) {
    match domain {
        Domain::Cone => {
            let exact = rational_cone_samples(alg, seed, count);
            (exact.iter().map(RationalConePoint::to_float).collect(), Some(exact))
        }
        Domain::Slice => (cone_samples(alg, seed, count).iter().map(|p| to_slice(alg, p)).collect(), None),
    }
}

fn select(columns: &[DVector<f64>]) -> (Vec<usize>, f64, f64) {
    let mut q: Vec<DVector<f64>> = Vec::new();
    let mut chosen = Vec::new();
    let (mut weakest, mut strongest) = (f64::INFINITY, 0.0f64);
    for (j, col) in columns.iter().enumerate() {
        let norm = col.norm();
        if norm == 0.0 {
            continue;
        }
        let mut v = col / norm;
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &q {
                let c = b.dot(&v);
                v.axpy(-c, b, 1.0);
            }
        }
        let res = v.norm();
        if res > RANK_GAP {
            weakest = weakest.min(res);
            q.push(v / res);
            chosen.push(j);
        } else {
            strongest = strongest.max(res);
        }
    }
    (chosen, weakest, strongest)
}

fn build(alg: &Algebra, d: usize, n_points: usize, seed: u64, domain: Domain) -> Result<FilteredBasis> {
    let monomials = Monomial::up_to_degree(alg.dim(), d);
    if n_points < 3 * monomials.len() {
        return Err(JkaError::InvalidInput(format!(
            "need at least {} points for {} monomials",
            3 * monomials.len(),
            monomials.len()
        )));
    }
    let (points, exact_points) = sample_points(alg, domain, seed, n_points);
    let columns: Vec<DVector<f64>> = monomials
        .iter()
        .map(|m| DVector::from_iterator(points.len(), points.iter().map(|p| m.eval(p.x()))))
        .collect();
    let (selected, weakest, strongest) = select(&columns);
    let counts = (0..=d).map(|k| selected.iter().filter(|&&i| monomials[i].degree() <= k).count()).collect();
    let evaluation = DMatrix::from_columns(&selected.iter().map(|&i| columns[i].clone()).collect::<Vec<_>>());
    Ok(FilteredBasis {
        degree: d,
        domain,
        monomials,
        selected,
        points,
        exact_points,
        evaluation,
        counts,
        weakest_accepted: weakest,
        strongest_rejected: strongest,
    })
}

/// Independent monomials of degree `≤ d` on `domain`, confirmed by a second
/// independent draw of points.
pub fn restricted_basis_on(alg: &Algebra, d: usize, n_points: usize, seed: u64, domain: Domain) -> Result<FilteredBasis> {
    let basis = build(alg, d, n_points, seed, domain)?;
    let check = build(alg, d, n_points, seed ^ 0x9e37_79b9_7f4a_7c15, domain)?;
    if check.counts != basis.counts {
        let gap = basis.weakest_accepted.min(check.weakest_accepted) / basis.strongest_rejected.max(check.strongest_rejected).max(f64::MIN_POSITIVE);
        return Err(JkaError::UnstableRank { gap });
    }
    Ok(basis)
}

/// [`restricted_basis_on`] the slice, where `N_{≤m} − N_{≤m−1}` is the
/// dimension of the `m`-th harmonic space.
pub fn restricted_basis(alg: &Algebra, d: usize, n_points: usize, seed: u64) -> Result<FilteredBasis> {
    restricted_basis_on(alg, d, n_points, seed, Domain::Slice)
}

/// Three points per monomial of degree `≤ d`.
pub fn default_point_count(alg: &Algebra, d: usize) -> usize {
    3 * Monomial::up_to_degree(alg.dim(), d).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, Family};

    #[test]
    fn constants_and_linear_functions() {
        let a = Algebra::new(AlgebraSpec::new(Family::Gamma, 3)).unwrap();
        let b = restricted_basis(&a, 1, 100, 1).unwrap();
        assert_eq!(b.counts, vec![1, 4]);
        let c = restricted_basis_on(&a, 1, 100, 1, Domain::Cone).unwrap();
        assert_eq!(c.counts, vec![1, 5]);
    }

    #[test]
    fn sphere_harmonic_counts() {
        let a = Algebra::new(AlgebraSpec::new(Family::Gamma, 3)).unwrap();
        let n = default_point_count(&a, 3);
        let b = restricted_basis(&a, 3, n, 5).unwrap();
        assert_eq!(b.increments(), vec![1, 3, 5, 7]);
        assert!(b.weakest_accepted > 1e3 * b.strongest_rejected);
    }

    #[test]
    fn too_few_points() {
        let a = Algebra::new(AlgebraSpec::new(Family::Gamma, 2)).unwrap();
        assert!(restricted_basis(&a, 2, 5, 0).is_err());
    }
}
