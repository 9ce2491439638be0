use jka::scalar::{q, qi, Q};
use jka::spectral::laguerre::{lowering_defect, three_term_defect};
use jka::spectral::{
    bound_state_energy, h0_matrix_spectrum, harmonic_dimension, laguerre_norm, laguerre_orthogonality_check, phi_klm_eigenvalue,
    phi_klm_residual, slice_laplacian_residual, solid_harmonics, GaussLaguerre, LaguerrePoly, UniPoly,
};
use jka::{Algebra, AlgebraSpec, Family};
use num_traits::One;
use proptest::prelude::*;

/// `L_n^α(x) = Σ_k (−1)^k C(n+α, n−k) x^k / k!`.
fn explicit_laguerre(n: usize, alpha: &Q) -> UniPoly {
    let mut coeffs = Vec::new();
    for k in 0..=n {
        let mut binom = Q::one();
        for j in 1..=(n - k) {
            binom = binom * (alpha + qi((k + j) as i64)) / qi(j as i64);
        }
        let fact: i64 = (1..=k as i64).product();
        let sign = if k % 2 == 0 { 1 } else { -1 };
        coeffs.push(binom * qi(sign) / qi(fact));
    }
    UniPoly(coeffs)
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of polynomials of degree `≤ i` restricted to the rank-one slice.
fn slice_count(family: Family, n: usize, i: usize) -> usize {
    match family {
        // harmonics on the sphere S^{n−1}
        Family::Gamma => (0..=i).map(|l| binom(n + l - 1, n - 1) - if l >= 2 { binom(n + l - 3, n - 1) } else { 0 }).sum(),
        // even polynomials of degree 2i on the unit sphere of ℝ^n
        Family::HermR => binom(2 * i + n - 1, n - 1),
        // bidegree (i, i) on the unit sphere of ℂ^n
        Family::HermC => binom(i + n - 1, n - 1).pow(2),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn laguerre_matches_explicit_sum(n in 0usize..=10, num in -3i64..12, den in 1i64..5) {
        let alpha = q(num, den);
        prop_assume!(alpha > qi(-1));
        let oracle = explicit_laguerre(n, &alpha);
        prop_assert_eq!(&LaguerrePoly::new(n, &alpha).poly, &oracle);
        // derivative rule, independent of either recurrence
        if n >= 1 {
            let shifted = explicit_laguerre(n - 1, &(&alpha + Q::one()));
            prop_assert_eq!(oracle.derivative(), shifted.scale(&qi(-1)));
            prop_assert!(lowering_defect(n, &alpha).is_zero());
            prop_assert!(three_term_defect(n, &alpha).is_zero());
        }
        let d1 = oracle.derivative();
        let ode = UniPoly::x()
            .mul(&d1.derivative())
            .add(&UniPoly(vec![&alpha + Q::one(), -Q::one()]).mul(&d1))
            .add(&oracle.scale(&qi(n as i64)));
        prop_assert!(ode.is_zero());
    }

    #[test]
    fn laguerre_quadrature_orthogonality(n in 0usize..=6, m in 0usize..=6, half in 0i64..8) {
        let alpha = q(half, 2);
        let v = laguerre_orthogonality_check(n, m, &alpha, 12).unwrap();
        prop_assert!(v < if n == m { 1e-8 } else { 1e-10 }, "n={} m={} alpha={}: {:e}", n, m, alpha, v);
    }

    #[test]
    fn slice_laplacian_eigenfunctions(n in 2usize..=5, l in 0usize..=3, pick in any::<usize>(), seed in any::<u64>()) {
        let m = pick % harmonic_dimension(n, l);
        prop_assert_eq!(slice_laplacian_residual(n, l, m, seed, 4).unwrap(), 0.0);
    }

    #[test]
    fn radial_eigenfunctions_of_conformal_hamiltonian(n in 2usize..=5, k in 1usize..=3, l in 0usize..=2, seed in any::<u64>()) {
        prop_assert_eq!(phi_klm_residual(n, k, l, 0, seed, 4).unwrap(), 0.0);
        prop_assert_eq!(phi_klm_eigenvalue(n, k, l), -(qi((k + l - 1) as i64) + q(2 * (n as i64 - 1), 4)));
    }
}

#[test]
fn harmonic_dimensions_match_the_sphere_formula() {
    for n in 2..=6 {
        for l in 0..=4 {
            let want = binom(n + l - 1, n - 1) - if l >= 2 { binom(n + l - 3, n - 1) } else { 0 };
            assert_eq!(harmonic_dimension(n, l), want);
            assert_eq!(solid_harmonics(n, l).unwrap().len(), want, "n={n} l={l}");
        }
    }
}

#[test]
fn spectrum_ladders_and_multiplicities() {
    let cases = [(Family::Gamma, 2, 3), (Family::Gamma, 3, 3), (Family::Gamma, 4, 2), (Family::HermR, 3, 2), (Family::HermC, 3, 2)];
    for (f, n, d) in cases {
        let alg = Algebra::shared(AlgebraSpec::new(f, n)).unwrap();
        let ground = (alg.rank() * alg.degree()) as f64 / 4.0;
        for seed in [0, 7] {
            let s = h0_matrix_spectrum(alg.clone(), d, seed).unwrap();
            assert_eq!(s.levels.len(), d + 1, "{}", alg.spec());
            for (i, level) in s.levels.iter().enumerate() {
                assert_eq!(level.index, i);
                assert!((level.eigenvalue + i as f64 + ground).abs() < 1e-6, "{} level {i}: {}", alg.spec(), level.eigenvalue);
                assert_eq!(level.multiplicity, slice_count(f, n, i), "{} level {i}", alg.spec());
                let e = -0.5 / (i as f64 + ground).powi(2);
                assert!((bound_state_energy(&alg, i) - e).abs() < 1e-15);
            }
            assert_eq!(s.multiplicities().iter().sum::<usize>(), s.eigenvalues.len());
        }
    }
}

#[test]
fn gauss_laguerre_integrates_moments() {
    for alpha in [0.0, 0.5, 1.0, 2.5] {
        let rule = GaussLaguerre::new(10, alpha).unwrap();
        for k in 0..=19 {
            let want = laguerre_norm(0, alpha + k as f64);
            let got = rule.integrate(|x| x.powi(k));
            assert!((got - want).abs() / want < 1e-10, "alpha={alpha} k={k}");
        }
    }
}
