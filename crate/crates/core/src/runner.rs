//! Executes a [`RunConfig`] and collects the results into a [`Report`].

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Algebra, AlgebraSpec, Family};
use crate::cone::{cone_samples, derivation_generators, projector_identity_residual};
use crate::error::Result;
use crate::hidden::{run_identity_suite, Criterion, HiddenConstants, Precision, Suite, SuiteOptions, TestSet};
use crate::report::{CheckRecord, Report, RunConfig};
use crate::scalar::Q;
use crate::spectral::{
    bound_state_check, h0_matrix_spectrum, laguerre, phi_klm_residual, restricted_basis, skew_symmetry_check,
    slice_laplacian_residual, solid_harmonics,
};
use crate::tkk::{axiom_residuals, killing_definiteness, vogan_sl2_check, Tkk};

/// Suites run when none is requested.
pub const DEFAULT_SUITES: [&str; 6] = ["constants", "dims", "tkk_axioms", "vogan", "projector", "tkk_hidden"];

/// Algebras checked when none is requested; the second list is added by `--full`.
pub const FAST_ALGEBRAS: [(Family, usize); 5] =
    [(Family::Gamma, 2), (Family::Gamma, 3), (Family::Gamma, 4), (Family::HermR, 3), (Family::HermC, 3)];
pub const SLOW_ALGEBRAS: [(Family, usize); 2] = [(Family::HermH, 3), (Family::HermO, 3)];

/// Beyond this dimension the identity suites use a sampled test set.
pub const LARGE_DIM: usize = 20;

pub const PROJECTOR_POINTS: usize = 50;
pub const LADDER_TOL: f64 = 1e-6;
pub const CLOSURE_TOL: f64 = 1e-7;
pub const BOUND_STATE_TOL: f64 = 1e-7;

/// `(der, str, co)` from the classification, independent of any computation.
pub fn expected_dims(family: Family, n: usize) -> (usize, usize, usize) {
    match family {
        Family::Gamma => (n * (n - 1) / 2, n * (n + 1) / 2 + 1, (n + 2) * (n + 3) / 2),
        Family::HermR => (n * (n - 1) / 2, n * n, n * (2 * n + 1)),
        Family::HermC => (n * n - 1, 2 * n * n - 1, 4 * n * n - 1),
        Family::HermH => (n * (2 * n + 1), 4 * n * n, 2 * n * (4 * n - 1)),
        Family::HermO => (52, 79, 133),
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "true"
    } else {
        "false"
    }
}

fn identity_suite(alg: &Arc<Algebra>, suite: Suite, cfg: &RunConfig, label: &str) -> Result<Vec<CheckRecord>> {
    let test_set = if alg.dim() > LARGE_DIM { TestSet::Sampled(3) } else { TestSet::Default };
    let opts = SuiteOptions { seed: cfg.seed, points: cfg.points, tol: cfg.tol, test_set, precision: Precision::Exact };
    let res = run_identity_suite(alg.clone(), suite, &opts)?;
    Ok(res
        .identities
        .iter()
        .map(|i| match i.criterion {
            Criterion::AtMost => CheckRecord::residual(&i.id, label, i.value, i.threshold),
            Criterion::Exceeds => CheckRecord::departure(&i.id, label, i.value, i.threshold),
        })
        .collect())
}

fn constants(alg: &Algebra, label: &str) -> Vec<CheckRecord> {
    let k = HiddenConstants::for_algebra(alg);
    let spec = alg.spec();
    let (a, b) = HiddenConstants::family_table(spec.family, spec.n);
    vec![
        CheckRecord::exact("constants.A", label, &k.a, a),
        CheckRecord::exact("constants.A.inverse", label, &k.a, HiddenConstants::a_from_inverse(alg.rank(), alg.degree())),
        CheckRecord::exact("constants.B", label, &k.b, b),
    ]
}

fn dims(alg: &Arc<Algebra>, label: &str) -> Vec<CheckRecord> {
    let d = Tkk::new(alg.clone()).dims();
    let (der, stru, co) = expected_dims(d.family, d.n);
    vec![
        CheckRecord::exact("dims.der", label, d.der, der),
        CheckRecord::exact("dims.str", label, d.r#str, stru),
        CheckRecord::exact("dims.u", label, d.u, stru),
        CheckRecord::exact("dims.co", label, d.co, co),
    ]
}

fn vogan(alg: &Arc<Algebra>, cfg: &RunConfig, label: &str) -> Result<Vec<CheckRecord>> {
    let tkk = Tkk::new(alg.clone());
    let rep = vogan_sl2_check(&tkk, 10, cfg.seed);
    let mut out: Vec<CheckRecord> = rep
        .relations
        .iter()
        .map(|(name, ok)| {
            let mut r = CheckRecord::exact(&format!("vogan.{name}"), label, flag(*ok), "true");
            r.anchor = name.clone();
            r
        })
        .collect();
    let (max_ev, exact) = killing_definiteness(&tkk)?;
    out.push(CheckRecord::residual("vogan.killing.max_eigenvalue", label, max_ev, -1e-8));
    out.push(CheckRecord::exact("vogan.killing.exact", label, flag(exact), "true"));
    Ok(out)
}

fn projector(alg: &Algebra, cfg: &RunConfig, label: &str) -> Vec<CheckRecord> {
    let gens = derivation_generators(alg);
    let worst = cone_samples(alg, cfg.seed, PROJECTOR_POINTS)
        .iter()
        .map(|p| projector_identity_residual(alg, &gens, p))
        .fold(0.0, f64::max);
    vec![CheckRecord::residual("projector", label, worst, 1e-9)]
}

fn spectrum(alg: &Arc<Algebra>, cfg: &RunConfig, label: &str) -> Result<Vec<CheckRecord>> {
    let s = h0_matrix_spectrum(alg.clone(), cfg.degree, cfg.seed)?;
    let slice = restricted_basis(alg, cfg.degree, crate::spectral::default_point_count(alg, cfg.degree), cfg.seed)?;
    let mut out = Vec::new();
    for (i, level) in s.levels.iter().enumerate() {
        let want = slice.counts.get(level.index).copied().unwrap_or(0);
        let mut r = CheckRecord::exact(&format!("spectrum.level.{}", level.index), label, level.multiplicity, want);
        r.value = level.eigenvalue;
        r.pass &= level.index == i;
        out.push(r);
    }
    out.push(CheckRecord::residual("spectrum.ladder", label, s.ladder_defect, LADDER_TOL));
    out.push(CheckRecord::residual("spectrum.closure", label, s.closure, CLOSURE_TOL));
    Ok(out)
}

fn bound_states(alg: &Arc<Algebra>, cfg: &RunConfig, label: &str) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for level in 0..=cfg.degree.min(2) {
        let b = bound_state_check(alg.clone(), level, cfg.degree, cfg.seed, cfg.points)?;
        out.push(CheckRecord::residual(&format!("bound_state.{level}"), label, b.residual, BOUND_STATE_TOL));
    }
    Ok(out)
}

fn harmonics(alg: &Arc<Algebra>, cfg: &RunConfig, label: &str) -> Result<Vec<CheckRecord>> {
    let spec = alg.spec();
    if spec.family != Family::Gamma {
        return Ok(Vec::new());
    }
    let n = spec.n;
    let mut out = Vec::new();
    for k in 1..=2 {
        for l in 0..=2 {
            let res = phi_klm_residual(n, k, l, 0, cfg.seed, cfg.points.min(8))?;
            out.push(CheckRecord::residual(&format!("harmonics.phi.k{k}.l{l}"), label, res, cfg.tol));
        }
    }
    for l in 0..=3 {
        let count = solid_harmonics(n, l)?.len();
        let worst = (0..count)
            .map(|m| slice_laplacian_residual(n, l, m, cfg.seed, cfg.points.min(8)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(CheckRecord::residual(&format!("harmonics.laplacian.l{l}"), label, worst, cfg.tol));
    }
    let p1 = crate::spectral::phi_klm_gamma(n, 1, 1, 0)?;
    let p2 = crate::spectral::phi_klm_gamma(n, 2, 0, 0)?;
    for i in 0..alg.dim() {
        let u = alg.basis_vector::<Q>(i);
        let c = skew_symmetry_check(n, &u, &p1, &p2, cfg.seed, 400)?;
        let tol = 5.0 * c.std_error + 1e-10 * c.scale;
        out.push(CheckRecord::residual(&format!("harmonics.skew.b{i}"), label, c.integral.abs(), tol));
    }
    Ok(out)
}

fn laguerre_checks(alg: &Algebra, label: &str) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let half_rd = Q::new(((alg.rank() * alg.degree()) as i64).into(), 2.into());
    for l in 0..=2i64 {
        let alpha = Q::from_integer((2 * l).into()) + &half_rd - Q::from_integer(1.into());
        let lowering = (1..=10).all(|n| laguerre::lowering_defect(n, &alpha).is_zero());
        let three = (1..=10).all(|n| laguerre::three_term_defect(n, &alpha).is_zero());
        out.push(CheckRecord::exact(&format!("laguerre.lowering.alpha={alpha}"), label, flag(lowering), "true"));
        out.push(CheckRecord::exact(&format!("laguerre.three_term.alpha={alpha}"), label, flag(three), "true"));
        let mut off: f64 = 0.0;
        let mut norm: f64 = 0.0;
        for n in 0..=5 {
            for m in 0..=5 {
                let v = laguerre::laguerre_orthogonality_check(n, m, &alpha, 12)?;
                if n == m {
                    norm = norm.max(v);
                } else {
                    off = off.max(v);
                }
            }
        }
        out.push(CheckRecord::residual(&format!("laguerre.orthogonality.alpha={alpha}"), label, off, 1e-10));
        out.push(CheckRecord::residual(&format!("laguerre.orthogonality.norm.alpha={alpha}"), label, norm, 1e-8));
    }
    Ok(out)
}

fn run_one(spec: AlgebraSpec, suite: &str, cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let alg = Algebra::shared(spec)?;
    let label = spec.to_string();
    let label = label.as_str();
    match suite {
        "constants" => Ok(constants(&alg, label)),
        "dims" => Ok(dims(&alg, label)),
        "tkk_axioms" => {
            let (anti, jac) = axiom_residuals(&Tkk::new(alg.clone()), 100, cfg.seed);
            Ok(vec![
                CheckRecord::residual("tkk_axioms.antisymmetry", label, anti, 0.0),
                CheckRecord::residual("tkk_axioms.jacobi", label, jac, 0.0),
            ])
        }
        "vogan" => vogan(&alg, cfg, label),
        "projector" => Ok(projector(&alg, cfg, label)),
        "spectrum" => spectrum(&alg, cfg, label),
        "bound_state" => bound_states(&alg, cfg, label),
        "harmonics" => harmonics(&alg, cfg, label),
        "laguerre" => laguerre_checks(&alg, label),
        other => identity_suite(&alg, other.parse::<Suite>()?, cfg, label),
    }
}

/// Runs every `(algebra, suite)` pair in parallel; records keep the order of
/// the configuration.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let jobs: Vec<(AlgebraSpec, &str)> =
        cfg.algebras.iter().flat_map(|a| cfg.suites.iter().map(move |s| (*a, s.as_str()))).collect();
    let results: Vec<Result<Vec<CheckRecord>>> = jobs.par_iter().map(|(a, s)| run_one(*a, s, cfg)).collect();
    let mut report = Report::new(cfg.clone());
    for r in results {
        report.checks.extend(r?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Format;

    fn cfg(suites: &[&str]) -> RunConfig {
        RunConfig {
            algebras: vec![AlgebraSpec::new(Family::Gamma, 3), AlgebraSpec::new(Family::HermR, 3)],
            suites: suites.iter().map(|s| s.to_string()).collect(),
            points: 4,
            format: Format::Json,
            ..RunConfig::default()
        }
    }

    #[test]
    fn structural_suites_pass() {
        let r = run(&cfg(&["constants", "dims", "tkk_axioms", "projector", "laguerre"])).unwrap();
        assert!(r.pass(), "{}", r.to_text());
        assert!(r.checks.iter().all(|c| !c.anchor.is_empty()));
    }

    #[test]
    fn reports_are_deterministic() {
        let c = cfg(&["constants", "projector"]);
        assert_eq!(run(&c).unwrap().to_json().unwrap(), run(&c).unwrap().to_json().unwrap());
    }

    #[test]
    fn classification_dims() {
        assert_eq!(expected_dims(Family::HermO, 3), (52, 79, 133));
        assert_eq!(expected_dims(Family::Gamma, 3).2, 15);
        assert_eq!(expected_dims(Family::HermR, 3).2, 21);
    }
}
