//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use jka::hidden::HiddenConstants;
use jka::report::{CheckRecord, RunConfig};
use jka::runner::run;
use jka::scalar::{q, qi, Q};
use jka::spectral::laguerre::{lowering_defect, ode_defect, three_term_defect};
use jka::spectral::{bound_state_check, h0_matrix_spectrum, laguerre_norm, laguerre_orthogonality_check};
use jka::tkk::Tkk;
use jka::{Algebra, AlgebraSpec, Family};

type Outcome = (bool, String);

fn spec(f: Family, n: usize) -> AlgebraSpec {
    AlgebraSpec::new(f, n)
}

fn structural() -> Vec<AlgebraSpec> {
    vec![spec(Family::Gamma, 2), spec(Family::Gamma, 3), spec(Family::Gamma, 4), spec(Family::HermR, 3)]
}

fn suite(algebras: Vec<AlgebraSpec>, suites: &[&str], points: usize) -> Vec<CheckRecord> {
    let cfg = RunConfig {
        algebras,
        suites: suites.iter().map(|s| s.to_string()).collect(),
        seed: 2024,
        points,
        ..RunConfig::default()
    };
    run(&cfg).expect("configuration is valid").checks
}

fn summarize(checks: &[CheckRecord]) -> Outcome {
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| format!("{} on {} = {:e}", c.id, c.algebra, c.value)).collect();
    let worst = checks.iter().filter(|c| c.value.is_finite() && !c.id.contains("departure") && !c.id.contains("shift"))
        .map(|c| c.value.abs())
        .fold(0.0, f64::max);
    if failed.is_empty() {
        (true, format!("{} checks, worst residual {worst:.2e}", checks.len()))
    } else {
        (false, format!("{} of {} checks failed: {}", failed.len(), checks.len(), failed.join("; ")))
    }
}

fn constants_table() -> Outcome {
    let table: [(Family, usize, Q, Q); 12] = [
        (Family::Gamma, 2, q(1, 2), qi(0)),
        (Family::Gamma, 3, q(1, 2), qi(0)),
        (Family::Gamma, 4, q(1, 2), qi(0)),
        (Family::Gamma, 5, q(1, 2), qi(0)),
        (Family::Gamma, 6, q(1, 2), qi(0)),
        (Family::HermR, 3, q(8, 45), q(3, 16)),
        (Family::HermR, 4, q(1, 12), q(3, 4)),
        (Family::HermR, 5, q(8, 175), q(27, 16)),
        (Family::HermC, 3, q(4, 27), q(5, 4)),
        (Family::HermC, 4, q(1, 16), qi(4)),
        (Family::HermH, 3, q(1, 9), qi(6)),
        (Family::HermO, 3, q(2, 27), qi(26)),
    ];
    let mut bad = Vec::new();
    for (f, n, a, b) in &table {
        let (rho, delta) = spec(*f, *n).rank_degree();
        let k = HiddenConstants::new(rho, delta);
        if k.a != *a || k.b != *b || k.a != HiddenConstants::a_from_inverse(rho, delta) {
            bad.push(format!("{}: A={} B={}", spec(*f, *n), k.a, k.b));
        }
    }
    (bad.is_empty(), if bad.is_empty() { "12 algebras exact, B(herm_o:3) = 26".into() } else { bad.join("; ") })
}

fn dims_table() -> Outcome {
    let table = [
        (Family::Gamma, 2, [1, 4, 4, 10]),
        (Family::Gamma, 3, [3, 7, 7, 15]),
        (Family::Gamma, 4, [6, 11, 11, 21]),
        (Family::Gamma, 5, [10, 16, 16, 28]),
        (Family::HermR, 3, [3, 9, 9, 21]),
        (Family::HermC, 3, [8, 17, 17, 35]),
        (Family::HermH, 3, [21, 36, 36, 66]),
        (Family::HermO, 3, [52, 79, 79, 133]),
    ];
    let mut bad = Vec::new();
    let mut octonion_secs = 0.0;
    for (f, n, want) in table {
        let start = Instant::now();
        let d = Tkk::new(Algebra::shared(spec(f, n)).unwrap()).dims();
        if f == Family::HermO {
            octonion_secs = start.elapsed().as_secs_f64();
        }
        let got = [d.der, d.r#str, d.u, d.co];
        if got != want {
            bad.push(format!("{}: {got:?}", spec(f, n)));
        }
    }
    if octonion_secs >= 60.0 {
        bad.push(format!("herm_o:3 took {octonion_secs:.1}s"));
    }
    (bad.is_empty(), if bad.is_empty() { format!("8 algebras, herm_o:3 (52, 79, 79, 133) in {octonion_secs:.1}s") } else { bad.join("; ") })
}

fn tkk_axioms() -> Outcome {
    let mut all = structural();
    all.extend([spec(Family::HermC, 3), spec(Family::HermH, 3), spec(Family::HermO, 3)]);
    let checks = suite(all, &["tkk_axioms"], 1);
    let exact = checks.iter().all(|c| c.value == 0.0);
    let (ok, msg) = summarize(&checks);
    (ok && exact, format!("100 triples per algebra: {msg}"))
}

fn hidden_action() -> Outcome {
    let mut algebras = structural();
    algebras.push(spec(Family::HermC, 3));
    let mut checks = suite(algebras, &["tkk_hidden"], 20);
    checks.extend(suite(vec![spec(Family::HermO, 3)], &["tkk_hidden"], 5));
    summarize(&checks)
}

fn sensitivity() -> Outcome {
    let checks = suite(vec![spec(Family::Gamma, 3), spec(Family::HermR, 3), spec(Family::HermC, 3)], &["appendixB"], 20);
    let departures = checks.iter().filter(|c| c.id.contains("departure") || c.id.contains("a_shift")).count();
    let (ok, msg) = summarize(&checks);
    (ok && departures >= 5, format!("{departures} departure checks; {msg}"))
}

fn quadratic() -> Outcome {
    let mut bad = Vec::new();
    for s in structural() {
        let (rho, delta) = s.rank_degree();
        let (r, d) = (qi(rho as i64), qi(delta as i64));
        let want = &r * &d / qi(4) * (qi(1) + (&r - qi(2)) * &d / qi(4));
        if HiddenConstants::new(rho, delta).casimir != want {
            bad.push(format!("{s}: casimir constant"));
        }
    }
    let checks = suite(structural(), &["quadratic"], 20);
    let primary = checks.iter().filter(|c| c.id == "quad.primary").count();
    let (ok, msg) = summarize(&checks);
    (ok && bad.is_empty() && primary == 4, format!("{msg} {}", bad.join("; ")).trim_end().to_string())
}

fn lenz() -> Outcome {
    summarize(&suite(vec![spec(Family::Gamma, 3), spec(Family::HermR, 3)], &["lenz"], 20))
}

fn spectrum() -> Outcome {
    let mut bad = Vec::new();
    let gamma = Algebra::shared(spec(Family::Gamma, 3)).unwrap();
    let s = h0_matrix_spectrum(gamma.clone(), 3, 0).unwrap();
    let eig: Vec<f64> = s.levels.iter().map(|l| l.eigenvalue).collect();
    if s.multiplicities() != [1, 4, 9, 16] || eig.iter().zip([-1.0, -2.0, -3.0, -4.0]).any(|(a, b)| (a - b).abs() > 1e-6) {
        bad.push(format!("gamma:3 {eig:?} {:?}", s.multiplicities()));
    }
    let real = Algebra::shared(spec(Family::HermR, 3)).unwrap();
    let s = h0_matrix_spectrum(real.clone(), 2, 0).unwrap();
    if s.levels.len() != 3 || s.levels.iter().enumerate().any(|(i, l)| (l.eigenvalue + i as f64 + 0.75).abs() > 1e-6) {
        bad.push(format!("herm_r:3 {:?}", s.levels.iter().map(|l| l.eigenvalue).collect::<Vec<_>>()));
    }
    let mut worst: f64 = 0.0;
    for alg in [gamma, real] {
        let ground = (alg.rank() * alg.degree()) as f64 / 4.0;
        for level in 0..=2 {
            let b = bound_state_check(alg.clone(), level, 2, 0, 20).unwrap();
            let want = -0.5 / (level as f64 + ground).powi(2);
            worst = worst.max(b.residual);
            if b.residual > 1e-7 || (b.energy - want).abs() > 1e-12 {
                bad.push(format!("{} level {level}: residual {:e}, energy {}", alg.spec(), b.residual, b.energy));
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { format!("hydrogen ladder 1, 4, 9, 16; bound states to {worst:.1e}") } else { bad.join("; ") })
}

fn projector() -> Outcome {
    let all = vec![spec(Family::Gamma, 3), spec(Family::HermR, 3), spec(Family::HermC, 3), spec(Family::HermH, 3), spec(Family::HermO, 3)];
    summarize(&suite(all, &["projector"], 1))
}

/// `Γ(n + α + 1) / n!` for integer or half-integer `α`, from `Γ(1) = 1`, `Γ(1/2) = √π`.
fn norm_oracle(n: usize, twice_alpha: i64) -> f64 {
    let mut z = if twice_alpha % 2 == 0 { 1.0 } else { 0.5 };
    let mut g = if twice_alpha % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let target = n as f64 + twice_alpha as f64 / 2.0 + 1.0;
    while z < target - 0.25 {
        g *= z;
        z += 1.0;
    }
    g / (1..=n).map(|k| k as f64).product::<f64>()
}

fn laguerre() -> Outcome {
    let mut bad = Vec::new();
    for twice_alpha in [0i64, 1, 2, 3, 5, 8] {
        let alpha = q(twice_alpha, 2);
        for n in 1..=10 {
            if !lowering_defect(n, &alpha).is_zero() || !three_term_defect(n, &alpha).is_zero() || !ode_defect(n, &alpha).is_zero() {
                bad.push(format!("recurrence n={n} alpha={alpha}"));
            }
        }
        for n in 0..=6 {
            for m in 0..=6 {
                let v = laguerre_orthogonality_check(n, m, &alpha, 12).unwrap();
                if v > if n == m { 1e-8 } else { 1e-10 } {
                    bad.push(format!("orthogonality n={n} m={m} alpha={alpha}: {v:e}"));
                }
            }
            let (got, want) = (laguerre_norm(n, twice_alpha as f64 / 2.0), norm_oracle(n, twice_alpha));
            if (got - want).abs() / want > 1e-8 {
                bad.push(format!("norm n={n} alpha={alpha}"));
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { "recurrences exact to n = 10; quadrature and norms within tolerance".into() } else { bad.join("; ") })
}

fn vogan() -> Outcome {
    let checks = suite(structural(), &["vogan"], 1);
    let (ok, _) = summarize(&checks);
    let killing = checks.iter().filter(|c| c.id == "vogan.killing.max_eigenvalue").map(|c| c.value).fold(f64::MIN, f64::max);
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| format!("{} on {}", c.id, c.algebra)).collect();
    (ok, if ok { format!("{} exact relations, largest Killing-θ eigenvalue {killing:.3}", checks.len() - 8) } else { failed.join("; ") })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("constants table", constants_table),
        ("lie dimensions", dims_table),
        ("tkk axioms", tkk_axioms),
        ("hidden action", hidden_action),
        ("A and B sensitivity", sensitivity),
        ("quadratic relations", quadratic),
        ("lenz relations", lenz),
        ("spectrum", spectrum),
        ("projector identity", projector),
        ("laguerre", laguerre),
        ("sl2 and killing data", vogan),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let total = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = check();
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {:<22} {}  {} [{:.1}s]",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} failed, {:.1}s total", failures, total.elapsed().as_secs_f64());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
