//! Acceptance criteria, one line of output each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use octograv::action::{self, CouplingConstants, LagrangianForm};
use octograv::frame::DerivativeProvider;
use octograv::geometry::GeometryAtPoint;
use octograv::parallel::{max_over, Execution};
use octograv::scenarios::Scenario;
use octograv::tables::{
    extract_epsilon3, generalized_delta, kronecker_contraction, permutation_sign, StructureTable, StructureTables,
};
use octograv::verify::{verify_algebra, VerifyConfig};

const SEED: u64 = 20_240_611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn algebra_laws() -> Outcome {
    let start = Instant::now();
    let report = verify_algebra(&VerifyConfig {
        seed: SEED,
        samples: 10_000,
        ..VerifyConfig::default()
    })
    .expect("tables build");
    let elapsed = start.elapsed();
    let laws: Vec<_> = report
        .results
        .iter()
        .filter(|r| {
            ["composition/", "alternativity/", "associativity/", "inner-product/", "minkowski-frame/"]
                .iter()
                .any(|p| r.name.starts_with(p))
        })
        .collect();
    let worst = laws.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let fast = elapsed < Duration::from_secs(5);
    outcome(
        laws.len() == 9 && worst < 1e-10 && fast,
        format!(
            "{} laws x 10^4 samples (seed {SEED}), max rel residual {worst:.2e} < 1e-10, suite {:.2?} < 5s",
            laws.len(),
            elapsed
        ),
    )
}

fn cross_products() -> Outcome {
    let report = verify_algebra(&VerifyConfig {
        seed: SEED + 1,
        samples: 10_000,
        ..VerifyConfig::default()
    })
    .expect("tables build");
    let checks: Vec<_> = report
        .results
        .iter()
        .filter(|r| r.name.starts_with("cross/orthogonality/") || r.name.starts_with("cross/pythagorean/"))
        .collect();
    let worst = checks.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    outcome(
        checks.len() == 8 && worst < 1e-10,
        format!(
            "orthogonality + Pythagorean, 2 algebras x 2 chiralities x 10^4 triples, max rel residual {worst:.2e} < 1e-10"
        ),
    )
}

fn epsilon4_exact(tables: &StructureTables) -> Outcome {
    let mut mismatches = 0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if tables.eps4.lower(a, b, c, d) != permutation_sign(&[a, b, c, d]) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    let eps3_ok = extract_epsilon3().is_ok_and(|e| {
        (1..=3).all(|i| (1..=3).all(|j| (1..=3).all(|k| e.get(i, j, k) == permutation_sign(&[i, j, k]))))
    });
    outcome(
        mismatches == 0 && eps3_ok,
        format!("eps_abcd from i<X(e_a,e_b,e_c),e_d>: {mismatches} mismatches over 256 entries; eps3 exact: {eps3_ok}"),
    )
}

fn chi_exact(tables: &StructureTables) -> Outcome {
    let anti_l = tables.chi_left.antisymmetry_residual();
    let anti_r = tables.chi_right.antisymmetry_residual();
    let conj = tables.chi_left.conjugate_residual(&tables.chi_right);
    let comp_l = tables.chi_left.component_relation_residual(&tables.psi, &tables.phi);
    let comp_r = tables.chi_right.component_relation_residual(&tables.psi, &tables.phi);
    let rest_l = tables.chi_left.restriction_residual(&tables.eps4);
    let rest_r = tables.chi_right.restriction_residual(&tables.eps4);
    let all = [anti_l, anti_r, conj, comp_l, comp_r, rest_l, rest_r];
    outcome(
        all.iter().all(|&v| v == 0.0),
        format!(
            "antisymmetry {anti_l}/{anti_r}, conjugate pair {conj}, components {comp_l}/{comp_r}, restriction {rest_l}/{rest_r} (all must be 0)"
        ),
    )
}

fn kronecker_exact(tables: &StructureTables) -> Outcome {
    let mut mismatches = 0;
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    if kronecker_contraction(&tables.eps4, mu, nu, rho, sigma) != generalized_delta(mu, nu, rho, sigma) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("-1/2 eps eps = delta: {mismatches} mismatches over 256 index values"),
    )
}

fn four_dim_equivalence(tables: &StructureTables) -> Outcome {
    let start = Instant::now();
    let c = CouplingConstants::default();
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut notes = Vec::new();

    let flat = Scenario::Flat4;
    let mut schwarzschild_max = 0.0_f64;
    let scenarios = [
        (flat, flat.sample_points(10, SEED)),
        (Scenario::Schwarzschild { mass: 1.0 }, Scenario::Schwarzschild { mass: 1.0 }.sample_points(50, SEED)),
        (Scenario::DeSitter { hubble: 0.1 }, Scenario::DeSitter { hubble: 0.1 }.sample_points(50, SEED)),
    ];
    for (scenario, points) in &scenarios {
        let field = scenario.frame_field(DerivativeProvider::Analytic);
        let summary = action::crosscheck_4d(&field, points, &c, 1e-8, Execution::Parallel).expect("4D scenario");
        worst = worst.max(summary.max_rel_delta);
        count += summary.points.len();
        if !summary.skipped.is_empty() {
            notes.push(format!("{} skipped {}", scenario.name(), summary.skipped.len()));
        }
        for p in &summary.points {
            // closed-form values: 0 for vacuum and flat, 12 H^2 e^{3Ht} for de Sitter
            let expected = match scenario {
                Scenario::DeSitter { hubble } => 12.0 * hubble * hubble * (3.0 * hubble * p.point[0]).exp(),
                _ => 0.0,
            };
            let rel = (p.double_dual - expected).abs() / expected.abs().max(1e-300);
            if expected != 0.0 {
                worst = worst.max(rel);
            } else {
                schwarzschild_max = schwarzschild_max.max(p.double_dual.abs()).max(p.vierbein.abs());
            }
        }
    }
    let ds = Scenario::DeSitter { hubble: 0.1 }.frame_field(DerivativeProvider::Analytic);
    let origin = action::evaluate(LagrangianForm::DoubleDual4, &ds, &[0.0; 4], &c, tables).expect("regular");
    let origin_err = (origin.value.re - 0.12).abs();
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-8
            && origin_err < 1e-8
            && schwarzschild_max < 1e-8
            && count == 110
            && elapsed < Duration::from_secs(10),
        format!(
            "dd4/vierbein4/eh4 on {count} points: max rel delta {worst:.2e} < 1e-8; de Sitter L(0) = {:.12} (|d| {origin_err:.1e}); \
             flat+Schwarzschild max |L| {schwarzschild_max:.1e} < 1e-8; {:.2?} < 10s{}",
            origin.value.re,
            elapsed,
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join(", ")) }
        ),
    )
}

fn curvature_discrepancy(scenario: Scenario, point: &[f64], h: f64) -> f64 {
    let exact = GeometryAtPoint::compute(&scenario.frame_field(DerivativeProvider::Analytic), point).expect("regular");
    let approx = GeometryAtPoint::compute(
        &scenario.frame_field(DerivativeProvider::finite_difference_uniform(h)),
        point,
    )
    .expect("regular");
    exact
        .curvature_slice()
        .iter()
        .zip(approx.curvature_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn finite_difference_convergence(tables: &StructureTables) -> Outcome {
    // H = 10 keeps truncation error above roundoff for steps near 1e-4
    let hubble = 10.0;
    let scenario = Scenario::DeSitter { hubble };
    let c = CouplingConstants::default();
    let point = [0.0; 4];
    let exact = action::evaluate(
        LagrangianForm::DoubleDual4,
        &scenario.frame_field(DerivativeProvider::Analytic),
        &point,
        &c,
        tables,
    )
    .expect("regular")
    .value
    .re;
    let lagrangian_error = |h: f64| {
        let field = scenario.frame_field(DerivativeProvider::finite_difference_uniform(h));
        let v = action::evaluate(LagrangianForm::DoubleDual4, &field, &point, &c, tables)
            .expect("regular")
            .value
            .re;
        (v - exact).abs()
    };
    let (c1, c2) = (curvature_discrepancy(scenario, &point, 1e-4), curvature_discrepancy(scenario, &point, 5e-5));
    let (l1, l2) = (lagrangian_error(1e-4), lagrangian_error(5e-5));
    let (rc, rl) = (c1 / c2, l1 / l2);
    let band = 3.5..=4.5;
    outcome(
        band.contains(&rc) && band.contains(&rl),
        format!(
            "de Sitter H={hubble}, h 1e-4 -> 5e-5: max |dR| {c1:.3e} -> {c2:.3e} (ratio {rc:.3}), \
             |dL| {l1:.3e} -> {l2:.3e} (ratio {rl:.3}); both in [3.5, 4.5]"
        ),
    )
}

fn eight_dim_reality(tables: &StructureTables) -> Outcome {
    let c = CouplingConstants::default();
    let mut worst = 0.0_f64;
    let mut worst_route = 0.0_f64;
    let mut count = 0;
    let mut cases = vec![(Scenario::Flat8, 0u64), (Scenario::DiagonalWarped8, 0)];
    for seed in 0..3 {
        cases.push((
            Scenario::RandomSmooth8 {
                amplitude: 0.04,
                seed,
            },
            seed,
        ));
    }
    for (scenario, seed) in cases {
        let field = scenario.frame_field(DerivativeProvider::Analytic);
        let points = scenario.sample_points(20, SEED + seed);
        for r in action::sweep(LagrangianForm::ChiDual8, &field, &points, &c, tables, Execution::Parallel) {
            let r = r.expect("regular 8D point");
            worst = worst.max(r.imag_ratio);
            worst_route = worst_route.max(r.rel_delta);
            count += 1;
        }
    }
    outcome(
        worst < 1e-8 && worst_route < 1e-8 && count == 100,
        format!(
            "chi8 on {count} points (flat8, diagonal-warped8, random-smooth8 x 3 seeds): max |Im|/max(|Re|, kappa*scale) {worst:.2e} < 1e-8; \
             coordinate vs frame route {worst_route:.2e}"
        ),
    )
}

fn pair_symmetry() -> Outcome {
    let mut lines = Vec::new();
    let mut worst = 0.0_f64;
    let cases = [
        Scenario::Flat4,
        Scenario::Schwarzschild { mass: 1.0 },
        Scenario::DeSitter { hubble: 0.1 },
        Scenario::Flat8,
        Scenario::DiagonalWarped8,
        Scenario::RandomSmooth8 {
            amplitude: 0.04,
            seed: 0,
        },
    ];
    for scenario in cases {
        let field = scenario.frame_field(DerivativeProvider::Analytic);
        let points = scenario.sample_points(10, SEED);
        let r = max_over(&points, Execution::Parallel, |p| {
            let g = GeometryAtPoint::compute(&field, p).expect("regular");
            g.pair_symmetry_residual().max(g.bianchi_residual())
        });
        worst = worst.max(r);
        lines.push(format!("{} {r:.1e}", scenario.name()));
    }
    outcome(
        worst < 1e-8,
        format!("R_mnrs = R_rsmn (and first Bianchi), relative: {}", lines.join(", ")),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let tables = StructureTables::build().expect("structure tables build");
    let criteria: Vec<Criterion> = vec![
        ("algebra laws", Box::new(algebra_laws)),
        ("cross-product identities", Box::new(cross_products)),
        ("epsilon4 from cross product", Box::new(|| epsilon4_exact(&tables))),
        ("chi tables", Box::new(|| chi_exact(&tables))),
        ("Kronecker identity", Box::new(|| kronecker_exact(&tables))),
        ("4D equivalence", Box::new(|| four_dim_equivalence(&tables))),
        ("finite-difference convergence", Box::new(|| finite_difference_convergence(&tables))),
        ("8D reality", Box::new(|| eight_dim_reality(&tables))),
        ("curvature pair symmetry", Box::new(pair_symmetry)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
