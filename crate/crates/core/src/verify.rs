//! Randomized and exhaustive checks of the algebra laws and structure tables.
//!
//! Random samples have every complex component uniform in `[-1, 1]^2` and are
//! drawn from a ChaCha8 stream seeded by [`VerifyConfig::seed`]. Residuals are
//! normalized by the product of the Hermitian norms of the inputs, so a
//! residual of 1e-12 means twelve digits of agreement on unit-scale inputs
//! even when the (indefinite) algebra norm vanishes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{basis_frame, eta, AlgebraKind, CayleyElement, Chirality, ComplexScalar};
use crate::parallel::{max_over, Execution};
use crate::tables::{
    dual_of_psi, generalized_delta, kronecker_contraction, permutation_sign, StructureTable, StructureTables,
    TableError, DUAL_ORIENTATION,
};

pub const DEFAULT_SAMPLES: usize = 10_000;
/// Product laws: composition, alternativity, associativity, inner products.
pub const PRODUCT_TOLERANCE: f64 = 1e-12;
/// Cross-product orthogonality and the Pythagorean identity.
pub const CROSS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[doc(hidden)]
pub enum Fault {
    /// Flips the sign of one ψ entry without touching its permutations.
    CorruptPsi,
    /// Flips one χ_L entry.
    CorruptChi,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub exec: Execution,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: DEFAULT_SAMPLES,
            exec: Execution::default(),
            fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantResult {
    pub name: String,
    /// Number of random samples or exhaustive index tuples checked.
    pub checked: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl InvariantResult {
    fn new(name: impl Into<String>, checked: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            checked,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub results: Vec<InvariantResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// Square root of Σ|c_k|^2.
pub fn hermitian_norm(x: &CayleyElement) -> f64 {
    x.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest |c_k| of `x`, divided by `scale`.
fn scaled(x: &CayleyElement, scale: f64) -> f64 {
    if scale == 0.0 {
        x.max_abs()
    } else {
        x.max_abs() / scale
    }
}

pub fn random_element<R: Rng + ?Sized>(kind: AlgebraKind, rng: &mut R) -> CayleyElement {
    let coeffs: Vec<ComplexScalar> = (0..kind.dim())
        .map(|_| ComplexScalar::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    CayleyElement::from_coeffs(kind, &coeffs).expect("length matches kind")
}

fn random_triples(kind: AlgebraKind, count: usize, rng: &mut ChaCha8Rng) -> Vec<[CayleyElement; 3]> {
    (0..count)
        .map(|_| {
            [
                random_element(kind, rng),
                random_element(kind, rng),
                random_element(kind, rng),
            ]
        })
        .collect()
}

fn kind_label(kind: AlgebraKind) -> &'static str {
    match kind {
        AlgebraKind::Quaternionic => "quaternionic",
        AlgebraKind::Octonionic => "octonionic",
    }
}

fn chirality_label(c: Chirality) -> &'static str {
    match c {
        Chirality::Left => "left",
        Chirality::Right => "right",
    }
}

/// Gram determinant det⟨x_i, x_j⟩ of three elements.
fn gram_determinant(x: &[CayleyElement; 3]) -> ComplexScalar {
    let g = |i: usize, j: usize| x[i].inner(&x[j]).expect("same kind");
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

fn algebra_laws(cfg: &VerifyConfig, out: &mut Vec<InvariantResult>) {
    let n = cfg.samples;
    let exec = cfg.exec;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for kind in [AlgebraKind::Quaternionic, AlgebraKind::Octonionic] {
        let label = kind_label(kind);
        let samples = random_triples(kind, n, &mut rng);

        let composition = max_over(&samples, exec, |[x, y, _]| {
            let lhs = (*x * *y).norm();
            let hx = hermitian_norm(x);
            let hy = hermitian_norm(y);
            (lhs - x.norm() * y.norm()).norm() / (hx * hx * hy * hy)
        });
        out.push(InvariantResult::new(format!("composition/{label}"), n, composition, PRODUCT_TOLERANCE));

        let alternative = max_over(&samples, exec, |[x, y, _]| {
            let hx = hermitian_norm(x);
            let hy = hermitian_norm(y);
            let left = x.associator(x, y).expect("same kind");
            let right = x.associator(y, y).expect("same kind");
            scaled(&left, hx * hx * hy).max(scaled(&right, hx * hy * hy))
        });
        out.push(InvariantResult::new(format!("alternativity/{label}"), n, alternative, PRODUCT_TOLERANCE));

        let inner = max_over(&samples, exec, |[x, y, _]| {
            let a = x.inner(y).expect("same kind");
            let b = x.inner_conjugate_first(y).expect("same kind");
            let c = y.inner(x).expect("same kind");
            (a - b).norm().max((a - c).norm()) / (hermitian_norm(x) * hermitian_norm(y))
        });
        out.push(InvariantResult::new(format!("inner-product/two-sided/{label}"), n, inner, PRODUCT_TOLERANCE));

        let basis = basis_frame(kind);
        let mut frame = 0.0_f64;
        for (a, ea) in basis.iter().enumerate() {
            for (b, eb) in basis.iter().enumerate() {
                let v = ea.inner(eb).expect("same kind");
                frame = frame.max((v - eta(a, b)).norm());
            }
        }
        out.push(InvariantResult::new(
            format!("minkowski-frame/{label}"),
            basis.len() * basis.len(),
            frame,
            0.0,
        ));

        for chirality in [Chirality::Left, Chirality::Right] {
            let tag = format!("{label}/{}", chirality_label(chirality));
            let crosses: Vec<(&[CayleyElement; 3], CayleyElement)> = samples
                .iter()
                .map(|t| (t, t[0].cross(&t[1], &t[2], chirality).expect("same kind")))
                .collect();

            let orthogonal = max_over(&crosses, exec, |(t, x)| {
                let hx = t.iter().map(hermitian_norm).product::<f64>();
                t.iter()
                    .map(|v| x.inner(v).expect("same kind").norm() / (hx * hermitian_norm(v)))
                    .fold(0.0, f64::max)
            });
            out.push(InvariantResult::new(format!("cross/orthogonality/{tag}"), n, orthogonal, CROSS_TOLERANCE));

            let pythagorean = max_over(&crosses, exec, |(t, x)| {
                let h = t.iter().map(hermitian_norm).product::<f64>();
                (x.inner(x).expect("same kind") - gram_determinant(t)).norm() / (h * h)
            });
            out.push(InvariantResult::new(format!("cross/pythagorean/{tag}"), n, pythagorean, CROSS_TOLERANCE));

            let antisymmetric = max_over(&crosses, exec, |(t, x)| {
                let h = t.iter().map(hermitian_norm).product::<f64>();
                let swap01 = t[1].cross(&t[0], &t[2], chirality).expect("same kind");
                let swap12 = t[0].cross(&t[2], &t[1], chirality).expect("same kind");
                scaled(&(*x + swap01), h).max(scaled(&(*x + swap12), h))
            });
            out.push(InvariantResult::new(format!("cross/antisymmetry/{tag}"), n, antisymmetric, PRODUCT_TOLERANCE));
        }
    }

    let quaternions = random_triples(AlgebraKind::Quaternionic, n, &mut rng);
    let associative = max_over(&quaternions, exec, |[x, y, z]| {
        let h = hermitian_norm(x) * hermitian_norm(y) * hermitian_norm(z);
        scaled(&x.associator(y, z).expect("same kind"), h)
    });
    out.push(InvariantResult::new("associativity/quaternionic", n, associative, PRODUCT_TOLERANCE));

    let chirality_agree = max_over(&quaternions, exec, |[x, y, z]| {
        let h = hermitian_norm(x) * hermitian_norm(y) * hermitian_norm(z);
        let d = x.cross_left(y, z).expect("same kind") - x.cross_right(y, z).expect("same kind");
        scaled(&d, h)
    });
    out.push(InvariantResult::new(
        "cross/chirality-agreement/quaternionic",
        n,
        chirality_agree,
        PRODUCT_TOLERANCE,
    ));

    // exact identities on the imaginary units
    let units: Vec<CayleyElement> = (0..8)
        .map(|k| CayleyElement::unit(AlgebraKind::Octonionic, k).expect("in range"))
        .collect();
    let minus_one = -CayleyElement::one(AlgebraKind::Octonionic);
    let mut units_residual = 0.0_f64;
    for i in 1..8 {
        units_residual = units_residual.max((units[i] * units[i] - minus_one).max_abs());
        for j in 1..8 {
            if i != j {
                let anti = units[i] * units[j] + units[j] * units[i];
                units_residual = units_residual.max(anti.max_abs());
            }
        }
    }
    out.push(InvariantResult::new("units/squares-and-anticommutation", 49, units_residual, 0.0));
}

fn max_abs_diff(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

fn table_checks(tables: &StructureTables, out: &mut Vec<InvariantResult>) -> Result<(), TableError> {
    let q_units: Vec<CayleyElement> = (0..4)
        .map(|k| CayleyElement::unit(AlgebraKind::Quaternionic, k))
        .collect::<Result<_, _>>()?;
    let o_units: Vec<CayleyElement> = (0..8)
        .map(|k| CayleyElement::unit(AlgebraKind::Octonionic, k))
        .collect::<Result<_, _>>()?;

    let mut eps3 = 0.0_f64;
    for i in 1..4 {
        for j in 1..4 {
            let comm = q_units[i].commutator(&q_units[j])?;
            for k in 1..4 {
                eps3 = eps3.max(max_abs_diff(comm.coeff(k).re, 2.0 * f64::from(tables.eps3.get(i, j, k))));
            }
        }
    }
    out.push(InvariantResult::new("eps3/commutators", 9, eps3, 0.0));

    let mut psi = 0.0_f64;
    for i in 1..8 {
        for j in 1..8 {
            let comm = o_units[i].commutator(&o_units[j])?;
            for k in 1..8 {
                psi = psi.max(max_abs_diff(comm.coeff(k).re, 2.0 * f64::from(tables.psi.get(i, j, k))));
            }
        }
    }
    out.push(InvariantResult::new("psi/commutators", 49, psi, 0.0));

    let mut phi = 0.0_f64;
    let mut dual = 0.0_f64;
    for i in 1..8 {
        for j in 1..8 {
            for k in 1..8 {
                let assoc = o_units[i].associator(&o_units[j], &o_units[k])?;
                for l in 1..8 {
                    let v = f64::from(tables.phi.get(i, j, k, l));
                    phi = phi.max(max_abs_diff(assoc.coeff(l).re, 2.0 * v));
                    dual = dual.max(max_abs_diff(v, DUAL_ORIENTATION * dual_of_psi(&tables.psi, i, j, k, l)));
                }
            }
        }
    }
    out.push(InvariantResult::new("phi/associators", 343, phi, 0.0));
    out.push(InvariantResult::new("phi/dual-of-psi", 2401, dual, 0.0));

    for t in [
        &tables.eps3 as &dyn StructureTable,
        &tables.psi,
        &tables.phi,
        &tables.eps4,
        &tables.chi_left,
        &tables.chi_right,
    ] {
        let checked = t.index_tuples().len();
        out.push(InvariantResult::new(
            format!("{}/antisymmetry", t.name().as_str()),
            checked,
            t.antisymmetry_residual(),
            0.0,
        ));
    }

    let mut eps4 = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let want = f64::from(permutation_sign(&[a, b, c, d]));
                    eps4 = eps4.max(max_abs_diff(f64::from(tables.eps4.lower(a, b, c, d)), want));
                }
            }
        }
    }
    out.push(InvariantResult::new("eps4/permutation-symbol", 256, eps4, 0.0));

    let mut kron = 0.0_f64;
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    kron = kron.max(max_abs_diff(
                        kronecker_contraction(&tables.eps4, mu, nu, rho, sigma),
                        generalized_delta(mu, nu, rho, sigma),
                    ));
                }
            }
        }
    }
    out.push(InvariantResult::new("eps4/kronecker-identity", 256, kron, 0.0));

    out.push(InvariantResult::new(
        "chi/conjugate-pair",
        4096,
        tables.chi_left.conjugate_residual(&tables.chi_right),
        0.0,
    ));
    for chi in [&tables.chi_left, &tables.chi_right] {
        let name = chi.name().as_str();
        out.push(InvariantResult::new(
            format!("{name}/components"),
            343 + 2401,
            chi.component_relation_residual(&tables.psi, &tables.phi),
            0.0,
        ));
        out.push(InvariantResult::new(
            format!("{name}/restriction"),
            256,
            chi.restriction_residual(&tables.eps4),
            0.0,
        ));
    }
    Ok(())
}

fn inject(tables: &mut StructureTables, fault: Fault) {
    match fault {
        Fault::CorruptPsi => {
            let v = tables.psi.get(1, 2, 3);
            tables.psi.set(1, 2, 3, -v);
        }
        Fault::CorruptChi => {
            let v = tables.chi_left.get(0, 1, 2, 3);
            tables.chi_left.set(0, 1, 2, 3, -v);
        }
    }
}

/// Runs every algebra law on random samples plus every exhaustive table check.
pub fn verify_algebra(cfg: &VerifyConfig) -> Result<SuiteReport, TableError> {
    let mut tables = StructureTables::build()?;
    if let Some(f) = cfg.fault {
        inject(&mut tables, f);
    }
    let mut results = Vec::new();
    algebra_laws(cfg, &mut results);
    table_checks(&tables, &mut results)?;
    Ok(SuiteReport {
        seed: cfg.seed,
        samples: cfg.samples,
        results,
    })
}
