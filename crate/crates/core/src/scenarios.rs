//! Built-in frame fields with analytic first and second derivatives.
//!
//! | name               | dim | coordinates        | sampling region                              |
//! |--------------------|-----|--------------------|----------------------------------------------|
//! | `flat4`            | 4   | (t, x, y, z)       | `[-1, 1]^4`                                  |
//! | `schwarzschild`    | 4   | (t, r, θ, φ)       | r ∈ [3M, 20M], θ ∈ [0.3, π - 0.3]           |
//! | `de-sitter`        | 4   | (t, x, y, z)       | t ∈ [-5, 5], x, y, z ∈ [-10, 10]            |
//! | `flat8`            | 8   | x^0 .. x^7         | `[-1, 1]^8`                                  |
//! | `diagonal-warped8` | 8   | x^0 .. x^7         | `[-1, 1]^8`                                  |
//! | `random-smooth8`   | 8   | x^0 .. x^7         | `[-1, 1]^8`                                  |

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{DerivativeProvider, FrameField, FrameFunction, FrameJet};

/// Largest admissible perturbation amplitude for `random-smooth8`; below it the
/// frame stays strictly diagonally dominant on `[-1, 1]^8`.
pub const MAX_RANDOM_AMPLITUDE: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("parameter {name} = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Scenario {
    Flat4,
    Schwarzschild { mass: f64 },
    DeSitter { hubble: f64 },
    Flat8,
    DiagonalWarped8,
    RandomSmooth8 { amplitude: f64, seed: u64 },
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Scenario {
    pub const NAMES: [&'static str; 6] = [
        "flat4",
        "schwarzschild",
        "de-sitter",
        "flat8",
        "diagonal-warped8",
        "random-smooth8",
    ];

    /// Builds a scenario by name, with defaults for missing parameters
    /// (M = 1, H = 0.1, amplitude = 0.04, seed = 0).
    pub fn from_name(
        name: &str,
        mass: Option<f64>,
        hubble: Option<f64>,
        amplitude: Option<f64>,
        seed: Option<u64>,
    ) -> Result<Self, ScenarioError> {
        let s = match name {
            "flat4" | "flat-4d" => Scenario::Flat4,
            "schwarzschild" => Scenario::Schwarzschild {
                mass: mass.unwrap_or(1.0),
            },
            "de-sitter" | "desitter" => Scenario::DeSitter {
                hubble: hubble.unwrap_or(0.1),
            },
            "flat8" | "flat-8d" => Scenario::Flat8,
            "diagonal-warped8" | "diagonal-warped-8d" => Scenario::DiagonalWarped8,
            "random-smooth8" | "random-smooth-8d" => Scenario::RandomSmooth8 {
                amplitude: amplitude.unwrap_or(0.04),
                seed: seed.unwrap_or(0),
            },
            other => return Err(ScenarioError::Unknown(other.to_string())),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Flat4 => "flat4",
            Scenario::Schwarzschild { .. } => "schwarzschild",
            Scenario::DeSitter { .. } => "de-sitter",
            Scenario::Flat8 => "flat8",
            Scenario::DiagonalWarped8 => "diagonal-warped8",
            Scenario::RandomSmooth8 { .. } => "random-smooth8",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Scenario::Flat4 | Scenario::Schwarzschild { .. } | Scenario::DeSitter { .. } => 4,
            _ => 8,
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        match *self {
            Scenario::Schwarzschild { mass } if !(mass > 0.0 && mass.is_finite()) => Err(ScenarioError::Parameter {
                name: "mass",
                value: mass,
                range: "(0, inf)",
            }),
            Scenario::DeSitter { hubble } if !(hubble > 0.0 && hubble <= 100.0) => Err(ScenarioError::Parameter {
                name: "hubble",
                value: hubble,
                range: "(0, 100]",
            }),
            Scenario::RandomSmooth8 { amplitude, .. } if !(amplitude > 0.0 && amplitude < MAX_RANDOM_AMPLITUDE) => {
                Err(ScenarioError::Parameter {
                    name: "amplitude",
                    value: amplitude,
                    range: "(0, 0.05)",
                })
            }
            _ => Ok(()),
        }
    }

    pub fn frame_function(&self) -> Arc<dyn FrameFunction> {
        match *self {
            Scenario::Flat4 => Arc::new(FlatFrame { dim: 4 }),
            Scenario::Flat8 => Arc::new(FlatFrame { dim: 8 }),
            Scenario::Schwarzschild { mass } => Arc::new(SchwarzschildFrame { mass }),
            Scenario::DeSitter { hubble } => Arc::new(DeSitterFrame { hubble }),
            Scenario::DiagonalWarped8 => Arc::new(DiagonalWarpedFrame::standard()),
            Scenario::RandomSmooth8 { amplitude, seed } => Arc::new(PolynomialFrame::random(amplitude, seed)),
        }
    }

    pub fn frame_field(&self, provider: DerivativeProvider) -> FrameField {
        FrameField::new(self.frame_function(), provider)
    }

    /// Seeded sample points inside the scenario's regular region.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| match *self {
                Scenario::Schwarzschild { mass } => vec![
                    rng.random_range(-10.0..10.0),
                    rng.random_range(3.0 * mass..=20.0 * mass),
                    rng.random_range(0.3..PI - 0.3),
                    rng.random_range(0.0..2.0 * PI),
                ],
                Scenario::DeSitter { .. } => vec![
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                ],
                _ => (0..self.dim()).map(|_| rng.random_range(-1.0..1.0)).collect(),
            })
            .collect()
    }

    /// Whether `point` avoids the scenario's coordinate singularities.
    pub fn is_regular(&self, point: &[f64]) -> bool {
        if point.len() != self.dim() || point.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match *self {
            Scenario::Schwarzschild { mass } => point[1] > 2.0 * mass && point[2].sin().abs() > 1e-8,
            _ => true,
        }
    }
}

pub struct FlatFrame {
    pub dim: usize,
}

impl FrameFunction for FlatFrame {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, _x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect()
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let mut jet = FrameJet::zeros(self.dim);
        jet.value = self.value(x);
        Some(jet)
    }
}

/// diag(√f, 1/√f, r, r sinθ) with f = 1 - 2M/r, coordinates (t, r, θ, φ).
pub struct SchwarzschildFrame {
    pub mass: f64,
}

impl FrameFunction for SchwarzschildFrame {
    fn dim(&self) -> usize {
        4
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        let (r, th) = (x[1], x[2]);
        let s = (1.0 - 2.0 * self.mass / r).sqrt();
        let mut v = vec![0.0; 16];
        v[0] = s;
        v[5] = 1.0 / s;
        v[10] = r;
        v[15] = r * th.sin();
        v
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let m = self.mass;
        let (r, th) = (x[1], x[2]);
        let s = (1.0 - 2.0 * m / r).sqrt();
        let ds = m / (r * r * s);
        let dds = -2.0 * m / (r.powi(3) * s) - m * m / (r.powi(4) * s.powi(3));
        let (sin, cos) = th.sin_cos();
        let mut jet = FrameJet::zeros(4);
        jet.value = self.value(x);
        // √f
        jet.set_de(1, 0, 0, ds);
        jet.set_dde(1, 1, 0, 0, dds);
        // 1/√f
        jet.set_de(1, 1, 1, -ds / (s * s));
        jet.set_dde(1, 1, 1, 1, -dds / (s * s) + 2.0 * ds * ds / s.powi(3));
        // r
        jet.set_de(1, 2, 2, 1.0);
        // r sinθ
        jet.set_de(1, 3, 3, sin);
        jet.set_de(2, 3, 3, r * cos);
        jet.set_dde(1, 2, 3, 3, cos);
        jet.set_dde(2, 2, 3, 3, -r * sin);
        Some(jet)
    }
}

/// diag(1, e^{Ht}, e^{Ht}, e^{Ht}), coordinates (t, x, y, z).
pub struct DeSitterFrame {
    pub hubble: f64,
}

impl FrameFunction for DeSitterFrame {
    fn dim(&self) -> usize {
        4
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        let a = (self.hubble * x[0]).exp();
        let mut v = vec![0.0; 16];
        v[0] = 1.0;
        v[5] = a;
        v[10] = a;
        v[15] = a;
        v
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let h = self.hubble;
        let a = (h * x[0]).exp();
        let mut jet = FrameJet::zeros(4);
        jet.value = self.value(x);
        for k in 1..4 {
            jet.set_de(0, k, k, h * a);
            jet.set_dde(0, 0, k, k, h * h * a);
        }
        Some(jet)
    }
}

/// diag(f_0, ..., f_7) with f_a(x) = exp(α_a sin(k_a · x + φ_a)).
pub struct DiagonalWarpedFrame {
    amplitudes: [f64; 8],
    wavevectors: [[f64; 8]; 8],
    phases: [f64; 8],
}

impl DiagonalWarpedFrame {
    pub fn standard() -> Self {
        let mut amplitudes = [0.0; 8];
        let mut wavevectors = [[0.0; 8]; 8];
        let mut phases = [0.0; 8];
        for a in 0..8 {
            amplitudes[a] = 0.1 + 0.02 * a as f64;
            phases[a] = 0.3 * a as f64;
            for nu in 0..8 {
                wavevectors[a][nu] = 0.2 + 0.1 * ((a + 2 * nu) % 5) as f64;
            }
        }
        Self {
            amplitudes,
            wavevectors,
            phases,
        }
    }

    fn argument(&self, a: usize, x: &[f64]) -> f64 {
        self.wavevectors[a].iter().zip(x).map(|(k, v)| k * v).sum::<f64>() + self.phases[a]
    }
}

impl FrameFunction for DiagonalWarpedFrame {
    fn dim(&self) -> usize {
        8
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; 64];
        for a in 0..8 {
            v[a * 8 + a] = (self.amplitudes[a] * self.argument(a, x).sin()).exp();
        }
        v
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let mut jet = FrameJet::zeros(8);
        for a in 0..8 {
            let theta = self.argument(a, x);
            let (sin, cos) = theta.sin_cos();
            let alpha = self.amplitudes[a];
            let k = &self.wavevectors[a];
            let f = (alpha * sin).exp();
            jet.set_e(a, a, f);
            for nu in 0..8 {
                let ds_nu = alpha * cos * k[nu];
                jet.set_de(nu, a, a, f * ds_nu);
                for kappa in 0..=nu {
                    let ds_k = alpha * cos * k[kappa];
                    let dds = -alpha * sin * k[kappa] * k[nu];
                    jet.set_dde(kappa, nu, a, a, f * (ds_k * ds_nu + dds));
                }
            }
        }
        Some(jet)
    }
}

/// e^a_mu(x) = δ^a_mu + A (c^a_mu + b^a_{mu nu} x^nu + ½ q^a_{mu nu l} x^nu x^l),
/// with seeded coefficients c ∈ [-1, 1], b ∈ [-1/8, 1/8], q ∈ [-1/64, 1/64] (q symmetric in nu l).
pub struct PolynomialFrame {
    amplitude: f64,
    constant: Vec<f64>,
    linear: Vec<f64>,
    quadratic: Vec<f64>,
}

impl PolynomialFrame {
    pub fn random(amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_8D8D);
        let constant = (0..64).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let linear = (0..512).map(|_| rng.random_range(-1.0..=1.0) / 8.0).collect();
        let mut quadratic = vec![0.0; 4096];
        for am in 0..64 {
            for nu in 0..8 {
                for l in nu..8 {
                    let v = rng.random_range(-1.0..=1.0) / 64.0;
                    quadratic[(am * 8 + nu) * 8 + l] = v;
                    quadratic[(am * 8 + l) * 8 + nu] = v;
                }
            }
        }
        Self {
            amplitude,
            constant,
            linear,
            quadratic,
        }
    }

    fn entry(&self, am: usize, x: &[f64]) -> f64 {
        let mut p = self.constant[am];
        for nu in 0..8 {
            p += self.linear[am * 8 + nu] * x[nu];
            for l in 0..8 {
                p += 0.5 * self.quadratic[(am * 8 + nu) * 8 + l] * x[nu] * x[l];
            }
        }
        let diag = if am / 8 == am % 8 { 1.0 } else { 0.0 };
        diag + self.amplitude * p
    }
}

impl FrameFunction for PolynomialFrame {
    fn dim(&self) -> usize {
        8
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        (0..64).map(|am| self.entry(am, x)).collect()
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let mut jet = FrameJet::zeros(8);
        jet.value = self.value(x);
        for am in 0..64 {
            let (a, mu) = (am / 8, am % 8);
            for nu in 0..8 {
                let mut d = self.linear[am * 8 + nu];
                for l in 0..8 {
                    d += self.quadratic[(am * 8 + nu) * 8 + l] * x[l];
                }
                jet.set_de(nu, a, mu, self.amplitude * d);
                for kappa in 0..=nu {
                    jet.set_dde(kappa, nu, a, mu, self.amplitude * self.quadratic[(am * 8 + nu) * 8 + kappa]);
                }
            }
        }
        Some(jet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::finite_difference_jet;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn analytic_jets_match_finite_differences() {
        let cases = [
            (Scenario::Schwarzschild { mass: 1.0 }, vec![0.5, 5.0, 1.1, 0.3]),
            (Scenario::DeSitter { hubble: 0.7 }, vec![0.4, 1.0, -2.0, 3.0]),
            (Scenario::DiagonalWarped8, vec![0.1, -0.2, 0.3, -0.4, 0.5, -0.6, 0.7, -0.8]),
            (
                Scenario::RandomSmooth8 { amplitude: 0.04, seed: 3 },
                vec![0.9, -0.1, 0.2, 0.4, -0.7, 0.3, 0.0, 0.5],
            ),
        ];
        for (s, x) in cases {
            let f = s.frame_function();
            let analytic = f.jet(&x).unwrap();
            let fd = finite_difference_jet(&*f, &x, 1e-5, 1e-4);
            assert_eq!(analytic.value, fd.value, "{s}");
            assert!(max_diff(&analytic.d1, &fd.d1) < 1e-8, "{s} d1");
            assert!(max_diff(&analytic.d2, &fd.d2) < 1e-5, "{s} d2");
        }
    }

    #[test]
    fn names_round_trip_and_parameters_are_checked() {
        for name in Scenario::NAMES {
            let s = Scenario::from_name(name, None, None, None, None).unwrap();
            assert_eq!(s.name(), name);
        }
        assert!(Scenario::from_name("kerr", None, None, None, None).is_err());
        assert!(Scenario::from_name("schwarzschild", Some(-1.0), None, None, None).is_err());
        assert!(Scenario::from_name("random-smooth8", None, None, Some(0.2), None).is_err());
    }

    #[test]
    fn sampled_points_are_regular() {
        let s = Scenario::Schwarzschild { mass: 2.0 };
        let pts = s.sample_points(200, 11);
        assert!(pts.iter().all(|p| s.is_regular(p) && p[1] >= 6.0 && p[1] <= 40.0));
        assert!(!s.is_regular(&[0.0, 3.0, 0.0, 0.0]));
        assert_eq!(s.sample_points(5, 1), s.sample_points(5, 1));
    }
}
