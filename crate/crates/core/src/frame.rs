//! Frame fields (vierbein / achtbein) and their derivative providers.
//!
//! A frame is stored row-major with the frame index first: `value[a * n + mu]`
//! is `e^a_mu`. First derivatives are laid out as `d1[(nu * n + a) * n + mu]`
//! = `∂_nu e^a_mu`, second derivatives as `d2[((kappa * n + nu) * n + a) * n + mu]`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::GeometryError;

/// Frame value plus first and second coordinate derivatives at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameJet {
    pub dim: usize,
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl FrameJet {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            value: vec![0.0; dim * dim],
            d1: vec![0.0; dim * dim * dim],
            d2: vec![0.0; dim * dim * dim * dim],
        }
    }

    #[inline]
    pub fn e(&self, a: usize, mu: usize) -> f64 {
        self.value[a * self.dim + mu]
    }

    #[inline]
    pub fn de(&self, nu: usize, a: usize, mu: usize) -> f64 {
        let n = self.dim;
        self.d1[(nu * n + a) * n + mu]
    }

    #[inline]
    pub fn dde(&self, kappa: usize, nu: usize, a: usize, mu: usize) -> f64 {
        let n = self.dim;
        self.d2[((kappa * n + nu) * n + a) * n + mu]
    }

    pub fn set_e(&mut self, a: usize, mu: usize, v: f64) {
        self.value[a * self.dim + mu] = v;
    }

    pub fn set_de(&mut self, nu: usize, a: usize, mu: usize, v: f64) {
        let n = self.dim;
        self.d1[(nu * n + a) * n + mu] = v;
    }

    /// Sets `∂_kappa ∂_nu e^a_mu` and its mirror `∂_nu ∂_kappa e^a_mu`.
    pub fn set_dde(&mut self, kappa: usize, nu: usize, a: usize, mu: usize, v: f64) {
        let n = self.dim;
        self.d2[((kappa * n + nu) * n + a) * n + mu] = v;
        self.d2[((nu * n + kappa) * n + a) * n + mu] = v;
    }
}

/// A smooth frame field `x -> e^a_mu(x)`.
pub trait FrameFunction: Send + Sync {
    fn dim(&self) -> usize;

    /// Row-major `e^a_mu` at `x`.
    fn value(&self, x: &[f64]) -> Vec<f64>;

    /// Analytic value and derivatives, if the frame provides them.
    fn jet(&self, _x: &[f64]) -> Option<FrameJet> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivativeProvider {
    Analytic,
    /// Central differences: step `h` for first derivatives, step `h2` for the
    /// second derivatives (central differences of the first-derivative stencil).
    FiniteDifference { h: f64, h2: f64 },
}

impl DerivativeProvider {
    pub const DEFAULT_H: f64 = 1e-5;
    pub const DEFAULT_H2: f64 = 1e-4;

    pub fn finite_difference() -> Self {
        DerivativeProvider::FiniteDifference {
            h: Self::DEFAULT_H,
            h2: Self::DEFAULT_H2,
        }
    }

    /// Same step for first and second derivatives.
    pub fn finite_difference_uniform(h: f64) -> Self {
        DerivativeProvider::FiniteDifference { h, h2: h }
    }
}

impl fmt::Display for DerivativeProvider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivativeProvider::Analytic => f.write_str("analytic"),
            DerivativeProvider::FiniteDifference { h, h2 } => write!(f, "fd(h={h:e}, h2={h2:e})"),
        }
    }
}

#[derive(Clone)]
pub struct FrameField {
    function: Arc<dyn FrameFunction>,
    provider: DerivativeProvider,
}

impl fmt::Debug for FrameField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameField")
            .field("dim", &self.dim())
            .field("provider", &self.provider)
            .finish()
    }
}

impl FrameField {
    pub fn new(function: Arc<dyn FrameFunction>, provider: DerivativeProvider) -> Self {
        Self { function, provider }
    }

    pub fn dim(&self) -> usize {
        self.function.dim()
    }

    pub fn provider(&self) -> DerivativeProvider {
        self.provider
    }

    pub fn function(&self) -> &Arc<dyn FrameFunction> {
        &self.function
    }

    pub fn with_provider(&self, provider: DerivativeProvider) -> Self {
        Self {
            function: Arc::clone(&self.function),
            provider,
        }
    }

    pub fn jet_at(&self, point: &[f64]) -> Result<FrameJet, GeometryError> {
        let n = self.dim();
        if point.len() != n {
            return Err(GeometryError::PointDimension {
                expected: n,
                found: point.len(),
            });
        }
        match self.provider {
            DerivativeProvider::Analytic => self
                .function
                .jet(point)
                .ok_or(GeometryError::NoAnalyticDerivatives),
            DerivativeProvider::FiniteDifference { h, h2 } => Ok(finite_difference_jet(&*self.function, point, h, h2)),
        }
    }
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(k, d) in moves {
        y[k] += d;
    }
    y
}

/// Value-only finite differences. The second-derivative stencil is the
/// product of two central stencils, so it is symmetric in its two indices.
pub fn finite_difference_jet(f: &dyn FrameFunction, x: &[f64], h: f64, h2: f64) -> FrameJet {
    let n = f.dim();
    let mut jet = FrameJet::zeros(n);
    jet.value = f.value(x);
    let nn = n * n;
    for nu in 0..n {
        let plus = f.value(&shifted(x, &[(nu, h)]));
        let minus = f.value(&shifted(x, &[(nu, -h)]));
        for k in 0..nn {
            jet.d1[nu * nn + k] = (plus[k] - minus[k]) / (2.0 * h);
        }
    }
    let s = h2;
    for kappa in 0..n {
        for nu in kappa..n {
            let pp = f.value(&shifted(x, &[(kappa, s), (nu, s)]));
            let pm = f.value(&shifted(x, &[(kappa, s), (nu, -s)]));
            let mp = f.value(&shifted(x, &[(kappa, -s), (nu, s)]));
            let mm = f.value(&shifted(x, &[(kappa, -s), (nu, -s)]));
            for a in 0..n {
                for mu in 0..n {
                    let k = a * n + mu;
                    let v = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * s * s);
                    jet.set_dde(kappa, nu, a, mu, v);
                }
            }
        }
    }
    jet
}

/// Constant local Lorentz transformation `Λ^a_b` acting on the frame index.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalLorentz {
    dim: usize,
    matrix: Vec<f64>,
}

impl LocalLorentz {
    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![0.0; dim * dim];
        for a in 0..dim {
            matrix[a * dim + a] = 1.0;
        }
        Self { dim, matrix }
    }

    /// Rotation by `angle` in the spatial plane `(i, j)`, `1 <= i, j < dim`.
    pub fn rotation(dim: usize, i: usize, j: usize, angle: f64) -> Self {
        assert!(i != j && i > 0 && j > 0 && i < dim && j < dim, "spatial plane required");
        let mut out = Self::identity(dim);
        let (s, c) = angle.sin_cos();
        out.matrix[i * dim + i] = c;
        out.matrix[i * dim + j] = -s;
        out.matrix[j * dim + i] = s;
        out.matrix[j * dim + j] = c;
        out
    }

    /// Boost with the given rapidity along spatial axis `axis`.
    pub fn boost(dim: usize, axis: usize, rapidity: f64) -> Self {
        assert!(axis > 0 && axis < dim, "boost axis must be spatial");
        let mut out = Self::identity(dim);
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        out.matrix[0] = ch;
        out.matrix[axis] = sh;
        out.matrix[axis * dim] = sh;
        out.matrix[axis * dim + axis] = ch;
        out
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut matrix = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                matrix[a * n + b] = (0..n).map(|c| self.matrix[a * n + c] * other.matrix[c * n + b]).sum();
            }
        }
        Self { dim: n, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.dim + b]
    }

    /// Largest entry of `Λ^T η Λ - η`.
    pub fn lorentz_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for b in 0..n {
            for c in 0..n {
                let v: f64 = (0..n)
                    .map(|a| crate::algebra::eta(a, a) * self.get(a, b) * self.get(a, c))
                    .sum();
                worst = worst.max((v - crate::algebra::eta(b, c)).abs());
            }
        }
        worst
    }

    fn apply(&self, m: &[f64], n: usize) -> Vec<f64> {
        // m is laid out [..][a][mu] blocks of n*n
        let mut out = vec![0.0; m.len()];
        for (block_in, block_out) in m.chunks(n * n).zip(out.chunks_mut(n * n)) {
            for a in 0..n {
                for mu in 0..n {
                    block_out[a * n + mu] = (0..n).map(|b| self.get(a, b) * block_in[b * n + mu]).sum();
                }
            }
        }
        out
    }
}

/// `e'^a_mu = Λ^a_b e^b_mu` for a constant `Λ`.
pub struct LorentzRotatedFrame {
    inner: Arc<dyn FrameFunction>,
    lorentz: LocalLorentz,
}

impl LorentzRotatedFrame {
    pub fn new(inner: Arc<dyn FrameFunction>, lorentz: LocalLorentz) -> Self {
        assert_eq!(inner.dim(), lorentz.dim());
        Self { inner, lorentz }
    }
}

impl FrameFunction for LorentzRotatedFrame {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.lorentz.apply(&self.inner.value(x), self.dim())
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let jet = self.inner.jet(x)?;
        let n = self.dim();
        Some(FrameJet {
            dim: n,
            value: self.lorentz.apply(&jet.value, n),
            d1: self.lorentz.apply(&jet.d1, n),
            d2: self.lorentz.apply(&jet.d2, n),
        })
    }
}

/// The frame seen in rescaled coordinates `x' = λ x`, transformed as a covector:
/// `e'^a_mu(x') = e^a_mu(x' / λ) / λ`.
pub struct CoordinateScaledFrame {
    inner: Arc<dyn FrameFunction>,
    factor: f64,
}

impl CoordinateScaledFrame {
    pub fn new(inner: Arc<dyn FrameFunction>, factor: f64) -> Self {
        assert!(factor != 0.0, "scale factor must be nonzero");
        Self { inner, factor }
    }

    fn original_point(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v / self.factor).collect()
    }
}

impl FrameFunction for CoordinateScaledFrame {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        let l = self.factor;
        self.inner.value(&self.original_point(x)).into_iter().map(|v| v / l).collect()
    }

    fn jet(&self, x: &[f64]) -> Option<FrameJet> {
        let jet = self.inner.jet(&self.original_point(x))?;
        let l = self.factor;
        Some(FrameJet {
            dim: jet.dim,
            value: jet.value.iter().map(|v| v / l).collect(),
            d1: jet.d1.iter().map(|v| v / (l * l)).collect(),
            d2: jet.d2.iter().map(|v| v / (l * l * l)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic;

    // e^a_mu = δ^a_mu (1 + x_a^2) + x_0 x_1 in row 0
    impl FrameFunction for Quadratic {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> Vec<f64> {
            vec![1.0 + x[0] * x[0] + x[0] * x[1], x[0] * x[1], 0.0, 1.0 + x[1] * x[1]]
        }
    }

    #[test]
    fn finite_differences_are_exact_on_quadratics() {
        let x = [0.3, -0.7];
        let jet = finite_difference_jet(&Quadratic, &x, 1e-3, 1e-3);
        // ∂_0 e^0_0 = 2 x0 + x1, ∂_1 e^0_0 = x0
        assert!((jet.de(0, 0, 0) - (2.0 * x[0] + x[1])).abs() < 1e-9);
        assert!((jet.de(1, 0, 0) - x[0]).abs() < 1e-9);
        assert!((jet.dde(0, 0, 0, 0) - 2.0).abs() < 1e-6);
        assert!((jet.dde(0, 1, 0, 0) - 1.0).abs() < 1e-6);
        assert_eq!(jet.dde(0, 1, 0, 1), jet.dde(1, 0, 0, 1));
        assert!((jet.dde(1, 1, 1, 1) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn lorentz_transforms_preserve_eta() {
        let l = LocalLorentz::boost(4, 1, 0.7).compose(&LocalLorentz::rotation(4, 2, 3, 1.1));
        assert!(l.lorentz_residual() < 1e-14);
        let l8 = LocalLorentz::boost(8, 5, -0.4).compose(&LocalLorentz::rotation(8, 1, 7, 0.3));
        assert!(l8.lorentz_residual() < 1e-14);
    }

    #[test]
    fn missing_analytic_derivatives_is_an_error() {
        let field = FrameField::new(Arc::new(Quadratic), DerivativeProvider::Analytic);
        assert!(matches!(field.jet_at(&[0.0, 0.0]), Err(GeometryError::NoAnalyticDerivatives)));
        assert!(matches!(
            field.jet_at(&[0.0]),
            Err(GeometryError::PointDimension { expected: 2, found: 1 })
        ));
    }
}
