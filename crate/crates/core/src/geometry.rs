//! Pointwise differential geometry of a frame field.
//!
//! Everything is evaluated at a single point from the frame jet (value, first
//! and second derivatives). Index conventions:
//!
//! * `christoffel(l, m, n)` is Γ^l_{mn};
//! * `riemann(r, s, m, n)` is R^r_{s m n} of the Levi-Civita connection,
//!   `∂_m Γ^r_{ns} - ∂_n Γ^r_{ms} + Γ^r_{mk} Γ^k_{ns} - Γ^r_{nk} Γ^k_{ms}`;
//! * `spin_connection(m, a, b)` is ω_m^{ab} = g^{rs} e^a_r ∇_m e^b_s;
//! * `curvature(m, n, a, b)` is R_{mn}^{ab} =
//!   ∂_m ω_n^{ab} - ∂_n ω_m^{ab} + ω_m^a_c ω_n^{cb} - ω_n^a_c ω_m^{cb}.
//!
//! With these conventions `e^m_a e^n_b R_{mn}^{ab}` is the Ricci scalar with
//! the sign that makes de Sitter space positive.

use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::eta;
use crate::frame::{FrameField, FrameJet};
use crate::tables::{permutation_sign, ChiTable};

/// Frames with |det e| below this are rejected.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate frame: |det e| = {det:e}")]
    DegenerateFrame { det: f64 },
    #[error("frame or its derivatives are not finite at this point")]
    NonFinite,
    #[error("metric does not have Lorentzian signature (-g = {minus_g:e})")]
    Signature { minus_g: f64 },
    #[error("point has {found} coordinates, frame needs {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("operation needs a {expected}-dimensional frame, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("frame provides no analytic derivatives")]
    NoAnalyticDerivatives,
}

#[derive(Clone, Debug)]
pub struct GeometryAtPoint {
    dim: usize,
    point: Vec<f64>,
    frame: Vec<f64>,
    inverse_frame: Vec<f64>,
    frame_det: f64,
    metric: Vec<f64>,
    inverse_metric: Vec<f64>,
    metric_derivative: Vec<f64>,
    sqrt_minus_g: f64,
    christoffel: Vec<f64>,
    riemann: Vec<f64>,
    spin_connection: Vec<f64>,
    curvature: Vec<f64>,
}

#[inline]
fn i2(n: usize, a: usize, b: usize) -> usize {
    a * n + b
}
#[inline]
fn i3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}
#[inline]
fn i4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// `out[i j k l] = Σ M(a,i) M(b,j) M(c,k) M(d,l) t[a b c d]`, one slot at a time.
pub fn transform_rank4<T>(t: &[T], n: usize, m: impl Fn(usize, usize) -> f64) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let mut cur = t.to_vec();
    let mut next = vec![T::default(); t.len()];
    for slot in 0..4 {
        let stride = n.pow(3 - slot as u32);
        for (flat, out) in next.iter_mut().enumerate() {
            let target = (flat / stride) % n;
            let base = flat - target * stride;
            let mut acc = T::default();
            for src in 0..n {
                let w = m(src, target);
                if w != 0.0 {
                    acc = acc + cur[base + src * stride] * w;
                }
            }
            *out = acc;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

impl GeometryAtPoint {
    pub fn compute(frame: &FrameField, point: &[f64]) -> Result<Self, GeometryError> {
        let jet = frame.jet_at(point)?;
        Self::from_jet(&jet, point)
    }

    pub fn from_jet(jet: &FrameJet, point: &[f64]) -> Result<Self, GeometryError> {
        let n = jet.dim;
        if jet.value.iter().chain(&jet.d1).chain(&jet.d2).any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let e = DMatrix::from_row_slice(n, n, &jet.value);
        let frame_det = e.determinant();
        if !frame_det.is_finite() || frame_det.abs() < DEGENERACY_THRESHOLD {
            return Err(GeometryError::DegenerateFrame { det: frame_det });
        }
        let einv = e
            .try_inverse()
            .ok_or(GeometryError::DegenerateFrame { det: frame_det })?;
        // inverse_frame[mu * n + a] = e^mu_a
        let inverse_frame: Vec<f64> = (0..n * n).map(|k| einv[(k / n, k % n)]).collect();
        let eta_d: Vec<f64> = (0..n).map(|a| eta(a, a)).collect();

        let mut metric = vec![0.0; n * n];
        let mut inverse_metric = vec![0.0; n * n];
        for mu in 0..n {
            for nu in 0..n {
                let mut g = 0.0;
                let mut gi = 0.0;
                for a in 0..n {
                    g += eta_d[a] * jet.e(a, mu) * jet.e(a, nu);
                    gi += eta_d[a] * inverse_frame[i2(n, mu, a)] * inverse_frame[i2(n, nu, a)];
                }
                metric[i2(n, mu, nu)] = g;
                inverse_metric[i2(n, mu, nu)] = gi;
            }
        }
        let minus_g = -DMatrix::from_row_slice(n, n, &metric).determinant();
        if minus_g.is_nan() || minus_g <= 0.0 {
            return Err(GeometryError::Signature { minus_g });
        }
        let sqrt_minus_g = minus_g.sqrt();

        // ∂_l g_{mn} and ∂_k ∂_l g_{mn}
        let mut dg = vec![0.0; n * n * n];
        let mut ddg = vec![0.0; n * n * n * n];
        for l in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        s += eta_d[a] * (jet.de(l, a, mu) * jet.e(a, nu) + jet.e(a, mu) * jet.de(l, a, nu));
                    }
                    dg[i3(n, l, mu, nu)] = s;
                    for k in 0..n {
                        let mut s2 = 0.0;
                        for a in 0..n {
                            s2 += eta_d[a]
                                * (jet.dde(k, l, a, mu) * jet.e(a, nu)
                                    + jet.de(l, a, mu) * jet.de(k, a, nu)
                                    + jet.de(k, a, mu) * jet.de(l, a, nu)
                                    + jet.e(a, mu) * jet.dde(k, l, a, nu));
                        }
                        ddg[i4(n, k, l, mu, nu)] = s2;
                    }
                }
            }
        }

        // ∂_k g^{mn} = -g^{ma} ∂_k g_{ab} g^{bn}
        let mut dginv = vec![0.0; n * n * n];
        for k in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            s += inverse_metric[i2(n, mu, a)] * dg[i3(n, k, a, b)] * inverse_metric[i2(n, b, nu)];
                        }
                    }
                    dginv[i3(n, k, mu, nu)] = -s;
                }
            }
        }

        // Γ^l_{mn} and ∂_k Γ^l_{mn}, via the lowered Γ_{r mn}
        let mut gamma_low = vec![0.0; n * n * n];
        let mut dgamma_low = vec![0.0; n * n * n * n];
        for r in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    gamma_low[i3(n, r, mu, nu)] =
                        0.5 * (dg[i3(n, mu, r, nu)] + dg[i3(n, nu, r, mu)] - dg[i3(n, r, mu, nu)]);
                    for k in 0..n {
                        dgamma_low[i4(n, k, r, mu, nu)] =
                            0.5 * (ddg[i4(n, k, mu, r, nu)] + ddg[i4(n, k, nu, r, mu)] - ddg[i4(n, k, r, mu, nu)]);
                    }
                }
            }
        }
        let mut christoffel = vec![0.0; n * n * n];
        let mut dchristoffel = vec![0.0; n * n * n * n];
        for l in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut s = 0.0;
                    for r in 0..n {
                        s += inverse_metric[i2(n, l, r)] * gamma_low[i3(n, r, mu, nu)];
                    }
                    christoffel[i3(n, l, mu, nu)] = s;
                    for k in 0..n {
                        let mut ds = 0.0;
                        for r in 0..n {
                            ds += dginv[i3(n, k, l, r)] * gamma_low[i3(n, r, mu, nu)]
                                + inverse_metric[i2(n, l, r)] * dgamma_low[i4(n, k, r, mu, nu)];
                        }
                        dchristoffel[i4(n, k, l, mu, nu)] = ds;
                    }
                }
            }
        }

        // R^r_{s m n}
        let mut riemann = vec![0.0; n * n * n * n];
        for r in 0..n {
            for s in 0..n {
                for mu in 0..n {
                    for nu in 0..n {
                        let mut v = dchristoffel[i4(n, mu, r, nu, s)] - dchristoffel[i4(n, nu, r, mu, s)];
                        for k in 0..n {
                            v += christoffel[i3(n, r, mu, k)] * christoffel[i3(n, k, nu, s)]
                                - christoffel[i3(n, r, nu, k)] * christoffel[i3(n, k, mu, s)];
                        }
                        riemann[i4(n, r, s, mu, nu)] = v;
                    }
                }
            }
        }

        // ∇_m e^b_s = ∂_m e^b_s - Γ^l_{ms} e^b_l and its derivative ∂_k ∇_m e^b_s
        let mut cov = vec![0.0; n * n * n];
        let mut dcov = vec![0.0; n * n * n * n];
        for mu in 0..n {
            for b in 0..n {
                for s in 0..n {
                    let mut v = jet.de(mu, b, s);
                    for l in 0..n {
                        v -= christoffel[i3(n, l, mu, s)] * jet.e(b, l);
                    }
                    cov[i3(n, mu, b, s)] = v;
                    for k in 0..n {
                        let mut dv = jet.dde(k, mu, b, s);
                        for l in 0..n {
                            dv -= dchristoffel[i4(n, k, l, mu, s)] * jet.e(b, l)
                                + christoffel[i3(n, l, mu, s)] * jet.de(k, b, l);
                        }
                        dcov[i4(n, k, mu, b, s)] = dv;
                    }
                }
            }
        }

        // e^{a s} = g^{rs} e^a_r and ∂_k of it
        let mut raised = vec![0.0; n * n];
        let mut draised = vec![0.0; n * n * n];
        for a in 0..n {
            for s in 0..n {
                let mut v = 0.0;
                for r in 0..n {
                    v += inverse_metric[i2(n, r, s)] * jet.e(a, r);
                }
                raised[i2(n, a, s)] = v;
                for k in 0..n {
                    let mut dv = 0.0;
                    for r in 0..n {
                        dv += dginv[i3(n, k, r, s)] * jet.e(a, r) + inverse_metric[i2(n, r, s)] * jet.de(k, a, r);
                    }
                    draised[i3(n, k, a, s)] = dv;
                }
            }
        }

        // ω_m^{ab} and ∂_k ω_m^{ab}
        let mut omega = vec![0.0; n * n * n];
        let mut domega = vec![0.0; n * n * n * n];
        for mu in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut v = 0.0;
                    for s in 0..n {
                        v += raised[i2(n, a, s)] * cov[i3(n, mu, b, s)];
                    }
                    omega[i3(n, mu, a, b)] = v;
                    for k in 0..n {
                        let mut dv = 0.0;
                        for s in 0..n {
                            dv += draised[i3(n, k, a, s)] * cov[i3(n, mu, b, s)]
                                + raised[i2(n, a, s)] * dcov[i4(n, k, mu, b, s)];
                        }
                        domega[i4(n, k, mu, a, b)] = dv;
                    }
                }
            }
        }

        // R_{mn}^{ab}
        let mut curvature = vec![0.0; n * n * n * n];
        for mu in 0..n {
            for nu in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut v = domega[i4(n, mu, nu, a, b)] - domega[i4(n, nu, mu, a, b)];
                        for c in 0..n {
                            v += eta_d[c]
                                * (omega[i3(n, mu, a, c)] * omega[i3(n, nu, c, b)]
                                    - omega[i3(n, nu, a, c)] * omega[i3(n, mu, c, b)]);
                        }
                        curvature[i4(n, mu, nu, a, b)] = v;
                    }
                }
            }
        }

        Ok(Self {
            dim: n,
            point: point.to_vec(),
            frame: jet.value.clone(),
            inverse_frame,
            frame_det,
            metric,
            inverse_metric,
            metric_derivative: dg,
            sqrt_minus_g,
            christoffel,
            riemann,
            spin_connection: omega,
            curvature,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    /// e^a_mu
    pub fn frame(&self, a: usize, mu: usize) -> f64 {
        self.frame[i2(self.dim, a, mu)]
    }

    /// e^mu_a
    pub fn inverse_frame(&self, mu: usize, a: usize) -> f64 {
        self.inverse_frame[i2(self.dim, mu, a)]
    }

    pub fn frame_det(&self) -> f64 {
        self.frame_det
    }

    /// +1 for orientation-preserving frames, -1 otherwise.
    pub fn orientation(&self) -> i8 {
        if self.frame_det > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn metric(&self, mu: usize, nu: usize) -> f64 {
        self.metric[i2(self.dim, mu, nu)]
    }

    pub fn inverse_metric(&self, mu: usize, nu: usize) -> f64 {
        self.inverse_metric[i2(self.dim, mu, nu)]
    }

    pub fn sqrt_minus_g(&self) -> f64 {
        self.sqrt_minus_g
    }

    pub fn christoffel(&self, l: usize, mu: usize, nu: usize) -> f64 {
        self.christoffel[i3(self.dim, l, mu, nu)]
    }

    pub fn riemann(&self, r: usize, s: usize, mu: usize, nu: usize) -> f64 {
        self.riemann[i4(self.dim, r, s, mu, nu)]
    }

    pub fn spin_connection(&self, mu: usize, a: usize, b: usize) -> f64 {
        self.spin_connection[i3(self.dim, mu, a, b)]
    }

    pub fn curvature(&self, mu: usize, nu: usize, a: usize, b: usize) -> f64 {
        self.curvature[i4(self.dim, mu, nu, a, b)]
    }

    /// Raw R_{mn}^{ab}, index `((m*n + n')*n + a)*n + b`.
    pub fn curvature_slice(&self) -> &[f64] {
        &self.curvature
    }

    /// Spin curvature with both frame indices converted to coordinate indices:
    /// R_{mn}^{rs} = e^r_a e^s_b R_{mn}^{ab}.
    pub fn curvature_coordinate(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n.pow(4)];
        for mu in 0..n {
            for nu in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let mut v = 0.0;
                        for a in 0..n {
                            let ra = self.inverse_frame(r, a);
                            if ra == 0.0 {
                                continue;
                            }
                            for b in 0..n {
                                v += ra * self.inverse_frame(s, b) * self.curvature(mu, nu, a, b);
                            }
                        }
                        out[i4(n, mu, nu, r, s)] = v;
                    }
                }
            }
        }
        out
    }

    /// Spin curvature with all indices in the frame: R_{cd}^{ab} = e^m_c e^n_d R_{mn}^{ab}.
    pub fn curvature_frame(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n.pow(4)];
        for c in 0..n {
            for d in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut v = 0.0;
                        for mu in 0..n {
                            let mc = self.inverse_frame(mu, c);
                            if mc == 0.0 {
                                continue;
                            }
                            for nu in 0..n {
                                v += mc * self.inverse_frame(nu, d) * self.curvature(mu, nu, a, b);
                            }
                        }
                        out[i4(n, c, d, a, b)] = v;
                    }
                }
            }
        }
        out
    }

    /// Levi-Civita Riemann tensor in the double-dual arrangement R_{mn}^{rs} = g^{sl} R^r_{l m n}.
    pub fn riemann_two_form(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n.pow(4)];
        for mu in 0..n {
            for nu in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let mut v = 0.0;
                        for l in 0..n {
                            v += self.inverse_metric(s, l) * self.riemann(r, l, mu, nu);
                        }
                        out[i4(n, mu, nu, r, s)] = v;
                    }
                }
            }
        }
        out
    }

    /// Ricci scalar from the spin curvature, e^m_a e^n_b R_{mn}^{ab}.
    pub fn ricci_scalar_spin(&self) -> f64 {
        let n = self.dim;
        let mut r = 0.0;
        for mu in 0..n {
            for nu in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        r += self.inverse_frame(mu, a) * self.inverse_frame(nu, b) * self.curvature(mu, nu, a, b);
                    }
                }
            }
        }
        r
    }

    /// Ricci scalar of the Levi-Civita connection, g^{sn} R^r_{s r n}.
    pub fn ricci_scalar_metric(&self) -> f64 {
        let n = self.dim;
        let mut r = 0.0;
        for s in 0..n {
            for nu in 0..n {
                let gi = self.inverse_metric(s, nu);
                if gi == 0.0 {
                    continue;
                }
                for rho in 0..n {
                    r += gi * self.riemann(rho, s, rho, nu);
                }
            }
        }
        r
    }

    /// Largest frame-index curvature component; its square root is an inverse length.
    pub fn curvature_scale_squared(&self) -> f64 {
        self.curvature_frame().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Spin curvature with every index lowered and in coordinates:
    /// R_{mn rs} = e^a_r e^b_s η_aa η_bb R_{mn}^{ab}.
    pub fn curvature_lowered(&self) -> Vec<f64> {
        let n = self.dim;
        let mut low_frame = vec![0.0; n.pow(4)];
        for mu in 0..n {
            for nu in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        low_frame[i4(n, mu, nu, a, b)] = eta(a, a) * eta(b, b) * self.curvature(mu, nu, a, b);
                    }
                }
            }
        }
        let mut out = vec![0.0; n.pow(4)];
        for mu in 0..n {
            for nu in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let mut v = 0.0;
                        for a in 0..n {
                            let ar = self.frame(a, r);
                            if ar == 0.0 {
                                continue;
                            }
                            for b in 0..n {
                                v += ar * self.frame(b, s) * low_frame[i4(n, mu, nu, a, b)];
                            }
                        }
                        out[i4(n, mu, nu, r, s)] = v;
                    }
                }
            }
        }
        out
    }

    /// max |R_{mnrs} - R_{rsmn}| relative to max |R_{mnrs}| (0 when flat).
    pub fn pair_symmetry_residual(&self) -> f64 {
        let n = self.dim;
        let r = self.curvature_lowered();
        let scale = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0_f64;
        for mu in 0..n {
            for nu in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        worst = worst.max((r[i4(n, mu, nu, a, b)] - r[i4(n, a, b, mu, nu)]).abs());
                    }
                }
            }
        }
        relative(worst, scale)
    }

    /// max |R_{mnrs} + R_{nrms} + R_{rmns}| relative to max |R_{mnrs}|.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let r = self.curvature_lowered();
        let scale = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0_f64;
        for mu in 0..n {
            for nu in 0..n {
                for rho in 0..n {
                    for s in 0..n {
                        let v = r[i4(n, mu, nu, rho, s)] + r[i4(n, nu, rho, mu, s)] + r[i4(n, rho, mu, nu, s)];
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        relative(worst, scale)
    }

    /// Largest |ω_m^{ab} + ω_m^{ba}|.
    pub fn spin_antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for mu in 0..n {
            for a in 0..n {
                for b in 0..n {
                    worst = worst.max((self.spin_connection(mu, a, b) + self.spin_connection(mu, b, a)).abs());
                }
            }
        }
        worst
    }

    /// Largest |∇_l g_{mn}|.
    pub fn metric_compatibility_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for l in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut v = self.metric_derivative[i3(n, l, mu, nu)];
                    for k in 0..n {
                        v -= self.christoffel(k, l, mu) * self.metric(k, nu) + self.christoffel(k, l, nu) * self.metric(mu, k);
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    /// Largest |g^{mr} g_{rn} - δ^m_n|.
    pub fn inverse_metric_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for mu in 0..n {
            for nu in 0..n {
                let v: f64 = (0..n).map(|r| self.inverse_metric(mu, r) * self.metric(r, nu)).sum();
                let want = if mu == nu { 1.0 } else { 0.0 };
                worst = worst.max((v - want).abs());
            }
        }
        worst
    }
}

pub(crate) fn relative(delta: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        delta / scale
    } else if delta == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Frame metric pieces: g_{mn}, g^{mn} and √(-g).
pub fn metric_at(frame: &FrameField, point: &[f64]) -> Result<GeometryAtPoint, GeometryError> {
    GeometryAtPoint::compute(frame, point)
}

/// Γ^l_{mn}, flattened `(l*n + m)*n + n'`.
pub fn christoffel_at(frame: &FrameField, point: &[f64]) -> Result<Vec<f64>, GeometryError> {
    Ok(GeometryAtPoint::compute(frame, point)?.christoffel)
}

/// ω_m^{ab}, flattened `(m*n + a)*n + b`.
pub fn spin_connection_at(frame: &FrameField, point: &[f64]) -> Result<Vec<f64>, GeometryError> {
    Ok(GeometryAtPoint::compute(frame, point)?.spin_connection)
}

/// R_{mn}^{ab}, flattened `((m*n + n')*n + a)*n + b`.
pub fn curvature_at(frame: &FrameField, point: &[f64]) -> Result<Vec<f64>, GeometryError> {
    Ok(GeometryAtPoint::compute(frame, point)?.curvature)
}

/// Four-dimensional Levi-Civita tensor densities at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviCivitaDensity {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LeviCivitaDensity {
    /// ε_{mnrs} = +(-g)^{1/2} [mnrs], ε^{mnrs} = -(-g)^{-1/2} [mnrs].
    pub fn from_sqrt_minus_g(sqrt_minus_g: f64) -> Self {
        let mut lower = vec![0.0; 256];
        let mut upper = vec![0.0; 256];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let s = f64::from(permutation_sign(&[a, b, c, d]));
                        lower[i4(4, a, b, c, d)] = sqrt_minus_g * s;
                        upper[i4(4, a, b, c, d)] = -s / sqrt_minus_g;
                    }
                }
            }
        }
        Self { lower, upper }
    }

    /// Frame pullbacks ε_{mnrs} = e^a_m ... ε_abcd and ε^{mnrs} = e^m_a ... ε^{abcd}.
    pub fn from_frame(geometry: &GeometryAtPoint) -> Result<Self, GeometryError> {
        require_dim(geometry, 4)?;
        let mut symbol_lower = vec![0.0; 256];
        let mut symbol_upper = vec![0.0; 256];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let s = f64::from(permutation_sign(&[a, b, c, d]));
                        symbol_lower[i4(4, a, b, c, d)] = s;
                        symbol_upper[i4(4, a, b, c, d)] = s * eta(a, a) * eta(b, b) * eta(c, c) * eta(d, d);
                    }
                }
            }
        }
        let lower = transform_rank4(&symbol_lower, 4, |a, mu| geometry.frame(a, mu));
        let upper = transform_rank4(&symbol_upper, 4, |a, mu| geometry.inverse_frame(mu, a));
        Ok(Self { lower, upper })
    }

    pub fn lower(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.lower[i4(4, a, b, c, d)]
    }

    pub fn upper(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.upper[i4(4, a, b, c, d)]
    }

    /// -1/2 ε^{ab mu nu} ε_{ab rho sigma}.
    pub fn kronecker_contraction(&self, mu: usize, nu: usize, rho: usize, sigma: usize) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.upper(a, b, mu, nu) * self.lower(a, b, rho, sigma);
            }
        }
        -0.5 * s
    }

    /// Largest relative entry-wise difference from another density.
    pub fn max_relative_difference(&self, other: &Self) -> f64 {
        let diff = |x: &[f64], y: &[f64]| {
            let scale = x.iter().chain(y).fold(0.0_f64, |m, v| m.max(v.abs()));
            let worst = x.iter().zip(y).fold(0.0_f64, |m, (p, q)| m.max((p - q).abs()));
            relative(worst, scale)
        };
        diff(&self.lower, &other.lower).max(diff(&self.upper, &other.upper))
    }
}

fn require_dim(geometry: &GeometryAtPoint, dim: usize) -> Result<(), GeometryError> {
    if geometry.dim() == dim {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: geometry.dim(),
        })
    }
}

/// Levi-Civita tensor densities built from √(-g).
pub fn levi_civita_density_at(geometry: &GeometryAtPoint) -> Result<LeviCivitaDensity, GeometryError> {
    require_dim(geometry, 4)?;
    Ok(LeviCivitaDensity::from_sqrt_minus_g(geometry.sqrt_minus_g()))
}

/// χ pulled back to coordinate indices at one point of an eight-dimensional frame.
#[derive(Clone, Debug)]
pub struct ChiCoordinate {
    chirality: crate::algebra::Chirality,
    lower: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl ChiCoordinate {
    pub fn chirality(&self) -> crate::algebra::Chirality {
        self.chirality
    }

    pub fn lower(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.lower[i4(8, a, b, c, d)]
    }

    pub fn upper(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.upper[i4(8, a, b, c, d)]
    }

    pub fn lower_slice(&self) -> &[Complex64] {
        &self.lower
    }

    pub fn upper_slice(&self) -> &[Complex64] {
        &self.upper
    }
}

/// χ_{mnrs} = E^a_m E^b_n E^c_r E^d_s χ_abcd and χ^{mnrs} = E^m_a ... χ^{abcd}.
pub fn chi_coordinate_at(geometry: &GeometryAtPoint, chi: &ChiTable) -> Result<ChiCoordinate, GeometryError> {
    require_dim(geometry, 8)?;
    let frame_upper: Vec<Complex64> = (0..4096)
        .map(|k| {
            let (a, b, c, d) = (k / 512, (k / 64) % 8, (k / 8) % 8, k % 8);
            chi.upper(a, b, c, d)
        })
        .collect();
    let lower = transform_rank4(chi.as_slice(), 8, |a, mu| geometry.frame(a, mu));
    let upper = transform_rank4(&frame_upper, 8, |a, mu| geometry.inverse_frame(mu, a));
    Ok(ChiCoordinate {
        chirality: chi.chirality(),
        lower,
        upper,
    })
}
