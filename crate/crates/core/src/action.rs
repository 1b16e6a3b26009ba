//! Pointwise Lagrangian densities.
//!
//! All three forms share the prefactor `-kappa / 4` where `kappa = c^4 / 16πG`:
//!
//! * double dual (4D): `L = -kappa/4 ε^{ab mn} R_{mn}^{rs} ε_{rs ab}` with the
//!   √(-g) tensor densities and the Levi-Civita Riemann tensor; integrand `L √(-g)`;
//! * vierbein (4D): the same contraction with frame-pulled densities and the
//!   spin-connection curvature `e^r_a e^s_b R_{mn}^{ab}`; integrand `L e`;
//! * double χ-dual (8D): `L = -kappa/4 χ_L^{ab mn} E^r_a E^s_b R_{mn}^{ab} χ^R_{rs ab}`;
//!   integrand `L E`, complex in general.
//!
//! The 4D oracle is `kappa R √(-g)`. The vierbein integrand carries the sign of
//! `e`; for orientation-reversing frames it is `-kappa R √(-g)` and the report's
//! `orientation` field is -1.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::frame::{FrameField, LocalLorentz, LorentzRotatedFrame};
use crate::geometry::{chi_coordinate_at, relative, GeometryAtPoint, GeometryError, LeviCivitaDensity};
use crate::parallel::{map_indexed, Execution};
use crate::tables::{ChiTable, StructureTables};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("coupling kappa must be positive and finite, got {0}")]
    InvalidCoupling(f64),
    #[error("form {form} needs a {expected}-dimensional frame, got {found}")]
    DimensionMismatch {
        form: LagrangianForm,
        expected: usize,
        found: usize,
    },
    #[error("unknown Lagrangian form `{0}` (expected dd4, vierbein4, eh4 or chi8)")]
    UnknownForm(String),
}

impl ActionError {
    /// True when the failure comes from a singular or non-Lorentzian frame.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            ActionError::Geometry(
                GeometryError::DegenerateFrame { .. } | GeometryError::Signature { .. } | GeometryError::NonFinite
            )
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConstants {
    /// c^4 / (16 π G); 1 in geometric units.
    pub kappa: f64,
}

impl Default for CouplingConstants {
    fn default() -> Self {
        Self { kappa: 1.0 }
    }
}

impl CouplingConstants {
    pub fn new(kappa: f64) -> Result<Self, ActionError> {
        if kappa > 0.0 && kappa.is_finite() {
            Ok(Self { kappa })
        } else {
            Err(ActionError::InvalidCoupling(kappa))
        }
    }

    /// The `c^4 / 64πG` prefactor.
    fn quarter(&self) -> f64 {
        self.kappa / 4.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LagrangianForm {
    #[serde(rename = "dd4")]
    DoubleDual4,
    #[serde(rename = "vierbein4")]
    Vierbein4,
    #[serde(rename = "eh4")]
    StandardEh4,
    #[serde(rename = "chi8")]
    ChiDual8,
}

impl LagrangianForm {
    pub fn dim(self) -> usize {
        match self {
            LagrangianForm::ChiDual8 => 8,
            _ => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LagrangianForm::DoubleDual4 => "dd4",
            LagrangianForm::Vierbein4 => "vierbein4",
            LagrangianForm::StandardEh4 => "eh4",
            LagrangianForm::ChiDual8 => "chi8",
        }
    }
}

impl fmt::Display for LagrangianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LagrangianForm {
    type Err = ActionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dd4" => Ok(LagrangianForm::DoubleDual4),
            "vierbein4" => Ok(LagrangianForm::Vierbein4),
            "eh4" => Ok(LagrangianForm::StandardEh4),
            "chi8" => Ok(LagrangianForm::ChiDual8),
            other => Err(ActionError::UnknownForm(other.to_string())),
        }
    }
}

pub(crate) fn serialize_complex<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Parts {
        re: f64,
        im: f64,
    }
    Parts { re: c.re, im: c.im }.serialize(s)
}

/// One pointwise evaluation of a Lagrangian integrand against its oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LagrangianReport {
    pub form: LagrangianForm,
    pub point: Vec<f64>,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub oracle: f64,
    pub abs_delta: f64,
    pub rel_delta: f64,
    pub imag_magnitude: f64,
    /// |Im| / max(|Re|, scale).
    pub imag_ratio: f64,
    /// Sign of the frame determinant.
    pub orientation: i8,
    /// kappa |e| max |R_cd^ab|: the natural size of the integrand at this point.
    pub scale: f64,
}

impl LagrangianReport {
    fn new(form: LagrangianForm, geometry: &GeometryAtPoint, value: Complex64, oracle: Complex64, kappa: f64) -> Self {
        let scale = kappa * geometry.frame_det().abs() * geometry.curvature_scale_squared();
        let abs_delta = (value - oracle).norm();
        let rel_delta = relative(abs_delta, value.norm().max(oracle.norm()).max(scale));
        Self {
            form,
            point: geometry.point().to_vec(),
            value,
            oracle: oracle.re,
            abs_delta,
            rel_delta,
            imag_magnitude: value.im.abs(),
            imag_ratio: relative(value.im.abs(), value.re.abs().max(scale)),
            orientation: geometry.orientation(),
            scale,
        }
    }
}

fn require(form: LagrangianForm, geometry: &GeometryAtPoint) -> Result<(), ActionError> {
    if geometry.dim() == form.dim() {
        Ok(())
    } else {
        Err(ActionError::DimensionMismatch {
            form,
            expected: form.dim(),
            found: geometry.dim(),
        })
    }
}

/// Σ ε^{ab mn} R_{mn}^{rs} ε_{rs ab} over all six indices, via the 4^4 pair table.
fn double_dual_contraction(eps: &LeviCivitaDensity, two_form: &[f64]) -> f64 {
    let mut total = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    let r = two_form[((mu * 4 + nu) * 4 + rho) * 4 + sigma];
                    if r == 0.0 {
                        continue;
                    }
                    let mut t = 0.0;
                    for a in 0..4 {
                        for b in 0..4 {
                            t += eps.upper(a, b, mu, nu) * eps.lower(rho, sigma, a, b);
                        }
                    }
                    total += t * r;
                }
            }
        }
    }
    total
}

fn oracle_density(geometry: &GeometryAtPoint, constants: &CouplingConstants) -> f64 {
    constants.kappa * geometry.ricci_scalar_metric() * geometry.sqrt_minus_g()
}

/// Double-dual integrand `L_EH √(-g)`.
pub fn lagrangian_double_dual_4d(
    geometry: &GeometryAtPoint,
    constants: &CouplingConstants,
) -> Result<LagrangianReport, ActionError> {
    require(LagrangianForm::DoubleDual4, geometry)?;
    let eps = crate::geometry::levi_civita_density_at(geometry)?;
    let l = -constants.quarter() * double_dual_contraction(&eps, &geometry.riemann_two_form());
    let value = Complex64::new(l * geometry.sqrt_minus_g(), 0.0);
    let oracle = Complex64::new(oracle_density(geometry, constants), 0.0);
    Ok(LagrangianReport::new(LagrangianForm::DoubleDual4, geometry, value, oracle, constants.kappa))
}

/// Vierbein integrand `L e`, with the spin-connection curvature and frame-pulled densities.
pub fn lagrangian_vierbein_4d(
    geometry: &GeometryAtPoint,
    constants: &CouplingConstants,
) -> Result<LagrangianReport, ActionError> {
    require(LagrangianForm::Vierbein4, geometry)?;
    let eps = LeviCivitaDensity::from_frame(geometry)?;
    let l = -constants.quarter() * double_dual_contraction(&eps, &geometry.curvature_coordinate());
    let value = Complex64::new(l * geometry.frame_det(), 0.0);
    let oracle = Complex64::new(oracle_density(geometry, constants), 0.0);
    Ok(LagrangianReport::new(LagrangianForm::Vierbein4, geometry, value, oracle, constants.kappa))
}

/// `kappa R √(-g)` from the Levi-Civita Ricci scalar.
pub fn lagrangian_standard_eh(geometry: &GeometryAtPoint, constants: &CouplingConstants) -> Result<f64, ActionError> {
    require(LagrangianForm::StandardEh4, geometry)?;
    Ok(oracle_density(geometry, constants))
}

fn standard_eh_report(geometry: &GeometryAtPoint, constants: &CouplingConstants) -> Result<LagrangianReport, ActionError> {
    let value = Complex64::new(lagrangian_standard_eh(geometry, constants)?, 0.0);
    // the spin-curvature Ricci scalar serves as the cross-check here
    let oracle = Complex64::new(
        constants.kappa * geometry.ricci_scalar_spin() * geometry.sqrt_minus_g(),
        0.0,
    );
    Ok(LagrangianReport::new(LagrangianForm::StandardEh4, geometry, value, oracle, constants.kappa))
}

/// The same double χ-dual contraction carried out entirely in frame indices:
/// `-kappa/4 χ_L^{abcd} R_{cd}^{ef} χ^R_{efab}`, times E.
pub fn chi_dual_frame_route(
    geometry: &GeometryAtPoint,
    constants: &CouplingConstants,
    chi_left: &ChiTable,
    chi_right: &ChiTable,
) -> Complex64 {
    let r = geometry.curvature_frame();
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..8 {
        for b in 0..8 {
            for e in 0..8 {
                for f in 0..8 {
                    let right = chi_right.get(e, f, a, b);
                    if right.norm_sqr() == 0.0 {
                        continue;
                    }
                    let mut t = Complex64::new(0.0, 0.0);
                    for c in 0..8 {
                        for d in 0..8 {
                            let rv = r[((c * 8 + d) * 8 + e) * 8 + f];
                            if rv != 0.0 {
                                t += chi_left.upper(a, b, c, d) * rv;
                            }
                        }
                    }
                    total += t * right;
                }
            }
        }
    }
    total * (-constants.quarter() * geometry.frame_det())
}

/// Double χ-dual integrand `L E` in coordinate indices. The oracle is the
/// frame-index evaluation of the same contraction.
pub fn lagrangian_chi_dual_8d(
    geometry: &GeometryAtPoint,
    constants: &CouplingConstants,
    chi_left: &ChiTable,
    chi_right: &ChiTable,
) -> Result<LagrangianReport, ActionError> {
    require(LagrangianForm::ChiDual8, geometry)?;
    let left = chi_coordinate_at(geometry, chi_left)?;
    let right = chi_coordinate_at(geometry, chi_right)?;
    let r = geometry.curvature_coordinate();
    let up = left.upper_slice();
    let low = right.lower_slice();
    let mut total = Complex64::new(0.0, 0.0);
    // T_{mn ab} = R_{mn}^{rs} χ^R_{rs ab}, then contract with χ_L^{ab mn}
    for mu in 0..8 {
        for nu in 0..8 {
            let mut t = [Complex64::new(0.0, 0.0); 64];
            for rho in 0..8 {
                for sigma in 0..8 {
                    let rv = r[((mu * 8 + nu) * 8 + rho) * 8 + sigma];
                    if rv == 0.0 {
                        continue;
                    }
                    let base = (rho * 8 + sigma) * 64;
                    for (ab, slot) in t.iter_mut().enumerate() {
                        *slot += low[base + ab] * rv;
                    }
                }
            }
            for (ab, tv) in t.iter().enumerate() {
                total += up[ab * 64 + mu * 8 + nu] * tv;
            }
        }
    }
    let value = total * (-constants.quarter() * geometry.frame_det());
    let oracle = chi_dual_frame_route(geometry, constants, chi_left, chi_right);
    Ok(LagrangianReport::new(LagrangianForm::ChiDual8, geometry, value, oracle, constants.kappa))
}

/// Evaluates one form at a precomputed geometry.
pub fn evaluate_at(
    form: LagrangianForm,
    geometry: &GeometryAtPoint,
    constants: &CouplingConstants,
    tables: &StructureTables,
) -> Result<LagrangianReport, ActionError> {
    match form {
        LagrangianForm::DoubleDual4 => lagrangian_double_dual_4d(geometry, constants),
        LagrangianForm::Vierbein4 => lagrangian_vierbein_4d(geometry, constants),
        LagrangianForm::StandardEh4 => {
            require(form, geometry)?;
            standard_eh_report(geometry, constants)
        }
        LagrangianForm::ChiDual8 => lagrangian_chi_dual_8d(geometry, constants, &tables.chi_left, &tables.chi_right),
    }
}

pub fn evaluate(
    form: LagrangianForm,
    frame: &FrameField,
    point: &[f64],
    constants: &CouplingConstants,
    tables: &StructureTables,
) -> Result<LagrangianReport, ActionError> {
    if frame.dim() != form.dim() {
        return Err(ActionError::DimensionMismatch {
            form,
            expected: form.dim(),
            found: frame.dim(),
        });
    }
    let geometry = GeometryAtPoint::compute(frame, point)?;
    evaluate_at(form, &geometry, constants, tables)
}

/// Evaluates `form` at every point, in input order.
pub fn sweep(
    form: LagrangianForm,
    frame: &FrameField,
    points: &[Vec<f64>],
    constants: &CouplingConstants,
    tables: &StructureTables,
    exec: Execution,
) -> Vec<Result<LagrangianReport, ActionError>> {
    map_indexed(points, exec, |_, p| evaluate(form, frame, p, constants, tables))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionReport {
    pub point: Vec<f64>,
    /// Double-dual contraction with the tensor densities, times √(-g).
    pub lhs: f64,
    /// kappa/2 (R_{mn}^{mn} - R_{mn}^{nm}) √(-g), the generalized-delta reduction.
    pub rhs: f64,
    pub abs_delta: f64,
    pub rel_delta: f64,
}

/// Checks that contracting the two densities reduces the double-dual form to
/// the generalized Kronecker delta acting on the curvature.
pub fn kronecker_reduction_check(
    geometry: &GeometryAtPoint,
    constants: &CouplingConstants,
) -> Result<ReductionReport, ActionError> {
    let dd = lagrangian_double_dual_4d(geometry, constants)?;
    let r = geometry.riemann_two_form();
    let mut trace = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            trace += r[((mu * 4 + nu) * 4 + mu) * 4 + nu] - r[((mu * 4 + nu) * 4 + nu) * 4 + mu];
        }
    }
    let rhs = 0.5 * constants.kappa * trace * geometry.sqrt_minus_g();
    let scale = constants.kappa * geometry.sqrt_minus_g() * geometry.curvature_scale_squared();
    let abs_delta = (dd.value.re - rhs).abs();
    Ok(ReductionReport {
        point: geometry.point().to_vec(),
        lhs: dd.value.re,
        rhs,
        abs_delta,
        rel_delta: relative(abs_delta, dd.value.re.abs().max(rhs.abs()).max(scale)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationResponse {
    #[serde(serialize_with = "serialize_complex")]
    pub original: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub rotated: Complex64,
    /// |rotated - original| / max(|original|, scale).
    pub relative_change: f64,
}

/// How the integrand of `form` changes when the frame is replaced by `Λ e` for a
/// constant Lorentz matrix `Λ`.
pub fn rotation_response(
    form: LagrangianForm,
    frame: &FrameField,
    point: &[f64],
    lorentz: &LocalLorentz,
    constants: &CouplingConstants,
    tables: &StructureTables,
) -> Result<RotationResponse, ActionError> {
    let base = evaluate(form, frame, point, constants, tables)?;
    let rotated_frame = FrameField::new(
        std::sync::Arc::new(LorentzRotatedFrame::new(std::sync::Arc::clone(frame.function()), lorentz.clone())),
        frame.provider(),
    );
    let rotated = evaluate(form, &rotated_frame, point, constants, tables)?;
    Ok(RotationResponse {
        original: base.value,
        rotated: rotated.value,
        relative_change: relative(
            (rotated.value - base.value).norm(),
            base.value.norm().max(rotated.value.norm()).max(base.scale),
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckPoint {
    pub index: usize,
    pub point: Vec<f64>,
    pub double_dual: f64,
    pub vierbein: f64,
    pub standard_eh: f64,
    /// Largest pairwise relative difference among the three integrands.
    pub max_rel_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckSummary {
    pub points: Vec<CrosscheckPoint>,
    pub skipped: Vec<(usize, String)>,
    pub tolerance: f64,
    pub max_rel_delta: f64,
    pub worst_index: Option<usize>,
    pub passed: bool,
}

/// Evaluates the three 4D integrands at each point and compares them pairwise.
/// Orientation-reversing frames are compared with the vierbein value sign-corrected.
pub fn crosscheck_4d(
    frame: &FrameField,
    points: &[Vec<f64>],
    constants: &CouplingConstants,
    tolerance: f64,
    exec: Execution,
) -> Result<CrosscheckSummary, ActionError> {
    if frame.dim() != 4 {
        return Err(ActionError::DimensionMismatch {
            form: LagrangianForm::DoubleDual4,
            expected: 4,
            found: frame.dim(),
        });
    }
    let results = map_indexed(points, exec, |index, p| -> Result<CrosscheckPoint, ActionError> {
        let g = GeometryAtPoint::compute(frame, p)?;
        let dd = lagrangian_double_dual_4d(&g, constants)?;
        let vb = lagrangian_vierbein_4d(&g, constants)?;
        let eh = lagrangian_standard_eh(&g, constants)?;
        let vb_signed = vb.value.re * f64::from(vb.orientation);
        let values = [dd.value.re, vb_signed, eh];
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = (values[i] - values[j]).abs();
                worst = worst.max(relative(d, values[i].abs().max(values[j].abs()).max(dd.scale)));
            }
        }
        Ok(CrosscheckPoint {
            index,
            point: p.clone(),
            double_dual: dd.value.re,
            vierbein: vb.value.re,
            standard_eh: eh,
            max_rel_delta: worst,
        })
    });
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => out.push(p),
            Err(e) if e.is_degeneracy() => skipped.push((i, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let worst = out
        .iter()
        .max_by(|a, b| a.max_rel_delta.total_cmp(&b.max_rel_delta));
    let max_rel_delta = worst.map_or(0.0, |p| p.max_rel_delta);
    let worst_index = worst.map(|p| p.index);
    Ok(CrosscheckSummary {
        passed: max_rel_delta <= tolerance,
        points: out,
        skipped,
        tolerance,
        max_rel_delta,
        worst_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::DerivativeProvider;
    use crate::scenarios::Scenario;

    fn tables() -> StructureTables {
        StructureTables::build().unwrap()
    }

    #[test]
    fn coupling_must_be_positive() {
        assert!(CouplingConstants::new(0.0).is_err());
        assert!(CouplingConstants::new(f64::NAN).is_err());
        assert_eq!(CouplingConstants::new(2.0).unwrap().kappa, 2.0);
    }

    #[test]
    fn flat_frames_give_zero() {
        let t = tables();
        let c = CouplingConstants::default();
        let f4 = Scenario::Flat4.frame_field(DerivativeProvider::Analytic);
        for form in [LagrangianForm::DoubleDual4, LagrangianForm::Vierbein4, LagrangianForm::StandardEh4] {
            let r = evaluate(form, &f4, &[0.1, 0.2, 0.3, 0.4], &c, &t).unwrap();
            assert_eq!(r.value, Complex64::new(0.0, 0.0));
        }
        let f8 = Scenario::Flat8.frame_field(DerivativeProvider::Analytic);
        let r = evaluate(LagrangianForm::ChiDual8, &f8, &[0.0; 8], &c, &t).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn de_sitter_double_dual_value() {
        let t = tables();
        let c = CouplingConstants::default();
        let h: f64 = 0.1;
        let f = Scenario::DeSitter { hubble: h }.frame_field(DerivativeProvider::Analytic);
        let time = 1.5;
        let r = evaluate(LagrangianForm::DoubleDual4, &f, &[time, 0.0, 0.0, 0.0], &c, &t).unwrap();
        let want = 12.0 * h * h * (3.0 * h * time).exp();
        assert!((r.value.re - want).abs() < 1e-12 * want);
    }

    #[test]
    fn parity_flipped_frame_reports_negative_orientation() {
        let t = tables();
        let c = CouplingConstants::default();
        let flip = LocalLorentz::identity(4);
        let base = Scenario::Flat4.frame_function();
        struct Flipped(std::sync::Arc<dyn crate::frame::FrameFunction>);
        impl crate::frame::FrameFunction for Flipped {
            fn dim(&self) -> usize {
                4
            }
            fn value(&self, x: &[f64]) -> Vec<f64> {
                let mut v = self.0.value(x);
                v[15] = -v[15];
                v
            }
            fn jet(&self, x: &[f64]) -> Option<crate::frame::FrameJet> {
                let mut j = self.0.jet(x)?;
                j.value[15] = -j.value[15];
                Some(j)
            }
        }
        let _ = flip;
        let f = FrameField::new(std::sync::Arc::new(Flipped(base)), DerivativeProvider::Analytic);
        let r = evaluate(LagrangianForm::Vierbein4, &f, &[0.0; 4], &c, &t).unwrap();
        assert_eq!(r.orientation, -1);
        assert_eq!(r.value.re, 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let t = tables();
        let c = CouplingConstants::default();
        let f8 = Scenario::Flat8.frame_field(DerivativeProvider::Analytic);
        assert!(matches!(
            evaluate(LagrangianForm::DoubleDual4, &f8, &[0.0; 8], &c, &t),
            Err(ActionError::DimensionMismatch { expected: 4, found: 8, .. })
        ));
        assert!("dd5".parse::<LagrangianForm>().is_err());
    }
}
