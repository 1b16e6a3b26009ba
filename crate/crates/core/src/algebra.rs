//! Complex quaternions and complex octonions.
//!
//! Both algebras share one element type, [`CayleyElement`], tagged with an
//! [`AlgebraKind`]. Coefficients are complex and refer to the real basis
//! `(1, e_1, ..., e_n)`; the complex unit `i` commutes with every basis unit
//! and is untouched by algebra conjugation.
//!
//! The multiplication table is produced once by Cayley-Dickson doubling
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))` starting from the reals.
//! Doubling nests, so the quaternion table is the upper-left 4x4 block of the
//! octonion table and `e_1, e_2, e_3` embed as `E_1, E_2, E_3`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex coefficient type used throughout the crate.
pub type ComplexScalar = Complex64;

const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("incompatible algebras: {left} and {right}")]
    KindMismatch {
        left: AlgebraKind,
        right: AlgebraKind,
    },
    #[error("{kind} elements have {expected} coefficients, got {found}")]
    WrongLength {
        kind: AlgebraKind,
        expected: usize,
        found: usize,
    },
    #[error("basis index {index} out of range for {kind}")]
    IndexOutOfRange { kind: AlgebraKind, index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Quaternionic,
    Octonionic,
}

impl AlgebraKind {
    /// Complex dimension of the algebra (4 or 8).
    pub const fn dim(self) -> usize {
        match self {
            AlgebraKind::Quaternionic => 4,
            AlgebraKind::Octonionic => 8,
        }
    }

    /// Number of pure-imaginary units (3 or 7).
    pub const fn imaginary_units(self) -> usize {
        self.dim() - 1
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Quaternionic => f.write_str("complex quaternions"),
            AlgebraKind::Octonionic => f.write_str("complex octonions"),
        }
    }
}

/// Which of the two triple cross products to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    pub fn opposite(self) -> Self {
        match self {
            Chirality::Left => Chirality::Right,
            Chirality::Right => Chirality::Left,
        }
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chirality::Left => f.write_str("L"),
            Chirality::Right => f.write_str("R"),
        }
    }
}

/// Product of two real basis units: `unit_i * unit_j = sign * unit_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitProduct {
    pub sign: i8,
    pub index: usize,
}

fn doubling_product(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(k, &t)| if k == 0 { t } else { -t })
            .collect()
    };
    let ac = doubling_product(a, c);
    let db = doubling_product(&conj(d), b);
    let da = doubling_product(d, a);
    let bc = doubling_product(b, &conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&db).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

fn build_unit_table() -> [[UnitProduct; MAX_DIM]; MAX_DIM] {
    let mut table = [[UnitProduct { sign: 0, index: 0 }; MAX_DIM]; MAX_DIM];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut x = [0.0; MAX_DIM];
            let mut y = [0.0; MAX_DIM];
            x[i] = 1.0;
            y[j] = 1.0;
            let product = doubling_product(&x, &y);
            let nonzero: Vec<(usize, f64)> = product
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, v)| v != 0.0)
                .collect();
            assert!(
                nonzero.len() == 1 && nonzero[0].1.abs() == 1.0,
                "basis product e_{i} e_{j} is not a signed unit"
            );
            *slot = UnitProduct {
                sign: nonzero[0].1 as i8,
                index: nonzero[0].0,
            };
        }
    }
    table
}

/// The octonion basis multiplication table (quaternions are its 4x4 block).
pub fn unit_table() -> &'static [[UnitProduct; MAX_DIM]; MAX_DIM] {
    static TABLE: OnceLock<[[UnitProduct; MAX_DIM]; MAX_DIM]> = OnceLock::new();
    TABLE.get_or_init(build_unit_table)
}

/// An element of C⊗H or C⊗O.
#[derive(Clone, Copy, PartialEq)]
pub struct CayleyElement {
    kind: AlgebraKind,
    coeffs: [ComplexScalar; MAX_DIM],
}

impl fmt::Debug for CayleyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyElement")
            .field("kind", &self.kind)
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

impl CayleyElement {
    pub fn zero(kind: AlgebraKind) -> Self {
        Self {
            kind,
            coeffs: [ComplexScalar::new(0.0, 0.0); MAX_DIM],
        }
    }

    /// `c * 1` for a complex scalar `c`.
    pub fn scalar(kind: AlgebraKind, c: ComplexScalar) -> Self {
        let mut out = Self::zero(kind);
        out.coeffs[0] = c;
        out
    }

    pub fn one(kind: AlgebraKind) -> Self {
        Self::scalar(kind, ComplexScalar::new(1.0, 0.0))
    }

    /// `i * 1`, the complex unit times the real unit.
    pub fn complex_unit(kind: AlgebraKind) -> Self {
        Self::scalar(kind, ComplexScalar::new(0.0, 1.0))
    }

    /// Real basis unit: index 0 is `1`, indices `1..=n` are the pure units.
    pub fn unit(kind: AlgebraKind, index: usize) -> Result<Self, AlgebraError> {
        if index >= kind.dim() {
            return Err(AlgebraError::IndexOutOfRange { kind, index });
        }
        let mut out = Self::zero(kind);
        out.coeffs[index] = ComplexScalar::new(1.0, 0.0);
        Ok(out)
    }

    pub fn from_coeffs(kind: AlgebraKind, coeffs: &[ComplexScalar]) -> Result<Self, AlgebraError> {
        if coeffs.len() != kind.dim() {
            return Err(AlgebraError::WrongLength {
                kind,
                expected: kind.dim(),
                found: coeffs.len(),
            });
        }
        let mut out = Self::zero(kind);
        out.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(out)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs[..self.kind.dim()]
    }

    pub fn coeff(&self, index: usize) -> ComplexScalar {
        self.coeffs()[index]
    }

    /// Component along the real unit `1`.
    pub fn scalar_part(&self) -> ComplexScalar {
        self.coeffs[0]
    }

    pub fn scale(&self, c: ComplexScalar) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_kind(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(AlgebraError::KindMismatch {
                left: self.kind,
                right: other.kind,
            })
        }
    }

    fn product(&self, other: &Self) -> Self {
        let n = self.kind.dim();
        let table = unit_table();
        let mut out = Self::zero(self.kind);
        for i in 0..n {
            let xi = self.coeffs[i];
            if xi.re == 0.0 && xi.im == 0.0 {
                continue;
            }
            for j in 0..n {
                let p = table[i][j];
                let term = xi * other.coeffs[j];
                if p.sign > 0 {
                    out.coeffs[p.index] += term;
                } else {
                    out.coeffs[p.index] -= term;
                }
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_kind(other)?;
        Ok(self.product(other))
    }

    /// Negates the pure-imaginary components; the complex unit is left alone.
    pub fn conjugate(&self) -> Self {
        let mut out = *self;
        out.coeffs[1..].iter_mut().for_each(|v| *v = -*v);
        out
    }

    /// Symmetric C-bilinear form: scalar part of `(x conj(y) + y conj(x)) / 2`.
    pub fn inner(&self, other: &Self) -> Result<ComplexScalar, AlgebraError> {
        self.check_kind(other)?;
        let sum = self.product(&other.conjugate()) + other.product(&self.conjugate());
        Ok(sum.scalar_part() * 0.5)
    }

    /// The same form evaluated as the scalar part of `(conj(x) y + conj(y) x) / 2`.
    pub fn inner_conjugate_first(&self, other: &Self) -> Result<ComplexScalar, AlgebraError> {
        self.check_kind(other)?;
        let sum = self.conjugate().product(other) + other.conjugate().product(self);
        Ok(sum.scalar_part() * 0.5)
    }

    /// Scalar part of `x conj(x)`. May vanish for nonzero `x`.
    pub fn norm(&self) -> ComplexScalar {
        self.product(&self.conjugate()).scalar_part()
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_kind(other)?;
        Ok(self.product(other) - other.product(self))
    }

    /// `(xy)z - x(yz)`.
    pub fn associator(&self, y: &Self, z: &Self) -> Result<Self, AlgebraError> {
        self.check_kind(y)?;
        self.check_kind(z)?;
        Ok(self.product(y).product(z) - self.product(&y.product(z)))
    }

    pub fn cross(&self, y: &Self, z: &Self, chirality: Chirality) -> Result<Self, AlgebraError> {
        match chirality {
            Chirality::Left => self.cross_left(y, z),
            Chirality::Right => self.cross_right(y, z),
        }
    }

    /// Left triple cross product: `x(conj(y) z - conj(z) y) + cyclic`, divided by 3!.
    pub fn cross_left(&self, y: &Self, z: &Self) -> Result<Self, AlgebraError> {
        self.check_kind(y)?;
        self.check_kind(z)?;
        let term = |a: &Self, b: &Self, c: &Self| {
            a.product(&(b.conjugate().product(c) - c.conjugate().product(b)))
        };
        let sum = term(self, y, z) + term(y, z, self) + term(z, self, y);
        Ok(sum.scale(ComplexScalar::new(1.0 / 6.0, 0.0)))
    }

    /// Right triple cross product: `(x conj(y) - y conj(x)) z + cyclic`, divided by 3!.
    pub fn cross_right(&self, y: &Self, z: &Self) -> Result<Self, AlgebraError> {
        self.check_kind(y)?;
        self.check_kind(z)?;
        let term = |a: &Self, b: &Self, c: &Self| {
            (a.product(&b.conjugate()) - b.product(&a.conjugate())).product(c)
        };
        let sum = term(self, y, z) + term(y, z, self) + term(z, self, y);
        Ok(sum.scale(ComplexScalar::new(1.0 / 6.0, 0.0)))
    }
}

impl Add for CayleyElement {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "adding elements of different algebras");
        self.coeffs
            .iter_mut()
            .zip(rhs.coeffs.iter())
            .for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for CayleyElement {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "subtracting elements of different algebras");
        self.coeffs
            .iter_mut()
            .zip(rhs.coeffs.iter())
            .for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for CayleyElement {
    type Output = Self;

    fn neg(mut self) -> Self {
        self.coeffs.iter_mut().for_each(|v| *v = -*v);
        self
    }
}

/// Panics when the operands belong to different algebras; use
/// [`CayleyElement::multiply`] for a fallible product.
impl Mul for CayleyElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        match self.multiply(&rhs) {
            Ok(p) => p,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Mul<ComplexScalar> for CayleyElement {
    type Output = Self;

    fn mul(self, rhs: ComplexScalar) -> Self {
        self.scale(rhs)
    }
}

/// The basis `(i, e_1, ..., e_n)` over C. Unit 0 is `i * 1`.
pub fn basis_frame(kind: AlgebraKind) -> Vec<CayleyElement> {
    (0..kind.dim())
        .map(|a| {
            if a == 0 {
                CayleyElement::complex_unit(kind)
            } else {
                CayleyElement::unit(kind, a).expect("index within dimension")
            }
        })
        .collect()
}

/// Minkowski signature `diag(-1, +1, ..., +1)` entry.
pub fn eta(a: usize, b: usize) -> f64 {
    match (a, b) {
        (0, 0) => -1.0,
        _ if a == b => 1.0,
        _ => 0.0,
    }
}
