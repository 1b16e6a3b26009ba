//! Constant tensors extracted from the algebras.
//!
//! Nothing here is typed in by hand: ε_ijk and ψ_ijk come from commutators of
//! basis units, φ_ijkl from associators, ε_abcd and χ_abcd from the triple
//! cross products and the inner product. Every entry is checked to be an
//! exact (Gaussian) integer before it is stored.
//!
//! Index labels follow the mathematical convention: pure-imaginary labels run
//! `1..=n`, frame labels run `0..=n`.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{basis_frame, eta, AlgebraError, AlgebraKind, CayleyElement, Chirality, ComplexScalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("algebra error: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("{table}: extraction residual {residual} at {indices:?}")]
    ExtractionResidual {
        table: &'static str,
        indices: Vec<usize>,
        residual: f64,
    },
    #[error("{table}: entry at {indices:?} is not a Gaussian integer ({re} + {im}i)")]
    NonIntegral {
        table: &'static str,
        indices: Vec<usize>,
        re: f64,
        im: f64,
    },
    #[error("{identity} fails at {indices:?}: expected {expected}, found {found}")]
    IdentityMismatch {
        identity: &'static str,
        indices: Vec<usize>,
        expected: String,
        found: String,
    },
    #[error("unknown table `{0}` (expected eps3, psi, phi, eps4, chiL or chiR)")]
    UnknownTable(String),
    #[error("entry indices {indices:?} invalid for table {table}")]
    BadEntry { table: TableName, indices: Vec<usize> },
}

/// Sign of the permutation that sorts `indices`, or 0 if any index repeats.
pub fn permutation_sign(indices: &[usize]) -> i8 {
    let mut sign = 1;
    for i in 0..indices.len() {
        for j in (i + 1)..indices.len() {
            if indices[i] == indices[j] {
                return 0;
            }
            if indices[i] > indices[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// All 24 permutations of four slots, paired with their signs.
pub fn permutations4() -> Vec<([usize; 4], i8)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let s = permutation_sign(&p);
                    if s != 0 {
                        out.push((p, s));
                    }
                }
            }
        }
    }
    out
}

fn exact_integer(v: f64) -> Option<i8> {
    if v.fract() == 0.0 && v.abs() <= 127.0 {
        Some(v as i8)
    } else {
        None
    }
}

/// Uniform read access used for dumps and invariant sweeps.
pub trait StructureTable {
    fn name(&self) -> TableName;
    fn rank(&self) -> usize;
    fn labels(&self) -> RangeInclusive<usize>;
    fn entry(&self, indices: &[usize]) -> ComplexScalar;

    /// Every index tuple in lexicographic order.
    fn index_tuples(&self) -> Vec<Vec<usize>> {
        let labels: Vec<usize> = self.labels().collect();
        let mut out = vec![Vec::new()];
        for _ in 0..self.rank() {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    labels.iter().map(move |&l| {
                        let mut next = prefix.clone();
                        next.push(l);
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// Nonzero entries sorted lexicographically by index.
    fn nonzero_entries(&self) -> Vec<TableEntry> {
        self.index_tuples()
            .into_iter()
            .filter_map(|indices| {
                let v = self.entry(&indices);
                (v.re != 0.0 || v.im != 0.0).then_some(TableEntry {
                    indices,
                    re: v.re,
                    im: v.im,
                })
            })
            .collect()
    }

    /// Largest deviation from complete antisymmetry over every index tuple
    /// and every permutation of it.
    fn antisymmetry_residual(&self) -> f64 {
        let rank = self.rank();
        let mut worst = 0.0_f64;
        for idx in self.index_tuples() {
            let base = self.entry(&idx);
            if rank == 4 {
                for (p, s) in permutations4() {
                    let permuted: Vec<usize> = p.iter().map(|&k| idx[k]).collect();
                    worst = worst.max((self.entry(&permuted) - base * f64::from(s)).norm());
                }
            } else {
                for i in 0..rank {
                    for j in (i + 1)..rank {
                        let mut swapped = idx.clone();
                        swapped.swap(i, j);
                        worst = worst.max((self.entry(&swapped) + base).norm());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub indices: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableName {
    #[serde(rename = "eps3")]
    Eps3,
    #[serde(rename = "psi")]
    Psi,
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "eps4")]
    Eps4,
    #[serde(rename = "chiL")]
    ChiL,
    #[serde(rename = "chiR")]
    ChiR,
}

impl TableName {
    pub const ALL: [TableName; 6] = [
        TableName::Eps3,
        TableName::Psi,
        TableName::Phi,
        TableName::Eps4,
        TableName::ChiL,
        TableName::ChiR,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableName::Eps3 => "eps3",
            TableName::Psi => "psi",
            TableName::Phi => "phi",
            TableName::Eps4 => "eps4",
            TableName::ChiL => "chiL",
            TableName::ChiR => "chiR",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            TableName::Eps3 | TableName::Psi => 3,
            _ => 4,
        }
    }

    pub fn labels(self) -> RangeInclusive<usize> {
        match self {
            TableName::Eps3 => 1..=3,
            TableName::Psi | TableName::Phi => 1..=7,
            TableName::Eps4 => 0..=3,
            TableName::ChiL | TableName::ChiR => 0..=7,
        }
    }
}

impl fmt::Display for TableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableName {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableName::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| TableError::UnknownTable(s.to_string()))
    }
}

/// Dense table rebuilt from a list of nonzero entries (e.g. a parsed dump).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTable {
    name: TableName,
    values: Vec<ComplexScalar>,
}

impl DenseTable {
    pub fn from_entries(name: TableName, entries: &[TableEntry]) -> Result<Self, TableError> {
        let labels = name.labels();
        let extent = labels.end() - labels.start() + 1;
        let mut values = vec![ComplexScalar::new(0.0, 0.0); extent.pow(name.rank() as u32)];
        for e in entries {
            if e.indices.len() != name.rank() || e.indices.iter().any(|i| !labels.contains(i)) {
                return Err(TableError::BadEntry {
                    table: name,
                    indices: e.indices.clone(),
                });
            }
            values[flat_index(&e.indices, *labels.start(), extent)] = ComplexScalar::new(e.re, e.im);
        }
        Ok(Self { name, values })
    }

    pub fn from_table<T: StructureTable + ?Sized>(table: &T) -> Self {
        Self::from_entries(table.name(), &table.nonzero_entries()).expect("entries come from a valid table")
    }
}

impl StructureTable for DenseTable {
    fn name(&self) -> TableName {
        self.name
    }
    fn rank(&self) -> usize {
        self.name.rank()
    }
    fn labels(&self) -> RangeInclusive<usize> {
        self.name.labels()
    }
    fn entry(&self, indices: &[usize]) -> ComplexScalar {
        let labels = self.name.labels();
        let extent = labels.end() - labels.start() + 1;
        self.values[flat_index(indices, *labels.start(), extent)]
    }
}

fn flat_index(indices: &[usize], first: usize, extent: usize) -> usize {
    indices.iter().fold(0, |acc, &i| acc * extent + (i - first))
}

/// Quaternion structure constants ε_ijk, labels 1..=3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epsilon3 {
    values: [[[i8; 4]; 4]; 4],
}

impl Epsilon3 {
    pub fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        self.values[i][j][k]
    }
}

impl StructureTable for Epsilon3 {
    fn name(&self) -> TableName {
        TableName::Eps3
    }
    fn rank(&self) -> usize {
        3
    }
    fn labels(&self) -> RangeInclusive<usize> {
        1..=3
    }
    fn entry(&self, idx: &[usize]) -> ComplexScalar {
        ComplexScalar::new(f64::from(self.get(idx[0], idx[1], idx[2])), 0.0)
    }
}

/// Octonion commutator constants ψ_ijk, labels 1..=7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiTable {
    values: [[[i8; 8]; 8]; 8],
}

impl PsiTable {
    pub fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        self.values[i][j][k]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, v: i8) {
        self.values[i][j][k] = v;
    }

    /// The independent triples `i < j < k` with ψ_ijk != 0.
    pub fn independent_triples(&self) -> Vec<([usize; 3], i8)> {
        let mut out = Vec::new();
        for i in 1..=7 {
            for j in (i + 1)..=7 {
                for k in (j + 1)..=7 {
                    let v = self.get(i, j, k);
                    if v != 0 {
                        out.push(([i, j, k], v));
                    }
                }
            }
        }
        out
    }
}

impl StructureTable for PsiTable {
    fn name(&self) -> TableName {
        TableName::Psi
    }
    fn rank(&self) -> usize {
        3
    }
    fn labels(&self) -> RangeInclusive<usize> {
        1..=7
    }
    fn entry(&self, idx: &[usize]) -> ComplexScalar {
        ComplexScalar::new(f64::from(self.get(idx[0], idx[1], idx[2])), 0.0)
    }
}

/// Octonion associator constants φ_ijkl, labels 1..=7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTable {
    values: [[[[i8; 8]; 8]; 8]; 8],
}

impl PhiTable {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> i8 {
        self.values[i][j][k][l]
    }
}

impl StructureTable for PhiTable {
    fn name(&self) -> TableName {
        TableName::Phi
    }
    fn rank(&self) -> usize {
        4
    }
    fn labels(&self) -> RangeInclusive<usize> {
        1..=7
    }
    fn entry(&self, idx: &[usize]) -> ComplexScalar {
        ComplexScalar::new(f64::from(self.get(idx[0], idx[1], idx[2], idx[3])), 0.0)
    }
}

/// Frame-index Levi-Civita symbol ε_abcd, labels 0..=3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epsilon4 {
    values: [[[[i8; 4]; 4]; 4]; 4],
}

impl Epsilon4 {
    /// The permutation symbol with ε_0123 = +1.
    pub fn permutation_symbol() -> Self {
        let mut values = [[[[0; 4]; 4]; 4]; 4];
        for (p, s) in permutations4() {
            values[p[0]][p[1]][p[2]][p[3]] = s;
        }
        Self { values }
    }

    pub fn lower(&self, a: usize, b: usize, c: usize, d: usize) -> i8 {
        self.values[a][b][c][d]
    }

    /// ε^abcd with indices raised by η.
    pub fn upper(&self, a: usize, b: usize, c: usize, d: usize) -> i8 {
        let s = eta(a, a) * eta(b, b) * eta(c, c) * eta(d, d);
        self.values[a][b][c][d] * s as i8
    }
}

impl StructureTable for Epsilon4 {
    fn name(&self) -> TableName {
        TableName::Eps4
    }
    fn rank(&self) -> usize {
        4
    }
    fn labels(&self) -> RangeInclusive<usize> {
        0..=3
    }
    fn entry(&self, idx: &[usize]) -> ComplexScalar {
        ComplexScalar::new(f64::from(self.lower(idx[0], idx[1], idx[2], idx[3])), 0.0)
    }
}

const CHI_LEN: usize = 8 * 8 * 8 * 8;

/// χ_abcd for one chirality, labels 0..=7, stored dense.
#[derive(Clone, PartialEq)]
pub struct ChiTable {
    chirality: Chirality,
    values: Box<[ComplexScalar; CHI_LEN]>,
}

impl fmt::Debug for ChiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChiTable")
            .field("chirality", &self.chirality)
            .field("nonzero", &self.nonzero_entries().len())
            .finish()
    }
}

#[inline]
fn chi_index(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 8 + b) * 8 + c) * 8 + d
}

impl ChiTable {
    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> ComplexScalar {
        self.values[chi_index(a, b, c, d)]
    }

    /// χ^abcd with indices raised by η.
    #[inline]
    pub fn upper(&self, a: usize, b: usize, c: usize, d: usize) -> ComplexScalar {
        let s = eta(a, a) * eta(b, b) * eta(c, c) * eta(d, d);
        self.get(a, b, c, d) * s
    }

    /// Raw row-major storage, index `((a*8 + b)*8 + c)*8 + d`.
    pub fn as_slice(&self) -> &[ComplexScalar] {
        &self.values[..]
    }

    pub(crate) fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: ComplexScalar) {
        self.values[chi_index(a, b, c, d)] = v;
    }

    /// Largest entry-wise |χ_this - conj(χ_other)|.
    pub fn conjugate_residual(&self, other: &ChiTable) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(x, y)| (x - y.conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the component relations
    /// χ_0ijk = ψ_ijk and χ_ijkl = ±i φ_ijkl (+ for L, - for R).
    pub fn component_relation_residual(&self, psi: &PsiTable, phi: &PhiTable) -> f64 {
        let sign = match self.chirality {
            Chirality::Left => 1.0,
            Chirality::Right => -1.0,
        };
        let mut worst = 0.0_f64;
        for i in 1..=7 {
            for j in 1..=7 {
                for k in 1..=7 {
                    let want = ComplexScalar::new(f64::from(psi.get(i, j, k)), 0.0);
                    worst = worst.max((self.get(0, i, j, k) - want).norm());
                    for l in 1..=7 {
                        let want = ComplexScalar::new(0.0, sign * f64::from(phi.get(i, j, k, l)));
                        worst = worst.max((self.get(i, j, k, l) - want).norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest deviation of χ restricted to labels 0..=3 from ε_abcd.
    pub fn restriction_residual(&self, eps: &Epsilon4) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let want = f64::from(eps.lower(a, b, c, d));
                        worst = worst.max((self.get(a, b, c, d) - want).norm());
                    }
                }
            }
        }
        worst
    }
}

impl StructureTable for ChiTable {
    fn name(&self) -> TableName {
        match self.chirality {
            Chirality::Left => TableName::ChiL,
            Chirality::Right => TableName::ChiR,
        }
    }
    fn rank(&self) -> usize {
        4
    }
    fn labels(&self) -> RangeInclusive<usize> {
        0..=7
    }
    fn entry(&self, idx: &[usize]) -> ComplexScalar {
        self.get(idx[0], idx[1], idx[2], idx[3])
    }
}

fn decompose_pure(
    table: &'static str,
    element: &CayleyElement,
    indices: &[usize],
) -> Result<Vec<i8>, TableError> {
    // component 0 and every imaginary part must vanish exactly
    let c0 = element.coeff(0);
    let mut residual = c0.norm();
    let mut out = vec![0i8; element.kind().dim()];
    for (k, c) in element.coeffs().iter().enumerate().skip(1) {
        residual = residual.max(c.im.abs());
        let half = c.re / 2.0;
        match exact_integer(half) {
            Some(v) => out[k] = v,
            None => residual = residual.max((half - half.round()).abs()),
        }
    }
    if residual != 0.0 {
        return Err(TableError::ExtractionResidual {
            table,
            indices: indices.to_vec(),
            residual,
        });
    }
    Ok(out)
}

/// ε_ijk from `[e_i, e_j] = 2 ε_ij^k e_k`.
pub fn extract_epsilon3() -> Result<Epsilon3, TableError> {
    let kind = AlgebraKind::Quaternionic;
    let mut values = [[[0; 4]; 4]; 4];
    for i in 1..=3 {
        for j in 1..=3 {
            let comm = CayleyElement::unit(kind, i)?.commutator(&CayleyElement::unit(kind, j)?)?;
            let coeffs = decompose_pure("eps3", &comm, &[i, j])?;
            values[i][j][1..=3].copy_from_slice(&coeffs[1..=3]);
        }
    }
    Ok(Epsilon3 { values })
}

/// ψ_ijk from `[E_i, E_j] = 2 ψ_ij^k E_k`.
pub fn extract_psi() -> Result<PsiTable, TableError> {
    let kind = AlgebraKind::Octonionic;
    let mut values = [[[0; 8]; 8]; 8];
    for i in 1..=7 {
        for j in 1..=7 {
            let comm = CayleyElement::unit(kind, i)?.commutator(&CayleyElement::unit(kind, j)?)?;
            let coeffs = decompose_pure("psi", &comm, &[i, j])?;
            values[i][j][1..=7].copy_from_slice(&coeffs[1..=7]);
        }
    }
    Ok(PsiTable { values })
}

/// φ_ijkl from `[E_i, E_j, E_k] = 2 φ_ijk^l E_l`, cross-checked against the
/// seven-dimensional dual of ψ (see [`DUAL_ORIENTATION`]).
pub fn extract_phi() -> Result<PhiTable, TableError> {
    let kind = AlgebraKind::Octonionic;
    let units: Vec<CayleyElement> = (0..8).map(|k| CayleyElement::unit(kind, k)).collect::<Result<_, _>>()?;
    let mut values = [[[[0; 8]; 8]; 8]; 8];
    for i in 1..=7 {
        for j in 1..=7 {
            for k in 1..=7 {
                let assoc = units[i].associator(&units[j], &units[k])?;
                let coeffs = decompose_pure("phi", &assoc, &[i, j, k])?;
                values[i][j][k][1..=7].copy_from_slice(&coeffs[1..=7]);
            }
        }
    }
    let phi = PhiTable { values };
    check_phi_dual(&extract_psi()?, &phi)?;
    Ok(phi)
}

/// Seven-dimensional dual of ψ: (1/6) [ijklmnp] ψ_mnp.
pub fn dual_of_psi(psi: &PsiTable, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let mut sum = 0;
    for m in 1..=7 {
        for n in 1..=7 {
            for p in 1..=7 {
                let s = permutation_sign(&[i, j, k, l, m, n, p]);
                if s != 0 {
                    sum += i32::from(s) * i32::from(psi.get(m, n, p));
                }
            }
        }
    }
    f64::from(sum) / 6.0
}

/// Orientation of R^7 under which φ is the dual of ψ for the doubling table:
/// φ_ijkl = DUAL_ORIENTATION * (1/6) [ijklmnp] ψ_mnp with [1234567] = +1.
pub const DUAL_ORIENTATION: f64 = -1.0;

pub fn check_phi_dual(psi: &PsiTable, phi: &PhiTable) -> Result<(), TableError> {
    for i in 1..=7 {
        for j in 1..=7 {
            for k in 1..=7 {
                for l in 1..=7 {
                    let dual = DUAL_ORIENTATION * dual_of_psi(psi, i, j, k, l);
                    let found = f64::from(phi.get(i, j, k, l));
                    if dual != found {
                        return Err(TableError::IdentityMismatch {
                            identity: "phi = *psi",
                            indices: vec![i, j, k, l],
                            expected: dual.to_string(),
                            found: found.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// ε_abcd = i ⟨X(e_a, e_b, e_c), e_d⟩ over the quaternion basis `(i, e_1, e_2, e_3)`,
/// checked entry-wise against the permutation symbol.
pub fn epsilon4_from_cross() -> Result<Epsilon4, TableError> {
    let basis = basis_frame(AlgebraKind::Quaternionic);
    let i = ComplexScalar::new(0.0, 1.0);
    let mut values = [[[[0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let x = basis[a].cross_left(&basis[b], &basis[c])?;
                for d in 0..4 {
                    let v = i * x.inner(&basis[d])?;
                    let indices = vec![a, b, c, d];
                    let found = match (exact_integer(v.re), v.im) {
                        (Some(r), 0.0) => r,
                        _ => {
                            return Err(TableError::NonIntegral {
                                table: "eps4",
                                indices,
                                re: v.re,
                                im: v.im,
                            })
                        }
                    };
                    let expected = permutation_sign(&indices);
                    if found != expected {
                        return Err(TableError::IdentityMismatch {
                            identity: "eps_abcd = i<X(e_a,e_b,e_c),e_d>",
                            indices,
                            expected: expected.to_string(),
                            found: found.to_string(),
                        });
                    }
                    values[a][b][c][d] = found;
                }
            }
        }
    }
    Ok(Epsilon4 { values })
}

/// χ_abcd = i ⟨X(E_a, E_b, E_c), E_d⟩ over the octonion basis `(i, E_1, ..., E_7)`.
pub fn build_chi(chirality: Chirality) -> Result<ChiTable, TableError> {
    let basis = basis_frame(AlgebraKind::Octonionic);
    let i = ComplexScalar::new(0.0, 1.0);
    let mut table = ChiTable {
        chirality,
        values: Box::new([ComplexScalar::new(0.0, 0.0); CHI_LEN]),
    };
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                let x = basis[a].cross(&basis[b], &basis[c], chirality)?;
                for d in 0..8 {
                    let v = i * x.inner(&basis[d])?;
                    if exact_integer(v.re).is_none() || exact_integer(v.im).is_none() {
                        return Err(TableError::NonIntegral {
                            table: if chirality == Chirality::Left { "chiL" } else { "chiR" },
                            indices: vec![a, b, c, d],
                            re: v.re,
                            im: v.im,
                        });
                    }
                    table.set(a, b, c, d, v);
                }
            }
        }
    }
    Ok(table)
}

/// `-1/2 ε^{ab mu nu} ε_{ab rho sigma}` summed over the first pair.
pub fn kronecker_contraction(eps: &Epsilon4, mu: usize, nu: usize, rho: usize, sigma: usize) -> f64 {
    let mut sum = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            sum += f64::from(eps.upper(a, b, mu, nu)) * f64::from(eps.lower(a, b, rho, sigma));
        }
    }
    -0.5 * sum
}

/// Generalized Kronecker delta δ^{mu nu}_{rho sigma}.
pub fn generalized_delta(mu: usize, nu: usize, rho: usize, sigma: usize) -> f64 {
    let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    d(mu, rho) * d(nu, sigma) - d(mu, sigma) * d(nu, rho)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub checked: usize,
    pub max_residual: f64,
}

/// Checks `-1/2 ε^{ab mu nu} ε_{ab rho sigma} = δ^{mu nu}_{rho sigma}` for all 256 index values.
pub fn verify_kronecker_identity(eps: &Epsilon4) -> Result<IdentityReport, TableError> {
    let mut checked = 0;
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    let lhs = kronecker_contraction(eps, mu, nu, rho, sigma);
                    let rhs = generalized_delta(mu, nu, rho, sigma);
                    if lhs != rhs {
                        return Err(TableError::IdentityMismatch {
                            identity: "-1/2 eps eps = generalized delta",
                            indices: vec![mu, nu, rho, sigma],
                            expected: rhs.to_string(),
                            found: lhs.to_string(),
                        });
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(IdentityReport {
        identity: "-1/2 eps^{ab mu nu} eps_{ab rho sigma} = delta^{mu nu}_{rho sigma}",
        checked,
        max_residual: 0.0,
    })
}

/// Every constant table, built once.
#[derive(Clone, Debug)]
pub struct StructureTables {
    pub eps3: Epsilon3,
    pub psi: PsiTable,
    pub phi: PhiTable,
    pub eps4: Epsilon4,
    pub chi_left: ChiTable,
    pub chi_right: ChiTable,
}

impl StructureTables {
    pub fn build() -> Result<Self, TableError> {
        Ok(Self {
            eps3: extract_epsilon3()?,
            psi: extract_psi()?,
            phi: extract_phi()?,
            eps4: epsilon4_from_cross()?,
            chi_left: build_chi(Chirality::Left)?,
            chi_right: build_chi(Chirality::Right)?,
        })
    }

    pub fn chi(&self, chirality: Chirality) -> &ChiTable {
        match chirality {
            Chirality::Left => &self.chi_left,
            Chirality::Right => &self.chi_right,
        }
    }

    pub fn table(&self, name: TableName) -> &dyn StructureTable {
        match name {
            TableName::Eps3 => &self.eps3,
            TableName::Psi => &self.psi,
            TableName::Phi => &self.phi,
            TableName::Eps4 => &self.eps4,
            TableName::ChiL => &self.chi_left,
            TableName::ChiR => &self.chi_right,
        }
    }
}
