//! Helium-type two-electron states.
//!
//! Three families are built from a spatial wavefunction `M[x, y] = ψ(x, y)` and
//! spin states `s`, `s′`:
//!
//! ```text
//! Ψ±  = N± (ψ(x,y) ± ψ(y,x)) (|s>|s′> ∓ |s′>|s>)
//! Ψ*  = N* (ψ(x,y) − ψ(y,x)) |s>|s>
//! N±  = (4 (1 ± Re K)(1 ∓ |<s|s′>|²))^(-1/2)
//! N*  = (2 (1 − Re K))^(-1/2)
//! K   = <ψ(x,y)|ψ(y,x)>
//! ```
//!
//! Each family has exclusion conditions under which numerator and
//! normalization vanish together. Builders test them before dividing and
//! fail with [`Error::Excluded`] instead of producing non-finite amplitudes.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::antisym::{Condition, ExclusionVerdict};
use crate::state::{vec_inner, BasisSpec, NFermionTensor, SpatialMatrix, SpinVector};
use crate::{Error, Result, DEFAULT_TOL, NORM_INPUT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeliumVariant {
    /// Symmetric spatial part, antisymmetric spin part (para type).
    Plus,
    /// Antisymmetric spatial part, symmetric spin part (ortho type).
    Minus,
    /// Antisymmetric spatial part, parallel spins (ortho type).
    Star,
}

impl HeliumVariant {
    pub const ALL: [HeliumVariant; 3] = [HeliumVariant::Plus, HeliumVariant::Minus, HeliumVariant::Star];
}

impl fmt::Display for HeliumVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeliumVariant::Plus => "plus",
            HeliumVariant::Minus => "minus",
            HeliumVariant::Star => "star",
        })
    }
}

impl FromStr for HeliumVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(HeliumVariant::Plus),
            "minus" => Ok(HeliumVariant::Minus),
            "star" => Ok(HeliumVariant::Star),
            other => Err(Error::Config(format!(
                "unknown variant {other:?} (expected plus, minus or star)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Helium { variant: HeliumVariant, normalization: f64 },
    PauliPair { overlap: Complex64 },
}

/// A normalized, antisymmetric two-particle state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFermionState {
    tensor: NFermionTensor,
    provenance: Provenance,
}

impl TwoFermionState {
    pub fn tensor(&self) -> &NFermionTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> NFermionTensor {
        self.tensor
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

fn unit_matrix(m: &SpatialMatrix) -> Result<SpatialMatrix> {
    let norm = m.frobenius_norm();
    if (norm - 1.0).abs() > NORM_INPUT_TOL {
        return Err(Error::Normalization { norm });
    }
    m.normalized()
}

fn unit_spin(s: &SpinVector) -> Result<SpinVector> {
    let norm = s.norm();
    if (norm - 1.0).abs() > NORM_INPUT_TOL {
        return Err(Error::Normalization { norm });
    }
    s.normalized()
}

fn unit_vector(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let norm = crate::perm::norm(v);
    if (norm - 1.0).abs() > NORM_INPUT_TOL {
        return Err(Error::Normalization { norm });
    }
    Ok(v.iter().map(|a| a / norm).collect())
}

fn check_spins(s: &SpinVector, s2: &SpinVector) -> Result<()> {
    if s.len() != s2.len() {
        return Err(Error::Shape(format!(
            "spin vectors differ in length ({} vs {})",
            s.len(),
            s2.len()
        )));
    }
    Ok(())
}

fn kernel(m: &SpatialMatrix) -> Complex64 {
    let d = m.modes();
    let mut k = Complex64::new(0.0, 0.0);
    for x in 0..d {
        for y in 0..d {
            k += m.get(x, y).conj() * m.get(y, x);
        }
    }
    k
}

/// `K = Σ conj(M[x,y])·M[y,x]`, the exchange overlap `<ψ(x,y)|ψ(y,x)>`.
pub fn overlap_kernel(m: &SpatialMatrix) -> Result<Complex64> {
    let norm = m.frobenius_norm();
    if (norm - 1.0).abs() > NORM_INPUT_TOL {
        return Err(Error::Normalization { norm });
    }
    Ok(kernel(m))
}

/// Spatial and spin factors of the normalization radicand, without the
/// leading 4 (or 2 for `Star`).
fn radicand_factors(variant: HeliumVariant, k: Complex64, spin_overlap: f64) -> (f64, f64) {
    let o2 = spin_overlap * spin_overlap;
    match variant {
        HeliumVariant::Plus => (1.0 + k.re, 1.0 - o2),
        HeliumVariant::Minus => (1.0 - k.re, 1.0 + o2),
        HeliumVariant::Star => (1.0 - k.re, 1.0),
    }
}

fn spatial_condition(variant: HeliumVariant) -> Condition {
    match variant {
        HeliumVariant::Plus => Condition::AntisymmetricSpatial,
        HeliumVariant::Minus | HeliumVariant::Star => Condition::SymmetricSpatial,
    }
}

/// Closed-form normalization factor `N±` or `N*`. The spin `s2` is ignored
/// for `Star`. Fails with [`Error::Excluded`] when the radicand, or one of
/// its factors, is at or below `tol`.
pub fn normalization(
    variant: HeliumVariant,
    m: &SpatialMatrix,
    s: &SpinVector,
    s2: &SpinVector,
    tol: f64,
) -> Result<f64> {
    let m = unit_matrix(m)?;
    let s = unit_spin(s)?;
    let s2 = unit_spin(s2)?;
    check_spins(&s, &s2)?;
    let k = kernel(&m);
    let (spatial, spin) = radicand_factors(variant, k, s.inner(&s2).norm());
    let radicand = match variant {
        HeliumVariant::Star => 2.0 * spatial,
        _ => 4.0 * spatial * spin,
    };
    if spatial <= tol {
        return Err(Error::Excluded {
            condition: spatial_condition(variant),
            factor: spatial,
        });
    }
    if spin <= tol {
        return Err(Error::Excluded {
            condition: Condition::ParallelSpins,
            factor: spin,
        });
    }
    if radicand <= tol {
        let condition = if spatial <= spin {
            spatial_condition(variant)
        } else {
            Condition::ParallelSpins
        };
        return Err(Error::Excluded { condition, factor: radicand });
    }
    Ok(radicand.powf(-0.5))
}

/// `(M ± Mᵀ)` as a plain matrix.
fn exchange_combination(m: &SpatialMatrix, sign: f64) -> DMatrix<Complex64> {
    m.entries() + m.entries().transpose() * Complex64::new(sign, 0.0)
}

fn spin_outer(a: &SpinVector, b: &SpinVector) -> DMatrix<Complex64> {
    let (u, v) = (a.amplitudes(), b.amplitudes());
    DMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
}

/// Composite amplitudes of `Σ spatial[x,y]·spin[σ₁,σ₂]` on `((x,σ₁),(y,σ₂))`,
/// i.e. the Kronecker product of the two matrices.
fn assemble(spatial: &DMatrix<Complex64>, spin: &DMatrix<Complex64>) -> Result<NFermionTensor> {
    let spec = BasisSpec::new(spatial.nrows(), spin.nrows())?;
    let kron = spatial.kronecker(spin);
    let dim = spec.dim();
    let amps = (0..dim * dim).map(|f| kron[(f / dim, f % dim)]).collect();
    NFermionTensor::from_amplitudes(2, spec, amps)
}

/// Exact-sector numerator `(M ± Mᵀ) ⊗ (s s′ ∓ s′ s)` or `(M − Mᵀ) ⊗ s s`.
fn numerator(variant: HeliumVariant, m: &SpatialMatrix, s: &SpinVector, s2: &SpinVector) -> Result<NFermionTensor> {
    let (spatial, spin) = match variant {
        HeliumVariant::Plus => (exchange_combination(m, 1.0), spin_outer(s, s2) - spin_outer(s2, s)),
        HeliumVariant::Minus => (exchange_combination(m, -1.0), spin_outer(s, s2) + spin_outer(s2, s)),
        HeliumVariant::Star => (exchange_combination(m, -1.0), spin_outer(s, s)),
    };
    assemble(&spatial, &spin)
}

/// Builds `Ψ±` or `Ψ*` with the closed-form normalization factor.
pub fn build_state(
    variant: HeliumVariant,
    m: &SpatialMatrix,
    s: &SpinVector,
    s2: &SpinVector,
    tol: f64,
) -> Result<TwoFermionState> {
    let catalog = exclusion_catalog(m, s, s2, tol)?;
    let verdict = catalog.get(variant);
    if verdict.excluded {
        return Err(Error::Excluded {
            condition: verdict.condition,
            factor: verdict.norm_ratio,
        });
    }
    let norm = normalization(variant, m, s, s2, tol)?;
    let m = unit_matrix(m)?;
    let s = unit_spin(s)?;
    let s2 = unit_spin(s2)?;
    let tensor = numerator(variant, &m, &s, &s2)?.scale(Complex64::new(norm, 0.0));
    Ok(TwoFermionState {
        tensor,
        provenance: Provenance::Helium { variant, normalization: norm },
    })
}

/// `(|ψ>|φ> − |φ>|ψ>) / (2 − 2|<ψ|φ>|²)^(1/2)` for single-particle vectors
/// of length `spec.dim()`. Equal states (up to phase) are Pauli-excluded.
pub fn pauli_pair(spec: &BasisSpec, psi: &[Complex64], phi: &[Complex64], tol: f64) -> Result<TwoFermionState> {
    let dim = spec.dim();
    if psi.len() != dim || phi.len() != dim {
        return Err(Error::Shape(format!(
            "single-particle vectors must have length {dim} (got {} and {})",
            psi.len(),
            phi.len()
        )));
    }
    let psi = unit_vector(psi)?;
    let phi = unit_vector(phi)?;
    let overlap = vec_inner(&psi, &phi);
    if overlap.norm() >= 1.0 - tol {
        return Err(Error::Excluded {
            condition: Condition::PauliEqualStates,
            factor: 2.0 - 2.0 * overlap.norm_sqr(),
        });
    }
    let denom = (2.0 - 2.0 * overlap.norm_sqr()).sqrt();
    let spec = spec.clone();
    let amps = (0..dim * dim)
        .map(|f| {
            let (a, b) = (f / dim, f % dim);
            (psi[a] * phi[b] - phi[a] * psi[b]) / denom
        })
        .collect();
    Ok(TwoFermionState {
        tensor: NFermionTensor::from_amplitudes(2, spec, amps)?,
        provenance: Provenance::PauliPair { overlap },
    })
}

/// Closed-form exclusion verdicts for the three families sharing one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionCatalog {
    pub plus: ExclusionVerdict,
    pub minus: ExclusionVerdict,
    pub star: ExclusionVerdict,
}

impl ExclusionCatalog {
    pub fn get(&self, variant: HeliumVariant) -> ExclusionVerdict {
        match variant {
            HeliumVariant::Plus => self.plus,
            HeliumVariant::Minus => self.minus,
            HeliumVariant::Star => self.star,
        }
    }
}

/// Evaluates the exclusion conditions of `Ψ+`, `Ψ−` and `Ψ*`.
///
/// `Ψ−` and `Ψ*` vanish for a symmetric `M` (`‖M − Mᵀ‖ ≤ tol·‖M‖`); `Ψ+`
/// vanishes for an antisymmetric `M` or parallel spins
/// (`|<s|s′>| ≥ 1 − tol`). Each verdict's `norm_ratio` is the relative
/// measure the threshold was applied to, so it is zero exactly at the
/// degenerate point.
pub fn exclusion_catalog(m: &SpatialMatrix, s: &SpinVector, s2: &SpinVector, tol: f64) -> Result<ExclusionCatalog> {
    let m = unit_matrix(m)?;
    let s = unit_spin(s)?;
    let s2 = unit_spin(s2)?;
    check_spins(&s, &s2)?;
    let norm = m.frobenius_norm();
    let anti = m.exchange_residual(-1.0) / norm;
    let sym = m.exchange_residual(1.0) / norm;
    let spin = 1.0 - s.inner(&s2).norm();

    let minus = ExclusionVerdict::from_ratio(anti, tol, Condition::SymmetricSpatial);
    let star = minus;
    let plus = if sym <= tol {
        ExclusionVerdict::from_ratio(sym, tol, Condition::AntisymmetricSpatial)
    } else {
        ExclusionVerdict::from_ratio(sym.min(spin), tol, Condition::ParallelSpins)
    };
    Ok(ExclusionCatalog { plus, minus, star })
}

/// The pre-state χ whose antisymmetrization is proportional to the numerator
/// of the given family, for use with [`crate::antisym::is_excluded`].
///
/// `Ψ*` comes from `M ⊗ s s`. For `Ψ±` the product `M ⊗ s s′` is used with
/// the opposite family's sector removed, so that `A(χ)` lands entirely in
/// the requested family while χ itself stays nonzero unless both of its
/// exclusion conditions hold at once.
pub fn numerator_prestate(
    variant: HeliumVariant,
    m: &SpatialMatrix,
    s: &SpinVector,
    s2: &SpinVector,
) -> Result<NFermionTensor> {
    check_spins(s, s2)?;
    let half = Complex64::new(0.5, 0.0);
    let product = spin_outer(s, s2);
    match variant {
        HeliumVariant::Star => assemble(m.entries(), &spin_outer(s, s)),
        HeliumVariant::Plus | HeliumVariant::Minus => {
            let (removed_spatial, removed_spin) = if variant == HeliumVariant::Plus {
                (exchange_combination(m, -1.0), &product + spin_outer(s2, s))
            } else {
                (exchange_combination(m, 1.0), &product - spin_outer(s2, s))
            };
            let full = assemble(m.entries(), &product)?;
            let removed = assemble(&(removed_spatial * half), &(removed_spin * half))?;
            full.add_scaled(Complex64::new(-1.0, 0.0), &removed)
        }
    }
}

/// Slater-rank classification of a two-fermion state.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterReport {
    pub slater_rank: usize,
    /// Singular values of the `D×D` amplitude matrix, nonincreasing.
    pub singular_values: Vec<f64>,
    pub entangled: bool,
}

pub(crate) fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Slater rank of an antisymmetric two-particle tensor: half the number of
/// singular values above `rank_tol·σ_max`. Rank 1 means the state is the
/// antisymmetrization of a single product.
pub fn slater_report(t: &NFermionTensor, rank_tol: f64) -> Result<SlaterReport> {
    let a = t.as_matrix()?;
    let norm = a.norm();
    if norm == 0.0 {
        return Err(Error::ZeroState { norm, tol: 0.0 });
    }
    let residual = (&a + a.transpose()).norm();
    if residual > DEFAULT_TOL * norm {
        return Err(Error::NotAntisymmetric { residual });
    }
    let singular_values = singular_values(&a);
    let cutoff = rank_tol * singular_values[0];
    let rank = singular_values.iter().filter(|&&v| v > cutoff).count();
    let slater_rank = rank / 2;
    Ok(SlaterReport {
        slater_rank,
        singular_values,
        entangled: slater_rank >= 2,
    })
}
