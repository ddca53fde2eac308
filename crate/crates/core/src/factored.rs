//! n-fermion states factored as `Υ(x₁…xₙ) ⊗ υ(s₁…sₙ)` with an antisymmetric
//! spatial part `Υ = A(ξ)` and a fully symmetric spin part `υ`.
//!
//! Exclusion here depends on the spatial pre-state alone: if ξ is symmetric in
//! any pair of particles, `A(ξ)` vanishes and so does the full state.

use num_complex::Complex64;

use crate::antisym::Condition;
use crate::perm;
use crate::state::{BasisSpec, NFermionTensor};
use crate::{Error, Result};

/// Dense amplitudes over mode indices only (`dⁿ` entries).
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialTensor {
    n: usize,
    d: usize,
    amps: Vec<Complex64>,
}

/// Dense amplitudes over spin indices only (`Sⁿ` entries).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTensor {
    n: usize,
    s: usize,
    amps: Vec<Complex64>,
}

fn check_len(n: usize, dim: usize, len: usize) -> Result<()> {
    if n == 0 || dim == 0 {
        return Err(Error::Shape(format!("need n >= 1 and dimension >= 1 (n={n}, dim={dim})")));
    }
    let want = dim.pow(n as u32);
    if len != want {
        return Err(Error::Shape(format!("expected {want} amplitudes, got {len}")));
    }
    Ok(())
}

fn product_amps(factors: &[&[Complex64]]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for f in factors {
        amps = amps.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
    }
    amps
}

fn symmetric_pair_list(amps: &[Complex64], n: usize, dim: usize, tol: f64) -> Result<Vec<(usize, usize)>> {
    let norm = perm::norm(amps);
    if norm == 0.0 {
        return Err(Error::ZeroState { norm, tol: 0.0 });
    }
    Ok(perm::slot_pairs(n)
        .filter(|&(a, b)| {
            let swapped = perm::permute(amps, n, dim, &perm::transposition(n, a, b));
            perm::diff_norm(&swapped, amps) <= tol * norm
        })
        .map(|(a, b)| (a + 1, b + 1))
        .collect())
}

impl SpatialTensor {
    pub fn new(n: usize, d: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_len(n, d, amps.len())?;
        Ok(Self { n, d, amps })
    }

    /// `v₁ ⊗ … ⊗ vₙ` for mode vectors of equal length.
    pub fn product(factors: &[&[Complex64]]) -> Result<Self> {
        let d = factors.first().map_or(0, |f| f.len());
        if factors.iter().any(|f| f.len() != d) {
            return Err(Error::Shape("mode vectors differ in length".into()));
        }
        Self::new(factors.len(), d, product_amps(factors))
    }

    pub fn basis(d: usize, modes: &[usize]) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); d.pow(modes.len() as u32)];
        if let Some(&bad) = modes.iter().find(|&&x| x >= d) {
            return Err(Error::Index(format!("mode {bad} outside [0, {d})")));
        }
        let flat = modes.iter().fold(0, |acc, &x| acc * d + x);
        if let Some(a) = amps.get_mut(flat) {
            *a = Complex64::new(1.0, 0.0);
        }
        Self::new(modes.len(), d, amps)
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        perm::norm(&self.amps)
    }
}

impl SpinTensor {
    pub fn new(n: usize, s: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_len(n, s, amps.len())?;
        Ok(Self { n, s, amps })
    }

    pub fn product(factors: &[&[Complex64]]) -> Result<Self> {
        let s = factors.first().map_or(0, |f| f.len());
        if factors.iter().any(|f| f.len() != s) {
            return Err(Error::Shape("spin vectors differ in length".into()));
        }
        Self::new(factors.len(), s, product_amps(factors))
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn spin(&self) -> usize {
        self.s
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        perm::norm(&self.amps)
    }
}

/// Signed permutation sum over mode indices, with the `1/n!` prefactor.
pub fn antisymmetrize_spatial(xi: &SpatialTensor) -> Result<SpatialTensor> {
    if xi.n < 2 {
        return Err(Error::Shape(format!("antisymmetrization needs n >= 2, got {}", xi.n)));
    }
    Ok(SpatialTensor {
        n: xi.n,
        d: xi.d,
        amps: perm::antisymmetrize_dense(&xi.amps, xi.n, xi.d),
    })
}

/// Invariance under every pair swap, within `tol·‖υ‖`.
pub fn is_fully_symmetric(upsilon: &SpinTensor, tol: f64) -> Result<bool> {
    let pairs = symmetric_pair_list(&upsilon.amps, upsilon.n, upsilon.s, tol)?;
    Ok(pairs.len() == upsilon.n * (upsilon.n - 1) / 2)
}

/// 1-based particle pairs in which ξ is symmetric.
pub fn spatial_exclusion_scan(xi: &SpatialTensor, tol: f64) -> Result<Vec<(usize, usize)>> {
    symmetric_pair_list(&xi.amps, xi.n, xi.d, tol)
}

/// Normalized `A_spatial(ξ) ⊗ υ` on composite indices.
pub fn build_factored(xi: &SpatialTensor, upsilon: &SpinTensor, tol: f64) -> Result<NFermionTensor> {
    if xi.n != upsilon.n {
        return Err(Error::Shape(format!(
            "spatial part has n = {}, spin part has n = {}",
            xi.n, upsilon.n
        )));
    }
    if !is_fully_symmetric(upsilon, tol)? {
        return Err(Error::Symmetry("spin factor is not fully symmetric".into()));
    }
    let xi_norm = xi.norm();
    if xi_norm == 0.0 {
        return Err(Error::ZeroState { norm: 0.0, tol: 0.0 });
    }
    let spatial = antisymmetrize_spatial(xi)?;
    let ratio = spatial.norm() / xi_norm;
    if ratio <= tol {
        return Err(Error::Excluded {
            condition: Condition::SymmetricSpatial,
            factor: ratio,
        });
    }
    let scale = 1.0 / (spatial.norm() * upsilon.norm());
    let (n, d, s) = (xi.n, xi.d, upsilon.s);
    let spec = BasisSpec::new(d, s)?;
    let dim = spec.dim();
    let amps = (0..dim.pow(n as u32))
        .map(|mut flat| {
            let (mut xf, mut sf, mut wx, mut ws) = (0, 0, 1, 1);
            for _ in 0..n {
                let k = flat % dim;
                flat /= dim;
                xf += (k / s) * wx;
                sf += (k % s) * ws;
                wx *= d;
                ws *= s;
            }
            spatial.amps[xf] * upsilon.amps[sf] * scale
        })
        .collect();
    NFermionTensor::from_amplitudes(n, spec, amps)
}
