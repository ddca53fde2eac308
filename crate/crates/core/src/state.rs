//! Basis description, dense n-particle tensors and elementary operations.
//!
//! Single-particle states live on a composite index `k = x·S + σ` combining a
//! spatial mode `x ∈ [0, d)` with a spin component `σ ∈ [0, S)`. An n-particle
//! tensor stores all `D^n` amplitudes (`D = d·S`) in row-major order with the
//! first particle slot most significant.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::perm;
use crate::{Error, Result, DEFAULT_TOL};

/// Hydrogen-like `(n, l, m_l)` labels attached to a spatial mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub n: i32,
    pub l: i32,
    pub ml: i32,
}

impl ModeLabel {
    pub fn new(n: i32, l: i32, ml: i32) -> Self {
        Self { n, l, ml }
    }
}

impl fmt::Display for ModeLabel {
    /// Spectroscopic notation: `1s`, `2p0`, `3d-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const LETTERS: &[u8] = b"spdfghik";
        match usize::try_from(self.l).ok().and_then(|l| LETTERS.get(l)) {
            Some(&c) if self.l == 0 => write!(f, "{}{}", self.n, c as char),
            Some(&c) => write!(f, "{}{}{}", self.n, c as char, self.ml),
            None => write!(f, "(n={},l={},ml={})", self.n, self.l, self.ml),
        }
    }
}

/// A spin projection `m_s = num/den`, kept in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinLabel {
    num: i32,
    den: i32,
}

impl SpinLabel {
    pub fn new(num: i32, den: i32) -> Result<Self> {
        if den == 0 {
            return Err(Error::Config("spin label with zero denominator".into()));
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i32;
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Self {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn num(&self) -> i32 {
        self.num
    }

    pub fn den(&self) -> i32 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Labels `j, j-1, …, -j` for a spin of dimension `s = 2j + 1`.
    pub fn ladder(s: usize) -> Vec<SpinLabel> {
        let top = s as i32 - 1;
        (0..s as i32)
            .map(|sigma| SpinLabel::new(top - 2 * sigma, 2).expect("nonzero denominator"))
            .collect()
    }
}

impl PartialOrd for SpinLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpinLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i64 * other.den as i64).cmp(&(other.num as i64 * self.den as i64))
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.num > 0 { "+" } else { "" };
        if self.den == 1 {
            write!(f, "{sign}{}", self.num)
        } else {
            write!(f, "{sign}{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Dimensions of the single-particle space and optional physical labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSpec {
    d: usize,
    spin: usize,
    mode_labels: Option<Vec<ModeLabel>>,
    spin_labels: Option<Vec<SpinLabel>>,
}

impl BasisSpec {
    pub fn new(d: usize, spin: usize) -> Result<Self> {
        if d == 0 || spin == 0 {
            return Err(Error::Config(format!(
                "basis dimensions must be positive (d={d}, spin={spin})"
            )));
        }
        Ok(Self {
            d,
            spin,
            mode_labels: None,
            spin_labels: None,
        })
    }

    pub fn with_mode_labels(mut self, labels: Vec<ModeLabel>) -> Result<Self> {
        if labels.len() != self.d {
            return Err(Error::Config(format!(
                "expected {} mode labels, got {}",
                self.d,
                labels.len()
            )));
        }
        self.mode_labels = Some(labels);
        Ok(self)
    }

    pub fn with_spin_labels(mut self, labels: Vec<SpinLabel>) -> Result<Self> {
        if labels.len() != self.spin {
            return Err(Error::Config(format!(
                "expected {} spin labels, got {}",
                self.spin,
                labels.len()
            )));
        }
        self.spin_labels = Some(labels);
        Ok(self)
    }

    /// Number of spatial modes.
    pub fn modes(&self) -> usize {
        self.d
    }

    /// Spin dimension.
    pub fn spin(&self) -> usize {
        self.spin
    }

    /// Composite single-particle dimension `d·S`.
    pub fn dim(&self) -> usize {
        self.d * self.spin
    }

    pub fn mode_labels(&self) -> Option<&[ModeLabel]> {
        self.mode_labels.as_deref()
    }

    pub fn spin_labels(&self) -> Option<&[SpinLabel]> {
        self.spin_labels.as_deref()
    }

    /// Same dimensions, labels dropped.
    pub fn unlabeled(&self) -> Self {
        Self {
            d: self.d,
            spin: self.spin,
            mode_labels: None,
            spin_labels: None,
        }
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.d == other.d && self.spin == other.spin
    }

    /// Inverse of [`composite_index`].
    pub fn split_index(&self, k: usize) -> Result<(usize, usize)> {
        if k >= self.dim() {
            return Err(Error::Index(format!(
                "composite index {k} outside [0, {})",
                self.dim()
            )));
        }
        Ok((k / self.spin, k % self.spin))
    }
}

/// Spatial-major composite index `x·S + σ`.
pub fn composite_index(x: usize, sigma: usize, spec: &BasisSpec) -> Result<usize> {
    if x >= spec.d {
        return Err(Error::Index(format!("mode {x} outside [0, {})", spec.d)));
    }
    if sigma >= spec.spin {
        return Err(Error::Index(format!("spin {sigma} outside [0, {})", spec.spin)));
    }
    Ok(x * spec.spin + sigma)
}

/// A spin state `|s>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinVector {
    amps: Vec<Complex64>,
}

impl SpinVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Shape("spin vector must have at least one component".into()));
        }
        Ok(Self { amps })
    }

    /// The basis state with all weight on component `sigma`.
    pub fn basis(spin: usize, sigma: usize) -> Result<Self> {
        if sigma >= spin {
            return Err(Error::Index(format!("spin {sigma} outside [0, {spin})")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); spin];
        amps[sigma] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn up() -> Self {
        Self::basis(2, 0).expect("valid basis index")
    }

    pub fn down() -> Self {
        Self::basis(2, 1).expect("valid basis index")
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        perm::norm(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinVector) -> Complex64 {
        vec_inner(&self.amps, &other.amps)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= DEFAULT_TOL {
            return Err(Error::ZeroState { norm: n, tol: DEFAULT_TOL });
        }
        Ok(Self {
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }
}

pub(crate) fn vec_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A two-particle spatial wavefunction `ψ(x, y)` stored as `M[x, y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMatrix {
    entries: DMatrix<Complex64>,
}

impl SpatialMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::Shape(format!(
                "spatial matrix must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries })
    }

    pub fn from_fn(d: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(d, d, f))
    }

    /// `ψ(x)φ(y)` for two mode vectors of equal length.
    pub fn outer(psi: &[Complex64], phi: &[Complex64]) -> Result<Self> {
        if psi.len() != phi.len() {
            return Err(Error::Shape(format!(
                "mode vectors differ in length ({} vs {})",
                psi.len(),
                phi.len()
            )));
        }
        Self::from_fn(psi.len(), |x, y| psi[x] * phi[y])
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.entries[(x, y)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Plain (unconjugated) transpose: `ψ(y, x)`.
    pub fn transpose(&self) -> Self {
        Self {
            entries: self.entries.transpose(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.frobenius_norm();
        if n <= DEFAULT_TOL {
            return Err(Error::ZeroState { norm: n, tol: DEFAULT_TOL });
        }
        Ok(Self {
            entries: self.entries.map(|a| a / n),
        })
    }

    /// `‖M + sign·Mᵀ‖` for `sign = ±1`.
    pub(crate) fn exchange_residual(&self, sign: f64) -> f64 {
        let d = self.modes();
        let mut acc = 0.0;
        for x in 0..d {
            for y in 0..d {
                acc += (self.entries[(x, y)] + self.entries[(y, x)] * sign).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// Dense amplitude tensor of an n-fermion state over composite indices.
#[derive(Debug, Clone, PartialEq)]
pub struct NFermionTensor {
    n: usize,
    spec: BasisSpec,
    amps: Vec<Complex64>,
}

impl NFermionTensor {
    pub fn zeros(n: usize, spec: BasisSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("particle count must be positive".into()));
        }
        let len = spec.dim().pow(n as u32);
        Ok(Self {
            n,
            spec,
            amps: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    pub fn from_amplitudes(n: usize, spec: BasisSpec, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("particle count must be positive".into()));
        }
        let len = spec.dim().pow(n as u32);
        if amps.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} amplitudes for n={n}, D={}, got {}",
                spec.dim(),
                amps.len()
            )));
        }
        Ok(Self { n, spec, amps })
    }

    /// The unit tensor `e_{k_1} ⊗ … ⊗ e_{k_n}`.
    pub fn basis(spec: BasisSpec, index: &[usize]) -> Result<Self> {
        let mut t = Self::zeros(index.len(), spec)?;
        let flat = t.flat_index(index)?;
        t.amps[flat] = Complex64::new(1.0, 0.0);
        Ok(t)
    }

    /// Product `v_1 ⊗ … ⊗ v_n` of single-particle vectors of length `D`.
    pub fn product(spec: BasisSpec, factors: &[&[Complex64]]) -> Result<Self> {
        let dim = spec.dim();
        if factors.is_empty() {
            return Err(Error::Shape("product needs at least one factor".into()));
        }
        if let Some(bad) = factors.iter().find(|f| f.len() != dim) {
            return Err(Error::Shape(format!(
                "single-particle vector has length {}, expected {dim}",
                bad.len()
            )));
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amps = amps
                .iter()
                .flat_map(|a| f.iter().map(move |b| a * b))
                .collect();
        }
        Self::from_amplitudes(factors.len(), spec, amps)
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    /// Composite single-particle dimension.
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn flat_index(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.n {
            return Err(Error::Shape(format!(
                "index tuple has {} entries, tensor has {} slots",
                index.len(),
                self.n
            )));
        }
        let dim = self.dim();
        index.iter().try_fold(0usize, |acc, &k| {
            if k >= dim {
                Err(Error::Index(format!("composite index {k} outside [0, {dim})")))
            } else {
                Ok(acc * dim + k)
            }
        })
    }

    /// Multi-index of a flat position.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let dim = self.dim();
        let mut idx = vec![0; self.n];
        for slot in idx.iter_mut().rev() {
            *slot = flat % dim;
            flat /= dim;
        }
        idx
    }

    pub fn get(&self, index: &[usize]) -> Result<Complex64> {
        Ok(self.amps[self.flat_index(index)?])
    }

    pub fn set(&mut self, index: &[usize], value: Complex64) -> Result<()> {
        let flat = self.flat_index(index)?;
        self.amps[flat] = value;
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        perm::norm(&self.amps)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_amplitudes(|a| a * c)
    }

    pub(crate) fn map_amplitudes(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            n: self.n,
            spec: self.spec.clone(),
            amps: self.amps.iter().copied().map(f).collect(),
        }
    }

    pub(crate) fn with_amplitudes(&self, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), self.amps.len());
        Self {
            n: self.n,
            spec: self.spec.clone(),
            amps,
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || !self.spec.same_shape(&other.spec) {
            return Err(Error::Shape(format!(
                "tensors differ in shape (n={}, D={} vs n={}, D={})",
                self.n,
                self.dim(),
                other.n,
                other.dim()
            )));
        }
        Ok(())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.with_amplitudes(
            self.amps.iter().zip(&other.amps).map(|(a, b)| a + c * b).collect(),
        ))
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        Ok(perm::diff_norm(&self.amps, &other.amps))
    }

    /// The `D×D` amplitude matrix `A[k_1, k_2]` of a two-particle tensor.
    pub fn as_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n != 2 {
            return Err(Error::Shape(format!(
                "matrix view needs n = 2, tensor has n = {}",
                self.n
            )));
        }
        let dim = self.dim();
        Ok(DMatrix::from_fn(dim, dim, |i, j| self.amps[i * dim + j]))
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &NFermionTensor, b: &NFermionTensor) -> Result<Complex64> {
    a.check_shape(b)?;
    Ok(vec_inner(&a.amps, &b.amps))
}

/// Rescales to unit norm. A norm at or below `tol` is reported as
/// [`Error::ZeroState`]; this is what normalizing an excluded state produces.
pub fn normalize(t: &NFermionTensor, tol: f64) -> Result<NFermionTensor> {
    let n = t.norm();
    if n <= tol {
        return Err(Error::ZeroState { norm: n, tol });
    }
    Ok(t.map_amplitudes(|a| a / n))
}

/// Whether `a = c·b` for a unit complex `c`, within `tol·‖a‖`. The phase is
/// read off the largest-modulus amplitude of `a`.
pub fn equal_up_to_phase(a: &NFermionTensor, b: &NFermionTensor, tol: f64) -> Result<bool> {
    a.check_shape(b)?;
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroState {
            norm: na.min(nb),
            tol: 0.0,
        });
    }
    let pivot = largest_modulus(&a.amps);
    let bp = b.amps[pivot];
    if bp.norm() == 0.0 {
        return Ok(false);
    }
    let ratio = a.amps[pivot] / bp;
    let c = ratio / ratio.norm();
    let residual = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x - c * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(residual <= tol * na)
}

/// Index of the first entry of maximal modulus.
pub(crate) fn largest_modulus(v: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (i, a) in v.iter().enumerate() {
        let m = a.norm_sqr();
        if m > best_mod {
            best = i;
            best_mod = m;
        }
    }
    best
}

/// Which particle a reduced density matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A single-particle density matrix over the composite index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Shape(format!(
                "density matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Reduced density matrix of a two-particle state with the other particle
/// traced out.
pub fn partial_trace(t: &NFermionTensor, keep: Subsystem) -> Result<DensityMatrix> {
    let a = t.as_matrix()?;
    let rho = match keep {
        Subsystem::First => &a * a.adjoint(),
        // ρ₂[i, j] = Σ_k A[k, i]·conj(A[k, j]) = (Aᵀ·conj(A))[i, j]
        Subsystem::Second => a.transpose() * a.conjugate(),
    };
    DensityMatrix::new(rho)
}

/// `tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> Result<f64> {
    let residual = rho.hermiticity_residual();
    if residual > DEFAULT_TOL {
        return Err(Error::InvalidDensity(format!(
            "not Hermitian (residual {residual:e})"
        )));
    }
    Ok(rho.entries.iter().map(|a| a.norm_sqr()).sum())
}
