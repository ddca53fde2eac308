//! Schmidt analysis of spatial wavefunctions and the weak entanglement
//! approximation.
//!
//! A spatial wavefunction is factored as `M[x,y] = Σᵢ λᵢ aᵢ[x] bᵢ[y]`. When it
//! is close to rank 1 it can be replaced by `a₁ ⊗ b₁`, which makes the spatial
//! part of `Ψ*` a plain product and lets quantum numbers be attributed to the
//! two-electron state as a whole.

use std::fmt;

use num_complex::Complex64;

use crate::antisym::{Condition, ExclusionVerdict};
use crate::state::{largest_modulus, vec_inner, BasisSpec, ModeLabel, SpatialMatrix, SpinLabel, SpinVector};
use crate::two_fermion::HeliumVariant;
use crate::{Error, Result, NORM_INPUT_TOL};

/// Singular spectrum of a spatial matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtReport {
    /// Nonincreasing, one entry per mode.
    pub singular_values: Vec<f64>,
    pub schmidt_rank: usize,
    /// `λ₂/λ₁`, or 0 at rank 1.
    pub strength: f64,
}

/// A Schmidt factorization with its report.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub report: SchmidtReport,
    /// `aᵢ`, orthonormal.
    pub left: Vec<Vec<Complex64>>,
    /// `bᵢ`, orthonormal.
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    /// `Σᵢ λᵢ aᵢ ⊗ bᵢ`.
    pub fn reconstruct(&self) -> SpatialMatrix {
        let d = self.left.len();
        SpatialMatrix::from_fn(d, |x, y| {
            self.report
                .singular_values
                .iter()
                .zip(self.left.iter().zip(&self.right))
                .map(|(&l, (a, b))| a[x] * b[y] * l)
                .sum()
        })
        .expect("square factorization")
    }
}

/// Relative gap below which two singular values count as degenerate when
/// ordering factors.
const TIE_TOL: f64 = 1e-12;

pub fn schmidt(m: &SpatialMatrix, rank_tol: f64) -> Result<SchmidtDecomposition> {
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::ZeroState { norm, tol: 0.0 });
    }
    let d = m.modes();
    let svd = m.entries().clone().svd(true, true);
    let u = svd.u.expect("left vectors requested");
    let v_t = svd.v_t.expect("right vectors requested");
    // M = U Σ Vᴴ, so M[x,y] = Σ λᵢ U[x,i] Vᴴ[i,y]
    let mut triples: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..d)
        .map(|i| {
            let a: Vec<Complex64> = u.column(i).iter().copied().collect();
            let b: Vec<Complex64> = v_t.row(i).iter().copied().collect();
            (svd.singular_values[i], a, b)
        })
        .collect();
    let top = triples.iter().map(|t| t.0).fold(0.0, f64::max);
    triples.sort_by(|x, y| {
        if (x.0 - y.0).abs() <= TIE_TOL * top {
            largest_modulus(&x.1).cmp(&largest_modulus(&y.1))
        } else {
            y.0.total_cmp(&x.0)
        }
    });

    let singular_values: Vec<f64> = triples.iter().map(|t| t.0).collect();
    let lead = singular_values[0];
    let schmidt_rank = singular_values.iter().filter(|&&l| l > rank_tol * lead).count();
    let strength = if schmidt_rank >= 2 { singular_values[1] / lead } else { 0.0 };
    let (left, right) = triples.into_iter().map(|(_, a, b)| (a, b)).unzip();
    Ok(SchmidtDecomposition {
        report: SchmidtReport {
            singular_values,
            schmidt_rank,
            strength,
        },
        left,
        right,
    })
}

/// Result of replacing a spatial wavefunction by its leading Schmidt term.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Truncation {
    pub psi: Vec<Complex64>,
    pub phi: Vec<Complex64>,
    /// `ψ ⊗ φ`, unit norm.
    pub truncated: SpatialMatrix,
    /// `1 − λ₁²`.
    pub discarded_weight: f64,
}

/// Rotates `v` so its first nonzero component is real and positive.
fn fix_phase(v: &[Complex64]) -> Vec<Complex64> {
    let Some(first) = v.iter().find(|a| a.norm() > 1e-14) else {
        return v.to_vec();
    };
    let rot = first.conj() / first.norm();
    v.iter().map(|a| a * rot).collect()
}

/// Weak entanglement approximation `ψ(x,y) ≈ ψ(x)φ(y)`.
pub fn rank1_truncate(m: &SpatialMatrix) -> Result<Rank1Truncation> {
    let dec = schmidt(m, crate::DEFAULT_RANK_TOL)?;
    let psi = fix_phase(&dec.left[0]);
    let phi = fix_phase(&dec.right[0]);
    let lead = dec.report.singular_values[0];
    let truncated = SpatialMatrix::outer(&psi, &phi)?;
    Ok(Rank1Truncation {
        psi,
        phi,
        truncated,
        discarded_weight: 1.0 - lead * lead,
    })
}

/// An unordered pair, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnorderedPair<T>(T, T);

impl<T: Ord> UnorderedPair<T> {
    pub fn new(a: T, b: T) -> Self {
        if a <= b {
            Self(a, b)
        } else {
            Self(b, a)
        }
    }

    pub fn first(&self) -> &T {
        &self.0
    }

    pub fn second(&self) -> &T {
        &self.1
    }

    pub fn is_equal_pair(&self) -> bool {
        self.0 == self.1
    }
}

impl<T: fmt::Display> fmt::Display for UnorderedPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// Quantum numbers of a two-electron state in the weak entanglement
/// approximation. The labels belong to the pair: the type stores one
/// unordered pair of spatial labels and one of spin labels, and never
/// associates a spatial label with a spin label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumNumberSet {
    spatial: UnorderedPair<ModeLabel>,
    spin: UnorderedPair<SpinLabel>,
}

impl QuantumNumberSet {
    pub fn spatial(&self) -> UnorderedPair<ModeLabel> {
        self.spatial
    }

    pub fn spin(&self) -> UnorderedPair<SpinLabel> {
        self.spin
    }

    /// Always true: the set is attributed to the state as a whole.
    pub fn joint(&self) -> bool {
        true
    }

    pub fn all_equal(&self) -> bool {
        self.spatial.is_equal_pair() && self.spin.is_equal_pair()
    }
}

/// Component index of a spin vector that is a basis state up to phase.
fn basis_component(s: &SpinVector) -> Result<usize> {
    let k = largest_modulus(s.amplitudes());
    let weight = s.amplitudes()[k].norm_sqr() / s.norm().powi(2);
    if (1.0 - weight).abs() > NORM_INPUT_TOL {
        return Err(Error::Label(format!(
            "spin vector is a superposition (weight {weight:.17} on component {k}); m_s is not sharp"
        )));
    }
    Ok(k)
}

/// Labels the pair of modes and spins of `Ψ̃±` or `Ψ̃*`. For `Star` both
/// electrons carry spin `s`.
pub fn quantum_number_set(
    variant: HeliumVariant,
    psi_mode: usize,
    phi_mode: usize,
    s: &SpinVector,
    s2: &SpinVector,
    spec: &BasisSpec,
) -> Result<QuantumNumberSet> {
    let modes = spec
        .mode_labels()
        .ok_or_else(|| Error::Config("basis carries no mode labels".into()))?;
    let spins = spec
        .spin_labels()
        .ok_or_else(|| Error::Config("basis carries no spin labels".into()))?;
    let mode = |x: usize| {
        modes
            .get(x)
            .copied()
            .ok_or_else(|| Error::Index(format!("mode {x} outside [0, {})", modes.len())))
    };
    let spin_label = |v: &SpinVector| -> Result<SpinLabel> {
        if v.len() != spins.len() {
            return Err(Error::Shape(format!(
                "spin vector has {} components, basis has {}",
                v.len(),
                spins.len()
            )));
        }
        Ok(spins[basis_component(v)?])
    };
    let first = spin_label(s)?;
    let second = match variant {
        HeliumVariant::Star => first,
        HeliumVariant::Plus | HeliumVariant::Minus => spin_label(s2)?,
    };
    Ok(QuantumNumberSet {
        spatial: UnorderedPair::new(mode(psi_mode)?, mode(phi_mode)?),
        spin: UnorderedPair::new(first, second),
    })
}

/// Pauli verdict for `Ψ̃* ∝ (ψ(x)φ(y) − ψ(y)φ(x))|s>|s>`: excluded exactly
/// when `ψ` and `φ` coincide up to phase (`|<ψ|φ>| ≥ 1 − tol`). The spins of
/// `Ψ̃*` are equal by construction, so this is the case where all quantum
/// numbers agree. `norm_ratio` carries `1 − |<ψ|φ>|`.
pub fn pauli_verdict_star(psi: &[Complex64], phi: &[Complex64], s: &SpinVector, tol: f64) -> Result<ExclusionVerdict> {
    if psi.len() != phi.len() {
        return Err(Error::Shape(format!(
            "mode vectors differ in length ({} vs {})",
            psi.len(),
            phi.len()
        )));
    }
    for norm in [crate::perm::norm(psi), crate::perm::norm(phi), s.norm()] {
        if (norm - 1.0).abs() > NORM_INPUT_TOL {
            return Err(Error::Normalization { norm });
        }
    }
    let gap = 1.0 - vec_inner(psi, phi).norm();
    Ok(ExclusionVerdict::from_ratio(gap, tol, Condition::PauliEqualStates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::SpinLabel;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag(a: f64, b: f64) -> SpatialMatrix {
        SpatialMatrix::from_fn(2, |x, y| match (x, y) {
            (0, 0) => c(a),
            (1, 1) => c(b),
            _ => c(0.0),
        })
        .unwrap()
    }

    #[test]
    fn schmidt_examples() {
        let single = SpatialMatrix::from_fn(2, |x, y| if (x, y) == (0, 1) { c(1.0) } else { c(0.0) }).unwrap();
        let r = schmidt(&single, 1e-8).unwrap().report;
        assert!((r.singular_values[0] - 1.0).abs() < 1e-15 && r.singular_values[1].abs() < 1e-15);
        assert_eq!((r.schmidt_rank, r.strength), (1, 0.0));

        // [[1,1],[1,-1]]/2
        let h = SpatialMatrix::from_fn(2, |x, y| c(if x == 1 && y == 1 { -0.5 } else { 0.5 })).unwrap();
        let r = schmidt(&h, 1e-8).unwrap().report;
        for l in &r.singular_values {
            assert!((l - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert_eq!(r.schmidt_rank, 2);
        assert!((r.strength - 1.0).abs() < 1e-14);

        let r = schmidt(&diag(0.9f64.sqrt(), 0.1f64.sqrt()), 1e-8).unwrap().report;
        assert!((r.singular_values[0] - 0.9f64.sqrt()).abs() < 1e-15);
        assert!((r.singular_values[1] - 0.1f64.sqrt()).abs() < 1e-15);
        assert!((r.strength - 1.0 / 3.0).abs() < 1e-15);

        let zero = SpatialMatrix::from_fn(2, |_, _| c(0.0)).unwrap();
        assert!(matches!(schmidt(&zero, 1e-8), Err(Error::ZeroState { .. })));
    }

    #[test]
    fn truncation_examples() {
        let psi = [c(0.6), Complex64::new(0.0, 0.8)];
        let phi = [Complex64::new(0.0, 1.0), c(0.0)];
        let m = SpatialMatrix::outer(&psi, &phi).unwrap();
        let t = rank1_truncate(&m).unwrap();
        assert!(t.discarded_weight.abs() < 1e-15);
        let diff = (t.truncated.entries() - m.entries() * Complex64::new(0.0, -1.0)).norm();
        assert!(diff < 1e-14, "{diff}");
        assert!(t.psi[0].im == 0.0 && t.psi[0].re > 0.0);
        assert!(t.phi[0].im == 0.0 && t.phi[0].re > 0.0);

        let t = rank1_truncate(&diag(0.9f64.sqrt(), 0.1f64.sqrt())).unwrap();
        assert!((t.discarded_weight - 0.1).abs() < 1e-15);
        assert!((t.truncated.get(0, 0) - c(1.0)).norm() < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = rank1_truncate(&diag(h, h)).unwrap();
        assert!((t.discarded_weight - 0.5).abs() < 1e-15);
        assert!((t.truncated.get(0, 0) - c(1.0)).norm() < 1e-15, "lowest mode index wins the tie");
    }

    fn labeled() -> BasisSpec {
        BasisSpec::new(3, 2)
            .unwrap()
            .with_mode_labels(vec![ModeLabel::new(1, 0, 0), ModeLabel::new(2, 0, 0), ModeLabel::new(2, 1, 0)])
            .unwrap()
            .with_spin_labels(SpinLabel::ladder(2))
            .unwrap()
    }

    #[test]
    fn quantum_number_examples() {
        let (up, down) = (SpinVector::up(), SpinVector::down());
        let q = quantum_number_set(HeliumVariant::Minus, 0, 1, &up, &down, &labeled()).unwrap();
        assert_eq!(q.spatial().to_string(), "{1s, 2s}");
        assert_eq!(q.spin().to_string(), "{-1/2, +1/2}");
        assert!(q.joint());

        let q = quantum_number_set(HeliumVariant::Star, 0, 0, &up, &down, &labeled()).unwrap();
        assert_eq!(q.spatial().to_string(), "{1s, 1s}");
        assert_eq!(q.spin().to_string(), "{+1/2, +1/2}");
        assert!(q.all_equal());

        let q = quantum_number_set(HeliumVariant::Star, 2, 0, &up, &up, &labeled()).unwrap();
        assert_eq!(q.spatial().to_string(), "{1s, 2p0}");

        let phased = SpinVector::new(vec![c(0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let q = quantum_number_set(HeliumVariant::Plus, 0, 1, &up, &phased, &labeled()).unwrap();
        assert!(!q.spin().is_equal_pair());
    }

    #[test]
    fn quantum_number_errors() {
        let up = SpinVector::up();
        let bare = BasisSpec::new(3, 2).unwrap();
        assert!(matches!(
            quantum_number_set(HeliumVariant::Star, 0, 1, &up, &up, &bare),
            Err(Error::Config(_))
        ));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mixed = SpinVector::new(vec![c(h), c(h)]).unwrap();
        assert!(matches!(
            quantum_number_set(HeliumVariant::Minus, 0, 1, &up, &mixed, &labeled()),
            Err(Error::Label(_))
        ));
    }

    #[test]
    fn pauli_star_examples() {
        let up = SpinVector::up();
        let e0 = [c(1.0), c(0.0)];
        let e1 = [c(0.0), c(1.0)];
        assert!(pauli_verdict_star(&e0, &e0, &up, 1e-10).unwrap().excluded);
        let v = pauli_verdict_star(&e0, &e1, &up, 1e-10).unwrap();
        assert!(!v.excluded);
        assert_eq!(v.condition, Condition::None);
        let ie0 = [Complex64::new(0.0, 1.0), c(0.0)];
        let v = pauli_verdict_star(&e0, &ie0, &up, 1e-10).unwrap();
        assert!(v.excluded);
        assert_eq!(v.condition, Condition::PauliEqualStates);
    }
}
