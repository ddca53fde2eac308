//! Random generators and independent oracles shared by the integration
//! suites. Nothing here calls into the code paths it is used to check.
#![allow(dead_code)]

use fermiex::state::{BasisSpec, NFermionTensor, SpatialMatrix, SpinVector};
use fermiex::Complex64;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vec(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

pub fn unit_vec(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    let v = gaussian_vec(rng, len);
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

pub fn random_spin(rng: &mut impl Rng, s: usize) -> SpinVector {
    SpinVector::new(unit_vec(rng, s)).unwrap()
}

pub fn random_tensor(rng: &mut impl Rng, n: usize, spec: &BasisSpec) -> NFermionTensor {
    let len = spec.dim().pow(n as u32);
    NFermionTensor::from_amplitudes(n, spec.clone(), gaussian_vec(rng, len)).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, d: usize) -> SpatialMatrix {
    SpatialMatrix::new(DMatrix::from_fn(d, d, |_, _| gaussian(rng)))
        .unwrap()
        .normalized()
        .unwrap()
}

/// `(M + sign·Mᵀ)` renormalized.
pub fn exchange_part(m: &SpatialMatrix, sign: f64) -> SpatialMatrix {
    SpatialMatrix::new(m.entries() + m.entries().transpose() * c(sign))
        .unwrap()
        .normalized()
        .unwrap()
}

pub fn rank1_matrix(rng: &mut impl Rng, d: usize) -> SpatialMatrix {
    SpatialMatrix::outer(&unit_vec(rng, d), &unit_vec(rng, d)).unwrap()
}

/// `v⊗…⊗v` spliced into slots `i`, `j` (0-based) of an otherwise random product.
pub fn product_with_repeat(rng: &mut impl Rng, n: usize, spec: &BasisSpec, i: usize, j: usize) -> NFermionTensor {
    let dim = spec.dim();
    let mut factors: Vec<Vec<Complex64>> = (0..n).map(|_| unit_vec(rng, dim)).collect();
    factors[j] = factors[i].clone();
    let refs: Vec<&[Complex64]> = factors.iter().map(|f| f.as_slice()).collect();
    NFermionTensor::product(spec.clone(), &refs).unwrap()
}

/// Product of `n` mutually orthonormal vectors (Gram-Schmidt on Gaussians).
pub fn orthonormal_product(rng: &mut impl Rng, n: usize, spec: &BasisSpec) -> NFermionTensor {
    let dim = spec.dim();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    while basis.len() < n {
        let mut v = gaussian_vec(rng, dim);
        for b in &basis {
            let p: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= p * bi;
            }
        }
        let nv = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|a| a / nv).collect());
    }
    let refs: Vec<&[Complex64]> = basis.iter().map(|f| f.as_slice()).collect();
    NFermionTensor::product(spec.clone(), &refs).unwrap()
}

/// Random unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> DMatrix<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < d {
        let mut v = gaussian_vec(rng, d);
        for b in &cols {
            let p: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= p * bi;
            }
        }
        let nv = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|a| a / nv).collect());
    }
    DMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Symmetrizes `t` in 0-based slots `(i, j)` by explicit index exchange.
pub fn symmetrize_pair(t: &NFermionTensor, i: usize, j: usize) -> NFermionTensor {
    let amps = t.amplitudes();
    let mut out = vec![c(0.0); amps.len()];
    for (flat, slot) in out.iter_mut().enumerate() {
        let mut idx = t.unflatten(flat);
        let a = amps[flat];
        idx.swap(i, j);
        let b = t.get(&idx).unwrap();
        *slot = (a + b) * 0.5;
    }
    NFermionTensor::from_amplitudes(t.particles(), t.spec().clone(), out).unwrap()
}

// ---- brute-force antisymmetrizer ----

/// All permutations of `0..n` in lexicographic order, by recursion on the
/// smallest unused element.
pub fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(n, prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn inversion_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(1/n!) Σ_σ sgn(σ) χ[k_σ(1)…k_σ(n)]` entry by entry, summing the
/// permutations in lexicographic order so the result is bitwise comparable.
pub fn brute_antisymmetrize(t: &NFermionTensor) -> Vec<Complex64> {
    let n = t.particles();
    let perms = lex_permutations(n);
    let signs: Vec<i32> = perms.iter().map(|p| inversion_sign(p)).collect();
    let fact: u64 = (1..=n as u64).product();
    let inv = 1.0 / fact as f64;
    (0..t.amplitudes().len())
        .map(|flat| {
            let idx = t.unflatten(flat);
            let mut acc = c(0.0);
            for (p, &sg) in perms.iter().zip(&signs) {
                let src: Vec<usize> = p.iter().map(|&m| idx[m]).collect();
                let v = t.get(&src).unwrap();
                if sg > 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            acc * inv
        })
        .collect()
}

// ---- Gaussian-elimination rank ----

/// Rank by complex Gaussian elimination with partial pivoting; pivots below
/// `tol·max|a_ij|` count as zero.
pub fn gauss_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (piv, best) = (rank..rows)
            .map(|r| (r, a[(r, col)].norm()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol * scale {
            continue;
        }
        a.swap_rows(rank, piv);
        for r in rank + 1..rows {
            let f = a[(r, col)] / a[(rank, col)];
            for k in col..cols {
                let v = a[(rank, k)];
                a[(r, k)] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Two-particle amplitude matrix, built independently of `as_matrix`.
pub fn amplitude_matrix(t: &NFermionTensor) -> DMatrix<Complex64> {
    let dim = t.dim();
    DMatrix::from_fn(dim, dim, |i, j| t.get(&[i, j]).unwrap())
}
