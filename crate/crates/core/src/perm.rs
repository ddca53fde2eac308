//! Permutations of tensor slots and the dense signed permutation sum.

use num_complex::Complex64;

/// Lexicographic permutation iterator over `0..n`, yielding each permutation
/// together with its sign. The parity is updated from the swaps performed by
/// the next-permutation step instead of being recounted.
pub(crate) struct Permutations {
    current: Vec<usize>,
    odd: bool,
    done: bool,
}

impl Permutations {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            current: (0..n).collect(),
            odd: false,
            done: false,
        }
    }

    fn advance(&mut self) {
        let a = &mut self.current;
        let n = a.len();
        if n < 2 {
            self.done = true;
            return;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| a[i] < a[i + 1]) else {
            self.done = true;
            return;
        };
        let j = (i + 1..n).rev().find(|&j| a[j] > a[i]).expect("pivot successor");
        a.swap(i, j);
        let tail = n - i - 1;
        a[i + 1..].reverse();
        // one swap plus floor(tail / 2) swaps for the reversal
        if (1 + tail / 2) % 2 == 1 {
            self.odd = !self.odd;
        }
    }
}

impl Iterator for Permutations {
    type Item = (Vec<usize>, bool);

    /// Yields `(permutation, is_odd)`.
    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = (self.current.clone(), self.odd);
        self.advance();
        Some(item)
    }
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Row-major strides for an `n`-slot tensor with `dim` values per slot.
pub(crate) fn strides(n: usize, dim: usize) -> Vec<usize> {
    let mut s = vec![1usize; n];
    for m in (0..n.saturating_sub(1)).rev() {
        s[m] = s[m + 1] * dim;
    }
    s
}

/// For each output flat index `k`, the flat index of the source entry read by
/// the permuted tensor `(σχ)[k_1..k_n] = χ[k_σ(1)..k_σ(n)]`.
pub(crate) fn source_indices(n: usize, dim: usize, perm: &[usize]) -> Vec<usize> {
    let st = strides(n, dim);
    // slot p of the output lands at position m of the source, where perm[m] = p
    let mut src_stride = vec![0usize; n];
    for (m, &p) in perm.iter().enumerate() {
        src_stride[p] = st[m];
    }
    let len = dim.pow(n as u32);
    let mut out = Vec::with_capacity(len);
    let mut digits = vec![0usize; n];
    let mut src = 0usize;
    for _ in 0..len {
        out.push(src);
        // odometer increment on the output multi-index
        for p in (0..n).rev() {
            digits[p] += 1;
            src += src_stride[p];
            if digits[p] < dim {
                break;
            }
            src -= src_stride[p] * dim;
            digits[p] = 0;
        }
    }
    out
}

pub(crate) fn permute(amps: &[Complex64], n: usize, dim: usize, perm: &[usize]) -> Vec<Complex64> {
    source_indices(n, dim, perm).into_iter().map(|s| amps[s]).collect()
}

/// `perm` that exchanges the 0-based slots `a` and `b`.
pub(crate) fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

/// `(1/n!) Σ_σ sgn(σ) σχ`, accumulated per entry in lexicographic permutation
/// order and scaled once at the end.
pub(crate) fn antisymmetrize_dense(amps: &[Complex64], n: usize, dim: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (perm, odd) in Permutations::new(n) {
        let src = source_indices(n, dim, &perm);
        for (a, &s) in acc.iter_mut().zip(&src) {
            if odd {
                *a -= amps[s];
            } else {
                *a += amps[s];
            }
        }
    }
    let inv = 1.0 / factorial(n) as f64;
    for a in &mut acc {
        *a *= inv;
    }
    acc
}

pub(crate) fn norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn sum_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x + y).norm_sqr()).sum::<f64>().sqrt()
}

/// All unordered slot pairs `(i, j)` with `i < j`, 0-based, lexicographic.
pub(crate) fn slot_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}
