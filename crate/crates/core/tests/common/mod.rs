#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;
use schmidt_core::numlin::{inner, norm, re};
use schmidt_core::{BipartitePureState, Matrix, C64};

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized state with i.i.d. complex Gaussian amplitudes.
pub fn random_state(rng: &mut impl Rng, latin: usize, greek: usize) -> BipartitePureState {
    let data = (0..latin * greek).map(|_| gaussian(rng)).collect();
    let amps = Matrix::new(latin, greek, data).unwrap();
    BipartitePureState::new(labels("l", latin), labels("g", greek), amps)
        .unwrap()
        .normalized()
        .unwrap()
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt). Returns `None`
/// when the columns are numerically dependent.
pub fn orthonormalize(m: &Matrix) -> Option<Matrix> {
    let n = m.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let proj = inner(&cols[k], &cols[j]);
            let basis = cols[k].clone();
            for (x, b) in cols[j].iter_mut().zip(&basis) {
                *x -= proj * b;
            }
        }
        let len = norm(&cols[j]);
        if len < 1e-8 {
            return None;
        }
        for x in cols[j].iter_mut() {
            *x /= len;
        }
    }
    let mut out = Matrix::zeros(m.rows(), n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    Some(out)
}

/// Haar-like random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| gaussian(rng)).collect();
        if let Some(u) = orthonormalize(&Matrix::new(n, n, data).unwrap()) {
            return u;
        }
    }
}

pub fn unitarity_defect(u: &Matrix) -> f64 {
    u.adjoint().matmul(u).unwrap().max_abs_diff(&Matrix::identity(u.cols()))
}

/// `Σ_s c_s |s⟩⊗|s⟩` with equal weights, embedded in a `latin × greek` space.
pub fn equal_weight_state(n: usize, latin: usize, greek: usize) -> BipartitePureState {
    let mut amps = Matrix::zeros(latin, greek);
    for s in 0..n {
        amps[(s, s)] = re(1.0 / (n as f64).sqrt());
    }
    BipartitePureState::new(labels("l", latin), labels("g", greek), amps).unwrap()
}

/// Roots of `λ² − tλ + d` for the 2×2 Hermitian matrix `[[a, b], [b*, c]]`,
/// descending.
pub fn hermitian2_roots(a: f64, b: C64, c: f64) -> [f64; 2] {
    let t = a + c;
    let d = a * c - b.norm_sqr();
    let disc = (t * t - 4.0 * d).max(0.0).sqrt();
    [(t + disc) / 2.0, (t - disc) / 2.0]
}
