//! Schmidt analysis of two-party pure states.
//!
//! A state `Σ C(n,ν) |n⟩⊗|ν⟩` is carried as its amplitude matrix `C`, rows
//! indexed by the Latin (A) basis and columns by the Greek (B) basis. The
//! reduced density matrices are the Gram matrices `CC†` and `C†C`; their common
//! non-zero spectrum gives the Schmidt weights `λ_s`, and pairing each
//! eigenvector with its image under `C†` (or `C`) yields the Schmidt modes
//!
//! ```text
//! |Ψ⟩ = Σ_s √λ_s |F^s⟩ ⊗ |Φ^s⟩
//! ```

use std::collections::HashSet;

use crate::density::{DensityMatrix, Factors};
use crate::error::{Error, Result};
use crate::numlin::{self, hermitian_eigen, re, Matrix, C64};

/// Eigenvalues at or below this count as zero when forming the rank.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-10;

/// Allowed deviation of `Σ|C|²` from one for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-9;

/// How to treat a state whose norm is not one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormPolicy {
    /// Divide the amplitudes by the norm.
    #[default]
    Rescale,
    /// Reject norms further than [`NORM_TOL`] from one.
    Strict,
}

/// Pure state of a two-party system in a labeled product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePureState {
    latin_labels: Vec<String>,
    greek_labels: Vec<String>,
    amplitudes: Matrix,
    norm: f64,
}

impl BipartitePureState {
    /// Wraps raw amplitudes without rescaling them; the norm is recorded.
    pub fn new(latin_labels: Vec<String>, greek_labels: Vec<String>, amplitudes: Matrix) -> Result<Self> {
        if amplitudes.shape() != (latin_labels.len(), greek_labels.len()) {
            return Err(Error::Shape {
                left: amplitudes.shape(),
                right: (latin_labels.len(), greek_labels.len()),
                context: "amplitude matrix must be latin labels × greek labels",
            });
        }
        check_unique(&latin_labels, "Latin")?;
        check_unique(&greek_labels, "Greek")?;
        if !amplitudes.is_finite() {
            return Err(Error::validation("amplitudes must be finite"));
        }
        let norm = amplitudes.frobenius_sqr().sqrt();
        Ok(BipartitePureState {
            latin_labels,
            greek_labels,
            amplitudes,
            norm,
        })
    }

    pub fn from_real<S: AsRef<str>, R: AsRef<[f64]>>(latin: &[S], greek: &[S], rows: &[R]) -> Result<Self> {
        BipartitePureState::new(to_owned(latin), to_owned(greek), Matrix::from_real_rows(rows)?)
    }

    pub fn from_complex<S: AsRef<str>>(latin: &[S], greek: &[S], rows: &[Vec<C64>]) -> Result<Self> {
        BipartitePureState::new(to_owned(latin), to_owned(greek), Matrix::from_rows(rows)?)
    }

    pub fn latin_labels(&self) -> &[String] {
        &self.latin_labels
    }

    pub fn greek_labels(&self) -> &[String] {
        &self.greek_labels
    }

    pub fn amplitudes(&self) -> &Matrix {
        &self.amplitudes
    }

    /// `(latin_dim, greek_dim)`.
    pub fn dims(&self) -> (usize, usize) {
        self.amplitudes.shape()
    }

    /// Euclidean norm of the amplitudes as originally supplied.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn factors(&self) -> Factors {
        Factors::new(&self.latin_labels, &self.greek_labels)
    }

    /// Euclidean norm of the amplitudes currently held.
    pub fn current_norm(&self) -> f64 {
        self.amplitudes.frobenius_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.amplitudes.frobenius_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "state is not normalized (norm {})",
                self.current_norm()
            )))
        }
    }

    /// Rescaled copy with unit norm. [`norm`](Self::norm) keeps the original value.
    pub fn normalized(&self) -> Result<Self> {
        self.with_policy(NormPolicy::Rescale)
    }

    pub fn with_policy(&self, policy: NormPolicy) -> Result<Self> {
        let current = self.current_norm();
        if current == 0.0 {
            return Err(Error::validation("state has zero norm"));
        }
        if policy == NormPolicy::Strict && (current - 1.0).abs() > NORM_TOL {
            return Err(Error::validation(format!(
                "state norm is {current}, expected 1 (strict normalization)"
            )));
        }
        Ok(BipartitePureState {
            latin_labels: self.latin_labels.clone(),
            greek_labels: self.greek_labels.clone(),
            amplitudes: self.amplitudes.scale(re(1.0 / current)),
            norm: self.norm,
        })
    }

    /// Applies `u` to the Latin factor: `C ↦ U·C`.
    pub fn apply_latin(&self, u: &Matrix) -> Result<Self> {
        BipartitePureState::new(
            self.latin_labels.clone(),
            self.greek_labels.clone(),
            u.matmul(&self.amplitudes)?,
        )
    }

    /// Applies `v` to the Greek factor: `C ↦ C·Vᵀ`.
    pub fn apply_greek(&self, v: &Matrix) -> Result<Self> {
        let vt = v.transpose();
        BipartitePureState::new(
            self.latin_labels.clone(),
            self.greek_labels.clone(),
            self.amplitudes.matmul(&vt)?,
        )
    }
}

fn to_owned<S: AsRef<str>>(labels: &[S]) -> Vec<String> {
    labels.iter().map(|s| s.as_ref().to_owned()).collect()
}

fn check_unique(labels: &[String], side: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::validation(format!("duplicate {side} label `{l}`")));
        }
    }
    Ok(())
}

/// Which reduced density matrix was diagonalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Latin,
    Greek,
}

/// Schmidt weights and mode pairs of a normalized state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Full descending spectrum of the diagonalized Gram matrix.
    pub lambdas: Vec<f64>,
    /// `|F^s⟩` in the Latin basis, one per weight above threshold.
    pub latin_modes: Vec<Vec<C64>>,
    /// `|Φ^s⟩` in the Greek basis, paired with `latin_modes`.
    pub greek_modes: Vec<Vec<C64>>,
    pub rank: usize,
    pub threshold: f64,
    pub diagonalized: Side,
    /// Off-diagonal residual reported by the eigensolver.
    pub eigen_residual: f64,
}

/// Tunables of [`schmidt_decompose_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtOptions {
    /// Weights strictly above this count toward the rank.
    pub rank_threshold: f64,
    /// Eigensolver stopping threshold relative to `‖ρ‖_max`.
    pub relative_tolerance: f64,
}

impl Default for SchmidtOptions {
    fn default() -> Self {
        SchmidtOptions {
            rank_threshold: DEFAULT_RANK_THRESHOLD,
            relative_tolerance: numlin::DEFAULT_RELATIVE_TOL,
        }
    }
}

/// `ρ_L = CC†`.
pub fn gram_latin(state: &BipartitePureState) -> Result<DensityMatrix> {
    state.require_normalized()?;
    let c = state.amplitudes();
    Ok(DensityMatrix::trusted(
        c.matmul(&c.adjoint())?,
        state.latin_labels().to_vec(),
        None,
    ))
}

/// Reduced density matrix of the Greek side, `Σ_n ⟨n|Ψ⟩⟨Ψ|n⟩`.
///
/// Its entries are `(C†C)ᵀ`, which is `C†C` itself whenever the amplitudes are
/// real. The spectrum is that of `C†C` in every case.
pub fn gram_greek(state: &BipartitePureState) -> Result<DensityMatrix> {
    state.require_normalized()?;
    let c = state.amplitudes();
    Ok(DensityMatrix::trusted(
        c.adjoint().matmul(c)?.transpose(),
        state.greek_labels().to_vec(),
        None,
    ))
}

/// Decomposition with the given rank threshold and the default eigensolver tolerance.
pub fn schmidt_decompose(state: &BipartitePureState, threshold: f64) -> Result<SchmidtDecomposition> {
    schmidt_decompose_with(
        state,
        &SchmidtOptions {
            rank_threshold: threshold,
            ..SchmidtOptions::default()
        },
    )
}

/// Diagonalizes the smaller reduced density matrix (the Latin one on ties) and
/// builds the partner modes through the amplitude matrix.
pub fn schmidt_decompose_with(state: &BipartitePureState, opts: &SchmidtOptions) -> Result<SchmidtDecomposition> {
    if opts.rank_threshold.is_nan() || opts.rank_threshold <= 0.0 {
        return Err(Error::validation(format!(
            "rank threshold must be positive, got {}",
            opts.rank_threshold
        )));
    }
    if opts.relative_tolerance.is_nan() || opts.relative_tolerance < 0.0 {
        return Err(Error::validation(format!(
            "eigensolver tolerance must be non-negative, got {}",
            opts.relative_tolerance
        )));
    }
    if state.current_norm() == 0.0 {
        return Err(Error::validation("state has zero norm"));
    }
    state.require_normalized()?;

    let (latin_dim, greek_dim) = state.dims();
    let side = if latin_dim <= greek_dim { Side::Latin } else { Side::Greek };
    let c = state.amplitudes();
    let c_adj = c.adjoint();
    let gram = match side {
        Side::Latin => c.matmul(&c_adj)?,
        Side::Greek => c_adj.matmul(c)?,
    };
    let eigen = hermitian_eigen(&gram, opts.relative_tolerance * gram.max_abs())?;

    let mut latin_modes = Vec::new();
    let mut greek_modes = Vec::new();
    for (&lambda, v) in eigen.eigenvalues.iter().zip(&eigen.eigenvectors) {
        if lambda <= opts.rank_threshold {
            break;
        }
        let inv_sqrt = re(1.0 / lambda.sqrt());
        match side {
            Side::Latin => {
                // |φ⟩ = C†|f⟩/√λ and |Φ⟩ carries the conjugated components
                let phi = c_adj.mul_vec(v)?;
                greek_modes.push(phi.iter().map(|z| (z * inv_sqrt).conj()).collect());
                latin_modes.push(v.clone());
            }
            Side::Greek => {
                // |F⟩ = C|φ⟩/√λ
                let f = c.mul_vec(v)?;
                latin_modes.push(f.iter().map(|z| z * inv_sqrt).collect());
                greek_modes.push(v.iter().map(|z| z.conj()).collect());
            }
        }
    }

    Ok(SchmidtDecomposition {
        rank: latin_modes.len(),
        lambdas: eigen.eigenvalues,
        latin_modes,
        greek_modes,
        threshold: opts.rank_threshold,
        diagonalized: side,
        eigen_residual: eigen.residual,
    })
}

/// `K = 1 / Σ λ_s²`.
pub fn schmidt_number(d: &SchmidtDecomposition) -> f64 {
    1.0 / d.lambdas.iter().map(|l| l * l).sum::<f64>()
}

/// `−Σ λ_s log₂ λ_s` over the weights above threshold, in bits.
pub fn entanglement_entropy(d: &SchmidtDecomposition) -> f64 {
    if d.rank <= 1 {
        return 0.0;
    }
    let e: f64 = d
        .lambdas
        .iter()
        .filter(|&&l| l > d.threshold)
        .map(|&l| -l * l.log2())
        .sum();
    e.max(0.0)
}

pub fn is_entangled(d: &SchmidtDecomposition) -> bool {
    d.rank >= 2
}

/// Rebuilds `C(n,ν) = Σ_s √λ_s F^s_n Φ^s_ν` from the mode pairs.
pub fn reconstruct(d: &SchmidtDecomposition, dims: (usize, usize)) -> Result<Matrix> {
    let (latin_dim, greek_dim) = dims;
    if d.latin_modes.len() < d.rank || d.greek_modes.len() < d.rank || d.lambdas.len() < d.rank {
        return Err(Error::validation(format!(
            "decomposition of rank {} carries {} Latin and {} Greek modes",
            d.rank,
            d.latin_modes.len(),
            d.greek_modes.len()
        )));
    }
    let mut out = Matrix::zeros(latin_dim, greek_dim);
    for s in 0..d.rank {
        let (f, phi) = (&d.latin_modes[s], &d.greek_modes[s]);
        if f.len() != latin_dim || phi.len() != greek_dim {
            return Err(Error::Shape {
                left: (f.len(), phi.len()),
                right: dims,
                context: "mode lengths must match the requested dimensions",
            });
        }
        let weight = re(d.lambdas[s].max(0.0).sqrt());
        for n in 0..latin_dim {
            for nu in 0..greek_dim {
                out[(n, nu)] += weight * f[n] * phi[nu];
            }
        }
    }
    Ok(out)
}

impl SchmidtDecomposition {
    pub fn schmidt_number(&self) -> f64 {
        schmidt_number(self)
    }

    pub fn entropy(&self) -> f64 {
        entanglement_entropy(self)
    }

    pub fn is_entangled(&self) -> bool {
        is_entangled(self)
    }

    /// Weights of the constructed mode pairs.
    pub fn nonzero_lambdas(&self) -> &[f64] {
        &self.lambdas[..self.rank]
    }
}
