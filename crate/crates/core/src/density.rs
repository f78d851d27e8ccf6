//! Density matrices of two-party systems: pure-state projectors, classical
//! mixtures, partial traces, purity and conditional states.
//!
//! Product-basis states are indexed as `latin_index * greek_dim + greek_index`,
//! so for two qubits with basis `H, V` the ordering is `HH, HV, VH, VV`.

use crate::error::{Error, Result};
use crate::numlin::{self, hermitian_eigen, re, Matrix, C64};
use crate::schmidt::BipartitePureState;

/// Slack for the Hermitian, unit-trace and positivity checks.
pub const DENSITY_TOL: f64 = 1e-10;

/// Outcome probabilities below this are treated as impossible.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// Which subsystem survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// The Latin (left-hand, A) factor.
    A,
    /// The Greek (right-hand, B) factor.
    B,
}

/// Basis labels of the two factors of a product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factors {
    pub latin: Vec<String>,
    pub greek: Vec<String>,
}

impl Factors {
    pub fn new<S: AsRef<str>>(latin: &[S], greek: &[S]) -> Self {
        Factors {
            latin: latin.iter().map(|s| s.as_ref().to_owned()).collect(),
            greek: greek.iter().map(|s| s.as_ref().to_owned()).collect(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.latin.len(), self.greek.len())
    }

    /// Labels of the product basis in row order.
    pub fn product_labels(&self) -> Vec<String> {
        let short = self.latin.iter().chain(&self.greek).all(|l| l.chars().count() == 1);
        let sep = if short { "" } else { "," };
        self.latin
            .iter()
            .flat_map(|l| self.greek.iter().map(move |g| format!("{l}{sep}{g}")))
            .collect()
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix with labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix,
    labels: Vec<String>,
    factors: Option<Factors>,
}

impl DensityMatrix {
    /// Validates and wraps `matrix`.
    pub fn new(matrix: Matrix, labels: Vec<String>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape {
                left: matrix.shape(),
                right: (matrix.cols(), matrix.rows()),
                context: "density matrix must be square",
            });
        }
        if labels.len() != matrix.rows() {
            return Err(Error::validation(format!(
                "{} labels for a {}-dimensional density matrix",
                labels.len(),
                matrix.rows()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::validation(format!(
                "density matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - re(1.0)).norm() > DENSITY_TOL {
            return Err(Error::validation(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        let spectrum = hermitian_eigen(&matrix, numlin::default_tolerance(&matrix))?;
        if let Some(&min) = spectrum.eigenvalues.last() {
            if min < -DENSITY_TOL {
                return Err(Error::validation(format!(
                    "density matrix has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(DensityMatrix {
            matrix,
            labels,
            factors: None,
        })
    }

    /// Validates `matrix` as a state on the product space described by `factors`.
    pub fn bipartite(matrix: Matrix, factors: Factors) -> Result<Self> {
        let mut rho = DensityMatrix::new(matrix, factors.product_labels())?;
        rho.factors = Some(factors);
        Ok(rho)
    }

    /// Wraps a matrix already known to satisfy the invariants.
    pub(crate) fn trusted(matrix: Matrix, labels: Vec<String>, factors: Option<Factors>) -> Self {
        debug_assert_eq!(matrix.rows(), labels.len());
        DensityMatrix {
            matrix,
            labels,
            factors,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn factors(&self) -> Option<&Factors> {
        self.factors.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Descending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.matrix, numlin::default_tolerance(&self.matrix))?.eigenvalues)
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }
}

/// `|Ψ⟩⟨Ψ|` on the product space.
pub fn pure_density(state: &BipartitePureState) -> Result<DensityMatrix> {
    state.require_normalized()?;
    let psi = state.amplitudes().as_slice();
    let factors = Factors::new(state.latin_labels(), state.greek_labels());
    Ok(DensityMatrix::trusted(
        Matrix::outer(psi, psi),
        factors.product_labels(),
        Some(factors),
    ))
}

/// One term of an incoherent mixture: `weight · |a b⟩⟨a b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureTerm {
    pub weight: f64,
    pub latin: String,
    pub greek: String,
}

impl MixtureTerm {
    pub fn new(weight: f64, latin: impl Into<String>, greek: impl Into<String>) -> Self {
        MixtureTerm {
            weight,
            latin: latin.into(),
            greek: greek.into(),
        }
    }
}

/// Incoherent mixture of product basis states, diagonal in the product basis.
pub fn classical_mixture(factors: &Factors, terms: &[MixtureTerm]) -> Result<DensityMatrix> {
    if terms.is_empty() {
        return Err(Error::validation("mixture needs at least one term"));
    }
    let (_, greek_dim) = factors.dims();
    let mut diag = vec![0.0; factors.latin.len() * greek_dim];
    let mut total = 0.0;
    for term in terms {
        if !term.weight.is_finite() || term.weight < 0.0 {
            return Err(Error::validation(format!(
                "mixture weight {} is not a non-negative number",
                term.weight
            )));
        }
        let n = position(&factors.latin, &term.latin)?;
        let nu = position(&factors.greek, &term.greek)?;
        diag[n * greek_dim + nu] += term.weight;
        total += term.weight;
    }
    if (total - 1.0).abs() > DENSITY_TOL {
        return Err(Error::validation(format!("mixture weights sum to {total}, expected 1")));
    }
    Ok(DensityMatrix::trusted(
        Matrix::diagonal(&diag),
        factors.product_labels(),
        Some(factors.clone()),
    ))
}

fn position(labels: &[String], wanted: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == wanted)
        .ok_or_else(|| Error::validation(format!("unknown basis label `{wanted}`")))
}

/// Reduced density matrix of the kept subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem, dims: (usize, usize)) -> Result<DensityMatrix> {
    let (latin_dim, greek_dim) = dims;
    check_dims(rho, dims)?;
    let m = rho.matrix();
    let (kept_dim, out) = match keep {
        Subsystem::A => {
            let mut out = Matrix::zeros(latin_dim, latin_dim);
            for n in 0..latin_dim {
                for n2 in 0..latin_dim {
                    out[(n, n2)] = (0..greek_dim)
                        .map(|mu| m[(n * greek_dim + mu, n2 * greek_dim + mu)])
                        .sum();
                }
            }
            (latin_dim, out)
        }
        Subsystem::B => {
            let mut out = Matrix::zeros(greek_dim, greek_dim);
            for mu in 0..greek_dim {
                for mu2 in 0..greek_dim {
                    out[(mu, mu2)] = (0..latin_dim)
                        .map(|n| m[(n * greek_dim + mu, n * greek_dim + mu2)])
                        .sum();
                }
            }
            (greek_dim, out)
        }
    };
    Ok(DensityMatrix::trusted(out, subsystem_labels(rho, keep, kept_dim), None))
}

fn check_dims(rho: &DensityMatrix, (latin_dim, greek_dim): (usize, usize)) -> Result<()> {
    if rho.dim() != latin_dim * greek_dim {
        return Err(Error::Shape {
            left: rho.matrix().shape(),
            right: (latin_dim, greek_dim),
            context: "density matrix dimension must equal latin_dim × greek_dim",
        });
    }
    if let Some(f) = rho.factors() {
        if f.dims() != (latin_dim, greek_dim) {
            return Err(Error::Shape {
                left: f.dims(),
                right: (latin_dim, greek_dim),
                context: "requested factorization differs from the state's own",
            });
        }
    }
    Ok(())
}

fn subsystem_labels(rho: &DensityMatrix, which: Subsystem, dim: usize) -> Vec<String> {
    match (rho.factors(), which) {
        (Some(f), Subsystem::A) => f.latin.clone(),
        (Some(f), Subsystem::B) => f.greek.clone(),
        (None, _) => (0..dim).map(|i| i.to_string()).collect(),
    }
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr ρ² = Σ_ij |ρ_ij|² for Hermitian ρ
    rho.matrix().frobenius_sqr()
}

/// State of subsystem B after subsystem A is found in `projector`, together
/// with the probability of that outcome.
pub fn conditional_state(
    rho: &DensityMatrix,
    projector: &[C64],
    dims: (usize, usize),
) -> Result<(f64, DensityMatrix)> {
    let (latin_dim, greek_dim) = dims;
    check_dims(rho, dims)?;
    if projector.len() != latin_dim {
        return Err(Error::Shape {
            left: (projector.len(), 1),
            right: (latin_dim, 1),
            context: "projector must live in the Latin space",
        });
    }
    let pnorm = numlin::norm(projector);
    if (pnorm - 1.0).abs() > DENSITY_TOL {
        return Err(Error::validation(format!("projector vector has norm {pnorm}, expected 1")));
    }

    let m = rho.matrix();
    let mut out = Matrix::zeros(greek_dim, greek_dim);
    for mu in 0..greek_dim {
        for mu2 in 0..greek_dim {
            let mut acc = C64::default();
            for n in 0..latin_dim {
                for n2 in 0..latin_dim {
                    acc += projector[n].conj() * m[(n * greek_dim + mu, n2 * greek_dim + mu2)] * projector[n2];
                }
            }
            out[(mu, mu2)] = acc;
        }
    }
    let probability = out.trace().re;
    if probability < MIN_OUTCOME_PROBABILITY {
        return Err(Error::ImpossibleOutcome { probability });
    }
    let labels = subsystem_labels(rho, Subsystem::B, greek_dim);
    Ok((
        probability,
        DensityMatrix::trusted(out.scale(re(1.0 / probability)), labels, None),
    ))
}
