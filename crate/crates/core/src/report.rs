//! Serializable analysis results and the `schmidt-state-v1` JSON document.

use serde::{Deserialize, Serialize};

use crate::density::{conditional_state, partial_trace, purity, DensityMatrix, Subsystem};
use crate::error::{Error, Result};
use crate::ketparse::{format_state, GRAMMAR_VERSION};
use crate::numlin::{Matrix, C64};
use crate::schmidt::{
    reconstruct, schmidt_decompose_with, BipartitePureState, NormPolicy, SchmidtOptions, Side,
};

pub const STATE_FORMAT: &str = "schmidt-state-v1";
pub const REPORT_FORMAT: &str = "schmidt-report-v1";

/// Largest reconstruction error a report may carry.
pub const MAX_RECONSTRUCTION_RESIDUAL: f64 = 1e-9;

/// On-disk form of a state. Amplitudes are `[re, im]` pairs, row-major over
/// the Latin basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub format: String,
    pub latin_labels: Vec<String>,
    pub greek_labels: Vec<String>,
    pub amplitudes: Vec<Vec<[f64; 2]>>,
}

impl StateDocument {
    pub fn from_state(state: &BipartitePureState) -> Self {
        StateDocument {
            format: STATE_FORMAT.into(),
            latin_labels: state.latin_labels().to_vec(),
            greek_labels: state.greek_labels().to_vec(),
            amplitudes: state
                .amplitudes()
                .to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_state(&self) -> Result<BipartitePureState> {
        if self.format != STATE_FORMAT {
            return Err(Error::validation(format!(
                "unsupported state format `{}` (expected `{STATE_FORMAT}`)",
                self.format
            )));
        }
        let rows: Vec<Vec<C64>> = self
            .amplitudes
            .iter()
            .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        let amps = if rows.is_empty() {
            Matrix::zeros(0, self.greek_labels.len())
        } else {
            Matrix::from_rows(&rows)?
        };
        BipartitePureState::new(self.latin_labels.clone(), self.greek_labels.clone(), amps)
    }
}

/// Reads either a state document or a previously emitted report.
pub fn state_from_json(text: &str) -> Result<BipartitePureState> {
    #[derive(Deserialize)]
    struct Probe {
        format: Option<String>,
    }
    let probe: Probe =
        serde_json::from_str(text).map_err(|e| Error::validation(format!("invalid JSON: {e}")))?;
    match probe.format.as_deref() {
        Some(STATE_FORMAT) => serde_json::from_str::<StateDocument>(text)
            .map_err(|e| Error::validation(format!("invalid {STATE_FORMAT} document: {e}")))?
            .to_state(),
        Some(REPORT_FORMAT) => serde_json::from_str::<AnalysisReport>(text)
            .map_err(|e| Error::validation(format!("invalid {REPORT_FORMAT} document: {e}")))?
            .input
            .state
            .to_state(),
        Some(other) => Err(Error::validation(format!("unknown document format `{other}`"))),
        None => Err(Error::validation("JSON document has no `format` field")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub grammar: String,
    /// Canonical text of the state as supplied, before normalization.
    pub expression: String,
    pub state: StateDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub lambda: f64,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalizedSide {
    Latin,
    Greek,
}

/// Everything reported about one analyzed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub format: String,
    pub input: InputEcho,
    /// Norm of the amplitudes as supplied.
    pub normalization_factor: f64,
    pub lambdas: Vec<f64>,
    pub schmidt_number: f64,
    pub entropy_bits: f64,
    pub rank: usize,
    pub entangled: bool,
    pub rank_threshold: f64,
    pub diagonalized: DiagonalizedSide,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latin_modes: Option<Vec<Mode>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greek_modes: Option<Vec<Mode>>,
    /// Largest entrywise error of the rebuilt amplitude matrix.
    pub reconstruction_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub schmidt: SchmidtOptions,
    pub norm_policy: NormPolicy,
    pub include_modes: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            schmidt: SchmidtOptions::default(),
            norm_policy: NormPolicy::Rescale,
            include_modes: true,
        }
    }
}

/// Normalizes `state` according to the policy, decomposes it and checks the
/// reconstruction.
pub fn analyze(state: &BipartitePureState, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let unit = state.with_policy(opts.norm_policy)?;
    let d = schmidt_decompose_with(&unit, &opts.schmidt)?;
    let rebuilt = reconstruct(&d, unit.dims())?;
    let residual = rebuilt.max_abs_diff(unit.amplitudes());
    if residual.is_nan() || residual > MAX_RECONSTRUCTION_RESIDUAL {
        return Err(Error::Numerical(format!(
            "reconstruction residual {residual:e} exceeds {MAX_RECONSTRUCTION_RESIDUAL:e}"
        )));
    }

    let modes = |vectors: &[Vec<C64>], labels: &[String]| -> Vec<Mode> {
        vectors
            .iter()
            .zip(&d.lambdas)
            .map(|(v, &lambda)| Mode {
                lambda,
                components: labels
                    .iter()
                    .zip(v)
                    .map(|(label, z)| Component {
                        label: label.clone(),
                        re: z.re,
                        im: z.im,
                    })
                    .collect(),
            })
            .collect()
    };

    Ok(AnalysisReport {
        format: REPORT_FORMAT.into(),
        input: InputEcho {
            grammar: GRAMMAR_VERSION.into(),
            expression: format_state(state),
            state: StateDocument::from_state(state),
        },
        normalization_factor: state.norm(),
        schmidt_number: d.schmidt_number(),
        entropy_bits: d.entropy(),
        rank: d.rank,
        entangled: d.is_entangled(),
        rank_threshold: d.threshold,
        diagonalized: match d.diagonalized {
            Side::Latin => DiagonalizedSide::Latin,
            Side::Greek => DiagonalizedSide::Greek,
        },
        latin_modes: opts
            .include_modes
            .then(|| modes(&d.latin_modes, unit.latin_labels())),
        greek_modes: opts
            .include_modes
            .then(|| modes(&d.greek_modes, unit.greek_labels())),
        reconstruction_residual: residual,
        lambdas: padded_spectrum(d.lambdas, unit.dims()),
    })
}

// The larger reduced density matrix has the same spectrum plus exact zeros.
fn padded_spectrum(mut lambdas: Vec<f64>, (latin, greek): (usize, usize)) -> Vec<f64> {
    lambdas.resize(latin.max(greek), 0.0);
    lambdas
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const DENSITY_FORMAT: &str = "schmidt-density-v1";

/// A labeled matrix with `[re, im]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl LabeledMatrix {
    pub fn new(m: &Matrix, labels: &[String]) -> Self {
        LabeledMatrix {
            labels: labels.to_vec(),
            entries: m.to_rows().iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedView {
    pub subsystem: String,
    pub matrix: LabeledMatrix,
    pub purity: f64,
}

/// Subsystem B after finding subsystem A in one of its basis states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalView {
    pub outcome: String,
    pub probability: f64,
    pub state: LabeledMatrix,
}

/// A two-party density matrix with its partial traces and conditional states,
/// and where it differs from a reference matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub format: String,
    pub name: String,
    pub matrix: LabeledMatrix,
    pub eigenvalues: Vec<f64>,
    pub purity: f64,
    pub reduced: Vec<ReducedView>,
    pub conditionals: Vec<ConditionalView>,
    pub compared_with: String,
    /// `(row, column)` entries further than `tol` from the reference.
    pub differs_at: Vec<[usize; 2]>,
}

impl DensityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Describes `rho`, whose factors must be known, against `reference`.
pub fn density_report(
    name: &str,
    rho: &DensityMatrix,
    reference_name: &str,
    reference: &DensityMatrix,
    tol: f64,
) -> Result<DensityReport> {
    let factors = rho
        .factors()
        .ok_or_else(|| Error::validation("density matrix has no two-party factorization"))?;
    let dims = factors.dims();
    if reference.dim() != rho.dim() {
        return Err(Error::Shape {
            left: rho.matrix().shape(),
            right: reference.matrix().shape(),
            context: "compared density matrices",
        });
    }

    let mut reduced = Vec::new();
    for (keep, tag) in [(Subsystem::A, "A"), (Subsystem::B, "B")] {
        let r = partial_trace(rho, keep, dims)?;
        reduced.push(ReducedView {
            subsystem: tag.into(),
            matrix: LabeledMatrix::new(r.matrix(), r.labels()),
            purity: purity(&r),
        });
    }

    let mut conditionals = Vec::new();
    for (k, label) in factors.latin.iter().enumerate() {
        let mut v = vec![C64::default(); dims.0];
        v[k] = C64::new(1.0, 0.0);
        match conditional_state(rho, &v, dims) {
            Ok((probability, post)) => conditionals.push(ConditionalView {
                outcome: label.clone(),
                probability,
                state: LabeledMatrix::new(post.matrix(), post.labels()),
            }),
            Err(Error::ImpossibleOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    let (a, b) = (rho.matrix(), reference.matrix());
    let n = rho.dim();
    let differs_at = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| (a[(i, j)] - b[(i, j)]).norm() > tol)
        .map(|(i, j)| [i, j])
        .collect();

    Ok(DensityReport {
        format: DENSITY_FORMAT.into(),
        name: name.into(),
        matrix: LabeledMatrix::new(a, rho.labels()),
        eigenvalues: rho.eigenvalues()?,
        purity: purity(rho),
        reduced,
        conditionals,
        compared_with: reference_name.into(),
        differs_at,
    })
}
