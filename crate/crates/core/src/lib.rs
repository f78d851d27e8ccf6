//! Schmidt-mode analysis of two-party pure quantum states.
//!
//! Given the amplitude matrix `C(n,ν)` of a state `Σ C(n,ν)|n⟩⊗|ν⟩`, this crate
//! computes the reduced density matrices `CC†` and `C†C`, their common
//! spectrum, the paired Schmidt modes, the Schmidt number `K = 1/Σλ²` and the
//! entanglement entropy. States can be written in a small ket notation:
//!
//! ```
//! use schmidt_core::{ketparse::parse_state, schmidt::schmidt_decompose};
//!
//! let state = parse_state("(|a> + |b>)(x)|alpha> + (|a> - |b>)(x)|beta>")
//!     .unwrap()
//!     .normalized()
//!     .unwrap();
//! let d = schmidt_decompose(&state, 1e-10).unwrap();
//! assert!((d.schmidt_number() - 2.0).abs() < 1e-12);
//! ```

pub mod density;
pub mod error;
pub mod fixtures;
pub mod ketparse;
pub mod numlin;
pub mod report;
pub mod schmidt;

pub use error::{Error, Result};
pub use numlin::{Matrix, C64};
pub use schmidt::{BipartitePureState, SchmidtDecomposition};
