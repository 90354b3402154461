//! Quantum-state texture: measures, free operations and witnesses.
//!
//! Texture is the deviation of a state from the uniform superposition
//! `|f1⟩ = Σ_j |j⟩/√d` in a fixed computational basis. `f1 = |f1⟩⟨f1|` is the
//! only free state, and the free operations are the CPTP maps that fix it.
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: Hermitian eigendecomposition, PSD powers, trace norm, Kronecker products.
//! - [`states`]: density matrices, `f1`, random ensembles, `f1`-fixing unitaries.
//! - [`channels`]: Kraus channels, the free-operation test, random free channels, `Δ_T`.
//! - [`measures`]: all texture quantifiers and their reference oracles.
//! - [`witnesses`]: witness families and detection.
//! - [`harness`]: seeded property suites producing [`harness::PropertyReport`]s.
//! - [`interchange`]: the JSON matrix file format used by the CLI.

pub mod channels;
pub mod error;
pub mod harness;
pub mod interchange;
pub mod linalg;
pub mod measures;
pub mod states;
pub mod witnesses;

pub use error::{Result, TextureError};
pub use linalg::{ComplexMatrix, ComplexVector, EigenDecomposition, HermitianOperator};
pub use measures::{AlphaZParams, Measure, MeasureId, MeasureValue};
pub use states::{DensityMatrix, PureState, TextureRng};
pub use witnesses::{DetectionResult, Witness, WitnessFamily};
