//! Texture witnesses.
//!
//! A Hermitian `W` is a witness when `Tr(W f1) ≥ 0` and some state gives
//! `Tr(Wρ) < 0`. The second condition is decided spectrally: it holds exactly
//! when `λ_min(W) < 0`, and the ground eigenvector is then a detected state.
//! Measuring a negative expectation certifies that the state has texture.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TextureError};
use crate::linalg::{
    c, eig_hermitian, expectation, identity, ComplexMatrix, HermitianOperator,
};
use crate::measures::overlap;
use crate::states::{free_operator, free_vector, DensityMatrix, PureState};

/// Expectations within this band of zero are not counted as detections.
pub const DETECTION_BAND: f64 = 1e-10;
const THETA_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImaginaritySign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl fmt::Display for ImaginaritySign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImaginaritySign::Positive => "+",
            ImaginaritySign::Negative => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessFamily {
    /// `Δ_T(A) − A` for the stored `A`.
    Universal(HermitianOperator),
    /// `f1 − I`.
    W1,
    /// `G = 2 f1 − I`.
    Generator,
    Theta(f64),
    JkPhase { j: usize, k: usize, phi: f64 },
    Imaginarity { j: usize, k: usize, sign: ImaginaritySign },
}

impl WitnessFamily {
    /// Short name without parameters.
    pub fn kind(&self) -> &'static str {
        match self {
            WitnessFamily::Universal(_) => "universal",
            WitnessFamily::W1 => "w1",
            WitnessFamily::Generator => "generator",
            WitnessFamily::Theta(_) => "theta",
            WitnessFamily::JkPhase { .. } => "jk",
            WitnessFamily::Imaginarity { .. } => "imag",
        }
    }
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessFamily::Universal(a) => write!(f, "universal(dim {})", a.dim()),
            WitnessFamily::W1 => f.write_str("w1"),
            WitnessFamily::Generator => f.write_str("generator"),
            WitnessFamily::Theta(t) => write!(f, "theta:{t}"),
            WitnessFamily::JkPhase { j, k, phi } => write!(f, "jk:{j},{k},{phi}"),
            WitnessFamily::Imaginarity { j, k, sign } => write!(f, "imag:{j},{k},{sign}"),
        }
    }
}

/// Eagerly computed evidence for both witness conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `Tr(W f1)`.
    pub free_expectation: f64,
    pub min_eigenvalue: f64,
    /// Ground eigenvector of `W`: the state `W` detects most strongly.
    pub ground_state: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    op: HermitianOperator,
    family: WitnessFamily,
    certificate: Certificate,
}

impl Witness {
    /// Checks both conditions and records the certificate.
    pub fn from_operator(op: HermitianOperator, family: WitnessFamily) -> Result<Self> {
        let d = op.dim();
        let free_expectation = op.quadratic_form(&free_vector(d));
        if free_expectation < -DETECTION_BAND {
            return Err(TextureError::FreeExpectationNegative { free_expectation });
        }
        let eig = eig_hermitian(&op)?;
        let min_eigenvalue = eig.min();
        if min_eigenvalue >= -DETECTION_BAND {
            return Err(TextureError::NotAWitness {
                family: family.to_string(),
                min_eigenvalue,
            });
        }
        let ground_state = PureState::normalized(eig.eigenvector(0))?;
        Ok(Self {
            op,
            family,
            certificate: Certificate {
                free_expectation,
                min_eigenvalue,
                ground_state,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn family(&self) -> &WitnessFamily {
        &self.family
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// Detection threshold on `T_F` for the θ family.
    pub fn threshold(&self) -> Option<f64> {
        match self.family {
            WitnessFamily::Theta(t) => theta_threshold(t).ok(),
            WitnessFamily::Generator => Some(0.5),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionResult {
    pub expectation: f64,
    pub detected: bool,
    /// `|expectation| <= 1e-10`: reported as undetected.
    pub boundary: bool,
    pub witness_family: String,
    /// `T_F` recovered from the expectation (W1 and θ families).
    pub derived_tf: Option<f64>,
}

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(TextureError::Dimension(format!(
            "texture witnesses need d >= 2, got {d}"
        )));
    }
    Ok(())
}

/// Universal construction `W = ⟨f1|A|f1⟩ f1 − A`.
pub fn universal_witness(a: &HermitianOperator) -> Result<Witness> {
    require_dim(a.dim())?;
    let op = crate::channels::detexture(a).sub(a);
    Witness::from_operator(op, WitnessFamily::Universal(a.clone()))
}

/// `W1 = f1 − I`; `Tr(W1 ρ) = −T_F(ρ)`.
pub fn witness_w1(d: usize) -> Result<Witness> {
    require_dim(d)?;
    let op = free_operator(d).sub(&HermitianOperator::identity(d));
    Witness::from_operator(op, WitnessFamily::W1)
}

/// Generator `G = 2 f1 − I`; `G² = I`.
pub fn generator_g(d: usize) -> Result<HermitianOperator> {
    crate::linalg::check_dim(d)?;
    Ok(free_operator(d).scale(2.0).sub(&HermitianOperator::identity(d)))
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > FRAC_PI_4 && theta <= 3.0 * FRAC_PI_4 + THETA_SLACK) {
        return Err(TextureError::Domain {
            param: "theta",
            value: theta,
            reason: "theta must lie in (pi/4, 3pi/4]",
        });
    }
    Ok(())
}

/// `W_θ = cosθ I + sinθ G = (cosθ − sinθ) I + 2 sinθ f1`, `θ ∈ (π/4, 3π/4]`.
pub fn witness_theta(d: usize, theta: f64) -> Result<Witness> {
    require_dim(d)?;
    check_theta(theta)?;
    let (s, co) = theta.sin_cos();
    let op = HermitianOperator::identity(d)
        .scale(co - s)
        .add(&free_operator(d).scale(2.0 * s));
    Witness::from_operator(op, WitnessFamily::Theta(theta))
}

/// `τ(θ) = (cosθ + sinθ)/(2 sinθ)`: `Tr(W_θ ρ) < 0 ⟺ T_F(ρ) > τ(θ)`.
pub fn theta_threshold(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let (s, co) = theta.sin_cos();
    Ok((co + s) / (2.0 * s))
}

/// Inverts a θ-witness expectation: `T_F = (cosθ + sinθ − Tr(W_θ ρ))/(2 sinθ)`.
pub fn tf_from_theta(expectation: f64, theta: f64) -> Result<f64> {
    let (s, co) = theta.sin_cos();
    if s <= 0.0 {
        return Err(TextureError::Domain {
            param: "theta",
            value: theta,
            reason: "sin(theta) must be positive",
        });
    }
    check_theta(theta)?;
    Ok((co + s - expectation) / (2.0 * s))
}

fn check_pair(d: usize, j: usize, k: usize) -> Result<()> {
    require_dim(d)?;
    if j >= d || k >= d {
        return Err(TextureError::Index(format!(
            "basis indices ({j}, {k}) out of range for dimension {d}"
        )));
    }
    if j == k {
        return Err(TextureError::Index(format!(
            "basis indices must be distinct, got j = k = {j}"
        )));
    }
    Ok(())
}

fn off_diagonal_pair(d: usize, j: usize, k: usize, jk: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(j, k)] = jk;
    m[(k, j)] = jk.conj();
    m
}

/// `W^{jk}_φ = (2 cosφ/d) I − (e^{iφ}|j⟩⟨k| + e^{−iφ}|k⟩⟨j|)`, 0-based
/// `j ≠ k`, `φ ∈ (0, 2π)`.
pub fn witness_jk(d: usize, j: usize, k: usize, phi: f64) -> Result<Witness> {
    check_pair(d, j, k)?;
    if !(phi > 0.0 && phi < 2.0 * PI) {
        return Err(TextureError::Domain {
            param: "phi",
            value: phi,
            reason: "phi must lie in (0, 2pi)",
        });
    }
    let m = identity(d).scale(2.0 * phi.cos() / d as f64)
        - off_diagonal_pair(d, j, k, Complex64::from_polar(1.0, phi));
    let op = HermitianOperator::new(m)?;
    Witness::from_operator(op, WitnessFamily::JkPhase { j, k, phi })
}

/// The state `(|j⟩ + e^{−iφ}|k⟩)/√2`, whose coherence is `ρ_jk = e^{iφ}/2`.
/// `W^{jk}_φ` gives it the expectation `2cosφ/d − 1`.
pub fn jk_canonical_state(d: usize, j: usize, k: usize, phi: f64) -> Result<PureState> {
    check_pair(d, j, k)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = crate::linalg::ComplexVector::zeros(d);
    v[j] = c(s, 0.0);
    v[k] = Complex64::from_polar(s, -phi);
    PureState::new(v)
}

/// `W^{jk}_{I±} = W^{jk}_{π/2}` / `W^{jk}_{3π/2}`, built with exact phases.
/// `Tr(W_{I+} σ) = −2 Im σ_jk` and `Tr(W_{I−} σ) = +2 Im σ_jk`.
pub fn imaginarity_witness(d: usize, j: usize, k: usize, sign: ImaginaritySign) -> Result<Witness> {
    check_pair(d, j, k)?;
    let phase = match sign {
        ImaginaritySign::Positive => c(0.0, 1.0),
        ImaginaritySign::Negative => c(0.0, -1.0),
    };
    let op = HermitianOperator::new(-off_diagonal_pair(d, j, k, phase))?;
    Witness::from_operator(op, WitnessFamily::Imaginarity { j, k, sign })
}

/// `Tr(Wρ)` plus the detection verdict.
pub fn evaluate_witness(w: &Witness, rho: &DensityMatrix) -> Result<DetectionResult> {
    let e = expectation(w.operator(), rho.operator())?;
    let derived_tf = match w.family() {
        WitnessFamily::W1 => Some(-e),
        WitnessFamily::Theta(t) => Some(tf_from_theta(e, *t)?),
        WitnessFamily::Generator => Some(tf_from_theta(e, PI / 2.0)?),
        _ => None,
    };
    Ok(DetectionResult {
        expectation: e,
        detected: e < -DETECTION_BAND,
        boundary: e.abs() <= DETECTION_BAND,
        witness_family: w.family().to_string(),
        derived_tf,
    })
}

/// `⟨f1|W|f1⟩`. Zero for every universal-construction witness.
pub fn free_diagonal(w: &HermitianOperator) -> f64 {
    w.quadratic_form(&free_vector(w.dim()))
}

/// A Hermitian `A` with `Δ_T(A) − A = W`, if one exists. Such an `A` exists
/// exactly when `⟨f1|W|f1⟩ = 0`, and then `A = −W` works.
pub fn universal_preimage(w: &HermitianOperator, tol: f64) -> Option<HermitianOperator> {
    if free_diagonal(w).abs() <= tol {
        Some(w.scale(-1.0))
    } else {
        None
    }
}

/// Overlap with `f1` of the ground state, used to confirm detected states are
/// not the free state.
pub fn ground_state_overlap(w: &Witness) -> f64 {
    overlap(&w.certificate().ground_state.density())
}
