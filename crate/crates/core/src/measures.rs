//! Texture quantifiers.
//!
//! Every measure compares a state with the free state `f1`. Most of them only
//! depend on the scalar `⟨f1|ρ^p|f1⟩` for some power `p`, which is evaluated
//! spectrally from the state's cached eigendecomposition:
//!
//! | id    | quantity                                                        |
//! |-------|-----------------------------------------------------------------|
//! | `tGR` | `1 − (⟨f1|ρ^{(1−α)/z}|f1⟩)^z`, `α ∈ (0,1)`, `z ≥ max(α, 1−α)`     |
//! | `tSR` | `−ln ⟨f1|ρ|f1⟩` (rugosity, `+∞` on orthogonal support)           |
//! | `tF`  | `1 − ⟨f1|ρ|f1⟩`                                                 |
//! | `tTr` | `½‖ρ − f1‖₁`                                                    |
//! | `tW`  | `min{s ≥ 0 : ρ = (1−s) f1 + s τ}`                               |
//! | `tR`  | `[1 − (⟨f1|ρ^{(1−α)/α}|f1⟩)^{α/(1−α)}]/(1−α)`, `α ∈ [½, 1)`      |
//! | `tB`  | `2(1 − √⟨f1|ρ|f1⟩)`                                             |
//! | `tTs` | `(1 − ⟨f1|ρ^μ|f1⟩)/(1−μ)`, `μ ∈ (0,1)`                           |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TextureError};
use crate::linalg::{matrix_power_psd, trace_norm, HermitianOperator};
use crate::states::{free_operator, free_vector, DensityMatrix};

/// Overlaps at or below this are treated as zero by `tSR` and `D_{α,z}`.
pub const DIVERGENCE_EPS: f64 = 1e-300;
/// Relative rank cutoff for the weight pseudoinverse.
pub const WEIGHT_RANK_TOL: f64 = 1e-10;
/// `‖(I − P_range)|f1⟩‖` below this puts `|f1⟩` in the range of `ρ`.
pub const WEIGHT_RANGE_TOL: f64 = 1e-8;
const PARAM_SLACK: f64 = 1e-12;

/// Parameters of the α-z family: `α ∈ (0,1)` and `z ≥ max(α, 1−α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaZParams {
    alpha: f64,
    z: f64,
}

impl AlphaZParams {
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(TextureError::Domain {
                param: "alpha",
                value: alpha,
                reason: "alpha must lie in (0, 1)",
            });
        }
        if !(z.is_finite() && z >= alpha.max(1.0 - alpha) - PARAM_SLACK) {
            return Err(TextureError::Domain {
                param: "z",
                value: z,
                reason: "z must satisfy z >= max(alpha, 1 - alpha)",
            });
        }
        Ok(Self { alpha, z })
    }

    /// Smallest admissible `z` for the given `α`.
    pub fn min_z(alpha: f64) -> f64 {
        alpha.max(1.0 - alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

impl fmt::Display for AlphaZParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={},z={}", self.alpha, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureId {
    #[serde(rename = "tGR")]
    AlphaZRenyi,
    #[serde(rename = "tSR")]
    Rugosity,
    #[serde(rename = "tF")]
    Fidelity,
    #[serde(rename = "tTr")]
    TraceDistance,
    #[serde(rename = "tW")]
    Weight,
    #[serde(rename = "tR")]
    SandwichedRenyi,
    #[serde(rename = "tB")]
    Bures,
    #[serde(rename = "tTs")]
    Tsallis,
}

impl MeasureId {
    pub const ALL: [MeasureId; 8] = [
        MeasureId::AlphaZRenyi,
        MeasureId::Rugosity,
        MeasureId::Fidelity,
        MeasureId::TraceDistance,
        MeasureId::Weight,
        MeasureId::SandwichedRenyi,
        MeasureId::Bures,
        MeasureId::Tsallis,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            MeasureId::AlphaZRenyi => "tGR",
            MeasureId::Rugosity => "tSR",
            MeasureId::Fidelity => "tF",
            MeasureId::TraceDistance => "tTr",
            MeasureId::Weight => "tW",
            MeasureId::SandwichedRenyi => "tR",
            MeasureId::Bures => "tB",
            MeasureId::Tsallis => "tTs",
        }
    }

    pub fn from_short_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.short_name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureParams {
    None,
    AlphaZ(AlphaZParams),
    Alpha(f64),
    Mu(f64),
}

impl fmt::Display for MeasureParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureParams::None => Ok(()),
            MeasureParams::AlphaZ(p) => write!(f, "{p}"),
            MeasureParams::Alpha(a) => write!(f, "alpha={a}"),
            MeasureParams::Mu(m) => write!(f, "mu={m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    Natural,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub id: MeasureId,
    pub params: MeasureParams,
    /// Set for measures that take a logarithm.
    pub log_base: Option<LogBase>,
}

impl MeasureValue {
    fn plain(value: f64, id: MeasureId, params: MeasureParams) -> Self {
        Self {
            value,
            id,
            params,
            log_base: None,
        }
    }

    /// True for the divergent rugosity of a state orthogonal to `f1`.
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// A measure together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    AlphaZRenyi(AlphaZParams),
    Rugosity,
    Fidelity,
    TraceDistance,
    Weight,
    SandwichedRenyi(f64),
    Bures,
    Tsallis(f64),
}

impl Measure {
    pub fn sandwiched_renyi(alpha: f64) -> Result<Self> {
        check_renyi_alpha(alpha)?;
        Ok(Measure::SandwichedRenyi(alpha))
    }

    pub fn tsallis(mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(Measure::Tsallis(mu))
    }

    pub fn id(&self) -> MeasureId {
        match self {
            Measure::AlphaZRenyi(_) => MeasureId::AlphaZRenyi,
            Measure::Rugosity => MeasureId::Rugosity,
            Measure::Fidelity => MeasureId::Fidelity,
            Measure::TraceDistance => MeasureId::TraceDistance,
            Measure::Weight => MeasureId::Weight,
            Measure::SandwichedRenyi(_) => MeasureId::SandwichedRenyi,
            Measure::Bures => MeasureId::Bures,
            Measure::Tsallis(_) => MeasureId::Tsallis,
        }
    }

    pub fn params(&self) -> MeasureParams {
        match *self {
            Measure::AlphaZRenyi(p) => MeasureParams::AlphaZ(p),
            Measure::SandwichedRenyi(a) => MeasureParams::Alpha(a),
            Measure::Tsallis(mu) => MeasureParams::Mu(mu),
            _ => MeasureParams::None,
        }
    }

    /// `tGR[alpha=0.5,z=1]`-style label.
    pub fn label(&self) -> String {
        match self.params() {
            MeasureParams::None => self.id().short_name().to_string(),
            p => format!("{}[{p}]", self.id().short_name()),
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<MeasureValue> {
        match *self {
            Measure::AlphaZRenyi(p) => t_gr(rho, p),
            Measure::Rugosity => Ok(t_rugosity(rho)),
            Measure::Fidelity => Ok(t_fidelity(rho)),
            Measure::TraceDistance => t_trace(rho),
            Measure::Weight => Ok(t_weight(rho)),
            Measure::SandwichedRenyi(a) => t_renyi(rho, a),
            Measure::Bures => Ok(t_bures(rho)),
            Measure::Tsallis(mu) => t_tsallis(rho, mu),
        }
    }
}

fn check_renyi_alpha(alpha: f64) -> Result<()> {
    if !(0.5..1.0).contains(&alpha) {
        return Err(TextureError::Domain {
            param: "alpha",
            value: alpha,
            reason: "sandwiched Renyi alpha must lie in [1/2, 1)",
        });
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(TextureError::Domain {
            param: "mu",
            value: mu,
            reason: "Tsallis mu must lie in (0, 1)",
        });
    }
    Ok(())
}

/// `⟨f1|ρ|f1⟩`.
pub fn overlap(rho: &DensityMatrix) -> f64 {
    rho.operator().quadratic_form(&free_vector(rho.dim()))
}

/// `⟨f1|ρ^p|f1⟩` with the clamped PSD power.
fn free_power_overlap(rho: &DensityMatrix, p: f64) -> Result<f64> {
    let v = rho.eigen().psd_power_expectation(&free_vector(rho.dim()), p)?;
    Ok(v.max(0.0))
}

/// `f_{α,z}(f1‖ρ) = (⟨f1|ρ^{(1−α)/z}|f1⟩)^z`.
pub fn f_alpha_z(rho: &DensityMatrix, p: AlphaZParams) -> Result<f64> {
    let inner = free_power_overlap(rho, (1.0 - p.alpha) / p.z)?;
    Ok(inner.powf(p.z))
}

/// `Tr(ρ^{(1−α)/2z} f1^{α/z} ρ^{(1−α)/2z})^z`, built from explicit matrix
/// powers. Agrees with [`f_alpha_z`] and exists to cross-check it.
pub fn f_alpha_z_trace_form(rho: &DensityMatrix, p: AlphaZParams) -> Result<f64> {
    let f1 = free_operator(rho.dim());
    alpha_z_trace_functional(&f1, rho.operator(), p)
}

/// General `f_{α,z}(τ‖σ) = Tr(τ^{α/2z} σ^{(1−α)/z} τ^{α/2z})^z`.
fn alpha_z_trace_functional(
    tau: &HermitianOperator,
    sigma: &HermitianOperator,
    p: AlphaZParams,
) -> Result<f64> {
    if tau.dim() != sigma.dim() {
        return Err(TextureError::Dimension(format!(
            "relative entropy between dimensions {} and {}",
            tau.dim(),
            sigma.dim()
        )));
    }
    let outer = matrix_power_psd(tau, p.alpha / (2.0 * p.z))?;
    let middle = matrix_power_psd(sigma, (1.0 - p.alpha) / p.z)?;
    let sandwich = HermitianOperator::from_computed(outer.matrix() * middle.matrix() * outer.matrix());
    Ok(matrix_power_psd(&sandwich, p.z)?.trace().max(0.0))
}

/// `T^GR_{α,z}(ρ) = 1 − f_{α,z}(f1‖ρ)`.
pub fn t_gr(rho: &DensityMatrix, p: AlphaZParams) -> Result<MeasureValue> {
    let f = f_alpha_z(rho, p)?;
    Ok(MeasureValue::plain(
        1.0 - f,
        MeasureId::AlphaZRenyi,
        MeasureParams::AlphaZ(p),
    ))
}

/// Rugosity `−ln⟨f1|ρ|f1⟩`, `+∞` when the overlap vanishes.
pub fn t_rugosity(rho: &DensityMatrix) -> MeasureValue {
    let o = overlap(rho);
    let value = if o <= DIVERGENCE_EPS { f64::INFINITY } else { -o.ln() };
    MeasureValue {
        value,
        id: MeasureId::Rugosity,
        params: MeasureParams::None,
        log_base: Some(LogBase::Natural),
    }
}

/// `1 − ⟨f1|ρ|f1⟩`.
pub fn t_fidelity(rho: &DensityMatrix) -> MeasureValue {
    MeasureValue::plain(1.0 - overlap(rho), MeasureId::Fidelity, MeasureParams::None)
}

/// `½‖ρ − f1‖₁`.
pub fn t_trace(rho: &DensityMatrix) -> Result<MeasureValue> {
    let diff = rho.operator().sub(&free_operator(rho.dim()));
    Ok(MeasureValue::plain(
        0.5 * trace_norm(&diff)?,
        MeasureId::TraceDistance,
        MeasureParams::None,
    ))
}

/// Weight `1 − λ*`, with `λ* = max{λ ≥ 0 : ρ − λ f1 ⪰ 0}`.
///
/// When `|f1⟩` lies in the range of `ρ`, `λ* = 1/⟨f1|ρ⁺|f1⟩` (spectral
/// pseudoinverse); otherwise no multiple of `f1` can be removed and `λ* = 0`.
pub fn t_weight(rho: &DensityMatrix) -> MeasureValue {
    let eig = rho.eigen();
    let f = free_vector(rho.dim());
    let cut = WEIGHT_RANK_TOL * eig.max();
    let mut outside = 0.0;
    let mut inverse_form = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let w = eig.eigenvectors.column(k).dotc(&f).norm_sqr();
        if lambda > cut {
            inverse_form += w / lambda;
        } else {
            outside += w;
        }
    }
    let lambda_star = if outside.sqrt() <= WEIGHT_RANGE_TOL && inverse_form > 0.0 {
        (1.0 / inverse_form).min(1.0)
    } else {
        0.0
    };
    MeasureValue::plain(1.0 - lambda_star, MeasureId::Weight, MeasureParams::None)
}

/// `T^R_α(ρ) = [1 − (⟨f1|ρ^{(1−α)/α}|f1⟩)^{α/(1−α)}]/(1−α)`.
pub fn t_renyi(rho: &DensityMatrix, alpha: f64) -> Result<MeasureValue> {
    check_renyi_alpha(alpha)?;
    let q = free_power_overlap(rho, (1.0 - alpha) / alpha)?;
    let value = (1.0 - q.powf(alpha / (1.0 - alpha))) / (1.0 - alpha);
    Ok(MeasureValue::plain(
        value,
        MeasureId::SandwichedRenyi,
        MeasureParams::Alpha(alpha),
    ))
}

/// Bures-distance measure `2(1 − √⟨f1|ρ|f1⟩)`, equal to `2·T^GR_{½,½}`.
///
/// The overlap is taken from the clamped spectrum, like every `T^GR`, so
/// rounding noise on a state orthogonal to `f1` is not amplified by the root.
pub fn t_bures(rho: &DensityMatrix) -> MeasureValue {
    let o = free_power_overlap(rho, 1.0).unwrap_or_else(|_| overlap(rho).max(0.0));
    MeasureValue::plain(2.0 * (1.0 - o.sqrt()), MeasureId::Bures, MeasureParams::None)
}

/// Tsallis-type measure `(1 − ⟨f1|ρ^μ|f1⟩)/(1−μ)`, i.e. `T^GR_{1−μ,1}/(1−μ)`.
pub fn t_tsallis(rho: &DensityMatrix, mu: f64) -> Result<MeasureValue> {
    check_mu(mu)?;
    let q = free_power_overlap(rho, mu)?;
    Ok(MeasureValue::plain(
        (1.0 - q) / (1.0 - mu),
        MeasureId::Tsallis,
        MeasureParams::Mu(mu),
    ))
}

/// α-z Rényi relative entropy `D_{α,z}(τ‖σ) = log₂ f_{α,z}(τ‖σ) / (α − 1)`,
/// `+∞` when `f_{α,z}` vanishes.
pub fn d_alpha_z(tau: &DensityMatrix, sigma: &DensityMatrix, p: AlphaZParams) -> Result<f64> {
    let f = alpha_z_trace_functional(tau.operator(), sigma.operator(), p)?;
    if f <= DIVERGENCE_EPS {
        return Ok(f64::INFINITY);
    }
    Ok(f.log2() / (p.alpha - 1.0))
}

/// `D_{α,z}(f1‖ρ)` from the inner-product form. `+∞` when `ρ` has no overlap
/// with `f1`, since then `⟨f1|ρ^p|f1⟩ = 0` for every `p > 0`.
pub fn d_alpha_z_free(rho: &DensityMatrix, p: AlphaZParams) -> Result<f64> {
    if overlap(rho) <= DIVERGENCE_EPS {
        return Ok(f64::INFINITY);
    }
    let f = f_alpha_z(rho, p)?;
    if f <= DIVERGENCE_EPS {
        return Ok(f64::INFINITY);
    }
    Ok(f.log2() / (p.alpha - 1.0))
}

/// Independent reference computations used to cross-check the closed forms.
pub mod oracle {
    use super::*;

    /// Bisection iterations on `λ ∈ [0, 1]`.
    pub const BISECTION_STEPS: usize = 60;
    /// Feasibility slack on `λ_min(ρ − λ f1)`. When `|f1⟩` leaves the range
    /// of `ρ` by `ε`, the bisection overshoots `λ*` by about `slack/ε²`.
    pub const FEASIBILITY_SLACK: f64 = 1e-14;

    /// Weight measure from its defining optimization: the largest `λ` with
    /// `ρ − λ f1 ⪰ 0`, located by bisection on the smallest eigenvalue.
    pub fn weight_by_bisection(rho: &DensityMatrix) -> Result<f64> {
        let f1 = free_operator(rho.dim());
        let feasible = |lambda: f64| -> Result<bool> {
            let shifted = rho.operator().sub(&f1.scale(lambda));
            Ok(shifted.min_eigenvalue()? >= -FEASIBILITY_SLACK)
        };
        if feasible(1.0)? {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if feasible(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(1.0 - lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ComplexVector};
    use crate::states::{basis_state, free_state, random_mixed, PureState, TextureRng};
    use approx::assert_abs_diff_eq;

    fn mixed(d: usize) -> DensityMatrix {
        DensityMatrix::maximally_mixed(d).unwrap()
    }

    fn minus_state() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(ComplexVector::from_vec(vec![c(s, 0.), c(-s, 0.)]))
            .unwrap()
            .density()
    }

    #[test]
    fn params_domain() {
        assert!(AlphaZParams::new(0.5, 0.5).is_ok());
        assert!(AlphaZParams::new(0.3, 0.7).is_ok());
        assert!(AlphaZParams::new(0.3, 0.69).is_err());
        assert!(AlphaZParams::new(0.0, 1.0).is_err());
        assert!(AlphaZParams::new(1.0, 1.0).is_err());
        assert!(AlphaZParams::new(0.8, 0.75).is_err());
        assert!(AlphaZParams::new(f64::NAN, 1.0).is_err());
        assert!(Measure::sandwiched_renyi(0.49).is_err());
        assert!(Measure::sandwiched_renyi(1.0).is_err());
        assert!(Measure::tsallis(1.0).is_err());
    }

    #[test]
    fn overlap_examples() {
        assert_abs_diff_eq!(overlap(&free_state(3).unwrap()), 1.0, epsilon = 1e-15);
        for d in 2..=6 {
            let p0 = basis_state(d, 0).unwrap().density();
            assert_abs_diff_eq!(overlap(&p0), 1.0 / d as f64, epsilon = 1e-15);
            assert_abs_diff_eq!(overlap(&mixed(d)), 1.0 / d as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn f_alpha_z_examples() {
        let grid = [(0.5, 0.5), (0.3, 0.7), (0.7, 1.0), (0.9, 2.0)];
        for (a, z) in grid {
            let p = AlphaZParams::new(a, z).unwrap();
            assert_abs_diff_eq!(f_alpha_z(&free_state(4).unwrap(), p).unwrap(), 1.0, epsilon = 1e-12);
            for d in 2..=5 {
                // I/d: (d^{-(1-α)/z})^z = d^{α-1}
                let expect = (d as f64).powf(a - 1.0);
                assert_abs_diff_eq!(f_alpha_z(&mixed(d), p).unwrap(), expect, epsilon = 1e-12);
            }
        }
        let p = AlphaZParams::new(0.5, 0.5).unwrap();
        let p0 = basis_state(2, 0).unwrap().density();
        assert_abs_diff_eq!(f_alpha_z(&p0, p).unwrap(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(t_gr(&p0, p).unwrap().value, 0.29289322, epsilon = 1e-8);
    }

    #[test]
    fn trace_form_agrees_with_simplified_form() {
        let mut rng = TextureRng::new(99);
        for d in 2..=5 {
            for rank in 1..=d {
                let rho = random_mixed(d, rank, &mut rng).unwrap();
                for (a, z) in [(0.1, 0.9), (0.5, 0.5), (0.6, 1.5), (0.9, 0.9), (0.9, 2.0)] {
                    let p = AlphaZParams::new(a, z).unwrap();
                    let x = f_alpha_z(&rho, p).unwrap();
                    let y = f_alpha_z_trace_form(&rho, p).unwrap();
                    assert!((x - y).abs() < 1e-8, "d={d} rank={rank} a={a} z={z}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn t_gr_maximally_mixed_independent_of_z() {
        for d in 2..=6 {
            for a in [0.2, 0.5, 0.8] {
                let zmin = AlphaZParams::min_z(a);
                for z in [zmin, 1.0, 2.0] {
                    let p = AlphaZParams::new(a, z).unwrap();
                    let v = t_gr(&mixed(d), p).unwrap().value;
                    assert_abs_diff_eq!(v, 1.0 - (d as f64).powf(a - 1.0), epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn rugosity() {
        assert_abs_diff_eq!(t_rugosity(&free_state(3).unwrap()).value, 0.0, epsilon = 1e-15);
        for d in 2..=6 {
            let p0 = basis_state(d, 0).unwrap().density();
            assert_abs_diff_eq!(t_rugosity(&p0).value, (d as f64).ln(), epsilon = 1e-12);
        }
        let v = t_rugosity(&minus_state());
        assert!(v.is_infinite());
        assert_eq!(v.log_base, Some(LogBase::Natural));
    }

    #[test]
    fn fidelity_and_trace() {
        assert_abs_diff_eq!(t_fidelity(&free_state(3).unwrap()).value, 0.0, epsilon = 1e-15);
        assert!(t_trace(&free_state(3).unwrap()).unwrap().value.abs() < 1e-12);
        for d in 2..=6 {
            let p0 = basis_state(d, 0).unwrap().density();
            let inv = 1.0 / d as f64;
            assert_abs_diff_eq!(t_fidelity(&p0).value, 1.0 - inv, epsilon = 1e-12);
            assert_abs_diff_eq!(t_fidelity(&mixed(d)).value, 1.0 - inv, epsilon = 1e-12);
            // pure-pure trace distance sqrt(1 - |<f1|0>|^2)
            assert_abs_diff_eq!(t_trace(&p0).unwrap().value, (1.0 - inv).sqrt(), epsilon = 1e-12);
        }
        let p0 = basis_state(2, 0).unwrap().density();
        assert_abs_diff_eq!(t_trace(&p0).unwrap().value, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(t_trace(&mixed(2)).unwrap().value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn weight_examples() {
        assert_abs_diff_eq!(t_weight(&free_state(4).unwrap()).value, 0.0, epsilon = 1e-12);
        for d in 2..=6 {
            let p0 = basis_state(d, 0).unwrap().density();
            assert_eq!(t_weight(&p0).value, 1.0);
            // I/d - λ f1 ⪰ 0 iff λ <= 1/d
            let w = t_weight(&mixed(d)).value;
            assert_abs_diff_eq!(w, 1.0 - 1.0 / d as f64, epsilon = 1e-12);
            let oracle = oracle::weight_by_bisection(&mixed(d)).unwrap();
            assert_abs_diff_eq!(w, oracle, epsilon = 1e-8);
        }
    }

    #[test]
    fn weight_rank_deficient_with_f1_in_range() {
        // ρ = (1-ε) f1 + ε |0><0| is rank 2 and contains |f1> in its range
        let d = 3;
        let eps = 0.2;
        let f1 = free_state(d).unwrap();
        let p0 = basis_state(d, 0).unwrap().density();
        let rho = f1.mix(&p0, 1.0 - eps).unwrap();
        assert_eq!(rho.numerical_rank(1e-10), 2);
        let w = t_weight(&rho).value;
        let oracle = oracle::weight_by_bisection(&rho).unwrap();
        assert!(w < 1.0 && w >= eps - 1e-12);
        assert_abs_diff_eq!(w, oracle, epsilon = 1e-8);
    }

    #[test]
    fn weight_matches_bisection_on_random_states() {
        let mut rng = TextureRng::new(2);
        for d in 2..=5 {
            for rank in 1..=d {
                for _ in 0..5 {
                    let rho = random_mixed(d, rank, &mut rng).unwrap();
                    let w = t_weight(&rho).value;
                    let o = oracle::weight_by_bisection(&rho).unwrap();
                    assert!((w - o).abs() < 1e-8, "d={d} rank={rank}: {w} vs {o}");
                }
            }
        }
    }

    #[test]
    fn renyi_examples() {
        assert!(t_renyi(&free_state(3).unwrap(), 0.7).unwrap().value.abs() < 1e-12);
        let rho = random_mixed(4, 3, &mut TextureRng::new(6)).unwrap();
        let half = t_renyi(&rho, 0.5).unwrap().value;
        assert_abs_diff_eq!(half, 2.0 * t_fidelity(&rho).value, epsilon = 1e-12);
        for d in 2..=5 {
            for a in [0.5, 0.6, 0.75, 0.9] {
                // (d^{-(1-α)/α})^{α/(1-α)} = 1/d
                let expect = (1.0 - 1.0 / d as f64) / (1.0 - a);
                assert_abs_diff_eq!(t_renyi(&mixed(d), a).unwrap().value, expect, epsilon = 1e-12);
            }
        }
        assert!(t_renyi(&rho, 0.3).is_err());
    }

    #[test]
    fn bures_and_tsallis() {
        assert!(t_bures(&free_state(2).unwrap()).value.abs() < 1e-12);
        let p0 = basis_state(2, 0).unwrap().density();
        assert_abs_diff_eq!(t_bures(&p0).value, 0.58578644, epsilon = 1e-8);
        let gr = t_gr(&p0, AlphaZParams::new(0.5, 0.5).unwrap()).unwrap().value;
        assert_abs_diff_eq!(t_bures(&p0).value, 2.0 * gr, epsilon = 1e-12);

        assert!(t_tsallis(&free_state(2).unwrap(), 0.3).unwrap().value.abs() < 1e-12);
        let v = t_tsallis(&mixed(2), 0.5).unwrap().value;
        assert_abs_diff_eq!(v, 0.58578644, epsilon = 1e-8);
        let rho = random_mixed(3, 2, &mut TextureRng::new(4)).unwrap();
        for mu in [0.1, 0.5, 0.9] {
            let ts = t_tsallis(&rho, mu).unwrap().value;
            let gr = t_gr(&rho, AlphaZParams::new(1.0 - mu, 1.0).unwrap()).unwrap().value;
            assert_abs_diff_eq!(ts * (1.0 - mu), gr, epsilon = 1e-12);
        }
        assert!(t_tsallis(&rho, 0.0).is_err());
    }

    #[test]
    fn divergence() {
        let mut rng = TextureRng::new(12);
        let rho = random_mixed(3, 3, &mut rng).unwrap();
        let p = AlphaZParams::new(0.6, 0.8).unwrap();
        assert!(d_alpha_z(&rho, &rho, p).unwrap().abs() < 1e-10);
        let f1 = free_state(3).unwrap();
        let d = d_alpha_z(&f1, &rho, p).unwrap();
        let gr = t_gr(&rho, p).unwrap().value;
        assert_abs_diff_eq!(gr, 1.0 - 2f64.powf((p.alpha() - 1.0) * d), epsilon = 1e-10);
        // orthogonal support
        let minus = minus_state();
        let f1 = free_state(2).unwrap();
        assert!(d_alpha_z(&f1, &minus, p).unwrap().is_infinite());
    }

    #[test]
    fn measure_labels_and_dispatch() {
        let m = Measure::AlphaZRenyi(AlphaZParams::new(0.5, 1.0).unwrap());
        assert_eq!(m.label(), "tGR[alpha=0.5,z=1]");
        assert_eq!(Measure::Weight.label(), "tW");
        assert_eq!(MeasureId::from_short_name("tTs"), Some(MeasureId::Tsallis));
        let v = m.evaluate(&mixed(2)).unwrap();
        assert_abs_diff_eq!(v.value, 1.0 - 2f64.powf(-0.5), epsilon = 1e-12);
    }
}
