//! CPTP maps in Kraus form and the free (texture-free) operations.
//!
//! A channel `Φ(ρ) = Σ K_n ρ K_n†` is texture-free when it fixes `f1`, which
//! for a pure fixed point is the eigenvector condition `K_n|f1⟩ = α_n|f1⟩`
//! on every Kraus operator.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TextureError};
use crate::linalg::{
    check_dim, check_finite, identity, max_abs_diff, ComplexMatrix, ComplexVector,
    HermitianOperator, MAX_DIM,
};
use crate::states::{
    dft_rotation, free_operator, free_vector, random_f1_fixing_unitary, DensityMatrix, TextureRng,
};

/// Completeness tolerance on `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Largest trace drift `apply` silently renormalizes.
pub const TRACE_DRIFT_TOL: f64 = 1e-9;
/// Eigenvector residual accepted by [`KrausChannel::is_texture_free`].
pub const FREE_RESIDUAL_TOL: f64 = 1e-9;
const ZERO_ALPHA_TOL: f64 = 1e-12;
const ORTHO_MIN_NORM: f64 = 1e-6;
const ORTHO_ATTEMPTS: usize = 3;

#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

/// Per-Kraus eigenvector residuals and implied eigenvalues `α_n = ⟨f1|K_n|f1⟩`.
#[derive(Debug, Clone, Serialize)]
pub struct TextureFreeReport {
    pub free: bool,
    pub residuals: Vec<f64>,
    pub alphas: Vec<Complex64>,
    /// Indices of Kraus operators that annihilate `|f1⟩` (`α_n = 0`). This is
    /// permitted; it is reported rather than rejected.
    pub zero_alphas: Vec<usize>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| TextureError::Dimension("channel needs at least one Kraus operator".into()))?;
        let dim = first.nrows();
        check_dim(dim)?;
        for (n, k) in kraus_ops.iter().enumerate() {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(TextureError::Dimension(format!(
                    "Kraus operator {n} is {}x{}, expected {dim}x{dim}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            check_finite(k)?;
        }
        let effect: ComplexMatrix = kraus_ops.iter().map(|k| k.adjoint() * k).sum();
        let deviation = max_abs_diff(&effect, &identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(TextureError::Incomplete { deviation });
        }
        Ok(Self {
            dim,
            kraus_ops,
            labels: Vec::new(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn identity(d: usize) -> Result<Self> {
        check_dim(d)?;
        Self::new(vec![identity(d)])
    }

    /// Single-Kraus channel `ρ ↦ UρU†`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_defect(&self) -> f64 {
        let effect: ComplexMatrix = self.kraus_ops.iter().map(|k| k.adjoint() * k).sum();
        max_abs_diff(&effect, &identity(self.dim))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(TextureError::Dimension(format!(
                "{}-dimensional channel applied to a {}-dimensional state",
                self.dim,
                rho.dim()
            )));
        }
        let out: ComplexMatrix = self
            .kraus_ops
            .iter()
            .map(|k| k * rho.matrix() * k.adjoint())
            .sum();
        let trace: f64 = out.diagonal().iter().map(|x| x.re).sum();
        let drift = (trace - 1.0).abs();
        if drift > TRACE_DRIFT_TOL {
            return Err(TextureError::NonTracePreserving { drift });
        }
        DensityMatrix::from_computed_normalized(out)
    }

    pub fn is_texture_free(&self) -> TextureFreeReport {
        let f = free_vector(self.dim);
        let mut residuals = Vec::with_capacity(self.kraus_ops.len());
        let mut alphas = Vec::with_capacity(self.kraus_ops.len());
        let mut zero_alphas = Vec::new();
        for (n, k) in self.kraus_ops.iter().enumerate() {
            let image = k * &f;
            let alpha = f.dotc(&image);
            residuals.push((&image - &f * alpha).norm());
            if alpha.norm() <= ZERO_ALPHA_TOL {
                zero_alphas.push(n);
            }
            alphas.push(alpha);
        }
        let free = residuals.iter().all(|&r| r <= FREE_RESIDUAL_TOL);
        TextureFreeReport {
            free,
            residuals,
            alphas,
            zero_alphas,
        }
    }
}

/// Mixed-unitary free channel: Kraus operators `√p_m U_m` with `U_m` fixing
/// `f1` and `(p_m)` uniform on the simplex.
pub fn random_texture_free_unitary_mix(
    d: usize,
    n_terms: usize,
    rng: &mut TextureRng,
) -> Result<KrausChannel> {
    if n_terms == 0 {
        return Err(TextureError::Domain {
            param: "n_terms",
            value: 0.0,
            reason: "need at least one unitary",
        });
    }
    check_dim(d)?;
    let weights = rng.simplex(n_terms);
    let mut ops = Vec::with_capacity(n_terms);
    for p in &weights {
        let u = random_f1_fixing_unitary(d, rng)?;
        ops.push(u.scale(p.sqrt()));
    }
    let labels = weights.iter().map(|p| format!("unitary p={p}")).collect();
    Ok(KrausChannel::new(ops)?.with_labels(labels))
}

/// General free channel from a random isometry `V: C^d → C^d ⊗ C^m` with
/// `V|f1⟩ = |f1⟩ ⊗ |χ⟩`. Kraus operators are `K_n = (I ⊗ ⟨n|) V`, so
/// `K_n|f1⟩ = χ_n|f1⟩`. Returns the channel and the sampled `χ`.
pub fn random_texture_free_channel_with_env(
    d: usize,
    env_dim: usize,
    rng: &mut TextureRng,
) -> Result<(KrausChannel, ComplexVector)> {
    check_dim(d)?;
    if env_dim == 0 {
        return Err(TextureError::Domain {
            param: "env_dim",
            value: 0.0,
            reason: "environment dimension must be positive",
        });
    }
    let big = d * env_dim;
    if big > MAX_DIM {
        return Err(TextureError::SizeCap { dim: big, max: MAX_DIM });
    }

    let chi = {
        let v = ComplexVector::from_fn(env_dim, |_, _| rng.complex_gaussian());
        let n = v.norm();
        v.unscale(n)
    };
    let f = free_vector(d);
    let first = f.kronecker(&chi);

    // W = V R has first column |f1⟩⊗|χ⟩; the rest is random in its complement.
    let mut w = None;
    for _ in 0..ORTHO_ATTEMPTS {
        if let Some(cols) = complete_isometry(&first, d, rng) {
            w = Some(cols);
            break;
        }
    }
    let w = w.ok_or(TextureError::Orthonormalization {
        attempts: ORTHO_ATTEMPTS,
    })?;
    let r = dft_rotation(d)?;
    let v = w * r.adjoint();

    let ops: Vec<ComplexMatrix> = (0..env_dim)
        .map(|n| ComplexMatrix::from_fn(d, d, |i, j| v[(i * env_dim + n, j)]))
        .collect();
    let labels = (0..env_dim).map(|n| format!("env {n}")).collect();
    let channel = KrausChannel::new(ops)?.with_labels(labels);
    Ok((channel, chi))
}

/// See [`random_texture_free_channel_with_env`].
pub fn random_texture_free_channel(
    d: usize,
    env_dim: usize,
    rng: &mut TextureRng,
) -> Result<KrausChannel> {
    random_texture_free_channel_with_env(d, env_dim, rng).map(|(ch, _)| ch)
}

/// `n` orthonormal columns in `C^len` whose first column is `first`. Modified
/// Gram-Schmidt, applied twice.
fn complete_isometry(first: &ComplexVector, n: usize, rng: &mut TextureRng) -> Option<ComplexMatrix> {
    let len = first.len();
    let mut cols: Vec<ComplexVector> = vec![first.clone()];
    while cols.len() < n {
        let mut v = ComplexVector::from_fn(len, |_, _| rng.complex_gaussian());
        let start = v.norm();
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm < ORTHO_MIN_NORM * start {
            return None;
        }
        cols.push(v.unscale(norm));
    }
    Some(ComplexMatrix::from_columns(&cols))
}

/// Detexturing map `Δ_T(X) = Tr(X f1) f1 = ⟨f1|X|f1⟩ f1`. Not trace-preserving
/// on general inputs.
pub fn detexture(a: &HermitianOperator) -> HermitianOperator {
    let d = a.dim();
    let weight = a.quadratic_form(&free_vector(d));
    free_operator(d).scale(weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::states::{basis_state, free_state, random_mixed};
    use approx::assert_abs_diff_eq;

    fn pauli(which: char) -> ComplexMatrix {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        match which {
            'x' => ComplexMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            'y' => ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            'z' => ComplexMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            _ => identity(2),
        }
    }

    #[test]
    fn identity_channel() {
        let ch = KrausChannel::identity(3).unwrap();
        let rho = random_mixed(3, 2, &mut TextureRng::new(1)).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
        let report = ch.is_texture_free();
        assert!(report.free);
        assert_abs_diff_eq!(report.alphas[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unitary_channel_preserves_spectrum() {
        let mut rng = TextureRng::new(5);
        let u = random_f1_fixing_unitary(4, &mut rng).unwrap();
        let ch = KrausChannel::unitary(u).unwrap();
        assert!(ch.is_texture_free().free);
        let rho = random_mixed(4, 4, &mut rng).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert_abs_diff_eq!(out.operator().trace(), 1.0, epsilon = 1e-12);
        for (a, b) in out.eigen().eigenvalues.iter().zip(&rho.eigen().eigenvalues) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn depolarizing_qubit() {
        // {I, X, Y, Z}/2 sends every qubit state to I/2
        let ops = ['i', 'x', 'y', 'z'].iter().map(|&p| pauli(p).scale(0.5)).collect();
        let ch = KrausChannel::new(ops).unwrap();
        let out = ch.apply(&basis_state(2, 0).unwrap().density()).unwrap();
        assert!(max_abs_diff(out.matrix(), &identity(2).scale(0.5)) < 1e-15);
        assert!(!ch.is_texture_free().free);
    }

    #[test]
    fn pauli_x_is_free_pauli_z_is_not() {
        let x = KrausChannel::unitary(pauli('x')).unwrap().is_texture_free();
        assert!(x.free);
        assert_abs_diff_eq!(x.alphas[0].re, 1.0, epsilon = 1e-15);
        let z = KrausChannel::unitary(pauli('z')).unwrap().is_texture_free();
        assert!(!z.free);
        // Z|f1> = (|0> - |1>)/sqrt(2) is orthogonal to |f1>
        assert_abs_diff_eq!(z.alphas[0].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.residuals[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_alpha_is_flagged_not_rejected() {
        // K_0 = |f1><f1|, K_1 = I - |f1><f1|: K_1 annihilates |f1>
        let f = free_state(3).unwrap().matrix().clone();
        let ch = KrausChannel::new(vec![f.clone(), identity(3) - f]).unwrap();
        let report = ch.is_texture_free();
        assert!(report.free);
        assert_eq!(report.zero_alphas, vec![1]);
    }

    #[test]
    fn rejects_incomplete_and_bad_shapes() {
        assert!(matches!(
            KrausChannel::new(vec![identity(2).scale(0.5)]),
            Err(TextureError::Incomplete { .. })
        ));
        assert!(KrausChannel::new(vec![]).is_err());
        assert!(KrausChannel::new(vec![identity(2), identity(3)]).is_err());
        let ch = KrausChannel::identity(2).unwrap();
        assert!(ch.apply(&free_state(3).unwrap()).is_err());
    }

    #[test]
    fn unitary_mix_is_free() {
        let mut rng = TextureRng::new(11);
        let ch = random_texture_free_unitary_mix(3, 1, &mut rng).unwrap();
        assert_eq!(ch.kraus_ops().len(), 1);
        assert!(crate::linalg::unitarity_defect(&ch.kraus_ops()[0]) < 1e-10);
        for seed in 0..500u64 {
            for d in 2..=6 {
                let mut rng = TextureRng::derived(seed, &[d as u64, 1]);
                let n = 1 + rng.below(4);
                let ch = random_texture_free_unitary_mix(d, n, &mut rng).unwrap();
                assert!(ch.completeness_defect() < 1e-10);
                assert!(ch.is_texture_free().free);
                let f = free_state(d).unwrap();
                let out = ch.apply(&f).unwrap();
                assert!(max_abs_diff(out.matrix(), f.matrix()) < 1e-9);
            }
        }
    }

    #[test]
    fn isometry_channel_is_free_and_recovers_chi() {
        for seed in 0..500u64 {
            for d in 2..=6 {
                let mut rng = TextureRng::derived(seed, &[d as u64, 2]);
                let m = 1 + rng.below(4);
                let (ch, chi) = random_texture_free_channel_with_env(d, m, &mut rng).unwrap();
                assert!(ch.completeness_defect() < 1e-9);
                let report = ch.is_texture_free();
                assert!(report.free, "seed {seed} d {d}: {:?}", report.residuals);
                for (a, x) in report.alphas.iter().zip(chi.iter()) {
                    assert!((a - x).norm() < 1e-9);
                }
                let total: f64 = report.alphas.iter().map(|a| a.norm_sqr()).sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
                let f = free_state(d).unwrap();
                let out = ch.apply(&f).unwrap();
                assert!(max_abs_diff(out.matrix(), f.matrix()) < 1e-9);
            }
        }
    }

    #[test]
    fn trivial_environment_gives_unitary() {
        let ch = random_texture_free_channel(4, 1, &mut TextureRng::new(8)).unwrap();
        assert_eq!(ch.kraus_ops().len(), 1);
        assert!(crate::linalg::unitarity_defect(&ch.kraus_ops()[0]) < 1e-12);
        assert!(matches!(
            random_texture_free_channel(8, 9, &mut TextureRng::new(8)),
            Err(TextureError::SizeCap { .. })
        ));
    }

    #[test]
    fn detexture_examples() {
        let f = free_state(3).unwrap();
        let out = detexture(f.operator());
        assert!(max_abs_diff(out.matrix(), f.matrix()) < 1e-15);
        let out = detexture(&HermitianOperator::identity(3));
        assert!(max_abs_diff(out.matrix(), f.matrix()) < 1e-15);
        let p0 = basis_state(2, 0).unwrap().density();
        let out = detexture(p0.operator());
        let half_f1 = free_state(2).unwrap().matrix().scale(0.5);
        assert!(max_abs_diff(out.matrix(), &half_f1) < 1e-15);
        // not trace preserving: Tr Δ(|0><0|) = 1/d
        for d in 2..=6 {
            let p0 = basis_state(d, 0).unwrap().density();
            assert_abs_diff_eq!(detexture(p0.operator()).trace(), 1.0 / d as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn detexture_is_idempotent() {
        let mut rng = TextureRng::new(17);
        for d in 2..=6 {
            let g = rng.ginibre(d, d);
            let a = HermitianOperator::from_computed(&g + g.adjoint());
            let once = detexture(&a);
            let twice = detexture(&once);
            assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
        }
    }
}
