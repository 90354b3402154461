//! Density matrices, pure states, the free state and the random ensembles used
//! by the verification harness.
//!
//! Basis indices are 0-based throughout: `basis_state(d, 0)` is the first
//! computational basis vector.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, TextureError};
use crate::linalg::{
    self, c, check_dim, eig_hermitian, ComplexMatrix, ComplexVector, EigenDecomposition,
    HermitianOperator,
};

/// Trace tolerance for [`DensityMatrix`] validation.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue for [`DensityMatrix`] validation.
pub const PSD_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// Seeded random source. The stream is ChaCha8 keyed by `seed_from_u64`, so a
/// seed and a call sequence fully determine every sample.
#[derive(Debug, Clone)]
pub struct TextureRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl TextureRng {
    pub const ALGORITHM: &'static str = "ChaCha8 (rand_chacha, seed_from_u64)";

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for `(seed, path...)`. The harness derives one per
    /// sample so results never depend on execution order.
    pub fn derived(seed: u64, path: &[u64]) -> Self {
        let mut h = splitmix64(seed);
        for &p in path {
            h = splitmix64(h ^ splitmix64(p.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        }
        Self::new(h)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        c(self.gaussian() * s, self.gaussian() * s)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        // column-major fill order; fixed so streams are reproducible
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    /// Random probability vector, uniform on the simplex.
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }
}

impl RngCore for TextureRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Trace-one positive semidefinite operator. The eigendecomposition is
/// computed at validation time and cached, since every spectral measure
/// reuses it.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: HermitianOperator,
    eig: OnceLock<EigenDecomposition>,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(TextureError::Trace { trace });
        }
        let eig = eig_hermitian(&op)?;
        if eig.min() < -PSD_TOL {
            return Err(TextureError::NotPsd {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(Self {
            op,
            eig: OnceLock::from(eig),
        })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    /// Validates after dividing by the trace. Used for computed states whose
    /// trace is one up to rounding.
    pub(crate) fn from_computed_normalized(m: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::from_computed(m);
        let trace = op.trace();
        if !(trace.is_finite() && trace > 0.0) {
            return Err(TextureError::Trace { trace });
        }
        Self::new(op.scale(1.0 / trace))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        self.eig
            .get_or_init(|| eig_hermitian(&self.op).expect("validated state has a spectrum"))
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        linalg::trace_of_product(self.matrix(), self.matrix()).re
    }

    /// Number of eigenvalues above `tol * lambda_max`.
    pub fn numerical_rank(&self, tol: f64) -> usize {
        let e = self.eigen();
        let cut = tol * e.max();
        e.eigenvalues.iter().filter(|&&l| l > cut).count()
    }

    /// `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(TextureError::Dimension(format!(
                "cannot mix states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(TextureError::Domain {
                param: "p",
                value: p,
                reason: "mixing weight must lie in [0, 1]",
            });
        }
        Self::from_computed_normalized(self.matrix().scale(p) + other.matrix().scale(1.0 - p))
    }

    /// `rho ⊗ delta`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let m = linalg::tensor(self.matrix(), other.matrix())?;
        Self::from_computed_normalized(m)
    }

    /// `U rho U^dag`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(TextureError::Dimension(format!(
                "{}x{} unitary acting on a {}-dimensional state",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        Self::from_computed_normalized(u * self.matrix() * u.adjoint())
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Result<DensityMatrix> {
        check_dim(d)?;
        Self::new(HermitianOperator::identity(d).scale(1.0 / d as f64))
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(TextureError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(TextureError::NotNormalized { norm });
        }
        Self::new(v.unscale(norm))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> DensityMatrix {
        let op = HermitianOperator::projector(&self.amplitudes);
        DensityMatrix::new(op).expect("projector onto a unit vector is a state")
    }
}

/// `|f1> = sum_j |j> / sqrt(d)`.
pub fn free_vector(d: usize) -> ComplexVector {
    ComplexVector::from_element(d, c(1.0 / (d as f64).sqrt(), 0.0))
}

/// The free state `f1 = |f1><f1|`; every entry equals `1/d`.
pub fn free_state(d: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    let m = ComplexMatrix::from_element(d, d, c(1.0 / d as f64, 0.0));
    DensityMatrix::new(HermitianOperator::new(m)?)
}

/// Free state as a plain operator (no validation, no spectrum).
pub(crate) fn free_operator(d: usize) -> HermitianOperator {
    HermitianOperator::from_computed(ComplexMatrix::from_element(d, d, c(1.0 / d as f64, 0.0)))
}

/// Computational basis vector `|j>`, 0-based.
pub fn basis_state(d: usize, j: usize) -> Result<PureState> {
    check_dim(d)?;
    if j >= d {
        return Err(TextureError::Index(format!(
            "basis index {j} out of range for dimension {d}"
        )));
    }
    let mut v = ComplexVector::zeros(d);
    v[j] = c(1.0, 0.0);
    PureState::new(v)
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn random_pure(d: usize, rng: &mut TextureRng) -> Result<PureState> {
    check_dim(d)?;
    let v = ComplexVector::from_fn(d, |_, _| rng.complex_gaussian());
    PureState::normalized(v)
}

/// `G G^dag / Tr(G G^dag)` for a `d x rank` Ginibre matrix `G`.
pub fn random_mixed(d: usize, rank: usize, rng: &mut TextureRng) -> Result<DensityMatrix> {
    check_dim(d)?;
    if rank == 0 || rank > d {
        return Err(TextureError::Domain {
            param: "rank",
            value: rank as f64,
            reason: "rank must satisfy 1 <= rank <= d",
        });
    }
    let g = rng.ginibre(d, rank);
    DensityMatrix::from_computed_normalized(&g * g.adjoint())
}

/// Haar-random `n x n` unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` absorbed into `Q`.
pub fn haar_unitary(n: usize, rng: &mut TextureRng) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let g = rng.ginibre(n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 { rkk / rkk.norm() } else { c(1.0, 0.0) };
        for x in q.column_mut(k).iter_mut() {
            *x *= phase;
        }
    }
    q
}

/// Discrete Fourier transform matrix `R_jk = exp(2 pi i jk/d)/sqrt(d)`.
/// Its first column is `|f1>`.
pub fn dft_rotation(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let s = 1.0 / (d as f64).sqrt();
    Ok(DMatrix::from_fn(d, d, |j, k| {
        let phase = 2.0 * PI * ((j * k) % d) as f64 / d as f64;
        Complex64::from_polar(s, phase)
    }))
}

/// Random unitary with `U f1 U^dag = f1`:
/// `U = R (e^{i theta} ⊕ V) R^dag`, `V` Haar on the complement of `|f1>`.
pub fn random_f1_fixing_unitary(d: usize, rng: &mut TextureRng) -> Result<ComplexMatrix> {
    let r = dft_rotation(d)?;
    let theta = 2.0 * PI * rng.uniform();
    let v = haar_unitary(d - 1, rng);
    let mut block = ComplexMatrix::zeros(d, d);
    block[(0, 0)] = Complex64::from_polar(1.0, theta);
    block.view_mut((1, 1), (d - 1, d - 1)).copy_from(&v);
    Ok(&r * block * r.adjoint())
}
