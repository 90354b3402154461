//! Dense complex matrix kernel.
//!
//! Everything downstream (matrix powers inside the Rényi-type measures, trace
//! norms, witness spectra) goes through [`eig_hermitian`]. Matrices are stored
//! as `nalgebra::DMatrix<Complex64>`; Hermitian operands are wrapped in
//! [`HermitianOperator`] so the self-adjointness check happens once, at the
//! boundary.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, TextureError};

/// General dense complex matrix, used for Kraus operators, unitaries and
/// intermediate products.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Complex column vector.
pub type ComplexVector = DVector<Complex64>;

/// Default absolute tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative eigenvalue clamp used by fractional powers: eigenvalues below
/// `PSD_CLAMP_REL * lambda_max` are treated as exact zeros.
pub const PSD_CLAMP_REL: f64 = 1e-12;

/// Eigenvalues below `-PSD_CHECK_TOL` make a matrix "not PSD".
pub const PSD_CHECK_TOL: f64 = 1e-8;

/// Largest dimension any constructor or tensor product will produce.
pub const MAX_DIM: usize = 64;

const PAIRING_TOL: f64 = 1e-10;

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// d x d identity.
pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Largest absolute entrywise difference.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub(crate) fn check_finite(m: &ComplexMatrix) -> Result<()> {
    for ((row, col), x) in m
        .iter()
        .enumerate()
        .map(|(i, x)| ((i % m.nrows(), i / m.nrows()), x))
    {
        if !x.re.is_finite() || !x.im.is_finite() {
            return Err(TextureError::NonFinite { row, col });
        }
    }
    Ok(())
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(TextureError::Dimension("dimension must be positive".into()));
    }
    if d > MAX_DIM {
        return Err(TextureError::SizeCap { dim: d, max: MAX_DIM });
    }
    Ok(())
}

/// `max |U^dag U - I|`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let d = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &identity(d))
}

/// Validates a square, finite matrix as unitary within `tol`.
pub fn check_unitary(u: &ComplexMatrix, tol: f64) -> Result<()> {
    if !u.is_square() || u.nrows() == 0 {
        return Err(TextureError::Dimension(format!(
            "unitary must be square and nonempty, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    check_finite(u)?;
    let deviation = unitarity_defect(u);
    if deviation > tol {
        return Err(TextureError::NotUnitary { deviation });
    }
    Ok(())
}

/// A d x d complex matrix that has passed the Hermiticity check.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates squareness, finiteness and `|M_ij - conj(M_ji)| <= 1e-10`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(TextureError::Dimension(format!(
                "Hermitian operator must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_finite(&m)?;
        let deviation = hermiticity_defect(&m);
        if deviation > tol {
            return Err(TextureError::NotHermitian { deviation });
        }
        Ok(Self { m })
    }

    /// Wraps the Hermitian part `(M + M^dag)/2` of a computed matrix. Used for
    /// products that are Hermitian in exact arithmetic.
    pub(crate) fn from_computed(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        let h = (&m + m.adjoint()).scale(0.5);
        Self { m: h }
    }

    pub fn identity(d: usize) -> Self {
        Self { m: identity(d) }
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            m: ComplexMatrix::zeros(d, d),
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(entries: &[f64]) -> Self {
        let d = entries.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        Self { m }
    }

    /// `|v><v|` (not normalized).
    pub fn projector(v: &ComplexVector) -> Self {
        Self {
            m: v * v.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.diagonal().iter().map(|x| x.re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { m: &self.m + &other.m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { m: &self.m - &other.m }
    }

    /// `<v|M|v>`, real part.
    pub fn quadratic_form(&self, v: &ComplexVector) -> f64 {
        (v.adjoint() * &self.m * v)[(0, 0)].re
    }

    /// Conjugation `U M U^dag`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::from_computed(u * &self.m * u.adjoint())
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(self)?.min())
    }
}

fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Spectral decomposition `M = V diag(lambda) V^dag` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V diag(f(lambda)) V^dag`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(f(lambda));
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// Eigenvalues after the PSD clamp, raised to `p`. Fails when an
    /// eigenvalue is below `-PSD_CHECK_TOL`, or when `p <= 0` and the spectrum
    /// has a (clamped) zero.
    pub fn psd_powered_spectrum(&self, p: f64) -> Result<Vec<f64>> {
        let min = self.min();
        if min < -PSD_CHECK_TOL {
            return Err(TextureError::NotPsd { min_eigenvalue: min });
        }
        let cutoff = PSD_CLAMP_REL * self.max().max(0.0);
        let mut out = Vec::with_capacity(self.dim());
        for &lambda in &self.eigenvalues {
            let clamped = if lambda < cutoff || lambda <= 0.0 { 0.0 } else { lambda };
            if clamped == 0.0 {
                if p <= 0.0 {
                    return Err(TextureError::SingularPower { power: p });
                }
                out.push(0.0);
            } else {
                out.push(clamped.powf(p));
            }
        }
        Ok(out)
    }

    /// `<v| M^p |v>` for the clamped PSD power, evaluated spectrally.
    pub fn psd_power_expectation(&self, v: &ComplexVector, p: f64) -> Result<f64> {
        let powered = self.psd_powered_spectrum(p)?;
        let mut acc = 0.0;
        for (k, s) in powered.iter().enumerate() {
            if *s == 0.0 {
                continue;
            }
            let amp = self.eigenvectors.column(k).dotc(v);
            acc += s * amp.norm_sqr();
        }
        Ok(acc)
    }

    /// Clamped PSD power `M^p` as a matrix.
    pub fn psd_power(&self, p: f64) -> Result<HermitianOperator> {
        let powered = self.psd_powered_spectrum(p)?;
        let mut scaled = self.eigenvectors.clone();
        for (k, s) in powered.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*s);
        }
        Ok(HermitianOperator::from_computed(
            scaled * self.eigenvectors.adjoint(),
        ))
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eig_hermitian(m: &HermitianOperator) -> Result<EigenDecomposition> {
    let d = m.dim();
    let max_iter = 200 * d.max(4);
    let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, max_iter).ok_or_else(
        || TextureError::EigenFailure {
            dim: d,
            norm_estimate: m.matrix().norm(),
        },
    )?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(TextureError::EigenFailure {
            dim: d,
            norm_estimate: m.matrix().norm(),
        });
    }
    let mut eigenvectors = ComplexMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `V diag(clamp(lambda)^p) V^dag` for a PSD operator.
pub fn matrix_power_psd(m: &HermitianOperator, p: f64) -> Result<HermitianOperator> {
    if !p.is_finite() {
        return Err(TextureError::Domain {
            param: "p",
            value: p,
            reason: "power must be finite",
        });
    }
    eig_hermitian(m)?.psd_power(p)
}

/// `sum_i |lambda_i(M)|`.
pub fn trace_norm(m: &HermitianOperator) -> Result<f64> {
    Ok(eig_hermitian(m)?.eigenvalues.iter().map(|x| x.abs()).sum())
}

/// Kronecker product; the row count of the result is capped at [`MAX_DIM`].
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.nrows() * b.nrows();
    let cols = a.ncols() * b.ncols();
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(TextureError::SizeCap {
            dim: rows.max(cols),
            max: MAX_DIM,
        });
    }
    Ok(a.kronecker(b))
}

/// Kronecker product of Hermitian operators.
pub fn tensor_hermitian(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    Ok(HermitianOperator {
        m: tensor(a.matrix(), b.matrix())?,
    })
}

/// `Tr(M rho)` for Hermitian `M` and `rho`; the imaginary residue must stay
/// below 1e-10.
pub fn expectation(m: &HermitianOperator, rho: &HermitianOperator) -> Result<f64> {
    if m.dim() != rho.dim() {
        return Err(TextureError::Dimension(format!(
            "expectation of a {}-dimensional operator in a {}-dimensional state",
            m.dim(),
            rho.dim()
        )));
    }
    let value = trace_of_product(m.matrix(), rho.matrix());
    if value.im.abs() > PAIRING_TOL {
        return Err(TextureError::NonHermitianPairing {
            residue: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// `Tr(AB)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let d = a.nrows();
    let mut acc = c(0.0, 0.0);
    for i in 0..d {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
