//! Generic two-mode Gaussian machinery: covariance validation, PPT
//! symplectic spectrum, logarithmic negativity and the Gaussian
//! Wigner/characteristic functions of zero-mean states.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::{Error, Result};

/// Purity target `det σ` for a pure two-mode state with vacuum variance 1/2.
pub const PURE_DET: f64 = 1.0 / 16.0;

const SYMMETRY_TOL: f64 = 1e-12;
const PHYSICALITY_TOL: f64 = 1e-9;
const PURITY_TOL: f64 = 1e-6;
const SEPARABILITY_TOL: f64 = 1e-12;

/// Symplectic form `Ω = [[0,1],[-1,0]] ⊕ [[0,1],[-1,0]]` in `(q1,p1,q2,p2)` order.
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Absolute slack added to the fixed tolerances to absorb the rounding of
/// determinant-like quantities, whose error grows like `ε·|σ|²` once the
/// entries are large (strong squeezing).
fn rounding_slack(m: &Matrix4<f64>) -> f64 {
    64.0 * f64::EPSILON * m.amax().powi(2)
}

/// Real symmetric 4×4 covariance matrix of a two-mode state, ordered
/// `(q1, p1, q2, p2)`, with blocks `u` (mode 1), `v` (mode 2), `w` (cross).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMatrix4 {
    entries: Matrix4<f64>,
}

impl CovMatrix4 {
    /// Validates symmetry, positive definiteness and the uncertainty
    /// relation (both symplectic eigenvalues at least 1/2).
    pub fn new(entries: Matrix4<f64>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        let scale = entries.amax().max(1.0);
        let asym = (entries - entries.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidCovariance(format!(
                "not symmetric (max asymmetry {asym:e})"
            )));
        }
        let entries = (entries + entries.transpose()) * 0.5;
        if entries.cholesky().is_none() {
            return Err(Error::InvalidCovariance("not positive definite".into()));
        }
        let cov = CovMatrix4 { entries };
        let (_, nu_minus) = cov.symplectic_eigenvalues()?;
        let slack = PHYSICALITY_TOL + rounding_slack(&entries);
        if nu_minus < 0.5 - slack {
            return Err(Error::InvalidCovariance(format!(
                "violates the uncertainty relation (symplectic eigenvalue {nu_minus} < 1/2)"
            )));
        }
        Ok(cov)
    }

    pub fn vacuum() -> Self {
        CovMatrix4 {
            entries: Matrix4::identity() * 0.5,
        }
    }

    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn u(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn v(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn w(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn det(&self) -> f64 {
        self.entries.determinant()
    }

    /// `det u + det v + 2 det w`, the invariant of the matrix itself.
    fn delta(&self) -> f64 {
        self.u().determinant() + self.v().determinant() + 2.0 * self.w().determinant()
    }

    /// Symplectic eigenvalues `(ν+, ν-)` of the matrix itself (no transpose).
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        symplectic_pair(self.delta(), self.det(), self.entries.amax())
    }

    /// Kernel of the symmetric-order characteristic function, `Ωᵀ σ Ω`:
    /// `χ(x) = exp[-½ xᵀ K x]` for displacements `exp[i(pQ - qP)]`.
    pub fn cf_kernel(&self) -> Matrix4<f64> {
        let omega = symplectic_form();
        omega.transpose() * self.entries * omega
    }

    fn is_pure(&self) -> std::result::Result<(), f64> {
        let det = self.det();
        if (det - PURE_DET).abs() > PURITY_TOL + rounding_slack(&self.entries) {
            Err(det)
        } else {
            Ok(())
        }
    }
}

/// Roots of `x² - Δ x + det σ`, returned as `(√x+, √x-)`.
///
/// The smaller root is taken as `det σ / x+` so strongly squeezed states
/// keep full relative precision in `ν-`. A discriminant within rounding of
/// zero is treated as an exact double root: every pure state has
/// `ν+ = ν- = 1/2`, and the square root would otherwise turn `1e-16`
/// rounding into `1e-8` errors.
fn symplectic_pair(delta: f64, det: f64, scale: f64) -> Result<(f64, f64)> {
    if det <= 0.0 {
        return Err(Error::InvalidCovariance(format!(
            "non-positive determinant {det:e}"
        )));
    }
    let disc = delta * delta - 4.0 * det;
    let noise = 1e-14 * delta * delta + 64.0 * f64::EPSILON * scale.max(1.0).powi(4);
    if disc < -(PHYSICALITY_TOL * delta.abs().max(1.0).powi(2) + noise) {
        return Err(Error::InvalidCovariance(format!(
            "negative symplectic discriminant {disc:e}"
        )));
    }
    let root = if disc <= noise { 0.0 } else { disc.sqrt() };
    let upper = 0.5 * (delta + root);
    if upper <= 0.0 {
        return Err(Error::InvalidCovariance(format!(
            "non-positive symplectic invariant {delta:e}"
        )));
    }
    let lower = det / upper;
    Ok((upper.sqrt(), lower.sqrt()))
}

/// Symplectic spectrum of the partially transposed covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub n_plus: f64,
    pub n_minus: f64,
    /// `det u + det v - 2 det w`.
    pub seralian: f64,
}

impl SymplecticSpectrum {
    /// Smallest PPT symplectic eigenvalue; below 1/2 signals entanglement.
    pub fn smallest(&self) -> f64 {
        self.n_plus.min(self.n_minus)
    }
}

/// Quadrature coordinates of a two-mode phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint4 {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl PhasePoint4 {
    pub const ORIGIN: PhasePoint4 = PhasePoint4 {
        q1: 0.0,
        p1: 0.0,
        q2: 0.0,
        p2: 0.0,
    };

    pub fn new(q1: f64, p1: f64, q2: f64, p2: f64) -> Self {
        PhasePoint4 { q1, p1, q2, p2 }
    }

    /// From complex amplitudes `α = (q1 + i p1)/√2`, `β = (q2 + i p2)/√2`.
    pub fn from_complex(alpha: Complex64, beta: Complex64) -> Self {
        let s = std::f64::consts::SQRT_2;
        PhasePoint4 {
            q1: s * alpha.re,
            p1: s * alpha.im,
            q2: s * beta.re,
            p2: s * beta.im,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.q1, self.p1) / std::f64::consts::SQRT_2
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.q2, self.p2) / std::f64::consts::SQRT_2
    }

    pub fn as_vector(&self) -> Vector4<f64> {
        Vector4::new(self.q1, self.p1, self.q2, self.p2)
    }
}

/// `det u + det v - 2 det w`.
pub fn seralian(sigma: &CovMatrix4) -> f64 {
    sigma.u().determinant() + sigma.v().determinant() - 2.0 * sigma.w().determinant()
}

/// Symplectic eigenvalues `ñ±` of the partial transpose (sign of `det w`
/// flipped), from the closed-form roots.
pub fn ppt_symplectic_eigenvalues(sigma: &CovMatrix4) -> Result<SymplecticSpectrum> {
    let seralian = seralian(sigma);
    let (n_plus, n_minus) = symplectic_pair(seralian, sigma.det(), sigma.entries.amax())?;
    Ok(SymplecticSpectrum {
        n_plus,
        n_minus,
        seralian,
    })
}

/// `E_N = max[0, -ln(2 ñ_s)]`.
pub fn log_negativity(sigma: &CovMatrix4) -> Result<f64> {
    let spectrum = ppt_symplectic_eigenvalues(sigma)?;
    Ok(log_negativity_from_smallest(spectrum.smallest()))
}

pub(crate) fn log_negativity_from_smallest(n_s: f64) -> f64 {
    (-(2.0 * n_s).ln()).max(0.0)
}

/// PPT criterion: separable iff `ñ_s ≥ 1/2`.
pub fn is_separable(sigma: &CovMatrix4) -> Result<bool> {
    let spectrum = ppt_symplectic_eigenvalues(sigma)?;
    Ok(spectrum.smallest() >= 0.5 - SEPARABILITY_TOL)
}

/// Gaussian Wigner function `(1/π²) exp[-½ xᵀ σ⁻¹ x]`.
///
/// The fixed `1/π²` prefactor is the normalization of a *pure* two-mode
/// state, so `σ` must satisfy `det σ = 1/16`.
pub fn wigner_of_covariance(sigma: &CovMatrix4, x: &PhasePoint4) -> Result<f64> {
    sigma.is_pure().map_err(|det| Error::NotPure { det })?;
    let inv = sigma
        .entries
        .try_inverse()
        .ok_or_else(|| Error::InvalidCovariance("singular".into()))?;
    let v = x.as_vector();
    Ok((-0.5 * v.dot(&(inv * v))).exp() / (PI * PI))
}

/// Symmetric-order characteristic function `tr[ρ D1(q1,p1) D2(q2,p2)]` of a
/// zero-mean Gaussian state, with `D(q,p) = exp[i(pQ - qP)]`.
pub fn cf_of_covariance(sigma: &CovMatrix4, x: &PhasePoint4) -> f64 {
    let v = x.as_vector();
    (-0.5 * v.dot(&(sigma.cf_kernel() * v))).exp()
}
