//! Braunstein–Kimble teleportation through the OTCSS channel, in the
//! characteristic-function picture: `χ_out(η) = χ_in(η) χ_E(η*, η)` and
//! `F = ∫ d²η/π |χ_in(η)|² χ_E(-η*, -η)`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use num_complex::Complex64;

use crate::gaussian::PhasePoint4;
use crate::otcss::{cf_closed, coefficients, OtcssParams};
use crate::{Error, Result};

pub const MAX_COHERENT_AMPLITUDE: f64 = 10.0;
pub const MAX_SQUEEZE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputState {
    Coherent { amplitude: Complex64 },
    SqueezedVacuum { r: f64 },
}

impl InputState {
    pub fn coherent(amplitude: Complex64) -> Result<Self> {
        let s = InputState::Coherent { amplitude };
        s.validate()?;
        Ok(s)
    }

    pub fn squeezed(r: f64) -> Result<Self> {
        let s = InputState::SqueezedVacuum { r };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InputState::Coherent { amplitude } => {
                let m = amplitude.norm();
                if !m.is_finite() || m > MAX_COHERENT_AMPLITUDE {
                    return Err(Error::InvalidInput(format!(
                        "|beta| = {m} outside [0, {MAX_COHERENT_AMPLITUDE}]"
                    )));
                }
            }
            InputState::SqueezedVacuum { r } => {
                if !r.is_finite() || r.abs() > MAX_SQUEEZE {
                    return Err(Error::InvalidInput(format!(
                        "|r| = {} outside [0, {MAX_SQUEEZE}]",
                        r.abs()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Teleportation fidelity, a value in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Fidelity(f64);

impl Fidelity {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value <= 1.0 + 1e-9) {
            return Err(Error::QuadratureDomain(format!(
                "fidelity {value} outside (0, 1]"
            )));
        }
        Ok(Fidelity(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn cf_input(s: &InputState, eta: Complex64) -> Complex64 {
    match *s {
        InputState::Coherent { amplitude: b } => {
            (-eta.norm_sqr() / 2.0 + eta * b.conj() - eta.conj() * b).exp()
        }
        InputState::SqueezedVacuum { r } => {
            let re = -eta.norm_sqr() * (2.0 * r).cosh() / 2.0
                - (eta * eta + eta.conj() * eta.conj()).re * (2.0 * r).sinh() / 4.0;
            Complex64::new(re.exp(), 0.0)
        }
    }
}

/// `χ_E(a1, a2)`: the OTCSS characteristic function with `a1` displacing
/// mode 1 and `a2` displacing mode 2.
pub fn channel_cf(params: &OtcssParams, a1: Complex64, a2: Complex64) -> f64 {
    cf_closed(params, &PhasePoint4::from_complex(a1, a2))
}

pub fn output_cf(s: &InputState, params: &OtcssParams, eta: Complex64) -> Complex64 {
    cf_input(s, eta) * channel_cf(params, eta.conj(), eta)
}

/// Integrand `|χ_in(η)|² χ_E(-η*, -η) / π`.
fn fidelity_integrand(s: &InputState, params: &OtcssParams, x: f64, y: f64) -> f64 {
    let eta = Complex64::new(x, y);
    cf_input(s, eta).norm_sqr() * channel_cf(params, -eta.conj(), -eta) / PI
}

/// `-ln(π g(t d)) / t²` along a direction, shrinking `t` until the
/// integrand is comfortably above underflow.
fn decay_along(g: &impl Fn(f64, f64) -> f64, dx: f64, dy: f64) -> f64 {
    let mut t = 1.0;
    for _ in 0..200 {
        let v = PI * g(t * dx, t * dy);
        if v > 1e-200 {
            return -v.ln() / (t * t);
        }
        t *= 0.5;
    }
    f64::INFINITY
}

/// Points per half-axis of the trapezoid rule in the scaled frame.
const HALF_POINTS: i32 = 40;
/// Half-width of the scaled frame; the Gaussian tail beyond it is
/// `e^{-49} ≈ 5e-22`.
const SCALED_RADIUS: f64 = 7.0;

/// Fidelity by direct two-dimensional quadrature of the CF overlap.
///
/// The integrand is Gaussian in `(Re η, Im η)`. Its decay matrix is read
/// off from three probes, then the trapezoid rule runs in the rotated
/// frame where each axis has unit decay, on `[-7, 7]²` with step `7/40`.
/// The trapezoid rule converges geometrically for such integrands, so the
/// truncation and discretization errors are both far below `1e-12`.
pub fn fidelity_quadrature(s: &InputState, params: &OtcssParams) -> Result<Fidelity> {
    s.validate()?;
    let g = |x: f64, y: f64| fidelity_integrand(s, params, x, y);
    let kxx = decay_along(&g, 1.0, 0.0);
    let kyy = decay_along(&g, 0.0, 1.0);
    let kdiag = decay_along(&g, std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let kxy = kdiag - (kxx + kyy) / 2.0;
    let k = Matrix2::new(kxx, kxy, kxy, kyy);
    if !k.iter().all(|v| v.is_finite()) {
        return Err(Error::QuadratureDomain("integrand decay could not be probed".into()));
    }
    let eig = SymmetricEigen::new(k);
    if eig.eigenvalues.iter().any(|&e| e <= 0.0) {
        return Err(Error::QuadratureDomain(format!(
            "integrand does not decay (decay rates {:?})",
            eig.eigenvalues.as_slice()
        )));
    }
    // η = R diag(1/√k) u
    let scale = Vector2::new(1.0 / eig.eigenvalues[0].sqrt(), 1.0 / eig.eigenvalues[1].sqrt());
    let rot = eig.eigenvectors;
    let h = SCALED_RADIUS / HALF_POINTS as f64;

    // fixed summation order keeps the result bit-stable
    let mut total = 0.0;
    for i in -HALF_POINTS..=HALF_POINTS {
        let wi = if i.abs() == HALF_POINTS { 0.5 } else { 1.0 };
        let mut row = 0.0;
        for j in -HALF_POINTS..=HALF_POINTS {
            let wj = if j.abs() == HALF_POINTS { 0.5 } else { 1.0 };
            let u = Vector2::new(i as f64 * h * scale[0], j as f64 * h * scale[1]);
            let eta = rot * u;
            row += wj * g(eta[0], eta[1]);
        }
        total += wi * row;
    }
    Fidelity::new(total * h * h * scale[0] * scale[1])
}

/// `F = 1/(1 - f)`, independent of the coherent amplitude.
pub fn fidelity_coherent_closed(params: &OtcssParams) -> Fidelity {
    let f = coefficients(params).channel_exponent;
    Fidelity(1.0 / (1.0 - f))
}

/// `F = 1/√(f² - 2f cosh 2r + 1)`.
pub fn fidelity_squeezed_closed(params: &OtcssParams, r: f64) -> Result<Fidelity> {
    InputState::squeezed(r)?;
    let f = coefficients(params).channel_exponent;
    Ok(Fidelity(1.0 / (f * f - 2.0 * f * (2.0 * r).cosh() + 1.0).sqrt()))
}

/// `F(r) - F(0)` for a squeezed-vacuum input through the same channel.
pub fn fidelity_difference(params: &OtcssParams, r: f64) -> Result<f64> {
    Ok(fidelity_squeezed_closed(params, r)?.value() - fidelity_squeezed_closed(params, 0.0)?.value())
}

/// Squeezed-input fidelity of this channel minus that of the two-mode
/// squeezed vacuum with the same `λ`.
pub fn channel_advantage(params: &OtcssParams, r: f64) -> Result<f64> {
    let tsvs = OtcssParams::tsvs(params.lambda())?;
    Ok(fidelity_squeezed_closed(params, r)?.value() - fidelity_squeezed_closed(&tsvs, r)?.value())
}
