//! The OTCSS itself: parameters, derived coefficients, covariance matrix,
//! closed-form Wigner and characteristic functions, quadrature variances,
//! the Heisenberg-picture transform and the Fock-series amplitudes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::fock::FockState2;
use crate::gaussian::{CovMatrix4, PhasePoint4};
use crate::{Error, Result};

/// Largest squeeze magnitude accepted. The m-values grow like
/// `e^{2λ + 2|γ|}`, so the envelope keeps them well inside f64 range.
pub const MAX_LAMBDA: f64 = 5.0;
pub const MAX_ABS_GAMMA: f64 = 5.0;

/// Squeeze parameters `(λ, γ)` of `V = exp[-i(λe^γ Q1P2 + λe^{-γ} Q2P1)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtcssParams {
    lambda: f64,
    gamma: f64,
}

impl OtcssParams {
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !lambda.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda = {lambda}, gamma = {gamma} must be finite"
            )));
        }
        if !(0.0..=MAX_LAMBDA).contains(&lambda) {
            return Err(Error::InvalidParams(format!(
                "lambda = {lambda} outside [0, {MAX_LAMBDA}]"
            )));
        }
        if gamma.abs() > MAX_ABS_GAMMA {
            return Err(Error::InvalidParams(format!(
                "|gamma| = {} exceeds {MAX_ABS_GAMMA}",
                gamma.abs()
            )));
        }
        Ok(OtcssParams { lambda, gamma })
    }

    /// The ordinary two-mode squeezed vacuum (`γ = 0`).
    pub fn tsvs(lambda: f64) -> Result<Self> {
        Self::new(lambda, 0.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Weight `λe^γ` of `Q1P2` in the generator.
    pub fn lambda1(&self) -> f64 {
        self.lambda * self.gamma.exp()
    }

    /// Weight `λe^{-γ}` of `Q2P1` in the generator.
    pub fn lambda2(&self) -> f64 {
        self.lambda * (-self.gamma).exp()
    }

    pub fn coefficients(&self) -> Coefficients {
        coefficients(self)
    }
}

/// Scalars derived from `(λ, γ)` that feed every closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    /// `cosh²λ + e^{2γ} sinh²λ`
    pub m1: f64,
    /// `cosh²λ + e^{-2γ} sinh²λ`
    pub m2: f64,
    /// `cosh γ sinh 2λ`
    pub m3: f64,
    /// Normalization denominator `4(1 + sinh²γ tanh²λ) cosh²λ` of the
    /// normally ordered state.
    pub denominator: f64,
    /// Coefficient of `b†² - a†²` in the state's exponent.
    pub single_mode: f64,
    /// Coefficient of `a†b†` in the state's exponent.
    pub two_mode: f64,
    /// `cosh γ sinh 2λ - cosh²λ - cosh 2γ sinh²λ`; the teleportation channel
    /// acts as `χ_E(-η*, -η) = exp[f |η|²]`.
    pub channel_exponent: f64,
}

pub fn coefficients(params: &OtcssParams) -> Coefficients {
    let (lam, gam) = (params.lambda, params.gamma);
    let (c2, s2) = (lam.cosh().powi(2), lam.sinh().powi(2));
    let sinh_2l = (2.0 * lam).sinh();

    let m1 = c2 + (2.0 * gam).exp() * s2;
    let m2 = c2 + (-2.0 * gam).exp() * s2;
    let m3 = gam.cosh() * sinh_2l;
    let denominator = 4.0 * (1.0 + gam.sinh().powi(2) * lam.tanh().powi(2)) * c2;
    let single_mode = s2 * (2.0 * gam).sinh() / denominator;
    let two_mode = 2.0 * sinh_2l * gam.cosh() / denominator;
    let channel_exponent = gam.cosh() * sinh_2l - c2 - (2.0 * gam).cosh() * s2;

    Coefficients {
        m1,
        m2,
        m3,
        denominator,
        single_mode,
        two_mode,
        channel_exponent,
    }
}

/// `σ` with `u = diag(m2, m1)/2`, `v = diag(m1, m2)/2`, `w = diag(m3, -m3)/2`.
pub fn covariance(params: &OtcssParams) -> CovMatrix4 {
    let Coefficients { m1, m2, m3, .. } = coefficients(params);
    let entries = Matrix4::new(
        m2, 0.0, m3, 0.0, //
        0.0, m1, 0.0, -m3, //
        m3, 0.0, m1, 0.0, //
        0.0, -m3, 0.0, m2,
    ) * 0.5;
    CovMatrix4::new(entries).expect("OTCSS covariance is physical throughout the envelope")
}

/// `W = (1/π²) exp[-m1(q1² + p2²) - m2(p1² + q2²) + 2m3(q1q2 - p1p2)]`.
pub fn wigner_closed(params: &OtcssParams, x: &PhasePoint4) -> f64 {
    let Coefficients { m1, m2, m3, .. } = coefficients(params);
    let PhasePoint4 { q1, p1, q2, p2 } = *x;
    let exponent =
        -m1 * (q1 * q1 + p2 * p2) - m2 * (p1 * p1 + q2 * q2) + 2.0 * m3 * (q1 * q2 - p1 * p2);
    exponent.exp() / (PI * PI)
}

/// `χ(α, β) = exp[-⅛ vᵀ M v]`, `v = (α*, α, β*, β)`.
pub fn cf_closed(params: &OtcssParams, x: &PhasePoint4) -> f64 {
    let form = ComplexFormMatrix::from_coefficients(&coefficients(params));
    let q = form.quadratic_form(x.alpha(), x.beta());
    (-q.re / 8.0).exp()
}

/// Hermitian 4×4 matrix `M` acting on `(α*, α, β*, β)`: the Wigner exponent
/// is `-½ vᵀMv` and the characteristic-function exponent `-⅛ vᵀMv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFormMatrix {
    pub entries: Matrix4<Complex64>,
}

impl ComplexFormMatrix {
    pub fn from_coefficients(c: &Coefficients) -> Self {
        let (d, s, x) = (c.m1 - c.m2, c.m1 + c.m2, -2.0 * c.m3);
        let real = Matrix4::new(
            d, s, x, 0.0, //
            s, d, 0.0, x, //
            x, 0.0, -d, s, //
            0.0, x, s, -d,
        );
        ComplexFormMatrix {
            entries: real.map(|r| Complex64::new(r, 0.0)),
        }
    }

    /// `4 N K Nᵀ` with `K = Ωᵀ σ Ω` the characteristic-function kernel.
    pub fn from_covariance(sigma: &CovMatrix4) -> Self {
        let n = basis_change();
        let kernel = sigma.cf_kernel().map(|r| Complex64::new(r, 0.0));
        ComplexFormMatrix {
            entries: n * kernel * n.transpose() * Complex64::new(4.0, 0.0),
        }
    }

    /// `vᵀ M v` for `v = (α*, α, β*, β)` (plain transpose, no conjugation).
    pub fn quadratic_form(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        let v = nalgebra::Vector4::new(alpha.conj(), alpha, beta.conj(), beta);
        (v.transpose() * self.entries * v)[(0, 0)]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.entries - self.entries.adjoint()).camax() <= tol
    }
}

/// `N` with `(q1, p1, q2, p2) N⁻¹ = (α*, α, β*, β)`.
pub fn basis_change() -> Matrix4<Complex64> {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let o = Complex64::new(0.0, 0.0);
    Matrix4::new(
        r, i, o, o, //
        r, -i, o, o, //
        o, o, r, i, //
        o, o, r, -i,
    )
}

/// Variances of `x1 = (Q1 + Q2)/2` and `x2 = (P1 + P2)/2`.
pub fn variances(params: &OtcssParams) -> (f64, f64) {
    let (lam, gam) = (params.lambda, params.gamma);
    let common = (2.0 * lam).cosh() + 2.0 * lam.sinh().powi(2) * gam.sinh().powi(2);
    let cross = (2.0 * lam).sinh() * gam.cosh();
    ((common + cross) / 4.0, (common - cross) / 4.0)
}

/// Whether one quadrature is squeezed below, and the other lies above, the
/// two-mode squeezed vacuum of the same `λ`: `0 < tanh λ < 1/(1 + cosh γ)`.
pub fn enhanced_squeezing(params: &OtcssParams) -> Result<bool> {
    if params.lambda == 0.0 {
        return Err(Error::UndefinedCondition);
    }
    Ok(params.lambda.tanh() < 1.0 / (1.0 + params.gamma.cosh()))
}

/// Linear action of `V` on the quadratures: `V⁻¹ Q V = q_matrix · Q` and
/// `V⁻¹ P V = p_matrix · P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTransform {
    pub q_matrix: Matrix2<f64>,
    pub p_matrix: Matrix2<f64>,
}

impl QuadTransform {
    /// Covariance of `V|00⟩`: `½ q qᵀ` in the position sector and
    /// `½ p pᵀ` in the momentum sector.
    pub fn covariance_of_vacuum(&self) -> Matrix4<f64> {
        let cq = self.q_matrix * self.q_matrix.transpose() * 0.5;
        let cp = self.p_matrix * self.p_matrix.transpose() * 0.5;
        let mut m = Matrix4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * i, 2 * j)] = cq[(i, j)];
                m[(2 * i + 1, 2 * j + 1)] = cp[(i, j)];
            }
        }
        m
    }

    /// Coordinates `x'` with `V⁻¹ D(x) V = D(x')`: `q' = Λ⁻¹ q`, `p' = Λᵀ p`.
    pub fn primed(&self, x: &PhasePoint4) -> PhasePoint4 {
        let q = self.p_matrix.transpose() * nalgebra::Vector2::new(x.q1, x.q2);
        let p = self.q_matrix.transpose() * nalgebra::Vector2::new(x.p1, x.p2);
        PhasePoint4::new(q[0], p[0], q[1], p[1])
    }
}

pub fn heisenberg_transform(params: &OtcssParams) -> QuadTransform {
    let (c, s) = (params.lambda.cosh(), params.lambda.sinh());
    let (up, down) = (params.gamma.exp(), (-params.gamma).exp());
    QuadTransform {
        q_matrix: Matrix2::new(c, down * s, up * s, c),
        p_matrix: Matrix2::new(c, -up * s, -down * s, c),
    }
}

/// Largest tolerated truncation loss for the Fock-series state.
pub const MAX_SERIES_DEFICIT: f64 = 1e-6;
const SERIES_TERM_FLOOR: f64 = 1e-16;

/// Amplitudes `c_mn` of `(2/√L) exp[A(b†² - a†²) + B a†b†]|00⟩` for
/// `0 ≤ m, n ≤ cutoff`.
///
/// The three exponentials commute, so each is expanded separately and
/// applied in turn; creation operators only raise photon numbers, hence
/// every retained amplitude is exact and the loss shows up as norm deficit.
pub fn fock_amplitudes(params: &OtcssParams, cutoff: usize) -> Result<FockState2> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff { cutoff, min: 2 });
    }
    let c = coefficients(params);
    let dim = cutoff + 1;

    // exp[B a†b†]|00⟩ = Σ_k B^k |k k⟩
    let mut amps = DMatrix::<f64>::zeros(dim, dim);
    let mut pow = 1.0;
    for k in 0..dim {
        amps[(k, k)] = pow;
        pow *= c.two_mode;
    }
    amps = apply_pair_series(&amps, c.single_mode, Mode::B);
    amps = apply_pair_series(&amps, -c.single_mode, Mode::A);
    amps *= 2.0 / c.denominator.sqrt();

    let state = FockState2::from_amplitudes(amps.map(|x| Complex64::new(x, 0.0)));
    if state.norm_deficit() > MAX_SERIES_DEFICIT {
        return Err(Error::CutoffTooSmall {
            cutoff,
            deficit: state.norm_deficit(),
        });
    }
    Ok(state)
}

#[derive(Clone, Copy)]
enum Mode {
    A,
    B,
}

/// `exp[coef · x†²]` applied to `amps` as a truncated power series.
fn apply_pair_series(amps: &DMatrix<f64>, coef: f64, mode: Mode) -> DMatrix<f64> {
    if coef == 0.0 {
        return amps.clone();
    }
    let mut total = amps.clone();
    let mut term = amps.clone();
    for j in 1.. {
        term = raise_twice(&term, mode) * (coef / j as f64);
        total += &term;
        if term.amax() < SERIES_TERM_FLOOR {
            break;
        }
    }
    total
}

fn raise_twice(amps: &DMatrix<f64>, mode: Mode) -> DMatrix<f64> {
    let dim = amps.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            let (src, idx) = match mode {
                Mode::A if m >= 2 => ((m - 2, n), m),
                Mode::B if n >= 2 => ((m, n - 2), n),
                _ => continue,
            };
            out[(m, n)] = ((idx * (idx - 1)) as f64).sqrt() * amps[src];
        }
    }
    out
}
