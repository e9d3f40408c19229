//! CHSH-type Bell test with displaced parity measurements.
//!
//! Both modes are displaced by the same magnitude `√J`: mode 1 by
//! `√J e^{iφ}`, mode 2 by `√J e^{iθ}`. The Bell combination is
//! `B = Π(0,0) + Π(α,0) + Π(0,β) - Π(α,β)`, where `Π = π² W` is the
//! displaced-parity expectation.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::gaussian::PhasePoint4;
use crate::otcss::{wigner_closed, OtcssParams};
use crate::{Error, Result};

/// Local realistic bound on `|B|`.
pub const LOCAL_BOUND: f64 = 2.0;
/// Upper end of the displacement search when `J` is free.
pub const MAX_SEARCH_J: f64 = 2.0;

fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSetting {
    j: f64,
    theta: f64,
    phi: f64,
}

impl BellSetting {
    /// Angles are wrapped into `[0, 2π)`.
    pub fn new(j: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(j.is_finite() && theta.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidSetting("non-finite value".into()));
        }
        if j < 0.0 {
            return Err(Error::InvalidSetting(format!("J = {j} must be nonnegative")));
        }
        Ok(BellSetting {
            j,
            theta: wrap_angle(theta),
            phi: wrap_angle(phi),
        })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Displacement of mode 1.
    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.j.sqrt(), self.phi)
    }

    /// Displacement of mode 2.
    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(self.j.sqrt(), self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellValue {
    pub value: f64,
    pub violates: bool,
}

impl BellValue {
    pub fn new(value: f64) -> Self {
        BellValue {
            value,
            violates: value.abs() > LOCAL_BOUND,
        }
    }
}

/// `Π(x) = π² W(x)`.
pub fn parity_expectation(params: &OtcssParams, x: &PhasePoint4) -> f64 {
    PI * PI * wigner_closed(params, x)
}

/// The closed-form Bell function.
pub fn bell_function(params: &OtcssParams, s: &BellSetting) -> BellValue {
    let (lam, gam) = (params.lambda(), params.gamma());
    let (j, th, ph) = (s.j, s.theta, s.phi);
    let (c2, s2) = (lam.cosh().powi(2), lam.sinh().powi(2));
    let (ep, em) = ((2.0 * gam).exp(), (-2.0 * gam).exp());
    let (cph2, sph2) = (ph.cos().powi(2), ph.sin().powi(2));
    let (cth2, sth2) = (th.cos().powi(2), th.sin().powi(2));

    let mode1 = (-2.0 * j * c2 - 2.0 * j * (ep * cph2 + em * sph2) * s2).exp();
    let mode2 = (-2.0 * j * c2 - 2.0 * j * (ep * sth2 + em * cth2) * s2).exp();
    let joint = (-4.0 * j * c2 - 2.0 * j * (cph2 + sth2) * ep * s2 - 2.0 * j * (sph2 + cth2) * em * s2
        + 4.0 * j * (th + ph).cos() * gam.cosh() * (2.0 * lam).sinh())
    .exp();
    BellValue::new(1.0 + mode1 + mode2 - joint)
}

/// The Bell combination assembled from four Wigner-function samples.
pub fn bell_from_wigner(params: &OtcssParams, s: &BellSetting) -> BellValue {
    bell_from_parity(s, |x| parity_expectation(params, x))
}

/// Four-point combination for any parity function (used with the
/// Fock-space oracle as well as the closed form).
pub fn bell_from_parity<F>(s: &BellSetting, mut parity: F) -> BellValue
where
    F: FnMut(&PhasePoint4) -> f64,
{
    let zero = Complex64::new(0.0, 0.0);
    let (a, b) = (s.alpha(), s.beta());
    let value = parity(&PhasePoint4::ORIGIN)
        + parity(&PhasePoint4::from_complex(a, zero))
        + parity(&PhasePoint4::from_complex(zero, b))
        - parity(&PhasePoint4::from_complex(a, b));
    BellValue::new(value)
}

/// Grid sizes for [`maximize_bell`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub theta_points: usize,
    pub phi_points: usize,
    pub j_points: usize,
    /// Stop the polytope refinement once the spread of `B` over its
    /// vertices falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            theta_points: 64,
            phi_points: 64,
            j_points: 200,
            tolerance: 1e-10,
            max_iterations: 5000,
        }
    }
}

/// Best setting found on the default grid, refined locally.
pub fn maximize_bell(params: &OtcssParams, j: Option<f64>) -> Result<(BellSetting, BellValue)> {
    maximize_bell_with(params, j, &SearchConfig::default())
}

/// Grid search over `(θ, φ)` (and `J ∈ (0, 2]` when `j` is `None`),
/// followed by Nelder–Mead refinement from the best grid cell. The grid
/// maximum is kept if refinement does not improve on it, so the result is
/// never below the coarse maximum. Ties go to the first cell in grid order.
pub fn maximize_bell_with(
    params: &OtcssParams,
    j: Option<f64>,
    cfg: &SearchConfig,
) -> Result<(BellSetting, BellValue)> {
    if let Some(j) = j {
        if !(j.is_finite() && j >= 0.0) {
            return Err(Error::InvalidSetting(format!("J = {j} must be nonnegative")));
        }
    }
    if cfg.theta_points == 0 || cfg.phi_points == 0 || (j.is_none() && cfg.j_points == 0) {
        return Err(Error::InvalidSetting("empty search grid".into()));
    }

    let eval = |jj: f64, th: f64, ph: f64| -> f64 {
        let s = BellSetting::new(jj.clamp(0.0, MAX_SEARCH_J.max(j.unwrap_or(0.0))), th, ph)
            .expect("search stays in the valid domain");
        bell_function(params, &s).value
    };

    let j_grid: Vec<f64> = match j {
        Some(j) => vec![j],
        None => (1..=cfg.j_points)
            .map(|k| MAX_SEARCH_J * k as f64 / cfg.j_points as f64)
            .collect(),
    };
    let cells: Vec<(f64, f64, f64)> = j_grid
        .iter()
        .flat_map(|&jj| {
            (0..cfg.theta_points).flat_map(move |a| {
                (0..cfg.phi_points).map(move |b| {
                    (
                        jj,
                        TAU * a as f64 / cfg.theta_points as f64,
                        TAU * b as f64 / cfg.phi_points as f64,
                    )
                })
            })
        })
        .collect();
    let values: Vec<f64> = cells.par_iter().map(|&(jj, th, ph)| eval(jj, th, ph)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let (bj, bth, bph) = cells[best];
    let grid_value = values[best];

    let step_angle = TAU / cfg.theta_points.max(cfg.phi_points) as f64;
    let (point, refined) = match j {
        Some(jj) => {
            let (x, v) = nelder_mead(
                |p| eval(jj, p[0], p[1]),
                &[bth, bph],
                &[step_angle, step_angle],
                cfg,
            );
            ((jj, x[0], x[1]), v)
        }
        None => {
            let step_j = MAX_SEARCH_J / cfg.j_points as f64;
            let (x, v) = nelder_mead(
                |p| eval(p[0], p[1], p[2]),
                &[bj, bth, bph],
                &[step_j, step_angle, step_angle],
                cfg,
            );
            ((x[0].clamp(0.0, MAX_SEARCH_J), x[1], x[2]), v)
        }
    };

    let setting = if refined > grid_value {
        BellSetting::new(point.0, point.1, point.2)?
    } else {
        BellSetting::new(bj, bth, bph)?
    };
    Ok((setting, bell_function(params, &setting)))
}

/// Maximizes `f` with a Nelder–Mead polytope started at `x0` with the
/// given initial edge lengths.
fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], cfg: &SearchConfig) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    // work with -f so the textbook minimization steps apply unchanged
    let g = |x: &[f64]| -f(x);
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = (0..=n)
        .map(|i| {
            let mut x = x0.to_vec();
            if i > 0 {
                x[i - 1] += steps[i - 1];
            }
            let v = g(&x);
            (x, v)
        })
        .collect();

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };

    for _ in 0..cfg.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[n].1 - simplex[0].1 <= cfg.tolerance {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].0.clone();

        let reflected = combine(&centroid, &worst, -1.0);
        let fr = g(&reflected);
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &worst, -2.0);
            let fe = g(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < simplex[n].1 {
                combine(&centroid, &reflected, 0.5)
            } else {
                combine(&centroid, &worst, 0.5)
            };
            let fc = g(&contracted);
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = combine(&best, &vertex.0, 0.5);
                    let v = g(&x);
                    *vertex = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, -v)
}
