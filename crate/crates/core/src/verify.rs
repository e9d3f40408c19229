//! Closed form versus Fock-space oracle, over a grid of parameters.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::bell::{bell_from_parity, bell_function, BellSetting};
use crate::fock::{
    build_state_exponential, cf_numeric, covariance_numeric, log_negativity_numeric,
    wigner_numeric,
};
use crate::gaussian::{log_negativity, PhasePoint4};
use crate::otcss::{cf_closed, covariance, fock_amplitudes, variances, wigner_closed, OtcssParams};
use crate::{Error, Result};

/// At 40 the (λ, γ) = (0.6, ±1) corner misses the 1e-8 covariance target by
/// truncation alone (7e-8); 50 brings it to 7e-10.
pub const DEFAULT_CUTOFF: usize = 50;
/// Phase-space samples per parameter point.
pub const SAMPLE_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// λ ∈ {0.1, 0.35, 0.6} × γ ∈ {-1, 0, 1}.
    Coarse,
    /// λ ∈ {0.1, …, 0.6} × γ ∈ {-1, -0.5, …, 1}.
    Fine,
}

impl Grid {
    pub fn points(self) -> Vec<OtcssParams> {
        let (lambdas, gammas): (Vec<f64>, Vec<f64>) = match self {
            Grid::Coarse => (vec![0.1, 0.35, 0.6], vec![-1.0, 0.0, 1.0]),
            Grid::Fine => (
                (1..=6).map(|k| 0.1 * k as f64).collect(),
                (-2..=2).map(|k| 0.5 * k as f64).collect(),
            ),
        };
        lambdas
            .iter()
            .flat_map(|&l| gammas.iter().map(move |&g| OtcssParams::new(l, g).unwrap()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Overlap,
    Covariance,
    Variances,
    Wigner,
    Cf,
    LogNegativity,
    Bell,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Overlap,
        CheckKind::Covariance,
        CheckKind::Variances,
        CheckKind::Wigner,
        CheckKind::Cf,
        CheckKind::LogNegativity,
        CheckKind::Bell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Overlap => "state-overlap",
            CheckKind::Covariance => "covariance",
            CheckKind::Variances => "variances",
            CheckKind::Wigner => "wigner",
            CheckKind::Cf => "characteristic-function",
            CheckKind::LogNegativity => "log-negativity",
            CheckKind::Bell => "bell",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            CheckKind::Overlap | CheckKind::Covariance | CheckKind::Variances => 1e-8,
            CheckKind::Wigner | CheckKind::Cf | CheckKind::Bell => 1e-6,
            CheckKind::LogNegativity => 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_deviation: f64,
    /// `(λ, γ)` where the largest deviation occurred.
    pub worst: Option<(f64, f64)>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub cutoff: usize,
    pub points: usize,
    pub checks: Vec<CheckResult>,
    /// Parameter points whose oracle state could not be built.
    pub failures: Vec<((f64, f64), Error)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(CheckResult::passed)
    }
}

/// Phase-space samples with `|α|, |β| ≤ 1/2`, from an additive
/// recurrence so the set is fixed and well spread.
pub fn sample_points(n: usize) -> Vec<PhasePoint4> {
    // fractional parts of k·(√2, √3, √5, √7)
    let gens = [2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt()];
    (1..=n)
        .map(|k| {
            let c: Vec<f64> = gens.iter().map(|g| (k as f64 * g).fract() - 0.5).collect();
            PhasePoint4::new(c[0], c[1], c[2], c[3])
        })
        .collect()
}

fn bell_settings() -> Vec<BellSetting> {
    [(0.05, PI, 0.0), (0.05, 0.7, 2.3), (0.02, 4.0, 1.1)]
        .iter()
        .map(|&(j, t, p)| BellSetting::new(j, t, p).unwrap())
        .collect()
}

/// Deviations of one parameter point, in [`CheckKind::ALL`] order.
pub fn point_deviations(params: &OtcssParams, cutoff: usize) -> Result<[f64; 7]> {
    let state = build_state_exponential(params, cutoff)?;
    let series = fock_amplitudes(params, cutoff)?;
    let overlap = 1.0 - state.overlap(&series);

    let cov = covariance_numeric(&state)?;
    let cov_dev = (cov.entries() - covariance(params).entries()).amax();

    let e = cov.entries();
    let var1 = (e[(0, 0)] + e[(2, 2)] + 2.0 * e[(0, 2)]) / 4.0;
    let var2 = (e[(1, 1)] + e[(3, 3)] + 2.0 * e[(1, 3)]) / 4.0;
    let (v1, v2) = variances(params);
    let var_dev = (var1 - v1).abs().max((var2 - v2).abs());

    let mut w_dev: f64 = 0.0;
    let mut cf_dev: f64 = 0.0;
    for x in sample_points(SAMPLE_POINTS) {
        w_dev = w_dev.max((wigner_numeric(&state, &x)? - wigner_closed(params, &x)).abs());
        cf_dev = cf_dev.max((cf_numeric(&state, &x)? - cf_closed(params, &x)).norm());
    }

    let en_closed = log_negativity(&covariance(params))?;
    let en_dev = (log_negativity_numeric(&state)? - en_closed).abs();

    let mut bell_dev: f64 = 0.0;
    for s in bell_settings() {
        let mut err = None;
        let oracle = bell_from_parity(&s, |x| match wigner_numeric(&state, x) {
            Ok(w) => PI * PI * w,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        bell_dev = bell_dev.max((oracle.value - bell_function(params, &s).value).abs());
    }

    Ok([overlap, cov_dev, var_dev, w_dev, cf_dev, en_dev, bell_dev])
}

/// Runs every comparison at every point, in parallel across points.
pub fn run(points: &[OtcssParams], cutoff: usize) -> VerifyReport {
    let results: Vec<Result<[f64; 7]>> = points
        .par_iter()
        .map(|p| point_deviations(p, cutoff))
        .collect();

    let mut checks: Vec<CheckResult> = CheckKind::ALL
        .iter()
        .map(|k| CheckResult {
            name: k.name(),
            tolerance: k.tolerance(),
            max_deviation: 0.0,
            worst: None,
        })
        .collect();
    let mut failures = Vec::new();
    for (p, r) in points.iter().zip(results) {
        let key = (p.lambda(), p.gamma());
        match r {
            Ok(devs) => {
                for (c, d) in checks.iter_mut().zip(devs) {
                    // a NaN deviation sticks, so it can never pass
                    if c.worst.is_none() || d.is_nan() || d > c.max_deviation {
                        c.max_deviation = d;
                        c.worst = Some(key);
                    }
                }
            }
            Err(e) => failures.push((key, e)),
        }
    }
    VerifyReport {
        cutoff,
        points: points.len(),
        checks,
        failures,
    }
}
