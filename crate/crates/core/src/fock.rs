//! Brute-force oracle in a truncated two-mode Fock space.
//!
//! States are stored as amplitude tensors `c[m, n]` (mode 1 photon number
//! `m`, mode 2 photon number `n`). Operators are sums of Kronecker
//! products `A ⊗ B`, which act on the tensor as `A c Bᵀ`; the dense
//! `(N+1)² × (N+1)²` matrix is only materialized on request.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::gaussian::{CovMatrix4, PhasePoint4};
use crate::linalg::{expm, expm_action, expm_hermitian, kron};
use crate::otcss::OtcssParams;
use crate::{Error, Result};

/// Smallest cutoff accepted by the exponential construction.
pub const MIN_EXPONENTIAL_CUTOFF: usize = 10;
/// Truncation loss above which a construction is rejected.
pub const MAX_TRUNCATION_LOSS: f64 = 1e-6;
/// Norm deficit above which moments are not computed.
pub const MAX_MOMENT_DEFICIT: f64 = 1e-8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Truncated two-mode state `Σ c_mn |m⟩|n⟩`, `0 ≤ m, n ≤ cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState2 {
    cutoff: usize,
    amplitudes: DMatrix<Complex64>,
    norm_deficit: f64,
}

impl FockState2 {
    /// Wraps a square amplitude tensor; the norm deficit is `1 - Σ|c|²`,
    /// floored at zero.
    pub fn from_amplitudes(amplitudes: DMatrix<Complex64>) -> Self {
        assert!(amplitudes.is_square(), "amplitude tensor must be square");
        let cutoff = amplitudes.nrows() - 1;
        let norm_deficit = (1.0 - amplitudes.norm_squared()).max(0.0);
        FockState2 {
            cutoff,
            amplitudes,
            norm_deficit,
        }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut amps = DMatrix::zeros(cutoff + 1, cutoff + 1);
        amps[(0, 0)] = ONE;
        Self::from_amplitudes(amps)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: usize, n: usize) -> Complex64 {
        self.amplitudes[(m, n)]
    }

    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    /// `|⟨self|other⟩|²`; both states must share a cutoff.
    pub fn overlap(&self, other: &FockState2) -> f64 {
        assert_eq!(self.cutoff, other.cutoff, "cutoff mismatch");
        inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }

    /// Population on the outermost shell (`m = N` or `n = N`), a proxy for
    /// how much of the state the truncation has reflected or lost.
    pub fn edge_population(&self) -> f64 {
        let n = self.cutoff;
        let row: f64 = self.amplitudes.row(n).iter().map(|z| z.norm_sqr()).sum();
        let col: f64 = self.amplitudes.column(n).iter().map(|z| z.norm_sqr()).sum();
        row + col - self.amplitudes[(n, n)].norm_sqr()
    }

    fn require_moment_accuracy(&self) -> Result<()> {
        if self.norm_deficit >= MAX_MOMENT_DEFICIT {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                deficit: self.norm_deficit,
            });
        }
        Ok(())
    }
}

/// `⟨a|b⟩` for amplitude tensors.
fn inner(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Single-mode annihilation operator on `{|0⟩, …, |N⟩}`.
pub fn annihilation(cutoff: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(cutoff + 1, cutoff + 1);
    for n in 1..=cutoff {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn position(cutoff: usize) -> DMatrix<Complex64> {
    let a = annihilation(cutoff);
    (&a + a.adjoint()) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

fn momentum(cutoff: usize) -> DMatrix<Complex64> {
    let a = annihilation(cutoff);
    (&a - a.adjoint()) * Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)
}

/// Truncated `D(α) = exp(α a† - α* a)`: the exponential of the truncated
/// anti-Hermitian generator, hence exactly unitary on the retained space.
pub fn single_mode_displacement(alpha: Complex64, cutoff: usize) -> DMatrix<Complex64> {
    let a = annihilation(cutoff);
    expm(&(a.adjoint() * alpha - &a * alpha.conj()))
}

fn parity_diagonal(cutoff: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(cutoff + 1, cutoff + 1, |i, j| match (i == j, i % 2) {
        (true, 0) => ONE,
        (true, _) => -ONE,
        _ => ZERO,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    Q1,
    P1,
    Q2,
    P2,
    Generator,
    Displacement,
    Parity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KronTerm {
    pub coeff: Complex64,
    pub mode_a: DMatrix<Complex64>,
    pub mode_b: DMatrix<Complex64>,
}

/// Two-mode operator `Σ_k coeff_k (A_k ⊗ B_k)` on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub label: OperatorLabel,
    cutoff: usize,
    terms: Vec<KronTerm>,
}

impl TruncatedOperator {
    fn single(label: OperatorLabel, cutoff: usize, a: DMatrix<Complex64>, b: DMatrix<Complex64>) -> Self {
        TruncatedOperator {
            label,
            cutoff,
            terms: vec![KronTerm {
                coeff: ONE,
                mode_a: a,
                mode_b: b,
            }],
        }
    }

    pub fn quadrature(label: OperatorLabel, cutoff: usize) -> Self {
        let id = DMatrix::identity(cutoff + 1, cutoff + 1);
        match label {
            OperatorLabel::Q1 => Self::single(label, cutoff, position(cutoff), id),
            OperatorLabel::P1 => Self::single(label, cutoff, momentum(cutoff), id),
            OperatorLabel::Q2 => Self::single(label, cutoff, id, position(cutoff)),
            OperatorLabel::P2 => Self::single(label, cutoff, id, momentum(cutoff)),
            other => panic!("{other:?} is not a quadrature"),
        }
    }

    /// `G = λ1 Q1P2 + λ2 Q2P1`, so that `V = exp(-iG)`.
    pub fn generator(params: &OtcssParams, cutoff: usize) -> Self {
        let (q, p) = (position(cutoff), momentum(cutoff));
        TruncatedOperator {
            label: OperatorLabel::Generator,
            cutoff,
            terms: vec![
                KronTerm {
                    coeff: Complex64::new(params.lambda1(), 0.0),
                    mode_a: q.clone(),
                    mode_b: p.clone(),
                },
                KronTerm {
                    coeff: Complex64::new(params.lambda2(), 0.0),
                    mode_a: p,
                    mode_b: q,
                },
            ],
        }
    }

    /// `D1(α) D2(β)`.
    pub fn displacement(alpha: Complex64, beta: Complex64, cutoff: usize) -> Self {
        Self::single(
            OperatorLabel::Displacement,
            cutoff,
            single_mode_displacement(alpha, cutoff),
            single_mode_displacement(beta, cutoff),
        )
    }

    /// `(-1)^{a†a + b†b}`.
    pub fn parity(cutoff: usize) -> Self {
        Self::single(
            OperatorLabel::Parity,
            cutoff,
            parity_diagonal(cutoff),
            parity_diagonal(cutoff),
        )
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    pub fn apply(&self, amps: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = self.cutoff + 1;
        let mut out = DMatrix::zeros(dim, dim);
        for t in &self.terms {
            out += (&t.mode_a * amps * t.mode_b.transpose()) * t.coeff;
        }
        out
    }

    pub fn expectation(&self, state: &FockState2) -> Complex64 {
        inner(state.amplitudes(), &self.apply(state.amplitudes()))
    }

    /// Dense matrix in the basis `|m, n⟩ ↦ m(N+1) + n`.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = (self.cutoff + 1).pow(2);
        let mut out = DMatrix::zeros(dim, dim);
        for t in &self.terms {
            out += kron(&t.mode_a, &t.mode_b) * t.coeff;
        }
        out
    }

    /// Column-sum bound on the induced 1-norm.
    fn norm_bound(&self) -> f64 {
        let one_norm = |m: &DMatrix<Complex64>| {
            m.column_iter()
                .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * one_norm(&t.mode_a) * one_norm(&t.mode_b))
            .sum()
    }
}

fn check_exponential_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < MIN_EXPONENTIAL_CUTOFF {
        return Err(Error::InvalidCutoff {
            cutoff,
            min: MIN_EXPONENTIAL_CUTOFF,
        });
    }
    Ok(())
}

fn check_truncation(state: FockState2) -> Result<FockState2> {
    let loss = state.norm_deficit().max(state.edge_population());
    if loss > MAX_TRUNCATION_LOSS {
        return Err(Error::CutoffTooSmall {
            cutoff: state.cutoff(),
            deficit: loss,
        });
    }
    Ok(state)
}

/// `exp(-iG)|00⟩` with the truncated generator.
///
/// The exponential is applied to the vacuum through its action (unit-norm
/// Taylor steps), which costs `O(N³)` per step instead of diagonalizing the
/// `(N+1)²`-dimensional generator. The evolution is unitary on the retained
/// space, so truncation shows up as population on the outer shell rather
/// than as lost norm; the build fails when that population exceeds
/// [`MAX_TRUNCATION_LOSS`].
pub fn build_state_exponential(params: &OtcssParams, cutoff: usize) -> Result<FockState2> {
    check_exponential_cutoff(cutoff)?;
    let g = TruncatedOperator::generator(params, cutoff);
    let minus_i = Complex64::new(0.0, -1.0);
    let vacuum = FockState2::vacuum(cutoff);
    let amps = expm_action(|x| g.apply(x) * minus_i, g.norm_bound(), vacuum.amplitudes());
    check_truncation(FockState2::from_amplitudes(amps))
}

/// Same state as [`build_state_exponential`], through a dense
/// eigen-decomposition of the Hermitian generator. Cubic in `(N+1)²`, so
/// only practical for small cutoffs; kept as a cross-check of the
/// action-based route.
pub fn build_state_exponential_dense(params: &OtcssParams, cutoff: usize) -> Result<FockState2> {
    check_exponential_cutoff(cutoff)?;
    let g = TruncatedOperator::generator(params, cutoff).to_dense();
    let u = expm_hermitian(&g, 1.0);
    let dim = cutoff + 1;
    let amps = DMatrix::from_fn(dim, dim, |m, n| u[(m * dim + n, 0)]);
    check_truncation(FockState2::from_amplitudes(amps))
}

/// Symmetrized covariance `⟨X_i X_j + X_j X_i⟩/2 - ⟨X_i⟩⟨X_j⟩` of the
/// truncated quadratures, ordered `(q1, p1, q2, p2)`.
pub fn covariance_numeric(state: &FockState2) -> Result<CovMatrix4> {
    state.require_moment_accuracy()?;
    let labels = [
        OperatorLabel::Q1,
        OperatorLabel::P1,
        OperatorLabel::Q2,
        OperatorLabel::P2,
    ];
    let images: Vec<DMatrix<Complex64>> = labels
        .iter()
        .map(|&l| TruncatedOperator::quadrature(l, state.cutoff()).apply(state.amplitudes()))
        .collect();
    let means: Vec<f64> = images
        .iter()
        .map(|img| inner(state.amplitudes(), img).re)
        .collect();
    let mut m = nalgebra::Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = inner(&images[i], &images[j]).re - means[i] * means[j];
        }
    }
    CovMatrix4::new(m)
}

fn check_displacement(state: &FockState2, x: &PhasePoint4) -> Result<()> {
    let limit = state.cutoff() as f64 / 4.0;
    let magnitude = x.alpha().norm_sqr().max(x.beta().norm_sqr());
    if magnitude > limit {
        return Err(Error::DisplacementTooLarge { magnitude, limit });
    }
    Ok(())
}

/// `(1/π²) ⟨ψ| D1(α)D2(β) (-1)^{n_a+n_b} D2†(β)D1†(α) |ψ⟩`.
pub fn wigner_numeric(state: &FockState2, x: &PhasePoint4) -> Result<f64> {
    check_displacement(state, x)?;
    let shifted = TruncatedOperator::displacement(-x.alpha(), -x.beta(), state.cutoff())
        .apply(state.amplitudes());
    let parity: f64 = shifted
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            // column-major storage: idx = n (N+1) + m
            let (m, n) = (idx % shifted.nrows(), idx / shifted.nrows());
            let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
            sign * z.norm_sqr()
        })
        .sum();
    Ok(parity / (PI * PI))
}

/// `⟨ψ| D1(α) D2(β) |ψ⟩`.
pub fn cf_numeric(state: &FockState2, x: &PhasePoint4) -> Result<Complex64> {
    check_displacement(state, x)?;
    Ok(TruncatedOperator::displacement(x.alpha(), x.beta(), state.cutoff()).expectation(state))
}

/// Dense partial transpose over mode 2 of `|ψ⟩⟨ψ|`:
/// `ρ^{T_B}[(m,n),(m',n')] = c[m,n'] c*[m',n]`.
pub fn partial_transpose(state: &FockState2) -> DMatrix<Complex64> {
    let dim = state.cutoff() + 1;
    let c = state.amplitudes();
    DMatrix::from_fn(dim * dim, dim * dim, |row, col| {
        let (m, n) = (row / dim, row % dim);
        let (mp, np) = (col / dim, col % dim);
        c[(m, np)] * c[(mp, n)].conj()
    })
}

/// Index sets of the connected components of a Hermitian matrix's
/// nonzero pattern; the matrix is block diagonal over them.
fn diagonal_blocks(m: &DMatrix<Complex64>) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for col in 0..n {
        for row in 0..col {
            if m[(row, col)] != ZERO {
                let (a, b) = (find(&mut parent, row), find(&mut parent, col));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// `ln ‖ρ^{T_B}‖₁` from the full spectrum of the partial transpose.
///
/// The spectrum is computed block by block over the exact zero pattern.
/// For the states built here, photon-number parity splits the matrix into
/// three blocks, which cuts the dense eigensolve cost about sixfold.
pub fn log_negativity_numeric(state: &FockState2) -> Result<f64> {
    state.require_moment_accuracy()?;
    let pt = partial_transpose(state);
    let real = pt.iter().all(|z| z.im == 0.0);
    let mut trace_norm = 0.0;
    for idx in diagonal_blocks(&pt) {
        let block = DMatrix::from_fn(idx.len(), idx.len(), |i, j| pt[(idx[i], idx[j])]);
        trace_norm += if real {
            SymmetricEigen::new(block.map(|z| z.re))
                .eigenvalues
                .iter()
                .map(|e| e.abs())
                .sum::<f64>()
        } else {
            SymmetricEigen::new(block).eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
        };
    }
    Ok(trace_norm.ln())
}
