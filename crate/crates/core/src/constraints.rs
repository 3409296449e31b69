//! Physical validity of a two-qubit state and its residuals against the
//! classical symmetries: unpolarized reduced states, relabelling of parties
//! and axes, rotation and twist invariance.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::derivation::{atomic_residual, AtomicMode};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, re, ComplexMatrix2, ComplexMatrix4, HERMITIAN_TOL, PSD_TOL,
};
use crate::operators::{rotation_both, swap_axes, swap_parties, twist, Angle};

/// Allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Default number of angles sampled on `[0, π)` for invariance residuals.
pub const DEFAULT_GRID: usize = 32;

/// A validated density matrix: Hermitian, unit trace and positive
/// semidefinite, all within round-off tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix4,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix4) -> Result<Self> {
        validate_density(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix4 {
        self.m
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: ComplexMatrix4::identity().scale_real(0.25),
        }
    }
}

impl AsRef<ComplexMatrix4> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix4 {
        &self.m
    }
}

/// Checks self-adjointness, unit trace and positivity, in that order.
pub fn validate_density(m: ComplexMatrix4) -> Result<DensityMatrix> {
    m.check_finite()?;
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            residual,
            tolerance: HERMITIAN_TOL,
        });
    }
    let tr = m.trace();
    let trace_residual = (tr - re(1.0)).norm();
    if trace_residual > TRACE_TOL {
        return Err(Error::TraceNotOne {
            trace: tr.re,
            residual: trace_residual,
        });
    }
    let min_eigenvalue = hermitian_eigenvalues(&m)?[3];
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix { m })
}

/// Reduced state of party A (party B traced out).
pub fn partial_trace_a(rho: &DensityMatrix) -> ComplexMatrix2 {
    let m = rho.matrix();
    ComplexMatrix2::from_fn(|a, a2| (0..2).map(|b| m[(2 * a + b, 2 * a2 + b)]).sum())
}

/// Reduced state of party B (party A traced out).
pub fn partial_trace_b(rho: &DensityMatrix) -> ComplexMatrix2 {
    let m = rho.matrix();
    ComplexMatrix2::from_fn(|b, b2| (0..2).map(|a| m[(2 * a + b, 2 * a + b2)]).sum())
}

/// Distances of the A and B reduced states from the unpolarized state `I/2`.
pub fn reduced_residuals(rho: &DensityMatrix) -> (f64, f64) {
    let half = ComplexMatrix2::identity().scale_real(0.5);
    (
        partial_trace_a(rho).distance(&half),
        partial_trace_b(rho).distance(&half),
    )
}

/// Relabelling transforms a state should be indifferent to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relabel {
    SwapParties,
    SwapAxes,
}

impl Relabel {
    pub fn apply(self, m: &ComplexMatrix4) -> ComplexMatrix4 {
        match self {
            Relabel::SwapParties => swap_parties(m),
            Relabel::SwapAxes => swap_axes(m),
        }
    }
}

pub fn invariance_residual(rho: &DensityMatrix, transform: Relabel) -> f64 {
    transform.apply(rho.matrix()).distance(rho.matrix())
}

fn check_grid(grid_size: usize, min: usize) -> Result<()> {
    if grid_size < min {
        return Err(Error::InvalidParameter(format!(
            "grid size {grid_size} is below the minimum of {min}"
        )));
    }
    Ok(())
}

/// Angles `kπ/n` for `k = 0..n`.
pub(crate) fn angle_grid(n: usize) -> impl Iterator<Item = Angle> + Clone {
    (0..n).map(move |k| Angle(PI * k as f64 / n as f64))
}

fn max_conjugation_residual(
    rho: &DensityMatrix,
    grid_size: usize,
    op: fn(Angle) -> ComplexMatrix4,
) -> Result<f64> {
    check_grid(grid_size, 4)?;
    let m = rho.matrix();
    Ok(angle_grid(grid_size)
        .map(|theta| m.conjugate_by(&op(theta)).distance(m))
        .fold(0.0, f64::max))
}

/// Largest deviation from invariance under equal rotations of both parties,
/// sampled on a uniform grid of `grid_size` angles in `[0, π)`.
pub fn rotational_residual(rho: &DensityMatrix, grid_size: usize) -> Result<f64> {
    max_conjugation_residual(rho, grid_size, rotation_both)
}

/// As [`rotational_residual`] but for opposite rotations (twist).
pub fn twist_residual(rho: &DensityMatrix, grid_size: usize) -> Result<f64> {
    max_conjugation_residual(rho, grid_size, twist)
}

/// Grid sizes used to build a [`SymmetryReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub rotation_grid: usize,
    pub atomic_grid: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            rotation_grid: DEFAULT_GRID,
            atomic_grid: DEFAULT_GRID,
        }
    }
}

/// Every constraint and symmetry residual of one state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub hermiticity_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    pub reduced_a_residual: f64,
    pub reduced_b_residual: f64,
    pub swap_parties_residual: f64,
    pub swap_axes_residual: f64,
    pub rotational_residual: f64,
    pub twist_residual: f64,
    pub atomic_residuals: BTreeMap<AtomicMode, f64>,
    pub concurrence: f64,
}

impl SymmetryReport {
    /// Largest of the classical-symmetry residuals (reduced states, swaps and
    /// rotation invariance).
    pub fn max_classical_residual(&self) -> f64 {
        [
            self.reduced_a_residual,
            self.reduced_b_residual,
            self.swap_parties_residual,
            self.swap_axes_residual,
            self.rotational_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn full_report(rho: &DensityMatrix, config: &ReportConfig) -> Result<SymmetryReport> {
    let m = rho.matrix();
    let (reduced_a, reduced_b) = reduced_residuals(rho);
    let atomic_residuals = AtomicMode::ALL
        .iter()
        .map(|&mode| Ok((mode, atomic_residual(rho, mode, config.atomic_grid)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(SymmetryReport {
        hermiticity_residual: m.hermiticity_residual(),
        trace_residual: (m.trace() - re(1.0)).norm(),
        min_eigenvalue: hermitian_eigenvalues(m)?[3],
        reduced_a_residual: reduced_a,
        reduced_b_residual: reduced_b,
        swap_parties_residual: invariance_residual(rho, Relabel::SwapParties),
        swap_axes_residual: invariance_residual(rho, Relabel::SwapAxes),
        rotational_residual: rotational_residual(rho, config.rotation_grid)?,
        twist_residual: twist_residual(rho, config.rotation_grid)?,
        atomic_residuals,
        concurrence: concurrence(rho)?,
    })
}
