//! Diversity spectra of truncated operators and of discrete arrays.

mod nystrom;

use log::{debug, warn};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::aperture::Point;
use crate::error::{Error, Result};
use crate::operator::{rho_n_unchecked, CMatrix, TruncatedOperator};
use crate::pas::PasModel;
use crate::specfun::truncation_order;

pub use nystrom::{nystrom_eigenvalues, nystrom_oracle, NystromOptions, NystromResult};

/// Negative eigenvalues above this are roundoff and clamped to zero.
pub const CLAMP_THRESHOLD: f64 = 1e-8;
/// Allowed `|A − A^H|` relative to `max |A_ij|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DiversitySpectrum {
    /// Descending, nonnegative.
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub omega: f64,
    /// `Σλ² / (Σλ)²`, so that `omega · inv_omega = 1`.
    pub inv_omega: f64,
    /// `‖R_N‖₂² = Σλ²`.
    pub hs_norm_sq: f64,
    pub eig_error_bound: f64,
    pub hs_error_bound: f64,
    pub n: usize,
    pub n_d: usize,
    pub r1: f64,
    pub rho_max: f64,
    /// `trace(G_N)`, the lower end of the admissible trace window.
    pub gram_trace: f64,
}

/// `max_{ij} |A − A^H|_ij`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for k in i..n {
            dev = dev.max((a[(i, k)] - a[(k, i)].conj()).norm());
        }
    }
    dev
}

fn check_hermitian(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Domain(format!("matrix must be square, got {}x{}", a.nrows(), a.ncols())));
    }
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let dev = hermitian_deviation(a);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian { deviation: dev });
    }
    Ok(())
}

/// Eigen-decomposition of the Hermitian part of `a`.
fn hermitian_eigen(a: &CMatrix) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    let dim = a.nrows();
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::SolverNonConvergence { dim })
}

fn clamp_nonnegative(values: &mut [f64], what: &str) -> Result<()> {
    let mut worst: f64 = 0.0;
    for v in values.iter_mut() {
        if *v < 0.0 {
            if *v < -CLAMP_THRESHOLD {
                return Err(Error::ExcessiveClamp { value: *v, threshold: CLAMP_THRESHOLD });
            }
            worst = worst.min(*v);
            *v = 0.0;
        }
    }
    if worst < 0.0 {
        debug!("clamped {what} eigenvalues, most negative {worst:.3e}");
    }
    Ok(())
}

fn sort_descending(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// Descending, clamped eigenvalues of a Hermitian PSD matrix.
pub fn hermitian_psd_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut vals: Vec<f64> = hermitian_eigen(a)?.eigenvalues.iter().cloned().collect();
    clamp_nonnegative(&mut vals, "PSD")?;
    sort_descending(&mut vals);
    Ok(vals)
}

/// `R̃^{1/2}` via eigen-decomposition with clamped eigenvalues.
fn psd_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigen(a)?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    clamp_nonnegative(&mut vals, "R̃")?;
    let mut scaled = eig.eigenvectors.clone();
    for (j, v) in vals.iter().enumerate() {
        let root = v.sqrt();
        for z in scaled.column_mut(j).iter_mut() {
            *z *= root;
        }
    }
    Ok(&scaled * eig.eigenvectors.adjoint())
}

/// `0.2 ρ_max e^{N_D − N}`: bound on `|λ_i(R) − λ_i(R_N)|`.
pub fn eigenvalue_error_bound(rho_max: f64, n_d: usize, n: usize) -> f64 {
    0.2 * rho_max * (n_d as f64 - n as f64).exp()
}

/// `0.4 ρ_max² e^{N_D − N}`: bound on `|‖R‖₂² − ‖R_N‖₂²|`.
pub fn hs_error_bound(rho_max: f64, n_d: usize, n: usize) -> f64 {
    0.4 * rho_max * rho_max * (n_d as f64 - n as f64).exp()
}

/// `(Σλ)² / Σλ²`.
pub fn diversity_measure_of(eigenvalues: &[f64]) -> Result<f64> {
    let s: f64 = eigenvalues.iter().sum();
    let s2: f64 = eigenvalues.iter().map(|l| l * l).sum();
    if s2 == 0.0 {
        return Err(Error::Degenerate("diversity measure of an all-zero spectrum".into()));
    }
    Ok(s * s / s2)
}

/// Spectrum of `R_N` as `eig(R̃^{1/2} G R̃^{1/2})`.
pub fn solve_spectrum(op: &TruncatedOperator) -> Result<DiversitySpectrum> {
    check_hermitian(&op.gram)?;
    check_hermitian(&op.rtilde)?;
    let root = psd_sqrt(&op.rtilde)?;
    let sym = &root * &op.gram * &root;
    let eigenvalues = hermitian_psd_eigenvalues(&sym)?;
    let spec = assemble(eigenvalues, op)?;
    debug!(
        "N = {}, N_D = {}, eigenvalue bound {:.3e}, Hilbert-Schmidt bound {:.3e}",
        spec.n, spec.n_d, spec.eig_error_bound, spec.hs_error_bound
    );
    Ok(spec)
}

fn assemble(eigenvalues: Vec<f64>, op: &TruncatedOperator) -> Result<DiversitySpectrum> {
    let trace: f64 = eigenvalues.iter().sum();
    let hs_norm_sq: f64 = eigenvalues.iter().map(|l| l * l).sum();
    let omega = diversity_measure_of(&eigenvalues)?;
    let inv_omega = hs_norm_sq / (trace * trace);
    let spec = DiversitySpectrum {
        trace,
        omega,
        inv_omega,
        hs_norm_sq,
        eig_error_bound: eigenvalue_error_bound(op.rho_max, op.n_d, op.n),
        hs_error_bound: hs_error_bound(op.rho_max, op.n_d, op.n),
        n: op.n,
        n_d: op.n_d,
        r1: op.r1,
        rho_max: op.rho_max,
        gram_trace: op.gram_trace(),
        eigenvalues,
    };
    check_spectrum(&spec)?;
    Ok(spec)
}

fn check_spectrum(s: &DiversitySpectrum) -> Result<()> {
    let dim = s.eigenvalues.len() as f64;
    if (s.trace - 1.0).abs() > s.eig_error_bound * dim + 1e-10 {
        return Err(Error::Invariant(format!(
            "trace {} differs from 1 by more than (2N+1) times the eigenvalue bound",
            s.trace
        )));
    }
    // The Gram residual 1 - trace(G_N) only bounds |trace - 1| once N is well
    // above N_D; near N_D the R̃ cross terms dominate, so it is not enforced.

    // operator norm ≤ Hilbert-Schmidt norm ≤ trace norm
    let op_norm = s.eigenvalues[0];
    let hs = s.hs_norm_sq.sqrt();
    let slack = 1e-12 * s.trace.max(1e-300);
    if op_norm > hs + slack || hs > s.trace + slack {
        return Err(Error::Invariant(format!("norm hierarchy violated: {op_norm} <= {hs} <= {}", s.trace)));
    }
    if s.omega < 1.0 - 1e-12 {
        return Err(Error::Invariant(format!("omega = {} is below 1", s.omega)));
    }
    if (s.omega * s.inv_omega - 1.0).abs() > 1e-12 {
        return Err(Error::Invariant("omega * inv_omega differs from 1".into()));
    }
    Ok(())
}

/// `ω = (Σλ)² / Σλ²` of a solved spectrum.
pub fn diversity_measure(spectrum: &DiversitySpectrum) -> Result<f64> {
    diversity_measure_of(&spectrum.eigenvalues)
}

/// First-order truncation correction of `ω`: returns `(center, half_width)`
/// with `ε = ω·hs_error_bound`, center `ω/(1−ε)` and half-width `ω ε²/(1−ε)`.
pub fn omega_corrected(spectrum: &DiversitySpectrum) -> Result<(f64, f64)> {
    correct_omega(spectrum.omega, spectrum.hs_error_bound)
}

pub(crate) fn correct_omega(omega: f64, hs_bound: f64) -> Result<(f64, f64)> {
    let eps = omega * hs_bound;
    if !(eps < 0.5) {
        return Err(Error::BoundTooLoose { epsilon: eps });
    }
    Ok((omega / (1.0 - eps), omega * eps * eps / (1.0 - eps)))
}

/// Largest pairwise distance in a point set.
pub fn max_pairwise_distance(positions: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in positions.iter().enumerate() {
        for b in &positions[i + 1..] {
            d = d.max((a[0] - b[0]).hypot(a[1] - b[1]));
        }
    }
    d
}

/// `R_ik = ρ_N(x_i − x_k)`, Hermitian with unit diagonal.
pub fn discrete_correlation(positions: &[Point], model: &PasModel, n_max: usize) -> Result<CMatrix> {
    if positions.is_empty() {
        return Err(Error::Domain("at least one antenna position is required".into()));
    }
    let d = max_pairwise_distance(positions);
    let nd = truncation_order(d);
    if n_max < nd {
        return Err(Error::Precondition(format!(
            "kernel truncation N = {n_max} is below N_D = {nd} for the largest spacing {d}"
        )));
    }
    let coeffs = model.fourier_block(n_max);
    let l = positions.len();
    let upper: Vec<Vec<Complex64>> = (0..l)
        .into_par_iter()
        .map(|i| {
            let xi = positions[i];
            (i + 1..l)
                .map(|k| {
                    let xk = positions[k];
                    rho_n_unchecked(&coeffs, [xi[0] - xk[0], xi[1] - xk[1]], n_max)
                })
                .collect()
        })
        .collect();
    let mut r = CMatrix::identity(l, l);
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let k = i + 1 + off;
            r[(i, k)] = v;
            r[(k, i)] = v.conj();
        }
    }
    Ok(r)
}

/// `ω = trace(R)² / trace(R^H R)`, without any eigen-decomposition.
pub fn discrete_diversity(r: &CMatrix) -> Result<f64> {
    check_hermitian(r)?;
    let tr: f64 = r.diagonal().iter().map(|z| z.re).sum();
    let fro: f64 = r.iter().map(|z| z.norm_sqr()).sum();
    if fro == 0.0 {
        return Err(Error::Degenerate("correlation matrix is zero".into()));
    }
    Ok(tr * tr / fro)
}

/// Descending eigenvalues of `R / L`, which sum to one.
pub fn discrete_spectrum(r: &CMatrix) -> Result<Vec<f64>> {
    let l = r.nrows() as f64;
    let mut vals = hermitian_psd_eigenvalues(r)?;
    for v in &mut vals {
        *v /= l;
    }
    Ok(vals)
}

/// Low-power MIMO slope `2 / (1/ω_tx + 1/ω_rx)`.
pub fn mimo_slope(omega_tx: f64, omega_rx: f64) -> Result<f64> {
    if !(omega_tx >= 1.0) || !(omega_rx >= 1.0) {
        return Err(Error::Domain(format!("diversity measures must be >= 1, got {omega_tx} and {omega_rx}")));
    }
    Ok(2.0 / (1.0 / omega_tx + 1.0 / omega_rx))
}

/// Logs the truncation bounds behind a spectrum.
pub fn log_bounds(label: &str, s: &DiversitySpectrum) {
    log::info!(
        "{label}: N = {}, N_D = {}, r1 = {:.6}, rho_max = {:.6}, eigenvalue bound = {:.3e}, Hilbert-Schmidt bound = {:.3e}",
        s.n,
        s.n_d,
        s.r1,
        s.rho_max,
        s.eig_error_bound,
        s.hs_error_bound
    );
    if s.omega * s.hs_error_bound > 0.1 {
        warn!("{label}: omega correction epsilon = {:.3e}", s.omega * s.hs_error_bound);
    }
}
