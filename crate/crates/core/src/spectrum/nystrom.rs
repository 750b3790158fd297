//! Nyström discretization of the integral operator, used as an independent
//! check on the Gram-matrix route.

use log::debug;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{clamp_nonnegative, sort_descending};
use crate::aperture::{build_quadrature_with_angular, Aperture};
use crate::error::{Error, Result};
use crate::operator::{rho_n_unchecked, CMatrix};
use crate::pas::PasModel;
use crate::specfun::truncation_order;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NystromOptions {
    /// Initial nodes per dimension; defaults to 64 for curves and 16 for regions.
    pub start: Option<usize>,
    /// Largest nodes per dimension tried; defaults to 1024 for curves and 64 for regions.
    pub cap: Option<usize>,
    /// Accepted change of the leading eigenvalues between doublings.
    pub tol: f64,
    /// Number of leading eigenvalues watched for convergence.
    pub top: usize,
    /// Kernel truncation order; defaults to `N_D(2 r1) + 10`.
    pub n_kernel: Option<usize>,
}

impl Default for NystromOptions {
    fn default() -> Self {
        NystromOptions { start: None, cap: None, tol: 1e-7, top: 10, n_kernel: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NystromResult {
    /// Descending eigenvalues at the finest resolution.
    pub eigenvalues: Vec<f64>,
    /// Nodes per dimension at the finest resolution.
    pub points: usize,
    /// Largest change of the watched eigenvalues in the last doubling.
    pub change: f64,
}

fn is_region(a: &Aperture) -> bool {
    matches!(a, Aperture::Disk { .. } | Aperture::Rectangle { .. })
}

/// Descending eigenvalues of `W^{1/2} K W^{1/2}` with `K_ab = ρ_N(x_a − x_b)`
/// on an `points`-per-dimension quadrature grid.
pub fn nystrom_eigenvalues(aperture: &Aperture, model: &PasModel, points: usize, n_kernel: usize) -> Result<Vec<f64>> {
    let (centered, _) = aperture.centering_transform();
    let diameter = 2.0 * centered.enclosing_radius();
    let nd = truncation_order(diameter);
    if n_kernel < nd {
        return Err(Error::Precondition(format!(
            "kernel truncation N = {n_kernel} is below N_D = {nd} for node spacings up to {diameter}"
        )));
    }
    let quad = build_quadrature_with_angular(&centered, points, points)?;
    let coeffs = model.fourier_block(n_kernel);
    let roots: Vec<f64> = quad.weights.iter().map(|w| w.sqrt()).collect();
    let size = quad.len();
    let upper: Vec<Vec<Complex64>> = (0..size)
        .into_par_iter()
        .map(|a| {
            let xa = quad.nodes[a];
            (a..size)
                .map(|b| {
                    let xb = quad.nodes[b];
                    let k = if a == b {
                        Complex64::new(1.0, 0.0)
                    } else {
                        rho_n_unchecked(&coeffs, [xa[0] - xb[0], xa[1] - xb[1]], n_kernel)
                    };
                    k * (roots[a] * roots[b])
                })
                .collect()
        })
        .collect();
    let mut m = CMatrix::zeros(size, size);
    for (a, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let b = a + off;
            m[(a, b)] = v;
            m[(b, a)] = v.conj();
        }
    }
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().cloned().collect();
    clamp_nonnegative(&mut vals, "Nystrom")?;
    sort_descending(&mut vals);
    Ok(vals)
}

fn top_change(a: &[f64], b: &[f64], top: usize) -> f64 {
    a.iter().zip(b).take(top).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Nyström eigenvalues, doubling the grid until the leading `top`
/// eigenvalues move by less than `tol`.
pub fn nystrom_oracle(aperture: &Aperture, model: &PasModel, opts: NystromOptions) -> Result<NystromResult> {
    if aperture.is_discrete() {
        return Err(Error::Unsupported("the Nystrom oracle needs a continuous aperture".into()));
    }
    let region = is_region(aperture);
    let mut points = opts.start.unwrap_or(if region { 16 } else { 64 });
    let cap = opts.cap.unwrap_or(if region { 64 } else { 1024 });
    let n_kernel = match opts.n_kernel {
        Some(n) => n,
        None => truncation_order(2.0 * aperture.centering_transform().0.enclosing_radius()) + 10,
    };
    let mut prev = nystrom_eigenvalues(aperture, model, points, n_kernel)?;
    let mut change = f64::INFINITY;
    while 2 * points <= cap {
        points *= 2;
        let cur = nystrom_eigenvalues(aperture, model, points, n_kernel)?;
        change = top_change(&prev, &cur, opts.top);
        debug!("Nystrom {points} points per dimension: top-{} change {change:.3e}", opts.top);
        prev = cur;
        if change < opts.tol {
            return Ok(NystromResult { eigenvalues: prev, points, change });
        }
    }
    Err(Error::ConvergenceNotReached { points, change })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j;
    use std::f64::consts::TAU;

    #[test]
    fn point_aperture() {
        let r = nystrom_oracle(&Aperture::point(), &PasModel::isotropic(), NystromOptions::default()).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!(r.eigenvalues[1..].iter().all(|&l| l == 0.0));
    }

    #[test]
    fn circle_matches_bessel_squares() {
        let vals = nystrom_eigenvalues(&Aperture::circle(1.0).unwrap(), &PasModel::isotropic(), 512, 28).unwrap();
        let mut want: Vec<f64> = (-30..=30).map(|n| bessel_j(n, TAU).powi(2)).collect();
        sort_descending(&mut want);
        for i in 0..20 {
            assert!((vals[i] - want[i]).abs() < 1e-6, "{i}: {} vs {}", vals[i], want[i]);
        }
    }

    #[test]
    fn rejects_low_kernel_order() {
        let r = nystrom_eigenvalues(&Aperture::circle(1.0).unwrap(), &PasModel::isotropic(), 16, 5);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn cap_reached_is_an_error() {
        let opts = NystromOptions { start: Some(4), cap: Some(8), ..Default::default() };
        let r = nystrom_oracle(&Aperture::segment(3.0, 0.0, [0.0, 0.0]).unwrap(), &PasModel::isotropic(), opts);
        assert!(matches!(r, Err(Error::ConvergenceNotReached { points: 8, .. })));
    }
}
