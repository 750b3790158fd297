//! Truncated matrix representation `(G_N, R̃_N)` of the spatial
//! autocorrelation operator on an aperture.
//!
//! Orders `n = −N..=N` map to row/column `n + N` everywhere in the crate.

use std::f64::consts::TAU;

use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::aperture::{build_quadrature_with_angular, Aperture, Point, QuadratureRule};
use crate::error::{Error, Result};
use crate::pas::PasModel;
use crate::specfun::{bessel_j_orders, bessel_sq_tail_bound, imag_unit_pow, truncation_order};

pub type CMatrix = DMatrix<Complex64>;

/// Default offset of the truncation order above `N_D`.
pub const DEFAULT_ORDER_OFFSET: usize = 10;
/// Largest entrywise change in `G` accepted when the quadrature order doubles.
pub const GRAM_CONVERGENCE_TOL: f64 = 1e-10;
/// Doublings attempted before giving up on quadrature convergence.
pub const MAX_DOUBLINGS: usize = 3;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `v_n(x)` for `n = −N..=N`, indexed by `n + N`.
pub fn basis_row(n_max: usize, x: Point) -> Vec<Complex64> {
    let r = x[0].hypot(x[1]);
    let beta = if r == 0.0 { 0.0 } else { x[1].atan2(x[0]) };
    let js = bessel_j_orders(n_max, TAU * r);
    let width = 2 * n_max + 1;
    let mut row = vec![ZERO; width];
    row[n_max] = Complex64::new(js[0], 0.0);
    for k in 1..=n_max {
        let ik = k as i64;
        // jⁿ J_n for n = ±k: j^{−k} J_{−k} = j^k J_k
        let radial = imag_unit_pow(ik) * js[k];
        row[n_max + k] = Complex64::from_polar(1.0, beta * k as f64) * radial;
        row[n_max - k] = Complex64::from_polar(1.0, -beta * k as f64) * radial;
    }
    row
}

/// `v_n(x) = e^{jβn} jⁿ J_n(2π|x|)`, with `β = 0` at the origin.
pub fn basis_v(n: i64, x: Point) -> Complex64 {
    let m = n.unsigned_abs() as usize;
    basis_row(m, x)[(n + m as i64) as usize]
}

/// `G_mn = Σ_k w_k conj(v_m(x_k)) v_n(x_k)`, `|m|,|n| ≤ N`.
///
/// Each entry is summed over nodes in a fixed order, so the result does not
/// depend on thread scheduling.
pub fn gram_matrix(quad: &QuadratureRule, n_max: usize) -> CMatrix {
    let width = 2 * n_max + 1;
    let rows: Vec<Vec<Complex64>> = quad.nodes.par_iter().map(|&x| basis_row(n_max, x)).collect();
    let columns: Vec<Vec<Complex64>> = (0..width)
        .into_par_iter()
        .map(|n| {
            (0..=n)
                .map(|m| {
                    let mut acc = ZERO;
                    for (row, &w) in rows.iter().zip(&quad.weights) {
                        acc += row[m].conj() * row[n] * w;
                    }
                    if m == n {
                        Complex64::new(acc.re, 0.0)
                    } else {
                        acc
                    }
                })
                .collect()
        })
        .collect();
    let mut g = CMatrix::zeros(width, width);
    for (n, col) in columns.into_iter().enumerate() {
        for (m, v) in col.into_iter().enumerate() {
            g[(m, n)] = v;
            g[(n, m)] = v.conj();
        }
    }
    g
}

/// `R̃_mn = s̃_{m−n}`.
pub fn rtilde_matrix(model: &PasModel, n_max: usize) -> CMatrix {
    let width = 2 * n_max + 1;
    let s = model.fourier_block(2 * n_max);
    CMatrix::from_fn(width, width, |i, k| if i >= k { s[i - k] } else { s[k - i].conj() })
}

/// Truncated kernel `ρ_N(x) = Σ_{|n|≤N} s̃_n v_n(x)`.
pub fn rho_n_kernel(model: &PasModel, x: Point, n_max: usize) -> Result<Complex64> {
    let r = x[0].hypot(x[1]);
    let nd = truncation_order(r);
    if n_max < nd {
        return Err(Error::Precondition(format!("kernel truncation N = {n_max} is below N_D = {nd} for |x| = {r}")));
    }
    Ok(rho_n_unchecked(&model.fourier_block(n_max), x, n_max))
}

/// `ρ_N(x)` from precomputed `s̃_0..s̃_N`, without the order check.
pub(crate) fn rho_n_unchecked(coeffs: &[Complex64], x: Point, n_max: usize) -> Complex64 {
    let v = basis_row(n_max, x);
    let mut acc = coeffs[0] * v[n_max];
    for k in 1..=n_max {
        acc += coeffs[k] * v[n_max + k] + coeffs[k].conj() * v[n_max - k];
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OperatorOptions {
    /// Truncation order; defaults to `N_D + 10`.
    pub n: Option<usize>,
    /// Nodes per dimension per smooth piece; defaults to `4(N + 1)`.
    pub quadrature_order: Option<usize>,
    /// Skip the order-doubling convergence check.
    pub skip_convergence_check: bool,
}

#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub n: usize,
    pub n_d: usize,
    pub r1: f64,
    pub rho_max: f64,
    pub gram: CMatrix,
    pub rtilde: CMatrix,
    /// Quadrature order the returned `gram` was assembled with.
    pub quadrature_order: usize,
    /// Translation applied to the aperture before assembly.
    pub offset: Point,
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn gram_trace(&self) -> f64 {
        self.gram.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Quadrature used for a truncation of order `n_max`: disks get at least
/// `4N + 1` angular nodes per ring.
pub fn quadrature_for(aperture: &Aperture, order: usize, n_max: usize) -> Result<QuadratureRule> {
    let angular = match aperture {
        Aperture::Disk { .. } => order.max(4 * n_max + 1),
        _ => order,
    };
    build_quadrature_with_angular(aperture, order, angular)
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Centers the aperture, picks `N` and assembles `G_N` and `R̃_N`.
pub fn build_truncated_operator(
    aperture: &Aperture,
    model: &PasModel,
    opts: OperatorOptions,
) -> Result<TruncatedOperator> {
    if aperture.is_discrete() {
        return Err(Error::Unsupported(
            "discrete arrays bypass the continuous operator; use the discrete correlation matrix".into(),
        ));
    }
    let (centered, offset) = aperture.centering_transform();
    let r1 = centered.enclosing_radius();
    let n_d = truncation_order(r1);
    let n = opts.n.unwrap_or(n_d + DEFAULT_ORDER_OFFSET);
    if n < n_d {
        return Err(Error::Precondition(format!("truncation order N = {n} is below N_D = {n_d} (r1 = {r1})")));
    }
    let mut order = opts.quadrature_order.unwrap_or(4 * (n + 1));
    if order == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    let mut gram = gram_matrix(&quadrature_for(&centered, order, n)?, n);
    if !opts.skip_convergence_check {
        let mut converged = false;
        let mut change = f64::INFINITY;
        for _ in 0..MAX_DOUBLINGS {
            let finer = gram_matrix(&quadrature_for(&centered, 2 * order, n)?, n);
            change = max_abs_diff(&gram, &finer);
            debug!("quadrature order {order} -> {}: max |dG| = {change:.3e}", 2 * order);
            order *= 2;
            gram = finer;
            if change < GRAM_CONVERGENCE_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureFailure { order, max_change: change });
        }
    }

    let op = TruncatedOperator {
        n,
        n_d,
        r1,
        rho_max: model.rho_max(),
        gram,
        rtilde: rtilde_matrix(model, n),
        quadrature_order: order,
        offset,
    };
    check_invariants(&op)?;
    Ok(op)
}

fn check_invariants(op: &TruncatedOperator) -> Result<()> {
    let tr = op.gram_trace();
    let residual = bessel_sq_tail_bound(op.n, op.r1)?;
    if tr > 1.0 + 1e-12 || 1.0 - tr > residual + 1e-10 {
        return Err(Error::Invariant(format!(
            "trace(G_N) = {tr} outside [1 - {residual:e}, 1] for N = {}, r1 = {}",
            op.n, op.r1
        )));
    }
    for i in 0..op.dim() {
        if (op.rtilde[(i, i)] - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(Error::Invariant("R̃ must have a unit diagonal".into()));
        }
    }
    Ok(())
}
