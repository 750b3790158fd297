//! Integer-order Bessel functions and the truncation bounds for Bessel series.
//!
//! `J_n` is evaluated for a whole block of orders at once with Miller's
//! normalized backward recurrence; the modified ratios `I_n/I_0` use the same
//! scheme. The tail bounds are the uniform estimates for
//! `Σ_{|n|>N} |J_n(2πr)|` and `Σ_{|n|>N} J_n²(2πr)` valid for `r ≤ r1` and
//! `N ≥ ⌈eπ r1⌉`.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

const RESCALE_AT: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;

/// Margin (in wavelengths) added to the largest radius when sizing `x_max`.
pub const RADIUS_MARGIN: f64 = 0.5;

/// Terms below this magnitude count towards the tail-sum stopping rule.
pub const TAIL_NEGLIGIBLE: f64 = 1e-18;
/// Number of consecutive negligible terms that end a tail sum.
pub const TAIL_RUN: usize = 20;

/// A checked evaluation range for `J_n(x)`, `|n| ≤ n_max`, `0 ≤ x ≤ x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrderRange {
    pub n_max: usize,
    pub x_max: f64,
}

impl BesselOrderRange {
    pub fn new(n_max: usize, x_max: f64) -> Result<Self> {
        if !(x_max >= 0.0) || !x_max.is_finite() {
            return Err(Error::Domain(format!("x_max must be finite and >= 0, got {x_max}")));
        }
        Ok(Self { n_max, x_max })
    }

    /// Range covering arguments `2π r` for `r ≤ r1 + RADIUS_MARGIN`.
    pub fn for_radius(n_max: usize, r1: f64) -> Result<Self> {
        Self::new(n_max, 2.0 * PI * (r1 + RADIUS_MARGIN))
    }

    fn check(&self, n: i64, x: f64) -> Result<()> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("Bessel argument must be >= 0, got {x}")));
        }
        if x > self.x_max {
            return Err(Error::Domain(format!("Bessel argument {x} exceeds configured x_max {}", self.x_max)));
        }
        if n.unsigned_abs() as usize > self.n_max {
            return Err(Error::Domain(format!("Bessel order {n} outside configured range |n| <= {}", self.n_max)));
        }
        Ok(())
    }

    /// `J_n(x)` for a single order.
    pub fn j(&self, n: i64, x: f64) -> Result<f64> {
        self.check(n, x)?;
        Ok(bessel_j(n, x))
    }

    /// `J_0(x), …, J_{n_max}(x)`.
    pub fn j_orders(&self, x: f64) -> Result<Vec<f64>> {
        self.check(0, x)?;
        Ok(bessel_j_orders(self.n_max, x))
    }
}

fn miller_start(n_max: usize, x: f64) -> usize {
    let base = n_max.max(x.ceil() as usize);
    let m = base + 32 + (4.0 * x.cbrt()).ceil() as usize;
    m + (m & 1)
}

/// `J_0(x), …, J_{n_max}(x)` for `x ≥ 0`, by Miller's backward recurrence
/// normalized with `J_0 + 2 Σ_k J_{2k} = 1`.
pub fn bessel_j_orders(n_max: usize, x: f64) -> Vec<f64> {
    debug_assert!(x >= 0.0);
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(n_max, x);
    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64;
    let mut current = 1.0_f64;
    let mut norm = 0.0_f64;
    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = current;
        }
        if k % 2 == 0 {
            norm += 2.0 * current;
        }
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            for v in out[k.min(n_max + 1)..].iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }
    out[0] = current;
    norm += current;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_n(x)` for any integer order; negative orders use `J_{-n} = (-1)^n J_n`.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_orders(m, x)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Ratios `I_k(κ)/I_0(κ)` for `k = 0..=n_max` together with `e^{-κ} I_0(κ)`.
pub fn bessel_i_ratios(n_max: usize, kappa: f64) -> Result<(Vec<f64>, f64)> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    let mut ratios = vec![0.0; n_max + 1];
    ratios[0] = 1.0;
    if kappa == 0.0 {
        return Ok((ratios, 1.0));
    }
    let start = n_max.max(kappa.ceil() as usize) + 40 + (10.0 * kappa.sqrt()).ceil() as usize;
    let two_over_k = 2.0 / kappa;
    let mut above = 0.0_f64;
    let mut current = 1.0_f64;
    let mut sum = 0.0_f64;
    for k in (1..=start).rev() {
        if k <= n_max {
            ratios[k] = current;
        }
        sum += current;
        let below = k as f64 * two_over_k * current + above;
        above = current;
        current = below;
        if current > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            for v in ratios[1..].iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }
    let i0 = current;
    for v in ratios[1..].iter_mut() {
        *v /= i0;
    }
    // e^κ = I_0 + 2 Σ_{k≥1} I_k
    let i0_scaled = i0 / (i0 + 2.0 * sum);
    Ok((ratios, i0_scaled))
}

/// `I_n(κ)/I_0(κ)`, symmetric in `n`.
pub fn bessel_i_ratio(n: i64, kappa: f64) -> Result<f64> {
    let m = n.unsigned_abs() as usize;
    Ok(bessel_i_ratios(m, kappa)?.0[m])
}

/// `e^{-κ} I_0(κ)`.
pub fn bessel_i0_scaled(kappa: f64) -> Result<f64> {
    Ok(bessel_i_ratios(0, kappa)?.1)
}

/// `jⁿ` for the imaginary unit `j`, exact for every integer `n`.
pub fn imag_unit_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `N_D = ⌈eπ r1⌉`, the order beyond which Bessel tails on a disk of radius
/// `r1` decay exponentially.
pub fn truncation_order(r1: f64) -> usize {
    assert!(r1 >= 0.0 && r1.is_finite(), "radius must be finite and >= 0");
    (E * PI * r1).ceil() as usize
}

fn check_order(n: usize, r1: f64) -> Result<usize> {
    let nd = truncation_order(r1);
    if n < nd {
        return Err(Error::Precondition(format!("truncation N = {n} is below N_D = {nd} for r1 = {r1}")));
    }
    Ok(nd)
}

/// Uniform bound `0.2·exp(N_D − N)` on `Σ_{|n|>N} |J_n(2πr)|`, `r ≤ r1`.
pub fn bessel_abs_tail_bound(n: usize, r1: f64) -> Result<f64> {
    let nd = check_order(n, r1)?;
    Ok(0.2 * (nd as f64 - n as f64).exp())
}

/// Uniform bound `0.01·exp(2(N_D − N))` on `Σ_{|n|>N} J_n²(2πr)`, `r ≤ r1`.
pub fn bessel_sq_tail_bound(n: usize, r1: f64) -> Result<f64> {
    let nd = check_order(n, r1)?;
    Ok(0.01 * (2.0 * (nd as f64 - n as f64)).exp())
}

fn tail_sum(n: usize, x: f64, term: impl Fn(f64) -> f64) -> f64 {
    let mut limit = n + x.ceil() as usize + 64;
    loop {
        let js = bessel_j_orders(limit, x);
        let mut sum = 0.0;
        let mut run = 0;
        for &j in &js[n + 1..] {
            let t = term(j);
            sum += t;
            if j.abs() < TAIL_NEGLIGIBLE {
                run += 1;
                if run >= TAIL_RUN {
                    return 2.0 * sum;
                }
            } else {
                run = 0;
            }
        }
        limit *= 2;
    }
}

/// Empirical `Σ_{|k|>n} |J_k(x)|`, summed until terms stay negligible.
pub fn bessel_abs_tail(n: usize, x: f64) -> f64 {
    tail_sum(n, x, f64::abs)
}

/// Empirical `Σ_{|k|>n} J_k²(x)`.
pub fn bessel_sq_tail(n: usize, x: f64) -> f64 {
    tail_sum(n, x, |j| j * j)
}
