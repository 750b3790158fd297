//! Power azimuth spectra (PAS), their Fourier coefficients `s̃_n`, and the
//! Doppler spectrum and time autocorrelation they induce.
//!
//! All spectra are normalized to `∫ S(α) dα = 1` over `(−π, π]`, so
//! `s̃_0 = 1` and `|s̃_n| ≤ 1`. The coefficients follow the convention
//! `s̃_n = ∫ e^{−jαn} S(α) dα`; a center angle `α₀` multiplies them by
//! `e^{−jα₀n}`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_i0_scaled, bessel_i_ratios, bessel_j_orders, imag_unit_pow, truncation_order};

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Normalized sinc, `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Piecewise-constant PAS sampled on `(−π, π]`.
///
/// Segment `i` covers `[edges[i], edges[i+1])`; the last segment wraps around
/// to `edges[0] + 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPas {
    edges: Vec<f64>,
    values: Vec<f64>,
    scale: f64,
}

impl TabulatedPas {
    /// Builds a table from `(α, S(α))` samples in radians and rescales it to unit
    /// total power.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("tabulated PAS needs at least one sample".into()));
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
        for &(a, s) in samples {
            if !a.is_finite() || !s.is_finite() {
                return Err(Error::Domain("tabulated PAS samples must be finite".into()));
            }
            if s < 0.0 {
                return Err(Error::Domain(format!("tabulated PAS density {s} at angle {a} is negative")));
            }
            pts.push((wrap_angle(a), s));
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        if pts.windows(2).any(|w| w[1].0 - w[0].0 <= 0.0) {
            return Err(Error::Domain("tabulated PAS has duplicate angles".into()));
        }
        let edges: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let raw: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let total: f64 = (0..edges.len()).map(|i| raw[i] * segment_width(&edges, i)).sum();
        if !(total > 0.0) {
            return Err(Error::Domain("tabulated PAS has zero total power".into()));
        }
        let scale = 1.0 / total;
        let values = raw.iter().map(|v| v * scale).collect();
        Ok(Self { edges, values, scale })
    }

    /// Factor applied to the raw densities at construction.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.edges.len()).map(|i| {
            let lo = self.edges[i];
            (lo, lo + segment_width(&self.edges, i), self.values[i])
        })
    }

    fn value(&self, a: f64) -> f64 {
        let idx = self.edges.partition_point(|&e| e <= a);
        if idx == 0 {
            *self.values.last().unwrap()
        } else {
            self.values[idx - 1]
        }
    }

    fn coefficient(&self, n: i64) -> Complex64 {
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let nf = n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (lo, hi, v) in self.segments() {
            // ∫_lo^hi e^{−jαn} dα = (e^{−jn·hi} − e^{−jn·lo}) / (−jn)
            let diff = Complex64::from_polar(1.0, -nf * hi) - Complex64::from_polar(1.0, -nf * lo);
            acc += v * diff / Complex64::new(0.0, -nf);
        }
        acc
    }
}

fn segment_width(edges: &[f64], i: usize) -> f64 {
    if i + 1 < edges.len() {
        edges[i + 1] - edges[i]
    } else {
        edges[0] + TAU - edges[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PasShape {
    Isotropic,
    /// Constant `1/Δ` over an opening angle `Δ ∈ (0, 2π]`.
    Uniform {
        delta: f64,
    },
    /// `e^{κ cos α} / (2π I_0(κ))`.
    VonMises {
        kappa: f64,
        i0_scaled: f64,
    },
    Tabulated(TabulatedPas),
}

/// A normalized power azimuth spectrum centered at `alpha0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PasModel {
    shape: PasShape,
    alpha0: f64,
}

impl PasModel {
    pub fn isotropic() -> Self {
        Self { shape: PasShape::Isotropic, alpha0: 0.0 }
    }

    pub fn uniform(delta: f64, alpha0: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= TAU + 1e-12) {
            return Err(Error::Domain(format!("opening angle must lie in (0, 2π], got {delta}")));
        }
        Ok(Self { shape: PasShape::Uniform { delta: delta.min(TAU) }, alpha0: checked_center(alpha0)? })
    }

    pub fn von_mises(kappa: f64, alpha0: f64) -> Result<Self> {
        let i0_scaled = bessel_i0_scaled(kappa)?;
        Ok(Self { shape: PasShape::VonMises { kappa, i0_scaled }, alpha0: checked_center(alpha0)? })
    }

    pub fn tabulated(samples: &[(f64, f64)], alpha0: f64) -> Result<Self> {
        Ok(Self { shape: PasShape::Tabulated(TabulatedPas::new(samples)?), alpha0: checked_center(alpha0)? })
    }

    pub fn shape(&self) -> &PasShape {
        &self.shape
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Same shape, re-centered at `alpha0`.
    pub fn with_center(&self, alpha0: f64) -> Result<Self> {
        Ok(Self { shape: self.shape.clone(), alpha0: checked_center(alpha0)? })
    }

    /// `S(α)`, evaluated as the centered shape at `α − α₀`.
    pub fn value(&self, alpha: f64) -> f64 {
        let a = wrap_angle(alpha - self.alpha0);
        match &self.shape {
            PasShape::Isotropic => 1.0 / TAU,
            PasShape::Uniform { delta } => {
                if a.abs() <= 0.5 * delta {
                    1.0 / delta
                } else {
                    0.0
                }
            }
            PasShape::VonMises { kappa, i0_scaled } => (kappa * (a.cos() - 1.0)).exp() / (TAU * i0_scaled),
            PasShape::Tabulated(t) => t.value(a),
        }
    }

    /// `s̃_n = ∫ e^{−jαn} S(α) dα`.
    pub fn fourier(&self, n: i64) -> Complex64 {
        let m = n.unsigned_abs() as usize;
        let c = self.fourier_block(m)[m];
        if n < 0 {
            c.conj()
        } else {
            c
        }
    }

    /// `s̃_0, …, s̃_{n_max}`; negative orders follow from `s̃_{−n} = s̃_n*`.
    pub fn fourier_block(&self, n_max: usize) -> Vec<Complex64> {
        let centered: Vec<Complex64> = match &self.shape {
            PasShape::Isotropic => {
                let mut v = vec![Complex64::new(0.0, 0.0); n_max + 1];
                v[0] = Complex64::new(1.0, 0.0);
                v
            }
            PasShape::Uniform { delta } => {
                (0..=n_max).map(|n| Complex64::new(sinc(n as f64 * delta / TAU), 0.0)).collect()
            }
            PasShape::VonMises { kappa, .. } => bessel_i_ratios(n_max, *kappa)
                .expect("kappa validated at construction")
                .0
                .into_iter()
                .map(|r| Complex64::new(r, 0.0))
                .collect(),
            PasShape::Tabulated(t) => (0..=n_max as i64).map(|n| t.coefficient(n)).collect(),
        };
        if self.alpha0 == 0.0 {
            return centered;
        }
        centered
            .into_iter()
            .enumerate()
            .map(|(n, c)| if n == 0 { c } else { c * Complex64::from_polar(1.0, -self.alpha0 * n as f64) })
            .collect()
    }

    /// `ρ_max = 2π · sup_α S(α)`.
    pub fn rho_max(&self) -> f64 {
        match &self.shape {
            PasShape::Isotropic => 1.0,
            PasShape::Uniform { delta } => TAU / delta,
            PasShape::VonMises { i0_scaled, .. } => 1.0 / i0_scaled,
            PasShape::Tabulated(t) => TAU * t.values.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Angles where `S` may jump, used to split reference integrals.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = match &self.shape {
            PasShape::Isotropic | PasShape::VonMises { .. } => Vec::new(),
            PasShape::Uniform { delta } => vec![-0.5 * delta, 0.5 * delta],
            PasShape::Tabulated(t) => t.edges.clone(),
        };
        for p in pts.iter_mut() {
            *p = wrap_angle(*p + self.alpha0);
        }
        pts.sort_by(f64::total_cmp);
        pts
    }
}

fn checked_center(alpha0: f64) -> Result<f64> {
    if !alpha0.is_finite() {
        return Err(Error::Domain(format!("center angle must be finite, got {alpha0}")));
    }
    Ok(wrap_angle(alpha0))
}

/// Receiver motion along the x-axis; with unit wavelength the maximal
/// Doppler frequency equals the speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerSpec {
    pub nu_max: f64,
}

impl DopplerSpec {
    pub fn new(nu_max: f64) -> Result<Self> {
        if !(nu_max > 0.0) || !nu_max.is_finite() {
            return Err(Error::Domain(format!("nu_max must be finite and > 0, got {nu_max}")));
        }
        Ok(Self { nu_max })
    }
}

/// `S_D(ν) = [S(α(ν)) + S(−α(ν))] / √(ν_max² − ν²)` with `α(ν) = arccos(ν/ν_max)`.
pub fn doppler_spectrum(model: &PasModel, spec: DopplerSpec, nu: f64) -> Result<f64> {
    let nm = spec.nu_max;
    if !(nu.abs() < nm) {
        return Err(Error::Domain(format!("Doppler frequency {nu} must satisfy |nu| < nu_max = {nm}")));
    }
    let alpha = (nu / nm).acos();
    Ok((model.value(alpha) + model.value(-alpha)) / (nm * nm - nu * nu).sqrt())
}

/// Truncated time autocorrelation `Σ_{|n|≤N} s̃_n jⁿ J_n(2πν_max t)`.
pub fn time_acf(model: &PasModel, spec: DopplerSpec, t: f64, n: usize) -> Result<Complex64> {
    let travelled = spec.nu_max * t.abs();
    let nd = truncation_order(travelled);
    if n < nd {
        return Err(Error::Precondition(format!(
            "time_acf needs N >= N_D = {nd} for nu_max*|t| = {travelled}, got {n}"
        )));
    }
    let js = bessel_j_orders(n, TAU * travelled);
    let coeffs = model.fourier_block(n);
    // x = (ν_max t, 0): β = 0 for t ≥ 0 and β = π otherwise
    let mut acc = coeffs[0] * js[0];
    for k in 1..=n {
        let ik = k as i64;
        let flip = if t < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        let pos = coeffs[k] * imag_unit_pow(ik);
        let neg = coeffs[k].conj() * imag_unit_pow(-ik) * if k % 2 == 1 { -1.0 } else { 1.0 };
        acc += (pos + neg) * (flip * js[k]);
    }
    Ok(acc)
}
