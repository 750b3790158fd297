//! One-dimensional quadrature helpers: Gauss-Legendre rules on `[a, b]`, the
//! periodic trapezoid rule, and an adaptive bisection integrator used for
//! reference integrals.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on `[a, b]`, ordered by increasing node.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(order >= 1, "quadrature order must be >= 1");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    if order == 1 {
        return vec![(mid, 2.0 * half)];
    }
    let rule = GaussLegendre::new(order).expect("order >= 2");
    let mut pairs: Vec<(f64, f64)> =
        rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs
}

/// Equispaced angles `2πk/count`, `k = 0..count`.
pub fn periodic_nodes(count: usize) -> impl Iterator<Item = f64> {
    let h = std::f64::consts::TAU / count as f64;
    (0..count).map(move |k| k as f64 * h)
}

const PANEL_ORDER: usize = 12;
const MAX_DEPTH: usize = 40;

fn panel(rule: &[(f64, f64)], a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Adaptive integral of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Panels are bisected until a 12-point Gauss-Legendre estimate agrees with
/// the sum over its two halves. Nodes never touch the endpoints, so
/// integrable endpoint singularities are tolerated.
pub fn adaptive(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let rule = gauss_legendre(PANEL_ORDER, -1.0, 1.0);
    let mut stack = vec![(a, b, panel(&rule, a, b, &mut f), tol, 0usize)];
    let mut total = 0.0;
    while let Some((lo, hi, whole, eps, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&rule, lo, mid, &mut f);
        let right = panel(&rule, mid, hi, &mut f);
        if (left + right - whole).abs() <= eps || depth >= MAX_DEPTH {
            total += left + right;
        } else {
            stack.push((lo, mid, left, 0.5 * eps, depth + 1));
            stack.push((mid, hi, right, 0.5 * eps, depth + 1));
        }
    }
    total
}

/// Complex-valued version of [`adaptive`].
pub fn adaptive_complex(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    let re = adaptive(|x| f(x).re, a, b, tol);
    let im = adaptive(|x| f(x).im, a, b, tol);
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_weights_and_exactness() {
        for order in [1, 2, 7, 40, 216] {
            let rule = gauss_legendre(order, 0.0, 3.0);
            let w: f64 = rule.iter().map(|p| p.1).sum();
            assert!((w - 3.0).abs() < 1e-13, "order {order}: {w}");
            assert!(rule.iter().all(|p| p.1 > 0.0 && p.0 > 0.0 && p.0 < 3.0));
            // degree 2n-1 exactness
            let deg = (2 * order - 1) as i32;
            let got: f64 = rule.iter().map(|&(x, w)| w * (x / 3.0).powi(deg)).sum();
            let want = 3.0 / (deg as f64 + 1.0);
            if deg < 60 {
                assert!((got - want).abs() < 1e-13, "order {order}");
            }
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫_{-1}^{1} dx / (π sqrt(1 - x²)) = 1
        let v = adaptive(|x| 1.0 / (std::f64::consts::PI * (1.0 - x * x).sqrt()), -1.0, 1.0, 1e-10);
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        let s = adaptive(f64::sin, 0.0, std::f64::consts::PI, 1e-13);
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_jumps() {
        let v = adaptive(|x| if x < 0.3 { 1.0 } else { 2.0 }, 0.0, 1.0, 1e-12);
        assert!((v - 1.7).abs() < 1e-10, "{v}");
    }
}
