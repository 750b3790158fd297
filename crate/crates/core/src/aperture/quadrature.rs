use super::{Aperture, CurvePiece, Point};
use crate::error::{Error, Result};
use crate::integrate::{gauss_legendre, periodic_nodes};

/// Nodes and positive weights realizing `∫_A f dμ ≈ Σ w_k f(x_k)` with `Σ w_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    fn single(p: Point) -> Self {
        QuadratureRule { nodes: vec![p], weights: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<T>(&self, mut f: impl FnMut(Point) -> T) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }

    fn normalized(mut self) -> Self {
        let s = self.total_weight();
        for w in &mut self.weights {
            *w /= s;
        }
        self
    }

    fn append_scaled(&mut self, other: QuadratureRule, scale: f64) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights.into_iter().map(|w| w * scale));
    }
}

fn segment_rule(from: Point, to: Point, order: usize) -> QuadratureRule {
    let (nodes, weights) = gauss_legendre(order, 0.0, 1.0)
        .into_iter()
        .map(|(t, w)| ([from[0] + (to[0] - from[0]) * t, from[1] + (to[1] - from[1]) * t], w))
        .unzip();
    QuadratureRule { nodes, weights }
}

fn piece_rule(piece: &CurvePiece, order: usize) -> QuadratureRule {
    let (nodes, weights) = gauss_legendre(order, 0.0, 1.0).into_iter().map(|(t, w)| (piece.at(t), w)).unzip();
    QuadratureRule { nodes, weights }
}

/// Quadrature for `aperture` with `order` nodes per dimension per smooth
/// piece. Disks use `order` angular nodes; see [`build_quadrature_with_angular`].
pub fn build_quadrature(aperture: &Aperture, order: usize) -> Result<QuadratureRule> {
    build_quadrature_with_angular(aperture, order, order)
}

/// As [`build_quadrature`], with `angular` equispaced nodes on the circle and
/// on each ring of a disk.
pub fn build_quadrature_with_angular(aperture: &Aperture, order: usize, angular: usize) -> Result<QuadratureRule> {
    if order == 0 || angular == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    aperture.validate()?;
    let rule = match aperture {
        Aperture::Segment { length, .. } => {
            let ends = aperture.hull_points();
            if *length == 0.0 {
                return Ok(QuadratureRule::single(ends[0]));
            }
            segment_rule(ends[0], ends[1], order)
        }
        Aperture::Circle { radius, center } => {
            if *radius == 0.0 {
                return Ok(QuadratureRule::single(*center));
            }
            let nodes =
                periodic_nodes(angular).map(|a| [center[0] + radius * a.cos(), center[1] + radius * a.sin()]).collect();
            QuadratureRule { nodes, weights: vec![1.0 / angular as f64; angular] }
        }
        Aperture::Disk { radius, center } => {
            if *radius == 0.0 {
                return Ok(QuadratureRule::single(*center));
            }
            // dμ = (2r/r1²) dr · dβ/2π
            let ring_w = 1.0 / angular as f64;
            let dirs: Vec<(f64, f64)> = periodic_nodes(angular).map(|a| (a.cos(), a.sin())).collect();
            let mut rule = QuadratureRule { nodes: Vec::new(), weights: Vec::new() };
            for (r, w) in gauss_legendre(order, 0.0, *radius) {
                let wr = w * 2.0 * r / (radius * radius) * ring_w;
                for &(c, s) in &dirs {
                    rule.nodes.push([center[0] + r * c, center[1] + r * s]);
                    rule.weights.push(wr);
                }
            }
            rule
        }
        Aperture::Rectangle { width, height, center, rotation } => {
            let (s, c) = rotation.sin_cos();
            let place = |u: f64, v: f64| [center[0] + c * u - s * v, center[1] + s * u + c * v];
            match (*width == 0.0, *height == 0.0) {
                (true, true) => return Ok(QuadratureRule::single(*center)),
                (false, true) => segment_rule(place(-0.5 * width, 0.0), place(0.5 * width, 0.0), order),
                (true, false) => segment_rule(place(0.0, -0.5 * height), place(0.0, 0.5 * height), order),
                (false, false) => {
                    let us = gauss_legendre(order, -0.5 * width, 0.5 * width);
                    let vs = gauss_legendre(order, -0.5 * height, 0.5 * height);
                    let area = width * height;
                    let mut rule = QuadratureRule { nodes: Vec::new(), weights: Vec::new() };
                    for &(u, wu) in &us {
                        for &(v, wv) in &vs {
                            rule.nodes.push(place(u, v));
                            rule.weights.push(wu * wv / area);
                        }
                    }
                    rule
                }
            }
        }
        Aperture::PiecewiseCurve { pieces } => {
            let total: f64 = pieces.iter().map(CurvePiece::length).sum();
            if total == 0.0 {
                return Ok(QuadratureRule::single(pieces[0].at(0.0)));
            }
            let mut rule = QuadratureRule { nodes: Vec::new(), weights: Vec::new() };
            for p in pieces {
                let len = p.length();
                if len > 0.0 {
                    rule.append_scaled(piece_rule(p, order), len / total);
                }
            }
            rule
        }
        Aperture::ParallelLines { lines, length, span, orientation, center } => {
            let ends = Aperture::parallel_line_endpoints(*lines, *length, *span, *orientation, *center);
            let scale = 1.0 / *lines as f64;
            let mut rule = QuadratureRule { nodes: Vec::new(), weights: Vec::new() };
            for (a, b) in ends {
                let line = if *length == 0.0 { QuadratureRule::single(a) } else { segment_rule(a, b, order) };
                rule.append_scaled(line, scale);
            }
            rule
        }
        Aperture::DiscreteArray { .. } => {
            return Err(Error::Unsupported(
                "discrete arrays have no continuous measure; use the discrete correlation matrix".into(),
            ))
        }
    };
    Ok(rule.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn apertures() -> Vec<Aperture> {
        vec![
            Aperture::segment(1.3, 0.4, [0.1, -0.2]).unwrap(),
            Aperture::circle(0.8).unwrap(),
            Aperture::disk(0.6).unwrap(),
            Aperture::rectangle(1.0, 0.5, [0.0, 0.0], 0.3).unwrap(),
            Aperture::piecewise_curve(vec![
                CurvePiece::Line { from: [0.0, 0.0], to: [1.0, 0.0] },
                CurvePiece::Arc { center: [1.0, 0.5], radius: 0.5, start: -PI / 2.0, end: PI / 2.0 },
            ])
            .unwrap(),
            Aperture::parallel_lines(3, 1.0, 0.8, 0.0, [0.0, 0.0]).unwrap(),
        ]
    }

    #[test]
    fn weights_positive_and_normalized() {
        for a in apertures() {
            for order in [1, 2, 5, 17, 64] {
                let q = build_quadrature(&a, order).unwrap();
                assert!(q.weights.iter().all(|&w| w > 0.0), "{a:?}");
                assert!((q.total_weight() - 1.0).abs() <= 1e-14, "{a:?} order {order}");
            }
        }
    }

    #[test]
    fn segment_and_circle_layout() {
        let seg = Aperture::segment(1.0, 0.0, [0.0, 0.0]).unwrap();
        let q = build_quadrature(&seg, 7).unwrap();
        assert_eq!(q.len(), 7);
        assert!(q.nodes.iter().all(|p| p[1] == 0.0 && p[0].abs() < 0.5));
        // mean of x² over the unit segment is 1/12
        let m2: f64 = q.integrate(|p| p[0] * p[0]);
        assert!((m2 - 1.0 / 12.0).abs() < 1e-15);

        let c = build_quadrature(&Aperture::circle(2.0).unwrap(), 9).unwrap();
        assert!(c.weights.iter().all(|&w| (w - 1.0 / 9.0).abs() < 1e-16));
        assert!(c.nodes.iter().all(|p| (p[0].hypot(p[1]) - 2.0).abs() < 1e-15));
    }

    #[test]
    fn disk_integrates_radial_monomials() {
        // over the unit-measure disk of radius R, E[r^{2m}] = R^{2m}/(m+1)
        let radius = 0.7;
        let q = build_quadrature_with_angular(&Aperture::disk(radius).unwrap(), 12, 13).unwrap();
        for m in 0..8 {
            let got: f64 = q.integrate(|p| (p[0] * p[0] + p[1] * p[1]).powi(m));
            let want = radius.powi(2 * m) / (m as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "m={m}");
        }
        // angular harmonics below the ring size integrate to zero
        for k in 1..13 {
            let got: f64 = q.integrate(|p| (k as f64 * p[1].atan2(p[0])).cos());
            assert!(got.abs() < 1e-13, "k={k}: {got}");
        }
    }

    #[test]
    fn rectangle_area_moments() {
        let (w, h) = (1.2, 0.5);
        let q = build_quadrature(&Aperture::rectangle(w, h, [0.0, 0.0], 0.0).unwrap(), 6).unwrap();
        let mx: f64 = q.integrate(|p| p[0] * p[0]);
        let my: f64 = q.integrate(|p| p[1] * p[1]);
        assert!((mx - w * w / 12.0).abs() < 1e-15 && (my - h * h / 12.0).abs() < 1e-15);
    }

    #[test]
    fn single_parallel_line_equals_segment() {
        for theta in [0.0, 0.7, -2.1] {
            let seg = Aperture::segment(1.5, theta, [0.3, 0.1]).unwrap();
            let pl = Aperture::parallel_lines(1, 1.5, 0.0, theta, [0.3, 0.1]).unwrap();
            assert_eq!(build_quadrature(&seg, 11).unwrap(), build_quadrature(&pl, 11).unwrap());
        }
    }

    #[test]
    fn arc_weights_follow_length() {
        let a =
            Aperture::piecewise_curve(vec![CurvePiece::Arc { center: [0.0, 0.0], radius: 1.0, start: 0.0, end: PI }])
                .unwrap();
        let q = build_quadrature(&a, 16).unwrap();
        // mean height of a unit semicircle is 2/π
        let y: f64 = q.integrate(|p| p[1]);
        assert!((y - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn degenerate_and_unsupported() {
        let p = build_quadrature(&Aperture::point(), 8).unwrap();
        assert_eq!(p.nodes, vec![[0.0, 0.0]]);
        assert_eq!(build_quadrature(&Aperture::disk(0.0).unwrap(), 8).unwrap().len(), 1);
        let arr = Aperture::discrete_array(vec![[0.0, 0.0]]).unwrap();
        assert!(matches!(build_quadrature(&arr, 8), Err(Error::Unsupported(_))));
        assert!(build_quadrature(&Aperture::point(), 0).is_err());
    }

    proptest! {
        #[test]
        fn nodes_lie_in_rectangle(w in 0.01f64..3.0, h in 0.01f64..3.0, rot in -3.0f64..3.0, order in 1usize..12) {
            let a = Aperture::rectangle(w, h, [0.5, -0.5], rot).unwrap();
            let q = build_quadrature(&a, order).unwrap();
            let (s, c) = rot.sin_cos();
            for p in q.nodes {
                let (dx, dy) = (p[0] - 0.5, p[1] + 0.5);
                let (u, v) = (c * dx + s * dy, -s * dx + c * dy);
                prop_assert!(u.abs() <= 0.5 * w + 1e-12 && v.abs() <= 0.5 * h + 1e-12);
            }
        }
    }
}
