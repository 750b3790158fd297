//! Planar apertures carrying a normalized measure `μ(A) = 1`.
//!
//! Lengths are in wavelengths and angles in radians. Curves are integrated
//! against `dℓ/|A|`, regions against `d²x/|A|`, and `M` parallel lines against
//! `(1/M) Σ_m dℓ_m/|A_m|`.

mod enclosing;
mod quadrature;

use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub use enclosing::{smallest_enclosing_circle, Circle};
pub use quadrature::{build_quadrature, build_quadrature_with_angular, QuadratureRule};

pub type Point = [f64; 2];

/// Tolerance for the continuity check between consecutive curve pieces.
pub const JOINT_TOLERANCE: f64 = 1e-9;

const ARC_SAMPLES: usize = 256;

/// A smooth piece of a piecewise curve, parametrized at constant speed.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvePiece {
    Line {
        from: Point,
        to: Point,
    },
    /// Circular arc from `start` to `end` (radians, `end − start` signed).
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl CurvePiece {
    pub fn length(&self) -> f64 {
        match *self {
            CurvePiece::Line { from, to } => enclosing::dist(from, to),
            CurvePiece::Arc { radius, start, end, .. } => radius * (end - start).abs(),
        }
    }

    /// Point at normalized parameter `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> Point {
        match *self {
            CurvePiece::Line { from, to } => [from[0] + (to[0] - from[0]) * t, from[1] + (to[1] - from[1]) * t],
            CurvePiece::Arc { center, radius, start, end } => {
                let a = start + (end - start) * t;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
        }
    }

    fn farthest_from(&self, c: Point) -> f64 {
        let ends = enclosing::dist(self.at(0.0), c).max(enclosing::dist(self.at(1.0), c));
        match *self {
            CurvePiece::Line { .. } => ends,
            CurvePiece::Arc { center, radius, start, end } => {
                let off = enclosing::dist(center, c);
                if off == 0.0 {
                    return radius;
                }
                let away = (center[1] - c[1]).atan2(center[0] - c[0]);
                let (lo, hi) = if start <= end { (start, end) } else { (end, start) };
                let shifted = lo + (away - lo).rem_euclid(TAU);
                if shifted <= hi {
                    ends.max(off + radius)
                } else {
                    ends
                }
            }
        }
    }

    fn translated(&self, d: Point) -> CurvePiece {
        match *self {
            CurvePiece::Line { from, to } => CurvePiece::Line { from: sub(from, d), to: sub(to, d) },
            CurvePiece::Arc { center, radius, start, end } => {
                CurvePiece::Arc { center: sub(center, d), radius, start, end }
            }
        }
    }

    fn rotated(&self, theta: f64) -> CurvePiece {
        match *self {
            CurvePiece::Line { from, to } => CurvePiece::Line { from: rotate(from, theta), to: rotate(to, theta) },
            CurvePiece::Arc { center, radius, start, end } => {
                CurvePiece::Arc { center: rotate(center, theta), radius, start: start + theta, end: end + theta }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Aperture {
    /// Straight segment of `length`, direction angle `orientation`.
    Segment {
        length: f64,
        orientation: f64,
        center: Point,
    },
    Circle {
        radius: f64,
        center: Point,
    },
    Disk {
        radius: f64,
        center: Point,
    },
    Rectangle {
        width: f64,
        height: f64,
        center: Point,
        rotation: f64,
    },
    PiecewiseCurve {
        pieces: Vec<CurvePiece>,
    },
    /// `lines` parallel segments of equal `length` along `orientation`, evenly
    /// spaced across a transverse `span` (distance between the outer lines).
    ParallelLines {
        lines: usize,
        length: f64,
        span: f64,
        orientation: f64,
        center: Point,
    },
    DiscreteArray {
        positions: Vec<Point>,
    },
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn rotate(p: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn finite_point(name: &str, p: Point) -> Result<()> {
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(Error::Domain(format!("{name} must be finite")));
    }
    Ok(())
}

impl Aperture {
    pub fn segment(length: f64, orientation: f64, center: Point) -> Result<Self> {
        let a = Aperture::Segment { length, orientation, center };
        a.validate()?;
        Ok(a)
    }

    /// Segment with the given endpoints.
    pub fn segment_between(from: Point, to: Point) -> Result<Self> {
        let d = sub(to, from);
        Self::segment(d[0].hypot(d[1]), d[1].atan2(d[0]), [0.5 * (from[0] + to[0]), 0.5 * (from[1] + to[1])])
    }

    pub fn circle(radius: f64) -> Result<Self> {
        let a = Aperture::Circle { radius, center: [0.0, 0.0] };
        a.validate()?;
        Ok(a)
    }

    pub fn disk(radius: f64) -> Result<Self> {
        let a = Aperture::Disk { radius, center: [0.0, 0.0] };
        a.validate()?;
        Ok(a)
    }

    pub fn rectangle(width: f64, height: f64, center: Point, rotation: f64) -> Result<Self> {
        let a = Aperture::Rectangle { width, height, center, rotation };
        a.validate()?;
        Ok(a)
    }

    pub fn piecewise_curve(pieces: Vec<CurvePiece>) -> Result<Self> {
        let a = Aperture::PiecewiseCurve { pieces };
        a.validate()?;
        Ok(a)
    }

    pub fn parallel_lines(lines: usize, length: f64, span: f64, orientation: f64, center: Point) -> Result<Self> {
        let a = Aperture::ParallelLines { lines, length, span, orientation, center };
        a.validate()?;
        Ok(a)
    }

    pub fn discrete_array(positions: Vec<Point>) -> Result<Self> {
        let a = Aperture::DiscreteArray { positions };
        a.validate()?;
        Ok(a)
    }

    /// A single point, the fully correlated limit.
    pub fn point() -> Self {
        Aperture::Segment { length: 0.0, orientation: 0.0, center: [0.0, 0.0] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Aperture::Segment { length, orientation, center } => {
                nonneg("segment length", *length)?;
                finite_point("segment center", *center)?;
                if !orientation.is_finite() {
                    return Err(Error::Domain("segment orientation must be finite".into()));
                }
            }
            Aperture::Circle { radius, center } | Aperture::Disk { radius, center } => {
                nonneg("radius", *radius)?;
                finite_point("center", *center)?;
            }
            Aperture::Rectangle { width, height, center, rotation } => {
                nonneg("rectangle width", *width)?;
                nonneg("rectangle height", *height)?;
                finite_point("rectangle center", *center)?;
                if !rotation.is_finite() {
                    return Err(Error::Domain("rectangle rotation must be finite".into()));
                }
            }
            Aperture::PiecewiseCurve { pieces } => {
                if pieces.is_empty() {
                    return Err(Error::Domain("piecewise curve needs at least one piece".into()));
                }
                for (i, p) in pieces.iter().enumerate() {
                    match p {
                        CurvePiece::Line { from, to } => {
                            finite_point("line endpoint", *from)?;
                            finite_point("line endpoint", *to)?;
                        }
                        CurvePiece::Arc { center, radius, start, end } => {
                            finite_point("arc center", *center)?;
                            nonneg("arc radius", *radius)?;
                            if !start.is_finite() || !end.is_finite() {
                                return Err(Error::Domain("arc angles must be finite".into()));
                            }
                        }
                    }
                    if i > 0 {
                        let gap = enclosing::dist(pieces[i - 1].at(1.0), p.at(0.0));
                        if gap > JOINT_TOLERANCE {
                            return Err(Error::Domain(format!(
                                "piecewise curve is discontinuous between pieces {} and {i} (gap {gap:e})",
                                i - 1
                            )));
                        }
                    }
                }
            }
            Aperture::ParallelLines { lines, length, span, orientation, center } => {
                if *lines == 0 {
                    return Err(Error::Domain("parallel lines need at least one line".into()));
                }
                nonneg("line length", *length)?;
                nonneg("line span", *span)?;
                finite_point("parallel-lines center", *center)?;
                if !orientation.is_finite() {
                    return Err(Error::Domain("parallel-lines orientation must be finite".into()));
                }
            }
            Aperture::DiscreteArray { positions } => {
                if positions.is_empty() {
                    return Err(Error::Domain("discrete array needs at least one position".into()));
                }
                for p in positions {
                    finite_point("antenna position", *p)?;
                }
            }
        }
        Ok(())
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Aperture::DiscreteArray { .. })
    }

    /// Copy translated by `-offset`.
    pub fn translated(&self, offset: Point) -> Aperture {
        match self {
            Aperture::Segment { length, orientation, center } => {
                Aperture::Segment { length: *length, orientation: *orientation, center: sub(*center, offset) }
            }
            Aperture::Circle { radius, center } => Aperture::Circle { radius: *radius, center: sub(*center, offset) },
            Aperture::Disk { radius, center } => Aperture::Disk { radius: *radius, center: sub(*center, offset) },
            Aperture::Rectangle { width, height, center, rotation } => Aperture::Rectangle {
                width: *width,
                height: *height,
                center: sub(*center, offset),
                rotation: *rotation,
            },
            Aperture::PiecewiseCurve { pieces } => {
                Aperture::PiecewiseCurve { pieces: pieces.iter().map(|p| p.translated(offset)).collect() }
            }
            Aperture::ParallelLines { lines, length, span, orientation, center } => Aperture::ParallelLines {
                lines: *lines,
                length: *length,
                span: *span,
                orientation: *orientation,
                center: sub(*center, offset),
            },
            Aperture::DiscreteArray { positions } => {
                Aperture::DiscreteArray { positions: positions.iter().map(|&p| sub(p, offset)).collect() }
            }
        }
    }

    /// Copy rotated by `theta` about the origin.
    pub fn rotated(&self, theta: f64) -> Aperture {
        match self {
            Aperture::Segment { length, orientation, center } => {
                Aperture::Segment { length: *length, orientation: orientation + theta, center: rotate(*center, theta) }
            }
            Aperture::Circle { radius, center } => Aperture::Circle { radius: *radius, center: rotate(*center, theta) },
            Aperture::Disk { radius, center } => Aperture::Disk { radius: *radius, center: rotate(*center, theta) },
            Aperture::Rectangle { width, height, center, rotation } => Aperture::Rectangle {
                width: *width,
                height: *height,
                center: rotate(*center, theta),
                rotation: rotation + theta,
            },
            Aperture::PiecewiseCurve { pieces } => {
                Aperture::PiecewiseCurve { pieces: pieces.iter().map(|p| p.rotated(theta)).collect() }
            }
            Aperture::ParallelLines { lines, length, span, orientation, center } => Aperture::ParallelLines {
                lines: *lines,
                length: *length,
                span: *span,
                orientation: orientation + theta,
                center: rotate(*center, theta),
            },
            Aperture::DiscreteArray { positions } => {
                Aperture::DiscreteArray { positions: positions.iter().map(|&p| rotate(p, theta)).collect() }
            }
        }
    }

    /// Line segments `(from, to)` of the ParallelLines layout.
    pub(crate) fn parallel_line_endpoints(
        lines: usize,
        length: f64,
        span: f64,
        orientation: f64,
        center: Point,
    ) -> Vec<(Point, Point)> {
        let (s, c) = orientation.sin_cos();
        let along = [c, s];
        let across = [-s, c];
        (0..lines)
            .map(|i| {
                let off = if lines == 1 { 0.0 } else { -0.5 * span + span * i as f64 / (lines - 1) as f64 };
                let mid = [center[0] + off * across[0], center[1] + off * across[1]];
                let h = 0.5 * length;
                ([mid[0] - h * along[0], mid[1] - h * along[1]], [mid[0] + h * along[0], mid[1] + h * along[1]])
            })
            .collect()
    }

    fn rectangle_corners(width: f64, height: f64, center: Point, rotation: f64) -> [Point; 4] {
        let (hw, hh) = (0.5 * width, 0.5 * height);
        [[-hw, -hh], [hw, -hh], [hw, hh], [-hw, hh]].map(|p| {
            let r = rotate(p, rotation);
            [r[0] + center[0], r[1] + center[1]]
        })
    }

    /// Points whose smallest enclosing circle encloses the aperture (exactly
    /// for polygonal kinds, approximately for arcs).
    fn hull_points(&self) -> Vec<Point> {
        match self {
            Aperture::Segment { length, orientation, center } => {
                let (s, c) = orientation.sin_cos();
                let h = 0.5 * length;
                vec![[center[0] - h * c, center[1] - h * s], [center[0] + h * c, center[1] + h * s]]
            }
            Aperture::Circle { center, .. } | Aperture::Disk { center, .. } => vec![*center],
            Aperture::Rectangle { width, height, center, rotation } => {
                Self::rectangle_corners(*width, *height, *center, *rotation).to_vec()
            }
            Aperture::PiecewiseCurve { pieces } => pieces
                .iter()
                .flat_map(|p| match p {
                    CurvePiece::Line { from, to } => vec![*from, *to],
                    CurvePiece::Arc { .. } => (0..=ARC_SAMPLES).map(|k| p.at(k as f64 / ARC_SAMPLES as f64)).collect(),
                })
                .collect(),
            Aperture::ParallelLines { lines, length, span, orientation, center } => {
                Self::parallel_line_endpoints(*lines, *length, *span, *orientation, *center)
                    .into_iter()
                    .flat_map(|(a, b)| [a, b])
                    .collect()
            }
            Aperture::DiscreteArray { positions } => positions.clone(),
        }
    }

    /// Exact `max_{x∈A} |x − c|`.
    pub fn max_distance_from(&self, c: Point) -> f64 {
        match self {
            Aperture::Circle { radius, center } | Aperture::Disk { radius, center } => {
                enclosing::dist(*center, c) + radius
            }
            Aperture::PiecewiseCurve { pieces } => pieces.iter().map(|p| p.farthest_from(c)).fold(0.0, f64::max),
            _ => self.hull_points().into_iter().map(|p| enclosing::dist(p, c)).fold(0.0, f64::max),
        }
    }

    /// Smallest enclosing circle. The radius is the exact farthest distance
    /// from the returned center, so the aperture always lies inside.
    pub fn enclosing_circle(&self) -> Circle {
        let center = match self {
            Aperture::Circle { center, .. } | Aperture::Disk { center, .. } => *center,
            _ => smallest_enclosing_circle(&self.hull_points()).center,
        };
        Circle { center, radius: self.max_distance_from(center) }
    }

    /// `r1`: radius of the smallest disk containing the aperture after centering.
    pub fn enclosing_radius(&self) -> f64 {
        self.enclosing_circle().radius
    }

    /// Aperture translated so its smallest enclosing circle is centered at the
    /// origin, together with the offset that was subtracted.
    pub fn centering_transform(&self) -> (Aperture, Point) {
        let offset = self.enclosing_circle().center;
        if offset == [0.0, 0.0] {
            return (self.clone(), offset);
        }
        (self.translated(offset), offset)
    }

    /// `count` antenna positions spread uniformly over the aperture:
    /// equispaced angles on a circle, endpoints-inclusive on a segment.
    pub fn uniform_positions(&self, count: usize) -> Result<Vec<Point>> {
        if count == 0 {
            return Err(Error::Domain("antenna count must be >= 1".into()));
        }
        match self {
            Aperture::Circle { radius, center } => Ok((0..count)
                .map(|k| {
                    let a = TAU * k as f64 / count as f64;
                    [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
                })
                .collect()),
            Aperture::Segment { length, orientation, center } => {
                let (s, c) = orientation.sin_cos();
                Ok((0..count)
                    .map(|k| {
                        let t = if count == 1 { 0.0 } else { -0.5 * length + length * k as f64 / (count - 1) as f64 };
                        [center[0] + t * c, center[1] + t * s]
                    })
                    .collect())
            }
            Aperture::DiscreteArray { positions } => Ok(positions.clone()),
            _ => Err(Error::Unsupported("uniform antenna placement is defined for circles and segments".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosing_radii() {
        assert!((Aperture::circle(1.0).unwrap().enclosing_radius() - 1.0).abs() < 1e-15);
        let sq = Aperture::rectangle(1.0, 1.0, [0.0, 0.0], 0.0).unwrap();
        assert!((sq.enclosing_radius() - 0.5f64.sqrt()).abs() < 1e-15);
        let pl = Aperture::parallel_lines(4, 1.0, 1.0, 0.0, [0.0, 0.0]).unwrap();
        assert!((pl.enclosing_radius() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(Aperture::point().enclosing_radius(), 0.0);
    }

    #[test]
    fn centering() {
        let seg = Aperture::segment_between([0.0, 0.0], [1.0, 0.0]).unwrap();
        let (c, off) = seg.centering_transform();
        assert!((off[0] - 0.5).abs() < 1e-15 && off[1].abs() < 1e-15);
        match c {
            Aperture::Segment { center, length, .. } => {
                assert!(center[0].abs() < 1e-15 && center[1].abs() < 1e-15);
                assert!((length - 1.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
        let disk = Aperture::disk(0.7).unwrap();
        let (d, off) = disk.centering_transform();
        assert_eq!(off, [0.0, 0.0]);
        assert_eq!(d, disk);

        let arr = Aperture::discrete_array(vec![[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let (a, off) = arr.centering_transform();
        assert_eq!(off, [1.0, 0.0]);
        assert_eq!(a, Aperture::DiscreteArray { positions: vec![[-1.0, 0.0], [1.0, 0.0]] });
    }

    #[test]
    fn arc_radius_is_exact() {
        // quarter arc of the unit circle: SEC is the chord's diameter circle
        let arc = CurvePiece::Arc { center: [0.0, 0.0], radius: 1.0, start: 0.0, end: TAU / 4.0 };
        let a = Aperture::piecewise_curve(vec![arc.clone()]).unwrap();
        let c = a.enclosing_circle();
        assert!((c.radius - 0.5f64.sqrt()).abs() < 1e-12, "{c:?}");
        for k in 0..=1000 {
            let p = arc.at(k as f64 / 1000.0);
            assert!(enclosing::dist(p, c.center) <= c.radius + 1e-15);
        }
        // semicircle closed by its diameter
        let d = Aperture::piecewise_curve(vec![
            CurvePiece::Arc { center: [0.0, 0.0], radius: 1.0, start: 0.0, end: TAU / 2.0 },
            CurvePiece::Line { from: [-1.0, 0.0], to: [1.0, 0.0] },
        ])
        .unwrap();
        assert!((d.enclosing_radius() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Aperture::circle(-1.0).is_err());
        assert!(Aperture::segment(f64::NAN, 0.0, [0.0, 0.0]).is_err());
        assert!(Aperture::parallel_lines(0, 1.0, 1.0, 0.0, [0.0, 0.0]).is_err());
        assert!(Aperture::discrete_array(vec![]).is_err());
        assert!(Aperture::piecewise_curve(vec![
            CurvePiece::Line { from: [0.0, 0.0], to: [1.0, 0.0] },
            CurvePiece::Line { from: [1.1, 0.0], to: [2.0, 0.0] },
        ])
        .is_err());
    }

    #[test]
    fn uniform_positions() {
        let c = Aperture::circle(1.0).unwrap().uniform_positions(4).unwrap();
        assert!((c[1][1] - 1.0).abs() < 1e-15);
        let s = Aperture::segment(2.0, 0.0, [0.0, 0.0]).unwrap().uniform_positions(3).unwrap();
        assert_eq!(s, vec![[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        assert!(Aperture::disk(1.0).unwrap().uniform_positions(3).is_err());
    }
}
