//! Smallest enclosing circle of a finite point set (Welzl-style incremental
//! construction).

use super::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

const REL_EPS: f64 = 1e-14;

impl Circle {
    fn contains(&self, p: Point) -> bool {
        dist(self.center, p) <= self.radius * (1.0 + REL_EPS) + 1e-300
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn diameter(a: Point, b: Point) -> Circle {
    let center = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    Circle { center, radius: dist(center, a).max(dist(center, b)) }
}

fn circumcircle(a: Point, b: Point, c: Point) -> Option<Circle> {
    let ox = (a[0].min(b[0]).min(c[0]) + a[0].max(b[0]).max(c[0])) / 2.0;
    let oy = (a[1].min(b[1]).min(c[1]) + a[1].max(b[1]).max(c[1])) / 2.0;
    let (ax, ay) = (a[0] - ox, a[1] - oy);
    let (bx, by) = (b[0] - ox, b[1] - oy);
    let (cx, cy) = (c[0] - ox, c[1] - oy);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0.0 {
        return None;
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let center = [x, y];
    let radius = dist(center, a).max(dist(center, b)).max(dist(center, c));
    Some(Circle { center, radius })
}

/// Smallest circle containing every point. Returns a zero circle at the
/// origin for an empty set.
pub fn smallest_enclosing_circle(points: &[Point]) -> Circle {
    let mut circle: Option<Circle> = None;
    for (i, &p) in points.iter().enumerate() {
        if circle.is_none_or(|c| !c.contains(p)) {
            circle = Some(with_one_boundary(&points[..i], p));
        }
    }
    circle.unwrap_or(Circle { center: [0.0, 0.0], radius: 0.0 })
}

fn with_one_boundary(points: &[Point], p: Point) -> Circle {
    let mut c = Circle { center: p, radius: 0.0 };
    for (i, &q) in points.iter().enumerate() {
        if !c.contains(q) {
            c = if c.radius == 0.0 { diameter(p, q) } else { with_two_boundary(&points[..i], p, q) };
        }
    }
    c
}

fn with_two_boundary(points: &[Point], p: Point, q: Point) -> Circle {
    let base = diameter(p, q);
    let mut left: Option<Circle> = None;
    let mut right: Option<Circle> = None;
    for &r in points {
        if base.contains(r) {
            continue;
        }
        let side = cross(p, q, r);
        let Some(c) = circumcircle(p, q, r) else { continue };
        if side > 0.0 {
            if left.is_none_or(|l| cross(p, q, c.center) > cross(p, q, l.center)) {
                left = Some(c);
            }
        } else if side < 0.0 && right.is_none_or(|l| cross(p, q, c.center) < cross(p, q, l.center)) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}
