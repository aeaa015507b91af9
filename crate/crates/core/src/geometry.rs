//! Planar geometry shared by the radio model and the trajectory planner.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Relative slack used when testing whether a point lies inside a disk.
pub(crate) const CONTAINS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

pub fn centroid(points: &[Point]) -> Point {
    if points.is_empty() {
        return Point::default();
    }
    let n = points.len() as f64;
    let sum = points.iter().fold(Point::default(), |acc, &p| acc + p);
    sum * (1.0 / n)
}

/// Sum of consecutive Euclidean distances.
pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

pub(crate) fn within(p: Point, center: Point, radius: f64) -> bool {
    p.dist(center) <= radius * (1.0 + CONTAINS_EPS) + CONTAINS_EPS
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point) -> bool {
        within(p, self.center, self.radius)
    }

    fn from_two(a: Point, b: Point) -> Circle {
        let center = a.lerp(b, 0.5);
        Circle { center, radius: center.dist(a).max(center.dist(b)) }
    }

    fn from_three(a: Point, b: Point, c: Point) -> Option<Circle> {
        let bx = b.x - a.x;
        let by = b.y - a.y;
        let cx = c.x - a.x;
        let cy = c.y - a.y;
        let d = 2.0 * (bx * cy - by * cx);
        if d.abs() < 1e-12 {
            return None;
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / d;
        let uy = (bx * c2 - cx * b2) / d;
        let center = Point::new(a.x + ux, a.y + uy);
        let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
        Some(Circle { center, radius })
    }
}

/// Smallest circle enclosing every point (incremental Welzl construction).
///
/// Returns `None` for an empty input.
pub fn min_enclosing_circle(points: &[Point]) -> Option<Circle> {
    let (&first, rest) = points.split_first()?;
    let mut c = Circle { center: first, radius: 0.0 };
    for (i, &p) in rest.iter().enumerate() {
        if c.contains(p) {
            continue;
        }
        c = Circle { center: p, radius: 0.0 };
        for j in 0..=i {
            let q = points[j];
            if c.contains(q) {
                continue;
            }
            c = Circle::from_two(p, q);
            for &r in &points[..j] {
                if c.contains(r) {
                    continue;
                }
                c = Circle::from_three(p, q, r).unwrap_or_else(|| {
                    // collinear: the widest pair spans the circle
                    let pairs = [(p, q), (p, r), (q, r)];
                    let (a, b) = pairs.into_iter().max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1))).unwrap();
                    Circle::from_two(a, b)
                });
            }
        }
    }
    Some(c)
}

/// Parameters `t` in `[0, 1]` where the segment `a + t (b - a)` crosses the
/// circle of `radius` around `center`. Tangencies and misses yield nothing.
pub fn segment_circle_crossings(a: Point, b: Point, center: Point, radius: f64) -> Vec<f64> {
    let d = b - a;
    let f = a - center;
    let qa = d.dot(d);
    if qa == 0.0 {
        return Vec::new();
    }
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // numerically stable root pair
    let q = -0.5 * (qb + qb.signum() * sq);
    let (r1, r2) = if q == 0.0 {
        let r = (-qc / qa).max(0.0).sqrt();
        (-r, r)
    } else {
        let r1 = q / qa;
        let r2 = qc / q;
        (r1.min(r2), r1.max(r2))
    };
    [r1, r2].into_iter().filter(|t| *t > 0.0 && *t < 1.0).collect()
}

/// Feasible region formed by intersecting equal-radius disks.
#[derive(Debug, Clone)]
pub struct DiskIntersection {
    centers: Vec<Point>,
    radius: f64,
}

impl DiskIntersection {
    pub fn new(centers: Vec<Point>, radius: f64) -> Self {
        Self { centers, radius }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.centers.iter().all(|&c| within(p, c, self.radius))
    }

    /// Euclidean projection onto the region, or `None` when it is empty.
    ///
    /// The projection of an outside point lands either on a single boundary
    /// circle or on a vertex where two circles meet; all such candidates are
    /// enumerated and the nearest feasible one is returned.
    pub fn project(&self, p: Point) -> Option<Point> {
        if self.contains(p) {
            return Some(p);
        }
        let r = self.radius;
        let mut best: Option<(f64, Point)> = None;
        let mut consider = |q: Point| {
            if self.contains(q) {
                let d = q.dist2(p);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, q));
                }
            }
        };
        for &c in &self.centers {
            let v = p - c;
            let n = v.norm();
            if n > r {
                consider(c + v * (r / n));
            }
        }
        for i in 0..self.centers.len() {
            for j in i + 1..self.centers.len() {
                for q in circle_intersections(self.centers[i], self.centers[j], r) {
                    consider(q);
                }
            }
        }
        best.map(|(_, q)| q)
    }

    /// Parameter interval of the segment `a -> b` lying inside the region.
    pub fn clip_segment(&self, a: Point, b: Point) -> Option<(f64, f64)> {
        let d = b - a;
        let qa = d.dot(d);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for &c in &self.centers {
            let f = a - c;
            if qa == 0.0 {
                if !within(a, c, self.radius) {
                    return None;
                }
                continue;
            }
            let qb = 2.0 * f.dot(d);
            let qc = f.dot(f) - self.radius * self.radius;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return None;
            }
            let sq = disc.sqrt();
            lo = lo.max((-qb - sq) / (2.0 * qa));
            hi = hi.min((-qb + sq) / (2.0 * qa));
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }
}

fn circle_intersections(a: Point, b: Point, r: f64) -> Vec<Point> {
    let d = a.dist(b);
    if d == 0.0 || d > 2.0 * r {
        return Vec::new();
    }
    let mid = a.lerp(b, 0.5);
    let h = (r * r - d * d / 4.0).max(0.0).sqrt();
    let u = (b - a) * (1.0 / d);
    let perp = Point::new(-u.y, u.x);
    vec![mid + perp * h, mid - perp * h]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mec_of_pair_and_triangle() {
        let c = min_enclosing_circle(&[Point::new(0.0, 0.0), Point::new(2.0, 0.0)]).unwrap();
        assert!((c.radius - 1.0).abs() < 1e-12);
        let tri = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 3f64.sqrt())];
        let c = min_enclosing_circle(&tri).unwrap();
        assert!((c.radius - 2.0 / 3f64.sqrt()).abs() < 1e-9);
        // obtuse triangle: circle on the long side
        let obtuse = [Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(2.0, 0.5)];
        let c = min_enclosing_circle(&obtuse).unwrap();
        assert!((c.radius - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mec_encloses_everything() {
        let pts: Vec<Point> = (0..40)
            .map(|i| {
                let t = i as f64 * 0.77;
                Point::new(t.sin() * 10.0 + (i % 7) as f64, t.cos() * 6.0)
            })
            .collect();
        let c = min_enclosing_circle(&pts).unwrap();
        assert!(pts.iter().all(|&p| c.contains(p)));
    }

    #[test]
    fn crossings_through_center() {
        let ts = segment_circle_crossings(Point::new(-2.0, 0.0), Point::new(2.0, 0.0), Point::default(), 1.0);
        assert_eq!(ts.len(), 2);
        assert!((ts[0] - 0.25).abs() < 1e-15);
        assert!((ts[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn projection_onto_lens() {
        let region = DiskIntersection::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)], 1.0);
        let q = region.project(Point::new(0.5, 5.0)).unwrap();
        // the lens apex
        assert!((q.x - 0.5).abs() < 1e-12);
        assert!((q.y - 0.75f64.sqrt()).abs() < 1e-12);
        let q = region.project(Point::new(-3.0, 0.0)).unwrap();
        assert!((q.x - 0.0).abs() < 1e-12 && q.y.abs() < 1e-12);
    }
}
