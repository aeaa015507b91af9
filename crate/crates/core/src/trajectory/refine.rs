//! Waypoint refinement: slide each cluster's service point inside the
//! region where all of the cluster's ground nodes stay in coverage, so the
//! flight between clusters gets shorter.

use crate::geometry::{polyline_length, DiskIntersection, Point};

use super::cover::DiskCover;
use super::FlightPath;

/// Fixed-point tolerance on waypoint movement, meters.
pub const REFINE_TOLERANCE: f64 = 1e-3;
const MAX_SWEEPS: usize = 200;
const MAX_PROJECTION_STEPS: usize = 200;

/// One service point per visited cluster, in tour order.
///
/// `gn_points` are the positions the cover was built from, `order` the visit
/// order over cover centers. The single-cluster case projects `start` onto the
/// feasible region. Never longer than the path through the cover centers.
pub fn refine_waypoints(
    gn_points: &[Point],
    cover: &DiskCover,
    order: &[usize],
    radius: f64,
    start: Point,
    closed: bool,
) -> FlightPath {
    let clusters = cover.clusters();
    let regions: Vec<DiskIntersection> = order
        .iter()
        .map(|&g| DiskIntersection::new(clusters[g].iter().map(|&i| gn_points[i]).collect(), radius))
        .collect();
    let mut pts: Vec<Point> = order.iter().map(|&g| cover.centers[g]).collect();
    let n = pts.len();

    if n == 1 {
        if let Some(p) = regions[0].project(start) {
            pts[0] = p;
        }
        return FlightPath::new(pts, closed);
    }

    let wrap = closed && n > 2;
    for _ in 0..MAX_SWEEPS {
        let mut moved: f64 = 0.0;
        for g in 0..n {
            let prev = if g > 0 {
                Some(pts[g - 1])
            } else if wrap {
                Some(pts[n - 1])
            } else {
                None
            };
            let next = if g + 1 < n {
                Some(pts[g + 1])
            } else if wrap {
                Some(pts[0])
            } else {
                None
            };
            let cur = pts[g];
            let region = &regions[g];
            let best = match (prev, next) {
                (Some(a), Some(b)) => best_between(region, a, b, cur),
                (Some(a), None) | (None, Some(a)) => {
                    let cand = region.project(a).unwrap_or(cur);
                    if cand.dist(a) < cur.dist(a) {
                        cand
                    } else {
                        cur
                    }
                }
                (None, None) => cur,
            };
            moved = moved.max(best.dist(cur));
            pts[g] = best;
        }
        if moved < REFINE_TOLERANCE {
            break;
        }
    }
    debug_assert!(pts.iter().zip(&regions).all(|(&p, r)| r.contains(p)));
    FlightPath::new(pts, closed)
}

/// Point of `region` minimising the detour `|x - a| + |x - b|`, never worse
/// than `cur`.
fn best_between(region: &DiskIntersection, a: Point, b: Point, cur: Point) -> Point {
    let detour = |x: Point| x.dist(a) + x.dist(b);
    let mut best = cur;
    let mut best_cost = detour(cur);
    let mut offer = |x: Point| {
        let c = detour(x);
        if c < best_cost - 1e-12 {
            best = x;
            best_cost = c;
        }
    };

    if let Some((lo, hi)) = region.clip_segment(a, b) {
        // the chord itself passes through the region: no detour needed
        let d = b - a;
        let len2 = d.dot(d);
        let t = if len2 > 0.0 { (cur - a).dot(d) / len2 } else { 0.0 };
        offer(a.lerp(b, t.clamp(lo, hi)));
        return best;
    }

    // alternate between the chord and the region until the pair settles
    let mut on_chord = closest_on_segment(a, b, cur);
    let mut inside = cur;
    for _ in 0..MAX_PROJECTION_STEPS {
        let Some(next_inside) = region.project(on_chord) else { break };
        let step = next_inside.dist(inside);
        inside = next_inside;
        on_chord = closest_on_segment(a, b, inside);
        if step < REFINE_TOLERANCE {
            break;
        }
    }
    offer(inside);
    if let Some(p) = region.project(a) {
        offer(p);
    }
    if let Some(p) = region.project(b) {
        offer(p);
    }
    best
}

fn closest_on_segment(a: Point, b: Point, p: Point) -> Point {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return a;
    }
    a.lerp(b, ((p - a).dot(d) / len2).clamp(0.0, 1.0))
}

/// Length of the path through the cover centers in `order`.
pub fn center_route_length(cover: &DiskCover, order: &[usize], closed: bool) -> f64 {
    let mut pts: Vec<Point> = order.iter().map(|&g| cover.centers[g]).collect();
    if closed && pts.len() > 2 {
        pts.push(pts[0]);
    }
    polyline_length(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::cover::place_cover;

    #[test]
    fn two_singletons_stop_at_disk_edges() {
        let pts = [Point::new(0.0, 0.0), Point::new(1000.0, 0.0)];
        let cover = place_cover(&pts, 300.0);
        assert_eq!(cover.len(), 2);
        let path = refine_waypoints(&pts, &cover, &[0, 1], 300.0, Point::new(500.0, 0.0), false);
        assert!((path.total_length - 400.0).abs() < 1e-6, "{}", path.total_length);
    }

    #[test]
    fn single_cluster_projects_start() {
        let pts = [Point::new(0.0, 0.0)];
        let cover = place_cover(&pts, 100.0);
        let path = refine_waypoints(&pts, &cover, &[0], 100.0, Point::new(300.0, 0.0), false);
        assert_eq!(path.waypoints.len(), 1);
        assert!((path.waypoints[0].x - 100.0).abs() < 1e-9);
        assert_eq!(path.total_length, 0.0);
    }

    #[test]
    fn chord_through_middle_region_is_straight() {
        let pts = [Point::new(0.0, 0.0), Point::new(500.0, 50.0), Point::new(1000.0, 0.0)];
        let cover = place_cover(&pts, 100.0);
        assert_eq!(cover.len(), 3);
        let order = [cover.assignment[0], cover.assignment[1], cover.assignment[2]];
        let path = refine_waypoints(&pts, &cover, &order, 100.0, Point::default(), false);
        assert!(path.total_length <= center_route_length(&cover, &order, false));
        assert!((path.total_length - 800.0).abs() < 0.5, "{}", path.total_length);
    }
}
