//! UAV flight path design for a given set of caching ground nodes.

mod cover;
mod refine;
mod segment;
mod tour;

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{polyline_length, Point};
use crate::svg::{Bounds, SvgDoc};

pub use cover::{place_cover, DiskCover};
pub use refine::{center_route_length, refine_waypoints, REFINE_TOLERANCE};
pub use segment::{segment_path, PathSegment, PathSegments};
pub use tour::{route_length, tour_order, MAX_EXCHANGES};

/// Ordered horizontal waypoints flown in straight lines at constant altitude.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FlightPath {
    pub waypoints: Vec<Point>,
    pub total_length: f64,
}

impl FlightPath {
    /// Closed paths repeat the first waypoint at the end.
    pub fn new(mut waypoints: Vec<Point>, closed: bool) -> Self {
        if closed && waypoints.len() > 2 {
            waypoints.push(waypoints[0]);
        }
        let total_length = polyline_length(&waypoints);
        Self { waypoints, total_length }
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "x", "y"])?;
        for (i, p) in self.waypoints.iter().enumerate() {
            w.write_record([i.to_string(), p.x.to_string(), p.y.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Overlay of all ground nodes, coverage disks of the caching ones and
    /// the path itself.
    pub fn to_svg(&self, gns: &[Point], caching: &[usize], radius: f64) -> String {
        let mut bounds = Bounds::from_points(gns.iter().chain(&self.waypoints).copied());
        bounds.pad(radius);
        let mut doc = SvgDoc::new(640.0, 640.0, bounds);
        for &k in caching {
            doc.circle(gns[k], radius, "none", "#9ecae1");
        }
        for (k, &p) in gns.iter().enumerate() {
            let fill = if caching.contains(&k) { "#d62728" } else { "#555555" };
            doc.dot(p, 3.0, fill);
        }
        doc.polyline(&self.waypoints, "#1f77b4", 2.0);
        for &p in &self.waypoints {
            doc.dot(p, 2.5, "#1f77b4");
        }
        doc.finish()
    }
}

/// Path that flies over every listed ground node itself, ordered by the
/// same nearest-neighbour plus 2-opt heuristic.
pub fn tsp_over_gns(points: &[Point], start: Point, closed: bool) -> FlightPath {
    let order = tour_order(points, start, closed);
    FlightPath::new(order.iter().map(|&i| points[i]).collect(), closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_gn_hover() {
        let p = tsp_over_gns(&[Point::new(7.0, 9.0)], Point::default(), false);
        assert_eq!(p.waypoints, vec![Point::new(7.0, 9.0)]);
        assert_eq!(p.total_length, 0.0);
    }

    #[test]
    fn csv_and_svg_render() {
        let p = FlightPath::new(vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0)], false);
        assert_eq!(p.total_length, 5.0);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,x,y\n0,0,0\n1,3,4"));
        let svg = p.to_svg(&[Point::new(0.0, 0.0)], &[0], 1.0);
        assert!(svg.contains("<polyline") && svg.contains("<circle"));
    }
}
