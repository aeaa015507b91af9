//! Split a flight path into pieces over which the set of in-coverage caching
//! ground nodes does not change.

use crate::error::{Error, Result};
use crate::geometry::{segment_circle_crossings, within, Point};

use super::FlightPath;

/// A maximal stretch of path with a constant contact set.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSegment {
    /// Arc-length position where the segment begins, meters.
    pub start: f64,
    /// Meters of path covered; zero for a pure hover point.
    pub length: f64,
    /// Ground nodes (global indices, ascending) within coverage throughout.
    pub contact: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSegments {
    pub segments: Vec<PathSegment>,
}

impl PathSegments {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PathSegment> {
        self.segments.iter()
    }
}

fn contact_at(p: Point, gns: &[(usize, Point)], radius: f64) -> Vec<usize> {
    let mut c: Vec<usize> = gns.iter().filter(|(_, w)| within(p, *w, radius)).map(|(k, _)| *k).collect();
    c.sort_unstable();
    c
}

/// Cut `path` at every coverage-circle crossing of the given ground nodes.
///
/// A zero-length hover piece is emitted at each waypoint so a ground node
/// touched only at a waypoint still gets schedulable contact; consecutive
/// pieces sharing a contact set are merged.
pub fn segment_path(path: &FlightPath, gns: &[(usize, Point)], radius: f64) -> Result<PathSegments> {
    let mut pieces: Vec<PathSegment> = Vec::new();
    let mut push = |piece: PathSegment| match pieces.last_mut() {
        Some(last) if last.contact == piece.contact => last.length += piece.length,
        _ => pieces.push(piece),
    };

    let wps = &path.waypoints;
    let mut offset = 0.0;
    for (i, &wp) in wps.iter().enumerate() {
        push(PathSegment { start: offset, length: 0.0, contact: contact_at(wp, gns, radius) });
        let Some(&next) = wps.get(i + 1) else { break };
        let leg = wp.dist(next);
        if leg == 0.0 {
            continue;
        }
        let mut cuts = vec![0.0, 1.0];
        for (_, w) in gns {
            cuts.extend(segment_circle_crossings(wp, next, *w, radius));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() * leg < 1e-9);
        for pair in cuts.windows(2) {
            let (t0, t1) = (pair[0], pair[1]);
            let len = (t1 - t0) * leg;
            if len <= 1e-9 {
                continue;
            }
            let mid = wp.lerp(next, 0.5 * (t0 + t1));
            push(PathSegment { start: offset + t0 * leg, length: len, contact: contact_at(mid, gns, radius) });
        }
        offset += leg;
    }

    for (k, _) in gns {
        if !pieces.iter().any(|s| s.contact.binary_search(k).is_ok()) {
            return Err(Error::Contract(format!("path does not cover GN {k}")));
        }
    }
    Ok(PathSegments { segments: pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(points: &[(f64, f64)]) -> FlightPath {
        FlightPath::new(points.iter().map(|&(x, y)| Point::new(x, y)).collect(), false)
    }

    #[test]
    fn inside_one_disk() {
        let s = segment_path(&path(&[(0.0, 0.0), (10.0, 0.0)]), &[(4, Point::new(5.0, 0.0))], 100.0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.segments[0].contact, vec![4]);
        assert!((s.segments[0].length - 10.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_one_disk() {
        let s = segment_path(&path(&[(-300.0, 0.0), (300.0, 0.0)]), &[(0, Point::new(0.0, 0.0))], 100.0).unwrap();
        let contacts: Vec<_> = s.iter().map(|p| p.contact.clone()).collect();
        assert_eq!(contacts, vec![vec![], vec![0], vec![]]);
        assert!((s.segments[1].start - 200.0).abs() < 1e-9);
        assert!((s.segments[1].length - 200.0).abs() < 1e-9);
    }

    #[test]
    fn uncovered_gn_is_a_contract_error() {
        let err = segment_path(&path(&[(0.0, 0.0)]), &[(7, Point::new(500.0, 0.0))], 100.0).unwrap_err();
        assert!(err.to_string().contains("path does not cover GN 7"));
    }

    #[test]
    fn hover_point_on_boundary_keeps_contact() {
        // waypoint exactly on the coverage circle of GN 1
        let s = segment_path(
            &path(&[(100.0, 0.0), (400.0, 0.0)]),
            &[(1, Point::new(0.0, 0.0)), (2, Point::new(500.0, 0.0))],
            100.0,
        )
        .unwrap();
        let contacts: Vec<_> = s.iter().map(|p| p.contact.clone()).collect();
        assert_eq!(contacts, vec![vec![1], vec![], vec![2]]);
        assert_eq!(s.segments[0].length, 0.0);
        assert!((s.total_length() - 300.0).abs() < 1e-9);
    }
}
