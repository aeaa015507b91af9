//! Virtual base station placement: cover a set of ground nodes with as few
//! radius-`D_U` disks as the greedy construction manages.

use crate::geometry::{centroid, min_enclosing_circle, within, Point};

/// Disk centers and, for each input point, the index of its covering center.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskCover {
    pub centers: Vec<Point>,
    /// `assignment[i]` is the center covering input point `i`.
    pub assignment: Vec<usize>,
}

impl DiskCover {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Input indices assigned to each center.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.centers.len()];
        for (i, &g) in self.assignment.iter().enumerate() {
            out[g].push(i);
        }
        out
    }
}

/// Greedy outside-in disk cover.
///
/// Each round seeds a disk at the uncovered point lying farthest from the
/// centroid of the remaining uncovered points, grows the group with the
/// nearest uncovered points while their minimum enclosing circle stays within
/// `radius`, centers the disk on that circle and absorbs every other
/// uncovered point it happens to reach.
pub fn place_cover(points: &[Point], radius: f64) -> DiskCover {
    let mut assignment = vec![usize::MAX; points.len()];
    let mut centers = Vec::new();
    let mut uncovered: Vec<usize> = (0..points.len()).collect();

    while !uncovered.is_empty() {
        let rest: Vec<Point> = uncovered.iter().map(|&i| points[i]).collect();
        let mid = centroid(&rest);
        let seed = *uncovered
            .iter()
            .max_by(|&&a, &&b| {
                // ties go to the lower index
                points[a].dist2(mid).total_cmp(&points[b].dist2(mid)).then(b.cmp(&a))
            })
            .unwrap();
        let anchor = points[seed];

        let mut near: Vec<usize> = uncovered
            .iter()
            .copied()
            .filter(|&i| i != seed && points[i].dist(anchor) <= 2.0 * radius * (1.0 + 1e-12))
            .collect();
        near.sort_by(|&a, &b| points[a].dist2(anchor).total_cmp(&points[b].dist2(anchor)).then(a.cmp(&b)));

        let mut group = vec![anchor];
        let mut center = anchor;
        for i in near {
            group.push(points[i]);
            let c = min_enclosing_circle(&group).unwrap();
            if c.radius <= radius {
                center = c.center;
            } else {
                group.pop();
            }
        }

        let g = centers.len();
        centers.push(center);
        uncovered.retain(|&i| {
            if within(points[i], center, radius) {
                assignment[i] = g;
                false
            } else {
                true
            }
        });
        // the seed is always within reach of its own disk
        if assignment[seed] == usize::MAX {
            assignment[seed] = g;
            uncovered.retain(|&i| i != seed);
        }
    }
    DiskCover { centers, assignment }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cluster() {
        let pts = [Point::new(0.0, 0.0), Point::new(50.0, 20.0), Point::new(10.0, 80.0)];
        let cover = place_cover(&pts, 100.0);
        assert_eq!(cover.len(), 1);
        assert!(pts.iter().all(|&p| p.dist(cover.centers[0]) <= 100.0 + 1e-9));
    }

    #[test]
    fn far_apart_pair() {
        let pts = [Point::new(0.0, 0.0), Point::new(300.0, 0.0)];
        let cover = place_cover(&pts, 100.0);
        assert_eq!(cover.len(), 2);
        let mut cs = cover.centers.clone();
        cs.sort_by(|a, b| a.x.total_cmp(&b.x));
        assert_eq!(cs, vec![pts[0], pts[1]]);
    }

    #[test]
    fn empty_input() {
        assert!(place_cover(&[], 10.0).is_empty());
    }
}
