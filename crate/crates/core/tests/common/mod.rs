//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use uavcache::{CachingPolicy, Instance, Point, Scenario, SystemParams};

pub fn params(k: usize, n: usize, q: usize) -> SystemParams {
    SystemParams { num_gns: k, num_files: n, cache_capacity: q, ..Default::default() }
}

pub fn random_points<R: Rng>(rng: &mut R, count: usize, side: f64) -> Vec<Point> {
    (0..count).map(|_| Point::new(rng.gen::<f64>() * side, rng.gen::<f64>() * side)).collect()
}

pub fn random_instance<R: Rng>(rng: &mut R, k: usize, n: usize, q: usize, side: f64) -> Instance {
    let pts = random_points(rng, k, side);
    Instance::new(Scenario::with_positions(params(k, n, q), pts).unwrap()).unwrap()
}

/// Every placement that respects the storage limit, including the empty one.
pub fn all_policies(k: usize, n: usize, q: usize) -> Vec<CachingPolicy> {
    let subsets: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize <= q).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        let mut p = CachingPolicy::new(k, n, q);
        for (gn, &c) in choice.iter().enumerate() {
            for file in 0..n {
                if subsets[c] & (1 << file) != 0 {
                    p.insert(gn, file).unwrap();
                }
            }
        }
        out.push(p);
        // odometer increment
        let mut i = 0;
        while i < k {
            choice[i] += 1;
            if choice[i] < subsets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

/// Every permutation of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

fn path_len(points: &[Point], order: &[usize], closed: bool) -> f64 {
    let mut total = 0.0;
    for w in order.windows(2) {
        total += points[w[0]].dist(points[w[1]]);
    }
    if closed && order.len() > 2 {
        total += points[order[0]].dist(points[order[order.len() - 1]]);
    }
    total
}

/// Shortest Hamiltonian path (open) or cycle (closed) by enumeration.
pub fn brute_force_tour(points: &[Point], closed: bool) -> f64 {
    permutations(points.len()).iter().map(|o| path_len(points, o, closed)).fold(f64::INFINITY, f64::min)
}

/// Parameters `t` in (0, 1) where segment `a -> b` crosses the circle,
/// from the quadratic formula.
pub fn circle_crossings(a: Point, b: Point, c: Point, r: f64) -> Vec<f64> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let (fx, fy) = (a.x - c.x, a.y - c.y);
    let qa = dx * dx + dy * dy;
    let qb = 2.0 * (fx * dx + fy * dy);
    let qc = fx * fx + fy * fy - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc <= 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)].into_iter().filter(|&t| t > 0.0 && t < 1.0).collect()
}
