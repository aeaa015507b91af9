//! Visiting order over a set of points: nearest-neighbour construction
//! followed by 2-opt and Or-opt local search.

use crate::geometry::Point;

/// Upper bound on local-search moves before the current order is accepted.
pub const MAX_EXCHANGES: usize = 10_000;

/// Length of the path visiting `points` in `order`, optionally closed.
pub fn route_length(points: &[Point], order: &[usize], closed: bool) -> f64 {
    let open: f64 = order.windows(2).map(|w| points[w[0]].dist(points[w[1]])).sum();
    match (closed, order.first(), order.last()) {
        (true, Some(&a), Some(&b)) if order.len() > 2 => open + points[a].dist(points[b]),
        _ => open,
    }
}

/// Order in which to visit `points`, starting near `start`.
///
/// The tour is open unless `closed` is set. Deterministic: ties resolve to
/// the lower index.
pub fn tour_order(points: &[Point], start: Point, closed: bool) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut here = start;
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| !used[i])
            .min_by(|&a, &b| points[a].dist2(here).total_cmp(&points[b].dist2(here)).then(a.cmp(&b)))
            .unwrap();
        used[next] = true;
        order.push(next);
        here = points[next];
    }
    let mut budget = MAX_EXCHANGES;
    loop {
        if closed {
            two_opt_closed(points, &mut order, &mut budget);
        } else {
            two_opt_open(points, &mut order, &mut budget);
        }
        if budget == 0 || !or_opt(points, &mut order, closed) {
            break;
        }
        budget -= 1;
    }
    order
}

/// Length added by placing the run `first..last` between `a` and `b`.
fn link_cost(points: &[Point], a: Option<usize>, b: Option<usize>, first: usize, last: usize) -> f64 {
    let d = |x: usize, y: usize| points[x].dist(points[y]);
    match (a, b) {
        (Some(a), Some(b)) => d(a, first) + d(last, b) - d(a, b),
        (Some(a), None) => d(a, first),
        (None, Some(b)) => d(last, b),
        (None, None) => 0.0,
    }
}

/// Moves one run of up to three consecutive stops to its best other place,
/// possibly reversed. Applies the first improving move found.
fn or_opt(points: &[Point], order: &mut Vec<usize>, closed: bool) -> bool {
    let n = order.len();
    if n < 3 || (closed && n < 5) {
        return false;
    }
    for len in 1..=3.min(n - 2) {
        for i in 0..=n - len {
            let run: Vec<usize> = order[i..i + len].to_vec();
            let (before, after) = if closed {
                (Some(order[(i + n - 1) % n]), Some(order[(i + len) % n]))
            } else {
                (i.checked_sub(1).map(|j| order[j]), order.get(i + len).copied())
            };
            let saved = link_cost(points, before, after, run[0], run[len - 1]);
            let rest: Vec<usize> = order[..i].iter().chain(&order[i + len..]).copied().collect();
            let m = rest.len();
            let slots = if closed { m } else { m + 1 };
            for p in 0..slots {
                if p == i {
                    continue;
                }
                let (a, b) = if closed {
                    (Some(rest[(p + m - 1) % m]), Some(rest[p % m]))
                } else {
                    (p.checked_sub(1).map(|j| rest[j]), rest.get(p).copied())
                };
                if closed && a == before && b == after {
                    continue;
                }
                let forward = link_cost(points, a, b, run[0], run[len - 1]);
                let backward = link_cost(points, a, b, run[len - 1], run[0]);
                let (added, reverse) = if backward < forward - 1e-12 { (backward, true) } else { (forward, false) };
                if added - saved < -1e-9 {
                    let mut moved = run.clone();
                    if reverse {
                        moved.reverse();
                    }
                    let mut next = rest[..p].to_vec();
                    next.extend(moved);
                    next.extend_from_slice(&rest[p..]);
                    *order = next;
                    return true;
                }
            }
        }
    }
    false
}

fn two_opt_open(points: &[Point], order: &mut [usize], budget: &mut usize) {
    let n = order.len();
    let mut improved = true;
    while improved && *budget > 0 {
        improved = false;
        for i in 0..n {
            for j in i + 1..n {
                let pi = points[order[i]];
                let pj = points[order[j]];
                let mut delta = 0.0;
                if i > 0 {
                    let prev = points[order[i - 1]];
                    delta += prev.dist(pj) - prev.dist(pi);
                }
                if j + 1 < n {
                    let next = points[order[j + 1]];
                    delta += pi.dist(next) - pj.dist(next);
                }
                if delta < -1e-9 {
                    order[i..=j].reverse();
                    *budget -= 1;
                    improved = true;
                    if *budget == 0 {
                        return;
                    }
                }
            }
        }
    }
}

fn two_opt_closed(points: &[Point], order: &mut [usize], budget: &mut usize) {
    let n = order.len();
    if n < 4 {
        return;
    }
    let mut improved = true;
    while improved && *budget > 0 {
        improved = false;
        for i in 1..n - 1 {
            for j in i + 1..n {
                let prev = points[order[i - 1]];
                let next = points[order[(j + 1) % n]];
                let pi = points[order[i]];
                let pj = points[order[j]];
                let delta = prev.dist(pj) + pi.dist(next) - prev.dist(pi) - pj.dist(next);
                if delta < -1e-9 {
                    order[i..=j].reverse();
                    *budget -= 1;
                    improved = true;
                    if *budget == 0 {
                        return;
                    }
                }
            }
        }
    }
}
