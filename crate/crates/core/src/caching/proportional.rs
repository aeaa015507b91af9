use rand::Rng;

use super::CachingPolicy;
use crate::scenario::Scenario;

/// Each node independently fills its storage by drawing files without
/// replacement, with probability proportional to its request popularity.
///
/// Files may end up uncached; callers inspect
/// [`CachingPolicy::uncached_files`].
pub fn random_proportional_policy<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> CachingPolicy {
    let k = scenario.num_gns();
    let n = scenario.num_files();
    let q = scenario.params.cache_capacity;
    let mut policy = CachingPolicy::new(k, n, q);
    for gn in 0..k {
        let mut weights: Vec<f64> = scenario.popularity.row(gn).to_vec();
        for _ in 0..q.min(n) {
            let total: f64 = weights.iter().sum();
            let pick = if total > 0.0 {
                let mut u = rng.gen::<f64>() * total;
                let mut chosen = None;
                for (i, &w) in weights.iter().enumerate() {
                    if w <= 0.0 {
                        continue;
                    }
                    chosen = Some(i);
                    if u < w {
                        break;
                    }
                    u -= w;
                }
                chosen
            } else {
                // only zero-popularity files remain
                (0..n).find(|&i| !policy.contains(gn, i))
            };
            let Some(i) = pick else { break };
            policy.insert(gn, i).expect("draws are without replacement");
            weights[i] = 0.0;
        }
    }
    policy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::scenario::SystemParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scenario(k: usize, n: usize, q: usize, kappa: f64) -> Scenario {
        let params = SystemParams { num_files: n, cache_capacity: q, kappa, ..Default::default() };
        let pts = (0..k).map(|i| Point::new(i as f64 * 10.0, 0.0)).collect();
        Scenario::with_positions(params, pts).unwrap()
    }

    #[test]
    fn full_storage_takes_everything() {
        let s = scenario(5, 4, 4, 1.0);
        let p = random_proportional_policy(&s, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(p.repetition_stats(), vec![5; 4]);
    }

    #[test]
    fn reproducible() {
        let s = scenario(20, 10, 2, 1.0);
        let a = random_proportional_policy(&s, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_proportional_policy(&s, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!((0..20).all(|k| a.fill(k) == 2));
    }

    #[test]
    fn uniform_popularity_gives_uniform_frequencies() {
        // 10^4 single-slot draws over N = 5 equal files, five nodes per policy
        let s = scenario(5, 5, 1, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let trials = 10_000;
        let mut counts = [0usize; 5];
        for _ in 0..trials / 5 {
            let p = random_proportional_policy(&s, &mut rng);
            for k in 0..5 {
                counts[p.files_at(k).next().unwrap()] += 1;
            }
        }
        let mean = trials as f64 / 5.0;
        let sd = (trials as f64 * 0.2 * 0.8).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 3.0 * sd, "{counts:?}");
        }
    }
}
