//! Link budgets and the device-to-device retrieval cost model.

use crate::caching::CachingPolicy;
use crate::error::{Error, Result};
use crate::scenario::{db_to_linear, Scenario, SystemParams};

/// Smallest retrieval cost, in packets, charged for a file nobody caches.
///
/// A scenario raises it to its most expensive D2D link, so that caching a
/// file anywhere never looks worse than not caching it (see
/// [`RetrievalModel::uncached_cost`]). The greedy planners additionally rank
/// coverage ahead of every finite saving.
pub const UNCACHED_COST: f64 = 1e9;

/// Upper clamp on a finite per-pair cost so sums never overflow.
const MAX_FINITE_COST: f64 = 1e300;

/// Derived link constants, all on a linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// UAV SNR at 1 m.
    pub uav_ref_snr: f64,
    /// SNR a ground node needs to decode at the UAV rate.
    pub uav_snr_threshold: f64,
    /// Horizontal coverage radius of the UAV, meters.
    pub coverage_radius: f64,
    /// D2D SNR at 1 m.
    pub gn_ref_snr: f64,
    pub gn_snr_threshold: f64,
    /// Seconds per UAV packet.
    pub uav_packet_time: f64,
    /// Seconds per D2D packet.
    pub gn_packet_time: f64,
    /// Packets per slot.
    pub packets_per_slot: f64,
}

impl LinkBudget {
    pub fn from_params(p: &SystemParams) -> Result<Self> {
        let gap = db_to_linear(p.snr_gap_db);
        let uav_ref_snr = db_to_linear(p.uav_power_dbm + p.uav_ref_gain_db - p.noise_dbm);
        let uav_snr_threshold = ((p.uav_rate / p.uav_bandwidth).exp2() - 1.0) * gap;
        let radicand = uav_ref_snr / uav_snr_threshold - p.altitude * p.altitude;
        if radicand.is_nan() || radicand < 0.0 {
            return Err(Error::Config(format!(
                "UAV rate unsupportable at altitude H = {} m (gamma0/gamma_th = {:.4e} < H^2)",
                p.altitude,
                uav_ref_snr / uav_snr_threshold
            )));
        }
        let gn_ref_snr = db_to_linear(p.gn_power_dbm + p.gn_ref_gain_db - p.noise_dbm);
        let gn_snr_threshold = ((p.gn_rate / p.gn_bandwidth).exp2() - 1.0) * gap;
        let uav_packet_time = p.packet_bits / p.uav_rate;
        Ok(Self {
            uav_ref_snr,
            uav_snr_threshold,
            coverage_radius: radicand.sqrt(),
            gn_ref_snr,
            gn_snr_threshold,
            uav_packet_time,
            gn_packet_time: p.packet_bits / p.gn_rate,
            packets_per_slot: p.delta_t / uav_packet_time,
        })
    }
}

/// Complementary CDF of the small-scale fading power gain.
pub trait Fading: Send + Sync {
    fn ccdf(&self, x: f64) -> f64;
}

/// Unit-mean exponential power gain.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayleigh;

impl Fading for Rayleigh {
    fn ccdf(&self, x: f64) -> f64 {
        (-x.max(0.0)).exp()
    }
}

/// Deterministic channel: every packet above the path-loss threshold succeeds.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoFading;

impl Fading for NoFading {
    fn ccdf(&self, _x: f64) -> f64 {
        1.0
    }
}

/// Probability that one D2D packet sent over `distance` meters is decoded.
///
/// Zero distance is a local cache hit and must be handled by the caller.
pub fn packet_success_prob(distance: f64, budget: &LinkBudget, fading: &dyn Fading, alpha: f64) -> f64 {
    debug_assert!(distance > 0.0, "self-retrieval must be short-circuited by the caller");
    fading.ccdf(budget.gn_snr_threshold / budget.gn_ref_snr * distance.powf(alpha))
}

/// Distance from `gn` to the nearest holder of `file`: zero for a local hit,
/// infinite when nobody caches it.
pub fn retrieval_distance(scenario: &Scenario, policy: &CachingPolicy, gn: usize, file: usize) -> f64 {
    if policy.contains(gn, file) {
        return 0.0;
    }
    policy.holders(file).map(|j| scenario.gn_distance(gn, j)).fold(f64::INFINITY, f64::min)
}

/// Precomputed retrieval costs for one scenario.
///
/// `pair_costs[k][j]` is the expected number of D2D packet transmissions for
/// GN `k` to collect a file from GN `j`.
#[derive(Debug, Clone)]
pub struct RetrievalModel {
    num_gns: usize,
    num_files: usize,
    packets_per_file: f64,
    packet_time: f64,
    pair_costs: Vec<f64>,
    popularity: Vec<f64>,
    uncached_cost: f64,
}

impl RetrievalModel {
    pub fn new(scenario: &Scenario, budget: &LinkBudget, fading: &dyn Fading) -> Self {
        let k = scenario.num_gns();
        let n = scenario.num_files();
        let y = f64::from(scenario.params.packets_per_file);
        let alpha = scenario.params.path_loss_exponent;
        let mut pair_costs = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let d = scenario.gn_distance(a, b);
                pair_costs[a * k + b] = if d == 0.0 {
                    // co-located nodes still need a D2D transfer
                    y
                } else {
                    let p = packet_success_prob(d, budget, fading, alpha);
                    (y / p).min(MAX_FINITE_COST)
                };
            }
        }
        let popularity = (0..k).flat_map(|g| scenario.popularity.row(g).to_vec()).collect();
        let uncached_cost = pair_costs.iter().copied().fold(UNCACHED_COST, f64::max);
        Self {
            num_gns: k,
            num_files: n,
            packets_per_file: y,
            packet_time: budget.gn_packet_time,
            pair_costs,
            popularity,
            uncached_cost,
        }
    }

    pub fn num_gns(&self) -> usize {
        self.num_gns
    }

    pub fn num_files(&self) -> usize {
        self.num_files
    }

    pub fn packets_per_file(&self) -> f64 {
        self.packets_per_file
    }

    /// Packets charged per request for a file nobody caches: at least
    /// [`UNCACHED_COST`] and at least every D2D link cost.
    pub fn uncached_cost(&self) -> f64 {
        self.uncached_cost
    }

    /// Expected packets for `requester` to pull a file from `holder`.
    #[inline]
    pub fn link_cost(&self, requester: usize, holder: usize) -> f64 {
        self.pair_costs[requester * self.num_gns + holder]
    }

    #[inline]
    pub fn popularity(&self, gn: usize, file: usize) -> f64 {
        self.popularity[gn * self.num_files + file]
    }

    /// Seconds per unit of popularity-weighted packet cost.
    pub fn cost_scale(&self) -> f64 {
        self.packet_time / self.num_gns as f64
    }

    /// Expected packets for `gn` to obtain `file` under `policy`;
    /// [`Self::uncached_cost`] when no node caches it.
    pub fn pair_cost(&self, policy: &CachingPolicy, gn: usize, file: usize) -> f64 {
        if policy.contains(gn, file) {
            return 0.0;
        }
        // cost is nondecreasing in distance, so the nearest holder is the cheapest
        policy.holders(file).map(|j| self.link_cost(gn, j)).reduce(f64::min).unwrap_or(self.uncached_cost)
    }

    /// Popularity-weighted average time to serve one request, seconds.
    pub fn average_cost(&self, policy: &CachingPolicy) -> f64 {
        let mut total = 0.0;
        for file in 0..self.num_files {
            for gn in 0..self.num_gns {
                let p = self.popularity(gn, file);
                if p > 0.0 {
                    total += p * self.pair_cost(policy, gn, file);
                }
            }
        }
        total * self.cost_scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn table_one_link_budget() {
        let b = LinkBudget::from_params(&SystemParams::default()).unwrap();
        assert!((b.uav_snr_threshold - 10f64.powf(0.7)).abs() < 1e-12);
        assert!((b.uav_ref_snr - 1e6).abs() < 1e-6);
        assert!((b.coverage_radius - 435.3).abs() < 0.1, "{}", b.coverage_radius);
        assert!((b.gn_ref_snr - 1e7).abs() < 1e-3);
        assert_eq!(b.uav_packet_time, 0.01);
        assert_eq!(b.gn_packet_time, 0.1);
        assert_eq!(b.packets_per_slot, 50.0);
    }

    #[test]
    fn zero_radius_boundary() {
        // gamma0 / gamma_th == H^2 exactly: R_U/B_U = 1, Gamma = 0 dB, gamma0 = 1e4
        let p = SystemParams {
            snr_gap_db: 0.0,
            uav_power_dbm: 10.0,
            uav_ref_gain_db: -60.0,
            noise_dbm: -90.0,
            ..Default::default()
        };
        let b = LinkBudget::from_params(&p).unwrap();
        assert_eq!(b.uav_snr_threshold, 1.0);
        assert!(b.coverage_radius.abs() < 1e-6);
    }

    #[test]
    fn unsupportable_rate() {
        let p = SystemParams { uav_rate: 1e6, delta_t: 0.5, ..Default::default() };
        let err = LinkBudget::from_params(&p).unwrap_err();
        assert!(err.to_string().contains("unsupportable"));
    }

    #[test]
    fn success_probability_at_100m() {
        let b = LinkBudget::from_params(&SystemParams::default()).unwrap();
        let p = packet_success_prob(100.0, &b, &Rayleigh, 2.7);
        assert!((p - 0.99100).abs() < 5e-6, "{p}");
        assert_eq!(packet_success_prob(100.0, &b, &NoFading, 2.7), 1.0);
        assert!(packet_success_prob(1e6, &b, &Rayleigh, 2.7) < 1e-300);
    }

    fn line_scenario() -> Scenario {
        let params = SystemParams { num_files: 1, cache_capacity: 1, ..Default::default() };
        let pts = vec![Point::new(0.0, 0.0), Point::new(100.0, 0.0), Point::new(300.0, 0.0)];
        Scenario::with_positions(params, pts).unwrap()
    }

    #[test]
    fn distances_on_a_line() {
        let s = line_scenario();
        let mut policy = CachingPolicy::new(3, 1, 1);
        assert_eq!(retrieval_distance(&s, &policy, 0, 0), f64::INFINITY);
        policy.insert(2, 0).unwrap();
        assert_eq!(retrieval_distance(&s, &policy, 0, 0), 300.0);
        assert_eq!(retrieval_distance(&s, &policy, 2, 0), 0.0);
    }

    #[test]
    fn pair_costs() {
        let s = line_scenario();
        let b = LinkBudget::from_params(&s.params).unwrap();
        let model = RetrievalModel::new(&s, &b, &Rayleigh);
        let mut policy = CachingPolicy::new(3, 1, 1);
        assert_eq!(model.pair_cost(&policy, 0, 0), UNCACHED_COST);
        policy.insert(1, 0).unwrap();
        assert_eq!(model.pair_cost(&policy, 1, 0), 0.0);
        let c = model.pair_cost(&policy, 0, 0);
        assert!((c - 300.0 / 0.99100).abs() < 0.01 && (c - 302.72).abs() < 0.01, "{c}");
        let ideal = RetrievalModel::new(&s, &b, &NoFading);
        assert_eq!(ideal.pair_cost(&policy, 2, 0), 300.0);
    }
}
