//! Caching policies and the algorithms that build them.

mod greedy;
mod policy;
mod proportional;

use serde::Serialize;

pub use greedy::{
    globally_greedy_retrieval, greedy_estimated, greedy_joint, DeltaKey, GreedyOutcome, OverhearingEstimator,
    RetrievalGain, RetrievalState, TraceRow,
};
pub use policy::CachingPolicy;
pub use proportional::random_proportional_policy;

/// `(1 - theta) * caching + theta * retrieval`.
pub fn weighted_cost(caching_cost: f64, retrieval_cost: f64, theta: f64) -> f64 {
    (1.0 - theta) * caching_cost + theta * retrieval_cost
}

/// Both costs of one design and their weighted combination, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostReport {
    pub caching_cost: f64,
    pub retrieval_cost: f64,
    pub theta: f64,
    pub weighted: f64,
}

impl CostReport {
    pub fn new(caching_cost: f64, retrieval_cost: f64, theta: f64) -> Self {
        Self { caching_cost, retrieval_cost, theta, weighted: weighted_cost(caching_cost, retrieval_cost, theta) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_endpoints() {
        assert_eq!(weighted_cost(100.0, 50.0, 0.0), 100.0);
        assert_eq!(weighted_cost(100.0, 50.0, 1.0), 50.0);
        assert!((weighted_cost(100.0, 50.0, 0.6) - 70.0).abs() < 1e-12);
        let r = CostReport::new(100.0, 50.0, 0.6);
        assert_eq!(r.weighted, weighted_cost(100.0, 50.0, 0.6));
    }
}
