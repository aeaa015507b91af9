//! Joint caching placement and UAV flight design for wireless file delivery.
//!
//! A UAV pushes a file library to ground nodes (GNs); the nodes then serve
//! each other's requests over device-to-device links. Caching more copies
//! costs UAV flight and airtime but shortens retrieval. This crate builds the
//! caching policy, the UAV path and the broadcast schedule, and evaluates
//! both costs.

pub mod caching;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod planner;
pub mod radio;
pub mod scenario;
pub mod schedule;
pub mod svg;
pub mod trajectory;

pub use caching::{
    globally_greedy_retrieval, greedy_estimated, greedy_joint, random_proportional_policy, weighted_cost,
    CachingPolicy, CostReport, GreedyOutcome,
};
pub use error::{Error, Result};
pub use geometry::Point;
pub use planner::{CachingPlan, FlightPlanner, GnTourPlanner, Instance, VbsPlanner};
pub use radio::{LinkBudget, Rayleigh, RetrievalModel, UNCACHED_COST};
pub use scenario::{generate_scenario, load_config, Popularity, Scenario, SystemParams};
pub use schedule::{solve_p4, Schedule};
pub use trajectory::FlightPath;
