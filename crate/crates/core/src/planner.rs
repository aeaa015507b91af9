//! Caching-flight solver: given which nodes cache which files, design the
//! UAV path and packet schedule and report the UAV time.

use serde::Serialize;

use crate::caching::CachingPolicy;
use crate::error::Result;
use crate::geometry::{centroid, Point};
use crate::radio::{Fading, LinkBudget, Rayleigh, RetrievalModel};
use crate::scenario::Scenario;
use crate::schedule::{solve_p4, Schedule};
use crate::trajectory::{
    place_cover, refine_waypoints, segment_path, tour_order, tsp_over_gns, FlightPath, PathSegments,
};

/// A scenario together with everything derived from it once.
#[derive(Debug, Clone)]
pub struct Instance {
    pub scenario: Scenario,
    pub budget: LinkBudget,
    pub retrieval: RetrievalModel,
    /// Launch point of the UAV: the centroid of all ground nodes.
    pub depot: Point,
}

impl Instance {
    /// Rayleigh-faded instance.
    pub fn new(scenario: Scenario) -> Result<Self> {
        Self::with_fading(scenario, &Rayleigh)
    }

    pub fn with_fading(scenario: Scenario, fading: &dyn Fading) -> Result<Self> {
        scenario.params.validate()?;
        let budget = LinkBudget::from_params(&scenario.params)?;
        let retrieval = RetrievalModel::new(&scenario, &budget, fading);
        let depot = centroid(&scenario.positions);
        Ok(Self { scenario, budget, retrieval, depot })
    }

    pub fn num_gns(&self) -> usize {
        self.scenario.num_gns()
    }

    pub fn num_files(&self) -> usize {
        self.scenario.num_files()
    }

    pub fn empty_policy(&self) -> CachingPolicy {
        CachingPolicy::new(self.num_gns(), self.num_files(), self.scenario.params.cache_capacity)
    }

    /// Average retrieval time of `policy`, seconds.
    pub fn retrieval_cost(&self, policy: &CachingPolicy) -> f64 {
        self.retrieval.average_cost(policy)
    }
}

/// Flight path, segmentation and schedule for one caching policy.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CachingPlan {
    /// Cover centers in visiting order; empty for planners without a cover.
    pub centers: Vec<Point>,
    pub path: FlightPath,
    #[serde(skip)]
    pub segments: PathSegments,
    pub schedule: Schedule,
}

impl CachingPlan {
    /// UAV caching time, seconds.
    pub fn caching_cost(&self) -> f64 {
        self.schedule.caching_cost
    }
}

pub trait FlightPlanner: Sync {
    fn plan(&self, instance: &Instance, policy: &CachingPolicy) -> Result<CachingPlan>;
}

fn caching_points(instance: &Instance, policy: &CachingPolicy) -> (Vec<usize>, Vec<Point>) {
    let gns = policy.caching_gns();
    let pts = gns.iter().map(|&k| instance.scenario.positions[k]).collect();
    (gns, pts)
}

fn schedule_along(
    instance: &Instance,
    policy: &CachingPolicy,
    path: FlightPath,
    centers: Vec<Point>,
) -> Result<CachingPlan> {
    let (gns, pts) = caching_points(instance, policy);
    let tagged: Vec<(usize, Point)> = gns.into_iter().zip(pts).collect();
    let radius = instance.budget.coverage_radius;
    let segments = segment_path(&path, &tagged, radius)?;
    let p = &instance.scenario.params;
    let schedule = solve_p4(&segments, policy, &instance.budget, p.max_speed, p.packets_per_file)?;
    Ok(CachingPlan { centers, path, segments, schedule })
}

/// Disk-cover placement, tour over the cover centers, waypoint refinement,
/// segmentation and the LP schedule.
#[derive(Debug, Clone, Copy, Default)]
pub struct VbsPlanner;

impl FlightPlanner for VbsPlanner {
    fn plan(&self, instance: &Instance, policy: &CachingPolicy) -> Result<CachingPlan> {
        if policy.is_empty() {
            return Ok(CachingPlan::default());
        }
        let (_, pts) = caching_points(instance, policy);
        let radius = instance.budget.coverage_radius;
        let closed = instance.scenario.params.closed_tour;
        let cover = place_cover(&pts, radius);
        let order = tour_order(&cover.centers, instance.depot, closed);
        let path = refine_waypoints(&pts, &cover, &order, radius, instance.depot, closed);
        let centers = order.iter().map(|&g| cover.centers[g]).collect();
        schedule_along(instance, policy, path, centers)
    }
}

/// Flies directly over every caching node (no coverage-aware shortcuts).
#[derive(Debug, Clone, Copy, Default)]
pub struct GnTourPlanner;

impl FlightPlanner for GnTourPlanner {
    fn plan(&self, instance: &Instance, policy: &CachingPolicy) -> Result<CachingPlan> {
        if policy.is_empty() {
            return Ok(CachingPlan::default());
        }
        let (_, pts) = caching_points(instance, policy);
        let path = tsp_over_gns(&pts, instance.depot, instance.scenario.params.closed_tour);
        schedule_along(instance, policy, path, Vec::new())
    }
}
