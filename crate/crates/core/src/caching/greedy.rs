use std::cmp::Ordering;

use log::debug;
use rayon::prelude::*;
use serde::Serialize;

use super::{CachingPolicy, CostReport};
use crate::error::{Error, Result};
use crate::geometry::{within, Point};
use crate::planner::{CachingPlan, FlightPlanner, Instance};
use crate::radio::RetrievalModel;

/// Change in retrieval cost from caching one more (node, file) pair.
///
/// `coverage` is the popularity mass of a file that nobody holds yet; it is
/// zero once the file is cached somewhere. `reduction` is the finite part of
/// the packet saving, popularity weighted. The true saving is
/// `coverage * uncached_cost + reduction`, but the two parts are kept apart so
/// that covering a new file always outranks any finite trade-off, however
/// large the finite costs get.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetrievalGain {
    pub coverage: f64,
    pub reduction: f64,
}

/// Per-(node, file) nearest-holder costs, updated one insertion at a time.
#[derive(Debug, Clone)]
pub struct RetrievalState<'a> {
    model: &'a RetrievalModel,
    nearest: Vec<f64>,
    covered: Vec<bool>,
}

impl<'a> RetrievalState<'a> {
    pub fn new(model: &'a RetrievalModel) -> Self {
        let k = model.num_gns();
        let n = model.num_files();
        Self { model, nearest: vec![model.uncached_cost(); k * n], covered: vec![false; n] }
    }

    fn idx(&self, gn: usize, file: usize) -> usize {
        gn * self.model.num_files() + file
    }

    pub fn is_covered(&self, file: usize) -> bool {
        self.covered[file]
    }

    pub fn gain(&self, gn: usize, file: usize) -> RetrievalGain {
        let m = self.model;
        let mut coverage = 0.0;
        let mut reduction = 0.0;
        for req in 0..m.num_gns() {
            let p = m.popularity(req, file);
            if p <= 0.0 {
                continue;
            }
            let new = if req == gn { 0.0 } else { m.link_cost(req, gn) };
            if self.covered[file] {
                let old = self.nearest[self.idx(req, file)];
                if new < old {
                    reduction += p * (old - new);
                }
            } else {
                coverage += p;
                reduction -= p * new;
            }
        }
        RetrievalGain { coverage, reduction }
    }

    pub fn apply(&mut self, gn: usize, file: usize) {
        let covered = self.covered[file];
        for req in 0..self.model.num_gns() {
            let new = if req == gn { 0.0 } else { self.model.link_cost(req, gn) };
            let i = self.idx(req, file);
            if !covered || new < self.nearest[i] {
                self.nearest[i] = new;
            }
        }
        self.covered[file] = true;
    }

    /// Average retrieval time, seconds; same value as
    /// [`RetrievalModel::average_cost`] on the corresponding policy.
    pub fn cost(&self) -> f64 {
        let m = self.model;
        let mut total = 0.0;
        for file in 0..m.num_files() {
            for gn in 0..m.num_gns() {
                let p = m.popularity(gn, file);
                if p > 0.0 {
                    let c = if self.covered[file] { self.nearest[self.idx(gn, file)] } else { m.uncached_cost() };
                    total += p * c;
                }
            }
        }
        total * m.cost_scale()
    }
}

/// Ranking key of a candidate pair: newly covered popularity first, then the
/// finite weighted net saving in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaKey {
    pub coverage: f64,
    pub value: f64,
}

impl DeltaKey {
    fn new(gain: RetrievalGain, caching_increase: f64, theta: f64, scale: f64) -> Self {
        Self { coverage: gain.coverage, value: theta * scale * gain.reduction - (1.0 - theta) * caching_increase }
    }

    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        self.coverage.total_cmp(&other.coverage).then(self.value.total_cmp(&other.value))
    }

    /// Whether the greedy loop should keep going after this candidate.
    pub fn exceeds(&self, threshold: f64) -> bool {
        self.coverage > 0.0 || self.value > threshold
    }

    /// Weighted saving in seconds, counting a newly covered file at the
    /// uncached cost.
    pub fn seconds(&self, theta: f64, scale: f64, uncached_cost: f64) -> f64 {
        self.value + theta * scale * self.coverage * uncached_cost
    }
}

/// Picks the best candidate, keeping the first (lowest node, then file) on ties.
fn argmax<T>(items: impl IntoIterator<Item = ((usize, usize), DeltaKey, T)>) -> Option<((usize, usize), DeltaKey, T)> {
    let mut best: Option<((usize, usize), DeltaKey, T)> = None;
    for item in items {
        match &best {
            Some(b) if item.1.rank_cmp(&b.1) != Ordering::Greater => {}
            _ => best = Some(item),
        }
    }
    best
}

/// One greedy iteration; iteration 0 is the empty starting policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub gn: Option<usize>,
    pub file: Option<usize>,
    /// Retrieval cost after this iteration, seconds.
    pub retrieval_cost: f64,
    /// Caching cost after this iteration (an estimate for the overhearing
    /// variant), seconds.
    pub caching_cost: f64,
    /// Weighted saving of the selected pair, seconds.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GreedyOutcome {
    pub policy: CachingPolicy,
    pub plan: CachingPlan,
    pub report: CostReport,
    pub trace: Vec<TraceRow>,
}

impl GreedyOutcome {
    pub fn selections(&self) -> Vec<(usize, usize)> {
        self.trace.iter().filter_map(|r| Some((r.gn?, r.file?))).collect()
    }
}

fn check_inputs(instance: &Instance, theta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Config(format!("theta must lie in [0, 1], got {theta}")));
    }
    let p = &instance.scenario.params;
    if instance.num_gns() * p.cache_capacity < instance.num_files() {
        return Err(Error::Infeasible(format!(
            "{} nodes with {} slots each cannot hold {} files",
            instance.num_gns(),
            p.cache_capacity,
            instance.num_files()
        )));
    }
    Ok(())
}

fn all_candidates(policy: &CachingPolicy) -> Vec<(usize, usize)> {
    (0..policy.num_gns())
        .filter(|&k| !policy.is_full(k))
        .flat_map(|k| (0..policy.num_files()).map(move |n| (k, n)))
        .filter(|&(k, n)| !policy.contains(k, n))
        .collect()
}

fn select(policy: &mut CachingPolicy, candidates: &mut Vec<(usize, usize)>, gn: usize, file: usize) -> Result<()> {
    policy.insert(gn, file)?;
    assert!(policy.fill(gn) <= policy.capacity(), "storage exceeded at node {gn}");
    let full = policy.is_full(gn);
    candidates.retain(|&(k, n)| k != gn || (!full && n != file));
    Ok(())
}

fn ensure_coverage(policy: &CachingPolicy) -> Result<()> {
    let missing = policy.uncached_files();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::Infeasible(format!("greedy finished with uncached files {missing:?}")))
    }
}

/// Fills every storage slot, each time caching the pair that cuts the
/// average retrieval cost the most. Flight cost is ignored.
pub fn globally_greedy_retrieval(instance: &Instance) -> Result<CachingPolicy> {
    check_inputs(instance, 1.0)?;
    let mut policy = instance.empty_policy();
    let mut state = RetrievalState::new(&instance.retrieval);
    let mut candidates = all_candidates(&policy);
    while let Some(((k, n), _, ())) =
        argmax(candidates.iter().map(|&(k, n)| ((k, n), DeltaKey::new(state.gain(k, n), 0.0, 1.0, 1.0), ())))
    {
        select(&mut policy, &mut candidates, k, n)?;
        state.apply(k, n);
    }
    ensure_coverage(&policy)?;
    Ok(policy)
}

/// Greedy joint design: every candidate is priced by re-planning the UAV
/// flight for the augmented policy.
pub fn greedy_joint(instance: &Instance, theta: f64, planner: &dyn FlightPlanner) -> Result<GreedyOutcome> {
    check_inputs(instance, theta)?;
    let scale = instance.retrieval.cost_scale();
    let threshold = instance.scenario.params.epsilon_term;
    let price_flight = theta < 1.0;

    let mut policy = instance.empty_policy();
    let mut state = RetrievalState::new(&instance.retrieval);
    let mut candidates = all_candidates(&policy);
    let mut caching_cost = 0.0;
    let mut trace =
        vec![TraceRow { iteration: 0, gn: None, file: None, retrieval_cost: state.cost(), caching_cost, delta: None }];

    while !candidates.is_empty() {
        let evaluated: Vec<((usize, usize), DeltaKey, f64)> = candidates
            .par_iter()
            .map(|&(k, n)| {
                let new_cost = if price_flight {
                    let mut trial = policy.clone();
                    trial.insert(k, n)?;
                    planner.plan(instance, &trial)?.caching_cost()
                } else {
                    caching_cost
                };
                let key = DeltaKey::new(state.gain(k, n), new_cost - caching_cost, theta, scale);
                Ok(((k, n), key, new_cost))
            })
            .collect::<Result<_>>()?;
        let Some(((k, n), key, new_cost)) = argmax(evaluated) else { break };
        if !key.exceeds(threshold) {
            break;
        }
        select(&mut policy, &mut candidates, k, n)?;
        state.apply(k, n);
        caching_cost = if price_flight { new_cost } else { planner.plan(instance, &policy)?.caching_cost() };
        debug!("iteration {}: cache file {n} at node {k}, C_U {caching_cost:.3}", trace.len());
        trace.push(TraceRow {
            iteration: trace.len(),
            gn: Some(k),
            file: Some(n),
            retrieval_cost: state.cost(),
            caching_cost,
            delta: Some(key.seconds(theta, scale, instance.retrieval.uncached_cost())),
        });
    }
    if theta > 0.0 {
        ensure_coverage(&policy)?;
    }
    finish(instance, theta, planner, policy, trace)
}

fn finish(
    instance: &Instance,
    theta: f64,
    planner: &dyn FlightPlanner,
    policy: CachingPolicy,
    trace: Vec<TraceRow>,
) -> Result<GreedyOutcome> {
    let plan = planner.plan(instance, &policy)?;
    let report = CostReport::new(plan.caching_cost(), instance.retrieval_cost(&policy), theta);
    Ok(GreedyOutcome { policy, plan, report, trace })
}

/// Flight-cost estimate used by the fast greedy: the UAV hovers over each
/// visited node and everything within coverage overhears the broadcast.
#[derive(Debug, Clone)]
pub struct OverhearingEstimator {
    positions: Vec<Point>,
    start: Point,
    radius: f64,
    speed: f64,
    hover_time: f64,
    num_files: usize,
    visited: Vec<usize>,
    overheard: Vec<bool>,
}

impl OverhearingEstimator {
    /// `hover_time` is the airtime of one whole file; `start` is where the
    /// UAV comes from before any node has been visited.
    pub fn new(
        positions: Vec<Point>,
        num_files: usize,
        start: Point,
        radius: f64,
        speed: f64,
        hover_time: f64,
    ) -> Self {
        let k = positions.len();
        Self {
            positions,
            start,
            radius,
            speed,
            hover_time,
            num_files,
            visited: Vec::new(),
            overheard: vec![false; k * num_files],
        }
    }

    pub fn for_instance(instance: &Instance) -> Self {
        let p = &instance.scenario.params;
        Self::new(
            instance.scenario.positions.clone(),
            instance.num_files(),
            instance.depot,
            instance.budget.coverage_radius,
            p.max_speed,
            p.packets_per_file as f64 * instance.budget.uav_packet_time,
        )
    }

    pub fn visited(&self) -> &[usize] {
        &self.visited
    }

    pub fn has_overheard(&self, gn: usize, file: usize) -> bool {
        self.overheard[gn * self.num_files + file]
    }

    /// Estimated extra UAV time to deliver `file` to `gn`, seconds.
    pub fn increment(&self, gn: usize, file: usize) -> f64 {
        if self.has_overheard(gn, file) {
            return 0.0;
        }
        let target = self.positions[gn];
        let reach = if self.visited.is_empty() {
            self.start.dist(target)
        } else {
            self.visited.iter().map(|&v| self.positions[v].dist(target)).fold(f64::INFINITY, f64::min)
        };
        reach / self.speed + self.hover_time
    }

    /// Records that `file` is now cached at `gn`.
    pub fn record(&mut self, gn: usize, file: usize) {
        if self.has_overheard(gn, file) {
            return;
        }
        if !self.visited.contains(&gn) {
            self.visited.push(gn);
        }
        let center = self.positions[gn];
        for (k, &p) in self.positions.iter().enumerate() {
            if within(p, center, self.radius) {
                self.overheard[k * self.num_files + file] = true;
            }
        }
    }
}

/// Greedy joint design with the overhearing estimate in place of per-candidate
/// flight planning; the flight is planned once for the final policy.
pub fn greedy_estimated(instance: &Instance, theta: f64, planner: &dyn FlightPlanner) -> Result<GreedyOutcome> {
    check_inputs(instance, theta)?;
    let scale = instance.retrieval.cost_scale();
    let mut estimator = OverhearingEstimator::for_instance(instance);

    let mut policy = instance.empty_policy();
    let mut state = RetrievalState::new(&instance.retrieval);
    let mut candidates = all_candidates(&policy);
    let mut estimate = 0.0;
    let mut trace = vec![TraceRow {
        iteration: 0,
        gn: None,
        file: None,
        retrieval_cost: state.cost(),
        caching_cost: estimate,
        delta: None,
    }];

    loop {
        let best = argmax(candidates.iter().map(|&(k, n)| {
            let inc = estimator.increment(k, n);
            ((k, n), DeltaKey::new(state.gain(k, n), inc, theta, scale), inc)
        }));
        let Some(((k, n), key, inc)) = best else { break };
        if !key.exceeds(0.0) {
            break;
        }
        select(&mut policy, &mut candidates, k, n)?;
        state.apply(k, n);
        estimator.record(k, n);
        estimate += inc;
        trace.push(TraceRow {
            iteration: trace.len(),
            gn: Some(k),
            file: Some(n),
            retrieval_cost: state.cost(),
            caching_cost: estimate,
            delta: Some(key.seconds(theta, scale, instance.retrieval.uncached_cost())),
        });
    }
    if theta > 0.0 {
        ensure_coverage(&policy)?;
    }
    finish(instance, theta, planner, policy, trace)
}
