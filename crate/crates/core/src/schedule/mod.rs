//! Dwell times and packet allocation along a fixed flight path.

mod lp;

use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use crate::caching::CachingPolicy;
use crate::error::{Error, Result};
use crate::radio::LinkBudget;
use crate::trajectory::PathSegments;

pub use lp::{lp_solve, Bound, LpError, LpSolution};

/// Per-segment dwell times and per-segment, per-file packet counts.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Schedule {
    /// Seconds spent on each segment.
    pub rho: Vec<f64>,
    /// `packets[s][n]`: coded packets of file `n` sent during segment `s`.
    pub packets: Vec<Vec<u32>>,
    /// Total UAV time after integral rounding, seconds.
    pub caching_cost: f64,
    /// Optimal value of the fractional relaxation, seconds.
    pub relaxed_cost: f64,
}

impl Schedule {
    /// Equivalent number of `delta_t` slots.
    pub fn slot_count(&self, delta_t: f64) -> u64 {
        (self.caching_cost / delta_t - 1e-9).ceil().max(0.0) as u64
    }

    pub fn write_csv<W: Write>(&self, segments: &PathSegments, out: W) -> Result<()> {
        let num_files = self.packets.first().map_or(0, Vec::len);
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["segment".to_string(), "start".into(), "length".into(), "rho".into(), "contact".into()];
        header.extend((0..num_files).map(|n| format!("f{n}")));
        w.write_record(&header)?;
        for (s, seg) in segments.iter().enumerate() {
            let contact: Vec<String> = seg.contact.iter().map(usize::to_string).collect();
            let mut rec = vec![
                s.to_string(),
                seg.start.to_string(),
                seg.length.to_string(),
                self.rho[s].to_string(),
                contact.join(" "),
            ];
            rec.extend(self.packets[s].iter().map(u32::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Total UAV time of a schedule, seconds.
pub fn caching_cost(schedule: &Schedule) -> f64 {
    schedule.rho.iter().sum()
}

/// Minimum-time speed profile and packet schedule along `segments`.
///
/// Segments with identical contact sets are pooled into one LP column group
/// (their dwell times are interchangeable), the fractional LP is solved, each
/// packet count is rounded up and the dwell time of the receiving segment is
/// stretched to absorb the extra packets.
pub fn solve_p4(
    segments: &PathSegments,
    policy: &CachingPolicy,
    budget: &LinkBudget,
    max_speed: f64,
    packets_per_file: u32,
) -> Result<Schedule> {
    let num_files = policy.num_files();
    let tp = budget.uav_packet_time;
    let demand = f64::from(packets_per_file) * tp;
    let s_count = segments.len();
    let flight: Vec<f64> = segments.iter().map(|s| s.length / max_speed).collect();
    let base: f64 = flight.iter().sum();

    let pairs: Vec<(usize, usize)> = policy.pairs().collect();
    if pairs.is_empty() {
        return Ok(Schedule {
            rho: flight,
            packets: vec![vec![0; num_files]; s_count],
            caching_cost: base,
            relaxed_cost: base,
        });
    }

    // pool segments by contact set, in order of first appearance
    let mut group_of: HashMap<&[usize], usize> = HashMap::new();
    let mut groups: Vec<(&[usize], Vec<usize>)> = Vec::new();
    let mut seg_group = vec![usize::MAX; s_count];
    for (s, seg) in segments.iter().enumerate() {
        if seg.contact.is_empty() {
            continue;
        }
        let g = *group_of.entry(seg.contact.as_slice()).or_insert_with(|| {
            groups.push((seg.contact.as_slice(), Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push(s);
        seg_group[s] = g;
    }

    // tau[g][n] variables only where some contact GN caches n
    let mut var_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut var_list: Vec<(usize, usize)> = Vec::new();
    let mut group_vars: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
    for (g, (contact, _)) in groups.iter().enumerate() {
        let mut files: Vec<usize> = contact.iter().flat_map(|&k| policy.files_at(k)).collect();
        files.sort_unstable();
        files.dedup();
        let mut mine = Vec::with_capacity(files.len());
        for n in files {
            var_index.insert((g, n), var_list.len());
            mine.push(var_list.len());
            var_list.push((g, n));
        }
        group_vars.push(mine);
    }
    let n_tau = var_list.len();
    let n_vars = n_tau + groups.len();
    let mut cost = vec![0.0; n_vars];
    for c in &mut cost[n_tau..] {
        *c = 1.0;
    }

    let mut rows: Vec<(Vec<(usize, f64)>, f64)> = Vec::new();
    for (g, (_, members)) in groups.iter().enumerate() {
        let mut entries: Vec<(usize, f64)> = group_vars[g].iter().map(|&i| (i, 1.0)).collect();
        entries.push((n_tau + g, -1.0));
        let free: f64 = members.iter().map(|&s| flight[s]).sum();
        rows.push((entries, free));
    }
    for &(k, n) in &pairs {
        let entries: Vec<(usize, f64)> = groups
            .iter()
            .enumerate()
            .filter(|(_, (contact, _))| contact.binary_search(&k).is_ok())
            .map(|(g, _)| (var_index[&(g, n)], -1.0))
            .collect();
        if entries.is_empty() {
            return Err(Error::Contract(format!("GN {k} caches file {n} but has no contact segment")));
        }
        rows.push((entries, -demand));
    }

    let sol = lp::solve_standard(&cost, &rows).map_err(|e| match e {
        LpError::Infeasible => Error::Contract("P4 infeasible despite full contact coverage".into()),
        other => Error::Lp(other),
    })?;
    let relaxed_cost = base + sol[n_tau..].iter().sum::<f64>();

    // integral packet counts per (group, file), topped up if rounding left a gap
    let mut group_packets: HashMap<(usize, usize), u32> = HashMap::new();
    for (i, &(g, n)) in var_list.iter().enumerate() {
        let pk = (sol[i] / tp - 1e-6).ceil().max(0.0) as u32;
        group_packets.insert((g, n), pk);
    }
    for &(k, n) in &pairs {
        let mine: Vec<usize> =
            groups.iter().enumerate().filter(|(_, (c, _))| c.binary_search(&k).is_ok()).map(|(g, _)| g).collect();
        let got: u32 = mine.iter().map(|&g| group_packets[&(g, n)]).sum();
        if got < packets_per_file {
            let g =
                *mine.iter().max_by(|&&a, &&b| sol[var_index[&(a, n)]].total_cmp(&sol[var_index[&(b, n)]])).unwrap();
            *group_packets.get_mut(&(g, n)).unwrap() += packets_per_file - got;
        }
    }

    // spread each group's packets over its segments, filling free airtime first
    let mut packets = vec![vec![0u32; num_files]; s_count];
    let mut rho = flight.clone();
    for (g, (_, members)) in groups.iter().enumerate() {
        let mut room: Vec<u64> = members.iter().map(|&s| (flight[s] / tp + 1e-9).floor() as u64).collect();
        let last = members.len() - 1;
        #[allow(clippy::needless_range_loop)]
        for n in 0..num_files {
            let Some(&total) = group_packets.get(&(g, n)) else { continue };
            let mut left = u64::from(total);
            for (i, &s) in members.iter().enumerate() {
                if left == 0 {
                    break;
                }
                let take = if i == last { left } else { left.min(room[i]) };
                room[i] = room[i].saturating_sub(take);
                packets[s][n] += take as u32;
                left -= take;
            }
        }
        for &s in members {
            let load: u64 = packets[s].iter().map(|&p| u64::from(p)).sum();
            rho[s] = rho[s].max(load as f64 * tp);
        }
    }
    debug_assert!(seg_group.iter().zip(&packets).all(|(&g, p)| g != usize::MAX || p.iter().all(|&x| x == 0)));

    let caching_cost = rho.iter().sum();
    Ok(Schedule { rho, packets, caching_cost, relaxed_cost })
}

/// Substitute `schedule` into every P4 constraint; returns the first violation.
pub fn check_schedule(
    schedule: &Schedule,
    segments: &PathSegments,
    policy: &CachingPolicy,
    budget: &LinkBudget,
    max_speed: f64,
    packets_per_file: u32,
) -> Result<()> {
    let tp = budget.uav_packet_time;
    let bad = |m: String| Err(Error::Contract(m));
    if schedule.rho.len() != segments.len() || schedule.packets.len() != segments.len() {
        return bad("schedule and segment counts differ".into());
    }
    for (s, seg) in segments.iter().enumerate() {
        let rho = schedule.rho[s];
        if rho * max_speed < seg.length * (1.0 - 1e-12) - 1e-9 {
            return bad(format!("segment {s}: speed limit broken ({rho} s for {} m)", seg.length));
        }
        let load: f64 = schedule.packets[s].iter().map(|&p| f64::from(p)).sum::<f64>() * tp;
        if load > rho * (1.0 + 1e-12) + 1e-9 {
            return bad(format!("segment {s}: {load} s of packets in {rho} s"));
        }
    }
    for (k, n) in policy.pairs() {
        let got: u64 = segments
            .iter()
            .enumerate()
            .filter(|(_, seg)| seg.contact.binary_search(&k).is_ok())
            .map(|(s, _)| u64::from(schedule.packets[s][n]))
            .sum();
        if got < u64::from(packets_per_file) {
            return bad(format!("GN {k} receives only {got} packets of file {n}"));
        }
    }
    if (caching_cost(schedule) - schedule.caching_cost).abs() > 1e-9 * (1.0 + schedule.caching_cost) {
        return bad("caching cost differs from the dwell-time sum".into());
    }
    Ok(())
}
