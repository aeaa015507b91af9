mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uavcache::radio::packet_success_prob;
use uavcache::scenario::{save_config, zipf_popularity};
use uavcache::schedule::check_schedule;
use uavcache::trajectory::{segment_path, tsp_over_gns};
use uavcache::{
    generate_scenario, load_config, solve_p4, CachingPolicy, Error, Instance, LinkBudget, Rayleigh, Scenario,
    SystemParams,
};

fn policy_from(bits: &[bool], k: usize, n: usize, q: usize) -> CachingPolicy {
    let mut p = CachingPolicy::new(k, n, q);
    for gn in 0..k {
        for file in 0..n {
            if bits[gn * n + file] && !p.is_full(gn) {
                p.insert(gn, file).unwrap();
            }
        }
    }
    p
}

fn small_instance(seed: u64, k: usize, n: usize, q: usize, side: f64) -> Instance {
    common::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), k, n, q, side)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn zipf_is_a_sorted_distribution(n in 1usize..200, kappa in 0.0f64..3.0) {
        let p = zipf_popularity(n, kappa);
        prop_assert_eq!(p.len(), n);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x > 0.0));
        prop_assert!(p.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn success_probability_falls_with_distance(a in 1.0f64..3000.0, b in 1.0f64..3000.0) {
        let budget = LinkBudget::from_params(&SystemParams::default()).unwrap();
        let (near, far) = if a <= b { (a, b) } else { (b, a) };
        let pn = packet_success_prob(near, &budget, &Rayleigh, 2.0);
        let pf = packet_success_prob(far, &budget, &Rayleigh, 2.0);
        prop_assert!(pf <= pn);
        prop_assert!(pf > 0.0 && pn <= 1.0);
    }

    #[test]
    fn caching_more_never_slows_retrieval(
        seed in any::<u64>(),
        bits in prop::collection::vec(any::<bool>(), 24),
        extra in 0usize..24,
    ) {
        let inst = small_instance(seed, 6, 4, 2, 1500.0);
        let policy = policy_from(&bits, 6, 4, 2);
        let (gn, file) = (extra / 4, extra % 4);
        prop_assume!(!policy.is_full(gn) && !policy.contains(gn, file));
        let mut more = policy.clone();
        more.insert(gn, file).unwrap();
        prop_assert!(inst.retrieval_cost(&more) <= inst.retrieval_cost(&policy));
    }

    #[test]
    fn schedule_is_feasible_and_monotone(
        seed in any::<u64>(),
        bits in prop::collection::vec(any::<bool>(), 15),
        extra in 0usize..15,
    ) {
        let inst = small_instance(seed, 5, 3, 2, 1200.0);
        let p = &inst.scenario.params;
        let budget = LinkBudget::from_params(p).unwrap();
        let pos = &inst.scenario.positions;
        // one fixed path through every node, so constraints only grow
        let path = tsp_over_gns(pos, pos[0], false);
        let gns: Vec<_> = pos.iter().copied().enumerate().collect();
        let segs = segment_path(&path, &gns, budget.coverage_radius).unwrap();
        let policy = policy_from(&bits, 5, 3, 2);
        let s = solve_p4(&segs, &policy, &budget, p.max_speed, p.packets_per_file).unwrap();
        check_schedule(&s, &segs, &policy, &budget, p.max_speed, p.packets_per_file).unwrap();
        prop_assert!(s.caching_cost >= s.relaxed_cost - 1e-9);
        let bound = (segs.len() * p.num_files) as f64 * budget.uav_packet_time;
        prop_assert!(s.caching_cost - s.relaxed_cost <= bound + 1e-9);

        let (gn, file) = (extra / 3, extra % 3);
        prop_assume!(!policy.is_full(gn) && !policy.contains(gn, file));
        let mut more = policy.clone();
        more.insert(gn, file).unwrap();
        let t = solve_p4(&segs, &more, &budget, p.max_speed, p.packets_per_file).unwrap();
        prop_assert!(t.relaxed_cost >= s.relaxed_cost - 1e-9 * s.relaxed_cost.max(1.0));
    }

    #[test]
    fn policy_csv_round_trip(bits in prop::collection::vec(any::<bool>(), 30)) {
        let policy = policy_from(&bits, 6, 5, 3);
        let mut buf = Vec::new();
        policy.write_csv(&mut buf).unwrap();
        let back = CachingPolicy::read_csv(buf.as_slice(), 3).unwrap();
        prop_assert_eq!(back.pairs().collect::<Vec<_>>(), policy.pairs().collect::<Vec<_>>());
    }

    #[test]
    fn scenarios_are_reproducible(seed in any::<u64>()) {
        let p = SystemParams { rng_seed: seed, num_gns: 20, ..Default::default() };
        let a = generate_scenario(&p).unwrap();
        let b = generate_scenario(&p).unwrap();
        prop_assert_eq!(&a.positions, &b.positions);
        let side = p.area_side;
        prop_assert!(a.positions.iter().all(|q| (0.0..=side).contains(&q.x) && (0.0..=side).contains(&q.y)));
        let back = Scenario::from_json(&a.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.positions, a.positions);
    }
}

#[test]
fn config_round_trip_and_missing_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.toml");
    let p = SystemParams { num_gns: 42, max_speed: 12.5, ..Default::default() };
    save_config(&p, &path).unwrap();
    assert_eq!(load_config(&path).unwrap(), p);

    let text = std::fs::read_to_string(&path).unwrap();
    let stripped: String =
        text.lines().filter(|l| !l.trim_start().starts_with("H ")).map(|l| format!("{l}\n")).collect();
    assert_ne!(stripped, text, "altitude key not found in {text}");
    std::fs::write(&path, stripped).unwrap();
    match load_config(&path) {
        Err(e @ Error::Parse { .. }) => assert!(e.to_string().contains('H'), "{e}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}
