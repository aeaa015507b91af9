use criterion::{black_box, criterion_group, criterion_main, Criterion};
use uavcache::{
    generate_scenario, greedy_estimated, greedy_joint, FlightPlanner, GnTourPlanner, Instance, SystemParams, VbsPlanner,
};

fn instance(k: usize, n: usize, q: usize) -> Instance {
    let p = SystemParams { num_gns: k, num_files: n, cache_capacity: q, ..Default::default() };
    Instance::new(generate_scenario(&p).unwrap()).unwrap()
}

fn planners(c: &mut Criterion) {
    let inst = instance(100, 30, 3);
    let policy = greedy_estimated(&inst, 0.6, &VbsPlanner).unwrap().policy;
    let mut g = c.benchmark_group("plan");
    g.bench_function("vbs", |b| b.iter(|| VbsPlanner.plan(black_box(&inst), black_box(&policy)).unwrap()));
    g.bench_function("gn_tour", |b| b.iter(|| GnTourPlanner.plan(black_box(&inst), black_box(&policy)).unwrap()));
    g.finish();
}

fn greedy(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy");
    g.sample_size(10);
    let full = instance(100, 30, 3);
    g.bench_function("estimated_k100", |b| b.iter(|| greedy_estimated(black_box(&full), 0.6, &VbsPlanner).unwrap()));
    let desk = instance(25, 10, 2);
    g.bench_function("joint_k25", |b| b.iter(|| greedy_joint(black_box(&desk), 0.6, &VbsPlanner).unwrap()));
    g.finish();
}

criterion_group!(benches, planners, greedy);
criterion_main!(benches);
