use std::hint::black_box;

use amn_core::circuits::{build_oracle, route, OracleParams};
use amn_core::feasibility::DeviceProfile;
use amn_core::network::TernaryList;
use amn_core::neuron::{run_receiver, DiffusionMode, NeuronConfig, NeuronInput};
use amn_core::qsim::{GateOp, RandomStream, StateVector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn gates(c: &mut Criterion) {
    let mut group = c.benchmark_group("gate");
    for n in [8usize, 12, 16] {
        let ops = [GateOp::h(0), GateOp::cx(0, n - 1), GateOp::mcz(&[0, 1, 2], n - 1)];
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut state = StateVector::uniform(n).unwrap();
            b.iter(|| {
                for op in &ops {
                    state.apply(black_box(op)).unwrap();
                }
            });
        });
    }
    group.finish();
}

fn neuron_config(inputs: usize) -> NeuronConfig {
    let input = |k: usize| NeuronInput {
        value: TernaryList::new(vec![1, 0, 1, 0, 0, (k % 2) as u8]).unwrap(),
        params: OracleParams { id_set: vec![0, 2], b: 1, weight: 0.2 + 0.1 * k as f64 },
    };
    NeuronConfig {
        l: 6,
        bias: 1.0,
        diffusion: DiffusionMode::Simplified,
        cap: None,
        inputs: (0..inputs).map(input).collect(),
    }
}

fn receiver(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_receiver");
    for inputs in [1usize, 4, 8] {
        let cfg = neuron_config(inputs);
        group.bench_with_input(BenchmarkId::from_parameter(inputs), &cfg, |b, cfg| {
            let mut rng = RandomStream::new(1);
            b.iter(|| run_receiver(black_box(cfg), &mut rng).unwrap());
        });
    }
    group.finish();
}

fn routing(c: &mut Criterion) {
    let graph = DeviceProfile::default().coupling.unwrap();
    let params = OracleParams { id_set: vec![0, 2, 5], b: 0, weight: 1.0 };
    let oracle = build_oracle(&params, 6, 0, 6).unwrap();
    let placement: Vec<usize> = (0..12).collect();
    c.bench_function("route_oracle_melbourne", |b| {
        b.iter(|| route(black_box(&oracle), &graph, &placement).unwrap())
    });
}

criterion_group!(benches, gates, receiver, routing);
criterion_main!(benches);
