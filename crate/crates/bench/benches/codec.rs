use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use eqpolar::sim::add_noise;
use eqpolar::{channel_likelihoods, modulate, polar_encode, run_fer, CodeConfig, Kernel, NoiseModel, ScDecoder, SignalSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: [(usize, &str); 3] = [(2, "standard"), (5, "L5a"), (8, "L8")];

/// A noisy observation of a random codeword, as flat likelihood rows.
fn channel(cfg: &CodeConfig, set: &SignalSet, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<f64>) {
    let q = cfg.q();
    let u: Vec<usize> = (0..cfg.block_len()).map(|_| rng.random_range(0..q)).collect();
    let x = polar_encode(&u, cfg).unwrap();
    let nm = NoiseModel::new(1.0, 2.0).unwrap();
    let y = add_noise(&modulate(&x, set).unwrap(), &nm, rng);
    let flat = channel_likelihoods(&y, set, &nm)
        .iter()
        .flat_map(|l| l.as_slice().to_vec())
        .collect();
    (u, flat)
}

fn bench_encode(c: &mut Criterion) {
    let mut group = c.benchmark_group("encode");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (q, name) in CASES {
        for len in [256, 1024] {
            let cfg = CodeConfig::uniform(&Kernel::builtin(name, Some(q)).unwrap(), len).unwrap();
            let u: Vec<usize> = (0..len).map(|_| rng.random_range(0..q)).collect();
            group.throughput(Throughput::Elements(len as u64));
            group.bench_with_input(BenchmarkId::new(format!("q{q}"), len), &u, |b, u| {
                b.iter(|| polar_encode(u, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("sc_decode");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (q, name) in CASES {
        for len in [256, 1024] {
            let cfg = CodeConfig::uniform(&Kernel::builtin(name, Some(q)).unwrap(), len).unwrap();
            let set = SignalSet::psk(q, 1.0).unwrap();
            let (_, flat) = channel(&cfg, &set, &mut rng);
            let mut dec = ScDecoder::new(&cfg);
            group.throughput(Throughput::Elements(len as u64));
            group.bench_function(BenchmarkId::new(format!("q{q}"), len), |b| {
                b.iter(|| dec.decode_flat(&flat).unwrap().len())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("genie_decode");
    let cfg = CodeConfig::uniform(&Kernel::builtin("L8", Some(8)).unwrap(), 256).unwrap();
    let set = SignalSet::psk(8, 1.0).unwrap();
    let (u, flat) = channel(&cfg, &set, &mut rng);
    let mut dec = ScDecoder::new(&cfg);
    group.bench_function("q8/256", |b| b.iter(|| dec.genie_flat(&flat, &u).unwrap().len()));
    group.finish();
}

fn bench_fer(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_fer");
    group.sample_size(10);
    let set = SignalSet::psk(5, 1.0).unwrap();
    let frozen: Vec<usize> = (0..146).collect();
    let cfg = CodeConfig::uniform(&Kernel::builtin("L5a", Some(5)).unwrap(), 256)
        .unwrap()
        .with_frozen(&frozen)
        .unwrap();
    let nm = NoiseModel::new(1.0, 3.0).unwrap();
    group.throughput(Throughput::Elements(1000));
    group.bench_function("q5/256/1000_frames", |b| b.iter(|| run_fer(&cfg, &set, &nm, 1000, 0).unwrap().frame_errors));
    group.finish();
}

criterion_group!(benches, bench_encode, bench_decode, bench_fer);
criterion_main!(benches);
