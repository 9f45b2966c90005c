use std::hint::black_box;

use aperiodic::morphic::{FixedPointStream, Morphism};
use aperiodic::WordStream;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

const LETTERS: usize = 1 << 22;

fn expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixed_point");
    group.throughput(Throughput::Elements(LETTERS as u64));
    for (name, m) in [
        ("fib", Morphism::fibonacci()),
        ("trib", Morphism::tribonacci()),
    ] {
        let block = FixedPointStream::with_default_cap(m.clone(), 0)
            .unwrap()
            .power();
        for power in [1, block] {
            group.bench_with_input(
                BenchmarkId::new(name, format!("power {power}")),
                &power,
                |b, &p| {
                    let mut buf = vec![0; 1 << 16];
                    b.iter(|| {
                        let mut s = FixedPointStream::with_power(m.clone(), 0, p).unwrap();
                        for _ in 0..LETTERS / buf.len() {
                            s.fill(&mut buf);
                        }
                        black_box(buf[buf.len() - 1])
                    });
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, expansion);
criterion_main!(benches);
