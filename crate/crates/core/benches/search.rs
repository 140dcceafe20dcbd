//! Sequential against rayon-chunked scanning of the bundled F_3 shapes.

use criterion::{criterion_group, criterion_main, Criterion};
use kodaira_core::search::{fixture, scan_sequential};

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    for name in ["i14star_f3", "i19_f3"] {
        let spec = fixture(name).unwrap();
        g.bench_function(format!("{name}/sequential"), |b| {
            b.iter(|| scan_sequential(&spec).unwrap())
        });
        #[cfg(feature = "parallel")]
        g.bench_function(format!("{name}/parallel"), |b| {
            b.iter(|| kodaira_core::search::scan_parallel(&spec, 0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
