use exactgeo::perturb::{reset_stats, stats};
use exactgeo::booleans::{arc_boolean, BoolOp, FillRule};
use exactgeo::Kernel;
use exactgeo_cli::gen::{arc_foursomes_with_jitter, ArcClass};
use std::time::Instant;

fn main() {
    let k = Kernel::default();
    for &j in &[1i64, 1 << 8, 1 << 16, 1 << 24, 1 << 32] {
        let (c, l) = arc_foursomes_with_jitter(&k, 40, ArcClass::Near, 1, j);
        reset_stats();
        let t0 = Instant::now();
        let u = arc_boolean(&k, &c, &l, &[], BoolOp::Union, FillRule::NonZero).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        let s = stats();
        println!(
            "jitter 2^{:2} time={dt:.3}s loops={} calls={} interval={:.1}% l1={} per-call={:.2}us",
            (j as f64).log2() as u32,
            u.len(),
            s.total_calls(),
            100.0 * s.interval_resolved as f64 / s.total_calls() as f64,
            s.level_resolved[1],
            1e6 * dt / s.total_calls() as f64
        );
    }
}
