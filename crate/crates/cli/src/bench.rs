// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Benchmark records and their CSV form. The timing column is the only
//! nondeterministic field; everything else is reproducible from the seed and
//! flags.

use exactgeo::perturb::CascadeStats;

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub algorithm: &'static str,
    pub input_class: String,
    pub n: usize,
    pub seconds: f64,
    pub interval_resolved: u64,
    pub exact_resolved: u64,
    pub level1: u64,
    pub level2: u64,
    pub level3_plus: u64,
}

impl BenchRecord {
    pub fn new(
        algorithm: &'static str,
        input_class: &str,
        n: usize,
        seconds: f64,
        stats: &CascadeStats,
    ) -> BenchRecord {
        BenchRecord {
            algorithm,
            input_class: input_class.to_string(),
            n,
            seconds,
            interval_resolved: stats.interval_resolved,
            exact_resolved: stats.exact_resolved,
            level1: stats.level_resolved[1],
            level2: stats.level_resolved[2],
            level3_plus: stats.level_resolved[3..].iter().sum(),
        }
    }

    pub fn total_calls(&self) -> u64 {
        self.interval_resolved + self.exact_resolved + self.level1 + self.level2 + self.level3_plus
    }

    pub const CSV_HEADER: &'static str =
        "algorithm,input_class,n,seconds,interval_resolved,exact_resolved,level1,level2,level3_plus";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{},{},{},{}",
            self.algorithm,
            self.input_class,
            self.n,
            self.seconds,
            self.interval_resolved,
            self.exact_resolved,
            self.level1,
            self.level2,
            self.level3_plus
        )
    }
}

/// CSV text with a comment header recording the reproducibility inputs.
pub fn csv_document(records: &[BenchRecord], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(BenchRecord::CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Least-squares slope of log(time) against log(n).
pub fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = ((x as f64).ln(), y.max(1e-9).ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
