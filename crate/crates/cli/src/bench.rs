//! Wall-clock comparison of the search locator and the closed forms.

use std::hint::black_box;
use std::ops::RangeInclusive;
use std::time::Instant;

use irrarray_core::closed_forms::ClosedForm;
use irrarray_core::{PartialSumTable, PartitionSpec};

use crate::CliError;

/// Coefficient of variation above which timings are flagged.
pub const NOISY_CV: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Methods {
    Oracle,
    Closed,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: &'static str,
    pub median_ns: f64,
    pub mean_ns: f64,
    /// Standard deviation over mean, across repetitions.
    pub cv: f64,
    pub reps: usize,
    pub points: usize,
}

impl BenchRow {
    pub fn noisy(&self) -> bool {
        self.cv > NOISY_CV
    }
}

/// `a..b` or `a..=b`, both inclusive.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u64>, CliError> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("`{text}`: expected a range like 1..1000000")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |v: &str| {
        v.replace('_', "")
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("`{v}` is not an index")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a == 0 || a > b {
        return Err(CliError::Usage(format!("`{text}`: need 1 <= start <= end")));
    }
    Ok(a..=b)
}

/// Up to `max_points` evenly spaced indices covering `range`.
pub fn sample_points(range: &RangeInclusive<u64>, max_points: u64) -> Vec<u64> {
    let (a, b) = (*range.start(), *range.end());
    let len = b - a + 1;
    let max_points = max_points.max(1);
    if len <= max_points {
        return (a..=b).collect();
    }
    let step = len.div_ceil(max_points);
    (0..max_points).map(|i| a + i * step).take_while(|&n| n <= b).collect()
}

fn time(points: &[u64], reps: usize, mut locate: impl FnMut(u64) -> u64) -> Vec<f64> {
    // warm caches first
    let mut sink = 0u64;
    for &n in points {
        sink = sink.wrapping_add(locate(n));
    }
    black_box(sink);
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            let mut sink = 0u64;
            for &n in points {
                sink = sink.wrapping_add(locate(black_box(n)));
            }
            black_box(sink);
            start.elapsed().as_nanos() as f64 / points.len() as f64
        })
        .collect()
}

fn summarize(method: &'static str, mut samples: Vec<f64>, points: usize) -> BenchRow {
    samples.sort_by(f64::total_cmp);
    let reps = samples.len();
    let median = if reps % 2 == 1 {
        samples[reps / 2]
    } else {
        (samples[reps / 2 - 1] + samples[reps / 2]) / 2.0
    };
    let mean = samples.iter().sum::<f64>() / reps as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / reps as f64;
    BenchRow {
        method,
        median_ns: median,
        mean_ns: mean,
        cv: if mean > 0.0 { var.sqrt() / mean } else { 0.0 },
        reps,
        points,
    }
}

/// Times block location over `range`. Closed-form and search results are
/// compared on every sampled index before any timing starts.
pub fn run_bench(
    spec: &PartitionSpec,
    range: RangeInclusive<u64>,
    methods: Methods,
    reps: usize,
    max_points: u64,
) -> Result<Vec<BenchRow>, CliError> {
    if reps == 0 {
        return Err(CliError::Usage("reps must be at least 1".into()));
    }
    let closed = match methods {
        Methods::Oracle => None,
        _ => Some(ClosedForm::for_spec(spec).ok_or_else(|| {
            CliError::Usage("explicit partitions have no closed form".into())
        })?),
    };
    let table = PartialSumTable::new(spec.clone());
    let points = sample_points(&range, max_points);

    if let Some(cf) = &closed {
        for &n in &points {
            let oracle = table.locate(n)?;
            let (_, pos) = cf.locate(n)?;
            if pos != oracle {
                return Err(CliError::Failure(format!(
                    "n={n}: oracle gives {oracle}, {} gives {pos}",
                    cf.method_name()
                )));
            }
        }
    }

    let mut rows = Vec::new();
    if methods != Methods::Closed {
        let samples = time(&points, reps, |n| table.locate(n).map_or(0, |p| p.block));
        rows.push(summarize("oracle", samples, points.len()));
    }
    if let Some(cf) = &closed {
        let samples = time(&points, reps, |n| cf.locate_block(n).map_or(0, |r| r.block));
        rows.push(summarize(cf.method_name(), samples, points.len()));
    }
    Ok(rows)
}
