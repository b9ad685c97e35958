//! Benchmark inputs shared by the criterion targets.

use irrarray_core::PartitionSpec;

/// Partitions with a closed-form locator, by name.
pub fn cases() -> Vec<(&'static str, PartitionSpec)> {
    vec![
        ("linear:2,0", PartitionSpec::linear(2, 0).unwrap()),
        ("quad:1,0,1", PartitionSpec::quadratic(1, 0, 1).unwrap()),
        ("poly:25", PartitionSpec::polygonal(25).unwrap()),
        ("cubic:1,0,0,1", PartitionSpec::cubic(1, 0, 0, 1).unwrap()),
        ("geom:2", PartitionSpec::geometric(2).unwrap()),
        ("diag:3,first", PartitionSpec::merged_diagonals(3, true).unwrap()),
    ]
}

/// `count` indices spread over `[base, 2 base)`.
pub fn indices(base: u64, count: u64) -> Vec<u64> {
    let step = (base / count).max(1);
    (0..count).map(|i| base + i * step).collect()
}
