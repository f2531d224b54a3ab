//! Fixed inputs shared by the benchmarks.

use arboreal::QuadPair;

/// Pairs covering each certificate rule and the abelian list.
pub fn sample_pairs() -> Vec<QuadPair> {
    ["-2,1", "-1,1", "-1,8", "-1,-1/2", "-1,0", "1/2,0", "3,-5/7", "-7/4,2/3"]
        .iter()
        .map(|s| s.parse().expect("valid pair"))
        .collect()
}
