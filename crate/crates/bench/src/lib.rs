//! Workloads shared by the benchmarks.

use lsseq::discrepancy::star_discrepancy;
use lsseq::{LsSequence, Params};

/// Parameter tuples exercised by every benchmark.
pub const WORKLOADS: &[&[u32]] = &[&[1, 1], &[2, 1, 1], &[3, 2, 1], &[2]];

pub fn sequence(coeffs: &[u32]) -> LsSequence {
    let params = Params::new(coeffs.to_vec()).expect("valid workload");
    LsSequence::new(&params).expect("workload satisfies the root condition")
}

/// First `count` points (from index 1) followed by their star discrepancy.
pub fn generate_and_measure(seq: &LsSequence, count: u64) -> f64 {
    let values = seq.values(1, count + 1);
    star_discrepancy(&values).expect("points lie in [0,1)")
}
