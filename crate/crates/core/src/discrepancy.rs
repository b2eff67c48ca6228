//! Exact one-dimensional discrepancy of finite point sets.

use serde::Serialize;

use crate::counts::CountsTable;
use crate::error::{Error, Result};
use crate::partition::{partition_at_level, MAX_INTERVALS};
use crate::spectral::{solve_spectral, Params};

/// Largest set accepted by [`brute_force_discrepancy`].
pub const BRUTE_FORCE_LIMIT: usize = 500;

/// Largest set accepted by the order-statistics routines.
pub const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub n_points: u64,
    pub star: f64,
    pub extreme: f64,
    /// `sup_a (A([0,a))/N - a)`.
    pub d_plus: f64,
    /// `sup_a (a - A([0,a))/N)`.
    pub d_minus: f64,
}

fn sorted_checked(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    if values.len() > MAX_POINTS {
        return Err(Error::TooLarge(format!("{} points", values.len())));
    }
    if let Some(&bad) = values.iter().find(|v| !(0.0..1.0).contains(*v)) {
        return Err(Error::OutOfRange(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted)
}

fn summarize(sorted: &[f64]) -> DiscrepancyReport {
    let n = sorted.len() as f64;
    let mut d_plus = f64::NEG_INFINITY;
    let mut d_minus = f64::NEG_INFINITY;
    for (i, &x) in sorted.iter().enumerate() {
        d_plus = d_plus.max((i + 1) as f64 / n - x);
        d_minus = d_minus.max(x - i as f64 / n);
    }
    DiscrepancyReport {
        n_points: sorted.len() as u64,
        star: d_plus.max(d_minus),
        extreme: d_plus + d_minus,
        d_plus,
        d_minus,
    }
}

/// Star and extreme discrepancy with both one-sided extrema.
pub fn report(values: &[f64]) -> Result<DiscrepancyReport> {
    Ok(summarize(&sorted_checked(values)?))
}

/// [`report`] for input already in increasing order, skipping the sort.
pub fn report_sorted(sorted: &[f64]) -> Result<DiscrepancyReport> {
    let (Some(&first), Some(&last)) = (sorted.first(), sorted.last()) else {
        return Err(Error::EmptySet);
    };
    if sorted.len() > MAX_POINTS {
        return Err(Error::TooLarge(format!("{} points", sorted.len())));
    }
    if !(0.0..1.0).contains(&first) || !(0.0..1.0).contains(&last) {
        let bad = if (0.0..1.0).contains(&first) { last } else { first };
        return Err(Error::OutOfRange(bad));
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0].partial_cmp(&w[1]).is_none_or(|o| o.is_gt())) {
        return Err(Error::InvalidInput(format!("not sorted: {} before {}", w[0], w[1])));
    }
    Ok(summarize(sorted))
}

pub fn star_discrepancy(values: &[f64]) -> Result<f64> {
    report(values).map(|r| r.star)
}

pub fn extreme_discrepancy(values: &[f64]) -> Result<f64> {
    report(values).map(|r| r.extreme)
}

/// Interval endpoint `x` or the right limit `x⁺`.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct Cut {
    at: f64,
    after: bool,
}

impl Cut {
    /// `#{v : v < cut}` in a sorted slice.
    fn below(self, sorted: &[f64]) -> usize {
        if self.after {
            sorted.partition_point(|&v| v <= self.at)
        } else {
            sorted.partition_point(|&v| v < self.at)
        }
    }
}

/// Suprema over every interval whose ends are critical cuts: `0`, `1`, each
/// point and the right limit at each point. `O(N² log N)`; a test oracle.
pub fn brute_force_discrepancy(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!("{} points (limit {BRUTE_FORCE_LIMIT})", values.len())));
    }
    let sorted = sorted_checked(values)?;
    let n = sorted.len() as f64;
    let mut cuts = vec![Cut { at: 0.0, after: false }, Cut { at: 1.0, after: false }];
    for &x in &sorted {
        cuts.push(Cut { at: x, after: false });
        cuts.push(Cut { at: x, after: true });
    }
    let deviation = |a: Cut, b: Cut| {
        let count = b.below(&sorted) - a.below(&sorted);
        (count as f64 / n - (b.at - a.at)).abs()
    };

    let origin = Cut { at: 0.0, after: false };
    let star = cuts.iter().filter(|c| c.at > 0.0 || c.after).map(|&b| deviation(origin, b)).fold(0.0, f64::max);
    let mut extreme: f64 = 0.0;
    for &a in &cuts {
        for &b in &cuts {
            if a < b {
                extreme = extreme.max(deviation(a, b));
            }
        }
    }
    Ok((star, extreme))
}

/// Star discrepancy of the `t_n` left endpoints of the `n`-th refinement.
pub fn partition_discrepancy(params: &Params, n: u32) -> Result<f64> {
    partition_report(params, n).map(|r| r.star)
}

/// Full report for the left endpoints of the `n`-th refinement.
pub fn partition_report(params: &Params, n: u32) -> Result<DiscrepancyReport> {
    let counts = CountsTable::new(params, n as usize);
    if counts.t_u64(n as usize).is_none_or(|t| t > MAX_INTERVALS) {
        return Err(Error::TooLarge(format!("level {n} has {} intervals", counts.t(n as usize))));
    }
    let beta = solve_spectral(params)?.beta();
    let ends = partition_at_level(params, n)?.left_endpoints(beta);
    report(&ends)
}

/// Signed deviation `#{x_i < b}/t_n - b` of the `n`-th refinement's left
/// endpoints, with `b` restricted to the partition points themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionDeviation {
    pub level: u32,
    pub t_n: u64,
    pub max_signed: f64,
    pub min_signed: f64,
}

impl PartitionDeviation {
    pub fn sup_abs(&self) -> f64 {
        self.max_signed.max(-self.min_signed)
    }
}

pub fn partition_deviation(params: &Params, n: u32) -> Result<PartitionDeviation> {
    let beta = solve_spectral(params)?.beta();
    let mut ends = partition_at_level(params, n)?.left_endpoints(beta);
    ends.sort_unstable_by(f64::total_cmp);
    let t = ends.len() as f64;
    // b = 1 contributes exactly zero
    let (mut max_signed, mut min_signed) = (0.0f64, 0.0f64);
    for (i, &x) in ends.iter().enumerate() {
        let dev = i as f64 / t - x;
        max_signed = max_signed.max(dev);
        min_signed = min_signed.min(dev);
    }
    Ok(PartitionDeviation { level: n, t_n: ends.len() as u64, max_signed, min_signed })
}
