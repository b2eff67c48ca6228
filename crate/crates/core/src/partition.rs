//! Direct simulation of the successive refinements of `[0,1)`.
//!
//! Independent of the numeration: intervals are split geometrically and
//! their left endpoints tracked as exact [`BetaCoeffs`].

use num_traits::ToPrimitive;

use crate::coeffs::BetaCoeffs;
use crate::counts::CountsTable;
use crate::error::{Error, Result};
use crate::spectral::Params;

/// Largest partition [`partition_at_level`] will build.
pub const MAX_INTERVALS: u64 = 10_000_000;

/// `[left, left + β^exponent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInterval {
    pub left: BetaCoeffs,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    params: Params,
    level: u32,
    intervals: Vec<PartitionInterval>,
}

impl Partition {
    /// `{[0,1)}`.
    pub fn trivial(params: &Params) -> Self {
        Partition {
            params: params.clone(),
            level: 0,
            intervals: vec![PartitionInterval { left: BetaCoeffs::zero(), exponent: 0 }],
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Intervals in left-to-right order.
    pub fn intervals(&self) -> &[PartitionInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Splits every interval of maximal length `β^n` into `L_1` pieces of
    /// length `β^{n+1}`, then `L_2` of `β^{n+2}`, and so on.
    pub fn refine(&self) -> Partition {
        let n = self.level;
        let pieces = self.params.pieces() as usize;
        let longest = self.intervals.iter().filter(|iv| iv.exponent == n).count();
        let mut out = Vec::with_capacity(self.intervals.len() + longest * (pieces - 1));
        for iv in &self.intervals {
            if iv.exponent != n {
                out.push(iv.clone());
                continue;
            }
            let mut left = iv.left.clone();
            for (j, &count) in self.params.coeffs().iter().enumerate() {
                let exponent = n + 1 + j as u32;
                for _ in 0..count {
                    out.push(PartitionInterval { left: left.clone(), exponent });
                    left.add_term(exponent as usize, 1);
                }
            }
        }
        Partition { params: self.params.clone(), level: n + 1, intervals: out }
    }

    /// Left endpoints as floats, increasing.
    pub fn left_endpoints(&self, beta: f64) -> Vec<f64> {
        self.intervals.iter().map(|iv| iv.left.evaluate(beta)).collect()
    }

    /// Number of intervals of length `β^{n+i-1}` for `i = 1..=k`.
    pub fn exponent_counts(&self) -> Vec<u64> {
        let k = self.params.k();
        let mut counts = vec![0u64; k];
        for iv in &self.intervals {
            counts[(iv.exponent - self.level) as usize] += 1;
        }
        counts
    }

    /// `Σ β^{m_i}`.
    pub fn total_length(&self, beta: f64) -> f64 {
        self.intervals.iter().map(|iv| beta.powi(iv.exponent as i32)).sum()
    }
}

/// The `n`-th refinement of the trivial partition.
pub fn partition_at_level(params: &Params, n: u32) -> Result<Partition> {
    let counts = CountsTable::new(params, n as usize);
    let size = counts.t(n as usize).to_u64().unwrap_or(u64::MAX);
    if size > MAX_INTERVALS {
        return Err(Error::TooLarge(format!("level {n} has {} intervals", counts.t(n as usize))));
    }
    let mut p = Partition::trivial(params);
    for _ in 0..n {
        p = p.refine();
    }
    Ok(p)
}
