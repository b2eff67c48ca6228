//! Exact interval counts `t_n` and `l_{n,i}` of the refinement partitions.
//!
//! At level `n` the partition holds `l_{n,i}` intervals of length `β^{n+i-1}`
//! for `i = 1..=k`, and `t_n = l_{n,1} + ... + l_{n,k}` intervals overall.
//! Going from level `n-1` to `n` splits the `l_{n-1,1}` longest intervals,
//! which gives the first-order system
//!
//! ```text
//! l_{n,i} = l_{n-1,i+1} + L_i * l_{n-1,1}     (l_{n-1,k+1} = 0)
//! ```
//!
//! Rows are kept in arbitrary precision. A `u64` mirror is kept for every
//! row whose `t_n` fits, so hot paths (point generation) never touch bignums.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spectral::{Params, Spectral};

/// One level of the counts table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub t: BigUint,
    /// `l_{n,1}, ..., l_{n,k}`.
    pub l: Vec<BigUint>,
}

#[derive(Debug, Clone)]
struct FastRow {
    t: u64,
    /// prefix[r] = l_{n,1} + ... + l_{n,r}, prefix[0] = 0.
    prefix: Vec<u64>,
}

/// Append-only memoized table of `t_n` and `l_{n,i}`.
///
/// Reads take `&self`; extension takes `&mut self`, so a fully built table
/// can be shared between threads while growth stays single-writer.
#[derive(Debug, Clone)]
pub struct CountsTable {
    params: Params,
    rows: Vec<CountRow>,
    fast: Vec<FastRow>,
}

impl CountsTable {
    /// Builds rows `0..=n_max`.
    pub fn new(params: &Params, n_max: usize) -> Self {
        let k = params.k();
        let mut l0 = vec![BigUint::zero(); k];
        l0[0] = BigUint::one();
        let mut table =
            CountsTable { params: params.clone(), rows: vec![CountRow { t: BigUint::one(), l: l0 }], fast: Vec::new() };
        table.push_fast(0);
        table.extend_to(n_max);
        table
    }

    /// Builds every level whose `t_n` fits in a `u64`, plus one more, so that
    /// [`level_of_u64`](Self::level_of_u64) is defined for every `u64`.
    pub fn for_u64(params: &Params) -> Self {
        let mut table = CountsTable::new(params, 0);
        while table.fast.len() == table.rows.len() {
            let next = table.rows.len();
            table.extend_to(next);
        }
        table
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Highest level currently stored.
    pub fn max_level(&self) -> usize {
        self.rows.len() - 1
    }

    /// Extends the table so that it contains rows `0..=n_max`.
    pub fn extend_to(&mut self, n_max: usize) {
        let k = self.params.k();
        while self.rows.len() <= n_max {
            let prev = self.rows.last().expect("row 0 always present");
            let head = &prev.l[0];
            let l: Vec<BigUint> = (0..k)
                .map(|i| {
                    let carry = if i + 1 < k { prev.l[i + 1].clone() } else { BigUint::zero() };
                    carry + head * self.params.l(i + 1)
                })
                .collect();
            let t = l.iter().sum();
            self.rows.push(CountRow { t, l });
            let n = self.rows.len() - 1;
            self.push_fast(n);
        }
    }

    /// Extends the table until the level of `n` (and the level above it) is known.
    pub fn cover(&mut self, n: &BigUint) {
        while &self.rows.last().expect("row 0 always present").t <= n {
            let next = self.rows.len();
            self.extend_to(next);
        }
    }

    fn push_fast(&mut self, n: usize) {
        if self.fast.len() != n {
            return;
        }
        let row = &self.rows[n];
        let Some(t) = row.t.to_u64() else { return };
        let mut prefix = Vec::with_capacity(row.l.len() + 1);
        prefix.push(0u64);
        let mut acc = 0u64;
        for v in &row.l {
            // every l_{n,i} <= t_n, so the prefix sums fit as well
            acc += v.to_u64().expect("l_{n,i} <= t_n");
            prefix.push(acc);
        }
        self.fast.push(FastRow { t, prefix });
    }

    pub fn row(&self, n: usize) -> Option<&CountRow> {
        self.rows.get(n)
    }

    /// `t_n`; panics if the level is not stored.
    pub fn t(&self, n: usize) -> &BigUint {
        &self.rows[n].t
    }

    /// `l_{n,i}` with the conventions `l_{n,0} = t_n` and `l_{n,i} = 0` for `i > k`.
    pub fn l(&self, n: usize, i: usize) -> BigUint {
        let row = &self.rows[n];
        match i {
            0 => row.t.clone(),
            i if i <= row.l.len() => row.l[i - 1].clone(),
            _ => BigUint::zero(),
        }
    }

    /// `l_{n,1} + ... + l_{n,r}`, with `r` clamped to `k`.
    pub fn partial_sum(&self, n: usize, r: usize) -> BigUint {
        let row = &self.rows[n];
        row.l[..r.min(row.l.len())].iter().sum()
    }

    /// `t_n` as `u64` if it fits.
    pub fn t_u64(&self, n: usize) -> Option<u64> {
        self.fast.get(n).map(|r| r.t)
    }

    /// Number of leading levels with a `u64` mirror.
    pub fn fast_levels(&self) -> usize {
        self.fast.len()
    }

    pub(crate) fn fast_prefix(&self, n: usize, r: usize) -> u64 {
        let p = &self.fast[n].prefix;
        p[r.min(p.len() - 1)]
    }

    /// The unique `n` with `t_n <= N < t_{n+1}`.
    pub fn level_of(&self, n: &BigUint) -> Result<usize> {
        if n.is_zero() {
            return Err(Error::NonPositiveIndex);
        }
        // t_n is strictly increasing
        let above = self.rows.partition_point(|row| &row.t <= n);
        if above == self.rows.len() {
            return Err(Error::LevelNotCovered { level: self.rows.len() });
        }
        Ok(above - 1)
    }

    /// Same as [`level_of`](Self::level_of) on the `u64` mirror.
    pub fn level_of_u64(&self, n: u64) -> Result<usize> {
        if n == 0 {
            return Err(Error::NonPositiveIndex);
        }
        let above = self.fast.partition_point(|row| row.t <= n);
        if above == self.fast.len() && self.fast.len() == self.rows.len() {
            return Err(Error::LevelNotCovered { level: self.rows.len() });
        }
        Ok(above - 1)
    }
}

/// `Σ_j λ_{j,i} β_j^{-n}` evaluated in floating point.
///
/// Fails with `IllConditioned` if the imaginary part does not cancel to a
/// relative `1e-6`.
pub fn closed_form_count(spectral: &Spectral, n: u32, i: usize) -> Result<f64> {
    let exponent = -(n as i32);
    let sum = spectral
        .roots()
        .iter()
        .enumerate()
        .map(|(j, root)| spectral.lambda(j, i) * root.powi(exponent))
        .fold(num_complex::Complex64::new(0.0, 0.0), |acc, x| acc + x);
    let scale = sum.re.abs().max(1.0);
    if sum.im.abs() > 1e-6 * scale {
        return Err(Error::IllConditioned { residual: sum.im.abs() / scale });
    }
    Ok(sum.re)
}
