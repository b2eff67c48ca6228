//! The digit system behind generalized LS-sequences.
//!
//! A positive integer `N` with `t_n ≤ N < t_{n+1}` is written as
//!
//! ```text
//! N = Σ_{i=0}^{n} (ε_i T_i + η_i l_{i,1})
//! ```
//!
//! where `T_n = t_n` and, below the top, `T_i = l_{i,1} + ... + l_{i,j+2}` with
//! `j` the number of consecutive `ε = 0` positions directly above `i`.
//! [`phi`] computes the digits greedily from the top, [`psi`] evaluates them.
//! For `k = 2` every weight collapses to `t_i`; for `k = 1` this is plain
//! base-`L_1` notation.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::counts::CountsTable;
use crate::error::{Error, Result};
use crate::spectral::Params;

/// Largest `n_max` accepted by [`enumerate_expansions`].
pub const ENUMERATION_LIMIT: usize = 12;

/// One digit pair `(ε, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Digit {
    pub eps: bool,
    pub eta: u32,
}

impl Digit {
    pub const ZERO: Digit = Digit { eps: false, eta: 0 };

    pub fn new(eps: bool, eta: u32) -> Self {
        Digit { eps, eta }
    }

    /// `ε + η`, the index of the chosen sub-interval in a split.
    pub fn value(self) -> u32 {
        self.eps as u32 + self.eta
    }
}

/// Digits `((ε_n, η_n), ..., (ε_0, η_0))`, most significant first.
///
/// The empty expansion stands for `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitExpansion {
    digits: Vec<Digit>,
}

impl DigitExpansion {
    /// Wraps digits given most significant first. No validity check.
    pub fn from_digits(digits: Vec<Digit>) -> Self {
        DigitExpansion { digits }
    }

    pub fn from_pairs(pairs: &[(u8, u32)]) -> Self {
        DigitExpansion { digits: pairs.iter().map(|&(e, h)| Digit::new(e != 0, h)).collect() }
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at position `i` (0 = least significant); zero above the top.
    pub fn at(&self, i: usize) -> Digit {
        let len = self.digits.len();
        if i < len {
            self.digits[len - 1 - i]
        } else {
            Digit::ZERO
        }
    }

    /// Drops the lowest `m` positions; leading zero digits of the result are removed.
    pub fn shifted(&self, m: usize) -> DigitExpansion {
        let keep = self.digits.len().saturating_sub(m);
        let start = self.digits[..keep].iter().position(|d| d.eps).unwrap_or(keep);
        DigitExpansion { digits: self.digits[start..keep].to_vec() }
    }

    /// The lowest `m` positions as a standalone expansion (leading zeros removed).
    pub fn truncated(&self, m: usize) -> DigitExpansion {
        let from = self.digits.len().saturating_sub(m);
        let low = &self.digits[from..];
        let start = low.iter().position(|d| d.eps).unwrap_or(low.len());
        DigitExpansion { digits: low[start..].to_vec() }
    }
}

impl fmt::Display for DigitExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "({},{})", d.eps as u8, d.eta)?;
        }
        Ok(())
    }
}

impl FromStr for DigitExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidExpansion(format!("cannot parse {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Ok(DigitExpansion::default());
        }
        let digits = s
            .split(';')
            .map(|pair| {
                let inner = pair.trim().strip_prefix('(').and_then(|p| p.strip_suffix(')')).ok_or_else(bad)?;
                let (e, h) = inner.split_once(',').ok_or_else(bad)?;
                let eps = match e.trim() {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad()),
                };
                let eta = h.trim().parse::<u32>().map_err(|_| bad())?;
                Ok(Digit { eps, eta })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitExpansion { digits })
    }
}

/// Arithmetic shared by the `u64` and arbitrary-precision paths.
trait Count:
    Clone + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn to_eta(&self) -> u32;
}

impl Count for u64 {
    fn to_eta(&self) -> u32 {
        *self as u32
    }
}

impl Count for BigUint {
    fn to_eta(&self) -> u32 {
        self.to_u32().expect("digit fits in u32")
    }
}

/// Greedy digit extraction. `prefix(i, r)` must return `l_{i,1} + ... + l_{i,r}`.
fn expand<T: Count>(n: T, top: usize, t_top: T, prefix: impl Fn(usize, usize) -> T, out: &mut Vec<Digit>) {
    out.clear();
    let mut rem = n;
    let mut run = 0usize;
    for m in (0..=top).rev() {
        let weight = if m == top { t_top.clone() } else { prefix(m, run + 2) };
        if rem >= weight {
            let l1 = prefix(m, 1);
            let eta = (rem.clone() - weight.clone()) / l1.clone();
            rem = rem - weight - eta.clone() * l1;
            out.push(Digit { eps: true, eta: eta.to_eta() });
            run = 0;
        } else {
            out.push(Digit::ZERO);
            run += 1;
        }
    }
    debug_assert!(rem.is_zero());
}

/// `Φ(N)` for arbitrary-precision `N ≥ 1`; the table must cover its level.
pub fn phi(counts: &CountsTable, n: &BigUint) -> Result<DigitExpansion> {
    if let Some(small) = n.to_u64() {
        if counts.fast_levels() > 0 {
            return phi_u64(counts, small);
        }
    }
    let top = counts.level_of(n)?;
    let mut digits = Vec::with_capacity(top + 1);
    expand(n.clone(), top, counts.t(top).clone(), |i, r| counts.partial_sum(i, r), &mut digits);
    Ok(DigitExpansion { digits })
}

/// `Φ(N)` on the `u64` fast path.
pub fn phi_u64(counts: &CountsTable, n: u64) -> Result<DigitExpansion> {
    let mut digits = Vec::new();
    phi_u64_into(counts, n, &mut digits)?;
    Ok(DigitExpansion { digits })
}

/// Like [`phi_u64`] but reuses `out` (most significant digit first).
pub fn phi_u64_into(counts: &CountsTable, n: u64, out: &mut Vec<Digit>) -> Result<()> {
    let top = counts.level_of_u64(n)?;
    let t_top = counts.t_u64(top).expect("level_of_u64 returns mirrored levels");
    expand(n, top, t_top, |i, r| counts.fast_prefix(i, r), out);
    Ok(())
}

/// The weights `T_i` implied by the zero-run structure of `digits`, most
/// significant first. The top weight is `t_n`.
pub fn weights(counts: &CountsTable, expansion: &DigitExpansion) -> Result<Vec<BigUint>> {
    let len = expansion.len();
    if len == 0 {
        return Ok(Vec::new());
    }
    let top = len - 1;
    if counts.max_level() < top {
        return Err(Error::LevelNotCovered { level: top });
    }
    let mut run = 0usize;
    let mut out = Vec::with_capacity(len);
    for (idx, d) in expansion.digits().iter().enumerate() {
        let i = top - idx;
        out.push(if i == top { counts.t(top).clone() } else { counts.partial_sum(i, run + 2) });
        run = if d.eps { 0 } else { run + 1 };
    }
    Ok(out)
}

/// `Ψ(D) = Σ_i (ε_i T_i + η_i l_{i,1})`; the empty expansion maps to 0.
pub fn psi(counts: &CountsTable, expansion: &DigitExpansion) -> Result<BigUint> {
    check_expansion(counts.params(), expansion)?;
    let top = expansion.len().saturating_sub(1);
    let weights = weights(counts, expansion)?;
    let mut total = BigUint::zero();
    for (idx, (d, w)) in expansion.digits().iter().zip(weights).enumerate() {
        if d.eps {
            total += w + counts.l(top - idx, 1) * d.eta;
        }
    }
    Ok(total)
}

/// Checks the digit constraints; `Err` carries the first violation found.
///
/// The run-length rule is applied to positions with `ε_i = 1`, i.e. to digits
/// `ε_i + η_i ≥ L_1 + ... + L_m`. Read literally for `ε_i = 0` it would forbid
/// `ε_{i+1} = 1` after every zero whenever `L_1 = 1`.
pub fn check_expansion(params: &Params, expansion: &DigitExpansion) -> Result<()> {
    let digits = expansion.digits();
    let Some(first) = digits.first() else { return Ok(()) };
    let fail = |msg: String| Err(Error::InvalidExpansion(msg));
    if !first.eps {
        return fail("leading digit must have ε = 1".into());
    }
    let max_eta = params.pieces() - 2;
    let k = params.k();
    for i in 0..expansion.len() {
        let d = expansion.at(i);
        if d.eta as u64 > max_eta {
            return fail(format!("η_{i} = {} exceeds {max_eta}", d.eta));
        }
        if !d.eps && d.eta != 0 {
            return fail(format!("ε_{i} = 0 but η_{i} = {}", d.eta));
        }
        if !d.eps {
            continue;
        }
        for m in 1..k {
            if i + m >= expansion.len() {
                break;
            }
            if d.eta as u64 + 1 >= params.partial_sum(m) && expansion.at(i + m).eps {
                return fail(format!("η_{i} = {} forces ε_{} = 0", d.eta, i + m));
            }
        }
    }
    Ok(())
}

pub fn is_valid_expansion(params: &Params, expansion: &DigitExpansion) -> bool {
    check_expansion(params, expansion).is_ok()
}

/// Every valid expansion of length `1..=n_max`, by length then lexicographically
/// (with `(0,0) < (1,0) < (1,1) < ...`).
pub fn enumerate_expansions(params: &Params, n_max: usize) -> Result<impl Iterator<Item = DigitExpansion> + '_> {
    if n_max > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("n_max = {n_max} > {ENUMERATION_LIMIT}")));
    }
    Ok((1..=n_max).flat_map(move |len| {
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(len);
        fill(params, len, &mut stack, &mut out);
        out
    }))
}

fn fill(params: &Params, len: usize, stack: &mut Vec<Digit>, out: &mut Vec<DigitExpansion>) {
    if stack.len() == len {
        out.push(DigitExpansion { digits: stack.clone() });
        return;
    }
    // position of the digit about to be placed
    let i = len - 1 - stack.len();
    // ε_{i+m} = 1 above requires η_i ≤ S_m - 2 for ε_i = 1
    let mut cap = params.pieces() as i64 - 2;
    for m in 1..params.k() {
        if i + m < len && stack[len - 1 - (i + m)].eps {
            cap = cap.min(params.partial_sum(m) as i64 - 2);
        }
    }
    if !stack.is_empty() {
        stack.push(Digit::ZERO);
        fill(params, len, stack, out);
        stack.pop();
    }
    for eta in 0..=cap {
        stack.push(Digit::new(true, eta as u32));
        fill(params, len, stack, out);
        stack.pop();
    }
}
