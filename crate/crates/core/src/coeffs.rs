use std::fmt;

use crate::numeration::Digit;
use crate::spectral::Params;

/// Exact non-negative integer combination `Σ_{p ≥ 1} c_p β^p`.
///
/// Stored densely (`c_p` at index `p - 1`) with trailing zeros trimmed, so two
/// values are equal iff their coefficient vectors are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BetaCoeffs(Vec<u32>);

impl BetaCoeffs {
    pub fn zero() -> Self {
        BetaCoeffs(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `c_p`.
    pub fn coeff(&self, power: usize) -> u32 {
        if power == 0 {
            return 0;
        }
        self.0.get(power - 1).copied().unwrap_or(0)
    }

    /// Highest power with a nonzero coefficient (0 for the zero value).
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Nonzero `(power, coefficient)` pairs in increasing power order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i + 1, c))
    }

    pub fn add_term(&mut self, power: usize, count: u32) {
        assert!(power >= 1, "β^0 never appears in a point coordinate");
        if count == 0 {
            return;
        }
        if self.0.len() < power {
            self.0.resize(power, 0);
        }
        self.0[power - 1] += count;
    }

    /// Horner evaluation in descending powers.
    pub fn evaluate(&self, beta: f64) -> f64 {
        horner(&self.0, beta)
    }

    /// Coefficients of a point from its digits (least significant digit at
    /// position 0 contributes to `β^1 .. β^k`).
    pub fn from_digits(params: &Params, digits: &[Digit]) -> Self {
        let mut buf = Vec::new();
        fill_from_digits(params, digits, &mut buf);
        BetaCoeffs(buf)
    }
}

/// Number of `β^{j}` pieces to the left of sub-interval `d` in one split, for
/// `j = 1..=k`: `clamp(d - S_{j-1}, 0, L_j)`, unbounded for `j = k`.
pub(crate) fn piece_offsets(params: &Params, d: u32, mut emit: impl FnMut(usize, u32)) {
    let k = params.k();
    let d = d as u64;
    let mut below = 0u64;
    for j in 1..=k {
        if d <= below {
            break;
        }
        let span = d - below;
        let take = if j < k { span.min(params.l(j) as u64) } else { span };
        emit(j, take as u32);
        below += params.l(j) as u64;
    }
}

/// `digits` most significant first, as produced by the numeration.
pub(crate) fn fill_from_digits(params: &Params, digits: &[Digit], buf: &mut Vec<u32>) {
    buf.clear();
    let len = digits.len();
    if len == 0 {
        return;
    }
    buf.resize(len + params.k(), 0);
    for (idx, d) in digits.iter().enumerate() {
        let position = len - 1 - idx;
        let value = d.value();
        if value == 0 {
            continue;
        }
        piece_offsets(params, value, |j, c| buf[position + j - 1] += c);
    }
    while buf.last() == Some(&0) {
        buf.pop();
    }
}

/// Largest double below 1.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Every coefficient vector built here stands for a point of `[0,1)`; the
/// clamp only catches values within half an ulp of 1 that round up.
pub(crate) fn horner(coeffs: &[u32], beta: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| (acc + c as f64) * beta).min(BELOW_ONE)
}

impl fmt::Display for BetaCoeffs {
    /// `m:c` pairs separated by spaces, e.g. `2:2 3:1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in self.terms() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{p}:{c}")?;
        }
        Ok(())
    }
}
