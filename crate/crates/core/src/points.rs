//! Points `ξ^N` of a generalized LS-sequence and elementary intervals.
//!
//! Each digit `d_i = ε_i + η_i` of `Φ(N)` selects the `d_i`-th sub-interval of
//! a split at scale `β^i`, so the point is a finite sum of powers of `β` with
//! small integer coefficients. Index 0 is the point 0 (empty expansion).

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::coeffs::{fill_from_digits, horner, BetaCoeffs};
use crate::counts::CountsTable;
use crate::error::{Error, Result};
use crate::numeration::{self, Digit, DigitExpansion};
use crate::spectral::{solve_spectral, Params, Spectral};

/// One point of the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPoint {
    pub index: u64,
    pub coeffs: BetaCoeffs,
    pub value: f64,
}

/// `I_x^{(m)} = [ξ^x, ξ^x + β^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryInterval {
    pub x: u64,
    pub m: u32,
    pub left: BetaPoint,
    pub right_value: f64,
}

/// A generalized LS-sequence: validated parameters, roots and a counts table
/// covering every `u64` index.
#[derive(Debug, Clone)]
pub struct LsSequence {
    spectral: Spectral,
    counts: CountsTable,
}

impl LsSequence {
    pub fn new(params: &Params) -> Result<Self> {
        let spectral = solve_spectral(params)?;
        let counts = CountsTable::for_u64(params);
        Ok(LsSequence { spectral, counts })
    }

    pub fn params(&self) -> &Params {
        self.spectral.params()
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn counts(&self) -> &CountsTable {
        &self.counts
    }

    pub fn beta(&self) -> f64 {
        self.spectral.beta()
    }

    /// `Φ(N)`, with the empty expansion for `N = 0`.
    pub fn digits(&self, n: u64) -> DigitExpansion {
        if n == 0 {
            return DigitExpansion::default();
        }
        numeration::phi_u64(&self.counts, n).expect("table covers all u64")
    }

    pub fn point(&self, n: u64) -> BetaPoint {
        let digits = self.digits(n);
        let coeffs = BetaCoeffs::from_digits(self.params(), digits.digits());
        let value = coeffs.evaluate(self.beta());
        BetaPoint { index: n, coeffs, value }
    }

    /// `point(N)` for `N = start..end`.
    pub fn point_range(&self, start: u64, end: u64) -> impl Iterator<Item = BetaPoint> + '_ {
        (start..end).map(move |n| self.point(n))
    }

    /// Values of `point(N)` for `N = start..end`, without building `BetaPoint`s.
    pub fn values(&self, start: u64, end: u64) -> Vec<f64> {
        let mut digits: Vec<Digit> = Vec::new();
        let mut buf = Vec::new();
        let beta = self.beta();
        (start..end)
            .map(|n| {
                if n == 0 {
                    return 0.0;
                }
                numeration::phi_u64_into(&self.counts, n, &mut digits).expect("table covers all u64");
                fill_from_digits(self.params(), &digits, &mut buf);
                horner(&buf, beta)
            })
            .collect()
    }

    /// Index `s` such that sub-interval `d` of a split has length `β^{1+s}`.
    fn piece_class(&self, d: u32) -> usize {
        let p = self.params();
        (1..p.k()).find(|&r| (d as u64) < p.partial_sum(r)).map_or(p.k() - 1, |r| r - 1)
    }

    /// Whether `[ξ^x, ξ^x + β^m)` is a cell of some refinement level.
    ///
    /// `x` must be one of the `t_m` left endpoints of level `m`, and the cell
    /// starting there must not have been carved out at a scale that skips
    /// `β^m`: with `q` the top position of `Φ(x)`, the piece chosen there has
    /// length `β^{q+1+s}` and the interval is elementary iff `q + 1 + s ≤ m`.
    pub fn is_elementary(&self, x: u64, m: u32) -> bool {
        if m == 0 {
            return x == 0;
        }
        if let Some(t) = self.counts.t_u64(m as usize) {
            if x >= t {
                return false;
            }
        }
        if x == 0 {
            return true;
        }
        let d = self.digits(x);
        let q = d.len() - 1;
        let top = d.digits()[0].value();
        q + 1 + self.piece_class(top) <= m as usize
    }

    pub fn elementary_interval(&self, x: u64, m: u32) -> Result<ElementaryInterval> {
        if !self.is_elementary(x, m) {
            return Err(Error::NotElementary { x, m });
        }
        let left = self.point(x);
        let right_value = left.value + self.beta().powi(m as i32);
        Ok(ElementaryInterval { x, m, left, right_value })
    }

    /// Whether the lowest `m` digits of `Φ(N)` are those of `Φ(x)`.
    pub fn truncation_is(&self, n: u64, x: u64, m: u32) -> bool {
        self.digits(n).truncated(m as usize) == self.digits(x)
    }

    /// `A_x^{(m)}(N) = #{l ≤ N : ξ^l ∈ I_x^{(m)}}` from the digits of `N`
    /// above position `m`: `Ψ` of the shifted expansion, plus one.
    pub fn count_in_elementary(&self, x: u64, m: u32, n: u64) -> Result<u64> {
        if !self.is_elementary(x, m) {
            return Err(Error::NotElementary { x, m });
        }
        let digits = self.digits(n);
        if digits.truncated(m as usize) != self.digits(x) {
            return Err(Error::NotMember { x, m, n });
        }
        let upper = numeration::psi(&self.counts, &digits.shifted(m as usize))?;
        let count = upper + BigUint::from(1u32);
        Ok(count.to_u64().expect("count <= N + 1"))
    }

    /// `A_x^{(m)}(N) - N β^m`.
    pub fn local_remainder(&self, x: u64, m: u32, n: u64) -> Result<f64> {
        let count = self.count_in_elementary(x, m, n)?;
        Ok(count as f64 - n as f64 * self.beta().powi(m as i32))
    }
}

/// Base-`b` radical inverse (van der Corput), used as an independent check for `k = 1`.
pub fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while n > 0 {
        acc += (n % base) as f64 * scale;
        n /= base;
        scale *= inv;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn seq(c: &[u32]) -> LsSequence {
        LsSequence::new(&Params::new(c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn lms_points() {
        let s = seq(&[2, 1, 1]);
        assert_abs_diff_eq!(s.point(1).value, 0.392647, epsilon = 1e-6);
        let p8 = s.point(8);
        assert_eq!(p8.coeffs.to_string(), "2:2 3:1");
        assert_abs_diff_eq!(p8.value, 0.368877, epsilon = 1e-6);
        let p0 = s.point(0);
        assert!(p0.coeffs.is_zero());
        assert_eq!(p0.value, 0.0);
    }

    #[test]
    fn ranges() {
        let s = seq(&[2, 1, 1]);
        let v = s.values(0, 4);
        for (a, b) in v.iter().zip([0.0, 0.392647, 0.785294, 0.939465]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-6);
        }
        let from_points: Vec<f64> = s.point_range(0, 50).map(|p| p.value).collect();
        assert_eq!(from_points, s.values(0, 50));

        let fib = seq(&[1, 1]);
        assert_eq!(fib.values(0, 2), vec![0.0, fib.beta()]);

        assert_eq!(seq(&[2]).values(1, 4), vec![0.5, 0.25, 0.75]);
    }

    #[test]
    fn elementary_checks() {
        let s = seq(&[2, 1, 1]);
        assert!(s.is_elementary(0, 1));
        assert!(!s.is_elementary(2, 1));
        assert!(s.is_elementary(0, 0));
        assert!(!s.is_elementary(1, 0));
        let level_two: Vec<u64> = (0..20).filter(|&x| s.is_elementary(x, 2)).collect();
        assert_eq!(level_two, vec![0, 1, 2, 4, 5]);
        assert!(matches!(s.elementary_interval(3, 2), Err(Error::NotElementary { .. })));
    }

    #[test]
    fn elementary_counts() {
        let s = seq(&[2, 1, 1]);
        assert_eq!(s.count_in_elementary(0, 0, 9).unwrap(), 10);
        assert_eq!(s.count_in_elementary(1, 1, 9).unwrap(), 4);
        assert_eq!(s.count_in_elementary(0, 1, 4).unwrap(), 2);
        assert!(matches!(s.count_in_elementary(0, 1, 3), Err(Error::NotMember { .. })));
        assert_abs_diff_eq!(s.local_remainder(1, 1, 9).unwrap(), 4.0 - 9.0 * s.beta(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.local_remainder(0, 0, 9).unwrap(), 1.0, epsilon = 1e-12);

        let fib = seq(&[1, 1]);
        // ξ^1 = β lies outside [0, β), so only N = 0 is a member here
        assert!(matches!(fib.local_remainder(0, 1, 1), Err(Error::NotMember { .. })));
        assert_eq!(fib.local_remainder(0, 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(6, 2), 0.375);
        assert_eq!(radical_inverse(0, 3), 0.0);
    }
}
