use lsseq::bounds::generalized_ingredients;
use lsseq::discrepancy::star_discrepancy;
use lsseq::numeration::psi;
use lsseq::partition::partition_at_level;
use lsseq::points::radical_inverse;
use lsseq::{BetaCoeffs, DigitExpansion, LsSequence, Params};
use num_traits::ToPrimitive;
use std::collections::HashSet;

const FAMILY: &[&[u32]] = &[&[1, 1], &[2, 1], &[3, 1], &[2, 1, 1], &[3, 2, 1], &[4]];

fn seq(c: &[u32]) -> LsSequence {
    LsSequence::new(&Params::new(c.to_vec()).unwrap()).unwrap()
}

#[test]
fn points_are_partition_endpoints() {
    for &c in FAMILY {
        let s = seq(c);
        for n in 0..=10u32 {
            let t = s.counts().t_u64(n as usize).unwrap();
            let mut from_points: Vec<BetaCoeffs> = s.point_range(0, t).map(|p| p.coeffs).collect();
            let distinct: HashSet<&BetaCoeffs> = from_points.iter().collect();
            assert_eq!(distinct.len() as u64, t, "{c:?} n={n}: duplicate points");

            let part = partition_at_level(s.params(), n).unwrap();
            let mut from_partition: Vec<BetaCoeffs> = part.intervals().iter().map(|iv| iv.left.clone()).collect();
            from_points.sort();
            from_partition.sort();
            assert_eq!(from_points, from_partition, "{c:?} n={n}");

            let mut values = s.values(0, t);
            values.sort_by(f64::total_cmp);
            for (v, e) in values.iter().zip(part.left_endpoints(s.beta())) {
                assert!((v - e).abs() <= 1e-9, "{c:?} n={n}");
            }
        }
    }
}

#[test]
fn values_in_unit_interval() {
    for &c in FAMILY {
        let s = seq(c);
        assert!(s.values(0, 20_000).iter().all(|v| (0.0..1.0).contains(v)));
        for n in [u64::MAX, u64::MAX / 7, 1 << 40] {
            assert!((0.0..1.0).contains(&s.point(n).value));
        }
    }
}

#[test]
fn elementary_counts_match_scan() {
    for &c in FAMILY {
        let s = seq(c);
        let beta = s.beta();
        let r_tilde = generalized_ingredients(s.spectral()).r_tilde;
        let limit = s.counts().t_u64(7).unwrap();
        let values = s.values(0, limit + 1);
        let digits: Vec<DigitExpansion> = (0..=limit).map(|n| s.digits(n)).collect();
        let mut checked = 0u64;
        for m in 0..=6u32 {
            // owner[N] = the x whose digits are the lowest m digits of Φ(N)
            let owner: Vec<u64> =
                digits.iter().map(|d| psi(s.counts(), &d.truncated(m as usize)).unwrap().to_u64().unwrap()).collect();
            let width = beta.powi(m as i32);
            for x in 0..s.counts().t_u64(m as usize).unwrap() {
                if !s.is_elementary(x, m) {
                    continue;
                }
                let left = values[x as usize];
                let right = left + width;
                let mut inside = 0u64;
                for (n, &v) in values.iter().enumerate() {
                    if v >= left - 1e-12 && v < right - 1e-12 {
                        inside += 1;
                    }
                    if owner[n] != x {
                        continue;
                    }
                    let n = n as u64;
                    assert_eq!(s.count_in_elementary(x, m, n).unwrap(), inside, "{c:?} x={x} m={m} N={n}");
                    let rem = s.local_remainder(x, m, n).unwrap();
                    assert!(rem.abs() <= r_tilde, "{c:?} x={x} m={m} N={n} remainder {rem}");
                    checked += 1;
                }
            }
        }
        assert!(checked > limit, "{c:?}: only {checked} instances");
    }
}

#[test]
fn one_term_is_van_der_corput() {
    for b in [2u32, 3, 5] {
        let s = seq(&[b]);
        let values = s.values(0, 10_001);
        for (n, v) in values.iter().enumerate() {
            assert!((v - radical_inverse(n as u64, b as u64)).abs() <= 1e-15, "base {b} N={n}");
        }
    }
    let two = seq(&[2]);
    for (n, v) in two.values(0, 10_001).iter().enumerate() {
        assert_eq!(*v, radical_inverse(n as u64, 2), "N={n}");
    }
}

#[test]
fn first_points_are_uniform() {
    for &c in FAMILY {
        let s = seq(c);
        let d = star_discrepancy(&s.values(1, 10_001)).unwrap();
        assert!(d < 0.01, "{c:?}: D* = {d}");
    }
}
