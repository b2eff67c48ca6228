use lsseq::numeration::{enumerate_expansions, phi, phi_u64, psi, weights};
use lsseq::{CountsTable, DigitExpansion, Params};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

const FAMILY: &[&[u32]] = &[&[1, 1], &[2, 1], &[3, 1], &[2, 1, 1], &[3, 2, 1], &[4]];

fn params(c: &[u32]) -> Params {
    Params::new(c.to_vec()).unwrap()
}

#[test]
fn psi_inverts_phi_below_t8() {
    for &c in FAMILY {
        let counts = CountsTable::new(&params(c), 10);
        let t8 = counts.t_u64(8).unwrap();
        let mut prev_len = 0;
        for n in 1..t8 {
            let d = phi_u64(&counts, n).unwrap();
            assert_eq!(psi(&counts, &d).unwrap(), BigUint::from(n), "{c:?} N={n}");
            assert!(d.len() >= prev_len, "{c:?}: length decreased at N={n}");
            prev_len = d.len();
        }
    }
}

#[test]
fn expansion_counts() {
    for &c in FAMILY {
        let p = params(c);
        let counts = CountsTable::new(&p, 9);
        for n in 1..=8usize {
            let all: Vec<DigitExpansion> = enumerate_expansions(&p, n).unwrap().collect();
            assert_eq!(all.len() as u64 + 1, counts.t_u64(n).unwrap(), "{c:?} n={n}");
            let leading_one_zero =
                all.iter().filter(|d| d.len() == n && d.digits()[0].eps && d.digits()[0].eta == 0).count() as u64;
            assert_eq!(BigUint::from(leading_one_zero), counts.l(n - 1, 1), "{c:?} n={n}");
        }
    }
}

#[test]
fn enumerated_expansions_round_trip() {
    for &c in FAMILY {
        let p = params(c);
        let counts = CountsTable::new(&p, 9);
        for d in enumerate_expansions(&p, 7).unwrap() {
            let n = psi(&counts, &d).unwrap();
            assert_eq!(phi(&counts, &n).unwrap(), d, "{c:?}");
        }
    }
}

#[test]
fn two_term_weights_are_totals() {
    for c in [[1u32, 1], [2, 1], [3, 1], [5, 2]] {
        let counts = CountsTable::new(&params(&c), 20);
        for n in 1..counts.t_u64(12).unwrap().min(50_000) {
            let d = phi_u64(&counts, n).unwrap();
            let top = d.len() - 1;
            for (idx, w) in weights(&counts, &d).unwrap().into_iter().enumerate() {
                assert_eq!(&w, counts.t(top - idx), "{c:?} N={n} position {}", top - idx);
            }
        }
    }
}

proptest! {
    #[test]
    fn round_trip_u64(n in 1u64.., which in 0usize..FAMILY.len()) {
        let counts = CountsTable::for_u64(&params(FAMILY[which]));
        let d = phi_u64(&counts, n).unwrap();
        prop_assert_eq!(psi(&counts, &d).unwrap().to_u64(), Some(n));
    }

    #[test]
    fn round_trip_big(hi in 1u64.., lo in any::<u64>(), which in 0usize..FAMILY.len()) {
        let n = (BigUint::from(hi) << 64u32) + BigUint::from(lo);
        let mut counts = CountsTable::new(&params(FAMILY[which]), 0);
        counts.cover(&n);
        let d = phi(&counts, &n).unwrap();
        prop_assert_eq!(psi(&counts, &d).unwrap(), n);
    }
}
