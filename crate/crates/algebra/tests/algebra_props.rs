use num_traits::Signed;
use proptest::prelude::*;
use qal_algebra::rational::{pow2, q, qi, to_f64};
use qal_algebra::sturm::{count_real_roots, isolate_real_roots};
use qal_algebra::transcend::{exp, exp_q, ln, ln_q};
use qal_algebra::{Interval, UniPoly, Q};

fn small_q() -> impl Strategy<Value = Q> {
    (-400i64..=400, 1i64..=37).prop_map(|(n, d)| q(n, d))
}

fn pos_q() -> impl Strategy<Value = Q> {
    (1i64..=5000, 1i64..=97).prop_map(|(n, d)| q(n, d))
}

fn precs() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![64u32, 160, 512])
}

/// Width at most `2^(8 - prec)` relative to `max(1, |value|)`.
fn tight(i: &Interval, prec: u32) -> bool {
    let scale = Q::from_integer(1.into()).max(i.mag());
    i.width() <= pow2(8 - prec as i64) * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_matches_float_and_is_tight(x in small_q(), prec in precs()) {
        let e = exp_q(&x, prec);
        prop_assert!(tight(&e, prec), "{e}");
        let f = to_f64(&x).exp();
        prop_assert!(((e.mid_f64() - f) / f).abs() < 1e-13, "{} vs {f}", e.mid_f64());
    }

    #[test]
    fn ln_matches_float_and_is_tight(x in pos_q(), prec in precs()) {
        let l = ln_q(&x, prec);
        prop_assert!(tight(&l, prec), "{l}");
        let f = to_f64(&x).ln();
        prop_assert!((l.mid_f64() - f).abs() < 1e-13 * (1.0 + f.abs()));
    }

    #[test]
    fn exp_and_ln_are_inverse(x in pos_q()) {
        let back = exp(&ln_q(&x, 200), 200);
        prop_assert!(back.contains(&x), "{back} misses {x}");
        let y = x.clone() - qi(40);
        prop_assert!(ln(&exp_q(&y, 200), 200).unwrap().contains(&y));
    }

    #[test]
    fn exp_is_additive(a in small_q(), b in small_q()) {
        let lhs = exp_q(&a, 160).mul(&exp_q(&b, 160));
        let rhs = exp_q(&(&a + &b), 160);
        prop_assert!(lhs.overlaps(&rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn divrem_reassembles(a in prop::collection::vec(small_q(), 1..8), b in prop::collection::vec(small_q(), 1..5)) {
        let (a, b) = (UniPoly::new(a), UniPoly::new(b));
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.divrem(&b);
        prop_assert_eq!(quo.mul(&b).add(&rem), a);
        prop_assert!(rem.deg() < b.deg());
    }

    #[test]
    fn sturm_counts_constructed_roots(roots in prop::collection::btree_set(-30i64..=30, 0..6), c in 1i64..=9, k in 1u32..3) {
        // Π (x - r)^k (x^2 + c): the real roots are exactly the r
        let mut p = UniPoly::new(vec![qi(c), qi(0), qi(1)]);
        for r in &roots {
            p = p.mul(&UniPoly::new(vec![qi(-r), qi(1)]).pow(k));
        }
        prop_assert_eq!(count_real_roots(&p), roots.len());
        let iso = isolate_real_roots(&p);
        prop_assert_eq!(iso.len(), roots.len());
        for (root, r) in iso.iter().zip(&roots) {
            prop_assert!(root.interval().contains(&qi(*r)));
        }
    }
}

#[test]
fn ln_of_interval_brackets_endpoints() {
    let x = Interval::new(q(3, 2), q(7, 3));
    let l = ln(&x, 128).unwrap();
    assert!(l.lo() <= ln_q(&q(3, 2), 128).lo() && l.hi() >= ln_q(&q(7, 3), 128).hi());
    assert!(ln(&Interval::new(q(-1, 2), q(1, 2)), 128).is_none());
    assert!(!l.lo().is_negative());
}
