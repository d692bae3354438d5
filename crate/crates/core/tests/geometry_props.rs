use proptest::prelude::*;
use qal_algebra::multipoly::vars_of;
use qal_algebra::parse::parse_poly;
use qal_algebra::rational::to_f64;
use qal_algebra::{MultiPoly, Q};
use qal_core::geometry::{d_exponent, puiseux_expand, tau_estimate, PuiseuxBranch, PuiseuxOptions};

fn mid(b: &PuiseuxBranch, k: usize) -> (f64, f64) {
    let z = b.terms[k].1.enclosure(96).unwrap();
    let m = |i: &qal_algebra::Interval| (to_f64(i.lo()) + to_f64(i.hi())) / 2.0;
    (m(&z.re), m(&z.im))
}

fn conjugate_present(all: &[PuiseuxBranch], b: &PuiseuxBranch) -> bool {
    all.iter().any(|c| {
        c.ramification == b.ramification
            && c.terms.len() == b.terms.len()
            && (0..b.terms.len()).all(|k| {
                let (br, bi) = mid(b, k);
                let (cr, ci) = mid(c, k);
                c.terms[k].0 == b.terms[k].0 && (br - cr).abs() < 1e-9 && (bi + ci).abs() < 1e-9
            })
    })
}

/// `y^d + Σ c_ij x^i y^j` with `i >= 1`, `j < d`.
fn germ() -> impl Strategy<Value = MultiPoly<Q>> {
    (1u32..=3)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(((1u32..=4), (0..d), -3i64..=3), 1..=4)))
        .prop_map(|(d, ts)| {
            let vars = vars_of(&["x", "y"]);
            let mut p = MultiPoly::monomial(&vars, vec![0, d], Q::from_integer(1.into()));
            for (i, j, c) in ts {
                p.add_term(vec![i, j], Q::from_integer(c.into()));
            }
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn branches_account_for_every_root(phi in germ()) {
        let e = puiseux_expand(&phi, &PuiseuxOptions { trunc: Some(6), ..Default::default() }).unwrap();
        prop_assert_eq!(e.total_multiplicity(), e.order);
        for b in &e.branches {
            prop_assert!(b.is_sound());
        }
    }

    #[test]
    fn branches_are_closed_under_conjugation(phi in germ()) {
        let e = puiseux_expand(&phi, &PuiseuxOptions { trunc: Some(6), ..Default::default() }).unwrap();
        for b in &e.branches {
            prop_assert!(conjugate_present(&e.branches, b));
        }
    }
}

#[test]
fn tau_regression_tracks_exact_value() {
    let shells: Vec<Q> = (3..=12).map(|k| Q::new(1.into(), (1i64 << k).into())).collect();
    for k in 1..=3i64 {
        let phi = parse_poly(&format!("y^2 + x^{}", 2 * k)).unwrap();
        let exact = d_exponent(&phi, &PuiseuxOptions::default()).unwrap();
        assert_eq!(exact.tau, Some(Q::from_integer(k.into())));
        let est = tau_estimate(&phi, &shells, 8).unwrap();
        assert!((est.slope - k as f64).abs() <= 0.15, "k = {k}: slope {}", est.slope);
    }
}
