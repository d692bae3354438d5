use proptest::prelude::*;
use qal_algebra::rational::to_f64;
use qal_algebra::Q;
use qal_core::sequence::{
    check_log_convexity, classify, compare_products, parse_sequence, verify_superadditivity, CarlemanSequence, Tri,
};
use std::cmp::Ordering;

fn ratio() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=4).prop_map(|(p, q)| Q::new(p.into(), q.into()))
}

fn builtin() -> impl Strategy<Value = CarlemanSequence> {
    prop_oneof![
        ratio().prop_map(|a| CarlemanSequence::gevrey(a).unwrap()),
        ratio().prop_map(|a| CarlemanSequence::log_gevrey(a).unwrap()),
        ratio().prop_map(|q| CarlemanSequence::q_gevrey(q + Q::from_integer(1.into())).unwrap()),
        Just(CarlemanSequence::analytic()),
    ]
}

/// `ln M_j` in floating point, written from the defining formulas.
fn ln_m(src: &str, j: usize) -> f64 {
    let j = j as f64;
    let arg = |s: &str| -> f64 {
        let inner = &s[s.find('(').unwrap() + 1..s.len() - 1];
        let q = qal_algebra::rational::parse_rational(inner).unwrap();
        to_f64(&q)
    };
    if src == "analytic" {
        0.0
    } else if src.starts_with("gevrey") {
        arg(src) * (1..=j as u64).map(|k| (k as f64).ln()).sum::<f64>()
    } else if src.starts_with("loggevrey") {
        arg(src) * j * (j + std::f64::consts::E).ln().ln()
    } else {
        j * j * arg(src).ln()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn builtins_are_log_convex_and_superadditive(m in builtin()) {
        prop_assert!(check_log_convexity(&m, 32, 128).unwrap().passed());
        prop_assert!(verify_superadditivity(&m, 32, 128).unwrap().passed());
    }

    #[test]
    fn product_comparison_matches_float_oracle(m in builtin(), a in 1usize..20, b in 1usize..20, c in 1usize..20) {
        let src = m.to_string();
        let lhs = 2.0 * ln_m(&src, a) + ln_m(&src, b);
        let rhs = ln_m(&src, c) + ln_m(&src, a + b);
        prop_assume!((lhs - rhs).abs() > 1e-6 * (1.0 + lhs.abs()));
        let want = if lhs < rhs { Ordering::Less } else { Ordering::Greater };
        let got = compare_products(&m, &[(a, 2), (b, 1)], &[(c, 1), (a + b, 1)], 128).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn dsl_round_trip(m in builtin(), s in ratio(), k in 0usize..3) {
        for src in [m.to_string(), format!("power({m},{})", qal_algebra::rational::fmt_q(&(s + Q::from_integer(1.into()))))] {
            let mut text = src.clone();
            for _ in 0..k {
                text = format!("shift({text})");
            }
            let p = parse_sequence(&text).unwrap();
            prop_assert_eq!(parse_sequence(&p.to_string()).unwrap(), p.clone());
        }
    }
}

#[test]
fn custom_round_trip() {
    for src in ["custom{1,2,6,24}", "custom{1,3/2,9/4;tail=gevrey(1)}"] {
        let p = parse_sequence(src).unwrap();
        assert_eq!(parse_sequence(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn family_matrix() {
    let t = Tri::True;
    let f = Tri::False;
    let cases: [(&str, [Tri; 5]); 6] = [
        // quasianalytic, strongly non-quasianalytic, moderate growth, strongly regular, analytic class
        ("loggevrey(1/2)", [t, f, t, f, f]),
        ("loggevrey(1)", [t, f, t, f, f]),
        ("loggevrey(2)", [f, f, t, f, f]),
        ("gevrey(1)", [f, t, t, t, f]),
        ("gevrey(3/2)", [f, t, t, t, f]),
        ("qgevrey(2)", [f, t, f, f, f]),
    ];
    for (src, want) in cases {
        let r = classify(&parse_sequence(src).unwrap(), 32, 128).unwrap();
        let got = [
            r.quasianalytic.value,
            r.strongly_non_quasianalytic.value,
            r.moderate_growth.value,
            r.strongly_regular.value,
            r.analytic_class.value,
        ];
        assert_eq!(got, want, "{src}");
        assert!(r.is_consistent());
    }
}
