use proptest::prelude::*;
use qal_algebra::Q;
use qal_core::hilbert::{build_model, derivative_at_zero, HilbertModel};
use qal_core::sequence::CarlemanSequence;
use std::sync::OnceLock;

const D: usize = 12;

fn model() -> &'static HilbertModel {
    static M: OnceLock<HilbertModel> = OnceLock::new();
    M.get_or_init(|| build_model(&CarlemanSequence::gevrey(Q::from_integer(1.into())).unwrap(), D).unwrap())
}

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=7).prop_map(|(p, q)| Q::new(p.into(), q.into()))
}

fn poly() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rational(), 1..=D + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn representers_reproduce_derivatives(u in poly(), i in 0..=D) {
        let m = model();
        let e = m.representer(i).unwrap();
        prop_assert_eq!(m.inner(&e, &u).unwrap(), derivative_at_zero(&u, i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// `|f|^2 = |g|^2 + |f - g|^2` for any `f` meeting the constraints of
    /// the minimal interpolant `g`.
    #[test]
    fn minimal_interpolant_is_orthogonal(f in poly(), k in 1..=D + 1) {
        let m = model();
        let b: Vec<Q> = (0..k).map(|i| derivative_at_zero(&f, i)).collect();
        let g = m.minimal_interpolant(&b).unwrap();
        prop_assert!(g.satisfies_constraints());
        let mut diff = g.coeffs.clone();
        for (d, c) in diff.iter_mut().zip(&f) {
            *d = c - &*d;
        }
        for d in diff.iter_mut().skip(f.len()) {
            *d = -d.clone();
        }
        let lhs = m.norm_sq(&f).unwrap();
        let rhs = &g.norm_sq + m.norm_sq(&diff).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(m.norm_sq(&g.coeffs).unwrap(), g.norm_sq.clone());
    }
}

#[test]
fn last_omega_column_is_one() {
    let m = model();
    let col = m.omega_column(D + 1).unwrap();
    assert!(col.iter().all(|w| *w == Q::from_integer(1.into())));
}
