//! One line per acceptance criterion. Run with
//! `cargo test -p qal-core --test acceptance`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qal_algebra::multipoly::vars_of;
use qal_algebra::parse::parse_poly;
use qal_algebra::rational::{factorial, parse_rational, pow2};
use qal_algebra::{MultiPoly, Q};
use qal_core::division::{
    euclid_divide, generic_divide, hyperbolic_check_2d, nodiv_witness, DistinguishedPoly, HyperbolicVerdict, Side,
};
use qal_core::geometry::{d_exponent, tau_estimate, PuiseuxOptions};
use qal_core::hilbert::{build_model, derivative_at_zero, divergence_demo, mat_vec};
use qal_core::oracle::{decide_closedness, decide_division, facts_from_poly, Verdict};
use qal_core::sequence::{
    check_log_convexity, classify, parse_sequence, verify_superadditivity, CarlemanSequence, SequenceReport, Tri,
};
use qal_core::theta::{theta_derivative_at_zero, theta_eval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const PREC: u32 = 128;
const SEED: u64 = 0x5eed;

type Check = fn() -> Result<(), String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: Check,
}

fn q(s: &str) -> Q {
    parse_rational(s).unwrap()
}

fn seq(s: &str) -> CarlemanSequence {
    parse_sequence(s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ac1() -> Result<(), String> {
    let flags = |s: &str| -> Result<SequenceReport, String> { classify(&seq(s), 32, PREC).map_err(err) };
    for (a, qa) in [("1/2", true), ("1", true), ("3/2", false), ("2", false), ("5", false)] {
        let r = flags(&format!("loggevrey({a})"))?;
        ensure(r.quasianalytic.value == Tri::from_bool(qa), || format!("loggevrey({a}) quasianalytic"))?;
        ensure(r.strongly_non_quasianalytic.value == Tri::False, || format!("loggevrey({a}) not strongly"))?;
    }
    for a in ["1/2", "1", "2", "7/3"] {
        let r = flags(&format!("gevrey({a})"))?;
        ensure(
            r.strongly_non_quasianalytic.value == Tri::True
                && r.strongly_regular.value == Tri::True
                && r.quasianalytic.value == Tri::False,
            || format!("gevrey({a})"),
        )?;
    }
    for b in ["2", "3", "3/2"] {
        let r = flags(&format!("qgevrey({b})"))?;
        ensure(
            r.strongly_non_quasianalytic.value == Tri::True
                && r.moderate_growth.value == Tri::False
                && r.strongly_regular.value == Tri::False,
            || format!("qgevrey({b})"),
        )?;
    }
    let r = flags("analytic")?;
    ensure(r.analytic_class.value == Tri::True && r.quasianalytic.value == Tri::True, || "analytic".into())
}

const BUILTINS: [&str; 9] = [
    "analytic",
    "gevrey(1/2)",
    "gevrey(1)",
    "gevrey(2)",
    "loggevrey(1/2)",
    "loggevrey(1)",
    "loggevrey(2)",
    "qgevrey(2)",
    "qgevrey(3/2)",
];

fn ac2() -> Result<(), String> {
    for s in BUILTINS {
        let m = seq(s);
        ensure(check_log_convexity(&m, 32, PREC).map_err(err)?.passed(), || format!("{s}: log-convexity"))?;
        ensure(verify_superadditivity(&m, 32, PREC).map_err(err)?.passed(), || format!("{s}: products/roots"))?;
    }
    Ok(())
}

fn ac3() -> Result<(), String> {
    for s in ["gevrey(1)", "gevrey(2)", "qgevrey(2)"] {
        let m = seq(s);
        for j in 0..=20 {
            let d = theta_derivative_at_zero(&m, j, 28, PREC).map_err(err)?;
            ensure(d.certified, || format!("{s}: lower bound at order {j}"))?;
        }
        for x in ["0", "1/4", "-1/4", "1/2", "-1/2"] {
            for j in 0..=12 {
                let v = theta_eval(&m, &q(x), j, 20, PREC).map_err(err)?;
                ensure(v.certified, || format!("{s}: upper bound at order {j}, x = {x}"))?;
            }
        }
    }
    Ok(())
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=9).into())
}

fn ac4() -> Result<(), String> {
    let m = seq("gevrey(1)");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for d in 1..=16 {
        let h = build_model(&m, d).map_err(err)?;
        ensure(h.ldl().is_positive_definite(), || format!("D = {d}: Gram not positive definite"))?;
        let x: Vec<Q> = (0..=d).map(|_| random_q(&mut rng)).collect();
        ensure(h.ldl().solve(&mat_vec(h.gram(), &x)) == x, || format!("D = {d}: LDL solve"))?;
        let col = h.omega_column(d + 1).map_err(err)?;
        ensure(col.iter().all(|w| w.is_one()), || format!("D = {d}: omega column k = D+1"))?;
    }
    let h = build_model(&m, 16).map_err(err)?;
    for _ in 0..200 {
        let u: Vec<Q> = (0..rng.gen_range(1..=17)).map(|_| random_q(&mut rng)).collect();
        let i = rng.gen_range(0..=16);
        let e = h.representer(i).map_err(err)?;
        ensure(h.inner(&e, &u).map_err(err)? == derivative_at_zero(&u, i), || format!("reproducing at order {i}"))?;
    }
    for _ in 0..50 {
        let f: Vec<Q> = (0..17).map(|_| random_q(&mut rng)).collect();
        let k = rng.gen_range(1..=17);
        let b: Vec<Q> = (0..k).map(|i| derivative_at_zero(&f, i)).collect();
        let g = h.minimal_interpolant(&b).map_err(err)?;
        let diff: Vec<Q> = f.iter().zip(&g.coeffs).map(|(a, c)| a - c).collect();
        let lhs = h.norm_sq(&f).map_err(err)?;
        let rhs = &g.norm_sq + h.norm_sq(&diff).map_err(err)?;
        ensure(g.satisfies_constraints() && lhs == rhs, || format!("Pythagoras with {k} constraints"))?;
    }
    Ok(())
}

fn ac5() -> Result<(), String> {
    let a = q("1/2");
    let threshold = Q::from_integer(BigInt::from(1_000_000));
    let ks: Vec<usize> = (0..40).collect();
    let t = divergence_demo(&seq("gevrey(1)"), &a, &ks, &threshold).map_err(err)?;
    // independent partial sums of k! 2^-k
    let mut s = Q::zero();
    let mut first = None;
    for (p, &k) in ks.iter().enumerate() {
        s += Q::from_integer(factorial(k as u64)) * pow2(-(k as i64));
        if p < t.partial_sums.len() {
            ensure(t.partial_sums[p] == s, || format!("partial sum {p}"))?;
        }
        if first.is_none() && s > threshold {
            first = Some(p);
        }
    }
    ensure(t.crossing.is_some() && t.crossing == first, || format!("crossing {:?} vs {:?}", t.crossing, first))?;
    // the trace stops at the crossing
    ensure(t.partial_sums.len() == first.unwrap() + 1, || format!("{} sums reported", t.partial_sums.len()))
}

fn random_xy(rng: &mut ChaCha8Rng, deg: u32, len: usize) -> MultiPoly<Q> {
    let vars = vars_of(&["x", "y"]);
    let mut p = MultiPoly::zero(&vars);
    for _ in 0..len {
        p.add_term(vec![rng.gen_range(0..=deg), rng.gen_range(0..=deg)], random_q(rng));
    }
    p
}

fn ac6() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let vars = vars_of(&["x", "y"]);
    for n in 0..300 {
        let p = random_xy(&mut rng, 5, 8);
        let d = rng.gen_range(1..=3u32);
        let mut f = MultiPoly::monomial(&vars, vec![0, d], Q::one());
        f = f.add(&random_xy(&mut rng, 3, 4).coeffs_in(1)[0].with_vars(&vars));
        for j in 1..d {
            let c = random_xy(&mut rng, 2, 2).coeffs_in(1)[0].with_vars(&vars);
            f = f.add(&c.mul(&MultiPoly::monomial(&vars, vec![0, j], Q::one())));
        }
        let div = euclid_divide(&p, &f, "y").map_err(err)?;
        let back = f.mul(&div.quotient).add(&div.remainder);
        ensure(div.verified && back == p, || format!("division {n} does not re-expand"))?;
        ensure(div.remainder.is_zero() || div.remainder.degree_in(1).unwrap() < d, || format!("division {n}: remainder degree"))?;
    }
    let g = generic_divide(&parse_poly("z^2").map_err(err)?, 2, "z").map_err(err)?;
    let vars = g.division.quotient.vars().to_vec();
    let p = |s: &str| parse_poly(s).unwrap().with_vars(&vars);
    ensure(g.division.quotient == p("1") && g.division.remainder == p("-mu1*z - mu2"), || "z^2".into())?;
    let g = generic_divide(&parse_poly("z^3").map_err(err)?, 2, "z").map_err(err)?;
    ensure(
        g.division.quotient == p("z - mu1") && g.division.remainder == p("(mu1^2 - mu2)*z + mu1*mu2"),
        || "z^3".into(),
    )
}

fn hyperbolic(s: &str) -> Result<(HyperbolicVerdict, Vec<Side>), String> {
    let dp = DistinguishedPoly::from_poly(&parse_poly(s).map_err(err)?, "y").map_err(err)?;
    let r = hyperbolic_check_2d(&dp, Side::Both).map_err(err)?;
    Ok((r.verdict, r.witness_sides))
}

fn ac7() -> Result<(), String> {
    ensure(hyperbolic("y^2 - x^2")?.0 == HyperbolicVerdict::Hyperbolic, || "y^2 - x^2".into())?;
    ensure(hyperbolic("y^2 + x^2")?.0 == HyperbolicVerdict::NotHyperbolic, || "y^2 + x^2".into())?;
    ensure(
        hyperbolic("y^2 + x")? == (HyperbolicVerdict::NotHyperbolic, vec![Side::Plus]),
        || "y^2 + x".into(),
    )?;
    for m in 1..=4 {
        let s = format!("y^2 + x^{}", 2 * m);
        ensure(hyperbolic(&s)?.0 == HyperbolicVerdict::NotHyperbolic, || s.clone())?;
    }
    Ok(())
}

fn ac8() -> Result<(), String> {
    let opts = PuiseuxOptions::default();
    for (s, d) in [("y^2 - x^4", "1"), ("y^2 + x^4", "2"), ("y^2 + x^3", "3/2"), ("y^2 - x^3", "3/2")] {
        let r = d_exponent(&parse_poly(s).map_err(err)?, &opts).map_err(err)?;
        ensure(r.d == q(d), || format!("d({s}) = {}", r.d))?;
    }
    let shells: Vec<Q> = (3..=12).map(|k| pow2(-k)).collect();
    for k in 1..=3i64 {
        let phi = parse_poly(&format!("y^2 + x^{}", 2 * k)).map_err(err)?;
        let r = d_exponent(&phi, &opts).map_err(err)?;
        ensure(r.tau == Some(Q::from_integer(k.into())), || format!("exact tau for k = {k}"))?;
        let est = tau_estimate(&phi, &shells, 8).map_err(err)?;
        ensure((est.slope - k as f64).abs() <= 0.15, || format!("k = {k}: slope {}", est.slope))?;
    }
    Ok(())
}

fn ac9() -> Result<(), String> {
    let w = nodiv_witness(&seq("gevrey(1)"), 6, 20, PREC).map_err(err)?;
    ensure(w.rows.len() == 6 && w.all_certified, || "coefficient lower bounds".into())?;
    ensure(w.diagnostic_increasing == Some(true), || "diagnostic not certified increasing".into())
}

fn ac10() -> Result<(), String> {
    use Verdict::{Fails as F, Holds as H, Unknown as U};
    let seqs = ["gevrey(1)", "loggevrey(1/2)", "qgevrey(2)"];
    let polys = ["y^2 + x^2", "y^2 + x^4", "y^2 - x^2"];
    let division = [[H, U, H], [F, F, H], [U, U, H]];
    let closed = [[H, F, H], [H, U, H], [H, U, H]];
    let facts: Vec<_> = polys
        .iter()
        .map(|p| facts_from_poly(&parse_poly(p).unwrap()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for (i, s) in seqs.iter().enumerate() {
        let r = classify(&seq(s), 16, PREC).map_err(err)?;
        for (j, f) in facts.iter().enumerate() {
            let dv = decide_division(&r, f).map_err(err)?.verdict;
            ensure(dv == division[i][j], || format!("division {s} / {}: {dv:?}", polys[j]))?;
            let cv = decide_closedness(&r, f).map_err(err)?.verdict;
            ensure(cv == closed[i][j], || format!("closedness {s} / {}: {cv:?}", polys[j]))?;
        }
    }
    Ok(())
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, title: "sequence classification matrix", limit: secs(1), run: ac1 },
        Criterion { id: 2, title: "log-convexity consequences, J = 32", limit: secs(5), run: ac2 },
        Criterion { id: 3, title: "theta lower and upper bounds", limit: secs(60), run: ac3 },
        Criterion { id: 4, title: "Hilbert model invariants, D <= 16", limit: secs(120), run: ac4 },
        Criterion { id: 5, title: "divergence demo crossing", limit: secs(1), run: ac5 },
        Criterion { id: 6, title: "Euclidean and generic division", limit: secs(10), run: ac6 },
        Criterion { id: 7, title: "hyperbolicity decisions", limit: secs(5), run: ac7 },
        Criterion { id: 8, title: "exponents d and tau", limit: secs(60), run: ac8 },
        Criterion { id: 9, title: "no-division witness", limit: secs(30), run: ac9 },
        Criterion { id: 10, title: "oracle example matrix", limit: secs(1), run: ac10 },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        let name = format!("AC{:02}", c.id);
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let status = match &out {
            Ok(()) if took <= c.limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {:?} limit)", c.limit),
            Err(e) => format!("FAIL ({e})"),
        };
        if !status.starts_with("PASS") {
            failed += 1;
        }
        println!("{name} {status} {} [{:.2}s / {}s]", c.title, took.as_secs_f64(), c.limit.as_secs());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
