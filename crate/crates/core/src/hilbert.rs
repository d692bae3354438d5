//! Finite Hilbert-space model behind Carleman's non-surjectivity argument.
//!
//! Polynomials of degree at most `D` on `I = (-1, 1)` carry the inner product
//! `<u|v> = Σ_{j<=D} (j! M_j)^(-2) ∫_I u^(j) v^(j) dx`. Everything is exact
//! rational arithmetic. This is a truncation of the infinite-dimensional
//! space: limits such as `ω_{j,k} -> 1` are only visible as trends in `D`
//! and exactly at `k = D + 1`.

use crate::error::{CoreError, Result};
use crate::sequence::CarlemanSequence;
use num_traits::{One, Signed, Zero};
use qal_algebra::interval::Interval;
use qal_algebra::rational::{factorial, falling, fmt_q, pow_i, qb, qi, to_sci};
use qal_algebra::transcend::nth_root_q;
use qal_algebra::{UniPoly, Q};
use rayon::prelude::*;

pub const DEFAULT_DEGREE_CAP: usize = 24;

/// `A = L D L^T` with unit lower `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ldl {
    l: Vec<Vec<Q>>,
    d: Vec<Q>,
}

impl Ldl {
    /// Factor a symmetric matrix; `None` if a pivot vanishes.
    pub fn factor(a: &[Vec<Q>]) -> Option<Ldl> {
        let n = a.len();
        let mut l = vec![vec![Q::zero(); n]; n];
        let mut d = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[i][j].clone();
                for k in 0..j {
                    s -= &l[i][k] * &l[j][k] * &d[k];
                }
                if i == j {
                    if s.is_zero() {
                        return None;
                    }
                    d[i] = s;
                    l[i][i] = Q::one();
                } else {
                    l[i][j] = s / &d[j];
                }
            }
        }
        Some(Ldl { l, d })
    }

    pub fn pivots(&self) -> &[Q] {
        &self.d
    }

    pub fn is_positive_definite(&self) -> bool {
        self.d.iter().all(|p| p.is_positive())
    }

    pub fn determinant(&self) -> Q {
        self.d.iter().fold(Q::one(), |a, p| a * p)
    }

    pub fn solve(&self, b: &[Q]) -> Vec<Q> {
        let n = self.d.len();
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let t = &self.l[i][k] * &y[k];
                y[i] -= t;
            }
        }
        for (yi, di) in y.iter_mut().zip(&self.d) {
            *yi /= di;
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = &self.l[k][i] * &y[k];
                y[i] -= t;
            }
        }
        y
    }
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

#[derive(Clone, Debug)]
pub struct HilbertModel {
    seq: CarlemanSequence,
    degree: usize,
    weights: Vec<Q>,
    gram: Vec<Vec<Q>>,
    ldl: Ldl,
}

/// Build the model for `D <= 24`.
pub fn build_model(m: &CarlemanSequence, degree: usize) -> Result<HilbertModel> {
    build_model_capped(m, degree, DEFAULT_DEGREE_CAP)
}

pub fn build_model_capped(m: &CarlemanSequence, degree: usize, cap: usize) -> Result<HilbertModel> {
    if degree == 0 {
        return Err(CoreError::Domain("model degree must be at least 1".into()));
    }
    if degree > cap {
        return Err(CoreError::Domain(format!("model degree {degree} exceeds the cap {cap}")));
    }
    let mut weights = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        let v = m.exact_value(j).ok_or_else(|| {
            CoreError::Unsupported(format!("term M_{j} of {m} is not rational; the Hilbert model needs exact values"))
        })?;
        let jm = qb(factorial(j as u64)) * v;
        weights.push((&jm * &jm).recip());
    }
    let n = degree + 1;
    let mut gram = vec![vec![Q::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            if (a + b) % 2 == 1 {
                continue;
            }
            let mut s = Q::zero();
            for (j, w) in weights.iter().enumerate().take(a.min(b) + 1) {
                // ∫_{-1}^{1} x^(a+b-2j) dx = 2/(a+b-2j+1) for even exponents
                let fa = qb(falling(a as u64, j as u64) * falling(b as u64, j as u64));
                s += w * fa * Q::new(2.into(), ((a + b - 2 * j + 1) as i64).into());
            }
            gram[a][b] = s.clone();
            gram[b][a] = s;
        }
    }
    let ldl = Ldl::factor(&gram).ok_or_else(|| CoreError::Domain("singular Gram matrix".into()))?;
    if !ldl.is_positive_definite() {
        return Err(CoreError::Domain("Gram matrix is not positive definite".into()));
    }
    Ok(HilbertModel {
        seq: m.clone(),
        degree,
        weights,
        gram,
        ldl,
    })
}

impl HilbertModel {
    pub fn sequence(&self) -> &CarlemanSequence {
        &self.seq
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn ldl(&self) -> &Ldl {
        &self.ldl
    }

    fn pad(&self, u: &[Q]) -> Result<Vec<Q>> {
        if u.len() > self.degree + 1 {
            return Err(CoreError::Domain(format!(
                "polynomial of degree {} outside a degree-{} model",
                u.len() - 1,
                self.degree
            )));
        }
        let mut v = u.to_vec();
        v.resize(self.degree + 1, Q::zero());
        Ok(v)
    }

    /// `<u|v>` for coefficient vectors (constant term first).
    pub fn inner(&self, u: &[Q], v: &[Q]) -> Result<Q> {
        let u = self.pad(u)?;
        let v = self.pad(v)?;
        Ok(u.iter().zip(mat_vec(&self.gram, &v)).map(|(a, b)| a * b).sum())
    }

    pub fn norm_sq(&self, u: &[Q]) -> Result<Q> {
        self.inner(u, u)
    }

    /// `e_i` with `<e_i|u> = u^(i)(0)` for every `u` in the model.
    pub fn representer(&self, i: usize) -> Result<Vec<Q>> {
        if i > self.degree {
            return Err(CoreError::Domain(format!("order {i} above the model degree {}", self.degree)));
        }
        let mut rhs = vec![Q::zero(); self.degree + 1];
        rhs[i] = qb(factorial(i as u64));
        Ok(self.ldl.solve(&rhs))
    }

    /// Gram matrix `(<e_i|e_j>)_{i,j<k}` of the first `k` representers.
    pub fn representer_gram(&self, k: usize) -> Result<(Vec<Vec<Q>>, Vec<Vec<Q>>)> {
        let reps: Vec<Vec<Q>> = (0..k).map(|i| self.representer(i)).collect::<Result<_>>()?;
        // <e_i|e_j> = e_j^(i)(0) = i! [x^i] e_j
        let r = (0..k)
            .map(|i| (0..k).map(|j| qb(factorial(i as u64)) * &reps[j][i]).collect())
            .collect();
        Ok((r, reps))
    }

    /// Minimal-norm `g` with `g^(i)(0) = b_i` for `i < k = b.len()`.
    pub fn minimal_interpolant(&self, b: &[Q]) -> Result<MinimalInterpolant> {
        let k = b.len();
        if k > self.degree + 1 {
            return Err(CoreError::Domain(format!("{k} constraints exceed the model dimension {}", self.degree + 1)));
        }
        let n = self.degree + 1;
        if k == 0 {
            return Ok(MinimalInterpolant {
                k,
                data: vec![],
                coeffs: vec![Q::zero(); n],
                xi: vec![],
                norm_sq: Q::zero(),
            });
        }
        let (r, reps) = self.representer_gram(k)?;
        let f = Ldl::factor(&r).ok_or_else(|| CoreError::Domain("representers are dependent".into()))?;
        let xi = f.solve(b);
        let mut coeffs = vec![Q::zero(); n];
        for (x, e) in xi.iter().zip(&reps) {
            for (c, v) in coeffs.iter_mut().zip(e) {
                *c += x * v;
            }
        }
        let norm_sq = xi.iter().zip(b).map(|(x, y)| x * y).sum();
        Ok(MinimalInterpolant {
            k,
            data: b.to_vec(),
            coeffs,
            xi,
            norm_sq,
        })
    }

    /// `ω_{j,k} = j! u_{j,k}(1)` for `j < k`.
    pub fn omega_column(&self, k: usize) -> Result<Vec<Q>> {
        if k == 0 || k > self.degree + 1 {
            return Err(CoreError::Domain(format!("k must lie in 1..={}", self.degree + 1)));
        }
        let (r, reps) = self.representer_gram(k)?;
        let f = Ldl::factor(&r).ok_or_else(|| CoreError::Domain("representers are dependent".into()))?;
        // u_{j,k} = Σ_i (R^-1)_{ij} e_i, so u_{j,k}(1) = (R^-1 v)_j with v_i = e_i(1)
        let v: Vec<Q> = reps.iter().map(|e| e.iter().sum()).collect();
        let u1 = f.solve(&v);
        Ok(u1.into_iter().enumerate().map(|(j, x)| x * qb(factorial(j as u64))).collect())
    }

    /// Columns `k = 1..=kmax`, solved in parallel.
    pub fn omega_table(&self, kmax: usize) -> Result<Vec<Vec<Q>>> {
        (1..=kmax).into_par_iter().map(|k| self.omega_column(k)).collect()
    }
}

/// `u^(i)(0)` for a coefficient vector.
pub fn derivative_at_zero(u: &[Q], i: usize) -> Q {
    u.get(i).map(|c| c * qb(factorial(i as u64))).unwrap_or_else(Q::zero)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalInterpolant {
    pub k: usize,
    pub data: Vec<Q>,
    /// Monomial coefficients, constant term first.
    pub coeffs: Vec<Q>,
    /// Coordinates on `e_0, ..., e_{k-1}`.
    pub xi: Vec<Q>,
    pub norm_sq: Q,
}

impl MinimalInterpolant {
    pub fn eval(&self, t: &Q) -> Q {
        UniPoly::new(self.coeffs.clone()).eval(t)
    }

    pub fn satisfies_constraints(&self) -> bool {
        self.data.iter().enumerate().all(|(i, b)| derivative_at_zero(&self.coeffs, i) == *b)
    }
}

// ---------------------------------------------------------------------------
// Lacunary selection and the divergence mechanism

#[derive(Clone, Debug, PartialEq)]
pub struct LacunaryStep {
    pub degree: usize,
    pub k: usize,
    /// `Σ_{j <= k_{p-1}} |ω_{j,k_p} - 1| M_j`; absent for `p = 0`.
    pub sum: Option<Q>,
}

/// Evaluate the selection sums for a schedule of `(D_p, k_p)`.
pub fn lacunary_sums(m: &CarlemanSequence, schedule: &[(usize, usize)]) -> Result<Vec<LacunaryStep>> {
    let mut out = Vec::with_capacity(schedule.len());
    for (p, &(d, k)) in schedule.iter().enumerate() {
        if k == 0 || k > d + 1 {
            return Err(CoreError::Domain(format!("step {p}: need 1 <= k_p <= D_p + 1")));
        }
        if p == 0 {
            out.push(LacunaryStep { degree: d, k, sum: None });
            continue;
        }
        let prev = schedule[p - 1].1;
        if prev >= k {
            return Err(CoreError::Domain(format!("step {p}: k must increase")));
        }
        let model = build_model(m, d)?;
        let w = model.omega_column(k)?;
        let mut s = Q::zero();
        for (j, om) in w.iter().enumerate().take(prev + 1) {
            s += (om - Q::one()).abs() * m.exact_value(j).expect("rational model");
        }
        out.push(LacunaryStep { degree: d, k, sum: Some(s) });
    }
    Ok(out)
}

/// Like [`lacunary_sums`], failing at the first sum above 1.
pub fn lacunary_select(m: &CarlemanSequence, schedule: &[(usize, usize)]) -> Result<Vec<LacunaryStep>> {
    let steps = lacunary_sums(m, schedule)?;
    for (p, st) in steps.iter().enumerate() {
        if let Some(s) = &st.sum {
            if *s > Q::one() {
                return Err(CoreError::SelectionFailure {
                    step: p,
                    sum: to_sci(s, 15),
                });
            }
        }
    }
    Ok(steps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceTrace {
    pub a: Q,
    pub threshold: Q,
    pub ks: Vec<usize>,
    /// Partial sums up to and including the crossing (or all of them).
    pub partial_sums: Vec<Q>,
    pub crossing: Option<usize>,
}

/// First `p` with `Σ_{q<=p} M_{k_q} a^{k_q} > T`.
pub fn divergence_demo(m: &CarlemanSequence, a: &Q, ks: &[usize], threshold: &Q) -> Result<DivergenceTrace> {
    if !a.is_positive() || *a >= Q::one() {
        return Err(CoreError::Domain(format!("a must lie in (0, 1), got {}", fmt_q(a))));
    }
    let mut s = Q::zero();
    let mut sums = Vec::new();
    let mut crossing = None;
    for (p, &k) in ks.iter().enumerate() {
        let mk = m
            .exact_value(k)
            .ok_or_else(|| CoreError::Unsupported(format!("term M_{k} of {m} is not rational")))?;
        s += mk * pow_i(a, k as i64);
        sums.push(s.clone());
        if s > *threshold {
            crossing = Some(p);
            break;
        }
    }
    Ok(DivergenceTrace {
        a: a.clone(),
        threshold: threshold.clone(),
        ks: ks[..sums.len()].to_vec(),
        partial_sums: sums,
        crossing,
    })
}

// ---------------------------------------------------------------------------
// One-dimensional Sobolev inequalities

#[derive(Clone, Debug, PartialEq)]
pub struct SobolevRecord {
    pub order: usize,
    /// `‖u^(j)‖²_{L²}`.
    pub l2_sq: Q,
    /// `‖u^(j+1)‖²_{L²}`.
    pub l2_sq_next: Q,
    /// Encloses `‖u^(j)‖_{L∞(I)}`.
    pub sup: Interval,
    /// `‖u^(j)‖_{L²} / √2 <= ‖u^(j)‖_{L∞}`.
    pub lower_holds: bool,
    /// `‖u^(j)‖_{L∞} <= √2 (‖u^(j)‖_{L²} + ‖u^(j+1)‖_{L²})`.
    pub upper_holds: bool,
}

fn l2_sq(p: &UniPoly<Q>) -> Q {
    let sq = p.mul(p);
    sq.coeffs()
        .iter()
        .enumerate()
        .filter(|(e, _)| e % 2 == 0)
        .map(|(e, c)| c * Q::new(2.into(), (e as i64 + 1).into()))
        .sum()
}

/// Check both inequalities for `u^(j)` on `I = (-1, 1)`.
pub fn sobolev_check(u: &UniPoly<Q>, j: usize) -> Result<SobolevRecord> {
    let mut v = u.clone();
    for _ in 0..j {
        v = v.derivative();
    }
    let dv = v.derivative();
    let a = l2_sq(&v);
    let b = l2_sq(&dv);
    // |v'| <= Σ |c_k| k on I
    let lip: Q = dv.coeffs().iter().map(|c| c.abs()).sum();
    for s in 1..=24u32 {
        let n = 1i64 << s;
        let mut lo = Q::zero();
        for t in 0..=n {
            let x = Q::new((2 * t - n).into(), n.into());
            let y = v.eval(&x).abs();
            if y > lo {
                lo = y;
            }
        }
        // Every point of I is within 1/n of a grid point.
        let hi = &lo + &lip * Q::new(1.into(), n.into());
        let lower_holds = &a / qi(2) <= &lo * &lo;
        // hi^2 <= 2 (A + B + 2 sqrt(AB)), with sqrt(AB) from below
        let root = nth_root_q(&(&a * &b), 2, 96);
        let upper_holds = &hi * &hi <= qi(2) * (&a + &b + qi(2) * root.lo());
        if lower_holds && upper_holds {
            return Ok(SobolevRecord {
                order: j,
                l2_sq: a,
                l2_sq_next: b,
                sup: Interval::new(lo, hi),
                lower_holds,
                upper_holds,
            });
        }
    }
    Err(CoreError::Precision("subdivision limit reached in the sup-norm enclosure".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::parse_sequence;
    use qal_algebra::rational::q;

    fn seq(t: &str) -> CarlemanSequence {
        parse_sequence(t).unwrap()
    }

    // Independent dense Gauss-Jordan solve over Q.
    fn dense_solve(a: &[Vec<Q>], b: &[Q]) -> Vec<Q> {
        let n = a.len();
        let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero()).unwrap();
            m.swap(c, p);
            let inv = m[c][c].recip();
            for v in m[c].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let row = m[c].clone();
                    for (x, y) in m[r].iter_mut().zip(&row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        m.into_iter().map(|r| r[n].clone()).collect()
    }

    // Gram entry by direct integration of derivative products.
    fn gram_oracle(m: &CarlemanSequence, d: usize, a: usize, b: usize) -> Q {
        let xa = UniPoly::monomial(qi(1), a);
        let xb = UniPoly::monomial(qi(1), b);
        let (mut pa, mut pb) = (xa, xb);
        let mut s = Q::zero();
        for j in 0..=d {
            let jm = qb(factorial(j as u64)) * m.exact_value(j).unwrap();
            let prod = pa.mul(&pb);
            let integral: Q = prod
                .coeffs()
                .iter()
                .enumerate()
                .map(|(e, c)| c * (Q::one() - pow_i(&qi(-1), e as i64 + 1)) / qi(e as i64 + 1))
                .sum();
            s += integral / (&jm * &jm);
            pa = pa.derivative();
            pb = pb.derivative();
        }
        s
    }

    #[test]
    fn gram_examples() {
        let h = build_model(&seq("analytic"), 1).unwrap();
        assert_eq!(h.gram()[0][0], qi(2));
        assert_eq!(h.gram()[1][1], q(8, 3));
        assert_eq!(h.gram()[0][1], qi(0));
        let g = seq("gevrey(1)");
        let h = build_model(&g, 6).unwrap();
        assert_eq!(h.gram()[0][0], qi(2));
        for a in 0..=6 {
            for b in 0..=6 {
                assert_eq!(h.gram()[a][b], gram_oracle(&g, 6, a, b), "({a},{b})");
            }
        }
        assert!(matches!(build_model(&seq("gevrey(1/2)"), 3), Err(CoreError::Unsupported(_))));
    }

    #[test]
    fn representer_examples() {
        let h = build_model(&seq("analytic"), 1).unwrap();
        assert_eq!(h.representer(0).unwrap(), vec![q(1, 2), qi(0)]);
        assert_eq!(h.representer(1).unwrap(), vec![qi(0), q(3, 8)]);
        let h = build_model(&seq("gevrey(1)"), 5).unwrap();
        for i in 0..=5 {
            let e = h.representer(i).unwrap();
            let mut rhs = vec![Q::zero(); 6];
            rhs[i] = qb(factorial(i as u64));
            assert_eq!(e, dense_solve(h.gram(), &rhs));
            assert_eq!(mat_vec(h.gram(), &e), rhs);
            for jj in 0..=5 {
                let f = h.representer(jj).unwrap();
                assert_eq!(h.inner(&e, &f).unwrap(), derivative_at_zero(&f, i));
            }
        }
    }

    #[test]
    fn interpolant_examples() {
        let h = build_model(&seq("analytic"), 2).unwrap();
        let g = h.minimal_interpolant(&[qi(0), qi(0)]).unwrap();
        assert!(g.coeffs.iter().all(|c| c.is_zero()));
        // k = 1, b = (1): g = e_0 / <e_0|e_0>, checked with a dense solve
        let g = h.minimal_interpolant(&[qi(1)]).unwrap();
        let e0 = dense_solve(h.gram(), &[qi(1), qi(0), qi(0)]);
        let n00: Q = e0[0].clone();
        let expect: Vec<Q> = e0.iter().map(|c| c / &n00).collect();
        assert_eq!(g.coeffs, expect);
        assert!(g.satisfies_constraints());
        // Analytic, D = 2: g = 1 + c x^2 minimizing 2 + 2c(2/3) + c^2(76/15)
        assert_eq!(g.coeffs, vec![qi(1), qi(0), q(-5, 38)]);
        // Full constraints pin x^m
        let h = build_model(&seq("gevrey(1)"), 4).unwrap();
        let b: Vec<Q> = (0..5).map(|i| if i == 3 { qi(6) } else { qi(0) }).collect();
        let g = h.minimal_interpolant(&b).unwrap();
        assert_eq!(g.coeffs, vec![qi(0), qi(0), qi(0), qi(1), qi(0)]);
        assert_eq!(h.minimal_interpolant(&[]).unwrap().norm_sq, qi(0));
    }

    #[test]
    fn omega_examples() {
        let g = seq("gevrey(1)");
        for d in 1..=8 {
            let h = build_model(&g, d).unwrap();
            assert!(h.omega_column(d + 1).unwrap().iter().all(|w| w.is_one()));
        }
        // ω from unit-data interpolants evaluated one by one
        let h = build_model(&g, 8).unwrap();
        for k in 1..=9 {
            let col = h.omega_column(k).unwrap();
            for j in 0..k {
                let mut b = vec![Q::zero(); k];
                b[j] = Q::one();
                let u = h.minimal_interpolant(&b).unwrap();
                assert_eq!(col[j], u.eval(&qi(1)) * qb(factorial(j as u64)), "k={k} j={j}");
            }
        }
        // golden: D = 8, k = 1: ω_{0,1} = e_0(1)/e_0(0)
        let e0 = h.representer(0).unwrap();
        let w = h.omega_column(1).unwrap();
        assert_eq!(w[0], e0.iter().sum::<Q>() / &e0[0]);
    }

    #[test]
    fn lacunary_and_divergence() {
        let g = seq("gevrey(1)");
        let st = lacunary_select(&g, &[(2, 3), (4, 5), (7, 8)]).unwrap();
        assert!(st.iter().skip(1).all(|s| s.sum == Some(Q::zero())));
        assert_eq!(lacunary_select(&g, &[(3, 2)]).unwrap().len(), 1);
        let t = divergence_demo(&g, &q(1, 2), &(0..40).collect::<Vec<_>>(), &qi(1_000_000)).unwrap();
        assert_eq!(t.crossing, Some(14));
        let t = divergence_demo(&seq("analytic"), &q(1, 2), &(0..60).collect::<Vec<_>>(), &qi(10)).unwrap();
        assert_eq!(t.crossing, None);
        let t = divergence_demo(&g, &q(1, 3), &[5, 6], &qi(0)).unwrap();
        assert_eq!(t.crossing, Some(0));
    }

    #[test]
    fn sobolev_examples() {
        let r = sobolev_check(&UniPoly::from_ints(&[1]), 0).unwrap();
        assert_eq!(r.l2_sq, qi(2));
        assert!(r.sup.contains(&qi(1)) && r.lower_holds && r.upper_holds);
        let r = sobolev_check(&UniPoly::zero(), 0).unwrap();
        assert_eq!(r.sup, Interval::zero());
        let r = sobolev_check(&UniPoly::from_ints(&[0, 1]), 0).unwrap();
        assert_eq!(r.l2_sq, q(2, 3));
        assert!(r.sup.contains(&qi(1)));
        let r = sobolev_check(&UniPoly::from_ints(&[3, -1, 0, 7, -2]), 1).unwrap();
        assert!(r.lower_holds && r.upper_holds);
    }
}
