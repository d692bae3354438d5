//! Bang's function and Borel's series of simple poles.
//!
//! With `M̄_k = k! M_k` and `m_k = M̄_{k+1}/M̄_k`,
//!
//! ```text
//! θ(x) = Σ_k M̄_k (2 m_k)^(-k) exp(2 i m_k x),
//! θ^(j)(x) = i^j Σ_k t_{j,k} exp(2 i m_k x),   t_{j,k} = M̄_k (2 m_k)^(j-k).
//! ```
//!
//! Bounds used below. Log-convexity of `M` makes `m_k` nondecreasing, which
//! gives `m_k^(j-k) <= M̄_j / M̄_k` for all `j, k`; hence `t_{j,k} <= 2^(j-k) M̄_j`.
//!
//! * Upper bound: `|θ^(j)(x)| <= Σ_k 2^(j-k) M̄_j = 2^(j+1) j! M_j`, so the
//!   checked bound `3 · 2^j · j! M_j` (constant 3, ratio 2) holds with room.
//! * Tail: for `k >= j`, `t_{j,k+1} / t_{j,k} = (m_k/m_{k+1})^(k+1-j) / 2 <= 1/2`.
//!   So for `K > j` the terms beyond `K` sum to at most `2^(j-K) M̄_j`, and
//!   also to at most `2 t_{j,K+1}`. The reported generic constant is
//!   `2 M̄_j 2^(j-K)`; the enclosure uses the smaller of the two bounds.
//! * Lower bound: at `x = 0` every term is positive, and the `k = j` term
//!   equals `M̄_j`, so `|θ^(j)(0)| >= j! M_j`.

use crate::config::PRECISION_CAP;
use crate::error::{CoreError, Result};
use crate::sequence::{check_log_convexity, CarlemanSequence, CheckOutcome, SeqValue};
use num_traits::{One, Signed, Zero};
use qal_algebra::complex::CInterval;
use qal_algebra::interval::Interval;
use qal_algebra::rational::{factorial, pow2, pow_i, qb, qi};
use qal_algebra::transcend::sin_cos;
use qal_algebra::Q;

/// Truncated θ: term data for `k = 0..=K+1`.
#[derive(Clone, Debug)]
pub struct ThetaApproximation {
    seq: CarlemanSequence,
    trunc: usize,
    prec: u32,
    mbar: Vec<SeqValue>,
    m: Vec<SeqValue>,
}

impl ThetaApproximation {
    pub fn new(seq: &CarlemanSequence, trunc: usize, prec: u32) -> Result<Self> {
        if let Some(n) = seq.prefix_len() {
            // The tail bound leans on log-convexity of every term in use.
            if n < trunc + 3 {
                return Err(CoreError::Domain(format!(
                    "truncation {trunc} needs {} sequence terms, custom sequence has {n}",
                    trunc + 3
                )));
            }
            if let CheckOutcome::Fail { witness } = check_log_convexity(seq, trunc + 2, prec)? {
                return Err(CoreError::Domain(format!("sequence is not log-convex at index {}", witness[0])));
            }
        }
        let w = prec + 32;
        let mbar: Vec<SeqValue> = (0..=trunc + 2).map(|k| seq.mbar(k, w)).collect::<Result<_>>()?;
        let m = (0..=trunc + 1).map(|k| mbar[k + 1].div(&mbar[k], w)).collect();
        Ok(ThetaApproximation {
            seq: seq.clone(),
            trunc,
            prec: w,
            mbar,
            m,
        })
    }

    pub fn sequence(&self) -> &CarlemanSequence {
        &self.seq
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn mbar(&self, k: usize) -> &SeqValue {
        &self.mbar[k]
    }

    /// `m_k = M̄_{k+1} / M̄_k`.
    pub fn m(&self, k: usize) -> &SeqValue {
        &self.m[k]
    }

    /// `t_{j,k} = M̄_k (2 m_k)^(j-k)`.
    pub fn term(&self, j: usize, k: usize) -> SeqValue {
        let two_m = self.m[k].scale(&qi(2));
        self.mbar[k].mul(&two_m.powi(j as i64 - k as i64, self.prec), self.prec)
    }

    fn upper(v: &SeqValue) -> Q {
        match v {
            SeqValue::Exact(x) => x.clone(),
            SeqValue::Approx(iv) => iv.hi().clone(),
        }
    }

    /// `2 M̄_j 2^(j-K)`.
    pub fn generic_tail(&self, j: usize) -> Q {
        Self::upper(&self.mbar[j]) * pow2(j as i64 - self.trunc as i64 + 1)
    }

    /// Bound on `Σ_{k>K} t_{j,k}`.
    pub fn tail_bound(&self, j: usize) -> Q {
        let ratio = Self::upper(&self.term(j, self.trunc + 1)) * qi(2);
        ratio.min(self.generic_tail(j))
    }

    fn check_order(&self, j: usize) -> Result<()> {
        if self.trunc < j + 8 {
            return Err(CoreError::Domain(format!(
                "truncation {} too small for order {j}; need at least {}",
                self.trunc,
                j + 8
            )));
        }
        Ok(())
    }

    /// Enclosure of `(-i)^j θ^(j)(0) = Σ_k t_{j,k}`, a positive real.
    pub fn derivative_at_zero(&self, j: usize) -> Result<Interval> {
        self.check_order(j)?;
        let mut s = SeqValue::Exact(Q::zero());
        for k in 0..=self.trunc {
            s = s.add(&self.term(j, k), self.prec);
        }
        let s = s.interval();
        Ok(Interval::new(s.lo().clone(), s.hi() + self.tail_bound(j)))
    }

    /// Enclosure of `θ^(j)(x)`.
    pub fn eval(&self, x: &Q, j: usize) -> Result<CInterval> {
        self.check_order(j)?;
        let w = self.prec;
        let mut acc = CInterval::zero();
        for k in 0..=self.trunc {
            let arg = self.m[k].scale(&(x * qi(2))).interval();
            let (s, c) = sin_cos(&arg, w);
            let t = self.term(j, k).interval();
            acc = acc.add(&CInterval::new(c.mul(&t), s.mul(&t)).round(w));
        }
        let acc = rotate(&acc, j);
        let r = self.tail_bound(j);
        Ok(CInterval::new(
            Interval::new(acc.re.lo() - &r, acc.re.hi() + &r),
            Interval::new(acc.im.lo() - &r, acc.im.hi() + &r),
        ))
    }
}

/// Multiply by `i^j`.
pub fn rotate(z: &CInterval, j: usize) -> CInterval {
    match j % 4 {
        0 => z.clone(),
        1 => CInterval::new(z.im.neg(), z.re.clone()),
        2 => z.neg(),
        _ => CInterval::new(z.im.clone(), z.re.neg()),
    }
}

/// Result of the derivative probe at the origin.
#[derive(Clone, Debug)]
pub struct ThetaDerivative {
    pub order: usize,
    pub trunc: usize,
    /// Encloses `|θ^(j)(0)|`; the derivative itself is `i^j` times this.
    pub magnitude: Interval,
    pub tail: Q,
    pub generic_tail: Q,
    /// `j! M_j`.
    pub lower_bound: SeqValue,
    /// `magnitude >= j! M_j` was certified.
    pub certified: bool,
    pub precision: u32,
}

/// `θ^(j)(0)` with the certified check `|θ^(j)(0)| >= j! M_j`, raising the
/// working precision until the check decides or the cap is hit.
pub fn theta_derivative_at_zero(m: &CarlemanSequence, j: usize, trunc: usize, prec: u32) -> Result<ThetaDerivative> {
    let mut w = prec;
    loop {
        let th = ThetaApproximation::new(m, trunc, w)?;
        let mag = th.derivative_at_zero(j)?;
        let lb = th.mbar(j).clone();
        let certified = match &lb {
            SeqValue::Exact(v) => mag.lo() >= v,
            SeqValue::Approx(iv) => mag.lo() >= iv.hi(),
        };
        if certified || w >= PRECISION_CAP {
            return Ok(ThetaDerivative {
                order: j,
                trunc,
                tail: th.tail_bound(j),
                generic_tail: th.generic_tail(j),
                magnitude: mag,
                lower_bound: lb,
                certified,
                precision: w,
            });
        }
        w = (w * 2).min(PRECISION_CAP);
    }
}

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub order: usize,
    pub x: Q,
    pub value: CInterval,
    /// `3 · 2^j · j! M_j`.
    pub upper_bound: SeqValue,
    /// `|θ^(j)(x)| <= upper_bound` was certified.
    pub certified: bool,
}

/// `θ^(j)(x)` with the certified check `|θ^(j)(x)| <= 3 · 2^j · j! M_j`.
pub fn theta_eval(m: &CarlemanSequence, x: &Q, j: usize, trunc: usize, prec: u32) -> Result<ThetaValue> {
    let mut w = prec;
    loop {
        let th = ThetaApproximation::new(m, trunc, w)?;
        let v = th.eval(x, j)?;
        let ub = th.mbar(j).scale(&(qi(3) * pow2(j as i64)));
        let lim = match &ub {
            SeqValue::Exact(b) => b.clone(),
            SeqValue::Approx(iv) => iv.lo().clone(),
        };
        let certified = v.norm2().hi() <= &(&lim * &lim);
        if certified || w >= PRECISION_CAP {
            return Ok(ThetaValue {
                order: j,
                x: x.clone(),
                value: v,
                upper_bound: ub,
                certified,
            });
        }
        w = (w * 2).min(PRECISION_CAP);
    }
}

// ---------------------------------------------------------------------------
// Borel's example

/// Coefficients `A_ν`, `ν >= 1`, with an explicit bound `|A_ν| <= C ρ^ν`.
#[derive(Clone, Debug, PartialEq)]
pub enum BorelCoeffs {
    /// `A_ν = c r^ν` with `|r| < 1`.
    Geometric { c: Q, r: Q },
    /// Finitely many coefficients `A_1, ..., A_n`; zero afterwards.
    Finite(Vec<Q>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorelExample {
    coeffs: BorelCoeffs,
    trunc: usize,
}

impl BorelExample {
    pub fn new(coeffs: BorelCoeffs, trunc: usize) -> Result<Self> {
        if trunc < 8 {
            return Err(CoreError::Domain("truncation must be at least 8".into()));
        }
        if let BorelCoeffs::Geometric { r, .. } = &coeffs {
            if r.abs() >= Q::one() {
                return Err(CoreError::Domain("geometric ratio must satisfy |r| < 1".into()));
            }
        }
        Ok(BorelExample { coeffs, trunc })
    }

    pub fn geometric(c: Q, r: Q, trunc: usize) -> Result<Self> {
        Self::new(BorelCoeffs::Geometric { c, r }, trunc)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, nu: usize) -> Q {
        match &self.coeffs {
            BorelCoeffs::Geometric { c, r } => c * pow_i(r, nu as i64),
            BorelCoeffs::Finite(v) => v.get(nu.wrapping_sub(1)).cloned().unwrap_or_else(Q::zero),
        }
    }

    /// Bound on `Σ_{ν>N} |A_ν| ν^p`.
    pub fn tail_moment(&self, p: u32) -> Result<Q> {
        let n = self.trunc;
        match &self.coeffs {
            BorelCoeffs::Finite(v) if v.len() <= n => Ok(Q::zero()),
            BorelCoeffs::Finite(_) => Err(CoreError::Domain("truncation shorter than the coefficient list".into())),
            BorelCoeffs::Geometric { c, r } => {
                let rho = r.abs();
                if rho.is_zero() {
                    return Ok(Q::zero());
                }
                // Consecutive terms of ν^p ρ^ν shrink by at most
                // q = ((N+2)/(N+1))^p ρ for ν > N.
                let np1 = qi(n as i64 + 1);
                let qr = pow_i(&(qi(n as i64 + 2) / &np1), p as i64) * &rho;
                if qr >= Q::one() {
                    return Err(CoreError::Domain(format!(
                        "truncation {n} too short for moment order {p}"
                    )));
                }
                let first = c.abs() * pow_i(&np1, p as i64) * pow_i(&rho, n as i64 + 1);
                Ok(first / (Q::one() - qr))
            }
        }
    }

    /// `f(x) = Σ_ν A_ν / (x - i/ν)` for real `x`.
    pub fn eval(&self, x: &Q) -> Result<CInterval> {
        let mut re = Q::zero();
        let mut im = Q::zero();
        for nu in 1..=self.trunc {
            let a = self.coeff(nu);
            if a.is_zero() {
                continue;
            }
            // 1/(x - i/ν) = (x + i/ν) / (x^2 + 1/ν^2)
            let inv = Q::new(1.into(), (nu as i64).into());
            let d = x * x + &inv * &inv;
            re += &a * x / &d;
            im += &a * &inv / &d;
        }
        // |x - i/ν| >= 1/ν, so each dropped term is at most ν |A_ν|.
        let r = self.tail_moment(1)?;
        Ok(CInterval::new(
            Interval::new(&re - &r, &re + &r),
            Interval::new(&im - &r, &im + &r),
        ))
    }

    /// `Σ_ν A_ν ν^(j+1)` with its tail radius.
    fn moment(&self, j: usize) -> Result<Interval> {
        let mut s = Q::zero();
        for nu in 1..=self.trunc {
            s += self.coeff(nu) * qb(num_traits::pow(num_bigint::BigInt::from(nu), j + 1));
        }
        let r = self.tail_moment(j as u32 + 1)?;
        Ok(Interval::new(&s - &r, &s + r))
    }

    /// `Φ^(p)(1) = Σ_ν ν A_ν (ν)_p` with its tail radius.
    pub fn phi_derivative_at_one(&self, p: usize) -> Result<Interval> {
        let mut s = Q::zero();
        for nu in 1..=self.trunc {
            if nu >= p {
                let ff = qal_algebra::rational::falling(nu as u64, p as u64);
                s += self.coeff(nu) * qi(nu as i64) * qb(ff);
            }
        }
        // ν (ν)_p <= ν^(p+1)
        let r = self.tail_moment(p as u32 + 1)?;
        Ok(Interval::new(&s - &r, &s + r))
    }
}

/// `(-1)^j j! i^(j+1) · v` for a real interval `v`.
fn derivative_prefactor(v: &Interval, j: usize) -> CInterval {
    let f = qb(factorial(j as u64)) * if j % 2 == 0 { Q::one() } else { -Q::one() };
    rotate(&CInterval::real(v.scale(&f)), j + 1)
}

/// Stirling numbers of the second kind `S(j, p)`, `0 <= p <= j < n`, as a
/// lower unitriangular matrix: `ν^j = Σ_p S(j,p) (ν)_p`.
pub fn stirling_matrix(n: usize) -> Vec<Vec<Q>> {
    let mut s = vec![vec![Q::zero(); n]; n];
    if n == 0 {
        return s;
    }
    s[0][0] = Q::one();
    for j in 1..n {
        for p in 1..=j {
            s[j][p] = qi(p as i64) * &s[j - 1][p] + &s[j - 1][p - 1];
        }
    }
    s
}

/// Unit diagonal and zero upper part.
pub fn is_unitriangular(a: &[Vec<Q>]) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(k, v)| match k.cmp(&i) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => v.is_one(),
            std::cmp::Ordering::Greater => v.is_zero(),
        })
    })
}

#[derive(Clone, Debug)]
pub struct BorelDerivatives {
    pub order: usize,
    /// Termwise differentiation.
    pub direct: CInterval,
    /// Through the derivatives of Φ at 1 and the triangular transform.
    pub via_phi: CInterval,
    pub transform: Vec<Vec<Q>>,
    pub transform_unitriangular: bool,
    pub agree: bool,
}

/// `f^(j)(0)` computed twice.
pub fn borel_example_derivatives(b: &BorelExample, j: usize) -> Result<BorelDerivatives> {
    let direct = derivative_prefactor(&b.moment(j)?, j);
    let t = stirling_matrix(j + 1);
    let mut acc = Interval::zero();
    for (p, s) in t[j].iter().enumerate() {
        if !s.is_zero() {
            acc = acc.add(&b.phi_derivative_at_one(p)?.scale(s));
        }
    }
    let via_phi = derivative_prefactor(&acc, j);
    let unitri = is_unitriangular(&t);
    Ok(BorelDerivatives {
        order: j,
        agree: direct.overlaps(&via_phi),
        direct,
        via_phi,
        transform: t,
        transform_unitriangular: unitri,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::parse_sequence;
    use qal_algebra::rational::q;

    fn seq(t: &str) -> CarlemanSequence {
        parse_sequence(t).unwrap()
    }

    // Independent partial sum straight from the definitions.
    fn oracle_sum(mbar: impl Fn(usize) -> Q, j: usize, k_max: usize) -> Q {
        (0..=k_max)
            .map(|k| {
                let m = mbar(k + 1) / mbar(k);
                mbar(k) * pow_i(&(m * qi(2)), j as i64 - k as i64)
            })
            .sum()
    }

    #[test]
    fn gevrey_one_at_zero() {
        let d = theta_derivative_at_zero(&seq("gevrey(1)"), 0, 12, 128).unwrap();
        let f = |k: usize| qb(factorial(k as u64)).pow(2);
        let s = oracle_sum(f, 0, 12);
        assert_eq!(d.magnitude.lo(), &s);
        assert!(d.magnitude.hi() > &s);
        assert!(d.certified);
        // the first term alone is 1
        assert!(s > qi(1) && s < q(3, 2));
    }

    #[test]
    fn analytic_at_zero() {
        let d = theta_derivative_at_zero(&seq("analytic"), 0, 12, 128).unwrap();
        // k!/(2(k+1))^k
        let s: Q = (0..=12u64).map(|k| qb(factorial(k)) / pow_i(&qi(2 * (k as i64 + 1)), k as i64)).sum();
        assert_eq!(d.magnitude.lo(), &s);
        assert!(d.certified);
    }

    #[test]
    fn tail_is_sound_and_nested() {
        let m = seq("gevrey(1)");
        let exact_far = oracle_sum(|k| qb(factorial(k as u64)).pow(2), 3, 60);
        let mut prev: Option<Interval> = None;
        for k in 11..20 {
            let d = theta_derivative_at_zero(&m, 3, k, 64).unwrap();
            assert!(d.magnitude.contains(&exact_far), "K={k}");
            if let Some(p) = &prev {
                assert!(d.magnitude.subset_of(p));
            }
            prev = Some(d.magnitude);
        }
    }

    #[test]
    fn eval_matches_zero_and_is_tight() {
        let m = seq("gevrey(1)");
        let th = ThetaApproximation::new(&m, 16, 64).unwrap();
        let z = th.eval(&Q::zero(), 2).unwrap();
        let d = th.derivative_at_zero(2).unwrap();
        // θ''(0) = -|θ''(0)|
        assert!(z.re.neg().overlaps(&d));
        assert!(z.im.contains(&Q::zero()));
        let v = th.eval(&q(1, 2), 0).unwrap();
        assert!(v.max_width() < pow2(-20));
        let f = theta_eval(&m, &q(-1, 4), 5, 16, 64).unwrap();
        assert!(f.certified);
    }

    #[test]
    fn irrational_terms() {
        let d = theta_derivative_at_zero(&seq("gevrey(1/2)"), 4, 14, 64).unwrap();
        assert!(d.certified);
        assert!(!d.lower_bound.is_exact());
        let d = theta_derivative_at_zero(&seq("loggevrey(1)"), 2, 12, 64).unwrap();
        assert!(d.certified);
    }

    #[test]
    fn order_precondition() {
        assert!(matches!(
            theta_derivative_at_zero(&seq("gevrey(1)"), 5, 12, 64),
            Err(CoreError::Domain(_))
        ));
    }

    #[test]
    fn borel_values() {
        let b = BorelExample::geometric(qi(1), q(1, 2), 60).unwrap();
        let f0 = b.eval(&Q::zero()).unwrap();
        assert!(f0.im.contains(&qi(2)));
        assert!(f0.re.contains(&Q::zero()));
        assert!(f0.im.width() < pow2(-30));
        let z = BorelExample::new(BorelCoeffs::Finite(vec![]), 8).unwrap();
        assert_eq!(z.eval(&qi(1)).unwrap(), CInterval::zero());
        let f1 = b.eval(&qi(1)).unwrap();
        // Σ 2^-ν (1 + i/ν)/(1 + 1/ν²), summed far out in floating point
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for nu in 1..200 {
            let a = 0.5f64.powi(nu);
            let n = nu as f64;
            re += a / (1.0 + 1.0 / (n * n));
            im += a / n / (1.0 + 1.0 / (n * n));
        }
        assert!((f1.re.mid_f64() - re).abs() < 1e-12);
        assert!((f1.im.mid_f64() - im).abs() < 1e-12);
    }

    #[test]
    fn borel_two_routes() {
        let b = BorelExample::geometric(qi(1), q(1, 2), 80).unwrap();
        let d0 = borel_example_derivatives(&b, 0).unwrap();
        assert!(d0.direct.im.contains(&qi(2)));
        assert_eq!(d0.transform, vec![vec![qi(1)]]);
        for j in 0..=10 {
            let d = borel_example_derivatives(&b, j).unwrap();
            assert!(d.agree && d.transform_unitriangular, "j={j}");
        }
        let z = BorelExample::new(BorelCoeffs::Finite(vec![Q::zero(); 3]), 8).unwrap();
        let d = borel_example_derivatives(&z, 4).unwrap();
        assert_eq!(d.direct, CInterval::zero());
    }

    #[test]
    fn stirling() {
        let s = stirling_matrix(6);
        assert_eq!(s[5], vec![qi(0), qi(1), qi(15), qi(25), qi(10), qi(1)]);
        assert!(is_unitriangular(&s));
    }
}
