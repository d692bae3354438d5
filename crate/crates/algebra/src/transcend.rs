//! Certified elementary functions on [`Interval`]s.
//!
//! `prec` is the working precision in bits; results are enclosures whose
//! relative width is roughly `2^-prec` for well-conditioned arguments.

use crate::interval::Interval;
use crate::rational::{floor_log2, pow2, qb, qi, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn guard(prec: u32) -> u32 {
    prec + 16
}

/// `floor(x 2^w)`.
fn to_fixed(x: &Q, w: u32) -> BigInt {
    use num_integer::Integer;
    (x.numer() << w as usize).div_floor(x.denom())
}

/// `[a - err, b + err] / 2^w`.
fn from_fixed(a: BigInt, b: BigInt, err: u64, w: u32) -> Interval {
    let den = BigInt::one() << w as usize;
    Interval::new(Q::new(a - err, den.clone()), Q::new(b + err, den))
}

/// `exp(x)` for a rational point.
pub fn exp_q(x: &Q, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    let s = (floor_log2(x) + 2).max(0);
    let w = guard(prec) + s as u32 + 8;
    // |y| <= 1/2 in fixed point with w fractional bits. Every floor below
    // loses less than one unit; with |y| <= 1/2 the error carried by a term
    // stays under 4 units, the dropped tail (terms of at most 4 units and
    // ratio <= 1/4) under 8 units and the input rounding under 2 units.
    let y = to_fixed(&(x * pow2(-s)), w);
    let one = BigInt::one() << w as usize;
    let mut sum = one.clone();
    let mut term = one;
    let mut n: u64 = 0;
    loop {
        n += 1;
        term = num_integer::Integer::div_floor(&(&term * &y), &(BigInt::from(n) << w as usize));
        sum += &term;
        if term.abs() <= BigInt::from(4) {
            break;
        }
    }
    let err = 4 * n + 12;
    let mut r = from_fixed(sum.clone(), sum, err, w);
    for _ in 0..s {
        r = r.sqr().round(w);
    }
    r.round(prec)
}

pub fn exp(x: &Interval, prec: u32) -> Interval {
    let lo = exp_q(x.lo(), prec);
    if x.is_point() {
        return lo;
    }
    let hi = exp_q(x.hi(), prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// `atanh` at a rational point in `[0, 1/2]`, as a fixed-point value `S`
/// with `S <= atanh(z) 2^w <= S + err`.
fn atanh_fixed(z: &Q, w: u32) -> (BigInt, u64) {
    // Every step floors, so all errors are one-sided. The carried error of
    // z^(2k+1) stays under 3 units, each term adds at most 4, the tail after
    // a term of at most 4 units is under 10 and the input rounding costs 2.
    let zf = to_fixed(z, w);
    let z2 = (&zf * &zf) >> w as usize;
    let mut pw = zf.clone();
    let mut sum = zf;
    let mut k: u64 = 0;
    let four = BigInt::from(4);
    while pw > four {
        k += 1;
        pw = (&pw * &z2) >> w as usize;
        sum += &pw / BigInt::from(2 * k + 1);
    }
    (sum, 4 * k + 12)
}

/// `atanh(z)` for `0 <= z <= 1/2` as an enclosure.
fn atanh_small(z: &Interval, w: u32) -> Interval {
    let wf = w + 8;
    let (lo, _) = atanh_fixed(z.lo(), wf);
    let (hi, err) = if z.is_point() { (lo.clone(), atanh_fixed(z.lo(), wf).1) } else { atanh_fixed(z.hi(), wf) };
    let den = BigInt::one() << wf as usize;
    Interval::new(Q::new(lo, den.clone()), Q::new(hi + err, den))
}

fn ln2(w: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let v = atanh_small(&Interval::point(Q::new(1.into(), 3.into())), w + 8)
        .scale(&qi(2))
        .round(w);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// `ln(x)` for rational `x > 0`.
pub fn ln_q(x: &Q, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of a nonpositive number");
    if x.is_one() {
        return Interval::zero();
    }
    let k = floor_log2(x);
    let w = guard(prec) + (64 - (k.unsigned_abs().max(1)).leading_zeros());
    let y = x * pow2(-k);
    let z = Interval::point((&y - Q::one()) / (&y + Q::one())).round(w);
    let lny = atanh_small(&z, w).scale(&qi(2));
    let r = lny.add(&ln2(w).scale(&qi(k)));
    r.round(prec)
}

pub fn ln(x: &Interval, prec: u32) -> Option<Interval> {
    if !x.is_positive() {
        return None;
    }
    let lo = ln_q(x.lo(), prec);
    if x.is_point() {
        return Some(lo);
    }
    let hi = ln_q(x.hi(), prec);
    Some(Interval::new(lo.lo().clone(), hi.hi().clone()))
}

fn atan_recip(n: i64, w: u32) -> Interval {
    // atan(1/n) = sum (-1)^k / ((2k+1) n^(2k+1)); alternating and decreasing.
    let z = Q::new(BigInt::one(), BigInt::from(n));
    let z2 = &z * &z;
    let mut pw = z.clone();
    let mut sum = Interval::point(z);
    let eps = pow2(-(w as i64) - 2);
    let mut k: i64 = 1;
    loop {
        pw = &pw * &z2;
        let t = &pw / qi(2 * k + 1);
        let t = Interval::point(t).round(w);
        sum = if k % 2 == 1 { sum.sub(&t) } else { sum.add(&t) }.round(w);
        k += 1;
        if t.mag() < eps {
            let next = t.mag();
            return Interval::new(sum.lo() - &next, sum.hi() + next);
        }
    }
}

/// Enclosure of pi.
pub fn pi(prec: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let w = guard(prec);
    let v = atan_recip(5, w)
        .scale(&qi(16))
        .sub(&atan_recip(239, w).scale(&qi(4)))
        .round(prec);
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// Euler's number.
pub fn e_const(prec: u32) -> Interval {
    exp_q(&Q::one(), prec)
}

/// `(sin x, cos x)` for an interval argument.
pub fn sin_cos(x: &Interval, prec: u32) -> (Interval, Interval) {
    let mag = x.mag();
    let extra = if mag.is_zero() {
        0
    } else {
        (floor_log2(&mag) + 2).max(0) as u32
    };
    let w = guard(prec) + extra;
    let m = x.mid();
    let two_pi = pi(w + 4).scale(&qi(2));
    let k = (&m / two_pi.mid()).round();
    let r = Interval::point(m).sub(&two_pi.scale(&k)).round(w);
    let c = r.mid();
    let spread = &r.rad() + x.rad();
    let (s, co) = sin_cos_point(&c, w);
    let one = Interval::new(-Q::one(), Q::one());
    let s = Interval::ball(s.mid(), s.rad() + &spread)
        .intersect(&one)
        .unwrap_or(one.clone());
    let co = Interval::ball(co.mid(), co.rad() + &spread)
        .intersect(&one)
        .unwrap_or(one);
    (s.round(prec), co.round(prec))
}

/// Taylor evaluation for a moderate rational argument.
fn sin_cos_point(c: &Q, w: u32) -> (Interval, Interval) {
    let x = Interval::point(c.clone());
    let mut term = Interval::one();
    let mut s = Interval::zero();
    let mut co = Interval::zero();
    let eps = pow2(-(w as i64) - 2);
    let cmag = c.abs();
    let mut n: i64 = 0;
    loop {
        match n % 4 {
            0 => co = co.add(&term),
            1 => s = s.add(&term),
            2 => co = co.sub(&term),
            _ => s = s.sub(&term),
        }
        n += 1;
        term = term.mul(&x).scale(&Q::new(BigInt::one(), BigInt::from(n))).round(w);
        if term.mag() < eps && qi(n) > &cmag * qi(2) {
            break;
        }
    }
    // Remaining terms shrink at least geometrically by 1/2.
    let tail = term.mag() * qi(2);
    (
        Interval::ball(s.mid(), s.rad() + &tail),
        Interval::ball(co.mid(), co.rad() + &tail),
    )
}

/// `x^(1/n)` for rational `x >= 0`.
pub fn nth_root_q(x: &Q, n: u32, prec: u32) -> Interval {
    assert!(!x.is_negative(), "even root of a negative number");
    if x.is_zero() || n == 1 {
        return Interval::point(x.clone());
    }
    let w = guard(prec) as i64;
    let e = floor_log2(x) / n as i64;
    let s = w - e; // scale so the root has about w bits
    let scaled = x * pow2(s * n as i64);
    let big = scaled.floor().to_integer();
    let r = big.nth_root(n);
    let lo = qb(r.clone()) * pow2(-s);
    let hi = qb(r + 1) * pow2(-s);
    Interval::new(lo, hi).round(prec)
}

pub fn nth_root(x: &Interval, n: u32, prec: u32) -> Interval {
    let lo = nth_root_q(&x.lo().clone().max(Q::zero()), n, prec);
    let hi = nth_root_q(&x.hi().clone().max(Q::zero()), n, prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// `x^e` for a positive interval and rational exponent.
pub fn pow_q(x: &Interval, e: &Q, prec: u32) -> Interval {
    assert!(x.is_positive(), "pow_q needs a positive base");
    if e.is_zero() {
        return Interval::one();
    }
    let a = e.numer().abs();
    let b = e.denom();
    let b: u32 = b.try_into().expect("root order too large");
    let a: u64 = a.try_into().expect("exponent numerator too large");
    // Extra bits for error amplification through the power.
    let w = prec + 16 + 64 - a.leading_zeros();
    let mut v = x.powi(a, w);
    if b > 1 {
        v = nth_root(&v, b, w);
    }
    if e.is_negative() {
        v = v.recip().expect("positive");
    }
    v.round(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_f64, q};

    fn near(iv: &Interval, v: f64, tol: f64) -> bool {
        (iv.mid_f64() - v).abs() <= tol * v.abs().max(1.0)
    }

    fn encloses_f64(iv: &Interval, v: f64) -> bool {
        // f64 reference values are only good to ~1e-15.
        let slack = from_f64(v.abs().max(1.0) * 1e-14).unwrap();
        Interval::ball(iv.mid(), iv.rad() + slack).contains(&from_f64(v).unwrap())
    }

    #[test]
    fn constants() {
        let p = pi(256);
        assert!(encloses_f64(&p, std::f64::consts::PI));
        assert!(p.width() < pow2(-250));
        let e = e_const(128);
        assert!(encloses_f64(&e, std::f64::consts::E));
        assert!(e.width() < pow2(-120));
    }

    #[test]
    fn exp_ln_values() {
        for x in [q(-7, 1), q(-1, 3), q(5, 2), q(40, 1)] {
            let v = exp_q(&x, 128);
            assert!(encloses_f64(&v, crate::rational::to_f64(&x).exp()));
            assert!(v.rel_width().unwrap() < pow2(-120));
        }
        for x in [q(1, 7), q(3, 1), q(1000, 1), q(123456789, 1000)] {
            let v = ln_q(&x, 128);
            assert!(encloses_f64(&v, crate::rational::to_f64(&x).ln()));
        }
        assert!(near(&ln_q(&q(2, 1), 64), std::f64::consts::LN_2, 1e-15));
    }

    #[test]
    fn trig() {
        for x in [q(0, 1), q(1, 2), q(-3, 1), q(100, 1), q((1 << 42) + 1, 4)] {
            let xf = crate::rational::to_f64(&x);
            let (s, c) = sin_cos(&Interval::point(x), 128);
            assert!(encloses_f64(&s, xf.sin()), "sin {xf}");
            assert!(encloses_f64(&c, xf.cos()), "cos {xf}");
            assert!(s.width() < pow2(-100));
        }
    }

    #[test]
    fn roots_and_powers() {
        let r = nth_root_q(&q(2, 1), 2, 128);
        assert!(encloses_f64(&r, std::f64::consts::SQRT_2));
        assert!(r.sqr().contains(&q(2, 1)));
        let p = pow_q(&Interval::point(q(8, 1)), &q(2, 3), 64);
        assert!(p.contains(&q(4, 1)));
        let p = pow_q(&Interval::point(q(9, 1)), &q(-1, 2), 64);
        assert!(p.contains(&q(1, 3)));
    }
}
