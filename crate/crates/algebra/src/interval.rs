//! Closed real intervals with exact rational endpoints.
//!
//! Every operation is exact; callers bound endpoint growth with
//! [`Interval::round`], which widens outward to a dyadic grid.

use crate::rational::{floor_log2, fmt_q, pow2, round_down, round_up, to_f64, Q};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Q,
    hi: Q,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_q(&self.lo), fmt_q(&self.hi))
    }
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Q::zero())
    }

    pub fn one() -> Self {
        Self::point(Q::one())
    }

    /// `[c - r, c + r]`.
    pub fn ball(c: Q, r: Q) -> Self {
        let r = r.abs();
        Interval::new(&c - &r, c + r)
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn rad(&self) -> Q {
        (&self.hi - &self.lo) / Q::from_integer(2.into())
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Q {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> Q {
        if self.contains_zero() {
            Q::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Width relative to the smallest magnitude; `None` when zero is inside.
    pub fn rel_width(&self) -> Option<Q> {
        let m = self.mig();
        if m.is_zero() {
            if self.is_point() {
                return Some(Q::zero());
            }
            return None;
        }
        Some(self.width() / m)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= Q::zero() && Q::zero() <= self.hi
    }

    pub fn subset_of(&self, o: &Interval) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    /// Strictly inside `o`.
    pub fn interior_of(&self, o: &Interval) -> bool {
        o.lo < self.lo && self.hi < o.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > Q::zero()
    }

    pub fn is_negative(&self) -> bool {
        self.hi < Q::zero()
    }

    /// Sign if it is certain.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison; `None` when the intervals overlap
    /// (unless both are the same point).
    pub fn cmp_certain(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if o.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.is_point() && o.is_point() && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(o.lo.clone());
        let hi = self.hi.clone().min(o.hi.clone());
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Outward rounding to `prec` significant bits per endpoint.
    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add_q(&self, c: &Q) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn scale(&self, c: &Q) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if self.is_point() {
            return o.scale(&self.lo);
        }
        if o.is_point() {
            return self.scale(&o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn sqr(&self) -> Interval {
        if self.contains_zero() {
            Interval {
                lo: Q::zero(),
                hi: self.mag() * self.mag(),
            }
        } else {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            if a <= b {
                Interval { lo: a, hi: b }
            } else {
                Interval { lo: b, hi: a }
            }
        }
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, o: &Interval) -> Option<Interval> {
        Some(self.mul(&o.recip()?))
    }

    pub fn abs(&self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    /// Integer power with outward rounding after every multiplication.
    pub fn powi(&self, e: u64, prec: u32) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::one();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).round(prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr().round(prec);
            }
        }
        if e % 2 == 0 && acc.lo.is_negative() {
            acc.lo = Q::zero();
        }
        acc
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    /// Number of correct leading bits, approximately (for diagnostics).
    pub fn accuracy_bits(&self) -> i64 {
        if self.is_point() {
            return i64::MAX;
        }
        let m = self.mag();
        if m.is_zero() {
            return i64::MAX;
        }
        floor_log2(&m) - floor_log2(&self.width())
    }

    /// Error bound `2^-k` as an interval `[-2^-k, 2^-k]`.
    pub fn err(k: i64) -> Interval {
        let e = pow2(-k);
        Interval { lo: -e.clone(), hi: e }
    }
}
