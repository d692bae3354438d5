//! Minimal field interface shared by polynomial code.

use crate::rational::Q;
use num_traits::{One, Zero};
use std::fmt::Debug;

/// A field element that knows how to build its own zero and one.
///
/// Elements of number fields carry their field, so constants are produced
/// from an existing element rather than from nothing.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_q_like(&self, q: &Q) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn is_one_elem(&self) -> bool {
        self.minus(&self.one_like()).is_zero_elem()
    }

    fn divided(&self, o: &Self) -> Option<Self> {
        Some(self.times(&o.inverse()?))
    }

    fn scaled_q(&self, q: &Q) -> Self {
        self.times(&self.from_q_like(q))
    }
}

impl Field for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn from_q_like(&self, q: &Q) -> Self {
        q.clone()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Gaussian rationals `a + b i`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }

    pub fn i() -> Self {
        GaussQ::new(Q::zero(), Q::one())
    }

    pub fn conj(&self) -> Self {
        GaussQ::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Field for GaussQ {
    fn zero_like(&self) -> Self {
        GaussQ::new(Q::zero(), Q::zero())
    }
    fn one_like(&self) -> Self {
        GaussQ::new(Q::one(), Q::zero())
    }
    fn from_q_like(&self, q: &Q) -> Self {
        GaussQ::new(q.clone(), Q::zero())
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        GaussQ::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn minus(&self, o: &Self) -> Self {
        GaussQ::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn times(&self, o: &Self) -> Self {
        GaussQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn negated(&self) -> Self {
        GaussQ::new(-&self.re, -&self.im)
    }
    fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(GaussQ::new(&self.re / &n, -&self.im / &n))
    }
}
