//! Rectangular complex intervals.

use crate::field::GaussQ;
use crate::interval::Interval;
use crate::rational::Q;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub fn point(z: &GaussQ) -> Self {
        CInterval::new(Interval::point(z.re.clone()), Interval::point(z.im.clone()))
    }

    pub fn real(re: Interval) -> Self {
        CInterval::new(re, Interval::zero())
    }

    pub fn from_q(x: &Q) -> Self {
        CInterval::real(Interval::point(x.clone()))
    }

    pub fn zero() -> Self {
        CInterval::real(Interval::zero())
    }

    pub fn one() -> Self {
        CInterval::real(Interval::one())
    }

    pub fn center(&self) -> GaussQ {
        GaussQ::new(self.re.mid(), self.im.mid())
    }

    pub fn add(&self, o: &Self) -> Self {
        CInterval::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        CInterval::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        CInterval::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        CInterval::new(self.re.clone(), self.im.neg())
    }

    pub fn add_q(&self, c: &Q) -> Self {
        CInterval::new(self.re.add_q(c), self.im.clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        CInterval::new(self.re.scale(c), self.im.scale(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        CInterval::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn mul_real(&self, r: &Interval) -> Self {
        CInterval::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn sqr(&self) -> Self {
        CInterval::new(
            self.re.sqr().sub(&self.im.sqr()),
            self.re.mul(&self.im).scale(&Q::from_integer(2.into())),
        )
    }

    /// `|z|^2` enclosure.
    pub fn norm2(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn recip(&self) -> Option<Self> {
        let n = self.norm2();
        let inv = n.recip()?;
        Some(CInterval::new(self.re.mul(&inv), self.im.neg().mul(&inv)))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.recip()?))
    }

    pub fn round(&self, prec: u32) -> Self {
        CInterval::new(self.re.round(prec), self.im.round(prec))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn interior_of(&self, o: &Self) -> bool {
        self.re.interior_of(&o.re) && self.im.interior_of(&o.im)
    }

    pub fn subset_of(&self, o: &Self) -> bool {
        self.re.subset_of(&o.re) && self.im.subset_of(&o.im)
    }

    pub fn max_width(&self) -> Q {
        self.re.width().max(self.im.width())
    }

    /// Upper bound on `|z|`, crude but certified.
    pub fn mag_bound(&self) -> Q {
        self.re.mag() + self.im.mag()
    }

    pub fn is_certainly_nonreal(&self) -> bool {
        !self.im.contains_zero()
    }

    pub fn is_point_real(&self) -> bool {
        self.im.is_point() && self.im.lo().is_zero()
    }

    pub fn powi(&self, e: u32, prec: u32) -> Self {
        let mut acc = CInterval::one();
        for _ in 0..e {
            acc = acc.mul(self).round(prec);
        }
        acc
    }
}
