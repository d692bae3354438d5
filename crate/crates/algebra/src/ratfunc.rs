//! The rational function field Q(x).

use crate::field::Field;
use crate::rational::Q;
use crate::unipoly::UniPoly;
use num_traits::{One, Signed, Zero};

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: UniPoly<Q>,
    den: UniPoly<Q>,
}

impl RatFunc {
    pub fn new(num: UniPoly<Q>, den: UniPoly<Q>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: UniPoly::constant(Q::one()),
            };
        }
        let g = UniPoly::gcd(&num, &den);
        let mut n = num.exact_div(&g).unwrap();
        let mut d = den.exact_div(&g).unwrap();
        let l = d.lc().unwrap().clone();
        n = n.scale(&l.recip());
        d = d.scale(&l.recip());
        RatFunc { num: n, den: d }
    }

    pub fn poly(p: UniPoly<Q>) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::constant(Q::one()),
        }
    }

    pub fn num(&self) -> &UniPoly<Q> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<Q> {
        &self.den
    }

    /// Sign for `x -> 0+` (`right`) or `x -> 0-`; `0` for the zero function.
    pub fn sign_near_zero(&self, right: bool) -> i32 {
        let Some(a) = self.num.order() else {
            return 0;
        };
        let b = self.den.order().unwrap();
        let s = |p: &UniPoly<Q>, k: usize| if p.coeffs()[k].is_positive() { 1 } else { -1 };
        let mut sg = s(&self.num, a) * s(&self.den, b);
        if !right && (a + b) % 2 == 1 {
            sg = -sg;
        }
        sg
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::poly(UniPoly::zero())
    }
    fn one_like(&self) -> Self {
        RatFunc::poly(UniPoly::constant(Q::one()))
    }
    fn from_q_like(&self, q: &Q) -> Self {
        RatFunc::poly(UniPoly::constant(q.clone()))
    }
    fn is_zero_elem(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn negated(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
    fn scaled_q(&self, q: &Q) -> Self {
        if q.is_zero() {
            return self.zero_like();
        }
        RatFunc {
            num: self.num.scale(q),
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        // -x^3 / (x + 2): negative on the right, positive on the left
        let f = RatFunc::new(UniPoly::from_ints(&[0, 0, 0, -1]), UniPoly::from_ints(&[2, 1]));
        assert_eq!(f.sign_near_zero(true), -1);
        assert_eq!(f.sign_near_zero(false), 1);
        let g = f.inverse().unwrap().times(&f);
        assert!(g.is_one_elem());
    }
}
