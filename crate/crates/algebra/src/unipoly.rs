//! Dense univariate polynomials over a [`Field`].

use crate::field::Field;
use crate::rational::{qi, Q};

/// Coefficients from low to high degree, without trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<F> {
    c: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|a| a.is_zero_elem()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn constant(a: F) -> Self {
        Self::new(vec![a])
    }

    pub fn monomial(a: F, k: usize) -> Self {
        if a.is_zero_elem() {
            return Self::zero();
        }
        let mut c = vec![a.zero_like(); k];
        c.push(a);
        UniPoly { c }
    }

    /// The polynomial `x`, with constants taken from `t`.
    pub fn x_like(t: &F) -> Self {
        Self::monomial(t.one_like(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.c.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lc(&self) -> Option<&F> {
        self.c.last()
    }

    /// Smallest index with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero_elem())
    }

    fn some_elem(&self, o: &Self) -> Option<F> {
        self.c.first().or(o.c.first()).cloned()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a.plus(b)),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Self::new(c)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            c: self.c.iter().map(|a| a.negated()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let z = self.some_elem(o).unwrap().zero_like();
        let mut c = vec![z; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, a: &F) -> Self {
        Self::new(self.c.iter().map(|b| b.times(a)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![self.c[0].zero_like(); k];
        c.extend(self.c.iter().cloned());
        UniPoly { c }
    }

    /// Drop all terms of degree `>= n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.c.iter().take(n).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let Some(a) = self.c.first() else {
            assert!(e > 0, "0^0 without a coefficient template");
            return Self::zero();
        };
        let one = Self::constant(a.one_like());
        let mut acc = one;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lc().expect("division by the zero polynomial");
        let inv = dl.inverse().expect("leading coefficient must be invertible");
        let dn = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dn {
            return (Self::zero(), self.clone());
        }
        let z = dl.zero_like();
        let mut q = vec![z; r.len() - dn];
        for k in (0..q.len()).rev() {
            let t = r[k + dn].times(&inv);
            if t.is_zero_elem() {
                continue;
            }
            for (i, b) in d.c.iter().enumerate() {
                r[k + i] = r[k + i].minus(&t.times(b));
            }
            q[k] = t;
        }
        r.truncate(dn);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inverse().expect("nonzero")),
        }
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` the monic gcd.
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let t = a.some_elem(b).expect("ext_gcd of zeros");
        let one = Self::constant(t.one_like());
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let tt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = tt;
        }
        let l = r0.lc().expect("nonzero gcd").inverse().unwrap();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.scaled_q(&qi(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for a in self.c.iter().rev() {
            acc = acc.times(x).plus(a);
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(a.clone()));
        }
        acc
    }

    /// Yun's algorithm (characteristic zero): monic factors `f_i` with
    /// `self = lc * prod f_i^i`, skipping trivial ones.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.deg() < 1 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = Self::gcd(&f, &df);
        let mut b = f.exact_div(&a).unwrap();
        let mut c = df.exact_div(&a).unwrap().sub(&b.derivative());
        let mut i = 1;
        while b.deg() > 0 {
            let d = Self::gcd(&b, &c);
            b = b.exact_div(&d).unwrap();
            if d.deg() > 0 {
                out.push((d.clone(), i));
            }
            c = c.exact_div(&d).unwrap().sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        if self.deg() < 1 {
            return self.monic();
        }
        let g = Self::gcd(self, &self.derivative());
        self.exact_div(&g).unwrap().monic()
    }

    pub fn map<G, M: Fn(&F) -> G>(&self, m: M) -> UniPoly<G>
    where
        G: Field,
    {
        UniPoly::new(self.c.iter().map(m).collect())
    }
}

impl UniPoly<Q> {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&a| qi(a)).collect())
    }

    pub fn x() -> Self {
        Self::x_like(&Q::from_integer(0.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> UniPoly<Q> {
        UniPoly::from_ints(c)
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 2, 3, 4, 5]);
        let b = p(&[-1, 0, 2]);
        let (qq, r) = a.divrem(&b);
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_and_ext() {
        let f = p(&[-1, 0, 1]).mul(&p(&[2, 1]));
        let g = p(&[-1, 0, 1]).mul(&p(&[3, 1]));
        assert_eq!(UniPoly::gcd(&f, &g), p(&[-1, 0, 1]));
        let (gg, s, t) = UniPoly::ext_gcd(&f, &g);
        assert_eq!(s.mul(&f).add(&t.mul(&g)), gg);
    }

    #[test]
    fn squarefree() {
        // (x-1)^3 (x+2)^2 x
        let f = p(&[-1, 1]).pow(3).mul(&p(&[2, 1]).pow(2)).mul(&p(&[0, 1]));
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]);
        assert_eq!(f.squarefree_part(), p(&[0, 1]).mul(&p(&[2, 1])).mul(&p(&[-1, 1])));
        let scaled = f.scale(&q(3, 2));
        assert_eq!(scaled.squarefree_decomposition().len(), 3);
    }

    #[test]
    fn compose_eval() {
        let f = p(&[1, 0, 1]);
        let g = p(&[1, 1]);
        assert_eq!(f.compose(&g), p(&[2, 2, 1]));
        assert_eq!(f.eval(&q(1, 2)), q(5, 4));
    }
}
