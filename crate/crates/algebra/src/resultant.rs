//! Resultants over Q and norms from a simple extension.

use crate::rational::{qi, Q};
use crate::unipoly::UniPoly;
use num_traits::{One, Zero};

/// `Res(a, b)` with the convention `lc(a)^deg(b) * prod b(alpha_i)`.
pub fn resultant(a: &UniPoly<Q>, b: &UniPoly<Q>) -> Q {
    if a.is_zero() || b.is_zero() {
        return Q::zero();
    }
    let (m, n) = (a.deg(), b.deg());
    if n == 0 {
        return num_traits::pow(b.lc().unwrap().clone(), m as usize);
    }
    if m == 0 {
        return num_traits::pow(a.lc().unwrap().clone(), n as usize);
    }
    let r = a.rem(b);
    if r.is_zero() {
        return Q::zero();
    }
    let sign = if (m * n) % 2 == 1 { -Q::one() } else { Q::one() };
    sign * num_traits::pow(b.lc().unwrap().clone(), (m - r.deg()) as usize) * resultant(b, &r)
}

/// Newton interpolation through `(x_i, y_i)`.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> UniPoly<Q> {
    let n = xs.len();
    let mut dd: Vec<Q> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = UniPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UniPoly::new(vec![-xs[i].clone(), Q::one()]);
        p = p.mul(&lin).add(&UniPoly::constant(dd[i].clone()));
    }
    p
}

/// `Res_t(mu(t), G(t, w))` as a polynomial in `w`, where
/// `G = sum_i g[i](t) w^i` and `mu` is monic.
pub fn norm_poly(mu: &UniPoly<Q>, g: &[UniPoly<Q>]) -> UniPoly<Q> {
    let dw = g.len().saturating_sub(1);
    let npts = mu.deg().max(0) as usize * dw + 1;
    let mut xs = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for k in 0..npts {
        let w0 = qi(k as i64);
        let mut acc = UniPoly::zero();
        let mut pw = Q::one();
        for gi in g {
            acc = acc.add(&gi.scale(&pw));
            pw *= &w0;
        }
        xs.push(w0);
        ys.push(resultant(mu, &acc));
    }
    interpolate(&xs, &ys)
}
