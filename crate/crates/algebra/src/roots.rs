//! Certified isolation of all complex roots of a rational polynomial.
//!
//! Real roots come from Sturm bisection. Non-real roots start from
//! floating-point Aberth iterates, are polished by Newton steps in exact
//! dyadic arithmetic and are then certified with a Krawczyk test, which
//! proves existence and uniqueness inside each box. Counting closes the
//! argument: real roots plus certified disjoint non-real boxes (and their
//! conjugates) must add up to the degree.

use crate::complex::CInterval;
use crate::error::{AlgebraError, Result};
use crate::field::{Field, GaussQ};
use crate::interval::Interval;
use crate::rational::{floor_log2, from_f64, pow2, round_down, to_f64, Q};
use crate::sturm::{isolate_real_roots, RealRoot};
use crate::unipoly::UniPoly;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

pub const PRECISION_CAP: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum RootBox {
    Real(RealRoot),
    /// Box certified to contain exactly one root, disjoint from the real axis.
    Complex(CInterval),
}

impl RootBox {
    pub fn is_real(&self) -> bool {
        matches!(self, RootBox::Real(_))
    }

    pub fn enclosure(&self) -> CInterval {
        match self {
            RootBox::Real(r) => CInterval::real(r.interval()),
            RootBox::Complex(b) => b.clone(),
        }
    }

    pub fn width(&self) -> Q {
        self.enclosure().max_width()
    }

    pub fn conj(&self) -> RootBox {
        match self {
            RootBox::Real(r) => RootBox::Real(r.clone()),
            RootBox::Complex(b) => RootBox::Complex(b.conj()),
        }
    }
}

fn eval_c(p: &UniPoly<Q>, z: &CInterval, prec: u32) -> CInterval {
    let mut acc = CInterval::zero();
    for a in p.coeffs().iter().rev() {
        acc = acc.mul(z).add_q(a).round(prec);
    }
    acc
}

fn round_g(z: &GaussQ, prec: u32) -> GaussQ {
    GaussQ::new(round_down(&z.re, prec), round_down(&z.im, prec))
}

fn eval_g(p: &UniPoly<Q>, z: &GaussQ, prec: u32) -> GaussQ {
    let mut acc = GaussQ::new(Q::zero(), Q::zero());
    for a in p.coeffs().iter().rev() {
        acc = round_g(&acc.times(z).plus(&GaussQ::new(a.clone(), Q::zero())), prec);
    }
    acc
}

fn aberth(p: &UniPoly<Q>) -> Option<Vec<Complex64>> {
    let n = p.deg() as usize;
    let lc = to_f64(p.lc().unwrap());
    let c: Vec<f64> = p.coeffs().iter().map(|a| to_f64(a) / lc).collect();
    if c.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let r = c[..n]
        .iter()
        .map(|a| a.abs())
        .fold(0.0f64, f64::max)
        .max(1e-3)
        .powf(1.0 / n as f64)
        .max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut done = true;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += 1.0 / (z[k] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if !w.is_finite() {
                return None;
            }
            z[k] -= w;
            if w.norm() > 1e-15 * z[k].norm().max(1e-300) {
                done = false;
            }
        }
        if done {
            return Some(z);
        }
    }
    Some(z)
}

/// Newton polishing in dyadic arithmetic with `prec` bits.
fn polish(p: &UniPoly<Q>, dp: &UniPoly<Q>, z0: &GaussQ, prec: u32) -> Option<GaussQ> {
    let mut z = round_g(z0, prec);
    for _ in 0..(prec / 8 + 12) {
        let v = eval_g(p, &z, prec);
        let d = eval_g(dp, &z, prec);
        let step = v.divided(&d)?;
        z = round_g(&z.minus(&step), prec);
        let sn = step.re.abs() + step.im.abs();
        let zn = z.re.abs() + z.im.abs() + Q::from_integer(1.into());
        if sn.is_zero() || floor_log2(&(sn / zn)) < -(prec as i64) + 4 {
            break;
        }
    }
    Some(z)
}

/// Krawczyk test on the square box of radius `r` about `c`.
pub fn krawczyk(p: &UniPoly<Q>, dp: &UniPoly<Q>, c: &GaussQ, r: &Q, prec: u32) -> Option<CInterval> {
    let b = CInterval::new(Interval::ball(c.re.clone(), r.clone()), Interval::ball(c.im.clone(), r.clone()));
    let dc = eval_g(dp, c, prec + 32);
    let y = round_g(&dc.inverse()?, prec);
    let yb = CInterval::point(&y);
    let pc = eval_c(p, &CInterval::point(c), prec);
    let db = eval_c(dp, &b, prec);
    let cb = CInterval::point(c);
    let k = cb
        .sub(&yb.mul(&pc))
        .add(&CInterval::one().sub(&yb.mul(&db)).mul(&b.sub(&cb)))
        .round(prec);
    if k.interior_of(&b) {
        Some(k)
    } else {
        None
    }
}

fn certify_nonreal(p: &UniPoly<Q>, approx: &[Complex64], prec: u32) -> Option<Vec<CInterval>> {
    let dp = p.derivative();
    let mut boxes: Vec<CInterval> = Vec::new();
    for z in approx {
        let z0 = GaussQ::new(from_f64(z.re)?, from_f64(z.im.abs())?);
        let c = polish(p, &dp, &z0, prec)?;
        let scale = c.re.abs() + c.im.abs() + Q::from_integer(1.into());
        let mut r = pow2(-(prec as i64) / 2) * &scale;
        let mut cert = None;
        for _ in 0..6 {
            if let Some(k) = krawczyk(p, &dp, &c, &r, prec) {
                cert = Some(k);
                break;
            }
            r *= Q::from_integer(16.into());
        }
        let k = cert?;
        if !k.im.is_positive() {
            return None;
        }
        if boxes.iter().any(|b| b.overlaps(&k)) {
            return None;
        }
        boxes.push(k);
    }
    Some(boxes)
}

/// Isolate all distinct roots of `p`: real ones in increasing order, then
/// non-real ones (upper half-plane box followed by its conjugate).
pub fn isolate_complex_roots(p: &UniPoly<Q>) -> Result<Vec<RootBox>> {
    if p.deg() < 1 {
        return Ok(Vec::new());
    }
    let sp = p.squarefree_part();
    let n = sp.deg() as usize;
    let real = isolate_real_roots(&sp);
    let mut out: Vec<RootBox> = real.into_iter().map(RootBox::Real).collect();
    let pairs = (n - out.len()) / 2;
    if pairs == 0 {
        return Ok(out);
    }
    let approx = aberth(&sp).ok_or_else(|| AlgebraError::RootIsolation("no convergence".into()))?;
    let mut upper: Vec<Complex64> = approx;
    upper.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal));
    upper.truncate(pairs);
    let mut prec = 128;
    loop {
        if let Some(boxes) = certify_nonreal(&sp, &upper, prec) {
            for b in boxes {
                out.push(RootBox::Complex(b.clone()));
                out.push(RootBox::Complex(b.conj()));
            }
            return Ok(out);
        }
        prec *= 2;
        if prec > PRECISION_CAP {
            return Err(AlgebraError::RootIsolation(format!(
                "could not certify non-real roots of degree-{n} polynomial"
            )));
        }
    }
}

/// Shrink a root box of the squarefree `p` until its width is at most `w`.
pub fn refine(p: &UniPoly<Q>, b: &RootBox, w: &Q) -> Result<RootBox> {
    match b {
        RootBox::Real(r) => {
            let mut r = r.clone();
            r.refine(p, w);
            Ok(RootBox::Real(r))
        }
        RootBox::Complex(bx) => {
            if &bx.max_width() <= w {
                return Ok(b.clone());
            }
            let dp = p.derivative();
            let bits = (-floor_log2(w)).max(0) as u32;
            let mut prec = (2 * bits + 64).max(128);
            while prec <= 2 * PRECISION_CAP {
                let c = polish(p, &dp, &bx.center(), prec)
                    .ok_or_else(|| AlgebraError::RootIsolation("singular refinement".into()))?;
                let r = w / Q::from_integer(4.into());
                if let Some(k) = krawczyk(p, &dp, &c, &r, prec) {
                    if k.subset_of(bx) {
                        return Ok(RootBox::Complex(k));
                    }
                    // The new box pokes out of the old one: accept it only if a
                    // box covering both also has a unique root.
                    let h = CInterval::new(k.re.hull(&bx.re), k.im.hull(&bx.im));
                    let hc = h.center();
                    let hr = h.re.rad().max(h.im.rad());
                    if krawczyk(p, &dp, &hc, &hr, prec).is_some() {
                        return Ok(RootBox::Complex(k));
                    }
                }
                prec *= 2;
            }
            Err(AlgebraError::PrecisionExhausted(PRECISION_CAP))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn cyclotomic_and_mixed() {
        let p = UniPoly::from_ints(&[1, 1, 1, 1, 1]); // x^4+x^3+x^2+x+1
        let r = isolate_complex_roots(&p).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|b| !b.is_real()));
        let p = UniPoly::from_ints(&[-2, 0, 0, 1]); // x^3 - 2
        let r = isolate_complex_roots(&p).unwrap();
        assert_eq!(r.iter().filter(|b| b.is_real()).count(), 1);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn refinement_keeps_root() {
        let p = UniPoly::from_ints(&[1, 0, 1]); // x^2 + 1
        let r = isolate_complex_roots(&p).unwrap();
        let up = r.iter().find(|b| matches!(b, RootBox::Complex(c) if c.im.is_positive())).unwrap();
        let fine = refine(&p, up, &pow2(-200)).unwrap();
        let e = fine.enclosure();
        assert!(e.im.contains(&q(1, 1)));
        assert!(e.re.contains(&q(0, 1)));
        assert!(e.max_width() <= pow2(-200));
    }
}
