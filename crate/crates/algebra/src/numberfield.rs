//! Simple number fields `Q(theta)` with a chosen complex embedding,
//! factorization over them (Trager) and adjunction of roots.

use crate::algebraic::{locate, AlgebraicNumber};
use crate::complex::CInterval;
use crate::error::{AlgebraError, Result};
use crate::factor::factor_q;
use crate::field::Field;
use crate::rational::{binomial, pow2, qb, qi, Q};
use crate::resultant::norm_poly;
use crate::roots::PRECISION_CAP;
use crate::unipoly::UniPoly;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

pub struct NumberField {
    min_poly: UniPoly<Q>,
    embedding: Option<AlgebraicNumber>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({:?})", self.min_poly.coeffs())
    }
}

impl NumberField {
    /// The rationals, presented as `Q[t]/(t)`.
    pub fn rational() -> Arc<NumberField> {
        Arc::new(NumberField {
            min_poly: UniPoly::x(),
            embedding: Some(AlgebraicNumber::rational(&Q::zero())),
        })
    }

    /// `min_poly` must be irreducible; `embedding` picks one of its roots.
    pub fn new(min_poly: UniPoly<Q>, embedding: Option<AlgebraicNumber>) -> Arc<NumberField> {
        Arc::new(NumberField {
            min_poly: min_poly.monic(),
            embedding,
        })
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg() as usize
    }

    pub fn min_poly(&self) -> &UniPoly<Q> {
        &self.min_poly
    }

    pub fn embedding(&self) -> Option<&AlgebraicNumber> {
        self.embedding.as_ref()
    }

    /// True when the chosen embedding lands in the reals.
    pub fn is_real(&self) -> bool {
        self.degree() == 1 || self.embedding.as_ref().is_some_and(|g| g.is_real())
    }

    pub fn elem(self: &Arc<Self>, p: UniPoly<Q>) -> NfElem {
        let p = if p.deg() >= self.min_poly.deg() {
            p.rem(&self.min_poly)
        } else {
            p
        };
        NfElem {
            field: self.clone(),
            p,
        }
    }

    pub fn from_q(self: &Arc<Self>, x: &Q) -> NfElem {
        self.elem(UniPoly::constant(x.clone()))
    }

    pub fn gen(self: &Arc<Self>) -> NfElem {
        self.elem(UniPoly::x())
    }
}

#[derive(Clone)]
pub struct NfElem {
    field: Arc<NumberField>,
    p: UniPoly<Q>,
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.p.coeffs().iter().map(crate::rational::fmt_q).collect();
        write!(f, "NfElem[{}]", c.join(","))
    }
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.field, &o.field) && self.p == o.p
    }
}

impl NfElem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn poly(&self) -> &UniPoly<Q> {
        &self.p
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.p.deg() {
            -1 => Some(Q::zero()),
            0 => Some(self.p.coeffs()[0].clone()),
            _ => None,
        }
    }

    fn same(&self, o: &Self) {
        debug_assert!(Arc::ptr_eq(&self.field, &o.field), "mixed number fields");
    }

    /// Enclosure of the value under the field's embedding, width `<= 2^-bits`.
    pub fn enclosure(&self, bits: u32) -> Result<CInterval> {
        if let Some(q) = self.as_rational() {
            return Ok(CInterval::from_q(&q));
        }
        let g = self
            .field
            .embedding
            .as_ref()
            .ok_or_else(|| AlgebraError::Domain("field has no embedding".into()))?;
        let target = pow2(-(bits as i64));
        let mut gb = bits + 16;
        while gb <= 2 * PRECISION_CAP {
            let z = g.enclosure(gb)?;
            let mut acc = CInterval::zero();
            for a in self.p.coeffs().iter().rev() {
                acc = acc.mul(&z).add_q(a).round(gb + 8);
            }
            if acc.max_width() <= target {
                return Ok(acc);
            }
            gb *= 2;
        }
        Err(AlgebraError::PrecisionExhausted(PRECISION_CAP))
    }

    /// Characteristic polynomial over Q (a power of the minimal one).
    pub fn charpoly(&self) -> UniPoly<Q> {
        norm_poly(
            &self.field.min_poly,
            &[self.p.neg(), UniPoly::constant(Q::one())],
        )
    }

    pub fn min_poly(&self) -> UniPoly<Q> {
        self.charpoly().squarefree_part()
    }

    /// Whether the embedded value is real, certified.
    pub fn is_real(&self) -> Result<bool> {
        if self.field.is_real() || self.as_rational().is_some() {
            return Ok(true);
        }
        certify_real(&self.min_poly(), |b| self.enclosure(b))
    }
}

/// Decide whether the root of `poly` matching `value` is real.
pub fn certify_real<F>(poly: &UniPoly<Q>, value: F) -> Result<bool>
where
    F: FnMut(u32) -> Result<CInterval>,
{
    let roots = AlgebraicNumber::roots_of(poly)?;
    let i = locate(&roots, value)?;
    Ok(roots[i].is_real())
}

impl Field for NfElem {
    fn zero_like(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            p: UniPoly::zero(),
        }
    }
    fn one_like(&self) -> Self {
        self.field.from_q(&Q::one())
    }
    fn from_q_like(&self, q: &Q) -> Self {
        self.field.from_q(q)
    }
    fn is_zero_elem(&self) -> bool {
        self.p.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.same(o);
        NfElem {
            field: self.field.clone(),
            p: self.p.add(&o.p),
        }
    }
    fn minus(&self, o: &Self) -> Self {
        self.same(o);
        NfElem {
            field: self.field.clone(),
            p: self.p.sub(&o.p),
        }
    }
    fn times(&self, o: &Self) -> Self {
        self.same(o);
        self.field.elem(self.p.mul(&o.p))
    }
    fn negated(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            p: self.p.neg(),
        }
    }
    fn inverse(&self) -> Option<Self> {
        if self.p.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(self.field.from_q(&q.recip()));
        }
        let (g, s, _) = UniPoly::ext_gcd(&self.p, &self.field.min_poly);
        debug_assert_eq!(g.deg(), 0, "min_poly not irreducible");
        Some(self.field.elem(s))
    }
    fn scaled_q(&self, q: &Q) -> Self {
        NfElem {
            field: self.field.clone(),
            p: self.p.scale(q),
        }
    }
}

/// Coefficients of `f(w - k t)` in `w`, each a polynomial in `t`, where the
/// coefficients of `f` are read as polynomials in `t`.
fn shifted_lift(f: &UniPoly<NfElem>, k: i64) -> Vec<UniPoly<Q>> {
    let n = f.deg().max(0) as usize;
    let mut out = vec![UniPoly::zero(); n + 1];
    for (j, c) in f.coeffs().iter().enumerate() {
        // (w - k t)^j = sum_i C(j,i) w^i (-k t)^(j-i)
        for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
            let coef = qb(binomial(j as u64, i as u64)) * crate::rational::pow_i(&qi(-k), (j - i) as i64);
            let term = c.poly().shift(j - i).scale(&coef);
            *slot = slot.add(&term);
        }
    }
    out
}

fn shifts() -> impl Iterator<Item = i64> {
    (0..).map(|i: i64| if i % 2 == 0 { -(i / 2) } else { i / 2 + 1 })
}

/// Norm and shift making `Norm(f(w - k alpha))` squarefree.
fn squarefree_norm(f: &UniPoly<NfElem>) -> (UniPoly<Q>, i64) {
    let field = f.lc().unwrap().field().clone();
    for k in shifts() {
        let n = norm_poly(&field.min_poly, &shifted_lift(f, k));
        if UniPoly::gcd(&n, &n.derivative()).deg() == 0 {
            return (n, k);
        }
    }
    unreachable!()
}

fn lift_q(field: &Arc<NumberField>, p: &UniPoly<Q>) -> UniPoly<NfElem> {
    UniPoly::new(p.coeffs().iter().map(|c| field.from_q(c)).collect())
}

/// Monic irreducible factors over the coefficient field, with multiplicity.
pub fn factor_over(f: &UniPoly<NfElem>) -> Vec<(UniPoly<NfElem>, u32)> {
    let Some(lc) = f.lc() else {
        return Vec::new();
    };
    let field = lc.field().clone();
    if field.degree() == 1 {
        let fq = f.map(|c| c.as_rational().unwrap());
        return factor_q(&fq)
            .into_iter()
            .map(|(g, m)| (lift_q(&field, &g), m))
            .collect();
    }
    let mut out = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        if g.deg() == 1 {
            out.push((g, m));
            continue;
        }
        let (n, k) = squarefree_norm(&g);
        // x + k alpha in K[x]
        let shift = UniPoly::new(vec![
            field.gen().scaled_q(&qi(k)),
            field.from_q(&Q::one()),
        ]);
        for (ni, _) in factor_q(&n) {
            let lifted = lift_q(&field, &ni).compose(&shift);
            let h = UniPoly::gcd(&g, &lifted);
            if h.deg() >= 1 {
                out.push((h, m));
            }
        }
    }
    out
}

/// A field containing one concrete root of an irreducible polynomial.
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: Arc<NumberField>,
    /// Image of the old generator, as a polynomial in the new one.
    pub embed: UniPoly<Q>,
    /// The adjoined root.
    pub root: NfElem,
}

impl Extension {
    /// Map an element of the base field into the extension.
    pub fn map(&self, a: &NfElem) -> NfElem {
        let img = self.field.elem(self.embed.clone());
        let mut acc = self.field.from_q(&Q::zero());
        for c in a.poly().coeffs().iter().rev() {
            acc = acc.times(&img).plus(&self.field.from_q(c));
        }
        acc
    }
}

/// One extension per concrete root (under the base embedding) of the
/// irreducible monic `h` of degree at least two.
pub fn adjoin_roots(h: &UniPoly<NfElem>) -> Result<Vec<Extension>> {
    let base = h.lc().unwrap().field().clone();
    let mu = base.min_poly.clone();
    let (n, k) = squarefree_norm(h);
    let abstract_l = NumberField::new(n.clone(), None);
    let theta = abstract_l.gen();
    // H(t) = h(theta - k t) with alpha -> t, over L.
    let lin = UniPoly::new(vec![theta.clone(), abstract_l.from_q(&qi(-k))]);
    let mut hh: UniPoly<NfElem> = UniPoly::zero();
    for c in h.coeffs().iter().rev() {
        let cl = lift_q(&abstract_l, c.poly());
        hh = hh.mul(&lin).add(&cl);
    }
    let g = UniPoly::gcd(&lift_q(&abstract_l, &mu), &hh);
    if g.deg() != 1 {
        return Err(AlgebraError::Domain(format!(
            "primitive element recovery failed (gcd degree {})",
            g.deg()
        )));
    }
    let a_poly = g.coeffs()[0].negated().poly().clone();

    let mu_roots = if base.degree() > 1 {
        AlgebraicNumber::roots_of(&mu)?
    } else {
        Vec::new()
    };
    let alpha_idx = if base.degree() > 1 {
        let gen = base
            .embedding
            .as_ref()
            .ok_or_else(|| AlgebraError::Domain("base field has no embedding".into()))?;
        Some(locate(&mu_roots, |b| gen.enclosure(b))?)
    } else {
        None
    };
    let mut out = Vec::new();
    for rho in AlgebraicNumber::roots_of(&n)? {
        if let Some(ai) = alpha_idx {
            let idx = locate(&mu_roots, |b| {
                let z = rho.enclosure(b + 16)?;
                let mut acc = CInterval::zero();
                for a in a_poly.coeffs().iter().rev() {
                    acc = acc.mul(&z).add_q(a).round(b + 16);
                }
                Ok(acc)
            })?;
            if idx != ai {
                continue;
            }
        }
        let l = NumberField::new(n.clone(), Some(rho));
        let root = l
            .gen()
            .minus(&l.elem(a_poly.clone()).scaled_q(&qi(k)));
        out.push(Extension {
            field: l,
            embed: a_poly.clone(),
            root,
        });
    }
    if out.len() != h.deg() as usize {
        return Err(AlgebraError::RootIsolation(format!(
            "expected {} conjugate roots, found {}",
            h.deg(),
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn qpoly(field: &Arc<NumberField>, c: &[i64]) -> UniPoly<NfElem> {
        UniPoly::new(c.iter().map(|&a| field.from_q(&qi(a))).collect())
    }

    #[test]
    fn sqrt2_arithmetic() {
        let roots = AlgebraicNumber::roots_of(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        let pos = roots.into_iter().find(|r| r.enclosure(8).unwrap().re.is_positive()).unwrap();
        let k = NumberField::new(UniPoly::from_ints(&[-2, 0, 1]), Some(pos));
        let s = k.gen();
        assert_eq!(s.times(&s), k.from_q(&qi(2)));
        let inv = s.inverse().unwrap();
        assert_eq!(inv.times(&s), k.from_q(&Q::one()));
        assert!(s.is_real().unwrap());
        assert_eq!(s.min_poly(), UniPoly::from_ints(&[-2, 0, 1]));
        let e = s.enclosure(60).unwrap();
        assert!(e.re.contains(&q(14142135623730951, 10000000000000000)) || e.re.width() < pow2(-50));
    }

    #[test]
    fn factor_over_gaussian_field() {
        let roots = AlgebraicNumber::roots_of(&UniPoly::from_ints(&[1, 0, 1])).unwrap();
        let i_up = roots
            .into_iter()
            .find(|r| r.enclosure(8).unwrap().im.is_positive())
            .unwrap();
        let k = NumberField::new(UniPoly::from_ints(&[1, 0, 1]), Some(i_up));
        // w^2 + 1 splits over Q(i).
        let f = factor_over(&qpoly(&k, &[1, 0, 1]));
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(g, _)| g.deg() == 1));
        // w^2 - 2 stays irreducible over Q(i).
        let f = factor_over(&qpoly(&k, &[-2, 0, 1]));
        assert_eq!(f.len(), 1);
        assert!(!k.gen().is_real().unwrap());
    }

    #[test]
    fn adjoin_over_rationals_and_tower() {
        let qf = NumberField::rational();
        let h = qpoly(&qf, &[-2, 0, 1]);
        let exts = adjoin_roots(&h).unwrap();
        assert_eq!(exts.len(), 2);
        for e in &exts {
            assert_eq!(e.root.times(&e.root), e.field.from_q(&qi(2)));
            assert!(e.root.is_real().unwrap());
        }
        // Tower: adjoin i to Q(sqrt2).
        let k = exts[0].field.clone();
        let h2 = qpoly(&k, &[1, 0, 1]);
        let exts2 = adjoin_roots(&h2).unwrap();
        assert_eq!(exts2.len(), 2);
        for e in &exts2 {
            assert_eq!(e.root.times(&e.root), e.field.from_q(&qi(-1)));
            assert!(!e.root.is_real().unwrap());
            // The old generator keeps its value.
            let s = e.map(&k.gen());
            let ev = s.enclosure(40).unwrap();
            let ev0 = k.gen().enclosure(40).unwrap();
            assert!(ev.overlaps(&ev0));
        }
    }
}
