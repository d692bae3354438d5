//! Newton-Puiseux expansion of plane-curve germs and the order invariants
//! `d_j`, `d+(φ)`, `d(φ)`, plus a sampling estimate of the separation
//! exponent `τ(φ)`.
//!
//! Branches are roots of `φ(t^m, y)` in `K[[t]]` for a number field `K`
//! built on demand; `x = t^m`. Each root through the origin is listed
//! once, so conjugates under `t -> ζ t` appear as separate branches.

use crate::error::{CoreError, Result};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use qal_algebra::multipoly::vars_of;
use qal_algebra::numberfield::{adjoin_roots, factor_over, NfElem, NumberField};
use qal_algebra::rational::{binomial, fmt_q, from_f64, qb, qi, to_f64};
use qal_algebra::algebraic::AlgebraicNumber;
use qal_algebra::{Field, MultiPoly, UniPoly, Q};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_MAX_TOWER: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesOrder {
    Finite(usize),
    /// Every coefficient below the truncation vanishes.
    ZeroUpTo(usize),
}

/// `ω(v)` for a series known below degree `trunc`.
pub fn series_order<F: Field>(v: &UniPoly<F>, trunc: usize) -> SeriesOrder {
    match v.order() {
        Some(k) if k < trunc => SeriesOrder::Finite(k),
        _ => SeriesOrder::ZeroUpTo(trunc),
    }
}

/// Sparse polynomial in `(t, y)`, keyed by `(t-exponent, y-exponent)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<F> {
    pub terms: BTreeMap<(u64, u64), F>,
}

impl<F: Field> BiPoly<F> {
    fn add_term(&mut self, k: (u64, u64), c: F) {
        if c.is_zero_elem() {
            return;
        }
        match self.terms.remove(&k) {
            Some(old) => {
                let s = old.plus(&c);
                if !s.is_zero_elem() {
                    self.terms.insert(k, s);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn min_y(&self) -> u64 {
        self.terms.keys().map(|k| k.1).min().unwrap_or(0)
    }

    fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> BiPoly<G> {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, f(c))).collect(),
        }
    }
}

/// `φ ∈ Q[x, y]` as a [`BiPoly`] with `t = x`.
pub fn bipoly_of(phi: &MultiPoly<Q>) -> Result<BiPoly<Q>> {
    let used = phi.used_vars();
    if used.iter().any(|v| v != "x" && v != "y") {
        return Err(CoreError::Domain("plane germs use the variables x and y".into()));
    }
    let xi = phi.var_index("x");
    let yi = phi.var_index("y");
    let mut b = BiPoly { terms: BTreeMap::new() };
    for (e, c) in phi.terms() {
        let i = xi.map_or(0, |k| e[k] as u64);
        let j = yi.map_or(0, |k| e[k] as u64);
        b.add_term((i, j), c.clone());
    }
    Ok(b)
}

#[derive(Clone, Debug)]
pub struct Segment<F> {
    pub start: (u64, u64),
    pub end: (u64, u64),
    /// `Δi / Δj`: roots on this face have order `slope` in `t`.
    pub slope: Q,
    pub face: Vec<((u64, u64), F)>,
}

/// Lower-left edges from the leftmost support point to the lowest one.
pub fn newton_polygon<F: Field>(p: &BiPoly<F>) -> Vec<Segment<F>> {
    let mut out = Vec::new();
    if p.is_zero() {
        return out;
    }
    let imin = p.terms.keys().map(|k| k.0).min().unwrap();
    let mut cur = *p.terms.keys().filter(|k| k.0 == imin).min_by_key(|k| k.1).unwrap();
    let jmin = p.min_y();
    while cur.1 > jmin {
        let mut best: Option<(Q, (u64, u64))> = None;
        for &k in p.terms.keys().filter(|k| k.1 < cur.1) {
            let s = Q::new(
                (k.0 as i64 - cur.0 as i64).into(),
                ((cur.1 - k.1) as i64).into(),
            );
            best = match best {
                Some((bs, bk)) if bs < s || (bs == s && bk.1 < k.1) => Some((bs, bk)),
                _ => Some((s, k)),
            };
        }
        let (slope, next) = best.unwrap();
        // points on i + slope j = cur.0 + slope cur.1
        let level = qi(cur.0 as i64) + &slope * qi(cur.1 as i64);
        let face = p
            .terms
            .iter()
            .filter(|(k, _)| qi(k.0 as i64) + &slope * qi(k.1 as i64) == level)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        out.push(Segment {
            start: cur,
            end: next,
            slope,
            face,
        });
        cur = next;
    }
    out
}

/// Segments of a rational polynomial in `x, y`.
pub fn newton_polygon_q(phi: &MultiPoly<Q>) -> Result<Vec<Segment<Q>>> {
    if phi.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    Ok(newton_polygon(&bipoly_of(phi)?))
}

#[derive(Clone, Debug)]
pub struct Shear {
    /// The substitution is `x <- x + c y`.
    pub c: i64,
    pub poly: MultiPoly<Q>,
    /// Total order of `φ` at the origin.
    pub order: u32,
}

fn trial(k: usize) -> i64 {
    let k = k as i64;
    if k == 0 {
        0
    } else if k % 2 == 1 {
        (k + 1) / 2
    } else {
        -(k / 2)
    }
}

/// Make the `y^ν` coefficient of the lowest homogeneous part nonzero, so
/// the complex zero set is not tangent to the y-axis.
pub fn shear_to_generic(phi: &MultiPoly<Q>) -> Result<Shear> {
    if phi.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    bipoly_of(phi)?;
    let vars = vars_of(&["x", "y"]);
    let p = phi.with_vars(&vars);
    let nu = p.order().unwrap();
    if nu == 0 {
        return Err(CoreError::Domain("φ(0, 0) != 0: the germ has no zero set".into()));
    }
    let h = p.homogeneous_part(nu);
    let bound = 2 * (nu as usize).pow(2) + 1;
    for k in 0..bound {
        let c = trial(k);
        // y^ν coefficient of h(x + c y, y) is h(c, 1)
        if h.eval(&[qi(c), qi(1)]).is_some_and(|v| !v.is_zero()) {
            let x = MultiPoly::var_q(&vars, "x");
            let y = MultiPoly::var_q(&vars, "y");
            let poly = if c == 0 {
                p.clone()
            } else {
                p.subst(0, &x.add(&y.scale(&qi(c))))
            };
            return Ok(Shear { c, poly, order: nu });
        }
    }
    Err(CoreError::ExhaustedTrials(bound))
}

/// `φ(-x, y)`.
pub fn reflect(phi: &MultiPoly<Q>) -> MultiPoly<Q> {
    let Some(xi) = phi.var_index("x") else {
        return phi.clone();
    };
    MultiPoly::from_terms(
        phi.vars(),
        phi.terms().iter().map(|(e, c)| {
            (e.clone(), if e[xi] % 2 == 1 { -c.clone() } else { c.clone() })
        }),
    )
}

#[derive(Clone, Debug)]
pub struct PuiseuxBranch {
    /// `x = t^m`.
    pub ramification: u64,
    /// `(k, c)`: the term `c t^k`, exponents strictly increasing.
    pub terms: Vec<(u64, NfElem)>,
    pub multiplicity: u32,
    /// The listed terms are the whole root.
    pub exact: bool,
    /// Every term with exponent `<= known_through` is listed.
    pub known_through: u64,
    /// The unlisted tail is certified real.
    pub tail_real: bool,
    /// `ord_t φ(t^m, ŷ(t))`; `None` when it vanishes identically.
    pub substituted_order: Option<u64>,
    /// Lower bound on that order implied by the construction.
    pub guaranteed_order: Option<u64>,
    /// Degree of the coefficient field over Q.
    pub field_degree: usize,
}

impl PuiseuxBranch {
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.terms.first().map(|t| t.1.field())
    }

    pub fn is_sound(&self) -> bool {
        match (self.substituted_order, self.guaranteed_order) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(g)) => o >= g,
        }
    }

    /// Exponent of the `k`-th term in the x-scale.
    pub fn exponent(&self, k: usize) -> Q {
        Q::new((self.terms[k].0 as i64).into(), (self.ramification as i64).into())
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxExpansion {
    pub shear: i64,
    /// The sheared polynomial that was expanded.
    pub poly: MultiPoly<Q>,
    pub order: u32,
    pub trunc: u64,
    pub branches: Vec<PuiseuxBranch>,
}

impl PuiseuxExpansion {
    pub fn total_multiplicity(&self) -> u32 {
        self.branches.iter().map(|b| b.multiplicity).sum()
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxOptions {
    /// Stop once terms up to this x-exponent are known.
    pub trunc: Option<u64>,
    pub max_tower: usize,
}

impl Default for PuiseuxOptions {
    fn default() -> Self {
        PuiseuxOptions {
            trunc: None,
            max_tower: DEFAULT_MAX_TOWER,
        }
    }
}

/// `2 · deg_y · (largest slope denominator) + 4`.
pub fn default_trunc(phi: &MultiPoly<Q>) -> Result<u64> {
    let b = bipoly_of(phi)?;
    let dy = b.terms.keys().map(|k| k.1).max().unwrap_or(0);
    let den = newton_polygon(&b)
        .iter()
        .map(|s| s.slope.denom().to_u64().unwrap())
        .max()
        .unwrap_or(1);
    Ok(2 * dy * den + 4)
}

struct Ctx {
    trunc: u64,
    max_tower: usize,
}

struct State {
    psi: BiPoly<NfElem>,
    field: Arc<NumberField>,
    m: u64,
    e: u64,
    terms: Vec<(u64, NfElem)>,
    nu: u32,
    depth: usize,
}

fn all_real(p: &BiPoly<NfElem>) -> Result<bool> {
    for c in p.terms.values() {
        if !c.is_real()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `s^-N ψ(s^q, s^p (c + y))`.
fn step(psi: &BiPoly<NfElem>, q: u64, p: u64, c: &NfElem) -> BiPoly<NfElem> {
    let n = psi.terms.keys().map(|k| q * k.0 + p * k.1).min().unwrap();
    let jmax = psi.terms.keys().map(|k| k.1).max().unwrap() as usize;
    let mut pw = vec![c.one_like()];
    for _ in 0..jmax {
        let l = pw.last().unwrap().times(c);
        pw.push(l);
    }
    let mut out = BiPoly { terms: BTreeMap::new() };
    for (&(i, j), a) in &psi.terms {
        let base = q * i + p * j - n;
        for k in 0..=j {
            let coef = a.times(&pw[(j - k) as usize]).scaled_q(&qb(binomial(j, k)));
            out.add_term((base, k), coef);
        }
    }
    out
}

fn expand(ctx: &Ctx, st: State, out: &mut Vec<PuiseuxBranch>) -> Result<()> {
    let j0 = st.psi.min_y();
    let field_degree = st.field.degree();
    if j0 > 0 {
        out.push(PuiseuxBranch {
            ramification: st.m,
            terms: st.terms.clone(),
            multiplicity: j0 as u32,
            exact: true,
            known_through: st.e,
            tail_real: true,
            substituted_order: None,
            guaranteed_order: None,
            field_degree,
        });
    }
    let rest = st.nu - j0 as u32;
    if rest == 0 {
        return Ok(());
    }
    if st.e > 0 && st.e >= ctx.trunc * st.m {
        let tail_real = rest == 1 && all_real(&st.psi)?;
        out.push(PuiseuxBranch {
            ramification: st.m,
            terms: st.terms,
            multiplicity: rest,
            exact: false,
            known_through: st.e,
            tail_real,
            substituted_order: None,
            guaranteed_order: Some(rest as u64 * (st.e + 1)),
            field_degree,
        });
        return Ok(());
    }
    for seg in newton_polygon(&st.psi) {
        let (p, q) = (seg.slope.numer().to_u64().unwrap(), seg.slope.denom().to_u64().unwrap());
        let jend = seg.end.1;
        let mut fc = vec![st.field.from_q(&Q::zero()); (seg.start.1 - jend) as usize + 1];
        for ((_, j), a) in &seg.face {
            fc[(j - jend) as usize] = a.clone();
        }
        let face = UniPoly::new(fc);
        for (g, mult) in factor_over(&face) {
            let mut roots: Vec<(NfElem, BiPoly<NfElem>, Vec<(u64, NfElem)>, Arc<NumberField>, usize)> = Vec::new();
            if g.deg() == 1 {
                let c = g.coeffs()[0].negated().divided(&g.coeffs()[1]).unwrap();
                roots.push((c, st.psi.clone(), st.terms.clone(), st.field.clone(), st.depth));
            } else {
                if st.depth >= ctx.max_tower {
                    return Err(CoreError::ExtensionFailure(format!(
                        "coefficient tower deeper than {} extensions",
                        ctx.max_tower
                    )));
                }
                let exts = adjoin_roots(&g).map_err(|e| CoreError::ExtensionFailure(e.to_string()))?;
                for ext in exts {
                    let psi = st.psi.map(|a| ext.map(a));
                    let terms = st.terms.iter().map(|(k, a)| (*k, ext.map(a))).collect();
                    roots.push((ext.root.clone(), psi, terms, ext.field.clone(), st.depth + 1));
                }
            }
            for (c, psi, terms, field, depth) in roots {
                let mut terms: Vec<(u64, NfElem)> = terms.into_iter().map(|(k, a)| (k * q, a)).collect();
                let e = st.e * q + p;
                terms.push((e, c.clone()));
                let child = State {
                    psi: step(&psi, q, p, &c),
                    field,
                    m: st.m * q,
                    e,
                    terms,
                    nu: mult,
                    depth,
                };
                expand(ctx, child, out)?;
            }
        }
    }
    Ok(())
}

/// `ord_t φ(t^m, ŷ(t))` over the branch field; `None` if identically zero.
fn substituted_order(phi: &BiPoly<Q>, b: &PuiseuxBranch, field: &Arc<NumberField>) -> Option<u64> {
    let zero = field.from_q(&Q::zero());
    let mut yc = Vec::new();
    for (k, c) in &b.terms {
        let k = *k as usize;
        if yc.len() <= k {
            yc.resize(k + 1, zero.clone());
        }
        yc[k] = c.clone();
    }
    let yhat = UniPoly::new(yc);
    let jmax = phi.terms.keys().map(|k| k.1).max().unwrap_or(0);
    let mut pows = vec![UniPoly::constant(field.from_q(&Q::one()))];
    for _ in 0..jmax {
        let l = pows.last().unwrap().mul(&yhat);
        pows.push(l);
    }
    let mut acc: UniPoly<NfElem> = UniPoly::zero();
    for (&(i, j), a) in &phi.terms {
        let t = pows[j as usize].shift((i * b.ramification) as usize).scale(&field.from_q(a));
        acc = acc.add(&t);
    }
    acc.order().map(|o| o as u64)
}

/// Expand a sheared, generic germ; see [`shear_to_generic`].
fn expand_generic(poly: &MultiPoly<Q>, order: u32, trunc: u64, max_tower: usize) -> Result<Vec<PuiseuxBranch>> {
    let b = bipoly_of(poly)?;
    let k = NumberField::rational();
    let st = State {
        psi: b.map(|c| k.from_q(c)),
        field: k.clone(),
        m: 1,
        e: 0,
        terms: Vec::new(),
        nu: order,
        depth: 0,
    };
    let ctx = Ctx { trunc, max_tower };
    let mut out = Vec::new();
    expand(&ctx, st, &mut out)?;
    for br in out.iter_mut() {
        let f = br.field().cloned().unwrap_or_else(|| k.clone());
        br.substituted_order = substituted_order(&b, br, &f);
        if br.exact && br.substituted_order.is_some() {
            return Err(CoreError::InsufficientTruncation("exact branch failed substitution".into()));
        }
    }
    Ok(out)
}

pub fn puiseux_expand(phi: &MultiPoly<Q>, opts: &PuiseuxOptions) -> Result<PuiseuxExpansion> {
    let sh = shear_to_generic(phi)?;
    let trunc = match opts.trunc {
        Some(0) => return Err(CoreError::Domain("truncation must be positive".into())),
        Some(t) => t,
        None => default_trunc(&sh.poly)?,
    };
    let branches = expand_generic(&sh.poly, sh.order, trunc, opts.max_tower)?;
    Ok(PuiseuxExpansion {
        shear: sh.c,
        poly: sh.poly,
        order: sh.order,
        trunc,
        branches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ImOrder {
    /// `Im y_j` vanishes identically, so `d_j = 1`.
    Real,
    /// `d_j = ω(Im y_j)` in the t-scale.
    Order(u64),
    /// Neither certification succeeded at this truncation.
    Undetermined(u64),
}

/// The branch invariant `d_j`.
pub fn branch_im_order(b: &PuiseuxBranch, trunc: u64) -> Result<ImOrder> {
    for (k, c) in &b.terms {
        if !c.is_real()? {
            return Ok(ImOrder::Order(*k));
        }
    }
    if b.exact || b.tail_real {
        Ok(ImOrder::Real)
    } else {
        Ok(ImOrder::Undetermined(trunc))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchSummary {
    pub ramification: u64,
    pub multiplicity: u32,
    pub im_order: ImOrder,
    /// `d_j / m` with this branch's ramification; `None` for real branches.
    pub ratio: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauStatus {
    /// Isolated real zero: `τ = d(φ)`.
    ExactEqualD,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ExponentReport {
    pub shear: i64,
    pub trunc: u64,
    pub branches_plus: Vec<BranchSummary>,
    pub branches_minus: Vec<BranchSummary>,
    pub d_plus: Q,
    pub d_plus_reflected: Q,
    pub d: Q,
    /// Every branch on both sides is certified non-real.
    pub isolated_real_zero: bool,
    pub tau_status: TauStatus,
    pub tau: Option<Q>,
}

impl ExponentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "shear": self.shear,
            "trunc": self.trunc,
            "branches_plus": self.branches_plus,
            "branches_minus": self.branches_minus,
            "d_plus": fmt_q(&self.d_plus),
            "d_plus_reflected": fmt_q(&self.d_plus_reflected),
            "d": fmt_q(&self.d),
            "isolated_real_zero": self.isolated_real_zero,
            "tau_status": self.tau_status,
            "tau": self.tau.as_ref().map(fmt_q),
        })
    }
}

fn d_plus(branches: &[PuiseuxBranch], trunc: u64) -> Result<(Q, Vec<BranchSummary>, bool)> {
    let m = branches.iter().fold(1u64, |a, b| a.lcm(&b.ramification));
    let mut best = Q::zero();
    let mut out = Vec::new();
    let mut all_nonreal = true;
    for b in branches {
        let im = branch_im_order(b, trunc)?;
        let v = match im {
            // real branches contribute 1/m with the common ramification
            ImOrder::Real => {
                all_nonreal = false;
                Q::new(1.into(), (m as i64).into())
            }
            ImOrder::Order(d) => Q::new((d as i64).into(), (b.ramification as i64).into()),
            ImOrder::Undetermined(t) => {
                return Err(CoreError::InsufficientTruncation(format!(
                    "imaginary order of a branch undetermined at truncation {t}"
                )))
            }
        };
        if v > best {
            best = v.clone();
        }
        out.push(BranchSummary {
            ramification: b.ramification,
            multiplicity: b.multiplicity,
            im_order: im,
            ratio: matches!(im, ImOrder::Order(_)).then(|| fmt_q(&v)),
        });
    }
    Ok((best, out, all_nonreal))
}

/// `d(φ) = max(d+(φ), d+(φ(-x, y)))`.
pub fn d_exponent(phi: &MultiPoly<Q>, opts: &PuiseuxOptions) -> Result<ExponentReport> {
    let sh = shear_to_generic(phi)?;
    let trunc = match opts.trunc {
        Some(t) => t.max(1),
        None => default_trunc(&sh.poly)?,
    };
    let plus = expand_generic(&sh.poly, sh.order, trunc, opts.max_tower)?;
    let minus = expand_generic(&reflect(&sh.poly), sh.order, trunc, opts.max_tower)?;
    let (dp, bp, np) = d_plus(&plus, trunc)?;
    let (dm, bm, nm) = d_plus(&minus, trunc)?;
    let d = if dp > dm { dp.clone() } else { dm.clone() };
    let isolated = np && nm;
    Ok(ExponentReport {
        shear: sh.c,
        trunc,
        branches_plus: bp,
        branches_minus: bm,
        d_plus: dp,
        d_plus_reflected: dm,
        tau: isolated.then(|| d.clone()),
        d,
        isolated_real_zero: isolated,
        tau_status: if isolated { TauStatus::ExactEqualD } else { TauStatus::Unknown },
    })
}

// ---------------------------------------------------------------------------
// Sampling estimate of τ

#[derive(Clone, Debug, Serialize)]
pub struct ShellSample {
    pub radius: f64,
    /// Smallest per-fiber root distance over the shell's sample points.
    pub min_distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub residuals: Vec<f64>,
    pub shells: Vec<ShellSample>,
    pub samples: usize,
    #[serde(skip)]
    pub exact: Option<Q>,
    pub exact_tau: Option<String>,
}

const DIST_BITS: u32 = 160;

/// Rational points on the circle of radius `r` via `u -> ((1-u²), 2u)/(1+u²)`.
fn circle_points(r: &Q, n: usize) -> Vec<(Q, Q)> {
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        if (theta - std::f64::consts::PI).abs() < 1e-9 {
            pts.push((-r.clone(), Q::zero()));
            continue;
        }
        let u = from_f64(((theta / 2.0).tan() * 1048576.0).round() / 1048576.0).unwrap();
        let den = Q::one() + &u * &u;
        pts.push((r * (Q::one() - &u * &u) / &den, r * qi(2) * &u / &den));
    }
    pts
}

/// Upper bound for the distance from `v` to the nearest complex root of `f`.
fn fiber_distance(f: &UniPoly<Q>, v: &Q) -> Result<Option<Q>> {
    if f.is_zero() {
        return Ok(Some(Q::zero()));
    }
    if f.deg() < 1 {
        return Ok(None);
    }
    let mut best: Option<Q> = None;
    for root in AlgebraicNumber::roots_of(f)? {
        let z = root.enclosure(DIST_BITS)?;
        let d2 = z.add_q(&-v.clone()).norm2();
        let hi = d2.hi().clone();
        best = Some(match best {
            Some(b) if b < hi => b,
            _ => hi,
        });
    }
    // sqrt of the squared bound, rounded up
    Ok(best.map(|b| qal_algebra::transcend::nth_root_q(&b, 2, DIST_BITS).hi().clone()))
}

fn point_distance(b: &BiPoly<Q>, px: &Q, py: &Q) -> Result<Option<Q>> {
    let mut fy: BTreeMap<u64, Q> = BTreeMap::new();
    let mut fx: BTreeMap<u64, Q> = BTreeMap::new();
    for (&(i, j), a) in &b.terms {
        *fy.entry(j).or_insert_with(Q::zero) += a * qal_algebra::rational::pow_i(px, i as i64);
        *fx.entry(i).or_insert_with(Q::zero) += a * qal_algebra::rational::pow_i(py, j as i64);
    }
    let dense = |m: BTreeMap<u64, Q>| {
        let n = m.keys().max().copied().unwrap_or(0) as usize;
        let mut c = vec![Q::zero(); n + 1];
        for (k, v) in m {
            c[k as usize] = v;
        }
        UniPoly::new(c)
    };
    let a = fiber_distance(&dense(fy), py)?;
    let c = fiber_distance(&dense(fx), px)?;
    Ok(match (a, c) {
        (Some(a), Some(c)) => Some(if a < c { a } else { c }),
        (a, c) => a.or(c),
    })
}

/// Fit `log(distance proxy)` against `log r` over the shells.
pub fn tau_estimate(phi: &MultiPoly<Q>, shells: &[Q], samples: usize) -> Result<TauEstimate> {
    if shells.len() < 3 || samples == 0 {
        return Err(CoreError::DegenerateRegression("need at least three shells and one sample".into()));
    }
    if shells.iter().any(|r| !r.is_positive()) {
        return Err(CoreError::Domain("shell radii must be positive".into()));
    }
    let b = bipoly_of(phi)?;
    let mut rows = Vec::with_capacity(shells.len());
    for r in shells {
        let mut best: Option<Q> = None;
        for (px, py) in circle_points(r, samples) {
            if let Some(d) = point_distance(&b, &px, &py)? {
                best = Some(match best {
                    Some(b) if b < d => b,
                    _ => d,
                });
            }
        }
        let d = best.ok_or_else(|| CoreError::DegenerateRegression("no fiber has roots".into()))?;
        if d.is_zero() {
            return Err(CoreError::DegenerateRegression("a sample point lies on the zero set".into()));
        }
        rows.push(ShellSample {
            radius: to_f64(r),
            min_distance: to_f64(&d),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|s| s.radius.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|s| s.min_distance.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(CoreError::DegenerateRegression("all shells have the same radius".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - intercept - slope * x).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let exact = d_exponent(phi, &PuiseuxOptions::default()).ok().and_then(|r| r.tau);
    Ok(TauEstimate {
        slope,
        intercept,
        stderr,
        residuals,
        shells: rows,
        samples,
        exact_tau: exact.as_ref().map(fmt_q),
        exact,
    })
}

// ---------------------------------------------------------------------------
// JSON views

/// A coefficient: exact when rational, else minimal polynomial plus value.
pub fn coeff_json(c: &NfElem) -> Result<Value> {
    if let Some(q) = c.as_rational() {
        return Ok(json!({ "rational": fmt_q(&q) }));
    }
    let mp = c.min_poly();
    let z = c.enclosure(64)?;
    Ok(json!({
        "min_poly": mp.coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
        "re": format!("{:.15e}", to_f64(&z.re.mid())),
        "im": format!("{:.15e}", to_f64(&z.im.mid())),
        "real": c.is_real()?,
    }))
}

pub fn branch_json(b: &PuiseuxBranch, trunc: u64) -> Result<Value> {
    let terms = (0..b.terms.len())
        .map(|k| {
            Ok(json!({
                "exponent": fmt_q(&b.exponent(k)),
                "coeff": coeff_json(&b.terms[k].1)?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "ramification": b.ramification,
        "multiplicity": b.multiplicity,
        "exact": b.exact,
        "known_through": fmt_q(&Q::new((b.known_through as i64).into(), (b.ramification as i64).into())),
        "terms": terms,
        "field_degree": b.field_degree,
        "im_order": branch_im_order(b, trunc)?,
        "sound": b.is_sound(),
    }))
}

pub fn expansion_json(e: &PuiseuxExpansion) -> Result<Value> {
    Ok(json!({
        "shear": e.shear,
        "poly": qal_algebra::parse::format_poly(&e.poly),
        "order": e.order,
        "trunc": e.trunc,
        "branches": e.branches.iter().map(|b| branch_json(b, e.trunc)).collect::<Result<Vec<_>>>()?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qal_algebra::parse::parse_poly;
    use qal_algebra::rational::q;

    fn p(s: &str) -> MultiPoly<Q> {
        parse_poly(s).unwrap()
    }

    fn d(s: &str) -> Q {
        d_exponent(&p(s), &PuiseuxOptions::default()).unwrap().d
    }

    #[test]
    fn orders() {
        assert_eq!(series_order(&UniPoly::from_ints(&[0, 0, 0, 1, 0, 1]), 12), SeriesOrder::Finite(3));
        assert_eq!(series_order(&UniPoly::<Q>::zero(), 12), SeriesOrder::ZeroUpTo(12));
        assert_eq!(series_order(&UniPoly::from_ints(&[0, 2]), 12), SeriesOrder::Finite(1));
    }

    #[test]
    fn polygons() {
        let s = newton_polygon_q(&p("y^2 + x^3")).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].slope, q(3, 2));
        assert_eq!(newton_polygon_q(&p("y^2 - x^2")).unwrap()[0].slope, qi(1));
        assert!(newton_polygon_q(&p("y")).unwrap().is_empty());
        let s = newton_polygon_q(&p("y^3 + x*y + x^5")).unwrap();
        assert_eq!(s.iter().map(|s| s.slope.clone()).collect::<Vec<_>>(), vec![q(1, 2), qi(4)]);
    }

    #[test]
    fn shears() {
        assert_eq!(shear_to_generic(&p("y^2 + x^2")).unwrap().c, 0);
        let s = shear_to_generic(&p("x^2")).unwrap();
        assert_eq!(s.c, 1);
        assert_eq!(s.poly.degree_in(1), Some(2));
        assert_eq!(shear_to_generic(&p("(y - x)^2 + x^5")).unwrap().c, 0);
        assert_eq!(shear_to_generic(&p("x*y")).unwrap().c, 1);
        assert!(shear_to_generic(&p("1 + x")).is_err());
    }

    #[test]
    fn branches() {
        let e = puiseux_expand(&p("y^2 - x^2"), &PuiseuxOptions::default()).unwrap();
        assert_eq!(e.branches.len(), 2);
        assert!(e.branches.iter().all(|b| b.exact && b.ramification == 1 && b.is_sound()));
        let mut cs: Vec<Q> = e.branches.iter().map(|b| b.terms[0].1.as_rational().unwrap()).collect();
        cs.sort();
        assert_eq!(cs, vec![qi(-1), qi(1)]);
        let e = puiseux_expand(&p("y^2 + x^3"), &PuiseuxOptions::default()).unwrap();
        assert_eq!(e.branches.len(), 2);
        for b in &e.branches {
            assert_eq!(b.ramification, 2);
            assert_eq!(b.exponent(0), q(3, 2));
            assert_eq!(b.terms[0].1.min_poly(), UniPoly::from_ints(&[1, 0, 1]));
            assert_eq!(branch_im_order(b, e.trunc).unwrap(), ImOrder::Order(3));
        }
        let e = puiseux_expand(&p("y^2 + x^4"), &PuiseuxOptions::default()).unwrap();
        assert!(e.branches.iter().all(|b| b.exact && b.exponent(0) == qi(2)));
        // non-terminating real branch
        let e = puiseux_expand(&p("y^2 - x^2 - x^3"), &PuiseuxOptions::default()).unwrap();
        assert_eq!(e.total_multiplicity(), 2);
        for b in &e.branches {
            assert!(!b.exact && b.is_sound(), "{:?}", b.substituted_order);
            assert_eq!(branch_im_order(b, e.trunc).unwrap(), ImOrder::Real);
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(d("y^2 - x^4"), qi(1));
        assert_eq!(d("y^2 + x^4"), qi(2));
        assert_eq!(d("y^2 + x^3"), q(3, 2));
        assert_eq!(d("y^2 - x^3"), q(3, 2));
        assert_eq!(d("y^2 - x^2"), qi(1));
        let r = d_exponent(&p("y^2 + x^6"), &PuiseuxOptions::default()).unwrap();
        assert_eq!(r.tau, Some(qi(3)));
        let r = d_exponent(&p("y^2 - x^3"), &PuiseuxOptions::default()).unwrap();
        assert_eq!(r.d_plus, q(1, 2));
        assert_eq!(r.tau, None);
    }

    #[test]
    fn tau() {
        let shells: Vec<Q> = (3..=10).map(|k| Q::new(1.into(), (1i64 << k).into())).collect();
        let t = tau_estimate(&p("y^2 + x^2"), &shells, 8).unwrap();
        assert!((t.slope - 1.0).abs() < 0.15, "{}", t.slope);
        assert_eq!(t.exact, Some(qi(1)));
        assert!(tau_estimate(&p("y^2 + x^2"), &shells[..2], 8).is_err());
    }
}
