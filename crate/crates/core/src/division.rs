//! Weierstrass division by distinguished polynomials: generic Euclidean
//! division, its specialization, regularity, hyperbolicity of plane germs,
//! and two failure witnesses built from Bang's function.

use crate::error::{CoreError, Result};
use crate::sequence::{classify, CarlemanSequence, Provenance, Tri};
use crate::theta::theta_derivative_at_zero;
use num_traits::{One, Signed, Zero};
use qal_algebra::interval::Interval;
use qal_algebra::multipoly::sort_vars;
use qal_algebra::ratfunc::RatFunc;
use qal_algebra::rational::{factorial, qb, qi, round_down};
use qal_algebra::sturm::count_real_roots;
use qal_algebra::transcend::{exp, ln_q};
use qal_algebra::{MultiPoly, UniPoly, Q};
use rayon::prelude::*;
use serde::Serialize;

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut v: Vec<String> = a.iter().chain(b).cloned().collect();
    sort_vars(&mut v);
    v
}

/// Re-express over `keep`, which must contain every variable that occurs.
pub fn restrict_vars(p: &MultiPoly<Q>, keep: &[String]) -> MultiPoly<Q> {
    let idx: Vec<Option<usize>> = p.vars().iter().map(|v| keep.iter().position(|w| w == v)).collect();
    let mut out = MultiPoly::zero(keep);
    for (e, c) in p.terms() {
        let mut ne = vec![0; keep.len()];
        for (i, &k) in e.iter().enumerate() {
            match idx[i] {
                Some(j) => ne[j] = k,
                None => assert_eq!(k, 0, "variable {} still occurs", p.vars()[i]),
            }
        }
        out.add_term(ne, c.clone());
    }
    out
}

fn z_power(vars: &[String], zi: usize, k: u32) -> MultiPoly<Q> {
    let mut e = vec![0; vars.len()];
    e[zi] = k;
    MultiPoly::monomial(vars, e, Q::one())
}

fn is_constant_one(p: &MultiPoly<Q>) -> bool {
    p.total_degree() == Some(0) && p.any_coeff().is_some_and(|c| c.is_one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Division {
    pub var: String,
    pub quotient: MultiPoly<Q>,
    pub remainder: MultiPoly<Q>,
    /// `F G + H == P` after re-expansion.
    pub verified: bool,
}

impl Division {
    /// `H_j`, the coefficient of `z^j` in the remainder, for `j < d`.
    pub fn remainder_coeffs(&self, d: usize) -> Vec<MultiPoly<Q>> {
        let zi = self.remainder.var_index(&self.var).unwrap();
        let mut cs = self.remainder.coeffs_in(zi);
        cs.resize(d, MultiPoly::zero(self.remainder.vars()));
        cs
    }
}

/// `P = F G + H` with `deg_z H < deg_z F`, for `F` monic in `z`.
pub fn euclid_divide(p: &MultiPoly<Q>, f: &MultiPoly<Q>, z: &str) -> Result<Division> {
    if f.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    let vars = union_vars(&union_vars(p.vars(), f.vars()), &[z.to_string()]);
    let p = p.with_vars(&vars);
    let f = f.with_vars(&vars);
    let zi = vars.iter().position(|v| v == z).unwrap();
    let fc = f.coeffs_in(zi);
    let d = fc.len() - 1;
    if !is_constant_one(&fc[d]) {
        return Err(CoreError::NonMonic(z.to_string()));
    }
    let mut r = p.clone();
    let mut g = MultiPoly::zero(&vars);
    loop {
        let rc = r.coeffs_in(zi);
        if rc.len() <= d {
            break;
        }
        let k = rc.len() - 1;
        let t = rc[k].mul(&z_power(&vars, zi, (k - d) as u32));
        g = g.add(&t);
        r = r.sub(&t.mul(&f));
    }
    let verified = f.mul(&g).add(&r) == p;
    Ok(Division {
        var: z.to_string(),
        quotient: g,
        remainder: r,
        verified,
    })
}

pub fn mu_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("mu{i}")).collect()
}

/// `F_d = z^d + μ_1 z^(d-1) + ... + μ_d`.
pub fn generic_divisor(d: usize, z: &str) -> MultiPoly<Q> {
    let mut vars = mu_names(d);
    vars.push(z.to_string());
    sort_vars(&mut vars);
    let zi = vars.iter().position(|v| v == z).unwrap();
    let mut f = z_power(&vars, zi, d as u32);
    for (i, mu) in mu_names(d).iter().enumerate() {
        let t = MultiPoly::var_q(&vars, mu).mul(&z_power(&vars, zi, (d - 1 - i) as u32));
        f = f.add(&t);
    }
    f
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericDivision {
    pub d: usize,
    pub division: Division,
}

/// Divide `P` by the generic monic polynomial of degree `d` in `z`.
pub fn generic_divide(p: &MultiPoly<Q>, d: usize, z: &str) -> Result<GenericDivision> {
    if d == 0 {
        return Err(CoreError::Domain("generic divisor degree must be at least 1".into()));
    }
    if p.used_vars().iter().any(|v| v.starts_with("mu")) {
        return Err(CoreError::Domain("dividend must not use the symbolic mu variables".into()));
    }
    Ok(GenericDivision {
        d,
        division: euclid_divide(p, &generic_divisor(d, z), z)?,
    })
}

/// `x_n^d + a_1(x') x_n^(d-1) + ... + a_d(x')` with `a_j(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistinguishedPoly {
    var: String,
    /// `a_1, ..., a_d`, over the full variable list.
    coeffs: Vec<MultiPoly<Q>>,
    poly: MultiPoly<Q>,
}

impl DistinguishedPoly {
    pub fn from_poly(phi: &MultiPoly<Q>, var: &str) -> Result<Self> {
        if phi.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        let vars = union_vars(phi.vars(), &[var.to_string()]);
        let phi = phi.with_vars(&vars);
        let zi = vars.iter().position(|v| v == var).unwrap();
        let cs = phi.coeffs_in(zi);
        let d = cs.len() - 1;
        if d == 0 {
            return Err(CoreError::Domain(format!("polynomial has degree 0 in {var}")));
        }
        if !is_constant_one(&cs[d]) {
            return Err(CoreError::NonMonic(var.to_string()));
        }
        let zero = vec![0u32; vars.len()];
        let coeffs: Vec<MultiPoly<Q>> = (1..=d).map(|j| cs[d - j].clone()).collect();
        if coeffs.iter().any(|a| a.coeff(&zero).is_some()) {
            return Err(CoreError::Domain("coefficients must vanish at the origin".into()));
        }
        Ok(DistinguishedPoly {
            var: var.to_string(),
            coeffs,
            poly: phi,
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[MultiPoly<Q>] {
        &self.coeffs
    }

    pub fn poly(&self) -> &MultiPoly<Q> {
        &self.poly
    }

    /// The variables other than `x_n`.
    pub fn base_vars(&self) -> Vec<String> {
        self.poly.vars().iter().filter(|v| **v != self.var).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedDivision {
    pub quotient: MultiPoly<Q>,
    /// `H̃_0, ..., H̃_(d-1)`, free of `x_n`.
    pub remainder_coeffs: Vec<MultiPoly<Q>>,
    pub verified: bool,
}

/// Substitute `μ := a(x')` into a generic division.
pub fn specialize_division(gen: &GenericDivision, phi: &DistinguishedPoly) -> Result<SpecializedDivision> {
    if gen.d != phi.degree() {
        return Err(CoreError::ArityMismatch(format!(
            "generic division has degree {} but the divisor has degree {}",
            gen.d,
            phi.degree()
        )));
    }
    if gen.division.var != phi.var {
        return Err(CoreError::ArityMismatch(format!(
            "division variable {} differs from the divisor variable {}",
            gen.division.var, phi.var
        )));
    }
    let vars = union_vars(gen.division.quotient.vars(), phi.poly.vars());
    let mus = mu_names(gen.d);
    let keep: Vec<String> = vars.iter().filter(|v| !mus.contains(v)).cloned().collect();
    let subst = |p: &MultiPoly<Q>| -> MultiPoly<Q> {
        let mut p = p.with_vars(&vars);
        for (i, mu) in mus.iter().enumerate() {
            let k = vars.iter().position(|v| v == mu).unwrap();
            p = p.subst(k, &phi.coeffs[i].with_vars(&vars));
        }
        restrict_vars(&p, &keep)
    };
    let quotient = subst(&gen.division.quotient);
    let remainder_coeffs: Vec<MultiPoly<Q>> = gen.division.remainder_coeffs(gen.d).iter().map(subst).collect();
    let zi = keep.iter().position(|v| *v == phi.var).unwrap();
    let h = MultiPoly::from_coeffs_in(&keep, zi, &remainder_coeffs);
    let phi_k = phi.poly.with_vars(&keep);
    // P in the specialized variables is P itself (it never used μ).
    let p = gen
        .division
        .quotient
        .with_vars(&vars)
        .mul(&generic_divisor(gen.d, &phi.var).with_vars(&vars))
        .add(&gen.division.remainder.with_vars(&vars));
    let p = restrict_vars(&p, &keep);
    let verified = phi_k.mul(&quotient).add(&h) == p;
    Ok(SpecializedDivision {
        quotient,
        remainder_coeffs,
        verified,
    })
}

/// Order of `φ(0, ..., 0, x_n)` at 0, or `None` when it vanishes identically.
pub fn regular_order(phi: &MultiPoly<Q>, n: usize) -> Result<Option<u32>> {
    if phi.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    Ok(phi
        .terms()
        .keys()
        .filter(|e| e.iter().enumerate().all(|(i, &k)| i == n || k == 0))
        .map(|e| e[n])
        .min())
}

/// No terms of total degree `< d` and a nonzero `x_n^d` coefficient.
///
/// `known_degree` is the total degree up to which a truncated series is
/// known; `None` means `f` is an exact polynomial.
pub fn strictly_regular_check(f: &MultiPoly<Q>, n: usize, d: u32, known_degree: Option<u32>) -> Result<bool> {
    if known_degree.is_some_and(|k| k < d) {
        return Err(CoreError::InsufficientTruncation(format!(
            "series known to degree {} but order {d} requested",
            known_degree.unwrap()
        )));
    }
    let mut pure = vec![0u32; f.vars().len()];
    pure[n] = d;
    let low = f.terms().keys().any(|e| e.iter().sum::<u32>() < d);
    Ok(!low && f.coeff(&pure).is_some())
}

// ---------------------------------------------------------------------------
// Hyperbolicity

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
    Both,
}

impl Side {
    fn sides(self) -> Vec<bool> {
        match self {
            Side::Plus => vec![true],
            Side::Minus => vec![false],
            Side::Both => vec![true, false],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicVerdict {
    Hyperbolic,
    NotHyperbolic,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicReport {
    pub verdict: HyperbolicVerdict,
    /// Sides (`plus` is `x > 0`) on which some root is non-real.
    pub witness_sides: Vec<Side>,
    pub degree: usize,
    pub squarefree_degree: usize,
    /// Multiplicities of the squarefree factors over Q(x).
    pub multiplicities: Vec<u32>,
    /// Distinct real roots for small `x > 0` and `x < 0`.
    pub real_roots_plus: Option<usize>,
    pub real_roots_minus: Option<usize>,
    pub chain_length: usize,
    pub diagnostics: Option<String>,
}

/// Sturm chain over Q(x).
pub fn sturm_chain_ratfunc(p: &UniPoly<RatFunc>) -> Vec<UniPoly<RatFunc>> {
    let mut s = vec![p.clone(), p.derivative()];
    loop {
        let n = s.len();
        if s[n - 1].deg() <= 0 {
            break;
        }
        let r = s[n - 2].rem(&s[n - 1]);
        if r.is_zero() {
            break;
        }
        s.push(r.neg());
    }
    s
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Decide whether every root of `φ(x, ·)` is real for all small `x` on the
/// requested side(s) of 0.
pub fn hyperbolic_check_2d(phi: &DistinguishedPoly, side: Side) -> Result<HyperbolicReport> {
    let base = phi.base_vars();
    if base.len() > 1 {
        return Err(CoreError::Domain(format!(
            "exact decision needs two variables, got {}",
            base.len() + 1
        )));
    }
    let vars = phi.poly.vars();
    let yi = phi.poly.var_index(&phi.var).unwrap();
    let xi = base.first().map(|b| phi.poly.var_index(b).unwrap());
    let to_rf = |c: &MultiPoly<Q>| -> RatFunc {
        match xi {
            Some(i) => RatFunc::poly(c.to_univariate(i).expect("coefficient in x only")),
            None => RatFunc::poly(UniPoly::constant(c.coeff(&vec![0; vars.len()]).cloned().unwrap_or_else(Q::zero))),
        }
    };
    let p = UniPoly::new(phi.poly.coeffs_in(yi).iter().map(to_rf).collect());
    let sqf = p.squarefree_decomposition();
    let multiplicities: Vec<u32> = sqf.iter().map(|(_, m)| *m).collect();
    let sp = p.squarefree_part();
    let n = sp.deg().max(0) as usize;
    let chain = sturm_chain_ratfunc(&sp);
    let last = chain.last().unwrap();
    if last.deg() > 0 {
        return Ok(HyperbolicReport {
            verdict: HyperbolicVerdict::Undecided,
            witness_sides: vec![],
            degree: phi.degree(),
            squarefree_degree: n,
            multiplicities,
            real_roots_plus: None,
            real_roots_minus: None,
            chain_length: chain.len(),
            diagnostics: Some("Sturm chain ends in a nonconstant entry after squarefree reduction".into()),
        });
    }
    let count = |right: bool| -> usize {
        let lcs: Vec<(i32, usize)> = chain
            .iter()
            .map(|q| (q.lc().unwrap().sign_near_zero(right), q.deg() as usize))
            .collect();
        let at_pos = sign_changes(lcs.iter().map(|&(s, _)| s));
        let at_neg = sign_changes(lcs.iter().map(|&(s, d)| if d % 2 == 1 { -s } else { s }));
        at_neg - at_pos
    };
    let mut plus = None;
    let mut minus = None;
    let mut witness = Vec::new();
    for right in side.sides() {
        let c = count(right);
        if right {
            plus = Some(c);
        } else {
            minus = Some(c);
        }
        if c < n {
            witness.push(if right { Side::Plus } else { Side::Minus });
        }
    }
    Ok(HyperbolicReport {
        verdict: if witness.is_empty() {
            HyperbolicVerdict::Hyperbolic
        } else {
            HyperbolicVerdict::NotHyperbolic
        },
        witness_sides: witness,
        degree: phi.degree(),
        squarefree_degree: n,
        multiplicities,
        real_roots_plus: plus,
        real_roots_minus: minus,
        chain_length: chain.len(),
        diagnostics: None,
    })
}

/// Rational grid `[-r, r]^m` with `steps + 1` points per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub radius: Q,
    pub steps: usize,
}

pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Search a grid for `x'` where `φ(x', ·)` has a non-real root. Finding
/// nothing does not prove hyperbolicity.
pub fn hyperbolic_falsify_grid(phi: &DistinguishedPoly, grid: &GridSpec) -> Result<Option<Vec<Q>>> {
    if !grid.radius.is_positive() || grid.steps == 0 {
        return Err(CoreError::Domain("grid needs a positive radius and at least one step".into()));
    }
    let base = phi.base_vars();
    let m = base.len();
    let per = grid.steps + 1;
    let total = (0..m).try_fold(1usize, |a, _| a.checked_mul(per)).filter(|&t| t <= MAX_GRID_POINTS);
    let Some(total) = total else {
        return Err(CoreError::Domain("grid too large".into()));
    };
    let yi = phi.poly.var_index(&phi.var).unwrap();
    let cs = phi.poly.coeffs_in(yi);
    let idx: Vec<usize> = base.iter().map(|b| phi.poly.var_index(b).unwrap()).collect();
    let axis: Vec<Q> = (0..per)
        .map(|i| &grid.radius * (qi(2 * i as i64) / qi(grid.steps as i64) - qi(1)))
        .collect();
    let found = (0..total).into_par_iter().find_map_first(|t| {
        let mut pt = vec![Q::zero(); phi.poly.vars().len()];
        let mut rest = t;
        let mut coords = Vec::with_capacity(m);
        for &i in &idx {
            let c = axis[rest % per].clone();
            rest /= per;
            pt[i] = c.clone();
            coords.push(c);
        }
        let u = UniPoly::new(cs.iter().map(|c| c.eval(&pt).unwrap_or_else(Q::zero)).collect());
        let sp = u.squarefree_part();
        let d = sp.deg().max(0) as usize;
        (count_real_roots(&sp) < d).then_some(coords)
    });
    Ok(found)
}

// ---------------------------------------------------------------------------
// Failure witnesses

#[derive(Clone, Debug)]
pub struct NodivRow {
    pub j: usize,
    /// `c_j = (-1)^j θ^(2j)(0) / (2j)!`, which is positive.
    pub c: Interval,
    pub m_2j: Interval,
    /// `c_j >= M_{2j}` certified.
    pub certified: bool,
    /// `(M_{2j} / M_j)^(1/j)`.
    pub diagnostic: Interval,
}

#[derive(Clone, Debug)]
pub struct NodivWitness {
    pub sequence: String,
    pub horizon: usize,
    pub trunc: usize,
    pub rows: Vec<NodivRow>,
    pub diagnostic_sup: Interval,
    /// `Some(true)` when the diagnostic is certified strictly increasing.
    pub diagnostic_increasing: Option<bool>,
    pub symbolic_divergence: Option<String>,
    pub all_certified: bool,
}

/// Compare `a^(1/j)` with `b^(1/(j+1))` exactly: `a^(j+1)` against `b^j`.
fn root_less(a: &Q, j: usize, b: &Q) -> bool {
    let l = (0..j + 1).fold(Q::one(), |acc, _| acc * a);
    let r = (0..j).fold(Q::one(), |acc, _| acc * b);
    l < r
}

pub fn nodiv_witness(m: &CarlemanSequence, horizon: usize, trunc: usize, prec: u32) -> Result<NodivWitness> {
    if horizon == 0 {
        return Err(CoreError::Domain("horizon must be at least 1".into()));
    }
    if 2 * horizon + 8 > trunc {
        return Err(CoreError::Domain(format!("need 2J + 8 <= K, got J = {horizon}, K = {trunc}")));
    }
    let w = prec + 32;
    let mut rows = Vec::with_capacity(horizon);
    let mut ratios = Vec::new();
    for j in 1..=horizon {
        let th = theta_derivative_at_zero(m, 2 * j, trunc, prec)?;
        let f = qb(factorial(2 * j as u64));
        let c = th.magnitude.scale(&f.recip());
        let m2j = m.value(2 * j, w)?.interval();
        let certified = th.certified && c.lo() >= m2j.hi();
        let ratio = match (m.exact_value(2 * j), m.exact_value(j)) {
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        };
        let lr = m.ln_value(2 * j, w)?.sub(&m.ln_value(j, w)?).scale(&qi(j as i64).recip());
        let diagnostic = exp(&lr, w).round(w);
        ratios.push(ratio);
        rows.push(NodivRow {
            j,
            c: c.round(w),
            m_2j: m2j,
            certified,
            diagnostic,
        });
    }
    let mut increasing = Some(true);
    for i in 0..rows.len().saturating_sub(1) {
        let strict = match (&ratios[i], &ratios[i + 1]) {
            (Some(a), Some(b)) => Some(root_less(a, i + 1, b)),
            _ => rows[i].diagnostic.cmp_certain(&rows[i + 1].diagnostic).map(|o| o.is_lt()),
        };
        match strict {
            Some(true) => {}
            Some(false) => {
                increasing = Some(false);
                break;
            }
            None => increasing = None,
        }
    }
    let diagnostic_sup = rows
        .iter()
        .map(|r| r.diagnostic.clone())
        .reduce(|a, b| {
            let hi = if a.hi() > b.hi() { a.hi().clone() } else { b.hi().clone() };
            let lo = if a.lo() > b.lo() { a.lo().clone() } else { b.lo().clone() };
            Interval::new(lo, hi)
        })
        .unwrap();
    let report = classify(m, 16, prec)?;
    let symbolic_divergence = (report.analytic_class.value == Tri::False
        && report.analytic_class.provenance == Provenance::SymbolicRule
        && report.log_convex.value == Tri::True)
        .then(|| "log-convexity gives M_{2j} >= M_j^2, so the diagnostic dominates M_j^(1/j), which is unbounded".to_string());
    Ok(NodivWitness {
        sequence: m.to_string(),
        horizon,
        trunc,
        all_certified: rows.iter().all(|r| r.certified),
        rows,
        diagnostic_sup,
        diagnostic_increasing: increasing,
        symbolic_divergence,
    })
}

pub const MAX_FLAT_HORIZON: usize = 64;

#[derive(Clone, Debug)]
pub struct FlatRow {
    pub j: usize,
    /// `x_j = j^(-α)`.
    pub x: Interval,
    /// `∂^(2j) g / ∂y^(2j) (x_j, 0)`.
    pub value: Interval,
    /// `|value| / (2j)!^(1 + kα)`.
    pub ratio: Interval,
}

#[derive(Clone, Debug)]
pub struct FlatWitness {
    pub alpha: Q,
    pub k: u32,
    pub rows: Vec<FlatRow>,
    /// Dyadic `C` with `C^(j+1) <= ratio_j` certified for every row.
    pub constant: Q,
    pub ratios_increasing: Option<bool>,
}

const C_BITS: u32 = 20;

/// The flat-germ witness `g(x, y) = exp(-|x|^(-1/α)) / (x^(2k) + y^2)` on
/// the lines `x = j^(-α)`.
pub fn gevrey_flat_witness(alpha: &Q, k: u32, horizon: usize, prec: u32) -> Result<FlatWitness> {
    if !alpha.is_positive() {
        return Err(CoreError::Domain("alpha must be positive".into()));
    }
    if k == 0 {
        return Err(CoreError::Domain("k must be at least 1".into()));
    }
    if horizon == 0 || horizon > MAX_FLAT_HORIZON {
        return Err(CoreError::Domain(format!("horizon must lie in 1..={MAX_FLAT_HORIZON}")));
    }
    let w = prec + 32;
    let ka = qi(k as i64) * alpha;
    let mut rows = Vec::with_capacity(horizon);
    let mut ln_ratios = Vec::with_capacity(horizon);
    for j in 1..=horizon {
        let lnf = ln_q(&qb(factorial(2 * j as u64)), w);
        let lnj = ln_q(&qi(j as i64), w);
        // ln|value| = ln (2j)! - j + 2kα(j+1) ln j
        let lnv = lnf
            .add_q(&qi(-(j as i64)))
            .add(&lnj.scale(&(qi(2) * &ka * qi(j as i64 + 1))));
        let lnr = lnv.sub(&lnf.scale(&(Q::one() + &ka)));
        let mag = exp(&lnv, w);
        let value = if j % 2 == 1 { mag.neg() } else { mag };
        let x = exp(&lnj.scale(&-alpha.clone()), w);
        rows.push(FlatRow {
            j,
            x: x.round(prec),
            value: value.round(prec),
            ratio: exp(&lnr, w).round(prec),
        });
        ln_ratios.push(lnr);
    }
    // ln C <= min_j ln r_j / (j+1)
    let bound = ln_ratios
        .iter()
        .enumerate()
        .map(|(i, l)| l.scale(&qi(i as i64 + 2).recip()).lo().clone())
        .reduce(|a, b| if a < b { a } else { b })
        .unwrap();
    let mut c = round_down(exp(&Interval::point(bound), w).lo(), C_BITS);
    let fits = |c: &Q| {
        c.is_positive() && {
            let lc = ln_q(c, w);
            ln_ratios
                .iter()
                .enumerate()
                .all(|(i, l)| lc.scale(&qi(i as i64 + 2)).hi() <= l.lo())
        }
    };
    let step = Q::new(1.into(), num_bigint::BigInt::one() << C_BITS as usize);
    while !fits(&c) {
        c -= &step;
        if !c.is_positive() {
            return Err(CoreError::Precision("no positive working constant at this resolution".into()));
        }
    }
    let mut increasing = Some(true);
    for pair in rows.windows(2) {
        match pair[0].ratio.cmp_certain(&pair[1].ratio) {
            Some(o) if o.is_lt() => {}
            Some(_) => {
                increasing = Some(false);
                break;
            }
            None => increasing = None,
        }
    }
    Ok(FlatWitness {
        alpha: alpha.clone(),
        k,
        rows,
        constant: c,
        ratios_increasing: increasing,
    })
}
