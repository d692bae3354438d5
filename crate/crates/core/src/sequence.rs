//! Carleman sequences: evaluation, structural checks, comparison and
//! classification.
//!
//! Sequences whose terms have the form `M_j = B_j^a` with rational `B_j` and
//! a fixed rational `a > 0` (everything except the log-Gevrey family) are
//! compared exactly on the bases. The log-Gevrey family is handled in log
//! space with outward-rounded intervals and precision escalation.

use crate::config::{escalate, PRECISION_CAP};
use crate::error::{CoreError, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use std::collections::HashMap;
use qal_algebra::interval::Interval;
use qal_algebra::rational::{exact_root, factorial, fmt_q, parse_rational, pow2, pow_i, qb, qi, to_sci};
use qal_algebra::transcend::{e_const, exp, ln, ln_q};
use qal_algebra::Q;
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

pub const DEFAULT_HORIZON: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Analytic,
    Gevrey(Q),
    LogGevrey(Q),
    QGevrey(Q),
    /// Explicit finite prefix `M_0 = 1, M_1, ...`, optionally with a
    /// user-asserted built-in family describing the tail.
    Custom {
        values: Vec<Q>,
        tail: Option<Box<CarlemanSequence>>,
    },
    /// `(M_j)^s` where no built-in family absorbs the exponent.
    Power { base: Box<CarlemanSequence>, s: Q },
    /// `M_{j+k} / M_k`.
    Shift { base: Box<CarlemanSequence>, offset: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlemanSequence {
    family: Family,
}

/// A sequence term: exact when rational, otherwise a certified enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum SeqValue {
    Exact(Q),
    Approx(Interval),
}

impl SeqValue {
    pub fn exact(&self) -> Option<&Q> {
        match self {
            SeqValue::Exact(v) => Some(v),
            SeqValue::Approx(_) => None,
        }
    }

    pub fn interval(&self) -> Interval {
        match self {
            SeqValue::Exact(v) => Interval::point(v.clone()),
            SeqValue::Approx(iv) => iv.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            SeqValue::Exact(v) => qal_algebra::rational::to_f64(v),
            SeqValue::Approx(iv) => iv.mid_f64(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SeqValue::Exact(_))
    }

    pub fn add(&self, o: &SeqValue, prec: u32) -> SeqValue {
        match (self, o) {
            (SeqValue::Exact(a), SeqValue::Exact(b)) => SeqValue::Exact(a + b),
            _ => SeqValue::Approx(self.interval().add(&o.interval()).round(prec)),
        }
    }

    pub fn mul(&self, o: &SeqValue, prec: u32) -> SeqValue {
        match (self, o) {
            (SeqValue::Exact(a), SeqValue::Exact(b)) => SeqValue::Exact(a * b),
            _ => SeqValue::Approx(self.interval().mul(&o.interval()).round(prec)),
        }
    }

    /// Quotient; `o` must be bounded away from zero.
    pub fn div(&self, o: &SeqValue, prec: u32) -> SeqValue {
        match (self, o) {
            (SeqValue::Exact(a), SeqValue::Exact(b)) => SeqValue::Exact(a / b),
            _ => SeqValue::Approx(
                self.interval()
                    .div(&o.interval())
                    .expect("divisor bounded away from zero")
                    .round(prec),
            ),
        }
    }

    pub fn scale(&self, c: &Q) -> SeqValue {
        match self {
            SeqValue::Exact(a) => SeqValue::Exact(a * c),
            SeqValue::Approx(iv) => SeqValue::Approx(iv.scale(c)),
        }
    }

    /// Integer power, possibly negative; the base must be positive.
    pub fn powi(&self, e: i64, prec: u32) -> SeqValue {
        match self {
            SeqValue::Exact(a) => SeqValue::Exact(pow_i(a, e)),
            SeqValue::Approx(iv) => {
                let p = iv.powi(e.unsigned_abs(), prec + 8);
                let p = if e < 0 { p.recip().expect("positive base") } else { p };
                SeqValue::Approx(p.round(prec))
            }
        }
    }
}

impl fmt::Display for SeqValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqValue::Exact(v) => write!(f, "{}", fmt_q(v)),
            SeqValue::Approx(iv) => write!(f, "{}", iv),
        }
    }
}

/// Growth class used by the symbolic rules.
#[derive(Clone, Debug, PartialEq, Eq)]
enum GrowthClass {
    Analytic,
    Gevrey(Q),
    LogGevrey(Q),
    /// `q^(s j^2)`; `s = 1` unless an irrational power was taken.
    QGevrey { q: Q, s: Q },
}

impl GrowthClass {
    fn rank(&self) -> u8 {
        match self {
            GrowthClass::Analytic => 0,
            GrowthClass::LogGevrey(_) => 1,
            GrowthClass::Gevrey(_) => 2,
            GrowthClass::QGevrey { .. } => 3,
        }
    }
}

impl CarlemanSequence {
    pub fn analytic() -> Self {
        CarlemanSequence { family: Family::Analytic }
    }

    pub fn gevrey(alpha: Q) -> Result<Self> {
        positive(&alpha, "gevrey parameter")?;
        Ok(CarlemanSequence { family: Family::Gevrey(alpha) })
    }

    pub fn log_gevrey(alpha: Q) -> Result<Self> {
        positive(&alpha, "loggevrey parameter")?;
        Ok(CarlemanSequence { family: Family::LogGevrey(alpha) })
    }

    pub fn q_gevrey(q: Q) -> Result<Self> {
        if q <= Q::one() {
            return Err(CoreError::Domain(format!("qgevrey parameter must exceed 1, got {}", fmt_q(&q))));
        }
        Ok(CarlemanSequence { family: Family::QGevrey(q) })
    }

    /// Explicit prefix; must start at 1, be positive and nondecreasing.
    pub fn custom(values: Vec<Q>, tail: Option<CarlemanSequence>) -> Result<Self> {
        if values.is_empty() || !values[0].is_one() {
            return Err(CoreError::Domain("custom sequence must start with M_0 = 1".into()));
        }
        for (j, w) in values.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(CoreError::Domain(format!("custom sequence decreases at index {}", j + 1)));
            }
        }
        if let Some(t) = &tail {
            if t.growth_class().is_none() || t.has_custom() {
                return Err(CoreError::Domain("tail class must be a built-in family".into()));
            }
        }
        Ok(CarlemanSequence {
            family: Family::Custom {
                values,
                tail: tail.map(Box::new),
            },
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    fn has_custom(&self) -> bool {
        match &self.family {
            Family::Custom { .. } => true,
            Family::Power { base, .. } | Family::Shift { base, .. } => base.has_custom(),
            _ => false,
        }
    }

    /// Number of available terms; `None` for infinite sequences.
    pub fn prefix_len(&self) -> Option<usize> {
        match &self.family {
            Family::Custom { values, .. } => Some(values.len()),
            Family::Power { base, .. } => base.prefix_len(),
            Family::Shift { base, offset } => base.prefix_len().map(|n| n.saturating_sub(*offset)),
            _ => None,
        }
    }

    fn check_index(&self, j: usize) -> Result<()> {
        match self.prefix_len() {
            Some(n) if j >= n => Err(CoreError::Domain(format!(
                "index {j} beyond the {n} given terms of a custom sequence"
            ))),
            _ => Ok(()),
        }
    }

    /// Exponent `a` of the representation `M_j = B_j^a`, if it exists.
    fn core_exponent(&self) -> Option<Q> {
        match &self.family {
            Family::Analytic | Family::QGevrey(_) | Family::Custom { .. } => Some(Q::one()),
            Family::Gevrey(a) => Some(a.clone()),
            Family::LogGevrey(_) => None,
            Family::Power { base, s } => base.core_exponent().map(|a| a * s),
            Family::Shift { base, .. } => base.core_exponent(),
        }
    }

    /// Base `B_j` of the representation `M_j = B_j^a`.
    fn core_base(&self, j: usize) -> Option<Q> {
        match &self.family {
            Family::Analytic => Some(Q::one()),
            Family::Gevrey(_) => Some(qb(factorial(j as u64))),
            Family::QGevrey(q) => Some(pow_i(q, (j * j) as i64)),
            Family::Custom { values, .. } => values.get(j).cloned(),
            Family::LogGevrey(_) => None,
            Family::Power { base, .. } => base.core_base(j),
            Family::Shift { base, offset } => Some(base.core_base(j + offset)? / base.core_base(*offset)?),
        }
    }

    /// `ln M_j`, exactly zero at `j = 0`.
    pub fn ln_value(&self, j: usize, prec: u32) -> Result<Interval> {
        self.check_index(j)?;
        if j == 0 {
            return Ok(Interval::zero());
        }
        Ok(match &self.family {
            Family::LogGevrey(a) => {
                let w = prec + 16;
                let t = e_const(w).add_q(&qi(j as i64));
                let l = ln(&t, w).expect("j + e > 0");
                let ll = ln(&l, w).expect("ln(j + e) > 0");
                ll.scale(&(a * qi(j as i64))).round(prec)
            }
            Family::Power { base, s } => base.ln_value(j, prec + 8)?.scale(s).round(prec),
            Family::Shift { base, offset } => base
                .ln_value(j + offset, prec + 8)?
                .sub(&base.ln_value(*offset, prec + 8)?)
                .round(prec),
            _ => {
                let a = self.core_exponent().expect("core form");
                let b = self.core_base(j).expect("core form");
                ln_q(&b, prec + 8).scale(&a).round(prec)
            }
        })
    }

    /// `M_j`, exact when rational, else with relative width at most `2^-prec`.
    pub fn value(&self, j: usize, prec: u32) -> Result<SeqValue> {
        self.check_index(j)?;
        if j == 0 {
            return Ok(SeqValue::Exact(Q::one()));
        }
        if let (Some(a), Some(b)) = (self.core_exponent(), self.core_base(j)) {
            if let Some(v) = rational_power(&b, &a) {
                return Ok(SeqValue::Exact(v));
            }
        }
        let target = pow2(-(prec as i64));
        let iv = escalate(prec + 16, |w| {
            let l = self.ln_value(j, w).ok()?;
            let v = exp(&l, w);
            match v.rel_width() {
                Some(r) if r <= target => Some(v),
                _ => None,
            }
        })
        .ok_or(CoreError::UndecidableAtCap(PRECISION_CAP))?;
        Ok(SeqValue::Approx(iv))
    }

    /// Exact rational term when available.
    pub fn exact_value(&self, j: usize) -> Option<Q> {
        if j == 0 {
            return Some(Q::one());
        }
        self.check_index(j).ok()?;
        rational_power(&self.core_base(j)?, &self.core_exponent()?)
    }

    /// `M̄_j = j! M_j`.
    pub fn mbar(&self, j: usize, prec: u32) -> Result<SeqValue> {
        let f = qb(factorial(j as u64));
        Ok(match self.value(j, prec)? {
            SeqValue::Exact(v) => SeqValue::Exact(v * f),
            SeqValue::Approx(iv) => SeqValue::Approx(iv.scale(&f)),
        })
    }

    /// Value of `M_offset` divided out by a shift, when this is a shift.
    pub fn renormalization(&self, prec: u32) -> Result<Option<SeqValue>> {
        match &self.family {
            Family::Shift { base, offset } => Ok(Some(base.value(*offset, prec)?)),
            _ => Ok(None),
        }
    }

    fn growth_class(&self) -> Option<GrowthClass> {
        match &self.family {
            Family::Analytic => Some(GrowthClass::Analytic),
            Family::Gevrey(a) => Some(GrowthClass::Gevrey(a.clone())),
            Family::LogGevrey(a) => Some(GrowthClass::LogGevrey(a.clone())),
            Family::QGevrey(q) => Some(GrowthClass::QGevrey { q: q.clone(), s: Q::one() }),
            Family::Custom { .. } => None,
            Family::Power { base, s } => match base.growth_class()? {
                GrowthClass::QGevrey { q, s: t } => Some(GrowthClass::QGevrey { q, s: t * s }),
                // Other families absorb powers at construction.
                _ => None,
            },
            // M_{j+k}/M_k and M_j bound each other up to a factor C^j for
            // each built-in family.
            Family::Shift { base, .. } => base.growth_class(),
        }
    }

    /// Asserted tail class of a custom sequence (through power and shift).
    fn asserted_class(&self) -> Option<GrowthClass> {
        match &self.family {
            Family::Custom { tail, .. } => tail.as_ref()?.growth_class(),
            Family::Power { base, s } => {
                let t = match &base.family {
                    Family::Custom { tail, .. } => tail.as_ref()?,
                    _ => return None,
                };
                power(t, s).ok()?.growth_class()
            }
            Family::Shift { base, .. } => base.asserted_class(),
            _ => None,
        }
    }
}

fn positive(x: &Q, what: &str) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(CoreError::Domain(format!("{what} must be positive, got {}", fmt_q(x))))
    }
}

/// `b^a` when it is rational.
fn rational_power(b: &Q, a: &Q) -> Option<Q> {
    if b.is_one() {
        return Some(Q::one());
    }
    let n = a.numer().to_i64()?;
    let d = a.denom().to_u32()?;
    if n.unsigned_abs() > 1 << 20 {
        return None;
    }
    let p = pow_i(b, n);
    if d == 1 {
        Some(p)
    } else {
        exact_root(&p, d)
    }
}

/// `(M_j)^s` for rational `s >= 1`.
pub fn power(m: &CarlemanSequence, s: &Q) -> Result<CarlemanSequence> {
    if *s < Q::one() {
        return Err(CoreError::Domain(format!("power exponent must be at least 1, got {}", fmt_q(s))));
    }
    if s.is_one() {
        return Ok(m.clone());
    }
    let family = match &m.family {
        Family::Analytic => Family::Analytic,
        Family::Gevrey(a) => Family::Gevrey(a * s),
        Family::LogGevrey(a) => Family::LogGevrey(a * s),
        Family::QGevrey(q) => match rational_power(q, s) {
            Some(qs) => Family::QGevrey(qs),
            None => Family::Power {
                base: Box::new(m.clone()),
                s: s.clone(),
            },
        },
        Family::Power { base, s: t } => return power(base, &(t * s)),
        Family::Shift { base, offset } => Family::Shift {
            base: Box::new(power(base, s)?),
            offset: *offset,
        },
        Family::Custom { .. } => Family::Power {
            base: Box::new(m.clone()),
            s: s.clone(),
        },
    };
    Ok(CarlemanSequence { family })
}

/// `M'_j = M_{j+1} / M_1`; the divided constant is kept in the structure.
pub fn shift(m: &CarlemanSequence) -> CarlemanSequence {
    let family = match &m.family {
        Family::Analytic => Family::Analytic,
        Family::Shift { base, offset } => Family::Shift {
            base: base.clone(),
            offset: offset + 1,
        },
        _ => Family::Shift {
            base: Box::new(m.clone()),
            offset: 1,
        },
    };
    CarlemanSequence { family }
}

// ---------------------------------------------------------------------------
// DSL

impl fmt::Display for CarlemanSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Analytic => write!(f, "analytic"),
            Family::Gevrey(a) => write!(f, "gevrey({})", fmt_q(a)),
            Family::LogGevrey(a) => write!(f, "loggevrey({})", fmt_q(a)),
            Family::QGevrey(q) => write!(f, "qgevrey({})", fmt_q(q)),
            Family::Custom { values, tail } => {
                let vs: Vec<String> = values.iter().map(fmt_q).collect();
                write!(f, "custom{{{}", vs.join(","))?;
                if let Some(t) = tail {
                    write!(f, ";tail={t}")?;
                }
                write!(f, "}}")
            }
            Family::Power { base, s } => write!(f, "power({base},{})", fmt_q(s)),
            Family::Shift { base, offset } => {
                for _ in 0..*offset {
                    write!(f, "shift(")?;
                }
                write!(f, "{base}")?;
                for _ in 0..*offset {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Parse the sequence language:
///
/// ```text
/// seq := "analytic" | "gevrey(" R ")" | "loggevrey(" R ")" | "qgevrey(" R ")"
///      | "custom{" R ("," R)* (";tail=" seq)? "}"
///      | "power(" seq "," R ")" | "shift(" seq ")"
/// R   := integer | decimal | integer "/" integer
/// ```
pub fn parse_sequence(src: &str) -> Result<CarlemanSequence> {
    let mut p = SeqParser { s: src.as_bytes(), pos: 0 };
    let m = p.seq()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.syntax(p.pos, "unexpected trailing input"));
    }
    Ok(m)
}

struct SeqParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl SeqParser<'_> {
    fn syntax(&self, at: usize, msg: &str) -> CoreError {
        CoreError::Syntax {
            offset: at,
            message: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(self.pos, &format!("expected `{}`", c as char)))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> (usize, String) {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        (start, String::from_utf8_lossy(&self.s[start..self.pos]).to_ascii_lowercase())
    }

    fn number(&mut self) -> Result<(usize, Q)> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && matches!(self.s[self.pos], b'0'..=b'9' | b'.' | b'/' | b'-' | b'+') {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        match parse_rational(txt) {
            Some(v) => Ok((start, v)),
            None => Err(self.syntax(start, "expected a rational literal")),
        }
    }

    fn seq(&mut self) -> Result<CarlemanSequence> {
        let (at, name) = self.ident();
        match name.as_str() {
            "analytic" => Ok(CarlemanSequence::analytic()),
            "gevrey" | "loggevrey" | "qgevrey" => {
                self.expect(b'(')?;
                let (_, v) = self.number()?;
                self.expect(b')')?;
                match name.as_str() {
                    "gevrey" => CarlemanSequence::gevrey(v),
                    "loggevrey" => CarlemanSequence::log_gevrey(v),
                    _ => CarlemanSequence::q_gevrey(v),
                }
            }
            "custom" => {
                self.expect(b'{')?;
                let mut values = vec![self.number()?.1];
                while self.eat(b',') {
                    values.push(self.number()?.1);
                }
                let mut tail = None;
                if self.eat(b';') {
                    let (k, key) = self.ident();
                    if key != "tail" {
                        return Err(self.syntax(k, "expected `tail`"));
                    }
                    self.expect(b'=')?;
                    tail = Some(self.seq()?);
                }
                self.expect(b'}')?;
                CarlemanSequence::custom(values, tail)
            }
            "power" => {
                self.expect(b'(')?;
                let base = self.seq()?;
                self.expect(b',')?;
                let (_, s) = self.number()?;
                self.expect(b')')?;
                power(&base, &s)
            }
            "shift" => {
                self.expect(b'(')?;
                let base = self.seq()?;
                self.expect(b')')?;
                Ok(shift(&base))
            }
            "" => Err(self.syntax(at, "expected a sequence family")),
            _ => Err(self.syntax(at, &format!("unknown sequence family `{name}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Structural checks

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail { witness: Vec<usize> },
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

/// Sign of `prod M_i^e - prod M_k^e` over the given (index, exponent) lists.
pub fn compare_products(m: &CarlemanSequence, lhs: &[(usize, u32)], rhs: &[(usize, u32)], prec: u32) -> Result<Ordering> {
    compare_cached(m, lhs, rhs, prec, &mut HashMap::new())
}

type LnCache = HashMap<(usize, u32), Interval>;

fn compare_cached(
    m: &CarlemanSequence,
    lhs: &[(usize, u32)],
    rhs: &[(usize, u32)],
    prec: u32,
    cache: &mut LnCache,
) -> Result<Ordering> {
    for &(j, _) in lhs.iter().chain(rhs) {
        m.check_index(j)?;
    }
    if let Some(a) = m.core_exponent() {
        // a > 0, so comparing the bases is equivalent.
        debug_assert!(a.is_positive());
        let prod = |side: &[(usize, u32)]| -> Q {
            side.iter()
                .fold(Q::one(), |acc, &(j, e)| acc * pow_i(&m.core_base(j).expect("core"), e as i64))
        };
        return Ok(prod(lhs).cmp(&prod(rhs)));
    }
    let mut w = prec.clamp(16, PRECISION_CAP);
    loop {
        let mut d = Interval::zero();
        for (side, sign) in [(lhs, 1i64), (rhs, -1i64)] {
            for &(j, e) in side {
                let l = match cache.get(&(j, w)) {
                    Some(l) => l.clone(),
                    None => {
                        let l = m.ln_value(j, w)?;
                        cache.insert((j, w), l.clone());
                        l
                    }
                };
                d = d.add(&l.scale(&qi(sign * e as i64)));
            }
        }
        if let Some(o) = d.sign() {
            return Ok(o);
        }
        if w >= PRECISION_CAP {
            return Err(CoreError::UndecidableAtCap(PRECISION_CAP));
        }
        w = (w * 2).min(PRECISION_CAP);
    }
}

fn horizon_check(m: &CarlemanSequence, horizon: usize) -> Result<()> {
    if let Some(n) = m.prefix_len() {
        if horizon >= n {
            return Err(CoreError::Domain(format!(
                "horizon {horizon} needs {} terms, custom sequence has {n}",
                horizon + 1
            )));
        }
    }
    Ok(())
}

/// `M_j^2 <= M_{j-1} M_{j+1}` for `1 <= j < J`.
pub fn check_log_convexity(m: &CarlemanSequence, horizon: usize, prec: u32) -> Result<CheckOutcome> {
    if horizon < 2 {
        return Err(CoreError::Domain("log-convexity horizon must be at least 2".into()));
    }
    horizon_check(m, horizon)?;
    let mut cache = LnCache::new();
    for j in 1..horizon {
        if compare_cached(m, &[(j, 2)], &[(j - 1, 1), (j + 1, 1)], prec, &mut cache)? == Ordering::Greater {
            return Ok(CheckOutcome::Fail { witness: vec![j] });
        }
    }
    Ok(CheckOutcome::Pass)
}

/// `M_j M_k <= M_{j+k}` for `j + k <= J`, and `(M_j)^(1/j)` nondecreasing
/// for `1 <= j <= J`. Pairs with `j = 0` or `k = 0` hold with equality
/// because `M_0 = 1` and are skipped.
pub fn verify_superadditivity(m: &CarlemanSequence, horizon: usize, prec: u32) -> Result<CheckOutcome> {
    horizon_check(m, horizon)?;
    let mut cache = LnCache::new();
    for n in 2..=horizon {
        for j in 1..=n / 2 {
            let k = n - j;
            let lhs: Vec<(usize, u32)> = if j == k { vec![(j, 2)] } else { vec![(j, 1), (k, 1)] };
            if compare_cached(m, &lhs, &[(n, 1)], prec, &mut cache)? == Ordering::Greater {
                return Ok(CheckOutcome::Fail { witness: vec![j, k] });
            }
        }
    }
    for j in 1..horizon {
        // M_j^(1/j) <= M_{j+1}^(1/(j+1))  <=>  M_j^(j+1) <= M_{j+1}^j
        if compare_cached(m, &[(j, (j + 1) as u32)], &[(j + 1, j as u32)], prec, &mut cache)? == Ordering::Greater {
            return Ok(CheckOutcome::Fail { witness: vec![j] });
        }
    }
    Ok(CheckOutcome::Pass)
}

// ---------------------------------------------------------------------------
// Comparison

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrecedeVerdict {
    /// Decided by the closed-form growth rules.
    Symbolic { holds: bool, rule: String },
    /// `sup_{1<=j<=J} (M_j/N_j)^(1/j)` on the horizon; not a decision.
    Diagnostic { sup: f64, witness: usize, horizon: usize },
}

/// Whether `M_j <= C^j N_j` for some `C`.
pub fn precede(m: &CarlemanSequence, n: &CarlemanSequence, horizon: usize, prec: u32) -> Result<PrecedeVerdict> {
    if m == n {
        return Ok(PrecedeVerdict::Symbolic {
            holds: true,
            rule: "reflexive".into(),
        });
    }
    if let (Some(a), Some(b)) = (m.growth_class(), n.growth_class()) {
        return Ok(symbolic_precede(&a, &b));
    }
    let mut horizon = horizon.max(1);
    for s in [m, n] {
        if let Some(len) = s.prefix_len() {
            horizon = horizon.min(len.saturating_sub(1));
        }
    }
    if horizon == 0 {
        return Err(CoreError::Domain("custom sequence has no term beyond M_0".into()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut arg = 1;
    for j in 1..=horizon {
        let d = m.ln_value(j, prec)?.sub(&n.ln_value(j, prec)?).mid_f64() / j as f64;
        if d > best {
            best = d;
            arg = j;
        }
    }
    Ok(PrecedeVerdict::Diagnostic {
        sup: best.exp(),
        witness: arg,
        horizon,
    })
}

fn symbolic_precede(a: &GrowthClass, b: &GrowthClass) -> PrecedeVerdict {
    use GrowthClass::*;
    let (holds, rule) = if a.rank() != b.rank() {
        (a.rank() < b.rank(), "family order analytic < loggevrey < gevrey < qgevrey")
    } else {
        match (a, b) {
            (Analytic, Analytic) => (true, "reflexive"),
            (Gevrey(x), Gevrey(y)) => (x <= y, "gevrey parameters"),
            (LogGevrey(x), LogGevrey(y)) => (x <= y, "loggevrey parameters"),
            (QGevrey { q: q1, s: s1 }, QGevrey { q: q2, s: s2 }) => {
                // q1^s1 <= q2^s2  <=>  q1^(n1 d2) <= q2^(n2 d1)
                let l = pow_i(q1, (s1.numer() * s2.denom()).to_i64().unwrap_or(i64::MAX / 4));
                let r = pow_i(q2, (s2.numer() * s1.denom()).to_i64().unwrap_or(i64::MAX / 4));
                (l <= r, "qgevrey parameters")
            }
            _ => unreachable!("equal ranks"),
        }
    };
    PrecedeVerdict::Symbolic {
        holds,
        rule: rule.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    Inconclusive,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Inconclusive,
        }
    }

    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn is_false(self) -> bool {
        self == Tri::False
    }

    pub fn resolved(self) -> Option<bool> {
        match self {
            Tri::True => Some(true),
            Tri::False => Some(false),
            Tri::Inconclusive => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    SymbolicRule,
    AssertedTail,
    FiniteHorizonDiagnostic,
}

/// A finite-horizon number backing a flag.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub quantity: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Flag {
    pub value: Tri,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<Certificate>,
}

impl Flag {
    pub fn symbolic(v: bool, rule: &str) -> Flag {
        Flag {
            value: Tri::from_bool(v),
            provenance: Provenance::SymbolicRule,
            rule: Some(rule.to_string()),
            certificate: vec![],
        }
    }

    fn diagnostic(value: Tri, certificate: Vec<Certificate>) -> Flag {
        Flag {
            value,
            provenance: Provenance::FiniteHorizonDiagnostic,
            rule: None,
            certificate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceReport {
    pub sequence: String,
    pub horizon: usize,
    pub log_convex: Flag,
    pub analytic_class: Flag,
    pub derivation_stable: Flag,
    pub quasianalytic: Flag,
    pub strongly_non_quasianalytic: Flag,
    pub moderate_growth: Flag,
    pub strongly_regular: Flag,
}

impl SequenceReport {
    /// Report for a bare set of flag values, as if read off a rule table.
    pub fn from_values(name: &str, v: [Tri; 6]) -> SequenceReport {
        let f = |t: Tri| Flag {
            value: t,
            provenance: Provenance::SymbolicRule,
            rule: Some("given".into()),
            certificate: vec![],
        };
        let [lc, ac, ds, qa, snqa, mg] = v;
        SequenceReport {
            sequence: name.to_string(),
            horizon: 0,
            log_convex: f(lc),
            analytic_class: f(ac),
            derivation_stable: f(ds),
            quasianalytic: f(qa),
            strongly_non_quasianalytic: f(snqa),
            moderate_growth: f(mg),
            strongly_regular: Flag {
                value: snqa.and(mg),
                provenance: Provenance::SymbolicRule,
                rule: Some("strongly non-quasianalytic and moderate growth".into()),
                certificate: vec![],
            },
        }
    }

    /// The structural invariants every report must satisfy.
    pub fn is_consistent(&self) -> bool {
        let sr = self.strongly_non_quasianalytic.value.and(self.moderate_growth.value);
        sr == self.strongly_regular.value
            && !(self.quasianalytic.value.is_true() && self.strongly_non_quasianalytic.value.is_true())
            && !(self.analytic_class.value.is_true() && !self.quasianalytic.value.is_true())
    }
}

struct RuleRow {
    analytic_class: bool,
    derivation_stable: bool,
    quasianalytic: bool,
    snqa: bool,
    moderate_growth: bool,
}

fn rule_row(c: &GrowthClass) -> (RuleRow, &'static str) {
    match c {
        GrowthClass::Analytic => (
            RuleRow {
                analytic_class: true,
                derivation_stable: true,
                quasianalytic: true,
                snqa: false,
                moderate_growth: true,
            },
            "analytic",
        ),
        GrowthClass::Gevrey(_) => (
            RuleRow {
                analytic_class: false,
                derivation_stable: true,
                quasianalytic: false,
                snqa: true,
                moderate_growth: true,
            },
            "gevrey",
        ),
        GrowthClass::LogGevrey(a) => (
            RuleRow {
                analytic_class: false,
                derivation_stable: true,
                quasianalytic: *a <= Q::one(),
                snqa: false,
                moderate_growth: true,
            },
            "loggevrey",
        ),
        GrowthClass::QGevrey { .. } => (
            RuleRow {
                analytic_class: false,
                derivation_stable: true,
                quasianalytic: false,
                snqa: true,
                moderate_growth: false,
            },
            "qgevrey",
        ),
    }
}

/// Classify `m`. Built-in families are decided by the rule table; custom
/// sequences get finite-horizon diagnostics marked inconclusive unless a
/// tail class was asserted.
pub fn classify(m: &CarlemanSequence, horizon: usize, prec: u32) -> Result<SequenceReport> {
    let mut horizon = horizon.max(2);
    if let Some(n) = m.prefix_len() {
        horizon = horizon.min(n.saturating_sub(1));
    }
    let name = m.to_string();
    if let Some(c) = m.growth_class() {
        let (row, rule) = rule_row(&c);
        let snqa = Flag::symbolic(row.snqa, rule);
        let mg = Flag::symbolic(row.moderate_growth, rule);
        let sr = Flag::symbolic(row.snqa && row.moderate_growth, "strongly non-quasianalytic and moderate growth");
        return Ok(SequenceReport {
            sequence: name,
            horizon,
            log_convex: Flag::symbolic(true, rule),
            analytic_class: Flag::symbolic(row.analytic_class, rule),
            derivation_stable: Flag::symbolic(row.derivation_stable, rule),
            quasianalytic: Flag::symbolic(row.quasianalytic, rule),
            strongly_non_quasianalytic: snqa,
            moderate_growth: mg,
            strongly_regular: sr,
        });
    }
    // Custom data: the prefix alone decides nothing about the infinite
    // conditions, except that a log-convexity failure is a real failure.
    let lc = if horizon >= 2 {
        match check_log_convexity(m, horizon, prec)? {
            CheckOutcome::Pass => Flag::diagnostic(Tri::Inconclusive, vec![]),
            CheckOutcome::Fail { witness } => Flag {
                value: Tri::False,
                provenance: Provenance::FiniteHorizonDiagnostic,
                rule: Some("violated on the prefix".into()),
                certificate: vec![Certificate {
                    quantity: "log_convexity_witness".into(),
                    value: witness[0] as f64,
                    index: Some(witness[0]),
                }],
            },
        }
    } else {
        Flag::diagnostic(Tri::Inconclusive, vec![])
    };
    let d = diagnostics(m, horizon, prec)?;
    let mut rep = SequenceReport {
        sequence: name,
        horizon,
        log_convex: lc,
        analytic_class: Flag::diagnostic(Tri::Inconclusive, vec![d.root_sup]),
        derivation_stable: Flag::diagnostic(Tri::Inconclusive, vec![d.ratio_root_sup]),
        quasianalytic: Flag::diagnostic(Tri::Inconclusive, vec![d.carleman_sum]),
        strongly_non_quasianalytic: Flag::diagnostic(Tri::Inconclusive, vec![d.snqa_ratio]),
        moderate_growth: Flag::diagnostic(Tri::Inconclusive, vec![d.mg_sup]),
        strongly_regular: Flag::diagnostic(Tri::Inconclusive, vec![]),
    };
    if let Some(c) = m.asserted_class() {
        let (row, rule) = rule_row(&c);
        let set = |f: &mut Flag, v: bool| {
            f.value = Tri::from_bool(v);
            f.provenance = Provenance::AssertedTail;
            f.rule = Some(rule.to_string());
        };
        if !rep.log_convex.value.is_false() {
            set(&mut rep.log_convex, true);
        }
        set(&mut rep.analytic_class, row.analytic_class);
        set(&mut rep.derivation_stable, row.derivation_stable);
        set(&mut rep.quasianalytic, row.quasianalytic);
        set(&mut rep.strongly_non_quasianalytic, row.snqa);
        set(&mut rep.moderate_growth, row.moderate_growth);
        set(&mut rep.strongly_regular, row.snqa && row.moderate_growth);
    }
    Ok(rep)
}

struct Diagnostics {
    root_sup: Certificate,
    ratio_root_sup: Certificate,
    carleman_sum: Certificate,
    snqa_ratio: Certificate,
    mg_sup: Certificate,
}

fn diagnostics(m: &CarlemanSequence, horizon: usize, prec: u32) -> Result<Diagnostics> {
    // Floating summaries of certified logs; only ever reported, never decided on.
    let p = prec.min(128);
    let l: Vec<f64> = (0..=horizon).map(|j| m.ln_value(j, p).map(|iv| iv.mid_f64())).collect::<Result<_>>()?;
    let sup = |it: &mut dyn Iterator<Item = (usize, f64)>| -> (usize, f64) {
        it.fold((0, f64::NEG_INFINITY), |b, (j, v)| if v > b.1 { (j, v) } else { b })
    };
    let (j1, root) = sup(&mut (1..=horizon).map(|j| (j, l[j] / j as f64)));
    let (j2, ratio) = sup(&mut (1..horizon).map(|j| (j, (l[j + 1] - l[j]) / j as f64)));
    // term_j = M_j / ((j+1) M_{j+1})
    let term: Vec<f64> = (0..horizon).map(|j| (l[j] - l[j + 1]).exp() / (j + 1) as f64).collect();
    let total: f64 = term.iter().sum();
    let mut tail = 0.0;
    let mut best = (0, f64::NEG_INFINITY);
    for k in (0..horizon).rev() {
        tail += term[k];
        let r = tail / (l[k] - l[k + 1]).exp();
        if r > best.1 {
            best = (k, r);
        }
    }
    let mut mg = (0, f64::NEG_INFINITY);
    for n in 2..=horizon {
        for j in 1..=n / 2 {
            let v = (l[n] - l[j] - l[n - j]) / n as f64;
            if v > mg.1 {
                mg = (n, v);
            }
        }
    }
    let cert = |q: &str, v: f64, i: usize| Certificate {
        quantity: q.to_string(),
        value: v,
        index: Some(i),
    };
    Ok(Diagnostics {
        root_sup: cert("sup_root", root.exp(), j1),
        ratio_root_sup: cert("sup_ratio_root", if horizon > 1 { ratio.exp() } else { 1.0 }, j2),
        carleman_sum: cert("carleman_partial_sum", total, horizon),
        snqa_ratio: cert("max_tail_ratio", best.1, best.0),
        mg_sup: cert("sup_moderate_growth", if horizon > 1 { mg.1.exp() } else { 1.0 }, mg.0),
    })
}

/// Canonical JSON for a sequence.
pub fn sequence_json(m: &CarlemanSequence) -> serde_json::Value {
    use serde_json::json;
    let mut v = match &m.family {
        Family::Analytic => json!({"family": "analytic"}),
        Family::Gevrey(a) => json!({"family": "gevrey", "alpha": fmt_q(a)}),
        Family::LogGevrey(a) => json!({"family": "loggevrey", "alpha": fmt_q(a)}),
        Family::QGevrey(q) => json!({"family": "qgevrey", "q": fmt_q(q)}),
        Family::Custom { values, tail } => json!({
            "family": "custom",
            "values": values.iter().map(fmt_q).collect::<Vec<_>>(),
            "tail": tail.as_ref().map(|t| sequence_json(t)),
        }),
        Family::Power { base, s } => json!({"family": "power", "base": sequence_json(base), "s": fmt_q(s)}),
        Family::Shift { base, offset } => json!({"family": "shift", "base": sequence_json(base), "offset": offset}),
    };
    v["dsl"] = serde_json::Value::String(m.to_string());
    v
}

/// Decimal rendering of a term, 15 significant digits.
pub fn value_decimal(v: &SeqValue) -> String {
    match v {
        SeqValue::Exact(x) => to_sci(x, 15),
        SeqValue::Approx(iv) => to_sci(&iv.mid(), 15),
    }
}

/// `M_j` as a big integer when it is one.
pub fn integer_value(m: &CarlemanSequence, j: usize) -> Option<BigInt> {
    let v = m.exact_value(j)?;
    v.is_integer().then(|| v.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qal_algebra::rational::q;

    fn s(t: &str) -> CarlemanSequence {
        parse_sequence(t).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(s("gevrey(1)").family(), &Family::Gevrey(qi(1)));
        assert_eq!(s("qgevrey(2)").family(), &Family::QGevrey(qi(2)));
        assert!(matches!(parse_sequence("gevrey(-1)"), Err(CoreError::Domain(_))));
        assert!(matches!(parse_sequence("qgevrey(1)"), Err(CoreError::Domain(_))));
        assert!(matches!(parse_sequence("gevrey(1"), Err(CoreError::Syntax { offset: 8, .. })));
        assert!(matches!(parse_sequence("bessel(1)"), Err(CoreError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_sequence("custom{2,3}"), Err(CoreError::Domain(_))));
        assert!(matches!(parse_sequence("custom{1;tail=custom{1}}"), Err(CoreError::Domain(_))));
        for t in [
            "analytic",
            "gevrey(1/2)",
            "loggevrey(3/2)",
            "qgevrey(5/2)",
            "custom{1,2,3,4}",
            "custom{1,1,2;tail=gevrey(1)}",
            "power(qgevrey(2),3/2)",
            "shift(shift(gevrey(1)))",
            "shift(loggevrey(1))",
        ] {
            assert_eq!(s(t).to_string(), t);
            assert_eq!(s(&s(t).to_string()), s(t));
        }
        assert_eq!(s(" Gevrey ( 0.5 ) ").to_string(), "gevrey(1/2)");
    }

    #[test]
    fn values() {
        assert_eq!(s("gevrey(1)").value(5, 64).unwrap(), SeqValue::Exact(qi(120)));
        assert_eq!(s("qgevrey(2)").value(3, 64).unwrap(), SeqValue::Exact(qi(512)));
        assert_eq!(s("loggevrey(1)").value(0, 64).unwrap(), SeqValue::Exact(qi(1)));
        assert_eq!(s("gevrey(1/2)").value(1, 64).unwrap(), SeqValue::Exact(qi(1)));
        // (3!)^(1/2) = sqrt(6)
        let v = s("gevrey(1/2)").value(3, 100).unwrap();
        let iv = v.interval();
        assert!(iv.sqr().contains(&qi(6)));
        assert!(iv.rel_width().unwrap() <= pow2(-100));
        // (ln(1+e))^1 = 1.3132616875182228...
        let v = s("loggevrey(1)").value(1, 80).unwrap();
        assert!((v.to_f64() - (1.0 + std::f64::consts::E).ln()).abs() < 1e-14);
        assert!(v.interval().rel_width().unwrap() <= pow2(-80));
        let c = s("custom{1,2,3}");
        assert!(matches!(c.value(3, 64), Err(CoreError::Domain(_))));
    }

    #[test]
    fn power_and_shift() {
        assert_eq!(power(&s("gevrey(1)"), &qi(2)).unwrap(), s("gevrey(2)"));
        assert_eq!(power(&s("analytic"), &qi(3)).unwrap(), s("analytic"));
        assert_eq!(power(&s("qgevrey(2)"), &qi(2)).unwrap(), s("qgevrey(4)"));
        assert!(power(&s("gevrey(1)"), &q(1, 2)).is_err());
        let p = power(&s("qgevrey(2)"), &q(3, 2)).unwrap();
        assert!(matches!(p.family(), Family::Power { .. }));
        // 2^(3/2 * 4) = 64
        assert_eq!(p.exact_value(2), Some(qi(64)));
        assert_eq!(shift(&s("analytic")), s("analytic"));
        let g = shift(&s("gevrey(1)"));
        for j in 0..8 {
            assert_eq!(g.exact_value(j), Some(qb(factorial(j as u64 + 1))));
        }
        assert_eq!(g.renormalization(64).unwrap(), Some(SeqValue::Exact(qi(1))));
        assert_eq!(shift(&s("qgevrey(2)")).exact_value(2), Some(qi(256)));
        let sl = shift(&s("loggevrey(1)"));
        assert_eq!(sl.value(0, 64).unwrap(), SeqValue::Exact(qi(1)));
    }

    #[test]
    fn checks() {
        assert!(check_log_convexity(&s("gevrey(2)"), 20, 64).unwrap().passed());
        assert!(check_log_convexity(&s("analytic"), 50, 64).unwrap().passed());
        assert_eq!(
            check_log_convexity(&s("custom{1,2,3,4}"), 3, 64).unwrap(),
            CheckOutcome::Fail { witness: vec![1] }
        );
        for t in ["gevrey(1)", "analytic", "qgevrey(2)", "loggevrey(1/2)", "gevrey(1/3)"] {
            assert!(verify_superadditivity(&s(t), 16, 64).unwrap().passed(), "{t}");
        }
        assert!(check_log_convexity(&s("loggevrey(2)"), 12, 64).unwrap().passed());
        assert!(matches!(check_log_convexity(&s("custom{1,2}"), 3, 64), Err(CoreError::Domain(_))));
    }

    #[test]
    fn precede_rules() {
        let holds = |a: &str, b: &str| match precede(&s(a), &s(b), 32, 64).unwrap() {
            PrecedeVerdict::Symbolic { holds, .. } => holds,
            d => panic!("{d:?}"),
        };
        assert!(holds("gevrey(1)", "gevrey(2)"));
        assert!(!holds("gevrey(2)", "gevrey(1)"));
        assert!(holds("loggevrey(5)", "gevrey(1/10)"));
        assert!(holds("gevrey(7)", "qgevrey(11/10)"));
        assert!(!holds("qgevrey(2)", "gevrey(100)"));
        assert!(holds("custom{1,2,4}", "custom{1,2,4}"));
        assert!(holds("power(qgevrey(2),3/2)", "qgevrey(3)"));
        assert!(!holds("power(qgevrey(2),3/2)", "qgevrey(2)"));
        assert!(holds("shift(gevrey(1))", "gevrey(1)"));
        match precede(&s("custom{1,2,6,24}"), &s("analytic"), 32, 64).unwrap() {
            PrecedeVerdict::Diagnostic { sup, witness, horizon } => {
                assert_eq!(horizon, 3);
                // max(2, 6^(1/2), 24^(1/3)) = 24^(1/3)
                assert!((sup - 24f64.powf(1.0 / 3.0)).abs() < 1e-12);
                assert_eq!(witness, 3);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn classification_table() {
        let r = classify(&s("loggevrey(1/2)"), 32, 64).unwrap();
        assert_eq!(r.quasianalytic.value, Tri::True);
        assert_eq!(r.strongly_non_quasianalytic.value, Tri::False);
        let r = classify(&s("loggevrey(2)"), 32, 64).unwrap();
        assert_eq!(r.quasianalytic.value, Tri::False);
        assert_eq!(r.strongly_non_quasianalytic.value, Tri::False);
        let r = classify(&s("gevrey(3/7)"), 32, 64).unwrap();
        assert_eq!(r.strongly_regular.value, Tri::True);
        let r = classify(&s("qgevrey(2)"), 32, 64).unwrap();
        assert_eq!(r.strongly_non_quasianalytic.value, Tri::True);
        assert_eq!(r.moderate_growth.value, Tri::False);
        let r = classify(&s("analytic"), 32, 64).unwrap();
        assert_eq!(r.analytic_class.value, Tri::True);
        assert!(r.is_consistent());
    }

    #[test]
    fn custom_classification() {
        let r = classify(&s("custom{1,1,2,6,24,120}"), 32, 64).unwrap();
        assert_eq!(r.horizon, 5);
        assert_eq!(r.quasianalytic.value, Tri::Inconclusive);
        assert_eq!(r.quasianalytic.provenance, Provenance::FiniteHorizonDiagnostic);
        // sum_{j<5} M_j/((j+1)M_{j+1}) = 1 + 1/4 + 1/9 + 1/16 + 1/25
        let cs = r.quasianalytic.certificate[0].value;
        assert!((cs - (1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0 + 1.0 / 25.0)).abs() < 1e-12);
        let r = classify(&s("custom{1,2,3,4}"), 32, 64).unwrap();
        assert_eq!(r.log_convex.value, Tri::False);
        let r = classify(&s("custom{1,1,2,6;tail=gevrey(1)}"), 32, 64).unwrap();
        assert_eq!(r.strongly_regular.value, Tri::True);
        assert_eq!(r.strongly_regular.provenance, Provenance::AssertedTail);
        assert!(r.is_consistent());
    }

    #[test]
    fn json_shape() {
        let v = sequence_json(&s("custom{1,2;tail=qgevrey(3/2)}"));
        assert_eq!(v["family"], "custom");
        assert_eq!(v["values"][1], "2");
        assert_eq!(v["tail"]["q"], "3/2");
        assert_eq!(v["dsl"], "custom{1,2;tail=qgevrey(3/2)}");
    }
}
