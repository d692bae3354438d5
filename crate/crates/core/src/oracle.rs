//! Rule engine answering Borel-map, division, noetherianity and closedness
//! questions from a sequence classification and facts about a divisor.
//!
//! Every rule is keyed to an entry of [`CITATIONS`]. All rules whose
//! hypotheses hold are evaluated; the first by priority gives the verdict
//! and any disagreement among the others is reported as inconsistent input.

use crate::division::{hyperbolic_check_2d, regular_order, strictly_regular_check, DistinguishedPoly, HyperbolicVerdict, Side};
use crate::error::{CoreError, Result};
use crate::geometry::{d_exponent, PuiseuxOptions};
use crate::sequence::{Flag, SequenceReport, Tri};
use num_traits::{One, Zero};
use qal_algebra::multipoly::vars_of;
use qal_algebra::rational::fmt_q;
use qal_algebra::sturm::count_real_roots;
use qal_algebra::{MultiPoly, Q};
use serde::Serialize;

/// Tagged statements the engine may cite. Written in terse notation:
/// `T0` is the Borel map at 0, `E(M)` the germ ring, `F(M)` its formal
/// counterpart, `O` the analytic germs.
pub const CITATIONS: &[(&str, &str)] = &[
    ("denjoy-carleman", "T0 is injective on E(M) iff sum_j M_j/((j+1) M_{j+1}) = infinity."),
    ("carleman-nonsurjective", "E(M) quasianalytic and O != E(M) => T0: E(M) -> F(M) not onto."),
    (
        "petzsche",
        "O != E(M) => (T0: E(M) -> F(M) onto <=> exists C, all k: sum_{j>=k} M_j/((j+1) M_{j+1}) <= C M_k/M_{k+1}).",
    ),
    (
        "formal-noetherian",
        "Equivalent for F(M): stable under derivation; division by strictly regular divisors; noetherian.",
    ),
    (
        "general-division-fails",
        "O != E(M) => neither E(M) nor F(M) admits division by every regular divisor (witness y^2 + x).",
    ),
    ("childress", "E(M) quasianalytic, O != E(M), division by distinguished phi holds => phi hyperbolic."),
    ("hyperbolic-division", "E(M) stable under derivation, phi hyperbolic distinguished => division by phi holds."),
    (
        "quasianalytic-division",
        "E(M) quasianalytic, derivation-stable, O != E(M), phi distinguished => (division by phi <=> phi hyperbolic).",
    ),
    ("isolated-zero-division", "M strongly regular, X_phi = {0}, tau(phi) = 1 => division by phi holds in E(M)."),
    (
        "closed-generators",
        "E(M) derivation-stable => phi E(M) closed when phi is a monomial, a homogeneous polynomial whose only \
         real critical point near 0 is 0, or a hyperbolic polynomial.",
    ),
    ("isolated-zero-closedness", "M strongly regular, X_phi = {0} => (phi E(M) closed <=> tau(phi) = 1)."),
    ("planar-closedness", "n = 2, M strongly regular => (phi E_2(M) closed <=> d(phi) = 1)."),
    (
        "flat-inclusion",
        "M strongly regular, X_phi = {0}, s >= 1 => (flat germs lie in phi E(M^s) <=> s >= tau(phi)).",
    ),
    (
        "closedness-open",
        "Quasianalytic E(M) outside the closed-generator cases: closedness of phi E(M) is unsettled (y^2 + x^4 included).",
    ),
    ("noetherian-open", "Quasianalytic E(M): noetherianity is unsettled."),
];

/// Statement stored under `tag`.
pub fn citation(tag: &str) -> Option<&'static str> {
    CITATIONS.iter().find(|(t, _)| *t == tag).map(|(_, s)| *s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Citation {
    pub tag: String,
    pub statement: String,
}

impl Citation {
    fn of(tag: &str) -> Citation {
        Citation {
            tag: tag.to_string(),
            statement: citation(tag).unwrap_or_else(|| panic!("unregistered citation {tag}")).to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    pub rule: String,
    pub conclusion: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub question: String,
    pub verdict: Verdict,
    /// Applied rules, highest priority first.
    pub rules: Vec<RuleApplication>,
    /// Rules whose hypotheses hold on the sequence but depend on an
    /// undecided divisor fact.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    pub citations: Vec<Citation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorelQuestion {
    Injective,
    Surjective,
}

/// What is known about a divisor `φ` at the origin of `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorFacts {
    pub n: usize,
    pub is_monomial: bool,
    pub is_distinguished: bool,
    pub is_hyperbolic: Tri,
    pub is_homogeneous_isolated_critical: Tri,
    pub isolated_real_zero: Tri,
    #[serde(serialize_with = "ser_opt_q")]
    pub d: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    pub tau: Option<Q>,
    pub regular_order: Option<u32>,
    pub strictly_regular: Option<bool>,
}

fn ser_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&fmt_q(q)),
        None => s.serialize_none(),
    }
}

impl DivisorFacts {
    /// Facts with nothing known beyond the dimension.
    pub fn unknown(n: usize) -> DivisorFacts {
        DivisorFacts {
            n,
            is_monomial: false,
            is_distinguished: false,
            is_hyperbolic: Tri::Inconclusive,
            is_homogeneous_isolated_critical: Tri::Inconclusive,
            isolated_real_zero: Tri::Inconclusive,
            d: None,
            tau: None,
            regular_order: None,
            strictly_regular: None,
        }
    }

    /// Reject fact bundles no divisor can have.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CoreError::InconsistentFacts(m.to_string()));
        if self.n == 0 {
            return bad("dimension must be positive");
        }
        if let (Some(d), Some(t)) = (&self.d, &self.tau) {
            if t > d {
                return bad("tau exceeds d");
            }
            if self.n == 2 && self.isolated_real_zero.is_true() && t != d {
                return bad("isolated real zero in the plane forces tau = d");
            }
        }
        if self.tau.as_ref().is_some_and(|t| *t < Q::one()) || self.d.as_ref().is_some_and(|d| *d <= Q::zero()) {
            return bad("exponents out of range");
        }
        if self.n != 2 && self.d.is_some() {
            return bad("d is defined for plane germs only");
        }
        // on the line the complex and real zero sets agree near 0
        if self.n == 1 && self.tau.as_ref().is_some_and(|t| !t.is_one()) {
            return bad("tau = 1 for every germ of one variable");
        }
        if self.is_hyperbolic.is_true() && !self.is_distinguished {
            return bad("hyperbolicity is defined for distinguished polynomials only");
        }
        if self.n >= 2 && self.isolated_real_zero.is_true() {
            if self.is_hyperbolic.is_true() {
                return bad("a hyperbolic polynomial has real roots on every fiber, so its zero is not isolated");
            }
            if self.is_monomial {
                return bad("a monomial vanishes on coordinate hyperplanes");
            }
        }
        // homogeneous with isolated critical point: the complex zero set is a
        // cone meeting R^n only at 0, hence separated linearly
        if self.is_homogeneous_isolated_critical.is_true()
            && self.isolated_real_zero.is_true()
            && self.tau.as_ref().is_some_and(|t| !t.is_one())
        {
            return bad("homogeneous isolated critical point with isolated zero forces tau = 1");
        }
        if self.n == 2
            && self.d.as_ref().is_some_and(|d| !d.is_one())
            && (self.is_monomial || self.is_hyperbolic.is_true() || self.is_homogeneous_isolated_critical.is_true())
        {
            return bad("monomials, hyperbolic polynomials and binary forms without repeated real factors have d = 1");
        }
        Ok(())
    }
}

fn not(t: Tri) -> Tri {
    match t {
        Tri::True => Tri::False,
        Tri::False => Tri::True,
        Tri::Inconclusive => Tri::Inconclusive,
    }
}

fn or(a: Tri, b: Tri) -> Tri {
    not(not(a).and(not(b)))
}

fn eq_one(v: &Option<Q>) -> Tri {
    match v {
        Some(q) => Tri::from_bool(q.is_one()),
        None => Tri::Inconclusive,
    }
}

#[derive(Clone, Copy)]
enum Outcome {
    Fixed(Verdict),
    /// Holds or fails as a sequence flag.
    IffSeq(Tri),
    /// Holds or fails as a divisor fact.
    IffFact(Tri),
}

struct Rule {
    tag: &'static str,
    seq: Tri,
    facts: Tri,
    outcome: Outcome,
}

fn rule(tag: &'static str, seq: Tri, facts: Tri, outcome: Outcome) -> Rule {
    Rule { tag, seq, facts, outcome }
}

fn flag(f: &Flag) -> Tri {
    f.value
}

fn evaluate(question: &str, rules: Vec<Rule>, fallback: Option<(&'static str, String)>) -> Result<DecisionReport> {
    let mut applied: Vec<RuleApplication> = Vec::new();
    let mut skipped = Vec::new();
    for r in rules {
        let live = match (r.seq, r.facts) {
            (Tri::False, _) | (_, Tri::False) => continue,
            (Tri::Inconclusive, _) => {
                return Err(CoreError::InconclusiveInput(format!(
                    "sequence flags consulted by rule {} are unresolved",
                    r.tag
                )))
            }
            (Tri::True, Tri::True) => true,
            (Tri::True, Tri::Inconclusive) => false,
        };
        if !live {
            skipped.push(r.tag.to_string());
            continue;
        }
        let conclusion = match r.outcome {
            Outcome::Fixed(v) => v,
            Outcome::IffSeq(t) => match t.resolved() {
                Some(b) => if b { Verdict::Holds } else { Verdict::Fails },
                None => {
                    return Err(CoreError::InconclusiveInput(format!(
                        "sequence flag deciding rule {} is unresolved",
                        r.tag
                    )))
                }
            },
            Outcome::IffFact(t) => match t.resolved() {
                Some(b) => if b { Verdict::Holds } else { Verdict::Fails },
                None => {
                    skipped.push(r.tag.to_string());
                    continue;
                }
            },
        };
        applied.push(RuleApplication { rule: r.tag.to_string(), conclusion, note: None });
    }
    let decided: Vec<RuleApplication> = applied.iter().filter(|a| a.conclusion != Verdict::Unknown).cloned().collect();
    if let Some(first) = decided.first() {
        if let Some(other) = decided.iter().find(|a| a.conclusion != first.conclusion) {
            return Err(CoreError::InconsistentFacts(format!(
                "rules {} and {} disagree",
                first.rule, other.rule
            )));
        }
    }
    let mut note = None;
    if decided.is_empty() {
        if let Some((tag, why)) = fallback {
            applied.push(RuleApplication { rule: tag.to_string(), conclusion: Verdict::Unknown, note: Some(why) });
        } else {
            note = Some("no rule applies".to_string());
        }
    }
    let verdict = decided.first().map(|a| a.conclusion).unwrap_or(Verdict::Unknown);
    let citations = applied
        .iter()
        .filter(|a| citation(&a.rule).is_some())
        .map(|a| Citation::of(&a.rule))
        .collect();
    Ok(DecisionReport {
        question: question.to_string(),
        verdict,
        rules: applied,
        skipped,
        citations,
        note,
    })
}

pub fn decide_borel(report: &SequenceReport, question: BorelQuestion) -> Result<DecisionReport> {
    let qa = flag(&report.quasianalytic);
    let ac = flag(&report.analytic_class);
    match question {
        BorelQuestion::Injective => evaluate("borel-injective", vec![rule("denjoy-carleman", Tri::True, Tri::True, Outcome::IffSeq(qa))], None),
        BorelQuestion::Surjective => {
            let mut out = evaluate(
                "borel-surjective",
                vec![
                    rule("carleman-nonsurjective", qa.and(not(ac)), Tri::True, Outcome::Fixed(Verdict::Fails)),
                    rule("petzsche", not(ac), Tri::True, Outcome::IffSeq(flag(&report.strongly_non_quasianalytic))),
                ],
                None,
            )?;
            if ac.is_true() {
                out.note = Some("the class is the analytic one; no rule covers it".into());
            }
            Ok(out)
        }
    }
}

/// The three equivalent properties of the formal ring share one verdict.
pub fn decide_formal_noetherian(report: &SequenceReport) -> Result<DecisionReport> {
    evaluate(
        "formal-noetherian",
        vec![rule("formal-noetherian", Tri::True, Tri::True, Outcome::IffSeq(flag(&report.derivation_stable)))],
        None,
    )
}

/// Division by every regular divisor, as opposed to a given one.
pub fn decide_general_division(report: &SequenceReport) -> Result<DecisionReport> {
    let mut out = evaluate(
        "general-division",
        vec![rule("general-division-fails", not(flag(&report.analytic_class)), Tri::True, Outcome::Fixed(Verdict::Fails))],
        None,
    )?;
    if report.analytic_class.value.is_true() {
        out.note = Some("the class is the analytic one; no rule covers it".into());
    }
    Ok(out)
}

/// Noetherianity of the germ ring itself: never decided.
pub fn decide_ring_noetherian(report: &SequenceReport) -> Result<DecisionReport> {
    let qa = flag(&report.quasianalytic);
    let fallback = qa
        .is_true()
        .then(|| ("noetherian-open", "unsettled for quasianalytic classes".to_string()));
    evaluate("ring-noetherian", vec![], fallback)
}

pub fn decide_division(report: &SequenceReport, facts: &DivisorFacts) -> Result<DecisionReport> {
    facts.validate()?;
    let qa = flag(&report.quasianalytic);
    let ac = flag(&report.analytic_class);
    let ds = flag(&report.derivation_stable);
    let sr = flag(&report.strongly_regular);
    let dist = Tri::from_bool(facts.is_distinguished);
    let hyp = facts.is_hyperbolic;
    evaluate(
        "division",
        vec![
            rule("quasianalytic-division", qa.and(not(ac)).and(ds), dist, Outcome::IffFact(hyp)),
            rule("childress", qa.and(not(ac)), dist.and(not(hyp)), Outcome::Fixed(Verdict::Fails)),
            rule("hyperbolic-division", ds, hyp, Outcome::Fixed(Verdict::Holds)),
            rule(
                "isolated-zero-division",
                sr,
                facts.isolated_real_zero.and(eq_one(&facts.tau)),
                Outcome::Fixed(Verdict::Holds),
            ),
        ],
        None,
    )
}

pub fn decide_closedness(report: &SequenceReport, facts: &DivisorFacts) -> Result<DecisionReport> {
    facts.validate()?;
    let ds = flag(&report.derivation_stable);
    let sr = flag(&report.strongly_regular);
    let qa = flag(&report.quasianalytic);
    let generator = or(
        Tri::from_bool(facts.is_monomial),
        or(facts.is_homogeneous_isolated_critical, facts.is_hyperbolic),
    );
    let fallback = qa
        .is_true()
        .then(|| ("closedness-open", "quasianalytic class outside the known closed cases".to_string()));
    evaluate(
        "closedness",
        vec![
            rule("closed-generators", ds, generator, Outcome::Fixed(Verdict::Holds)),
            rule("isolated-zero-closedness", sr, facts.isolated_real_zero, Outcome::IffFact(eq_one(&facts.tau))),
            rule("planar-closedness", sr, Tri::from_bool(facts.n == 2), Outcome::IffFact(eq_one(&facts.d))),
        ],
        fallback,
    )
}

/// Whether the flat germs lie in `φ E(M^s)`.
pub fn decide_flat_inclusion(report: &SequenceReport, facts: &DivisorFacts, s: &Q) -> Result<DecisionReport> {
    facts.validate()?;
    if *s < Q::one() {
        return Err(CoreError::Domain(format!("s must be at least 1, got {}", fmt_q(s))));
    }
    let ge = match &facts.tau {
        Some(t) => Tri::from_bool(s >= t),
        None => Tri::Inconclusive,
    };
    evaluate(
        "flat-inclusion",
        vec![rule("flat-inclusion", flag(&report.strongly_regular), facts.isolated_real_zero, Outcome::IffFact(ge))],
        None,
    )
}

// ---------------------------------------------------------------------------
// Facts from a plane polynomial

/// Homogeneous with 0 as its only real critical point. Binary forms only;
/// other inputs are undecided.
fn homogeneous_isolated_critical(phi: &MultiPoly<Q>) -> Tri {
    let k = phi.total_degree().unwrap_or(0);
    if phi.terms().keys().any(|e| e.iter().sum::<u32>() != k) {
        return Tri::False;
    }
    if k < 2 {
        // constant or linear: 0 is not a critical point at all
        return Tri::False;
    }
    let fx = phi.derivative(0);
    let fy = phi.derivative(1);
    let zero = [Q::one(), Q::zero()];
    if fx.eval(&zero).unwrap_or_default().is_zero() && fy.eval(&zero).unwrap_or_default().is_zero() {
        return Tri::False;
    }
    // affine chart y = 1: common real roots of fx(t, 1), fy(t, 1)
    let chart = |p: &MultiPoly<Q>| p.eval_var(1, &Q::one()).to_univariate(0);
    match (chart(&fx), chart(&fy)) {
        (Some(a), Some(b)) => {
            let g = qal_algebra::UniPoly::gcd(&a, &b);
            Tri::from_bool(g.is_zero() || count_real_roots(&g) == 0)
        }
        _ => Tri::Inconclusive,
    }
}

/// Facts about `φ(x, y)`, with `y` the distinguished variable. A constant
/// leading coefficient in `y` is scaled away since units do not change the
/// questions asked.
pub fn facts_from_poly(phi: &MultiPoly<Q>) -> Result<DivisorFacts> {
    if phi.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    let vars = vars_of(&["x", "y"]);
    if let Some(v) = phi.used_vars().iter().find(|v| !vars.contains(v)) {
        return Err(CoreError::Unsupported(format!("plane divisors in x, y only; found {v}")));
    }
    let mut phi = phi.with_vars(&vars);
    let cs = phi.coeffs_in(1);
    if let Some(lead) = cs.last().filter(|c| c.total_degree() == Some(0)) {
        let c = lead.any_coeff().cloned().unwrap();
        phi = phi.scale(&(Q::one() / c));
    }
    let mut facts = DivisorFacts::unknown(2);
    facts.is_monomial = phi.terms().len() == 1;
    facts.is_homogeneous_isolated_critical = homogeneous_isolated_critical(&phi);
    let dist = DistinguishedPoly::from_poly(&phi, "y").ok();
    facts.is_distinguished = dist.is_some();
    facts.is_hyperbolic = match &dist {
        None => Tri::False,
        Some(p) => match hyperbolic_check_2d(p, Side::Both).map(|r| r.verdict) {
            Ok(HyperbolicVerdict::Hyperbolic) => Tri::True,
            Ok(HyperbolicVerdict::NotHyperbolic) => Tri::False,
            _ => Tri::Inconclusive,
        },
    };
    facts.regular_order = regular_order(&phi, 1)?;
    if let Some(d) = facts.regular_order {
        facts.strictly_regular = Some(strictly_regular_check(&phi, 1, d, None)?);
    }
    if phi.coeff(&[0, 0]).is_some() {
        // a unit: no zero at the origin
        facts.isolated_real_zero = Tri::False;
    } else if let Ok(rep) = d_exponent(&phi, &PuiseuxOptions::default()) {
        facts.isolated_real_zero = Tri::from_bool(rep.isolated_real_zero);
        facts.d = Some(rep.d);
        facts.tau = rep.tau;
    }
    facts.validate()?;
    Ok(facts)
}
