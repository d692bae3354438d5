//! Real roots of rational polynomials via Sturm sequences.

use crate::interval::Interval;
use crate::rational::{qi, Q};
use crate::unipoly::UniPoly;
use num_traits::{One, Signed, Zero};

pub fn sign_at(p: &UniPoly<Q>, x: &Q) -> i32 {
    let v = p.eval(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Interval enclosure of `p` over `x` by Horner evaluation.
pub fn eval_interval(p: &UniPoly<Q>, x: &Interval, prec: u32) -> Interval {
    let mut acc = Interval::zero();
    for a in p.coeffs().iter().rev() {
        acc = acc.mul(x).add_q(a).round(prec);
    }
    acc
}

/// Standard Sturm chain `p, p', -rem, ...`.
pub fn sturm_sequence(p: &UniPoly<Q>) -> Vec<UniPoly<Q>> {
    let mut seq = vec![p.clone()];
    if p.deg() < 1 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

pub fn sign_changes_at(seq: &[UniPoly<Q>], x: &Q) -> usize {
    changes(seq.iter().map(|p| sign_at(p, x)))
}

/// Sign changes at `+inf` (`positive`) or `-inf`.
pub fn sign_changes_at_inf(seq: &[UniPoly<Q>], positive: bool) -> usize {
    changes(seq.iter().map(|p| {
        let l = match p.lc() {
            None => return 0,
            Some(l) => l,
        };
        let s = if l.is_positive() { 1 } else { -1 };
        if positive || p.deg() % 2 == 0 {
            s
        } else {
            -s
        }
    }))
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_in(seq: &[UniPoly<Q>], a: &Q, b: &Q) -> usize {
    sign_changes_at(seq, a) - sign_changes_at(seq, b)
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &UniPoly<Q>) -> usize {
    if p.deg() < 1 {
        return 0;
    }
    let seq = sturm_sequence(p);
    sign_changes_at_inf(&seq, false) - sign_changes_at_inf(&seq, true)
}

/// `1 + max |a_i / a_n|`, a strict bound on root moduli.
pub fn cauchy_bound(p: &UniPoly<Q>) -> Q {
    let l = p.lc().expect("nonzero polynomial").abs();
    let mut m = Q::zero();
    for a in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = a.abs() / &l;
        if r > m {
            m = r;
        }
    }
    m + Q::one()
}

/// A real root inside `(lo, hi]`, exact when `lo == hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: Q,
    pub hi: Q,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// Bisect until the width is at most `w`; `p` must be squarefree.
    pub fn refine(&mut self, p: &UniPoly<Q>, w: &Q) {
        if self.is_exact() {
            return;
        }
        if sign_at(p, &self.hi) == 0 {
            self.lo = self.hi.clone();
            return;
        }
        let shi = sign_at(p, &self.hi);
        while &(&self.hi - &self.lo) > w {
            let mid = (&self.lo + &self.hi) / qi(2);
            let sm = sign_at(p, &mid);
            if sm == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if sm == shi {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }
}

/// Isolating intervals for the distinct real roots, in increasing order.
pub fn isolate_real_roots(p: &UniPoly<Q>) -> Vec<RealRoot> {
    if p.deg() < 1 {
        return Vec::new();
    }
    let sp = p.squarefree_part();
    let seq = sturm_sequence(&sp);
    let b = cauchy_bound(&sp);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((a, c)) = stack.pop() {
        let n = count_in(&seq, &a, &c);
        if n == 0 {
            continue;
        }
        if n == 1 {
            let mut r = RealRoot { lo: a, hi: c };
            if sign_at(&sp, &r.hi) == 0 {
                r.lo = r.hi.clone();
            }
            out.push(r);
            continue;
        }
        let m = (&a + &c) / qi(2);
        stack.push((a, m.clone()));
        stack.push((m, c));
    }
    out.sort_by(|x, y| x.hi.cmp(&y.hi));
    out
}
