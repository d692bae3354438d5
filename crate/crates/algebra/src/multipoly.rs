//! Sparse multivariate polynomials with named variables.

use crate::field::Field;
use crate::rational::{qi, Q};
use crate::unipoly::UniPoly;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Canonical variable order: `mu1 < mu2 < ... < x < x1 < x2 < ... < y < z`.
pub fn var_cmp(a: &str, b: &str) -> Ordering {
    fn key(s: &str) -> (String, u64, bool) {
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (head, tail) = s.split_at(split);
        match tail.parse::<u64>() {
            Ok(n) => (head.to_string(), n, true),
            Err(_) => (s.to_string(), 0, false),
        }
    }
    let (ha, na, da) = key(a);
    let (hb, nb, db) = key(b);
    ha.cmp(&hb).then(da.cmp(&db)).then(na.cmp(&nb))
}

pub fn sort_vars(v: &mut Vec<String>) {
    v.sort_by(|a, b| var_cmp(a, b));
    v.dedup();
}

#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<F> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: F) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, c: F) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// The variable `name`, which must be in `vars`.
    pub fn var(vars: &[String], name: &str, one: F) -> Self {
        let i = vars.iter().position(|v| v == name).expect("variable not in list");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, one)
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: F) {
        debug_assert_eq!(exps.len(), self.vars.len());
        if c.is_zero_elem() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(old) => {
                let s = old.plus(&c);
                if s.is_zero_elem() {
                    self.terms.remove(&exps);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, F> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&F> {
        self.terms.get(exps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn any_coeff(&self) -> Option<&F> {
        self.terms.values().next()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree of a term (order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Re-express over `vars`, a superset of the current variables.
    pub fn with_vars(&self, vars: &[String]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable dropped"))
            .collect();
        let mut p = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] = k;
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    fn unify(&self, o: &Self) -> (Self, Self) {
        if self.vars == o.vars {
            return (self.clone(), o.clone());
        }
        let mut v = self.vars.clone();
        v.extend(o.vars.iter().cloned());
        sort_vars(&mut v);
        (self.with_vars(&v), o.with_vars(&v))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = self.unify(o);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.unify(o);
        let mut p = Self::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                p.add_term(e, ca.times(cb));
            }
        }
        p
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a.times(c));
        }
        p
    }

    pub fn pow(&self, k: u32, one: &F) -> Self {
        let mut acc = Self::constant(&self.vars, one.one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Self::from_terms(
            &self.vars,
            self.terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Coefficients of powers of variable `i` (each free of that variable).
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.vars); d + 1];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut ne = e.clone();
            ne[i] = 0;
            out[k].add_term(ne, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// `sum_k c_k v_i^k`.
    pub fn from_coeffs_in(vars: &[String], i: usize, cs: &[Self]) -> Self {
        let mut p = Self::zero(vars);
        for (k, c) in cs.iter().enumerate() {
            for (e, a) in &c.with_vars(vars).terms {
                let mut ne = e.clone();
                ne[i] += k as u32;
                p.add_term(ne, a.clone());
            }
        }
        p
    }

    /// Substitute a polynomial for variable `i`.
    pub fn subst(&self, i: usize, g: &Self) -> Self {
        let cs = self.coeffs_in(i);
        let mut acc = Self::zero(&self.vars);
        for c in cs.iter().rev() {
            acc = acc.mul(g).add(c);
        }
        acc
    }

    /// Substitute a constant for variable `i`.
    pub fn eval_var(&self, i: usize, v: &F) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..e[i] {
                t = t.times(v);
            }
            let mut ne = e.clone();
            ne[i] = 0;
            p.add_term(ne, t);
        }
        p
    }

    /// Full evaluation at a point (one value per variable).
    pub fn eval(&self, pt: &[F]) -> Option<F> {
        let mut acc: Option<F> = None;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &n) in e.iter().enumerate() {
                for _ in 0..n {
                    t = t.times(&pt[k]);
                }
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.plus(&t),
            });
        }
        acc.or_else(|| pt.first().map(|x| x.zero_like()))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            p.add_term(ne, c.scaled_q(&qi(e[i] as i64)));
        }
        p
    }

    pub fn map_coeffs<G: Field>(&self, m: impl Fn(&F) -> G) -> MultiPoly<G> {
        MultiPoly::from_terms(&self.vars, self.terms.iter().map(|(e, c)| (e.clone(), m(c))))
    }

    /// Univariate view when only variable `i` occurs.
    pub fn to_univariate(&self, i: usize) -> Option<UniPoly<F>> {
        let cs = self.coeffs_in(i);
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            if c.is_zero() {
                match self.any_coeff() {
                    Some(a) => out.push(a.zero_like()),
                    None => return Some(UniPoly::zero()),
                }
            } else if c.total_degree() == Some(0) {
                out.push(c.terms.values().next().unwrap().clone());
            } else {
                return None;
            }
        }
        Some(UniPoly::new(out))
    }

    pub fn from_univariate(vars: &[String], i: usize, u: &UniPoly<F>) -> Self {
        let mut p = Self::zero(vars);
        for (k, c) in u.coeffs().iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }
}

impl MultiPoly<Q> {
    pub fn var_q(vars: &[String], name: &str) -> Self {
        Self::var(vars, name, qi(1))
    }

    pub fn constant_q(vars: &[String], c: Q) -> Self {
        Self::constant(vars, c)
    }
}

pub fn vars_of(names: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    sort_vars(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering() {
        let mut v = vec!["y".to_string(), "x2".into(), "x".into(), "mu1".into(), "x10".into()];
        sort_vars(&mut v);
        assert_eq!(v, vec!["mu1", "x", "x2", "x10", "y"]);
    }

    #[test]
    fn algebra() {
        let v = vars_of(&["x", "y"]);
        let x = MultiPoly::var_q(&v, "x");
        let y = MultiPoly::var_q(&v, "y");
        let p = x.add(&y).pow(2, &qi(1));
        assert_eq!(p.coeff(&[1, 1]), Some(&qi(2)));
        assert_eq!(p.total_degree(), Some(2));
        let s = p.subst(0, &y.neg());
        assert!(s.is_zero());
        let d = p.derivative(1);
        assert_eq!(d, x.add(&y).scale(&qi(2)));
        let cs = p.coeffs_in(1);
        assert_eq!(MultiPoly::from_coeffs_in(&v, 1, &cs), p);
    }
}
