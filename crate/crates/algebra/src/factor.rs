//! Factorization over the rationals (Zassenhaus: modular factorization,
//! quadratic Hensel lifting, subset recombination).

use crate::rational::{qb, Q};
use crate::unipoly::UniPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Fp = Vec<u64>;

fn fp_norm(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_deg(a: &Fp) -> isize {
    a.len() as isize - 1
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (p as i128, (a % p) as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    assert_eq!(r, 1, "not invertible mod p");
    t.rem_euclid(p as i128) as u64
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_norm(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    fp_norm(c)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let t = r[k + db] * inv % p;
        if t == 0 {
            continue;
        }
        for (i, &y) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - t * y % p) % p;
        }
        q[k] = t;
    }
    r.truncate(db);
    (fp_norm(q), fp_norm(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// `(s, t)` with `s a + t b = 1` for coprime inputs.
fn fp_ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    assert_eq!(r0.len(), 1, "inputs not coprime mod p");
    let inv = inv_mod(r0[0], p);
    let sc = |v: &Fp| fp_norm(v.iter().map(|&x| x * inv % p).collect());
    (sc(&s0), sc(&t0))
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc = vec![1u64];
    let b = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

fn fp_deriv(a: &Fp, p: u64) -> Fp {
    fp_norm(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| (i as u64 % p) * x % p)
            .collect(),
    )
}

fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut fs = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1;
    while fp_deg(&fs) >= 2 * d as isize {
        h = fp_powmod(&h, &pb, &fs, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &fs, p);
        if g.len() > 1 {
            fs = fp_divrem(&fs, &g, p).0;
            h = fp_divrem(&h, &fs, p).1;
            out.push((g, d));
        }
        d += 1;
    }
    if fs.len() > 1 {
        let dd = fs.len() - 1;
        out.push((fp_monic(&fs, p), dd));
    }
    out
}

fn equal_degree(g: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.clone()];
    }
    let e = (num_traits::pow(BigUint::from(p), d) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a: Fp = fp_norm((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let mut b = fp_gcd(&a, g, p);
        if b.len() == 1 {
            let c = fp_powmod(&a, &e, g, p);
            b = fp_gcd(&fp_sub(&c, &vec![1u64], p), g, p);
        }
        if b.len() > 1 && b.len() < g.len() {
            let other = fp_monic(&fp_divrem(g, &b, p).0, p);
            let mut out = equal_degree(&b, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &Fp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|k| k * k <= n).all(|k| n % k != 0))
}

// Integer polynomial helpers modulo m (residues in [0, m)).

type Zp = Vec<BigInt>;

fn z_norm(mut a: Zp) -> Zp {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn z_mod(a: &Zp, m: &BigInt) -> Zp {
    z_norm(a.iter().map(|x| x.mod_floor(m)).collect())
}

fn z_add(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    z_norm(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn z_sub(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    z_norm(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn z_mul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    z_mod(&c, m)
}

/// Division by a monic polynomial modulo `m`.
fn z_divrem_monic(a: &Zp, b: &Zp, m: &BigInt) -> (Zp, Zp) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), z_mod(&r, m));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let t = r[k + db].mod_floor(m);
        if t.is_zero() {
            continue;
        }
        for (i, y) in b.iter().enumerate() {
            r[k + i] = (&r[k + i] - &t * y).mod_floor(m);
        }
        q[k] = t;
    }
    r.truncate(db);
    (z_norm(q), z_mod(&r, m))
}

fn to_zp(a: &Fp) -> Zp {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// One quadratic Hensel step from modulus `m` to `m^2`.
fn hensel_step(f: &Zp, g: &Zp, h: &Zp, s: &Zp, t: &Zp, m: &BigInt) -> (Zp, Zp, Zp, Zp) {
    let m2 = m * m;
    let e = z_sub(f, &z_mul(g, h, &m2), &m2);
    let (q, r) = z_divrem_monic(&z_mul(s, &e, &m2), h, &m2);
    let g2 = z_add(&z_add(g, &z_mul(t, &e, &m2), &m2), &z_mul(&q, g, &m2), &m2);
    let h2 = z_add(h, &r, &m2);
    let b = z_sub(
        &z_add(&z_mul(s, &g2, &m2), &z_mul(t, &h2, &m2), &m2),
        &vec![BigInt::one()],
        &m2,
    );
    let (c, d) = z_divrem_monic(&z_mul(s, &b, &m2), &h2, &m2);
    let s2 = z_sub(s, &d, &m2);
    let t2 = z_sub(&z_sub(t, &z_mul(t, &b, &m2), &m2), &z_mul(&c, &g2, &m2), &m2);
    (g2, h2, s2, t2)
}

/// Lift `f = lc * prod(factors) mod p` to monic factors modulo `p^(2^l)`.
fn multi_lift(f: &Zp, factors: &[Fp], p: u64, levels: u32) -> Vec<Zp> {
    let big_m = num_traits::pow(BigInt::from(p), 1usize << levels);
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        let inv = mod_inverse(&lc, &big_m);
        return vec![z_mod(&f.iter().map(|x| x * &inv).collect(), &big_m)];
    }
    let half = factors.len() / 2;
    let (fa, fb) = factors.split_at(half);
    let pb = BigInt::from(p);
    let lc_p = lc.mod_floor(&pb).to_u64().unwrap();
    let mut g0: Fp = vec![lc_p];
    for a in fa {
        g0 = fp_mul(&g0, a, p);
    }
    let mut h0: Fp = vec![1];
    for b in fb {
        h0 = fp_mul(&h0, b, p);
    }
    let (s0, t0) = fp_ext_gcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (to_zp(&g0), to_zp(&h0), to_zp(&s0), to_zp(&t0));
    let mut m = pb;
    for _ in 0..levels {
        let fm = z_mod(f, &(&m * &m));
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = multi_lift(&g, fa, p, levels);
    out.extend(multi_lift(&h, fb, p, levels));
    out
}

fn symmetric(a: &Zp, m: &BigInt) -> Zp {
    let half = m / 2;
    a.iter()
        .map(|x| {
            let r = x.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn content(a: &Zp) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(a: &Zp) -> Zp {
    let c = content(a);
    let mut v: Zp = a.iter().map(|x| x / &c).collect();
    if v.last().is_some_and(|x| x.is_negative()) {
        v = v.iter().map(|x| -x).collect();
    }
    v
}

fn zq(a: &Zp) -> UniPoly<Q> {
    UniPoly::new(a.iter().map(|x| qb(x.clone())).collect())
}

fn exact_div_z(a: &Zp, b: &Zp) -> Option<Zp> {
    let (q, r) = zq(a).divrem(&zq(b));
    if !r.is_zero() {
        return None;
    }
    q.coeffs()
        .iter()
        .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of a primitive squarefree integer polynomial.
fn factor_squarefree_z(f: &Zp, rng: &mut ChaCha8Rng) -> Vec<Zp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![primitive(f)];
    }
    if f[0].is_zero() {
        let mut rest = f[1..].to_vec();
        rest = z_norm(rest);
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_squarefree_z(&rest, rng));
        return out;
    }
    let lc = f[n].clone();
    // Pick the admissible prime with the fewest modular factors among a few.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp: Fp = fp_norm(
            f.iter()
                .map(|x| x.mod_floor(&BigInt::from(p)).to_u64().unwrap())
                .collect(),
        );
        let fpm = fp_monic(&fp, p);
        if fp_gcd(&fpm, &fp_deriv(&fpm, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fpm, p, rng);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 || best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (p, facs) = best.expect("some prime is admissible");
    if facs.len() == 1 {
        return vec![primitive(f)];
    }
    // Coefficient bound for factors (Mignotte), doubled for the sign.
    let maxc = f.iter().map(|x| x.abs()).max().unwrap();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc;
    let mut levels = 0u32;
    let pb = BigInt::from(p);
    while num_traits::pow(pb.clone(), 1usize << levels) <= bound {
        levels += 1;
    }
    let m = num_traits::pow(pb, 1usize << levels);
    let lifted = multi_lift(f, &facs, p, levels);

    let mut remaining: Vec<Zp> = lifted;
    let mut cur = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for subset in combinations(remaining.len(), s) {
            let clc = cur.last().unwrap().clone();
            let mut cand: Zp = vec![clc];
            for &i in &subset {
                cand = z_mul(&cand, &remaining[i], &m);
            }
            let cand = primitive(&symmetric(&cand, &m));
            if !cur[0].is_zero() && !cand[0].is_zero() && !(&cur[0] % &cand[0]).is_zero() {
                continue;
            }
            if let Some(qt) = exact_div_z(&cur, &cand) {
                found = Some((subset, cand, qt));
                break;
            }
        }
        match found {
            Some((subset, cand, qt)) => {
                out.push(cand);
                cur = qt;
                let mut keep = Vec::new();
                for (i, r) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(r);
                    }
                }
                remaining = keep;
            }
            None => s += 1,
        }
    }
    if cur.len() > 1 {
        out.push(primitive(&cur));
    }
    out
}

/// Monic irreducible factors over Q with multiplicities, sorted by degree
/// and then coefficients. Constants are dropped.
pub fn factor_q(p: &UniPoly<Q>) -> Vec<(UniPoly<Q>, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, mult) in p.squarefree_decomposition() {
        let den = g
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let zi: Zp = g
            .coeffs()
            .iter()
            .map(|c| (c * qb(den.clone())).to_integer())
            .collect();
        let zi = primitive(&zi);
        for h in factor_squarefree_z(&zi, &mut rng) {
            out.push((zq(&h).monic(), mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

pub fn is_irreducible(p: &UniPoly<Q>) -> bool {
    let f = factor_q(p);
    f.len() == 1 && f[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> UniPoly<Q> {
        UniPoly::from_ints(c)
    }

    fn product(f: &[(UniPoly<Q>, u32)]) -> UniPoly<Q> {
        f.iter()
            .fold(p(&[1]), |acc, (g, m)| acc.mul(&g.pow(*m)))
    }

    #[test]
    fn classic_cases() {
        // x^4 + 1 is irreducible over Q but splits mod every prime.
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1])));
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let f = factor_q(&p(&[-1, 0, 0, 0, 1]));
        assert_eq!(f.len(), 3);
        assert_eq!(product(&f), p(&[-1, 0, 0, 0, 1]));
        // Swinnerton-Dyer style: x^4 - 10x^2 + 1 irreducible.
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
        // (2x - 1)^2 (3x^2 + 1) x
        let g = p(&[-1, 2]).pow(2).mul(&p(&[1, 0, 3])).mul(&p(&[0, 1]));
        let f = factor_q(&g);
        assert_eq!(f.len(), 3);
        assert_eq!(product(&f).scale(&q(12, 1)), g);
    }

    #[test]
    fn higher_degree_recombination() {
        // (x^3 - 2)(x^3 + x + 1)(x^2 - 3)(x - 5)
        let g = p(&[-2, 0, 0, 1])
            .mul(&p(&[1, 1, 0, 1]))
            .mul(&p(&[-3, 0, 1]))
            .mul(&p(&[-5, 1]));
        let f = factor_q(&g);
        let degs: Vec<isize> = f.iter().map(|(h, _)| h.deg()).collect();
        assert_eq!(degs, vec![1, 2, 3, 3]);
        assert_eq!(product(&f), g);
    }
}
