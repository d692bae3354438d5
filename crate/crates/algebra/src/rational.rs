//! Helpers around `BigRational`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qb(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    f
}

/// Falling factorial `a (a-1) ... (a-j+1)`.
pub fn falling(a: u64, j: u64) -> BigInt {
    let mut f = BigInt::one();
    for t in 0..j {
        f *= a - t;
    }
    f
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn pow_i(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn pow2(e: i64) -> Q {
    if e >= 0 {
        qb(BigInt::one() << e as usize)
    } else {
        Q::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Parses `"3"`, `"-3/4"`, `"0.25"` or `"-1.5"`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_int(n.trim())?;
        let d: BigInt = parse_int(d.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !ip_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            ip_digits.parse::<BigInt>().ok()?
        };
        let frac: BigInt = fp.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(whole * &den + frac, den);
        return Some(if neg { -v } else { v });
    }
    Some(qb(parse_int(s)?))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `p` or `p/q` in lowest terms.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `floor(log2 |x|)` for nonzero `x`.
pub fn floor_log2(x: &Q) -> i64 {
    assert!(!x.is_zero(), "floor_log2 of zero");
    let n = x.numer().abs();
    let d = x.denom();
    let e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |x| < 2^(e+1) after at most one correction.
    let too_big = if e >= 0 { (d << e as usize) > n } else { *d > (n << (-e) as usize) };
    if too_big {
        e - 1
    } else {
        e
    }
}

/// Largest dyadic with at least `prec` significant bits that is `<= x`.
pub fn round_down(x: &Q, prec: u32) -> Q {
    round_dir(x, prec, false)
}

/// Smallest dyadic with at least `prec` significant bits that is `>= x`.
pub fn round_up(x: &Q, prec: u32) -> Q {
    round_dir(x, prec, true)
}

fn round_dir(x: &Q, prec: u32, up: bool) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let d = x.denom();
    if d.is_one() || (d.clone() & (d - BigInt::one())).is_zero() {
        // Already dyadic; keep it if short enough.
        let bits = x.numer().bits();
        if bits <= prec as u64 + 1 {
            return x.clone();
        }
    }
    // floor or ceil of x 2^e in integers, then divide by 2^e without a gcd
    let e = prec as i64 - floor_log2(x);
    let (num, den) = if e >= 0 {
        (x.numer() << e as usize, d.clone())
    } else {
        (x.numer().clone(), d << (-e) as usize)
    };
    let k = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
    if e <= 0 {
        return Q::new_raw(k << (-e) as usize, BigInt::one());
    }
    let tz = k.trailing_zeros().unwrap_or(0).min(e as u64);
    Q::new_raw(k >> tz as usize, BigInt::one() << (e as u64 - tz) as usize)
}

pub fn to_f64(x: &Q) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let e = floor_log2(x);
    let shift = 60 - e;
    let m = (x * pow2(shift)).round().to_integer();
    let mf = m.to_f64().unwrap_or(f64::NAN);
    if !(-1000..=1000).contains(&shift) {
        let half = shift / 2;
        return mf * 2f64.powi(-(half as i32)) * 2f64.powi(-((shift - half) as i32));
    }
    mf * 2f64.powi(-(shift as i32))
}

/// Best rational approximation to a finite `f64` (exact binary value).
pub fn from_f64(v: f64) -> Option<Q> {
    Q::from_float(v)
}

/// Exact `n`-th root of a nonnegative rational, if it is rational.
pub fn exact_root(x: &Q, n: u32) -> Option<Q> {
    if x.is_negative() {
        if n % 2 == 1 {
            return exact_root(&-x, n).map(|r| -r);
        }
        return None;
    }
    let a = int_root(x.numer(), n)?;
    let b = int_root(x.denom(), n)?;
    Some(Q::new(a, b))
}

fn int_root(v: &BigInt, n: u32) -> Option<BigInt> {
    let r = v.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *v {
        Some(r)
    } else {
        None
    }
}

/// Decimal rendering with `digits` significant digits, rounded to nearest.
pub fn to_sci(x: &Q, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // Estimate decimal exponent, then fix.
    let mut e10 = (floor_log2(&a) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let ten = qi(10);
    loop {
        let p = pow_i(&ten, e10);
        if p > a {
            e10 -= 1;
        } else if pow_i(&ten, e10 + 1) <= a {
            e10 += 1;
        } else {
            break;
        }
    }
    let scale = pow_i(&ten, digits as i64 - 1 - e10);
    let mut m = (&a * scale).round().to_integer();
    let limit = num_traits::pow(BigInt::from(10), digits);
    if m >= limit {
        m /= 10;
        e10 += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mant = if tail.is_empty() {
        head.to_string()
    } else {
        format!("{head}.{tail}")
    };
    let sign = if neg { "-" } else { "" };
    if (-5..=15).contains(&e10) {
        // Plain positional form when it stays short.
        let plain = plain_decimal(&m, digits, e10);
        return format!("{sign}{plain}");
    }
    format!("{sign}{mant}e{e10}")
}

fn plain_decimal(m: &BigInt, digits: usize, e10: i64) -> String {
    let s = m.to_string();
    let point = e10 + 1; // digits before the decimal point
    let out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), s)
    } else if point as usize >= digits {
        format!("{}{}", s, "0".repeat(point as usize - digits))
    } else {
        format!("{}.{}", &s[..point as usize], &s[point as usize..])
    };
    if out.contains('.') {
        out.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        out
    }
}

pub fn biguint_to_q(v: BigUint) -> Q {
    qb(BigInt::from_biguint(Sign::Plus, v))
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, d| acc.lcm(d))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, d| acc.gcd(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational("7"), Some(qi(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1.2.3"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn rounding_brackets() {
        let x = q(1, 3);
        let lo = round_down(&x, 20);
        let hi = round_up(&x, 20);
        assert!(lo <= x && x <= hi);
        assert!(&hi - &lo <= pow2(-20));
        assert_eq!(floor_log2(&q(1, 3)), -2);
        assert_eq!(floor_log2(&qi(8)), 3);
        assert_eq!(floor_log2(&q(-9, 1)), 3);
    }

    #[test]
    fn sci_format() {
        assert_eq!(to_sci(&q(1, 3), 15), "0.333333333333333");
        assert_eq!(to_sci(&qi(1), 15), "1");
        assert_eq!(to_sci(&qi(-120), 15), "-120");
        assert_eq!(to_sci(&pow_i(&qi(10), 20), 15), "1e20");
        assert_eq!(to_sci(&q(3, 2), 15), "1.5");
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&q(8, 27), 3), Some(q(2, 3)));
        assert_eq!(exact_root(&qi(2), 2), None);
        assert_eq!(exact_root(&qi(-8), 3), Some(qi(-2)));
    }
}
