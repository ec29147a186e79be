//! Exact arithmetic scalars and small helpers shared across the crate.
//!
//! Everything is arbitrary-precision rational; no floating point enters any
//! computation. `Ratio` keeps values in lowest terms by construction, so
//! equality of scalars, vectors and matrices is plain structural equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(int(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(int(num), int(den))
}

/// Parses `"p"`, `"p/q"` or a decimal-free signed integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Int> {
        t.parse::<Int>().map_err(|_| Error::Parse {
            line: 0,
            msg: format!("malformed rational `{s}`"),
        })
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("zero denominator in `{s}`"),
                });
            }
            Ok(Rational::new(parse_int(p)?, den))
        }
    }
}

/// Formats a rational as `p` or `p/q`, matching what [`parse_rational`] reads.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn int_dot(a: &[Int], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += y * x;
    }
    acc
}

pub fn add_assign_scaled(target: &mut [Rational], source: &[Rational], scale: &Rational) {
    for (t, s) in target.iter_mut().zip(source) {
        *t += s * scale;
    }
}

pub fn scale_vec(v: &[Rational], scale: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * scale).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg_vec(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Rational::is_zero)
}

pub fn rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn gcd_int(a: &Int, b: &Int) -> Int {
    num::Integer::gcd(a, b)
}

/// gcd of the absolute values of a slice; zero for an all-zero slice.
pub fn gcd_slice(values: &[Int]) -> Int {
    let mut g = Int::zero();
    for v in values {
        g = gcd_int(&g, &v.abs());
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn lcm_int(a: &Int, b: &Int) -> Int {
    num::Integer::lcm(a, b)
}
