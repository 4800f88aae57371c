//! Exact scalar arithmetic over the rationals and prime fields.
//!
//! The active field is a runtime parameter: a [`Field`] value describes it and
//! owns every arithmetic operation, so GF(p) elements are stored as bare
//! residues in `[0, p)` and rationals as arbitrary-precision fractions.
//! Nothing in this crate ever touches floating point.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;

/// Field descriptor. `Q` is the rationals, `Gf(p)` the prime field of order p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Q,
    Gf(u64),
}

/// A scalar belonging to some [`Field`]. The field itself is carried by
/// context (matrices, complexes, ...), not by the scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Gf(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |s| s <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Validated constructor for GF(p). `p` must be prime and small enough
    /// that products fit comfortably in 128-bit intermediates.
    pub fn gf(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::pre(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::pre(format!("prime {p} too large (must be < 2^31)")));
        }
        Ok(Field::Gf(p))
    }

    /// Accepts `Q`, `GF(p)` and `GF:p`.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Q);
        }
        let inner = if let Some(rest) = t.strip_prefix("GF(") {
            rest.strip_suffix(')')
        } else if let Some(rest) = t.strip_prefix("GF:") {
            Some(rest)
        } else {
            None
        };
        match inner {
            Some(ps) => {
                let p: u64 = ps
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad prime in field spec {t:?}")))?;
                Field::gf(p)
            }
            None => Err(Error::parse(format!(
                "unrecognised field {t:?} (expected Q, GF(p) or GF:p)"
            ))),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Gf(_) => Scalar::Gf(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Gf(_) => Scalar::Gf(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Gf(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Gf(r)
            }
        }
    }

    /// (-1)^k as a scalar.
    pub fn sign(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Gf(v) => *v == 0,
        }
    }

    fn pair<'a>(&self, a: &'a Scalar, b: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
        debug_assert!(self.accepts(a) && self.accepts(b), "scalar/field mismatch");
        (a, b)
    }

    pub fn accepts(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (Field::Q, Scalar::Q(_)) | (Field::Gf(_), Scalar::Gf(_))
        )
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.pair(a, b), self) {
            ((Scalar::Q(x), Scalar::Q(y)), _) => Scalar::Q(x + y),
            ((Scalar::Gf(x), Scalar::Gf(y)), Field::Gf(p)) => Scalar::Gf((x + y) % p),
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Q, Scalar::Q(x)) => Scalar::Q(-x),
            (Field::Gf(p), Scalar::Gf(x)) => Scalar::Gf(if *x == 0 { 0 } else { p - x }),
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.pair(a, b), self) {
            ((Scalar::Q(x), Scalar::Q(y)), _) => Scalar::Q(x * y),
            ((Scalar::Gf(x), Scalar::Gf(y)), Field::Gf(p)) => {
                Scalar::Gf(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    /// Multiplicative inverse. Panics on zero, which is a programming error
    /// everywhere this is called (pivots are nonzero by construction).
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Q, Scalar::Q(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Q(x.recip())
            }
            (Field::Gf(p), Scalar::Gf(x)) => {
                assert!(*x != 0, "inverse of zero");
                // Fermat: x^(p-2) mod p.
                let mut base = *x as u128;
                let m = *p as u128;
                let mut e = p - 2;
                let mut acc: u128 = 1;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Scalar::Gf(acc as u64)
            }
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Parses integers, fractions `a/b`, and (over Q) exact decimal literals.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::parse("empty scalar".to_string()));
        }
        match self {
            Field::Q => {
                let r = if let Some((num, den)) = t.split_once('/') {
                    let n: BigInt = num
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad numerator {num:?}")))?;
                    let d: BigInt = den
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad denominator {den:?}")))?;
                    if d.is_zero() {
                        return Err(Error::parse(format!("zero denominator in {t:?}")));
                    }
                    BigRational::new(n, d)
                } else {
                    parse_decimal(t)?
                };
                Ok(Scalar::Q(r))
            }
            Field::Gf(p) => {
                let v: i64 = t
                    .parse()
                    .map_err(|_| Error::parse(format!("bad GF({p}) scalar {t:?}")))?;
                Ok(self.from_i64(v))
            }
        }
    }

    pub fn format_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Gf(v) => format!("{v}"),
        }
    }
}

/// Exact decimal-to-rational conversion: `-12.375` becomes `-99/8`.
/// No exponents, no rounding; anything inexpressible is a parse error.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return Err(Error::parse(format!("bad decimal {s:?}")));
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::parse(format!("bad decimal {s:?}")));
    }
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(Error::parse(format!("bad decimal {s:?}")));
    }
    let int_val: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().unwrap()
    };
    let mut value = BigRational::from(int_val);
    if !frac_part.is_empty() {
        let num: BigInt = frac_part.parse().unwrap();
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        value += BigRational::new(num, den);
    }
    if sign < 0 {
        value = -value;
    }
    Ok(value)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Gf(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Gf(p) => write!(f, "GF({p})"),
        }
    }
}

/// Convenience used by tests and fixtures: a rational scalar from a pair.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
}
