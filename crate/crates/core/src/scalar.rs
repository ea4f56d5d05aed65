//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `base^exp` for a nonzero integer base and a possibly negative exponent.
pub fn ipow(base: i64, exp: i32) -> Q {
    debug_assert!(base != 0 || exp >= 0);
    let b = q(base);
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

/// Prints `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses an integer or a decimal-free fraction `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("not a rational literal: {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Writes `coeff*body` terms as a signed sum, `0` when empty.
pub fn fmt_linear<I, S>(terms: I) -> String
where
    I: IntoIterator<Item = (Q, S)>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for (coeff, body) in terms {
        let body = body.as_ref();
        let neg = coeff.is_negative();
        let mag = coeff.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if body == "1" {
            out.push_str(&fmt_q(&mag));
        } else if mag.is_one() {
            out.push_str(body);
        } else {
            out.push_str(&fmt_q(&mag));
            out.push('*');
            out.push_str(body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q("-6/4").unwrap(), frac(-3, 2));
        assert!(parse_q("1.5").is_err());
        assert!(parse_q("1/0").is_err());
        assert_eq!(fmt_q(&frac(-3, 2)), "-3/2");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(ipow(-3, -2), frac(1, 9));
        assert_eq!(ipow(-2, -1), frac(-1, 2));
        assert_eq!(ipow(5, 0), q(1));
    }

    #[test]
    fn linear_printing() {
        let s = fmt_linear(vec![(q(2), "c2"), (q(-2), "c1"), (frac(1, 2), "1")]);
        assert_eq!(s, "2*c2 - 2*c1 + 1/2");
    }
}
