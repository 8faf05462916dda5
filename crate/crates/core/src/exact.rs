//! Helpers for exact rational arithmetic.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-2/9"`, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: \"{s}\""));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Input(format!("zero denominator in \"{s}\"")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(Rat::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation; `None` stands for `+infinity` (the zero element).
pub fn valuation(q: &Rat, p: u64) -> Option<i64> {
    if q.is_zero() {
        None
    } else {
        Some(valuation_int(q.numer(), p) - valuation_int(q.denom(), p))
    }
}

/// Natural log of `|n|` for arbitrarily large integers.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|q|` for arbitrarily large or small rationals.
pub fn ln_abs(q: &Rat) -> f64 {
    ln_abs_int(q.numer()) - ln_abs_int(q.denom())
}

/// Exact conversion of a finite `f64` to a rational.
pub fn from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Input(format!("non-finite value {x}")))
}

/// Scales a group of rationals by a common power of two and converts to `f64`,
/// so that huge entries keep their ratios.
pub fn scaled_f64(entries: &[Rat]) -> (Vec<f64>, i64) {
    let max_bits = entries
        .iter()
        .filter(|q| !q.is_zero())
        .map(|q| q.numer().bits() as i64 - q.denom().bits() as i64)
        .max()
        .unwrap_or(0);
    let shift = if max_bits.abs() > 900 { max_bits } else { 0 };
    let two = BigInt::from(2);
    let scale = if shift >= 0 {
        Rat::new(BigInt::one(), two.pow(shift as u32))
    } else {
        Rat::from_integer(two.pow((-shift) as u32))
    };
    let out = entries
        .iter()
        .map(|q| {
            let s = q * &scale;
            rat_to_f64(&s)
        })
        .collect();
    (out, shift)
}

/// Nearest `f64` to a rational of moderate size.
pub fn rat_to_f64(q: &Rat) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    if nb < 1000 && db < 1000 {
        return q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
    }
    let sign = if q.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * (ln_abs(q)).exp()
}

/// Serde adapters writing rationals as strings such as `"-2/9"`.
pub mod rat_serde {
    use super::{parse_rational, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod array4 {
        use super::*;
        use serde::ser::SerializeTuple;

        pub fn serialize<S: Serializer>(q: &[Rat; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut t = s.serialize_tuple(4)?;
            for v in q {
                t.serialize_element(&v.to_string())?;
            }
            t.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Rat; 4], D::Error> {
            let v = <[String; 4]>::deserialize(d)?;
            let mut out = Vec::with_capacity(4);
            for s in &v {
                out.push(parse_rational(s).map_err(D::Error::custom)?);
            }
            Ok(out.try_into().unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-2/6").unwrap(), rat_frac(-1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat_frac(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat_frac(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(12), 2), Some(2));
        assert_eq!(valuation(&rat_frac(5, 27), 3), Some(-3));
        assert_eq!(valuation(&rat(0), 3), None);
    }

    #[test]
    fn logs_of_huge_integers() {
        let big = BigInt::from(2).pow(5000);
        let expected = 5000.0 * std::f64::consts::LN_2;
        assert!((ln_abs_int(&big) - expected).abs() < 1e-9);
    }
}
