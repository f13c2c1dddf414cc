use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::tol::INGEST_CLAMP;

/// A probability value, optionally carrying an exact rational representation.
///
/// Exact values come from rational or decimal strings in the input and are
/// kept alongside their nearest `f64`. Sums of exact values stay
/// exact; mixing in a float drops the exact part.
#[derive(Debug, Clone, PartialEq)]
pub struct Prob {
    value: f64,
    exact: Option<BigRational>,
}

impl Prob {
    pub fn from_f64(value: f64) -> Self {
        Self { value, exact: None }
    }

    pub fn from_ratio(exact: BigRational) -> Self {
        let value = ratio_to_f64(&exact);
        Self {
            value,
            exact: Some(exact),
        }
    }

    /// Exact `num / den`. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_ratio(BigRational::zero())
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Snap values within [`INGEST_CLAMP`] of the unit interval onto it.
    pub(crate) fn clamped_for_ingest(self) -> Self {
        if self.value < 0.0 && self.value >= -INGEST_CLAMP {
            return match self.exact {
                Some(_) => Self::zero(),
                None => Self::from_f64(0.0),
            };
        }
        if self.value > 1.0 && self.value <= 1.0 + INGEST_CLAMP {
            return match self.exact {
                Some(_) => Self::from_ratio(BigRational::one()),
                None => Self::from_f64(1.0),
            };
        }
        self
    }

    /// Parse `"num/den"`, an integer, or a decimal literal (optionally with an
    /// exponent) into an exact rational.
    pub fn parse_exact(s: &str) -> Result<Self, ProbParseError> {
        parse_rational(s.trim()).map(Self::from_ratio)
    }
}

impl Add for &Prob {
    type Output = Prob;

    fn add(self, rhs: &Prob) -> Prob {
        match (&self.exact, &rhs.exact) {
            (Some(l), Some(r)) => Prob::from_ratio(l + r),
            _ => Prob::from_f64(self.value + rhs.value),
        }
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => f.write_str(&format_ratio(r)),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Prob {
    type Err = ProbParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_exact(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a probability: {reason}")]
pub struct ProbParseError {
    pub input: String,
    pub reason: &'static str,
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn parse_rational(s: &str) -> Result<BigRational, ProbParseError> {
    let err = |reason| ProbParseError {
        input: s.to_string(),
        reason,
    };
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    if !s
        .bytes()
        .all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b))
    {
        return Err(err("not a decimal or rational literal"));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err("not a decimal or rational literal"));
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(err("exponent out of range"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| err("bad digits"))?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Ok(r)
}

/// Format a rational as `num/den`, or just `num` for integers.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
