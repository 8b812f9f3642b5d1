//! Exact arithmetic in the quadratic field Q(√2).
//!
//! Every coefficient that appears in the algebra layer (±1, ±1/2, 1/√2 and
//! their products) lives here. Values are `rat + sqrt2·√2` with both parts
//! arbitrary-precision rationals kept in lowest terms.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::ScalarError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rat: BigRational,
    sqrt2: BigRational,
}

impl Scalar {
    pub fn new(rat: BigRational, sqrt2: BigRational) -> Self {
        Scalar { rat, sqrt2 }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            rat: BigRational::from_integer(BigInt::from(n)),
            sqrt2: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar {
            rat: BigRational::new(num.into(), den.into()),
            sqrt2: BigRational::zero(),
        })
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        Scalar {
            rat: BigRational::zero(),
            sqrt2: BigRational::one(),
        }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Scalar {
            rat: BigRational::zero(),
            sqrt2: BigRational::new(1.into(), 2.into()),
        }
    }

    /// (−1)^k.
    pub fn sign(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.sqrt2
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.sqrt2.is_zero()
    }

    /// a² − 2b², the field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let two = BigRational::from_integer(2.into());
        &self.rat * &self.rat - two * &self.sqrt2 * &self.sqrt2
    }

    /// The Galois conjugate a − b√2.
    pub fn galois_conjugate(&self) -> Self {
        Scalar {
            rat: self.rat.clone(),
            sqrt2: -self.sqrt2.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        let norm = self.norm();
        // √2 is irrational, so the norm vanishes only at zero.
        if norm.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar {
            rat: &self.rat / &norm,
            sqrt2: -(&self.sqrt2 / &norm),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, ScalarError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Floating-point approximation, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        let b = self.sqrt2.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }

    /// Is this a rational number?
    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Renders as `a + b*sqrt2`, dropping a vanishing part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.sqrt2.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.rat)),
            (true, false) => write!(f, "{}*sqrt2", fmt_rational(&self.sqrt2)),
            (false, false) => {
                if self.sqrt2.is_negative() {
                    write!(
                        f,
                        "{} - {}*sqrt2",
                        fmt_rational(&self.rat),
                        fmt_rational(&-self.sqrt2.clone())
                    )
                } else {
                    write!(
                        f,
                        "{} + {}*sqrt2",
                        fmt_rational(&self.rat),
                        fmt_rational(&self.sqrt2)
                    )
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar {
            rat: q,
            sqrt2: BigRational::zero(),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat + &rhs.rat,
            sqrt2: &self.sqrt2 + &rhs.sqrt2,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.rat += &rhs.rat;
        self.sqrt2 += &rhs.sqrt2;
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat - &rhs.rat,
            sqrt2: &self.sqrt2 - &rhs.sqrt2,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.rat -= &rhs.rat;
        self.sqrt2 -= &rhs.sqrt2;
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        if self.sqrt2.is_zero() && rhs.sqrt2.is_zero() {
            return Scalar {
                rat: &self.rat * &rhs.rat,
                sqrt2: BigRational::zero(),
            };
        }
        let two = BigRational::from_integer(2.into());
        Scalar {
            rat: &self.rat * &rhs.rat + two * &self.sqrt2 * &rhs.sqrt2,
            sqrt2: &self.rat * &rhs.sqrt2 + &self.sqrt2 * &rhs.rat,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rat: -self.rat,
            sqrt2: -self.sqrt2,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

fn big_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn json_to_big(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn rational_json(q: &BigRational) -> serde_json::Value {
    serde_json::Value::Array(vec![big_to_json(q.numer()), big_to_json(q.denom())])
}

impl Serialize for Scalar {
    /// `{"rat": [num, den], "sqrt2": [num, den]}`; integers that overflow i64
    /// are written as decimal strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("rat", &rational_json(&self.rat))?;
        map.serialize_entry("sqrt2", &rational_json(&self.sqrt2))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rat: [serde_json::Value; 2],
            sqrt2: [serde_json::Value; 2],
        }
        let raw = Raw::deserialize(deserializer)?;
        let part = |pair: &[serde_json::Value; 2]| -> Result<BigRational, D::Error> {
            let num = json_to_big(&pair[0]).ok_or_else(|| de::Error::custom("bad numerator"))?;
            let den = json_to_big(&pair[1]).ok_or_else(|| de::Error::custom("bad denominator"))?;
            if den.is_zero() {
                return Err(de::Error::custom("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        };
        Ok(Scalar {
            rat: part(&raw.rat)?,
            sqrt2: part(&raw.sqrt2)?,
        })
    }
}
