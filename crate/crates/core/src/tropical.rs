//! The max-plus semifield over exact rationals and the tropical Ptolemy update.
//!
//! Elements are finite rationals. Tropical addition is `max`, tropical
//! multiplication is ordinary addition, and every element has a
//! multiplicative inverse (its negation), which makes the structure a
//! semifield. The additive identity `-inf` is deliberately not
//! representable: labels are always finite, so subtraction stays total.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A finite element of the max-plus semifield.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalValue(BigRational);

impl TropicalValue {
    pub fn new(value: BigRational) -> Self {
        TropicalValue(value)
    }

    pub fn from_integer(value: i64) -> Self {
        TropicalValue(BigRational::from_integer(BigInt::from(value)))
    }

    /// `numer / denom`; panics when `denom == 0`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        TropicalValue(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// The multiplicative identity (ordinary zero).
    pub fn one() -> Self {
        TropicalValue(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Tropical addition: `max(self, other)`.
    pub fn oplus(&self, other: &Self) -> Self {
        match self.cmp(other) {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        }
    }

    /// Tropical multiplication: `self + other`.
    pub fn otimes(&self, other: &Self) -> Self {
        TropicalValue(&self.0 + &other.0)
    }

    /// Tropical division: `self - other`.
    pub fn odiv(&self, other: &Self) -> Self {
        TropicalValue(&self.0 - &other.0)
    }

    /// Tropical multiplicative inverse: `-self`.
    pub fn inverse(&self) -> Self {
        TropicalValue(-&self.0)
    }
}

impl From<i64> for TropicalValue {
    fn from(value: i64) -> Self {
        TropicalValue::from_integer(value)
    }
}

impl From<BigRational> for TropicalValue {
    fn from(value: BigRational) -> Self {
        TropicalValue(value)
    }
}

pub fn trop_add(x: &TropicalValue, y: &TropicalValue) -> TropicalValue {
    x.oplus(y)
}

pub fn trop_mul(x: &TropicalValue, y: &TropicalValue) -> TropicalValue {
    x.otimes(y)
}

/// Labels of a quadrilateral about to be flipped.
///
/// `a, b, c, d` run in cyclic order around the boundary, so `(a, c)` and
/// `(b, d)` are the two pairs of opposite sides; `x` labels the diagonal
/// that is removed by the flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadLabels {
    pub a: TropicalValue,
    pub b: TropicalValue,
    pub c: TropicalValue,
    pub d: TropicalValue,
    pub x: TropicalValue,
}

impl QuadLabels {
    pub fn new(
        a: impl Into<TropicalValue>,
        b: impl Into<TropicalValue>,
        c: impl Into<TropicalValue>,
        d: impl Into<TropicalValue>,
        x: impl Into<TropicalValue>,
    ) -> Self {
        QuadLabels {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            x: x.into(),
        }
    }

    /// The same quadrilateral with its diagonal relabeled.
    pub fn with_diagonal(&self, x: TropicalValue) -> Self {
        QuadLabels { x, ..self.clone() }
    }
}

/// Label of the new diagonal after a flip:
/// `x' = (a ⊗ c ⊕ b ⊗ d) ⊘ x = max(a + c, b + d) - x`.
///
/// The boundary labels are not touched by a flip.
pub fn flip_label(q: &QuadLabels) -> TropicalValue {
    q.a.otimes(&q.c).oplus(&q.b.otimes(&q.d)).odiv(&q.x)
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid tropical value {text:?}: {reason}")]
pub struct ParseValueError {
    pub text: String,
    pub reason: &'static str,
}

impl FromStr for TropicalValue {
    type Err = ParseValueError;

    /// Accepts a decimal integer (`-7`) or a rational `p/q` (`3/4`, `-1/2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseValueError {
            text: s.to_string(),
            reason,
        };
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let parse_int = |part: &str| -> Result<BigInt, ParseValueError> {
            let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("expected a decimal integer or p/q"));
            }
            part.parse::<BigInt>()
                .map_err(|_| err("expected a decimal integer or p/q"))
        };
        let numer = parse_int(num)?;
        let denom = match den {
            Some(d) => parse_int(d)?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(err("zero denominator"));
        }
        if denom.is_negative() {
            return Ok(TropicalValue(BigRational::new(-numer, -denom)));
        }
        Ok(TropicalValue(BigRational::new(numer, denom)))
    }
}

impl Serialize for TropicalValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TropicalValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl de::Visitor<'_> for Visitor {
            type Value = TropicalValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" rational string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(TropicalValue::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(TropicalValue(BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tv(v: i64) -> TropicalValue {
        TropicalValue::from_integer(v)
    }

    fn rational() -> impl Strategy<Value = TropicalValue> {
        (-1000i64..1000, 1i64..13).prop_map(|(n, d)| TropicalValue::from_ratio(n, d))
    }

    #[test]
    fn add_is_max() {
        assert_eq!(trop_add(&tv(3), &tv(5)), tv(5));
        assert_eq!(trop_add(&tv(-2), &tv(-2)), tv(-2));
        assert_eq!(trop_add(&tv(0), &tv(-7)), tv(0));
    }

    #[test]
    fn mul_is_sum() {
        assert_eq!(trop_mul(&tv(3), &tv(5)), tv(8));
        assert_eq!(trop_mul(&tv(11), &TropicalValue::one()), tv(11));
        assert_eq!(trop_mul(&tv(-2), &tv(2)), tv(0));
    }

    #[test]
    fn flip_label_examples() {
        assert_eq!(flip_label(&QuadLabels::new(0, 0, 0, 0, 0)), tv(0));
        // max(2 + 3, 0 + 1) - 1
        let expected = std::cmp::max(2 + 3, 1) - 1;
        assert_eq!(flip_label(&QuadLabels::new(2, 0, 3, 1, 1)), tv(expected));
        assert_eq!(expected, 4);
        let q = QuadLabels::new(2, 0, 3, 1, 7);
        let once = flip_label(&q);
        assert_eq!(flip_label(&q.with_diagonal(once)), tv(7));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("-7".parse::<TropicalValue>().unwrap(), tv(-7));
        assert_eq!("6/4".parse::<TropicalValue>().unwrap(), TropicalValue::from_ratio(3, 2));
        assert_eq!(
            "1/-2".parse::<TropicalValue>().unwrap(),
            TropicalValue::from_ratio(-1, 2)
        );
        assert_eq!(TropicalValue::from_ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(tv(12).to_string(), "12");
        assert!("1/0".parse::<TropicalValue>().is_err());
        assert!("1.5".parse::<TropicalValue>().is_err());
        assert!("".parse::<TropicalValue>().is_err());
        assert!("inf".parse::<TropicalValue>().is_err());
    }

    #[test]
    fn serde_accepts_strings_and_integers() {
        let v: Vec<TropicalValue> = serde_json::from_str(r#"["3/4", 5, "-2"]"#).unwrap();
        assert_eq!(v, vec![TropicalValue::from_ratio(3, 4), tv(5), tv(-2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["3/4","5","-2"]"#);
    }

    proptest! {
        #[test]
        fn semifield_axioms(x in rational(), y in rational(), z in rational()) {
            prop_assert_eq!(x.oplus(&y), y.oplus(&x));
            prop_assert_eq!(x.otimes(&y), y.otimes(&x));
            prop_assert_eq!(x.oplus(&y).oplus(&z), x.oplus(&y.oplus(&z)));
            prop_assert_eq!(x.otimes(&y).otimes(&z), x.otimes(&y.otimes(&z)));
            prop_assert_eq!(x.otimes(&y.oplus(&z)), x.otimes(&y).oplus(&x.otimes(&z)));
            prop_assert_eq!(x.otimes(&x.inverse()), TropicalValue::one());
        }

        #[test]
        fn flip_is_an_involution(a in rational(), b in rational(), c in rational(), d in rational(), x in rational()) {
            let q = QuadLabels { a, b, c, d, x: x.clone() };
            let y = flip_label(&q);
            prop_assert_eq!(flip_label(&q.with_diagonal(y)), x);
        }

        #[test]
        fn flip_symmetries(a in rational(), b in rational(), c in rational(), d in rational(), x in rational()) {
            let q = QuadLabels { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone(), x: x.clone() };
            let y = flip_label(&q);
            let swapped_ac = QuadLabels { a: c.clone(), c: a.clone(), ..q.clone() };
            let swapped_bd = QuadLabels { b: d.clone(), d: b.clone(), ..q.clone() };
            let swapped_pairs = QuadLabels { a: b.clone(), b: c.clone(), c: d.clone(), d: a.clone(), x };
            prop_assert_eq!(flip_label(&swapped_ac), y.clone());
            prop_assert_eq!(flip_label(&swapped_bd), y.clone());
            prop_assert_eq!(flip_label(&swapped_pairs), y);
        }

        #[test]
        fn flip_monotonicity(a in rational(), b in rational(), c in rational(), d in rational(), x in rational(), bump in rational()) {
            let bump = if bump.value().is_negative() { bump.inverse() } else { bump };
            let q = QuadLabels { a: a.clone(), b, c, d, x: x.clone() };
            let y = flip_label(&q);
            let bigger_a = QuadLabels { a: a.otimes(&bump), ..q.clone() };
            prop_assert!(flip_label(&bigger_a) >= y);
            let bigger_x = q.with_diagonal(x.otimes(&bump));
            prop_assert_eq!(flip_label(&bigger_x), y.odiv(&bump));
        }
    }
}
