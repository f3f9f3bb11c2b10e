//! Runtime values carried in program layers, and extended attention scores.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational used for every score and arithmetic result.
pub type Rat = BigRational;

/// Builds a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// A value stored in a layer cell.
///
/// Numbers are normalized on construction: integral results are always
/// `Int`, and `Rat` only ever holds a reduced non-integral rational. This
/// keeps structural equality identical to numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Value {
    Symbol(char),
    Int(#[serde(with = "serde_bigint")] BigInt),
    Rat(#[serde(with = "serde_rat")] Rat),
    Bool(bool),
    Tuple(Vec<Value>),
}

impl Value {
    /// Normalizing constructor for numeric results.
    pub fn number(r: Rat) -> Value {
        if r.is_integer() {
            Value::Int(r.to_integer())
        } else {
            Value::Rat(r)
        }
    }

    pub fn int(v: i64) -> Value {
        Value::Int(BigInt::from(v))
    }

    pub fn from_usize(v: usize) -> Value {
        Value::Int(BigInt::from(v))
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            Value::Int(i) => Some(Rat::from_integer(i.clone())),
            Value::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Rat(_))
    }

    /// Short type name used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Symbol(_) => "symbol",
            Value::Int(_) => "int",
            Value::Rat(_) => "rat",
            Value::Bool(_) => "bool",
            Value::Tuple(_) => "tuple",
        }
    }

    /// Flattens a (possibly nested) numeric tuple into a rational vector.
    pub fn to_vector(&self) -> Option<Vec<Rat>> {
        let mut out = Vec::new();
        fn walk(v: &Value, out: &mut Vec<Rat>) -> bool {
            match v {
                Value::Tuple(items) => items.iter().all(|x| walk(x, out)),
                other => match other.as_rat() {
                    Some(r) => {
                        out.push(r);
                        true
                    }
                    None => false,
                },
            }
        }
        walk(self, &mut out).then_some(out)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Symbol(c) => write!(f, "'{c}'"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Tuple(items) => {
                write!(f, "(")?;
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                if items.len() == 1 {
                    write!(f, ",")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Attention score extended with a bottom element.
///
/// `NegInfinity` is declared first so the derived order places it strictly
/// below every finite score.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtScore {
    NegInfinity,
    Finite(Rat),
}

impl ExtScore {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtScore::Finite(r) => Some(r),
            ExtScore::NegInfinity => None,
        }
    }

    pub fn add(&self, offset: &Rat) -> ExtScore {
        match self {
            ExtScore::Finite(r) => ExtScore::Finite(r + offset),
            ExtScore::NegInfinity => ExtScore::NegInfinity,
        }
    }
}

impl fmt::Display for ExtScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScore::NegInfinity => write!(f, "-inf"),
            ExtScore::Finite(r) => write!(f, "{}", Value::number(r.clone())),
        }
    }
}

/// Exact comparison helper that never goes through floating point.
pub fn cmp_rat(a: &Rat, b: &Rat) -> Ordering {
    a.cmp(b)
}

/// `base^exp` for a non-negative machine exponent.
pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn is_binary(r: &Rat) -> bool {
    r.is_zero() || r.is_one()
}

/// Serializes integers as JSON numbers when they fit in `i64`, otherwise as
/// decimal strings. Both forms are accepted on input.
pub mod serde_bigint {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    pub fn to_repr(v: &BigInt) -> impl Serialize {
        match v.to_i64() {
            Some(s) => Repr::Small(s),
            None => Repr::Big(v.to_string()),
        }
    }

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_repr(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Small(v) => Ok(BigInt::from(v)),
            Repr::Big(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

/// Rationals as a `[numerator, denominator]` pair of integers.
pub mod serde_rat {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeTuple;
    use serde::{Deserializer, Serializer};

    #[derive(Deserialize)]
    struct Pair(
        #[serde(with = "super::serde_bigint")] BigInt,
        #[serde(with = "super::serde_bigint")] BigInt,
    );

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&super::serde_bigint::to_repr(v.numer()))?;
        t.serialize_element(&super::serde_bigint::to_repr(v.denom()))?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let Pair(n, q) = Pair::deserialize(d)?;
        if q.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rat::new(n, q))
    }
}

/// Matrices of rationals, row-major.
pub mod serde_rat_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Cell(#[serde(with = "super::serde_rat")] Rat);

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Cell>> = m
            .iter()
            .map(|r| r.iter().map(|c| Cell(c.clone())).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let rows: Vec<Vec<Cell>> = Vec::deserialize(d)?;
        Ok(rows
            .into_iter()
            .map(|r| r.into_iter().map(|Cell(c)| c).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_rationals_normalize_to_int() {
        assert_eq!(Value::number(rat(6, 3)), Value::int(2));
        assert_eq!(Value::number(rat(2, 4)), Value::Rat(rat(1, 2)));
        assert_eq!(Value::number(rat(-4, -8)), Value::number(rat(1, 2)));
    }

    #[test]
    fn neg_infinity_is_below_every_finite_score() {
        let lo = ExtScore::Finite(int(-1_000_000_000));
        assert!(ExtScore::NegInfinity < lo);
        assert!(ExtScore::Finite(rat(1, 3)) < ExtScore::Finite(rat(1, 2)));
        assert_eq!(ExtScore::Finite(rat(2, 4)), ExtScore::Finite(rat(1, 2)));
        assert_eq!(ExtScore::NegInfinity.add(&int(5)), ExtScore::NegInfinity);
    }

    #[test]
    fn vector_flattening() {
        let v = Value::Tuple(vec![Value::int(1), Value::Tuple(vec![Value::Rat(rat(1, 2))])]);
        assert_eq!(v.to_vector(), Some(vec![int(1), rat(1, 2)]));
        assert_eq!(Value::Symbol('a').to_vector(), None);
    }

    #[test]
    fn pow_is_exact() {
        assert_eq!(rat_pow(&int(8), 3), int(512));
        assert_eq!(rat_pow(&rat(1, 2), 0), int(1));
        assert!(num_traits::Signed::is_negative(&int(-3)));
    }
}
