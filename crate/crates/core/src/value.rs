use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Serialize, Serializer};

/// A nonnegative real or `+inf`. Serialises infinity as the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedValue {
    Finite(f64),
    Infinite,
}

impl ExtendedValue {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedValue::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedValue::Finite(x) => Some(x),
            ExtendedValue::Infinite => None,
        }
    }

    /// `f64` view with infinity mapped to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Reciprocal with `1/inf = 0` and `1/0 = inf`.
    pub fn recip(self) -> ExtendedValue {
        match self {
            ExtendedValue::Infinite => ExtendedValue::Finite(0.0),
            ExtendedValue::Finite(0.0) => ExtendedValue::Infinite,
            ExtendedValue::Finite(x) => ExtendedValue::Finite(1.0 / x),
        }
    }

    pub fn min(self, other: ExtendedValue) -> ExtendedValue {
        match (self, other) {
            (ExtendedValue::Infinite, o) => o,
            (s, ExtendedValue::Infinite) => s,
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => ExtendedValue::Finite(a.min(b)),
        }
    }

    pub fn parse(s: &str) -> Option<ExtendedValue> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            Some(ExtendedValue::Infinite)
        } else {
            t.parse().ok().map(ExtendedValue::Finite)
        }
    }
}

impl From<f64> for ExtendedValue {
    fn from(x: f64) -> Self {
        if x.is_infinite() && x > 0.0 {
            ExtendedValue::Infinite
        } else {
            ExtendedValue::Finite(x)
        }
    }
}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 is the shortest representation that round-trips.
            ExtendedValue::Finite(x) => write!(f, "{x}"),
            ExtendedValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedValue::Finite(x) => s.serialize_f64(*x),
            ExtendedValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for ExtendedValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<ExtendedValue, E> {
                Ok(ExtendedValue::Finite(x))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> Result<ExtendedValue, E> {
                Ok(ExtendedValue::Finite(x as f64))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<ExtendedValue, E> {
                Ok(ExtendedValue::Finite(x as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtendedValue, E> {
                ExtendedValue::parse(s).ok_or_else(|| E::custom(format!("bad value `{s}`")))
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        assert_eq!(ExtendedValue::Infinite.recip(), ExtendedValue::Finite(0.0));
        assert_eq!(ExtendedValue::Finite(0.0).recip(), ExtendedValue::Infinite);
        assert_eq!(serde_json::to_string(&ExtendedValue::Infinite).unwrap(), "\"inf\"");
        let v: ExtendedValue = serde_json::from_str("\"inf\"").unwrap();
        assert!(v.is_infinite());
        let v: ExtendedValue = serde_json::from_str("0.25").unwrap();
        assert_eq!(v, ExtendedValue::Finite(0.25));
        assert!(ExtendedValue::Finite(1e300) < ExtendedValue::Infinite);
    }
}
