//! Serde adapters for exact integers.
//!
//! Big integers are written as plain JSON numbers with every digit kept
//! (`serde_json` runs with `arbitrary_precision`), so reports stay exact and
//! remain readable by any consumer with arbitrary-size integer support.
//! Rationals are written as `"p/q"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_with::{DeserializeAs, SerializeAs};

/// `serde_as` adapter writing a `BigInt` as an exact JSON number.
pub struct JsonInt;

impl SerializeAs<BigInt> for JsonInt {
    fn serialize_as<S: Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
        let number: serde_json::Number =
            value.to_string().parse().map_err(|e| S::Error::custom(format!("integer not representable: {e}")))?;
        number.serialize(serializer)
    }
}

impl<'de> DeserializeAs<'de, BigInt> for JsonInt {
    fn deserialize_as<D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
        let number = serde_json::Number::deserialize(deserializer)?;
        number.to_string().parse().map_err(|_| D::Error::custom(format!("expected an integer, got {number}")))
    }
}

/// `serde_as` adapter writing a `BigRational` as `"p/q"` (or `"p"` when integral).
pub struct JsonRational;

impl SerializeAs<BigRational> for JsonRational {
    fn serialize_as<S: Serializer>(value: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&value.to_string())
    }
}

impl<'de> DeserializeAs<'de, BigRational> for JsonRational {
    fn deserialize_as<D: Deserializer<'de>>(deserializer: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(deserializer)?;
        crate::parse_rational(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_with::serde_as;

    #[serde_as]
    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Probe {
        #[serde_as(as = "JsonInt")]
        n: BigInt,
        #[serde_as(as = "Vec<(JsonInt, JsonInt)>")]
        pairs: Vec<(BigInt, BigInt)>,
        #[serde_as(as = "JsonRational")]
        q: BigRational,
    }

    #[test]
    fn huge_integers_survive_as_json_numbers() {
        let n: BigInt = "-123456789012345678901234567890123456789012345678901234567890".parse().unwrap();
        let probe = Probe {
            n: n.clone(),
            pairs: vec![(BigInt::from(2), n.clone())],
            q: BigRational::new(BigInt::from(-6), BigInt::from(4)),
        };
        let text = serde_json::to_string(&probe).unwrap();
        assert_eq!(text, format!("{{\"n\":{n},\"pairs\":[[2,{n}]],\"q\":\"-3/2\"}}"));
        let back: Probe = serde_json::from_str(&text).unwrap();
        assert_eq!(back, probe);
    }

    #[test]
    fn fractional_json_number_is_rejected() {
        #[serde_as]
        #[derive(Deserialize, Debug)]
        struct One {
            #[serde_as(as = "JsonInt")]
            #[allow(dead_code)]
            n: BigInt,
        }
        assert!(serde_json::from_str::<One>("{\"n\":1.5}").is_err());
    }
}
