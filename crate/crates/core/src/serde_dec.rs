//! Serde adapters that encode big integers as decimal strings.
//!
//! Use with `#[serde(with = "fperfect_core::serde_dec")]`.

use num_bigint::BigUint;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    let s = String::deserialize(d)?;
    s.parse::<BigUint>().map_err(D::Error::custom)
}

/// Same encoding for `Vec<BigUint>`.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_str_radix(10))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<BigUint>().map_err(D::Error::custom))
            .collect()
    }
}

/// Decimal-string encoding for machine-word values that may exceed 2^53.
pub mod word {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

pub mod word_vec {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[u64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;
    use serde::{Deserialize, Serialize};

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Sample {
        #[serde(with = "super")]
        big: BigUint,
        #[serde(with = "super::vec")]
        many: Vec<BigUint>,
        #[serde(with = "super::word")]
        n: u64,
        #[serde(with = "super::word_vec")]
        ns: Vec<u64>,
    }

    #[test]
    fn decimal_strings_round_trip() {
        let s = Sample {
            big: "123456789012345678901234567890".parse().unwrap(),
            many: vec![1u32.into(), 2u32.into()],
            n: u64::MAX,
            ns: vec![6, 28],
        };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"big":"123456789012345678901234567890","many":["1","2"],"n":"18446744073709551615","ns":["6","28"]}"#
        );
        assert_eq!(serde_json::from_str::<Sample>(&json).unwrap(), s);
    }
}
