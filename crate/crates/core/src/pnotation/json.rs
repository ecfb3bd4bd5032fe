//! Arbitrary-size integers as plain JSON numbers.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

pub(crate) fn to_number(v: &BigInt) -> Number {
    serde_json::from_str(&v.to_string()).expect("integer literal is a JSON number")
}

pub(crate) fn from_number(n: &Number) -> Result<BigInt, String> {
    let text = n.to_string();
    text.parse::<BigInt>().map_err(|_| format!("expected an integer, got {text}"))
}

pub(crate) mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_number(v).serialize(s).map_err(S::Error::custom)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_number(&Number::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub(crate) mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_number).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Number>::deserialize(d)?
            .iter()
            .map(|n| from_number(n).map_err(D::Error::custom))
            .collect()
    }
}
