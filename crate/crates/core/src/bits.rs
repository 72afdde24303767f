//! `{0,1}` words written as strings such as `"0110"`.

use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{LabError, Result};

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(LabError::Format(format!("bit word contains {other:?}"))),
        })
        .collect()
}

/// `#[serde(with = "crate::bits::as_string")]`
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_bits(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<bool>, D::Error> {
        let s = String::deserialize(d)?;
        parse_bits(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        let w = [false, true, true, false];
        assert_eq!(format_bits(&w), "0110");
        assert_eq!(parse_bits("0110").unwrap(), w);
        assert!(parse_bits("01x").is_err());
    }
}
