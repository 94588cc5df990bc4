use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::qsim::BitString;

/// Protocol payload: a list over {0, 1, 2}, where 2 marks a position the
/// sender leaves to quantum randomness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct TernaryList(Vec<u8>);

impl TernaryList {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.is_empty() {
            return Err(config("list must not be empty"));
        }
        if let Some(v) = values.iter().find(|&&v| v > 2) {
            return Err(config(format!("list value {v} outside {{0, 1, 2}}")));
        }
        Ok(Self(values))
    }

    pub fn from_bits(bits: &BitString) -> Self {
        Self(bits.bits())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn has_superposed(&self) -> bool {
        self.0.contains(&2)
    }

    /// The list as a basis bitstring, or `None` if it still holds a 2.
    pub fn to_bits(&self) -> Option<BitString> {
        (!self.has_superposed()).then(|| BitString::from_bits(&self.0))
    }
}

impl TryFrom<Vec<u8>> for TernaryList {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TernaryList> for Vec<u8> {
    fn from(l: TernaryList) -> Self {
        l.0
    }
}

impl fmt::Display for TernaryList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TernaryList::new(vec![]).is_err());
        assert!(TernaryList::new(vec![0, 3]).is_err());
        let l = TernaryList::new(vec![2, 1, 0]).unwrap();
        assert!(l.has_superposed());
        assert!(l.to_bits().is_none());
        assert!(serde_json::from_str::<TernaryList>("[0,1,4]").is_err());
    }

    #[test]
    fn bits_round_trip() {
        let l = TernaryList::new(vec![1, 0, 1, 1]).unwrap();
        let b = l.to_bits().unwrap();
        assert_eq!(b.to_string(), "1011");
        assert_eq!(TernaryList::from_bits(&b), l);
    }
}
