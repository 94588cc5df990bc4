//! Hash commitment to the sender's vote bit: `SHA-256(bit || nonce)`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opening {
    pub bit: u8,
    #[serde(with = "hex_16")]
    pub nonce: [u8; 16],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commitment {
    #[serde(with = "hex_32")]
    pub digest: [u8; 32],
    pub opened: Option<Opening>,
}

fn digest(bit: u8, nonce: &[u8; 16]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update([bit]);
    hasher.update(nonce);
    let mut out = [0u8; 32];
    out.copy_from_slice(&hasher.finalize());
    out
}

pub fn commit(bit: u8, nonce: [u8; 16]) -> Commitment {
    Commitment { digest: digest(bit, &nonce), opened: None }
}

/// True iff `(bit, nonce)` hashes to the committed digest.
pub fn open_commitment(c: &Commitment, bit: u8, nonce: &[u8; 16]) -> bool {
    digest(bit, nonce) == c.digest
}

impl Commitment {
    /// Verifies and records the opening. Returns false (and records nothing)
    /// on mismatch.
    pub fn open(&mut self, opening: Opening) -> bool {
        let ok = open_commitment(self, opening.bit, &opening.nonce);
        if ok {
            self.opened = Some(opening);
        }
        ok
    }
}

macro_rules! hex_array {
    ($name:ident, $n:expr) => {
        mod $name {
            use serde::{Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(v: &[u8; $n], s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&hex::encode(v))
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[u8; $n], D::Error> {
                let s = String::deserialize(d)?;
                let bytes = hex::decode(&s).map_err(serde::de::Error::custom)?;
                bytes
                    .try_into()
                    .map_err(|_| serde::de::Error::custom(concat!("expected ", $n, " bytes")))
            }
        }
    };
}

hex_array!(hex_16, 16);
hex_array!(hex_32, 32);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_then_open() {
        let n = [7u8; 16];
        let c = commit(1, n);
        assert!(open_commitment(&c, 1, &n));
        assert!(!open_commitment(&c, 0, &n));
        assert!(!open_commitment(&c, 1, &[8u8; 16]));
    }

    #[test]
    fn distinct_nonces_distinct_digests() {
        assert_ne!(commit(1, [0; 16]).digest, commit(1, [1; 16]).digest);
    }

    #[test]
    fn open_records_only_valid_openings() {
        let mut c = commit(0, [3; 16]);
        assert!(!c.open(Opening { bit: 1, nonce: [3; 16] }));
        assert!(c.opened.is_none());
        assert!(c.open(Opening { bit: 0, nonce: [3; 16] }));
        assert_eq!(c.opened.unwrap().bit, 0);
    }

    #[test]
    fn serde_hex() {
        let c = commit(1, [0xab; 16]);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains(&hex::encode(c.digest)));
        let back: Commitment = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
