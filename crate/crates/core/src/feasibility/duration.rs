use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{config, Error, Result};

/// A duration in whole nanoseconds.
///
/// Text form accepts `ns`, `us` (or `µs`), `ms` and `s` suffixes with a
/// decimal mantissa, e.g. `22.4us`. A bare number is nanoseconds. Values that
/// do not land on a whole nanosecond are rejected.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nanos(pub u64);

impl Nanos {
    pub const ZERO: Nanos = Nanos(0);

    pub fn as_ns(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn from_us(us: u64) -> Self {
        Nanos(us * 1_000)
    }

    pub fn from_ms(ms: u64) -> Self {
        Nanos(ms * 1_000_000)
    }
}

impl std::ops::Add for Nanos {
    type Output = Nanos;
    fn add(self, o: Nanos) -> Nanos {
        Nanos(self.0 + o.0)
    }
}

impl std::ops::Mul<u64> for Nanos {
    type Output = Nanos;
    fn mul(self, k: u64) -> Nanos {
        Nanos(self.0 * k)
    }
}

impl std::iter::Sum for Nanos {
    fn sum<I: Iterator<Item = Nanos>>(iter: I) -> Nanos {
        Nanos(iter.map(|n| n.0).sum())
    }
}

impl fmt::Display for Nanos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ns", self.0)
    }
}

impl FromStr for Nanos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let split = t
            .find(|c: char| !(c.is_ascii_digit() || c == '.'))
            .unwrap_or(t.len());
        let (num, unit) = t.split_at(split);
        let scale: u64 = match unit.trim() {
            "" | "ns" => 1,
            "us" | "µs" => 1_000,
            "ms" => 1_000_000,
            "s" => 1_000_000_000,
            other => return Err(config(format!("unknown duration unit '{other}' in \"{s}\""))),
        };
        if num.is_empty() {
            return Err(config(format!("duration \"{s}\" has no number")));
        }
        let (int_part, frac_part) = num.split_once('.').unwrap_or((num, ""));
        if frac_part.contains('.') {
            return Err(config(format!("malformed duration \"{s}\"")));
        }
        // Exact decimal arithmetic: int * scale + frac * scale / 10^len(frac).
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| config(format!("malformed duration \"{s}\"")))?
        };
        let mut total = int
            .checked_mul(scale)
            .ok_or_else(|| config(format!("duration \"{s}\" overflows")))?;
        if !frac_part.is_empty() {
            let digits = frac_part.len() as u32;
            let frac: u64 = frac_part
                .parse()
                .map_err(|_| config(format!("malformed duration \"{s}\"")))?;
            let denom = 10u64
                .checked_pow(digits)
                .ok_or_else(|| config(format!("too many decimals in \"{s}\"")))?;
            let scaled = frac as u128 * scale as u128;
            if !scaled.is_multiple_of(denom as u128) {
                return Err(config(format!("duration \"{s}\" is not a whole number of nanoseconds")));
            }
            total += (scaled / denom as u128) as u64;
        }
        Ok(Nanos(total))
    }
}

impl Serialize for Nanos {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Nanos {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Nanos(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
