use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The only issuing state modelled here.
pub const DL_STATE: &str = "DL";

const SERIAL_MAX: u32 = 9_999_999;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlNumberError {
    #[error("licence issued outside Delhi: state prefix `{0}`")]
    WrongState(String),
    #[error("malformed licence number `{0}`")]
    Malformed(String),
    #[error("licence serial overflow after {0}")]
    Overflow(String),
}

/// Driving-licence number `DL-RRYYYYSSSSSSS`: two-digit RTO code, four-digit
/// issue year and a seven-digit zero-padded serial.
///
/// The serial is issued sequentially per RTO and year, which is what makes
/// the number space enumerable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DlNumber {
    rto: u8,
    year: u16,
    serial: u32,
}

impl DlNumber {
    pub fn new(rto: u8, year: u16, serial: u32) -> Result<Self, DlNumberError> {
        if rto > 99 || year > 9999 || serial > SERIAL_MAX {
            return Err(DlNumberError::Malformed(format!(
                "rto={rto} year={year} serial={serial}"
            )));
        }
        Ok(Self { rto, year, serial })
    }

    pub fn state(&self) -> &'static str {
        DL_STATE
    }

    pub fn rto(&self) -> u8 {
        self.rto
    }

    pub fn year(&self) -> u16 {
        self.year
    }

    pub fn serial(&self) -> u32 {
        self.serial
    }

    /// Parses the canonical form. Input is case-insensitive.
    pub fn parse(text: &str) -> Result<Self, DlNumberError> {
        let upper = text.trim().to_ascii_uppercase();
        let bytes = upper.as_bytes();
        if bytes.len() >= 3
            && bytes[0].is_ascii_alphabetic()
            && bytes[1].is_ascii_alphabetic()
            && bytes[2] == b'-'
            && &upper[..2] != DL_STATE
        {
            return Err(DlNumberError::WrongState(upper[..2].to_string()));
        }
        let malformed = || DlNumberError::Malformed(text.to_string());
        let digits = upper.strip_prefix("DL-").ok_or_else(malformed)?;
        if digits.len() != 13 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        // all-digit slices cannot fail to parse
        let rto = digits[0..2].parse().map_err(|_| malformed())?;
        let year = digits[2..6].parse().map_err(|_| malformed())?;
        let serial = digits[6..13].parse().map_err(|_| malformed())?;
        Ok(Self { rto, year, serial })
    }

    /// The next licence in issue order.
    pub fn next(&self) -> Result<Self, DlNumberError> {
        if self.serial >= SERIAL_MAX {
            return Err(DlNumberError::Overflow(self.to_string()));
        }
        Ok(Self {
            serial: self.serial + 1,
            ..*self
        })
    }

    /// `self` followed by up to `span` successors, stopping at the serial limit.
    pub fn range(&self, span: u32) -> impl Iterator<Item = DlNumber> + '_ {
        let last = self.serial.saturating_add(span).min(SERIAL_MAX);
        (self.serial..=last).map(move |serial| DlNumber { serial, ..*self })
    }
}

impl fmt::Display for DlNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{DL_STATE}-{:02}{:04}{:07}",
            self.rto, self.year, self.serial
        )
    }
}

impl FromStr for DlNumber {
    type Err = DlNumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for DlNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DlNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        DlNumber::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid PAN `{0}`: expected five letters, four digits, one letter")]
pub struct PanNumberError(pub String);

/// Permanent Account Number: `AAAAA9999A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PanNumber(String);

impl PanNumber {
    pub fn parse(text: &str) -> Result<Self, PanNumberError> {
        let upper = text.trim().to_ascii_uppercase();
        let b = upper.as_bytes();
        let ok = b.len() == 10
            && b[..5].iter().all(u8::is_ascii_uppercase)
            && b[5..9].iter().all(u8::is_ascii_digit)
            && b[9].is_ascii_uppercase();
        if ok {
            Ok(Self(upper))
        } else {
            Err(PanNumberError(text.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PanNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for PanNumber {
    type Err = PanNumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for PanNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for PanNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        PanNumber::parse(&text).map_err(serde::de::Error::custom)
    }
}
