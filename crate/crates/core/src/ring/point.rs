//! Positions on the unit ring and the hash functions that produce them.

use std::fmt;

use sha2::{Digest, Sha512};

use crate::error::{Error, Result};

/// A position on the unit ring: the fraction `value / 2^64` in `[0, 1)`.
///
/// Clockwise distances are computed modulo `2^64`, i.e. modulo 1 on the
/// fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HashPoint(pub u64);

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

impl HashPoint {
    /// Point for a fraction in `[0, 1)`, rounded down to the 64-bit grid.
    pub fn from_fraction(fraction: f64) -> Option<Self> {
        if !(0.0..1.0).contains(&fraction) {
            return None;
        }
        Some(HashPoint((fraction * TWO_POW_64) as u64))
    }

    pub fn as_fraction(self) -> f64 {
        self.0 as f64 / TWO_POW_64
    }

    /// Clockwise distance from `self` to `to`, modulo the ring.
    pub fn cw_distance(self, to: HashPoint) -> u64 {
        to.0.wrapping_sub(self.0)
    }
}

impl fmt::Display for HashPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.as_fraction())
    }
}

/// How identifiers are mapped onto the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HashBackend {
    /// First 64 bits of the SHA-512 digest of the identifier, big-endian.
    #[default]
    Sha512,
    /// Identifiers of the form `name@0.25` land exactly on the declared
    /// fraction (rounded down to the 64-bit grid). Used for fixtures.
    Fixture,
}

impl HashBackend {
    pub fn point(self, id: &str) -> Result<HashPoint> {
        if id.is_empty() {
            return Err(Error::InvalidId(id.to_string()));
        }
        match self {
            HashBackend::Sha512 => Ok(sha512_point(id.as_bytes())),
            HashBackend::Fixture => fixture_point(id),
        }
    }
}

/// Hashes `id` with the production backend.
pub fn hash_point(id: &str) -> Result<HashPoint> {
    HashBackend::Sha512.point(id)
}

fn sha512_point(bytes: &[u8]) -> HashPoint {
    let digest = Sha512::digest(bytes);
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    HashPoint(u64::from_be_bytes(head))
}

// Exact decimal parse: floor(digits * 2^64 / 10^k) in 128-bit arithmetic.
fn fixture_point(id: &str) -> Result<HashPoint> {
    let invalid = || Error::InvalidId(id.to_string());
    let (_, fraction) = id.rsplit_once('@').ok_or_else(invalid)?;
    let digits = match fraction.split_once('.') {
        Some(("0", d)) | Some(("", d)) => d,
        None if fraction == "0" => "",
        _ => return Err(invalid()),
    };
    if digits.len() > 19 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    if digits.is_empty() {
        return Ok(HashPoint(0));
    }
    let numerator: u128 = digits.parse().map_err(|_| invalid())?;
    let denominator = 10u128.pow(digits.len() as u32);
    Ok(HashPoint(((numerator << 64) / denominator) as u64))
}
