use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters outside the regime where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An index set larger than the configured enumeration cap.
    #[error("index set for r={r}, d={d} has {size} pairs, exceeding the cap of {cap}")]
    ResourceCap { r: u32, d: u32, size: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
