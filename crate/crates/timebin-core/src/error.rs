use thiserror::Error;

/// Errors from the amplitude engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    /// Emission happens in bins {0, 1}; slot 2 only exists after the AMZI.
    #[error("invalid emission bin {0}: emission occurs in bins 0 and 1 only")]
    InvalidEmissionBin(u8),

    /// Post-selection predicate matched a subset with (numerically) zero
    /// probability mass, so the conditional distribution is undefined.
    #[error("post-selection retained probability mass {0:.3e} < 1e-15")]
    ZeroMassSelection(f64),
}
