//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps these onto exit codes: domain/validation failures exit
/// with 3, numerical failures (convergence, resources, fitting) with 4.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A mathematical precondition is violated (e.g. eta <= 3).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative scheme exhausted its budget before certifying the
    /// requested tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),
    /// A resource cap would be exceeded (e.g. expected Poisson count).
    #[error("resource limit: {0}")]
    Resource(String),
    /// A model fit is inapplicable to the supplied data.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
