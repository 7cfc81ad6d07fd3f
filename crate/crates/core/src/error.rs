use thiserror::Error;

/// Errors raised by the geometry, curve and flow routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot normalize a zero vector onto the sphere")]
    ZeroVector,

    #[error("point lies within {tolerance:e} of the pole (or antipole) of the reference circle")]
    PoleDegenerate { tolerance: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("curve needs at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },

    #[error("edge {index} has geodesic length {length:e}, outside (1e-8, pi/2)")]
    BadEdge { index: usize, length: f64 },

    #[error("curve is not embedded: segments {first} and {second} intersect")]
    NotEmbedded { first: usize, second: usize },

    #[error("arc endpoints are antipodal; the Dirichlet problem has no unique geodesic")]
    AntipodalEndpoints,

    #[error("trajectory never enters the cap before t = {max_time}")]
    NeverEnters { max_time: f64 },

    #[error("graph left the chart (|u| beyond the pole guard) at t = {time}")]
    BlowUp { time: f64 },

    #[error("offset at level {level} (eps = {eps:e}) could not be made embedded on the correct side")]
    OffsetCollision { level: usize, eps: f64 },

    #[error("no (C, theta)-spacing found: {0}")]
    SpacingNotFound(String),

    #[error("annulus boundary became extinct at t = {time} before the requested end time")]
    ExtinctionBeforeEnd { time: f64 },

    #[error("invalid generator parameters: {0}")]
    ParamDomain(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
