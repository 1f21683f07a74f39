//! Error type shared by every stage of the pipeline.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("3dB beamwidth must lie in (0, 180) degrees, got {0}")]
    InvalidBeamwidth(f64),

    #[error("center-beam elevation must lie in (0, 90] degrees, got {0}")]
    InvalidElevation(f64),

    #[error("unsupported frequency reuse factor {0} (expected 1 or 3)")]
    UnsupportedFrf(u32),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A UV point (or beam extent) lies outside the disk of directions that hit the Earth.
    #[error("UV radius {d_uv} exceeds horizon limit {limit}: point does not map onto the visible Earth")]
    BeyondHorizon { d_uv: f64, limit: f64 },

    #[error("point is not on the Earth sphere (|p| = {norm_km} km, expected {earth_radius_km} km)")]
    NotOnSphere { norm_km: f64, earth_radius_km: f64 },

    #[error("ground point is not visible from the satellite (beyond the tangent circle)")]
    NotVisible,

    #[error("no UE records to analyze")]
    EmptyInput,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    /// Process exit code for the CLI: 1 configuration, 2 geometry, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidBeamwidth(_)
            | Error::InvalidElevation(_)
            | Error::UnsupportedFrf(_)
            | Error::UnknownPreset(_)
            | Error::InvalidConfig(_) => 1,
            Error::BeyondHorizon { .. }
            | Error::NotOnSphere { .. }
            | Error::NotVisible
            | Error::EmptyInput => 2,
            Error::Io { .. } | Error::Serialize(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
