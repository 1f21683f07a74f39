//! UV-plane beam mapping for non-terrestrial network system-level simulation.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`layout`] places hexagonal beams on the satellite UV-plane, spaced by
//!    the adjacent beam spacing derived from the 3dB beamwidth.
//! 2. [`deployment`] drops seeded, uniformly distributed UEs into each beam.
//! 3. [`projection`] maps every UV point onto the spherical Earth and
//!    reports slant range, elevation and LOS departure angles.
//! 4. [`analysis`] aggregates slant-range statistics and projected beam
//!    footprints.
//!
//! [`cli`] wires the stages together and writes plot-ready CSV/JSON files.

pub mod analysis;
pub mod cli;
pub mod deployment;
pub mod error;
pub mod layout;
pub mod projection;

pub use analysis::{beam_stats, project_footprints, scenario_summary, BeamStats, Footprint, ScenarioSummary};
pub use deployment::{drop_ues, sample_point_in_hexagon, UeRecord};
pub use error::{Error, Result};
pub use layout::{
    adjacent_beam_spacing, beam_radius, build_layout, center_offset, frf_color, hex_grid, Beam, BeamLayout,
    BeamRole, Frf, HexIndex, ScenarioConfig, UvPoint,
};
pub use projection::{earth_to_uv, horizon_limit, los_geometry, uv_to_earth, GroundPoint, LosGeometry, SatelliteState};
