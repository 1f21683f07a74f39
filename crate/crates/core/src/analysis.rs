//! Slant-range statistics, projected beam footprints and derived constants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::deployment::UeRecord;
use crate::error::{Error, Result};
use crate::layout::{
    adjacent_beam_spacing, beam_radius, center_offset, BeamLayout, BeamRole, ScenarioConfig, STATISTICS_BEAMS,
};
use crate::projection::{uv_to_earth, GroundPoint, SatelliteState};

pub const DEFAULT_BINS: usize = 50;
pub const DEFAULT_EDGE_SAMPLES: usize = 8;

// ============================================================================
// Slant-range statistics
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower_km: f64,
    pub upper_km: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamStats {
    pub beam_id: usize,
    pub role: BeamRole,
    pub ue_count: usize,
    pub min_slant_km: f64,
    pub max_slant_km: f64,
    pub mean_slant_km: f64,
    pub min_elevation_deg: f64,
    pub max_elevation_deg: f64,
    /// Equal-width bins over the global slant-range span, shared by all beams.
    pub histogram: Vec<HistogramBin>,
}

/// Per-beam slant-range statistics, sorted by beam id.
///
/// All histograms share the same bin edges, spanning the global
/// `[min, max]` slant range. When that span is zero a single bin is used.
pub fn beam_stats(ues: &[UeRecord], bins: usize) -> Result<Vec<BeamStats>> {
    if ues.is_empty() {
        return Err(Error::EmptyInput);
    }
    if bins == 0 {
        return Err(Error::InvalidConfig("histogram needs at least one bin".into()));
    }
    let (lo, hi) = ues.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), ue| {
        (lo.min(ue.slant_range_km), hi.max(ue.slant_range_km))
    });
    let span = hi - lo;
    let bins = if span > 0.0 { bins } else { 1 };
    let width = span / bins as f64;
    let edges: Vec<(f64, f64)> = (0..bins)
        .map(|i| {
            let upper = if i + 1 == bins { hi } else { lo + width * (i + 1) as f64 };
            (lo + width * i as f64, upper)
        })
        .collect();
    let bin_of = |x: f64| -> usize {
        if span > 0.0 {
            (((x - lo) / width) as usize).min(bins - 1)
        } else {
            0
        }
    };

    let mut groups: BTreeMap<usize, Vec<&UeRecord>> = BTreeMap::new();
    for ue in ues {
        groups.entry(ue.beam_id).or_default().push(ue);
    }

    let stats = groups
        .into_iter()
        .map(|(beam_id, members)| {
            let mut counts = vec![0usize; bins];
            let mut sum = 0.0;
            let (mut min_s, mut max_s) = (f64::INFINITY, f64::NEG_INFINITY);
            let (mut min_e, mut max_e) = (f64::INFINITY, f64::NEG_INFINITY);
            for ue in &members {
                counts[bin_of(ue.slant_range_km)] += 1;
                sum += ue.slant_range_km;
                min_s = min_s.min(ue.slant_range_km);
                max_s = max_s.max(ue.slant_range_km);
                min_e = min_e.min(ue.elevation_deg);
                max_e = max_e.max(ue.elevation_deg);
            }
            // guard the mean against rounding past the extrema
            let mean = (sum / members.len() as f64).clamp(min_s, max_s);
            BeamStats {
                beam_id,
                role: members[0].role,
                ue_count: members.len(),
                min_slant_km: min_s,
                max_slant_km: max_s,
                mean_slant_km: mean,
                min_elevation_deg: min_e,
                max_elevation_deg: max_e,
                histogram: edges
                    .iter()
                    .zip(counts)
                    .map(|(&(lower_km, upper_km), count)| HistogramBin { lower_km, upper_km, count })
                    .collect(),
            }
        })
        .collect();
    Ok(stats)
}

/// Layout-wide (min, max) slant range over a set of beam statistics.
pub fn global_slant_range(stats: &[BeamStats]) -> Option<(f64, f64)> {
    if stats.is_empty() {
        return None;
    }
    Some(stats.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s.min_slant_km), hi.max(s.max_slant_km))
    }))
}

// ============================================================================
// Footprints
// ============================================================================

/// A beam hexagon projected onto the Earth as a closed polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub beam_id: usize,
    /// First point repeated at the end.
    pub boundary: Vec<GroundPoint>,
}

impl Footprint {
    /// Shoelace area on the plane tangent to the sphere at the footprint centroid.
    ///
    /// Planar approximation; good to well under a percent at beam scale.
    pub fn tangent_plane_area_km2(&self) -> f64 {
        let pts = &self.boundary[..self.boundary.len().saturating_sub(1)];
        if pts.len() < 3 {
            return 0.0;
        }
        let n = pts.len() as f64;
        let (sx, sy, sz) = pts.iter().fold((0.0, 0.0, 0.0), |(x, y, z), p| (x + p.x, y + p.y, z + p.z));
        let centroid = GroundPoint::new(sx / n, sy / n, sz / n);
        let len = centroid.norm();
        let normal = [centroid.x / len, centroid.y / len, centroid.z / len];

        // any axis not parallel to the normal seeds the tangent basis
        let seed = if normal[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let e1 = normalize(cross(normal, seed));
        let e2 = cross(normal, e1);

        let local: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| {
                let d = [p.x - centroid.x, p.y - centroid.y, p.z - centroid.z];
                (dot3(d, e1), dot3(d, e2))
            })
            .collect();
        let twice: f64 = (0..local.len())
            .map(|i| {
                let (a, b) = (local[i], local[(i + 1) % local.len()]);
                a.0 * b.1 - b.0 * a.1
            })
            .sum();
        twice.abs() / 2.0
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot3(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Projects every beam outline onto the Earth.
///
/// Each hexagon edge contributes `samples_per_edge` points, starting at its
/// first vertex, so a footprint has `6 * samples_per_edge + 1` points.
pub fn project_footprints(layout: &BeamLayout, sat: &SatelliteState, samples_per_edge: usize) -> Result<Vec<Footprint>> {
    if samples_per_edge == 0 {
        return Err(Error::InvalidConfig("samples_per_edge must be at least 1".into()));
    }
    layout
        .beams
        .iter()
        .map(|beam| {
            let mut boundary = Vec::with_capacity(6 * samples_per_edge + 1);
            for k in 0..6 {
                let (a, b) = (beam.vertices_uv[k], beam.vertices_uv[(k + 1) % 6]);
                for j in 0..samples_per_edge {
                    let t = j as f64 / samples_per_edge as f64;
                    boundary.push(uv_to_earth(a.lerp(&b, t), sat)?);
                }
            }
            boundary.push(boundary[0]);
            Ok(Footprint { beam_id: beam.id, boundary })
        })
        .collect()
}

// ============================================================================
// Scenario summary
// ============================================================================

/// Derived constants of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub beam_radius: f64,
    pub adjacent_beam_spacing: f64,
    pub center_u: f64,
    pub horizon_limit: f64,
    pub beam_count: usize,
    pub statistics_beam_count: usize,
}

pub fn scenario_summary(config: &ScenarioConfig) -> Result<ScenarioSummary> {
    config.validate()?;
    let n = config.rings as usize;
    let beam_count = 1 + 3 * n * (n + 1);
    Ok(ScenarioSummary {
        beam_radius: beam_radius(config.beamwidth_3db_deg)?,
        adjacent_beam_spacing: adjacent_beam_spacing(config.beamwidth_3db_deg)?,
        center_u: center_offset(config.center_elevation_deg, config.earth_radius_km, config.altitude_km)?,
        horizon_limit: config.satellite().horizon_limit(),
        beam_count,
        statistics_beam_count: beam_count.min(STATISTICS_BEAMS),
    })
}
