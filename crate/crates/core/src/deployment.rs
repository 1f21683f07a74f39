//! Seeded UE drops inside the beam hexagons.
//!
//! UEs are uniform over each hexagon on the UV-plane. Every beam draws from
//! its own ChaCha8 stream keyed by `mix(seed, beam_id)`, so the result does
//! not depend on iteration order or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::layout::{hexagon_vertices, Beam, BeamLayout, BeamRole, UvPoint};
use crate::projection::{ground_point, los_geometry, GroundPoint, SatelliteState};

/// Name of the generator family, recorded in run manifests.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), per-beam seed = splitmix64(seed ^ splitmix64(beam_id))";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UeRecord {
    pub ue_id: usize,
    pub beam_id: usize,
    /// Role of the owning beam.
    pub role: BeamRole,
    pub uv: UvPoint,
    pub ground: GroundPoint,
    pub slant_range_km: f64,
    pub elevation_deg: f64,
    pub zod_deg: f64,
    pub aod_deg: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Stream seed for one beam.
pub fn beam_seed(seed: u64, beam_id: usize) -> u64 {
    splitmix64(seed ^ splitmix64(beam_id as u64))
}

pub fn beam_rng(seed: u64, beam_id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(beam_seed(seed, beam_id))
}

/// Uniform sample from the closed pointy-top hexagon.
///
/// Picks one of the six center-vertex-vertex triangles uniformly, then folds
/// a uniform point of the unit square into that triangle.
pub fn sample_point_in_hexagon<R: Rng + ?Sized>(center: UvPoint, circumradius: f64, rng: &mut R) -> UvPoint {
    let vertices = hexagon_vertices(center, circumradius);
    let k = rng.random_range(0..6usize);
    let (a, b) = (vertices[k], vertices[(k + 1) % 6]);
    let (mut s, mut t): (f64, f64) = (rng.random(), rng.random());
    if s + t > 1.0 {
        s = 1.0 - s;
        t = 1.0 - t;
    }
    UvPoint::new(
        center.u + s * (a.u - center.u) + t * (b.u - center.u),
        center.v + s * (a.v - center.v) + t * (b.v - center.v),
    )
}

/// Boundary-inclusive membership test against the six hexagon edges.
pub fn hexagon_contains(vertices: &[UvPoint; 6], p: UvPoint) -> bool {
    let scale = vertices[0].distance(&vertices[3]).max(f64::MIN_POSITIVE);
    let slack = 1e-12 * scale * scale;
    (0..6).all(|k| {
        let (a, b) = (vertices[k], vertices[(k + 1) % 6]);
        let cross = (b.u - a.u) * (p.v - a.v) - (b.v - a.v) * (p.u - a.u);
        cross >= -slack
    })
}

fn drop_in_beam(beam: &Beam, radius: f64, sat: &SatelliteState, ues_per_beam: usize, seed: u64) -> Result<Vec<UeRecord>> {
    let mut rng = beam_rng(seed, beam.id);
    (0..ues_per_beam)
        .map(|j| {
            let uv = sample_point_in_hexagon(beam.center_uv, radius, &mut rng);
            let los = los_geometry(uv, sat)?;
            Ok(UeRecord {
                ue_id: beam.id * ues_per_beam + j,
                beam_id: beam.id,
                role: beam.role,
                uv,
                ground: ground_point(&los, sat),
                slant_range_km: los.slant_range_km,
                elevation_deg: los.elevation_rad.to_degrees(),
                zod_deg: los.zod_rad.to_degrees(),
                aod_deg: los.aod_rad.to_degrees(),
            })
        })
        .collect()
}

/// Drops `ues_per_beam` UEs into every beam and projects them onto the Earth.
///
/// Records come back ordered by beam id, then by draw order; `ue_id` is
/// `beam_id * ues_per_beam + j`.
pub fn drop_ues(layout: &BeamLayout, sat: &SatelliteState, ues_per_beam: usize, seed: u64) -> Result<Vec<UeRecord>> {
    let per_beam: Vec<Vec<UeRecord>> = layout
        .beams
        .par_iter()
        .map(|beam| drop_in_beam(beam, layout.beam_radius, sat, ues_per_beam, seed))
        .collect::<Result<_>>()?;
    Ok(per_beam.into_iter().flatten().collect())
}
