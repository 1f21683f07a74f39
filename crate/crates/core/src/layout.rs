//! Hexagonal beam layout on the satellite UV-plane.
//!
//! Beam boresights sit on a pointy-top hexagonal lattice whose spacing is the
//! adjacent beam spacing `ABS = sqrt(3) * sin(theta_3dB / 2)`. The lattice is
//! shifted along +U so that the central beam points at the configured
//! elevation. Beams in rings 0..=2 (19 beams) collect statistics; the outer
//! rings only act as interferers.

use std::f64::consts::FRAC_PI_3;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::SatelliteState;

pub const DEFAULT_EARTH_RADIUS_KM: f64 = 6371.0;

/// Number of beams that collect statistics (central beam plus two rings).
pub const STATISTICS_BEAMS: usize = 19;
const STATISTICS_RING: u32 = 2;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

// ============================================================================
// Scenario
// ============================================================================

/// Frequency reuse factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Frf {
    One,
    Three,
}

impl Frf {
    /// Ring count used when the configuration does not specify one.
    pub fn default_rings(self) -> u32 {
        match self {
            Frf::One => 4,
            Frf::Three => 6,
        }
    }
}

impl TryFrom<u32> for Frf {
    type Error = Error;

    fn try_from(value: u32) -> Result<Self> {
        match value {
            1 => Ok(Frf::One),
            3 => Ok(Frf::Three),
            other => Err(Error::UnsupportedFrf(other)),
        }
    }
}

impl From<Frf> for u32 {
    fn from(frf: Frf) -> u32 {
        match frf {
            Frf::One => 1,
            Frf::Three => 3,
        }
    }
}

impl fmt::Display for Frf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u32::from(*self))
    }
}

/// Everything needed to build a layout and drop UEs into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub earth_radius_km: f64,
    /// Satellite altitude above the Earth's surface.
    pub altitude_km: f64,
    pub beamwidth_3db_deg: f64,
    pub frf: Frf,
    /// Hex rings around the central beam.
    pub rings: u32,
    /// Elevation angle of the central beam boresight, seen from the ground.
    pub center_elevation_deg: f64,
    pub ues_per_beam: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.earth_radius_km > 0.0 && self.earth_radius_km.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "earth radius must be positive, got {} km",
                self.earth_radius_km
            )));
        }
        if !(self.altitude_km > 0.0 && self.altitude_km.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "altitude must be positive, got {} km",
                self.altitude_km
            )));
        }
        check_beamwidth(self.beamwidth_3db_deg)?;
        check_elevation(self.center_elevation_deg)?;
        if self.ues_per_beam == 0 {
            return Err(Error::InvalidConfig("ues_per_beam must be at least 1".into()));
        }
        Ok(())
    }

    pub fn satellite(&self) -> SatelliteState {
        SatelliteState::new(self.earth_radius_km, self.altitude_km)
    }
}

fn check_beamwidth(beamwidth_3db_deg: f64) -> Result<()> {
    if beamwidth_3db_deg > 0.0 && beamwidth_3db_deg < 180.0 {
        Ok(())
    } else {
        Err(Error::InvalidBeamwidth(beamwidth_3db_deg))
    }
}

fn check_elevation(elevation_deg: f64) -> Result<()> {
    if elevation_deg > 0.0 && elevation_deg <= 90.0 {
        Ok(())
    } else {
        Err(Error::InvalidElevation(elevation_deg))
    }
}

// ============================================================================
// UV-plane primitives
// ============================================================================

/// Point on the UV-plane. Coordinates are direction sines, so `|uv| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UvPoint {
    pub u: f64,
    pub v: f64,
}

impl UvPoint {
    pub const ORIGIN: UvPoint = UvPoint { u: 0.0, v: 0.0 };

    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    /// Distance from the UV origin (the nadir direction).
    pub fn norm(&self) -> f64 {
        self.u.hypot(self.v)
    }

    pub fn distance(&self, other: &UvPoint) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }

    /// Rotates counter-clockwise about the UV origin.
    pub fn rotated(&self, angle_rad: f64) -> Self {
        let (s, c) = angle_rad.sin_cos();
        Self::new(self.u * c - self.v * s, self.u * s + self.v * c)
    }

    pub(crate) fn offset(&self, du: f64, dv: f64) -> Self {
        Self::new(self.u + du, self.v + dv)
    }

    pub(crate) fn lerp(&self, other: &UvPoint, t: f64) -> Self {
        Self::new(self.u + t * (other.u - self.u), self.v + t * (other.v - self.v))
    }
}

/// Axial coordinate on the hexagonal beam lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexIndex {
    pub q: i32,
    pub r: i32,
}

/// Axial steps to the six edge neighbours, counter-clockwise from +q.
pub const HEX_DIRECTIONS: [HexIndex; 6] = [
    HexIndex { q: 1, r: 0 },
    HexIndex { q: 0, r: 1 },
    HexIndex { q: -1, r: 1 },
    HexIndex { q: -1, r: 0 },
    HexIndex { q: 0, r: -1 },
    HexIndex { q: 1, r: -1 },
];

impl HexIndex {
    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    /// Hex distance from the central beam.
    pub fn ring(&self) -> u32 {
        (self.q.unsigned_abs() + self.r.unsigned_abs() + (self.q + self.r).unsigned_abs()) / 2
    }

    pub fn neighbors(&self) -> [HexIndex; 6] {
        HEX_DIRECTIONS.map(|d| HexIndex::new(self.q + d.q, self.r + d.r))
    }

    fn step(&self, dir: HexIndex, n: i32) -> Self {
        Self::new(self.q + n * dir.q, self.r + n * dir.r)
    }
}

// ============================================================================
// Beam geometry
// ============================================================================

/// Beam radius on the UV-plane, `sin(theta_3dB / 2)`.
pub fn beam_radius(beamwidth_3db_deg: f64) -> Result<f64> {
    check_beamwidth(beamwidth_3db_deg)?;
    Ok((beamwidth_3db_deg.to_radians() / 2.0).sin())
}

/// Distance between neighbouring beam centers, `sqrt(3) * beam_radius`.
pub fn adjacent_beam_spacing(beamwidth_3db_deg: f64) -> Result<f64> {
    Ok(SQRT_3 * beam_radius(beamwidth_3db_deg)?)
}

/// U-coordinate of the central beam boresight for a given ground elevation.
///
/// From the Earth-center / satellite / UE triangle, the boresight nadir angle
/// `omega` obeys `sin(omega) = r_E * cos(elevation) / (r_E + a)`, and on the
/// unit sphere `u = sin(omega)`.
pub fn center_offset(center_elevation_deg: f64, earth_radius_km: f64, altitude_km: f64) -> Result<f64> {
    check_elevation(center_elevation_deg)?;
    Ok(earth_radius_km * center_elevation_deg.to_radians().cos() / (earth_radius_km + altitude_km))
}

/// All lattice indices within `rings` of the center.
///
/// Ordered ring by ring; each ring starts on the +q axis and sweeps
/// counter-clockwise.
pub fn hex_grid(rings: u32) -> Vec<HexIndex> {
    let n = rings as usize;
    let mut out = Vec::with_capacity(1 + 3 * n * (n + 1));
    out.push(HexIndex::new(0, 0));
    for k in 1..=rings as i32 {
        let mut cur = HexIndex::new(k, 0);
        // walking direction i + 2 traces the side that starts at corner i
        for side in 0..6 {
            let dir = HEX_DIRECTIONS[(side + 2) % 6];
            for _ in 0..k {
                out.push(cur);
                cur = cur.step(dir, 1);
            }
        }
        debug_assert_eq!(cur, HexIndex::new(k, 0));
    }
    out
}

/// Reuse color of a beam: always 0 for FRF 1, `(q - r) mod 3` for FRF 3.
pub fn frf_color(index: HexIndex, frf: Frf) -> u8 {
    match frf {
        Frf::One => 0,
        Frf::Three => (index.q - index.r).rem_euclid(3) as u8,
    }
}

/// Corners of a pointy-top hexagon, counter-clockwise starting at 30 degrees.
pub fn hexagon_vertices(center: UvPoint, circumradius: f64) -> [UvPoint; 6] {
    std::array::from_fn(|k| {
        let angle = FRAC_PI_3 / 2.0 + FRAC_PI_3 * k as f64;
        center.offset(circumradius * angle.cos(), circumradius * angle.sin())
    })
}

// ============================================================================
// Layout
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamRole {
    /// Inner beams whose UEs feed performance statistics.
    Statistics,
    /// Outer tiers that only generate interference.
    Interference,
}

impl BeamRole {
    pub fn for_ring(ring: u32) -> Self {
        if ring <= STATISTICS_RING {
            BeamRole::Statistics
        } else {
            BeamRole::Interference
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BeamRole::Statistics => "statistics",
            BeamRole::Interference => "interference",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub id: usize,
    pub index: HexIndex,
    pub center_uv: UvPoint,
    pub vertices_uv: [UvPoint; 6],
    pub color: u8,
    pub role: BeamRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamLayout {
    /// Beam radius `D` (hexagon circumradius).
    pub beam_radius: f64,
    pub spacing: f64,
    pub center: UvPoint,
    pub frf: Frf,
    pub beams: Vec<Beam>,
}

impl BeamLayout {
    pub fn len(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty()
    }

    pub fn statistics_beams(&self) -> impl Iterator<Item = &Beam> {
        self.beams.iter().filter(|b| b.role == BeamRole::Statistics)
    }

    pub fn beam(&self, id: usize) -> Option<&Beam> {
        self.beams.get(id)
    }

    /// Pairs of beam ids that share a hexagon edge.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let by_index: std::collections::HashMap<HexIndex, usize> =
            self.beams.iter().map(|b| (b.index, b.id)).collect();
        let mut pairs = Vec::new();
        for beam in &self.beams {
            for n in beam.index.neighbors() {
                if let Some(&other) = by_index.get(&n) {
                    if beam.id < other {
                        pairs.push((beam.id, other));
                    }
                }
            }
        }
        pairs
    }
}

/// Builds the beam layout for a scenario.
///
/// Fails when any beam hexagon reaches past the horizon disk of radius
/// `r_E / (r_E + a)`, since such beams would not land on the Earth.
pub fn build_layout(config: &ScenarioConfig) -> Result<BeamLayout> {
    config.validate()?;
    let radius = beam_radius(config.beamwidth_3db_deg)?;
    let spacing = adjacent_beam_spacing(config.beamwidth_3db_deg)?;
    let center = UvPoint::new(
        center_offset(config.center_elevation_deg, config.earth_radius_km, config.altitude_km)?,
        0.0,
    );
    let limit = config.satellite().horizon_limit();

    // pointy-top basis: A1 = ABS (1, 0), A2 = ABS (1/2, sqrt(3)/2)
    let (a1, a2) = ((spacing, 0.0), (spacing * 0.5, spacing * SQRT_3 * 0.5));

    let mut beams = Vec::new();
    for (id, index) in hex_grid(config.rings).into_iter().enumerate() {
        let (q, r) = (index.q as f64, index.r as f64);
        let center_uv = center.offset(q * a1.0 + r * a2.0, q * a1.1 + r * a2.1);
        let vertices_uv = hexagon_vertices(center_uv, radius);
        for p in std::iter::once(&center_uv).chain(vertices_uv.iter()) {
            let d_uv = p.norm();
            if d_uv > limit {
                return Err(Error::BeyondHorizon { d_uv, limit });
            }
        }
        beams.push(Beam {
            id,
            index,
            center_uv,
            vertices_uv,
            color: frf_color(index, config.frf),
            role: BeamRole::for_ring(index.ring()),
        });
    }

    Ok(BeamLayout { beam_radius: radius, spacing, center, frf: config.frf, beams })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leo_s(frf: Frf, rings: u32) -> ScenarioConfig {
        ScenarioConfig {
            earth_radius_km: DEFAULT_EARTH_RADIUS_KM,
            altitude_km: 1200.0,
            beamwidth_3db_deg: 4.4127,
            frf,
            rings,
            center_elevation_deg: 70.0,
            ues_per_beam: 10,
            seed: 0,
        }
    }

    #[test]
    fn beam_radius_matches_leo_s_band() {
        // sin(2.20635 deg)
        let d = beam_radius(4.4127).unwrap();
        assert!((d - 0.038498556).abs() < 1e-9, "{d}");
        assert_eq!(format!("{:.4}", SQRT_3 * d), "0.0667");
        let d = beam_radius(0.4011).unwrap();
        assert!((d - 0.0035003).abs() < 1e-7, "{d}");
    }

    #[test]
    fn beam_radius_small_angle() {
        let d = beam_radius(1e-12).unwrap();
        assert!(d > 0.0 && d < 1e-12);
    }

    #[test]
    fn beam_radius_rejects_out_of_domain() {
        for bad in [0.0, -1.0, 180.0, 200.0, f64::NAN] {
            assert!(matches!(beam_radius(bad), Err(Error::InvalidBeamwidth(_))), "{bad}");
            assert!(adjacent_beam_spacing(bad).is_err());
        }
    }

    #[test]
    fn spacing_examples() {
        let round4 = |x: f64| format!("{x:.4}");
        assert_eq!(round4(adjacent_beam_spacing(4.4127).unwrap()), "0.0667");
        assert_eq!(round4(adjacent_beam_spacing(8.832).unwrap()), "0.1334");
        assert_eq!(round4(adjacent_beam_spacing(0.1765).unwrap()), "0.0027");
    }

    #[test]
    fn center_offset_examples() {
        let uc = center_offset(70.0, 6371.0, 1200.0).unwrap();
        assert_eq!(format!("{uc:.4}"), "0.2878");
        assert!(center_offset(90.0, 6371.0, 1200.0).unwrap().abs() < 1e-16);
        // horizon limit as elevation -> 0
        let near = center_offset(1e-9, 6371.0, 1200.0).unwrap();
        assert!((near - 6371.0 / 7571.0).abs() < 1e-12);
        assert!((format!("{near:.5}")) == "0.84150");
    }

    #[test]
    fn center_offset_rejects_bad_elevation() {
        assert!(matches!(center_offset(0.0, 6371.0, 1200.0), Err(Error::InvalidElevation(_))));
        assert!(matches!(center_offset(90.5, 6371.0, 1200.0), Err(Error::InvalidElevation(_))));
        assert!(center_offset(-10.0, 6371.0, 1200.0).is_err());
    }

    #[test]
    fn hex_grid_counts() {
        assert_eq!(hex_grid(0), vec![HexIndex::new(0, 0)]);
        assert_eq!(hex_grid(4).len(), 61);
        assert_eq!(hex_grid(6).len(), 127);
        for n in 0..=10u32 {
            let grid = hex_grid(n);
            let n = n as usize;
            assert_eq!(grid.len(), 1 + 3 * n * (n + 1));
            let unique: std::collections::HashSet<_> = grid.iter().collect();
            assert_eq!(unique.len(), grid.len());
        }
    }

    #[test]
    fn hex_grid_order_is_ring_major_counter_clockwise() {
        let grid = hex_grid(3);
        let rings: Vec<u32> = grid.iter().map(HexIndex::ring).collect();
        assert!(rings.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(&grid[1..7], &HEX_DIRECTIONS);
        // second ring starts on +q and each step moves to an adjacent hex
        assert_eq!(grid[7], HexIndex::new(2, 0));
        for w in grid[7..19].windows(2) {
            assert!(w[0].neighbors().contains(&w[1]));
        }
        // counter-clockwise in the pointy-top embedding
        let angle = |h: &HexIndex| {
            let (x, y) = (h.q as f64 + 0.5 * h.r as f64, SQRT_3 * 0.5 * h.r as f64);
            y.atan2(x).rem_euclid(std::f64::consts::TAU)
        };
        let ring2: Vec<f64> = grid[7..19].iter().map(angle).collect();
        assert!(ring2.windows(2).all(|w| w[0] < w[1]), "{ring2:?}");
    }

    #[test]
    fn frf_color_examples() {
        assert_eq!(frf_color(HexIndex::new(0, 0), Frf::One), 0);
        assert_eq!(frf_color(HexIndex::new(0, 0), Frf::Three), 0);
        for n in HexIndex::new(0, 0).neighbors() {
            let c = frf_color(n, Frf::Three);
            assert!(c == 1 || c == 2, "{n:?} -> {c}");
        }
        assert_eq!(frf_color(HexIndex::new(2, -1), Frf::Three), 0);
        assert_eq!(frf_color(HexIndex::new(-3, 5), Frf::One), 0);
    }

    #[test]
    fn unsupported_frf() {
        assert!(matches!(Frf::try_from(2), Err(Error::UnsupportedFrf(2))));
        assert_eq!(Frf::try_from(3).unwrap(), Frf::Three);
        let json: std::result::Result<Frf, _> = serde_json::from_str("4");
        assert!(json.is_err());
    }

    #[test]
    fn leo_layout_frf1() {
        let layout = build_layout(&leo_s(Frf::One, 4)).unwrap();
        assert_eq!(layout.len(), 61);
        assert_eq!(layout.statistics_beams().count(), STATISTICS_BEAMS);
        let c = layout.beams[0].center_uv;
        assert_eq!(format!("{:.4}", c.u), "0.2878");
        assert_eq!(c.v, 0.0);
        assert!(layout.beams.iter().all(|b| b.color == 0));
    }

    #[test]
    fn leo_layout_frf3_color_classes() {
        let layout = build_layout(&leo_s(Frf::Three, 6)).unwrap();
        assert_eq!(layout.len(), 127);
        // oracle: direct count of (q - r) mod 3 over the index set
        let mut expected = [0usize; 3];
        for h in hex_grid(6) {
            expected[(((h.q - h.r) % 3 + 3) % 3) as usize] += 1;
        }
        let mut got = [0usize; 3];
        for b in &layout.beams {
            got[b.color as usize] += 1;
        }
        assert_eq!(got, expected);
        let mut sorted = got;
        sorted.sort_unstable();
        assert_eq!(sorted, [42, 42, 43]);
    }

    #[test]
    fn single_nadir_beam() {
        let mut cfg = leo_s(Frf::One, 0);
        cfg.center_elevation_deg = 90.0;
        let layout = build_layout(&cfg).unwrap();
        assert_eq!(layout.len(), 1);
        assert!(layout.beams[0].center_uv.norm() < 1e-15);
        assert_eq!(layout.beams[0].role, BeamRole::Statistics);
    }

    #[test]
    fn vertices_at_circumradius() {
        let layout = build_layout(&leo_s(Frf::Three, 6)).unwrap();
        for b in &layout.beams {
            for v in &b.vertices_uv {
                let d = b.center_uv.distance(v);
                assert!((d - layout.beam_radius).abs() <= 1e-12 * layout.beam_radius);
            }
        }
    }

    #[test]
    fn adjacent_centers_are_abs_apart_and_colors_differ() {
        for rings in 0..=6 {
            let layout = build_layout(&leo_s(Frf::Three, rings)).unwrap();
            for (a, b) in layout.adjacent_pairs() {
                let (a, b) = (&layout.beams[a], &layout.beams[b]);
                let d = a.center_uv.distance(&b.center_uv);
                assert!((d - layout.spacing).abs() <= 1e-12 * layout.spacing, "{d}");
                assert_ne!(a.color, b.color);
            }
        }
    }

    #[test]
    fn neighbouring_hexagons_share_an_edge() {
        let layout = build_layout(&leo_s(Frf::One, 1)).unwrap();
        let center = &layout.beams[0];
        let east = &layout.beams[1];
        // vertices at 30 and -30 degrees of the center are the 150 and 210 vertices of the east beam
        for (i, j) in [(0, 2), (5, 3)] {
            let d = center.vertices_uv[i].distance(&east.vertices_uv[j]);
            assert!(d < 1e-15, "{d}");
        }
    }

    #[test]
    fn statistics_role_count() {
        for rings in 2..=8 {
            let mut cfg = leo_s(Frf::One, rings);
            cfg.beamwidth_3db_deg = 1.7647;
            let layout = build_layout(&cfg).unwrap();
            assert_eq!(layout.statistics_beams().count(), STATISTICS_BEAMS);
        }
    }

    #[test]
    fn layout_past_horizon_is_rejected() {
        let mut cfg = leo_s(Frf::One, 4);
        cfg.center_elevation_deg = 0.0001;
        assert!(matches!(build_layout(&cfg), Err(Error::BeyondHorizon { .. })));
    }

    #[test]
    fn config_validation() {
        let mut cfg = leo_s(Frf::One, 4);
        cfg.ues_per_beam = 0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        let mut cfg = leo_s(Frf::One, 4);
        cfg.altitude_km = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = leo_s(Frf::One, 4);
        cfg.earth_radius_km = 0.0;
        assert!(cfg.validate().is_err());
    }
}
