//! Mapping between the UV-plane and the spherical Earth.
//!
//! Frame: Earth center at the origin, satellite on the +z axis at
//! `[0, 0, r_E + a]`, U along +x, V along +y, nadir along -z. A UV point
//! `(u, v)` names the direction whose sines against the U and V axes are `u`
//! and `v`; its ground image is where that ray first meets the Earth.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::UvPoint;

/// Relative tolerance for "on the sphere" checks.
pub const ON_SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatelliteState {
    pub earth_radius_km: f64,
    pub altitude_km: f64,
}

impl SatelliteState {
    pub fn new(earth_radius_km: f64, altitude_km: f64) -> Self {
        Self { earth_radius_km, altitude_km }
    }

    /// Distance from the Earth's center, `r_E + a`.
    pub fn orbit_radius_km(&self) -> f64 {
        self.earth_radius_km + self.altitude_km
    }

    pub fn position(&self) -> GroundPoint {
        GroundPoint::new(0.0, 0.0, self.orbit_radius_km())
    }

    /// Largest UV radius whose ray still reaches the Earth, `r_E / (r_E + a)`.
    pub fn horizon_limit(&self) -> f64 {
        self.earth_radius_km / self.orbit_radius_km()
    }

    /// Slant range to the tangent circle, `sqrt(a^2 + 2 r_E a)`.
    pub fn max_slant_range_km(&self) -> f64 {
        let (r, a) = (self.earth_radius_km, self.altitude_km);
        (a * a + 2.0 * r * a).sqrt()
    }
}

/// Free-standing form of [`SatelliteState::horizon_limit`].
pub fn horizon_limit(sat: &SatelliteState) -> f64 {
    sat.horizon_limit()
}

/// Cartesian point in the satellite-nadir frame, kilometers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroundPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &GroundPoint) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn sub(&self, other: &GroundPoint) -> GroundPoint {
        GroundPoint::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn distance(&self, other: &GroundPoint) -> f64 {
        self.sub(other).norm()
    }

    /// Rotation about the z axis (the satellite's nadir axis).
    pub fn rotated_z(&self, angle_rad: f64) -> GroundPoint {
        let (s, c) = angle_rad.sin_cos();
        GroundPoint::new(self.x * c - self.y * s, self.x * s + self.y * c, self.z)
    }
}

/// Line-of-sight quantities for one UV point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LosGeometry {
    /// Distance from the satellite to the UV point on the unit-sphere scale.
    pub d_uv: f64,
    /// Angle between the nadir line and the satellite-UE line.
    pub omega_rad: f64,
    pub zod_rad: f64,
    pub aod_rad: f64,
    /// Elevation of the satellite seen from the UE.
    pub elevation_rad: f64,
    pub slant_range_km: f64,
}

/// Line-of-sight geometry of a UV point.
///
/// `d_uv` is the in-plane offset `|uv|`, `omega = asin(d_uv)`,
/// `zod = pi - omega`, `aod = atan2(v, u)`. The elevation follows from the
/// Earth-center/satellite/UE triangle and the slant range from the law of
/// cosines solved for the satellite-UE side.
pub fn los_geometry(p_uv: UvPoint, sat: &SatelliteState) -> Result<LosGeometry> {
    let d_uv = p_uv.norm();
    let limit = sat.horizon_limit();
    if d_uv.is_nan() || d_uv > limit {
        return Err(Error::BeyondHorizon { d_uv, limit });
    }
    let (r, a) = (sat.earth_radius_km, sat.altitude_km);

    let omega_rad = d_uv.asin();
    let zod_rad = PI - omega_rad;
    let aod_rad = p_uv.v.atan2(p_uv.u);
    // rounding can nudge the argument past 1 exactly at the horizon
    let cos_elev = (sat.orbit_radius_km() * zod_rad.sin() / r).min(1.0);
    let elevation_rad = cos_elev.acos();
    let sin_elev = elevation_rad.sin();
    let slant_range_km = -r * sin_elev + (r * r * sin_elev * sin_elev + a * a + 2.0 * r * a).sqrt();

    Ok(LosGeometry { d_uv, omega_rad, zod_rad, aod_rad, elevation_rad, slant_range_km })
}

/// Ground position of a UV point given its line-of-sight geometry.
pub fn ground_point(los: &LosGeometry, sat: &SatelliteState) -> GroundPoint {
    let (sin_zod, cos_zod) = los.zod_rad.sin_cos();
    let (sin_aod, cos_aod) = los.aod_rad.sin_cos();
    let d = los.slant_range_km;
    let ps = sat.position();
    GroundPoint::new(
        ps.x + d * sin_zod * cos_aod,
        ps.y + d * sin_zod * sin_aod,
        ps.z + d * cos_zod,
    )
}

/// Projects a UV point onto the Earth sphere.
pub fn uv_to_earth(p_uv: UvPoint, sat: &SatelliteState) -> Result<GroundPoint> {
    let los = los_geometry(p_uv, sat)?;
    Ok(ground_point(&los, sat))
}

/// Inverse of [`uv_to_earth`] for points on the visible cap.
pub fn earth_to_uv(p_u: GroundPoint, sat: &SatelliteState) -> Result<UvPoint> {
    let r = sat.earth_radius_km;
    let norm = p_u.norm();
    if norm.is_nan() || (norm - r).abs() > ON_SPHERE_TOL * r {
        return Err(Error::NotOnSphere { norm_km: norm, earth_radius_km: r });
    }
    let los = p_u.sub(&sat.position());
    let range = los.norm();
    // elevation >= 0  <=>  p . (p - P_s) <= 0, with slack for the tangent circle
    if p_u.dot(&los) > ON_SPHERE_TOL * norm * range {
        return Err(Error::NotVisible);
    }
    // atan2 stays well conditioned near nadir, where acos(-z / range) is not
    let omega = los.x.hypot(los.y).atan2(-los.z);
    let aod = los.y.atan2(los.x);
    let s = omega.sin();
    Ok(UvPoint::new(s * aod.cos(), s * aod.sin()))
}
