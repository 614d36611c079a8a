//! Deterministic synthetic top-down rotor scenes with exact ground truth.
//!
//! Stands in for the physical camera and centrifuge: a light bench top, a
//! dark rotor disk, two darker bucket holes, optional colored tube disks,
//! glare blobs, an ambient-light gain, and seeded Gaussian pixel noise.
//! Rendering uses only exactly-rounded IEEE arithmetic and the
//! [`crate::detmath`] kernels, so a fixed spec produces bit-identical
//! images on every platform.

use crate::detmath::{self, GaussianSource};
use crate::error::{Error, Result};
use crate::image::{Rgb, RgbImage};
use crate::localization::{
    centrifuge_position, to_gantry, CentrifugeCalibration, Tool, WorldPose,
};
use serde::{Deserialize, Serialize};

/// Scene albedos, chosen so the pipeline's stock thresholds (Canny 20/120,
/// the 500..2000 px area gate) operate mid-range under ambient gains of
/// 0.4..1.6.
pub const BACKGROUND_RGB: [u8; 3] = [205, 205, 205];
pub const ROTOR_RGB: [u8; 3] = [45, 45, 45];
pub const HOLE_RGB: [u8; 3] = [12, 12, 12];

/// Tube disk radius as a fraction of the hole radius; keeps rendered
/// contour areas inside the identification area gate for hole radii in
/// 30..35 px.
pub const TUBE_RADIUS_FRACTION: f64 = 0.6;

/// A colored test tube sitting in one bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeSpec {
    pub color_label: String,
    pub rgb: [u8; 3],
}

/// Radial white glare blob with Gaussian falloff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlareSpec {
    pub center_px: (f64, f64),
    pub radius_px: f64,
    /// Blend weight toward pure white at the blob center, `[0, 1]`.
    pub strength: f64,
}

/// Parametric description of one rendered scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub rotor_center_px: (f64, f64),
    pub rotor_disk_radius_px: f64,
    /// Distance from the rotor center to the hole centers, px.
    pub hole_ring_radius_px: f64,
    /// One entry per bucket, degrees; pairwise separation must be >= 60.
    pub bucket_angles_deg: Vec<f64>,
    pub hole_radius_px: f64,
    /// Per-bucket tube, aligned with `bucket_angles_deg`.
    pub tubes: Vec<Option<TubeSpec>>,
    pub ambient_gain: f64,
    pub glare: Vec<GlareSpec>,
    /// Gaussian noise sigma in gray levels; one draw per pixel applied to
    /// all three channels.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        SceneSpec {
            width: 1280,
            height: 720,
            rotor_center_px: (640.0, 360.0),
            rotor_disk_radius_px: 300.0,
            hole_ring_radius_px: 225.0,
            bucket_angles_deg: vec![40.0, 220.0],
            hole_radius_px: 32.0,
            tubes: vec![None, None],
            ambient_gain: 1.0,
            glare: Vec::new(),
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width < 1 || self.height < 1 {
            return Err(Error::param("scene dimensions must be >= 1"));
        }
        if self.tubes.len() != self.bucket_angles_deg.len() {
            return Err(Error::param("tubes list must align with bucket_angles_deg"));
        }
        if !(30.0..=35.0).contains(&self.hole_radius_px) {
            return Err(Error::param(format!(
                "hole radius {} outside 30..35 px",
                self.hole_radius_px
            )));
        }
        if self.hole_ring_radius_px + self.hole_radius_px > self.rotor_disk_radius_px {
            return Err(Error::param("holes must lie fully inside the rotor disk"));
        }
        for (i, a) in self.bucket_angles_deg.iter().enumerate() {
            for b in &self.bucket_angles_deg[i + 1..] {
                let diff = (a - b).rem_euclid(360.0);
                let sep = diff.min(360.0 - diff);
                if sep < 60.0 {
                    return Err(Error::param(format!(
                        "bucket angles {a} and {b} closer than 60 degrees"
                    )));
                }
            }
        }
        if !(0.4..=1.6).contains(&self.ambient_gain) {
            return Err(Error::param(format!(
                "ambient_gain {} outside 0.4..1.6",
                self.ambient_gain
            )));
        }
        for g in &self.glare {
            if !(0.0..=1.0).contains(&g.strength) || !(g.radius_px > 0.0) {
                return Err(Error::param("invalid glare spec"));
            }
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::param("noise_sigma must be >= 0"));
        }
        Ok(())
    }
}

/// Exact expected state of one bucket in a rendered scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthBucket {
    pub angle_deg: f64,
    pub center_px: (f64, f64),
    pub radius_px: f64,
    pub occupied: bool,
    pub color_label: Option<String>,
    /// Gripper-frame gantry pose from the analytic inverse projection.
    pub gantry_pose: WorldPose,
}

/// Ground truth paired with a rendered scene, consistent by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub buckets: Vec<TruthBucket>,
}

impl GroundTruth {
    pub fn occupied_count(&self) -> usize {
        self.buckets.iter().filter(|b| b.occupied).count()
    }
}

/// Renders the scene and its exact ground truth.
///
/// Composition order per pixel: base albedo, glare blend toward white,
/// ambient gain, seeded noise, clamp to `[0, 255]`.
pub fn render(spec: &SceneSpec, calib: &CentrifugeCalibration) -> Result<(RgbImage, GroundTruth)> {
    spec.validate()?;
    calib.validate()?;

    let mut buckets = Vec::with_capacity(spec.bucket_angles_deg.len());
    for (angle_deg, tube) in spec.bucket_angles_deg.iter().zip(&spec.tubes) {
        // Bit-stable placement: unit direction from the deterministic
        // kernels rather than libm trig.
        let turns = (angle_deg / 360.0).rem_euclid(1.0);
        let (sin_a, cos_a) = detmath::sin_cos_turn(turns);
        let center_px = (
            spec.rotor_center_px.0 + spec.hole_ring_radius_px * cos_a,
            spec.rotor_center_px.1 - spec.hole_ring_radius_px * sin_a,
        );
        let theta = angle_deg.to_radians();
        let gantry_pose = to_gantry(centrifuge_position(theta, calib), Tool::Gripper, calib)?;
        buckets.push(TruthBucket {
            angle_deg: *angle_deg,
            center_px,
            radius_px: spec.hole_radius_px,
            occupied: tube.is_some(),
            color_label: tube.as_ref().map(|t| t.color_label.clone()),
            gantry_pose,
        });
    }

    let rotor_r2 = spec.rotor_disk_radius_px * spec.rotor_disk_radius_px;
    let hole_r2 = spec.hole_radius_px * spec.hole_radius_px;
    let tube_r = spec.hole_radius_px * TUBE_RADIUS_FRACTION;
    let tube_r2 = tube_r * tube_r;

    let mut noise = if spec.noise_sigma > 0.0 {
        Some(GaussianSource::new(spec.seed))
    } else {
        None
    };

    let mut img = RgbImage::new(spec.width, spec.height);
    for y in 0..spec.height {
        for x in 0..spec.width {
            let (px, py) = (x as f64, y as f64);
            let mut color = base_color(spec, &buckets, px, py, rotor_r2, hole_r2, tube_r2);

            for g in &spec.glare {
                let d2 = (px - g.center_px.0).powi(2) + (py - g.center_px.1).powi(2);
                let sigma = g.radius_px / 2.0;
                let cutoff = 2.5 * g.radius_px;
                if d2 <= cutoff * cutoff {
                    let w = g.strength * detmath::exp(-d2 / (2.0 * sigma * sigma));
                    for c in &mut color {
                        *c += (255.0 - *c) * w;
                    }
                }
            }
            for c in &mut color {
                *c *= spec.ambient_gain;
            }
            if let Some(noise) = noise.as_mut() {
                let n = spec.noise_sigma * noise.next();
                for c in &mut color {
                    *c += n;
                }
            }
            img.set(
                x,
                y,
                Rgb::new(
                    color[0].round().clamp(0.0, 255.0) as u8,
                    color[1].round().clamp(0.0, 255.0) as u8,
                    color[2].round().clamp(0.0, 255.0) as u8,
                ),
            );
        }
    }
    Ok((img, GroundTruth { buckets }))
}

fn base_color(
    spec: &SceneSpec,
    buckets: &[TruthBucket],
    px: f64,
    py: f64,
    rotor_r2: f64,
    hole_r2: f64,
    tube_r2: f64,
) -> [f64; 3] {
    for (bucket, tube) in buckets.iter().zip(&spec.tubes) {
        let d2 = (px - bucket.center_px.0).powi(2) + (py - bucket.center_px.1).powi(2);
        if d2 <= hole_r2 {
            if let Some(tube) = tube {
                if d2 <= tube_r2 {
                    return [tube.rgb[0] as f64, tube.rgb[1] as f64, tube.rgb[2] as f64];
                }
            }
            return [HOLE_RGB[0] as f64, HOLE_RGB[1] as f64, HOLE_RGB[2] as f64];
        }
    }
    let d2 = (px - spec.rotor_center_px.0).powi(2) + (py - spec.rotor_center_px.1).powi(2);
    if d2 <= rotor_r2 {
        [ROTOR_RGB[0] as f64, ROTOR_RGB[1] as f64, ROTOR_RGB[2] as f64]
    } else {
        [
            BACKGROUND_RGB[0] as f64,
            BACKGROUND_RGB[1] as f64,
            BACKGROUND_RGB[2] as f64,
        ]
    }
}
