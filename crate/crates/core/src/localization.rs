//! Image-to-gantry localization.
//!
//! The construction uses only the angle of the detected circle around the
//! rotor center plus the physically known bucket-ring radius; no pixel/mm
//! scale exists anywhere. Detection happens through the camera but the
//! action is taken by the gripper, so gripper targets subtract the mounted
//! camera offset.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Gantry heights for the distinct motion phases, mm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ZLevels {
    pub safe_z: f64,
    pub grip_z: f64,
    pub insert_z: f64,
    pub camera_z: f64,
}

/// Axis-aligned reachable box of the gantry, mm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WorkspaceBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub z: (f64, f64),
}

impl WorkspaceBox {
    pub fn contains(&self, x: f64, y: f64, z: f64) -> bool {
        x >= self.x.0
            && x <= self.x.1
            && y >= self.y.0
            && y <= self.y.1
            && z >= self.z.0
            && z <= self.z.1
    }
}

/// Which tool frame a gantry target is expressed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tool {
    Camera,
    Gripper,
}

/// Fixed geometry measured once for a centrifuge installation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentrifugeCalibration {
    /// Rotor axis in image coordinates, px (pre-measured with the camera
    /// centered over the rotor).
    pub rotor_center_px: (f64, f64),
    /// Distance from the rotor axis to a bucket center, mm.
    pub bucket_ring_radius_mm: f64,
    /// Rotor axis in gantry coordinates, mm.
    pub rotor_center_gantry_mm: (f64, f64),
    pub z_levels: ZLevels,
    /// Gripper-to-camera displacement in gantry axes, mm.
    pub camera_offset_mm: (f64, f64),
    pub workspace: WorkspaceBox,
}

impl Default for CentrifugeCalibration {
    fn default() -> Self {
        CentrifugeCalibration {
            rotor_center_px: (640.0, 360.0),
            bucket_ring_radius_mm: 95.0,
            rotor_center_gantry_mm: (200.0, 150.0),
            z_levels: ZLevels {
                safe_z: 60.0,
                grip_z: 35.0,
                insert_z: 45.0,
                camera_z: 70.0,
            },
            camera_offset_mm: (-35.0, 0.0),
            workspace: WorkspaceBox {
                x: (0.0, 500.0),
                y: (0.0, 400.0),
                z: (0.0, 200.0),
            },
        }
    }
}

impl CentrifugeCalibration {
    pub fn validate(&self) -> Result<()> {
        if !(self.bucket_ring_radius_mm > 0.0) {
            return Err(Error::param("bucket_ring_radius_mm must be > 0"));
        }
        if self.z_levels.grip_z >= self.z_levels.safe_z {
            return Err(Error::param(format!(
                "grip_z {} must be below safe_z {}",
                self.z_levels.grip_z, self.z_levels.safe_z
            )));
        }
        if self.z_levels.insert_z >= self.z_levels.safe_z {
            return Err(Error::param(format!(
                "insert_z {} must be below safe_z {}",
                self.z_levels.insert_z, self.z_levels.safe_z
            )));
        }
        for (lo, hi) in [self.workspace.x, self.workspace.y, self.workspace.z] {
            if lo >= hi {
                return Err(Error::param("workspace box sides must be ordered"));
            }
        }
        Ok(())
    }

    /// Gripper pose while the camera hovers centered over the rotor — the
    /// canonical start of every insert/remove operation.
    pub fn camera_hover_pose(&self) -> WorldPose {
        WorldPose {
            x: self.rotor_center_gantry_mm.0 - self.camera_offset_mm.0,
            y: self.rotor_center_gantry_mm.1 - self.camera_offset_mm.1,
            z: self.z_levels.camera_z,
            a: 0.0,
        }
    }
}

/// Gantry-frame pose; `a` is the end-effector rotation about the gantry x
/// axis in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldPose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
}

/// Angle of the vector from the rotor center to `center_px`, radians.
///
/// Image rows grow downward, so the v component is negated to give a
/// right-handed, y-up world convention.
pub fn image_angle(center_px: (f64, f64), calib: &CentrifugeCalibration) -> Result<f64> {
    let du = center_px.0 - calib.rotor_center_px.0;
    let dv = center_px.1 - calib.rotor_center_px.1;
    if du == 0.0 && dv == 0.0 {
        return Err(Error::Degenerate(
            "circle center coincides with the rotor center".into(),
        ));
    }
    Ok((-dv).atan2(du))
}

/// Inverse of [`image_angle`]: pixel position of a point at `theta` on a
/// ring of `radius_px` around `center_px`. Scene generation uses this so
/// the axis convention stays self-consistent.
pub fn project_to_image(center_px: (f64, f64), radius_px: f64, theta: f64) -> (f64, f64) {
    (
        center_px.0 + radius_px * theta.cos(),
        center_px.1 - radius_px * theta.sin(),
    )
}

/// Bucket position in the centrifuge frame (origin at the rotor axis), mm.
pub fn centrifuge_position(theta: f64, calib: &CentrifugeCalibration) -> (f64, f64) {
    let r = calib.bucket_ring_radius_mm;
    (r * theta.cos(), r * theta.sin())
}

/// Translates a centrifuge-frame point into a gantry pose for the given
/// tool. Gripper targets subtract the camera offset; z comes from the
/// calibrated levels (camera height for the camera, safe travel height for
/// the gripper) and the end effector stays vertical (`a = 0`).
pub fn to_gantry(
    pt: (f64, f64),
    tool: Tool,
    calib: &CentrifugeCalibration,
) -> Result<WorldPose> {
    let mut x = pt.0 + calib.rotor_center_gantry_mm.0;
    let mut y = pt.1 + calib.rotor_center_gantry_mm.1;
    if tool == Tool::Gripper {
        x -= calib.camera_offset_mm.0;
        y -= calib.camera_offset_mm.1;
    }
    let z = match tool {
        Tool::Camera => calib.z_levels.camera_z,
        Tool::Gripper => calib.z_levels.safe_z,
    };
    if !calib.workspace.contains(x, y, z) {
        return Err(Error::OutOfWorkspace(format!(
            "({x:.2}, {y:.2}, {z:.2}) mm"
        )));
    }
    Ok(WorldPose { x, y, z, a: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    fn calib() -> CentrifugeCalibration {
        CentrifugeCalibration::default()
    }

    #[test]
    fn image_angle_axis_convention() {
        let c = calib();
        let (uc, vc) = c.rotor_center_px;
        assert_eq!(image_angle((uc + 10.0, vc), &c).unwrap(), 0.0);
        // directly above in the image = smaller v = +pi/2 in world
        assert_eq!(image_angle((uc, vc - 10.0), &c).unwrap(), FRAC_PI_2);
        assert!((image_angle((uc + 3.0, vc + 3.0), &c).unwrap() + FRAC_PI_4).abs() < 1e-12);
        assert!(image_angle((uc, vc), &c).is_err());
    }

    #[test]
    fn centrifuge_position_known_angles() {
        let c = calib();
        let p = centrifuge_position(0.0, &c);
        assert_eq!(p, (95.0, 0.0));
        let p = centrifuge_position(FRAC_PI_2, &c);
        assert!(p.0.abs() < 1e-12 && (p.1 - 95.0).abs() < 1e-12);
        let mut c100 = calib();
        c100.bucket_ring_radius_mm = 100.0;
        let p = centrifuge_position(FRAC_PI_6, &c100);
        assert!((p.0 - 86.603).abs() < 1e-3);
        assert!((p.1 - 50.000).abs() < 1e-3);
    }

    #[test]
    fn to_gantry_translation_and_offset() {
        let c = calib();
        let cam = to_gantry((0.0, 0.0), Tool::Camera, &c).unwrap();
        assert_eq!((cam.x, cam.y), c.rotor_center_gantry_mm);
        assert_eq!(cam.z, c.z_levels.camera_z);
        assert_eq!(cam.a, 0.0);

        let grip = to_gantry((0.0, 0.0), Tool::Gripper, &c).unwrap();
        assert_eq!(grip.x, c.rotor_center_gantry_mm.0 + 35.0);
        assert_eq!(grip.y, c.rotor_center_gantry_mm.1);
        assert_eq!(grip.z, c.z_levels.safe_z);
    }

    #[test]
    fn out_of_workspace_rejected() {
        let c = calib();
        assert!(to_gantry((400.0, 0.0), Tool::Gripper, &c).is_err());
        assert!(to_gantry((-300.0, 0.0), Tool::Camera, &c).is_err());
    }

    #[test]
    fn transform_is_affine() {
        let c = calib();
        let probe = |p: (f64, f64)| to_gantry(p, Tool::Gripper, &c).unwrap();
        let q = (7.0, -12.0);
        let base = probe((10.0, 20.0));
        let shifted = probe((10.0 + q.0, 20.0 + q.1));
        let delta = (shifted.x - base.x, shifted.y - base.y);
        let base2 = probe((-30.0, 5.0));
        let shifted2 = probe((-30.0 + q.0, 5.0 + q.1));
        assert!((shifted2.x - base2.x - delta.0).abs() < 1e-12);
        assert!((shifted2.y - base2.y - delta.1).abs() < 1e-12);
    }

    #[test]
    fn pose_depends_only_on_angle() {
        // Two detections at the same angle but different distances and
        // radii map to the same gantry pose.
        let c = calib();
        let theta_of = |r_px: f64| {
            let p = project_to_image(c.rotor_center_px, r_px, 0.7);
            image_angle(p, &c).unwrap()
        };
        let a = theta_of(150.0);
        let b = theta_of(260.0);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn projection_round_trip_and_quantization_bound() {
        let c = calib();
        let ring_px = 225.0;
        for k in 0..72 {
            let theta = -PI + (k as f64 + 0.5) * (2.0 * PI / 72.0);
            let px = project_to_image(c.rotor_center_px, ring_px, theta);
            let back = image_angle(px, &c).unwrap();
            assert!((back - theta).abs() < 1e-12, "theta {theta}");

            // a <= 2 px center error moves the angle at most asin(2/r)
            let worst = image_angle((px.0 + 2.0, px.1), &c).unwrap();
            let diff = (worst - theta).rem_euclid(2.0 * PI);
            let diff = diff.min(2.0 * PI - diff);
            assert!(diff <= (2.0f64 / ring_px).asin() + 1e-9);
        }
    }

    #[test]
    fn calibration_validation() {
        assert!(calib().validate().is_ok());
        let mut bad = calib();
        bad.z_levels.grip_z = 80.0;
        assert!(bad.validate().is_err());
        let mut bad = calib();
        bad.bucket_ring_radius_mm = 0.0;
        assert!(bad.validate().is_err());
    }
}
