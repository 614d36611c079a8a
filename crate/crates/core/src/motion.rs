//! Motion planning: G-code sequences for tube insertion and removal.
//!
//! Plans share one shape: switch to absolute mode, rise to the safe travel
//! height before any XY motion, travel over the target, descend slowly to
//! the operation depth, ascend back to safe height (the passive friction
//! gripper engages and releases through these vertical strokes), then sync.

use crate::error::{Error, Result};
use crate::gcode::{GCodeCommand, Param, Word};
use crate::localization::{CentrifugeCalibration, WorldPose};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operation {
    Insert,
    Remove,
}

impl Operation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Operation::Insert => "insert",
            Operation::Remove => "remove",
        }
    }
}

/// Phase labels for the planned command groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Approach,
    Descend,
    Engage,
    Retract,
    Depart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedCommand {
    pub phase: Phase,
    pub command: GCodeCommand,
}

/// Ordered G-code for one insert or remove operation.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionPlan {
    pub operation: Operation,
    pub target: WorldPose,
    pub phases: Vec<PlannedCommand>,
}

impl MotionPlan {
    pub fn commands(&self) -> impl Iterator<Item = &GCodeCommand> {
        self.phases.iter().map(|p| &p.command)
    }

    /// Newline-terminated wire text; empty plans serialize to the empty
    /// string.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for cmd in self.commands() {
            out.push_str(&cmd.serialize());
            out.push('\n');
        }
        out
    }
}

/// Feedrates in mm/min. Travel moves run fast; descend/ascend strokes near
/// the tubes run reduced.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Feedrates {
    pub travel_mm_min: f64,
    pub descend_mm_min: f64,
}

impl Default for Feedrates {
    fn default() -> Self {
        Feedrates {
            travel_mm_min: 30_000.0,
            descend_mm_min: 9_000.0,
        }
    }
}

impl Feedrates {
    pub fn validate(&self) -> Result<()> {
        if !(self.travel_mm_min > 0.0) || !(self.descend_mm_min > 0.0) {
            return Err(Error::param("feedrates must be > 0"));
        }
        if self.descend_mm_min >= self.travel_mm_min {
            return Err(Error::param("descend feedrate must be reduced below travel feedrate"));
        }
        Ok(())
    }
}

/// Plan a tube removal: descend to grip depth, lift the tube out by
/// friction, sync.
pub fn plan_removal(
    target: &WorldPose,
    calib: &CentrifugeCalibration,
    feeds: &Feedrates,
) -> Result<MotionPlan> {
    plan_operation(Operation::Remove, target, calib, feeds)
}

/// Plan a tube insertion: descend until the tube tip sits in the bucket,
/// release by the slow ascent, sync.
pub fn plan_insertion(
    target: &WorldPose,
    calib: &CentrifugeCalibration,
    feeds: &Feedrates,
) -> Result<MotionPlan> {
    plan_operation(Operation::Insert, target, calib, feeds)
}

fn plan_operation(
    operation: Operation,
    target: &WorldPose,
    calib: &CentrifugeCalibration,
    feeds: &Feedrates,
) -> Result<MotionPlan> {
    calib.validate()?;
    feeds.validate()?;
    let depth_z = match operation {
        Operation::Remove => calib.z_levels.grip_z,
        Operation::Insert => calib.z_levels.insert_z,
    };
    let safe_z = calib.z_levels.safe_z;
    for z in [safe_z, depth_z] {
        if !calib.workspace.contains(target.x, target.y, z) {
            return Err(Error::OutOfWorkspace(format!(
                "target ({:.2}, {:.2}, {z:.2}) mm",
                target.x, target.y
            )));
        }
    }

    let phases = vec![
        PlannedCommand {
            phase: Phase::Approach,
            command: GCodeCommand::new(Word::G90),
        },
        PlannedCommand {
            phase: Phase::Approach,
            command: GCodeCommand::new(Word::G0)
                .with(Param::Z, safe_z)
                .with(Param::F, feeds.travel_mm_min),
        },
        PlannedCommand {
            phase: Phase::Approach,
            command: GCodeCommand::new(Word::G0)
                .with(Param::X, target.x)
                .with(Param::Y, target.y)
                .with(Param::F, feeds.travel_mm_min),
        },
        PlannedCommand {
            phase: Phase::Descend,
            command: GCodeCommand::new(Word::G1)
                .with(Param::Z, depth_z)
                .with(Param::F, feeds.descend_mm_min),
        },
        PlannedCommand {
            phase: Phase::Retract,
            command: GCodeCommand::new(Word::G1)
                .with(Param::Z, safe_z)
                .with(Param::F, feeds.descend_mm_min),
        },
        PlannedCommand {
            phase: Phase::Depart,
            command: GCodeCommand::new(Word::M400),
        },
    ];
    Ok(MotionPlan {
        operation,
        target: *target,
        phases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::CentrifugeCalibration;

    fn target_120_80() -> WorldPose {
        WorldPose {
            x: 120.0,
            y: 80.0,
            z: 60.0,
            a: 0.0,
        }
    }

    #[test]
    fn removal_golden_sequence() {
        let plan = plan_removal(
            &target_120_80(),
            &CentrifugeCalibration::default(),
            &Feedrates::default(),
        )
        .unwrap();
        let expected = "G90\n\
                        G0 Z60.00 F30000.00\n\
                        G0 X120.00 Y80.00 F30000.00\n\
                        G1 Z35.00 F9000.00\n\
                        G1 Z60.00 F9000.00\n\
                        M400\n";
        assert_eq!(plan.serialize(), expected);
    }

    #[test]
    fn insertion_golden_sequence() {
        let plan = plan_insertion(
            &target_120_80(),
            &CentrifugeCalibration::default(),
            &Feedrates::default(),
        )
        .unwrap();
        let expected = "G90\n\
                        G0 Z60.00 F30000.00\n\
                        G0 X120.00 Y80.00 F30000.00\n\
                        G1 Z45.00 F9000.00\n\
                        G1 Z60.00 F9000.00\n\
                        M400\n";
        assert_eq!(plan.serialize(), expected);
    }

    #[test]
    fn insertion_matches_removal_in_xy_differs_in_z() {
        let calib = CentrifugeCalibration::default();
        let feeds = Feedrates::default();
        let remove = plan_removal(&target_120_80(), &calib, &feeds).unwrap();
        let insert = plan_insertion(&target_120_80(), &calib, &feeds).unwrap();
        assert_eq!(remove.phases[2].command, insert.phases[2].command);
        assert_ne!(remove.phases[3].command, insert.phases[3].command);
        assert!(remove.phases.len() >= 5 && insert.phases.len() >= 5);
    }

    #[test]
    fn first_motion_is_vertical_to_safe_height() {
        let plan = plan_removal(
            &target_120_80(),
            &CentrifugeCalibration::default(),
            &Feedrates::default(),
        )
        .unwrap();
        let first_motion = plan
            .commands()
            .find(|c| c.word.is_motion())
            .expect("plan has motion");
        assert_eq!(first_motion.get(Param::Z), Some(60.0));
        assert_eq!(first_motion.get(Param::X), None);
        assert_eq!(first_motion.get(Param::Y), None);
    }

    #[test]
    fn out_of_workspace_target_rejected() {
        let target = WorldPose {
            x: 9999.0,
            y: 80.0,
            z: 60.0,
            a: 0.0,
        };
        assert!(plan_removal(
            &target,
            &CentrifugeCalibration::default(),
            &Feedrates::default()
        )
        .is_err());
    }

    #[test]
    fn invalid_calibration_rejected() {
        let mut calib = CentrifugeCalibration::default();
        calib.z_levels.grip_z = calib.z_levels.safe_z + 5.0;
        assert!(plan_removal(&target_120_80(), &calib, &Feedrates::default()).is_err());
    }

    #[test]
    fn descend_uses_reduced_feedrate() {
        let plan = plan_insertion(
            &target_120_80(),
            &CentrifugeCalibration::default(),
            &Feedrates::default(),
        )
        .unwrap();
        let feeds = Feedrates::default();
        for planned in &plan.phases {
            if matches!(planned.phase, Phase::Descend | Phase::Retract) {
                assert_eq!(
                    planned.command.get(Param::F),
                    Some(feeds.descend_mm_min)
                );
            }
        }
    }
}
