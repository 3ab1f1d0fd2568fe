//! Adaptive stance control for quadruped robots on partially or globally
//! slippery ground.
//!
//! The crate provides the full control stack for a torque-controlled
//! quadruped standing on four feet:
//!
//! - [`spatial`]: minimal 3-D spatial math (rotations, the SO(3) log/exp
//!   maps, skew matrices, wrenches and twists);
//! - [`model`]: parametric kinematic model of a 3-DOF-per-leg quadruped,
//!   grasp-matrix construction and joint-torque mapping;
//! - [`sim`]: a fixed-step centroidal rigid-body simulator with per-foot
//!   stick/slip Coulomb contact and synthetic foot IMUs;
//! - [`estimator`]: per-foot stable-contact probability from sliding-window
//!   kernel density estimation over the foot IMU channels;
//! - [`control`]: the task-space tracking controller, weighted pseudo-inverse
//!   force distribution, and the two adaptation layers (contact-force
//!   redistribution and trajectory time-scaling);
//! - [`trajectory`]: online reference generators parameterized by the scaled
//!   clock.
//!
//! The crate is `no_std` (with `alloc`) so the controller and estimator can
//! run on embedded targets; file formats, configuration and the scenario
//! runner live in the companion `slipstance-harness` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod control;
pub mod estimator;
pub mod model;
pub mod sim;
pub mod spatial;
pub mod trajectory;

pub use control::{Controller, ControllerGains, CycleOutput, PoseError, WeightState};
pub use estimator::{EstimatorParams, SlipBelief, SlipEstimator};
pub use model::{GraspMap, JointState, RobotParams, NUM_LEGS};
pub use sim::{
    ContactMode, ContactRecord, ImuSample, RobotState, SimFault, SimParams, Simulator, StanceInit,
};
pub use spatial::{Rotation, Twist, Vec3, Wrench};
pub use trajectory::{EllipseParams, ReferenceGenerator, TrajectorySample};

