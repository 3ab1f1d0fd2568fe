//! Parametric quadruped model: 3-DOF legs with closed-form kinematics, leg
//! Jacobians, grasp-matrix construction and the force-to-torque mapping.
//!
//! Leg topology is hip-abduction (about x) → hip-pitch (about y) →
//! knee-pitch (about y) with a point foot. At the zero configuration a leg
//! hangs straight down from its hip, and positive knee angle swings the foot
//! tip forward (+x). Legs are indexed 0..4 in the order front-left,
//! front-right, rear-right, rear-left.

use crate::spatial::{skew, Mat3, Rotation, Vec3, Wrench};
use nalgebra::SMatrix;

/// Number of legs.
pub const NUM_LEGS: usize = 4;
/// Joints per leg.
pub const JOINTS_PER_LEG: usize = 3;

/// Mass, geometry and inertia of the robot trunk plus leg kinematic
/// parameters. Leg inertia is neglected throughout (massless legs).
#[derive(Clone, Copy, Debug)]
pub struct RobotParams {
    /// Trunk mass in kg.
    pub mass: f64,
    /// Trunk inertia tensor in the body frame, kg·m².
    pub inertia: Mat3,
    /// Gravitational acceleration, m/s².
    pub gravity: f64,
    /// Hip positions relative to the CoM, body frame, m.
    pub hip_offsets: [Vec3; NUM_LEGS],
    /// Thigh length, m.
    pub l1: f64,
    /// Shank length, m.
    pub l2: f64,
    /// Symmetric joint limit applied to every joint, rad.
    pub joint_limit: f64,
}

impl Default for RobotParams {
    fn default() -> Self {
        RobotParams {
            mass: 12.0,
            inertia: Mat3::from_diagonal(&Vec3::new(0.1, 0.25, 0.3)),
            gravity: 9.81,
            hip_offsets: [
                Vec3::new(0.19, 0.12, 0.0),
                Vec3::new(0.19, -0.12, 0.0),
                Vec3::new(-0.19, -0.12, 0.0),
                Vec3::new(-0.19, 0.12, 0.0),
            ],
            l1: 0.21,
            l2: 0.21,
            joint_limit: 2.6,
        }
    }
}

impl RobotParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.mass > 0.0) {
            return Err(ModelError::InvalidParams("mass must be positive"));
        }
        if !(self.l1 > 0.0 && self.l2 > 0.0) {
            return Err(ModelError::InvalidParams("link lengths must be positive"));
        }
        if !(self.gravity > 0.0) {
            return Err(ModelError::InvalidParams("gravity must be positive"));
        }
        if (self.inertia - self.inertia.transpose()).norm() > 1e-12 {
            return Err(ModelError::InvalidParams("inertia must be symmetric"));
        }
        let eig = self.inertia.symmetric_eigenvalues();
        if eig.min() <= 0.0 {
            return Err(ModelError::InvalidParams(
                "inertia must be positive definite",
            ));
        }
        Ok(())
    }

    /// Maximum hip-to-foot reach.
    pub fn max_reach(&self) -> f64 {
        self.l1 + self.l2
    }
}

/// The 12 joint angles in leg-major order
/// `(q_{0,0}, q_{0,1}, q_{0,2}, ..., q_{3,2})`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct JointState(pub [f64; NUM_LEGS * JOINTS_PER_LEG]);

impl JointState {
    pub fn leg(&self, leg: usize) -> [f64; JOINTS_PER_LEG] {
        let b = leg * JOINTS_PER_LEG;
        [self.0[b], self.0[b + 1], self.0[b + 2]]
    }

    pub fn set_leg(&mut self, leg: usize, q: [f64; JOINTS_PER_LEG]) {
        let b = leg * JOINTS_PER_LEG;
        self.0[b..b + 3].copy_from_slice(&q);
    }
}

/// Errors from the kinematic layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelError {
    InvalidParams(&'static str),
    /// A joint angle is outside the configured limits.
    JointLimit { leg: usize, joint: usize, value: f64 },
    /// An IK target lies outside the leg workspace.
    OutOfWorkspace { leg: usize, distance: f64 },
    /// Fewer than three feet in contact; the grasp map would lose rank.
    TooFewContacts { count: usize },
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModelError::InvalidParams(what) => write!(f, "invalid robot parameters: {what}"),
            ModelError::JointLimit { leg, joint, value } => {
                write!(f, "joint {joint} of leg {leg} at {value:.4} rad exceeds limits")
            }
            ModelError::OutOfWorkspace { leg, distance } => {
                write!(f, "target at {distance:.4} m is outside the workspace of leg {leg}")
            }
            ModelError::TooFewContacts { count } => {
                write!(f, "grasp map needs at least 3 contacts, got {count}")
            }
        }
    }
}

fn check_limits(params: &RobotParams, leg: usize, q: &[f64; 3]) -> Result<(), ModelError> {
    for (joint, &value) in q.iter().enumerate() {
        if value.abs() > params.joint_limit || !value.is_finite() {
            return Err(ModelError::JointLimit { leg, joint, value });
        }
    }
    Ok(())
}

/// Planar part of the leg chain in the rolled (hip) plane:
/// `ux` forward, `uz` down, before the hip-roll rotation.
fn planar_extent(params: &RobotParams, q: &[f64; 3]) -> (f64, f64) {
    let ux = params.l1 * libm::sin(q[1]) + params.l2 * libm::sin(q[1] + q[2]);
    let uz = -(params.l1 * libm::cos(q[1]) + params.l2 * libm::cos(q[1] + q[2]));
    (ux, uz)
}

/// Foot-tip position in the CoM frame for one leg.
pub fn leg_fk(params: &RobotParams, leg: usize, q: [f64; 3]) -> Result<Vec3, ModelError> {
    check_limits(params, leg, &q)?;
    let (ux, uz) = planar_extent(params, &q);
    let (s1, c1) = (libm::sin(q[0]), libm::cos(q[0]));
    Ok(params.hip_offsets[leg] + Vec3::new(ux, -s1 * uz, c1 * uz))
}

/// Position Jacobian `∂p/∂q_leg` of the foot tip with respect to the leg's
/// three joints, expressed in the CoM frame.
pub fn leg_jacobian(params: &RobotParams, leg: usize, q: [f64; 3]) -> Mat3 {
    let _ = leg;
    let (ux, uz) = planar_extent(params, &q);
    let (s1, c1) = (libm::sin(q[0]), libm::cos(q[0]));
    let s23 = libm::sin(q[1] + q[2]);
    let c23 = libm::cos(q[1] + q[2]);
    // Column 0: roll of the whole plane; columns 1, 2: planar two-link
    // partials rotated by the hip roll.
    let d2 = (-uz, ux);
    let d3 = (params.l2 * c23, params.l2 * s23);
    Mat3::new(
        0.0,
        d2.0,
        d3.0,
        -c1 * uz,
        -s1 * d2.1,
        -s1 * d3.1,
        -s1 * uz,
        c1 * d2.1,
        c1 * d3.1,
    )
}

/// Closed-form inverse kinematics selecting the knee-backward branch
/// (`q_knee ≥ 0`). The returned angles reproduce the target through
/// [`leg_fk`] to floating-point precision.
pub fn leg_ik(params: &RobotParams, leg: usize, target: Vec3) -> Result<[f64; 3], ModelError> {
    let v = target - params.hip_offsets[leg];
    let r = v.norm();
    let reach = params.max_reach();
    let min_reach = (params.l1 - params.l2).abs();
    if r > reach + 1e-12 || r < min_reach - 1e-12 {
        return Err(ModelError::OutOfWorkspace { leg, distance: r });
    }

    let q1 = libm::atan2(v.y, -v.z);
    // Un-roll into the pitch plane.
    let (s1, c1) = (libm::sin(q1), libm::cos(q1));
    let vz = -s1 * v.y + c1 * v.z;

    let cos_knee =
        ((r * r - params.l1 * params.l1 - params.l2 * params.l2) / (2.0 * params.l1 * params.l2))
            .clamp(-1.0, 1.0);
    let q3 = libm::acos(cos_knee);
    let q2 = libm::atan2(v.x, -vz)
        - libm::atan2(params.l2 * libm::sin(q3), params.l1 + params.l2 * cos_knee);

    let q = [q1, q2, q3];
    check_limits(params, leg, &q)?;
    Ok(q)
}

/// Joint torques of one leg for a force `f` applied at its tip:
/// `τ = (R_c · J)ᵀ f`.
pub fn joint_torques(
    r_c: &Rotation,
    params: &RobotParams,
    leg: usize,
    q: [f64; 3],
    f: &Vec3,
) -> [f64; 3] {
    let j_world = r_c.matrix() * leg_jacobian(params, leg, q);
    let tau = j_world.tr_mul(f);
    [tau.x, tau.y, tau.z]
}

/// The 6×12 map from stacked foot forces to the generalized wrench at the
/// CoM. Columns of masked-out legs are zero.
#[derive(Clone, Copy, Debug)]
pub struct GraspMap {
    matrix: SMatrix<f64, 6, 12>,
    mask: [bool; NUM_LEGS],
}

impl GraspMap {
    pub fn matrix(&self) -> &SMatrix<f64, 6, 12> {
        &self.matrix
    }

    pub fn mask(&self) -> [bool; NUM_LEGS] {
        self.mask
    }

    /// `G · F_a`: total wrench at the CoM for stacked foot forces.
    pub fn apply(&self, forces: &[Vec3; NUM_LEGS]) -> Wrench {
        let mut stacked = nalgebra::SVector::<f64, 12>::zeros();
        for (i, f) in forces.iter().enumerate() {
            stacked.fixed_rows_mut::<3>(3 * i).copy_from(f);
        }
        Wrench::from_vector(&(self.matrix * stacked))
    }

    /// Smallest singular value; > 0 means full rank 6.
    pub fn smallest_singular_value(&self) -> f64 {
        self.matrix.singular_values().min()
    }
}

/// Assembles the grasp map from foot positions in the CoM frame.
///
/// Each in-contact leg contributes a `[I₃; S(R_c·ᶜp_i)]` column block. The
/// mask is a forward-compatibility hook for swing legs; this crate only
/// exercises the four-contact case.
pub fn build_grasp_map(
    r_c: &Rotation,
    feet_com: &[Vec3; NUM_LEGS],
    mask: [bool; NUM_LEGS],
) -> Result<GraspMap, ModelError> {
    let count = mask.iter().filter(|&&m| m).count();
    if count < 3 {
        return Err(ModelError::TooFewContacts { count });
    }
    let mut g = SMatrix::<f64, 6, 12>::zeros();
    for i in 0..NUM_LEGS {
        if !mask[i] {
            continue;
        }
        let p = r_c.apply(&feet_com[i]);
        g.fixed_view_mut::<3, 3>(0, 3 * i).copy_from(&Mat3::identity());
        g.fixed_view_mut::<3, 3>(3, 3 * i).copy_from(&skew(&p));
    }
    Ok(GraspMap { matrix: g, mask })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params() -> RobotParams {
        RobotParams::default()
    }

    /// Transform-chain FK oracle: composes the three joint transforms with
    /// nalgebra isometries instead of the closed form.
    fn fk_oracle(params: &RobotParams, leg: usize, q: [f64; 3]) -> Vec3 {
        use nalgebra::{Isometry3, Translation3, Unit, UnitQuaternion};
        let rx = |a: f64| UnitQuaternion::from_axis_angle(&Unit::new_normalize(Vec3::x()), a);
        let ry = |a: f64| UnitQuaternion::from_axis_angle(&Unit::new_normalize(Vec3::y()), a);
        let chain = Isometry3::from_parts(Translation3::from(params.hip_offsets[leg]), rx(q[0]))
            * Isometry3::from_parts(Translation3::identity(), ry(-q[1]))
            * Isometry3::from_parts(Translation3::from(Vec3::new(0.0, 0.0, -params.l1)), ry(-q[2]))
            * Isometry3::from_parts(Translation3::from(Vec3::new(0.0, 0.0, -params.l2)),
                UnitQuaternion::identity());
        chain.translation.vector
    }

    #[test]
    fn fk_zero_configuration_hangs_straight_down() {
        let p = params();
        for leg in 0..4 {
            let tip = leg_fk(&p, leg, [0.0; 3]).unwrap();
            let expected = p.hip_offsets[leg] + Vec3::new(0.0, 0.0, -(p.l1 + p.l2));
            assert_relative_eq!(tip, expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn fk_right_angle_knee_two_link_geometry() {
        let mut p = params();
        p.l1 = 0.2;
        p.l2 = 0.2;
        let tip = leg_fk(&p, 0, [0.0, 0.0, core::f64::consts::FRAC_PI_2]).unwrap();
        let rel = tip - p.hip_offsets[0];
        // Thigh straight down, shank horizontal forward.
        assert_relative_eq!(rel, Vec3::new(0.2, 0.0, -0.2), epsilon = 1e-12);
    }

    #[test]
    fn fk_rejects_out_of_limit_joints() {
        let p = params();
        assert!(matches!(
            leg_fk(&p, 1, [0.0, 3.0, 0.0]),
            Err(ModelError::JointLimit { leg: 1, joint: 1, .. })
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let p = params();
        let configs = [
            [0.1, 0.4, 0.9],
            [-0.3, -0.2, 1.4],
            [0.0, 0.8, 0.3],
            [0.6, -0.5, 2.0],
        ];
        let h = 1e-6;
        for (leg, q) in configs.into_iter().enumerate() {
            let j = leg_jacobian(&p, leg, q);
            for col in 0..3 {
                let mut qp = q;
                let mut qm = q;
                qp[col] += h;
                qm[col] -= h;
                let fd = (leg_fk(&p, leg, qp).unwrap() - leg_fk(&p, leg, qm).unwrap()) / (2.0 * h);
                assert!(
                    (j.column(col) - fd).norm() < 1e-6,
                    "leg {leg} col {col}: {:?} vs {:?}",
                    j.column(col),
                    fd
                );
            }
        }
    }

    #[test]
    fn jacobian_singular_at_full_extension() {
        let p = params();
        // Knee at zero: the knee column is orthogonal to the leg axis, so the
        // extension direction is lost.
        let q = [0.0, 0.3, 0.0];
        let j = leg_jacobian(&p, 0, q);
        let leg_axis = (leg_fk(&p, 0, q).unwrap() - p.hip_offsets[0]).normalize();
        assert_relative_eq!(j.column(2).dot(&leg_axis), 0.0, epsilon = 1e-12);
        assert!(j.determinant().abs() < 1e-12);
    }

    #[test]
    fn jacobian_scales_with_link_lengths() {
        let p = params();
        let mut doubled = p;
        doubled.l1 *= 2.0;
        doubled.l2 *= 2.0;
        let q = [0.2, 0.5, 1.1];
        let j = leg_jacobian(&p, 2, q);
        let j2 = leg_jacobian(&doubled, 2, q);
        assert!((j2 - j * 2.0).norm() < 1e-12);
    }

    #[test]
    fn ik_round_trips_through_fk() {
        let p = params();
        let q = [0.3, -0.4, 1.2];
        let target = leg_fk(&p, 3, q).unwrap();
        let solved = leg_ik(&p, 3, target).unwrap();
        let tip = leg_fk(&p, 3, solved).unwrap();
        assert!((tip - target).norm() < 1e-10);
    }

    #[test]
    fn ik_full_extension_straightens_knee() {
        let p = params();
        let target = p.hip_offsets[0] + Vec3::new(0.0, 0.0, -p.max_reach());
        let q = leg_ik(&p, 0, target).unwrap();
        assert_relative_eq!(q[2], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn ik_rejects_unreachable_target() {
        let p = params();
        let target = p.hip_offsets[0] + Vec3::new(0.0, 0.0, -(p.max_reach() + 0.01));
        assert!(matches!(
            leg_ik(&p, 0, target),
            Err(ModelError::OutOfWorkspace { leg: 0, .. })
        ));
    }

    #[test]
    fn zero_force_gives_zero_torque() {
        let p = params();
        let tau = joint_torques(&Rotation::identity(), &p, 0, [0.1, 0.2, 0.3], &Vec3::zeros());
        assert_eq!(tau, [0.0; 3]);
    }

    #[test]
    fn torque_vanishes_along_singular_direction() {
        let p = params();
        // Straight leg: forces along the leg axis produce no knee torque.
        let q = [0.0, 0.0, 0.0];
        let tau = joint_torques(&Rotation::identity(), &p, 0, q, &Vec3::new(0.0, 0.0, 50.0));
        assert_relative_eq!(tau[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn grasp_map_square_stance_structure() {
        let (a, b, h) = (0.19, 0.12, 0.3);
        let feet = [
            Vec3::new(a, b, -h),
            Vec3::new(a, -b, -h),
            Vec3::new(-a, -b, -h),
            Vec3::new(-a, b, -h),
        ];
        let g = build_grasp_map(&Rotation::identity(), &feet, [true; 4]).unwrap();
        for i in 0..4 {
            let top = g.matrix().fixed_view::<3, 3>(0, 3 * i).into_owned();
            let bottom = g.matrix().fixed_view::<3, 3>(3, 3 * i).into_owned();
            assert!((top - Mat3::identity()).norm() < 1e-15);
            assert!((bottom - skew(&feet[i])).norm() < 1e-15);
        }
    }

    #[test]
    fn grasp_map_symmetric_stance_cancels_torque() {
        let feet = [
            Vec3::new(0.2, 0.15, -0.3),
            Vec3::new(0.2, -0.15, -0.3),
            Vec3::new(-0.2, -0.15, -0.3),
            Vec3::new(-0.2, 0.15, -0.3),
        ];
        let g = build_grasp_map(&Rotation::identity(), &feet, [true; 4]).unwrap();
        let f = 29.0;
        let wrench = g.apply(&[Vec3::new(0.0, 0.0, f); 4]);
        assert_relative_eq!(wrench.force, Vec3::new(0.0, 0.0, 4.0 * f), epsilon = 1e-12);
        assert_relative_eq!(wrench.torque, Vec3::zeros(), epsilon = 1e-12);
    }

    #[test]
    fn grasp_map_rejects_too_few_contacts() {
        let feet = [Vec3::new(0.1, 0.1, -0.3); 4];
        assert!(matches!(
            build_grasp_map(&Rotation::identity(), &feet, [true, false, false, true]),
            Err(ModelError::TooFewContacts { count: 2 })
        ));
    }

    #[test]
    fn grasp_map_all_true_mask_matches_unmasked_columns() {
        let feet = [
            Vec3::new(0.21, 0.1, -0.33),
            Vec3::new(0.18, -0.14, -0.29),
            Vec3::new(-0.2, -0.11, -0.31),
            Vec3::new(-0.17, 0.13, -0.3),
        ];
        let r = Rotation::about_z(0.4);
        let g = build_grasp_map(&r, &feet, [true; 4]).unwrap();
        // Rebuild column blocks directly from the definition.
        for i in 0..4 {
            let p = r.apply(&feet[i]);
            let bottom = g.matrix().fixed_view::<3, 3>(3, 3 * i).into_owned();
            assert!((bottom - skew(&p)).norm() < 1e-15);
        }
    }

    #[test]
    fn params_validation_catches_bad_inertia() {
        let mut p = params();
        p.inertia = Mat3::from_diagonal(&Vec3::new(-0.1, 0.2, 0.3));
        assert!(p.validate().is_err());
        assert!(params().validate().is_ok());
    }

    fn stance_strategy() -> impl Strategy<Value = [Vec3; 4]> {
        proptest::array::uniform4((
            -0.3f64..0.3,
            -0.25f64..0.25,
            -0.4f64..-0.15f64,
        ))
        .prop_map(|pts| {
            let mut feet = [Vec3::zeros(); 4];
            for (i, (x, y, z)) in pts.into_iter().enumerate() {
                // Spread the feet into distinct quadrants to avoid collinear
                // stances.
                let sx = if i < 2 { 0.25 } else { -0.25 };
                let sy = if i % 2 == 0 { 0.18 } else { -0.18 };
                feet[i] = Vec3::new(sx + 0.2 * x, sy + 0.2 * y, z);
            }
            feet
        })
    }

    proptest! {
        #[test]
        fn fk_matches_transform_chain(
            leg in 0usize..4,
            q1 in -1.0f64..1.0, q2 in -1.2f64..1.2, q3 in 0.0f64..2.2,
        ) {
            let p = params();
            let q = [q1, q2, q3];
            let tip = leg_fk(&p, leg, q).unwrap();
            prop_assert!((tip - fk_oracle(&p, leg, q)).norm() < 1e-12);
        }

        #[test]
        fn ik_is_branch_consistent(
            leg in 0usize..4,
            q1 in -1.0f64..1.0, q2 in -1.0f64..1.0, q3 in 0.05f64..2.0,
        ) {
            let p = params();
            let q = [q1, q2, q3];
            // Stay on the branch where the foot is below the hip plane.
            prop_assume!(p.l1 * libm::cos(q2) + p.l2 * libm::cos(q2 + q3) > 0.05);
            let target = leg_fk(&p, leg, q).unwrap();
            let solved = leg_ik(&p, leg, target).unwrap();
            prop_assert!((Vec3::from(solved) - Vec3::from(q)).norm() < 1e-8);
        }

        #[test]
        fn torque_mapping_is_linear(
            fx in -50.0f64..50.0, fy in -50.0f64..50.0, fz in -50.0f64..50.0,
            gx in -50.0f64..50.0, gy in -50.0f64..50.0, gz in -50.0f64..50.0,
            a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let p = params();
            let q = [0.2, 0.4, 1.0];
            let r = Rotation::about_y(0.3);
            let f1 = Vec3::new(fx, fy, fz);
            let f2 = Vec3::new(gx, gy, gz);
            let combined = joint_torques(&r, &p, 1, q, &(f1 * a + f2 * b));
            let t1 = joint_torques(&r, &p, 1, q, &f1);
            let t2 = joint_torques(&r, &p, 1, q, &f2);
            for k in 0..3 {
                prop_assert!((combined[k] - (a * t1[k] + b * t2[k])).abs() < 1e-9);
            }
        }

        #[test]
        fn virtual_work_identity(
            qd1 in -1.0f64..1.0, qd2 in -1.0f64..1.0, qd3 in -1.0f64..1.0,
            fx in -40.0f64..40.0, fy in -40.0f64..40.0, fz in -40.0f64..40.0,
        ) {
            // τᵀ q̇ must equal fᵀ (R_c J) q̇ for any joint velocity.
            let p = params();
            let q = [0.15, -0.3, 1.3];
            let r = Rotation::about_x(0.25);
            let f = Vec3::new(fx, fy, fz);
            let qd = Vec3::new(qd1, qd2, qd3);
            let tau = joint_torques(&r, &p, 2, q, &f);
            let lhs = tau[0] * qd[0] + tau[1] * qd[1] + tau[2] * qd[2];
            let rhs = f.dot(&(r.matrix() * leg_jacobian(&p, 2, q) * qd));
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn grasp_map_has_rank_six(feet in stance_strategy()) {
            let g = build_grasp_map(&Rotation::identity(), &feet, [true; 4]).unwrap();
            prop_assert!(g.smallest_singular_value() > 1e-8);
        }

        #[test]
        fn grasp_map_matches_per_leg_wrench_sum(
            feet in stance_strategy(),
            forces in proptest::array::uniform4((-30.0f64..30.0, -30.0f64..30.0, 0.0f64..60.0)),
        ) {
            let r = Rotation::about_z(0.3) * Rotation::about_x(-0.1);
            let g = build_grasp_map(&r, &feet, [true; 4]).unwrap();
            let fs: [Vec3; 4] = core::array::from_fn(|i| {
                Vec3::new(forces[i].0, forces[i].1, forces[i].2)
            });
            let wrench = g.apply(&fs);
            // Independent oracle: Σ f_i and Σ p_ci × f_i.
            let mut force = Vec3::zeros();
            let mut torque = Vec3::zeros();
            for i in 0..4 {
                force += fs[i];
                torque += r.apply(&feet[i]).cross(&fs[i]);
            }
            prop_assert!((wrench.force - force).norm() < 1e-12);
            prop_assert!((wrench.torque - torque).norm() < 1e-12);
        }
    }
}
