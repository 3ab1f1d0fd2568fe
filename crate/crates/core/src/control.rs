//! Task-space tracking control with two prioritized adaptation layers.
//!
//! The stack, executed once per control period:
//!
//! 1. integrate the tangential weight of each leg by its estimated slippage
//!    probability (first layer: redistribute effort away from slipping legs);
//! 2. recompute the time-scaling coefficient `β = w₀ / min_i w_{i,1}` and
//!    advance the scaled clock (second layer: slow the reference when every
//!    leg is slipping);
//! 3. sample the reference at the scaled clock;
//! 4. form the task-space wrench from pose/velocity errors with gravity
//!    compensation and analytic feedforward;
//! 5. distribute the wrench to foot forces through the weighted right
//!    pseudo-inverse of the grasp map;
//! 6. map foot forces to joint torques through the leg Jacobians.
//!
//! A runtime monitor evaluates the closed-loop storage function
//! `L = (k_p/2)‖e_p‖² + (k_o/2)‖e_o‖² + ½ e_vᵀ H_c e_v`, whose decrease along
//! ideal stick-contact runs certifies convergence.

use crate::model::{
    build_grasp_map, joint_torques, GraspMap, ModelError, RobotParams, NUM_LEGS,
};
use crate::sim::RobotState;
use crate::spatial::{rot_log, skew, Rotation, Twist, Vec3, Wrench};
use crate::trajectory::{advance_clock, ReferenceGenerator, TrajectorySample};
use nalgebra::{Matrix6, SMatrix};

/// Controller gains.
#[derive(Clone, Copy, Debug)]
pub struct ControllerGains {
    /// Position error gain.
    pub k_p: f64,
    /// Orientation error gain.
    pub k_o: f64,
    /// Velocity error gain matrix (6×6, positive definite).
    pub k_v: Matrix6<f64>,
    /// Initial (and vertical) distribution weight.
    pub w0: f64,
    /// Weight adaptation rate.
    pub alpha: f64,
}

impl ControllerGains {
    /// Gains with a block-diagonal `K_v = diag(kv_lin I₃, kv_ang I₃)`.
    pub fn new(k_p: f64, k_o: f64, kv_lin: f64, kv_ang: f64, w0: f64, alpha: f64) -> Self {
        let mut k_v = Matrix6::zeros();
        for i in 0..3 {
            k_v[(i, i)] = kv_lin;
            k_v[(i + 3, i + 3)] = kv_ang;
        }
        ControllerGains {
            k_p,
            k_o,
            k_v,
            w0,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<(), ControlError> {
        if !(self.k_p > 0.0 && self.k_o > 0.0 && self.w0 > 0.0 && self.alpha > 0.0) {
            return Err(ControlError::InvalidGains(
                "scalar gains must be positive",
            ));
        }
        if (self.k_v - self.k_v.transpose()).norm() > 1e-12
            || self.k_v.symmetric_eigenvalues().min() <= 0.0
        {
            return Err(ControlError::InvalidGains(
                "K_v must be symmetric positive definite",
            ));
        }
        Ok(())
    }
}

/// The adaptive memory of the controller: the twelve distribution weights in
/// leg-major order `(w_{i,1}, w_{i,2}, w_{i,3})` plus the scaled clock.
///
/// Invariants kept by [`adapt_weights`]: the two tangential weights of a leg
/// stay equal and never decrease below `w₀`; vertical weights stay at `w₀`;
/// `β ∈ (0, 1]`; `t_v` is nondecreasing.
#[derive(Clone, Copy, Debug)]
pub struct WeightState {
    w: [f64; 12],
    /// Scaled time, s.
    pub t_v: f64,
    /// Current time-scaling coefficient.
    pub beta: f64,
}

impl WeightState {
    pub fn new(w0: f64) -> Self {
        WeightState {
            w: [w0; 12],
            t_v: 0.0,
            beta: 1.0,
        }
    }

    pub fn weights(&self) -> &[f64; 12] {
        &self.w
    }

    /// Tangential weight `w_{i,1}` of one leg.
    pub fn tangential(&self, leg: usize) -> f64 {
        self.w[3 * leg]
    }

    /// Smallest tangential weight across legs.
    pub fn min_tangential(&self) -> f64 {
        (0..NUM_LEGS).fold(f64::INFINITY, |m, i| m.min(self.w[3 * i]))
    }
}

/// Pose, orientation and velocity tracking errors.
#[derive(Clone, Copy, Debug)]
pub struct PoseError {
    /// `p_c − p_d`, m.
    pub position: Vec3,
    /// `log(R_c R_dᵀ)`, rad.
    pub orientation: Vec3,
    /// `V_c − [ṗ_d; R_c R_dᵀ ω_d]`.
    pub velocity: Twist,
}

/// Controller-level failures.
#[derive(Clone, Copy, Debug)]
pub enum ControlError {
    InvalidGains(&'static str),
    /// `G W⁻¹ Gᵀ` is too ill-conditioned to invert reliably.
    NearSingularStance { condition: f64 },
    Model(ModelError),
}

impl From<ModelError> for ControlError {
    fn from(e: ModelError) -> Self {
        ControlError::Model(e)
    }
}

impl core::fmt::Display for ControlError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ControlError::InvalidGains(what) => write!(f, "invalid gains: {what}"),
            ControlError::NearSingularStance { condition } => {
                write!(f, "near-singular stance: cond(G W⁻¹ Gᵀ) = {condition:.3e}")
            }
            ControlError::Model(e) => write!(f, "{e}"),
        }
    }
}

/// World-frame inertia `𝓘_c = R 𝓘 Rᵀ`.
fn inertia_world(rotation: &Rotation, params: &RobotParams) -> crate::spatial::Mat3 {
    rotation.matrix() * params.inertia * rotation.matrix().transpose()
}

/// Tracking errors of the current state against the reference.
pub fn pose_errors(state: &RobotState, reference: &TrajectorySample) -> PoseError {
    let r_e = state.rotation * reference.rotation.transpose();
    let omega_ref = r_e.apply(&reference.omega);
    PoseError {
        position: state.position - reference.position,
        orientation: rot_log(&r_e),
        velocity: Twist::new(
            state.velocity - reference.velocity,
            state.omega - omega_ref,
        ),
    }
}

/// The task-space control wrench with gravity compensation.
///
/// The rotational feedforward derivative is expanded analytically:
/// `d/dt(R_c R_dᵀ ω_d) = S(ω_c) R_c R_dᵀ ω_d + R_c R_dᵀ ω̇_d` (the
/// `S(ω_d) ω_d` cross term vanishes identically).
pub fn control_wrench(
    error: &PoseError,
    state: &RobotState,
    reference: &TrajectorySample,
    gains: &ControllerGains,
    params: &RobotParams,
) -> Wrench {
    let i_c = inertia_world(&state.rotation, params);
    let r_e = state.rotation * reference.rotation.transpose();
    let omega_ref = r_e.apply(&reference.omega);
    let ff_angular = skew(&state.omega) * omega_ref + r_e.apply(&reference.omega_dot);

    let inertial_force = reference.acceleration * params.mass;
    let inertial_torque = i_c * ff_angular;
    // C_c [ṗ_d; R_c R_dᵀ ω_d]: the linear block of C_c is zero.
    let coriolis_torque = (i_c * state.omega).cross(&omega_ref);

    let feedback = gains.k_v * error.velocity.as_vector();
    let force = inertial_force - error.position * gains.k_p
        - Vec3::new(feedback[0], feedback[1], feedback[2])
        + Vec3::new(0.0, 0.0, params.mass * params.gravity);
    let torque = inertial_torque + coriolis_torque
        - error.orientation * gains.k_o
        - Vec3::new(feedback[3], feedback[4], feedback[5]);
    Wrench::new(force, torque)
}

/// Distributes a task wrench to foot forces through the weighted right
/// pseudo-inverse `G† = W⁻¹ Gᵀ (G W⁻¹ Gᵀ)⁻¹`.
///
/// The result reproduces the wrench (`G F_a = F_c`) and minimizes `F_aᵀ W F_a`
/// among all solutions. Fails when `cond(G W⁻¹ Gᵀ)` exceeds 1e12.
pub fn distribute_forces(
    grasp: &GraspMap,
    wrench: &Wrench,
    weights: &WeightState,
) -> Result<[Vec3; NUM_LEGS], ControlError> {
    let g = grasp.matrix();
    let w = weights.weights();

    // W⁻¹Gᵀ, with W diagonal.
    let mut winv_gt = SMatrix::<f64, 12, 6>::zeros();
    for j in 0..12 {
        for i in 0..6 {
            winv_gt[(j, i)] = g[(i, j)] / w[j];
        }
    }
    let a = g * winv_gt;

    let eig = a.symmetric_eigenvalues();
    let (e_max, e_min) = (eig.max(), eig.min());
    let condition = if e_min > 0.0 { e_max / e_min } else { f64::INFINITY };
    if !condition.is_finite() || condition > 1e12 {
        return Err(ControlError::NearSingularStance { condition });
    }

    let rhs = wrench.as_vector();
    let solved = match a.cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => {
            // Degenerate but not flagged by the condition estimate: retry
            // with a tiny diagonal jitter.
            let jittered = a + Matrix6::identity() * 1e-12;
            jittered
                .cholesky()
                .ok_or(ControlError::NearSingularStance { condition })?
                .solve(&rhs)
        }
    };

    let stacked = winv_gt * solved;
    Ok(core::array::from_fn(|i| {
        Vec3::new(stacked[3 * i], stacked[3 * i + 1], stacked[3 * i + 2])
    }))
}

/// First adaptation layer: forward-Euler integration of
/// `ẇ_{i,1} = ẇ_{i,2} = α P_i` on the tangential weights, where `P_i` is the
/// slippage probability of leg `i`. Vertical weights are untouched and
/// weights never decrease.
pub fn adapt_weights(
    weights: &mut WeightState,
    slip_probs: [f64; NUM_LEGS],
    gains: &ControllerGains,
    dt: f64,
) {
    for (i, p) in slip_probs.iter().enumerate() {
        let dw = gains.alpha * p.clamp(0.0, 1.0) * dt;
        weights.w[3 * i] += dw;
        weights.w[3 * i + 1] = weights.w[3 * i];
    }
}

/// Second adaptation layer: `β = w₀ / min_i(w_{i,1})`, in `(0, 1]`.
pub fn time_scale(weights: &WeightState, gains: &ControllerGains) -> f64 {
    gains.w0 / weights.min_tangential()
}

/// The closed-loop storage function
/// `L = (k_p/2)‖e_p‖² + (k_o/2)‖e_o‖² + ½ e_vᵀ H_c e_v`.
///
/// Trend detection is done downstream by numerically differentiating the
/// logged values.
pub fn lyapunov(
    error: &PoseError,
    gains: &ControllerGains,
    params: &RobotParams,
    rotation: &Rotation,
) -> f64 {
    let i_c = inertia_world(rotation, params);
    let kinetic = params.mass * error.velocity.linear.norm_squared()
        + error.velocity.angular.dot(&(i_c * error.velocity.angular));
    0.5 * gains.k_p * error.position.norm_squared()
        + 0.5 * gains.k_o * error.orientation.norm_squared()
        + 0.5 * kinetic
}

/// Everything one control cycle produces, for actuation and telemetry.
#[derive(Clone, Copy, Debug)]
pub struct CycleOutput {
    /// Joint torques per leg.
    pub torques: [[f64; 3]; NUM_LEGS],
    /// Commanded foot reaction forces.
    pub forces: [Vec3; NUM_LEGS],
    /// Task-space wrench before distribution.
    pub wrench: Wrench,
    /// Reference sampled at the scaled clock.
    pub reference: TrajectorySample,
    pub error: PoseError,
    /// Storage-function value.
    pub lyapunov: f64,
    pub beta: f64,
    pub t_v: f64,
    pub weights: [f64; 12],
    /// Slippage probabilities that drove the weight update this cycle.
    pub slip_drive: [f64; NUM_LEGS],
}

/// The per-robot sequential controller.
pub struct Controller {
    gains: ControllerGains,
    params: RobotParams,
    weights: WeightState,
    layer1_enabled: bool,
    layer2_enabled: bool,
}

impl Controller {
    pub fn new(gains: ControllerGains, params: RobotParams) -> Result<Self, ControlError> {
        gains.validate()?;
        params.validate()?;
        Ok(Controller {
            gains,
            params,
            weights: WeightState::new(gains.w0),
            layer1_enabled: true,
            layer2_enabled: true,
        })
    }

    /// Disables adaptation layers (for comparison runs).
    pub fn with_layers(mut self, layer1: bool, layer2: bool) -> Self {
        self.layer1_enabled = layer1;
        self.layer2_enabled = layer2;
        self
    }

    pub fn weights(&self) -> &WeightState {
        &self.weights
    }

    pub fn gains(&self) -> &ControllerGains {
        &self.gains
    }

    /// Runs one control cycle: weight update, time scaling, clock, reference,
    /// wrench, distribution, torques — in that order.
    pub fn cycle(
        &mut self,
        state: &RobotState,
        slip_drive: [f64; NUM_LEGS],
        trajectory: &mut ReferenceGenerator,
        dt: f64,
    ) -> Result<CycleOutput, ControlError> {
        if self.layer1_enabled {
            adapt_weights(&mut self.weights, slip_drive, &self.gains, dt);
        }
        self.weights.beta = if self.layer2_enabled {
            time_scale(&self.weights, &self.gains)
        } else {
            1.0
        };
        self.weights.t_v = advance_clock(self.weights.t_v, self.weights.beta, dt);

        let reference = trajectory.sample(self.weights.t_v, self.weights.beta, dt);
        let error = pose_errors(state, &reference);
        let wrench = control_wrench(&error, state, &reference, &self.gains, &self.params);

        let feet = state.feet_com(&self.params)?;
        let grasp = build_grasp_map(&state.rotation, &feet, [true; NUM_LEGS])?;
        let forces = distribute_forces(&grasp, &wrench, &self.weights)?;

        let mut torques = [[0.0; 3]; NUM_LEGS];
        for i in 0..NUM_LEGS {
            torques[i] =
                joint_torques(&state.rotation, &self.params, i, state.joints.leg(i), &forces[i]);
        }

        Ok(CycleOutput {
            torques,
            forces,
            wrench,
            reference,
            error,
            lyapunov: lyapunov(&error, &self.gains, &self.params, &state.rotation),
            beta: self.weights.beta,
            t_v: self.weights.t_v,
            weights: *self.weights.weights(),
            slip_drive,
        })
    }
}
