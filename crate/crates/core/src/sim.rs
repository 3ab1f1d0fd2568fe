//! Fixed-step centroidal ground-truth simulator.
//!
//! The trunk is a single rigid body driven by gravity and the foot contact
//! forces; legs are massless force transmitters whose joints are re-derived
//! kinematically every step so that stuck feet stay pinned to their world
//! anchors. Terrain is the horizontal plane `z = 0` with a per-foot friction
//! patch.
//!
//! Contact is resolved per foot against the static Coulomb cone
//! `μ_s |nᵀf| > ‖(I − nnᵀ) f‖`. A foot commanded outside its cone switches to
//! slip mode: the transmitted tangential force saturates at `μ_k · f_n`
//! opposing the slip, and the foot slides quasi-statically, with speed
//! proportional to the tangential force excess over the kinetic cone. The
//! anchor translates with the sliding foot and re-engages once the commanded
//! force is back inside the static cone and the slip speed has died out.
//!
//! Each foot carries a synthetic 6-axis IMU derived from the foot-point world
//! kinematics: specific force (including gravity) from finite differences of
//! the anchor velocity, and angular rate modeled as the ball foot rolling on
//! the plane, `ω = (n × v) / r_foot`. Zero-mean Gaussian noise is added per
//! axis from a seeded generator, so runs are reproducible bit for bit.

use crate::model::{build_grasp_map, leg_fk, leg_ik, JointState, ModelError, RobotParams, NUM_LEGS};
use crate::spatial::{rot_exp, Rotation, Twist, Vec3, Wrench};
use alloc::boxed::Box;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Contact phase of one foot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContactMode {
    /// Pinned to its world anchor, transmits the commanded force fully.
    Stick,
    /// Sliding under kinetic friction.
    Slip,
    /// No contact; transmits nothing.
    Airborne,
}

/// Per-foot contact bookkeeping.
#[derive(Clone, Copy, Debug)]
pub struct ContactRecord {
    /// World position of the foot point. Fixed while sticking, translated
    /// while slipping, kinematic (leg FK) while airborne.
    pub anchor: Vec3,
    pub mode: ContactMode,
    /// Surface normal (unit).
    pub normal: Vec3,
    pub mu_static: f64,
    pub mu_kinetic: f64,
    /// Normal force transmitted in the last step, N.
    pub normal_force: f64,
    /// World slip velocity of the foot, m/s. Zero unless slipping.
    pub slip_velocity: Vec3,
}

impl ContactRecord {
    pub fn new(anchor: Vec3, mu_static: f64, mu_kinetic: f64) -> Self {
        ContactRecord {
            anchor,
            mode: ContactMode::Stick,
            normal: Vec3::new(0.0, 0.0, 1.0),
            mu_static,
            mu_kinetic,
            normal_force: 0.0,
            slip_velocity: Vec3::zeros(),
        }
    }
}

/// One synthetic IMU reading from a foot.
#[derive(Clone, Copy, Debug, Default)]
pub struct ImuSample {
    /// Specific force (including gravity), m/s².
    pub accel: Vec3,
    /// Angular rate, rad/s.
    pub gyro: Vec3,
    /// Simulation time of the sample, s.
    pub timestamp: f64,
}

/// Ground-truth state of the robot.
#[derive(Clone, Copy, Debug)]
pub struct RobotState {
    /// CoM position in the world frame, m.
    pub position: Vec3,
    /// Trunk orientation.
    pub rotation: Rotation,
    /// CoM linear velocity, m/s.
    pub velocity: Vec3,
    /// Trunk angular velocity (world frame), rad/s.
    pub omega: Vec3,
    pub joints: JointState,
    pub contacts: [ContactRecord; NUM_LEGS],
}

impl RobotState {
    /// Generalized velocity `[v; ω]`.
    pub fn twist(&self) -> Twist {
        Twist::new(self.velocity, self.omega)
    }

    /// Foot positions in the CoM frame, from the joint state.
    pub fn feet_com(&self, params: &RobotParams) -> Result<[Vec3; NUM_LEGS], ModelError> {
        let mut feet = [Vec3::zeros(); NUM_LEGS];
        for (i, foot) in feet.iter_mut().enumerate() {
            *foot = leg_fk(params, i, self.joints.leg(i))?;
        }
        Ok(feet)
    }
}

/// Integration and sensor parameters of the simulator.
#[derive(Clone, Copy, Debug)]
pub struct SimParams {
    /// Step length, s.
    pub dt: f64,
    /// Accelerometer noise σ per axis, m/s².
    pub sigma_accel: f64,
    /// Gyro noise σ per axis, rad/s.
    pub sigma_gyro: f64,
    /// Master switch for IMU noise.
    pub noise_enabled: bool,
    /// Ball-foot radius used by the rolling gyro model, m.
    pub foot_radius: f64,
    /// Quasi-static sliding speed per newton of tangential force excess,
    /// (m/s)/N.
    pub slip_mobility: f64,
    /// Slip speed below which a foot may re-engage, m/s.
    pub restick_speed: f64,
    /// Idealized contact mode: feet stay pinned and transmit the commanded
    /// force exactly (bilateral contact, no friction cone). This isolates
    /// the closed-loop tracking behavior from contact nonlinearity.
    pub ideal_contacts: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            dt: 0.002,
            sigma_accel: 0.35,
            sigma_gyro: 0.05,
            noise_enabled: true,
            foot_radius: 0.02,
            slip_mobility: 0.05,
            restick_speed: 1e-4,
            ideal_contacts: false,
        }
    }
}

/// Initial stance specification.
#[derive(Clone, Copy, Debug)]
pub struct StanceInit {
    pub com_position: Vec3,
    pub rotation: Rotation,
    /// Initial CoM velocity (e.g. matched to the reference so a periodic
    /// trajectory starts without a velocity-error jolt).
    pub velocity: Vec3,
    /// Initial angular velocity.
    pub omega: Vec3,
    /// Foot world positions; z should lie on the ground plane.
    pub feet_world: [Vec3; NUM_LEGS],
    pub mu_static: [f64; NUM_LEGS],
    pub mu_kinetic: [f64; NUM_LEGS],
    pub seed: u64,
}

/// Fatal simulation faults. Both variants carry the state snapshot at the
/// moment of failure.
#[derive(Clone, Debug)]
pub enum SimFault {
    /// A contact-maintaining leg could no longer reach its anchor — the
    /// kinematic signature of losing controllability.
    Workspace {
        leg: usize,
        time: f64,
        target: Vec3,
        snapshot: Box<RobotState>,
    },
    /// State stopped being finite.
    NumericalDivergence { time: f64, snapshot: Box<RobotState> },
}

impl core::fmt::Display for SimFault {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SimFault::Workspace { leg, time, target, .. } => write!(
                f,
                "leg {leg} lost its anchor at t={time:.3} s (target {:.3}, {:.3}, {:.3})",
                target.x, target.y, target.z
            ),
            SimFault::NumericalDivergence { time, .. } => {
                write!(f, "state diverged at t={time:.3} s")
            }
        }
    }
}

/// Right-hand side of the centroidal dynamics:
/// `V̇ = H⁻¹ (F_c − C_c V_c − g_c)` with `H = diag(m I₃, R 𝓘 Rᵀ)`,
/// `C_c = diag(0, S(𝓘_c ω))` and `g_c = [0, 0, m g, 0, 0, 0]ᵀ`.
pub fn dynamics_rhs(
    rotation: &Rotation,
    omega: &Vec3,
    wrench: &Wrench,
    params: &RobotParams,
) -> Twist {
    let inertia_world = rotation.matrix() * params.inertia * rotation.matrix().transpose();
    let linear = wrench.force / params.mass - Vec3::new(0.0, 0.0, params.gravity);
    let gyroscopic = (inertia_world * omega).cross(omega);
    let angular = inertia_world
        .cholesky()
        .expect("world inertia is SPD")
        .solve(&(wrench.torque - gyroscopic));
    Twist::new(linear, angular)
}

/// Per-foot contact resolution against the Coulomb cone.
///
/// Returns the transmitted force and the updated record. `commanded` is the
/// reaction the controller asks the ground to exert on the foot.
pub fn resolve_foot(
    record: &ContactRecord,
    commanded: &Vec3,
    params: &SimParams,
) -> (Vec3, ContactRecord) {
    let mut rec = *record;
    if params.ideal_contacts {
        rec.mode = ContactMode::Stick;
        rec.normal_force = rec.normal.dot(commanded);
        rec.slip_velocity = Vec3::zeros();
        return (*commanded, rec);
    }
    if rec.mode == ContactMode::Airborne {
        rec.normal_force = 0.0;
        rec.slip_velocity = Vec3::zeros();
        return (Vec3::zeros(), rec);
    }

    let n = rec.normal;
    let f_n = n.dot(commanded);
    if f_n <= 0.0 {
        // Commanded pull: clamp to zero and drop the contact.
        rec.mode = ContactMode::Airborne;
        rec.normal_force = 0.0;
        rec.slip_velocity = Vec3::zeros();
        return (Vec3::zeros(), rec);
    }

    let f_t = commanded - n * f_n;
    let t_norm = f_t.norm();
    let inside_static = rec.mu_static * f_n > t_norm;

    match rec.mode {
        ContactMode::Stick => {
            if inside_static {
                rec.normal_force = f_n;
                rec.slip_velocity = Vec3::zeros();
                (*commanded, rec)
            } else {
                // Breakaway: saturate at the kinetic cone, slide against the
                // over-commanded direction.
                let t_hat = f_t / t_norm;
                let excess = t_norm - rec.mu_kinetic * f_n;
                rec.mode = ContactMode::Slip;
                rec.normal_force = f_n;
                rec.slip_velocity = -t_hat * (params.slip_mobility * excess);
                (n * f_n + t_hat * (rec.mu_kinetic * f_n), rec)
            }
        }
        ContactMode::Slip => {
            let excess = t_norm - rec.mu_kinetic * f_n;
            if excess > 0.0 {
                let t_hat = f_t / t_norm;
                rec.normal_force = f_n;
                rec.slip_velocity = -t_hat * (params.slip_mobility * excess);
                (n * f_n + t_hat * (rec.mu_kinetic * f_n), rec)
            } else {
                // Friction can hold the command again.
                let still = rec.slip_velocity.norm() < params.restick_speed;
                rec.slip_velocity = Vec3::zeros();
                rec.normal_force = f_n;
                if inside_static && still {
                    rec.mode = ContactMode::Stick;
                }
                (*commanded, rec)
            }
        }
        ContactMode::Airborne => unreachable!(),
    }
}

/// Resolves all four contacts for the current state.
pub fn contact_resolve(
    state: &RobotState,
    commanded: &[Vec3; NUM_LEGS],
    params: &SimParams,
) -> ([Vec3; NUM_LEGS], [ContactRecord; NUM_LEGS]) {
    let mut applied = [Vec3::zeros(); NUM_LEGS];
    let mut records = state.contacts;
    for i in 0..NUM_LEGS {
        let (f, rec) = resolve_foot(&state.contacts[i], &commanded[i], params);
        applied[i] = f;
        records[i] = rec;
    }
    (applied, records)
}

/// The simulator: owns the ground-truth state, the contact bookkeeping and
/// the IMU noise stream. One instance per run; instances are independent.
pub struct Simulator {
    robot: RobotParams,
    params: SimParams,
    state: RobotState,
    time: f64,
    rng: ChaCha8Rng,
    prev_foot_pos: [Vec3; NUM_LEGS],
    prev_foot_vel: [Vec3; NUM_LEGS],
}

impl Simulator {
    /// Builds the simulator from an initial stance; joint angles come from
    /// inverse kinematics of the foot targets.
    pub fn new(robot: RobotParams, params: SimParams, init: StanceInit) -> Result<Self, ModelError> {
        robot.validate()?;
        let mut joints = JointState::default();
        for i in 0..NUM_LEGS {
            let target = init.rotation.apply_inverse(&(init.feet_world[i] - init.com_position));
            joints.set_leg(i, leg_ik(&robot, i, target)?);
        }
        let contacts: [ContactRecord; NUM_LEGS] = core::array::from_fn(|i| {
            ContactRecord::new(init.feet_world[i], init.mu_static[i], init.mu_kinetic[i])
        });
        let state = RobotState {
            position: init.com_position,
            rotation: init.rotation,
            velocity: init.velocity,
            omega: init.omega,
            joints,
            contacts,
        };
        Ok(Simulator {
            robot,
            params,
            state,
            time: 0.0,
            rng: ChaCha8Rng::seed_from_u64(init.seed),
            prev_foot_pos: init.feet_world,
            prev_foot_vel: [Vec3::zeros(); NUM_LEGS],
        })
    }

    pub fn state(&self) -> &RobotState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn robot(&self) -> &RobotParams {
        &self.robot
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    fn gaussian(&mut self) -> f64 {
        // Box–Muller on the ChaCha stream; keeps the whole run reproducible
        // from the single seed.
        let u1 = ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0);
        let u2 = (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }

    /// Advances one control period under the commanded foot reactions and
    /// returns the per-foot IMU samples observed at the end of the step.
    pub fn step(&mut self, commanded: &[Vec3; NUM_LEGS]) -> Result<[ImuSample; NUM_LEGS], SimFault> {
        let dt = self.params.dt;

        // Contact resolution, then the total wrench through the grasp map.
        let (applied, records) = contact_resolve(&self.state, commanded, &self.params);
        self.state.contacts = records;

        let feet_com = self
            .state
            .feet_com(&self.robot)
            .expect("joint state was produced by IK");
        let grasp = build_grasp_map(&self.state.rotation, &feet_com, [true; NUM_LEGS])
            .expect("four contacts");
        let wrench = grasp.apply(&applied);

        let acc = dynamics_rhs(&self.state.rotation, &self.state.omega, &wrench, &self.robot);

        // Semi-implicit Euler: velocities first, then the pose.
        self.state.velocity += acc.linear * dt;
        self.state.omega += acc.angular * dt;
        self.state.position += self.state.velocity * dt;
        self.state.rotation =
            (rot_exp(&(self.state.omega * dt)) * self.state.rotation).renormalized();

        // Move foot points: anchors stay put while sticking, slide while
        // slipping, follow the (frozen) leg kinematics while airborne.
        for i in 0..NUM_LEGS {
            let rec = &mut self.state.contacts[i];
            match rec.mode {
                ContactMode::Stick => {}
                ContactMode::Slip => {
                    rec.anchor += rec.slip_velocity * dt;
                    rec.anchor.z = 0.0;
                }
                ContactMode::Airborne => {
                    let tip = self.state.position
                        + self.state.rotation.apply(&feet_com[i]);
                    rec.anchor = tip;
                    if tip.z <= 0.0 && rec.normal.dot(&commanded[i]) > 0.0 {
                        rec.anchor.z = 0.0;
                        rec.mode = ContactMode::Stick;
                    }
                }
            }
        }

        // Re-derive joints so grounded feet track their anchors.
        for i in 0..NUM_LEGS {
            if self.state.contacts[i].mode == ContactMode::Airborne {
                continue;
            }
            let target = self
                .state
                .rotation
                .apply_inverse(&(self.state.contacts[i].anchor - self.state.position));
            match leg_ik(&self.robot, i, target) {
                Ok(q) => self.state.joints.set_leg(i, q),
                Err(_) => {
                    return Err(SimFault::Workspace {
                        leg: i,
                        time: self.time + dt,
                        target,
                        snapshot: Box::new(self.state),
                    });
                }
            }
        }

        self.time += dt;

        if !(self.state.position.norm_squared().is_finite()
            && self.state.velocity.norm_squared().is_finite()
            && self.state.omega.norm_squared().is_finite())
        {
            return Err(SimFault::NumericalDivergence {
                time: self.time,
                snapshot: Box::new(self.state),
            });
        }

        // Synthesize the IMUs from the foot world kinematics.
        let mut samples = [ImuSample::default(); NUM_LEGS];
        for i in 0..NUM_LEGS {
            let pos = self.state.contacts[i].anchor;
            let vel = (pos - self.prev_foot_pos[i]) / dt;
            let lin_acc = (vel - self.prev_foot_vel[i]) / dt;
            self.prev_foot_pos[i] = pos;
            self.prev_foot_vel[i] = vel;

            let mut accel = lin_acc + Vec3::new(0.0, 0.0, self.robot.gravity);
            let mut gyro = self.state.contacts[i].normal.cross(&vel) / self.params.foot_radius;
            if self.params.noise_enabled {
                accel += Vec3::new(self.gaussian(), self.gaussian(), self.gaussian())
                    * self.params.sigma_accel;
                gyro += Vec3::new(self.gaussian(), self.gaussian(), self.gaussian())
                    * self.params.sigma_gyro;
            } else {
                // Keep the draw count fixed so toggling noise does not shift
                // the stream consumed by anything else.
                for _ in 0..6 {
                    let _ = self.gaussian();
                }
            }
            samples[i] = ImuSample {
                accel,
                gyro,
                timestamp: self.time,
            };
        }
        Ok(samples)
    }
}
