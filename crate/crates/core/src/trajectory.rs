//! Online reference generators parameterized by the scaled clock.
//!
//! Trajectories are functions of the virtual time `t_v`, which the control
//! loop advances at rate `β ∈ (0, 1]`. Slowing the clock stretches the motion
//! in real time without touching the traced path; the real-time derivatives
//! reported to the controller pick up the chain-rule factors `β` and `β²`.

use crate::spatial::{Rotation, Vec3};

/// Desired pose, velocity and acceleration at one control instant.
#[derive(Clone, Copy, Debug)]
pub struct TrajectorySample {
    /// Desired CoM position, m.
    pub position: Vec3,
    /// Desired CoM velocity, m/s.
    pub velocity: Vec3,
    /// Desired CoM acceleration, m/s².
    pub acceleration: Vec3,
    /// Desired orientation.
    pub rotation: Rotation,
    /// Desired angular velocity, rad/s.
    pub omega: Vec3,
    /// Desired angular acceleration, rad/s².
    pub omega_dot: Vec3,
}

impl TrajectorySample {
    /// A motionless reference at the given pose.
    pub fn hold(position: Vec3, rotation: Rotation) -> Self {
        TrajectorySample {
            position,
            velocity: Vec3::zeros(),
            acceleration: Vec3::zeros(),
            rotation,
            omega: Vec3::zeros(),
            omega_dot: Vec3::zeros(),
        }
    }
}

/// Advances the scaled clock: `t_v ← t_v + β·dt`.
pub fn advance_clock(t_v: f64, beta: f64, dt: f64) -> f64 {
    t_v + beta * dt
}

/// Applies the chain rule of the scaled clock to a `t_v`-parametric sample:
/// first derivatives scale by `β`, second derivatives by `β²`.
///
/// The `β̇` contribution to the second derivatives is dropped: the clock rate
/// changes by at most `α·dt` per cycle and the residual is absorbed by the
/// feedback terms.
pub fn scale_derivatives(sample: TrajectorySample, beta: f64) -> TrajectorySample {
    TrajectorySample {
        position: sample.position,
        velocity: sample.velocity * beta,
        acceleration: sample.acceleration * (beta * beta),
        rotation: sample.rotation,
        omega: sample.omega * beta,
        omega_dot: sample.omega_dot * (beta * beta),
    }
}

/// One Euler step of the first-order point-to-point dynamical system
/// `dp_d/dt_v = −k_ds (p_d − p_T)`, run in scaled time (effective real-time
/// rate `β·k_ds`).
///
/// Returns the sample at the post-integration `p_d`; the caller keeps
/// `sample.position` as the next current point. The reported velocity and
/// acceleration are the real-time derivatives of the flow, already
/// `β`-scaled. Orientation is held constant.
pub fn p2p_sample(
    target: Vec3,
    current: Vec3,
    k_ds: f64,
    rotation: Rotation,
    beta: f64,
    dt: f64,
) -> TrajectorySample {
    let next = current - (current - target) * (k_ds * beta * dt);
    let velocity = -(next - target) * (k_ds * beta);
    let acceleration = (next - target) * (k_ds * k_ds * beta * beta);
    TrajectorySample {
        position: next,
        velocity,
        acceleration,
        rotation,
        omega: Vec3::zeros(),
        omega_dot: Vec3::zeros(),
    }
}

/// Parameters of the periodic ellipse-plus-roll trajectory.
#[derive(Clone, Copy, Debug)]
pub struct EllipseParams {
    /// Center of the ellipse (also the pose at `t_v = 0`).
    pub center: Vec3,
    /// Semi-axis along x, m.
    pub a_x: f64,
    /// Semi-axis along z, m.
    pub a_z: f64,
    /// Position frequency, Hz.
    pub freq_pos: f64,
    /// Roll amplitude about x, rad.
    pub roll_amplitude: f64,
    /// Roll frequency, Hz.
    pub freq_roll: f64,
}

/// Samples the x–z ellipse with periodic roll at virtual time `t_v`.
///
/// `p_d = center + [a_x sin(ω_p t_v), 0, a_z (cos(ω_p t_v) − 1)]` starts at
/// the center with zero offset; the roll is `θ_a sin(ω_o t_v)` about x. All
/// derivatives are analytic in `t_v` (unscaled — see [`scale_derivatives`]).
pub fn ellipse_sample(t_v: f64, params: &EllipseParams) -> TrajectorySample {
    let wp = 2.0 * core::f64::consts::PI * params.freq_pos;
    let wo = 2.0 * core::f64::consts::PI * params.freq_roll;
    let (sp, cp) = (libm::sin(wp * t_v), libm::cos(wp * t_v));
    let (so, co) = (libm::sin(wo * t_v), libm::cos(wo * t_v));

    let position = params.center + Vec3::new(params.a_x * sp, 0.0, params.a_z * (cp - 1.0));
    let velocity = Vec3::new(params.a_x * wp * cp, 0.0, -params.a_z * wp * sp);
    let acceleration = Vec3::new(-params.a_x * wp * wp * sp, 0.0, -params.a_z * wp * wp * cp);

    let roll = params.roll_amplitude * so;
    let rotation = Rotation::about_x(roll);
    let omega = Vec3::new(params.roll_amplitude * wo * co, 0.0, 0.0);
    let omega_dot = Vec3::new(-params.roll_amplitude * wo * wo * so, 0.0, 0.0);

    TrajectorySample {
        position,
        velocity,
        acceleration,
        rotation,
        omega,
        omega_dot,
    }
}

/// The reference source driven by the control loop.
#[derive(Clone, Debug)]
pub enum ReferenceGenerator {
    /// First-order dynamical system converging to a constant target.
    PointToPoint {
        target: Vec3,
        k_ds: f64,
        current: Vec3,
        rotation: Rotation,
    },
    /// Periodic ellipse in the x–z plane with a periodic roll about x.
    Ellipse(EllipseParams),
}

impl ReferenceGenerator {
    /// Produces the reference for the cycle, with real-time (`β`-scaled)
    /// derivatives. `t_v` must already be advanced for this cycle.
    pub fn sample(&mut self, t_v: f64, beta: f64, dt: f64) -> TrajectorySample {
        match self {
            ReferenceGenerator::PointToPoint {
                target,
                k_ds,
                current,
                rotation,
            } => {
                let s = p2p_sample(*target, *current, *k_ds, *rotation, beta, dt);
                *current = s.position;
                s
            }
            ReferenceGenerator::Ellipse(params) => {
                scale_derivatives(ellipse_sample(t_v, params), beta)
            }
        }
    }

    /// The reference pose at `t_v = 0` (used for initialization).
    pub fn initial_position(&self) -> Vec3 {
        match self {
            ReferenceGenerator::PointToPoint { current, .. } => *current,
            ReferenceGenerator::Ellipse(params) => params.center,
        }
    }

    /// The full reference state at `t_v = 0` without advancing anything;
    /// lets a run start on the trajectory instead of jolting onto it.
    pub fn initial_sample(&self) -> TrajectorySample {
        match self {
            ReferenceGenerator::PointToPoint {
                target,
                k_ds,
                current,
                rotation,
            } => TrajectorySample {
                position: *current,
                velocity: -(*current - *target) * *k_ds,
                acceleration: (*current - *target) * (*k_ds * *k_ds),
                rotation: *rotation,
                omega: Vec3::zeros(),
                omega_dot: Vec3::zeros(),
            },
            ReferenceGenerator::Ellipse(params) => ellipse_sample(0.0, params),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ellipse() -> EllipseParams {
        EllipseParams {
            center: Vec3::new(0.0, 0.0, 0.3),
            a_x: 0.05,
            a_z: 0.02,
            freq_pos: 0.7,
            roll_amplitude: 0.1,
            freq_roll: 0.2,
        }
    }

    #[test]
    fn p2p_target_is_a_fixed_point() {
        let t = Vec3::new(0.3, -0.1, 0.25);
        let s = p2p_sample(t, t, 1.0, Rotation::identity(), 1.0, 0.002);
        assert_eq!(s.position, t);
        assert_eq!(s.velocity, Vec3::zeros());
        assert_eq!(s.acceleration, Vec3::zeros());
    }

    #[test]
    fn p2p_converges_exponentially() {
        let target = Vec3::new(0.1, 0.05, -0.005);
        let d0 = Vec3::new(-0.1, -0.05, 0.005);
        let k = 1.0;
        let dt = 0.002;
        let mut current = target + d0;
        let steps = 2500; // 5 s
        for _ in 0..steps {
            current = p2p_sample(target, current, k, Rotation::identity(), 1.0, dt).position;
        }
        let t = steps as f64 * dt;
        let expected = d0.norm() * libm::exp(-k * t);
        let actual = (current - target).norm();
        // Forward Euler lags the exact exponential by O(k² dt t).
        assert!(
            (actual - expected).abs() / expected < 0.01,
            "{actual} vs {expected}"
        );
    }

    #[test]
    fn p2p_beta_halves_the_decay_exponent() {
        let target = Vec3::new(0.2, 0.0, 0.0);
        let start = Vec3::zeros();
        let dt = 0.002;
        let run = |beta: f64| {
            let mut current = start;
            for _ in 0..1000 {
                current = p2p_sample(target, current, 1.0, Rotation::identity(), beta, dt).position;
            }
            (current - target).norm()
        };
        let full = run(1.0);
        let half = run(0.5);
        // dist(t) = d0 e^{−βkt}: halving β square-roots the decay ratio.
        let ratio_full = full / (target - start).norm();
        let ratio_half = half / (target - start).norm();
        assert_relative_eq!(ratio_half, libm::sqrt(ratio_full), epsilon = 1e-3);
    }

    #[test]
    fn ellipse_phase_zero() {
        let p = ellipse();
        let s = ellipse_sample(0.0, &p);
        assert_relative_eq!(s.position, p.center, epsilon = 1e-15);
        let wo = 2.0 * core::f64::consts::PI * p.freq_roll;
        assert_relative_eq!(
            s.omega,
            Vec3::new(p.roll_amplitude * wo, 0.0, 0.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ellipse_quarter_period_offsets() {
        let p = ellipse();
        let s = ellipse_sample(1.0 / (4.0 * p.freq_pos), &p);
        let rel = s.position - p.center;
        assert_relative_eq!(rel.x, p.a_x, epsilon = 1e-12);
        assert_relative_eq!(rel.z, -p.a_z, epsilon = 1e-12);
    }

    #[test]
    fn ellipse_omega_matches_finite_difference_of_rotation() {
        // S(ω_d) = Ṙ_d R_dᵀ, checked by central differences.
        let p = ellipse();
        let h = 1e-6;
        for &t in &[0.13, 0.77, 1.9, 3.31] {
            let s = ellipse_sample(t, &p);
            let rp = ellipse_sample(t + h, &p).rotation;
            let rm = ellipse_sample(t - h, &p).rotation;
            let rdot = (rp.matrix() - rm.matrix()) / (2.0 * h);
            let omega_hat = rdot * s.rotation.matrix().transpose();
            let omega = Vec3::new(omega_hat[(2, 1)], omega_hat[(0, 2)], omega_hat[(1, 0)]);
            assert!((omega - s.omega).norm() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn ellipse_is_periodic() {
        let p = ellipse();
        for &t in &[0.0, 0.4, 1.234] {
            let a = ellipse_sample(t, &p);
            let b = ellipse_sample(t + 1.0 / p.freq_pos, &p);
            assert_relative_eq!(a.position, b.position, epsilon = 1e-9);
        }
    }

    #[test]
    fn clock_integrates_beta() {
        // Constant β = 1 for T seconds gives t_v = T.
        let dt = 0.002;
        let mut t_v = 0.0;
        for _ in 0..500 {
            t_v = advance_clock(t_v, 1.0, dt);
        }
        assert_relative_eq!(t_v, 1.0, epsilon = 1e-12);

        // Constant β = 0.77 over 1 s.
        let mut t_v = 0.0;
        for _ in 0..500 {
            t_v = advance_clock(t_v, 0.77, dt);
        }
        assert_relative_eq!(t_v, 0.77, epsilon = 1e-12);

        // Piecewise β matches the Riemann sum of β over time.
        let betas = [1.0, 0.5, 0.5, 1.0, 0.75];
        let mut t_v = 0.0;
        let mut integral = 0.0;
        for &b in betas.iter().cycle().take(1000) {
            t_v = advance_clock(t_v, b, dt);
            integral += b * dt;
        }
        assert_relative_eq!(t_v, integral, epsilon = 1e-12);
    }

    #[test]
    fn path_is_invariant_under_time_scaling() {
        // Positions depend on t_v alone, so any β profile traces a subset of
        // the β ≡ 1 path.
        let p = ellipse();
        let dt = 0.002;
        let mut t_v = 0.0;
        let mut gen = ReferenceGenerator::Ellipse(p);
        for k in 0..2000 {
            let beta = if (k / 300) % 2 == 0 { 1.0 } else { 0.6 };
            t_v = advance_clock(t_v, beta, dt);
            let scaled = gen.sample(t_v, beta, dt);
            let on_path = ellipse_sample(t_v, &p);
            assert!((scaled.position - on_path.position).norm() < 1e-9);
        }
    }

    #[test]
    fn reported_velocity_matches_real_time_differences() {
        // Finite differences of the sampled positions over real time must
        // match the β-scaled velocities for a piecewise-constant β profile.
        let p = ellipse();
        let dt = 0.002;
        let mut t_v = 0.0;
        let mut gen = ReferenceGenerator::Ellipse(p);
        let mut prev = gen.sample(0.0, 1.0, dt);
        for k in 1..3000 {
            let beta = if k < 1500 { 1.0 } else { 0.55 };
            t_v = advance_clock(t_v, beta, dt);
            let s = gen.sample(t_v, beta, dt);
            let fd = (s.position - prev.position) / dt;
            // O(dt) agreement away from the β discontinuity.
            if k != 1500 {
                assert!(
                    (fd - s.velocity).norm() < 0.05,
                    "k={k}: fd {fd:?} vs {:?}",
                    s.velocity
                );
            }
            prev = s;
        }
    }
}
