//! Declarative scenario configuration (TOML).
//!
//! A scenario file fully determines a run: robot parameters, per-foot
//! terrain friction, controller gains, trajectory, estimator tuning, noise
//! levels, duration and RNG seed. Identical config + seed reproduces the
//! telemetry byte for byte.

use serde::{Deserialize, Serialize};
use slipstance_core::{
    ControllerGains, EllipseParams, EstimatorParams, ReferenceGenerator, RobotParams, Rotation,
    SimParams, StanceInit, Vec3,
};
use std::path::Path;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Simulated duration, s.
    pub duration: f64,
    /// Control/integration period, s.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// RNG seed for the IMU noise stream.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub robot: RobotConfig,
    pub terrain: TerrainConfig,
    #[serde(default)]
    pub gains: GainsConfig,
    #[serde(default)]
    pub imu: ImuConfig,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    #[serde(default)]
    pub contact: ContactConfig,
    #[serde(default)]
    pub adaptation: AdaptationConfig,
    pub initial: InitialConfig,
    pub trajectory: TrajectoryConfig,
}

fn default_dt() -> f64 {
    0.002
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RobotConfig {
    pub mass: f64,
    /// Diagonal of the body inertia tensor, kg·m².
    pub inertia_diag: [f64; 3],
    pub gravity: f64,
    /// Hip offsets from the CoM: (±hip_x, ±hip_y, 0).
    pub hip_x: f64,
    pub hip_y: f64,
    pub l1: f64,
    pub l2: f64,
    pub joint_limit: f64,
}

impl Default for RobotConfig {
    fn default() -> Self {
        RobotConfig {
            mass: 12.0,
            inertia_diag: [0.1, 0.25, 0.3],
            gravity: 9.81,
            hip_x: 0.19,
            hip_y: 0.12,
            l1: 0.21,
            l2: 0.21,
            joint_limit: 2.6,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TerrainConfig {
    /// Static friction coefficient per foot (FL, FR, RR, RL order).
    pub mu_static: [f64; 4],
    /// μ_kinetic = ratio · μ_static.
    #[serde(default = "default_mu_ratio")]
    pub mu_kinetic_ratio: f64,
}

fn default_mu_ratio() -> f64 {
    0.9
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct GainsConfig {
    pub k_p: f64,
    pub k_o: f64,
    pub kv_linear: f64,
    pub kv_angular: f64,
    pub w0: f64,
    pub alpha: f64,
}

impl Default for GainsConfig {
    fn default() -> Self {
        GainsConfig {
            k_p: 3000.0,
            k_o: 150.0,
            kv_linear: 550.0,
            kv_angular: 55.0,
            w0: 35.0,
            alpha: 150.0,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImuConfig {
    pub sigma_accel: f64,
    pub sigma_gyro: f64,
    pub noise: bool,
}

impl Default for ImuConfig {
    fn default() -> Self {
        ImuConfig {
            sigma_accel: 0.35,
            sigma_gyro: 0.05,
            noise: true,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorConfig {
    pub window: usize,
    pub bandwidth_floor: f64,
    pub contact_threshold: f64,
    pub slip_deadband: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            window: 40,
            bandwidth_floor: 0.01,
            contact_threshold: 1.0,
            slip_deadband: 0.2,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContactConfig {
    pub foot_radius: f64,
    pub slip_mobility: f64,
    pub restick_speed: f64,
    /// Pin all feet and transmit forces exactly (no cone, no slip).
    pub ideal: bool,
}

impl Default for ContactConfig {
    fn default() -> Self {
        ContactConfig {
            foot_radius: 0.02,
            slip_mobility: 0.05,
            restick_speed: 1e-4,
            ideal: false,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdaptationConfig {
    pub layer1: bool,
    pub layer2: bool,
}

impl Default for AdaptationConfig {
    fn default() -> Self {
        AdaptationConfig {
            layer1: true,
            layer2: true,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    /// Initial CoM position; feet start on the ground below the hips,
    /// splayed outward by `stance_spread`.
    pub com: [f64; 3],
    /// Extra outward (x, y) offset of each foot relative to its hip, m.
    /// Widens the support polygon without changing the robot.
    #[serde(default)]
    pub stance_spread: [f64; 2],
    /// Start with the CoM twist matched to the reference at t_v = 0, so a
    /// periodic trajectory begins without a velocity-error jolt.
    #[serde(default)]
    pub match_reference_velocity: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TrajectoryConfig {
    /// First-order dynamical system toward `start + target_offset`.
    #[serde(rename = "point_to_point")]
    PointToPoint {
        /// Initial desired position p_d(0); defaults to the initial CoM.
        start: Option<[f64; 3]>,
        target_offset: [f64; 3],
        #[serde(default = "default_k_ds")]
        k_ds: f64,
    },
    /// Periodic x–z ellipse with a roll oscillation, centered on the initial
    /// CoM.
    #[serde(rename = "ellipse")]
    Ellipse {
        a_x: f64,
        a_z: f64,
        freq_pos: f64,
        #[serde(default)]
        roll_amplitude: f64,
        #[serde(default)]
        freq_roll: f64,
    },
}

fn default_k_ds() -> f64 {
    1.0
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: toml::de::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_string(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt > 0.0) {
            return Err(ConfigError::Invalid("dt must be positive".into()));
        }
        if !(self.duration > 0.0) {
            return Err(ConfigError::Invalid("duration must be positive".into()));
        }
        for (i, mu) in self.terrain.mu_static.iter().enumerate() {
            if !(*mu > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "mu_static[{i}] must be positive"
                )));
            }
        }
        if !(self.terrain.mu_kinetic_ratio > 0.0 && self.terrain.mu_kinetic_ratio <= 1.0) {
            return Err(ConfigError::Invalid(
                "mu_kinetic_ratio must be in (0, 1]".into(),
            ));
        }
        self.robot_params()
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    pub fn robot_params(&self) -> RobotParams {
        let r = &self.robot;
        RobotParams {
            mass: r.mass,
            inertia: slipstance_core::spatial::Mat3::from_diagonal(&Vec3::new(
                r.inertia_diag[0],
                r.inertia_diag[1],
                r.inertia_diag[2],
            )),
            gravity: r.gravity,
            hip_offsets: [
                Vec3::new(r.hip_x, r.hip_y, 0.0),
                Vec3::new(r.hip_x, -r.hip_y, 0.0),
                Vec3::new(-r.hip_x, -r.hip_y, 0.0),
                Vec3::new(-r.hip_x, r.hip_y, 0.0),
            ],
            l1: r.l1,
            l2: r.l2,
            joint_limit: r.joint_limit,
        }
    }

    pub fn sim_params(&self) -> SimParams {
        SimParams {
            dt: self.dt,
            sigma_accel: self.imu.sigma_accel,
            sigma_gyro: self.imu.sigma_gyro,
            noise_enabled: self.imu.noise,
            foot_radius: self.contact.foot_radius,
            slip_mobility: self.contact.slip_mobility,
            restick_speed: self.contact.restick_speed,
            ideal_contacts: self.contact.ideal,
        }
    }

    pub fn controller_gains(&self) -> ControllerGains {
        let g = &self.gains;
        ControllerGains::new(g.k_p, g.k_o, g.kv_linear, g.kv_angular, g.w0, g.alpha)
    }

    pub fn estimator_params(&self) -> EstimatorParams {
        EstimatorParams {
            window: self.estimator.window,
            bandwidth_floor: self.estimator.bandwidth_floor,
            halfwidth_accel: 3.0 * self.imu.sigma_accel,
            halfwidth_gyro: 3.0 * self.imu.sigma_gyro,
            contact_threshold: self.estimator.contact_threshold,
            slip_deadband: self.estimator.slip_deadband,
        }
    }

    pub fn initial_com(&self) -> Vec3 {
        Vec3::new(self.initial.com[0], self.initial.com[1], self.initial.com[2])
    }

    /// Feet on the ground plane directly below the hips.
    pub fn stance_init(&self, seed: u64) -> StanceInit {
        let robot = self.robot_params();
        let com = self.initial_com();
        let spread = self.initial.stance_spread;
        let feet_world: [Vec3; 4] = std::array::from_fn(|i| {
            let hip = robot.hip_offsets[i];
            Vec3::new(
                com.x + hip.x + spread[0] * hip.x.signum(),
                com.y + hip.y + spread[1] * hip.y.signum(),
                0.0,
            )
        });
        let mu_static = self.terrain.mu_static;
        let mu_kinetic = mu_static.map(|m| m * self.terrain.mu_kinetic_ratio);
        let (velocity, omega) = if self.initial.match_reference_velocity {
            let s = self.reference_generator().initial_sample();
            (s.velocity, s.omega)
        } else {
            (Vec3::zeros(), Vec3::zeros())
        };
        StanceInit {
            com_position: com,
            rotation: Rotation::identity(),
            velocity,
            omega,
            feet_world,
            mu_static,
            mu_kinetic,
            seed,
        }
    }

    pub fn reference_generator(&self) -> ReferenceGenerator {
        let com = self.initial_com();
        match &self.trajectory {
            TrajectoryConfig::PointToPoint {
                start,
                target_offset,
                k_ds,
            } => {
                let start = start
                    .map(|s| Vec3::new(s[0], s[1], s[2]))
                    .unwrap_or(com);
                ReferenceGenerator::PointToPoint {
                    target: start + Vec3::new(target_offset[0], target_offset[1], target_offset[2]),
                    k_ds: *k_ds,
                    current: start,
                    rotation: Rotation::identity(),
                }
            }
            TrajectoryConfig::Ellipse {
                a_x,
                a_z,
                freq_pos,
                roll_amplitude,
                freq_roll,
            } => ReferenceGenerator::Ellipse(EllipseParams {
                center: com,
                a_x: *a_x,
                a_z: *a_z,
                freq_pos: *freq_pos,
                roll_amplitude: *roll_amplitude,
                freq_roll: *freq_roll,
            }),
        }
    }

    /// Ellipse parameters if this scenario uses the periodic trajectory.
    pub fn ellipse_params(&self) -> Option<EllipseParams> {
        match self.reference_generator() {
            ReferenceGenerator::Ellipse(p) => Some(p),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_scenario() {
        let text = r#"
            name = "mini"
            duration = 1.0
            [terrain]
            mu_static = [1.4, 1.4, 0.4, 1.4]
            [initial]
            com = [0.0, 0.0, 0.3]
            [trajectory]
            kind = "ellipse"
            a_x = 0.1
            a_z = 0.02
            freq_pos = 0.7
        "#;
        let cfg = ScenarioConfig::from_toml(text, "inline").unwrap();
        assert_eq!(cfg.dt, 0.002);
        assert_eq!(cfg.gains.k_p, 3000.0);
        assert!(cfg.adaptation.layer1);
        assert_eq!(cfg.terrain.mu_static[2], 0.4);
        assert!(cfg.ellipse_params().is_some());
    }

    #[test]
    fn rejects_bad_friction() {
        let text = r#"
            name = "bad"
            duration = 1.0
            [terrain]
            mu_static = [1.4, 0.0, 0.4, 1.4]
            [initial]
            com = [0.0, 0.0, 0.3]
            [trajectory]
            kind = "point_to_point"
            target_offset = [0.1, 0.0, 0.0]
        "#;
        assert!(ScenarioConfig::from_toml(text, "inline").is_err());
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"
            name = "typo"
            duration = 1.0
            duratino = 2.0
            [terrain]
            mu_static = [1.4, 1.4, 1.4, 1.4]
            [initial]
            com = [0.0, 0.0, 0.3]
            [trajectory]
            kind = "point_to_point"
            target_offset = [0.1, 0.0, 0.0]
        "#;
        assert!(ScenarioConfig::from_toml(text, "inline").is_err());
    }
}
