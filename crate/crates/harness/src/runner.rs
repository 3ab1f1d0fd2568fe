//! Scenario execution: wires simulator, estimator and controller together,
//! streams telemetry, applies the stability verdict and writes the run
//! summary.
//!
//! Loop order per cycle: the controller consumes the slip probabilities
//! estimated from the previous step's IMU batch, commands foot forces, the
//! simulator advances one period, and the estimator ingests the fresh IMU
//! samples for the next cycle.

use crate::config::ScenarioConfig;
use crate::telemetry::{Row, TelemetryWriter};
use serde::{Deserialize, Serialize};
use slipstance_core::{ContactMode, Controller, SlipEstimator, Simulator};
use std::path::{Path, PathBuf};

/// Instability is declared when the CoM drops below this fraction of its
/// initial height, when the position error norm exceeds
/// [`MAX_POSITION_ERROR`], or when a simulation/controller fault fires.
const COM_DROP_FRACTION: f64 = 0.5;
/// Position error bound of the stability verdict, m.
const MAX_POSITION_ERROR: f64 = 0.5;

/// Per-run overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub layer1: Option<bool>,
    pub layer2: Option<bool>,
}

/// Machine-readable outcome of a run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Completed,
    Instability { time: f64, reason: String },
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, Verdict::Completed)
    }
}

/// Summary written next to the telemetry CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub schema_version: u32,
    pub seed: u64,
    pub dt: f64,
    pub duration_requested: f64,
    pub duration_completed: f64,
    pub steps: usize,
    pub verdict: Verdict,
    pub layer1: bool,
    pub layer2: bool,
    pub final_position_error: f64,
    pub final_orientation_error: f64,
    pub final_velocity_error: f64,
    pub max_position_error: f64,
    pub final_beta: f64,
    pub final_t_v: f64,
    pub final_weights: [f64; 4],
    pub max_weights: [f64; 4],
    /// Stick→slip transitions per foot.
    pub slip_events: [u32; 4],
    pub final_com: [f64; 3],
    pub min_com_height: f64,
    pub initial_lyapunov: f64,
    pub final_lyapunov: f64,
}

/// Paths and summary produced by [`run_scenario`].
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("model: {0}")]
    Model(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Runs one scenario to completion (or instability), writing
/// `<name>.csv` and `<name>.summary.json` into `out_dir`.
pub fn run_scenario(
    config: &ScenarioConfig,
    out_dir: &Path,
    overrides: &RunOverrides,
) -> Result<RunOutcome, RunError> {
    std::fs::create_dir_all(out_dir)?;
    let seed = overrides.seed.unwrap_or(config.seed);
    let layer1 = overrides.layer1.unwrap_or(config.adaptation.layer1);
    let layer2 = overrides.layer2.unwrap_or(config.adaptation.layer2);

    let robot = config.robot_params();
    let gains = config.controller_gains();
    let dt = config.dt;

    let mut sim = Simulator::new(robot, config.sim_params(), config.stance_init(seed))
        .map_err(|e| RunError::Model(e.to_string()))?;
    let mut estimator = SlipEstimator::new(config.estimator_params(), robot.gravity);
    let mut controller = Controller::new(gains, robot)
        .map_err(|e| RunError::Model(e.to_string()))?
        .with_layers(layer1, layer2);
    let mut trajectory = config.reference_generator();

    let csv_path = out_dir.join(format!("{}.csv", config.name));
    let summary_path = out_dir.join(format!("{}.summary.json", config.name));
    let mut writer = TelemetryWriter::create(&csv_path)?;

    let steps = (config.duration / dt).round() as usize;
    let z0 = config.initial_com().z;
    let mu_static = config.terrain.mu_static;

    let mut slip_drive = [0.0_f64; 4];
    let mut verdict = Verdict::Completed;
    let mut slip_events = [0u32; 4];
    let mut max_weights = [gains.w0; 4];
    let mut max_position_error: f64 = 0.0;
    let mut min_com_height = z0;
    let mut initial_lyapunov = 0.0;
    let mut last_row = Row::default();

    for k in 0..steps {
        let t = (k + 1) as f64 * dt;
        let state = *sim.state();

        let p_stable = estimator.stable_probs();
        let slip_prob = estimator.slip_probs();

        let out = match controller.cycle(&state, slip_drive, &mut trajectory, dt) {
            Ok(out) => out,
            Err(e) => {
                verdict = Verdict::Instability {
                    time: t,
                    reason: format!("controller fault: {e}"),
                };
                break;
            }
        };
        if k == 0 {
            initial_lyapunov = out.lyapunov;
        }

        let prev_modes: [ContactMode; 4] =
            std::array::from_fn(|i| state.contacts[i].mode);

        let fault = match sim.step(&out.forces) {
            Ok(samples) => {
                for i in 0..4 {
                    estimator.update(i, &samples[i], sim.state().contacts[i].normal_force);
                }
                slip_drive = estimator.slip_drive();
                None
            }
            Err(fault) => Some(fault),
        };

        let contacts = &sim.state().contacts;
        for i in 0..4 {
            if prev_modes[i] != ContactMode::Slip && contacts[i].mode == ContactMode::Slip {
                slip_events[i] += 1;
            }
            max_weights[i] = max_weights[i].max(out.weights[3 * i]);
        }

        let e_p_norm = out.error.position.norm();
        max_position_error = max_position_error.max(e_p_norm);
        min_com_height = min_com_height.min(sim.state().position.z);

        let row = make_row(t, &out, sim.state(), &p_stable, &slip_prob, &mu_static);
        writer.write_row(&row)?;
        last_row = row;

        if let Some(fault) = fault {
            verdict = Verdict::Instability {
                time: t,
                reason: format!("simulation fault: {fault}"),
            };
            break;
        }
        if sim.state().position.z < COM_DROP_FRACTION * z0 {
            verdict = Verdict::Instability {
                time: t,
                reason: format!(
                    "CoM dropped to {:.3} m (below {:.0}% of initial)",
                    sim.state().position.z,
                    COM_DROP_FRACTION * 100.0
                ),
            };
            break;
        }
        if e_p_norm > MAX_POSITION_ERROR {
            verdict = Verdict::Instability {
                time: t,
                reason: format!("position error {e_p_norm:.3} m exceeded bound"),
            };
            break;
        }
    }

    let rows = writer.rows_written();
    writer.finish()?;

    let final_e_v = {
        let v = &last_row.e_v;
        (v.iter().map(|x| x * x).sum::<f64>()).sqrt()
    };
    let summary = RunSummary {
        name: config.name.clone(),
        schema_version: crate::telemetry::SCHEMA_VERSION,
        seed,
        dt,
        duration_requested: config.duration,
        duration_completed: rows as f64 * dt,
        steps: rows,
        verdict,
        layer1,
        layer2,
        final_position_error: norm3(&last_row.e_p),
        final_orientation_error: norm3(&last_row.e_o),
        final_velocity_error: final_e_v,
        max_position_error,
        final_beta: last_row.beta,
        final_t_v: last_row.t_v,
        final_weights: last_row.w,
        max_weights,
        slip_events,
        final_com: last_row.p_c,
        min_com_height,
        initial_lyapunov,
        final_lyapunov: last_row.lyapunov,
    };
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;

    Ok(RunOutcome {
        summary,
        csv_path,
        summary_path,
    })
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn make_row(
    t: f64,
    out: &slipstance_core::CycleOutput,
    state: &slipstance_core::RobotState,
    p_stable: &[f64; 4],
    slip_prob: &[f64; 4],
    mu_static: &[f64; 4],
) -> Row {
    let mut forces = [0.0; 12];
    let mut cone_margin = [0.0; 4];
    let mut mode = [0u8; 4];
    for i in 0..4 {
        let f = out.forces[i];
        forces[3 * i] = f.x;
        forces[3 * i + 1] = f.y;
        forces[3 * i + 2] = f.z;
        let n = state.contacts[i].normal;
        let f_n = n.dot(&f);
        let f_t = f - n * f_n;
        cone_margin[i] = mu_static[i] * f_n.max(0.0) - f_t.norm();
        mode[i] = match state.contacts[i].mode {
            ContactMode::Stick => 0,
            ContactMode::Slip => 1,
            ContactMode::Airborne => 2,
        };
    }
    let ev = out.error.velocity;
    Row {
        t,
        t_v: out.t_v,
        beta: out.beta,
        e_p: [out.error.position.x, out.error.position.y, out.error.position.z],
        e_o: [
            out.error.orientation.x,
            out.error.orientation.y,
            out.error.orientation.z,
        ],
        e_v: [
            ev.linear.x, ev.linear.y, ev.linear.z, ev.angular.x, ev.angular.y, ev.angular.z,
        ],
        lyapunov: out.lyapunov,
        p_c: [state.position.x, state.position.y, state.position.z],
        p_d: [
            out.reference.position.x,
            out.reference.position.y,
            out.reference.position.z,
        ],
        w: std::array::from_fn(|i| out.weights[3 * i]),
        p_stable: *p_stable,
        slip_prob: *slip_prob,
        slip_drive: out.slip_drive,
        forces,
        cone_margin,
        mode,
    }
}

/// Convenience wrapper: resolves the default output directory from
/// `$SLIPSTANCE_OUT`, falling back to `./out`.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os("SLIPSTANCE_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}
