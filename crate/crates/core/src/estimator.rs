//! Per-foot stable-contact probability estimation.
//!
//! Each foot carries a 6-axis IMU. Over a sliding window the probability
//! density of every axis is approximated by a Gaussian-kernel KDE, and the
//! per-axis probability that the signal is close to zero is the KDE mass on
//! `[-δ, +δ]`, evaluated in closed form as the mean of per-kernel Gaussian
//! CDF differences. Because the axes are treated as independent, the total
//! stable-contact probability of the foot is the product of the six per-axis
//! probabilities. A vertical-force gate decides whether the foot is in
//! contact at all: airborne feet report `P = 1` and never drive adaptation.

use crate::sim::ImuSample;
use alloc::collections::VecDeque;

/// Tuning of the contact estimator.
#[derive(Clone, Copy, Debug)]
pub struct EstimatorParams {
    /// Sliding-window length in samples.
    pub window: usize,
    /// Lower bound on the per-axis KDE bandwidth, in axis units.
    pub bandwidth_floor: f64,
    /// Near-zero integration half-width for the accelerometer axes, m/s².
    pub halfwidth_accel: f64,
    /// Near-zero integration half-width for the gyro axes, rad/s.
    pub halfwidth_gyro: f64,
    /// Vertical-force threshold for the in-contact gate, N.
    pub contact_threshold: f64,
    /// Slip probabilities below this level are reported as exactly zero by
    /// [`SlipEstimator::slip_drive`], so the KDE noise floor of a resting
    /// foot never leaks into the adaptation law.
    pub slip_deadband: f64,
}

impl EstimatorParams {
    /// Derives the near-zero half-widths from the sensor noise levels
    /// (3σ per axis class).
    pub fn from_noise(sigma_accel: f64, sigma_gyro: f64) -> Self {
        EstimatorParams {
            window: 40,
            bandwidth_floor: 0.01,
            halfwidth_accel: 3.0 * sigma_accel,
            halfwidth_gyro: 3.0 * sigma_gyro,
            contact_threshold: 1.0,
            slip_deadband: 0.2,
        }
    }
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams::from_noise(0.35, 0.05)
    }
}

/// Standard normal CDF.
fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * core::f64::consts::FRAC_1_SQRT_2)
}

/// Probability mass of a Gaussian-kernel KDE on `[-halfwidth, +halfwidth]`.
///
/// With kernels centered at each sample the integral has the closed form
/// `mean_j [Φ((δ − x_j)/h) − Φ((−δ − x_j)/h)]`.
pub fn kde_near_zero_prob(samples: &[f64], bandwidth: f64, halfwidth: f64) -> f64 {
    debug_assert!(samples.len() >= 2);
    debug_assert!(bandwidth > 0.0 && halfwidth > 0.0);
    let mut acc = 0.0;
    for &x in samples {
        acc += normal_cdf((halfwidth - x) / bandwidth) - normal_cdf((-halfwidth - x) / bandwidth);
    }
    (acc / samples.len() as f64).clamp(0.0, 1.0)
}

/// Silverman's rule-of-thumb bandwidth, `0.9 σ̂ n^(-1/5)`.
///
/// Degenerate windows (all-identical samples) collapse σ̂ to zero; the caller
/// applies the configured floor.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    0.9 * libm::sqrt(var) * libm::pow(n, -0.2)
}

/// Per-foot belief: the IMU window and the fused stable-contact probability.
#[derive(Clone, Debug)]
pub struct SlipBelief {
    window: VecDeque<[f64; 6]>,
    stable_prob: f64,
    axis_probs: [f64; 6],
    in_contact: bool,
}

impl SlipBelief {
    fn new(capacity: usize) -> Self {
        SlipBelief {
            window: VecDeque::with_capacity(capacity),
            stable_prob: 1.0,
            axis_probs: [1.0; 6],
            in_contact: false,
        }
    }

    /// Fused stable-contact probability in `[0, 1]`.
    pub fn stable_prob(&self) -> f64 {
        self.stable_prob
    }

    /// Complement of [`Self::stable_prob`].
    pub fn slip_prob(&self) -> f64 {
        1.0 - self.stable_prob
    }

    /// Latest per-axis near-zero probabilities (ax, ay, az, gx, gy, gz).
    pub fn axis_probs(&self) -> [f64; 6] {
        self.axis_probs
    }

    pub fn in_contact(&self) -> bool {
        self.in_contact
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }
}

/// Estimator state for all four feet.
#[derive(Clone, Debug)]
pub struct SlipEstimator {
    params: EstimatorParams,
    gravity: f64,
    beliefs: [SlipBelief; 4],
}

impl SlipEstimator {
    pub fn new(params: EstimatorParams, gravity: f64) -> Self {
        SlipEstimator {
            params,
            gravity,
            beliefs: core::array::from_fn(|_| SlipBelief::new(params.window)),
        }
    }

    pub fn params(&self) -> &EstimatorParams {
        &self.params
    }

    pub fn belief(&self, foot: usize) -> &SlipBelief {
        &self.beliefs[foot]
    }

    /// Feeds one IMU sample and the measured vertical force for one foot,
    /// returning the updated stable-contact probability.
    ///
    /// The accelerometer z-axis is gravity-compensated so a resting foot
    /// reads zero on all six channels. Out-of-contact feet report `P = 1`
    /// and their window is cleared so a touchdown starts fresh.
    pub fn update(&mut self, foot: usize, imu: &ImuSample, vertical_force: f64) -> f64 {
        let params = self.params;
        let gravity = self.gravity;
        let belief = &mut self.beliefs[foot];

        if belief.window.len() == params.window {
            belief.window.pop_front();
        }
        belief.window.push_back([
            imu.accel.x,
            imu.accel.y,
            imu.accel.z - gravity,
            imu.gyro.x,
            imu.gyro.y,
            imu.gyro.z,
        ]);

        belief.in_contact = vertical_force > params.contact_threshold;
        if !belief.in_contact {
            belief.window.clear();
            belief.stable_prob = 1.0;
            belief.axis_probs = [1.0; 6];
            return belief.stable_prob;
        }
        if belief.window.len() < params.window {
            // Partial windows make the KDE erratic; stay agnostic until the
            // buffer has filled once.
            belief.stable_prob = 1.0;
            belief.axis_probs = [1.0; 6];
            return belief.stable_prob;
        }

        let mut axis_samples = alloc::vec::Vec::with_capacity(belief.window.len());
        let mut product = 1.0;
        for axis in 0..6 {
            axis_samples.clear();
            axis_samples.extend(belief.window.iter().map(|s| s[axis]));
            let h = silverman_bandwidth(&axis_samples).max(params.bandwidth_floor);
            let delta = if axis < 3 {
                params.halfwidth_accel
            } else {
                params.halfwidth_gyro
            };
            let p = kde_near_zero_prob(&axis_samples, h, delta);
            belief.axis_probs[axis] = p;
            product *= p;
        }
        belief.stable_prob = product;
        belief.stable_prob
    }

    /// Stable-contact probabilities of all feet.
    pub fn stable_probs(&self) -> [f64; 4] {
        core::array::from_fn(|i| self.beliefs[i].stable_prob())
    }

    /// Slippage probabilities (`1 − P`) of all feet.
    pub fn slip_probs(&self) -> [f64; 4] {
        core::array::from_fn(|i| self.beliefs[i].slip_prob())
    }

    /// Slippage probabilities with the deadband applied — the signal that
    /// feeds the weight-adaptation law. Values below the deadband are exactly
    /// zero, so weights of quietly resting feet never creep.
    pub fn slip_drive(&self) -> [f64; 4] {
        core::array::from_fn(|i| {
            let slip = self.beliefs[i].slip_prob();
            if slip < self.params.slip_deadband {
                0.0
            } else {
                slip
            }
        })
    }
}
