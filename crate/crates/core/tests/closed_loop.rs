//! Closed-loop integration of the public API: simulator, estimator,
//! controller and reference generator wired the way a harness would.

use slipstance_core::{
    ContactMode, Controller, ControllerGains, EstimatorParams, ReferenceGenerator, RobotParams,
    Rotation, SimParams, Simulator, SlipEstimator, StanceInit, Vec3,
};

fn stance(robot: &RobotParams, com: Vec3, mu: f64, seed: u64) -> StanceInit {
    StanceInit {
        com_position: com,
        rotation: Rotation::identity(),
        velocity: Vec3::zeros(),
        omega: Vec3::zeros(),
        feet_world: std::array::from_fn(|i| {
            Vec3::new(com.x + robot.hip_offsets[i].x, com.y + robot.hip_offsets[i].y, 0.0)
        }),
        mu_static: [mu; 4],
        mu_kinetic: [0.9 * mu; 4],
        seed,
    }
}

#[test]
fn tracks_a_point_to_point_reference_to_millimeters() {
    let robot = RobotParams::default();
    let gains = ControllerGains::new(3000.0, 150.0, 550.0, 55.0, 35.0, 150.0);
    let dt = 0.002;
    let com = Vec3::new(0.0, 0.0, 0.3);

    let mut sim = Simulator::new(
        robot,
        SimParams {
            dt,
            noise_enabled: false,
            ideal_contacts: true,
            ..SimParams::default()
        },
        stance(&robot, com, 1.4, 4),
    )
    .unwrap();
    let mut estimator = SlipEstimator::new(EstimatorParams::default(), robot.gravity);
    let mut controller = Controller::new(gains, robot).unwrap();
    let mut reference = ReferenceGenerator::PointToPoint {
        target: com + Vec3::new(0.05, 0.02, -0.01),
        k_ds: 1.0,
        current: com,
        rotation: Rotation::identity(),
    };

    let mut drive = [0.0; 4];
    let mut last_error = f64::NAN;
    for _ in 0..3000 {
        let state = *sim.state();
        let out = controller.cycle(&state, drive, &mut reference, dt).unwrap();
        let samples = sim.step(&out.forces).unwrap();
        for (i, s) in samples.iter().enumerate() {
            estimator.update(i, s, sim.state().contacts[i].normal_force);
        }
        drive = estimator.slip_drive();
        last_error = out.error.position.norm();
    }

    assert!(last_error < 1e-4, "position error {last_error}");
    // Nothing slipped, so the adaptive state never moved.
    assert_eq!(*controller.weights().weights(), [35.0; 12]);
    assert_eq!(controller.weights().beta, 1.0);
}

#[test]
fn slippery_foot_triggers_selective_adaptation() {
    let robot = RobotParams::default();
    let gains = ControllerGains::new(3000.0, 150.0, 550.0, 55.0, 35.0, 150.0);
    let dt = 0.002;
    let com = Vec3::new(0.0, 0.0, 0.25);

    // Rear-right foot on a slippery patch, stance slightly splayed so the
    // grippy feet keep their margins.
    let mut init = stance(&robot, com, 1.4, 9);
    init.mu_static[2] = 0.25;
    init.mu_kinetic[2] = 0.225;
    for (i, foot) in init.feet_world.iter_mut().enumerate() {
        foot.x += 0.05 * robot.hip_offsets[i].x.signum();
        foot.y += 0.05 * robot.hip_offsets[i].y.signum();
    }

    let mut sim = Simulator::new(
        robot,
        SimParams {
            dt,
            noise_enabled: true,
            ..SimParams::default()
        },
        init,
    )
    .unwrap();
    let mut estimator = SlipEstimator::new(EstimatorParams::default(), robot.gravity);
    let mut controller = Controller::new(gains, robot).unwrap();
    // A sideways push whose tangential share exceeds the slippery cone.
    let mut reference = ReferenceGenerator::PointToPoint {
        target: com + Vec3::new(0.10, 0.0, 0.0),
        k_ds: 2.0,
        current: com,
        rotation: Rotation::identity(),
    };

    let mut drive = [0.0; 4];
    let mut slipped = false;
    for _ in 0..2000 {
        let state = *sim.state();
        let out = controller.cycle(&state, drive, &mut reference, dt).unwrap();
        let samples = sim.step(&out.forces).expect("run stays healthy");
        for (i, s) in samples.iter().enumerate() {
            estimator.update(i, s, sim.state().contacts[i].normal_force);
        }
        drive = estimator.slip_drive();
        slipped |= sim.state().contacts[2].mode == ContactMode::Slip;
    }

    assert!(slipped, "the slippery foot never slipped");
    let w = controller.weights().weights();
    assert!(w[6] > 35.0, "slipping leg's weight did not grow: {}", w[6]);
    assert_eq!(w[0], 35.0);
    assert_eq!(w[3], 35.0);
    assert_eq!(w[9], 35.0);
}
