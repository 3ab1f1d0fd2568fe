//! Minimal 3-D spatial math: vectors, rotations, the skew map and the SO(3)
//! logarithm/exponential.
//!
//! Everything here is value-semantic and allocation-free; the types are thin
//! wrappers over `nalgebra` statics so the rest of the crate can stay on
//! fixed-size arithmetic.

use nalgebra::{Matrix3, Vector3};

/// 3-vector of `f64`. Units are context-dependent (m, m/s, N, rad/s, ...).
pub type Vec3 = Vector3<f64>;

/// Dense 3×3 matrix of `f64`.
pub type Mat3 = Matrix3<f64>;

/// A rotation matrix in SO(3).
///
/// Constructors guarantee `RᵀR = I` and `det(R) = +1` to within 1e-9; use
/// [`Rotation::renormalized`] to pull a drifted matrix back onto the group
/// after repeated integration steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Mat3);

/// Orthonormality tolerance enforced by the checked constructor.
pub const ROTATION_TOL: f64 = 1e-9;

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Mat3::identity())
    }

    /// Wraps a matrix after checking the SO(3) invariants.
    pub fn from_matrix(m: Mat3) -> Result<Self, RotationError> {
        let defect = (m.transpose() * m - Mat3::identity()).norm();
        if !defect.is_finite() || defect > ROTATION_TOL {
            return Err(RotationError::NotOrthonormal { defect });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(RotationError::NotProper { det });
        }
        Ok(Rotation(m))
    }

    /// Wraps a matrix that is known to be a rotation (e.g. a product of
    /// existing rotations). Debug builds still assert the invariants.
    pub fn from_matrix_unchecked(m: Mat3) -> Self {
        debug_assert!((m.transpose() * m - Mat3::identity()).norm() < 1e-6);
        Rotation(m)
    }

    pub fn about_x(angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Rotation(Mat3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
    }

    pub fn about_y(angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Rotation(Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c))
    }

    pub fn about_z(angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Rotation(Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Rotation(self.0.transpose())
    }

    /// Rotates a vector.
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// Rotates a vector by the inverse rotation.
    pub fn apply_inverse(&self, v: &Vec3) -> Vec3 {
        self.0.tr_mul(v)
    }

    /// Composition `self · other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation(self.0 * other.0)
    }

    /// Projects the matrix back onto SO(3).
    ///
    /// Two Newton–Schulz polar iterations; quadratically convergent for the
    /// near-orthonormal matrices produced by fixed-step integration.
    pub fn renormalized(&self) -> Rotation {
        let mut r = self.0;
        for _ in 0..2 {
            r = r * (Mat3::identity() * 1.5 - (r.transpose() * r) * 0.5);
        }
        Rotation(r)
    }

    /// Frobenius-norm defect of `RᵀR − I`; 0 for an exact rotation.
    pub fn orthonormality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Mat3::identity()).norm()
    }
}

impl core::ops::Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        self.compose(&rhs)
    }
}

impl core::ops::Mul<Vec3> for Rotation {
    type Output = Vec3;
    fn mul(self, rhs: Vec3) -> Vec3 {
        self.apply(&rhs)
    }
}

/// Violation of the SO(3) invariants on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RotationError {
    NotOrthonormal { defect: f64 },
    NotProper { det: f64 },
}

impl core::fmt::Display for RotationError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RotationError::NotOrthonormal { defect } => {
                write!(f, "matrix is not orthonormal (defect {defect:.3e})")
            }
            RotationError::NotProper { det } => {
                write!(f, "matrix is not a proper rotation (det {det:.6})")
            }
        }
    }
}

/// Generalized force at a frame: linear force and torque.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Wrench {
    /// Force in N.
    pub force: Vec3,
    /// Torque in N·m.
    pub torque: Vec3,
}

impl Wrench {
    pub fn new(force: Vec3, torque: Vec3) -> Self {
        Wrench { force, torque }
    }

    pub fn zero() -> Self {
        Wrench::default()
    }

    pub fn as_vector(&self) -> nalgebra::Vector6<f64> {
        nalgebra::Vector6::new(
            self.force.x,
            self.force.y,
            self.force.z,
            self.torque.x,
            self.torque.y,
            self.torque.z,
        )
    }

    pub fn from_vector(v: &nalgebra::Vector6<f64>) -> Self {
        Wrench {
            force: Vec3::new(v[0], v[1], v[2]),
            torque: Vec3::new(v[3], v[4], v[5]),
        }
    }
}

/// Generalized velocity of a frame: linear and angular parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Twist {
    /// Linear velocity in m/s.
    pub linear: Vec3,
    /// Angular velocity in rad/s.
    pub angular: Vec3,
}

impl Twist {
    pub fn new(linear: Vec3, angular: Vec3) -> Self {
        Twist { linear, angular }
    }

    pub fn zero() -> Self {
        Twist::default()
    }

    pub fn as_vector(&self) -> nalgebra::Vector6<f64> {
        nalgebra::Vector6::new(
            self.linear.x,
            self.linear.y,
            self.linear.z,
            self.angular.x,
            self.angular.y,
            self.angular.z,
        )
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.linear.norm_squared() + self.angular.norm_squared())
    }
}

/// The skew-symmetric map: `skew(v) · w = v × w`.
pub fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// SO(3) exponential by the Rodrigues formula.
///
/// `rot_exp(k θ)` is the rotation about unit axis `k` by angle `θ`;
/// `rot_exp(0) = I`. Small angles use the series expansions of `sin θ / θ`
/// and `(1 − cos θ) / θ²` to avoid 0/0.
pub fn rot_exp(v: &Vec3) -> Rotation {
    let theta2 = v.norm_squared();
    let (a, b) = if theta2 < 1e-8 {
        (
            1.0 - theta2 / 6.0 * (1.0 - theta2 / 20.0),
            0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0),
        )
    } else {
        let theta = libm::sqrt(theta2);
        (libm::sin(theta) / theta, (1.0 - libm::cos(theta)) / theta2)
    };
    let s = skew(v);
    Rotation(Mat3::identity() + s * a + s * s * b)
}

/// SO(3) logarithm: returns `k θ` with `θ = ‖result‖ ∈ [0, π]`.
///
/// The angle comes from `atan2(‖vee(R − Rᵀ)/2‖, (tr R − 1)/2)` which stays
/// well conditioned over the whole domain. Near `θ = π` the axis is taken
/// from the symmetric part `(R + Rᵀ)/2 = cos θ I + (1 − cos θ) k kᵀ`: the
/// largest diagonal entry of `k kᵀ` gives one component by square root and
/// the off-diagonals fix the remaining signs.
pub fn rot_log(r: &Rotation) -> Vec3 {
    let m = r.matrix();
    // vee((R − Rᵀ)/2) = sin θ · k
    let w = Vec3::new(
        (m[(2, 1)] - m[(1, 2)]) * 0.5,
        (m[(0, 2)] - m[(2, 0)]) * 0.5,
        (m[(1, 0)] - m[(0, 1)]) * 0.5,
    );
    let c = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let s = w.norm();
    let theta = libm::atan2(s, c);

    if c <= -1.0 + 1e-6 {
        // θ near π: sin θ no longer carries the axis reliably.
        return log_near_pi(m, c, theta, &w);
    }
    if s < 1e-6 {
        // θ near 0: θ / sin θ → 1 + θ²/6 + ...
        return w * (1.0 + theta * theta / 6.0);
    }
    w * (theta / s)
}

fn log_near_pi(m: &Mat3, c: f64, theta: f64, w: &Vec3) -> Vec3 {
    // (R + Rᵀ)/2 = cos θ I + (1 − cos θ) k kᵀ, and 1 − cos θ ≈ 2 here.
    let sym = (m + m.transpose()) * 0.5;
    let kk = (sym - Mat3::identity() * c) / (1.0 - c);
    let diag = [kk[(0, 0)], kk[(1, 1)], kk[(2, 2)]];
    let mut i = 0;
    if diag[1] > diag[i] {
        i = 1;
    }
    if diag[2] > diag[i] {
        i = 2;
    }
    let ki = libm::sqrt(diag[i].max(0.0));
    let mut k = Vec3::zeros();
    k[i] = ki;
    for j in 0..3 {
        if j != i {
            k[j] = kk[(i, j)] / ki;
        }
    }
    let k = k.normalize();
    // Below π the antisymmetric part still carries the sign of the axis.
    let k = if k.dot(w) < 0.0 { -k } else { k };
    k * theta
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mat_close(a: &Mat3, b: &Mat3, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn skew_of_zero_is_zero() {
        assert_eq!(skew(&Vec3::zeros()), Mat3::zeros());
    }

    #[test]
    fn skew_unit_cross_product() {
        let v = skew(&Vec3::new(0.0, 0.0, 1.0)) * Vec3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(v, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn skew_is_antisymmetric() {
        let s = skew(&Vec3::new(0.3, -1.2, 2.1));
        assert!(mat_close(&s.transpose(), &(-s), 1e-15));
    }

    #[test]
    fn rot_exp_zero_is_identity() {
        assert!(mat_close(
            rot_exp(&Vec3::zeros()).matrix(),
            &Mat3::identity(),
            1e-15
        ));
    }

    #[test]
    fn rot_exp_half_turn_about_z() {
        let r = rot_exp(&Vec3::new(0.0, 0.0, core::f64::consts::PI));
        let expected = Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0));
        assert!(mat_close(r.matrix(), &expected, 1e-12));
    }

    #[test]
    fn rot_log_identity_is_zero() {
        assert_eq!(rot_log(&Rotation::identity()), Vec3::zeros());
    }

    #[test]
    fn rot_log_quarter_turn_about_z() {
        let r = Rotation::about_z(core::f64::consts::FRAC_PI_2);
        assert_relative_eq!(
            rot_log(&r),
            Vec3::new(0.0, 0.0, core::f64::consts::FRAC_PI_2),
            epsilon = 1e-12
        );
    }

    #[test]
    fn round_trip_at_extreme_angles() {
        // The sampled angles called out by the invariants: 1e-8 and π − 1e-6.
        for &theta in &[1e-8, core::f64::consts::PI - 1e-6] {
            for axis in [
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(-0.3, 0.8, 0.52).normalize(),
                Vec3::new(0.0, -1.0, 0.0),
            ] {
                let r = rot_exp(&(axis * theta));
                let back = rot_exp(&rot_log(&r));
                assert!(
                    mat_close(back.matrix(), r.matrix(), 1e-9),
                    "round trip failed at theta={theta}"
                );
                let v = rot_log(&r);
                assert_relative_eq!(v.norm(), theta, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn rot_log_exact_half_turn() {
        let r = Rotation::from_matrix(Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0))).unwrap();
        let v = rot_log(&r);
        assert_relative_eq!(v.norm(), core::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(v.z.abs(), core::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn renormalization_pulls_back_onto_group() {
        let drifted = *Rotation::about_x(0.7).matrix() * 1.0000001
            + Mat3::new(0.0, 1e-7, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let fixed = Rotation(drifted).renormalized();
        assert!(fixed.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn rotation_from_matrix_rejects_junk() {
        let m = Mat3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(Rotation::from_matrix(m).is_err());
    }

    fn arb_unit() -> impl Strategy<Value = Vec3> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter_map("degenerate axis", |(x, y, z)| {
                let v = Vec3::new(x, y, z);
                (v.norm() > 1e-3).then(|| v.normalize())
            })
    }

    proptest! {
        #[test]
        fn skew_matches_cross_product(
            vx in -10.0f64..10.0, vy in -10.0f64..10.0, vz in -10.0f64..10.0,
            wx in -10.0f64..10.0, wy in -10.0f64..10.0, wz in -10.0f64..10.0,
        ) {
            let v = Vec3::new(vx, vy, vz);
            let w = Vec3::new(wx, wy, wz);
            // Independent oracle: component formula for v × w.
            let cross = Vec3::new(
                v.y * w.z - v.z * w.y,
                v.z * w.x - v.x * w.z,
                v.x * w.y - v.y * w.x,
            );
            prop_assert!((skew(&v) * w - cross).norm() < 1e-12);
        }

        #[test]
        fn skew_annihilates_its_own_vector(vx in -10.0f64..10.0, vy in -10.0f64..10.0, vz in -10.0f64..10.0) {
            let v = Vec3::new(vx, vy, vz);
            prop_assert!((skew(&v) * v).norm() < 1e-12);
        }

        #[test]
        fn exp_matches_nalgebra_rodrigues(axis in arb_unit(), theta in 0.0f64..core::f64::consts::PI) {
            // Independent oracle: nalgebra's own axis-angle rotation.
            let oracle = nalgebra::Rotation3::from_axis_angle(
                &nalgebra::Unit::new_normalize(axis), theta);
            let r = rot_exp(&(axis * theta));
            prop_assert!(mat_close(r.matrix(), oracle.matrix(), 1e-10));
        }

        #[test]
        fn exp_log_round_trip(axis in arb_unit(), theta in 0.0f64..core::f64::consts::PI) {
            let r = rot_exp(&(axis * theta));
            let back = rot_exp(&rot_log(&r));
            prop_assert!(mat_close(back.matrix(), r.matrix(), 1e-9));
        }

        #[test]
        fn log_exp_round_trip(axis in arb_unit(), theta in 0.0f64..core::f64::consts::PI - 1e-4) {
            let v = axis * theta;
            let back = rot_log(&rot_exp(&v));
            prop_assert!((back - v).norm() < 1e-7);
        }

        #[test]
        fn exp_is_first_order_near_identity(axis in arb_unit(), theta in 1e-6f64..1e-3) {
            // rot_exp(v) = I + skew(v) + O(‖v‖²)
            let v = axis * theta;
            let linear = Mat3::identity() + skew(&v);
            let err = (rot_exp(&v).matrix() - linear).norm();
            prop_assert!(err < theta * theta);
        }
    }
}
