//! Two-level rotation picture of the exact iterate: the 2x2 matrix `M_Q`,
//! its axis-angle form, the induced 3x3 rotation, and Bloch vectors.
//!
//! The 2x2 matrices act on coordinates `(alpha, beta)` of
//! `alpha|A'> + beta|B'>`; columns are images of `|A'>` and `|B'>`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::algorithms::exact_k;
use crate::operators::{HilbertPair, PhaseAngle};
use crate::qsim::{StateVector, C64};
use crate::{Error, Result};

pub type Mat2 = Matrix2<C64>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

const I: C64 = C64::new(0.0, 1.0);

pub fn pauli_x() -> Mat2 {
    Mat2::new(c(0.0), c(1.0), c(1.0), c(0.0))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(c(0.0), -I, I, c(0.0))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
}

/// `H_r = x X + y Y + z Z`.
pub fn h_matrix(r: &Vector3<f64>) -> Mat2 {
    pauli_x() * c(r.x) + pauli_y() * c(r.y) + pauli_z() * c(r.z)
}

fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `M_Q` for angle `theta` and phase `phi`.
pub fn m_q(theta: f64, phi: f64) -> Mat2 {
    let (s, co) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let one = c(1.0);
    let em = e.conj();
    let inner = Mat2::new(
        one + (e - one) * s * s,
        (one - em) * s * co,
        (e - one) * s * co,
        one - (one - em) * s * s,
    );
    inner * (-e)
}

/// `(u, v)` with `M_Q = -e^{i phi} [[u, v], [-conj(v), conj(u)]]`.
pub fn m_q_entries(theta: f64, phi: f64) -> (C64, C64) {
    let (s, co) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    (c(1.0) + (e - c(1.0)) * s * s, (c(1.0) - e.conj()) * s * co)
}

/// Axis-angle parameters of `M_Q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationParams {
    pub theta: f64,
    pub phi: f64,
    /// `asin(sin(phi/2) sin(theta))`
    pub beta: f64,
    /// `4 beta`
    pub alpha: f64,
    pub axis: Vector3<f64>,
}

impl RotationParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let sb = (phi / 2.0).sin() * theta.sin();
        if !(-1.0..=1.0).contains(&sb) {
            return Err(Error::Domain(format!("sin(phi/2) sin(theta) = {sb}")));
        }
        let beta = sb.asin();
        let cb = beta.cos();
        if cb < 1e-12 {
            return Err(Error::Domain(format!(
                "rotation axis undefined at theta={theta}, phi={phi}"
            )));
        }
        let (sh, ch) = (phi / 2.0).sin_cos();
        let k = theta.cos() / cb;
        // n_z = k cos(phi/2) tan(theta), written without the tangent.
        let axis = Vector3::new(k * ch, k * sh, theta.sin() * ch / cb);
        Ok(RotationParams {
            theta,
            phi,
            beta,
            alpha: 4.0 * beta,
            axis,
        })
    }

    /// `-e^{i phi} [cos(alpha/2) I + i sin(alpha/2) (n . sigma)]`.
    pub fn su2_form(&self) -> Mat2 {
        let (sa, ca) = (self.alpha / 2.0).sin_cos();
        let inner = Mat2::identity() * c(ca) + h_matrix(&self.axis) * (I * sa);
        inner * (-C64::from_polar(1.0, self.phi))
    }

    /// Spherical angles `(theta', phi')` of the axis.
    pub fn axis_angles(&self) -> (f64, f64) {
        (
            self.axis.z.clamp(-1.0, 1.0).acos(),
            self.axis.y.atan2(self.axis.x),
        )
    }
}

/// A real 3x3 matrix expected to be a proper rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3 {
    pub matrix: Matrix3<f64>,
    /// Largest imaginary part dropped when building from complex entries.
    pub imaginary_residual: f64,
}

impl Rotation3 {
    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Matrix3::identity()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn apply(&self, r: &BlochVector) -> BlochVector {
        BlochVector(self.matrix * r.0)
    }
}

/// The 3x3 rotation induced by `e^{i g} [[u, v], [-conj(v), conj(u)]]`
/// under conjugation of `H_r`.
pub fn rotation_from_su2(u: C64, v: C64) -> Rotation3 {
    let (ub, vb) = (u.conj(), v.conj());
    let half = c(0.5);
    let entries = [
        half * (u * u + ub * ub - v * v - vb * vb),
        I * half * (ub * ub - u * u + vb * vb - v * v),
        -(u * v + ub * vb),
        I * half * (u * u - ub * ub + vb * vb - v * v),
        half * (u * u + ub * ub + v * v + vb * vb),
        I * (ub * vb - u * v),
        ub * v + u * vb,
        I * (ub * v - u * vb),
        u * ub - v * vb,
    ];
    Rotation3 {
        matrix: Matrix3::from_row_iterator(entries.iter().map(|z| z.re)),
        imaginary_residual: entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
    }
}

/// Rotation induced by `M_Q`, entry by entry in `theta` and `phi`.
pub fn rotation_closed_form(theta: f64, phi: f64) -> Matrix3<f64> {
    let (s2, c2) = (2.0 * theta).sin_cos();
    let s4 = (4.0 * theta).sin();
    let c4 = (4.0 * theta).cos();
    let (sp, cp) = phi.sin_cos();
    let (sh, ch) = (phi / 2.0).sin_cos();
    let sh2 = sh * sh;
    Matrix3::new(
        cp * (c2 * c2 * cp + s2 * s2) + c2 * sp * sp,
        -c2 * cp * sp + (ch * ch - c4 * sh2) * sp,
        -s4 * sh2,
        cp * sp * (c2 - 1.0),
        cp * cp + c2 * sp * sp,
        s2 * sp,
        -cp * s4 * sh2 + s2 * sp * sp,
        -cp * s2 * sp - s4 * sh2 * sp,
        c2 * c2 + cp * s2 * s2,
    )
}

/// Rotation induced by `M_Q(theta, phi)`.
pub fn rotation_of_m_q(theta: f64, phi: f64) -> Rotation3 {
    let (u, v) = m_q_entries(theta, phi);
    rotation_from_su2(u, v)
}

/// `cos(a/2) I - i sin(a/2) Y`.
pub fn r_y(angle: f64) -> Mat2 {
    let (s, co) = (angle / 2.0).sin_cos();
    Mat2::identity() * c(co) - pauli_y() * (I * s)
}

/// `cos(a/2) I - i sin(a/2) Z`.
pub fn r_z(angle: f64) -> Mat2 {
    let (s, co) = (angle / 2.0).sin_cos();
    Mat2::identity() * c(co) - pauli_z() * (I * s)
}

/// Bloch vector `[<X>, <Y>, <Z>]` of a two-level state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    /// From plane coordinates via Pauli expectation values.
    pub fn from_coordinates(alpha: C64, beta: C64) -> Self {
        let psi = Vector2::new(alpha, beta);
        let expect = |p: Mat2| (psi.adjoint() * p * psi)[(0, 0)].re;
        BlochVector(Vector3::new(
            expect(pauli_x()),
            expect(pauli_y()),
            expect(pauli_z()),
        ))
    }

    /// `[2(ac + bd), 2(ad - bc), a^2 + b^2 - c^2 - d^2]` for
    /// `(a + bi)|A'> + (c + di)|B'>`.
    pub fn closed_form(alpha: C64, beta: C64) -> Self {
        let (a, b, c, d) = (alpha.re, alpha.im, beta.re, beta.im);
        BlochVector(Vector3::new(
            2.0 * (a * c + b * d),
            2.0 * (a * d - b * c),
            a * a + b * b - c * c - d * d,
        ))
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        (self.0 - other.0).norm()
    }
}

/// Bloch vector of a register state lying in the plane of `pair`.
pub fn bloch_of(psi: &StateVector, pair: &HilbertPair) -> Result<BlochVector> {
    let (alpha, beta, outside) = pair.coordinates(psi)?;
    if outside > 1e-10 {
        return Err(Error::Leakage(outside));
    }
    let pauli = BlochVector::from_coordinates(alpha, beta);
    let closed = BlochVector::closed_form(alpha, beta);
    debug_assert!(pauli.distance(&closed) < 1e-12);
    Ok(pauli)
}

/// `|| M_Q - axis-angle form ||_max`.
pub fn lemma1_check(theta: f64, phi: f64) -> Result<f64> {
    let p = RotationParams::new(theta, phi)?;
    Ok(max_abs(&(m_q(theta, phi) - p.su2_form())))
}

/// `|| M H_r M^{-1} - (R r) . sigma ||_max` for
/// `M = e^{i g} [[u, v], [-conj(v), conj(u)]]`.
pub fn lemma2_homomorphism_check(u: C64, v: C64, global: f64, r: &Vector3<f64>) -> Result<f64> {
    let norm = u.norm_sqr() + v.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("|u|^2 + |v|^2 = {norm}, expected 1")));
    }
    let m = Mat2::new(u, v, -v.conj(), u.conj()) * C64::from_polar(1.0, global);
    let inv = m.try_inverse().ok_or_else(|| Error::Domain("singular matrix".into()))?;
    let rot = rotation_from_su2(u, v);
    let lhs = m * h_matrix(r) * inv;
    let rhs = h_matrix(&(rot.matrix * r));
    Ok(max_abs(&(lhs - rhs)).max(rot.imaginary_residual))
}

/// Distance between the entry-wise rotation formula for `M_Q` and the
/// general conjugation formula evaluated at its `(u, v)`.
pub fn lemma2_specialization_check(theta: f64, phi: f64) -> f64 {
    let general = rotation_of_m_q(theta, phi);
    (rotation_closed_form(theta, phi) - general.matrix)
        .amax()
        .max(general.imaginary_residual)
}

/// `|| R_z(phi') R_y(theta') R_z(-alpha) R_y(-theta') R_z(-phi') - M_Q / (-e^{i phi}) ||_max`.
pub fn lemma3_axis_decomposition_check(theta: f64, phi: f64) -> Result<f64> {
    let p = RotationParams::new(theta, phi)?;
    let (tp, pp) = p.axis_angles();
    let product = r_z(pp) * r_y(tp) * r_z(-p.alpha) * r_y(-tp) * r_z(-pp);
    let target = m_q(theta, phi) / (-C64::from_polar(1.0, phi));
    Ok(max_abs(&(product - target)))
}

/// Distance between the Bloch vector of `M_Q psi` and `R_{M_Q}` applied to
/// the Bloch vector of `psi`, for plane coordinates `psi`.
pub fn lemma4_rotation_transport_check(psi: Vector2<C64>, theta: f64, phi: f64) -> Result<f64> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Argument(format!("state norm {norm}, expected 1")));
    }
    let out = m_q(theta, phi) * psi;
    let moved = BlochVector::from_coordinates(out[0], out[1]);
    let rotated = rotation_of_m_q(theta, phi).apply(&BlochVector::from_coordinates(psi[0], psi[1]));
    Ok(moved.distance(&rotated))
}

/// As [`lemma4_rotation_transport_check`], with `M_Q` replaced by the
/// register-level iterate `q` acting through the simulator.
pub fn lemma4_simulator_check(
    q: &crate::qsim::Circuit,
    pair: &HilbertPair,
    phi: f64,
    psi: &StateVector,
) -> Result<f64> {
    let before = bloch_of(psi, pair)?;
    let after = bloch_of(&q.applied(psi.clone())?, pair)?;
    let rotated = rotation_of_m_q(pair.theta(), phi).apply(&before);
    Ok(after.distance(&rotated))
}

/// Bloch vectors of `|h>` and `|A'>`.
pub fn r_h(theta: f64) -> Vector3<f64> {
    Vector3::new((2.0 * theta).sin(), 0.0, -(2.0 * theta).cos())
}

pub fn r_a_prime() -> Vector3<f64> {
    Vector3::new(0.0, 0.0, 1.0)
}

/// Outcome of the rotation-angle comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma5Outcome {
    /// `|cos(omega) geometric - cos(omega) closed form|`
    pub cos_omega: f64,
    /// Distance of `r_p` from both projections onto the axis, and
    /// `|r_h . r_p - r_A' . r_p|`.
    pub projection: f64,
}

impl Lemma5Outcome {
    pub fn deviation(&self) -> f64 {
        self.cos_omega.max(self.projection)
    }
}

/// `r_p` from its closed form; requires `theta < pi/2`.
pub fn r_p(theta: f64, phi: f64) -> Result<Vector3<f64>> {
    if !(theta > 0.0 && theta < PI / 2.0 - 1e-9) {
        return Err(Error::Domain(format!(
            "tan(theta) is singular or undefined at theta={theta}"
        )));
    }
    let (sh, ch) = (phi / 2.0).sin_cos();
    let t = theta.tan();
    let k = 1.0 / (1.0 + ch * ch * t * t);
    Ok(Vector3::new(ch * ch * t, sh * ch * t, ch * ch * t * t) * k)
}

/// Geometric angle between `r_h - r_p` and `r_A' - r_p`.
pub fn geometric_omega(theta: f64, phi: f64) -> Result<f64> {
    let p = r_p(theta, phi)?;
    let u = r_h(theta) - p;
    let v = r_a_prime() - p;
    Ok(u.cross(&v).norm().atan2(u.dot(&v)))
}

/// `omega = 2 acos(sin(phi/2) sin(theta))`.
pub fn closed_form_omega(theta: f64, phi: f64) -> f64 {
    2.0 * ((phi / 2.0).sin() * theta.sin()).clamp(-1.0, 1.0).acos()
}

pub fn lemma5_angle_check(theta: f64, phi: f64) -> Result<Lemma5Outcome> {
    let params = RotationParams::new(theta, phi)?;
    let p = r_p(theta, phi)?;
    let (rh, ra) = (r_h(theta), r_a_prime());
    let u = rh - p;
    let v = ra - p;
    let denom = u.norm() * v.norm();
    if denom < 1e-12 {
        return Err(Error::Domain("degenerate projection".into()));
    }
    let cos_geo = u.dot(&v) / denom;
    let cos_closed = (2.0 * ((phi / 2.0).sin() * theta.sin()).acos()).cos();
    let n = params.axis;
    let projection = [
        (p - n * n.dot(&ra)).norm(),
        (p - n * n.dot(&rh)).norm(),
        (rh.dot(&p) - ra.dot(&p)).abs(),
        (ra.dot(&p) - p.dot(&p)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Lemma5Outcome {
        cos_omega: (cos_geo - cos_closed).abs(),
        projection,
    })
}

/// `|omega - (K + 1) alpha|` with `K` and `phi` chosen by the exact-search
/// rule. The geometric angle is included whenever `tan(theta)` is finite.
pub fn phase_matching_check(theta: f64) -> Result<f64> {
    let k = exact_k(theta);
    let phi = PhaseAngle::exact_search(theta, k)?.radians();
    let params = RotationParams::new(theta, phi)?;
    let target = (k + 1) as f64 * params.alpha;
    let mut dev = (closed_form_omega(theta, phi) - target).abs();
    if let Ok(geo) = geometric_omega(theta, phi) {
        dev = dev.max((geo - target).abs());
    }
    Ok(dev)
}

/// Bloch trajectory of `K + 1` exact iterations from `|h>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub points: Vec<Vector3<f64>>,
    /// Largest deviation of a step's rotation angle about the axis from `alpha`.
    pub step_angle_deviation: f64,
    /// Distance of the final point from `r_A'`.
    pub end_distance: f64,
}

pub fn bloch_trajectory(theta: f64) -> Result<Trajectory> {
    let k = exact_k(theta);
    let phi = PhaseAngle::exact_search(theta, k)?.radians();
    let params = RotationParams::new(theta, phi)?;
    let rot = rotation_of_m_q(theta, phi);
    let n = params.axis;
    let perp = |r: &Vector3<f64>| r - n * n.dot(r);
    let mut points = vec![r_h(theta)];
    let mut step_angle_deviation: f64 = 0.0;
    for _ in 0..=k {
        let prev = *points.last().expect("non-empty");
        let next = rot.matrix * prev;
        let (a, b) = (perp(&prev), perp(&next));
        if a.norm() > 1e-9 {
            let angle = a.cross(&b).norm().atan2(a.dot(&b));
            step_angle_deviation = step_angle_deviation.max((angle - params.alpha).abs());
        }
        points.push(next);
    }
    let end_distance = (points.last().expect("non-empty") - r_a_prime()).norm();
    Ok(Trajectory {
        points,
        step_angle_deviation,
        end_distance,
    })
}
