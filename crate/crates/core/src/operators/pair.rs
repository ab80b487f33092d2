use std::f64::consts::PI;

use super::RegisterLayout;
use crate::oracle::BooleanOracle;
use crate::qsim::{StateVector, C64};
use crate::{Error, Result};

/// Slack allowed when `sin(pi/(4K+6)) / sin(theta)` exceeds one by rounding.
const ARCSIN_SLACK: f64 = 1e-12;

/// A finite phase angle in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseAngle(f64);

impl PhaseAngle {
    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::Domain(format!("phase angle {radians} is not finite")));
        }
        Ok(PhaseAngle(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `phi = 2 asin(sin(pi/(4K+6)) / sin(theta))`, the phase making `K+1`
    /// exact iterations land on the solution state.
    pub fn exact_search(theta: f64, k: usize) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI / 2.0) {
            return Err(Error::Domain(format!("theta {theta} outside (0, pi/2]")));
        }
        let ratio = (PI / (4 * k + 6) as f64).sin() / theta.sin();
        let ratio = if ratio > 1.0 && ratio <= 1.0 + ARCSIN_SLACK {
            1.0
        } else {
            ratio
        };
        if ratio > 1.0 {
            return Err(Error::Domain(format!(
                "sin(pi/(4K+6)) exceeds sin(theta) for K={k}, theta={theta}"
            )));
        }
        Self::new(2.0 * ratio.asin())
    }

    /// `e^{i phi}`, exact at `phi = pi` and `phi = 0`.
    pub fn factor(self) -> C64 {
        if self.0 == PI {
            C64::new(-1.0, 0.0)
        } else {
            C64::from_polar(1.0, self.0)
        }
    }
}

/// Orthonormal pair `|A'>`, `|B'>` on the full register with
/// `|h> = sin(theta)|A'> + cos(theta)|B'>`. Ancillas are all zero.
///
/// `|B'>` is absent when every input is a solution.
#[derive(Clone, Debug)]
pub struct HilbertPair {
    a_prime: StateVector,
    b_prime: Option<StateVector>,
    h: StateVector,
    theta: f64,
}

impl HilbertPair {
    pub fn new(oracle: &BooleanOracle, layout: &RegisterLayout) -> Result<Self> {
        let n = layout.n();
        if oracle.n() != n {
            return Err(Error::Argument(format!(
                "oracle has {} inputs, layout expects {}",
                oracle.n(),
                n
            )));
        }
        let m = layout.num_qubits();
        let big_n = 1usize << n;
        let a = oracle.solution_count();
        let uniform = |pick: &dyn Fn(usize) -> bool, count: usize| {
            let amp = C64::new(1.0 / (count as f64).sqrt(), 0.0);
            let mut v = vec![C64::new(0.0, 0.0); 1 << m];
            for x in (0..big_n).filter(|&x| pick(x)) {
                v[layout.system_index(x)] = amp;
            }
            StateVector::from_amplitudes(m, v)
        };
        let a_prime = uniform(&|x| oracle.is_solution(x), a)?;
        let b_prime = if a < big_n {
            Some(uniform(&|x| !oracle.is_solution(x), big_n - a)?)
        } else {
            None
        };
        let h = uniform(&|_| true, big_n)?;
        let theta = (a as f64 / big_n as f64).sqrt().asin();
        Ok(HilbertPair {
            a_prime,
            b_prime,
            h,
            theta,
        })
    }

    pub fn a_prime(&self) -> &StateVector {
        &self.a_prime
    }

    pub fn b_prime(&self) -> Option<&StateVector> {
        self.b_prime.as_ref()
    }

    /// `|B'>`, or an argument error when every input is a solution.
    pub fn require_b_prime(&self) -> Result<&StateVector> {
        self.b_prime.as_ref().ok_or_else(|| {
            Error::Argument("every input is a solution; |B'> is undefined".into())
        })
    }

    /// Uniform superposition over system inputs, ancillas zero.
    pub fn h(&self) -> &StateVector {
        &self.h
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn num_qubits(&self) -> usize {
        self.a_prime.num_qubits()
    }

    /// `alpha|A'> + beta|B'>`.
    pub fn combine(&self, alpha: C64, beta: C64) -> Result<StateVector> {
        let b = self.require_b_prime()?;
        let amps = self
            .a_prime
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        StateVector::from_amplitudes(self.num_qubits(), amps)
    }

    /// Coordinates `(<A'|psi>, <B'|psi>)` and the norm of the part of
    /// `psi` outside the plane.
    pub fn coordinates(&self, psi: &StateVector) -> Result<(C64, C64, f64)> {
        if psi.num_qubits() != self.num_qubits() {
            return Err(Error::Argument("state and pair sizes differ".into()));
        }
        let alpha = self.a_prime.inner(psi);
        let beta = match &self.b_prime {
            Some(b) => b.inner(psi),
            None => C64::new(0.0, 0.0),
        };
        let b = self.b_prime.as_ref().map(|b| b.amplitudes());
        let outside = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let mut r = z - alpha * self.a_prime.amplitudes()[i];
                if let Some(b) = b {
                    r -= beta * b[i];
                }
                r.norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        Ok((alpha, beta, outside))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::PartitionConfig;

    #[test]
    fn pair_is_orthonormal_and_reconstructs_h() {
        let oracle = BooleanOracle::new(4, [3, 9]).unwrap();
        let layout = RegisterLayout::new(&PartitionConfig::new(4, 1).unwrap()).unwrap();
        let pair = HilbertPair::new(&oracle, &layout).unwrap();
        let b = pair.b_prime().unwrap();
        assert!(pair.a_prime().inner(b).norm() < 1e-12);
        assert!((pair.a_prime().norm_sqr() - 1.0).abs() < 1e-12);
        let (s, c) = pair.theta().sin_cos();
        let rebuilt = pair.combine(C64::new(s, 0.0), C64::new(c, 0.0)).unwrap();
        assert!((rebuilt.inner(pair.h()).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_solutions_has_no_b() {
        let oracle = BooleanOracle::new(2, 0..4).unwrap();
        let layout = RegisterLayout::new(&PartitionConfig::new(2, 1).unwrap()).unwrap();
        let pair = HilbertPair::new(&oracle, &layout).unwrap();
        assert!(pair.b_prime().is_none());
        assert!((pair.theta() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_phase_for_three_bits_one_solution() {
        let theta = (1.0f64 / 8.0).sqrt().asin();
        let phi = PhaseAngle::exact_search(theta, 1).unwrap();
        assert!((phi.radians() - 2.1269).abs() < 1e-4);
    }

    #[test]
    fn phase_domain() {
        assert!(PhaseAngle::new(f64::NAN).is_err());
        let theta = (1.0f64 / 64.0).sqrt().asin();
        assert!(matches!(
            PhaseAngle::exact_search(theta, 0),
            Err(Error::Domain(_))
        ));
    }
}
