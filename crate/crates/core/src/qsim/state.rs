use super::{bit_pos, parse_bits, LocalUnitary, QubitIndexSet, C64};
use crate::{Error, Result};

/// Largest register the simulator accepts.
pub const MAX_STATE_QUBITS: usize = 24;

/// Normalized complex amplitudes over `m` qubits, indexed big-endian.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// `|0...0>` on `m` qubits.
    pub fn zero(m: usize) -> Result<Self> {
        Self::basis(m, 0)
    }

    pub fn basis(m: usize, index: usize) -> Result<Self> {
        if m > MAX_STATE_QUBITS {
            return Err(Error::Capacity {
                qubits: m,
                max: MAX_STATE_QUBITS,
            });
        }
        if index >= 1 << m {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for {m} qubits"
            )));
        }
        let mut amplitudes = vec![C64::default(); 1 << m];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits: m,
            amplitudes,
        })
    }

    /// Builds a state from raw amplitudes. The vector must have length `2^m`
    /// and unit norm (within `1e-10`).
    pub fn from_amplitudes(m: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if m > MAX_STATE_QUBITS {
            return Err(Error::Capacity {
                qubits: m,
                max: MAX_STATE_QUBITS,
            });
        }
        if amplitudes.len() != 1 << m {
            return Err(Error::Argument(format!(
                "expected {} amplitudes for {m} qubits, got {}",
                1usize << m,
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!(
                "amplitudes are not normalized (norm^2 = {norm})"
            )));
        }
        Ok(StateVector {
            num_qubits: m,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiplies every amplitude by `factor` (a unit complex number).
    pub fn scale(&mut self, factor: C64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    /// Applies `gate` embedded on `targets` (identity on all other qubits).
    pub fn apply_unitary(&mut self, gate: &LocalUnitary, targets: &QubitIndexSet) -> Result<()> {
        let m = self.num_qubits;
        let k = gate.arity();
        if targets.len() != k {
            return Err(Error::Argument(format!(
                "gate of arity {k} applied to {} target qubits",
                targets.len()
            )));
        }
        targets.check_range(m)?;

        let slots = targets.as_slice();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|local| {
                slots.iter().enumerate().fold(0, |acc, (j, &q)| {
                    if (local >> (k - 1 - j)) & 1 == 1 {
                        acc | (1 << bit_pos(m, q))
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let mask = offsets[(1 << k) - 1];

        let mut scratch = vec![C64::default(); 1 << k];
        let matrix = gate.matrix();
        for base in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
            for (s, &off) in scratch.iter_mut().zip(&offsets) {
                *s = self.amplitudes[base | off];
            }
            match gate.monomial() {
                Some(cols) => {
                    for (col, &(row, value)) in cols.iter().enumerate() {
                        self.amplitudes[base | offsets[row]] = value * scratch[col];
                    }
                }
                None => {
                    for (row, &off) in offsets.iter().enumerate() {
                        let mut acc = C64::default();
                        for (col, s) in scratch.iter().enumerate() {
                            acc += matrix[(row, col)] * s;
                        }
                        self.amplitudes[base | off] = acc;
                    }
                }
            }
        }
        Ok(())
    }

    /// Multiplies the amplitude of each basis index `x` by `phase_fn(x)`.
    pub fn apply_diagonal_phase(&mut self, phase_fn: impl Fn(usize) -> C64) {
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= phase_fn(x);
        }
    }

    /// Exact marginal distribution of the `targets` qubits, indexed by the
    /// big-endian integer of their values (first target most significant).
    pub fn probabilities(&self, targets: &QubitIndexSet) -> Result<Vec<f64>> {
        targets.check_range(self.num_qubits)?;
        let mut out = vec![0.0; 1 << targets.len()];
        for (x, a) in self.amplitudes.iter().enumerate() {
            out[super::extract_bits(x, self.num_qubits, targets.as_slice())] += a.norm_sqr();
        }
        Ok(out)
    }
}

/// `|bitstring>` on `m` qubits.
pub fn init_basis_state(m: usize, bitstring: &str) -> Result<StateVector> {
    let index = parse_bits(bitstring, m)?;
    StateVector::basis(m, index)
}

pub fn apply_unitary(
    mut state: StateVector,
    gate: &LocalUnitary,
    targets: &QubitIndexSet,
) -> Result<StateVector> {
    state.apply_unitary(gate, targets)?;
    Ok(state)
}

pub fn apply_diagonal_phase(
    mut state: StateVector,
    phase_fn: impl Fn(usize) -> C64,
) -> StateVector {
    state.apply_diagonal_phase(phase_fn);
    state
}
