use super::{CMatrix, LocalUnitary, QubitIndexSet, StateVector, C64};
use crate::{Error, Result};

/// Largest register for which a dense `2^m x 2^m` matrix is materialized.
pub const MAX_MATRIX_QUBITS: usize = 14;

#[derive(Clone, Debug)]
pub struct CircuitOp {
    pub gate: LocalUnitary,
    pub targets: QubitIndexSet,
    pub label: String,
}

/// Ordered sequence of local unitaries on an `m`-qubit register, followed by
/// a global phase factor. Operations are applied first to last.
#[derive(Clone, Debug)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<CircuitOp>,
    global_phase: C64,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
            global_phase: C64::new(1.0, 0.0),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn global_phase(&self) -> C64 {
        self.global_phase
    }

    pub fn push(
        &mut self,
        label: impl Into<String>,
        gate: LocalUnitary,
        targets: QubitIndexSet,
    ) -> Result<()> {
        if gate.arity() != targets.len() {
            return Err(Error::Argument(format!(
                "gate of arity {} given {} targets",
                gate.arity(),
                targets.len()
            )));
        }
        targets.check_range(self.num_qubits)?;
        self.ops.push(CircuitOp {
            gate,
            targets,
            label: label.into(),
        });
        Ok(())
    }

    /// Appends `other` (applied after `self`).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Argument(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        self.ops.extend(other.ops.iter().cloned());
        self.global_phase *= other.global_phase;
        Ok(())
    }

    /// `other . self` as a new circuit.
    pub fn then(mut self, other: &Circuit) -> Result<Circuit> {
        self.append(other)?;
        Ok(self)
    }

    pub fn with_global_phase(mut self, factor: C64) -> Circuit {
        self.global_phase *= factor;
        self
    }

    /// Reversed sequence with every gate inverted.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self
                .ops
                .iter()
                .rev()
                .map(|op| CircuitOp {
                    gate: op.gate.adjoint(),
                    targets: op.targets.clone(),
                    label: format!("{}\u{2020}", op.label),
                })
                .collect(),
            global_phase: self.global_phase.conj(),
        }
    }

    /// Replaces the gate of operation `index`, keeping its targets. Used to
    /// build deliberately faulty circuits when testing the verification
    /// harness.
    pub fn replace_gate(&mut self, index: usize, gate: LocalUnitary) -> Result<()> {
        let op = self.ops.get_mut(index).ok_or_else(|| {
            Error::Argument(format!("no operation at index {index}"))
        })?;
        if op.gate.arity() != gate.arity() {
            return Err(Error::Argument("replacement gate arity differs".into()));
        }
        op.gate = gate;
        Ok(())
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Argument(format!(
                "{}-qubit circuit applied to a {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        for op in &self.ops {
            state.apply_unitary(&op.gate, &op.targets)?;
        }
        if self.global_phase != C64::new(1.0, 0.0) {
            state.scale(self.global_phase);
        }
        Ok(())
    }

    pub fn applied(&self, mut state: StateVector) -> Result<StateVector> {
        self.apply(&mut state)?;
        Ok(state)
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        let mut m = build_matrix(
            self.ops.iter().map(|op| (&op.gate, &op.targets)),
            self.num_qubits,
        )?;
        if self.global_phase != C64::new(1.0, 0.0) {
            m *= self.global_phase;
        }
        Ok(m)
    }
}

/// Full matrix of a gate sequence on `m` qubits, built column by column by
/// running the sequence on every basis state.
pub fn build_matrix<'a>(
    circuit: impl IntoIterator<Item = (&'a LocalUnitary, &'a QubitIndexSet)> + Clone,
    m: usize,
) -> Result<CMatrix> {
    if m > MAX_MATRIX_QUBITS {
        return Err(Error::Capacity {
            qubits: m,
            max: MAX_MATRIX_QUBITS,
        });
    }
    let dim = 1usize << m;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = StateVector::basis(m, col)?;
        for (gate, targets) in circuit.clone() {
            state.apply_unitary(gate, targets)?;
        }
        for (row, a) in state.amplitudes().iter().enumerate() {
            out[(row, col)] = *a;
        }
    }
    Ok(out)
}
