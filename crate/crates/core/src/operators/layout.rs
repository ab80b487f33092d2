use crate::oracle::PartitionConfig;
use crate::qsim::{QubitIndexSet, MAX_MATRIX_QUBITS};
use crate::{Error, Result};

/// Largest register (n + 2^t + 1 qubits) the distributed simulation builds.
pub const MAX_LAYOUT_QUBITS: usize = 20;

/// Fixed qubit roles of the distributed register `|u>|w>|ancillas>`.
///
/// The `2^t + 1` ancillas are read two ways. In the query stage they are
/// `a_{0^t} .. a_{1^t}` followed by `b`; in the diffusion stage they are `b`,
/// `c`, then the `2^t - 1` qubits of `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    t: usize,
}

impl RegisterLayout {
    pub fn new(cfg: &PartitionConfig) -> Result<Self> {
        let layout = RegisterLayout {
            n: cfg.n(),
            t: cfg.t(),
        };
        if cfg.t() >= usize::BITS as usize - 1 || layout.num_qubits() > MAX_LAYOUT_QUBITS {
            return Err(Error::Capacity {
                qubits: cfg
                    .n()
                    .saturating_add(1usize.checked_shl(cfg.t() as u32).unwrap_or(usize::MAX))
                    .saturating_add(1),
                max: MAX_LAYOUT_QUBITS,
            });
        }
        Ok(layout)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `2^t`, the number of sub-functions.
    pub fn num_parts(&self) -> usize {
        1 << self.t
    }

    pub fn num_qubits(&self) -> usize {
        self.n + self.num_parts() + 1
    }

    pub fn num_ancillas(&self) -> usize {
        self.num_parts() + 1
    }

    /// Whether a dense matrix of the whole register can be built.
    pub fn fits_dense(&self) -> bool {
        self.num_qubits() <= MAX_MATRIX_QUBITS
    }

    pub fn u_qubits(&self) -> QubitIndexSet {
        QubitIndexSet::range(0, self.n - self.t)
    }

    pub fn w_qubits(&self) -> QubitIndexSet {
        QubitIndexSet::range(self.n - self.t, self.n)
    }

    pub fn system_qubits(&self) -> QubitIndexSet {
        QubitIndexSet::range(0, self.n)
    }

    pub fn ancilla_qubits(&self) -> QubitIndexSet {
        QubitIndexSet::range(self.n, self.num_qubits())
    }

    /// Query stage: slot `a_w`.
    pub fn a_slot(&self, w: usize) -> usize {
        debug_assert!(w < self.num_parts());
        self.n + w
    }

    /// Query stage: the `b` qubit after the a-register.
    pub fn query_target(&self) -> usize {
        self.n + self.num_parts()
    }

    /// Diffusion stage: the `b` qubit.
    pub fn diffusion_b(&self) -> usize {
        self.n
    }

    /// Diffusion stage: the `c` qubit.
    pub fn diffusion_c(&self) -> usize {
        self.n + 1
    }

    pub fn d_qubits(&self) -> QubitIndexSet {
        QubitIndexSet::range(self.n + 2, self.num_qubits())
    }

    /// Basis index of `|x>|0...0>` for an `n`-bit system value `x`.
    pub fn system_index(&self, x: usize) -> usize {
        x << self.num_ancillas()
    }

    /// Splits a basis index into `(u, w, ancillas)`.
    pub fn split(&self, index: usize) -> (usize, usize, usize) {
        let anc = index & ((1 << self.num_ancillas()) - 1);
        let x = index >> self.num_ancillas();
        (x >> self.t, x & ((1 << self.t) - 1), anc)
    }
}
