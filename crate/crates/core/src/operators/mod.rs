//! Node-local gates and the composite operators built from them.
//!
//! Every builder returns a [`Circuit`] over the full register described by
//! [`RegisterLayout`]. Multiply-controlled gates are embedded directly as
//! permutation matrices on their support.

mod layout;
mod pair;

pub use layout::{RegisterLayout, MAX_LAYOUT_QUBITS};
pub use pair::{HilbertPair, PhaseAngle};

use crate::oracle::{BooleanOracle, PartitionConfig};
use crate::qsim::{Circuit, LocalUnitary, QubitIndexSet, C64};
use crate::Result;

/// Operator builders for one oracle and one partition.
#[derive(Clone, Debug)]
pub struct DistributedOperators<'a> {
    oracle: &'a BooleanOracle,
    cfg: PartitionConfig,
    layout: RegisterLayout,
}

fn concat(a: &QubitIndexSet, extra: &[usize]) -> QubitIndexSet {
    let mut v = a.as_slice().to_vec();
    v.extend_from_slice(extra);
    QubitIndexSet::new(v).expect("disjoint register roles")
}

impl<'a> DistributedOperators<'a> {
    pub fn new(oracle: &'a BooleanOracle, cfg: &PartitionConfig) -> Result<Self> {
        cfg.check_oracle(oracle)?;
        Ok(DistributedOperators {
            oracle,
            cfg: *cfg,
            layout: RegisterLayout::new(cfg)?,
        })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn oracle(&self) -> &BooleanOracle {
        self.oracle
    }

    pub fn config(&self) -> &PartitionConfig {
        &self.cfg
    }

    fn empty(&self) -> Circuit {
        Circuit::new(self.layout.num_qubits())
    }

    /// `O_{f_w}`: `a_w ^= f_w(u)`, controlled by the U-register.
    pub fn sub_oracle_gate(&self, w: usize) -> Result<Circuit> {
        let f = self.oracle.subfunction_at(&self.cfg, w)?;
        let table = f.table();
        let width = f.input_width();
        let gate = LocalUnitary::from_permutation(width + 1, |x| {
            let u = x >> 1;
            if table[u] {
                x ^ 1
            } else {
                x
            }
        })?;
        let targets = concat(&self.layout.u_qubits(), &[self.layout.a_slot(w)]);
        let mut c = self.empty();
        c.push(format!("O_f[{}]", w), gate, targets)?;
        Ok(c)
    }

    /// `O*_f`: all sub-oracles, `w = 0` first.
    pub fn batched_query(&self) -> Result<Circuit> {
        let mut c = self.empty();
        for w in 0..self.layout.num_parts() {
            c.append(&self.sub_oracle_gate(w)?)?;
        }
        Ok(c)
    }

    /// `U`: `b ^= a_i` where `i` is the value of the W-register, as one
    /// controlled-X per index value.
    pub fn index_select_gate(&self) -> Result<Circuit> {
        let l = &self.layout;
        let mut c = self.empty();
        for i in 0..l.num_parts() {
            let gate = LocalUnitary::from_permutation(l.t() + 2, |x| {
                let w = x >> 2;
                let a = (x >> 1) & 1;
                if w == i && a == 1 {
                    x ^ 1
                } else {
                    x
                }
            })?;
            let targets = concat(&l.w_qubits(), &[l.a_slot(i), l.query_target()]);
            c.push(format!("U[{}]", i), gate, targets)?;
        }
        Ok(c)
    }

    /// `F = U O*_f`.
    pub fn f_wrapper(&self) -> Result<Circuit> {
        self.batched_query()?.then(&self.index_select_gate()?)
    }

    fn f_conjugated(&self, label: &str, gate: LocalUnitary) -> Result<Circuit> {
        let f = self.f_wrapper()?;
        let mut c = f.clone();
        c.push(label, gate, QubitIndexSet::single(self.layout.query_target()))?;
        c.then(&f.dagger())
    }

    /// `Z_f' = F† Z_b F`.
    pub fn z_f_prime(&self) -> Result<Circuit> {
        self.f_conjugated("Z", LocalUnitary::pauli_z())
    }

    /// `S_f(phi) = F† E(phi)_b F`.
    pub fn s_f_phase(&self, phi: PhaseAngle) -> Result<Circuit> {
        self.f_conjugated("E", e_phase_gate(phi))
    }

    /// `V1`: `b ^= OR(u)`.
    pub fn or_gadget_v1(&self) -> Result<Circuit> {
        let l = &self.layout;
        let gate = LocalUnitary::from_permutation(l.n() - l.t() + 1, |x| {
            if x >> 1 != 0 {
                x ^ 1
            } else {
                x
            }
        })?;
        let mut c = self.empty();
        c.push("V1", gate, concat(&l.u_qubits(), &[l.diffusion_b()]))?;
        Ok(c)
    }

    /// `V2`: `c ^= NOT OR(w, b)`.
    pub fn or_gadget_v2(&self) -> Result<Circuit> {
        let l = &self.layout;
        let gate = LocalUnitary::from_permutation(l.t() + 2, |x| if x >> 1 == 0 { x ^ 1 } else { x })?;
        let mut c = self.empty();
        c.push(
            "V2",
            gate,
            concat(&l.w_qubits(), &[l.diffusion_b(), l.diffusion_c()]),
        )?;
        Ok(c)
    }

    /// `D = V2 V1`.
    pub fn d_wrapper(&self) -> Result<Circuit> {
        self.or_gadget_v1()?.then(&self.or_gadget_v2()?)
    }

    fn d_conjugated(&self, label: &str, gate: LocalUnitary) -> Result<Circuit> {
        let d = self.d_wrapper()?;
        let mut c = d.clone();
        c.push(label, gate, QubitIndexSet::single(self.layout.diffusion_c()))?;
        c.then(&d.dagger())
    }

    /// `Z_0' = D† Z_c D`.
    pub fn z0_prime(&self) -> Result<Circuit> {
        self.d_conjugated("Z", LocalUnitary::pauli_z())
    }

    /// `S_0(phi) = D† E(phi)_c D`.
    pub fn s0_phase(&self, phi: PhaseAngle) -> Result<Circuit> {
        self.d_conjugated("E", e_phase_gate(phi))
    }

    /// Hadamard on each of the `n` system qubits.
    pub fn hadamard_layer(&self) -> Result<Circuit> {
        let mut c = self.empty();
        for q in 0..self.layout.n() {
            c.push("H", LocalUnitary::hadamard(), QubitIndexSet::single(q))?;
        }
        Ok(c)
    }

    fn h_conjugated(&self, inner: &Circuit) -> Result<Circuit> {
        let h = self.hadamard_layer()?;
        h.clone().then(inner)?.then(&h)
    }

    /// `Z'_{0,H} = H^n Z_0' H^n`.
    pub fn z0h_prime(&self) -> Result<Circuit> {
        self.h_conjugated(&self.z0_prime()?)
    }

    /// `S_{0,H}(phi) = H^n S_0(phi) H^n`.
    pub fn s0h_phase(&self, phi: PhaseAngle) -> Result<Circuit> {
        self.h_conjugated(&self.s0_phase(phi)?)
    }

    /// `G' = -Z'_{0,H} Z_f'`.
    pub fn grover_prime_iterate(&self) -> Result<Circuit> {
        Ok(self
            .z_f_prime()?
            .then(&self.z0h_prime()?)?
            .with_global_phase(C64::new(-1.0, 0.0)))
    }

    /// `Q = -S_{0,H}(phi) S_f(phi)`.
    pub fn q_iterate(&self, phi: PhaseAngle) -> Result<Circuit> {
        Ok(self
            .s_f_phase(phi)?
            .then(&self.s0h_phase(phi)?)?
            .with_global_phase(C64::new(-1.0, 0.0)))
    }

    /// The pair `|A'>`, `|B'>` spanning the search plane on this register.
    pub fn hilbert_pair(&self) -> Result<HilbertPair> {
        HilbertPair::new(self.oracle, &self.layout)
    }
}

/// `E(phi) = diag(1, e^{i phi})`.
pub fn e_phase_gate(phi: PhaseAngle) -> LocalUnitary {
    LocalUnitary::from_diagonal(&[C64::new(1.0, 0.0), phi.factor()]).expect("E(phi) is unitary")
}

#[cfg(test)]
mod tests;
