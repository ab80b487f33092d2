use serde::{Deserialize, Serialize};

use crate::operators::{DistributedOperators, HilbertPair, PhaseAngle, RegisterLayout};
use crate::oracle::{g_value, BooleanOracle, PartitionConfig};
use crate::qsim::{max_abs_diff, CMatrix, Circuit, StateVector, C64, MAX_MATRIX_QUBITS};
use crate::{Error, Result};

/// Operators that have both a defining formula and a gate decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operator", content = "phi")]
pub enum DirectOperator {
    #[serde(rename = "Zf'")]
    ZfPrime,
    #[serde(rename = "Z0H'")]
    Z0hPrime,
    #[serde(rename = "Sf")]
    Sf(f64),
    #[serde(rename = "S0H")]
    S0h(f64),
}

impl DirectOperator {
    pub fn name(&self) -> &'static str {
        match self {
            DirectOperator::ZfPrime => "Zf'",
            DirectOperator::Z0hPrime => "Z0H'",
            DirectOperator::Sf(_) => "Sf",
            DirectOperator::S0h(_) => "S0H",
        }
    }

    pub fn phi(&self) -> Option<f64> {
        match self {
            DirectOperator::Sf(p) | DirectOperator::S0h(p) => Some(*p),
            _ => None,
        }
    }
}

fn dense_layout(cfg: &PartitionConfig) -> Result<RegisterLayout> {
    let layout = RegisterLayout::new(cfg)?;
    if !layout.fits_dense() {
        return Err(Error::Capacity {
            qubits: layout.num_qubits(),
            max: MAX_MATRIX_QUBITS,
        });
    }
    Ok(layout)
}

/// `e^{i phi} - 1`, with the `Z` operators using exactly `-2`.
fn rank_factor(which: DirectOperator) -> Result<C64> {
    Ok(match which {
        DirectOperator::ZfPrime | DirectOperator::Z0hPrime => C64::new(-2.0, 0.0),
        DirectOperator::Sf(p) | DirectOperator::S0h(p) => {
            PhaseAngle::new(p)?.factor() - C64::new(1.0, 0.0)
        }
    })
}

/// The operator built from its defining formula, independent of any gate.
///
/// `Zf'` and `Sf` are diagonal in `|u, w, a, b>` with entries
/// `(-1)^{b xor f_w(u)}` and `e^{i phi (b xor f_w(u))}`. `Z0H'` and `S0H` are
/// `I + (e^{i phi} - 1)(|h><h| + P)` where `P` sums the rank-one terms
/// `H^n|u,w,b,c,d><u,w,b,c,d|H^n` over `bcd != 0` with `g = 1`.
pub fn direct_matrix(
    which: DirectOperator,
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
) -> Result<CMatrix> {
    build_direct(which, oracle, cfg, false)
}

/// As [`direct_matrix`], except that the query diagonals also include the
/// slot value: `(-1)^{b xor a_w xor f_w(u)}`. This is the exact action of
/// `F^dagger Z F` on every basis state, including those with a nonzero
/// a-register.
pub fn slot_aware_matrix(
    which: DirectOperator,
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
) -> Result<CMatrix> {
    build_direct(which, oracle, cfg, true)
}

fn build_direct(
    which: DirectOperator,
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
    include_slot: bool,
) -> Result<CMatrix> {
    if oracle.n() != cfg.n() {
        return Err(Error::Argument("oracle and partition sizes differ".into()));
    }
    let layout = dense_layout(cfg)?;
    let m = layout.num_qubits();
    let dim = 1usize << m;
    let factor = rank_factor(which)?;
    let one = C64::new(1.0, 0.0);
    match which {
        DirectOperator::ZfPrime | DirectOperator::Sf(_) => {
            let mut out = CMatrix::zeros(dim, dim);
            for idx in 0..dim {
                let (u, w, anc) = layout.split(idx);
                let b = anc & 1 == 1;
                let slot = include_slot && (anc >> (layout.num_parts() - w)) & 1 == 1;
                let f = oracle.is_solution((u << layout.t()) | w);
                out[(idx, idx)] = if b ^ slot ^ f { one + factor } else { one };
            }
            Ok(out)
        }
        DirectOperator::Z0hPrime | DirectOperator::S0h(_) => {
            let n = layout.n();
            let big_n = 1usize << n;
            let anc_bits = layout.num_ancillas();
            let norm = 1.0 / (big_n as f64).sqrt();
            let mut proj = CMatrix::zeros(dim, dim);
            let h_vec: Vec<usize> = (0..big_n).map(|x| layout.system_index(x)).collect();
            for &i in &h_vec {
                for &j in &h_vec {
                    proj[(i, j)] += C64::new(norm * norm, 0.0);
                }
            }
            for anc in 1..(1usize << anc_bits) {
                let b = (anc >> (anc_bits - 1)) & 1 == 1;
                let c = (anc >> (anc_bits - 2)) & 1 == 1;
                for s in 0..big_n {
                    let (u, w) = (s >> layout.t(), s & ((1 << layout.t()) - 1));
                    if !g_value(u, w, b, c) {
                        continue;
                    }
                    // H^n |s> = N^{-1/2} sum_y (-1)^{s.y} |y>
                    let column: Vec<(usize, f64)> = (0..big_n)
                        .map(|y| {
                            let sign = if (s & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                            ((y << anc_bits) | anc, sign * norm)
                        })
                        .collect();
                    for &(i, vi) in &column {
                        for &(j, vj) in &column {
                            proj[(i, j)] += C64::new(vi * vj, 0.0);
                        }
                    }
                }
            }
            Ok(CMatrix::identity(dim, dim) + proj * factor)
        }
    }
}

/// Basis indices whose a-register (query reading of the ancillas) is zero;
/// `b` is free.
pub fn query_ancilla_zero_indices(layout: &RegisterLayout) -> Vec<usize> {
    (0..1usize << layout.num_qubits())
        .filter(|&i| layout.split(i).2 >> 1 == 0)
        .collect()
}

/// `max |a[r, c] - b[r, c]|` over all rows and the given columns, i.e. the
/// distance of the two operators restricted to the span of those basis
/// states.
pub fn max_abs_diff_on_columns(a: &CMatrix, b: &CMatrix, columns: &[usize]) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    columns
        .iter()
        .flat_map(|&c| (0..a.nrows()).map(move |r| (a[(r, c)] - b[(r, c)]).norm()))
        .fold(0.0, f64::max)
}

/// Deviations between a decomposed circuit and the formula it implements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropositionCheck {
    /// Against the defining formula, over the whole register.
    pub full_register: f64,
    /// Against the defining formula, on states with a zero a-register.
    pub ancilla_zero: f64,
    /// Against the slot-aware formula, over the whole register.
    pub slot_aware: f64,
}

impl PropositionCheck {
    pub fn holds_literally(&self, tol: f64) -> bool {
        self.full_register < tol
    }

    /// Holds on every state the algorithms prepare, and the slot-aware form
    /// holds everywhere.
    pub fn holds_on_algorithm_states(&self, tol: f64) -> bool {
        self.ancilla_zero < tol && self.slot_aware < tol
    }
}

/// The gate decomposition of `which`.
pub fn decomposed_circuit(
    which: DirectOperator,
    ops: &DistributedOperators<'_>,
) -> Result<Circuit> {
    match which {
        DirectOperator::ZfPrime => ops.z_f_prime(),
        DirectOperator::Z0hPrime => ops.z0h_prime(),
        DirectOperator::Sf(p) => ops.s_f_phase(PhaseAngle::new(p)?),
        DirectOperator::S0h(p) => ops.s0h_phase(PhaseAngle::new(p)?),
    }
}

/// Compares a circuit's matrix with the direct forms of `which`. No global
/// phase is factored out.
pub fn deviation_from_direct(
    which: DirectOperator,
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
    circuit: &Circuit,
) -> Result<PropositionCheck> {
    let layout = dense_layout(cfg)?;
    let direct = direct_matrix(which, oracle, cfg)?;
    let slot = slot_aware_matrix(which, oracle, cfg)?;
    let actual = circuit.matrix()?;
    Ok(PropositionCheck {
        full_register: max_abs_diff(&direct, &actual),
        ancilla_zero: max_abs_diff_on_columns(&direct, &actual, &query_ancilla_zero_indices(&layout)),
        slot_aware: max_abs_diff(&slot, &actual),
    })
}

/// Direct-versus-decomposed deviations for the given operator.
pub fn check_proposition(
    which: DirectOperator,
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
) -> Result<PropositionCheck> {
    let ops = DistributedOperators::new(oracle, cfg)?;
    let circuit = decomposed_circuit(which, &ops)?;
    deviation_from_direct(which, oracle, cfg, &circuit)
}

/// 2x2 matrix `[[<A'|C|A'>, <A'|C|B'>], [<B'|C|A'>, <B'|C|B'>]]`.
///
/// Fails with a leakage error when `C` moves either basis state out of the
/// plane by more than `1e-10`.
pub fn restricted_block(
    circuit: &Circuit,
    pair: &HilbertPair,
) -> Result<nalgebra::Matrix2<C64>> {
    let basis: [&StateVector; 2] = [pair.a_prime(), pair.require_b_prime()?];
    let mut block = nalgebra::Matrix2::zeros();
    for (col, v) in basis.iter().enumerate() {
        let out = circuit.applied((*v).clone())?;
        let (alpha, beta, outside) = pair.coordinates(&out)?;
        if outside > 1e-10 {
            return Err(Error::Leakage(outside));
        }
        block[(0, col)] = alpha;
        block[(1, col)] = beta;
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::unitarity_defect;
    use std::f64::consts::PI;

    fn setup(n: usize, t: usize, sols: &[usize]) -> (BooleanOracle, PartitionConfig) {
        (
            BooleanOracle::new(n, sols.iter().copied()).unwrap(),
            PartitionConfig::new(n, t).unwrap(),
        )
    }

    #[test]
    fn zf_direct_is_signed_diagonal() {
        let (o, c) = setup(3, 1, &[1, 6]);
        let z = direct_matrix(DirectOperator::ZfPrime, &o, &c).unwrap();
        for i in 0..z.nrows() {
            for j in 0..z.ncols() {
                let v = z[(i, j)];
                if i == j {
                    assert!((v.re.abs() - 1.0).abs() < 1e-15 && v.im == 0.0);
                } else {
                    assert_eq!(v, C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn s0h_at_pi_is_z0h() {
        let (o, c) = setup(3, 1, &[2]);
        let a = direct_matrix(DirectOperator::S0h(PI), &o, &c).unwrap();
        let b = direct_matrix(DirectOperator::Z0hPrime, &o, &c).unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn z0h_direct_is_hermitian_involution() {
        let (o, c) = setup(3, 1, &[2]);
        let z = direct_matrix(DirectOperator::Z0hPrime, &o, &c).unwrap();
        assert!(max_abs_diff(&z, &z.adjoint()) < 1e-12);
        assert!(unitarity_defect(&z) < 1e-12);
        let sq = &z * &z;
        assert!(max_abs_diff(&sq, &CMatrix::identity(z.nrows(), z.ncols())) < 1e-12);
    }

    #[test]
    fn diffusion_propositions_hold_literally() {
        let (o, c) = setup(4, 2, &[0, 5, 15]);
        for which in [DirectOperator::Z0hPrime, DirectOperator::S0h(0.7)] {
            let r = check_proposition(which, &o, &c).unwrap();
            assert!(r.holds_literally(1e-10), "{}: {r:?}", which.name());
        }
    }

    #[test]
    fn query_propositions_hold_on_zero_slots_only() {
        let (o, c) = setup(3, 1, &[1, 6]);
        let r = check_proposition(DirectOperator::ZfPrime, &o, &c).unwrap();
        assert!(r.holds_on_algorithm_states(1e-10), "{r:?}");
        assert!((r.full_register - 2.0).abs() < 1e-10);
        let phi = 1.234;
        let r = check_proposition(DirectOperator::Sf(phi), &o, &c).unwrap();
        assert!(r.holds_on_algorithm_states(1e-10), "{r:?}");
        let gap = (C64::from_polar(1.0, phi) - 1.0).norm();
        assert!((r.full_register - gap).abs() < 1e-10);
    }

    #[test]
    fn corrupted_gate_is_detected() {
        let (o, c) = setup(3, 1, &[3]);
        let ops = DistributedOperators::new(&o, &c).unwrap();
        let mut circuit = ops.z_f_prime().unwrap();
        let target = circuit.ops().iter().position(|op| op.label == "Z").unwrap();
        circuit
            .replace_gate(target, crate::qsim::LocalUnitary::identity(1))
            .unwrap();
        let dev = deviation_from_direct(DirectOperator::ZfPrime, &o, &c, &circuit).unwrap();
        assert!(dev.ancilla_zero > 0.1 && dev.slot_aware > 0.1);
    }

    #[test]
    fn capacity_guard() {
        let (o, c) = setup(8, 3, &[3]);
        assert!(matches!(
            direct_matrix(DirectOperator::ZfPrime, &o, &c),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn blocks() {
        let (o, c) = setup(3, 1, &[4]);
        let ops = DistributedOperators::new(&o, &c).unwrap();
        let pair = ops.hilbert_pair().unwrap();
        let g = restricted_block(&ops.grover_prime_iterate().unwrap(), &pair).unwrap();
        let (s2, c2) = (2.0 * pair.theta()).sin_cos();
        let expected = [[c2, s2], [-s2, c2]];
        for r in 0..2 {
            for k in 0..2 {
                assert!((g[(r, k)] - C64::new(expected[r][k], 0.0)).norm() < 1e-10);
            }
        }
        let id = restricted_block(&Circuit::new(ops.layout().num_qubits()), &pair).unwrap();
        assert!((id - nalgebra::Matrix2::identity()).norm() < 1e-15);
    }

    #[test]
    fn leaking_circuit_rejected() {
        let (o, c) = setup(3, 1, &[4]);
        let ops = DistributedOperators::new(&o, &c).unwrap();
        let pair = ops.hilbert_pair().unwrap();
        let f = ops.f_wrapper().unwrap();
        assert!(matches!(restricted_block(&f, &pair), Err(Error::Leakage(_))));
    }
}
