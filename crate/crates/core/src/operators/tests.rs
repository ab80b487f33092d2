use super::*;
use crate::oracle::g_value;
use crate::qsim::{max_abs_diff, unitarity_defect, CMatrix, StateVector};
use std::f64::consts::PI;

fn ops(n: usize, t: usize, solutions: &[usize]) -> (BooleanOracle, PartitionConfig) {
    (
        BooleanOracle::new(n, solutions.iter().copied()).unwrap(),
        PartitionConfig::new(n, t).unwrap(),
    )
}

fn is_identity(m: &CMatrix) -> bool {
    max_abs_diff(m, &CMatrix::identity(m.nrows(), m.ncols())) < 1e-10
}

/// Image of a basis state under a circuit that must act as a permutation.
fn image(c: &Circuit, index: usize) -> usize {
    let out = c
        .applied(StateVector::basis(c.num_qubits(), index).unwrap())
        .unwrap();
    let hits: Vec<usize> = (0..out.amplitudes().len())
        .filter(|&i| out.amplitudes()[i].norm() > 1e-12)
        .collect();
    assert_eq!(hits.len(), 1);
    assert!((out.amplitudes()[hits[0]].norm() - 1.0).abs() < 1e-12);
    hits[0]
}

fn bit(index: usize, m: usize, q: usize) -> usize {
    (index >> (m - 1 - q)) & 1
}

#[test]
fn sub_oracle_flips_slot_on_matching_u() {
    let (o, cfg) = ops(3, 1, &[0b101]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let c = d.sub_oracle_gate(1).unwrap();
    let m = l.num_qubits();
    for idx in 0..1 << m {
        let (u, _, _) = l.split(idx);
        let flipped = image(&c, idx) ^ idx;
        let expected = if u == 0b10 { 1 << (m - 1 - l.a_slot(1)) } else { 0 };
        assert_eq!(flipped, expected, "basis {idx:b}");
    }
    // The w = 0 sub-function is identically zero here.
    assert!(is_identity(&d.sub_oracle_gate(0).unwrap().matrix().unwrap()));
}

#[test]
fn sub_oracle_constant_one_is_x_on_slot() {
    let (o, cfg) = ops(3, 1, &[1, 3, 5, 7]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let c = d.sub_oracle_gate(1).unwrap();
    for idx in 0..1 << l.num_qubits() {
        assert_eq!(image(&c, idx), idx ^ (1 << (l.num_qubits() - 1 - l.a_slot(1))));
    }
}

#[test]
fn batched_query_writes_every_slot() {
    let (o, cfg) = ops(4, 2, &[0b0110, 0b0111, 0b1100]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let c = d.batched_query().unwrap();
    let m = l.num_qubits();
    for x in 0..16 {
        let out = image(&c, l.system_index(x));
        let u = x >> 2;
        for w in 0..4 {
            assert_eq!(bit(out, m, l.a_slot(w)) == 1, o.is_solution((u << 2) | w));
        }
        assert_eq!(bit(out, m, l.query_target()), 0);
        assert_eq!(out >> l.num_ancillas(), x);
    }
    assert!(is_identity(&c.then(&d.batched_query().unwrap()).unwrap().matrix().unwrap()));
}

#[test]
fn index_select_reads_indexed_slot() {
    let (o, cfg) = ops(3, 1, &[0]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let u = d.index_select_gate().unwrap();
    let m = l.num_qubits();
    // |u=00, i=1, a0=0, a1=1, b=0>
    let input = (0b001 << 3) | 0b010;
    let out = image(&u, input);
    assert_eq!(bit(out, m, l.query_target()), 1);
    assert_eq!(out, input | 1);
    for x in 0..8 {
        assert_eq!(image(&u, l.system_index(x)), l.system_index(x));
    }
    assert!(is_identity(&u.clone().then(&u).unwrap().matrix().unwrap()));
}

#[test]
fn f_wrapper_basis_action() {
    let (o, cfg) = ops(4, 1, &[0b0011, 0b1010]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let f = d.f_wrapper().unwrap();
    let m = l.num_qubits();
    for x in 0..16 {
        let out = image(&f, l.system_index(x));
        let (u, w) = (x >> 1, x & 1);
        assert_eq!(bit(out, m, l.query_target()) == 1, o.is_solution(x));
        for w2 in 0..2 {
            assert_eq!(bit(out, m, l.a_slot(w2)) == 1, o.is_solution((u << 1) | w2));
        }
        let _ = w;
    }
    let fm = f.matrix().unwrap();
    assert!(is_identity(&(fm.adjoint() * &fm)));
}

#[test]
fn z_f_prime_is_sign_of_b_xor_f() {
    let (o, cfg) = ops(3, 1, &[0b010, 0b111]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let z = d.z_f_prime().unwrap().matrix().unwrap();
    let m = l.num_qubits();
    for idx in 0..1 << m {
        let x = idx >> l.num_ancillas();
        let (_, w, _) = l.split(idx);
        let b = bit(idx, m, l.query_target()) == 1;
        let slot = bit(idx, m, l.a_slot(w)) == 1;
        // On a zero a-register this is (-1)^{b xor f_w(u)}.
        let sign = if b ^ slot ^ o.is_solution(x) { -1.0 } else { 1.0 };
        assert!((z[(idx, idx)].re - sign).abs() < 1e-10);
    }
    assert!(is_identity(&(&z * &z)));
}

#[test]
fn z_f_prime_all_solutions_is_minus_z_on_b() {
    let (o, cfg) = ops(3, 1, &(0..8).collect::<Vec<_>>());
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let z = d.z_f_prime().unwrap().matrix().unwrap();
    for x in 0..8 {
        for b in 0..2 {
            let idx = l.system_index(x) | b;
            let expected = if b == 1 { 1.0 } else { -1.0 };
            assert!((z[(idx, idx)].re - expected).abs() < 1e-10);
        }
    }
}

#[test]
fn v1_v2_truth_tables() {
    let (o, cfg) = ops(5, 2, &[1]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let m = l.num_qubits();
    let v1 = d.or_gadget_v1().unwrap();
    let v2 = d.or_gadget_v2().unwrap();
    let bmask = 1 << (m - 1 - l.diffusion_b());
    let cmask = 1 << (m - 1 - l.diffusion_c());
    for idx in (0..1 << m).step_by(3) {
        let (u, w, _) = l.split(idx);
        let b = bit(idx, m, l.diffusion_b());
        assert_eq!(image(&v1, idx), if u != 0 { idx ^ bmask } else { idx });
        assert_eq!(image(&v2, idx), if w == 0 && b == 0 { idx ^ cmask } else { idx });
    }
    for c in [v1, v2] {
        assert!(is_identity(&c.clone().then(&c).unwrap().matrix().unwrap()));
    }
}

#[test]
fn d_wrapper_basis_action() {
    let (o, cfg) = ops(3, 1, &[2]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let m = l.num_qubits();
    let dw = d.d_wrapper().unwrap();
    for idx in 0..1 << m {
        let (u, w, _) = l.split(idx);
        let b = bit(idx, m, l.diffusion_b()) == 1;
        let c = bit(idx, m, l.diffusion_c()) == 1;
        let b2 = b ^ (u != 0);
        let c2 = c ^ !(w != 0 || b2);
        let out = image(&dw, idx);
        assert_eq!(bit(out, m, l.diffusion_b()) == 1, b2);
        assert_eq!(bit(out, m, l.diffusion_c()) == 1, c2);
        let d_mask = (1 << (m - l.n() - 2)) - 1;
        assert_eq!(out & d_mask, idx & d_mask);
        assert_eq!(out >> l.num_ancillas(), idx >> l.num_ancillas());
    }
    let dm = dw.matrix().unwrap();
    assert!(is_identity(&(dm.adjoint() * &dm)));
}

#[test]
fn z0_prime_is_sign_of_g() {
    let (o, cfg) = ops(3, 1, &[2]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let l = *d.layout();
    let m = l.num_qubits();
    let z = d.z0_prime().unwrap().matrix().unwrap();
    for idx in 0..1 << m {
        let (u, w, _) = l.split(idx);
        let b = bit(idx, m, l.diffusion_b()) == 1;
        let c = bit(idx, m, l.diffusion_c()) == 1;
        let sign = if g_value(u, w, b, c) { -1.0 } else { 1.0 };
        assert!((z[(idx, idx)].re - sign).abs() < 1e-10);
        if w != 0 && !c {
            assert!((z[(idx, idx)].re - 1.0).abs() < 1e-10);
        }
    }
    assert!((z[(0, 0)].re + 1.0).abs() < 1e-10);
}

#[test]
fn z0h_prime_reflects_h() {
    let (o, cfg) = ops(3, 1, &[6]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let pair = d.hilbert_pair().unwrap();
    let out = d.z0h_prime().unwrap().applied(pair.h().clone()).unwrap();
    assert!((out.inner(pair.h()).re + 1.0).abs() < 1e-10);
    let z = d.z0h_prime().unwrap().matrix().unwrap();
    assert!(unitarity_defect(&z) < 1e-10);
    assert!(max_abs_diff(&z, &z.adjoint()) < 1e-10);
}

#[test]
fn e_phase_gate_special_angles() {
    let e = |phi: f64| e_phase_gate(PhaseAngle::new(phi).unwrap()).matrix().clone();
    assert!(max_abs_diff(&e(PI), LocalUnitary::pauli_z().matrix()) < 1e-15);
    assert!(max_abs_diff(&e(0.0), &CMatrix::identity(2, 2)) < 1e-15);
    let s = e(PI / 2.0);
    assert!((s[(1, 1)] - C64::new(0.0, 1.0)).norm() < 1e-15);
    assert!(s[(0, 1)].norm() == 0.0 && s[(0, 0)] == C64::new(1.0, 0.0));
}

#[test]
fn phase_operators_reduce_at_pi_and_zero() {
    let (o, cfg) = ops(3, 1, &[5]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let pi = PhaseAngle::new(PI).unwrap();
    let zero = PhaseAngle::new(0.0).unwrap();
    let sf_pi = d.s_f_phase(pi).unwrap().matrix().unwrap();
    assert!(max_abs_diff(&sf_pi, &d.z_f_prime().unwrap().matrix().unwrap()) < 1e-10);
    assert!(is_identity(&d.s_f_phase(zero).unwrap().matrix().unwrap()));
    let s0h_pi = d.s0h_phase(pi).unwrap().matrix().unwrap();
    assert!(max_abs_diff(&s0h_pi, &d.z0h_prime().unwrap().matrix().unwrap()) < 1e-10);
    let phi = PhaseAngle::new(0.7).unwrap();
    let pair = d.hilbert_pair().unwrap();
    let out = d.s0h_phase(phi).unwrap().applied(pair.h().clone()).unwrap();
    assert!((pair.h().inner(&out) - phi.factor()).norm() < 1e-10);
}

#[test]
fn grover_prime_powers_follow_sine_law() {
    let (o, cfg) = ops(4, 1, &[3, 12]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let pair = d.hilbert_pair().unwrap();
    let g = d.grover_prime_iterate().unwrap();
    let mut psi = pair.h().clone();
    for l in 0..=5 {
        let overlap = pair.a_prime().inner(&psi);
        let expected = ((2 * l + 1) as f64 * pair.theta()).sin();
        assert!((overlap.re - expected).abs() < 1e-10 && overlap.im.abs() < 1e-10, "l={l}");
        let (_, _, outside) = pair.coordinates(&psi).unwrap();
        assert!(outside < 1e-10);
        g.apply(&mut psi).unwrap();
    }
}

#[test]
fn grover_prime_all_solutions_keeps_probability_one() {
    let (o, cfg) = ops(3, 1, &(0..8).collect::<Vec<_>>());
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let pair = d.hilbert_pair().unwrap();
    let g = d.grover_prime_iterate().unwrap();
    let mut psi = pair.h().clone();
    for _ in 0..3 {
        g.apply(&mut psi).unwrap();
        assert!((pair.a_prime().inner(&psi).norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn q_iterate_block_and_invariance() {
    let (o, cfg) = ops(3, 1, &[4]);
    let d = DistributedOperators::new(&o, &cfg).unwrap();
    let pair = d.hilbert_pair().unwrap();
    let phi = 1.0;
    let q = d.q_iterate(PhaseAngle::new(phi).unwrap()).unwrap();
    let (s, c) = pair.theta().sin_cos();
    let e = C64::from_polar(1.0, phi);
    let one = C64::new(1.0, 0.0);
    let expected = [
        [-e * (one + (e - one) * s * s), -(e - one) * s * c],
        [-e * (e - one) * s * c, -(e + (one - e) * s * s)],
    ];
    let basis = [pair.a_prime().clone(), pair.require_b_prime().unwrap().clone()];
    for col in 0..2 {
        let out = q.applied(basis[col].clone()).unwrap();
        for row in 0..2 {
            let got = basis[row].inner(&out);
            assert!((got - expected[row][col]).norm() < 1e-10, "({row},{col})");
        }
        let (_, _, outside) = pair.coordinates(&out).unwrap();
        assert!(outside < 1e-10);
    }
    assert!(unitarity_defect(&q.matrix().unwrap()) < 1e-10);
}

#[test]
fn every_fragment_is_unitary() {
    for (n, t) in [(3, 1), (4, 2), (5, 2)] {
        let (o, cfg) = ops(n, t, &[1, (1 << n) - 2]);
        let d = DistributedOperators::new(&o, &cfg).unwrap();
        let phi = PhaseAngle::new(0.3).unwrap();
        let fragments = [
            d.batched_query().unwrap(),
            d.index_select_gate().unwrap(),
            d.f_wrapper().unwrap(),
            d.d_wrapper().unwrap(),
            d.grover_prime_iterate().unwrap(),
            d.q_iterate(phi).unwrap(),
        ];
        for f in &fragments {
            assert!(unitarity_defect(&f.matrix().unwrap()) < 1e-10);
        }
    }
}
