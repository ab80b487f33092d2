use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::direct::{decomposed_circuit, deviation_from_direct, restricted_block, DirectOperator};
use super::rotation::{self, BlochVector};
use crate::algorithms::{make_plan, run_search, theta_of, Variant};
use crate::operators::{DistributedOperators, PhaseAngle};
use crate::oracle::{BooleanOracle, PartitionConfig};
use crate::qsim::{max_abs_diff, CMatrix, LocalUnitary, StateVector, C64};
use crate::{Error, Result};

pub const MATRIX_TOLERANCE: f64 = 1e-10;
pub const LEMMA_TOLERANCE: f64 = 1e-10;
pub const SUCCESS_TOLERANCE: f64 = 1e-9;

const PHASES: [f64; 3] = [0.3, 1.0, PI];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Props,
    Lemmas,
    Theorems,
    All,
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "props" => Ok(Scope::Props),
            "lemmas" => Ok(Scope::Lemmas),
            "theorems" => Ok(Scope::Theorems),
            "all" => Ok(Scope::All),
            other => Err(Error::Argument(format!("unknown scope '{other}'"))),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Props => "props",
            Scope::Lemmas => "lemmas",
            Scope::Theorems => "theorems",
            Scope::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: Value,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, params: Value, deviation: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            params,
            deviation,
            tolerance,
            passed: deviation.is_finite() && deviation < tolerance,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

impl VerificationReport {
    fn from_checks(checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        let failed = checks.len() - passed;
        VerificationReport {
            checks,
            passed,
            failed,
            all_passed: failed == 0,
        }
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.checks.extend(other.checks);
        Self::from_checks(self.checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    /// Largest `n` in the operator and end-to-end grids.
    pub max_n: usize,
    pub oracles_per_config: usize,
    /// Sample points per lemma sweep.
    pub points: usize,
    pub seed: u64,
    /// Corrupts one gate of the first decomposed circuit so that the
    /// harness itself can be shown to fail.
    pub fault: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_n: 5,
            oracles_per_config: 5,
            points: 100,
            seed: 7,
            fault: false,
        }
    }
}

fn random_oracle(n: usize, rng: &mut ChaCha8Rng) -> Result<BooleanOracle> {
    let a = rng.random_range(1..=(1usize << n));
    BooleanOracle::random(n, a, rng)
}

/// Partitions in the operator grid: `t <= 2` and at most 10 register qubits.
fn prop_configs(max_n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in 3..=max_n {
        for t in 1..=2.min(n - 1) {
            if n + (1 << t) + 1 <= 10 {
                v.push((n, t));
            }
        }
    }
    v
}

fn is_identity(m: &CMatrix) -> f64 {
    max_abs_diff(m, &CMatrix::identity(m.nrows(), m.ncols()))
}

/// Direct-versus-decomposed matrix identities and gate involutions.
pub fn verify_props(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();
    let mut fault_pending = opts.fault;
    for (n, t) in prop_configs(opts.max_n) {
        let cfg = PartitionConfig::new(n, t)?;
        for trial in 0..opts.oracles_per_config {
            let oracle = random_oracle(n, &mut rng)?;
            let ops = DistributedOperators::new(&oracle, &cfg)?;
            let mut whiches = vec![DirectOperator::ZfPrime, DirectOperator::Z0hPrime];
            for phi in PHASES {
                whiches.push(DirectOperator::Sf(phi));
                whiches.push(DirectOperator::S0h(phi));
            }
            for which in whiches {
                let mut circuit = decomposed_circuit(which, &ops)?;
                if fault_pending {
                    let idx = circuit
                        .ops()
                        .iter()
                        .position(|op| op.label == "Z" || op.label == "E")
                        .unwrap_or(0);
                    let arity = circuit.ops()[idx].gate.arity();
                    circuit.replace_gate(idx, LocalUnitary::identity(arity))?;
                    fault_pending = false;
                }
                let dev = deviation_from_direct(which, &oracle, &cfg, &circuit)?;
                let params = json!({"n": n, "t": t, "a": oracle.solution_count(), "trial": trial, "phi": which.phi()});
                match which {
                    DirectOperator::ZfPrime | DirectOperator::Sf(_) => {
                        checks.push(
                            CheckRecord::new(
                                format!("decomposition {} on zero a-register", which.name()),
                                params.clone(),
                                dev.ancilla_zero,
                                MATRIX_TOLERANCE,
                            )
                            .with_note(format!(
                                "full-register distance to the b xor f_w(u) diagonal is {:.3e}; F^dagger Z F also picks up a_w",
                                dev.full_register
                            )),
                        );
                        checks.push(CheckRecord::new(
                            format!("decomposition {} slot-aware", which.name()),
                            params,
                            dev.slot_aware,
                            MATRIX_TOLERANCE,
                        ));
                    }
                    _ => checks.push(CheckRecord::new(
                        format!("decomposition {}", which.name()),
                        params,
                        dev.full_register,
                        MATRIX_TOLERANCE,
                    )),
                }
            }
            if trial == 0 {
                let fragments = [
                    ("O*_f", ops.batched_query()?),
                    ("U", ops.index_select_gate()?),
                    ("V1", ops.or_gadget_v1()?),
                    ("V2", ops.or_gadget_v2()?),
                    ("Zf'", ops.z_f_prime()?),
                    ("Z0H'", ops.z0h_prime()?),
                ];
                for (name, c) in fragments {
                    let m = c.matrix()?;
                    checks.push(CheckRecord::new(
                        format!("involution {name}"),
                        json!({"n": n, "t": t}),
                        is_identity(&(&m * &m)),
                        MATRIX_TOLERANCE,
                    ));
                }
            }
        }
    }
    Ok(VerificationReport::from_checks(checks))
}

struct Sweep {
    worst: f64,
    at: Value,
}

impl Sweep {
    fn new() -> Self {
        Sweep {
            worst: 0.0,
            at: Value::Null,
        }
    }

    fn add(&mut self, dev: f64, at: Value) {
        if !(dev <= self.worst) {
            self.worst = dev;
            self.at = at;
        }
    }

    fn record(self, name: &str, points: usize, tol: f64) -> CheckRecord {
        CheckRecord::new(name, json!({"points": points, "worst_at": self.at}), self.worst, tol)
    }
}

/// Sample `(theta, phi)` with `theta` away from `pi/2`.
fn sample_angles(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.random_range(0.01..PI / 2.0 - 0.01), rng.random_range(-PI..PI))
}

fn random_unit_c2(rng: &mut ChaCha8Rng) -> Vector2<C64> {
    let mut z = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let v = Vector2::new(z(), z());
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Random sweeps of the rotation-picture lemmas plus the phase-matching
/// identity at every grid angle.
pub fn verify_lemmas(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let pts = opts.points;
    let mut checks = Vec::new();

    let mut l1 = Sweep::new();
    let mut l2 = Sweep::new();
    let mut l2r = Sweep::new();
    let mut l2s = Sweep::new();
    let mut l3 = Sweep::new();
    let mut l4 = Sweep::new();
    let mut l5 = Sweep::new();
    let mut axis = Sweep::new();
    for _ in 0..pts {
        let (theta, phi) = sample_angles(&mut rng);
        let at = json!({"theta": theta, "phi": phi});
        l1.add(rotation::lemma1_check(theta, phi)?, at.clone());
        let p = rotation::RotationParams::new(theta, phi)?;
        axis.add((p.axis.norm() - 1.0).abs(), at.clone());
        l2s.add(rotation::lemma2_specialization_check(theta, phi), at.clone());
        l3.add(rotation::lemma3_axis_decomposition_check(theta, phi)?, at.clone());
        let psi = random_unit_c2(&mut rng);
        l4.add(rotation::lemma4_rotation_transport_check(psi, theta, phi)?, at.clone());
        l5.add(rotation::lemma5_angle_check(theta, phi)?.deviation(), at);

        let uv = random_unit_c2(&mut rng);
        let r = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .normalize();
        let global = rng.random_range(-PI..PI);
        let at = json!({"u": [uv[0].re, uv[0].im], "v": [uv[1].re, uv[1].im]});
        l2.add(rotation::lemma2_homomorphism_check(uv[0], uv[1], global, &r)?, at.clone());
        let rot = rotation::rotation_from_su2(uv[0], uv[1]);
        l2r.add(
            rot.orthogonality_defect().max((rot.determinant() - 1.0).abs()),
            at,
        );
    }
    checks.push(axis.record("unit rotation axis", pts, 1e-12));
    checks.push(l1.record("lemma1 axis-angle form", pts, LEMMA_TOLERANCE));
    checks.push(l2.record("lemma2 conjugation homomorphism", pts, LEMMA_TOLERANCE));
    checks.push(l2r.record("lemma2 proper rotation", pts, LEMMA_TOLERANCE));
    checks.push(l2s.record("lemma2 specialized entries", pts, LEMMA_TOLERANCE));
    checks.push(l3.record("lemma3 Euler decomposition", pts, LEMMA_TOLERANCE));
    checks.push(l4.record("lemma4 rotation transport", pts, LEMMA_TOLERANCE));
    checks.push(l5.record("lemma5 rotation angle", pts, LEMMA_TOLERANCE));
    checks.push(
        CheckRecord::new("lemma5 singular angle", json!({"theta": PI / 2.0}), 0.0, 1.0)
            .with_note("theta = pi/2 skipped: tan(theta) is singular"),
    );

    let mut pm = Sweep::new();
    let mut traj = Sweep::new();
    let mut count = 0;
    for n in 1..=opts.max_n {
        for a in 1..=(1usize << n) {
            let theta = theta_of(n, a);
            let at = json!({"n": n, "a": a});
            pm.add(rotation::phase_matching_check(theta)?, at.clone());
            let tr = rotation::bloch_trajectory(theta)?;
            traj.add(tr.end_distance.max(tr.step_angle_deviation), at);
            count += 1;
        }
    }
    checks.push(pm.record("phase matching omega = (K+1) alpha", count, LEMMA_TOLERANCE));
    checks.push(traj.record("Bloch trajectory ends at r_A'", count, SUCCESS_TOLERANCE));
    Ok(VerificationReport::from_checks(checks))
}

/// End-to-end success probabilities against their closed forms, and the
/// simulator-level restricted blocks and Bloch transport.
pub fn verify_theorems(opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x7e0);
    let mut checks = Vec::new();
    let mut sweeps: Vec<(&str, Sweep, usize, f64)> = vec![
        ("grover success closed form", Sweep::new(), 0, SUCCESS_TOLERANCE),
        ("long success is one", Sweep::new(), 0, SUCCESS_TOLERANCE),
        ("dist success closed form", Sweep::new(), 0, SUCCESS_TOLERANCE),
        ("dist-exact success is one", Sweep::new(), 0, SUCCESS_TOLERANCE),
        ("Q block equals M_Q", Sweep::new(), 0, MATRIX_TOLERANCE),
        ("G' block is a rotation by 2 theta", Sweep::new(), 0, MATRIX_TOLERANCE),
        ("Bloch of Q^(K+1)|h> is r_A'", Sweep::new(), 0, SUCCESS_TOLERANCE),
        ("simulator Bloch transport", Sweep::new(), 0, LEMMA_TOLERANCE),
    ];
    let mut add = |i: usize, dev: f64, at: Value| {
        sweeps[i].1.add(dev, at);
        sweeps[i].2 += 1;
    };
    for n in 2..=opts.max_n {
        for a in 1..=(1usize << n) {
            let oracle = BooleanOracle::random(n, a, &mut rng)?;
            let theta = theta_of(n, a);
            let grover_closed = |iters: usize| ((2 * iters + 1) as f64 * theta).sin().powi(2);
            let g = run_search(Variant::Grover, &oracle, None)?;
            add(0, (g.success_probability - grover_closed(g.plan.iterations)).abs(), json!({"n": n, "a": a}));
            let l = run_search(Variant::Long, &oracle, None)?;
            add(1, 1.0 - l.success_probability, json!({"n": n, "a": a}));
            for t in 1..=2usize.min(n - 1) {
                let cfg = PartitionConfig::new(n, t)?;
                let at = json!({"n": n, "a": a, "t": t});
                let d = run_search(Variant::Dist, &oracle, Some(&cfg))?;
                add(2, (d.success_probability - grover_closed(d.plan.iterations)).abs(), at.clone());
                let e = run_search(Variant::DistExact, &oracle, Some(&cfg))?;
                add(3, 1.0 - e.success_probability, at.clone());

                if n > 3 || a == 1 << n {
                    continue;
                }
                let ops = DistributedOperators::new(&oracle, &cfg)?;
                let pair = ops.hilbert_pair()?;
                let plan = make_plan(Variant::DistExact, n, a)?;
                let phi = plan.phi.expect("exact plan has a phase");
                let q = ops.q_iterate(PhaseAngle::new(phi)?)?;
                let block = restricted_block(&q, &pair)?;
                let mq = rotation::m_q(theta, phi);
                add(4, (block - mq).iter().map(|z| z.norm()).fold(0.0, f64::max), at.clone());
                let gblock = restricted_block(&ops.grover_prime_iterate()?, &pair)?;
                let (s2, c2) = (2.0 * theta).sin_cos();
                let expected = nalgebra::Matrix2::new(
                    C64::new(c2, 0.0),
                    C64::new(s2, 0.0),
                    C64::new(-s2, 0.0),
                    C64::new(c2, 0.0),
                );
                add(5, (gblock - expected).iter().map(|z| z.norm()).fold(0.0, f64::max), at.clone());
                let mut psi: StateVector = pair.h().clone();
                for _ in 0..plan.iterations {
                    q.apply(&mut psi)?;
                }
                let r = rotation::bloch_of(&psi, &pair)?;
                add(6, r.distance(&BlochVector(rotation::r_a_prime())), at.clone());
                let coords = random_unit_c2(&mut rng);
                let start = pair.combine(coords[0], coords[1])?;
                add(7, rotation::lemma4_simulator_check(&q, &pair, phi, &start)?, at);
            }
        }
    }
    for (name, sweep, count, tol) in sweeps {
        checks.push(sweep.record(name, count, tol));
    }
    Ok(VerificationReport::from_checks(checks))
}

pub fn verify_all(opts: &SuiteOptions) -> Result<VerificationReport> {
    Ok(verify_props(opts)?
        .merge(verify_lemmas(opts)?)
        .merge(verify_theorems(opts)?))
}

impl Scope {
    pub fn run(self, opts: &SuiteOptions) -> Result<VerificationReport> {
        match self {
            Scope::Props => verify_props(opts),
            Scope::Lemmas => verify_lemmas(opts),
            Scope::Theorems => verify_theorems(opts),
            Scope::All => verify_all(opts),
        }
    }
}
