//! The four end-to-end searches and their iteration-count and phase rules.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distsim::CommLedger;
use crate::operators::{DistributedOperators, PhaseAngle};
use crate::oracle::{BooleanOracle, PartitionConfig, MAX_ORACLE_BITS};
use crate::qsim::{LocalUnitary, QubitIndexSet, StateVector, C64, MAX_STATE_QUBITS};
use crate::{Error, Result};

/// Relative distance within which `pi/(4 theta)` is taken to be an exact
/// multiple of 1/2. Inputs such as `a/N = 1/4` land there mathematically but
/// miss by one ulp in floating point.
const HALF_INTEGER_SNAP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Grover,
    Long,
    Dist,
    DistExact,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Grover, Variant::Long, Variant::Dist, Variant::DistExact];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Grover => "grover",
            Variant::Long => "long",
            Variant::Dist => "dist",
            Variant::DistExact => "dist-exact",
        }
    }

    pub fn is_distributed(self) -> bool {
        matches!(self, Variant::Dist | Variant::DistExact)
    }

    /// Uses a phase rotation and `K + 1` iterations.
    pub fn is_exact(self) -> bool {
        matches!(self, Variant::Long | Variant::DistExact)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown variant '{s}'")))
    }
}

/// `theta = asin(sqrt(a / N))`.
pub fn theta_of(n: usize, a: usize) -> f64 {
    (a as f64 / (1u64 << n) as f64).sqrt().asin()
}

/// `pi / (4 theta)`, snapped to the nearest multiple of 1/2 when within
/// rounding distance of one.
pub fn quarter_turns(theta: f64) -> f64 {
    let x = PI / (4.0 * theta);
    let snapped = (2.0 * x).round() / 2.0;
    if (x - snapped).abs() <= HALF_INTEGER_SNAP * x.max(1.0) {
        snapped
    } else {
        x
    }
}

/// `floor(pi / (4 theta))`.
pub fn grover_iterations(theta: f64) -> usize {
    quarter_turns(theta).floor() as usize
}

/// `K = floor((pi/2 - theta) / (2 theta))`, written as `floor(pi/(4 theta) - 1/2)`.
pub fn exact_k(theta: f64) -> usize {
    (quarter_turns(theta) - 0.5).floor().max(0.0) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchPlan {
    pub variant: Variant,
    pub n: usize,
    pub a: usize,
    pub theta: f64,
    pub iterations: usize,
    /// Phase angle; present for the exact variants only.
    pub phi: Option<f64>,
}

impl SearchPlan {
    /// `K` for exact variants.
    pub fn k(&self) -> Option<usize> {
        self.variant.is_exact().then(|| self.iterations - 1)
    }

    fn phase(&self) -> Result<PhaseAngle> {
        let phi = self
            .phi
            .ok_or_else(|| Error::Argument(format!("{} plan has no phase", self.variant)))?;
        PhaseAngle::new(phi)
    }

    fn expect(&self, variant: Variant, oracle: &BooleanOracle) -> Result<()> {
        if self.variant != variant {
            return Err(Error::Argument(format!(
                "plan is for {}, not {}",
                self.variant, variant
            )));
        }
        if self.n != oracle.n() || self.a != oracle.solution_count() {
            return Err(Error::Argument(format!(
                "plan for n={}, a={} does not match oracle with n={}, a={}",
                self.n,
                self.a,
                oracle.n(),
                oracle.solution_count()
            )));
        }
        Ok(())
    }
}

pub fn make_plan(variant: Variant, n: usize, a: usize) -> Result<SearchPlan> {
    if n == 0 || n > MAX_ORACLE_BITS {
        return Err(Error::Argument(format!(
            "n must be in 1..={MAX_ORACLE_BITS}, got {n}"
        )));
    }
    if a == 0 {
        return Err(Error::PromiseViolation(
            "at least one solution is required".into(),
        ));
    }
    if a > 1 << n {
        return Err(Error::Argument(format!("a={a} exceeds N={}", 1u64 << n)));
    }
    let theta = theta_of(n, a);
    let (iterations, phi) = if variant.is_exact() {
        let k = exact_k(theta);
        let phi = PhaseAngle::exact_search(theta, k)?;
        (k + 1, Some(phi.radians()))
    } else {
        (grover_iterations(theta), None)
    };
    Ok(SearchPlan {
        variant,
        n,
        a,
        theta,
        iterations,
        phi,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub plan: SearchPlan,
    /// Exact outcome probabilities of the `n` measured qubits, indexed by
    /// the big-endian value of the outcome string.
    pub distribution: Vec<f64>,
    pub success_probability: f64,
    /// Solution mass before the first iteration and after each one.
    pub trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<CommLedger>,
}

impl SearchResult {
    fn new(plan: SearchPlan, oracle: &BooleanOracle, distribution: Vec<f64>, trace: Vec<f64>) -> Result<Self> {
        let total: f64 = distribution.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Leakage((total - 1.0).abs()));
        }
        Ok(SearchResult {
            success_probability: solution_mass(oracle, &distribution),
            plan,
            distribution,
            trace,
            ledger: None,
        })
    }
}

/// `(iteration, solution mass)` rows, starting at iteration 0.
pub fn iteration_trace(result: &SearchResult) -> Vec<(usize, f64)> {
    result.trace.iter().copied().enumerate().collect()
}

fn solution_mass(oracle: &BooleanOracle, distribution: &[f64]) -> f64 {
    oracle.solutions().map(|x| distribution[x]).sum()
}

fn check_size(m: usize) -> Result<()> {
    if m > MAX_STATE_QUBITS {
        return Err(Error::Capacity {
            qubits: m,
            max: MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

fn hadamard_all(state: &mut StateVector, qubits: usize) -> Result<()> {
    let h = LocalUnitary::hadamard();
    for q in 0..qubits {
        state.apply_unitary(&h, &QubitIndexSet::single(q))?;
    }
    Ok(())
}

/// `iterations` rounds of `-H R_0 H R_f` on `n` qubits, where `R_f` and `R_0`
/// multiply solutions and `|0...0>` by `factor`.
fn run_single_node(oracle: &BooleanOracle, plan: SearchPlan, factor: C64) -> Result<SearchResult> {
    let n = oracle.n();
    check_size(n)?;
    let one = C64::new(1.0, 0.0);
    let mut state = StateVector::zero(n)?;
    hadamard_all(&mut state, n)?;
    let mass = |s: &StateVector| oracle.solutions().map(|x| s.amplitudes()[x].norm_sqr()).sum();
    let mut trace = vec![mass(&state)];
    for _ in 0..plan.iterations {
        state.apply_diagonal_phase(|x| if oracle.is_solution(x) { factor } else { one });
        hadamard_all(&mut state, n)?;
        state.apply_diagonal_phase(|x| if x == 0 { factor } else { one });
        hadamard_all(&mut state, n)?;
        state.scale(-one);
        trace.push(mass(&state));
    }
    let distribution = state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    SearchResult::new(plan, oracle, distribution, trace)
}

/// Algorithm with plain phase inversions and `floor(pi/(4 theta))` rounds.
pub fn run_grover(oracle: &BooleanOracle, plan: &SearchPlan) -> Result<SearchResult> {
    plan.expect(Variant::Grover, oracle)?;
    run_single_node(oracle, plan.clone(), C64::new(-1.0, 0.0))
}

/// Exact single-node search with phase rotations `e^{i phi}`.
pub fn run_long(oracle: &BooleanOracle, plan: &SearchPlan) -> Result<SearchResult> {
    plan.expect(Variant::Long, oracle)?;
    let factor = plan.phase()?.factor();
    run_single_node(oracle, plan.clone(), factor)
}

fn run_circuit_iterate(
    ops: &DistributedOperators<'_>,
    plan: SearchPlan,
    iterate: &crate::qsim::Circuit,
) -> Result<SearchResult> {
    let layout = ops.layout();
    let oracle = ops.oracle();
    let mut state = StateVector::zero(layout.num_qubits())?;
    ops.hadamard_layer()?.apply(&mut state)?;
    let system = layout.system_qubits();
    let mass = |s: &StateVector| -> Result<f64> {
        Ok(solution_mass(oracle, &s.probabilities(&system)?))
    };
    let mut trace = vec![mass(&state)?];
    for _ in 0..plan.iterations {
        iterate.apply(&mut state)?;
        trace.push(mass(&state)?);
    }
    let distribution = state.probabilities(&system)?;
    SearchResult::new(plan, oracle, distribution, trace)
}

/// Distributed search iterating `G'` built from node-local gates.
pub fn run_distributed(
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
    plan: &SearchPlan,
) -> Result<SearchResult> {
    plan.expect(Variant::Dist, oracle)?;
    let ops = DistributedOperators::new(oracle, cfg)?;
    let g = ops.grover_prime_iterate()?;
    run_circuit_iterate(&ops, plan.clone(), &g)
}

/// Exact distributed search iterating `Q(phi)` exactly `K + 1` times.
pub fn run_distributed_exact(
    oracle: &BooleanOracle,
    cfg: &PartitionConfig,
    plan: &SearchPlan,
) -> Result<SearchResult> {
    plan.expect(Variant::DistExact, oracle)?;
    let ops = DistributedOperators::new(oracle, cfg)?;
    let q = ops.q_iterate(plan.phase()?)?;
    run_circuit_iterate(&ops, plan.clone(), &q)
}

/// Plans and runs `variant`; `cfg` is required for distributed variants.
pub fn run_search(
    variant: Variant,
    oracle: &BooleanOracle,
    cfg: Option<&PartitionConfig>,
) -> Result<SearchResult> {
    let plan = make_plan(variant, oracle.n(), oracle.solution_count())?;
    let need_cfg = || {
        cfg.ok_or_else(|| Error::Argument(format!("variant {variant} needs a partition size t")))
    };
    match variant {
        Variant::Grover => run_grover(oracle, &plan),
        Variant::Long => run_long(oracle, &plan),
        Variant::Dist => run_distributed(oracle, need_cfg()?, &plan),
        Variant::DistExact => run_distributed_exact(oracle, need_cfg()?, &plan),
    }
}
