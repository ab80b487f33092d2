//! Node topology and qubit-transfer accounting for one distributed iteration.
//!
//! Transfers are literal qubit moves, one event per hop. The model for one
//! iteration of `G'` or `Q` is
//!
//! * oracle cascade: the `n - t` U-qubits hop from Node1 through every
//!   sub-oracle node in index order;
//! * gather: the `t` W-qubits and each sub-oracle's output slot move to the
//!   U node;
//! * uncompute: the mirror of the two steps above;
//! * diffusion: the U-qubits move to V1, the W-qubits and `b` move to V2, and
//!   both legs return.
//!
//! giving `C(n, t) = 2 (2^t (n - t) + 2^t + t) + 2 (n + 1)` transfers.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::algorithms::{make_plan, SearchPlan, SearchResult, Variant};
use crate::oracle::PartitionConfig;
use crate::{Error, Result};

/// A computing node. Numbered nodes follow the layout Node1 = U-register,
/// Node2 = W-register, Node3.. = sub-oracles, then the U-operator node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeId {
    Numbered(usize),
    V1,
    V2,
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Numbered(k) => write!(f, "Node{k}"),
            NodeId::V1 => f.write_str("V1"),
            NodeId::V2 => f.write_str("V2"),
        }
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "V1" => Ok(NodeId::V1),
            "V2" => Ok(NodeId::V2),
            other => other
                .strip_prefix("Node")
                .and_then(|k| k.parse().ok())
                .map(NodeId::Numbered)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown node '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseTag {
    OracleCascade,
    GatherU,
    Uncompute,
    V1Leg,
    V2Leg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferEvent {
    pub phase: PhaseTag,
    pub from: NodeId,
    pub to: NodeId,
    pub qubits: usize,
}

/// Node roles and register sizes for one partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeTopology {
    n: usize,
    t: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCapacities {
    pub node1: usize,
    pub node2: usize,
    pub sub_oracle: usize,
    pub select: usize,
    pub v1: usize,
    pub v2: usize,
    /// Largest node that has to run a gate.
    pub max: usize,
}

impl NodeTopology {
    pub fn new(cfg: &PartitionConfig) -> Self {
        NodeTopology {
            n: cfg.n(),
            t: cfg.t(),
        }
    }

    pub fn num_parts(&self) -> usize {
        1 << self.t
    }

    pub fn u_node(&self) -> NodeId {
        NodeId::Numbered(1)
    }

    pub fn w_node(&self) -> NodeId {
        NodeId::Numbered(2)
    }

    pub fn sub_oracle_node(&self, w: usize) -> NodeId {
        NodeId::Numbered(3 + w)
    }

    pub fn select_node(&self) -> NodeId {
        NodeId::Numbered(3 + self.num_parts())
    }

    /// Every node with its register size.
    pub fn nodes(&self) -> Vec<(NodeId, usize)> {
        let caps = node_qubit_counts_for(self.n, self.t);
        let mut v = vec![(self.u_node(), caps.node1), (self.w_node(), caps.node2)];
        v.extend((0..self.num_parts()).map(|w| (self.sub_oracle_node(w), caps.sub_oracle)));
        v.push((self.select_node(), caps.select));
        v.push((NodeId::V1, caps.v1));
        v.push((NodeId::V2, caps.v2));
        v
    }
}

fn node_qubit_counts_for(n: usize, t: usize) -> NodeCapacities {
    let sub_oracle = n - t + 1;
    let select = (1 << t) + t + 1;
    let v1 = n - t + 1;
    let v2 = t + 2;
    NodeCapacities {
        node1: n - t,
        node2: t,
        sub_oracle,
        select,
        v1,
        v2,
        max: sub_oracle.max(select).max(v1).max(v2),
    }
}

pub fn node_qubit_counts(cfg: &PartitionConfig) -> NodeCapacities {
    node_qubit_counts_for(cfg.n(), cfg.t())
}

/// Transfer events of one iteration, in order.
pub fn simulate_iteration_transfers(cfg: &PartitionConfig) -> Vec<TransferEvent> {
    let topo = NodeTopology::new(cfg);
    let (n, t) = (cfg.n(), cfg.t());
    let ev = |phase, from, to, qubits| TransferEvent {
        phase,
        from,
        to,
        qubits,
    };

    let mut forward = Vec::with_capacity(2 * topo.num_parts() + 1);
    let mut at = topo.u_node();
    for w in 0..topo.num_parts() {
        let next = topo.sub_oracle_node(w);
        forward.push(ev(PhaseTag::OracleCascade, at, next, n - t));
        at = next;
    }
    forward.push(ev(PhaseTag::GatherU, topo.w_node(), topo.select_node(), t));
    for w in 0..topo.num_parts() {
        forward.push(ev(PhaseTag::GatherU, topo.sub_oracle_node(w), topo.select_node(), 1));
    }

    let mut events = Vec::with_capacity(2 * forward.len() + 6);
    events.extend_from_slice(&forward);
    events.extend(forward.iter().rev().map(|e| ev(PhaseTag::Uncompute, e.to, e.from, e.qubits)));

    let diffusion = [
        ev(PhaseTag::V1Leg, topo.u_node(), NodeId::V1, n - t),
        ev(PhaseTag::V2Leg, topo.w_node(), NodeId::V2, t),
        ev(PhaseTag::V2Leg, NodeId::V1, NodeId::V2, 1),
    ];
    events.extend(diffusion);
    events.extend(diffusion.iter().rev().map(|e| ev(e.phase, e.to, e.from, e.qubits)));
    events
}

/// `C(n, t)` in closed form.
pub fn iteration_cost(n: usize, t: usize) -> u64 {
    let parts = 1u64 << t;
    let (n, t) = (n as u64, t as u64);
    2 * (parts * (n - t) + parts + t) + 2 * (n + 1)
}

/// `2^t (n - t + 1) + n + t`, the per-iteration scale of the communication
/// bound.
pub fn iteration_bound_scale(n: usize, t: usize) -> u64 {
    (1u64 << t) * (n - t + 1) as u64 + (n + t) as u64
}

/// Total transfers of a run; zero for the single-node variants.
pub fn run_total_communication(cfg: &PartitionConfig, plan: &SearchPlan) -> u64 {
    if plan.variant.is_distributed() {
        plan.iterations as u64 * iteration_cost(cfg.n(), cfg.t())
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommLedger {
    /// One group of events per iteration.
    pub iterations: Vec<Vec<TransferEvent>>,
    pub per_iteration_total: u64,
    pub run_total: u64,
}

impl CommLedger {
    pub fn new(cfg: &PartitionConfig, iterations: usize) -> Self {
        let events = simulate_iteration_transfers(cfg);
        let per_iteration_total = events.iter().map(|e| e.qubits as u64).sum();
        CommLedger {
            iterations: vec![events; iterations],
            per_iteration_total,
            run_total: per_iteration_total * iterations as u64,
        }
    }
}

/// Attaches the transfer ledger to a distributed run. Single-node runs are
/// returned unchanged, without a ledger.
pub fn bind_ledger(mut result: SearchResult, cfg: &PartitionConfig) -> Result<SearchResult> {
    if result.plan.variant.is_distributed() {
        if result.plan.n != cfg.n() {
            return Err(Error::Argument(format!(
                "run has n={}, partition has n={}",
                result.plan.n,
                cfg.n()
            )));
        }
        result.ledger = Some(CommLedger::new(cfg, result.plan.iterations));
    }
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub algorithm: &'static str,
    pub qubits: usize,
    pub success: &'static str,
    pub communication: u64,
}

pub const EXACT_LABEL: &str = "1";
pub const INEXACT_LABEL: &str = "High but smaller than 1";

/// Qubit, exactness and communication figures for the two single-node
/// searches, the partitioned search on `n - t` qubits, and the two
/// distributed iterates, at `a` solutions.
pub fn comparison_table(cfg: &PartitionConfig, a: usize) -> Result<Vec<ComparisonRow>> {
    let (n, t) = (cfg.n(), cfg.t());
    let max = node_qubit_counts(cfg).max;
    let comm = |v: Variant| -> Result<u64> {
        Ok(run_total_communication(cfg, &make_plan(v, n, a)?))
    };
    Ok(vec![
        ComparisonRow { algorithm: "grover", qubits: n, success: INEXACT_LABEL, communication: 0 },
        ComparisonRow { algorithm: "long", qubits: n, success: EXACT_LABEL, communication: 0 },
        ComparisonRow { algorithm: "partitioned", qubits: n - t, success: INEXACT_LABEL, communication: 0 },
        ComparisonRow { algorithm: "dist", qubits: max, success: INEXACT_LABEL, communication: comm(Variant::Dist)? },
        ComparisonRow { algorithm: "dist-exact", qubits: max, success: EXACT_LABEL, communication: comm(Variant::DistExact)? },
    ])
}
