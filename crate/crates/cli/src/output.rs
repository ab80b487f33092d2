use std::collections::BTreeMap;
use std::io::Write;

use distgrover::distsim::{CommLedger, ComparisonRow};
use distgrover::qsim::format_bits;
use distgrover::verify::VerificationReport;
use distgrover::{BooleanOracle, SearchResult};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Renders `v` with 12 significant digits, `.` as decimal separator.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.11e}")
    }
}

#[derive(Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub solution_mass: f64,
}

#[derive(Serialize)]
pub struct Shots {
    pub shots: u64,
    pub seed: u64,
    /// Outcome string to count; outcomes never drawn are omitted.
    pub counts: BTreeMap<String, u64>,
}

#[derive(Serialize)]
pub struct RunArtifact {
    pub variant: String,
    pub n: usize,
    pub a: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub theta: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    pub success_probability: f64,
    pub solutions: Vec<String>,
    pub distribution: BTreeMap<String, f64>,
    pub trace: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<CommLedger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<Shots>,
}

pub fn trace_rows(result: &SearchResult) -> Vec<TraceRow> {
    distgrover::algorithms::iteration_trace(result)
        .into_iter()
        .map(|(iteration, solution_mass)| TraceRow { iteration, solution_mass })
        .collect()
}

impl RunArtifact {
    pub fn new(result: SearchResult, oracle: &BooleanOracle, t: Option<usize>, shots: Option<Shots>) -> Self {
        let n = result.plan.n;
        let trace = trace_rows(&result);
        let distribution = result
            .distribution
            .iter()
            .enumerate()
            .map(|(x, &p)| (format_bits(x, n), p))
            .collect();
        RunArtifact {
            variant: result.plan.variant.to_string(),
            n,
            a: result.plan.a,
            t,
            theta: result.plan.theta,
            iterations: result.plan.iterations,
            k: result.plan.k(),
            phi: result.plan.phi,
            success_probability: result.success_probability,
            solutions: oracle.solutions().map(|x| format_bits(x, n)).collect(),
            distribution,
            trace,
            ledger: result.ledger,
            shots,
        }
    }

    pub fn to_csv(&self) -> String {
        let solutions: std::collections::BTreeSet<&str> =
            self.solutions.iter().map(String::as_str).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["outcome", "probability", "solution"];
        if self.shots.is_some() {
            header.push("count");
        }
        w.write_record(&header).expect("in-memory csv");
        for (outcome, &p) in &self.distribution {
            let mut row = vec![
                outcome.clone(),
                sig12(p),
                u8::from(solutions.contains(outcome.as_str())).to_string(),
            ];
            if let Some(shots) = &self.shots {
                row.push(shots.counts.get(outcome).copied().unwrap_or(0).to_string());
            }
            w.write_record(&row).expect("in-memory csv");
        }
        finish(w)
    }

    /// Human-oriented summary printed when the artifact goes to a file.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "variant {} n={} a={} iterations={}\nsuccess_probability {}\n",
            self.variant,
            self.n,
            self.a,
            self.iterations,
            sig12(self.success_probability)
        );
        if let Some(ledger) = &self.ledger {
            s += &format!(
                "communication {} per iteration, {} total\n",
                ledger.per_iteration_total, ledger.run_total
            );
        }
        s += "iteration solution_mass\n";
        for row in &self.trace {
            s += &format!("{} {}\n", row.iteration, sig12(row.solution_mass));
        }
        s
    }
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "solution_mass"]).expect("in-memory csv");
    for r in rows {
        w.write_record([r.iteration.to_string(), sig12(r.solution_mass)])
            .expect("in-memory csv");
    }
    finish(w)
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["algorithm", "qubits", "success", "communication"])
        .expect("in-memory csv");
    for r in rows {
        w.write_record([
            r.algorithm.to_string(),
            r.qubits.to_string(),
            r.success.to_string(),
            r.communication.to_string(),
        ])
        .expect("in-memory csv");
    }
    finish(w)
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "params", "deviation", "tolerance", "passed", "note"])
        .expect("in-memory csv");
    for c in &report.checks {
        w.write_record([
            c.name.clone(),
            c.params.to_string(),
            sig12(c.deviation),
            sig12(c.tolerance),
            c.passed.to_string(),
            c.note.clone().unwrap_or_default(),
        ])
        .expect("in-memory csv");
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory csv");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable artifact");
    s.push('\n');
    s
}

pub fn emit(text: &str, path: Option<&std::path::Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
