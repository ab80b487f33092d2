//! The searched function `f: {0,1}^n -> {0,1}`, its split into `2^t`
//! sub-functions `f_w(u) = f(u w)`, and the Boolean helpers `OR` and `g`.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qsim::{format_bits, parse_bits};
use crate::{Error, Result};

/// Widest input accepted for an oracle.
pub const MAX_ORACLE_BITS: usize = 30;

/// `f` stored as its explicit set of solutions. Always has at least one
/// solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanOracle {
    n: usize,
    solutions: BTreeSet<usize>,
}

impl BooleanOracle {
    pub fn new(n: usize, solutions: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_BITS {
            return Err(Error::Argument(format!(
                "input width n={n} must be in 1..={MAX_ORACLE_BITS}"
            )));
        }
        let mut set = BTreeSet::new();
        for x in solutions {
            if x >= 1 << n {
                return Err(Error::Argument(format!(
                    "solution {x} does not fit in {n} bits"
                )));
            }
            if !set.insert(x) {
                return Err(Error::Argument(format!(
                    "duplicate solution {}",
                    format_bits(x, n)
                )));
            }
        }
        if set.is_empty() {
            return Err(Error::PromiseViolation(
                "f must have at least one solution (a >= 1)".into(),
            ));
        }
        Ok(BooleanOracle { n, solutions: set })
    }

    pub fn from_strings<S: AsRef<str>>(n: usize, solutions: &[S]) -> Result<Self> {
        let parsed = solutions
            .iter()
            .map(|s| parse_bits(s.as_ref(), n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parsed)
    }

    /// Uniformly random oracle with exactly `a` solutions.
    pub fn random<R: Rng + ?Sized>(n: usize, a: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(Error::Argument(format!("random oracle width n={n} out of range")));
        }
        if a > 1 << n {
            return Err(Error::Argument(format!("a={a} exceeds N={}", 1usize << n)));
        }
        Self::new(n, sample(rng, 1 << n, a).into_iter())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of solutions `a`.
    pub fn solution_count(&self) -> usize {
        self.solutions.len()
    }

    pub fn solutions(&self) -> impl Iterator<Item = usize> + '_ {
        self.solutions.iter().copied()
    }

    pub fn is_solution(&self, x: usize) -> bool {
        self.solutions.contains(&x)
    }

    /// `f(x)` for an `n`-character bit string.
    pub fn eval(&self, x: &str) -> Result<u8> {
        Ok(self.is_solution(parse_bits(x, self.n)?) as u8)
    }

    pub fn subfunction(&self, cfg: &PartitionConfig, w: &str) -> Result<SubFunction<'_>> {
        cfg.check_oracle(self)?;
        let w = parse_bits(w, cfg.t())?;
        Ok(SubFunction {
            oracle: self,
            t: cfg.t(),
            w,
        })
    }

    /// `f_w` for the integer suffix `w`.
    pub fn subfunction_at(&self, cfg: &PartitionConfig, w: usize) -> Result<SubFunction<'_>> {
        cfg.check_oracle(self)?;
        if w >= 1 << cfg.t() {
            return Err(Error::Argument(format!(
                "suffix {w} does not fit in t={} bits",
                cfg.t()
            )));
        }
        Ok(SubFunction {
            oracle: self,
            t: cfg.t(),
            w,
        })
    }

    pub fn to_file_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for x in &self.solutions {
            out.push_str(&format_bits(*x, self.n));
            out.push('\n');
        }
        out
    }
}

/// How the `n` input bits split into a `(n-t)`-bit prefix `u` and a `t`-bit
/// suffix `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionConfig {
    n: usize,
    t: usize,
    node_size_constraint: bool,
}

impl PartitionConfig {
    /// Requires `1 <= t < n`.
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if t < 1 || t >= n {
            return Err(Error::Argument(format!(
                "partition requires 1 <= t < n, got n={n}, t={t}"
            )));
        }
        Ok(PartitionConfig {
            n,
            t,
            node_size_constraint: false,
        })
    }

    /// Additionally requires `n > 4` and `1 < t < log2(n) - 1`, the regime in
    /// which the largest node is smaller than the undistributed register.
    pub fn with_node_size_constraint(n: usize, t: usize) -> Result<Self> {
        let cfg = Self::new(n, t)?;
        let upper = (n as f64).log2() - 1.0;
        if n <= 4 || t <= 1 || (t as f64) >= upper {
            return Err(Error::Argument(format!(
                "node-size constraint requires n > 4 and 1 < t < log2(n) - 1, got n={n}, t={t}"
            )));
        }
        Ok(PartitionConfig {
            node_size_constraint: true,
            ..cfg
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn node_size_constraint(&self) -> bool {
        self.node_size_constraint
    }

    pub(crate) fn check_oracle(&self, oracle: &BooleanOracle) -> Result<()> {
        if oracle.n() != self.n {
            return Err(Error::Argument(format!(
                "partition is for n={}, oracle has n={}",
                self.n,
                oracle.n()
            )));
        }
        Ok(())
    }
}

/// `f_w(u) = f(u w)`.
#[derive(Clone, Copy, Debug)]
pub struct SubFunction<'a> {
    oracle: &'a BooleanOracle,
    t: usize,
    w: usize,
}

impl SubFunction<'_> {
    pub fn w(&self) -> usize {
        self.w
    }

    pub fn input_width(&self) -> usize {
        self.oracle.n() - self.t
    }

    pub fn eval(&self, u: usize) -> bool {
        self.oracle.is_solution((u << self.t) | self.w)
    }

    pub fn eval_str(&self, u: &str) -> Result<u8> {
        Ok(self.eval(parse_bits(u, self.input_width())?) as u8)
    }

    /// Truth table over all `2^(n-t)` values of `u`.
    pub fn table(&self) -> Vec<bool> {
        (0..1usize << self.input_width()).map(|u| self.eval(u)).collect()
    }
}

/// `OR(x)`: 1 iff the Hamming weight of `x` is at least one.
pub fn or_fn(x: &str) -> Result<u8> {
    if x.is_empty() {
        return Err(Error::Argument("OR of an empty bit string".into()));
    }
    Ok((parse_bits(x, x.len())? != 0) as u8)
}

/// `g(u, w, b, c) = c XOR NOT OR(w (b XOR OR(u)))`, on integer-encoded
/// registers.
pub fn g_value(u: usize, w: usize, b: bool, c: bool) -> bool {
    let or_u = u != 0;
    let inner = w != 0 || (b ^ or_u);
    c ^ !inner
}

/// String form of [`g_value`] with width checks.
pub fn g_fn(u: &str, w: &str, b: u8, c: u8) -> Result<u8> {
    if u.is_empty() || w.is_empty() {
        return Err(Error::Argument("u and w must be non-empty".into()));
    }
    if b > 1 || c > 1 {
        return Err(Error::Argument("b and c must be single bits".into()));
    }
    let u = parse_bits(u, u.len())?;
    let w = parse_bits(w, w.len())?;
    Ok(g_value(u, w, b == 1, c == 1) as u8)
}

#[derive(Deserialize)]
struct OracleJson {
    n: usize,
    solutions: Vec<String>,
}

/// Parses either the line format (`n=<int>` then one solution per line) or
/// the JSON object `{"n": .., "solutions": [..]}`.
pub fn parse_oracle(text: &str, origin: &str) -> Result<BooleanOracle> {
    let parse_err = |message: String| Error::Parse {
        origin: origin.to_string(),
        message,
    };
    let (n, lines): (usize, Vec<String>) = if text.trim_start().starts_with('{') {
        let doc: OracleJson =
            serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        (doc.n, doc.solutions)
    } else {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| parse_err("empty file".into()))?;
        let n = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_err(format!("expected `n=<int>` header, found {header:?}")))?;
        (n, lines.map(String::from).collect())
    };
    let mut values = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        let x = parse_bits(line, n)
            .map_err(|e| parse_err(format!("solution #{}: {e}", i + 1)))?;
        if values.contains(&x) {
            return Err(parse_err(format!("duplicate solution {line}")));
        }
        values.push(x);
    }
    match BooleanOracle::new(n, values) {
        Err(Error::Argument(message)) => Err(parse_err(message)),
        other => other,
    }
}

pub fn load_oracle(path: impl AsRef<Path>) -> Result<BooleanOracle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_oracle(&text, &path.display().to_string())
}
