use std::f64::consts::FRAC_1_SQRT_2;

use super::{CMatrix, C64};
use crate::{Error, Result};

const UNITARITY_TOL: f64 = 1e-12;

/// A `2^k x 2^k` unitary acting on `k` qubits.
///
/// Gates whose matrix has exactly one nonzero per column (permutations with
/// phases) additionally keep that sparse form and are applied in `O(2^m)`.
#[derive(Clone, Debug)]
pub struct LocalUnitary {
    arity: usize,
    matrix: CMatrix,
    monomial: Option<Vec<(usize, C64)>>,
}

impl LocalUnitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || dim != matrix.ncols() || !dim.is_power_of_two() {
            return Err(Error::Argument(format!(
                "gate matrix must be square with power-of-two size, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = super::unitarity_defect(&matrix);
        if defect >= UNITARITY_TOL {
            return Err(Error::Argument(format!(
                "gate matrix is not unitary (max |U*U - I| = {defect:.3e})"
            )));
        }
        let monomial = monomial_form(&matrix);
        Ok(LocalUnitary {
            arity: dim.trailing_zeros() as usize,
            matrix,
            monomial,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub(crate) fn monomial(&self) -> Option<&[(usize, C64)]> {
        self.monomial.as_deref()
    }

    pub fn adjoint(&self) -> Self {
        let matrix = self.matrix.adjoint();
        let monomial = monomial_form(&matrix);
        LocalUnitary {
            arity: self.arity,
            matrix,
            monomial,
        }
    }

    pub fn identity(arity: usize) -> Self {
        Self::new(CMatrix::identity(1 << arity, 1 << arity)).expect("identity is unitary")
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(CMatrix::from_row_slice(2, 2, &[h, h, h, -h])).expect("H is unitary")
    }

    pub fn pauli_x() -> Self {
        Self::from_permutation(1, |x| x ^ 1).expect("X is a permutation")
    }

    pub fn pauli_z() -> Self {
        Self::from_diagonal(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).expect("Z is unitary")
    }

    /// `diag(1, e^{i phi})`.
    pub fn phase(phi: f64) -> Self {
        Self::from_diagonal(&[C64::new(1.0, 0.0), C64::from_polar(1.0, phi)])
            .expect("phase gate is unitary")
    }

    pub fn from_diagonal(entries: &[C64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            entries,
        )))
    }

    /// Classical reversible gate given by its truth table `x -> perm(x)` on
    /// `arity`-bit local indices.
    pub fn from_permutation(arity: usize, perm: impl Fn(usize) -> usize) -> Result<Self> {
        let dim = 1usize << arity;
        let mut matrix = CMatrix::zeros(dim, dim);
        let mut hit = vec![false; dim];
        for x in 0..dim {
            let y = perm(x);
            if y >= dim || hit[y] {
                return Err(Error::Argument(format!(
                    "truth table is not a bijection on {arity} bits (x={x} -> {y})"
                )));
            }
            hit[y] = true;
            matrix[(y, x)] = C64::new(1.0, 0.0);
        }
        Self::new(matrix)
    }
}

fn monomial_form(matrix: &CMatrix) -> Option<Vec<(usize, C64)>> {
    let mut out = Vec::with_capacity(matrix.ncols());
    for col in 0..matrix.ncols() {
        let mut entry = None;
        for row in 0..matrix.nrows() {
            let v = matrix[(row, col)];
            if v != C64::new(0.0, 0.0) {
                if entry.is_some() {
                    return None;
                }
                entry = Some((row, v));
            }
        }
        out.push(entry?);
    }
    Some(out)
}

/// Ordered list of distinct qubit indices; position `j` of the list is the
/// `j`-th (most significant first) tensor slot of the gate acting on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitIndexSet(Vec<usize>);

impl QubitIndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        for (i, q) in indices.iter().enumerate() {
            if indices[..i].contains(q) {
                return Err(Error::Argument(format!("duplicate qubit index {q}")));
            }
        }
        Ok(QubitIndexSet(indices))
    }

    pub fn single(q: usize) -> Self {
        QubitIndexSet(vec![q])
    }

    /// `start..end` in increasing order.
    pub fn range(start: usize, end: usize) -> Self {
        QubitIndexSet((start..end).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check_range(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&q| q >= m) {
            Some(q) => Err(Error::Argument(format!(
                "qubit index {q} out of range for a {m}-qubit register"
            ))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for QubitIndexSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}
