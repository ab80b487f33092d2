//! Dense statevector substrate: amplitudes, small local unitaries, and
//! circuits of local unitaries over a larger register.

mod circuit;
mod compare;
mod gate;
mod state;

pub use circuit::{build_matrix, Circuit, CircuitOp, MAX_MATRIX_QUBITS};
pub use compare::{max_abs_diff, max_abs_diff_up_to_phase, unitarity_defect};
pub use gate::{LocalUnitary, QubitIndexSet};
pub use state::{apply_diagonal_phase, apply_unitary, init_basis_state, StateVector, MAX_STATE_QUBITS};

pub use num_complex::Complex64 as C64;
pub use nalgebra::DMatrix;

/// Complex dense matrix in the layout used throughout the crate.
pub type CMatrix = DMatrix<C64>;

/// Bit position (from the least significant end) of qubit `q` in an
/// `m`-qubit big-endian basis index.
#[inline]
pub(crate) fn bit_pos(m: usize, q: usize) -> usize {
    m - 1 - q
}

/// Value of qubit `q` in basis index `index` of an `m`-qubit register.
#[inline]
pub fn qubit_value(index: usize, m: usize, q: usize) -> usize {
    (index >> bit_pos(m, q)) & 1
}

/// Reads the qubits `qs` (in order, first = most significant) out of a
/// basis index as an integer.
pub fn extract_bits(index: usize, m: usize, qs: &[usize]) -> usize {
    qs.iter()
        .fold(0, |acc, &q| (acc << 1) | qubit_value(index, m, q))
}

/// Parses a string over {0,1} as a big-endian integer of the given width.
pub fn parse_bits(bits: &str, width: usize) -> crate::Result<usize> {
    if bits.len() != width {
        return Err(crate::Error::Argument(format!(
            "bit string {bits:?} has length {}, expected {width}",
            bits.len()
        )));
    }
    if width > usize::BITS as usize - 1 {
        return Err(crate::Error::Argument(format!(
            "bit string width {width} is too large"
        )));
    }
    bits.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(crate::Error::Argument(format!(
            "invalid character {other:?} in bit string {bits:?}"
        ))),
    })
}

/// Formats `value` as a big-endian bit string of `width` characters.
pub fn format_bits(value: usize, width: usize) -> String {
    (0..width)
        .map(|i| {
            if (value >> (width - 1 - i)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
