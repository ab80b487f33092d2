use super::{CMatrix, C64};

/// Elementwise max-norm of `a - b`. Infinite when the shapes differ.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `min over |c| = 1` of `max |a - c b|`, with `c` taken from the overlap
/// `tr(b^H a)`. Only for comparisons where a global phase is physically
/// irrelevant.
pub fn max_abs_diff_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let overlap: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// `max |U^H U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_freedom() {
        let a = CMatrix::identity(2, 2);
        let b = a.clone() * C64::from_polar(1.0, 1.1);
        assert!(max_abs_diff(&a, &b) > 0.5);
        assert!(max_abs_diff_up_to_phase(&a, &b) < 1e-15);
    }

    #[test]
    fn shape_mismatch_is_infinite() {
        assert!(max_abs_diff(&CMatrix::identity(2, 2), &CMatrix::identity(4, 4)).is_infinite());
    }
}
