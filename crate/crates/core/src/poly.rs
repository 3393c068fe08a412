//! Lag-polynomial helpers: root-location tests and products.
//!
//! AR and MA polynomials are both carried as the coefficient list `c` of
//! `1 - c_1 z - ... - c_k z^k`.

/// Roots must lie at modulus greater than `1 + ROOT_MARGIN`.
pub const ROOT_MARGIN: f64 = 1e-9;

/// True when every root of `1 - c_1 z - ... - c_k z^k` lies strictly outside
/// the circle of radius `1 + ROOT_MARGIN`.
///
/// Substituting `z = r w` with `r = 1 + ROOT_MARGIN` reduces this to the unit
/// circle test on coefficients `c_i r^i`, which is then decided by the
/// Schur-Cohn step-down recursion: the polynomial is stable iff every
/// reflection coefficient it produces has modulus below one.
pub fn roots_outside_unit_circle(coeffs: &[f64]) -> bool {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return false;
    }
    let r = 1.0 + ROOT_MARGIN;
    let mut a: Vec<f64> = coeffs.iter().enumerate().map(|(i, c)| c * r.powi(i as i32 + 1)).collect();
    while a.last() == Some(&0.0) {
        a.pop();
    }
    while let Some(&kappa) = a.last() {
        if kappa.abs() >= 1.0 {
            return false;
        }
        let k = a.len();
        let scale = 1.0 - kappa * kappa;
        a = (0..k - 1).map(|i| (a[i] + kappa * a[k - 2 - i]) / scale).collect();
    }
    true
}

/// Product of two polynomials given by full coefficient lists (constant
/// term first).
pub fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Full coefficient list of `(1 - B)^d`.
pub fn difference_operator(d: usize) -> Vec<f64> {
    (0..d).fold(vec![1.0], |acc, _| multiply(&acc, &[1.0, -1.0]))
}
