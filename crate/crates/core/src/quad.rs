//! Trapezoidal quadrature on node arclengths.

/// Trapezoidal rule for samples `f` at abscissae `s`.
pub fn trapezoid(f: &[f64], s: &[f64]) -> f64 {
    debug_assert_eq!(f.len(), s.len());
    let mut acc = 0.0;
    for i in 0..f.len() - 1 {
        acc += 0.5 * (f[i] + f[i + 1]) * (s[i + 1] - s[i]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_linear_functions_exactly() {
        let s: Vec<f64> = vec![0.0, 0.2, 0.5, 1.1, 2.0];
        let f: Vec<f64> = s.iter().map(|&x| 3.0 * x - 1.0).collect();
        // Exact integral of 3x - 1 over [0, 2] is 4.
        assert_relative_eq!(trapezoid(&f, &s), 4.0, epsilon = 1e-14);
    }
}
