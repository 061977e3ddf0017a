//! Finite-difference weights on arbitrarily spaced nodes.
//!
//! Interior operators are classical three-point formulas on nonuniform
//! spacing. Wider stencils (the fourth derivative used by the implicit
//! stepper) get their weights from Fornberg's recursion.

/// Weights for the first derivative at the middle of `{-a, 0, +b}`.
///
/// Exact for quadratics. When `a == b` bitwise, the returned weights are
/// exactly antisymmetric and the centre weight is exactly zero, which the
/// even-extension boundary closure relies on.
pub fn d1_weights(a: f64, b: f64) -> (f64, f64, f64) {
    let wl = -b / (a * (a + b));
    let wc = (b - a) / (a * b);
    let wr = a / (b * (a + b));
    (wl, wc, wr)
}

/// Weights for the second derivative at the middle of `{-a, 0, +b}`.
pub fn d2_weights(a: f64, b: f64) -> (f64, f64, f64) {
    let wl = 2.0 / (a * (a + b));
    let wc = -2.0 / (a * b);
    let wr = 2.0 / (b * (a + b));
    (wl, wc, wr)
}

/// Derivative of order 1 or 2 of samples `f` on abscissae `s`, where `f`
/// continues across both ends as an even function (mirror extension).
///
/// Odd-order derivatives at the two end nodes cancel exactly: the end
/// stencil sees equal spacings and equal mirrored values, so the weighted
/// sum is a floating-point exact zero.
pub fn differentiate_even_ext(f: &[f64], s: &[f64], order: u32) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3 && s.len() == n);
    assert!(order == 1 || order == 2);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (a, fl) = if i == 0 {
            (s[1] - s[0], f[1])
        } else {
            (s[i] - s[i - 1], f[i - 1])
        };
        let (b, fr) = if i == n - 1 {
            (s[n - 1] - s[n - 2], f[n - 2])
        } else {
            (s[i + 1] - s[i], f[i + 1])
        };
        let (wl, wc, wr) = match order {
            1 => d1_weights(a, b),
            _ => d2_weights(a, b),
        };
        out.push((wl * fl + wc * f[i]) + wr * fr);
    }
    out
}

/// Derivative of order 1 or 2 at the interior nodes of `f` on `s`; the two
/// end entries of the result are dropped (output length is `f.len() - 2`).
pub fn differentiate_interior(f: &[f64], s: &[f64], order: u32) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3 && s.len() == n);
    let mut out = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let a = s[i] - s[i - 1];
        let b = s[i + 1] - s[i];
        let (wl, wc, wr) = match order {
            1 => d1_weights(a, b),
            _ => d2_weights(a, b),
        };
        out.push((wl * f[i - 1] + wc * f[i]) + wr * f[i + 1]);
    }
    out
}

/// Fornberg weights for the `order`-th derivative at 0 on the given offsets.
pub fn fd_weights(offsets: &[f64], order: usize) -> Vec<f64> {
    let n = offsets.len();
    assert!(n > order, "stencil too small for derivative order");
    // c[j][k]: weight of node j for the k-th derivative.
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// First derivative of `values` with respect to `times` at the interior
/// points, by the nonuniform centered formula. Entry `i` of the result is
/// the derivative at `times[i + 1]`.
pub fn centered_time_derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    differentiate_interior(values, times, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fornberg_matches_uniform_fourth_derivative() {
        let h = 0.1;
        let offsets: Vec<f64> = (-2..=2).map(|j| j as f64 * h).collect();
        let w = fd_weights(&offsets, 4);
        let expect = [1.0, -4.0, 6.0, -4.0, 1.0].map(|c| c / h.powi(4));
        for (got, want) in w.iter().zip(expect.iter()) {
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn fornberg_first_derivative_three_point() {
        let offsets = [-0.2, 0.0, 0.3];
        let w = fd_weights(&offsets, 1);
        let (wl, wc, wr) = d1_weights(0.2, 0.3);
        assert_relative_eq!(w[0], wl, max_relative = 1e-14);
        assert_relative_eq!(w[1], wc, max_relative = 1e-14);
        assert_relative_eq!(w[2], wr, max_relative = 1e-14);
    }

    #[test]
    fn even_extension_kills_odd_derivative_at_ends() {
        // Arbitrary data: the end stencils see mirrored values, so the
        // first derivative there must be an exact zero.
        let f = vec![0.3, -1.7, 2.9, 0.4, -0.6];
        let s = vec![0.0, 0.11, 0.23, 0.31, 0.45];
        let d = differentiate_even_ext(&f, &s, 1);
        assert_eq!(d[0], 0.0);
        assert_eq!(d[4], 0.0);
    }

    #[test]
    fn nonuniform_second_derivative_is_exact_on_quadratics() {
        let s = vec![0.0, 0.13, 0.21, 0.40, 0.55];
        let f: Vec<f64> = s.iter().map(|&x| 3.0 * x * x - 2.0 * x + 1.0).collect();
        let d2 = differentiate_interior(&f, &s, 2);
        for v in d2 {
            assert_relative_eq!(v, 6.0, max_relative = 1e-10);
        }
    }
}
