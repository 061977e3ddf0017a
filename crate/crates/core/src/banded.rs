//! Banded LU factorization with partial pivoting (compact band storage).
//!
//! Row `i` stores the matrix entries for columns `i - m1 ..= i + m2`; rows
//! are swapped during elimination, so the factored upper band widens to
//! `m1 + m2`. This is the classical band algorithm; it is all the linear
//! algebra the implicit stepper needs.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    m1: usize,
    m2: usize,
    /// n rows by (m1 + m2 + 1) stored entries.
    a: Vec<f64>,
}

impl BandedMatrix {
    pub fn new(n: usize, m1: usize, m2: usize) -> Self {
        BandedMatrix {
            n,
            m1,
            m2,
            a: vec![0.0; n * (m1 + m2 + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j + self.m1 >= i && j <= i + self.m2, "entry outside band");
        i * (self.m1 + self.m2 + 1) + (j + self.m1 - i)
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.a[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.a[s] = v;
    }

    /// Factor in place; consumes the matrix.
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, m1, m2) = (self.n, self.m1, self.m2);
        let mm = m1 + m2 + 1;
        let a = &mut self.a;

        // Shift the first m1 rows left so every stored row begins at its
        // leftmost in-band column.
        for i in 0..m1 {
            let l = m1 - i;
            for j in l..mm {
                a[i * mm + j - l] = a[i * mm + j];
            }
            for j in mm - l..mm {
                a[i * mm + j] = 0.0;
            }
        }

        let mut al = vec![0.0; n * m1];
        let mut index = vec![0usize; n];

        for k in 0..n {
            let reach = (k + m1).min(n - 1);
            let mut pivot_row = k;
            let mut pivot = a[k * mm];
            for i in k + 1..=reach {
                if a[i * mm].abs() > pivot.abs() {
                    pivot = a[i * mm];
                    pivot_row = i;
                }
            }
            index[k] = pivot_row;
            if pivot == 0.0 {
                return Err(Error::SingularSolve { row: k });
            }
            if pivot_row != k {
                for j in 0..mm {
                    a.swap(k * mm + j, pivot_row * mm + j);
                }
            }
            for i in k + 1..=reach {
                let mult = a[i * mm] / a[k * mm];
                al[k * m1 + (i - k - 1)] = mult;
                for j in 1..mm {
                    a[i * mm + j - 1] = a[i * mm + j] - mult * a[k * mm + j];
                }
                a[i * mm + mm - 1] = 0.0;
            }
        }

        Ok(BandedLu {
            n,
            m1,
            mm,
            a: self.a,
            al,
            index,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    m1: usize,
    mm: usize,
    a: Vec<f64>,
    al: Vec<f64>,
    index: Vec<usize>,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, m1, mm) = (self.n, self.m1, self.mm);
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.index[k];
            if p != k {
                b.swap(k, p);
            }
            let reach = (k + m1).min(n - 1);
            for i in k + 1..=reach {
                b[i] -= self.al[k * m1 + (i - k - 1)] * b[k];
            }
        }
        for i in (0..n).rev() {
            let mut sum = b[i];
            let reach = (mm - 1).min(n - 1 - i);
            for k in 1..=reach {
                sum -= self.a[i * mm + k] * b[i + k];
            }
            b[i] = sum / self.a[i * mm];
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b = rhs.to_vec();
        self.solve_in_place(&mut b);
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, piv);
            b.swap(k, piv);
            for i in k + 1..n {
                let m = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= m * a[k][j];
                }
                b[i] -= m * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= a[i][j] * x[j];
            }
            x[i] = s / a[i][i];
        }
        x
    }

    #[test]
    fn matches_dense_solver_on_random_pentadiagonal_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [5usize, 9, 33, 64] {
            let mut banded = BandedMatrix::new(n, 2, 2);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i.saturating_sub(2)..(i + 3).min(n) {
                    let v: f64 = rng.gen_range(-1.0..1.0);
                    let v = if i == j { v + 4.0 } else { v };
                    banded.set(i, j, v);
                    dense[i][j] = v;
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lu = banded.factor().unwrap();
            let x = lu.solve(&b);
            let x_ref = dense_solve(dense, b);
            for (got, want) in x.iter().zip(x_ref.iter()) {
                assert_relative_eq!(got, want, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        // [[0, 1], [1, 0]] needs a row swap.
        let mut m = BandedMatrix::new(2, 1, 1);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        let lu = m.factor().unwrap();
        let x = lu.solve(&[3.0, 5.0]);
        assert_relative_eq!(x[0], 5.0);
        assert_relative_eq!(x[1], 3.0);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = BandedMatrix::new(4, 2, 2);
        assert!(matches!(m.factor(), Err(Error::SingularSolve { .. })));
    }

    #[test]
    fn zero_rhs_gives_exactly_zero_solution() {
        let mut m = BandedMatrix::new(6, 2, 2);
        for i in 0..6 {
            m.set(i, i, 2.0 + i as f64);
            if i > 0 {
                m.set(i, i - 1, -0.7);
            }
            if i + 1 < 6 {
                m.set(i, i + 1, 0.3);
            }
        }
        let lu = m.factor().unwrap();
        let x = lu.solve(&[0.0; 6]);
        assert!(x.iter().all(|&v| v == 0.0));
    }
}
