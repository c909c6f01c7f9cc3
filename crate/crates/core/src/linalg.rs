//! Complex banded matrices and Gaussian elimination with partial pivoting.
//!
//! Row `i` stores columns `i - kl ..= i + kl + ku`; the extra `kl` columns on
//! the right hold the fill-in produced by row interchanges.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative pivot threshold below which a system is declared singular.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![Complex64::new(0.0, 0.0); n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || j > i + self.kl + self.ku {
            return None;
        }
        Some(i * self.width + (j + self.kl - i))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.slot(i, j)
            .map_or(Complex64::new(0.0, 0.0), |s| self.data[s])
    }

    /// Panics when `(i, j)` lies outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let s = self.band_slot(i, j);
        self.data[s] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: Complex64) {
        let s = self.band_slot(i, j);
        self.data[s] += value;
    }

    fn band_slot(&self, i: usize, j: usize) -> usize {
        assert!(
            i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band kl={} ku={} n={}",
            self.kl,
            self.ku,
            self.n
        );
        i * self.width + (j + self.kl - i)
    }

    fn col_range(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.kl + self.ku).min(self.n - 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.col_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Solves `A x = b`. The matrix is copied; `self` is left untouched.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        assert_eq!(rhs.len(), self.n);
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        let threshold = PIVOT_TOLERANCE * self.max_abs();
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        let reach = self.kl + self.ku;

        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let (pivot_row, pivot_abs) =
                (k..=last_row)
                    .map(|i| (i, a.get(i, k).norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            // NaN pivots fail too
            if pivot_abs.is_nan() || pivot_abs <= threshold {
                return Err(Error::Resonance {
                    row: k,
                    pivot: pivot_abs,
                });
            }
            let last_col = (k + reach).min(n - 1);
            if pivot_row != k {
                for j in k..=last_col {
                    let sk = a.slot(k, j).unwrap();
                    let sp = a.slot(pivot_row, j).unwrap();
                    a.data.swap(sk, sp);
                }
                b.swap(k, pivot_row);
            }
            let pivot = a.get(k, k);
            for i in k + 1..=last_row {
                let si = a.slot(i, k).unwrap();
                let factor = a.data[si] / pivot;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                a.data[si] = Complex64::new(0.0, 0.0);
                for j in k + 1..=last_col {
                    let upper = a.get(k, j);
                    let s = a.slot(i, j).unwrap();
                    a.data[s] -= factor * upper;
                }
                let bk = b[k];
                b[i] -= factor * bk;
            }
        }

        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let last_col = (i + reach).min(n - 1);
            let tail: Complex64 = (i + 1..=last_col).map(|j| a.get(i, j) * x[j]).sum();
            x[i] = (b[i] - tail) / a.get(i, i);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Dense elimination with full pivoting, independent of the band layout.
    #[allow(clippy::needless_range_loop)]
    fn dense_solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
        let n = b.len();
        let mut cols: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut pi, mut pj, mut best) = (k, k, -1.0);
            for i in k..n {
                for j in k..n {
                    if a[i][j].norm() > best {
                        best = a[i][j].norm();
                        pi = i;
                        pj = j;
                    }
                }
            }
            a.swap(k, pi);
            b.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            cols.swap(k, pj);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    let v = a[k][j];
                    a[i][j] -= f * v;
                }
                let v = b[k];
                b[i] -= f * v;
            }
        }
        let mut y = vec![c(0.0, 0.0); n];
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|j| a[i][j] * y[j]).sum();
            y[i] = (b[i] - s) / a[i][i];
        }
        let mut x = vec![c(0.0, 0.0); n];
        for (k, &col) in cols.iter().enumerate() {
            x[col] = y[k];
        }
        x
    }

    #[test]
    fn solves_tridiagonal_needing_pivots() {
        // zero leading diagonal forces an interchange
        let mut m = BandMatrix::zeros(3, 1, 1);
        m.set(0, 0, c(0.0, 0.0));
        m.set(0, 1, c(1.0, 0.0));
        m.set(1, 0, c(2.0, 0.0));
        m.set(1, 1, c(1.0, 1.0));
        m.set(1, 2, c(-1.0, 0.0));
        m.set(2, 1, c(0.5, 0.0));
        m.set(2, 2, c(3.0, 0.0));
        let x_true = vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.25)];
        let b = m.mul_vec(&x_true);
        let x = m.solve(&b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let mut m = BandMatrix::zeros(2, 1, 1);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(2.0, 0.0));
        m.set(1, 0, c(2.0, 0.0));
        m.set(1, 1, c(4.0, 0.0));
        assert!(matches!(
            m.solve(&[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::Resonance { .. })
        ));
    }

    #[test]
    #[should_panic]
    fn set_outside_band_panics() {
        let mut m = BandMatrix::zeros(4, 1, 1);
        m.set(0, 3, c(1.0, 0.0));
    }

    fn entry() -> impl Strategy<Value = Complex64> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
    }

    fn banded(
        n: usize,
        kl: usize,
        ku: usize,
        vals: &[Complex64],
        shift: f64,
    ) -> (BandMatrix, Vec<Vec<Complex64>>) {
        let mut m = BandMatrix::zeros(n, kl, ku);
        let mut dense = vec![vec![c(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                if j + kl >= i && j <= i + ku {
                    let v = vals[i * 12 + j] + if i == j { c(shift, 0.0) } else { c(0.0, 0.0) };
                    m.set(i, j, v);
                    dense[i][j] = v;
                }
            }
        }
        (m, dense)
    }

    proptest! {
        #[test]
        fn agrees_with_dense_elimination(
            n in 1usize..12,
            kl in 0usize..3,
            ku in 0usize..3,
            vals in prop::collection::vec(entry(), 12 * 12),
            rhs in prop::collection::vec(entry(), 12),
        ) {
            let (m, dense) = banded(n, kl, ku, &vals, 16.0);
            let b = rhs[..n].to_vec();
            let x = m.solve(&b).unwrap();
            let y = dense_solve(dense, b.clone());
            for (u, v) in x.iter().zip(&y) {
                prop_assert!((u - v).norm() < 1e-12);
            }
        }

        #[test]
        fn small_backward_error_with_pivoting(
            n in 1usize..12,
            kl in 0usize..3,
            ku in 0usize..3,
            vals in prop::collection::vec(entry(), 12 * 12),
            rhs in prop::collection::vec(entry(), 12),
        ) {
            let (m, _) = banded(n, kl, ku, &vals, 0.0);
            let b = rhs[..n].to_vec();
            let x = m.solve(&b);
            prop_assume!(x.is_ok());
            let x = x.unwrap();
            let xmax = x.iter().fold(0.0f64, |a, z| a.max(z.norm()));
            let scale = m.max_abs() * xmax * n as f64 + 1.0;
            for (u, v) in m.mul_vec(&x).iter().zip(&b) {
                prop_assert!((u - v).norm() <= 1e-12 * scale);
            }
        }
    }
}
