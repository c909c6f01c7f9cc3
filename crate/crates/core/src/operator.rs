use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::SiteWindow;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tridiagonal complex operator on a site window, addressed by signed site index.
///
/// `upper[i]` is the entry `(i, i + 1)` and `lower[i]` the entry `(i + 1, i)`,
/// both in storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    window: SiteWindow,
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
    lower: Vec<Complex64>,
}

impl BandedOperator {
    pub fn zeros(window: SiteWindow) -> Self {
        let n = window.len();
        Self {
            window,
            diag: vec![ZERO; n],
            upper: vec![ZERO; n - 1],
            lower: vec![ZERO; n - 1],
        }
    }

    pub fn window(&self) -> &SiteWindow {
        &self.window
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn lower(&self) -> &[Complex64] {
        &self.lower
    }

    /// Entry `(row, col)`; zero off the band or outside the window.
    pub fn get(&self, row: i64, col: i64) -> Complex64 {
        match (self.window.index(row), self.window.index(col)) {
            (Some(i), Some(j)) if i == j => self.diag[i],
            (Some(i), Some(j)) if j == i + 1 => self.upper[i],
            (Some(i), Some(j)) if i == j + 1 => self.lower[j],
            _ => ZERO,
        }
    }

    fn entry_mut(&mut self, row: i64, col: i64) -> Result<&mut Complex64> {
        let (i, j) = match (self.window.index(row), self.window.index(col)) {
            (Some(i), Some(j)) => (i, j),
            _ => {
                return Err(Error::Window(format!(
                    "entry ({row}, {col}) outside window of half width {}",
                    self.window.half_width()
                )))
            }
        };
        if i == j {
            Ok(&mut self.diag[i])
        } else if j == i + 1 {
            Ok(&mut self.upper[i])
        } else if i == j + 1 {
            Ok(&mut self.lower[j])
        } else {
            Err(Error::Window(format!(
                "entry ({row}, {col}) outside the tridiagonal band"
            )))
        }
    }

    pub fn set(&mut self, row: i64, col: i64, value: Complex64) -> Result<()> {
        *self.entry_mut(row, col)? = value;
        Ok(())
    }

    pub fn add_to(&mut self, row: i64, col: i64, value: Complex64) -> Result<()> {
        *self.entry_mut(row, col)? += value;
        Ok(())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.window.half_width() != other.window.half_width() {
            return Err(Error::Window(format!(
                "shape mismatch: half widths {} and {}",
                self.window.half_width(),
                other.window.half_width()
            )));
        }
        Ok(())
    }

    /// Entrywise sum.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let zip = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Self {
            window: self.window,
            diag: zip(&self.diag, &other.diag),
            upper: zip(&self.upper, &other.upper),
            lower: zip(&self.lower, &other.lower),
        })
    }

    pub fn transpose(&self) -> Self {
        Self {
            window: self.window,
            diag: self.diag.clone(),
            upper: self.lower.clone(),
            lower: self.upper.clone(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let conj = |v: &[Complex64]| v.iter().map(|z| z.conj()).collect();
        Self {
            window: self.window,
            diag: conj(&self.diag),
            upper: conj(&self.lower),
            lower: conj(&self.upper),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        let d = |a: &[Complex64], b: &[Complex64]| {
            a.iter()
                .zip(b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
        };
        Ok(d(&self.diag, &other.diag)
            .max(d(&self.upper, &other.upper))
            .max(d(&self.lower, &other.lower)))
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_abs_diff(&self.adjoint()).is_ok_and(|d| d == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.diag
            .iter()
            .chain(&self.upper)
            .chain(&self.lower)
            .all(|z| z.im == 0.0)
    }

    /// Sites whose row carries at least one nonzero entry.
    pub fn nonzero_rows(&self) -> Vec<i64> {
        self.window
            .sites()
            .filter(|&k| (k - 1..=k + 1).any(|j| self.get(k, j) != ZERO))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let sites: Vec<i64> = self.window.sites().collect();
        sites
            .iter()
            .map(|&r| sites.iter().map(|&c| self.get(r, c)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addressing_and_transpose() {
        let w = SiteWindow::unit(2).unwrap();
        let mut op = BandedOperator::zeros(w);
        op.set(-1, 0, Complex64::new(3.0, 0.0)).unwrap();
        op.add_to(0, 1, Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(op.get(-1, 0), Complex64::new(3.0, 0.0));
        assert_eq!(op.transpose().get(0, -1), Complex64::new(3.0, 0.0));
        assert_eq!(op.adjoint().get(1, 0), Complex64::new(0.0, -2.0));
        assert_eq!(op.get(-2, 2), ZERO);
        assert!(op.set(-2, 0, ZERO).is_err());
        assert!(op.set(3, 3, ZERO).is_err());
        assert_eq!(op.nonzero_rows(), vec![-1, 0]);
        assert!(!op.is_real());
    }

    #[test]
    fn shape_mismatch() {
        let a = BandedOperator::zeros(SiteWindow::unit(2).unwrap());
        let b = BandedOperator::zeros(SiteWindow::unit(3).unwrap());
        assert!(matches!(a.try_add(&b), Err(Error::Window(_))));
    }
}
