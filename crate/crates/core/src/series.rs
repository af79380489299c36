//! Truncated power series with complex coefficients.
//!
//! A [`TruncatedSeries`] of order `N` holds `c_0 ..= c_N`. Binary operations
//! on operands of different order truncate to the shorter one.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Default truncation order used by the CLI and the samplers.
pub const DEFAULT_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<ComplexValue>,
}

impl TruncatedSeries {
    /// Builds a series from `c_0 ..= c_N`. An empty list is the zero series of order 0.
    pub fn new(coeffs: Vec<ComplexValue>) -> Result<Self> {
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        let coeffs = if coeffs.is_empty() { vec![ComplexValue::new(0.0, 0.0)] } else { coeffs };
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ComplexValue::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ComplexValue::new(0.0, 0.0); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ComplexValue::new(1.0, 0.0);
        s
    }

    /// The identity germ `z`, truncated at `order` (which must be at least 1).
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = ComplexValue::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<ComplexValue> {
        self.coeffs.get(n).copied()
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ComplexValue> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }
}

/// Coefficientwise sum, truncated to the smaller order.
pub fn series_add(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    let coeffs = f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| a + b).collect();
    TruncatedSeries { coeffs }
}

/// Cauchy product truncated to the smaller order.
pub fn series_mul(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    let order = f.order().min(g.order());
    let coeffs = (0..=order)
        .map(|n| (0..=n).map(|k| f.coeffs[k] * g.coeffs[n - k]).sum())
        .collect();
    TruncatedSeries { coeffs }
}

pub fn series_derivative(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if f.order() == 0 {
        return Err(Error::DegenerateOrder { order: 0 });
    }
    let coeffs = f.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(n, c)| c * (n as f64 + 1.0))
        .collect();
    Ok(TruncatedSeries { coeffs })
}

/// `f -> z f'(z)` for a normalized germ `f = z + a_2 z^2 + ...`; maps convex
/// functions onto starlike ones.
pub fn alexander_transform(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    const NORMALIZATION_TOL: f64 = 1e-12;
    let c0 = f.coeffs[0];
    let c1 = f.coeff(1).ok_or(Error::NotNormalized)?;
    if c0.norm() > NORMALIZATION_TOL || (c1 - 1.0).norm() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized);
    }
    let coeffs = f.coeffs.iter().enumerate().map(|(n, c)| c * n as f64).collect();
    Ok(TruncatedSeries { coeffs })
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        series_add(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        series_mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(c: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_real(c).unwrap()
    }

    fn assert_close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) {
        assert_eq!(a.order(), b.order(), "{a:?} vs {b:?}");
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn add_examples() {
        assert_close(&series_add(&real(&[1.0, 1.0]), &real(&[1.0, -1.0])), &real(&[2.0, 0.0]), 0.0);
        let f = real(&[0.5, -2.0, 3.0]);
        assert_close(&series_add(&TruncatedSeries::zero(2), &f), &f, 0.0);
        // order 1 operand truncates the order 2 operand
        assert_close(&series_add(&real(&[1.0, 2.0]), &real(&[0.0, 3.0, 1.0])), &real(&[1.0, 5.0]), 0.0);
    }

    #[test]
    fn mul_examples() {
        let one_plus_z = real(&[1.0, 1.0, 0.0]);
        assert_close(&series_mul(&one_plus_z, &one_plus_z), &real(&[1.0, 2.0, 1.0]), 0.0);
        let f = real(&[2.0, -1.0, 4.0]);
        assert_close(&series_mul(&f, &TruncatedSeries::one(2)), &f, 0.0);
        assert_close(&series_mul(&real(&[1.0, 2.0, 2.0]), &real(&[1.0, 1.0, 0.0])), &real(&[1.0, 3.0, 4.0]), 0.0);
    }

    #[test]
    fn derivative_examples() {
        assert_close(&series_derivative(&real(&[0.0, 1.0, 1.0, 1.0])).unwrap(), &real(&[1.0, 2.0, 3.0]), 0.0);
        assert_close(&series_derivative(&real(&[5.0, 0.0])).unwrap(), &real(&[0.0]), 0.0);
        assert_close(&series_derivative(&real(&[0.0, 1.0, 2.0, 3.0])).unwrap(), &real(&[1.0, 4.0, 9.0]), 0.0);
        assert_eq!(series_derivative(&real(&[5.0])), Err(Error::DegenerateOrder { order: 0 }));
    }

    #[test]
    fn alexander_examples() {
        let geometric = real(&[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert_close(&alexander_transform(&geometric).unwrap(), &real(&[0.0, 1.0, 2.0, 3.0, 4.0]), 0.0);
        let z = TruncatedSeries::identity(3);
        assert_close(&alexander_transform(&z).unwrap(), &z, 0.0);
        assert_eq!(alexander_transform(&real(&[1.0, 1.0])), Err(Error::NotNormalized));
        assert_eq!(alexander_transform(&real(&[0.0, 2.0])), Err(Error::NotNormalized));
        assert_eq!(alexander_transform(&real(&[0.0])), Err(Error::NotNormalized));
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            TruncatedSeries::from_real(&[1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
    }
}
