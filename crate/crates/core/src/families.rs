//! Normalized convex and starlike functions generated from Carathéodory kernels,
//! and the closed-form families `L_phi` (convex) and `K_phi = z L_phi'` (starlike).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::{ComplexValue, TruncatedSeries};

const KERNEL_NORMALIZATION_TOL: f64 = 1e-12;
/// Below this `|sin phi|` the ratio formulas switch to their limits.
const SIN_CUTOFF: f64 = 1e-9;

/// Coefficients `a_1 ..= a_N` of `f(z) = z + a_2 z^2 + ...`, with `a_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchlichtCoefficients {
    a: Vec<ComplexValue>,
}

impl SchlichtCoefficients {
    /// `a` lists `a_1 ..= a_N`; `a_1` must equal 1.
    pub fn new(a: Vec<ComplexValue>) -> Result<Self> {
        match a.first() {
            Some(a1) if (a1 - 1.0).norm() <= KERNEL_NORMALIZATION_TOL => Ok(Self { a }),
            _ => Err(Error::NotNormalized),
        }
    }

    pub fn from_real(a: &[f64]) -> Result<Self> {
        Self::new(a.iter().map(|&v| ComplexValue::new(v, 0.0)).collect())
    }

    /// Reads `c_1 ..= c_N` of a normalized series `c_0 = 0, c_1 = 1`.
    pub fn from_series(f: &TruncatedSeries) -> Result<Self> {
        if f.order() < 1 || f.coeffs()[0].norm() > KERNEL_NORMALIZATION_TOL {
            return Err(Error::NotNormalized);
        }
        Self::new(f.coeffs()[1..].to_vec())
    }

    pub fn to_series(&self) -> TruncatedSeries {
        let mut c = Vec::with_capacity(self.a.len() + 1);
        c.push(ComplexValue::new(0.0, 0.0));
        c.extend_from_slice(&self.a);
        TruncatedSeries::new(c).expect("finite coefficients")
    }

    /// `a_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<ComplexValue> {
        n.checked_sub(1).and_then(|i| self.a.get(i)).copied()
    }

    /// Number of stored coefficients `N`.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn as_slice(&self) -> &[ComplexValue] {
        &self.a
    }
}

/// Angle parameter of `L_phi` and `K_phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyAngle(f64);

impl FamilyAngle {
    pub fn new(phi: f64) -> Result<Self> {
        if phi.is_finite() {
            Ok(Self(phi))
        } else {
            Err(Error::Domain { what: "phi", value: phi, range: "finite reals" })
        }
    }

    pub fn from_over_pi(t: f64) -> Result<Self> {
        Self::new(t * PI)
    }

    /// `phi = arccos(c)` for `c` in `[-1, 1]`.
    pub fn from_arccos(c: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&c) {
            return Err(Error::Domain { what: "cos phi", value: c, range: "[-1, 1]" });
        }
        Ok(Self(c.acos()))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

fn check_kernel(p: &TruncatedSeries) -> Result<()> {
    let p0 = p.coeffs()[0];
    if (p0 - 1.0).norm() > KERNEL_NORMALIZATION_TOL {
        return Err(Error::KernelNotNormalized { found: format!("{p0}") });
    }
    Ok(())
}

/// Solves `f' + z f'' = P f'` coefficientwise: matching `z^{n-1}` gives
/// `n (n - 1) a_n = sum_{k=1}^{n-1} k a_k p_{n-k}`.
///
/// Returns `a_1 ..= a_order`, or fewer when the kernel is shorter than `order - 1`.
pub fn convex_from_kernel(p: &TruncatedSeries, order: usize) -> Result<SchlichtCoefficients> {
    check_kernel(p)?;
    let n_max = order.min(p.order() + 1).max(1);
    let pc = p.coeffs();
    let mut a = Vec::with_capacity(n_max);
    a.push(ComplexValue::new(1.0, 0.0));
    for n in 2..=n_max {
        let s: ComplexValue = (1..n).map(|k| a[k - 1] * pc[n - k] * k as f64).sum();
        a.push(s / (n * (n - 1)) as f64);
    }
    Ok(SchlichtCoefficients { a })
}

/// Solves `z f' = P f`: `(n - 1) a_n = sum_{k=1}^{n-1} a_k p_{n-k}`.
pub fn starlike_from_kernel(p: &TruncatedSeries, order: usize) -> Result<SchlichtCoefficients> {
    check_kernel(p)?;
    let n_max = order.min(p.order() + 1).max(1);
    let pc = p.coeffs();
    let mut a = Vec::with_capacity(n_max);
    a.push(ComplexValue::new(1.0, 0.0));
    for n in 2..=n_max {
        let s: ComplexValue = (1..n).map(|k| a[k - 1] * pc[n - k]).sum();
        a.push(s / (n - 1) as f64);
    }
    Ok(SchlichtCoefficients { a })
}

/// `sin(n phi) / sin(phi)`, with the limits `n` and `n (-1)^{n+1}` at `phi = 0, pi`.
fn sine_ratio(phi: f64, n: usize) -> f64 {
    let s = phi.sin();
    if s.abs() < SIN_CUTOFF {
        let sign = if phi.cos() > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        return sign * n as f64;
    }
    (n as f64 * phi).sin() / s
}

/// `a_n(L_phi) = sin(n phi) / (n sin phi)`.
pub fn coeff_l(phi: FamilyAngle, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Index { index: 0, min: 1 });
    }
    Ok(sine_ratio(phi.0, n) / n as f64)
}

/// `a_n(K_phi) = sin(n phi) / sin phi`.
pub fn coeff_k(phi: FamilyAngle, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Index { index: 0, min: 1 });
    }
    Ok(sine_ratio(phi.0, n))
}

/// `a_1 ..= a_order` of `L_phi`.
pub fn l_coefficients(phi: FamilyAngle, order: usize) -> SchlichtCoefficients {
    let a = (1..=order.max(1))
        .map(|n| ComplexValue::new(sine_ratio(phi.0, n) / n as f64, 0.0))
        .collect();
    SchlichtCoefficients { a }
}

/// `a_1 ..= a_order` of `K_phi`.
pub fn k_coefficients(phi: FamilyAngle, order: usize) -> SchlichtCoefficients {
    let a = (1..=order.max(1))
        .map(|n| ComplexValue::new(sine_ratio(phi.0, n), 0.0))
        .collect();
    SchlichtCoefficients { a }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::d2_extremal_kernel;

    fn angle(t: f64) -> FamilyAngle {
        FamilyAngle::from_over_pi(t).unwrap()
    }

    fn assert_real_coeffs(f: &SchlichtCoefficients, want: &[f64], tol: f64) {
        assert!(f.len() >= want.len());
        for (n, w) in want.iter().enumerate() {
            let got = f.get(n + 1).unwrap();
            assert!((got - w).norm() <= tol, "a_{} = {got}, want {w}", n + 1);
        }
    }

    #[test]
    fn convex_examples() {
        let p0 = TruncatedSeries::from_real(&[1.0, 2.0, 2.0, 2.0, 2.0, 2.0]).unwrap();
        assert_real_coeffs(&convex_from_kernel(&p0, 6).unwrap(), &[1.0; 6], 1e-15);
        let one = TruncatedSeries::one(6);
        assert_real_coeffs(&convex_from_kernel(&one, 7).unwrap(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 0.0);
        let k = d2_extremal_kernel(1.0, 5).unwrap();
        assert_real_coeffs(&convex_from_kernel(&k, 4).unwrap(), &[1.0, 0.5, 0.0, -0.25], 1e-15);
    }

    #[test]
    fn starlike_examples() {
        let p0 = TruncatedSeries::from_real(&[1.0, 2.0, 2.0, 2.0, 2.0, 2.0]).unwrap();
        assert_real_coeffs(&starlike_from_kernel(&p0, 6).unwrap(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 1e-14);
        assert_real_coeffs(&starlike_from_kernel(&TruncatedSeries::one(4), 5).unwrap(), &[1.0, 0.0, 0.0, 0.0, 0.0], 0.0);
        let k = d2_extremal_kernel(2f64.sqrt(), 10).unwrap();
        let f = starlike_from_kernel(&k, 10).unwrap();
        let want: Vec<f64> = (1..=10).map(|n| (n as f64 * PI / 4.0).sin() / (PI / 4.0).sin()).collect();
        assert_real_coeffs(&f, &want, 1e-12);
    }

    #[test]
    fn kernel_must_be_normalized() {
        let bad = TruncatedSeries::from_real(&[2.0, 1.0]).unwrap();
        assert!(matches!(convex_from_kernel(&bad, 3), Err(Error::KernelNotNormalized { .. })));
        assert!(matches!(starlike_from_kernel(&bad, 3), Err(Error::KernelNotNormalized { .. })));
    }

    #[test]
    fn short_kernel_truncates() {
        let p = TruncatedSeries::from_real(&[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(convex_from_kernel(&p, 10).unwrap().len(), 3);
    }

    #[test]
    fn low_order_closed_forms() {
        // a_2 = p1/2, a_3 = (p1^2 + p2)/6, a_4 = (p1^3 + 3 p1 p2 + 2 p3)/24
        let p = [ComplexValue::new(0.3, -1.1), ComplexValue::new(-0.7, 0.2), ComplexValue::new(1.3, 0.9)];
        let kernel = TruncatedSeries::new(vec![ComplexValue::new(1.0, 0.0), p[0], p[1], p[2]]).unwrap();
        let f = convex_from_kernel(&kernel, 4).unwrap();
        assert!((f.get(2).unwrap() - p[0] / 2.0).norm() < 1e-15);
        assert!((f.get(3).unwrap() - (p[0] * p[0] + p[1]) / 6.0).norm() < 1e-15);
        let a4 = (p[0] * p[0] * p[0] + 3.0 * p[0] * p[1] + 2.0 * p[2]) / 24.0;
        assert!((f.get(4).unwrap() - a4).norm() < 1e-15);
    }

    #[test]
    fn coeff_l_examples() {
        for n in 1..8 {
            assert_eq!(coeff_l(angle(0.0), n).unwrap(), 1.0);
        }
        assert!((coeff_l(angle(1.0 / 3.0), 2).unwrap() - 0.5).abs() < 1e-15);
        assert!(coeff_l(angle(1.0 / 3.0), 3).unwrap().abs() < 1e-15);
        assert!((coeff_l(angle(1.0 / 3.0), 4).unwrap() + 0.25).abs() < 1e-15);
        assert!((coeff_l(angle(0.25), 3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(coeff_l(angle(0.25), 4).unwrap().abs() < 1e-15);
        // phi = pi: z/(1+z) up to sign pattern
        for n in 1..8 {
            let want = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(coeff_l(angle(1.0), n).unwrap(), want);
            assert_eq!(coeff_l(angle(-1.0), n).unwrap(), want);
        }
        assert_eq!(coeff_l(angle(0.5), 0), Err(Error::Index { index: 0, min: 1 }));
    }

    #[test]
    fn coeff_k_examples() {
        for n in 1..8 {
            assert_eq!(coeff_k(angle(0.0), n).unwrap(), n as f64);
            assert_eq!(coeff_k(angle(2.0), n).unwrap(), n as f64);
        }
        for (n, want) in [1.0, 0.0, -1.0, 0.0, 1.0].iter().enumerate() {
            assert!((coeff_k(angle(0.5), n + 1).unwrap() - want).abs() < 1e-15);
        }
        assert_eq!(coeff_k(angle(0.5), 0), Err(Error::Index { index: 0, min: 1 }));
    }

    #[test]
    fn k_is_n_times_l() {
        for i in 0..40 {
            let phi = FamilyAngle::new(-3.0 + 0.17 * i as f64).unwrap();
            for n in 1..=20 {
                let k = coeff_k(phi, n).unwrap();
                let l = coeff_l(phi, n).unwrap();
                assert!((k - n as f64 * l).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn family_angle_constructors() {
        assert!((FamilyAngle::from_arccos(0.5).unwrap().radians() - PI / 3.0).abs() < 1e-15);
        assert!(FamilyAngle::from_arccos(1.5).is_err());
        assert!(FamilyAngle::new(f64::INFINITY).is_err());
    }
}
