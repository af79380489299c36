//! Scalar functionals on coefficient data: successive-coefficient gaps, the
//! disk maximum `Y(a, b, c)`, the pointwise bounds over `K(p)`, `Psi_n`,
//! Leung's functional, Robertson's ratio, the `F` margin and a few constants.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::families::{coeff_l, l_coefficients, FamilyAngle, SchlichtCoefficients};
use crate::series::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapDirection {
    /// `|a_{n+1}| - |a_n|`
    Up,
    /// `|a_n| - |a_{n+1}|`
    Down,
    /// `|a_{n+1} - a_n|`
    Diff,
}

impl GapDirection {
    pub fn name(self) -> &'static str {
        match self {
            GapDirection::Up => "up",
            GapDirection::Down => "down",
            GapDirection::Diff => "diff",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GapKind {
    direction: GapDirection,
    n: usize,
}

impl GapKind {
    pub fn new(direction: GapDirection, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Index { index: n as i64, min: 2 });
        }
        Ok(Self { direction, n })
    }

    pub fn up(n: usize) -> Result<Self> {
        Self::new(GapDirection::Up, n)
    }

    pub fn down(n: usize) -> Result<Self> {
        Self::new(GapDirection::Down, n)
    }

    pub fn diff(n: usize) -> Result<Self> {
        Self::new(GapDirection::Diff, n)
    }

    pub fn direction(self) -> GapDirection {
        self.direction
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Applies the functional to `(a_n, a_{n+1})`.
    pub fn apply(self, an: ComplexValue, an1: ComplexValue) -> f64 {
        match self.direction {
            GapDirection::Up => an1.norm() - an.norm(),
            GapDirection::Down => an.norm() - an1.norm(),
            GapDirection::Diff => (an1 - an).norm(),
        }
    }
}

pub fn gap(f: &SchlichtCoefficients, kind: GapKind) -> Result<f64> {
    let n = kind.n;
    match (f.get(n), f.get(n + 1)) {
        (Some(an), Some(an1)) => Ok(kind.apply(an, an1)),
        _ => Err(Error::Length { needed: n + 1, found: f.len() }),
    }
}

/// Closed form of `max_{|z| <= 1} (|a + b z + c z^2| + 1 - |z|^2)` for `a, c >= 0`.
pub fn y_closed(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::Domain { what: "a", value: a, range: "[0, inf)" });
    }
    if !(c >= 0.0) {
        return Err(Error::Domain { what: "c", value: c, range: "[0, inf)" });
    }
    if b.abs() >= 2.0 * (1.0 - c) {
        Ok(a + b.abs() + c)
    } else {
        Ok(1.0 + a + b * b / (4.0 * (1.0 - c)))
    }
}

/// Grid maximum of `|a + b z + c z^2| + 1 - |z|^2` over `z = r e^{i theta}`,
/// `r = i / (radial - 1)` (both `0` and the unit circle included) and
/// `theta = 2 pi j / angular`.
pub fn y_bruteforce(a: f64, b: f64, c: f64, radial: usize, angular: usize) -> Result<f64> {
    if radial < 64 || angular < 64 {
        return Err(Error::Settings(format!("grid {radial}x{angular} is below the 64x64 minimum")));
    }
    let dirs: Vec<ComplexValue> = (0..angular)
        .map(|j| ComplexValue::from_polar(1.0, 2.0 * PI * j as f64 / angular as f64))
        .collect();
    let mut best = f64::NEG_INFINITY;
    for i in 0..radial {
        let r = i as f64 / (radial - 1) as f64;
        let tail = 1.0 - r * r;
        for d in &dirs {
            let z = d * r;
            // left-to-right as written, so that at z = +-1 the sum rounds exactly like a + |b| + c
            let v = (a + b * z + c * (z * z)).norm() + tail;
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

fn check_unit_p(p: f64) -> Result<()> {
    if (0.0..=2.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain { what: "p", value: p, range: "[0, 2]" })
    }
}

/// Sharp bound of `|a_4 - a_3|` over `K(p)`.
pub fn psi_bound(p: f64) -> Result<f64> {
    check_unit_p(p)?;
    if p < 8.0 / 7.0 {
        Ok((((p + 50.0) * p - 64.0) * p + 64.0) / 192.0)
    } else {
        Ok((2.0 - p) * (3.0 * p * p + 2.0 * p - 2.0) / 12.0)
    }
}

/// Sharp bound of `|a_3 - a_2|` over `K(p)`.
pub fn a3_a2_bound(p: f64) -> Result<f64> {
    check_unit_p(p)?;
    Ok((2.0 * p + 1.0) * (2.0 - p) / 6.0)
}

/// `Psi_n(phi) = |a_n(L_phi)| - |a_{n+1}(L_phi)|`.
pub fn psi_n(n: usize, phi: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Index { index: n as i64, min: 2 });
    }
    let phi = FamilyAngle::new(phi)?;
    Ok(coeff_l(phi, n)?.abs() - coeff_l(phi, n + 1)?.abs())
}

/// `(n + 1)|a_{n+1}| - n |a_n|`, which lies in `[-1, 1]` for convex `f`.
pub fn theorem_a_gap(f: &SchlichtCoefficients, n: usize) -> Result<f64> {
    match (f.get(n), f.get(n + 1)) {
        (Some(an), Some(an1)) if n >= 1 => Ok((n + 1) as f64 * an1.norm() - n as f64 * an.norm()),
        _ => Err(Error::Length { needed: n + 1, found: f.len() }),
    }
}

/// `(a_{n+1}(L_phi) - a_n(L_phi)) / (a_2(L_phi) - 1)`, tending to `(2n + 1)/3` as `phi -> 0`.
pub fn robertson_ratio(phi: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Index { index: n as i64, min: 2 });
    }
    let f = l_coefficients(FamilyAngle::new(phi)?, n + 1);
    let a2 = f.get(2).unwrap().re;
    let denom = a2 - 1.0;
    if denom.abs() < 1e-12 {
        return Err(Error::Degenerate("a_2(L_phi) = 1"));
    }
    Ok((f.get(n + 1).unwrap().re - f.get(n).unwrap().re) / denom)
}

/// `F(-|z|) - F(z)` where `F(z) = |u + v z| - |a + b z - c z^2|` with
/// `u = 6p^2/(4-p^2)`, `v = 2`, `a = 3p^3/(4-p^2)`, `b = 5p/2`, `c = p/2`.
/// Non-negative on the closed disk for `4/3 <= p <= sqrt 2`.
pub fn lemma_f_margin(p: f64, z: ComplexValue) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    let (lo, hi) = (4.0 / 3.0, std::f64::consts::SQRT_2);
    if !(p >= lo - SLACK && p <= hi + SLACK) {
        return Err(Error::Domain { what: "p", value: p, range: "[4/3, sqrt 2]" });
    }
    if !(z.norm() <= 1.0 + SLACK) {
        return Err(Error::Domain { what: "|z|", value: z.norm(), range: "[0, 1]" });
    }
    let p = p.clamp(lo, hi);
    let q = 4.0 - p * p;
    let (u, v) = (6.0 * p * p / q, 2.0);
    let (a, b, c) = (3.0 * p * p * p / q, 2.5 * p, 0.5 * p);
    let f = |w: ComplexValue| (u + v * w).norm() - (a + b * w - c * w * w).norm();
    Ok(f(ComplexValue::new(-z.norm(), 0.0)) - f(z))
}

/// `H(x) = 1 - x - cos(pi x)`.
pub fn h_poly(x: f64) -> f64 {
    1.0 - x - (PI * x).cos()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaymanConstants {
    /// Root of `4 lambda e^{-lambda} = 1` in `(0, 1)`.
    pub lambda0: f64,
    /// `3/4 + e^{-lambda0} (2 e^{-lambda0} - 1)`.
    pub s_bound: f64,
}

/// Bisection on a sign-changing bracket until the bracket is narrower than `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn hayman_constants() -> HaymanConstants {
    let lambda0 = bisect(|l| 4.0 * l * (-l).exp() - 1.0, 0.0, 1.0, 1e-12).expect("sign change on (0, 1)");
    let e = (-lambda0).exp();
    HaymanConstants { lambda0, s_bound: 0.75 + e * (2.0 * e - 1.0) }
}
