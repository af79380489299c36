//! The Carathéodory class: functions `P(z) = 1 + p_1 z + p_2 z^2 + ...` with
//! positive real part on the unit disk.
//!
//! Membership of a coefficient prefix is decided by the Hermitian Toeplitz
//! determinants `D_k`, extreme points are finite atomic Herglotz measures, and
//! the first three coefficients admit the Libera–Złotkiewicz chart `(p, x, y)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::series::{ComplexValue, TruncatedSeries};

const WEIGHT_SUM_TOL: f64 = 1e-12;
const REAL_TOL: f64 = 1e-12;

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(phi: f64) -> f64 {
    let mut t = phi.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t == -PI {
        t = PI;
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub gamma: f64,
    pub phi: f64,
}

/// Convex combination of boundary kernels `(1 + e^{i phi} z) / (1 - e^{i phi} z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzMeasure {
    atoms: Vec<Atom>,
}

impl HerglotzMeasure {
    /// Validates weights and angles. Angles are wrapped into `(-pi, pi]` first.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|a| Atom { gamma: a.gamma, phi: wrap_angle(a.phi) })
            .collect();
        for (j, a) in atoms.iter().enumerate() {
            if !a.gamma.is_finite() || !a.phi.is_finite() {
                return Err(Error::InvalidMeasure(format!("atom {j} is not finite")));
            }
            if a.gamma < 0.0 {
                return Err(Error::InvalidMeasure(format!("atom {j} has negative weight {}", a.gamma)));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.gamma).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if atoms[i].phi == atoms[j].phi {
                    return Err(Error::InvalidMeasure(format!("atoms {i} and {j} share angle {}", atoms[i].phi)));
                }
            }
        }
        Ok(Self { atoms })
    }

    /// Single atom at `phi`.
    pub fn point(phi: f64) -> Self {
        Self { atoms: vec![Atom { gamma: 1.0, phi: wrap_angle(phi) }] }
    }

    /// Random measure with the given atom count: angles uniform on `(-pi, pi]`,
    /// weights uniform on the simplex.
    pub fn random_with_atoms<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Self {
        let count = count.max(1);
        loop {
            let raw: Vec<f64> = (0..count).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = raw.iter().sum();
            let atoms = raw
                .iter()
                .map(|w| Atom { gamma: w / total, phi: PI - 2.0 * PI * rng.random::<f64>() })
                .collect();
            // collisions and a zero total are measure-zero events; redraw
            if total > 0.0 {
                if let Ok(m) = Self::new(atoms) {
                    return m;
                }
            }
        }
    }

    /// Random measure with between 1 and `max_atoms` atoms (uniform count).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> Self {
        let count = rng.random_range(1..=max_atoms.max(1));
        Self::random_with_atoms(rng, count)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
}

/// `1 + sum p_n z^n` with `p_n = 2 sum_j gamma_j e^{i n phi_j}`.
pub fn herglotz_coefficients(m: &HerglotzMeasure, order: usize) -> Result<TruncatedSeries> {
    if order < 1 {
        return Err(Error::Index { index: order as i64, min: 1 });
    }
    let mut coeffs = vec![ComplexValue::new(0.0, 0.0); order + 1];
    coeffs[0] = ComplexValue::new(1.0, 0.0);
    for atom in &m.atoms {
        let eps = ComplexValue::from_polar(1.0, atom.phi);
        let mut power = eps;
        for c in coeffs.iter_mut().skip(1) {
            *c += 2.0 * atom.gamma * power;
            power *= eps;
        }
    }
    TruncatedSeries::new(coeffs)
}

/// Coefficients `p_1 ..= p_n` of a (candidate) Carathéodory function.
#[derive(Debug, Clone, PartialEq)]
pub struct CaratheodoryPrefix {
    p: Vec<ComplexValue>,
}

impl CaratheodoryPrefix {
    /// Wraps a candidate prefix. No membership check happens here; use
    /// [`is_caratheodory_prefix`] or [`CaratheodoryPrefix::modulus_violation`].
    pub fn new(p: Vec<ComplexValue>) -> Self {
        Self { p }
    }

    pub fn from_real(p: &[f64]) -> Self {
        Self { p: p.iter().map(|&v| ComplexValue::new(v, 0.0)).collect() }
    }

    /// `p_1 ..= p_N` of a kernel `1 + p_1 z + ...`.
    pub fn from_kernel(kernel: &TruncatedSeries) -> Self {
        Self { p: kernel.coeffs()[1..].to_vec() }
    }

    /// The kernel `1 + sum p_k z^k` of matching order.
    pub fn to_kernel(&self) -> TruncatedSeries {
        let mut c = Vec::with_capacity(self.p.len() + 1);
        c.push(ComplexValue::new(1.0, 0.0));
        c.extend_from_slice(&self.p);
        TruncatedSeries::new(c).expect("prefix entries are finite")
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `p_k` with 1-based index.
    pub fn get(&self, k: usize) -> Option<ComplexValue> {
        k.checked_sub(1).and_then(|i| self.p.get(i)).copied()
    }

    pub fn as_slice(&self) -> &[ComplexValue] {
        &self.p
    }

    /// First 1-based index with `|p_k| > 2 + tol`.
    pub fn modulus_violation(&self, tol: f64) -> Option<usize> {
        self.p.iter().position(|c| c.norm() > 2.0 + tol).map(|i| i + 1)
    }
}

/// Determinant of an `m x m` complex matrix (row-major) by Gaussian
/// elimination with partial pivoting.
fn complex_determinant(mut a: Vec<ComplexValue>, m: usize) -> ComplexValue {
    let mut det = ComplexValue::new(1.0, 0.0);
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i * m + col].norm().total_cmp(&a[j * m + col].norm()))
            .unwrap();
        let pv = a[pivot * m + col];
        if pv.norm() == 0.0 {
            return ComplexValue::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..m {
                a.swap(col * m + k, pivot * m + k);
            }
            det = -det;
        }
        det *= pv;
        for row in col + 1..m {
            let factor = a[row * m + col] / pv;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..m {
                let v = a[col * m + k];
                a[row * m + k] -= factor * v;
            }
        }
    }
    det
}

/// `D_n`: determinant of the `(n+1) x (n+1)` Hermitian Toeplitz matrix with 2 on
/// the diagonal, `p_j` on the j-th superdiagonal and `conj(p_j)` below.
pub fn toeplitz_determinant(prefix: &CaratheodoryPrefix, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Index { index: n as i64, min: 1 });
    }
    if n > prefix.len() {
        return Err(Error::Length { needed: n, found: prefix.len() });
    }
    let m = n + 1;
    let entry = |j: isize| -> ComplexValue {
        match j {
            0 => ComplexValue::new(2.0, 0.0),
            j if j > 0 => prefix.p[j as usize - 1],
            j => prefix.p[(-j) as usize - 1].conj(),
        }
    };
    let mut a = Vec::with_capacity(m * m);
    for row in 0..m {
        for col in 0..m {
            a.push(entry(col as isize - row as isize));
        }
    }
    // the determinant of a Hermitian matrix is real; the imaginary part is rounding
    Ok(complex_determinant(a, m).re)
}

/// Scale of `D_k` for the zero prefix, used to make tolerances relative.
pub fn determinant_scale(k: usize) -> f64 {
    2f64.powi(k as i32 + 1)
}

/// First `k` (with its determinant) where `D_k < -tol * 2^{k+1}`.
pub fn first_infeasible(prefix: &CaratheodoryPrefix, tol: f64) -> Option<(usize, f64)> {
    (1..=prefix.len()).find_map(|k| {
        let d = toeplitz_determinant(prefix, k).expect("k within prefix length");
        (d < -tol * determinant_scale(k) || d.is_nan()).then_some((k, d))
    })
}

/// Toeplitz feasibility of the whole prefix, relative tolerance `tol`.
pub fn is_caratheodory_prefix(prefix: &CaratheodoryPrefix, tol: f64) -> bool {
    first_infeasible(prefix, tol).is_none()
}

/// Chart coordinates for `(p_1, p_2, p_3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzParams {
    pub p: f64,
    pub x: ComplexValue,
    pub y: ComplexValue,
    /// Set when `|x| = 1`; `y` carries no information then.
    pub degenerate_y: bool,
}

impl LzParams {
    const MODULUS_TOL: f64 = 1e-12;

    pub fn new(p: f64, x: ComplexValue, y: ComplexValue) -> Result<Self> {
        if !(p.is_finite() && p.abs() <= 2.0) {
            return Err(Error::Domain { what: "p", value: p, range: "[-2, 2]" });
        }
        if !(x.norm() <= 1.0 + Self::MODULUS_TOL) {
            return Err(Error::Domain { what: "|x|", value: x.norm(), range: "[0, 1]" });
        }
        if !(y.norm() <= 1.0 + Self::MODULUS_TOL) {
            return Err(Error::Domain { what: "|y|", value: y.norm(), range: "[0, 1]" });
        }
        let degenerate_y = x.norm() >= 1.0 - Self::MODULUS_TOL;
        Ok(Self { p, x, y, degenerate_y })
    }
}

/// `(p_1, p_2, p_3)` from the chart:
/// `2 p_2 = p^2 + x (4 - p^2)`,
/// `4 p_3 = p^3 + 2 (4 - p^2) p x - p (4 - p^2) x^2 + 2 (4 - p^2)(1 - |x|^2) y`.
pub fn lz_expand(params: &LzParams) -> CaratheodoryPrefix {
    let LzParams { p, x, y, .. } = *params;
    let q = 4.0 - p * p;
    let p1 = ComplexValue::new(p, 0.0);
    let p2 = (p * p + x * q) / 2.0;
    let p3 = (p * p * p + 2.0 * q * p * x - p * q * x * x + 2.0 * q * (1.0 - x.norm_sqr()) * y) / 4.0;
    CaratheodoryPrefix { p: vec![p1, p2, p3] }
}

/// Inverse of [`lz_expand`] on feasible prefixes with real `p_1`, `|p_1| < 2`.
pub fn lz_recover(prefix: &CaratheodoryPrefix) -> Result<LzParams> {
    const FEASIBILITY_TOL: f64 = 1e-9;
    if prefix.len() < 3 {
        return Err(Error::Length { needed: 3, found: prefix.len() });
    }
    let head = CaratheodoryPrefix { p: prefix.p[..3].to_vec() };
    let p1 = head.p[0];
    if p1.im.abs() > REAL_TOL || p1.re.abs() > 2.0 + REAL_TOL {
        return Err(Error::Domain { what: "p1", value: p1.re, range: "real in [-2, 2]" });
    }
    let p = p1.re.clamp(-2.0, 2.0);
    let q = 4.0 - p * p;
    if q < REAL_TOL {
        return Err(Error::ChartDegenerate);
    }
    if let Some((k, determinant)) = first_infeasible(&head, FEASIBILITY_TOL) {
        return Err(Error::Infeasible { k, determinant });
    }
    let (p2, p3) = (head.p[1], head.p[2]);
    let mut x = (2.0 * p2 - p * p) / q;
    if x.norm() > 1.0 {
        x /= x.norm();
    }
    if x.norm() >= 1.0 - LzParams::MODULUS_TOL {
        return Ok(LzParams { p, x, y: ComplexValue::new(0.0, 0.0), degenerate_y: true });
    }
    let mut y = (4.0 * p3 - p * p * p - 2.0 * q * p * x + p * q * x * x) / (2.0 * q * (1.0 - x.norm_sqr()));
    if y.norm() > 1.0 {
        y /= y.norm();
    }
    Ok(LzParams { p, x, y, degenerate_y: false })
}

/// Coefficients of `(1 - z^2) / (1 - p_1 z + z^2)`: `p_n = 2 cos(n arccos(p_1 / 2))`.
pub fn d2_extremal_kernel(p1: f64, order: usize) -> Result<TruncatedSeries> {
    if !(p1.is_finite() && p1.abs() <= 2.0) {
        return Err(Error::Domain { what: "p1", value: p1, range: "[-2, 2]" });
    }
    let phi = (p1 / 2.0).acos();
    let coeffs = (0..=order)
        .map(|n| {
            let v = if n == 0 { 1.0 } else { 2.0 * (n as f64 * phi).cos() };
            ComplexValue::new(v, 0.0)
        })
        .collect();
    TruncatedSeries::new(coeffs)
}
