//! `scan-psi`, `optimize`, `coeffs` and `toeplitz`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::report::{format_num, timestamp, to_json, Check, NamedNums, Num, Params, VerificationReport};
use super::{CliError, Output};
use crate::caratheodory::{
    determinant_scale, herglotz_coefficients, toeplitz_determinant, Atom, CaratheodoryPrefix, HerglotzMeasure,
};
use crate::families::{convex_from_kernel, k_coefficients, l_coefficients, starlike_from_kernel, FamilyAngle};
use crate::functionals::{psi_n, GapDirection, GapKind};
use crate::optimize::{
    estimate_vn_with_steps, maximize_gap_herglotz, maximize_gap_kp, maximize_gap_sweep, OptimumReport, PolarGrid,
};
use crate::series::ComplexValue;

// ---------------------------------------------------------------- scan-psi

#[derive(Serialize)]
struct Located {
    phi_over_pi: Num,
    value: Num,
}

#[derive(Serialize)]
struct PsiSidecar {
    command: &'static str,
    parameters: Params,
    /// Refined maximizer of `Psi_n` on `(0, pi)`.
    maximum: Located,
    /// Largest row of the CSV.
    grid_maximum: Located,
    timestamp: String,
}

/// Samples `Psi_n` at `phi / pi = i / (points + 1)`, `i = 1..=points`.
pub fn scan_psi(n: usize, points: usize, out: &Output, sidecar: Option<&Path>) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    if points < 100 {
        return Err(CliError::Usage(format!("--points must be at least 100, got {points}")));
    }
    let mut csv = String::from("phi_over_pi,psi_n\n");
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for i in 1..=points {
        let t = i as f64 / (points + 1) as f64;
        let v = psi_n(n, t * PI)?;
        if v > best.1 {
            best = (t, v);
        }
        csv.push_str(&format!("{},{}\n", format_num(t), format_num(v)));
    }
    out.write(&csv)?;

    let sidecar = match (sidecar, out) {
        (Some(path), _) => path.to_path_buf(),
        (None, Output::File(path)) => path.with_extension("json"),
        (None, Output::Stdout) => return Ok(()),
    };
    // the search covers [0, pi/2]; a multiple of the CSV grid there, so the
    // refinement starts from every tabulated point it can see
    let intervals = (points + 1) * 10_000usize.div_ceil(2 * (points + 1));
    let peak = crate::optimize::psi_n_scan(n, intervals, 4)?;
    let report = PsiSidecar {
        command: "scan-psi",
        parameters: Params::new().int("n", n as u64).int("points", points as u64),
        maximum: Located { phi_over_pi: Num(peak.arg("phi").unwrap_or(f64::NAN) / PI), value: Num(peak.value) },
        grid_maximum: Located { phi_over_pi: Num(best.0), value: Num(best.1) },
        timestamp: timestamp(),
    };
    Output::File(sidecar).write(&to_json(&report))
}

// ---------------------------------------------------------------- optimize

pub struct OptimizeSettings {
    pub direction: GapDirection,
    pub n: usize,
    pub p: Option<f64>,
    pub p_grid: usize,
    pub grid: PolarGrid,
    pub refinements: usize,
    pub atoms: Option<usize>,
    pub restarts: usize,
    pub local_steps: usize,
    pub scan_grid: usize,
    pub seed: u64,
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    command: &'static str,
    /// First so that it cannot be missed: the value bounds the supremum from below only.
    lower_bound_only: bool,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
    parameters: Params,
    method: &'a str,
    value: Num,
    argument: NamedNums<'a>,
    grid_points_evaluated: u64,
    refinement_levels: usize,
    bracket: Option<[Num; 2]>,
    sources: NamedNums<'a>,
    timestamp: String,
}

const HERGLOTZ_NOTE: &str =
    "n >= 4 is outside the LZ chart (it fixes p_1..p_3 only); using the Herglotz search, whose value is a lower bound";

pub fn optimize(s: &OptimizeSettings, out: &Output) -> Result<OptimumReport, CliError> {
    let kind = GapKind::new(s.direction, s.n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut params = Params::new()
        .text("kind", s.direction.name())
        .int("n", s.n as u64)
        .int("refinements", s.refinements as u64);
    let (mode, note, report) = if s.n <= 3 {
        params = params.int("radial", s.grid.radial as u64).int("angular", s.grid.angular as u64);
        match s.p {
            Some(p) => {
                params = params.num("p", p);
                ("lz-chart", None, maximize_gap_kp(kind, p, s.grid, s.refinements)?)
            }
            None => {
                params = params.int("p_grid", s.p_grid as u64);
                ("lz-sweep", None, maximize_gap_sweep(kind, s.p_grid, s.grid, s.refinements)?)
            }
        }
    } else {
        if s.p.is_some() {
            return Err(CliError::Usage("--p is only supported for n <= 3 (LZ chart mode)".into()));
        }
        let atoms = s.atoms.unwrap_or(s.n);
        params = params
            .int("atoms", atoms as u64)
            .int("restarts", s.restarts as u64)
            .int("local_steps", s.local_steps as u64)
            .int("seed", s.seed);
        let report = if s.direction == GapDirection::Down {
            params = params.int("scan_grid", s.scan_grid as u64);
            estimate_vn_with_steps(s.n, s.scan_grid, atoms, s.restarts, s.local_steps, s.seed)?
        } else {
            maximize_gap_herglotz(kind, atoms, s.restarts, s.local_steps, s.seed)?
        };
        ("herglotz", Some(HERGLOTZ_NOTE), report)
    };

    let output = OptimizeOutput {
        command: "optimize",
        lower_bound_only: report.lower_bound_only,
        mode,
        note,
        parameters: params,
        method: &report.method,
        value: Num(report.value),
        argument: NamedNums(&report.argument),
        grid_points_evaluated: report.grid_points_evaluated,
        refinement_levels: report.refinement_levels,
        bracket: report.bracket.map(|(lo, hi)| [Num(lo), Num(hi)]),
        sources: NamedNums(&report.sources),
        timestamp: timestamp(),
    };
    out.write(&to_json(&output))?;
    Ok(report)
}

// ---------------------------------------------------------------- coeffs

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    L,
    K,
    KernelFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Convex,
    Starlike,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    atoms: Vec<KernelAtom>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelAtom {
    gamma: f64,
    phi_over_pi: f64,
}

/// Reads `{"atoms": [{"gamma": .., "phi_over_pi": ..}, ..]}`.
pub fn read_kernel(path: &Path) -> Result<HerglotzMeasure, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parsed: KernelFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let atoms = parsed.atoms.iter().map(|a| Atom { gamma: a.gamma, phi: a.phi_over_pi * PI }).collect();
    HerglotzMeasure::new(atoms).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: 0,
        column: 0,
        message: e.to_string(),
    })
}

pub fn coeffs(
    family: Family,
    angle: Option<FamilyAngle>,
    kernel: Option<&Path>,
    class: Class,
    order: usize,
    out: &Output,
) -> Result<(), CliError> {
    if order < 1 {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    let need_angle = || angle.ok_or_else(|| CliError::Usage("give --phi-over-pi or --arccos".into()));
    let mut csv = String::new();
    match family {
        Family::L | Family::K => {
            let phi = need_angle()?;
            let f = if family == Family::L { l_coefficients(phi, order) } else { k_coefficients(phi, order) };
            csv.push_str("n,coefficient\n");
            for (i, a) in f.as_slice().iter().enumerate() {
                csv.push_str(&format!("{},{}\n", i + 1, format_num(a.re)));
            }
        }
        Family::KernelFile => {
            let path = kernel.ok_or_else(|| CliError::Usage("--family kernel-file needs --kernel".into()))?;
            let m = read_kernel(path)?;
            let p = herglotz_coefficients(&m, order.max(2) - 1)?;
            let f = match class {
                Class::Convex => convex_from_kernel(&p, order)?,
                Class::Starlike => starlike_from_kernel(&p, order)?,
            };
            // complex in general: real part in `coefficient`, imaginary part after it
            csv.push_str("n,coefficient,coefficient_im\n");
            for (i, a) in f.as_slice().iter().enumerate() {
                csv.push_str(&format!("{},{},{}\n", i + 1, format_num(a.re), format_num(a.im)));
            }
        }
    }
    out.write(&csv)
}

// ---------------------------------------------------------------- toeplitz

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Pair([f64; 2]),
    Object { re: f64, im: f64 },
}

impl From<Entry> for ComplexValue {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(re) => ComplexValue::new(re, 0.0),
            Entry::Pair([re, im]) | Entry::Object { re, im } => ComplexValue::new(re, im),
        }
    }
}

/// Reads a JSON list of prefix entries `p_1, p_2, ...`; each entry is a number,
/// a `[re, im]` pair or an `{"re": .., "im": ..}` object.
pub fn read_prefix(path: &Path) -> Result<CaratheodoryPrefix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let entries: Vec<Entry> = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if entries.is_empty() {
        return Err(CliError::Parse { path: path.to_path_buf(), line: 0, column: 0, message: "empty prefix".into() });
    }
    Ok(CaratheodoryPrefix::new(entries.into_iter().map(Into::into).collect()))
}

/// `D_1 ..= D_k` against `D_k >= -tol 2^(k+1)`. A coefficient with `|p_k| > 2`
/// fails immediately and no determinant is computed.
pub fn toeplitz(input: &Path, tol: f64) -> Result<VerificationReport, CliError> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be a non-negative number, got {tol}")));
    }
    let prefix = read_prefix(input)?;
    let params = Params::new().text("in", input.display().to_string()).num("tol", tol).int("k", prefix.len() as u64);
    let checks = if let Some(k) = prefix.modulus_violation(0.0) {
        let modulus = prefix.get(k).map_or(f64::NAN, |p| p.norm());
        vec![Check::at_most(format!("|p_{k}| <= 2"), 2.0, modulus, 0.0)]
    } else {
        (1..=prefix.len())
            .map(|k| {
                let d = toeplitz_determinant(&prefix, k).unwrap_or(f64::NAN);
                let scaled = tol * determinant_scale(k);
                Check::at_least(format!("D_{k} >= 0"), 0.0, d, scaled)
            })
            .collect()
    };
    Ok(VerificationReport::new("toeplitz", params, checks))
}
