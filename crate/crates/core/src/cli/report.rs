//! JSON/CSV plumbing shared by the subcommands.

use std::collections::BTreeMap;
use std::env;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

/// Formats a double with 17 significant digits, which round-trips exactly.
/// Positional notation is used for decimal exponents in `-5..17`.
pub fn format_num(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

/// A JSON number written with [`format_num`]; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// Named numbers serialized as a JSON object in insertion order.
pub struct NamedNums<'a>(pub &'a [(String, f64)]);

impl Serialize for NamedNums<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, &Num(*v))?;
        }
        map.end()
    }
}

/// Command parameters, echoed into every report (sorted by key).
#[derive(Debug, Default, Serialize)]
pub struct Params(BTreeMap<String, Box<RawValue>>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    fn insert(mut self, key: &str, json: String) -> Self {
        self.0.insert(key.into(), RawValue::from_string(json).expect("valid JSON fragment"));
        self
    }

    pub fn text(self, key: &str, value: impl Into<String>) -> Self {
        let json = serde_json::to_string(&value.into()).expect("strings serialize");
        self.insert(key, json)
    }

    pub fn int(self, key: &str, value: u64) -> Self {
        self.insert(key, value.to_string())
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        let json = if value.is_finite() { format_num(value) } else { "null".into() };
        self.insert(key, json)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Num,
    pub actual: Num,
    pub tolerance: Num,
    pub status: Status,
}

impl Check {
    /// `|actual - expected| <= tolerance`.
    pub fn close(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let ok = (actual - expected).abs() <= tolerance;
        Self::with(name, expected, actual, tolerance, ok)
    }

    /// `actual <= bound + tolerance`.
    pub fn at_most(name: impl Into<String>, bound: f64, actual: f64, tolerance: f64) -> Self {
        let ok = actual <= bound + tolerance;
        Self::with(name, bound, actual, tolerance, ok)
    }

    /// `actual >= bound - tolerance`.
    pub fn at_least(name: impl Into<String>, bound: f64, actual: f64, tolerance: f64) -> Self {
        let ok = actual >= bound - tolerance;
        Self::with(name, bound, actual, tolerance, ok)
    }

    /// A check whose outcome was decided elsewhere (e.g. an error was raised).
    pub fn with(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64, ok: bool) -> Self {
        // NaN never passes
        let ok = ok && !actual.is_nan();
        Self {
            name: name.into(),
            expected: Num(expected),
            actual: Num(actual),
            tolerance: Num(tolerance),
            status: Status::from_bool(ok),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub parameters: Params,
    pub checks: Vec<Check>,
    pub overall: Status,
    pub timestamp: String,
}

impl VerificationReport {
    pub fn new(command: &str, parameters: Params, checks: Vec<Check>) -> Self {
        let overall = Status::from_bool(checks.iter().all(Check::passed));
        Self { command: command.into(), parameters, checks, overall, timestamp: timestamp() }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    /// One line per check, for humans.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} {}: actual {} (expected {})\n", c.name, format_num(c.actual.0), format_num(c.expected.0)));
        }
        s.push_str(&format!("overall: {}\n", if self.passed() { "pass" } else { "fail" }));
        s
    }
}

/// RFC 3339 UTC timestamp; honours `SOURCE_DATE_EPOCH` for reproducible output.
pub fn timestamp() -> String {
    let fixed = env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    fixed.unwrap_or_else(Utc::now).to_rfc3339_opts(SecondsFormat::Secs, true)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
