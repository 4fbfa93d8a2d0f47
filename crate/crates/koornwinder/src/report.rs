//! Deterministic report structures for verification runs.
//!
//! Reports must serialize to byte-identical output for identical inputs, so
//! every float is rendered through fixed-format decimal and hexfloat strings,
//! maps are ordered, and nothing here reads clocks or environment state.

use crate::params::ParameterSet;
use crate::scalar::format_rat;
use serde::Serialize;

/// C-style hexfloat rendering of an f64 (`0x1.8p+1` and friends). Rust has
/// no `%a` formatter; this one is bit-exact and platform independent.
pub fn f64_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & 0x000f_ffff_ffff_ffff;
    if exp_bits == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 {
        ('0', -1022)
    } else {
        ('1', exp_bits - 1023)
    };
    let mut hex = format!("{mantissa:013x}");
    while hex.len() > 1 && hex.ends_with('0') {
        hex.pop();
    }
    let frac = if mantissa == 0 {
        String::new()
    } else {
        format!(".{hex}")
    };
    format!("{sign}0x{lead}{frac}p{exp:+}")
}

/// Fixed decimal rendering with enough digits to round-trip any f64.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.17e}")
    }
}

/// A float carried in a report as paired decimal and hexfloat strings, which
/// sidesteps JSON number round-tripping entirely.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FloatValue {
    pub dec: String,
    pub hex: String,
}

impl FloatValue {
    pub fn new(x: f64) -> Self {
        Self {
            dec: format_f64(x),
            hex: f64_hex(x),
        }
    }
}

/// Snapshot of the parameter set a run used. `sigma` and `tau` are the
/// square roots the configuration supplies; `t0..t3` are the multiplicative
/// parameters themselves (the squares of the configured `tau0..tau3`), which
/// stay rational even for dual sets.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsSummary {
    pub n: usize,
    pub sigma: String,
    pub tau: String,
    pub t0: String,
    pub t1: String,
    pub t2: String,
    pub t3: String,
    pub nonstandard_range: bool,
    pub fingerprint: String,
}

impl From<&ParameterSet> for ParamsSummary {
    fn from(set: &ParameterSet) -> Self {
        Self {
            n: set.n,
            sigma: format_rat(&set.sqrt_q),
            tau: format_rat(&set.sqrt_t),
            t0: format_rat(&set.t_r[0]),
            t1: format_rat(&set.t_r[1]),
            t2: format_rat(&set.t_r[2]),
            t3: format_rat(&set.t_r[3]),
            nonstandard_range: set.nonstandard_range,
            fingerprint: format!("{:016x}", set.fingerprint()),
        }
    }
}

/// One verified instance of an identity: a labeled left and right hand side
/// with the observed discrepancy.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub discrepancy: String,
    pub pass: bool,
}

impl WitnessRow {
    /// Row for an exact rational comparison; discrepancy is the exact
    /// difference.
    pub fn exact(label: String, lhs: &crate::scalar::Rat, rhs: &crate::scalar::Rat) -> Self {
        let diff = lhs - rhs;
        Self {
            label,
            lhs: format_rat(lhs),
            rhs: format_rat(rhs),
            pass: diff == crate::scalar::rat_int(0),
            discrepancy: format_rat(&diff),
        }
    }

    /// Row for a numeric comparison against a relative tolerance.
    pub fn numeric(label: String, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        let rel = (lhs - rhs).abs() / scale;
        Self {
            label,
            lhs: format_f64(lhs),
            rhs: format_f64(rhs),
            discrepancy: format_f64(rel),
            pass: rel.is_finite() && rel <= rel_tol,
        }
    }

    /// Row for a numeric comparison against an absolute tolerance.
    pub fn numeric_abs(label: String, lhs: f64, rhs: f64, abs_tol: f64) -> Self {
        let diff = (lhs - rhs).abs();
        Self {
            label,
            lhs: format_f64(lhs),
            rhs: format_f64(rhs),
            discrepancy: format_f64(diff),
            pass: diff.is_finite() && diff <= abs_tol,
        }
    }

    /// Row carrying a plain value rather than a comparison (always passes).
    pub fn value(label: String, value: String) -> Self {
        Self {
            label,
            lhs: value,
            rhs: String::new(),
            discrepancy: String::new(),
            pass: true,
        }
    }
}

/// All witnesses gathered for one identity.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub identity: String,
    pub pass: bool,
    /// A failing check marked warning-only does not fail the run.
    pub warning_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub witnesses: Vec<WitnessRow>,
}

impl CheckReport {
    pub fn new(identity: &str, witnesses: Vec<WitnessRow>) -> Self {
        let pass = witnesses.iter().all(|w| w.pass);
        Self {
            identity: identity.to_string(),
            pass,
            warning_only: false,
            note: None,
            witnesses,
        }
    }

    pub fn warning_only(mut self) -> Self {
        self.warning_only = true;
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

/// Top-level report for one CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub max_weight: u64,
    pub params: ParamsSummary,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(
        command: &str,
        seed: u64,
        max_weight: u64,
        params: &ParameterSet,
        checks: Vec<CheckReport>,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass || c.warning_only);
        Self {
            command: command.to_string(),
            seed,
            max_weight,
            params: ParamsSummary::from(params),
            checks,
            pass,
        }
    }

    /// Flat CSV rendering: one row per witness.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,label,lhs,rhs,discrepancy,pass,warning_only\n");
        for check in &self.checks {
            for w in &check.witnesses {
                let row = [
                    check.identity.as_str(),
                    w.label.as_str(),
                    w.lhs.as_str(),
                    w.rhs.as_str(),
                    w.discrepancy.as_str(),
                    if w.pass { "true" } else { "false" },
                    if check.warning_only { "true" } else { "false" },
                ];
                let escaped: Vec<String> = row.iter().map(|f| csv_escape(f)).collect();
                out.push_str(&escaped.join(","));
                out.push('\n');
            }
        }
        out
    }
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
pub fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
