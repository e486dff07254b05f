//! Reports: a serializable form for `--machine` and a text rendering.

use std::fmt::Write;

use qchan_core::suites::SuiteReport;
use qchan_core::{Certificate, Tolerance, Verdict, Witness};
use serde::Serialize;
use serde_json::Value;

/// Values below this magnitude print as `0` in text reports.
pub const SNAP: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub command: &'static str,
    pub version: &'static str,
    pub tolerances: Tolerance,
    pub seed: u64,
    pub prng: &'static str,
}

impl Header {
    pub fn new(command: &'static str, tol: Tolerance, seed: u64) -> Self {
        Self {
            tool: "qchan",
            command,
            version: qchan_core::VERSION,
            tolerances: tol,
            seed,
            prng: qchan_core::zoo::PRNG_ALGORITHM,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub label: &'static str,
    pub description: &'static str,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    /// Requested analysis name, e.g. `cstar-extreme`.
    pub analysis: &'static str,
    pub certificate: Certificate,
    /// The Choi-projection equivalence bundle, when it ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Vec<ConditionReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub file: String,
    pub sha256: String,
    pub kind: &'static str,
    pub d_in: usize,
    pub d_out: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub analyses: Vec<Analysis>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    /// Sorted by digest.
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

fn depth(v: &Value) -> usize {
    match v {
        Value::Array(xs) => 1 + xs.iter().map(depth).max().unwrap_or(0),
        // Objects never go inline.
        Value::Object(_) => usize::MAX / 2,
        _ => 0,
    }
}

fn write_inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(x, out);
            }
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn write_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_pretty(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(xs) if depth(v) > 2 && !xs.is_empty() => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_pretty(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        _ => write_inline(v, out),
    }
}

/// Pretty JSON that keeps matrix rows (arrays of `[re, im]` pairs) on one line.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_pretty(v, 0, &mut out);
    out.push('\n');
    out
}

/// Short decimal or scientific form, with noise snapped to `0`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < SNAP {
        return "0".into();
    }
    if (1e-3..1e4).contains(&x.abs()) {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        return s.to_string();
    }
    format!("{x:.3e}")
}

/// Rewrites scientific-notation numbers inside free text through [`fmt_num`].
pub fn snap_numbers(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let mut j = i;
        if j < bytes.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
            j += 1;
        }
        let digits = |j: &mut usize| {
            let s = *j;
            while *j < bytes.len() && bytes[*j].is_ascii_digit() {
                *j += 1;
            }
            *j > s
        };
        let preceded = start > 0 && (bytes[start - 1].is_ascii_alphanumeric() || bytes[start - 1] == b'.');
        if !preceded && digits(&mut j) {
            if j < bytes.len() && bytes[j] == b'.' {
                j += 1;
                digits(&mut j);
            }
            if j < bytes.len() && bytes[j] == b'e' {
                let mut k = j + 1;
                if k < bytes.len() && (bytes[k] == b'-' || bytes[k] == b'+') {
                    k += 1;
                }
                if digits(&mut k) {
                    if let Ok(x) = text[start..k].parse::<f64>() {
                        out.push_str(&fmt_num(x));
                        i = k;
                        continue;
                    }
                }
            }
        }
        let ch = text[start..].chars().next().expect("in bounds");
        out.push(ch);
        i = start + ch.len_utf8();
    }
    out
}

fn dims(m: &qchan_core::ComplexMatrix) -> String {
    format!("{}x{}", m.rows(), m.cols())
}

pub fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Isometry { v } => format!("connecting isometry V ({})", dims(v)),
        Witness::Channel { role, kraus } => {
            format!("{role} map {}->{} with {} Kraus operators", kraus.d_in(), kraus.d_out(), kraus.len())
        }
        Witness::MinEigenvalue { matrix, value } => format!("smallest eigenvalue of {matrix} = {}", fmt_num(*value)),
        Witness::RankOneKraus { kraus } => format!("{} rank-one Kraus operators", kraus.len()),
        Witness::ViolatingPair { i, j, overlap, product_norm } => format!(
            "classes {} and {} (1-based): |<v_i, v_j>| = {}, |R_i R_j| = {}",
            i + 1,
            j + 1,
            fmt_num(*overlap),
            fmt_num(*product_norm)
        ),
        Witness::SelfComplement { grouped, w } => {
            format!("orthogonal classes: {}, inclusion W ({})", grouped.classes.len(), dims(w))
        }
        Witness::CanonicalForm { u, .. } => format!("{} pairs (u_j, v_j)", u.len()),
        Witness::Factorization { a, u } => format!("A ({}), U ({})", dims(a), dims(u)),
        Witness::SchurVectors { z } => format!("{} vectors z_k", z.len()),
        Witness::Obstruction { reason, value } => format!("{reason}: {}", fmt_num(*value)),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "True",
        Verdict::False => "False",
        Verdict::Indeterminate => "Indeterminate",
    }
}

fn render_certificate(out: &mut String, indent: &str, c: &Certificate) {
    if !c.provenance.is_empty() {
        let _ = writeln!(out, "{indent}via      {}", c.provenance.join(", "));
    }
    if let Some(w) = &c.witness {
        let _ = writeln!(out, "{indent}witness  {}", describe_witness(w));
    }
    if let Some(r) = c.residual {
        let _ = writeln!(out, "{indent}residual {}", fmt_num(r));
    }
    if let Some(m) = c.margin {
        let _ = writeln!(out, "{indent}margin   {}", fmt_num(m));
    }
    if !c.diagnostic.is_empty() {
        let _ = writeln!(out, "{indent}note     {}", snap_numbers(&c.diagnostic));
    }
}

fn render_header(out: &mut String, h: &Header) {
    let t = &h.tolerances;
    let _ = writeln!(out, "{} {} (version {})", h.tool, h.command, h.version);
    let _ = writeln!(out, "tolerances  eps_rank={:e} eps_psd={:e} eps_eq={:e}", t.eps_rank, t.eps_psd, t.eps_eq);
    let _ = writeln!(out, "seed        {} ({})", h.seed, h.prng);
}

pub fn render_analyze(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    render_header(&mut out, &r.header);
    for e in &r.entries {
        let _ = writeln!(out);
        let _ = writeln!(out, "== {}", e.file);
        let _ = writeln!(out, "   sha256   {}", e.sha256);
        let name = e.name.as_ref().map(|n| format!(", \"{n}\"")).unwrap_or_default();
        let _ = writeln!(out, "   channel  {} {}->{}{}", e.kind, e.d_in, e.d_out, name);
        for a in &e.analyses {
            let c = &a.certificate;
            let _ = writeln!(out, "   {:<20} {}", a.analysis, verdict_str(c.verdict));
            render_certificate(&mut out, "       ", c);
            if let Some(conds) = &a.conditions {
                for cond in conds {
                    let _ = writeln!(
                        out,
                        "       ({:>3}) {:<13} {}",
                        cond.label,
                        verdict_str(cond.certificate.verdict),
                        cond.description
                    );
                }
            }
            if let Some(ms) = a.wall_time_ms {
                let _ = writeln!(out, "       time     {ms:.3} ms");
            }
        }
    }
    out
}

pub fn render_verify(r: &VerifyReport) -> String {
    let mut out = String::new();
    render_header(&mut out, &r.header);
    for s in &r.suites {
        let _ = writeln!(out);
        let status = if s.ok() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status} {}: {}/{} instances (seed {})", s.suite, s.passed, s.instances, s.seed);
        if let Some(res) = s.max_residual {
            let _ = writeln!(out, "     max residual {}", fmt_num(res));
        }
        for (name, count) in &s.counters {
            let _ = writeln!(out, "     {name}: {count}/{}", s.instances);
        }
        for f in &s.failures {
            let _ = writeln!(out, "     {}", snap_numbers(f));
        }
    }
    if let Some(ms) = r.wall_time_ms {
        let _ = writeln!(out, "\ntime {ms:.3} ms");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_snap_and_shorten() {
        assert_eq!(fmt_num(3.0e-17), "0");
        assert_eq!(fmt_num(-2.0e-13), "0");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(1e-9), "1.000e-9");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn free_text_numbers_snap() {
        assert_eq!(snap_numbers("smallest eigenvalue -1.110e-16 (choi)"), "smallest eigenvalue 0 (choi)");
        assert_eq!(snap_numbers("mass 2.500e-1, rank 3"), "mass 0.25, rank 3");
        assert_eq!(snap_numbers("F_2 and e2 stay"), "F_2 and e2 stay");
        assert_eq!(snap_numbers("λ=−1 ‖x‖"), "λ=−1 ‖x‖");
    }
}
