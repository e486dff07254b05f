//! Subcommands. Each returns the text to print and an exit code, so the
//! binary stays a thin shell and tests can drive everything in process.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qchan_core::structure::{choi_projection_defect, holevo_from_rank_one, rank_one_kraus};
use qchan_core::suites::{Suite, DEFAULT_SEED};
use qchan_core::zoo::Generated;
use qchan_core::{
    antidegradable_test, choi_projection_equivalences, complement_from_kraus, cstar_extreme_test,
    degradability_via_inverse, degradable_seb_test, eb_certificate, is_ppt, is_self_complementary, minimal_complement,
    Certificate, HolevoForm, KrausRep, Property, Tolerance, Verdict, Witness, ZooSpec,
};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::document::{ChannelDocument, Payload};
use crate::report::{self, Analysis, AnalyzeReport, ConditionReport, Entry, Header, VerifyReport};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qchan",
    version,
    about = "Analyze quantum channels: complements, degradability, entanglement breaking"
)]
pub struct Cli {
    /// Equality tolerance.
    #[arg(long, global = true, env = "QCHAN_TOL_EQ")]
    pub tol_eq: Option<f64>,
    /// Positive-semidefiniteness tolerance.
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
    /// Relative rank cutoff.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Seed for generated fixtures.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite a channel document in another representation.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run structural tests on one or more channel documents.
    Analyze {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Analyses to run (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        properties: Vec<AnalysisKind>,
        /// Picture the documents are written in; C*-extremality is tested
        /// on the Heisenberg-picture map.
        #[arg(long, value_enum, default_value_t = Picture::Schrodinger)]
        picture: Picture,
    },
    /// Write a complementary channel.
    Complement {
        input: PathBuf,
        /// Use an environment of dimension equal to the Choi rank.
        #[arg(long)]
        minimal: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded theorem suite (thm32, thm34, thm42, thm45, prop48, appA,
    /// seb-antidegrading, or all).
    Verify {
        suite: String,
        /// Number of instances.
        #[arg(short, long, default_value_t = 200)]
        n: usize,
    },
    /// Generate a channel from a named family, with `key=value` parameters.
    Zoo {
        /// schur, schur-complement, werner-holevo, phi-lambda, pinching,
        /// direct-sum-pure, cstar-extreme or holevo-gen.
        family: String,
        /// Parameters such as `d=3` or `lambda=-0.5`; values are read as JSON
        /// when they parse, e.g. `a=[[[1,0],[0.5,0]],[[0.5,0],[1,0]]]`.
        params: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Kraus,
    Choi,
    Stinespring,
    Holevo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Picture {
    Schrodinger,
    Heisenberg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalysisKind {
    Ppt,
    Eb,
    Degradable,
    Antidegradable,
    SelfComplementary,
    CstarExtreme,
    ChoiProjection,
    SebDegradable,
}

impl AnalysisKind {
    pub const ALL: [AnalysisKind; 8] = [
        AnalysisKind::Ppt,
        AnalysisKind::Eb,
        AnalysisKind::Degradable,
        AnalysisKind::Antidegradable,
        AnalysisKind::SelfComplementary,
        AnalysisKind::CstarExtreme,
        AnalysisKind::ChoiProjection,
        AnalysisKind::SebDegradable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::Ppt => "ppt",
            AnalysisKind::Eb => "eb",
            AnalysisKind::Degradable => "degradable",
            AnalysisKind::Antidegradable => "antidegradable",
            AnalysisKind::SelfComplementary => "self-complementary",
            AnalysisKind::CstarExtreme => "cstar-extreme",
            AnalysisKind::ChoiProjection => "choi-projection",
            AnalysisKind::SebDegradable => "seb-degradable",
        }
    }
}

/// What the binary prints and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: 0 }
    }
}

pub fn tolerance(cli: &Cli) -> Result<Tolerance, CliError> {
    let d = Tolerance::DEFAULT_EPS;
    Ok(Tolerance::new(cli.tol_rank.unwrap_or(d), cli.tol_psd.unwrap_or(d), cli.tol_eq.unwrap_or(d))?)
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let tol = tolerance(cli)?;
    match &cli.command {
        Command::Convert { input, to, out } => convert(input, *to, out.as_deref(), &tol),
        Command::Analyze { inputs, properties, picture } => analyze(cli, inputs, properties, *picture, &tol),
        Command::Complement { input, minimal, out } => complement(input, *minimal, out.as_deref(), &tol),
        Command::Verify { suite, n } => verify(cli, suite, *n, &tol),
        Command::Zoo { family, params, out } => zoo(cli, family, params, out.as_deref(), &tol),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn load(path: &Path, tol: &Tolerance) -> Result<(ChannelDocument, String), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })?;
    let doc = ChannelDocument::parse_str(&text, tol).map_err(|e| match e {
        CliError::Parse { path: p, message } => CliError::Parse { path: format!("{}: {p}", path.display()), message },
        other => other,
    })?;
    Ok((doc, sha256_hex(&bytes)))
}

fn emit(doc: &ChannelDocument, out: Option<&Path>) -> Result<Outcome, CliError> {
    let text = doc.to_json();
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn holevo_of(doc: &ChannelDocument, k: &KrausRep, tol: &Tolerance) -> Option<HolevoForm> {
    doc.holevo(tol).or_else(|| rank_one_kraus(k, tol).and_then(|r| holevo_from_rank_one(&r, tol).ok()))
}

fn convert(input: &Path, to: Target, out: Option<&Path>, tol: &Tolerance) -> Result<Outcome, CliError> {
    let (doc, digest) = load(input, tol)?;
    let k = doc.kraus(tol)?;
    let (d_in, d_out) = (k.d_in(), k.d_out());
    let payload = match to {
        Target::Kraus => Payload::Kraus(k.clone()),
        Target::Choi => Payload::Choi(k.choi()),
        Target::Stinespring => Payload::Stinespring(k.stinespring()),
        Target::Holevo => Payload::Holevo(holevo_of(&doc, &k, tol).ok_or_else(|| {
            CliError::Params("no rank-one Kraus decomposition found; cannot write a Holevo form".into())
        })?),
    };
    let mut converted = ChannelDocument { d_in, d_out, payload, metadata: doc.metadata.clone() };
    converted.metadata.insert("converted-from".into(), doc.kind().name().into());
    converted.metadata.insert("source-sha256".into(), digest);
    let back = converted.kraus(tol)?;
    let scale = k.choi().mat().frobenius_norm().max(1.0);
    let gap = back.choi().mat().distance(k.choi().mat()) / scale;
    if gap > tol.eps_eq {
        return Err(CliError::Invariant(format!("conversion changed the Choi matrix by {}", report::fmt_num(gap))));
    }
    emit(&converted, out)
}

fn complement(input: &Path, minimal: bool, out: Option<&Path>, tol: &Tolerance) -> Result<Outcome, CliError> {
    let (doc, digest) = load(input, tol)?;
    let k = doc.kraus(tol)?;
    let c = if minimal { minimal_complement(&k, tol) } else { complement_from_kraus(&k) };
    let source = doc.name().map(str::to_string).unwrap_or_else(|| input.display().to_string());
    let note = if minimal { "minimal complement" } else { "complement from the given Kraus operators" };
    let result = ChannelDocument::from_kraus(c)
        .with_meta("name", format!("complement of {source}"))
        .with_meta("provenance", note)
        .with_meta("source-sha256", digest);
    emit(&result, out)
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let v = f();
    (v, on.then(|| start.elapsed().as_secs_f64() * 1e3))
}

fn unavailable(property: Property, tol: &Tolerance, why: &str) -> Certificate {
    Certificate::new(property, Verdict::Indeterminate, tol).note(why)
}

/// Returns the analysis and whether it exposed an invariant violation.
fn run_analysis(
    kind: AnalysisKind,
    doc: &ChannelDocument,
    k: &KrausRep,
    picture: Picture,
    tol: &Tolerance,
) -> (Analysis, Option<String>) {
    let mut conditions = None;
    let mut violation = None;
    let certificate = match kind {
        AnalysisKind::Ppt => is_ppt(k, tol),
        AnalysisKind::Eb => match &doc.payload {
            Payload::Holevo(h) => eb_certificate(h, tol),
            _ => eb_certificate(k, tol),
        },
        AnalysisKind::Degradable => degradability_via_inverse(k, tol),
        AnalysisKind::Antidegradable => antidegradable_test(k, tol),
        AnalysisKind::SelfComplementary => is_self_complementary(k, tol),
        AnalysisKind::CstarExtreme => match picture {
            Picture::Schrodinger => {
                let mut c = cstar_extreme_test(&k.dual(), tol);
                c.provenance.insert(0, "dual-map".into());
                c
            }
            Picture::Heisenberg => cstar_extreme_test(k, tol),
        },
        AnalysisKind::ChoiProjection => match choi_projection_equivalences(k, tol) {
            Ok(b) => {
                if b.is_violation() {
                    violation = Some("Choi-projection characterizations disagree".to_string());
                }
                let first = b.conditions[0].certificate.clone();
                let note = if b.notes.is_empty() { first.diagnostic.clone() } else { b.notes.join("; ") };
                conditions = Some(
                    b.conditions
                        .into_iter()
                        .map(|c| ConditionReport {
                            label: c.label,
                            description: c.description,
                            certificate: c.certificate,
                        })
                        .collect(),
                );
                let mut c = first.note(note);
                if let Some(r) = b.factorization_residual {
                    c = c.with_residual(r);
                }
                c
            }
            Err(e) => {
                let defect = choi_projection_defect(k);
                Certificate::new(Property::ChoiProjection, Verdict::from_bool(defect <= tol.eps_eq), tol)
                    .via("projection-defect")
                    .with_witness(Witness::Obstruction { reason: "projection defect".into(), value: defect })
                    .note(format!("equivalences not evaluated: {e}"))
            }
        },
        AnalysisKind::SebDegradable => match holevo_of(doc, k, tol) {
            Some(h) => {
                degradable_seb_test(&h, tol).unwrap_or_else(|e| unavailable(Property::Degradable, tol, &e.to_string()))
            }
            None => unavailable(Property::Degradable, tol, "no rank-one Kraus decomposition found"),
        },
    };
    (Analysis { analysis: kind.name(), certificate, conditions, wall_time_ms: None }, violation)
}

fn file_label(p: &Path) -> String {
    p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string())
}

pub fn analyze_report(
    cli: &Cli,
    inputs: &[PathBuf],
    properties: &[AnalysisKind],
    picture: Picture,
    tol: &Tolerance,
) -> Result<(AnalyzeReport, Vec<String>), CliError> {
    let kinds: Vec<AnalysisKind> = if properties.is_empty() { AnalysisKind::ALL.to_vec() } else { properties.to_vec() };
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for path in inputs {
        let (doc, sha256) = load(path, tol)?;
        let k = doc.kraus(tol)?;
        let mut analyses = Vec::new();
        for &kind in &kinds {
            let ((mut a, v), ms) = timed(cli.timings, || run_analysis(kind, &doc, &k, picture, tol));
            a.wall_time_ms = ms;
            if let Some(v) = v {
                violations.push(format!("{}: {v}", file_label(path)));
            }
            analyses.push(a);
        }
        entries.push(Entry {
            file: file_label(path),
            sha256,
            kind: doc.kind().name(),
            d_in: doc.d_in,
            d_out: doc.d_out,
            name: doc.name().map(str::to_string),
            analyses,
        });
    }
    entries.sort_by(|a, b| a.sha256.cmp(&b.sha256).then_with(|| a.file.cmp(&b.file)));
    Ok((AnalyzeReport { header: Header::new("analyze", *tol, cli.seed), entries }, violations))
}

fn render<T: serde::Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> String {
    if cli.machine {
        report::to_json_string(&serde_json::to_value(value).expect("reports serialize"))
    } else {
        text()
    }
}

fn analyze(
    cli: &Cli,
    inputs: &[PathBuf],
    properties: &[AnalysisKind],
    picture: Picture,
    tol: &Tolerance,
) -> Result<Outcome, CliError> {
    let (r, violations) = analyze_report(cli, inputs, properties, picture, tol)?;
    let stdout = render(cli, &r, || report::render_analyze(&r));
    if violations.is_empty() {
        return Ok(Outcome::ok(stdout));
    }
    let stderr = violations.iter().map(|v| format!("invariant violated: {v}\n")).collect();
    Ok(Outcome { stdout, stderr, code: CliError::Invariant(String::new()).exit_code() })
}

fn verify(cli: &Cli, suite: &str, n: usize, tol: &Tolerance) -> Result<Outcome, CliError> {
    let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(suite).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            CliError::Params(format!("unknown suite '{suite}', expected one of {} or all", names.join(", ")))
        })?]
    };
    let (reports, ms) = timed(cli.timings, || suites.iter().map(|s| s.run(n, cli.seed, tol)).collect::<Vec<_>>());
    let failed: Vec<&str> = reports.iter().filter(|r| !r.ok()).map(|r| r.suite).collect();
    let r = VerifyReport { header: Header::new("verify", *tol, cli.seed), suites: reports, wall_time_ms: ms };
    let stdout = render(cli, &r, || report::render_verify(&r));
    if failed.is_empty() {
        Ok(Outcome::ok(stdout))
    } else {
        Ok(Outcome { stdout, stderr: format!("equivalence violations in: {}\n", failed.join(", ")), code: 6 })
    }
}

fn param_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

pub fn zoo_spec(family: &str, params: &[String], seed: u64) -> Result<ZooSpec, CliError> {
    let mut map = Map::new();
    for p in params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| CliError::Params(format!("parameter '{p}' is not of the form key=value")))?;
        map.insert(key.replace('-', "_"), param_value(value));
    }
    if family == "holevo-gen" && !map.contains_key("seed") {
        map.insert("seed".into(), Value::from(seed));
    }
    let spec = serde_json::json!({ "family": family, "params": map });
    serde_json::from_value(spec).map_err(|e| CliError::Params(format!("{family}: {e}")))
}

fn zoo(cli: &Cli, family: &str, params: &[String], out: Option<&Path>, tol: &Tolerance) -> Result<Outcome, CliError> {
    let spec = zoo_spec(family, params, cli.seed)?;
    let doc = match spec.build(tol)? {
        Generated::Kraus(k) => ChannelDocument::from_kraus(k),
        Generated::Holevo(h) => ChannelDocument::from_holevo(h),
    };
    let params = serde_json::to_value(&spec).expect("zoo specs serialize")["params"].to_string();
    let doc = doc
        .with_meta("name", spec.family())
        .with_meta("family", spec.family())
        .with_meta("params", params)
        .with_meta("prng", qchan_core::zoo::PRNG_ALGORITHM);
    emit(&doc, out)
}
