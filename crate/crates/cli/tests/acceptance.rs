//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always reach the terminal.
//!
//! Regenerate the golden report after an intended output change with
//! `cd crates/cli/tests/fixtures && qchan analyze *.json > ../golden/analyze.txt`.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use qchan_cli::document::ChannelDocument;
use qchan_core::suites::{Suite, SuiteReport, DEFAULT_SEED};
use qchan_core::{
    cstar_extreme_test, degradable_seb_test, is_self_complementary, zoo, HolevoForm, Tolerance, Verdict, Witness,
};

const OVERLAP_TOL: f64 = 1e-9;
const ISOMETRY_TOL: f64 = 1e-8;
const SPECTRUM_TOL: f64 = 1e-9;

/// Criteria that cannot hold as literally stated. Their lines still print
/// FAIL; the run only requires that the replacement checks pass.
const KNOWN_UNATTAINABLE: &[u32] = &[8];

struct Line {
    id: u32,
    pass: bool,
    text: String,
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn load(name: &str, tol: &Tolerance) -> ChannelDocument {
    let text = std::fs::read_to_string(fixtures().join(name)).expect("fixture readable");
    ChannelDocument::parse_str(&text, tol).expect("fixture parses")
}

fn suite_line(id: u32, suite: Suite, n: usize, tol: &Tolerance) -> (Line, SuiteReport) {
    let r = suite.run(n, DEFAULT_SEED, tol);
    let mut text = format!("{} {}/{} instances", r.suite, r.passed, r.instances);
    if let Some(res) = r.max_residual {
        text += &format!(", max residual {res:.2e}");
    }
    if let Some(f) = r.failures.first() {
        text += &format!("; first failure: {f}");
    }
    (Line { id, pass: r.ok(), text }, r)
}

fn holevo_example(tol: &Tolerance) -> Line {
    let doc = load("holevo-m3-m2.json", tol);
    let h: HolevoForm = doc.holevo(tol).expect("holevo payload");
    let cert = degradable_seb_test(&h, tol).expect("grouping succeeds");
    let (pair, overlap) = match cert.witness {
        Some(Witness::ViolatingPair { i, j, overlap, .. }) => ((i + 1, j + 1), overlap),
        _ => ((0, 0), f64::NAN),
    };
    let k = doc.kraus(tol).expect("kraus");
    let dual = cstar_extreme_test(&k.dual(), tol).verdict;
    let pass = cert.verdict == Verdict::False
        && pair == (2, 3)
        && (overlap - 0.5).abs() <= OVERLAP_TOL
        && dual == Verdict::True;
    Line {
        id: 1,
        pass,
        text: format!(
            "M3->M2 Holevo map: degradable {}, pair {pair:?}, overlap {overlap:.12}, dual C*-extreme {dual}",
            cert.verdict
        ),
    }
}

fn pinching(tol: &Tolerance) -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 2..=4 {
        let c = is_self_complementary(&zoo::pinching(d).expect("pinching"), tol);
        let res = c.residual.unwrap_or(f64::INFINITY);
        pass &= c.verdict == Verdict::True && res <= ISOMETRY_TOL;
        parts.push(format!("d={d} {} ({res:.2e})", c.verdict));
    }
    Line { id: 2, pass, text: format!("pinching self-complementary: {}", parts.join(", ")) }
}

fn double_complement(tol: &Tolerance) -> Vec<Line> {
    let r = Suite::AppA.run(100, DEFAULT_SEED, tol);
    let literal = r.counter("literal");
    vec![
        Line {
            id: 8,
            pass: literal == r.instances,
            text: format!(
                "literal pair check ((Φ^c)^c, Φ): {literal}/{} (holds only for self-complementary Φ)",
                r.instances
            ),
        },
        Line {
            id: 8,
            pass: r.ok(),
            text: format!(
                "replacement: Choi((Φ^c)^c) = Choi(Φ), Φ^c ∈ CM(Φ), (Φ^c)^c ∈ CM(Φ^c): {}/{}, max residual {:.2e}",
                r.passed,
                r.instances,
                r.max_residual.unwrap_or(f64::NAN)
            ),
        },
    ]
}

fn werner_holevo_spectrum(tol: &Tolerance) -> Line {
    let k = zoo::werner_holevo_cp(2, 1.0, tol).expect("W_1 is CP");
    let mut ev = k.choi().mat().eig_hermitian(tol).expect("hermitian").values;
    ev.sort_by(|a, b| b.total_cmp(a));
    let want = [2.0, 0.0, 0.0, 0.0];
    let pass = ev.len() == 4 && ev.iter().zip(want).all(|(x, w)| (x - w).abs() <= SPECTRUM_TOL);
    let shown: Vec<String> = ev.iter().map(|x| format!("{x:.3e}")).collect();
    Line { id: 9, pass, text: format!("W_1 (d=2) Choi spectrum [{}]", shown.join(", ")) }
}

fn golden() -> Line {
    let dir = fixtures();
    let mut files: Vec<String> = std::fs::read_dir(&dir)
        .expect("fixture dir")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    files.sort();
    let out = Command::new(env!("CARGO_BIN_EXE_qchan"))
        .current_dir(&dir)
        .arg("analyze")
        .args(&files)
        .env_remove("QCHAN_TOL_EQ")
        .output()
        .expect("qchan runs");
    let want = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/analyze.txt")).expect("golden");
    let same = out.stdout == want;
    let text = if same {
        format!("golden analyze report matches byte-for-byte ({} files)", files.len())
    } else {
        let diff = out
            .stdout
            .split(|&b| b == b'\n')
            .zip(want.split(|&b| b == b'\n'))
            .position(|(a, b)| a != b)
            .map_or("lengths differ".to_string(), |i| format!("first difference at line {}", i + 1));
        format!("golden analyze report differs: {diff}")
    };
    Line { id: 10, pass: same && out.status.success(), text }
}

fn main() -> ExitCode {
    let tol = Tolerance::default();
    let mut lines = vec![holevo_example(&tol), pinching(&tol)];
    for (id, suite, n) in [
        (3, Suite::Thm32, 400),
        (4, Suite::Thm34, 200),
        (5, Suite::Thm45, 40),
        (6, Suite::SebAntidegrading, 100),
        (7, Suite::Prop48, 50),
    ] {
        lines.push(suite_line(id, suite, n, &tol).0);
    }
    lines.extend(double_complement(&tol));
    lines.push(werner_holevo_spectrum(&tol));
    lines.push(golden());

    let mut ok = true;
    for (idx, l) in lines.iter().enumerate() {
        // The first line of a known-unattainable criterion is the literal one.
        let literal = KNOWN_UNATTAINABLE.contains(&l.id) && lines[..idx].iter().all(|p| p.id != l.id);
        let status = if l.pass { "PASS" } else { "FAIL" };
        let tag = if literal && !l.pass { " [known unattainable]" } else { "" };
        println!("{status} {:>2}: {}{tag}", l.id, l.text);
        if literal {
            // Flag it if the literal statement ever starts holding.
            ok &= !l.pass;
        } else {
            ok &= l.pass;
        }
    }
    println!("acceptance: {}", if ok { "ok" } else { "FAILED" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
