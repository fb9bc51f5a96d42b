use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use concepts::corpus;
use concepts::interp::{self, check_certificate, parse_certificate};
use concepts::kernel::{check_proof, parse_script, Verdict};
use concepts::semantics::{self, FragmentSpec};
use concepts::syntax::{
    box_delete, free_vars, is_implication_free, is_increasing, is_positive, level, parse_formula, Formula,
};
use concepts::theories::{TheoryDescriptor, TheoryId};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "concepts",
    version,
    about = "Proof checking and models for the theory of constructive concepts"
)]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Theory for parsing or licensing checks (CC, CC', CC'', COMP, PA2-, IL).
    #[arg(long, global = true)]
    theory: Option<TheoryId>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof script.
    Check { script: PathBuf },
    /// Report level, positivity and the increasing property, one formula per line.
    Classify { file: PathBuf },
    /// Delete every box, one formula per line.
    Erase { file: PathBuf },
    /// Check an interpretation certificate. Proof paths are relative to the certificate.
    Certify { certificate: PathBuf },
    /// Build, saturate and audit a finite fragment.
    Saturate {
        /// JSON fragment spec; the flags below override its fields.
        spec: Option<PathBuf>,
        #[arg(long)]
        constant_depth: Option<usize>,
        #[arg(long)]
        max_size: Option<usize>,
        /// Seed sentences, one per line.
        #[arg(long)]
        seed_file: Option<PathBuf>,
        /// Include every stage in the report.
        #[arg(long)]
        dump: bool,
    },
    /// Check every bundled script and certificate and the erased-Russell demo.
    Corpus,
}

struct Report {
    command: String,
    ok: bool,
    payload: Value,
    text: String,
}

impl Report {
    fn emit(&self, as_json: bool) {
        if as_json {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": self.command,
                "ok": self.ok,
                "report": self.payload,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
        } else {
            print!("{}", self.text);
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Accepted => "ACCEPTED".into(),
        Verdict::Rejected { line, error } => format!("REJECTED at step {line}: {error}"),
    }
}

fn check(path: &Path, theory: Option<TheoryId>) -> Result<Report, String> {
    let script = parse_script(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(t) = theory {
        if t != script.theory {
            return Err(format!("script is written in {}, not {t}", script.theory));
        }
    }
    let verdict = check_proof(&script);
    Ok(Report {
        command: "check".into(),
        ok: verdict.is_accepted(),
        text: format!("{} [{}]: {}\n", path.display(), script.theory, verdict_text(&verdict)),
        payload: json!({
            "script": path.display().to_string(),
            "theory": script.theory,
            "goal": script.goal.to_string(),
            "steps": script.lines.len(),
            "result": verdict,
        }),
    })
}

#[derive(Serialize)]
struct Classification {
    line: usize,
    formula: String,
    level: usize,
    positive: bool,
    implication_free: bool,
    increasing: bool,
    free_variables: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    licensed: Option<bool>,
}

fn parse_lines(text: &str) -> Result<Vec<(usize, Formula)>, String> {
    content_lines(text)
        .map(|(n, l)| parse_formula(l).map(|f| (n, f)).map_err(|e| format!("line {n}: {e}")))
        .collect()
}

fn classify(path: &Path, theory: Option<TheoryId>) -> Result<Report, String> {
    let descriptor = theory.map(TheoryDescriptor::get);
    let items: Vec<Classification> = parse_lines(&read(path)?)?
        .into_iter()
        .map(|(line, f)| Classification {
            line,
            formula: f.to_string(),
            level: level(&f),
            positive: is_positive(&f),
            implication_free: is_implication_free(&f),
            increasing: is_increasing(&f),
            free_variables: free_vars(&f).iter().map(|v| v.to_string()).collect(),
            licensed: descriptor.as_ref().map(|d| d.check_formula(&f).is_ok()),
        })
        .collect();
    let text = items
        .iter()
        .map(|c| {
            let licensed = match c.licensed {
                Some(l) => format!(" licensed={l}"),
                None => String::new(),
            };
            format!(
                "{}: level={} positive={} increasing={}{licensed}\n",
                c.formula, c.level, c.positive, c.increasing
            )
        })
        .collect();
    Ok(Report {
        command: "classify".into(),
        ok: true,
        text,
        payload: json!({ "formulas": items }),
    })
}

fn erase(path: &Path) -> Result<Report, String> {
    let items: Vec<Value> = parse_lines(&read(path)?)?
        .into_iter()
        .map(|(line, f)| json!({ "line": line, "formula": f.to_string(), "erased": box_delete(&f).to_string() }))
        .collect();
    let text = items
        .iter()
        .map(|i| format!("{}\n", i["erased"].as_str().unwrap()))
        .collect();
    Ok(Report {
        command: "erase".into(),
        ok: true,
        text,
        payload: json!({ "formulas": items }),
    })
}

fn certify(path: &Path) -> Result<Report, String> {
    let cert = parse_certificate(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let load = |p: &str| read(&base.join(p));
    let report = check_certificate(&cert, &load);
    Ok(Report {
        command: "certify".into(),
        ok: report.passed(),
        text: report.render_text(),
        payload: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn saturate(
    spec_path: Option<&Path>,
    depth: Option<usize>,
    max_size: Option<usize>,
    seed_file: Option<&Path>,
    dump: bool,
) -> Result<Report, String> {
    let mut spec = match spec_path {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?,
        None => FragmentSpec::new(1, 9),
    };
    if let Some(d) = depth {
        spec.constant_depth = d;
    }
    if let Some(m) = max_size {
        spec.max_formula_size = m;
    }
    if let Some(p) = seed_file {
        spec.seed_formulas
            .extend(content_lines(&read(p)?).map(|(_, l)| l.to_string()));
    }
    let (fragment, family, audit) = semantics::run(&spec).map_err(|e| e.to_string())?;
    let mut payload = json!({
        "spec": spec,
        "scope": semantics::FRAGMENT_RELATIVE,
        "census": {
            "constants": fragment.pool.len(),
            "parameters": fragment.parameters.len(),
            "sentences": fragment.len(),
            "by_level": fragment.level_census(),
        },
        "stage_sizes": family.sizes(),
        "stabilized_at": family.stabilized_at,
        "audit": audit,
    });
    if dump {
        let stages: Vec<Vec<String>> = family
            .stages
            .iter()
            .map(|s| {
                (0..s.len())
                    .filter(|i| s[*i])
                    .map(|i| fragment.sentences[i].to_string())
                    .collect()
            })
            .collect();
        payload["stages"] = json!(stages);
    }
    let mut text = format!(
        "fragment (depth {}, size cap {}): {} constants, {} sentences\n",
        spec.constant_depth,
        spec.max_formula_size,
        fragment.pool.len(),
        fragment.len()
    );
    text += &format!(
        "stage sizes {:?}, stabilized at {}\n",
        family.sizes(),
        family.stabilized_at
    );
    text += &format!("audit ({}):\n", semantics::FRAGMENT_RELATIVE);
    text += &format!("  [{}] bot rejected\n", pass(audit.bot_rejected));
    for a in &audit.axioms {
        text += &format!(
            "  [{}] {}: {} closures, {} rejected\n",
            pass(a.rejected.is_empty()),
            a.scheme,
            a.instances,
            a.rejected.len()
        );
    }
    for r in &audit.rules {
        text += &format!(
            "  [{}] {}: {} applications, {} violations\n",
            pass(r.violations == 0),
            r.rule,
            r.applications,
            r.violations
        );
    }
    Ok(Report {
        command: "saturate".into(),
        ok: audit.passed(),
        text,
        payload,
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_corpus() -> Report {
    let mut ok = true;
    let mut text = String::new();
    let mut scripts = Vec::new();
    for f in corpus::SCRIPTS {
        let verdict = check_proof(&corpus::script(f.path));
        ok &= verdict.is_accepted();
        text += &format!("{}: {}\n", f.path, verdict_text(&verdict));
        scripts.push(json!({ "path": f.path, "result": verdict }));
    }
    let mut certificates = Vec::new();
    for f in corpus::CERTIFICATES {
        let cert = parse_certificate(f.text).expect("bundled certificate parses");
        let report = check_certificate(&cert, &corpus::loader);
        ok &= report.passed();
        text += &format!("{}: {}\n", f.path, pass(report.passed()));
        certificates.push(json!({ "path": f.path, "report": report }));
    }
    let demo = interp::erased_inconsistency_demo();
    let erased = check_proof(&demo.script);
    let boxed = check_proof(&demo.boxed_script);
    let demo_ok = erased.is_accepted() && !boxed.is_accepted();
    ok &= demo_ok;
    text += &format!(
        "erased Russell pair derives bot in IL: {}; with boxes kept in CC: {}\n",
        verdict_text(&erased),
        verdict_text(&boxed)
    );
    Report {
        command: "corpus".into(),
        ok,
        text,
        payload: json!({
            "scripts": scripts,
            "certificates": certificates,
            "erased_inconsistency": {
                "pair": demo.pair.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "comprehension": demo.comprehension.to_string(),
                "script": demo.script.to_string(),
                "erased_result": erased,
                "boxed_result": boxed,
            },
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { script } => check(script, cli.theory),
        Command::Classify { file } => classify(file, cli.theory),
        Command::Erase { file } => erase(file),
        Command::Certify { certificate } => certify(certificate),
        Command::Saturate {
            spec,
            constant_depth,
            max_size,
            seed_file,
            dump,
        } => saturate(spec.as_deref(), *constant_depth, *max_size, seed_file.as_deref(), *dump),
        Command::Corpus => Ok(run_corpus()),
    };
    match result {
        Ok(report) => {
            report.emit(cli.json);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
