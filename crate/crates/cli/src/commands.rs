use std::path::{Path, PathBuf};

use blockforge_core::config::{validate_config, CheckStatus};
use blockforge_core::ideal::{simplicity_probe, ProbeSettings};
use blockforge_core::identities::jacobi_suite;
use blockforge_core::structure::{central_elements, decomposition_check, ClaimStatus};
use blockforge_core::{AlgebraClass, AlgebraConfig, BracketKernel, Element, SuperElement, Window};
use blockforge_realize::{cross_check, RealizationSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::manifest::{config_hash, RunManifest};
use crate::{CliError, Outcome, Result};

/// Random triples checked by the probe's Jacobi section.
pub const JACOBI_TRIPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Jacobi,
    Centers,
    Derived,
    Closure,
}

impl Section {
    pub const ALL: [Section; 4] = [Section::Jacobi, Section::Centers, Section::Derived, Section::Closure];

    pub fn name(self) -> &'static str {
        match self {
            Section::Jacobi => "jacobi",
            Section::Centers => "centers",
            Section::Derived => "derived",
            Section::Closure => "closure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SectionStatus {
    Pass,
    Fail,
    Skipped,
    NotApplicable,
    OutOfWindow,
}

impl SectionStatus {
    pub fn label(self) -> &'static str {
        match self {
            SectionStatus::Pass => "PASS",
            SectionStatus::Fail => "FAIL",
            SectionStatus::Skipped => "SKIPPED",
            SectionStatus::NotApplicable => "NOT_APPLICABLE",
            SectionStatus::OutOfWindow => "OUT_OF_WINDOW",
        }
    }
}

impl From<ClaimStatus> for SectionStatus {
    fn from(s: ClaimStatus) -> Self {
        match s {
            ClaimStatus::Pass => SectionStatus::Pass,
            ClaimStatus::Fail => SectionStatus::Fail,
            ClaimStatus::NotApplicable => SectionStatus::NotApplicable,
            ClaimStatus::OutOfWindow => SectionStatus::OutOfWindow,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub status: SectionStatus,
    pub detail: String,
    pub report: Option<Value>,
}

impl SectionReport {
    fn skipped(detail: &str) -> Self {
        SectionReport { status: SectionStatus::Skipped, detail: detail.into(), report: None }
    }

    fn new(status: impl Into<SectionStatus>, detail: impl Into<String>, report: &impl Serialize) -> Self {
        let report = serde_json::to_value(report).expect("reports serialize");
        SectionReport { status: status.into(), detail: detail.into(), report: Some(report) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSections {
    pub jacobi: SectionReport,
    pub centers: SectionReport,
    pub derived: SectionReport,
    pub closure: SectionReport,
}

impl ProbeSections {
    pub fn iter(&self) -> impl Iterator<Item = (Section, &SectionReport)> {
        Section::ALL.into_iter().zip([&self.jacobi, &self.centers, &self.derived, &self.closure])
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<AlgebraClass>,
    passed: bool,
    #[serde(flatten)]
    body: T,
}

fn render(doc: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

pub fn load_config(path: &Path) -> Result<AlgebraConfig> {
    AlgebraConfig::from_json(&read(path)?)
        .map_err(|e| CliError::Engine { path: path.display().to_string(), source: Box::new(e) })
}

fn config_name(cfg: &AlgebraConfig, path: &Path) -> String {
    cfg.name.clone().unwrap_or_else(|| path.file_stem().unwrap_or_default().to_string_lossy().into_owned())
}

pub fn validate(path: &Path, out: Option<String>) -> Result<Outcome> {
    let cfg = load_config(path)?;
    let report = validate_config(&cfg);
    let overall = report.overall();
    let manifest = RunManifest::new("validate", &[path], out).with_config(&cfg);
    #[derive(Serialize)]
    struct Body<'a> {
        overall: CheckStatus,
        validation: &'a blockforge_core::config::ValidationReport,
    }
    let doc = Document {
        manifest: &manifest,
        config: Some(config_name(&cfg, path)),
        class: Some(cfg.class),
        passed: overall == CheckStatus::Pass,
        body: Body { overall, validation: &report },
    };
    let names = |s: CheckStatus| -> Vec<&str> {
        report.checks.iter().filter(|c| c.status == s).map(|c| c.name.as_str()).collect()
    };
    let (code, summary) = match overall {
        CheckStatus::Fail => (1, format!("FAIL: {}", names(CheckStatus::Fail).join(", "))),
        CheckStatus::Undecided => (2, format!("UNDECIDED: {}", names(CheckStatus::Undecided).join(", "))),
        _ => (0, "PASS".to_string()),
    };
    Ok(Outcome { code, output: render(&doc), summary })
}

/// An element file: a list of term records for an even element, or an
/// object with `even` and `odd` lists.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GradedFile {
    #[serde(default)]
    even: Element,
    #[serde(default)]
    odd: Element,
}

pub fn load_element(path: &Path) -> Result<SuperElement> {
    let json = |source| CliError::Json { path: path.display().to_string(), source };
    let value: Value = serde_json::from_str(&read(path)?).map_err(json)?;
    if value.is_array() {
        Ok(SuperElement::even(serde_json::from_value(value).map_err(json)?))
    } else {
        let g: GradedFile = serde_json::from_value(value).map_err(json)?;
        Ok(SuperElement { even: g.even, odd: g.odd })
    }
}

/// Prints the bare bracket so the output can be fed back as an element file.
pub fn bracket(config: &Path, u: &Path, v: &Path) -> Result<Outcome> {
    let kernel = BracketKernel::new(load_config(config)?);
    let (u, v) = (load_element(u)?, load_element(v)?);
    let output = if kernel.has_odd() {
        render(&kernel.superbracket(&u, &v)?)
    } else {
        if !u.odd.is_zero() || !v.odd.is_zero() {
            return Err(CliError::Usage(format!("{} algebras have no odd part", kernel.class())));
        }
        render(&kernel.bracket(&u.even, &v.even)?)
    };
    Ok(Outcome { code: 0, output, summary: String::new() })
}

fn run_sections(
    kernel: &BracketKernel,
    window: Window,
    trials: usize,
    seed: u64,
    selected: &[Section],
) -> Result<ProbeSections> {
    let skip = || SectionReport::skipped("not selected");
    let on = |s| selected.contains(&s);

    let jacobi = if on(Section::Jacobi) {
        let r = jacobi_suite(kernel, &window, JACOBI_TRIPLES, seed);
        let status = if r.passed() { SectionStatus::Pass } else { SectionStatus::Fail };
        SectionReport::new(status, format!("{} of {} triples fail", r.failures, r.trials), &r)
    } else {
        skip()
    };

    let centers = if on(Section::Centers) {
        let r = central_elements(kernel, &window);
        SectionReport::new(r.status, r.detail.clone(), &r)
    } else {
        skip()
    };

    let derived = if on(Section::Derived) {
        let r = decomposition_check(kernel, &window);
        let status = if !r.passed() {
            SectionStatus::Fail
        } else if r.claims.iter().any(|c| c.status == ClaimStatus::Pass) {
            SectionStatus::Pass
        } else {
            SectionStatus::NotApplicable
        };
        let detail = r.claims.iter().map(|c| format!("{} {:?}", c.id, c.status)).collect::<Vec<_>>().join("; ");
        SectionReport::new(status, detail, &r)
    } else {
        skip()
    };

    let closure = if !on(Section::Closure) {
        skip()
    } else if trials == 0 {
        SectionReport::skipped("no random seeds requested")
    } else {
        let settings = ProbeSettings { window, trials, seed, check_growth: true };
        let r = simplicity_probe(kernel, &settings)?;
        SectionReport::new(r.status, r.detail.clone(), &r)
    };

    Ok(ProbeSections { jacobi, centers, derived, closure })
}

pub fn probe(
    path: &Path,
    window: Window,
    trials: usize,
    seed: u64,
    selected: &[Section],
    out: Option<String>,
) -> Result<Outcome> {
    let cfg = load_config(path)?;
    let validation = validate_config(&cfg).overall();
    let mut selected = selected.to_vec();
    selected.sort();
    selected.dedup();
    let mut manifest = RunManifest::new("probe", &[path], out).with_config(&cfg);
    manifest.window = Some(window);
    manifest.trials = Some(trials);
    manifest.seed = Some(seed);
    manifest.sections = Some(selected.iter().map(|s| s.name().to_string()).collect());

    let sections = if validation == CheckStatus::Fail {
        let s = || SectionReport::skipped("configuration fails validation");
        ProbeSections { jacobi: s(), centers: s(), derived: s(), closure: s() }
    } else {
        run_sections(&BracketKernel::new(cfg.clone()), window, trials, seed, &selected)?
    };
    let failed: Vec<&str> =
        sections.iter().filter(|(_, r)| r.status == SectionStatus::Fail).map(|(s, _)| s.name()).collect();
    let passed = validation != CheckStatus::Fail && failed.is_empty();

    #[derive(Serialize)]
    struct Body {
        validation: CheckStatus,
        sections: ProbeSections,
    }
    let summary =
        sections.iter().map(|(s, r)| format!("{} {}", s.name(), r.status.label())).collect::<Vec<_>>().join(", ");
    let doc = Document {
        manifest: &manifest,
        config: Some(config_name(&cfg, path)),
        class: Some(cfg.class),
        passed,
        body: Body { validation, sections },
    };
    let summary = if validation == CheckStatus::Fail {
        "FAIL: configuration fails validation".to_string()
    } else if passed {
        format!("PASS: {summary}")
    } else {
        format!("FAIL: {}", failed.join(", "))
    };
    Ok(Outcome { code: if passed { 0 } else { 1 }, output: render(&doc), summary })
}

pub fn realize_check(path: &Path, trials: usize, seed: u64, out: Option<String>) -> Result<Outcome> {
    let spec = RealizationSpec::load(path)?;
    let report = cross_check(&spec, trials, seed)?;
    let mut manifest = RunManifest::new("realize-check", &[path], out);
    manifest.config_hash = Some(config_hash(&spec.config));
    manifest.window = Some(spec.window);
    manifest.trials = Some(trials);
    manifest.seed = Some(seed);
    #[derive(Serialize)]
    struct Body<'a> {
        family: &'a str,
        realization: &'a blockforge_realize::CrossCheckReport,
    }
    let doc = Document {
        manifest: &manifest,
        config: Some(spec.name.clone()),
        class: Some(spec.config.class),
        passed: report.passed(),
        body: Body { family: spec.family.name(), realization: &report },
    };
    let summary = format!("{}: {} of {} pairs disagree", spec.name, report.mismatches, report.trials);
    Ok(Outcome { code: if report.passed() { 0 } else { 1 }, output: render(&doc), summary })
}

/// Collects reports into one document, in the order given. Exit code 0
/// iff every input report passed.
pub fn merge(paths: &[PathBuf], out: Option<String>) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for path in paths {
        let json = |source| CliError::Json { path: path.display().to_string(), source };
        let value: Value = serde_json::from_str(&read(path)?).map_err(json)?;
        let Some(passed) = value.get("passed").and_then(Value::as_bool).filter(|_| value.get("manifest").is_some())
        else {
            return Err(CliError::Usage(format!("{} is not a blockforge report", path.display())));
        };
        if !passed {
            failed.push(path.display().to_string());
        }
        reports.push(value);
    }
    let refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
    let manifest = RunManifest::new("report", &refs, out);
    #[derive(Serialize)]
    struct Body {
        failed: Vec<String>,
        reports: Vec<Value>,
    }
    let passed = failed.is_empty();
    let summary =
        if passed { format!("PASS: {} reports", reports.len()) } else { format!("FAIL: {}", failed.join(", ")) };
    let doc = Document { manifest: &manifest, config: None, class: None, passed, body: Body { failed, reports } };
    Ok(Outcome { code: if passed { 0 } else { 1 }, output: render(&doc), summary })
}
