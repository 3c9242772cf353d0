use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::{CheckReport, Config, Status};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub lambdas: [String; 3],
    pub effective_lambdas: [String; 3],
    pub n: usize,
    pub degree_bound: u32,
    pub checks: Vec<String>,
    pub budget: u64,
    pub breaks: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub summary: Summary,
    pub checks: Vec<CheckReport>,
    pub objects: Option<String>,
    pub wall_ms: u64,
}

impl Report {
    pub fn new(
        cfg: &Config,
        checks: Vec<CheckReport>,
        objects: Option<String>,
        wall_ms: u64,
    ) -> Report {
        let strs = |l: &[crate::field::Rational; 3]| {
            [l[0].to_string(), l[1].to_string(), l[2].to_string()]
        };
        let config = ConfigEcho {
            lambdas: strs(&cfg.lambdas),
            effective_lambdas: strs(&cfg.effective_lambdas()),
            n: cfg.n,
            degree_bound: cfg.degree_bound,
            checks: cfg.checks.clone(),
            budget: cfg.budget,
            breaks: cfg.breaks.iter().map(|b| b.to_string()).collect(),
        };
        let mut summary = Summary {
            total: checks.len(),
            ..Summary::default()
        };
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
                Status::Budget => summary.budget += 1,
            }
        }
        Report {
            schema_version: SCHEMA_VERSION,
            config,
            summary,
            checks,
            objects,
            wall_ms,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.id == id)
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Markdown => markdown(report),
    }
}

pub fn write_report(report: &Report, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, emit_report(report, format))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// The json value with every `wall_ms` field removed, for run-to-run comparison.
pub fn without_timing(json: &str) -> Result<Value> {
    fn strip(v: &mut Value) {
        match v {
            Value::Object(map) => {
                map.remove("wall_ms");
                map.values_mut().for_each(strip);
            }
            Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    let mut v: Value = serde_json::from_str(json).map_err(|e| Error::Io(e.to_string()))?;
    strip(&mut v);
    Ok(v)
}

fn markdown(r: &Report) -> String {
    let mut out = String::new();
    let c = &r.config;
    let _ = writeln!(out, "# A1 tower verification\n");
    let _ = writeln!(
        out,
        "lambdas = ({}), n = {}, degree bound = {}, budget = {}{}\n",
        c.effective_lambdas.join(", "),
        c.n,
        c.degree_bound,
        c.budget,
        if c.breaks.is_empty() {
            String::new()
        } else {
            format!(", faults: {}", c.breaks.join(", "))
        }
    );
    let s = &r.summary;
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} skipped, {} over budget\n",
        s.total, s.pass, s.fail, s.skipped, s.budget
    );
    if !r.checks.is_empty() {
        let _ = writeln!(out, "| id | check | claim | status | ms |");
        let _ = writeln!(out, "|----|-------|-------|--------|----|");
        for k in &r.checks {
            let status = match k.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
                Status::Budget => "budget",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                k.id,
                k.title,
                k.claim.replace('|', "\\|"),
                status,
                k.wall_ms
            );
        }
    }
    for k in r
        .checks
        .iter()
        .filter(|k| k.witness.is_some() || k.note.is_some())
    {
        let _ = writeln!(out, "\n## {}\n", k.id);
        if let Some(w) = &k.witness {
            let _ = writeln!(out, "```\n{w}\n```");
        }
        if let Some(n) = &k.note {
            let _ = writeln!(out, "{n}");
        }
    }
    if let Some(o) = &r.objects {
        let _ = writeln!(out, "\n## Objects\n\n```\n{o}\n```");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failing() -> CheckReport {
        CheckReport {
            id: "C8".into(),
            title: "t".into(),
            claim: "c".into(),
            status: Status::Fail,
            witness: Some("V1 keeps (1, 0)".into()),
            note: None,
            evidence: None,
            wall_ms: 7,
        }
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(&Config::default(), Vec::new(), None, 0);
        let v: Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["summary"]["total"], 0);
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert!(emit_report(&r, Format::Markdown).contains("0 checks"));
    }

    #[test]
    fn witness_is_verbatim() {
        let r = Report::new(&Config::default(), vec![failing()], None, 3);
        assert!(emit_report(&r, Format::Markdown).contains("V1 keeps (1, 0)"));
        let json = emit_report(&r, Format::Json);
        assert!(json.contains("V1 keeps (1, 0)"));
        let stripped = without_timing(&json).unwrap();
        assert!(stripped["checks"][0].get("wall_ms").is_none());
        assert!(stripped.get("wall_ms").is_none());
        assert!(!r.all_pass());
    }

    #[test]
    fn field_order_is_stable() {
        let r = Report::new(&Config::default(), vec![failing()], None, 3);
        let json = emit_report(&r, Format::Json);
        let keys = [
            "schema_version",
            "config",
            "summary",
            "checks",
            "objects",
            "wall_ms",
        ];
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| json.find(&format!("\n  \"{k}\"")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}
