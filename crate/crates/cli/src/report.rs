use serde_json::{json, Value};
use std::fmt::Write;

pub const SCHEMA: &str = "hypo-report/1";

/// One check and its outcome.
#[derive(Clone, Debug)]
pub struct Record {
    pub algebra: String,
    pub structure: String,
    pub check: String,
    pub residuals: Vec<f64>,
    pub pass: bool,
    /// Extra command-specific fields, emitted under `detail`.
    pub detail: Value,
}

impl Record {
    pub fn new(
        algebra: impl Into<String>,
        structure: impl Into<String>,
        check: impl Into<String>,
    ) -> Self {
        Self {
            algebra: algebra.into(),
            structure: structure.into(),
            check: check.into(),
            residuals: Vec::new(),
            pass: true,
            detail: Value::Null,
        }
    }

    pub fn residuals(mut self, r: Vec<f64>) -> Self {
        // normalize -0.0 so reports do not depend on the sign of zero
        self.residuals = r.into_iter().map(|x| x + 0.0).collect();
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn detail(mut self, d: Value) -> Self {
        self.detail = d;
        self
    }

    fn verdict(&self) -> &'static str {
        if self.pass {
            "pass"
        } else {
            "fail"
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
    /// Human-readable body printed before the record lines.
    pub body: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            records: Vec::new(),
            body: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "algebra": r.algebra,
                    "structure": r.structure,
                    "check": r.check,
                    "residuals": r.residuals,
                    "verdict": r.verdict(),
                    "detail": r.detail,
                })
            })
            .collect();
        let v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "records": records,
        });
        serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = self.body.clone();
        for r in &self.records {
            let res: Vec<String> = r.residuals.iter().map(|x| format!("{x:.3e}")).collect();
            let target = match (r.algebra.is_empty(), r.structure.is_empty()) {
                (true, _) => String::new(),
                (false, true) => format!(" on {}", r.algebra),
                (false, false) => format!(" on {} [{}]", r.algebra, r.structure),
            };
            writeln!(
                out,
                "{}{target}: {} residuals [{}]",
                r.check,
                r.verdict(),
                res.join(", ")
            )
            .unwrap();
        }
        writeln!(
            out,
            "verdict: {}",
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}
