//! JSON-lines reports and the human summary.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};
use splfr_core::rational::{to_f64, Rational};

use crate::error::CliError;

/// An exact rational with its decimal value alongside.
pub fn rat(r: &Rational) -> Value {
    json!({ "exact": r.to_string(), "decimal": to_f64(r) })
}

/// One report line: the result of a command plus everything needed to rerun it.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    pub pass: bool,
    pub result: Value,
    /// Lines of the human summary.
    pub summary: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "tool": "splfr",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "verdict": if self.pass { "pass" } else { "fail" },
            "result": self.result,
        })
    }
}

/// Where reports go: JSON lines or the human summary on stdout, and with
/// `--out`, a `<command>.jsonl` file as well.
pub struct Sink {
    pub json: bool,
    pub out: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, reports: &[Report]) -> Result<(), CliError> {
        let stdout = std::io::stdout();
        let mut stdout = stdout.lock();
        let stderr = std::io::stderr();
        let mut stderr = stderr.lock();
        let mut lines = String::new();
        for r in reports {
            let line = r.to_json().to_string();
            lines.push_str(&line);
            lines.push('\n');
            let human = if self.json { &mut stderr as &mut dyn Write } else { &mut stdout as &mut dyn Write };
            for s in &r.summary {
                let _ = writeln!(human, "{s}");
            }
            if self.json {
                let _ = writeln!(stdout, "{line}");
            }
        }
        if let (Some(dir), Some(first)) = (&self.out, reports.first()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let path = dir.join(format!("{}.jsonl", first.command.replace(' ', "-")));
            fs::write(&path, lines).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}
