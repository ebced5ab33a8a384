//! Rendering of command results.

use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Summary,
    /// Summary lines followed by the full structured result.
    Full,
    /// Compact JSON only, byte-identical across identical runs.
    Machine,
}

/// A command's result: human lines, structured data and exit code.
pub struct Report {
    pub lines: Vec<String>,
    pub data: Value,
    pub code: u8,
}

impl Report {
    pub fn new(code: u8) -> Self {
        Report {
            lines: Vec::new(),
            data: Value::Null,
            code,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Writes the report to stdout; a closed pipe ends output quietly.
    pub fn print(&self, format: Format) {
        let mut out = std::io::stdout().lock();
        let text = match format {
            Format::Summary => self.lines.join("\n"),
            Format::Full => format!(
                "{}\n\n{}",
                self.lines.join("\n"),
                serde_json::to_string_pretty(&self.data).expect("report serializes")
            ),
            Format::Machine => serde_json::to_string(&self.data).expect("report serializes"),
        };
        let _ = writeln!(out, "{text}");
    }
}
