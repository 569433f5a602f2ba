use std::process::ExitCode;

use serde_json::{json, Value};

pub const SCHEMA: &str = "knotfloer.report/v1";

/// Result of one command, renderable as text or JSON.
pub struct Report {
    pub command: Value,
    pub input_digest: String,
    pub result: Value,
    pub warnings: Vec<String>,
    pub text: String,
    pub failed: bool,
}

impl Report {
    pub fn new(command: Value, input_digest: String, result: Value, text: String) -> Self {
        Self {
            command,
            input_digest,
            result,
            warnings: Vec::new(),
            text,
            failed: false,
        }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "schema": SCHEMA,
            "command": self.command,
            "input_digest": self.input_digest,
            "result": self.result,
            "warnings": self.warnings,
        });
        serde_json::to_string_pretty(&doc).expect("JSON values always serialize")
    }

    pub fn print(&self, json: bool) {
        if json {
            println!("{}", self.to_json());
        } else {
            print!("{}", self.text);
            for w in &self.warnings {
                eprintln!("warning: {w}");
            }
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.failed {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    }
}
