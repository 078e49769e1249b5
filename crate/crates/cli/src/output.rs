use std::io::Write;
use std::time::Duration;

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// One top-level object per invocation.
pub struct OutputRecord {
    pub command: &'static str,
    pub params: Value,
    pub payload: Value,
    pub timing: Option<Duration>,
}

impl OutputRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "params": self.params,
            "payload": self.payload,
        });
        if let Some(t) = self.timing {
            v["timing"] = json!({ "elapsed_ms": t.as_millis() as u64 });
        }
        v
    }

    pub fn print_json(&self) {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }

    /// Elapsed time goes to stderr for the non-JSON formats.
    pub fn log_timing(&self) {
        if let Some(t) = self.timing {
            eprintln!("{}: {} ms", self.command, t.as_millis());
        }
    }
}

/// A single pass/fail line of a verification report.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        Self {
            name: name.into(),
            pass: lhs == rhs,
            lhs,
            rhs,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "lhs": self.lhs, "rhs": self.rhs, "pass": self.pass })
    }
}

pub struct Report {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    /// Suite-specific extras (coefficient tables and so on).
    pub extra: Value,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "suite": self.suite,
            "all_pass": self.all_pass(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        });
        if !self.extra.is_null() {
            v["details"] = self.extra.clone();
        }
        v
    }

    pub fn print_table(&self) {
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.pass {
                println!("{tag}  {}: {}", c.name, c.lhs);
            } else {
                println!("{tag}  {}: {} != {}", c.name, c.lhs, c.rhs);
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        println!("{passed}/{} checks passed", self.checks.len());
    }

    pub fn print_csv(&self) {
        println!("name,lhs,rhs,pass");
        for c in &self.checks {
            println!(
                "\"{}\",{},{},{}",
                c.name.replace('"', "\"\""),
                c.lhs,
                c.rhs,
                c.pass
            );
        }
    }
}
