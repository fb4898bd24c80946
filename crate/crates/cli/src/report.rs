use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

/// Machine section plus a plain-text rendering. Timings appear only in the
/// text so that the JSON is byte-stable for a fixed seed.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub checks: Vec<CheckResult>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            checks: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), json!(v));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.outputs.insert(key.to_string(), json!(v));
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(CheckResult { name: name.to_string(), passed, detail: detail.into(), millis: 0 });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn machine(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "checks": self.checks,
            "passed": self.passed(),
        })
    }

    pub fn machine_text(&self) -> String {
        serde_json::to_string_pretty(&self.machine()).expect("serializable") + "\n"
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                let time = if c.millis > 0 { format!(" ({} ms)", c.millis) } else { String::new() };
                out.push_str(&format!("{verdict} {:width$}  {}{time}\n", c.name, c.detail));
            }
        }
        out
    }
}
